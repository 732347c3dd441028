//! Conforming triangulations of glued domains.
//!
//! Every tile carries the identical reference triangulation; the global
//! mesh identifies side nodes along gluings. Quotients by involutions are
//! taken at the mesh level: the induced vertex map is verified to be a
//! simplicial involution, triangle orbits are halved, and interior edges
//! whose adjacent triangles are swapped become `mirror` boundary edges.

use std::collections::{BTreeMap, HashMap};

use super::{dist, sub, cross, GluedDomain, Orientation, Point, TileSpec, TileSymmetry, GEOM_TOL};
use crate::error::{Error, Result};

/// Reference triangulation of a single tile.
#[derive(Debug, Clone)]
pub struct RefMesh {
    pub nodes: Vec<Point>,
    pub tris: Vec<[usize; 3]>,
    /// Per tile side, node ids ordered from side start to side end.
    pub side_nodes: Vec<Vec<usize>>,
    pub refinement: usize,
}

impl RefMesh {
    /// Triangulates the tile polygon and subdivides uniformly `refinement`
    /// times. Tiles with declared symmetries use a centroid fan (which the
    /// symmetries permute); others fall back to ear clipping.
    pub fn generate(tile: &TileSpec, refinement: usize) -> Result<Self> {
        if refinement == 0 {
            return Err(Error::MeshConstruction("refinement must be >= 1".into()));
        }
        let mut nodes = tile.vertices.clone();
        let n = nodes.len();
        let centroid = tile.vertex_centroid();
        let star_shaped = (0..n).all(|k| {
            let (a, b) = tile.side(k);
            cross(sub(b, a), sub(centroid, a)) > GEOM_TOL
        });
        let mut tris: Vec<[usize; 3]>;
        if star_shaped {
            nodes.push(centroid);
            tris = (0..n).map(|k| [n, k, (k + 1) % n]).collect();
        } else {
            if !tile.symmetries.is_empty() {
                return Err(Error::MeshConstruction(
                    "tile with declared symmetries must be star-shaped around its vertex centroid"
                        .into(),
                ));
            }
            tris = ear_clip(&nodes)?;
        }
        for _ in 0..refinement {
            tris = refine_once(&mut nodes, &tris);
        }

        let mut side_nodes = Vec::with_capacity(n);
        let segments = 1usize << refinement;
        for k in 0..n {
            let (a, b) = tile.side(k);
            let len = dist(a, b);
            let dir = sub(b, a);
            let mut on_side: Vec<(f64, usize)> = Vec::new();
            for (i, &p) in nodes.iter().enumerate() {
                let ap = sub(p, a);
                let off = cross(dir, ap).abs() / len;
                if off > 1e-9 * len.max(1.0) {
                    continue;
                }
                let t = (ap[0] * dir[0] + ap[1] * dir[1]) / (len * len);
                if (-1e-9..=1.0 + 1e-9).contains(&t) {
                    on_side.push((t, i));
                }
            }
            on_side.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            if on_side.len() != segments + 1 {
                return Err(Error::MeshConstruction(format!(
                    "side {k} carries {} nodes, expected {}",
                    on_side.len(),
                    segments + 1
                )));
            }
            for (i, (t, _)) in on_side.iter().enumerate() {
                let expected = i as f64 / segments as f64;
                if (t - expected).abs() > 1e-9 {
                    return Err(Error::MeshConstruction(format!(
                        "side {k} is not uniformly subdivided"
                    )));
                }
            }
            side_nodes.push(on_side.into_iter().map(|(_, i)| i).collect());
        }
        let mesh = RefMesh {
            nodes,
            tris,
            side_nodes,
            refinement,
        };
        for (t, tri) in mesh.tris.iter().enumerate() {
            if mesh.tri_signed_area(*tri) <= 0.0 {
                return Err(Error::MeshConstruction(format!("triangle {t} is degenerate")));
            }
        }
        Ok(mesh)
    }

    fn tri_signed_area(&self, tri: [usize; 3]) -> f64 {
        let [a, b, c] = tri.map(|i| self.nodes[i]);
        cross(sub(b, a), sub(c, a)) / 2.0
    }

    pub fn tri_area(&self, t: usize) -> f64 {
        self.tri_signed_area(self.tris[t])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.tris.len()).map(|t| self.tri_area(t)).sum()
    }

    /// Node permutation induced by a tile symmetry; errors when the
    /// symmetry does not stabilize the triangulation.
    pub fn symmetry_node_perm(&self, sym: &TileSymmetry) -> Result<Vec<usize>> {
        let n = self.nodes.len();
        let scale = self
            .nodes
            .iter()
            .map(|p| p[0].abs().max(p[1].abs()))
            .fold(1.0f64, f64::max);
        let tol = 1e-7 * scale;
        let mut perm = vec![usize::MAX; n];
        let mut taken = vec![false; n];
        for (i, &p) in self.nodes.iter().enumerate() {
            let q = sym.apply(p);
            let mut best = usize::MAX;
            let mut best_d = tol;
            for (j, &r) in self.nodes.iter().enumerate() {
                if taken[j] {
                    continue;
                }
                let d = dist(q, r);
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
            if best == usize::MAX {
                return Err(Error::MeshConstruction(format!(
                    "tile symmetry does not stabilize the reference mesh at node {i}"
                )));
            }
            perm[i] = best;
            taken[best] = true;
        }
        // Triangles must map to triangles.
        let tri_set: std::collections::BTreeSet<[usize; 3]> =
            self.tris.iter().map(|t| sorted3(*t)).collect();
        for tri in &self.tris {
            let image = sorted3(tri.map(|v| perm[v]));
            if !tri_set.contains(&image) {
                return Err(Error::MeshConstruction(
                    "tile symmetry does not stabilize the reference triangulation".into(),
                ));
            }
        }
        Ok(perm)
    }

    /// Triangle index map induced by a node permutation.
    pub fn symmetry_tri_map(&self, node_perm: &[usize]) -> Result<Vec<usize>> {
        let index: BTreeMap<[usize; 3], usize> = self
            .tris
            .iter()
            .enumerate()
            .map(|(i, t)| (sorted3(*t), i))
            .collect();
        self.tris
            .iter()
            .map(|t| {
                index
                    .get(&sorted3(t.map(|v| node_perm[v])))
                    .copied()
                    .ok_or_else(|| {
                        Error::MeshConstruction("node permutation does not permute triangles".into())
                    })
            })
            .collect()
    }
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

fn refine_once(nodes: &mut Vec<Point>, tris: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out = Vec::with_capacity(tris.len() * 4);
    let mut mid = |a: usize, b: usize, nodes: &mut Vec<Point>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoint.entry(key).or_insert_with(|| {
            let p = nodes[key.0];
            let q = nodes[key.1];
            nodes.push([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]);
            nodes.len() - 1
        })
    };
    for &[a, b, c] in tris {
        let ab = mid(a, b, nodes);
        let bc = mid(b, c, nodes);
        let ca = mid(c, a, nodes);
        out.push([a, ab, ca]);
        out.push([b, bc, ab]);
        out.push([c, ca, bc]);
        out.push([ab, bc, ca]);
    }
    out
}

/// Ear-clipping triangulation of a simple counterclockwise polygon.
fn ear_clip(nodes: &[Point]) -> Result<Vec<[usize; 3]>> {
    let n = nodes.len();
    let mut ring: Vec<usize> = (0..n).collect();
    let mut tris = Vec::with_capacity(n - 2);
    let mut guard = 0;
    while ring.len() > 3 {
        guard += 1;
        if guard > n * n + 16 {
            return Err(Error::MeshConstruction("ear clipping failed to terminate".into()));
        }
        let m = ring.len();
        let mut clipped = false;
        for i in 0..m {
            let prev = ring[(i + m - 1) % m];
            let cur = ring[i];
            let next = ring[(i + 1) % m];
            let (a, b, c) = (nodes[prev], nodes[cur], nodes[next]);
            if cross(sub(b, a), sub(c, a)) <= GEOM_TOL {
                continue; // reflex or degenerate corner
            }
            let contains_other = ring.iter().any(|&j| {
                if j == prev || j == cur || j == next {
                    return false;
                }
                point_in_triangle(nodes[j], a, b, c)
            });
            if contains_other {
                continue;
            }
            tris.push([prev, cur, next]);
            ring.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(Error::MeshConstruction("polygon admits no ear".into()));
        }
    }
    tris.push([ring[0], ring[1], ring[2]]);
    Ok(tris)
}

fn point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    let d1 = cross(sub(b, a), sub(p, a));
    let d2 = cross(sub(c, b), sub(p, b));
    let d3 = cross(sub(a, c), sub(p, c));
    d1 > -GEOM_TOL && d2 > -GEOM_TOL && d3 > -GEOM_TOL
}

/// One boundary edge of the global mesh.
#[derive(Debug, Clone)]
pub struct BoundaryEdge {
    /// Global vertex ids.
    pub v: [usize; 2],
    pub len: f64,
    /// Index into [`Mesh::classes`].
    pub class: usize,
    pub tile: usize,
    /// Tile side, or `usize::MAX` for mirror edges.
    pub side: usize,
}

/// Reserved class name for involution-fixed chords.
pub const MIRROR_CLASS: &str = "mirror";

/// A conforming mesh of a glued domain.
///
/// Geometry lives in per-tile charts: every tile carries the identical
/// reference triangulation, so triangle coordinates are always reference
/// coordinates and per-tile element contributions are bit-identical.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub ref_mesh: RefMesh,
    /// Number of covering tiles (quotients keep covering tile indices).
    pub tile_count: usize,
    /// `[tile][ref_node] -> global vertex`; total, also on dropped halves.
    pub node_global: Vec<Vec<usize>>,
    pub vertex_count: usize,
    /// One (tile, ref node) incarnation per global vertex.
    pub vertex_rep: Vec<(usize, usize)>,
    /// Kept triangles as (tile, ref triangle).
    pub triangles: Vec<(usize, usize)>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub classes: Vec<String>,
    /// For quotient meshes: class-id pairs identified by the involution.
    pub class_pairing: Option<Vec<(usize, usize)>>,
    pub refinement: usize,
}

impl Mesh {
    pub fn class_id(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == name)
    }

    pub fn vertex_coord(&self, v: usize) -> Point {
        let (_, n) = self.vertex_rep[v];
        self.ref_mesh.nodes[n]
    }

    pub fn tri_nodes(&self, idx: usize) -> [usize; 3] {
        let (tile, rt) = self.triangles[idx];
        self.ref_mesh.tris[rt].map(|n| self.node_global[tile][n])
    }

    pub fn total_area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&(_, rt)| self.ref_mesh.tri_area(rt))
            .sum()
    }

    pub fn total_boundary_length(&self) -> f64 {
        self.boundary_edges.iter().map(|e| e.len).sum()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        let push = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
            if !adj[a].contains(&b) {
                adj[a].push(b);
            }
        };
        for idx in 0..self.triangles.len() {
            let [a, b, c] = self.tri_nodes(idx);
            for (x, y) in [(a, b), (b, c), (c, a)] {
                push(x, y, &mut adj);
                push(y, x, &mut adj);
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }

    /// Graph diameter of the vertex adjacency graph.
    pub fn combinatorial_diameter(&self) -> Result<usize> {
        let adj = self.adjacency();
        let n = self.vertex_count;
        let mut diameter = 0;
        let mut dist = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[start] = 0;
            queue.clear();
            queue.push_back(start);
            let mut reached = 1;
            let mut far = 0;
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        far = far.max(dist[w]);
                        reached += 1;
                        queue.push_back(w);
                    }
                }
            }
            if reached != n {
                return Err(Error::DisconnectedMesh);
            }
            diameter = diameter.max(far);
        }
        Ok(diameter)
    }

    /// Connected components of the boundary graph with their total lengths,
    /// sorted by length descending then size.
    pub fn boundary_components(&self) -> Vec<(f64, Vec<usize>)> {
        let m = self.boundary_edges.len();
        let mut vert_edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, e) in self.boundary_edges.iter().enumerate() {
            vert_edges.entry(e.v[0]).or_default().push(i);
            vert_edges.entry(e.v[1]).or_default().push(i);
        }
        let mut comp = vec![usize::MAX; m];
        let mut components = Vec::new();
        for start in 0..m {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut edges = Vec::new();
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(e) = stack.pop() {
                edges.push(e);
                for v in self.boundary_edges[e].v {
                    for &f in &vert_edges[&v] {
                        if comp[f] == usize::MAX {
                            comp[f] = id;
                            stack.push(f);
                        }
                    }
                }
            }
            edges.sort_unstable();
            let len: f64 = edges.iter().map(|&e| self.boundary_edges[e].len).sum();
            components.push((len, edges));
        }
        components.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(b.1.len().cmp(&a.1.len())));
        components
    }

    /// Plain-text export: vertices with chart ids, triangles, tagged
    /// boundary edges.
    pub fn render(&self) -> String {
        let mut out = format!("vertices {}\n", self.vertex_count);
        for v in 0..self.vertex_count {
            let (tile, _) = self.vertex_rep[v];
            let p = self.vertex_coord(v);
            out.push_str(&format!("{v} {tile} {:.17e} {:.17e}\n", p[0], p[1]));
        }
        out.push_str(&format!("triangles {}\n", self.triangles.len()));
        for idx in 0..self.triangles.len() {
            let (tile, _) = self.triangles[idx];
            let [a, b, c] = self.tri_nodes(idx);
            out.push_str(&format!("{tile} {a} {b} {c}\n"));
        }
        out.push_str(&format!("boundary {}\n", self.boundary_edges.len()));
        for e in &self.boundary_edges {
            out.push_str(&format!("{} {} {}\n", e.v[0], e.v[1], self.classes[e.class]));
        }
        out
    }

    /// Wraps a raw single-chart triangulation (oracle meshes, tests).
    pub fn from_single_chart(
        nodes: Vec<Point>,
        tris: Vec<[usize; 3]>,
        boundary: Vec<([usize; 2], String)>,
        refinement: usize,
    ) -> Self {
        let nv = nodes.len();
        let mut classes: Vec<String> = Vec::new();
        let boundary_edges = boundary
            .into_iter()
            .map(|(v, class)| {
                let class_id = classes.iter().position(|c| *c == class).unwrap_or_else(|| {
                    classes.push(class.clone());
                    classes.len() - 1
                });
                BoundaryEdge {
                    v,
                    len: dist(nodes[v[0]], nodes[v[1]]),
                    class: class_id,
                    tile: 0,
                    side: usize::MAX,
                }
            })
            .collect();
        let tri_count = tris.len();
        let ref_mesh = RefMesh {
            nodes,
            tris,
            side_nodes: Vec::new(),
            refinement,
        };
        Mesh {
            ref_mesh,
            tile_count: 1,
            node_global: vec![(0..nv).collect()],
            vertex_count: nv,
            vertex_rep: (0..nv).map(|n| (0, n)).collect(),
            triangles: (0..tri_count).map(|t| (0, t)).collect(),
            boundary_edges,
            classes,
            class_pairing: None,
            refinement,
        }
    }

    /// Layered polar mesh of the regular `n_rim`-gon inscribed in the unit
    /// circle: `2^(refinement+1)` concentric rings of `n_rim` nodes each.
    /// Near-unit aspect ratio at the rim, where Steklov eigenfunctions
    /// concentrate.
    pub fn disk_polar(n_rim: usize, refinement: usize) -> Mesh {
        let layers = 1usize << (refinement + 1);
        let mut nodes: Vec<Point> = vec![[0.0, 0.0]];
        for k in 1..=layers {
            let r = k as f64 / layers as f64;
            for j in 0..n_rim {
                let th = 2.0 * std::f64::consts::PI * j as f64 / n_rim as f64;
                nodes.push([r * th.cos(), r * th.sin()]);
            }
        }
        let id = |k: usize, j: usize| 1 + (k - 1) * n_rim + (j % n_rim);
        let mut tris = Vec::new();
        for j in 0..n_rim {
            tris.push([0, id(1, j), id(1, j + 1)]);
        }
        for k in 1..layers {
            for j in 0..n_rim {
                tris.push([id(k, j), id(k + 1, j), id(k + 1, j + 1)]);
                tris.push([id(k, j), id(k + 1, j + 1), id(k, j + 1)]);
            }
        }
        let boundary = (0..n_rim)
            .map(|j| ([id(layers, j), id(layers, j + 1)], "rim".to_string()))
            .collect();
        Mesh::from_single_chart(nodes, tris, boundary, refinement)
    }
}

/// Builds the conforming mesh of a glued domain; quotient domains produce
/// the orbit-space mesh with mirror boundary edges.
pub fn build_mesh(domain: &GluedDomain, refinement: usize) -> Result<Mesh> {
    let ref_mesh = RefMesh::generate(&domain.tile, refinement)?;
    // Every declared symmetry must stabilize the reference triangulation.
    let mut node_perms = Vec::new();
    for sym in &domain.tile.symmetries {
        node_perms.push(ref_mesh.symmetry_node_perm(sym)?);
    }

    let nn = ref_mesh.nodes.len();
    let total = domain.tile_count * nn;
    let mut uf = UnionFind::new(total);
    for g in &domain.gluings {
        let na = &ref_mesh.side_nodes[g.a.1];
        let nb = &ref_mesh.side_nodes[g.b.1];
        let m = na.len();
        for k in 0..m {
            let kb = match g.orientation {
                Orientation::Direct => k,
                Orientation::Reversed => m - 1 - k,
            };
            uf.union(g.a.0 * nn + na[k], g.b.0 * nn + nb[kb]);
        }
    }
    let mut global_of_root: HashMap<usize, usize> = HashMap::new();
    let mut vertex_rep: Vec<(usize, usize)> = Vec::new();
    let mut node_global = vec![vec![usize::MAX; nn]; domain.tile_count];
    for tile in 0..domain.tile_count {
        for n in 0..nn {
            let root = uf.find(tile * nn + n);
            let next = global_of_root.len();
            let id = *global_of_root.entry(root).or_insert(next);
            if id == vertex_rep.len() {
                vertex_rep.push((tile, n));
            }
            node_global[tile][n] = id;
        }
    }
    let vertex_count = vertex_rep.len();

    let triangles: Vec<(usize, usize)> = (0..domain.tile_count)
        .flat_map(|t| (0..ref_mesh.tris.len()).map(move |rt| (t, rt)))
        .collect();

    let mut classes: Vec<String> = Vec::new();
    let mut boundary_edges = Vec::new();
    for piece in &domain.boundary {
        let class_id = classes
            .iter()
            .position(|c| *c == piece.class)
            .unwrap_or_else(|| {
                classes.push(piece.class.clone());
                classes.len() - 1
            });
        let nodes = &ref_mesh.side_nodes[piece.side];
        for w in nodes.windows(2) {
            boundary_edges.push(BoundaryEdge {
                v: [
                    node_global[piece.tile][w[0]],
                    node_global[piece.tile][w[1]],
                ],
                len: dist(ref_mesh.nodes[w[0]], ref_mesh.nodes[w[1]]),
                class: class_id,
                tile: piece.tile,
                side: piece.side,
            });
        }
    }

    let mesh = Mesh {
        ref_mesh,
        tile_count: domain.tile_count,
        node_global,
        vertex_count,
        vertex_rep,
        triangles,
        boundary_edges,
        classes,
        class_pairing: None,
        refinement,
    };

    match &domain.quotient {
        None => Ok(mesh),
        Some(q) => {
            let sym = &domain.tile.symmetries[q.symmetry];
            let node_perm = &node_perms[q.symmetry];
            let tri_map = mesh.ref_mesh.symmetry_tri_map(node_perm)?;
            let _ = sym;
            quotient_mesh(&mesh, &q.tile_perm, node_perm, &tri_map)
        }
    }
}

/// Quotients a full mesh by the involution (tile permutation, reference
/// node permutation).
fn quotient_mesh(
    full: &Mesh,
    tile_perm: &[usize],
    node_perm: &[usize],
    tri_map: &[usize],
) -> Result<Mesh> {
    let nn = full.ref_mesh.nodes.len();
    // Induced vertex map; must be well-defined over all incarnations.
    let mut beta = vec![usize::MAX; full.vertex_count];
    for tile in 0..full.tile_count {
        for n in 0..nn {
            let g = full.node_global[tile][n];
            let img = full.node_global[tile_perm[tile]][node_perm[n]];
            if beta[g] == usize::MAX {
                beta[g] = img;
            } else if beta[g] != img {
                return Err(Error::IncompatibleInvolution(
                    "involution is not well-defined on identified vertices".into(),
                ));
            }
        }
    }
    for v in 0..full.vertex_count {
        if beta[beta[v]] != v {
            return Err(Error::IncompatibleInvolution("vertex map is not an involution".into()));
        }
    }

    // Triangle orbit structure.
    let tri_index: BTreeMap<(usize, usize), usize> = full
        .triangles
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, i))
        .collect();
    let mut tri_partner = vec![usize::MAX; full.triangles.len()];
    for (i, &(tile, rt)) in full.triangles.iter().enumerate() {
        let image = (tile_perm[tile], tri_map[rt]);
        let &j = tri_index.get(&image).ok_or_else(|| {
            Error::IncompatibleInvolution("triangle maps outside the triangle set".into())
        })?;
        if j == i {
            return Err(Error::IncompatibleInvolution(
                "involution fixes a triangle (fixed locus crosses triangle interiors)".into(),
            ));
        }
        // Vertex sets must correspond under the vertex map.
        let mut a = full.tri_nodes(i).map(|v| beta[v]);
        let mut b = full.tri_nodes(j);
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::IncompatibleInvolution(
                "triangle map and vertex map disagree".into(),
            ));
        }
        tri_partner[i] = j;
    }

    // Mirror edges: interior edges whose two adjacent triangles are swapped.
    let mut edge_tris: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for i in 0..full.triangles.len() {
        let [a, b, c] = full.tri_nodes(i);
        for (x, y) in [(a, b), (b, c), (c, a)] {
            edge_tris.entry((x.min(y), x.max(y))).or_default().push(i);
        }
    }
    let boundary_pairs: BTreeMap<(usize, usize), usize> = full
        .boundary_edges
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.v[0].min(e.v[1]), e.v[0].max(e.v[1])), i))
        .collect();
    let mut mirror_edges: Vec<(usize, usize)> = Vec::new();
    for (&(u, v), tris) in &edge_tris {
        if tris.len() == 2 && tri_partner[tris[0]] == tris[1] {
            if beta[u] != u || beta[v] != v {
                return Err(Error::IncompatibleInvolution(
                    "an edge crosses the fixed locus transversally".into(),
                ));
            }
            if boundary_pairs.contains_key(&(u, v)) {
                return Err(Error::IncompatibleInvolution(
                    "fixed locus overlaps the free boundary".into(),
                ));
            }
            mirror_edges.push((u, v));
        }
    }

    // Boundary edge orbits.
    let mut edge_partner = vec![usize::MAX; full.boundary_edges.len()];
    let mut pairing: Vec<(usize, usize)> = Vec::new();
    for (i, e) in full.boundary_edges.iter().enumerate() {
        let img = (
            beta[e.v[0]].min(beta[e.v[1]]),
            beta[e.v[0]].max(beta[e.v[1]]),
        );
        let &j = boundary_pairs.get(&img).ok_or_else(|| {
            Error::IncompatibleInvolution("boundary edge maps outside the boundary".into())
        })?;
        if j == i {
            return Err(Error::IncompatibleInvolution(
                "involution fixes a boundary edge pointwise".into(),
            ));
        }
        edge_partner[i] = j;
        let (ca, cb) = (e.class, full.boundary_edges[j].class);
        let pair = (ca.min(cb), ca.max(cb));
        if !pairing.contains(&pair) {
            pairing.push(pair);
        }
    }
    // The pairing must be an involution on classes.
    {
        let mut partner: BTreeMap<usize, usize> = BTreeMap::new();
        for &(a, b) in &pairing {
            for (x, y) in [(a, b), (b, a)] {
                if let Some(&prev) = partner.get(&x) {
                    if prev != y {
                        return Err(Error::IncompatibleInvolution(format!(
                            "class `{}` pairs with both `{}` and `{}`",
                            full.classes[x], full.classes[prev], full.classes[y]
                        )));
                    }
                } else {
                    partner.insert(x, y);
                }
            }
        }
    }

    // Quotient vertices: orbit representatives in old-id order.
    let mut qid = vec![usize::MAX; full.vertex_count];
    let mut vertex_rep = Vec::new();
    let mut count = 0;
    for v in 0..full.vertex_count {
        let rep = v.min(beta[v]);
        if qid[rep] == usize::MAX {
            qid[rep] = count;
            vertex_rep.push(full.vertex_rep[rep]);
            count += 1;
        }
        qid[v] = qid[rep];
    }
    let node_global: Vec<Vec<usize>> = full
        .node_global
        .iter()
        .map(|row| row.iter().map(|&g| qid[g]).collect())
        .collect();

    let triangles: Vec<(usize, usize)> = full
        .triangles
        .iter()
        .enumerate()
        .filter(|&(i, _)| i <= tri_partner[i])
        .map(|(_, &t)| t)
        .collect();

    let mut classes = full.classes.clone();
    let mirror_class = classes.iter().position(|c| c == MIRROR_CLASS).unwrap_or_else(|| {
        classes.push(MIRROR_CLASS.to_string());
        classes.len() - 1
    });

    let mut boundary_edges: Vec<BoundaryEdge> = full
        .boundary_edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i <= edge_partner[i])
        .map(|(_, e)| BoundaryEdge {
            v: [qid[e.v[0]], qid[e.v[1]]],
            len: e.len,
            class: e.class,
            tile: e.tile,
            side: e.side,
        })
        .collect();
    for (u, v) in mirror_edges {
        // Length from representative coordinates (both on the fixed locus
        // of an isometry, so either incarnation gives the same length).
        let pu = full.vertex_coord(u);
        let pv = full.vertex_coord(v);
        boundary_edges.push(BoundaryEdge {
            v: [qid[u], qid[v]],
            len: dist(pu, pv),
            class: mirror_class,
            tile: full.vertex_rep[u].0,
            side: usize::MAX,
        });
    }

    Ok(Mesh {
        ref_mesh: full.ref_mesh.clone(),
        tile_count: full.tile_count,
        node_global,
        vertex_count: count,
        vertex_rep,
        triangles,
        boundary_edges,
        classes,
        class_pairing: Some(pairing),
        refinement: full.refinement,
    })
}

/// Vertex map `src → dst` induced by a tile map and a reference-node
/// permutation, verified to be a simplicial isomorphism.
///
/// Used for deck transformations (`src == dst`, left multiplication on
/// tiles) and for isometries conjugating the two members of a pair.
pub fn induced_vertex_iso(
    src: &Mesh,
    dst: &Mesh,
    tile_map: &[usize],
    node_perm: &[usize],
) -> Result<Vec<usize>> {
    let nn = src.ref_mesh.nodes.len();
    if dst.ref_mesh.nodes.len() != nn
        || tile_map.len() != src.tile_count
        || node_perm.len() != nn
        || src.vertex_count != dst.vertex_count
    {
        return Err(Error::MeshConstruction("incompatible meshes for induced map".into()));
    }
    let mut map = vec![usize::MAX; src.vertex_count];
    for tile in 0..src.tile_count {
        for n in 0..nn {
            let v = src.node_global[tile][n];
            let img = dst.node_global[tile_map[tile]][node_perm[n]];
            if map[v] == usize::MAX {
                map[v] = img;
            } else if map[v] != img {
                return Err(Error::MeshConstruction(
                    "induced map is not well-defined on identified vertices".into(),
                ));
            }
        }
    }
    let mut seen = vec![false; dst.vertex_count];
    for &v in &map {
        if v == usize::MAX || seen[v] {
            return Err(Error::MeshConstruction("induced map is not a bijection".into()));
        }
        seen[v] = true;
    }
    let dst_tris: std::collections::BTreeSet<[usize; 3]> = (0..dst.triangles.len())
        .map(|i| sorted3(dst.tri_nodes(i)))
        .collect();
    for i in 0..src.triangles.len() {
        let image = sorted3(src.tri_nodes(i).map(|v| map[v]));
        if !dst_tris.contains(&image) {
            return Err(Error::MeshConstruction(
                "induced map does not send triangles to triangles".into(),
            ));
        }
    }
    Ok(map)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

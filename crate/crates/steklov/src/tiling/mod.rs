//! Tiles, glued domains, and involution quotients.
//!
//! A [`TileSpec`] is a simple polygon whose boundary edges carry either a
//! glue label (generator and sign) or a free boundary-class tag, plus a list
//! of declared self-isometries. A [`GluedDomain`] places one copy of the
//! tile per index and identifies sides in pairs; built from a Schreier
//! graph this realizes the tiled surface whose tile `Hg` glues its `s` side
//! to the `s⁻¹` side of tile `Hgs`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::schreier::ColoredGraph;

pub mod builders;
pub mod io;
pub mod mesh;

pub use mesh::{BoundaryEdge, Mesh, RefMesh};

pub type Point = [f64; 2];

pub(crate) const GEOM_TOL: f64 = 1e-9;

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Label of one straight boundary segment of a tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideLabel {
    /// Glued side: the `sign = +1` side is `s`, the `sign = -1` side `s⁻¹`.
    Glue { color: String, sign: i8 },
    /// Free boundary segment with a boundary-class tag.
    Free { class: String },
}

impl SideLabel {
    pub fn glue(color: &str, sign: i8) -> Self {
        SideLabel::Glue {
            color: color.to_string(),
            sign,
        }
    }

    pub fn free(class: &str) -> Self {
        SideLabel::Free {
            class: class.to_string(),
        }
    }
}

/// A plane isometry mapping the tile onto itself, with its induced action
/// on sides.
#[derive(Debug, Clone)]
pub struct TileSymmetry {
    /// Affine rows: `x' = m[0][0] x + m[0][1] y + m[0][2]`, same for `y'`.
    pub map: [[f64; 3]; 2],
    /// Induced permutation of side indices.
    pub side_perm: Vec<usize>,
    /// Whether the isometry reverses orientation (a reflection).
    pub reverses: bool,
}

impl TileSymmetry {
    pub fn apply(&self, p: Point) -> Point {
        [
            self.map[0][0] * p[0] + self.map[0][1] * p[1] + self.map[0][2],
            self.map[1][0] * p[0] + self.map[1][1] * p[1] + self.map[1][2],
        ]
    }

    /// Whether the symmetry squares to the identity map.
    pub fn is_involutive(&self) -> bool {
        let probes = [[0.3, 0.1], [1.7, 2.9], [-0.4, 1.3]];
        probes
            .iter()
            .all(|&p| dist(self.apply(self.apply(p)), p) < GEOM_TOL)
    }

    pub fn is_identity(&self) -> bool {
        let probes = [[0.3, 0.1], [1.7, 2.9]];
        probes.iter().all(|&p| dist(self.apply(p), p) < GEOM_TOL)
    }
}

/// A labeled polygonal tile.
#[derive(Debug, Clone)]
pub struct TileSpec {
    /// Polygon vertices in counterclockwise order; side `k` runs from
    /// vertex `k` to vertex `k + 1 (mod n)`.
    pub vertices: Vec<Point>,
    pub labels: Vec<SideLabel>,
    pub symmetries: Vec<TileSymmetry>,
}

impl TileSpec {
    pub fn new(vertices: Vec<Point>, labels: Vec<SideLabel>, maps: Vec<[[f64; 3]; 2]>) -> Result<Self> {
        if vertices.len() < 3 || labels.len() != vertices.len() {
            return Err(Error::InvalidTile("need one label per polygon side".into()));
        }
        let mut tile = TileSpec {
            vertices,
            labels,
            symmetries: Vec::new(),
        };
        if tile.signed_area() <= 0.0 {
            return Err(Error::InvalidTile("polygon must be counterclockwise".into()));
        }
        if !tile.is_simple() {
            return Err(Error::InvalidTile("polygon is self-intersecting".into()));
        }
        tile.validate_glue_labels()?;
        for map in maps {
            let sym = tile.symmetry_from_map(map)?;
            tile.symmetries.push(sym);
        }
        Ok(tile)
    }

    pub fn side_count(&self) -> usize {
        self.vertices.len()
    }

    /// Endpoints of side `k` in boundary order.
    pub fn side(&self, k: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[k], self.vertices[(k + 1) % n])
    }

    pub fn side_length(&self, k: usize) -> f64 {
        let (a, b) = self.side(k);
        dist(a, b)
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut s = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            s += cross(a, b);
        }
        s / 2.0
    }

    /// Centroid of the vertex set (fixed by every tile symmetry).
    pub fn vertex_centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let mut c = [0.0, 0.0];
        for v in &self.vertices {
            c[0] += v[0] / n;
            c[1] += v[1] / n;
        }
        c
    }

    /// Glue side index for a given color and sign, if present.
    pub fn glue_side(&self, color: &str, sign: i8) -> Option<usize> {
        self.labels.iter().position(|l| {
            matches!(l, SideLabel::Glue { color: c, sign: s } if c == color && *s == sign)
        })
    }

    /// Distinct glue colors in side order.
    pub fn glue_colors(&self) -> Vec<String> {
        let mut colors = Vec::new();
        for l in &self.labels {
            if let SideLabel::Glue { color, .. } = l {
                if !colors.contains(color) {
                    colors.push(color.clone());
                }
            }
        }
        colors
    }

    /// Free class names in side order.
    pub fn free_classes(&self) -> Vec<String> {
        let mut classes = Vec::new();
        for l in &self.labels {
            if let SideLabel::Free { class } = l {
                if !classes.contains(class) {
                    classes.push(class.clone());
                }
            }
        }
        classes
    }

    fn validate_glue_labels(&self) -> Result<()> {
        let mut by_color: BTreeMap<&str, [Vec<usize>; 2]> = BTreeMap::new();
        for (k, l) in self.labels.iter().enumerate() {
            if let SideLabel::Glue { color, sign } = l {
                let entry = by_color.entry(color).or_default();
                entry[if *sign > 0 { 0 } else { 1 }].push(k);
            }
        }
        for (color, [plus, minus]) in by_color {
            if plus.len() != 1 || minus.len() != 1 {
                return Err(Error::InvalidTile(format!(
                    "color `{color}` must have exactly one + side and one - side"
                )));
            }
            let lp = self.side_length(plus[0]);
            let lm = self.side_length(minus[0]);
            if (lp - lm).abs() > 1e-12 * lp.max(lm).max(1.0) {
                return Err(Error::SideLengthMismatch(lp, lm));
            }
        }
        Ok(())
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let (a1, a2) = self.side(i);
            for j in (i + 1)..n {
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue; // adjacent sides share a vertex
                }
                let (b1, b2) = self.side(j);
                if segments_intersect(a1, a2, b1, b2) {
                    return false;
                }
            }
        }
        true
    }

    fn symmetry_from_map(&self, map: [[f64; 3]; 2]) -> Result<TileSymmetry> {
        let lin = [[map[0][0], map[0][1]], [map[1][0], map[1][1]]];
        let det = lin[0][0] * lin[1][1] - lin[0][1] * lin[1][0];
        let orthonormal = (lin[0][0].powi(2) + lin[1][0].powi(2) - 1.0).abs() < GEOM_TOL
            && (lin[0][1].powi(2) + lin[1][1].powi(2) - 1.0).abs() < GEOM_TOL
            && (lin[0][0] * lin[0][1] + lin[1][0] * lin[1][1]).abs() < GEOM_TOL;
        if !orthonormal {
            return Err(Error::InvalidTile("symmetry map is not an isometry".into()));
        }
        let sym = TileSymmetry {
            map,
            side_perm: Vec::new(),
            reverses: det < 0.0,
        };
        // Induced side permutation by endpoint matching.
        let n = self.vertices.len();
        let mut side_perm = vec![usize::MAX; n];
        for k in 0..n {
            let (a, b) = self.side(k);
            let (ia, ib) = (sym.apply(a), sym.apply(b));
            let target = (0..n).find(|&m| {
                let (c, d) = self.side(m);
                (dist(ia, c) < GEOM_TOL && dist(ib, d) < GEOM_TOL)
                    || (dist(ia, d) < GEOM_TOL && dist(ib, c) < GEOM_TOL)
            });
            match target {
                Some(m) => side_perm[k] = m,
                None => {
                    return Err(Error::InvalidTile(format!(
                        "symmetry does not map side {k} onto a side"
                    )))
                }
            }
        }
        let mut seen = vec![false; n];
        for &m in &side_perm {
            if seen[m] {
                return Err(Error::InvalidTile("symmetry side map is not a bijection".into()));
            }
            seen[m] = true;
        }
        Ok(TileSymmetry { side_perm, ..sym })
    }
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(sub(p2, p1), sub(q1, p1));
    let d2 = cross(sub(p2, p1), sub(q2, p1));
    let d3 = cross(sub(q2, q1), sub(p1, q1));
    let d4 = cross(sub(q2, q1), sub(p2, q1));
    (d1 * d2 < -GEOM_TOL * GEOM_TOL) && (d3 * d4 < -GEOM_TOL * GEOM_TOL)
}

/// Node matching convention along a glued side pair.
///
/// `Reversed` matches the k-th node of one side to the (m-k)-th of the
/// other (translation-style gluing of sides traversed in boundary order);
/// `Direct` matches k-th to k-th (mirror doubling).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Orientation {
    Direct,
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gluing {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub orientation: Orientation,
}

/// A free boundary side of one tile copy with its class tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPiece {
    pub tile: usize,
    pub side: usize,
    pub class: String,
}

/// Involution data attached to a quotient domain: a tile permutation
/// combined with one declared tile symmetry, applied uniformly.
#[derive(Debug, Clone)]
pub struct InvolutionQuotient {
    pub tile_perm: Vec<usize>,
    /// Index into the tile's declared symmetry list.
    pub symmetry: usize,
}

/// A collection of tile copies with side identifications.
///
/// When `quotient` is set, the combinatorial fields describe the covering
/// complex and [`mesh::build_mesh`] produces the orbit space, turning fixed
/// chords of the involution into `mirror` boundary edges.
#[derive(Debug, Clone)]
pub struct GluedDomain {
    pub tile: TileSpec,
    pub tile_count: usize,
    pub gluings: Vec<Gluing>,
    pub boundary: Vec<BoundaryPiece>,
    pub quotient: Option<InvolutionQuotient>,
}

impl GluedDomain {
    pub fn from_parts(
        tile: TileSpec,
        tile_count: usize,
        gluings: Vec<Gluing>,
        boundary: Vec<BoundaryPiece>,
    ) -> Result<Self> {
        let domain = GluedDomain {
            tile,
            tile_count,
            gluings,
            boundary,
            quotient: None,
        };
        domain.validate()?;
        Ok(domain)
    }

    pub fn validate(&self) -> Result<()> {
        let sides = self.tile.side_count();
        let mut role = vec![0u8; self.tile_count * sides]; // 0 unused, 1 glued, 2 boundary
        let mut mark = |tile: usize, side: usize, r: u8| -> Result<()> {
            if tile >= self.tile_count || side >= sides {
                return Err(Error::InvalidDomain(format!("side ({tile}, {side}) out of range")));
            }
            let slot = &mut role[tile * sides + side];
            if *slot != 0 {
                return Err(Error::InvalidDomain(format!(
                    "side ({tile}, {side}) used more than once"
                )));
            }
            *slot = r;
            Ok(())
        };
        for g in &self.gluings {
            mark(g.a.0, g.a.1, 1)?;
            if g.a != g.b {
                mark(g.b.0, g.b.1, 1)?;
            } else {
                return Err(Error::InvalidDomain("side glued to itself".into()));
            }
            let la = self.tile.side_length(g.a.1);
            let lb = self.tile.side_length(g.b.1);
            if (la - lb).abs() > 1e-12 * la.max(lb).max(1.0) {
                return Err(Error::SideLengthMismatch(la, lb));
            }
        }
        for b in &self.boundary {
            mark(b.tile, b.side, 2)?;
        }
        for tile in 0..self.tile_count {
            for side in 0..sides {
                if role[tile * sides + side] == 0 {
                    return Err(Error::InvalidDomain(format!(
                        "side ({tile}, {side}) neither glued nor boundary"
                    )));
                }
            }
        }
        // Every Glue-labeled side must be glued; gluing Free-labeled sides
        // is allowed (mirror doublings in the direct constructions).
        for tile in 0..self.tile_count {
            for side in 0..sides {
                if matches!(self.tile.labels[side], SideLabel::Glue { .. })
                    && role[tile * sides + side] != 1
                {
                    return Err(Error::InvalidDomain(format!(
                        "glue side ({tile}, {side}) is not glued"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total free boundary length (covering complex).
    pub fn boundary_length(&self) -> f64 {
        self.boundary.iter().map(|b| self.tile.side_length(b.side)).sum()
    }
}

/// Assembles a surface by gluing one tile copy per graph vertex: the `s`
/// side of tile `v` is glued to the `s⁻¹` side of tile `succ_s(v)`.
pub fn build_surface(graph: &ColoredGraph, tile: &TileSpec) -> Result<GluedDomain> {
    let tile_colors = tile.glue_colors();
    if tile_colors != graph.colors {
        return Err(Error::LabelColorMismatch(format!(
            "tile colors {:?} vs graph colors {:?}",
            tile_colors, graph.colors
        )));
    }
    let mut gluings = Vec::new();
    for (c, color) in graph.colors.iter().enumerate() {
        let plus = tile
            .glue_side(color, 1)
            .ok_or_else(|| Error::LabelColorMismatch(format!("missing + side for `{color}`")))?;
        let minus = tile
            .glue_side(color, -1)
            .ok_or_else(|| Error::LabelColorMismatch(format!("missing - side for `{color}`")))?;
        for v in 0..graph.vertex_count {
            let w = graph.succ[c][v];
            gluings.push(Gluing {
                a: (v, plus),
                b: (w, minus),
                orientation: Orientation::Reversed,
            });
        }
    }
    let mut boundary = Vec::new();
    for v in 0..graph.vertex_count {
        for (k, l) in tile.labels.iter().enumerate() {
            if let SideLabel::Free { class } = l {
                boundary.push(BoundaryPiece {
                    tile: v,
                    side: k,
                    class: class.clone(),
                });
            }
        }
    }
    GluedDomain::from_parts(tile.clone(), graph.vertex_count, gluings, boundary)
}

/// Marks a domain as the quotient by an involution after checking the
/// combinatorial compatibility. The full geometric verification happens
/// when the mesh is built.
pub fn quotient_by_involution(
    domain: &GluedDomain,
    tile_perm: Vec<usize>,
    symmetry: usize,
) -> Result<GluedDomain> {
    if domain.quotient.is_some() {
        return Err(Error::IncompatibleInvolution("domain is already a quotient".into()));
    }
    if tile_perm.len() != domain.tile_count {
        return Err(Error::IncompatibleInvolution("tile permutation length mismatch".into()));
    }
    let sym = domain
        .tile
        .symmetries
        .get(symmetry)
        .ok_or_else(|| Error::IncompatibleInvolution("symmetry index out of range".into()))?;
    if !sym.is_involutive() {
        return Err(Error::IncompatibleInvolution("tile symmetry is not an involution".into()));
    }
    let perm_is_identity = tile_perm.iter().enumerate().all(|(i, &v)| i == v);
    if perm_is_identity && sym.is_identity() {
        return Err(Error::IncompatibleInvolution(
            "identity map is not an order-2 involution".into(),
        ));
    }
    for (i, &v) in tile_perm.iter().enumerate() {
        if v >= domain.tile_count || tile_perm[v] != i {
            return Err(Error::IncompatibleInvolution("tile permutation is not an involution".into()));
        }
    }
    if !sym.reverses {
        // A half-turn with a fixed tile would leave an isolated cone point.
        if tile_perm.iter().enumerate().any(|(i, &v)| i == v) {
            return Err(Error::IncompatibleInvolution(
                "rotational involution fixes a tile; only reflections may fix tiles".into(),
            ));
        }
    }
    // Gluings must map to gluings under (tile_perm, side_perm).
    let sp = &sym.side_perm;
    let normalize = |g: &Gluing| {
        let (x, y) = (g.a, g.b);
        if x <= y { (x, y, g.orientation) } else { (y, x, g.orientation) }
    };
    let glue_set: std::collections::BTreeSet<_> = domain.gluings.iter().map(&normalize).collect();
    for g in &domain.gluings {
        let image = Gluing {
            a: (tile_perm[g.a.0], sp[g.a.1]),
            b: (tile_perm[g.b.0], sp[g.b.1]),
            orientation: g.orientation,
        };
        if !glue_set.contains(&normalize(&image)) {
            return Err(Error::IncompatibleInvolution(format!(
                "gluing {:?} maps outside the gluing set",
                g
            )));
        }
    }
    // Boundary pieces must map to boundary pieces (classes may pair up).
    let bset: std::collections::BTreeSet<(usize, usize)> =
        domain.boundary.iter().map(|b| (b.tile, b.side)).collect();
    for b in &domain.boundary {
        if !bset.contains(&(tile_perm[b.tile], sp[b.side])) {
            return Err(Error::IncompatibleInvolution(format!(
                "boundary side ({}, {}) maps outside the boundary",
                b.tile, b.side
            )));
        }
    }
    let mut out = domain.clone();
    out.quotient = Some(InvolutionQuotient {
        tile_perm,
        symmetry,
    });
    Ok(out)
}

/// Searches for involutions of a glued-surface domain: pairs of an
/// involutive tile symmetry and a compatible tile permutation.
///
/// Candidates are propagated from the image of vertex 0 through the graph
/// structure, so the search space is (vertices × symmetries); each
/// candidate is then verified combinatorially.
pub fn find_involutions(graph: &ColoredGraph, domain: &GluedDomain) -> Vec<(Vec<usize>, usize)> {
    let tile = &domain.tile;
    let mut found = Vec::new();
    for (si, sym) in tile.symmetries.iter().enumerate() {
        if !sym.is_involutive() || sym.is_identity() {
            continue;
        }
        // Color step map: crossing the image of the `c`-plus side.
        let step: Option<Vec<(usize, i8)>> = graph
            .colors
            .iter()
            .map(|color| {
                let plus = tile.glue_side(color, 1)?;
                let image_side = sym.side_perm[plus];
                match &tile.labels[image_side] {
                    SideLabel::Glue { color: c2, sign } => {
                        let c2_idx = graph.colors.iter().position(|g| g == c2)?;
                        Some((c2_idx, *sign))
                    }
                    SideLabel::Free { .. } => None,
                }
            })
            .collect();
        let Some(step) = step else { continue };
        for target in 0..graph.vertex_count {
            if let Some(perm) = propagate_tile_map(graph, &step, target) {
                let is_involution = perm.iter().enumerate().all(|(i, &v)| perm[v] == i);
                if !is_involution {
                    continue;
                }
                if quotient_by_involution(domain, perm.clone(), si).is_ok() {
                    found.push((perm, si));
                }
            }
        }
    }
    found
}

/// Propagates `map(v·s) = step_s(map(v))` from `map(0) = target`, returning
/// the map when consistent.
pub(crate) fn propagate_tile_map(
    graph: &ColoredGraph,
    step: &[(usize, i8)],
    target: usize,
) -> Option<Vec<usize>> {
    let n = graph.vertex_count;
    let mut map = vec![usize::MAX; n];
    map[0] = target;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        for c in 0..graph.colors.len() {
            let w = graph.succ[c][v];
            let (c2, sign) = step[c];
            let image = if sign > 0 {
                graph.succ[c2][map[v]]
            } else {
                graph.pred(c2, map[v])
            };
            if map[w] == usize::MAX {
                map[w] = image;
                stack.push(w);
            } else if map[w] != image {
                return None;
            }
        }
    }
    if map.iter().any(|&v| v == usize::MAX) {
        return None; // disconnected graph
    }
    let mut seen = vec![false; n];
    for &v in &map {
        if seen[v] {
            return None;
        }
        seen[v] = true;
    }
    Some(map)
}

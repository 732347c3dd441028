//! Probe: search (a, b = gag, g) triples with different mesh diameters and
//! a separating reflection involution.

use std::collections::BTreeMap;

use steklov::groups::matf2;
use steklov::schreier::schreier_graph;
use steklov::tiling::builders::cross_tile;
use steklov::tiling::mesh::build_mesh;
use steklov::tiling::{build_surface, find_involutions, quotient_by_involution};

#[test]
fn probe_general_pairs() {
    let ctx = matf2::gl3_f2().unwrap();
    let g = &ctx.group;
    let n = g.order();
    let tile = cross_tile().unwrap();
    let involutions: Vec<usize> = (1..n).filter(|&x| g.mul(x, x) == 0).collect();
    println!("involutions: {}", involutions.len());
    let mut tested = 0;
    let mut hits = 0;
    'outer: for &swap in &involutions {
        for a in 1..n {
            let b = g.conjugate(swap, a);
            if b == a || b == 0 || b < a {
                continue;
            }
            let gen = steklov::groups::Subgroup::generated(g, &[a, b]);
            if gen.order() != n {
                continue;
            }
            tested += 1;
            let g1 = schreier_graph(g, &ctx.h1, &[a, b]).unwrap().with_colors(&["a", "b"]).unwrap();
            let g2 = schreier_graph(g, &ctx.h2, &[a, b]).unwrap().with_colors(&["a", "b"]).unwrap();
            // Uncolored undirected multigraph isomorphism by brute force.
            let adj = |gr: &steklov::schreier::ColoredGraph| -> Vec<Vec<usize>> {
                let mut m = vec![vec![0usize; 7]; 7];
                for s in &gr.succ {
                    for (v, &w) in s.iter().enumerate() {
                        m[v][w] += 1;
                        m[w][v] += 1;
                    }
                }
                m
            };
            let a1m = adj(&g1);
            let a2m = adj(&g2);
            let mut iso = false;
            let mut perm = [0usize; 7];
            let mut used = [false; 7];
            fn search(k: usize, perm: &mut [usize; 7], used: &mut [bool; 7], a1: &Vec<Vec<usize>>, a2: &Vec<Vec<usize>>) -> bool {
                if k == 7 { return true; }
                for c in 0..7 {
                    if used[c] { continue; }
                    let mut ok = a1[k][k] == a2[c][c];
                    if ok {
                        for j in 0..k {
                            if a1[k][j] != a2[c][perm[j]] { ok = false; break; }
                        }
                    }
                    if ok {
                        perm[k] = c;
                        used[c] = true;
                        if search(k + 1, perm, used, a1, a2) { return true; }
                        used[c] = false;
                    }
                }
                false
            }
            iso = search(0, &mut perm, &mut used, &a1m, &a2m);
            if iso {
                continue;
            }
            println!("NON-ISO pair a={a} b={b} swap={swap}");
            let d1 = build_surface(&g1, &tile).unwrap();
            let d2 = build_surface(&g2, &tile).unwrap();
            let mut diams = Vec::new();
            for r in 1..=3 {
                let m1 = build_mesh(&d1, r).unwrap();
                let m2 = build_mesh(&d2, r).unwrap();
                diams.push((
                    m1.combinatorial_diameter().unwrap(),
                    m2.combinatorial_diameter().unwrap(),
                ));
            }
            let (di1, di2) = diams[2];
            println!("  diams {diams:?}");
            if di1 == di2 {
                continue;
            }
            // Separating involution on both?
            let inv1 = find_involutions(&g1, &d1);
            let inv2 = find_involutions(&g2, &d2);
            let sep = |domain: &steklov::tiling::GluedDomain,
                       perm: &Vec<usize>,
                       sym: usize|
             -> bool {
                let q = match quotient_by_involution(domain, perm.clone(), sym) {
                    Ok(q) => q,
                    Err(_) => return false,
                };
                let full = build_mesh(domain, 1).unwrap();
                let qm = match build_mesh(&q, 1) {
                    Ok(m) => m,
                    Err(_) => return false,
                };
                // count fixed vertices -> separating iff removing mirror
                // edges splits triangles into 2 components
                let mut fiber: BTreeMap<usize, usize> = BTreeMap::new();
                let nn = full.ref_mesh.nodes.len();
                let mut seen = std::collections::BTreeSet::new();
                for t in 0..full.tile_count {
                    for node in 0..nn {
                        let fv = full.node_global[t][node];
                        if seen.insert(fv) {
                            *fiber.entry(qm.node_global[t][node]).or_insert(0) += 1;
                        }
                    }
                }
                let fixed: Vec<bool> = (0..full.vertex_count)
                    .map(|v| {
                        let (t, node) = full.vertex_rep[v];
                        fiber[&qm.node_global[t][node]] == 1
                    })
                    .collect();
                let mut edge_tris: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
                for i in 0..full.triangles.len() {
                    let [x, y, z] = full.tri_nodes(i);
                    for (u, v) in [(x, y), (y, z), (z, x)] {
                        edge_tris.entry((u.min(v), u.max(v))).or_default().push(i);
                    }
                }
                let mut adj: Vec<Vec<usize>> = vec![Vec::new(); full.triangles.len()];
                for (&(u, v), tris) in &edge_tris {
                    if tris.len() == 2 && !(fixed[u] && fixed[v]) {
                        adj[tris[0]].push(tris[1]);
                        adj[tris[1]].push(tris[0]);
                    }
                }
                let mut comp = vec![false; full.triangles.len()];
                let mut stack = vec![0usize];
                comp[0] = true;
                let mut size = 1;
                while let Some(t) = stack.pop() {
                    for &u in &adj[t] {
                        if !comp[u] {
                            comp[u] = true;
                            size += 1;
                            stack.push(u);
                        }
                    }
                }
                size * 2 == full.triangles.len()
            };
            let s1 = inv1.iter().filter(|(p, s)| sep(&d1, p, *s)).count();
            let s2 = inv2.iter().filter(|(p, s)| sep(&d2, p, *s)).count();
            hits += 1;
            println!(
                "a={a} ({}) b={b} ({}) swap={swap} ({})  diam r1 {di1}/{di2}  inv {}/{} separating {s1}/{s2}",
                matf2::label(ctx.matrix(a)),
                matf2::label(ctx.matrix(b)),
                matf2::label(ctx.matrix(swap)),
                inv1.len(),
                inv2.len(),
            );
            if hits >= 12 {
                break 'outer;
            }
        }
    }
    println!("tested {tested}, hits {hits}");
}

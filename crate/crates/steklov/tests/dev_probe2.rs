//! Probe: separating involutions and mesh diameters per generator choice.

use std::collections::BTreeSet;

use steklov::groups::matf2::{self, find_symmetric_generator_pairs};
use steklov::groups::{coset_action, Subgroup};
use steklov::schreier::schreier_graph;
use steklov::scene::SunadaScene;
use steklov::tiling::builders::cross_tile;
use steklov::tiling::mesh::build_mesh;
use steklov::tiling::{build_surface, find_involutions, quotient_by_involution, GluedDomain};

/// Number of triangle components of the full mesh after removing the
/// involution's fixed (mirror) edges.
fn separating_components(domain: &GluedDomain, perm: Vec<usize>, sym: usize) -> Option<usize> {
    let quotient = quotient_by_involution(domain, perm, sym).ok()?;
    let full = build_mesh(domain, 1).ok()?;
    let q = build_mesh(&quotient, 1).ok()?;
    // Mirror edges in quotient ids -> translate to full-mesh vertex pairs is
    // awkward; instead recompute: fixed vertices of the full mesh are those
    // whose quotient fiber has size 1.
    let mut fiber = vec![0usize; q.vertex_count];
    let nn = full.ref_mesh.nodes.len();
    let mut seen = BTreeSet::new();
    for t in 0..full.tile_count {
        for n in 0..nn {
            let fv = full.node_global[t][n];
            if seen.insert(fv) {
                fiber[q.node_global[t][n]] += 1;
            }
        }
    }
    let fixed: Vec<bool> = (0..full.vertex_count)
        .map(|v| {
            let (t, n) = full.vertex_rep[v];
            fiber[q.node_global[t][n]] == 1
        })
        .collect();
    // Triangle adjacency skipping edges with both endpoints fixed.
    let mut edge_tris: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for i in 0..full.triangles.len() {
        let [a, b, c] = full.tri_nodes(i);
        for (x, y) in [(a, b), (b, c), (c, a)] {
            edge_tris.entry((x.min(y), x.max(y))).or_default().push(i);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); full.triangles.len()];
    for (&(u, v), tris) in &edge_tris {
        if tris.len() == 2 && !(fixed[u] && fixed[v]) {
            adj[tris[0]].push(tris[1]);
            adj[tris[1]].push(tris[0]);
        }
    }
    let mut comp = vec![usize::MAX; full.triangles.len()];
    let mut count = 0;
    for s in 0..full.triangles.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(t) = stack.pop() {
            for &u in &adj[t] {
                if comp[u] == usize::MAX {
                    comp[u] = count;
                    stack.push(u);
                }
            }
        }
        count += 1;
    }
    Some(count)
}

#[test]
fn probe_involutions_and_diameters() {
    let scene = SunadaScene::new().unwrap();

    // All involutions of domain 1 and their separating status.
    let found = find_involutions(&scene.graph1, &scene.domain1);
    println!("involutions of domain1: {}", found.len());
    for (perm, sym) in &found {
        let comps = separating_components(&scene.domain1, perm.clone(), *sym);
        println!("  perm {perm:?} sym {sym} -> components {comps:?}");
    }

    // Diameters for the pinned pair at refinements 1..3.
    for r in 1..=3 {
        let (m1, m2) = scene.meshes(r).unwrap();
        println!(
            "r={r}: diameters {} vs {}",
            m1.combinatorial_diameter().unwrap(),
            m2.combinatorial_diameter().unwrap()
        );
    }

    // Diameters across all candidate generator pairs at r = 1, 2.
    let ctx = matf2::gl3_f2().unwrap();
    let tile = cross_tile().unwrap();
    let candidates = find_symmetric_generator_pairs(&ctx);
    println!("candidates: {}", candidates.len());
    for (idx, cand) in candidates.iter().enumerate() {
        let g1 = schreier_graph(&ctx.group, &ctx.h1, &[cand.a, cand.b])
            .unwrap()
            .with_colors(&["a", "b"])
            .unwrap();
        let g2 = schreier_graph(&ctx.group, &ctx.h2, &[cand.a, cand.b])
            .unwrap()
            .with_colors(&["a", "b"])
            .unwrap();
        let d1 = build_surface(&g1, &tile).unwrap();
        let d2 = build_surface(&g2, &tile).unwrap();
        let mut line = format!("cand {idx}: a={} b={} swap={}", cand.a, cand.b, cand.swap);
        for r in 1..=2 {
            let m1 = build_mesh(&d1, r).unwrap();
            let m2 = build_mesh(&d2, r).unwrap();
            line.push_str(&format!(
                "  r{r}: {}/{}",
                m1.combinatorial_diameter().unwrap(),
                m2.combinatorial_diameter().unwrap()
            ));
        }
        // Separating involution available?
        let inv = find_involutions(&g1, &d1);
        let mut seps = 0;
        for (perm, sym) in &inv {
            if separating_components(&d1, perm.clone(), *sym) == Some(2) {
                seps += 1;
            }
        }
        line.push_str(&format!("  involutions {} (separating {})", inv.len(), seps));
        println!("{line}");
        let _ = (coset_action(&ctx.group, &ctx.h1), Subgroup::trivial());
    }
}

//! Scratch probe for the pair pipelines (will be folded into the real
//! suites once numbers are confirmed).

use steklov::scene::{mixed_pair_scene, MixedPairVariant, SunadaScene};
use steklov::schreier::symmetrized_adjacency_spectrum;
use steklov::spectral::assemble;
use steklov::verify::*;

#[test]
fn probe_pipeline() {
    let scene = SunadaScene::new().unwrap();

    // 1. Graph spectra.
    let g1 = symmetrized_adjacency_spectrum(&scene.graph1);
    let g2 = symmetrized_adjacency_spectrum(&scene.graph2);
    let gd = spectrum_discrepancy(&g1, &g2);
    println!("graph spectra: {:?}\n              {:?}\n  disc {gd:.3e}", g1, g2);

    // 2. Steklov spectra at refinement 1.
    let (m1, m2) = scene.meshes(1).unwrap();
    println!("mesh1: {} verts, {} tris, boundary {}", m1.vertex_count, m1.triangles.len(), m1.boundary_edges.len());
    let bc = scene.steklov_bc(&scene.unit_density());
    let a1 = assemble(&m1, &bc).unwrap();
    let a2 = assemble(&m2, &bc).unwrap();
    println!("active dofs {} / {}; steklov dofs {}", a1.n_active, a2.n_active, a1.steklov_dofs.len());
    for alpha in [-2.0, 0.0, 3.0] {
        let s1 = a1.steklov_spectrum(alpha, 25).unwrap();
        let s2 = a2.steklov_spectrum(alpha, 25).unwrap();
        let d = spectrum_discrepancy(&s1.eigenvalues, &s2.eigenvalues);
        println!("alpha {alpha}: disc {d:.3e}  first vals {:?}", &s1.eigenvalues[..5]);
    }
    for sigma in [0.1, 1.0, 10.0] {
        let s1 = a1.robin_spectrum(sigma, 25).unwrap();
        let s2 = a2.robin_spectrum(sigma, 25).unwrap();
        let d = spectrum_discrepancy(&s1.eigenvalues, &s2.eigenvalues);
        println!("sigma {sigma}: disc {d:.3e}");
    }

    // 3. Transplantation.
    let tw = scene.intertwiner().unwrap();
    let t_f64 = tw.to_f64();
    let t = nalgebra::DMatrix::from_row_slice(7, 7, &t_f64);
    println!("T = {t:.4}");
    // op: source = mesh2 (columns of T), target = mesh1 (rows).
    match transplantation_operator(&t, (&m2, &a2), (&m1, &a1)) {
        Ok(op) => {
            let rep = check_intertwining(&op, &a2, &a1, 1e-12);
            println!("intertwining residuals: {:?}", rep.residuals);
            println!("invertibility: {:.3e}, max {:.3e}, pass {}", rep.invertibility_residual, rep.max_residual, rep.pass);
        }
        Err(e) => println!("transplantation FAILED: {e}"),
    }

    // 4. Sloshing quotients.
    let (q1, q2) = scene.quotient_meshes(1).unwrap();
    println!("quotient mesh: {} verts, pairing {:?}", q1.vertex_count, q1.class_pairing);
    let rho = scene.unit_density();
    let rep = sloshing_pair_check(&q1, &q2, &rho, &rho, &[0.0, -1.0], 25, 1e-8).unwrap();
    println!("sloshing: max disc {:.3e} pass {}", rep.max_discrepancy, rep.pass);

    // 5. Density pair.
    let rho = scene.asymmetric_density();
    let vmap = scene.density_tau_vertex_map(&m1, &m2).unwrap();
    let (rep, diff) = density_pair_check(&m1, &m2, &vmap, &rho, &[0.0, -1.0], 25, 1e-8).unwrap();
    println!("density: max disc {:.3e} pass {} (rho diff {diff})", rep.max_discrepancy, rep.pass);

    // 6. Doubling.
    let rep = doubling_check(&m1, &q1, &scene.unit_density(), 0.0, 20, 1e-8).unwrap();
    println!("doubling: max disc {:.3e} pass {}", rep.max_discrepancy, rep.pass);
    {
        use steklov::spectral::{BoundaryCondition, BoundaryConditionMap};
        let surf = assemble(&m1, &bc).unwrap();
        let s_full = surf.steklov_spectrum(0.0, 20).unwrap();
        let quot_map = |mirror: BoundaryCondition| {
            let mut map = BoundaryConditionMap::new();
            for class in &q1.classes {
                if class == "mirror" { map.insert(class, mirror); }
                else { map.insert(class, BoundaryCondition::Steklov(1.0)); }
            }
            map
        };
        let ae = assemble(&q1, &quot_map(BoundaryCondition::Neumann)).unwrap();
        let ao = assemble(&q1, &quot_map(BoundaryCondition::Dirichlet)).unwrap();
        let even = ae.steklov_spectrum(0.0, 15).unwrap();
        let odd = ao.steklov_spectrum(0.0, 15).unwrap();
        println!("surface: {:?}", &s_full.eigenvalues[..10]);
        println!("even:    {:?}", &even.eigenvalues[..10]);
        println!("odd:     {:?}", &odd.eigenvalues[..10]);
    }

    // 7. Nonisometry.
    let ni = nonisometry_evidence(&m1, &m2).unwrap();
    println!("nonisometry: {ni:?}");

    // 8. Mixed pairs.
    for variant in [MixedPairVariant::A, MixedPairVariant::B] {
        let mp = mixed_pair_scene(variant, 4).unwrap();
        let ma = steklov::tiling::mesh::build_mesh(&mp.domain_a, 2).unwrap();
        let mb = steklov::tiling::mesh::build_mesh(&mp.domain_b, 2).unwrap();
        let aa = assemble(&ma, &mp.bc_a).unwrap();
        let ab = assemble(&mb, &mp.bc_b).unwrap();
        for sigma in [0.5, 2.0] {
            let s1 = aa.robin_spectrum(sigma, 25).unwrap();
            let s2 = ab.robin_spectrum(sigma, 25).unwrap();
            println!("{variant:?} robin {sigma}: disc {:.3e}", spectrum_discrepancy(&s1.eigenvalues, &s2.eigenvalues));
        }
        let s1 = aa.steklov_spectrum(0.0, 25).unwrap();
        let s2 = ab.steklov_spectrum(0.0, 25).unwrap();
        println!("{variant:?} steklov 0: disc {:.3e}", spectrum_discrepancy(&s1.eigenvalues, &s2.eigenvalues));
        match transplantation_operator(&mp.t, (&ma, &aa), (&mb, &ab)) {
            Ok(op) => {
                let rep = check_intertwining(&op, &aa, &ab, 1e-12);
                println!("{variant:?} intertwining: {:?} inv {:.3e} pass {}", rep.residuals, rep.invertibility_residual, rep.pass);
            }
            Err(e) => println!("{variant:?} transplantation FAILED: {e}"),
        }
    }
}

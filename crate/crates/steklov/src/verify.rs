//! End-to-end verification: spectrum comparison, transplantation
//! intertwining, sloshing and density pipelines, nonisometry evidence.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{SpMat, SpectralAssembly, Spectrum};
use crate::tiling::Mesh;

/// Relative eigenvalue discrepancy over one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonPoint {
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    pub max_rel_discrepancy: f64,
}

/// Outcome of comparing two spectra (or a parameter sweep of them).
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub pair: (String, String),
    pub problem: String,
    pub k: usize,
    pub refinement: usize,
    pub tolerance: f64,
    pub points: Vec<ComparisonPoint>,
    pub max_discrepancy: f64,
    pub pass: bool,
}

impl ComparisonReport {
    fn from_points(
        pair: (String, String),
        problem: String,
        k: usize,
        refinement: usize,
        tolerance: f64,
        points: Vec<ComparisonPoint>,
    ) -> Self {
        let max_discrepancy = points
            .iter()
            .map(|p| p.max_rel_discrepancy)
            .fold(0.0, f64::max);
        let pass = points.iter().all(|p| p.max_rel_discrepancy <= tolerance);
        ComparisonReport {
            pair,
            problem,
            k,
            refinement,
            tolerance,
            points,
            max_discrepancy,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Entrywise relative discrepancy of two sorted eigenvalue lists, with
/// denominator `max(|λ|, 1)` so the zero eigenvalue compares absolutely.
pub fn spectrum_discrepancy(s1: &[f64], s2: &[f64]) -> f64 {
    s1.iter()
        .zip(s2)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
        .fold(0.0, f64::max)
}

/// Compares two spectra of the same problem kind and parameters.
pub fn compare_spectra(s1: &Spectrum, s2: &Spectrum, tol: f64) -> Result<ComparisonReport> {
    if s1.problem != s2.problem {
        return Err(Error::ParameterMismatch(format!(
            "problem kinds differ: {:?} vs {:?}",
            s1.problem, s2.problem
        )));
    }
    if s1.k() != s2.k() {
        return Err(Error::ParameterMismatch(format!(
            "k differs: {} vs {}",
            s1.k(),
            s2.k()
        )));
    }
    let close = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (None, None) => true,
        (Some(a), Some(b)) => a == b,
        _ => false,
    };
    if !close(s1.alpha, s2.alpha) || !close(s1.sigma, s2.sigma) {
        return Err(Error::ParameterMismatch("alpha/sigma differ".into()));
    }
    let disc = spectrum_discrepancy(&s1.eigenvalues, &s2.eigenvalues);
    Ok(ComparisonReport::from_points(
        ("first".into(), "second".into()),
        s1.problem.as_str().into(),
        s1.k(),
        s1.refinement,
        tol,
        vec![ComparisonPoint {
            alpha: s1.alpha,
            sigma: s1.sigma,
            max_rel_discrepancy: disc,
        }],
    ))
}

/// A parameter point of a pair sweep.
#[derive(Debug, Clone, Copy)]
pub enum ProblemPoint {
    Steklov { alpha: f64 },
    Robin { sigma: f64 },
}

/// Runs the same eigenproblem on two assemblies over a parameter grid and
/// aggregates the entrywise discrepancies.
pub fn pair_comparison(
    ids: (&str, &str),
    a1: &SpectralAssembly,
    a2: &SpectralAssembly,
    points: &[ProblemPoint],
    k: usize,
    tol: f64,
) -> Result<ComparisonReport> {
    let mut out = Vec::new();
    let mut problem = String::new();
    for p in points {
        let (s1, s2, alpha, sigma) = match *p {
            ProblemPoint::Steklov { alpha } => (
                a1.steklov_spectrum(alpha, k)?,
                a2.steklov_spectrum(alpha, k)?,
                Some(alpha),
                None,
            ),
            ProblemPoint::Robin { sigma } => (
                a1.robin_spectrum(sigma, k)?,
                a2.robin_spectrum(sigma, k)?,
                None,
                Some(sigma),
            ),
        };
        problem = s1.problem.as_str().into();
        out.push(ComparisonPoint {
            alpha,
            sigma,
            max_rel_discrepancy: spectrum_discrepancy(&s1.eigenvalues, &s2.eigenvalues),
        });
    }
    Ok(ComparisonReport::from_points(
        (ids.0.into(), ids.1.into()),
        problem,
        k,
        a1.refinement,
        tol,
        out,
    ))
}

/// The dof-level realization of a tile-matrix transplantation.
///
/// `fwd` maps source-mesh coefficient vectors to target-mesh vectors;
/// `tr`, built from the transposed tile matrix, is the adjoint with
/// respect to the assembled bilinear forms (`fwdᵗ·A_dst = A_src·tr` holds
/// exactly for stiffness, mass, and consistently transported boundary
/// forms); `inv`, built from the inverse tile matrix, inverts `fwd`.
#[derive(Debug, Clone)]
pub struct TransplantOperator {
    pub fwd: SpMat,
    pub tr: SpMat,
    pub inv: SpMat,
}

/// Builds the dof operators of a tile-blockwise transplantation between
/// the active dof spaces of two meshes built from the same reference tile.
///
/// `t[target_tile][source_tile]` expresses each target-tile restriction as
/// a combination of source-tile restrictions at the same reference node.
pub fn transplantation_operator(
    t: &DMatrix<f64>,
    source: (&Mesh, &SpectralAssembly),
    target: (&Mesh, &SpectralAssembly),
) -> Result<TransplantOperator> {
    let t_inv = t
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Transplantation("tile matrix is singular".into()))?;
    Ok(TransplantOperator {
        fwd: dof_operator(t, source, target)?,
        tr: dof_operator(&t.transpose(), target, source)?,
        inv: dof_operator(&t_inv, target, source)?,
    })
}

/// One direction of the dof operator. Rows are validated over every
/// incarnation of each target dof; an inconsistent row means the tile
/// matrix does not intertwine the gluing and boundary structure.
fn dof_operator(
    t: &DMatrix<f64>,
    source: (&Mesh, &SpectralAssembly),
    target: (&Mesh, &SpectralAssembly),
) -> Result<SpMat> {
    let (src_mesh, src) = source;
    let (dst_mesh, dst) = target;
    if src_mesh.class_pairing.is_some() || dst_mesh.class_pairing.is_some() {
        return Err(Error::Transplantation(
            "transplantation acts on covering meshes, not involution quotients".into(),
        ));
    }
    if src_mesh.ref_mesh.nodes.len() != dst_mesh.ref_mesh.nodes.len()
        || src_mesh.refinement != dst_mesh.refinement
        || src_mesh.tile_count != t.ncols()
        || dst_mesh.tile_count != t.nrows()
    {
        return Err(Error::Transplantation(format!(
            "shape mismatch: t is {}x{}, tiles {} -> {}",
            t.nrows(),
            t.ncols(),
            src_mesh.tile_count,
            dst_mesh.tile_count
        )));
    }
    // Incarnations of every target vertex.
    let mut incarnations: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dst_mesh.vertex_count];
    for tile in 0..dst_mesh.tile_count {
        for n in 0..dst_mesh.ref_mesh.nodes.len() {
            incarnations[dst_mesh.node_global[tile][n]].push((tile, n));
        }
    }
    let scale = t.abs().max().max(1.0);
    let mut trips = Vec::new();
    for (d, &v) in dst.vertex_of_active.iter().enumerate() {
        let mut row: Option<BTreeMap<usize, f64>> = None;
        for &(j, n) in &incarnations[v] {
            let mut this: BTreeMap<usize, f64> = BTreeMap::new();
            for i in 0..src_mesh.tile_count {
                let sv = src_mesh.node_global[i][n];
                if let Some(a) = src.active_of_vertex[sv] {
                    let coeff = t[(j, i)];
                    if coeff != 0.0 {
                        *this.entry(a).or_insert(0.0) += coeff;
                    }
                }
            }
            this.retain(|_, c| c.abs() > 1e-14 * scale);
            match &row {
                None => row = Some(this),
                Some(prev) => {
                    let consistent = prev.len() == this.len()
                        && prev
                            .iter()
                            .zip(&this)
                            .all(|((c1, v1), (c2, v2))| c1 == c2 && (v1 - v2).abs() <= 1e-12 * scale);
                    if !consistent {
                        return Err(Error::Transplantation(format!(
                            "inconsistent transplant row at target dof {d}: the tile matrix does not respect a gluing or boundary condition"
                        )));
                    }
                }
            }
        }
        for (c, coeff) in row.unwrap_or_default() {
            trips.push((d, c, coeff));
        }
    }
    Ok(SpMat::from_triplets(dst.n_active, src.n_active, trips))
}

/// Residuals of the intertwining identities `op·A_src = A_dst·op`.
#[derive(Debug, Clone, Serialize)]
pub struct IntertwiningReport {
    /// Relative residual per operator name (K, M, B_rho, and per-class
    /// boundary forms when the class sets coincide).
    pub residuals: BTreeMap<String, f64>,
    /// `max(||rev·fwd - I||, ||fwd·rev - I||)` on the active dof spaces.
    pub invertibility_residual: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Residual of the form identity `fwdᵗ·A_dst = A_src·tr`, relative to the
/// operand norms.
fn form_residual(op: &TransplantOperator, a_src: &SpMat, a_dst: &SpMat) -> f64 {
    let left = op.fwd.transpose().matmul(a_dst);
    let right = a_src.matmul(&op.tr);
    let num = left.add_scaled(&right, -1.0).inf_norm();
    let den = a_src.inf_norm().max(a_dst.inf_norm()).max(1e-300);
    num / (den * op.fwd.inf_norm().max(1.0))
}

fn identity_residual(product: &SpMat) -> f64 {
    let n = product.nrows;
    let ident = SpMat::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)).collect());
    product.add_scaled(&ident, -1.0).inf_norm()
}

/// Checks that the transplantation intertwines stiffness, mass, and
/// boundary forms of the two assemblies, and that the operator is
/// invertible.
///
/// Vanishing residuals plus invertibility force every pencil spectrum of
/// the two assemblies to agree: an eigenpair `A_src u = λ B_src u` maps to
/// `A_dst (fwd·u) = λ B_dst (fwd·u)` through the two form identities.
pub fn check_intertwining(
    op: &TransplantOperator,
    a_src: &SpectralAssembly,
    a_dst: &SpectralAssembly,
    tol: f64,
) -> IntertwiningReport {
    let mut residuals = BTreeMap::new();
    residuals.insert("K".to_string(), form_residual(op, &a_src.k, &a_dst.k));
    residuals.insert(
        "K_eff".to_string(),
        form_residual(op, &a_src.k_eff, &a_dst.k_eff),
    );
    residuals.insert("M".to_string(), form_residual(op, &a_src.m, &a_dst.m));
    residuals.insert(
        "B_rho".to_string(),
        form_residual(op, &a_src.b_rho, &a_dst.b_rho),
    );
    if a_src.classes == a_dst.classes {
        for (c, name) in a_src.classes.iter().enumerate() {
            residuals.insert(
                format!("B[{name}]"),
                form_residual(op, &a_src.b_class[c], &a_dst.b_class[c]),
            );
        }
    }
    let invertibility_residual =
        identity_residual(&op.inv.matmul(&op.fwd)).max(identity_residual(&op.fwd.matmul(&op.inv)));
    let max_residual = residuals
        .values()
        .copied()
        .fold(invertibility_residual, f64::max);
    IntertwiningReport {
        residuals,
        invertibility_residual,
        max_residual,
        pass: max_residual <= tol,
        tolerance: tol,
    }
}

/// Mixed Neumann–Steklov comparison of two involution-quotient meshes.
///
/// `rho1`/`rho2` assign densities per free class (equal for the positive
/// claim; passing different maps is the negative control). Densities must
/// respect each quotient's class pairing; mirror edges get Neumann.
pub fn sloshing_pair_check(
    q1: &Mesh,
    q2: &Mesh,
    rho1: &BTreeMap<String, f64>,
    rho2: &BTreeMap<String, f64>,
    alphas: &[f64],
    k: usize,
    tol: f64,
) -> Result<ComparisonReport> {
    use crate::spectral::{assemble, BoundaryCondition, BoundaryConditionMap};
    let build = |mesh: &Mesh, rho: &BTreeMap<String, f64>| -> Result<SpectralAssembly> {
        let pairing = mesh.class_pairing.as_ref().ok_or_else(|| {
            Error::InvalidDomain("sloshing check requires involution-quotient meshes".into())
        })?;
        for &(a, b) in pairing {
            let ra = rho.get(&mesh.classes[a]).copied().unwrap_or(1.0);
            let rb = rho.get(&mesh.classes[b]).copied().unwrap_or(1.0);
            if ra != rb {
                return Err(Error::Config(format!(
                    "density must agree on involution-paired classes `{}` and `{}`",
                    mesh.classes[a], mesh.classes[b]
                )));
            }
        }
        let mut map = BoundaryConditionMap::new();
        for class in &mesh.classes {
            if class == crate::tiling::mesh::MIRROR_CLASS {
                map.insert(class, BoundaryCondition::Neumann);
            } else {
                let r = rho.get(class).copied().unwrap_or(1.0);
                map.insert(class, BoundaryCondition::Steklov(r));
            }
        }
        assemble(mesh, &map)
    };
    let a1 = build(q1, rho1)?;
    let a2 = build(q2, rho2)?;
    let points: Vec<ProblemPoint> = alphas
        .iter()
        .map(|&alpha| ProblemPoint::Steklov { alpha })
        .collect();
    pair_comparison(("quotient-1", "quotient-2"), &a1, &a2, &points, k, tol)
}

/// Pulls a per-class density back along a simplicial isometry
/// `mesh1 → mesh2` given by a vertex map.
pub fn pull_back_density(
    mesh1: &Mesh,
    mesh2: &Mesh,
    vertex_map: &[usize],
    rho2: &BTreeMap<String, f64>,
) -> Result<BTreeMap<String, f64>> {
    let mut edge_class2: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in &mesh2.boundary_edges {
        edge_class2.insert((e.v[0].min(e.v[1]), e.v[0].max(e.v[1])), e.class);
    }
    let mut class_map: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &mesh1.boundary_edges {
        let iu = vertex_map[e.v[0]];
        let iv = vertex_map[e.v[1]];
        let &c2 = edge_class2
            .get(&(iu.min(iv), iu.max(iv)))
            .ok_or_else(|| Error::Transplantation("isometry does not preserve the boundary".into()))?;
        if let Some(&prev) = class_map.get(&e.class) {
            if prev != c2 {
                return Err(Error::Transplantation(format!(
                    "isometry maps class `{}` to both `{}` and `{}`",
                    mesh1.classes[e.class], mesh2.classes[prev], mesh2.classes[c2]
                )));
            }
        } else {
            class_map.insert(e.class, c2);
        }
    }
    let mut out = BTreeMap::new();
    for (c1, c2) in class_map {
        let r = rho2.get(&mesh2.classes[c2]).copied().unwrap_or(1.0);
        out.insert(mesh1.classes[c1].clone(), r);
    }
    Ok(out)
}

/// Compares `Stek_α(M₁, ρ)` with `Stek_α(M₁, τ*ρ)` where the vertex map is
/// a verified isometry from mesh1 to mesh2 conjugating the two quotient
/// structures. Returns the report and `max |ρ - τ*ρ|` over classes.
///
/// A τ-invariant density is rejected: equality of spectra would then be
/// trivial rather than evidence.
pub fn density_pair_check(
    mesh1: &Mesh,
    mesh2: &Mesh,
    vertex_map: &[usize],
    rho: &BTreeMap<String, f64>,
    alphas: &[f64],
    k: usize,
    tol: f64,
) -> Result<(ComparisonReport, f64)> {
    use crate::spectral::{assemble, BoundaryCondition, BoundaryConditionMap};
    let tau_rho = pull_back_density(mesh1, mesh2, vertex_map, rho)?;
    let max_diff = mesh1
        .classes
        .iter()
        .map(|c| {
            let a = rho.get(c).copied().unwrap_or(1.0);
            let b = tau_rho.get(c).copied().unwrap_or(1.0);
            (a - b).abs()
        })
        .fold(0.0, f64::max);
    if max_diff == 0.0 {
        return Err(Error::DensityTauInvariant);
    }
    let build = |density: &BTreeMap<String, f64>| -> Result<SpectralAssembly> {
        let mut map = BoundaryConditionMap::new();
        for class in &mesh1.classes {
            let r = density.get(class).copied().unwrap_or(1.0);
            map.insert(class, BoundaryCondition::Steklov(r));
        }
        assemble(mesh1, &map)
    };
    let a1 = build(rho)?;
    let a2 = build(&tau_rho)?;
    let points: Vec<ProblemPoint> = alphas
        .iter()
        .map(|&alpha| ProblemPoint::Steklov { alpha })
        .collect();
    let report = pair_comparison(("rho", "tau-pullback-rho"), &a1, &a2, &points, k, tol)?;
    Ok((report, max_diff))
}

/// Geometric evidence that two meshes are not isometric, alongside the
/// boundary data that isospectrality forces to agree.
#[derive(Debug, Clone, Serialize)]
pub struct NonisometryReport {
    pub diameters: (usize, usize),
    pub diameters_differ: bool,
    pub boundary_component_counts: (usize, usize),
    pub total_boundary_lengths: (f64, f64),
    pub component_lengths: (Vec<f64>, Vec<f64>),
}

impl NonisometryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn nonisometry_evidence(mesh1: &Mesh, mesh2: &Mesh) -> Result<NonisometryReport> {
    let d1 = mesh1.combinatorial_diameter()?;
    let d2 = mesh2.combinatorial_diameter()?;
    let c1 = mesh1.boundary_components();
    let c2 = mesh2.boundary_components();
    Ok(NonisometryReport {
        diameters: (d1, d2),
        diameters_differ: d1 != d2,
        boundary_component_counts: (c1.len(), c2.len()),
        total_boundary_lengths: (mesh1.total_boundary_length(), mesh2.total_boundary_length()),
        component_lengths: (
            c1.iter().map(|(l, _)| *l).collect(),
            c2.iter().map(|(l, _)| *l).collect(),
        ),
    })
}

/// Checks the doubling identity: the Steklov spectrum of a surface equals
/// the sorted merge of the mirror-Neumann and mirror-Dirichlet spectra of
/// its involution quotient.
pub fn doubling_check(
    surface: &Mesh,
    quotient: &Mesh,
    rho: &BTreeMap<String, f64>,
    alpha: f64,
    k: usize,
    tol: f64,
) -> Result<ComparisonReport> {
    use crate::spectral::{assemble, BoundaryCondition, BoundaryConditionMap};
    let mut surf_map = BoundaryConditionMap::new();
    for class in &surface.classes {
        let r = rho.get(class).copied().unwrap_or(1.0);
        surf_map.insert(class, BoundaryCondition::Steklov(r));
    }
    let surf = assemble(surface, &surf_map)?;
    let s_full = surf.steklov_spectrum(alpha, k)?;

    let quot_map = |mirror_bc: BoundaryCondition| {
        let mut map = BoundaryConditionMap::new();
        for class in &quotient.classes {
            if class == crate::tiling::mesh::MIRROR_CLASS {
                map.insert(class, mirror_bc);
            } else {
                let r = rho.get(class).copied().unwrap_or(1.0);
                map.insert(class, BoundaryCondition::Steklov(r));
            }
        }
        map
    };
    let a_even = assemble(quotient, &quot_map(BoundaryCondition::Neumann))?;
    let a_odd = assemble(quotient, &quot_map(BoundaryCondition::Dirichlet))?;
    let even = a_even.steklov_spectrum(alpha, k.min(a_even.steklov_positive_dofs.len()))?;
    let odd = a_odd.steklov_spectrum(alpha, k.min(a_odd.steklov_positive_dofs.len()))?;
    let mut merged: Vec<f64> = even
        .eigenvalues
        .iter()
        .chain(odd.eigenvalues.iter())
        .copied()
        .collect();
    merged.sort_by(|a, b| a.partial_cmp(b).unwrap());
    merged.truncate(k);
    let disc = spectrum_discrepancy(&s_full.eigenvalues, &merged);
    Ok(ComparisonReport::from_points(
        ("surface".into(), "quotient-doubling".into()),
        "steklov".into(),
        k,
        surface.refinement,
        tol,
        vec![ComparisonPoint {
            alpha: Some(alpha),
            sigma: None,
            max_rel_discrepancy: disc,
        }],
    ))
}

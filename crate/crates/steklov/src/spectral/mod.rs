//! Finite-element assembly and eigenvalue computation.
//!
//! Piecewise-linear triangular elements with exact per-element integration.
//! Element matrices are computed once per reference triangle and scattered
//! per tile, so the per-tile contributions of a glued domain are
//! bit-identical — the discrete counterpart of the equivariance that makes
//! the quotient spectra agree exactly.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tiling::Mesh;

pub mod eig;
pub mod sparse;

pub use sparse::SpMat;

/// Boundary condition assigned to one boundary class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// Fixed-parameter Robin condition `∂ν u = σ u`.
    Robin(f64),
    /// Steklov class with boundary density `ρ ≥ 0`.
    Steklov(f64),
}

/// Assignment of boundary conditions to class names.
#[derive(Debug, Clone, Default)]
pub struct BoundaryConditionMap {
    map: BTreeMap<String, BoundaryCondition>,
}

impl BoundaryConditionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, class: &str, bc: BoundaryCondition) -> Self {
        self.map.insert(class.to_string(), bc);
        self
    }

    pub fn insert(&mut self, class: &str, bc: BoundaryCondition) {
        self.map.insert(class.to_string(), bc);
    }

    pub fn get(&self, class: &str) -> Option<BoundaryCondition> {
        self.map.get(class).copied()
    }

    pub fn classes(&self) -> impl Iterator<Item = (&str, BoundaryCondition)> {
        self.map.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Resolves per-class-id conditions for a mesh, requiring coverage.
    pub fn resolve(&self, mesh: &Mesh) -> Result<Vec<BoundaryCondition>> {
        mesh.classes
            .iter()
            .map(|name| {
                self.map
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::UncoveredBoundaryClass(name.clone()))
            })
            .collect()
    }
}

/// Problem identification carried by a [`Spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Dirichlet,
    Neumann,
    MixedLaplace,
    Robin,
    Steklov,
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::Dirichlet => "dirichlet",
            ProblemKind::Neumann => "neumann",
            ProblemKind::MixedLaplace => "mixed_laplace",
            ProblemKind::Robin => "robin",
            ProblemKind::Steklov => "steklov",
        }
    }
}

/// An ordered eigenvalue list with problem metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub problem: ProblemKind,
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    pub eigenvalues: Vec<f64>,
    pub refinement: usize,
    /// Eigensolver tolerance used for the dense reductions.
    pub solver_tolerance: f64,
}

impl Spectrum {
    pub fn k(&self) -> usize {
        self.eigenvalues.len()
    }
}

const SOLVER_TOL: f64 = 1e-13;

/// Pivot-margin threshold: `α` is rejected when the interior factorization
/// has `min |pivot| < 1e-8 · ||A||`.
pub const ALPHA_PIVOT_MARGIN: f64 = 1e-8;

/// Assembled matrices of one mesh with one boundary-condition map,
/// restricted to active (non-Dirichlet) degrees of freedom.
#[derive(Debug, Clone)]
pub struct SpectralAssembly {
    pub n_active: usize,
    /// Active index per mesh vertex (`None` on eliminated Dirichlet dofs).
    pub active_of_vertex: Vec<Option<usize>>,
    pub vertex_of_active: Vec<usize>,
    /// Stiffness including fixed-Robin class terms: `K - Σ σ_c B_c`.
    pub k_eff: SpMat,
    /// Plain stiffness `∫ ∇u·∇v`.
    pub k: SpMat,
    /// Volume mass `∫ u v`.
    pub m: SpMat,
    /// Per boundary class, the unweighted boundary mass `∮_c u v`.
    pub b_class: Vec<SpMat>,
    /// Density-weighted Steklov boundary form `Σ ρ_c B_c`.
    pub b_rho: SpMat,
    pub classes: Vec<String>,
    pub bc: Vec<BoundaryCondition>,
    /// Active dofs on Steklov-class edges (any density), ascending.
    pub steklov_dofs: Vec<usize>,
    /// Active dofs on Steklov-class edges with positive density.
    pub steklov_positive_dofs: Vec<usize>,
    pub refinement: usize,
}

/// Reference-triangle stiffness and mass for linear elements.
fn local_matrices(p: [[f64; 2]; 3]) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let b = [
        p[1][1] - p[2][1],
        p[2][1] - p[0][1],
        p[0][1] - p[1][1],
    ];
    let c = [
        p[2][0] - p[1][0],
        p[0][0] - p[2][0],
        p[1][0] - p[0][0],
    ];
    let area2 = b[0] * c[1] - b[1] * c[0]; // 2·area (positive for ccw)
    let area = area2 / 2.0;
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    (k, m)
}

/// Assembles stiffness, mass, and per-class boundary matrices on the
/// active dofs of `mesh` under `bc`.
pub fn assemble(mesh: &Mesh, bc: &BoundaryConditionMap) -> Result<SpectralAssembly> {
    let class_bc = bc.resolve(mesh)?;
    for (c, b) in class_bc.iter().enumerate() {
        if let BoundaryCondition::Steklov(rho) = b {
            if *rho < 0.0 {
                return Err(Error::Config(format!(
                    "negative density on class `{}`",
                    mesh.classes[c]
                )));
            }
        }
    }

    let mut dirichlet = vec![false; mesh.vertex_count];
    for e in &mesh.boundary_edges {
        if matches!(class_bc[e.class], BoundaryCondition::Dirichlet) {
            dirichlet[e.v[0]] = true;
            dirichlet[e.v[1]] = true;
        }
    }
    let mut active_of_vertex = vec![None; mesh.vertex_count];
    let mut vertex_of_active = Vec::new();
    for v in 0..mesh.vertex_count {
        if !dirichlet[v] {
            active_of_vertex[v] = Some(vertex_of_active.len());
            vertex_of_active.push(v);
        }
    }
    let n_active = vertex_of_active.len();

    // Per reference triangle local matrices, computed once.
    let locals: Vec<([[f64; 3]; 3], [[f64; 3]; 3])> = mesh
        .ref_mesh
        .tris
        .iter()
        .map(|t| local_matrices(t.map(|n| mesh.ref_mesh.nodes[n])))
        .collect();

    let mut k_trips = Vec::new();
    let mut m_trips = Vec::new();
    for &(tile, rt) in &mesh.triangles {
        let verts = mesh.ref_mesh.tris[rt].map(|n| mesh.node_global[tile][n]);
        let (kl, ml) = &locals[rt];
        for i in 0..3 {
            let Some(a) = active_of_vertex[verts[i]] else { continue };
            for j in 0..3 {
                let Some(b) = active_of_vertex[verts[j]] else { continue };
                k_trips.push((a, b, kl[i][j]));
                m_trips.push((a, b, ml[i][j]));
            }
        }
    }
    let k = SpMat::from_triplets(n_active, n_active, k_trips);
    let m = SpMat::from_triplets(n_active, n_active, m_trips);

    let n_classes = mesh.classes.len();
    let mut class_trips: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n_classes];
    for e in &mesh.boundary_edges {
        let l = e.len;
        let local = [[l / 3.0, l / 6.0], [l / 6.0, l / 3.0]];
        for i in 0..2 {
            let Some(a) = active_of_vertex[e.v[i]] else { continue };
            for j in 0..2 {
                let Some(b) = active_of_vertex[e.v[j]] else { continue };
                class_trips[e.class].push((a, b, local[i][j]));
            }
        }
    }
    let b_class: Vec<SpMat> = class_trips
        .into_iter()
        .map(|t| SpMat::from_triplets(n_active, n_active, t))
        .collect();

    let mut b_rho = SpMat::zeros(n_active, n_active);
    let mut k_eff = k.clone();
    for (c, b) in class_bc.iter().enumerate() {
        match b {
            BoundaryCondition::Steklov(rho) => {
                b_rho = b_rho.add_scaled(&b_class[c], *rho);
            }
            BoundaryCondition::Robin(sigma) => {
                k_eff = k_eff.add_scaled(&b_class[c], -*sigma);
            }
            _ => {}
        }
    }

    let mut on_steklov = vec![false; n_active];
    let mut on_positive = vec![false; n_active];
    for e in &mesh.boundary_edges {
        if let BoundaryCondition::Steklov(rho) = class_bc[e.class] {
            for v in e.v {
                if let Some(a) = active_of_vertex[v] {
                    on_steklov[a] = true;
                    if rho > 0.0 {
                        on_positive[a] = true;
                    }
                }
            }
        }
    }
    let steklov_dofs: Vec<usize> = (0..n_active).filter(|&a| on_steklov[a]).collect();
    let steklov_positive_dofs: Vec<usize> = (0..n_active).filter(|&a| on_positive[a]).collect();

    Ok(SpectralAssembly {
        n_active,
        active_of_vertex,
        vertex_of_active,
        k_eff,
        k,
        m,
        b_class,
        b_rho,
        classes: mesh.classes.clone(),
        bc: class_bc,
        steklov_dofs,
        steklov_positive_dofs,
        refinement: mesh.refinement,
    })
}

impl SpectralAssembly {
    fn has_dirichlet(&self) -> bool {
        self.bc.iter().any(|b| matches!(b, BoundaryCondition::Dirichlet))
    }

    fn spectrum(&self, kind: ProblemKind, alpha: Option<f64>, sigma: Option<f64>, eigs: Vec<f64>) -> Spectrum {
        Spectrum {
            problem: kind,
            alpha,
            sigma,
            eigenvalues: eigs,
            refinement: self.refinement,
            solver_tolerance: SOLVER_TOL,
        }
    }

    /// Smallest `k` eigenvalues of `K u = α M u` under the assembly's
    /// boundary treatment.
    pub fn laplace_spectrum(&self, k: usize) -> Result<Spectrum> {
        if k > self.n_active {
            return Err(Error::Config(format!(
                "requested {k} eigenvalues from {} dofs",
                self.n_active
            )));
        }
        let eigs = eig::sym_pair_eigenvalues(&self.k_eff.to_dense(), &self.m.to_dense())?;
        let kind = if self.bc.iter().all(|b| matches!(b, BoundaryCondition::Dirichlet)) {
            ProblemKind::Dirichlet
        } else if !self.has_dirichlet() {
            ProblemKind::Neumann
        } else {
            ProblemKind::MixedLaplace
        };
        Ok(self.spectrum(kind, None, None, eigs.into_iter().take(k).collect()))
    }

    pub fn dirichlet_spectrum(&self, k: usize) -> Result<Spectrum> {
        let s = self.laplace_spectrum(k)?;
        Ok(Spectrum {
            problem: ProblemKind::Dirichlet,
            ..s
        })
    }

    pub fn neumann_spectrum(&self, k: usize) -> Result<Spectrum> {
        let s = self.laplace_spectrum(k)?;
        Ok(Spectrum {
            problem: ProblemKind::Neumann,
            ..s
        })
    }

    /// Smallest `k` eigenvalues `α` of `(K - σ B_ρ) u = α M u`.
    pub fn robin_spectrum(&self, sigma: f64, k: usize) -> Result<Spectrum> {
        if k > self.n_active {
            return Err(Error::Config(format!(
                "requested {k} eigenvalues from {} dofs",
                self.n_active
            )));
        }
        let lhs = self.k_eff.add_scaled(&self.b_rho, -sigma);
        let eigs = eig::sym_pair_eigenvalues(&lhs.to_dense(), &self.m.to_dense())?;
        Ok(self.spectrum(
            ProblemKind::Robin,
            None,
            Some(sigma),
            eigs.into_iter().take(k).collect(),
        ))
    }

    fn interior_dofs(&self, boundary: &[usize]) -> Vec<usize> {
        let mut is_boundary = vec![false; self.n_active];
        for &b in boundary {
            is_boundary[b] = true;
        }
        (0..self.n_active).filter(|&a| !is_boundary[a]).collect()
    }

    /// Schur complement of `K_eff - α M` onto the Steklov-class boundary
    /// dofs: the discrete Dirichlet-to-Neumann operator at frequency `α`.
    ///
    /// Errors when the interior block's smallest LU pivot falls below
    /// [`ALPHA_PIVOT_MARGIN`] times the block norm (the computable
    /// surrogate for `α` hitting the interior Dirichlet spectrum).
    pub fn dtn_matrix(&self, alpha: f64) -> Result<DMatrix<f64>> {
        let (s, _) = self.dtn_matrix_with_margin(alpha)?;
        Ok(s)
    }

    pub fn dtn_matrix_with_margin(&self, alpha: f64) -> Result<(DMatrix<f64>, f64)> {
        if self.steklov_dofs.is_empty() {
            return Err(Error::EmptyActiveBoundary);
        }
        let bdofs = &self.steklov_dofs;
        let idofs = self.interior_dofs(bdofs);
        let a = self.k_eff.add_scaled(&self.m, -alpha);
        let a_bb = a.block(bdofs, bdofs);
        let a_bi = a.block(bdofs, &idofs);
        let a_ib = a.block(&idofs, bdofs);
        let a_ii = a.block(&idofs, &idofs);
        let fact = eig::FactoredBlock::new(a_ii);
        if fact.pivot_margin < ALPHA_PIVOT_MARGIN {
            return Err(Error::AlphaNearDirichletSpectrum {
                alpha,
                margin: fact.pivot_margin,
                threshold: ALPHA_PIVOT_MARGIN,
            });
        }
        let x = fact.solve(&a_ib)?;
        let s = &a_bb - &a_bi * x;
        let asym = (&s - s.transpose()).abs().max();
        let scale = s.abs().max().max(1.0);
        if asym > 1e-12 * scale {
            return Err(Error::EigensolverFailure(format!(
                "Schur complement asymmetry {asym:.3e} exceeds 1e-12 relative"
            )));
        }
        Ok(((&s + s.transpose()) * 0.5, fact.pivot_margin))
    }

    /// Smallest `k` Steklov eigenvalues `σ` of `S(α) x = σ B_ρ x` on the
    /// positive-density boundary dofs.
    pub fn steklov_spectrum(&self, alpha: f64, k: usize) -> Result<Spectrum> {
        if self.steklov_positive_dofs.is_empty() {
            return Err(Error::EmptyActiveBoundary);
        }
        let s = self.dtn_matrix(alpha)?;
        // Second reduction: eliminate zero-density Steklov dofs.
        let pos_in_b: Vec<usize> = self
            .steklov_dofs
            .iter()
            .enumerate()
            .filter(|(_, d)| self.steklov_positive_dofs.binary_search(d).is_ok())
            .map(|(i, _)| i)
            .collect();
        let zero_in_b: Vec<usize> = (0..self.steklov_dofs.len())
            .filter(|i| !pos_in_b.contains(i))
            .collect();
        let s_red = if zero_in_b.is_empty() {
            s
        } else {
            let spp = s.select_rows(pos_in_b.iter()).select_columns(pos_in_b.iter());
            let spz = s.select_rows(pos_in_b.iter()).select_columns(zero_in_b.iter());
            let szp = s.select_rows(zero_in_b.iter()).select_columns(pos_in_b.iter());
            let szz = s.select_rows(zero_in_b.iter()).select_columns(zero_in_b.iter());
            let fact = eig::FactoredBlock::new(szz);
            if fact.pivot_margin < ALPHA_PIVOT_MARGIN {
                return Err(Error::AlphaNearDirichletSpectrum {
                    alpha,
                    margin: fact.pivot_margin,
                    threshold: ALPHA_PIVOT_MARGIN,
                });
            }
            let x = fact.solve(&szp)?;
            let red = &spp - &spz * x;
            (&red + red.transpose()) * 0.5
        };
        let b = self.b_rho.block(&self.steklov_positive_dofs, &self.steklov_positive_dofs);
        if k > s_red.nrows() {
            return Err(Error::Config(format!(
                "requested {k} eigenvalues from {} boundary dofs",
                s_red.nrows()
            )));
        }
        let eigs = eig::sym_pair_eigenvalues(&s_red, &b)?;
        Ok(self.spectrum(
            ProblemKind::Steklov,
            Some(alpha),
            None,
            eigs.into_iter().take(k).collect(),
        ))
    }

    /// `(uᵗ K_eff u - α uᵗ M u) / (uᵗ B_ρ u)` for an active-dof vector.
    pub fn rayleigh_quotient(&self, u: &[f64], alpha: f64) -> Result<f64> {
        let dot = |m: &SpMat| -> f64 {
            let y = m.mul_vec(u);
            u.iter().zip(&y).map(|(a, b)| a * b).sum()
        };
        let denom = dot(&self.b_rho);
        let scale: f64 = u.iter().map(|x| x * x).sum();
        if denom <= 1e-300 || denom < 1e-15 * scale.max(1.0) {
            return Err(Error::ZeroRayleighDenominator);
        }
        Ok((dot(&self.k_eff) - alpha * dot(&self.m)) / denom)
    }

    /// Harmonic-extension operator at frequency `α`: maps boundary data on
    /// the Steklov dofs to the full active vector extending it.
    pub fn extension_operator(&self, alpha: f64) -> Result<DMatrix<f64>> {
        let bdofs = &self.steklov_dofs;
        let idofs = self.interior_dofs(bdofs);
        let a = self.k_eff.add_scaled(&self.m, -alpha);
        let a_ib = a.block(&idofs, bdofs);
        let a_ii = a.block(&idofs, &idofs);
        let fact = eig::FactoredBlock::new(a_ii);
        if fact.pivot_margin < ALPHA_PIVOT_MARGIN {
            return Err(Error::AlphaNearDirichletSpectrum {
                alpha,
                margin: fact.pivot_margin,
                threshold: ALPHA_PIVOT_MARGIN,
            });
        }
        let x = fact.solve(&a_ib)?;
        let mut e = DMatrix::zeros(self.n_active, bdofs.len());
        for (bi, &b) in bdofs.iter().enumerate() {
            e[(b, bi)] = 1.0;
        }
        for (ii, &i) in idofs.iter().enumerate() {
            for bi in 0..bdofs.len() {
                e[(i, bi)] = -x[(ii, bi)];
            }
        }
        Ok(e)
    }

    /// Steklov eigenpairs (values and active-dof eigenvectors).
    pub fn steklov_eigenpairs(&self, alpha: f64, k: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
        if self.steklov_positive_dofs.len() != self.steklov_dofs.len() {
            return Err(Error::Config(
                "steklov_eigenpairs requires all Steklov classes to have positive density".into(),
            ));
        }
        let s = self.dtn_matrix(alpha)?;
        let b = self.b_rho.block(&self.steklov_dofs, &self.steklov_dofs);
        let (eigs, x) = eig::sym_pair_eigen(&s, &b)?;
        let ext = self.extension_operator(alpha)?;
        let full = ext * x.columns(0, k.min(eigs.len())).clone_owned();
        Ok((eigs.into_iter().take(k).collect(), full))
    }
}

/// CSV export with the schema
/// `index,eigenvalue,problem,alpha,sigma,refinement`.
pub fn spectra_to_csv(spectra: &[Spectrum]) -> String {
    let mut out = String::from("index,eigenvalue,problem,alpha,sigma,refinement\n");
    for s in spectra {
        for (i, ev) in s.eigenvalues.iter().enumerate() {
            let alpha = s.alpha.map(|a| format!("{a:.16e}")).unwrap_or_default();
            let sigma = s.sigma.map(|a| format!("{a:.16e}")).unwrap_or_default();
            out.push_str(&format!(
                "{i},{ev:.16e},{},{alpha},{sigma},{}\n",
                s.problem.as_str(),
                s.refinement
            ));
        }
    }
    out
}

/// Dense symmetric eigenvalue cross-check for the full pencil
/// `(K - σ B_ρ) u = α M u` through an unsymmetric route (`M⁻¹` applied
/// explicitly); test oracle, independent of the Cholesky reduction.
pub fn robin_pencil_dense_oracle(a: &SpectralAssembly, sigma: f64) -> Result<Vec<f64>> {
    let lhs = a.k_eff.add_scaled(&a.b_rho, -sigma).to_dense();
    let m = a.m.to_dense();
    let m_inv = m
        .try_inverse()
        .ok_or_else(|| Error::EigensolverFailure("mass matrix not invertible".into()))?;
    let g = m_inv * lhs;
    let schur = g.schur();
    let complex = schur.complex_eigenvalues();
    let mut eigs: Vec<f64> = complex.iter().map(|z| z.re).collect();
    if complex.iter().any(|z| z.im.abs() > 1e-6) {
        return Err(Error::EigensolverFailure("unexpected complex eigenvalue".into()));
    }
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Applies the assembly's stiffness pencil residual `(K_eff - σ B_ρ - α M) u`.
pub fn pencil_residual(a: &SpectralAssembly, alpha: f64, sigma: f64, u: &DVector<f64>) -> DVector<f64> {
    let v: Vec<f64> = u.iter().copied().collect();
    let ku = a.k_eff.mul_vec(&v);
    let bu = a.b_rho.mul_vec(&v);
    let mu = a.m.mul_vec(&v);
    DVector::from_iterator(
        u.len(),
        (0..u.len()).map(|i| ku[i] - sigma * bu[i] - alpha * mu[i]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::builders::{single_tile_domain, unit_square_tile};
    use crate::tiling::mesh::build_mesh;
    use crate::tiling::Mesh;

    fn square_mesh(refinement: usize) -> Mesh {
        let domain = single_tile_domain(unit_square_tile().unwrap()).unwrap();
        build_mesh(&domain, refinement).unwrap()
    }

    fn all_sides(bc: BoundaryCondition) -> BoundaryConditionMap {
        let mut map = BoundaryConditionMap::new();
        for s in ["s0", "s1", "s2", "s3"] {
            map.insert(s, bc);
        }
        map
    }

    #[test]
    fn stiffness_kernel_contains_constants() {
        let mesh = Mesh::from_single_chart(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            vec![([0, 1], "e".into()), ([1, 2], "e".into()), ([2, 0], "e".into())],
            1,
        );
        let a = assemble(&mesh, &BoundaryConditionMap::new().set("e", BoundaryCondition::Neumann)).unwrap();
        for r in 0..a.n_active {
            let (_, vals) = a.k.row(r);
            let sum: f64 = vals.iter().sum();
            assert!(sum.abs() < 1e-14);
        }
    }

    #[test]
    fn mass_matrix_sums_to_area() {
        let mesh = square_mesh(3);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Neumann)).unwrap();
        let total: f64 = a.m.vals.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn neumann_square_spectrum_matches_separation_of_variables() {
        let mesh = square_mesh(4);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Neumann)).unwrap();
        let s = a.neumann_spectrum(4).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        let expected = [0.0, pi2, pi2, 2.0 * pi2];
        assert!(s.eigenvalues[0].abs() < 1e-10, "{:?}", s.eigenvalues);
        for i in 1..4 {
            let rel = (s.eigenvalues[i] - expected[i]).abs() / expected[i];
            assert!(rel < 0.03, "mode {i}: {} vs {}", s.eigenvalues[i], expected[i]);
        }
    }

    #[test]
    fn dirichlet_square_spectrum_matches_separation_of_variables() {
        let mesh = square_mesh(4);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Dirichlet)).unwrap();
        let s = a.dirichlet_spectrum(3).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        let expected = [2.0 * pi2, 5.0 * pi2, 5.0 * pi2];
        for i in 0..3 {
            let rel = (s.eigenvalues[i] - expected[i]).abs() / expected[i];
            assert!(rel < 0.03, "mode {i}: {} vs {}", s.eigenvalues[i], expected[i]);
        }
    }

    #[test]
    fn robin_square_matches_independent_dense_pencil() {
        let mesh = square_mesh(2);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Steklov(1.0))).unwrap();
        let s = a.robin_spectrum(1.0, 8).unwrap();
        let oracle = robin_pencil_dense_oracle(&a, 1.0).unwrap();
        for i in 0..8 {
            let denom = s.eigenvalues[i].abs().max(1.0);
            assert!(
                (s.eigenvalues[i] - oracle[i]).abs() / denom < 1e-8,
                "mode {i}: {} vs {}",
                s.eigenvalues[i],
                oracle[i]
            );
        }
    }

    #[test]
    fn robin_at_sigma_zero_equals_laplace_spectrum() {
        let mesh = square_mesh(3);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Steklov(1.0))).unwrap();
        let r = a.robin_spectrum(0.0, 6).unwrap();
        let n = a.laplace_spectrum(6).unwrap();
        for i in 0..6 {
            assert!((r.eigenvalues[i] - n.eigenvalues[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn dtn_constants_are_harmonic_at_alpha_zero() {
        let mesh = square_mesh(3);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Steklov(1.0))).unwrap();
        let s = a.dtn_matrix(0.0).unwrap();
        let ones = DVector::from_element(s.nrows(), 1.0);
        let res = &s * &ones;
        assert!(res.amax() < 1e-10, "S(0)·1 = {:?}", res.amax());
    }

    #[test]
    fn steklov_square_first_value_is_zero_with_constant_eigenvector() {
        let mesh = square_mesh(3);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Steklov(1.0))).unwrap();
        let s = a.steklov_spectrum(0.0, 5).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-10);
        assert!(s.eigenvalues[1] > 0.1);
    }

    #[test]
    fn steklov_robin_duality_on_the_square() {
        let mesh = square_mesh(3);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Steklov(1.0))).unwrap();
        let stek = a.steklov_spectrum(0.0, 5).unwrap();
        for j in 1..5 {
            let sigma = stek.eigenvalues[j];
            let robin = a.robin_spectrum(sigma, 40).unwrap();
            let near_zero = robin
                .eigenvalues
                .iter()
                .map(|ev| ev.abs())
                .fold(f64::INFINITY, f64::min);
            assert!(near_zero < 1e-7, "sigma_{j}: nearest Robin eigenvalue {near_zero}");
        }
    }

    #[test]
    fn steklov_disk_fourier_oracle() {
        let mesh = Mesh::disk_polar(64, 3);
        let a = assemble(&mesh, &BoundaryConditionMap::new().set("rim", BoundaryCondition::Steklov(1.0))).unwrap();
        let s = a.steklov_spectrum(0.0, 7).unwrap();
        let expected = [0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
        for i in 0..7 {
            assert!(
                (s.eigenvalues[i] - expected[i]).abs() < 0.03,
                "mode {i}: {} vs {}",
                s.eigenvalues[i],
                expected[i]
            );
        }
    }

    #[test]
    fn disk_eigenvalues_decrease_in_alpha() {
        let mesh = Mesh::disk_polar(64, 2);
        let a = assemble(&mesh, &BoundaryConditionMap::new().set("rim", BoundaryCondition::Steklov(1.0))).unwrap();
        let alphas = [-2.0, -1.0, 0.0, 0.5];
        let mut prev: Option<Vec<f64>> = None;
        for &alpha in &alphas {
            let s = a.steklov_spectrum(alpha, 6).unwrap();
            if let Some(p) = prev {
                for i in 0..6 {
                    assert!(
                        s.eigenvalues[i] < p[i] + 1e-12,
                        "sigma_{i} not decreasing at alpha {alpha}"
                    );
                }
            }
            prev = Some(s.eigenvalues);
        }
    }

    #[test]
    fn dtn_derivative_matches_extension_weighted_mass() {
        let mesh = square_mesh(2);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Steklov(1.0))).unwrap();
        let alpha = 0.3;
        let h = 1e-5;
        let sp = a.dtn_matrix(alpha + h).unwrap();
        let sm = a.dtn_matrix(alpha - h).unwrap();
        let fd = (sp - sm) / (2.0 * h);
        let e = a.extension_operator(alpha).unwrap();
        let m = a.m.to_dense();
        let analytic = -(e.transpose() * m * e);
        let err = (&fd - &analytic).abs().max();
        assert!(err < 1e-4 * analytic.abs().max().max(1.0), "derivative error {err}");
    }

    #[test]
    fn rayleigh_quotient_identities() {
        let mesh = square_mesh(2);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Steklov(1.0))).unwrap();
        // Constant vector at alpha = 0 gives 0.
        let ones = vec![1.0; a.n_active];
        assert!(a.rayleigh_quotient(&ones, 0.0).unwrap().abs() < 1e-12);
        // Eigenpair reproduces its eigenvalue.
        let (eigs, vecs) = a.steklov_eigenpairs(0.0, 3).unwrap();
        let u: Vec<f64> = vecs.column(1).iter().copied().collect();
        let rq = a.rayleigh_quotient(&u, 0.0).unwrap();
        assert!((rq - eigs[1]).abs() < 1e-10, "rq {rq} vs {}", eigs[1]);
        // Trace orthogonal to constants bounds from below by sigma_1.
        let mut v: Vec<f64> = (0..a.n_active).map(|i| ((i * 37 % 101) as f64) / 101.0).collect();
        let bv = a.b_rho.mul_vec(&v);
        let b1 = a.b_rho.mul_vec(&ones);
        let c = bv.iter().sum::<f64>() / b1.iter().sum::<f64>();
        v.iter_mut().for_each(|x| *x -= c);
        let rq = a.rayleigh_quotient(&v, 0.0).unwrap();
        assert!(rq >= eigs[1] - 1e-10, "min-max violated: {rq} < {}", eigs[1]);
    }

    #[test]
    fn steklov_pencil_consistency_with_dtn() {
        let mesh = square_mesh(2);
        let a = assemble(&mesh, &all_sides(BoundaryCondition::Steklov(1.0))).unwrap();
        let s = a.dtn_matrix(0.0).unwrap();
        let b = a.b_rho.block(&a.steklov_dofs, &a.steklov_dofs);
        let eigs = eig::sym_pair_eigenvalues(&s, &b).unwrap();
        let stek = a.steklov_spectrum(0.0, 6).unwrap();
        for i in 0..6 {
            assert!((eigs[i] - stek.eigenvalues[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn sloshing_zero_density_classes_restrict_the_active_boundary() {
        let mesh = square_mesh(3);
        let mut map = BoundaryConditionMap::new();
        map.insert("s0", BoundaryCondition::Steklov(1.0));
        map.insert("s1", BoundaryCondition::Steklov(0.0));
        map.insert("s2", BoundaryCondition::Neumann);
        map.insert("s3", BoundaryCondition::Steklov(0.0));
        let a = assemble(&mesh, &map).unwrap();
        assert!(a.steklov_positive_dofs.len() < a.steklov_dofs.len());
        let s = a.steklov_spectrum(0.0, 5).unwrap();
        assert_eq!(s.eigenvalues.len(), 5);
        assert!(s.eigenvalues[0].abs() < 1e-10);
        assert!(s.eigenvalues.iter().all(|ev| ev.is_finite()));
    }

    #[test]
    fn uncovered_class_is_rejected() {
        let mesh = square_mesh(1);
        let mut map = BoundaryConditionMap::new();
        map.insert("s0", BoundaryCondition::Neumann);
        assert!(matches!(
            assemble(&mesh, &map),
            Err(Error::UncoveredBoundaryClass(_))
        ));
    }

    #[test]
    fn glued_tiles_assemble_identically_to_the_explicit_union_mesh() {
        use crate::tiling::{BoundaryPiece, GluedDomain, Gluing, Orientation, SideLabel, TileSpec};
        // Two unit squares glued along one side vs the same strip meshed
        // as one chart with matching nodes.
        let tile = TileSpec::new(
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            vec![
                SideLabel::free("bottom"),
                SideLabel::free("cap"),
                SideLabel::free("top"),
                SideLabel::free("cap"),
            ],
            vec![],
        )
        .unwrap();
        let domain = GluedDomain::from_parts(
            tile,
            2,
            vec![Gluing {
                a: (0, 1),
                b: (1, 3),
                orientation: Orientation::Reversed,
            }],
            vec![
                BoundaryPiece { tile: 0, side: 0, class: "bottom".into() },
                BoundaryPiece { tile: 0, side: 2, class: "top".into() },
                BoundaryPiece { tile: 0, side: 3, class: "cap".into() },
                BoundaryPiece { tile: 1, side: 0, class: "bottom".into() },
                BoundaryPiece { tile: 1, side: 2, class: "top".into() },
                BoundaryPiece { tile: 1, side: 1, class: "cap".into() },
            ],
        )
        .unwrap();
        let glued = build_mesh(&domain, 2).unwrap();
        let map = BoundaryConditionMap::new()
            .set("bottom", BoundaryCondition::Neumann)
            .set("top", BoundaryCondition::Neumann)
            .set("cap", BoundaryCondition::Neumann);
        let a1 = assemble(&glued, &map).unwrap();

        // Union mesh: translate tile 1's chart by (1, 0).
        let nn = glued.ref_mesh.nodes.len();
        let mut nodes = Vec::new();
        let mut ids = vec![usize::MAX; 2 * nn];
        for tile in 0..2 {
            for n in 0..nn {
                let g = glued.node_global[tile][n];
                if ids[tile * nn + n] == usize::MAX {
                    let mut found = usize::MAX;
                    if tile == 1 {
                        // reuse the id assigned through tile 0 if shared
                        for n0 in 0..nn {
                            if glued.node_global[0][n0] == g {
                                found = ids[n0];
                                break;
                            }
                        }
                    }
                    let id = if found != usize::MAX {
                        found
                    } else {
                        let p = glued.ref_mesh.nodes[n];
                        nodes.push([p[0] + tile as f64, p[1]]);
                        nodes.len() - 1
                    };
                    for t2 in 0..2 {
                        for n2 in 0..nn {
                            if glued.node_global[t2][n2] == g {
                                ids[t2 * nn + n2] = id;
                            }
                        }
                    }
                }
            }
        }
        let tris: Vec<[usize; 3]> = glued
            .triangles
            .iter()
            .map(|&(t, rt)| glued.ref_mesh.tris[rt].map(|n| ids[t * nn + n]))
            .collect();
        let boundary: Vec<([usize; 2], String)> = glued
            .boundary_edges
            .iter()
            .map(|e| {
                let (t0, n0) = glued.vertex_rep[e.v[0]];
                let (t1, n1) = glued.vertex_rep[e.v[1]];
                (
                    [ids[t0 * nn + n0], ids[t1 * nn + n1]],
                    glued.classes[e.class].clone(),
                )
            })
            .collect();
        let union = Mesh::from_single_chart(nodes, tris, boundary, 2);
        let a2 = assemble(&union, &map).unwrap();

        // Same dof count; compare matrices through the vertex correspondence.
        assert_eq!(a1.n_active, a2.n_active);
        let perm: Vec<usize> = (0..glued.vertex_count)
            .map(|v| {
                let (t, n) = glued.vertex_rep[v];
                ids[t * nn + n]
            })
            .collect();
        let k1 = a1.k.to_dense();
        let k2 = a2.k.to_dense();
        let m1 = a1.m.to_dense();
        let m2 = a2.m.to_dense();
        for r in 0..a1.n_active {
            for c in 0..a1.n_active {
                assert!((k1[(r, c)] - k2[(perm[r], perm[c])]).abs() < 1e-13);
                assert!((m1[(r, c)] - m2[(perm[r], perm[c])]).abs() < 1e-13);
            }
        }
    }
}

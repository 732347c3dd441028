//! Builtin scenes: the GL(3,F₂) tiled-surface pair, its involution
//! quotients and density isometry, the directly-constructed mixed-boundary
//! pairs, and the disk validation oracle.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::groups::matf2::{self, Gl3F2, StandardGenerators};
use crate::groups::{coset_action, intertwiner, CosetAction, Intertwiner};
use crate::schreier::{schreier_graph, ColoredGraph};
use crate::spectral::{BoundaryCondition, BoundaryConditionMap};
use crate::tiling::builders::{
    cross_tile, hyp_glued_domain, leg_a_glued_domain, leg_b_glued_domain, CROSS_HALF_TURN,
    CROSS_REFLECTION,
};
use crate::tiling::mesh::{build_mesh, induced_vertex_iso, Mesh};
use crate::tiling::{build_surface, quotient_by_involution, GluedDomain};

/// The tiled-surface pair over GL(3, F₂) with the pinned generating set.
pub struct SunadaScene {
    pub ctx: Gl3F2,
    pub gens: StandardGenerators,
    pub action1: CosetAction,
    pub action2: CosetAction,
    pub graph1: ColoredGraph,
    pub graph2: ColoredGraph,
    pub domain1: GluedDomain,
    pub domain2: GluedDomain,
}

impl SunadaScene {
    pub fn new() -> Result<Self> {
        let ctx = matf2::gl3_f2()?;
        let gens = matf2::gl3f2_standard_generators(&ctx);
        let action1 = coset_action(&ctx.group, &ctx.h1);
        let action2 = coset_action(&ctx.group, &ctx.h2);
        let graph1 =
            schreier_graph(&ctx.group, &ctx.h1, &[gens.a, gens.b])?.with_colors(&["a", "b"])?;
        let graph2 =
            schreier_graph(&ctx.group, &ctx.h2, &[gens.a, gens.b])?.with_colors(&["a", "b"])?;
        let tile = cross_tile()?;
        let domain1 = build_surface(&graph1, &tile)?;
        let domain2 = build_surface(&graph2, &tile)?;
        Ok(SunadaScene {
            ctx,
            gens,
            action1,
            action2,
            graph1,
            graph2,
            domain1,
            domain2,
        })
    }

    pub fn meshes(&self, refinement: usize) -> Result<(Mesh, Mesh)> {
        Ok((
            build_mesh(&self.domain1, refinement)?,
            build_mesh(&self.domain2, refinement)?,
        ))
    }

    /// The exact rational intertwiner between the two coset
    /// representations, rows indexed by `H₁\G`, columns by `H₂\G`.
    pub fn intertwiner(&self) -> Result<Intertwiner> {
        intertwiner(&self.ctx.group, &self.ctx.h1, &self.ctx.h2)
    }

    /// Steklov density map: constant one on every free class.
    pub fn unit_density(&self) -> BTreeMap<String, f64> {
        self.domain1
            .tile
            .free_classes()
            .into_iter()
            .map(|c| (c, 1.0))
            .collect()
    }

    /// Boundary map assigning Steklov conditions with the given per-class
    /// densities to every free class.
    pub fn steklov_bc(&self, rho: &BTreeMap<String, f64>) -> BoundaryConditionMap {
        let mut map = BoundaryConditionMap::new();
        for class in self.domain1.tile.free_classes() {
            let r = rho.get(&class).copied().unwrap_or(1.0);
            map.insert(&class, BoundaryCondition::Steklov(r));
        }
        map
    }

    /// The involution quotients of the two surfaces: tile permutation is
    /// right multiplication by the pinned swap involution, the tile
    /// symmetry the diagonal reflection.
    pub fn quotient_domains(&self) -> Result<(GluedDomain, GluedDomain)> {
        let perm1: Vec<usize> = (0..self.graph1.vertex_count)
            .map(|v| self.action1.apply(self.gens.swap, v))
            .collect();
        let perm2: Vec<usize> = (0..self.graph2.vertex_count)
            .map(|v| self.action2.apply(self.gens.swap, v))
            .collect();
        let q1 = quotient_by_involution(&self.domain1, perm1, CROSS_REFLECTION)?;
        let q2 = quotient_by_involution(&self.domain2, perm2, CROSS_REFLECTION)?;
        Ok((q1, q2))
    }

    pub fn quotient_meshes(&self, refinement: usize) -> Result<(Mesh, Mesh)> {
        let (q1, q2) = self.quotient_domains()?;
        Ok((build_mesh(&q1, refinement)?, build_mesh(&q2, refinement)?))
    }

    /// Tile map of the transpose-inverse isometry `M₁ → M₂` covering the
    /// half-turn of the tile.
    pub fn density_tau_tile_map(&self) -> Vec<usize> {
        (0..self.action1.cosets())
            .map(|v| {
                let rep = self.action1.reps[v];
                let theta = self
                    .ctx
                    .group
                    .inv(self.ctx.index_of(matf2::transpose(self.ctx.matrix(rep))).unwrap());
                self.action2.coset_of[theta]
            })
            .collect()
    }

    /// Verified vertex map `mesh1 → mesh2` realizing the density isometry.
    pub fn density_tau_vertex_map(&self, mesh1: &Mesh, mesh2: &Mesh) -> Result<Vec<usize>> {
        let tile_map = self.density_tau_tile_map();
        let tile = &self.domain1.tile;
        let node_perm = mesh1
            .ref_mesh
            .symmetry_node_perm(&tile.symmetries[CROSS_HALF_TURN])?;
        induced_vertex_iso(mesh1, mesh2, &tile_map, &node_perm)
    }

    /// A density that is invariant under the quotient reflection pairing
    /// but not under the half-turn: 1.5 on the `se1`/`nw2` chamfer pair.
    pub fn asymmetric_density(&self) -> BTreeMap<String, f64> {
        let mut rho = self.unit_density();
        rho.insert("se1".into(), 1.5);
        rho.insert("nw2".into(), 1.5);
        rho
    }
}

/// The two directly-transplanted mixed-boundary pairs built from the
/// notched right-triangle tile, with their boundary condition maps.
pub struct MixedPairScene {
    /// Two tiles glued along the hypotenuse.
    pub domain_a: GluedDomain,
    /// The reglued partner (notched leg for variant A, plain leg for B).
    pub domain_b: GluedDomain,
    pub bc_a: BoundaryConditionMap,
    pub bc_b: BoundaryConditionMap,
    /// Transplantation tile matrix, rows indexed by `domain_b` tiles.
    pub t: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedPairVariant {
    /// Hypotenuse-glued vs notched-leg-glued (square vs triangle with an
    /// interior hole).
    A,
    /// Hypotenuse-glued vs plain-leg-glued.
    B,
}

pub fn mixed_pair_scene(variant: MixedPairVariant, arc_segments: usize) -> Result<MixedPairScene> {
    let domain_a = hyp_glued_domain(arc_segments)?;
    let (domain_b, bc_a, bc_b) = match variant {
        MixedPairVariant::A => {
            let domain_b = leg_a_glued_domain(arc_segments)?;
            let bc_a = BoundaryConditionMap::new()
                .set("legA_0", BoundaryCondition::Neumann)
                .set("legA_1", BoundaryCondition::Dirichlet)
                .set("legB_0", BoundaryCondition::Dirichlet)
                .set("legB_1", BoundaryCondition::Dirichlet)
                .set("arc_0", BoundaryCondition::Steklov(1.0))
                .set("arc_1", BoundaryCondition::Steklov(1.0));
            let bc_b = BoundaryConditionMap::new()
                .set("hyp_0", BoundaryCondition::Dirichlet)
                .set("hyp_1", BoundaryCondition::Neumann)
                .set("legB_0", BoundaryCondition::Dirichlet)
                .set("legB_1", BoundaryCondition::Dirichlet)
                .set("arc_0", BoundaryCondition::Steklov(1.0))
                .set("arc_1", BoundaryCondition::Steklov(1.0));
            (domain_b, bc_a, bc_b)
        }
        MixedPairVariant::B => {
            let domain_b = leg_b_glued_domain(arc_segments)?;
            let bc_a = BoundaryConditionMap::new()
                .set("legA_0", BoundaryCondition::Dirichlet)
                .set("legA_1", BoundaryCondition::Dirichlet)
                .set("legB_0", BoundaryCondition::Neumann)
                .set("legB_1", BoundaryCondition::Dirichlet)
                .set("arc_0", BoundaryCondition::Steklov(1.0))
                .set("arc_1", BoundaryCondition::Steklov(1.0));
            let bc_b = BoundaryConditionMap::new()
                .set("hyp_0", BoundaryCondition::Dirichlet)
                .set("hyp_1", BoundaryCondition::Neumann)
                .set("legA_0", BoundaryCondition::Dirichlet)
                .set("legA_1", BoundaryCondition::Dirichlet)
                .set("arc_0", BoundaryCondition::Steklov(1.0))
                .set("arc_1", BoundaryCondition::Steklov(1.0));
            (domain_b, bc_a, bc_b)
        }
    };
    let s = 1.0 / 2.0f64.sqrt();
    let t = DMatrix::from_row_slice(2, 2, &[s, -s, s, s]);
    Ok(MixedPairScene {
        domain_a,
        domain_b,
        bc_a,
        bc_b,
        t,
    })
}

/// Runtime configuration of a pipeline run.
#[derive(Debug, Clone, Deserialize)]
pub struct SceneConfig {
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default = "default_refinement")]
    pub refinement: usize,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_sigmas")]
    pub sigmas: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default = "default_arc_segments")]
    pub arc_segments: usize,
    #[serde(default = "default_n_rim")]
    pub n_rim: usize,
    /// Per-class density overrides (classes default to 1).
    #[serde(default)]
    pub density: BTreeMap<String, f64>,
    /// Group file path for `gassmann-check` on external groups.
    #[serde(default)]
    pub group_file: Option<String>,
    /// Names of the two subgroups inside the group file.
    #[serde(default)]
    pub subgroup_pair: Option<(String, String)>,
    /// Tile file path for `build-domain`/`spectrum` on external tiles.
    #[serde(default)]
    pub tile_file: Option<String>,
    /// Boundary conditions per class for external tiles:
    /// `dirichlet` | `neumann` | `robin:<sigma>` | `steklov:<rho>`.
    #[serde(default)]
    pub bc: BTreeMap<String, String>,
}

fn default_kind() -> String {
    "gl3f2".into()
}
fn default_refinement() -> usize {
    2
}
fn default_k() -> usize {
    25
}
fn default_alphas() -> Vec<f64> {
    vec![-2.0, 0.0, 3.0]
}
fn default_sigmas() -> Vec<f64> {
    vec![0.1, 1.0, 10.0]
}
fn default_tol() -> f64 {
    1e-8
}
fn default_seed() -> u64 {
    7
}
fn default_arc_segments() -> usize {
    4
}
fn default_n_rim() -> usize {
    64
}

impl Default for SceneConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config uses defaults")
    }
}

impl SceneConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Config("k must be >= 1".into()));
        }
        if self.refinement < 1 {
            return Err(Error::Config("refinement must be >= 1".into()));
        }
        if self.tol <= 0.0 {
            return Err(Error::Config("tol must be positive".into()));
        }
        if !["gl3f2", "mixed-pair-a", "mixed-pair-b", "disk", "square", "file"]
            .contains(&self.kind.as_str())
        {
            return Err(Error::Config(format!("unknown scene kind `{}`", self.kind)));
        }
        Ok(())
    }

    pub fn parse_bc_map(&self) -> Result<BoundaryConditionMap> {
        let mut map = BoundaryConditionMap::new();
        for (class, spec) in &self.bc {
            let bc = if spec == "dirichlet" {
                BoundaryCondition::Dirichlet
            } else if spec == "neumann" {
                BoundaryCondition::Neumann
            } else if let Some(v) = spec.strip_prefix("robin:") {
                BoundaryCondition::Robin(
                    v.parse().map_err(|e| Error::Config(format!("bad robin value: {e}")))?,
                )
            } else if let Some(v) = spec.strip_prefix("steklov:") {
                BoundaryCondition::Steklov(
                    v.parse().map_err(|e| Error::Config(format!("bad steklov value: {e}")))?,
                )
            } else {
                return Err(Error::Config(format!("unknown boundary condition `{spec}`")));
            };
            map.insert(class, bc);
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl3f2_scene_builds_seven_tile_surfaces() {
        let scene = SunadaScene::new().unwrap();
        assert_eq!(scene.graph1.vertex_count, 7);
        assert_eq!(scene.graph2.vertex_count, 7);
        assert_eq!(scene.domain1.tile_count, 7);
        let (m1, m2) = scene.meshes(1).unwrap();
        assert!(m1.is_connected() && m2.is_connected());
        assert!((m1.total_area() - 7.0 * 14.0).abs() < 1e-9);
        assert!((m2.total_area() - 7.0 * 14.0).abs() < 1e-9);
    }

    #[test]
    fn quotient_domains_build_with_mirror_edges() {
        let scene = SunadaScene::new().unwrap();
        let (q1, q2) = scene.quotient_meshes(1).unwrap();
        for q in [&q1, &q2] {
            assert!(q.is_connected());
            assert!(q.classes.iter().any(|c| c == "mirror"));
            let mirror_len: f64 = q
                .boundary_edges
                .iter()
                .filter(|e| q.classes[e.class] == "mirror")
                .map(|e| e.len)
                .sum();
            assert!(mirror_len > 0.0);
        }
        // Quotient halves the area.
        let (m1, _) = scene.meshes(1).unwrap();
        assert!((q1.total_area() - m1.total_area() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn density_tau_is_a_mesh_isometry() {
        let scene = SunadaScene::new().unwrap();
        let (m1, m2) = scene.meshes(1).unwrap();
        let map = scene.density_tau_vertex_map(&m1, &m2).unwrap();
        assert_eq!(map.len(), m1.vertex_count);
    }

    #[test]
    fn involution_search_finds_the_swap_quotient() {
        use crate::tiling::find_involutions;
        let scene = SunadaScene::new().unwrap();
        let found = find_involutions(&scene.graph1, &scene.domain1);
        let perm1: Vec<usize> = (0..7).map(|v| scene.action1.apply(scene.gens.swap, v)).collect();
        assert!(
            found.iter().any(|(p, s)| *p == perm1 && *s == CROSS_REFLECTION),
            "expected involution not found among {} candidates",
            found.len()
        );
    }

    #[test]
    fn config_defaults_and_parsing() {
        let cfg = SceneConfig::default();
        assert_eq!(cfg.kind, "gl3f2");
        assert_eq!(cfg.k, 25);
        cfg.validate().unwrap();
        let cfg = SceneConfig::from_toml("kind = \"disk\"\nrefinement = 3\nk = 7\n").unwrap();
        assert_eq!(cfg.kind, "disk");
        assert_eq!(cfg.refinement, 3);
        let bad = SceneConfig::from_toml("kind = \"nope\"").unwrap();
        assert!(bad.validate().is_err());
    }
}

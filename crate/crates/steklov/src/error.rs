//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group closure exceeded cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },

    #[error("generator {index} is not invertible")]
    NonInvertibleGenerator { index: usize },

    #[error("generator {index} is malformed: {reason}")]
    MalformedGenerator { index: usize, reason: String },

    #[error("not a valid group: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("identity element is not allowed in a generating set for a graph")]
    IdentityGenerator,

    #[error("subgroups are not almost conjugate; no intertwiner exists")]
    NotAlmostConjugate,

    #[error("coset spaces have different sizes ({0} vs {1})")]
    IndexMismatch(usize, usize),

    #[error("no invertible intertwiner found in the orbit-indicator space")]
    NoInvertibleIntertwiner,

    #[error("tile is invalid: {0}")]
    InvalidTile(String),

    #[error("tile glue labels do not match graph colors: {0}")]
    LabelColorMismatch(String),

    #[error("glued sides differ in length: {0:.3e} vs {1:.3e}")]
    SideLengthMismatch(f64, f64),

    #[error("domain is invalid: {0}")]
    InvalidDomain(String),

    #[error("involution is not compatible with the glued domain: {0}")]
    IncompatibleInvolution(String),

    #[error("mesh construction failed: {0}")]
    MeshConstruction(String),

    #[error("mesh is disconnected")]
    DisconnectedMesh,

    #[error("boundary class `{0}` is not covered by the boundary condition map")]
    UncoveredBoundaryClass(String),

    #[error("alpha = {alpha} is too close to the interior Dirichlet spectrum (pivot margin {margin:.3e} below threshold {threshold:.3e})")]
    AlphaNearDirichletSpectrum { alpha: f64, margin: f64, threshold: f64 },

    #[error("eigensolver did not converge: {0}")]
    EigensolverFailure(String),

    #[error("empty active boundary: no Steklov class with positive density")]
    EmptyActiveBoundary,

    #[error("zero denominator in Rayleigh quotient")]
    ZeroRayleighDenominator,

    #[error("spectra are not comparable: {0}")]
    ParameterMismatch(String),

    #[error("transplantation failed: {0}")]
    Transplantation(String),

    #[error("density is invariant under the conjugating isometry; comparison is degenerate")]
    DensityTauInvariant,

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code for CLI error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ClosureCapExceeded { .. } => "closure_cap_exceeded",
            Error::NonInvertibleGenerator { .. } => "non_invertible_generator",
            Error::MalformedGenerator { .. } => "malformed_generator",
            Error::InvalidGroup(_) => "invalid_group",
            Error::InvalidSubgroup(_) => "invalid_subgroup",
            Error::IdentityGenerator => "identity_generator",
            Error::NotAlmostConjugate => "not_almost_conjugate",
            Error::IndexMismatch(_, _) => "index_mismatch",
            Error::NoInvertibleIntertwiner => "no_invertible_intertwiner",
            Error::InvalidTile(_) => "invalid_tile",
            Error::LabelColorMismatch(_) => "label_color_mismatch",
            Error::SideLengthMismatch(_, _) => "side_length_mismatch",
            Error::InvalidDomain(_) => "invalid_domain",
            Error::IncompatibleInvolution(_) => "incompatible_involution",
            Error::MeshConstruction(_) => "mesh_construction",
            Error::DisconnectedMesh => "disconnected_mesh",
            Error::UncoveredBoundaryClass(_) => "uncovered_boundary_class",
            Error::AlphaNearDirichletSpectrum { .. } => "alpha_near_dirichlet_spectrum",
            Error::EigensolverFailure(_) => "eigensolver_failure",
            Error::EmptyActiveBoundary => "empty_active_boundary",
            Error::ZeroRayleighDenominator => "zero_rayleigh_denominator",
            Error::ParameterMismatch(_) => "parameter_mismatch",
            Error::Transplantation(_) => "transplantation",
            Error::DensityTauInvariant => "density_tau_invariant",
            Error::Config(_) => "config",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

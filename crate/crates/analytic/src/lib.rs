//! Spectral side of the torsion of cones: zeta functions of model
//! sections, the closed-form analytic torsion of cones and frusta, and a
//! numerical engine for the singular Sturm–Liouville problems behind them.

pub mod cone_analytic;
pub mod profile;
pub mod special;
pub mod spectra;
pub mod sturm_liouville;

pub use cone_analytic::{cheeger_muller_check, cone_global_torsion, frustum_global_torsion, ConeGeometry, MiddlePerversity};
pub use profile::Profile;
pub use spectra::{Section, SectionSpectrum};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("zeta function has a pole at s = {s}")]
    Pole { s: f64 },
    #[error("{0} is not available for this section")]
    UnsupportedSection(String),
    #[error("profile integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("regularized sum needs |α| below the first eigenvalue: {0}")]
    PoleCollision(String),
    #[error("sum of terms disagrees with closed form: {0}")]
    AssemblyMismatch(String),
    #[error("series did not converge: {0}")]
    SeriesDivergence(String),
    #[error("integrator failed: {0}")]
    Stiffness(String),
    #[error("could not bracket eigenvalue: {0}")]
    BracketFailure(String),
    #[error("large-λ constant unknown: {0}")]
    UnknownAsymptotics(String),
    #[error("ladder file: {0}")]
    Ladder(String),
    #[error(transparent)]
    Core(#[from] icone_core::CoreError),
}

pub type Result<T> = std::result::Result<T, AnalyticError>;

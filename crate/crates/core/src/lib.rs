//! Accuracy of connectivity-based (Rips complex) coverage-hole detection for
//! sensor networks deployed on a sphere.
//!
//! The crate samples Poisson deployments, detects spherical triangular holes
//! (uncovered regions inside a Rips triangle that is not a Čech triangle),
//! estimates their area proportion by Monte Carlo and evaluates closed-form
//! lower and upper bounds on that proportion by nested Gauss-Legendre
//! quadrature.

pub mod bounds;
pub mod complex;
pub mod config;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod hole;
pub mod process;
pub mod quadrature;

pub use bounds::{
    bounds, classify, lower_bound, required_intensity, upper_bound, BoundEvaluator, BoundResult, BoundTables, CaseLabel,
};
pub use complex::{build_cech2, build_rips2, check_inclusion, rips_threshold, Complex2, ComplexKind};
pub use config::NetworkConfig;
pub use error::{Error, Result};
pub use geometry::{Cap, SphericalPoint, SphericalTriangle};
pub use hole::{estimate, estimate_p, estimate_second_case, in_triangular_hole, HoleEstimates, MCEstimate};
pub use process::{sample_cap_poisson, sample_sphere_poisson, NodeSet, Region};

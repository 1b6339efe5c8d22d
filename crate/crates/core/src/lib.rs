//! Numerical laboratory for atoms in very strong magnetic fields.
//!
//! The crate evaluates the field-scaled potentials of the lowest Landau
//! band, solves one-dimensional one- and few-body ground-state problems on
//! uniform grids, and implements the closed forms and bounds that tie the
//! δ-interaction model to its solvable comparison model and to hyper-strong
//! mean-field theory.
//!
//! Vector kernels run on rayon when the default `parallel` feature is on;
//! reductions are chunked so results do not depend on the thread count.

pub mod comparison;
pub mod error;
pub mod fewbody;
pub mod grid;
pub mod lanczos;
pub mod landau;
pub mod meanfield;
pub mod par;
pub mod potential;
pub mod quad;
pub mod richardson;
pub mod schrod1d;
pub mod tridiag;

pub use comparison::{solve_comparison, ComparisonSolution};
pub use error::{Error, Result};
pub use fewbody::{assemble, ground_energy, Family, Hamiltonian, ModelParams, Regularization, SymmetrySector};
pub use grid::Grid1D;
pub use landau::{delta_bound, solve_scale, DeltaBoundInputs, FieldScale};
pub use meanfield::{hyperstrong_energy, lower_bound, minimize_hyperstrong, BoundCertificate, Density1D};
pub use par::Execution;
pub use schrod1d::{EnergyReport, Method, Wavefunction1D};

//! Single operations, printed as JSON.

use clap::{Subcommand, ValueEnum};
use hfatom::comparison::solve_comparison;
use hfatom::fewbody::{assemble, ground_energy, Family, ModelParams, Regularization, SymmetrySector};
use hfatom::landau::{delta_bound, landau_kernel, solve_scale, DeltaBoundInputs};
use hfatom::meanfield::{hyperstrong_energy, operator_inequality_eigenvalue, w_potential};
use hfatom::schrod1d::delta_well_exact;
use hfatom::Grid1D;
use serde_json::{json, Value};

use crate::error::{usage, CliError};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelFamily {
    Delta,
    DeltaRescaled,
    Comparison,
}

#[derive(Debug, Subcommand)]
pub enum EvalOp {
    /// L(B) from L sinh(L/2) = √B
    Scale {
        #[arg(long)]
        b: f64,
    },
    /// V_{B,r}(z)
    Potential {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
    },
    /// Bound on the δ-approximation error
    DeltaBound {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        kinetic: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        b: f64,
    },
    /// Lowest-Landau-band projector kernel
    Kernel {
        #[arg(long)]
        b: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Vec<f64>,
    },
    /// Closed-form hyper-strong energy E^HS(λ)
    Hyperstrong {
        #[arg(long)]
        lambda: f64,
    },
    /// Comparison-model solution
    Comparison {
        #[arg(long)]
        z: f64,
        #[arg(long)]
        n: usize,
    },
    /// One-particle δ-well
    DeltaWell {
        #[arg(long)]
        z: f64,
    },
    /// w_{Z,a,b}(at)
    W {
        #[arg(long)]
        z: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        at: f64,
    },
    /// Lowest eigenvalue of p² + δ − factor·W_b
    OperatorInequality {
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        factor: f64,
        #[arg(long, default_value_t = 60.0)]
        half_width: f64,
        #[arg(long, default_value_t = 6001)]
        points: usize,
    },
    /// Few-body ground energy on one grid
    GroundEnergy {
        #[arg(long, value_enum)]
        family: ModelFamily,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        half_width: f64,
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

pub fn run(op: &EvalOp) -> Result<Value, CliError> {
    Ok(match op {
        EvalOp::Scale { b } => to_json(&solve_scale(*b)?),
        EvalOp::Potential { b, r, z } => json!({ "value": solve_scale(*b)?.potential(*r, *z)? }),
        EvalOp::DeltaBound { lambda, kinetic, r, b } => {
            let inputs = DeltaBoundInputs::new(*lambda, *kinetic, *r, *b)?;
            json!({ "bound": delta_bound(&inputs)?, "optimal_radius": inputs.optimal_radius() })
        }
        EvalOp::Kernel { b, x, y } => {
            if x.len() != 2 || y.len() != 2 {
                return usage("--x and --y take two coordinates each");
            }
            let k = landau_kernel(*b, [x[0], x[1]], [y[0], y[1]])?.value;
            json!({ "re": k.re, "im": k.im })
        }
        EvalOp::Hyperstrong { lambda } => json!({ "energy": hyperstrong_energy(*lambda)? }),
        EvalOp::Comparison { z, n } => to_json(&solve_comparison(*z, *n)?),
        EvalOp::DeltaWell { z } => {
            let (report, state) = delta_well_exact(*z)?;
            json!({ "energy": report.energy, "decay_rate": state.decay_rate })
        }
        EvalOp::W { z, a, b, at } => json!({ "value": w_potential(*z, *a, *b, *at) }),
        EvalOp::OperatorInequality {
            b,
            factor,
            half_width,
            points,
        } => {
            let g = Grid1D::new(*half_width, *points)?;
            json!({ "lowest_eigenvalue": operator_inequality_eigenvalue(*b, *factor, g)? })
        }
        EvalOp::GroundEnergy {
            family,
            z,
            n,
            half_width,
            points,
            seed,
        } => {
            let family = match family {
                ModelFamily::Delta => Family::Delta,
                ModelFamily::DeltaRescaled => Family::DeltaRescaled,
                ModelFamily::Comparison => Family::SymmetrizedComparison,
            };
            let g = Grid1D::new(*half_width, *points)?;
            let h = assemble(family, ModelParams::new(*z, *n), g, Regularization::default())?;
            to_json(&ground_energy(&h, SymmetrySector::Bosonic, *seed)?)
        }
    })
}

//! Catalogue of one-dimensional potential profiles and their realization on
//! uniform grids.

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Result};
use crate::grid::Grid1D;
use crate::landau::{landau_averaged_integral, landau_averaged_potential, FieldScale};
use crate::quad::QuadConfig;

/// Grid realization of a unit-strength δ-function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeltaScheme {
    /// Weight `1/dx` on the node at the origin.
    OnSite,
    /// Narrow Gaussian of the given standard deviation, normalized so that
    /// its nodal values sum to one over the grid.
    Gaussian { width: f64 },
}

/// How a smooth profile is transferred to nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Sampling {
    /// Point values at the nodes.
    Nodal,
    /// Average over the cell `[z - dx/2, z + dx/2]` around each node. Keeps
    /// the weight of profiles much narrower than the spacing.
    #[default]
    CellAverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PotentialSpec {
    /// `V_{B,r}`.
    ScaledCoulomb { scale: FieldScale, r: f64 },
    /// `(z² + r²)^{-1/2}`.
    Coulomb { r: f64 },
    /// `δ(z)`.
    Delta(DeltaScheme),
    /// `b² e^{−b|z|} / (2b + 1)`.
    Exponential { b: f64 },
    /// Coulomb averaged over the m = 0 lowest-Landau density at field `B`.
    LandauAveraged { b_field: f64 },
    /// Values given node by node.
    Tabulated { values: Vec<f64> },
}

fn exp_primitive(b: f64, z: f64) -> f64 {
    z.signum() * -(-b * z.abs()).exp_m1() / b
}

impl PotentialSpec {
    /// Point value, when the profile has one.
    pub fn value(&self, z: f64) -> Result<f64> {
        match self {
            Self::ScaledCoulomb { scale, r } => scale.potential(*r, z),
            Self::Coulomb { r } => {
                require_positive("r", *r)?;
                Ok(1.0 / (z * z + r * r).sqrt())
            }
            Self::Exponential { b } => Ok(b * b / (2.0 * b + 1.0) * (-b * z.abs()).exp()),
            Self::LandauAveraged { b_field } => landau_averaged_potential(*b_field, z, &QuadConfig::default()),
            Self::Delta(_) | Self::Tabulated { .. } => domain("profile has no point values"),
        }
    }

    fn cell_integral(&self, z1: f64, z2: f64) -> Result<f64> {
        match self {
            Self::ScaledCoulomb { scale, r } => {
                require_positive("r", *r)?;
                Ok(scale.potential_integral(*r, z1, z2))
            }
            Self::Coulomb { r } => {
                require_positive("r", *r)?;
                Ok((z2 / r).asinh() - (z1 / r).asinh())
            }
            Self::Exponential { b } => Ok(b * b / (2.0 * b + 1.0) * (exp_primitive(*b, z2) - exp_primitive(*b, z1))),
            Self::LandauAveraged { b_field } => landau_averaged_integral(*b_field, z1, z2, &QuadConfig::default()),
            Self::Delta(_) | Self::Tabulated { .. } => unreachable!("handled by caller"),
        }
    }

    /// Values at the offsets `k·dx` for `k = -kmax..=kmax`, index `k + kmax`.
    pub fn offset_table(&self, dx: f64, kmax: usize, sampling: Sampling) -> Result<Vec<f64>> {
        require_positive("dx", dx)?;
        let len = 2 * kmax + 1;
        match self {
            Self::Delta(DeltaScheme::OnSite) => {
                let mut t = vec![0.0; len];
                t[kmax] = 1.0 / dx;
                Ok(t)
            }
            Self::Delta(DeltaScheme::Gaussian { width }) => {
                require_positive("width", *width)?;
                let mut t: Vec<f64> = (0..len)
                    .map(|i| {
                        let z = (i as f64 - kmax as f64) * dx / width;
                        (-0.5 * z * z).exp()
                    })
                    .collect();
                let mass: f64 = t.iter().sum::<f64>() * dx;
                t.iter_mut().for_each(|v| *v /= mass);
                Ok(t)
            }
            Self::Tabulated { values } => {
                if values.len() != len {
                    return domain(format!(
                        "tabulated potential has {} values, grid needs {len}",
                        values.len()
                    ));
                }
                Ok(values.clone())
            }
            _ => {
                let mut t = Vec::with_capacity(len);
                for i in 0..len {
                    let z = (i as f64 - kmax as f64) * dx;
                    let v = match sampling {
                        Sampling::Nodal => self.value(z)?,
                        Sampling::CellAverage => self.cell_integral(z - 0.5 * dx, z + 0.5 * dx)? / dx,
                    };
                    t.push(v);
                }
                Ok(t)
            }
        }
    }

    /// Values at the grid nodes.
    pub fn on_grid(&self, grid: &Grid1D, sampling: Sampling) -> Result<Vec<f64>> {
        self.offset_table(grid.dx(), grid.center(), sampling)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landau::solve_scale;
    use approx::assert_relative_eq;

    #[test]
    fn on_site_delta_has_unit_weight() {
        let g = Grid1D::new(1.0, 11).unwrap();
        let v = PotentialSpec::Delta(DeltaScheme::OnSite)
            .on_grid(&g, Sampling::Nodal)
            .unwrap();
        assert_relative_eq!(v.iter().sum::<f64>() * g.dx(), 1.0, max_relative = 1e-15);
        let v = PotentialSpec::Delta(DeltaScheme::Gaussian { width: 0.2 })
            .on_grid(&g, Sampling::Nodal)
            .unwrap();
        assert_relative_eq!(v.iter().sum::<f64>() * g.dx(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn cell_average_keeps_the_weight_of_a_sharp_profile() {
        let scale = solve_scale(1e12).unwrap();
        let spec = PotentialSpec::ScaledCoulomb { scale, r: 1.0 };
        let g = Grid1D::new(1.0, 101).unwrap();
        let v = spec.on_grid(&g, Sampling::CellAverage).unwrap();
        // The cells tile [-1 - dx/2, 1 + dx/2].
        let exact = scale.potential_integral(1.0, -1.0 - g.dx() / 2.0, 1.0 + g.dx() / 2.0);
        assert_relative_eq!(v.iter().sum::<f64>() * g.dx(), exact, max_relative = 1e-12);
    }

    #[test]
    fn exponential_cell_average_approaches_nodal_value() {
        let spec = PotentialSpec::Exponential { b: 2.0 };
        let g = Grid1D::new(4.0, 4001).unwrap();
        let cell = spec.on_grid(&g, Sampling::CellAverage).unwrap();
        let nodal = spec.on_grid(&g, Sampling::Nodal).unwrap();
        let j = g.center() + 500;
        assert_relative_eq!(cell[j], nodal[j], max_relative = 1e-5);
    }

    #[test]
    fn tabulated_length_is_checked() {
        let g = Grid1D::new(1.0, 5).unwrap();
        let spec = PotentialSpec::Tabulated { values: vec![0.0; 4] };
        assert!(spec.on_grid(&g, Sampling::Nodal).is_err());
    }
}

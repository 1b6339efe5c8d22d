//! Single-particle ground states on a line.

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_finite, require_positive, Result};
use crate::grid::Grid1D;
use crate::potential::{DeltaScheme, PotentialSpec, Sampling};
use crate::richardson::extrapolate;
use crate::tridiag::SymTridiagonal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Eigensolver,
    Analytic,
    Extrapolated,
}

/// A ground-state energy together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub method: Method,
    /// Spacing of the finest grid involved (0 for closed forms).
    pub dx: f64,
    /// Richardson correction size or solver residual.
    pub error_estimate: f64,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

impl EnergyReport {
    pub fn analytic(energy: f64) -> Self {
        Self {
            energy,
            method: Method::Analytic,
            dx: 0.0,
            error_estimate: 0.0,
            iterations: 0,
            warnings: Vec::new(),
        }
    }
}

/// Nodal values on a grid, normalized so that `Σ |ψ_j|² dx = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wavefunction1D {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl Wavefunction1D {
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.dx()
    }

    pub fn at_origin(&self) -> f64 {
        self.values[self.grid.center()]
    }

    /// Discrete `∫ |ψ'|²`, including the two links to the Dirichlet ghosts.
    pub fn kinetic_energy(&self) -> f64 {
        let dx = self.grid.dx();
        let v = &self.values;
        let inner: f64 = v.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
        (inner + v[0] * v[0] + v[v.len() - 1] * v[v.len() - 1]) / dx
    }

    /// Piecewise-linear interpolation; zero outside the grid.
    pub fn interpolate(&self, z: f64) -> f64 {
        let t = (z + self.grid.half_width()) / self.grid.dx();
        if t < 0.0 || t > (self.grid.len() - 1) as f64 {
            return 0.0;
        }
        let j = (t.floor() as usize).min(self.grid.len() - 2);
        let f = t - j as f64;
        (1.0 - f) * self.values[j] + f * self.values[j + 1]
    }
}

pub(crate) fn finite_difference_operator(kinetic: f64, potential: &[f64], grid: &Grid1D) -> SymTridiagonal {
    let inv = kinetic / (grid.dx() * grid.dx());
    let diag = potential.iter().map(|v| 2.0 * inv + v).collect();
    SymTridiagonal::new(diag, vec![-inv; grid.len() - 1])
}

/// Lowest eigenpair of `−c D₂ + diag(potential)`.
pub fn ground_state_with_kinetic(
    kinetic: f64,
    potential: &[f64],
    grid: &Grid1D,
) -> Result<(EnergyReport, Wavefunction1D)> {
    require_positive("kinetic coefficient", kinetic)?;
    if potential.len() != grid.len() {
        return domain(format!(
            "potential has {} samples but the grid has {} nodes",
            potential.len(),
            grid.len()
        ));
    }
    if let Some(j) = potential.iter().position(|v| !v.is_finite()) {
        return domain(format!("potential is not finite at node {j}"));
    }
    let op = finite_difference_operator(kinetic, potential, grid);
    let (energy, mut values, residual) = op.lowest_eigenpair()?;
    let scale = 1.0 / grid.dx().sqrt();
    values.iter_mut().for_each(|v| *v *= scale);
    Ok((
        EnergyReport {
            energy,
            method: Method::Eigensolver,
            dx: grid.dx(),
            error_estimate: residual,
            iterations: 1,
            warnings: Vec::new(),
        },
        Wavefunction1D { grid: *grid, values },
    ))
}

/// Lowest eigenpair of `−D₂ + diag(potential)` with Dirichlet closure.
pub fn ground_state(potential: &[f64], grid: &Grid1D) -> Result<(EnergyReport, Wavefunction1D)> {
    ground_state_with_kinetic(1.0, potential, grid)
}

/// Ground energy on `grid` and on its refinement, combined by Richardson.
pub fn ground_state_extrapolated<F>(grid: &Grid1D, mut potential: F) -> Result<EnergyReport>
where
    F: FnMut(&Grid1D) -> Result<Vec<f64>>,
{
    let fine_grid = grid.refined();
    let (coarse, _) = ground_state(&potential(grid)?, grid)?;
    let (fine, _) = ground_state(&potential(&fine_grid)?, &fine_grid)?;
    let ex = extrapolate(&[(coarse.dx, coarse.energy), (fine.dx, fine.energy)]);
    Ok(EnergyReport {
        energy: ex.value,
        method: Method::Extrapolated,
        dx: fine.dx,
        error_estimate: ex.error_estimate,
        iterations: 2,
        warnings: Vec::new(),
    })
}

/// `−Z δ(z)` realized on a grid.
pub fn delta_well_potential(z_charge: f64, grid: &Grid1D, scheme: DeltaScheme) -> Result<Vec<f64>> {
    let mut v = PotentialSpec::Delta(scheme).on_grid(grid, Sampling::Nodal)?;
    v.iter_mut().for_each(|x| *x *= -z_charge);
    Ok(v)
}

/// Closed-form bound state `√(Z/2) e^{−Z|z|/2}` of `−d²/dz² − Z δ(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaWellState {
    pub z_charge: f64,
    pub decay_rate: f64,
}

impl DeltaWellState {
    pub fn amplitude(&self) -> f64 {
        self.decay_rate.sqrt()
    }

    pub fn value(&self, z: f64) -> f64 {
        self.amplitude() * (-self.decay_rate * z.abs()).exp()
    }

    pub fn kinetic_energy(&self) -> f64 {
        self.decay_rate * self.decay_rate
    }
}

pub fn delta_well_exact(z_charge: f64) -> Result<(EnergyReport, DeltaWellState)> {
    require_positive("Z", z_charge)?;
    let decay_rate = 0.5 * z_charge;
    Ok((
        EnergyReport::analytic(-0.25 * z_charge * z_charge),
        DeltaWellState { z_charge, decay_rate },
    ))
}

/// Residuals of the zero-energy solution `f(z) = 1 − e^{−b|z|}/(2b+1)` of
/// `−f'' + δ f − W̃_b f = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroEnergyReport {
    pub b: f64,
    pub value_at_origin: f64,
    pub slope_right: f64,
    /// `f'(0⁺) − f'(0⁻)`.
    pub jump: f64,
    /// `|jump − f(0)|`.
    pub jump_mismatch: f64,
    /// Largest `|−f'' − W̃_b f|` over the sampled points.
    pub max_ode_residual: f64,
    pub positive: bool,
    pub increasing: bool,
}

/// Potential for which `f` is an exact zero mode: `W̃_b = b² e^{−b|z|} / (2b + 1 − e^{−b|z|})`.
/// It dominates `b² e^{−b|z|}/(2b+1)` pointwise.
pub fn zero_mode_potential(b: f64, z: f64) -> f64 {
    let e = (-b * z.abs()).exp();
    b * b * e / (2.0 * b + 1.0 - e)
}

pub fn zero_energy_check(b: f64) -> Result<ZeroEnergyReport> {
    zero_energy_check_on(b, 0.01, 10.0, 100)
}

/// As [`zero_energy_check`], sampling `points` values evenly on `[z_min, z_max]`.
pub fn zero_energy_check_on(b: f64, z_min: f64, z_max: f64, points: usize) -> Result<ZeroEnergyReport> {
    require_positive("b", b)?;
    require_positive("z_min", z_min)?;
    require_finite("z_max", z_max)?;
    let c = 1.0 / (2.0 * b + 1.0);
    let f = |z: f64| 1.0 - c * (-b * z).exp();
    let df = |z: f64| b * c * (-b * z).exp();
    let d2f = |z: f64| -b * b * c * (-b * z).exp();
    let mut max_ode_residual: f64 = 0.0;
    let mut positive = true;
    let mut increasing = true;
    let mut prev = f(0.0);
    for k in 0..points {
        let z = z_min + (z_max - z_min) * k as f64 / (points.max(2) - 1) as f64;
        let r = -d2f(z) - zero_mode_potential(b, z) * f(z);
        max_ode_residual = max_ode_residual.max(r.abs());
        positive &= f(z) > 0.0;
        increasing &= f(z) >= prev;
        prev = f(z);
    }
    let value_at_origin = f(0.0);
    let slope_right = df(0.0);
    // f is even, so f'(0⁻) = −f'(0⁺).
    let jump = 2.0 * slope_right;
    Ok(ZeroEnergyReport {
        b,
        value_at_origin,
        slope_right,
        jump,
        jump_mismatch: (jump - value_at_origin).abs(),
        max_ode_residual,
        positive,
        increasing,
    })
}

/// Half of the Euler–Mascheroni constant.
pub const HALF_EULER_GAMMA: f64 = 0.5 * 0.577_215_664_901_532_9;

/// Known large-field expansion of the hydrogen ground energy (Z = 1),
/// truncated before its unknown O(1) remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydrogenExpansion {
    pub b_field: f64,
    pub value: f64,
    pub terms: [f64; 5],
    /// Always true: the constant remainder is not included in `value`.
    pub order_one_omitted: bool,
}

pub fn hydrogen_expansion(b_field: f64) -> Result<HydrogenExpansion> {
    require_finite("B", b_field)?;
    if b_field <= 2.0 * std::f64::consts::E {
        return domain(format!("expansion needs B > 2e so that ln ln(B/2) > 0, got {b_field}"));
    }
    let l = (0.5 * b_field).ln();
    let ll = l.ln();
    let ln2 = std::f64::consts::LN_2;
    let c = HALF_EULER_GAMMA;
    let terms = [
        -0.25 * l * l,
        l * ll,
        -(c + ln2) * l,
        -ll * ll,
        2.0 * (c - 1.0 + ln2) * ll,
    ];
    Ok(HydrogenExpansion {
        b_field,
        value: terms.iter().sum(),
        terms,
        order_one_omitted: true,
    })
}

//! Hyper-strong mean-field theory and the many-body lower bound built from
//! the positive-definite minorant `w_{Z,a,b}`.
//!
//! The functional is `∫(√ρ)'² − ρ(0) + ½∫ρ²` over `∫ρ = λ`. Writing
//! `ρ = λφ²` with unit-mass `φ`, its Euler–Lagrange equation reads
//! `−φ'' − δφ + λφ³ = −μφ`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_finite, require_positive, Error, Result};
use crate::grid::Grid1D;
use crate::potential::{DeltaScheme, PotentialSpec, Sampling};
use crate::richardson::extrapolate;
use crate::schrod1d::{finite_difference_operator, ground_state, ground_state_with_kinetic, Wavefunction1D};
use crate::tridiag::SymTridiagonal;

/// `E^HS(λ)`: `−λ/4 + λ²/8 − λ³/48` below `λ = 2`, `−1/6` from there on.
pub fn hyperstrong_energy(lambda: f64) -> Result<f64> {
    require_finite("lambda", lambda)?;
    if lambda < 0.0 {
        return domain(format!("lambda must be nonnegative, got {lambda}"));
    }
    Ok(if lambda < 2.0 {
        -lambda / 4.0 + lambda * lambda / 8.0 - lambda.powi(3) / 48.0
    } else {
        -1.0 / 6.0
    })
}

/// `dE^HS/dλ`, which is `−μ` at the minimizer.
pub fn hyperstrong_derivative(lambda: f64) -> Result<f64> {
    hyperstrong_energy(lambda)?;
    Ok(if lambda < 2.0 {
        -0.25 + lambda / 4.0 - lambda * lambda / 16.0
    } else {
        0.0
    })
}

/// Nonnegative density on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density1D {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl Density1D {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return domain(format!("{} density values for {} nodes", values.len(), grid.len()));
        }
        if let Some(j) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return domain(format!("density must be finite and nonnegative (node {j})"));
        }
        Ok(Self { grid, values })
    }

    /// Centred Gaussian of standard deviation `width` carrying `mass`.
    pub fn gaussian(grid: Grid1D, width: f64, mass: f64) -> Result<Self> {
        require_positive("width", width)?;
        let values = grid
            .nodes()
            .iter()
            .map(|z| (-0.5 * (z / width).powi(2)).exp())
            .collect();
        Self::new(grid, values)?.with_mass(mass)
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    /// Rescaled copy with the given mass.
    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        let m = self.mass();
        require_positive("density mass", m)?;
        let f = mass / m;
        self.values.iter_mut().for_each(|v| *v *= f);
        Ok(self)
    }

    /// Linear interpolation onto another grid, keeping the mass.
    pub fn resample(&self, grid: Grid1D) -> Result<Self> {
        let psi = Wavefunction1D {
            grid: self.grid,
            values: self.values.clone(),
        };
        let values = grid.nodes().iter().map(|z| psi.interpolate(*z).max(0.0)).collect();
        Self::new(grid, values)?.with_mass(self.mass())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperstrongMinimum {
    pub lambda: f64,
    pub energy: f64,
    pub density: Density1D,
    /// Unit-mass amplitude `φ = √(ρ/λ)`.
    pub psi: Wavefunction1D,
    pub mu: f64,
    pub iterations: usize,
    pub residual: f64,
}

fn mean_field_hamiltonian(psi: &Wavefunction1D, lambda: f64) -> SymTridiagonal {
    let dx = psi.grid.dx();
    let c = psi.grid.center();
    let pot: Vec<f64> = psi
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| lambda * v * v - if j == c { 1.0 / dx } else { 0.0 })
        .collect();
    finite_difference_operator(1.0, &pot, &psi.grid)
}

fn quartic(psi: &Wavefunction1D) -> f64 {
    psi.values.iter().map(|v| v.powi(4)).sum::<f64>() * psi.grid.dx()
}

/// Discrete `E^HS[λφ²]` for unit-mass `φ`.
pub fn hyperstrong_functional(psi: &Wavefunction1D, lambda: f64) -> f64 {
    let c = psi.at_origin();
    lambda * (psi.kinetic_energy() - c * c + 0.5 * lambda * quartic(psi))
}

/// Chemical potential from the Euler–Lagrange equation tested with `φ`.
pub fn rayleigh_mu(psi: &Wavefunction1D, lambda: f64) -> f64 {
    let c = psi.at_origin();
    -(psi.kinetic_energy() - c * c + lambda * quartic(psi)) / psi.norm_sq()
}

fn unit_mass(grid: Grid1D, mut values: Vec<f64>) -> Wavefunction1D {
    let n = (values.iter().map(|v| v * v).sum::<f64>() * grid.dx()).sqrt();
    values.iter_mut().for_each(|v| *v /= n);
    Wavefunction1D { grid, values }
}

/// Minimizes the hyper-strong functional at mass `λ` by normalized implicit
/// gradient flow on `φ`, halving the step whenever the energy would rise.
/// Stops when the discrete Euler–Lagrange residual falls below `tol`.
pub fn minimize_hyperstrong(lambda: f64, grid: Grid1D, max_iter: usize, tol: f64) -> Result<HyperstrongMinimum> {
    require_positive("lambda", lambda)?;
    require_positive("tol", tol)?;
    let start: Vec<f64> = grid.nodes().iter().map(|z| (-0.5 * z.abs()).exp()).collect();
    let mut psi = unit_mass(grid, start);
    let mut energy = hyperstrong_functional(&psi, lambda);
    let mut tau = 1.0;
    let dx = grid.dx();
    let mut residual = f64::INFINITY;
    for it in 0..max_iter {
        let mu = rayleigh_mu(&psi, lambda);
        let h = mean_field_hamiltonian(&psi, lambda);
        residual = euler_lagrange_norm(&h, &psi, mu);
        if residual <= tol {
            return Ok(finish(lambda, psi, energy, mu, it, residual));
        }
        loop {
            let diag = h.diag.iter().map(|d| 1.0 + tau * (d + mu)).collect();
            let off = h.off.iter().map(|o| tau * o).collect();
            let step = SymTridiagonal::new(diag, off).solve_positive_definite(&psi.values);
            if let Ok(values) = step {
                let trial = unit_mass(grid, values);
                let e = hyperstrong_functional(&trial, lambda);
                // Allow for roundoff in the energy once the flow has settled.
                if e <= energy + 1e-12 * energy.abs() {
                    psi = trial;
                    energy = e;
                    // Large steps turn the flow into an undamped fixed-point
                    // iteration, which oscillates near λ = 2.
                    tau = (2.0 * tau).min(10.0);
                    break;
                }
            }
            tau *= 0.5;
            if tau < 1e-6 * dx * dx {
                return Err(Error::NoConvergence {
                    what: "hyper-strong gradient flow (step collapse)",
                    iterations: it,
                    best: energy,
                    residual,
                });
            }
        }
    }
    Err(Error::NoConvergence {
        what: "hyper-strong gradient flow",
        iterations: max_iter,
        best: energy,
        residual,
    })
}

fn finish(
    lambda: f64,
    psi: Wavefunction1D,
    energy: f64,
    mu: f64,
    iterations: usize,
    residual: f64,
) -> HyperstrongMinimum {
    let values = psi.values.iter().map(|v| lambda * v * v).collect();
    HyperstrongMinimum {
        lambda,
        energy,
        density: Density1D { grid: psi.grid, values },
        psi,
        mu,
        iterations,
        residual,
    }
}

/// Discrete L² norm of `(H[φ] + μ)φ`.
fn euler_lagrange_norm(h: &SymTridiagonal, psi: &Wavefunction1D, mu: f64) -> f64 {
    let mut r = vec![0.0; psi.values.len()];
    h.apply(&psi.values, &mut r);
    (r.iter()
        .zip(&psi.values)
        .map(|(a, v)| (a + mu * v).powi(2))
        .sum::<f64>()
        * psi.grid.dx())
    .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanfieldResidual {
    /// `max |−φ'' + λφ³ + μφ|` over nodes away from the origin.
    pub interior: f64,
    /// Mismatch in the discrete jump condition `Δφ'/φ(0) = −1`.
    pub jump: f64,
}

impl MeanfieldResidual {
    pub fn max(&self) -> f64 {
        self.interior.max(self.jump)
    }
}

/// Residual of `−φ'' − δφ + λφ³ = −μφ` for a unit-mass `φ`.
pub fn meanfield_residual(psi: &Wavefunction1D, lambda: f64, mu: f64) -> MeanfieldResidual {
    let dx = psi.grid.dx();
    let c = psi.grid.center();
    let v = &psi.values;
    let n = v.len();
    let at = |j: isize| if j < 0 || j as usize >= n { 0.0 } else { v[j as usize] };
    let mut interior = 0.0f64;
    for (j, &vj) in v.iter().enumerate() {
        if j == c {
            continue;
        }
        let i = j as isize;
        let lap = (at(i - 1) - 2.0 * vj + at(i + 1)) / (dx * dx);
        interior = interior.max((-lap + lambda * vj.powi(3) + mu * vj).abs());
    }
    let i = c as isize;
    let kink = (2.0 * v[c] - at(i - 1) - at(i + 1)) / dx;
    let jump = ((kink + dx * (lambda * v[c].powi(3) + mu * v[c])) / v[c] - 1.0).abs();
    MeanfieldResidual { interior, jump }
}

/// `w_{Z,a,b}(z) = (Z²a)⁻¹ b²/(2b+1) e^{−b|z|/(Za)}`.
pub fn w_potential(z_charge: f64, a: f64, b: f64, z: f64) -> f64 {
    b * b / ((2.0 * b + 1.0) * z_charge * z_charge * a) * (-b * z.abs() / (z_charge * a)).exp()
}

/// Cell averages of `w_{Z,a,b}` at offsets `k·dx`, `|k| ≤ kmax`.
fn w_cell_table(z_charge: f64, a: f64, b: f64, dx: f64, kmax: usize) -> Result<Vec<f64>> {
    let s = z_charge * a;
    let t = PotentialSpec::Exponential { b }.offset_table(dx / s, kmax, Sampling::CellAverage)?;
    Ok(t.into_iter().map(|v| v / (z_charge * s)).collect())
}

/// `(σ ∗ w_{Z,a,b})` at the nodes of `sigma`'s grid, by direct summation
/// against exact cell integrals of `w`.
pub fn convolve_w(sigma: &Density1D, z_charge: f64, a: f64, b: f64) -> Result<Vec<f64>> {
    let n = sigma.grid.len();
    let dx = sigma.grid.dx();
    let table = w_cell_table(z_charge, a, b, dx, n - 1)?;
    Ok((0..n)
        .map(|j| (0..n).map(|k| sigma.values[k] * table[j + n - 1 - k]).sum::<f64>() * dx)
        .collect())
}

/// Lowest eigenvalue of `p² + δ − factor·W_b` with `W_b = b² e^{−b|z|}/(2b+1)`.
pub fn operator_inequality_eigenvalue(b: f64, factor: f64, grid: Grid1D) -> Result<f64> {
    require_positive("b", b)?;
    require_finite("factor", factor)?;
    let w = PotentialSpec::Exponential { b }.on_grid(&grid, Sampling::CellAverage)?;
    let delta = PotentialSpec::Delta(DeltaScheme::OnSite).on_grid(&grid, Sampling::Nodal)?;
    let pot: Vec<f64> = delta.iter().zip(&w).map(|(d, w)| d - factor * w).collect();
    Ok(ground_state(&pot, &grid)?.0.energy)
}

/// Lowest eigenvalue of `p² + δ − W_b`; nonnegative up to discretization.
pub fn verify_operator_inequality(b: f64, grid: Grid1D) -> Result<f64> {
    operator_inequality_eigenvalue(b, 1.0, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundComponents {
    /// Ground energy of the one-particle operator (Richardson-combined).
    pub one_particle_energy: f64,
    /// Size of the Richardson correction of that energy.
    pub discretization_error: f64,
    /// `(N²/2) ∬ σ w σ`.
    pub self_energy: f64,
    /// `N w(0)/2`, already inside `N · one_particle_energy`.
    pub w0_correction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub z_charge: f64,
    pub n_particles: usize,
    pub epsilon: f64,
    pub a: f64,
    pub b: f64,
    pub sigma: Density1D,
    pub lower_bound: f64,
    pub components: BoundComponents,
}

/// Lower bound on `ê(Z,N)` from the trial density `sigma` (unit mass).
///
/// The one-particle operator is solved on `sigma`'s grid and on its
/// refinement and the two energies are extrapolated. For `N = 1` there are
/// no pair terms and `σ` plays no role.
pub fn lower_bound(z_charge: f64, n_particles: usize, sigma: &Density1D, epsilon: f64) -> Result<BoundCertificate> {
    require_positive("Z", z_charge)?;
    if n_particles == 0 {
        return domain("N must be at least 1");
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return domain(format!("epsilon must lie in (0, 1/2), got {epsilon}"));
    }
    let nf = n_particles as f64;
    let a = nf.powf(-1.0 - epsilon);
    let b = nf.powf(epsilon);
    let kinetic = 1.0 - a * (nf - 1.0) / 2.0;
    if kinetic <= 0.0 {
        return domain("the borrowed kinetic energy exhausts p²");
    }
    let w0 = w_potential(z_charge, a, b, 0.0);
    let pair = n_particles > 1;

    let solve = |sigma: &Density1D| -> Result<(f64, f64)> {
        let grid = sigma.grid;
        let mut pot = PotentialSpec::Delta(DeltaScheme::OnSite).on_grid(&grid, Sampling::Nodal)?;
        pot.iter_mut().for_each(|v| *v = -*v - 0.5 * w0);
        let mut self_energy = 0.0;
        if pair {
            let conv = convolve_w(sigma, z_charge, a, b)?;
            pot.iter_mut().zip(&conv).for_each(|(v, c)| *v += nf * c);
            self_energy = 0.5 * nf * nf * sigma.values.iter().zip(&conv).map(|(s, c)| s * c).sum::<f64>() * grid.dx();
        }
        let (r, _) = ground_state_with_kinetic(kinetic, &pot, &grid)?;
        Ok((r.energy, self_energy))
    };

    let sigma = sigma.clone().with_mass(1.0)?;
    let fine = sigma.resample(sigma.grid.refined())?;
    let (e_coarse, s_coarse) = solve(&sigma)?;
    let (e_fine, s_fine) = solve(&fine)?;
    let e = extrapolate(&[(sigma.grid.dx(), e_coarse), (fine.grid.dx(), e_fine)]);
    let s = extrapolate(&[(sigma.grid.dx(), s_coarse), (fine.grid.dx(), s_fine)]);
    let lower = nf * e.value - s.value;
    Ok(BoundCertificate {
        z_charge,
        n_particles,
        epsilon,
        a,
        b,
        sigma,
        lower_bound: lower,
        components: BoundComponents {
            one_particle_energy: e.value,
            discretization_error: nf * e.error_estimate + s.error_estimate,
            self_energy: s.value,
            w0_correction: 0.5 * nf * w0,
        },
    })
}

//! N-particle Hamiltonians on tensor-product grids.
//!
//! Every family has the form `Σ_i (p_i² + U_i(z_i)) + Σ_{i<j} W_ij(z_i, z_j)`
//! with multiplicative potentials, so an assembled operator is the N-fold
//! 3-point Laplacian plus one stored diagonal. The state index runs over
//! `(k_1, …, k_N)` with the last axis contiguous.

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Error, Result};
use crate::grid::Grid1D;
use crate::lanczos::{lowest_eigenpair, random_start, LanczosConfig, SymmetricOperator};
use crate::landau::solve_scale;
use crate::par::{for_each_block_mut, for_each_chunk_mut, Execution};
use crate::potential::{DeltaScheme, PotentialSpec, Sampling};
use crate::richardson::extrapolate;
use crate::schrod1d::{ground_state, EnergyReport, Method};

/// Environment variable overriding [`DEFAULT_MAX_DIMENSION`].
pub const MAX_DIMENSION_ENV: &str = "HFATOM_MAX_DIM";
pub const DEFAULT_MAX_DIMENSION: usize = 3_000_000;

/// Largest admissible `nᴺ`, honouring the environment override.
pub fn max_dimension() -> usize {
    std::env::var(MAX_DIMENSION_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIMENSION)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `Σ(p² − Zδ(z_i)) + Σ δ(z_i − z_j)`.
    Delta,
    /// `Σ(p² − δ(z_i)) + Z⁻¹ Σ δ(z_i − z_j)`.
    DeltaRescaled,
    /// Coulomb wells and repulsions softened by transverse positions `x⊥`.
    ParametricUnscaled,
    /// The same in field-scaled units, with `V_{B,r}` profiles.
    ParametricScaled,
    /// `Σ(p² − δ(z_i)) + (2Z)⁻¹ Σ [δ(z_i − z_j) + δ(z_i + z_j)]`.
    SymmetrizedComparison,
}

impl Family {
    fn is_parametric(self) -> bool {
        matches!(self, Family::ParametricUnscaled | Family::ParametricScaled)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub z_charge: f64,
    pub n_particles: usize,
    /// Field strength, scaled parametric family only.
    pub b_field: Option<f64>,
    /// One transverse position per particle, parametric families only.
    pub transverse: Option<Vec<[f64; 2]>>,
}

impl ModelParams {
    pub fn new(z_charge: f64, n_particles: usize) -> Self {
        Self {
            z_charge,
            n_particles,
            b_field: None,
            transverse: None,
        }
    }

    pub fn with_transverse(mut self, transverse: Vec<[f64; 2]>) -> Self {
        self.transverse = Some(transverse);
        self
    }

    pub fn with_field(mut self, b_field: f64) -> Self {
        self.b_field = Some(b_field);
        self
    }

    /// `λ = N/Z`.
    pub fn lambda(&self) -> f64 {
        self.n_particles as f64 / self.z_charge
    }
}

/// How δ-functions and smooth profiles are put on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regularization {
    pub delta: DeltaScheme,
    pub sampling: Sampling,
}

impl Default for Regularization {
    fn default() -> Self {
        Self {
            delta: DeltaScheme::OnSite,
            sampling: Sampling::CellAverage,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SymmetrySector {
    Bosonic,
    #[default]
    None,
}

/// An assembled operator. Immutable once built.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    family: Family,
    params: ModelParams,
    grid: Grid1D,
    regularization: Regularization,
    diagonal: Vec<f64>,
    /// One table per particle: `U_i` at every node.
    wells: Vec<Vec<f64>>,
    permutation_symmetric: bool,
    execution: Execution,
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Pair potential of one pair, tabulated at offsets `k·dx`, `|k| ≤ n − 1`,
/// plus the optional reflected term evaluated at `z_i + z_j`.
struct PairTable {
    direct: Vec<f64>,
    mirrored: Option<Vec<f64>>,
}

pub fn assemble(
    family: Family,
    params: ModelParams,
    grid: Grid1D,
    regularization: Regularization,
) -> Result<Hamiltonian> {
    assemble_with(family, params, grid, regularization, max_dimension())
}

/// [`assemble`] with an explicit dimension budget.
pub fn assemble_with(
    family: Family,
    params: ModelParams,
    grid: Grid1D,
    regularization: Regularization,
    budget: usize,
) -> Result<Hamiltonian> {
    let z = params.z_charge;
    let np = params.n_particles;
    require_positive("Z", z)?;
    if np == 0 {
        return domain("N must be at least 1");
    }
    let n = grid.len();
    let dimension = n
        .checked_pow(np as u32)
        .filter(|d| *d <= budget)
        .ok_or(Error::Capacity {
            dimension: n.saturating_pow(np as u32),
            budget,
        })?;

    let transverse = if family.is_parametric() {
        let t = params
            .transverse
            .as_ref()
            .ok_or_else(|| Error::Domain("parametric family needs transverse positions".into()))?;
        if t.len() != np {
            return domain(format!("{} transverse positions for {np} particles", t.len()));
        }
        if let Some(i) = t
            .iter()
            .position(|x| norm2(*x).is_nan() || norm2(*x) <= 0.0 || !x[0].is_finite() || !x[1].is_finite())
        {
            return domain(format!("transverse position {i} must be finite and nonzero"));
        }
        t.clone()
    } else {
        Vec::new()
    };
    let scale = match family {
        Family::ParametricScaled => {
            let b = params
                .b_field
                .ok_or_else(|| Error::Domain("scaled family needs a field strength".into()))?;
            Some(solve_scale(b)?)
        }
        _ => None,
    };

    let dx = grid.dx();
    let kmax = n - 1;
    let sampling = regularization.sampling;
    let delta = PotentialSpec::Delta(regularization.delta);
    let times = |factor: f64, table: Vec<f64>| -> Vec<f64> { table.into_iter().map(|v| factor * v).collect() };
    let profile = |r: f64| -> PotentialSpec {
        match scale {
            Some(scale) => PotentialSpec::ScaledCoulomb { scale, r },
            None => PotentialSpec::Coulomb { r },
        }
    };

    let mut wells = Vec::with_capacity(np);
    let mut pairs = Vec::new();
    match family {
        Family::Delta | Family::DeltaRescaled | Family::SymmetrizedComparison => {
            let (attraction, coupling) = match family {
                Family::Delta => (z, 1.0),
                Family::DeltaRescaled => (1.0, 1.0 / z),
                _ => (1.0, 0.5 / z),
            };
            let well = times(-attraction, delta.on_grid(&grid, sampling)?);
            wells = vec![well; np];
            let direct = times(coupling, delta.offset_table(dx, kmax, sampling)?);
            let mirrored = (family == Family::SymmetrizedComparison).then(|| direct.clone());
            for _ in 0..np * np.saturating_sub(1) / 2 {
                pairs.push(PairTable {
                    direct: direct.clone(),
                    mirrored: mirrored.clone(),
                });
            }
        }
        Family::ParametricUnscaled | Family::ParametricScaled => {
            for x in &transverse {
                let spec = profile(norm2(*x));
                wells.push(times(-z, spec.on_grid(&grid, sampling)?));
            }
            for i in 0..np {
                for j in i + 1..np {
                    let r = norm2([transverse[i][0] - transverse[j][0], transverse[i][1] - transverse[j][1]]);
                    if r.is_nan() || r <= 0.0 {
                        return domain(format!("particles {i} and {j} share a transverse position"));
                    }
                    let spec = profile(r);
                    pairs.push(PairTable {
                        direct: spec.offset_table(dx, kmax, sampling)?,
                        mirrored: None,
                    });
                }
            }
        }
    }

    let permutation_symmetric =
        wells.windows(2).all(|w| w[0] == w[1]) && pairs.windows(2).all(|p| p[0].direct == p[1].direct);

    let mut diagonal = vec![0.0; dimension];
    let center = grid.center();
    for_each_chunk_mut(&mut diagonal, Execution::Parallel, |offset, chunk| {
        let mut digits = vec![0usize; np];
        for (t, d) in chunk.iter_mut().enumerate() {
            let mut idx = offset + t;
            for a in (0..np).rev() {
                digits[a] = idx % n;
                idx /= n;
            }
            let mut v = 0.0;
            for (a, k) in digits.iter().enumerate() {
                v += wells[a][*k];
            }
            let mut p = 0;
            for i in 0..np {
                for j in i + 1..np {
                    let pair = &pairs[p];
                    v += pair.direct[digits[i] + kmax - digits[j]];
                    if let Some(m) = &pair.mirrored {
                        // z_i + z_j = (k_i + k_j − 2c)·dx
                        v += m[digits[i] + digits[j] + kmax - 2 * center];
                    }
                    p += 1;
                }
            }
            *d = v;
        }
    });

    Ok(Hamiltonian {
        family,
        params,
        grid,
        regularization,
        diagonal,
        wells,
        permutation_symmetric,
        execution: Execution::Parallel,
    })
}

impl Hamiltonian {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn regularization(&self) -> Regularization {
        self.regularization
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    /// Potential part of the operator, one entry per grid state.
    pub fn potential_diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// True when relabelling particles leaves the operator unchanged.
    pub fn is_permutation_symmetric(&self) -> bool {
        self.permutation_symmetric
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn execution(&self) -> Execution {
        self.execution
    }

    /// Dense matrix, row-major. Only for small coarse-grid checks.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        let d = self.dimension();
        if d > 10_000 {
            return Err(Error::Capacity {
                dimension: d,
                budget: 10_000,
            });
        }
        let mut m = vec![0.0; d * d];
        let mut e = vec![0.0; d];
        let mut col = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            e[j] = 0.0;
            for i in 0..d {
                m[i * d + j] = col[i];
            }
        }
        Ok(m)
    }

    /// Averages `x` over all relabellings of the particles.
    pub fn symmetrize(&self, x: &mut [f64]) {
        let np = self.params.n_particles;
        if np < 2 {
            return;
        }
        let n = self.grid.len();
        let strides: Vec<usize> = (0..np).map(|a| n.pow((np - 1 - a) as u32)).collect();
        // For each relabelling, the stride that digit b of the output index
        // contributes to the source index.
        let perm_strides: Vec<Vec<usize>> = permutations(np)
            .into_iter()
            .map(|p| {
                let mut s = vec![0; np];
                for (pos, &b) in p.iter().enumerate() {
                    s[b] = strides[pos];
                }
                s
            })
            .collect();
        let weight = 1.0 / perm_strides.len() as f64;
        let src = x.to_vec();
        let rows_per_block = (crate::par::CHUNK / n).max(1);
        for_each_block_mut(x, rows_per_block * n, self.execution, |offset, block| {
            let mut digits = vec![0usize; np - 1];
            for (r, out) in block.chunks_mut(n).enumerate() {
                let mut row = offset / n + r;
                for a in (0..np - 1).rev() {
                    digits[a] = row % n;
                    row /= n;
                }
                out.iter_mut().for_each(|v| *v = 0.0);
                for s in &perm_strides {
                    let start: usize = digits.iter().zip(s).map(|(d, st)| d * st).sum();
                    let step = s[np - 1];
                    for (j, o) in out.iter_mut().enumerate() {
                        *o += src[start + j * step];
                    }
                }
                out.iter_mut().for_each(|v| *v *= weight);
            }
        });
    }

    fn apply_rows(&self, x: &[f64], offset: usize, y: &mut [f64]) {
        let n = self.grid.len();
        let np = self.params.n_particles;
        let c = 1.0 / (self.grid.dx() * self.grid.dx());
        let c0 = 2.0 * np as f64 * c;
        let mut digits = vec![0usize; np];
        for (r, y_row) in y.chunks_mut(n).enumerate() {
            let base = offset + r * n;
            let x_row = &x[base..base + n];
            let d_row = &self.diagonal[base..base + n];
            y_row[0] = (d_row[0] + c0) * x_row[0] - c * x_row[1];
            y_row[n - 1] = (d_row[n - 1] + c0) * x_row[n - 1] - c * x_row[n - 2];
            for ((yv, dv), w) in y_row[1..n - 1].iter_mut().zip(&d_row[1..n - 1]).zip(x_row.windows(3)) {
                *yv = (dv + c0) * w[1] - c * (w[0] + w[2]);
            }
            // Digits of the outer axes are constant along a row.
            let mut row = base / n;
            for a in (0..np - 1).rev() {
                digits[a] = row % n;
                row /= n;
            }
            let mut stride = n;
            for a in (0..np - 1).rev() {
                if digits[a] > 0 {
                    let nb = &x[base - stride..base - stride + n];
                    y_row.iter_mut().zip(nb).for_each(|(yv, xv)| *yv -= c * xv);
                }
                if digits[a] + 1 < n {
                    let nb = &x[base + stride..base + stride + n];
                    y_row.iter_mut().zip(nb).for_each(|(yv, xv)| *yv -= c * xv);
                }
                stride *= n;
            }
        }
    }
}

impl SymmetricOperator for Hamiltonian {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dimension());
        assert_eq!(y.len(), self.dimension());
        let n = self.grid.len();
        let rows_per_block = (crate::par::CHUNK / n).max(1);
        for_each_block_mut(y, rows_per_block * n, self.execution, |offset, block| {
            self.apply_rows(x, offset, block)
        });
    }

    fn norm_estimate(&self) -> f64 {
        let c = 1.0 / (self.grid.dx() * self.grid.dx());
        let vmax = self.diagonal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        4.0 * self.params.n_particles as f64 * c + vmax
    }
}

/// All orderings of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// A ground state on the tensor grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub report: EnergyReport,
    /// Nodal values with `Σ |ψ|² dxᴺ = 1`.
    pub values: Vec<f64>,
}

/// Lowest eigenpair in the requested sector.
///
/// One-particle operators are tridiagonal and go to the Sturm-sequence
/// solver; everything else uses Lanczos from a seeded random start.
pub fn ground_state_in(h: &Hamiltonian, sector: SymmetrySector, seed: u64, cfg: &LanczosConfig) -> Result<GroundState> {
    let np = h.params.n_particles;
    let dx = h.grid.dx();
    let volume = dx.powi(np as i32);
    if np == 1 {
        let (report, psi) = ground_state(&h.wells[0], &h.grid)?;
        return Ok(GroundState {
            report,
            values: psi.values,
        });
    }
    let bosonic = sector == SymmetrySector::Bosonic;
    if bosonic && !h.permutation_symmetric {
        return domain("the bosonic sector needs a permutation-symmetric operator");
    }
    let cfg = LanczosConfig {
        execution: h.execution,
        ..*cfg
    };
    let start = random_start(h.dimension(), seed);
    let r = if bosonic {
        lowest_eigenpair(h, &|x: &mut [f64]| h.symmetrize(x), start, &cfg)?
    } else {
        lowest_eigenpair(h, &|_: &mut [f64]| {}, start, &cfg)?
    };
    let mut values = r.eigenvector;
    let sign = if values.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let s = sign / volume.sqrt();
    values.iter_mut().for_each(|v| *v *= s);
    Ok(GroundState {
        report: EnergyReport {
            energy: r.eigenvalue,
            method: Method::Eigensolver,
            dx,
            error_estimate: r.residual_norm,
            iterations: r.matvecs,
            warnings: Vec::new(),
        },
        values,
    })
}

/// Ground energy with the default Lanczos settings.
pub fn ground_energy(h: &Hamiltonian, sector: SymmetrySector, seed: u64) -> Result<EnergyReport> {
    Ok(ground_state_in(h, sector, seed, &LanczosConfig::default())?.report)
}

/// `E_{Z,N}(x⊥)` on the given grid.
pub fn parametric_energy(z_charge: f64, x_perp: &[[f64; 2]], grid: Grid1D) -> Result<EnergyReport> {
    let params = ModelParams::new(z_charge, x_perp.len()).with_transverse(x_perp.to_vec());
    let h = assemble(Family::ParametricUnscaled, params, grid, Regularization::default())?;
    ground_energy(&h, SymmetrySector::None, 0)
}

/// `e^B_{Z,N}(y⊥)` on the given grid.
pub fn scaled_parametric_energy(
    z_charge: f64,
    b_field: f64,
    y_perp: &[[f64; 2]],
    grid: Grid1D,
) -> Result<EnergyReport> {
    let params = ModelParams::new(z_charge, y_perp.len())
        .with_transverse(y_perp.to_vec())
        .with_field(b_field);
    let h = assemble(Family::ParametricScaled, params, grid, Regularization::default())?;
    ground_energy(&h, SymmetrySector::None, 0)
}

/// Both sides of `E_{Z,N}(B^{-1/2}y⊥) = L(B)² e^B_{Z,N}(y⊥)`, each on its own
/// grid: the unscaled one is the scaled grid shrunk by `L(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheck {
    pub unscaled: f64,
    pub scaled: f64,
    pub length: f64,
    pub relative_error: f64,
}

pub fn scaling_check(z_charge: f64, b_field: f64, y_perp: &[[f64; 2]], scaled_grid: Grid1D) -> Result<ScalingCheck> {
    let scale = solve_scale(b_field)?;
    let l = scale.length;
    let x_perp: Vec<[f64; 2]> = y_perp
        .iter()
        .map(|y| [y[0] / b_field.sqrt(), y[1] / b_field.sqrt()])
        .collect();
    let unscaled = parametric_energy(z_charge, &x_perp, scaled_grid.scaled(1.0 / l)?)?.energy;
    let scaled = scaled_parametric_energy(z_charge, b_field, y_perp, scaled_grid)?.energy;
    let lhs = unscaled / (l * l);
    Ok(ScalingCheck {
        unscaled,
        scaled,
        length: l,
        relative_error: ((lhs - scaled) / scaled).abs(),
    })
}

/// Single-particle bounds `−Σ Z²(1 + asinh²(1/(Z|x_i|))) ≤ E ≤ 0`.
pub fn simple_bounds(z_charge: f64, x_perp: &[[f64; 2]]) -> (f64, f64) {
    let lower = x_perp
        .iter()
        .map(|x| {
            let s = (1.0 / (z_charge * norm2(*x))).asinh();
            -z_charge * z_charge * (1.0 + s * s)
        })
        .sum();
    (lower, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperharmonicReport {
    pub center_energy: f64,
    pub circle_average: f64,
    pub samples: Vec<f64>,
    /// Simple-bounds sandwich holds at the centre and every sample.
    pub bounds_ok: bool,
}

/// Mean of `E_{Z,1}` over a circle in the transverse plane versus the value
/// at its centre.
pub fn superharmonic_spot_check(
    z_charge: f64,
    center: [f64; 2],
    radius: f64,
    angular_points: usize,
    grid: Grid1D,
) -> Result<SuperharmonicReport> {
    require_positive("radius", radius)?;
    if angular_points == 0 {
        return domain("need at least one angular point");
    }
    if radius >= norm2(center) {
        return domain("the circle must not reach the origin");
    }
    let points: Vec<[f64; 2]> = (0..angular_points)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / angular_points as f64;
            [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect();
    let energy = |x: &[f64; 2]| parametric_energy(z_charge, &[*x], grid).map(|r| r.energy);
    let center_energy = energy(&center)?;
    let samples = crate::par::map_ordered(&points, energy)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let circle_average = samples.iter().sum::<f64>() / samples.len() as f64;
    let within = |x: &[f64; 2], e: f64| {
        let (lo, hi) = simple_bounds(z_charge, &[*x]);
        lo <= e && e <= hi
    };
    let bounds_ok = within(&center, center_energy) && points.iter().zip(&samples).all(|(x, e)| within(x, *e));
    Ok(SuperharmonicReport {
        center_energy,
        circle_average,
        samples,
        bounds_ok,
    })
}

/// Ground energies along a refinement ladder, combined by Richardson.
pub fn extrapolate_energy(
    family: Family,
    params: &ModelParams,
    ladder: &[(Grid1D, Regularization)],
    sector: SymmetrySector,
    seed: u64,
) -> Result<EnergyReport> {
    if ladder.is_empty() {
        return domain("empty refinement ladder");
    }
    if ladder.windows(2).any(|w| w[1].0.dx() >= w[0].0.dx()) {
        return domain("ladder spacings must decrease");
    }
    let mut points = Vec::with_capacity(ladder.len());
    let mut iterations = 0;
    for (grid, reg) in ladder {
        let h = assemble(family, params.clone(), *grid, *reg)?;
        let r = ground_energy(&h, sector, seed)?;
        iterations += r.iterations;
        points.push((grid.dx(), r.energy));
    }
    let ex = extrapolate(&points);
    let mut warnings = Vec::new();
    if !ex.monotone {
        warnings.push("energies are not monotone along the ladder".to_string());
    }
    Ok(EnergyReport {
        energy: ex.value,
        method: Method::Extrapolated,
        dx: points.last().map(|p| p.0).unwrap_or(0.0),
        error_estimate: ex.error_estimate,
        iterations,
        warnings,
    })
}

/// `e(Z,N)` of the δ-model, extrapolated along the ladder.
pub fn extrapolate_delta_energy(
    z_charge: f64,
    n_particles: usize,
    ladder: &[(Grid1D, Regularization)],
) -> Result<EnergyReport> {
    extrapolate_energy(
        Family::Delta,
        &ModelParams::new(z_charge, n_particles),
        ladder,
        SymmetrySector::Bosonic,
        0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(hw: f64, n: usize) -> Grid1D {
        Grid1D::new(hw, n).unwrap()
    }

    #[test]
    fn one_particle_delta_is_tridiagonal_plus_well() {
        let g = grid(10.0, 101);
        let h = assemble(Family::Delta, ModelParams::new(1.0, 1), g, Regularization::default()).unwrap();
        assert_eq!(h.dimension(), 101);
        let m = h.to_dense().unwrap();
        let c = 1.0 / (g.dx() * g.dx());
        for i in 0..101 {
            for j in 0..101 {
                let expected = match (i as i64 - j as i64).abs() {
                    0 => 2.0 * c - if i == 50 { 1.0 / g.dx() } else { 0.0 },
                    1 => -c,
                    _ => 0.0,
                };
                assert_relative_eq!(m[i * 101 + j], expected, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = assemble_with(
            Family::Delta,
            ModelParams::new(1.0, 3),
            grid(5.0, 101),
            Regularization::default(),
            1000,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn parametric_requires_nonzero_transverse() {
        let p = ModelParams::new(1.0, 2).with_transverse(vec![[1.0, 0.0], [0.0, 0.0]]);
        assert!(assemble(Family::ParametricUnscaled, p, grid(5.0, 11), Regularization::default()).is_err());
        let p = ModelParams::new(1.0, 2).with_transverse(vec![[1.0, 0.0], [1.0, 0.0]]);
        assert!(assemble(Family::ParametricUnscaled, p, grid(5.0, 11), Regularization::default()).is_err());
        let p = ModelParams::new(1.0, 1);
        assert!(assemble(Family::ParametricScaled, p, grid(5.0, 11), Regularization::default()).is_err());
    }

    #[test]
    fn comparison_diagonal_has_both_pair_sheets() {
        let g = grid(2.0, 5);
        let h = assemble(
            Family::SymmetrizedComparison,
            ModelParams::new(2.0, 2),
            g,
            Regularization::default(),
        )
        .unwrap();
        let w = 1.0 / g.dx();
        let d = h.potential_diagonal();
        // (k1, k2) = (1, 3): z1 = −z2, only the mirrored sheet.
        assert_relative_eq!(d[5 + 3], 0.25 * w);
        // (2, 2): both particles at the origin.
        assert_relative_eq!(d[2 * 5 + 2], -2.0 * w + 0.5 * w);
        // (1, 1): coincident, not at the origin.
        assert_relative_eq!(d[5 + 1], 0.25 * w);
        assert_eq!(d[1], 0.0);
    }

    #[test]
    fn symmetrize_is_a_projection() {
        let h = assemble(
            Family::Delta,
            ModelParams::new(1.0, 3),
            grid(3.0, 7),
            Regularization::default(),
        )
        .unwrap();
        let mut x = random_start(h.dimension(), 4);
        h.symmetrize(&mut x);
        let once = x.clone();
        h.symmetrize(&mut x);
        for (a, b) in once.iter().zip(&x) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_relative_eq!(x[49 + 2 * 7 + 3], x[3 * 49 + 7 + 2], max_relative = 1e-14);
    }

    #[test]
    fn permutations_are_complete() {
        let p = permutations(4);
        assert_eq!(p.len(), 24);
        assert_eq!(p[0], vec![0, 1, 2, 3]);
        assert_eq!(p[23], vec![3, 2, 1, 0]);
    }

    #[test]
    fn sequential_and_parallel_application_agree() {
        let h = assemble(
            Family::DeltaRescaled,
            ModelParams::new(1.0, 3),
            grid(4.0, 41),
            Regularization::default(),
        )
        .unwrap();
        let x = random_start(h.dimension(), 9);
        let mut a = vec![0.0; x.len()];
        let mut b = vec![0.0; x.len()];
        h.apply(&x, &mut a);
        h.clone().with_execution(Execution::Sequential).apply(&x, &mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn simple_bounds_shape() {
        let (lo, hi) = simple_bounds(1.0, &[[1.0, 0.0]]);
        assert_eq!(hi, 0.0);
        assert_relative_eq!(lo, -(1.0 + 1f64.asinh().powi(2)));
    }

    #[test]
    fn superharmonic_rejects_circle_through_origin() {
        assert!(superharmonic_spot_check(1.0, [1.0, 0.0], 1.0, 8, grid(10.0, 101)).is_err());
    }

    #[test]
    fn ladder_must_refine() {
        let r = Regularization::default();
        let ladder = [(grid(10.0, 201), r), (grid(10.0, 101), r)];
        assert!(extrapolate_delta_energy(1.0, 1, &ladder).is_err());
    }
}

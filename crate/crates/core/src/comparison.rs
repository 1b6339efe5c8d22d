//! Closed-form theory of the reflection-symmetrized comparison model
//! `Σ(p² − δ(z_i)) + (2Z)⁻¹ Σ [δ(z_i − z_j) + δ(z_i + z_j)]`.
//!
//! Symmetric states are fixed by their restriction to the cone
//! `0 ≤ z_1 ≤ … ≤ z_N`; [`cone_point`] maps any configuration there.

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Result};

/// `κ_n = 1/2 − (n − 1)/(4Z)`, `n ≥ 1`.
pub fn decay_rate(z_charge: f64, n: usize) -> f64 {
    0.5 - (n as f64 - 1.0) / (4.0 * z_charge)
}

/// Largest integer strictly below `2Z + 1`.
pub fn critical_number(z_charge: f64) -> Result<usize> {
    require_positive("Z", z_charge)?;
    Ok(((2.0 * z_charge + 1.0).ceil() - 1.0) as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSolution {
    pub z_charge: f64,
    pub n_particles: usize,
    pub kappas: Vec<f64>,
    /// Every `κ_n > 0`, equivalently `N < 2Z + 1`.
    pub bound: bool,
    pub energy: f64,
    pub n_o: usize,
}

pub fn solve_comparison(z_charge: f64, n_particles: usize) -> Result<ComparisonSolution> {
    let n_o = critical_number(z_charge)?;
    if n_particles == 0 {
        return domain("N must be at least 1");
    }
    let kappas: Vec<f64> = (1..=n_particles).map(|n| decay_rate(z_charge, n)).collect();
    let energy = -kappas[..n_particles.min(n_o)].iter().map(|k| k * k).sum::<f64>();
    Ok(ComparisonSolution {
        z_charge,
        n_particles,
        bound: n_particles <= n_o,
        kappas,
        energy,
        n_o,
    })
}

/// `ẽ(Z,N)` written through `λ = N/Z`; valid while `N < 2Z + 1`.
pub fn lambda_form_energy(z_charge: f64, n_particles: usize) -> Result<f64> {
    require_positive("Z", z_charge)?;
    if n_particles == 0 {
        return domain("N must be at least 1");
    }
    let n = n_particles as f64;
    let l = n / z_charge;
    Ok(-0.25 * (n * (1.0 - l / 2.0 + l * l / 12.0) + (l / 2.0 - l * l / 8.0) + l * l / (24.0 * n)))
}

/// Sorted absolute values: the cone representative of `z`.
pub fn cone_point(z: &[f64]) -> Vec<f64> {
    let mut c: Vec<f64> = z.iter().map(|v| v.abs()).collect();
    c.sort_by(f64::total_cmp);
    c
}

/// Normalization `c` of the product-exponential ground state.
pub fn normalization(z_charge: f64, n_particles: usize) -> Result<f64> {
    let sol = solve_comparison(z_charge, n_particles)?;
    if !sol.bound {
        return domain(format!(
            "N = {n_particles} is not bound at Z = {z_charge}; the ground state is not square integrable"
        ));
    }
    // ∫_cone Π e^{−2κ_i z_i} = Π_k 1 / (2 Σ_{i≥k} κ_i), times 2ᴺ N! images.
    let mut tail = 0.0;
    let mut cone = 1.0;
    for k in sol.kappas.iter().rev() {
        tail += k;
        cone /= 2.0 * tail;
    }
    let images: f64 = (1..=n_particles).map(|k| 2.0 * k as f64).product();
    Ok(1.0 / (images * cone).sqrt())
}

/// Normalized ground state `ψ̃` at `z`; `N = z.len()`.
pub fn tilde_wavefunction(z: &[f64], z_charge: f64) -> Result<f64> {
    let c = normalization(z_charge, z.len()).map_err(|_| {
        crate::Error::Domain(format!(
            "N = {} is unbound at Z = {z_charge}; use check_wavefunction for the non-normalizable profile",
            z.len()
        ))
    })?;
    let exponent: f64 = cone_point(z)
        .iter()
        .enumerate()
        .map(|(i, s)| decay_rate(z_charge, i + 1) * s)
        .sum();
    Ok(c * (-exponent).exp())
}

/// Unnormalized `ψ̌` for `N ≥ 2Z + 1`: exponentials for the first `N_o`
/// ranks, linear factors `1 − κ_j z_j` beyond.
pub fn check_wavefunction(z: &[f64], z_charge: f64) -> Result<f64> {
    let n_o = critical_number(z_charge)?;
    Ok(cone_point(z)
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let k = decay_rate(z_charge, i + 1);
            if i < n_o {
                (-k * s).exp()
            } else {
                1.0 - k * s
            }
        })
        .product())
}

/// `γ_{i,i+1}` on the cone for the unbound regime (`i` is 1-based).
pub fn face_gamma(i: usize, z: &[f64], z_charge: f64) -> Result<f64> {
    let n = z.len();
    let n_o = critical_number(z_charge)?;
    if n <= n_o {
        return domain(format!(
            "N = {n} is bound at Z = {z_charge}; γ is defined for N ≥ 2Z + 1"
        ));
    }
    if i == 0 || i >= n {
        return domain(format!("γ index {i} outside 1..{}", n - 1));
    }
    if z.windows(2).any(|w| w[0] > w[1]) || z.first().is_some_and(|v| *v < 0.0) {
        return domain("point is not in the cone 0 ≤ z_1 ≤ … ≤ z_N");
    }
    let kappa = |k: usize| decay_rate(z_charge, k).abs();
    Ok(if i < n_o {
        1.0
    } else if i == n_o {
        let k1 = kappa(n_o + 1);
        4.0 * z_charge * (decay_rate(z_charge, n_o) + k1 / (1.0 + k1 * z[n_o - 1]))
    } else {
        1.0 / ((1.0 + kappa(i) * z[i - 1]) * (1.0 + kappa(i + 1) * z[i]))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroModeReport {
    /// `max |A_n ψ| / ψ` over the samples and coordinates.
    pub max_residual: f64,
    /// Jump of `∂_{z_1} ln ψ` across `z_1 = 0`.
    pub attraction_jump: f64,
    /// Jump of `(∂_i − ∂_{i+1}) ln ψ` across each face `z_i = z_{i+1}`.
    pub pair_jumps: Vec<f64>,
    /// Pair strength the jumps should reproduce, `γ_{i,i+1}/(2Z)`.
    pub expected_pair_jumps: Vec<f64>,
    pub max_jump_mismatch: f64,
}

const FACE_CLEARANCE: f64 = 1e-3;

/// Checks that `A_n = ∂_n − ∂_n ln ψ` annihilates the model ground state
/// (`ψ̃`, or `ψ̌` when unbound) at interior cone points, and that the
/// log-derivative jumps across the cone faces match the δ-strengths.
///
/// Derivatives of `ln ψ` are taken by differencing the symmetrically
/// extended wavefunction, so the sorting and sign bookkeeping is exercised.
pub fn zero_mode_residual(z_charge: f64, samples: &[Vec<f64>]) -> Result<ZeroModeReport> {
    let n = match samples.first() {
        Some(s) => s.len(),
        None => return domain("no sample points"),
    };
    let sol = solve_comparison(z_charge, n)?;
    for s in samples {
        if s.len() != n {
            return domain("sample points differ in length");
        }
        if s[0] < FACE_CLEARANCE || s.windows(2).any(|w| w[1] - w[0] < FACE_CLEARANCE) {
            return domain(format!("sample {s:?} lies on or next to a cone face"));
        }
    }
    let ln_psi = |z: &[f64]| -> f64 {
        if sol.bound {
            tilde_wavefunction(z, z_charge).map(f64::ln).unwrap_or(f64::NAN)
        } else {
            check_wavefunction(z, z_charge).map(f64::ln).unwrap_or(f64::NAN)
        }
    };
    let n_o = sol.n_o;
    let analytic = |rank: usize, s: f64| -> f64 {
        let k = decay_rate(z_charge, rank + 1);
        if rank < n_o {
            -k
        } else {
            -k / (1.0 - k * s)
        }
    };

    let mut max_residual = 0.0f64;
    for s in samples {
        // Keep the stencil inside the cone cell of the sample.
        let gap = s.windows(2).map(|w| w[1] - w[0]).fold(s[0], f64::min);
        let h = (0.2 * gap).min(1e-2);
        let mut p = s.clone();
        for a in 0..n {
            let x = p[a];
            let mut eval = |t: f64| {
                p[a] = x + t;
                ln_psi(&p)
            };
            // Fourth-order central difference of ln ψ.
            let d = (eval(-2.0 * h) - 8.0 * eval(-h) + 8.0 * eval(h) - eval(2.0 * h)) / (12.0 * h);
            p[a] = x;
            max_residual = max_residual.max((d - analytic(a, x)).abs());
        }
    }

    // One-sided second-order differences at a face point built from the
    // first sample.
    let h = 1e-4;
    let one_sided = |p: &[f64], a: usize, dir: f64| -> f64 {
        let mut q = p.to_vec();
        let f0 = ln_psi(&q);
        q[a] = p[a] + dir * h;
        let f1 = ln_psi(&q);
        q[a] = p[a] + 2.0 * dir * h;
        let f2 = ln_psi(&q);
        dir * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
    };
    let base = &samples[0];
    let mut face = base.clone();
    face[0] = 0.0;
    let attraction_jump = one_sided(&face, 0, 1.0) - one_sided(&face, 0, -1.0);

    let mut pair_jumps = Vec::with_capacity(n.saturating_sub(1));
    let mut expected_pair_jumps = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let mut face = base.clone();
        face[i + 1] = face[i];
        // Right of the face particle i is above particle i + 1.
        let right = one_sided(&face, i, 1.0) - one_sided(&face, i + 1, -1.0);
        let left = one_sided(&face, i, -1.0) - one_sided(&face, i + 1, 1.0);
        pair_jumps.push(right - left);
        let gamma = if sol.bound {
            1.0
        } else {
            face_gamma(i + 1, &face, z_charge)?
        };
        expected_pair_jumps.push(gamma / (2.0 * z_charge));
    }
    let max_jump_mismatch = pair_jumps
        .iter()
        .zip(&expected_pair_jumps)
        .map(|(a, b)| (a - b).abs())
        .fold((attraction_jump + 1.0).abs(), f64::max);
    Ok(ZeroModeReport {
        max_residual,
        attraction_jump,
        pair_jumps,
        expected_pair_jumps,
        max_jump_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hydrogen_like_case() {
        let s = solve_comparison(1.0, 1).unwrap();
        assert_eq!(s.kappas, vec![0.5]);
        assert_eq!(s.energy, -0.25);
        assert!(s.bound);
    }

    #[test]
    fn two_electrons_at_unit_charge() {
        let s = solve_comparison(1.0, 2).unwrap();
        assert_eq!(s.kappas, vec![0.5, 0.25]);
        assert_eq!(s.energy, -5.0 / 16.0);
        assert!(s.bound);
        assert_eq!(s.n_o, 2);
    }

    #[test]
    fn third_electron_unbound_and_clamped() {
        let s = solve_comparison(1.0, 3).unwrap();
        assert_eq!(s.kappas[2], 0.0);
        assert!(!s.bound);
        assert_eq!(s.energy, -5.0 / 16.0);
    }

    #[test]
    fn critical_numbers() {
        assert_eq!(critical_number(1.0).unwrap(), 2);
        assert_eq!(critical_number(1.5).unwrap(), 3);
        assert_eq!(critical_number(2.0).unwrap(), 4);
        assert_eq!(critical_number(0.1).unwrap(), 1);
        assert!(critical_number(0.0).is_err());
    }

    #[test]
    fn lambda_form_agrees_with_kappa_sum() {
        for z in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let n_o = critical_number(z).unwrap();
            for n in 1..=n_o {
                let a = solve_comparison(z, n).unwrap().energy;
                let b = lambda_form_energy(z, n).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "Z={z} N={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn energy_is_non_increasing_and_flat_past_n_o() {
        for z in [0.5, 1.0, 1.5, 3.0] {
            let n_o = critical_number(z).unwrap();
            let e: Vec<f64> = (1..=n_o + 3).map(|n| solve_comparison(z, n).unwrap().energy).collect();
            assert!(e.windows(2).all(|w| w[1] <= w[0]));
            assert!(e[n_o - 1..].iter().all(|v| *v == e[n_o - 1]));
        }
    }

    #[test]
    fn wavefunction_symmetries() {
        let a = tilde_wavefunction(&[0.0], 1.0).unwrap();
        let b = tilde_wavefunction(&[2.0], 1.0).unwrap();
        assert_relative_eq!(b / a, (-1.0f64).exp(), max_relative = 1e-14);
        let p = tilde_wavefunction(&[1.0, 2.0], 1.0).unwrap();
        let q = tilde_wavefunction(&[-2.0, 1.0], 1.0).unwrap();
        assert_eq!(p, q);
        assert!(tilde_wavefunction(&[0.0, 1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn one_particle_normalization_matches_delta_state() {
        // √(1/2) e^{−|z|/2}
        assert_relative_eq!(normalization(1.0, 1).unwrap(), 0.5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn gamma_branches() {
        // Z = 1, N = 3: κ₃ = 0 so the middle branch is exactly one.
        for z2 in [0.0f64, 0.5, 3.0] {
            assert_relative_eq!(face_gamma(2, &[0.1, z2.max(0.1), 4.0], 1.0).unwrap(), 1.0);
        }
        assert_eq!(face_gamma(1, &[0.3, 0.7, 4.0], 1.0).unwrap(), 1.0);
        // Z = 0.9, N = 3: N_o = 2 and κ₃ < 0.
        let g: Vec<f64> = [0.0, 1.0, 10.0]
            .iter()
            .map(|z2| face_gamma(2, &[0.0, *z2, 20.0], 0.9).unwrap())
            .collect();
        assert!(g.windows(2).all(|w| w[1] < w[0]));
        assert!(g.iter().all(|v| *v <= 1.0 + 1e-15));
        assert!(face_gamma(1, &[0.1, 0.2], 1.0).is_err());
        assert!(face_gamma(2, &[0.3, 0.2, 0.5], 1.0).is_err());
    }

    #[test]
    fn zero_mode_bound_case() {
        let samples: Vec<Vec<f64>> = (0..50)
            .map(|k| {
                let t = k as f64 * 0.1;
                vec![0.05 + t, 0.3 + 1.5 * t]
            })
            .collect();
        let r = zero_mode_residual(1.0, &samples).unwrap();
        assert!(r.max_residual <= 1e-12, "{}", r.max_residual);
        assert!((r.attraction_jump + 1.0).abs() < 1e-9);
        assert!((r.pair_jumps[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_mode_unbound_case_matches_gamma() {
        let samples = vec![vec![0.2, 0.9, 1.7, 3.0]];
        let r = zero_mode_residual(1.0, &samples).unwrap();
        assert!(r.max_residual < 1e-8, "{}", r.max_residual);
        assert!(r.max_jump_mismatch < 1e-6, "{r:?}");
    }

    #[test]
    fn samples_on_faces_are_rejected() {
        assert!(zero_mode_residual(1.0, &[vec![0.5, 0.5]]).is_err());
        assert!(zero_mode_residual(1.0, &[vec![0.0, 0.5]]).is_err());
    }
}

//! Lowest eigenpair of large symmetric operators given only their action.
//!
//! Two variants share one recurrence. `Full` keeps the Krylov basis and
//! orthogonalizes every new vector against all of it (twice). `TwoPass`
//! keeps three vectors, locates the lowest Ritz value, then replays the
//! recurrence to assemble the Ritz vector; it is the only option once the
//! basis no longer fits in memory. Both restart from the current Ritz
//! vector when the iteration cap is reached.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{axpy_with, dot_with, norm_with, scale_with, Execution};
use crate::tridiag::SymTridiagonal;

/// A real symmetric linear operator.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// Upper bound on the spectral radius, used to scale tolerances.
    fn norm_estimate(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reorthogonalization {
    Full,
    TwoPass,
    /// `Full` while the stored basis stays below `full_reorth_max_bytes`.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    /// Krylov steps per cycle.
    pub max_iter: usize,
    pub max_restarts: usize,
    /// Stop when `‖Hv − θv‖ ≤ tol · ‖H‖`.
    pub tol: f64,
    pub reorthogonalization: Reorthogonalization,
    pub full_reorth_max_bytes: usize,
    /// Execution mode of the vector kernels.
    pub execution: Execution,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            max_iter: 5000,
            max_restarts: 4,
            tol: 1e-8,
            reorthogonalization: Reorthogonalization::Auto,
            full_reorth_max_bytes: 64 << 20,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosResult {
    pub eigenvalue: f64,
    /// Unit Euclidean norm.
    pub eigenvector: Vec<f64>,
    pub residual_norm: f64,
    pub norm_estimate: f64,
    /// Operator applications over all cycles and passes.
    pub matvecs: usize,
    pub restarts: usize,
    pub full_reorthogonalization: bool,
}

impl LanczosResult {
    pub fn relative_residual(&self) -> f64 {
        self.residual_norm / self.norm_estimate
    }
}

/// Deterministic start vector with entries uniform in `[-1, 1)`.
pub fn random_start(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

struct Recurrence<'a, O: SymmetricOperator + ?Sized, P: Fn(&mut [f64]) + Sync> {
    op: &'a O,
    project: &'a P,
    exec: Execution,
}

impl<O: SymmetricOperator + ?Sized, P: Fn(&mut [f64]) + Sync> Recurrence<'_, O, P> {
    /// One Lanczos step: `w ← H v − β_prev v_prev`, orthogonalized against
    /// `v` (and `basis` if given). Returns `α`.
    fn step(&self, v: &[f64], v_prev: Option<(&[f64], f64)>, basis: Option<&[Vec<f64>]>, w: &mut [f64]) -> f64 {
        self.op.apply(v, w);
        if let Some((vp, beta)) = v_prev {
            axpy_with(-beta, vp, w, self.exec);
        }
        let mut alpha = dot_with(w, v, self.exec);
        axpy_with(-alpha, v, w, self.exec);
        (self.project)(w);
        match basis {
            Some(basis) => {
                for _ in 0..2 {
                    for b in basis {
                        let c = dot_with(w, b, self.exec);
                        axpy_with(-c, b, w, self.exec);
                    }
                }
            }
            None => {
                let c = dot_with(w, v, self.exec);
                axpy_with(-c, v, w, self.exec);
                alpha += c;
            }
        }
        alpha
    }
}

fn lowest_ritz(alphas: &[f64], betas: &[f64]) -> Result<(f64, Vec<f64>)> {
    let t = SymTridiagonal::new(alphas.to_vec(), betas[..alphas.len() - 1].to_vec());
    let (theta, s, _) = t.lowest_eigenpair()?;
    Ok((theta, s))
}

/// Lowest eigenpair of `op` inside the range of `project` (pass a no-op for
/// the full space). The projector must commute with `op`.
pub fn lowest_eigenpair<O, P>(op: &O, project: &P, start: Vec<f64>, cfg: &LanczosConfig) -> Result<LanczosResult>
where
    O: SymmetricOperator + ?Sized,
    P: Fn(&mut [f64]) + Sync,
{
    let n = op.dim();
    assert_eq!(start.len(), n, "start vector has the wrong length");
    let hnorm = op.norm_estimate().max(f64::MIN_POSITIVE);
    let target = cfg.tol * hnorm;
    let steps = cfg.max_iter.min(n).max(1);
    let full = match cfg.reorthogonalization {
        Reorthogonalization::Full => true,
        Reorthogonalization::TwoPass => false,
        Reorthogonalization::Auto => steps.saturating_mul(n).saturating_mul(8) <= cfg.full_reorth_max_bytes,
    };
    let exec = cfg.execution;
    let rec = Recurrence { op, project, exec };

    let mut x = start;
    project(&mut x);
    let mut nx = norm_with(&x, exec);
    if nx == 0.0 || !nx.is_finite() {
        return Err(Error::Domain("start vector vanishes in the requested sector".into()));
    }
    scale_with(1.0 / nx, &mut x, exec);

    let mut matvecs = 0;
    let mut best = (f64::NAN, f64::INFINITY);
    let mut w = vec![0.0; n];
    let mut hx = vec![0.0; n];
    for restart in 0..=cfg.max_restarts {
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut v = x.clone();
        let mut v_prev = vec![0.0; n];
        let mut ritz = (f64::NAN, Vec::new());
        let check_every = 10;
        for j in 0..steps {
            if full {
                basis.push(v.clone());
            }
            let prev = (j > 0).then(|| (v_prev.as_slice(), betas[j - 1]));
            let alpha = rec.step(&v, prev, full.then_some(basis.as_slice()), &mut w);
            matvecs += 1;
            let beta = norm_with(&w, exec);
            alphas.push(alpha);
            betas.push(beta);
            let exhausted = beta <= 1e-14 * hnorm || j + 1 == steps;
            if exhausted || (j + 1) % check_every == 0 {
                ritz = lowest_ritz(&alphas, &betas)?;
                let estimate = beta * ritz.1.last().copied().unwrap_or(0.0).abs();
                if estimate <= 0.1 * target || exhausted {
                    break;
                }
            }
            std::mem::swap(&mut v_prev, &mut v);
            v.copy_from_slice(&w);
            scale_with(1.0 / beta, &mut v, exec);
        }

        // Assemble the Ritz vector.
        let coeffs = &ritz.1;
        let mut y = vec![0.0; n];
        if full {
            for (c, b) in coeffs.iter().zip(&basis) {
                axpy_with(*c, b, &mut y, exec);
            }
        } else {
            let mut v = x.clone();
            let mut v_prev = vec![0.0; n];
            for (j, c) in coeffs.iter().enumerate() {
                axpy_with(*c, &v, &mut y, exec);
                if j + 1 == coeffs.len() {
                    break;
                }
                let prev = (j > 0).then(|| (v_prev.as_slice(), betas[j - 1]));
                rec.step(&v, prev, None, &mut w);
                matvecs += 1;
                std::mem::swap(&mut v_prev, &mut v);
                v.copy_from_slice(&w);
                scale_with(1.0 / betas[j], &mut v, exec);
            }
        }
        drop(basis);
        project(&mut y);
        nx = norm_with(&y, exec);
        scale_with(1.0 / nx, &mut y, exec);
        op.apply(&y, &mut hx);
        matvecs += 1;
        let theta = dot_with(&y, &hx, exec);
        axpy_with(-theta, &y, &mut hx, exec);
        let residual = norm_with(&hx, exec);
        x = y;
        best = (theta, residual);
        if residual <= target {
            return Ok(LanczosResult {
                eigenvalue: theta,
                eigenvector: x,
                residual_norm: residual,
                norm_estimate: hnorm,
                matvecs,
                restarts: restart,
                full_reorthogonalization: full,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "Lanczos",
        iterations: matvecs,
        best: best.0,
        residual: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    struct Chain {
        n: usize,
        pot: Vec<f64>,
    }

    impl SymmetricOperator for Chain {
        fn dim(&self) -> usize {
            self.n
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for i in 0..self.n {
                let mut v = (2.0 + self.pot[i]) * x[i];
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < self.n {
                    v -= x[i + 1];
                }
                y[i] = v;
            }
        }
        fn norm_estimate(&self) -> f64 {
            4.0 + self.pot.iter().fold(0.0f64, |m, v| m.max(v.abs()))
        }
    }

    fn chain(n: usize) -> Chain {
        Chain { n, pot: vec![0.0; n] }
    }

    #[test]
    fn free_chain_both_variants() {
        let n = 400;
        let exact = 2.0 - 2.0 * (PI / (n as f64 + 1.0)).cos();
        for mode in [Reorthogonalization::Full, Reorthogonalization::TwoPass] {
            let cfg = LanczosConfig {
                reorthogonalization: mode,
                tol: 1e-10,
                ..Default::default()
            };
            let r = lowest_eigenpair(&chain(n), &|_: &mut [f64]| {}, random_start(n, 7), &cfg).unwrap();
            assert!(
                (r.eigenvalue - exact).abs() < 1e-12,
                "{mode:?}: {}",
                r.eigenvalue - exact
            );
            assert!(r.relative_residual() <= 1e-10);
            assert_eq!(r.full_reorthogonalization, mode == Reorthogonalization::Full);
        }
    }

    #[test]
    fn agrees_with_tridiagonal_solver() {
        let n = 301;
        let pot: Vec<f64> = (0..n)
            .map(|i| -3.0 * (-((i as f64 - 150.0) / 20.0).powi(2)).exp())
            .collect();
        let t = SymTridiagonal::new(pot.iter().map(|p| 2.0 + p).collect(), vec![-1.0; n - 1]);
        let exact = t.lowest_eigenvalue();
        let op = Chain { n, pot };
        let r = lowest_eigenpair(&op, &|_: &mut [f64]| {}, random_start(n, 1), &LanczosConfig::default()).unwrap();
        assert!((r.eigenvalue - exact).abs() < 1e-12);
    }

    #[test]
    fn restarts_when_cycles_are_short() {
        let n = 200;
        let exact = 2.0 - 2.0 * (PI / (n as f64 + 1.0)).cos();
        let cfg = LanczosConfig {
            max_iter: 40,
            max_restarts: 200,
            tol: 1e-9,
            ..Default::default()
        };
        let r = lowest_eigenpair(&chain(n), &|_: &mut [f64]| {}, random_start(n, 3), &cfg).unwrap();
        assert!(r.restarts > 0);
        assert!((r.eigenvalue - exact).abs() < 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        let n = 200;
        let cfg = LanczosConfig {
            max_iter: 5,
            max_restarts: 1,
            ..Default::default()
        };
        let err = lowest_eigenpair(&chain(n), &|_: &mut [f64]| {}, random_start(n, 3), &cfg).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { what: "Lanczos", .. }));
    }

    #[test]
    fn projector_restricts_to_even_sector() {
        // Mirror symmetry of the free chain: the even sector holds the ground state,
        // the odd sector starts at the second level.
        let n = 101;
        let odd = |x: &mut [f64]| {
            for i in 0..n / 2 {
                let a = 0.5 * (x[i] - x[n - 1 - i]);
                x[i] = a;
                x[n - 1 - i] = -a;
            }
            x[n / 2] = 0.0;
        };
        let r = lowest_eigenpair(&chain(n), &odd, random_start(n, 5), &LanczosConfig::default()).unwrap();
        let second = 2.0 - 2.0 * (2.0 * PI / (n as f64 + 1.0)).cos();
        assert!((r.eigenvalue - second).abs() < 1e-12);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let n = 500;
        let cfg = LanczosConfig::default();
        let a = lowest_eigenpair(&chain(n), &|_: &mut [f64]| {}, random_start(n, 11), &cfg).unwrap();
        let b = lowest_eigenpair(&chain(n), &|_: &mut [f64]| {}, random_start(n, 11), &cfg).unwrap();
        assert_eq!(a.eigenvalue.to_bits(), b.eigenvalue.to_bits());
        assert_eq!(a.eigenvector, b.eigenvector);
    }
}

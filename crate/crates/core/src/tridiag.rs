//! Lowest eigenpair of real symmetric tridiagonal matrices: Sturm-sequence
//! bisection for the eigenvalue, shifted inverse iteration for the vector.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// Sub/super-diagonal, length `diag.len() - 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let (lo, hi) = self.gershgorin();
        let tiny = f64::MIN_POSITIVE.sqrt() * (hi - lo).abs().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Bracket `[lo, hi]` around the smallest eigenvalue, shrunk by
    /// bisection until it is as tight as floating point allows.
    pub fn lowest_eigenvalue_bracket(&self) -> (f64, f64) {
        let (mut lo, mut hi) = self.gershgorin();
        let width = (hi - lo).max(f64::MIN_POSITIVE);
        lo -= 1e-12 * width;
        hi += 1e-12 * width;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    pub fn lowest_eigenvalue(&self) -> f64 {
        let (lo, hi) = self.lowest_eigenvalue_bracket();
        0.5 * (lo + hi)
    }

    /// Solves `(T - shift) x = rhs` by LDLᵀ elimination; `shift` must lie
    /// below the spectrum so that no pivoting is required.
    fn solve_shifted(&self, shift: f64, rhs: &mut [f64]) {
        let n = self.len();
        let mut d = vec![0.0; n];
        d[0] = self.diag[0] - shift;
        for i in 1..n {
            let l = self.off[i - 1] / d[i - 1];
            d[i] = self.diag[i] - shift - l * self.off[i - 1];
            rhs[i] -= l * rhs[i - 1];
        }
        rhs[n - 1] /= d[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.off[i] * rhs[i + 1]) / d[i];
        }
    }

    /// Solves `T x = rhs` for positive definite `T`; fails on a nonpositive
    /// pivot.
    pub fn solve_positive_definite(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        assert_eq!(rhs.len(), n);
        let mut x = rhs.to_vec();
        let mut d = vec![0.0; n];
        d[0] = self.diag[0];
        for i in 0..n {
            if i > 0 {
                let l = self.off[i - 1] / d[i - 1];
                d[i] = self.diag[i] - l * self.off[i - 1];
                x[i] -= l * x[i - 1];
            }
            if d[i].is_nan() || d[i] <= 0.0 {
                return Err(Error::Domain(format!("matrix is not positive definite (pivot {i})")));
            }
        }
        x[n - 1] /= d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (x[i] - self.off[i] * x[i + 1]) / d[i];
        }
        Ok(x)
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            y[i] = v;
        }
    }

    /// Lowest eigenpair; the vector has unit Euclidean norm and a
    /// nonnegative component sum. Returns the eigenvalue, the vector and
    /// the relative residual `‖Tx − λx‖ / max(1, ‖T‖)`.
    pub fn lowest_eigenpair(&self) -> Result<(f64, Vec<f64>, f64)> {
        let n = self.len();
        if n == 1 {
            return Ok((self.diag[0], vec![1.0], 0.0));
        }
        let (lo, hi) = self.lowest_eigenvalue_bracket();
        let lambda = 0.5 * (lo + hi);
        let (glo, ghi) = self.gershgorin();
        let scale = glo.abs().max(ghi.abs()).max(1.0);
        let shift = lo - 64.0 * f64::EPSILON * scale;
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut y = vec![0.0; n];
        let mut residual = f64::INFINITY;
        const MAX_ITER: usize = 12;
        for _ in 0..MAX_ITER {
            self.solve_shifted(shift, &mut x);
            let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !nrm.is_finite() || nrm == 0.0 {
                break;
            }
            x.iter_mut().for_each(|v| *v /= nrm);
            self.apply(&x, &mut y);
            residual = x
                .iter()
                .zip(&y)
                .map(|(xi, yi)| (yi - lambda * xi).powi(2))
                .sum::<f64>()
                .sqrt()
                / scale;
            if residual < 1e-13 {
                break;
            }
        }
        if !residual.is_finite() || residual > 1e-9 {
            return Err(Error::NoConvergence {
                what: "tridiagonal inverse iteration",
                iterations: MAX_ITER,
                best: lambda,
                residual,
            });
        }
        if x.iter().sum::<f64>() < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        Ok((lambda, x, residual))
    }
}

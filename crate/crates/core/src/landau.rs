//! Field-strength scaling for atoms confined to the lowest Landau band.
//!
//! The longitudinal length scale `L(B)` solves `L sinh(L/2) = √B`; with it
//! the scaled Coulomb potential `V_{B,r}` carries unit weight on `|z| ≤ r`
//! and tends to a δ-function as the field grows.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Error, Result};
use crate::quad::{integrate_with_breaks, QuadConfig};

/// The pair `(B, L(B))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldScale {
    pub b_field: f64,
    pub length: f64,
    /// Achieved `|L sinh(L/2) − √B|`.
    pub residual: f64,
}

fn scale_equation(l: f64, root_b: f64) -> f64 {
    l * (0.5 * l).sinh() - root_b
}

/// Solves the scale equation by bracketed bisection followed by a Newton
/// polish that never leaves the bracket.
pub fn solve_scale(b_field: f64) -> Result<FieldScale> {
    require_positive("B", b_field)?;
    let root_b = b_field.sqrt();
    // L sinh(L/2) increases from 0, so [0, hi] brackets the root once f(hi) > 0.
    let mut lo = 0.0;
    let mut hi = 10.0 * (b_field + 2.0).ln();
    while scale_equation(hi, root_b) <= 0.0 {
        hi *= 2.0;
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if scale_equation(mid, root_b) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut l = 0.5 * (lo + hi);
    for _ in 0..50 {
        let f = scale_equation(l, root_b);
        let df = (0.5 * l).sinh() + 0.5 * l * (0.5 * l).cosh();
        let next = (l - f / df).clamp(lo, hi);
        if next == l {
            break;
        }
        l = next;
    }
    let residual = scale_equation(l, root_b).abs();
    if residual > 1e-12 * root_b {
        return Err(Error::NoConvergence {
            what: "scale equation",
            iterations: 50,
            best: l,
            residual,
        });
    }
    Ok(FieldScale {
        b_field,
        length: l,
        residual,
    })
}

impl FieldScale {
    /// Transverse smearing length `L r / √B` of `V_{B,r}`.
    pub fn smearing(&self, r: f64) -> f64 {
        self.length * r / self.b_field.sqrt()
    }

    /// `V_{B,r}(z) = L⁻¹ (B⁻¹ L² r² + z²)^{-1/2}`.
    pub fn potential(&self, r: f64, z: f64) -> Result<f64> {
        require_positive("r", r)?;
        require_finite("z", z)?;
        let a = self.smearing(r);
        Ok(1.0 / (self.length * (a * a + z * z).sqrt()))
    }

    /// `∫_{z1}^{z2} V_{B,r}(z) dz` in closed form.
    pub fn potential_integral(&self, r: f64, z1: f64, z2: f64) -> f64 {
        let a = self.smearing(r);
        ((z2 / a).asinh() - (z1 / a).asinh()) / self.length
    }
}

/// Convenience wrapper computing `L(B)` on the fly.
pub fn scaled_potential(b_field: f64, r: f64, z: f64) -> Result<f64> {
    require_positive("r", r)?;
    solve_scale(b_field)?.potential(r, z)
}

/// Inputs of the δ-approximation estimate: squared norm `λ`, kinetic energy
/// `T`, transverse distance `r` and field `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaBoundInputs {
    pub lambda: f64,
    pub kinetic: f64,
    pub r: f64,
    pub b_field: f64,
}

impl DeltaBoundInputs {
    pub fn new(lambda: f64, kinetic: f64, r: f64, b_field: f64) -> Result<Self> {
        require_positive("lambda", lambda)?;
        require_finite("T", kinetic)?;
        if kinetic < 0.0 {
            return Err(Error::Domain(format!("T must be nonnegative, got {kinetic}")));
        }
        require_positive("r", r)?;
        require_positive("B", b_field)?;
        Ok(Self {
            lambda,
            kinetic,
            r,
            b_field,
        })
    }

    /// The bracket `λ/r + 8 λ^{1/4} T^{3/4} r^{1/2}` without the `1/L` prefactor.
    pub fn bracket(&self) -> f64 {
        self.lambda / self.r + 8.0 * self.lambda.powf(0.25) * self.kinetic.powf(0.75) * self.r.sqrt()
    }

    /// Radius minimizing [`Self::bracket`] at fixed `λ` and `T`.
    pub fn optimal_radius(&self) -> f64 {
        let c = self.lambda.powf(0.25) * self.kinetic.powf(0.75);
        (self.lambda / (4.0 * c)).powf(2.0 / 3.0)
    }
}

/// Bound on `| |ψ(0)|² − ∫ V_{B,r} |ψ|² |`.
pub fn delta_bound(inputs: &DeltaBoundInputs) -> Result<f64> {
    let scale = solve_scale(inputs.b_field)?;
    Ok(inputs.bracket() / scale.length)
}

/// Spin state of the lowest Landau band. Only spin-down survives the
/// projection, so the spinor factor is carried as a tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinProjection {
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauKernelValue {
    pub value: Complex64,
    pub b_field: f64,
    pub x_perp: [f64; 2],
    pub y_perp: [f64; 2],
    pub spin: SpinProjection,
}

/// Integral kernel of the lowest-Landau-band projector in symmetric gauge:
/// `(B/2π) exp{(i/2)(x × y)B − (1/4)|x − y|² B}`.
pub fn landau_kernel(b_field: f64, x_perp: [f64; 2], y_perp: [f64; 2]) -> Result<LandauKernelValue> {
    require_positive("B", b_field)?;
    let cross = x_perp[0] * y_perp[1] - x_perp[1] * y_perp[0];
    let d0 = x_perp[0] - y_perp[0];
    let d1 = x_perp[1] - y_perp[1];
    let exponent = Complex64::new(-0.25 * (d0 * d0 + d1 * d1) * b_field, 0.5 * cross * b_field);
    Ok(LandauKernelValue {
        value: exponent.exp() * (b_field / (2.0 * PI)),
        b_field,
        x_perp,
        y_perp,
        spin: SpinProjection::Down,
    })
}

// e^{-u²/2} is below 1e-31 past this point.
const GAUSS_CUTOFF: f64 = 12.0;

/// Coulomb potential averaged over the transverse density
/// `(B/2π) e^{−B|x⊥|²/2}` of the m = 0 lowest-Landau orbital.
///
/// With `u = √B s` this is `√B ∫₀^∞ u e^{−u²/2} (B z² + u²)^{-1/2} du`.
pub fn landau_averaged_potential(b_field: f64, z: f64, cfg: &QuadConfig) -> Result<f64> {
    require_positive("B", b_field)?;
    require_finite("z", z)?;
    let root_b = b_field.sqrt();
    let zeta2 = b_field * z * z;
    let zeta = zeta2.sqrt();
    let r = integrate_with_breaks(
        |u| u * (-0.5 * u * u).exp() / (zeta2 + u * u).sqrt(),
        0.0,
        GAUSS_CUTOFF,
        &[zeta, 1.0],
        &QuadConfig {
            abs_tol: cfg.abs_tol / root_b,
            ..*cfg
        },
    )?;
    Ok(root_b * r.value)
}

/// `∫_{z1}^{z2}` of [`landau_averaged_potential`], reduced to a single
/// transverse quadrature with the longitudinal integral done in closed form.
pub fn landau_averaged_integral(b_field: f64, z1: f64, z2: f64, cfg: &QuadConfig) -> Result<f64> {
    require_positive("B", b_field)?;
    let root_b = b_field.sqrt();
    let (s1, s2) = (root_b * z1, root_b * z2);
    let breaks = [s1.abs().min(GAUSS_CUTOFF), s2.abs().min(GAUSS_CUTOFF), 1.0];
    let r = integrate_with_breaks(
        |u| {
            if u == 0.0 {
                return 0.0;
            }
            u * (-0.5 * u * u).exp() * ((s2 / u).asinh() - (s1 / u).asinh())
        },
        0.0,
        GAUSS_CUTOFF,
        &breaks,
        cfg,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_length_root() {
        let b = (0.5f64).sinh().powi(2);
        let s = solve_scale(b).unwrap();
        assert_relative_eq!(s.length, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn rejects_bad_field() {
        assert!(solve_scale(0.0).is_err());
        assert!(solve_scale(-3.0).is_err());
        assert!(solve_scale(f64::INFINITY).is_err());
        assert!(scaled_potential(1e4, 0.0, 0.1).is_err());
        assert!(scaled_potential(1e4, -1.0, 0.1).is_err());
    }

    #[test]
    fn potential_at_origin_simplifies() {
        let s = solve_scale(1e6).unwrap();
        let r = 0.7;
        let v = s.potential(r, 0.0).unwrap();
        assert_relative_eq!(v, 1e3 / (s.length * s.length * r), max_relative = 1e-14);
    }

    #[test]
    fn potential_is_even_and_decreasing() {
        let s = solve_scale(1e8).unwrap();
        let a = s.potential(1.0, 0.3).unwrap();
        assert_eq!(a, s.potential(1.0, -0.3).unwrap());
        assert!(s.potential(1.0, 0.31).unwrap() < a);
        assert!(s.potential(1.1, 0.3).unwrap() < a);
    }

    #[test]
    fn delta_bound_without_kinetic_term() {
        let inputs = DeltaBoundInputs::new(1.0, 0.0, 1.0, 1e6).unwrap();
        let l = solve_scale(1e6).unwrap().length;
        assert_relative_eq!(delta_bound(&inputs).unwrap(), 1.0 / l, max_relative = 1e-15);
        assert!(DeltaBoundInputs::new(0.0, 1.0, 1.0, 1e6).is_err());
        assert!(DeltaBoundInputs::new(1.0, -1.0, 1.0, 1e6).is_err());
    }

    #[test]
    fn kernel_diagonal_and_hermiticity() {
        let x = [0.3, -1.2];
        let k = landau_kernel(7.5, x, x).unwrap();
        assert_eq!(k.value.re, 7.5 / (2.0 * PI));
        assert_eq!(k.value.im, 0.0);
        let y = [-0.4, 2.0];
        let a = landau_kernel(3.0, x, y).unwrap().value;
        let b = landau_kernel(3.0, y, x).unwrap().value;
        assert_relative_eq!(a.re, b.re, max_relative = 1e-14);
        assert_relative_eq!(a.im, -b.im, max_relative = 1e-14);
        assert!(a.norm() <= 3.0 / (2.0 * PI));
    }

    #[test]
    fn averaged_potential_at_origin() {
        let b = 100.0;
        let v = landau_averaged_potential(b, 0.0, &QuadConfig::default()).unwrap();
        assert_relative_eq!(v, (PI * b / 2.0).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn averaged_integral_matches_pointwise_quadrature() {
        let b = 50.0;
        let cfg = QuadConfig::default();
        let direct = crate::quad::integrate(
            |z| landau_averaged_potential(b, z, &cfg).unwrap(),
            0.05,
            0.4,
            &QuadConfig::with_abs_tol(1e-9),
        )
        .unwrap()
        .value;
        let closed = landau_averaged_integral(b, 0.05, 0.4, &cfg).unwrap();
        assert_relative_eq!(direct, closed, max_relative = 1e-8);
    }
}

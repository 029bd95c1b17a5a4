//! Rank-1 kernel evaluation and its tensor products.
//!
//! The one-dimensional kernel is the entire function `E_k(z) = Σ c_n z^n`
//! with `c_0 = 1`, `c_n = c_{n-1}/(n + 2k·[n odd])`, obtained by applying the
//! defining first-order system to monomials. For purely imaginary arguments
//! `E_k(it) = P(t) + iQ(t)` the real pair satisfies
//!
//! ```text
//! P' = -Q,    Q' = P - (2k/t)·Q,    P(0) = 1, Q(0) = 0,
//! ```
//!
//! which is the same defining system in disguise. Direct summation of the
//! series loses all precision for large |t| (the terms peak near e^|t| before
//! cancelling), so beyond a small-argument window the evaluator marches the
//! ODE with high-order Taylor steps and stores per-knot Taylor coefficients;
//! evaluation anywhere is then two short Horner sums. The two routes are
//! cross-checked against each other on their overlap in the tests.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::geometry::WeightContext;

/// Largest |t| evaluated by direct series; chosen so the cancellation error
/// e^|t|·ε stays below ~1e-10 of the result.
const SERIES_WINDOW: f64 = 12.0;
/// Series length covering the window to below 1e-18.
const SERIES_LEN: usize = 56;
/// Spacing between continuation knots.
const KNOT_STEP: f64 = 0.5;
/// Taylor order per knot; (Δ/2)^ORDER/ORDER! is far below f64 resolution.
const TAYLOR_ORDER: usize = 22;
/// Hard cap for the certified adaptive series.
pub const SERIES_ORDER_CAP: usize = 512;
/// Default truncation tolerance for the certified series.
pub const TOL_SERIES: f64 = 1e-14;

/// Which groups admit kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// k = 0: the classical exponential kernel in any dimension.
    Trivial,
    /// Z2 on the line.
    Rank1,
    /// Coordinate sign flips on R^N with one multiplicity per axis.
    Z2Product,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Trivial => "trivial",
            GroupKind::Rank1 => "rank1",
            GroupKind::Z2Product => "z2_product",
        }
    }
}

/// Series coefficients c_n for one multiplicity value.
fn coefficients(k: f64, len: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(len);
    c.push(1.0);
    for n in 1..len {
        let denom = n as f64 + if n % 2 == 1 { 2.0 * k } else { 0.0 };
        let prev = c[n - 1];
        c.push(prev / denom);
    }
    c
}

/// Per-knot Taylor coefficients of (P, Q) around `t0`.
#[derive(Clone)]
struct Knot {
    t0: f64,
    p: [f64; TAYLOR_ORDER + 1],
    q: [f64; TAYLOR_ORDER + 1],
}

impl Knot {
    /// Expand the ODE at t0 from the seed values (P(t0), Q(t0)).
    fn from_seed(k: f64, t0: f64, p0: f64, q0: f64) -> Self {
        let mut p = [0.0; TAYLOR_ORDER + 1];
        let mut q = [0.0; TAYLOR_ORDER + 1];
        let mut s = [0.0; TAYLOR_ORDER + 1]; // Taylor coefficients of Q/t
        p[0] = p0;
        q[0] = q0;
        s[0] = q0 / t0;
        for m in 0..TAYLOR_ORDER {
            p[m + 1] = -q[m] / (m as f64 + 1.0);
            q[m + 1] = (p[m] - 2.0 * k * s[m]) / (m as f64 + 1.0);
            s[m + 1] = (q[m + 1] - s[m]) / t0;
        }
        Self { t0, p, q }
    }

    fn eval(&self, t: f64) -> (f64, f64) {
        let dt = t - self.t0;
        let mut pv = 0.0;
        let mut qv = 0.0;
        for m in (0..=TAYLOR_ORDER).rev() {
            pv = pv * dt + self.p[m];
            qv = qv * dt + self.q[m];
        }
        (pv, qv)
    }
}

/// One-dimensional kernel evaluator for a fixed multiplicity k ≥ 0.
pub struct UnitKernel {
    pub k: f64,
    coeffs: Vec<f64>,
    knots: Vec<Knot>,
    z_max: f64,
}

impl UnitKernel {
    pub fn new(k: f64, z_max: f64) -> Self {
        let coeffs = coefficients(k, SERIES_LEN);
        let mut knots = Vec::new();
        if z_max > SERIES_WINDOW {
            // seed the first knot inside the series-accurate window
            let t_first = SERIES_WINDOW - 2.0 * KNOT_STEP;
            let (p0, q0) = Self::series_imag_raw(&coeffs, t_first);
            let mut knot = Knot::from_seed(k, t_first, p0, q0);
            knots.push(knot.clone());
            let mut t = t_first;
            while t < z_max + KNOT_STEP {
                let next = t + KNOT_STEP;
                let (pv, qv) = knot.eval(next);
                knot = Knot::from_seed(k, next, pv, qv);
                knots.push(knot.clone());
                t = next;
            }
        }
        Self {
            k,
            coeffs,
            knots,
            z_max,
        }
    }

    fn series_imag_raw(coeffs: &[f64], t: f64) -> (f64, f64) {
        // P(t) = Σ (-1)^m c_{2m} t^{2m}, Q(t) = Σ (-1)^m c_{2m+1} t^{2m+1}
        let t2 = t * t;
        let mut p = 0.0;
        let mut q = 0.0;
        let m_max = (coeffs.len() - 1) / 2;
        for m in (0..=m_max).rev() {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            p = p * t2 + sign * coeffs[2 * m];
            if 2 * m + 1 < coeffs.len() {
                q = q * t2 + sign * coeffs[2 * m + 1];
            }
        }
        (p, q * t)
    }

    /// `E_k(it) = P(t) + iQ(t)` for real t with |t| ≤ z_max.
    pub fn eval_imag(&self, t: f64) -> Result<Complex64> {
        let a = t.abs();
        let (p, q) = if a <= SERIES_WINDOW {
            Self::series_imag_raw(&self.coeffs, a)
        } else {
            if a > self.z_max + KNOT_STEP {
                return Err(DunklError::InvalidArgument(format!(
                    "kernel argument |t| = {a:.3} exceeds the table range {:.3}",
                    self.z_max
                )));
            }
            let idx = ((a - self.knots[0].t0) / KNOT_STEP).round() as usize;
            let idx = idx.min(self.knots.len() - 1);
            self.knots[idx].eval(a)
        };
        // P is even, Q is odd
        Ok(Complex64::new(p, if t < 0.0 { -q } else { q }))
    }

    /// Certified adaptive series for real arguments. The remainder after the
    /// n-th term is bounded by |c_n z^n|·q/(1−q) with q = |z|/(n+1), since
    /// c_{n+1} ≤ c_n/(n+1).
    pub fn eval_real(&self, z: f64, tol: f64) -> Result<f64> {
        let mut sum = 1.0f64;
        let mut term = 1.0f64;
        let mut c_prev = 1.0f64;
        for n in 1..=SERIES_ORDER_CAP {
            let denom = n as f64 + if n % 2 == 1 { 2.0 * self.k } else { 0.0 };
            let c = c_prev / denom;
            term = term * z; // z^n built incrementally
            let contrib = c * term;
            sum += contrib;
            c_prev = c;
            let q = z.abs() / (n as f64 + 1.0);
            if q < 1.0 {
                let bound = contrib.abs() * q / (1.0 - q);
                if bound <= tol * sum.abs().max(1.0) {
                    return Ok(sum);
                }
            }
        }
        Err(DunklError::SeriesCap {
            z,
            cap: SERIES_ORDER_CAP,
        })
    }

    /// First series coefficient c_1 = 1/(1+2k); the slope of Q at 0.
    pub fn c1(&self) -> f64 {
        self.coeffs[1]
    }
}

/// Argument tag for the bivariate kernel.
#[derive(Debug, Clone, Copy)]
pub enum KernelArg {
    /// E(x, y) with both arguments real.
    Real,
    /// E(ix, y): first argument rotated to the imaginary axis.
    ImaginaryFirst,
}

/// Kernel evaluator for the supported group kinds. Immutable after
/// construction; tables are sized once from `z_max` (the largest |x·ξ|
/// product the caller will request, per axis).
pub struct KernelEvaluator {
    pub kind: GroupKind,
    pub axis_k: Vec<f64>,
    pub tol_series: f64,
    units: Vec<Arc<UnitKernel>>,
}

impl KernelEvaluator {
    pub fn new(kind: GroupKind, axis_k: Vec<f64>, z_max: f64) -> Self {
        let mut units: Vec<Arc<UnitKernel>> = Vec::with_capacity(axis_k.len());
        for &k in &axis_k {
            let existing = units.iter().find(|u| u.k == k).cloned();
            units.push(existing.unwrap_or_else(|| Arc::new(UnitKernel::new(k, z_max))));
        }
        Self {
            kind,
            axis_k,
            tol_series: TOL_SERIES,
            units,
        }
    }

    /// Classify a weight context: k ≡ 0 is the trivial kernel for any group;
    /// otherwise the roots must be coordinate sign flips.
    pub fn from_context(ctx: &WeightContext, z_max: f64) -> Result<Self> {
        let dim = ctx.dimension();
        if ctx.root_system.multiplicity.iter().all(|&k| k == 0.0) {
            return Ok(Self::new(GroupKind::Trivial, vec![0.0; dim], z_max));
        }
        let mut axis_k = vec![0.0f64; dim];
        for (root, &k) in ctx
            .root_system
            .roots
            .iter()
            .zip(&ctx.root_system.multiplicity)
        {
            let mut axis = None;
            for (d, &c) in root.iter().enumerate() {
                if c.abs() > 1e-12 {
                    if axis.is_some() || (c.abs() - 1.0).abs() > 1e-12 {
                        return Err(DunklError::UnsupportedGroup(
                            "kernel evaluation needs rank1 or a Z2 coordinate product".into(),
                        ));
                    }
                    axis = Some(d);
                }
            }
            let d = axis.ok_or_else(|| DunklError::UnsupportedGroup("zero root".into()))?;
            axis_k[d] = k;
        }
        let kind = if dim == 1 {
            GroupKind::Rank1
        } else {
            GroupKind::Z2Product
        };
        Ok(Self::new(kind, axis_k, z_max))
    }

    pub fn dimension(&self) -> usize {
        self.axis_k.len()
    }

    pub fn unit(&self, axis: usize) -> &UnitKernel {
        &self.units[axis]
    }

    /// `E(ix, y) = ∏_d E_{k_d}(i x_d y_d)` for real x, y.
    pub fn eval_imag_first(&self, x: &[f64], y: &[f64]) -> Result<Complex64> {
        let mut out = Complex64::new(1.0, 0.0);
        for d in 0..self.dimension() {
            out *= self.units[d].eval_imag(x[d] * y[d])?;
        }
        Ok(out)
    }

    /// `E(x, y)` for real x, y via the certified series.
    pub fn eval_real(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let mut out = 1.0;
        for d in 0..self.dimension() {
            out *= self.units[d].eval_real(x[d] * y[d], self.tol_series)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent oracle: sum the recursion term by term with Kahan
    /// compensation until terms vanish at f64 resolution.
    fn kahan_series_oracle(k: f64, z: f64) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        let mut c = 1.0f64;
        let mut zpow = 1.0f64;
        for n in 0..400 {
            if n > 0 {
                let denom = n as f64 + if n % 2 == 1 { 2.0 * k } else { 0.0 };
                c /= denom;
                zpow *= z;
            }
            let term = c * zpow;
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            if term.abs() < 1e-18 * sum.abs().max(1.0) && n > 4 {
                break;
            }
        }
        sum
    }

    #[test]
    fn kernel_is_one_at_zero() {
        for k in [0.0, 0.5, 1.0, 2.0] {
            let u = UnitKernel::new(k, 32.0);
            assert_abs_diff_eq!(u.eval_real(0.0, 1e-14).unwrap(), 1.0, epsilon = 0.0);
            let v = u.eval_imag(0.0).unwrap();
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 0.0);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 0.0);
        }
    }

    #[test]
    fn trivial_multiplicity_reduces_to_exponential() {
        let u = UnitKernel::new(0.0, 64.0);
        for z in [-3.0, -0.7, 0.3, 1.0, 5.0] {
            assert_abs_diff_eq!(u.eval_real(z, 1e-14).unwrap(), z.exp(), epsilon = 1e-12 * z.exp().max(1.0));
        }
        for t in [0.4f64, 7.3, 19.0, 43.7] {
            let v = u.eval_imag(t).unwrap();
            assert_abs_diff_eq!(v.re, t.cos(), epsilon = 1e-11);
            assert_abs_diff_eq!(v.im, t.sin(), epsilon = 1e-11);
        }
    }

    #[test]
    fn k1_value_matches_independent_oracles() {
        let u = UnitKernel::new(1.0, 16.0);
        let got = u.eval_real(1.0, 1e-15).unwrap();
        // summation oracle
        assert_abs_diff_eq!(got, kahan_series_oracle(1.0, 1.0), epsilon = 1e-14);
        // closed form for k = 1: sinh(1) + e^{-1}
        assert_abs_diff_eq!(got, 1f64.sinh() + (-1f64).exp(), epsilon = 1e-13);
        // first partial sums as in the recursion: 1 + 1/3 + 1/6 + 1/30 + 1/120 + ...
        assert!(got > 1.5417 && got < 1.5431 + 1e-12);
    }

    #[test]
    fn imaginary_argument_k1_matches_closed_form() {
        // E_1(it) = sin t/t + i (t cos t - ... ) derived from the even/odd split:
        // P(t) = sin(t)/t, Q(t) = (sin t - t cos t)/t^2... sign check below.
        let u = UnitKernel::new(1.0, 500.0);
        for t in [0.3f64, 2.0, 11.0, 57.3, 333.0, 481.0] {
            let v = u.eval_imag(t).unwrap();
            let p = t.sin() / t;
            let q = (t.sin() - t * t.cos()) / (t * t);
            assert_abs_diff_eq!(v.re, p, epsilon = 2e-12);
            assert_abs_diff_eq!(v.im, q, epsilon = 2e-12);
        }
    }

    #[test]
    fn series_and_table_agree_on_overlap() {
        for k in [0.5, 1.0, 1.3, 2.0] {
            let u = UnitKernel::new(k, 64.0);
            for t in [12.1f64, 12.9, 13.6, 15.0] {
                // table value
                let tab = u.eval_imag(t).unwrap();
                // direct series is still ~1e-10-accurate just above the window
                let (p, q) = UnitKernel::series_imag_raw(&coefficients(k, 120), t);
                assert_abs_diff_eq!(tab.re, p, epsilon = 5e-10);
                assert_abs_diff_eq!(tab.im, q, epsilon = 5e-10);
            }
        }
    }

    #[test]
    fn modulus_is_bounded_by_one_on_imaginary_axis() {
        for k in [0.0, 0.5, 1.0, 2.0] {
            let u = UnitKernel::new(k, 400.0);
            for i in 0..4000 {
                let t = 0.1 * i as f64;
                let v = u.eval_imag(t).unwrap();
                assert!(v.norm() <= 1.0 + 1e-12, "|E_k(it)| > 1 at k={k}, t={t}");
            }
        }
    }

    #[test]
    fn coefficients_positive_and_decreasing() {
        for k in [0.5, 1.0, 2.0] {
            let c = coefficients(k, 64);
            for n in 1..c.len() {
                assert!(c[n] > 0.0);
                assert!(c[n] < c[n - 1]);
            }
        }
    }

    #[test]
    fn series_cap_is_reported() {
        let u = UnitKernel::new(1.0, 16.0);
        assert!(matches!(
            u.eval_real(600.0, 1e-14),
            Err(DunklError::SeriesCap { .. })
        ));
    }

    #[test]
    fn product_kernel_multiplies_axes() {
        let ev = KernelEvaluator::new(GroupKind::Z2Product, vec![1.0, 2.0], 32.0);
        let x = [0.7, -1.1];
        let y = [1.3, 0.4];
        let u0 = UnitKernel::new(1.0, 32.0);
        let u1 = UnitKernel::new(2.0, 32.0);
        let expect = u0.eval_real(x[0] * y[0], 1e-14).unwrap() * u1.eval_real(x[1] * y[1], 1e-14).unwrap();
        assert_abs_diff_eq!(ev.eval_real(&x, &y).unwrap(), expect, epsilon = 1e-13);
        let vi = ev.eval_imag_first(&x, &y).unwrap();
        let expect_i = u0.eval_imag(x[0] * y[0]).unwrap() * u1.eval_imag(x[1] * y[1]).unwrap();
        assert_abs_diff_eq!(vi.re, expect_i.re, epsilon = 1e-13);
        assert_abs_diff_eq!(vi.im, expect_i.im, epsilon = 1e-13);
    }
}

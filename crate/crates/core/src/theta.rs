//! The odd theta function `θ(u|τ)`.
//!
//! `θ` is fixed by `θ(u+1) = -θ(u)`, `θ(u+τ) = -exp(-2πiu - πiτ) θ(u)` and
//! `θ'(0) = 1`. With `p = exp(2πiτ)` it has the product form
//!
//! ```text
//! θ(u) = sin(πu)/π · ∏_{k≥1} (1 - p^k e^{2πiu})(1 - p^k e^{-2πiu}) / (1 - p^k)^2
//! ```
//!
//! Arguments are first reduced into the fundamental cell `|Re u| ≤ 1/2`,
//! `|Im u| ≤ Im τ / 2` using the quasi-periodicity factors, so the truncated
//! product converges at the rate `|p|^{k-1/2}` regardless of where `u` lives.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used everywhere for "this argument sits on the lattice `Z + Zτ`".
pub const LATTICE_TOL: f64 = 1e-10;

/// Default cap on the number of product factors.
pub const DEFAULT_MAX_TERMS: usize = 4096;

/// Default half-width of the window searched by [`ThetaContext::is_on_lattice`].
pub const DEFAULT_LATTICE_WINDOW: i64 = 50;

const TARGET_TAIL: f64 = 1e-16;
const REQUIRED_TAIL: f64 = 1e-12;

/// Modular parameter together with the derived nome and truncation policy.
///
/// Immutable after construction; `Copy` and freely shareable across threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaContext {
    tau: Complex64,
    nome: Complex64,
    terms: usize,
    window: i64,
}

impl ThetaContext {
    pub fn new(tau: Complex64) -> Result<Self> {
        Self::with_max_terms(tau, DEFAULT_MAX_TERMS)
    }

    /// Builds a context keeping at most `max_terms` product factors.
    ///
    /// The number of factors is the smallest `N` with `|p|^N < 1e-16`, clipped
    /// to `max_terms`. Fails if `Im τ ≤ 0`, or if the clipped tail `|p|^N`
    /// still exceeds `1e-12`.
    pub fn with_max_terms(tau: Complex64, max_terms: usize) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() {
            return Err(Error::InvalidTau(format!(
                "Im τ must be strictly positive, got τ = {tau}"
            )));
        }
        let nome = (Complex64::i() * 2.0 * PI * tau).exp();
        let modulus = nome.norm();
        if modulus >= 1.0 {
            return Err(Error::InvalidTau(format!("|p| = {modulus} is not below 1")));
        }
        let needed = if modulus == 0.0 {
            1
        } else {
            (TARGET_TAIL.ln() / modulus.ln()).ceil().max(1.0) as usize + 1
        };
        let terms = needed.min(max_terms.max(1));
        if terms < needed && modulus.powi(terms as i32) >= REQUIRED_TAIL {
            return Err(Error::InvalidTau(format!(
                "|p| = {modulus} too close to 1: {terms} factors leave a tail of {:e}",
                modulus.powi(terms as i32)
            )));
        }
        Ok(Self {
            tau,
            nome,
            terms,
            window: DEFAULT_LATTICE_WINDOW,
        })
    }

    pub fn with_lattice_window(mut self, window: i64) -> Self {
        self.window = window;
        self
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// The nome `p = exp(2πiτ)`.
    pub fn nome(&self) -> Complex64 {
        self.nome
    }

    pub fn truncation_terms(&self) -> usize {
        self.terms
    }

    /// Writes `u = r + m + kτ` with `r` in the fundamental cell.
    fn reduce(&self, u: Complex64) -> (Complex64, i64, i64) {
        let k = (u.im / self.tau.im).round();
        let shifted = u - self.tau * k;
        let m = shifted.re.round();
        (shifted - m, m as i64, k as i64)
    }

    pub fn theta(&self, u: Complex64) -> Complex64 {
        let (r, m, k) = self.reduce(u);
        let core = self.theta_reduced(r);
        if k == 0 {
            return if m % 2 == 0 { core } else { -core };
        }
        let kf = k as f64;
        let factor = (-Complex64::i() * PI * (2.0 * kf * r + kf * kf * self.tau)).exp();
        let sign = if (m + k) % 2 == 0 { 1.0 } else { -1.0 };
        core * factor * sign
    }

    fn theta_reduced(&self, r: Complex64) -> Complex64 {
        let z = (Complex64::i() * 2.0 * PI * r).exp();
        let zinv = z.inv();
        let one = Complex64::new(1.0, 0.0);
        let mut pk = one;
        let mut acc = one;
        for _ in 0..self.terms {
            pk *= self.nome;
            let denom = one - pk;
            acc *= (one - pk * z) * (one - pk * zinv) / (denom * denom);
        }
        (r * PI).sin() / PI * acc
    }

    /// Central-difference derivative at the origin, step `ε^{1/3}`.
    pub fn theta_deriv_at_zero(&self) -> Complex64 {
        let h = f64::EPSILON.cbrt();
        let step = Complex64::new(h, 0.0);
        (self.theta(step) - self.theta(-step)) / (2.0 * h)
    }

    /// Closest lattice point `m + nτ` to `x` and the distance to it.
    pub fn nearest_lattice_point(&self, x: Complex64) -> (i64, i64, f64) {
        let n0 = (x.im / self.tau.im).round() as i64;
        let mut best = (0, 0, f64::INFINITY);
        for n in [n0 - 1, n0, n0 + 1] {
            let rest = x - self.tau * n as f64;
            let m0 = rest.re.round() as i64;
            for m in [m0 - 1, m0, m0 + 1] {
                let dist = (rest - m as f64).norm();
                if dist < best.2 {
                    best = (m, n, dist);
                }
            }
        }
        best
    }

    /// True iff `x` lies within `tol` of some `m + nτ` with `|m|, |n|` inside
    /// the configured window.
    pub fn is_on_lattice(&self, x: Complex64, tol: f64) -> bool {
        let (m, n, dist) = self.nearest_lattice_point(x);
        m.abs() <= self.window && n.abs() <= self.window && dist <= tol
    }

    /// Fails with [`Error::DegenerateParameter`] when `θ(x)` would vanish.
    pub fn require_off_lattice(&self, x: Complex64, label: impl FnOnce() -> String) -> Result<()> {
        if self.is_on_lattice(x, LATTICE_TOL) {
            let label = label();
            Err(Error::DegenerateParameter(format!(
                "θ({label}) vanishes: {label} on lattice Γ ({label} = {x})"
            )))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(matches!(ThetaContext::new(c(0.0, -1.0)), Err(Error::InvalidTau(_))));
        assert!(matches!(ThetaContext::new(c(0.3, 0.0)), Err(Error::InvalidTau(_))));
    }

    #[test]
    fn rejects_nome_too_close_to_one() {
        let err = ThetaContext::with_max_terms(c(0.0, 1e-3), 50).unwrap_err();
        assert!(matches!(err, Error::InvalidTau(_)));
    }

    #[test]
    fn truncation_reaches_target() {
        let ctx = ThetaContext::new(c(0.0, 1.0)).unwrap();
        assert!(ctx.nome().norm().powi(ctx.truncation_terms() as i32) < 1e-16);
    }

    #[test]
    fn vanishes_at_origin() {
        let ctx = ThetaContext::new(c(0.0, 1.0)).unwrap();
        assert_eq!(ctx.theta(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn trigonometric_limit_at_half() {
        let ctx = ThetaContext::new(c(0.0, 10.0)).unwrap();
        let expected = 1.0 / PI;
        assert!((ctx.theta(c(0.5, 0.0)) - expected).norm() < 1e-6);
    }

    #[test]
    fn sign_flip_under_unit_shift() {
        let ctx = ThetaContext::new(c(0.3, 0.8)).unwrap();
        let a = ctx.theta(c(1.23, 0.11));
        let b = ctx.theta(c(0.23, 0.11));
        assert!(rel(a, -b) < 1e-12);
    }

    // Golden values from a 30-digit evaluation of the Jacobi series
    // θ₁(πu, e^{iπτ}) / (π θ₁'(0)).
    #[test]
    fn golden_values() {
        let ctx = ThetaContext::new(c(0.0, 1.0)).unwrap();
        assert!(rel(ctx.theta(c(0.25, 0.0)), c(0.225_924_450_847_643_42, 0.0)) < 1e-14);
        assert!(
            rel(ctx.theta(c(0.37, 0.21)), c(0.360_808_656_308_267_8, 0.092_085_172_374_284_94))
                < 1e-14
        );
        let skew = ThetaContext::new(c(0.3, 0.8)).unwrap();
        assert!(
            rel(skew.theta(c(0.23, 0.11)), c(0.219_745_018_610_754_5, 0.084_707_997_758_876_42))
                < 1e-14
        );
    }

    #[test]
    fn derivative_normalisation() {
        for tau in [c(0.0, 1.0), c(0.5, 2.0), c(0.0, 10.0)] {
            let ctx = ThetaContext::new(tau).unwrap();
            assert!((ctx.theta_deriv_at_zero() - 1.0).norm() < 1e-9, "τ = {tau}");
        }
    }

    #[test]
    fn lattice_membership() {
        let ctx = ThetaContext::new(c(0.0, 1.0)).unwrap();
        assert!(ctx.is_on_lattice(c(0.0, 0.0), 1e-8));
        assert!(ctx.is_on_lattice(c(1.0, 1.0), 1e-8));
        assert!(!ctx.is_on_lattice(c(0.37, 0.21), 1e-8));
        let narrow = ctx.with_lattice_window(2);
        assert!(!narrow.is_on_lattice(c(3.0, 0.0), 1e-8));
    }

    #[test]
    fn guard_names_the_argument() {
        let ctx = ThetaContext::new(c(0.0, 1.0)).unwrap();
        let err = ctx.require_off_lattice(c(1.0, 0.0), || "λ".into()).unwrap_err();
        assert!(err.to_string().contains("λ"));
        assert!(err.to_string().contains("lattice Γ"));
    }
}

//! Elliptic polynomials: the spaces `Θ_n(χ)` of entire functions with
//!
//! ```text
//! φ(u+1) = χ(1) φ(u),   φ(u+τ) = χ(τ) e^{-2πinu-πinτ} φ(u),
//! χ(1) = (-1)^n,        χ(τ) = (-1)^n e^{2πiα},
//! ```
//!
//! together with numerical checks of the identities they satisfy.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::params::seeded_rng;
use crate::theta::{ThetaContext, LATTICE_TOL};

type C = Complex64;

/// Default number of random points for [`membership_residual`].
pub const DEFAULT_SAMPLES: usize = 25;

/// Seed used when [`membership_residual`] draws its sample points.
pub const MEMBERSHIP_SEED: u64 = 0x7e7a;

/// Character of `Θ_n(χ)`, determined by the degree and the exponent `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Character {
    pub degree: usize,
    pub alpha: C,
    pub chi_1: C,
    pub chi_tau: C,
}

impl Character {
    pub fn new(degree: usize, alpha: C) -> Self {
        let sign = if degree.is_multiple_of(2) { 1.0 } else { -1.0 };
        Self {
            degree,
            alpha,
            chi_1: C::new(sign, 0.0),
            chi_tau: sign * (C::i() * 2.0 * PI * alpha).exp(),
        }
    }

    /// `χ(1)² = 1` and `χ(τ)` matches `α`.
    pub fn is_consistent(&self) -> bool {
        let expected = Character::new(self.degree, self.alpha);
        self.chi_1 * self.chi_1 == C::new(1.0, 0.0) && (self.chi_tau - expected.chi_tau).norm() <= 1e-12
    }

    /// `χ(τ) e^{-2πinu-πinτ}`.
    pub fn tau_multiplier(&self, ctx: &ThetaContext, u: C) -> C {
        let n = self.degree as f64;
        self.chi_tau * (-C::i() * PI * n * (2.0 * u + ctx.tau())).exp()
    }
}

/// `Π_k θ(u - a_k)`, an element of `Θ_n(χ)` with `α = Σ a_k`.
pub fn theta_product_poly(ctx: &ThetaContext, a: &[C], u: C) -> C {
    a.iter().map(|&ak| ctx.theta(u - ak)).product()
}

/// [`membership_residual_with`] on a fixed-seed sample.
pub fn membership_residual<F>(ctx: &ThetaContext, f: F, chi: &Character, samples: usize) -> Result<f64>
where
    F: FnMut(C) -> Result<C>,
{
    membership_residual_with(ctx, f, chi, samples, &mut seeded_rng(MEMBERSHIP_SEED))
}

/// Largest of `|f(u+1) - χ(1)f(u)|` and `|f(u+τ) - χ(τ)e^{-2πinu-πinτ}f(u)|`
/// over random `u`, each divided by `max(1, |f(u)|)`.
///
/// Points are drawn as `u = x + yτ` with `x ∈ [0, 1]`, `y ∈ [-0.6, -0.4]`, so
/// `u` and `u + τ` sit symmetrically about the real axis and the multiplier
/// `e^{-2πinu}` stays near unit size.
pub fn membership_residual_with<F, R>(ctx: &ThetaContext, mut f: F, chi: &Character, samples: usize, rng: &mut R) -> Result<f64>
where
    F: FnMut(C) -> Result<C>,
    R: Rng + ?Sized,
{
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = rng.random_range(0.0..=1.0);
        let y = rng.random_range(-0.6..=-0.4);
        let u = C::new(x, 0.0) + ctx.tau() * y;
        let fu = f(u)?;
        let scale = fu.norm().max(1.0);
        let r1 = (f(u + 1.0)? - chi.chi_1 * fu).norm();
        let rt = (f(u + ctx.tau())? - chi.tau_multiplier(ctx, u) * fu).norm();
        worst = worst.max(r1 / scale).max(rt / scale);
    }
    Ok(worst)
}

fn require_nodes_distinct(ctx: &ThetaContext, nodes: &[C]) -> Result<()> {
    for i in 0..nodes.len() {
        for k in 0..i {
            if ctx.is_on_lattice(nodes[i] - nodes[k], LATTICE_TOL) {
                return Err(Error::DegenerateNodes(format!(
                    "u{}-u{} on lattice Γ ({})",
                    i + 1,
                    k + 1,
                    nodes[i] - nodes[k]
                )));
            }
        }
    }
    Ok(())
}

/// Reconstructs the element of `Θ_n(χ)`, `χ(τ) = (-1)^n e^{2πiα}`, taking
/// `values` at `nodes`:
///
/// ```text
/// Σ_i values_i θ(u_i-u+α-Σu_m)/θ(α-Σu_m) Π_{k≠i} θ(u_k-u)/θ(u_k-u_i)
/// ```
pub fn interpolate(ctx: &ThetaContext, nodes: &[C], values: &[C], alpha: C, u: C) -> Result<C> {
    if nodes.is_empty() || nodes.len() != values.len() {
        return Err(Error::InvalidParameter(format!(
            "{} nodes but {} values",
            nodes.len(),
            values.len()
        )));
    }
    require_nodes_distinct(ctx, nodes)?;
    let shift = alpha - nodes.iter().sum::<C>();
    if ctx.is_on_lattice(shift, LATTICE_TOL) {
        return Err(Error::DegenerateNodes(format!("α-Σu on lattice Γ ({shift})")));
    }
    let theta_shift = ctx.theta(shift);
    let mut acc = C::new(0.0, 0.0);
    for (i, (&ui, &val)) in nodes.iter().zip(values).enumerate() {
        let mut term = val * ctx.theta(ui - u + shift) / theta_shift;
        for (k, &uk) in nodes.iter().enumerate() {
            if k != i {
                term *= ctx.theta(uk - u) / ctx.theta(uk - ui);
            }
        }
        acc += term;
    }
    Ok(acc)
}

/// `det‖φ_j(u_i)‖ / (θ(Σu_k - α) Π_{i<j} θ(u_i - u_j))`, constant in the nodes
/// when the `φ_j` span `Θ_n(χ)`.
pub fn vandermonde_ratio(ctx: &ThetaContext, basis: &[&dyn Fn(C) -> C], nodes: &[C], alpha: C) -> Result<C> {
    let n = nodes.len();
    if n == 0 || basis.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} basis functions for {} nodes",
            basis.len(),
            n
        )));
    }
    require_nodes_distinct(ctx, nodes)?;
    let total = nodes.iter().sum::<C>() - alpha;
    if ctx.is_on_lattice(total, LATTICE_TOL) {
        return Err(Error::DegenerateNodes(format!("Σu-α on lattice Γ ({total})")));
    }
    let m = DMatrix::from_fn(n, n, |i, j| basis[j](nodes[i]));
    let mut denom = ctx.theta(total);
    for i in 0..n {
        for j in (i + 1)..n {
            denom *= ctx.theta(nodes[i] - nodes[j]);
        }
    }
    Ok(m.lu().determinant() / denom)
}

/// `G_λ(x) = θ(x+λ) / (θ(x) θ(λ))`.
pub fn g_function(ctx: &ThetaContext, lambda: C, x: C) -> Result<C> {
    ctx.require_off_lattice(lambda, || "λ".into())?;
    ctx.require_off_lattice(x, || format!("G-argument {x}"))?;
    Ok(ctx.theta(x + lambda) / (ctx.theta(x) * ctx.theta(lambda)))
}

/// Residual of `Π_i G_{λ_i}(u_i-v) = Σ_i Π_{j≠i} G_{λ_j}(u_j-u_i) G_{λ₀}(u_i-v)`
/// with `λ₀ = Σ λ_i`, relative to `max(1, |LHS|)`.
pub fn addition_formula_residual(ctx: &ThetaContext, lambdas: &[C], us: &[C], v: C) -> Result<f64> {
    addition_formula_residual_at(ctx, lambdas, us, v, lambdas.iter().sum())
}

/// As [`addition_formula_residual`] but with an explicit `λ₀`, so the check
/// can be shown to fail when `λ₀ ≠ Σ λ_i`.
pub fn addition_formula_residual_at(ctx: &ThetaContext, lambdas: &[C], us: &[C], v: C, lambda0: C) -> Result<f64> {
    if lambdas.is_empty() || lambdas.len() != us.len() {
        return Err(Error::InvalidParameter(format!(
            "{} λ's for {} u's",
            lambdas.len(),
            us.len()
        )));
    }
    let g = |lam: C, x: C| g_function(ctx, lam, x);
    let mut lhs = C::new(1.0, 0.0);
    for (&lam, &u) in lambdas.iter().zip(us) {
        lhs *= g(lam, u - v)?;
    }
    let mut rhs = C::new(0.0, 0.0);
    for (i, &ui) in us.iter().enumerate() {
        let mut term = g(lambda0, ui - v)?;
        for (j, (&lj, &uj)) in lambdas.iter().zip(us).enumerate() {
            if j != i {
                term *= g(lj, uj - ui)?;
            }
        }
        rhs += term;
    }
    Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
}

/// `Q_j(u) = θ(u_j-u+λ-(n-2j+2)ħ)/θ(u_j-u+ħ) Π_{k=2}^{j-1} θ(u_k-u-ħ)/θ(u_k-u+ħ)`
/// with `us[k-1] = u_k`.
pub fn q_function(ctx: &ThetaContext, us: &[C], lambda: C, hbar: C, j: usize, u: C) -> Result<C> {
    let n = us.len();
    if !(2..=n).contains(&j) {
        return Err(Error::InvalidParameter(format!("j = {j} outside [2, {n}]")));
    }
    let den = |x: C, label: String| -> Result<C> {
        ctx.require_off_lattice(x, || label)?;
        Ok(ctx.theta(x))
    };
    let uj = us[j - 1];
    let shift = lambda - hbar * (n as f64 - 2.0 * j as f64 + 2.0);
    let mut acc = ctx.theta(uj - u + shift) / den(uj - u + hbar, format!("u{j}-u+ħ"))?;
    for k in 2..j {
        let uk = us[k - 1];
        acc *= ctx.theta(uk - u - hbar) / den(uk - u + hbar, format!("u{k}-u+ħ"))?;
    }
    Ok(acc)
}

/// Residual of reconstructing `Q_j(u)` from its values at `u_2, …, u_n`:
///
/// ```text
/// Q_j(u) = Σ_{i=2}^n Q_j(u_i) θ(u_i-u+λ)/θ(λ) Π_{k=2}^n θ(u_k-u_i+ħ)/θ(u_k-u+ħ)
///            Π_{k≠i} θ(u_k-u)/θ(u_k-u_i)
/// ```
///
/// relative to `max(1, |Q_j(u)|)`. `us[0]` (that is, `u_1`) is not used.
pub fn qj_interpolation_residual(ctx: &ThetaContext, us: &[C], lambda: C, hbar: C, j: usize, u: C) -> Result<f64> {
    let n = us.len();
    ctx.require_off_lattice(lambda, || "λ".into())?;
    require_nodes_distinct(ctx, &us[1..])?;
    let direct = q_function(ctx, us, lambda, hbar, j, u)?;
    let theta_lam = ctx.theta(lambda);
    let mut rebuilt = C::new(0.0, 0.0);
    for i in 2..=n {
        let ui = us[i - 1];
        let mut term = q_function(ctx, us, lambda, hbar, j, ui)? * ctx.theta(ui - u + lambda) / theta_lam;
        for k in 2..=n {
            let uk = us[k - 1];
            let den = uk - u + hbar;
            ctx.require_off_lattice(den, || format!("u{k}-u+ħ"))?;
            term *= ctx.theta(uk - ui + hbar) / ctx.theta(den);
            if k != i {
                term *= ctx.theta(uk - u) / ctx.theta(uk - ui);
            }
        }
        rebuilt += term;
    }
    Ok((direct - rebuilt).norm() / direct.norm().max(1.0))
}

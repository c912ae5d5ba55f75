//! Boltzmann-weight matrices and residual checks of their defining relations.
//!
//! Every matrix lives on `C² ⊗ C²` with basis order `(++, +-, -+, --)`.
//! Entry `R^{αβ}_{γδ}` is stored at row `(α, β)` and column `(γ, δ)`, where
//! around a vertex `α` sits on the top edge, `β` on the right, `γ` on the
//! bottom and `δ` on the left. Read as an operator, the row index is the
//! output and the column index the input.

use std::f64::consts::PI;

use nalgebra::SMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::theta::ThetaContext;

type C = Complex64;
type Matrix8 = SMatrix<C, 8, 8>;

/// Edge sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i32) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub(crate) fn bit(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

fn pair_index(first: Sign, second: Sign) -> usize {
    2 * first.bit() + second.bit()
}

/// The five distinct weights of a six-vertex-pattern matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexWeights5 {
    pub a: C,
    pub b: C,
    pub bbar: C,
    pub c: C,
    pub cbar: C,
}

/// A 4×4 weight matrix with the ice-rule zero pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMatrix4([[C; 4]; 4]);

impl RMatrix4 {
    /// Places the weights in the standard layout: `a` on both ends of the
    /// diagonal, `b` at `(+-,+-)`, `c̄` at `(+-,-+)`, `c` at `(-+,+-)`, `b̄` at
    /// `(-+,-+)`.
    pub fn from_weights(w: VertexWeights5) -> Self {
        let z = C::new(0.0, 0.0);
        RMatrix4([
            [w.a, z, z, z],
            [z, w.b, w.cbar, z],
            [z, w.c, w.bbar, z],
            [z, z, z, w.a],
        ])
    }

    /// Arbitrary dense matrix, zero pattern not enforced.
    pub fn from_array(entries: [[C; 4]; 4]) -> Self {
        RMatrix4(entries)
    }

    pub fn as_array(&self) -> &[[C; 4]; 4] {
        &self.0
    }

    /// `R^{αβ}_{γδ}`.
    pub fn entry(&self, alpha: Sign, beta: Sign, gamma: Sign, delta: Sign) -> C {
        self.0[pair_index(alpha, beta)][pair_index(gamma, delta)]
    }

    pub fn weights(&self) -> VertexWeights5 {
        VertexWeights5 {
            a: self.0[0][0],
            b: self.0[1][1],
            bbar: self.0[2][2],
            c: self.0[2][1],
            cbar: self.0[1][2],
        }
    }

    pub fn scale(&self, s: C) -> Self {
        let mut out = self.0;
        out.iter_mut().flatten().for_each(|x| *x *= s);
        RMatrix4(out)
    }

    pub fn max_abs_diff(&self, other: &RMatrix4) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Entrywise difference relative to the largest entry of `reference`.
    pub fn rel_diff(&self, reference: &RMatrix4) -> f64 {
        self.max_abs_diff(reference) / reference.max_abs().max(f64::MIN_POSITIVE)
    }
}

/// Elliptic SOS weights at spectral difference `x`, dynamical value `lam`.
pub fn sos_weights(ctx: &ThetaContext, x: C, lam: C, hbar: C) -> Result<VertexWeights5> {
    ctx.require_off_lattice(lam, || "λ".into())?;
    let th = |y: C| ctx.theta(y);
    let theta_lam = th(lam);
    let theta_x = th(x);
    let theta_h = th(hbar);
    Ok(VertexWeights5 {
        a: th(x + hbar),
        b: theta_x * th(lam + hbar) / theta_lam,
        bbar: theta_x * th(lam - hbar) / theta_lam,
        c: th(x + lam) * theta_h / theta_lam,
        cbar: th(x - lam) * theta_h / th(-lam),
    })
}

/// Dynamical elliptic R-matrix `R(x; λ)`.
pub fn sos_rmatrix(ctx: &ThetaContext, x: C, lam: C, hbar: C) -> Result<RMatrix4> {
    sos_weights(ctx, x, lam, hbar).map(RMatrix4::from_weights)
}

fn require_nonzero_q(q: C) -> Result<()> {
    if q.norm() < 1e-300 {
        Err(Error::InvalidParameter("q must be nonzero".into()))
    } else {
        Ok(())
    }
}

/// Six-vertex weights `a = qz - w/q`, `b = z - w`, `c = (q - 1/q) z`,
/// `c̄ = (q - 1/q) w`.
pub fn sixv_rmatrix(z: C, w: C, q: C) -> Result<RMatrix4> {
    require_nonzero_q(q)?;
    let qi = q.inv();
    let b = z - w;
    Ok(RMatrix4::from_weights(VertexWeights5 {
        a: q * z - qi * w,
        b,
        bbar: b,
        c: (q - qi) * z,
        cbar: (q - qi) * w,
    }))
}

/// Trigonometric dynamical R-matrix `R(z, w; μ)`.
pub fn trig_sos_rmatrix(z: C, w: C, mu: C, q: C) -> Result<RMatrix4> {
    require_nonzero_q(q)?;
    if (mu - 1.0).norm() < 1e-12 {
        return Err(Error::DegenerateParameter(format!("μ = {mu} coincides with 1")));
    }
    let qi = q.inv();
    let one = C::new(1.0, 0.0);
    let dq = q - qi;
    Ok(RMatrix4::from_weights(VertexWeights5 {
        a: z * q - w * qi,
        b: (z - w) * (mu * q - qi) / (mu - one),
        bbar: (z - w) * (mu * qi - q) / (mu - one),
        c: (z * mu - w) * dq / (mu - one),
        cbar: (z - w * mu) * dq / (one - mu),
    }))
}

/// Non-dynamical trigonometric R-matrix, the `μ → ∞` limit of
/// [`trig_sos_rmatrix`].
pub fn trig_nondyn_rmatrix(z: C, w: C, q: C) -> Result<RMatrix4> {
    require_nonzero_q(q)?;
    let qi = q.inv();
    Ok(RMatrix4::from_weights(VertexWeights5 {
        a: z * q - w * qi,
        b: q * (z - w),
        bbar: qi * (z - w),
        c: (q - qi) * z,
        cbar: (q - qi) * w,
    }))
}

/// `b → ρ b`, `b̄ → b̄ / ρ`. Leaves every DWBC partition function unchanged.
pub fn gauge_rescale(r: &RMatrix4, rho: C) -> Result<RMatrix4> {
    if rho.norm() == 0.0 {
        return Err(Error::InvalidParameter("gauge factor ρ must be nonzero".into()));
    }
    let mut out = r.0;
    out[1][1] *= rho;
    out[2][2] /= rho;
    Ok(RMatrix4(out))
}

/// Max-norm of `[H⊗1 + 1⊗H, R]` with `H = diag(1, -1)`.
pub fn ice_rule_residual(r: &RMatrix4) -> f64 {
    let charge = [2.0, 0.0, 0.0, -2.0];
    let mut worst: f64 = 0.0;
    for (row, &qr) in charge.iter().enumerate() {
        for (col, &qc) in charge.iter().enumerate() {
            worst = worst.max(((qr - qc) * r.0[row][col]).norm());
        }
    }
    worst
}

fn basis3(signs: [Sign; 3]) -> usize {
    signs.iter().fold(0, |acc, s| 2 * acc + s.bit())
}

fn all_signs3() -> impl Iterator<Item = [Sign; 3]> {
    Sign::BOTH
        .into_iter()
        .flat_map(|a| Sign::BOTH.into_iter().flat_map(move |b| Sign::BOTH.into_iter().map(move |c| [a, b, c])))
}

/// Embeds an R-matrix acting on spaces `(first, second)` of `C²⊗C²⊗C²`. The
/// matrix may depend on the sign carried by the remaining space, which is how
/// an operator-valued dynamical argument `λ + ħH^{(k)}` is realised.
fn embed<F>(first: usize, second: usize, mut r_for_spectator: F) -> Result<Matrix8>
where
    F: FnMut(Option<Sign>) -> Result<RMatrix4>,
{
    let spectator = 3 - first - second;
    let mut sectors = Vec::with_capacity(2);
    for s in Sign::BOTH {
        sectors.push(r_for_spectator(Some(s))?);
    }
    let mut m = Matrix8::zeros();
    for input in all_signs3() {
        for output in all_signs3() {
            if input[spectator] != output[spectator] {
                continue;
            }
            let r = &sectors[input[spectator].bit()];
            m[(basis3(output), basis3(input))] =
                r.0[pair_index(output[first], output[second])][pair_index(input[first], input[second])];
        }
    }
    Ok(m)
}

/// Dynamical Yang–Baxter residual for any family `R(t_a, t_b; shift)`, where
/// `shift ∈ {-1, 0, 1}` is the number of `ħ` added to the dynamical argument.
///
/// Compares `R¹²(λ) R¹³(λ+ħH²) R²³(λ)` with `R²³(λ+ħH¹) R¹³(λ) R¹²(λ+ħH³)`
/// as 8×8 matrices and returns the max-norm of the difference.
pub fn dybe_residual_with<F>(t: [C; 3], r: F) -> Result<f64>
where
    F: Fn(C, C, i32) -> Result<RMatrix4>,
{
    let fixed = |a: usize, b: usize| embed(a, b, |_| r(t[a], t[b], 0));
    let shifted = |a: usize, b: usize| embed(a, b, |s| r(t[a], t[b], s.map_or(0, Sign::value)));
    let lhs = fixed(0, 1)? * shifted(0, 2)? * fixed(1, 2)?;
    let rhs = shifted(1, 2)? * fixed(0, 2)? * shifted(0, 1)?;
    Ok((lhs - rhs).iter().map(|x| x.norm()).fold(0.0, f64::max))
}

/// DYBE residual of the elliptic dynamical R-matrix.
pub fn dybe_residual(ctx: &ThetaContext, t1: C, t2: C, t3: C, lam: C, hbar: C) -> Result<f64> {
    dybe_residual_with([t1, t2, t3], |a, b, shift| sos_rmatrix(ctx, a - b, lam + hbar * shift as f64, hbar))
}

/// DYBE residual of the trigonometric dynamical R-matrix; the shift
/// `λ → λ + ħ` reads `μ → μ q²` in multiplicative variables.
pub fn trig_dybe_residual(z: [C; 3], mu: C, q: C) -> Result<f64> {
    dybe_residual_with(z, |a, b, shift| trig_sos_rmatrix(a, b, mu * q.powi(2 * shift), q))
}

/// Ordinary Yang–Baxter residual of the non-dynamical trigonometric matrix.
pub fn ybe_residual_nondyn(z: [C; 3], q: C) -> Result<f64> {
    dybe_residual_with(z, |a, b, _| trig_nondyn_rmatrix(a, b, q))
}

/// `2πi e^{πi(u+v)}`, the factor turning `θ(u-v)` into `z - w` as `τ → i∞`.
pub fn trig_limit_factor(u: C, v: C) -> C {
    C::new(0.0, 2.0 * PI) * (C::i() * PI * (u + v)).exp()
}

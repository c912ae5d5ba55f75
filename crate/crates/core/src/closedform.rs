//! Closed-form partition functions: the elliptic permutation sum, its
//! weight-function kernel, the recursion factor, the Izergin determinant and
//! the trigonometric permutation sums.
//!
//! Indices in the formulas below are 1-based as in the usual notation; the
//! code shifts them to 0-based, so the dynamical shift `(m-1)ħ` becomes `mħ`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{shifted_label, EllipticParams, TrigParams};
use crate::perm::{check_cap, inversions, permutation_sum, Execution, PERMUTATION_CAP};
use crate::theta::ThetaContext;

type C = Complex64;

/// Condition number above which the determinant route logs a warning.
pub const CONDITION_WARNING: f64 = 1e12;

/// Relative size below which a rational denominator counts as zero.
const DENOMINATOR_TOL: f64 = 1e-10;

fn theta_denominator(ctx: &ThetaContext, x: C, label: impl FnOnce() -> String) -> Result<C> {
    ctx.require_off_lattice(x, label)?;
    Ok(ctx.theta(x))
}

/// `x = a - b`, rejected when it is tiny compared with `|a| + |b|`.
fn difference(a: C, b: C, label: impl FnOnce() -> String) -> Result<C> {
    let x = a - b;
    if x.norm() <= DENOMINATOR_TOL * (a.norm() + b.norm()).max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateParameter(format!("{} vanishes", label())));
    }
    Ok(x)
}

/// `Π_{l<l', σ(l)>σ(l')} table[σ(l)][σ(l')]`.
fn inversion_factor(sigma: &[usize], table: &[Vec<C>]) -> C {
    inversions(sigma).map(|(l, r)| table[sigma[l]][sigma[r]]).product()
}

/// `table[a][b]` for `a > b` from `num(a, b) / den(a, b)`.
fn exchange_table(
    n: usize,
    mut num: impl FnMut(usize, usize) -> C,
    mut den: impl FnMut(usize, usize) -> Result<C>,
) -> Result<Vec<Vec<C>>> {
    let mut t = vec![vec![C::new(0.0, 0.0); n]; n];
    for a in 0..n {
        for b in 0..a {
            t[a][b] = num(a, b) / den(a, b)?;
        }
    }
    Ok(t)
}

fn elliptic_exchange(ctx: &ThetaContext, p: &EllipticParams) -> Result<Vec<Vec<C>>> {
    let (v, h) = (&p.v, p.hbar);
    exchange_table(
        p.n(),
        |a, b| ctx.theta(v[a] - v[b] + h),
        |a, b| theta_denominator(ctx, v[a] - v[b] - h, || format!("v{}-v{}-ħ", a + 1, b + 1)),
    )
}

/// `Π_{k>m} θ(v_k - v_m - ħ) / θ(v_k - v_m)`.
fn elliptic_prefactor(ctx: &ThetaContext, p: &EllipticParams) -> Result<C> {
    let mut acc = C::new(1.0, 0.0);
    for k in 0..p.n() {
        for m in 0..k {
            let d = p.v[k] - p.v[m];
            acc *= ctx.theta(d - p.hbar) / theta_denominator(ctx, d, || format!("v{}-v{}", k + 1, m + 1))?;
        }
    }
    Ok(acc)
}

/// `θ(-λ - mħ)` for `m = 0..n`.
fn lambda_denominators(ctx: &ThetaContext, p: &EllipticParams) -> Result<Vec<C>> {
    (0..p.n())
        .map(|m| theta_denominator(ctx, -p.lambda - p.hbar * m as f64, || shifted_label("λ", m as i64)))
        .collect()
}

/// Elliptic SOS partition function as a sum over `S_n`:
///
/// ```text
/// Π_{k>m} θ(v_k-v_m-ħ)/θ(v_k-v_m)
///   Σ_σ Π_{l<l', σ(l)>σ(l')} θ(v_σ(l)-v_σ(l')+ħ)/θ(v_σ(l)-v_σ(l')-ħ)
///       Π_{k<m} θ(u_k-v_σ(m)) Π_{k>m} θ(u_k-v_σ(m)+ħ)
///       Π_m θ(u_m-v_σ(m)-λ-(m-1)ħ) θ(ħ) / θ(-λ-(m-1)ħ)
/// ```
///
/// No `θ(u - v)` appears in a denominator, so `u_i = v_j` is a regular point.
pub fn z_sos_elliptic(ctx: &ThetaContext, p: &EllipticParams) -> Result<C> {
    z_sos_elliptic_with(ctx, p, Execution::Sequential)
}

pub fn z_sos_elliptic_with(ctx: &ThetaContext, p: &EllipticParams, exec: Execution) -> Result<C> {
    let n = p.n();
    check_cap("elliptic permutation sum", n, PERMUTATION_CAP)?;
    let (u, v, h) = (&p.u, &p.v, p.hbar);
    let prefactor = elliptic_prefactor(ctx, p)?;
    let exchange = elliptic_exchange(ctx, p)?;
    let lam_den = lambda_denominators(ctx, p)?;
    let theta_h = ctx.theta(h);
    // row[m][s]: everything attached to position m when σ(m) = s.
    let mut row = vec![vec![C::new(1.0, 0.0); n]; n];
    for (m, r) in row.iter_mut().enumerate() {
        for (s, x) in r.iter_mut().enumerate() {
            for (k, &uk) in u.iter().enumerate() {
                if k < m {
                    *x *= ctx.theta(uk - v[s]);
                } else if k > m {
                    *x *= ctx.theta(uk - v[s] + h);
                }
            }
            *x *= ctx.theta(u[m] - v[s] - p.lambda - h * m as f64) * theta_h / lam_den[m];
        }
    }
    let sum = permutation_sum(n, exec, |sigma| {
        let positional: C = sigma.iter().enumerate().map(|(m, &s)| row[m][s]).product();
        Ok(positional * inversion_factor(sigma, &exchange))
    })?;
    Ok(prefactor * sum)
}

/// `θ(λ+nħ)θ(ħ)/θ(λ+(n-1)ħ) · Π_{m<n} θ(v_n-v_m-ħ) θ(u_m-v_n)`, the factor
/// relating size `n` at `u_n = v_n - ħ` to size `n-1`.
pub fn recursion_factor(ctx: &ThetaContext, p: &EllipticParams) -> Result<C> {
    let n = p.n();
    if n < 2 {
        return Err(Error::InvalidParameter("the recursion factor needs n ≥ 2".into()));
    }
    let h = p.hbar;
    let den = theta_denominator(ctx, p.lambda + h * (n - 1) as f64, || shifted_label("λ", n as i64 - 1))?;
    let mut acc = ctx.theta(p.lambda + h * n as f64) * ctx.theta(h) / den;
    let vn = p.v[n - 1];
    for m in 0..n - 1 {
        acc *= ctx.theta(vn - p.v[m] - h) * ctx.theta(p.u[m] - vn);
    }
    Ok(acc)
}

/// Weight-function kernel at `v = vperm`:
///
/// ```text
/// Π_{k>m} θ(u_k-u_m)/θ(u_k-u_m+ħ) · Π_{k>m} θ(u_k-v_m+ħ)/θ(u_k-v_m)
///   · Π_m θ(u_m-v_m-λ-(m-1)ħ) / (θ(u_m-v_m) θ(-λ-(m-1)ħ))
/// ```
pub fn weight_kernel(ctx: &ThetaContext, p: &EllipticParams, vperm: &[C]) -> Result<C> {
    let n = p.n();
    if vperm.len() != n {
        return Err(Error::InvalidParameter(format!("kernel needs {n} v's, got {}", vperm.len())));
    }
    let (u, h) = (&p.u, p.hbar);
    let mut acc = C::new(1.0, 0.0);
    for k in 0..n {
        for m in 0..k {
            let du = u[k] - u[m];
            acc *= ctx.theta(du) / theta_denominator(ctx, du + h, || format!("u{}-u{}+ħ", k + 1, m + 1))?;
            let dv = u[k] - vperm[m];
            acc *= ctx.theta(dv + h) / theta_denominator(ctx, dv, || format!("u{}-v{}", k + 1, m + 1))?;
        }
    }
    let lam_den = lambda_denominators(ctx, p)?;
    for m in 0..n {
        let d = u[m] - vperm[m];
        let den = theta_denominator(ctx, d, || format!("u{}-v{}", m + 1, m + 1))? * lam_den[m];
        acc *= ctx.theta(d - p.lambda - h * m as f64) / den;
    }
    Ok(acc)
}

/// The partition function rebuilt by symmetrizing [`weight_kernel`]:
///
/// ```text
/// θ(ħ)^n Π_{ij} θ(u_i-v_j) Π_{k>m} θ(v_k-v_m-ħ)/θ(v_k-v_m) Π_{k>m} θ(u_k-u_m+ħ)/θ(u_k-u_m)
///   Σ_σ [exchange factor of σ] · weight_kernel(u; v∘σ)
/// ```
pub fn z_kernel_symmetrized(ctx: &ThetaContext, p: &EllipticParams) -> Result<C> {
    z_kernel_symmetrized_with(ctx, p, Execution::Sequential)
}

pub fn z_kernel_symmetrized_with(ctx: &ThetaContext, p: &EllipticParams, exec: Execution) -> Result<C> {
    let n = p.n();
    check_cap("kernel symmetrization", n, PERMUTATION_CAP)?;
    let (u, v, h) = (&p.u, &p.v, p.hbar);
    let mut prefactor = elliptic_prefactor(ctx, p)? * ctx.theta(h).powi(n as i32);
    for &ui in u {
        for &vj in v {
            prefactor *= ctx.theta(ui - vj);
        }
    }
    for k in 0..n {
        for m in 0..k {
            let du = u[k] - u[m];
            prefactor *= ctx.theta(du + h) / theta_denominator(ctx, du, || format!("u{}-u{}", k + 1, m + 1))?;
        }
    }
    let exchange = elliptic_exchange(ctx, p)?;
    let sum = permutation_sum(n, exec, |sigma| {
        let vperm: Vec<C> = sigma.iter().map(|&s| v[s]).collect();
        Ok(inversion_factor(sigma, &exchange) * weight_kernel(ctx, p, &vperm)?)
    })?;
    Ok(prefactor * sum)
}

fn require_distinct(xs: &[C], name: &str) -> Result<()> {
    for i in 0..xs.len() {
        for j in 0..i {
            difference(xs[i], xs[j], || format!("{name}{}-{name}{}", i + 1, j + 1))?;
        }
    }
    Ok(())
}

/// Six-vertex partition function by the Izergin determinant
///
/// ```text
/// (q-q⁻¹)^n Π w_m · Π_{ij}(z_i-w_j)(qz_i-q⁻¹w_j) / Π_{i>j}(z_i-z_j)(w_j-w_i)
///   · det[1/((z_i-w_j)(qz_i-q⁻¹w_j))]
/// ```
///
/// Row `i` of the matrix is multiplied by `Π_j (z_i-w_j)(qz_i-q⁻¹w_j)` before
/// the determinant is taken, which cancels the outer product exactly and
/// makes `z_i = w_j` and `z_i = q⁻²w_j` ordinary points.
pub fn z_izergin(p: &TrigParams) -> Result<C> {
    let n = p.n();
    let (z, w, q) = (&p.z, &p.w, p.q);
    require_distinct(z, "z")?;
    require_distinct(w, "w")?;
    let qi = q.inv();
    let f = |i: usize, k: usize| (z[i] - w[k]) * (q * z[i] - qi * w[k]);
    let m = DMatrix::from_fn(n, n, |i, j| (0..n).filter(|&k| k != j).map(|k| f(i, k)).product::<C>());
    let cond = condition_number(&m);
    if cond > CONDITION_WARNING {
        log::warn!("Izergin matrix is ill-conditioned: condition number {cond:e}");
    }
    let det = m.lu().determinant();
    let mut denom = C::new(1.0, 0.0);
    for i in 0..n {
        for j in 0..i {
            denom *= (z[i] - z[j]) * (w[j] - w[i]);
        }
    }
    let prefactor = (q - qi).powi(n as i32) * w.iter().product::<C>();
    Ok(prefactor * det / denom)
}

/// 2-norm condition number from the singular values.
pub fn condition_number(m: &DMatrix<C>) -> f64 {
    let s = m.clone().singular_values();
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `(q w_a - q⁻¹ w_b) / (q⁻¹ w_a - q w_b)` for `a > b`.
fn trig_exchange(w: &[C], q: C) -> Result<Vec<Vec<C>>> {
    let qi = q.inv();
    exchange_table(
        w.len(),
        |a, b| q * w[a] - qi * w[b],
        |a, b| difference(qi * w[a], q * w[b], || format!("q⁻¹w{}-qw{}", a + 1, b + 1)),
    )
}

/// `Π_{k>m} (q⁻¹w_k - q w_m) / (w_k - w_m)`.
fn trig_prefactor(w: &[C], q: C) -> Result<C> {
    let qi = q.inv();
    let mut acc = C::new(1.0, 0.0);
    for k in 0..w.len() {
        for m in 0..k {
            acc *= (qi * w[k] - q * w[m]) / difference(w[k], w[m], || format!("w{}-w{}", k + 1, m + 1))?;
        }
    }
    Ok(acc)
}

/// `Π_{i>k}(q z_i - q⁻¹ w_s) Π_{i<k}(z_i - w_s)` for position `k`, `σ(k) = s`.
fn trig_rows(p: &TrigParams) -> Vec<Vec<C>> {
    let (z, w, q) = (&p.z, &p.w, p.q);
    let qi = q.inv();
    let n = p.n();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|s| {
                    z.iter()
                        .enumerate()
                        .map(|(i, &zi)| match i.cmp(&k) {
                            std::cmp::Ordering::Greater => q * zi - qi * w[s],
                            std::cmp::Ordering::Less => zi - w[s],
                            std::cmp::Ordering::Equal => C::new(1.0, 0.0),
                        })
                        .product()
                })
                .collect()
        })
        .collect()
}

/// Six-vertex partition function by the projection sum over `S_n`:
///
/// ```text
/// (q-q⁻¹)^n Π w_m Π_{i>j}(q⁻¹w_i-qw_j)/(w_i-w_j)
///   Σ_σ Π_{i<j, σ(i)>σ(j)} (qw_σ(i)-q⁻¹w_σ(j))/(q⁻¹w_σ(i)-qw_σ(j))
///       Π_{i>k}(qz_i-q⁻¹w_σ(k)) Π_{i<k}(z_i-w_σ(k))
/// ```
pub fn z_6v_sum(p: &TrigParams) -> Result<C> {
    z_6v_sum_with(p, Execution::Sequential)
}

pub fn z_6v_sum_with(p: &TrigParams, exec: Execution) -> Result<C> {
    let n = p.n();
    check_cap("six-vertex permutation sum", n, PERMUTATION_CAP)?;
    let q = p.q;
    let prefactor = (q - q.inv()).powi(n as i32) * p.w.iter().product::<C>() * trig_prefactor(&p.w, q)?;
    let exchange = trig_exchange(&p.w, q)?;
    let rows = trig_rows(p);
    let sum = permutation_sum(n, exec, |sigma| {
        let positional: C = sigma.iter().enumerate().map(|(k, &s)| rows[k][s]).product();
        Ok(positional * inversion_factor(sigma, &exchange))
    })?;
    Ok(prefactor * sum)
}

/// Trigonometric SOS partition function: the six-vertex projection sum with
/// `(q-q⁻¹) w_σ(m)` replaced by `(z_m - w_σ(m) μq^{2(m-1)})(q-q⁻¹)/(1-μq^{2(m-1)})`.
pub fn z_trig_sos(p: &TrigParams) -> Result<C> {
    z_trig_sos_with(p, Execution::Sequential)
}

pub fn z_trig_sos_with(p: &TrigParams, exec: Execution) -> Result<C> {
    let n = p.n();
    check_cap("trigonometric SOS permutation sum", n, PERMUTATION_CAP)?;
    let mu = p
        .mu
        .ok_or_else(|| Error::InvalidParameter("the trigonometric SOS sum needs μ".into()))?;
    let (z, w, q) = (&p.z, &p.w, p.q);
    let dq = q - q.inv();
    let one = C::new(1.0, 0.0);
    let mut rows = trig_rows(p);
    for (m, row) in rows.iter_mut().enumerate() {
        let muq = mu * q.powi(2 * m as i32);
        let den = difference(one, muq, || format!("1-μq^{}", 2 * m))?;
        for (s, x) in row.iter_mut().enumerate() {
            *x *= (z[m] - w[s] * muq) * dq / den;
        }
    }
    let prefactor = trig_prefactor(w, q)?;
    let exchange = trig_exchange(w, q)?;
    let sum = permutation_sum(n, exec, |sigma| {
        let positional: C = sigma.iter().enumerate().map(|(k, &s)| rows[k][s]).product();
        Ok(positional * inversion_factor(sigma, &exchange))
    })?;
    Ok(prefactor * sum)
}

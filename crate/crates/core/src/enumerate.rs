//! Partition functions with domain-wall boundary conditions by explicit
//! configuration sums and by column-transfer contraction.
//!
//! Lattice conventions. Columns `i = 1..n` are numbered right to left, rows
//! `j = 1..n` bottom to top. Face `(i, j)`, `i, j ∈ 0..=n`, sits upper-left of
//! vertex `(i, j)`. Heights are integer offsets from the top-left face, so the
//! height `h` of a face corresponds to the dynamical value `λ + ħh`. The signs
//! around vertex `(i, j)` are read off the four surrounding faces:
//!
//! ```text
//! α = d[i-1][j]   - d[i][j]      (top)
//! β = d[i-1][j-1] - d[i-1][j]    (right)
//! γ = d[i-1][j-1] - d[i][j-1]    (bottom)
//! δ = d[i][j-1]   - d[i][j]      (left)
//! ```
//!
//! Domain-wall boundary conditions fix `d[0][j] = j`, `d[n][j] = n-j`,
//! `d[i][0] = i`, `d[i][n] = n-i`, i.e. `α = +` on top, `β = -` on the right,
//! `γ = -` at the bottom and `δ = +` on the left. The left sign of vertex
//! `(i, j)` is the right sign of vertex `(i+1, j)`.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{shifted_label, EllipticParams, TrigParams};
use crate::perm::{check_cap, Execution};
use crate::rmatrix::{gauge_rescale, sixv_rmatrix, sos_rmatrix, trig_nondyn_rmatrix, trig_sos_rmatrix, RMatrix4, Sign};
use crate::theta::ThetaContext;

type C = Complex64;

/// Default size cap for the exponential-cost routes.
pub const DEFAULT_ENUMERATION_CAP: usize = 6;

/// Assigns a weight matrix to every vertex of the `n × n` lattice.
pub trait VertexModel: Sync {
    fn size(&self) -> usize;

    /// Weight matrix of vertex `(i, j)` (1-based) whose upper-left face has
    /// height offset `height`.
    fn weight(&self, i: usize, j: usize, height: i64) -> Result<RMatrix4>;
}

/// Six-vertex weights `R(z_i, w_j)`; heights are ignored.
#[derive(Debug, Clone)]
pub struct SixVertex(pub TrigParams);

impl VertexModel for SixVertex {
    fn size(&self) -> usize {
        self.0.n()
    }

    fn weight(&self, i: usize, j: usize, _height: i64) -> Result<RMatrix4> {
        sixv_rmatrix(self.0.z[i - 1], self.0.w[j - 1], self.0.q)
    }
}

/// Non-dynamical trigonometric weights.
#[derive(Debug, Clone)]
pub struct NonDynamical(pub TrigParams);

impl VertexModel for NonDynamical {
    fn size(&self) -> usize {
        self.0.n()
    }

    fn weight(&self, i: usize, j: usize, _height: i64) -> Result<RMatrix4> {
        trig_nondyn_rmatrix(self.0.z[i - 1], self.0.w[j - 1], self.0.q)
    }
}

/// Trigonometric SOS weights; height `h` uses `μ q^{2h}`.
#[derive(Debug, Clone)]
pub struct TrigSos {
    params: TrigParams,
    mu: C,
}

impl TrigSos {
    pub fn new(params: TrigParams) -> Result<Self> {
        let mu = params
            .mu
            .ok_or_else(|| Error::InvalidParameter("the trigonometric SOS model needs μ".into()))?;
        Ok(Self { params, mu })
    }
}

impl VertexModel for TrigSos {
    fn size(&self) -> usize {
        self.params.n()
    }

    fn weight(&self, i: usize, j: usize, height: i64) -> Result<RMatrix4> {
        let q = self.params.q;
        let mu = self.mu * q.powi(2 * height as i32);
        if (mu - 1.0).norm() < 1e-12 {
            return Err(Error::DegenerateParameter(format!("μq^{} = 1", 2 * height)));
        }
        trig_sos_rmatrix(self.params.z[i - 1], self.params.w[j - 1], mu, q)
    }
}

/// Elliptic SOS weights `R(u_i - v_j; λ + ħh)`.
#[derive(Debug, Clone)]
pub struct EllipticSos {
    ctx: ThetaContext,
    params: EllipticParams,
}

impl EllipticSos {
    pub fn new(ctx: ThetaContext, params: EllipticParams) -> Self {
        Self { ctx, params }
    }
}

impl VertexModel for EllipticSos {
    fn size(&self) -> usize {
        self.params.n()
    }

    fn weight(&self, i: usize, j: usize, height: i64) -> Result<RMatrix4> {
        let p = &self.params;
        let lam = p.lambda + p.hbar * height as f64;
        self.ctx.require_off_lattice(lam, || shifted_label("λ", height))?;
        sos_rmatrix(&self.ctx, p.u[i - 1] - p.v[j - 1], lam, p.hbar)
    }
}

/// Applies `gauge_rescale(·, ρ)` to every weight of the wrapped model.
#[derive(Debug, Clone)]
pub struct Gauged<M> {
    pub inner: M,
    pub rho: C,
}

impl<M: VertexModel> VertexModel for Gauged<M> {
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn weight(&self, i: usize, j: usize, height: i64) -> Result<RMatrix4> {
        gauge_rescale(&self.inner.weight(i, j, height)?, self.rho)
    }
}

/// Weights filled on first use. Heights reachable by either route lie in
/// `[-n, 2n]`.
struct WeightTable<'a, M: ?Sized> {
    model: &'a M,
    n: usize,
    lo: i64,
    span: usize,
    entries: Vec<OnceLock<Result<RMatrix4>>>,
}

impl<'a, M: VertexModel + ?Sized> WeightTable<'a, M> {
    fn build(model: &'a M) -> Self {
        let n = model.size();
        let span = 3 * n + 1;
        Self {
            model,
            n,
            lo: -(n as i64),
            span,
            entries: (0..n * n * span).map(|_| OnceLock::new()).collect(),
        }
    }

    fn get(&self, i: usize, j: usize, height: i64) -> Result<&RMatrix4> {
        let k = (height - self.lo) as usize;
        debug_assert!(k < self.span);
        self.entries[((i - 1) * self.n + (j - 1)) * self.span + k]
            .get_or_init(|| self.model.weight(i, j, height))
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// Height assignment of one SOS configuration, offsets from the top-left face.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeightField {
    n: usize,
    d: Vec<i64>,
}

impl HeightField {
    /// The field with DWBC boundary values and zero interior.
    pub fn boundary(n: usize) -> Self {
        let mut f = HeightField { n, d: vec![0; (n + 1) * (n + 1)] };
        for k in 0..=n {
            f.set(0, k, k as i64);
            f.set(n, k, (n - k) as i64);
            f.set(k, 0, k as i64);
            f.set(k, n, (n - k) as i64);
        }
        f
    }

    pub fn from_rows(d: Vec<Vec<i64>>) -> Result<Self> {
        let n = d.len().saturating_sub(1);
        if n == 0 || d.iter().any(|row| row.len() != n + 1) {
            return Err(Error::InvalidParameter("height field must be (n+1)×(n+1), n ≥ 1".into()));
        }
        Ok(HeightField { n, d: d.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Height of face `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.d[i * (self.n + 1) + j]
    }

    fn set(&mut self, i: usize, j: usize, h: i64) {
        self.d[i * (self.n + 1) + j] = h;
    }

    /// `(α, β, γ, δ)` at vertex `(i, j)`, or `None` if a step is not ±1.
    pub fn signs(&self, i: usize, j: usize) -> Option<[Sign; 4]> {
        let step = |a: i64, b: i64| Sign::from_value((a - b) as i32);
        Some([
            step(self.get(i - 1, j), self.get(i, j))?,
            step(self.get(i - 1, j - 1), self.get(i - 1, j))?,
            step(self.get(i - 1, j - 1), self.get(i, j - 1))?,
            step(self.get(i, j - 1), self.get(i, j))?,
        ])
    }

    /// All neighbouring steps are ±1 and the boundary is domain-wall.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        let boundary = (0..=n).all(|k| {
            self.get(0, k) == k as i64
                && self.get(n, k) == (n - k) as i64
                && self.get(k, 0) == k as i64
                && self.get(k, n) == (n - k) as i64
        });
        boundary && (1..=n).all(|i| (1..=n).all(|j| self.signs(i, j).is_some()))
    }

    pub fn to_sign_config(&self) -> Option<SignConfig> {
        let mut signs = Vec::with_capacity(self.n * self.n);
        for i in 1..=self.n {
            for j in 1..=self.n {
                signs.push(self.signs(i, j)?);
            }
        }
        Some(SignConfig { n: self.n, signs })
    }
}

/// Vertex signs `(α, β, γ, δ)` of one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignConfig {
    n: usize,
    signs: Vec<[Sign; 4]>,
}

impl SignConfig {
    pub fn new(n: usize, signs: Vec<[Sign; 4]>) -> Result<Self> {
        if n == 0 || signs.len() != n * n {
            return Err(Error::InvalidParameter(format!("expected {} vertices", n * n)));
        }
        Ok(Self { n, signs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> [Sign; 4] {
        self.signs[(i - 1) * self.n + (j - 1)]
    }

    /// Ice rule, edge sharing and domain-wall boundary.
    pub fn is_valid(&self) -> bool {
        use Sign::*;
        let n = self.n;
        (1..=n).all(|i| {
            (1..=n).all(|j| {
                let [a, b, g, d] = self.get(i, j);
                let ice = a.value() + b.value() == g.value() + d.value();
                let vertical = j == n || self.get(i, j + 1)[2] == a;
                let horizontal = i == n || self.get(i + 1, j)[1] == d;
                let dwbc = (j != n || a == Plus)
                    && (i != 1 || b == Minus)
                    && (j != 1 || g == Minus)
                    && (i != n || d == Plus);
                ice && vertical && horizontal && dwbc
            })
        })
    }
}

fn fill(cell: usize, field: &mut HeightField, visit: &mut dyn FnMut(&HeightField)) {
    let n = field.n;
    if cell == n * n {
        visit(field);
        return;
    }
    let (i, j) = (cell / n + 1, cell % n + 1);
    let above_right = field.get(i - 1, j);
    let below = field.get(i, j - 1);
    let fixed = i == n || j == n;
    let candidates = if fixed {
        [Some(field.get(i, j)), None]
    } else {
        [Some(above_right - 1), Some(above_right + 1)]
    };
    for h in candidates.into_iter().flatten() {
        // The right-hand boundary d[n][j] = n-j must stay reachable.
        let reachable = (h - (n - j) as i64).abs() <= (n - i) as i64;
        if (h - above_right).abs() != 1 || (h - below).abs() != 1 || !reachable {
            continue;
        }
        if !fixed {
            field.set(i, j, h);
        }
        fill(cell + 1, field, visit);
    }
}

/// Visits every DWBC height field of size `n` in a fixed depth-first order.
pub fn for_each_height_field(n: usize, mut visit: impl FnMut(&HeightField)) {
    if n == 0 {
        return;
    }
    fill(0, &mut HeightField::boundary(n), &mut visit);
}

pub fn count_configurations(n: usize) -> usize {
    let mut count = 0;
    for_each_height_field(n, |_| count += 1);
    count
}

/// Alternating-sign-matrix numbers `A(n) = Π_{k<n} (3k+1)! / (n+k)!`.
pub fn asm_count(n: usize) -> u128 {
    let mut a: u128 = 1;
    for k in 0..n as u128 {
        // A(k+1) / A(k) = (3k+1)! k! / ((2k)! (2k+1)!)
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for t in 1..=(3 * k + 1) {
            num *= t;
        }
        for t in 1..=k {
            num *= t;
        }
        for t in 1..=(2 * k) {
            den *= t;
        }
        for t in 1..=(2 * k + 1) {
            den *= t;
        }
        a = a * num / den;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationOptions {
    pub cap: usize,
    pub execution: Execution,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            execution: Execution::Sequential,
        }
    }
}

/// Result of a configuration sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enumeration {
    pub value: C,
    /// Number of DWBC configurations visited.
    pub configurations: usize,
    /// Configurations whose weight product is nonzero.
    pub contributing: usize,
}

fn field_weight<M: VertexModel + ?Sized>(table: &WeightTable<M>, field: &HeightField) -> Result<C> {
    let n = field.n;
    let mut w = C::new(1.0, 0.0);
    for i in 1..=n {
        for j in 1..=n {
            let [a, b, g, d] = field.signs(i, j).expect("enumerated fields are valid");
            w *= table.get(i, j, field.get(i, j))?.entry(a, b, g, d);
        }
    }
    Ok(w)
}

fn accumulate<M: VertexModel + ?Sized>(table: &WeightTable<M>, fields: &[HeightField]) -> Result<Enumeration> {
    let mut out = Enumeration {
        value: C::new(0.0, 0.0),
        configurations: 0,
        contributing: 0,
    };
    for f in fields {
        let w = field_weight(table, f)?;
        out.value += w;
        out.configurations += 1;
        out.contributing += usize::from(w != C::new(0.0, 0.0));
    }
    Ok(out)
}

/// Sum over all DWBC configurations of the product of vertex weights.
pub fn enumerate_with<M: VertexModel + ?Sized>(model: &M, opts: EnumerationOptions) -> Result<Enumeration> {
    let n = model.size();
    check_cap("enumeration", n, opts.cap)?;
    let table = WeightTable::build(model);
    match opts.execution {
        Execution::Sequential => {
            let mut out = Ok(Enumeration {
                value: C::new(0.0, 0.0),
                configurations: 0,
                contributing: 0,
            });
            for_each_height_field(n, |f| {
                if let Ok(acc) = out.as_mut() {
                    match field_weight(&table, f) {
                        Ok(w) => {
                            acc.value += w;
                            acc.configurations += 1;
                            acc.contributing += usize::from(w != C::new(0.0, 0.0));
                        }
                        Err(e) => out = Err(e),
                    }
                }
            });
            out
        }
        Execution::Parallel => {
            let mut fields = Vec::new();
            for_each_height_field(n, |f| fields.push(f.clone()));
            let block = fields.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
            let partial: Vec<Enumeration> = fields
                .par_chunks(block)
                .map(|chunk| accumulate(&table, chunk))
                .collect::<Result<_>>()?;
            Ok(partial.into_iter().fold(
                Enumeration {
                    value: C::new(0.0, 0.0),
                    configurations: 0,
                    contributing: 0,
                },
                |acc, p| Enumeration {
                    value: acc.value + p.value,
                    configurations: acc.configurations + p.configurations,
                    contributing: acc.contributing + p.contributing,
                },
            ))
        }
    }
}

/// Six-vertex partition function by configuration sum.
pub fn enumerate_6v(p: &TrigParams) -> Result<C> {
    enumerate_with(&SixVertex(p.clone()), EnumerationOptions::default()).map(|e| e.value)
}

/// Elliptic SOS partition function by configuration sum.
pub fn enumerate_sos(ctx: &ThetaContext, p: &EllipticParams) -> Result<C> {
    enumerate_with(&EllipticSos::new(*ctx, p.clone()), EnumerationOptions::default()).map(|e| e.value)
}

struct ColumnWalk<'a, M: ?Sized> {
    table: &'a WeightTable<'a, M>,
    column: usize,
    beta_mask: usize,
    next: &'a mut [C],
}

impl<M: VertexModel + ?Sized> ColumnWalk<'_, M> {
    /// Runs the auxiliary edge down the column from row `j` with incoming top
    /// sign `alpha` and upper-left height `height`.
    fn walk(&mut self, j: usize, alpha: Sign, height: i64, out_mask: usize, acc: C) -> Result<()> {
        if j == 0 {
            if alpha == Sign::Minus {
                self.next[out_mask] += acc;
            }
            return Ok(());
        }
        let beta = if self.beta_mask >> (j - 1) & 1 == 1 { Sign::Minus } else { Sign::Plus };
        let r = *self.table.get(self.column, j, height)?;
        let options: &[(Sign, Sign)] = if alpha == beta { &[(alpha, alpha)] } else { &[(alpha, beta), (beta, alpha)] };
        for &(gamma, delta) in options {
            let w = r.entry(alpha, beta, gamma, delta);
            if w == C::new(0.0, 0.0) {
                continue;
            }
            let mask = out_mask | (delta.bit() << (j - 1));
            self.walk(j - 1, gamma, height + delta.value() as i64, mask, acc * w)?;
        }
        Ok(())
    }
}

/// Partition function by contracting column transfer matrices.
///
/// The state between columns is the vector of horizontal-edge signs, bit
/// `j-1` set for `-` on row `j`. Column `i` maps the signs on its right edge
/// to those on its left edge, threading an auxiliary vertical edge from `+`
/// at the top to `-` at the bottom; its dynamical argument starts at
/// `λ + ħ(n-i)` and follows the left-hand heights down the column. The
/// result is the all-`+` component after starting from all `-`.
pub fn column_transfer_with<M: VertexModel + ?Sized>(model: &M, cap: usize) -> Result<C> {
    let n = model.size();
    check_cap("column transfer", n, cap)?;
    let table = WeightTable::build(model);
    let dim = 1usize << n;
    let mut state = vec![C::new(0.0, 0.0); dim];
    state[dim - 1] = C::new(1.0, 0.0);
    for column in 1..=n {
        let mut next = vec![C::new(0.0, 0.0); dim];
        for (beta_mask, &coef) in state.iter().enumerate() {
            if coef == C::new(0.0, 0.0) {
                continue;
            }
            ColumnWalk {
                table: &table,
                column,
                beta_mask,
                next: &mut next,
            }
            .walk(n, Sign::Plus, (n - column) as i64, 0, coef)?;
        }
        state = next;
    }
    Ok(state[0])
}

pub fn column_transfer_z(ctx: &ThetaContext, p: &EllipticParams) -> Result<C> {
    column_transfer_with(&EllipticSos::new(*ctx, p.clone()), DEFAULT_ENUMERATION_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{draw_elliptic, seeded_rng};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn configuration_counts_are_asm_numbers() {
        for n in 1..=5 {
            assert_eq!(count_configurations(n) as u128, asm_count(n), "n = {n}");
        }
        assert_eq!((1..=6).map(asm_count).collect::<Vec<_>>(), vec![1, 2, 7, 42, 429, 7436]);
    }

    #[test]
    fn every_field_is_valid() {
        for n in 1..=4 {
            for_each_height_field(n, |f| {
                assert!(f.is_valid());
                let s = f.to_sign_config().unwrap();
                assert!(s.is_valid());
            });
        }
    }

    #[test]
    fn n1_is_the_cbar_vertex() {
        let mut fields = Vec::new();
        for_each_height_field(1, |f| fields.push(f.clone()));
        assert_eq!(fields.len(), 1);
        use Sign::*;
        assert_eq!(fields[0].signs(1, 1), Some([Plus, Minus, Minus, Plus]));
    }

    #[test]
    fn corrupted_fields_are_rejected() {
        let mut f = HeightField::boundary(2);
        f.set(1, 1, 2);
        assert!(f.is_valid());
        f.set(1, 1, 1);
        assert!(!f.is_valid());
        let mut s = HeightField::boundary(2);
        s.set(1, 1, 0);
        let mut cfg = s.to_sign_config().unwrap();
        cfg.signs[0][0] = Sign::Minus;
        assert!(!cfg.is_valid());
    }

    #[test]
    fn sixv_n1() {
        let (q, w) = (c(1.3, 0.2), c(0.4, 0.7));
        let p = TrigParams::new(vec![c(2.0, 0.1)], vec![w], q, None).unwrap();
        assert!(rel(enumerate_6v(&p).unwrap(), (q - q.inv()) * w) < 1e-14);
    }

    #[test]
    fn sixv_n2_two_contributors() {
        let p = TrigParams::new(vec![c(2.0, 0.0), c(3.0, 0.0)], vec![c(5.0, 0.0), c(7.0, 0.0)], c(1.3, 0.0), None).unwrap();
        let e = enumerate_with(&SixVertex(p), EnumerationOptions::default()).unwrap();
        assert_eq!(e.contributing, 2);
    }

    #[test]
    fn transfer_matches_enumeration() {
        let ctx = ThetaContext::new(c(0.0, 1.0)).unwrap();
        let mut rng = seeded_rng(11);
        for n in 1..=4 {
            let p = draw_elliptic(&mut rng, n, c(0.31, 0.02), c(0.17, -0.01)).unwrap();
            let a = enumerate_sos(&ctx, &p).unwrap();
            let b = column_transfer_z(&ctx, &p).unwrap();
            assert!(rel(b, a) < 1e-10, "n = {n}: {a} vs {b}");
        }
    }

    #[test]
    fn parallel_enumeration_matches() {
        let ctx = ThetaContext::new(c(0.3, 0.8)).unwrap();
        let p = draw_elliptic(&mut seeded_rng(5), 5, c(0.31, 0.02), c(0.17, -0.01)).unwrap();
        let model = EllipticSos::new(ctx, p);
        let seq = enumerate_with(&model, EnumerationOptions::default()).unwrap();
        let par = enumerate_with(
            &model,
            EnumerationOptions {
                execution: Execution::Parallel,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq.configurations, par.configurations);
        assert!(rel(par.value, seq.value) < 1e-12);
    }

    #[test]
    fn size_cap() {
        let p = TrigParams::new(vec![c(0.5, 0.0); 7], vec![c(0.2, 0.0); 7], c(1.3, 0.0), None).unwrap();
        assert!(matches!(enumerate_6v(&p), Err(Error::SizeCap { n: 7, cap: 6, .. })));
    }

    #[test]
    fn lattice_hit_is_reported() {
        let ctx = ThetaContext::new(c(0.0, 1.0)).unwrap();
        // λ + 2ħ = 1 is met by the face heights of a 3×3 lattice.
        let p = EllipticParams::new(vec![c(0.4, 0.0); 3], vec![c(0.1, 0.01); 3], c(0.64, 0.0), c(0.18, 0.0)).unwrap();
        let err = enumerate_sos(&ctx, &p).unwrap_err();
        assert!(err.to_string().contains("λ+2ħ"), "{err}");
    }
}

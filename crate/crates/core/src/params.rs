//! Argument bundles for the elliptic and trigonometric formulas, and the
//! seeded sampler that produces reproducible random instances of them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::theta::ThetaContext;

/// Spectral parameters `u` (columns) and `v` (rows), dynamical parameter `λ`
/// and anisotropy `ħ`.
///
/// `u[0]` belongs to column 1, the rightmost column; `v[0]` to row 1, the
/// bottom row. `λ = ħ·d`, where `d` is the height of the top-left face.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticParams {
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub lambda: Complex64,
    pub hbar: Complex64,
}

impl EllipticParams {
    pub fn new(u: Vec<Complex64>, v: Vec<Complex64>, lambda: Complex64, hbar: Complex64) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidParameter("lattice size n must be at least 1".into()));
        }
        if u.len() != v.len() {
            return Err(Error::InvalidParameter(format!(
                "u has {} entries but v has {}",
                u.len(),
                v.len()
            )));
        }
        Ok(Self { u, v, lambda, hbar })
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    /// Checks the lattice guards: `ħ ∉ Γ` and `λ + kħ ∉ Γ` for `|k| ≤ 2n`.
    pub fn validate(&self, ctx: &ThetaContext) -> Result<()> {
        ctx.require_off_lattice(self.hbar, || "ħ".into())?;
        let n = self.n() as i64;
        for k in -2 * n..=2 * n {
            ctx.require_off_lattice(self.lambda + self.hbar * k as f64, || shifted_label("λ", k))?;
        }
        Ok(())
    }

    /// The `(n-1)`-sized instance obtained by dropping `u_n` and `v_n`.
    pub fn without_last(&self) -> Result<Self> {
        let n = self.n();
        Self::new(self.u[..n - 1].to_vec(), self.v[..n - 1].to_vec(), self.lambda, self.hbar)
    }

    /// Multiplicative variables `z = e^{2πiu}`, `w = e^{2πiv}`, `q = e^{πiħ}`,
    /// `μ = e^{2πiλ}`.
    pub fn to_trig(&self) -> Result<TrigParams> {
        let expo = |x: Complex64, scale: f64| (Complex64::i() * scale * PI * x).exp();
        TrigParams::new(
            self.u.iter().map(|&x| expo(x, 2.0)).collect(),
            self.v.iter().map(|&x| expo(x, 2.0)).collect(),
            expo(self.hbar, 1.0),
            Some(expo(self.lambda, 2.0)),
        )
    }
}

/// Label such as `λ+2ħ` or `λ-ħ` for guard diagnostics.
pub(crate) fn shifted_label(base: &str, k: i64) -> String {
    match k {
        0 => base.to_string(),
        1 => format!("{base}+ħ"),
        -1 => format!("{base}-ħ"),
        k if k > 0 => format!("{base}+{k}ħ"),
        k => format!("{base}-{}ħ", -k),
    }
}

/// Multiplicative spectral variables, `q = e^{πiħ}` and the optional
/// dynamical variable `μ = e^{2πiλ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigParams {
    pub z: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub q: Complex64,
    pub mu: Option<Complex64>,
}

impl TrigParams {
    pub fn new(z: Vec<Complex64>, w: Vec<Complex64>, q: Complex64, mu: Option<Complex64>) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidParameter("lattice size n must be at least 1".into()));
        }
        if z.len() != w.len() {
            return Err(Error::InvalidParameter(format!(
                "z has {} entries but w has {}",
                z.len(),
                w.len()
            )));
        }
        if q.norm() < 1e-12 {
            return Err(Error::InvalidParameter("q must be nonzero".into()));
        }
        if (q * q - 1.0).norm() < 1e-12 {
            return Err(Error::InvalidParameter(format!("q² = 1 (q = {q}) kills every c-weight")));
        }
        Ok(Self { z, w, q, mu })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn with_mu(&self, mu: Option<Complex64>) -> Self {
        Self { mu, ..self.clone() }
    }
}

/// Named, reproducible generator behind every `--seed`: ChaCha8 seeded via
/// `seed_from_u64`.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One spectral parameter, uniform on `[0.1, 0.9] + i[-0.05, 0.05]`.
pub fn draw_spectral<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re = rng.random_range(0.1..=0.9);
    let im = rng.random_range(-0.05..=0.05);
    Complex64::new(re, im)
}

pub fn draw_spectral_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| draw_spectral(rng)).collect()
}

/// Draws `u` then `v` from `rng` with the given `λ`, `ħ`.
pub fn draw_elliptic<R: Rng + ?Sized>(rng: &mut R, n: usize, lambda: Complex64, hbar: Complex64) -> Result<EllipticParams> {
    let u = draw_spectral_vec(rng, n);
    let v = draw_spectral_vec(rng, n);
    EllipticParams::new(u, v, lambda, hbar)
}

/// Draws additive `u`, `v` as in [`draw_elliptic`] and maps them to
/// `z = e^{2πiu}`, `w = e^{2πiv}`.
pub fn draw_trig<R: Rng + ?Sized>(rng: &mut R, n: usize, q: Complex64, mu: Option<Complex64>) -> Result<TrigParams> {
    let expo = |x: Complex64| (Complex64::i() * 2.0 * PI * x).exp();
    let z = draw_spectral_vec(rng, n).into_iter().map(expo).collect();
    let w = draw_spectral_vec(rng, n).into_iter().map(expo).collect();
    TrigParams::new(z, w, q, mu)
}

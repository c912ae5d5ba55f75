//! Test oracles written independently of the library internals.
#![allow(dead_code)]

use std::f64::consts::PI;

use dwbc::RMatrix4;
use num_complex::Complex64 as C;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Alternating series for the first Jacobi theta function, rescaled so the
/// derivative at the origin is one:
///
/// `Σ (-1)^k e^{iπτ(k²+k)} sin((2k+1)πu) / (π Σ (-1)^k e^{iπτ(k²+k)} (2k+1))`.
pub fn series_theta(tau: C, u: C) -> C {
    let mut num = C::new(0.0, 0.0);
    let mut den = C::new(0.0, 0.0);
    for k in 0..60 {
        let kf = k as f64;
        let w = (C::i() * PI * tau * (kf * kf + kf)).exp() * if k % 2 == 0 { 1.0 } else { -1.0 };
        num += w * ((2.0 * kf + 1.0) * PI * u).sin();
        den += w * (2.0 * kf + 1.0);
    }
    num / (PI * den)
}

/// Visits every height field with domain-wall boundary by brute force over
/// the interior. Each face only takes values of its own parity.
pub fn each_height_field(n: usize, mut visit: impl FnMut(&Vec<Vec<i64>>)) {
    let mut d = vec![vec![0_i64; n + 1]; n + 1];
    for k in 0..=n {
        d[0][k] = k as i64;
        d[n][k] = (n - k) as i64;
        d[k][0] = k as i64;
        d[k][n] = (n - k) as i64;
    }
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|i| (1..n).map(move |j| (i, j))).collect();
    let choices: Vec<Vec<i64>> = cells
        .iter()
        .map(|&(i, j)| (-1..=n as i64 + 1).filter(|h| (h - (i + j) as i64).rem_euclid(2) == 0).collect())
        .collect();
    let mut idx = vec![0usize; cells.len()];
    loop {
        for (k, &(i, j)) in cells.iter().enumerate() {
            d[i][j] = choices[k][idx[k]];
        }
        let steps_ok = (0..n).all(|i| (0..=n).all(|j| (d[i][j] - d[i + 1][j]).abs() == 1 && (d[j][i] - d[j][i + 1]).abs() == 1));
        if steps_ok {
            visit(&d);
        }
        let mut k = 0;
        loop {
            if k == cells.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Vertex type at (i, j) read off the four surrounding faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    A,
    B,
    Bbar,
    C,
    Cbar,
}

pub fn vertex(d: &[Vec<i64>], i: usize, j: usize) -> Vertex {
    let alpha = d[i - 1][j] - d[i][j];
    let beta = d[i - 1][j - 1] - d[i - 1][j];
    let gamma = d[i - 1][j - 1] - d[i][j - 1];
    let delta = d[i][j - 1] - d[i][j];
    match (alpha, beta, gamma, delta) {
        (1, 1, 1, 1) | (-1, -1, -1, -1) => Vertex::A,
        (1, -1, 1, -1) => Vertex::B,
        (1, -1, -1, 1) => Vertex::Cbar,
        (-1, 1, 1, -1) => Vertex::C,
        (-1, 1, -1, 1) => Vertex::Bbar,
        other => panic!("ice rule broken: {other:?}"),
    }
}

pub fn count_fields(n: usize) -> usize {
    let mut count = 0;
    each_height_field(n, |_| count += 1);
    count
}

/// Elliptic SOS partition function from the height sum, with theta from the series.
pub fn brute_sos(tau: C, u: &[C], v: &[C], lambda: C, hbar: C) -> C {
    let n = u.len();
    let th = |x: C| series_theta(tau, x);
    let mut z = C::new(0.0, 0.0);
    each_height_field(n, |d| {
        let mut w = C::new(1.0, 0.0);
        for i in 1..=n {
            for j in 1..=n {
                let x = u[i - 1] - v[j - 1];
                let l = lambda + hbar * d[i][j] as f64;
                w *= match vertex(d, i, j) {
                    Vertex::A => th(x + hbar),
                    Vertex::B => th(x) * th(l + hbar) / th(l),
                    Vertex::Bbar => th(x) * th(l - hbar) / th(l),
                    Vertex::C => th(x + l) * th(hbar) / th(l),
                    Vertex::Cbar => th(x - l) * th(hbar) / th(-l),
                };
            }
        }
        z += w;
    });
    z
}

/// Six-vertex partition function from the same configuration sum.
pub fn brute_6v(z: &[C], w: &[C], q: C) -> C {
    let n = z.len();
    let dq = q - q.inv();
    let mut total = C::new(0.0, 0.0);
    each_height_field(n, |d| {
        let mut p = C::new(1.0, 0.0);
        for i in 1..=n {
            for j in 1..=n {
                let (zi, wj) = (z[i - 1], w[j - 1]);
                p *= match vertex(d, i, j) {
                    Vertex::A => q * zi - wj / q,
                    Vertex::B | Vertex::Bbar => zi - wj,
                    Vertex::C => dq * zi,
                    Vertex::Cbar => dq * wj,
                };
            }
        }
        total += p;
    });
    total
}

/// Counts n×n alternating-sign matrices row by row. The state is the 0/1
/// vector of column sums so far; a row is admissible when its nonzero
/// entries alternate and start and end with +1.
pub fn asm_brute(n: usize) -> u64 {
    fn rows(n: usize, k: usize, cols: u32, memo: &mut std::collections::HashMap<(usize, u32), u64>) -> u64 {
        if k == n {
            return 1;
        }
        if let Some(&v) = memo.get(&(k, cols)) {
            return v;
        }
        let mut total = 0;
        for next in 0..(1u32 << n) {
            if next.count_ones() != k as u32 + 1 {
                continue;
            }
            let mut last = 0;
            let mut ok = true;
            for b in 0..n {
                let e = ((next >> b) & 1) as i32 - ((cols >> b) & 1) as i32;
                if e != 0 {
                    if e == last || (last == 0 && e == -1) {
                        ok = false;
                        break;
                    }
                    last = e;
                }
            }
            if ok && last == 1 {
                total += rows(n, k + 1, next, memo);
            }
        }
        memo.insert((k, cols), total);
        total
    }
    rows(n, 0, 0, &mut Default::default())
}

/// Dynamical Yang–Baxter residual by explicit index contraction on the
/// eight basis states of three sign carriers. `r(a, b, s)` is the matrix on
/// carriers (a, b) with dynamical shift `s` from the third carrier.
pub fn dybe_by_contraction(r: impl Fn(usize, usize, i32) -> RMatrix4) -> f64 {
    // sign 0 = +, 1 = -; pair index 2·first + second
    let val = |s: usize| if s == 0 { 1 } else { -1 };
    let apply = |a: usize, b: usize, shifted: bool, state: &[C; 8]| -> [C; 8] {
        let spect = 3 - a - b;
        let mut out = [C::new(0.0, 0.0); 8];
        for (idx, &amp) in state.iter().enumerate() {
            if amp == C::new(0.0, 0.0) {
                continue;
            }
            let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
            let m = r(a, b, if shifted { val(bits[spect]) } else { 0 });
            let col = 2 * bits[a] + bits[b];
            for row in 0..4 {
                let mut nb = bits;
                nb[a] = row >> 1;
                nb[b] = row & 1;
                out[nb[0] * 4 + nb[1] * 2 + nb[2]] += m.as_array()[row][col] * amp;
            }
        }
        out
    };
    let mut worst: f64 = 0.0;
    for basis in 0..8 {
        let mut e = [C::new(0.0, 0.0); 8];
        e[basis] = C::new(1.0, 0.0);
        let lhs = apply(0, 1, false, &apply(0, 2, true, &apply(1, 2, false, &e)));
        let rhs = apply(1, 2, true, &apply(0, 2, false, &apply(0, 1, true, &e)));
        for k in 0..8 {
            worst = worst.max((lhs[k] - rhs[k]).norm());
        }
    }
    worst
}

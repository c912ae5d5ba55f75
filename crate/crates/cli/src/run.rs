use std::time::Instant;

use dwbc::closedform::{z_6v_sum_with, z_izergin, z_sos_elliptic_with, z_trig_sos_with};
use dwbc::enumerate::{
    asm_count, column_transfer_with, enumerate_with, EllipticSos, EnumerationOptions, SixVertex, TrigSos, VertexModel,
    DEFAULT_ENUMERATION_CAP,
};
use dwbc::params::{draw_elliptic, draw_trig, seeded_rng};
use dwbc::perm::{factorial, PERMUTATION_CAP};
use dwbc::verify::{rel_diff, run_suite, Suite, SuiteConfig};
use dwbc::{EllipticParams, Error, Execution, Result, ThetaContext, TrigParams};
use num_complex::Complex64;
use serde_json::json;

use crate::report::{Comparison, Report, RouteResult};
use crate::{Common, Model, Route};

const BENCH_DEFAULT_N: usize = 6;
const DEFAULT_N: usize = 3;

fn cx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn execution(c: &Common) -> Execution {
    if c.parallel {
        Execution::Parallel
    } else {
        Execution::Sequential
    }
}

fn config_json(c: &Common, n: usize) -> serde_json::Value {
    let list = |x: &Option<Vec<Complex64>>| x.as_ref().map(|v| v.iter().copied().map(cx).collect::<Vec<_>>());
    json!({
        "model": c.model,
        "route": c.route,
        "n": n,
        "seed": c.seed,
        "u": list(&c.u),
        "v": list(&c.v),
        "z": list(&c.z),
        "w": list(&c.w),
        "tau": cx(c.tau),
        "lambda": cx(c.lambda),
        "hbar": cx(c.hbar),
        "q": cx(c.q),
        "mu": c.mu.map(cx),
        "tolerance": c.tolerance,
        "parallel": c.parallel,
    })
}

/// Size implied by `--n` and any explicit lists; all must agree.
fn resolve_n(c: &Common, default: usize) -> Result<usize> {
    let lists = [("u", &c.u), ("v", &c.v), ("z", &c.z), ("w", &c.w)];
    let mut n = c.n;
    for (name, list) in lists {
        if let Some(xs) = list {
            match n {
                Some(m) if m != xs.len() => {
                    return Err(Error::InvalidParameter(format!("--{name} has {} entries but n = {m}", xs.len())))
                }
                _ => n = Some(xs.len()),
            }
        }
    }
    let n = n.unwrap_or(default);
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(n)
}

fn elliptic_params(c: &Common, n: usize) -> Result<EllipticParams> {
    match (&c.u, &c.v) {
        (Some(u), Some(v)) => EllipticParams::new(u.clone(), v.clone(), c.lambda, c.hbar),
        (None, None) => draw_elliptic(&mut seeded_rng(c.seed), n, c.lambda, c.hbar),
        _ => Err(Error::InvalidParameter("give both --u and --v, or neither".into())),
    }
}

fn trig_params(c: &Common, n: usize, mu: Option<Complex64>) -> Result<TrigParams> {
    match (&c.z, &c.w) {
        (Some(z), Some(w)) => TrigParams::new(z.clone(), w.clone(), c.q, mu),
        (None, None) => draw_trig(&mut seeded_rng(c.seed), n, c.q, mu),
        _ => Err(Error::InvalidParameter("give both --z and --w, or neither".into())),
    }
}

fn trig_mu(c: &Common) -> Complex64 {
    c.mu.unwrap_or_else(|| (Complex64::i() * 2.0 * std::f64::consts::PI * c.lambda).exp())
}

/// One partition-function instance with its available routes.
enum Instance {
    Elliptic(ThetaContext, EllipticParams),
    Trig(TrigParams),
    SixV(TrigParams),
}

impl Instance {
    fn build(c: &Common, n: usize) -> Result<Self> {
        Ok(match c.model {
            Model::SosElliptic => {
                let ctx = ThetaContext::new(c.tau)?;
                let p = elliptic_params(c, n)?;
                p.validate(&ctx)?;
                Instance::Elliptic(ctx, p)
            }
            Model::SosTrig => Instance::Trig(trig_params(c, n, Some(trig_mu(c)))?),
            Model::SixVertex => Instance::SixV(trig_params(c, n, None)?),
        })
    }

    fn routes(&self) -> &'static [Route] {
        match self {
            Instance::SixV(_) => &[Route::Enumerate, Route::Transfer, Route::Sum, Route::Determinant],
            _ => &[Route::Enumerate, Route::Transfer, Route::Sum],
        }
    }

    fn cap(route: Route) -> usize {
        match route {
            Route::Enumerate | Route::Transfer => DEFAULT_ENUMERATION_CAP,
            Route::Sum => PERMUTATION_CAP,
            Route::Determinant | Route::All => usize::MAX,
        }
    }

    fn with_model<T>(&self, f: impl FnOnce(&dyn VertexModel) -> Result<T>) -> Result<T> {
        match self {
            Instance::Elliptic(ctx, p) => f(&EllipticSos::new(*ctx, p.clone())),
            Instance::Trig(p) => f(&TrigSos::new(p.clone())?),
            Instance::SixV(p) => f(&SixVertex(p.clone())),
        }
    }

    /// Value and term count of one route.
    fn evaluate(&self, route: Route, exec: Execution) -> Result<(Complex64, u128)> {
        let n = match self {
            Instance::Elliptic(_, p) => p.n(),
            Instance::Trig(p) | Instance::SixV(p) => p.n(),
        };
        let opts = EnumerationOptions {
            execution: exec,
            ..Default::default()
        };
        match route {
            Route::Enumerate => self.with_model(|m| enumerate_with(m, opts)).map(|e| (e.value, e.configurations as u128)),
            Route::Transfer => self
                .with_model(|m| column_transfer_with(m, DEFAULT_ENUMERATION_CAP))
                .map(|v| (v, (n as u128) << (2 * n))),
            Route::Sum => {
                let v = match self {
                    Instance::Elliptic(ctx, p) => z_sos_elliptic_with(ctx, p, exec)?,
                    Instance::Trig(p) => z_trig_sos_with(p, exec)?,
                    Instance::SixV(p) => z_6v_sum_with(p, exec)?,
                };
                Ok((v, factorial(n)))
            }
            Route::Determinant => match self {
                Instance::SixV(p) => z_izergin(p).map(|v| (v, (n as u128).pow(3))),
                _ => Err(Error::InvalidParameter("route determinant is only available for --model six-vertex".into())),
            },
            Route::All => unreachable!("expanded by the caller"),
        }
    }
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Enumerate => "enumerate",
        Route::Transfer => "transfer",
        Route::Sum => "sum",
        Route::Determinant => "determinant",
        Route::All => "all",
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64() * 1e3))
}

pub fn compute(c: &Common) -> Result<Report> {
    let n = resolve_n(c, DEFAULT_N)?;
    let inst = Instance::build(c, n)?;
    let mut report = Report::new("compute", config_json(c, n));
    let routes: Vec<Route> = if c.route == Route::All {
        let mut chosen = Vec::new();
        for &r in inst.routes() {
            if n <= Instance::cap(r) {
                chosen.push(r);
            } else {
                report.notes.push(format!("{} skipped: n = {n} exceeds its cap {}", route_name(r), Instance::cap(r)));
            }
        }
        chosen
    } else {
        vec![c.route]
    };
    let exec = execution(c);
    let mut values = Vec::new();
    for r in routes {
        let ((value, _), ms) = timed(|| inst.evaluate(r, exec))?;
        report.results.push(RouteResult::new(route_name(r), value, ms));
        values.push((route_name(r), value));
    }
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let d = rel_diff(values[j].1, values[i].1);
            report.comparisons.push(Comparison {
                a: values[i].0.into(),
                b: values[j].0.into(),
                rel_diff: d,
            });
            if !(d <= c.tolerance) {
                report.verdict = "fail".into();
            }
        }
    }
    Ok(report)
}

pub fn check(suite: &str, c: &Common) -> Result<Report> {
    let suite: Suite = suite.parse()?;
    let n = resolve_n(c, DEFAULT_N)?;
    let cfg = SuiteConfig {
        n,
        seed: c.seed,
        tau: c.tau,
        lambda: c.lambda,
        hbar: c.hbar,
        q: c.q,
        execution: execution(c),
    };
    let mut config = config_json(c, n);
    config["suite"] = json!(suite.name());
    let mut report = Report::new("check", config);
    for check in run_suite(suite, &cfg)? {
        if !check.passed() {
            report.verdict = "fail".into();
        }
        report.tolerances.insert(check.name.clone(), check.tolerance);
        report.residuals.insert(check.name, check.residual);
    }
    Ok(report)
}

pub fn bench(c: &Common) -> Result<Report> {
    let max_n = c.n.unwrap_or(BENCH_DEFAULT_N);
    let mut report = Report::new("bench", config_json(c, max_n));
    let exec = execution(c);
    let mut crossover = None;
    for n in 1..=max_n {
        let mut sized = c.clone();
        sized.n = Some(n);
        sized.u = None;
        sized.v = None;
        sized.z = None;
        sized.w = None;
        let inst = Instance::build(&sized, n)?;
        let mut times = Vec::new();
        for &r in inst.routes() {
            if c.route != Route::All && c.route != r || n > Instance::cap(r) {
                continue;
            }
            let ((value, terms), ms) = timed(|| inst.evaluate(r, exec))?;
            if r == Route::Enumerate && terms != asm_count(n) {
                report.verdict = "fail".into();
                report.notes.push(format!("n = {n}: {terms} configurations, expected {}", asm_count(n)));
            }
            let mut rec = RouteResult::new(route_name(r), value, ms);
            rec.n = Some(n);
            rec.terms = Some(terms);
            report.results.push(rec);
            times.push((r, ms));
        }
        let time_of = |r: Route| times.iter().find(|(x, _)| *x == r).map(|&(_, t)| t);
        if let (Some(det), Some(sum), None) = (time_of(Route::Determinant), time_of(Route::Sum), crossover) {
            if det < sum {
                crossover = Some(n);
            }
        }
    }
    if let Some(n) = crossover {
        report.notes.push(format!("determinant faster than permutation sum from n = {n}"));
    }
    Ok(report)
}

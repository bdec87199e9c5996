//! Classical optimizers over a real parameter vector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    #[default]
    Minimize,
    Maximize,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }

    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    GradientDescent,
    Spsa,
    NelderMead,
}

/// Starting point used by drivers when no explicit start is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Init {
    #[default]
    Zeros,
    /// Uniform in `[-half_width, half_width]`, drawn from the config seed.
    Uniform {
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
}

fn default_half_width() -> f64 {
    0.1
}

impl Init {
    pub fn sample(&self, dim: usize, seed: u64) -> Vec<f64> {
        match *self {
            Init::Zeros => vec![0.0; dim],
            Init::Uniform { half_width } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
                (0..dim).map(|_| rng.random_range(-half_width..=half_width)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpsaConstants {
    pub a: f64,
    pub c: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaConstants {
    fn default() -> Self {
        Self { a: 0.2, c: 0.1, big_a: 10.0, alpha: 0.602, gamma: 0.101 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub method: Method,
    /// Upper bound on trace entries, the starting point included.
    pub max_iters: usize,
    pub tolerance: f64,
    /// Initial step for gradient descent; initial simplex edge for Nelder–Mead.
    pub step: f64,
    pub spsa: SpsaConstants,
    pub seed: u64,
    pub init: Init,
    /// Use central differences for parameters whose gates have no shift rule.
    pub finite_difference_fallback: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::GradientDescent,
            max_iters: 500,
            tolerance: 1e-9,
            step: 0.5,
            spsa: SpsaConstants::default(),
            seed: 0,
            init: Init::Zeros,
            finite_difference_fallback: false,
        }
    }
}

impl OptimizerConfig {
    pub fn with_method(method: Method) -> Self {
        Self { method, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::Config("optimizer.max_iters must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config("optimizer.tolerance must be positive".into()));
        }
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(Error::Config("optimizer.step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub value: f64,
    pub grad_norm: Option<f64>,
    /// Cumulative circuit evaluations when this entry was recorded.
    pub evaluations: usize,
}

/// A differentiable scalar function of a parameter vector. Costs are in
/// circuit evaluations.
pub trait Problem: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> Result<f64>;
    fn value_cost(&self) -> usize {
        1
    }
    /// Gradient and the number of circuit evaluations it took.
    fn gradient(&self, x: &[f64]) -> Result<(Vec<f64>, usize)>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawOptResult {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub trace: Vec<TraceEntry>,
    pub evaluations: usize,
    pub converged: bool,
}

struct Run<'a, P: Problem + ?Sized> {
    problem: &'a P,
    sense: Sense,
    evaluations: usize,
    trace: Vec<TraceEntry>,
    best: Option<(f64, Vec<f64>)>,
}

impl<'a, P: Problem + ?Sized> Run<'a, P> {
    /// Sign-adjusted value: always minimized.
    fn f(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += self.problem.value_cost();
        let v = self.problem.value(x)?;
        if !v.is_finite() {
            return Err(Error::NonFinite { trace: self.trace.clone() });
        }
        Ok(self.sense.sign() * v)
    }

    fn grad(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        let (g, cost) = self.problem.gradient(x)?;
        self.evaluations += cost;
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { trace: self.trace.clone() });
        }
        Ok(g.into_iter().map(|v| self.sense.sign() * v).collect())
    }

    fn record(&mut self, x: &[f64], f: f64, grad_norm: Option<f64>) {
        let value = self.sense.sign() * f;
        self.trace.push(TraceEntry {
            iteration: self.trace.len(),
            value,
            grad_norm,
            evaluations: self.evaluations,
        });
        let improves = match &self.best {
            None => true,
            Some((b, _)) => self.sense.better(value, *b),
        };
        if improves {
            self.best = Some((value, x.to_vec()));
        }
    }

    fn full(&self, max_iters: usize) -> bool {
        self.trace.len() >= max_iters
    }

    fn finish(self, converged: bool) -> RawOptResult {
        let (best_value, best_x) = self.best.expect("at least one trace entry");
        RawOptResult { best_x, best_value, trace: self.trace, evaluations: self.evaluations, converged }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Optimize `problem` from `x0` in the requested `sense`.
pub fn minimize<P: Problem + ?Sized>(
    problem: &P,
    sense: Sense,
    config: &OptimizerConfig,
    x0: &[f64],
) -> Result<RawOptResult> {
    config.validate()?;
    if x0.len() != problem.dim() {
        return Err(Error::Invalid(format!("start has {} values for {} parameters", x0.len(), problem.dim())));
    }
    let mut run = Run { problem, sense, evaluations: 0, trace: Vec::new(), best: None };
    if problem.dim() == 0 {
        let f = run.f(x0)?;
        run.record(x0, f, None);
        return Ok(run.finish(true));
    }
    let converged = match config.method {
        Method::GradientDescent => gradient_descent(&mut run, config, x0)?,
        Method::Spsa => spsa(&mut run, config, x0)?,
        Method::NelderMead => nelder_mead(&mut run, config, x0)?,
    };
    Ok(run.finish(converged))
}

/// Steepest descent with Armijo backtracking. The step grows after each
/// accepted iterate and shrinks until sufficient decrease holds.
fn gradient_descent<P: Problem + ?Sized>(run: &mut Run<P>, cfg: &OptimizerConfig, x0: &[f64]) -> Result<bool> {
    const ARMIJO: f64 = 0.25;
    const MIN_STEP: f64 = 1e-12;
    let mut x = x0.to_vec();
    let mut f = run.f(&x)?;
    let mut g = run.grad(&x)?;
    let mut gn = norm(&g);
    run.record(&x, f, Some(gn));
    let mut step = cfg.step;
    loop {
        if gn < cfg.tolerance {
            return Ok(true);
        }
        if run.full(cfg.max_iters) {
            return Ok(false);
        }
        let mut t = step;
        let (x_new, f_new) = loop {
            let cand: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - t * gi).collect();
            let fc = run.f(&cand)?;
            if fc <= f - ARMIJO * t * gn * gn {
                break (cand, fc);
            }
            t *= 0.5;
            if t < MIN_STEP {
                // No descent possible along the gradient at machine precision.
                return Ok(true);
            }
        };
        let delta = (f - f_new).abs();
        x = x_new;
        f = f_new;
        g = run.grad(&x)?;
        gn = norm(&g);
        run.record(&x, f, Some(gn));
        if delta < cfg.tolerance {
            return Ok(true);
        }
        step = (t * 2.0).min(cfg.step * 64.0);
    }
}

/// Simultaneous-perturbation stochastic approximation with the classic
/// gain sequences `a_k = a/(k+1+A)^α`, `c_k = c/(k+1)^γ`.
fn spsa<P: Problem + ?Sized>(run: &mut Run<P>, cfg: &OptimizerConfig, x0: &[f64]) -> Result<bool> {
    let k_ = &cfg.spsa;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = x0.to_vec();
    let mut f = run.f(&x)?;
    run.record(&x, f, None);
    let mut k = 0usize;
    while !run.full(cfg.max_iters) {
        let ak = k_.a / (k as f64 + 1.0 + k_.big_a).powf(k_.alpha);
        let ck = k_.c / (k as f64 + 1.0).powf(k_.gamma);
        let delta: Vec<f64> = (0..x.len()).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let plus: Vec<f64> = x.iter().zip(&delta).map(|(xi, d)| xi + ck * d).collect();
        let minus: Vec<f64> = x.iter().zip(&delta).map(|(xi, d)| xi - ck * d).collect();
        let diff = run.f(&plus)? - run.f(&minus)?;
        for (xi, d) in x.iter_mut().zip(&delta) {
            *xi -= ak * diff / (2.0 * ck * d);
        }
        let f_new = run.f(&x)?;
        run.record(&x, f_new, None);
        let change = (f - f_new).abs();
        f = f_new;
        k += 1;
        if change < cfg.tolerance && k > 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Nelder–Mead with standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). One trace entry per iteration, holding
/// the best vertex.
fn nelder_mead<P: Problem + ?Sized>(run: &mut Run<P>, cfg: &OptimizerConfig, x0: &[f64]) -> Result<bool> {
    let d = x0.len();
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(d + 1);
    let f0 = run.f(x0)?;
    simplex.push((f0, x0.to_vec()));
    for i in 0..d {
        let mut v = x0.to_vec();
        v[i] += cfg.step;
        let fv = run.f(&v)?;
        simplex.push((fv, v));
    }
    let sort = |s: &mut Vec<(f64, Vec<f64>)>| s.sort_by(|a, b| a.0.total_cmp(&b.0));
    sort(&mut simplex);
    run.record(&simplex[0].1, simplex[0].0, None);
    let xtol = cfg.tolerance.sqrt();
    loop {
        let spread = simplex[d].0 - simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(_, v)| v.iter().zip(&simplex[0].1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread < cfg.tolerance && diameter < xtol {
            return Ok(true);
        }
        if run.full(cfg.max_iters) {
            return Ok(false);
        }
        let centroid: Vec<f64> =
            (0..d).map(|j| simplex[..d].iter().map(|(_, v)| v[j]).sum::<f64>() / d as f64).collect();
        let worst = simplex[d].clone();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.1).map(|(c, w)| c + t * (c - w)).collect() };
        let xr = along(1.0);
        let fr = run.f(&xr)?;
        if fr < simplex[0].0 {
            let xe = along(2.0);
            let fe = run.f(&xe)?;
            simplex[d] = if fe < fr { (fe, xe) } else { (fr, xr) };
        } else if fr < simplex[d - 1].0 {
            simplex[d] = (fr, xr);
        } else {
            let (xc, fc) = if fr < worst.0 {
                let xc = along(0.5);
                let fc = run.f(&xc)?;
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = run.f(&xc)?;
                (xc, fc)
            };
            if fc < fr.min(worst.0) {
                simplex[d] = (fc, xc);
            } else {
                let best = simplex[0].1.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = best.iter().zip(&vertex.1).map(|(b, x)| b + 0.5 * (x - b)).collect();
                    *vertex = (run.f(&v)?, v);
                }
            }
        }
        sort(&mut simplex);
        run.record(&simplex[0].1, simplex[0].0, None);
    }
}

//! Regression procedures: Heaps power law, quadratic-in-log rank spectrum,
//! two-segment log-log fit with a crossover, and the two parametric growth
//! curves for entropy and compression ratio.
//!
//! R² is always `1 − SSE/SST` with SST about the mean of the transformed
//! response.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use sha2::{Digest, Sha256};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::lexicon::RankSpectrum;
use crate::walks::MsdCurve;

/// Relative SSE improvement below which a two-segment fit is reported as
/// "no crossover".
pub const CROSSOVER_MIN_IMPROVEMENT: f64 = 0.05;
/// Minimum points on each side of a breakpoint.
pub const MIN_SEGMENT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub sse: f64,
    pub r2: f64,
    /// `None` with fewer than three points.
    pub se_slope: Option<f64>,
    pub se_intercept: Option<f64>,
    pub points: usize,
}

/// Ordinary least squares `y = intercept + slope·x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::domain("x and y lengths differ"));
    }
    if n < 2 {
        return Err(Error::DegenerateFit("a line needs at least two points".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let sst: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let (se_slope, se_intercept) = if n > 2 {
        let s2 = sse / (nf - 2.0);
        (
            Some((s2 / sxx).sqrt()),
            Some((s2 * (1.0 / nf + mx * mx / sxx)).sqrt()),
        )
    } else {
        (None, None)
    };
    Ok(LineFit {
        slope,
        intercept,
        sse,
        r2: r_squared(sse, sst),
        se_slope,
        se_intercept,
        points: n,
    })
}

fn r_squared(sse: f64, sst: f64) -> f64 {
    if sst == 0.0 {
        if sse == 0.0 {
            1.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        1.0 - sse / sst
    }
}

/// How residuals of a power-law fit are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Least squares on `(ln n, ln d)`: every checkpoint weighs the same.
    #[default]
    LogLog,
    /// Nonlinear least squares on `d` itself, so the largest `n` dominate.
    Linear,
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loglog" | "log" => Ok(Weighting::LogLog),
            "linear" => Ok(Weighting::Linear),
            other => Err(Error::domain(format!("weighting {other:?} (expected loglog or linear)"))),
        }
    }
}

/// `d ≈ K·n^β`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PowerLawFit {
    pub k: f64,
    pub beta: f64,
    /// In the space the residuals were measured in.
    pub r2: f64,
    pub se_ln_k: Option<f64>,
    pub se_beta: Option<f64>,
    pub weighting: Weighting,
}

pub fn fit_power_law(points: &[(f64, f64)], weighting: Weighting) -> Result<PowerLawFit> {
    if points.iter().any(|&(n, d)| !(n > 0.0) || !(d > 0.0)) {
        return Err(Error::domain("power-law fit needs positive data"));
    }
    let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let line = fit_line(&x, &y)?;
    let loglog = PowerLawFit {
        k: line.intercept.exp(),
        beta: line.slope,
        r2: line.r2,
        se_ln_k: line.se_intercept,
        se_beta: line.se_slope,
        weighting: Weighting::LogLog,
    };
    match weighting {
        Weighting::LogLog => Ok(loglog),
        Weighting::Linear => fit_power_law_linear(points, &x, loglog),
    }
}

/// Levenberg–Marquardt on `(ln K, β)` started from the log-log solution.
fn fit_power_law_linear(points: &[(f64, f64)], x: &[f64], start: PowerLawFit) -> Result<PowerLawFit> {
    let d: Vec<f64> = points.iter().map(|p| p.1).collect();
    let sse_at = |lk: f64, b: f64| -> f64 {
        x.iter().zip(&d).map(|(x, d)| (d - (lk + b * x).exp()).powi(2)).sum()
    };
    let (mut lk, mut b) = (start.k.ln(), start.beta);
    let mut sse = sse_at(lk, b);
    let mut lambda = 1e-3;
    for _ in 0..1000 {
        // Jacobian of the model: ∂/∂lnK = m, ∂/∂β = m·ln n.
        let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (x, d) in x.iter().zip(&d) {
            let m = (lk + b * x).exp();
            let r = d - m;
            let (j1, j2) = (m, m * x);
            a11 += j1 * j1;
            a12 += j1 * j2;
            a22 += j2 * j2;
            g1 += j1 * r;
            g2 += j2 * r;
        }
        let mut accepted = None;
        for _ in 0..60 {
            let (m11, m22) = (a11 * (1.0 + lambda), a22 * (1.0 + lambda));
            let det = m11 * m22 - a12 * a12;
            if det <= 0.0 {
                lambda *= 10.0;
                continue;
            }
            let s1 = (m22 * g1 - a12 * g2) / det;
            let s2 = (m11 * g2 - a12 * g1) / det;
            let trial = sse_at(lk + s1, b + s2);
            if trial <= sse {
                accepted = Some((s1, s2, trial));
                lambda = (lambda * 0.3).max(1e-12);
                break;
            }
            lambda *= 10.0;
        }
        let Some((s1, s2, trial)) = accepted else { break };
        lk += s1;
        b += s2;
        sse = trial;
        if s1.abs().max(s2.abs()) < 1e-12 {
            break;
        }
    }
    let n = points.len();
    let mean = d.iter().sum::<f64>() / n as f64;
    let sst: f64 = d.iter().map(|v| (v - mean).powi(2)).sum();
    let (se_ln_k, se_beta) = if n > 2 {
        let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
        for x in x {
            let m = (lk + b * x).exp();
            a11 += m * m;
            a12 += m * m * x;
            a22 += m * m * x * x;
        }
        let det = a11 * a22 - a12 * a12;
        let s2 = sse / (n as f64 - 2.0);
        (Some((s2 * a22 / det).sqrt()), Some((s2 * a11 / det).sqrt()))
    } else {
        (None, None)
    };
    Ok(PowerLawFit {
        k: lk.exp(),
        beta: b,
        r2: r_squared(sse, sst),
        se_ln_k,
        se_beta,
        weighting: Weighting::Linear,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    Ten,
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Ten => x.log10(),
            LogBase::E => x.ln(),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "10" => Ok(LogBase::Ten),
            "e" | "ln" => Ok(LogBase::E),
            other => Err(Error::domain(format!("log base {other:?} (expected 10 or e)"))),
        }
    }
}

/// `log f = a·(log r)² + b·log r + c`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadraticLogFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub base: LogBase,
    pub r2: f64,
    pub points: usize,
}

/// Linear least squares via SVD; returns coefficients and SSE.
fn least_squares(design: &DMatrix<f64>, y: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let svd = design.clone().svd(true, true);
    let coef = svd
        .solve(y, 1e-13)
        .map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let resid = y - design * &coef;
    Ok((coef, resid.norm_squared()))
}

fn matrix_rank(design: &DMatrix<f64>) -> usize {
    let sv = design.clone().svd(false, false).singular_values;
    let max = sv.max();
    sv.iter().filter(|&&s| s > max * 1e-12).count()
}

pub fn fit_quadratic_log(points: &[(f64, f64)], base: LogBase) -> Result<QuadraticLogFit> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(r, f)| r > 0.0 && f > 0.0)
        .collect();
    if used.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "quadratic fit needs at least 4 positive points, got {}",
            used.len()
        )));
    }
    let m = used.len();
    let design = DMatrix::from_fn(m, 3, |i, j| {
        let l = base.log(used[i].0);
        match j {
            0 => l * l,
            1 => l,
            _ => 1.0,
        }
    });
    let y = DVector::from_iterator(m, used.iter().map(|p| base.log(p.1)));
    let (coef, sse) = least_squares(&design, &y)?;
    let mean = y.mean();
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(QuadraticLogFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        base,
        r2: r_squared(sse, sst),
        points: m,
    })
}

/// Parabolic fit of a rank spectrum: `log f(r)` against `log r`.
pub fn fit_zipf_quadratic(spectrum: &RankSpectrum, base: LogBase) -> Result<QuadraticLogFit> {
    let pts: Vec<(f64, f64)> = spectrum
        .entries
        .iter()
        .map(|e| (e.rank as f64, e.frequency))
        .collect();
    fit_quadratic_log(&pts, base)
}

/// Two independent log-log lines split at a breakpoint lag.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SegmentedFit {
    pub gamma1: f64,
    pub gamma2: f64,
    /// First lag of the second segment.
    pub t_c: f64,
    pub breakpoint_index: usize,
    pub intercept1: f64,
    pub intercept2: f64,
    pub r2_1: f64,
    pub r2_2: f64,
    pub sse: f64,
    /// SSE of one line through all points.
    pub sse_single: f64,
    pub single_slope: f64,
    /// 95% half-widths from the residual variance of each segment.
    pub half_width1: f64,
    pub half_width2: f64,
    pub crossover_detected: bool,
}

fn half_width(line: &LineFit) -> f64 {
    let df = line.points as f64 - 2.0;
    match line.se_slope {
        Some(se) if df > 0.0 => {
            let t = StudentsT::new(0.0, 1.0, df)
                .expect("df > 0")
                .inverse_cdf(0.975);
            t * se
        }
        _ => f64::NAN,
    }
}

/// Grid search over breakpoints at observed lags, at least
/// [`MIN_SEGMENT_POINTS`] per side, minimizing total SSE in log-log space.
/// Equal SSE goes to the smaller `t_c`.
pub fn fit_segmented_points(t: &[f64], values: &[f64]) -> Result<SegmentedFit> {
    if t.len() != values.len() {
        return Err(Error::domain("lag and value lengths differ"));
    }
    if t.iter().chain(values).any(|&v| !(v > 0.0)) {
        return Err(Error::domain("segmented fit needs positive lags and values"));
    }
    let m = t.len();
    if m < 2 * MIN_SEGMENT_POINTS {
        return Err(Error::DegenerateFit(format!(
            "need at least {} lags, got {m}",
            2 * MIN_SEGMENT_POINTS
        )));
    }
    let (lo, hi) = t
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    if hi / lo < 100.0 {
        return Err(Error::DegenerateFit("lags span less than two decades".into()));
    }
    let x: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let single = fit_line(&x, &y)?;

    let mut best: Option<(f64, usize, LineFit, LineFit)> = None;
    for b in MIN_SEGMENT_POINTS..=(m - MIN_SEGMENT_POINTS) {
        let left = fit_line(&x[..b], &y[..b])?;
        let right = fit_line(&x[b..], &y[b..])?;
        let sse = left.sse + right.sse;
        if best.as_ref().is_none_or(|(s, ..)| sse < *s) {
            best = Some((sse, b, left, right));
        }
    }
    let (sse, b, left, right) = best.expect("at least one breakpoint");
    let sst: f64 = {
        let my = y.iter().sum::<f64>() / m as f64;
        y.iter().map(|v| (v - my).powi(2)).sum()
    };
    // A single line that already fits to rounding leaves nothing to improve.
    let improvement = if single.sse > 1e-12 * sst {
        (single.sse - sse) / single.sse
    } else {
        0.0
    };
    Ok(SegmentedFit {
        gamma1: left.slope,
        gamma2: right.slope,
        t_c: t[b],
        breakpoint_index: b,
        intercept1: left.intercept,
        intercept2: right.intercept,
        r2_1: left.r2,
        r2_2: right.r2,
        sse,
        sse_single: single.sse,
        single_slope: single.slope,
        half_width1: half_width(&left),
        half_width2: half_width(&right),
        crossover_detected: improvement >= CROSSOVER_MIN_IMPROVEMENT,
    })
}

pub fn fit_segmented(curve: &MsdCurve) -> Result<SegmentedFit> {
    let t: Vec<f64> = curve.lags.iter().map(|&l| l as f64).collect();
    fit_segmented_points(&t, &curve.values)
}

/// `h ≈ a + b·log₂(log₂ n)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EntropyGrowthFit {
    pub a: f64,
    pub b: f64,
    pub r2: f64,
}

pub fn fit_entropy_growth(points: &[(f64, f64)]) -> Result<EntropyGrowthFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit("entropy growth fit needs at least 3 points".into()));
    }
    if points.iter().any(|&(n, _)| !(n >= 3.0)) {
        return Err(Error::domain("entropy growth fit needs n ≥ 3"));
    }
    let x: Vec<f64> = points.iter().map(|p| p.0.log2().log2()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let line = fit_line(&x, &y)?;
    Ok(EntropyGrowthFit {
        a: line.intercept,
        b: line.slope,
        r2: line.r2,
    })
}

/// `CR ≈ a + b/n^c + d/ln n`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CrCurveFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub sse: f64,
    pub r2: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The data do not identify the exponent `c` (e.g. `b = 0`).
    pub degenerate: bool,
}

const CR_MAX_ITER: usize = 1000;
const CR_STEP_TOL: f64 = 1e-10;
const CR_C_MIN: f64 = 1e-6;
const CR_C_MAX: f64 = 10.0;

struct Projection {
    coef: DVector<f64>,
    resid: DVector<f64>,
    sse: f64,
    design: DMatrix<f64>,
}

fn cr_design(ns: &[f64], c: f64) -> DMatrix<f64> {
    DMatrix::from_fn(ns.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => ns[i].powf(-c),
        _ => 1.0 / ns[i].ln(),
    })
}

fn cr_project(ns: &[f64], y: &DVector<f64>, c: f64) -> Result<Projection> {
    let design = cr_design(ns, c);
    let (coef, sse) = least_squares(&design, y)?;
    let resid = y - &design * &coef;
    Ok(Projection {
        coef,
        resid,
        sse,
        design,
    })
}

/// Variable projection: for a given `c` the linear part `(a, b, d)` is solved
/// exactly, and damped Gauss–Newton runs on `c` alone with the Kaufman
/// Jacobian of the projected residual. The start is the best of a log grid.
pub fn fit_cr_curve(points: &[(f64, f64)]) -> Result<CrCurveFit> {
    if points.len() < 5 {
        return Err(Error::DegenerateFit("CR curve fit needs at least 5 points".into()));
    }
    if points.iter().any(|&(n, _)| !(n > 1.0)) {
        return Err(Error::domain("CR curve fit needs n > 1"));
    }
    let ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    let y = DVector::from_iterator(ns.len(), points.iter().map(|p| p.1));
    let mean = y.mean();
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();

    let mut c = (0..=60)
        .map(|j| 0.01 * 300f64.powf(j as f64 / 60.0))
        .map(|c| (c, cr_project(&ns, &y, c).map(|p| p.sse).unwrap_or(f64::INFINITY)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, _)| c)
        .unwrap();
    let mut proj = cr_project(&ns, &y, c)?;
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < CR_MAX_ITER {
        iterations += 1;
        // dX/dc β touches only the n^{-c} column.
        let b = proj.coef[1];
        let dxb = DVector::from_iterator(ns.len(), ns.iter().map(|&n| -n.ln() * n.powf(-c) * b));
        let pinv_part = {
            let (coef, _) = least_squares(&proj.design, &dxb)?;
            &proj.design * coef
        };
        let jac = -(dxb - pinv_part);
        let jtj = jac.norm_squared();
        let jtr = jac.dot(&proj.resid);
        if jtj == 0.0 {
            break;
        }
        let mut accepted = false;
        let mut step = 0.0;
        for _ in 0..60 {
            step = -jtr / (jtj * (1.0 + lambda));
            let trial = (c + step).clamp(CR_C_MIN, CR_C_MAX);
            let tp = cr_project(&ns, &y, trial)?;
            if tp.sse <= proj.sse {
                step = trial - c;
                c = trial;
                proj = tp;
                lambda = (lambda * 0.3).max(1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted || step.abs() < CR_STEP_TOL {
            converged = true;
            break;
        }
    }
    let scale = proj.coef.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    let degenerate = proj.coef[1].abs() <= 1e-9 * scale
        || sst == 0.0
        || matrix_rank(&cr_design(&ns, c)) < 3;
    Ok(CrCurveFit {
        a: proj.coef[0],
        b: proj.coef[1],
        c,
        d: proj.coef[2],
        sse: proj.sse,
        r2: r_squared(proj.sse, sst),
        iterations,
        converged,
        degenerate,
    })
}

/// Self-describing JSON fit record.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FitReport {
    pub model: String,
    /// SHA-256 of the input points as little-endian f64 pairs.
    pub input_digest: String,
    pub input_points: usize,
    pub parameters: BTreeMap<String, f64>,
    pub uncertainties: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
}

pub fn digest_points(points: &[(f64, f64)]) -> String {
    let mut h = Sha256::new();
    for (x, y) in points {
        h.update(x.to_le_bytes());
        h.update(y.to_le_bytes());
    }
    hex::encode(h.finalize())
}

impl FitReport {
    pub fn new(model: &str, points: &[(f64, f64)]) -> Self {
        FitReport {
            model: model.to_string(),
            input_digest: digest_points(points),
            input_points: points.len(),
            parameters: BTreeMap::new(),
            uncertainties: BTreeMap::new(),
            flags: BTreeMap::new(),
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    pub fn uncertainty(mut self, name: &str, value: Option<f64>) -> Self {
        if let Some(v) = value.filter(|v| v.is_finite()) {
            self.uncertainties.insert(name.to_string(), v);
        }
        self
    }

    pub fn flag(mut self, name: &str, value: bool) -> Self {
        self.flags.insert(name.to_string(), value);
        self
    }
}

impl PowerLawFit {
    pub fn report(&self, points: &[(f64, f64)]) -> FitReport {
        let model = match self.weighting {
            Weighting::LogLog => "power_law_loglog",
            Weighting::Linear => "power_law_linear",
        };
        FitReport::new(model, points)
            .param("K", self.k)
            .param("beta", self.beta)
            .param("r2", self.r2)
            .uncertainty("ln_K", self.se_ln_k)
            .uncertainty("beta", self.se_beta)
    }
}

impl QuadraticLogFit {
    pub fn report(&self, points: &[(f64, f64)]) -> FitReport {
        let model = match self.base {
            LogBase::Ten => "quadratic_log10",
            LogBase::E => "quadratic_ln",
        };
        FitReport::new(model, points)
            .param("a", self.a)
            .param("b", self.b)
            .param("c", self.c)
            .param("r2", self.r2)
    }
}

impl SegmentedFit {
    pub fn report(&self, points: &[(f64, f64)]) -> FitReport {
        FitReport::new("segmented_power_law", points)
            .param("gamma1", self.gamma1)
            .param("gamma2", self.gamma2)
            .param("t_c", self.t_c)
            .param("intercept1", self.intercept1)
            .param("intercept2", self.intercept2)
            .param("r2_1", self.r2_1)
            .param("r2_2", self.r2_2)
            .param("sse", self.sse)
            .param("sse_single", self.sse_single)
            .uncertainty("gamma1_95", Some(self.half_width1))
            .uncertainty("gamma2_95", Some(self.half_width2))
            .flag("crossover_detected", self.crossover_detected)
    }
}

impl EntropyGrowthFit {
    pub fn report(&self, points: &[(f64, f64)]) -> FitReport {
        FitReport::new("entropy_loglog", points)
            .param("a", self.a)
            .param("b", self.b)
            .param("r2", self.r2)
    }
}

impl CrCurveFit {
    pub fn report(&self, points: &[(f64, f64)]) -> FitReport {
        FitReport::new("cr_power_plus_log", points)
            .param("a", self.a)
            .param("b", self.b)
            .param("c", self.c)
            .param("d", self.d)
            .param("sse", self.sse)
            .param("r2", self.r2)
            .param("iterations", self.iterations as f64)
            .flag("converged", self.converged)
            .flag("degenerate", self.degenerate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn power_law_noiseless() {
        let pts: Vec<(f64, f64)> = [1.0, 10.0, 100.0, 1000.0]
            .iter()
            .map(|&n: &f64| (n, 2.0 * n.powf(1.5)))
            .collect();
        for w in [Weighting::LogLog, Weighting::Linear] {
            let f = fit_power_law(&pts, w).unwrap();
            assert!((f.k - 2.0).abs() < 1e-10, "{f:?}");
            assert!((f.beta - 1.5).abs() < 1e-10, "{f:?}");
            assert!((f.r2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn power_law_two_points_and_errors() {
        let f = fit_power_law(&[(10.0, 3.0), (100.0, 12.0)], Weighting::LogLog).unwrap();
        assert!((f.beta - 4f64.log10()).abs() < 1e-12);
        assert_eq!(f.r2, 1.0);
        assert!(f.se_beta.is_none());
        assert!(matches!(fit_power_law(&[(1.0, 0.0), (2.0, 1.0)], Weighting::LogLog), Err(Error::Domain(_))));
        assert!(matches!(fit_power_law(&[(1.0, 1.0)], Weighting::Linear), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn published_table_heaps_exponent() {
        let table = [
            (1e1, 3.0),
            (1e2, 12.0),
            (1e3, 29.0),
            (1e4, 63.0),
            (1e5, 123.0),
            (1e6, 230.0),
            (1e7, 412.0),
            (1e8, 708.0),
            (1e9, 1195.0),
        ];
        let f = fit_power_law(&table, Weighting::Linear).unwrap();
        assert!((f.beta - 0.234).abs() < 0.02, "{f:?}");
        assert!((f.k - 8.484).abs() < 0.01, "{f:?}");
        // Equal weight per decade is pulled up by the small-n rows.
        let g = fit_power_law(&table, Weighting::LogLog).unwrap();
        assert!(g.beta > 0.3, "{g:?}");
    }

    #[test]
    fn quadratic_noiseless() {
        let pts: Vec<(f64, f64)> = (1..=40)
            .map(|r| {
                let l = (r as f64).ln();
                (r as f64, (-(l * l) - 0.5 * l + 1.0).exp())
            })
            .collect();
        let f = fit_quadratic_log(&pts, LogBase::E).unwrap();
        assert!((f.a + 1.0).abs() < 1e-10);
        assert!((f.b + 0.5).abs() < 1e-10);
        assert!((f.c - 1.0).abs() < 1e-10);

        let zipf: Vec<(f64, f64)> = (1..=50).map(|r| (r as f64, 1.0 / r as f64)).collect();
        let f = fit_quadratic_log(&zipf, LogBase::Ten).unwrap();
        assert!(f.a.abs() < 1e-10 && (f.b + 1.0).abs() < 1e-10 && f.c.abs() < 1e-10);
        assert!(fit_quadratic_log(&zipf[..3], LogBase::E).is_err());
    }

    fn glued(noise: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t: Vec<f64> = crate::walks::log_lags(100_000, 16).iter().map(|&v| v as f64).collect();
        let y = t
            .iter()
            .map(|&t| {
                let clean = if t < 100.0 {
                    t
                } else {
                    100.0 * (t / 100.0).powf(1.9)
                };
                clean * (1.0 + noise * (rng.random::<f64>() * 2.0 - 1.0))
            })
            .collect();
        (t, y)
    }

    #[test]
    fn segmented_recovers_crossover() {
        let (t, y) = glued(0.01, 42);
        let f = fit_segmented_points(&t, &y).unwrap();
        assert!((0.95..=1.05).contains(&f.gamma1), "{f:?}");
        assert!((1.85..=1.95).contains(&f.gamma2), "{f:?}");
        assert!(f.t_c >= 50.0 && f.t_c <= 200.0, "{f:?}");
        assert!(f.crossover_detected);
        assert!(f.half_width1 > 0.0 && f.half_width2 > 0.0);
    }

    #[test]
    fn segmented_single_slope() {
        let t: Vec<f64> = crate::walks::log_lags(10_000, 16).iter().map(|&v| v as f64).collect();
        let y: Vec<f64> = t.iter().map(|t| 3.0 * t.powf(1.5)).collect();
        let f = fit_segmented_points(&t, &y).unwrap();
        assert!((f.gamma1 - 1.5).abs() < 1e-10 && (f.gamma2 - 1.5).abs() < 1e-10);
        assert!(!f.crossover_detected);
    }

    #[test]
    fn segmented_scale_invariance() {
        let (t, y) = glued(0.01, 7);
        let f = fit_segmented_points(&t, &y).unwrap();
        let scaled: Vec<f64> = t.iter().map(|v| v * 7.5).collect();
        let g = fit_segmented_points(&scaled, &y).unwrap();
        assert!((f.gamma1 - g.gamma1).abs() < 1e-8);
        assert!((f.gamma2 - g.gamma2).abs() < 1e-8);
        assert!((g.t_c / f.t_c - 7.5).abs() < 1e-9);
        assert!((g.intercept1 - (f.intercept1 - f.gamma1 * 7.5f64.ln())).abs() < 1e-8);
    }

    #[test]
    fn segmented_preconditions() {
        let t: Vec<f64> = (1..=7).map(|v| v as f64 * 100.0).collect();
        assert!(fit_segmented_points(&t, &t).is_err());
        let t: Vec<f64> = (1..=20).map(|v| v as f64).collect();
        assert!(matches!(fit_segmented_points(&t, &t), Err(Error::DegenerateFit(_))));
        let mut y = t.clone();
        y[3] = 0.0;
        assert!(matches!(fit_segmented_points(&t, &y), Err(Error::Domain(_))));
    }

    #[test]
    fn entropy_growth_noiseless() {
        let pts: Vec<(f64, f64)> = [4.0f64, 16.0, 256.0, 65536.0]
            .iter()
            .map(|&n| (n, 1.0 + 0.5 * n.log2().log2()))
            .collect();
        let f = fit_entropy_growth(&pts).unwrap();
        assert!((f.a - 1.0).abs() < 1e-10 && (f.b - 0.5).abs() < 1e-10);
        let flat: Vec<(f64, f64)> = pts.iter().map(|&(n, _)| (n, 2.5)).collect();
        assert_eq!(fit_entropy_growth(&flat).unwrap().b, 0.0);
    }

    #[test]
    fn cr_curve_recovery() {
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|j| 10f64.powf(1.0 + 6.0 * j as f64 / 19.0))
            .map(|n| (n, 0.3 + 2.0 / n.powf(0.5) + 0.1 / n.ln()))
            .collect();
        let f = fit_cr_curve(&pts).unwrap();
        assert!(f.converged && !f.degenerate, "{f:?}");
        assert!((f.a - 0.3).abs() < 1e-3, "{f:?}");
        assert!((f.b - 2.0).abs() < 1e-3, "{f:?}");
        assert!((f.c - 0.5).abs() < 1e-3, "{f:?}");
        assert!((f.d - 0.1).abs() < 1e-3, "{f:?}");
    }

    #[test]
    fn cr_curve_constant_is_degenerate() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|j| (10f64.powi(j), 0.25)).collect();
        let f = fit_cr_curve(&pts).unwrap();
        assert!(f.degenerate);
        assert!((f.a - 0.25).abs() < 1e-9);
    }

    #[test]
    fn report_digest_stable() {
        let pts = [(1.0, 2.0), (3.0, 4.0)];
        assert_eq!(digest_points(&pts), digest_points(&pts));
        assert_ne!(digest_points(&pts), digest_points(&pts[..1]));
        let r = fit_power_law(&pts, Weighting::LogLog).unwrap().report(&pts);
        assert_eq!(r.model, "power_law_loglog");
        assert!(r.parameters.contains_key("beta"));
    }
}

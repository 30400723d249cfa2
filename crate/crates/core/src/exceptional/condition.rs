//! The condition for a displaced pole `E = m - g^2` to be lifted, and its
//! roots in `g`.
//!
//! Two independent routes evaluate the same condition up to a nonzero
//! factor: the series `Σ sqrt(n!) b_n D_mn` over the Fock coefficients, and
//! the numerator `v_m` of `u_m` from the displaced recurrences.

use crate::error::{Error, Result};
use crate::exceptional::laguerre::{laguerre_assoc, ln_factorial};
use crate::model::{ModelParams, Parity, SeriesConfig};
use crate::series::displaced::{displaced_recurrence_unchecked, displaced_seed, initial_terms};
use crate::series::fock::{check_singlet_poles, fock_recurrence_unchecked};
use crate::series::tail::{extrapolated_sum, magnitude};

/// Term cap for the condition series.
pub const CONDITION_MAX_TERMS: usize = 50_000;

/// Decay power of the condition series terms.
const CONDITION_EXPONENT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionRoute {
    /// `Σ sqrt(n!) b_n D_mn`.
    Series,
    /// `v_m` from the displaced recurrences.
    Direct,
}

impl ConditionRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionRoute::Series => "series",
            ConditionRoute::Direct => "direct",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionValue {
    pub value: f64,
    pub terms_used: usize,
    pub tail_estimate: f64,
}

fn check_condition_inputs(params: &ModelParams, parity: Parity, m: usize, cfg: &SeriesConfig) -> Result<f64> {
    if params.delta() == 0.0 {
        return Err(Error::NotApplicable("with delta = 0 the condition vanishes identically".into()));
    }
    let energy = m as f64 - params.g2();
    check_singlet_poles(parity, energy, m, cfg.eps_pole)?;
    Ok(energy)
}

/// Terms `sqrt(n!) b_n D_mn` for `n = 0..=n_max`, at `E = m - g^2`.
pub fn condition_terms(params: &ModelParams, parity: Parity, m: usize, n_max: usize) -> Vec<f64> {
    let g = params.g();
    let g2 = params.g2();
    let energy = m as f64 - g2;
    let fock = fock_recurrence_unchecked(params, parity, energy, n_max);
    // scaled_b holds b_n (-g)^n
    let d = fock.scaled_b();
    let ln_fm = ln_factorial(m);
    let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };
    let upper_prefactor = sign_m * (0.5 * ln_fm - m as f64 * g.ln()).exp();
    d.iter()
        .enumerate()
        .map(|(n, &dn)| {
            if dn == 0.0 {
                0.0
            } else if n >= m {
                dn * upper_prefactor * laguerre_assoc(m, n - m, g2)
            } else {
                let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
                let log_mag = (m as f64 - 2.0 * n as f64) * g.ln() + ln_factorial(n) - 0.5 * ln_fm;
                dn * sign_n * log_mag.exp() * laguerre_assoc(n, m - n, g2)
            }
        })
        .collect()
}

/// `F_m(g) = Σ sqrt(n!) b_n D_mn` at `E = m - g^2`, adaptively truncated.
pub fn exceptional_condition_series(
    params: &ModelParams,
    parity: Parity,
    m: usize,
    cfg: &SeriesConfig,
) -> Result<ConditionValue> {
    check_condition_inputs(params, parity, m, cfg)?;
    let mut n = initial_terms(cfg.max_terms);
    loop {
        let terms = condition_terms(params, parity, m, n);
        let value = extrapolated_sum(&terms, CONDITION_EXPONENT);
        let half = extrapolated_sum(&terms[..=n / 2], CONDITION_EXPONENT);
        let tail_estimate = (value - half).abs() + 16.0 * f64::EPSILON * magnitude(&terms);
        if tail_estimate <= cfg.tol * value.abs().max(1.0) {
            return Ok(ConditionValue { value, terms_used: n + 1, tail_estimate });
        }
        if n >= cfg.max_terms || !tail_estimate.is_finite() {
            return Err(Error::NoConvergence { terms: n + 1, estimate: tail_estimate });
        }
        n = (2 * n).min(cfg.max_terms);
    }
}

/// `v_m` at `E = m - g^2` from the displaced recurrences. For `m = 0` this
/// is the seed sum `Σ b_k (-g)^k` itself.
pub fn exceptional_condition_direct(
    params: &ModelParams,
    parity: Parity,
    m: usize,
    cfg: &SeriesConfig,
) -> Result<ConditionValue> {
    let energy = check_condition_inputs(params, parity, m, cfg)?;
    if m == 0 {
        return seed_v0_at_bottom(params, parity, cfg);
    }
    let seed = displaced_seed(params, parity, energy, cfg)?;
    // u_n for n < m have nonzero denominators m - n; only v_m is needed at n = m
    let below = displaced_recurrence_unchecked(params, parity, energy, m - 1, &seed);
    let g2 = params.g2();
    let c = params.coupling();
    let (u, v, w) = (below.scaled_u(), below.scaled_v(), below.scaled_w());
    let mf = m as f64;
    let v2 = if m >= 2 { v[m - 2] } else { 0.0 };
    let vm = -((energy - g2 - mf + 1.0) * v[m - 1] + c * (u[m - 1] + w[m - 1]) + g2 * v2) / mf;
    let value = vm / params.g().powi(m as i32);
    Ok(ConditionValue { value, terms_used: seed.terms_used, tail_estimate: seed.tail_estimate })
}

/// At `E = -g^2` only the `v0` sum converges; it is evaluated on its own.
fn seed_v0_at_bottom(params: &ModelParams, parity: Parity, cfg: &SeriesConfig) -> Result<ConditionValue> {
    let energy = -params.g2();
    let mut n = initial_terms(cfg.max_terms);
    loop {
        let fock = fock_recurrence_unchecked(params, parity, energy, n);
        let b = fock.scaled_b();
        let value = extrapolated_sum(b, CONDITION_EXPONENT);
        let half = extrapolated_sum(&b[..=n / 2], CONDITION_EXPONENT);
        let tail_estimate = (value - half).abs() + 16.0 * f64::EPSILON * magnitude(b);
        if tail_estimate <= cfg.tol * value.abs().max(1.0) {
            return Ok(ConditionValue { value, terms_used: n + 1, tail_estimate });
        }
        if n >= cfg.max_terms || !tail_estimate.is_finite() {
            return Err(Error::NoConvergence { terms: n + 1, estimate: tail_estimate });
        }
        n = (2 * n).min(cfg.max_terms);
    }
}

/// Evaluates the condition by either route.
pub fn exceptional_condition(
    params: &ModelParams,
    parity: Parity,
    m: usize,
    route: ConditionRoute,
    cfg: &SeriesConfig,
) -> Result<ConditionValue> {
    match route {
        ConditionRoute::Series => exceptional_condition_series(params, parity, m, cfg),
        ConditionRoute::Direct => exceptional_condition_direct(params, parity, m, cfg),
    }
}

/// A lifted displaced pole: an eigenvalue `E = m - g*^2` of the given parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceptionalPoint {
    pub m: usize,
    pub parity: Parity,
    pub g_star: f64,
    pub energy: f64,
    /// Condition value at `g_star`.
    pub condition_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceptionalOptions {
    /// Scan step in `g`.
    pub g_step: f64,
    /// Bisection stops once the bracket in `g` is no wider than this.
    pub tol_g: f64,
    pub route: ConditionRoute,
    pub series: SeriesConfig,
}

impl Default for ExceptionalOptions {
    fn default() -> Self {
        Self {
            g_step: 0.01,
            tol_g: 1e-12,
            route: ConditionRoute::Series,
            series: SeriesConfig::default().with_max_terms(CONDITION_MAX_TERMS),
        }
    }
}

/// Couplings where `m - g^2` meets a parity-matched singlet pole `n < m`;
/// the condition diverges and changes sign there.
pub fn singlet_crossing_couplings(parity: Parity, m: usize) -> Vec<f64> {
    let mut gs: Vec<f64> = (0..m).filter(|&n| parity.matches(n)).map(|n| ((m - n) as f64).sqrt()).collect();
    gs.sort_by(f64::total_cmp);
    gs
}

/// Scans the condition over `g_range` and bisects every sign change.
///
/// The scan is split at the singlet crossings, whose sign changes are
/// poles rather than roots. An empty list is a valid answer.
pub fn find_exceptional_g(
    delta: f64,
    parity: Parity,
    m: usize,
    g_range: (f64, f64),
    opts: &ExceptionalOptions,
) -> Result<Vec<ExceptionalPoint>> {
    if delta == 0.0 {
        return Err(Error::NotApplicable("with delta = 0 the condition vanishes identically".into()));
    }
    if !(opts.g_step > 0.0) || !(g_range.1 > g_range.0) {
        return Err(Error::InvalidParams(format!("bad g range {:?} or step {}", g_range, opts.g_step)));
    }
    let margin = 1e-7;
    let lo = g_range.0.max(margin);
    let mut cuts = vec![lo];
    for g in singlet_crossing_couplings(parity, m) {
        if g > lo && g < g_range.1 {
            cuts.push(g);
        }
    }
    cuts.push(g_range.1);

    let eval = |g: f64| -> Result<f64> {
        let params = ModelParams::new(delta, g)?;
        exceptional_condition(&params, parity, m, opts.route, &opts.series).map(|c| c.value)
    };

    let mut points = Vec::new();
    for (i, pair) in cuts.windows(2).enumerate() {
        let a = if i == 0 { pair[0] } else { pair[0] + margin };
        let b = if i + 2 == cuts.len() { pair[1] } else { pair[1] - margin };
        if b <= a {
            continue;
        }
        let steps = ((b - a) / opts.g_step).ceil().max(1.0) as usize;
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..=steps {
            let g = if k == steps { b } else { a + k as f64 * opts.g_step };
            let value = match eval(g) {
                Ok(v) => v,
                Err(e) if e.is_pole() => {
                    prev = None;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if let Some((pg, pv)) = prev {
                if pv.signum() != value.signum() {
                    let g_star = bisect_g(&eval, (pg, pv), g, opts.tol_g)?;
                    let residual = eval(g_star)?;
                    points.push(ExceptionalPoint {
                        m,
                        parity,
                        g_star,
                        energy: m as f64 - g_star * g_star,
                        condition_residual: residual,
                    });
                }
            }
            prev = Some((g, value));
        }
    }
    Ok(points)
}

fn bisect_g<F: Fn(f64) -> Result<f64>>(eval: &F, lo: (f64, f64), hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut fa) = lo;
    let mut b = hi;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = eval(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// `√((Δ² − 4)/2)`, the coupling at which the numerator of the second
/// singlet-pole coefficient vanishes; exists only for `Δ ≥ 2`.
pub fn type2_g2(delta: f64) -> Option<f64> {
    (delta >= 2.0).then(|| ((delta * delta - 4.0) / 2.0).sqrt())
}

//! Tail extrapolation for series whose terms decay like a power law.
//!
//! Every series in this crate has terms with an asymptotic expansion
//!
//! ```text
//! t_k ~ k^-p (α0 + α1/k + ...) + (-1)^k k^-p (β0 + β1/k + ...)
//! ```
//!
//! with a known leading exponent `p`; the alternating family comes from the
//! parity bracket, which switches the singlet term on for every other index.
//! The amplitudes are fitted by least squares on the upper half of the
//! computed terms and the infinite remainder of the fitted model is added
//! in closed form through Hurwitz-zeta-type sums.

use nalgebra::{DMatrix, DVector};

/// Number of powers fitted in each (smooth, alternating) family.
const FIT_ORDER: usize = 4;

/// Upper bound on fit rows; longer ranges are subsampled in adjacent pairs
/// so both families stay identifiable.
const MAX_FIT_PAIRS: usize = 128;

/// Shortest series (highest index) for which a fit is attempted.
pub const MIN_FIT_INDEX: usize = 32;

const BERNOULLI_2J: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (a + k)^-s` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    let shift_to = (16.0f64).max(8.0 * s).ceil();
    let mut head = 0.0;
    let mut x = a;
    while x < shift_to {
        head += x.powf(-s);
        x += 1.0;
    }
    head + x.powf(-s) * euler_maclaurin_bracket(s, x)
}

/// `x^s ζ(s, x)` for `x ≥ 8s`, by Euler-Maclaurin.
fn euler_maclaurin_bracket(s: f64, x: f64) -> f64 {
    let mut acc = x / (s - 1.0) + 0.5;
    // rising factorial s(s+1)...(s+2j-2) / x^(2j-1) / (2j)!
    let mut factor = s / x / 2.0;
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let term = b * factor;
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
        let n = 2.0 * j as f64 + 2.0;
        factor *= (s + n - 1.0) * (s + n) / (x * x) / ((n + 1.0) * (n + 2.0));
    }
    acc
}

/// `Σ_{k>n} (n/k)^q`, the tail of a unit-amplitude power law, normalised
/// to the last retained index.
fn smooth_tail(q: f64, n: usize) -> f64 {
    let a = n as f64 + 1.0;
    if q <= a / 8.0 {
        (n as f64 / a).powf(q) * euler_maclaurin_bracket(q, a)
    } else {
        direct_tail(q, n, false)
    }
}

/// `Σ_{k>n} (-1)^k (n/k)^q`.
fn alternating_tail(q: f64, n: usize) -> f64 {
    let a = n as f64 + 1.0;
    let sign = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
    if q <= a / 8.0 {
        // Boole summation: Σ_{k≥0} (-1)^k f(a+k) = f/2 - f'/4 + f'''/48 - ...
        // from the expansion of 1/(1+e^x).
        let r = (n as f64 / a).powf(q);
        let rising = |m: usize| (0..m).map(|i| q + i as f64).product::<f64>() / a.powi(m as i32);
        let series = 0.5 + rising(1) / 4.0 - rising(3) / 48.0 + rising(5) / 480.0
            - 17.0 * rising(7) / 80640.0
            + 31.0 * rising(9) / 1_451_520.0;
        sign * r * series
    } else {
        direct_tail(q, n, true)
    }
}

fn direct_tail(q: f64, n: usize, alternating: bool) -> f64 {
    let nf = n as f64;
    let mut acc = 0.0;
    let mut k = n + 1;
    loop {
        let t = (nf / k as f64).powf(q);
        let signed = if alternating && k % 2 == 1 { -t } else { t };
        acc += signed;
        if t < 1e-20 * acc.abs().max(1e-300) || k > n + 100_000 {
            break;
        }
        k += 1;
    }
    acc
}

/// Plain sum of the terms plus the fitted power-law remainder.
///
/// `terms[k]` is the `k`-th term and `exponent` the leading decay power
/// `p`. Short or non-finite inputs fall back to the plain sum.
pub fn extrapolated_sum(terms: &[f64], exponent: f64) -> f64 {
    let partial: f64 = terms.iter().sum();
    if terms.len() <= MIN_FIT_INDEX || !partial.is_finite() {
        return partial;
    }
    partial + fitted_remainder(terms, exponent)
}

/// Sum of absolute values, the scale against which round-off is judged.
pub fn magnitude(terms: &[f64]) -> f64 {
    terms.iter().map(|t| t.abs()).sum()
}

fn fit_rows(n: usize) -> Vec<usize> {
    let lo = n / 2;
    let span = n - lo;
    if span < 2 * MAX_FIT_PAIRS {
        return (lo..=n).collect();
    }
    let stride = span / MAX_FIT_PAIRS;
    let mut rows = Vec::with_capacity(2 * MAX_FIT_PAIRS + 2);
    let mut k = lo;
    while k < n {
        rows.push(k);
        rows.push(k + 1);
        k += stride;
    }
    rows.push(n);
    rows.dedup();
    rows
}

fn fitted_remainder(terms: &[f64], exponent: f64) -> f64 {
    let n = terms.len() - 1;
    let nf = n as f64;
    let rows = fit_rows(n);
    let cols = 2 * FIT_ORDER;
    let design = DMatrix::from_fn(rows.len(), cols, |i, j| {
        let k = rows[i];
        let x = nf / k as f64;
        let power = x.powf(exponent + (j % FIT_ORDER) as f64);
        if j >= FIT_ORDER && k % 2 == 1 {
            -power
        } else {
            power
        }
    });
    let rhs = DVector::from_iterator(rows.len(), rows.iter().map(|&k| terms[k]));
    if rhs.iter().all(|v| *v == 0.0) {
        return 0.0;
    }
    let qr = design.qr();
    let qtb = qr.q().transpose() * rhs;
    let Some(coef) = qr.r().solve_upper_triangular(&qtb) else {
        return 0.0;
    };
    (0..FIT_ORDER)
        .map(|j| {
            let q = exponent + j as f64;
            coef[j] * smooth_tail(q, n) + coef[FIT_ORDER + j] * alternating_tail(q, n)
        })
        .sum()
}

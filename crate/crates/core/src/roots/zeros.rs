use crate::error::Error;
use crate::model::{ModelParams, Parity, SeriesConfig};
use crate::roots::poles::pole_grid;
use crate::series::gfunc::{domain_lower_bound, g_function};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroOptions {
    /// Sampling step in `E` used to detect sign changes.
    pub grid_step: f64,
    /// Bisection stops once the bracket is no wider than this.
    pub tol_e: f64,
    pub series: SeriesConfig,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        Self { grid_step: 0.01, tol_e: 1e-10, series: SeriesConfig::default() }
    }
}

impl ZeroOptions {
    /// Distance kept from every pole when sampling.
    pub fn pole_margin(&self) -> f64 {
        10.0 * self.series.eps_pole
    }
}

/// A refined zero of `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub energy: f64,
    /// Final bracket `(lo, hi)` with `G(lo) G(hi) < 0`.
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// `|G|` at the returned energy.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleFailure {
    pub energy: f64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSearch {
    pub roots: Vec<Root>,
    pub failures: Vec<SampleFailure>,
    /// The open inter-pole intervals that were searched, after clipping.
    pub intervals: Vec<(f64, f64)>,
}

impl ZeroSearch {
    pub fn energies(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.energy).collect()
    }
}

/// Splits `[lo, hi]` at the poles of the sector and shrinks each piece by
/// the pole margin at pole ends.
pub fn search_intervals(params: &ModelParams, parity: Parity, lo: f64, hi: f64, margin: f64) -> Vec<(f64, f64)> {
    let poles = pole_grid(params, parity, lo, hi);
    let mut cuts: Vec<f64> = poles.iter().map(|p| p.location).collect();
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    let mut intervals = Vec::new();
    let mut start = lo;
    let mut start_is_pole = false;
    for &cut in &cuts {
        if (cut - start).abs() < 1e-14 {
            start_is_pole = true;
            continue;
        }
        let a = if start_is_pole { start + margin } else { start };
        let b = cut - margin;
        if b > a {
            intervals.push((a, b));
        }
        start = cut;
        start_is_pole = true;
    }
    if hi > start {
        let a = if start_is_pole { start + margin } else { start };
        if hi > a {
            intervals.push((a, hi));
        }
    }
    intervals
}

/// All sign changes of `G` in the window, each refined by bisection.
///
/// The window is clipped from below to `-g^2 + margin`; nothing under the
/// first displaced pole is searched. Samples that fail (for example from
/// non-convergence) are reported and leave a gap in the scan.
pub fn find_zeros(params: &ModelParams, parity: Parity, window: (f64, f64), opts: &ZeroOptions) -> ZeroSearch {
    let margin = opts.pole_margin();
    let lo = window.0.max(domain_lower_bound(params) + margin);
    let hi = window.1;
    let mut search = ZeroSearch::default();
    if !(hi > lo) || !(opts.grid_step > 0.0) {
        return search;
    }
    let eval = |e: f64| g_function(params, parity, e, &opts.series).map(|g| g.value);

    for (a, b) in search_intervals(params, parity, lo, hi, margin) {
        search.intervals.push((a, b));
        let steps = ((b - a) / opts.grid_step).ceil().max(1.0) as usize;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=steps {
            let e = if i == steps { b } else { a + i as f64 * opts.grid_step };
            let value = match eval(e) {
                Ok(v) => v,
                Err(error) => {
                    search.failures.push(SampleFailure { energy: e, error });
                    prev = None;
                    continue;
                }
            };
            if value == 0.0 {
                search.roots.push(Root { energy: e, bracket: (e, e), iterations: 0, residual: 0.0 });
                prev = None;
                continue;
            }
            if let Some((pe, pv)) = prev {
                if pv.signum() != value.signum() {
                    match bisect(&eval, (pe, pv), (e, value), opts.tol_e) {
                        Ok(root) => search.roots.push(root),
                        Err(failure) => search.failures.push(failure),
                    }
                }
            }
            prev = Some((e, value));
        }
    }
    search.roots.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    search
}

fn bisect<F>(eval: &F, lo: (f64, f64), hi: (f64, f64), tol: f64) -> Result<Root, SampleFailure>
where
    F: Fn(f64) -> crate::Result<f64>,
{
    let (mut a, mut fa) = lo;
    let (mut b, _) = hi;
    let mut iterations = 0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = eval(mid).map_err(|error| SampleFailure { energy: mid, error })?;
        iterations += 1;
        if fm == 0.0 {
            return Ok(Root { energy: mid, bracket: (mid, mid), iterations, residual: 0.0 });
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let energy = 0.5 * (a + b);
    let residual = eval(energy).map(f64::abs).unwrap_or(f64::NAN);
    Ok(Root { energy, bracket: (a, b), iterations, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals_avoid_poles() {
        let p = ModelParams::new(0.5, 0.6).unwrap();
        let iv = search_intervals(&p, Parity::Even, -0.3, 3.0, 1e-7);
        // cuts at 0, 0.64, 1.64, 2, 2.64
        assert_eq!(iv.len(), 6);
        assert_eq!(iv[0].0, -0.3);
        assert!((iv[0].1 - (0.0 - 1e-7)).abs() < 1e-15);
        assert!((iv[5].0 - (2.64 + 1e-7)).abs() < 1e-12);
        assert_eq!(iv[5].1, 3.0);
    }

    #[test]
    fn coincident_poles_make_one_cut() {
        let p = ModelParams::new(0.5, 1.0).unwrap();
        let iv = search_intervals(&p, Parity::Even, -0.5, 2.5, 1e-7);
        // cuts at -1 (outside), 0 (both kinds), 1, 2 (both kinds)
        assert_eq!(iv.len(), 4);
    }

    #[test]
    fn empty_window_finds_nothing() {
        let p = ModelParams::new(0.5, 0.6).unwrap();
        let s = find_zeros(&p, Parity::Even, (1.0, 1.0), &ZeroOptions::default());
        assert!(s.roots.is_empty());
    }
}

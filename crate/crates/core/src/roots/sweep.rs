//! Spectra over a grid of couplings, with nearest-neighbour level labels.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Error;
use crate::model::{ModelParams, Parity};
use crate::roots::zeros::{find_zeros, Root, SampleFailure, ZeroOptions};

/// Largest jump in `E` between adjacent grid points that still continues a
/// level.
pub const MAX_LEVEL_JUMP: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub label: usize,
    pub root: Root,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub g: f64,
    pub parity: Parity,
    /// Sorted ascending in energy.
    pub levels: Vec<Level>,
    pub failures: Vec<SampleFailure>,
    /// Set when the point could not be evaluated at all.
    pub error: Option<Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub delta: f64,
    pub window: (f64, f64),
    pub g_grid: Vec<f64>,
    /// Ordered by grid index, then parity.
    pub points: Vec<SweepPoint>,
    /// Singlet levels `E = n` inside the window; they belong to every `g`.
    pub singlet_levels: Vec<f64>,
    pub options: ZeroOptions,
}

impl SpectrumResult {
    pub fn points_for(&self, parity: Parity) -> impl Iterator<Item = &SweepPoint> {
        self.points.iter().filter(move |p| p.parity == parity)
    }

    pub fn has_failures(&self) -> bool {
        self.points.iter().any(|p| p.error.is_some() || !p.failures.is_empty())
    }

    /// `(g, E)` pairs of one labelled level, in grid order.
    pub fn level_track(&self, parity: Parity, label: usize) -> Vec<(f64, f64)> {
        self.points_for(parity)
            .filter_map(|p| p.levels.iter().find(|l| l.label == label).map(|l| (p.g, l.root.energy)))
            .collect()
    }

    pub fn labels(&self, parity: Parity) -> Vec<usize> {
        let mut labels: Vec<usize> =
            self.points_for(parity).flat_map(|p| p.levels.iter().map(|l| l.label)).collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }
}

/// Integers `n` with `lo <= n <= hi`.
pub fn singlet_levels(lo: f64, hi: f64) -> Vec<f64> {
    let first = lo.ceil().max(0.0) as usize;
    (first..).map(|n| n as f64).take_while(|&n| n <= hi).collect()
}

/// Finds the zeros at each grid point (in parallel) and links them into
/// levels. Values are never altered by the labelling.
pub fn sweep_spectrum(
    delta: f64,
    g_grid: &[f64],
    parities: &[Parity],
    window: (f64, f64),
    opts: &ZeroOptions,
) -> SpectrumResult {
    let jobs: Vec<(f64, Parity)> =
        g_grid.iter().flat_map(|&g| parities.iter().map(move |&parity| (g, parity))).collect();
    let raw: Vec<(f64, Parity, Result<(Vec<Root>, Vec<SampleFailure>), Error>)> = jobs
        .par_iter()
        .map(|&(g, parity)| {
            let outcome = ModelParams::new(delta, g).map(|params| {
                let search = find_zeros(&params, parity, window, opts);
                (search.roots, search.failures)
            });
            (g, parity, outcome)
        })
        .collect();

    let mut labellers: BTreeMap<Parity, Labeller> = BTreeMap::new();
    let points = raw
        .into_iter()
        .map(|(g, parity, outcome)| {
            let labeller = labellers.entry(parity).or_default();
            match outcome {
                Ok((roots, failures)) => {
                    let levels = labeller.assign(roots);
                    SweepPoint { g, parity, levels, failures, error: None }
                }
                Err(error) => {
                    labeller.skip();
                    SweepPoint { g, parity, levels: Vec::new(), failures: Vec::new(), error: Some(error) }
                }
            }
        })
        .collect();

    SpectrumResult {
        delta,
        window,
        g_grid: g_grid.to_vec(),
        points,
        singlet_levels: singlet_levels(window.0, window.1),
        options: *opts,
    }
}

/// Greedy nearest-neighbour continuation against the previous two points.
#[derive(Debug, Default)]
struct Labeller {
    next_label: usize,
    previous: Vec<(usize, f64)>,
    before_previous: Vec<(usize, f64)>,
}

impl Labeller {
    fn skip(&mut self) {
        self.before_previous = std::mem::take(&mut self.previous);
    }

    fn assign(&mut self, roots: Vec<Root>) -> Vec<Level> {
        let mut candidates: Vec<(usize, f64)> = self.previous.clone();
        for &(label, e) in &self.before_previous {
            if !candidates.iter().any(|&(l, _)| l == label) {
                candidates.push((label, e));
            }
        }
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (i, root) in roots.iter().enumerate() {
            for (j, &(_, e)) in candidates.iter().enumerate() {
                let d = (root.energy - e).abs();
                if d < MAX_LEVEL_JUMP {
                    pairs.push((d, i, j));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut label_of: Vec<Option<usize>> = vec![None; roots.len()];
        let mut used = vec![false; candidates.len()];
        for (_, i, j) in pairs {
            if label_of[i].is_none() && !used[j] {
                label_of[i] = Some(candidates[j].0);
                used[j] = true;
            }
        }
        let levels: Vec<Level> = roots
            .into_iter()
            .zip(label_of)
            .map(|(root, label)| {
                let label = label.unwrap_or_else(|| {
                    let l = self.next_label;
                    self.next_label += 1;
                    l
                });
                Level { label, root }
            })
            .collect();
        self.before_previous = std::mem::take(&mut self.previous);
        self.previous = levels.iter().map(|l| (l.label, l.root.energy)).collect();
        levels
    }
}

/// A crossing of a labelled level with the parabola `E = m - g^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub parity: Parity,
    pub label: usize,
    pub m: usize,
    pub g: f64,
    pub energy: f64,
}

/// Resolution of the crossing search in `g`.
pub const CROSSING_TOL_G: f64 = 1e-6;

/// Series tolerance for levels that cannot be resolved at the sweep's own.
const CROSSING_LOOSE_TOL: f64 = 1e-6;

/// Widest bracket in `g` still reported when the level becomes unresolvable
/// at the crossing.
const CROSSING_FALLBACK_G: f64 = 1e-4;

/// Sign changes of `E_level(g) - (m - g^2)` along every labelled level,
/// bisected in `g` by re-solving for the level at intermediate couplings.
pub fn level_crossings(result: &SpectrumResult, m: usize) -> Vec<Crossing> {
    let parabola = |g: f64| m as f64 - g * g;
    let mut crossings = Vec::new();
    let parities: Vec<Parity> = {
        let mut v: Vec<Parity> = result.points.iter().map(|p| p.parity).collect();
        v.sort();
        v.dedup();
        v
    };
    for parity in parities {
        for label in result.labels(parity) {
            let track = result.level_track(parity, label);
            for pair in track.windows(2) {
                let (g0, e0) = pair[0];
                let (g1, e1) = pair[1];
                let h0 = e0 - parabola(g0);
                let h1 = e1 - parabola(g1);
                if h0 == 0.0 {
                    crossings.push(Crossing { parity, label, m, g: g0, energy: e0 });
                    continue;
                }
                if h0.signum() == h1.signum() {
                    continue;
                }
                if let Some(g) = bisect_crossing(result, parity, m, (g0, e0, h0), (g1, e1)) {
                    crossings.push(Crossing { parity, label, m, g, energy: parabola(g) });
                }
            }
        }
    }
    crossings.sort_by(|a, b| a.parity.cmp(&b.parity).then(a.g.total_cmp(&b.g)));
    crossings
}

fn bisect_crossing(
    result: &SpectrumResult,
    parity: Parity,
    m: usize,
    lo: (f64, f64, f64),
    hi: (f64, f64),
) -> Option<f64> {
    let parabola = |g: f64| m as f64 - g * g;
    let (mut ga, mut ea, mut ha) = lo;
    let (mut gb, mut eb) = hi;
    while gb - ga > CROSSING_TOL_G {
        let gm = 0.5 * (ga + gb);
        let params = ModelParams::new(result.delta, gm).ok()?;
        let guess = ea + (eb - ea) * (gm - ga) / (gb - ga);
        let half_width = (eb - ea).abs() + 0.02;
        let opts = ZeroOptions { grid_step: result.options.grid_step.min(half_width / 20.0), ..result.options };
        let window = (guess - half_width, guess + half_width);
        let nearest = |opts: &ZeroOptions| {
            find_zeros(&params, parity, window, opts)
                .roots
                .into_iter()
                .min_by(|x, y| (x.energy - guess).abs().total_cmp(&(y.energy - guess).abs()))
        };
        // Next to the crossing the level sits on the pole line, where the
        // series error is amplified and the default tolerance may be out of
        // reach.
        let loose = ZeroOptions { series: opts.series.with_tol(opts.series.tol.max(CROSSING_LOOSE_TOL)), ..opts };
        let Some(root) = nearest(&opts).or_else(|| nearest(&loose)) else {
            return (gb - ga <= CROSSING_FALLBACK_G).then_some(0.5 * (ga + gb));
        };
        let hm = root.energy - parabola(gm);
        if hm == 0.0 {
            return Some(gm);
        }
        if hm.signum() == ha.signum() {
            ga = gm;
            ea = root.energy;
            ha = hm;
        } else {
            gb = gm;
            eb = root.energy;
        }
    }
    Some(0.5 * (ga + gb))
}

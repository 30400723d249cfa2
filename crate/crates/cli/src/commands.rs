//! One function per subcommand, each producing a table plus metadata.

use anyhow::Result;
use dicke2::exceptional::{find_exceptional_g, singlet_spectrum, verify_singlet_pole_not_exceptional, ExceptionalOptions};
use dicke2::oracle::{compare_levels, oracle_spectrum, trusted_top, MatchStatus, OracleSpectrum, DEFAULT_POLE_EXCLUSION};
use dicke2::roots::{find_zeros, pole_grid, sweep_spectrum, ZeroOptions};
use dicke2::series::{domain_lower_bound, g_function};
use dicke2::{Error, ModelParams, Parity};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{Command, RunConfig};
use crate::table::{format_float, Cell, Table};

/// Largest `|E_G − E_oracle|` counted as a match by `verify`.
pub const MATCH_TOL: f64 = 5e-7;

pub const DEFAULT_E_STEP: f64 = 0.01;
pub const DEFAULT_G_STEP: f64 = 0.01;
pub const DEFAULT_E_MAX: f64 = 5.0;

const POLE_GUARD_CAVEAT: &str =
    "G is not evaluated within eps-pole of a pole, so a zero closer than that to a pole is not reported";
const SPURIOUS_ZERO_CAVEAT: &str = "for delta above about 1 - g^2, G also vanishes near E = delta - j (j = 1, 2, ...) \
     where the reference spectrum has no level; use verify to separate them";

pub struct Output {
    pub table: Table,
    pub meta: Map<String, Value>,
    /// Some point or entry failed; its row is kept.
    pub partial: bool,
    /// Human-readable summary for stderr.
    pub notes: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<Output> {
    let mut output = match config.command {
        Command::Gcurve => gcurve(config)?,
        Command::Spectrum => spectrum(config)?,
        Command::Exceptional => exceptional(config)?,
        Command::Oracle => oracle(config)?,
        Command::Verify => verify(config)?,
        Command::Singlet => singlet(config)?,
    };
    let mut meta = common_meta(config);
    meta.append(&mut output.meta);
    output.meta = meta;
    Ok(output)
}

fn float(x: f64) -> Value {
    Cell::Float(x).json_value()
}

fn common_meta(config: &RunConfig) -> Map<String, Value> {
    let mut meta = Map::new();
    if let Some(delta) = config.delta {
        meta.insert("delta".into(), float(delta));
    }
    if !config.couplings.is_empty() {
        meta.insert("g".into(), Value::Array(config.couplings.iter().map(|&g| float(g)).collect()));
    }
    meta.insert("parity".into(), Value::Array(config.parities.iter().map(|p| Value::from(p.as_str())).collect()));
    meta.insert("tol".into(), float(config.series.tol));
    meta.insert("eps-pole".into(), float(config.series.eps_pole));
    meta.insert("max-terms".into(), Value::from(config.series.max_terms));
    meta.insert("n-fock".into(), Value::from(config.n_fock));
    meta
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::InvalidParams(_) => "invalid_params",
        Error::SingletPole { .. } | Error::DisplacedPole { .. } => "pole",
        Error::OutOfDomain { .. } => "out_of_domain",
        Error::NoConvergence { .. } => "no_convergence",
        Error::IterationLimit { .. } => "iteration_limit",
        Error::Unclassified { .. } => "unclassified",
        Error::NotApplicable(_) => "not_applicable",
    }
}

fn describe(e: &Error) -> String {
    format!("{}: {e}", error_code(e))
}

fn e_grid(window: (f64, f64), step: f64) -> Vec<f64> {
    let count = ((window.1 - window.0) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| window.0 + i as f64 * step).collect()
}

fn window_meta(meta: &mut Map<String, Value>, window: (f64, f64)) {
    meta.insert("window".into(), Value::Array(vec![float(window.0), float(window.1)]));
}

/// `E, G_even, G_odd` on a grid; pole samples are flagged with empty values.
fn gcurve(config: &RunConfig) -> Result<Output> {
    let delta = config.delta();
    let step = config.step.unwrap_or(DEFAULT_E_STEP);
    let mut jobs = Vec::new();
    for &g in &config.couplings {
        let params = ModelParams::new(delta, g)?;
        let window = config.window.unwrap_or((domain_lower_bound(&params) + step, DEFAULT_E_MAX));
        jobs.extend(e_grid(window, step).into_iter().map(|e| (params, e)));
    }
    let samples: Vec<[Option<dicke2::Result<f64>>; 2]> = jobs
        .par_iter()
        .map(|(params, e)| {
            Parity::BOTH.map(|parity| {
                config
                    .parities
                    .contains(&parity)
                    .then(|| g_function(params, parity, *e, &config.series).map(|v| v.value))
            })
        })
        .collect();

    let mut table = Table::new(&["g", "E", "G_even", "G_odd", "pole_flag", "error"]);
    let mut partial = false;
    let mut pole_rows = 0;
    for ((params, e), sample) in jobs.iter().zip(samples) {
        let mut values = Vec::new();
        let mut poles = Vec::new();
        let mut errors = Vec::new();
        for (parity, outcome) in Parity::BOTH.iter().zip(sample) {
            values.push(match outcome {
                Some(Ok(v)) => Cell::Float(v),
                Some(Err(err)) if err.is_pole() => {
                    poles.push(parity.as_str());
                    Cell::Empty
                }
                Some(Err(err)) => {
                    errors.push(format!("{parity}: {}", describe(&err)));
                    Cell::Empty
                }
                None => Cell::Empty,
            });
        }
        let flag = match poles.len() {
            0 => "none",
            1 => poles[0],
            _ => "both",
        };
        pole_rows += usize::from(!poles.is_empty());
        partial |= !errors.is_empty();
        let [even, odd]: [Cell; 2] = values.try_into().expect("two parities");
        table.push(vec![
            Cell::Float(params.g()),
            Cell::Float(*e),
            even,
            odd,
            Cell::text(flag),
            Cell::text(errors.join("; ")),
        ]);
    }
    let mut meta = Map::new();
    meta.insert("step".into(), float(step));
    if let Some(window) = config.window {
        window_meta(&mut meta, window);
    }
    meta.insert("caveats".into(), Value::from(vec![POLE_GUARD_CAVEAT]));
    let notes = vec![format!("{} samples, {pole_rows} at a pole", table.rows.len())];
    Ok(Output { table, meta, partial, notes })
}

fn zero_options(config: &RunConfig) -> ZeroOptions {
    let mut opts = ZeroOptions { series: config.series, ..ZeroOptions::default() };
    if let Some(step) = config.step {
        opts.grid_step = step;
    }
    if let Some(tol_e) = config.tol_e {
        opts.tol_e = tol_e;
    }
    opts
}

fn nearest_distance(levels: &[f64], e: f64) -> Option<f64> {
    levels.iter().map(|l| (l - e).abs()).reduce(f64::min)
}

fn default_window(config: &RunConfig) -> (f64, f64) {
    config.window.unwrap_or((-1.0, DEFAULT_E_MAX))
}

/// The window with its bottom raised to where `G` is defined.
fn searchable(window: (f64, f64), params: &ModelParams) -> (f64, f64) {
    (window.0.max(domain_lower_bound(params)), window.1)
}

fn reference(config: &RunConfig, g: f64, window: (f64, f64)) -> dicke2::Result<OracleSpectrum> {
    let hi = window.1.min(trusted_top(config.n_fock));
    oracle_spectrum(config.delta(), g, config.n_fock, (window.0, hi), false)
}

/// Zeros per coupling and parity, plus singlet lines `E = n` and the lines
/// `E = m − g²` for overlays.
fn spectrum(config: &RunConfig) -> Result<Output> {
    let delta = config.delta();
    let window = default_window(config);
    let opts = zero_options(config);
    let result = sweep_spectrum(delta, &config.couplings, &config.parities, window, &opts);

    let references: Vec<Option<dicke2::Result<OracleSpectrum>>> = config
        .couplings
        .par_iter()
        .map(|&g| config.verify.then(|| reference(config, g, (window.0 - 0.5, window.1 + 0.5))))
        .collect();

    let mut columns = vec!["g", "parity", "kind", "level_index", "E", "error"];
    if config.verify {
        columns.insert(5, "oracle_deviation");
    }
    let mut table = Table::new(&columns);
    let mut partial = false;
    let mut max_deviation: Option<f64> = None;
    let push = |table: &mut Table, cells: [Cell; 5], deviation: Option<Cell>, error: Cell| {
        let mut row = cells.to_vec();
        if config.verify {
            row.push(deviation.unwrap_or(Cell::Empty));
        }
        row.push(error);
        table.push(row);
    };
    for (&g, reference) in config.couplings.iter().zip(&references) {
        let reference = match reference {
            Some(Err(e)) => {
                partial = true;
                push(
                    &mut table,
                    [Cell::Float(g), Cell::Empty, Cell::text("error"), Cell::Empty, Cell::Empty],
                    None,
                    Cell::text(format!("reference: {}", describe(e))),
                );
                None
            }
            Some(Ok(s)) => Some(s),
            None => None,
        };
        for point in result.points.iter().filter(|p| p.g == g) {
            let parity = Cell::text(point.parity.as_str());
            if let Some(e) = &point.error {
                partial = true;
                push(
                    &mut table,
                    [Cell::Float(g), parity.clone(), Cell::text("error"), Cell::Empty, Cell::Empty],
                    None,
                    Cell::text(describe(e)),
                );
            }
            let levels = reference.map(|s| s.energies(point.parity));
            for level in &point.levels {
                let deviation = levels.as_ref().and_then(|l| nearest_distance(l, level.root.energy));
                if let Some(d) = deviation {
                    max_deviation = Some(max_deviation.map_or(d, |m| m.max(d)));
                }
                push(
                    &mut table,
                    [
                        Cell::Float(g),
                        parity.clone(),
                        Cell::text("regular"),
                        Cell::int(level.label),
                        Cell::Float(level.root.energy),
                    ],
                    Some(Cell::float(deviation)),
                    Cell::text(""),
                );
            }
            for failure in &point.failures {
                partial = true;
                push(
                    &mut table,
                    [Cell::Float(g), parity.clone(), Cell::text("error"), Cell::Empty, Cell::Float(failure.energy)],
                    None,
                    Cell::text(describe(&failure.error)),
                );
            }
        }
        for &n in &result.singlet_levels {
            push(
                &mut table,
                [Cell::Float(g), Cell::Empty, Cell::text("singlet"), Cell::int(n as usize), Cell::Float(n)],
                None,
                Cell::text(""),
            );
        }
        let g2 = g * g;
        for m in 0usize.. {
            let e = m as f64 - g2;
            if e > window.1 {
                break;
            }
            if e >= window.0 {
                push(
                    &mut table,
                    [Cell::Float(g), Cell::Empty, Cell::text("exceptional_line"), Cell::int(m), Cell::Float(e)],
                    None,
                    Cell::text(""),
                );
            }
        }
    }

    let mut meta = Map::new();
    window_meta(&mut meta, window);
    meta.insert("step".into(), float(opts.grid_step));
    meta.insert("tol-e".into(), float(opts.tol_e));
    if let Some(d) = max_deviation {
        meta.insert("max-oracle-deviation".into(), float(d));
    }
    meta.insert("caveats".into(), Value::from(vec![POLE_GUARD_CAVEAT, SPURIOUS_ZERO_CAVEAT]));
    let regular = table.rows.iter().filter(|r| r[2] == Cell::text("regular")).count();
    let mut notes = vec![format!("{regular} zeros over {} couplings", config.couplings.len())];
    if let Some(d) = max_deviation {
        notes.push(format!("max oracle deviation {}", format_float(d)));
    }
    Ok(Output { table, meta, partial, notes })
}

/// Roots `g*` of the lifting condition for each `m`, parity and route.
fn exceptional(config: &RunConfig) -> Result<Output> {
    let delta = config.delta();
    let mut jobs = Vec::new();
    for &m in &config.m {
        for &parity in &config.parities {
            for &route in &config.routes {
                jobs.push((m, parity, route));
            }
        }
    }
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(m, parity, route)| {
            let opts = ExceptionalOptions {
                g_step: config.step.unwrap_or(DEFAULT_G_STEP),
                tol_g: config.tol_e.unwrap_or(ExceptionalOptions::default().tol_g),
                route,
                series: config.series,
            };
            find_exceptional_g(delta, parity, m, config.g_range, &opts).map(|points| {
                points
                    .into_iter()
                    .map(|p| {
                        let deviation = config.verify.then(|| {
                            reference(config, p.g_star, (p.energy - 0.5, p.energy + 0.5))
                                .map(|s| nearest_distance(&s.energies(p.parity), p.energy))
                        });
                        (p, deviation)
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect();

    let mut columns = vec!["m", "parity", "route", "g_star", "E_star", "residual", "error"];
    if config.verify {
        columns.insert(6, "oracle_deviation");
    }
    let mut table = Table::new(&columns);
    let mut partial = false;
    let mut notes = Vec::new();
    for (&(m, parity, route), outcome) in jobs.iter().zip(outcomes) {
        let head = [Cell::int(m), Cell::text(parity.as_str()), Cell::text(route.as_str())];
        match outcome {
            Err(e) => {
                partial = true;
                let mut row = head.to_vec();
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
                if config.verify {
                    row.push(Cell::Empty);
                }
                row.push(Cell::text(describe(&e)));
                table.push(row);
            }
            Ok(points) => {
                if points.is_empty() {
                    notes.push(format!(
                        "m={m} {parity} ({}): no root in g in [{}, {}]",
                        route.as_str(),
                        config.g_range.0,
                        config.g_range.1
                    ));
                }
                for (p, deviation) in points {
                    let mut row = head.to_vec();
                    row.extend([Cell::Float(p.g_star), Cell::Float(p.energy), Cell::Float(p.condition_residual)]);
                    let mut error = String::new();
                    if let Some(d) = deviation {
                        match d {
                            Ok(d) => row.push(Cell::float(d)),
                            Err(e) => {
                                partial = true;
                                error = format!("reference: {}", describe(&e));
                                row.push(Cell::Empty);
                            }
                        }
                    }
                    row.push(Cell::text(error));
                    table.push(row);
                }
            }
        }
    }
    let mut meta = Map::new();
    meta.insert("m".into(), Value::from(config.m.clone()));
    meta.insert("g-range".into(), Value::Array(vec![float(config.g_range.0), float(config.g_range.1)]));
    meta.insert("step".into(), float(config.step.unwrap_or(DEFAULT_G_STEP)));
    Ok(Output { table, meta, partial, notes })
}

/// Reference eigenvalues with parity labels.
fn oracle(config: &RunConfig) -> Result<Output> {
    let delta = config.delta();
    let spectra: Vec<(f64, (f64, f64), dicke2::Result<OracleSpectrum>)> = config
        .couplings
        .par_iter()
        .map(|&g| {
            let window = config.window.unwrap_or((-g * g - delta - 1.0, DEFAULT_E_MAX));
            (g, window, oracle_spectrum(delta, g, config.n_fock, window, config.verify))
        })
        .collect();

    let mut columns = vec!["g", "parity", "E", "residual", "parity_expectation", "error"];
    if config.verify {
        columns.insert(5, "truncation_shift");
    }
    let mut table = Table::new(&columns);
    let mut partial = false;
    let mut unclassified = 0;
    let mut max_shift: Option<f64> = None;
    for (g, _, spectrum) in &spectra {
        let mut rows: Vec<(f64, Vec<Cell>)> = Vec::new();
        match spectrum {
            Err(e) => {
                partial = true;
                let mut row = vec![Cell::Float(*g), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty];
                if config.verify {
                    row.push(Cell::Empty);
                }
                row.push(Cell::text(describe(e)));
                table.push(row);
                continue;
            }
            Ok(s) => {
                for level in &s.levels {
                    let mut row = vec![
                        Cell::Float(*g),
                        Cell::text(level.parity.as_str()),
                        Cell::Float(level.energy),
                        Cell::Float(level.residual),
                        Cell::Float(level.expectation),
                    ];
                    if config.verify {
                        row.push(Cell::float(level.shift));
                    }
                    row.push(Cell::text(""));
                    rows.push((level.energy, row));
                }
                if let Some(s) = s.max_shift() {
                    max_shift = Some(max_shift.map_or(s, |m| m.max(s)));
                }
                for &e in &s.unclassified {
                    partial = true;
                    unclassified += 1;
                    let mut row = vec![Cell::Float(*g), Cell::text("unclassified"), Cell::Float(e), Cell::Empty, Cell::Empty];
                    if config.verify {
                        row.push(Cell::Empty);
                    }
                    row.push(Cell::text("unclassified: no definite parity"));
                    rows.push((e, row));
                }
            }
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, row) in rows {
            table.push(row);
        }
    }
    let mut meta = Map::new();
    if let Some((_, window, _)) = spectra.first() {
        if config.window.is_some() {
            window_meta(&mut meta, *window);
        }
    }
    if let Some(s) = max_shift {
        meta.insert("max-truncation-shift".into(), float(s));
    }
    let mut notes = vec![format!("{} levels", table.rows.len())];
    if unclassified > 0 {
        notes.push(format!("{unclassified} levels without definite parity"));
    }
    Ok(Output { table, meta, partial, notes })
}

/// One-to-one matching of `G` zeros with reference levels of the same
/// parity; reference levels within the pole exclusion of a pole line may
/// stay unmatched.
fn verify(config: &RunConfig) -> Result<Output> {
    let delta = config.delta();
    let window = default_window(config);
    let opts = zero_options(config);
    let mut jobs = Vec::new();
    for &g in &config.couplings {
        for &parity in &config.parities {
            jobs.push((ModelParams::new(delta, g)?, parity));
        }
    }
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|(params, parity)| {
            let w = searchable(window, params);
            let search = find_zeros(params, *parity, w, &opts);
            let reference = reference(config, params.g(), w).map(|s| {
                let poles: Vec<f64> =
                    pole_grid(params, *parity, w.0 - 1.0, w.1 + 1.0).iter().map(|p| p.location).collect();
                compare_levels(&search.energies(), &s.energies(*parity), &poles, MATCH_TOL, DEFAULT_POLE_EXCLUSION)
            });
            (search.failures, reference)
        })
        .collect();

    let mut table = Table::new(&["g", "parity", "status", "E_zero", "E_oracle", "deviation", "error"]);
    let mut partial = false;
    let mut counts = [0usize; 4];
    let mut overall: Option<f64> = None;
    for ((params, parity), (failures, comparison)) in jobs.iter().zip(outcomes) {
        let head = [Cell::Float(params.g()), Cell::text(parity.as_str())];
        let mut push = |status: &str, zero: Option<f64>, oracle: Option<f64>, deviation: Option<f64>, error: String| {
            let mut row = head.to_vec();
            row.extend([Cell::text(status), Cell::float(zero), Cell::float(oracle), Cell::float(deviation), Cell::text(error)]);
            table.push(row);
        };
        match comparison {
            Err(e) => {
                partial = true;
                push("error", None, None, None, format!("reference: {}", describe(&e)));
            }
            Ok(c) => {
                for entry in &c.entries {
                    counts[entry.status as usize] += 1;
                    push(entry.status.as_str(), entry.zero, entry.oracle, entry.deviation(), String::new());
                }
                partial |= !c.is_bijective();
                let max = c.max_deviation();
                if let Some(d) = max {
                    overall = Some(overall.map_or(d, |m| m.max(d)));
                }
                push("max_deviation", None, None, max, String::new());
            }
        }
        for failure in failures {
            partial = true;
            push("error", Some(failure.energy), None, None, describe(&failure.error));
        }
    }
    let mut meta = Map::new();
    window_meta(&mut meta, window);
    meta.insert("match-tol".into(), float(MATCH_TOL));
    meta.insert("pole-exclusion".into(), float(DEFAULT_POLE_EXCLUSION));
    for status in [
        MatchStatus::Matched,
        MatchStatus::UnmatchedZero,
        MatchStatus::UnmatchedOracle,
        MatchStatus::ExcludedNearPole,
    ] {
        meta.insert(status.as_str().into(), Value::from(counts[status as usize]));
    }
    if let Some(d) = overall {
        meta.insert("max-deviation".into(), float(d));
    }
    meta.insert("caveats".into(), Value::from(vec![POLE_GUARD_CAVEAT, SPURIOUS_ZERO_CAVEAT]));
    let notes = vec![format!(
        "matched {}, unmatched zeros {}, unmatched oracle levels {}, excluded near poles {}, max deviation {}",
        counts[MatchStatus::Matched as usize],
        counts[MatchStatus::UnmatchedZero as usize],
        counts[MatchStatus::UnmatchedOracle as usize],
        counts[MatchStatus::ExcludedNearPole as usize],
        overall.map_or("n/a".to_string(), format_float),
    )];
    Ok(Output { table, meta, partial, notes })
}

/// `E = n` for `n ≤ n_max`, tagged with the sector whose `G` has a pole
/// there; with `--verify`, the distance to the nearest level of that sector.
fn singlet(config: &RunConfig) -> Result<Output> {
    let levels = singlet_spectrum(config.n_max);
    let probe = config.verify.then(|| (config.delta(), config.couplings[0]));
    let reports: Vec<Option<dicke2::Result<_>>> = levels
        .par_iter()
        .map(|level| probe.map(|(delta, g)| verify_singlet_pole_not_exceptional(delta, level.n, g)))
        .collect();

    let mut columns = vec!["n", "E", "pole_parity", "error"];
    if config.verify {
        columns.splice(3..3, ["nearest_level", "min_distance"]);
    }
    let mut table = Table::new(&columns);
    let mut partial = false;
    for (level, report) in levels.iter().zip(reports) {
        let parity = if level.n % 2 == 0 { Parity::Even } else { Parity::Odd };
        let mut row = vec![Cell::int(level.n), Cell::Float(level.energy), Cell::text(parity.as_str())];
        let mut error = String::new();
        match report {
            None => {}
            Some(Ok(r)) => {
                row.push(Cell::float(r.nearest));
                row.push(Cell::float(r.nearest.map(|_| r.min_distance)));
            }
            Some(Err(e)) => {
                partial = true;
                error = describe(&e);
                row.extend([Cell::Empty, Cell::Empty]);
            }
        }
        row.push(Cell::text(error));
        table.push(row);
    }
    let mut meta = Map::new();
    meta.insert("n-max".into(), Value::from(config.n_max));
    let notes = vec![format!("{} singlet levels", table.rows.len())];
    Ok(Output { table, meta, partial, notes })
}

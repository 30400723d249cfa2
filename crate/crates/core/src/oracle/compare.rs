//! One-to-one comparison of `G` zeros with oracle eigenvalues of the same
//! parity.

/// Oracle levels closer than this to a pole line are not required to have a
/// `G` zero: the pole guard may hide one, or it is a lifted pole.
pub const DEFAULT_POLE_EXCLUSION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchStatus {
    Matched,
    /// A zero with no oracle eigenvalue within the tolerance.
    UnmatchedZero,
    /// An oracle eigenvalue away from every pole with no zero.
    UnmatchedOracle,
    /// An oracle eigenvalue near a pole line with no zero.
    ExcludedNearPole,
}

impl MatchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchStatus::Matched => "matched",
            MatchStatus::UnmatchedZero => "unmatched_zero",
            MatchStatus::UnmatchedOracle => "unmatched_oracle",
            MatchStatus::ExcludedNearPole => "excluded_near_pole",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchEntry {
    pub zero: Option<f64>,
    pub oracle: Option<f64>,
    pub status: MatchStatus,
}

impl MatchEntry {
    pub fn deviation(&self) -> Option<f64> {
        match (self.zero, self.oracle) {
            (Some(z), Some(o)) => Some((z - o).abs()),
            _ => None,
        }
    }

    /// Ordering key: the energy the entry sits at.
    pub fn energy(&self) -> f64 {
        self.zero.or(self.oracle).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Comparison {
    /// Sorted by energy.
    pub entries: Vec<MatchEntry>,
}

impl Comparison {
    pub fn max_deviation(&self) -> Option<f64> {
        self.entries.iter().filter_map(|e| e.deviation()).reduce(f64::max)
    }

    pub fn count(&self, status: MatchStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn is_bijective(&self) -> bool {
        self.count(MatchStatus::UnmatchedZero) == 0 && self.count(MatchStatus::UnmatchedOracle) == 0
    }
}

/// Pairs each zero with the nearest unused oracle level within `tol`,
/// closest pairs first, so no oracle level is claimed twice.
pub fn compare_levels(zeros: &[f64], oracle: &[f64], poles: &[f64], tol: f64, pole_exclusion: f64) -> Comparison {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &z) in zeros.iter().enumerate() {
        for (j, &o) in oracle.iter().enumerate() {
            let d = (z - o).abs();
            if d <= tol {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut zero_used = vec![false; zeros.len()];
    let mut oracle_used = vec![false; oracle.len()];
    let mut entries = Vec::new();
    for (_, i, j) in candidates {
        if zero_used[i] || oracle_used[j] {
            continue;
        }
        zero_used[i] = true;
        oracle_used[j] = true;
        entries.push(MatchEntry { zero: Some(zeros[i]), oracle: Some(oracle[j]), status: MatchStatus::Matched });
    }
    for (i, &z) in zeros.iter().enumerate() {
        if !zero_used[i] {
            entries.push(MatchEntry { zero: Some(z), oracle: None, status: MatchStatus::UnmatchedZero });
        }
    }
    for (j, &o) in oracle.iter().enumerate() {
        if oracle_used[j] {
            continue;
        }
        let status = if poles.iter().any(|p| (p - o).abs() < pole_exclusion) {
            MatchStatus::ExcludedNearPole
        } else {
            MatchStatus::UnmatchedOracle
        };
        entries.push(MatchEntry { zero: None, oracle: Some(o), status });
    }
    entries.sort_by(|a, b| a.energy().total_cmp(&b.energy()));
    Comparison { entries }
}

use crate::model::{ModelParams, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PoleKind {
    /// `E = n - g^2`, eigenvalues of the uncoupled displaced oscillator.
    Displaced,
    /// `E = n` at parity-matched `n`, the spin-singlet levels.
    Singlet,
}

impl PoleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PoleKind::Displaced => "displaced",
            PoleKind::Singlet => "singlet",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub kind: PoleKind,
    pub index: usize,
    pub location: f64,
}

/// A pole together with its distance from some energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleDistance {
    pub pole: Pole,
    pub distance: f64,
}

/// All poles of `G` for this sector inside the closed window `[lo, hi]`,
/// sorted by location. Coincident poles of different kinds (integer `g^2`)
/// are both kept, displaced first.
pub fn pole_grid(params: &ModelParams, parity: Parity, lo: f64, hi: f64) -> Vec<Pole> {
    let g2 = params.g2();
    let mut poles = Vec::new();
    let first = (lo + g2).ceil().max(0.0) as usize;
    let mut n = first;
    while n as f64 - g2 <= hi {
        let location = n as f64 - g2;
        if location >= lo {
            poles.push(Pole { kind: PoleKind::Displaced, index: n, location });
        }
        n += 1;
    }
    let mut n = lo.ceil().max(0.0) as usize;
    while n as f64 <= hi {
        if parity.matches(n) {
            poles.push(Pole { kind: PoleKind::Singlet, index: n, location: n as f64 });
        }
        n += 1;
    }
    poles.sort_by(|a, b| a.location.total_cmp(&b.location).then(a.kind.cmp(&b.kind)));
    poles
}

/// The pole of either family closest to `energy`.
pub fn nearest_pole(params: &ModelParams, parity: Parity, energy: f64) -> PoleDistance {
    let g2 = params.g2();
    let n_disp = (energy + g2).round().max(0.0);
    let displaced = Pole { kind: PoleKind::Displaced, index: n_disp as usize, location: n_disp - g2 };

    let mut n_sing = energy.round().max(0.0) as usize;
    if !parity.matches(n_sing) {
        // step to the closer parity-matched neighbour
        n_sing = if energy > n_sing as f64 || n_sing == 0 { n_sing + 1 } else { n_sing - 1 };
    }
    let singlet = Pole { kind: PoleKind::Singlet, index: n_sing, location: n_sing as f64 };

    let dd = (energy - displaced.location).abs();
    let ds = (energy - singlet.location).abs();
    if dd <= ds {
        PoleDistance { pole: displaced, distance: dd }
    } else {
        PoleDistance { pole: singlet, distance: ds }
    }
}

//! The single-variable spectral function `G_±(E) = Σ (u_n ∓ w_n) g^n`,
//! whose zeros in each parity sector are the regular eigenvalues.

use crate::error::{Error, Result};
use crate::model::{ModelParams, Parity, SeriesConfig};
use crate::roots::poles::{nearest_pole, PoleDistance};
use crate::series::displaced::{check_displaced_poles, displaced_recurrence_unchecked, initial_terms, DisplacedSeed};
use crate::series::fock::{check_singlet_poles, fock_recurrence_unchecked};
use crate::series::tail::magnitude;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GEvaluation {
    pub value: f64,
    /// Number of terms in each series at the accepted truncation.
    pub terms_used: usize,
    /// `|G(N) - G(N/2)|` plus a round-off floor.
    pub tail_estimate: f64,
    pub nearest_pole: PoleDistance,
}

/// Lower end of the energy range where every series converges:
/// the seed sums need `E > -g^2` and the `G` series `E > -1`.
pub fn domain_lower_bound(params: &ModelParams) -> f64 {
    (-params.g2()).max(-1.0)
}

fn check_domain(params: &ModelParams, parity: Parity, energy: f64, n_max: usize, eps_pole: f64) -> Result<()> {
    if !energy.is_finite() {
        return Err(Error::OutOfDomain { energy, lower: domain_lower_bound(params) });
    }
    if (energy + params.g2()).abs() < eps_pole {
        return Err(Error::DisplacedPole { n: 0, energy });
    }
    let lower = domain_lower_bound(params);
    if energy <= lower {
        return Err(Error::OutOfDomain { energy, lower });
    }
    check_singlet_poles(parity, energy, n_max, eps_pole)?;
    check_displaced_poles(params, energy, n_max, eps_pole)
}

/// `G` with every series truncated at index `n_terms`, together with the
/// estimate obtained by comparing against truncation at `n_terms / 2`.
pub fn g_function_at(
    params: &ModelParams,
    parity: Parity,
    energy: f64,
    n_terms: usize,
    eps_pole: f64,
) -> Result<GEvaluation> {
    check_domain(params, parity, energy, n_terms, eps_pole)?;
    let n_terms = n_terms.max(2);
    Ok(evaluate_unchecked(params, parity, energy, n_terms))
}

fn evaluate_unchecked(params: &ModelParams, parity: Parity, energy: f64, n: usize) -> GEvaluation {
    let fock = fock_recurrence_unchecked(params, parity, energy, n);
    let at = |upto: usize| {
        let seed = DisplacedSeed::from_prefix(params, &fock, upto);
        let coeffs = displaced_recurrence_unchecked(params, parity, energy, upto, &seed);
        (coeffs.g_sum(), magnitude(&coeffs.g_terms()))
    };
    let (value, scale) = at(n);
    let (half, _) = at(n / 2);
    let floor = 16.0 * f64::EPSILON * scale;
    let mut tail_estimate = (value - half).abs() + floor;
    if !tail_estimate.is_finite() {
        tail_estimate = f64::INFINITY;
    }
    GEvaluation { value, terms_used: n + 1, tail_estimate, nearest_pole: nearest_pole(params, parity, energy) }
}

/// Adaptive evaluation: the truncation doubles from 256 until the tail
/// estimate is below `tol * max(1, |G|)` or the term cap is reached.
pub fn g_function(params: &ModelParams, parity: Parity, energy: f64, cfg: &SeriesConfig) -> Result<GEvaluation> {
    check_domain(params, parity, energy, cfg.max_terms, cfg.eps_pole)?;
    let mut n = initial_terms(cfg.max_terms);
    loop {
        let eval = evaluate_unchecked(params, parity, energy, n);
        if eval.tail_estimate <= cfg.tol * eval.value.abs().max(1.0) {
            return Ok(eval);
        }
        if n >= cfg.max_terms {
            return Err(Error::NoConvergence { terms: n + 1, estimate: eval.tail_estimate });
        }
        n = (2 * n).min(cfg.max_terms);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::poles::PoleKind;
    use crate::series::displaced::displaced_recurrence;
    use crate::series::fock::fock_recurrence;

    fn params() -> ModelParams {
        ModelParams::new(0.5, 0.6).unwrap()
    }

    #[test]
    fn sign_convention() {
        // Even sums u - w, odd sums u + w, over the same (u, w) when the
        // two sectors share the seed construction.
        let p = params();
        let cfg = SeriesConfig::default();
        for parity in Parity::BOTH {
            let e = 0.9;
            let fock = fock_recurrence(&p, parity, e, 4096, 1e-8).unwrap();
            let seed = DisplacedSeed::from_fock(&p, &fock);
            let d = displaced_recurrence(&p, parity, e, 4096, &seed, 1e-8).unwrap();
            let manual: f64 = crate::series::tail::extrapolated_sum(
                &d.scaled_u()
                    .iter()
                    .zip(d.scaled_w())
                    .map(|(u, w)| if parity == Parity::Even { u - w } else { u + w })
                    .collect::<Vec<_>>(),
                2.0 + e,
            );
            let g = g_function(&p, parity, e, &cfg).unwrap();
            assert!((g.value - manual).abs() < 1e-9 * manual.abs().max(1.0));
        }
    }

    #[test]
    fn linear_in_leading_coefficient() {
        let p = params();
        let c = -3.75;
        for parity in Parity::BOTH {
            let e = 1.3;
            let fock = fock_recurrence(&p, parity, e, 2048, 1e-8).unwrap();
            let seed = DisplacedSeed::from_fock(&p, &fock);
            let scaled = DisplacedSeed { u0: c * seed.u0, v0: c * seed.v0, w0: c * seed.w0, ..seed };
            let g1 = displaced_recurrence(&p, parity, e, 2048, &seed, 1e-8).unwrap().g_sum();
            let g2 = displaced_recurrence(&p, parity, e, 2048, &scaled, 1e-8).unwrap().g_sum();
            assert!((g2 / g1 - c).abs() < 1e-12);
        }
    }

    #[test]
    fn diverges_next_to_displaced_pole() {
        let p = params();
        let pole = 1.0 - p.g2();
        for parity in Parity::BOTH {
            for side in [-1.0, 1.0] {
                let g = g_function(&p, parity, pole + side * 1e-5, &SeriesConfig::default()).unwrap();
                assert!(g.value.abs() > 1e3, "{parity} {side}: {}", g.value);
                assert_eq!(g.nearest_pole.pole.kind, PoleKind::Displaced);
                assert_eq!(g.nearest_pole.pole.index, 1);
            }
        }
    }

    #[test]
    fn pole_guard_errors() {
        let p = params();
        let cfg = SeriesConfig::default();
        assert!(matches!(
            g_function(&p, Parity::Even, 2.0 + 5e-9, &cfg),
            Err(Error::SingletPole { n: 2, .. })
        ));
        assert!(matches!(
            g_function(&p, Parity::Odd, 1.0 - p.g2(), &cfg),
            Err(Error::DisplacedPole { n: 1, .. })
        ));
        assert!(matches!(g_function(&p, Parity::Odd, -0.5, &cfg), Err(Error::OutOfDomain { .. })));
        assert!(matches!(g_function(&p, Parity::Odd, -p.g2(), &cfg), Err(Error::DisplacedPole { n: 0, .. })));
    }

    #[test]
    fn zero_splitting_decouples_the_w_chain() {
        // With Δ = 0, v ≡ 0 and u_n = 0 for n ≥ 1: G = u0 - s Σ w_n g^n with
        // w_n from its own two-term chain seeded by w0 = s Σ a_k g^k.
        let p = ModelParams::new(0.0, 0.6).unwrap();
        let g2 = p.g2();
        for parity in Parity::BOTH {
            let e = 0.7;
            let s = parity.sign();
            let fock = fock_recurrence(&p, parity, e, 4096, 1e-8).unwrap();
            let a = fock.scaled_a();
            let u0 = crate::series::tail::extrapolated_sum(a, 1.0 + e + g2);
            let alt: Vec<f64> = a.iter().enumerate().map(|(k, c)| if k % 2 == 0 { *c } else { -*c }).collect();
            let w0 = s * crate::series::tail::extrapolated_sum(&alt, 1.0 + e + g2);
            let mut w = vec![w0];
            for n in 1..200usize {
                let nf = n as f64;
                let w2 = if n >= 2 { w[n - 2] } else { 0.0 };
                w.push(-((e - 3.0 * g2 - nf + 1.0) * w[n - 1] + 2.0 * g2 * w2) / (2.0 * nf));
            }
            let direct = u0 - s * w.iter().sum::<f64>();
            let g = g_function(&p, parity, e, &SeriesConfig::default()).unwrap();
            assert!((g.value - direct).abs() < 1e-9 * direct.abs().max(1.0), "{} vs {direct}", g.value);
        }
    }

    #[test]
    fn deterministic() {
        let p = params();
        let cfg = SeriesConfig::default();
        let a = g_function(&p, Parity::Even, 0.4321, &cfg).unwrap();
        let b = g_function(&p, Parity::Even, 0.4321, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}

use crate::config::{EnvConfig, N_CONTAINERS, N_MATERIALS, RESIDUAL};
use crate::env::input::MaterialBatch;
use crate::env::Action;
use crate::error::{Error, Result};
use crate::rng::{noise_draw, Stream};

/// Station accuracy for `material` under `mode` at relative belt load `load`.
///
/// Boosted materials start from `1 - boost_noise`, the rest from
/// `baseline_accuracy`; both are scaled by `1 - degradation_coeff * load²`
/// and shifted by `jitter`, then clamped to `[0, 1]`.
pub fn effective_accuracy(
    mode: Action,
    material: usize,
    load: f64,
    config: &EnvConfig,
    jitter: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&load) {
        return Err(Error::contract(format!(
            "load fraction {load} outside [0, 1]"
        )));
    }
    if material >= N_MATERIALS {
        return Err(Error::contract(format!(
            "material index {material} out of range"
        )));
    }
    Ok(accuracy(mode, material, load, config, jitter))
}

#[inline]
fn accuracy(mode: Action, material: usize, load: f64, config: &EnvConfig, jitter: f64) -> f64 {
    let ceiling = if mode.boosts(material) {
        1.0 - config.boost_noise
    } else {
        config.baseline_accuracy
    };
    (ceiling * (1.0 - config.degradation_coeff * load * load) + jitter).clamp(0.0, 1.0)
}

/// Jitter for station `material` at step `t`, uniform in `±accuracy_jitter`.
#[inline]
pub fn station_jitter(config: &EnvConfig, seed: u64, t: i64, material: usize) -> f64 {
    (2.0 * noise_draw(seed, Stream::Jitter, t, material as u64) - 1.0) * config.accuracy_jitter
}

#[derive(Debug, Clone, PartialEq)]
pub struct SortOutcome {
    /// `deposits[c][j]`: units of true material `j` placed in container `c`.
    pub deposits: [[f64; N_MATERIALS]; N_CONTAINERS],
    /// Realized accuracy of each station.
    pub accuracies: [f64; N_MATERIALS],
    pub load: f64,
}

impl SortOutcome {
    pub fn total(&self) -> f64 {
        self.deposits.iter().flatten().sum()
    }
}

/// Run `batch` through stations A, B, C, D in order; whatever is left goes to E.
///
/// Station `m` captures `a_m` of the residual of material `m`. Foreign
/// material `j` is mistaken for `m` at rate `(1 - a_j) * contamination_coeff`,
/// so a material that is recognized poorly contaminates every container
/// downstream of its own station and upstream of it alike.
pub fn sort_batch(
    batch: &MaterialBatch,
    mode: Action,
    seed: u64,
    t: i64,
    config: &EnvConfig,
) -> SortOutcome {
    let load = batch.load_fraction(config);
    let mut residual = batch.quantities;
    let mut deposits = [[0.0; N_MATERIALS]; N_CONTAINERS];
    let mut accuracies = [0.0; N_MATERIALS];
    for station in 0..N_MATERIALS {
        accuracies[station] = accuracy(
            mode,
            station,
            load,
            config,
            station_jitter(config, seed, t, station),
        );
    }
    for station in 0..N_MATERIALS {
        let a = accuracies[station];
        for (j, r) in residual.iter_mut().enumerate() {
            let rate = if j == station {
                a
            } else {
                (1.0 - accuracies[j]) * config.contamination_coeff
            };
            let taken = rate * *r;
            deposits[station][j] = taken;
            *r -= taken;
        }
    }
    deposits[RESIDUAL] = residual;
    SortOutcome {
        deposits,
        accuracies,
        load,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> EnvConfig {
        EnvConfig {
            accuracy_jitter: 0.0,
            degradation_coeff: 0.0,
            ..EnvConfig::default()
        }
    }

    #[test]
    fn accuracy_examples() {
        let c = EnvConfig::default();
        assert_eq!(
            effective_accuracy(Action::BoostBD, 0, 0.0, &c, 0.0).unwrap(),
            0.80
        );
        assert_eq!(
            effective_accuracy(Action::BoostAC, 0, 0.0, &c, 0.0).unwrap(),
            0.98
        );
        let full = effective_accuracy(Action::BoostAC, 1, 1.0, &c, 0.0).unwrap();
        assert!((full - 0.56).abs() < 1e-15);
        assert!(effective_accuracy(Action::BoostAC, 1, 1.01, &c, 0.0).is_err());
        assert!(effective_accuracy(Action::BoostAC, 1, -0.1, &c, 0.0).is_err());
    }

    #[test]
    fn accuracy_non_increasing_in_load() {
        let c = EnvConfig::default();
        for mode in [Action::BoostAC, Action::BoostBD] {
            for m in 0..4 {
                for eta in [-0.02, 0.0, 0.02] {
                    let mut prev = f64::INFINITY;
                    for k in 0..=100 {
                        let a = effective_accuracy(mode, m, k as f64 / 100.0, &c, eta).unwrap();
                        assert!(a <= prev);
                        prev = a;
                    }
                }
            }
        }
    }

    #[test]
    fn empty_batch_deposits_nothing() {
        let out = sort_batch(
            &MaterialBatch::empty(0),
            Action::BoostAC,
            1,
            0,
            &EnvConfig::default(),
        );
        assert!(out.deposits.iter().flatten().all(|&d| d == 0.0));
    }

    #[test]
    fn single_material_hand_trace() {
        // A = 10, mode 0, no jitter, no load loss:
        //   station A (a_A = 0.98): 9.8 captured, 0.2 left
        //   B, C, D each skim (1 - a_A) * 0.25 = 0.005 of the running residual:
        //   station B: 0.005 * 0.2        = 0.001        -> 0.199 left
        //   station C: 0.005 * 0.199      = 0.000995     -> 0.198005 left
        //   station D: 0.005 * 0.198005   = 0.000990025  -> 0.197014975 to E
        let batch = MaterialBatch {
            quantities: [10.0, 0.0, 0.0, 0.0],
            created_at: 0,
        };
        let out = sort_batch(&batch, Action::BoostAC, 9, 0, &quiet());
        let expect = [9.8, 0.001, 0.000995, 0.000990025, 0.197014975];
        for c in 0..5 {
            assert!(
                (out.deposits[c][0] - expect[c]).abs() < 1e-12,
                "container {c}: {}",
                out.deposits[c][0]
            );
            assert!(out.deposits[c][1..].iter().all(|&d| d == 0.0));
        }
        assert!((out.total() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn contamination_follows_foreign_accuracy() {
        // A and C boosted: A and C barely contaminate, B and D do at 5%
        let batch = MaterialBatch {
            quantities: [0.0, 40.0, 0.0, 0.0],
            created_at: 0,
        };
        let out = sort_batch(&batch, Action::BoostAC, 0, 0, &quiet());
        assert!((out.deposits[0][1] - 40.0 * 0.2 * 0.25).abs() < 1e-12);
        let batch = MaterialBatch {
            quantities: [40.0, 0.0, 0.0, 0.0],
            created_at: 0,
        };
        let boosted = sort_batch(&batch, Action::BoostAC, 0, 0, &quiet());
        let plain = sort_batch(&batch, Action::BoostBD, 0, 0, &quiet());
        assert!(boosted.deposits[1][0] < plain.deposits[1][0]);
    }

    #[test]
    fn no_contamination_means_pure_containers() {
        let c = EnvConfig {
            contamination_coeff: 0.0,
            ..EnvConfig::default()
        };
        let batch = MaterialBatch {
            quantities: [12.0, 30.0, 7.5, 22.0],
            created_at: 0,
        };
        let out = sort_batch(&batch, Action::BoostBD, 4, 3, &c);
        for m in 0..4 {
            for j in 0..4 {
                if j != m {
                    assert_eq!(out.deposits[m][j], 0.0);
                }
            }
        }
    }

    #[test]
    fn equal_mix_unboosted_purity_near_084() {
        // every station at baseline: A captures 0.8 of A plus 0.05 of each other
        let c = EnvConfig {
            baseline_accuracy: 0.8,
            boost_noise: 0.2,
            ..quiet()
        };
        let batch = MaterialBatch {
            quantities: [25.0; 4],
            created_at: 0,
        };
        let out = sort_batch(&batch, Action::BoostAC, 0, 0, &c);
        let a = out.deposits[0];
        let purity = a[0] / a.iter().sum::<f64>();
        assert!((purity - 0.8 / 0.95).abs() < 1e-12);
    }
}

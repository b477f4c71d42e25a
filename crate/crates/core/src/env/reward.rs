use crate::config::{EnvConfig, N_CONTAINERS, N_MATERIALS};
use crate::env::plant::Container;

/// Reward for one purity deviation: linear above the threshold, scaled by
/// `penalty` below it.
#[inline]
pub fn deviation_reward(deviation: f64, penalty: f64) -> f64 {
    if deviation >= 0.0 {
        deviation
    } else {
        penalty * deviation
    }
}

/// Purity minus threshold for container `m` (A–D); 0 for an empty container.
pub fn purity_deviation(container: &Container, m: usize, config: &EnvConfig) -> f64 {
    container
        .purity(m)
        .map_or(0.0, |p| p - config.purity_thresholds[m])
}

/// Step reward: sum of deviation rewards over the non-empty containers A–D.
pub fn compute_reward(containers: &[Container; N_CONTAINERS], config: &EnvConfig) -> f64 {
    (0..N_MATERIALS)
        .filter(|&m| containers[m].total() > 0.0)
        .map(|m| {
            deviation_reward(
                purity_deviation(&containers[m], m, config),
                config.penalty_factor,
            )
        })
        .fold(0.0, |acc, r| acc + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_purity(m: usize, designated: f64, other: f64) -> Container {
        let mut c = Container::default();
        c.contents[m] = designated;
        c.contents[(m + 1) % N_MATERIALS] = other;
        c
    }

    #[test]
    fn at_threshold_is_zero() {
        let config = EnvConfig::default();
        let mut cs = [Container::default(); N_CONTAINERS];
        for m in 0..4 {
            let thr = config.purity_thresholds[m];
            cs[m] = with_purity(m, thr, 1.0 - thr);
        }
        assert_eq!(compute_reward(&cs, &config).to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn single_container_asymmetry() {
        let config = EnvConfig::default();
        let mut cs = [Container::default(); N_CONTAINERS];
        cs[0] = with_purity(0, 0.90, 0.10);
        assert!((compute_reward(&cs, &config) - 0.05).abs() < 1e-12);
        cs[0] = with_purity(0, 0.80, 0.20);
        assert!((compute_reward(&cs, &config) + 0.25).abs() < 1e-12);
    }

    #[test]
    fn four_containers_above_threshold() {
        let config = EnvConfig::default();
        let mut cs = [Container::default(); N_CONTAINERS];
        for (m, p) in [0.90, 0.85, 0.80, 0.75].into_iter().enumerate() {
            cs[m] = with_purity(m, p, 1.0 - p);
        }
        assert!((compute_reward(&cs, &config) - 0.20).abs() < 1e-12);
    }

    #[test]
    fn empty_and_residual_containers_ignored() {
        let config = EnvConfig::default();
        let mut cs = [Container::default(); N_CONTAINERS];
        cs[4].contents = [50.0, 10.0, 3.0, 1.0];
        assert_eq!(compute_reward(&cs, &config).to_bits(), 0.0f64.to_bits());
    }
}

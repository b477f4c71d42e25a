//! The 33-component observation vector.
//!
//! | index   | content                                              | range          |
//! |---------|------------------------------------------------------|----------------|
//! | 0–3     | newest batch quantities / `batch_max`                | [0, 1]         |
//! | 4       | newest batch total / `batch_max`                     | [0, 1]         |
//! | 5–8     | head batch (sorted next) quantities / `batch_max`    | [0, 1]         |
//! | 9       | head batch load fraction                             | [0, 1]         |
//! | 10–13   | station accuracies realized on the previous step     | [0, 1]         |
//! | 14–17   | container A–D totals / `pressing_threshold`          | [0, cap/thr]   |
//! | 18      | container E total / `pressing_threshold`             | [0, ∞)         |
//! | 19–22   | purities A–D (an empty container reports its threshold) | [0, 1]      |
//! | 23–26   | purity deviations A–D                                | [-1, 1]        |
//! | 27–28   | press remaining busy steps / `press_duration`        | [0, 1]         |
//! | 29      | previous action (0 before the first step)            | {0, 1}         |
//! | 30      | t / `episode_len`                                    | [0, 1]         |
//! | 31–32   | sin, cos of the seasonal phase 2πt / period          | [-1, 1]        |
//!
//! The batch totals can exceed `batch_max` only through rounding, so the
//! [0, 1] bounds on 0–9 are checked with a 1e-12 slack.

use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::{EnvConfig, N_MATERIALS, RESIDUAL};
use crate::env::reward::purity_deviation;
use crate::env::EnvState;

pub const OBS_DIM: usize = 33;

pub const NEW_BATCH: usize = 0;
pub const NEW_TOTAL: usize = 4;
pub const HEAD_BATCH: usize = 5;
pub const HEAD_LOAD: usize = 9;
pub const ACCURACIES: usize = 10;
pub const FILL: usize = 14;
pub const PURITY: usize = 19;
pub const DEVIATION: usize = 23;
pub const PRESS_BUSY: usize = 27;
pub const LAST_ACTION: usize = 29;
pub const TIME: usize = 30;
pub const SEASON_SIN: usize = 31;
pub const SEASON_COS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation(pub [f64; OBS_DIM]);

impl Observation {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// First index whose value falls outside its documented range.
    pub fn out_of_range(&self, config: &EnvConfig) -> Option<usize> {
        const SLACK: f64 = 1e-12;
        (0..OBS_DIM).find(|&i| {
            let (lo, hi) = documented_range(i, config);
            let v = self.0[i];
            !(v >= lo - SLACK && v <= hi + SLACK)
        })
    }
}

impl std::ops::Index<usize> for Observation {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Inclusive `(low, high)` bounds for component `i`.
pub fn documented_range(i: usize, config: &EnvConfig) -> (f64, f64) {
    match i {
        0..=13 => (0.0, 1.0),
        14..=17 => (0.0, config.container_capacity / config.pressing_threshold),
        18 => (0.0, f64::INFINITY),
        19..=22 => (0.0, 1.0),
        23..=26 => (-1.0, 1.0),
        27..=30 => (0.0, 1.0),
        31 | 32 => (-1.0, 1.0),
        _ => panic!("observation index {i} out of range"),
    }
}

pub fn build_observation(state: &EnvState) -> Observation {
    let config = state.config();
    let mut o = [0.0; OBS_DIM];
    let scale = config.batch_max;

    if let Some(newest) = state.newest_batch() {
        for m in 0..N_MATERIALS {
            o[NEW_BATCH + m] = newest.quantities[m] / scale;
        }
        o[NEW_TOTAL] = newest.total() / scale;
    }
    let head = state.head_batch();
    for m in 0..N_MATERIALS {
        o[HEAD_BATCH + m] = head.quantities[m] / scale;
    }
    o[HEAD_LOAD] = head.load_fraction(config);
    o[ACCURACIES..ACCURACIES + N_MATERIALS].copy_from_slice(state.last_accuracies());

    let plant = state.plant();
    for (c, container) in plant.containers.iter().enumerate() {
        o[FILL + c] = container.total() / config.pressing_threshold;
    }
    for m in 0..N_MATERIALS {
        let container = &plant.containers[m];
        o[PURITY + m] = container.purity(m).unwrap_or(config.purity_thresholds[m]);
        o[DEVIATION + m] = purity_deviation(container, m, config);
    }
    debug_assert_eq!(FILL + RESIDUAL, 18);
    let t = state.t();
    for (p, press) in plant.presses.iter().enumerate() {
        o[PRESS_BUSY + p] = press.remaining(t) as f64 / config.press_duration as f64;
    }
    o[LAST_ACTION] = state.last_action().map_or(0.0, |a| a.bit() as f64);
    o[TIME] = t as f64 / config.episode_len as f64;
    let phase = 2.0 * std::f64::consts::PI * t as f64 / config.seasonal_period;
    o[SEASON_SIN] = phase.sin();
    o[SEASON_COS] = phase.cos();
    Observation(o)
}

impl Serialize for Observation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(OBS_DIM)?;
        for v in &self.0 {
            tup.serialize_element(v)?;
        }
        tup.end()
    }
}

impl<'de> Deserialize<'de> for Observation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ObsVisitor;

        impl<'de> Visitor<'de> for ObsVisitor {
            type Value = Observation;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an array of {OBS_DIM} numbers")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Observation, A::Error> {
                let mut o = [0.0; OBS_DIM];
                for (i, slot) in o.iter_mut().enumerate() {
                    *slot = seq
                        .next_element()?
                        .ok_or_else(|| de::Error::invalid_length(i, &self))?;
                }
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(OBS_DIM + 1, &self));
                }
                Ok(Observation(o))
            }
        }

        deserializer.deserialize_tuple(OBS_DIM, ObsVisitor)
    }
}

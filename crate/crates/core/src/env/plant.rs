//! Containers, presses and bales.

use serde::{Deserialize, Serialize};

use crate::config::{EnvConfig, N_CONTAINERS, N_MATERIALS, N_PRESSES, RESIDUAL};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Container {
    /// Units held, by true material.
    pub contents: [f64; N_MATERIALS],
    /// Step at which the container reached the pressing threshold while
    /// waiting for a press; `None` when not queued.
    pub pending_since: Option<usize>,
}

impl Container {
    pub fn total(&self) -> f64 {
        self.contents.iter().sum()
    }

    pub fn is_pending(&self) -> bool {
        self.pending_since.is_some()
    }

    /// Designated share of the content; `None` when empty. Container E has
    /// no designated material and always reports 0.
    pub fn purity(&self, index: usize) -> Option<f64> {
        let total = self.total();
        if total <= 0.0 {
            return None;
        }
        if index >= N_MATERIALS {
            return Some(0.0);
        }
        Some((self.contents[index] / total).clamp(0.0, 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Press {
    /// First step at which the press is free again (0 when never used).
    pub busy_until: usize,
}

impl Press {
    pub fn is_idle(&self, t: usize) -> bool {
        self.busy_until <= t
    }

    pub fn remaining(&self, t: usize) -> usize {
        self.busy_until.saturating_sub(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bale {
    /// Container index; 4 is the residual container E.
    pub material: usize,
    pub size: f64,
    pub purity: f64,
    pub pressed_at: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressEvent {
    pub press: usize,
    pub container: usize,
    pub bale: Bale,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Plant {
    pub containers: [Container; N_CONTAINERS],
    pub presses: [Press; N_PRESSES],
}

impl Plant {
    pub fn total(&self) -> f64 {
        self.containers.iter().map(Container::total).sum()
    }
}

/// Deposit sorted material, queue containers at the pressing threshold and
/// hand queued containers to idle presses.
///
/// A container A–D at capacity passes the excess on to E. Queued containers
/// are served oldest first, lower index first on ties.
pub fn update_containers_and_presses(
    plant: &mut Plant,
    deposits: &[[f64; N_MATERIALS]; N_CONTAINERS],
    t: usize,
    config: &EnvConfig,
) -> Vec<PressEvent> {
    let mut to_residual = deposits[RESIDUAL];
    for (c, deposit) in deposits.iter().enumerate().take(N_MATERIALS) {
        let container = &mut plant.containers[c];
        let incoming: f64 = deposit.iter().sum();
        let room = (config.container_capacity - container.total()).max(0.0);
        if incoming <= room {
            for (held, d) in container.contents.iter_mut().zip(deposit) {
                *held += d;
            }
        } else {
            let kept = room / incoming;
            for j in 0..N_MATERIALS {
                let keep = deposit[j] * kept;
                container.contents[j] += keep;
                to_residual[j] += deposit[j] - keep;
            }
        }
    }
    // E has no downstream; it absorbs everything
    for (held, d) in plant.containers[RESIDUAL]
        .contents
        .iter_mut()
        .zip(&to_residual)
    {
        *held += d;
    }

    for container in plant.containers.iter_mut() {
        if container.pending_since.is_none() && container.total() >= config.pressing_threshold {
            container.pending_since = Some(t);
        }
    }

    let mut events = Vec::new();
    for (p, press) in plant.presses.iter_mut().enumerate() {
        if !press.is_idle(t) {
            continue;
        }
        let next = plant
            .containers
            .iter()
            .enumerate()
            .filter_map(|(c, k)| k.pending_since.map(|since| (since, c)))
            .min();
        let Some((_, c)) = next else { break };
        let container = &mut plant.containers[c];
        let bale = Bale {
            material: c,
            size: container.total(),
            purity: container.purity(c).unwrap_or(0.0),
            pressed_at: t,
        };
        *container = Container::default();
        press.busy_until = t + config.press_duration;
        events.push(PressEvent {
            press: p,
            container: c,
            bale,
        });
    }
    events
}

//! Lyapunov functionals, decay envelopes, and event statistics.
//!
//! `V` measures deviation from the (conserved) initial average; the dynamic
//! laws are certified through `W = V + sum eta_i` (continuous) or
//! `F = V + sum chi_i` (broadcast). The decay rates computed here are the
//! certified exponents for each law; monotonicity of `V` itself is *not*
//! asserted anywhere, since only `W`/`F` are guaranteed non-increasing under
//! the dynamic laws.

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::simulator::EventRecord;
use crate::triggering::{LawKind, TriggerParams};

/// `V = 1/2 sum_i (x_i - mean0)^2`, with `mean0` the initial average.
pub fn lyapunov_v(x: &[f64], mean0: f64) -> f64 {
    0.5 * x.iter().map(|&xi| (xi - mean0) * (xi - mean0)).sum::<f64>()
}

/// Quadratic form of the mean-deviation projector: `sum_i (z_i - mean(z))^2`.
pub fn mean_deviation_quadratic(z: &[f64]) -> f64 {
    let mean = z.iter().sum::<f64>() / z.len() as f64;
    z.iter().map(|&zi| (zi - mean) * (zi - mean)).sum()
}

fn with_internals(v: f64, internals: &[f64]) -> Result<f64> {
    if let Some((i, &value)) = internals.iter().enumerate().find(|(_, &e)| e <= 0.0) {
        return Err(Error::NonpositiveInternal { agent: i + 1, value });
    }
    Ok(v + internals.iter().sum::<f64>())
}

/// `W = V + sum_i eta_i`; strictly above `V` while the internals are positive.
pub fn lyapunov_w(v: f64, internals: &[f64]) -> Result<f64> {
    with_internals(v, internals)
}

/// `F = V + sum_i chi_i`, the broadcast-law counterpart of [`lyapunov_w`].
pub fn lyapunov_f(v: f64, internals: &[f64]) -> Result<f64> {
    with_internals(v, internals)
}

/// Certified decay exponent of the static continuous law:
/// `(1 - sigma_max) rho_2(L)`.
pub fn static_decay_rate_continuous(lap: &LaplacianMatrix, sigma_max: f64) -> Result<f64> {
    Ok((1.0 - sigma_max) * lap.fiedler_value()?)
}

/// Certified decay exponent of the static broadcast law:
/// `(1 - sigma_max) min_i L_ii / (2 min_i L_ii + ||L|| sigma_max) * rho_2(L)`.
pub fn static_decay_rate_broadcast(lap: &LaplacianMatrix, sigma_max: f64) -> Result<f64> {
    let min_degree = lap.min_degree();
    let norm = lap.spectral_norm()?;
    let rho2 = lap.fiedler_value()?;
    Ok((1.0 - sigma_max) * min_degree / (2.0 * min_degree + norm * sigma_max) * rho2)
}

/// Certified decay exponent of a dynamic law: `k_W` for the continuous law,
/// `k_F` for the broadcast law.
///
/// `k_W = min((1 - sigma_max) rho_2, k_d)` and
/// `k_F = min(rho_2 (1 - sigma_max) / k_x, k_d / 2)` with
/// `k_d = min_i(beta_i - (1 - xi_i)/theta_i)` and
/// `k_x = max(2 + ||L|| sigma_max / min_i L_ii,
///            2 (1 - sigma_max) ||L|| / (k_d min_i(theta_i L_ii)))`.
///
/// Panics if called with a static law; use the static rate functions there.
pub fn dynamic_decay_rate(
    kind: LawKind,
    lap: &LaplacianMatrix,
    params: &TriggerParams,
) -> Result<f64> {
    assert!(kind.is_dynamic(), "dynamic_decay_rate needs a dynamic law");
    let sigma_max = params.sigma_max();
    let k_d = params.min_decay_margin();
    let rho2 = lap.fiedler_value()?;
    match kind {
        LawKind::DynamicContinuous => Ok(((1.0 - sigma_max) * rho2).min(k_d)),
        LawKind::DynamicBroadcast => {
            let norm = lap.spectral_norm()?;
            let min_degree = lap.min_degree();
            let min_theta_degree = (0..params.len())
                .map(|i| params.theta[i] * lap.degree(i))
                .fold(f64::INFINITY, f64::min);
            let k_x = (2.0 + norm * sigma_max / min_degree)
                .max(2.0 * (1.0 - sigma_max) * norm / (k_d * min_theta_degree));
            Ok((rho2 / k_x * (1.0 - sigma_max)).min(0.5 * k_d))
        }
        _ => unreachable!(),
    }
}

/// The certified exponent for any law; dispatches to the static or dynamic
/// rate as appropriate. For static laws the rate bounds `V`, for dynamic laws
/// it bounds `W` or `F`.
pub fn decay_rate(kind: LawKind, lap: &LaplacianMatrix, params: &TriggerParams) -> Result<f64> {
    match kind {
        LawKind::StaticContinuous => static_decay_rate_continuous(lap, params.sigma_max()),
        LawKind::StaticBroadcast => static_decay_rate_broadcast(lap, params.sigma_max()),
        _ => dynamic_decay_rate(kind, lap, params),
    }
}

/// Exponential bound `slack * initial * exp(-rate * t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayEnvelope {
    pub initial: f64,
    pub rate: f64,
    /// Multiplicative tolerance >= 1 absorbing event-localization and
    /// sampling error; exact arithmetic would allow 1.
    pub slack: f64,
}

impl DecayEnvelope {
    pub fn eval(&self, t: f64) -> f64 {
        self.slack * self.initial * (-self.rate * t).exp()
    }
}

/// First row of a series that escapes its envelope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeViolation {
    pub index: usize,
    pub t: f64,
    pub value: f64,
    pub bound: f64,
}

/// Checks `value <= envelope(t)` on every row of a time-sorted series.
pub fn check_envelope(
    series: &[(f64, f64)],
    env: &DecayEnvelope,
) -> std::result::Result<(), EnvelopeViolation> {
    for (index, &(t, value)) in series.iter().enumerate() {
        let bound = env.eval(t);
        if value > bound {
            return Err(EnvelopeViolation {
                index,
                t,
                value,
                bound,
            });
        }
    }
    Ok(())
}

/// Event counts and inter-event gap statistics.
///
/// Gaps are measured between consecutive events of the *same* agent and then
/// pooled; with only the initial simultaneous trigger there are no gaps and
/// both statistics are absent.
#[derive(Clone, Debug, PartialEq)]
pub struct EventStats {
    pub per_agent: Vec<usize>,
    pub total: usize,
    pub min_gap: Option<f64>,
    pub mean_gap: Option<f64>,
}

pub fn inter_event_stats(agent_count: usize, events: &[EventRecord]) -> EventStats {
    let mut per_agent = vec![0usize; agent_count];
    let mut last_time = vec![f64::NAN; agent_count];
    let mut min_gap = f64::INFINITY;
    let mut gap_sum = 0.0;
    let mut gap_count = 0usize;
    for ev in events {
        per_agent[ev.agent] += 1;
        let prev = last_time[ev.agent];
        if prev.is_finite() {
            let gap = ev.time - prev;
            min_gap = min_gap.min(gap);
            gap_sum += gap;
            gap_count += 1;
        }
        last_time[ev.agent] = ev.time;
    }
    EventStats {
        per_agent,
        total: events.len(),
        min_gap: (gap_count > 0).then_some(min_gap),
        mean_gap: (gap_count > 0).then_some(gap_sum / gap_count as f64),
    }
}

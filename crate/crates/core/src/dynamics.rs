//! Single-integrator agent model under event-triggered control.
//!
//! Each agent obeys `x_i' = u_i` with `u_i = -sum_j L_ij xhat_j`, where
//! `xhat_j` is agent j's state frozen at its last trigger. A new broadcast
//! value takes effect at the trigger instant itself (left-closed convention).
//! The measurement error `e_i = xhat_i - x_i` is always derived from the two
//! states, never integrated separately.

use crate::graph::LaplacianMatrix;

/// The broadcast states `xhat_1..xhat_n`, one entry per agent.
///
/// Entry `j` changes only when agent `j` triggers; the simulator owns all
/// mutation.
#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastTable {
    values: Vec<f64>,
}

impl BroadcastTable {
    pub fn new(values: Vec<f64>) -> Self {
        BroadcastTable { values }
    }

    pub fn get(&self, j: usize) -> f64 {
        self.values[j]
    }

    /// Records agent `j`'s new broadcast value; called at its trigger times.
    pub fn set(&mut self, j: usize, value: f64) {
        self.values[j] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Snapshot of one agent's simulation state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentState {
    /// True state `x_i`.
    pub x: f64,
    /// State at the agent's own last trigger; what neighbors see.
    pub x_hat: f64,
    /// Internal variable of the dynamic laws; unused by static laws.
    pub internal: f64,
    pub last_trigger_time: f64,
}

impl AgentState {
    /// `e_i = xhat_i - x_i`, recomputed on demand. Zero immediately after
    /// the agent triggers.
    pub fn measurement_error(&self) -> f64 {
        self.x_hat - self.x
    }
}

/// Event-triggered control input `u_i = -sum_j L_ij xhat_j`.
///
/// Piecewise constant between triggers by construction. With the broadcast
/// table holding the true states this is exactly the classical continuous
/// consensus protocol `-sum_j L_ij x_j`.
pub fn control_input(i: usize, lap: &LaplacianMatrix, bcast: &BroadcastTable) -> f64 {
    let row = lap.row(i);
    let mut acc = 0.0;
    for (j, &l_ij) in row.iter().enumerate() {
        acc += l_ij * bcast.get(j);
    }
    -acc
}

/// Local disagreement `q_i = -1/2 sum_j L_ij (x_j - x_i)^2`.
///
/// Every off-diagonal `L_ij` is nonpositive, so the sum is accumulated as
/// nonnegative terms and the result is nonnegative in floating point too.
pub fn local_disagreement_q(i: usize, lap: &LaplacianMatrix, x: &[f64]) -> f64 {
    let row = lap.row(i);
    let xi = x[i];
    let mut acc = 0.0;
    for (j, &l_ij) in row.iter().enumerate() {
        if j != i {
            let d = x[j] - xi;
            acc += 0.5 * (-l_ij) * d * d;
        }
    }
    debug_assert!(acc >= 0.0);
    acc
}

/// Broadcast-state disagreement `qhat_i`, the same form evaluated on the
/// broadcast table. Piecewise constant between triggers in agent i's closed
/// neighborhood.
pub fn local_disagreement_qhat(i: usize, lap: &LaplacianMatrix, bcast: &BroadcastTable) -> f64 {
    local_disagreement_q(i, lap, bcast.as_slice())
}

/// Checks the identity `sum_i q_i = x' L x` to 1e-9 relative accuracy.
///
/// Test utility: the identity underpins the Lyapunov decay derivations.
pub fn sum_q_equals_quadratic(lap: &LaplacianMatrix, x: &[f64]) -> bool {
    let total: f64 = (0..lap.size())
        .map(|i| local_disagreement_q(i, lap, x))
        .sum();
    let quad = lap.quadratic_form(x);
    (total - quad).abs() <= 1e-9 * quad.abs().max(1.0)
}

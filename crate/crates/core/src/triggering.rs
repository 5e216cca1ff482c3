//! The four distributed triggering laws as interchangeable policies.
//!
//! Each law decides, per agent, whether an event must fire right now from
//! locally available data: the agent's measurement error `e`, a weighted
//! disagreement signal (`q` from true neighbor states for the continuous
//! laws, `q_hat` from broadcast states for the broadcast laws), and, for the
//! dynamic laws, an internal variable that relaxes the threshold and makes
//! the Zeno-exclusion argument work.
//!
//! Conditions fire on strict inequality: at exact consensus (`e = 0`,
//! `q = 0`) no law fires, so consensus is a fixed point of the event system.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Law taxonomy: {static, dynamic} x {continuous, broadcast}.
///
/// Continuous laws monitor true neighbor states; broadcast laws use only the
/// last-broadcast states, so no continuous inter-agent communication is
/// needed. Static laws compare against an instantaneous threshold; dynamic
/// laws compare against the internal variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LawKind {
    StaticContinuous,
    DynamicContinuous,
    StaticBroadcast,
    DynamicBroadcast,
}

impl LawKind {
    /// All laws, in the fixed reporting order used by comparison outputs.
    pub const ALL: [LawKind; 4] = [
        LawKind::StaticContinuous,
        LawKind::DynamicContinuous,
        LawKind::StaticBroadcast,
        LawKind::DynamicBroadcast,
    ];

    pub fn is_dynamic(self) -> bool {
        matches!(self, LawKind::DynamicContinuous | LawKind::DynamicBroadcast)
    }

    /// True when the law consumes `q_hat` (broadcast states) instead of `q`.
    pub fn is_broadcast(self) -> bool {
        matches!(self, LawKind::StaticBroadcast | LawKind::DynamicBroadcast)
    }

    pub fn name(self) -> &'static str {
        match self {
            LawKind::StaticContinuous => "static-continuous",
            LawKind::DynamicContinuous => "dynamic-continuous",
            LawKind::StaticBroadcast => "static-broadcast",
            LawKind::DynamicBroadcast => "dynamic-broadcast",
        }
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown law {s:?} (expected one of: static-continuous, \
                     dynamic-continuous, static-broadcast, dynamic-broadcast)"
                ))
            })
    }
}

/// Per-agent triggering parameters for the whole system.
///
/// The static laws read only `sigma`; the dynamic laws additionally use
/// `beta` (internal decay), `xi` (coupling of the trigger surplus into the
/// internal dynamics), `theta` (threshold stiffness), and `internal0` (the
/// initial internal value).
#[derive(Clone, Debug, PartialEq)]
pub struct TriggerParams {
    pub sigma: Vec<f64>,
    pub beta: Vec<f64>,
    pub xi: Vec<f64>,
    pub theta: Vec<f64>,
    pub internal0: Vec<f64>,
}

/// One agent's slice of [`TriggerParams`], with its 0-based index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentParams {
    pub index: usize,
    pub sigma: f64,
    pub beta: f64,
    pub xi: f64,
    pub theta: f64,
    pub internal0: f64,
}

impl TriggerParams {
    /// Same scalar values for every agent.
    pub fn uniform(n: usize, sigma: f64, beta: f64, xi: f64, theta: f64, internal0: f64) -> Self {
        TriggerParams {
            sigma: vec![sigma; n],
            beta: vec![beta; n],
            xi: vec![xi; n],
            theta: vec![theta; n],
            internal0: vec![internal0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn agent(&self, i: usize) -> AgentParams {
        AgentParams {
            index: i,
            sigma: self.sigma[i],
            beta: self.beta[i],
            xi: self.xi[i],
            theta: self.theta[i],
            internal0: self.internal0[i],
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.iter().copied().fold(0.0, f64::max)
    }

    /// `k_d = min_i(beta_i - (1 - xi_i)/theta_i)`; positive whenever
    /// [`TriggerParams::validate`] passes for a dynamic law.
    pub fn min_decay_margin(&self) -> f64 {
        (0..self.len())
            .map(|i| self.beta[i] - (1.0 - self.xi[i]) / self.theta[i])
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks the parameter hypotheses of the selected law for `n` agents.
    ///
    /// Static laws need `sigma` in (0,1) and ignore the dynamic fields.
    /// Dynamic laws need `sigma` in [0,1), `beta > 0`, `xi` in [0,1],
    /// `internal0 > 0`, and the stiffness bound `theta > (1 - xi)/beta`.
    pub fn validate(&self, kind: LawKind, n: usize) -> Result<()> {
        let fields: [(&str, &Vec<f64>); 5] = [
            ("sigma", &self.sigma),
            ("beta", &self.beta),
            ("xi", &self.xi),
            ("theta", &self.theta),
            ("internal0", &self.internal0),
        ];
        for (name, v) in fields {
            if v.len() != n {
                return Err(Error::InvalidConfig(format!(
                    "{name} has {} entries, expected {n}",
                    v.len()
                )));
            }
            if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} contains {bad}")));
            }
        }
        for i in 0..n {
            let agent = i + 1;
            let sigma = self.sigma[i];
            if kind.is_dynamic() {
                if !(0.0..1.0).contains(&sigma) {
                    return Err(Error::SigmaOutOfRange {
                        agent,
                        value: sigma,
                        required: "[0, 1)",
                    });
                }
                let beta = self.beta[i];
                if beta <= 0.0 {
                    return Err(Error::NonpositiveBeta { agent, value: beta });
                }
                let xi = self.xi[i];
                if !(0.0..=1.0).contains(&xi) {
                    return Err(Error::XiOutOfRange { agent, value: xi });
                }
                let bound = (1.0 - xi) / beta;
                let theta = self.theta[i];
                if theta <= bound || theta <= 0.0 {
                    return Err(Error::ThetaTooSmall {
                        agent,
                        value: theta,
                        bound,
                    });
                }
                let internal0 = self.internal0[i];
                if internal0 <= 0.0 {
                    return Err(Error::NonpositiveInternal0 {
                        agent,
                        value: internal0,
                    });
                }
            } else if !(sigma > 0.0 && sigma < 1.0) {
                return Err(Error::SigmaOutOfRange {
                    agent,
                    value: sigma,
                    required: "(0, 1)",
                });
            }
        }
        Ok(())
    }
}

/// Static condition: fire when `e^2 > sigma/(2 degree) * q`.
///
/// `q` is the continuous disagreement for the continuous law and the
/// broadcast disagreement for the broadcast law; `degree` is `L_ii`.
pub fn static_check(meas_error: f64, disagreement: f64, sigma: f64, degree: f64) -> bool {
    meas_error * meas_error > sigma / (2.0 * degree) * disagreement
}

/// Dynamic condition: fire when `theta * (degree e^2 - sigma/2 q) > internal`.
///
/// A nonpositive internal value is impossible under exact integration of the
/// internal dynamics and is reported as an error rather than interpreted.
pub fn dynamic_check(
    meas_error: f64,
    disagreement: f64,
    internal: f64,
    p: &AgentParams,
    degree: f64,
) -> Result<bool> {
    if internal <= 0.0 {
        return Err(Error::NonpositiveInternal {
            agent: p.index + 1,
            value: internal,
        });
    }
    let surplus = degree * meas_error * meas_error - 0.5 * p.sigma * disagreement;
    Ok(p.theta * surplus > internal)
}

/// Right-hand side of the internal variable dynamics:
/// `-beta * internal + xi * (sigma/2 * q - degree * e^2)`.
pub fn internal_derivative(
    internal: f64,
    disagreement: f64,
    meas_error: f64,
    p: &AgentParams,
    degree: f64,
) -> f64 {
    -p.beta * internal
        + p.xi * (0.5 * p.sigma * disagreement - degree * meas_error * meas_error)
}

/// Guaranteed floor of the internal variable:
/// `internal0 * exp(-(beta + xi/theta) t)`.
///
/// Used as a runtime plausibility check on the integrated internal variable;
/// with `xi = 0` it is the exact closed form of the internal dynamics.
pub fn internal_lower_bound(t: f64, p: &AgentParams) -> f64 {
    p.internal0 * (-(p.beta + p.xi / p.theta) * t).exp()
}

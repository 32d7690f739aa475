//! Lowering of a walk program onto per-SQUID flux pulses.
//!
//! During each interval of length τ, the SQUIDs of one tessellation's pairs
//! sit at `Φ_on` and every other SQUID at `Φ_off`. One walk step is one
//! interval per tessellation, back to back with no idle gap, in
//! tessellation order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{pulse_duration, CircuitParams, CircuitReport, SWITCHING_TIME_S};
use crate::error::{Error, Result};
use crate::graph::{Graph, TessellationSet};
use crate::walk::{evolve, Convention, StateVector, WalkConfig};

/// Version written to and required from schedule files.
pub const SCHEDULE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    #[serde(rename = "idx")]
    pub index: usize,
    /// SQUIDs driven at `Φ_on`; all others are at `Φ_off`.
    #[serde(rename = "on")]
    pub on_pairs: Vec<(usize, usize)>,
}

/// Piecewise-constant flux program for the whole array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSchedule {
    pub version: u32,
    #[serde(rename = "tau_s")]
    pub tau_seconds: f64,
    #[serde(rename = "flux_on")]
    pub flux_on_ratio: f64,
    #[serde(rename = "flux_off")]
    pub flux_off_ratio: f64,
    /// Number of walk steps (repetitions of the per-step pattern).
    pub steps: usize,
    pub intervals: Vec<Interval>,
}

impl PulseSchedule {
    /// Intervals per walk step, or `None` for an empty schedule.
    pub fn intervals_per_step(&self) -> Option<usize> {
        (self.steps > 0 && !self.intervals.is_empty()).then(|| self.intervals.len() / self.steps)
    }

    /// Wall-clock length of the schedule.
    pub fn total_duration(&self) -> f64 {
        self.tau_seconds * self.intervals.len() as f64
    }

    /// Hardware-scale remarks; never fatal.
    pub fn feasibility_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.tau_seconds < SWITCHING_TIME_S {
            warnings.push(format!(
                "warning: interval τ = {:.4e} s is below the 0.1 μs switching budget",
                self.tau_seconds
            ));
        }
        warnings
    }

    /// Graph-independent invariants: version, τ, flux ratios, interval
    /// numbering and per-interval matching.
    pub fn structural_violations(&self) -> Vec<ScheduleViolation> {
        let mut violations = Vec::new();
        if self.version != SCHEDULE_VERSION {
            violations.push(ScheduleViolation::UnsupportedVersion(self.version));
        }
        if !(self.tau_seconds.is_finite() && self.tau_seconds > 0.0) {
            violations.push(ScheduleViolation::NonPositiveTau(self.tau_seconds));
        }
        for (name, value) in [("flux_on", self.flux_on_ratio), ("flux_off", self.flux_off_ratio)] {
            if !value.is_finite() {
                violations.push(ScheduleViolation::NonFiniteFlux { name, value });
            }
        }
        if self.steps == 0 {
            if !self.intervals.is_empty() {
                violations.push(ScheduleViolation::StepMismatch {
                    intervals: self.intervals.len(),
                    steps: 0,
                });
            }
        } else if !self.intervals.len().is_multiple_of(self.steps) {
            violations.push(ScheduleViolation::StepMismatch {
                intervals: self.intervals.len(),
                steps: self.steps,
            });
        }
        for (position, interval) in self.intervals.iter().enumerate() {
            if interval.index != position {
                violations.push(ScheduleViolation::OutOfOrder {
                    position,
                    index: interval.index,
                });
            }
            let mut driven = BTreeSet::new();
            for &(i, j) in &interval.on_pairs {
                if i == j {
                    violations.push(ScheduleViolation::SelfPair {
                        interval: interval.index,
                        node: i,
                    });
                    continue;
                }
                for node in [i, j] {
                    if !driven.insert(node) {
                        violations.push(ScheduleViolation::DoubleDriven {
                            interval: interval.index,
                            node,
                        });
                    }
                }
            }
        }
        violations
    }
}

/// Reasons a schedule cannot drive the array safely.
#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleViolation {
    UnsupportedVersion(u32),
    NonPositiveTau(f64),
    NonFiniteFlux { name: &'static str, value: f64 },
    StepMismatch { intervals: usize, steps: usize },
    OutOfOrder { position: usize, index: usize },
    SelfPair { interval: usize, node: usize },
    DoubleDriven { interval: usize, node: usize },
    NotAnEdge { interval: usize, pair: (usize, usize) },
    UncoveredEdge { step: usize, edge: (usize, usize) },
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::UnsupportedVersion(v) => write!(f, "unsupported schedule version {v}"),
            Self::NonPositiveTau(t) => write!(f, "tau must be positive and finite, got {t}"),
            Self::NonFiniteFlux { name, value } => write!(f, "{name} is not finite ({value})"),
            Self::StepMismatch { intervals, steps } => {
                write!(f, "{intervals} intervals cannot be split evenly into {steps} steps")
            }
            Self::OutOfOrder { position, index } => {
                write!(f, "interval at position {position} has idx {index}")
            }
            Self::SelfPair { interval, node } => {
                write!(f, "interval {interval}: pair ({node},{node}) couples a node to itself")
            }
            Self::DoubleDriven { interval, node } => {
                write!(f, "interval {interval}: node {node} double-driven")
            }
            Self::NotAnEdge { interval, pair: (i, j) } => {
                write!(f, "interval {interval}: ({i},{j}) is not an edge")
            }
            Self::UncoveredEdge { step, edge: (i, j) } => {
                write!(f, "step {step}: edge ({i},{j}) is never switched on")
            }
        }
    }
}

/// Checks `s` against `g`: structural invariants, every driven pair is an
/// edge, and each step switches every edge on at least once.
pub fn validate_schedule(s: &PulseSchedule, g: &Graph) -> std::result::Result<(), Vec<ScheduleViolation>> {
    let mut violations = s.structural_violations();
    for interval in &s.intervals {
        for &(i, j) in &interval.on_pairs {
            if i != j && !g.has_edge(i, j) {
                violations.push(ScheduleViolation::NotAnEdge {
                    interval: interval.index,
                    pair: (i, j),
                });
            }
        }
    }
    if let Some(per_step) = s.intervals_per_step().filter(|&k| k > 0) {
        for (step, chunk) in s.intervals.chunks(per_step).enumerate() {
            let on: BTreeSet<(usize, usize)> = chunk
                .iter()
                .flat_map(|iv| iv.on_pairs.iter().map(|&(i, j)| (i.min(j), i.max(j))))
                .collect();
            violations.extend(
                g.edges()
                    .iter()
                    .filter(|e| !on.contains(e))
                    .map(|&edge| ScheduleViolation::UncoveredEdge { step, edge }),
            );
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// The walk a schedule realizes: tessellations applied in order, each with
/// angle θ, repeated `steps` times.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkProgram {
    pub tessellations: TessellationSet,
    pub config: WalkConfig,
}

impl WalkProgram {
    /// Runs the program through [`crate::walk::evolve`].
    pub fn simulate(&self, state: &StateVector) -> Result<StateVector> {
        evolve(state, &self.tessellations, &self.config)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledRun {
    pub schedule: PulseSchedule,
    pub program: WalkProgram,
    pub circuit: CircuitReport,
}

/// Compiles a walk on `g` into a flux schedule for the resonator array.
///
/// τ is the shortest positive duration with `κ τ ≡ θ (mod 2π)`, where κ is
/// the net coupling of an active pair. Angles that are multiples of 2π are
/// rejected since they would need zero-length pulses.
pub fn compile_schedule(
    g: &Graph,
    ts: &TessellationSet,
    theta: f64,
    circuit: &CircuitParams,
    steps: usize,
) -> Result<CompiledRun> {
    ts.validate(g)?;
    let config = WalkConfig::new(theta, steps, Convention::Physical)?;
    let report = CircuitReport::solve(circuit)?;
    let tau_seconds = pulse_duration(theta, report.kappa_pair_on, true)?;
    if tau_seconds <= 0.0 {
        return Err(Error::ZeroDuration);
    }

    let per_step: Vec<Vec<(usize, usize)>> = ts.iter().map(|t| t.pairs().collect()).collect();
    let intervals = (0..steps)
        .flat_map(|_| per_step.iter().cloned())
        .enumerate()
        .map(|(index, on_pairs)| Interval { index, on_pairs })
        .collect();

    let schedule = PulseSchedule {
        version: SCHEDULE_VERSION,
        tau_seconds,
        flux_on_ratio: report.flux_on,
        flux_off_ratio: report.flux_off,
        steps,
        intervals,
    };
    Ok(CompiledRun {
        schedule,
        program: WalkProgram {
            tessellations: ts.clone(),
            config,
        },
        circuit: report,
    })
}

pub fn emit_schedule(s: &PulseSchedule) -> String {
    let mut text = serde_json::to_string_pretty(s).expect("schedule serializes");
    text.push('\n');
    text
}

/// Parses a schedule file and enforces its graph-independent invariants.
pub fn parse_schedule(text: &str) -> Result<PulseSchedule> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::from_json(e, text))?;
    match value.get("version").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(SCHEDULE_VERSION) => {}
        Some(v) => return Err(Error::Schema(format!("unsupported schedule version {v}"))),
        None => return Err(Error::Schema("missing integer field `version`".into())),
    }
    let schedule: PulseSchedule = serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    let violations = schedule.structural_violations();
    if !violations.is_empty() {
        return Err(Error::InvalidSchedule(violations));
    }
    Ok(schedule)
}

//! Staggered quantum walk dynamics in the single-excitation sector.
//!
//! Each tessellation defines a reflection `H = 2 Σ_k |α_k⟩⟨α_k| − I`, where
//! `|α_k⟩ = (|i⟩ + |j⟩)/√2` for a pair and `|i⟩` for a singleton. Because
//! `H² = I`, the local operator `exp(iθH) = cos θ·I + i sin θ·H` acts on a
//! pair as the 2×2 rotation `[[cos θ, i sin θ], [i sin θ, cos θ]]`, which is
//! applied in place without forming any matrix.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate_tessellation, Graph, Tessellation, TessellationSet};

/// Tolerance on the squared norm of a state handed to the public API.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Pair count above which the parallel path actually fans out.
const PARALLEL_MIN_PAIRS: usize = 256;

/// Reflection operator of one tessellation, stored structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianSpec {
    dimension: usize,
    pairs: Vec<(usize, usize)>,
    singletons: Vec<usize>,
}

impl HamiltonianSpec {
    /// Builds the reflection for `t` on `dimension` nodes, checking only the
    /// partition property (no graph is consulted).
    pub fn from_partition(dimension: usize, t: &Tessellation) -> Result<Self> {
        let violations = t.partition_violations(dimension);
        if !violations.is_empty() {
            return Err(Error::InvalidTessellation { index: 0, violations });
        }
        Ok(Self {
            dimension,
            pairs: t.pairs().collect(),
            singletons: t.singletons().collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn singletons(&self) -> &[usize] {
        &self.singletons
    }

    /// Applies `exp(iθH)` (abstract) or the hardware block evolution
    /// (physical) to `amps` in place.
    pub fn apply(&self, amps: &mut [Complex64], theta: f64, convention: Convention, parallel: bool) {
        debug_assert_eq!(amps.len(), self.dimension);
        let (sin, cos) = theta.sin_cos();
        let isin = Complex64::new(0.0, sin);
        let rotate = |a: Complex64, b: Complex64| (a * cos + b * isin, a * isin + b * cos);

        if parallel && self.pairs.len() >= PARALLEL_MIN_PAIRS {
            let snapshot: &[Complex64] = amps;
            let updated: Vec<(Complex64, Complex64)> = self
                .pairs
                .par_iter()
                .map(|&(i, j)| rotate(snapshot[i], snapshot[j]))
                .collect();
            for (&(i, j), (ai, aj)) in self.pairs.iter().zip(updated) {
                amps[i] = ai;
                amps[j] = aj;
            }
        } else {
            for &(i, j) in &self.pairs {
                let (ai, aj) = rotate(amps[i], amps[j]);
                amps[i] = ai;
                amps[j] = aj;
            }
        }

        if convention == Convention::Abstract {
            let phase = Complex64::new(cos, sin);
            for &i in &self.singletons {
                amps[i] *= phase;
            }
        }
    }
}

/// Reflection Hamiltonian of a tessellation validated against `g`.
pub fn hamiltonian_from_tessellation(g: &Graph, t: &Tessellation) -> Result<HamiltonianSpec> {
    validate_tessellation(g, t).map_err(|violations| Error::InvalidTessellation { index: 0, violations })?;
    HamiltonianSpec::from_partition(g.node_count(), t)
}

/// How singletons evolve.
///
/// `Abstract` applies `exp(iθH)` exactly, so singletons (eigenvalue +1)
/// pick up `e^{iθ}`. `Physical` follows the resonator array, where an
/// isolated resonator only carries the common `e^{-iωτ}` phase that is
/// dropped globally, so singletons are left untouched. Pair blocks are the
/// same in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Abstract,
    #[default]
    Physical,
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "abstract" => Ok(Self::Abstract),
            "physical" => Ok(Self::Physical),
            other => Err(format!("unknown convention `{other}` (expected abstract|physical)")),
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Abstract => "abstract",
            Self::Physical => "physical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    /// θ = κτ in radians.
    pub theta: f64,
    pub convention: Convention,
    /// Number of full steps `l`.
    pub steps: usize,
    /// Split pair updates of large tessellations across the rayon pool.
    #[serde(default)]
    pub parallel: bool,
}

impl WalkConfig {
    pub fn new(theta: f64, steps: usize, convention: Convention) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteAngle(theta));
        }
        Ok(Self {
            theta,
            convention,
            steps,
            parallel: false,
        })
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }
}

/// Single-photon state: one complex amplitude per node.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes whose squared norm is 1 within [`NORM_TOLERANCE`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE || !norm_sqr.is_finite() {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: norm * norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }
}

/// `|node⟩` in an `n`-node space.
pub fn initial_basis_state(n: usize, node: usize) -> Result<StateVector> {
    if node >= n {
        return Err(Error::NodeOutOfRange { node, node_count: n });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
    amplitudes[node] = Complex64::new(1.0, 0.0);
    Ok(StateVector { amplitudes })
}

/// Applies one local operator to a copy of `state`.
pub fn local_unitary(state: &StateVector, h: &HamiltonianSpec, cfg: &WalkConfig) -> Result<StateVector> {
    if state.len() != h.dimension() {
        return Err(Error::DimensionMismatch {
            expected: h.dimension(),
            found: state.len(),
        });
    }
    let mut amplitudes = state.amplitudes.clone();
    h.apply(&mut amplitudes, cfg.theta, cfg.convention, cfg.parallel);
    Ok(StateVector { amplitudes })
}

/// The walk operator of a tessellation set, prepared for repeated use.
#[derive(Debug, Clone)]
pub struct StaggeredWalk {
    dimension: usize,
    layers: Vec<HamiltonianSpec>,
}

impl StaggeredWalk {
    /// Prepares the layers of `ts`, each checked as a partition of `dimension` nodes.
    pub fn new(dimension: usize, ts: &TessellationSet) -> Result<Self> {
        let layers = ts
            .iter()
            .enumerate()
            .map(|(index, t)| {
                HamiltonianSpec::from_partition(dimension, t).map_err(|e| match e {
                    Error::InvalidTessellation { violations, .. } => Error::InvalidTessellation { index, violations },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dimension, layers })
    }

    /// Like [`StaggeredWalk::new`] but also checks every tessellation and the
    /// edge cover against `g`.
    pub fn on_graph(g: &Graph, ts: &TessellationSet) -> Result<Self> {
        ts.validate(g)?;
        Self::new(g.node_count(), ts)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn layers(&self) -> &[HamiltonianSpec] {
        &self.layers
    }

    /// One full step: tessellation 0 first, then 1, ..., in place.
    pub fn step(&self, amps: &mut [Complex64], cfg: &WalkConfig) {
        for layer in &self.layers {
            layer.apply(amps, cfg.theta, cfg.convention, cfg.parallel);
        }
    }

    pub fn evolve(&self, state: &StateVector, cfg: &WalkConfig) -> Result<StateVector> {
        self.run(state, cfg, |_, _| {})
    }

    /// Evolves and returns the probability distribution after every step,
    /// including the initial one (`cfg.steps + 1` entries).
    pub fn evolve_recording(&self, state: &StateVector, cfg: &WalkConfig) -> Result<(StateVector, Vec<Vec<f64>>)> {
        let mut history = Vec::with_capacity(cfg.steps + 1);
        history.push(probabilities(state.amplitudes()));
        let last = self.run(state, cfg, |_, amps| history.push(probabilities(amps)))?;
        Ok((last, history))
    }

    fn run(
        &self,
        state: &StateVector,
        cfg: &WalkConfig,
        mut observe: impl FnMut(usize, &[Complex64]),
    ) -> Result<StateVector> {
        if state.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: state.len(),
            });
        }
        if !cfg.theta.is_finite() {
            return Err(Error::NonFiniteAngle(cfg.theta));
        }
        let mut amplitudes = state.amplitudes.clone();
        for step in 1..=cfg.steps {
            self.step(&mut amplitudes, cfg);
            observe(step, &amplitudes);
        }
        Ok(StateVector { amplitudes })
    }
}

/// Applies the walk operator of `ts` `cfg.steps` times to `state`.
pub fn evolve(state: &StateVector, ts: &TessellationSet, cfg: &WalkConfig) -> Result<StateVector> {
    StaggeredWalk::new(state.len(), ts)?.evolve(state, cfg)
}

fn probabilities(amps: &[Complex64]) -> Vec<f64> {
    amps.iter().map(Complex64::norm_sqr).collect()
}

/// `P(n) = |⟨n|ψ⟩|²`.
pub fn probability_distribution(state: &StateVector) -> Vec<f64> {
    probabilities(state.amplitudes())
}

/// Standard deviation of the position relative to `origin` for each
/// distribution in `history`.
pub fn spread_statistics(history: &[Vec<f64>], origin: usize) -> Result<Vec<f64>> {
    if history.is_empty() {
        return Err(Error::EmptyHistory);
    }
    Ok(history
        .iter()
        .map(|p| {
            let (mut mean, mut second) = (0.0, 0.0);
            for (n, &pn) in p.iter().enumerate() {
                let x = n as f64 - origin as f64;
                mean += pn * x;
                second += pn * x * x;
            }
            (second - mean * mean).max(0.0).sqrt()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, PI};

    use super::*;
    use crate::graph::{generate_lattice_tessellations, generate_path_tessellations, Element};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn red_hamiltonian_structure() {
        let (g, ts) = generate_path_tessellations(5).unwrap();
        let h = hamiltonian_from_tessellation(&g, &ts.as_slice()[0]).unwrap();
        assert_eq!(h.pairs(), &[(0, 1), (2, 3)]);
        assert_eq!(h.singletons(), &[4]);
        assert_eq!(h.dimension(), 5);
    }

    #[test]
    fn hamiltonian_rejects_invalid_tessellation() {
        let (g, _) = generate_path_tessellations(5).unwrap();
        let bad = Tessellation::new(vec![Element::Pair(0, 2), Element::Single(1), Element::Pair(3, 4)]);
        assert!(matches!(
            hamiltonian_from_tessellation(&g, &bad),
            Err(Error::InvalidTessellation { .. })
        ));
    }

    #[test]
    fn hadamard_block_at_quarter_pi() {
        let h = HamiltonianSpec::from_partition(2, &Tessellation::new(vec![Element::Pair(0, 1)])).unwrap();
        let cfg = WalkConfig::new(FRAC_PI_4, 1, Convention::Physical).unwrap();
        let col0 = local_unitary(&initial_basis_state(2, 0).unwrap(), &h, &cfg).unwrap();
        let col1 = local_unitary(&initial_basis_state(2, 1).unwrap(), &h, &cfg).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!(close(col0.amplitudes()[0], c(s, 0.0), 1e-12));
        assert!(close(col0.amplitudes()[1], c(0.0, s), 1e-12));
        assert!(close(col1.amplitudes()[0], c(0.0, s), 1e-12));
        assert!(close(col1.amplitudes()[1], c(s, 0.0), 1e-12));
    }

    #[test]
    fn zero_angle_is_identity_for_both_conventions() {
        let (_, ts) = generate_path_tessellations(7).unwrap();
        let psi = StateVector::normalized((0..7).map(|k| c(k as f64, 1.0 - k as f64)).collect()).unwrap();
        for conv in [Convention::Abstract, Convention::Physical] {
            let cfg = WalkConfig::new(0.0, 3, conv).unwrap();
            assert_eq!(evolve(&psi, &ts, &cfg).unwrap(), psi);
        }
    }

    #[test]
    fn singleton_phase_by_convention() {
        let h = HamiltonianSpec::from_partition(1, &Tessellation::new(vec![Element::Single(0)])).unwrap();
        let psi = initial_basis_state(1, 0).unwrap();
        let abs = local_unitary(&psi, &h, &WalkConfig::new(0.5, 1, Convention::Abstract).unwrap()).unwrap();
        assert!(close(abs.amplitudes()[0], Complex64::from_polar(1.0, 0.5), 1e-15));
        let phys = local_unitary(&psi, &h, &WalkConfig::new(0.5, 1, Convention::Physical).unwrap()).unwrap();
        assert_eq!(phys.amplitudes()[0], c(1.0, 0.0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let (_, ts) = generate_path_tessellations(5).unwrap();
        let psi = initial_basis_state(4, 0).unwrap();
        let cfg = WalkConfig::new(0.3, 1, Convention::Physical).unwrap();
        assert!(evolve(&psi, &ts, &cfg).is_err());
        let h = HamiltonianSpec::from_partition(5, &ts.as_slice()[0]).unwrap();
        assert!(matches!(
            local_unitary(&psi, &h, &cfg),
            Err(Error::DimensionMismatch { expected: 5, found: 4 })
        ));
    }

    #[test]
    fn zero_steps_returns_input() {
        let (_, ts) = generate_path_tessellations(9).unwrap();
        let psi = initial_basis_state(9, 4).unwrap();
        let cfg = WalkConfig::new(1.1, 0, Convention::Abstract).unwrap();
        assert_eq!(evolve(&psi, &ts, &cfg).unwrap(), psi);
    }

    #[test]
    fn three_node_step_by_hand() {
        // U0 rotates (0,1), leaves 2; U1 leaves 0, rotates (1,2).
        let (_, ts) = generate_path_tessellations(3).unwrap();
        let theta = FRAC_PI_3;
        let (s, co) = theta.sin_cos();
        let out = evolve(
            &initial_basis_state(3, 1).unwrap(),
            &ts,
            &WalkConfig::new(theta, 1, Convention::Physical).unwrap(),
        )
        .unwrap();
        let expect = [c(0.0, s), c(co * co, 0.0), c(0.0, co * s)];
        for (a, e) in out.amplitudes().iter().zip(expect) {
            assert!(close(*a, e, 1e-15), "{a} vs {e}");
        }
    }

    #[test]
    fn basis_state_checks_range() {
        let s = initial_basis_state(133, 66).unwrap();
        assert_eq!(probability_distribution(&s)[66], 1.0);
        assert_eq!(initial_basis_state(1, 0).unwrap().amplitudes(), &[c(1.0, 0.0)]);
        assert!(initial_basis_state(5, 5).is_err());
    }

    #[test]
    fn probability_of_balanced_superposition() {
        let s = StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        let p = probability_distribution(&s);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn state_vector_rejects_unnormalized() {
        assert!(StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(StateVector::normalized(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn spread_of_deltas_is_zero() {
        let hist = vec![vec![0.0, 1.0, 0.0]; 4];
        assert_eq!(spread_statistics(&hist, 1).unwrap(), vec![0.0; 4]);
        assert!(matches!(spread_statistics(&[], 0), Err(Error::EmptyHistory)));
    }

    #[test]
    fn spread_of_two_point_distribution() {
        let sigma = spread_statistics(&[vec![0.5, 0.0, 0.5]], 1).unwrap();
        assert!((sigma[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn recording_has_initial_and_each_step() {
        let (g, ts) = generate_path_tessellations(21).unwrap();
        let walk = StaggeredWalk::on_graph(&g, &ts).unwrap();
        let cfg = WalkConfig::new(FRAC_PI_3, 5, Convention::Physical).unwrap();
        let (last, hist) = walk
            .evolve_recording(&initial_basis_state(21, 10).unwrap(), &cfg)
            .unwrap();
        assert_eq!(hist.len(), 6);
        assert_eq!(hist[5], probability_distribution(&last));
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let (g, ts) = generate_lattice_tessellations(&[40, 40]).unwrap();
        let walk = StaggeredWalk::on_graph(&g, &ts).unwrap();
        let psi = initial_basis_state(1600, 820).unwrap();
        let cfg = WalkConfig::new(0.9, 6, Convention::Abstract).unwrap();
        let seq = walk.evolve(&psi, &cfg).unwrap();
        let par = walk.evolve(&psi, &cfg.with_parallel(true)).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn fastest_spread_ordering() {
        let (_, ts) = generate_path_tessellations(133).unwrap();
        let psi = initial_basis_state(133, 66).unwrap();
        let sigma_at = |theta: f64| {
            let cfg = WalkConfig::new(theta, 32, Convention::Physical).unwrap();
            let walk = StaggeredWalk::new(133, &ts).unwrap();
            let (_, hist) = walk.evolve_recording(&psi, &cfg).unwrap();
            spread_statistics(&hist, 66).unwrap()
        };
        let third = sigma_at(FRAC_PI_3);
        let quarter = sigma_at(FRAC_PI_4);
        assert!(quarter[32] < third[32]);
        let ratio = third[32] / third[16];
        assert!((1.9..=2.1).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn full_period_shift_is_invisible() {
        let (_, ts) = generate_path_tessellations(11).unwrap();
        let psi = initial_basis_state(11, 5).unwrap();
        let a = evolve(&psi, &ts, &WalkConfig::new(0.4, 3, Convention::Abstract).unwrap()).unwrap();
        let b = evolve(
            &psi,
            &ts,
            &WalkConfig::new(0.4 + 2.0 * PI, 3, Convention::Abstract).unwrap(),
        )
        .unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!(close(*x, *y, 1e-12));
        }
    }

    #[test]
    fn non_finite_angle_rejected() {
        assert!(matches!(
            WalkConfig::new(f64::NAN, 1, Convention::Physical),
            Err(Error::NonFiniteAngle(_))
        ));
    }
}

//! Resonator-array circuit model: SQUID-tunable couplings between
//! transmission-line resonators.
//!
//! Each resonator of half-length `L` has its first mode `u(x)` fixed by the
//! junction load at its centre. With `x = kL` the mode condition is
//!
//! ```text
//! tan x = −4 χ_c x + (χ_l,left + χ_l,right) / (2x)
//! ```
//!
//! where `χ_c = C_J / (2Lc)` and `χ_l = E_n · 2Ll` with
//! `E_n = (4π²/Φ₀²) E_J cos(π Φ_ext/Φ₀)`. Couplings follow from the mode
//! amplitude at the junction, `u(0) = A`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width to which the bisection stage shrinks a branch bracket.
const BISECTION_WIDTH: f64 = 1e-6;
/// Residual target of the Newton polish.
const ROOT_RESIDUAL: f64 = 1e-12;
/// Keeps brackets away from the poles of `tan`.
const POLE_MARGIN: f64 = 1e-9;

/// Reference switching time for a flux pulse.
pub const SWITCHING_TIME_S: f64 = 1e-7;
/// Single-photon lifetime of a resonator.
pub const PHOTON_LIFETIME_S: f64 = 1e-4;
/// Typical hardware coupling rate, in Hz.
pub const NOMINAL_COUPLING_HZ: f64 = 1e7;

/// Physical constants of the array, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitParams {
    /// Capacitance per unit length (F/m).
    pub c: f64,
    /// Inductance per unit length (H/m).
    pub l: f64,
    /// Resonator half-length (m).
    #[serde(rename = "L")]
    pub half_length: f64,
    /// Junction capacitance (F).
    #[serde(rename = "C_J")]
    pub junction_capacitance: f64,
    /// Josephson energy (J).
    #[serde(rename = "E_J")]
    pub josephson_energy: f64,
    /// Flux quantum (Wb).
    #[serde(rename = "Phi0")]
    pub flux_quantum: f64,
}

impl CircuitParams {
    /// 50 Ω coplanar line, 1 cm half-length, 1 fF junctions.
    pub fn reference() -> Self {
        Self {
            c: 1e-10,
            l: 2.5e-7,
            half_length: 1e-2,
            junction_capacitance: 1e-15,
            josephson_energy: 6.6262e-24,
            flux_quantum: 2.0679e-15,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("c", self.c),
            ("l", self.l),
            ("L", self.half_length),
            ("C_J", self.junction_capacitance),
            ("E_J", self.josephson_energy),
            ("Phi0", self.flux_quantum),
        ];
        for (name, value) in fields {
            // a bare line without junction capacitance is allowed
            let floor_ok = if name == "C_J" { value >= 0.0 } else { value > 0.0 };
            if !(value.is_finite() && floor_ok) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let params: Self = serde_json::from_str(text).map_err(|e| Error::from_json(e, text))?;
        params.validate()?;
        Ok(params)
    }

    /// Wave speed `1/√(lc)` (m/s).
    pub fn phase_velocity(&self) -> f64 {
        1.0 / (self.l * self.c).sqrt()
    }

    /// Angular frequency (rad/s) of a mode with dimensionless wave number `kL`.
    pub fn omega(&self, kl: f64) -> f64 {
        kl * self.phase_velocity() / self.half_length
    }

    pub fn chi_c(&self) -> f64 {
        self.junction_capacitance / (2.0 * self.half_length * self.c)
    }

    /// `|χ_l|_max = (4π²/Φ₀²) E_J · 2Ll`.
    pub fn chi_l_max(&self) -> f64 {
        josephson_coefficient(0.0, self) * 2.0 * self.half_length * self.l
    }
}

/// Flux-dependent quadratic Josephson coefficient
/// `E_n = (4π²/Φ₀²) E_J cos(π Φ_ext/Φ₀)`.
pub fn josephson_coefficient(flux_ratio: f64, params: &CircuitParams) -> f64 {
    4.0 * PI * PI / (params.flux_quantum * params.flux_quantum) * params.josephson_energy * (PI * flux_ratio).cos()
}

/// Junction load relative to the resonator's own capacitance and inductance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiPair {
    pub chi_c: f64,
    pub chi_l: f64,
}

pub fn chi_from_params(params: &CircuitParams, josephson_coefficient: f64) -> ChiPair {
    ChiPair {
        chi_c: params.chi_c(),
        chi_l: josephson_coefficient * 2.0 * params.half_length * params.l,
    }
}

/// `f(x) = tan x + 4χ_c x − Σχ_l/(2x)`; zero at a mode.
pub fn mode_residual(kl: f64, chi_c: f64, chi_l_sum: f64) -> f64 {
    kl.tan() + 4.0 * chi_c * kl - chi_l_sum / (2.0 * kl)
}

fn mode_residual_derivative(kl: f64, chi_c: f64, chi_l_sum: f64) -> f64 {
    let sec = 1.0 / kl.cos();
    sec * sec + 4.0 * chi_c + chi_l_sum / (2.0 * kl * kl)
}

/// A solved resonator mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution {
    pub mode_index: usize,
    /// Wave number times half-length.
    pub kl: f64,
    /// Mode amplitude at the junction, `u(0)`.
    pub amplitude: f64,
    /// Angular frequency in rad/s, once physical parameters are attached.
    pub omega: Option<f64>,
}

impl ModeSolution {
    pub fn with_params(mut self, params: &CircuitParams) -> Self {
        self.omega = Some(params.omega(self.kl));
        self
    }

    /// Frequency used by [`couplings`]: rad/s when known, otherwise in
    /// units of `v/L` (numerically equal to `kL`).
    pub fn frequency(&self) -> f64 {
        self.omega.unwrap_or(self.kl)
    }

    /// `B/A = h₀/(2k)`: weight of the odd part of the mode on each side.
    pub fn odd_ratio(&self) -> f64 {
        self.kl.tan()
    }
}

/// Tangent branch holding the root of mode `mode_index`.
///
/// For a net inductive load `Σχ_l > 0` the residual runs from −∞ to +∞ on
/// `(0, π/2)` as well, so that branch holds the first mode and the others
/// shift up by one. Otherwise mode `m` lives in `((m−½)π, (m+½)π)`.
fn mode_branch(mode_index: usize, chi_l_sum: f64) -> (f64, f64) {
    // sums within rounding of zero keep the bare-resonator branch layout
    let branch = if chi_l_sum > 1e-12 { mode_index - 1 } else { mode_index };
    if branch == 0 {
        return (POLE_MARGIN, FRAC_PI_2 - POLE_MARGIN);
    }
    let centre = branch as f64 * PI;
    (centre - FRAC_PI_2 + POLE_MARGIN, centre + FRAC_PI_2 - POLE_MARGIN)
}

/// Finds the `mode_index`-th positive root of the mode equation.
///
/// Each tangent branch (see [`mode_branch`]) is bisected down to
/// [`BISECTION_WIDTH`] and then polished with safeguarded Newton steps to a
/// residual below 1e−12.
pub fn solve_mode(chi_c: f64, chi_l_left: f64, chi_l_right: f64, mode_index: usize) -> Result<ModeSolution> {
    if mode_index == 0 {
        return Err(Error::InvalidModeIndex);
    }
    let sum = chi_l_left + chi_l_right;
    let f = |x: f64| mode_residual(x, chi_c, sum);
    let (mut lo, mut hi) = mode_branch(mode_index, sum);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NoRootInBranch {
            mode: mode_index,
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }

    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let fx = f(x);
        if fx.abs() < ROOT_RESIDUAL {
            break;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let next = x - fx / mode_residual_derivative(x, chi_c, sum);
        x = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    let residual = f(x);
    if residual.abs() >= ROOT_RESIDUAL {
        return Err(Error::NoRootInBranch {
            mode: mode_index,
            lo,
            hi,
            f_lo: f(lo),
            f_hi: f(hi),
        });
    }

    Ok(ModeSolution {
        mode_index,
        kl: x,
        amplitude: normalization_amplitude(x, chi_c),
        omega: None,
    })
}

/// Junction amplitude `A = u(0)` of the mode with wave number `kl`.
///
/// On `0 ≤ x ≤ L` the mode is `A (cos kx + t sin kx)` with `t = tan kL`, and
/// it is even about the centre. Normalizing
/// `(c/2)∫u² dx + 2C_J u(0)² = Lc/2` gives, in units of `L`,
/// `A² [ (1/L)∫_{−L}^{L} (u/A)² dx + 8χ_c ] = 1`, with the integral in
/// closed form.
pub fn normalization_amplitude(kl: f64, chi_c: f64) -> f64 {
    let t = kl.tan();
    let (s2, c2) = (2.0 * kl).sin_cos();
    let even = 0.5 + s2 / (4.0 * kl);
    let odd = 0.5 - s2 / (4.0 * kl);
    let cross = (1.0 - c2) / (2.0 * kl);
    let integral = 2.0 * (even + t * t * odd + t * cross);
    1.0 / (integral + 8.0 * chi_c).sqrt()
}

/// Capacitive, inductive and net coupling between two modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingResult {
    pub kappa_cap: f64,
    pub kappa_ind: f64,
    /// `−kappa_ind + kappa_cap`.
    pub kappa_total: f64,
}

/// Couplings across one SQUID with relative inverse inductance `chi_l_link`.
///
/// Units follow [`ModeSolution::frequency`].
pub fn couplings(mode_n: &ModeSolution, mode_m: &ModeSolution, chi_c: f64, chi_l_link: f64) -> CouplingResult {
    let overlap = mode_n.amplitude * mode_m.amplitude * (mode_n.frequency() * mode_m.frequency()).sqrt();
    let kappa_cap = 2.0 * chi_c * overlap;
    let kappa_ind = chi_l_link / (2.0 * mode_n.kl * mode_m.kl) * overlap;
    CouplingResult {
        kappa_cap,
        kappa_ind,
        kappa_total: -kappa_ind + kappa_cap,
    }
}

/// `χ_l` at which the capacitive and inductive couplings cancel for identical
/// resonators with wave number `kl`.
pub fn chi_l_off_target(chi_c: f64, kl: f64) -> f64 {
    4.0 * chi_c * kl * kl
}

/// Flux (in units of Φ₀) that switches a coupling off.
pub fn solve_flux_off(chi_c: f64, kl: f64, chi_l_max: f64) -> Result<f64> {
    let target = chi_l_off_target(chi_c, kl);
    if target > chi_l_max {
        return Err(Error::FluxOffUnreachable { target, chi_l_max });
    }
    Ok((target / chi_l_max).acos() / PI)
}

/// Duration τ of one interval realizing the angle `theta = κτ`.
///
/// With `reduce`, θ is taken modulo 2π so that τ is the shortest
/// non-negative duration with `κτ ≡ θ (mod 2π)`.
pub fn pulse_duration(theta: f64, kappa_total: f64, reduce: bool) -> Result<f64> {
    if kappa_total == 0.0 || !kappa_total.is_finite() {
        return Err(Error::ZeroCoupling(kappa_total));
    }
    if !theta.is_finite() {
        return Err(Error::NonFiniteAngle(theta));
    }
    let tau = theta / kappa_total;
    if reduce {
        Ok(tau.rem_euclid(2.0 * PI / kappa_total.abs()))
    } else {
        Ok(tau)
    }
}

/// Everything needed to drive one SQUID between the on and off settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitReport {
    pub chi_c: f64,
    pub chi_l_max: f64,
    /// First mode with both neighbouring couplers on.
    #[serde(rename = "kL")]
    pub kl: f64,
    pub omega_rad_s: f64,
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub kappa_cap: f64,
    pub kappa_ind: f64,
    pub kappa_total: f64,
    pub flux_on: f64,
    pub flux_off: f64,
    /// First mode with one coupler on and the other off.
    #[serde(rename = "kL_off")]
    pub kl_off: f64,
    pub omega_off_rad_s: f64,
    #[serde(rename = "A_off")]
    pub amplitude_off: f64,
    pub chi_l_off: f64,
    pub cos_flux_off: f64,
    /// Net on-coupling in the pair configuration used during a walk.
    pub kappa_pair_on: f64,
}

impl CircuitReport {
    /// Solves the on and off configurations for identical resonators.
    ///
    /// On: `Φ_ext = Φ₀`, so `χ_l = −|χ_l|_max` on both sides. Off: a
    /// resonator in an active pair sees `−|χ_l|_max` on one side and
    /// `χ_off = 4χ_c (kL)²` on the other, where `kL` is itself the mode of
    /// that configuration; the pair is found by fixed-point iteration.
    pub fn solve(params: &CircuitParams) -> Result<Self> {
        params.validate()?;
        let chi_c = params.chi_c();
        let chi_l_max = params.chi_l_max();
        let flux_on = 1.0;
        let chi_on = chi_from_params(params, josephson_coefficient(flux_on, params)).chi_l;

        let on = solve_mode(chi_c, chi_on, chi_on, 1)?.with_params(params);
        let k_on = couplings(&on, &on, chi_c, chi_on);

        let off = solve_off_configuration(chi_c, chi_on, chi_l_max)?.with_params(params);
        let chi_l_off = chi_l_off_target(chi_c, off.kl);
        let flux_off = solve_flux_off(chi_c, off.kl, chi_l_max)?;
        let k_pair = couplings(&off, &off, chi_c, chi_on);

        Ok(Self {
            chi_c,
            chi_l_max,
            kl: on.kl,
            omega_rad_s: on.frequency(),
            amplitude: on.amplitude,
            kappa_cap: k_on.kappa_cap,
            kappa_ind: k_on.kappa_ind,
            kappa_total: k_on.kappa_total,
            flux_on,
            flux_off,
            kl_off: off.kl,
            omega_off_rad_s: off.frequency(),
            amplitude_off: off.amplitude,
            chi_l_off,
            cos_flux_off: chi_l_off / chi_l_max,
            kappa_pair_on: k_pair.kappa_total,
        })
    }

    /// Hardware-scale remarks; never fatal.
    pub fn feasibility_warnings(&self, theta: f64) -> Vec<String> {
        let mut warnings = Vec::new();
        let coupling_hz = self.kappa_pair_on.abs() / (2.0 * PI);
        if !(0.1..=10.0).contains(&(coupling_hz / NOMINAL_COUPLING_HZ)) {
            warnings.push(format!(
                "warning: coupling κ/2π = {coupling_hz:.4e} Hz is far from the ~10 MHz hardware scale"
            ));
        }
        if let Ok(tau) = pulse_duration(theta, self.kappa_pair_on, true) {
            if tau < SWITCHING_TIME_S {
                warnings.push(format!(
                    "warning: pulse duration τ = {tau:.4e} s is below the 0.1 μs switching budget"
                ));
            }
            if tau > 0.0 {
                let intervals = (PHOTON_LIFETIME_S / tau).floor();
                warnings.push(format!(
                    "note: photon lifetime 100 μs allows about {intervals:.0} intervals of τ"
                ));
            }
        }
        warnings
    }
}

/// Iterates `χ_off = 4χ_c·kL²` to self-consistency. A weak junction can push
/// the iterate out of the tunable range, in which case it never settles and
/// the failure is reported as unreachable rather than as a numeric error.
fn solve_off_configuration(chi_c: f64, chi_on: f64, chi_l_max: f64) -> Result<ModeSolution> {
    const MAX_ROUNDS: usize = 200;
    let mut mode = solve_mode(chi_c, chi_on, chi_on, 1)?;
    for _ in 0..MAX_ROUNDS {
        let next = solve_mode(chi_c, chi_on, chi_l_off_target(chi_c, mode.kl), 1)?;
        let settled = (next.kl - mode.kl).abs() <= 1e-14 * next.kl;
        mode = next;
        if settled {
            return Ok(mode);
        }
    }
    let target = chi_l_off_target(chi_c, mode.kl);
    if target > chi_l_max {
        return Err(Error::FluxOffUnreachable { target, chi_l_max });
    }
    Err(Error::NoFixedPoint(MAX_ROUNDS))
}

/// One point of a flux sweep on a single coupler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub flux_ratio: f64,
    pub chi_l: f64,
    #[serde(rename = "kL")]
    pub kl: f64,
    pub kappa_cap: f64,
    pub kappa_ind: f64,
    pub kappa_total: f64,
}

/// Sweeps one coupler's flux over `[0, 1]·Φ₀` in `points` samples, with the
/// other coupler of each resonator held on.
pub fn flux_sweep(params: &CircuitParams, points: usize) -> Result<Vec<SweepPoint>> {
    params.validate()?;
    let chi_c = params.chi_c();
    let chi_on = chi_from_params(params, josephson_coefficient(1.0, params)).chi_l;
    (0..points)
        .map(|i| {
            let flux_ratio = if points > 1 {
                i as f64 / (points - 1) as f64
            } else {
                0.0
            };
            let chi_l = chi_from_params(params, josephson_coefficient(flux_ratio, params)).chi_l;
            let mode = solve_mode(chi_c, chi_on, chi_l, 1)?.with_params(params);
            let k = couplings(&mode, &mode, chi_c, chi_l);
            Ok(SweepPoint {
                flux_ratio,
                chi_l,
                kl: mode.kl,
                kappa_cap: k.kappa_cap,
                kappa_ind: k.kappa_ind,
                kappa_total: k.kappa_total,
            })
        })
        .collect()
}

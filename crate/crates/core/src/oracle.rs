//! Brute-force reference computations for tests and acceptance runs.
//!
//! Nothing here touches the structured fast path in [`crate::walk`]: the
//! operators are built as explicit dense matrices from the `|α_k⟩` vectors
//! and exponentiated with a scaled Taylor series. The mode normalization is
//! integrated numerically rather than in closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Element, Tessellation, TessellationSet};
use crate::walk::{Convention, StateVector};

pub const DENSE_LIMIT: usize = 256;
pub const EVOLVE_LIMIT: usize = 64;
const MAX_TERMS: usize = 64;
const SERIES_TOLERANCE: f64 = 1e-17;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.data[i * self.n + j] * v[j]).sum())
            .collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().map(|x| x.norm()).sum())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

fn alpha_vectors(n: usize, t: &Tessellation) -> Vec<Vec<Complex64>> {
    let weight = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    t.elements()
        .iter()
        .map(|e| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            match *e {
                Element::Single(i) => v[i] = Complex64::new(1.0, 0.0),
                Element::Pair(i, j) => {
                    v[i] = weight;
                    v[j] = weight;
                }
            }
            v
        })
        .collect()
}

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::OracleTooLarge { size: n, limit });
    }
    Ok(())
}

fn check_partition(n: usize, t: &Tessellation) -> Result<()> {
    let violations = t.partition_violations(n);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidTessellation { index: 0, violations })
    }
}

/// `2 Σ_k |α_k⟩⟨α_k| − I` for the tessellation `t` on `n` nodes.
pub fn dense_hamiltonian(n: usize, t: &Tessellation) -> Result<DenseMatrix> {
    check_size(n, DENSE_LIMIT)?;
    check_partition(n, t)?;
    let mut h = DenseMatrix::identity(n).scale(Complex64::new(-1.0, 0.0));
    for alpha in alpha_vectors(n, t) {
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] += 2.0 * alpha[i] * alpha[j].conj();
            }
        }
    }
    Ok(h)
}

/// Hopping part of the hardware Hamiltonian in units of −κ: `σx` on each
/// pair, zero on singletons.
pub fn dense_hopping(n: usize, t: &Tessellation) -> Result<DenseMatrix> {
    check_size(n, DENSE_LIMIT)?;
    check_partition(n, t)?;
    let mut k = DenseMatrix::zeros(n);
    for (i, j) in t.pairs() {
        k[(i, j)] = Complex64::new(1.0, 0.0);
        k[(j, i)] = Complex64::new(1.0, 0.0);
    }
    Ok(k)
}

/// `exp(scalar · m)` by scaling and squaring around a Taylor series.
///
/// The argument is halved until its ∞-norm is at most ½, the series is
/// summed until the geometric bound on the remaining terms drops below
/// 1e−17, and the result is squared back.
pub fn taylor_expm(m: &DenseMatrix, scalar: Complex64) -> Result<DenseMatrix> {
    check_size(m.size(), DENSE_LIMIT)?;
    let a = m.scale(scalar);
    if !a.is_finite() {
        return Err(Error::SeriesDidNotConverge(0));
    }
    let norm = a.norm_inf();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let b_norm = b.norm_inf();

    let mut sum = DenseMatrix::identity(m.size());
    let mut term = DenseMatrix::identity(m.size());
    let mut converged = b_norm == 0.0;
    for k in 1..=MAX_TERMS {
        if converged {
            break;
        }
        term = term.matmul(&b).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        let ratio = b_norm / (k + 1) as f64;
        let tail = term.norm_inf() * ratio / (1.0 - ratio);
        converged = tail < SERIES_TOLERANCE;
    }
    if !converged {
        return Err(Error::SeriesDidNotConverge(MAX_TERMS));
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    Ok(sum)
}

/// Dense one-step walk operator `U = e^{iθH_{d−1}} ⋯ e^{iθH_0}`.
///
/// Under [`Convention::Physical`] each factor is `exp(iθK)` with `K` the
/// pair hopping matrix, which differs from `exp(iθH)` only by dropping the
/// phase on singletons.
pub fn dense_step_operator(n: usize, ts: &TessellationSet, theta: f64, convention: Convention) -> Result<DenseMatrix> {
    let mut u = DenseMatrix::identity(n);
    for t in ts {
        let generator = match convention {
            Convention::Abstract => dense_hamiltonian(n, t)?,
            Convention::Physical => dense_hopping(n, t)?,
        };
        let factor = taylor_expm(&generator, Complex64::new(0.0, theta))?;
        u = factor.matmul(&u);
    }
    Ok(u)
}

/// Applies the dense step operator `steps` times to `state`.
pub fn brute_force_evolve(
    state: &StateVector,
    ts: &TessellationSet,
    theta: f64,
    steps: usize,
    convention: Convention,
) -> Result<Vec<Complex64>> {
    let n = state.len();
    check_size(n, EVOLVE_LIMIT)?;
    let u = dense_step_operator(n, ts, theta, convention)?;
    let mut psi = state.amplitudes().to_vec();
    for _ in 0..steps {
        psi = u.apply(&psi);
    }
    Ok(psi)
}

/// Junction amplitude `A` from the normalization condition evaluated by
/// composite Simpson quadrature of the mode profile, in units of `L`.
pub fn normalization_by_quadrature(kl: f64, chi_c: f64, intervals: usize) -> f64 {
    let intervals = intervals + intervals % 2;
    let t = kl.tan();
    // mode on 0 ≤ s = x/L ≤ 1 with u(0) = 1; even about the centre
    let profile = |s: f64| {
        let u = (kl * s).cos() + t * (kl * s).sin();
        u * u
    };
    let h = 1.0 / intervals as f64;
    let mut acc = profile(0.0) + profile(1.0);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * profile(i as f64 * h);
    }
    let half_integral = acc * h / 3.0;
    1.0 / (2.0 * half_integral + 8.0 * chi_c).sqrt()
}

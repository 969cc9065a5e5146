//! Photon-count statistics of displaced thermal states.
//!
//! A single mode carrying the coherent amplitude `α` through a channel with
//! mean thermal photon number `N` is measured in the number basis with law
//!
//! ```text
//! p(n | α) = 1/(N+1) · (N/(N+1))^n · exp(−|α|²/(N+1)) · L_n(−|α|²/(N(N+1)))
//! ```
//!
//! which collapses to Poisson(|α|²) at `N = 0`. Its generating function
//! `G(z) = exp(−|α|²(1−z)/(N+1−Nz)) / (N+1−Nz)` depends on a product of
//! modes only through the total energy, which is what makes the exact
//! convolution oracle in [`exact`] and the tail exponents in [`tails`] work.

mod exact;
mod tails;

pub use exact::{
    exact_lower_tail, exact_lower_tail_split, exact_total_pmf, exact_total_pmf_split,
    exact_upper_tail, Cutoff, TotalCountPmf,
};
pub use tails::{
    chernoff_lower_logbound, chernoff_upper_exponent, chernoff_upper_tail_log, exponents,
    lambda_exponent, theta_exponent, LowerTailBounds,
};

use num_complex::Complex;
use rand::Rng;

use crate::error::{domain, Result};
use crate::scalar::{from_usize, lit, ln_factorial, RandomScalar, Real};

/// Mean thermal photon number `N ≥ 0` of the bosonic channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel<T> {
    n_thermal: T,
}

impl<T: Real> ChannelModel<T> {
    pub fn new(n_thermal: T) -> Result<Self> {
        if !(n_thermal >= T::zero()) || !n_thermal.is_finite() {
            return Err(domain("n_thermal", "finite and >= 0", n_thermal));
        }
        Ok(Self { n_thermal })
    }

    pub fn noiseless() -> Self {
        Self {
            n_thermal: T::zero(),
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.n_thermal == T::zero()
    }
}

impl<T: Copy> ChannelModel<T> {
    pub fn n_thermal(&self) -> T {
        self.n_thermal
    }
}

/// Photon-number threshold test on `k` modes: accept iff the total count is at
/// most `k·(N+δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec<T> {
    delta: T,
    k: usize,
    threshold: T,
}

impl<T: Real> DetectorSpec<T> {
    pub fn new(k: usize, delta: T, channel: &ChannelModel<T>) -> Result<Self> {
        if k == 0 {
            return Err(domain("k", "a positive integer", 0));
        }
        if !(delta > T::zero()) || !delta.is_finite() {
            return Err(domain("delta", "finite and > 0", delta));
        }
        Ok(Self {
            delta,
            k,
            threshold: from_usize::<T>(k) * (channel.n_thermal() + delta),
        })
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn threshold(&self) -> T {
        self.threshold
    }

    /// Largest total count the test accepts.
    ///
    /// A threshold within a relative 1e-9 of an integer is snapped to it so
    /// that `k·(N+δ)` products like `10·(0.2+0.1)` do not lose a count to
    /// rounding.
    pub fn max_accepted_count(&self) -> u64 {
        let t = self.threshold;
        let r = t.round();
        let snap = lit::<T>(1e-9) * T::one().max(t.abs());
        let chosen = if (t - r).abs() <= snap { r } else { t.floor() };
        chosen.to_u64().unwrap_or(u64::MAX)
    }

    /// Smallest count rejected by the test, `max_accepted_count + 1`.
    pub fn min_rejected_count(&self) -> u64 {
        self.max_accepted_count().saturating_add(1)
    }

    /// `⌈k(N+δ)⌉` (snapped like [`Self::max_accepted_count`]): the count in
    /// the Chernoff event `S_k ≥ k(N+δ)`, which contains the rejection event.
    pub fn threshold_ceil_count(&self) -> u64 {
        let t = self.threshold;
        let r = t.round();
        let snap = lit::<T>(1e-9) * T::one().max(t.abs());
        let chosen = if (t - r).abs() <= snap { r } else { t.ceil() };
        chosen.to_u64().unwrap_or(u64::MAX)
    }
}

/// First- and second-kind error exponents `(Λ(δ,N), Θ(δ,N))`, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair<T> {
    pub lambda_exp: T,
    pub theta_exp: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    Exact,
    Chernoff,
    PaperFormula,
}

/// Natural-log tail probability or log upper bound on one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailResult<T> {
    pub log_probability: T,
    pub kind: TailKind,
}

impl<T: Real> TailResult<T> {
    pub(crate) fn new(log_probability: T, kind: TailKind) -> Self {
        Self {
            log_probability: log_probability.min(T::zero()),
            kind,
        }
    }

    pub fn probability(&self) -> T {
        self.log_probability.exp()
    }
}

/// Laguerre polynomial `L_n(x)` by the three-term recurrence.
pub fn laguerre<T: Real>(n: usize, x: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = T::one() - x;
    for m in 1..n {
        let mf = from_usize::<T>(m);
        let next = ((lit::<T>(2.0) * mf + T::one() - x) * cur - mf * prev) / (mf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

fn check_energy<T: Real>(energy: T) -> Result<()> {
    if !(energy >= T::zero()) || !energy.is_finite() {
        return Err(domain("energy", "finite and >= 0", energy));
    }
    Ok(())
}

/// `p(0 | α), …, p(len−1 | α)` for `|α|² = energy`.
///
/// For `N > 0` the table runs the Laguerre recurrence directly on the
/// probabilities, `(n+1)p_{n+1} = q(2n+1+x)p_n − q²n·p_{n−1}` with
/// `q = N/(N+1)`, `x = |α|²/(N(N+1))`, carrying a running log scale so neither
/// `L_n(−x)` nor the prefactor `exp(−|α|²/(N+1))` over- or underflows.
pub fn photon_pmf_table<T: Real>(
    len: usize,
    energy: T,
    channel: &ChannelModel<T>,
) -> Result<Vec<T>> {
    check_energy(energy)?;
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return Ok(out);
    }
    let n = channel.n_thermal();
    if n == T::zero() {
        if energy == T::zero() {
            out.push(T::one());
            out.resize(len, T::zero());
            return Ok(out);
        }
        let ln_e = energy.ln();
        let mut ln_fact = T::zero();
        for j in 0..len {
            if j > 0 {
                ln_fact += from_usize::<T>(j).ln();
            }
            out.push((-energy + from_usize::<T>(j) * ln_e - ln_fact).exp());
        }
        return Ok(out);
    }

    let one = T::one();
    let q = n / (n + one);
    let x = energy / (n * (n + one));
    let big = T::max_value().powf(lit(0.25));
    let mut log_scale = -energy / (n + one) - (n + one).ln();
    let mut prev = T::zero();
    let mut cur = one;
    out.push(log_scale.exp());
    for j in 0..len - 1 {
        let jf = from_usize::<T>(j);
        let next = q * ((lit::<T>(2.0) * jf + one + x) * cur - q * jf * prev) / (jf + one);
        prev = cur;
        cur = next;
        if cur > big || (cur < big.recip() && cur > T::zero()) {
            log_scale += cur.ln();
            prev /= cur;
            cur = one;
        }
        out.push(if cur > T::zero() {
            (log_scale + cur.ln()).exp()
        } else {
            T::zero()
        });
    }
    Ok(out)
}

/// Single-mode photon-count probability `p(n | α)` with `|α|² = energy`.
pub fn photon_pmf<T: Real>(n: usize, energy: T, channel: &ChannelModel<T>) -> Result<T> {
    check_energy(energy)?;
    if channel.is_noiseless() {
        if energy == T::zero() {
            return Ok(if n == 0 { T::one() } else { T::zero() });
        }
        let nf = from_usize::<T>(n);
        return Ok((-energy + nf * energy.ln() - ln_factorial::<T>(n)).exp());
    }
    Ok(photon_pmf_table(n + 1, energy, channel)?[n])
}

/// Generating function `E[z^{S_k}]` of the total count over `k` modes with
/// combined energy `total_energy`.
pub fn mgf<T: Real>(z: T, total_energy: T, channel: &ChannelModel<T>, k: usize) -> Result<T> {
    check_energy(total_energy)?;
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    let n = channel.n_thermal();
    let denom = n + T::one() - n * z;
    if !(denom > T::zero()) || !z.is_finite() {
        return Err(domain("z", "below (N+1)/N", z));
    }
    let kf = from_usize::<T>(k);
    Ok((-total_energy * (T::one() - z) / denom - kf * denom.ln()).exp())
}

/// Draw one photon count from `p(· | amplitude)`.
///
/// The displaced thermal state is a Gaussian mixture of coherent states:
/// `γ ~ CN(amplitude, N)` followed by `n ~ Poisson(|γ|²)`.
pub fn sample_photon_count<T: RandomScalar, R: Rng + ?Sized>(
    amplitude: Complex<T>,
    channel: &ChannelModel<T>,
    rng: &mut R,
) -> u64 {
    let n = channel.n_thermal();
    let mean = if n == T::zero() {
        amplitude.norm_sqr()
    } else {
        let sd = (n / lit(2.0)).sqrt();
        let re = amplitude.re + sd * T::standard_normal(rng);
        let im = amplitude.im + sd * T::standard_normal(rng);
        re * re + im * im
    };
    T::poisson(mean, rng)
}

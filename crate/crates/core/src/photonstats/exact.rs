//! Exact law of the total count `S_k = n_1 + … + n_k` by convolution.
//!
//! The generating function of `S_k` depends on the per-mode energies only
//! through their sum, so any split gives the same law; the default split is
//! equal across modes.

use super::{
    check_energy, chernoff_upper_tail_log, photon_pmf_table, ChannelModel, TailKind, TailResult,
};
use crate::error::{domain, Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Captured probability mass required of every exact table.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Relative slack allowed for the truncated remainder of an upper tail.
const TAIL_RELATIVE_RESIDUAL: f64 = 1e-9;

const MAX_CUTOFF: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    /// Table covers `{0, …, n}`; rejected if it misses more than the tolerance.
    Fixed(usize),
    /// Grow from a moment-based guess until the mass is captured.
    Adaptive,
}

/// Probabilities of `S_k = 0, …, cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalCountPmf<T> {
    probs: Vec<T>,
}

impl<T: Real> TotalCountPmf<T> {
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn cutoff(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mass(&self) -> T {
        self.probs.iter().copied().sum()
    }

    /// `P(S_k ≤ max_count)`, exact whenever `max_count ≤ cutoff`.
    pub fn cdf(&self, max_count: u64) -> T {
        let end = (max_count as usize).min(self.cutoff());
        self.probs[..=end].iter().copied().sum()
    }

    /// Captured part of `P(S_k ≥ min_count)`; excludes mass beyond the cutoff.
    pub fn upper_tail_captured(&self, min_count: u64) -> T {
        let start = min_count as usize;
        if start > self.cutoff() {
            return T::zero();
        }
        self.probs[start..].iter().copied().sum()
    }
}

fn convolve_truncated<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let len = a.len();
    (0..len)
        .map(|n| (0..=n).map(|j| a[j] * b[n - j]).sum())
        .collect()
}

fn table_of_len<T: Real>(energies: &[T], channel: &ChannelModel<T>, len: usize) -> Result<Vec<T>> {
    let mut acc = photon_pmf_table(len, energies[0], channel)?;
    for &e in &energies[1..] {
        let mode = photon_pmf_table(len, e, channel)?;
        acc = convolve_truncated(&acc, &mode);
    }
    Ok(acc)
}

fn initial_len<T: Real>(k: usize, total_energy: T, channel: &ChannelModel<T>) -> usize {
    let n = channel.n_thermal();
    let kf = from_usize::<T>(k);
    let mean = kf * n + total_energy;
    let var = kf * n * (n + T::one()) + (lit::<T>(2.0) * n + T::one()) * total_energy;
    let guess = mean + lit::<T>(20.0) * var.sqrt() + lit(32.0);
    guess.to_usize().unwrap_or(MAX_CUTOFF).clamp(16, MAX_CUTOFF)
}

/// Exact law of the total count for per-mode energies `energies`.
pub fn exact_total_pmf_split<T: Real>(
    energies: &[T],
    channel: &ChannelModel<T>,
    cutoff: Cutoff,
) -> Result<TotalCountPmf<T>> {
    if energies.is_empty() {
        return Err(domain("k", "a positive integer", 0));
    }
    for &e in energies {
        check_energy(e)?;
    }
    let need = T::one() - lit(MASS_TOLERANCE);
    match cutoff {
        Cutoff::Fixed(c) => {
            let probs = table_of_len(energies, channel, c + 1)?;
            let captured: T = probs.iter().copied().sum();
            if captured < need {
                return Err(Error::Cutoff {
                    cutoff: c,
                    captured: captured.to_f64().unwrap_or(f64::NAN),
                });
            }
            Ok(TotalCountPmf { probs })
        }
        Cutoff::Adaptive => {
            let total: T = energies.iter().copied().sum();
            let mut len = initial_len(energies.len(), total, channel);
            loop {
                let probs = table_of_len(energies, channel, len)?;
                let captured: T = probs.iter().copied().sum();
                if captured >= need {
                    return Ok(TotalCountPmf { probs });
                }
                if len >= MAX_CUTOFF {
                    return Err(Error::Cutoff {
                        cutoff: len - 1,
                        captured: captured.to_f64().unwrap_or(f64::NAN),
                    });
                }
                len = (len * 2).min(MAX_CUTOFF);
            }
        }
    }
}

/// Exact law of `S_k` with `total_energy` split equally over `k` modes.
pub fn exact_total_pmf<T: Real>(
    k: usize,
    total_energy: T,
    channel: &ChannelModel<T>,
    cutoff: Cutoff,
) -> Result<TotalCountPmf<T>> {
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    check_energy(total_energy)?;
    let per_mode = total_energy / from_usize(k);
    exact_total_pmf_split(&vec![per_mode; k], channel, cutoff)
}

/// `P(S_k ≤ max_count)`, summed exactly over the finite support.
pub fn exact_lower_tail<T: Real>(
    k: usize,
    total_energy: T,
    channel: &ChannelModel<T>,
    max_count: u64,
) -> Result<TailResult<T>> {
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    check_energy(total_energy)?;
    let per_mode = total_energy / from_usize(k);
    exact_lower_tail_split(&vec![per_mode; k], channel, max_count)
}

/// [`exact_lower_tail`] for explicit per-mode energies.
pub fn exact_lower_tail_split<T: Real>(
    energies: &[T],
    channel: &ChannelModel<T>,
    max_count: u64,
) -> Result<TailResult<T>> {
    if energies.is_empty() {
        return Err(domain("k", "a positive integer", 0));
    }
    for &e in energies {
        check_energy(e)?;
    }
    let probs = table_of_len(energies, channel, max_count as usize + 1)?;
    let p: T = probs.iter().copied().sum();
    Ok(TailResult::new(p.min(T::one()).ln(), TailKind::Exact))
}

/// `P(S_k ≥ min_count)` including a Chernoff bound on the mass beyond the
/// table, grown until that remainder is below a relative 1e-9 of the captured
/// tail. The returned value is therefore an upper bracket, tight to 1e-9.
pub fn exact_upper_tail<T: Real>(
    k: usize,
    total_energy: T,
    channel: &ChannelModel<T>,
    min_count: u64,
) -> Result<TailResult<T>> {
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    check_energy(total_energy)?;
    if min_count == 0 {
        return Ok(TailResult::new(T::zero(), TailKind::Exact));
    }
    let per_mode = total_energy / from_usize(k);
    let energies = vec![per_mode; k];
    let mut len = initial_len(k, total_energy, channel).max(min_count as usize + 16);
    loop {
        let probs = table_of_len(&energies, channel, len)?;
        let captured: T = probs[(min_count as usize).min(len)..].iter().copied().sum();
        let residual = chernoff_upper_tail_log(k, total_energy, channel, len as u64)?.exp();
        if residual <= lit::<T>(TAIL_RELATIVE_RESIDUAL) * captured || residual == T::zero() {
            let p = (captured + residual).min(T::one());
            return Ok(TailResult::new(p.ln(), TailKind::Exact));
        }
        if len >= MAX_CUTOFF {
            return Err(Error::Cutoff {
                cutoff: len - 1,
                captured: captured.to_f64().unwrap_or(f64::NAN),
            });
        }
        len = (len * 2).min(MAX_CUTOFF);
    }
}

#[cfg(test)]
mod tests {
    use super::super::mgf;
    use super::*;

    fn ch(n: f64) -> ChannelModel<f64> {
        ChannelModel::new(n).unwrap()
    }

    #[test]
    fn single_mode_thermal_is_geometric() {
        let t = exact_total_pmf(1, 0.0, &ch(1.0), Cutoff::Fixed(64)).unwrap();
        for (n, &p) in t.probs().iter().enumerate() {
            assert!((p - 0.5 * 0.5f64.powi(n as i32)).abs() < 1e-16);
        }
    }

    #[test]
    fn two_modes_is_self_convolution() {
        let one = exact_total_pmf(1, 0.0, &ch(1.0), Cutoff::Fixed(128)).unwrap();
        let two = exact_total_pmf(2, 0.0, &ch(1.0), Cutoff::Fixed(128)).unwrap();
        for n in 0..=128 {
            let conv: f64 = (0..=n).map(|j| one.probs()[j] * one.probs()[n - j]).sum();
            assert!((two.probs()[n] - conv).abs() < 1e-14);
            // Negative binomial: (n+1)/2^{n+2}.
            assert!((two.probs()[n] - (n as f64 + 1.0) / 2f64.powi(n as i32 + 2)).abs() < 1e-14);
        }
    }

    #[test]
    fn split_invariance() {
        let a = exact_total_pmf_split(&[5.0, 0.0, 0.0], &ch(0.7), Cutoff::Adaptive).unwrap();
        let b =
            exact_total_pmf_split(&[2.0, 2.0, 1.0], &ch(0.7), Cutoff::Fixed(a.cutoff())).unwrap();
        let c = exact_total_pmf(3, 5.0, &ch(0.7), Cutoff::Fixed(a.cutoff())).unwrap();
        for n in 0..=a.cutoff() {
            assert!((a.probs()[n] - b.probs()[n]).abs() < 1e-12);
            assert!((a.probs()[n] - c.probs()[n]).abs() < 1e-12);
        }
    }

    #[test]
    fn generating_function_oracle() {
        let t = exact_total_pmf(2, 3.0, &ch(1.0), Cutoff::Adaptive).unwrap();
        let series: f64 = t
            .probs()
            .iter()
            .enumerate()
            .map(|(n, p)| p * 0.5f64.powi(n as i32))
            .sum();
        assert!((series - mgf(0.5, 3.0, &ch(1.0), 2).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn fixed_cutoff_too_small_is_rejected() {
        assert!(matches!(
            exact_total_pmf(4, 10.0, &ch(1.0), Cutoff::Fixed(10)),
            Err(Error::Cutoff { .. })
        ));
    }

    #[test]
    fn adaptive_mass_bound() {
        for &(k, e, n) in &[(1, 0.0, 4.0), (5, 30.0, 0.1), (16, 2.0, 2.0)] {
            let t = exact_total_pmf(k, e, &ch(n), Cutoff::Adaptive).unwrap();
            assert!(t.mass() >= 1.0 - 1e-12);
            assert!(t.mass() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn tails_are_consistent_with_table() {
        let t = exact_total_pmf(4, 6.0, &ch(0.5), Cutoff::Adaptive).unwrap();
        let lower = exact_lower_tail(4, 6.0, &ch(0.5), 5).unwrap().probability();
        assert!((lower - t.cdf(5)).abs() < 1e-14);
        let upper = exact_upper_tail(4, 6.0, &ch(0.5), 6).unwrap().probability();
        assert!((upper - t.upper_tail_captured(6)).abs() < 1e-11);
        assert!((upper + lower - 1.0).abs() < 1e-11);
    }

    #[test]
    fn deep_upper_tail_resolves_below_mass_tolerance() {
        // Geometric with N = 0.2: P(S ≥ 40) = (1/6)^40, far below 1e-12.
        let log_p = exact_upper_tail(1, 0.0, &ch(0.2), 40)
            .unwrap()
            .log_probability;
        assert!((log_p - 40.0 * (0.2f64 / 1.2).ln()).abs() < 1e-8);
    }
}

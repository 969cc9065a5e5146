//! Tail exponents of the total photon count and their Chernoff oracles.

use super::{check_energy, ChannelModel, ExponentPair, TailKind, TailResult};
use crate::error::{domain, Result};
use crate::optimize::{golden_min, interior_max};
use crate::scalar::{from_usize, lit, Real};

fn check_delta<T: Real>(delta: T) -> Result<()> {
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(domain("delta", "finite and > 0", delta));
    }
    Ok(())
}

/// First-kind exponent
/// `Λ(δ,N) = (N+δ)·ln((N+δ)/N) − (N+δ+1)·ln((N+δ+1)/(N+1))`.
///
/// Undefined at `N = 0`, where the first logarithm diverges.
pub fn lambda_exponent<T: Real>(delta: T, channel: &ChannelModel<T>) -> Result<T> {
    check_delta(delta)?;
    let n = channel.n_thermal();
    if n == T::zero() {
        return Err(domain("n_thermal", "> 0 for the first-kind exponent", n));
    }
    let one = T::one();
    let value = (n + delta) * (delta / n).ln_1p() - (n + delta + one) * (delta / (n + one)).ln_1p();
    Ok(value.max(T::zero()))
}

/// Second-kind exponent
/// `Θ(δ,N) = (1 − (N+1)^{−1/(N+δ)}) / (N+1 − N·(N+1)^{−1/(N+δ)})`.
///
/// Exactly zero at `N = 0`.
pub fn theta_exponent<T: Real>(delta: T, channel: &ChannelModel<T>) -> Result<T> {
    check_delta(delta)?;
    let n = channel.n_thermal();
    let one = T::one();
    let log_x = -n.ln_1p() / (n + delta);
    let one_minus_x = -log_x.exp_m1();
    let x = log_x.exp();
    Ok(one_minus_x / (n + one - n * x))
}

pub fn exponents<T: Real>(delta: T, channel: &ChannelModel<T>) -> Result<ExponentPair<T>> {
    Ok(ExponentPair {
        lambda_exp: lambda_exponent(delta, channel)?,
        theta_exp: theta_exponent(delta, channel)?,
    })
}

/// Per-mode upper-tail Chernoff exponent
/// `sup_{0<s<ln((N+1)/N)} s(N+δ) + ln(N+1 − N·e^s)`, found numerically.
pub fn chernoff_upper_exponent<T: Real>(delta: T, channel: &ChannelModel<T>) -> Result<T> {
    check_delta(delta)?;
    let n = channel.n_thermal();
    if n == T::zero() {
        return Err(domain("n_thermal", "> 0 for the first-kind exponent", n));
    }
    let one = T::one();
    let s_max = ((n + one) / n).ln();
    let objective = |s: T| {
        let inner = n + one - n * s.exp();
        if inner > T::zero() {
            s * (n + delta) + inner.ln()
        } else {
            T::neg_infinity()
        }
    };
    Ok(interior_max(objective, T::zero(), s_max, T::search_tolerance())?.value)
}

/// Natural log of the optimized Chernoff bound on `P(S_k ≥ count)` for `k`
/// modes of combined energy `energy`. Returns `0` when `count` does not exceed
/// the mean and `−∞` when the event is impossible.
pub fn chernoff_upper_tail_log<T: Real>(
    k: usize,
    energy: T,
    channel: &ChannelModel<T>,
    count: u64,
) -> Result<T> {
    check_energy(energy)?;
    let n = channel.n_thermal();
    let one = T::one();
    let kf = from_usize::<T>(k);
    let c = T::from_u64(count).expect("count representable");
    if c <= kf * n + energy {
        return Ok(T::zero());
    }
    if n == T::zero() {
        if energy == T::zero() {
            return Ok(T::neg_infinity());
        }
        // Poisson: optimum at e^s = c/E.
        let s = (c / energy).ln();
        return Ok((-s * c + energy * s.exp_m1()).min(T::zero()));
    }
    let s_max = ((n + one) / n).ln();
    let objective = |s: T| {
        let z = s.exp();
        let d = n + one - n * z;
        if d > T::zero() {
            -s * c - energy * (one - z) / d - kf * d.ln()
        } else {
            T::infinity()
        }
    };
    let o = golden_min(objective, T::zero(), s_max, T::search_tolerance());
    Ok(o.value.min(T::zero()))
}

/// Lower-tail bounds on `P(S_k ≤ k(N+δ))` for a signal of energy `‖γ‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerTailBounds<T> {
    /// `inf_{s>0}` of the Chernoff expression; always a valid bound.
    pub rigorous: TailResult<T>,
    /// `−‖γ‖²·Θ(δ,N)`, reported for comparison only.
    pub paper_form: TailResult<T>,
}

pub fn chernoff_lower_logbound<T: Real>(
    k: usize,
    delta: T,
    signal_energy: T,
    channel: &ChannelModel<T>,
) -> Result<LowerTailBounds<T>> {
    check_delta(delta)?;
    check_energy(signal_energy)?;
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    let n = channel.n_thermal();
    let one = T::one();
    let kf = from_usize::<T>(k);
    let objective = |s: T| {
        let w = (-s).exp();
        let d = n + one - n * w;
        s * kf * (n + delta) - kf * d.ln() - signal_energy * (-(-s).exp_m1()) / d
    };
    // The objective is convex with slope kδ − ‖γ‖² at the origin.
    let log_bound = if kf * delta >= signal_energy {
        T::zero()
    } else {
        let mut hi = T::one();
        let mut grows = 0;
        while objective(hi) <= objective(hi / lit(2.0)) {
            hi *= lit(2.0);
            grows += 1;
            if grows > 200 {
                return Err(crate::Error::Bracket(
                    "lower-tail Chernoff objective".into(),
                ));
            }
        }
        golden_min(objective, T::zero(), hi, T::search_tolerance()).value
    };
    let theta = theta_exponent(delta, channel)?;
    Ok(LowerTailBounds {
        rigorous: TailResult::new(log_bound, TailKind::Chernoff),
        paper_form: TailResult::new(-signal_energy * theta, TailKind::PaperFormula),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(n: f64) -> ChannelModel<f64> {
        ChannelModel::new(n).unwrap()
    }

    #[test]
    fn lambda_direct_evaluation() {
        let expected = 2.0 * 2f64.ln() - 3.0 * 1.5f64.ln();
        assert!((lambda_exponent(1.0, &ch(1.0)).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.169_899_036_795).abs() < 1e-11);
        assert!(lambda_exponent(1e-9, &ch(1.0)).unwrap() < 1e-15);
        assert!(lambda_exponent(1.0, &ch(0.0)).is_err());
        assert!(lambda_exponent(0.0, &ch(1.0)).is_err());
    }

    #[test]
    fn theta_direct_evaluation() {
        let r = 2f64.powf(-0.5);
        let expected = (1.0 - r) / (2.0 - r);
        assert!((theta_exponent(1.0, &ch(1.0)).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.226_540_919_661).abs() < 1e-11);
        assert_eq!(theta_exponent(1.0, &ch(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn theta_decreases_toward_zero_in_delta() {
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let d = 0.01 * 1.5f64.powi(i);
            let t = theta_exponent(d, &ch(1.0)).unwrap();
            assert!(t < prev);
            prev = t;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn chernoff_matches_lambda() {
        for &(d, n) in &[(1.0, 1.0), (0.01, 1.0), (2.0, 0.3)] {
            let c = chernoff_upper_exponent(d, &ch(n)).unwrap();
            let l = lambda_exponent(d, &ch(n)).unwrap();
            assert!((c - l).abs() < 1e-9, "δ={d} N={n}: {c} vs {l}");
        }
    }

    #[test]
    fn closed_form_optimizer_location() {
        // e^{s*} = (N+δ)(N+1)/(N(N+δ+1))
        let (d, n) = (1.0_f64, 1.0_f64);
        let s_star = ((n + d) * (n + 1.0) / (n * (n + d + 1.0))).ln();
        let at_star = s_star * (n + d) + (n + 1.0 - n * s_star.exp()).ln();
        assert!((at_star - lambda_exponent(d, &ch(n)).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn lower_bound_trivial_without_signal() {
        let b = chernoff_lower_logbound(1, 1.0, 0.0, &ch(1.0)).unwrap();
        assert_eq!(b.rigorous.log_probability, 0.0);
        assert_eq!(b.paper_form.log_probability, 0.0);
        assert_eq!(b.rigorous.kind, TailKind::Chernoff);
    }

    #[test]
    fn lower_bound_matches_grid_search() {
        let (k, d, e, n) = (2usize, 0.5_f64, 20.0_f64, 0.5_f64);
        let g = |s: f64| {
            let w = (-s).exp();
            let dd = n + 1.0 - n * w;
            s * k as f64 * (n + d) - k as f64 * dd.ln() - e * (1.0 - w) / dd
        };
        let grid = (1..=2_000_000)
            .map(|i| g(i as f64 * 1e-5))
            .fold(f64::INFINITY, f64::min);
        let b = chernoff_lower_logbound(k, d, e, &ch(n)).unwrap();
        assert!((b.rigorous.log_probability - grid.min(0.0)).abs() < 1e-6);
        assert!(b.rigorous.log_probability < -5.0);
    }

    #[test]
    fn upper_tail_chernoff_is_trivial_below_mean() {
        assert_eq!(chernoff_upper_tail_log(4, 0.0, &ch(1.0), 3).unwrap(), 0.0);
        assert_eq!(
            chernoff_upper_tail_log(4, 0.0, &ch(0.0), 1).unwrap(),
            f64::NEG_INFINITY
        );
        // For k modes at zero energy the optimized bound at count k(N+δ) is −kΛ.
        let v = chernoff_upper_tail_log(8, 0.0, &ch(1.0), 16).unwrap();
        assert!((v + 8.0 * lambda_exponent(1.0, &ch(1.0)).unwrap()).abs() < 1e-9);
    }
}

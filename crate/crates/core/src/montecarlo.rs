//! Monte Carlo estimates of the identification error probabilities.
//!
//! Under the displacement `D(−α_m)` both error events of the threshold test
//! become statements about a classical total photon count, so the photon
//! detector is simulated by drawing per-mode counts directly. The heterodyne
//! baseline is the ball test `‖z − α_m‖² ≤ τ` on `z = α + w`.
//!
//! Trials are split into chunks; chunk `c` of estimator domain `d` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `(d << 32) | c`. Chunk counts
//! are integers merged by summation, so an estimate depends only on
//! `(seed, chunks, trials)` and never on thread scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{Binomial, ContinuousCDF, DiscreteCDF, Normal};
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{domain, Error, Result};
use crate::photonstats::{
    exact_lower_tail_split, exact_upper_tail, sample_photon_count, ChannelModel, DetectorSpec,
};
use crate::scheme::{AmplitudeVector, SignatureSet};

pub const DEFAULT_CHUNKS: usize = 64;

/// Two-sided coverage used for every reported interval.
pub const CONFIDENCE_LEVEL: f64 = 0.997;

/// Truncation tolerance of the noncentral chi-square Poisson mixture.
pub const SERIES_TOLERANCE: f64 = 1e-10;

const MAX_SERIES_TERMS: usize = 1_000_000;

/// Stream reserved for code construction, disjoint from every trial stream.
const CODE_STREAM: u64 = u64::MAX;

/// Generator for building a codebook from `seed` without reusing any stream
/// the estimators draw from.
pub fn code_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(CODE_STREAM);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub chunks: usize,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            chunks: DEFAULT_CHUNKS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(domain("trials", ">= 1", 0));
        }
        if self.chunks == 0 {
            return Err(domain("chunks", ">= 1", 0));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub successes: u64,
    pub trials: u64,
    pub point: f64,
    pub stderr: f64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_counts(successes: u64, trials: u64, seed: u64) -> Self {
        let point = successes as f64 / trials as f64;
        Self {
            successes,
            trials,
            point,
            stderr: (point * (1.0 - point) / trials as f64).sqrt(),
            seed,
        }
    }

    /// Wilson score interval at the given two-sided coverage.
    pub fn wilson(&self, level: f64) -> (f64, f64) {
        let z = normal_quantile(0.5 + level / 2.0);
        let n = self.trials as f64;
        let p = self.point;
        let z2 = z * z;
        let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        ((centre - half).max(0.0), (centre + half).min(1.0))
    }

    /// Whether the success count is inside the exact binomial acceptance
    /// interval of a true probability `p`.
    pub fn consistent_with(&self, p: f64, level: f64) -> Result<bool> {
        let (lo, hi) = binomial_acceptance_interval(self.trials, p, level)?;
        Ok((lo..=hi).contains(&self.successes))
    }
}

fn normal_quantile(q: f64) -> f64 {
    Normal::standard().inverse_cdf(q)
}

/// Central range `[lo, hi]` of `Binomial(n, p)` holding at least `level` of
/// the mass, with at most `(1−level)/2` excluded on each side.
pub fn binomial_acceptance_interval(n: u64, p: f64, level: f64) -> Result<(u64, u64)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("p", "in [0, 1]", p));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(domain("level", "in (0, 1)", level));
    }
    let dist = Binomial::new(p, n).map_err(|e| Error::Precondition(e.to_string()))?;
    let tail = (1.0 - level) / 2.0;
    // Smallest c with P(X ≤ c) ≥ q; the cdf is monotone in c.
    let quantile = |q: f64| {
        let (mut lo, mut hi) = (0u64, n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if dist.cdf(mid) >= q {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    };
    // P(X < lo) ≤ tail, i.e. lo is the smallest c with P(X ≤ c) > tail.
    let lo = {
        let c = quantile(tail);
        if dist.cdf(c) > tail {
            c
        } else {
            c + 1
        }
    };
    let hi = quantile(1.0 - tail);
    Ok((lo.min(hi), hi))
}

fn run_trials<F>(cfg: &McConfig, domain_tag: u64, trial: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    cfg.validate()?;
    let chunks = cfg.chunks as u64;
    let base = cfg.trials / chunks;
    let extra = cfg.trials % chunks;
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream((domain_tag << 32) | c);
            let n = base + u64::from(c < extra);
            (0..n).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum();
    Ok(McEstimate::from_counts(successes, cfg.trials, cfg.seed))
}

fn total_count<R: Rng + ?Sized>(
    amplitudes: &[Complex64],
    channel: &ChannelModel<f64>,
    rng: &mut R,
) -> u64 {
    amplitudes
        .iter()
        .map(|&a| sample_photon_count(a, channel, rng))
        .sum()
}

fn check_detector(code: &SignatureSet<f64>, detector: &DetectorSpec<f64>) -> Result<()> {
    if code.k() != detector.k() {
        return Err(Error::LengthMismatch {
            left: code.k(),
            right: detector.k(),
        });
    }
    Ok(())
}

/// First-kind error: `k` thermal counts (zero energy) exceed `k(N+δ)`.
/// The same for every user, so only the code's `k` is used.
pub fn estimate_lambda1(
    code: &SignatureSet<f64>,
    channel: &ChannelModel<f64>,
    detector: &DetectorSpec<f64>,
    cfg: &McConfig,
) -> Result<McEstimate> {
    check_detector(code, detector)?;
    let vacuum = vec![Complex64::new(0.0, 0.0); code.k()];
    let limit = detector.max_accepted_count();
    run_trials(cfg, 0, |rng| total_count(&vacuum, channel, rng) > limit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStrategy {
    /// Receiver and sender of the closest pair.
    WorstPair,
    /// A uniformly random ordered pair `m ≠ m′` per trial.
    AllPairsSampled,
}

/// Second-kind error: the count of displaced thermal modes with amplitudes
/// `Δ = α_{m′} − α_m` is accepted by receiver `m`.
pub fn estimate_lambda2(
    code: &SignatureSet<f64>,
    channel: &ChannelModel<f64>,
    detector: &DetectorSpec<f64>,
    cfg: &McConfig,
    strategy: PairStrategy,
) -> Result<McEstimate> {
    check_detector(code, detector)?;
    let m = code.len();
    if m < 2 {
        return Err(Error::Precondition(format!(
            "second-kind error needs M ≥ 2 signatures, got {m}"
        )));
    }
    let limit = detector.max_accepted_count();
    match strategy {
        PairStrategy::WorstPair => {
            let diff = worst_pair_difference(code)?;
            estimate_false_accept(&diff, channel, detector, cfg)
        }
        PairStrategy::AllPairsSampled => {
            let sigs = code.signatures();
            run_trials(cfg, 1, |rng| {
                let receiver = rng.random_range(0..m);
                let mut sender = rng.random_range(0..m - 1);
                if sender >= receiver {
                    sender += 1;
                }
                let diff: Vec<Complex64> = sigs[sender]
                    .modes()
                    .iter()
                    .zip(sigs[receiver].modes())
                    .map(|(a, b)| a - b)
                    .collect();
                total_count(&diff, channel, rng) <= limit
            })
        }
    }
}

/// Acceptance probability of a displaced thermal product with amplitudes `diff`.
pub fn estimate_false_accept(
    diff: &AmplitudeVector<f64>,
    channel: &ChannelModel<f64>,
    detector: &DetectorSpec<f64>,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if diff.k() != detector.k() {
        return Err(Error::LengthMismatch {
            left: diff.k(),
            right: detector.k(),
        });
    }
    let limit = detector.max_accepted_count();
    run_trials(cfg, 1, |rng| {
        total_count(diff.modes(), channel, rng) <= limit
    })
}

/// `α_{m′} − α_m` for the closest pair, receiver `m` the lower index.
pub fn worst_pair_difference(code: &SignatureSet<f64>) -> Result<AmplitudeVector<f64>> {
    let (m, m2) = code
        .worst_pair()
        .ok_or_else(|| Error::Precondition("code has fewer than two signatures".into()))?;
    code.signatures()[m2].difference(&code.signatures()[m])
}

/// Exact first-kind error probability `P(S_k ≥ min_rejected_count)` at zero energy.
pub fn exact_lambda1(channel: &ChannelModel<f64>, detector: &DetectorSpec<f64>) -> Result<f64> {
    Ok(exact_upper_tail(detector.k(), 0.0, channel, detector.min_rejected_count())?.probability())
}

/// Exact acceptance probability for the displacement `diff`.
pub fn exact_false_accept(
    diff: &AmplitudeVector<f64>,
    channel: &ChannelModel<f64>,
    detector: &DetectorSpec<f64>,
) -> Result<f64> {
    let energies: Vec<f64> = diff.modes().iter().map(|z| z.norm_sqr()).collect();
    Ok(exact_lower_tail_split(&energies, channel, detector.max_accepted_count())?.probability())
}

/// Exact average second-kind error over all ordered pairs.
pub fn exact_lambda2_all_pairs(
    code: &SignatureSet<f64>,
    channel: &ChannelModel<f64>,
    detector: &DetectorSpec<f64>,
) -> Result<f64> {
    let sigs = code.signatures();
    let m = sigs.len();
    if m < 2 {
        return Err(Error::Precondition(format!(
            "second-kind error needs M ≥ 2 signatures, got {m}"
        )));
    }
    let mut sum = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                sum += exact_false_accept(&sigs[j].difference(&sigs[i])?, channel, detector)?;
            }
        }
    }
    Ok(sum / (m * (m - 1)) as f64)
}

/// Ball test on `z = α + w` with `w ~ CN(0, σ²·I_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterodyneSpec {
    noise_variance: f64,
    threshold: f64,
}

impl HeterodyneSpec {
    pub fn new(noise_variance: f64, threshold: f64) -> Result<Self> {
        if !(noise_variance >= 1.0) || !noise_variance.is_finite() {
            return Err(domain(
                "noise_variance",
                "finite and >= 1 (shot-noise floor)",
                noise_variance,
            ));
        }
        if !(threshold >= 0.0) || threshold.is_nan() {
            return Err(domain("threshold", ">= 0", threshold));
        }
        Ok(Self {
            noise_variance,
            threshold,
        })
    }

    /// `σ² = N+1` and `τ = k·σ²·(1 + slack)`. At `N = 0` this is the
    /// unit-variance Gaussian channel.
    pub fn for_channel(k: usize, channel: &ChannelModel<f64>, slack: f64) -> Result<Self> {
        if !(slack >= 0.0) {
            return Err(domain("slack", ">= 0", slack));
        }
        let var = channel.n_thermal() + 1.0;
        Self::new(var, k as f64 * var * (1.0 + slack))
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterodyneEstimates {
    pub lambda1: McEstimate,
    pub lambda2_worst: McEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterodyneExact {
    pub lambda1: f64,
    pub lambda2: f64,
}

fn shifted_norm_sqr<R: Rng + ?Sized>(shift: &[Complex64], sd: f64, rng: &mut R) -> f64 {
    shift
        .iter()
        .map(|s| {
            let re = s.re + sd * rng.sample::<f64, _>(rand_distr::StandardNormal);
            let im = s.im + sd * rng.sample::<f64, _>(rand_distr::StandardNormal);
            re * re + im * im
        })
        .sum()
}

pub fn heterodyne_simulate(
    code: &SignatureSet<f64>,
    spec: &HeterodyneSpec,
    cfg: &McConfig,
) -> Result<HeterodyneEstimates> {
    let sd = (spec.noise_variance / 2.0).sqrt();
    let tau = spec.threshold;
    let zero = vec![Complex64::new(0.0, 0.0); code.k()];
    let lambda1 = run_trials(cfg, 2, |rng| shifted_norm_sqr(&zero, sd, rng) > tau)?;
    let diff = worst_pair_difference(code)?;
    let lambda2_worst = run_trials(cfg, 3, |rng| shifted_norm_sqr(diff.modes(), sd, rng) <= tau)?;
    Ok(HeterodyneEstimates {
        lambda1,
        lambda2_worst,
    })
}

/// Exact ball-test errors from chi-square laws with `2k` degrees of freedom:
/// `λ₁ = Q(k, τ/σ²)` and `λ₂ = Σ_j Pois(j; d²/σ²)·P(k+j, τ/σ²)`.
pub fn heterodyne_analytic(
    k: usize,
    spec: &HeterodyneSpec,
    distance: f64,
) -> Result<HeterodyneExact> {
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    if !(distance >= 0.0) || !distance.is_finite() {
        return Err(domain("distance", "finite and >= 0", distance));
    }
    let x = spec.threshold / spec.noise_variance;
    let a = k as f64;
    let lambda1 = if x == 0.0 { 1.0 } else { gamma_ur(a, x) };
    let mu = distance * distance / spec.noise_variance;
    let lambda2 = if x == 0.0 {
        0.0
    } else if mu == 0.0 {
        gamma_lr(a, x)
    } else {
        let mut sum = 0.0;
        let mut weight_seen = 0.0;
        let mut j = 0usize;
        loop {
            let jf = j as f64;
            let w = (-mu + jf * mu.ln() - ln_gamma(jf + 1.0)).exp();
            sum += w * gamma_lr(a + jf, x);
            weight_seen += w;
            // P(k+j, x) ≤ 1, so the unseen weight bounds the truncation error.
            if jf > mu && 1.0 - weight_seen < SERIES_TOLERANCE {
                break;
            }
            j += 1;
            if j > MAX_SERIES_TERMS {
                return Err(Error::Series(format!(
                    "noncentral chi-square mixture did not converge at noncentrality {mu}"
                )));
            }
        }
        sum.min(1.0)
    };
    Ok(HeterodyneExact { lambda1, lambda2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::photonstats::lambda_exponent;

    fn ch(n: f64) -> ChannelModel<f64> {
        ChannelModel::new(n).unwrap()
    }

    fn antipodal(k: usize, a: f64) -> SignatureSet<f64> {
        let v = |s: f64| AmplitudeVector::new(vec![Complex64::new(s * a, 0.0); k]);
        SignatureSet::new(k, 2.0 * a * a, a, vec![v(1.0), v(-1.0)]).unwrap()
    }

    #[test]
    fn noiseless_channel_never_rejects() {
        let code = antipodal(3, 1.0);
        let det = DetectorSpec::new(3, 0.5, &ch(0.0)).unwrap();
        let e = estimate_lambda1(&code, &ch(0.0), &det, &McConfig::new(10_000, 1)).unwrap();
        assert_eq!(e.successes, 0);
        assert_eq!(e.point, 0.0);
    }

    #[test]
    fn estimates_are_reproducible() {
        let code = antipodal(2, 0.8);
        let det = DetectorSpec::new(2, 0.5, &ch(1.0)).unwrap();
        let cfg = McConfig::new(20_001, 42);
        let a =
            estimate_lambda2(&code, &ch(1.0), &det, &cfg, PairStrategy::AllPairsSampled).unwrap();
        let b =
            estimate_lambda2(&code, &ch(1.0), &det, &cfg, PairStrategy::AllPairsSampled).unwrap();
        assert_eq!(a, b);
        let c = estimate_lambda2(
            &code,
            &ch(1.0),
            &det,
            &McConfig::new(20_001, 43),
            PairStrategy::AllPairsSampled,
        )
        .unwrap();
        assert_ne!(a.successes, c.successes);
    }

    #[test]
    fn lambda1_matches_oracle_and_bound() {
        let (k, n) = (8, ch(1.0));
        let code = antipodal(k, 1.0);
        let det = DetectorSpec::new(k, 1.0, &n).unwrap();
        let e = estimate_lambda1(&code, &n, &det, &McConfig::new(200_000, 7)).unwrap();
        let exact = exact_lambda1(&n, &det).unwrap();
        assert!(e.consistent_with(exact, CONFIDENCE_LEVEL).unwrap());
        let bound = (-(k as f64) * lambda_exponent(1.0, &n).unwrap()).exp();
        assert!(exact <= bound);
        assert!(e.point <= bound + 3.0 * e.stderr);
    }

    #[test]
    fn lambda2_matches_oracle() {
        let n = ch(1.0);
        let code = antipodal(4, 1.0_f64 / 2f64.sqrt());
        let det = DetectorSpec::new(4, 1.0, &n).unwrap();
        let cfg = McConfig::new(100_000, 9);
        let worst = estimate_lambda2(&code, &n, &det, &cfg, PairStrategy::WorstPair).unwrap();
        let diff = worst_pair_difference(&code).unwrap();
        assert!((diff.energy() - 8.0).abs() < 1e-12);
        assert!(worst
            .consistent_with(
                exact_false_accept(&diff, &n, &det).unwrap(),
                CONFIDENCE_LEVEL
            )
            .unwrap());
        let all = estimate_lambda2(&code, &n, &det, &cfg, PairStrategy::AllPairsSampled).unwrap();
        let target = exact_lambda2_all_pairs(&code, &n, &det).unwrap();
        assert!(all.consistent_with(target, CONFIDENCE_LEVEL).unwrap());
    }

    #[test]
    fn zero_displacement_accepts_like_the_correct_user() {
        let n = ch(0.5);
        let det = DetectorSpec::new(3, 0.7, &n).unwrap();
        let zero = AmplitudeVector::new(vec![Complex64::new(0.0, 0.0); 3]);
        let accept = exact_false_accept(&zero, &n, &det).unwrap();
        assert!((accept + exact_lambda1(&n, &det).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oracle_is_permutation_invariant() {
        let n = ch(0.4);
        let det = DetectorSpec::new(3, 1.0, &n).unwrap();
        let a = AmplitudeVector::new(vec![
            Complex64::new(1.0, 0.5),
            Complex64::new(0.0, 0.0),
            Complex64::new(-0.3, 1.2),
        ]);
        let b = AmplitudeVector::new(vec![a.modes()[2], a.modes()[0], a.modes()[1]]);
        let pa = exact_false_accept(&a, &n, &det).unwrap();
        let pb = exact_false_accept(&b, &n, &det).unwrap();
        assert!((pa - pb).abs() < 1e-12);
    }

    #[test]
    fn binomial_interval_properties() {
        assert_eq!(
            binomial_acceptance_interval(100, 0.0, 0.997).unwrap(),
            (0, 0)
        );
        assert_eq!(
            binomial_acceptance_interval(100, 1.0, 0.997).unwrap(),
            (100, 100)
        );
        let (lo, hi) = binomial_acceptance_interval(100_000, 0.3, 0.997).unwrap();
        let sd = (100_000.0f64 * 0.3 * 0.7).sqrt();
        assert!((30_000.0 - lo as f64 - 2.97 * sd).abs() < 0.05 * sd);
        assert!((hi as f64 - 30_000.0 - 2.97 * sd).abs() < 0.05 * sd);
    }

    #[test]
    fn wilson_contains_point() {
        let e = McEstimate::from_counts(3, 1000, 0);
        let (lo, hi) = e.wilson(CONFIDENCE_LEVEL);
        assert!(lo < 0.003 && 0.003 < hi && lo > 0.0);
        assert!((e.stderr - (0.003f64 * 0.997 / 1000.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn heterodyne_trivial_limits() {
        let spec = HeterodyneSpec::new(1.0, 0.0).unwrap();
        assert_eq!(heterodyne_analytic(2, &spec, 1.0).unwrap().lambda1, 1.0);
        let spec = HeterodyneSpec::new(2.0, 5.0).unwrap();
        let r = heterodyne_analytic(3, &spec, 0.0).unwrap();
        assert!((r.lambda1 + r.lambda2 - 1.0).abs() < 1e-12);
        let huge = HeterodyneSpec::new(1.0, 1e9).unwrap();
        let code = antipodal(2, 1.0);
        let sim = heterodyne_simulate(&code, &huge, &McConfig::new(1000, 3)).unwrap();
        assert_eq!(sim.lambda1.point, 0.0);
        assert!(HeterodyneSpec::new(0.5, 1.0).is_err());
        assert_eq!(
            HeterodyneSpec::for_channel(2, &ch(0.0), 0.0)
                .unwrap()
                .noise_variance(),
            1.0
        );
    }

    #[test]
    fn central_tail_matches_erlang_closed_form() {
        // Q(k, x) = e^{−x} Σ_{j<k} x^j/j!
        for k in 1..6usize {
            let x = 2.5;
            let mut term = 1.0;
            let mut sum = 0.0;
            for j in 0..k {
                if j > 0 {
                    term *= x / j as f64;
                }
                sum += term;
            }
            let spec = HeterodyneSpec::new(1.0, x).unwrap();
            let r = heterodyne_analytic(k, &spec, 0.0).unwrap();
            assert!((r.lambda1 - (-x).exp() * sum).abs() < 1e-13);
        }
    }

    #[test]
    fn noncentral_cdf_matches_quadrature() {
        // k = 1: P(|d + w|² ≤ τ) with w ~ CN(0,1) in polar coordinates.
        let (d, tau) = (1.3_f64, 2.0_f64);
        let steps = 2000;
        let mut acc = 0.0;
        for i in 0..steps {
            let r = (i as f64 + 0.5) / steps as f64 * tau.sqrt();
            for j in 0..steps {
                let th = (j as f64 + 0.5) / steps as f64 * std::f64::consts::TAU;
                let dx = r * th.cos() - d;
                let dy = r * th.sin();
                acc += r * (-(dx * dx + dy * dy)).exp();
            }
        }
        let quad = acc * tau.sqrt() / steps as f64 * std::f64::consts::TAU
            / steps as f64
            / std::f64::consts::PI;
        let spec = HeterodyneSpec::new(1.0, tau).unwrap();
        let r = heterodyne_analytic(1, &spec, d).unwrap();
        assert!((r.lambda2 - quad).abs() < 1e-5, "{} vs {quad}", r.lambda2);
    }

    #[test]
    fn heterodyne_simulation_matches_analytic() {
        let code = antipodal(2, 1.5 / 2f64.sqrt());
        let spec = HeterodyneSpec::new(1.0, 4.0).unwrap();
        let sim = heterodyne_simulate(&code, &spec, &McConfig::new(100_000, 11)).unwrap();
        let exact = heterodyne_analytic(2, &spec, code.min_distance()).unwrap();
        assert!(sim
            .lambda1
            .consistent_with(exact.lambda1, CONFIDENCE_LEVEL)
            .unwrap());
        assert!(sim
            .lambda2_worst
            .consistent_with(exact.lambda2, CONFIDENCE_LEVEL)
            .unwrap());
    }
}

//! Identification codes and their analytic guarantees.
//!
//! A code is a `2ρ`-separated packing of the ball of radius `√(kE)` in
//! `ℂ^k ≅ ℝ^{2k}`. With the photon-threshold test of slack `δ` it achieves
//!
//! ```text
//! M_k ≥ (kE/(4ρ²))^k,   λ₁ ≤ e^{−kΛ(δ,N)},   λ₂ ≤ e^{−4ρ²Θ(δ,N)},
//! ```
//!
//! while any code with `max(λ₁, λ₂) ≤ δ_k` obeys
//! `M_k ≤ (1 + 4√(kE)/√((2N+1)·ln(1/(4δ_k))))^{2k}`. All cardinalities are
//! handled as natural logarithms.

use std::fmt::Write as _;

use num_complex::Complex;
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::geometry::{self, PackingSpec, PointSet, TextDocument, DEFAULT_REJECTION_BUDGET};
use crate::optimize::bisect;
use crate::photonstats::{lambda_exponent, theta_exponent, ChannelModel, ExponentPair};
use crate::scalar::{from_usize, lit, RandomScalar, Real};

/// `k` complex phase-space amplitudes, in units of √photons.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector<T> {
    modes: Vec<Complex<T>>,
}

impl<T: Real> AmplitudeVector<T> {
    pub fn new(modes: Vec<Complex<T>>) -> Self {
        Self { modes }
    }

    /// Pair consecutive real coordinates `(x₀, x₁), (x₂, x₃), …` into modes.
    pub fn from_real_coordinates(coords: &[T]) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::Precondition(
                "real coordinates must come in pairs".into(),
            ));
        }
        Ok(Self {
            modes: coords
                .chunks_exact(2)
                .map(|c| Complex::new(c[0], c[1]))
                .collect(),
        })
    }

    pub fn to_real_coordinates(&self) -> Vec<T> {
        self.modes.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn modes(&self) -> &[Complex<T>] {
        &self.modes
    }

    pub fn k(&self) -> usize {
        self.modes.len()
    }

    /// `Σ|α_t|²`.
    pub fn energy(&self) -> T {
        self.to_real_coordinates().iter().map(|&x| x * x).sum()
    }

    /// Euclidean distance, summed in the same order as the real embedding.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if self.k() != other.k() {
            return Err(Error::LengthMismatch {
                left: self.k(),
                right: other.k(),
            });
        }
        Ok(geometry::distance(
            &self.to_real_coordinates(),
            &other.to_real_coordinates(),
        ))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.k() != other.k() {
            return Err(Error::LengthMismatch {
                left: self.k(),
                right: other.k(),
            });
        }
        Ok(Self {
            modes: self
                .modes
                .iter()
                .zip(&other.modes)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

/// An identification codebook with its construction parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureSet<T> {
    k: usize,
    energy_budget: T,
    rho: T,
    signatures: Vec<AmplitudeVector<T>>,
    min_distance: T,
}

impl<T: Real> SignatureSet<T> {
    /// Validate the energy constraint `‖α_m‖² ≤ kE` and the separation
    /// `min_distance ≥ 2ρ`.
    pub fn new(
        k: usize,
        energy_budget: T,
        rho: T,
        signatures: Vec<AmplitudeVector<T>>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(domain("k", "a positive integer", 0));
        }
        if !(energy_budget > T::zero()) {
            return Err(domain("energy", "> 0", energy_budget));
        }
        if !(rho >= T::zero()) {
            return Err(domain("rho", ">= 0", rho));
        }
        let cap = from_usize::<T>(k) * energy_budget;
        for (m, s) in signatures.iter().enumerate() {
            if s.k() != k {
                return Err(Error::LengthMismatch {
                    left: s.k(),
                    right: k,
                });
            }
            if s.energy() > cap {
                return Err(Error::Precondition(format!(
                    "signature {m} has energy {} above k·E = {cap}",
                    s.energy()
                )));
            }
        }
        let coords: Vec<Vec<T>> = signatures.iter().map(|s| s.to_real_coordinates()).collect();
        let min_distance = geometry::min_pairwise_distance(&coords);
        if min_distance < rho + rho {
            return Err(Error::Precondition(format!(
                "minimum distance {min_distance} is below 2ρ = {}",
                rho + rho
            )));
        }
        Ok(Self {
            k,
            energy_budget,
            rho,
            signatures,
            min_distance,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn energy_budget(&self) -> T {
        self.energy_budget
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn signatures(&self) -> &[AmplitudeVector<T>] {
        &self.signatures
    }

    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }

    pub fn min_distance(&self) -> T {
        self.min_distance
    }

    pub fn max_energy(&self) -> T {
        self.signatures
            .iter()
            .map(|s| s.energy())
            .fold(T::zero(), T::max)
    }

    /// Closest pair `(m, m′)`, ties to the lexicographically lowest indices.
    pub fn worst_pair(&self) -> Option<(usize, usize)> {
        let coords: Vec<Vec<T>> = self
            .signatures
            .iter()
            .map(|s| s.to_real_coordinates())
            .collect();
        let mut best: Option<(T, usize, usize)> = None;
        for i in 0..coords.len() {
            for j in i + 1..coords.len() {
                let d = geometry::distance(&coords[i], &coords[j]);
                if best.is_none_or(|(b, _, _)| d < b) {
                    best = Some((d, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// `# signatures` header followed by the point-set format of the real
    /// embedding (ball radius `√(kE)`, separation `2ρ`).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# signatures k={} energy={} rho={} m={} min_distance={}",
            self.k,
            self.energy_budget,
            self.rho,
            self.signatures.len(),
            self.min_distance
        );
        self.as_point_set().write_body(&mut out);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = TextDocument::<T>::parse(text)?;
        let h = doc.header("signatures")?;
        let k: usize = h.field("k")?;
        let energy: T = h.field("energy")?;
        let rho: T = h.field("rho")?;
        let m: usize = h.field("m")?;
        let points = PointSet::from_document(&doc)?;
        if points.dim() != 2 * k || points.len() != m {
            return Err(Error::Parse {
                line: h.line,
                message: "signature header disagrees with the point set".into(),
            });
        }
        let signatures = points
            .points()
            .iter()
            .map(|p| AmplitudeVector::from_real_coordinates(p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, energy, rho, signatures)
    }

    fn as_point_set(&self) -> PointSet<T> {
        PointSet::from_points(
            2 * self.k,
            (from_usize::<T>(self.k) * self.energy_budget).sqrt(),
            self.rho + self.rho,
            self.signatures
                .iter()
                .map(|s| s.to_real_coordinates())
                .collect(),
        )
        .expect("validated signature set is a valid point set")
    }
}

/// Log-domain error bounds of the threshold detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBoundReport<T> {
    /// `−k·Λ(δ,N)`
    pub lambda1_log: T,
    /// `−4ρ²·Θ(δ,N)`
    pub lambda2_log: T,
    pub lambda_exp: T,
    pub theta_exp: T,
    pub delta: T,
}

fn check_ball_fit<T: Real>(k: usize, energy: T, rho: T) -> Result<()> {
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    if !(energy > T::zero()) || !energy.is_finite() {
        return Err(domain("energy", "finite and > 0", energy));
    }
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(domain("rho", "finite and > 0", rho));
    }
    let radius = (from_usize::<T>(k) * energy).sqrt();
    if rho + rho > radius {
        return Err(Error::Precondition(format!(
            "2ρ = {} exceeds √(kE) = {radius}",
            rho + rho
        )));
    }
    Ok(())
}

pub fn build_code<T: RandomScalar, R: Rng + ?Sized>(
    k: usize,
    energy: T,
    rho: T,
    rng: &mut R,
) -> Result<SignatureSet<T>> {
    build_code_with_budget(k, energy, rho, DEFAULT_REJECTION_BUDGET, rng)
}

/// Greedy `2ρ`-packing of `B_{2k}(√(kE))`, read back as `k` complex modes.
pub fn build_code_with_budget<T: RandomScalar, R: Rng + ?Sized>(
    k: usize,
    energy: T,
    rho: T,
    rejection_budget: usize,
    rng: &mut R,
) -> Result<SignatureSet<T>> {
    check_ball_fit(k, energy, rho)?;
    // Shrink by a few ulps so rounding in ‖x‖² can never exceed kE.
    let radius = (from_usize::<T>(k) * energy).sqrt() * (T::one() - lit::<T>(4.0) * T::epsilon());
    let spec = PackingSpec::new(2 * k, radius, rho + rho, rejection_budget)?;
    let points = geometry::greedy_packing(&spec, rng);
    let signatures = points
        .points()
        .iter()
        .map(|p| AmplitudeVector::from_real_coordinates(p))
        .collect::<Result<Vec<_>>>()?;
    SignatureSet::new(k, energy, rho, signatures)
}

/// `ln M_k ≥ k·ln(kE/(4ρ²))`.
pub fn achievable_users_log<T: Real>(k: usize, energy: T, rho: T) -> Result<T> {
    check_ball_fit(k, energy, rho)?;
    let kf = from_usize::<T>(k);
    Ok(kf * (kf * energy / (lit::<T>(4.0) * rho * rho)).ln())
}

pub fn analytic_error_bounds<T: Real>(
    k: usize,
    delta: T,
    rho: T,
    channel: &ChannelModel<T>,
) -> Result<ErrorBoundReport<T>> {
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    if !(rho >= T::zero()) {
        return Err(domain("rho", ">= 0", rho));
    }
    let lambda_exp = lambda_exponent(delta, channel)?;
    let theta_exp = theta_exponent(delta, channel)?;
    Ok(ErrorBoundReport {
        lambda1_log: -from_usize::<T>(k) * lambda_exp,
        lambda2_log: -lit::<T>(4.0) * rho * rho * theta_exp,
        lambda_exp,
        theta_exp,
        delta,
    })
}

/// `ln M_k ≤ 2k·ln(1 + 4√(kE)/√((2N+1)·ln(1/(4δ_k))))`, for `0 < δ_k < 1/4`.
pub fn converse_users_log<T: Real>(
    k: usize,
    energy: T,
    delta_k: T,
    channel: &ChannelModel<T>,
) -> Result<T> {
    if k == 0 {
        return Err(domain("k", "a positive integer", 0));
    }
    if !(energy > T::zero()) || !energy.is_finite() {
        return Err(domain("energy", "finite and > 0", energy));
    }
    if !(delta_k > T::zero() && delta_k < lit(0.25)) {
        return Err(Error::Precondition(format!(
            "delta_k = {delta_k} is outside (0, 1/4): the converse needs ln(1/(4·delta_k)) > 0, \
             so the nominal range (0, 1/2) is restricted"
        )));
    }
    let kf = from_usize::<T>(k);
    let two = lit::<T>(2.0);
    let spread =
        ((two * channel.n_thermal() + T::one()) * (lit::<T>(4.0) * delta_k).recip().ln()).sqrt();
    Ok(two * kf * (lit::<T>(4.0) * (kf * energy).sqrt() / spread).ln_1p())
}

/// Separation `ρ² = γ·ln k` and the resulting bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingChoice<T> {
    pub rho: T,
    pub lambda1_log: T,
    /// `−4γΘ·ln k`, i.e. `λ₂ ≤ k^{−4γΘ}`.
    pub lambda2_log: T,
    /// `k ln k − k ln ln k + k ln(E/(4γ))`.
    pub log_m_lower: T,
}

pub fn scaling_choice<T: Real>(
    k: usize,
    gamma: T,
    energy: T,
    delta: T,
    channel: &ChannelModel<T>,
) -> Result<ScalingChoice<T>> {
    if k < 3 {
        return Err(Error::Precondition(format!(
            "k = {k} must be at least 3 so that ln ln k > 0"
        )));
    }
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(domain("gamma", "finite and > 0", gamma));
    }
    let kf = from_usize::<T>(k);
    let ln_k = kf.ln();
    let rho = (gamma * ln_k).sqrt();
    check_ball_fit(k, energy, rho)?;
    let report = analytic_error_bounds(k, delta, rho, channel)?;
    Ok(ScalingChoice {
        rho,
        lambda1_log: report.lambda1_log,
        lambda2_log: -lit::<T>(4.0) * gamma * report.theta_exp * ln_k,
        log_m_lower: kf * ln_k - kf * ln_k.ln() + kf * (energy / (lit::<T>(4.0) * gamma)).ln(),
    })
}

/// Smallest slack `δ` with `−k·Λ(δ,N) ≤ target_log`.
pub fn delta_for_first_kind_target<T: Real>(
    k: usize,
    target_log: T,
    channel: &ChannelModel<T>,
) -> Result<T> {
    if !(target_log < T::zero()) {
        return Err(domain("first-kind target log", "< 0", target_log));
    }
    let need = -target_log / from_usize::<T>(k.max(1));
    let gap = |d: T| lambda_exponent(d, channel).map(|l| l - need);
    let mut hi = T::one();
    while gap(hi)? < T::zero() {
        hi *= lit(2.0);
        if hi > lit(1e12) {
            return Err(Error::Bracket("first-kind target unreachable".into()));
        }
    }
    // Λ is increasing in δ, so the root is unique.
    let lo = hi * lit(1e-12);
    bisect(|d| gap(d).unwrap_or(T::nan()), lo, hi, lit(1e-14))
}

/// Separation `ρ = √(−target_log/(4Θ))` meeting a second-kind target.
pub fn rho_for_second_kind_target<T: Real>(
    target_log: T,
    delta: T,
    channel: &ChannelModel<T>,
) -> Result<T> {
    if !(target_log < T::zero()) {
        return Err(domain("second-kind target log", "< 0", target_log));
    }
    let theta = theta_exponent(delta, channel)?;
    if theta == T::zero() {
        return Err(Error::Precondition(
            "Θ = 0: no separation meets a second-kind target".into(),
        ));
    }
    Ok((-target_log / (lit::<T>(4.0) * theta)).sqrt())
}

/// Detector slack and separation meeting both error targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Design<T> {
    pub delta: T,
    pub rho: T,
}

pub fn design_for_targets<T: Real>(
    k: usize,
    lambda1_target_log: T,
    lambda2_target_log: T,
    channel: &ChannelModel<T>,
) -> Result<Design<T>> {
    let delta = delta_for_first_kind_target(k, lambda1_target_log, channel)?;
    let rho = rho_for_second_kind_target(lambda2_target_log, delta, channel)?;
    Ok(Design { delta, rho })
}

/// `(δ, Λ, Θ)` over a list of slacks.
pub fn exponent_sweep<T: Real>(
    deltas: &[T],
    channel: &ChannelModel<T>,
) -> Result<Vec<(T, ExponentPair<T>)>> {
    deltas
        .iter()
        .map(|&d| crate::photonstats::exponents(d, channel).map(|e| (d, e)))
        .collect()
}

/// One row of the order-optimal scaling comparison at error level `1/k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichRow<T> {
    pub k: usize,
    pub delta_k: T,
    pub delta: T,
    pub gamma: T,
    pub rho: T,
    pub lambda1_log: T,
    pub lambda2_log: T,
    pub achievable_log: T,
    pub converse_log: T,
    /// `k ln k − k ln ln k`
    pub leading: T,
    pub achievable_gap_per_k: T,
    pub converse_gap_per_k: T,
}

/// Both sides of `ln M_k = k ln k − k ln ln k + O(k)` at `δ_k = 1/k`:
/// `δ` is the smallest slack with `e^{−kΛ} ≤ δ_k`, `γ = 1/(4Θ)` gives
/// `k^{−4γΘ} = δ_k`, and `ρ² = γ ln k`.
pub fn sandwich_row<T: Real>(
    k: usize,
    energy: T,
    channel: &ChannelModel<T>,
) -> Result<SandwichRow<T>> {
    if k < 8 {
        return Err(Error::Precondition(format!(
            "k = {k} must be at least 8 so that 1/k < 1/4"
        )));
    }
    let kf = from_usize::<T>(k);
    let delta_k = kf.recip();
    let target = delta_k.ln();
    let delta = delta_for_first_kind_target(k, target, channel)?;
    let theta = theta_exponent(delta, channel)?;
    let gamma = (lit::<T>(4.0) * theta).recip();
    let rho = (gamma * kf.ln()).sqrt();
    let bounds = analytic_error_bounds(k, delta, rho, channel)?;
    let achievable = achievable_users_log(k, energy, rho)?;
    let converse = converse_users_log(k, energy, delta_k, channel)?;
    let leading = kf * kf.ln() - kf * kf.ln().ln();
    Ok(SandwichRow {
        k,
        delta_k,
        delta,
        gamma,
        rho,
        lambda1_log: bounds.lambda1_log,
        lambda2_log: bounds.lambda2_log,
        achievable_log: achievable,
        converse_log: converse,
        leading,
        achievable_gap_per_k: (achievable - leading) / kf,
        converse_gap_per_k: (converse - leading) / kf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ch(n: f64) -> ChannelModel<f64> {
        ChannelModel::new(n).unwrap()
    }

    #[test]
    fn build_code_precondition_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            build_code(1, 4.0, 1.01, &mut rng),
            Err(Error::Precondition(_))
        ));
        assert!(build_code_with_budget(1, 4.0, 1.0, 100, &mut rng).is_ok());
    }

    #[test]
    fn build_code_cardinality_over_seeds() {
        // (2/(2·0.5))² = 4 guaranteed by a maximal packing.
        let mut at_least_four = 0;
        for seed in 0..20 {
            let code = build_code(1, 4.0, 0.5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert!(code.min_distance() >= 1.0);
            assert!(code.max_energy() <= 4.0);
            if code.len() >= 4 {
                at_least_four += 1;
            }
        }
        assert_eq!(at_least_four, 20);
    }

    #[test]
    fn code_invariants_in_higher_dimension() {
        let code =
            build_code_with_budget(3, 2.0, 0.8, 2_000, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(code.len() > 2);
        for s in code.signatures() {
            assert_eq!(s.k(), 3);
            assert!(s.energy() <= 6.0);
        }
        assert!(code.min_distance() >= 1.6);
        let (i, j) = code.worst_pair().unwrap();
        let d = code.signatures()[i]
            .distance(&code.signatures()[j])
            .unwrap();
        assert_eq!(d, code.min_distance());
    }

    #[test]
    fn worst_pair_ties_break_low() {
        let sig = |re: f64| AmplitudeVector::new(vec![Complex::new(re, 0.0)]);
        let code = SignatureSet::new(1, 9.0, 0.5, vec![sig(0.0), sig(1.0), sig(2.0)]).unwrap();
        assert_eq!(code.worst_pair(), Some((0, 1)));
    }

    #[test]
    fn signature_set_rejects_invalid() {
        let sig = |re: f64| AmplitudeVector::new(vec![Complex::new(re, 0.0)]);
        assert!(SignatureSet::new(1, 1.0, 0.1, vec![sig(1.5)]).is_err());
        assert!(SignatureSet::new(1, 4.0, 0.6, vec![sig(0.0), sig(1.0)]).is_err());
        assert!(SignatureSet::new(2, 4.0, 0.1, vec![sig(0.0)]).is_err());
    }

    #[test]
    fn signature_text_round_trip() {
        let code =
            build_code_with_budget(2, 3.0, 0.6, 1_000, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let back = SignatureSet::<f64>::from_text(&code.to_text()).unwrap();
        assert_eq!(code, back);
    }

    #[test]
    fn achievable_examples() {
        assert!((achievable_users_log(4, 4.0_f64, 1.0).unwrap() - 4.0 * 4f64.ln()).abs() < 1e-12);
        assert!((achievable_users_log(4, 4.0_f64, 1.0).unwrap().exp() - 256.0).abs() < 1e-9);
        let r = (3.0f64 * 5.0).sqrt() / 2.0;
        assert!(achievable_users_log(3, 5.0, r).unwrap().abs() < 1e-12);
        assert!((achievable_users_log(2, 1.0_f64, 0.25).unwrap() - 2.0 * 8f64.ln()).abs() < 1e-12);
        assert!(achievable_users_log(1, 1.0_f64, 0.6).is_err());
    }

    #[test]
    fn error_bound_examples() {
        let r = analytic_error_bounds(10, 1.0, 1.0, &ch(1.0)).unwrap();
        let lam = 2.0 * 2f64.ln() - 3.0 * 1.5f64.ln();
        assert!((r.lambda1_log + 10.0 * lam).abs() < 1e-12);
        assert!((r.lambda1_log + 1.698_990_368).abs() < 1e-8);
        assert!((r.lambda2_log + 0.906_163_679).abs() < 1e-8);
        assert_eq!(
            analytic_error_bounds(10, 1.0, 0.0, &ch(1.0))
                .unwrap()
                .lambda2_log,
            0.0
        );
        let steps: Vec<f64> = (1..6)
            .map(|k| {
                analytic_error_bounds(k, 0.5, 1.0, &ch(2.0))
                    .unwrap()
                    .lambda1_log
            })
            .collect();
        for w in steps.windows(2) {
            assert!((w[1] - w[0] - (steps[1] - steps[0])).abs() < 1e-12 && w[1] < w[0]);
        }
        assert!(analytic_error_bounds(4, 1.0, 1.0, &ch(0.0)).is_err());
    }

    #[test]
    fn converse_examples() {
        let v = converse_users_log(1, 1.0, 0.125, &ch(0.0)).unwrap();
        assert!((v - 2.0 * (1.0 + 4.0 / 2f64.ln().sqrt()).ln()).abs() < 1e-12);
        assert!((v - 3.517_263).abs() < 1e-5);
        assert!(converse_users_log(1, 1.0, 0.3, &ch(0.0)).is_err());
        assert!(converse_users_log(1, 1.0, 0.25, &ch(0.0)).is_err());
        assert!(converse_users_log(1, 1.0, 0.0, &ch(0.0)).is_err());
        let mut prev = f64::INFINITY;
        for i in 1..30 {
            let v = converse_users_log(3, 2.0, 0.2f64.powi(i), &ch(0.5)).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn converse_exceeds_matching_achievable_codes() {
        // k = 4, E = 16, N = 1, δ_k = 1/16: every (δ, ρ) meeting both targets.
        let (k, e, n) = (4usize, 16.0_f64, ch(1.0));
        let dk = (k as f64).powi(-2);
        let upper = converse_users_log(k, e, dk, &n).unwrap();
        let mut checked = 0;
        for i in 1..200 {
            let delta = 0.05 * i as f64;
            for j in 1..100 {
                let rho = 0.05 * j as f64;
                if 2.0 * rho > (k as f64 * e).sqrt() {
                    continue;
                }
                let b = analytic_error_bounds(k, delta, rho, &n).unwrap();
                if b.lambda1_log.max(b.lambda2_log) <= dk.ln() {
                    assert!(upper > achievable_users_log(k, e, rho).unwrap());
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn scaling_choice_identities() {
        let k = 16usize;
        let e = 2.0;
        let s = scaling_choice(k, e / 4.0, e, 1.0, &ch(1.0)).unwrap();
        let kf = k as f64;
        assert!((s.log_m_lower - (kf * kf.ln() - kf * kf.ln().ln())).abs() < 1e-9);

        let s = scaling_choice(100, 0.5, 2.0, 1.0, &ch(1.0)).unwrap();
        let kl = 100f64.ln();
        assert!((s.log_m_lower - (100.0 * kl - 100.0 * kl.ln())).abs() < 1e-9);
        let theta = theta_exponent(1.0, &ch(1.0)).unwrap();
        assert!((s.lambda2_log - (-4.0 * 0.5 * theta * kl)).abs() < 1e-12);
        let a = achievable_users_log(100, 2.0, s.rho).unwrap();
        assert!(s.log_m_lower.exp() <= a.exp() * (1.0 + 1e-12));
        assert!(scaling_choice(2, 0.5, 2.0, 1.0, &ch(1.0)).is_err());
        assert!(scaling_choice(8, 10.0, 0.5, 1.0, &ch(1.0)).is_err());
    }

    #[test]
    fn target_inversion() {
        let n = ch(0.5);
        let d = delta_for_first_kind_target(12, (1e-3f64).ln(), &n).unwrap();
        assert!((12.0 * lambda_exponent(d, &n).unwrap() + (1e-3f64).ln()).abs() < 1e-9);
        let design = design_for_targets(12, (1e-3f64).ln(), (1e-4f64).ln(), &n).unwrap();
        let b = analytic_error_bounds(12, design.delta, design.rho, &n).unwrap();
        assert!((b.lambda2_log - (1e-4f64).ln()).abs() < 1e-9);
        assert!(rho_for_second_kind_target(-1.0, 1.0, &ch(0.0)).is_err());
    }

    #[test]
    fn sweep_tabulates_tradeoff() {
        let rows = exponent_sweep(&[0.25, 0.5, 1.0, 2.0], &ch(1.0)).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].1.lambda_exp > w[0].1.lambda_exp);
            assert!(w[1].1.theta_exp < w[0].1.theta_exp);
        }
    }

    #[test]
    fn sandwich_rows_are_bounded() {
        let mut k = 8;
        while k <= 4096 {
            let r = sandwich_row(k, 4.0, &ch(1.0)).unwrap();
            assert!(r.lambda1_log <= r.delta_k.ln() + 1e-9);
            assert!((r.lambda2_log - r.delta_k.ln()).abs() < 1e-9);
            assert!(r.achievable_log <= r.converse_log);
            assert!(r.achievable_gap_per_k.abs() <= 10.0);
            assert!(r.converse_gap_per_k.abs() <= 10.0);
            k *= 2;
        }
    }
}

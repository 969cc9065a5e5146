//! Numerical oracle suite: closed forms against truncated Fock-space
//! computations and analytic exponents against direct optimization.

use coherent_id::fockspace::{
    coherent_vector, displaced_thermal_density, fidelity_displaced_thermal, fidelity_numeric,
    overlap_closed_form, trace_distance, DEFAULT_CUTOFF,
};
use coherent_id::photonstats::{
    chernoff_upper_exponent, exact_upper_tail, lambda_exponent, photon_pmf_table, ChannelModel,
    DetectorSpec,
};
use coherent_id::{Channel, Complex64};

use crate::CliError;

pub const EXPONENT_DELTAS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
pub const EXPONENT_NOISES: [f64; 4] = [0.2, 0.5, 1.0, 2.0];
pub const FOCK_NOISES: [f64; 3] = [0.0, 0.5, 1.0];

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

fn channel(n: f64) -> Result<Channel, CliError> {
    Ok(ChannelModel::new(n)?)
}

/// Amplitudes with `|α| ≤ 2` spread over phases.
pub fn amplitude_grid() -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for &r in &[0.5, 1.0, 2.0] {
        for j in 0..3 {
            out.push(Complex64::from_polar(
                r,
                2.0 * std::f64::consts::PI * j as f64 / 3.0 + 0.3,
            ));
        }
    }
    out
}

/// `|Chernoff optimum − Λ(δ,N)|` over the exponent grid.
pub fn chernoff_lambda(deltas: &[f64], noises: &[f64]) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for &d in deltas {
        for &n in noises {
            let ch = channel(n)?;
            let c = chernoff_upper_exponent(d, &ch)?;
            let l = lambda_exponent(d, &ch)?;
            worst = worst.max((c - l).abs());
            cases += 1;
        }
    }
    Ok(Check {
        name: "chernoff_equals_lambda",
        cases,
        max_deviation: worst,
        tolerance: 1e-9,
    })
}

/// Largest excess of the exact zero-energy tail `P(S_k ≥ k(N+δ))` over
/// `e^{−kΛ(δ,N)}`, for `k = 1..=k_max`.
pub fn first_kind_bound(k_max: usize, deltas: &[f64], noises: &[f64]) -> Result<Check, CliError> {
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for &d in deltas {
        for &n in noises {
            let ch = channel(n)?;
            let lam = lambda_exponent(d, &ch)?;
            for k in 1..=k_max {
                let det = DetectorSpec::new(k, d, &ch)?;
                let exact =
                    exact_upper_tail(k, 0.0, &ch, det.threshold_ceil_count())?.probability();
                let bound = (-(k as f64) * lam).exp();
                worst = worst.max(exact - bound);
                cases += 1;
            }
        }
    }
    Ok(Check {
        name: "first_kind_tail_below_bound",
        cases,
        max_deviation: worst.max(0.0),
        tolerance: 0.0,
    })
}

/// Fock diagonal of `S_N(α)` against the closed-form photon distribution.
pub fn pmf_vs_fock_diagonal(cutoff: usize, noises: &[f64]) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let compare = cutoff / 2;
    for &n in noises {
        let ch = channel(n)?;
        for a in amplitude_grid() {
            let rho = displaced_thermal_density(a, &ch, cutoff)?;
            let pmf = photon_pmf_table(compare, a.norm_sqr(), &ch)?;
            for (i, p) in pmf.iter().enumerate() {
                worst = worst.max((rho.get(i, i).re - p).abs());
            }
            cases += 1;
        }
    }
    Ok(Check {
        name: "pmf_equals_fock_diagonal",
        cases,
        max_deviation: worst,
        tolerance: 1e-10,
    })
}

/// `⟨β|S_N(α)|β⟩` against `(N+1)^{−1} exp(−|α−β|²/(N+1))`, plus any excess
/// over the bound `exp(−|α−β|²/(N+1))`.
pub fn coherent_overlap(cutoff: usize, noises: &[f64]) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let grid = amplitude_grid();
    for &n in noises {
        let ch = channel(n)?;
        for &a in &grid {
            let rho = displaced_thermal_density(a, &ch, cutoff)?;
            for &b in &grid {
                let numeric = rho.expectation(&coherent_vector(b, cutoff))?.re;
                let closed = overlap_closed_form(&[a], &[b], &ch)?;
                worst = worst
                    .max((numeric - closed.exact).abs())
                    .max(numeric - closed.bound);
                cases += 1;
            }
        }
    }
    Ok(Check {
        name: "coherent_overlap_closed_form",
        cases,
        max_deviation: worst,
        tolerance: 1e-8,
    })
}

fn fidelity_pairs() -> Vec<(Complex64, Complex64)> {
    let mut out = Vec::new();
    for &a in &[
        Complex64::new(0.0, 0.0),
        Complex64::new(0.6, -0.4),
        Complex64::new(-1.0, 0.5),
    ] {
        for &(dist, phase) in &[(0.0, 0.0), (0.5, 1.0), (1.0, 2.0), (1.5, -0.7), (2.0, 0.4)] {
            out.push((a, a + Complex64::from_polar(dist, phase)));
        }
    }
    out
}

/// Numerical Uhlmann fidelity against `exp(−|α−β|²/(2N+1))`, `|α−β| ≤ 2`.
pub fn displaced_thermal_fidelity(cutoff: usize, noises: &[f64]) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for &n in noises {
        let ch = channel(n)?;
        for (a, b) in fidelity_pairs() {
            let f = fidelity_numeric(
                &displaced_thermal_density(a, &ch, cutoff)?,
                &displaced_thermal_density(b, &ch, cutoff)?,
            )?;
            let closed = fidelity_displaced_thermal(&[a], &[b], &ch)?;
            worst = worst.max((f - closed).abs());
            cases += 1;
        }
    }
    Ok(Check {
        name: "fidelity_closed_form",
        cases,
        max_deviation: worst,
        tolerance: 1e-4,
    })
}

/// Largest violation of `(1 − √F)² ≤ T² ≤ 1 − F`.
pub fn fuchs_van_de_graaf(cutoff: usize, noises: &[f64]) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for &n in noises {
        let ch = channel(n)?;
        for (a, b) in fidelity_pairs() {
            let rho = displaced_thermal_density(a, &ch, cutoff)?;
            let sigma = displaced_thermal_density(b, &ch, cutoff)?;
            let f = fidelity_numeric(&rho, &sigma)?.min(1.0);
            let t = trace_distance(&rho, &sigma)?;
            let lower = (1.0 - f.sqrt()).powi(2);
            worst = worst.max(lower - t * t).max(t * t - (1.0 - f));
            cases += 1;
        }
    }
    Ok(Check {
        name: "fuchs_van_de_graaf",
        cases,
        max_deviation: worst.max(0.0),
        // Pure states saturate T² = 1 − F, so this inherits the accuracy of
        // the numerical fidelity itself.
        tolerance: 1e-6,
    })
}

/// The full suite at the default cutoff.
pub fn run_suite() -> Result<Vec<Check>, CliError> {
    Ok(vec![
        chernoff_lambda(&EXPONENT_DELTAS, &EXPONENT_NOISES)?,
        first_kind_bound(16, &EXPONENT_DELTAS, &EXPONENT_NOISES)?,
        pmf_vs_fock_diagonal(DEFAULT_CUTOFF, &FOCK_NOISES)?,
        coherent_overlap(DEFAULT_CUTOFF, &FOCK_NOISES)?,
        displaced_thermal_fidelity(DEFAULT_CUTOFF, &FOCK_NOISES)?,
        fuchs_van_de_graaf(DEFAULT_CUTOFF, &FOCK_NOISES)?,
    ])
}

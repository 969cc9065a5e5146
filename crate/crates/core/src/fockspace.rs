//! Truncated photon-number-basis oracle for displaced thermal states.
//!
//! Everything here is dense `O(cutoff³)` linear algebra and exists to check
//! the closed forms used elsewhere: the coherent overlap
//! `⟨β|S_N(α)|β⟩ = exp(−|α−β|²/(N+1))/(N+1)` and the fidelity
//! `F(S_N(α), S_N(β)) = exp(−|α−β|²/(2N+1))`. Fidelity is the squared
//! Uhlmann form `(tr √(√ρ σ √ρ))²`, so `F(ρ, |ψ⟩⟨ψ|) = ⟨ψ|ρ|ψ⟩`.

use nalgebra::{convert, DMatrix, RealField};
use num_complex::Complex;

use crate::error::{domain, Error, Result};
use crate::photonstats::ChannelModel;
use crate::scalar::Real;

/// Default basis dimension for oracle computations.
pub const DEFAULT_CUTOFF: usize = 60;

/// Largest coherent-state truncation loss a displacement may incur.
pub const MAX_DISPLACEMENT_DEFICIT: f64 = 1e-6;

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;

/// Dense operator in the first `cutoff` number states, with the probability
/// mass (or norm) the truncation is known to lose.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix<T: RealField> {
    entries: DMatrix<Complex<T>>,
    deficit: T,
}

impl<T: RealField + Copy> FockMatrix<T> {
    pub fn new(entries: DMatrix<Complex<T>>, deficit: T) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::Precondition(
                "fock matrix must be square and non-empty".into(),
            ));
        }
        Ok(Self { entries, deficit })
    }

    pub fn cutoff(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn deficit(&self) -> T {
        self.deficit
    }

    pub fn get(&self, m: usize, n: usize) -> Complex<T> {
        self.entries[(m, n)]
    }

    pub fn trace(&self) -> T {
        (0..self.cutoff())
            .map(|i| self.entries[(i, i)].re)
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            deficit: self.deficit,
        }
    }

    pub fn hermitian_defect(&self) -> T {
        let diff = &self.entries - self.entries.adjoint();
        diff.iter()
            .map(|z| z.norm_sqr().sqrt())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut ev: Vec<T> = hermitian_part(&self.entries)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    /// `⟨ψ|A|ψ⟩` for a state vector in the same basis.
    pub fn expectation(&self, psi: &[Complex<T>]) -> Result<Complex<T>> {
        if psi.len() != self.cutoff() {
            return Err(Error::LengthMismatch {
                left: psi.len(),
                right: self.cutoff(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(psi);
        Ok((v.adjoint() * &self.entries * &v)[(0, 0)])
    }
}

fn hermitian_part<T: RealField + Copy>(a: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let half: T = convert(0.5);
    (a + a.adjoint()).map(|z| z * half)
}

fn validate_density<T: RealField + Copy>(rho: &FockMatrix<T>, name: &str) -> Result<()> {
    let defect = rho.hermitian_defect();
    if defect > convert(HERMITIAN_TOL) {
        return Err(Error::NotDensity(format!(
            "{name} is not Hermitian (defect {defect:?})"
        )));
    }
    let min = rho.eigenvalues()[0];
    if min < convert(PSD_TOL) {
        return Err(Error::NotDensity(format!("{name} has eigenvalue {min:?}")));
    }
    Ok(())
}

fn ln_factorials<T: RealField + Copy>(len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len);
    let mut acc = T::zero();
    out.push(acc);
    for i in 1..len {
        acc += convert::<f64, T>(i as f64).ln();
        out.push(acc);
    }
    out
}

/// Generalized Laguerre polynomial `L_n^{(a)}(x)` by its recurrence.
fn assoc_laguerre<T: RealField + Copy>(n: usize, a: usize, x: T) -> T {
    let a: T = convert(a as f64);
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = T::one() + a - x;
    for j in 1..n {
        let jf: T = convert(j as f64);
        let two: T = convert(2.0);
        let next = ((two * jf + T::one() + a - x) * cur - (jf + a) * prev) / (jf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `P(n ≥ cutoff)` for Poisson(`energy`), summed upward from the cutoff.
pub fn coherent_truncation_deficit<T: RealField + Copy>(energy: T, cutoff: usize) -> T {
    if energy == T::zero() {
        return T::zero();
    }
    let lf = ln_factorials::<T>(cutoff + 1);
    let mut term = (-energy + convert::<f64, T>(cutoff as f64) * energy.ln() - lf[cutoff]).exp();
    let mut sum = T::zero();
    let mut j = cutoff;
    let eps: T = convert(1e-300);
    for _ in 0..100_000 {
        sum += term;
        j += 1;
        term *= energy / convert(j as f64);
        if term <= sum * convert(1e-17) || term < eps {
            break;
        }
    }
    sum.min(T::one())
}

/// Thermal state `diag(N^n/(N+1)^{n+1})`; deficit `(N/(N+1))^cutoff`.
pub fn thermal_density<T: RealField + Copy>(
    channel: &ChannelModel<T>,
    cutoff: usize,
) -> FockMatrix<T> {
    let cutoff = cutoff.max(1);
    let n = channel.n_thermal();
    let mut entries = DMatrix::zeros(cutoff, cutoff);
    if n == T::zero() {
        entries[(0, 0)] = Complex::new(T::one(), T::zero());
        return FockMatrix {
            entries,
            deficit: T::zero(),
        };
    }
    let one = T::one();
    let ratio = n / (n + one);
    let mut p = one / (n + one);
    for i in 0..cutoff {
        entries[(i, i)] = Complex::new(p, T::zero());
        p *= ratio;
    }
    FockMatrix {
        entries,
        deficit: ratio.powi(cutoff as i32),
    }
}

/// Matrix elements `⟨m|D(α)|n⟩` for `m, n < cutoff` from the associated
/// Laguerre closed form. The reported deficit is the coherent-state loss
/// `P(n ≥ cutoff)` of `D(α)|0⟩`.
pub fn displacement_matrix<T: RealField + Copy>(
    alpha: Complex<T>,
    cutoff: usize,
) -> Result<FockMatrix<T>> {
    if cutoff == 0 {
        return Err(domain("cutoff", ">= 1", 0));
    }
    let energy = alpha.norm_sqr();
    let deficit = coherent_truncation_deficit(energy, cutoff);
    if deficit > convert(MAX_DISPLACEMENT_DEFICIT) {
        return Err(Error::Truncation {
            cutoff,
            deficit: nalgebra::try_convert::<T, f64>(deficit).unwrap_or(f64::NAN),
            limit: MAX_DISPLACEMENT_DEFICIT,
        });
    }
    let mut entries = DMatrix::zeros(cutoff, cutoff);
    if energy == T::zero() {
        for i in 0..cutoff {
            entries[(i, i)] = Complex::new(T::one(), T::zero());
        }
        return Ok(FockMatrix { entries, deficit });
    }
    let lf = ln_factorials::<T>(cutoff);
    let half: T = convert(0.5);
    let ln_abs = alpha.norm_sqr().sqrt().ln();
    let arg = alpha.im.atan2(alpha.re);
    // Phase of (−ᾱ) for the elements above the diagonal.
    let arg_up = alpha.im.atan2(-alpha.re);
    for m in 0..cutoff {
        for n in 0..cutoff {
            let (lo, hi, phase) = if m >= n { (n, m, arg) } else { (m, n, arg_up) };
            let p = hi - lo;
            let pf: T = convert(p as f64);
            let log_mag = half * (lf[lo] - lf[hi]) + pf * ln_abs - half * energy;
            let lag = assoc_laguerre(lo, p, energy);
            let mag = log_mag.exp() * lag;
            let (s, c) = (pf * phase).sin_cos();
            entries[(m, n)] = Complex::new(mag * c, mag * s);
        }
    }
    Ok(FockMatrix { entries, deficit })
}

/// `S_N(α) = D(α) ρ_N D(α)†` in the truncated basis.
///
/// The deficit is the trace lost to truncation, `1 − tr`.
pub fn displaced_thermal_density<T: RealField + Copy>(
    alpha: Complex<T>,
    channel: &ChannelModel<T>,
    cutoff: usize,
) -> Result<FockMatrix<T>> {
    let d = displacement_matrix(alpha, cutoff)?;
    let th = thermal_density(channel, cutoff);
    let entries = &d.entries * &th.entries * d.entries.adjoint();
    let mut out = FockMatrix {
        entries: hermitian_part(&entries),
        deficit: T::zero(),
    };
    out.deficit = (T::one() - out.trace()).max(T::zero());
    Ok(out)
}

/// Coherent-state coefficients `e^{−|β|²/2} β^n/√(n!)`.
pub fn coherent_vector<T: RealField + Copy>(beta: Complex<T>, cutoff: usize) -> Vec<Complex<T>> {
    let half: T = convert(0.5);
    let mut out = Vec::with_capacity(cutoff);
    let mut c = Complex::new((-half * beta.norm_sqr()).exp(), T::zero());
    for n in 0..cutoff {
        out.push(c);
        c = c * beta / convert::<f64, T>(((n + 1) as f64).sqrt());
    }
    out
}

/// Exact product-state overlap with its Lemma-style exponential bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap<T> {
    /// `tr(S_N^k(α)|β⟩⟨β|) = (N+1)^{−k} exp(−‖α−β‖²/(N+1))`.
    pub exact: T,
    /// `exp(−‖α−β‖²/(N+1))`.
    pub bound: T,
}

fn distance_sq<T: Real>(alpha: &[Complex<T>], beta: &[Complex<T>]) -> Result<T> {
    if alpha.len() != beta.len() {
        return Err(Error::LengthMismatch {
            left: alpha.len(),
            right: beta.len(),
        });
    }
    Ok(alpha
        .iter()
        .zip(beta)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum())
}

pub fn overlap_closed_form<T: Real>(
    alpha: &[Complex<T>],
    beta: &[Complex<T>],
    channel: &ChannelModel<T>,
) -> Result<Overlap<T>> {
    let d2 = distance_sq(alpha, beta)?;
    let np1 = channel.n_thermal() + T::one();
    let k = T::from_usize(alpha.len()).expect("mode count");
    let bound = (-d2 / np1).exp();
    Ok(Overlap {
        exact: (-k * np1.ln() - d2 / np1).exp(),
        bound,
    })
}

/// `F(S_N^k(α), S_N^k(β)) = exp(−‖α−β‖²/(2N+1))`.
pub fn fidelity_displaced_thermal<T: Real>(
    alpha: &[Complex<T>],
    beta: &[Complex<T>],
    channel: &ChannelModel<T>,
) -> Result<T> {
    let d2 = distance_sq(alpha, beta)?;
    let two = T::one() + T::one();
    Ok((-d2 / (two * channel.n_thermal() + T::one())).exp())
}

fn psd_sqrt<T: RealField + Copy>(a: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let eig = hermitian_part(a).symmetric_eigen();
    let roots = eig
        .eigenvalues
        .map(|l| Complex::new(l.max(T::zero()).sqrt(), T::zero()));
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&roots) * v.adjoint()
}

/// Squared Uhlmann fidelity `(tr √(√ρ σ √ρ))²` via Hermitian eigendecompositions.
pub fn fidelity_numeric<T: RealField + Copy>(
    rho: &FockMatrix<T>,
    sigma: &FockMatrix<T>,
) -> Result<T> {
    if rho.cutoff() != sigma.cutoff() {
        return Err(Error::LengthMismatch {
            left: rho.cutoff(),
            right: sigma.cutoff(),
        });
    }
    validate_density(rho, "rho")?;
    validate_density(sigma, "sigma")?;
    let root = psd_sqrt(&rho.entries);
    let inner = &root * &sigma.entries * &root;
    let ev = hermitian_part(&inner).symmetric_eigenvalues();
    let tr = ev
        .iter()
        .fold(T::zero(), |acc, &l| acc + l.max(T::zero()).sqrt());
    Ok(tr * tr)
}

/// Half trace norm `½‖ρ − σ‖₁`.
pub fn trace_distance<T: RealField + Copy>(
    rho: &FockMatrix<T>,
    sigma: &FockMatrix<T>,
) -> Result<T> {
    if rho.cutoff() != sigma.cutoff() {
        return Err(Error::LengthMismatch {
            left: rho.cutoff(),
            right: sigma.cutoff(),
        });
    }
    let diff = &rho.entries - &sigma.entries;
    let ev = hermitian_part(&diff).symmetric_eigenvalues();
    let half: T = convert(0.5);
    Ok(ev.iter().fold(T::zero(), |acc, &l| acc + l.abs()) * half)
}

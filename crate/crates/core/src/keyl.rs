//! The Keyl distribution on unitaries, tomography and PCA estimators built on
//! it, and Monte Carlo checks of its integration identities.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    haar_unitary, hermitian_eigenvalues, log_power_function, power_function, ComplexMatrix, DensityMatrix,
    UnitaryMatrix,
};
use crate::params;
use crate::partition::{Partition, SortedSpectrum};
use crate::report::{BoundReport, CheckKind};
use crate::rng::{derive_seed, replicas, MeanAcc};
use crate::schur::{dim_weyl_f64, normalized_schur_slice};
use crate::schur_weyl::sw_sample;

pub const MIN_IS_DRAWS: usize = 1000;
pub const MIN_OUTER_REPS: usize = 200;
pub const DEFAULT_MAX_TRIES: u64 = 1_000_000;

/// Spectrum entries below this are exact zeros.
pub const RANK_TOL: f64 = 1e-12;

/// A shape `λ` and a state `ρ`, with the sorted spectrum `α` of `ρ` and
/// `Φ_λ(α)`.
#[derive(Debug, Clone)]
pub struct KeylContext {
    pub lambda: Partition,
    pub rho: DensityMatrix,
    pub alpha: SortedSpectrum,
    pub phi: f64,
}

impl KeylContext {
    pub fn new(lambda: Partition, rho: DensityMatrix) -> Result<Self> {
        let d = rho.dim();
        if lambda.len() > d {
            return Err(Error::OutOfRange(format!("partition {lambda} has more than {d} rows")));
        }
        let alpha = rho.spectrum()?;
        let rank = alpha.as_prob_vec().rank(RANK_TOL);
        if lambda.len() > rank {
            return Err(Error::Precondition(format!(
                "partition {lambda} is longer than the rank {rank} of ρ and has probability 0"
            )));
        }
        let phi = normalized_schur_slice(&lambda, alpha.entries());
        if !(phi > 0.0) {
            return Err(Error::Numerical(format!("Φ_{lambda}(α) = {phi}")));
        }
        Ok(Self { lambda, rho, alpha, phi })
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// `Φ_{λ+μ}(α) / Φ_λ(α)`, zero when `λ + μ` does not fit in `d` rows.
    pub fn phi_ratio(&self, shifted: &Partition) -> f64 {
        normalized_schur_slice(shifted, self.alpha.entries()) / self.phi
    }

    /// `R_i = Φ_{λ+e_i}(α) / Φ_λ(α)` for `i = 1..=d`, zero for invalid rows.
    pub fn row_ratios(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.lambda.add_box(i).map_or(0.0, |l| self.phi_ratio(&l)))
            .collect()
    }

    /// Acceptance probability of the rejection sampler,
    /// `Φ_λ(α) / Π α_i^{λ_i}`.
    pub fn expected_acceptance(&self) -> f64 {
        (self.phi.ln() - self.log_envelope()).exp()
    }

    fn log_envelope(&self) -> f64 {
        self.lambda
            .parts()
            .iter()
            .zip(self.alpha.entries())
            .map(|(&l, &a)| l as f64 * a.ln())
            .sum()
    }
}

/// Density of `K_λ(ρ)` against Haar measure at `U`.
pub fn keyl_density(u: &UnitaryMatrix, ctx: &KeylContext) -> Result<f64> {
    let z = ctx.rho.matrix().conjugate_by(u.matrix())?;
    Ok(power_function(&ctx.lambda, &z)? / ctx.phi)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Self-normalized importance-sampling estimate of `E_{U~K_λ(ρ)} f(U)` for a
/// vector-valued `f`, with a Haar proposal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsEstimate {
    pub estimate: Vec<f64>,
    pub std_error: Vec<f64>,
    /// Mean importance weight, an estimate of `Φ_λ(α)`.
    pub weight_mean: f64,
    pub weight_std_error: f64,
    pub draws: usize,
}

/// Estimates `E_{U~K_λ(ρ)} f(U, U†ρU)` from `draws` Haar samples.
pub fn keyl_expectation_vec<F>(f: F, ctx: &KeylContext, draws: usize, seed: u64) -> Result<IsEstimate>
where
    F: Fn(&UnitaryMatrix, &ComplexMatrix) -> Vec<f64> + Sync,
{
    if draws < MIN_IS_DRAWS {
        return Err(Error::Precondition(format!("need at least {MIN_IS_DRAWS} draws, got {draws}")));
    }
    let d = ctx.dim();
    let samples: Vec<Result<(f64, Vec<f64>)>> = replicas(seed, draws, |r| {
        let u = haar_unitary(d, r);
        let z = ctx.rho.matrix().conjugate_by(u.matrix())?;
        let lw = log_power_function(&ctx.lambda, &z)?;
        Ok((lw, f(&u, &z)))
    });
    let samples: Vec<(f64, Vec<f64>)> = samples.into_iter().collect::<Result<_>>()?;
    let shift = samples.iter().map(|(lw, _)| *lw).fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return Err(Error::ZeroWeights);
    }
    let dims = samples[0].1.len();
    let weights: Vec<f64> = samples.iter().map(|(lw, _)| (lw - shift).exp()).collect();
    let mut wsum = CompensatedSum::default();
    let mut wsq = CompensatedSum::default();
    let mut num = vec![CompensatedSum::default(); dims];
    for ((_, fv), &w) in samples.iter().zip(&weights) {
        wsum.add(w);
        wsq.add(w * w);
        for (acc, &x) in num.iter_mut().zip(fv) {
            acc.add(w * x);
        }
    }
    let wtot = wsum.value();
    let estimate: Vec<f64> = num.iter().map(|s| s.value() / wtot).collect();
    let mut resid = vec![CompensatedSum::default(); dims];
    for ((_, fv), &w) in samples.iter().zip(&weights) {
        for ((acc, &x), mu) in resid.iter_mut().zip(fv).zip(&estimate) {
            let t = w * (x - mu);
            acc.add(t * t);
        }
    }
    let std_error = resid.iter().map(|s| s.value().sqrt() / wtot).collect();
    let n = draws as f64;
    let wmean = wtot / n;
    let wvar = ((wsq.value() / n - wmean * wmean) * n / (n - 1.0)).max(0.0);
    let scale = shift.exp();
    Ok(IsEstimate {
        estimate,
        std_error,
        weight_mean: wmean * scale,
        weight_std_error: (wvar / n).sqrt() * scale,
        draws,
    })
}

/// Scalar version of [`keyl_expectation_vec`]: returns the estimate, its
/// standard error, and the weight-mean estimate of `Φ_λ(α)` with its error.
pub fn keyl_expectation<F>(f: F, ctx: &KeylContext, draws: usize, seed: u64) -> Result<IsEstimate>
where
    F: Fn(&UnitaryMatrix, &ComplexMatrix) -> f64 + Sync,
{
    keyl_expectation_vec(|u, z| vec![f(u, z)], ctx, draws, seed)
}

/// Exact sample from `K_λ(ρ)`: Haar proposals accepted with probability
/// `Δ_λ(U†ρU) / Π α_i^{λ_i}`.
pub fn keyl_sample_rejection<R: Rng + ?Sized>(ctx: &KeylContext, rng: &mut R, max_tries: u64) -> Result<UnitaryMatrix> {
    let log_env = ctx.log_envelope();
    if !log_env.is_finite() {
        return Err(Error::Precondition("envelope Π α_i^{λ_i} vanishes".into()));
    }
    let d = ctx.dim();
    let mut acc_sum = 0.0;
    for _ in 0..max_tries {
        let u = haar_unitary(d, rng);
        let z = ctx.rho.matrix().conjugate_by(u.matrix())?;
        let p = (log_power_function(&ctx.lambda, &z)? - log_env).exp().min(1.0);
        acc_sum += p;
        if rng.random::<f64>() < p {
            return Ok(u);
        }
    }
    Err(Error::RejectionExhausted {
        tries: max_tries,
        observed: acc_sum / max_tries.max(1) as f64,
        expected: ctx.expected_acceptance(),
    })
}

/// `ρ̂ = U diag^(k)(λ/n) U†` together with the measured data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyEstimate {
    pub rho_hat: ComplexMatrix,
    pub shape: Partition,
    pub u: UnitaryMatrix,
    pub k: Option<usize>,
}

fn truncated_diag(shape: &Partition, d: usize, k: usize) -> Vec<f64> {
    let n = shape.size() as f64;
    shape
        .padded(d)
        .iter()
        .enumerate()
        .map(|(i, &l)| if i < k { l as f64 / n } else { 0.0 })
        .collect()
}

fn estimate_with_rank<R: Rng + ?Sized>(
    n: usize,
    rho: &DensityMatrix,
    k: Option<usize>,
    rng: &mut R,
    max_tries: u64,
) -> Result<TomographyEstimate> {
    if n == 0 {
        return Err(Error::Empty("copies"));
    }
    let d = rho.dim();
    let alpha = rho.spectrum()?;
    let shape = sw_sample(n, alpha.as_prob_vec(), rng);
    let ctx = KeylContext::new(shape.clone(), rho.clone())?;
    let u = keyl_sample_rejection(&ctx, rng, max_tries)?;
    let rho_hat = u.conjugate_diag(&truncated_diag(&shape, d, k.unwrap_or(d)))?;
    Ok(TomographyEstimate { rho_hat, shape, u, k })
}

/// Weak Schur sampling followed by a Keyl measurement on `n` copies.
pub fn tomography_estimate<R: Rng + ?Sized>(n: usize, rho: &DensityMatrix, rng: &mut R, max_tries: u64) -> Result<TomographyEstimate> {
    estimate_with_rank(n, rho, None, rng, max_tries)
}

/// Like [`tomography_estimate`] but keeps only the top `k` eigenvalues.
pub fn pca_estimate<R: Rng + ?Sized>(
    n: usize,
    rho: &DensityMatrix,
    k: usize,
    rng: &mut R,
    max_tries: u64,
) -> Result<TomographyEstimate> {
    if k == 0 || k > rho.dim() {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={}", rho.dim())));
    }
    estimate_with_rank(n, rho, Some(k), rng, max_tries)
}

pub const TAG_FROBENIUS: &str = "E||ρ̂ - ρ||_F² ≤ (4d - 3)/n";
pub const TAG_PCA: &str = "E||ρ̂_k - ρ||₁ ≤ Σ_{i>k} α_i + 6√(kd/n)";
pub const TAG_CALIBRATION: &str = "E_Haar Δ_λ(U†ρU) = Φ_λ(α)";
pub const TAG_POWER_MOMENT: &str = "E_K Δ_μ(U†ρU) = Φ_{λ+μ}(α)/Φ_λ(α)";
pub const TAG_DIAG_AVERAGE: &str = "E_K avg_{i≤m} (U†ρU)_ii = Σ_i p_i Φ_{λ+e_i}(α)/Φ_λ(α)";
pub const TAG_DIAG_LOWER: &str = "E_K (U†ρU)_mm ≥ Φ_{λ+e_m}(α)/Φ_λ(α)";

/// Nested Monte Carlo over `λ ~ SW^n(α)` (outer) and `U ~ K_λ(ρ)` (inner,
/// importance sampled), reporting the Frobenius bound and the PCA bound for
/// each `k` in `ks`. The inner expectation is estimated once per distinct
/// outer shape.
pub fn verify_tomography_bounds(
    n: usize,
    rho: &DensityMatrix,
    ks: &[usize],
    outer: usize,
    inner: usize,
    seed: u64,
) -> Result<Vec<BoundReport>> {
    if outer < MIN_OUTER_REPS {
        return Err(Error::Precondition(format!("need at least {MIN_OUTER_REPS} outer replicas, got {outer}")));
    }
    let d = rho.dim();
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > d) {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={d}")));
    }
    let alpha = rho.spectrum()?;
    let shapes = replicas(derive_seed(seed, 1), outer, |r| sw_sample(n, alpha.as_prob_vec(), r));
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for s in &shapes {
        *counts.entry(s.parts().to_vec()).or_insert(0) += 1;
    }
    // Component 0 is ‖ρ̂ − ρ‖_F², then one trace norm per k.
    let mut inner_results: BTreeMap<Vec<usize>, IsEstimate> = BTreeMap::new();
    for (idx, parts) in counts.keys().enumerate() {
        let shape = Partition::new(parts.clone())?;
        let ctx = KeylContext::new(shape.clone(), rho.clone())?;
        let diags: Vec<Vec<f64>> = std::iter::once(d)
            .chain(ks.iter().copied())
            .map(|k| truncated_diag(&shape, d, k))
            .collect();
        let est = keyl_expectation_vec(
            |_, z| {
                // ‖U D U† − ρ‖ = ‖D − U†ρU‖ for every unitarily invariant norm.
                diags
                    .iter()
                    .enumerate()
                    .map(|(j, diag)| {
                        let diff = &ComplexMatrix::diag(diag) - z;
                        if j == 0 {
                            diff.frobenius_norm().powi(2)
                        } else {
                            hermitian_eigenvalues(&diff)
                                .map(|e| e.iter().map(|x| x.abs()).sum())
                                .unwrap_or(f64::NAN)
                        }
                    })
                    .collect()
            },
            &ctx,
            inner,
            derive_seed(seed, 1000 + idx as u64),
        )?;
        inner_results.insert(parts.clone(), est);
    }
    let components = 1 + ks.len();
    let mut out = Vec::with_capacity(components);
    for c in 0..components {
        let mut acc = MeanAcc::default();
        let mut inner_var = 0.0;
        for s in &shapes {
            acc.push(inner_results[s.parts()].estimate[c]);
        }
        for (parts, &cnt) in &counts {
            let w = cnt as f64 / outer as f64;
            inner_var += (w * inner_results[parts].std_error[c]).powi(2);
        }
        let se = (acc.std_error().powi(2) + inner_var).sqrt();
        let report = if c == 0 {
            BoundReport::monte_carlo(
                "tomography_frobenius",
                TAG_FROBENIUS,
                params!("n" => n, "d" => d, "alpha" => alpha.entries(), "outer" => outer, "inner" => inner),
                CheckKind::Upper,
                acc.mean(),
                se,
                (4.0 * d as f64 - 3.0) / n as f64,
                outer as u64,
            )
        } else {
            let k = ks[c - 1];
            let tail: f64 = alpha.entries()[k..].iter().sum();
            BoundReport::monte_carlo(
                "pca_trace",
                TAG_PCA,
                params!("n" => n, "d" => d, "k" => k, "alpha" => alpha.entries(), "outer" => outer, "inner" => inner),
                CheckKind::Upper,
                acc.mean(),
                se,
                tail + 6.0 * ((k * d) as f64 / n as f64).sqrt(),
                outer as u64,
            )
        };
        out.push(report);
    }
    Ok(out)
}

pub fn verify_frobenius_bound(n: usize, rho: &DensityMatrix, outer: usize, inner: usize, seed: u64) -> Result<BoundReport> {
    Ok(verify_tomography_bounds(n, rho, &[], outer, inner, seed)?.remove(0))
}

pub fn verify_pca_bound(n: usize, rho: &DensityMatrix, k: usize, outer: usize, inner: usize, seed: u64) -> Result<BoundReport> {
    Ok(verify_tomography_bounds(n, rho, &[k], outer, inner, seed)?.remove(1))
}

/// Checks that the mean importance weight matches `Φ_λ(α)`.
pub fn verify_calibration(ctx: &KeylContext, draws: usize, seed: u64) -> Result<BoundReport> {
    let est = keyl_expectation(|_, _| 1.0, ctx, draws, seed)?;
    Ok(BoundReport::monte_carlo(
        "keyl_calibration",
        TAG_CALIBRATION,
        params!("lambda" => ctx.lambda.parts(), "alpha" => ctx.alpha.entries(), "draws" => draws),
        CheckKind::Equal,
        est.weight_mean,
        est.weight_std_error,
        ctx.phi,
        draws as u64,
    ))
}

/// Checks `E_K Δ_μ(U†ρU) = Φ_{λ+μ}(α) / Φ_λ(α)`.
pub fn verify_power_moment(ctx: &KeylContext, mu: &Partition, draws: usize, seed: u64) -> Result<BoundReport> {
    let est = keyl_expectation(|_, z| power_function(mu, z).unwrap_or(f64::NAN), ctx, draws, seed)?;
    Ok(BoundReport::monte_carlo(
        "keyl_power_moment",
        TAG_POWER_MOMENT,
        params!("lambda" => ctx.lambda.parts(), "mu" => mu.parts(), "alpha" => ctx.alpha.entries(), "draws" => draws),
        CheckKind::Equal,
        est.estimate[0],
        est.std_error[0],
        ctx.phi_ratio(&ctx.lambda.plus(mu)),
        draws as u64,
    ))
}

/// Weights `p_i = dim_m(λ^(m) + e_i) / (m · dim_m(λ^(m)))`, `i = 1..=m`,
/// which sum to 1.
pub fn pieri_weights(lambda: &Partition, m: usize) -> Vec<f64> {
    let up = lambda.upper_part(m);
    let base = dim_weyl_f64(&up, m);
    (0..m)
        .map(|i| up.add_box(i).map_or(0.0, |l| dim_weyl_f64(&l, m) / (m as f64 * base)))
        .collect()
}

/// For each `m ∈ [d]`: the averaged diagonal identity (two-sided) and the
/// lower bound on `E (U†ρU)_mm` (one-sided), from one importance-sampling
/// pass.
pub fn verify_diagonal_moments(ctx: &KeylContext, draws: usize, seed: u64) -> Result<Vec<BoundReport>> {
    let d = ctx.dim();
    let est = keyl_expectation_vec(
        |_, z| {
            let diag: Vec<f64> = (0..d).map(|i| z[(i, i)].re).collect();
            let mut out = diag.clone();
            let mut run = 0.0;
            for (m, x) in diag.iter().enumerate() {
                run += x;
                out.push(run / (m + 1) as f64);
            }
            out
        },
        ctx,
        draws,
        seed,
    )?;
    let ratios = ctx.row_ratios();
    let mut out = Vec::with_capacity(2 * d);
    for m in 1..=d {
        let p = pieri_weights(&ctx.lambda, m);
        let rhs: f64 = p.iter().zip(&ratios).map(|(a, b)| a * b).sum();
        let base = params!("lambda" => ctx.lambda.parts(), "alpha" => ctx.alpha.entries(), "m" => m, "draws" => draws);
        out.push(BoundReport::monte_carlo(
            "keyl_diag_average",
            TAG_DIAG_AVERAGE,
            base.clone(),
            CheckKind::Equal,
            est.estimate[d + m - 1],
            est.std_error[d + m - 1],
            rhs,
            draws as u64,
        ));
        out.push(BoundReport::monte_carlo(
            "keyl_diag_lower",
            TAG_DIAG_LOWER,
            base,
            CheckKind::Lower,
            est.estimate[m - 1],
            est.std_error[m - 1],
            ratios[m - 1],
            draws as u64,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{density_from_spectrum, trace_distance};
    use crate::rng::stream;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn spectrum(v: &[f64]) -> SortedSpectrum {
        SortedSpectrum::new(v.to_vec()).unwrap()
    }

    fn random_rho(alpha: &[f64], seed: u64) -> DensityMatrix {
        let d = alpha.len();
        density_from_spectrum(&spectrum(alpha), &haar_unitary(d, &mut stream(seed, 0))).unwrap()
    }

    #[test]
    fn density_examples() {
        let ctx = KeylContext::new(p(&[3, 1]), DensityMatrix::maximally_mixed(2)).unwrap();
        let mut rng = stream(1, 0);
        for _ in 0..20 {
            let v = keyl_density(&haar_unitary(2, &mut rng), &ctx).unwrap();
            assert!((v - 1.0).abs() < 1e-9);
        }
        let alpha = [0.7, 0.3];
        let rho = density_from_spectrum(&spectrum(&alpha), &UnitaryMatrix::identity(2)).unwrap();
        let ctx = KeylContext::new(p(&[3, 1]), rho).unwrap();
        let v = keyl_density(&UnitaryMatrix::identity(2), &ctx).unwrap();
        assert!((v - 0.7f64.powi(3) * 0.3 / ctx.phi).abs() < 1e-12);
    }

    #[test]
    fn density_integrates_to_one() {
        let ctx = KeylContext::new(p(&[4, 2, 1]), random_rho(&[0.5, 0.3, 0.2], 3)).unwrap();
        let vals = replicas(8, 50_000, |r| keyl_density(&haar_unitary(3, r), &ctx).unwrap());
        let acc = MeanAcc::from_values(&vals);
        assert!((acc.mean() - 1.0).abs() < 3.0 * acc.std_error());
    }

    #[test]
    fn context_rejects_impossible_shapes() {
        let rho = density_from_spectrum(&spectrum(&[1.0, 0.0]), &UnitaryMatrix::identity(2)).unwrap();
        assert!(KeylContext::new(p(&[1, 1]), rho.clone()).is_err());
        assert!(KeylContext::new(p(&[1, 1, 1]), DensityMatrix::maximally_mixed(2)).is_err());
        assert!(KeylContext::new(p(&[3]), rho).is_ok());
    }

    #[test]
    fn expectation_of_constant_is_one() {
        let ctx = KeylContext::new(p(&[3, 1]), random_rho(&[0.6, 0.4], 2)).unwrap();
        let est = keyl_expectation(|_, _| 1.0, &ctx, 2000, 4).unwrap();
        assert!((est.estimate[0] - 1.0).abs() < 1e-12);
        assert_eq!(est.std_error[0], 0.0);
        assert!(keyl_expectation(|_, _| 1.0, &ctx, 999, 4).is_err());
    }

    #[test]
    fn first_diagonal_and_power_moments() {
        let ctx = KeylContext::new(p(&[4, 2]), random_rho(&[0.5, 0.3, 0.2], 5)).unwrap();
        let est = keyl_expectation(|_, z| z[(0, 0)].re, &ctx, 50_000, 6).unwrap();
        let target = ctx.phi_ratio(&p(&[5, 2]));
        assert!((est.estimate[0] - target).abs() < 3.0 * est.std_error[0]);
        let r = verify_power_moment(&ctx, &p(&[2, 1]), 50_000, 7).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_calibration(&ctx, 50_000, 8).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn pieri_weights_sum_to_one() {
        for n in 0..=8 {
            for lam in Partition::all_of(n, 4) {
                for m in 1..=4 {
                    let w = pieri_weights(&lam, m);
                    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                    assert!(w.iter().all(|&x| x >= 0.0));
                }
                assert_eq!(pieri_weights(&lam, 1), vec![1.0]);
            }
        }
    }

    #[test]
    fn diagonal_moment_reports() {
        let ctx = KeylContext::new(p(&[3, 1]), random_rho(&[0.65, 0.35], 9)).unwrap();
        let reports = verify_diagonal_moments(&ctx, 50_000, 10).unwrap();
        assert_eq!(reports.len(), 4);
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");
        // m = 1: the averaged identity is the first-diagonal formula.
        assert!((reports[0].bound - ctx.row_ratios()[0]).abs() < 1e-15);
        let ctx = KeylContext::new(p(&[4, 2, 1]), random_rho(&[0.5, 0.3, 0.2], 11)).unwrap();
        let reports = verify_diagonal_moments(&ctx, 50_000, 12).unwrap();
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");
    }

    #[test]
    fn rejection_sampler() {
        let ctx = KeylContext::new(p(&[5, 2]), DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((ctx.expected_acceptance() - 1.0).abs() < 1e-12);
        let mut rng = stream(13, 0);
        for _ in 0..10 {
            assert!(keyl_sample_rejection(&ctx, &mut rng, 1).is_ok());
        }
        // Pure state with a single-row shape: acceptance Φ_(n)(α)/α₁^n.
        let rho = density_from_spectrum(&spectrum(&[1.0, 0.0]), &haar_unitary(2, &mut rng)).unwrap();
        let ctx = KeylContext::new(p(&[4]), rho).unwrap();
        assert!((ctx.expected_acceptance() - 1.0 / 5.0).abs() < 1e-12);
        assert!(keyl_sample_rejection(&ctx, &mut rng, 10_000).is_ok());
        let ctx = KeylContext::new(p(&[8]), random_rho(&[0.7, 0.3], 14)).unwrap();
        match keyl_sample_rejection(&ctx, &mut rng, 1) {
            Ok(_) => {}
            Err(Error::RejectionExhausted { expected, .. }) => {
                assert!((expected - ctx.expected_acceptance()).abs() < 1e-15)
            }
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn rejection_matches_importance_sampling() {
        let rho = random_rho(&[0.7, 0.3], 15);
        let ctx = KeylContext::new(p(&[6, 2]), rho).unwrap();
        let samples = replicas(16, 20_000, |r| {
            let u = keyl_sample_rejection(&ctx, r, DEFAULT_MAX_TRIES).unwrap();
            ctx.rho.matrix().conjugate_by(u.matrix()).unwrap()[(0, 0)].re
        });
        let acc = MeanAcc::from_values(&samples);
        let is = keyl_expectation(|_, z| z[(0, 0)].re, &ctx, 50_000, 17).unwrap();
        let se = (acc.std_error().powi(2) + is.std_error[0].powi(2)).sqrt();
        assert!((acc.mean() - is.estimate[0]).abs() < 3.0 * se);
        let exact = ctx.phi_ratio(&p(&[7, 2]));
        assert!((acc.mean() - exact).abs() < 3.0 * acc.std_error());
    }

    #[test]
    fn estimators() {
        let mut rng = stream(18, 0);
        let rho = random_rho(&[0.6, 0.3, 0.1], 19);
        let est = tomography_estimate(8, &rho, &mut rng, DEFAULT_MAX_TRIES).unwrap();
        assert!((est.rho_hat.trace().re - 1.0).abs() < 1e-12);
        let eig = hermitian_eigenvalues(&est.rho_hat).unwrap();
        for (a, b) in eig.iter().zip(est.shape.padded(3)) {
            assert!((a - b as f64 / 8.0).abs() < 1e-12);
        }
        let pca = pca_estimate(8, &rho, 1, &mut rng, DEFAULT_MAX_TRIES).unwrap();
        let eig = hermitian_eigenvalues(&pca.rho_hat).unwrap();
        assert!(eig[1].abs() < 1e-12 && eig[2].abs() < 1e-12);
        assert!(pca_estimate(8, &rho, 4, &mut rng, DEFAULT_MAX_TRIES).is_err());
        let pure = random_rho(&[1.0, 0.0], 20);
        let est = tomography_estimate(6, &pure, &mut rng, DEFAULT_MAX_TRIES).unwrap();
        assert_eq!(est.shape, p(&[6]));
        let eig = hermitian_eigenvalues(&est.rho_hat).unwrap();
        assert!((eig[0] - 1.0).abs() < 1e-12 && eig[1].abs() < 1e-12);
        let pca = pca_estimate(6, &pure, 1, &mut rng, DEFAULT_MAX_TRIES).unwrap();
        assert!(trace_distance(&pca.rho_hat, &est.rho_hat).unwrap() < 2.0);
    }

    #[test]
    fn same_seed_same_estimate() {
        let rho = random_rho(&[0.6, 0.4], 21);
        let a = tomography_estimate(8, &rho, &mut stream(3, 3), DEFAULT_MAX_TRIES).unwrap();
        let b = pca_estimate(8, &rho, 2, &mut stream(3, 3), DEFAULT_MAX_TRIES).unwrap();
        assert_eq!(a.rho_hat, b.rho_hat);
    }

    #[test]
    fn frobenius_and_pca_bounds_small() {
        let rho = DensityMatrix::maximally_mixed(2);
        let reports = verify_tomography_bounds(16, &rho, &[1, 2], 300, 2000, 22).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");
        let rho = random_rho(&[0.8, 0.15, 0.05], 23);
        let r = verify_pca_bound(32, &rho, 1, 200, 2000, 24).unwrap();
        assert!(r.pass);
        assert!((r.bound - (0.2 + 6.0 * (3.0f64 / 32.0).sqrt())).abs() < 1e-9);
        let r = verify_frobenius_bound(16, &random_rho(&[0.6, 0.4], 25), 200, 2000, 26).unwrap();
        assert!(r.pass && r.bound == 5.0 / 16.0);
        assert!(verify_frobenius_bound(16, &rho, 199, 2000, 26).is_err());
    }
}

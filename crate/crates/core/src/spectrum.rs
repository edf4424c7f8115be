//! Empirical Young diagram spectrum estimation, error metrics, amplification
//! and the expectation-bound checks around it.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params;
use crate::partition::{Partition, ProbVec, MAJORIZATION_TOL};
use crate::report::{BoundReport, CheckKind};
use crate::rng::{replicas, MeanAcc};
use crate::schur_weyl::{growth_sample, sw_pmf_exact, sw_sample};

pub const MIN_MC_REPS: usize = 1000;

/// `λ/n` for an observed shape `λ ⊢ n`, padded to dimension `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    pub values: Vec<f64>,
    pub n: usize,
    pub shape: Partition,
}

impl SpectrumEstimate {
    pub fn from_shape(shape: Partition, d: usize) -> Result<Self> {
        if shape.len() > d {
            return Err(Error::OutOfRange(format!("shape {shape} has more than {d} rows")));
        }
        let n = shape.size();
        if n == 0 {
            return Err(Error::Empty("shape"));
        }
        let values = shape.padded(d).iter().map(|&l| l as f64 / n as f64).collect();
        Ok(Self { values, n, shape })
    }
}

/// Runs weak Schur sampling on `n` copies and returns the normalized shape.
pub fn eyd_estimate<R: Rng + ?Sized>(n: usize, alpha: &ProbVec, rng: &mut R) -> Result<SpectrumEstimate> {
    SpectrumEstimate::from_shape(sw_sample(n, alpha, rng), alpha.dim())
}

/// The largest `k` entries of the estimate.
pub fn truncated_estimate(est: &SpectrumEstimate, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > est.values.len() {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={}", est.values.len())));
    }
    Ok(est.values[..k].to_vec())
}

fn padded_pairs<'a>(x: &'a [f64], y: &'a [f64]) -> impl Iterator<Item = (f64, f64)> + 'a {
    let len = x.len().max(y.len());
    (0..len).map(move |i| (x.get(i).copied().unwrap_or(0.0), y.get(i).copied().unwrap_or(0.0)))
}

/// Squared Euclidean distance.
pub fn l2_sq(x: &[f64], y: &[f64]) -> f64 {
    padded_pairs(x, y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Total variation distance `½‖x − y‖₁`.
pub fn tv(x: &[f64], y: &[f64]) -> f64 {
    padded_pairs(x, y).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
}

/// `½ Σ_{i≤k} |x_i − y_i|`.
pub fn dtvk(k: usize, x: &[f64], y: &[f64]) -> f64 {
    padded_pairs(x, y).take(k).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
}

/// Returns the estimate with the most others within `2ε` in total
/// variation; ties go to the lowest index.
pub fn amplify(estimates: &[Vec<f64>], eps: f64) -> Result<Vec<f64>> {
    if estimates.is_empty() {
        return Err(Error::Empty("estimates"));
    }
    let score = |i: usize| {
        estimates
            .iter()
            .filter(|e| tv(&estimates[i], e) <= 2.0 * eps)
            .count()
    };
    let mut best = 0;
    let mut best_score = score(0);
    for i in 1..estimates.len() {
        let s = score(i);
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    Ok(estimates[best].clone())
}

fn check_reps(reps: usize, min: usize) -> Result<()> {
    if reps < min {
        return Err(Error::Precondition(format!("need at least {min} replicas, got {reps}")));
    }
    Ok(())
}

fn mc_report<F>(
    experiment: &str,
    tag: &str,
    params: serde_json::Map<String, serde_json::Value>,
    check: CheckKind,
    bound: f64,
    reps: usize,
    seed: u64,
    f: F,
) -> BoundReport
where
    F: Fn(&mut crate::rng::RngState) -> f64 + Sync,
{
    let values = replicas(seed, reps, f);
    let acc = MeanAcc::from_values(&values);
    BoundReport::monte_carlo(experiment, tag, params, check, acc.mean(), acc.std_error(), bound, reps as u64)
}

pub const TAG_EYD: &str = "E||λ/n - α||² ≤ d/n";
pub const TAG_SECOND_MOMENT: &str = "E Σ λ_i² ≤ Σ (nα_i)² + dn";
pub const TAG_MAJORIZATION: &str = "(E λ_i)_i majorizes (nα_i)_i";
pub const TAG_TOPK: &str = "E d_TV^(k)(λ/n, α) ≤ (1.92k + 0.5)/√n";
pub const TAG_TOPK_SUM: &str = "E Σ_{i≤k} λ_i ≤ n Σ_{i≤k} α_i + 2√2 k√n";
pub const TAG_TOPK_SUM_LOWER: &str = "E Σ_{i≤k} λ_i ≥ n Σ_{i≤k} α_i";
pub const TAG_UNIFORM_ROW1: &str = "uniform α: E λ_1 ≤ n/d + 2√n";
pub const TAG_ROW1_INCREMENT: &str = "uniform α: Pr[m-th box enters row 1] ≤ 1/d + 1/√m";

fn alpha_param(alpha: &[f64]) -> serde_json::Value {
    serde_json::json!(alpha)
}

/// Monte Carlo check of `E‖λ̄ − α‖² ≤ d/n`.
pub fn verify_eyd_bound(n: usize, alpha: &ProbVec, reps: usize, seed: u64) -> Result<BoundReport> {
    check_reps(reps, MIN_MC_REPS)?;
    let sorted = alpha.sorted();
    let d = alpha.dim();
    let a = sorted.entries().to_vec();
    Ok(mc_report(
        "eyd",
        TAG_EYD,
        params!("n" => n, "d" => d, "alpha" => alpha_param(&a)),
        CheckKind::Upper,
        d as f64 / n as f64,
        reps,
        seed,
        |r| {
            let est = eyd_estimate(n, alpha, r).expect("n ≥ 1");
            l2_sq(&est.values, &a)
        },
    ))
}

/// Monte Carlo check of `E d_TV^(k)(λ̄, α) ≤ (1.92k + 0.5)/√n`.
pub fn verify_topk_bound(n: usize, alpha: &ProbVec, k: usize, reps: usize, seed: u64) -> Result<BoundReport> {
    check_reps(reps, MIN_MC_REPS)?;
    let d = alpha.dim();
    if k == 0 || k > d {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={d}")));
    }
    let a = alpha.sorted().entries().to_vec();
    Ok(mc_report(
        "topk",
        TAG_TOPK,
        params!("n" => n, "d" => d, "k" => k, "alpha" => alpha_param(&a)),
        CheckKind::Upper,
        topk_bound(n, k),
        reps,
        seed,
        |r| {
            let est = eyd_estimate(n, alpha, r).expect("n ≥ 1");
            dtvk(k, &est.values, &a)
        },
    ))
}

pub fn topk_bound(n: usize, k: usize) -> f64 {
    (1.92 * k as f64 + 0.5) / (n as f64).sqrt()
}

/// Monte Carlo upper and lower checks on `E Σ_{i≤k} λ_i`.
pub fn verify_topk_sum_bound(n: usize, alpha: &ProbVec, k: usize, reps: usize, seed: u64) -> Result<[BoundReport; 2]> {
    check_reps(reps, MIN_MC_REPS)?;
    let d = alpha.dim();
    if k == 0 || k > d {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={d}")));
    }
    let a = alpha.sorted().entries().to_vec();
    let head: f64 = a[..k].iter().sum::<f64>() * n as f64;
    let values = replicas(seed, reps, |r| sw_sample(n, alpha, r).prefix_sums(k)[k - 1] as f64);
    let acc = MeanAcc::from_values(&values);
    let p = params!("n" => n, "d" => d, "k" => k, "alpha" => alpha_param(&a));
    let upper = head + 2.0 * 2f64.sqrt() * k as f64 * (n as f64).sqrt();
    Ok([
        BoundReport::monte_carlo("topk_sum", TAG_TOPK_SUM, p.clone(), CheckKind::Upper, acc.mean(), acc.std_error(), upper, reps as u64),
        BoundReport::monte_carlo("topk_sum", TAG_TOPK_SUM_LOWER, p, CheckKind::Lower, acc.mean(), acc.std_error(), head, reps as u64),
    ])
}

/// Monte Carlo check of `E λ_1 ≤ n/d + 2√n` for the uniform spectrum.
pub fn verify_uniform_row1(n: usize, d: usize, reps: usize, seed: u64) -> Result<BoundReport> {
    check_reps(reps, MIN_MC_REPS)?;
    let alpha = ProbVec::uniform(d);
    Ok(mc_report(
        "uniform_row1",
        TAG_UNIFORM_ROW1,
        params!("n" => n, "d" => d),
        CheckKind::Upper,
        n as f64 / d as f64 + 2.0 * (n as f64).sqrt(),
        reps,
        seed,
        |r| sw_sample(n, &alpha, r).part(0) as f64,
    ))
}

/// For the uniform growth process, checks that the probability `δ_m` of the
/// `m`-th box entering the first row satisfies `δ_m ≤ 1/d + 1/√m`, for
/// every `m ≤ n`.
pub fn verify_row1_increments(n: usize, d: usize, reps: usize, seed: u64) -> Result<Vec<BoundReport>> {
    check_reps(reps, MIN_MC_REPS)?;
    let alpha = ProbVec::uniform(d);
    let chains = replicas(seed, reps, |r| {
        let chain = growth_sample(n, &alpha, r);
        chain.windows(2).map(|w| w[1].part(0) > w[0].part(0)).collect::<Vec<bool>>()
    });
    Ok((1..=n)
        .map(|m| {
            let mut acc = MeanAcc::default();
            for c in &chains {
                acc.push(if c[m - 1] { 1.0 } else { 0.0 });
            }
            let bound = 1.0 / d as f64 + 1.0 / (m as f64).sqrt();
            BoundReport::monte_carlo(
                "row1_increment",
                TAG_ROW1_INCREMENT,
                params!("m" => m, "d" => d),
                CheckKind::Upper,
                acc.mean(),
                acc.std_error(),
                bound,
                reps as u64,
            )
        })
        .collect())
}

// Exact checks on rational spectra. Each compares expectations under the
// exact pmf with zero tolerance; bounds involving √n are compared after
// squaring.

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `x ≤ c·√n`, decided exactly for `c ≥ 0`.
pub fn le_scaled_sqrt(x: &BigRational, c: &BigRational, n: usize) -> bool {
    !x.is_positive() || x * x <= c * c * rat(n as i64)
}

fn check_exact_alpha(alpha: &[BigRational]) -> Result<()> {
    if alpha.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidProbVec("exact spectrum must be sorted descending".into()));
    }
    Ok(())
}

fn alpha_f64(alpha: &[BigRational]) -> Vec<f64> {
    alpha.iter().map(to_f64).collect()
}

fn exact_expectation<F>(pmf: &[(Partition, BigRational)], f: F) -> BigRational
where
    F: Fn(&[usize]) -> BigRational,
{
    pmf.iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(l, p)| p * f(l.parts()))
        .sum()
}

fn padded(l: &[usize], d: usize) -> Vec<i64> {
    (0..d).map(|i| l.get(i).copied().unwrap_or(0) as i64).collect()
}

/// Exact `E‖λ̄ − α‖² ≤ d/n`.
pub fn verify_eyd_exact(n: usize, alpha: &[BigRational]) -> Result<BoundReport> {
    check_exact_alpha(alpha)?;
    let d = alpha.len();
    let pmf = sw_pmf_exact(n, alpha)?;
    let nn = rat(n as i64);
    let e = exact_expectation(&pmf, |l| {
        padded(l, d)
            .iter()
            .zip(alpha)
            .map(|(&li, a)| {
                let diff = rat(li) / &nn - a;
                &diff * &diff
            })
            .sum()
    });
    let bound = rat(d as i64) / nn;
    Ok(BoundReport::exact(
        "eyd_exact",
        TAG_EYD,
        params!("n" => n, "d" => d, "alpha" => alpha_f64(alpha)),
        CheckKind::Upper,
        to_f64(&e),
        to_f64(&bound),
        e <= bound,
    ))
}

/// Exact `E Σλ_i² ≤ Σ(nα_i)² + dn`.
pub fn verify_second_moment(n: usize, alpha: &[BigRational]) -> Result<BoundReport> {
    let d = alpha.len();
    let pmf = sw_pmf_exact(n, alpha)?;
    let e = exact_expectation(&pmf, |l| l.iter().map(|&x| rat((x * x) as i64)).sum());
    let nn = rat(n as i64);
    let bound: BigRational = alpha.iter().map(|a| (a * &nn) * (a * &nn)).sum::<BigRational>() + rat((d * n) as i64);
    Ok(BoundReport::exact(
        "second_moment",
        TAG_SECOND_MOMENT,
        params!("n" => n, "d" => d, "alpha" => alpha_f64(alpha)),
        CheckKind::Upper,
        to_f64(&e),
        to_f64(&bound),
        e <= bound,
    ))
}

/// Exact `(Eλ_1, …, Eλ_d) ≻ (nα_1, …, nα_d)`. The reported value is the
/// smallest prefix-sum slack, which must be nonnegative.
pub fn verify_expectation_majorization(n: usize, alpha: &[BigRational]) -> Result<BoundReport> {
    let d = alpha.len();
    let pmf = sw_pmf_exact(n, alpha)?;
    let nn = rat(n as i64);
    let mean: Vec<BigRational> = (0..d)
        .map(|i| exact_expectation(&pmf, |l| rat(l.get(i).copied().unwrap_or(0) as i64)))
        .collect();
    let mut target: Vec<BigRational> = alpha.iter().map(|a| a * &nn).collect();
    target.sort_unstable_by(|a, b| b.cmp(a));
    let mut sorted_mean = mean.clone();
    sorted_mean.sort_unstable_by(|a, b| b.cmp(a));
    let (mut pm, mut pt) = (BigRational::zero(), BigRational::zero());
    let mut min_slack: Option<BigRational> = None;
    for i in 0..d {
        pm += &sorted_mean[i];
        pt += &target[i];
        let slack = &pm - &pt;
        if min_slack.as_ref().is_none_or(|m| &slack < m) {
            min_slack = Some(slack);
        }
    }
    let min_slack = min_slack.unwrap_or_else(BigRational::zero);
    let holds = !min_slack.is_negative() && pm == pt;
    Ok(BoundReport::exact(
        "expectation_majorization",
        TAG_MAJORIZATION,
        params!("n" => n, "d" => d, "alpha" => alpha_f64(alpha)),
        CheckKind::Lower,
        to_f64(&min_slack),
        0.0,
        holds,
    ))
}

/// Exact `E d_TV^(k)(λ̄, α) ≤ (1.92k + 0.5)/√n`.
pub fn verify_topk_exact(n: usize, alpha: &[BigRational], k: usize) -> Result<BoundReport> {
    check_exact_alpha(alpha)?;
    let d = alpha.len();
    if k == 0 || k > d {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={d}")));
    }
    let pmf = sw_pmf_exact(n, alpha)?;
    let nn = rat(n as i64);
    let e = exact_expectation(&pmf, |l| {
        padded(l, d)
            .iter()
            .zip(alpha)
            .take(k)
            .map(|(&li, a)| (rat(li) / &nn - a).abs())
            .sum::<BigRational>()
            / rat(2)
    });
    // (1.92k + 0.5)/√n = c·√n with c = (48k/25 + 1/2)/n.
    let c = (BigRational::new(48.into(), 25.into()) * rat(k as i64) + BigRational::new(1.into(), 2.into())) / &nn;
    Ok(BoundReport::exact(
        "topk_exact",
        TAG_TOPK,
        params!("n" => n, "d" => d, "k" => k, "alpha" => alpha_f64(alpha)),
        CheckKind::Upper,
        to_f64(&e),
        topk_bound(n, k),
        le_scaled_sqrt(&e, &c, n),
    ))
}

/// Exact upper and lower checks on `E Σ_{i≤k} λ_i`.
pub fn verify_topk_sum_exact(n: usize, alpha: &[BigRational], k: usize) -> Result<[BoundReport; 2]> {
    check_exact_alpha(alpha)?;
    let d = alpha.len();
    if k == 0 || k > d {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={d}")));
    }
    let pmf = sw_pmf_exact(n, alpha)?;
    let e = exact_expectation(&pmf, |l| rat(l.iter().take(k).sum::<usize>() as i64));
    let head: BigRational = alpha[..k].iter().sum::<BigRational>() * rat(n as i64);
    let excess = &e - &head;
    // 2√2 k √n = c √n with c² = 8k².
    let upper_holds = !excess.is_positive() || &excess * &excess <= rat(8 * (k * k) as i64) * rat(n as i64);
    let p = params!("n" => n, "d" => d, "k" => k, "alpha" => alpha_f64(alpha));
    let upper = to_f64(&head) + 2.0 * 2f64.sqrt() * k as f64 * (n as f64).sqrt();
    Ok([
        BoundReport::exact("topk_sum_exact", TAG_TOPK_SUM, p.clone(), CheckKind::Upper, to_f64(&e), upper, upper_holds),
        BoundReport::exact("topk_sum_exact", TAG_TOPK_SUM_LOWER, p, CheckKind::Lower, to_f64(&e), to_f64(&head), e >= head),
    ])
}

/// Exact `E λ_1 ≤ n/d + 2√n` for the uniform spectrum.
pub fn verify_uniform_row1_exact(n: usize, d: usize) -> Result<BoundReport> {
    let alpha: Vec<BigRational> = (0..d).map(|_| BigRational::new(1.into(), (d as i64).into())).collect();
    let pmf = sw_pmf_exact(n, &alpha)?;
    let e = exact_expectation(&pmf, |l| rat(l.first().copied().unwrap_or(0) as i64));
    let excess = &e - BigRational::new((n as i64).into(), (d as i64).into());
    Ok(BoundReport::exact(
        "uniform_row1_exact",
        TAG_UNIFORM_ROW1,
        params!("n" => n, "d" => d),
        CheckKind::Upper,
        to_f64(&e),
        n as f64 / d as f64 + 2.0 * (n as f64).sqrt(),
        le_scaled_sqrt(&excess, &rat(2), n),
    ))
}

/// Parses `"3/5"` or `"0.25"` style entries into exact rationals; decimal
/// strings are read exactly in base ten.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidProbVec(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(BigRational::new(a.into(), b.into()));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().map_err(|_| bad())?;
    let den: i64 = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    Ok(BigRational::new(num.into(), den.into()))
}

pub fn to_prob_vec(alpha: &[BigRational]) -> Result<ProbVec> {
    let v = alpha_f64(alpha);
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > MAJORIZATION_TOL {
        return Err(Error::InvalidProbVec("weights do not sum to 1".into()));
    }
    ProbVec::new(v.iter().map(|x| x / s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::schur_weyl::sw_pmf;
    use std::collections::HashMap;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn eyd_examples() {
        let mut rng = stream(1, 0);
        for _ in 0..20 {
            assert_eq!(eyd_estimate(10, &pv(&[1.0, 0.0]), &mut rng).unwrap().values, vec![1.0, 0.0]);
            let e = eyd_estimate(10, &pv(&[0.6, 0.0, 0.4]), &mut rng).unwrap();
            assert!(e.values[2] == 0.0);
            let s: f64 = e.values.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eyd_small_case_law() {
        let alpha = pv(&[0.5, 0.5]);
        let pmf = sw_pmf(4, &alpha).unwrap();
        let draws = replicas(3, 40_000, |r| eyd_estimate(4, &alpha, r).unwrap().values);
        let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
        for v in draws {
            *counts.entry(v.iter().map(|x| (x * 4.0) as u64).collect()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        for (l, p) in pmf.iter() {
            let key: Vec<u64> = l.padded(2).iter().map(|&x| x as u64).collect();
            let f = counts[&key] as f64 / 40_000.0;
            assert!((f - p).abs() < 4.0 * (p * (1.0 - p) / 40_000.0).sqrt());
        }
    }

    #[test]
    fn metric_examples() {
        assert!((dtvk(1, &[0.6, 0.4], &[0.5, 0.5]) - 0.05).abs() < 1e-15);
        assert_eq!(tv(&[0.3, 0.7], &[0.3, 0.7]), 0.0);
        let (x, y) = ([0.5, 0.3, 0.2], [0.6, 0.25, 0.15]);
        assert!((dtvk(3, &x, &y) - tv(&x, &y)).abs() < 1e-15);
        assert!((l2_sq(&[1.0], &[0.5, 0.5]) - 0.5).abs() < 1e-15);
        assert!((tv(&[1.0], &[0.5, 0.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn truncation() {
        let est = SpectrumEstimate::from_shape(Partition::new(vec![3, 1]).unwrap(), 2).unwrap();
        assert_eq!(truncated_estimate(&est, 2).unwrap(), est.values);
        assert_eq!(truncated_estimate(&est, 1).unwrap(), vec![0.75]);
        assert!(truncated_estimate(&est, 0).is_err());
        assert!(truncated_estimate(&est, 3).is_err());
    }

    #[test]
    fn amplify_examples() {
        assert_eq!(amplify(&[vec![0.3, 0.7]], 0.1).unwrap(), vec![0.3, 0.7]);
        let e = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(amplify(&e, 0.1).unwrap(), vec![1.0, 0.0]);
        assert!(amplify(&[], 0.1).is_err());
    }

    #[test]
    fn amplify_majority_cluster() {
        use rand::Rng;
        let mut rng = stream(77, 0);
        let truth = [0.5, 0.3, 0.2];
        let eps = 0.05;
        for _ in 0..200 {
            let m = rng.random_range(3..15);
            let good = m / 2 + 1;
            let mut ests = Vec::new();
            for i in 0..m {
                let v: Vec<f64> = if i < good {
                    // A point within ε of the truth.
                    let t = rng.random::<f64>() * eps;
                    vec![truth[0] + t, truth[1] - t, truth[2]]
                } else {
                    let a: f64 = rng.random();
                    vec![a, 1.0 - a, 0.0]
                };
                ests.push(v);
            }
            let k = rng.random_range(0..m);
            ests.swap(0, k);
            let out = amplify(&ests, eps).unwrap();
            assert!(tv(&out, &truth) <= 3.0 * eps + 1e-12);
        }
    }

    #[test]
    fn mc_reports_pass() {
        let r = verify_eyd_bound(16, &pv(&[0.6, 0.4]), 20_000, 5).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_eyd_bound(16, &pv(&[1.0, 0.0, 0.0]), 2_000, 5).unwrap();
        assert!(r.pass && r.empirical_mean == 0.0);
        let r = verify_topk_bound(64, &pv(&[0.4, 0.3, 0.2, 0.1]), 2, 5_000, 5).unwrap();
        assert!(r.pass);
        let r = verify_uniform_row1(100, 2, 10_000, 5).unwrap();
        assert!(r.pass);
        let [u, l] = verify_topk_sum_bound(50, &pv(&[0.5, 0.3, 0.2]), 2, 5_000, 5).unwrap();
        assert!(u.pass && l.pass);
        assert!(verify_eyd_bound(16, &pv(&[0.6, 0.4]), 999, 5).is_err());
    }

    #[test]
    fn d_equals_one() {
        let r = verify_uniform_row1(30, 1, 1000, 2).unwrap();
        assert_eq!(r.empirical_mean, 30.0);
        assert_eq!(r.bound, 30.0 + 2.0 * 30f64.sqrt());
        assert!(r.pass);
    }

    #[test]
    fn exact_checks() {
        let alphas = [
            vec![q(3, 5), q(2, 5)],
            vec![q(1, 2), q(1, 2)],
            vec![q(1, 2), q(1, 3), q(1, 6)],
            vec![q(7, 10), q(1, 5), q(1, 10)],
        ];
        for a in &alphas {
            for n in 1..=8 {
                assert!(verify_eyd_exact(n, a).unwrap().pass);
                assert!(verify_second_moment(n, a).unwrap().pass);
                assert!(verify_expectation_majorization(n, a).unwrap().pass);
                for k in 1..=a.len() {
                    assert!(verify_topk_exact(n, a, k).unwrap().pass);
                    let [u, l] = verify_topk_sum_exact(n, a, k).unwrap();
                    assert!(u.pass && l.pass);
                }
            }
        }
        for d in 1..=3 {
            for n in 1..=8 {
                assert!(verify_uniform_row1_exact(n, d).unwrap().pass);
            }
        }
    }

    #[test]
    fn exact_small_cases() {
        // n = 1: λ = (1), E λ_1² = 1.
        let a = [q(7, 10), q(3, 10)];
        let r = verify_second_moment(1, &a).unwrap();
        assert_eq!(r.empirical_mean, 1.0);
        // Point mass: expectation majorization holds with equality.
        let r = verify_expectation_majorization(5, &[q(1, 1), q(0, 1)]).unwrap();
        assert!(r.pass && r.empirical_mean == 0.0);
        let r = verify_expectation_majorization(1, &[q(1, 2), q(1, 3), q(1, 6)]).unwrap();
        assert!(r.pass);
        assert!(verify_eyd_exact(3, &[q(1, 3), q(2, 3)]).is_err());
    }

    #[test]
    fn sqrt_comparison() {
        assert!(le_scaled_sqrt(&rat(2), &rat(1), 4));
        assert!(!le_scaled_sqrt(&q(201, 100), &rat(1), 4));
        assert!(le_scaled_sqrt(&rat(-5), &rat(0), 4));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/5").unwrap(), q(3, 5));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1").unwrap(), q(1, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.1e3").is_err());
    }

    #[test]
    fn row1_increments() {
        let reps = verify_row1_increments(30, 3, 20_000, 3).unwrap();
        assert_eq!(reps.len(), 30);
        assert_eq!(reps[0].empirical_mean, 1.0);
        assert!(reps.iter().all(|r| r.pass));
    }
}

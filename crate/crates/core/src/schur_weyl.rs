//! The Schur–Weyl distribution: exact pmf, sampling through RSK, the growth
//! process and its transition probabilities, and conditional word sampling.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{Partition, ProbVec};
use crate::rng::pick;
use crate::schur::{dim_syt, horizontal_strips, schur, schur_ssyt_exact};
use crate::tableau::{rsk_inverse, SemistandardTableau, StandardTableau, Word};

pub const PMF_MAX_N: usize = 20;
pub const PMF_MAX_D: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfEntry {
    pub partition: Partition,
    pub probability: f64,
}

/// Exact distribution of `shRSK(w)` for `w ~ α^{⊗n}`, listed in
/// lexicographically descending partition order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SwPmf {
    pub entries: Vec<PmfEntry>,
}

impl SwPmf {
    pub fn prob(&self, lambda: &Partition) -> f64 {
        self.entries
            .iter()
            .find(|e| &e.partition == lambda)
            .map_or(0.0, |e| e.probability)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, f64)> {
        self.entries.iter().map(|e| (&e.partition, e.probability))
    }

    /// Total variation distance to an empirical histogram.
    pub fn tv_to_counts(&self, counts: &std::collections::HashMap<Partition, u64>) -> f64 {
        let total: u64 = counts.values().sum();
        let mut tv: f64 = self
            .entries
            .iter()
            .map(|e| (e.probability - *counts.get(&e.partition).unwrap_or(&0) as f64 / total as f64).abs())
            .sum();
        tv += counts
            .iter()
            .filter(|(l, _)| !self.entries.iter().any(|e| &e.partition == *l))
            .map(|(_, &c)| c as f64 / total as f64)
            .sum::<f64>();
        tv / 2.0
    }
}

fn pmf_guard(n: usize, d: usize) -> Result<()> {
    if n > PMF_MAX_N {
        return Err(Error::TooLarge { what: "n", value: n, limit: PMF_MAX_N });
    }
    if d > PMF_MAX_D {
        return Err(Error::TooLarge { what: "d", value: d, limit: PMF_MAX_D });
    }
    Ok(())
}

/// `Pr[λ] = f^λ · s_λ(α)` over all `λ ⊢ n` with at most `d` rows.
pub fn sw_pmf(n: usize, alpha: &ProbVec) -> Result<SwPmf> {
    let d = alpha.dim();
    pmf_guard(n, d)?;
    let entries = Partition::all_of(n, d)
        .into_iter()
        .map(|lambda| {
            let f = dim_syt(&lambda).to_f64().expect("f^λ fits in f64 for n ≤ 20");
            let probability = f * schur(&lambda, alpha.entries());
            PmfEntry { partition: lambda, probability }
        })
        .collect();
    Ok(SwPmf { entries })
}

/// Exact rational pmf for rational letter probabilities.
pub fn sw_pmf_exact(n: usize, alpha: &[BigRational]) -> Result<Vec<(Partition, BigRational)>> {
    let d = alpha.len();
    pmf_guard(n, d)?;
    let total: BigRational = alpha.iter().sum();
    if total != BigRational::from_integer(1.into()) || alpha.iter().any(|a| a < &BigRational::zero()) {
        return Err(Error::InvalidProbVec("exact weights must be nonnegative and sum to 1".into()));
    }
    Partition::all_of(n, d)
        .into_iter()
        .map(|lambda| {
            let f = BigRational::from_integer(dim_syt(&lambda).into());
            let s = schur_ssyt_exact(&lambda, alpha)?;
            Ok((lambda, f * s))
        })
        .collect()
}

/// Cumulative letter distribution used to draw i.i.d. letters.
#[derive(Debug, Clone)]
pub struct LetterSampler {
    cumulative: Vec<f64>,
}

impl LetterSampler {
    pub fn new(alpha: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = alpha
            .iter()
            .map(|&a| {
                acc += a;
                acc
            })
            .collect();
        Self { cumulative }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let total = *self.cumulative.last().expect("nonempty alphabet");
        let u = rng.random::<f64>() * total;
        let i = self.cumulative.partition_point(|&c| c <= u);
        // Skip zero-probability letters that a rounding-edge u could land on.
        let mut i = i.min(self.cumulative.len() - 1);
        while i > 0 && self.cumulative[i] == self.cumulative[i - 1] {
            i -= 1;
        }
        i as u32 + 1
    }
}

pub fn sample_word<R: Rng + ?Sized>(n: usize, alpha: &[f64], rng: &mut R) -> Word {
    let s = LetterSampler::new(alpha);
    Word::new((0..n).map(|_| s.sample(rng)).collect()).expect("letters are ≥ 1")
}

/// Row insertion on an insertion tableau stored as letter counts per row,
/// which is all the shape needs.
#[derive(Debug, Clone)]
pub struct ShapeInserter {
    d: usize,
    counts: Vec<Vec<u32>>,
    shape: Vec<usize>,
}

impl ShapeInserter {
    pub fn new(d: usize) -> Self {
        Self { d, counts: Vec::new(), shape: Vec::new() }
    }

    /// Inserts letter `x` (1-based) and returns the row that grew.
    pub fn insert(&mut self, x: u32) -> usize {
        let mut x = x as usize - 1;
        let mut r = 0;
        loop {
            if r == self.counts.len() {
                self.counts.push(vec![0; self.d]);
                self.shape.push(0);
            }
            let row = &mut self.counts[r];
            match (x + 1..self.d).find(|&y| row[y] > 0) {
                None => {
                    row[x] += 1;
                    self.shape[r] += 1;
                    return r;
                }
                Some(y) => {
                    row[y] -= 1;
                    row[x] += 1;
                    x = y;
                    r += 1;
                }
            }
        }
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.shape.clone()).expect("RSK shapes are partitions")
    }
}

/// Draws `λ ~ SW^n(α)` by inserting an i.i.d. word.
pub fn sw_sample<R: Rng + ?Sized>(n: usize, alpha: &ProbVec, rng: &mut R) -> Partition {
    let letters = LetterSampler::new(alpha.entries());
    let mut ins = ShapeInserter::new(alpha.dim());
    for _ in 0..n {
        ins.insert(letters.sample(rng));
    }
    ins.shape()
}

/// The growth process `∅ = λ^(0) ↗ λ^(1) ↗ … ↗ λ^(n)`.
pub fn growth_sample<R: Rng + ?Sized>(n: usize, alpha: &ProbVec, rng: &mut R) -> Vec<Partition> {
    let letters = LetterSampler::new(alpha.entries());
    let mut ins = ShapeInserter::new(alpha.dim());
    let mut chain = Vec::with_capacity(n + 1);
    chain.push(Partition::empty());
    for _ in 0..n {
        ins.insert(letters.sample(rng));
        chain.push(ins.shape());
    }
    chain
}

/// `p_i = s_{λ+e_i}(α) / s_λ(α)`, zero where `λ + e_i` is not a partition.
pub fn transition_probs(lambda: &Partition, alpha: &ProbVec) -> Result<Vec<f64>> {
    let d = alpha.dim();
    if lambda.len() > d {
        return Err(Error::OutOfRange(format!("partition {lambda} has more than {d} rows")));
    }
    let base = schur(lambda, alpha.entries());
    if base <= 0.0 {
        return Err(Error::Numerical(format!("s_{lambda}(α) vanishes")));
    }
    Ok((0..d)
        .map(|i| lambda.add_box(i).map_or(0.0, |l| schur(&l, alpha.entries()) / base))
        .collect())
}

/// Uniformly random standard tableau of shape `λ`, built by repeatedly
/// placing the largest label at a corner chosen with probability
/// `f^{λ−c} / f^λ`.
pub fn sample_syt<R: Rng + ?Sized>(lambda: &Partition, rng: &mut R) -> StandardTableau {
    let n = lambda.size();
    let mut rows_of_label = vec![0usize; n];
    let mut shape = lambda.clone();
    for label in (0..n).rev() {
        let corners = shape.corners();
        let weights: Vec<f64> = corners
            .iter()
            .map(|&c| big_to_f64(&dim_syt(&shape.remove_box(c).expect("corner"))))
            .collect();
        let c = corners[pick(&weights, rng)];
        rows_of_label[label] = c;
        shape = shape.remove_box(c).expect("corner");
    }
    StandardTableau::from_row_sequence(&rows_of_label).expect("corner removal yields an SYT")
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Random semistandard tableau of shape `λ` over `[d]` with probability
/// proportional to `α^{content}`, sampled by peeling the horizontal strip of
/// the largest letter.
pub fn sample_ssyt<R: Rng + ?Sized>(lambda: &Partition, alpha: &[f64], rng: &mut R) -> Result<SemistandardTableau> {
    let d = alpha.len();
    if lambda.len() > d {
        return Err(Error::OutOfRange(format!("partition {lambda} has more than {d} rows")));
    }
    let mut fill: Vec<Vec<u32>> = lambda.parts().iter().map(|&r| vec![0; r]).collect();
    let mut shape = lambda.clone();
    for j in (1..=d).rev() {
        if shape.is_empty() {
            break;
        }
        let strips = horizontal_strips(shape.parts(), j - 1);
        let size = shape.size();
        let weights: Vec<f64> = strips
            .iter()
            .map(|mu| {
                let mu = Partition::new(mu.clone()).expect("strip removal keeps a partition");
                alpha[j - 1].powi((size - mu.size()) as i32) * schur(&mu, &alpha[..j - 1])
            })
            .collect();
        if weights.iter().all(|&w| w <= 0.0) {
            return Err(Error::ZeroWeights);
        }
        let mu = &strips[pick(&weights, rng)];
        for (r, row) in fill.iter_mut().enumerate() {
            let lo = mu.get(r).copied().unwrap_or(0);
            let hi = shape.part(r);
            for cell in &mut row[lo..hi] {
                *cell = j as u32;
            }
        }
        shape = Partition::new(mu.clone()).expect("strip removal keeps a partition");
    }
    SemistandardTableau::new(fill)
}

/// Word drawn from `α^{⊗n}` conditioned on `shRSK(w) = λ`.
pub fn sample_word_given_shape<R: Rng + ?Sized>(lambda: &Partition, alpha: &[f64], rng: &mut R) -> Result<Word> {
    let p = sample_ssyt(lambda, alpha, rng)?;
    let q = sample_syt(lambda, rng);
    rsk_inverse(&p, &q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::tableau::{rsk, sh_rsk};
    use std::collections::HashMap;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn pmf_examples() {
        let pmf = sw_pmf(2, &pv(&[0.5, 0.5])).unwrap();
        assert!((pmf.prob(&p(&[2])) - 0.75).abs() < 1e-15);
        assert!((pmf.prob(&p(&[1, 1])) - 0.25).abs() < 1e-15);
        let pmf = sw_pmf(7, &pv(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(pmf.prob(&p(&[7])), 1.0);
        assert!(sw_pmf(21, &pv(&[0.5, 0.5])).is_err());
        assert!(sw_pmf(3, &pv(&[0.2; 5])).is_err());
    }

    #[test]
    fn pmf_matches_word_enumeration() {
        let alpha = [0.5, 0.3, 0.2];
        for n in 0..=6 {
            let mut exact: HashMap<Partition, f64> = HashMap::new();
            for w in Word::all(n, 3) {
                let pr: f64 = w.letters().iter().map(|&a| alpha[a as usize - 1]).product();
                *exact.entry(sh_rsk(&w)).or_insert(0.0) += pr;
            }
            let pmf = sw_pmf(n, &pv(&alpha)).unwrap();
            for (l, pr) in pmf.iter() {
                assert!((pr - exact.get(l).copied().unwrap_or(0.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_pmf_normalizes() {
        let alpha = [q(1, 2), q(1, 3), q(1, 6)];
        for n in 0..=8 {
            let pmf = sw_pmf_exact(n, &alpha).unwrap();
            let total: BigRational = pmf.iter().map(|(_, p)| p.clone()).sum();
            assert_eq!(total, q(1, 1));
        }
        assert!(sw_pmf_exact(2, &[q(1, 2), q(1, 3)]).is_err());
    }

    #[test]
    fn pmf_json_is_a_list() {
        let pmf = sw_pmf(2, &pv(&[0.5, 0.5])).unwrap();
        let json = serde_json::to_string(&pmf).unwrap();
        assert_eq!(
            json,
            r#"[{"partition":[2],"probability":0.75},{"partition":[1,1],"probability":0.25}]"#
        );
        assert_eq!(serde_json::from_str::<SwPmf>(&json).unwrap(), pmf);
    }

    #[test]
    fn shape_inserter_agrees_with_rsk() {
        for w in Word::all(7, 3) {
            let mut ins = ShapeInserter::new(3);
            for &x in w.letters() {
                ins.insert(x);
            }
            assert_eq!(ins.shape(), rsk(&w).0.shape());
        }
    }

    #[test]
    fn sampler_degenerate_cases() {
        let mut rng = stream(3, 0);
        for _ in 0..50 {
            assert_eq!(sw_sample(9, &pv(&[1.0, 0.0]), &mut rng), p(&[9]));
            assert!(sw_sample(12, &pv(&[0.5, 0.0, 0.5, 0.0]), &mut rng).len() <= 2);
        }
    }

    #[test]
    fn sampler_matches_pmf() {
        let alpha = pv(&[0.7, 0.3]);
        let pmf = sw_pmf(6, &alpha).unwrap();
        let draws = crate::rng::replicas(17, 100_000, |r| sw_sample(6, &alpha, r));
        let mut counts = HashMap::new();
        for l in draws {
            *counts.entry(l).or_insert(0u64) += 1;
        }
        assert!(pmf.tv_to_counts(&counts) < 0.02);
    }

    #[test]
    fn growth_chain_probability() {
        let alpha = [0.6, 0.4];
        for n in 1..=4 {
            let mut by_chain: HashMap<Vec<Partition>, f64> = HashMap::new();
            for w in Word::all(n, 2) {
                let chain: Vec<Partition> =
                    (0..=n).map(|t| sh_rsk(&w.substring(0, t))).collect();
                let pr: f64 = w.letters().iter().map(|&a| alpha[a as usize - 1]).product();
                *by_chain.entry(chain).or_insert(0.0) += pr;
            }
            for (chain, pr) in by_chain {
                let s = schur(chain.last().unwrap(), &alpha);
                assert!((pr - s).abs() < 1e-12);
                for pair in chain.windows(2) {
                    assert_eq!(pair[1].size(), pair[0].size() + 1);
                }
            }
        }
    }

    #[test]
    fn growth_prefix_is_schur_weyl() {
        let alpha = pv(&[0.6, 0.4]);
        let pmf = sw_pmf(3, &alpha).unwrap();
        let chains = crate::rng::replicas(4, 40_000, |r| growth_sample(6, &alpha, r));
        let mut counts = HashMap::new();
        for c in &chains {
            assert_eq!(c.len(), 7);
            *counts.entry(c[3].clone()).or_insert(0u64) += 1;
        }
        assert!(pmf.tv_to_counts(&counts) < 0.02);
    }

    #[test]
    fn transition_examples() {
        let alpha = pv(&[0.5, 0.3, 0.2]);
        let t = transition_probs(&Partition::empty(), &alpha).unwrap();
        assert_eq!(t, vec![1.0, 0.0, 0.0]);
        for lam in Partition::all_of(5, 3) {
            let t = transition_probs(&lam, &alpha).unwrap();
            assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(transition_probs(&p(&[1, 1]), &pv(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn transitions_majorize_alpha() {
        let mut rng = stream(21, 0);
        for _ in 0..20 {
            for d in 1..=3 {
                let alpha = crate::partition::SortedSpectrum::random(d, &mut rng);
                for n in 0..=8 {
                    for lam in Partition::all_of(n, d) {
                        let t = transition_probs(&lam, alpha.as_prob_vec()).unwrap();
                        assert!(crate::partition::majorizes(&t, alpha.entries()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn growth_conditional_frequencies() {
        let alpha = pv(&[0.5, 0.3, 0.2]);
        let reps = 60_000;
        let chains = crate::rng::replicas(8, reps, |r| growth_sample(6, &alpha, r));
        let mut trans: HashMap<Partition, Vec<u64>> = HashMap::new();
        for c in &chains {
            for pair in c.windows(2) {
                let row = (0..3).find(|&i| pair[0].add_box(i).as_ref() == Some(&pair[1])).unwrap();
                trans.entry(pair[0].clone()).or_insert_with(|| vec![0; 3])[row] += 1;
            }
        }
        for (lam, counts) in trans {
            let total: u64 = counts.iter().sum();
            if total < 500 {
                continue;
            }
            let probs = transition_probs(&lam, &alpha).unwrap();
            for i in 0..3 {
                let ph = counts[i] as f64 / total as f64;
                let se = (probs[i] * (1.0 - probs[i]) / total as f64).sqrt();
                assert!((ph - probs[i]).abs() <= 3.5 * se + 1e-12, "{lam} row {i}");
            }
        }
    }

    #[test]
    fn uniform_syt_sampler() {
        let lam = p(&[3, 2]);
        let mut counts: HashMap<StandardTableau, u64> = HashMap::new();
        let draws = crate::rng::replicas(2, 20_000, |r| sample_syt(&lam, r));
        for t in draws {
            *counts.entry(t).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 5);
        for &c in counts.values() {
            assert!((c as f64 - 4000.0).abs() < 4.0 * (4000.0f64 * 0.8).sqrt());
        }
    }

    #[test]
    fn conditional_word_sampler() {
        // Conditional law of the word given the shape, against enumeration.
        let alpha = [0.5, 0.3, 0.2];
        let lam = p(&[2, 1, 1]);
        let mut exact: HashMap<Word, f64> = HashMap::new();
        for w in Word::all(4, 3) {
            if sh_rsk(&w) == lam {
                let pr: f64 = w.letters().iter().map(|&a| alpha[a as usize - 1]).product();
                exact.insert(w, pr);
            }
        }
        let z: f64 = exact.values().sum();
        let reps = 60_000;
        let draws = crate::rng::replicas(9, reps, |r| sample_word_given_shape(&lam, &alpha, r).unwrap());
        let mut counts: HashMap<Word, u64> = HashMap::new();
        for w in draws {
            assert_eq!(sh_rsk(&w), lam);
            *counts.entry(w).or_insert(0) += 1;
        }
        let tv: f64 = exact
            .iter()
            .map(|(w, pr)| (pr / z - *counts.get(w).unwrap_or(&0) as f64 / reps as f64).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.03, "tv {tv}");
    }
}

//! Integer partitions, probability vectors, majorization and Muirhead chains.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for comparisons between real prefix sums.
pub const MAJORIZATION_TOL: f64 = 1e-9;

/// Tolerance on the total mass of a probability vector.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// A weakly decreasing sequence of positive integers (a Young diagram).
///
/// Trailing zeros are stripped on construction, so `(2,1,0)` and `(2,1)` are
/// the same partition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Nonzero parts, largest first.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (0-based), zero past the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parts padded with zeros to exactly `d` entries (truncating if longer).
    pub fn padded(&self, d: usize) -> Vec<usize> {
        (0..d).map(|i| self.part(i)).collect()
    }

    /// `λ + e_i` (0-based row), or `None` when the result is not a partition.
    pub fn add_box(&self, i: usize) -> Option<Partition> {
        if i > self.parts.len() {
            return None;
        }
        if i > 0 && self.part(i - 1) == self.part(i) {
            return None;
        }
        let mut parts = self.parts.clone();
        if i == parts.len() {
            parts.push(1);
        } else {
            parts[i] += 1;
        }
        Some(Self { parts })
    }

    /// `λ − e_i` (0-based row), or `None` when the result is not a partition.
    pub fn remove_box(&self, i: usize) -> Option<Partition> {
        if self.part(i) == 0 || self.part(i + 1) == self.part(i) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i] -= 1;
        Partition::new(parts).ok()
    }

    /// Rows whose last box is a removable corner.
    pub fn corners(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.part(i) > self.part(i + 1)).collect()
    }

    /// Componentwise sum of two partitions.
    pub fn plus(&self, other: &Partition) -> Partition {
        let len = self.len().max(other.len());
        let parts = (0..len).map(|i| self.part(i) + other.part(i)).collect();
        Self { parts }
    }

    /// Conjugate (transposed) partition.
    pub fn conjugate(&self) -> Partition {
        let parts = (0..self.part(0))
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect();
        Self { parts }
    }

    /// `λ^(m) = (λ_1 − λ_{m+1}, …, λ_m − λ_{m+1})`.
    pub fn upper_part(&self, m: usize) -> Partition {
        let base = self.part(m);
        Partition::new((0..m).map(|i| self.part(i) - base).collect()).expect("differences decrease")
    }

    /// The complement `λ_(m)` with `λ = λ^(m) + λ_(m)`: rows up to `m` equal
    /// `λ_{m+1}`, later rows are unchanged.
    pub fn lower_part(&self, m: usize) -> Partition {
        let base = self.part(m);
        let len = self.len().max(m);
        Partition::new((0..len).map(|i| if i < m { base } else { self.part(i) }).collect())
            .expect("rows decrease")
    }

    pub fn prefix_sums(&self, d: usize) -> Vec<usize> {
        let mut acc = 0;
        (0..d)
            .map(|i| {
                acc += self.part(i);
                acc
            })
            .collect()
    }

    /// All partitions of `n` with at most `max_len` parts, in lexicographically
    /// descending order.
    pub fn all_of(n: usize, max_len: usize) -> Vec<Partition> {
        fn rec(rem: usize, max_part: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            if slots == 0 {
                return;
            }
            for p in (1..=max_part.min(rem)).rev() {
                cur.push(p);
                rec(rem - p, p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, max_len, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Result of comparing two partitions of the same size in dominance order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    GreaterEq,
    LessEq,
    Equal,
    Incomparable,
}

/// Compares `lambda` and `mu` in dominance order using exact prefix sums.
pub fn dominance_order(lambda: &Partition, mu: &Partition) -> Result<Dominance> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch {
            left: lambda.size(),
            right: mu.size(),
        });
    }
    let d = lambda.len().max(mu.len());
    let (a, b) = (lambda.prefix_sums(d), mu.prefix_sums(d));
    let ge = a.iter().zip(&b).all(|(x, y)| x >= y);
    let le = a.iter().zip(&b).all(|(x, y)| x <= y);
    Ok(match (ge, le) {
        (true, true) => Dominance::Equal,
        (true, false) => Dominance::GreaterEq,
        (false, true) => Dominance::LessEq,
        (false, false) => Dominance::Incomparable,
    })
}

/// `true` iff `lambda ⊵ mu`.
pub fn dominates(lambda: &Partition, mu: &Partition) -> Result<bool> {
    Ok(matches!(
        dominance_order(lambda, mu)?,
        Dominance::GreaterEq | Dominance::Equal
    ))
}

fn sorted_desc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `true` iff `x` majorizes `y`: sorted prefix sums of `x` dominate those of
/// `y` and the totals agree, each comparison within [`MAJORIZATION_TOL`].
pub fn majorizes(x: &[f64], y: &[f64]) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let (xs, ys) = (sorted_desc(x), sorted_desc(y));
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        if sx < sy - MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok((sx - sy).abs() <= MAJORIZATION_TOL)
}

/// A probability vector on `[d]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVec {
    entries: Vec<f64>,
}

impl ProbVec {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty("probability vector"));
        }
        if let Some(bad) = entries.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbVec(format!("entry {bad} outside [0,1]")));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbVec(format!("entries sum to {total}")));
        }
        Ok(Self { entries })
    }

    /// Uniform distribution on `[d]`.
    pub fn uniform(d: usize) -> Self {
        Self {
            entries: vec![1.0 / d as f64; d],
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn sorted(&self) -> SortedSpectrum {
        SortedSpectrum(Self {
            entries: sorted_desc(&self.entries),
        })
    }

    /// Number of entries above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.entries.iter().filter(|&&p| p > tol).count()
    }
}

impl TryFrom<Vec<f64>> for ProbVec {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ProbVec::new(v)
    }
}

impl From<ProbVec> for Vec<f64> {
    fn from(p: ProbVec) -> Self {
        p.entries
    }
}

/// A probability vector whose entries are weakly decreasing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SortedSpectrum(ProbVec);

impl SortedSpectrum {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidProbVec("entries not sorted decreasingly".into()));
        }
        Ok(Self(ProbVec::new(entries)?))
    }

    pub fn uniform(d: usize) -> Self {
        Self(ProbVec::uniform(d))
    }

    /// A Dirichlet(1,…,1) draw, sorted.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..d).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = raw.iter().sum();
        let mut v: Vec<f64> = raw.iter().map(|x| x / total).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        // Push any rounding residue into the largest entry.
        let residue = 1.0 - v.iter().sum::<f64>();
        v[0] += residue;
        Self(ProbVec { entries: v })
    }

    pub fn entries(&self) -> &[f64] {
        self.0.entries()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_prob_vec(&self) -> &ProbVec {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for SortedSpectrum {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        SortedSpectrum::new(v)
    }
}

impl From<SortedSpectrum> for Vec<f64> {
    fn from(p: SortedSpectrum) -> Self {
        p.0.entries
    }
}

/// Builds `β = γ_0 ≻ γ_1 ≻ … ≻ γ_t = α` where consecutive vectors differ in at
/// most two coordinates.
///
/// Each step moves mass `δ = min(γ_i − α_i, α_k − γ_k)` from the first
/// coordinate `i` with `γ_i > α_i` to the first later coordinate `k` with
/// `γ_k < α_k`, so every step closes at least one discrepancy. Intermediate
/// vectors need not be sorted.
pub fn muirhead_chain(beta: &SortedSpectrum, alpha: &SortedSpectrum) -> Result<Vec<ProbVec>> {
    let (b, a) = (beta.entries(), alpha.entries());
    if !majorizes(b, a)? {
        return Err(Error::NotMajorized);
    }
    let d = a.len();
    let mut gamma = b.to_vec();
    let mut chain = vec![beta.as_prob_vec().clone()];
    let settled = |g: &[f64]| g.iter().zip(a).all(|(x, y)| (x - y).abs() <= MAJORIZATION_TOL);
    while !settled(&gamma) {
        let Some(i) = (0..d).find(|&i| gamma[i] > a[i] + MAJORIZATION_TOL) else {
            break;
        };
        let Some(k) = (i + 1..d).find(|&k| gamma[k] < a[k] - MAJORIZATION_TOL) else {
            break;
        };
        let give = gamma[i] - a[i];
        let take = a[k] - gamma[k];
        match give.partial_cmp(&take).unwrap_or(Ordering::Equal) {
            Ordering::Less => {
                gamma[i] = a[i];
                gamma[k] += give;
            }
            Ordering::Greater => {
                gamma[i] -= take;
                gamma[k] = a[k];
            }
            Ordering::Equal => {
                gamma[i] = a[i];
                gamma[k] = a[k];
            }
        }
        chain.push(ProbVec { entries: gamma.clone() });
        if chain.len() > d + 1 {
            return Err(Error::Numerical("Muirhead transfer did not terminate".into()));
        }
    }
    // Close out any sub-tolerance residue so the chain ends exactly at α.
    if chain.last().map(|g| g.entries()) != Some(a) {
        if chain.len() == 1 {
            chain.push(alpha.as_prob_vec().clone());
        } else {
            *chain.last_mut().expect("nonempty") = alpha.as_prob_vec().clone();
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_normalizes_trailing_zeros() {
        assert_eq!(p(&[2, 1, 0, 0]), p(&[2, 1]));
        assert_eq!(p(&[2, 1]).size(), 3);
        assert_eq!(p(&[2, 1, 0]).len(), 2);
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn add_box_respects_shape() {
        let l = p(&[2, 2]);
        assert_eq!(l.add_box(0), Some(p(&[3, 2])));
        assert_eq!(l.add_box(1), None);
        assert_eq!(l.add_box(2), Some(p(&[2, 2, 1])));
        assert_eq!(l.add_box(3), None);
        assert_eq!(Partition::empty().add_box(0), Some(p(&[1])));
    }

    #[test]
    fn enumeration_counts_and_order() {
        let all = Partition::all_of(5, 5);
        assert_eq!(all.len(), 7);
        assert_eq!(all[0], p(&[5]));
        assert_eq!(all[6], p(&[1, 1, 1, 1, 1]));
        assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
        assert_eq!(Partition::all_of(6, 2).len(), 4);
        assert_eq!(Partition::all_of(0, 3), vec![Partition::empty()]);
    }

    #[test]
    fn majorization_examples() {
        assert!(majorizes(&[0.5, 0.5, 0.0], &[0.4, 0.3, 0.3]).unwrap());
        let third = 1.0 / 3.0;
        assert!(majorizes(&[third; 3], &[third; 3]).unwrap());
        assert!(!majorizes(&[0.4, 0.35, 0.25], &[0.5, 0.3, 0.2]).unwrap());
        assert!(majorizes(&[0.5], &[0.4, 0.6]).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(dominance_order(&p(&[3, 1]), &p(&[2, 2])).unwrap(), Dominance::GreaterEq);
        assert_eq!(dominance_order(&p(&[2, 2]), &p(&[3, 1])).unwrap(), Dominance::LessEq);
        assert_eq!(
            dominance_order(&p(&[4, 1, 1]), &p(&[3, 3])).unwrap(),
            Dominance::Incomparable
        );
        assert_eq!(dominance_order(&p(&[2, 1]), &p(&[2, 1])).unwrap(), Dominance::Equal);
        assert!(dominance_order(&p(&[2, 1]), &p(&[2])).is_err());
    }

    fn check_chain(beta: &SortedSpectrum, alpha: &SortedSpectrum, chain: &[ProbVec]) {
        assert_eq!(chain.first().unwrap().entries(), beta.entries());
        assert_eq!(chain.last().unwrap().entries(), alpha.entries());
        assert!(chain.len() <= beta.dim() + 1);
        for w in chain.windows(2) {
            let (g, h) = (w[0].entries(), w[1].entries());
            assert!(majorizes(g, h).unwrap());
            let diff = g.iter().zip(h).filter(|(x, y)| x != y).count();
            assert!(diff <= 2, "{g:?} -> {h:?}");
        }
    }

    #[test]
    fn muirhead_examples() {
        let a = SortedSpectrum::new(vec![0.6, 0.4]).unwrap();
        assert_eq!(muirhead_chain(&a, &a).unwrap().len(), 1);

        let beta = SortedSpectrum::new(vec![1.0, 0.0]).unwrap();
        let chain = muirhead_chain(&beta, &a).unwrap();
        assert_eq!(chain.len(), 2);
        check_chain(&beta, &a, &chain);

        let beta = SortedSpectrum::new(vec![0.5, 0.3, 0.2]).unwrap();
        let alpha = SortedSpectrum::new(vec![0.4, 0.35, 0.25]).unwrap();
        let chain = muirhead_chain(&beta, &alpha).unwrap();
        check_chain(&beta, &alpha, &chain);
        assert!(muirhead_chain(&alpha, &beta).is_err());
    }

    #[test]
    fn upper_and_lower_parts_recombine() {
        for n in 0..=10 {
            for lam in Partition::all_of(n, 5) {
                for m in 1..=6 {
                    let (up, low) = (lam.upper_part(m), lam.lower_part(m));
                    assert!(up.len() <= m);
                    assert_eq!(up.plus(&low), lam, "{lam} m={m}");
                }
            }
        }
        let lam = Partition::new(vec![5, 3, 2, 1]).unwrap();
        assert_eq!(lam.upper_part(2).parts(), &[3, 1]);
        assert_eq!(lam.lower_part(2).parts(), &[2, 2, 2, 1]);
    }

    #[test]
    fn muirhead_random_majorizing_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        while found < 300 {
            let d = rng.random_range(2..=5);
            let x = SortedSpectrum::random(d, &mut rng);
            let y = SortedSpectrum::random(d, &mut rng);
            if !majorizes(x.entries(), y.entries()).unwrap() {
                continue;
            }
            found += 1;
            let chain = muirhead_chain(&x, &y).unwrap();
            check_chain(&x, &y, &chain);
        }
    }

    fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
        let all = Partition::all_of(n, n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    }

    proptest! {
        #[test]
        fn sorted_weights_respect_majorization(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 4;
            let c = SortedSpectrum::random(d, &mut rng);
            let x = SortedSpectrum::random(d, &mut rng);
            let y = SortedSpectrum::random(d, &mut rng);
            let (x, y) = if majorizes(x.entries(), y.entries()).unwrap() { (x, y) } else { (y, x) };
            prop_assume!(majorizes(x.entries(), y.entries()).unwrap());
            let dot = |u: &[f64]| c.entries().iter().zip(u).map(|(a, b)| a * b).sum::<f64>();
            prop_assert!(dot(x.entries()) >= dot(y.entries()) - 1e-12);
        }

        #[test]
        fn dominance_is_a_partial_order(a in arb_partition(8), b in arb_partition(8), c in arb_partition(8)) {
            prop_assert!(dominates(&a, &a).unwrap());
            if dominates(&a, &b).unwrap() && dominates(&b, &a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if dominates(&a, &b).unwrap() && dominates(&b, &c).unwrap() {
                prop_assert!(dominates(&a, &c).unwrap());
            }
        }
    }
}

//! Dominance-preserving couplings: uniform two-row tableaux, symmetric
//! Hamming classes, biased binary strings, and Schur–Weyl shapes under
//! majorization.
//!
//! Each coupling comes in a forward form, a Markov kernel that maps a sample
//! of the first marginal to a sample of the second, so couplings can be
//! chained.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dyck::{dyck_f, dyck_to_tableau, sample_syt_leq, tableau_to_dyck, Step};
use crate::error::{Error, Result};
use crate::partition::{dominates, muirhead_chain, Partition, SortedSpectrum};
use crate::schur_weyl::{sample_word, sample_word_given_shape};
use crate::tableau::{
    rsk, rsk_inverse, sh_rsk, substring_lis_dominates, tableau_dominates, SemistandardTableau, StandardTableau, Word,
};

/// Slack allowed when comparing extremeness `|q − ½| ≥ |p − ½|`.
pub const EXTREMENESS_TOL: f64 = 1e-12;

fn second_row(q: &StandardTableau) -> Result<usize> {
    match q.rows().len() {
        0 | 1 => Ok(0),
        2 => Ok(q.rows()[1].len()),
        r => Err(Error::InvalidTableau(format!("{r} rows, at most 2 allowed"))),
    }
}

/// One step of the tableau coupling, from `SYT_n(≤ level)` to
/// `SYT_n(≤ level − 1)`: tableaux with exactly `level` boxes in the second
/// row are pushed through the raising bijection at a uniform downstep, the
/// rest are left alone.
fn syt_step<R: Rng + ?Sized>(q: &StandardTableau, level: usize, rng: &mut R) -> Result<StandardTableau> {
    if second_row(q)? != level {
        return Ok(q.clone());
    }
    let w = tableau_to_dyck(q)?;
    let downs: Vec<usize> = (0..w.len()).filter(|&i| w.steps()[i] == Step::Down).collect();
    let s1 = downs[rng.random_range(0..downs.len())];
    Ok(dyck_to_tableau(&dyck_f(&w, s1)?.0))
}

fn check_syt_levels(q: &StandardTableau, from: usize, to: usize) -> Result<()> {
    let n = q.size();
    if to > from || from > n / 2 {
        return Err(Error::Precondition(format!("need to ≤ from ≤ ⌊n/2⌋, got to={to} from={from} n={n}")));
    }
    if second_row(q)? > from {
        return Err(Error::Precondition(format!("{q:?} has more than {from} boxes in its second row")));
    }
    Ok(())
}

/// Forward kernel of the tableau coupling: maps a uniform draw from
/// `SYT_n(≤ from)` to a uniform draw from `SYT_n(≤ to)` that
/// substring-LIS-dominates it.
pub fn couple_syt_forward<R: Rng + ?Sized>(
    q: &StandardTableau,
    from: usize,
    to: usize,
    rng: &mut R,
) -> Result<StandardTableau> {
    check_syt_levels(q, from, to)?;
    let mut cur = q.clone();
    for level in (to + 1..=from).rev() {
        cur = syt_step(&cur, level, rng)?;
    }
    Ok(cur)
}

/// Exact law of [`couple_syt_forward`] started at `q`.
pub fn couple_syt_kernel(q: &StandardTableau, from: usize, to: usize) -> Result<HashMap<StandardTableau, f64>> {
    check_syt_levels(q, from, to)?;
    let mut dist: HashMap<StandardTableau, f64> = HashMap::from([(q.clone(), 1.0)]);
    for level in (to + 1..=from).rev() {
        let mut next: HashMap<StandardTableau, f64> = HashMap::new();
        for (t, pr) in dist {
            if second_row(&t)? != level {
                *next.entry(t).or_insert(0.0) += pr;
                continue;
            }
            let w = tableau_to_dyck(&t)?;
            let downs: Vec<usize> = (0..w.len()).filter(|&i| w.steps()[i] == Step::Down).collect();
            for &s1 in &downs {
                let img = dyck_to_tableau(&dyck_f(&w, s1)?.0);
                *next.entry(img).or_insert(0.0) += pr / downs.len() as f64;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// `(Q, Q')` with `Q` uniform on `SYT_n(≤ from)`, `Q'` uniform on
/// `SYT_n(≤ to)` and `Q' ▷≫ Q`.
pub fn couple_syt<R: Rng + ?Sized>(
    n: usize,
    from: usize,
    to: usize,
    rng: &mut R,
) -> Result<(StandardTableau, StandardTableau)> {
    if to > from {
        return Err(Error::Precondition(format!("to={to} exceeds from={from}")));
    }
    let q = sample_syt_leq(n, from, rng)?;
    let qp = couple_syt_forward(&q, from, to, rng)?;
    Ok((q, qp))
}

fn twos(w: &Word) -> usize {
    w.letters().iter().filter(|&&a| a == 2).count()
}

fn check_binary(w: &Word) -> Result<()> {
    if w.letters().iter().any(|&a| a > 2) {
        return Err(Error::InvalidWord("expected letters in {1, 2}".into()));
    }
    Ok(())
}

/// The unique insertion tableau of shape `shape` with `c` twos.
fn binary_insertion_tableau(shape: &Partition, c: usize) -> Result<SemistandardTableau> {
    let (l1, l2) = (shape.part(0), shape.part(1));
    let n = l1 + l2;
    if c < l2 || c > n - l2 {
        return Err(Error::Precondition(format!("no insertion tableau of shape {shape} with {c} twos")));
    }
    let rows = [[vec![1; l1 - (c - l2)], vec![2; c - l2]].concat(), vec![2; l2]];
    SemistandardTableau::new(rows.into_iter().filter(|r| !r.is_empty()).collect())
}

fn symham_class(w: &Word) -> usize {
    let h = twos(w);
    h.min(w.len() - h)
}

/// Words over `{1, 2}` with recording tableau `q` and `k` or `n − k` twos,
/// paired with their probabilities when the class with `k` twos is chosen
/// with probability `low`.
fn words_for_recording(q: &StandardTableau, k: usize, low: f64) -> Result<Vec<(Word, f64)>> {
    let n = q.size();
    let mut cs = vec![(k, if n - k == k { 1.0 } else { low })];
    if n - k != k {
        cs.push((n - k, 1.0 - low));
    }
    cs.into_iter()
        .filter(|&(_, pr)| pr > 0.0)
        .map(|(c, pr)| Ok((rsk_inverse(&binary_insertion_tableau(&q.shape(), c)?, q)?, pr)))
        .collect()
}

/// Probability that an `r`-biased string in `SymHam(n, k)` has exactly `k`
/// twos.
fn low_class_prob(r: f64, n: usize, k: usize) -> f64 {
    if 2 * k == n {
        return 1.0;
    }
    // Ratio of the two class weights, r^{n−k}(1−r)^k over r^k(1−r)^{n−k}.
    let e = (n - 2 * k) as i32;
    if r == 0.0 {
        return 0.0;
    }
    if r == 1.0 {
        return 1.0;
    }
    let ratio = (r / (1.0 - r)).powi(e);
    if ratio.is_infinite() { 1.0 } else { ratio / (1.0 + ratio) }
}

fn pick_word<R: Rng + ?Sized>(mut options: Vec<(Word, f64)>, rng: &mut R) -> Word {
    let weights: Vec<f64> = options.iter().map(|(_, p)| *p).collect();
    let i = crate::rng::pick(&weights, rng);
    options.swap_remove(i).0
}

/// Shared forward step: recouple the recording tableau from level `k` to
/// `k_prime`, then choose the Hamming class of the output with probability
/// `low` for `k_prime` twos.
fn symham_step<R: Rng + ?Sized>(w: &Word, k: usize, k_prime: usize, low: f64, rng: &mut R) -> Result<Word> {
    let (_, q) = rsk(w);
    let qp = couple_syt_forward(&q, k, k_prime, rng)?;
    Ok(pick_word(words_for_recording(&qp, k_prime, low)?, rng))
}

fn check_symham(w: &Word, k: usize, k_prime: usize) -> Result<()> {
    check_binary(w)?;
    let n = w.len();
    if k_prime > k || k > n / 2 {
        return Err(Error::Precondition(format!("need k' ≤ k ≤ ⌊n/2⌋, got k'={k_prime} k={k} n={n}")));
    }
    if symham_class(w) != k {
        return Err(Error::Precondition(format!("word has {} twos, not in {{{k}, {}}}", twos(w), n - k)));
    }
    Ok(())
}

/// Forward kernel of the symmetric-Hamming coupling: a uniform draw from
/// `SymHam(n, k)` is mapped to a uniform draw from `SymHam(n, k')` that
/// substring-LIS-dominates it.
pub fn couple_symham_forward<R: Rng + ?Sized>(w: &Word, k: usize, k_prime: usize, rng: &mut R) -> Result<Word> {
    check_symham(w, k, k_prime)?;
    if k == k_prime {
        return Ok(w.clone());
    }
    symham_step(w, k, k_prime, 0.5, rng)
}

/// `(w, w')` with `w` uniform on `SymHam(n, k)`, `w'` uniform on
/// `SymHam(n, k')` and `w' ▷≫ w`.
pub fn couple_symham<R: Rng + ?Sized>(n: usize, k: usize, k_prime: usize, rng: &mut R) -> Result<(Word, Word)> {
    if k_prime > k || k > n / 2 {
        return Err(Error::Precondition(format!("need k' ≤ k ≤ ⌊n/2⌋, got k'={k_prime} k={k} n={n}")));
    }
    let c = if rng.random::<bool>() { k } else { n - k };
    let mut letters = [vec![1u32; n - c], vec![2u32; c]].concat();
    letters.shuffle(rng);
    let w = Word::new(letters)?;
    let wp = couple_symham_forward(&w, k, k_prime, rng)?;
    Ok((w, wp))
}

/// `L_r(ℓ) = Pr[min(h, n − h) ≤ ℓ]` for `ℓ = 0..=⌊n/2⌋`, where `h` counts the
/// twos of an `r`-biased string (each letter is 1 with probability `r`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasedStringCdf {
    pub r: f64,
    pub n: usize,
    pub values: Vec<f64>,
}

impl BiasedStringCdf {
    /// Least `ℓ` with `L_r(ℓ) ≥ θ`.
    pub fn quantile(&self, theta: f64) -> usize {
        self.values.partition_point(|&v| v < theta).min(self.values.len() - 1)
    }

    /// `L_r(ℓ − 1)`, zero at `ℓ = 0`.
    fn below(&self, l: usize) -> f64 {
        if l == 0 { 0.0 } else { self.values[l - 1] }
    }
}

fn binomial_pmf(n: usize, r: f64) -> Vec<f64> {
    // Computed in log space so extreme biases do not underflow prematurely.
    let lg: Vec<f64> = (0..=n).scan(0.0, |acc, i| {
        if i > 0 {
            *acc += (i as f64).ln();
        }
        Some(*acc)
    }).collect();
    (0..=n)
        .map(|h| {
            let ones = (n - h) as f64;
            let t = h as f64;
            let term = |x: f64, e: f64| if e == 0.0 { 0.0 } else { e * x.ln() };
            (lg[n] - lg[h] - lg[n - h] + term(r, ones) + term(1.0 - r, t)).exp()
        })
        .collect()
}

pub fn biased_cdf(r: f64, n: usize) -> Result<BiasedStringCdf> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange(format!("bias {r} outside [0, 1]")));
    }
    let pmf = binomial_pmf(n, r);
    let half = n / 2;
    let mut values = Vec::with_capacity(half + 1);
    let mut acc = 0.0;
    for l in 0..=half {
        acc += pmf[l];
        if n - l != l {
            acc += pmf[n - l];
        }
        values.push(acc.min(1.0));
    }
    if let Some(last) = values.last_mut() {
        *last = 1.0;
    }
    Ok(BiasedStringCdf { r, n, values })
}

/// Exact `L_r(ℓ)` from binomial sums.
pub fn biased_cdf_exact(r: &BigRational, n: usize) -> Result<Vec<BigRational>> {
    if r < &BigRational::zero() || r > &BigRational::one() {
        return Err(Error::OutOfRange(format!("bias {r} outside [0, 1]")));
    }
    let s = BigRational::one() - r;
    let mut binom = vec![BigInt::one()];
    for i in 0..n {
        let next = binom[i].clone() * BigInt::from(n - i) / BigInt::from(i + 1);
        binom.push(next);
    }
    let pow = |x: &BigRational, e: usize| num_traits::pow(x.clone(), e);
    let pmf: Vec<BigRational> = (0..=n)
        .map(|h| BigRational::from_integer(binom[h].clone()) * pow(r, n - h) * pow(&s, h))
        .collect();
    let mut out = Vec::with_capacity(n / 2 + 1);
    let mut acc = BigRational::zero();
    for l in 0..=n / 2 {
        acc += &pmf[l];
        if n - l != l {
            acc += &pmf[n - l];
        }
        out.push(acc.clone());
    }
    Ok(out)
}

/// `L_q(ℓ) ≥ L_p(ℓ)` for every `ℓ`, decided exactly.
pub fn cdf_claim_holds(p: &BigRational, q: &BigRational, n: usize) -> Result<bool> {
    let (lp, lq) = (biased_cdf_exact(p, n)?, biased_cdf_exact(q, n)?);
    Ok(lq.iter().zip(&lp).all(|(a, b)| a >= b))
}

fn check_extremeness(p: f64, q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange(format!("biases p={p}, q={q} outside [0, 1]")));
    }
    if (q - 0.5).abs() + EXTREMENESS_TOL < (p - 0.5).abs() {
        return Err(Error::Precondition(format!("q={q} is less extreme than p={p}")));
    }
    Ok(())
}

/// Forward kernel of the biased-string coupling: maps a `p`-biased string to
/// a `q`-biased string that substring-LIS-dominates it.
pub fn couple_biased_forward<R: Rng + ?Sized>(w: &Word, p: f64, q: f64, rng: &mut R) -> Result<Word> {
    check_extremeness(p, q)?;
    check_binary(w)?;
    let n = w.len();
    let (lp, lq) = (biased_cdf(p, n)?, biased_cdf(q, n)?);
    let k = symham_class(w);
    let (lo, hi) = (lp.below(k), lp.values[k]);
    let theta = lo + (hi - lo) * (1.0 - rng.random::<f64>());
    let k_prime = lq.quantile(theta).min(k);
    if p == q && k_prime == k {
        return Ok(w.clone());
    }
    check_symham(w, k, k_prime)?;
    symham_step(w, k, k_prime, low_class_prob(q, n, k_prime), rng)
}

/// Exact law of [`couple_biased_forward`] started at `w`.
pub fn couple_biased_kernel(w: &Word, p: f64, q: f64) -> Result<HashMap<Word, f64>> {
    check_extremeness(p, q)?;
    check_binary(w)?;
    let n = w.len();
    let (lp, lq) = (biased_cdf(p, n)?, biased_cdf(q, n)?);
    let k = symham_class(w);
    let (lo, hi) = (lp.below(k), lp.values[k]);
    let mut out: HashMap<Word, f64> = HashMap::new();
    if hi <= lo {
        return Ok(out);
    }
    let (_, qt) = rsk(w);
    for kp in 0..=k {
        let overlap = (hi.min(lq.values[kp]) - lo.max(lq.below(kp))).max(0.0) / (hi - lo);
        if overlap == 0.0 {
            continue;
        }
        if p == q && kp == k {
            *out.entry(w.clone()).or_insert(0.0) += overlap;
            continue;
        }
        let low = low_class_prob(q, n, kp);
        for (qp, pr) in couple_syt_kernel(&qt, k, kp)? {
            for (x, share) in words_for_recording(&qp, kp, low)? {
                *out.entry(x).or_insert(0.0) += overlap * pr * share;
            }
        }
    }
    Ok(out)
}

/// Pushes the exact `p`-biased law on `{1, 2}^n` through
/// [`couple_biased_kernel`]. Returns the largest pointwise deviation from the
/// `q`-biased law and whether every pair in the coupling's support is ordered
/// by substring-LIS-dominance.
pub fn biased_kernel_check(p: f64, q: f64, n: usize) -> Result<(f64, bool)> {
    let weight = |w: &Word, r: f64| {
        let h = twos(w) as i32;
        r.powi(n as i32 - h) * (1.0 - r).powi(h)
    };
    let mut push: HashMap<Word, f64> = HashMap::new();
    let mut ordered = true;
    for w in Word::all(n, 2) {
        let pw = weight(&w, p);
        for (x, pr) in couple_biased_kernel(&w, p, q)? {
            if pr > 0.0 && pw > 0.0 {
                ordered &= if n <= crate::tableau::SUBSTRING_CHECK_MAX_LEN {
                    substring_lis_dominates(&x, &w)?
                } else {
                    tableau_dominates(&rsk(&x).1, &rsk(&w).1)?
                };
            }
            *push.entry(x).or_insert(0.0) += pw * pr;
        }
    }
    let err = Word::all(n, 2)
        .iter()
        .map(|x| (push.get(x).copied().unwrap_or(0.0) - weight(x, q)).abs())
        .fold(0.0, f64::max);
    Ok((err, ordered))
}

/// The word over `{1, 2}` with recording tableau `q` and `twos` twos.
pub fn binary_word(q: &StandardTableau, twos: usize) -> Result<Word> {
    rsk_inverse(&binary_insertion_tableau(&q.shape(), twos)?, q)
}

/// `(w, x)` with `w` `p`-biased, `x` `q`-biased and `x ▷≫ w`, for
/// `|q − ½| ≥ |p − ½|`.
pub fn couple_biased<R: Rng + ?Sized>(p: f64, q: f64, n: usize, rng: &mut R) -> Result<(Word, Word)> {
    check_extremeness(p, q)?;
    let w = sample_word(n, &[p, 1.0 - p], rng);
    let x = couple_biased_forward(&w, p, q, rng)?;
    Ok((w, x))
}

/// Forward step of the shape coupling between spectra `from` and `to` that
/// differ in the coordinates `a` (gaining mass) and `b`. `word` is over the
/// relabelled alphabet in which `a ↦ 1`, `b ↦ 2`.
fn merge_step<R: Rng + ?Sized>(word: &Word, p: f64, q: f64, rng: &mut R) -> Result<Word> {
    let w = Word::new(word.letters().iter().copied().filter(|&x| x <= 2).collect())?;
    let x = couple_biased_forward(&w, p, q, rng)?;
    let mut fill = x.letters().iter();
    let letters = word
        .letters()
        .iter()
        .map(|&c| if c <= 2 { *fill.next().expect("same count") } else { c })
        .collect();
    Word::new(letters)
}

/// Relabelling that sends coordinate `a` to letter 1, `b` to letter 2 and the
/// remaining coordinates, in order, to `3..=d`.
fn relabel(d: usize, a: usize, b: usize) -> Vec<usize> {
    let mut order = vec![a, b];
    order.extend((0..d).filter(|&i| i != a && i != b));
    order
}

/// `(λ, μ)` with `λ ~ SW^n(α)`, `μ ~ SW^n(β)` and `μ ⊵ λ`, for `β ≻ α`.
///
/// Walks a chain `α = γ_t ≺ … ≺ γ_0 = β` of two-coordinate transfers. At each
/// step a word with the current shape is redrawn under the relabelled
/// spectrum, its letters 1 and 2 are re-coupled, and the merged word gives
/// the next shape.
pub fn couple_sw<R: Rng + ?Sized>(
    alpha: &SortedSpectrum,
    beta: &SortedSpectrum,
    n: usize,
    rng: &mut R,
) -> Result<(Partition, Partition)> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch {
            left: alpha.dim(),
            right: beta.dim(),
        });
    }
    let d = alpha.dim();
    let chain = muirhead_chain(beta, alpha)?;
    let mut shape: Option<Partition> = None;
    let mut lambda: Option<Partition> = None;
    for pair in chain.windows(2).rev() {
        let (to, from) = (pair[0].entries(), pair[1].entries());
        let moved: Vec<usize> = (0..d).filter(|&i| to[i] != from[i]).collect();
        if moved.is_empty() {
            continue;
        }
        if moved.len() != 2 {
            return Err(Error::Numerical(format!("chain step changes {} coordinates", moved.len())));
        }
        let (a, b) = if to[moved[0]] >= to[moved[1]] { (moved[0], moved[1]) } else { (moved[1], moved[0]) };
        let order = relabel(d, a, b);
        let perm_from: Vec<f64> = order.iter().map(|&i| from[i]).collect();
        let word = match &shape {
            None => sample_word(n, &perm_from, rng),
            Some(s) => sample_word_given_shape(s, &perm_from, rng)?,
        };
        let start = sh_rsk(&word);
        if lambda.is_none() {
            lambda = Some(start.clone());
        }
        let total = from[a] + from[b];
        let merged = merge_step(&word, from[a] / total, to[a] / total, rng)?;
        let next = sh_rsk(&merged);
        if !dominates(&next, &start)? {
            return Err(Error::Numerical(format!("coupled shapes {next} and {start} are out of order")));
        }
        shape = Some(next);
    }
    match (lambda, shape) {
        (Some(l), Some(m)) => Ok((l, m)),
        _ => {
            let l = sh_rsk(&sample_word(n, alpha.entries(), rng));
            Ok((l.clone(), l))
        }
    }
}

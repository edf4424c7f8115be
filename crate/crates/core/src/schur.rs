//! Schur polynomials: monomial expansion via semistandard tableaux, the
//! bialternant formula, hook-length and Weyl dimensions.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partition::{Partition, ProbVec};

/// Largest `|λ|` accepted by the tableau-enumeration evaluator.
pub const SSYT_MAX_SIZE: usize = 30;

/// Above this many monomials the expansion is not cached and evaluation
/// falls back to the branching recursion.
const EXPANSION_MAX_TERMS: usize = 200_000;

/// Relative gap below which two coordinates count as repeated.
const DISTINCT_TOL: f64 = 1e-8;

/// Monomial expansion of `s_λ(x_1, …, x_d)`: pairs of content vector and the
/// number of semistandard tableaux with that content.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurExpansion {
    pub d: usize,
    pub terms: Vec<(Vec<u16>, u128)>,
}

impl SchurExpansion {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, k)| *k as f64 * c.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product::<f64>())
            .sum()
    }

    pub fn eval_exact(&self, x: &[BigRational]) -> BigRational {
        let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(self.d);
        let max_exp = self.terms.iter().flat_map(|(c, _)| c.iter().copied()).max().unwrap_or(0);
        for xi in x.iter().take(self.d) {
            let mut row = vec![BigRational::one()];
            for e in 1..=max_exp as usize {
                let next = &row[e - 1] * xi;
                row.push(next);
            }
            powers.push(row);
        }
        let mut total = BigRational::zero();
        for (c, k) in &self.terms {
            let mut term = BigRational::from_integer((*k).into());
            for (i, &e) in c.iter().enumerate() {
                term *= &powers[i][e as usize];
            }
            total += term;
        }
        total
    }

    /// Number of semistandard tableaux, `s_λ(1, …, 1)`.
    pub fn count(&self) -> u128 {
        self.terms.iter().map(|(_, k)| k).sum()
    }
}

type ExpansionCache = RwLock<HashMap<(Vec<usize>, usize), Arc<SchurExpansion>>>;

fn cache() -> &'static ExpansionCache {
    static CACHE: OnceLock<ExpansionCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Every `μ ⊆ λ` with `λ/μ` a horizontal strip and at most `max_len` rows.
pub(crate) fn horizontal_strips(lambda: &[usize], max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(lambda.len());
    fn rec(lambda: &[usize], max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == lambda.len() {
            let mut mu = cur.clone();
            while mu.last() == Some(&0) {
                mu.pop();
            }
            out.push(mu);
            return;
        }
        let lo = lambda.get(i + 1).copied().unwrap_or(0);
        let hi = if i >= max_len { 0 } else { lambda[i] };
        for m in lo..=hi {
            cur.push(m);
            rec(lambda, max_len, cur, out);
            cur.pop();
        }
    }
    rec(lambda, max_len, &mut cur, &mut out);
    out
}

fn build_expansion(lambda: &[usize], d: usize) -> Option<Arc<SchurExpansion>> {
    if let Some(e) = cache().read().expect("cache lock").get(&(lambda.to_vec(), d)) {
        return Some(e.clone());
    }
    let terms = if lambda.len() > d {
        Vec::new()
    } else if d == 0 {
        vec![(Vec::new(), 1)]
    } else {
        let size: usize = lambda.iter().sum();
        let mut acc: HashMap<Vec<u16>, u128> = HashMap::new();
        for mu in horizontal_strips(lambda, d - 1) {
            let strip = (size - mu.iter().sum::<usize>()) as u16;
            let sub = build_expansion(&mu, d - 1)?;
            for (c, k) in &sub.terms {
                let mut c = c.clone();
                c.push(strip);
                *acc.entry(c).or_insert(0) += k;
            }
            if acc.len() > EXPANSION_MAX_TERMS {
                return None;
            }
        }
        let mut terms: Vec<_> = acc.into_iter().collect();
        terms.sort_unstable();
        terms
    };
    let e = Arc::new(SchurExpansion { d, terms });
    cache()
        .write()
        .expect("cache lock")
        .insert((lambda.to_vec(), d), e.clone());
    Some(e)
}

/// Cached monomial expansion of `s_λ` in `d` variables.
pub fn schur_expansion(lambda: &Partition, d: usize) -> Result<Arc<SchurExpansion>> {
    if lambda.size() > SSYT_MAX_SIZE {
        return Err(Error::TooLarge {
            what: "|λ| for tableau enumeration",
            value: lambda.size(),
            limit: SSYT_MAX_SIZE,
        });
    }
    build_expansion(lambda.parts(), d).ok_or(Error::TooLarge {
        what: "monomial count",
        value: EXPANSION_MAX_TERMS + 1,
        limit: EXPANSION_MAX_TERMS,
    })
}

/// `s_λ(x) = Σ_T x^T` over semistandard tableaux of shape `λ` in `[d]`.
pub fn schur_ssyt(lambda: &Partition, x: &[f64]) -> Result<f64> {
    Ok(schur_expansion(lambda, x.len())?.eval(x))
}

pub fn schur_ssyt_exact(lambda: &Partition, x: &[BigRational]) -> Result<BigRational> {
    Ok(schur_expansion(lambda, x.len())?.eval_exact(x))
}

/// Evaluates `s_λ(x)` by peeling off horizontal strips one variable at a time,
/// memoizing intermediate shapes. No size limit.
pub fn schur_branching(lambda: &Partition, x: &[f64]) -> f64 {
    fn rec(lambda: &[usize], x: &[f64], memo: &mut HashMap<(Vec<usize>, usize), f64>) -> f64 {
        let j = x.len();
        if lambda.len() > j {
            return 0.0;
        }
        if lambda.is_empty() {
            return 1.0;
        }
        if let Some(&v) = memo.get(&(lambda.to_vec(), j)) {
            return v;
        }
        let size: usize = lambda.iter().sum();
        let xj = x[j - 1];
        let v = horizontal_strips(lambda, j - 1)
            .into_iter()
            .map(|mu| {
                let strip = size - mu.iter().sum::<usize>();
                xj.powi(strip as i32) * rec(&mu, &x[..j - 1], memo)
            })
            .sum();
        memo.insert((lambda.to_vec(), j), v);
        v
    }
    rec(lambda.parts(), x, &mut HashMap::new())
}

/// Reference evaluator: tableau expansion when cached-feasible, branching
/// recursion otherwise.
pub fn schur(lambda: &Partition, x: &[f64]) -> f64 {
    match schur_expansion(lambda, x.len()) {
        Ok(e) => e.eval(x),
        Err(_) => schur_branching(lambda, x),
    }
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .expect("nonempty");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

fn check_distinct(x: &[f64]) -> Result<()> {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let scale = x[i].abs().max(x[j].abs());
            if (x[i] - x[j]).abs() <= DISTINCT_TOL * scale || scale == 0.0 {
                return Err(Error::RepeatedEntries);
            }
        }
    }
    Ok(())
}

/// Bialternant `a_{λ+δ}(x) / a_δ(x)` for an arbitrary exponent vector `λ` of
/// length at most `d`. Vectors that are not partitions follow the
/// determinantal convention, so e.g. `λ + e_i` leaving the partition cone
/// gives 0 or the signed straightened value.
pub fn schur_det_exponents(lambda: &[i64], x: &[f64]) -> Result<f64> {
    let d = x.len();
    if lambda.len() > d {
        return Ok(0.0);
    }
    check_distinct(x)?;
    let exps: Vec<i64> = (0..d)
        .map(|j| lambda.get(j).copied().unwrap_or(0) + (d - 1 - j) as i64)
        .collect();
    if exps.iter().any(|&e| e < 0) {
        return Ok(0.0);
    }
    let num: Vec<Vec<f64>> = x
        .iter()
        .map(|&xi| exps.iter().map(|&e| xi.powi(e as i32)).collect())
        .collect();
    let den: Vec<Vec<f64>> = x
        .iter()
        .map(|&xi| (0..d).map(|j| xi.powi((d - 1 - j) as i32)).collect())
        .collect();
    Ok(det(num) / det(den))
}

/// `s_λ(x)` via the bialternant formula; requires pairwise distinct `x`.
pub fn schur_det(lambda: &Partition, x: &[f64]) -> Result<f64> {
    if lambda.len() > x.len() {
        check_distinct(x)?;
        return Ok(0.0);
    }
    let v: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
    schur_det_exponents(&v, x)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of standard tableaux of shape `λ` by the hook-length formula.
pub fn dim_syt(lambda: &Partition) -> BigUint {
    let conj = lambda.conjugate();
    let mut hooks = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let hook = (row - j - 1) + (conj.part(j) - i - 1) + 1;
            hooks *= hook as u64;
        }
    }
    factorial(lambda.size()) / hooks
}

/// Dimension of the `GL(d)` irreducible with highest weight `λ`, which is
/// also the number of semistandard tableaux of shape `λ` in `[d]`.
pub fn dim_weyl(lambda: &Partition, d: usize) -> BigUint {
    if lambda.len() > d {
        return BigUint::zero();
    }
    let l = lambda.padded(d);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        for j in i + 1..d {
            num *= (l[i] - l[j] + j - i) as u64;
            den *= (j - i) as u64;
        }
    }
    num / den
}

/// Weyl dimension through the content formula `f^λ / |λ|! · Π (d + j − i)`,
/// in exact rationals.
pub fn dim_weyl_content(lambda: &Partition, d: usize) -> BigRational {
    let mut prod = BigRational::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let c = d as i64 + j as i64 - i as i64;
            prod *= BigRational::from_integer(c.into());
        }
    }
    let syt = BigRational::from_integer(dim_syt(lambda).into());
    let fact = BigRational::from_integer(factorial(lambda.size()).into());
    syt / fact * prod
}

pub fn dim_weyl_f64(lambda: &Partition, d: usize) -> f64 {
    dim_weyl(lambda, d).to_f64().unwrap_or(f64::INFINITY)
}

/// `Φ_λ(x) = s_λ(x) / s_λ(1, …, 1)`.
pub fn normalized_schur(lambda: &Partition, x: &ProbVec) -> Result<f64> {
    let d = x.dim();
    if lambda.len() > d {
        return Err(Error::OutOfRange(format!(
            "partition {lambda} has more than {d} rows"
        )));
    }
    Ok(normalized_schur_slice(lambda, x.entries()))
}

pub(crate) fn normalized_schur_slice(lambda: &Partition, x: &[f64]) -> f64 {
    let d = x.len();
    if lambda.len() > d {
        return 0.0;
    }
    schur(lambda, x) / dim_weyl_f64(lambda, d)
}

pub fn normalized_schur_exact(lambda: &Partition, x: &[BigRational]) -> Result<BigRational> {
    let dim = dim_weyl(lambda, x.len());
    if dim.is_zero() {
        return Ok(BigRational::zero());
    }
    Ok(schur_ssyt_exact(lambda, x)? / BigRational::from_integer(dim.into()))
}

/// Checks, for every `λ` with `|λ| ≤ max_size` and at most `max_d` rows, every
/// `2 ≤ m ≤ max_d` and `i < m`, that
/// `[dim_m(λ^(m) + e_i)/dim_m(λ^(m))] / [dim_{m−1}(λ^(m−1) + e_i)/dim_{m−1}(λ^(m−1))]`
/// equals `1 + 1/(λ_i − λ_m + m − i)`, in exact arithmetic. Returns the number
/// of cases checked.
pub fn verify_dimension_ratios(max_size: usize, max_d: usize) -> Result<usize> {
    let ratio = |lam: &Partition, m: usize, i: usize| -> Option<BigRational> {
        let up = lam.upper_part(m);
        let plus = up.add_box(i - 1)?;
        Some(BigRational::new(dim_weyl(&plus, m).into(), dim_weyl(&up, m).into()))
    };
    let mut checked = 0;
    for n in 0..=max_size {
        for d in 1..=max_d {
            for lam in Partition::all_of(n, d) {
                for m in 2..=d {
                    for i in 1..m {
                        let (Some(lhs), Some(rhs)) = (ratio(&lam, m, i), ratio(&lam, m - 1, i)) else {
                            continue;
                        };
                        let gap = (lam.part(i - 1) - lam.part(m - 1) + m - i) as i64;
                        let closed = BigRational::one() + BigRational::new(1.into(), gap.into());
                        if lhs / rhs != closed {
                            return Err(Error::Numerical(format!("dimension ratio fails at {lam}, m={m}, i={i}")));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

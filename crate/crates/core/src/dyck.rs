//! Dyck paths as two-row standard tableaux, hinged ranges, the raising
//! bijection between downstep-marked and upstep-marked paths, and exact
//! uniform samplers over paths with a given number of downsteps.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tableau::StandardTableau;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    Up,
    Down,
}

impl Step {
    fn delta(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Down => -1,
        }
    }
}

/// A lattice path of up and down steps that never goes below its start.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut h = 0i64;
        for (i, s) in steps.iter().enumerate() {
            h += s.delta();
            if h < 0 {
                return Err(Error::InvalidDyckPath(format!("step {} goes below the axis", i + 1)));
            }
        }
        Ok(Self { steps })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn downsteps(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::Down).count()
    }

    /// Final height.
    pub fn height(&self) -> usize {
        self.len() - 2 * self.downsteps()
    }

    /// Height after each step: `heights()[i]` is the height of step `i`.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = 0usize;
        self.steps
            .iter()
            .map(|s| {
                match s {
                    Step::Up => h += 1,
                    Step::Down => h -= 1,
                }
                h
            })
            .collect()
    }

    /// Index of the first downstep ending on the axis.
    pub fn first_return(&self) -> Option<usize> {
        self.heights()
            .iter()
            .zip(&self.steps)
            .position(|(&h, &s)| h == 0 && s == Step::Down)
    }

    /// Every Dyck path of length `n`.
    pub fn all(n: usize) -> Vec<DyckPath> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(n: usize, h: usize, cur: &mut Vec<Step>, out: &mut Vec<DyckPath>) {
            if cur.len() == n {
                out.push(DyckPath { steps: cur.clone() });
                return;
            }
            cur.push(Step::Up);
            rec(n, h + 1, cur, out);
            cur.pop();
            if h > 0 {
                cur.push(Step::Down);
                rec(n, h - 1, cur, out);
                cur.pop();
            }
        }
        rec(n, 0, &mut cur, &mut out);
        out
    }

    /// Every Dyck path of length `n` with exactly `downs` downsteps.
    pub fn all_with_downsteps(n: usize, downs: usize) -> Vec<DyckPath> {
        Self::all(n).into_iter().filter(|w| w.downsteps() == downs).collect()
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::Up => "U",
                Step::Down => "D",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyckPath({self})")
    }
}

impl FromStr for DyckPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(Step::Up),
                'D' | 'd' => Ok(Step::Down),
                _ => Err(Error::InvalidDyckPath(format!("unexpected character {c:?}"))),
            })
            .collect::<Result<_>>()?;
        DyckPath::new(steps)
    }
}

impl TryFrom<String> for DyckPath {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DyckPath> for String {
    fn from(w: DyckPath) -> Self {
        w.to_string()
    }
}

/// Label `t` in the first row becomes an upstep at position `t`, in the
/// second row a downstep.
pub fn tableau_to_dyck(q: &StandardTableau) -> Result<DyckPath> {
    if q.rows().len() > 2 {
        return Err(Error::InvalidTableau(format!("{} rows, at most 2 allowed", q.rows().len())));
    }
    let steps = q
        .row_of_labels()
        .into_iter()
        .map(|r| if r == 0 { Step::Up } else { Step::Down })
        .collect();
    Ok(DyckPath { steps })
}

pub fn dyck_to_tableau(w: &DyckPath) -> StandardTableau {
    let rows: Vec<usize> = w.steps.iter().map(|&s| usize::from(s == Step::Down)).collect();
    StandardTableau::from_row_sequence(&rows).expect("Dyck prefixes are ballot sequences")
}

/// Drops the first step; if the path returned to the axis, the first return
/// (now below the axis) is raised.
pub fn behead_dyck(w: &DyckPath) -> Result<DyckPath> {
    if w.is_empty() {
        return Err(Error::Empty("Dyck path"));
    }
    let ret = w.first_return();
    let mut steps = w.steps[1..].to_vec();
    if let Some(r) = ret {
        steps[r - 1] = Step::Up;
    }
    Ok(DyckPath { steps })
}

pub fn curtail_dyck(w: &DyckPath) -> Result<DyckPath> {
    if w.is_empty() {
        return Err(Error::Empty("Dyck path"));
    }
    Ok(DyckPath {
        steps: w.steps[..w.len() - 1].to_vec(),
    })
}

/// `w_prime` stays weakly above `w` after any number of simultaneous
/// beheadings.
pub fn dyck_dominates(w_prime: &DyckPath, w: &DyckPath) -> Result<bool> {
    if w_prime.len() != w.len() {
        return Err(Error::SizeMismatch {
            left: w_prime.len(),
            right: w.len(),
        });
    }
    let (mut a, mut b) = (w_prime.clone(), w.clone());
    loop {
        if a.heights().iter().zip(b.heights()).any(|(&x, y)| x < y) {
            return Ok(false);
        }
        if a.is_empty() {
            return Ok(true);
        }
        a = behead_dyck(&a)?;
        b = behead_dyck(&b)?;
    }
}

/// `(R_0, s_1, R_1, …, s_k, R_k)`: ranges are Dyck paths relative to their
/// own start and the `s_i` are hinge steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HingedRange {
    pub ranges: Vec<DyckPath>,
    pub hinges: Vec<Step>,
}

impl HingedRange {
    pub fn new(ranges: Vec<DyckPath>, hinges: Vec<Step>) -> Result<Self> {
        if ranges.len() != hinges.len() + 1 {
            return Err(Error::Precondition(format!(
                "{} ranges for {} hinges",
                ranges.len(),
                hinges.len()
            )));
        }
        let k = hinges.len();
        if k > 1 && ranges[1..k].iter().any(|r| r.height() != 0) {
            return Err(Error::Precondition("internal ranges must be complete".into()));
        }
        Ok(Self { ranges, hinges })
    }

    /// Splits `w` at the (sorted, distinct) hinge positions.
    pub fn decompose(w: &DyckPath, hinge_positions: &[usize]) -> Result<Self> {
        if hinge_positions.windows(2).any(|p| p[0] >= p[1]) || hinge_positions.last().is_some_and(|&p| p >= w.len()) {
            return Err(Error::Precondition("hinge positions must be increasing and in range".into()));
        }
        let mut ranges = Vec::with_capacity(hinge_positions.len() + 1);
        let mut start = 0;
        for &p in hinge_positions {
            ranges.push(DyckPath::new(w.steps[start..p].to_vec())?);
            start = p + 1;
        }
        ranges.push(DyckPath::new(w.steps[start..].to_vec())?);
        Self::new(ranges, hinge_positions.iter().map(|&p| w.steps[p]).collect())
    }

    /// Positions of the hinges in the concatenated path.
    pub fn hinge_positions(&self) -> Vec<usize> {
        let mut pos = 0;
        self.hinges
            .iter()
            .zip(&self.ranges)
            .map(|(_, r)| {
                pos += r.len();
                let p = pos;
                pos += 1;
                p
            })
            .collect()
    }

    /// The concatenated steps, which may pass below the axis.
    pub fn concat(&self) -> Vec<Step> {
        let mut out = Vec::new();
        for (i, r) in self.ranges.iter().enumerate() {
            if i > 0 {
                out.push(self.hinges[i - 1]);
            }
            out.extend_from_slice(&r.steps);
        }
        out
    }

    pub fn to_path(&self) -> Result<DyckPath> {
        DyckPath::new(self.concat())
    }

    pub fn fully_raised(&self) -> Self {
        Self {
            ranges: self.ranges.clone(),
            hinges: vec![Step::Up; self.hinges.len()],
        }
    }

    pub fn fully_lowered(&self) -> Self {
        Self {
            ranges: self.ranges.clone(),
            hinges: vec![Step::Down; self.hinges.len()],
        }
    }
}

/// Downstep chain `s_1, …, s_k` starting at `s1`: each next hinge is the first
/// later downstep ending one unit lower.
fn downstep_chain(w: &DyckPath, s1: usize) -> Vec<usize> {
    let hts = w.heights();
    let mut chain = vec![s1];
    loop {
        let last = *chain.last().expect("nonempty");
        if hts[last] == 0 {
            break;
        }
        let target = hts[last] - 1;
        match (last + 1..w.len()).find(|&i| w.steps[i] == Step::Down && hts[i] == target) {
            Some(i) => chain.push(i),
            None => break,
        }
    }
    chain
}

/// Upstep chain of length `k` starting at `s1`: each next hinge is the last
/// later upstep ending one unit higher.
fn upstep_chain(w: &DyckPath, s1: usize, k: usize) -> Option<Vec<usize>> {
    let hts = w.heights();
    let mut chain = vec![s1];
    while chain.len() < k {
        let last = *chain.last().expect("nonempty");
        let target = hts[last] + 1;
        let next = (last + 1..w.len()).rev().find(|&i| w.steps[i] == Step::Up && hts[i] == target)?;
        chain.push(next);
    }
    Some(chain)
}

fn is_rightmost_upstep_of_height(w: &DyckPath, s: usize) -> bool {
    let hts = w.heights();
    w.steps[s] == Step::Up && !(s + 1..w.len()).any(|i| w.steps[i] == Step::Up && hts[i] == hts[s])
}

/// Membership in the domain: `w` has exactly `lambda2 ≥ 1` downsteps and `s1`
/// is one of them.
pub fn in_domain(w: &DyckPath, s1: usize, lambda2: usize) -> bool {
    lambda2 >= 1 && w.downsteps() == lambda2 && s1 < w.len() && w.steps[s1] == Step::Down
}

/// Membership in the image: `w'` has `lambda2 − k` downsteps with
/// `1 ≤ k ≤ lambda2`, `s1'` is the rightmost upstep of its height and
/// `k + 1 ≤ ht(s1') ≤ ht(w') − k + 1`.
pub fn in_image(w_prime: &DyckPath, s1: usize, lambda2: usize) -> bool {
    let downs = w_prime.downsteps();
    if downs >= lambda2 || s1 >= w_prime.len() || !is_rightmost_upstep_of_height(w_prime, s1) {
        return false;
    }
    let k = lambda2 - downs;
    let h = w_prime.heights()[s1];
    k + 1 <= h && h + k <= w_prime.height() + 1
}

/// Raising bijection. Returns `(W', s'_1)` where `W'` fully raises the hinged
/// range of `W` built from the downstep chain at `s1`.
pub fn dyck_f(w: &DyckPath, s1: usize) -> Result<(DyckPath, usize)> {
    if !in_domain(w, s1, w.downsteps()) {
        return Err(Error::NotInDomain(format!("({w}, {s1}): step is not a downstep")));
    }
    let chain = downstep_chain(w, s1);
    let h = HingedRange::decompose(w, &chain)?;
    let w_prime = h.fully_raised().to_path()?;
    if !in_image(&w_prime, s1, w.downsteps()) {
        return Err(Error::Numerical(format!("f({w}, {s1}) = ({w_prime}, {s1}) left the image")));
    }
    Ok((w_prime, s1))
}

/// Inverse of [`dyck_f`]; `lambda2` is the downstep count of the preimage,
/// which fixes the chain length `k = lambda2 − downsteps(W')`.
pub fn dyck_g(w_prime: &DyckPath, s1: usize, lambda2: usize) -> Result<(DyckPath, usize)> {
    if !in_image(w_prime, s1, lambda2) {
        return Err(Error::NotInDomain(format!("({w_prime}, {s1}) with λ₂ = {lambda2}")));
    }
    let k = lambda2 - w_prime.downsteps();
    let chain = upstep_chain(w_prime, s1, k)
        .ok_or_else(|| Error::Numerical(format!("no upstep chain of length {k} in {w_prime}")))?;
    let h = HingedRange::decompose(w_prime, &chain)?;
    let w = h.fully_lowered().to_path()?;
    Ok((w, s1))
}

/// Completion counts for paths with a bounded or exact number of downsteps.
///
/// `count(m, h, r)` is the number of `m`-step continuations from height `h`
/// that never go below the axis and use exactly (or at most) `r` downsteps.
#[derive(Debug, Clone)]
pub struct DyckCounts {
    n: usize,
    max_downs: usize,
    exact: bool,
    table: Vec<u128>,
}

impl DyckCounts {
    pub fn new(n: usize, max_downs: usize, exact: bool) -> Self {
        let hs = n + 1;
        let rs = max_downs + 1;
        let mut table = vec![0u128; (n + 1) * hs * rs];
        let idx = |m: usize, h: usize, r: usize| (m * hs + h) * rs + r;
        for h in 0..hs {
            for r in 0..rs {
                table[idx(0, h, r)] = u128::from(!exact || r == 0);
            }
        }
        for m in 1..=n {
            for h in 0..hs {
                for r in 0..rs {
                    let mut c = 0u128;
                    if h + 1 < hs {
                        c += table[idx(m - 1, h + 1, r)];
                    }
                    if h > 0 && r > 0 {
                        c += table[idx(m - 1, h - 1, r - 1)];
                    }
                    table[idx(m, h, r)] = c;
                }
            }
        }
        Self { n, max_downs, exact, table }
    }

    pub fn count(&self, m: usize, h: usize, r: usize) -> u128 {
        if m > self.n || h > self.n || r > self.max_downs {
            return 0;
        }
        self.table[(m * (self.n + 1) + h) * (self.max_downs + 1) + r]
    }

    /// Size of the whole family.
    pub fn total(&self) -> u128 {
        self.count(self.n, 0, self.max_downs)
    }

    /// Uniform member of the family by sequential step sampling.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DyckPath> {
        if self.total() == 0 {
            return Err(Error::Empty("Dyck family"));
        }
        let (mut h, mut r) = (0usize, self.max_downs);
        let mut steps = Vec::with_capacity(self.n);
        for m in (1..=self.n).rev() {
            let up = self.count(m - 1, h + 1, r);
            let down = if h > 0 && r > 0 { self.count(m - 1, h - 1, r - 1) } else { 0 };
            let u = rng.random_range(0..up + down);
            if u < up {
                steps.push(Step::Up);
                h += 1;
            } else {
                steps.push(Step::Down);
                h -= 1;
                r -= 1;
            }
        }
        debug_assert!(!self.exact || r == 0);
        Ok(DyckPath { steps })
    }
}

fn check_lambda2(n: usize, lambda2: usize) -> Result<()> {
    if lambda2 > n / 2 {
        return Err(Error::OutOfRange(format!("λ₂ = {lambda2} exceeds ⌊{n}/2⌋")));
    }
    Ok(())
}

/// Uniform two-row standard tableau of size `n` with exactly `lambda2` boxes
/// in the second row.
pub fn sample_syt_eq<R: Rng + ?Sized>(n: usize, lambda2: usize, rng: &mut R) -> Result<StandardTableau> {
    check_lambda2(n, lambda2)?;
    Ok(dyck_to_tableau(&DyckCounts::new(n, lambda2, true).sample(rng)?))
}

/// Uniform two-row standard tableau of size `n` with at most `lambda2` boxes
/// in the second row.
pub fn sample_syt_leq<R: Rng + ?Sized>(n: usize, lambda2: usize, rng: &mut R) -> Result<StandardTableau> {
    check_lambda2(n, lambda2)?;
    Ok(dyck_to_tableau(&DyckCounts::new(n, lambda2, false).sample(rng)?))
}

/// Exhaustive check of the bijection for paths of length `n`: returns the
/// number of domain pairs checked. Fails on the first broken property.
pub fn verify_bijection(n: usize) -> Result<usize> {
    let paths = DyckPath::all(n);
    let mut checked = 0;
    for lambda2 in 1..=n / 2 {
        let mut image_hits: std::collections::HashMap<(DyckPath, usize), usize> = Default::default();
        for w in paths.iter().filter(|w| w.downsteps() == lambda2) {
            let downs: Vec<usize> = (0..n).filter(|&i| w.steps[i] == Step::Down).collect();
            if downs.len() != lambda2 {
                return Err(Error::Numerical(format!("{w}: {} downsteps", downs.len())));
            }
            for &s1 in &downs {
                let (wp, sp) = dyck_f(w, s1)?;
                let (back, sb) = dyck_g(&wp, sp, lambda2)?;
                if back != *w || sb != s1 {
                    return Err(Error::Numerical(format!("g(f({w}, {s1})) = ({back}, {sb})")));
                }
                if !dyck_dominates(&wp, w)? {
                    return Err(Error::Numerical(format!("f({w}, {s1}) = {wp} does not dominate")));
                }
                *image_hits.entry((wp, sp)).or_insert(0) += 1;
                checked += 1;
            }
        }
        let mut per_path: std::collections::HashMap<&DyckPath, usize> = Default::default();
        for wp in paths.iter().filter(|w| w.downsteps() < lambda2) {
            for s in 0..n {
                if in_image(wp, s, lambda2) {
                    if image_hits.get(&(wp.clone(), s)) != Some(&1) {
                        return Err(Error::Numerical(format!("({wp}, {s}) is not hit exactly once")));
                    }
                    let (w, s1) = dyck_g(wp, s, lambda2)?;
                    if dyck_f(&w, s1)? != (wp.clone(), s) {
                        return Err(Error::Numerical(format!("f(g({wp}, {s})) ≠ ({wp}, {s})")));
                    }
                    *per_path.entry(wp).or_insert(0) += 1;
                }
            }
            if per_path.get(wp).copied().unwrap_or(0) != n - 2 * lambda2 + 1 {
                return Err(Error::Numerical(format!(
                    "{wp} appears {} times in the image, expected {}",
                    per_path.get(wp).copied().unwrap_or(0),
                    n - 2 * lambda2 + 1
                )));
            }
        }
        if image_hits.len() != per_path.values().sum::<usize>() {
            return Err(Error::Numerical("image has pairs outside the target set".into()));
        }
    }
    Ok(checked)
}

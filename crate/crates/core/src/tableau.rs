//! Words, Young tableaux and the RSK correspondence, together with the
//! beheading/curtailing maps and the substring-LIS-dominance relation.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Largest word length accepted by [`greene_oracle`].
pub const GREENE_ORACLE_MAX_LEN: usize = 14;

/// Largest word length accepted by [`substring_lis_dominates`].
pub const SUBSTRING_CHECK_MAX_LEN: usize = 12;

/// A finite word over the alphabet `{1, 2, …}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Word {
    letters: Vec<u32>,
}

impl Word {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::InvalidWord("letters are 1-indexed".into()));
        }
        Ok(Self { letters })
    }

    /// Like [`Word::new`] but also checks every letter lies in `1..=d`.
    pub fn over(letters: Vec<u32>, d: u32) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&a| a == 0 || a > d) {
            return Err(Error::InvalidWord(format!("letter {bad} outside 1..={d}")));
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The substring `w[i..j]` (0-based, half-open).
    pub fn substring(&self, i: usize, j: usize) -> Word {
        Word {
            letters: self.letters[i..j].to_vec(),
        }
    }

    /// Every word of length `n` over `1..=d`, in lexicographic order.
    pub fn all(n: usize, d: u32) -> Vec<Word> {
        let mut out = vec![Word::default()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (1..=d).map(move |a| {
                        let mut letters = w.letters.clone();
                        letters.push(a);
                        Word { letters }
                    })
                })
                .collect();
        }
        out
    }
}

impl TryFrom<Vec<u32>> for Word {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<u32> {
    fn from(w: Word) -> Self {
        w.letters
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.letters)
    }
}

fn shape_of(rows: &[Vec<u32>]) -> Result<Partition> {
    if rows.iter().any(|r| r.is_empty()) {
        return Err(Error::InvalidTableau("empty row".into()));
    }
    Partition::new(rows.iter().map(Vec::len).collect())
        .map_err(|_| Error::InvalidTableau("row lengths are not weakly decreasing".into()))
}

fn columns_strict(rows: &[Vec<u32>]) -> bool {
    rows.windows(2)
        .all(|w| w[1].iter().zip(&w[0]).all(|(below, above)| below > above))
}

/// A standard Young tableau: rows and columns strictly increase and the
/// entries are exactly `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct StandardTableau {
    rows: Vec<Vec<u32>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let shape = shape_of(&rows)?;
        if !rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1])) {
            return Err(Error::InvalidTableau("rows must strictly increase".into()));
        }
        if !columns_strict(&rows) {
            return Err(Error::InvalidTableau("columns must strictly increase".into()));
        }
        let n = shape.size();
        let mut seen = vec![false; n + 1];
        for &x in rows.iter().flatten() {
            let x = x as usize;
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidTableau("entries must be exactly 1..=n".into()));
            }
            seen[x] = true;
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(Vec::len).collect()).expect("validated shape")
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn first_row_len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Row index (0-based) holding each label, indexed by `label - 1`.
    pub fn row_of_labels(&self) -> Vec<usize> {
        let mut rows = vec![0; self.size()];
        for (r, row) in self.rows.iter().enumerate() {
            for &x in row {
                rows[x as usize - 1] = r;
            }
        }
        rows
    }

    /// Builds the tableau whose label `t` sits in row `rows[t - 1]`.
    pub fn from_row_sequence(row_seq: &[usize]) -> Result<Self> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (t, &r) in row_seq.iter().enumerate() {
            if r > rows.len() {
                return Err(Error::InvalidTableau("row sequence skips a row".into()));
            }
            if r == rows.len() {
                rows.push(Vec::new());
            }
            rows[r].push(t as u32 + 1);
        }
        Self::new(rows)
    }
}

impl TryFrom<Vec<Vec<u32>>> for StandardTableau {
    type Error = Error;
    fn try_from(v: Vec<Vec<u32>>) -> Result<Self> {
        StandardTableau::new(v)
    }
}

impl From<StandardTableau> for Vec<Vec<u32>> {
    fn from(t: StandardTableau) -> Self {
        t.rows
    }
}

impl fmt::Debug for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

/// A semistandard Young tableau: rows weakly increase, columns strictly.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct SemistandardTableau {
    rows: Vec<Vec<u32>>,
}

impl SemistandardTableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        shape_of(&rows)?;
        if rows.iter().flatten().any(|&x| x == 0) {
            return Err(Error::InvalidTableau("letters are 1-indexed".into()));
        }
        if !rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1])) {
            return Err(Error::InvalidTableau("rows must weakly increase".into()));
        }
        if !columns_strict(&rows) {
            return Err(Error::InvalidTableau("columns must strictly increase".into()));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(Vec::len).collect()).expect("validated shape")
    }

    /// Number of occurrences of each letter `1..=d`.
    pub fn content(&self, d: usize) -> Vec<usize> {
        let mut c = vec![0; d];
        for &x in self.rows.iter().flatten() {
            c[x as usize - 1] += 1;
        }
        c
    }
}

impl TryFrom<Vec<Vec<u32>>> for SemistandardTableau {
    type Error = Error;
    fn try_from(v: Vec<Vec<u32>>) -> Result<Self> {
        SemistandardTableau::new(v)
    }
}

impl From<SemistandardTableau> for Vec<Vec<u32>> {
    fn from(t: SemistandardTableau) -> Self {
        t.rows
    }
}

impl fmt::Debug for SemistandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

/// Row-inserts `x` into `rows`, bumping the first entry strictly greater than
/// the inserted letter. Returns the row where the new box appeared.
fn row_insert(rows: &mut Vec<Vec<u32>>, mut x: u32) -> usize {
    for (r, row) in rows.iter_mut().enumerate() {
        let pos = row.partition_point(|&y| y <= x);
        if pos == row.len() {
            row.push(x);
            return r;
        }
        std::mem::swap(&mut row[pos], &mut x);
    }
    rows.push(vec![x]);
    rows.len() - 1
}

/// The RSK correspondence: insertion tableau `P` and recording tableau `Q`.
pub fn rsk(w: &Word) -> (SemistandardTableau, StandardTableau) {
    let mut p: Vec<Vec<u32>> = Vec::new();
    let mut q: Vec<Vec<u32>> = Vec::new();
    for (t, &x) in w.letters().iter().enumerate() {
        let r = row_insert(&mut p, x);
        if r == q.len() {
            q.push(Vec::new());
        }
        q[r].push(t as u32 + 1);
    }
    (SemistandardTableau { rows: p }, StandardTableau { rows: q })
}

/// Inverse of [`rsk`].
pub fn rsk_inverse(p: &SemistandardTableau, q: &StandardTableau) -> Result<Word> {
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch);
    }
    let mut prow = p.rows.clone();
    let mut qrow = q.rows.clone();
    let n = q.size();
    let mut out = vec![0u32; n];
    for label in (1..=n as u32).rev() {
        let r = qrow
            .iter()
            .position(|row| row.last() == Some(&label))
            .ok_or_else(|| Error::InvalidTableau("largest label is not at a row end".into()))?;
        qrow[r].pop();
        let mut x = prow[r].pop().expect("shapes agree");
        for row in prow[..r].iter_mut().rev() {
            // Rightmost entry strictly smaller than x.
            let pos = row.partition_point(|&y| y < x);
            debug_assert!(pos > 0, "column strictness guarantees a smaller entry");
            std::mem::swap(&mut row[pos - 1], &mut x);
        }
        if qrow[r].is_empty() {
            qrow.pop();
            prow.pop();
        }
        out[label as usize - 1] = x;
    }
    Word::new(out)
}

/// Common shape of the RSK tableaux of `w`.
pub fn sh_rsk(w: &Word) -> Partition {
    let mut p: Vec<Vec<u32>> = Vec::new();
    for &x in w.letters() {
        row_insert(&mut p, x);
    }
    Partition::new(p.iter().map(Vec::len).collect()).expect("RSK shapes are partitions")
}

/// Length of the longest weakly increasing subsequence.
pub fn lis(w: &Word) -> usize {
    let a = w.letters();
    let mut best = vec![1usize; a.len()];
    for j in 0..a.len() {
        for i in 0..j {
            if a[i] <= a[j] {
                best[j] = best[j].max(best[i] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Maximum total length of `k` disjoint weakly increasing subsequences of `w`,
/// found by searching over every assignment of letters to subsequences.
///
/// Partial assignments are merged when their multisets of subsequence tails
/// coincide, since the tails are all that future letters can see. Independent
/// of RSK; intended as a test oracle.
pub fn greene_oracle(w: &Word, k: usize) -> Result<usize> {
    if w.len() > GREENE_ORACLE_MAX_LEN {
        return Err(Error::TooLarge {
            what: "word length",
            value: w.len(),
            limit: GREENE_ORACLE_MAX_LEN,
        });
    }
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    let k = k.min(w.len().max(1));
    // Tails sorted ascending; 0 marks a still-empty subsequence.
    let mut states: HashMap<Vec<u32>, usize> = HashMap::from([(vec![0; k], 0)]);
    for &x in w.letters() {
        let mut next: HashMap<Vec<u32>, usize> = HashMap::with_capacity(states.len() * 2);
        for (tails, len) in &states {
            let keep = next.entry(tails.clone()).or_insert(0);
            *keep = (*keep).max(*len);
            let mut last_tried = None;
            for slot in 0..k {
                let t = tails[slot];
                if t > x {
                    break;
                }
                if last_tried == Some(t) {
                    continue;
                }
                last_tried = Some(t);
                let mut nt = tails.clone();
                nt[slot] = x;
                nt.sort_unstable();
                let e = next.entry(nt).or_insert(0);
                *e = (*e).max(len + 1);
            }
        }
        states = next;
    }
    Ok(states.into_values().max().unwrap_or(0))
}

pub fn behead_word(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::Empty("word"));
    }
    Ok(w.substring(1, w.len()))
}

pub fn curtail_word(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::Empty("word"));
    }
    Ok(w.substring(0, w.len() - 1))
}

/// Removes the box holding the largest label.
pub fn curtail_tableau(q: &StandardTableau) -> Result<StandardTableau> {
    let n = q.size() as u32;
    if n == 0 {
        return Err(Error::Empty("tableau"));
    }
    let mut rows = q.rows.clone();
    let r = rows
        .iter()
        .position(|row| row.last() == Some(&n))
        .expect("largest label of a SYT ends its row");
    rows[r].pop();
    if rows[r].is_empty() {
        rows.pop();
    }
    Ok(StandardTableau { rows })
}

/// Deletes the top-left box, slides the hole out by jeu de taquin and
/// decrements every entry.
///
/// At each slide the hole swaps with the smaller of its right and lower
/// neighbours, which is the only move that keeps rows and columns increasing.
pub fn behead_tableau(q: &StandardTableau) -> Result<StandardTableau> {
    if q.is_empty() {
        return Err(Error::Empty("tableau"));
    }
    let mut rows = q.rows.clone();
    let (mut i, mut j) = (0usize, 0usize);
    loop {
        let right = rows[i].get(j + 1).copied();
        let below = rows.get(i + 1).and_then(|r| r.get(j)).copied();
        match (right, below) {
            (None, None) => break,
            (Some(r), Some(b)) if b < r => {
                rows[i][j] = b;
                i += 1;
            }
            (Some(r), _) => {
                rows[i][j] = r;
                j += 1;
            }
            (None, Some(b)) => {
                rows[i][j] = b;
                i += 1;
            }
        }
    }
    rows[i].pop();
    if rows[i].is_empty() {
        rows.pop();
    }
    for x in rows.iter_mut().flatten() {
        *x -= 1;
    }
    Ok(StandardTableau { rows })
}

/// `true` iff `lis(w_prime[i..=j]) >= lis(w[i..=j])` for every substring,
/// checked by brute force.
pub fn substring_lis_dominates(w_prime: &Word, w: &Word) -> Result<bool> {
    if w_prime.len() != w.len() {
        return Err(Error::SizeMismatch {
            left: w_prime.len(),
            right: w.len(),
        });
    }
    if w.len() > SUBSTRING_CHECK_MAX_LEN {
        return Err(Error::TooLarge {
            what: "word length",
            value: w.len(),
            limit: SUBSTRING_CHECK_MAX_LEN,
        });
    }
    let n = w.len();
    for i in 0..n {
        for j in i + 1..=n {
            if lis(&w_prime.substring(i, j)) < lis(&w.substring(i, j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Substring-LIS-dominance read off recording tableaux: first-row lengths are
/// compared at every stage of simultaneous beheading and curtailing.
pub fn tableau_dominates(q_prime: &StandardTableau, q: &StandardTableau) -> Result<bool> {
    let n = q.size();
    if q_prime.size() != n {
        return Err(Error::SizeMismatch {
            left: q_prime.size(),
            right: n,
        });
    }
    // Beheading and curtailing commute, so a stage is (beheads, curtails).
    struct Walk {
        beheaded: Vec<(StandardTableau, StandardTableau)>,
        memo: HashMap<(usize, usize), bool>,
        n: usize,
    }
    impl Walk {
        fn first_rows(&self, a: usize, b: usize) -> (usize, usize) {
            // Curtailing b times keeps the labels <= n - a - b.
            let max_label = (self.n - a - b) as u32;
            let (tp, t) = &self.beheaded[a];
            let count = |t: &StandardTableau| {
                t.rows.first().map_or(0, |r| r.iter().filter(|&&x| x <= max_label).count())
            };
            (count(tp), count(t))
        }

        fn dominates(&mut self, a: usize, b: usize) -> bool {
            if a + b >= self.n {
                return true;
            }
            if let Some(&v) = self.memo.get(&(a, b)) {
                return v;
            }
            let (lp, l) = self.first_rows(a, b);
            let v = lp >= l && self.dominates(a + 1, b) && self.dominates(a, b + 1);
            self.memo.insert((a, b), v);
            v
        }
    }
    let mut beheaded = vec![(q_prime.clone(), q.clone())];
    for _ in 0..n {
        let (tp, t) = beheaded.last().expect("nonempty");
        if t.is_empty() {
            break;
        }
        let next = (behead_tableau(tp)?, behead_tableau(t)?);
        beheaded.push(next);
    }
    let mut walk = Walk {
        beheaded,
        memo: HashMap::new(),
        n,
    };
    Ok(walk.dominates(0, 0))
}

/// Suffix-LIS-dominance shortcut: `Q'_{1j} <= Q_{1j}` for every column `j`,
/// treating missing entries as infinite.
pub fn suffix_dominates(q_prime: &StandardTableau, q: &StandardTableau) -> bool {
    let (rp, r) = (
        q_prime.rows.first().map_or(&[][..], |r| r.as_slice()),
        q.rows.first().map_or(&[][..], |r| r.as_slice()),
    );
    (0..r.len()).all(|j| rp.get(j).is_some_and(|&x| x <= r[j]))
}

//! Small dense complex matrices: Hermitian eigendecomposition, Haar-random
//! unitaries, density matrices, principal minors and the generalized power
//! function.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::{Partition, SortedSpectrum};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-9;
/// Principal minors above `-MINOR_TOL` are clamped to zero.
pub const MINOR_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 50;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { left: dim, right: bad.len() });
        }
        let entries: Vec<Complex64> = rows.into_iter().flatten().collect();
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("non-finite matrix entry".into()));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * c).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry of `|A − A†|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `U† A U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dims(self.dim, u.dim)?;
        Ok(&(&u.adjoint() * self) * u)
    }

    /// Top-left `k × k` block.
    pub fn leading_block(&self, k: usize) -> ComplexMatrix {
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self[(i, j)];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    m.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        m
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        ComplexMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// A Hermitian positive semidefinite matrix of unit trace.
#[derive(Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermitian_defect();
        if defect >= HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Precondition(format!("trace {tr} is not 1")));
        }
        let (eig, _) = hermitian_eig(&matrix)?;
        let min = eig.last().copied().unwrap_or(0.0);
        if min <= -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: ComplexMatrix::diag(&vec![1.0 / d as f64; d]) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    /// Sorted spectrum; eigenvalues below `1e-12` in magnitude become exact
    /// zeros.
    pub fn spectrum(&self) -> Result<SortedSpectrum> {
        let (eig, _) = hermitian_eig(&self.matrix)?;
        let mut e: Vec<f64> = eig.iter().map(|&x| if x.abs() < 1e-12 { 0.0 } else { x.max(0.0) }).collect();
        let s: f64 = e.iter().sum();
        for x in &mut e {
            *x /= s;
        }
        SortedSpectrum::new(e)
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DensityMatrix::new(ComplexMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A unitary matrix.
#[derive(Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = (&(&matrix.adjoint() * &matrix) - &ComplexMatrix::identity(matrix.dim)).max_abs();
        if defect >= UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(d) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix { matrix: &self.matrix * &other.matrix }
    }

    /// `U diag(values) U†`.
    pub fn conjugate_diag(&self, values: &[f64]) -> Result<ComplexMatrix> {
        check_dims(self.dim(), values.len())?;
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (0..n)
                    .map(|k| self.matrix[(i, k)] * values[k] * self.matrix[(j, k)].conj())
                    .sum();
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

impl<'de> Deserialize<'de> for UnitaryMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        UnitaryMatrix::new(ComplexMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi sweeps on a Hermitian matrix. Returns the diagonalized
/// matrix and, when requested, the accumulated eigenvector matrix.
fn jacobi(h: &ComplexMatrix, with_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let defect = h.hermitian_defect();
    if defect >= HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.dim;
    let mut a = h.clone();
    let mut v = with_vectors.then(|| ComplexMatrix::identity(n));
    let tol = JACOBI_TOL * h.frobenius_norm().max(1.0);
    let mut sweeps = 0;
    while off_diagonal_norm(&a) > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Numerical("Jacobi eigensolver did not converge".into()));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Phase-rotate column q so the (p, q) entry becomes real,
                // then apply the real symmetric Jacobi rotation.
                let phase = (apq / r).conj();
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let (jpp, jpq, jqp, jqq) = (
                    Complex64::new(c, 0.0),
                    Complex64::new(s, 0.0),
                    phase * -s,
                    phase * c,
                );
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * jpp + y * jqp;
                    a[(k, q)] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = jpp.conj() * x + jqp.conj() * y;
                    a[(q, k)] = jpq.conj() * x + jqq.conj() * y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (x, y) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = x * jpp + y * jqp;
                        v[(k, q)] = x * jpq + y * jqq;
                    }
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

/// Eigenvalues sorted in decreasing order with matching orthonormal
/// eigenvectors as the columns of a unitary.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, UnitaryMatrix)> {
    let (eig, v) = jacobi(h, true)?;
    let v = v.expect("vectors requested");
    let n = h.dim;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig[j].total_cmp(&eig[i]));
    let mut sorted = ComplexMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            sorted[(k, new)] = v[(k, old)];
        }
    }
    Ok((order.iter().map(|&i| eig[i]).collect(), UnitaryMatrix { matrix: sorted }))
}

/// Eigenvalues only, sorted decreasing; closed form for `2 × 2`.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if h.dim == 2 {
        let defect = h.hermitian_defect();
        if defect >= HERMITIAN_TOL * h.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
        let half = (a - d) / 2.0;
        let r = (half * half + h[(0, 1)].norm_sqr()).sqrt();
        let m = (a + d) / 2.0;
        return Ok(vec![m + r, m - r]);
    }
    let (mut eig, _) = jacobi(h, false)?;
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

/// Haar-distributed unitary: the unitary factor of a QR decomposition of a
/// matrix of i.i.d. standard complex Gaussians, normalized so the triangular
/// factor has a positive diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitaryMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re * scale, im * scale)
                })
                .collect()
        })
        .collect();
    for j in 0..d {
        for i in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qi = &done[i];
            let r: Complex64 = qi.iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in rest[0].iter_mut().zip(qi) {
                *x -= r * a;
            }
        }
        // The triangular factor's diagonal entry is the real norm r_jj > 0,
        // so dividing by it is the phase normalization.
        let r_jj: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[j] {
            *x /= r_jj;
        }
    }
    let mut m = ComplexMatrix::zeros(d);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    UnitaryMatrix { matrix: m }
}

/// `U diag(α) U†`.
pub fn density_from_spectrum(alpha: &SortedSpectrum, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    check_dims(alpha.dim(), u.dim())?;
    let mut m = u.conjugate_diag(alpha.entries())?;
    // Symmetrize away rounding so the Hermitian check is exact.
    let adj = m.adjoint();
    m = (&m + &adj).scale(0.5);
    Ok(DensityMatrix { matrix: m })
}

fn det_partial_pivot(mut m: ComplexMatrix) -> Complex64 {
    let n = m.dim;
    let mut det = ONE;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[(a, c)].norm().total_cmp(&m[(b, c)].norm()))
            .expect("nonempty");
        if m[(p, c)] == ZERO {
            return ZERO;
        }
        if p != c {
            for k in 0..n {
                let t = m[(p, k)];
                m[(p, k)] = m[(c, k)];
                m[(c, k)] = t;
            }
            det = -det;
        }
        let pivot = m[(c, c)];
        det *= pivot;
        for r in c + 1..n {
            let f = m[(r, c)] / pivot;
            for k in c..n {
                let v = m[(c, k)];
                m[(r, k)] -= f * v;
            }
        }
    }
    det
}

/// Determinant of the top-left `k × k` block.
pub fn principal_minor(z: &ComplexMatrix, k: usize) -> Result<Complex64> {
    if k == 0 || k > z.dim {
        return Err(Error::OutOfRange(format!("minor order {k} outside 1..={}", z.dim)));
    }
    Ok(det_partial_pivot(z.leading_block(k)))
}

fn power_exponents(lambda: &Partition, d: usize) -> Result<Vec<usize>> {
    if lambda.len() > d {
        return Err(Error::OutOfRange(format!("partition {lambda} has more than {d} rows")));
    }
    let l = lambda.padded(d);
    Ok((0..d).map(|k| l[k] - l.get(k + 1).copied().unwrap_or(0)).collect())
}

fn real_minor(z: &ComplexMatrix, k: usize) -> Result<f64> {
    let m = principal_minor(z, k)?.re;
    if m < -MINOR_TOL {
        return Err(Error::NotPsd(m));
    }
    Ok(m.max(0.0))
}

/// `Δ_λ(Z) = Π_k pm_k(Z)^{λ_k − λ_{k+1}}` for positive semidefinite `Z`.
pub fn power_function(lambda: &Partition, z: &ComplexMatrix) -> Result<f64> {
    let exps = power_exponents(lambda, z.dim)?;
    let mut v = 1.0;
    for (k, &e) in exps.iter().enumerate() {
        if e > 0 {
            v *= real_minor(z, k + 1)?.powi(e as i32);
        }
    }
    Ok(v)
}

/// `ln Δ_λ(Z)`, `-∞` when a needed minor vanishes.
pub fn log_power_function(lambda: &Partition, z: &ComplexMatrix) -> Result<f64> {
    let exps = power_exponents(lambda, z.dim)?;
    let mut v = 0.0;
    for (k, &e) in exps.iter().enumerate() {
        if e > 0 {
            v += e as f64 * real_minor(z, k + 1)?.ln();
        }
    }
    Ok(v)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?.iter().map(|x| x.abs()).sum())
}

/// `½ ‖A − B‖₁`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    check_dims(a.dim, b.dim)?;
    Ok(trace_norm(&(a - b))? / 2.0)
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    check_dims(a.dim, b.dim)?;
    Ok((a - b).frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{replicas, stream, MeanAcc};
    use proptest::prelude::*;
    use rand::Rng;

    fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(d);
        for i in 0..d {
            m[(i, i)] = Complex64::new(rng.sample(StandardNormal), 0.0);
            for j in i + 1..d {
                let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    fn random_density<R: Rng>(d: usize, rng: &mut R) -> DensityMatrix {
        let alpha = SortedSpectrum::random(d, rng);
        density_from_spectrum(&alpha, &haar_unitary(d, rng)).unwrap()
    }

    #[test]
    fn eig_examples() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let (e, _) = hermitian_eig(&x).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] + 1.0).abs() < 1e-12);
        let (e, v) = hermitian_eig(&ComplexMatrix::diag(&[0.5, 0.3, 0.2])).unwrap();
        assert_eq!(e, vec![0.5, 0.3, 0.2]);
        for i in 0..3 {
            assert!((v.matrix()[(i, i)].norm() - 1.0).abs() < 1e-12);
        }
        let bad = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&bad), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = stream(4, 0);
        for d in 1..=6 {
            for _ in 0..50 {
                let h = random_hermitian(d, &mut rng);
                let (e, v) = hermitian_eig(&h).unwrap();
                let back = v.conjugate_diag(&e).unwrap();
                assert!((&back - &h).max_abs() < 1e-8 * h.frobenius_norm().max(1.0));
                assert!(e.windows(2).all(|w| w[0] >= w[1]));
                assert!((e.iter().sum::<f64>() - h.trace().re).abs() < 1e-9);
                let fast = hermitian_eigenvalues(&h).unwrap();
                for (a, b) in fast.iter().zip(&e) {
                    assert!((a - b).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn haar_is_unitary_with_correct_moments() {
        let d = 3;
        let draws = replicas(6, 100_000, |r| haar_unitary(d, r).matrix()[(0, 0)].norm_sqr());
        let acc = MeanAcc::from_values(&draws);
        assert!((acc.mean() - 1.0 / d as f64).abs() < 3.0 * acc.std_error());
        let mut rng = stream(6, 1);
        for _ in 0..100 {
            assert!(UnitaryMatrix::new(haar_unitary(4, &mut rng).matrix().clone()).is_ok());
        }
    }

    #[test]
    fn haar_is_left_invariant() {
        use statrs::distribution::{ContinuousCDF, Uniform};
        let d = 2;
        let v = haar_unitary(d, &mut stream(99, 0));
        let plain = replicas(10, 10_000, |r| haar_unitary(d, r).matrix()[(0, 1)].norm_sqr());
        let rotated = replicas(11, 10_000, |r| v.compose(&haar_unitary(d, r)).matrix()[(0, 1)].norm_sqr());
        // For d = 2, |U_ij|² is uniform on [0, 1].
        let unif = Uniform::new(0.0, 1.0).unwrap();
        for sample in [&plain, &rotated] {
            let mut s = sample.clone();
            s.sort_by(f64::total_cmp);
            let n = s.len() as f64;
            let ks = s
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let c = unif.cdf(x);
                    (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
                })
                .fold(0.0, f64::max);
            // 1% critical value of the one-sample KS statistic.
            assert!(ks < 1.63 / n.sqrt(), "ks {ks}");
        }
    }

    #[test]
    fn density_round_trip() {
        let alpha = SortedSpectrum::new(vec![0.5, 0.3, 0.2]).unwrap();
        let rho = density_from_spectrum(&alpha, &UnitaryMatrix::identity(3)).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::diag(&[0.5, 0.3, 0.2]));
        let mut rng = stream(8, 0);
        for _ in 0..50 {
            let u = haar_unitary(3, &mut rng);
            let rho = density_from_spectrum(&alpha, &u).unwrap();
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
            let s = rho.spectrum().unwrap();
            for (a, b) in s.entries().iter().zip(alpha.entries()) {
                assert!((a - b).abs() < 1e-9);
            }
            assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        }
        assert!(density_from_spectrum(&alpha, &UnitaryMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[1.2, -0.2])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[0.6, 0.6])).is_err());
    }

    #[test]
    fn minors() {
        let d = ComplexMatrix::diag(&[2.0, 3.0, 5.0]);
        assert_eq!(principal_minor(&d, 1).unwrap().re, 2.0);
        assert_eq!(principal_minor(&d, 2).unwrap().re, 6.0);
        assert_eq!(principal_minor(&d, 3).unwrap().re, 30.0);
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!(principal_minor(&m, 1).unwrap().re, 2.0);
        assert!((principal_minor(&m, 2).unwrap().re - 1.0).abs() < 1e-15);
        assert!(principal_minor(&m, 0).is_err());
        assert!(principal_minor(&m, 3).is_err());
        // Pivoting path: leading entry zero.
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(principal_minor(&m, 2).unwrap().re, -1.0);
    }

    #[test]
    fn power_function_examples() {
        let p = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
        let lam = p(&[3, 1]);
        let z = ComplexMatrix::diag(&[0.7, 0.3]);
        assert!((power_function(&lam, &z).unwrap() - 0.7f64.powi(3) * 0.3).abs() < 1e-15);
        let z = ComplexMatrix::diag(&[1.0 / 3.0; 3]);
        let lam = p(&[2, 2, 1]);
        assert!((power_function(&lam, &z).unwrap() - 3f64.powi(-5)).abs() < 1e-15);
        assert!(power_function(&p(&[1, 1, 1, 1]), &z).is_err());
        let neg = ComplexMatrix::diag(&[-0.5, 1.0]);
        assert!(matches!(power_function(&p(&[1]), &neg), Err(Error::NotPsd(_))));
        let tiny = ComplexMatrix::diag(&[1.0, -1e-12]);
        assert_eq!(power_function(&p(&[1, 1]), &tiny).unwrap(), 0.0);
        assert_eq!(log_power_function(&p(&[1, 1]), &tiny).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn distances() {
        let mut rng = stream(12, 0);
        let a = random_density(3, &mut rng);
        assert_eq!(trace_distance(a.matrix(), a.matrix()).unwrap(), 0.0);
        assert_eq!(frobenius_distance(a.matrix(), a.matrix()).unwrap(), 0.0);
        let e0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let e1 = ComplexMatrix::diag(&[0.0, 1.0]);
        assert!((trace_distance(&e0, &e1).unwrap() - 1.0).abs() < 1e-15);
        assert!(trace_distance(&e0, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn trace_norm_cauchy_schwarz() {
        let mut rng = stream(13, 0);
        for d in 2..=4 {
            for _ in 0..100 {
                let a = random_density(d, &mut rng);
                let b = random_density(d, &mut rng);
                let diff = a.matrix() - b.matrix();
                let rank = hermitian_eigenvalues(&diff).unwrap().iter().filter(|x| x.abs() > 1e-12).count();
                let lhs = trace_norm(&diff).unwrap();
                assert!(lhs <= (rank as f64).sqrt() * diff.frobenius_norm() + 1e-12);
                assert!(lhs <= (2.0 * rank as f64).sqrt() * diff.frobenius_norm() + 1e-12);
            }
        }
    }

    #[test]
    fn json_nested_pairs() {
        let m = ComplexMatrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[[1.0,0.0],[0.0,-1.0]],[[0.0,1.0],[2.0,0.0]]]");
        assert_eq!(serde_json::from_str::<ComplexMatrix>(&json).unwrap(), m);
        assert!(serde_json::from_str::<ComplexMatrix>("[[[1.0,0.0]],[[0.0,0.0]]]").is_err());
        assert!(serde_json::from_str::<DensityMatrix>(&json).is_err());
    }

    proptest! {
        #[test]
        fn interlacing_envelope(seed in any::<u64>(), d in 1usize..=4, raw in prop::collection::vec(0usize..=4, 4)) {
            let mut rng = stream(seed, 0);
            let alpha = SortedSpectrum::random(d, &mut rng);
            let rho = density_from_spectrum(&alpha, &haar_unitary(d, &mut rng)).unwrap();
            let mut parts: Vec<usize> = raw[..d].to_vec();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            for k in 1..=d {
                let pm = principal_minor(rho.matrix(), k).unwrap().re;
                let env: f64 = alpha.entries()[..k].iter().product();
                prop_assert!(pm <= env * (1.0 + 1e-9) + 1e-15);
            }
            let env: f64 = lam.padded(d).iter().zip(alpha.entries()).map(|(&l, &a)| a.powi(l as i32)).product();
            prop_assert!(power_function(&lam, rho.matrix()).unwrap() <= env * (1.0 + 1e-9) + 1e-300);
        }

        #[test]
        fn power_function_is_multiplicative(seed in any::<u64>(), a in prop::collection::vec(0usize..=3, 3), b in prop::collection::vec(0usize..=3, 3)) {
            let mut rng = stream(seed, 1);
            let rho = random_density(3, &mut rng);
            let mk = |mut v: Vec<usize>| { v.sort_unstable_by(|x, y| y.cmp(x)); Partition::new(v).unwrap() };
            let (la, lb) = (mk(a), mk(b));
            let lhs = power_function(&la.plus(&lb), rho.matrix()).unwrap();
            let rhs = power_function(&la, rho.matrix()).unwrap() * power_function(&lb, rho.matrix()).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
        }
    }
}

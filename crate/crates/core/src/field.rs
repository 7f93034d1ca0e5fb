//! Exact scalars over `F_p` and `Q`, and dense linear algebra over them.
//!
//! The rationals are encoded as characteristic zero. Nothing here ever
//! touches floating point.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::FieldError;

/// A prime field `F_p`, or `Q` when the characteristic is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    p: u32,
}

impl Field {
    pub const RATIONALS: Field = Field { p: 0 };

    /// `F_p` for prime `p`, or `Q` for `p = 0`.
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p == 0 || is_prime(p) {
            Ok(Field { p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u32 {
        self.p
    }

    pub fn is_rational(self) -> bool {
        self.p == 0
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        if self.p == 0 {
            Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
        } else {
            let p = i64::from(self.p);
            Scalar::Modular {
                value: v.rem_euclid(p) as u32,
                p: self.p,
            }
        }
    }

    /// `(-1)^e`.
    pub fn sign(self, e: u64) -> Scalar {
        if e % 2 == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "Q")
        } else {
            write!(f, "F_{}", self.p)
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. Modular values are least nonnegative residues.
///
/// Mixing characteristics in one operation is a programming error and
/// panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Modular { value: u32, p: u32 },
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Modular { p, .. } => Field { p: *p },
            Scalar::Rational(_) => Field::RATIONALS,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Modular { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Modular { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Modular { value, p } => Scalar::Modular {
                value: mod_inv(*value, *p),
                p: *p,
            },
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
        })
    }

    /// Integer representative: the residue for `F_p`, the numerator for an
    /// integral rational. Non-integral rationals return `None`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Modular { value, .. } => Some(i64::from(*value)),
            Scalar::Rational(q) if q.is_integer() => {
                let n = q.numer();
                let digits = n.magnitude().to_u64_digits();
                match digits.len() {
                    0 => Some(0),
                    1 if digits[0] <= i64::MAX as u64 => {
                        let v = digits[0] as i64;
                        Some(if n.is_negative() { -v } else { v })
                    }
                    _ => None,
                }
            }
            Scalar::Rational(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Modular { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) => write!(f, "{q}"),
        }
    }
}

fn same_char(a: &Scalar, b: &Scalar) -> u32 {
    let (fa, fb) = (a.field(), b.field());
    assert_eq!(fa, fb, "mixed characteristics: {fa} and {fb}");
    fa.p
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    mod_pow(a, p - 2, p)
}

fn mod_pow(a: u32, mut e: u32, p: u32) -> u32 {
    let p64 = u64::from(p);
    let mut acc = 1u64 % p64;
    let mut base = u64::from(a) % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let p = same_char(self, rhs);
        match (self, rhs) {
            (Scalar::Modular { value: a, .. }, Scalar::Modular { value: b, .. }) => Scalar::Modular {
                value: ((u64::from(*a) + u64::from(*b)) % u64::from(p)) as u32,
                p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => unreachable!(),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let p = same_char(self, rhs);
        match (self, rhs) {
            (Scalar::Modular { value: a, .. }, Scalar::Modular { value: b, .. }) => Scalar::Modular {
                value: (u64::from(*a) * u64::from(*b) % u64::from(p)) as u32,
                p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Modular { value, p } => Scalar::Modular {
                value: (p - value) % p,
                p: *p,
            },
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    Modular(Vec<u32>),
    Rational(Vec<BigRational>),
}

/// Dense row-major matrix over a [`Field`].
///
/// Modular entries are stored as raw residues so that the bar-complex
/// differentials stay compact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Storage,
}

/// Output of [`Matrix::row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    /// Pivot column of each nonzero row of the reduced echelon form.
    pub pivots: Vec<usize>,
    /// Basis of the null space; each vector has `cols` entries.
    pub kernel_basis: Vec<Vec<Scalar>>,
    /// Columns of the original matrix at pivot positions; spans the column space.
    pub image_basis: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        let data = if field.is_rational() {
            Storage::Rational(vec![BigRational::zero(); rows * cols])
        } else {
            Storage::Modular(vec![0; rows * cols])
        };
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, &field.one());
        }
        m
    }

    /// Builds a matrix from rows of integers, reduced into `field`.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, &field.from_i64(v));
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols);
        let k = i * self.cols + j;
        match &self.data {
            Storage::Modular(d) => Scalar::Modular {
                value: d[k],
                p: self.field.p,
            },
            Storage::Rational(d) => Scalar::Rational(d[k].clone()),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: &Scalar) {
        assert!(i < self.rows && j < self.cols);
        assert_eq!(v.field(), self.field, "scalar from the wrong field");
        let k = i * self.cols + j;
        match (&mut self.data, v) {
            (Storage::Modular(d), Scalar::Modular { value, .. }) => d[k] = *value,
            (Storage::Rational(d), Scalar::Rational(q)) => d[k] = q.clone(),
            _ => unreachable!(),
        }
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, &(&cur + v));
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Storage::Modular(d) => d.iter().all(|&x| x == 0),
            Storage::Rational(d) => d.iter().all(Zero::is_zero),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, &self.get(i, j));
            }
        }
        t
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.field, rhs.field);
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zero(self.field, self.rows, rhs.cols);
        match (&self.data, &rhs.data, &mut out.data) {
            (Storage::Modular(a), Storage::Modular(b), Storage::Modular(c)) => {
                let p = u64::from(self.field.p);
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let aik = u64::from(a[i * self.cols + k]);
                        if aik == 0 {
                            continue;
                        }
                        for j in 0..rhs.cols {
                            let b_kj = u64::from(b[k * rhs.cols + j]);
                            let slot = &mut c[i * rhs.cols + j];
                            *slot = ((u64::from(*slot) + aik * b_kj) % p) as u32;
                        }
                    }
                }
            }
            (Storage::Rational(a), Storage::Rational(b), Storage::Rational(c)) => {
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let aik = &a[i * self.cols + k];
                        if aik.is_zero() {
                            continue;
                        }
                        for j in 0..rhs.cols {
                            c[i * rhs.cols + j] += aik * &b[k * rhs.cols + j];
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.field.zero(), |acc, j| &acc + &(&self.get(i, j) * &v[j]))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Gauss-Jordan elimination.
    pub fn row_reduce(&self) -> RowReduction {
        let (rref, pivots) = self.echelon();
        let rank = pivots.len();
        let field = self.field;

        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut kernel_basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rref.get(row, free);
            }
            kernel_basis.push(v);
        }
        let image_basis = pivots
            .iter()
            .map(|&c| (0..self.rows).map(|r| self.get(r, c)).collect())
            .collect();

        RowReduction {
            rank,
            pivots,
            kernel_basis,
            image_basis,
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    fn echelon(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        match &mut m.data {
            Storage::Modular(d) => {
                let p = u64::from(self.field.p);
                let mut r = 0;
                for c in 0..cols {
                    if r == rows {
                        break;
                    }
                    let Some(piv) = (r..rows).find(|&i| d[i * cols + c] != 0) else {
                        continue;
                    };
                    if piv != r {
                        for j in 0..cols {
                            d.swap(piv * cols + j, r * cols + j);
                        }
                    }
                    let inv = u64::from(mod_inv(d[r * cols + c], self.field.p));
                    for j in c..cols {
                        d[r * cols + j] = (u64::from(d[r * cols + j]) * inv % p) as u32;
                    }
                    for i in 0..rows {
                        let f = u64::from(d[i * cols + c]);
                        if i == r || f == 0 {
                            continue;
                        }
                        let neg = p - f;
                        for j in c..cols {
                            let pivot_entry = u64::from(d[r * cols + j]);
                            if pivot_entry != 0 {
                                let slot = &mut d[i * cols + j];
                                *slot = ((u64::from(*slot) + neg * pivot_entry) % p) as u32;
                            }
                        }
                    }
                    pivots.push(c);
                    r += 1;
                }
            }
            Storage::Rational(d) => {
                let mut r = 0;
                for c in 0..cols {
                    if r == rows {
                        break;
                    }
                    let Some(piv) = (r..rows).find(|&i| !d[i * cols + c].is_zero()) else {
                        continue;
                    };
                    if piv != r {
                        for j in 0..cols {
                            d.swap(piv * cols + j, r * cols + j);
                        }
                    }
                    let inv = d[r * cols + c].recip();
                    for j in c..cols {
                        let v = &d[r * cols + j] * &inv;
                        d[r * cols + j] = v;
                    }
                    for i in 0..rows {
                        if i == r || d[i * cols + c].is_zero() {
                            continue;
                        }
                        let f = d[i * cols + c].clone();
                        for j in c..cols {
                            let delta = &f * &d[r * cols + j];
                            d[i * cols + j] -= delta;
                        }
                    }
                    pivots.push(c);
                    r += 1;
                }
            }
        }
        (m, pivots)
    }
}

/// Homology dimension at the middle term of `A --d_in--> B --d_out--> C`:
/// `dim ker(d_out) - rank(d_in)`.
///
/// Fails when `d_out * d_in` is nonzero.
pub fn homology_dim(d_in: &Matrix, d_out: &Matrix) -> Result<usize, FieldError> {
    if d_in.rows() != d_out.cols() {
        return Err(FieldError::DimensionMismatch {
            left: d_out.cols(),
            right: d_in.rows(),
        });
    }
    if d_in.rows() > 0 && d_out.rows() > 0 && d_in.cols() > 0 && !d_out.mul(d_in).is_zero() {
        return Err(FieldError::NonzeroComposite);
    }
    let kernel = d_out.cols() - d_out.rank();
    Ok(kernel - d_in.rank())
}

/// Sparse vector: strictly increasing indices, nonzero entries.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `a + c*b` for sparse vectors.
fn axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental echelon basis of a span of sparse vectors, keyed by leading
/// index. Suited to the very sparse bar differentials, where dense
/// elimination is wasteful.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    pivots: alloc::collections::BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        SparseEchelon {
            pivots: alloc::collections::BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a vector to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        while let Some((lead, c)) = v.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => v = axpy(&v, &-&c, p),
                None => {
                    let inv = c.inverse().expect("leading entry is nonzero");
                    let v = v.into_iter().map(|(i, x)| (i, &x * &inv)).collect();
                    self.pivots.insert(lead, v);
                    return true;
                }
            }
        }
        false
    }
}

impl Default for SparseEchelon {
    fn default() -> Self {
        Self::new()
    }
}

/// Whether `outer * inner` vanishes, both given by sparse columns; the
/// entries of `inner` index the columns of `outer`.
pub fn sparse_compose_is_zero(outer: &[SparseVec], inner: &[SparseVec]) -> bool {
    inner.iter().all(|v| {
        let mut acc = SparseVec::new();
        for (i, c) in v {
            acc = axpy(&acc, c, &outer[*i]);
        }
        acc.is_empty()
    })
}

/// Rank of the span of sparse vectors.
pub fn sparse_rank(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = SparseEchelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

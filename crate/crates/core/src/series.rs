//! Truncated Poincaré series with exact coefficients, and Borel-type
//! generator inversion.
//!
//! A connected graded-commutative Hopf algebra over a perfect field is a
//! tensor product of monogenic pieces, so its Poincaré series is a product
//! of one factor per generator. [`invert_generators`] recovers the number of
//! generators in each degree by peeling off those factors degree by degree.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::SeriesError;

pub const DEFAULT_TRUNCATION: u32 = 24;

/// Nonnegative integer power series in one variable, known through degree
/// `truncation` inclusive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PoincareSeries {
    coeffs: Vec<BigUint>,
}

impl PoincareSeries {
    pub fn zero(truncation: u32) -> Self {
        PoincareSeries {
            coeffs: vec![BigUint::zero(); truncation as usize + 1],
        }
    }

    pub fn one(truncation: u32) -> Self {
        let mut s = Self::zero(truncation);
        s.coeffs[0] = 1u32.into();
        s
    }

    /// Entries past `truncation` are dropped; missing ones are zero.
    pub fn from_coeffs<I, T>(coeffs: I, truncation: u32) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigUint>,
    {
        let mut s = Self::zero(truncation);
        for (d, c) in coeffs.into_iter().enumerate().take(truncation as usize + 1) {
            s.coeffs[d] = c.into();
        }
        s
    }

    /// `t^degree`, or zero if the degree is out of range.
    pub fn monomial(degree: u32, truncation: u32) -> Self {
        let mut s = Self::zero(truncation);
        if degree <= truncation {
            s.coeffs[degree as usize] = 1u32.into();
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, degree: u32) -> &BigUint {
        &self.coeffs[degree as usize]
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn set(&mut self, degree: u32, value: BigUint) {
        self.coeffs[degree as usize] = value;
    }

    /// `(degree, dim)` pairs for every degree through the truncation.
    pub fn table(&self) -> impl Iterator<Item = (u32, &BigUint)> {
        self.coeffs.iter().enumerate().map(|(d, c)| (d as u32, c))
    }

    pub fn truncate(&self, truncation: u32) -> Self {
        Self::from_coeffs(self.coeffs.iter().cloned(), truncation)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::from_coeffs((0..=n).map(|d| self.coeff(d) + other.coeff(d)), n)
    }

    /// Multiplies by `t^k`; the result is known through `truncation + k`.
    pub fn shift_up(&self, k: u32) -> Self {
        let n = self.truncation() + k;
        let mut s = Self::zero(n);
        for d in k..=n {
            s.coeffs[d as usize] = self.coeffs[(d - k) as usize].clone();
        }
        s
    }

    /// Divides by `t^k`, discarding everything below degree `k`. The result
    /// is known through `truncation - k`.
    pub fn shift_down(&self, k: u32) -> Self {
        let n = self.truncation().saturating_sub(k);
        Self::from_coeffs(self.coeffs.iter().skip(k as usize).cloned(), n)
    }

    /// Cauchy product, truncated at the smaller of the two truncations.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation()) as usize;
        let mut out = Self::zero(n as u32);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.truncation());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `sum_{k >= 0} g^k`, the unique `h` with `h (1 - g) = 1`. This is the
    /// series of the tensor algebra on a graded vector space with series `g`.
    pub fn geometric(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let n = self.coeffs.len();
        let mut h = Self::zero(self.truncation());
        h.coeffs[0] = 1u32.into();
        for k in 1..n {
            let mut acc = BigUint::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &h.coeffs[k - j];
                }
            }
            h.coeffs[k] = acc;
        }
        Ok(h)
    }
}

impl fmt::Display for PoincareSeries {
    /// Degree-indexed table, one `degree  dim` row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.coeffs.iter().map(|c| c.to_str_radix(10).len()).max().unwrap_or(1);
        writeln!(f, "degree  {:>width$}", "dim", width = width.max(3))?;
        for (d, c) in self.table() {
            writeln!(f, "{d:>6}  {:>width$}", c.to_str_radix(10), width = width.max(3))?;
        }
        Ok(())
    }
}

/// Algebra shape of a Borel decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// Tensor product of polynomial algebras `k[x]`.
    Polynomial,
    /// Tensor product of exterior algebras `k[x]/(x^2)`.
    Exterior,
    /// Tensor product of `k[x]/(x^p)`.
    Truncated,
    /// Rational Borel form: polynomial on even generators, exterior on odd.
    RationalMixed,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Polynomial => "polynomial",
            Shape::Exterior => "exterior",
            Shape::Truncated => "truncated",
            Shape::RationalMixed => "rational-mixed",
        }
    }

    /// Height of a degree-`d` generator; `None` means polynomial.
    fn height(self, degree: u32, prime: u32) -> Option<u32> {
        match self {
            Shape::Polynomial => None,
            Shape::Exterior => Some(2),
            Shape::Truncated => Some(prime),
            Shape::RationalMixed if degree % 2 == 0 => None,
            Shape::RationalMixed => Some(2),
        }
    }

    fn check_prime(self, prime: u32) -> Result<(), SeriesError> {
        let ok = match self {
            Shape::RationalMixed => prime == 0,
            Shape::Truncated => prime != 0,
            Shape::Polynomial | Shape::Exterior => true,
        };
        if ok {
            Ok(())
        } else {
            Err(SeriesError::ShapeForPrime {
                shape: self.name(),
                prime,
            })
        }
    }

    /// Away from characteristic 2, graded commutativity ties the generator
    /// parity to the shape.
    fn allows(self, degree: u32, prime: u32) -> bool {
        if prime == 2 {
            return true;
        }
        match self {
            Shape::Polynomial | Shape::Truncated => degree % 2 == 0,
            Shape::Exterior => degree % 2 == 1,
            Shape::RationalMixed => true,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of algebra generators in each positive degree, for a given shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorCounts {
    pub shape: Shape,
    /// 0 for the rationals.
    pub prime: u32,
    /// Degree to count; zero counts are omitted.
    pub counts: BTreeMap<u32, u64>,
}

impl GeneratorCounts {
    pub fn new(shape: Shape, prime: u32) -> Self {
        GeneratorCounts {
            shape,
            prime,
            counts: BTreeMap::new(),
        }
    }

    pub fn count(&self, degree: u32) -> u64 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    pub fn with(mut self, degree: u32, count: u64) -> Self {
        if count > 0 {
            self.counts.insert(degree, count);
        }
        self
    }

    /// Poincaré series of the free algebra of this shape on these generators.
    pub fn series(&self, truncation: u32) -> PoincareSeries {
        let mut s = PoincareSeries::one(truncation);
        for (&d, &c) in &self.counts {
            if d <= truncation {
                s = apply_factor(&s, d, c, self.shape.height(d, self.prime));
            }
        }
        s
    }
}

/// Multiplies `s` by `f(t^d)^count`, where `f(y)` is `1/(1-y)` for
/// `height = None` and `1 + y + ... + y^(height-1)` otherwise.
fn apply_factor(s: &PoincareSeries, d: u32, count: u64, height: Option<u32>) -> PoincareSeries {
    let n = s.truncation();
    let k = n / d;
    let base = match height {
        None => PoincareSeries::from_coeffs((0..=k).map(|_| 1u32), k),
        Some(h) => PoincareSeries::from_coeffs((0..=k).map(|i| u32::from(i < h)), k),
    };
    // binary powering in the variable y = t^d
    let mut power = PoincareSeries::one(k);
    let mut sq = base;
    let mut e = count;
    while e > 0 {
        if e & 1 == 1 {
            power = power.mul(&sq);
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul(&sq);
        }
    }
    let mut spread = PoincareSeries::zero(n);
    for (i, c) in power.coeffs.into_iter().enumerate() {
        spread.coeffs[i * d as usize] = c;
    }
    s.mul(&spread)
}

/// Greedy degree-by-degree inversion of a Poincaré series into generator
/// counts for the declared shape.
///
/// At each degree the count is the gap between the target and the series
/// of the generators found so far; a negative gap means no algebra of this
/// shape has the target series.
pub fn invert_generators(
    target: &PoincareSeries,
    shape: Shape,
    prime: u32,
) -> Result<GeneratorCounts, SeriesError> {
    shape.check_prime(prime)?;
    let one: BigUint = 1u32.into();
    if *target.coeff(0) != one {
        return Err(SeriesError::ConstantTermNotOne);
    }
    let n = target.truncation();
    let mut counts = GeneratorCounts::new(shape, prime);
    let mut partial = PoincareSeries::one(n);
    for d in 1..=n {
        let want = target.coeff(d);
        let have = partial.coeff(d);
        if want < have {
            return Err(SeriesError::Deficit { degree: d });
        }
        let gap = want - have;
        if gap.is_zero() {
            continue;
        }
        if !shape.allows(d, prime) {
            return Err(SeriesError::Parity { degree: d, prime });
        }
        let c = gap.to_u64().ok_or(SeriesError::Overflow { degree: d })?;
        partial = apply_factor(&partial, d, c, shape.height(d, prime));
        counts.counts.insert(d, c);
    }
    debug_assert_eq!(&partial, target);
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(coeffs: &[u64], n: u32) -> PoincareSeries {
        PoincareSeries::from_coeffs(coeffs.iter().copied(), n)
    }

    /// Sum over even degrees starting at `start` with stride `step`.
    fn arithmetic_degrees(start: u32, step: u32, n: u32) -> PoincareSeries {
        let mut s = PoincareSeries::zero(n);
        let mut d = start;
        while d <= n {
            s.set(d, 1u32.into());
            d += step;
        }
        s
    }

    /// Counts ordered sequences of parts drawn from `parts` summing to `m`.
    fn count_compositions(m: u32, parts: &[u32]) -> u64 {
        if m == 0 {
            return 1;
        }
        parts
            .iter()
            .filter(|&&p| p <= m)
            .map(|&p| count_compositions(m - p, parts))
            .sum()
    }

    /// Dimension in degree `m` of the free algebra with the given generator
    /// degrees, where each generator may appear at most `cap - 1` times
    /// (`cap = None`: unbounded). Enumerates exponent vectors directly.
    fn count_monomials(m: u32, gens: &[u32], cap: Option<u32>) -> u64 {
        fn go(m: u32, gens: &[u32], cap: Option<u32>) -> u64 {
            let Some((&g, rest)) = gens.split_first() else {
                return u64::from(m == 0);
            };
            let mut total = 0;
            let mut e = 0;
            while e * g <= m && cap.is_none_or(|c| e < c) {
                total += go(m - e * g, rest, cap);
                e += 1;
            }
            total
        }
        go(m, gens, cap)
    }

    fn expand(counts: &GeneratorCounts) -> Vec<u32> {
        counts
            .counts
            .iter()
            .flat_map(|(&d, &c)| core::iter::repeat_n(d, c as usize))
            .collect()
    }

    #[test]
    fn mul_examples() {
        let a = series(&[1, 0, 1], 8);
        assert_eq!(a.mul(&a), series(&[1, 0, 2, 0, 1], 8));
        assert_eq!(a.mul(&PoincareSeries::one(8)), a);
    }

    #[test]
    fn geometric_times_one_minus_is_one() {
        let n = 20;
        let inv = arithmetic_degrees(0, 2, n); // 1/(1-t^2)
        // multiply by (1 - t^2) through direct convolution over the integers
        for d in 0..=n {
            let c = inv.coeff(d).to_i64().unwrap()
                - if d >= 2 { inv.coeff(d - 2).to_i64().unwrap() } else { 0 };
            assert_eq!(c, i64::from(d == 0));
        }
    }

    #[test]
    fn geometric_of_all_even_degrees() {
        let g = arithmetic_degrees(2, 2, 8);
        let h = g.geometric().unwrap();
        let oracle: Vec<u64> = (0..=8)
            .map(|d| if d % 2 == 0 { count_compositions(d / 2, &[1, 2, 3, 4]) } else { 0 })
            .collect();
        assert_eq!(oracle, vec![1, 0, 1, 0, 2, 0, 4, 0, 8]);
        assert_eq!(h, series(&oracle, 8));
    }

    #[test]
    fn geometric_of_zero_and_partial_spin3_data() {
        assert_eq!(PoincareSeries::zero(6).geometric().unwrap(), PoincareSeries::one(6));
        let g = series(&[0, 0, 1, 0, 0, 0, 1], 8);
        let h = g.geometric().unwrap();
        for d in [0u32, 2, 4, 6, 8] {
            assert_eq!(h.coeff(d).to_u64().unwrap(), count_compositions(d, &[2, 6]));
        }
        assert_eq!(
            [0u32, 2, 4, 6, 8].map(|d| h.coeff(d).to_u64().unwrap()),
            [1, 1, 1, 2, 3]
        );
    }

    #[test]
    fn geometric_rejects_constant_term() {
        assert_eq!(
            PoincareSeries::one(4).geometric(),
            Err(SeriesError::NonzeroConstantTerm)
        );
    }

    #[test]
    fn polynomial_inversion_matches_monomial_count() {
        let n = 12;
        let target = arithmetic_degrees(2, 2, n).geometric().unwrap();
        let counts = invert_generators(&target, Shape::Polynomial, 2).unwrap();
        assert_eq!(
            [2, 4, 6, 8].map(|d| counts.count(d)),
            [1, 1, 2, 3]
        );
        let gens = expand(&counts);
        for d in 0..=n {
            assert_eq!(count_monomials(d, &gens, None), target.coeff(d).to_u64().unwrap());
        }
    }

    #[test]
    fn exterior_inversion_matches_squarefree_count() {
        let n = 12;
        let target = arithmetic_degrees(2, 4, n).geometric().unwrap();
        let counts = invert_generators(&target, Shape::Exterior, 2).unwrap();
        assert_eq!([2, 4, 6, 8].map(|d| counts.count(d)), [1, 1, 1, 2]);
        let gens = expand(&counts);
        for d in 0..=n {
            assert_eq!(count_monomials(d, &gens, Some(2)), target.coeff(d).to_u64().unwrap());
        }
    }

    #[test]
    fn single_polynomial_generator() {
        let target = arithmetic_degrees(0, 6, 24);
        let counts = invert_generators(&target, Shape::Polynomial, 3).unwrap();
        assert_eq!(counts.counts, BTreeMap::from([(6, 1)]));
    }

    #[test]
    fn truncated_inversion() {
        // F_3[x]/(x^3), |x| = 2: 1 + t^2 + t^4
        let target = series(&[1, 0, 1, 0, 1], 10);
        let counts = invert_generators(&target, Shape::Truncated, 3).unwrap();
        assert_eq!(counts.counts, BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn deficit_reports_first_bad_degree() {
        // 1 + 2t^2 cannot be exterior: (1+t^2)^2 has t^4 too.
        let target = series(&[1, 0, 2], 6);
        assert_eq!(
            invert_generators(&target, Shape::Exterior, 2),
            Err(SeriesError::Deficit { degree: 4 })
        );
    }

    #[test]
    fn parity_and_prime_checks() {
        let target = series(&[1, 1], 4);
        assert_eq!(
            invert_generators(&target, Shape::Polynomial, 3),
            Err(SeriesError::Parity { degree: 1, prime: 3 })
        );
        let all_ones = PoincareSeries::from_coeffs([1u32; 5], 4);
        assert_eq!(
            invert_generators(&all_ones, Shape::Polynomial, 2).unwrap().counts,
            BTreeMap::from([(1, 1)])
        );
        assert_eq!(
            invert_generators(&target, Shape::Polynomial, 2),
            Err(SeriesError::Deficit { degree: 2 })
        );
        assert!(invert_generators(&target, Shape::RationalMixed, 0).is_ok());
        assert!(matches!(
            invert_generators(&target, Shape::RationalMixed, 2),
            Err(SeriesError::ShapeForPrime { .. })
        ));
        assert!(matches!(
            invert_generators(&series(&[2], 4), Shape::Polynomial, 2),
            Err(SeriesError::ConstantTermNotOne)
        ));
    }

    #[test]
    fn display_is_a_table() {
        let text = alloc::format!("{}", series(&[1, 0, 2], 2));
        assert_eq!(text, "degree  dim\n     0    1\n     1    0\n     2    2\n");
    }

    fn arb_series(n: u32) -> impl Strategy<Value = PoincareSeries> {
        prop::collection::vec(0u64..5, n as usize + 1)
            .prop_map(move |v| PoincareSeries::from_coeffs(v, n))
    }

    fn arb_counts() -> impl Strategy<Value = (Shape, u32, BTreeMap<u32, u64>)> {
        (
            prop::sample::select(vec![
                (Shape::Polynomial, 2u32),
                (Shape::Exterior, 2),
                (Shape::Polynomial, 3),
                (Shape::Truncated, 3),
                (Shape::Truncated, 5),
                (Shape::Exterior, 5),
                (Shape::RationalMixed, 0),
            ]),
            prop::collection::btree_map(1u32..=12, 1u64..=3, 0..5),
        )
            .prop_map(|((shape, p), raw)| {
                let counts = raw
                    .into_iter()
                    .filter(|&(d, _)| shape.allows(d, p))
                    .collect();
                (shape, p, counts)
            })
    }

    proptest! {
        #[test]
        fn counts_round_trip((shape, p, raw) in arb_counts()) {
            let counts = GeneratorCounts { shape, prime: p, counts: raw };
            let s = counts.series(16);
            let back = invert_generators(&s, shape, p).unwrap();
            // generators above the truncation are invisible
            let visible: BTreeMap<u32, u64> = counts.counts.clone();
            prop_assert_eq!(back.counts, visible);
        }

        #[test]
        fn geometric_inverts_one_minus(mut g in arb_series(14)) {
            g.set(0, BigUint::zero());
            let h = g.geometric().unwrap();
            for k in 0..=14u32 {
                let mut acc = h.coeff(k).clone();
                let mut sub = BigUint::zero();
                for j in 1..=k {
                    sub += g.coeff(j) * h.coeff(k - j);
                }
                // h_k - sum_j g_j h_{k-j} = [k == 0]
                prop_assert!(acc >= sub);
                acc -= sub;
                prop_assert_eq!(acc, BigUint::from(u32::from(k == 0)));
            }
        }

        #[test]
        fn mul_is_commutative_and_associative(a in arb_series(10), b in arb_series(10), c in arb_series(10)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}

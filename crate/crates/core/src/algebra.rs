//! Finite-type graded-commutative algebras given by generators, each either
//! polynomial or truncated at some height, together with Steenrod data on
//! the generators.
//!
//! Steenrod operations are only ever specified on generators. Everything
//! else follows from instability and the Cartan formula; Adem relations are
//! never consulted.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::AlgebraError;
use crate::field::{Field, Scalar};
use crate::series::PoincareSeries;

/// Exponent vector over the generators, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(generators: usize) -> Self {
        Monomial(vec![0; generators])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Polynomial,
    /// `x^height = 0`.
    Truncated(u32),
}

impl Relation {
    fn max_exponent(self) -> Option<u32> {
        match self {
            Relation::Polynomial => None,
            Relation::Truncated(h) => Some(h - 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub relation: Relation,
}

/// `Sq^i` at `p = 2`; `P^i` and the Bockstein at odd `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SteenrodOp {
    Sq(u32),
    P(u32),
    Bockstein,
}

impl SteenrodOp {
    /// How far the operation raises degree at characteristic `p`.
    pub fn degree_shift(self, p: u32) -> u32 {
        match self {
            SteenrodOp::Sq(i) => i,
            SteenrodOp::P(i) => 2 * i * (p.max(1) - 1),
            SteenrodOp::Bockstein => 1,
        }
    }

    pub fn acts_at(self, p: u32) -> bool {
        match self {
            SteenrodOp::Sq(_) => p == 2,
            SteenrodOp::P(_) | SteenrodOp::Bockstein => p > 2,
        }
    }

    pub(crate) fn check(self, p: u32) -> Result<(), AlgebraError> {
        if self.acts_at(p) {
            Ok(())
        } else {
            Err(AlgebraError::OperationForPrime {
                op: format!("{self}"),
                prime: p,
            })
        }
    }

    /// The index of `Sq^i` / `P^i`; `None` for the Bockstein.
    pub fn index(self) -> Option<u32> {
        match self {
            SteenrodOp::Sq(i) | SteenrodOp::P(i) => Some(i),
            SteenrodOp::Bockstein => None,
        }
    }

    /// `Sq^i` or `P^i` depending on the prime.
    pub fn power(p: u32, i: u32) -> Self {
        if p == 2 {
            SteenrodOp::Sq(i)
        } else {
            SteenrodOp::P(i)
        }
    }
}

impl fmt::Display for SteenrodOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SteenrodOp::Sq(i) => write!(f, "Sq^{i}"),
            SteenrodOp::P(i) => write!(f, "P^{i}"),
            SteenrodOp::Bockstein => write!(f, "beta"),
        }
    }
}

/// Homogeneous element, stored as a sparse map from monomials to nonzero
/// coefficients. Monomials beyond the presentation's truncation are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Class {
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Class {
    pub fn zero(degree: u32) -> Self {
        Class {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                let sum = &*cur + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *cur = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Class) -> Class {
        assert_eq!(self.degree, other.degree, "adding classes of different degree");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Class {
        let mut out = Class::zero(self.degree);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn neg(&self) -> Class {
        let mut out = Class::zero(self.degree);
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), -a);
        }
        out
    }

    pub fn sub(&self, other: &Class) -> Class {
        self.add(&other.neg())
    }
}

/// Steenrod table of one generator: `Sq^i` (or `P^i`) values and the
/// Bockstein.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct GeneratorTable {
    powers: BTreeMap<u32, Class>,
    bockstein: Option<Class>,
}

/// A presentation of `H^*(B)`: generators with relations and Steenrod
/// tables, truncated at a fixed degree. Monomial bases are computed once at
/// construction for every degree up to the truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    field: Field,
    generators: Vec<Generator>,
    tables: Vec<GeneratorTable>,
    truncation: u32,
    bases: Vec<Vec<Monomial>>,
}

pub struct PresentationBuilder {
    field: Field,
    truncation: u32,
    generators: Vec<Generator>,
    entries: Vec<(usize, SteenrodOp, Class)>,
}

impl PresentationBuilder {
    pub fn generator(mut self, name: &str, degree: u32, relation: Relation) -> Self {
        self.generators.push(Generator {
            name: name.into(),
            degree,
            relation,
        });
        self
    }

    /// Declares `op(generator) = value`.
    pub fn steenrod(mut self, generator: usize, op: SteenrodOp, value: Class) -> Self {
        self.entries.push((generator, op, value));
        self
    }

    /// Builds a class over the generators declared so far.
    pub fn class(&self, degree: u32, terms: &[(&[u32], i64)]) -> Result<Class, AlgebraError> {
        class_from_terms(self.field, &self.generators, degree, terms)
    }

    pub fn build(self) -> Result<AlgebraPresentation, AlgebraError> {
        let p = self.field.characteristic();
        let mut generators = self.generators;
        for g in generators.iter_mut() {
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegreeGenerator(g.name.clone()));
            }
            if let Relation::Truncated(h) = g.relation {
                if h < 2 {
                    return Err(AlgebraError::BadHeight(g.name.clone()));
                }
            }
            // odd classes square to zero away from characteristic 2
            if p != 2 && g.degree % 2 == 1 {
                g.relation = Relation::Truncated(2);
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }

        let mut tables = vec![GeneratorTable::default(); generators.len()];
        for (j, op, value) in self.entries {
            let g = generators.get(j).ok_or(AlgebraError::UnknownGenerator(j))?;
            op.check(p)?;
            let fixed = match op {
                SteenrodOp::Sq(i) => i == 0 || i >= g.degree,
                SteenrodOp::P(i) => i == 0 || 2 * i >= g.degree,
                SteenrodOp::Bockstein => false,
            };
            if fixed {
                return Err(AlgebraError::InstabilityOverride {
                    op: format!("{op}"),
                    generator: g.name.clone(),
                });
            }
            let expected = g.degree + op.degree_shift(p);
            if value.degree != expected {
                return Err(AlgebraError::DegreeMismatch {
                    expected,
                    found: value.degree,
                });
            }
            check_class(self.field, &generators, &value)?;
            match op.index() {
                Some(i) => {
                    tables[j].powers.insert(i, value);
                }
                None => tables[j].bockstein = Some(value),
            }
        }

        let bases = (0..=self.truncation)
            .map(|d| enumerate_basis(&generators, d))
            .collect();
        Ok(AlgebraPresentation {
            field: self.field,
            generators,
            tables,
            truncation: self.truncation,
            bases,
        })
    }
}

fn monomial_degree(generators: &[Generator], m: &Monomial) -> u32 {
    m.0.iter().zip(generators).map(|(&e, g)| e * g.degree).sum()
}

fn check_monomial(generators: &[Generator], m: &Monomial) -> Result<(), AlgebraError> {
    if m.0.len() != generators.len() {
        return Err(AlgebraError::MonomialLength {
            expected: generators.len(),
            found: m.0.len(),
        });
    }
    Ok(())
}

fn check_class(field: Field, generators: &[Generator], c: &Class) -> Result<(), AlgebraError> {
    for (m, s) in &c.terms {
        check_monomial(generators, m)?;
        let d = monomial_degree(generators, m);
        if d != c.degree {
            return Err(AlgebraError::DegreeMismatch {
                expected: c.degree,
                found: d,
            });
        }
        assert_eq!(s.field(), field);
    }
    Ok(())
}

fn class_from_terms(
    field: Field,
    generators: &[Generator],
    degree: u32,
    terms: &[(&[u32], i64)],
) -> Result<Class, AlgebraError> {
    let mut c = Class::zero(degree);
    for &(exps, coeff) in terms {
        let m = Monomial(exps.to_vec());
        check_monomial(generators, &m)?;
        let d = monomial_degree(generators, &m);
        if d != degree {
            return Err(AlgebraError::DegreeMismatch {
                expected: degree,
                found: d,
            });
        }
        if exceeds_height(generators, &m) {
            continue;
        }
        c.add_term(m, field.from_i64(coeff));
    }
    Ok(c)
}

fn exceeds_height(generators: &[Generator], m: &Monomial) -> bool {
    m.0.iter()
        .zip(generators)
        .any(|(&e, g)| g.relation.max_exponent().is_some_and(|h| e > h))
}

/// All exponent vectors of total degree `d`, lexicographically descending.
fn enumerate_basis(generators: &[Generator], d: u32) -> Vec<Monomial> {
    fn go(gens: &[Generator], idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == gens.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let g = &gens[idx];
        let mut top = left / g.degree;
        if let Some(h) = g.relation.max_exponent() {
            top = top.min(h);
        }
        for e in (0..=top).rev() {
            cur.push(e);
            go(gens, idx + 1, left - e * g.degree, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(generators, 0, d, &mut Vec::with_capacity(generators.len()), &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum OpKey {
    Power(u32),
    Bockstein,
}

impl AlgebraPresentation {
    pub fn builder(field: Field, truncation: u32) -> PresentationBuilder {
        PresentationBuilder {
            field,
            truncation,
            generators: Vec::new(),
            entries: Vec::new(),
        }
    }

    /// The ground field `k` itself: no generators.
    pub fn point(field: Field, truncation: u32) -> Self {
        Self::builder(field, truncation)
            .build()
            .expect("empty presentation is valid")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn prime(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn class(&self, degree: u32, terms: &[(&[u32], i64)]) -> Result<Class, AlgebraError> {
        class_from_terms(self.field, &self.generators, degree, terms)
    }

    pub fn one(&self) -> Class {
        self.monomial_class(Monomial::one(self.generators.len()))
    }

    pub fn generator_class(&self, j: usize) -> Class {
        let mut e = vec![0; self.generators.len()];
        e[j] = 1;
        self.monomial_class(Monomial(e))
    }

    /// The class of a single monomial with coefficient 1, or zero if the
    /// monomial violates a truncation relation.
    pub fn monomial_class(&self, m: Monomial) -> Class {
        let d = self.monomial_degree(&m);
        let mut c = Class::zero(d);
        if !exceeds_height(&self.generators, &m) {
            c.add_term(m, self.field.one());
        }
        c
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        monomial_degree(&self.generators, m)
    }

    /// Basis of the degree-`d` part, graded-lexicographic (descending
    /// exponent vectors in declaration order).
    pub fn monomial_basis(&self, d: u32) -> Result<&[Monomial], AlgebraError> {
        self.bases
            .get(d as usize)
            .map(Vec::as_slice)
            .ok_or(AlgebraError::BeyondTruncation {
                degree: d,
                truncation: self.truncation,
            })
    }

    pub fn dim(&self, d: u32) -> Result<usize, AlgebraError> {
        self.monomial_basis(d).map(<[Monomial]>::len)
    }

    pub fn poincare_series(&self, truncation: u32) -> Result<PoincareSeries, AlgebraError> {
        if truncation > self.truncation {
            return Err(AlgebraError::BeyondTruncation {
                degree: truncation,
                truncation: self.truncation,
            });
        }
        Ok(PoincareSeries::from_coeffs(
            self.bases.iter().map(|b| b.len() as u64),
            truncation,
        ))
    }

    /// Coordinates of `c` in the monomial basis of its degree.
    pub fn coordinates(&self, c: &Class) -> Result<Vec<Scalar>, AlgebraError> {
        let basis = self.monomial_basis(c.degree)?;
        Ok(basis
            .iter()
            .map(|m| c.coeff(m).cloned().unwrap_or_else(|| self.field.zero()))
            .collect())
    }

    /// Product of monomials with its Koszul sign; `None` if it vanishes.
    fn monomial_product(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, Scalar)> {
        let mut e = Vec::with_capacity(a.0.len());
        for ((&x, &y), g) in a.0.iter().zip(&b.0).zip(&self.generators) {
            let s = x + y;
            if g.relation.max_exponent().is_some_and(|h| s > h) {
                return None;
            }
            e.push(s);
        }
        // Moving each factor of `b` left past the later generators of `a`.
        let mut swaps = 0u64;
        if self.prime() != 2 {
            for j in 0..b.0.len() {
                if b.0[j] == 0 || self.generators[j].degree % 2 == 0 {
                    continue;
                }
                for i in (j + 1)..a.0.len() {
                    if self.generators[i].degree % 2 == 1 {
                        swaps += u64::from(a.0[i]) * u64::from(b.0[j]);
                    }
                }
            }
        }
        Some((Monomial(e), self.field.sign(swaps)))
    }

    /// Graded-commutative product.
    pub fn multiply(&self, a: &Class, b: &Class) -> Class {
        let mut out = Class::zero(a.degree + b.degree);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((m, sign)) = self.monomial_product(ma, mb) {
                    out.add_term(m, &(ca * cb) * &sign);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &Class, k: u32) -> Class {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, a);
        }
        acc
    }

    /// Value of `Sq^i` / `P^i` on generator `j`, using the table below the
    /// unstable range and instability at and above it.
    fn generator_power(&self, j: usize, i: u32) -> Class {
        let g = &self.generators[j];
        let p = self.prime();
        let target = g.degree + SteenrodOp::power(p, i).degree_shift(p);
        if i == 0 {
            return self.generator_class(j);
        }
        let top = if p == 2 { g.degree } else { g.degree / 2 };
        let exact_top = if p == 2 { true } else { g.degree % 2 == 0 };
        if i < top || (i == top && !exact_top) {
            return self.tables[j].powers.get(&i).cloned().unwrap_or_else(|| Class::zero(target));
        }
        if i == top {
            return self.pow(&self.generator_class(j), p);
        }
        Class::zero(target)
    }

    fn generator_bockstein(&self, j: usize) -> Class {
        self.tables[j]
            .bockstein
            .clone()
            .unwrap_or_else(|| Class::zero(self.generators[j].degree + 1))
    }

    /// Applies a Steenrod operation, extended from the generator tables by
    /// the Cartan formula. The Bockstein acts as a graded derivation.
    pub fn steenrod(&self, op: SteenrodOp, c: &Class) -> Result<Class, AlgebraError> {
        let p = self.prime();
        op.check(p)?;
        let key = match op.index() {
            Some(i) => OpKey::Power(i),
            None => OpKey::Bockstein,
        };
        let mut memo = BTreeMap::new();
        let mut out = Class::zero(c.degree + op.degree_shift(p));
        for (m, s) in &c.terms {
            let v = self.op_on_monomial(key, m, &mut memo);
            out = out.add(&v.scale(s));
        }
        Ok(out)
    }

    fn op_on_monomial(
        &self,
        key: OpKey,
        m: &Monomial,
        memo: &mut BTreeMap<(OpKey, Monomial), Class>,
    ) -> Class {
        if let Some(c) = memo.get(&(key, m.clone())) {
            return c.clone();
        }
        let p = self.prime();
        let degree = self.monomial_degree(m);
        let result = match m.0.iter().position(|&e| e > 0) {
            None => match key {
                OpKey::Power(0) => self.one(),
                OpKey::Power(i) => Class::zero(SteenrodOp::power(p, i).degree_shift(p)),
                OpKey::Bockstein => Class::zero(1),
            },
            Some(j) => {
                let mut rest = m.clone();
                rest.0[j] -= 1;
                let g = self.generator_class(j);
                match key {
                    OpKey::Power(k) => {
                        let shift = SteenrodOp::power(p, k).degree_shift(p);
                        let mut acc = Class::zero(degree + shift);
                        for i in 0..=k {
                            let left = self.generator_power(j, i);
                            if left.is_zero() {
                                continue;
                            }
                            let right = self.op_on_monomial(OpKey::Power(k - i), &rest, memo);
                            acc = acc.add(&self.multiply(&left, &right));
                        }
                        acc
                    }
                    OpKey::Bockstein => {
                        let first = self.multiply(&self.generator_bockstein(j), &self.monomial_class(rest.clone()));
                        let tail = self.op_on_monomial(OpKey::Bockstein, &rest, memo);
                        let second = self
                            .multiply(&g, &tail)
                            .scale(&self.field.sign(u64::from(self.generators[j].degree)));
                        first.add(&second)
                    }
                }
            }
        };
        memo.insert((key, m.clone()), result.clone());
        result
    }

    /// True when every generator is polynomial; away from characteristic 2
    /// odd-degree generators also count as nilpotent.
    pub fn is_nilpotent_free(&self) -> bool {
        self.generators.iter().all(|g| {
            g.relation == Relation::Polynomial && (self.prime() == 2 || g.degree % 2 == 0)
        })
    }

    /// Human-readable form such as `x^2*y + 2*y^3`.
    pub fn format_class(&self, c: &Class) -> String {
        if c.is_zero() {
            return "0".into();
        }
        let basis_order: Vec<&Monomial> = match self.monomial_basis(c.degree) {
            Ok(b) => b.iter().filter(|m| c.terms.contains_key(*m)).collect(),
            Err(_) => c.terms.keys().rev().collect(),
        };
        let mut parts = Vec::new();
        for m in basis_order {
            let coeff = &c.terms[m];
            let mono = self.format_monomial(m);
            parts.push(match (coeff.is_one(), m.is_one()) {
                (true, _) => mono,
                (false, true) => format!("{coeff}"),
                (false, false) => format!("{coeff}*{mono}"),
            });
        }
        parts.join(" + ")
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let factors: Vec<String> = m
            .0
            .iter()
            .zip(&self.generators)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
            .collect();
        if factors.is_empty() {
            "1".into()
        } else {
            factors.join("*")
        }
    }
}

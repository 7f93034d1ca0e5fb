//! Normalized bar complex of `H̃^*(M)`: words, differential, Tor, the
//! deconcatenation coproduct, the shuffle product and letterwise Steenrod
//! operations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::algebra::{Monomial, SteenrodOp};
use crate::error::{BarError, FieldError};
use crate::field::{homology_dim, Field, Matrix, Scalar, SparseVec};
use crate::thom::{ThomClass, ThomModule};

/// A basis element `x·u` of `H̃^*(M)`, `x` a base monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    degree: u32,
    monomial: Monomial,
}

impl Letter {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }
}

// Degree first, then the basis order of the base (descending exponents).
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.monomial.cmp(&self.monomial))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `[a_1|...|a_s]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarWord(Vec<Letter>);

impl BarWord {
    pub fn empty() -> Self {
        BarWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn length(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn internal_degree(&self) -> u32 {
        self.0.iter().map(|l| l.degree).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.internal_degree() - self.length()
    }

    pub fn concat(&self, other: &BarWord) -> BarWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BarWord(v)
    }
}

/// Linear combination of words in one bidegree `(-s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarElement {
    s: u32,
    t: u32,
    terms: BTreeMap<BarWord, Scalar>,
}

impl BarElement {
    pub fn zero(s: u32, t: u32) -> Self {
        BarElement {
            s,
            t,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(w: BarWord, field: Field) -> Self {
        let mut e = BarElement::zero(w.length(), w.internal_degree());
        e.add_term(w, field.one());
        e
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.s, self.t)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BarWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &BarWord) -> Option<&Scalar> {
        self.terms.get(w)
    }

    pub fn add_term(&mut self, w: BarWord, c: Scalar) {
        add_into(&mut self.terms, w, c);
    }

    pub fn add(&self, other: &BarElement) -> BarElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> BarElement {
        let mut out = BarElement::zero(self.s, self.t);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a * c);
        }
        out
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Scalar>, k: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(cur) => {
            let sum = &*cur + &c;
            if sum.is_zero() {
                map.remove(&k);
            } else {
                *cur = sum;
            }
        }
        None => {
            map.insert(k, c);
        }
    }
}

/// Element of `B ⊗ B`, not necessarily homogeneous.
pub type Tensor = BTreeMap<(BarWord, BarWord), Scalar>;

/// `ψ[a_1|...|a_s] = Σ_i [a_1|...|a_i] ⊗ [a_{i+1}|...|a_s]`.
pub fn coproduct(w: &BarWord) -> Vec<(BarWord, BarWord)> {
    (0..=w.0.len())
        .map(|i| (BarWord(w.0[..i].to_vec()), BarWord(w.0[i..].to_vec())))
        .collect()
}

pub fn coproduct_element(e: &BarElement) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in &e.terms {
        for pair in coproduct(w) {
            add_into(&mut out, pair, c.clone());
        }
    }
    out
}

/// Signed sum over `(r, s)`-shuffles. Each inversion between a letter of
/// `w1` and a letter of `w2` contributes the product of their shifted
/// degrees.
pub fn shuffle(w1: &BarWord, w2: &BarWord, field: Field) -> BarElement {
    let mut out = BarElement::zero(w1.length() + w2.length(), w1.internal_degree() + w2.internal_degree());
    let mut cur = Vec::with_capacity(w1.0.len() + w2.0.len());
    shuffle_into(&w1.0, &w2.0, 0, &mut cur, field, &mut out);
    out
}

fn shuffle_into(
    a: &[Letter],
    b: &[Letter],
    sign: u64,
    cur: &mut Vec<Letter>,
    field: Field,
    out: &mut BarElement,
) {
    if a.is_empty() || b.is_empty() {
        let mut w = cur.clone();
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        out.add_term(BarWord(w), field.sign(sign));
        return;
    }
    cur.push(a[0].clone());
    shuffle_into(&a[1..], b, sign, cur, field, out);
    cur.pop();
    // b[0] jumps over every remaining letter of a
    let jump: u64 = a
        .iter()
        .map(|l| u64::from(l.degree + 1) * u64::from(b[0].degree + 1))
        .sum();
    cur.push(b[0].clone());
    shuffle_into(a, &b[1..], sign + jump, cur, field, out);
    cur.pop();
}

pub fn shuffle_elements(x: &BarElement, y: &BarElement, field: Field) -> BarElement {
    let mut out = BarElement::zero(x.s + y.s, x.t + y.t);
    for (w1, c1) in &x.terms {
        for (w2, c2) in &y.terms {
            let c = c1 * c2;
            for (w, s) in shuffle(w1, w2, field).terms {
                out.add_term(w, &s * &c);
            }
        }
    }
    out
}

/// `(x1 ⊗ x2)(y1 ⊗ y2) = (-1)^{|x2||y1|} (x1 ⧢ y1) ⊗ (x2 ⧢ y2)` with total
/// degrees.
pub fn tensor_shuffle(a: &Tensor, b: &Tensor, field: Field) -> Tensor {
    let mut out = Tensor::new();
    for ((x1, x2), ca) in a {
        for ((y1, y2), cb) in b {
            let sign = field.sign(u64::from(x2.total_degree()) * u64::from(y1.total_degree()));
            let c = &(ca * cb) * &sign;
            let left = shuffle(x1, y1, field);
            let right = shuffle(x2, y2, field);
            for (l, cl) in &left.terms {
                for (r, cr) in &right.terms {
                    add_into(&mut out, (l.clone(), r.clone()), &(cl * cr) * &c);
                }
            }
        }
    }
    out
}

/// The bar complex of one Thom module, valid for internal degrees up to
/// `max_t` (the base truncation plus `n`).
pub struct BarComplex<'a> {
    module: &'a ThomModule,
    max_t: u32,
}

impl<'a> BarComplex<'a> {
    pub fn new(module: &'a ThomModule) -> Self {
        BarComplex {
            module,
            max_t: module.base().truncation() + module.n(),
        }
    }

    pub fn module(&self) -> &ThomModule {
        self.module
    }

    pub fn field(&self) -> Field {
        self.module.field()
    }

    pub fn max_t(&self) -> u32 {
        self.max_t
    }

    /// The letter `x·u`, `x` a base monomial.
    pub fn letter(&self, monomial: Monomial) -> Letter {
        Letter {
            degree: self.module.base().monomial_degree(&monomial) + self.module.n(),
            monomial,
        }
    }

    pub fn word(&self, monomials: &[Monomial]) -> BarWord {
        BarWord(monomials.iter().map(|m| self.letter(m.clone())).collect())
    }

    /// Length-`s` words of internal degree `t`, sorted.
    pub fn basis(&self, s: u32, t: u32) -> Result<Vec<BarWord>, BarError> {
        if t > self.max_t {
            return Err(BarError::BeyondTruncation { t, max: self.max_t });
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(s as usize);
        self.enumerate(s, t, &mut cur, &mut out);
        Ok(out)
    }

    fn enumerate(&self, s: u32, t: u32, cur: &mut Vec<Letter>, out: &mut Vec<BarWord>) {
        let n = self.module.n();
        if s == 0 {
            if t == 0 {
                out.push(BarWord(cur.clone()));
            }
            return;
        }
        if t < s * n {
            return;
        }
        let top = t - (s - 1) * n;
        for d in n..=top {
            let basis = self
                .module
                .base()
                .monomial_basis(d - n)
                .expect("letter degree within truncation");
            for m in basis {
                cur.push(Letter {
                    degree: d,
                    monomial: m.clone(),
                });
                self.enumerate(s - 1, t - d, cur, out);
                cur.pop();
            }
        }
    }

    fn letter_class(&self, l: &Letter) -> ThomClass {
        self.module.thom_class(self.module.base().monomial_class(l.monomial.clone()))
    }

    fn expand(&self, c: &ThomClass) -> Vec<(Letter, Scalar)> {
        c.base_part()
            .terms()
            .map(|(m, s)| (self.letter(m.clone()), s.clone()))
            .collect()
    }

    /// `d[a_1|...|a_s] = Σ (-1)^{ε_i} [a_1|...|a_i a_{i+1}|...|a_s]`,
    /// `ε_i = Σ_{j≤i} (|a_j| - 1) + 1`.
    pub fn differential(&self, w: &BarWord) -> BarElement {
        let s = w.length();
        let t = w.internal_degree();
        let mut out = BarElement::zero(s.saturating_sub(1), t);
        let mut eps = 1u64;
        for i in 0..w.0.len().saturating_sub(1) {
            eps += u64::from(w.0[i].degree - 1);
            let prod = self
                .module
                .thom_product(&self.letter_class(&w.0[i]), &self.letter_class(&w.0[i + 1]));
            let sign = self.field().sign(eps);
            for (l, c) in self.expand(&prod) {
                let mut letters = Vec::with_capacity(w.0.len() - 1);
                letters.extend_from_slice(&w.0[..i]);
                letters.push(l);
                letters.extend_from_slice(&w.0[i + 2..]);
                out.add_term(BarWord(letters), &c * &sign);
            }
        }
        out
    }

    pub fn differential_element(&self, e: &BarElement) -> BarElement {
        let mut out = BarElement::zero(e.s.saturating_sub(1), e.t);
        for (w, c) in &e.terms {
            out = out.add(&self.differential(w).scale(c));
        }
        out
    }

    /// Matrix of `d: (-s, t) → (-s+1, t)` in the sorted word bases; columns
    /// index the source.
    pub fn differential_matrix(&self, s: u32, t: u32) -> Result<Matrix, BarError> {
        let source = self.basis(s, t)?;
        let target = if s == 0 { Vec::new() } else { self.basis(s - 1, t)? };
        let mut m = Matrix::zero(self.field(), target.len(), source.len());
        for (j, w) in source.iter().enumerate() {
            for (v, c) in self.differential(w).terms {
                let i = target
                    .binary_search(&v)
                    .expect("differential lands in the word basis");
                m.add_to(i, j, &c);
            }
        }
        Ok(m)
    }

    /// Columns of [`Self::differential_matrix`] as sparse vectors.
    pub fn differential_columns(&self, s: u32, t: u32) -> Result<Vec<SparseVec>, BarError> {
        let source = self.basis(s, t)?;
        let target = if s == 0 { Vec::new() } else { self.basis(s - 1, t)? };
        Ok(source
            .iter()
            .map(|w| {
                let mut col: SparseVec = self
                    .differential(w)
                    .terms
                    .into_iter()
                    .map(|(v, c)| {
                        let i = target.binary_search(&v).expect("differential lands in the word basis");
                        (i, c)
                    })
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect())
    }

    /// `dim Tor^{s,t}` as bar homology at `(-s, t)`.
    pub fn tor_dim(&self, s: u32, t: u32) -> Result<usize, BarError> {
        let d_in = self.differential_matrix(s + 1, t)?;
        let d_out = self.differential_matrix(s, t)?;
        homology_dim(&d_in, &d_out).map_err(|e| match e {
            FieldError::NonzeroComposite => BarError::BrokenDifferential { s, t },
            other => panic!("bar matrices are built to compose: {other}"),
        })
    }

    /// Letterwise Cartan distribution of `Sq^k` / `P^k`.
    pub fn steenrod_bar(&self, op: SteenrodOp, w: &BarWord) -> Result<BarElement, BarError> {
        if !self.module.euler().is_zero() {
            return Err(BarError::NonzeroEuler);
        }
        let p = self.module.prime();
        let k = match op.index() {
            Some(k) => k,
            None => return Err(BarError::UnsupportedOperation(format!("{op}"))),
        };
        op.check(p).map_err(|e| BarError::Thom(e.into()))?;
        let shift = |i: u32| SteenrodOp::power(p, i).degree_shift(p);
        // images[letter][i] = op_i(letter), expanded into letters
        let mut images = Vec::with_capacity(w.0.len());
        for l in &w.0 {
            let mut row = Vec::with_capacity(k as usize + 1);
            for i in 0..=k {
                let img = self
                    .module
                    .steenrod_thom(SteenrodOp::power(p, i), &self.letter_class(l))?;
                row.push(self.expand(&img));
            }
            images.push(row);
        }
        let mut out = BarElement::zero(w.length(), w.internal_degree() + shift(k));
        let mut cur = Vec::with_capacity(w.0.len());
        distribute(&images, k, 0, &mut cur, self.field().one(), &mut out);
        Ok(out)
    }

    pub fn steenrod_element(&self, op: SteenrodOp, e: &BarElement) -> Result<BarElement, BarError> {
        let p = self.module.prime();
        let mut out = BarElement::zero(e.s, e.t + op.degree_shift(p));
        for (w, c) in &e.terms {
            out = out.add(&self.steenrod_bar(op, w)?.scale(c));
        }
        Ok(out)
    }

    pub fn format_letter(&self, l: &Letter) -> String {
        if l.monomial.is_one() {
            "u".into()
        } else {
            format!("{}*u", self.module.base().format_monomial(&l.monomial))
        }
    }

    pub fn format_word(&self, w: &BarWord) -> String {
        let parts: Vec<String> = w.0.iter().map(|l| self.format_letter(l)).collect();
        format!("[{}]", parts.join("|"))
    }
}

fn distribute(
    images: &[Vec<Vec<(Letter, Scalar)>>],
    left: u32,
    idx: usize,
    cur: &mut Vec<Letter>,
    coeff: Scalar,
    out: &mut BarElement,
) {
    if idx == images.len() {
        if left == 0 {
            out.add_term(BarWord(cur.clone()), coeff);
        }
        return;
    }
    let last = idx + 1 == images.len();
    for i in 0..=left {
        if last && i != left {
            continue;
        }
        for (l, c) in &images[idx][i as usize] {
            cur.push(l.clone());
            distribute(images, left - i, idx + 1, cur, &coeff * c, out);
            cur.pop();
        }
    }
}

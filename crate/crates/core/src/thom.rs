//! Reduced cohomology of a Thom space as a rank-one module over the base,
//! and the cohomology of the sphere bundle with its quadratic relation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{AlgebraPresentation, Class, SteenrodOp};
use crate::error::{AlgebraError, ThomError};
use crate::field::Field;

/// The element `x·u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThomClass {
    x: Class,
    n: u32,
}

impl ThomClass {
    pub fn base_part(&self) -> &Class {
        &self.x
    }

    pub fn degree(&self) -> u32 {
        self.x.degree() + self.n
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn add(&self, other: &ThomClass) -> ThomClass {
        ThomClass {
            x: self.x.add(&other.x),
            n: self.n,
        }
    }

    pub fn scale(&self, c: &crate::field::Scalar) -> ThomClass {
        ThomClass {
            x: self.x.scale(c),
            n: self.n,
        }
    }
}

/// `H̃^*(M)`: free of rank one over `H^*(B)` on `u` in degree `n`, with
/// `u^2 = e·u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThomModule {
    base: AlgebraPresentation,
    n: u32,
    euler: Class,
    powers: BTreeMap<u32, Class>,
    bockstein: Option<Class>,
}

impl ThomModule {
    /// Entries absent from `orientation` are zero. `Sq^0 u`, `P^0 u` and the
    /// top operation (`Sq^n u = e·u`, or `P^k u = e^{p-1}·u` when `n = 2k`)
    /// are fixed and may not be given.
    pub fn new(
        base: AlgebraPresentation,
        n: u32,
        euler: Class,
        orientation: Vec<(SteenrodOp, Class)>,
    ) -> Result<Self, ThomError> {
        if n < 2 {
            return Err(ThomError::FiberDimension(n));
        }
        if euler.degree() != n {
            return Err(AlgebraError::DegreeMismatch {
                expected: n,
                found: euler.degree(),
            }
            .into());
        }
        let p = base.prime();
        if p != 2 && n % 2 == 1 && !euler.is_zero() {
            return Err(ThomError::OddOrientationSquare(n));
        }
        let mut powers = BTreeMap::new();
        let mut bockstein = None;
        for (op, value) in orientation {
            op.check(p)?;
            let fixed = |reason| ThomError::OrientationEntry {
                op: format!("{op}"),
                reason,
            };
            match op {
                SteenrodOp::Sq(0) | SteenrodOp::P(0) => return Err(fixed("it is the identity")),
                SteenrodOp::Sq(i) if i == n => return Err(fixed("Sq^n u = e u")),
                SteenrodOp::Sq(i) if i > n => return Err(fixed("instability forces zero")),
                SteenrodOp::P(i) if 2 * i == n => return Err(fixed("P^k u = e^(p-1) u when n = 2k")),
                SteenrodOp::P(i) if 2 * i > n => return Err(fixed("instability forces zero")),
                _ => {}
            }
            let expected = op.degree_shift(p);
            if value.degree() != expected {
                return Err(AlgebraError::DegreeMismatch {
                    expected,
                    found: value.degree(),
                }
                .into());
            }
            match op.index() {
                Some(i) => {
                    powers.insert(i, value);
                }
                None => bockstein = Some(value),
            }
        }
        Ok(ThomModule {
            base,
            n,
            euler,
            powers,
            bockstein,
        })
    }

    pub fn base(&self) -> &AlgebraPresentation {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn prime(&self) -> u32 {
        self.base.prime()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn euler(&self) -> &Class {
        &self.euler
    }

    pub fn thom_class(&self, x: Class) -> ThomClass {
        ThomClass { x, n: self.n }
    }

    /// `u` itself.
    pub fn orientation(&self) -> ThomClass {
        self.thom_class(self.base.one())
    }

    /// `dim H̃^d(M) = dim H^{d-n}(B)`.
    pub fn dim(&self, d: u32) -> Result<usize, AlgebraError> {
        if d < self.n {
            Ok(0)
        } else {
            self.base.dim(d - self.n)
        }
    }

    /// `(x·u)(y·u) = (-1)^{n|y|} x·y·e·u`.
    pub fn thom_product(&self, a: &ThomClass, b: &ThomClass) -> ThomClass {
        let sign = self.field().sign(u64::from(self.n) * u64::from(b.x.degree()));
        let xy = self.base.multiply(&a.x, &b.x);
        let x = self.base.multiply(&xy, &self.euler).scale(&sign);
        self.thom_class(x)
    }

    /// The class `c` with `op(u) = c·u`.
    pub fn orientation_op(&self, op: SteenrodOp) -> Result<Class, ThomError> {
        let p = self.prime();
        op.check(p)?;
        let shift = op.degree_shift(p);
        let table = |i: u32| self.powers.get(&i).cloned().unwrap_or_else(|| Class::zero(shift));
        Ok(match op {
            SteenrodOp::Sq(0) | SteenrodOp::P(0) => self.base.one(),
            SteenrodOp::Sq(i) if i < self.n => table(i),
            SteenrodOp::Sq(i) if i == self.n => self.euler.clone(),
            SteenrodOp::P(i) if 2 * i < self.n => table(i),
            SteenrodOp::P(i) if 2 * i == self.n => self.base.pow(&self.euler, p - 1),
            SteenrodOp::Sq(_) | SteenrodOp::P(_) => Class::zero(shift),
            SteenrodOp::Bockstein => self.bockstein.clone().unwrap_or_else(|| Class::zero(1)),
        })
    }

    /// Cartan expansion of `op(x·u)` through the orientation data.
    pub fn steenrod_thom(&self, op: SteenrodOp, m: &ThomClass) -> Result<ThomClass, ThomError> {
        let p = self.prime();
        op.check(p)?;
        let x = &m.x;
        let out = match op.index() {
            Some(k) => {
                let mut acc = Class::zero(x.degree() + op.degree_shift(p));
                for j in 0..=k {
                    let left = self.base.steenrod(SteenrodOp::power(p, j), x)?;
                    if left.is_zero() {
                        continue;
                    }
                    let right = self.orientation_op(SteenrodOp::power(p, k - j))?;
                    acc = acc.add(&self.base.multiply(&left, &right));
                }
                acc
            }
            None => {
                let bx = self.base.steenrod(SteenrodOp::Bockstein, x)?;
                let bu = self.orientation_op(SteenrodOp::Bockstein)?;
                let sign = self.field().sign(u64::from(x.degree()));
                bx.add(&self.base.multiply(x, &bu).scale(&sign))
            }
        };
        Ok(self.thom_class(out))
    }

    /// `w_{n-1}` at `p = 2`, `W_m` at odd `p` with `n = 2m + 1`.
    pub fn wu_class(&self) -> Result<Class, ThomError> {
        match self.prime() {
            2 => self.orientation_op(SteenrodOp::Sq(self.n - 1)),
            0 => Err(AlgebraError::OperationForPrime {
                op: "Wu class".into(),
                prime: 0,
            }
            .into()),
            _ if self.n % 2 == 1 => self.orientation_op(SteenrodOp::P(self.n / 2)),
            _ => Err(ThomError::WuUndefined(self.n)),
        }
    }

    /// Multiplies `a·v + b` classes using `v^2 = s + t·v`.
    pub fn sphere_mul(&self, massey: &MasseyData, c1: &SphereClass, c2: &SphereClass) -> SphereClass {
        let k = self.n - 1;
        let base = &self.base;
        let field = self.field();
        let degree = c1.degree + c2.degree;
        let mut v_part = if degree >= k { Some(Class::zero(degree - k)) } else { None };
        let mut b_part = base.multiply(&c1.base, &c2.base);

        if let Some(a1) = &c1.v_part {
            if let Some(a2) = &c2.v_part {
                let sign = field.sign(u64::from(k) * u64::from(a2.degree()));
                let a1a2 = base.multiply(a1, a2).scale(&sign);
                b_part = b_part.add(&base.multiply(&a1a2, &massey.s));
                let vt = base.multiply(&a1a2, &massey.t);
                v_part = v_part.map(|c| c.add(&vt));
            }
            let sign = field.sign(u64::from(k) * u64::from(c2.base.degree()));
            let a1b2 = base.multiply(a1, &c2.base).scale(&sign);
            v_part = v_part.map(|c| c.add(&a1b2));
        }
        if let Some(a2) = &c2.v_part {
            let b1a2 = base.multiply(&c1.base, a2);
            v_part = v_part.map(|c| c.add(&b1a2));
        }
        SphereClass {
            degree,
            v_part,
            base: b_part,
        }
    }

    /// `a·v + b ↦ a·u`.
    pub fn delta_star(&self, c: &SphereClass) -> ThomClass {
        match &c.v_part {
            Some(a) => self.thom_class(a.clone()),
            // degree too low for a v-part; the image lands below u
            None => self.thom_class(Class::zero(0)),
        }
    }

    /// Whether `t` agrees with `w_{n-1}`; only meaningful at `p = 2`, `n` odd.
    pub fn massey_consistency(&self, massey: &MasseyData) -> Result<bool, ThomError> {
        if self.prime() != 2 || self.n % 2 == 0 {
            return Err(ThomError::MasseyConsistency {
                prime: self.prime(),
                n: self.n,
            });
        }
        Ok(massey.t == self.wu_class()?)
    }

    /// The canonical generator `v`.
    pub fn sphere_v(&self) -> SphereClass {
        SphereClass::v_multiple(self.base.one(), self.n)
    }

    pub fn sphere_one(&self) -> SphereClass {
        SphereClass::from_base(self.base.one(), self.n)
    }
}

/// `a·v + b` in `H^*(S)`, with `|v| = n - 1`. The `v` coefficient is absent
/// when the degree is below `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SphereClass {
    degree: u32,
    v_part: Option<Class>,
    base: Class,
}

impl SphereClass {
    pub fn new(v_part: Class, base: Class, n: u32) -> Result<Self, ThomError> {
        if v_part.degree() + n - 1 != base.degree() {
            return Err(ThomError::SphereDegrees {
                v_part: v_part.degree(),
                base: base.degree(),
            });
        }
        Ok(SphereClass {
            degree: base.degree(),
            v_part: Some(v_part),
            base,
        })
    }

    pub fn from_base(b: Class, n: u32) -> Self {
        let degree = b.degree();
        SphereClass {
            degree,
            v_part: (degree + 1 >= n).then(|| Class::zero(degree + 1 - n)),
            base: b,
        }
    }

    pub fn v_multiple(a: Class, n: u32) -> Self {
        let degree = a.degree() + n - 1;
        SphereClass {
            degree,
            v_part: Some(a),
            base: Class::zero(degree),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn v_part(&self) -> Option<&Class> {
        self.v_part.as_ref()
    }

    pub fn base_part(&self) -> &Class {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.v_part.as_ref().is_none_or(Class::is_zero)
    }

    pub fn add(&self, other: &SphereClass) -> SphereClass {
        SphereClass {
            degree: self.degree,
            v_part: match (&self.v_part, &other.v_part) {
                (Some(a), Some(b)) => Some(a.add(b)),
                (a, b) => a.clone().or(b.clone()),
            },
            base: self.base.add(&other.base),
        }
    }
}

/// `v^2 = s + t·v` with `|s| = 2n - 2`, `|t| = n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MasseyData {
    pub s: Class,
    pub t: Class,
}

impl MasseyData {
    pub fn new(s: Class, t: Class, n: u32) -> Result<Self, ThomError> {
        for (c, expected) in [(&s, 2 * n - 2), (&t, n - 1)] {
            if c.degree() != expected {
                return Err(AlgebraError::DegreeMismatch {
                    expected,
                    found: c.degree(),
                }
                .into());
            }
        }
        Ok(MasseyData { s, t })
    }
}

/// The relation for `v' = v + w`: `s' = s - wt - w^2`, and `t' = t` for `n`
/// even, `t' = t + 2w` for `n` odd.
pub fn massey_transform(
    base: &AlgebraPresentation,
    n: u32,
    m: &MasseyData,
    w: &Class,
) -> Result<MasseyData, ThomError> {
    if w.degree() != n - 1 {
        return Err(AlgebraError::DegreeMismatch {
            expected: n - 1,
            found: w.degree(),
        }
        .into());
    }
    let s = m.s.sub(&base.multiply(w, &m.t)).sub(&base.multiply(w, w));
    let t = if n % 2 == 1 {
        m.t.add(&w.scale(&base.field().from_i64(2)))
    } else {
        m.t.clone()
    };
    Ok(MasseyData { s, t })
}

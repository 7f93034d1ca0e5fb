//! E_2-term assembly, collapse, classification of `H^*(ΩM)` and the
//! series identities that accompany it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::algebra::SteenrodOp;
use crate::bar::{BarComplex, BarElement, BarWord};
use crate::error::{BarError, EmssError};
use crate::field::{sparse_compose_is_zero, sparse_rank, SparseVec};
use crate::series::{invert_generators, GeneratorCounts, PoincareSeries, Shape};
use crate::thom::ThomModule;

/// The spectral sequence collapses at E_2 when `u^2 = 0`.
pub fn collapse_case(t: &ThomModule) -> bool {
    t.euler().is_zero()
}

/// Base truncation sufficient for every computation bounded by total
/// degree `max_total`: bar words of total degree `N` have internal degree
/// at most `N + N/(n-1)`.
pub fn base_truncation_for(n: u32, max_total: u32) -> u32 {
    max_total + max_total / (n - 1) + 1
}

fn max_internal(n: u32, max_total: u32) -> u32 {
    max_total + max_total / (n - 1)
}

fn require_base(t: &ThomModule, needed: u32) -> Result<(), EmssError> {
    let available = t.base().truncation();
    if needed > available {
        return Err(EmssError::TruncationTooSmall { needed, available });
    }
    Ok(())
}

/// Nonzero `dim E_2^{-s,t}` for total degree `t - s ≤ max_total`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Page {
    pub dims: BTreeMap<(u32, u32), usize>,
    pub collapse: bool,
    pub max_total: u32,
}

impl E2Page {
    /// Bar homology with sparse elimination; each differential is built and
    /// ranked once, and consecutive differentials are checked to compose to
    /// zero.
    pub fn compute(module: &ThomModule, max_total: u32) -> Result<Self, EmssError> {
        let n = module.n();
        require_base(module, max_internal(n, max_total).saturating_sub(n))?;
        let bar = BarComplex::new(module);
        let s_max = max_total / (n - 1);
        let mut dims = BTreeMap::new();
        for t in 0..=max_total + s_max {
            // ranks of d at (s, t) for every s whose groups or whose
            // incoming differential are in range
            let s_lo = t.saturating_sub(max_total).max(1);
            let s_hi = (t / n).min(s_max + 1);
            let mut ranks = BTreeMap::new();
            let mut previous: Option<Vec<SparseVec>> = None;
            for s in s_lo..=s_hi {
                let cols = bar.differential_columns(s, t)?;
                if let Some(outer) = &previous {
                    if !sparse_compose_is_zero(outer, &cols) {
                        return Err(BarError::BrokenDifferential { s: s - 1, t }.into());
                    }
                }
                ranks.insert(s, sparse_rank(cols.iter().cloned()));
                previous = Some(cols);
            }
            for s in t.saturating_sub(max_total)..=s_max.min(t / n) {
                let size = bar.basis(s, t)?.len();
                let rank = |k: u32| ranks.get(&k).copied().unwrap_or(0);
                let d = size - rank(s) - rank(s + 1);
                if d > 0 {
                    dims.insert((s, t), d);
                }
            }
        }
        Ok(E2Page {
            dims,
            collapse: collapse_case(module),
            max_total,
        })
    }

    pub fn dim(&self, s: u32, t: u32) -> usize {
        self.dims.get(&(s, t)).copied().unwrap_or(0)
    }

    /// `Σ_{t-s=k} dim E_2^{-s,t}` as a series in `k`.
    pub fn total_series(&self) -> PoincareSeries {
        let mut coeffs = alloc::vec![0u64; self.max_total as usize + 1];
        for (&(s, t), &d) in &self.dims {
            coeffs[(t - s) as usize] += d as u64;
        }
        PoincareSeries::from_coeffs(coeffs, self.max_total)
    }
}

/// `1/(1 - t^{n-1} P_B(t))` up to `max_total`.
pub fn loop_series(module: &ThomModule, max_total: u32) -> Result<PoincareSeries, EmssError> {
    if !collapse_case(module) {
        return Err(EmssError::NonzeroEuler);
    }
    let shift = module.n() - 1;
    let base_deg = max_total.saturating_sub(shift);
    require_base(module, base_deg)?;
    let pb = module.base().poincare_series(base_deg).map_err(bar_err)?;
    let g = pb.shift_up(shift).truncate(max_total);
    Ok(g.geometric()?)
}

fn bar_err(e: crate::error::AlgebraError) -> EmssError {
    EmssError::Bar(BarError::Thom(e.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColumn {
    /// `t ↦ dim E_2^{-1,t}`, zero entries omitted.
    pub dims: BTreeMap<u32, usize>,
    pub injective: bool,
}

/// Column `s = 1`. Injectivity holds under collapse; otherwise it is
/// claimed only when no group could support a differential into the column.
pub fn edge_column(module: &ThomModule, max_total: u32) -> Result<EdgeColumn, EmssError> {
    Ok(EdgeColumn::of_page(&E2Page::compute(module, max_total)?))
}

impl EdgeColumn {
    pub fn of_page(page: &E2Page) -> Self {
        let dims: BTreeMap<u32, usize> = page
            .dims
            .iter()
            .filter(|(&(s, _), _)| s == 1)
            .map(|(&(_, t), &d)| (t, d))
            .collect();
        let injective = page.collapse
            || dims.keys().all(|&t| {
                // sources of d_r hitting E^{-1,t} sit at s = 1 + r, total degree t - 2
                page.dims.keys().all(|&(s, t2)| s < 3 || t2 - s + 2 != t)
            });
        EdgeColumn { dims, injective }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingReport {
    /// `Σ_{k≥1} Σ^{-k} (t^n P_B)^k`.
    pub tensor_side: PoincareSeries,
    /// `loop_series - 1`.
    pub loop_side: PoincareSeries,
    /// Total-degree dims of the E_2 page, computed by bar homology.
    pub tor_side: PoincareSeries,
    pub holds: bool,
}

/// Graded-dimension form of the stable splitting of `ΩM` into desuspended
/// smash powers of `M`, cross-checked against the E_2 page.
pub fn splitting_check(module: &ThomModule, max_total: u32) -> Result<SplittingReport, EmssError> {
    if !collapse_case(module) {
        return Err(EmssError::NonzeroEuler);
    }
    let n = module.n();
    let top = max_internal(n, max_total);
    require_base(module, top.saturating_sub(n))?;
    let pb = module.base().poincare_series(top.saturating_sub(n)).map_err(bar_err)?;
    let reduced = pb.shift_up(n).truncate(top);

    let mut tensor_side = PoincareSeries::zero(max_total);
    let mut power = PoincareSeries::one(top);
    for k in 1..=max_total / (n - 1) {
        power = power.mul(&reduced);
        tensor_side = tensor_side.add(&power.shift_down(k).truncate(max_total));
    }

    let looped = loop_series(module, max_total)?;
    let mut loop_side = looped.clone();
    loop_side.set(0, 0u32.into());

    let tor_side = E2Page::compute(module, max_total)?.total_series();
    let holds = tensor_side == loop_side && tor_side == looped;
    Ok(SplittingReport {
        tensor_side,
        loop_side,
        tor_side,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Polynomial,
    Exterior,
    PTruncated,
    RationalMixed,
    Unknown,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Polynomial => "polynomial",
            Verdict::Exterior => "exterior",
            Verdict::PTruncated => "p-truncated",
            Verdict::RationalMixed => "rational-mixed",
            Verdict::Unknown => "unknown",
        }
    }

    fn shape(self) -> Option<Shape> {
        match self {
            Verdict::Polynomial => Some(Shape::Polynomial),
            Verdict::Exterior => Some(Shape::Exterior),
            Verdict::PTruncated => Some(Shape::Truncated),
            Verdict::RationalMixed => Some(Shape::RationalMixed),
            Verdict::Unknown => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub prime: u32,
    pub euler_zero: bool,
    /// `None` when the Wu class is undefined (rationals, or odd `p` with
    /// `n` even).
    pub wu_zero: Option<bool>,
    pub nilpotent_free: bool,
    pub n: u32,
    /// Rationally: whether `H̃^*(M; Q)` sits in odd degrees (up to the bound).
    pub odd_concentrated: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub counts: Option<GeneratorCounts>,
    pub max_total: u32,
}

pub fn classify(module: &ThomModule, max_total: u32) -> Result<Classification, EmssError> {
    let p = module.prime();
    let n = module.n();
    let euler_zero = collapse_case(module);
    let nilpotent_free = module.base().is_nilpotent_free();
    let wu_zero = match module.wu_class() {
        Ok(w) => Some(w.is_zero()),
        Err(_) => None,
    };
    let odd_concentrated = if p == 0 {
        let top = module.base().truncation().min(max_total);
        let mut odd = true;
        for k in 0..=top {
            if module.base().dim(k).map_err(bar_err)? > 0 && (k + n) % 2 == 0 {
                odd = false;
            }
        }
        Some(odd)
    } else {
        None
    };
    let evidence = Evidence {
        prime: p,
        euler_zero,
        wu_zero,
        nilpotent_free,
        n,
        odd_concentrated,
    };

    let verdict = if !euler_zero {
        Verdict::Unknown
    } else {
        match (p, wu_zero) {
            (0, _) if odd_concentrated == Some(true) => Verdict::Polynomial,
            (0, _) => Verdict::RationalMixed,
            (2, Some(false)) if nilpotent_free => Verdict::Polynomial,
            (2, Some(true)) => Verdict::Exterior,
            (_, Some(false)) if p != 2 && nilpotent_free => Verdict::Polynomial,
            (_, Some(true)) if p != 2 => Verdict::PTruncated,
            _ => Verdict::Unknown,
        }
    };
    let counts = match verdict.shape() {
        Some(shape) => {
            let target = loop_series(module, max_total)?;
            Some(invert_generators(&target, shape, p)?)
        }
        None => None,
    };
    Ok(Classification {
        verdict,
        evidence,
        counts,
        max_total,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalGlobal {
    /// Polynomial over `Z[S^{-1}]` with this generator table.
    Polynomial {
        excluded: Vec<u32>,
        counts: BTreeMap<u32, u64>,
    },
    NotPolynomial {
        prime: u32,
        verdict: Verdict,
    },
    OddGenerator {
        prime: u32,
        degree: u32,
    },
    Disagreement {
        prime: u32,
        degree: u32,
        expected: u64,
        found: u64,
    },
    Empty,
}

/// Polynomiality over each sampled `F_p` with one shared generator table.
pub fn local_global(results: &[(u32, Classification)], excluded: &[u32]) -> Result<LocalGlobal, EmssError> {
    if let Some(&(p, _)) = results.iter().find(|(p, _)| excluded.contains(p)) {
        return Err(EmssError::ExcludedPrimeSampled(p));
    }
    let mut excluded: Vec<u32> = excluded.to_vec();
    excluded.sort_unstable();
    excluded.dedup();
    let mut common: Option<(u32, BTreeMap<u32, u64>)> = None;
    for (p, c) in results {
        let counts = match (&c.verdict, &c.counts) {
            (Verdict::Polynomial, Some(counts)) => counts.counts.clone(),
            _ => {
                return Ok(LocalGlobal::NotPolynomial {
                    prime: *p,
                    verdict: c.verdict,
                })
            }
        };
        if let Some(&degree) = counts.keys().find(|&&d| d % 2 == 1) {
            return Ok(LocalGlobal::OddGenerator { prime: *p, degree });
        }
        match &common {
            None => common = Some((*p, counts)),
            Some((_, table)) => {
                let degrees = table.keys().chain(counts.keys());
                for &d in degrees {
                    let expected = table.get(&d).copied().unwrap_or(0);
                    let found = counts.get(&d).copied().unwrap_or(0);
                    if expected != found {
                        return Ok(LocalGlobal::Disagreement {
                            prime: *p,
                            degree: d,
                            expected,
                            found,
                        });
                    }
                }
            }
        }
    }
    Ok(match common {
        Some((_, counts)) => LocalGlobal::Polynomial { excluded, counts },
        None => LocalGlobal::Empty,
    })
}

/// For a word `[x_1 u|...|x_l u]`: the operation `Sq^{Σ|x_i| + l(n-1)}`
/// (or `P^{Σ|x_i|/2 + ml}` with `n = 2m + 1`), its value on the word, and
/// the predicted value `[x_1^p W u|...|x_l^p W u]` with `W` the Wu class.
/// `None` when the operation is not defined for this word.
pub fn frobenius_check(
    bar: &BarComplex<'_>,
    word: &BarWord,
) -> Result<Option<(SteenrodOp, BarElement, BarElement)>, EmssError> {
    let module = bar.module();
    let p = module.prime();
    let n = module.n();
    let wu = match module.wu_class() {
        Ok(w) => w,
        Err(_) => return Ok(None),
    };
    let base = module.base();
    let mut index = 0u32;
    for l in word.letters() {
        let k = l.degree() - n;
        if p == 2 {
            index += k + n - 1;
        } else if k % 2 == 0 {
            index += k / 2 + (n - 1) / 2;
        } else {
            return Ok(None);
        }
    }
    let op = SteenrodOp::power(p, index);
    let actual = bar.steenrod_bar(op, word)?;

    let mut expected = BarElement::from_word(BarWord::empty(), bar.field());
    for l in word.letters() {
        let x = base.monomial_class(l.monomial().clone());
        let img = base.multiply(&base.pow(&x, p), &wu);
        let mut letter = BarElement::zero(1, img.degree() + n);
        for (m, c) in img.terms() {
            letter.add_term(bar.word(core::slice::from_ref(m)), c.clone());
        }
        let mut next = BarElement::zero(expected.bidegree().0 + 1, expected.bidegree().1 + letter.bidegree().1);
        for (w1, c1) in expected.terms() {
            for (w2, c2) in letter.terms() {
                next.add_term(w1.concat(w2), c1 * c2);
            }
        }
        expected = next;
    }
    Ok(Some((op, actual, expected)))
}

//! JSON description of a base space, a spherical fibration over it and
//! optional sphere-bundle data.
//!
//! ```json
//! {
//!   "name": "example",
//!   "primes": [2, 3],
//!   "base": {
//!     "generators": [{ "name": "x", "degree": 2 }],
//!     "steenrod": { "3": { "x": { "p": { "1": [[[3], 1]] } } } }
//!   },
//!   "bundle": {
//!     "fiber_dim": 3,
//!     "euler": [],
//!     "orientation": { "2": { "sq": { "2": [[[1], 1]] } }, "3": { "p": { "1": [[[2], 1]] } } }
//!   },
//!   "massey": { "s": [], "t": [[[1], 1]] }
//! }
//! ```
//!
//! Classes are lists of `[exponents, coefficient]`; integer coefficients are
//! reduced into the field. Steenrod tables are keyed first by prime, then
//! (for the base) by generator name, then by operation index.

use std::collections::BTreeMap;
use std::path::Path;

use loopcoh_core::algebra::{AlgebraPresentation, Class, Relation, SteenrodOp};
use loopcoh_core::field::Field;
use loopcoh_core::thom::{MasseyData, ThomModule};
use serde::{Deserialize, Serialize};

use crate::error::SpecError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub name: String,
    #[serde(default)]
    pub primes: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    pub base: BaseSpec,
    pub bundle: BundleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub massey: Option<MasseySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub steenrod: BTreeMap<String, BTreeMap<String, OpTable>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    /// `x^height = 0`; polynomial when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub fiber_dim: u32,
    #[serde(default)]
    pub euler: ClassSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub orientation: BTreeMap<String, OpTable>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MasseySpec {
    pub s: ClassSpec,
    pub t: ClassSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpTable {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sq: BTreeMap<String, ClassSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub p: BTreeMap<String, ClassSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<ClassSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassSpec(pub Vec<(Vec<u32>, i64)>);

impl ClassSpec {
    pub fn zero() -> Self {
        ClassSpec(Vec::new())
    }

    pub fn monomial(exponents: &[u32], coeff: i64) -> Self {
        ClassSpec(vec![(exponents.to_vec(), coeff)])
    }

    pub fn from_class(c: &Class) -> Self {
        ClassSpec(
            c.terms()
                .map(|(m, s)| (m.exponents().to_vec(), s.to_i64().unwrap_or(0)))
                .collect(),
        )
        .canonical()
    }

    fn canonical(&self) -> Self {
        let mut merged: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (e, c) in &self.0 {
            *merged.entry(e.clone()).or_insert(0) += c;
        }
        ClassSpec(merged.into_iter().rev().filter(|(_, c)| *c != 0).collect())
    }

    fn terms(&self) -> Vec<(&[u32], i64)> {
        self.0.iter().map(|(e, c)| (e.as_slice(), *c)).collect()
    }
}

impl OpTable {
    fn canonical(&self) -> Self {
        OpTable {
            sq: self.sq.iter().map(|(k, v)| (k.clone(), v.canonical())).collect(),
            p: self.p.iter().map(|(k, v)| (k.clone(), v.canonical())).collect(),
            beta: self.beta.as_ref().map(ClassSpec::canonical),
        }
    }

    /// The entries that act at `p`, with their JSON paths.
    fn entries(&self, p: u32, path: &str) -> Result<Vec<(SteenrodOp, &ClassSpec, String)>, SpecError> {
        let wrong = |op: &str| SpecError::WrongOperation {
            path: path.to_string(),
            op: op.into(),
            prime: p,
        };
        if p == 2 && (!self.p.is_empty() || self.beta.is_some()) {
            return Err(wrong(if self.p.is_empty() { "beta" } else { "p" }));
        }
        if p != 2 && !self.sq.is_empty() {
            return Err(wrong("sq"));
        }
        let mut out = Vec::new();
        let (key, table) = if p == 2 { ("sq", &self.sq) } else { ("p", &self.p) };
        for (index, class) in table {
            let i: u32 = index.parse().map_err(|_| SpecError::BadIndex {
                path: format!("{path}.{key}"),
                key: index.clone(),
            })?;
            out.push((SteenrodOp::power(p, i), class, format!("{path}.{key}.{index}")));
        }
        if let Some(b) = &self.beta {
            out.push((SteenrodOp::Bockstein, b, format!("{path}.beta")));
        }
        Ok(out)
    }
}

fn prime_key(key: &str, path: &str) -> Result<u32, SpecError> {
    let bad = || SpecError::BadPrimeKey {
        path: path.to_string(),
        key: key.to_string(),
    };
    let p: u32 = key.parse().map_err(|_| bad())?;
    if p == 0 || !loopcoh_core::field::is_prime(p) {
        return Err(bad());
    }
    Ok(p)
}

impl SpaceSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: SpaceSpec = serde_path_to_error::deserialize(de).map_err(|e| SpecError::Json {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Sorted primes, merged and sorted class terms.
    pub fn canonical(&self) -> Self {
        let mut primes = self.primes.clone();
        primes.sort_unstable();
        primes.dedup();
        SpaceSpec {
            name: self.name.clone(),
            primes,
            max_degree: self.max_degree,
            base: BaseSpec {
                generators: self.base.generators.clone(),
                steenrod: self
                    .base
                    .steenrod
                    .iter()
                    .map(|(p, t)| (p.clone(), t.iter().map(|(g, o)| (g.clone(), o.canonical())).collect()))
                    .collect(),
            },
            bundle: BundleSpec {
                fiber_dim: self.bundle.fiber_dim,
                euler: self.bundle.euler.canonical(),
                orientation: self
                    .bundle
                    .orientation
                    .iter()
                    .map(|(p, o)| (p.clone(), o.canonical()))
                    .collect(),
            },
            massey: self.massey.as_ref().map(|m| MasseySpec {
                s: m.s.canonical(),
                t: m.t.canonical(),
            }),
        }
    }

    /// Builds every listed prime and every prime that has tables.
    fn validate(&self) -> Result<(), SpecError> {
        let mut primes = self.primes.clone();
        for key in self.base.steenrod.keys() {
            primes.push(prime_key(key, "base.steenrod")?);
        }
        for key in self.bundle.orientation.keys() {
            primes.push(prime_key(key, "bundle.orientation")?);
        }
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            let module = self.module(p, 0)?;
            if let Some(m) = self.massey_data(&module) {
                m?;
            }
        }
        Ok(())
    }

    pub fn presentation(&self, p: u32, truncation: u32) -> Result<AlgebraPresentation, SpecError> {
        let field = Field::new(p)?;
        let mut b = AlgebraPresentation::builder(field, truncation);
        for g in &self.base.generators {
            let relation = match g.height {
                None => Relation::Polynomial,
                Some(h) => Relation::Truncated(h),
            };
            b = b.generator(&g.name, g.degree, relation);
        }
        if p != 0 {
            if let Some(table) = self.base.steenrod.get(&p.to_string()) {
                for (name, ops) in table {
                    let path = format!("base.steenrod.{p}.{name}");
                    let (j, g) = self
                        .base
                        .generators
                        .iter()
                        .enumerate()
                        .find(|(_, g)| &g.name == name)
                        .ok_or_else(|| SpecError::UnknownGenerator {
                            path: path.clone(),
                            name: name.clone(),
                        })?;
                    for (op, class, path) in ops.entries(p, &path)? {
                        let value = b
                            .class(g.degree + op.degree_shift(p), &class.terms())
                            .map_err(|source| SpecError::Algebra { path, source })?;
                        b = b.steenrod(j, op, value);
                    }
                }
            }
        }
        b.build().map_err(|source| SpecError::Algebra {
            path: "base".into(),
            source,
        })
    }

    pub fn module(&self, p: u32, truncation: u32) -> Result<ThomModule, SpecError> {
        let base = self.presentation(p, truncation)?;
        let n = self.bundle.fiber_dim;
        let euler = base
            .class(n, &self.bundle.euler.terms())
            .map_err(|source| SpecError::Algebra {
                path: "bundle.euler".into(),
                source,
            })?;
        let mut orientation = Vec::new();
        if p != 0 {
            let table = self
                .bundle
                .orientation
                .get(&p.to_string())
                .ok_or(SpecError::MissingOrientation(p))?;
            for (op, class, path) in table.entries(p, &format!("bundle.orientation.{p}"))? {
                let value = base
                    .class(op.degree_shift(p), &class.terms())
                    .map_err(|source| SpecError::Algebra { path, source })?;
                orientation.push((op, value));
            }
        }
        ThomModule::new(base, n, euler, orientation).map_err(|source| SpecError::Thom {
            path: "bundle".into(),
            source,
        })
    }

    pub fn massey_data(&self, module: &ThomModule) -> Option<Result<MasseyData, SpecError>> {
        let m = self.massey.as_ref()?;
        let n = module.n();
        let base = module.base();
        let class = |c: &ClassSpec, degree: u32, path: &str| {
            base.class(degree, &c.terms()).map_err(|source| SpecError::Algebra {
                path: path.into(),
                source,
            })
        };
        Some((|| {
            let s = class(&m.s, 2 * n - 2, "massey.s")?;
            let t = class(&m.t, n - 1, "massey.t")?;
            MasseyData::new(s, t, n).map_err(|source| SpecError::Thom {
                path: "massey".into(),
                source,
            })
        })())
    }
}

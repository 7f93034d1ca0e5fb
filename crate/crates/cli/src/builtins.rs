//! Built-in example spaces. Orientation tables are generated for every
//! requested prime.

use std::collections::BTreeMap;

use crate::error::SpecError;
use crate::spec::{BaseSpec, BundleSpec, ClassSpec, GeneratorSpec, MasseySpec, OpTable, SpaceSpec};

pub const NAMES: &[&str] = &[
    "cpinf-eta-plus-r",
    "spin3",
    "spin2-suspension",
    "sphere-3",
    "sphere-4",
    "cpinf-eta",
];

/// Primes with generated tables when none are requested.
const TABLE_PRIMES: &[u32] = &[2, 3, 5, 7];

fn generator(name: &str, degree: u32) -> GeneratorSpec {
    GeneratorSpec {
        name: name.into(),
        degree,
        height: None,
    }
}

fn sq(i: u32, c: ClassSpec) -> OpTable {
    OpTable {
        sq: BTreeMap::from([(i.to_string(), c)]),
        ..OpTable::default()
    }
}

fn p_op(i: u32, c: ClassSpec) -> OpTable {
    OpTable {
        p: BTreeMap::from([(i.to_string(), c)]),
        ..OpTable::default()
    }
}

fn orientation(primes: &[u32], table: impl Fn(u32) -> OpTable) -> BTreeMap<String, OpTable> {
    primes.iter().filter(|&&p| p != 0).map(|&p| (p.to_string(), table(p))).collect()
}

pub fn builtin(name: &str, requested: &[u32]) -> Result<SpaceSpec, SpecError> {
    let mut primes: Vec<u32> = TABLE_PRIMES.to_vec();
    primes.extend_from_slice(requested);
    primes.sort_unstable();
    primes.dedup();
    for &p in &primes {
        loopcoh_core::field::Field::new(p)?;
    }
    let spec = match name {
        // CP^∞ with η ⊕ R: M ≃ ΣCP^∞
        "cpinf-eta-plus-r" => SpaceSpec {
            name: name.into(),
            primes: vec![2, 3, 5, 0],
            max_degree: None,
            base: BaseSpec {
                generators: vec![generator("x", 2)],
                steenrod: BTreeMap::new(),
            },
            bundle: BundleSpec {
                fiber_dim: 3,
                euler: ClassSpec::zero(),
                orientation: orientation(&primes, |p| {
                    if p == 2 {
                        sq(2, ClassSpec::monomial(&[1], 1))
                    } else {
                        p_op(1, ClassSpec::monomial(&[p - 1], 1))
                    }
                }),
            },
            massey: Some(MasseySpec {
                s: ClassSpec::zero(),
                t: ClassSpec::monomial(&[1], 1),
            }),
        },
        // HP^∞ with the rank-3 bundle of Spin(3) = Sp(1)
        "spin3" => SpaceSpec {
            name: name.into(),
            primes: vec![2, 3, 5],
            max_degree: None,
            base: BaseSpec {
                generators: vec![generator("y", 4)],
                steenrod: primes
                    .iter()
                    .filter(|&&p| p > 2)
                    .map(|&p| {
                        let table = p_op(1, ClassSpec::monomial(&[(p + 1) / 2], 2));
                        (p.to_string(), BTreeMap::from([("y".to_string(), table)]))
                    })
                    .collect(),
            },
            bundle: BundleSpec {
                fiber_dim: 3,
                euler: ClassSpec::zero(),
                orientation: orientation(&primes, |p| {
                    if p == 2 {
                        OpTable::default()
                    } else {
                        p_op(1, ClassSpec::monomial(&[(p - 1) / 2], 1))
                    }
                }),
            },
            massey: Some(MasseySpec {
                s: ClassSpec::monomial(&[1], 1),
                t: ClassSpec::zero(),
            }),
        },
        // CP^∞ with the rank-3 bundle induced from Spin(2) ⊂ Spin(3)
        "spin2-suspension" => SpaceSpec {
            name: name.into(),
            primes: vec![2, 3, 5],
            max_degree: None,
            base: BaseSpec {
                generators: vec![generator("x", 2)],
                steenrod: BTreeMap::new(),
            },
            bundle: BundleSpec {
                fiber_dim: 3,
                euler: ClassSpec::zero(),
                orientation: orientation(&primes, |p| {
                    if p == 2 {
                        OpTable::default()
                    } else {
                        p_op(1, ClassSpec::monomial(&[p - 1], 1))
                    }
                }),
            },
            massey: Some(MasseySpec {
                s: ClassSpec::zero(),
                t: ClassSpec::monomial(&[1], 2),
            }),
        },
        // CP^∞ with η: M = CP^∞, u^2 = x u
        "cpinf-eta" => SpaceSpec {
            name: name.into(),
            primes: vec![2],
            max_degree: None,
            base: BaseSpec {
                generators: vec![generator("x", 2)],
                steenrod: BTreeMap::new(),
            },
            bundle: BundleSpec {
                fiber_dim: 2,
                euler: ClassSpec::monomial(&[1], 1),
                orientation: orientation(&primes, |_| OpTable::default()),
            },
            massey: None,
        },
        _ => match name.strip_prefix("sphere-").and_then(|n| n.parse::<u32>().ok()) {
            // trivial bundle over a point: M = S^n
            Some(n) if n >= 2 => SpaceSpec {
                name: name.into(),
                primes: vec![2, 3, 0],
                max_degree: None,
                base: BaseSpec {
                    generators: Vec::new(),
                    steenrod: BTreeMap::new(),
                },
                bundle: BundleSpec {
                    fiber_dim: n,
                    euler: ClassSpec::zero(),
                    orientation: orientation(&primes, |_| OpTable::default()),
                },
                massey: Some(MasseySpec {
                    s: ClassSpec::zero(),
                    t: ClassSpec::zero(),
                }),
            },
            _ => return Err(SpecError::UnknownBuiltin(name.into())),
        },
    };
    let text = spec.to_json();
    SpaceSpec::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use loopcoh_core::algebra::SteenrodOp;

    #[test]
    fn every_builtin_loads() {
        for name in NAMES {
            let spec = builtin(name, &[11]).unwrap();
            for &p in &spec.primes {
                spec.module(p, 10).unwrap();
            }
        }
        assert!(matches!(builtin("nope", &[]), Err(SpecError::UnknownBuiltin(_))));
        assert!(builtin("sphere-7", &[]).is_ok());
        assert!(builtin("sphere-1", &[]).is_err());
    }

    #[test]
    fn spin3_data() {
        let spec = builtin("spin3", &[]).unwrap();
        let m = spec.module(2, 20).unwrap();
        assert_eq!(m.n(), 3);
        assert!(m.euler().is_zero());
        assert!(m.orientation_op(SteenrodOp::Sq(2)).unwrap().is_zero());
        let massey = spec.massey_data(&m).unwrap().unwrap();
        assert_eq!(massey.s, m.base().generator_class(0));
        assert!(massey.t.is_zero());
    }

    #[test]
    fn cpinf_eta_plus_r_data() {
        let spec = builtin("cpinf-eta-plus-r", &[]).unwrap();
        let m = spec.module(2, 20).unwrap();
        assert_eq!(m.orientation_op(SteenrodOp::Sq(2)).unwrap(), m.base().generator_class(0));
        let m = spec.module(5, 20).unwrap();
        let x = m.base().generator_class(0);
        assert_eq!(m.wu_class().unwrap(), m.base().pow(&x, 4));
    }
}

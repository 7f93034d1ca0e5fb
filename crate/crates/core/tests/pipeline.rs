use loopcoh_core::algebra::{AlgebraPresentation, Class, Monomial, Relation, SteenrodOp};
use loopcoh_core::bar::BarComplex;
use loopcoh_core::emss::{base_truncation_for, classify, frobenius_check, loop_series, E2Page, Verdict};
use loopcoh_core::field::Field;
use loopcoh_core::thom::ThomModule;

fn cp_inf(p: u32, trunc: u32) -> AlgebraPresentation {
    AlgebraPresentation::builder(Field::new(p).unwrap(), trunc)
        .generator("x", 2, Relation::Polynomial)
        .build()
        .unwrap()
}

/// CP^∞ with a rank-3 fibration whose P^1 u vanishes at p.
fn untwisted(p: u32, trunc: u32) -> ThomModule {
    ThomModule::new(cp_inf(p, trunc), 3, Class::zero(3), vec![]).unwrap()
}

#[test]
fn truncated_verdict_and_its_mechanism() {
    for p in [3, 5] {
        let m = untwisted(p, 40);
        let c = classify(&m, 12).unwrap();
        assert_eq!(c.verdict, Verdict::PTruncated);
        let bar = BarComplex::new(&m);
        // P^{m+k}[x u] = [(P^k x) P^m u] = 0 for |x| = 2k
        for k in 0..6 {
            let w = bar.word(&[Monomial::new(vec![k])]);
            let v = bar.steenrod_bar(SteenrodOp::P(1 + k), &w).unwrap();
            assert!(v.is_zero(), "p = {p}, x^{k}");
            let (_, actual, expected) = frobenius_check(&bar, &w).unwrap().unwrap();
            assert_eq!(actual, expected);
        }
    }
}

#[test]
fn exterior_mechanism_on_long_words() {
    // HP^∞ at p = 2 with Sq^2 u = 0: every word of generators is killed
    let b = AlgebraPresentation::builder(Field::new(2).unwrap(), 40)
        .generator("y", 4, Relation::Polynomial)
        .build()
        .unwrap();
    let m = ThomModule::new(b, 3, Class::zero(3), vec![]).unwrap();
    let bar = BarComplex::new(&m);
    for len in 1..=3u32 {
        for s in 0..=16 {
            let Ok(words) = bar.basis(len, s) else { continue };
            for w in words {
                let (_, actual, expected) = frobenius_check(&bar, &w).unwrap().unwrap();
                assert!(actual.is_zero() && expected.is_zero());
            }
        }
    }
}

#[test]
fn collapse_means_word_counts() {
    for p in [2, 3] {
        let n = 10;
        let m = untwisted(p, base_truncation_for(3, n));
        let page = E2Page::compute(&m, n).unwrap();
        let bar = BarComplex::new(&m);
        for s in 0..=n / 2 {
            for t in 3 * s..=n + s {
                assert_eq!(page.dim(s, t), bar.basis(s, t).unwrap().len());
            }
        }
        assert_eq!(page.total_series(), loop_series(&m, n).unwrap());
    }
}

#[test]
fn too_small_truncation_is_reported() {
    let m = untwisted(2, 4);
    assert!(E2Page::compute(&m, 12).is_err());
}

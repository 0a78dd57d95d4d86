use proptest::prelude::*;

use ks_alg::algebra::{AlgebraContext, Element, Flavor};
use ks_alg::formality::{candidates, massey3, massey3_with, same_class, CertificateFamily, HomClass, HomologyCache};
use ks_alg::istate::{classify_intervals, is_far, weight_vector, IState, LineSet};
use ks_alg::quiver::{normalize, Path};
use ks_alg::sample::Sampler;
use ks_alg::symmetry::{o, rho};

const FLAVORS: [Flavor; 5] = [Flavor::B0, Flavor::B, Flavor::Br, Flavor::Bl, Flavor::Bprime];

fn context() -> impl Strategy<Value = AlgebraContext> {
    (1usize..=4, 0usize..=5, 0u32..16, 0usize..5)
        .prop_filter_map("valid and nonempty", |(n, k, mask, f)| {
            let flavor = FLAVORS[f];
            let lines: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            let lines = if flavor == Flavor::B0 { vec![] } else { lines };
            let ctx = AlgebraContext::with_lines(n, k, &lines, flavor).ok()?;
            (!ctx.states().is_empty()).then_some(ctx)
        })
}

fn sampled(count: usize) -> impl Strategy<Value = (AlgebraContext, Vec<Element>)> {
    (context(), any::<u64>()).prop_map(move |(ctx, seed)| {
        let mut s = Sampler::new(ctx, seed, 2);
        let elems = (0..count).map(|_| s.element(3)).collect();
        (ctx, elems)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn idempotents_decompose((ctx, es) in sampled(1)) {
        let a = &es[0];
        let mut sum = Element::zero(ctx);
        for x in ctx.states() {
            for y in ctx.states() {
                let piece = &(&ctx.idempotent(&x).unwrap() * a) * &ctx.idempotent(&y).unwrap();
                prop_assert_eq!(&piece, &a.corner(&x, &y));
                sum = &sum + &piece;
            }
        }
        prop_assert_eq!(&sum, a);
    }

    #[test]
    fn unit_and_associativity((ctx, es) in sampled(3)) {
        let one = ctx.one();
        prop_assert_eq!(&(&one * &es[0]), &es[0]);
        prop_assert_eq!(&(&es[0] * &one), &es[0]);
        let left = &(&es[0] * &es[1]) * &es[2];
        let right = &es[0] * &(&es[1] * &es[2]);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn gradings_are_additive((ctx, seed) in (context(), any::<u64>())) {
        let mut s = Sampler::new(ctx, seed, 2);
        for _ in 0..20 {
            let Some(a) = s.basis() else { continue };
            let Some(b) = s.basis_from(a.right) else { continue };
            let Some(ab) = ctx.mul_basis(&a, &b) else { continue };
            let (ga, gb, gab) = (ctx.grading(&a), ctx.grading(&b), ctx.grading(&ab));
            prop_assert_eq!(gab.maslov, ga.maslov + gb.maslov);
            let sum: Vec<i32> = ga.alex2.iter().zip(&gb.alex2).map(|(p, q)| p + q).collect();
            prop_assert_eq!(gab.alex2, sum);
            let sum: Vec<i32> = ga.unrefined.iter().zip(&gb.unrefined).map(|(p, q)| p + q).collect();
            prop_assert_eq!(gab.unrefined, sum);
            prop_assert_eq!(gab.alex_single2, ga.alex_single2 + gb.alex_single2);
        }
    }

    #[test]
    fn differential_lowers_maslov((ctx, seed) in (context(), any::<u64>())) {
        let mut s = Sampler::new(ctx, seed, 2);
        for _ in 0..20 {
            let Some(b) = s.basis() else { continue };
            let g = ctx.grading(&b);
            for t in ctx.differential_terms(&b) {
                let h = ctx.grading(&t);
                prop_assert_eq!(h.maslov, g.maslov - 1);
                prop_assert_eq!(&h.alex2, &g.alex2);
            }
        }
    }

    #[test]
    fn intervals_partition_the_lines(n in 1usize..=8, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(0..=n + 1);
        let states = ks_alg::istate::enumerate_istates(n, k).unwrap();
        let x = states[rng.gen_range(0..states.len())];
        let y = states[rng.gen_range(0..states.len())];
        if is_far(&x, &y).unwrap() {
            prop_assert!(classify_intervals(&x, &y).is_err());
        } else {
            let cls = classify_intervals(&x, &y).unwrap();
            prop_assert!(cls.is_partition(n));
            let v = weight_vector(&x, &y).unwrap();
            for i in cls.crossed.iter() {
                prop_assert!(v.get(i) != 0);
            }
        }
    }

    #[test]
    fn symmetries_are_involutions((_ctx, es) in sampled(2)) {
        let (a, b) = (&es[0], &es[1]);
        prop_assert_eq!(&rho(&rho(a)), a);
        prop_assert_eq!(&o(&o(a)), a);
        prop_assert_eq!(rho(&o(a)), o(&rho(a)));
        prop_assert_eq!(rho(&(a * b)), &rho(a) * &rho(b));
        prop_assert_eq!(o(&(a * b)), &o(b) * &o(a));
    }

    #[test]
    fn elements_round_trip((ctx, es) in sampled(1)) {
        let text = es[0].to_string();
        prop_assert_eq!(&ctx.parse_element(&text).unwrap(), &es[0]);
    }

    #[test]
    fn path_splits_multiply((ctx, seed) in (context(), any::<u64>()), len in 0usize..6, at in 0usize..6) {
        let mut s = Sampler::new(ctx, seed, 1);
        if let Some(p) = s.path(len) {
            let (a, b) = p.split_at(at.min(p.len()));
            prop_assert_eq!(normalize(&ctx, &p).unwrap(), &normalize(&ctx, &a).unwrap() * &normalize(&ctx, &b).unwrap());
            let reparsed = Path::parse(&ctx, &p.to_string()).unwrap();
            prop_assert_eq!(reparsed, p);
        }
    }
}

/// Re-solving with perturbed witnesses leaves the Massey class unchanged.
#[test]
fn massey_products_ignore_witness_choice() {
    let mut checked = 0;
    for (n, k) in [(2, 1), (3, 1), (3, 2)] {
        for s in LineSet::all_subsets(n) {
            let ctx = AlgebraContext::new(n, k, s, Flavor::B).unwrap();
            let mut cache = HomologyCache::new(ctx);
            for family in CertificateFamily::TWO_LINE {
                for cand in candidates(&ctx, family) {
                    let mut at = cand.start;
                    let mut seq = Vec::new();
                    for edges in &cand.paths {
                        let p = Path::new(&ctx, at, edges.clone()).unwrap();
                        let c = HomClass::new(normalize(&ctx, &p).unwrap()).unwrap();
                        at = c.y;
                        seq.push(c);
                    }
                    let seq: [HomClass; 3] = seq.try_into().unwrap();
                    let base = massey3(&mut cache, &seq).unwrap();
                    let sum = |a: &[i32], b: &[i32]| -> Vec<i32> { a.iter().zip(b).map(|(p, q)| p + q).collect() };
                    let (a12, a23) = (sum(&seq[0].alex2, &seq[1].alex2), sum(&seq[1].alex2, &seq[2].alex2));
                    let z02 = cache
                        .piece(&seq[0].x, &seq[1].y, &a12)
                        .unwrap()
                        .cycles(seq[0].maslov + seq[1].maslov + 1);
                    let z13 = cache
                        .piece(&seq[1].x, &seq[2].y, &a23)
                        .unwrap()
                        .cycles(seq[1].maslov + seq[2].maslov + 1);
                    for z in z02.iter().chain(std::iter::once(&Element::zero(ctx))) {
                        for w in z13.iter().chain(std::iter::once(&Element::zero(ctx))) {
                            let again =
                                massey3_with(&mut cache, &seq, &base.xi02 + z, &base.xi13 + w).unwrap();
                            assert!(same_class(&mut cache, &again.value, &base.value).unwrap());
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn interval_classification_example() {
    let x = IState::new(3, &[1, 2]).unwrap();
    let y = IState::new(3, &[1, 3]).unwrap();
    let cls = classify_intervals(&x, &y).unwrap();
    assert!(cls.is_partition(3));
    assert_eq!(cls.crossed.to_string(), "{3}");
}

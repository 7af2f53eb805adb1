use gcpdl::relations::{ParallelReading, ReachRelation, StateSet, StateSpace};
use gcpdl::ChainContext;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup() -> impl Strategy<Value = (u32, usize, u64, f64)> {
    (
        prop::sample::select(vec![2u32, 3, 5]),
        1usize..=3,
        any::<u64>(),
        prop::sample::select(vec![0.2, 0.5, 0.9]),
    )
}

fn relations(n: u32, size: usize, seed: u64, density: f64, k: usize) -> Vec<ReachRelation> {
    let ctx = ChainContext::new(n).unwrap();
    let space = StateSpace::new(size).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| ReachRelation::random(space, ctx, density, &mut rng)).collect()
}

/// `Q` lowered entrywise, so that the result is below `Q`.
fn below(q: &ReachRelation, seed: u64) -> ReachRelation {
    let mut out = q.clone();
    let ctx = q.context();
    let mut bits = seed;
    for (s, t, v) in q.entries() {
        bits = bits.rotate_left(7) ^ 0x9E37;
        let lowered = v.numerator().saturating_sub((bits % 3) as u32);
        out.set(s, t, ctx.value(lowered).unwrap()).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_is_monotone_on_the_right((n, size, seed, d) in setup()) {
        let rs = relations(n, size, seed, d, 2);
        let (r, q) = (&rs[0], &rs[1]);
        let lower = below(q, seed);
        prop_assert!(lower.leq(q).unwrap());
        prop_assert!(r.compose(&lower).unwrap().leq(&r.compose(q).unwrap()).unwrap());
    }

    #[test]
    fn composition_distributes_over_union_on_the_left((n, size, seed, d) in setup()) {
        let rs = relations(n, size, seed, d, 3);
        let (r, r2, q) = (&rs[0], &rs[1], &rs[2]);
        let left = r.union(r2).unwrap().compose(q).unwrap();
        let right = r.compose(q).unwrap().union(&r2.compose(q).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn powers_increase((n, size, seed, d) in setup()) {
        let r = &relations(n, size, seed, d, 1)[0];
        for k in 0..4 {
            prop_assert!(r.power(k).leq(&r.power(k + 1)).unwrap());
        }
    }

    #[test]
    fn identity_is_a_unit((n, size, seed, d) in setup()) {
        let r = &relations(n, size, seed, d, 1)[0];
        let iota = ReachRelation::iota(r.space(), r.context());
        prop_assert_eq!(&iota.compose(r).unwrap(), r);
        prop_assert_eq!(&r.compose(&iota).unwrap(), r);
    }

    #[test]
    fn star_is_a_fixpoint((n, size, seed, d) in setup()) {
        let r = &relations(n, size, seed, d, 1)[0];
        let star = r.star();
        let iota = ReachRelation::iota(r.space(), r.context());
        prop_assert_eq!(&iota.union(&r.compose(&star).unwrap()).unwrap(), &star);
        prop_assert!(r.power(4).leq(&star).unwrap());
    }

    #[test]
    fn parallel_commutes_and_is_monotone((n, size, seed, d) in setup()) {
        let rs = relations(n, size, seed, d, 2);
        let (r, q) = (&rs[0], &rs[1]);
        for reading in [ParallelReading::Overlapping, ParallelReading::Disjoint] {
            let rq = r.parallel_with(q, reading).unwrap();
            prop_assert_eq!(&rq, &q.parallel_with(r, reading).unwrap());
            let lower = below(q, seed);
            prop_assert!(r.parallel_with(&lower, reading).unwrap().leq(&rq).unwrap());
        }
    }
}

#[test]
fn worked_examples() {
    let ctx = ChainContext::new(3).unwrap();
    let space = StateSpace::new(2).unwrap();
    let half = ctx.value(1).unwrap();
    let both = space.full();

    let mut r = ReachRelation::zero(space, ctx);
    r.set(0, StateSet::singleton(1), ctx.one()).unwrap();
    let mut q = ReachRelation::zero(space, ctx);
    q.set(1, both, half).unwrap();
    assert_eq!(r.compose(&q).unwrap().get(0, both), half);

    let mut r = ReachRelation::zero(space, ctx);
    r.set(0, StateSet::singleton(1), half).unwrap();
    r.set(1, StateSet::singleton(1), ctx.one()).unwrap();
    assert_eq!(r.star().get(0, StateSet::singleton(1)), half);

    let zero = ReachRelation::zero(space, ctx);
    let iota = ReachRelation::iota(space, ctx);
    assert_eq!(zero.star(), iota);
    assert_eq!(iota.star(), iota);

    let ctx4 = ChainContext::new(4).unwrap();
    let two_thirds = ctx4.value(2).unwrap();
    let mut r = ReachRelation::zero(space, ctx4);
    r.set(0, StateSet::singleton(0), two_thirds).unwrap();
    let mut q = ReachRelation::zero(space, ctx4);
    q.set(0, StateSet::singleton(1), two_thirds).unwrap();
    assert_eq!(r.parallel(&q).unwrap().get(0, both).to_string(), "1/3");
}

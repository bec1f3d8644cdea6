use annmax_core::instances::random_drag_query;
use annmax_core::l1::{build_cells, owner_of};
use annmax_core::oracle::{brute_drag, brute_g, brute_query, brute_top_k};
use annmax_core::{compute_qmax, g_value, l2_query, DragIndex, L1Index, Metric, PartitionTree, Point};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Small coordinates so that duplicates and boundary ties are common.
fn points(max: usize, span: i32) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-span..span, -span..span), 1..=max).prop_map(|c| {
        c.into_iter().enumerate().map(|(i, (x, y))| Point::new(x as f64, y as f64, i)).collect()
    })
}

fn translated(p: &[Point], dx: f64, dy: f64) -> Vec<Point> {
    p.iter().map(|q| Point::new(q.x + dx, q.y + dy, q.id)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn l1_query_matches_oracle(p in points(60, 12), q in points(12, 12)) {
        let got = L1Index::build(&p).unwrap().query(&q).unwrap();
        prop_assert_eq!(got, brute_query(&p, &q, Metric::L1).unwrap());
    }

    #[test]
    fn l1_top_k_is_the_sorted_prefix(p in points(60, 8), q in points(8, 8), k in 1usize..70) {
        let got = L1Index::build(&p).unwrap().top_k(&q, k).unwrap();
        prop_assert_eq!(got.len(), k.min(p.len()));
        prop_assert!(got.windows(2).all(|w| w[0].key() < w[1].key()));
        prop_assert_eq!(got, brute_top_k(&p, &q, Metric::L1, k).unwrap());
    }

    #[test]
    fn extremes_give_the_exact_aggregate(p in points(20, 1000), q in points(40, 1000)) {
        let e = compute_qmax(&q).unwrap();
        for x in &p {
            prop_assert_eq!(g_value(x, &e, Metric::L1), brute_g(x, &q, Metric::L1));
        }
    }

    #[test]
    fn l1_owner_is_farthest(q in points(10, 6), x in -20i32..20, y in -20i32..20) {
        let e = compute_qmax(&q).unwrap();
        let s = Point::new(x as f64 / 2.0, y as f64 / 2.0, usize::MAX);
        let owner = owner_of(&build_cells(&e), s.xy()).unwrap();
        prop_assert_eq!(brute_g(&s, &[owner], Metric::L1), brute_g(&s, &q, Metric::L1));
    }

    #[test]
    fn l1_answer_is_translation_invariant(p in points(40, 50), q in points(10, 50), dx in -100i32..100, dy in -100i32..100) {
        let a = L1Index::build(&p).unwrap().query(&q).unwrap();
        let (pt, qt) = (translated(&p, dx as f64, dy as f64), translated(&q, dx as f64, dy as f64));
        let b = L1Index::build(&pt).unwrap().query(&qt).unwrap();
        prop_assert_eq!((a.point.id, a.g), (b.point.id, b.g));
    }

    #[test]
    fn l2_query_matches_oracle(p in points(60, 30), q in points(12, 30)) {
        let got = l2_query(&PartitionTree::build(&p).unwrap(), &q).unwrap();
        let want = brute_query(&p, &q, Metric::L2).unwrap();
        prop_assert_eq!(got.point.id, want.point.id);
        prop_assert!((got.g - want.g).abs() <= 1e-9 * want.g.max(1.0));
    }

    #[test]
    fn drag_queries_match_oracle(p in points(80, 10), seed in any::<u64>()) {
        let idx = DragIndex::build(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let q = random_drag_query(&mut rng, 20, p.len());
            prop_assert_eq!(idx.drag(&q).unwrap(), brute_drag(&p, &q).unwrap());
        }
    }
}

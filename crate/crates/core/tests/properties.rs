//! Property tests for the order-theoretic and metric invariants.

mod common;

use proptest::prelude::*;
use topoclust::baselines::{conditional_entropy, variation_of_information};
use topoclust::io;
use topoclust::measures::{
    average_conflict0, average_conflict1, detect_triangle_zero_conflict, detect_zero_conflict,
    hilbert_distance, hilbert_grid, Construction, HomologyDim,
};
use topoclust::{BigradeGrid, Partition, PartitionSequence};

fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..n as u32, n)
        .prop_map(|labels| Partition::from_labels(&labels).unwrap())
}

/// Coarsens `p` by an arbitrary map on its block indices.
fn coarsen(p: &Partition, map: &[u32]) -> Partition {
    let labels: Vec<u32> = (0..p.n_elements() as u32)
        .map(|x| map[p.block_index(x) as usize % map.len()])
        .collect();
    Partition::from_labels(&labels).unwrap()
}

fn arb_sequence(max_n: usize, max_m: usize) -> impl Strategy<Value = PartitionSequence> {
    (2..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec(0..n as u32, n), m).prop_map(|columns| {
            let partitions = columns
                .iter()
                .map(|labels| Partition::from_labels(labels).unwrap())
                .collect();
            PartitionSequence::with_unit_scales(partitions).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn refinement_is_reflexive_and_bounded(p in (2usize..=9).prop_flat_map(arb_partition)) {
        prop_assert!(p.refines(&p).unwrap());
        prop_assert!(Partition::singletons(p.n_elements()).refines(&p).unwrap());
        prop_assert!(p.refines(&Partition::one_block(p.n_elements())).unwrap());
    }

    #[test]
    fn refinement_is_transitive(
        (p, map1, map2) in (2usize..=9).prop_flat_map(|n| {
            (arb_partition(n),
             prop::collection::vec(0..n as u32, n),
             prop::collection::vec(0..n as u32, n))
        })
    ) {
        let q = coarsen(&p, &map1);
        let r = coarsen(&q, &map2);
        prop_assert!(p.refines(&q).unwrap());
        prop_assert!(q.refines(&r).unwrap());
        prop_assert!(p.refines(&r).unwrap());
    }

    #[test]
    fn refinement_is_antisymmetric(
        (p, q) in (2usize..=8).prop_flat_map(|n| (arb_partition(n), arb_partition(n)))
    ) {
        if p.refines(&q).unwrap() && q.refines(&p).unwrap() {
            prop_assert_eq!(p, q);
        }
    }

    #[test]
    fn hierarchy_implies_nestedness(seq in arb_sequence(7, 5)) {
        for i in 0..seq.len() {
            for j in i..seq.len() {
                if seq.is_hierarchical(i, j).unwrap() {
                    prop_assert!(seq.is_nested(i, j).unwrap());
                }
            }
        }
    }

    #[test]
    fn coarse_graining_matches_mean_block_size(seq in arb_sequence(9, 6)) {
        let by_mean = seq
            .partitions()
            .windows(2)
            .all(|w| w[0].mean_block_size() <= w[1].mean_block_size());
        prop_assert_eq!(seq.is_coarse_graining(), by_mean);
    }

    #[test]
    fn hilbert_grid_window_laws(seq in arb_sequence(8, 5)) {
        let hf0 = hilbert_grid(&seq, HomologyDim::Zero, Construction::Element).unwrap();
        let hf1 = hilbert_grid(&seq, HomologyDim::One, Construction::Element).unwrap();
        let counts: Vec<u64> = seq.partitions().iter().map(|p| p.len() as u64).collect();
        for i in 0..seq.len() {
            for j in i..seq.len() {
                let min_count = (i..=j).map(|r| counts[r]).min().unwrap();
                // Sharp upper bound by the window's coarsest layer.
                prop_assert!(hf0.get(i, j) <= min_count);
                // Value attained at a layer iff that layer is a maximum of
                // the window subposet.
                let max = seq.subposet_maximum(i, j).unwrap();
                prop_assert_eq!(hf0.get(i, j) == min_count, max.is_some());
                if let Some(r) = max {
                    prop_assert_eq!(hf0.get(i, j), counts[r]);
                }
                if seq.is_hierarchical(i, j).unwrap() {
                    prop_assert_eq!(hf0.get(i, j), counts[i].min(counts[j]));
                    prop_assert_eq!(hf1.get(i, j), 0);
                }
                // A 1-dimensional class forces a chained intransitive triple.
                if hf1.get(i, j) >= 1 {
                    prop_assert!(detect_triangle_zero_conflict(&seq, i, j).unwrap());
                }
            }
        }
    }

    #[test]
    fn average_conflicts_reflect_grid_content(seq in arb_sequence(8, 5)) {
        let hf0 = hilbert_grid(&seq, HomologyDim::Zero, Construction::Element).unwrap();
        let hf1 = hilbert_grid(&seq, HomologyDim::One, Construction::Element).unwrap();
        let c0 = average_conflict0(&seq, &hf0).unwrap();
        let c1 = average_conflict1(&seq, &hf1).unwrap();
        prop_assert!((0.0..=1.0).contains(&c0));
        prop_assert!(c1 >= 0.0);
        let any_zero_conflict = (0..seq.len()).any(|i| {
            (i..seq.len()).any(|j| detect_zero_conflict(&seq, i, j, &hf0).unwrap())
        });
        prop_assert_eq!(c0 > 0.0, any_zero_conflict);
        prop_assert_eq!(c1 > 0.0, !hf1.is_zero());
    }

    #[test]
    fn information_measures_are_bounded_metrics(
        (p, q, r) in (2usize..=8).prop_flat_map(|n| {
            (arb_partition(n), arb_partition(n), arb_partition(n))
        })
    ) {
        let n = p.n_elements() as f64;
        let h_pq = conditional_entropy(&p, &q).unwrap();
        prop_assert!((0.0..=n.ln() + 1e-12).contains(&h_pq));
        prop_assert_eq!(h_pq == 0.0, q.refines(&p).unwrap());
        let vi_pq = variation_of_information(&p, &q).unwrap();
        let vi_qp = variation_of_information(&q, &p).unwrap();
        prop_assert!((vi_pq - vi_qp).abs() < 1e-12);
        prop_assert!(vi_pq <= n.ln() + 1e-12);
        prop_assert_eq!(vi_pq < 1e-15, p == q);
        let vi_pr = variation_of_information(&p, &r).unwrap();
        let vi_qr = variation_of_information(&q, &r).unwrap();
        prop_assert!(vi_pr <= vi_pq + vi_qr + 1e-12);
    }

    #[test]
    fn hilbert_distance_triangle_inequality(
        (m, a, b, c) in (2usize..=6).prop_flat_map(|m| {
            let cells = m * (m + 1) / 2;
            (Just(m),
             prop::collection::vec(0u64..6, cells),
             prop::collection::vec(0u64..6, cells),
             prop::collection::vec(0u64..6, cells))
        })
    ) {
        let grid = |values: &[u64]| {
            let mut g = BigradeGrid::new_zero((0..m).map(|k| k as f64).collect());
            let mut at = 0;
            for i in 0..m {
                for j in i..m {
                    g.set(i, j, values[at]);
                    at += 1;
                }
            }
            g
        };
        let (ga, gb, gc) = (grid(&a), grid(&b), grid(&c));
        let ab = hilbert_distance(&ga, &gb).unwrap();
        let ba = hilbert_distance(&gb, &ga).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(ab == 0.0, ga == gb);
        let ac = hilbert_distance(&ga, &gc).unwrap();
        let bc = hilbert_distance(&gb, &gc).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn sequence_files_round_trip(seq in arb_sequence(8, 6)) {
        let text = io::write_sequence(&seq);
        let back = io::parse_sequence(&text).unwrap();
        prop_assert_eq!(back, seq);
    }
}

//! Property tests for the library's contract invariants: validation exactness,
//! serialization round trips, relabeling invariance, cutoff monotonicity, and
//! TES monotonicity.

mod common;

use proptest::prelude::*;

use car::cutoff::{boundary_set, select_cutoff};
use car::eval::tes;
use car::pipeline::{normalize, run_car_on_distances};
use car::silhouette::{build_default_grid, silhouette_score};
use car::types::{
    AlgorithmKind, ClusterAssignment, ClusterPoint, CutoffDecision, NormalizedList, RankedList,
};

fn ranked_list_strategy() -> impl Strategy<Value = RankedList> {
    prop::collection::vec(0.0f64..10.0, 1..30).prop_map(|mut distances| {
        distances.sort_by(f64::total_cmp);
        RankedList::from_sorted_pairs(
            "q",
            distances
                .into_iter()
                .enumerate()
                .map(|(i, d)| (format!("d{i}"), d)),
        )
        .unwrap()
    })
}

fn labels_strategy(n: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-1i32..4, n)
}

proptest! {
    #[test]
    fn valid_lists_are_accepted(list in ranked_list_strategy()) {
        prop_assert!(list.validate().is_ok());
    }

    #[test]
    fn corrupted_lists_are_rejected(list in ranked_list_strategy(), which in 0usize..3) {
        let mut list = list;
        match which {
            0 if list.len() >= 2 => {
                // break the sort order
                let max = list.candidates.last().unwrap().raw_distance;
                list.candidates[0].raw_distance = max + 1.0;
                let unsorted = matches!(list.validate(), Err(car::Error::UnsortedDistances { rank: _ }));
                prop_assert!(unsorted);
            }
            1 if list.len() >= 2 => {
                list.candidates[0].doc_id = list.candidates[1].doc_id.clone();
                let duplicate = matches!(list.validate(), Err(car::Error::DuplicateDocId { doc_id: _ }));
                prop_assert!(duplicate);
            }
            2 => {
                list.candidates[0].raw_distance = f64::INFINITY;
                let result = list.validate();
                prop_assert!(result.is_err());
            }
            _ => {}
        }
    }

    #[test]
    fn ranked_list_serde_round_trip(list in ranked_list_strategy()) {
        let json = serde_json::to_string(&list).unwrap();
        let back: RankedList = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, list);
    }

    #[test]
    fn decision_serde_round_trip(list in ranked_list_strategy(), labels_seed in any::<u64>()) {
        let normalized = normalize(&list);
        let labels: Vec<i32> = (0..list.len())
            .map(|i| ((labels_seed >> (i % 60)) & 1) as i32)
            .collect();
        let decision = select_cutoff(&normalized, &ClusterAssignment::new(labels)).unwrap();
        let json = serde_json::to_string(&decision).unwrap();
        let back: CutoffDecision = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, decision);
    }

    #[test]
    fn boundary_set_invariant_under_relabeling(labels in labels_strategy(12), offset in 1i32..100) {
        let original = ClusterAssignment::new(labels.clone());
        // injective relabeling that keeps -1 distinct
        let relabeled = ClusterAssignment::new(
            labels.iter().map(|&l| if l == -1 { -1 - offset } else { l + offset }).collect(),
        );
        prop_assert_eq!(boundary_set(&original), boundary_set(&relabeled));
    }

    #[test]
    fn silhouette_invariant_under_relabeling(ys in prop::collection::vec(0.0f64..1.0, 4..16), perm_seed in any::<u64>()) {
        let points: Vec<ClusterPoint> = ys
            .iter()
            .enumerate()
            .map(|(i, &y)| ClusterPoint::new(i as f64 / ys.len() as f64, y))
            .collect();
        let labels: Vec<i32> = (0..points.len()).map(|i| (i % 3) as i32).collect();
        let mapping = [2i32, 0, 1];
        let rotated: Vec<i32> = labels
            .iter()
            .map(|&l| mapping[(l as usize + perm_seed as usize) % 3])
            .collect();
        let a = silhouette_score(&points, &ClusterAssignment::new(labels));
        let b = silhouette_score(&points, &ClusterAssignment::new(rotated));
        match (a, b) {
            (Ok(x), Ok(y)) => prop_assert!((x - y).abs() < 1e-12),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "one relabeling degenerated"),
        }
    }

    #[test]
    fn cutoff_bounds_and_prefix(list in ranked_list_strategy(), labels_seed in any::<u64>()) {
        let normalized = normalize(&list);
        let labels: Vec<i32> = (0..list.len())
            .map(|i| ((labels_seed >> (i % 60)) & 3) as i32)
            .collect();
        let assignment = ClusterAssignment::new(labels);
        let decision = select_cutoff(&normalized, &assignment).unwrap();
        prop_assert!(decision.cutoff >= 1 && decision.cutoff <= list.len());
        // C = N iff S is empty
        if decision.boundaries.is_empty() {
            prop_assert_eq!(decision.cutoff, list.len());
            prop_assert!(decision.chosen_boundary.is_none());
        } else {
            prop_assert!(decision.cutoff < list.len());
        }
        let kept = car::cutoff::apply_cutoff(&list, &decision);
        prop_assert_eq!(&kept.candidates[..], &list.candidates[..decision.cutoff]);
    }

    #[test]
    fn gap_dominance(values in prop::collection::vec(0.0f64..1.0, 6..12)) {
        let mut values = values;
        values.sort_by(f64::total_cmp);
        let normalized = NormalizedList { query_id: "q".into(), values };
        let n = normalized.len();
        let labels: Vec<i32> = (0..n).map(|i| (i / 2) as i32).collect();
        let decision = select_cutoff(&normalized, &ClusterAssignment::new(labels)).unwrap();
        // a boundary dominated in both gap and position is never chosen
        if let Some(chosen) = decision.chosen_boundary {
            for &j in &decision.boundaries {
                let dominated = decision.gaps[&chosen] >= decision.gaps[&j]
                    && chosen >= j
                    && (decision.gaps[&chosen] > decision.gaps[&j] || chosen > j);
                if dominated {
                    prop_assert!(decision.scores[&chosen] > decision.scores[&j]);
                }
            }
        }
    }

    #[test]
    fn tes_monotonicity(a1 in 0.01f64..1.0, a2 in 0.01f64..1.0, c1 in 0.5f64..50.0, c2 in 0.5f64..50.0) {
        if a1 < a2 {
            prop_assert!(tes(a1, c1).unwrap() < tes(a2, c1).unwrap());
        }
        if c1 < c2 {
            prop_assert!(tes(a1, c1).unwrap() > tes(a1, c2).unwrap());
        }
    }

    #[test]
    fn normalize_endpoints(list in ranked_list_strategy()) {
        let normalized = normalize(&list);
        prop_assert!(normalized.validate().is_ok());
        let first = list.candidates.first().unwrap().raw_distance;
        let last = list.candidates.last().unwrap().raw_distance;
        if last > first {
            prop_assert_eq!(normalized.values[0], 0.0);
            prop_assert_eq!(*normalized.values.last().unwrap(), 1.0);
        } else {
            prop_assert!(normalized.values.iter().all(|&v| v == 0.0));
        }
    }
}

#[test]
fn oracle_cutoff_mirrors_worked_examples() {
    assert_eq!(
        common::oracle_cutoff(&[0.0, 0.05, 0.1, 0.6, 0.65, 1.0], &[0, 0, 0, 1, 1, 2]),
        5
    );
    assert_eq!(
        common::oracle_cutoff(&[0.0, 0.02, 0.04, 0.9, 0.95], &[0, 0, 0, 1, 1]),
        3
    );
    assert_eq!(common::oracle_cutoff(&[0.0, 0.5, 1.0], &[0, 0, 0]), 3);
    assert_eq!(common::oracle_cutoff(&[0.0, 1.0], &[0, 1]), 1);
}

#[test]
fn oracle_silhouette_mirrors_worked_examples() {
    let pts = |ys: &[f64]| -> Vec<ClusterPoint> {
        ys.iter().map(|&y| ClusterPoint::new(0.0, y)).collect()
    };
    let s = common::oracle_silhouette(&pts(&[0.0, 0.1, 1.0]), &[0, 0, 1]).unwrap();
    assert!((s - (0.9 + 0.8 / 0.9) / 3.0).abs() < 1e-12);
    let perfect = common::oracle_silhouette(&pts(&[0.0, 0.0, 1.0, 1.0]), &[0, 0, 1, 1]).unwrap();
    assert!((perfect - 1.0).abs() < 1e-12);
    assert!(common::oracle_silhouette(&pts(&[0.0, 0.5, 1.0]), &[0, 0, 0]).is_none());
}

#[test]
fn full_chain_prefix_containment() {
    let distances: Vec<f64> = (0..20).map(|i| (i as f64).powf(1.3) * 0.05).collect();
    let list = RankedList::from_sorted_pairs(
        "q",
        distances
            .into_iter()
            .enumerate()
            .map(|(i, d)| (format!("d{i}"), d)),
    )
    .unwrap();
    for kind in AlgorithmKind::ALL {
        let grid = build_default_grid(kind, 20).unwrap();
        let out = run_car_on_distances(&list, &grid, 5).unwrap();
        assert_eq!(
            &out.retained.candidates[..],
            &list.candidates[..out.decision.cutoff]
        );
    }
}

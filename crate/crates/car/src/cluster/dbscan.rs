//! DBSCAN over the 2-D profile. Neighborhood counts include the point itself;
//! border points reachable from several clusters go to the cluster of the
//! first core point in scan order.

use crate::types::{ClusterPoint, NOISE};

pub(crate) fn run_dbscan(points: &[ClusterPoint], eps: f64, min_samples: usize) -> Vec<i32> {
    let n = points.len();
    let eps_sq = eps * eps;
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| points[i].distance_sq(&points[j]) <= eps_sq)
                .collect()
        })
        .collect();
    let core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= min_samples).collect();

    let mut labels = vec![i32::MIN; n]; // MIN = unvisited
    let mut cluster = 0i32;
    for i in 0..n {
        if labels[i] != i32::MIN || !core[i] {
            continue;
        }
        labels[i] = cluster;
        let mut queue = vec![i];
        while let Some(p) = queue.pop() {
            for &q in &neighbors[p] {
                if labels[q] == i32::MIN {
                    labels[q] = cluster;
                    if core[q] {
                        queue.push(q);
                    }
                }
            }
        }
        cluster += 1;
    }
    for l in labels.iter_mut() {
        if *l == i32::MIN {
            *l = NOISE;
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_two_core_one_noise() {
        let points = vec![
            ClusterPoint::new(0.1, 0.0),
            ClusterPoint::new(0.2, 0.02),
            ClusterPoint::new(0.9, 0.95),
        ];
        let labels = run_dbscan(&points, 0.15, 2);
        assert_eq!(labels[0], labels[1]);
        assert_ne!(labels[0], NOISE);
        assert_eq!(labels[2], NOISE);
    }

    #[test]
    fn all_noise_when_isolated() {
        let points = vec![
            ClusterPoint::new(0.0, 0.0),
            ClusterPoint::new(0.5, 0.5),
            ClusterPoint::new(1.0, 1.0),
        ];
        assert_eq!(run_dbscan(&points, 0.1, 2), vec![NOISE; 3]);
    }

    #[test]
    fn chain_is_one_cluster() {
        let points: Vec<ClusterPoint> = (0..10)
            .map(|i| ClusterPoint::new(i as f64 * 0.05, 0.0))
            .collect();
        let labels = run_dbscan(&points, 0.06, 2);
        assert!(labels.iter().all(|&l| l == 0));
    }
}

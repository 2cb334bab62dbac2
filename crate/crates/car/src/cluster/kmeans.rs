//! Seeded k-means++ with Lloyd iterations, plus the bisecting variant.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::types::ClusterPoint;

pub(crate) const MAX_ITER: usize = 100;
pub(crate) const TOL: f64 = 1e-6;
pub(crate) const N_INIT: usize = 20;

#[derive(Debug, Clone)]
pub(crate) struct KmeansFit {
    pub labels: Vec<usize>,
    pub centroids: Vec<ClusterPoint>,
    pub inertia: f64,
    /// Assignment-step inertia per Lloyd iteration of the winning restart.
    pub inertia_history: Vec<f64>,
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn nearest(point: &ClusterPoint, centroids: &[ClusterPoint]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centroids.iter().enumerate() {
        let d = point.distance_sq(c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    (best, best_d)
}

fn kmeans_pp_init(points: &[ClusterPoint], k: usize, rng: &mut ChaCha8Rng) -> Vec<ClusterPoint> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.gen_range(0..points.len())]);
    let mut dist_sq: Vec<f64> = points
        .iter()
        .map(|p| p.distance_sq(&centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = dist_sq.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = points.len() - 1;
            for (i, &d) in dist_sq.iter().enumerate() {
                target -= d;
                if target <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // all remaining mass at existing centroids; take the first point
            // not yet used so duplicate-free inputs get distinct seeds
            (0..points.len())
                .find(|&i| !centroids.iter().any(|c| *c == points[i]))
                .unwrap_or(0)
        };
        centroids.push(points[next]);
        for (i, p) in points.iter().enumerate() {
            let d = p.distance_sq(&centroids[centroids.len() - 1]);
            if d < dist_sq[i] {
                dist_sq[i] = d;
            }
        }
    }
    centroids
}

fn lloyd(points: &[ClusterPoint], mut centroids: Vec<ClusterPoint>) -> KmeansFit {
    let k = centroids.len();
    let n = points.len();
    let mut labels = vec![0usize; n];
    let mut history = Vec::new();
    for _ in 0..MAX_ITER {
        let mut inertia = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (j, d) = nearest(p, &centroids);
            labels[i] = j;
            inertia += d;
        }
        history.push(inertia);

        let mut sums = vec![(0.0f64, 0.0f64, 0usize); k];
        for (i, p) in points.iter().enumerate() {
            let s = &mut sums[labels[i]];
            s.0 += p.x;
            s.1 += p.y;
            s.2 += 1;
        }
        // keep every cluster populated: hand an empty one the point farthest
        // from its current centroid
        for j in 0..k {
            if sums[j].2 == 0 {
                let far = (0..n).filter(|&i| sums[labels[i]].2 > 1).max_by(|&a, &b| {
                    points[a]
                        .distance_sq(&centroids[labels[a]])
                        .total_cmp(&points[b].distance_sq(&centroids[labels[b]]))
                });
                if let Some(i) = far {
                    let old = labels[i];
                    sums[old].0 -= points[i].x;
                    sums[old].1 -= points[i].y;
                    sums[old].2 -= 1;
                    labels[i] = j;
                    sums[j] = (points[i].x, points[i].y, 1);
                }
            }
        }

        let mut moved: f64 = 0.0;
        for j in 0..k {
            if sums[j].2 > 0 {
                let c =
                    ClusterPoint::new(sums[j].0 / sums[j].2 as f64, sums[j].1 / sums[j].2 as f64);
                moved = moved.max(c.distance(&centroids[j]));
                centroids[j] = c;
            }
        }
        if moved <= TOL {
            break;
        }
    }
    // final assignment against the converged centroids
    let mut inertia = 0.0;
    for (i, p) in points.iter().enumerate() {
        let (j, d) = nearest(p, &centroids);
        labels[i] = j;
        inertia += d;
    }
    history.push(inertia);
    KmeansFit {
        labels,
        centroids,
        inertia,
        inertia_history: history,
    }
}

/// Runs `N_INIT` seeded k-means++ restarts and keeps the lowest-inertia fit.
pub(crate) fn run_kmeans(points: &[ClusterPoint], k: usize, seed: u64) -> KmeansFit {
    debug_assert!(k >= 1 && k <= points.len());
    let mut best: Option<KmeansFit> = None;
    for init in 0..N_INIT {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, init as u64));
        let fit = lloyd(points, kmeans_pp_init(points, k, &mut rng));
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    best.unwrap()
}

fn cluster_sse(points: &[ClusterPoint], members: &[usize]) -> f64 {
    let n = members.len() as f64;
    let cx = members.iter().map(|&i| points[i].x).sum::<f64>() / n;
    let cy = members.iter().map(|&i| points[i].y).sum::<f64>() / n;
    let c = ClusterPoint::new(cx, cy);
    members.iter().map(|&i| points[i].distance_sq(&c)).sum()
}

/// Bisecting k-means: repeatedly split the cluster with the largest SSE via
/// 2-means until `k` clusters exist.
pub(crate) fn run_bisecting(points: &[ClusterPoint], k: usize, seed: u64) -> Vec<usize> {
    let mut clusters: Vec<Vec<usize>> = vec![(0..points.len()).collect()];
    let mut round = 0u64;
    while clusters.len() < k {
        let target = clusters
            .iter()
            .enumerate()
            .filter(|(_, m)| m.len() >= 2)
            .max_by(|(ai, a), (bi, b)| {
                cluster_sse(points, a)
                    .total_cmp(&cluster_sse(points, b))
                    .then(bi.cmp(ai))
            })
            .map(|(i, _)| i);
        let Some(target) = target else { break };
        let members = clusters.swap_remove(target);
        let subset: Vec<ClusterPoint> = members.iter().map(|&i| points[i]).collect();
        let fit = run_kmeans(&subset, 2, mix_seed(seed, 0xB15EC7 + round));
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (pos, &idx) in members.iter().enumerate() {
            if fit.labels[pos] == 0 {
                left.push(idx);
            } else {
                right.push(idx);
            }
        }
        // degenerate split (all duplicates): force a one-point peel so the
        // cluster count still grows
        if left.is_empty() || right.is_empty() {
            let mut all = if left.is_empty() { right } else { left };
            let single = vec![all.pop().unwrap()];
            clusters.push(all);
            clusters.push(single);
        } else {
            clusters.push(left);
            clusters.push(right);
        }
        round += 1;
    }
    // stable labels: clusters ordered by smallest member index
    clusters.sort_by_key(|m| *m.iter().min().unwrap());
    let mut labels = vec![0usize; points.len()];
    for (id, members) in clusters.iter().enumerate() {
        for &i in members {
            labels[i] = id;
        }
    }
    labels
}

//! Agglomerative clustering with ward, average, and complete linkage via
//! Lance-Williams updates on the pairwise distance matrix.

use crate::types::{ClusterPoint, Linkage};

struct Matrix {
    n: usize,
    d: Vec<f64>,
}

impl Matrix {
    fn new(n: usize) -> Self {
        Matrix {
            n,
            d: vec![0.0; n * n],
        }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.d[i * self.n + j] = v;
        self.d[j * self.n + i] = v;
    }
}

pub(crate) fn run_agglomerative(
    points: &[ClusterPoint],
    n_clusters: usize,
    linkage: Linkage,
) -> Vec<usize> {
    let n = points.len();
    debug_assert!(n_clusters >= 1 && n_clusters <= n);

    let mut dist = Matrix::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = match linkage {
                // ward works on squared Euclidean distances
                Linkage::Ward => points[i].distance_sq(&points[j]),
                _ => points[i].distance(&points[j]),
            };
            dist.set(i, j, d);
        }
    }

    let mut active: Vec<bool> = vec![true; n];
    let mut size: Vec<usize> = vec![1; n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut remaining = n;

    while remaining > n_clusters {
        // closest active pair; ties broken by smallest (i, j)
        let mut best = (usize::MAX, usize::MAX);
        let mut best_d = f64::INFINITY;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for (j, &alive) in active.iter().enumerate().skip(i + 1) {
                if !alive {
                    continue;
                }
                let d = dist.get(i, j);
                if d < best_d {
                    best_d = d;
                    best = (i, j);
                }
            }
        }
        let (a, b) = best;
        let (na, nb) = (size[a] as f64, size[b] as f64);
        for c in 0..n {
            if !active[c] || c == a || c == b {
                continue;
            }
            let nc = size[c] as f64;
            let dac = dist.get(a, c);
            let dbc = dist.get(b, c);
            let merged = match linkage {
                Linkage::Complete => dac.max(dbc),
                Linkage::Average => (na * dac + nb * dbc) / (na + nb),
                Linkage::Ward => {
                    ((na + nc) * dac + (nb + nc) * dbc - nc * dist.get(a, b)) / (na + nb + nc)
                }
            };
            dist.set(a, c, merged);
        }
        let moved = std::mem::take(&mut members[b]);
        members[a].extend(moved);
        size[a] += size[b];
        active[b] = false;
        remaining -= 1;
    }

    let mut clusters: Vec<&Vec<usize>> =
        (0..n).filter(|&i| active[i]).map(|i| &members[i]).collect();
    clusters.sort_by_key(|m| *m.iter().min().unwrap());
    let mut labels = vec![0usize; n];
    for (id, m) in clusters.iter().enumerate() {
        for &i in m.iter() {
            labels[i] = id;
        }
    }
    labels
}

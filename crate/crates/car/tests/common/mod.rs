//! Independent reference implementations used to check the library. These are
//! straightforward transcriptions that deliberately share no code with the
//! implementations under test.

#![allow(dead_code)]

use car::types::{ClusterPoint, NOISE};

/// Literal re-evaluation of the cutoff rule: boundary set, gaps, composite
/// scores, argmax, `C = i* - 1`, keep-all when no boundary exists.
pub fn oracle_cutoff(normalized: &[f64], labels: &[i32]) -> usize {
    let n = normalized.len();
    assert_eq!(labels.len(), n);
    let mut boundaries: Vec<usize> = Vec::new();
    for i in 2..=n {
        if labels[i - 1] != labels[i - 2] {
            boundaries.push(i);
        }
    }
    if boundaries.is_empty() {
        return n;
    }
    let gap = |i: usize| normalized[i - 1] - normalized[i - 2];
    let max_gap = boundaries.iter().map(|&i| gap(i)).fold(f64::MIN, f64::max);
    let score = |i: usize| {
        let gap_term = if max_gap > 0.0 { gap(i) / max_gap } else { 0.0 };
        gap_term + i as f64 / n as f64
    };
    let mut best = boundaries[0];
    for &i in &boundaries {
        if score(i) > score(best) {
            best = i;
        }
    }
    best - 1
}

/// Naive O(n^2) silhouette: per-point mean distances to every cluster, noise
/// excluded, singletons contribute zero. Returns `None` when fewer than two
/// non-noise clusters exist or the non-noise points have zero spread.
pub fn oracle_silhouette(points: &[ClusterPoint], labels: &[i32]) -> Option<f64> {
    assert_eq!(points.len(), labels.len());
    let members: Vec<usize> = (0..points.len()).filter(|&i| labels[i] != NOISE).collect();
    let mut clusters: Vec<i32> = members.iter().map(|&i| labels[i]).collect();
    clusters.sort_unstable();
    clusters.dedup();
    if clusters.len() < 2 {
        return None;
    }
    let dist = |i: usize, j: usize| {
        let dx = points[i].x - points[j].x;
        let dy = points[i].y - points[j].y;
        (dx * dx + dy * dy).sqrt()
    };
    if !members
        .iter()
        .any(|&i| members.iter().any(|&j| dist(i, j) > 0.0))
    {
        return None;
    }

    let mut total = 0.0;
    for &i in &members {
        let own: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&j| labels[j] == labels[i] && j != i)
            .collect();
        if own.is_empty() {
            continue; // singleton: s = 0
        }
        let a = own.iter().map(|&j| dist(i, j)).sum::<f64>() / own.len() as f64;
        let mut b = f64::INFINITY;
        for &c in &clusters {
            if c == labels[i] {
                continue;
            }
            let others: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&j| labels[j] == c)
                .collect();
            let mean = others.iter().map(|&j| dist(i, j)).sum::<f64>() / others.len() as f64;
            b = b.min(mean);
        }
        if a.max(b) > 0.0 {
            total += (b - a) / a.max(b);
        }
    }
    Some(total / members.len() as f64)
}

/// Minimum inertia over every assignment of the points into at most `k`
/// non-empty groups, by exhaustive enumeration. Only usable for tiny inputs.
pub fn oracle_min_inertia(points: &[ClusterPoint], k: usize) -> f64 {
    let n = points.len();
    let mut assignment = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let inertia: f64 = (0..k)
            .map(|c| {
                let members: Vec<usize> = (0..n).filter(|&i| assignment[i] == c).collect();
                if members.is_empty() {
                    return 0.0;
                }
                let m = members.len() as f64;
                let cx = members.iter().map(|&i| points[i].x).sum::<f64>() / m;
                let cy = members.iter().map(|&i| points[i].y).sum::<f64>() / m;
                members
                    .iter()
                    .map(|&i| {
                        let dx = points[i].x - cx;
                        let dy = points[i].y - cy;
                        dx * dx + dy * dy
                    })
                    .sum()
            })
            .sum();
        best = best.min(inertia);

        // next assignment in base-k counting order
        let mut pos = 0;
        loop {
            if pos == n {
                return best;
            }
            assignment[pos] += 1;
            if assignment[pos] < k {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Reference DBSCAN by union-find over core points, for cross-checking
/// density reachability. Returns labels with the same partition semantics
/// (cluster ids may differ; noise is `NOISE`).
pub fn oracle_dbscan(points: &[ClusterPoint], eps: f64, min_samples: usize) -> Vec<i32> {
    let n = points.len();
    let eps_sq = eps * eps;
    let close = |i: usize, j: usize| {
        let dx = points[i].x - points[j].x;
        let dy = points[i].y - points[j].y;
        dx * dx + dy * dy <= eps_sq
    };
    let core: Vec<bool> = (0..n)
        .map(|i| (0..n).filter(|&j| close(i, j)).count() >= min_samples)
        .collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in 0..n {
            if core[i] && core[j] && close(i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut labels = vec![NOISE; n];
    let mut next = 0i32;
    let mut seen: Vec<(usize, i32)> = Vec::new();
    for i in 0..n {
        if core[i] {
            let root = find(&mut parent, i);
            let id = match seen.iter().find(|&&(r, _)| r == root) {
                Some(&(_, id)) => id,
                None => {
                    seen.push((root, next));
                    next += 1;
                    next - 1
                }
            };
            labels[i] = id;
        }
    }
    // border points attach to any core neighbor's cluster
    for i in 0..n {
        if !core[i] {
            if let Some(j) = (0..n).find(|&j| core[j] && close(i, j)) {
                labels[i] = labels[j];
            }
        }
    }
    labels
}

/// True iff two label vectors induce the same partition, with noise positions
/// matching exactly.
pub fn same_partition(a: &[i32], b: &[i32]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    for i in 0..a.len() {
        if (a[i] == NOISE) != (b[i] == NOISE) {
            return false;
        }
        for j in (i + 1)..a.len() {
            if (a[i] == a[j]) != (b[i] == b[j]) {
                return false;
            }
        }
    }
    true
}

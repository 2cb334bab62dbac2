//! Simplified single-level BIRCH: points are absorbed into CF entries while
//! the entry radius stays within the threshold, then entry centroids are
//! merged agglomeratively down to `n_clusters`.

use crate::types::ClusterPoint;

#[derive(Debug, Clone)]
struct CfEntry {
    count: f64,
    linear_sum: (f64, f64),
    square_sum: f64,
}

impl CfEntry {
    fn from_point(p: &ClusterPoint) -> Self {
        CfEntry {
            count: 1.0,
            linear_sum: (p.x, p.y),
            square_sum: p.x * p.x + p.y * p.y,
        }
    }

    fn centroid(&self) -> ClusterPoint {
        ClusterPoint::new(
            self.linear_sum.0 / self.count,
            self.linear_sum.1 / self.count,
        )
    }

    fn radius_with(&self, p: &ClusterPoint) -> f64 {
        let count = self.count + 1.0;
        let ls = (self.linear_sum.0 + p.x, self.linear_sum.1 + p.y);
        let ss = self.square_sum + p.x * p.x + p.y * p.y;
        let mean_sq = (ls.0 / count).powi(2) + (ls.1 / count).powi(2);
        (ss / count - mean_sq).max(0.0).sqrt()
    }

    fn absorb(&mut self, p: &ClusterPoint) {
        self.count += 1.0;
        self.linear_sum.0 += p.x;
        self.linear_sum.1 += p.y;
        self.square_sum += p.x * p.x + p.y * p.y;
    }
}

pub(crate) fn run_birch(points: &[ClusterPoint], n_clusters: usize, threshold: f64) -> Vec<usize> {
    let mut entries: Vec<CfEntry> = Vec::new();
    let mut entry_of: Vec<usize> = Vec::with_capacity(points.len());
    for p in points {
        let nearest = entries
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.centroid()
                    .distance_sq(p)
                    .total_cmp(&b.centroid().distance_sq(p))
            })
            .map(|(i, _)| i);
        match nearest {
            Some(i) if entries[i].radius_with(p) <= threshold => {
                entries[i].absorb(p);
                entry_of.push(i);
            }
            _ => {
                entries.push(CfEntry::from_point(p));
                entry_of.push(entries.len() - 1);
            }
        }
    }

    // merge CF centroids down to n_clusters (weighted centroid linkage)
    let mut groups: Vec<Vec<usize>> = (0..entries.len()).map(|i| vec![i]).collect();
    let mut cf: Vec<CfEntry> = entries.clone();
    while groups.len() > n_clusters {
        let mut best = (0, 1);
        let mut best_d = f64::INFINITY;
        for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                let d = cf[i].centroid().distance_sq(&cf[j].centroid());
                if d < best_d {
                    best_d = d;
                    best = (i, j);
                }
            }
        }
        let (a, b) = best;
        let merged_members = groups.remove(b);
        let merged_cf = cf.remove(b);
        groups[a].extend(merged_members);
        cf[a].count += merged_cf.count;
        cf[a].linear_sum.0 += merged_cf.linear_sum.0;
        cf[a].linear_sum.1 += merged_cf.linear_sum.1;
        cf[a].square_sum += merged_cf.square_sum;
    }

    let mut cluster_of_entry = vec![0usize; entries.len()];
    for (gid, g) in groups.iter().enumerate() {
        for &e in g {
            cluster_of_entry[e] = gid;
        }
    }
    // stable labels by first point occurrence
    let raw: Vec<usize> = entry_of.iter().map(|&e| cluster_of_entry[e]).collect();
    let mut remap: Vec<Option<usize>> = vec![None; groups.len()];
    let mut next = 0usize;
    raw.iter()
        .map(|&g| {
            *remap[g].get_or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_groups_split_cleanly() {
        let points = vec![
            ClusterPoint::new(0.0, 0.0),
            ClusterPoint::new(0.02, 0.01),
            ClusterPoint::new(0.9, 0.95),
            ClusterPoint::new(0.95, 1.0),
        ];
        let labels = run_birch(&points, 2, 0.3);
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[2], labels[3]);
        assert_ne!(labels[0], labels[2]);
    }

    #[test]
    fn tight_threshold_still_reaches_requested_count() {
        let points: Vec<ClusterPoint> = (0..8)
            .map(|i| ClusterPoint::new(i as f64 / 8.0, 0.0))
            .collect();
        let labels = run_birch(&points, 3, 0.01);
        let mut distinct = labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), 3);
    }
}

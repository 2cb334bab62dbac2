//! Synthetic query sets with planted relevance structure: a tight block of
//! gold documents, a guaranteed gap, then a band of irrelevant candidates.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::LabeledQuery;
use crate::types::RankedList;

/// Shape of a planted query set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_queries: usize,
    /// `(gold_size, weight)` pairs; sizes must lie in 1..=4.
    pub gold_size_distribution: Vec<(usize, f64)>,
    /// Distance band `(low, high)` for gold documents.
    pub relevant_band: (f64, f64),
    /// Distance band `(low, high)` for irrelevant documents.
    pub irrelevant_band: (f64, f64),
    /// Minimum separation between the bands.
    pub gap: f64,
    /// Noise amplitude; 0 gives evenly spaced, fully deterministic profiles.
    pub jitter: f64,
    pub pool_size: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Mixed-complexity default: gold sizes {1, 2, 4} with weights
    /// {0.5, 0.3, 0.2}.
    pub fn default_spec(n_queries: usize, seed: u64) -> Self {
        SyntheticSpec {
            n_queries,
            gold_size_distribution: vec![(1, 0.5), (2, 0.3), (4, 0.2)],
            relevant_band: (0.05, 0.15),
            irrelevant_band: (0.8, 0.95),
            gap: 0.65,
            jitter: 0.01,
            pool_size: 40,
            seed,
        }
    }

    /// Single fixed gold-block size, no jitter. Used for exact-recovery checks.
    pub fn planted(gold_size: usize, pool_size: usize, seed: u64) -> Self {
        SyntheticSpec {
            n_queries: 1,
            gold_size_distribution: vec![(gold_size, 1.0)],
            jitter: 0.0,
            pool_size,
            seed,
            ..SyntheticSpec::default_spec(1, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: &str| Err(Error::InvalidSpec(m.into()));
        if self.n_queries == 0 {
            return err("n_queries must be >= 1");
        }
        if self.pool_size == 0 {
            return err("pool_size must be >= 1");
        }
        if self.gold_size_distribution.is_empty()
            || self.gold_size_distribution.iter().all(|&(_, w)| w <= 0.0)
        {
            return err("gold_size_distribution needs positive weight");
        }
        for &(size, weight) in &self.gold_size_distribution {
            if !(1..=4).contains(&size) {
                return err("gold sizes must lie in 1..=4");
            }
            if weight < 0.0 || !weight.is_finite() {
                return err("weights must be finite and non-negative");
            }
            if size > self.pool_size {
                return err("gold size exceeds pool size");
            }
        }
        let (rl, rh) = self.relevant_band;
        let (il, ih) = self.irrelevant_band;
        if !(0.0 <= rl && rl <= rh && rh <= 2.0 && 0.0 <= il && il <= ih && ih <= 2.0) {
            return err("bands must be ordered and within [0, 2]");
        }
        if self.gap < 0.0 || rh + self.gap > il {
            return err("bands must be disjoint: relevant.high + gap <= irrelevant.low");
        }
        if self.jitter < 0.0 || !self.jitter.is_finite() {
            return err("jitter must be finite and non-negative");
        }
        Ok(())
    }
}

fn band_positions(low: f64, high: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![low];
    }
    (0..count)
        .map(|i| low + (high - low) * i as f64 / (count - 1) as f64)
        .collect()
}

fn sample_gold_size(spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = spec.gold_size_distribution.iter().map(|&(_, w)| w).sum();
    let mut target = rng.gen::<f64>() * total;
    for &(size, weight) in &spec.gold_size_distribution {
        target -= weight;
        if target <= 0.0 {
            return size;
        }
    }
    spec.gold_size_distribution.last().unwrap().0
}

/// Generates labeled queries with precomputed ranked lists. Gold documents
/// occupy the relevant band (and therefore the top ranks); all other
/// candidates sit past the gap. Deterministic under the spec's seed.
pub fn generate(spec: &SyntheticSpec) -> Result<Vec<LabeledQuery>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut queries = Vec::with_capacity(spec.n_queries);
    for qi in 0..spec.n_queries {
        let gold_count = sample_gold_size(spec, &mut rng);
        let tail_count = spec.pool_size - gold_count;
        let mut pairs: Vec<(String, f64)> = Vec::with_capacity(spec.pool_size);

        let (rl, rh) = spec.relevant_band;
        for (j, base) in band_positions(rl, rh, gold_count).into_iter().enumerate() {
            let noisy = jittered(base, spec.jitter, rl, rh, &mut rng);
            pairs.push((format!("q{qi}-g{j}"), noisy));
        }
        let (il, ih) = spec.irrelevant_band;
        for (j, base) in band_positions(il, ih, tail_count).into_iter().enumerate() {
            let noisy = jittered(base, spec.jitter, il, ih, &mut rng);
            pairs.push((format!("q{qi}-d{j}"), noisy));
        }
        pairs.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

        let gold_ids = (0..gold_count).map(|j| format!("q{qi}-g{j}")).collect();
        queries.push(LabeledQuery {
            query_id: format!("q{qi}"),
            vector: None,
            ranked: Some(RankedList::from_sorted_pairs(format!("q{qi}"), pairs)?),
            gold_ids,
        });
    }
    Ok(queries)
}

fn jittered(base: f64, jitter: f64, low: f64, high: f64, rng: &mut ChaCha8Rng) -> f64 {
    if jitter == 0.0 {
        return base;
    }
    (base + rng.gen_range(-jitter..=jitter)).clamp(low, high)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_gold_sits_alone_before_the_gap() {
        let spec = SyntheticSpec {
            n_queries: 5,
            gold_size_distribution: vec![(1, 1.0)],
            gap: 0.5,
            jitter: 0.0,
            relevant_band: (0.05, 0.1),
            irrelevant_band: (0.6, 0.95),
            pool_size: 10,
            seed: 3,
        };
        for q in generate(&spec).unwrap() {
            let ranked = q.ranked.unwrap();
            assert!(ranked.candidates[0].doc_id.contains("-g0"));
            assert!(ranked.candidates[1..].iter().all(|c| c.raw_distance >= 0.6));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = SyntheticSpec::default_spec(20, 9);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn overlapping_bands_rejected() {
        let mut spec = SyntheticSpec::default_spec(1, 0);
        spec.relevant_band = (0.1, 0.7);
        assert!(matches!(generate(&spec), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn output_satisfies_ranked_list_invariants() {
        let spec = SyntheticSpec::default_spec(30, 17);
        for q in generate(&spec).unwrap() {
            q.ranked.unwrap().validate().unwrap();
        }
    }
}

//! Random-hyperplane locality-sensitive hashing.
//!
//! Each of the `l` tables owns `k` unit hyperplanes through the origin. Bit
//! `j` of a table key is set when the vector lies on the non-negative side of
//! hyperplane `j`, so two vectors at angle `theta` share a table key with
//! probability `(1 - theta/pi)^k`. A query scans the union of the `l` buckets
//! it hashes to and ranks those candidates by Euclidean distance.
//!
//! Hyperplanes are drawn from `ChaCha8Rng::seed_from_u64(seed)`: table by
//! table, bit by bit, `d` standard normals each, then normalized. The same
//! `(params, seed)` therefore gives the same index on every platform.

use std::collections::{HashMap, HashSet};

use rand_distr::{Distribution, StandardNormal};

use crate::domain::{distance, EntryId, FeatureVector};
use crate::error::{Error, Result};
use crate::rng;

pub const DEFAULT_NUM_TABLES: usize = 8;
pub const DEFAULT_BITS_PER_TABLE: usize = 8;
pub const DEFAULT_MAX_CANDIDATES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LshParams {
    pub num_tables: usize,
    pub bits_per_table: usize,
    pub dimension: usize,
    pub seed: u64,
}

impl LshParams {
    pub fn new(dimension: usize, seed: u64) -> Self {
        Self {
            num_tables: DEFAULT_NUM_TABLES,
            bits_per_table: DEFAULT_BITS_PER_TABLE,
            dimension,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_tables == 0 {
            return Err(Error::param("lsh.num_tables", "must be >= 1"));
        }
        if !(1..=64).contains(&self.bits_per_table) {
            return Err(Error::param("lsh.bits_per_table", "must be in 1..=64"));
        }
        if self.dimension == 0 {
            return Err(Error::param("workload.dimension", "must be >= 1"));
        }
        Ok(())
    }
}

/// One bucket key per table; only the low `k` bits of each key are used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    keys: Vec<u64>,
}

impl Signature {
    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    /// Number of tables in which both signatures name the same bucket.
    pub fn shared_tables(&self, other: &Signature) -> usize {
        self.keys
            .iter()
            .zip(&other.keys)
            .filter(|(a, b)| a == b)
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct LshIndex {
    params: LshParams,
    /// `num_tables * bits_per_table` unit vectors, table-major.
    hyperplanes: Vec<Vec<f64>>,
    tables: Vec<HashMap<u64, Vec<EntryId>>>,
    entries: HashMap<EntryId, FeatureVector>,
}

/// Candidates returned by a query plus how many stored vectors were scored.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub neighbors: Vec<(EntryId, f64)>,
    pub scanned: usize,
}

impl LshIndex {
    pub fn build(params: LshParams) -> Result<Self> {
        params.validate()?;
        let mut gen = rng::seeded(params.seed);
        let count = params.num_tables * params.bits_per_table;
        let mut hyperplanes = Vec::with_capacity(count);
        while hyperplanes.len() < count {
            let mut h: Vec<f64> = (0..params.dimension)
                .map(|_| StandardNormal.sample(&mut gen))
                .collect();
            let norm = h.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            h.iter_mut().for_each(|v| *v /= norm);
            hyperplanes.push(h);
        }
        Ok(Self {
            params,
            hyperplanes,
            tables: vec![HashMap::new(); params.num_tables],
            entries: HashMap::new(),
        })
    }

    pub fn params(&self) -> &LshParams {
        &self.params
    }

    pub fn hyperplanes(&self) -> &[Vec<f64>] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: EntryId) -> bool {
        self.entries.contains_key(&id)
    }

    pub fn get(&self, id: EntryId) -> Option<&FeatureVector> {
        self.entries.get(&id)
    }

    /// Total ids held across all buckets of all tables.
    pub fn bucket_references(&self) -> usize {
        self.tables
            .iter()
            .flat_map(|t| t.values())
            .map(Vec::len)
            .sum()
    }

    pub fn signature(&self, v: &FeatureVector) -> Result<Signature> {
        v.check_dimension(self.params.dimension)?;
        let k = self.params.bits_per_table;
        let keys = self
            .hyperplanes
            .chunks(k)
            .map(|planes| {
                planes.iter().enumerate().fold(0u64, |key, (bit, h)| {
                    if v.dot(h) >= 0.0 {
                        key | (1 << bit)
                    } else {
                        key
                    }
                })
            })
            .collect();
        Ok(Signature { keys })
    }

    pub fn insert(&mut self, id: EntryId, v: FeatureVector) -> Result<()> {
        if self.entries.contains_key(&id) {
            return Err(Error::DuplicateEntry(id));
        }
        let sig = self.signature(&v)?;
        for (table, key) in self.tables.iter_mut().zip(sig.keys) {
            table.entry(key).or_default().push(id);
        }
        self.entries.insert(id, v);
        Ok(())
    }

    pub fn remove(&mut self, id: EntryId) -> Result<FeatureVector> {
        let v = self.entries.remove(&id).ok_or(Error::UnknownEntry(id))?;
        let sig = self.signature(&v)?;
        for (table, key) in self.tables.iter_mut().zip(sig.keys) {
            if let Some(bucket) = table.get_mut(&key) {
                bucket.retain(|e| *e != id);
                if bucket.is_empty() {
                    table.remove(&key);
                }
            }
        }
        Ok(v)
    }

    /// Union of the buckets `q` hashes to, unranked.
    pub fn candidates(&self, q: &FeatureVector) -> Result<HashSet<EntryId>> {
        let sig = self.signature(q)?;
        let mut out = HashSet::new();
        for (table, key) in self.tables.iter().zip(&sig.keys) {
            if let Some(bucket) = table.get(key) {
                out.extend(bucket.iter().copied());
            }
        }
        Ok(out)
    }

    /// Nearest candidates by distance (ties by id), at most `max_candidates`.
    pub fn query(&self, q: &FeatureVector, max_candidates: usize) -> Result<Vec<(EntryId, f64)>> {
        Ok(self.query_with_stats(q, max_candidates)?.neighbors)
    }

    pub fn query_with_stats(&self, q: &FeatureVector, max_candidates: usize) -> Result<QueryResult> {
        if max_candidates == 0 {
            return Err(Error::param("lsh.max_candidates", "must be >= 1"));
        }
        let candidates = self.candidates(q)?;
        let scanned = candidates.len();
        let mut neighbors = candidates
            .into_iter()
            .map(|id| {
                let d = distance(q, &self.entries[&id])?;
                Ok((id, d))
            })
            .collect::<Result<Vec<_>>>()?;
        neighbors.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        neighbors.truncate(max_candidates);
        Ok(QueryResult { neighbors, scanned })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::Normal;

    fn params(l: usize, k: usize, d: usize, seed: u64) -> LshParams {
        LshParams {
            num_tables: l,
            bits_per_table: k,
            dimension: d,
            seed,
        }
    }

    fn random_vec(rng: &mut impl Rng, d: usize, scale: f64) -> FeatureVector {
        let v = (0..d)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
            .collect();
        FeatureVector::new(v).unwrap()
    }

    #[test]
    fn build_is_deterministic() {
        let a = LshIndex::build(params(4, 8, 16, 7)).unwrap();
        let b = LshIndex::build(params(4, 8, 16, 7)).unwrap();
        assert_eq!(a.hyperplanes(), b.hyperplanes());
    }

    #[test]
    fn different_seeds_give_different_planes() {
        let a = LshIndex::build(params(4, 8, 16, 1)).unwrap();
        let b = LshIndex::build(params(4, 8, 16, 2)).unwrap();
        let same = a
            .hyperplanes()
            .iter()
            .zip(b.hyperplanes())
            .filter(|(x, y)| x == y)
            .count();
        assert_eq!(same, 0);
    }

    #[test]
    fn single_plane_and_unit_norm() {
        let idx = LshIndex::build(params(1, 1, 2, 3)).unwrap();
        assert_eq!(idx.hyperplanes().len(), 1);
        let idx = LshIndex::build(params(3, 5, 10, 3)).unwrap();
        assert_eq!(idx.hyperplanes().len(), 15);
        for h in idx.hyperplanes() {
            let n: f64 = h.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(LshIndex::build(params(0, 8, 4, 0)).is_err());
        assert!(LshIndex::build(params(1, 0, 4, 0)).is_err());
        assert!(LshIndex::build(params(1, 65, 4, 0)).is_err());
        assert!(LshIndex::build(params(1, 8, 0, 0)).is_err());
    }

    #[test]
    fn signature_matches_sign_rule() {
        let idx = LshIndex::build(params(3, 6, 5, 11)).unwrap();
        let mut r = rng::seeded(99);
        for _ in 0..50 {
            let v = random_vec(&mut r, 5, 1.0);
            let sig = idx.signature(&v).unwrap();
            assert_eq!(sig, idx.signature(&v).unwrap());
            assert_eq!(sig.keys().len(), 3);
            for (t, key) in sig.keys().iter().enumerate() {
                assert!(*key < (1 << 6));
                for j in 0..6 {
                    let h = &idx.hyperplanes()[t * 6 + j];
                    let bit = (key >> j) & 1 == 1;
                    assert_eq!(bit, v.dot(h) >= 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_projection_hashes_to_one() {
        let idx = LshIndex::build(params(2, 4, 3, 5)).unwrap();
        let sig = idx.signature(&FeatureVector::zeros(3).unwrap()).unwrap();
        assert!(sig.keys().iter().all(|k| *k == 0b1111));
    }

    #[test]
    fn negation_flips_single_bit() {
        let idx = LshIndex::build(params(1, 1, 4, 21)).unwrap();
        let mut r = rng::seeded(1);
        for _ in 0..20 {
            let v = random_vec(&mut r, 4, 1.0);
            let neg = FeatureVector::new(v.as_slice().iter().map(|x| -x).collect()).unwrap();
            assert_ne!(idx.signature(&v).unwrap(), idx.signature(&neg).unwrap());
        }
    }

    #[test]
    fn signature_dimension_mismatch() {
        let idx = LshIndex::build(params(1, 4, 3, 0)).unwrap();
        let v = FeatureVector::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(idx.signature(&v), Err(Error::DimensionMismatch { .. })));
        assert!(idx.query(&v, 4).is_err());
    }

    #[test]
    fn insert_query_remove() {
        let mut idx = LshIndex::build(params(8, 8, 16, 4)).unwrap();
        let mut r = rng::seeded(5);
        assert!(idx.query(&random_vec(&mut r, 16, 1.0), 4).unwrap().is_empty());

        let vs: Vec<_> = (0..20).map(|_| random_vec(&mut r, 16, 1.0)).collect();
        for (i, v) in vs.iter().enumerate() {
            idx.insert(EntryId(i as u64), v.clone()).unwrap();
        }
        assert_eq!(idx.bucket_references(), 8 * 20);
        assert!(matches!(
            idx.insert(EntryId(3), vs[0].clone()),
            Err(Error::DuplicateEntry(EntryId(3)))
        ));

        let hits = idx.query(&vs[7], 4).unwrap();
        assert_eq!(hits[0], (EntryId(7), 0.0));

        idx.remove(EntryId(7)).unwrap();
        assert!(idx
            .query(&vs[7], 16)
            .unwrap()
            .iter()
            .all(|(id, _)| *id != EntryId(7)));
        assert!(matches!(idx.remove(EntryId(7)), Err(Error::UnknownEntry(_))));

        for i in 0..20 {
            if i != 7 {
                idx.remove(EntryId(i)).unwrap();
            }
        }
        assert!(idx.is_empty());
        assert_eq!(idx.bucket_references(), 0);
    }

    #[test]
    fn identical_vectors_share_buckets() {
        let mut idx = LshIndex::build(params(4, 8, 8, 2)).unwrap();
        let mut r = rng::seeded(8);
        let v = random_vec(&mut r, 8, 1.0);
        idx.insert(EntryId(1), v.clone()).unwrap();
        idx.insert(EntryId(2), v.clone()).unwrap();
        let res = idx.query(&v, 8).unwrap();
        assert_eq!(res, vec![(EntryId(1), 0.0), (EntryId(2), 0.0)]);
        for table in &idx.tables {
            assert!(table.values().any(|b| b.contains(&EntryId(1)) && b.contains(&EntryId(2))));
        }
    }

    #[test]
    fn max_candidates_truncates_and_must_be_positive() {
        let mut idx = LshIndex::build(params(2, 1, 4, 2)).unwrap();
        let mut r = rng::seeded(3);
        let q = random_vec(&mut r, 4, 1.0);
        for i in 0..10 {
            idx.insert(EntryId(i), q.clone()).unwrap();
        }
        assert_eq!(idx.query(&q, 3).unwrap().len(), 3);
        assert!(idx.query(&q, 0).is_err());
    }

    /// Near-duplicates of `q` must rank ahead of every unrelated vector;
    /// the exact ranking is checked against a brute-force scan.
    #[test]
    fn near_duplicates_rank_first() {
        let d = 32;
        let mut idx = LshIndex::build(params(8, 8, d, 10)).unwrap();
        let mut r = rng::seeded(77);
        let noise = Normal::new(0.0, 0.01).unwrap();
        let q = random_vec(&mut r, d, 1.0);
        let mut all = Vec::new();
        for i in 0..1000u64 {
            let v = random_vec(&mut r, d, 1.0);
            all.push((EntryId(i), v.clone()));
            idx.insert(EntryId(i), v).unwrap();
        }
        for i in 0..10u64 {
            let v: Vec<f64> = q.as_slice().iter().map(|x| x + r.sample(noise)).collect();
            let v = FeatureVector::new(v).unwrap();
            all.push((EntryId(10_000 + i), v.clone()));
            idx.insert(EntryId(10_000 + i), v).unwrap();
        }
        let mut brute: Vec<_> = all
            .iter()
            .map(|(id, v)| (*id, distance(&q, v).unwrap()))
            .collect();
        brute.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        let expected: Vec<_> = brute[..10].to_vec();
        assert!(expected.iter().all(|(id, _)| id.0 >= 10_000));

        let got = idx.query(&q, 10).unwrap();
        assert_eq!(got, expected);
    }

    /// Exhaustive recall: anything sharing a bucket with the query is a candidate.
    #[test]
    fn recall_matches_signature_oracle() {
        let d = 12;
        let mut idx = LshIndex::build(params(4, 3, d, 31)).unwrap();
        let mut r = rng::seeded(4);
        let stored: Vec<_> = (0..500).map(|_| random_vec(&mut r, d, 1.0)).collect();
        for (i, v) in stored.iter().enumerate() {
            idx.insert(EntryId(i as u64), v.clone()).unwrap();
        }
        for _ in 0..50 {
            let q = random_vec(&mut r, d, 1.0);
            let qs = idx.signature(&q).unwrap();
            let cands = idx.candidates(&q).unwrap();
            for (i, v) in stored.iter().enumerate() {
                let shares = idx.signature(v).unwrap().shared_tables(&qs) > 0;
                assert_eq!(shares, cands.contains(&EntryId(i as u64)));
            }
        }
    }
}

//! Finitely supported scalar sequences over positive integer indices,
//! plus the index-set and index-map machinery used to move supports around.
//!
//! A [`SeqVec`] stores only its nonzero entries; index 0 does not exist.
//! Inserting a zero removes the entry, so two vectors are equal exactly when
//! they have the same support and values.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// How far a predicate-backed index set is scanned before giving up.
const PREDICATE_SCAN_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum SeqError {
    #[error("index {index} is out of range (map length {len})")]
    IndexOutOfRange { index: u64, len: usize },
    #[error("invalid index map: {0}")]
    InvalidIndexMap(String),
    #[error("invalid entry: {0}")]
    InvalidEntry(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("targets {first} and {second} both contain index {value}")]
    NonDisjointTargets { value: u64, first: usize, second: usize },
    #[error("target {target} has no element above {above} within the scan cap")]
    TargetExhausted { target: usize, above: u64 },
    #[error("supports overlap at index {index}")]
    OverlappingSupports { index: u64 },
    #[error("coefficient index {index} exceeds family size {family}")]
    CoefficientOutOfRange { index: u64, family: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// A finitely supported sequence of reals indexed by 1, 2, 3, ...
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeqVec {
    entries: BTreeMap<u64, f64>,
}

impl SeqVec {
    pub fn new() -> Self {
        SeqVec::default()
    }

    /// Build from (index, value) pairs.  Zero values are dropped; index 0 and
    /// duplicate indices are rejected.
    pub fn from_pairs<I: IntoIterator<Item = (u64, f64)>>(pairs: I) -> Result<Self, SeqError> {
        let mut entries = BTreeMap::new();
        for (idx, val) in pairs {
            if idx == 0 {
                return Err(SeqError::InvalidEntry("index 0 is not allowed".into()));
            }
            if !val.is_finite() {
                return Err(SeqError::InvalidEntry(format!(
                    "non-finite value at index {idx}"
                )));
            }
            if val == 0.0 {
                continue;
            }
            if entries.insert(idx, val).is_some() {
                return Err(SeqError::InvalidEntry(format!("duplicate index {idx}")));
            }
        }
        Ok(SeqVec { entries })
    }

    /// Dense construction: values placed at indices 1..=len.
    pub fn from_values(values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i as u64 + 1, *v))
            .collect();
        SeqVec { entries }
    }

    /// The unit vector e_k.
    pub fn unit(k: u64) -> Self {
        assert!(k >= 1, "unit vector index must be >= 1");
        let mut entries = BTreeMap::new();
        entries.insert(k, 1.0);
        SeqVec { entries }
    }

    /// Set one coordinate; setting 0.0 removes the entry.
    pub fn set(&mut self, idx: u64, val: f64) {
        assert!(idx >= 1, "index must be >= 1");
        if val == 0.0 {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, val);
        }
    }

    /// Coordinate read; absent entries are zero.
    pub fn get(&self, idx: u64) -> f64 {
        self.entries.get(&idx).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Ascending list of indices carrying nonzero values.
    pub fn support(&self) -> Vec<u64> {
        self.entries.keys().copied().collect()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    /// Non-increasing rearrangement of the absolute values.
    pub fn rearrangement(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.entries.values().map(|v| v.abs()).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
        vals
    }

    pub fn scale(&self, a: f64) -> SeqVec {
        if a == 0.0 {
            return SeqVec::new();
        }
        SeqVec {
            entries: self.entries.iter().map(|(k, v)| (*k, a * v)).collect(),
        }
    }

    /// Pointwise sum; cancellations drop out of the support.
    pub fn add(&self, other: &SeqVec) -> SeqVec {
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            let cur = entries.entry(*k).or_insert(0.0);
            *cur += v;
            if *cur == 0.0 {
                entries.remove(k);
            }
        }
        SeqVec { entries }
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn abs_sum(&self) -> f64 {
        self.entries.values().map(|v| v.abs()).sum()
    }

    /// Keep only the coordinates lying in `a`.
    pub fn coordinate_projection(&self, a: &IndexSetSpec) -> SeqVec {
        SeqVec {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| a.contains(**k))
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    /// Push the vector forward along `phi`: entry at j moves to phi(j).
    /// Every support index must lie within the domain 1..=phi.len().
    pub fn spread(&self, phi: &IndexMap) -> Result<SeqVec, SeqError> {
        let mut entries = BTreeMap::new();
        for (j, v) in &self.entries {
            let target = phi
                .get(*j)
                .ok_or(SeqError::IndexOutOfRange {
                    index: *j,
                    len: phi.len(),
                })?;
            entries.insert(target, *v);
        }
        Ok(SeqVec { entries })
    }

    /// Pull back along `phi`: result_j = f_{phi(j)} for j = 1..=phi.len().
    pub fn compress(&self, phi: &IndexMap) -> SeqVec {
        let mut entries = BTreeMap::new();
        for j in 1..=phi.len() as u64 {
            let v = self.get(phi.get(j).expect("j in domain"));
            if v != 0.0 {
                entries.insert(j, v);
            }
        }
        SeqVec { entries }
    }

    /// Serialize to the plain-text interchange format: `index value` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{k} {v}\n"));
        }
        out
    }

    /// Parse the plain-text interchange format (`index value` per line;
    /// blank lines and `#` comments are skipped).
    pub fn from_text(text: &str) -> Result<Self, SeqError> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let idx: u64 = it
                .next()
                .unwrap()
                .parse()
                .map_err(|e| SeqError::Parse(format!("line {}: bad index: {e}", lineno + 1)))?;
            let val: f64 = it
                .next()
                .ok_or_else(|| SeqError::Parse(format!("line {}: missing value", lineno + 1)))?
                .parse()
                .map_err(|e| SeqError::Parse(format!("line {}: bad value: {e}", lineno + 1)))?;
            if it.next().is_some() {
                return Err(SeqError::Parse(format!(
                    "line {}: expected `index value`",
                    lineno + 1
                )));
            }
            pairs.push((idx, val));
        }
        SeqVec::from_pairs(pairs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("SeqVec serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, SeqError> {
        serde_json::from_str(text).map_err(|e| SeqError::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct SeqVecRepr {
    entries: Vec<(u64, f64)>,
}

impl Serialize for SeqVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeqVecRepr {
            entries: self.iter().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeqVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SeqVecRepr::deserialize(d)?;
        SeqVec::from_pairs(repr.entries).map_err(D::Error::custom)
    }
}

/// A strictly increasing map {1..K} -> positive integers, stored as the list
/// of its values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexMap {
    values: Vec<u64>,
}

impl IndexMap {
    pub fn new(values: Vec<u64>) -> Result<Self, SeqError> {
        let mut prev = 0u64;
        for (i, &v) in values.iter().enumerate() {
            if v <= prev {
                return Err(SeqError::InvalidIndexMap(format!(
                    "value {v} at position {} is not strictly above {prev}",
                    i + 1
                )));
            }
            prev = v;
        }
        Ok(IndexMap { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at 1-based position k.
    pub fn get(&self, k: u64) -> Option<u64> {
        if k == 0 {
            return None;
        }
        self.values.get(k as usize - 1).copied()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// A subset of the positive integers, given explicitly, as an arithmetic
/// progression, or by a membership predicate.
#[derive(Clone)]
pub enum IndexSetSpec {
    Explicit(Arc<BTreeSet<u64>>),
    /// {start, start+step, start+2*step, ...}
    Progression { start: u64, step: u64 },
    Predicate {
        name: String,
        pred: Arc<dyn Fn(u64) -> bool + Send + Sync>,
    },
}

impl fmt::Debug for IndexSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSetSpec::Explicit(s) => write!(f, "Explicit({s:?})"),
            IndexSetSpec::Progression { start, step } => {
                write!(f, "Progression {{ start: {start}, step: {step} }}")
            }
            IndexSetSpec::Predicate { name, .. } => write!(f, "Predicate({name})"),
        }
    }
}

impl fmt::Display for IndexSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSetSpec::Explicit(s) => {
                let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            IndexSetSpec::Progression { start: 1, step: 2 } => write!(f, "odd"),
            IndexSetSpec::Progression { start: 2, step: 2 } => write!(f, "even"),
            IndexSetSpec::Progression { start, step } => write!(f, "ap:{start},{step}"),
            IndexSetSpec::Predicate { name, .. } => write!(f, "pred:{name}"),
        }
    }
}

impl IndexSetSpec {
    pub fn explicit<I: IntoIterator<Item = u64>>(items: I) -> Result<Self, SeqError> {
        let set: BTreeSet<u64> = items.into_iter().collect();
        if set.contains(&0) {
            return Err(SeqError::InvalidEntry("index 0 is not allowed".into()));
        }
        Ok(IndexSetSpec::Explicit(Arc::new(set)))
    }

    pub fn progression(start: u64, step: u64) -> Result<Self, SeqError> {
        if start == 0 || step == 0 {
            return Err(SeqError::InvalidEntry(
                "progression needs start >= 1 and step >= 1".into(),
            ));
        }
        Ok(IndexSetSpec::Progression { start, step })
    }

    pub fn predicate<F: Fn(u64) -> bool + Send + Sync + 'static>(name: &str, f: F) -> Self {
        IndexSetSpec::Predicate {
            name: name.into(),
            pred: Arc::new(f),
        }
    }

    pub fn odds() -> Self {
        IndexSetSpec::Progression { start: 1, step: 2 }
    }

    pub fn evens() -> Self {
        IndexSetSpec::Progression { start: 2, step: 2 }
    }

    pub fn all() -> Self {
        IndexSetSpec::Progression { start: 1, step: 1 }
    }

    /// Multiples of k: {k, 2k, 3k, ...}.
    pub fn multiples(k: u64) -> Result<Self, SeqError> {
        IndexSetSpec::progression(k, k)
    }

    pub fn contains(&self, j: u64) -> bool {
        if j == 0 {
            return false;
        }
        match self {
            IndexSetSpec::Explicit(s) => s.contains(&j),
            IndexSetSpec::Progression { start, step } => {
                j >= *start && (j - start) % step == 0
            }
            IndexSetSpec::Predicate { pred, .. } => pred(j),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, IndexSetSpec::Explicit(_))
    }

    /// Smallest member strictly above `m`, if one can be found.
    pub fn next_above(&self, m: u64) -> Option<u64> {
        match self {
            IndexSetSpec::Explicit(s) => s.range(m + 1..).next().copied(),
            IndexSetSpec::Progression { start, step } => {
                if m < *start {
                    Some(*start)
                } else {
                    // first start + k*step > m
                    let k = (m - start) / step + 1;
                    Some(start + k * step)
                }
            }
            IndexSetSpec::Predicate { pred, .. } => {
                (m + 1..=m.saturating_add(PREDICATE_SCAN_CAP)).find(|j| pred(*j))
            }
        }
    }

    /// Ascending members up to and including `limit`.
    pub fn members_up_to(&self, limit: u64) -> Vec<u64> {
        match self {
            IndexSetSpec::Explicit(s) => s.range(..=limit).copied().collect(),
            IndexSetSpec::Progression { start, step } => {
                let mut out = Vec::new();
                let mut v = *start;
                while v <= limit {
                    out.push(v);
                    v += step;
                }
                out
            }
            IndexSetSpec::Predicate { pred, .. } => (1..=limit).filter(|j| pred(*j)).collect(),
        }
    }
}

/// Greedy pointwise-minimal strictly increasing map carrying the k-th block
/// into the target set with the same label.
///
/// `blocks` must be explicit finite sets partitioning {1..K}; `targets` is a
/// pairwise-disjoint list of the same length.  The map is built by the
/// recursion phi(k) = min{ j in target[nu(k)] : j > phi(k-1) }, phi(0) = 0,
/// where nu(k) is the label of the block containing k.  Disjointness of the
/// targets is audited on the full range the construction touched.
pub fn interleave_map(
    blocks: &[IndexSetSpec],
    targets: &[IndexSetSpec],
) -> Result<IndexMap, SeqError> {
    if blocks.len() != targets.len() {
        return Err(SeqError::InvalidPartition(format!(
            "{} blocks but {} targets",
            blocks.len(),
            targets.len()
        )));
    }
    let mut owner: BTreeMap<u64, usize> = BTreeMap::new();
    for (n, b) in blocks.iter().enumerate() {
        let set = match b {
            IndexSetSpec::Explicit(s) => s,
            other => {
                return Err(SeqError::InvalidPartition(format!(
                    "block {} must be an explicit finite set, got {other}",
                    n + 1
                )))
            }
        };
        for &k in set.iter() {
            if owner.insert(k, n).is_some() {
                return Err(SeqError::InvalidPartition(format!(
                    "index {k} belongs to two blocks"
                )));
            }
        }
    }
    let cap = owner.len() as u64;
    if cap > 0 {
        let min = *owner.keys().next().unwrap();
        let max = *owner.keys().next_back().unwrap();
        if min != 1 || max != cap {
            return Err(SeqError::InvalidPartition(format!(
                "blocks must partition 1..={cap}, found range {min}..={max}"
            )));
        }
    }

    let mut phi = Vec::with_capacity(cap as usize);
    let mut prev = 0u64;
    for k in 1..=cap {
        let n = owner[&k];
        let next = targets[n].next_above(prev).ok_or(SeqError::TargetExhausted {
            target: n + 1,
            above: prev,
        })?;
        phi.push(next);
        prev = next;
    }

    // Disjointness audit over the range the greedy construction covered.
    let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
    for (ti, t) in targets.iter().enumerate() {
        for v in t.members_up_to(prev) {
            if let Some(&fi) = seen.get(&v) {
                return Err(SeqError::NonDisjointTargets {
                    value: v,
                    first: fi + 1,
                    second: ti + 1,
                });
            }
            seen.insert(v, ti);
        }
    }

    IndexMap::new(phi)
}

/// Sum of `coeffs[n] * members[n-1]` for disjointly supported members.
///
/// Coefficients are indexed by member number (1-based); an index beyond the
/// family or a support collision is an error.
pub fn disjoint_sum(members: &[SeqVec], coeffs: &SeqVec) -> Result<SeqVec, SeqError> {
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    for m in members {
        for (idx, _) in m.iter() {
            if !seen.insert(idx) {
                return Err(SeqError::OverlappingSupports { index: idx });
            }
        }
    }
    let mut out = BTreeMap::new();
    for (n, a) in coeffs.iter() {
        if n as usize > members.len() {
            return Err(SeqError::CoefficientOutOfRange {
                index: n,
                family: members.len(),
            });
        }
        for (idx, v) in members[n as usize - 1].iter() {
            let val = a * v;
            if val != 0.0 {
                out.insert(idx, val);
            }
        }
    }
    Ok(SeqVec { entries: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(pairs: &[(u64, f64)]) -> SeqVec {
        SeqVec::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn support_is_ascending_and_zero_free() {
        let f = vec_of(&[(3, -2.0), (1, 0.5), (7, 0.0)]);
        assert_eq!(f.support(), vec![1, 3]);
        assert_eq!(f.get(7), 0.0);
    }

    #[test]
    fn rearrangement_sorts_absolute_values() {
        let f = vec_of(&[(1, -3.0), (2, 1.0), (3, 2.0)]);
        assert_eq!(f.rearrangement(), vec![3.0, 2.0, 1.0]);
        assert!(SeqVec::new().rearrangement().is_empty());
    }

    #[test]
    fn projection_onto_evens() {
        let f = vec_of(&[(1, 1.0), (2, 2.0), (3, 3.0)]);
        let p = f.coordinate_projection(&IndexSetSpec::evens());
        assert_eq!(p.support(), vec![2]);
        assert_eq!(p.get(2), 2.0);
        // idempotent
        assert_eq!(p.coordinate_projection(&IndexSetSpec::evens()), p);
    }

    #[test]
    fn spread_moves_support_and_compress_undoes_it() {
        let f = vec_of(&[(1, 5.0), (2, 6.0)]);
        let phi = IndexMap::new(vec![2, 5]).unwrap();
        let g = f.spread(&phi).unwrap();
        assert_eq!(g.support(), vec![2, 5]);
        assert_eq!(g.get(5), 6.0);
        assert_eq!(g.compress(&phi), f);
        // out-of-domain support index
        let h = vec_of(&[(3, 1.0)]);
        assert!(h.spread(&phi).is_err());
    }

    #[test]
    fn compress_drops_coordinates_missed_by_the_map() {
        let f = vec_of(&[(2, 7.0), (3, 9.0)]);
        let phi = IndexMap::new(vec![2, 4]).unwrap();
        let g = f.compress(&phi);
        assert_eq!(g.support(), vec![1]);
        assert_eq!(g.get(1), 7.0);
    }

    #[test]
    fn interleave_two_blocks_into_odds_and_evens() {
        let blocks = vec![
            IndexSetSpec::explicit([1, 3]).unwrap(),
            IndexSetSpec::explicit([2]).unwrap(),
        ];
        let targets = vec![IndexSetSpec::odds(), IndexSetSpec::evens()];
        let phi = interleave_map(&blocks, &targets).unwrap();
        assert_eq!(phi.values(), &[1, 2, 3]);
    }

    #[test]
    fn interleave_single_block_into_multiples_of_three() {
        let blocks = vec![IndexSetSpec::explicit([1, 2, 3]).unwrap()];
        let targets = vec![IndexSetSpec::multiples(3).unwrap()];
        let phi = interleave_map(&blocks, &targets).unwrap();
        assert_eq!(phi.values(), &[3, 6, 9]);
    }

    #[test]
    fn interleave_respects_previous_position_across_blocks() {
        let blocks = vec![
            IndexSetSpec::explicit([1]).unwrap(),
            IndexSetSpec::explicit([2]).unwrap(),
        ];
        let targets = vec![
            IndexSetSpec::multiples(5).unwrap(),
            IndexSetSpec::evens(),
        ];
        let phi = interleave_map(&blocks, &targets).unwrap();
        assert_eq!(phi.values(), &[5, 6]);
    }

    #[test]
    fn interleave_rejects_bad_partitions_and_overlapping_targets() {
        // gap: {1,3} alone does not cover 1..=2
        let blocks = vec![IndexSetSpec::explicit([1, 3]).unwrap()];
        let targets = vec![IndexSetSpec::odds()];
        assert!(matches!(
            interleave_map(&blocks, &targets),
            Err(SeqError::InvalidPartition(_))
        ));

        let blocks = vec![
            IndexSetSpec::explicit([1]).unwrap(),
            IndexSetSpec::explicit([2]).unwrap(),
        ];
        let targets = vec![IndexSetSpec::odds(), IndexSetSpec::all()];
        assert!(matches!(
            interleave_map(&blocks, &targets),
            Err(SeqError::NonDisjointTargets { .. })
        ));
    }

    #[test]
    fn disjoint_sum_scales_and_rejects_overlap() {
        let f1 = vec_of(&[(1, 1.0), (3, 0.5)]);
        let f2 = vec_of(&[(2, 1.0), (4, 0.5)]);
        let coeffs = SeqVec::from_values(&[2.0, -1.0]);
        let g = disjoint_sum(&[f1.clone(), f2.clone()], &coeffs).unwrap();
        assert_eq!(g.get(1), 2.0);
        assert_eq!(g.get(4), -0.5);
        assert!(disjoint_sum(&[f1.clone(), f1], &coeffs).is_err());
        // all-zero coefficients give the zero vector
        let z = disjoint_sum(&[f2], &SeqVec::new()).unwrap();
        assert!(z.is_empty());
    }

    #[test]
    fn json_round_trip_keeps_entries_ascending() {
        let f = vec_of(&[(7, 0.5), (2, -1.0)]);
        let js = f.to_json();
        assert_eq!(js, r#"{"entries":[[2,-1.0],[7,0.5]]}"#);
        assert_eq!(SeqVec::from_json(&js).unwrap(), f);
        // zeros are canonicalized away on read
        let g = SeqVec::from_json(r#"{"entries":[[1,0.0],[2,3.0]]}"#).unwrap();
        assert_eq!(g.support(), vec![2]);
        // duplicate indices are rejected
        assert!(SeqVec::from_json(r#"{"entries":[[1,1.0],[1,2.0]]}"#).is_err());
    }

    #[test]
    fn text_round_trip() {
        let f = vec_of(&[(1, 1.5), (10, -2.0)]);
        let g = SeqVec::from_text(&f.to_text()).unwrap();
        assert_eq!(f, g);
    }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest level storable with Morton keys (`u128`, shift by at most 63 per axis).
pub const MAX_LEVEL: u32 = 63;

/// Cell budget for dense levels and filled subcubes.
pub const CELL_LIMIT: f64 = 1e7;

/// A level switches to dense storage once more than this fraction of its cubes is set.
const DENSE_FRACTION: f64 = 0.25;

/// The dyadic cube `Q_{j,m} = 2^{-j}([0,1)^d + m)` inside the unit cube.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicIndex {
    pub j: u32,
    pub m: Vec<u64>,
}

impl DyadicIndex {
    pub fn new(j: u32, m: Vec<u64>) -> DyadicIndex {
        DyadicIndex { j, m }
    }

    /// The cube at level `j` whose corner is the origin.
    pub fn origin(j: u32, d: u32) -> DyadicIndex {
        DyadicIndex { j, m: vec![0; d as usize] }
    }
}

/// Interleave the bits of `m` (most significant first), so that the code of the
/// parent cube is `code >> d`.
pub fn morton_encode(m: &[u64], j: u32) -> u128 {
    let mut code = 0u128;
    for b in (0..j).rev() {
        for &mi in m {
            code = (code << 1) | u128::from((mi >> b) & 1);
        }
    }
    code
}

pub fn morton_decode(code: u128, j: u32, d: u32) -> Vec<u64> {
    let mut m = vec![0u64; d as usize];
    let mut shift = j * d;
    for b in (0..j).rev() {
        for mi in m.iter_mut() {
            shift -= 1;
            *mi |= (((code >> shift) & 1) as u64) << b;
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
enum LevelStore {
    Sparse(BTreeMap<u128, f64>),
    Dense(Vec<f64>),
}

impl LevelStore {
    fn nnz(&self) -> usize {
        match self {
            LevelStore::Sparse(map) => map.len(),
            LevelStore::Dense(v) => v.iter().filter(|x| **x != 0.0).count(),
        }
    }
}

/// A non-negative coefficient sequence `λ_{j,m}` on the dyadic cubes of the unit cube,
/// truncated at level `J`.
///
/// Entries are stored per level, keyed by Morton code; absent entries are zero. A
/// level is kept in a `BTreeMap` until it is more than a quarter full, then moved to a
/// flat array in Morton order.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicSeq {
    d: u32,
    max_level: u32,
    levels: Vec<LevelStore>,
}

fn level_cells(j: u32, d: u32) -> f64 {
    (f64::from(j) * f64::from(d)).exp2()
}

impl DyadicSeq {
    /// The zero sequence.
    pub fn new(d: u32, max_level: u32) -> Result<DyadicSeq> {
        if d == 0 {
            return Err(invalid("dimension d must be positive"));
        }
        if max_level > MAX_LEVEL || max_level * d > 128 {
            return Err(invalid(format!(
                "truncation level {max_level} in dimension {d} exceeds the 128-bit cube index"
            )));
        }
        let levels = (0..=max_level).map(|_| LevelStore::Sparse(BTreeMap::new())).collect();
        Ok(DyadicSeq { d, max_level, levels })
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    /// Truncation level `J`.
    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    fn check_index(&self, idx: &DyadicIndex) -> Result<()> {
        if idx.j > self.max_level {
            return Err(invalid(format!("level {} exceeds truncation {}", idx.j, self.max_level)));
        }
        if idx.m.len() != self.d as usize {
            return Err(Error::DimensionMismatch(self.d, idx.m.len() as u32));
        }
        let side = 1u128 << idx.j;
        if idx.m.iter().any(|&mi| u128::from(mi) >= side) {
            return Err(invalid(format!("cube {:?} at level {} leaves the unit cube", idx.m, idx.j)));
        }
        Ok(())
    }

    /// Set `λ_{j,m} = |v|`; zero removes the entry.
    pub fn insert(&mut self, idx: &DyadicIndex, v: f64) -> Result<()> {
        if !v.is_finite() {
            return Err(invalid(format!("coefficients must be finite, got {v}")));
        }
        self.check_index(idx)?;
        let code = morton_encode(&idx.m, idx.j);
        self.set_code(idx.j, code, v.abs());
        Ok(())
    }

    fn set_code(&mut self, j: u32, code: u128, v: f64) {
        let d = self.d;
        let store = &mut self.levels[j as usize];
        match store {
            LevelStore::Dense(vals) => vals[code as usize] = v,
            LevelStore::Sparse(map) => {
                if v == 0.0 {
                    map.remove(&code);
                } else {
                    map.insert(code, v);
                }
                let cells = level_cells(j, d);
                if cells <= CELL_LIMIT && map.len() as f64 > DENSE_FRACTION * cells {
                    let mut vals = vec![0.0; cells as usize];
                    for (&c, &x) in map.iter() {
                        vals[c as usize] = x;
                    }
                    *store = LevelStore::Dense(vals);
                }
            }
        }
    }

    pub fn get(&self, idx: &DyadicIndex) -> f64 {
        if self.check_index(idx).is_err() {
            return 0.0;
        }
        self.get_code(idx.j, morton_encode(&idx.m, idx.j))
    }

    pub(crate) fn get_code(&self, j: u32, code: u128) -> f64 {
        match &self.levels[j as usize] {
            LevelStore::Sparse(map) => map.get(&code).copied().unwrap_or(0.0),
            LevelStore::Dense(vals) => vals[code as usize],
        }
    }

    /// Set every level-`j` cube inside `Q_{j0,0}` to `v`.
    pub fn fill_subcube(&mut self, j0: u32, j: u32, v: f64) -> Result<()> {
        if j < j0 || j > self.max_level {
            return Err(invalid(format!("fill level {j} must lie in [{j0}, {}]", self.max_level)));
        }
        let cells = level_cells(j - j0, self.d);
        if cells > CELL_LIMIT {
            return Err(Error::MemoryGuard { cells, limit: CELL_LIMIT });
        }
        let v = v.abs();
        let total = level_cells(j, self.d);
        if total <= CELL_LIMIT && cells > DENSE_FRACTION * total {
            if let LevelStore::Sparse(map) = &self.levels[j as usize] {
                let mut vals = vec![0.0; total as usize];
                for (&c, &x) in map.iter() {
                    vals[c as usize] = x;
                }
                self.levels[j as usize] = LevelStore::Dense(vals);
            }
        }
        for code in 0..cells as u128 {
            self.set_code(j, code, v);
        }
        Ok(())
    }

    /// Number of non-zero entries.
    pub fn nnz(&self) -> usize {
        self.levels.iter().map(LevelStore::nnz).sum()
    }

    pub fn is_dense_level(&self, j: u32) -> bool {
        matches!(self.levels.get(j as usize), Some(LevelStore::Dense(_)))
    }

    /// Non-zero entries of level `j` as `(morton code, value)` in increasing code order.
    pub fn level_entries(&self, j: u32) -> Vec<(u128, f64)> {
        match &self.levels[j as usize] {
            LevelStore::Sparse(map) => map.iter().map(|(&c, &v)| (c, v)).collect(),
            LevelStore::Dense(vals) => vals
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(c, &v)| (c as u128, v))
                .collect(),
        }
    }

    /// Dense values of level `j` in Morton order, if the level is stored densely.
    pub(crate) fn dense_level(&self, j: u32) -> Option<&[f64]> {
        match &self.levels[j as usize] {
            LevelStore::Dense(v) => Some(v),
            LevelStore::Sparse(_) => None,
        }
    }

    /// All non-zero entries, level by level in Morton order.
    pub fn iter(&self) -> impl Iterator<Item = (DyadicIndex, f64)> + '_ {
        (0..=self.max_level).flat_map(move |j| {
            self.level_entries(j)
                .into_iter()
                .map(move |(c, v)| (DyadicIndex { j, m: morton_decode(c, j, self.d) }, v))
        })
    }

    /// Largest entry of level `j` (zero for empty levels).
    pub fn level_max(&self, j: u32) -> f64 {
        match &self.levels[j as usize] {
            LevelStore::Sparse(map) => map.values().fold(0.0, |a, &b| a.max(b)),
            LevelStore::Dense(vals) => vals.iter().fold(0.0, |a, &b| a.max(b)),
        }
    }

    pub fn scale(&self, c: f64) -> DyadicSeq {
        let c = c.abs();
        let mut out = self.clone();
        for store in &mut out.levels {
            match store {
                LevelStore::Sparse(map) => {
                    if c == 0.0 {
                        map.clear();
                    } else {
                        map.values_mut().for_each(|v| *v *= c);
                    }
                }
                LevelStore::Dense(vals) => vals.iter_mut().for_each(|v| *v *= c),
            }
        }
        out
    }

    /// `|λ − μ|` entrywise, truncated at the larger of the two levels.
    pub fn abs_diff(&self, other: &DyadicSeq) -> Result<DyadicSeq> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        let mut out = DyadicSeq::new(self.d, self.max_level.max(other.max_level))?;
        for j in 0..=out.max_level {
            let a = if j <= self.max_level { self.level_entries(j) } else { Vec::new() };
            let b = if j <= other.max_level { other.level_entries(j) } else { Vec::new() };
            let mut merged: BTreeMap<u128, f64> = a.into_iter().collect();
            for (c, v) in b {
                let e = merged.entry(c).or_insert(0.0);
                *e = (*e - v).abs();
            }
            // codes only in `a` keep their value, which is already |a - 0|
            for (c, v) in merged {
                if v != 0.0 {
                    out.set_code(j, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Entrywise maximum with `other`.
    pub fn max_with(&self, other: &DyadicSeq) -> Result<DyadicSeq> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        let mut out = DyadicSeq::new(self.d, self.max_level.max(other.max_level))?;
        for src in [self, other] {
            for j in 0..=src.max_level {
                for (c, v) in src.level_entries(j) {
                    let cur = out.get_code(j, c);
                    out.set_code(j, c, cur.max(v));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SeqEntry {
    j: u32,
    m: Vec<u64>,
    v: f64,
}

#[derive(Serialize, Deserialize)]
struct SeqDoc {
    d: u32,
    #[serde(rename = "J")]
    max_level: u32,
    entries: Vec<SeqEntry>,
}

impl Serialize for DyadicSeq {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries: Vec<SeqEntry> = self.iter().map(|(idx, v)| SeqEntry { j: idx.j, m: idx.m, v }).collect();
        entries.sort_by(|a, b| (a.j, &a.m).cmp(&(b.j, &b.m)));
        SeqDoc { d: self.d, max_level: self.max_level, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DyadicSeq {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = SeqDoc::deserialize(deserializer)?;
        let mut seq = DyadicSeq::new(doc.d, doc.max_level).map_err(serde::de::Error::custom)?;
        for e in doc.entries {
            seq.insert(&DyadicIndex { j: e.j, m: e.m }, e.v).map_err(serde::de::Error::custom)?;
        }
        Ok(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morton_parent_is_a_shift() {
        for j in 1..6u32 {
            for x in 0..(1u64 << j) {
                for y in 0..(1u64 << j) {
                    let c = morton_encode(&[x, y], j);
                    assert_eq!(morton_decode(c, j, 2), vec![x, y]);
                    assert_eq!(c >> 2, morton_encode(&[x >> 1, y >> 1], j - 1));
                }
            }
        }
    }

    #[test]
    fn insert_get_and_bounds() {
        let mut s = DyadicSeq::new(1, 3).unwrap();
        s.insert(&DyadicIndex::new(3, vec![2]), -0.25).unwrap();
        assert_eq!(s.get(&DyadicIndex::new(3, vec![2])), 0.25);
        assert_eq!(s.get(&DyadicIndex::new(3, vec![3])), 0.0);
        assert!(s.insert(&DyadicIndex::new(3, vec![8]), 1.0).is_err());
        assert!(s.insert(&DyadicIndex::new(4, vec![0]), 1.0).is_err());
        assert!(s.insert(&DyadicIndex::new(1, vec![0, 0]), 1.0).is_err());
        s.insert(&DyadicIndex::new(3, vec![2]), 0.0).unwrap();
        assert_eq!(s.nnz(), 0);
    }

    #[test]
    fn densifies_past_a_quarter() {
        let mut s = DyadicSeq::new(2, 2).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                s.insert(&DyadicIndex::new(2, vec![x, y]), 1.0).unwrap();
            }
        }
        assert!(!s.is_dense_level(2));
        s.insert(&DyadicIndex::new(2, vec![3, 3]), 2.0).unwrap();
        assert!(s.is_dense_level(2));
        assert_eq!(s.nnz(), 5);
        assert_eq!(s.get(&DyadicIndex::new(2, vec![3, 3])), 2.0);
    }

    #[test]
    fn fill_counts_cubes() {
        let mut s = DyadicSeq::new(1, 3).unwrap();
        s.fill_subcube(1, 3, 0.5).unwrap();
        assert_eq!(s.nnz(), 4);
        assert!(s.iter().all(|(idx, _)| idx.m[0] < 4));
        let mut big = DyadicSeq::new(2, 20).unwrap();
        assert!(matches!(big.fill_subcube(0, 20, 1.0), Err(Error::MemoryGuard { .. })));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"d":1,"J":5,"entries":[{"j":3,"m":[2],"v":0.25},{"j":0,"m":[0],"v":1.0}]}"#;
        let s: DyadicSeq = serde_json::from_str(text).unwrap();
        assert_eq!(s.nnz(), 2);
        let out = serde_json::to_string(&s).unwrap();
        assert_eq!(out, r#"{"d":1,"J":5,"entries":[{"j":0,"m":[0],"v":1.0},{"j":3,"m":[2],"v":0.25}]}"#);
    }

    #[test]
    fn abs_diff_covers_both_supports() {
        let mut a = DyadicSeq::new(1, 2).unwrap();
        let mut b = DyadicSeq::new(1, 3).unwrap();
        a.insert(&DyadicIndex::new(1, vec![0]), 1.0).unwrap();
        a.insert(&DyadicIndex::new(2, vec![1]), 3.0).unwrap();
        b.insert(&DyadicIndex::new(2, vec![1]), 1.0).unwrap();
        b.insert(&DyadicIndex::new(3, vec![7]), 2.0).unwrap();
        let c = a.abs_diff(&b).unwrap();
        assert_eq!(c.max_level(), 3);
        assert_eq!(c.get(&DyadicIndex::new(1, vec![0])), 1.0);
        assert_eq!(c.get(&DyadicIndex::new(2, vec![1])), 2.0);
        assert_eq!(c.get(&DyadicIndex::new(3, vec![7])), 2.0);
    }
}

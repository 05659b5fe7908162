//! Subsets of marked-point labels `{1, …, m}`, partitions into four blocks,
//! and partition shapes (orbits under relabelings fixing a special label).
//!
//! Labels are 1-based. A [`Subset`] stores label `i` in bit `i - 1`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of marked points.
pub const MAX_LABELS: usize = 30;

fn check_size(m: usize) -> Result<()> {
    if m == 0 || m > MAX_LABELS {
        return Err(Error::UnsupportedSize(m));
    }
    Ok(())
}

/// The label set `{1, …, m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabelSet {
    m: u8,
}

impl LabelSet {
    pub fn new(m: usize) -> Result<Self> {
        check_size(m)?;
        Ok(Self { m: m as u8 })
    }

    pub fn m(self) -> usize {
        self.m as usize
    }

    pub fn full(self) -> Subset {
        Subset::full(self.m())
    }

    pub fn labels(self) -> impl Iterator<Item = usize> {
        1..=self.m()
    }
}

/// A subset of `{1, …, m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    mask: u32,
    m: u8,
}

impl Subset {
    pub fn from_labels<I: IntoIterator<Item = usize>>(m: usize, labels: I) -> Result<Self> {
        check_size(m)?;
        let mut mask = 0u32;
        for label in labels {
            if label == 0 || label > m {
                return Err(Error::LabelOutOfRange { label, m });
            }
            mask |= 1 << (label - 1);
        }
        Ok(Self { mask, m: m as u8 })
    }

    pub fn from_mask(m: usize, mask: u32) -> Result<Self> {
        check_size(m)?;
        if mask >> m != 0 {
            let label = 32 - mask.leading_zeros() as usize;
            return Err(Error::LabelOutOfRange { label, m });
        }
        Ok(Self { mask, m: m as u8 })
    }

    pub fn singleton(m: usize, label: usize) -> Result<Self> {
        Self::from_labels(m, [label])
    }

    /// `{1, …, m}`. Panics if `m` is out of range.
    pub fn full(m: usize) -> Self {
        assert!((1..=MAX_LABELS).contains(&m));
        Self {
            mask: full_mask(m),
            m: m as u8,
        }
    }

    pub fn empty(m: usize) -> Self {
        assert!((1..=MAX_LABELS).contains(&m));
        Self {
            mask: 0,
            m: m as u8,
        }
    }

    /// Parses `"1,3,4"`.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        let t = text.trim();
        let t = t
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(t);
        let mut labels = Vec::new();
        for piece in t.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let label = piece
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad label {piece:?} in subset {text:?}")))?;
            if labels.contains(&label) {
                return Err(Error::Parse(format!("repeated label {label} in {text:?}")));
            }
            labels.push(label);
        }
        Self::from_labels(m, labels)
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn m(self) -> usize {
        self.m as usize
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn is_full(self) -> bool {
        self.mask == full_mask(self.m())
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=self.m()).contains(&label) && self.mask & (1 << (label - 1)) != 0
    }

    pub fn complement(self) -> Self {
        Self {
            mask: full_mask(self.m()) & !self.mask,
            m: self.m,
        }
    }

    /// Union of two subsets of the same ambient set. Panics on mismatched `m`.
    pub fn union(self, other: Self) -> Self {
        assert_eq!(self.m, other.m, "subsets of different label sets");
        Self {
            mask: self.mask | other.mask,
            m: self.m,
        }
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.mask & other.mask == 0
    }

    /// Smallest label, if any.
    pub fn min_label(self) -> Option<usize> {
        (self.mask != 0).then(|| self.mask.trailing_zeros() as usize + 1)
    }

    /// Labels in increasing order.
    pub fn labels(self) -> impl Iterator<Item = usize> {
        let mask = self.mask;
        (1..=self.m()).filter(move |&i| mask & (1 << (i - 1)) != 0)
    }

    /// Image under a relabeling; `perm[i - 1]` is the image of label `i`.
    pub fn relabel(self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.m());
        let mask = self
            .labels()
            .fold(0u32, |acc, i| acc | 1 << (perm[i - 1] - 1));
        Self { mask, m: self.m }
    }

    /// Same labels viewed inside `{1, …, m}` for some `m ≥ self.m()`.
    pub fn widen(self, m: usize) -> Result<Self> {
        check_size(m)?;
        if m < self.m() {
            return Err(Error::SizeMismatch {
                expected: self.m(),
                found: m,
            });
        }
        Ok(Self {
            mask: self.mask,
            m: m as u8,
        })
    }

    /// All `k`-element subsets of `{1, …, m}`, in increasing mask order.
    pub fn all_of_size(m: usize, k: usize) -> impl Iterator<Item = Subset> {
        assert!((1..=MAX_LABELS).contains(&m));
        let limit = 1u64 << m;
        let mut next = if k > m {
            limit
        } else if k == 0 {
            0
        } else {
            (1u64 << k) - 1
        };
        let mut done = false;
        std::iter::from_fn(move || {
            if done || next >= limit {
                return None;
            }
            let current = next;
            if current == 0 {
                done = true;
            } else {
                // Gosper's hack
                let c = current & current.wrapping_neg();
                let r = current + c;
                next = (((r ^ current) >> 2) / c) | r;
            }
            Some(Subset {
                mask: current as u32,
                m: m as u8,
            })
        })
    }
}

fn full_mask(m: usize) -> u32 {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

impl Ord for Subset {
    /// Ambient size, then cardinality, then lexicographic on sorted labels.
    fn cmp(&self, other: &Self) -> Ordering {
        self.m
            .cmp(&other.m)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.labels().cmp(other.labels()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for label in self.labels() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
            first = false;
        }
        Ok(())
    }
}

/// How [`canonical_key`] treats a subset and its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CanonMode {
    /// `S` and `S^c` name the same key (boundary divisors of M̄₀,ₘ).
    ComplementIdentified,
    /// `S` is its own key (boundary divisors of M̄₀,ₙ(ℙ¹,1)).
    Raw,
}

/// Canonical representative of a divisor key.
///
/// In complement-identified mode the smaller of `S`, `S^c` is returned, with
/// ties going to the one containing label 1. Raw mode returns `S` as given.
pub fn canonical_key(s: Subset, mode: CanonMode) -> Result<Subset> {
    let m = s.m();
    match mode {
        CanonMode::ComplementIdentified => {
            if s.is_empty() || s.is_full() {
                return Err(Error::InvalidKey {
                    subset: s.to_string(),
                    m,
                    reason: "empty or full subset",
                });
            }
            let c = s.complement();
            let pick = match s.len().cmp(&c.len()) {
                Ordering::Less => s,
                Ordering::Greater => c,
                Ordering::Equal if s.contains(1) => s,
                Ordering::Equal => c,
            };
            Ok(pick)
        }
        CanonMode::Raw => {
            if s.len() < 2 {
                return Err(Error::InvalidKey {
                    subset: s.to_string(),
                    m,
                    reason: "raw keys need at least two labels",
                });
            }
            Ok(s)
        }
    }
}

/// A partition `I ∪ J ∪ K ∪ L` of `{1, …, m}` into four nonempty blocks,
/// blocks sorted by their smallest label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourPartition {
    parts: [Subset; 4],
}

impl FourPartition {
    /// Validates and canonicalizes (blocks sorted by minimum label).
    pub fn new(parts: [Subset; 4]) -> Result<Self> {
        let m = parts[0].m();
        let mut union = 0u32;
        for p in &parts {
            if p.m() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    found: p.m(),
                });
            }
            if p.is_empty() {
                return Err(Error::Parse("four-partition with an empty block".into()));
            }
            if union & p.mask() != 0 {
                return Err(Error::Parse("four-partition blocks overlap".into()));
            }
            union |= p.mask();
        }
        if union != full_mask(m) {
            return Err(Error::Parse(format!(
                "four-partition blocks do not cover 1..={m}"
            )));
        }
        let mut parts = parts;
        parts.sort_by_key(|p| p.min_label());
        Ok(Self { parts })
    }

    /// Parses `"{1}|{2}|{3}|{4,5}"`.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        let blocks: Vec<&str> = text.split('|').collect();
        if blocks.len() != 4 {
            return Err(Error::Parse(format!(
                "expected four blocks separated by '|' in {text:?}"
            )));
        }
        let mut parts = [Subset::empty(m.clamp(1, MAX_LABELS)); 4];
        for (slot, block) in parts.iter_mut().zip(blocks) {
            *slot = Subset::parse(m, block)?;
        }
        Self::new(parts)
    }

    pub fn parts(&self) -> &[Subset; 4] {
        &self.parts
    }

    pub fn m(&self) -> usize {
        self.parts[0].m()
    }

    /// The block containing `label`.
    pub fn part_of(&self, label: usize) -> Option<Subset> {
        self.parts.iter().copied().find(|p| p.contains(label))
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        let parts = self.parts.map(|p| p.relabel(perm));
        Self::new(parts).expect("a relabeling maps partitions to partitions")
    }

    pub fn shape(&self, special: Option<usize>) -> PartitionShape {
        let mut sizes = self.parts.map(|p| p.len() as u8);
        sizes.sort_unstable();
        PartitionShape {
            sizes,
            special_part_size: special.and_then(|s| self.part_of(s)).map(|p| p.len() as u8),
        }
    }
}

impl fmt::Display for FourPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{{{p}}}")?;
        }
        Ok(())
    }
}

/// Streams every partition of `{1, …, m}` into four nonempty blocks exactly
/// once.
///
/// Partitions are produced as restricted growth strings (label `i` goes to
/// block `a[i]`, each block index first used in increasing order) in
/// lexicographic order, so blocks come out sorted by their minimum label.
pub fn enumerate_four_partitions(m: usize) -> Result<FourPartitions> {
    check_size(m)?;
    if m < 4 {
        return Err(Error::TooFewPoints {
            what: "a four-block partition",
            min: 4,
            got: m,
        });
    }
    let mut rgs = vec![0u8; m];
    fill_tail(&mut rgs, 0);
    Ok(FourPartitions {
        rgs,
        exhausted: false,
    })
}

/// Iterator returned by [`enumerate_four_partitions`].
#[derive(Debug, Clone)]
pub struct FourPartitions {
    rgs: Vec<u8>,
    exhausted: bool,
}

// Lexicographically smallest completion of rgs[..=pos] that uses all four blocks.
fn fill_tail(rgs: &mut [u8], pos: usize) {
    let m = rgs.len();
    let max = rgs[..=pos].iter().copied().max().unwrap_or(0);
    let need = 3 - max as usize;
    for slot in rgs[pos + 1..].iter_mut() {
        *slot = 0;
    }
    for k in 0..need {
        rgs[m - need + k] = max + 1 + k as u8;
    }
}

impl FourPartitions {
    fn current(&self) -> FourPartition {
        let m = self.rgs.len();
        let mut masks = [0u32; 4];
        for (i, &b) in self.rgs.iter().enumerate() {
            masks[b as usize] |= 1 << i;
        }
        FourPartition {
            parts: masks.map(|mask| Subset { mask, m: m as u8 }),
        }
    }

    fn advance(&mut self) -> bool {
        let m = self.rgs.len();
        for i in (1..m).rev() {
            let prefix_max = self.rgs[..i].iter().copied().max().unwrap_or(0);
            let cur = self.rgs[i];
            if cur >= 3 || cur > prefix_max {
                continue;
            }
            let new = cur + 1;
            let reached = prefix_max.max(new) as usize;
            if m - 1 - i >= 3 - reached {
                self.rgs[i] = new;
                fill_tail(&mut self.rgs, i);
                return true;
            }
        }
        false
    }
}

impl Iterator for FourPartitions {
    type Item = FourPartition;

    fn next(&mut self) -> Option<FourPartition> {
        if self.exhausted {
            return None;
        }
        let out = self.current();
        self.exhausted = !self.advance();
        Some(out)
    }
}

/// Orbit type of a four-partition: the multiset of block sizes, plus the size
/// of the block holding a designated special label when there is one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionShape {
    /// Block sizes in increasing order.
    pub sizes: [u8; 4],
    pub special_part_size: Option<u8>,
}

impl PartitionShape {
    pub fn m(&self) -> usize {
        self.sizes.iter().map(|&s| s as usize).sum()
    }
}

impl fmt::Display for PartitionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.sizes;
        write!(f, "{a}+{b}+{c}+{d}")?;
        if let Some(s) = self.special_part_size {
            write!(f, " (special in {s})")?;
        }
        Ok(())
    }
}

/// A shape together with its first partition in enumeration order and the
/// number of partitions of that shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeClass {
    pub shape: PartitionShape,
    pub representative: FourPartition,
    pub orbit_size: usize,
}

/// All shapes of four-partitions of `{1, …, m}`, in order of first appearance
/// in [`enumerate_four_partitions`].
pub fn enumerate_shapes(m: usize, special: Option<usize>) -> Result<Vec<ShapeClass>> {
    if let Some(s) = special {
        if s == 0 || s > m {
            return Err(Error::LabelOutOfRange { label: s, m });
        }
    }
    let mut classes: Vec<ShapeClass> = Vec::new();
    let mut index: HashMap<PartitionShape, usize> = HashMap::new();
    for p in enumerate_four_partitions(m)? {
        let shape = p.shape(special);
        match index.get(&shape) {
            Some(&k) => classes[k].orbit_size += 1,
            None => {
                index.insert(shape, classes.len());
                classes.push(ShapeClass {
                    shape,
                    representative: p,
                    orbit_size: 1,
                });
            }
        }
    }
    Ok(classes)
}

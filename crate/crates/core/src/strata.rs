//! Divisor-level shadow of the birational map M̄₀,ₙ₊₃ ⇢ M̄₀,ₙ(ℙ¹,1): the
//! boundary divisor `Δ_S`, `S ⊆ {1, …, n}`, dominates `B_S`. Checking that
//! every `B_S` is hit is the computable part of surjectivity in codimension
//! one.

use std::collections::BTreeSet;

use crate::combinat::{canonical_key, CanonMode, Subset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CorrespondencePair {
    /// `S ⊆ {1, …, n}`.
    pub s: Subset,
    /// Canonical key of `Δ_S` on M̄₀,ₙ₊₃.
    pub delta_key: Subset,
    /// Key of `B_S` on M̄₀,ₙ(ℙ¹,1).
    pub b_key: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorCorrespondence {
    pub n: usize,
    pub pairs: Vec<CorrespondencePair>,
}

/// Every boundary key `B_S` of M̄₀,ₙ(ℙ¹,1): raw subsets with `2 ≤ |S| ≤ n`.
pub fn b_key_space(n: usize) -> Vec<Subset> {
    (2..=n).flat_map(|k| Subset::all_of_size(n, k)).collect()
}

pub fn phi_divisor_map(n: usize) -> Result<DivisorCorrespondence> {
    if n < 2 {
        return Err(Error::TooFewPoints {
            what: "a boundary divisor B_S",
            min: 2,
            got: n,
        });
    }
    let m = n + 3;
    let mut pairs = Vec::new();
    for s in b_key_space(n) {
        let delta_key = canonical_key(s.widen(m)?, CanonMode::ComplementIdentified)?;
        let b_key = canonical_key(s, CanonMode::Raw)?;
        pairs.push(CorrespondencePair {
            s,
            delta_key,
            b_key,
        });
    }
    let corr = DivisorCorrespondence { n, pairs };
    debug_assert!(corr.covers_all_b_keys() && corr.sources_distinct());
    Ok(corr)
}

impl DivisorCorrespondence {
    /// Targets are exactly the B-key space, each hit once.
    pub fn covers_all_b_keys(&self) -> bool {
        let targets: BTreeSet<Subset> = self.pairs.iter().map(|p| p.b_key).collect();
        let space: BTreeSet<Subset> = b_key_space(self.n).into_iter().collect();
        targets.len() == self.pairs.len() && targets == space
    }

    /// Source keys stay distinct after complement identification on M̄₀,ₙ₊₃.
    pub fn sources_distinct(&self) -> bool {
        let keys: BTreeSet<Subset> = self.pairs.iter().map(|p| p.delta_key).collect();
        keys.len() == self.pairs.len()
    }

    /// `S<TAB>DeltaKey<TAB>BKey` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("S\tDeltaKey\tBKey\n");
        for p in &self.pairs {
            out.push_str(&format!("{}\t{}\t{}\n", p.s, p.delta_key, p.b_key));
        }
        out
    }
}

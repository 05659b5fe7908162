//! Divisor classes on M̄₀,ₘ in the boundary/ψ coefficient basis, the F-curve
//! intersection form, and the Fulton-positivity test.
//!
//! A divisor is stored as `H = Σ c_S Δ_S` over canonical keys `S`, with the
//! convention `Δ_{i} := −ψ_i` for singleton keys. So a coefficient `q` on key
//! `{i}` is the class `−q·ψ_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{canonical_key, enumerate_four_partitions, CanonMode, FourPartition, Subset};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Rational};

/// Largest number of marked points for which F-positivity is known to be
/// equivalent to ampleness on M̄₀,ₘ.
pub const FULTON_RANGE_MAX: usize = 7;

/// A ℚ-divisor class on M̄₀,ₘ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MDivisor {
    m: usize,
    coeffs: BTreeMap<Subset, Rational>,
}

impl MDivisor {
    pub fn zero(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::TooFewPoints {
                what: "a divisor on M̄₀,ₘ",
                min: 3,
                got: m,
            });
        }
        crate::combinat::LabelSet::new(m)?;
        Ok(Self {
            m,
            coeffs: BTreeMap::new(),
        })
    }

    /// The boundary class `Δ_S` (or `−ψ_i` when `S` or `S^c` is `{i}`).
    pub fn delta(s: Subset) -> Result<Self> {
        let mut d = Self::zero(s.m())?;
        d.add_term(s, Rational::from_integer(1.into()))?;
        Ok(d)
    }

    /// The class `ψ_i`.
    pub fn psi(m: usize, i: usize) -> Result<Self> {
        let mut d = Self::zero(m)?;
        d.add_term(
            Subset::singleton(m, i)?,
            Rational::from_integer((-1).into()),
        )?;
        Ok(d)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `coeff · Δ_S`. `S` may be given in either complement form.
    pub fn add_term(&mut self, s: Subset, coeff: Rational) -> Result<()> {
        if s.m() != self.m {
            return Err(Error::SizeMismatch {
                expected: self.m,
                found: s.m(),
            });
        }
        let key = canonical_key(s, CanonMode::ComplementIdentified)?;
        let entry = self.coeffs.entry(key).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    /// `c_S`, looked up through the canonical key.
    pub fn coeff(&self, s: Subset) -> Result<Rational> {
        if s.m() != self.m {
            return Err(Error::SizeMismatch {
                expected: self.m,
                found: s.m(),
            });
        }
        let key = canonical_key(s, CanonMode::ComplementIdentified)?;
        Ok(self
            .coeffs
            .get(&key)
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// Nonzero coefficients on canonical keys, in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&Subset, &Rational)> {
        self.coeffs.iter()
    }

    /// Coefficient of `ψ_i` (that is, `−c_{i}`).
    pub fn psi_coeff(&self, i: usize) -> Result<Rational> {
        Ok(-self.coeff(Subset::singleton(self.m, i)?)?)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self {
                m: self.m,
                coeffs: BTreeMap::new(),
            };
        }
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * factor)).collect(),
        }
    }

    /// Relabels marked points; `perm[i - 1]` is the image of label `i`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut out = Self {
            m: self.m,
            coeffs: BTreeMap::new(),
        };
        for (k, v) in &self.coeffs {
            out.add_term(k.relabel(perm), v.clone())
                .expect("relabeling preserves key validity");
        }
        out
    }

    fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::SizeMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(*k, v.clone())?;
        }
        Ok(out)
    }
}

impl Neg for &MDivisor {
    type Output = MDivisor;
    fn neg(self) -> MDivisor {
        MDivisor {
            m: self.m,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Neg for MDivisor {
    type Output = MDivisor;
    fn neg(self) -> MDivisor {
        -&self
    }
}

impl Add for &MDivisor {
    type Output = MDivisor;
    /// Panics on mismatched `m`; use [`m_linear_combine`] for a checked sum.
    fn add(self, rhs: &MDivisor) -> MDivisor {
        self.checked_add(rhs).expect("divisors on different M̄₀,ₘ")
    }
}

impl Sub for &MDivisor {
    type Output = MDivisor;
    fn sub(self, rhs: &MDivisor) -> MDivisor {
        self + &(-rhs)
    }
}

impl fmt::Display for MDivisor {
    /// Singleton keys are printed as ψ-classes: `−3ψ5 + Δ{1,2,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, v) in &self.coeffs {
            let (coeff, sym) = if k.len() == 1 {
                (-v, format!("ψ{k}"))
            } else {
                (v.clone(), format!("Δ{{{k}}}"))
            };
            f.write_str(&crate::rational::fmt_term(&coeff, &sym, first))?;
            first = false;
        }
        Ok(())
    }
}

/// Exact linear combination `Σ q_k H_k`. All terms must live on the same M̄₀,ₘ.
pub fn m_linear_combine(terms: &[(Rational, &MDivisor)]) -> Result<MDivisor> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::Parse(
            "empty linear combination has no ambient space".into(),
        ));
    };
    let mut out = MDivisor::zero(first.m)?;
    for (q, h) in terms {
        out = out.checked_add(&h.scale(q))?;
    }
    Ok(out)
}

/// Intersection of `H` with the F-curve of a four-partition:
/// `c_{I∪J} + c_{I∪K} + c_{I∪L} − c_I − c_J − c_K − c_L`.
pub fn f_curve_value(h: &MDivisor, p: &FourPartition) -> Result<Rational> {
    if p.m() != h.m {
        return Err(Error::SizeMismatch {
            expected: h.m,
            found: p.m(),
        });
    }
    let [i, j, k, l] = *p.parts();
    let mut value = Rational::zero();
    for other in [j, k, l] {
        value += h.coeff(i.union(other))?;
    }
    for part in [i, j, k, l] {
        value -= h.coeff(part)?;
    }
    Ok(value)
}

/// An F-curve together with its intersection number against some divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FValue {
    pub partition: FourPartition,
    pub value: Rational,
}

impl fmt::Display for FValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.partition, fmt_rational(&self.value))
    }
}

/// F-curve values over every four-partition, in enumeration order.
pub fn f_values(h: &MDivisor) -> Result<Vec<FValue>> {
    let partitions: Vec<FourPartition> = enumerate_four_partitions(h.m)?.collect();
    partitions
        .into_par_iter()
        .map(|partition| {
            let value = f_curve_value(h, &partition)?;
            Ok(FValue { partition, value })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    StrictlyPositive,
    StrictlyNegative,
}

impl Sense {
    pub fn flip(self) -> Self {
        match self {
            Sense::StrictlyPositive => Sense::StrictlyNegative,
            Sense::StrictlyNegative => Sense::StrictlyPositive,
        }
    }
}

/// Options for [`f_positivity_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FOptions {
    pub sense: Sense,
    /// `false` tests `≥ 0` (resp. `≤ 0`) instead of the strict inequality.
    pub strict: bool,
    /// Collect every violating partition, not just the first.
    pub all_witnesses: bool,
}

impl FOptions {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            strict: true,
            all_witnesses: false,
        }
    }

    fn accepts(&self, value: &Rational) -> bool {
        match (self.sense, self.strict) {
            (Sense::StrictlyPositive, true) => value.is_positive(),
            (Sense::StrictlyPositive, false) => !value.is_negative(),
            (Sense::StrictlyNegative, true) => value.is_negative(),
            (Sense::StrictlyNegative, false) => !value.is_positive(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every F-value satisfies the sense and `m ≤ 7`: the divisor is
    /// (anti-)ample (nef-type statement in non-strict mode).
    Positive,
    /// The first F-curve, in enumeration order, violating the sense. The
    /// inequality is necessary, so this refutes (anti-)ampleness for any `m`.
    NotPositive {
        witness: FourPartition,
        value: Rational,
    },
    /// Every F-value satisfies the sense but `m > 7`.
    PositiveButUndecidedAmpleness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmpDecision {
    pub m: usize,
    pub sense: Sense,
    pub strict: bool,
    pub verdict: Verdict,
    /// All violations in enumeration order; filled only with `all_witnesses`.
    pub violations: Vec<FValue>,
}

impl AmpDecision {
    /// `Some(true)` for a proven (anti-)ampleness, `Some(false)` for a
    /// refutation, `None` when undecided.
    pub fn decided(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Positive => Some(true),
            Verdict::NotPositive { .. } => Some(false),
            Verdict::PositiveButUndecidedAmpleness => None,
        }
    }
}

/// Strict Fulton-positivity test with first-witness reporting.
pub fn f_positivity(h: &MDivisor, sense: Sense) -> Result<AmpDecision> {
    f_positivity_with(h, FOptions::new(sense))
}

pub fn f_positivity_with(h: &MDivisor, opts: FOptions) -> Result<AmpDecision> {
    let values = f_values(h)?;
    let first = values
        .par_iter()
        .position_first(|fv| !opts.accepts(&fv.value));
    let verdict = match first {
        Some(idx) => Verdict::NotPositive {
            witness: values[idx].partition,
            value: values[idx].value.clone(),
        },
        None if h.m <= FULTON_RANGE_MAX => Verdict::Positive,
        None => Verdict::PositiveButUndecidedAmpleness,
    };
    let violations = if opts.all_witnesses && first.is_some() {
        values
            .into_par_iter()
            .filter(|fv| !opts.accepts(&fv.value))
            .collect()
    } else {
        Vec::new()
    };
    Ok(AmpDecision {
        m: h.m,
        sense: opts.sense,
        strict: opts.strict,
        verdict,
        violations,
    })
}

//! Divisor classes on M̄₀,ₙ(ℙ¹,1) in the `L_i` / `B_S` basis, the canonical
//! class, pullbacks along `α: M̄₀,ₙ₊₁ → M̄₀,ₙ(ℙ¹,1)` and `β_i: ℙ¹ → M̄₀,ₙ(ℙ¹,1)`,
//! and the pullback ampleness criterion.
//!
//! Boundary keys `B_S` are raw subsets with `2 ≤ |S| ≤ n`: `B_S` and `B_{S^c}`
//! are different divisors, since the map collapses the `S` side.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};

use num_traits::{Signed, Zero};

use crate::combinat::{canonical_key, CanonMode, LabelSet, Subset};
use crate::error::{Error, Result};
use crate::mcurves::{f_positivity, AmpDecision, MDivisor, Sense, Verdict};
use crate::rational::{fmt_rational, fmt_term, parse_rational, Rational};

/// A ℚ-divisor class on M̄₀,ₙ(ℙ¹,1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KDivisor {
    n: usize,
    l: BTreeMap<usize, Rational>,
    b: BTreeMap<Subset, Rational>,
}

impl KDivisor {
    pub fn zero(n: usize) -> Result<Self> {
        LabelSet::new(n)?;
        Ok(Self {
            n,
            l: BTreeMap::new(),
            b: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.l.is_empty() && self.b.is_empty()
    }

    /// Adds `coeff · L_i`.
    pub fn add_l(&mut self, i: usize, coeff: Rational) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::LabelOutOfRange {
                label: i,
                m: self.n,
            });
        }
        accumulate(&mut self.l, i, coeff);
        Ok(())
    }

    /// Adds `coeff · B_S`.
    pub fn add_b(&mut self, s: Subset, coeff: Rational) -> Result<()> {
        if s.m() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: s.m(),
            });
        }
        let key = canonical_key(s, CanonMode::Raw)?;
        accumulate(&mut self.b, key, coeff);
        Ok(())
    }

    /// Adds `coeff · B[s]`, where `B[s]` is the sum of all `B_S` with `|S| = s`.
    pub fn add_symmetric(&mut self, s: usize, coeff: &Rational) -> Result<()> {
        if s < 2 || s > self.n {
            return Err(Error::IndexOutOfRange { s, n: self.n });
        }
        for key in Subset::all_of_size(self.n, s) {
            self.add_b(key, coeff.clone())?;
        }
        Ok(())
    }

    pub fn l_coeff(&self, i: usize) -> Rational {
        self.l.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `B_S`; zero for subsets that are not boundary keys.
    pub fn b_coeff(&self, s: Subset) -> Rational {
        self.b.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn l_terms(&self) -> impl Iterator<Item = (&usize, &Rational)> {
        self.l.iter()
    }

    pub fn b_terms(&self) -> impl Iterator<Item = (&Subset, &Rational)> {
        self.b.iter()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self {
                n: self.n,
                l: BTreeMap::new(),
                b: BTreeMap::new(),
            };
        }
        Self {
            n: self.n,
            l: self.l.iter().map(|(k, v)| (*k, v * factor)).collect(),
            b: self.b.iter().map(|(k, v)| (*k, v * factor)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.l {
            accumulate(&mut out.l, *k, v.clone());
        }
        for (k, v) in &other.b {
            accumulate(&mut out.b, *k, v.clone());
        }
        Ok(out)
    }

    /// `K_n + Σ a_s B[s]` when `with_canonical`, else just `Σ a_s B[s]`.
    pub fn from_combo(combo: &BoundaryCombo, with_canonical: bool) -> Result<Self> {
        let mut out = if with_canonical {
            canonical_class(combo.n)?
        } else {
            Self::zero(combo.n)?
        };
        for (s, a) in &combo.a {
            out.add_symmetric(*s, a)?;
        }
        Ok(out)
    }
}

fn accumulate<K: Ord + Copy>(map: &mut BTreeMap<K, Rational>, key: K, coeff: Rational) {
    let entry = map.entry(key).or_insert_with(Rational::zero);
    *entry += coeff;
    if entry.is_zero() {
        map.remove(&key);
    }
}

impl Neg for &KDivisor {
    type Output = KDivisor;
    fn neg(self) -> KDivisor {
        KDivisor {
            n: self.n,
            l: self.l.iter().map(|(k, v)| (*k, -v)).collect(),
            b: self.b.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Add for &KDivisor {
    type Output = KDivisor;
    /// Panics on mismatched `n`; see [`KDivisor::checked_add`].
    fn add(self, rhs: &KDivisor) -> KDivisor {
        self.checked_add(rhs)
            .expect("divisors on different M̄₀,ₙ(ℙ¹,1)")
    }
}

impl fmt::Display for KDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, v) in &self.l {
            f.write_str(&fmt_term(v, &format!("L{i}"), first))?;
            first = false;
        }
        for (s, v) in &self.b {
            f.write_str(&fmt_term(v, &format!("B{{{s}}}"), first))?;
            first = false;
        }
        Ok(())
    }
}

/// Symmetric boundary combination `D = Σ_{s=2}^{n} a_s B[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundaryCombo {
    pub n: usize,
    /// Nonzero `a_s`, keyed by `s ∈ 2..=n`.
    pub a: BTreeMap<usize, Rational>,
}

impl BoundaryCombo {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            a: BTreeMap::new(),
        }
    }

    pub fn with(mut self, s: usize, a: Rational) -> Result<Self> {
        self.set(s, a)?;
        Ok(self)
    }

    pub fn set(&mut self, s: usize, a: Rational) -> Result<()> {
        if s < 2 || s > self.n {
            return Err(Error::IndexOutOfRange { s, n: self.n });
        }
        if a.is_zero() {
            self.a.remove(&s);
        } else {
            self.a.insert(s, a);
        }
        Ok(())
    }

    pub fn get(&self, s: usize) -> Rational {
        self.a.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    /// Parses `"a2=1/4,a4=1/4,a5=1"`; the `a` prefix is optional.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut combo = Self::new(n);
        for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (lhs, rhs) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected s=p/q, got {item:?}")))?;
            let s = parse_index(lhs)?;
            if combo.a.contains_key(&s) {
                return Err(Error::Parse(format!("a{s} given twice")));
            }
            combo.set(s, parse_rational(rhs)?)?;
        }
        Ok(combo)
    }
}

pub(crate) fn parse_index(text: &str) -> Result<usize> {
    let t = text.trim();
    let t = t.strip_prefix('a').unwrap_or(t);
    t.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad boundary index {text:?}")))
}

impl fmt::Display for BoundaryCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .a
            .iter()
            .map(|(s, v)| format!("a{s}={}", fmt_rational(v)))
            .collect();
        f.write_str(&items.join(","))
    }
}

/// The boundary part given to [`k_build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundarySpec {
    Combo(BoundaryCombo),
    Explicit(BTreeMap<Subset, Rational>),
}

/// Builds `Σ l_i L_i + (boundary part)`, expanding symmetric combos.
pub fn k_build(
    n: usize,
    l: &BTreeMap<usize, Rational>,
    boundary: &BoundarySpec,
) -> Result<KDivisor> {
    let mut out = KDivisor::zero(n)?;
    for (i, v) in l {
        out.add_l(*i, v.clone())?;
    }
    match boundary {
        BoundarySpec::Combo(combo) => {
            if combo.n != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: combo.n,
                });
            }
            for (s, a) in &combo.a {
                out.add_symmetric(*s, a)?;
            }
        }
        BoundarySpec::Explicit(map) => {
            for (s, v) in map {
                out.add_b(*s, v.clone())?;
            }
        }
    }
    Ok(out)
}

/// `K_n = −2L + Σ_{s=3}^{n} (s−2) B[s]` with `L = Σ_{i=1}^{n} L_i`.
pub fn canonical_class(n: usize) -> Result<KDivisor> {
    let mut k = KDivisor::zero(n)?;
    let minus_two = Rational::from_integer((-2).into());
    for i in 1..=n {
        k.add_l(i, minus_two.clone())?;
    }
    for s in 3..=n {
        k.add_symmetric(s, &Rational::from_integer(((s - 2) as i64).into()))?;
    }
    Ok(k)
}

/// `α*H` on M̄₀,ₙ₊₁: `B_S ↦ Δ_S` for `|S| ≤ n−1`, `B_{1..n} ↦ −ψ_{n+1}`
/// (stored as `+coeff` on key `{n+1}`), `L_i ↦ 0`.
pub fn pullback_alpha(h: &KDivisor) -> Result<MDivisor> {
    let n = h.n;
    if n < 3 {
        return Err(Error::TooFewPoints {
            what: "the α-pullback",
            min: 3,
            got: n,
        });
    }
    let m = n + 1;
    let mut out = MDivisor::zero(m)?;
    for (s, v) in &h.b {
        let target = if s.is_full() {
            Subset::singleton(m, m)?
        } else {
            s.widen(m)?
        };
        out.add_term(target, v.clone())?;
    }
    Ok(out)
}

/// Degree of `β_i*H` on ℙ¹: `l_i − b_{1..n} − b_{{i}^c}`.
pub fn pullback_beta(h: &KDivisor, i: usize) -> Result<Rational> {
    let n = h.n;
    if i == 0 || i > n {
        return Err(Error::LabelOutOfRange { label: i, m: n });
    }
    let full = Subset::full(n);
    let others = Subset::singleton(n, i)?.complement();
    Ok(h.l_coeff(i) - h.b_coeff(full) - h.b_coeff(others))
}

/// Degree of `β_i*H` for one label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaDegree {
    pub i: usize,
    pub degree: Rational,
}

pub fn beta_degrees(h: &KDivisor) -> Result<Vec<BetaDegree>> {
    (1..=h.n)
        .map(|i| {
            Ok(BetaDegree {
                i,
                degree: pullback_beta(h, i)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KSense {
    Ample,
    AntiAmple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChsVerdict {
    Verified,
    Refuted,
    /// The β side passes and the α side is F-positive, but `n + 1 > 7`.
    Undecided,
}

/// Outcome of [`chs_ample`]. The recorded data belong to the oriented divisor
/// (`H` for ampleness, `−H` for anti-ampleness), which is tested for
/// ampleness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChsDecision {
    pub sense: KSense,
    pub alpha: AmpDecision,
    pub beta: Vec<BetaDegree>,
    pub verdict: ChsVerdict,
}

impl ChsDecision {
    /// β-degrees that are not strictly positive for the oriented divisor.
    pub fn beta_failures(&self) -> impl Iterator<Item = &BetaDegree> {
        self.beta.iter().filter(|b| !b.degree.is_positive())
    }
}

/// Ampleness via pullbacks: `H` is ample iff `α*H` is ample on M̄₀,ₙ₊₁ and
/// every `β_i*H` has positive degree. Anti-ampleness is ampleness of `−H`.
pub fn chs_ample(h: &KDivisor, sense: KSense) -> Result<ChsDecision> {
    let oriented = match sense {
        KSense::Ample => h.clone(),
        KSense::AntiAmple => -h,
    };
    let alpha = f_positivity(&pullback_alpha(&oriented)?, Sense::StrictlyPositive)?;
    let beta = beta_degrees(&oriented)?;
    let beta_ok = beta.iter().all(|b| b.degree.is_positive());
    let verdict = match (&alpha.verdict, beta_ok) {
        (Verdict::NotPositive { .. }, _) | (_, false) => ChsVerdict::Refuted,
        (Verdict::Positive, true) => ChsVerdict::Verified,
        (Verdict::PositiveButUndecidedAmpleness, true) => ChsVerdict::Undecided,
    };
    Ok(ChsDecision {
        sense,
        alpha,
        beta,
        verdict,
    })
}

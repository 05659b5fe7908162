//! Log-Fano witnesses for `K_n + D`, `D = Σ a_s B[s]`.
//!
//! The anti-ampleness of `K_n + D` is affine in the coefficients `a_s`, so it
//! becomes a finite system of strict linear inequalities: one per F-curve on
//! M̄₀,ₙ₊₁ (or per partition shape, by symmetry) and one for the β-degree.
//! [`solve_feasibility`] decides such systems exactly by Fourier–Motzkin
//! elimination, tracking strictness and the nonnegative multipliers that
//! produced each derived row. An infeasible system therefore comes with a
//! Farkas certificate; a feasible one comes with a rational point.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{enumerate_four_partitions, enumerate_shapes, FourPartition, PartitionShape};
use crate::error::{Error, Result};
use crate::kmaps::{
    canonical_class, chs_ample, parse_index, pullback_alpha, pullback_beta, BoundaryCombo,
    ChsDecision, ChsVerdict, KDivisor, KSense,
};
use crate::mcurves::{f_curve_value, f_values, MDivisor, FULTON_RANGE_MAX};
use crate::rational::{fmt_rational, fmt_term, parse_rational, Rational};

/// `lhs < 0` or `lhs ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    StrictlyNegative,
    #[serde(rename = "<=")]
    NonPositive,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        self == Relation::StrictlyNegative
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::StrictlyNegative => "<",
            Relation::NonPositive => "<=",
        }
    }

    fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::StrictlyNegative => value.is_negative(),
            Relation::NonPositive => !value.is_positive(),
        }
    }
}

/// `constant + Σ_s coeffs[s]·a_s  (< | ≤)  0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub constant: Rational,
    /// Nonzero coefficients keyed by variable index `s`.
    pub coeffs: BTreeMap<usize, Rational>,
    pub relation: Relation,
}

impl LinearForm {
    pub fn new(constant: Rational, coeffs: BTreeMap<usize, Rational>, relation: Relation) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Self {
            constant,
            coeffs,
            relation,
        }
    }

    /// Builds from `(s, coeff)` pairs; convenient in tests.
    pub fn from_terms<I: IntoIterator<Item = (usize, Rational)>>(
        constant: Rational,
        terms: I,
        relation: Relation,
    ) -> Self {
        let mut coeffs = BTreeMap::new();
        for (s, v) in terms {
            *coeffs.entry(s).or_insert_with(Rational::zero) += v;
        }
        Self::new(constant, coeffs, relation)
    }

    pub fn coeff(&self, s: usize) -> Rational {
        self.coeffs.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    /// Left-hand side at `point` (missing variables read as zero).
    pub fn eval(&self, point: &BTreeMap<usize, Rational>) -> Rational {
        self.coeffs
            .iter()
            .fold(self.constant.clone(), |acc, (s, c)| match point.get(s) {
                Some(v) => acc + c * v,
                None => acc,
            })
    }

    pub fn satisfied_by(&self, point: &BTreeMap<usize, Rational>) -> bool {
        self.relation.holds(&self.eval(point))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// A constant form that no point satisfies.
    pub fn is_contradiction(&self) -> bool {
        self.is_constant() && !self.relation.holds(&self.constant)
    }

    fn scaled(&self, factor: &Rational) -> Self {
        Self {
            constant: &self.constant * factor,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * factor)).collect(),
            relation: self.relation,
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in &self.coeffs {
            f.write_str(&fmt_term(c, &format!("a{s}"), first))?;
            first = false;
        }
        if !self.constant.is_zero() || first {
            f.write_str(&fmt_term(&self.constant, "", first))?;
        }
        write!(f, " {} 0", self.relation.symbol())
    }
}

/// One-sided constraint on a single coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundOp {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl BoundOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BoundOp::Ge => ">=",
            BoundOp::Gt => ">",
            BoundOp::Le => "<=",
            BoundOp::Lt => "<",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bound {
    pub var: usize,
    pub op: BoundOp,
    pub value: Rational,
}

impl Bound {
    pub fn new(var: usize, op: BoundOp, value: Rational) -> Self {
        Self { var, op, value }
    }

    pub fn to_form(&self) -> LinearForm {
        let one = Rational::one();
        let (constant, coeff, relation) = match self.op {
            BoundOp::Ge => (self.value.clone(), -one, Relation::NonPositive),
            BoundOp::Gt => (self.value.clone(), -one, Relation::StrictlyNegative),
            BoundOp::Le => (-&self.value, one, Relation::NonPositive),
            BoundOp::Lt => (-&self.value, one, Relation::StrictlyNegative),
        };
        LinearForm::from_terms(constant, [(self.var, coeff)], relation)
    }

    /// Parses `"a4>=0,a6<=1"` (the `a` prefix is optional).
    pub fn parse_list(text: &str) -> Result<Vec<Bound>> {
        let mut out = Vec::new();
        for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (pos, op, width) = [
                (">=", BoundOp::Ge),
                ("<=", BoundOp::Le),
                (">", BoundOp::Gt),
                ("<", BoundOp::Lt),
            ]
            .iter()
            .find_map(|(sym, op)| item.find(sym).map(|pos| (pos, *op, sym.len())))
            .ok_or_else(|| Error::Parse(format!("expected s>=p/q or s<=p/q, got {item:?}")))?;
            let var = parse_index(&item[..pos])?;
            let value = parse_rational(&item[pos + width..])?;
            out.push(Bound::new(var, op, value));
        }
        Ok(out)
    }

    /// `0 ≤ a_s ≤ 1` for every `s ∈ 2..=n`.
    pub fn unit_box(n: usize) -> Vec<Bound> {
        (2..=n)
            .flat_map(|s| {
                [
                    Bound::new(s, BoundOp::Ge, Rational::zero()),
                    Bound::new(s, BoundOp::Le, Rational::one()),
                ]
            })
            .collect()
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a{} {} {}",
            self.var,
            self.op.symbol(),
            fmt_rational(&self.value)
        )
    }
}

/// Where a generated constraint comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormOrigin {
    /// F-curve inequality for this partition of `{1, …, n+1}`; `orbit_size` is
    /// set when the form stands for a whole shape class.
    FCurve {
        partition: FourPartition,
        shape: PartitionShape,
        orbit_size: Option<usize>,
    },
    /// `deg β_i*(K_n + D) < 0` (the same for every `i`).
    BetaDegree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedForm {
    pub form: LinearForm,
    pub origin: FormOrigin,
}

/// Affine pieces of `α*(K_n + Σ a_s B[s])`: the constant part and one divisor
/// per `s`.
fn alpha_pieces(n: usize) -> Result<(MDivisor, Vec<(usize, MDivisor)>)> {
    let constant = pullback_alpha(&canonical_class(n)?)?;
    let mut pieces = Vec::new();
    for s in 2..=n {
        let combo = BoundaryCombo::new(n).with(s, Rational::one())?;
        pieces.push((s, pullback_alpha(&KDivisor::from_combo(&combo, false)?)?));
    }
    Ok((constant, pieces))
}

fn f_form(
    constant: &MDivisor,
    pieces: &[(usize, MDivisor)],
    p: &FourPartition,
) -> Result<LinearForm> {
    let mut coeffs = BTreeMap::new();
    for (s, h) in pieces {
        coeffs.insert(*s, f_curve_value(h, p)?);
    }
    Ok(LinearForm::new(
        f_curve_value(constant, p)?,
        coeffs,
        Relation::StrictlyNegative,
    ))
}

fn beta_form(n: usize) -> Result<LinearForm> {
    let constant = pullback_beta(&canonical_class(n)?, 1)?;
    let mut coeffs = BTreeMap::new();
    for s in 2..=n {
        let combo = BoundaryCombo::new(n).with(s, Rational::one())?;
        coeffs.insert(s, pullback_beta(&KDivisor::from_combo(&combo, false)?, 1)?);
    }
    Ok(LinearForm::new(
        constant,
        coeffs,
        Relation::StrictlyNegative,
    ))
}

/// Necessary-and-sufficient (for `n ≤ 6`) conditions in `(a_2, …, a_n)` for
/// `K_n + Σ a_s B[s]` to be anti-ample.
///
/// With `reduced = false` there is one form per four-partition of
/// `{1, …, n+1}`; with `reduced = true` one per partition shape with special
/// label `n+1`. The β-degree form comes last in both cases.
pub fn generate_constraints(n: usize, reduced: bool) -> Result<Vec<GeneratedForm>> {
    if n < 3 {
        return Err(Error::TooFewPoints {
            what: "constraint generation",
            min: 3,
            got: n,
        });
    }
    let (constant, pieces) = alpha_pieces(n)?;
    let special = Some(n + 1);
    let mut out = Vec::new();
    if reduced {
        for class in enumerate_shapes(n + 1, special)? {
            out.push(GeneratedForm {
                form: f_form(&constant, &pieces, &class.representative)?,
                origin: FormOrigin::FCurve {
                    partition: class.representative,
                    shape: class.shape,
                    orbit_size: Some(class.orbit_size),
                },
            });
        }
    } else {
        for p in enumerate_four_partitions(n + 1)? {
            out.push(GeneratedForm {
                form: f_form(&constant, &pieces, &p)?,
                origin: FormOrigin::FCurve {
                    partition: p,
                    shape: p.shape(special),
                    orbit_size: None,
                },
            });
        }
    }
    out.push(GeneratedForm {
        form: beta_form(n)?,
        origin: FormOrigin::BetaDegree,
    });
    Ok(out)
}

/// Nonnegative weight on input form `form`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multiplier {
    pub form: usize,
    pub lambda: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    /// A point satisfying every form. Contains every variable that occurs in
    /// the input.
    Feasible { point: BTreeMap<usize, Rational> },
    /// Multipliers over the assembled system (forms, then bounds) whose
    /// combination is a contradictory constant form.
    Infeasible { multipliers: Vec<Multiplier> },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }

    /// Re-checks the result against the assembled system by substitution or
    /// by recombining the multipliers.
    pub fn check(&self, system: &[LinearForm]) -> bool {
        match self {
            FeasibilityResult::Feasible { point } => system.iter().all(|f| f.satisfied_by(point)),
            FeasibilityResult::Infeasible { multipliers } => {
                certificate_is_valid(system, multipliers)
            }
        }
    }
}

/// `Σ λ_j f_j`; `None` if an index is out of range or a multiplier is negative.
pub fn combine(system: &[LinearForm], multipliers: &[Multiplier]) -> Option<LinearForm> {
    let mut constant = Rational::zero();
    let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut strict = false;
    for m in multipliers {
        let f = system.get(m.form)?;
        if m.lambda.is_negative() {
            return None;
        }
        if m.lambda.is_zero() {
            continue;
        }
        strict |= f.relation.is_strict();
        constant += &m.lambda * &f.constant;
        for (s, c) in &f.coeffs {
            *coeffs.entry(*s).or_insert_with(Rational::zero) += &m.lambda * c;
        }
    }
    let relation = if strict {
        Relation::StrictlyNegative
    } else {
        Relation::NonPositive
    };
    Some(LinearForm::new(constant, coeffs, relation))
}

/// Farkas check: the combination has no variables and is a false constant
/// inequality (`c > 0`, or `c = 0` with a strict form used positively).
pub fn certificate_is_valid(system: &[LinearForm], multipliers: &[Multiplier]) -> bool {
    combine(system, multipliers).is_some_and(|f| f.is_contradiction())
}

/// Forms followed by the bounds as forms; certificate indices refer to this.
pub fn assemble(forms: &[LinearForm], bounds: &[Bound]) -> Vec<LinearForm> {
    forms
        .iter()
        .cloned()
        .chain(bounds.iter().map(Bound::to_form))
        .collect()
}

#[derive(Debug, Clone)]
struct Row {
    form: LinearForm,
    /// Input index ↦ weight; `form` equals the weighted sum of inputs.
    mult: BTreeMap<usize, Rational>,
}

impl Row {
    fn scale(&mut self, factor: &Rational) {
        self.form = self.form.scaled(factor);
        for v in self.mult.values_mut() {
            *v *= factor;
        }
    }

    /// Rescales by a positive factor so every coefficient and the constant are
    /// coprime integers.
    fn normalize(&mut self) {
        let values = || {
            self.form
                .coeffs
                .values()
                .chain(std::iter::once(&self.form.constant))
        };
        let den = values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let num = values().fold(BigInt::zero(), |acc, v| {
            acc.gcd(&(v.numer() * &den / v.denom()))
        });
        if num.is_zero() {
            return;
        }
        self.scale(&Rational::new(den, num));
    }

    fn merge(pos: &Row, neg: &Row, var: usize) -> Row {
        let p = pos.form.coeff(var);
        let q = -neg.form.coeff(var);
        let mut form = pos.form.scaled(&q);
        let other = neg.form.scaled(&p);
        form.constant += other.constant;
        for (s, c) in other.coeffs {
            *form.coeffs.entry(s).or_insert_with(Rational::zero) += c;
        }
        form.coeffs.retain(|_, v| !v.is_zero());
        if neg.form.relation.is_strict() {
            form.relation = Relation::StrictlyNegative;
        }
        let mut mult: BTreeMap<usize, Rational> =
            pos.mult.iter().map(|(k, v)| (*k, v * &q)).collect();
        for (k, v) in &neg.mult {
            *mult.entry(*k).or_insert_with(Rational::zero) += v * &p;
        }
        let mut row = Row { form, mult };
        row.normalize();
        row
    }

    fn certificate(&self) -> Vec<Multiplier> {
        self.mult
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| Multiplier {
                form: *k,
                lambda: v.clone(),
            })
            .collect()
    }
}

/// Drops constant rows that hold; returns a contradictory one if present.
/// Among rows with identical coefficient vectors keeps only the tightest.
fn prune(rows: Vec<Row>) -> std::result::Result<Vec<Row>, Row> {
    let mut kept: Vec<Row> = Vec::new();
    let mut by_coeffs: HashMap<BTreeMap<usize, Rational>, usize> = HashMap::new();
    for row in rows {
        if row.form.is_constant() {
            if row.form.is_contradiction() {
                return Err(row);
            }
            continue;
        }
        match by_coeffs.get(&row.form.coeffs) {
            Some(&k) => {
                let old = &kept[k].form;
                let tighter = (&row.form.constant, row.form.relation.is_strict())
                    > (&old.constant, old.relation.is_strict());
                if tighter {
                    kept[k] = row;
                }
            }
            None => {
                by_coeffs.insert(row.form.coeffs.clone(), kept.len());
                kept.push(row);
            }
        }
    }
    Ok(kept)
}

struct Stage {
    var: usize,
    rows: Vec<Row>,
}

/// Exact feasibility of `{forms} ∪ {bounds}` over ℚ.
///
/// Fourier–Motzkin elimination; each derived row keeps the nonnegative
/// multipliers that produced it, so a contradiction yields a certificate
/// directly. Feasible points are recovered by back-substitution, preferring
/// zero, then a non-strict endpoint, then a midpoint.
pub fn solve_feasibility(forms: &[LinearForm], bounds: &[Bound]) -> FeasibilityResult {
    let system = assemble(forms, bounds);
    let variables: Vec<usize> = {
        let mut v: Vec<usize> = system
            .iter()
            .flat_map(|f| f.coeffs.keys().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let rows: Vec<Row> = system
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let mut row = Row {
                form: f.clone(),
                mult: BTreeMap::from([(j, Rational::one())]),
            };
            row.normalize();
            row
        })
        .collect();

    let mut rows = match prune(rows) {
        Ok(rows) => rows,
        Err(bad) => {
            return FeasibilityResult::Infeasible {
                multipliers: bad.certificate(),
            }
        }
    };

    let mut stages: Vec<Stage> = Vec::new();
    loop {
        let mut counts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for row in &rows {
            for (s, c) in &row.form.coeffs {
                let e = counts.entry(*s).or_default();
                if c.is_positive() {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        let Some(var) = counts
            .iter()
            .min_by_key(|(s, (p, n))| (p * n, **s))
            .map(|(s, _)| *s)
        else {
            break;
        };
        let (with, without): (Vec<Row>, Vec<Row>) = rows
            .into_iter()
            .partition(|r| r.form.coeffs.contains_key(&var));
        let (pos, neg): (Vec<&Row>, Vec<&Row>) =
            with.iter().partition(|r| r.form.coeff(var).is_positive());
        let mut next = without;
        for p in &pos {
            for q in &neg {
                next.push(Row::merge(p, q, var));
            }
        }
        stages.push(Stage { var, rows: with });
        rows = match prune(next) {
            Ok(rows) => rows,
            Err(bad) => {
                return FeasibilityResult::Infeasible {
                    multipliers: bad.certificate(),
                }
            }
        };
    }

    let mut point: BTreeMap<usize, Rational> =
        variables.iter().map(|s| (*s, Rational::zero())).collect();
    for stage in stages.iter().rev() {
        let value = pick_value(stage, &point);
        point.insert(stage.var, value);
    }
    debug_assert!(system.iter().all(|f| f.satisfied_by(&point)));
    FeasibilityResult::Feasible { point }
}

fn pick_value(stage: &Stage, point: &BTreeMap<usize, Rational>) -> Rational {
    // (value, strict)
    let mut lower: Option<(Rational, bool)> = None;
    let mut upper: Option<(Rational, bool)> = None;
    for row in &stage.rows {
        let a = row.form.coeff(stage.var);
        let mut rest = row.form.clone();
        rest.coeffs.remove(&stage.var);
        let bound = -rest.eval(point) / &a;
        let strict = row.form.relation.is_strict();
        if a.is_positive() {
            let tighter = match &upper {
                None => true,
                Some((u, s)) => bound < *u || (bound == *u && strict && !s),
            };
            if tighter {
                upper = Some((bound, strict));
            }
        } else {
            let tighter = match &lower {
                None => true,
                Some((l, s)) => bound > *l || (bound == *l && strict && !s),
            };
            if tighter {
                lower = Some((bound, strict));
            }
        }
    }
    let fits = |x: &Rational| {
        lower
            .as_ref()
            .is_none_or(|(l, s)| if *s { x > l } else { x >= l })
            && upper
                .as_ref()
                .is_none_or(|(u, s)| if *s { x < u } else { x <= u })
    };
    let zero = Rational::zero();
    if fits(&zero) {
        return zero;
    }
    match (lower, upper) {
        (Some((l, false)), _) => l,
        (_, Some((u, false))) => u,
        (Some((l, true)), Some((u, true))) => (l + u) / Rational::from_integer(2.into()),
        (Some((l, true)), None) => l.floor() + Rational::one(),
        (None, Some((u, true))) => u.ceil() - Rational::one(),
        (None, None) => zero,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefutationReason {
    /// An F-curve with `F·α*(K_n + D) ≥ 0`.
    AlphaWitness {
        partition: FourPartition,
        value: Rational,
    },
    /// `deg β_i*(K_n + D) ≥ 0`.
    BetaDegree { degree: Rational },
    /// `a_s ∉ [0, 1]`.
    CoefficientOutOfRange { s: usize, value: Rational },
}

impl fmt::Display for RefutationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefutationReason::AlphaWitness { partition, value } => {
                write!(
                    f,
                    "F-curve {partition} has value {} >= 0",
                    fmt_rational(value)
                )
            }
            RefutationReason::BetaDegree { degree } => {
                write!(f, "beta degree {} >= 0", fmt_rational(degree))
            }
            RefutationReason::CoefficientOutOfRange { s, value } => {
                write!(f, "a{s} = {} is outside [0,1]", fmt_rational(value))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessVerdict {
    Verified,
    Refuted(Vec<RefutationReason>),
    Undecided(String),
}

/// Full-enumeration check that `(M̄₀,ₙ(ℙ¹,1), D)` is a log-Fano pair candidate:
/// `K_n + D` anti-ample and every `a_s ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub n: usize,
    pub combo: BoundaryCombo,
    pub verdict: WitnessVerdict,
    /// Extremal F-values of `α*(K_n + D)` over all partitions of `{1, …, n+1}`.
    pub f_min: Option<Rational>,
    pub f_max: Option<Rational>,
    pub f_count: usize,
    pub beta_degree: Option<Rational>,
    /// Coefficients lie in `[0, 1]` and anti-ampleness is strict, so `(1−ε)D`
    /// stays a witness for small `ε > 0`. No discrepancy computation is done.
    pub klt_note: bool,
    pub decision: Option<ChsDecision>,
}

pub fn verify_witness(n: usize, combo: &BoundaryCombo) -> Result<WitnessReport> {
    if combo.n != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: combo.n,
        });
    }
    let mut report = WitnessReport {
        n,
        combo: combo.clone(),
        verdict: WitnessVerdict::Undecided(String::new()),
        f_min: None,
        f_max: None,
        f_count: 0,
        beta_degree: None,
        klt_note: false,
        decision: None,
    };
    let out_of_range: Vec<RefutationReason> = combo
        .a
        .iter()
        .filter(|(_, v)| v.is_negative() || **v > Rational::one())
        .map(|(s, v)| RefutationReason::CoefficientOutOfRange {
            s: *s,
            value: v.clone(),
        })
        .collect();
    if n < 3 {
        report.verdict = WitnessVerdict::Undecided(format!("n = {n}: the α-pullback needs n >= 3"));
        return Ok(report);
    }

    let divisor = KDivisor::from_combo(combo, true)?;
    let values = f_values(&pullback_alpha(&divisor)?)?;
    report.f_count = values.len();
    report.f_min = values.iter().map(|fv| fv.value.clone()).min();
    report.f_max = values.iter().map(|fv| fv.value.clone()).max();
    let beta = pullback_beta(&divisor, 1)?;
    report.beta_degree = Some(beta.clone());
    let decision = chs_ample(&divisor, KSense::AntiAmple)?;

    let mut reasons = Vec::new();
    if let Some(fv) = values.iter().find(|fv| !fv.value.is_negative()) {
        reasons.push(RefutationReason::AlphaWitness {
            partition: fv.partition,
            value: fv.value.clone(),
        });
    }
    if !beta.is_negative() {
        reasons.push(RefutationReason::BetaDegree { degree: beta });
    }
    reasons.extend(out_of_range);

    report.verdict = if !reasons.is_empty() {
        WitnessVerdict::Refuted(reasons)
    } else if decision.verdict == ChsVerdict::Verified {
        report.klt_note = true;
        WitnessVerdict::Verified
    } else {
        WitnessVerdict::Undecided(format!(
            "M̄₀,{} is beyond the range {FULTON_RANGE_MAX} where F-negativity implies anti-ampleness",
            n + 1
        ))
    };
    report.decision = Some(decision);
    Ok(report)
}

/// Reduced constraint system, its feasibility result, and the full
/// verification of any point found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub n: usize,
    pub forms: Vec<GeneratedForm>,
    pub bounds: Vec<Bound>,
    pub result: FeasibilityResult,
    pub witness: Option<WitnessReport>,
}

impl SearchOutcome {
    /// Forms then bounds, the index space of the certificate.
    pub fn system(&self) -> Vec<LinearForm> {
        let forms: Vec<LinearForm> = self.forms.iter().map(|g| g.form.clone()).collect();
        assemble(&forms, &self.bounds)
    }
}

pub fn search_witness(n: usize, bounds: &[Bound]) -> Result<SearchOutcome> {
    for b in bounds {
        if b.var < 2 || b.var > n {
            return Err(Error::IndexOutOfRange { s: b.var, n });
        }
    }
    let forms = generate_constraints(n, true)?;
    let plain: Vec<LinearForm> = forms.iter().map(|g| g.form.clone()).collect();
    let result = solve_feasibility(&plain, bounds);
    let witness = match &result {
        FeasibilityResult::Feasible { point } => {
            let mut combo = BoundaryCombo::new(n);
            for (s, v) in point {
                combo.set(*s, v.clone())?;
            }
            Some(verify_witness(n, &combo)?)
        }
        FeasibilityResult::Infeasible { .. } => None,
    };
    Ok(SearchOutcome {
        n,
        forms,
        bounds: bounds.to_vec(),
        result,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn form(constant: i64, terms: &[(usize, i64)], strict: bool) -> LinearForm {
        LinearForm::from_terms(
            int(constant),
            terms.iter().map(|(s, c)| (*s, int(*c))),
            if strict {
                Relation::StrictlyNegative
            } else {
                Relation::NonPositive
            },
        )
    }

    fn lemma6_forms() -> Vec<LinearForm> {
        vec![
            form(-1, &[(2, 3), (3, -1)], true),
            form(0, &[(3, 2), (4, -1)], true),
            form(2, &[(4, 3), (2, -3), (6, -1)], true),
        ]
    }

    #[test]
    fn displays_forms() {
        assert_eq!(lemma6_forms()[0].to_string(), "3a2 - a3 - 1 < 0");
        assert_eq!(lemma6_forms()[2].to_string(), "-3a2 + 3a4 - a6 + 2 < 0");
        assert_eq!(form(0, &[], false).to_string(), "0 <= 0");
    }

    #[test]
    fn bounds_parse_and_convert() {
        let b = Bound::parse_list("a4>=0, 6<=1,a2>-1/2,a3<3").unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b[0].to_form().to_string(), "-a4 <= 0");
        assert_eq!(b[1].to_form().to_string(), "a6 - 1 <= 0");
        assert_eq!(b[2].to_form().to_string(), "-a2 - 1/2 < 0");
        assert_eq!(b[3].to_string(), "a3 < 3");
        assert!(Bound::parse_list("a4=0").is_err());
        assert!(Bound::parse_list("a4>=x").is_err());
    }

    #[test]
    fn lemma6_system_is_infeasible() {
        let bounds = Bound::parse_list("a4>=0,a6<=1").unwrap();
        let res = solve_feasibility(&lemma6_forms(), &bounds);
        let system = assemble(&lemma6_forms(), &bounds);
        assert!(!res.is_feasible());
        assert!(res.check(&system));
    }

    #[test]
    fn dropping_a_bound_makes_it_feasible() {
        let bounds = Bound::parse_list("a4>=0").unwrap();
        let res = solve_feasibility(&lemma6_forms(), &bounds);
        assert!(res.is_feasible());
        assert!(res.check(&assemble(&lemma6_forms(), &bounds)));
    }

    #[test]
    fn empty_system_is_feasible_at_zero() {
        assert_eq!(
            solve_feasibility(&[], &[]),
            FeasibilityResult::Feasible {
                point: BTreeMap::new()
            }
        );
    }

    #[test]
    fn constant_contradictions() {
        let res = solve_feasibility(&[form(0, &[], true)], &[]);
        assert_eq!(
            res,
            FeasibilityResult::Infeasible {
                multipliers: vec![Multiplier {
                    form: 0,
                    lambda: int(1)
                }]
            }
        );
        assert!(solve_feasibility(&[form(0, &[], false)], &[]).is_feasible());
        assert!(!solve_feasibility(&[form(1, &[], false)], &[]).is_feasible());
    }

    #[test]
    fn strictness_matters() {
        // a2 <= 0 and -a2 <= 0 is feasible; making either strict is not.
        let weak = [form(0, &[(2, 1)], false), form(0, &[(2, -1)], false)];
        assert!(solve_feasibility(&weak, &[]).is_feasible());
        let strict = [form(0, &[(2, 1)], true), form(0, &[(2, -1)], false)];
        let res = solve_feasibility(&strict, &[]);
        assert!(!res.is_feasible());
        assert!(res.check(&strict));
    }

    #[test]
    fn feasible_points_are_exact() {
        // 1/3 < a2 < 1/2
        let forms = [
            LinearForm::from_terms(q(1, 3), [(2, int(-1))], Relation::StrictlyNegative),
            LinearForm::from_terms(q(-1, 2), [(2, int(1))], Relation::StrictlyNegative),
        ];
        match solve_feasibility(&forms, &[]) {
            FeasibilityResult::Feasible { point } => assert_eq!(point[&2], q(5, 12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generated_lemma6_forms_present() {
        let forms = generate_constraints(6, true).unwrap();
        assert_eq!(forms.len(), 8);
        for f in lemma6_forms() {
            assert!(forms.iter().any(|g| g.form == f), "missing {f}");
        }
        assert_eq!(forms.last().unwrap().origin, FormOrigin::BetaDegree);
        assert_eq!(forms.last().unwrap().form.to_string(), "-a5 - a6 - 9 < 0");
    }

    #[test]
    fn witness_reports() {
        let r = verify_witness(4, &BoundaryCombo::new(4).with(4, int(1)).unwrap()).unwrap();
        assert_eq!(r.verdict, WitnessVerdict::Verified);
        assert_eq!(r.f_min, Some(int(-1)));
        assert_eq!(r.f_max, Some(int(-1)));
        assert_eq!(r.beta_degree, Some(int(-6)));
        assert!(r.klt_note);

        let r = verify_witness(4, &BoundaryCombo::new(4)).unwrap();
        assert_eq!(r.f_max, Some(int(0)));
        assert!(matches!(r.verdict, WitnessVerdict::Refuted(_)));

        let r = verify_witness(4, &BoundaryCombo::new(4).with(4, int(2)).unwrap()).unwrap();
        match r.verdict {
            WitnessVerdict::Refuted(reasons) => assert!(reasons
                .iter()
                .any(|x| matches!(x, RefutationReason::CoefficientOutOfRange { s: 4, .. }))),
            other => panic!("{other:?}"),
        }

        let r = verify_witness(2, &BoundaryCombo::new(2)).unwrap();
        assert!(matches!(r.verdict, WitnessVerdict::Undecided(_)));
    }

    #[test]
    fn search_rejects_foreign_bounds() {
        assert!(search_witness(4, &Bound::parse_list("a6<=1").unwrap()).is_err());
    }
}

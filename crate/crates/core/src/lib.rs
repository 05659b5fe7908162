//! Exact divisor-class calculus on the moduli spaces M̄₀,ₘ of pointed rational
//! curves and M̄₀,ₙ(ℙ¹,1) of degree-one pointed stable maps to the line.
//!
//! The crate is organised bottom-up:
//!
//! - [`combinat`]: marked-point subsets, four-block partitions and their shapes.
//! - [`mcurves`]: divisors on M̄₀,ₘ, the F-curve intersection form and the
//!   Fulton-positivity test.
//! - [`kmaps`]: divisors on M̄₀,ₙ(ℙ¹,1), the canonical class, pullbacks along
//!   α and βᵢ and the pullback ampleness criterion.
//! - [`logfano`]: constraint generation for `K_n + Σ a_s B[s]`, an exact
//!   feasibility solver with Farkas certificates, and witness verification.
//! - [`strata`]: the divisor-level correspondence Δ_S ↦ B_S.
//!
//! All arithmetic is exact ([`Rational`] is an arbitrary-precision rational).

pub mod combinat;
pub mod error;
pub mod json;
pub mod kmaps;
pub mod logfano;
pub mod mcurves;
pub mod rational;
pub mod strata;

pub use combinat::{
    canonical_key, enumerate_four_partitions, enumerate_shapes, CanonMode, FourPartition,
    FourPartitions, LabelSet, PartitionShape, ShapeClass, Subset, MAX_LABELS,
};
pub use error::{Error, Result};
pub use kmaps::{
    canonical_class, chs_ample, k_build, pullback_alpha, pullback_beta, BetaDegree, BoundaryCombo,
    BoundarySpec, ChsDecision, ChsVerdict, KDivisor, KSense,
};
pub use logfano::{
    generate_constraints, search_witness, solve_feasibility, verify_witness, Bound, BoundOp,
    FeasibilityResult, FormOrigin, GeneratedForm, LinearForm, Multiplier, RefutationReason,
    Relation, SearchOutcome, WitnessReport, WitnessVerdict,
};
pub use mcurves::{
    f_curve_value, f_positivity, f_positivity_with, f_values, m_linear_combine, AmpDecision,
    FOptions, FValue, MDivisor, Sense, Verdict, FULTON_RANGE_MAX,
};
pub use rational::{parse_rational, Rational};
pub use strata::{phi_divisor_map, DivisorCorrespondence};

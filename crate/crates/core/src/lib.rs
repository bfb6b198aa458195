//! Genus-2 Jacobian arithmetic over prime fields and the Frobenius algebra
//! of quartic CM fields.
//!
//! The crate provides exact F_p and F_{p^2} arithmetic, Cantor's algorithm
//! on Mumford divisor classes, point counting and the degree-4 Weil
//! polynomial, exhaustive Jacobian enumeration at desk scale, the CM norm
//! and characteristic-polynomial formulas for Frobenius elements
//! `c1 + c2*xi + (c3 + c4*xi)*eta`, residue-level congruence predicates
//! tying non-cyclic ell-Sylow subgroups to embedding degree one, and
//! abelian group structure analysis (invariant factors, Sylow ranks,
//! embedding degrees, random generator search).

pub mod cm;
pub mod field;
pub mod group;
pub mod jacobian;
pub mod poly;

pub use cm::{
    closed_form_remainder_d1, closed_form_remainder_d23, frobenius_char_poly, frobenius_norm,
    remainder_int, remainder_mod_sq, theorem_c2_check, theorem_check_for_instance,
    theorem_ed1_check, Branch, CMField, CmError, FrobeniusElement, PrimitivityScreen,
    TheoremVerdict,
};
pub use field::{is_prime_u64, FieldCtx, FieldError, Fp2, QuadExtCtx};
pub use group::{
    embedding_degree, factorize, group_structure, structure_from_enumeration,
    sylow_generator_search, sylow_rank, valuation, EmbeddingDegreeReport, GroupError,
    GroupStructure, SylowReport, SylowSearch,
};
pub use jacobian::{
    char_poly_from_counts, Curve, CurveError, MumfordDivisor, WeilPoly, DEFAULT_ENUM_BOUND,
    DEFAULT_SWEEP_BOUND,
};
pub use poly::{FpPoly, IntPoly, PolyError};

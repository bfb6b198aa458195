//! Quartic CM field computations: validation of the defining data
//! `(D, a, b)` with `K = Q(eta)`, `eta = i*sqrt(a + b*xi)`, the Frobenius
//! element `omega = c1 + c2*xi + (c3 + c4*xi)*eta`, its norm
//! `p = omega * conj(omega)`, the two explicit branches of the Frobenius
//! characteristic polynomial by `D mod 4`, remainders upon division by
//! `(X - 1)^2`, and the residue-level congruence predicates relating a
//! non-cyclic ell-Sylow subgroup to `p = 1 mod ell`.
//!
//! Here `xi = (1 + sqrt(D))/2` when `D = 1 mod 4` (trace 1, norm
//! `(1 - D)/4`) and `xi = sqrt(D)` otherwise (trace 0, norm `-D`), so that
//! `Z + xi*Z` is the ring of integers of the real subfield `Q(sqrt(D))`.

use crate::field::{is_prime_u64, FieldCtx};
use crate::group::factorize;
use crate::jacobian::WeilPoly;
use crate::poly::FpPoly;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("D = {0} is degenerate; the real subfield needs squarefree D >= 2")]
    DegenerateField(u64),
    #[error("D = {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("a + b*xi is not totally positive")]
    NotTotallyPositive,
    #[error("omega * conj(omega) has nonzero xi-coefficient {0}")]
    IrrationalNorm(i128),
    #[error("norm {0} is not an odd prime")]
    CompositeNorm(i128),
    #[error("norm is even")]
    EvenNorm,
    #[error("norm does not fit in 64 bits")]
    NormOutOfRange,
    #[error("characteristic polynomial violates the Weil bounds (inconsistent inputs)")]
    WeilViolation,
    #[error("ell = 2 is not covered by the residue predicates")]
    EvenEll,
    #[error("ell = {0} is not prime")]
    EllNotPrime(u64),
}

/// Which explicit formula branch applies, by `D mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `D = 2, 3 mod 4`, `xi = sqrt(D)`.
    D23,
    /// `D = 1 mod 4`, `xi = (1 + sqrt(D))/2`.
    D1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrimitivityScreen {
    /// The norm of `a + b*xi` is not a perfect square: the Galois closure
    /// cannot have Klein four group.
    NonBiquadratic,
    /// Square norm; the biquadratic (reducible-Jacobian) shape is possible.
    /// A screen only, not a primitivity proof.
    BiquadraticSuspect,
}

impl std::fmt::Display for PrimitivityScreen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrimitivityScreen::NonBiquadratic => write!(f, "non-biquadratic"),
            PrimitivityScreen::BiquadraticSuspect => write!(f, "biquadratic-suspect"),
        }
    }
}

fn is_squarefree_u64(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

fn is_perfect_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|c| c >= 0 && c * c == n)
}

/// The data `(D, a, b)` of a quartic CM field `Q(i*sqrt(a + b*xi))` with
/// real subfield `Q(sqrt(D))`. Invariants: `D` squarefree, `D >= 2`, and
/// `a + b*xi` totally positive (so `eta` is totally imaginary).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CMField {
    d: u64,
    a: i64,
    b: i64,
}

impl CMField {
    pub fn new(d: u64, a: i64, b: i64) -> Result<Self, CmError> {
        if d < 2 {
            return Err(CmError::DegenerateField(d));
        }
        if !is_squarefree_u64(d) {
            return Err(CmError::NotSquarefree(d));
        }
        // Total positivity of a + b*xi: both embeddings send it to
        // (m +- |b'|*sqrt(D)) / s with s in {1, 2}, so the exact test is
        // m > 0 and m^2 > b^2 * D (equality is impossible, sqrt(D) being
        // irrational for squarefree D >= 2).
        let m: i128 = match d % 4 {
            1 => 2 * a as i128 + b as i128,
            _ => a as i128,
        };
        let rhs = (b as i128) * (b as i128) * d as i128;
        if m <= 0 || m * m <= rhs {
            return Err(CmError::NotTotallyPositive);
        }
        Ok(CMField { d, a, b })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn branch(&self) -> Branch {
        if self.d % 4 == 1 {
            Branch::D1
        } else {
            Branch::D23
        }
    }

    /// Trace of `xi` over Q.
    pub fn xi_trace(&self) -> i64 {
        match self.branch() {
            Branch::D1 => 1,
            Branch::D23 => 0,
        }
    }

    /// Norm of `xi` over Q.
    pub fn xi_norm(&self) -> i64 {
        match self.branch() {
            Branch::D1 => (1 - self.d as i64) / 4,
            Branch::D23 => -(self.d as i64),
        }
    }

    /// Norm of `a + b*xi` from the real subfield to Q:
    /// `a^2 + a*b*tr(xi) + b^2*N(xi)`. Positive by total positivity.
    pub fn real_norm(&self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        a * a + a * b * self.xi_trace() as i128 + b * b * self.xi_norm() as i128
    }

    /// Flags the one excluded Galois shape: a biquadratic field forces the
    /// norm of `a + b*xi` to be a perfect square. Cyclic and non-Galois
    /// fields both pass.
    pub fn primitivity_screen(&self) -> PrimitivityScreen {
        if is_perfect_square_i128(self.real_norm()) {
            PrimitivityScreen::BiquadraticSuspect
        } else {
            PrimitivityScreen::NonBiquadratic
        }
    }

    /// Upper bound Q on odd primes dividing the second invariant factor.
    pub fn q_bound(&self) -> i64 {
        let (a, b, d) = (self.a as i128, self.b as i128, self.d as i128);
        let q = match self.branch() {
            Branch::D23 => [a, d, a * a - b * b * d].into_iter().max().unwrap(),
            Branch::D1 => [
                a,
                d,
                4 * a * (a + b) - b * b * (d - 1),
                a * d + 2 * b * (d - 1),
            ]
            .into_iter()
            .max()
            .unwrap(),
        };
        i64::try_from(q).expect("Q bound fits in 64 bits at desk scale")
    }
}

/// The Frobenius element `omega = c1 + c2*xi + (c3 + c4*xi)*eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrobeniusElement {
    pub c1: i64,
    pub c2: i64,
    pub c3: i64,
    pub c4: i64,
}

impl FrobeniusElement {
    pub fn new(c1: i64, c2: i64, c3: i64, c4: i64) -> Self {
        FrobeniusElement { c1, c2, c3, c4 }
    }
}

/// `omega * conj(omega) = (c1 + c2*xi)^2 + (a + b*xi)(c3 + c4*xi)^2`,
/// expanded in the basis `{1, xi}` with `xi^2 = tr*xi - nm`. The
/// xi-coefficient must vanish and the rational part must be an odd prime.
pub fn frobenius_norm(field: &CMField, w: &FrobeniusElement) -> Result<u64, CmError> {
    let t = field.xi_trace() as i128;
    let n = field.xi_norm() as i128;
    let (a, b) = (field.a as i128, field.b as i128);
    let (c1, c2, c3, c4) = (w.c1 as i128, w.c2 as i128, w.c3 as i128, w.c4 as i128);
    // (c3 + c4*xi)^2 = big_a + big_b*xi
    let big_a = c3 * c3 - n * c4 * c4;
    let big_b = 2 * c3 * c4 + t * c4 * c4;
    let xi_coeff = 2 * c1 * c2 + t * c2 * c2 + a * big_b + b * big_a + t * b * big_b;
    if xi_coeff != 0 {
        return Err(CmError::IrrationalNorm(xi_coeff));
    }
    let r0 = c1 * c1 - n * c2 * c2 + a * big_a - n * b * big_b;
    if r0 > 1 && r0 % 2 == 0 {
        return Err(CmError::EvenNorm);
    }
    let p = u64::try_from(r0).map_err(|_| CmError::NormOutOfRange)?;
    if !is_prime_u64(p) {
        return Err(CmError::CompositeNorm(r0));
    }
    Ok(p)
}

/// The explicit Frobenius characteristic polynomial for `p = norm(omega)`:
/// `a1 = 4*c1`, `a2 = 2p + 4*(c1^2 - c2^2*D)` when `D = 2, 3 mod 4`, and
/// with `c = 2*c1 + c2`: `a1 = 2*c`, `a2 = 2p + c^2 - c2^2*D` when
/// `D = 1 mod 4`.
pub fn frobenius_char_poly(
    field: &CMField,
    w: &FrobeniusElement,
    p: u64,
) -> Result<WeilPoly, CmError> {
    let d = field.d as i128;
    let (c1, c2) = (w.c1 as i128, w.c2 as i128);
    let pi = p as i128;
    let (a1, a2) = match field.branch() {
        Branch::D23 => (4 * c1, 2 * pi + 4 * (c1 * c1 - c2 * c2 * d)),
        Branch::D1 => {
            let c = 2 * c1 + c2;
            (2 * c, 2 * pi + c * c - c2 * c2 * d)
        }
    };
    let poly = WeilPoly {
        p,
        a1: i64::try_from(a1).map_err(|_| CmError::WeilViolation)?,
        a2: i64::try_from(a2).map_err(|_| CmError::WeilViolation)?,
    };
    if !poly.is_weil_valid() {
        return Err(CmError::WeilViolation);
    }
    Ok(poly)
}

/// Exact integer remainder `(linear, constant)` of `P(X)` upon division by
/// `(X - 1)^2`, by long division.
pub fn remainder_int(w: &WeilPoly) -> (i128, i128) {
    let den = crate::poly::IntPoly::new(vec![1, -2, 1]);
    let (_, r) = w
        .to_int_poly()
        .divrem_monic(&den)
        .expect("monic quadratic divisor");
    (r.coeff(1), r.coeff(0))
}

/// The remainder reduced mod ell, as residues `(linear, constant)`.
/// Taking a `FieldCtx` guarantees ell is an odd prime.
pub fn remainder_mod_sq(w: &WeilPoly, ell: &FieldCtx) -> (u64, u64) {
    let (lin, con) = remainder_int(w);
    (ell.reduce_i128(lin), ell.reduce_i128(con))
}

/// Closed form of the `(X - 1)^2` remainder in the `D = 2, 3 mod 4` branch.
pub fn closed_form_remainder_d23(c1: i128, c2: i128, d: i128, p: i128) -> (i128, i128) {
    let k = c1 * c1 - c2 * c2 * d;
    let lin = 4 * (1 - 3 * c1 - (c1 - 1) * p + 2 * k);
    let con = p * p - 2 * p - 4 * k + 8 * c1 - 3;
    (lin, con)
}

/// Closed form of the `(X - 1)^2` remainder in the `D = 1 mod 4` branch,
/// in terms of `c = 2*c1 + c2`.
pub fn closed_form_remainder_d1(c: i128, c2: i128, d: i128, p: i128) -> (i128, i128) {
    let lin = (4 - 2 * c) * p + 2 * c * c - 6 * c - 2 * c2 * c2 * d + 4;
    let con = p * p - 2 * p - 3 + 4 * c - c * c + c2 * c2 * d;
    (lin, con)
}

/// Congruence data carried by a verdict, mod ell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongruenceTrace {
    pub ell: u64,
    /// Remainder of P(X) mod (X - 1)^2, as (linear, constant) residues.
    pub r_linear: u64,
    pub r_constant: u64,
    pub p_residue: u64,
    /// The alternative residue of p excluded by the proof (`2*c1 - 1`,
    /// respectively `c - 1`).
    pub alt_candidate: u64,
}

/// Outcome of a residue-level theorem check. `hypotheses_met` and
/// `!conclusion_holds` together constitute a counterexample; none is ever
/// expected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub hypotheses_met: bool,
    pub conclusion_holds: bool,
    pub details: CongruenceTrace,
}

impl TheoremVerdict {
    pub fn is_counterexample(&self) -> bool {
        self.hypotheses_met && !self.conclusion_holds
    }
}

fn ell_ctx(ell: u64) -> Result<FieldCtx, CmError> {
    if ell == 2 {
        return Err(CmError::EvenEll);
    }
    FieldCtx::new(ell).map_err(|_| CmError::EllNotPrime(ell))
}

/// `P(X) mod ell` from branch residues. For `Branch::D1` the first
/// argument is `c = 2*c1 + c2`.
fn residue_char_poly(
    ctx: &FieldCtx,
    branch: Branch,
    c1_or_c: u64,
    c2: u64,
    d: u64,
    p: u64,
) -> FpPoly {
    let four = ctx.reduce_i64(4);
    let two = ctx.reduce_i64(2);
    let c2sq_d = ctx.mul(ctx.mul(c2, c2), d);
    let (a1, a2) = match branch {
        Branch::D23 => {
            let c1 = c1_or_c;
            let k = ctx.sub(ctx.mul(c1, c1), c2sq_d);
            (ctx.mul(four, c1), ctx.add(ctx.mul(two, p), ctx.mul(four, k)))
        }
        Branch::D1 => {
            let c = c1_or_c;
            (
                ctx.mul(two, c),
                ctx.sub(ctx.add(ctx.mul(two, p), ctx.mul(c, c)), c2sq_d),
            )
        }
    };
    FpPoly::from_residues(vec![
        ctx.mul(p, p),
        ctx.neg(ctx.mul(p, a1)),
        a2,
        ctx.neg(a1),
        1,
    ])
}

fn rem_by_x_minus_1_sq(ctx: &FieldCtx, poly: &FpPoly) -> (u64, u64) {
    let den = FpPoly::from_signed(ctx, &[1, -2, 1]);
    let r = poly.rem(ctx, &den).expect("nonzero divisor");
    (r.coeff(1), r.coeff(0))
}

/// Residue-level check of the main congruence: with `ell` an odd prime not
/// dividing `p`, `c2` or `D`, divisibility of `P(X)` by `(X - 1)^2` mod
/// ell forces `p = 1 mod ell`. All inputs are taken mod ell.
pub fn theorem_ed1_check(
    branch: Branch,
    c1_or_c: u64,
    c2: u64,
    d: u64,
    p: u64,
    ell: u64,
) -> Result<TheoremVerdict, CmError> {
    let ctx = ell_ctx(ell)?;
    let c1c = c1_or_c % ell;
    let c2r = c2 % ell;
    let dr = d % ell;
    let pr = p % ell;
    let pm = residue_char_poly(&ctx, branch, c1c, c2r, dr, pr);
    let (r_lin, r_con) = rem_by_x_minus_1_sq(&ctx, &pm);
    let hypotheses_met = pr != 0 && c2r != 0 && dr != 0 && r_lin == 0 && r_con == 0;
    let alt_candidate = match branch {
        Branch::D23 => ctx.sub(ctx.mul(ctx.reduce_i64(2), c1c), 1),
        Branch::D1 => ctx.sub(c1c, 1),
    };
    Ok(TheoremVerdict {
        hypotheses_met,
        conclusion_holds: pr == 1,
        details: CongruenceTrace {
            ell,
            r_linear: r_lin,
            r_constant: r_con,
            p_residue: pr,
            alt_candidate,
        },
    })
}

/// Residue-level check of the `ell | c2` case: both branches collapse to
/// `P(X) = (X^2 - 2*c1*X + p)^2 mod ell` identically, and if additionally
/// `P(1) = 0 mod ell` then `p = 2*c1 - 1` and `P = (X - 1)^2 (X - p)^2`.
///
/// `hypotheses_met` records `P(1) = 0`; `conclusion_holds` requires the
/// unconditional square identity and, under the hypothesis, the forced
/// residue and factored form.
pub fn theorem_c2_check(c1: u64, p: u64, ell: u64) -> Result<TheoremVerdict, CmError> {
    let ctx = ell_ctx(ell)?;
    let c1r = c1 % ell;
    let pr = p % ell;
    let two = ctx.reduce_i64(2);
    // c2 = 0 and the D-multiplier c2^2*D vanishes, so any D works here.
    let pm = residue_char_poly(&ctx, Branch::D23, c1r, 0, 1, pr);
    let base = FpPoly::from_residues(vec![pr, ctx.neg(ctx.mul(two, c1r)), 1]);
    let identity_ok = pm == base.mul(&ctx, &base);
    let hypotheses_met = pm.eval(&ctx, 1) == 0;
    let alt_candidate = ctx.sub(ctx.mul(two, c1r), 1);
    let mut conclusion_holds = identity_ok;
    if hypotheses_met {
        let forced_ok = pr == alt_candidate;
        let lin = FpPoly::from_residues(vec![pr, ctx.neg(ctx.add(pr, 1)), 1]); // (X-1)(X-p)
        let factored_ok = pm == lin.mul(&ctx, &lin);
        conclusion_holds = conclusion_holds && forced_ok && factored_ok;
    }
    let (r_lin, r_con) = rem_by_x_minus_1_sq(&ctx, &pm);
    Ok(TheoremVerdict {
        hypotheses_met,
        conclusion_holds,
        details: CongruenceTrace {
            ell,
            r_linear: r_lin,
            r_constant: r_con,
            p_residue: pr,
            alt_candidate,
        },
    })
}

/// Instance-level dispatch: reduce integer CM data mod ell and run the
/// branch-appropriate predicate (`theorem_ed1_check` when `ell` does not
/// divide `c2`, `theorem_c2_check` otherwise).
pub fn theorem_check_for_instance(
    field: &CMField,
    w: &FrobeniusElement,
    p: u64,
    ell: u64,
) -> Result<TheoremVerdict, CmError> {
    let ctx = ell_ctx(ell)?;
    let c2r = ctx.reduce_i64(w.c2);
    if c2r == 0 {
        return theorem_c2_check(ctx.reduce_i64(w.c1), p % ell, ell);
    }
    let dr = ctx.reduce_i64(field.d as i64);
    match field.branch() {
        Branch::D23 => {
            theorem_ed1_check(Branch::D23, ctx.reduce_i64(w.c1), c2r, dr, p % ell, ell)
        }
        Branch::D1 => {
            let c = (2 * w.c1 as i128 + w.c2 as i128) as i64;
            theorem_ed1_check(Branch::D1, ctx.reduce_i64(c), c2r, dr, p % ell, ell)
        }
    }
}

/// The four conjugates of `omega` as complex numbers, for numeric
/// cross-checks: `omega` and its complex conjugate at each real embedding
/// of `xi`.
pub fn frobenius_conjugates(field: &CMField, w: &FrobeniusElement) -> [(f64, f64); 4] {
    let d = field.d as f64;
    let sq = d.sqrt();
    let (xi1, xi2) = match field.branch() {
        Branch::D1 => ((1.0 + sq) / 2.0, (1.0 - sq) / 2.0),
        Branch::D23 => (sq, -sq),
    };
    let (a, b) = (field.a as f64, field.b as f64);
    let (c1, c2, c3, c4) = (w.c1 as f64, w.c2 as f64, w.c3 as f64, w.c4 as f64);
    let mut out = [(0.0, 0.0); 4];
    for (i, xi) in [xi1, xi2].into_iter().enumerate() {
        let re = c1 + c2 * xi;
        let im = (c3 + c4 * xi) * (a + b * xi).sqrt();
        out[2 * i] = (re, im);
        out[2 * i + 1] = (re, -im);
    }
    out
}

/// Numeric expansion of `prod_i (X - omega_i)`, coefficients in descending
/// degree order. This is the independent route the explicit formulas are
/// checked against.
pub fn char_poly_from_conjugates(field: &CMField, w: &FrobeniusElement) -> [f64; 5] {
    let roots = frobenius_conjugates(field, w);
    let mut coeffs = [(0.0f64, 0.0f64); 5];
    coeffs[0] = (1.0, 0.0);
    for (k, r) in roots.into_iter().enumerate() {
        let mut next = [(0.0f64, 0.0f64); 5];
        for i in 0..=k {
            next[i].0 += coeffs[i].0;
            next[i].1 += coeffs[i].1;
            // subtract r * coeffs[i] from the next slot
            next[i + 1].0 -= r.0 * coeffs[i].0 - r.1 * coeffs[i].1;
            next[i + 1].1 -= r.0 * coeffs[i].1 + r.1 * coeffs[i].0;
        }
        coeffs = next;
    }
    [coeffs[0].0, coeffs[1].0, coeffs[2].0, coeffs[3].0, coeffs[4].0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_a() -> CMField {
        CMField::new(2, 2, 1).unwrap()
    }

    fn omega_a() -> FrobeniusElement {
        FrobeniusElement::new(1, -1, 0, 1)
    }

    fn field_b() -> CMField {
        CMField::new(5, 2, 1).unwrap()
    }

    fn omega_b() -> FrobeniusElement {
        FrobeniusElement::new(-2, 2, 0, 1)
    }

    #[test]
    fn field_validation() {
        assert!(CMField::new(2, 2, 1).is_ok()); // 2 +- sqrt(2) > 0
        assert!(CMField::new(5, 2, 1).is_ok());
        assert_eq!(CMField::new(2, 1, 1), Err(CmError::NotTotallyPositive)); // 1 - sqrt(2) < 0
        assert_eq!(CMField::new(1, 2, 1), Err(CmError::DegenerateField(1)));
        assert_eq!(CMField::new(0, 2, 1), Err(CmError::DegenerateField(0)));
        assert_eq!(CMField::new(12, 5, 1), Err(CmError::NotSquarefree(12)));
        assert_eq!(CMField::new(3, 0, 0), Err(CmError::NotTotallyPositive));
        assert_eq!(CMField::new(5, -1, 4), Err(CmError::NotTotallyPositive));
        assert!(CMField::new(5, 1, 1).is_ok()); // embeddings 1 + (1 +- sqrt(5))/2 > 0
    }

    #[test]
    fn xi_data_by_branch() {
        let f = field_a();
        assert_eq!((f.xi_trace(), f.xi_norm()), (0, -2));
        let g = field_b();
        assert_eq!((g.xi_trace(), g.xi_norm()), (1, -1));
    }

    #[test]
    fn primitivity_screen_examples() {
        assert_eq!(field_a().real_norm(), 2);
        assert_eq!(field_a().primitivity_screen(), PrimitivityScreen::NonBiquadratic);
        assert_eq!(field_b().real_norm(), 5);
        assert_eq!(field_b().primitivity_screen(), PrimitivityScreen::NonBiquadratic);
        // 3^2 - 2^2 * 2 = 1 is a perfect square.
        let sus = CMField::new(2, 3, 2).unwrap();
        assert_eq!(sus.real_norm(), 1);
        assert_eq!(sus.primitivity_screen(), PrimitivityScreen::BiquadraticSuspect);
    }

    #[test]
    fn norm_instances() {
        assert_eq!(frobenius_norm(&field_a(), &omega_a()).unwrap(), 7);
        assert_eq!(frobenius_norm(&field_b(), &omega_b()).unwrap(), 11);
        assert_eq!(
            frobenius_norm(&field_a(), &FrobeniusElement::new(1, 0, 1, 0)),
            Err(CmError::IrrationalNorm(1))
        );
        // Doubling omega scales the norm by 4: even.
        assert_eq!(
            frobenius_norm(&field_a(), &FrobeniusElement::new(2, -2, 0, 2)),
            Err(CmError::EvenNorm)
        );
        // Tripling scales by 9: composite 63.
        assert_eq!(
            frobenius_norm(&field_a(), &FrobeniusElement::new(3, -3, 0, 3)),
            Err(CmError::CompositeNorm(63))
        );
    }

    #[test]
    fn norm_gate_rejects_single_coefficient_perturbations() {
        let f = field_a();
        let w = omega_a();
        let base = [w.c1, w.c2, w.c3, w.c4];
        for i in 0..4 {
            let mut c = base;
            c[i] += 1;
            let perturbed = FrobeniusElement::new(c[0], c[1], c[2], c[3]);
            if let Ok(p) = frobenius_norm(&f, &perturbed) { assert_ne!(p, 7, "perturbing c{} must not silently keep p = 7", i + 1) }
        }
    }

    #[test]
    fn char_poly_instances() {
        let pa = frobenius_char_poly(&field_a(), &omega_a(), 7).unwrap();
        assert_eq!(pa.coeffs_desc(), [1, -4, 10, -28, 49]);
        assert_eq!(pa.order(), 28);

        let pb = frobenius_char_poly(&field_b(), &omega_b(), 11).unwrap();
        assert_eq!(pb.coeffs_desc(), [1, 4, 6, 44, 121]);
        assert_eq!(pb.order(), 176);

        // Wrong p for the instance fails the Weil gate.
        assert_eq!(
            frobenius_char_poly(&field_a(), &omega_a(), 3),
            Err(CmError::WeilViolation)
        );
    }

    #[test]
    fn char_poly_matches_numeric_conjugate_product() {
        let cases = [
            (field_a(), omega_a(), 7u64),
            (field_b(), omega_b(), 11u64),
        ];
        for (f, w, p) in cases {
            let poly = frobenius_char_poly(&f, &w, p).unwrap();
            let numeric = char_poly_from_conjugates(&f, &w);
            for (exact, approx) in poly.coeffs_desc().iter().zip(numeric.iter()) {
                assert!(
                    (*exact as f64 - approx).abs() < 1e-6,
                    "{exact} vs {approx}"
                );
            }
            // Norm rationality at both embeddings: |omega|^2 = p.
            let conj = frobenius_conjugates(&f, &w);
            for z in [conj[0], conj[2]] {
                assert!((z.0 * z.0 + z.1 * z.1 - p as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn remainder_instances() {
        let pa = frobenius_char_poly(&field_a(), &omega_a(), 7).unwrap();
        assert_eq!(remainder_int(&pa), (-16, 44));
        let f13 = FieldCtx::new(13).unwrap();
        assert_eq!(remainder_mod_sq(&pa, &f13), (10, 5));

        let pb = frobenius_char_poly(&field_b(), &omega_b(), 11).unwrap();
        assert_eq!(remainder_int(&pb), (72, 104));

        // (X - 1)^2 (X - p)^2 leaves remainder zero.
        let p = 7i64;
        let exact_square = WeilPoly {
            p: 7,
            a1: 2 * p + 2,
            a2: p * p + 4 * p + 1,
        };
        assert_eq!(remainder_int(&exact_square), (0, 0));
    }

    #[test]
    fn remainder_closed_forms_agree_with_division() {
        // Both branches, a grid of integer parameters.
        for c1 in -6i128..=6 {
            for c2 in -4i128..=4 {
                for d in [2i128, 3, 6, 7, 10] {
                    for p in [7i128, 11, 23, 101] {
                        let w = WeilPoly {
                            p: p as u64,
                            a1: (4 * c1) as i64,
                            a2: (2 * p + 4 * (c1 * c1 - c2 * c2 * d)) as i64,
                        };
                        assert_eq!(remainder_int(&w), closed_form_remainder_d23(c1, c2, d, p));
                    }
                }
                for d in [5i128, 13, 17] {
                    for p in [7i128, 11, 23, 101] {
                        let c = 2 * c1 + c2;
                        let w = WeilPoly {
                            p: p as u64,
                            a1: (2 * c) as i64,
                            a2: (2 * p + c * c - c2 * c2 * d) as i64,
                        };
                        assert_eq!(remainder_int(&w), closed_form_remainder_d1(c, c2, d, p));
                    }
                }
            }
        }
    }

    #[test]
    fn ed1_examples() {
        // c1 = 1, c2 = 1, D = 2: the linear remainder coefficient is -16,
        // nonzero mod 5 for every p, so the hypotheses are never met.
        for p in 0..5 {
            let v = theorem_ed1_check(Branch::D23, 1, 1, 2, p, 5).unwrap();
            assert!(!v.hypotheses_met);
        }
        // (c1 - 1)^2 = c2^2 * D mod 5 with p = 1: hypotheses met, conclusion holds.
        let v = theorem_ed1_check(Branch::D23, 2, 1, 6, 11, 5).unwrap();
        assert!(v.hypotheses_met);
        assert!(v.conclusion_holds);
        assert!(!v.is_counterexample());

        assert_eq!(
            theorem_ed1_check(Branch::D23, 0, 1, 1, 1, 2),
            Err(CmError::EvenEll)
        );
        assert_eq!(
            theorem_ed1_check(Branch::D23, 0, 1, 1, 1, 9),
            Err(CmError::EllNotPrime(9))
        );
    }

    #[test]
    fn ed1_exhaustive_ell_3() {
        for branch in [Branch::D23, Branch::D1] {
            let mut witnesses = 0u64;
            for c in 0..3 {
                for c2 in 1..3 {
                    for d in 1..3 {
                        for p in 1..3 {
                            let v = theorem_ed1_check(branch, c, c2, d, p, 3).unwrap();
                            assert!(!v.is_counterexample(), "{branch:?} {c} {c2} {d} {p}");
                            if v.hypotheses_met {
                                witnesses += 1;
                            }
                        }
                    }
                }
            }
            assert!(witnesses > 0, "{branch:?} has a hypothesis-satisfying witness");
        }
    }

    #[test]
    fn c2_case_examples() {
        let v = theorem_c2_check(1, 1, 3).unwrap();
        assert!(v.hypotheses_met);
        assert!(v.conclusion_holds);

        let v = theorem_c2_check(2, 3, 7).unwrap();
        assert!(v.hypotheses_met, "P(1) = (1 - 4 + 3)^2 = 0 mod 7");
        assert!(v.conclusion_holds, "p = 2*c1 - 1 = 3");

        // ell <= 13, all residue pairs: the square identity always holds and
        // the factored form follows whenever P(1) = 0.
        for ell in [3u64, 5, 7, 11, 13] {
            for c1 in 0..ell {
                for p in 0..ell {
                    let v = theorem_c2_check(c1, p, ell).unwrap();
                    assert!(v.conclusion_holds, "ell={ell} c1={c1} p={p}");
                }
            }
        }
    }

    #[test]
    fn q_bound_examples() {
        assert_eq!(field_a().q_bound(), 2);
        assert_eq!(field_b().q_bound(), 20);
        for (d, a, b) in [(2u64, 2i64, 1i64), (3, 5, 2), (5, 2, 1), (13, 4, 1)] {
            let f = CMField::new(d, a, b).unwrap();
            assert!(f.q_bound() >= d as i64, "Q >= D");
        }
    }

    #[test]
    fn instance_dispatch_selects_branch() {
        // Instance B has c2 = 2: ell = 3 does not divide it, ell = 2 is an error.
        let v = theorem_check_for_instance(&field_b(), &omega_b(), 11, 3).unwrap();
        assert!(!v.is_counterexample());
        assert_eq!(
            theorem_check_for_instance(&field_b(), &omega_b(), 11, 2),
            Err(CmError::EvenEll)
        );
        // With c2 divisible by ell the c2-case identity is checked.
        let w = FrobeniusElement::new(1, -3, 0, 1);
        if let Ok(p) = frobenius_norm(&field_a(), &w) {
            let v = theorem_check_for_instance(&field_a(), &w, p, 3).unwrap();
            assert!(v.conclusion_holds);
        }
    }
}

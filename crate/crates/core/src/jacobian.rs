//! Genus-2 hyperelliptic curves `y^2 = f(x)` over F_p, divisor classes in
//! Mumford representation with Cantor's composition-and-reduction group
//! law, point counting over F_p and F_{p^2}, the degree-4 characteristic
//! polynomial of Frobenius, and exhaustive Jacobian enumeration as the
//! desk-scale ground truth.
//!
//! Divisor arithmetic runs on an odd-degree (degree-5) model with a single
//! point at infinity. A degree-6 input is accepted when `f` has a rational
//! root `x0`; moving the Weierstrass point `(x0, 0)` to infinity by
//! `x = x0 + 1/X`, `y = Y/X^3` yields an isomorphic degree-5 model.

use crate::field::{FieldCtx, FieldError, Fp2, QuadExtCtx};
use crate::poly::{FpPoly, IntPoly, PolyError};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

/// Largest p for which full Jacobian enumeration is attempted by default.
pub const DEFAULT_ENUM_BOUND: u64 = 97;

/// Largest p^k swept by default when counting points over F_{p^k}.
pub const DEFAULT_SWEEP_BOUND: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("curve polynomial must have degree 5 or 6, got {0}")]
    BadDegree(usize),
    #[error("curve polynomial is not squarefree")]
    NotSquarefree,
    #[error("modulus {0} is composite")]
    CompositeModulus(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus {0} does not fit in 63 bits")]
    ModulusTooLarge(u64),
    #[error("degree-6 model without a rational Weierstrass point is not supported")]
    DegreeSixUnsupported,
    #[error("divisor fails the Mumford condition for this curve")]
    InvalidDivisor,
    #[error("bound exceeded: requested {requested}, limit {limit}")]
    BoundExceeded { requested: u64, limit: u64 },
    #[error("point counts are inconsistent with the genus-2 Weil bounds")]
    InconsistentCounts,
    #[error("the given order does not annihilate the divisor")]
    NotAnnihilated,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<FieldError> for CurveError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::CompositeModulus(p) => CurveError::CompositeModulus(p),
            FieldError::EvenCharacteristic => CurveError::EvenCharacteristic,
            FieldError::ModulusTooLarge(p) => CurveError::ModulusTooLarge(p),
            FieldError::DivisionByZero => CurveError::InvalidDivisor,
        }
    }
}

/// The characteristic polynomial of the p-power Frobenius,
/// `P(X) = X^4 - a1*X^3 + a2*X^2 - p*a1*X + p^2`.
///
/// The degree-3 coefficient is forced to `p` times the degree-1 one by the
/// functional equation; `|Jac(C)(F_p)| = P(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeilPoly {
    pub p: u64,
    pub a1: i64,
    pub a2: i64,
}

impl WeilPoly {
    /// Coefficients in descending degree order: `[1, -a1, a2, -p*a1, p^2]`.
    pub fn coeffs_desc(&self) -> [i128; 5] {
        let p = self.p as i128;
        let a1 = self.a1 as i128;
        [1, -a1, self.a2 as i128, -p * a1, p * p]
    }

    pub fn eval(&self, x: i128) -> i128 {
        let p = self.p as i128;
        let a1 = self.a1 as i128;
        let a2 = self.a2 as i128;
        x * x * x * x - a1 * x * x * x + a2 * x * x - p * a1 * x + p * p
    }

    /// `P(1)`, the group order.
    pub fn order(&self) -> u64 {
        let v = self.eval(1);
        debug_assert!(v > 0, "P(1) must be positive for a valid Weil polynomial");
        v as u64
    }

    /// True iff all four complex roots have modulus sqrt(p), checked by
    /// exact integer conditions on the resolvent `Y^2 - a1*Y + (a2 - 2p)`:
    /// its roots must be real and lie in `[-2*sqrt(p), 2*sqrt(p)]`.
    pub fn is_weil_valid(&self) -> bool {
        let p = self.p as i128;
        let a1 = self.a1 as i128;
        let a2 = self.a2 as i128;
        a1 * a1 <= 16 * p
            && a2.abs() <= 6 * p
            && a1 * a1 - 4 * a2 + 8 * p >= 0
            && 2 * p + a2 >= 0
            && (2 * p + a2) * (2 * p + a2) >= 4 * a1 * a1 * p
    }

    pub fn to_int_poly(&self) -> IntPoly {
        let [c4, c3, c2, c1, c0] = self.coeffs_desc();
        IntPoly::new(vec![c0, c1, c2, c3, c4])
    }

    /// Reduction mod an odd prime ell, as a polynomial over F_ell.
    pub fn reduce_mod(&self, ell: &FieldCtx) -> FpPoly {
        let [c4, c3, c2, c1, c0] = self.coeffs_desc();
        FpPoly::from_residues(vec![
            ell.reduce_i128(c0),
            ell.reduce_i128(c1),
            ell.reduce_i128(c2),
            ell.reduce_i128(c3),
            ell.reduce_i128(c4),
        ])
    }

    /// The four complex roots `(re, im)`, via the functional-equation
    /// factorization `P = (X^2 - y1*X + p)(X^2 - y2*X + p)` where the `y_i`
    /// are the resolvent roots. Whether each quadratic factor has a
    /// conjugate pair is decided by exact integer sign tests, so boundary
    /// polynomials (double real resolvent roots, `y^2 = 4p`) do not split
    /// numerically; conjugate-pair moduli come out as sqrt(p) to machine
    /// precision.
    pub fn complex_roots(&self) -> [(f64, f64); 4] {
        let p = self.p as i128;
        let a1 = self.a1 as i128;
        let a2 = self.a2 as i128;
        let disc1 = a1 * a1 - 4 * a2 + 8 * p;
        let pf = self.p as f64;
        if disc1 < 0 {
            // Complex resolvent roots: not a Weil shape; fall back to the
            // generic complex quadratic cascade.
            let (y1, y2) = quadratic_roots(
                (-(self.a1 as f64), 0.0),
                (self.a2 as f64 - 2.0 * pf, 0.0),
            );
            let (r1, r2) = quadratic_roots(c_neg(y1), (pf, 0.0));
            let (r3, r4) = quadratic_roots(c_neg(y2), (pf, 0.0));
            return [r1, r2, r3, r4];
        }
        let s = (disc1 as f64).sqrt();
        let mut out = [(0.0, 0.0); 4];
        for (idx, sigma) in [1i128, -1].into_iter().enumerate() {
            let y = (self.a1 as f64 + sigma as f64 * s) / 2.0;
            // Sign of y^2 - 4p = (a1^2 + disc1 - 16p + 2*sigma*a1*sqrt(disc1)) / 4.
            let sgn = sign_a_plus_b_sqrt_c(a1 * a1 + disc1 - 16 * p, 2 * sigma * a1, disc1);
            if sgn <= 0 {
                let re = y / 2.0;
                let im = (pf - re * re).max(0.0).sqrt();
                out[2 * idx] = (re, im);
                out[2 * idx + 1] = (re, -im);
            } else {
                let d = (y * y / 4.0 - pf).max(0.0).sqrt();
                out[2 * idx] = (y / 2.0 + d, 0.0);
                out[2 * idx + 1] = (y / 2.0 - d, 0.0);
            }
        }
        out
    }
}

/// Exact sign of `a + b*sqrt(c)` for integers with `c >= 0`.
fn sign_a_plus_b_sqrt_c(a: i128, b: i128, c: i128) -> i32 {
    debug_assert!(c >= 0);
    if c == 0 || b == 0 {
        return a.signum() as i32;
    }
    if a >= 0 && b > 0 {
        return 1;
    }
    if a <= 0 && b < 0 {
        return -1;
    }
    // Opposite signs: compare a^2 against b^2 * c.
    let lhs = a * a;
    let rhs = b * b * c;
    let cmp = if lhs > rhs {
        1
    } else if lhs < rhs {
        -1
    } else {
        0
    };
    if a > 0 {
        cmp
    } else {
        -cmp
    }
}

// Small complex helpers for root extraction.
fn c_neg(a: (f64, f64)) -> (f64, f64) {
    (-a.0, -a.1)
}
fn c_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}
fn c_sqrt(a: (f64, f64)) -> (f64, f64) {
    let r = (a.0 * a.0 + a.1 * a.1).sqrt();
    let re = ((r + a.0) / 2.0).max(0.0).sqrt();
    let im_mag = ((r - a.0) / 2.0).max(0.0).sqrt();
    (re, if a.1 < 0.0 { -im_mag } else { im_mag })
}
/// Roots of the monic quadratic `X^2 + b*X + c` with complex coefficients.
fn quadratic_roots(b: (f64, f64), c: (f64, f64)) -> ((f64, f64), (f64, f64)) {
    let disc = (
        c_mul(b, b).0 - 4.0 * c.0,
        c_mul(b, b).1 - 4.0 * c.1,
    );
    let s = c_sqrt(disc);
    let r1 = ((-b.0 + s.0) / 2.0, (-b.1 + s.1) / 2.0);
    let r2 = ((-b.0 - s.0) / 2.0, (-b.1 - s.1) / 2.0);
    (r1, r2)
}

/// Builds the Frobenius characteristic polynomial from the point counts
/// `N1 = #C(F_p)` and `N2 = #C(F_{p^2})` via the trace identities
/// `a1 = (p + 1) - N1` and `2*a2 = a1^2 + N2 - p^2 - 1`.
pub fn char_poly_from_counts(n1: u64, n2: u64, p: u64) -> Result<WeilPoly, CurveError> {
    let pi = p as i128;
    let a1 = (pi + 1) - n1 as i128;
    if a1 * a1 > 16 * pi {
        return Err(CurveError::InconsistentCounts);
    }
    if (n2 as i128 - (pi * pi + 1)).abs() > 4 * pi {
        return Err(CurveError::InconsistentCounts);
    }
    let twice_a2 = a1 * a1 + n2 as i128 - pi * pi - 1;
    if twice_a2.rem_euclid(2) != 0 {
        return Err(CurveError::InconsistentCounts);
    }
    let w = WeilPoly {
        p,
        a1: a1 as i64,
        a2: (twice_a2 / 2) as i64,
    };
    if !w.is_weil_valid() {
        return Err(CurveError::InconsistentCounts);
    }
    Ok(w)
}

/// A reduced divisor class `(u, v)`: `u` monic of degree <= 2, `deg v < deg u`,
/// and `u | v^2 - f`. The identity is `(1, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MumfordDivisor {
    u: FpPoly,
    v: FpPoly,
}

impl MumfordDivisor {
    pub fn identity() -> Self {
        MumfordDivisor {
            u: FpPoly::one(),
            v: FpPoly::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.u.degree() == Some(0)
    }

    pub fn u(&self) -> &FpPoly {
        &self.u
    }

    pub fn v(&self) -> &FpPoly {
        &self.v
    }

    /// Validates `(u, v)` against the curve before accepting it.
    pub fn new(curve: &Curve, u: FpPoly, v: FpPoly) -> Result<Self, CurveError> {
        let d = MumfordDivisor { u, v };
        curve.validate_divisor(&d)?;
        Ok(d)
    }
}

/// A genus-2 curve `y^2 = f(x)` with `f` squarefree of degree 5 or 6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    ctx: FieldCtx,
    f: FpPoly,
    model: FpPoly,
    moved_root: Option<u64>,
}

impl Curve {
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Self, CurveError> {
        let ctx = FieldCtx::new(p)?;
        let f = FpPoly::from_signed(&ctx, coeffs);
        match f.degree() {
            Some(5) | Some(6) => {}
            d => return Err(CurveError::BadDegree(d.unwrap_or(0))),
        }
        if !f.is_squarefree(&ctx) {
            return Err(CurveError::NotSquarefree);
        }
        let (model, moved_root) = if f.degree() == Some(5) {
            (f.clone(), None)
        } else {
            let x0 = (0..p)
                .find(|&x| f.eval(&ctx, x) == 0)
                .ok_or(CurveError::DegreeSixUnsupported)?;
            // y^2 = f(x0 + s) = c1*s + ... + c6*s^6 (c0 = 0, c1 = f'(x0) != 0),
            // so with X = 1/s, Y = y/s^3 the curve is Y^2 = c1*X^5 + ... + c6.
            let shifted = taylor_shift(&ctx, &f, x0);
            debug_assert_eq!(shifted[0], 0);
            let model = FpPoly::from_residues(shifted[1..=6].iter().rev().copied().collect());
            (model, Some(x0))
        };
        debug_assert_eq!(model.degree(), Some(5));
        debug_assert!(model.is_squarefree(&ctx));
        Ok(Curve {
            ctx,
            f,
            model,
            moved_root,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// The defining polynomial as given (degree 5 or 6).
    pub fn f(&self) -> &FpPoly {
        &self.f
    }

    /// The degree-5 polynomial divisor arithmetic runs on.
    pub fn model(&self) -> &FpPoly {
        &self.model
    }

    /// The rational Weierstrass x-coordinate moved to infinity, for
    /// degree-6 inputs.
    pub fn moved_root(&self) -> Option<u64> {
        self.moved_root
    }

    pub fn validate_divisor(&self, d: &MumfordDivisor) -> Result<(), CurveError> {
        let p = self.ctx.p();
        let shape_ok = d.u.is_monic()
            && d.u.degree() <= Some(2)
            && d.v.degree() < d.u.degree()
            && d.u.coeffs().iter().all(|&c| c < p)
            && d.v.coeffs().iter().all(|&c| c < p);
        if !shape_ok || !self.mumford_holds(&d.u, &d.v) {
            return Err(CurveError::InvalidDivisor);
        }
        Ok(())
    }

    fn mumford_holds(&self, u: &FpPoly, v: &FpPoly) -> bool {
        let ctx = &self.ctx;
        let diff = v.mul(ctx, v).sub(ctx, &self.model);
        diff.rem(ctx, u).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Cantor addition of reduced divisor classes.
    pub fn add(
        &self,
        d1: &MumfordDivisor,
        d2: &MumfordDivisor,
    ) -> Result<MumfordDivisor, CurveError> {
        self.validate_divisor(d1)?;
        self.validate_divisor(d2)?;
        Ok(self.add_unchecked(d1, d2))
    }

    /// Composition gcd(u1, u2, v1 + v2), then reduction down to deg u <= 2.
    fn add_unchecked(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> MumfordDivisor {
        let ctx = &self.ctx;
        let f = &self.model;
        let (g1, e1, e2) = d1.u.xgcd(ctx, &d2.u);
        let vsum = d1.v.add(ctx, &d2.v);
        let (g, c1, c2) = g1.xgcd(ctx, &vsum);
        let s1 = c1.mul(ctx, &e1);
        let s2 = c1.mul(ctx, &e2);
        let gg = g.mul(ctx, &g);
        let (mut u, r) = d1
            .u
            .mul(ctx, &d2.u)
            .divrem(ctx, &gg)
            .expect("gcd is nonzero");
        debug_assert!(r.is_zero(), "g^2 divides u1*u2 for valid divisors");
        let t1 = s1.mul(ctx, &d1.u).mul(ctx, &d2.v);
        let t2 = s2.mul(ctx, &d2.u).mul(ctx, &d1.v);
        let t3 = c2.mul(ctx, &d1.v.mul(ctx, &d2.v).add(ctx, f));
        let num = t1.add(ctx, &t2).add(ctx, &t3);
        let (vq, vr) = num.divrem(ctx, &g).expect("gcd is nonzero");
        debug_assert!(vr.is_zero(), "g divides the v numerator for valid divisors");
        let mut v = vq.rem(ctx, &u).expect("u is nonzero");
        while u.degree() > Some(2) {
            let (unext, rr) = f
                .sub(ctx, &v.mul(ctx, &v))
                .divrem(ctx, &u)
                .expect("u is nonzero");
            debug_assert!(rr.is_zero(), "u divides f - v^2 during reduction");
            let unext = unext.make_monic(ctx);
            v = v.neg(ctx).rem(ctx, &unext).expect("unext is nonzero");
            u = unext;
        }
        let u = u.make_monic(ctx);
        debug_assert!(self.mumford_holds(&u, &v));
        MumfordDivisor { u, v }
    }

    /// Inverse class `(u, -v mod u)`.
    pub fn neg(&self, d: &MumfordDivisor) -> Result<MumfordDivisor, CurveError> {
        self.validate_divisor(d)?;
        Ok(MumfordDivisor {
            u: d.u.clone(),
            v: d.v.neg(&self.ctx),
        })
    }

    /// `n * d` by double-and-add; negative multiples go through `neg`.
    pub fn scalar_mul(&self, n: u64, d: &MumfordDivisor) -> Result<MumfordDivisor, CurveError> {
        self.validate_divisor(d)?;
        Ok(self.scalar_mul_unchecked(n, d))
    }

    fn scalar_mul_unchecked(&self, mut n: u64, d: &MumfordDivisor) -> MumfordDivisor {
        let mut acc = MumfordDivisor::identity();
        let mut base = d.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.add_unchecked(&base, &base);
            }
        }
        acc
    }

    /// All reduced classes with the given monic `u` of degree <= 2.
    ///
    /// Degree 1: `v` is a square root of `f(a)` at the root `a`.
    /// Degree 2 split: `v` interpolates a point over each root.
    /// Degree 2 with a double root `a`: `v(a)^2 = f(a)` and `2 v(a) v'(a) = f'(a)`.
    /// Degree 2 irreducible: `v(alpha)` is a square root of `f(alpha)` in
    /// F_{p^2}, written back in the basis `{1, alpha}`.
    fn classes_for_u(&self, ext: &QuadExtCtx, u: &FpPoly, out: &mut Vec<MumfordDivisor>) {
        let ctx = &self.ctx;
        let f = &self.model;
        let p = ctx.p();
        debug_assert!(u.is_monic());
        match u.degree() {
            Some(0) => out.push(MumfordDivisor::identity()),
            Some(1) => {
                let a = ctx.neg(u.coeff(0));
                if let Some((r, s)) = ctx.sqrt(f.eval(ctx, a)) {
                    out.push(MumfordDivisor {
                        u: u.clone(),
                        v: FpPoly::constant(r),
                    });
                    if s != r {
                        out.push(MumfordDivisor {
                            u: u.clone(),
                            v: FpPoly::constant(s),
                        });
                    }
                }
            }
            Some(2) => {
                let u1 = u.coeff(1);
                let u0 = u.coeff(0);
                let half = ctx.inv(2).expect("p odd");
                let disc = ctx.sub(ctx.mul(u1, u1), ctx.mul(4 % p, u0));
                match ctx.legendre(disc) {
                    1 => {
                        let (sd, _) = ctx.sqrt(disc).expect("disc is a square");
                        let a = ctx.mul(ctx.sub(sd, u1), half);
                        let b = ctx.mul(ctx.neg(ctx.add(u1, sd)), half);
                        let (ra, rb) = match (ctx.sqrt(f.eval(ctx, a)), ctx.sqrt(f.eval(ctx, b))) {
                            (Some(ra), Some(rb)) => (ra, rb),
                            _ => return,
                        };
                        let ys_a = if ra.0 == ra.1 { vec![ra.0] } else { vec![ra.0, ra.1] };
                        let ys_b = if rb.0 == rb.1 { vec![rb.0] } else { vec![rb.0, rb.1] };
                        let inv_ab = ctx.inv(ctx.sub(b, a)).expect("distinct roots");
                        for &ya in &ys_a {
                            for &yb in &ys_b {
                                let slope = ctx.mul(ctx.sub(yb, ya), inv_ab);
                                let v0 = ctx.sub(ya, ctx.mul(slope, a));
                                let v = FpPoly::from_residues(vec![v0, slope]);
                                debug_assert!(self.mumford_holds(u, &v));
                                out.push(MumfordDivisor { u: u.clone(), v });
                            }
                        }
                    }
                    0 => {
                        // Double root a; a doubled Weierstrass point is the
                        // identity, so f(a) = 0 yields nothing here.
                        let a = ctx.mul(ctx.neg(u1), half);
                        let fa = f.eval(ctx, a);
                        if fa == 0 {
                            return;
                        }
                        if let Some((r, s)) = ctx.sqrt(fa) {
                            let dfa = f.derivative(ctx).eval(ctx, a);
                            for ya in [r, s] {
                                let slope =
                                    ctx.div(dfa, ctx.mul(2 % p, ya)).expect("ya nonzero");
                                let v0 = ctx.sub(ya, ctx.mul(slope, a));
                                let v = FpPoly::from_residues(vec![v0, slope]);
                                debug_assert!(self.mumford_holds(u, &v));
                                out.push(MumfordDivisor { u: u.clone(), v });
                            }
                        }
                    }
                    _ => {
                        // alpha = (-u1 + sqrt(disc))/2 with sqrt(disc) = e*t.
                        let e = ctx
                            .sqrt(ctx.div(disc, ext.ns()).expect("ns nonzero"))
                            .expect("disc/ns is a square")
                            .0;
                        let alpha = Fp2 {
                            lo: ctx.mul(ctx.neg(u1), half),
                            hi: ctx.mul(e, half),
                        };
                        let fa = f.eval_fp2(ext, alpha);
                        if fa.is_zero() {
                            // Conjugate pair of irrational Weierstrass points.
                            let v = FpPoly::zero();
                            debug_assert!(self.mumford_holds(u, &v));
                            out.push(MumfordDivisor { u: u.clone(), v });
                        } else if let Some((w, w2)) = ext.sqrt(fa) {
                            for wi in [w, w2] {
                                let v1 = ctx.div(wi.hi, alpha.hi).expect("alpha irrational");
                                let v0 = ctx.sub(wi.lo, ctx.mul(v1, alpha.lo));
                                let v = FpPoly::from_residues(vec![v0, v1]);
                                debug_assert!(self.mumford_holds(u, &v));
                                out.push(MumfordDivisor { u: u.clone(), v });
                            }
                        }
                    }
                }
            }
            _ => unreachable!("u has degree <= 2"),
        }
    }

    /// The complete list of Mumford classes, identity first.
    pub fn enumerate(&self) -> Result<Vec<MumfordDivisor>, CurveError> {
        self.enumerate_bounded(DEFAULT_ENUM_BOUND)
    }

    pub fn enumerate_bounded(&self, bound: u64) -> Result<Vec<MumfordDivisor>, CurveError> {
        let p = self.ctx.p();
        if p > bound {
            return Err(CurveError::BoundExceeded {
                requested: p,
                limit: bound,
            });
        }
        let ext = QuadExtCtx::new(self.ctx);
        let mut out = Vec::with_capacity(p.saturating_mul(p).min(1 << 24) as usize);
        out.push(MumfordDivisor::identity());
        for u0 in 0..p {
            let u = FpPoly::from_residues(vec![u0, 1]);
            self.classes_for_u(&ext, &u, &mut out);
        }
        for u1 in 0..p {
            for u0 in 0..p {
                let u = FpPoly::from_residues(vec![u0, u1, 1]);
                self.classes_for_u(&ext, &u, &mut out);
            }
        }
        Ok(out)
    }

    /// `#C(F_{p^k})` for k in {1, 2}, by the character sum
    /// `sum_x (1 + chi(f(x)))` plus the points at infinity (1 for a
    /// degree-5 model; 2 or 0 for degree 6 as the leading coefficient is a
    /// square or not).
    pub fn count_points(&self, k: u32) -> Result<u64, CurveError> {
        self.count_points_bounded(k, DEFAULT_SWEEP_BOUND)
    }

    pub fn count_points_bounded(&self, k: u32, bound: u64) -> Result<u64, CurveError> {
        assert!(k == 1 || k == 2, "only F_p and F_p^2 sweeps are supported");
        let p = self.ctx.p();
        let ctx = &self.ctx;
        let deg6 = self.f.degree() == Some(6);
        let lc = self.f.leading().expect("f nonzero");
        if k == 1 {
            if p > bound {
                return Err(CurveError::BoundExceeded {
                    requested: p,
                    limit: bound,
                });
            }
            let mut n: u64 = if deg6 {
                if ctx.legendre(lc) == 1 {
                    2
                } else {
                    0
                }
            } else {
                1
            };
            for x in 0..p {
                n += (1 + ctx.legendre(self.f.eval(ctx, x))) as u64;
            }
            Ok(n)
        } else {
            if p.checked_mul(p).is_none_or(|pk| pk > bound) {
                return Err(CurveError::BoundExceeded {
                    requested: p.saturating_mul(p),
                    limit: bound,
                });
            }
            let ext = QuadExtCtx::new(*ctx);
            // Every nonzero element of F_p is a square in F_{p^2}.
            let mut n: u64 = if deg6 { 2 } else { 1 };
            for lo in 0..p {
                for hi in 0..p {
                    let z = Fp2 { lo, hi };
                    n += (1 + ext.chi(self.f.eval_fp2(&ext, z))) as u64;
                }
            }
            Ok(n)
        }
    }

    /// Frobenius characteristic polynomial from the two point counts.
    pub fn char_poly(&self) -> Result<WeilPoly, CurveError> {
        let n1 = self.count_points(1)?;
        let n2 = self.count_points(2)?;
        char_poly_from_counts(n1, n2, self.ctx.p())
    }

    /// `|Jac(C)(F_p)| = P(1)`.
    pub fn jacobian_order(&self) -> Result<u64, CurveError> {
        Ok(self.char_poly()?.order())
    }

    /// A uniformly random element of the Jacobian: draw a uniformly random
    /// monic `u` of degree <= 2 and a slot j in {0..3}, accepting when `u`
    /// carries more than j classes. Each class has at most 4 siblings per
    /// `u`, so every class is drawn with the same probability; rejection
    /// runs at most 64 rounds before a degree-1 fallback scan. Replaying
    /// an rng state replays the divisor.
    pub fn random_divisor<R: Rng + ?Sized>(&self, rng: &mut R) -> MumfordDivisor {
        let p = self.ctx.p();
        let ext = QuadExtCtx::new(self.ctx);
        let total = (p as u128) * (p as u128) + (p as u128) + 1;
        let mut candidates = Vec::with_capacity(4);
        for _ in 0..64 {
            let r = rng.random_range(0..total);
            let u = if r == 0 {
                FpPoly::one()
            } else if r <= p as u128 {
                FpPoly::from_residues(vec![(r - 1) as u64, 1])
            } else {
                let idx = r - 1 - p as u128;
                FpPoly::from_residues(vec![(idx % p as u128) as u64, (idx / p as u128) as u64, 1])
            };
            let slot = rng.random_range(0..4usize);
            candidates.clear();
            self.classes_for_u(&ext, &u, &mut candidates);
            if slot < candidates.len() {
                return candidates.swap_remove(slot);
            }
        }
        // Fallback: scan for a degree-1 class from a random start.
        let start = rng.random_range(0..p);
        for off in 0..p {
            let x = (start + off) % p;
            if let Some((r, s)) = self.ctx.sqrt(self.model.eval(&self.ctx, x)) {
                let y = if rng.random_range(0..2u32) == 0 { r } else { s };
                return MumfordDivisor {
                    u: FpPoly::x_minus(&self.ctx, x),
                    v: FpPoly::constant(y),
                };
            }
        }
        MumfordDivisor::identity()
    }

    /// Exact order of `d`, given a multiple `n` of it (normally the group
    /// order), by peeling prime factors of `n`.
    pub fn element_order(&self, d: &MumfordDivisor, n: u64) -> Result<u64, CurveError> {
        self.validate_divisor(d)?;
        if !self.scalar_mul_unchecked(n, d).is_identity() {
            return Err(CurveError::NotAnnihilated);
        }
        let mut o = n;
        for (q, _) in crate::group::factorize(n) {
            while o.is_multiple_of(q) && self.scalar_mul_unchecked(o / q, d).is_identity() {
                o /= q;
            }
        }
        Ok(o)
    }
}

/// Coefficients of `f(x + x0)`, lowest degree first, by repeated synthetic
/// division by `(x - x0)`.
fn taylor_shift(ctx: &FieldCtx, f: &FpPoly, x0: u64) -> Vec<u64> {
    let mut work = f.coeffs().to_vec();
    let d = work.len() - 1;
    let mut out = vec![0u64; d + 1];
    for (k, slot) in out.iter_mut().enumerate() {
        let top = d - k;
        // Horner pass: h[i] = work[i] + x0 * h[i+1]; h[0] is the remainder
        // and h[1..] is the quotient.
        let mut h = vec![0u64; top + 1];
        h[top] = work[top];
        for i in (0..top).rev() {
            h[i] = ctx.add(work[i], ctx.mul(x0, h[i + 1]));
        }
        *slot = h[0];
        work[..top].copy_from_slice(&h[1..=top]);
    }
    out
}

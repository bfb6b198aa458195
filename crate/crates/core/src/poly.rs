//! Dense univariate polynomials, lowest degree first, in canonical form
//! (no trailing zero coefficient; the zero polynomial is the empty list).
//!
//! Two coefficient rings are supported: F_p residues (`FpPoly`, with the
//! `FieldCtx` passed into each operation) and signed 128-bit integers
//! (`IntPoly`, with checked arithmetic).

use crate::field::{FieldCtx, Fp2, QuadExtCtx};
use serde::Serialize;
use thiserror::Error;

/// Defensive degree cap: nothing in this crate needs more than sextic
/// inputs and their products under Cantor composition.
pub const MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("integer polynomial division requires a monic divisor")]
    NonMonicIntegerDivisor,
    #[error("integer polynomial coefficient overflowed 128 bits")]
    CoefficientOverflow,
}

/// Polynomial over F_p. Coefficients are canonical residues of the context
/// the polynomial was built with.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct FpPoly {
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn zero() -> Self {
        FpPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FpPoly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        FpPoly { coeffs: vec![0, 1] }
    }

    /// `x - a` as a monic linear polynomial.
    pub fn x_minus(ctx: &FieldCtx, a: u64) -> Self {
        FpPoly::from_residues(vec![ctx.neg(a), 1])
    }

    pub fn constant(c: u64) -> Self {
        FpPoly::from_residues(vec![c])
    }

    /// Builds from signed coefficients, reducing mod p.
    pub fn from_signed(ctx: &FieldCtx, coeffs: &[i64]) -> Self {
        FpPoly::from_residues(coeffs.iter().map(|&c| ctx.reduce_i64(c)).collect())
    }

    /// Builds from residues already in `[0, p)`, trimming trailing zeros.
    pub fn from_residues(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        assert!(
            coeffs.len() <= MAX_DEGREE + 1,
            "polynomial degree exceeds the cap of {MAX_DEGREE}"
        );
        FpPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (0 beyond the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    pub fn add(&self, ctx: &FieldCtx, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        FpPoly::from_residues((0..n).map(|i| ctx.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        FpPoly::from_residues((0..n).map(|i| ctx.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, ctx: &FieldCtx) -> FpPoly {
        FpPoly::from_residues(self.coeffs.iter().map(|&c| ctx.neg(c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        FpPoly::from_residues(out)
    }

    pub fn mul_scalar(&self, ctx: &FieldCtx, s: u64) -> FpPoly {
        FpPoly::from_residues(self.coeffs.iter().map(|&c| ctx.mul(c, s)).collect())
    }

    pub fn make_monic(&self, ctx: &FieldCtx) -> FpPoly {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(lc) => self.mul_scalar(ctx, ctx.inv(lc).expect("leading coefficient nonzero")),
        }
    }

    pub fn eval(&self, ctx: &FieldCtx, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, x), c);
        }
        acc
    }

    /// Horner evaluation at a quadratic-extension point.
    pub fn eval_fp2(&self, ext: &QuadExtCtx, z: Fp2) -> Fp2 {
        let mut acc = Fp2::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = ext.add(ext.mul(acc, z), ext.embed(c));
        }
        acc
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> FpPoly {
        FpPoly::from_residues(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ctx.mul(c, (i as u64) % ctx.p()))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * den + r` with `deg r < deg den`.
    pub fn divrem(&self, ctx: &FieldCtx, den: &FpPoly) -> Result<(FpPoly, FpPoly), PolyError> {
        let dd = den.degree().ok_or(PolyError::DivisionByZeroPoly)?;
        if self.degree() < den.degree() {
            return Ok((FpPoly::zero(), self.clone()));
        }
        let nd = self.degree().unwrap();
        let lead_inv = ctx.inv(den.leading().unwrap()).expect("leading nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; nd - dd + 1];
        for i in (dd..=nd).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = ctx.mul(c, lead_inv);
            quot[i - dd] = q;
            for (j, &dc) in den.coeffs.iter().enumerate() {
                rem[i - dd + j] = ctx.sub(rem[i - dd + j], ctx.mul(q, dc));
            }
        }
        Ok((FpPoly::from_residues(quot), FpPoly::from_residues(rem)))
    }

    pub fn rem(&self, ctx: &FieldCtx, den: &FpPoly) -> Result<FpPoly, PolyError> {
        Ok(self.divrem(ctx, den)?.1)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, ctx: &FieldCtx, other: &FpPoly) -> FpPoly {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        while !r1.is_zero() {
            let r = r0.rem(ctx, &r1).expect("r1 nonzero");
            r0 = r1;
            r1 = r;
        }
        r0.make_monic(ctx)
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g` and
    /// `g` monic (all zero when both inputs are zero).
    pub fn xgcd(&self, ctx: &FieldCtx, other: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FpPoly::one(), FpPoly::zero());
        let (mut t0, mut t1) = (FpPoly::zero(), FpPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(ctx, &r1).expect("r1 nonzero");
            let s = s0.sub(ctx, &q.mul(ctx, &s1));
            let t = t0.sub(ctx, &q.mul(ctx, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        match r0.leading() {
            None => (FpPoly::zero(), FpPoly::zero(), FpPoly::zero()),
            Some(lc) => {
                let inv = ctx.inv(lc).expect("leading nonzero");
                (
                    r0.mul_scalar(ctx, inv),
                    s0.mul_scalar(ctx, inv),
                    t0.mul_scalar(ctx, inv),
                )
            }
        }
    }

    /// True iff `gcd(f, f')` is constant, i.e. `f` has no repeated root.
    pub fn is_squarefree(&self, ctx: &FieldCtx) -> bool {
        self.gcd(ctx, &self.derivative(ctx)).degree() == Some(0)
    }
}

/// Polynomial with signed 128-bit integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<i128>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        assert!(
            coeffs.len() <= MAX_DEGREE + 1,
            "polynomial degree exceeds the cap of {MAX_DEGREE}"
        );
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i128 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<i128> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(
                self.coeff(i)
                    .checked_add(other.coeff(i))
                    .ok_or(PolyError::CoefficientOverflow)?,
            );
        }
        Ok(IntPoly::new(out))
    }

    pub fn sub(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(
                self.coeff(i)
                    .checked_sub(other.coeff(i))
                    .ok_or(PolyError::CoefficientOverflow)?,
            );
        }
        Ok(IntPoly::new(out))
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(IntPoly::zero());
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a.checked_mul(b).ok_or(PolyError::CoefficientOverflow)?;
                out[i + j] = out[i + j]
                    .checked_add(prod)
                    .ok_or(PolyError::CoefficientOverflow)?;
            }
        }
        Ok(IntPoly::new(out))
    }

    /// Exact Euclidean division by a monic divisor.
    pub fn divrem_monic(&self, den: &IntPoly) -> Result<(IntPoly, IntPoly), PolyError> {
        let dd = den.degree().ok_or(PolyError::DivisionByZeroPoly)?;
        if den.leading() != Some(1) {
            return Err(PolyError::NonMonicIntegerDivisor);
        }
        if self.degree() < den.degree() {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let nd = self.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i128; nd - dd + 1];
        for i in (dd..=nd).rev() {
            let q = rem[i];
            if q == 0 {
                continue;
            }
            quot[i - dd] = q;
            for (j, &dc) in den.coeffs.iter().enumerate() {
                let prod = q.checked_mul(dc).ok_or(PolyError::CoefficientOverflow)?;
                rem[i - dd + j] = rem[i - dd + j]
                    .checked_sub(prod)
                    .ok_or(PolyError::CoefficientOverflow)?;
            }
        }
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    pub fn eval(&self, x: i128) -> Result<i128, PolyError> {
        let mut acc = 0i128;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(c))
                .ok_or(PolyError::CoefficientOverflow)?;
        }
        Ok(acc)
    }

    pub fn reduce_mod(&self, ctx: &FieldCtx) -> FpPoly {
        FpPoly::from_residues(self.coeffs.iter().map(|&c| ctx.reduce_i128(c)).collect())
    }
}

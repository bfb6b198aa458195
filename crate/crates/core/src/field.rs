//! Exact arithmetic in F_p (p an odd prime) and in the quadratic
//! extension F_{p^2} = F_p[t]/(t^2 - ns) for the smallest non-residue ns.
//!
//! Moduli fit in 64 bits; products go through 128-bit intermediates, so
//! no reduction step can overflow. Contexts are immutable and all
//! operations are pure.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is composite")]
    CompositeModulus(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus {0} does not fit in 63 bits")]
    ModulusTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// `a * b mod m` via a 128-bit intermediate.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a^e mod m` by square-and-multiply.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin; the witness set is complete for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Arithmetic context for F_p. Invariant: `p` is an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if p >= 1 << 63 {
            // add() relies on a + b staying inside u64.
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::CompositeModulus(p));
        }
        Ok(FieldCtx { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Canonical residue of a signed 128-bit integer.
    #[inline]
    pub fn reduce_i128(&self, x: i128) -> u64 {
        let m = self.p as i128;
        (x.rem_euclid(m)) as u64
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        self.reduce_i128(x as i128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b; // a, b < p < 2^63, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Quadratic character: 0 for a = 0, +1 for nonzero squares, -1 otherwise.
    pub fn legendre(&self, a: u64) -> i32 {
        if a.is_multiple_of(self.p) {
            return 0;
        }
        let e = self.pow(a, (self.p - 1) / 2);
        if e == 1 {
            1
        } else {
            -1
        }
    }

    /// Smallest quadratic non-residue >= 2.
    pub fn nonresidue(&self) -> u64 {
        (2..self.p)
            .find(|&z| self.legendre(z) == -1)
            .expect("odd prime field has a non-residue")
    }

    /// Both square roots `(r, p - r)` with `r <= p - r`, or `(0, 0)` for
    /// `a = 0`; `None` when `a` is a non-residue. Tonelli-Shanks.
    pub fn sqrt(&self, a: u64) -> Option<(u64, u64)> {
        if a == 0 {
            return Some((0, 0));
        }
        if self.legendre(a) == -1 {
            return None;
        }
        let r = if self.p % 4 == 3 {
            self.pow(a, (self.p + 1) / 4)
        } else {
            self.tonelli_shanks(a)
        };
        debug_assert_eq!(self.mul(r, r), a);
        let s = self.p - r;
        Some((r.min(s), r.max(s)))
    }

    fn tonelli_shanks(&self, a: u64) -> u64 {
        let mut q = self.p - 1;
        let mut s = 0u32;
        while q & 1 == 0 {
            q >>= 1;
            s += 1;
        }
        let z = self.nonresidue();
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        r
    }
}

/// An element `lo + hi*t` of F_{p^2}, with `t^2 = ns`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    pub lo: u64,
    pub hi: u64,
}

impl Fp2 {
    pub const ZERO: Fp2 = Fp2 { lo: 0, hi: 0 };
    pub const ONE: Fp2 = Fp2 { lo: 1, hi: 0 };

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.lo == 0 && self.hi == 0
    }
}

/// Arithmetic context for F_{p^2}. Invariant: `legendre(ns) = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadExtCtx {
    base: FieldCtx,
    ns: u64,
}

impl QuadExtCtx {
    pub fn new(base: FieldCtx) -> Self {
        let ns = base.nonresidue();
        QuadExtCtx { base, ns }
    }

    #[inline]
    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    #[inline]
    pub fn ns(&self) -> u64 {
        self.ns
    }

    #[inline]
    pub fn embed(&self, c: u64) -> Fp2 {
        Fp2 { lo: c, hi: 0 }
    }

    /// The generator `t` with `t^2 = ns`.
    #[inline]
    pub fn gen(&self) -> Fp2 {
        Fp2 { lo: 0, hi: 1 }
    }

    #[inline]
    pub fn add(&self, a: Fp2, b: Fp2) -> Fp2 {
        Fp2 {
            lo: self.base.add(a.lo, b.lo),
            hi: self.base.add(a.hi, b.hi),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fp2, b: Fp2) -> Fp2 {
        Fp2 {
            lo: self.base.sub(a.lo, b.lo),
            hi: self.base.sub(a.hi, b.hi),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fp2) -> Fp2 {
        Fp2 {
            lo: self.base.neg(a.lo),
            hi: self.base.neg(a.hi),
        }
    }

    #[inline]
    pub fn mul(&self, a: Fp2, b: Fp2) -> Fp2 {
        let f = &self.base;
        Fp2 {
            lo: f.add(f.mul(a.lo, b.lo), f.mul(self.ns, f.mul(a.hi, b.hi))),
            hi: f.add(f.mul(a.lo, b.hi), f.mul(a.hi, b.lo)),
        }
    }

    /// Conjugate `lo - hi*t`; this is the p-power Frobenius of F_{p^2}.
    #[inline]
    pub fn conj(&self, a: Fp2) -> Fp2 {
        Fp2 {
            lo: a.lo,
            hi: self.base.neg(a.hi),
        }
    }

    /// Norm to F_p: `z * conj(z) = lo^2 - ns*hi^2`.
    #[inline]
    pub fn norm(&self, a: Fp2) -> u64 {
        let f = &self.base;
        f.sub(f.mul(a.lo, a.lo), f.mul(self.ns, f.mul(a.hi, a.hi)))
    }

    pub fn inv(&self, a: Fp2) -> Result<Fp2, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n_inv = self.base.inv(self.norm(a))?;
        let c = self.conj(a);
        Ok(Fp2 {
            lo: self.base.mul(c.lo, n_inv),
            hi: self.base.mul(c.hi, n_inv),
        })
    }

    pub fn div(&self, a: Fp2, b: Fp2) -> Result<Fp2, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, mut a: Fp2, mut e: u64) -> Fp2 {
        let mut acc = Fp2::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Quadratic character of F_{p^2}: `chi(z) = legendre_p(norm(z))`,
    /// since `z^((p^2-1)/2) = norm(z)^((p-1)/2)`.
    pub fn chi(&self, a: Fp2) -> i32 {
        if a.is_zero() {
            return 0;
        }
        self.base.legendre(self.norm(a))
    }

    /// Both square roots `(w, -w)` of `z`, or `None` for a non-square.
    ///
    /// For `z = c + d*t` with `d != 0`, take `s = sqrt(c^2 - ns*d^2)`;
    /// exactly one of `(c +- s)/2` is a nonzero square (their product is
    /// `ns*d^2/4`, a non-square), and `w = x + (d/2x)*t` from that root.
    pub fn sqrt(&self, z: Fp2) -> Option<(Fp2, Fp2)> {
        let f = &self.base;
        if z.is_zero() {
            return Some((Fp2::ZERO, Fp2::ZERO));
        }
        if z.hi == 0 {
            let w = match f.sqrt(z.lo) {
                Some((r, _)) => Fp2 { lo: r, hi: 0 },
                None => {
                    // c non-square in F_p: c/ns is a square and (e*t)^2 = c.
                    let quot = f.div(z.lo, self.ns).expect("ns != 0");
                    let (e, _) = f.sqrt(quot).expect("c/ns is a square");
                    Fp2 { lo: 0, hi: e }
                }
            };
            debug_assert_eq!(self.mul(w, w), z);
            return Some((w, self.neg(w)));
        }
        let n = self.norm(z);
        if f.legendre(n) == -1 {
            return None;
        }
        let (s, _) = f.sqrt(n).expect("norm is a square");
        let half = f.inv(2).expect("p odd");
        let mut x2 = f.mul(f.add(z.lo, s), half);
        if f.legendre(x2) != 1 {
            x2 = f.mul(f.sub(z.lo, s), half);
        }
        let (x, _) = f.sqrt(x2).expect("one candidate is a square");
        let y = f.div(z.hi, f.mul(2 % f.p(), x)).expect("x != 0");
        let w = Fp2 { lo: x, hi: y };
        debug_assert_eq!(self.mul(w, w), z);
        Some((w, self.neg(w)))
    }
}

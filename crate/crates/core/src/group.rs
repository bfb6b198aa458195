//! Abelian group structure of Jac(C)(F_p): integer factorization,
//! invariant factors from exhaustive torsion counts, ell-Sylow rank and
//! cyclicity, embedding degrees, and the probabilistic Sylow generator
//! search.

use crate::cm::{CMField, FrobeniusElement};
use crate::field::{is_prime_u64, mul_mod, pow_mod, FieldCtx};
use crate::jacobian::{Curve, CurveError, MumfordDivisor, DEFAULT_ENUM_BOUND};
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("ell = {0} equals (or divides) the field characteristic")]
    EllEqualsP(u64),
    #[error("ell = {0} is not prime")]
    EllNotPrime(u64),
    #[error("ell = {ell} does not divide the group order {order}")]
    EllDoesNotDivideOrder { ell: u64, order: u64 },
    #[error("torsion counts are inconsistent with an abelian group of rank <= 4")]
    InconsistentTorsion,
}

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Brent-cycle Pollard rho with a fixed increment `c`; returns a proper
/// factor unless the cycle degenerates for this `c`.
fn brent_cycle(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = 0u64;
    let mut ys = 0u64;
    let m = 128u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime_u64(n) && n % 2 == 1);
    for c in 1..512 {
        if let Some(d) = brent_cycle(n, c) {
            return d;
        }
    }
    unreachable!("Pollard rho exhausted its deterministic increment sequence")
}

/// Complete prime factorization of `n`, sorted by prime: trial division up
/// to 10^6, then Pollard rho with Brent cycling. Deterministic.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out: BTreeMap<u64, u32> = BTreeMap::new();
    let mut n = n;
    if n < 2 {
        return Vec::new();
    }
    while n.is_multiple_of(2) {
        *out.entry(2).or_insert(0) += 1;
        n /= 2;
    }
    let mut d = 3u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= n {
        while n.is_multiple_of(d) {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 2;
    }
    let mut stack = Vec::new();
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime_u64(m) {
            *out.entry(m).or_insert(0) += 1;
        } else {
            let f = pollard_brent(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    out.into_iter().collect()
}

/// Exponent of `ell` in `n`.
pub fn valuation(mut n: u64, ell: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(ell) {
        n /= ell;
        v += 1;
    }
    v
}

/// Invariant factors `n1 | n2 | n3 | n4` of Jac(C)(F_p), ascending and
/// padded with leading 1s to exactly four entries; the product is the
/// group order. Rank four is forced by the `Z/ell^n`-module structure of
/// the torsion, and `n2` divides `p - 1` (Weil-pairing constraint on a
/// rank-3 subgroup).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    factors: [u64; 4],
}

impl GroupStructure {
    pub fn factors(&self) -> [u64; 4] {
        self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Second entry of the padded ascending chain: the largest m with
    /// `(Z/m)^3` contained in the group.
    pub fn n2(&self) -> u64 {
        self.factors[1]
    }

    pub fn nontrivial(&self) -> Vec<u64> {
        self.factors.iter().copied().filter(|&f| f > 1).collect()
    }

    pub fn chain_holds(&self) -> bool {
        self.factors.windows(2).all(|w| w[1] % w[0] == 0)
    }
}

fn exact_log(ell: u64, mut v: u64) -> Option<u32> {
    let mut k = 0;
    while v > 1 {
        if !v.is_multiple_of(ell) {
            return None;
        }
        v /= ell;
        k += 1;
    }
    Some(k)
}

/// Recovers the descending exponent partition `lambda` of the ell-part
/// from torsion counts `counts[j-1] = #J[ell^j] = ell^(sum_i min(lambda_i, j))`:
/// the first differences of the exponents are `m_j = #{i : lambda_i >= j}`
/// and `lambda` is their conjugate.
pub(crate) fn partition_from_counts(ell: u64, counts: &[u64]) -> Option<Vec<u32>> {
    let mut vals = Vec::with_capacity(counts.len() + 1);
    vals.push(0u32);
    for &c in counts {
        vals.push(exact_log(ell, c)?);
    }
    let m: Vec<u32> = vals
        .windows(2)
        .map(|w| w[1].checked_sub(w[0]))
        .collect::<Option<_>>()?;
    if m.windows(2).any(|w| w[1] > w[0]) {
        return None;
    }
    let rank = m.first().copied().unwrap_or(0);
    if rank > 4 {
        return None;
    }
    Some((1..=rank).map(|i| m.iter().filter(|&&mj| mj >= i).count() as u32).collect())
}

/// `#J[ell^j]` for `j = 1..=e` where `ell^e` exactly divides the order:
/// project each element onto the ell-Sylow part by the cofactor multiple
/// and record how many ell-multiplications kill it; group-level counts are
/// the accumulated tallies divided by the cofactor.
fn ell_torsion_counts(
    curve: &Curve,
    els: &[MumfordDivisor],
    ell: u64,
    e: u32,
) -> Result<Vec<u64>, GroupError> {
    let n = els.len() as u64;
    let cof = n / ell.pow(e);
    let mut by_valuation = vec![0u64; e as usize + 1];
    for g in els {
        let mut s = curve.scalar_mul(cof, g)?;
        let mut j = 0u32;
        while !s.is_identity() {
            s = curve.scalar_mul(ell, &s)?;
            j += 1;
            if j > e {
                return Err(GroupError::InconsistentTorsion);
            }
        }
        by_valuation[j as usize] += 1;
    }
    let mut counts = Vec::with_capacity(e as usize);
    let mut acc = by_valuation[0];
    for &tally in &by_valuation[1..] {
        acc += tally;
        if !acc.is_multiple_of(cof) {
            return Err(GroupError::InconsistentTorsion);
        }
        counts.push(acc / cof);
    }
    if counts.last() != Some(&ell.pow(e)) {
        return Err(GroupError::InconsistentTorsion);
    }
    Ok(counts)
}

/// Exact invariant factors from a full enumeration: per-prime torsion
/// counts determine the ell-part partitions, combined across primes into
/// at most four factors.
pub fn structure_from_enumeration(
    curve: &Curve,
    els: &[MumfordDivisor],
) -> Result<GroupStructure, GroupError> {
    let n = els.len() as u64;
    let mut desc = [1u64; 4];
    for (ell, e) in factorize(n) {
        let counts = ell_torsion_counts(curve, els, ell, e)?;
        let lam = partition_from_counts(ell, &counts).ok_or(GroupError::InconsistentTorsion)?;
        for (k, &ek) in lam.iter().enumerate() {
            desc[k] *= ell.pow(ek);
        }
    }
    let gs = GroupStructure {
        factors: [desc[3], desc[2], desc[1], desc[0]],
    };
    debug_assert_eq!(gs.order(), n);
    debug_assert!(gs.chain_holds());
    Ok(gs)
}

pub fn group_structure(curve: &Curve) -> Result<GroupStructure, GroupError> {
    let els = curve.enumerate()?;
    structure_from_enumeration(curve, &els)
}

/// Rank and cyclicity of the ell-Sylow subgroup. `rank` is r with
/// `#J[ell](F_p) = ell^r`; `cyclic` iff `r <= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SylowReport {
    pub ell: u64,
    pub valuation: u32,
    pub rank: u32,
    pub cyclic: bool,
    pub generator: Option<MumfordDivisor>,
}

pub fn sylow_rank(curve: &Curve, ell: u64) -> Result<SylowReport, GroupError> {
    let els = curve.enumerate()?;
    sylow_rank_from_elements(curve, &els, ell)
}

pub fn sylow_rank_from_elements(
    curve: &Curve,
    els: &[MumfordDivisor],
    ell: u64,
) -> Result<SylowReport, GroupError> {
    if !is_prime_u64(ell) {
        return Err(GroupError::EllNotPrime(ell));
    }
    let n = els.len() as u64;
    let e = valuation(n, ell);
    if e == 0 {
        return Ok(SylowReport {
            ell,
            valuation: 0,
            rank: 0,
            cyclic: true,
            generator: None,
        });
    }
    let counts = ell_torsion_counts(curve, els, ell, e)?;
    let rank = exact_log(ell, counts[0]).ok_or(GroupError::InconsistentTorsion)?;
    if rank > 4 {
        return Err(GroupError::InconsistentTorsion);
    }
    Ok(SylowReport {
        ell,
        valuation: e,
        rank,
        cyclic: rank == 1,
        generator: None,
    })
}

/// Embedding degree: the least k with `p^k = 1 mod ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmbeddingDegreeReport {
    pub ell: u64,
    pub k: u64,
}

/// Multiplicative order of p mod ell by factoring `ell - 1` and descending
/// through divisors.
pub fn embedding_degree(p: u64, ell: u64) -> Result<EmbeddingDegreeReport, GroupError> {
    if !is_prime_u64(ell) {
        return Err(GroupError::EllNotPrime(ell));
    }
    if p.is_multiple_of(ell) {
        return Err(GroupError::EllEqualsP(ell));
    }
    let pr = p % ell;
    let mut k = ell - 1;
    for (q, _) in factorize(ell - 1) {
        while k.is_multiple_of(q) && pow_mod(pr, k / q, ell) == 1 {
            k /= q;
        }
    }
    debug_assert_eq!(pow_mod(pr, k, ell), 1);
    Ok(EmbeddingDegreeReport { ell, k })
}

/// Outcome of the random Sylow generator search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SylowSearch {
    /// `generator` has certified order `ell^valuation`; found on trial
    /// number `trials` (1-based).
    Found {
        generator: MumfordDivisor,
        order: u64,
        trials: u64,
    },
    /// Enumeration shows rank >= 2: no single generator exists.
    NotCyclic,
    /// No element of full order within `max_trials` draws. On a cyclic
    /// Sylow subgroup each trial succeeds with probability `1 - 1/ell`,
    /// so this distinguishes "unlucky" from non-cyclic only weakly when
    /// enumeration is unavailable.
    Exhausted { trials: u64 },
}

/// Draws random Jacobian elements, projects them into the ell-Sylow
/// subgroup by the cofactor multiple, and returns the first element of
/// full order `ell^v` with its trial count.
pub fn sylow_generator_search<R: Rng + ?Sized>(
    curve: &Curve,
    ell: u64,
    max_trials: u64,
    rng: &mut R,
) -> Result<SylowSearch, GroupError> {
    if !is_prime_u64(ell) {
        return Err(GroupError::EllNotPrime(ell));
    }
    let n = curve.jacobian_order()?;
    let e = valuation(n, ell);
    if e == 0 {
        return Err(GroupError::EllDoesNotDivideOrder { ell, order: n });
    }
    if curve.p() <= DEFAULT_ENUM_BOUND {
        let els = curve.enumerate()?;
        if sylow_rank_from_elements(curve, &els, ell)?.rank >= 2 {
            return Ok(SylowSearch::NotCyclic);
        }
    }
    let target = ell.pow(e);
    let cof = n / target;
    for trials in 1..=max_trials {
        let d = curve.random_divisor(rng);
        let s = curve.scalar_mul(cof, &d)?;
        if s.is_identity() {
            continue;
        }
        // Order certificate: ell^e kills s, ell^(e-1) does not.
        if !curve.scalar_mul(target / ell, &s)?.is_identity() {
            if !curve.scalar_mul(target, &s)?.is_identity() {
                return Err(GroupError::InconsistentTorsion);
            }
            return Ok(SylowSearch::Found {
                generator: s,
                order: target,
                trials,
            });
        }
    }
    Ok(SylowSearch::Exhausted { trials: max_trials })
}

/// Conditional check linking a computed structure to CM data for the same
/// Jacobian: every odd prime `ell | n2` must satisfy `ell <= Q`, and when
/// `ell > D` also `c1 = 1` and `c2 = 0 mod ell`. Only synthetic pipelines
/// can supply both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct N2BoundFinding {
    pub ell: u64,
    pub within_q: bool,
    pub c1_congruent_one: Option<bool>,
    pub c2_congruent_zero: Option<bool>,
}

impl N2BoundFinding {
    pub fn holds(&self) -> bool {
        self.within_q
            && self.c1_congruent_one.unwrap_or(true)
            && self.c2_congruent_zero.unwrap_or(true)
    }
}

pub fn check_n2_bound(
    structure: &GroupStructure,
    field: &CMField,
    w: &FrobeniusElement,
) -> Vec<N2BoundFinding> {
    let q = field.q_bound() as i128;
    let mut out = Vec::new();
    for (ell, _) in factorize(structure.n2()) {
        if ell == 2 {
            continue;
        }
        let (c1c, c2c) = if ell > field.d() {
            let ctx = FieldCtx::new(ell).expect("ell is an odd prime");
            (
                Some(ctx.reduce_i64(w.c1) == 1),
                Some(ctx.reduce_i64(w.c2) == 0),
            )
        } else {
            (None, None)
        };
        out.push(N2BoundFinding {
            ell,
            within_q: (ell as i128) <= q,
            c1_congruent_one: c1c,
            c2_congruent_zero: c2c,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(28), vec![(2, 2), (7, 1)]);
        assert_eq!(factorize(176), vec![(2, 4), (11, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(0), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(1024), vec![(2, 10)]);
    }

    #[test]
    fn factorize_semiprime_of_28_bit_primes() {
        let (p, q) = (268_435_399u64, 268_435_367u64); // both prime, ~2^28
        assert!(is_prime_u64(p) && is_prime_u64(q));
        assert_eq!(factorize(p * q), vec![(q, 1), (p, 1)]);
        // A square of a large prime exercises the rho recursion too.
        assert_eq!(factorize(p * p), vec![(p, 2)]);
    }

    #[test]
    fn factorize_roundtrip_random() {
        let mut state = 0x12345u64;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let n = (state >> 16) % 10_000_000 + 2;
            let fac = factorize(n);
            let prod: u64 = fac.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            for &(p, _) in &fac {
                assert!(is_prime_u64(p));
            }
        }
    }

    #[test]
    fn partition_reconstruction() {
        // Z/3 x Z/9: #J[3] = 9, #J[9] = 27, #J[27] = 27.
        assert_eq!(partition_from_counts(3, &[9, 27, 27]), Some(vec![2, 1]));
        // Cyclic Z/25: #J[5] = 5, #J[25] = 25.
        assert_eq!(partition_from_counts(5, &[5, 25]), Some(vec![2]));
        // (Z/2)^4: #J[2] = 16.
        assert_eq!(partition_from_counts(2, &[16]), Some(vec![1, 1, 1, 1]));
        // Rank 5 is not a Jacobian torsion shape.
        assert_eq!(partition_from_counts(2, &[32]), None);
        // Not a power of ell.
        assert_eq!(partition_from_counts(3, &[6]), None);
    }

    #[test]
    fn structure_of_small_curves() {
        let c = Curve::new(7, &[1, 0, 0, 0, 0, 1]).unwrap();
        let s = group_structure(&c).unwrap();
        assert_eq!(s.order(), 50);
        assert!(s.chain_holds());
        assert_eq!(s.order() as usize, c.enumerate().unwrap().len());
        // Deterministic and idempotent.
        assert_eq!(group_structure(&c).unwrap(), s);
        // n2 | p - 1.
        assert_eq!((c.p() - 1) % s.n2(), 0);
    }

    #[test]
    fn structure_matches_order_statistics() {
        // Independent oracle: the multiset of element orders of the group
        // determined by the invariant factors must match the enumeration.
        for (p, f) in [(7u64, vec![1i64, 0, 0, 0, 0, 1]), (5, vec![0, 1, 0, 0, 0, 1])] {
            let c = Curve::new(p, &f).unwrap();
            let els = c.enumerate().unwrap();
            let n = els.len() as u64;
            let s = structure_from_enumeration(&c, &els).unwrap();
            let mut expected: BTreeMap<u64, u64> = BTreeMap::new();
            // Count elements of each order in prod Z/n_i via lcm structure.
            let factors = s.factors();
            fn count_orders(factors: &[u64], acc_order: u64, idx: usize, out: &mut BTreeMap<u64, u64>, count: u64) {
                if idx == factors.len() {
                    *out.entry(acc_order).or_insert(0) += count;
                    return;
                }
                // Elements of Z/n of order d, for each d | n: phi-like count.
                let n = factors[idx];
                let mut d = 1;
                while d * d <= n {
                    if n.is_multiple_of(d) {
                        for dd in [d, n / d] {
                            let cnt = euler_phi(dd);
                            let l = lcm(acc_order, dd);
                            count_orders(factors, l, idx + 1, out, count * cnt);
                            if d * d == n {
                                break;
                            }
                        }
                    }
                    d += 1;
                }
            }
            fn euler_phi(n: u64) -> u64 {
                let mut r = n;
                for (p, _) in factorize(n) {
                    r = r / p * (p - 1);
                }
                r
            }
            fn lcm(a: u64, b: u64) -> u64 {
                a / gcd_u64(a, b) * b
            }
            count_orders(&factors, 1, 0, &mut expected, 1);

            let mut observed: BTreeMap<u64, u64> = BTreeMap::new();
            for d in &els {
                *observed.entry(c.element_order(d, n).unwrap()).or_insert(0) += 1;
            }
            assert_eq!(observed, expected);
        }
    }

    #[test]
    fn sylow_rank_reports() {
        let c = Curve::new(7, &[1, 0, 0, 0, 0, 1]).unwrap(); // order 50 = 2 * 5^2
        let r3 = sylow_rank(&c, 3).unwrap();
        assert_eq!((r3.valuation, r3.rank, r3.cyclic), (0, 0, true));
        let r5 = sylow_rank(&c, 5).unwrap();
        assert_eq!(r5.valuation, 2);
        assert!(r5.rank >= 1 && r5.rank <= 4);
        assert_eq!(sylow_rank(&c, 4), Err(GroupError::EllNotPrime(4)));
    }

    #[test]
    fn embedding_degree_examples_and_minimality() {
        assert_eq!(embedding_degree(7, 3).unwrap().k, 1);
        assert_eq!(embedding_degree(7, 5).unwrap().k, 4);
        assert_eq!(embedding_degree(11, 3).unwrap().k, 2);
        assert_eq!(embedding_degree(7, 2).unwrap().k, 1);
        assert_eq!(embedding_degree(7, 7), Err(GroupError::EllEqualsP(7)));

        // Naive repeated-multiplication oracle.
        for ell in [3u64, 5, 11, 101, 997] {
            for p in [2u64, 3, 7, 13, 8191] {
                if p % ell == 0 {
                    continue;
                }
                let k = embedding_degree(p, ell).unwrap().k;
                let mut acc = 1u64;
                let mut naive = 0u64;
                for i in 1..ell {
                    acc = mul_mod(acc, p % ell, ell);
                    if acc == 1 {
                        naive = i;
                        break;
                    }
                }
                assert_eq!(k, naive, "p={p} ell={ell}");
                assert_eq!((ell - 1) % k, 0);
            }
        }
    }

    #[test]
    fn generator_search_on_cyclic_sylow() {
        let c = Curve::new(7, &[1, 0, 0, 0, 0, 1]).unwrap(); // 50 = 2 * 5^2
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        match sylow_generator_search(&c, 5, 500, &mut rng).unwrap() {
            SylowSearch::Found { generator, order, trials } => {
                assert_eq!(order, 25);
                assert!(trials >= 1);
                assert!(c.scalar_mul(25, &generator).unwrap().is_identity());
                assert!(!c.scalar_mul(5, &generator).unwrap().is_identity());
            }
            other => panic!("expected a generator, got {other:?}"),
        }
        assert!(matches!(
            sylow_generator_search(&c, 3, 10, &mut rng),
            Err(GroupError::EllDoesNotDivideOrder { ell: 3, order: 50 })
        ));
    }

    #[test]
    fn generator_search_detects_noncyclic() {
        // x(x-1)(x-2)(x-3)(x-4) over F_7 has full rational 2-torsion.
        let c = Curve::new(7, &[0, 24, -50, 35, -10, 1]).unwrap();
        let r2 = sylow_rank(&c, 2).unwrap();
        assert!(r2.rank >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(
            sylow_generator_search(&c, 2, 100, &mut rng).unwrap(),
            SylowSearch::NotCyclic
        );
    }

    #[test]
    fn n2_bound_synthetic() {
        let field = CMField::new(5, 2, 1).unwrap();
        let w = FrobeniusElement::new(-2, 2, 0, 1);
        // Trivial n2: nothing to check.
        let s = GroupStructure { factors: [1, 1, 4, 44] };
        assert!(check_n2_bound(&s, &field, &w).is_empty() || check_n2_bound(&s, &field, &w).iter().all(|f| f.holds()));
        // n2 = 3 <= Q = 20, and 3 <= D = 5 so no residue conditions fire.
        let s = GroupStructure { factors: [1, 3, 3, 12] };
        let findings = check_n2_bound(&s, &field, &w);
        assert_eq!(findings.len(), 1);
        assert!(findings[0].within_q);
        assert_eq!(findings[0].c1_congruent_one, None);
        // n2 = 23 > Q: flagged.
        let s = GroupStructure { factors: [1, 23, 23, 46] };
        let findings = check_n2_bound(&s, &field, &w);
        assert!(!findings[0].within_q);
        assert_eq!(findings[0].c1_congruent_one, Some(false));
    }
}

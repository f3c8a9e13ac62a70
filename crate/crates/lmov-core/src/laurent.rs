//! Sparse Laurent polynomials in q^{1/2} and a^{1/2} over exact rationals,
//! plus the quantum-algebra constructors used throughout: brackets,
//! quantum-integer ratios, Gaussian binomials, cyclotomic polynomials, and
//! the rewrite into the z^2 = (q^{1/2}-q^{-1/2})^2 basis.
//!
//! Exponents are stored doubled (i64) so half-integer powers stay exact.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{divisors, mobius};

pub type Coef = BigRational;

pub fn rat(n: i64) -> Coef {
    BigRational::from_integer(BigInt::from(n))
}

/// Laurent polynomial: map (qexp_doubled, aexp_doubled) -> coefficient.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LPoly {
    terms: BTreeMap<(i64, i64), Coef>,
}

impl LPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, Coef::one())
    }

    pub fn constant(c: Coef) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn monomial(q2: i64, a2: i64, c: Coef) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((q2, a2), c);
        }
        LPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Coef)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, q2: i64, a2: i64) -> Coef {
        self.terms.get(&(q2, a2)).cloned().unwrap_or_else(Coef::zero)
    }

    fn insert_add(&mut self, key: (i64, i64), c: Coef) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LPoly {
        LPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Coef) -> LPoly {
        if c.is_zero() {
            return LPoly::zero();
        }
        LPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for ((q1, a1), c1) in &self.terms {
            for ((q2, a2), c2) in &other.terms {
                out.insert_add((q1 + q2, a1 + a2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, q2: i64, a2: i64, c: &Coef) -> LPoly {
        if c.is_zero() {
            return LPoly::zero();
        }
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|((q, a), v)| ((q + q2, a + a2), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LPoly {
        let mut out = LPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes q -> q^{qd}, a -> a^{ad}. Both must be nonzero; negative
    /// values mirror the variable.
    pub fn substitute_power(&self, qd: i64, ad: i64) -> LPoly {
        assert!(qd != 0 && ad != 0, "substitute_power: zero power");
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|((q, a), c)| ((q * qd, a * ad), c.clone()))
                .collect(),
        }
    }

    /// Evaluates at given values of q^{1/2} and a^{1/2} (both nonzero).
    pub fn eval_sqrt(&self, qh: &Coef, ah: &Coef) -> Coef {
        assert!(!qh.is_zero() && !ah.is_zero());
        let mut acc = Coef::zero();
        for ((q2, a2), c) in &self.terms {
            acc += c * pow_rat(qh, *q2) * pow_rat(ah, *a2);
        }
        acc
    }

    fn is_q_only(&self) -> bool {
        self.terms.keys().all(|&(_, a2)| a2 == 0)
    }

    /// Exact division by a polynomial in q alone; None when not divisible.
    /// Each a-slice of self is divided densely as a one-variable polynomial
    /// in q^{1/2}.
    pub fn exact_div(&self, div: &LPoly) -> Option<LPoly> {
        assert!(!div.is_zero(), "exact_div: division by zero polynomial");
        assert!(div.is_q_only(), "exact_div: divisor must not involve a");
        if self.is_zero() {
            return Some(LPoly::zero());
        }
        let dlo = *div.terms.keys().map(|(q2, _)| q2).min().unwrap();
        let dhi = *div.terms.keys().map(|(q2, _)| q2).max().unwrap();
        let degd = (dhi - dlo) as usize;
        let mut dvec = vec![Coef::zero(); degd + 1];
        for ((q2, _), c) in &div.terms {
            dvec[(q2 - dlo) as usize] = c.clone();
        }
        let dlead = dvec[degd].clone();

        let mut out = LPoly::zero();
        for (a2, slice) in self.a_slices() {
            let lo = *slice.keys().min().unwrap();
            let hi = *slice.keys().max().unwrap();
            let dega = (hi - lo) as usize;
            if dega < degd {
                return None;
            }
            let mut avec = vec![Coef::zero(); dega + 1];
            for (q2, c) in &slice {
                avec[(q2 - lo) as usize] = c.clone();
            }
            for i in (degd..=dega).rev() {
                if avec[i].is_zero() {
                    continue;
                }
                let c = &avec[i] / &dlead;
                for (j, dj) in dvec.iter().enumerate() {
                    if !dj.is_zero() {
                        let delta = &c * dj;
                        avec[i - degd + j] -= delta;
                    }
                }
                out.insert_add(((i - degd) as i64 + lo - dlo, a2), c);
            }
            if avec.iter().any(|c| !c.is_zero()) {
                return None;
            }
        }
        Some(out)
    }

    fn a_slices(&self) -> BTreeMap<i64, BTreeMap<i64, Coef>> {
        let mut out: BTreeMap<i64, BTreeMap<i64, Coef>> = BTreeMap::new();
        for ((q2, a2), c) in &self.terms {
            out.entry(*a2).or_default().insert(*q2, c.clone());
        }
        out
    }

    /// Rewrites self as a polynomial in z^2 = q - 2 + q^{-1} and a^{1/2}.
    /// Requires integer q-powers and invariance under q <-> q^{-1}.
    pub fn to_z2_basis(&self) -> Result<BpsTable, Z2Error> {
        let mut table = BTreeMap::new();
        for (a2, slice) in self.a_slices() {
            let mut ladder: BTreeMap<i64, Coef> = BTreeMap::new();
            for (q2, c) in &slice {
                if q2 % 2 != 0 {
                    return Err(Z2Error::HalfIntegerQPower);
                }
                let k = q2 / 2;
                if slice.get(&-q2).cloned().unwrap_or_else(Coef::zero) != *c {
                    return Err(Z2Error::NotQInverseSymmetric);
                }
                if k >= 0 {
                    ladder.insert(k, c.clone());
                }
            }
            let kmax = ladder.keys().max().copied().unwrap_or(0) as usize;
            // p[k] is q^k + q^{-k} as a dense polynomial in y = z^2:
            // p[0] = 2, p[1] = y + 2, p[k] = (y+2) p[k-1] - p[k-2].
            let mut pks: Vec<Vec<Coef>> = vec![vec![rat(2)], vec![rat(2), rat(1)]];
            for k in 2..=kmax {
                let mut next = vec![Coef::zero(); k + 1];
                for (i, pc) in pks[k - 1].iter().enumerate() {
                    next[i + 1] += pc;
                    next[i] += pc * rat(2);
                }
                for (i, pp) in pks[k - 2].iter().enumerate() {
                    next[i] -= pp;
                }
                pks.push(next);
            }
            let mut acc = vec![Coef::zero(); kmax + 1];
            for (k, c) in &ladder {
                let k = *k as usize;
                if k == 0 {
                    acc[0] += c;
                } else {
                    for (g, pc) in pks[k].iter().enumerate() {
                        acc[g] += c * pc;
                    }
                }
            }
            for (g, c) in acc.into_iter().enumerate() {
                if !c.is_zero() {
                    table.insert((g as u32, a2), c);
                }
            }
        }
        Ok(BpsTable { terms: table })
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((q2, a2), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if *q2 != 0 {
                write!(f, "*q^({})", HalfExp(*q2))?;
            }
            if *a2 != 0 {
                write!(f, "*a^({})", HalfExp(*a2))?;
            }
        }
        Ok(())
    }
}

/// Formats a doubled exponent as an integer or an exact half.
struct HalfExp(i64);

impl fmt::Display for HalfExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn pow_rat(base: &Coef, e: i64) -> Coef {
    if e == 0 {
        return Coef::one();
    }
    let mut acc = Coef::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Quantum bracket {n} = q^{n/2} - q^{-n/2}. {0} = 0 and {-n} = -{n}.
pub fn bracket(n: i64) -> LPoly {
    LPoly::monomial(n, 0, Coef::one()).add(&LPoly::monomial(-n, 0, -Coef::one()))
}

/// The same bracket in the a variable: {n}_a = a^{n/2} - a^{-n/2}.
pub fn bracket_a(n: i64) -> LPoly {
    LPoly::monomial(0, n, Coef::one()).add(&LPoly::monomial(0, -n, -Coef::one()))
}

/// Product of a-brackets over the parts of a partition.
pub fn bracket_a_partition(parts: &[u32]) -> LPoly {
    let mut acc = LPoly::one();
    for &p in parts {
        acc = acc.mul(&bracket_a(p as i64));
    }
    acc
}

/// {kb}/{b} as a genuine Laurent polynomial, valid for every b:
/// sum_{j=0}^{k-1} q^{b(k-1-2j)/2}; equals k when b = 0.
pub fn quantum_ratio(k: u64, b: i64) -> LPoly {
    assert!(k >= 1);
    let mut out = LPoly::zero();
    for j in 0..k as i64 {
        out = out.add(&LPoly::monomial(b * (k as i64 - 1 - 2 * j), 0, Coef::one()));
    }
    out
}

/// Gaussian binomial coefficient in the variable q (integer powers).
pub fn qbinomial(n: u64, r: u64) -> LPoly {
    if r > n {
        return LPoly::zero();
    }
    let r = r.min(n - r);
    // Pascal: [n r] = [n-1 r-1] + q^r [n-1 r]
    let mut row: Vec<LPoly> = vec![LPoly::one()]; // row for n' = 0
    for np in 1..=n {
        let rmax = r.min(np);
        let mut next: Vec<LPoly> = Vec::with_capacity(rmax as usize + 1);
        next.push(LPoly::one());
        for rp in 1..=rmax {
            let left = if rp as usize - 1 < row.len() {
                row[rp as usize - 1].clone()
            } else {
                LPoly::zero()
            };
            let right = if (rp as usize) < row.len() {
                row[rp as usize].mul_monomial(2 * rp as i64, 0, &Coef::one())
            } else {
                LPoly::zero()
            };
            next.push(left.add(&right));
        }
        row = next;
    }
    row[r as usize].clone()
}

/// n-th cyclotomic polynomial in q, via prod_{d|n} (q^d - 1)^{mu(n/d)}.
pub fn cyclotomic(n: u64) -> LPoly {
    assert!(n >= 1);
    let mut num = LPoly::one();
    let mut den = LPoly::one();
    for d in divisors(n) {
        let f = LPoly::monomial(2 * d as i64, 0, Coef::one()).add(&LPoly::from_int(-1));
        match mobius(n / d) {
            1 => num = num.mul(&f),
            -1 => den = den.mul(&f),
            _ => {}
        }
    }
    num.exact_div(&den)
        .expect("cyclotomic: the divisor product always divides")
}

/// Failure modes of the z^2-basis rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Z2Error {
    HalfIntegerQPower,
    NotQInverseSymmetric,
}

impl fmt::Display for Z2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Z2Error::HalfIntegerQPower => write!(f, "half-integer power of q present"),
            Z2Error::NotQInverseSymmetric => write!(f, "not symmetric under q <-> 1/q"),
        }
    }
}

/// A polynomial in z^2 and a^{1/2}: map (g, aexp_doubled) -> coefficient,
/// representing sum c_{g,Q} z^{2g} a^Q. Coefficients stay rational so that
/// integrality is a checkable property, never an assumption.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BpsTable {
    terms: BTreeMap<(u32, i64), Coef>,
}

impl BpsTable {
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, i64), &Coef)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: u32, a2: i64) -> Coef {
        self.terms.get(&(g, a2)).cloned().unwrap_or_else(Coef::zero)
    }

    pub fn all_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// The genus-0 row as a map from doubled a-exponent to coefficient.
    pub fn genus0(&self) -> BTreeMap<i64, Coef> {
        self.terms
            .iter()
            .filter(|((g, _), _)| *g == 0)
            .map(|((_, a2), c)| (*a2, c.clone()))
            .collect()
    }

    /// Expands back into the (q, a) Laurent ring.
    pub fn expand(&self) -> LPoly {
        let zsq = bracket(1).pow(2); // q - 2 + 1/q
        let mut out = LPoly::zero();
        for ((g, a2), c) in &self.terms {
            let t = zsq.pow(*g).mul_monomial(0, *a2, c);
            out = out.add(&t);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> LPoly {
        LPoly::monomial(2 * n, 0, Coef::one())
    }

    #[test]
    fn bracket_basics() {
        assert!(bracket(0).is_zero());
        assert_eq!(bracket(-3), bracket(3).neg());
        assert_eq!(bracket(2), q(1).sub(&q(-1)));
        // {1}^2 = q - 2 + 1/q
        let z2 = bracket(1).pow(2);
        assert_eq!(
            z2,
            q(1).add(&q(-1)).add(&LPoly::from_int(-2))
        );
    }

    #[test]
    fn substitute_scales_brackets() {
        for n in 1..=6i64 {
            for d in 1..=5i64 {
                assert_eq!(bracket(n).substitute_power(d, 1), bracket(n * d));
            }
            assert_eq!(bracket(n).substitute_power(-1, 1), bracket(n).neg());
        }
    }

    #[test]
    fn quantum_ratio_examples() {
        assert_eq!(quantum_ratio(3, 0), LPoly::from_int(3));
        assert_eq!(
            quantum_ratio(2, 1),
            LPoly::monomial(1, 0, Coef::one()).add(&LPoly::monomial(-1, 0, Coef::one()))
        );
        for k in 1..=8u64 {
            for b in -6..=6i64 {
                assert_eq!(
                    quantum_ratio(k, b).mul(&bracket(b)),
                    bracket(k as i64 * b),
                    "k={k} b={b}"
                );
            }
        }
    }

    #[test]
    fn qbinomial_examples() {
        // [4 2] = 1 + q + 2q^2 + q^3 + q^4
        let mut expect = LPoly::zero();
        for (e, c) in [(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)] {
            expect = expect.add(&LPoly::monomial(2 * e, 0, rat(c)));
        }
        assert_eq!(qbinomial(4, 2), expect);
        assert_eq!(qbinomial(5, 0), LPoly::one());
        assert_eq!(qbinomial(3, 5), LPoly::zero());
        for n in 0..=10u64 {
            for r in 0..=n {
                assert_eq!(qbinomial(n, r), qbinomial(n, n - r), "n={n} r={r}");
                // q = 1 degenerates to the ordinary binomial
                let at1 = qbinomial(n, r).eval_sqrt(&rat(1), &rat(1));
                assert_eq!(
                    at1,
                    Coef::from_integer(crate::arith::binom(n as i64, r as i64))
                );
            }
        }
    }

    #[test]
    fn qbinomial_pascal() {
        for n in 1..=12u64 {
            for r in 1..=n {
                let lhs = qbinomial(n, r);
                let rhs = qbinomial(n - 1, r - 1)
                    .add(&qbinomial(n - 1, r).mul_monomial(2 * r as i64, 0, &Coef::one()));
                assert_eq!(lhs, rhs, "n={n} r={r}");
            }
        }
    }

    fn totient(n: u64) -> u64 {
        (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), q(1).add(&LPoly::from_int(-1)));
        // phi_6 = q^2 - q + 1
        assert_eq!(
            cyclotomic(6),
            q(2).sub(&q(1)).add(&LPoly::one())
        );
        for n in 1..=30u64 {
            let mut prod = LPoly::one();
            for d in divisors(n) {
                prod = prod.mul(&cyclotomic(d));
            }
            assert_eq!(prod, q(n as i64).add(&LPoly::from_int(-1)), "n={n}");
        }
        for n in 1..=50u64 {
            let deg = cyclotomic(n)
                .terms()
                .map(|((q2, _), _)| *q2)
                .max()
                .unwrap();
            assert_eq!(deg as u64, 2 * totient(n), "n={n}");
        }
    }

    #[test]
    fn exact_div_examples() {
        let f = bracket(3).mul(&bracket(2));
        assert_eq!(f.exact_div(&bracket(2)), Some(bracket(3)));
        assert_eq!(bracket(3).exact_div(&bracket(2)), None);
        assert_eq!(LPoly::zero().exact_div(&bracket(2)), Some(LPoly::zero()));
        // works slice-wise with a present
        let g = bracket(2).mul(&bracket_a(1)).add(&bracket(2).mul(&bracket_a(3)));
        let h = g.exact_div(&bracket(2)).unwrap();
        assert_eq!(h, bracket_a(1).add(&bracket_a(3)));
    }

    #[test]
    fn z2_basis_examples() {
        // q - 2 + 1/q = z^2
        let t = bracket(1).pow(2).to_z2_basis().unwrap();
        assert_eq!(t.terms.len(), 1);
        assert_eq!(t.coeff(1, 0), rat(1));

        // a^{1/2}(q + 1/q) -> z^2 a^{1/2} + 2 a^{1/2}
        let f = q(1).add(&q(-1)).mul_monomial(0, 1, &Coef::one());
        let t = f.to_z2_basis().unwrap();
        assert_eq!(t.coeff(1, 1), rat(1));
        assert_eq!(t.coeff(0, 1), rat(2));
        assert_eq!(t.terms.len(), 2);

        assert_eq!(
            LPoly::monomial(1, 0, Coef::one()).to_z2_basis(),
            Err(Z2Error::HalfIntegerQPower)
        );
        assert_eq!(
            q(1).to_z2_basis(),
            Err(Z2Error::NotQInverseSymmetric)
        );
    }

    #[test]
    fn z2_roundtrip_high_genus() {
        // z^8 a^{-3/2} + 5 z^2 - 7 a
        let mut table = BTreeMap::new();
        table.insert((4u32, -3i64), rat(1));
        table.insert((1, 0), rat(5));
        table.insert((0, 2), rat(-7));
        let t = BpsTable { terms: table };
        let back = t.expand().to_z2_basis().unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn eval_matches_terms() {
        // {2} at q^{1/2} = 2: 4 - 1/4
        let v = bracket(2).eval_sqrt(&rat(2), &rat(1));
        assert_eq!(v, Coef::new(BigInt::from(15), BigInt::from(4)));
    }

    fn arb_poly() -> impl Strategy<Value = LPoly> {
        proptest::collection::vec(((-6i64..=6), (-4i64..=4), -9i64..=9), 0..6).prop_map(|ts| {
            let mut p = LPoly::zero();
            for (q2, a2, c) in ts {
                p = p.add(&LPoly::monomial(q2, a2, rat(c)));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            prop_assert_eq!(f.add(&g), g.add(&f));
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
            prop_assert_eq!(f.sub(&f), LPoly::zero());
        }

        #[test]
        fn division_inverts_multiplication(f in arb_poly(), n in 1i64..6) {
            let g = bracket(n);
            let prod = f.mul(&g);
            prop_assert_eq!(prod.exact_div(&g), Some(f));
        }

        #[test]
        fn z2_expand_then_rewrite_is_identity(
            cells in proptest::collection::btree_map((0u32..4, -3i64..=3), -9i64..=9, 0..5)
        ) {
            let terms: BTreeMap<(u32, i64), Coef> = cells
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (k, rat(c)))
                .collect();
            let t = BpsTable { terms };
            prop_assert_eq!(t.expand().to_z2_basis().unwrap(), t);
        }
    }
}

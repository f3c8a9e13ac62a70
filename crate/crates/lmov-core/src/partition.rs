//! Integer partitions, their standard statistics, and symmetric-group
//! characters via the Murnaghan-Nakayama rule.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::factorial;

/// A partition: weakly decreasing positive parts. The empty partition is
/// the unique partition of 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from arbitrary parts: zeros are dropped and the
    /// rest sorted into weakly decreasing order.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct parts with their multiplicities, descending by part.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Order of the centralizer of the conjugacy class: prod_i i^{a_i} a_i!
    /// where a_i is the multiplicity of i.
    pub fn zee(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (part, count) in self.multiplicities() {
            acc *= BigInt::from(part).pow(count);
            acc *= factorial(count as u64);
        }
        acc
    }

    /// Size of the conjugacy class with this cycle type in S_n.
    pub fn class_size(&self) -> BigInt {
        factorial(self.weight() as u64) / self.zee()
    }

    /// kappa = sum_i lambda_i (lambda_i - 2i + 1), with i starting at 1.
    /// Always even; antisymmetric under conjugation.
    pub fn kappa(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let l = l as i64;
                l * (l - 2 * (i as i64 + 1) + 1)
            })
            .sum()
    }

    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Partition::empty();
        }
        let max = self.0[0] as usize;
        let mut cols = Vec::with_capacity(max);
        for j in 1..=max {
            cols.push(self.0.iter().filter(|&&p| p as usize >= j).count() as u32);
        }
        Partition(cols)
    }

    /// Divides every part by d; None unless d divides each part.
    pub fn divide(&self, d: u32) -> Option<Partition> {
        assert!(d >= 1);
        if self.0.iter().any(|&p| p % d != 0) {
            return None;
        }
        Some(Partition(self.0.iter().map(|&p| p / d).collect()))
    }

    /// Multiplies every part by d.
    pub fn multiply(&self, d: u32) -> Partition {
        assert!(d >= 1);
        Partition(self.0.iter().map(|&p| p * d).collect())
    }

    /// Multiset union of the parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts)
    }

    /// Greatest common divisor of the parts (0 for the empty partition).
    pub fn parts_gcd(&self) -> u32 {
        self.0.iter().fold(0u32, |g, &p| num_integer::gcd(g, p))
    }
}

/// All partitions of n in reverse lexicographic order: (n) first, (1^n) last.
pub fn enumerate(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    fn rec(remaining: u32, max_part: u32, stack: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(stack.clone()));
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            stack.push(p);
            rec(remaining - p, p, stack, out);
            stack.pop();
        }
    }
    rec(n, n.max(1), &mut stack, &mut out);
    out
}

/// Symmetric-group character table access with memoization. Instantiate one
/// per thread; there is no global state.
#[derive(Default)]
pub struct CharTable {
    memo: BTreeMap<(Vec<u32>, Vec<u32>), BigInt>,
}

impl CharTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Character value chi_lambda(mu). Both partitions must have the same
    /// weight.
    pub fn chi(&mut self, lambda: &Partition, mu: &Partition) -> BigInt {
        assert_eq!(
            lambda.weight(),
            mu.weight(),
            "chi: weights must agree ({:?} vs {:?})",
            lambda,
            mu
        );
        self.chi_rec(lambda.0.clone(), mu.0.clone())
    }

    // Murnaghan-Nakayama on beta-numbers: removing a border strip of size t
    // is subtracting t from one beta-number without colliding; the height of
    // the strip is the number of beta-numbers jumped over.
    fn chi_rec(&mut self, lambda: Vec<u32>, mu: Vec<u32>) -> BigInt {
        if lambda.is_empty() {
            return BigInt::one();
        }
        let key = (lambda.clone(), mu.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let t = mu[0] as i64;
        let rest = mu[1..].to_vec();
        let k = lambda.len();
        let beta: Vec<i64> = lambda
            .iter()
            .enumerate()
            .map(|(i, &l)| l as i64 + (k - 1 - i) as i64)
            .collect();
        let mut total = BigInt::zero();
        for &b in &beta {
            let nb = b - t;
            if nb < 0 || beta.contains(&nb) {
                continue;
            }
            let height = beta.iter().filter(|&&x| x > nb && x < b).count();
            let mut nbeta: Vec<i64> = beta.iter().copied().filter(|&x| x != b).collect();
            nbeta.push(nb);
            nbeta.sort_unstable_by(|x, y| y.cmp(x));
            let mut nl: Vec<u32> = nbeta
                .iter()
                .enumerate()
                .map(|(i, &x)| (x - (k - 1 - i) as i64) as u32)
                .collect();
            while nl.last() == Some(&0) {
                nl.pop();
            }
            let sub = self.chi_rec(nl, rest.clone());
            if height % 2 == 0 {
                total += sub;
            } else {
                total -= sub;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

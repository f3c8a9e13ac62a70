//! Named verification suites: every divisibility lemma, congruence,
//! series identity, integrality theorem, and cross-pipeline consistency
//! check, each over its full desk-scale range, with structured reports.
//!
//! Suites are deterministic: cases are enumerated in a fixed order and
//! checked independently (in parallel), and reports merge in case order.
//! A seed extends the cheap suites with reproducibly sampled cases beyond
//! the base ranges; the heavy polynomial suites (bps-int, closed-form,
//! bracket-div, pipeline, genus0-match) run their base ranges only.
//! Elapsed time is deliberately not part of the report so that identical
//! inputs serialize identically.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use lmov_core::arith::{binom, divisors, fp, is_prime, neg_one_pow, vp};
use lmov_core::invariant::{
    bps_table_m, bps_table_mu, cleared_g_m, cleared_z_m, g_m, g_mu, gks_extremal_int, n_ml,
    n_ml_int, n_pair, n_pair_int, phi_ratio, resolve_orientation, z_m_closed, ExtremalSide,
    Orientation,
};
use lmov_core::laurent::{bracket, cyclotomic, rat, Coef, LPoly};
use lmov_core::partition::{enumerate, CharTable, Partition};

/// One counterexample: the input tuple that reproduces it, the relation
/// that was expected, and what was actually observed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub observed: String,
}

impl core::fmt::Display for Failure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{}: expected {}, observed {}",
            self.input, self.expected, self.observed
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    /// Cases actually checked (hypothesis-violating inputs are not run).
    pub cases_run: u64,
    /// Inputs outside a lemma's stated regime, counted but never judged.
    pub skipped: u64,
    pub failures: Vec<Failure>,
    pub seed: Option<u64>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(Failure),
}

fn merge(suite: &str, seed: Option<u64>, outcomes: Vec<Outcome>) -> VerifyReport {
    let mut cases_run = 0;
    let mut skipped = 0;
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Pass => cases_run += 1,
            Outcome::Skip => skipped += 1,
            Outcome::Fail(f) => {
                cases_run += 1;
                failures.push(f);
            }
        }
    }
    VerifyReport {
        suite: suite.into(),
        cases_run,
        skipped,
        failures,
        seed,
    }
}

fn run_cases<T, F>(suite: &str, seed: Option<u64>, cases: Vec<T>, check: F) -> VerifyReport
where
    T: Sync,
    F: Fn(&T) -> Outcome + Send + Sync,
{
    let outcomes: Vec<Outcome> = cases.par_iter().map(check).collect();
    merge(suite, seed, outcomes)
}

fn fail(input: String, expected: &str, observed: String) -> Outcome {
    Outcome::Fail(Failure {
        input,
        expected: expected.into(),
        observed,
    })
}

/// Per-suite rng so adding a suite never shifts another suite's samples.
fn suite_rng(name: &str, seed: u64) -> StdRng {
    let h = name
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |acc, b| {
            (acc ^ b as u64).wrapping_mul(0x1000_0000_01b3)
        });
    StdRng::seed_from_u64(seed ^ h)
}

pub const SUITE_NAMES: &[&str] = &[
    "fp-power",
    "binom-prime",
    "valuation",
    "units-sign",
    "cm-series",
    "phi",
    "genus0-int",
    "pair-int",
    "bps-int",
    "closed-form",
    "bracket-div",
    "pipeline",
    "genus0-match",
    "extremal-int",
];

pub fn run_suite(name: &str, seed: Option<u64>) -> Option<VerifyReport> {
    Some(match name {
        "fp-power" => suite_fp_power(seed),
        "binom-prime" => suite_binom_prime(seed),
        "valuation" => suite_valuation(seed),
        "units-sign" => suite_units_sign(seed),
        "cm-series" => suite_cm_series(seed),
        "phi" => suite_phi(seed),
        "genus0-int" => suite_genus0_int(seed),
        "pair-int" => suite_pair_int(seed),
        "bps-int" => suite_bps_int(seed),
        "closed-form" => suite_closed_form(seed),
        "bracket-div" => suite_bracket_div(seed),
        "pipeline" => suite_pipeline(seed),
        "genus0-match" => suite_genus0_match(seed),
        "extremal-int" => suite_extremal_int(seed),
        _ => return None,
    })
}

pub fn run_all(seed: Option<u64>) -> Vec<VerifyReport> {
    SUITE_NAMES
        .iter()
        .map(|n| run_suite(n, seed).expect("registered suite"))
        .collect()
}

// The congruence p^{2a} | f_p(p^a n) - f_p(p^a)^n for p odd or a >= 2,
// and f_2(2n) = (-1)^{[n/2]} mod 4 for the excluded corner. Running
// products are built incrementally, so the whole n-range costs one pass.
fn suite_fp_power(seed: Option<u64>) -> VerifyReport {
    let mut n_max = 50u64;
    if let Some(s) = seed {
        n_max += suite_rng("fp-power", s).gen_range(5..=15);
    }
    let mut outcomes = Vec::new();
    for p in [2u64, 3, 5, 7] {
        for alpha in 1u32..=3 {
            let pa = p.pow(alpha);
            let fpa = fp(p, pa);
            let modulus = BigInt::from(p).pow(2 * alpha);
            let mut fpk = fpa.clone();
            let mut fpow = fpa.clone();
            for n in 1..=n_max {
                if n > 1 {
                    for i in pa * (n - 1) + 1..=pa * n {
                        if i % p != 0 {
                            fpk *= i;
                        }
                    }
                    fpow *= &fpa;
                }
                let input = format!("p={p} alpha={alpha} n={n}");
                if p == 2 && alpha == 1 {
                    let sign = BigInt::from(neg_one_pow((n / 2) as i64));
                    let r = (&fpk - sign).mod_floor(&BigInt::from(4));
                    outcomes.push(if r.is_zero() {
                        Outcome::Pass
                    } else {
                        fail(
                            input,
                            "f_2(2n) = (-1)^[n/2] mod 4",
                            format!("residue {}", fpk.mod_floor(&BigInt::from(4))),
                        )
                    });
                } else {
                    let diff = &fpk - &fpow;
                    let ok = match vp(p, &diff) {
                        None => true,
                        Some(v) => v >= 2 * alpha as u64,
                    };
                    outcomes.push(if ok {
                        Outcome::Pass
                    } else {
                        fail(
                            input,
                            "p^(2*alpha) | f_p(p^alpha*n) - f_p(p^alpha)^n",
                            format!("residue {}", diff.mod_floor(&modulus)),
                        )
                    });
                }
            }
        }
    }
    merge("fp-power", seed, outcomes)
}

struct BinomCase {
    m: u64,
    p: u64,
    alpha: u64,
    l: u64,
    tau: i64,
}

// One instance of the binomial-difference divisibility: the second term
// is present exactly when p | l (l = 0 included, since every d divides 0
// in the Mobius sum this feeds), and the p = 2 form carries the signs
// (-1)^{m*tau+m+l} and (-1)^{(m*tau+m+l)/2}.
fn check_binom_case(c: &BinomCase) -> Outcome {
    let (m, l, p) = (c.m as i64, c.l as i64, c.p as i64);
    let t1 = binom(m, l) * binom(m * c.tau + l - 1, m - 1);
    let second = c.l.is_multiple_of(c.p);
    let t2 = if second {
        binom(m / p, l / p) * binom((m * c.tau + l) / p - 1, m / p - 1)
    } else {
        BigInt::zero()
    };
    let diff = if c.p == 2 {
        let s1 = BigInt::from(neg_one_pow(m * c.tau + m + l));
        let s2 = if second {
            BigInt::from(neg_one_pow((m * c.tau + m + l) / 2))
        } else {
            BigInt::one()
        };
        s1 * t1 - s2 * t2
    } else {
        t1 - t2
    };
    let ok = match vp(c.p, &diff) {
        None => true,
        Some(v) => v >= 2 * c.alpha,
    };
    if ok {
        Outcome::Pass
    } else {
        fail(
            format!("m={} p={} l={} tau={}", c.m, c.p, c.l, c.tau),
            "p^(2*alpha) divides the binomial difference",
            format!("valuation {:?} < {}", vp(c.p, &diff), 2 * c.alpha),
        )
    }
}

fn prime_divisors(m: u64) -> Vec<u64> {
    divisors(m).into_iter().filter(|&d| is_prime(d)).collect()
}

fn suite_binom_prime(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for m in 1u64..=54 {
        for p in prime_divisors(m) {
            let alpha = vp(p, &BigInt::from(m)).unwrap();
            for l in 0..=m {
                for tau in -5i64..=5 {
                    cases.push(BinomCase { m, p, alpha, l, tau });
                }
            }
        }
    }
    if let Some(s) = seed {
        let mut rng = suite_rng("binom-prime", s);
        for _ in 0..200 {
            let m = rng.gen_range(55u64..=70);
            let ps = prime_divisors(m);
            let p = ps[rng.gen_range(0..ps.len())];
            let alpha = vp(p, &BigInt::from(m)).unwrap();
            let l = rng.gen_range(0..=m);
            let tau = rng.gen_range(-6i64..=6);
            cases.push(BinomCase { m, p, alpha, l, tau });
        }
    }
    run_cases("binom-prime", seed, cases, check_binom_case)
}

struct ValCase {
    a: u64,
    b: u64,
    tau: i64,
    p: u64,
}

// v_p(C(a*tau+a-1, a) * C(b*tau+b, b)) >= alpha - beta whenever
// p^beta || gcd(a,b) and p^alpha || a+b. A vanishing product has
// infinite valuation and passes.
fn check_val_case(c: &ValCase) -> Outcome {
    let alpha = vp(c.p, &BigInt::from(c.a + c.b)).unwrap();
    let beta = vp(c.p, &BigInt::from(c.a.gcd(&c.b))).unwrap();
    let need = alpha.saturating_sub(beta);
    let (a, b) = (c.a as i64, c.b as i64);
    let prod = binom(a * c.tau + a - 1, a) * binom(b * c.tau + b, b);
    let ok = match vp(c.p, &prod) {
        None => true,
        Some(v) => v >= need,
    };
    if ok {
        Outcome::Pass
    } else {
        fail(
            format!("a={} b={} tau={} p={}", c.a, c.b, c.tau, c.p),
            &format!("valuation >= {need}"),
            format!("valuation {:?}", vp(c.p, &prod)),
        )
    }
}

fn suite_valuation(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for a in 1u64..=24 {
        for b in 1u64..=24 {
            for tau in -4i64..=4 {
                for p in prime_divisors(a + b) {
                    cases.push(ValCase { a, b, tau, p });
                }
            }
        }
    }
    if let Some(s) = seed {
        let mut rng = suite_rng("valuation", s);
        for _ in 0..150 {
            let a = rng.gen_range(25u64..=40);
            let b = rng.gen_range(1u64..=40);
            let tau = rng.gen_range(-6i64..=6);
            let ps = prime_divisors(a + b);
            let p = ps[rng.gen_range(0..ps.len())];
            cases.push(ValCase { a, b, tau, p });
        }
    }
    run_cases("valuation", seed, cases, check_val_case)
}

#[derive(Clone, Copy)]
enum UnitsClause {
    Power,
    Sign,
}

struct UnitsCase {
    p: u64,
    alpha: u32,
    k: u64,
    clause: UnitsClause,
}

// f_p(p^alpha k) = f_p(p^alpha)^k mod p^alpha holds everywhere; the
// further identification with (-1)^k needs the unit group to be cyclic,
// which fails for p = 2, alpha >= 3 (f_2(8) = 105 = 1 mod 8, not -1),
// so those sign cases are outside the regime and are skipped.
fn check_units_case(c: &UnitsCase) -> Outcome {
    let pa = c.p.pow(c.alpha);
    let modulus = BigInt::from(pa);
    let lhs = fp(c.p, pa * c.k);
    let rhs = match c.clause {
        UnitsClause::Power => fp(c.p, pa).pow(c.k as u32),
        UnitsClause::Sign => {
            if c.p == 2 && c.alpha >= 3 {
                return Outcome::Skip;
            }
            BigInt::from(neg_one_pow(c.k as i64))
        }
    };
    if (lhs - rhs).mod_floor(&modulus).is_zero() {
        Outcome::Pass
    } else {
        let what = match c.clause {
            UnitsClause::Power => "f_p(p^alpha*k) = f_p(p^alpha)^k mod p^alpha",
            UnitsClause::Sign => "f_p(p^alpha*k) = (-1)^k mod p^alpha",
        };
        fail(
            format!("p={} alpha={} k={}", c.p, c.alpha, c.k),
            what,
            format!("residue {}", fp(c.p, pa * c.k).mod_floor(&modulus)),
        )
    }
}

fn suite_units_sign(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for clause in [UnitsClause::Power, UnitsClause::Sign] {
        for p in [2u64, 3, 5, 7] {
            for alpha in 1u32..=3 {
                for k in 1u64..=20 {
                    cases.push(UnitsCase { p, alpha, k, clause });
                }
            }
        }
    }
    if let Some(s) = seed {
        let mut rng = suite_rng("units-sign", s);
        for _ in 0..30 {
            let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
            let alpha = rng.gen_range(1u32..=3);
            let k = rng.gen_range(21u64..=40);
            for clause in [UnitsClause::Power, UnitsClause::Sign] {
                cases.push(UnitsCase { p, alpha, k, clause });
            }
        }
    }
    run_cases("units-sign", seed, cases, check_units_case)
}

/// Truncated product of two power series in t with Laurent-polynomial
/// coefficients, to order `ord` inclusive.
fn series_mul(a: &[LPoly], b: &[LPoly], ord: usize) -> Vec<LPoly> {
    let mut out = vec![LPoly::zero(); ord + 1];
    for (i, ai) in a.iter().enumerate().take(ord + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(ord + 1 - i) {
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

struct CmCase {
    m: u32,
    k: u64,
}

// Sum over |λ| = m of k^{len(λ)} {λ}_{y^2} / 𝔷_λ against the t^m
// coefficient of ((1 - t/y) / (1 - t y))^k, the latter expanded by a
// plain truncated-series oracle that shares nothing with the closed
// formulas: (1 - t/y) * sum_i t^i y^i, raised to the k-th power.
fn check_cm_case(c: &CmCase) -> Outcome {
    let mut lhs = LPoly::zero();
    for lam in enumerate(c.m) {
        let mut prod = LPoly::one();
        for &part in lam.parts() {
            prod = prod.mul(&bracket(part as i64));
        }
        let coef = BigRational::new(BigInt::from(c.k).pow(lam.length() as u32), lam.zee());
        lhs = lhs.add(&prod.scale(&coef));
    }
    let ord = c.m as usize;
    let mut base = Vec::with_capacity(ord + 1);
    for i in 0..=ord {
        let mut coeff = LPoly::monomial(i as i64, 0, Coef::one());
        if i >= 1 {
            coeff = coeff.sub(&LPoly::monomial(i as i64 - 2, 0, Coef::one()));
        }
        base.push(coeff);
    }
    let mut rhs_series = vec![LPoly::zero(); ord + 1];
    rhs_series[0] = LPoly::one();
    for _ in 0..c.k {
        rhs_series = series_mul(&rhs_series, &base, ord);
    }
    if lhs == rhs_series[ord] {
        Outcome::Pass
    } else {
        fail(
            format!("m={} k={}", c.m, c.k),
            "partition sum equals series coefficient",
            format!("difference {:?}", lhs.sub(&rhs_series[ord])),
        )
    }
}

fn suite_cm_series(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for m in 0u32..=10 {
        for k in 1u64..=6 {
            cases.push(CmCase { m, k });
        }
    }
    if let Some(s) = seed {
        let mut rng = suite_rng("cm-series", s);
        for _ in 0..4 {
            cases.push(CmCase {
                m: rng.gen_range(11u32..=12),
                k: rng.gen_range(1u64..=8),
            });
        }
    }
    run_cases("cm-series", seed, cases, check_cm_case)
}

struct PhiCase {
    d: u32,
    nu: Partition,
    tau: i64,
}

// Character sum over λ of χ_λ((d)) χ_λ(ν) x^{κ_λ τ} against the bracket
// ratio {dν}/{d} at x = q^{τ/2}; the τ = 0 column degenerates to the
// orthogonality relation and both sides vanish unless ν = (d).
fn check_phi_case(c: &PhiCase) -> Outcome {
    let mut ct = CharTable::new();
    let cycle = Partition::new(vec![c.d]);
    let mut lhs = LPoly::zero();
    for lam in enumerate(c.d) {
        let chi = ct.chi(&lam, &cycle) * ct.chi(&lam, &c.nu);
        if chi.is_zero() {
            continue;
        }
        lhs = lhs.add(&LPoly::monomial(
            lam.kappa() * c.tau,
            0,
            BigRational::from_integer(chi),
        ));
    }
    let rhs = phi_ratio(c.d as u64, &c.nu, c.tau);
    if lhs == rhs {
        Outcome::Pass
    } else {
        fail(
            format!("d={} nu={:?} tau={}", c.d, c.nu.parts(), c.tau),
            "character sum equals bracket ratio",
            format!("difference {:?}", lhs.sub(&rhs)),
        )
    }
}

fn suite_phi(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for d in 1u32..=3 {
        for nu in enumerate(d) {
            for tau in -3i64..=3 {
                cases.push(PhiCase { d, nu: nu.clone(), tau });
            }
        }
    }
    if let Some(s) = seed {
        let mut rng = suite_rng("phi", s);
        let nus = enumerate(4);
        for _ in 0..5 {
            cases.push(PhiCase {
                d: 4,
                nu: nus[rng.gen_range(0..nus.len())].clone(),
                tau: rng.gen_range(-4i64..=4),
            });
        }
    }
    run_cases("phi", seed, cases, check_phi_case)
}

fn suite_genus0_int(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for m in 1u64..=40 {
        for l in 0..=m {
            for tau in -8i64..=8 {
                cases.push((m, l, tau));
            }
        }
    }
    if let Some(s) = seed {
        let mut rng = suite_rng("genus0-int", s);
        for _ in 0..300 {
            let m = rng.gen_range(41u64..=60);
            cases.push((m, rng.gen_range(0..=m), rng.gen_range(-12i64..=12)));
        }
    }
    run_cases("genus0-int", seed, cases, |&(m, l, tau)| {
        match n_ml_int(m, l, tau) {
            Ok(_) => Outcome::Pass,
            Err(_) => fail(
                format!("m={m} l={l} tau={tau}"),
                "integer",
                format!("{}", n_ml(m, l, tau)),
            ),
        }
    })
}

fn suite_pair_int(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for m1 in 1u64..=25 {
        for m2 in 1..=m1 {
            for tau in -6i64..=6 {
                cases.push((m1, m2, tau));
            }
        }
    }
    if let Some(s) = seed {
        let mut rng = suite_rng("pair-int", s);
        for _ in 0..80 {
            let m1 = rng.gen_range(26u64..=30);
            cases.push((m1, rng.gen_range(1..=m1), rng.gen_range(-8i64..=8)));
        }
    }
    run_cases("pair-int", seed, cases, |&(m1, m2, tau)| {
        if n_pair(m1, m2, tau) != n_pair(m2, m1, tau) {
            return fail(
                format!("m1={m1} m2={m2} tau={tau}"),
                "swap symmetry",
                format!("{} vs {}", n_pair(m1, m2, tau), n_pair(m2, m1, tau)),
            );
        }
        match n_pair_int(m1, m2, tau) {
            Ok(_) => Outcome::Pass,
            Err(_) => fail(
                format!("m1={m1} m2={m2} tau={tau}"),
                "integer",
                format!("{}", n_pair(m1, m2, tau)),
            ),
        }
    })
}

fn suite_bps_int(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for m in 1u64..=8 {
        for tau in -4i64..=4 {
            cases.push((m, tau));
        }
    }
    run_cases("bps-int", seed, cases, |&(m, tau)| {
        match bps_table_m(m, tau) {
            Err(e) => fail(format!("m={m} tau={tau}"), "finite table", format!("{e}")),
            Ok(t) => {
                if t.all_integral() {
                    Outcome::Pass
                } else {
                    let worst = t
                        .terms()
                        .find(|(_, c)| !c.is_integer())
                        .map(|((g, a2), c)| format!("entry (g={g}, 2Q={a2}) = {c}"))
                        .unwrap_or_default();
                    fail(format!("m={m} tau={tau}"), "all entries integral", worst)
                }
            }
        }
    })
}

fn suite_closed_form(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    for m in 1u64..=8 {
        for tau in [-4i64, -3, -2, -1, 1, 2, 3, 4] {
            cases.push((m, tau));
        }
    }
    run_cases("closed-form", seed, cases, |&(m, tau)| {
        let cleared = match cleared_z_m(m, tau) {
            Ok(p) => p,
            Err(e) => return fail(format!("m={m} tau={tau}"), "polynomial sum", format!("{e}")),
        };
        let sign = rat(neg_one_pow(m as i64 * tau));
        if z_m_closed(m, tau) == cleared.scale(&sign) {
            Outcome::Pass
        } else {
            fail(
                format!("m={m} tau={tau}"),
                "closed form equals signed cleared sum",
                "polynomials differ".into(),
            )
        }
    })
}

struct DivCase {
    m: u64,
    tau: i64,
    m1: u64,
    squared: bool,
    poly: LPoly,
}

fn suite_bracket_div(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    let mut broken = Vec::new();
    for m in 1u64..=8 {
        for tau in (-4i64..=4).filter(|&t| t != 0) {
            let poly = match cleared_g_m(m, tau) {
                Ok(p) => p,
                Err(e) => {
                    broken.push(Outcome::Fail(Failure {
                        input: format!("m={m} tau={tau}"),
                        expected: "polynomial sum".into(),
                        observed: format!("{e}"),
                    }));
                    continue;
                }
            };
            for m1 in divisors(m).into_iter().filter(|&d| d != 1) {
                cases.push(DivCase { m, tau, m1, squared: true, poly: poly.clone() });
            }
            let mt = m * tau.unsigned_abs();
            for m1 in divisors(mt).into_iter().filter(|&d| m % d != 0) {
                cases.push(DivCase { m, tau, m1, squared: false, poly: poly.clone() });
            }
        }
    }
    let mut report = run_cases("bracket-div", seed, cases, |c: &DivCase| {
        let phi = cyclotomic(c.m1);
        let divisor = if c.squared { phi.mul(&phi) } else { phi };
        if c.poly.exact_div(&divisor).is_some() {
            Outcome::Pass
        } else {
            fail(
                format!("m={} tau={} m1={}", c.m, c.tau, c.m1),
                if c.squared {
                    "cyclotomic(m1)^2 divides {m}{m tau} g_m"
                } else {
                    "cyclotomic(m1) divides {m}{m tau} g_m"
                },
                "exact division failed".into(),
            )
        }
    });
    let pre = merge("bracket-div", seed, broken);
    report.cases_run += pre.cases_run;
    report.failures.splice(0..0, pre.failures);
    report
}

enum PipeCase {
    Row { m: u64, tau: i64 },
    Pair { m1: u64, m2: u64, tau: i64, orient: Orientation },
}

// Two independent routes to the same invariants: the general multi-row
// engine restricted to one row against the direct single-row evaluator,
// and the closed two-row formulas (with the doubling correction) against
// the genus-0 top-charge cell of the pipeline table.
fn check_pipe_case(c: &PipeCase) -> Outcome {
    match c {
        PipeCase::Row { m, tau } => {
            let mut ct = CharTable::new();
            let general = g_mu(&Partition::new(vec![*m as u32]), *tau, &mut ct);
            if general.eq_value(&g_m(*m, *tau)) {
                Outcome::Pass
            } else {
                fail(
                    format!("mu=({m}) tau={tau}"),
                    "multi-row engine equals single-row evaluator",
                    "values differ".into(),
                )
            }
        }
        PipeCase::Pair { m1, m2, tau, orient } => {
            let mut ct = CharTable::new();
            let mu = Partition::new(vec![*m1 as u32, *m2 as u32]);
            let table = match bps_table_mu(&mu, *tau, &mut ct) {
                Ok(t) => t,
                Err(e) => {
                    return fail(
                        format!("mu=({m1},{m2}) tau={tau}"),
                        "finite table",
                        format!("{e}"),
                    )
                }
            };
            let cell = table.coeff(0, orient.pair_a2(*m1, *m2));
            let expect = orient.expected_pair_cell(*m1, *m2, *tau);
            if cell == expect {
                Outcome::Pass
            } else {
                fail(
                    format!("mu=({m1},{m2}) tau={tau}"),
                    &format!("genus-0 top-charge cell {expect}"),
                    format!("{cell}"),
                )
            }
        }
    }
}

fn suite_pipeline(seed: Option<u64>) -> VerifyReport {
    let orient = match resolve_orientation() {
        Ok(o) => o,
        Err(e) => {
            return merge(
                "pipeline",
                seed,
                vec![Outcome::Fail(Failure {
                    input: "orientation".into(),
                    expected: "unique charge dictionary".into(),
                    observed: format!("{e}"),
                })],
            )
        }
    };
    let mut cases = Vec::new();
    for m in 1u64..=6 {
        for tau in -3i64..=3 {
            cases.push(PipeCase::Row { m, tau });
        }
    }
    for m1 in 1u64..=7 {
        for m2 in 1..=m1.min(8 - m1) {
            for tau in -3i64..=3 {
                cases.push(PipeCase::Pair { m1, m2, tau, orient });
            }
        }
    }
    run_cases("pipeline", seed, cases, check_pipe_case)
}

// The genus-0 row of every single-row table against the closed formula,
// with the constant row sign, plus the converse: no nonzero genus-0
// entry outside the mapped charge set.
fn suite_genus0_match(seed: Option<u64>) -> VerifyReport {
    let orient = match resolve_orientation() {
        Ok(o) => o,
        Err(e) => {
            return merge(
                "genus0-match",
                seed,
                vec![Outcome::Fail(Failure {
                    input: "orientation".into(),
                    expected: "unique charge dictionary".into(),
                    observed: format!("{e}"),
                })],
            )
        }
    };
    let mut cases = Vec::new();
    for m in 1u64..=8 {
        for tau in -4i64..=4 {
            cases.push((m, tau));
        }
    }
    run_cases("genus0-match", seed, cases, |&(m, tau)| {
        let table = match bps_table_m(m, tau) {
            Ok(t) => t,
            Err(e) => return fail(format!("m={m} tau={tau}"), "finite table", format!("{e}")),
        };
        let g0 = table.genus0();
        let sign = rat(orient.row_sign as i64);
        for l in 0..=m {
            let expect = n_ml(m, l, tau) * sign.clone();
            let got = g0
                .get(&orient.row_a2(m, l))
                .cloned()
                .unwrap_or_else(Coef::zero);
            if expect != got {
                return fail(
                    format!("m={m} l={l} tau={tau}"),
                    &format!("genus-0 cell {expect}"),
                    format!("{got}"),
                );
            }
        }
        let valid: std::collections::BTreeSet<i64> =
            (0..=m).map(|l| orient.row_a2(m, l)).collect();
        for (a2, c) in &g0 {
            if !c.is_zero() && !valid.contains(a2) {
                return fail(
                    format!("m={m} tau={tau}"),
                    "genus-0 support inside mapped charges",
                    format!("stray entry at 2Q={a2}: {c}"),
                );
            }
        }
        Outcome::Pass
    })
}

fn suite_extremal_int(seed: Option<u64>) -> VerifyReport {
    let mut cases = Vec::new();
    let ps: Vec<i64> = (-6..=-1).chain(2..=8).collect();
    for &p in &ps {
        for r in 1u64..=40 {
            for side in [ExtremalSide::Bottom, ExtremalSide::Top] {
                cases.push((p, r, side));
            }
        }
    }
    if let Some(s) = seed {
        let mut rng = suite_rng("extremal-int", s);
        while cases.len() < ps.len() * 80 + 60 {
            let p = rng.gen_range(-12i64..=14);
            if p == 0 || p == 1 {
                continue;
            }
            let r = rng.gen_range(41u64..=60);
            let side = if rng.gen() {
                ExtremalSide::Top
            } else {
                ExtremalSide::Bottom
            };
            cases.push((p, r, side));
        }
    }
    run_cases("extremal-int", seed, cases, |&(p, r, side)| {
        match gks_extremal_int(p, r, side) {
            Err(e) => fail(format!("p={p} r={r} side={side:?}"), "valid regime", format!("{e}")),
            Ok(Err(e)) => fail(format!("p={p} r={r} side={side:?}"), "integer", format!("{e}")),
            Ok(Ok(_)) => Outcome::Pass,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_are_unique_and_unknown_is_rejected() {
        let mut seen = std::collections::BTreeSet::new();
        for name in SUITE_NAMES {
            assert!(seen.insert(name), "duplicate suite {name}");
        }
        assert!(run_suite("no-such-suite", None).is_none());
    }

    #[test]
    fn units_sign_counts_are_pinned() {
        let r = run_suite("units-sign", None).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        // 240 power cases + 240 sign cases, of which p=2, alpha=3 (20) skip
        assert_eq!(r.cases_run, 460);
        assert_eq!(r.skipped, 20);
        assert_eq!(r.seed, None);
    }

    #[test]
    fn cm_series_and_phi_pass() {
        for name in ["cm-series", "phi"] {
            let r = run_suite(name, None).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures.first());
            assert_eq!(r.skipped, 0);
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let a = run_suite("valuation", Some(9)).unwrap();
        let b = run_suite("valuation", Some(9)).unwrap();
        assert_eq!(a.cases_run, b.cases_run);
        assert_eq!(a.failures, b.failures);
        assert_eq!(a.seed, Some(9));
        assert!(a.cases_run > run_suite("valuation", None).unwrap().cases_run);
    }

    #[test]
    fn failure_payload_round_trips_through_json() {
        let f = Failure {
            input: "m=2 l=1 tau=1".into(),
            expected: "integer".into(),
            observed: "1/2".into(),
        };
        let r = VerifyReport {
            suite: "demo".into(),
            cases_run: 1,
            skipped: 0,
            failures: vec![f.clone()],
            seed: Some(3),
        };
        let s = serde_json::to_string(&r).unwrap();
        let back: VerifyReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.failures, vec![f]);
        assert!(!back.passed());
        assert_eq!(back.seed, Some(3));
    }

    #[test]
    fn fp_power_base_ranges_pass() {
        let r = run_suite("fp-power", None).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        // 4 primes x 3 exponents x 50 values
        assert_eq!(r.cases_run, 600);
    }
}

//! The `α = κ(κ+1)/(κ-1)` relation and its inverse.
//!
//! Clearing denominators, `κ` is a root of `α_d κ² - (α_n - α_d) κ + α_n = 0`,
//! whose discriminant is `(α_n - 3α_d)² - 8α_d²`. A rational root therefore
//! needs `8α_d²` to be a difference of two squares, which is an odd
//! progression `N(N + Q) = 8α_d²`. Each such factorisation gives both roots
//! in closed form:
//!
//! * `α_n = 4α_d²/N + 3α_d + N/2`
//! * `κ₊ = (4α_d + N)/N`
//! * `κ₋ = (2α_d + N)/(2α_d)`

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ap::kappa_in_valid_range;
use crate::int::Int;
use crate::ratio::Ratio;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KappaError {
    #[error("kappa = {0} must be greater than 1")]
    KappaNotAboveOne(Ratio),
    #[error("alpha = {0} must be positive")]
    AlphaNotPositive(Ratio),
    #[error("N = {n}, Q = {q} does not solve N(N+Q) = 8·{alpha_d}²")]
    NotASolution { n: u128, q: u128, alpha_d: u64 },
    #[error("alpha_n = 4·{alpha_d}²/{n} + 3·{alpha_d} + {n}/2 is not an integer")]
    NonIntegralAlphaN { n: u128, alpha_d: u64 },
}

/// A positive `α = α_n/α_d` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlphaFraction(Ratio);

impl AlphaFraction {
    pub fn new(alpha_n: impl Into<Int>, alpha_d: impl Into<Int>) -> Result<AlphaFraction, KappaError> {
        let r = Ratio::from_parts(alpha_n.into(), alpha_d.into())
            .map_err(|_| KappaError::AlphaNotPositive(Ratio::zero()))?;
        AlphaFraction::try_from(r)
    }

    pub fn numer(&self) -> &Int {
        self.0.numer()
    }

    pub fn denom(&self) -> &Int {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &Ratio {
        &self.0
    }

    /// `(α_n - 3α_d)² - 8α_d²`.
    pub fn discriminant(&self) -> Int {
        let (n, d) = (self.numer(), self.denom());
        let t = n - &(Int::from(3) * d);
        t.square() - Int::from(8) * d.square()
    }
}

impl TryFrom<Ratio> for AlphaFraction {
    type Error = KappaError;

    fn try_from(r: Ratio) -> Result<AlphaFraction, KappaError> {
        if r.is_positive() {
            Ok(AlphaFraction(r))
        } else {
            Err(KappaError::AlphaNotPositive(r))
        }
    }
}

/// `κ(κ+1)/(κ-1)`.
pub fn alpha_of(kappa: &Ratio) -> Result<Ratio, KappaError> {
    let one = Ratio::one();
    if *kappa <= one {
        return Err(KappaError::KappaNotAboveOne(kappa.clone()));
    }
    let ratio = (kappa + &one).checked_div(&(kappa - &one)).expect("kappa > 1");
    Ok(kappa * &ratio)
}

/// A rational root `κ > 1` together with whether it yields a nonnegative
/// first offset (`κ ≤ 1 + √2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaRoot {
    pub value: Ratio,
    pub valid_offset: bool,
}

impl KappaRoot {
    fn new(value: Ratio) -> KappaRoot {
        let valid_offset = kappa_in_valid_range(&value);
        KappaRoot { value, valid_offset }
    }
}

/// All rational roots `κ > 1` of the quadratic for `α`, ascending.
pub fn kappa_roots_quadratic(alpha: &AlphaFraction) -> Vec<KappaRoot> {
    let Some(root) = alpha.discriminant().perfect_sqrt() else {
        return Vec::new();
    };
    let (n, d) = (alpha.numer(), alpha.denom());
    let b = n - d;
    let two_d = Int::from(2) * d;
    let one = Ratio::one();
    let mut roots: Vec<Ratio> = [&b - &root, &b + &root]
        .into_iter()
        .map(|num| Ratio::from_parts(num, two_d.clone()).expect("alpha_d > 0"))
        .filter(|k| *k > one)
        .collect();
    roots.dedup();
    roots.into_iter().map(KappaRoot::new).collect()
}

/// A factorisation `N · (N + Q) = 8α_d²` with both factors even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorSolution {
    pub n: u128,
    pub q: u128,
    /// `Q + 2N`, the offset of `(α_n - 3α_d)²`.
    pub q_prime: u128,
}

impl DivisorSolution {
    pub fn new(n: u128, q: u128) -> DivisorSolution {
        DivisorSolution {
            n,
            q,
            q_prime: q + 2 * n,
        }
    }

    fn check(&self, alpha_d: u64) -> Result<(), KappaError> {
        let target = 8 * (alpha_d as u128).pow(2);
        let ok =
            self.n > 0 && self.q_prime == self.q + 2 * self.n && self.n.checked_mul(self.n + self.q) == Some(target);
        if ok {
            Ok(())
        } else {
            Err(KappaError::NotASolution {
                n: self.n,
                q: self.q,
                alpha_d,
            })
        }
    }
}

fn factorize(mut v: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= v {
        if v.is_multiple_of(p) {
            let mut e = 0;
            while v.is_multiple_of(p) {
                v /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if v > 1 {
        out.push((v, 1));
    }
    out
}

fn divisors_of_8_square(alpha_d: u64) -> Vec<u128> {
    let mut factors: Vec<(u128, u32)> = factorize(alpha_d)
        .into_iter()
        .map(|(p, e)| (p as u128, 2 * e))
        .collect();
    match factors.first_mut() {
        Some((2, e)) => *e += 3,
        _ => factors.insert(0, (2, 3)),
    }
    let mut divisors = vec![1u128];
    for (p, e) in factors {
        let len = divisors.len();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divisors.push(divisors[i] * pk);
            }
        }
    }
    divisors.sort_unstable();
    divisors
}

/// Every `N(N + Q) = 8α_d²` with `N ≤ N + Q` and `N ≡ N + Q (mod 2)`,
/// ascending by `N`. Empty for `α_d = 0`.
pub fn divisor_solutions(alpha_d: u64) -> Vec<DivisorSolution> {
    if alpha_d == 0 {
        return Vec::new();
    }
    let target = 8 * (alpha_d as u128).pow(2);
    divisors_of_8_square(alpha_d)
        .into_iter()
        .filter_map(|n| {
            let m = target / n;
            (n <= m && (m - n).is_multiple_of(2)).then(|| DivisorSolution::new(n, m - n))
        })
        .collect()
}

/// `4α_d²/N + 3α_d + N/2`, unreduced against `α_d`.
pub fn alpha_n_from(sol: &DivisorSolution, alpha_d: u64) -> Result<Int, KappaError> {
    sol.check(alpha_d)?;
    let four_d2 = 4 * (alpha_d as u128).pow(2);
    if !sol.n.is_multiple_of(2) || !four_d2.is_multiple_of(sol.n) {
        return Err(KappaError::NonIntegralAlphaN { n: sol.n, alpha_d });
    }
    Ok(Int::from(four_d2 / sol.n) + Int::from(3 * alpha_d as u128) + Int::from(sol.n / 2))
}

/// `(4α_d + N)/N`.
pub fn kappa_plus(sol: &DivisorSolution, alpha_d: u64) -> Result<Ratio, KappaError> {
    alpha_n_from(sol, alpha_d)?;
    let n = Int::from(sol.n);
    Ok(Ratio::from_parts(Int::from(4 * alpha_d as u128) + &n, n).expect("N > 0"))
}

/// `(2α_d + N)/(2α_d)`.
pub fn kappa_minus(sol: &DivisorSolution, alpha_d: u64) -> Result<Ratio, KappaError> {
    alpha_n_from(sol, alpha_d)?;
    let two_d = Int::from(2 * alpha_d as u128);
    Ok(Ratio::from_parts(&two_d + Int::from(sol.n), two_d).expect("alpha_d > 0"))
}

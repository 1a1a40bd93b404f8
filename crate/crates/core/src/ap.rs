//! Odd-integer arithmetic progressions and equal-sum AP pairs.
//!
//! An [`OddAp`] with offset `O` (even) and length `m` is the progression
//! `O+1, O+3, ..., O+2m-1`; its sum is `m(m+O)`. Offset `2x` starts at the gap
//! just above `x²`, so the progression with offset `2a` and length `c-a` sums to
//! `c² - a²`. Two consecutive progressions with equal sums form an [`ApPair`],
//! which is the same thing as three squares `a² < b² < c²` in arithmetic
//! progression.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::int::Int;
use crate::ratio::Ratio;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApError {
    #[error("offset {0} is odd")]
    OddOffset(u64),
    #[error("offset or length overflows u64")]
    Overflow,
    #[error("need a < c, got a = {a}, c = {c}")]
    EmptyRange { a: u64, c: u64 },
    #[error("progressions are not consecutive: expected offset {expected}, found {found}")]
    NotConsecutive { expected: u64, found: u64 },
    #[error("{a}², {b}², {c}² are not three increasing squares in arithmetic progression")]
    NotSquareProgression { a: u64, b: u64, c: u64 },
    #[error("invalid AP pair: {0}")]
    InvalidPair(&'static str),
    #[error("kappa = {0} is not greater than 1")]
    KappaNotAboveOne(Ratio),
    #[error("{quantity} = {value} is not an integer")]
    NonIntegral { quantity: &'static str, value: Ratio },
    #[error("first offset {0} is negative")]
    NegativeOffset(Int),
}

/// An arithmetic progression of odd integers with common difference 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OddAp {
    offset: u64,
    length: u64,
}

impl OddAp {
    pub fn new(offset: u64, length: u64) -> Result<OddAp, ApError> {
        if !offset.is_multiple_of(2) {
            return Err(ApError::OddOffset(offset));
        }
        // The offset just past the end must stay representable.
        length
            .checked_mul(2)
            .and_then(|l| l.checked_add(offset))
            .ok_or(ApError::Overflow)?;
        Ok(OddAp { offset, length })
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Offset of the progression that would directly follow this one.
    pub fn next_offset(&self) -> u64 {
        self.offset + 2 * self.length
    }

    pub fn sum(&self) -> Int {
        sum_of_ap(self)
    }

    pub fn terms(&self) -> impl Iterator<Item = u128> {
        let first = self.offset as u128 + 1;
        (0..self.length as u128).map(move |i| first + 2 * i)
    }
}

/// `m(m + O)`.
pub fn sum_of_ap(ap: &OddAp) -> Int {
    let m = Int::from(ap.length);
    &m * (&m + Int::from(ap.offset))
}

/// The offset of the length-`m` progression summing to `sum`, if one exists.
///
/// Returns `None` when `m` does not divide `sum`, or when `sum/m - m` is odd,
/// negative, or too large for an offset.
pub fn offset_for(sum: &Int, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let q = sum.div_exact(&Int::from(m))?;
    let offset = q - Int::from(m);
    if offset.is_negative() || !offset.is_even() {
        return None;
    }
    let offset = offset.to_u64()?;
    OddAp::new(offset, m).ok().map(|ap| ap.offset)
}

/// `2x`: the progression of gaps above `x²` starts at `2x + 1`.
///
/// # Panics
/// If `2x` overflows `u64`.
pub fn offset_of_square(x: u64) -> u64 {
    x.checked_mul(2).expect("root too large for a u64 offset")
}

/// The progression of odd gaps between `a²` and `c²`.
pub fn ap_between_squares(a: u64, c: u64) -> Result<OddAp, ApError> {
    if a >= c {
        return Err(ApError::EmptyRange { a, c });
    }
    let offset = a.checked_mul(2).ok_or(ApError::Overflow)?;
    OddAp::new(offset, c - a)
}

/// Joins two consecutive progressions into one.
pub fn concat(left: &OddAp, right: &OddAp) -> Result<OddAp, ApError> {
    let expected = left.next_offset();
    if right.offset != expected {
        return Err(ApError::NotConsecutive {
            expected,
            found: right.offset,
        });
    }
    let length = left.length.checked_add(right.length).ok_or(ApError::Overflow)?;
    OddAp::new(left.offset, length)
}

/// Roots `a < b < c` of three squares in arithmetic progression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl RootTriple {
    pub const fn new(a: u64, b: u64, c: u64) -> RootTriple {
        RootTriple { a, b, c }
    }

    pub fn squares(&self) -> [u128; 3] {
        [self.a, self.b, self.c].map(|r| r as u128 * r as u128)
    }

    /// The common difference `b² - a²`, if the squares really are in progression.
    pub fn common_difference(&self) -> Option<u128> {
        let [a2, b2, c2] = self.squares();
        (self.a < self.b && self.b < self.c && b2 - a2 == c2 - b2).then_some(b2 - a2)
    }

    pub fn scaled(&self, k: u64) -> RootTriple {
        RootTriple::new(self.a * k, self.b * k, self.c * k)
    }
}

/// Two consecutive [`OddAp`]s with equal, positive sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApPair {
    first: OddAp,
    second: OddAp,
}

impl ApPair {
    pub fn new(first: OddAp, second: OddAp) -> Result<ApPair, ApError> {
        if second.offset != first.next_offset() {
            return Err(ApError::NotConsecutive {
                expected: first.next_offset(),
                found: second.offset,
            });
        }
        if second.length == 0 || second.length >= first.length {
            return Err(ApError::InvalidPair("lengths must satisfy 0 < second < first"));
        }
        if first.sum() != second.sum() {
            return Err(ApError::InvalidPair("sums differ"));
        }
        Ok(ApPair { first, second })
    }

    pub fn first(&self) -> &OddAp {
        &self.first
    }

    pub fn second(&self) -> &OddAp {
        &self.second
    }

    /// Offset of the first progression.
    pub fn p1(&self) -> u64 {
        self.first.offset
    }

    /// Offset of the second progression.
    pub fn p2(&self) -> u64 {
        self.second.offset
    }

    /// Offset of the last term of the second progression, i.e. `2(c - 1)`.
    pub fn p3(&self) -> u64 {
        self.second.offset + 2 * (self.second.length - 1)
    }

    pub fn n1(&self) -> u64 {
        self.first.length
    }

    pub fn n2(&self) -> u64 {
        self.second.length
    }

    pub fn sum(&self) -> Int {
        self.second.sum()
    }

    pub fn roots(&self) -> RootTriple {
        RootTriple::new(self.p1() / 2, self.p2() / 2, self.p3() / 2 + 1)
    }

    /// `self < other`: this pair ends strictly before the other begins.
    pub fn precedes(&self, other: &ApPair) -> bool {
        self.p3() < other.p1()
    }

    pub fn overlaps(&self, other: &ApPair) -> bool {
        self.p1() <= other.p3() && other.p1() <= self.p3()
    }

    /// The one-sided overlap relation: this pair starts no later than the other ends.
    pub fn starts_within(&self, other: &ApPair) -> bool {
        self.p1() <= other.p3()
    }
}

/// Relative placement of three AP pairs along the number line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layout {
    /// `P1 < P2 < P3`: each pair ends before the next begins.
    #[serde(rename = "a")]
    Disjoint,
    /// `P1 ‖ P2 ‖ P3` with `P2¹ ≥ P1²` and `P3¹ ≥ P2²`.
    #[serde(rename = "b")]
    Overlapping,
    /// `P3 <‖ P2 <‖ P1` with `P2¹ < P1²` and `P3¹ < P2²`.
    #[serde(rename = "c")]
    Reversed,
}

impl Layout {
    pub fn label(&self) -> &'static str {
        match self {
            Layout::Disjoint => "a",
            Layout::Overlapping => "b",
            Layout::Reversed => "c",
        }
    }
}

/// The first of the three layouts that matches, in the order (a), (b), (c).
pub fn classify_layout(pairs: &[ApPair; 3]) -> Option<Layout> {
    let [p1, p2, p3] = pairs;
    if p1.precedes(p2) && p2.precedes(p3) {
        return Some(Layout::Disjoint);
    }
    if p1.overlaps(p2) && p2.overlaps(p3) && p2.p1() >= p1.p2() && p3.p1() >= p2.p2() {
        return Some(Layout::Overlapping);
    }
    if p3.starts_within(p2) && p2.starts_within(p1) && p2.p1() < p1.p2() && p3.p1() < p2.p2() {
        return Some(Layout::Reversed);
    }
    None
}

pub fn pair_from_roots(a: u64, b: u64, c: u64) -> Result<ApPair, ApError> {
    let bad = ApError::NotSquareProgression { a, b, c };
    if !(a < b && b < c) {
        return Err(bad);
    }
    RootTriple::new(a, b, c).common_difference().ok_or(bad)?;
    ApPair::new(ap_between_squares(a, b)?, ap_between_squares(b, c)?)
}

impl TryFrom<RootTriple> for ApPair {
    type Error = ApError;

    fn try_from(t: RootTriple) -> Result<ApPair, ApError> {
        pair_from_roots(t.a, t.b, t.c)
    }
}

/// The length ratio `n1 / n2` of a pair, always greater than 1.
pub fn kappa_of(pair: &ApPair) -> Ratio {
    Ratio::new(pair.n1(), pair.n2()).expect("second length is positive")
}

/// `κ² - 2κ - 1 ≤ 0`, i.e. `κ ≤ 1 + √2`, the range in which the first offset
/// recovered from `κ` is nonnegative.
pub fn kappa_in_valid_range(kappa: &Ratio) -> bool {
    let two = Ratio::integer(2);
    let v = &(&kappa.square() - &(&two * kappa)) - &Ratio::one();
    !v.is_positive()
}

/// Sum and offsets of a pair rebuilt from its second length and `κ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairInvariants {
    pub sum: Int,
    pub offset1: Int,
    pub offset2: Int,
}

/// Rebuilds `(Σ, first offset, second offset)` from `n2` and `κ`:
///
/// * `Σ  = n2² · κ(κ+1)/(κ-1)`
/// * `O1 = n2 · ((κ+1)/(κ-1) - κ)`
/// * `O2 = n2 · (κ(κ+1)/(κ-1) - 1)`
pub fn pair_invariants_from_kappa(n2: u64, kappa: &Ratio) -> Result<PairInvariants, ApError> {
    let one = Ratio::one();
    if *kappa <= one {
        return Err(ApError::KappaNotAboveOne(kappa.clone()));
    }
    let n2 = Ratio::integer(n2);
    let ratio = (kappa + &one).checked_div(&(kappa - &one)).expect("kappa > 1");
    let alpha = kappa * &ratio;

    let sum = &n2.square() * &alpha;
    let offset1 = &n2 * &(&ratio - kappa);
    let offset2 = &n2 * &(&alpha - &one);

    let integral = |quantity: &'static str, v: Ratio| v.to_integer().ok_or(ApError::NonIntegral { quantity, value: v });
    let sum = integral("pair sum", sum)?;
    let offset1 = integral("first offset", offset1)?;
    let offset2 = integral("second offset", offset2)?;
    if offset1.is_negative() {
        return Err(ApError::NegativeOffset(offset1));
    }
    Ok(PairInvariants { sum, offset1, offset2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ap(o: u64, m: u64) -> OddAp {
        OddAp::new(o, m).unwrap()
    }

    fn loop_sum(o: u64, m: u64) -> u128 {
        (0..m).map(|i| (o + 1 + 2 * i) as u128).sum()
    }

    fn r(n: i64, d: i64) -> Ratio {
        Ratio::new(n, d).unwrap()
    }

    #[test]
    fn sums() {
        assert_eq!(ap(0, 3).sum(), Int::from(9));
        assert_eq!(ap(2, 4).sum(), Int::from(loop_sum(2, 4)));
        assert_eq!(ap(2, 4).sum(), Int::from(24));
        assert_eq!(ap(6, 1).sum(), Int::from(7));
        assert_eq!(ap(10, 0).sum(), Int::ZERO);
        assert_eq!(OddAp::new(3, 1), Err(ApError::OddOffset(3)));
    }

    #[test]
    fn sum_past_word_width() {
        let big = ap(u64::MAX - 1 - 2 * 1000, 1000);
        let expect = Int::from(1000u64) * (Int::from(1000u64) + Int::from(u64::MAX - 2001));
        assert_eq!(big.sum(), expect);
    }

    #[test]
    fn offsets_from_sums() {
        assert_eq!(offset_for(&Int::from(24), 4), Some(2));
        assert_eq!(offset_for(&Int::from(24), 2), Some(10));
        assert_eq!(loop_sum(10, 2), 24);
        assert_eq!(offset_for(&Int::from(15), 2), None);
        // 24/3 - 3 = 5 is odd
        assert_eq!(offset_for(&Int::from(24), 3), None);
        // 24/6 - 6 < 0
        assert_eq!(offset_for(&Int::from(24), 6), None);
        assert_eq!(offset_for(&Int::from(24), 0), None);
    }

    #[test]
    fn square_offsets() {
        assert_eq!(offset_of_square(0), 0);
        assert_eq!(offset_of_square(3), 6);
        assert_eq!(9 + (offset_of_square(3) + 1), 16);
        assert_eq!(offset_of_square(100), 200);
    }

    #[test]
    fn gaps_between_squares() {
        assert_eq!(ap_between_squares(1, 5), Ok(ap(2, 4)));
        assert_eq!(ap_between_squares(0, 1), Ok(ap(0, 1)));
        let g = ap_between_squares(29, 41).unwrap();
        assert_eq!(g, ap(58, 12));
        assert_eq!(loop_sum(58, 12), 840);
        assert_eq!(g.terms().next(), Some(59));
        assert_eq!(g.terms().last(), Some(81));
        assert_eq!(ap_between_squares(5, 5), Err(ApError::EmptyRange { a: 5, c: 5 }));
    }

    #[test]
    fn concatenation() {
        let joined = concat(&ap(2, 4), &ap(10, 2)).unwrap();
        assert_eq!(joined, ap(2, 6));
        assert_eq!(joined.sum(), Int::from(48));
        assert_eq!(concat(&ap(0, 1), &ap(2, 0)), Ok(ap(0, 1)));
        let joined = concat(&ap(6, 2), &ap(10, 3)).unwrap();
        assert_eq!(joined, ap(6, 5));
        assert_eq!(joined.sum(), Int::from(loop_sum(6, 5)));
        assert_eq!(joined.sum(), Int::from(55));
        assert_eq!(
            concat(&ap(6, 2), &ap(12, 3)),
            Err(ApError::NotConsecutive {
                expected: 10,
                found: 12
            })
        );
    }

    #[test]
    fn pairs_from_roots() {
        let p = pair_from_roots(1, 5, 7).unwrap();
        assert_eq!(p.sum(), Int::from(24));
        assert_eq!((p.p1(), p.p2(), p.p3()), (2, 10, 12));
        assert_eq!((p.n1(), p.n2()), (4, 2));
        assert_eq!(p.roots(), RootTriple::new(1, 5, 7));

        let p = pair_from_roots(1, 29, 41).unwrap();
        assert_eq!(p.sum(), Int::from(840));
        assert_eq!((p.p1(), p.p2(), p.p3()), (2, 58, 80));

        assert!(matches!(
            pair_from_roots(2, 3, 4),
            Err(ApError::NotSquareProgression { .. })
        ));
        assert!(pair_from_roots(5, 1, 7).is_err());
        // Equal sums but lengths in the wrong order.
        assert!(ApPair::new(ap(10, 2), ap(14, 4)).is_err());
        assert!(ApPair::new(ap(2, 4), ap(10, 0)).is_err());
    }

    #[test]
    fn kappas() {
        assert_eq!(kappa_of(&pair_from_roots(1, 5, 7).unwrap()), r(2, 1));
        assert_eq!(kappa_of(&pair_from_roots(1, 29, 41).unwrap()), r(7, 3));
        assert_eq!(kappa_of(&pair_from_roots(23, 37, 47).unwrap()), r(7, 5));
        assert!(kappa_in_valid_range(&r(2, 1)));
        assert!(kappa_in_valid_range(&r(12, 5)));
        assert!(!kappa_in_valid_range(&r(5, 2)));
    }

    #[test]
    fn invariants_from_kappa() {
        let inv = |n2, k: Ratio| pair_invariants_from_kappa(n2, &k).unwrap();
        let t = |s: i64, o1: i64, o2: i64| PairInvariants {
            sum: Int::from(s),
            offset1: Int::from(o1),
            offset2: Int::from(o2),
        };
        assert_eq!(inv(2, r(2, 1)), t(24, 2, 10));
        assert_eq!(inv(12, r(7, 3)), t(840, 2, 58));
        assert_eq!(inv(10, r(7, 5)), t(840, 46, 74));

        assert!(matches!(
            pair_invariants_from_kappa(1, &r(7, 3)),
            Err(ApError::NonIntegral { .. })
        ));
        // κ = 3 lies above 1 + √2: O1 = 1·(4/2 - 3) = -1.
        assert_eq!(
            pair_invariants_from_kappa(1, &r(3, 1)),
            Err(ApError::NegativeOffset(Int::from(-1)))
        );
        assert!(matches!(
            pair_invariants_from_kappa(4, &r(1, 1)),
            Err(ApError::KappaNotAboveOne(_))
        ));
    }

    #[test]
    fn layouts() {
        let p = |a, b, c| pair_from_roots(a, b, c).unwrap();
        let (x, y) = (p(1, 29, 41), p(23, 37, 47));
        // 𝒫₁³ = 80 ≥ 𝒫₂¹ = 46 and 𝒫₁¹ = 2 ≤ 𝒫₂³ = 92.
        assert!(x.overlaps(&y));
        assert!(!x.precedes(&y));
        assert!(y.p1() < x.p2());

        // Layout is positional only; sums need not agree.
        let spread = [p(1, 5, 7), p(5, 25, 35), p(25, 125, 175)];
        assert_eq!(classify_layout(&spread), Some(Layout::Overlapping));
        let far = [p(1, 5, 7), p(10, 50, 70), p(100, 500, 700)];
        assert_eq!(classify_layout(&far), Some(Layout::Disjoint));
        let back = [far[2], far[1], far[0]];
        assert_eq!(classify_layout(&back), Some(Layout::Reversed));
        let same = [x, x, x];
        assert_eq!(classify_layout(&same), Some(Layout::Reversed));
        assert_eq!(classify_layout(&[y, x, y]), Some(Layout::Reversed));
        assert_eq!(classify_layout(&[p(1, 5, 7), y, x]), None);
    }

    #[test]
    fn sum_matches_loop_exhaustively() {
        for o in (0..=200).step_by(2) {
            for m in 0..=200 {
                assert_eq!(ap(o, m).sum(), Int::from(loop_sum(o, m)), "O={o} m={m}");
            }
        }
    }

    proptest! {
        #[test]
        fn offset_round_trip(half in 0u64..1_000_000, m in 1u64..1_000_000) {
            let p = ap(2 * half, m);
            prop_assert_eq!(offset_for(&p.sum(), m), Some(p.offset()));
        }

        #[test]
        fn split_preserves_sum(half in 0u64..100_000, m in 0u64..100_000, cut in 0u64..100_000) {
            let whole = ap(2 * half, m);
            let n = cut % (m + 1);
            let left = ap(2 * half, n);
            let right = ap(left.next_offset(), m - n);
            prop_assert_eq!(whole.sum(), left.sum() + right.sum());
            prop_assert_eq!(concat(&left, &right).unwrap(), whole);
        }

        #[test]
        fn gap_sums_are_square_differences(a in 0u64..1_000_000_000, len in 1u64..1_000_000) {
            let c = a + len;
            let g = ap_between_squares(a, c).unwrap();
            prop_assert_eq!(g.sum(), Int::from(c).square() - Int::from(a).square());
        }
    }
}

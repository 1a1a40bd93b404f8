//! Square grids, line-sum verification, and the linear chain that every 3×3
//! magic square follows.
//!
//! Walking the cells of a 3×3 magic square in the order
//! `x23, x31, x12, x11, x22, x33, x32, x13, x21`, consecutive cells differ by
//! `D1, D1, D2, D1, D1, D2, D1, D1`. The triple `(x23, D1, D2)` therefore
//! determines the square, and the center is `x23 + 3·D1 + D2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ap::{ap_between_squares, classify_layout, pair_from_roots, ApPair, Layout, OddAp, RootTriple};
use crate::int::Int;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("cannot parse grid: {0}")]
    Parse(String),
    #[error("grid order must be at least 3, got {0}")]
    BadOrder(usize),
    #[error("expected {expected} cells, found {found}")]
    WrongCellCount { expected: usize, found: usize },
    #[error("cell value overflows u64")]
    Overflow,
    #[error("operation needs a 3×3 grid, got order {0}")]
    NotOrder3(usize),
    #[error("chain violation: {relation} fails ({lhs} ≠ {rhs})")]
    ChainViolation {
        relation: &'static str,
        lhs: i128,
        rhs: i128,
    },
    #[error("generated cell {cell} = {value} is negative")]
    NegativeCell { cell: &'static str, value: i128 },
    #[error("cell {cell} = {value} is not a perfect square")]
    NotAllSquares { cell: &'static str, value: u64 },
    #[error("degenerate chain: D1 = 0 gives no AP pairs")]
    DegenerateChain,
    #[error("the three AP pairs match none of the layouts (a), (b), (c)")]
    Unclassifiable,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    order: usize,
    /// Row-major.
    cells: Vec<u64>,
}

impl Grid {
    pub fn new(order: usize, cells: Vec<u64>) -> Result<Grid, GridError> {
        if order < 3 {
            return Err(GridError::BadOrder(order));
        }
        if cells.len() != order * order {
            return Err(GridError::WrongCellCount {
                expected: order * order,
                found: cells.len(),
            });
        }
        Ok(Grid { order, cells })
    }

    /// Builds a grid whose cells are the squares of `roots`.
    pub fn from_roots(order: usize, roots: &[u64]) -> Result<Grid, GridError> {
        let cells = roots
            .iter()
            .map(|r| r.checked_mul(*r).ok_or(GridError::Overflow))
            .collect::<Result<_, _>>()?;
        Grid::new(order, cells)
    }

    /// Parses `n` followed by `n²` whitespace-separated integers. Text after a
    /// `#` on any line is ignored. With `roots`, every value is squared.
    pub fn parse(text: &str, roots: bool) -> Result<Grid, GridError> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let order: usize = tokens
            .next()
            .ok_or_else(|| GridError::Parse("empty input".into()))?
            .parse()
            .map_err(|e| GridError::Parse(format!("order: {e}")))?;
        let values = tokens
            .map(|t| t.parse::<u64>().map_err(|e| GridError::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if roots {
            Grid::from_roots(order, &values)
        } else {
            Grid::new(order, values)
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    /// Zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.cells[row * self.order + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.cells.chunks(self.order)
    }

    pub fn rotate_180(&self) -> Grid {
        let mut cells = self.cells.clone();
        cells.reverse();
        Grid {
            order: self.order,
            cells,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.cells.iter().map(|c| c.to_string().len()).max().unwrap_or(1);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" | "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Magic,
    SemiMagic,
    NotMagic,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Magic => "magic",
            Classification::SemiMagic => "semi-magic",
            Classification::NotMagic => "not-magic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub order: usize,
    pub row_sums: Vec<u128>,
    pub col_sums: Vec<u128>,
    /// Major (top-left to bottom-right) then minor diagonal.
    pub diag_sums: Vec<u128>,
    pub distinct: bool,
    pub all_square: bool,
    /// Values occurring more than once, ascending.
    pub repeated: Vec<u64>,
    /// Distinct line sums, ascending.
    pub constants: Vec<u128>,
    pub classification: Classification,
}

impl VerifyReport {
    pub fn magic_constant(&self) -> Option<u128> {
        (self.classification == Classification::Magic).then(|| self.constants[0])
    }
}

pub fn is_square(v: u64) -> bool {
    square_root(v).is_some()
}

pub fn square_root(v: u64) -> Option<u64> {
    let r = v.isqrt();
    (r * r == v).then_some(r)
}

/// Line sums and classification.
///
/// A grid is magic when every row, column and both diagonals share one sum and
/// no value repeats. It is semi-magic when it is not magic but every row and
/// column still share one sum; repeated entries and off-constant diagonals
/// are both tolerated. Anything else is not magic.
pub fn verify(grid: &Grid) -> VerifyReport {
    let n = grid.order;
    let row_sums: Vec<u128> = grid.rows().map(|r| r.iter().map(|&c| c as u128).sum()).collect();
    let col_sums: Vec<u128> = (0..n).map(|c| (0..n).map(|r| grid.get(r, c) as u128).sum()).collect();
    let major: u128 = (0..n).map(|i| grid.get(i, i) as u128).sum();
    let minor: u128 = (0..n).map(|i| grid.get(i, n - 1 - i) as u128).sum();
    let diag_sums = vec![major, minor];

    let mut counts = BTreeMap::new();
    for &c in &grid.cells {
        *counts.entry(c).or_insert(0usize) += 1;
    }
    let repeated: Vec<u64> = counts.iter().filter(|(_, &k)| k > 1).map(|(&v, _)| v).collect();
    let distinct = repeated.is_empty();
    let all_square = grid.cells.iter().all(|&c| is_square(c));

    let constants: BTreeSet<u128> = row_sums.iter().chain(&col_sums).chain(&diag_sums).copied().collect();
    let rows_cols: BTreeSet<u128> = row_sums.iter().chain(&col_sums).copied().collect();
    let classification = if constants.len() == 1 && distinct {
        Classification::Magic
    } else if rows_cols.len() == 1 {
        Classification::SemiMagic
    } else {
        Classification::NotMagic
    };

    VerifyReport {
        order: n,
        row_sums,
        col_sums,
        diag_sums,
        distinct,
        all_square,
        repeated,
        constants: constants.into_iter().collect(),
        classification,
    }
}

/// The `(x23, D1, D2)` encoding of a 3×3 grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainDecomposition {
    pub x23: u64,
    pub d1: i128,
    pub d2: i128,
    /// `D1 > 0`.
    pub canonical: bool,
    /// The source grid was turned 180° to make `D1` nonnegative.
    pub rotated: bool,
}

impl ChainDecomposition {
    pub fn center(&self) -> i128 {
        self.x23 as i128 + 3 * self.d1 + self.d2
    }

    pub fn magic_constant(&self) -> i128 {
        3 * self.center()
    }

    /// The grid this decomposition came from.
    pub fn regenerate(&self) -> Grid {
        let g =
            generate_from_chain(self.x23, self.d1, self.d2).expect("decomposition of a grid with nonnegative cells");
        if self.rotated {
            g.rotate_180()
        } else {
            g
        }
    }
}

// Chain order: each cell's (row, col) and its step from the previous cell.
const CHAIN: [(&str, usize, usize, Step); 9] = [
    ("x23", 1, 2, Step::Start),
    ("x31", 2, 0, Step::D1),
    ("x12", 0, 1, Step::D1),
    ("x11", 0, 0, Step::D2),
    ("x22", 1, 1, Step::D1),
    ("x33", 2, 2, Step::D1),
    ("x32", 2, 1, Step::D2),
    ("x13", 0, 2, Step::D1),
    ("x21", 1, 0, Step::D1),
];

const RELATIONS: [&str; 8] = [
    "x31 = x23 + D1",
    "x12 = x31 + D1",
    "x11 = x12 + D2",
    "x22 = x11 + D1",
    "x33 = x22 + D1",
    "x32 = x33 + D2",
    "x13 = x32 + D1",
    "x21 = x13 + D1",
];

#[derive(Clone, Copy)]
enum Step {
    Start,
    D1,
    D2,
}

/// Reads `D1 = x31 - x23` and `D2 = x11 - x12` off a 3×3 grid and checks all
/// eight chain relations. A grid with `D1 < 0` is first turned 180°, which
/// negates both steps.
pub fn chain_decompose(grid: &Grid) -> Result<ChainDecomposition, GridError> {
    if grid.order != 3 {
        return Err(GridError::NotOrder3(grid.order));
    }
    let rotated = grid.get(2, 0) < grid.get(1, 2);
    let g = if rotated { grid.rotate_180() } else { grid.clone() };
    let at = |r: usize, c: usize| g.get(r, c) as i128;
    let d1 = at(2, 0) - at(1, 2);
    let d2 = at(0, 0) - at(0, 1);

    let mut prev = at(1, 2);
    for (i, &(_, r, c, step)) in CHAIN.iter().enumerate().skip(1) {
        let expected = prev + if matches!(step, Step::D1) { d1 } else { d2 };
        let value = at(r, c);
        if value != expected {
            return Err(GridError::ChainViolation {
                relation: RELATIONS[i - 1],
                lhs: value,
                rhs: expected,
            });
        }
        prev = value;
    }
    Ok(ChainDecomposition {
        x23: g.get(1, 2),
        d1,
        d2,
        canonical: d1 > 0,
        rotated,
    })
}

/// Builds the 3×3 grid with chain `(x23, D1, D2)`. Every line sums to
/// `3(x23 + 3·D1 + D2)`; cells need not be distinct.
pub fn generate_from_chain(x23: u64, d1: i128, d2: i128) -> Result<Grid, GridError> {
    let mut cells = vec![0u64; 9];
    let mut v = x23 as i128;
    for &(name, r, c, step) in &CHAIN {
        v = match step {
            Step::Start => v,
            Step::D1 => v.checked_add(d1).ok_or(GridError::Overflow)?,
            Step::D2 => v.checked_add(d2).ok_or(GridError::Overflow)?,
        };
        if v < 0 {
            return Err(GridError::NegativeCell { cell: name, value: v });
        }
        cells[r * 3 + c] = u64::try_from(v).map_err(|_| GridError::Overflow)?;
    }
    Grid::new(3, cells)
}

/// The AP-pair view of a 3×3 grid of squares: three pairs summing to `D1`
/// separated by two gap progressions summing to `|D2|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApStructure {
    pub chain: ChainDecomposition,
    pub triples: [RootTriple; 3],
    pub pairs: [ApPair; 3],
    /// Between the first and second pair.
    pub gap_x: OddAp,
    /// Between the second and third pair.
    pub gap_y: OddAp,
    /// `D2 < 0`: the gaps run backwards from the start of the later pair to the
    /// end of the earlier one.
    pub primed: bool,
    pub layout: Layout,
    pub d1: Int,
    pub d2: Int,
    pub distinct_pairs: bool,
}

fn gap(end_of_prev: u64, start_of_next: u64) -> Result<OddAp, GridError> {
    use std::cmp::Ordering::*;
    let ap = match end_of_prev.cmp(&start_of_next) {
        Less => ap_between_squares(end_of_prev, start_of_next),
        Greater => ap_between_squares(start_of_next, end_of_prev),
        Equal => OddAp::new(2 * end_of_prev, 0),
    };
    ap.map_err(|_| GridError::Overflow)
}

pub fn to_ap_structure(grid: &Grid) -> Result<ApStructure, GridError> {
    let chain = chain_decompose(grid)?;
    let g = if chain.rotated { grid.rotate_180() } else { grid.clone() };
    let mut roots = [0u64; 9];
    for (i, &(name, r, c, _)) in CHAIN.iter().enumerate() {
        let value = g.get(r, c);
        roots[i] = square_root(value).ok_or(GridError::NotAllSquares { cell: name, value })?;
    }
    if chain.d1 == 0 {
        return Err(GridError::DegenerateChain);
    }
    let triples = [0, 3, 6].map(|i| RootTriple::new(roots[i], roots[i + 1], roots[i + 2]));
    let mut pairs = Vec::with_capacity(3);
    for t in triples {
        pairs.push(pair_from_roots(t.a, t.b, t.c).map_err(|_| GridError::DegenerateChain)?);
    }
    let pairs: [ApPair; 3] = pairs.try_into().expect("three pairs");
    let gap_x = gap(triples[0].c, triples[1].a)?;
    let gap_y = gap(triples[1].c, triples[2].a)?;
    let layout = classify_layout(&pairs).ok_or(GridError::Unclassifiable)?;
    let distinct_pairs = pairs[0] != pairs[1] && pairs[1] != pairs[2] && pairs[0] != pairs[2];
    Ok(ApStructure {
        chain,
        triples,
        pairs,
        gap_x,
        gap_y,
        primed: chain.d2 < 0,
        layout,
        d1: Int::from(chain.d1),
        d2: Int::from(chain.d2),
        distinct_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const LO_SHU: [u64; 9] = [4, 9, 2, 3, 5, 7, 8, 1, 6];
    pub(crate) const PARKER_ROOTS: [u64; 9] = [29, 1, 47, 41, 37, 1, 23, 41, 29];
    pub(crate) const EULER_ROOTS: [u64; 16] = [68, 29, 41, 37, 17, 31, 79, 32, 59, 28, 23, 61, 11, 77, 8, 49];

    fn lo_shu() -> Grid {
        Grid::new(3, LO_SHU.to_vec()).unwrap()
    }

    #[test]
    fn verifies_lo_shu() {
        let rep = verify(&lo_shu());
        assert_eq!(rep.classification, Classification::Magic);
        assert_eq!(rep.magic_constant(), Some(15));
        assert!(rep.distinct);
        assert!(!rep.all_square);
    }

    #[test]
    fn verifies_euler() {
        let rep = verify(&Grid::from_roots(4, &EULER_ROOTS).unwrap());
        assert_eq!(rep.classification, Classification::Magic);
        assert_eq!(rep.magic_constant(), Some(8515));
        assert!(rep.all_square);
    }

    #[test]
    fn verifies_parker() {
        let rep = verify(&Grid::from_roots(3, &PARKER_ROOTS).unwrap());
        assert_eq!(rep.classification, Classification::SemiMagic);
        assert_eq!(rep.constants, vec![3051, 4107]);
        assert_eq!(rep.repeated, vec![1, 29 * 29, 41 * 41]);
        assert_eq!(rep.diag_sums, vec![3051, 4107]);
        assert!(rep.all_square);
    }

    #[test]
    fn not_magic() {
        let g = Grid::new(3, (1..=9).collect()).unwrap();
        assert_eq!(verify(&g).classification, Classification::NotMagic);
    }

    #[test]
    fn parses_files() {
        let g = Grid::parse("3\n4 9 2\n3 5 7\n8 1 6\n", false).unwrap();
        assert_eq!(g, lo_shu());
        let g = Grid::parse("# parker\n3\n29 1 47 # row 1\n41 37 1\n23 41 29\n", true).unwrap();
        assert_eq!(g.get(0, 0), 841);
        assert_eq!(
            Grid::parse("3 1 2 3", false),
            Err(GridError::WrongCellCount { expected: 9, found: 3 })
        );
        assert_eq!(Grid::parse("2 1 2 3 4", false), Err(GridError::BadOrder(2)));
        assert!(matches!(Grid::parse("3 a", false), Err(GridError::Parse(_))));
        assert!(matches!(Grid::parse("", false), Err(GridError::Parse(_))));
        assert_eq!(Grid::parse(&g.to_text(), false).unwrap(), g);
    }

    #[test]
    fn decomposes_lo_shu() {
        let c = chain_decompose(&lo_shu()).unwrap();
        assert_eq!((c.x23, c.d1, c.d2), (7, 1, -5));
        assert!(c.canonical);
        assert!(!c.rotated);
        assert_eq!(c.magic_constant(), 15);
        assert_eq!(generate_from_chain(7, 1, -5).unwrap(), lo_shu());
    }

    #[test]
    fn negative_d1_is_rotated() {
        let flipped = lo_shu().rotate_180();
        let c = chain_decompose(&flipped).unwrap();
        assert!(c.rotated);
        assert_eq!((c.x23, c.d1, c.d2), (7, 1, -5));
        assert_eq!(c.regenerate(), flipped);
        // Read unrotated, the flipped grid has D1 = 2 - 3 and D2 = 6 - 1.
        assert_eq!((flipped.get(2, 0), flipped.get(1, 2)), (2, 3));
        assert_eq!(flipped.get(0, 0) - flipped.get(0, 1), 5);
    }

    #[test]
    fn degenerate_and_failing_chains() {
        let g = generate_from_chain(5, 0, 0).unwrap();
        assert!(g.cells().iter().all(|&c| c == 5));
        let rep = verify(&g);
        assert_eq!(rep.constants, vec![15]);
        assert_eq!(rep.classification, Classification::SemiMagic);

        let parker = Grid::from_roots(3, &PARKER_ROOTS).unwrap();
        assert!(matches!(
            chain_decompose(&parker),
            Err(GridError::ChainViolation { .. })
        ));
        assert!(matches!(
            to_ap_structure(&parker),
            Err(GridError::ChainViolation { .. })
        ));

        assert_eq!(
            generate_from_chain(1, -1, 0),
            Err(GridError::NegativeCell { cell: "x12", value: -1 })
        );
        assert!(matches!(
            generate_from_chain(0, -1, 0),
            Err(GridError::NegativeCell { cell: "x31", value: -1 })
        ));
        let g4 = Grid::from_roots(4, &EULER_ROOTS).unwrap();
        assert_eq!(chain_decompose(&g4), Err(GridError::NotOrder3(4)));
    }

    #[test]
    fn ap_structure_of_repeated_triples() {
        // (1, 5, 7) three times: D1 = 24 and D2 = 1 - 49 = -48.
        let g = generate_from_chain(1, 24, -48).unwrap();
        assert_eq!(g, Grid::from_roots(3, &[1, 7, 5, 7, 5, 1, 5, 1, 7]).unwrap());
        let s = to_ap_structure(&g).unwrap();
        assert_eq!(s.triples, [RootTriple::new(1, 5, 7); 3]);
        assert!(!s.distinct_pairs);
        assert!(s.primed);
        assert_eq!(s.layout, Layout::Reversed);
        assert_eq!(s.gap_x, ap_between_squares(1, 7).unwrap());
        assert_eq!(s.gap_x.sum(), Int::from(48));
        assert_eq!(s.d1, Int::from(24));

        assert_eq!(
            to_ap_structure(&lo_shu()),
            Err(GridError::NotAllSquares { cell: "x23", value: 7 })
        );
        let flat = generate_from_chain(4, 0, 0).unwrap();
        assert_eq!(to_ap_structure(&flat), Err(GridError::DegenerateChain));
    }

    #[test]
    fn ap_structure_with_forward_gaps() {
        // D2 > 0 makes all nine squares distinct, i.e. a true magic square of
        // squares, so the forward case can only be exercised piecewise.
        assert_eq!(gap(7, 11).unwrap(), ap_between_squares(7, 11).unwrap());
        assert_eq!(gap(11, 7).unwrap(), ap_between_squares(7, 11).unwrap());
        assert_eq!(gap(7, 7).unwrap(), OddAp::new(14, 0).unwrap());
    }

    #[test]
    fn small_magic_squares_all_follow_the_chain() {
        // Every magic 3×3 grid with entries ≤ 50, found by fixing the first row
        // and the center and solving the remaining cells from the line sums.
        let mut count = 0;
        for a in 0..=50i64 {
            for b in 0..=50 {
                for c in 0..=50 {
                    let k = a + b + c;
                    if k % 3 != 0 {
                        continue;
                    }
                    let e = k / 3;
                    let i = k - a - e;
                    let g_ = k - c - e;
                    let d = k - a - g_;
                    let f = k - d - e;
                    let h = k - b - e;
                    let cells = [a, b, c, d, e, f, g_, h, i];
                    if cells.iter().any(|&v| !(0..=50).contains(&v)) {
                        continue;
                    }
                    let grid = Grid::new(3, cells.iter().map(|&v| v as u64).collect()).unwrap();
                    let rep = verify(&grid);
                    if rep.classification != Classification::Magic {
                        continue;
                    }
                    count += 1;
                    let dec = chain_decompose(&grid).unwrap();
                    assert_eq!(dec.magic_constant(), k as i128);
                    assert_eq!(dec.center(), e as i128);
                    assert_eq!(dec.regenerate(), grid);
                }
            }
        }
        assert!(count > 0);
    }

    proptest! {
        #[test]
        fn chain_round_trip(x23 in 0u64..=1000, d1 in -1000i128..=1000, d2 in -1000i128..=1000) {
            let Ok(grid) = generate_from_chain(x23, d1, d2) else { return Ok(()) };
            let rep = verify(&grid);
            let center = x23 as i128 + 3 * d1 + d2;
            prop_assert_eq!(rep.constants, vec![(3 * center) as u128]);
            let dec = chain_decompose(&grid).unwrap();
            prop_assert_eq!(dec.regenerate(), grid);
            if d1 >= 0 {
                prop_assert_eq!((dec.x23, dec.d1, dec.d2), (x23, d1, d2));
                prop_assert!(!dec.rotated);
            } else {
                // Reading the chain backwards negates both steps.
                prop_assert_eq!((dec.d1, dec.d2), (-d1, -d2));
                prop_assert!(dec.rotated);
            }
        }
    }
}

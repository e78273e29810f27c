//! Exact phase-one simplex for `{x >= 0 : A x = b}` with Bland's rule.
//!
//! The tableau is kept fraction-free: every entry is the true rational entry
//! times the determinant `D` of the current basis, and a pivot divides
//! exactly by the previous `D`. The artificial columns sit after the
//! original ones, so the dual vector of an infeasible instance can be read
//! off their reduced costs.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A basic feasible solution.
    Feasible(Vec<Rat>),
    /// A Farkas vector `y` with `y^T A <= 0` columnwise and `y^T b > 0`.
    Infeasible(Vec<Rat>),
}

/// Decides feasibility of `A x = b, x >= 0`. `columns[j]` is column `j` of `A`.
pub fn solve_feasibility(columns: &[Vec<Rat>], b: &[Rat]) -> Feasibility {
    let setup = Setup::new(columns, b);
    let end = run::<i128>(&setup)
        .or_else(|| run::<BigInt>(&setup))
        .expect("arbitrary precision cannot overflow");
    let (n, m) = (setup.n, setup.m);
    let as_rat = |v: &BigInt| Rat::new(v.clone(), end.det.clone());
    if end.infeasible {
        let y = (0..m)
            .map(|r| {
                (Rat::one() - as_rat(&end.cost[r])) * Rat::from_integer(setup.scale[r].clone())
            })
            .collect();
        return Feasibility::Infeasible(y);
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &j) in end.basis.iter().enumerate() {
        if j < n {
            x[j] = as_rat(&end.rhs[r]) / Rat::from_integer(setup.big_l.clone());
        }
    }
    Feasibility::Feasible(x)
}

/// The integral starting tableau.
struct Setup {
    n: usize,
    m: usize,
    rows: Vec<Vec<BigInt>>,
    cost: Vec<BigInt>,
    scale: Vec<BigInt>,
    big_l: BigInt,
}

impl Setup {
    fn new(columns: &[Vec<Rat>], b: &[Rat]) -> Self {
        let m = b.len();
        let n = columns.len();
        let width = n + m + 1;
        let rhs = n + m;
        // solve A x' = L b with x = x' / L; row r is also scaled by scale[r]
        // (sign included) so that it is integral with a non-negative right side
        let big_l = b.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut scale = Vec::with_capacity(m);
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m);
        for r in 0..m {
            let mut s = columns
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c[r].denom()));
            if b[r].is_negative() {
                s = -s;
            }
            let to_int = |v: &Rat| (v * Rat::from_integer(s.clone())).to_integer();
            let mut row = vec![BigInt::zero(); width];
            for (j, col) in columns.iter().enumerate() {
                row[j] = to_int(&col[r]);
            }
            row[n + r] = BigInt::one();
            row[rhs] = (&b[r] * Rat::from_integer(&s * &big_l)).to_integer();
            rows.push(row);
            scale.push(s);
        }
        // reduced costs of the phase-one objective; cost[rhs] holds minus its value
        let mut cost = vec![BigInt::zero(); width];
        for row in &rows {
            for j in (0..n).chain(core::iter::once(rhs)) {
                cost[j] -= &row[j];
            }
        }
        Setup {
            n,
            m,
            rows,
            cost,
            scale,
            big_l,
        }
    }
}

/// What the post-processing needs from a finished tableau.
struct End {
    infeasible: bool,
    basis: Vec<usize>,
    det: BigInt,
    rhs: Vec<BigInt>,
    /// Reduced costs of the artificial columns (scaled by `det`).
    cost: Vec<BigInt>,
}

trait Entry: Clone + Ord + Zero + One {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn times(&self, other: &Self) -> Option<Self>;
    fn minus(&self, other: &Self) -> Option<Self>;
    fn over(&self, other: &Self) -> Self;
}

impl Entry for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        num_traits::ToPrimitive::to_i128(v)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn times(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn minus(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn over(&self, other: &Self) -> Self {
        self / other
    }
}

impl Entry for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn times(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn minus(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn over(&self, other: &Self) -> Self {
        self / other
    }
}

/// Bland's rule on the fraction-free tableau. `None` on overflow of `T`.
fn run<T: Entry>(setup: &Setup) -> Option<End> {
    let (n, m) = (setup.n, setup.m);
    let rhs = n + m;
    let zero = T::zero();
    let convert = |row: &[BigInt]| row.iter().map(T::from_big).collect::<Option<Vec<T>>>();
    let mut rows: Vec<Vec<T>> = setup
        .rows
        .iter()
        .map(|r| convert(r))
        .collect::<Option<_>>()?;
    let mut cost = convert(&setup.cost)?;
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut det = T::one();

    while let Some(enter) = (0..n + m).find(|&j| cost[j] < zero) {
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if rows[r][enter] <= zero {
                continue;
            }
            let better = match leave {
                None => true,
                Some(best) => {
                    // rhs_r / a_r against rhs_best / a_best, denominators positive
                    let lhs = rows[r][rhs].times(&rows[best][enter])?;
                    let rhs_v = rows[best][rhs].times(&rows[r][enter])?;
                    lhs < rhs_v || (lhs == rhs_v && basis[r] < basis[best])
                }
            };
            if better {
                leave = Some(r);
            }
        }
        // phase one is bounded below by zero, so some row always qualifies
        let pr = leave.expect("phase-one objective is bounded");
        det = pivot(&mut rows, &mut cost, pr, enter, &det)?;
        basis[pr] = enter;
    }

    Some(End {
        infeasible: cost[rhs] < zero,
        basis,
        det: det.to_big(),
        rhs: rows.iter().map(|r| r[rhs].to_big()).collect(),
        cost: cost[n..n + m].iter().map(T::to_big).collect(),
    })
}

/// Fraction-free pivot on `(pr, pc)`; returns the new basis determinant.
fn pivot<T: Entry>(
    rows: &mut [Vec<T>],
    cost: &mut [T],
    pr: usize,
    pc: usize,
    det: &T,
) -> Option<T> {
    let pivot_row = rows[pr].clone();
    let p = pivot_row[pc].clone();
    let zero = T::zero();
    let unit = det.is_one();
    let update = |row: &mut [T]| -> Option<()> {
        let factor = row[pc].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            let mut t = p.times(v)?;
            if factor != zero && *pv != zero {
                t = t.minus(&factor.times(pv)?)?;
            }
            *v = if unit { t } else { t.over(det) };
        }
        Some(())
    };
    for (r, row) in rows.iter_mut().enumerate() {
        if r != pr {
            update(row)?;
        }
    }
    update(cost)?;
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn cols(a: &[&[i64]]) -> Vec<Vec<Rat>> {
        // input given row-wise
        let m = a.len();
        let n = a[0].len();
        (0..n)
            .map(|j| (0..m).map(|i| int(a[i][j])).collect())
            .collect()
    }

    fn check_farkas(columns: &[Vec<Rat>], b: &[Rat], y: &[Rat]) {
        for col in columns {
            let s: Rat = col.iter().zip(y).map(|(a, y)| a * y).sum();
            assert!(!s.is_positive());
        }
        let s: Rat = b.iter().zip(y).map(|(a, y)| a * y).sum();
        assert!(s.is_positive());
    }

    #[test]
    fn feasible_system() {
        let a = cols(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = [int(1), int(1)];
        match solve_feasibility(&a, &b) {
            Feasibility::Feasible(x) => {
                assert!(x.iter().all(|v| !v.is_negative()));
                assert_eq!(&x[0] + &x[1], int(1));
                assert_eq!(&x[1] + &x[2], int(1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_system_yields_farkas_vector() {
        // x1 + x2 = 1, x1 + x2 = 2
        let a = cols(&[&[1, 1], &[1, 1]]);
        let b = [int(1), int(2)];
        match solve_feasibility(&a, &b) {
            Feasibility::Infeasible(y) => check_farkas(&a, &b, &y),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_is_flipped() {
        // x1 - x2 = -1/2, x1 + x2 = 1
        let a = cols(&[&[1, -1], &[1, 1]]);
        let b = [rat(-1, 2), int(1)];
        assert_eq!(
            solve_feasibility(&a, &b),
            Feasibility::Feasible(vec![rat(1, 4), rat(3, 4)])
        );
        // x1 - x2 = -2, x1 + x2 = 1 needs x1 < 0
        let b = [int(-2), int(1)];
        match solve_feasibility(&a, &b) {
            Feasibility::Infeasible(y) => check_farkas(&a, &b, &y),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_candidate() {
        // Beale-style degenerate system; Bland's rule must terminate.
        let a: Vec<Vec<Rat>> = vec![
            vec![rat(1, 4), rat(1, 2), int(0)],
            vec![int(-8), int(-12), int(1)],
            vec![int(-1), rat(-1, 2), int(0)],
            vec![int(9), int(3), int(0)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ];
        let b = [int(0), int(0), int(1)];
        assert!(matches!(
            solve_feasibility(&a, &b),
            Feasibility::Feasible(_)
        ));
    }

    #[test]
    fn huge_right_sides_fall_back_to_big_integers() {
        let big = BigInt::from(10).pow(40);
        let third = Rat::new(BigInt::one(), &big * BigInt::from(3));
        let a = cols(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = [third.clone(), Rat::one() - &third];
        assert!(run::<i128>(&Setup::new(&a, &b)).is_none());
        match solve_feasibility(&a, &b) {
            Feasibility::Feasible(x) => {
                assert_eq!(&x[0] + &x[1], b[0]);
                assert_eq!(&x[1] + &x[2], b[1]);
                assert!(x.iter().all(|v| !v.is_negative()));
            }
            other => panic!("{other:?}"),
        }
        let b = [-third, int(1)];
        match solve_feasibility(&a, &b) {
            Feasibility::Infeasible(y) => check_farkas(&a, &b, &y),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn machine_and_big_tableaux_agree() {
        let a = cols(&[&[1, -1, 1, 1], &[1, 1, -1, 1], &[1, 1, 1, 1]]);
        for b in [[rat(1, 3), rat(-1, 5), int(1)], [int(2), int(0), int(1)]] {
            let setup = Setup::new(&a, &b);
            let small = run::<i128>(&setup).unwrap();
            let big = run::<BigInt>(&setup).unwrap();
            assert_eq!(small.basis, big.basis);
            assert_eq!(small.det, big.det);
            assert_eq!(small.rhs, big.rhs);
            assert_eq!(small.cost, big.cost);
            assert_eq!(small.infeasible, big.infeasible);
        }
    }
}

//! Screening by the integer inequalities `Σ_ij ρ_ij e_i e_j >= 1` over odd-sum
//! vectors `e`, and membership in `E_N`.
//!
//! Every realisable covariance passes every odd-sum inequality, so a
//! violation is a proof of non-realisability. A pass at a finite bound proves
//! nothing.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{check_n, FullMatrix, IntVector};
use crate::rat::{common_denominator, Rat};

pub const DEFAULT_BOUND: u32 = 2;

/// `Σ_{i,j} ρ_ij e_i e_j`, diagonal included.
pub fn quad_form(rho: &FullMatrix, e: &IntVector) -> Result<Rat> {
    check_n(rho.n(), e.n())?;
    Ok(rho.quadratic(&e.to_rats()))
}

/// Membership in `E_N = {e : Σ u_i e_i = 1 for some u ∈ {-1,1}^N}`, with a
/// signing when one exists.
///
/// Solved as subset sum: `u_i = -1` exactly on a set `S` with
/// `Σ_S e_i = (Σ e_i - 1) / 2`.
pub fn in_en(e: &IntVector) -> (bool, Option<Vec<i8>>) {
    let total = e.sum();
    if total.is_even() || e.n() == 0 {
        return (false, None);
    }
    let target: BigInt = (total - BigInt::one()) / 2;
    // reachable[k] = sums attainable by subsets of the first k coordinates
    let mut reachable: Vec<BTreeSet<BigInt>> = vec![BTreeSet::from([BigInt::zero()])];
    for c in &e.coords {
        let prev = reachable.last().expect("seeded");
        let mut next = prev.clone();
        next.extend(prev.iter().map(|s| s + c));
        reachable.push(next);
    }
    if !reachable[e.n()].contains(&target) {
        return (false, None);
    }
    let mut signs = vec![1i8; e.n()];
    let mut rest = target;
    for k in (0..e.n()).rev() {
        let without = &rest - &e.coords[k];
        if reachable[k].contains(&without) {
            signs[k] = -1;
            rest = without;
        }
    }
    debug_assert!(rest.is_zero());
    (true, Some(signs))
}

/// Odd-sum integer vectors with max-norm at most `bound`, one per pair
/// `{e, -e}` (first nonzero coordinate positive). Ordered by max-norm, then
/// lexicographically.
pub fn enumerate_odd(n: usize, bound: u32) -> Result<OddVectors> {
    if bound == 0 {
        return Err(Error::InvalidBound);
    }
    Ok(OddVectors::new(n, bound))
}

#[derive(Clone, Debug)]
pub struct OddVectors {
    n: usize,
    bound: i64,
    norm: i64,
    current: Option<Vec<i64>>,
}

impl OddVectors {
    fn new(n: usize, bound: u32) -> Self {
        let bound = i64::from(bound);
        OddVectors {
            n,
            bound,
            norm: 1,
            current: (n > 0).then(|| vec![-1; n]),
        }
    }

    fn advance(cur: &mut [i64], m: i64) -> bool {
        for k in (0..cur.len()).rev() {
            if cur[k] < m {
                cur[k] += 1;
                return true;
            }
            cur[k] = -m;
        }
        false
    }

    fn accept(v: &[i64], m: i64) -> bool {
        let first = v.iter().find(|&&c| c != 0);
        matches!(first, Some(&c) if c > 0)
            && v.iter().any(|c| c.abs() == m)
            && v.iter().sum::<i64>().rem_euclid(2) == 1
    }
}

impl Iterator for OddVectors {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            let cur = self.current.as_mut()?;
            let m = self.norm;
            let candidate = Self::accept(cur, m).then(|| cur.clone());
            if !Self::advance(cur, m) {
                self.norm += 1;
                self.current = (self.norm <= self.bound).then(|| vec![-self.norm; self.n]);
            }
            if candidate.is_some() {
                return candidate;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScreenReport {
    pub verdict: Verdict,
    /// Minimiser of the form, present iff the verdict is a violation.
    pub witness: Option<IntVector>,
    /// Minimum of the form over the screened vectors.
    pub value: Option<Rat>,
    pub bound_used: u32,
    pub examined: u64,
}

/// Evaluates every screened vector and reports the global minimum; the first
/// minimiser in enumeration order wins ties.
pub fn screen(rho: &FullMatrix, bound: u32, restrict_to_en: bool) -> Result<ScreenReport> {
    if !rho.is_unit_diagonal() {
        let index = (0..rho.n()).find(|&i| !rho.get(i, i).is_one()).unwrap_or(0);
        return Err(Error::BadDiagonal { index });
    }
    let n = rho.n();
    let form = ScaledForm::new(rho);
    let mut best: Option<(BigInt, Vec<i64>)> = None;
    let mut examined = 0u64;
    for e in enumerate_odd(n, bound)? {
        if restrict_to_en && !in_en(&IntVector::from_i64(&e)).0 {
            continue;
        }
        examined += 1;
        let value = form.eval(&e);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, e));
        }
    }
    let (value, witness) = match best {
        Some((v, e)) => (Some(Rat::new(v, form.den.clone())), Some(e)),
        None => (None, None),
    };
    let violated = value.as_ref().is_some_and(|v| *v < Rat::one());
    Ok(ScreenReport {
        verdict: if violated {
            Verdict::Violation
        } else {
            Verdict::Pass
        },
        witness: witness
            .filter(|_| violated)
            .map(|e| IntVector::from_i64(&e)),
        value,
        bound_used: bound,
        examined,
    })
}

/// `ρ = M / den` with `M` integral, evaluated in `i128` when it fits.
struct ScaledForm {
    den: BigInt,
    big: Vec<Vec<BigInt>>,
    small: Option<Vec<Vec<i64>>>,
}

impl ScaledForm {
    fn new(rho: &FullMatrix) -> Self {
        let den = common_denominator(rho.rows().flatten());
        let big: Vec<Vec<BigInt>> = rho
            .rows()
            .map(|row| row.iter().map(|v| v.numer() * (&den / v.denom())).collect())
            .collect();
        let small = big
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.to_i64().filter(|x| x.unsigned_abs() < 1 << 40))
                    .collect()
            })
            .collect();
        ScaledForm { den, big, small }
    }

    fn eval(&self, e: &[i64]) -> BigInt {
        match &self.small {
            Some(m) => {
                let mut acc: i128 = 0;
                for (i, row) in m.iter().enumerate() {
                    if e[i] == 0 {
                        continue;
                    }
                    let inner: i128 = row
                        .iter()
                        .zip(e)
                        .map(|(&mij, &ej)| i128::from(mij) * i128::from(ej))
                        .sum();
                    acc += inner * i128::from(e[i]);
                }
                BigInt::from(acc)
            }
            None => {
                let mut acc = BigInt::zero();
                for (i, row) in self.big.iter().enumerate() {
                    for (j, mij) in row.iter().enumerate() {
                        acc += mij * e[i] * e[j];
                    }
                }
                acc
            }
        }
    }
}

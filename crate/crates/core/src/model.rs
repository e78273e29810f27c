//! Domain types for unit covariances on a finite index set `[N]`, and the
//! elementary transforms between them.
//!
//! A unit covariance is a symmetric matrix with unit diagonal. Everything is
//! carried by its supra-diagonal part, a [`TriArray`] of `d_N = N(N-1)/2`
//! entries stored row-major: `(1,2), (1,3), ..., (1,N), (2,3), ..., (N-1,N)`.
//! Indices in this API are zero-based.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{int, Rat};

/// Number of supra-diagonal pairs, `d_N`.
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `i < j`, in row-major order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j`, in storage order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// A binary vector `u` in `{-1, +1}^N`, stored in the gauge `u_1 = +1`.
///
/// Ordering is lexicographic with `+1` before `-1`, which is also the order
/// in which vertices are enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    signs: Vec<i8>,
}

impl SignVector {
    /// Builds the canonical representative of `{u, -u}`.
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSign { index });
        }
        let mut signs = signs;
        if signs[0] == -1 {
            signs.iter_mut().for_each(|s| *s = -*s);
        }
        Ok(SignVector { signs })
    }

    /// The `index`-th canonical sign vector of length `n` in enumeration order.
    /// Bit `n - 1 - k` of `index` set means `u_k = -1`.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(n >= 1 && (n - 1) < 64 && index < (1u64 << (n - 1)));
        let signs = (0..n)
            .map(|k| {
                if k > 0 && (index >> (n - 1 - k)) & 1 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        SignVector { signs }
    }

    /// Inverse of [`SignVector::from_index`].
    pub fn index(&self) -> u64 {
        self.signs[1..]
            .iter()
            .fold(0u64, |acc, &s| (acc << 1) | u64::from(s == -1))
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn get(&self, k: usize) -> i8 {
        self.signs[k]
    }

    /// Componentwise product `u * w`, re-canonicalised.
    pub fn multiply(&self, other: &SignVector) -> Result<SignVector> {
        check_n(self.n(), other.n())?;
        SignVector::new(
            self.signs
                .iter()
                .zip(&other.signs)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }
}

impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        // -s maps +1 below -1
        self.signs
            .iter()
            .map(|s| -s)
            .cmp(other.signs.iter().map(|s| -s))
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point of the space of supra-diagonal triangular arrays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriArray {
    n: usize,
    entries: Vec<Rat>,
}

impl TriArray {
    pub fn new(n: usize, entries: Vec<Rat>) -> Result<Self> {
        check_n(pair_count(n), entries.len())?;
        Ok(TriArray { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        TriArray {
            n,
            entries: vec![Rat::zero(); pair_count(n)],
        }
    }

    pub fn from_ints(n: usize, entries: &[i64]) -> Result<Self> {
        TriArray::new(n, entries.iter().map(|&v| int(v)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.entries
    }

    /// Entry at `(i, j)` for `i != j`, in either order.
    pub fn at(&self, i: usize, j: usize) -> &Rat {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        &self.entries[pair_index(self.n, a, b)]
    }

    pub fn dot(&self, other: &TriArray) -> Result<Rat> {
        check_n(self.n, other.n)?;
        Ok(dot(&self.entries, &other.entries))
    }

    pub fn norm_sq(&self) -> Rat {
        dot(&self.entries, &self.entries)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }
}

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Symmetric `N x N` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullMatrix {
    n: usize,
    values: Vec<Rat>,
}

impl FullMatrix {
    /// Validates squareness and symmetry.
    pub fn new(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            check_n(n, row.len())?;
        }
        let asymmetric = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| rows[i][j] != rows[j][i]);
        if let Some((row, col)) = asymmetric {
            return Err(Error::NotSymmetric { row, col });
        }
        Ok(FullMatrix {
            n,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        complete(&TriArray::zeros(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.values[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rat]> {
        self.values.chunks(self.n.max(1)).take(self.n)
    }

    pub fn is_unit_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_one())
    }

    pub fn is_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_zero())
    }

    fn check_diagonal(&self, expected: &Rat) -> Result<()> {
        match (0..self.n).find(|&i| self.get(i, i) != expected) {
            Some(index) => Err(Error::BadDiagonal { index }),
            None => Ok(()),
        }
    }

    /// `M * x`.
    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        self.rows().map(|row| dot(row, x)).collect()
    }

    /// `x^T M x`.
    pub fn quadratic(&self, x: &[Rat]) -> Rat {
        dot(&self.mul_vec(x), x)
    }
}

/// An integer vector `e` in `Z^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector {
    pub coords: Vec<BigInt>,
}

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntVector { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntVector {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn sum(&self) -> BigInt {
        self.coords.iter().sum()
    }

    pub fn norm_sq(&self) -> BigInt {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// `e ⊘ e`, the pairwise products `e_i e_j` for `i < j`.
    pub fn outer_tri(&self) -> TriArray {
        let n = self.n();
        let entries = pairs(n)
            .map(|(i, j)| Rat::from_integer(&self.coords[i] * &self.coords[j]))
            .collect();
        TriArray { n, entries }
    }

    /// Flips the sign so that the first nonzero coordinate is positive.
    pub fn canonical(mut self) -> Self {
        if let Some(first) = self.coords.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                self.coords.iter_mut().for_each(|c| *c = -&*c);
            }
        }
        self
    }

    pub fn to_rats(&self) -> Vec<Rat> {
        self.coords.iter().cloned().map(Rat::from_integer).collect()
    }
}

/// A finitely supported law on sign vectors, i.e. a unit field given by its
/// atoms. Atoms are kept sorted by sign vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mixture {
    atoms: Vec<(Rat, SignVector)>,
}

impl Mixture {
    /// Validates: nonempty, shared `n`, positive weights summing to one,
    /// pairwise distinct atoms.
    pub fn new(atoms: Vec<(Rat, SignVector)>) -> Result<Self> {
        let mixture = Mixture::from_parts_unchecked(atoms);
        mixture.validate()?;
        Ok(mixture)
    }

    /// Merges repeated atoms and drops zero weights before validating.
    pub fn from_weighted(atoms: Vec<(Rat, SignVector)>) -> Result<Self> {
        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut merged: Vec<(Rat, SignVector)> = Vec::with_capacity(atoms.len());
        for (w, u) in atoms {
            match merged.last_mut() {
                Some(last) if last.1 == u => last.0 += w,
                _ => merged.push((w, u)),
            }
        }
        merged.retain(|(w, _)| !w.is_zero());
        Mixture::new(merged)
    }

    /// No validation beyond sorting. Use [`Mixture::validate`] before trusting
    /// the result; certificate verification does so.
    pub fn from_parts_unchecked(mut atoms: Vec<(Rat, SignVector)>) -> Self {
        atoms.sort_by(|a, b| a.1.cmp(&b.1));
        Mixture { atoms }
    }

    pub fn validate(&self) -> Result<()> {
        let first = self.atoms.first().ok_or(Error::Empty)?;
        let n = first.1.n();
        let mut total = Rat::zero();
        for (k, (w, u)) in self.atoms.iter().enumerate() {
            check_n(n, u.n())?;
            if !w.is_positive() {
                return Err(Error::InvalidMixture("weights must be positive"));
            }
            if k > 0 && self.atoms[k - 1].1 == *u {
                return Err(Error::InvalidMixture("atoms must be distinct"));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::InvalidMixture("weights must sum to one"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.atoms[0].1.n()
    }

    pub fn atoms(&self) -> &[(Rat, SignVector)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Point mass at `u`.
    pub fn dirac(u: SignVector) -> Self {
        Mixture {
            atoms: vec![(Rat::one(), u)],
        }
    }
}

/// A facet `{x : <x, normal> <= offset}` of the polytope of realisable
/// arrays. The normal is primitive (gcd 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: Rat,
}

pub(crate) fn check_n(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// The vertex `u ⊘ u = (u_i u_j)_{i<j}`.
pub fn outer_tri(u: &SignVector) -> TriArray {
    let n = u.n();
    let entries = pairs(n)
        .map(|(i, j)| int(i64::from(u.get(i) * u.get(j))))
        .collect();
    TriArray { n, entries }
}

/// Switching `θ^u`: entry `(i, j)` becomes `u_i u_j ρ_ij`.
pub fn switch(rho: &TriArray, u: &SignVector) -> Result<TriArray> {
    check_n(rho.n, u.n())?;
    let entries = pairs(rho.n)
        .zip(&rho.entries)
        .map(
            |((i, j), v)| {
                if u.get(i) == u.get(j) {
                    v.clone()
                } else {
                    -v
                }
            },
        )
        .collect();
    Ok(TriArray { n: rho.n, entries })
}

/// Simultaneous relabelling of the index set: entry `(i, j)` of the result is
/// entry `(perm[i], perm[j])` of `rho`.
pub fn permute(rho: &TriArray, perm: &[usize]) -> Result<TriArray> {
    check_n(rho.n, perm.len())?;
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || core::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidMixture("not a permutation"));
        }
    }
    let entries = pairs(rho.n)
        .map(|(i, j)| rho.at(perm[i], perm[j]).clone())
        .collect();
    Ok(TriArray { n: rho.n, entries })
}

/// `Φ(γ) = 1 - 4γ`, from zero-diagonal covariograms to unit-diagonal
/// covariances.
pub fn phi(gamma: &FullMatrix) -> Result<FullMatrix> {
    gamma.check_diagonal(&Rat::zero())?;
    let four = int(4);
    Ok(map_entries(gamma, |i, j, v| {
        if i == j {
            Rat::one()
        } else {
            Rat::one() - &four * v
        }
    }))
}

/// Inverse of [`phi`]: `γ = (1 - ρ) / 4`, diagonal zero.
pub fn phi_inv(rho: &FullMatrix) -> Result<FullMatrix> {
    rho.check_diagonal(&Rat::one())?;
    let quarter = Rat::new(BigInt::one(), BigInt::from(4));
    Ok(map_entries(rho, |i, j, v| {
        if i == j {
            Rat::zero()
        } else {
            (Rat::one() - v) * &quarter
        }
    }))
}

fn map_entries(m: &FullMatrix, f: impl Fn(usize, usize, &Rat) -> Rat) -> FullMatrix {
    let n = m.n;
    let values = (0..n * n).map(|k| f(k / n, k % n, &m.values[k])).collect();
    FullMatrix { n, values }
}

/// Supra-diagonal part of a unit-diagonal symmetric matrix.
pub fn embed(rho: &FullMatrix) -> Result<TriArray> {
    rho.check_diagonal(&Rat::one())?;
    let entries = pairs(rho.n).map(|(i, j)| rho.get(i, j).clone()).collect();
    Ok(TriArray { n: rho.n, entries })
}

/// Unit-diagonal symmetric completion of a triangular array.
pub fn complete(t: &TriArray) -> FullMatrix {
    let n = t.n;
    let values = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if i == j {
                Rat::one()
            } else {
                t.at(i, j).clone()
            }
        })
        .collect();
    FullMatrix { n, values }
}

//! H-description of the polytope of realisable arrays: facet enumeration,
//! facet verification, facet membership and the product-form test for
//! normals.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hull::{homogeneous_rank, HullFacet, IncrementalHull};
use crate::model::{check_n, pair_count, pairs, Facet, IntVector, TriArray};
use crate::rat::{sign_of, Rat};
use crate::vertices::{enumerate_vertices, vertex_max, VertexSet};

pub const MIN_FACET_N: usize = 3;
pub const MAX_FACET_N: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub n: usize,
    pub facets: Vec<Facet>,
    /// Per facet, the sorted indices of its vertices in enumeration order.
    pub incidence: Vec<Vec<usize>>,
}

impl HRep {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }
}

fn check_facet_n(n: usize) -> Result<()> {
    if (MIN_FACET_N..=MAX_FACET_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedSize {
            n,
            min: MIN_FACET_N,
            max: MAX_FACET_N,
        })
    }
}

/// The vertices of `U_N*` as integer points in enumeration order.
pub fn vertex_points(n: usize) -> Result<Vec<Vec<i64>>> {
    let set = enumerate_vertices(n)?;
    Ok(set
        .vertices()
        .iter()
        .map(|v| v.coords.iter().map(|&c| i64::from(c)).collect())
        .collect())
}

/// A fresh incremental hull over the vertices of `U_N*`, for callers that
/// want to drive (and checkpoint) the insertions themselves.
pub fn facet_hull(n: usize) -> Result<IncrementalHull> {
    check_facet_n(n)?;
    IncrementalHull::new(vertex_points(n)?)
}

/// Complete, irredundant facet list of `U_N*` for `3 <= n <= 7`.
/// `n = 7` takes a long time.
pub fn enumerate_facets(n: usize) -> Result<HRep> {
    let mut hull = facet_hull(n)?;
    hull.run()?;
    finish_hrep(n, hull.into_facets())
}

/// Canonical ordering and offset check for the facets of a finished hull.
pub fn finish_hrep(n: usize, facets: Vec<HullFacet>) -> Result<HRep> {
    check_facet_n(n)?;
    let set = enumerate_vertices(n)?;
    let mut facets = facets;
    facets.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
    facets.dedup_by(|a, b| a.normal == b.normal);
    let mut out = Vec::with_capacity(facets.len());
    let mut incidence = Vec::with_capacity(facets.len());
    for f in facets {
        let offset = Rat::from_integer(f.offset.into());
        debug_assert_eq!(max_over_vertices(&set, &f.normal), offset);
        incidence.push(
            (0..set.len())
                .filter(|&k| f.incidence >> k & 1 == 1)
                .collect(),
        );
        out.push(Facet {
            normal: f.normal,
            offset,
        });
    }
    Ok(HRep {
        n,
        facets: out,
        incidence,
    })
}

fn max_over_vertices(set: &VertexSet, normal: &[i64]) -> Rat {
    let values = set.vertices().iter().map(|v| v.dot_i64(normal));
    Rat::from_integer(values.max().unwrap_or(0).into())
}

/// Checks that `<x, normal> <= offset` is valid on every vertex, tight on
/// some, and that the tight vertices affinely span a hyperplane.
pub fn verify_facet(n: usize, normal: &[i64], offset: &Rat) -> bool {
    let Ok(set) = enumerate_vertices(n) else {
        return false;
    };
    if normal.len() != pair_count(n) || normal.iter().all(|&c| c == 0) {
        return false;
    }
    if max_over_vertices(&set, normal) != *offset {
        return false;
    }
    let tight: Vec<Vec<i64>> = set
        .vertices()
        .iter()
        .filter(|v| Rat::from_integer(v.dot_i64(normal).into()) == *offset)
        .map(|v| v.coords.iter().map(|&c| i64::from(c)).collect())
        .collect();
    facet_rank(&tight) + 1 == pair_count(n)
}

/// Affine rank of a set of points (dimension of their affine hull).
pub fn facet_rank(points: &[Vec<i64>]) -> usize {
    homogeneous_rank(points).saturating_sub(1)
}

/// Offset of the supporting hyperplane with the given outer normal.
pub fn supporting_offset(n: usize, normal: &[i64]) -> Result<Rat> {
    let set = enumerate_vertices(n)?;
    let dir = TriArray::from_ints(n, normal)?;
    Ok(vertex_max(&set, &dir)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    /// Indices of the tight facets.
    Boundary(Vec<usize>),
    /// Index of the first violated facet.
    Outside(usize),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        !matches!(self, Membership::Outside(_))
    }
}

pub fn membership_by_facets(rho: &TriArray, h: &HRep) -> Result<Membership> {
    check_n(h.n, rho.n())?;
    let mut tight = Vec::new();
    for (k, f) in h.facets.iter().enumerate() {
        let lhs = f
            .normal
            .iter()
            .zip(rho.entries())
            .fold(Rat::zero(), |acc, (&c, x)| {
                if c == 0 {
                    acc
                } else {
                    acc + x * Rat::from_integer(c.into())
                }
            });
        match lhs.cmp(&f.offset) {
            core::cmp::Ordering::Greater => return Ok(Membership::Outside(k)),
            core::cmp::Ordering::Equal => tight.push(k),
            core::cmp::Ordering::Less => {}
        }
    }
    Ok(if tight.is_empty() {
        Membership::Inside
    } else {
        Membership::Boundary(tight)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotProductReason {
    /// The nonzero entries do not form a single complete graph.
    ZeroPattern,
    /// Some triangle has an odd number of negative entries.
    SignInconsistency,
    /// Magnitudes are not those of a rank-one matrix.
    MinorInconsistency,
}

/// A real vector `v` given exactly as `v_i = signs[i] * sqrt(squares[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductVector {
    pub signs: Vec<i8>,
    pub squares: Vec<Rat>,
}

impl ProductVector {
    /// `v` itself when every coordinate is rational.
    pub fn as_rationals(&self) -> Option<Vec<Rat>> {
        self.signs
            .iter()
            .zip(&self.squares)
            .map(|(&s, q)| {
                let num = exact_sqrt(q.numer())?;
                let den = exact_sqrt(q.denom())?;
                let r = Rat::new(num, den);
                Some(if s < 0 { -r } else { r })
            })
            .collect()
    }

    /// `v` as an integer vector, canonicalised so the first nonzero
    /// coordinate is positive.
    pub fn as_integers(&self) -> Option<IntVector> {
        let coords = self
            .as_rationals()?
            .into_iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect::<Option<Vec<BigInt>>>()?;
        Some(IntVector::new(coords).canonical())
    }
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductForm {
    Product(ProductVector),
    NotProduct(NotProductReason),
}

/// Decides whether `m = v ⊘ v` for some real `v`.
pub fn is_product_form(m: &TriArray) -> ProductForm {
    let n = m.n();
    let support: Vec<usize> = (0..n)
        .filter(|&i| (0..n).any(|j| j != i && !m.at(i, j).is_zero()))
        .collect();
    let mut signs = vec![0i8; n];
    let mut squares = vec![Rat::zero(); n];
    if support.is_empty() {
        return ProductForm::Product(ProductVector { signs, squares });
    }
    for (a, &i) in support.iter().enumerate() {
        for &j in &support[a + 1..] {
            if m.at(i, j).is_zero() {
                return ProductForm::NotProduct(NotProductReason::ZeroPattern);
            }
        }
    }
    let root = support[0];
    signs[root] = 1;
    for &i in &support[1..] {
        signs[i] = sign_of(m.at(root, i));
    }
    for (a, &i) in support.iter().enumerate() {
        for &j in &support[a + 1..] {
            if sign_of(m.at(i, j)) != signs[i] * signs[j] {
                return ProductForm::NotProduct(NotProductReason::SignInconsistency);
            }
        }
    }
    if support.len() == 2 {
        let other = support[1];
        squares[root] = Rat::one();
        squares[other] = m.at(root, other) * m.at(root, other);
    } else {
        for &i in &support {
            let mut others = support.iter().copied().filter(|&k| k != i);
            let (j, k) = (
                others.next().expect("support >= 3"),
                others.next().expect("support >= 3"),
            );
            let q = m.at(i, j) * m.at(i, k) / m.at(j, k);
            if !q.is_positive() {
                return ProductForm::NotProduct(NotProductReason::SignInconsistency);
            }
            squares[i] = q;
        }
    }
    for (a, &i) in support.iter().enumerate() {
        for &j in &support[a + 1..] {
            let mij = m.at(i, j);
            if &squares[i] * &squares[j] != mij * mij {
                return ProductForm::NotProduct(NotProductReason::MinorInconsistency);
            }
        }
    }
    ProductForm::Product(ProductVector { signs, squares })
}

/// The Matheron inequality `Σ ρ_ij e_i e_j >= 1` as a facet: normal
/// `-(e ⊘ e)`, offset `(Σ e_i² - 1) / 2`.
pub fn facet_from_matheron(e: &IntVector) -> Result<Facet> {
    let normal = pairs(e.n())
        .map(|(i, j)| {
            (-(&e.coords[i] * &e.coords[j]))
                .to_i64()
                .ok_or(Error::Overflow)
        })
        .collect::<Result<Vec<i64>>>()?;
    let offset = Rat::new(e.norm_sq() - BigInt::one(), BigInt::from(2));
    Ok(Facet { normal, offset })
}

/// The integer vector `e` with `-normal = e ⊘ e`, when there is one.
pub fn matheron_vector(facet: &Facet) -> Option<IntVector> {
    let n = n_from_dim(facet.normal.len())?;
    let neg: Vec<i64> = facet.normal.iter().map(|v| -v).collect();
    match is_product_form(&TriArray::from_ints(n, &neg).ok()?) {
        ProductForm::Product(v) => v.as_integers(),
        ProductForm::NotProduct(_) => None,
    }
}

fn n_from_dim(d: usize) -> Option<usize> {
    (1..=64).find(|&n| pair_count(n) == d)
}

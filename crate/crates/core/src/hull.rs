//! Incremental beneath-beyond convex hull over integer points.
//!
//! Points are inserted one at a time. For each insertion the current facets
//! are split into visible, coplanar and hidden ones; every ridge between a
//! visible and a hidden facet spawns a new facet through the ridge and the new
//! point. The new hyperplane is the positive combination of the two old ones
//! that vanishes at the point, so all arithmetic stays integral.
//!
//! Incidence sets are `u64` masks over point indices, which limits the hull to
//! 64 points. A [`HullState`] snapshot taken between insertions is enough to
//! resume.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank_i64};
use crate::rat::{primitive_integer, Rat};

pub const MAX_POINTS: usize = 64;

/// `{x : <x, normal> <= offset}` with the incident point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HullFacet {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub incidence: u64,
}

impl HullFacet {
    fn slack(&self, p: &[i64]) -> i128 {
        let dot: i128 = self
            .normal
            .iter()
            .zip(p)
            .map(|(&a, &b)| i128::from(a) * i128::from(b))
            .sum();
        dot - i128::from(self.offset)
    }
}

/// Resumable snapshot: the insertion order and how much of it is done.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullState {
    pub order: Vec<usize>,
    pub inserted: usize,
    pub facets: Vec<HullFacet>,
}

#[derive(Clone, Debug)]
pub struct IncrementalHull {
    points: Vec<Vec<i64>>,
    dim: usize,
    order: Vec<usize>,
    inserted: usize,
    facets: Vec<HullFacet>,
}

impl IncrementalHull {
    /// Seeds with the first affinely independent `dim + 1` points in index
    /// order; the rest are queued in index order. Points must span the space.
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let dim = check_points(&points)?;
        let mut seed: Vec<usize> = Vec::with_capacity(dim + 1);
        let mut lifted: Vec<Vec<i64>> = Vec::with_capacity(dim + 1);
        for (k, p) in points.iter().enumerate() {
            if seed.len() == dim + 1 {
                break;
            }
            lifted.push(homogeneous(p));
            if rank_i64(&lifted) == lifted.len() {
                seed.push(k);
            } else {
                lifted.pop();
            }
        }
        if seed.len() != dim + 1 {
            return Err(Error::UnsupportedSize {
                n: seed.len(),
                min: dim + 1,
                max: dim + 1,
            });
        }
        let facets = simplex_facets(&points, &seed)?;
        let mut order = seed.clone();
        order.extend((0..points.len()).filter(|k| !seed.contains(k)));
        Ok(IncrementalHull {
            points,
            dim,
            order,
            inserted: dim + 1,
            facets,
        })
    }

    pub fn from_state(points: Vec<Vec<i64>>, state: HullState) -> Result<Self> {
        let dim = check_points(&points)?;
        let mut sorted = state.order.clone();
        sorted.sort_unstable();
        if sorted != (0..points.len()).collect::<Vec<_>>() || state.inserted > points.len() {
            return Err(Error::InvalidMixture(
                "checkpoint does not match the point set",
            ));
        }
        if state.facets.iter().any(|f| f.normal.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: state.facets.first().map_or(0, |f| f.normal.len()),
            });
        }
        Ok(IncrementalHull {
            points,
            dim,
            order: state.order,
            inserted: state.inserted,
            facets: state.facets,
        })
    }

    pub fn state(&self) -> HullState {
        HullState {
            order: self.order.clone(),
            inserted: self.inserted,
            facets: self.facets.clone(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.inserted == self.order.len()
    }

    pub fn progress(&self) -> (usize, usize) {
        (self.inserted, self.order.len())
    }

    pub fn facets(&self) -> &[HullFacet] {
        &self.facets
    }

    pub fn into_facets(self) -> Vec<HullFacet> {
        self.facets
    }

    /// Inserts the next queued point. Returns `false` once every point is in.
    pub fn step(&mut self) -> Result<bool> {
        if self.is_done() {
            return Ok(false);
        }
        let k = self.order[self.inserted];
        let p = &self.points[k];
        let bit = 1u64 << k;

        let mut visible = Vec::new();
        let mut hidden = Vec::new();
        let mut kept = Vec::with_capacity(self.facets.len());
        for (idx, f) in self.facets.iter().enumerate() {
            let s = f.slack(p);
            match s.signum() {
                1 => visible.push((idx, s)),
                -1 => {
                    hidden.push((idx, s));
                    kept.push(idx);
                }
                _ => kept.push(idx),
            }
        }

        let mut created = Vec::new();
        for &(vi, vs) in &visible {
            let fv = &self.facets[vi];
            for &(hi, hs) in &hidden {
                let fh = &self.facets[hi];
                let common = fv.incidence & fh.incidence;
                if (common.count_ones() as usize) < self.dim - 1 || !self.is_ridge(common) {
                    continue;
                }
                created.push(combine(fv, vs, fh, hs, common | bit)?);
            }
        }

        let mut next: Vec<HullFacet> = kept
            .into_iter()
            .map(|idx| {
                let mut f = self.facets[idx].clone();
                if f.slack(p) == 0 {
                    f.incidence |= bit;
                }
                f
            })
            .collect();
        next.extend(created);
        self.facets = next;
        self.inserted += 1;
        Ok(true)
    }

    pub fn run(&mut self) -> Result<()> {
        while self.step()? {}
        Ok(())
    }

    fn is_ridge(&self, mask: u64) -> bool {
        let rows: Vec<Vec<i64>> = (0..self.points.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| homogeneous(&self.points[k]))
            .collect();
        rank_i64(&rows) == self.dim - 1
    }
}

fn check_points(points: &[Vec<i64>]) -> Result<usize> {
    let dim = points.first().map(Vec::len).ok_or(Error::Empty)?;
    if points.len() > MAX_POINTS {
        return Err(Error::CapExceeded {
            n: points.len(),
            cap: MAX_POINTS,
        });
    }
    if dim == 0 {
        return Err(Error::UnsupportedSize {
            n: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    Ok(dim)
}

fn homogeneous(p: &[i64]) -> Vec<i64> {
    let mut row = p.to_vec();
    row.push(1);
    row
}

fn simplex_facets(points: &[Vec<i64>], seed: &[usize]) -> Result<Vec<HullFacet>> {
    let dim = points[0].len();
    let mut facets = Vec::with_capacity(seed.len());
    for &omit in seed {
        let others: Vec<usize> = seed.iter().copied().filter(|&k| k != omit).collect();
        // <p, mu> - o = 0 for every other seed point
        let rows: Vec<Vec<Rat>> = others
            .iter()
            .map(|&k| {
                points[k]
                    .iter()
                    .map(|&c| Rat::from_integer(c.into()))
                    .chain(core::iter::once(Rat::from_integer((-1).into())))
                    .collect()
            })
            .collect();
        let kernel = kernel_basis(&rows, dim + 1);
        let x = kernel.first().ok_or(Error::NotAKernel)?;
        let coeffs: Vec<i64> = primitive_integer(x)
            .iter()
            .map(|v| v.to_i64().ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        let mut facet = HullFacet {
            normal: coeffs[..dim].to_vec(),
            offset: coeffs[dim],
            incidence: others.iter().fold(0, |m, &k| m | 1u64 << k),
        };
        if facet.slack(&points[omit]) > 0 {
            facet.normal.iter_mut().for_each(|v| *v = -*v);
            facet.offset = -facet.offset;
        }
        normalize(&mut facet);
        facets.push(facet);
    }
    Ok(facets)
}

/// `vs > 0 > hs`; returns the hyperplane `vs * h - hs * v`, which vanishes
/// at the inserted point and on the shared ridge.
fn combine(
    visible: &HullFacet,
    vs: i128,
    hidden: &HullFacet,
    hs: i128,
    incidence: u64,
) -> Result<HullFacet> {
    let mix = |hv: i64, vv: i64| -> Result<i64> {
        let value = vs * i128::from(hv) - hs * i128::from(vv);
        i64::try_from(value).map_err(|_| Error::Overflow)
    };
    let normal = hidden
        .normal
        .iter()
        .zip(&visible.normal)
        .map(|(&h, &v)| mix(h, v))
        .collect::<Result<Vec<i64>>>()?;
    let mut facet = HullFacet {
        normal,
        offset: mix(hidden.offset, visible.offset)?,
        incidence,
    };
    normalize(&mut facet);
    Ok(facet)
}

fn normalize(facet: &mut HullFacet) {
    let g = facet.normal.iter().fold(0i64, |g, &v| g.gcd(&v));
    if g > 1 {
        debug_assert_eq!(facet.offset % g, 0);
        facet.normal.iter_mut().for_each(|v| *v /= g);
        facet.offset /= g;
    }
}

/// Exact rank of a point set's affine hull, plus one.
pub fn homogeneous_rank(points: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<i64>> = points.iter().map(|p| homogeneous(p)).collect();
    rank_i64(&rows)
}

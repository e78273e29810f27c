//! V-description of the polytope of realisable arrays: its `2^(N-1)` vertices
//! `u ⊘ u`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{check_n, pairs, SignVector, TriArray};
use crate::rat::{common_denominator, int, Rat};

pub const DEFAULT_VERTEX_CAP: usize = 20;

/// A vertex and its triangular image, stored as `±1` bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub signs: SignVector,
    pub coords: Vec<i8>,
}

impl Vertex {
    pub fn new(signs: SignVector) -> Self {
        let coords = pairs(signs.n())
            .map(|(i, j)| signs.get(i) * signs.get(j))
            .collect();
        Vertex { signs, coords }
    }

    pub fn to_tri(&self) -> TriArray {
        TriArray::new(
            self.signs.n(),
            self.coords.iter().map(|&c| int(i64::from(c))).collect(),
        )
        .expect("vertex length matches pair count")
    }

    pub fn dot_i64(&self, w: &[i64]) -> i128 {
        self.coords
            .iter()
            .zip(w)
            .map(|(&c, &x)| i128::from(c) * i128::from(x))
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct VertexSet {
    n: usize,
    vertices: Vec<Vertex>,
}

impl VertexSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// All canonical vertices in lexicographic order, with the default cap.
pub fn enumerate_vertices(n: usize) -> Result<VertexSet> {
    enumerate_vertices_capped(n, DEFAULT_VERTEX_CAP)
}

pub fn enumerate_vertices_capped(n: usize, cap: usize) -> Result<VertexSet> {
    if n == 0 {
        return Err(Error::UnsupportedSize {
            n,
            min: 1,
            max: cap,
        });
    }
    if n > cap || n > 64 {
        return Err(Error::CapExceeded {
            n,
            cap: cap.min(64),
        });
    }
    let vertices = (0..1u64 << (n - 1))
        .map(|k| Vertex::new(SignVector::from_index(n, k)))
        .collect();
    Ok(VertexSet { n, vertices })
}

/// Minimum of `<v, direction>` over the vertices, with every minimiser in
/// enumeration order.
pub fn vertex_min(set: &VertexSet, direction: &TriArray) -> Result<(Rat, Vec<SignVector>)> {
    check_n(set.n, direction.n())?;
    let den = common_denominator(direction.entries());
    let scaled: Vec<BigInt> = direction
        .entries()
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    let small: Option<Vec<i64>> = scaled.iter().map(ToPrimitive::to_i64).collect();
    let (min, idx) = match small {
        Some(w) if w.len() < (1 << 20) => {
            let values: Vec<i128> = set.vertices.iter().map(|v| v.dot_i64(&w)).collect();
            let min = values.iter().copied().min().unwrap_or(0);
            let idx: Vec<usize> = (0..values.len()).filter(|&k| values[k] == min).collect();
            (BigInt::from(min), idx)
        }
        _ => {
            let values: Vec<BigInt> = set
                .vertices
                .iter()
                .map(|v| {
                    v.coords
                        .iter()
                        .zip(&scaled)
                        .fold(
                            BigInt::zero(),
                            |acc, (&c, x)| {
                                if c > 0 {
                                    acc + x
                                } else {
                                    acc - x
                                }
                            },
                        )
                })
                .collect();
            let min = values.iter().min().cloned().unwrap_or_default();
            let idx = (0..values.len()).filter(|&k| values[k] == min).collect();
            (min, idx)
        }
    };
    let argmin = idx
        .into_iter()
        .map(|k| set.vertices[k].signs.clone())
        .collect();
    Ok((Rat::new(min, den), argmin))
}

/// Maximum of `<v, direction>`, the offset of the supporting hyperplane.
pub fn vertex_max(set: &VertexSet, direction: &TriArray) -> Result<(Rat, Vec<SignVector>)> {
    let neg = TriArray::new(
        direction.n(),
        direction.entries().iter().map(|v| -v).collect(),
    )?;
    let (min, argmax) = vertex_min(set, &neg)?;
    Ok((-min, argmax))
}

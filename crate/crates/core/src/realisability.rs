//! Membership in the polytope of realisable arrays, with certificates both
//! ways.
//!
//! A realisable array comes back as a [`Mixture`] of sign vectors that
//! reconstructs it exactly. A non-realisable one comes back with a
//! hyperplane that strictly separates it from every vertex; checking either
//! witness needs nothing beyond exact dot products.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, normalize_leading};
use crate::lp::{solve_feasibility, Feasibility};
use crate::model::{pair_count, Mixture, SignVector, TriArray};
use crate::rat::{primitive_integer, Rat};
use crate::vertices::{enumerate_vertices_capped, vertex_max, Vertex, DEFAULT_VERTEX_CAP};

pub const DEFAULT_LP_CAP: usize = 13;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Realisable(Mixture),
    /// `<rho, direction> > threshold >= <v, direction>` for every vertex `v`.
    Separated {
        direction: TriArray,
        threshold: Rat,
    },
}

impl Certificate {
    pub fn is_realisable(&self) -> bool {
        matches!(self, Certificate::Realisable(_))
    }
}

pub fn check_realisable(rho: &TriArray) -> Result<Certificate> {
    check_realisable_capped(rho, DEFAULT_LP_CAP)
}

/// Decides `rho ∈ U_N*` by exact phase-one simplex over the vertex set.
pub fn check_realisable_capped(rho: &TriArray, cap: usize) -> Result<Certificate> {
    let n = rho.n();
    if n == 0 {
        return Err(Error::UnsupportedSize {
            n,
            min: 1,
            max: cap,
        });
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if n == 1 {
        return Ok(Certificate::Realisable(Mixture::dirac(
            SignVector::from_index(1, 0),
        )));
    }
    if let Some(k) = rho.entries().iter().position(|v| v.abs() > Rat::one()) {
        let mut direction = vec![Rat::zero(); rho.dim()];
        direction[k] = if rho.entries()[k].is_positive() {
            Rat::one()
        } else {
            -Rat::one()
        };
        return Ok(Certificate::Separated {
            direction: TriArray::new(n, direction)?,
            threshold: Rat::one(),
        });
    }

    let vertices = enumerate_vertices_capped(n, cap.max(n))?;
    let columns: Vec<Vec<Rat>> = vertices
        .vertices()
        .iter()
        .map(|v| {
            v.coords
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .chain(core::iter::once(Rat::one()))
                .collect()
        })
        .collect();
    let mut b: Vec<Rat> = rho.entries().to_vec();
    b.push(Rat::one());

    match solve_feasibility(&columns, &b) {
        Feasibility::Feasible(x) => {
            let atoms = x
                .into_iter()
                .zip(vertices.vertices())
                .filter(|(w, _)| !w.is_zero())
                .map(|(w, v)| (w, v.signs.clone()))
                .collect();
            Ok(Certificate::Realisable(Mixture::new(atoms)?))
        }
        Feasibility::Infeasible(mut y) => {
            y.pop();
            let direction = TriArray::new(
                n,
                primitive_integer(&y)
                    .into_iter()
                    .map(Rat::from_integer)
                    .collect(),
            )?;
            let (threshold, _) = vertex_max(&vertices, &direction)?;
            Ok(Certificate::Separated {
                direction,
                threshold,
            })
        }
    }
}

/// `Σ_k p_k (u^k ⊘ u^k)`.
pub fn reconstruct(m: &Mixture) -> TriArray {
    let n = m.n();
    let mut acc = vec![Rat::zero(); pair_count(n)];
    for (w, u) in m.atoms() {
        let v = Vertex::new(u.clone());
        for (a, &c) in acc.iter_mut().zip(&v.coords) {
            if c > 0 {
                *a += w;
            } else {
                *a -= w;
            }
        }
    }
    TriArray::new(n, acc).expect("length matches")
}

/// Shrinks a mixture to at most `d_N + 1` atoms without changing the array
/// it reconstructs.
pub fn caratheodory_reduce(m: &Mixture) -> Mixture {
    let n = m.n();
    let bound = pair_count(n) + 1;
    let mut atoms: Vec<(Rat, SignVector)> = m.atoms().to_vec();
    while atoms.len() > bound {
        // affine dependency: Σ c_k (v_k, 1) = 0
        let lifted: Vec<Vertex> = atoms.iter().map(|(_, u)| Vertex::new(u.clone())).collect();
        let rows: Vec<Vec<Rat>> = (0..=pair_count(n))
            .map(|r| {
                lifted
                    .iter()
                    .map(|v| match v.coords.get(r) {
                        Some(&c) => Rat::from_integer(c.into()),
                        None => Rat::one(),
                    })
                    .collect()
            })
            .collect();
        let mut c = kernel_basis(&rows, atoms.len())
            .into_iter()
            .next()
            .expect("more points than affine dimension + 1");
        normalize_leading(&mut c);
        let step = atoms
            .iter()
            .zip(&c)
            .filter(|(_, ck)| ck.is_positive())
            .map(|((w, _), ck)| w / ck)
            .min()
            .expect("leading coefficient is positive");
        for ((w, _), ck) in atoms.iter_mut().zip(&c) {
            if !ck.is_zero() {
                *w -= &step * ck;
            }
        }
        atoms.retain(|(w, _)| !w.is_zero());
    }
    Mixture::new(atoms).expect("reduction preserves mixture invariants")
}

/// Independent check of a certificate: reconstruction for mixtures, vertex
/// enumeration for separating hyperplanes. Never touches the LP.
pub fn verify_certificate(rho: &TriArray, cert: &Certificate) -> bool {
    match cert {
        Certificate::Realisable(m) => {
            m.validate().is_ok() && m.n() == rho.n() && reconstruct(m) == *rho
        }
        Certificate::Separated {
            direction,
            threshold,
        } => {
            let Ok(lhs) = rho.dot(direction) else {
                return false;
            };
            let Ok(vertices) = enumerate_vertices_capped(rho.n(), DEFAULT_VERTEX_CAP) else {
                return false;
            };
            let Ok((max, _)) = vertex_max(&vertices, direction) else {
                return false;
            };
            lhs > *threshold && *threshold >= max
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{outer_tri, switch};
    use crate::rat::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sv(s: &[i8]) -> SignVector {
        SignVector::new(s.to_vec()).unwrap()
    }

    fn remark_mixture() -> Mixture {
        Mixture::new(vec![
            (rat(1, 3), sv(&[-1, 1, 1])),
            (rat(1, 3), sv(&[-1, -1, 1])),
            (rat(1, 3), sv(&[1, -1, 1])),
        ])
        .unwrap()
    }

    #[test]
    fn three_point_example_is_separated() {
        let rho = TriArray::from_ints(3, &[1, 1, -1]).unwrap();
        let cert = check_realisable(&rho).unwrap();
        assert!(matches!(cert, Certificate::Separated { .. }));
        assert!(verify_certificate(&rho, &cert));
    }

    #[test]
    fn vertex_is_its_own_mixture() {
        let rho = TriArray::from_ints(3, &[1, 1, 1]).unwrap();
        let cert = check_realisable(&rho).unwrap();
        assert_eq!(
            cert,
            Certificate::Realisable(Mixture::dirac(sv(&[1, 1, 1])))
        );
    }

    #[test]
    fn minus_one_third_needs_three_states() {
        let rho = TriArray::new(3, vec![rat(-1, 3); 3]).unwrap();
        let Certificate::Realisable(m) = check_realisable(&rho).unwrap() else {
            panic!("expected realisable");
        };
        assert_eq!(m, remark_mixture());
        assert_eq!(reconstruct(&remark_mixture()), rho);
    }

    #[test]
    fn center_is_realisable() {
        let rho = TriArray::zeros(3);
        let cert = check_realisable(&rho).unwrap();
        assert!(cert.is_realisable());
        assert!(verify_certificate(&rho, &cert));
        let uniform = Mixture::new(
            (0..4)
                .map(|k| (rat(1, 4), SignVector::from_index(3, k)))
                .collect(),
        )
        .unwrap();
        assert!(verify_certificate(&rho, &Certificate::Realisable(uniform)));
    }

    #[test]
    fn out_of_range_entry_uses_coordinate_hyperplane() {
        let rho = TriArray::new(3, vec![int(0), rat(-3, 2), int(0)]).unwrap();
        let cert = check_realisable(&rho).unwrap();
        assert_eq!(
            cert,
            Certificate::Separated {
                direction: TriArray::from_ints(3, &[0, -1, 0]).unwrap(),
                threshold: int(1),
            }
        );
        assert!(verify_certificate(&rho, &cert));
    }

    #[test]
    fn degenerate_and_capped_sizes() {
        let rho = TriArray::zeros(1);
        assert!(check_realisable(&rho).unwrap().is_realisable());
        assert_eq!(
            check_realisable(&TriArray::zeros(14)),
            Err(Error::CapExceeded { n: 14, cap: 13 })
        );
    }

    #[test]
    fn corrupted_certificates_fail() {
        let rho = TriArray::zeros(3);
        let bad = Mixture::from_parts_unchecked(vec![
            (rat(1, 2), sv(&[1, 1, 1])),
            (rat(1, 4), sv(&[1, -1, 1])),
        ]);
        assert!(!verify_certificate(&rho, &Certificate::Realisable(bad)));
        let wrong = Certificate::Separated {
            direction: TriArray::from_ints(3, &[-1, -1, -1]).unwrap(),
            threshold: int(1),
        };
        assert!(!verify_certificate(&rho, &wrong));
        let rho = TriArray::from_ints(3, &[1, 1, -1]).unwrap();
        let loose = Certificate::Separated {
            direction: TriArray::from_ints(3, &[1, 1, -1]).unwrap(),
            threshold: int(0),
        };
        assert!(!verify_certificate(&rho, &loose));
    }

    #[test]
    fn caratheodory_examples() {
        let uniform = Mixture::new(
            (0..4)
                .map(|k| (rat(1, 4), SignVector::from_index(3, k)))
                .collect(),
        )
        .unwrap();
        assert_eq!(caratheodory_reduce(&uniform), uniform);

        let single = Mixture::dirac(sv(&[1, -1, 1]));
        assert_eq!(caratheodory_reduce(&single), single);

        // five weighted atoms with a repeated vertex merge to four
        let five = Mixture::from_weighted(vec![
            (rat(1, 10), sv(&[1, 1, 1])),
            (rat(2, 10), sv(&[1, -1, 1])),
            (rat(3, 10), sv(&[1, 1, -1])),
            (rat(1, 10), sv(&[1, -1, -1])),
            (rat(3, 10), sv(&[1, -1, 1])),
        ])
        .unwrap();
        let reduced = caratheodory_reduce(&five);
        assert!(reduced.len() <= 4);
        assert_eq!(reconstruct(&reduced), reconstruct(&five));
    }

    fn random_mixture(rng: &mut ChaCha8Rng, n: usize, atoms: usize) -> Mixture {
        let raw: Vec<(Rat, SignVector)> = (0..atoms)
            .map(|_| {
                let idx = rng.gen_range(0..1u64 << (n - 1));
                (int(rng.gen_range(1..=20)), SignVector::from_index(n, idx))
            })
            .collect();
        let total: Rat = raw.iter().map(|(w, _)| w.clone()).sum();
        Mixture::from_weighted(raw.into_iter().map(|(w, u)| (w / &total, u)).collect()).unwrap()
    }

    #[test]
    fn lp_round_trip_and_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..=6 {
            for _ in 0..10 {
                let m = random_mixture(&mut rng, n, 3 * pair_count(n));
                let rho = reconstruct(&m);
                let reduced = caratheodory_reduce(&m);
                assert!(reduced.len() <= pair_count(n) + 1);
                assert_eq!(reconstruct(&reduced), rho);
                let cert = check_realisable(&rho).unwrap();
                assert!(verify_certificate(&rho, &cert));
            }
        }
    }

    #[test]
    fn switched_mixture_realises_switched_array() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let m = random_mixture(&mut rng, 5, 6);
            let u = SignVector::from_index(5, rng.gen_range(0..16));
            let switched = Mixture::from_weighted(
                m.atoms()
                    .iter()
                    .map(|(w, a)| (w.clone(), a.multiply(&u).unwrap()))
                    .collect(),
            )
            .unwrap();
            let target = switch(&reconstruct(&m), &u).unwrap();
            assert_eq!(reconstruct(&switched), target);
            assert!(check_realisable(&target).unwrap().is_realisable());
        }
    }

    #[test]
    fn reconstruct_single_atom() {
        let u = sv(&[1, -1, 1, 1]);
        assert_eq!(reconstruct(&Mixture::dirac(u.clone())), outer_tri(&u));
    }
}

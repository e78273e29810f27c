//! Singular covariances and the boundary of `U_N*`.
//!
//! A realisable array whose unit-diagonal completion has a kernel vector `λ`
//! lies on the boundary: moving one entry by `ε` in the right direction makes
//! `λᵀ M λ` negative, so arbitrarily close points are not even positive
//! semidefinite.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, normalize_leading};
use crate::model::{check_n, complete, pair_count, pair_index, Mixture, SignVector, TriArray};
use crate::rat::{rat, Rat};

/// Rational stand-in for the inner radius `√2/π ≈ 0.45016`.
pub fn inner_radius() -> Rat {
    rat(9, 20)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelWitness {
    lambda: Vec<Rat>,
}

impl KernelWitness {
    /// Checks `complete(rho) * lambda = 0` and `lambda != 0`.
    pub fn new(rho: &TriArray, lambda: Vec<Rat>) -> Result<Self> {
        check_n(rho.n(), lambda.len())?;
        if lambda.iter().all(Zero::is_zero) {
            return Err(Error::NotAKernel);
        }
        if complete(rho).mul_vec(&lambda).iter().any(|v| !v.is_zero()) {
            return Err(Error::NotAKernel);
        }
        Ok(KernelWitness { lambda })
    }

    pub fn lambda(&self) -> &[Rat] {
        &self.lambda
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelResult {
    Singular(KernelWitness),
    NonSingular,
}

/// Exact kernel of the completion. Returns the lexicographically least basis
/// vector with leading coordinate `1`.
pub fn kernel(rho: &TriArray) -> KernelResult {
    let m = complete(rho);
    let rows: Vec<Vec<Rat>> = m.rows().map(<[Rat]>::to_vec).collect();
    match least_kernel_vector(&rows, rho.n()) {
        Some(lambda) => KernelResult::Singular(KernelWitness { lambda }),
        None => KernelResult::NonSingular,
    }
}

fn least_kernel_vector(rows: &[Vec<Rat>], cols: usize) -> Option<Vec<Rat>> {
    kernel_basis(rows, cols)
        .into_iter()
        .map(|mut x| {
            normalize_leading(&mut x);
            x
        })
        .min()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationWitness {
    pub base: TriArray,
    pub epsilon: Rat,
    pub indices: (usize, usize),
    pub sigma: i8,
    pub perturbed: TriArray,
    /// `λᵀ M^ε λ` for the completed perturbed matrix; always negative.
    pub negativity_value: Rat,
}

/// Perturbs at the first pair of nonzero kernel coordinates.
pub fn perturbation_witness(
    rho: &TriArray,
    lam: &KernelWitness,
    eps: &Rat,
) -> Result<PerturbationWitness> {
    let nonzero: Vec<usize> = (0..lam.lambda.len())
        .filter(|&k| !lam.lambda[k].is_zero())
        .collect();
    if nonzero.len() < 2 {
        return Err(Error::DegenerateKernel);
    }
    perturbation_witness_at(rho, lam, eps, (nonzero[0], nonzero[1]))
}

/// Perturbs entry `(i1, i2)`, which must carry nonzero kernel coordinates.
pub fn perturbation_witness_at(
    rho: &TriArray,
    lam: &KernelWitness,
    eps: &Rat,
    (i1, i2): (usize, usize),
) -> Result<PerturbationWitness> {
    let lam = KernelWitness::new(rho, lam.lambda.clone())?;
    if !eps.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    let (i1, i2) = if i1 < i2 { (i1, i2) } else { (i2, i1) };
    if i1 == i2 || i2 >= rho.n() {
        return Err(Error::DimensionMismatch {
            expected: rho.n(),
            found: i2,
        });
    }
    let product = &lam.lambda[i1] * &lam.lambda[i2];
    if product.is_zero() {
        return Err(Error::DegenerateKernel);
    }
    let sigma: i8 = if product.is_positive() { 1 } else { -1 };
    let mut entries = rho.entries().to_vec();
    let k = pair_index(rho.n(), i1, i2);
    entries[k] -= if sigma > 0 { eps.clone() } else { -eps.clone() };
    let perturbed = TriArray::new(rho.n(), entries)?;
    let negativity_value = complete(&perturbed).quadratic(&lam.lambda);
    debug_assert_eq!(
        negativity_value,
        -(Rat::from_integer(2.into()) * eps * product.abs())
    );
    Ok(PerturbationWitness {
        base: rho.clone(),
        epsilon: eps.clone(),
        indices: (i1, i2),
        sigma,
        perturbed,
        negativity_value,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceCheck {
    /// A common kernel vector of the sign vectors: every mixture of them is
    /// singular.
    AllSingular(Vec<Rat>),
    /// A mixture of the given vertices with nonsingular completion.
    CounterexampleMixture(Mixture),
}

/// Fewer than `N` sign vectors always share a kernel vector; otherwise the
/// uniform mixture is tried, which is nonsingular exactly when the vectors
/// span `R^N`.
pub fn simplex_face_check(vertices: &[SignVector]) -> Result<FaceCheck> {
    let first = vertices.first().ok_or(Error::Empty)?;
    let n = first.n();
    for u in vertices {
        check_n(n, u.n())?;
    }
    let rows: Vec<Vec<Rat>> = vertices
        .iter()
        .map(|u| {
            u.signs()
                .iter()
                .map(|&s| Rat::from_integer(s.into()))
                .collect()
        })
        .collect();
    if let Some(lambda) = least_kernel_vector(&rows, n) {
        return Ok(FaceCheck::AllSingular(lambda));
    }
    let k = Rat::from_integer(vertices.len().into());
    let weight = Rat::one() / k;
    let mixture = Mixture::from_weighted(
        vertices
            .iter()
            .map(|u| (weight.clone(), u.clone()))
            .collect(),
    )?;
    let rho = crate::realisability::reconstruct(&mixture);
    match kernel(&rho) {
        KernelResult::NonSingular => Ok(FaceCheck::CounterexampleMixture(mixture)),
        // spanning sign vectors give a positive definite mixture
        KernelResult::Singular(_) => {
            unreachable!("uniform mixture of a spanning set is nonsingular")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallClass {
    InInnerBall,
    BetweenBalls,
    OutsideOuterBall,
}

/// `‖ρ‖² <= (9/20)²` is inner, `‖ρ‖² <= d_N` is between (ties inward).
pub fn ball_bounds_check(rho: &TriArray) -> BallClass {
    let norm = rho.norm_sq();
    let r = inner_radius();
    if norm <= &r * &r {
        BallClass::InInnerBall
    } else if norm <= Rat::from_integer(pair_count(rho.n()).into()) {
        BallClass::BetweenBalls
    } else {
        BallClass::OutsideOuterBall
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::outer_tri;
    use crate::rat::int;
    use crate::realisability::{check_realisable, reconstruct};
    use alloc::vec;

    fn sv(s: &[i8]) -> SignVector {
        SignVector::new(s.to_vec()).unwrap()
    }

    #[test]
    fn vertices_are_singular() {
        let u = sv(&[1, -1, 1, 1]);
        let KernelResult::Singular(w) = kernel(&outer_tri(&u)) else {
            panic!()
        };
        assert_eq!(w.lambda(), [int(1), int(0), int(-1), int(0)]);
        assert!(KernelWitness::new(&outer_tri(&u), w.lambda().to_vec()).is_ok());
        let KernelResult::Singular(w) = kernel(&outer_tri(&sv(&[1, 1, 1]))) else {
            panic!()
        };
        assert_eq!(w.lambda(), [int(1), int(-1), int(0)]);
    }

    #[test]
    fn nonsingular_examples() {
        let third = TriArray::new(3, vec![rat(-1, 3); 3]).unwrap();
        assert_eq!(kernel(&third), KernelResult::NonSingular);
        assert_eq!(kernel(&TriArray::zeros(5)), KernelResult::NonSingular);
    }

    #[test]
    fn kernel_witness_validation() {
        let rho = outer_tri(&sv(&[1, 1]));
        assert!(KernelWitness::new(&rho, vec![int(1), int(1)]).is_err());
        assert!(KernelWitness::new(&rho, vec![int(0), int(0)]).is_err());
        assert!(KernelWitness::new(&rho, vec![int(2), int(-2)]).is_ok());
    }

    #[test]
    fn two_point_perturbation() {
        let rho = outer_tri(&sv(&[1, 1]));
        let lam = KernelWitness::new(&rho, vec![int(1), int(-1)]).unwrap();
        let w = perturbation_witness(&rho, &lam, &rat(1, 10)).unwrap();
        assert_eq!(w.sigma, -1);
        assert_eq!(w.indices, (0, 1));
        assert_eq!(w.perturbed.entries(), [rat(11, 10)]);
        assert_eq!(w.negativity_value, rat(-1, 5));
        assert!(!check_realisable(&w.perturbed).unwrap().is_realisable());
    }

    #[test]
    fn vertex_perturbations_are_negative() {
        for k in 0..16 {
            let u = SignVector::from_index(5, k);
            let rho = outer_tri(&u);
            let KernelResult::Singular(lam) = kernel(&rho) else {
                panic!()
            };
            let w = perturbation_witness(&rho, &lam, &rat(1, 2)).unwrap();
            // independent recomputation of λᵀ M λ entry by entry
            let m = complete(&w.perturbed);
            let mut q = Rat::zero();
            for i in 0..5 {
                for j in 0..5 {
                    q += &lam.lambda()[i] * m.get(i, j) * &lam.lambda()[j];
                }
            }
            assert_eq!(q, w.negativity_value);
            assert!(q.is_negative());
        }
    }

    #[test]
    fn perturbation_rejects_zero_coordinates() {
        let u = sv(&[1, 1, -1]);
        let rho = outer_tri(&u);
        let lam = KernelWitness::new(&rho, vec![int(1), int(-1), int(0)]).unwrap();
        assert_eq!(
            perturbation_witness_at(&rho, &lam, &rat(1, 4), (0, 2)),
            Err(Error::DegenerateKernel)
        );
        assert_eq!(
            perturbation_witness(&rho, &lam, &Rat::zero()),
            Err(Error::NonPositiveEpsilon)
        );
    }

    #[test]
    fn simplex_faces() {
        let pair = [sv(&[1, 1, 1]), sv(&[1, -1, -1])];
        let FaceCheck::AllSingular(lambda) = simplex_face_check(&pair).unwrap() else {
            panic!()
        };
        for u in &pair {
            let s: Rat = u
                .signs()
                .iter()
                .zip(&lambda)
                .map(|(&a, l)| Rat::from_integer(a.into()) * l)
                .sum();
            assert!(s.is_zero());
        }
        assert!(matches!(
            simplex_face_check(&[sv(&[1, 1])]).unwrap(),
            FaceCheck::AllSingular(_)
        ));
        let remark = [sv(&[-1, 1, 1]), sv(&[-1, -1, 1]), sv(&[1, -1, 1])];
        let FaceCheck::CounterexampleMixture(m) = simplex_face_check(&remark).unwrap() else {
            panic!()
        };
        assert_eq!(
            reconstruct(&m),
            TriArray::new(3, vec![rat(-1, 3); 3]).unwrap()
        );
        assert!(simplex_face_check(&[sv(&[1, 1]), sv(&[1, 1, 1])]).is_err());
    }

    #[test]
    fn ball_classes() {
        assert_eq!(
            ball_bounds_check(&TriArray::zeros(4)),
            BallClass::InInnerBall
        );
        assert_eq!(
            ball_bounds_check(&outer_tri(&sv(&[1, -1, 1, 1]))),
            BallClass::BetweenBalls
        );
        assert_eq!(
            ball_bounds_check(&TriArray::from_ints(2, &[2]).unwrap()),
            BallClass::OutsideOuterBall
        );
        let edge = TriArray::new(2, vec![rat(9, 20)]).unwrap();
        assert_eq!(ball_bounds_check(&edge), BallClass::InInnerBall);
    }
}

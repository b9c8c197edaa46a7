//! Seeded random states, unitaries and hermitian matrices for tests and
//! experiment suites. Callers own the generator so every run is reproducible.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{
    c, from_view, matmul, view, CMatrix, CVector, OperatorMatrix, StateVector, C64,
};

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix of i.i.d. standard complex gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random pure state.
pub fn state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> StateVector {
    let d: usize = dims.iter().product();
    let v = CVector::from_fn(d, |_, _| complex_gaussian(rng));
    StateVector::normalized(v, dims.to_vec()).expect("gaussian vector is nonzero")
}

/// Haar-random unitary matrix (QR of a Ginibre matrix with phase-fixed R).
pub fn unitary_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let g = ginibre(rng, d, d);
    let qr = view(&g).qr();
    let mut q = from_view(qr.compute_Q().as_ref());
    let r = qr.R();
    for k in 0..d {
        let diag = r[(k, k)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            c(1.0, 0.0)
        };
        for z in q.column_mut(k).iter_mut() {
            *z *= phase;
        }
    }
    q
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> OperatorMatrix {
    let d: usize = dims.iter().product();
    OperatorMatrix::new(unitary_matrix(rng, d), dims.to_vec()).expect("dims match")
}

/// Random hermitian matrix `(G + G†)/2` with Ginibre `G`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> OperatorMatrix {
    let d: usize = dims.iter().product();
    let g = ginibre(rng, d, d);
    let h = (&g + g.adjoint()).scale(0.5);
    OperatorMatrix::new(h, dims.to_vec()).expect("dims match")
}

/// Random product unitary `A ⊗ B`.
pub fn local_unitary<R: Rng + ?Sized>(rng: &mut R, left: usize, right: usize) -> OperatorMatrix {
    let a = unitary_matrix(rng, left);
    let b = unitary_matrix(rng, right);
    OperatorMatrix::new(a.kronecker(&b), vec![left, right]).expect("dims match")
}

/// Uniformly distributed unit vector in R³.
pub fn unit_axis<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Conjugation helper used by tests: `U M U†`.
pub fn conjugate(u: &CMatrix, m: &CMatrix) -> CMatrix {
    matmul(&matmul(u, m), &u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_satisfy_their_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert!(unitary(&mut rng, &[3, 4]).unitary_deviation() < 1e-12);
        assert!(hermitian(&mut rng, &[5]).hermitian_deviation() == 0.0);
        assert!((state(&mut rng, &[2, 2, 2]).norm() - 1.0).abs() < 1e-14);
        let a = unit_axis(&mut rng);
        assert!(((a[0] * a[0] + a[1] * a[1] + a[2] * a[2]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn same_seed_same_output() {
        let a = state(&mut ChaCha8Rng::seed_from_u64(3), &[4]);
        let b = state(&mut ChaCha8Rng::seed_from_u64(3), &[4]);
        assert_eq!(a, b);
    }
}

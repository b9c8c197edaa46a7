//! Two-qubit structures: Pauli words, the Bell basis, the AB and PQ
//! structures and the spin-1/2 rotation representation.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, kron, kron_all, matrix_exponential, CMatrix, OperatorMatrix, StateVector};
use crate::tps::{tps_from_basis, SymmetryRep, TensorProductStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> OperatorMatrix {
        let (o, l, i) = (c(0., 0.), c(1., 0.), c(0., 1.));
        let rows: [[_; 2]; 2] = match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        };
        OperatorMatrix::from_rows(&[&rows[0], &rows[1]], vec![2]).expect("2x2")
    }
}

/// A real multiple of a tensor product of Pauli matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliWord {
    pub factors: Vec<Pauli>,
    pub coefficient: f64,
}

impl PauliWord {
    pub fn new(factors: Vec<Pauli>, coefficient: f64) -> Self {
        Self {
            factors,
            coefficient,
        }
    }

    pub fn matrix(&self) -> OperatorMatrix {
        let mats: Vec<OperatorMatrix> = self.factors.iter().map(|p| p.matrix()).collect();
        let refs: Vec<&OperatorMatrix> = mats.iter().collect();
        kron_all(&refs)
            .unwrap_or_else(|| OperatorMatrix::identity(vec![1]))
            .scale(c(self.coefficient, 0.0))
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    /// Parses words such as `"XZ"` or `"IY"`.
    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .chars()
            .map(|ch| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidDims(format!(
                    "unknown Pauli factor {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::InvalidDims("empty Pauli word".into()));
        }
        Ok(Self::new(factors, 1.0))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient != 1.0 {
            write!(f, "{}*", self.coefficient)?;
        }
        for p in &self.factors {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

fn word(s: &str) -> OperatorMatrix {
    s.parse::<PauliWord>().expect("literal word").matrix()
}

/// The four computational basis states `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn computational_basis() -> Vec<StateVector> {
    (0..4)
        .map(|k| StateVector::basis(vec![2, 2], k).expect("index < 4"))
        .collect()
}

/// `|+,+⟩, |+,−⟩, |−,+⟩, |−,−⟩` with `|+,±⟩ = (|00⟩ ± |11⟩)/√2` and
/// `|−,±⟩ = (|01⟩ ± |10⟩)/√2`.
pub fn bell_basis() -> Vec<StateVector> {
    let h = c(FRAC_1_SQRT_2, 0.0);
    let o = c(0.0, 0.0);
    [[h, o, o, h], [h, o, o, -h], [o, h, h, o], [o, h, -h, o]]
        .iter()
        .map(|a| StateVector::from_slice(a, vec![2, 2]).expect("unit vectors"))
        .collect()
}

/// The CSCO `{σz⊗σz, σx⊗σx}` whose joint eigenbasis is the Bell basis.
pub fn bell_csco() -> Vec<OperatorMatrix> {
    vec![word("ZZ"), word("XX")]
}

/// Spanning elements of the P algebra: `I⊗I, σx⊗I, σy⊗σz, σz⊗σz`.
pub fn algebra_p() -> Vec<PauliWord> {
    ["II", "XI", "YZ", "ZZ"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect()
}

/// Spanning elements of the Q algebra: `I⊗I, I⊗σz, σx⊗σy, σx⊗σx`.
pub fn algebra_q() -> Vec<PauliWord> {
    ["II", "IZ", "XY", "XX"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect()
}

/// Eigenvalue labels of each basis vector under each operator.
///
/// Fails if the operators do not commute, if some vector is not a joint
/// eigenvector, or if two vectors carry identical labels.
pub fn csco_check(basis: &[StateVector], ops: &[OperatorMatrix]) -> Result<Vec<Vec<f64>>> {
    const TOL: f64 = 1e-10;
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            let n = a.commutator_norm(b);
            if n > TOL {
                return Err(Error::NonCommuting(n));
            }
        }
    }
    let mut labels = Vec::with_capacity(basis.len());
    for (vi, v) in basis.iter().enumerate() {
        let mut row = Vec::with_capacity(ops.len());
        for (oi, op) in ops.iter().enumerate() {
            if op.dim() != v.dim() {
                return Err(Error::DimensionMismatch {
                    expected: op.dim(),
                    actual: v.dim(),
                });
            }
            let ov = op.apply_raw(v.amplitudes());
            let lambda = v.amplitudes().dotc(&ov).re;
            let residual = (ov - v.amplitudes() * c(lambda, 0.0)).norm();
            if residual > TOL {
                return Err(Error::NotEigenvector {
                    vector: vi,
                    operator: oi,
                    residual,
                });
            }
            row.push(lambda);
        }
        labels.push(row);
    }
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            let same = labels[i]
                .iter()
                .zip(&labels[j])
                .all(|(a, b)| (a - b).abs() < 1e-8);
            if same {
                return Err(Error::DegenerateLabels(i, j));
            }
        }
    }
    Ok(labels)
}

/// The AB structure: the computational basis as a product of two qubits.
pub fn ab_tps() -> TensorProductStructure {
    TensorProductStructure::computational("AB", vec![2, 2])
}

/// The PQ structure induced by the Bell basis.
///
/// Factor indices follow the CSCO labels: the P index is `χ` (eigenvalue of
/// `σz⊗σz`), the Q index is `ξ` (eigenvalue of `σx⊗σx`), with `+1 ↦ 0` and
/// `−1 ↦ 1`. The `|−,−⟩` column enters with a minus sign so that `σx⊗I` and
/// `I⊗σz` act as `X⊗I` and `I⊗X` in the frame; with the bare Bell phases they
/// would act as `X⊗Z` and `Z⊗X`.
pub fn pq_tps() -> TensorProductStructure {
    let bell = bell_basis();
    let labels = csco_check(&bell, &bell_csco()).expect("Bell basis diagonalizes its CSCO");
    let bit = |l: f64| usize::from(l < 0.0);
    let mut ordered: Vec<Option<StateVector>> = vec![None; 4];
    for (v, l) in bell.into_iter().zip(&labels) {
        ordered[2 * bit(l[0]) + bit(l[1])] = Some(v);
    }
    let mut columns: Vec<StateVector> = ordered
        .into_iter()
        .map(|v| v.expect("labels distinct"))
        .collect();
    let flipped = columns[3].amplitudes().map(|z| -z);
    columns[3] = StateVector::new(flipped, vec![2, 2]).expect("unit vector");
    tps_from_basis("PQ", &columns, vec![2, 2]).expect("orthonormal")
}

fn check_axis(axis: [f64; 3]) -> Result<[f64; 3]> {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if n < 1e-12 || !n.is_finite() {
        return Err(Error::InvalidDims(format!(
            "rotation axis {axis:?} is zero"
        )));
    }
    Ok([axis[0] / n, axis[1] / n, axis[2] / n])
}

/// `exp(−i θ n̂·σ/2) = cos(θ/2) I − i sin(θ/2) n̂·σ`.
pub fn spin_half_rotation(axis: [f64; 3], angle: f64) -> Result<OperatorMatrix> {
    let n = check_axis(axis)?;
    let (s, co) = (angle / 2.0).sin_cos();
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            c(co, -s * n[2]),
            c(-s * n[1], -s * n[0]),
            c(s * n[1], -s * n[0]),
            c(co, s * n[2]),
        ],
    );
    OperatorMatrix::new(m, vec![2])
}

/// Generator of rotations about `axis` on two qubits:
/// `n̂·(σ⃗⊗I + I⊗σ⃗)/2`.
pub fn rotation_generator(axis: [f64; 3]) -> Result<OperatorMatrix> {
    let n = check_axis(axis)?;
    let single = Pauli::X
        .matrix()
        .scale(c(n[0], 0.))
        .add(&Pauli::Y.matrix().scale(c(n[1], 0.)))?
        .add(&Pauli::Z.matrix().scale(c(n[2], 0.)))?;
    let id = OperatorMatrix::identity(vec![2]);
    Ok(kron(&single, &id)
        .add(&kron(&id, &single))?
        .scale(c(0.5, 0.0)))
}

/// `exp(−i θ n̂·(σ⃗⊗I + I⊗σ⃗)/2)`.
pub fn rotation_rep(axis: [f64; 3], angle: f64) -> Result<OperatorMatrix> {
    matrix_exponential(&rotation_generator(axis)?, angle)
}

/// Deterministic sample of the rotation representation: angles
/// `{π/7, π/3, 1}` about each coordinate axis, plus the three generators.
pub fn sampled_rotation_rep() -> SymmetryRep {
    let axes = [
        ("x", [1.0, 0.0, 0.0]),
        ("y", [0.0, 1.0, 0.0]),
        ("z", [0.0, 0.0, 1.0]),
    ];
    let angles = [("pi/7", PI / 7.0), ("pi/3", PI / 3.0), ("1", 1.0)];
    let mut rep = SymmetryRep::new();
    for (an, axis) in axes {
        for (gn, angle) in angles {
            rep = rep
                .with_element(
                    format!("R_{an}({gn})"),
                    rotation_rep(axis, angle).expect("unit axis"),
                )
                .expect("rotations are unitary");
        }
        rep = rep
            .with_generator(
                format!("J_{an}"),
                rotation_generator(axis).expect("unit axis"),
            )
            .expect("generators are hermitian");
    }
    rep
}

//! Dense complex linear algebra over mixed-radix subsystem structures.
//!
//! Every vector and operator carries the ordered list of subsystem dimensions
//! of its computational basis. Flattened indices are row-major in that list:
//! the last subsystem varies fastest, so `|i j⟩` in `C^a ⊗ C^b` sits at
//! `i * b + j`, matching the Kronecker product convention.

use faer::{Accum, MatMut, MatRef, Par, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Allowed deviation of a state norm from one.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance for hermiticity and unitarity checks.
pub const OPERATOR_TOL: f64 = 1e-10;
/// Schmidt coefficients below this are treated as exact zeros.
pub const SCHMIDT_FLOOR: f64 = 1e-12;
/// Relative threshold (against the largest coefficient) for counting
/// operator Schmidt rank.
pub const RANK_REL_TOL: f64 = 1e-8;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidDims(format!("{dims:?}")));
    }
    let product: usize = dims.iter().product();
    if product != len {
        return Err(Error::DimensionMismatch {
            expected: product,
            actual: len,
        });
    }
    Ok(())
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// A normalized pure state over a mixed-radix computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl StateVector {
    /// Wraps `amplitudes`, rejecting vectors whose norm is not one.
    pub fn new(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Wraps `amplitudes` after rescaling to unit norm.
    pub fn normalized(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
            dims,
        })
    }

    pub fn from_slice(amplitudes: &[C64], dims: Vec<usize>) -> Result<Self> {
        Self::normalized(CVector::from_column_slice(amplitudes), dims)
    }

    /// Computational basis state with flat index `index`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let d: usize = dims.iter().product();
        if index >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: index,
            });
        }
        let mut amplitudes = CVector::zeros(d);
        amplitudes[index] = c(1.0, 0.0);
        Self::new(amplitudes, dims)
    }

    /// Product state `a ⊗ b`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            dims,
        }
    }

    pub(crate) fn from_parts_unchecked(amplitudes: CVector, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), amplitudes.len());
        Self { amplitudes, dims }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Same amplitudes, relabelled with a different subsystem structure.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.dim())?;
        Ok(Self {
            amplitudes: self.amplitudes.clone(),
            dims,
        })
    }

    /// Applies a unitary. The result keeps this state's subsystem structure.
    pub fn apply_unitary(&self, u: &OperatorMatrix) -> Result<StateVector> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: u.dim(),
            });
        }
        let amplitudes = &u.matrix * &self.amplitudes;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnitary((norm - 1.0).abs()));
        }
        Ok(Self {
            amplitudes,
            dims: self.dims.clone(),
        })
    }
}

/// A square complex matrix acting on a mixed-radix space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl OperatorMatrix {
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDims(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_dims(&dims, matrix.nrows())?;
        Ok(Self { matrix, dims })
    }

    /// Builds an operator from row-major entries.
    pub fn from_rows(rows: &[&[C64]], dims: Vec<usize>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDims("ragged rows".into()));
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| rows[i][j]), dims)
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self {
            matrix: CMatrix::identity(d, d),
            dims,
        }
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self {
            matrix: CMatrix::zeros(d, d),
            dims,
        }
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(values: &[f64], dims: Vec<usize>) -> Result<Self> {
        let diag = CVector::from_iterator(values.len(), values.iter().map(|&v| c(v, 0.0)));
        Self::new(CMatrix::from_diagonal(&diag), dims)
    }

    pub(crate) fn from_parts_unchecked(matrix: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::new(self.matrix.clone(), dims)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            dims: self.dims.clone(),
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &OperatorMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(Self {
            matrix: matmul(&self.matrix, &other.matrix),
            dims: self.dims.clone(),
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * factor),
            dims: self.dims.clone(),
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
            dims: self.dims.clone(),
        })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// `‖A − A†‖_F`, an upper bound on the operator-norm deviation.
    pub fn hermitian_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    /// `‖A†A − I‖_F`.
    pub fn unitary_deviation(&self) -> f64 {
        let gram = matmul_adjoint_left(&self.matrix, &self.matrix);
        (gram - CMatrix::identity(self.dim(), self.dim())).norm()
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let dev = self.hermitian_deviation();
        if dev > OPERATOR_TOL * self.hs_norm().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(())
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let dev = self.unitary_deviation();
        if dev > OPERATOR_TOL * (self.dim() as f64).sqrt().max(1.0) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(())
    }

    pub fn is_hermitian(&self) -> bool {
        self.ensure_hermitian().is_ok()
    }

    pub fn is_unitary(&self) -> bool {
        self.ensure_unitary().is_ok()
    }

    /// `O|v⟩` without any normalization.
    pub fn apply_raw(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    /// `‖[A, B]‖_F`.
    pub fn commutator_norm(&self, other: &OperatorMatrix) -> f64 {
        (matmul(&self.matrix, &other.matrix) - matmul(&other.matrix, &self.matrix)).norm()
    }
}

pub(crate) fn view(m: &CMatrix) -> MatRef<'_, C64> {
    MatRef::from_column_major_slice(m.as_slice(), m.nrows(), m.ncols())
}

pub(crate) fn from_view(m: MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Dense complex matrix product.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "matmul inner dimension mismatch");
    let (m, n) = (a.nrows(), b.ncols());
    let mut out = CMatrix::zeros(m, n);
    faer::linalg::matmul::matmul(
        MatMut::from_column_major_slice_mut(out.as_mut_slice(), m, n),
        Accum::Replace,
        view(a),
        view(b),
        c(1.0, 0.0),
        Par::Seq,
    );
    out
}

/// `a† · b`.
pub fn matmul_adjoint_left(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows(), "matmul inner dimension mismatch");
    let (m, n) = (a.ncols(), b.ncols());
    let mut out = CMatrix::zeros(m, n);
    faer::linalg::matmul::matmul(
        MatMut::from_column_major_slice_mut(out.as_mut_slice(), m, n),
        Accum::Replace,
        view(a).adjoint(),
        view(b),
        c(1.0, 0.0),
        Par::Seq,
    );
    out
}

/// Kronecker product `a ⊗ b`; subsystem lists are concatenated.
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    OperatorMatrix {
        matrix: a.matrix.kronecker(&b.matrix),
        dims,
    }
}

/// Kronecker product of a sequence of operators.
pub fn kron_all(ops: &[&OperatorMatrix]) -> Option<OperatorMatrix> {
    let (first, rest) = ops.split_first()?;
    Some(rest.iter().fold((*first).clone(), |acc, op| kron(&acc, op)))
}

/// Reorders the axes of a row-major tensor: output axis `k` is input axis
/// `perm[k]`.
pub(crate) fn permute_axes(data: &[C64], dims: &[usize], perm: &[usize]) -> Vec<C64> {
    let n = dims.len();
    let mut in_strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        in_strides[k] = in_strides[k + 1] * dims[k + 1];
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let strides: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();

    let mut out = Vec::with_capacity(data.len());
    let mut digits = vec![0usize; n];
    let mut src = 0usize;
    for _ in 0..data.len() {
        out.push(data[src]);
        // odometer increment over the output digits
        for k in (0..n).rev() {
            digits[k] += 1;
            src += strides[k];
            if digits[k] < out_dims[k] {
                break;
            }
            src -= strides[k] * out_dims[k];
            digits[k] = 0;
        }
    }
    out
}

/// Reorders subsystems: subsystem `k` of the result is subsystem `perm[k]`
/// of the input.
pub fn permute_subsystems(s: &StateVector, perm: &[usize]) -> Result<StateVector> {
    check_permutation(perm, s.dims.len())?;
    let data = permute_axes(s.amplitudes.as_slice(), &s.dims, perm);
    let dims = perm.iter().map(|&p| s.dims[p]).collect();
    Ok(StateVector {
        amplitudes: CVector::from_vec(data),
        dims,
    })
}

fn row_major(m: &CMatrix) -> Vec<C64> {
    m.transpose().as_slice().to_vec()
}

fn from_row_major(rows: usize, cols: usize, data: &[C64]) -> CMatrix {
    CMatrix::from_row_slice(rows, cols, data)
}

/// Conjugates an operator by the subsystem permutation `perm`, with the same
/// convention as [`permute_subsystems`].
pub fn permute_operator(op: &OperatorMatrix, perm: &[usize]) -> Result<OperatorMatrix> {
    let n = op.dims.len();
    check_permutation(perm, n)?;
    if perm.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(op.clone());
    }
    let mut tensor_dims = op.dims.clone();
    tensor_dims.extend_from_slice(&op.dims);
    let mut tensor_perm = perm.to_vec();
    tensor_perm.extend(perm.iter().map(|&p| p + n));
    let data = permute_axes(&row_major(&op.matrix), &tensor_dims, &tensor_perm);
    let d = op.dim();
    Ok(OperatorMatrix {
        matrix: from_row_major(d, d, &data),
        dims: perm.iter().map(|&p| op.dims[p]).collect(),
    })
}

/// A bipartition of the subsystems: `left` lists the subsystems on the left
/// side, every other subsystem is on the right.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Bipartition {
    left: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: impl Into<Vec<usize>>) -> Self {
        Self { left: left.into() }
    }

    /// The cut `{0..k} | {k..}`.
    pub fn first(k: usize) -> Self {
        Self {
            left: (0..k).collect(),
        }
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    /// Validates against `n` subsystems; returns (left, right) with the right
    /// side in ascending order.
    pub fn resolve(&self, n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        if self.left.is_empty() {
            return Err(Error::InvalidCut("left side is empty".into()));
        }
        let mut seen = vec![false; n];
        for &i in &self.left {
            if i >= n {
                return Err(Error::InvalidCut(format!("subsystem {i} out of range")));
            }
            if seen[i] {
                return Err(Error::InvalidCut(format!("subsystem {i} repeated")));
            }
            seen[i] = true;
        }
        let right: Vec<usize> = (0..n).filter(|&i| !seen[i]).collect();
        if right.is_empty() {
            return Err(Error::InvalidCut("right side is empty".into()));
        }
        Ok((self.left.clone(), right))
    }

    /// Subsystem permutation that brings the left side to the front.
    fn permutation(&self, n: usize) -> Result<(Vec<usize>, usize)> {
        let (left, right) = self.resolve(n)?;
        let k = left.len();
        let mut perm = left;
        perm.extend(right);
        Ok((perm, k))
    }
}

/// Schmidt decomposition of a pure state across a bipartition.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Descending, nonnegative.
    pub coefficients: Vec<f64>,
    /// Columns are the left Schmidt vectors (left subsystems in cut order).
    pub left_vectors: CMatrix,
    /// Columns are the right Schmidt vectors (right subsystems ascending).
    pub right_vectors: CMatrix,
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
    pub cut: Bipartition,
    perm: Vec<usize>,
}

impl SchmidtDecomposition {
    /// Number of coefficients above [`SCHMIDT_FLOOR`].
    pub fn rank(&self) -> usize {
        self.coefficients
            .iter()
            .filter(|&&l| l > SCHMIDT_FLOOR)
            .count()
    }

    /// `Σ λ_i |l_i⟩ ⊗ |r_i⟩` in the original subsystem order.
    pub fn reconstruct(&self) -> StateVector {
        let dl = self.left_vectors.nrows();
        let dr = self.right_vectors.nrows();
        let mut m = CMatrix::zeros(dl, dr);
        for (k, &lambda) in self.coefficients.iter().enumerate() {
            let l = self.left_vectors.column(k);
            let r = self.right_vectors.column(k);
            m += (l * r.transpose()).scale(lambda);
        }
        let mut dims = self.left_dims.clone();
        dims.extend_from_slice(&self.right_dims);
        let permuted = StateVector {
            amplitudes: CVector::from_vec(row_major(&m)),
            dims,
        };
        let mut inverse = vec![0; self.perm.len()];
        for (k, &p) in self.perm.iter().enumerate() {
            inverse[p] = k;
        }
        permute_subsystems(&permuted, &inverse).expect("stored permutation is valid")
    }
}

/// Thin SVD `m = U Σ V†` with descending singular values. Returns `Σ`, `U`
/// and `conj(V)`, so that `m = Σ_k σ_k u_k v_kᵀ` with `v_k` the returned
/// columns.
fn sorted_svd(m: CMatrix) -> (Vec<f64>, CMatrix, CMatrix) {
    let svd = view(&m).thin_svd().expect("svd converges");
    let values = svd
        .S()
        .column_vector()
        .iter()
        .map(|s| s.re.max(0.0))
        .collect();
    (
        values,
        from_view(svd.U()),
        from_view(svd.V()).map(|z| z.conj()),
    )
}

/// Singular values of `m`, sorted in descending order.
pub fn singular_values_desc(m: CMatrix) -> Vec<f64> {
    view(&m)
        .singular_values()
        .expect("svd converges")
        .into_iter()
        .map(|v| v.max(0.0))
        .collect()
}

/// `(M, perm, left_dims, right_dims)`.
type CutMatrix = (CMatrix, Vec<usize>, Vec<usize>, Vec<usize>);

/// Coefficient matrix `M[l, r]` of a state across `cut`, together with the
/// permutation used and the left/right dimension lists.
fn coefficient_matrix(s: &StateVector, cut: &Bipartition) -> Result<CutMatrix> {
    let (perm, k) = cut.permutation(s.dims.len())?;
    let permuted = permute_subsystems(s, &perm)?;
    let left_dims = permuted.dims[..k].to_vec();
    let right_dims = permuted.dims[k..].to_vec();
    let dl: usize = left_dims.iter().product();
    let dr: usize = right_dims.iter().product();
    let m = from_row_major(dl, dr, permuted.amplitudes.as_slice());
    Ok((m, perm, left_dims, right_dims))
}

/// Schmidt decomposition of `s` across `cut`, via the SVD of its coefficient
/// matrix.
pub fn schmidt_decompose(s: &StateVector, cut: &Bipartition) -> Result<SchmidtDecomposition> {
    let (m, perm, left_dims, right_dims) = coefficient_matrix(s, cut)?;
    let (coefficients, left_vectors, right_vectors) = sorted_svd(m);
    Ok(SchmidtDecomposition {
        coefficients,
        left_vectors,
        right_vectors,
        left_dims,
        right_dims,
        cut: cut.clone(),
        perm,
    })
}

/// Schmidt coefficients only; skips computing the Schmidt vectors.
pub fn schmidt_coefficients(s: &StateVector, cut: &Bipartition) -> Result<Vec<f64>> {
    let (m, ..) = coefficient_matrix(s, cut)?;
    Ok(singular_values_desc(m))
}

/// `−Σ λ² log₂ λ²` with coefficients below [`SCHMIDT_FLOOR`] dropped.
pub fn entropy_bits(coefficients: &[f64]) -> f64 {
    let e: f64 = coefficients
        .iter()
        .filter(|&&l| l > SCHMIDT_FLOOR)
        .map(|&l| {
            let p = l * l;
            -p * p.log2()
        })
        .sum();
    e.max(0.0)
}

/// Entropy of entanglement in bits.
pub fn entropy_of_entanglement(sd: &SchmidtDecomposition) -> f64 {
    entropy_bits(&sd.coefficients)
}

/// Shorthand for the entropy of `s` across `cut`.
pub fn entanglement_entropy(s: &StateVector, cut: &Bipartition) -> Result<f64> {
    Ok(entropy_bits(&schmidt_coefficients(s, cut)?))
}

fn normalize_keep(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidCut("keep set is empty".into()));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= n) {
        return Err(Error::InvalidCut(format!("keep set {keep:?} out of range")));
    }
    Ok(keep)
}

/// Reduced density matrix of a pure state on the subsystems in `keep`
/// (kept in ascending order).
pub fn partial_trace_state(s: &StateVector, keep: &[usize]) -> Result<OperatorMatrix> {
    let n = s.dims.len();
    let keep = normalize_keep(keep, n)?;
    let dims: Vec<usize> = keep.iter().map(|&k| s.dims[k]).collect();
    if keep.len() == n {
        let a = &s.amplitudes;
        return Ok(OperatorMatrix {
            matrix: a * a.adjoint(),
            dims,
        });
    }
    let (m, ..) = coefficient_matrix(s, &Bipartition::new(keep))?;
    Ok(OperatorMatrix {
        matrix: matmul(&m, &m.adjoint()),
        dims,
    })
}

/// Partial trace of an operator over every subsystem not in `keep`.
pub fn partial_trace_operator(rho: &OperatorMatrix, keep: &[usize]) -> Result<OperatorMatrix> {
    let n = rho.dims.len();
    let keep = normalize_keep(keep, n)?;
    let dims: Vec<usize> = keep.iter().map(|&k| rho.dims[k]).collect();
    if keep.len() == n {
        return Ok(OperatorMatrix {
            matrix: rho.matrix.clone(),
            dims,
        });
    }
    let (perm, _) = Bipartition::new(keep).permutation(n)?;
    let permuted = permute_operator(rho, &perm)?;
    let dk: usize = dims.iter().product();
    let dr = rho.dim() / dk;
    let m = &permuted.matrix;
    let reduced = CMatrix::from_fn(dk, dk, |a, b| {
        (0..dr).map(|r| m[(a * dr + r, b * dr + r)]).sum::<C64>()
    });
    Ok(OperatorMatrix {
        matrix: reduced,
        dims,
    })
}

/// Eigen-decomposition of a hermitian operator: ascending eigenvalues and the
/// matching eigenvector columns.
pub fn hermitian_eigen(h: &OperatorMatrix) -> Result<(Vec<f64>, CMatrix)> {
    h.ensure_hermitian()?;
    let sym = (&h.matrix + h.matrix.adjoint()).scale(0.5);
    let eig = view(&sym)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NumericalGuard("hermitian eigensolver did not converge".into()))?;
    let values = eig.S().column_vector().iter().map(|e| e.re).collect();
    Ok((values, from_view(eig.U())))
}

/// `exp(−i H t)` for hermitian `H`, through its eigen-decomposition.
pub fn matrix_exponential(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    let mut scaled = vectors.clone();
    for (k, &e) in values.iter().enumerate() {
        let phase = C64::from_polar(1.0, -e * t);
        for z in scaled.column_mut(k).iter_mut() {
            *z *= phase;
        }
    }
    Ok(OperatorMatrix {
        matrix: matmul(&scaled, &vectors.adjoint()),
        dims: h.dims.clone(),
    })
}

/// Operator Schmidt decomposition `u = ‖u‖_HS Σ_k c_k A_k ⊗ B_k` with
/// `tr(A_j† A_k) = tr(B_j† B_k) = δ_jk`.
#[derive(Clone, Debug)]
pub struct OperatorSchmidtDecomposition {
    /// Descending, normalized so that `Σ c_k² = 1`.
    pub coefficients: Vec<f64>,
    /// Hilbert-Schmidt norm of the decomposed operator.
    pub norm: f64,
    pub left_operators: Vec<CMatrix>,
    pub right_operators: Vec<CMatrix>,
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
    pub cut: Bipartition,
}

impl OperatorSchmidtDecomposition {
    /// Number of coefficients above `RANK_REL_TOL` times the largest.
    pub fn rank(&self) -> usize {
        let top = self.coefficients.first().copied().unwrap_or(0.0);
        self.coefficients
            .iter()
            .filter(|&&c| c > RANK_REL_TOL * top)
            .count()
    }
}

/// Operator Schmidt decomposition across `cut`. The operator is realigned so
/// that `R[(i_L j_L), (i_R j_R)] = u[(i_L i_R), (j_L j_R)]`; the SVD of `R`
/// has rank one exactly when `u` is a product `A ⊗ B`.
pub fn operator_schmidt_decompose(
    u: &OperatorMatrix,
    cut: &Bipartition,
) -> Result<OperatorSchmidtDecomposition> {
    let (perm, k) = cut.permutation(u.dims.len())?;
    let norm = u.hs_norm();
    if norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let permuted = permute_operator(u, &perm)?;
    let left_dims = permuted.dims[..k].to_vec();
    let right_dims = permuted.dims[k..].to_vec();
    let dl: usize = left_dims.iter().product();
    let dr: usize = right_dims.iter().product();
    let m = &permuted.matrix;
    let realigned = CMatrix::from_fn(dl * dl, dr * dr, |row, col| {
        let (il, jl) = (row / dl, row % dl);
        let (ir, jr) = (col / dr, col % dr);
        m[(il * dr + ir, jl * dr + jr)]
    });
    let (values, left, right) = sorted_svd(realigned.unscale(norm));
    let left_operators = (0..values.len())
        .map(|k| CMatrix::from_fn(dl, dl, |i, j| left[(i * dl + j, k)]))
        .collect();
    let right_operators = (0..values.len())
        .map(|k| CMatrix::from_fn(dr, dr, |i, j| right[(i * dr + j, k)]))
        .collect();
    Ok(OperatorSchmidtDecomposition {
        coefficients: values,
        norm,
        left_operators,
        right_operators,
        left_dims,
        right_dims,
        cut: cut.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pauli_x() -> OperatorMatrix {
        OperatorMatrix::from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]], vec![2])
            .unwrap()
    }

    fn pauli_y() -> OperatorMatrix {
        OperatorMatrix::from_rows(
            &[&[c(0., 0.), c(0., -1.)], &[c(0., 1.), c(0., 0.)]],
            vec![2],
        )
        .unwrap()
    }

    fn pauli_z() -> OperatorMatrix {
        OperatorMatrix::diagonal(&[1.0, -1.0], vec![2]).unwrap()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn kron_identities() {
        let i2 = OperatorMatrix::identity(vec![2]);
        let k = kron(&i2, &i2);
        assert_eq!(k.dims(), &[2, 2]);
        assert!(close(k.matrix(), &CMatrix::identity(4, 4), 0.0 + 1e-15));
        let zz = kron(&pauli_z(), &pauli_z());
        let expected = OperatorMatrix::diagonal(&[1., -1., -1., 1.], vec![4]).unwrap();
        assert!(close(zz.matrix(), expected.matrix(), 1e-15));
    }

    #[test]
    fn kron_entries_follow_index_formula() {
        let (x, y) = (pauli_x(), pauli_y());
        let xy = kron(&x, &y);
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        let expected = x.matrix()[(i, j)] * y.matrix()[(k, l)];
                        assert_eq!(xy.matrix()[(2 * i + k, 2 * j + l)], expected);
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random::state(&mut rng, &[2, 3, 4]);
        assert_eq!(permute_subsystems(&s, &[0, 1, 2]).unwrap(), s);

        let ket01 = StateVector::basis(vec![2, 2], 1).unwrap();
        let swapped = permute_subsystems(&ket01, &[1, 0]).unwrap();
        assert_eq!(swapped, StateVector::basis(vec![2, 2], 2).unwrap());

        let once = permute_subsystems(&s, &[2, 0, 1]).unwrap();
        assert_eq!(once.dims(), &[4, 2, 3]);
        let twice = permute_subsystems(&once, &[2, 0, 1]).unwrap();
        let thrice = permute_subsystems(&twice, &[2, 0, 1]).unwrap();
        assert_eq!(thrice, s);

        assert!(permute_subsystems(&s, &[0, 0, 1]).is_err());
        assert!(permute_subsystems(&s, &[0, 1]).is_err());
    }

    #[test]
    fn permutation_matches_explicit_index_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random::state(&mut rng, &[2, 3, 4]);
        let p = permute_subsystems(&s, &[1, 2, 0]).unwrap();
        for a in 0..2 {
            for b in 0..3 {
                for d in 0..4 {
                    let src = s.amplitudes()[(a * 3 + b) * 4 + d];
                    let dst = p.amplitudes()[(b * 4 + d) * 2 + a];
                    assert_eq!(src, dst);
                }
            }
        }
    }

    #[test]
    fn partial_trace_examples() {
        let zero = StateVector::basis(vec![2], 0).unwrap();
        let plus = StateVector::from_slice(&[c(1., 0.), c(1., 0.)], vec![2]).unwrap();
        let rho = partial_trace_state(&zero.tensor(&plus), &[0]).unwrap();
        let expected = OperatorMatrix::diagonal(&[1., 0.], vec![2]).unwrap();
        assert!(close(rho.matrix(), expected.matrix(), 1e-12));

        let bell =
            StateVector::from_slice(&[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)], vec![2, 2])
                .unwrap();
        for keep in [0, 1] {
            let rho = partial_trace_state(&bell, &[keep]).unwrap();
            assert!(close(
                rho.matrix(),
                &CMatrix::identity(2, 2).scale(0.5),
                1e-12
            ));
        }
        assert!(matches!(
            partial_trace_state(&bell, &[]),
            Err(Error::InvalidCut(_))
        ));
    }

    #[test]
    fn partial_trace_of_operator_agrees_with_state_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random::state(&mut rng, &[2, 3, 2]);
        let a = s.amplitudes();
        let rho = OperatorMatrix::new(a * a.adjoint(), vec![2, 3, 2]).unwrap();
        for keep in [vec![0], vec![1], vec![0, 2], vec![2, 1]] {
            let via_state = partial_trace_state(&s, &keep).unwrap();
            let via_op = partial_trace_operator(&rho, &keep).unwrap();
            assert!(close(via_state.matrix(), via_op.matrix(), 1e-12));
            assert!((via_op.trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn reduced_spectrum_matches_schmidt_two_qutrits() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random::state(&mut rng, &[3, 3]);
        let rho = partial_trace_state(&s, &[0]).unwrap();
        let (eigs, _) = hermitian_eigen(&rho).unwrap();
        let sd = schmidt_decompose(&s, &Bipartition::first(1)).unwrap();
        let mut squares: Vec<f64> = sd.coefficients.iter().map(|l| l * l).collect();
        squares.reverse();
        for (e, l2) in eigs.iter().zip(&squares) {
            assert!((e - l2).abs() < 1e-12);
            assert!(*e > -1e-10);
        }
    }

    #[test]
    fn schmidt_examples() {
        let ket00 = StateVector::basis(vec![2, 2], 0).unwrap();
        let sd = schmidt_decompose(&ket00, &Bipartition::first(1)).unwrap();
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-15);
        assert!(sd.coefficients[1].abs() < 1e-15);
        assert_eq!(entropy_of_entanglement(&sd), 0.0);

        let bell_minus =
            StateVector::from_slice(&[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)], vec![2, 2])
                .unwrap();
        let sd = schmidt_decompose(&bell_minus, &Bipartition::first(1)).unwrap();
        for l in &sd.coefficients {
            assert!((l - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
        assert!((entropy_of_entanglement(&sd) - 1.0).abs() < 1e-14);

        assert!(schmidt_decompose(&ket00, &Bipartition::new(vec![0, 1])).is_err());
        assert!(schmidt_decompose(&ket00, &Bipartition::new(Vec::<usize>::new())).is_err());
    }

    #[test]
    fn schmidt_reconstruction_random_and_noncontiguous() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random::state(&mut rng, &[4, 4]);
        let sd = schmidt_decompose(&s, &Bipartition::first(1)).unwrap();
        assert_eq!(sd.coefficients.len(), 4);
        let total: f64 = sd.coefficients.iter().map(|l| l * l).sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!((sd.reconstruct().amplitudes() - s.amplitudes()).norm() < 1e-10);

        let s = random::state(&mut rng, &[2, 3, 2]);
        let sd = schmidt_decompose(&s, &Bipartition::new(vec![2, 0])).unwrap();
        assert_eq!(sd.left_dims, vec![2, 2]);
        assert_eq!(sd.coefficients.len(), 3);
        assert!((sd.reconstruct().amplitudes() - s.amplitudes()).norm() < 1e-10);
        let gram = sd.left_vectors.adjoint() * &sd.left_vectors;
        assert!((gram - CMatrix::identity(3, 3)).norm() < 1e-10);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_bits(&[1.0, 0.0]), 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((entropy_bits(&[h, h]) - 1.0).abs() < 1e-15);
        // Binary entropy of p = 0.9, evaluated with 40-digit arithmetic:
        // 0.46899559358928122 (−0.9 log₂ 0.9 − 0.1 log₂ 0.1).
        let e = entropy_bits(&[0.9f64.sqrt(), 0.1f64.sqrt()]);
        assert!((e - 0.468_995_593_589_281_1).abs() < 1e-15);
        // values below the floor are ignored
        assert_eq!(entropy_bits(&[1.0, 1e-13]), 0.0);
    }

    #[test]
    fn exponential_examples() {
        let z = pauli_z();
        let e0 = matrix_exponential(&z, 0.0).unwrap();
        assert!(close(e0.matrix(), &CMatrix::identity(2, 2), 1e-15));
        let e = matrix_exponential(&z, std::f64::consts::FRAC_PI_2).unwrap();
        let expected = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0., -1.), c(0., 1.)]));
        assert!(close(e.matrix(), &expected, 1e-15));

        let non_herm =
            OperatorMatrix::from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(0., 0.), c(0., 0.)]], vec![2])
                .unwrap();
        assert!(matches!(
            matrix_exponential(&non_herm, 1.0),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn exponential_inverse_product_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = random::hermitian(&mut rng, &[8]);
        let forward = matrix_exponential(&h, 0.7).unwrap();
        let backward = matrix_exponential(&h, -0.7).unwrap();
        let prod = forward.compose(&backward).unwrap();
        assert!(close(prod.matrix(), &CMatrix::identity(8, 8), 1e-9));
        assert!(forward.unitary_deviation() < 1e-9);
    }

    #[test]
    fn operator_schmidt_ranks() {
        let zz = kron(&pauli_z(), &pauli_z());
        let cut = Bipartition::first(1);
        assert_eq!(operator_schmidt_decompose(&zz, &cut).unwrap().rank(), 1);

        let one = c(1., 0.);
        let zero = c(0., 0.);
        let cnot = OperatorMatrix::from_rows(
            &[
                &[one, zero, zero, zero],
                &[zero, one, zero, zero],
                &[zero, zero, zero, one],
                &[zero, zero, one, zero],
            ],
            vec![2, 2],
        )
        .unwrap();
        let osd = operator_schmidt_decompose(&cnot, &cut).unwrap();
        assert_eq!(osd.rank(), 2);
        // CNOT = |0⟩⟨0|⊗I + |1⟩⟨1|⊗X: two equal coefficients
        for c in &osd.coefficients[..2] {
            assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }

        let swap = OperatorMatrix::from_rows(
            &[
                &[one, zero, zero, zero],
                &[zero, zero, one, zero],
                &[zero, one, zero, zero],
                &[zero, zero, zero, one],
            ],
            vec![2, 2],
        )
        .unwrap();
        let osd = operator_schmidt_decompose(&swap, &cut).unwrap();
        assert_eq!(osd.rank(), 4);
        for c in &osd.coefficients {
            assert!((c - 0.5).abs() < 1e-12);
        }

        assert!(matches!(
            operator_schmidt_decompose(&OperatorMatrix::zeros(vec![2, 2]), &cut),
            Err(Error::ZeroOperator)
        ));
    }

    #[test]
    fn operator_schmidt_reassembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random::unitary(&mut rng, &[2, 3, 2]);
        let cut = Bipartition::new(vec![1]);
        let osd = operator_schmidt_decompose(&u, &cut).unwrap();
        let mut sum = CMatrix::zeros(12, 12);
        for k in 0..osd.coefficients.len() {
            sum += osd.left_operators[k]
                .kronecker(&osd.right_operators[k])
                .scale(osd.coefficients[k] * osd.norm);
        }
        let permuted = permute_operator(&u, &[1, 0, 2]).unwrap();
        assert!(close(&sum, permuted.matrix(), 1e-10));
    }

    #[test]
    fn gemm_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random::ginibre(&mut rng, 5, 7);
        let b = random::ginibre(&mut rng, 7, 3);
        assert!(close(&matmul(&a, &b), &(&a * &b), 1e-12));
        let d = random::ginibre(&mut rng, 5, 3);
        assert!(close(
            &matmul_adjoint_left(&a, &d),
            &(a.adjoint() * &d),
            1e-12
        ));
    }
}

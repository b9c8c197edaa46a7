//! Tensor product structures and the deciders built on them.
//!
//! A [`TensorProductStructure`] is a unitary adaptor whose columns form the
//! product basis of the structure, written in the computational basis. A state
//! or operator is moved into the TPS frame by conjugating with the adaptor;
//! every notion of locality or entanglement relative to the TPS is then the
//! ordinary one in that frame.

use crate::error::{Error, Result};
use crate::linalg::{
    entanglement_entropy, kron, matmul, matmul_adjoint_left, operator_schmidt_decompose,
    partial_trace_operator, permute_operator, Bipartition, CMatrix, CVector, OperatorMatrix,
    StateVector, C64, OPERATOR_TOL,
};

/// Relative tolerance for deciding that a hermitian operator is a sum of
/// local terms.
pub const SUM_LOCAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct TensorProductStructure {
    name: String,
    factor_dims: Vec<usize>,
    adaptor: CMatrix,
    computational: bool,
}

impl TensorProductStructure {
    /// The structure whose product basis is the computational basis.
    pub fn computational(name: impl Into<String>, factor_dims: Vec<usize>) -> Self {
        let d: usize = factor_dims.iter().product();
        Self {
            name: name.into(),
            factor_dims,
            adaptor: CMatrix::identity(d, d),
            computational: true,
        }
    }

    /// Wraps a unitary adaptor; column `k` is the product basis vector with
    /// mixed-radix index `k` over `factor_dims`.
    pub fn from_adaptor(
        name: impl Into<String>,
        adaptor: CMatrix,
        factor_dims: Vec<usize>,
    ) -> Result<Self> {
        let op = OperatorMatrix::new(adaptor, factor_dims.clone())?;
        op.ensure_unitary()?;
        Ok(Self {
            name: name.into(),
            factor_dims,
            adaptor: op.into_matrix(),
            computational: false,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn adaptor(&self) -> &CMatrix {
        &self.adaptor
    }

    pub fn dim(&self) -> usize {
        self.adaptor.nrows()
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: d,
            });
        }
        Ok(())
    }

    /// Coordinates of `s` in the adapted product basis.
    pub fn state_in_frame(&self, s: &StateVector) -> Result<StateVector> {
        self.check_dim(s.dim())?;
        let amplitudes = if self.computational {
            s.amplitudes().clone()
        } else {
            self.adaptor.ad_mul(s.amplitudes())
        };
        Ok(StateVector::from_parts_unchecked(
            amplitudes,
            self.factor_dims.clone(),
        ))
    }

    /// `adaptor† · op · adaptor`, labelled with the factor dimensions.
    pub fn operator_in_frame(&self, op: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_dim(op.dim())?;
        let m = if self.computational {
            op.matrix().clone()
        } else {
            matmul(
                &matmul_adjoint_left(&self.adaptor, op.matrix()),
                &self.adaptor,
            )
        };
        Ok(OperatorMatrix::from_parts_unchecked(
            m,
            self.factor_dims.clone(),
        ))
    }

    /// Inverse of [`Self::operator_in_frame`].
    pub fn operator_from_frame(&self, op: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_dim(op.dim())?;
        let m = if self.computational {
            op.matrix().clone()
        } else {
            matmul(&matmul(&self.adaptor, op.matrix()), &self.adaptor.adjoint())
        };
        Ok(OperatorMatrix::from_parts_unchecked(
            m,
            self.factor_dims.clone(),
        ))
    }

    /// Product basis vector with flat index `index`, in the computational
    /// basis.
    pub fn adapted_vector(&self, index: usize) -> StateVector {
        StateVector::from_parts_unchecked(
            self.adaptor.column(index).into_owned(),
            self.factor_dims.clone(),
        )
    }
}

/// A TPS induced by an orthonormal basis (e.g. a CSCO eigenbasis), taken in
/// the supplied mixed-radix order.
pub fn tps_from_basis(
    name: impl Into<String>,
    basis: &[StateVector],
    factor_dims: Vec<usize>,
) -> Result<TensorProductStructure> {
    let d: usize = factor_dims.iter().product();
    if basis.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: basis.len(),
        });
    }
    if let Some(bad) = basis.iter().find(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: bad.dim(),
        });
    }
    let adaptor = CMatrix::from_fn(d, d, |i, k| basis[k].amplitudes()[i]);
    let gram = matmul_adjoint_left(&adaptor, &adaptor);
    let deviation = (gram - CMatrix::identity(d, d)).norm();
    if deviation > OPERATOR_TOL {
        return Err(Error::NotOrthonormal(deviation));
    }
    Ok(TensorProductStructure {
        name: name.into(),
        factor_dims,
        adaptor,
        computational: false,
    })
}

/// Entropy of entanglement of `s` across `cut` of the structure `tps`.
pub fn entanglement_in_tps(
    s: &StateVector,
    tps: &TensorProductStructure,
    cut: &Bipartition,
) -> Result<f64> {
    entanglement_entropy(&tps.state_in_frame(s)?, cut)
}

/// Local factors recovered from a rank-one operator Schmidt decomposition.
#[derive(Clone, Debug)]
pub struct LocalFactors {
    /// Acts on the left subsystems of the cut (in cut order), scaled so that
    /// `‖A‖_HS² = d_left`, i.e. `|det A| = 1` when `A` is unitary.
    pub left: CMatrix,
    /// Acts on the right subsystems (ascending order); absorbs the scale.
    pub right: CMatrix,
    /// `‖u − A ⊗ B‖_HS` in the TPS frame.
    pub residual: f64,
    pub spectrum: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct NonlocalCertificate {
    /// Normalized operator Schmidt coefficients.
    pub spectrum: Vec<f64>,
    pub rank: usize,
    /// `‖u − A ⊗ B‖_HS` for the best product approximation.
    pub product_residual: f64,
}

#[derive(Clone, Debug)]
pub enum UnitaryLocality {
    Local(LocalFactors),
    Nonlocal(NonlocalCertificate),
}

impl UnitaryLocality {
    pub fn is_local(&self) -> bool {
        matches!(self, UnitaryLocality::Local(_))
    }

    pub fn spectrum(&self) -> &[f64] {
        match self {
            UnitaryLocality::Local(f) => &f.spectrum,
            UnitaryLocality::Nonlocal(c) => &c.spectrum,
        }
    }

    /// Distance to the best product approximation.
    pub fn residual(&self) -> f64 {
        match self {
            UnitaryLocality::Local(f) => f.residual,
            UnitaryLocality::Nonlocal(c) => c.product_residual,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            UnitaryLocality::Local(_) => 1,
            UnitaryLocality::Nonlocal(c) => c.rank,
        }
    }
}

/// Decides whether an operator (already in the frame) factors across `cut`.
pub(crate) fn decide_product(
    frame_op: &OperatorMatrix,
    cut: &Bipartition,
) -> Result<UnitaryLocality> {
    let osd = operator_schmidt_decompose(frame_op, cut)?;
    let (perm, _) = {
        let (left, right) = cut.resolve(frame_op.dims().len())?;
        let k = left.len();
        let mut perm = left;
        perm.extend(right);
        (perm, k)
    };
    let permuted = permute_operator(frame_op, &perm)?;
    let dl: usize = osd.left_dims.iter().product();
    let top = osd.coefficients[0];
    let left = osd.left_operators[0].scale((dl as f64).sqrt());
    let right = osd.right_operators[0].scale(osd.norm * top / (dl as f64).sqrt());
    let residual = (permuted.matrix() - left.kronecker(&right)).norm();
    let rank = osd.rank();
    let spectrum = osd.coefficients;
    Ok(if rank == 1 {
        UnitaryLocality::Local(LocalFactors {
            left,
            right,
            residual,
            spectrum,
        })
    } else {
        UnitaryLocality::Nonlocal(NonlocalCertificate {
            spectrum,
            rank,
            product_residual: residual,
        })
    })
}

/// Decides whether the unitary `u` factors as `A ⊗ B` across `cut` of `tps`.
pub fn is_local_unitary(
    u: &OperatorMatrix,
    tps: &TensorProductStructure,
    cut: &Bipartition,
) -> Result<UnitaryLocality> {
    tps.check_dim(u.dim())?;
    u.ensure_unitary()?;
    decide_product(&tps.operator_in_frame(u)?, cut)
}

/// Terms of `H = A ⊗ I + I ⊗ B + c I` in the TPS frame. `A` and `B` are
/// traceless.
#[derive(Clone, Debug)]
pub struct SplitTerms {
    pub left: OperatorMatrix,
    pub right: OperatorMatrix,
    pub identity_coefficient: f64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub enum SumLocality {
    Split(SplitTerms),
    NotSplit { residual: f64 },
}

impl SumLocality {
    pub fn is_split(&self) -> bool {
        matches!(self, SumLocality::Split(_))
    }

    pub fn residual(&self) -> f64 {
        match self {
            SumLocality::Split(t) => t.residual,
            SumLocality::NotSplit { residual } => *residual,
        }
    }
}

/// Projects the hermitian `h` onto `A ⊗ I + I ⊗ B + c I` and reports whether
/// the remainder vanishes (relative to `‖h‖_HS`).
pub fn is_sum_local(
    h: &OperatorMatrix,
    tps: &TensorProductStructure,
    cut: &Bipartition,
) -> Result<SumLocality> {
    tps.check_dim(h.dim())?;
    h.ensure_hermitian()?;
    let frame = tps.operator_in_frame(h)?;
    let n = frame.dims().len();
    let (left_idx, right_idx) = cut.resolve(n)?;
    let mut perm = left_idx.clone();
    perm.extend(right_idx.iter().copied());
    let permuted = permute_operator(&frame, &perm)?;
    let k = left_idx.len();
    let left_dims = permuted.dims()[..k].to_vec();
    let right_dims = permuted.dims()[k..].to_vec();
    let dl: usize = left_dims.iter().product();
    let dr: usize = right_dims.iter().product();

    let left_keep: Vec<usize> = (0..k).collect();
    let right_keep: Vec<usize> = (k..n).collect();
    let c = permuted.trace().re / (dl * dr) as f64;
    let shift = |m: CMatrix, d: usize, scale: f64| -> CMatrix {
        m.unscale(scale) - CMatrix::identity(d, d).scale(c)
    };
    let a = shift(
        partial_trace_operator(&permuted, &left_keep)?.into_matrix(),
        dl,
        dr as f64,
    );
    let b = shift(
        partial_trace_operator(&permuted, &right_keep)?.into_matrix(),
        dr,
        dl as f64,
    );
    let model = a.kronecker(&CMatrix::identity(dr, dr))
        + CMatrix::identity(dl, dl).kronecker(&b)
        + CMatrix::identity(dl * dr, dl * dr).scale(c);
    let residual = (permuted.matrix() - model).norm();
    let scale = h.hs_norm();
    if residual <= SUM_LOCAL_TOL * scale {
        Ok(SumLocality::Split(SplitTerms {
            left: OperatorMatrix::from_parts_unchecked(a, left_dims),
            right: OperatorMatrix::from_parts_unchecked(b, right_dims),
            identity_coefficient: c,
            residual,
        }))
    } else {
        Ok(SumLocality::NotSplit { residual })
    }
}

/// A finite sample of a unitary group representation, optionally with
/// hermitian generators of the sampled one-parameter subgroups.
#[derive(Clone, Debug, Default)]
pub struct SymmetryRep {
    elements: Vec<(String, OperatorMatrix)>,
    generators: Vec<(String, OperatorMatrix)>,
}

impl SymmetryRep {
    pub fn new() -> Self {
        Self::default()
    }

    /// The trivial representation `{I}`.
    pub fn trivial(dims: Vec<usize>) -> Self {
        Self {
            elements: vec![("identity".into(), OperatorMatrix::identity(dims))],
            generators: Vec::new(),
        }
    }

    pub fn with_element(mut self, label: impl Into<String>, u: OperatorMatrix) -> Result<Self> {
        u.ensure_unitary()?;
        self.elements.push((label.into(), u));
        Ok(self)
    }

    pub fn with_generator(mut self, label: impl Into<String>, h: OperatorMatrix) -> Result<Self> {
        h.ensure_hermitian()?;
        self.generators.push((label.into(), h));
        Ok(self)
    }

    pub fn elements(&self) -> &[(String, OperatorMatrix)] {
        &self.elements
    }

    pub fn generators(&self) -> &[(String, OperatorMatrix)] {
        &self.generators
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Verdict {
    pub label: String,
    pub pass: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SymmetryReport {
    pub invariant: bool,
    pub elements: Vec<Verdict>,
    pub generators: Vec<Verdict>,
    pub worst_residual: f64,
}

/// A TPS is symmetry invariant when every sampled element is local and every
/// generator is sum-local.
pub fn is_symmetry_invariant(
    tps: &TensorProductStructure,
    rep: &SymmetryRep,
    cut: &Bipartition,
) -> Result<SymmetryReport> {
    let elements = rep
        .elements
        .iter()
        .map(|(label, u)| {
            let v = is_local_unitary(u, tps, cut)?;
            Ok(Verdict {
                label: label.clone(),
                pass: v.is_local(),
                residual: v.residual(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let generators = rep
        .generators
        .iter()
        .map(|(label, h)| {
            let v = is_sum_local(h, tps, cut)?;
            Ok(Verdict {
                label: label.clone(),
                pass: v.is_split(),
                residual: v.residual(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let invariant = elements.iter().chain(&generators).all(|v| v.pass);
    let worst_residual = elements
        .iter()
        .chain(&generators)
        .map(|v| v.residual)
        .fold(0.0, f64::max);
    Ok(SymmetryReport {
        invariant,
        elements,
        generators,
        worst_residual,
    })
}

/// Two structures are equivalent across `cut` when their adaptors differ by a
/// local unitary, i.e. `adaptor_a† adaptor_b` factors.
pub fn are_equivalent(
    a: &TensorProductStructure,
    b: &TensorProductStructure,
    cut: &Bipartition,
) -> Result<bool> {
    if a.factor_dims != b.factor_dims {
        return Ok(false);
    }
    let change = OperatorMatrix::new(
        matmul_adjoint_left(&a.adaptor, &b.adaptor),
        a.factor_dims.clone(),
    )?;
    Ok(decide_product(&change, cut)?.is_local())
}

/// `A ⊗ I + I ⊗ B` on `left_dims ++ right_dims`.
pub fn sum_of_locals(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let ia = OperatorMatrix::identity(a.dims().to_vec());
    let ib = OperatorMatrix::identity(b.dims().to_vec());
    kron(a, &ib)
        .add(&kron(&ia, b))
        .expect("dimensions agree by construction")
}

/// `Σ_i c_i |v_i⟩` helper for assembling states from basis expansions.
pub fn superpose(terms: &[(C64, &StateVector)]) -> Result<StateVector> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidDims("empty superposition".into()))?;
    let mut acc = CVector::zeros(first.1.dim());
    for (coef, v) in terms {
        acc += v.amplitudes() * *coef;
    }
    StateVector::normalized(acc, first.1.dims().to_vec())
}

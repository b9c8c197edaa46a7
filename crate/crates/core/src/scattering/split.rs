//! Hamiltonians of the form `H_ext ⊗ I + I ⊗ H_int` and the check that their
//! evolution factors across external | internal.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, kron, matmul, matrix_exponential, Bipartition, CMatrix, CVector, OperatorMatrix, C64,
};
use crate::random;
use crate::tps::{
    entanglement_in_tps, is_sum_local, sum_of_locals, SumLocality, TensorProductStructure,
};

use super::Potential;

/// Largest `d_P · d_q` that is materialized densely.
pub const SPLIT_DENSE_CAP: usize = 4096;
/// Largest factor dimension accepted by [`build_split_model`].
pub const SPLIT_FACTOR_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct SplitHamiltonian {
    h_ext: OperatorMatrix,
    h_int: OperatorMatrix,
}

impl SplitHamiltonian {
    pub fn new(h_ext: OperatorMatrix, h_int: OperatorMatrix) -> Result<Self> {
        h_ext.ensure_hermitian()?;
        h_int.ensure_hermitian()?;
        let h_ext = h_ext.with_dims(vec![h_ext.dim()])?;
        let h_int = h_int.with_dims(vec![h_int.dim()])?;
        Ok(Self { h_ext, h_int })
    }

    /// Random hermitian factors of the given dimensions.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d_ext: usize, d_int: usize) -> Self {
        Self::new(
            random::hermitian(rng, &[d_ext]),
            random::hermitian(rng, &[d_int]),
        )
        .expect("random factors are hermitian")
    }

    pub fn external(&self) -> &OperatorMatrix {
        &self.h_ext
    }

    pub fn internal(&self) -> &OperatorMatrix {
        &self.h_int
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.h_ext.dim(), self.h_int.dim()]
    }

    /// `H_ext ⊗ I + I ⊗ H_int` on `[d_P, d_q]`.
    pub fn assemble(&self) -> OperatorMatrix {
        sum_of_locals(&self.h_ext, &self.h_int)
    }

    pub fn tps(&self) -> TensorProductStructure {
        TensorProductStructure::computational("external-internal", self.dims().to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitModelConfig {
    pub masses: [f64; 2],
    /// Points of the total-momentum grid.
    pub external_points: usize,
    /// Points of the relative-coordinate grid.
    pub internal_points: usize,
    /// Box length for both grids.
    pub length: f64,
    pub potential: Potential,
}

impl SplitModelConfig {
    pub fn total_mass(&self) -> f64 {
        self.masses[0] + self.masses[1]
    }

    pub fn reduced_mass(&self) -> f64 {
        self.masses[0] * self.masses[1] / self.total_mass()
    }
}

fn fourier_momenta(points: usize, length: f64) -> Vec<f64> {
    (0..points)
        .map(|k| {
            let k = if k < points / 2 {
                k as f64
            } else {
                k as f64 - points as f64
            };
            2.0 * PI * k / length
        })
        .collect()
}

/// `H_ext = P²/2M` diagonal on the total-momentum grid and
/// `H_int = q²/2μ + V(r)` on the relative-coordinate grid, with the kinetic
/// term applied through the discrete Fourier transform.
pub fn build_split_model(cfg: &SplitModelConfig) -> Result<SplitHamiltonian> {
    for d in [cfg.external_points, cfg.internal_points] {
        if d > SPLIT_FACTOR_CAP {
            return Err(Error::DimensionCap {
                actual: d,
                cap: SPLIT_FACTOR_CAP,
            });
        }
        if d == 0 {
            return Err(Error::InvalidDims(
                "split model factors must be nonempty".into(),
            ));
        }
    }
    if !(cfg.masses.iter().all(|m| m.is_finite() && *m > 0.0) && cfg.length > 0.0) {
        return Err(Error::InvalidConfig(
            "masses and length must be positive".into(),
        ));
    }
    let m_tot = cfg.total_mass();
    let mu = cfg.reduced_mass();
    let ext: Vec<f64> = fourier_momenta(cfg.external_points, cfg.length)
        .iter()
        .map(|p| p * p / (2.0 * m_tot))
        .collect();
    let h_ext = OperatorMatrix::diagonal(&ext, vec![cfg.external_points])?;

    let d = cfg.internal_points;
    let dx = cfg.length / d as f64;
    let q = fourier_momenta(d, cfg.length);
    // unitary DFT F[k, j] = exp(−2πi kj/d)/sqrt(d)
    let f = CMatrix::from_fn(d, d, |k, j| {
        C64::from_polar(
            1.0 / (d as f64).sqrt(),
            -2.0 * PI * (k * j) as f64 / d as f64,
        )
    });
    let kinetic = CMatrix::from_diagonal(&CVector::from_fn(d, |k, _| {
        c(q[k] * q[k] / (2.0 * mu), 0.0)
    }));
    let mut h = matmul(&matmul(&f.adjoint(), &kinetic), &f);
    for j in 0..d {
        let r = -cfg.length / 2.0 + j as f64 * dx;
        h[(j, j)] += c(cfg.potential.value(r, dx), 0.0);
    }
    // remove rounding asymmetry before the hermiticity check
    let h = (&h + h.adjoint()).scale(0.5);
    SplitHamiltonian::new(h_ext, OperatorMatrix::new(h, vec![d])?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitReport {
    pub times: Vec<f64>,
    /// `‖exp(−iHt) − exp(−iH_ext t) ⊗ exp(−iH_int t)‖_HS` per time.
    pub factorization_residuals: Vec<f64>,
    /// Largest deviation of the external | internal entropy from its initial
    /// value over all probe states and times.
    pub max_entropy_deviation: f64,
    pub sum_local_residual: f64,
    pub probes: usize,
}

/// Checks that the evolution of `sh` factors and leaves the external |
/// internal entanglement of `probes` random states unchanged.
pub fn verify_split_factorization<R: Rng + ?Sized>(
    sh: &SplitHamiltonian,
    times: &[f64],
    probes: usize,
    rng: &mut R,
) -> Result<SplitReport> {
    let [dp, dq] = sh.dims();
    if dp * dq > SPLIT_DENSE_CAP {
        return Err(Error::DimensionCap {
            actual: dp * dq,
            cap: SPLIT_DENSE_CAP,
        });
    }
    let h = sh.assemble();
    let tps = sh.tps();
    let cut = Bipartition::first(1);
    let sum_local_residual = match is_sum_local(&h, &tps, &cut)? {
        SumLocality::Split(terms) => terms.residual,
        SumLocality::NotSplit { residual } => residual,
    };
    let states: Vec<_> = (0..probes).map(|_| random::state(rng, &[dp, dq])).collect();
    let initial: Vec<f64> = states
        .iter()
        .map(|s| entanglement_in_tps(s, &tps, &cut))
        .collect::<Result<_>>()?;
    let mut residuals = Vec::with_capacity(times.len());
    let mut max_dev: f64 = 0.0;
    for &t in times {
        let u = matrix_exponential(&h, t)?;
        let factored = kron(
            &matrix_exponential(sh.external(), t)?,
            &matrix_exponential(sh.internal(), t)?,
        );
        residuals.push((u.matrix() - factored.matrix()).norm());
        for (s, e0) in states.iter().zip(&initial) {
            let e = entanglement_in_tps(&s.apply_unitary(&u)?, &tps, &cut)?;
            max_dev = max_dev.max((e - e0).abs());
        }
    }
    Ok(SplitReport {
        times: times.to_vec(),
        factorization_residuals: residuals,
        max_entropy_deviation: max_dev,
        sum_local_residual,
        probes,
    })
}

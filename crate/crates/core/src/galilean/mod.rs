//! Unitary Galilean action on a discretized momentum ⊗ spin space and the
//! check that it is local in the momentum/spin tensor product structure.
//!
//! The momentum lattice is `Δ·{−N/2, …, N/2 − 1}³` with periodic wrap. A state
//! is stored with index `point·(2s+1) + χ`, points flattened as
//! `(ix·N + iy)·N + iz` and `χ = 0` the `m = +s` sublevel. The action is
//!
//! `(U(g)φ)_χ(p) = exp(−i m a·v/2 + i a·p′ − i b E(p′)) Σ_χ′ D^s(u)_{χ′χ} φ_χ′(p′)`
//!
//! with `p′ = Rp + mv` and `E(p) = |p|²/2m + W`. With this convention
//! `U(g₂)U(g₁) = e^{iω} U(g₁·g₂)`, see [`composition_phase`].

pub mod angular;
pub mod group;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, entanglement_entropy, Bipartition, CMatrix, CVector, OperatorMatrix, StateVector,
};
use crate::tps::{is_local_unitary, TensorProductStructure};

pub use angular::{clebsch_gordan, degeneracy_count, spin_matrices, wigner_d, OrbitalSpinCoupling};
pub use group::{composition_phase, GalileanElement, OctahedralRotation};

/// Mass, internal energy and spin of an elementary particle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParticleSpec {
    pub mass: f64,
    pub internal_energy: f64,
    two_s: u32,
}

impl ParticleSpec {
    pub fn new(mass: f64, internal_energy: f64, spin: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "mass must be positive, got {mass}"
            )));
        }
        if !internal_energy.is_finite() {
            return Err(Error::InvalidConfig(
                "internal energy must be finite".into(),
            ));
        }
        let two_s = match angular::doubled(spin) {
            Some(t) if t >= 0 => t as u32,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "spin {spin} is not a nonnegative half-integer"
                )))
            }
        };
        Ok(Self {
            mass,
            internal_energy,
            two_s,
        })
    }

    pub fn spin(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn two_s(&self) -> u32 {
        self.two_s
    }

    pub fn spin_dim(&self) -> usize {
        angular::spin_dimension(self.two_s)
    }

    pub fn energy(&self, p: [f64; 3]) -> f64 {
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (2.0 * self.mass) + self.internal_energy
    }
}

/// Cubic momentum lattice with `N` points per axis and spacing `Δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumGrid {
    points_per_axis: usize,
    spacing: f64,
}

impl MomentumGrid {
    pub fn new(points_per_axis: usize, spacing: f64) -> Result<Self> {
        if points_per_axis < 2 || !points_per_axis.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "points per axis must be even and at least 2, got {points_per_axis}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        Ok(Self {
            points_per_axis,
            spacing,
        })
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer coordinates in `[−N/2, N/2)` of a flattened point.
    pub fn offsets(&self, point: usize) -> [i64; 3] {
        let n = self.points_per_axis;
        let half = (n / 2) as i64;
        [point / (n * n), (point / n) % n, point % n].map(|i| i as i64 - half)
    }

    /// Flattened point of integer coordinates, wrapped periodically.
    pub fn point(&self, offsets: [i64; 3]) -> usize {
        let n = self.points_per_axis as i64;
        let half = n / 2;
        let [x, y, z] = offsets.map(|o| (o + half).rem_euclid(n) as usize);
        let n = n as usize;
        (x * n + y) * n + z
    }

    pub fn momentum(&self, point: usize) -> [f64; 3] {
        self.offsets(point).map(|o| o as f64 * self.spacing)
    }
}

/// Amplitudes `φ_χ(p)` on a momentum grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumSpinState {
    grid: MomentumGrid,
    two_s: u32,
    amplitudes: CVector,
}

impl MomentumSpinState {
    pub fn new(grid: MomentumGrid, two_s: u32, amplitudes: CVector) -> Result<Self> {
        let expected = grid.len() * angular::spin_dimension(two_s);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: amplitudes.len(),
            });
        }
        Ok(Self {
            grid,
            two_s,
            amplitudes,
        })
    }

    /// Reinterprets a state on `[N³, 2s+1]` as momentum ⊗ spin amplitudes.
    pub fn from_state(grid: MomentumGrid, two_s: u32, s: &StateVector) -> Result<Self> {
        Self::new(grid, two_s, s.amplitudes().clone())
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.grid.len(), angular::spin_dimension(self.two_s)]
    }

    pub fn to_state(&self) -> Result<StateVector> {
        StateVector::new(self.amplitudes.clone(), self.dims())
    }
}

/// Momentum ⊗ spin as a computational two-factor structure.
pub fn momentum_spin_tps(grid: &MomentumGrid, spec: &ParticleSpec) -> TensorProductStructure {
    TensorProductStructure::computational("momentum-spin", vec![grid.len(), spec.spin_dim()])
}

struct Action {
    source: Vec<usize>,
    phase: Vec<C64Phase>,
    spin: CMatrix,
}

type C64Phase = crate::linalg::C64;

fn action(g: &GalileanElement, spec: &ParticleSpec, grid: &MomentumGrid) -> Result<Action> {
    let shift = g.grid_shift(spec.mass, grid).ok_or_else(|| {
        Error::GridIncompatible(format!(
            "m·v/Δ = {:?} is not integral",
            g.boost.map(|v| spec.mass * v / grid.spacing())
        ))
    })?;
    let a = g.translation;
    let v = g.boost;
    let m = spec.mass;
    let constant = -m * (a[0] * v[0] + a[1] * v[1] + a[2] * v[2]) / 2.0;
    let mut source = Vec::with_capacity(grid.len());
    let mut phase = Vec::with_capacity(grid.len());
    for point in 0..grid.len() {
        let rotated = g.rotation.apply_int(grid.offsets(point));
        let target = grid.point([0, 1, 2].map(|k| rotated[k] + shift[k]));
        let p = grid.momentum(target);
        let theta = constant + a[0] * p[0] + a[1] * p[1] + a[2] * p[2] - g.time * spec.energy(p);
        source.push(target);
        phase.push(c(theta.cos(), theta.sin()));
    }
    Ok(Action {
        source,
        phase,
        spin: wigner_d(spec.two_s, g.rotation.su2()),
    })
}

/// `U(g)φ`.
pub fn apply_galilean(
    g: &GalileanElement,
    spec: &ParticleSpec,
    state: &MomentumSpinState,
) -> Result<MomentumSpinState> {
    if state.two_s != spec.two_s {
        return Err(Error::DimensionMismatch {
            expected: spec.spin_dim(),
            actual: angular::spin_dimension(state.two_s),
        });
    }
    let act = action(g, spec, &state.grid)?;
    let ds = spec.spin_dim();
    let mut out = CVector::zeros(state.amplitudes.len());
    for (point, (&src, &ph)) in act.source.iter().zip(&act.phase).enumerate() {
        for chi in 0..ds {
            let mut acc = c(0.0, 0.0);
            for chi_p in 0..ds {
                acc += act.spin[(chi_p, chi)] * state.amplitudes[src * ds + chi_p];
            }
            out[point * ds + chi] = ph * acc;
        }
    }
    Ok(MomentumSpinState {
        grid: state.grid,
        two_s: state.two_s,
        amplitudes: out,
    })
}

/// Dense matrix of `U(g)` on `[N³, 2s+1]`.
pub fn galilean_operator(
    g: &GalileanElement,
    spec: &ParticleSpec,
    grid: &MomentumGrid,
) -> Result<OperatorMatrix> {
    let act = action(g, spec, grid)?;
    let ds = spec.spin_dim();
    let d = grid.len() * ds;
    let mut m = CMatrix::zeros(d, d);
    for (point, (&src, &ph)) in act.source.iter().zip(&act.phase).enumerate() {
        for chi in 0..ds {
            for chi_p in 0..ds {
                m[(point * ds + chi, src * ds + chi_p)] = ph * act.spin[(chi_p, chi)];
            }
        }
    }
    OperatorMatrix::new(m, vec![grid.len(), ds])
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementVerdict {
    pub label: String,
    pub local: bool,
    /// `‖U − A ⊗ B‖_HS` for the best product approximation.
    pub product_residual: f64,
    pub operator_schmidt_rank: usize,
    pub unitary_deviation: f64,
    /// Largest change of momentum/spin entanglement over the probe states.
    pub max_entropy_change: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityReport {
    pub all_local: bool,
    pub worst_residual: f64,
    pub max_entropy_change: f64,
    pub elements: Vec<ElementVerdict>,
}

/// Decides, for every element, whether `U(g)` factors across momentum ⊗ spin,
/// and measures how much it changes the entanglement of the probe states.
pub fn check_momentum_spin_locality(
    spec: &ParticleSpec,
    grid: &MomentumGrid,
    elements: &[GalileanElement],
    probes: &[MomentumSpinState],
) -> Result<LocalityReport> {
    let tps = momentum_spin_tps(grid, spec);
    let cut = Bipartition::first(1);
    let mut verdicts = Vec::with_capacity(elements.len());
    for g in elements {
        let u = galilean_operator(g, spec, grid)?;
        let locality = is_local_unitary(&u, &tps, &cut)?;
        let mut max_change: f64 = 0.0;
        for probe in probes {
            let before = entanglement_entropy(&probe.to_state()?, &cut)?;
            let after = entanglement_entropy(&apply_galilean(g, spec, probe)?.to_state()?, &cut)?;
            max_change = max_change.max((after - before).abs());
        }
        verdicts.push(ElementVerdict {
            label: g.label.clone(),
            local: locality.is_local(),
            product_residual: locality.residual(),
            operator_schmidt_rank: locality.rank(),
            unitary_deviation: u.unitary_deviation(),
            max_entropy_change: max_change,
        });
    }
    Ok(LocalityReport {
        all_local: verdicts.iter().all(|v| v.local),
        worst_residual: verdicts
            .iter()
            .map(|v| v.product_residual)
            .fold(0.0, f64::max),
        max_entropy_change: verdicts
            .iter()
            .map(|v| v.max_entropy_change)
            .fold(0.0, f64::max),
        elements: verdicts,
    })
}

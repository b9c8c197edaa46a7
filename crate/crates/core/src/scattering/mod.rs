//! Two particles on a periodic 1D lattice interacting through `V(x_A − x_B)`.
//!
//! Kinetic energy is the exact quadratic dispersion applied in Fourier space,
//! so in the continuum limit the Hamiltonian splits into centre-of-mass and
//! relative parts. Time stepping is Strang splitting, by default composed as a
//! symmetric triple jump to fourth order.

pub mod split;

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, entropy_bits, singular_values_desc, CMatrix, StateVector, C64};

pub use split::{
    build_split_model, verify_split_factorization, SplitHamiltonian, SplitModelConfig, SplitReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialShape {
    GaussianWell,
    GaussianBarrier,
    Contact,
}

/// `V(d) = V₀ exp(−d²/2w²)` for the gaussian shapes; the contact potential is
/// `V₀ δ(d)`, realized as `V₀/Δx` on the coincidence sites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Potential {
    pub shape: PotentialShape,
    pub strength: f64,
    pub width: f64,
}

impl Potential {
    pub fn value(&self, d: f64, dx: f64) -> f64 {
        match self.shape {
            PotentialShape::GaussianWell | PotentialShape::GaussianBarrier => {
                self.strength * (-d * d / (2.0 * self.width * self.width)).exp()
            }
            PotentialShape::Contact => {
                if d.abs() < 0.5 * dx {
                    self.strength / dx
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wavepacket {
    pub center: f64,
    pub momentum: f64,
    pub width: f64,
}

impl Wavepacket {
    /// Position-space width at time `t` under free flight.
    pub fn width_at(&self, mass: f64, t: f64) -> f64 {
        let s = self.width;
        s * (1.0 + (t / (2.0 * mass * s * s)).powi(2)).sqrt()
    }
}

fn default_sample_every() -> usize {
    10
}

fn default_energy_guard() -> f64 {
    1e-6
}

fn default_order() -> u32 {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringConfig {
    /// Lattice sites per particle; a power of two.
    pub sites: usize,
    /// Box length `L`; sites sit at `−L/2 + jΔx`.
    pub length: f64,
    pub masses: [f64; 2],
    pub potential: Potential,
    pub packets: [Wavepacket; 2],
    pub dt: f64,
    pub t_final: f64,
    /// Steps between recorded samples.
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    /// Largest tolerated relative drift of `⟨H⟩` before the run is aborted.
    #[serde(default = "default_energy_guard")]
    pub energy_guard: f64,
    /// Splitting order: 2 (Strang) or 4 (Strang composed as a triple jump).
    #[serde(default = "default_order")]
    pub order: u32,
}

/// One violated invariant of a configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// Bhattacharyya overlap `Σ |φ_A||φ_B| Δx` of two gaussian position densities.
pub fn packet_overlap(a: &Wavepacket, b: &Wavepacket) -> f64 {
    let (s1, s2) = (a.width, b.width);
    let d = a.center - b.center;
    let var = s1 * s1 + s2 * s2;
    (2.0 * s1 * s2 / var).sqrt() * (-d * d / (4.0 * var)).exp()
}

impl ScatteringConfig {
    /// Reference configuration used by the regression suite.
    pub fn reference() -> Self {
        Self {
            sites: 128,
            length: 64.0,
            masses: [1.0, 1.0],
            potential: Potential {
                shape: PotentialShape::GaussianWell,
                strength: -2.0,
                width: 1.0,
            },
            packets: [
                Wavepacket {
                    center: -12.0,
                    momentum: 2.0,
                    width: 2.0,
                },
                Wavepacket {
                    center: 12.0,
                    momentum: -2.0,
                    width: 2.0,
                },
            ],
            dt: 0.01,
            t_final: 12.0,
            sample_every: default_sample_every(),
            energy_guard: default_energy_guard(),
            order: default_order(),
        }
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.sites as f64
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    pub fn position(&self, j: usize) -> f64 {
        -self.length / 2.0 + j as f64 * self.spacing()
    }

    pub fn equal_masses(&self) -> bool {
        self.masses[0] == self.masses[1]
    }

    /// Every violated invariant, each naming its field.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |field: &str, message: String| {
            out.push(Diagnostic {
                field: field.into(),
                message,
            })
        };
        if self.sites < 4 || !self.sites.is_power_of_two() {
            push(
                "sites",
                format!("must be a power of two (at least 4), got {}", self.sites),
            );
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            push("length", format!("must be positive, got {}", self.length));
        }
        for (k, m) in self.masses.iter().enumerate() {
            if !(m.is_finite() && *m > 0.0) {
                push(
                    &format!("masses[{k}]"),
                    format!("must be positive, got {m}"),
                );
            }
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            push("dt", format!("must be positive, got {}", self.dt));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            push(
                "t_final",
                format!("must be nonnegative, got {}", self.t_final),
            );
        } else if self.dt > 0.0 {
            let steps = self.t_final / self.dt;
            if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
                push(
                    "t_final",
                    format!(
                        "must be a multiple of dt, got {} / {}",
                        self.t_final, self.dt
                    ),
                );
            }
        }
        if self.sample_every == 0 {
            push("sample_every", "must be at least 1".into());
        }
        if !(self.energy_guard.is_finite() && self.energy_guard > 0.0) {
            push(
                "energy_guard",
                format!("must be positive, got {}", self.energy_guard),
            );
        }
        if self.order != 2 && self.order != 4 {
            push("order", format!("must be 2 or 4, got {}", self.order));
        }
        let p = &self.potential;
        if !p.strength.is_finite() {
            push("potential.strength", "must be finite".into());
        }
        match p.shape {
            PotentialShape::GaussianWell if p.strength > 0.0 => push(
                "potential.strength",
                format!("a well needs strength ≤ 0, got {}", p.strength),
            ),
            PotentialShape::GaussianBarrier if p.strength < 0.0 => push(
                "potential.strength",
                format!("a barrier needs strength ≥ 0, got {}", p.strength),
            ),
            _ => {}
        }
        let valid_grid = self.length > 0.0 && self.sites >= 4;
        let dx = if valid_grid { self.spacing() } else { f64::NAN };
        if p.shape != PotentialShape::Contact && !(p.width >= dx) {
            push(
                "potential.width",
                format!("must be at least the grid spacing {dx}, got {}", p.width),
            );
        }
        if self.dt > 0.0 && valid_grid && p.strength.is_finite() {
            let vmax = (0..self.sites)
                .map(|j| p.value(j as f64 * dx, dx).abs())
                .fold(0.0, f64::max);
            if self.dt * vmax > 0.5 {
                push("dt", format!("dt·max|V| = {} exceeds 0.5", self.dt * vmax));
            }
        }
        for (k, w) in self.packets.iter().enumerate() {
            if !(w.width >= 2.0 * dx) {
                push(
                    &format!("packets[{k}].width"),
                    format!(
                        "must be at least two grid spacings ({}), got {}",
                        2.0 * dx,
                        w.width
                    ),
                );
                continue;
            }
            if !valid_grid || !(self.masses[k] > 0.0) || !(self.t_final >= 0.0) {
                continue;
            }
            let m = self.masses[k];
            let end = w.center + w.momentum / m * self.t_final;
            let margin = 4.0 * w.width_at(m, self.t_final);
            let half = self.length / 2.0;
            for (when, x, reach) in [
                ("initially", w.center, 4.0 * w.width),
                ("at t_final", end, margin),
            ] {
                if x.abs() + reach > half {
                    push(
                        &format!("packets[{k}].center"),
                        format!(
                            "packet {when} at {x} is within 4σ = {reach} of the box edge ±{half}"
                        ),
                    );
                }
            }
        }
        let overlap = packet_overlap(&self.packets[0], &self.packets[1]);
        if !(overlap < 1e-6) {
            push(
                "packets",
                format!("initial packets overlap {overlap:e} of the norm; must be below 1e-6"),
            );
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let diags = self.diagnostics();
        if diags.is_empty() {
            return Ok(());
        }
        Err(Error::InvalidConfig(
            diags
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ))
    }
}

/// `Ψ(x_A, x_B)` on the lattice, row-major with `x_A` the row index.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoParticleState {
    sites: usize,
    psi: Vec<C64>,
}

impl TwoParticleState {
    pub fn new(sites: usize, psi: Vec<C64>) -> Result<Self> {
        if psi.len() != sites * sites {
            return Err(Error::DimensionMismatch {
                expected: sites * sites,
                actual: psi.len(),
            });
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > crate::linalg::NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { sites, psi })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.psi
    }

    pub fn amplitude(&self, a: usize, b: usize) -> C64 {
        self.psi[a * self.sites + b]
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn coefficient_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.sites, self.sites, |a, b| self.amplitude(a, b))
    }

    pub fn to_state(&self) -> Result<StateVector> {
        StateVector::from_slice(&self.psi, vec![self.sites, self.sites])
    }

    /// Exchanges the roles of the two particles, `Ψ(x_A, x_B) ↦ Ψ(x_B, x_A)`.
    pub fn exchanged(&self) -> Self {
        let n = self.sites;
        let psi = (0..n * n).map(|i| self.psi[(i % n) * n + i / n]).collect();
        Self { sites: n, psi }
    }
}

fn packet_amplitudes(cfg: &ScatteringConfig, w: &Wavepacket) -> Vec<C64> {
    let mut v: Vec<C64> = (0..cfg.sites)
        .map(|j| {
            let x = cfg.position(j);
            let env = (-(x - w.center).powi(2) / (4.0 * w.width * w.width)).exp();
            C64::from_polar(env, w.momentum * x)
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Product of two normalized gaussian packets.
pub fn build_initial_state(cfg: &ScatteringConfig) -> Result<TwoParticleState> {
    cfg.validate()?;
    let a = packet_amplitudes(cfg, &cfg.packets[0]);
    let b = packet_amplitudes(cfg, &cfg.packets[1]);
    let n = cfg.sites;
    let psi: Vec<C64> = (0..n * n).map(|i| a[i / n] * b[i % n]).collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    TwoParticleState::new(n, psi.into_iter().map(|z| z / norm).collect())
}

/// Entanglement across particle A | particle B, in bits.
pub fn interparticle_entropy(state: &TwoParticleState) -> f64 {
    entropy_bits(&singular_values_desc(state.coefficient_matrix()))
}

/// Side `2N − 1` of the `(X, r)` grid.
pub fn shear_side(sites: usize) -> usize {
    2 * sites - 1
}

/// Embeds `Ψ(x_A, x_B)` into the `(X, r) = (i_A + i_B, i_A − i_B)` product
/// grid; `r` is stored with offset `N − 1`. Only parity-consistent sites are
/// populated.
pub fn com_shear_embed(state: &TwoParticleState, masses: [f64; 2]) -> Result<StateVector> {
    if masses[0] != masses[1] {
        return Err(Error::InvalidConfig(format!(
            "the centre-of-mass shear is lattice-exact only for equal masses, got {masses:?}"
        )));
    }
    let n = state.sites;
    let side = shear_side(n);
    let mut out = vec![c(0.0, 0.0); side * side];
    for a in 0..n {
        for b in 0..n {
            let x = a + b;
            let r = a + n - 1 - b;
            out[x * side + r] = state.amplitude(a, b);
        }
    }
    Ok(StateVector::from_parts_unchecked(
        crate::linalg::CVector::from_vec(out),
        vec![side, side],
    ))
}

/// Inverse of [`com_shear_embed`] on its image.
pub fn com_shear_extract(embedded: &StateVector, sites: usize) -> Result<TwoParticleState> {
    let side = shear_side(sites);
    if embedded.dims() != [side, side] {
        return Err(Error::InvalidDims(format!(
            "expected an embedded state on [{side}, {side}], got {:?}",
            embedded.dims()
        )));
    }
    let amps = embedded.amplitudes();
    let psi = (0..sites * sites)
        .map(|i| {
            let (a, b) = (i / sites, i % sites);
            amps[(a + b) * side + (a + sites - 1 - b)]
        })
        .collect();
    TwoParticleState::new(sites, psi)
}

/// Entanglement across the `X | r` cut of the embedded state, in bits.
///
/// The embedded coefficient matrix is block diagonal in the parities of `X`
/// and `r`, so its singular values are those of the two parity blocks.
pub fn ie_entropy(state: &TwoParticleState, masses: [f64; 2]) -> Result<f64> {
    if masses[0] != masses[1] {
        return Err(Error::InvalidConfig(format!(
            "internal-external entropy needs equal masses, got {masses:?}"
        )));
    }
    let n = state.sites;
    let mut values = Vec::with_capacity(2 * n);
    for parity in 0..2 {
        // X = 2i + parity, r + N − 1 = 2k + (parity + N − 1) mod 2
        let r_par = (parity + n - 1) % 2;
        let rows = (0..shear_side(n)).filter(|x| x % 2 == parity).count();
        let cols = (0..shear_side(n)).filter(|r| r % 2 == r_par).count();
        let mut block = CMatrix::zeros(rows, cols);
        for a in 0..n {
            for b in 0..n {
                let x = a + b;
                if x % 2 != parity {
                    continue;
                }
                let r = a + n - 1 - b;
                block[(x / 2, r / 2)] = state.amplitude(a, b);
            }
        }
        values.extend(singular_values_desc(block));
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(entropy_bits(&values))
}

/// Operators of one simulation: FFT plans, kinetic and potential phases.
pub struct Propagator {
    cfg: ScatteringConfig,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    /// `p` of each Fourier index.
    momenta: Vec<f64>,
    /// `V(x_A − x_B)` with minimum-image separation, row-major.
    potential: Vec<f64>,
    scratch: Vec<C64>,
}

const TRIPLE_JUMP: [f64; 3] = {
    // 1 / (2 − 2^{1/3}) and −2^{1/3} / (2 − 2^{1/3})
    let w1 = 1.351_207_191_959_657_6;
    let w0 = -1.702_414_383_919_315_3;
    [w1, w0, w1]
};

impl Propagator {
    pub fn new(cfg: &ScatteringConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.sites;
        let mut planner = FftPlanner::new();
        let dx = cfg.spacing();
        let momenta = (0..n)
            .map(|k| {
                let k = if k < n / 2 {
                    k as f64
                } else {
                    k as f64 - n as f64
                };
                2.0 * PI * k / cfg.length
            })
            .collect();
        let potential = (0..n * n)
            .map(|i| {
                let d = ((i / n) as i64 - (i % n) as i64).rem_euclid(n as i64);
                let d = if d >= (n / 2) as i64 { d - n as i64 } else { d };
                cfg.potential.value(d as f64 * dx, dx)
            })
            .collect();
        Ok(Self {
            cfg: cfg.clone(),
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
            momenta,
            potential,
            scratch: vec![c(0.0, 0.0); n * n],
        })
    }

    fn rows_fft(&self, data: &mut [C64], inverse: bool) {
        let plan = if inverse { &self.ifft } else { &self.fft };
        plan.process(data);
    }

    fn transpose(&mut self, data: &mut [C64]) {
        let n = self.cfg.sites;
        for a in 0..n {
            for b in 0..n {
                self.scratch[b * n + a] = data[a * n + b];
            }
        }
        data.copy_from_slice(&self.scratch);
    }

    /// Applies `f(p_A, p_B)` elementwise in momentum space.
    fn in_momentum_space(&mut self, data: &mut [C64], f: impl Fn(f64, f64) -> C64) {
        let n = self.cfg.sites;
        self.rows_fft(data, false);
        self.transpose(data);
        self.rows_fft(data, false);
        // data is now indexed [k_B][k_A]
        for kb in 0..n {
            for ka in 0..n {
                data[kb * n + ka] *= f(self.momenta[ka], self.momenta[kb]);
            }
        }
        self.rows_fft(data, true);
        self.transpose(data);
        self.rows_fft(data, true);
        let scale = 1.0 / (n * n) as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    fn kinetic_energy(&self, pa: f64, pb: f64) -> f64 {
        pa * pa / (2.0 * self.cfg.masses[0]) + pb * pb / (2.0 * self.cfg.masses[1])
    }

    fn strang(&mut self, psi: &mut [C64], tau: f64) {
        for (z, v) in psi.iter_mut().zip(&self.potential) {
            *z *= C64::from_polar(1.0, -v * tau / 2.0);
        }
        let (m_a, m_b) = (self.cfg.masses[0], self.cfg.masses[1]);
        self.in_momentum_space(psi, |pa, pb| {
            C64::from_polar(1.0, -(pa * pa / (2.0 * m_a) + pb * pb / (2.0 * m_b)) * tau)
        });
        for (z, v) in psi.iter_mut().zip(&self.potential) {
            *z *= C64::from_polar(1.0, -v * tau / 2.0);
        }
    }

    /// One time step of length `dt`.
    pub fn step(&mut self, state: &mut TwoParticleState) {
        let dt = self.cfg.dt;
        if self.cfg.order == 4 {
            for w in TRIPLE_JUMP {
                self.strang(&mut state.psi, w * dt);
            }
        } else {
            self.strang(&mut state.psi, dt);
        }
    }

    /// `(⟨p_A + p_B⟩, ⟨p_A² + p_B²⟩, ⟨H⟩)`.
    pub fn observables(&mut self, state: &TwoParticleState) -> (f64, f64, f64) {
        let n = self.cfg.sites;
        let mut buf = state.psi.clone();
        self.rows_fft(&mut buf, false);
        self.transpose(&mut buf);
        self.rows_fft(&mut buf, false);
        let norm = (n * n) as f64;
        let (mut p, mut p2, mut kin) = (0.0, 0.0, 0.0);
        for kb in 0..n {
            for ka in 0..n {
                let w = buf[kb * n + ka].norm_sqr() / norm;
                let (pa, pb) = (self.momenta[ka], self.momenta[kb]);
                p += w * (pa + pb);
                p2 += w * (pa * pa + pb * pb);
                kin += w * self.kinetic_energy(pa, pb);
            }
        }
        let pot: f64 = state
            .psi
            .iter()
            .zip(&self.potential)
            .map(|(z, v)| z.norm_sqr() * v)
            .sum();
        (p, p2, kin + pot)
    }

    /// Probability within two sites of the box edge, for either particle.
    pub fn boundary_mass(&self, state: &TwoParticleState) -> f64 {
        let n = self.cfg.sites;
        let edge = |i: usize| i < 2 || i >= n - 2;
        (0..n * n)
            .filter(|&i| edge(i / n) || edge(i % n))
            .map(|i| state.psi[i].norm_sqr())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub interparticle_entropy: f64,
    pub ie_entropy: Option<f64>,
    pub norm: f64,
    pub total_momentum: f64,
    pub energy: f64,
    pub boundary_mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    /// Largest `|‖Ψ(t)‖ − 1|` over the samples.
    pub norm_drift: f64,
    /// Largest `|⟨P⟩(t) − ⟨P⟩(0)|` divided by the momentum scale
    /// `sqrt(⟨p_A² + p_B²⟩(0))`.
    pub momentum_drift: f64,
    /// Largest `|⟨H⟩(t) − ⟨H⟩(0)| / |⟨H⟩(0)|`.
    pub energy_drift: f64,
    pub initial_interparticle_entropy: f64,
    pub final_interparticle_entropy: f64,
    pub peak_interparticle_entropy: f64,
    /// Peak-to-peak variation of the IE entropy over the samples.
    pub ie_drift: Option<f64>,
    pub max_boundary_mass: f64,
    pub boundary_warning: bool,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub summary: RunSummary,
    pub final_state: TwoParticleState,
}

/// Tail mass near the edge above which a run reports boundary contact.
pub const BOUNDARY_WARNING_MASS: f64 = 1e-8;

/// Evolves `state` for `n_steps` steps, sampling every `cfg.sample_every`
/// steps and at the end.
pub fn evolve(
    cfg: &ScatteringConfig,
    state: &TwoParticleState,
    n_steps: usize,
) -> Result<Trajectory> {
    let mut prop = Propagator::new(cfg)?;
    if state.sites != cfg.sites {
        return Err(Error::DimensionMismatch {
            expected: cfg.sites,
            actual: state.sites,
        });
    }
    let mut psi = state.clone();
    let (p0, p2_0, e0) = prop.observables(&psi);
    let momentum_scale = p2_0.sqrt().max(f64::MIN_POSITIVE);
    let energy_scale = e0.abs().max(f64::MIN_POSITIVE);
    let mut samples = Vec::new();
    let record = |prop: &mut Propagator, psi: &TwoParticleState, step: usize| -> Result<Sample> {
        let (p, _, e) = prop.observables(psi);
        let s = Sample {
            t: step as f64 * cfg.dt,
            interparticle_entropy: interparticle_entropy(psi),
            ie_entropy: if cfg.equal_masses() {
                Some(ie_entropy(psi, cfg.masses)?)
            } else {
                None
            },
            norm: psi.norm(),
            total_momentum: p,
            energy: e,
            boundary_mass: prop.boundary_mass(psi),
        };
        let drift = (e - e0).abs() / energy_scale;
        if drift > cfg.energy_guard {
            return Err(Error::NumericalGuard(format!(
                "relative energy drift {drift:e} at t = {} exceeds {:e}; reduce dt or raise the splitting order",
                s.t, cfg.energy_guard
            )));
        }
        Ok(s)
    };
    samples.push(record(&mut prop, &psi, 0)?);
    for step in 1..=n_steps {
        prop.step(&mut psi);
        if step % cfg.sample_every == 0 || step == n_steps {
            samples.push(record(&mut prop, &psi, step)?);
        }
    }
    let fold = |f: &dyn Fn(&Sample) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    let ie_drift = if cfg.equal_masses() {
        let ie: Vec<f64> = samples.iter().filter_map(|s| s.ie_entropy).collect();
        let hi = ie.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = ie.iter().copied().fold(f64::INFINITY, f64::min);
        Some(hi - lo)
    } else {
        None
    };
    let max_boundary_mass = fold(&|s| s.boundary_mass);
    let summary = RunSummary {
        norm_drift: fold(&|s| (s.norm - 1.0).abs()),
        momentum_drift: fold(&|s| (s.total_momentum - p0).abs()) / momentum_scale,
        energy_drift: fold(&|s| (s.energy - e0).abs()) / energy_scale,
        initial_interparticle_entropy: samples[0].interparticle_entropy,
        final_interparticle_entropy: samples
            .last()
            .expect("at least one sample")
            .interparticle_entropy,
        peak_interparticle_entropy: fold(&|s| s.interparticle_entropy),
        ie_drift,
        max_boundary_mass,
        boundary_warning: max_boundary_mass > BOUNDARY_WARNING_MASS,
    };
    Ok(Trajectory {
        samples,
        summary,
        final_state: psi,
    })
}

/// Builds the initial state and evolves it to `t_final`.
pub fn run(cfg: &ScatteringConfig) -> Result<Trajectory> {
    let state = build_initial_state(cfg)?;
    evolve(cfg, &state, cfg.steps())
}

#[cfg(test)]
mod tests;

//! Galilean group elements with rotations restricted to the octahedral group,
//! the symmetry group of a cubic momentum grid.

use rand::Rng;

use crate::linalg::CMatrix;
use crate::qubits::spin_half_rotation;

use super::MomentumGrid;

type Mat3 = [[i32; 3]; 3];

/// A proper rotation that maps the cubic grid to itself, together with one
/// of its two SU(2) lifts.
#[derive(Clone, Debug, PartialEq)]
pub struct OctahedralRotation {
    matrix: Mat3,
    su2: CMatrix,
}

fn det3(m: &Mat3) -> i32 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Axis and angle of a rotation matrix, angle in `[0, π]`.
fn axis_angle(m: &Mat3) -> ([f64; 3], f64) {
    let r = |i: usize, j: usize| m[i][j] as f64;
    let cos = ((r(0, 0) + r(1, 1) + r(2, 2) - 1.0) / 2.0).clamp(-1.0, 1.0);
    let angle = cos.acos();
    if angle < 1e-12 {
        return ([0.0, 0.0, 1.0], 0.0);
    }
    let anti = [r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)];
    let norm = anti.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1e-9 {
        return (anti.map(|x| x / norm), angle);
    }
    // angle π: R + I = 2 n nᵀ
    let sym = |i: usize, j: usize| r(i, j) + if i == j { 1.0 } else { 0.0 };
    let col = (0..3)
        .max_by(|&a, &b| sym(a, a).total_cmp(&sym(b, b)))
        .expect("three columns");
    let v = [sym(0, col), sym(1, col), sym(2, col)];
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (v.map(|x| x / n), angle)
}

impl OctahedralRotation {
    pub fn identity() -> Self {
        Self::from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).expect("identity is proper")
    }

    /// Accepts a signed permutation matrix with determinant +1.
    pub fn from_matrix(matrix: Mat3) -> Option<Self> {
        let signed_perm = (0..3).all(|i| {
            (0..3).map(|j| matrix[i][j].abs()).sum::<i32>() == 1
                && (0..3).map(|j| matrix[j][i].abs()).sum::<i32>() == 1
        });
        if !signed_perm || det3(&matrix) != 1 {
            return None;
        }
        let (axis, angle) = axis_angle(&matrix);
        let su2 = spin_half_rotation(axis, angle)
            .expect("unit axis")
            .into_matrix();
        Some(Self { matrix, su2 })
    }

    /// All 24 rotations, identity first.
    pub fn all() -> Vec<Self> {
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(24);
        for signs in 0..8 {
            for p in perms {
                let mut m = [[0; 3]; 3];
                for i in 0..3 {
                    m[i][p[i]] = if signs >> i & 1 == 1 { -1 } else { 1 };
                }
                if let Some(r) = Self::from_matrix(m) {
                    out.push(r);
                }
            }
        }
        out
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn su2(&self) -> &CMatrix {
        &self.su2
    }

    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        let m = &self.matrix;
        [0, 1, 2].map(|i| (0..3).map(|k| m[i][k] as f64 * x[k]).sum())
    }

    pub(crate) fn apply_int(&self, n: [i64; 3]) -> [i64; 3] {
        let m = &self.matrix;
        [0, 1, 2].map(|i| (0..3).map(|k| m[i][k] as i64 * n[k]).sum())
    }

    /// Product keeping track of the SU(2) lift.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: mul3(&self.matrix, &other.matrix),
            su2: &self.su2 * &other.su2,
        }
    }
}

/// `g = (b, a, v, R)`: time translation `b`, space translation `a`, boost
/// `v`, rotation `R`. The product is
/// `g₁·g₂ = (b₁ + b₂, a₁ + R₁a₂ + b₂v₁, v₁ + R₁v₂, R₁R₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GalileanElement {
    pub label: String,
    pub time: f64,
    pub translation: [f64; 3],
    pub boost: [f64; 3],
    pub rotation: OctahedralRotation,
}

fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

impl GalileanElement {
    pub fn new(
        time: f64,
        translation: [f64; 3],
        boost: [f64; 3],
        rotation: OctahedralRotation,
    ) -> Self {
        Self {
            label: "g".into(),
            time,
            translation,
            boost,
            rotation,
        }
    }

    pub fn identity() -> Self {
        Self::new(0.0, [0.0; 3], [0.0; 3], OctahedralRotation::identity()).labeled("identity")
    }

    pub fn time_translation(b: f64) -> Self {
        Self::new(b, [0.0; 3], [0.0; 3], OctahedralRotation::identity())
            .labeled(format!("time({b})"))
    }

    pub fn translation(a: [f64; 3]) -> Self {
        Self::new(0.0, a, [0.0; 3], OctahedralRotation::identity()).labeled(format!("shift{a:?}"))
    }

    pub fn boost(v: [f64; 3]) -> Self {
        Self::new(0.0, [0.0; 3], v, OctahedralRotation::identity()).labeled(format!("boost{v:?}"))
    }

    pub fn rotation(r: OctahedralRotation) -> Self {
        let label = format!("rot{:?}", r.matrix());
        Self::new(0.0, [0.0; 3], [0.0; 3], r).labeled(label)
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let ra2 = self.rotation.apply(other.translation);
        let a = add3(
            add3(self.translation, ra2),
            self.boost.map(|x| x * other.time),
        );
        Self {
            label: format!("{}*{}", self.label, other.label),
            time: self.time + other.time,
            translation: a,
            boost: add3(self.boost, self.rotation.apply(other.boost)),
            rotation: self.rotation.compose(&other.rotation),
        }
    }

    /// Grid shift `m v / Δ` per axis, if every component is an integer.
    pub fn grid_shift(&self, mass: f64, grid: &MomentumGrid) -> Option<[i64; 3]> {
        let mut out = [0i64; 3];
        for (o, v) in out.iter_mut().zip(self.boost) {
            let k = mass * v / grid.spacing();
            let r = k.round();
            if (k - r).abs() > 1e-9 * r.abs().max(1.0) {
                return None;
            }
            *o = r as i64;
        }
        Some(out)
    }

    /// Random element whose boost shifts the grid by at most `max_shift`
    /// points per axis.
    pub fn random_compatible<R: Rng + ?Sized>(
        rng: &mut R,
        grid: &MomentumGrid,
        mass: f64,
        max_shift: i64,
    ) -> Self {
        let rotations = OctahedralRotation::all();
        let rotation = rotations[rng.random_range(0..rotations.len())].clone();
        let boost = [0; 3]
            .map(|_: i32| rng.random_range(-max_shift..=max_shift) as f64 * grid.spacing() / mass);
        let translation = [0; 3].map(|_: i32| rng.random_range(-3.0..3.0));
        let time = rng.random_range(-2.0..2.0);
        Self::new(time, translation, boost, rotation).labeled("random")
    }
}

/// Phase `ω` in `U(g₂)U(g₁) = e^{iω} U(g₁·g₂)` for a particle of mass `m`.
pub fn composition_phase(mass: f64, g1: &GalileanElement, g2: &GalileanElement) -> f64 {
    let dot = |x: [f64; 3], y: [f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let g3 = g1.compose(g2);
    let ra2 = g1.rotation.apply(g2.translation);
    -mass / 2.0 * (dot(g2.translation, g2.boost) + dot(g1.translation, g1.boost))
        - mass * dot(ra2, g1.boost)
        - g2.time * mass * dot(g1.boost, g1.boost) / 2.0
        + mass * dot(g3.translation, g3.boost) / 2.0
}

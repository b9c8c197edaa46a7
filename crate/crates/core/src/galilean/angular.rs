//! SU(2) machinery: spin matrices, Wigner D matrices from SU(2) elements,
//! Clebsch-Gordan coefficients and orbital-spin coupling.
//!
//! Angular momenta are passed as `f64` half-integers at the public surface and
//! handled internally as doubled integers. Magnetic sublevels of a spin-`j`
//! space are ordered `m = j, j−1, …, −j`.

use crate::error::{Error, Result};
use crate::linalg::{c, matmul, matrix_exponential, CMatrix, OperatorMatrix};

/// Twice a half-integer, or `None` if `x` is not one.
pub fn doubled(x: f64) -> Option<i64> {
    let t = (2.0 * x).round();
    ((2.0 * x - t).abs() < 1e-9).then_some(t as i64)
}

fn doubled_nonneg(x: f64, what: &str) -> Result<u32> {
    match doubled(x) {
        Some(t) if t >= 0 => Ok(t as u32),
        _ => Err(Error::InvalidDims(format!(
            "{what} = {x} is not a nonnegative half-integer"
        ))),
    }
}

/// Dimension `2s + 1` of the spin-`s` representation.
pub fn spin_dimension(two_s: u32) -> usize {
    two_s as usize + 1
}

/// `(S_x, S_y, S_z)` for spin `two_s / 2`.
pub fn spin_matrices(two_s: u32) -> [OperatorMatrix; 3] {
    let d = spin_dimension(two_s);
    let s = two_s as f64 / 2.0;
    let m_of = |k: usize| s - k as f64;
    // S+ |m⟩ = sqrt(s(s+1) − m(m+1)) |m+1⟩; index k−1 holds m+1.
    let mut plus = CMatrix::zeros(d, d);
    for k in 1..d {
        let m = m_of(k);
        plus[(k - 1, k)] = c((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let sx = (&plus + &minus).scale(0.5);
    let sy = (&plus - &minus) * c(0.0, -0.5);
    let sz = CMatrix::from_fn(
        d,
        d,
        |i, j| if i == j { c(m_of(i), 0.0) } else { c(0.0, 0.0) },
    );
    [sx, sy, sz].map(|m| OperatorMatrix::new(m, vec![d]).expect("square"))
}

/// Rotation angle and axis of `u = cos(θ/2) I − i sin(θ/2) n̂·σ`, with
/// `θ ∈ [0, 2π]`.
pub fn su2_axis_angle(u: &CMatrix) -> (f64, [f64; 3]) {
    let cos_half = 0.5 * (u[(0, 0)] + u[(1, 1)]).re;
    let sx = -u[(0, 1)].im;
    let sy = -u[(0, 1)].re;
    let sz = -u[(0, 0)].im;
    let sin_half = (sx * sx + sy * sy + sz * sz).sqrt();
    let theta = 2.0 * sin_half.atan2(cos_half);
    if sin_half < 1e-300 {
        return (theta, [0.0, 0.0, 1.0]);
    }
    (theta, [sx / sin_half, sy / sin_half, sz / sin_half])
}

/// Spin-`two_s/2` representation matrix `D^s(u) = exp(−i θ n̂·S)` of an SU(2)
/// element. For spin 1/2 this returns `u` itself.
pub fn wigner_d(two_s: u32, u: &CMatrix) -> CMatrix {
    let (theta, n) = su2_axis_angle(u);
    let [sx, sy, sz] = spin_matrices(two_s);
    let generator = sx
        .scale(c(n[0], 0.0))
        .add(&sy.scale(c(n[1], 0.0)))
        .and_then(|g| g.add(&sz.scale(c(n[2], 0.0))))
        .expect("same dimension");
    matrix_exponential(&generator, theta)
        .expect("spin generators are hermitian")
        .into_matrix()
}

fn factorial(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Condon-Shortley Clebsch-Gordan coefficient `⟨j1 m1; j2 m2 | j m⟩`
/// (Racah's closed form). Selection-rule violations give 0.
pub fn clebsch_gordan(j1: f64, j2: f64, j: f64, m1: f64, m2: f64, m: f64) -> f64 {
    let args = [j1, j2, j, m1, m2, m].map(doubled);
    let [Some(j1), Some(j2), Some(j), Some(m1), Some(m2), Some(m)] = args else {
        return 0.0;
    };
    clebsch_gordan_doubled(j1, j2, j, m1, m2, m)
}

/// [`clebsch_gordan`] on doubled arguments.
pub fn clebsch_gordan_doubled(j1: i64, j2: i64, j: i64, m1: i64, m2: i64, m: i64) -> f64 {
    if j1 < 0 || j2 < 0 || j < 0 {
        return 0.0;
    }
    if m1 + m2 != m || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return 0.0;
    }
    if j < (j1 - j2).abs() || j > j1 + j2 {
        return 0.0;
    }
    // j_i ± m_i and j1 + j2 + j must be even in doubled units
    if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (j + m) % 2 != 0 || (j1 + j2 + j) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i64| x / 2;
    let prefactor = ((j + 1) as f64
        * factorial(h(j + j1 - j2))
        * factorial(h(j - j1 + j2))
        * factorial(h(j1 + j2 - j))
        / factorial(h(j1 + j2 + j) + 1))
    .sqrt();
    let norm = (factorial(h(j + m))
        * factorial(h(j - m))
        * factorial(h(j1 - m1))
        * factorial(h(j1 + m1))
        * factorial(h(j2 - m2))
        * factorial(h(j2 + m2)))
    .sqrt();
    let mut sum = 0.0;
    let k_max = h(j1 + j2 - j).min(h(j1 - m1)).min(h(j2 + m2));
    for k in 0..=k_max {
        let d = [h(j - j2 + m1) + k, h(j - j1 - m2) + k];
        if d.iter().any(|&x| x < 0) {
            continue;
        }
        let denom = factorial(k)
            * factorial(h(j1 + j2 - j) - k)
            * factorial(h(j1 - m1) - k)
            * factorial(h(j2 + m2) - k)
            * factorial(d[0])
            * factorial(d[1]);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    prefactor * norm * sum
}

/// Clebsch-Gordan matrix for `j1 ⊗ j2`: rows index the product basis
/// `(m1, m2)` (m1 major, both descending); columns index the coupled basis
/// `(j, m)` with `j` ascending from `|j1 − j2|` and `m` descending.
pub fn clebsch_gordan_matrix(two_j1: u32, two_j2: u32) -> CMatrix {
    let (j1, j2) = (two_j1 as i64, two_j2 as i64);
    let d1 = two_j1 as usize + 1;
    let d2 = two_j2 as usize + 1;
    let mut coupled = Vec::new();
    let mut j = (j1 - j2).abs();
    while j <= j1 + j2 {
        let mut m = j;
        while m >= -j {
            coupled.push((j, m));
            m -= 2;
        }
        j += 2;
    }
    CMatrix::from_fn(d1 * d2, coupled.len(), |row, col| {
        let m1 = j1 - 2 * (row / d2) as i64;
        let m2 = j2 - 2 * (row % d2) as i64;
        let (j, m) = coupled[col];
        c(clebsch_gordan_doubled(j1, j2, j, m1, m2, m), 0.0)
    })
}

/// Number of `(l, s)` pairs with `l ≤ l_max` and total spin `s` from
/// `s_a ⊗ s_b` that couple to total angular momentum `j`.
pub fn degeneracy_count(j: f64, s_a: f64, s_b: f64, l_max: u32) -> Result<u32> {
    let two_j = doubled_nonneg(j, "j")? as i64;
    let two_sa = doubled_nonneg(s_a, "s_A")? as i64;
    let two_sb = doubled_nonneg(s_b, "s_B")? as i64;
    let mut count = 0;
    let mut two_s = (two_sa - two_sb).abs();
    while two_s <= two_sa + two_sb {
        for l in 0..=l_max as i64 {
            let two_l = 2 * l;
            let parity_ok = (two_l + two_s + two_j) % 2 == 0;
            if parity_ok && (two_l - two_s).abs() <= two_j && two_j <= two_l + two_s {
                count += 1;
            }
        }
        two_s += 2;
    }
    Ok(count)
}

/// Labels of one coupled basis vector `|l, s; j, m_j⟩` (doubled `j`, `m_j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoupledLabel {
    pub l: u32,
    pub two_j: u32,
    pub two_m: i32,
}

/// Orbital ⊕_{l ≤ l_max} C^{2l+1} tensored with a spin: the product basis and
/// the coupled basis related by Clebsch-Gordan coefficients.
#[derive(Clone, Debug)]
pub struct OrbitalSpinCoupling {
    pub l_max: u32,
    pub two_s: u32,
    /// Columns: coupled vectors in the product basis `(l, m_l) ⊗ m_s`.
    pub adaptor: CMatrix,
    pub labels: Vec<CoupledLabel>,
}

impl OrbitalSpinCoupling {
    pub fn new(l_max: u32, two_s: u32) -> Self {
        let ds = spin_dimension(two_s);
        let orbital_dim: usize = (0..=l_max).map(|l| 2 * l as usize + 1).sum();
        let d = orbital_dim * ds;
        let mut adaptor = CMatrix::zeros(d, d);
        let mut labels = Vec::with_capacity(d);
        let mut offset = 0usize;
        let mut col = 0usize;
        for l in 0..=l_max {
            let two_l = 2 * l as i64;
            let dl = 2 * l as usize + 1;
            let cg = clebsch_gordan_matrix(2 * l, two_s);
            let mut j = (two_l - two_s as i64).abs();
            let mut cg_col = 0;
            while j <= two_l + two_s as i64 {
                let mut m = j;
                while m >= -j {
                    for ml in 0..dl {
                        for ms in 0..ds {
                            let row = (offset + ml) * ds + ms;
                            adaptor[(row, col)] = cg[(ml * ds + ms, cg_col)];
                        }
                    }
                    labels.push(CoupledLabel {
                        l,
                        two_j: j as u32,
                        two_m: m as i32,
                    });
                    col += 1;
                    cg_col += 1;
                    m -= 2;
                }
                j += 2;
            }
            offset += dl;
        }
        Self {
            l_max,
            two_s,
            adaptor,
            labels,
        }
    }

    /// Total angular momentum components `L_i ⊗ I + I ⊗ S_i` in the product
    /// basis.
    pub fn total_angular_momentum(&self) -> [CMatrix; 3] {
        let ds = spin_dimension(self.two_s);
        let spin = spin_matrices(self.two_s);
        let orbital_dim: usize = (0..=self.l_max).map(|l| 2 * l as usize + 1).sum();
        let mut orbital = [0, 1, 2].map(|_| CMatrix::zeros(orbital_dim, orbital_dim));
        let mut offset = 0;
        for l in 0..=self.l_max {
            let dl = 2 * l as usize + 1;
            let block = spin_matrices(2 * l);
            for (o, b) in orbital.iter_mut().zip(&block) {
                o.view_mut((offset, offset), (dl, dl)).copy_from(b.matrix());
            }
            offset += dl;
        }
        [0, 1, 2].map(|i| {
            orbital[i].kronecker(&CMatrix::identity(ds, ds))
                + CMatrix::identity(orbital_dim, orbital_dim).kronecker(spin[i].matrix())
        })
    }

    /// Norm of the entries of `adaptor† O adaptor` that connect different
    /// `(l, j)` blocks.
    pub fn off_block_norm(&self, op: &CMatrix) -> f64 {
        let frame = matmul(&matmul(&self.adaptor.adjoint(), op), &self.adaptor);
        let mut acc = 0.0;
        for (a, la) in self.labels.iter().enumerate() {
            for (b, lb) in self.labels.iter().enumerate() {
                if (la.l, la.two_j) != (lb.l, lb.two_j) {
                    acc += frame[(a, b)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

//! Clebsch-Gordan coefficients, orbital ⊗ spin coupling and the degeneracy
//! of total angular momentum in a two-particle system.

use tpslab::galilean::angular::{clebsch_gordan, degeneracy_count, OrbitalSpinCoupling};

fn main() -> tpslab::error::Result<()> {
    println!("1 ⊗ 1/2:");
    for (j, m) in [(1.5f64, 1.5f64), (1.5, 0.5), (0.5, 0.5)] {
        for m1 in [1.0f64, 0.0, -1.0] {
            let m2 = m - m1;
            if m2.abs() > 0.5 {
                continue;
            }
            let c = clebsch_gordan(1.0, 0.5, j, m1, m2, m);
            println!("  <1 {m1:+}; 1/2 {m2:+} | {j} {m:+}> = {c:+.6}");
        }
    }

    let coupling = OrbitalSpinCoupling::new(2, 1);
    let j = coupling.total_angular_momentum();
    let j2 = &j[0] * &j[0] + &j[1] * &j[1] + &j[2] * &j[2];
    println!(
        "\nl ≤ 2 with spin 1/2: {} coupled states, J² off-block norm {:.1e}",
        coupling.labels.len(),
        coupling.off_block_norm(&j2)
    );

    println!("\nmultiplicity of j for two spin-1/2 particles (l ≤ 4):");
    for j in [0.0, 1.0, 2.0, 3.0] {
        println!("  j = {j}: {}", degeneracy_count(j, 0.5, 0.5, 4)?);
    }
    Ok(())
}

//! A spin-1/2 particle on an 8×8×8 momentum grid: Galilean transformations
//! factor across momentum ⊗ spin and preserve momentum-spin entanglement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpslab::galilean::{
    apply_galilean, check_momentum_spin_locality, composition_phase, GalileanElement, MomentumGrid,
    MomentumSpinState, ParticleSpec,
};
use tpslab::linalg::{entanglement_entropy, Bipartition};
use tpslab::random;

fn main() -> tpslab::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = ParticleSpec::new(2.0, 0.0, 0.5)?;
    let grid = MomentumGrid::new(8, 0.5)?;
    let cut = Bipartition::first(1);
    let psi = MomentumSpinState::from_state(
        grid,
        spec.two_s(),
        &random::state(&mut rng, &[grid.len(), 2]),
    )?;
    let s0 = entanglement_entropy(&psi.to_state()?, &cut)?;
    println!("momentum | spin entropy of the probe: {s0:.12}");

    let elements: Vec<GalileanElement> = (0..5)
        .map(|k| {
            GalileanElement::random_compatible(&mut rng, &grid, spec.mass, 2)
                .labeled(format!("g{k}"))
        })
        .collect();
    for g in &elements {
        let s = entanglement_entropy(&apply_galilean(g, &spec, &psi)?.to_state()?, &cut)?;
        println!(
            "{}: boost {:?}, entropy change {:.1e}",
            g.label,
            g.boost,
            (s - s0).abs()
        );
    }
    let w = composition_phase(spec.mass, &elements[0], &elements[1]);
    println!("phase of U(g1)U(g0) relative to U(g0·g1): {w:.6}");

    let report =
        check_momentum_spin_locality(&spec, &grid, &elements[..3], std::slice::from_ref(&psi))?;
    for v in &report.elements {
        println!(
            "{}: local {} (operator Schmidt rank {}, residual {:.1e})",
            v.label, v.local, v.operator_schmidt_rank, v.product_residual
        );
    }
    Ok(())
}

//! Rotations act locally on the AB structure and leave its entanglement
//! alone, but they move states across the PQ cut.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpslab::linalg::{entanglement_entropy, Bipartition, StateVector};
use tpslab::qubits::{ab_tps, pq_tps, rotation_rep, sampled_rotation_rep};
use tpslab::random;
use tpslab::tps::{entanglement_in_tps, is_local_unitary, is_symmetry_invariant};

fn main() -> tpslab::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cut = Bipartition::first(1);
    let (ab, pq) = (ab_tps(), pq_tps());

    let report = is_symmetry_invariant(&ab, &sampled_rotation_rep(), &cut)?;
    println!(
        "AB invariant under the sampled rotations: {}",
        report.invariant
    );
    let report = is_symmetry_invariant(&pq, &sampled_rotation_rep(), &cut)?;
    println!(
        "PQ invariant under the sampled rotations: {}\n",
        report.invariant
    );

    let psi = random::state(&mut rng, &[2, 2]);
    let zero = StateVector::basis(vec![2, 2], 0)?;
    println!(
        "{:>28} {:>8} {:>12} {:>10}",
        "axis", "angle", "S_AB(psi)", "S_PQ(|00>)"
    );
    for _ in 0..6 {
        let axis = random::unit_axis(&mut rng);
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let u = rotation_rep(axis, angle)?;
        assert!(is_local_unitary(&u, &ab, &cut)?.is_local());
        println!(
            "[{:>7.3}, {:>7.3}, {:>7.3}] {:>8.3} {:>12.9} {:>10.4}",
            axis[0],
            axis[1],
            axis[2],
            angle,
            entanglement_entropy(&psi.apply_unitary(&u)?, &cut)?,
            entanglement_in_tps(&zero.apply_unitary(&u)?, &pq, &cut)?
        );
    }
    Ok(())
}

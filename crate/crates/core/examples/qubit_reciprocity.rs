//! Entanglement of the computational and Bell bases measured in the AB and
//! PQ structures of two qubits.

use tpslab::linalg::Bipartition;
use tpslab::qubits::{
    ab_tps, algebra_p, algebra_q, bell_basis, bell_csco, computational_basis, csco_check, pq_tps,
};
use tpslab::tps::entanglement_in_tps;

fn main() -> tpslab::error::Result<()> {
    let (ab, pq) = (ab_tps(), pq_tps());
    let cut = Bipartition::first(1);

    let labels = csco_check(&bell_basis(), &bell_csco())?;
    println!("Bell basis labels under (ZZ, XX): {labels:?}");
    let p: Vec<String> = algebra_p().iter().map(|w| w.to_string()).collect();
    let q: Vec<String> = algebra_q().iter().map(|w| w.to_string()).collect();
    println!("P algebra: {p:?}\nQ algebra: {q:?}\n");

    println!("{:<8} {:>8} {:>8}", "state", "S_AB", "S_PQ");
    let names = [
        "|00>", "|01>", "|10>", "|11>", "|Phi+>", "|Phi->", "|Psi+>", "|Psi->",
    ];
    let states = computational_basis().into_iter().chain(bell_basis());
    for (name, s) in names.iter().zip(states) {
        let e_ab = entanglement_in_tps(&s, &ab, &cut)?;
        let e_pq = entanglement_in_tps(&s, &pq, &cut)?;
        println!("{name:<8} {e_ab:>8.4} {e_pq:>8.4}");
    }
    // σz⊗σz belongs to the P algebra and every |jk⟩ is one of its
    // eigenvectors, which pins the PQ entropy of |jk⟩ to zero.
    Ok(())
}

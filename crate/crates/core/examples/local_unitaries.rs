//! Operator Schmidt rank separates product unitaries from entangling ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpslab::linalg::{operator_schmidt_decompose, Bipartition, OperatorMatrix, C64};
use tpslab::random;
use tpslab::tps::{is_local_unitary, TensorProductStructure};

fn main() -> tpslab::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tps = TensorProductStructure::computational("AB", vec![3, 4]);
    let cut = Bipartition::first(1);

    let product = random::local_unitary(&mut rng, 3, 4);
    let generic = random::unitary(&mut rng, &[3, 4]);
    for (name, u) in [("A ⊗ B", &product), ("generic", &generic)] {
        let v = is_local_unitary(u, &tps, &cut)?;
        println!(
            "{name:>8}: rank {}, product residual {:.1e}",
            v.rank(),
            v.residual()
        );
    }

    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let cnot = OperatorMatrix::from_rows(
        &[&[l, o, o, o], &[o, l, o, o], &[o, o, o, l], &[o, o, l, o]],
        vec![2, 2],
    )?;
    let osd = operator_schmidt_decompose(&cnot, &Bipartition::first(1))?;
    println!(
        "    CNOT: operator Schmidt coefficients {:?}",
        osd.coefficients
    );
    Ok(())
}

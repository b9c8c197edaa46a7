use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpslab::galilean::angular::clebsch_gordan;
use tpslab::linalg::{
    entanglement_entropy, kron, operator_schmidt_decompose, permute_subsystems,
    schmidt_coefficients, schmidt_decompose, Bipartition, StateVector,
};
use tpslab::random;
use tpslab::scattering::{
    com_shear_embed, com_shear_extract, ie_entropy, interparticle_entropy, TwoParticleState,
};
use tpslab::tps::{is_local_unitary, is_sum_local, sum_of_locals, TensorProductStructure};

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..5, 2..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn local_unitaries_preserve_entropy(seed in any::<u64>(), dl in 2usize..6, dr in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random::state(&mut rng, &[dl, dr]);
        let u = random::local_unitary(&mut rng, dl, dr);
        let cut = Bipartition::first(1);
        let before = entanglement_entropy(&s, &cut).unwrap();
        let after = entanglement_entropy(&s.apply_unitary(&u).unwrap(), &cut).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
        prop_assert!(before <= (dl.min(dr) as f64).log2() + 1e-12);
    }

    #[test]
    fn schmidt_decomposition_reconstructs(seed in any::<u64>(), d in dims(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random::state(&mut rng, &d);
        let cut = Bipartition::first(k.min(d.len() - 1));
        let sd = schmidt_decompose(&s, &cut).unwrap();
        let back = sd.reconstruct();
        prop_assert!((back.amplitudes() - s.amplitudes()).norm() < 1e-12);
        let total: f64 = sd.coefficients.iter().map(|l| l * l).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_symmetric_across_the_cut(seed in any::<u64>(), d in dims()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random::state(&mut rng, &d);
        let n = d.len();
        let left = Bipartition::new(vec![0]);
        let right = Bipartition::new((1..n).collect::<Vec<_>>());
        let a = entanglement_entropy(&s, &left).unwrap();
        let b = entanglement_entropy(&s, &right).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn permuting_factors_moves_the_cut(seed in any::<u64>(), d in dims()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random::state(&mut rng, &d);
        let n = d.len();
        let perm: Vec<usize> = (0..n).rev().collect();
        let p = permute_subsystems(&s, &perm).unwrap();
        let direct = schmidt_coefficients(&s, &Bipartition::new(vec![n - 1])).unwrap();
        let moved = schmidt_coefficients(&p, &Bipartition::first(1)).unwrap();
        for (x, y) in direct.iter().zip(&moved) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn products_have_operator_schmidt_rank_one(seed in any::<u64>(), dl in 2usize..5, dr in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random::unitary(&mut rng, &[dl]);
        let b = random::unitary(&mut rng, &[dr]);
        let osd = operator_schmidt_decompose(&kron(&a, &b), &Bipartition::first(1)).unwrap();
        prop_assert_eq!(osd.rank(), 1);
        let tps = TensorProductStructure::computational("t", vec![dl, dr]);
        let v = is_local_unitary(&random::unitary(&mut rng, &[dl, dr]), &tps, &Bipartition::first(1)).unwrap();
        prop_assert!(!v.is_local());
    }

    #[test]
    fn sums_of_local_terms_are_sum_local(seed in any::<u64>(), dl in 2usize..5, dr in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = sum_of_locals(&random::hermitian(&mut rng, &[dl]), &random::hermitian(&mut rng, &[dr]));
        let tps = TensorProductStructure::computational("t", vec![dl, dr]);
        prop_assert!(is_sum_local(&h, &tps, &Bipartition::first(1)).unwrap().is_split());
        let generic = random::hermitian(&mut rng, &[dl, dr]);
        prop_assert!(!is_sum_local(&generic, &tps, &Bipartition::first(1)).unwrap().is_split());
    }

    #[test]
    fn clebsch_gordan_exchange_symmetry(
        two_j1 in 0i64..5,
        two_j2 in 0i64..5,
        k in 0i64..5,
        a in 0i64..5,
        b in 0i64..5,
    ) {
        // ⟨j₁ m₁; j₂ m₂|J M⟩ = (−1)^{j₁+j₂−J} ⟨j₂ m₂; j₁ m₁|J M⟩
        let two_j = (two_j1 - two_j2).abs() + 2 * (k % (two_j1.min(two_j2) + 1));
        let m1 = -two_j1 + 2 * (a % (two_j1 + 1));
        let m2 = -two_j2 + 2 * (b % (two_j2 + 1));
        let h = |x: i64| x as f64 / 2.0;
        let sign = if ((two_j1 + two_j2 - two_j) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = clebsch_gordan(h(two_j1), h(two_j2), h(two_j), h(m1), h(m2), h(m1 + m2));
        let rhs = clebsch_gordan(h(two_j2), h(two_j1), h(two_j), h(m2), h(m1), h(m1 + m2));
        prop_assert!((lhs - sign * rhs).abs() < 1e-12);
    }

    #[test]
    fn shear_embedding_is_an_isometry(seed in any::<u64>(), log_n in 2u32..5) {
        let n = 1usize << log_n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random::state(&mut rng, &[n, n]);
        let state = TwoParticleState::new(n, s.amplitudes().iter().copied().collect()).unwrap();
        let e = com_shear_embed(&state, [1.0, 1.0]).unwrap();
        prop_assert!((e.norm() - 1.0).abs() < 1e-12);
        let back = com_shear_extract(&e, n).unwrap();
        let diff: f64 = back.amplitudes().iter().zip(state.amplitudes()).map(|(x, y)| (x - y).norm_sqr()).sum();
        prop_assert!(diff.sqrt() < 1e-13);
        let ie = ie_entropy(&state, [1.0, 1.0]).unwrap();
        let direct = entanglement_entropy(&e, &Bipartition::first(1)).unwrap();
        prop_assert!((ie - direct).abs() < 1e-10);
        prop_assert!(interparticle_entropy(&state) <= log_n as f64 + 1e-12);
    }
}

#[test]
fn product_states_have_zero_entropy_in_every_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = random::state(&mut rng, &[3]);
    let b = random::state(&mut rng, &[2]);
    let c = random::state(&mut rng, &[4]);
    let s: StateVector = a.tensor(&b).tensor(&c);
    for cut in [vec![0], vec![1], vec![2], vec![0, 2]] {
        assert!(entanglement_entropy(&s, &Bipartition::new(cut)).unwrap() < 1e-10);
    }
}

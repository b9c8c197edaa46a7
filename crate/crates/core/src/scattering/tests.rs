use super::*;
use crate::linalg::{entanglement_entropy, hermitian_eigen, schmidt_coefficients, Bipartition};
use crate::random;
use crate::tps::{is_sum_local, SumLocality};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_cfg() -> ScatteringConfig {
    let mut cfg = ScatteringConfig::reference();
    cfg.sites = 64;
    cfg.t_final = 2.0;
    cfg
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> TwoParticleState {
    let s = random::state(rng, &[n, n]);
    TwoParticleState::new(n, s.amplitudes().iter().copied().collect()).unwrap()
}

fn delta(n: usize, a: usize, b: usize) -> TwoParticleState {
    let mut psi = vec![c(0.0, 0.0); n * n];
    psi[a * n + b] = c(1.0, 0.0);
    TwoParticleState::new(n, psi).unwrap()
}

#[test]
fn reference_config_is_valid() {
    assert!(ScatteringConfig::reference().diagnostics().is_empty());
}

#[test]
fn non_power_of_two_is_reported_on_its_field() {
    let mut cfg = ScatteringConfig::reference();
    cfg.sites = 100;
    let diags = cfg.diagnostics();
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].field, "sites");
}

#[test]
fn overlapping_packets_are_reported() {
    let mut cfg = ScatteringConfig::reference();
    cfg.packets[0].center = -1.0;
    cfg.packets[1].center = 1.0;
    let diags = cfg.diagnostics();
    assert!(diags
        .iter()
        .any(|d| d.field == "packets" && d.message.contains("overlap")));
    assert!(matches!(
        build_initial_state(&cfg),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn packets_near_the_edge_are_reported() {
    let mut cfg = ScatteringConfig::reference();
    cfg.packets[0].center = -28.0;
    assert!(cfg
        .diagnostics()
        .iter()
        .any(|d| d.field == "packets[0].center"));
}

#[test]
fn overlap_formula_matches_lattice_sum() {
    let cfg = ScatteringConfig::reference();
    let (a, b) = (&cfg.packets[0], &cfg.packets[1]);
    let mut far = *b;
    far.center = -9.0;
    far.width = 1.5;
    for other in [b, &far] {
        let fa = packet_amplitudes(&cfg, a);
        let fb = packet_amplitudes(&cfg, other);
        let lattice: f64 = fa.iter().zip(&fb).map(|(x, y)| x.norm() * y.norm()).sum();
        let formula = packet_overlap(a, other);
        assert!(
            (lattice - formula).abs() < 1e-12 + 1e-9 * formula,
            "{lattice} vs {formula}"
        );
    }
}

#[test]
fn initial_state_is_a_normalized_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let mut cfg = ScatteringConfig::reference();
        cfg.packets[0].center = rng.random_range(-14.0..-12.0);
        cfg.packets[1].center = rng.random_range(12.0..14.0);
        cfg.packets[0].momentum = rng.random_range(0.5..2.5);
        cfg.packets[1].width = rng.random_range(1.5..2.2);
        cfg.t_final = 4.0;
        let s = build_initial_state(&cfg).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(interparticle_entropy(&s) < 1e-6);
        let coeffs = singular_values_desc(s.coefficient_matrix());
        assert!(coeffs[1] < 1e-8 * coeffs[0]);
    }
}

#[test]
fn swapping_packets_transposes_the_state() {
    let cfg = ScatteringConfig::reference();
    let mut swapped = cfg.clone();
    swapped.packets = [cfg.packets[1], cfg.packets[0]];
    let s = build_initial_state(&cfg).unwrap();
    let t = build_initial_state(&swapped).unwrap();
    for (x, y) in s.exchanged().amplitudes().iter().zip(t.amplitudes()) {
        assert!((x - y).norm() < 1e-15);
    }
}

#[test]
fn symmetric_pair_of_sites_has_one_bit() {
    let n = 16;
    let mut psi = vec![c(0.0, 0.0); n * n];
    psi[3 * n + 9] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    psi[9 * n + 3] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let s = TwoParticleState::new(n, psi).unwrap();
    assert!((interparticle_entropy(&s) - 1.0).abs() < 1e-14);
}

#[test]
fn interparticle_entropy_matches_generic_schmidt_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..3 {
        let s = random_state(&mut rng, 64);
        let generic = entanglement_entropy(&s.to_state().unwrap(), &Bipartition::first(1)).unwrap();
        assert!((interparticle_entropy(&s) - generic).abs() < 1e-10);
    }
}

#[test]
fn shear_moves_a_delta_peak() {
    let n = 8;
    let embedded = com_shear_embed(&delta(n, 3, 5), [1.0, 1.0]).unwrap();
    let side = shear_side(n);
    let (x, r) = (8usize, -2i64);
    let index = x * side + (r + n as i64 - 1) as usize;
    assert_eq!(embedded.amplitudes()[index], c(1.0, 0.0));
    assert!((embedded.norm() - 1.0).abs() < 1e-15);
}

#[test]
fn shear_is_an_isometry_and_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let s = random_state(&mut rng, 32);
    let embedded = com_shear_embed(&s, [1.0, 1.0]).unwrap();
    assert!((embedded.norm() - s.norm()).abs() < 1e-14);
    let back = com_shear_extract(&embedded, 32).unwrap();
    assert_eq!(back, s);
    // only parity-consistent sites are populated
    let side = shear_side(32);
    for (i, z) in embedded.amplitudes().iter().enumerate() {
        let (x, r) = (i / side, i % side);
        if (x + r + 31) % 2 == 1 {
            assert_eq!(*z, c(0.0, 0.0));
        }
    }
}

#[test]
fn unequal_masses_are_rejected_by_the_shear() {
    let s = delta(4, 1, 2);
    assert!(com_shear_embed(&s, [1.0, 2.0]).is_err());
    assert!(ie_entropy(&s, [1.0, 2.0]).is_err());
}

#[test]
fn ie_entropy_matches_schmidt_of_embedded_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in [8, 16, 32] {
        let s = random_state(&mut rng, n);
        let embedded = com_shear_embed(&s, [1.0, 1.0]).unwrap();
        let generic = entanglement_entropy(&embedded, &Bipartition::first(1)).unwrap();
        assert!((ie_entropy(&s, [1.0, 1.0]).unwrap() - generic).abs() < 1e-10);
    }
    let s = build_initial_state(&ScatteringConfig::reference()).unwrap();
    let coeffs = schmidt_coefficients(
        &com_shear_embed(&s, [1.0, 1.0]).unwrap(),
        &Bipartition::first(1),
    )
    .unwrap();
    // one product term per parity block
    assert!(coeffs[2] < 1e-8);
}

#[test]
fn free_evolution_keeps_particles_unentangled() {
    let mut cfg = small_cfg();
    cfg.sites = 128;
    cfg.potential.strength = 0.0;
    cfg.sample_every = 20;
    let traj = run(&cfg).unwrap();
    for s in &traj.samples {
        assert!(
            s.interparticle_entropy < 1e-6,
            "t = {}: {}",
            s.t,
            s.interparticle_entropy
        );
    }
    // a gaussian product in (X, r) stays one
    let drift = traj.summary.ie_drift.unwrap();
    assert!(drift < 1e-10, "{drift}");
}

#[test]
fn evolution_conserves_norm_momentum_and_energy() {
    let mut cfg = small_cfg();
    cfg.sites = 128;
    cfg.t_final = 10.0;
    cfg.sample_every = 100;
    let traj = run(&cfg).unwrap();
    let s = &traj.summary;
    assert_eq!(traj.samples.len(), 11);
    assert!(s.norm_drift < 1e-10, "{}", s.norm_drift);
    assert!(s.momentum_drift < 1e-8, "{}", s.momentum_drift);
    assert!(s.energy_drift < 1e-8, "{}", s.energy_drift);
}

#[test]
fn strang_steps_are_second_order() {
    // energy error of the plain splitting falls by about 4 when dt halves
    let mut cfg = small_cfg();
    cfg.order = 2;
    cfg.t_final = 6.0;
    cfg.energy_guard = 1.0;
    let coarse = run(&cfg).unwrap().summary.energy_drift;
    cfg.dt /= 2.0;
    cfg.sample_every *= 2;
    let fine = run(&cfg).unwrap().summary.energy_drift;
    let ratio = coarse / fine;
    assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn energy_guard_stops_inaccurate_runs() {
    let mut cfg = small_cfg();
    cfg.order = 2;
    cfg.t_final = 6.0;
    cfg.dt = 0.05;
    cfg.sample_every = 1;
    cfg.energy_guard = 1e-8;
    assert!(matches!(run(&cfg), Err(Error::NumericalGuard(_))));
}

#[test]
fn split_model_masses() {
    let cfg = SplitModelConfig {
        masses: [1.0, 1.0],
        external_points: 8,
        internal_points: 16,
        length: 16.0,
        potential: ScatteringConfig::reference().potential,
    };
    assert_eq!(cfg.total_mass(), 2.0);
    assert_eq!(cfg.reduced_mass(), 0.5);
}

#[test]
fn split_model_is_sum_local_with_additive_spectrum() {
    let cfg = SplitModelConfig {
        masses: [1.0, 3.0],
        external_points: 8,
        internal_points: 16,
        length: 16.0,
        potential: ScatteringConfig::reference().potential,
    };
    let sh = build_split_model(&cfg).unwrap();
    let h = sh.assemble();
    match is_sum_local(&h, &sh.tps(), &Bipartition::first(1)).unwrap() {
        SumLocality::Split(terms) => assert!(terms.residual < 1e-12),
        other => panic!("not split: {:?}", other.residual()),
    }
    let (ext, _) = hermitian_eigen(sh.external()).unwrap();
    let (int, _) = hermitian_eigen(sh.internal()).unwrap();
    let mut sums: Vec<f64> = ext
        .iter()
        .flat_map(|a| int.iter().map(move |b| a + b))
        .collect();
    sums.sort_by(f64::total_cmp);
    let (total, _) = hermitian_eigen(&h).unwrap();
    for (x, y) in sums.iter().zip(&total) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn split_model_respects_the_dimension_cap() {
    let cfg = SplitModelConfig {
        masses: [1.0, 1.0],
        external_points: 65,
        internal_points: 8,
        length: 16.0,
        potential: ScatteringConfig::reference().potential,
    };
    assert!(matches!(
        build_split_model(&cfg),
        Err(Error::DimensionCap { .. })
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let big = SplitHamiltonian::random(&mut rng, 64, 65);
    assert!(matches!(
        verify_split_factorization(&big, &[1.0], 1, &mut rng),
        Err(Error::DimensionCap { .. })
    ));
}

#[test]
fn zero_internal_hamiltonian_factors_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let sh = SplitHamiltonian::new(
        random::hermitian(&mut rng, &[8]),
        crate::linalg::OperatorMatrix::zeros(vec![8]),
    )
    .unwrap();
    let report = verify_split_factorization(&sh, &[0.1, 1.0, 10.0], 5, &mut rng).unwrap();
    assert!(report.factorization_residuals.iter().all(|r| *r < 1e-12));
}

#[test]
fn random_split_evolution_factors_and_keeps_ie_entanglement() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let sh = SplitHamiltonian::random(&mut rng, 16, 32);
    let report = verify_split_factorization(&sh, &[0.1, 1.0, 10.0], 20, &mut rng).unwrap();
    for r in &report.factorization_residuals {
        assert!(*r < 1e-9, "{r}");
    }
    assert!(report.max_entropy_deviation < 1e-9);
    assert!(report.sum_local_residual < 1e-10);
}

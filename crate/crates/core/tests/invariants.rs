//! Cross-module invariants checked on catalog functions, their EA images
//! and random quadratic functions.

use quadapn::blocking::{
    blocking_report, max_subspace_in, nonbent_set, odd_intersection_check, BlockingOptions,
    ScanMode,
};
use quadapn::catalog::{catalog, quadratic_apn_entries};
use quadapn::equivalence::{verify_nonbent_equivariance, verify_partition_equivariance, EaTriple};
use quadapn::partition::{build_partition, partition_type, verify_dim_amplitude, verify_partition};
use quadapn::Vbf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `F(x) = sum_{i<j} c_ij x_i x_j + L(x) + c` with random coefficients.
fn random_quadratic(n: u32, rng: &mut ChaCha8Rng) -> Vbf {
    let mut coeff = vec![0u32; (n * n) as usize];
    for i in 0..n {
        for j in i + 1..n {
            coeff[(i * n + j) as usize] = rng.gen_range(0..1u32 << n);
        }
    }
    let lin: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1u32 << n)).collect();
    let c = rng.gen_range(0..1u32 << n);
    Vbf::from_fn(n, n, |x| {
        let mut y = c;
        for i in 0..n {
            if (x >> i) & 1 == 0 {
                continue;
            }
            y ^= lin[i as usize];
            for j in i + 1..n {
                if (x >> j) & 1 == 1 {
                    y ^= coeff[(i * n + j) as usize];
                }
            }
        }
        y
    })
    .unwrap()
}

#[test]
fn random_quadratics_are_plateaued_and_moment_matches_apn() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [4, 5, 6] {
        for _ in 0..40 {
            let f = random_quadratic(n, &mut rng);
            assert!(f.algebraic_degree() <= 2);
            assert_eq!(f.fourth_moment_check().unwrap(), f.is_apn());
        }
    }
}

#[test]
fn crooked_structure_on_apn_quadratics() {
    // random EA images of the cube are quadratic APN functions with
    // scrambled coordinates
    let cube = catalog("cube", 6).unwrap().function;
    for seed in 0..10 {
        let g = EaTriple::random(6, 6, seed).unwrap().apply(&cube).unwrap();
        let p = build_partition(&g).unwrap();
        assert!(verify_partition(&p));
        assert!(verify_dim_amplitude(&g, &p).unwrap());
    }
}

#[test]
fn ea_invariants_of_blocking_data() {
    let cube = catalog("cube", 6).unwrap().function;
    let opts = BlockingOptions::default();
    let base = blocking_report(&nonbent_set(&cube).unwrap(), 6, &opts).unwrap();
    let base_type = partition_type(&build_partition(&cube).unwrap());
    for seed in 0..12 {
        let t = EaTriple::random(6, 6, seed).unwrap();
        let g = t.apply(&cube).unwrap();
        assert_eq!(g.amplitude_distribution().unwrap(), cube.amplitude_distribution().unwrap());
        assert_eq!(partition_type(&build_partition(&g).unwrap()), base_type);
        let r = blocking_report(&nonbent_set(&g).unwrap(), 6, &opts).unwrap();
        assert_eq!(r.n_size, base.n_size);
        assert_eq!(r.mod4, base.mod4);
        assert_eq!(r.odd.ok(), base.odd.ok());
        assert_eq!(r.is_blocking, base.is_blocking);
        assert_eq!(r.is_trivial, base.is_trivial);
        assert_eq!(r.max_inner_dim, base.max_inner_dim);
        assert!(verify_nonbent_equivariance(&cube, &g, &t.a1).unwrap());
        assert!(verify_partition_equivariance(&cube, &g, &t.a1, &t.a2, &t.a3).unwrap());
    }
}

#[test]
fn ea_spot_check_at_eight() {
    let cube = catalog("cube", 8).unwrap().function;
    let nf = nonbent_set(&cube).unwrap();
    let t = EaTriple::random(8, 8, 99).unwrap();
    let g = t.apply(&cube).unwrap();
    let ng = nonbent_set(&g).unwrap();
    assert_eq!(ng.len(), nf.len());
    assert_eq!(max_subspace_in(&ng).0, max_subspace_in(&nf).0);
    assert!(odd_intersection_check(&ng, 5, ScanMode::Exhaustive).ok());
    assert!(verify_partition_equivariance(&cube, &g, &t.a1, &t.a2, &t.a3).unwrap());
}

#[test]
fn catalog_quadratic_apn_laws() {
    for n in [4, 6, 8, 10] {
        for e in quadratic_apn_entries(n).unwrap() {
            let f = &e.function;
            assert!(f.is_apn() && f.is_quadratic(), "{} at {n}", e.name);
            let size = nonbent_set(f).unwrap().len() as u64;
            assert_eq!(size % 4, 1, "{} at {n}", e.name);
            if n >= 6 {
                let b = (1u64 << (n / 2)) + (1 << (n / 2 - 2)) + (1 << (n / 2 - 3)) - 1;
                assert!(size > b || (n == 8 && size == b));
            }
            // Bose-Burton for a blocking set of (n/2 + 1)-spaces
            assert!(size >= (1 << (n / 2)) - 1);
        }
    }
}

#[test]
fn odd_intersections_sampled_at_ten() {
    let n = nonbent_set(&catalog("cube", 10).unwrap().function).unwrap();
    let out = odd_intersection_check(&n, 6, ScanMode::Sampled { samples: 100_000, seed: 7 });
    assert!(out.ok());
    assert_eq!(out.scanned, 100_000);
}

#[test]
fn odd_intersections_above_the_scan_dimension() {
    let n = nonbent_set(&catalog("cube", 6).unwrap().function).unwrap();
    for k in 4..=6 {
        assert!(odd_intersection_check(&n, k, ScanMode::Exhaustive).ok());
    }
    // below n/2 + 1 the law is not required and indeed fails
    assert!(!odd_intersection_check(&n, 3, ScanMode::Exhaustive).ok());
}

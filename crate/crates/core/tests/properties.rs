use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use coherence_bath::boundary::{
    f_parallel, rate_coefficients, suppression_factor, Geometry, PolarizationWeights,
};
use coherence_bath::measures::{c_l1, c_re};
use coherence_bath::qmath::{
    bloch_to_density, density_to_bloch, diagonal_part, von_neumann_entropy, BlochVector, CMatrix,
    Complex, DensityMatrix,
};
use coherence_bath::single_qubit::{
    c_l1_trajectory, c_re_trajectory, evolve_closed_form, measured_coherence, EvolutionParams,
    InitialAngles,
};
use coherence_bath::two_qubit::{
    apply_one_sided_channel, bd_density, c_l1_bd, c_re_bd, paper_formula_c_re_bd,
    BellDiagonalParams, OneSidedChannel,
};

fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_filter_map(
        "degenerate draw",
        move |entries| {
            let g = CMatrix::from_vec(dim, entries.into_iter().map(|(re, im)| Complex::new(re, im)).collect());
            let m = &g * &g.adjoint();
            let tr = m.trace().re;
            if tr < 1e-6 {
                return None;
            }
            let mut m = m.scale_real(1.0 / tr);
            // exact Hermitian symmetry after rounding
            for i in 0..dim {
                m[(i, i)] = Complex::new(m[(i, i)].re, 0.0);
                for j in 0..i {
                    m[(i, j)] = m[(j, i)].conj();
                }
            }
            DensityMatrix::new(m).ok()
        },
    )
}

fn any_density() -> impl Strategy<Value = DensityMatrix> {
    prop_oneof![density(2), density(4)]
}

fn preset() -> impl Strategy<Value = PolarizationWeights> {
    prop_oneof![
        Just(PolarizationWeights::parallel()),
        Just(PolarizationWeights::perpendicular()),
        Just(PolarizationWeights::isotropic()),
    ]
}

fn bell_diagonal() -> impl Strategy<Value = BellDiagonalParams> {
    (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64)
        .prop_filter_map("unphysical", |(a, b, c)| BellDiagonalParams::new(a, b, c).ok())
}

fn permuted(m: &DensityMatrix, perm: &[usize]) -> DensityMatrix {
    let n = m.dim();
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = m.get(perm[i], perm[j]);
        }
    }
    DensityMatrix::new(out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_sums_to_one(rho in any_density()) {
        let s: f64 = rho.eigenvalues().iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn entropy_ignores_basis_order(rho in density(4), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let a = von_neumann_entropy(&rho).unwrap();
        let b = von_neumann_entropy(&permuted(&rho, &perm)).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn bloch_round_trip(r in 0.0..=1.0f64, polar in 0.0..=PI, azimuth in 0.0..TAU) {
        let b = BlochVector::new(
            r * polar.sin() * azimuth.cos(),
            r * polar.sin() * azimuth.sin(),
            r * polar.cos(),
        ).unwrap();
        let back = density_to_bloch(&bloch_to_density(&b)).unwrap();
        prop_assert!((back.x - b.x).abs() < 1e-14);
        prop_assert!((back.y - b.y).abs() < 1e-14);
        prop_assert!((back.z - b.z).abs() < 1e-14);
    }

    #[test]
    fn diagonal_part_is_idempotent(rho in any_density()) {
        let d = diagonal_part(&rho);
        prop_assert_eq!(&diagonal_part(&d), &d);
        prop_assert!((d.matrix().trace().re - rho.matrix().trace().re).abs() < 1e-15);
    }

    #[test]
    fn measures_vanish_only_on_incoherent_states(rho in any_density()) {
        let n = rho.dim();
        let largest = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| rho.get(i, j).norm())
            .fold(0.0, f64::max);
        let d = diagonal_part(&rho);
        prop_assert_eq!(c_l1(&d), 0.0);
        prop_assert!(c_re(&d).unwrap().abs() < 1e-14);
        if largest > 1e-6 {
            prop_assert!(c_l1(&rho) > 0.0);
            prop_assert!(c_re(&rho).unwrap() > 0.0);
        }
    }

    #[test]
    fn measures_ignore_phase_rotations(rho in any_density(), phases in prop::collection::vec(0.0..TAU, 4)) {
        let rotated = rho.phase_rotated(&phases[..rho.dim()]).unwrap();
        prop_assert!((c_l1(&rho) - c_l1(&rotated)).abs() < 1e-13);
        prop_assert!((c_re(&rho).unwrap() - c_re(&rotated).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn far_field_bound(u in 10.0..1e4f64) {
        let bound = 3.0 / (4.0 * u) + 3.0 / (16.0 * u.powi(3)) * (2.0 * u + 1.0);
        prop_assert!(f_parallel(u).unwrap().abs() <= bound);
    }

    #[test]
    fn trajectories_match_generic_measures(
        theta in 0.0..=PI,
        phi in 0.0..TAU,
        q in 0.0..=1.0f64,
        log_u in -2.0..2.0f64,
        p in preset(),
    ) {
        let geometry = Geometry::mirror(10f64.powf(log_u)).unwrap();
        let angles = InitialAngles::new(theta, phi).unwrap();
        let params = EvolutionParams::new(geometry, p);
        let (l1, re) = measured_coherence(&angles, q, &params).unwrap();
        prop_assert!((l1 - c_l1_trajectory(theta, q, &geometry, &p).unwrap()).abs() < 1e-12);
        prop_assert!((re - c_re_trajectory(theta, q, &geometry, &p).unwrap()).abs() < 1e-10);
        let rho = evolve_closed_form(&angles, q, &params).unwrap();
        prop_assert!((c_re(&rho).unwrap() - re).abs() < 1e-15);
    }

    #[test]
    fn l1_decays_strictly(theta in 0.05..PI - 0.05, log_u in -1.0..2.0f64, p in preset(), a in 0.0..0.99f64, gap in 0.005..0.01f64) {
        let geometry = Geometry::mirror(10f64.powf(log_u)).unwrap();
        prop_assume!(rate_coefficients(&geometry, &p).unwrap().gamma_eff > 1e-3);
        let b = (a + gap).min(1.0);
        prop_assert!(c_l1_trajectory(theta, b, &geometry, &p).unwrap() < c_l1_trajectory(theta, a, &geometry, &p).unwrap());
    }

    #[test]
    fn level_spacing_only_moves_phases(theta in 0.0..=PI, phi in 0.0..TAU, q in 0.0..=1.0f64, p in preset()) {
        let angles = InitialAngles::new(theta, phi).unwrap();
        let base = EvolutionParams::new(Geometry::mirror(0.4).unwrap(), p);
        let reference = measured_coherence(&angles, q, &base).unwrap();
        for omega_ratio in [0.5, 2.0] {
            let params = EvolutionParams { omega_ratio, ..base };
            let (l1, re) = measured_coherence(&angles, q, &params).unwrap();
            prop_assert!((l1 - reference.0).abs() < 1e-15);
            prop_assert!((re - reference.1).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_diagonal_physicality(c1 in -1.0..=1.0f64, c2 in -1.0..=1.0f64, c3 in -1.0..=1.0f64) {
        let lambdas = [
            1.0 + c3 + (c1 - c2),
            1.0 + c3 - (c1 - c2),
            1.0 - c3 + (c1 + c2),
            1.0 - c3 - (c1 + c2),
        ];
        let physical = lambdas.iter().all(|&l| 0.25 * l >= -1e-12);
        prop_assert_eq!(BellDiagonalParams::new(c1, c2, c3).is_ok(), physical);
    }

    #[test]
    fn channel_measures_match_closed_forms(c in bell_diagonal(), qp in 0.0..=1.0f64) {
        let rho = bd_density(&c);
        let mut values = Vec::new();
        for phase in [0.0, 1.0, PI] {
            let out = apply_one_sided_channel(&rho, &OneSidedChannel::new(qp, phase).unwrap()).unwrap();
            prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-14);
            values.push((c_l1(&out), c_re(&out).unwrap()));
        }
        for (l1, re) in &values {
            prop_assert!((l1 - c_l1_bd(&c, qp)).abs() < 1e-12);
            prop_assert!((re - c_re_bd(&c, qp)).abs() < 1e-10);
            prop_assert!((l1 - values[0].0).abs() < 1e-15);
            prop_assert!((re - values[0].1).abs() < 1e-12);
        }
    }

    #[test]
    fn published_formula_exact_without_cross_correlation(c in bell_diagonal(), zero_first in any::<bool>(), qp in 0.0..=1.0f64) {
        let c = if zero_first {
            BellDiagonalParams::new(0.0, c.c2, c.c3)
        } else {
            BellDiagonalParams::new(c.c1, 0.0, c.c3)
        };
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        let published = paper_formula_c_re_bd(&c, qp).unwrap();
        prop_assert!((published - c_re_bd(&c, qp)).abs() < 1e-10);
    }
}

#[test]
fn unbounded_rate_is_one() {
    for p in [
        PolarizationWeights::parallel(),
        PolarizationWeights::perpendicular(),
        PolarizationWeights::isotropic(),
    ] {
        assert_eq!(rate_coefficients(&Geometry::Unbounded, &p).unwrap().gamma_eff, 1.0);
    }
}

#[test]
fn suppression_recedes_with_distance() {
    let mut sup = 0.0_f64;
    for k in 0..1000 {
        let u = 1000.0 * 10f64.powf(f64::from(k) / 333.0);
        for p in [
            PolarizationWeights::parallel(),
            PolarizationWeights::perpendicular(),
            PolarizationWeights::isotropic(),
        ] {
            sup = sup.max(suppression_factor(&Geometry::mirror(u).unwrap(), &p).unwrap().abs());
        }
    }
    assert!(sup < 2e-3, "{sup:e}");
}

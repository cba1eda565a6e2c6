//! Property tests of the structural identities.

use cosserat_core::exterior::{
    axial_dual, axial_inverse, dualize_stress, exterior_derivative, torsion, undualize_stress, wedge,
};
use cosserat_core::grid_fields::partial_derivative;
use cosserat_core::kinematics::{linearized_strain, rodrigues};
use cosserat_core::mat3;
use cosserat_core::random::{rng, SmoothScalar, SmoothVector};
use cosserat_core::solver::{
    angular_momentum_residual, constitutive, linear_momentum_residual, totals,
};
use cosserat_core::variational::{
    conjugate_forms, force_balance_residual, frame_volume_coefficients, functional_gradient_check,
    moment_axial, moment_balance_residual, momentum_rates, Trajectory,
};
use cosserat_core::{
    Coframe, Connection, FormField, Grid, LagrangianSpec, Leapfrog, MaterialParams, MicropolarState,
    Sources, TensorField, ValueKind, VectorField,
};
use proptest::prelude::*;
use rand::Rng;

fn grid() -> Grid {
    Grid::new(6, 1.0).unwrap()
}

fn noise(seed: u64, len: usize) -> Vec<f64> {
    let mut r = rng(seed);
    (0..len).map(|_| r.gen_range(-1.0..1.0)).collect()
}

fn random_form(seed: u64, degree: usize, kind: ValueKind) -> FormField {
    let g = grid();
    let len = FormField::zeros(g, degree, kind).unwrap().data().len();
    FormField::from_data(g, degree, kind, noise(seed, len)).unwrap()
}

fn smooth_state(g: Grid, seed: u64, amplitude: f64) -> MicropolarState {
    let mut r = rng(seed);
    let mut st = MicropolarState::zeros(g);
    st.displacement = SmoothVector::random(&mut r, g.length(), amplitude).sample(&g);
    st.microrotation = SmoothVector::random(&mut r, g.length(), amplitude).sample(&g);
    st.velocity = SmoothVector::random(&mut r, g.length(), amplitude).sample(&g);
    st.spin = SmoothVector::random(&mut r, g.length(), amplitude).sample(&g);
    st
}

fn roll(g: &Grid, f: &[f64], axis: usize, shift: isize) -> Vec<f64> {
    (0..g.len()).map(|p| f[g.neighbor(p, axis, shift)]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn stencil_is_linear(seed in any::<u64>(), a in -10.0..10.0_f64, b in -10.0..10.0_f64, axis in 0usize..3) {
        let g = grid();
        let f = noise(seed, g.len());
        let h = noise(seed ^ 1, g.len());
        let combo: Vec<f64> = f.iter().zip(&h).map(|(x, y)| a * x + b * y).collect();
        let lhs = partial_derivative(&g, &combo, axis);
        let (df, dh) = (partial_derivative(&g, &f, axis), partial_derivative(&g, &h, axis));
        let scale = df.iter().chain(&dh).fold(1.0_f64, |m, v| m.max(v.abs())) * (a.abs() + b.abs()).max(1.0);
        for p in 0..g.len() {
            prop_assert!((lhs[p] - (a * df[p] + b * dh[p])).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>(), a in 0usize..3, b in 0usize..3) {
        let g = grid();
        let f = noise(seed, g.len());
        let ab = partial_derivative(&g, &partial_derivative(&g, &f, b), a);
        let ba = partial_derivative(&g, &partial_derivative(&g, &f, a), b);
        let scale = ab.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for (x, y) in ab.iter().zip(&ba) {
            prop_assert!((x - y).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn derivative_commutes_with_lattice_shift(seed in any::<u64>(), axis in 0usize..3, dir in 0usize..3, shift in -6isize..=6) {
        let g = grid();
        let f = noise(seed, g.len());
        let lhs = partial_derivative(&g, &roll(&g, &f, dir, shift), axis);
        let rhs = roll(&g, &partial_derivative(&g, &f, axis), dir, shift);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn full_period_shift_is_identity(seed in any::<u64>(), axis in 0usize..3) {
        let g = grid();
        let f = noise(seed, g.len());
        let n = g.n() as isize;
        prop_assert_eq!(roll(&g, &f, axis, n), f);
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), degree in 0usize..2, kind in prop_oneof![Just(ValueKind::Scalar), Just(ValueKind::Frame), Just(ValueKind::So3)]) {
        let alpha = random_form(seed, degree, kind);
        let dd = exterior_derivative(&exterior_derivative(&alpha).unwrap()).unwrap();
        prop_assert!(dd.max_abs() <= 1e-12);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..4, q in 0usize..4) {
        prop_assume!(p + q <= 3);
        let a = random_form(seed, p, ValueKind::Scalar);
        let b = random_form(seed ^ 7, q, ValueKind::Scalar);
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap();
        let sign = if p * q % 2 == 0 { 1.0 } else { -1.0 };
        for (x, y) in ab.data().iter().zip(ba.data()) {
            prop_assert!((x - sign * y).abs() <= 1e-15);
        }
    }

    #[test]
    fn flat_torsion_is_exterior_derivative(seed in any::<u64>()) {
        let g = grid();
        let data = noise(seed, 9 * g.len());
        let e = Coframe::from_tensor(&TensorField::from_fn(g, |_| mat3::IDENTITY)).unwrap();
        let mut field = e.into_field();
        for (v, n) in field.data_mut().iter_mut().zip(&data) {
            *v += 0.1 * n;
        }
        let e = Coframe::new(field).unwrap();
        prop_assert_eq!(torsion(&e, &Connection::zero(g)).unwrap(), exterior_derivative(e.field()).unwrap());
    }

    #[test]
    fn stress_dualization_round_trips(seed in any::<u64>()) {
        let g = grid();
        let mut sigma = TensorField::zeros(g);
        sigma.data_mut().copy_from_slice(&noise(seed, 9 * g.len()));
        let form = undualize_stress(&sigma);
        prop_assert_eq!(dualize_stress(&form).unwrap(), sigma.clone());
        prop_assert_eq!(form.max_abs(), sigma.max_abs());
    }

    #[test]
    fn axial_round_trip(seed in any::<u64>()) {
        let g = grid();
        let v = VectorField::from_data(g, noise(seed, 3 * g.len())).unwrap();
        let back = axial_dual(&axial_inverse(&v)).unwrap();
        for (a, b) in back.data().iter().zip(v.data()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn rodrigues_is_a_rotation(x in -3.0..3.0_f64, y in -3.0..3.0_f64, z in -3.0..3.0_f64) {
        let q = rodrigues([x, y, z]);
        let qtq = mat3::mul(&mat3::transpose(&q), &q);
        prop_assert!(mat3::max_abs_diff(&qtq, &mat3::IDENTITY) <= 1e-14);
        prop_assert!((mat3::det(&q) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn matched_rigid_motion_is_strain_free(t in prop::array::uniform3(-1.0..1.0_f64), th in prop::array::uniform3(-1.0..1.0_f64)) {
        let g = grid();
        let mut st = MicropolarState::zeros(g);
        st.displacement = VectorField::uniform(g, t);
        // u = θ × X through the macro gradient, matched by φ = -θ
        st.macro_gradient = mat3::cross_matrix(th);
        st.microrotation = VectorField::uniform(g, th.map(|v| -v));
        let s = linearized_strain(&st);
        prop_assert!(s.strain.max_abs() <= 1e-12);
        prop_assert!(s.wryness.max_abs() <= 1e-12);
    }

    #[test]
    fn material_check_matches_energy_positivity(lambda in -2.0..3.0_f64, mu in -0.5..2.0_f64, kappa in -0.5..1.0_f64, a in -0.5..0.5_f64, b in -0.5..0.5_f64, c in -0.5..0.5_f64, seed in any::<u64>()) {
        let m = MaterialParams { lambda, mu_e: mu, kappa_c: kappa, alpha_t: a, beta_t: b, gamma_t: c, ..MaterialParams::default() };
        if m.validate().is_ok() {
            let mut r = rng(seed);
            for _ in 0..8 {
                let gam: [[f64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| r.gen_range(-1.0..1.0)));
                let kap: [[f64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| r.gen_range(-1.0..1.0)));
                prop_assert!(m.energy_density(&gam, &kap) >= -1e-12);
            }
        } else {
            prop_assert!(m.min_energy_eigenvalue() < 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn form_and_tensor_residuals_agree(seed in any::<u64>()) {
        let g = grid();
        let m = MaterialParams::default();
        let l = LagrangianSpec::new(m).unwrap();
        let st = smooth_state(g, seed, 0.3);
        let mut r = rng(seed ^ 0xabc);
        let acc = SmoothVector::random(&mut r, 1.0, 1.0).sample(&g);
        let sacc = SmoothVector::random(&mut r, 1.0, 1.0).sample(&g);
        let src = Sources {
            force: SmoothVector::random(&mut r, 1.0, 1.0).sample(&g),
            couple: SmoothVector::random(&mut r, 1.0, 1.0).sample(&g),
        };
        let cf = conjugate_forms(&l, &st);
        let (pd, qd) = momentum_rates(&m, &acc, &sacc, &src);
        let w = Connection::zero(g);
        let fr = frame_volume_coefficients(&force_balance_residual(&cf, &w, &pd).unwrap()).unwrap();
        let mr = moment_axial(&moment_balance_residual(&cf, &Coframe::identity(g), &w, &qd).unwrap()).unwrap();
        let s = constitutive(&linearized_strain(&st), &m);
        let ft = linear_momentum_residual(&s.force, &src.force, &acc, m.rho);
        let mt = angular_momentum_residual(&s.force, &s.couple, &src.couple, &sacc, m.j);
        for (a, b) in fr.data().iter().zip(ft.data()).chain(mr.data().iter().zip(mt.data())) {
            prop_assert!((a - b).abs() <= 1e-13);
        }
    }

    #[test]
    fn residuals_are_the_action_gradient(seed in any::<u64>()) {
        let g = grid();
        let l = LagrangianSpec::new(MaterialParams::default()).unwrap();
        let slices = 5;
        let traj = Trajectory { dt: 0.05, slices: (0..slices).map(|n| smooth_state(g, seed ^ n as u64, 0.1)).collect() };
        let dir = Trajectory {
            dt: 0.05,
            slices: (0..slices)
                .map(|n| if n == 0 || n + 1 == slices { MicropolarState::zeros(g) } else { smooth_state(g, !seed ^ n as u64, 0.1) })
                .collect(),
        };
        let rep = functional_gradient_check(&l, &traj, &dir, &[1.0, 0.1]).unwrap();
        prop_assert!(rep.min_relative_error <= 1e-10, "{:?}", rep);
    }

    #[test]
    fn force_free_runs_conserve_linear_momentum(seed in any::<u64>()) {
        let g = grid();
        let m = MaterialParams::default();
        let mut lf = Leapfrog::new(smooth_state(g, seed, 0.01), m, Sources::none(g), 0.5 * m.cfl_bound(g.spacing())).unwrap();
        let p0 = totals(lf.state(), &m);
        lf.run(20, |_, _| {}).unwrap();
        let p1 = totals(lf.state(), &m);
        for a in 0..3 {
            prop_assert!((p1.linear[a] - p0.linear[a]).abs() <= 1e-12 * p0.linear_scale.max(1e-300));
        }
    }

    #[test]
    fn scalar_fields_sample_deterministically(seed in any::<u64>()) {
        let g = grid();
        let a = SmoothScalar::random(&mut rng(seed), 1.0, 1.0).sample(&g);
        let b = SmoothScalar::random(&mut rng(seed), 1.0, 1.0).sample(&g);
        prop_assert_eq!(a, b);
    }
}

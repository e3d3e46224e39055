//! End-to-end solver behaviour: symmetries, dissipation, Gronwall envelopes.

use reulab::diagnostics::{fit_gronwall, gronwall_envelope, DiagnosticsSeries};
use reulab::solver::{
    random_spectrum, run, run_with, taylor_green, uniqueness_probe, NonlinearForm, Scheme, SolverConfig,
};
use reulab::{Grid, SpectralScalarField, SpectralVectorField};

fn short(n: usize) -> SolverConfig {
    SolverConfig { n, dt: 5e-3, t_end: 0.3, ..Default::default() }
}

/// `(u1, u2, u3)(x) ↦ (−u1, u2, u3)(−x1, x2, x3)`.
fn reflect_x(v: &SpectralVectorField) -> SpectralVectorField {
    let g = v.grid();
    let comps: Vec<SpectralScalarField> = (0..3)
        .map(|c| {
            let src = v.component(c).coeffs();
            let sign = if c == 0 { -1.0 } else { 1.0 };
            let coeffs = (0..g.len())
                .map(|idx| {
                    let [k1, k2, k3] = g.mode(idx);
                    src[g.mode_index([-k1, k2, k3])] * sign
                })
                .collect();
            SpectralScalarField::from_coeffs(g, coeffs).unwrap()
        })
        .collect();
    let [a, b, c]: [SpectralScalarField; 3] = comps.try_into().unwrap();
    SpectralVectorField::new([a, b, c]).unwrap()
}

#[test]
fn mirror_image_reverses_rotation() {
    let g = Grid::periodic(16).unwrap();
    let u0 = random_spectrum(&g, 2.0, 2.0, 17);
    let plus = SolverConfig { omega: 7.0, ..short(16) };
    let minus = SolverConfig { omega: -7.0, ..short(16) };
    let a = run(&plus, &u0).unwrap();
    let b = run(&minus, &reflect_x(&u0)).unwrap();
    let mirrored = reflect_x(&a.final_state);
    assert!((&mirrored - &b.final_state).l2_norm() <= 1e-11 * b.final_state.l2_norm());
    for (x, y) in a.diagnostics.bkm.iter().zip(&b.diagnostics.bkm) {
        assert!((x - y).abs() <= 1e-11 * x.max(1.0));
    }
}

#[test]
fn identical_inputs_give_identical_csv() {
    let g = Grid::periodic(16).unwrap();
    let u0 = random_spectrum(&g, 3.0, 1.0, 5);
    let c = SolverConfig { omega: 3.0, delta: 0.01, ..short(16) };
    let a = run(&c, &u0).unwrap().diagnostics.to_csv();
    let b = run(&c, &u0).unwrap().diagnostics.to_csv();
    assert_eq!(a, b);
}

#[test]
fn linear_viscous_decay_is_exact() {
    let g = Grid::periodic(16).unwrap();
    let u0 = taylor_green(&g, 1.0);
    let delta = 0.2;
    let c = SolverConfig { delta, nonlinear: NonlinearForm::Off, ..short(16) };
    let out = run(&c, &u0).unwrap();
    // every Taylor-Green mode has |k|^2 = 3
    let expected = u0.scale((-3.0 * delta * c.t_end).exp());
    assert!((&out.final_state - &expected).l2_norm() <= 1e-13 * u0.l2_norm());
}

#[test]
fn viscous_energy_never_grows() {
    let g = Grid::periodic(16).unwrap();
    let c = SolverConfig { delta: 0.05, omega: 10.0, ..short(16) };
    let out = run(&c, &random_spectrum(&g, 3.0, 3.0, 2)).unwrap();
    assert!(out.diagnostics.energy.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-13)));
}

#[test]
fn advection_forms_agree() {
    let g = Grid::periodic(16).unwrap();
    let u0 = random_spectrum(&g, 3.0, 2.0, 8);
    let rot = run(&short(16), &u0).unwrap();
    let conv = run(&SolverConfig { nonlinear: NonlinearForm::Convective, ..short(16) }, &u0).unwrap();
    assert!((&rot.final_state - &conv.final_state).l2_norm() <= 1e-10 * u0.l2_norm());
}

#[test]
fn picard_and_time_stepping_agree() {
    let g = Grid::periodic(16).unwrap();
    let u0 = taylor_green(&g, 0.5);
    let c = SolverConfig { omega: 2.0, delta: 0.05, dt: 2e-3, t_end: 0.1, ..short(16) };
    let stepped = run(&c, &u0).unwrap();
    let fixed = run(&SolverConfig { scheme: Scheme::Picard, ..c }, &u0).unwrap();
    assert!(fixed.status.is_completed());
    assert!((&stepped.final_state - &fixed.final_state).l2_norm() <= 1e-7 * u0.l2_norm());
}

#[test]
fn besov_series_sits_below_fitted_envelope() {
    let g = Grid::periodic(16).unwrap();
    let c = SolverConfig { t_end: 0.5, ..short(16) };
    let out = run_with(&c, &taylor_green(&g, 1.5), DiagnosticsSeries::for_grid(&g)).unwrap();
    let norm = &out.diagnostics.tracked("besov_5_2").unwrap().values;
    let fit = fit_gronwall(&out.diagnostics, norm).unwrap();
    assert_eq!(fit.c3, 1.0);
    assert!(fit.c4 >= 0.0);
    assert!(fit.min_residual >= -1e-9 * norm[0]);
    let env = gronwall_envelope(&out.diagnostics, norm[0], fit.c3, fit.c4);
    assert!(env.iter().zip(norm.iter()).all(|(e, v)| *v <= e * (1.0 + 1e-12)));
}

#[test]
fn perturbation_growth_within_gronwall_envelope() {
    let g = Grid::periodic(16).unwrap();
    let c = SolverConfig { omega: 4.0, ..short(16) };
    let r = uniqueness_probe(&taylor_green(&g, 1.0), &c, 1e-7, 3).unwrap();
    assert!(r.within_envelope());
    assert!((r.growth[0] - 1.0).abs() < 1e-9);
    assert!(r.fitted_constant.is_finite());
}

#[test]
fn cfl_violation_stops_with_partial_output() {
    let g = Grid::periodic(16).unwrap();
    let c = SolverConfig { dt: 0.5, t_end: 2.0, ..short(16) };
    let out = run(&c, &taylor_green(&g, 5.0)).unwrap();
    assert!(!out.status.is_completed());
    assert!(!out.diagnostics.is_empty());
    assert!(out.final_state.is_finite());
}

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::rotation::{project_mode, unit};
use crate::solver::config::NonlinearForm;
use crate::spectral::field::physical_many;
use crate::spectral::{curl, partial, SpectralVectorField};

/// Inputs to the nonlinear term must be solenoidal to this relative level.
pub const INPUT_DIVERGENCE_TOLERANCE: f64 = 1e-8;

fn check(u: &SpectralVectorField) -> Result<()> {
    let residual = u.divergence_residual();
    if residual > INPUT_DIVERGENCE_TOLERANCE {
        return Err(LabError::DivergenceViolation {
            residual,
            bound: INPUT_DIVERGENCE_TOLERANCE,
        });
    }
    Ok(())
}

/// `(u·∇)u` evaluated pseudo-spectrally and dealiased (not projected).
pub fn advection(u: &SpectralVectorField) -> SpectralVectorField {
    let grid = u.grid().clone();
    let phys = u.to_physical();
    let mut out: [Vec<f64>; 3] = Default::default();
    for (j, acc) in out.iter_mut().enumerate() {
        let d = [0, 1, 2].map(|k| partial(u.component(j), k));
        let d = physical_many(&[&d[0], &d[1], &d[2]]);
        *acc = vec![0.0; grid.len()];
        for (uk, dk) in phys.iter().zip(&d) {
            acc.iter_mut().zip(uk).zip(dk).for_each(|((a, x), y)| *a += x * y);
        }
    }
    SpectralVectorField::from_physical(&grid, [&out[0], &out[1], &out[2]])
        .expect("grid-sized")
        .dealias()
}

/// `−P[(u·∇)u]` from the convective form `u_k ∂_k u_j`.
pub fn nonlinear_term(u: &SpectralVectorField) -> Result<SpectralVectorField> {
    check(u)?;
    Ok(project_negated(&advection(u)))
}

/// `−P[(u·∇)u] = P[u × ω]`, from the rotational form.
pub fn nonlinear_term_rotational(u: &SpectralVectorField) -> Result<SpectralVectorField> {
    check(u)?;
    Ok(rotational(u).0)
}

/// Returns the projected term and `max |u|` on the grid.
pub(crate) fn rotational(u: &SpectralVectorField) -> (SpectralVectorField, f64) {
    let grid = u.grid().clone();
    let w = curl(u);
    let (uc, wc) = (u.components(), w.components());
    let phys = physical_many(&[&uc[0], &uc[1], &uc[2], &wc[0], &wc[1], &wc[2]]);
    let (vel, vort) = phys.split_at(3);
    let len = grid.len();
    let mut cross = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    let mut speed2 = 0.0f64;
    for i in 0..len {
        let (a, w) = ([vel[0][i], vel[1][i], vel[2][i]], [vort[0][i], vort[1][i], vort[2][i]]);
        cross[0][i] = a[1] * w[2] - a[2] * w[1];
        cross[1][i] = a[2] * w[0] - a[0] * w[2];
        cross[2][i] = a[0] * w[1] - a[1] * w[0];
        speed2 = speed2.max(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    }
    let uxw = SpectralVectorField::from_physical(&grid, [&cross[0], &cross[1], &cross[2]])
        .expect("grid-sized");
    (project_dealiased(&uxw, 1.0), speed2.sqrt())
}

fn project_negated(v: &SpectralVectorField) -> SpectralVectorField {
    project_dealiased(v, -1.0)
}

/// `sign · P(dealias v)` in one pass.
fn project_dealiased(v: &SpectralVectorField, sign: f64) -> SpectralVectorField {
    let grid = v.grid().clone();
    let cutoff = grid.n() as f64 / 3.0;
    v.map_modes(|idx, xi, c| {
        let k = grid.mode(idx);
        let kept = !grid.touches_nyquist(idx) && k.iter().all(|ka| ka.abs() as f64 <= cutoff);
        match unit(xi) {
            Some(e) if kept => {
                let p = project_mode(e, c);
                [p[0] * sign, p[1] * sign, p[2] * sign]
            }
            _ => [Complex64::default(); 3],
        }
    })
}

/// Dispatch on the configured form; `Off` yields zero.
pub fn evaluate(u: &SpectralVectorField, form: NonlinearForm) -> (SpectralVectorField, Option<f64>) {
    match form {
        NonlinearForm::Rotational => {
            let (n, s) = rotational(u);
            (n, Some(s))
        }
        NonlinearForm::Convective => (project_negated(&advection(u)), None),
        NonlinearForm::Off => (SpectralVectorField::zeros(u.grid()), None),
    }
}

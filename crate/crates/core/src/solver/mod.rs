//! Time integration of the rotating, optionally regularized Euler system.

pub mod config;
pub mod ifrk4;
pub mod init;
pub mod nonlinear;
pub mod picard;
pub mod run;
pub mod studies;

pub use config::{NonlinearForm, Scheme, SolverConfig};
pub use ifrk4::{step_ifrk4, IfRk4};
pub use init::{helical_mode, helical_vector, random_spectrum, taylor_green, Helicity};
pub use nonlinear::{advection, nonlinear_term, nonlinear_term_rotational};
pub use picard::{picard_solve, InitialGuess, PicardOutcome};
pub use run::{prepare_initial_data, run, run_with, RunOutput, RunStatus, Trajectory};
pub use studies::{
    delta_convergence_study, delta_pair_study, uniqueness_probe, uniqueness_probe_with, DeltaRow, DeltaStudy,
    GrowthReport,
};

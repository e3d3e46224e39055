//! Observables recorded along runs and the dispersive/rotation experiments.

pub mod series;
pub mod strichartz;
pub mod sweep;

pub use series::{default_tracked, fit_gronwall, grad_sup, gronwall_envelope, DiagnosticsSeries, GronwallFit, TrackedNorm};
pub use strichartz::{focused_packet, strichartz_decay, DecayReport, DecayRow};
pub use sweep::{rotation_sweep, rotation_sweep_with, LifespanTable, SweepRow};

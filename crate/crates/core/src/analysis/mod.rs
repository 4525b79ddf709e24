//! Parameter sweeps and the confusion-matrix invariance harness.

mod invariance;
mod sweep;

pub use invariance::{
    apply_cm_transform, check_invariance, ha_from_confusion, CmMetric, CmTransform, Counterexample, Verdict,
    INVARIANCE_TOLERANCE,
};
pub use sweep::{
    complexity_surface, nb_ha_curves, priority_sweep, tau_sweep, Execution, SurfaceConfig, SweepRow, SweepTable,
    RNG_ALGORITHM,
};

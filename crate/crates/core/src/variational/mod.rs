//! Objectives, gradients, optimizers and the variational drivers.

mod drivers;
mod objective;
mod optimize;

pub use drivers::{
    adapt_vqe_run, initial_binding, optimize, qaoa_run, qaoa_run_blueprint, vqe_run, vqe_run_observable,
    AdaptOptions, AdaptState, OptResult, QaoaResult,
};
pub use objective::{Objective, FALLBACK_STEP};
pub use optimize::{minimize, Init, Method, OptimizerConfig, Problem, RawOptResult, Sense, SpsaConstants, TraceEntry};

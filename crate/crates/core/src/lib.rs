//! Per-unit circle-diagram analysis for large loads fed through a single
//! series reactance, with a dual active/reactive power (P/Q) dispatch for
//! voltage ride-through and a discrete-time dip replay simulator.
//!
//! All quantities are per-unit on the substation base. Reactive power
//! follows the load-side convention: leading (capacitive) Q is negative.
//! Angles are radians throughout.
//!
//! Module map:
//! - [`pu`]: receiving-end P/Q equations and the constant-load-voltage
//!   circle identity.
//! - [`geometry`]: power circles, the S_max circle, their intersections,
//!   and the apparent-power curve.
//! - [`dispatch`]: ride-through thresholds, case classification and the
//!   commanded grid / non-grid powers.
//! - [`sim`]: dip-trace replay through the dispatch engine and an
//!   idealized UPS transfer state machine.

pub mod dispatch;
pub mod error;
pub mod geometry;
pub mod pu;
pub mod sim;
pub mod units;

pub use dispatch::{
    classify, dispatch, dispatch_case1, dispatch_case2, thresholds, vs_m_threshold,
    vs_min_threshold, Case, DispatchDecision, DispatchPolicy, Thresholds,
};
pub use error::{Result, VrtError};
pub use geometry::{
    circle_family, circle_of, q_axis_crossing, q_intersection, s_curve, s_curve_minimum,
    s_max_circle, uncompensated_load_voltage, vs_theoretical_min, CircleLocus, LocusPoint,
    PowerCircle, SCurvePoint,
};
pub use pu::{apparent_power, q_on_circle, receiving_end_pq, solve_delta, OperatingPoint};
pub use sim::{
    run, step, summarize, DipTrace, Mode, RecordCase, SimRecord, SimState, SimSummary, UpsConfig,
};
pub use units::{PerUnit, SubstationParams};

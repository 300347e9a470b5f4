//! Exact engine for finitely additive Markov chains on discrete ground
//! spaces.
//!
//! Measures are represented as an atomic part (finite rational point masses)
//! plus a purely finitely additive part (rational combinations of filter
//! functionals), which makes the countably-additive/purely-finitely-additive
//! decomposition structural and keeps every operator application, kernel
//! convolution and fixed-point solve an exact rational computation.

pub mod codec;
pub mod error;
pub mod filter;
pub mod ground;
pub mod invariant;
pub mod kernel;
pub mod linalg;
pub mod measure;
pub mod operator;
pub mod rat;
pub mod set;

pub use codec::FilterRegistry;
pub use error::CoreError;
pub use filter::{filter_eval, FilterFunctional, FilterValue, TailFamily};
pub use ground::{GroundKind, GroundSpace, Point};
pub use invariant::{Generator, InvariantReport, InvariantSolution, OrbitClosure, SolveOutcome};
pub use kernel::{
    superpose, CombinedKernel, Kernel, KernelKind, KernelRule, RowSupport, RuleValue,
    SingletonEntry,
};
pub use measure::{AtomicMeasure, Evaluation, Measure, MeasureClass, PfaCombination};
pub use operator::{Component, HVerdict, MarkovOperator, NormTrace, TraceRow};
pub use rat::Q;
pub use set::{member, sets_equal, Interval, SetExpr};

//! Example rings: idealizations, lazily realized infinite polynomial rings,
//! perfect-closure level rings, invariant subrings and a symbolic model of
//! valuation domains.

mod idealize;
mod invariant;
mod limit;
mod perfect;
mod valuation;

pub use idealize::trivial_extension;
pub use invariant::{invariant_ring, invariant_transfer_check, veronese, GroupAction, InvariantRingPresentation, TransferReport};
pub use limit::{LevelReport, LimitRing};
pub use perfect::{parse_fractional, perfect_closure_ops, FracPoly, PerfectClosureLevel, PerfectReport};
pub use valuation::{Conditions, VIdeal, ValuationModel};

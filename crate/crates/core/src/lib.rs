//! Euclidean projection onto the even and odd parity polytopes by component
//! fixing, with exact sort-based baselines, an operation-counting harness and
//! an ADMM LP decoder that uses any of the projections as its z-update.
//!
//! ```
//! use parity_fix::{fix, ParityKind};
//!
//! let p = fix::project(&[0.5, 1.0, 2.75], ParityKind::Even);
//! assert_eq!(p.z, vec![0.25, 0.75, 1.0]);
//! assert_eq!(p.trace.iterations, 2);
//! ```

pub mod admm;
pub mod baselines;
pub mod bench;
pub mod code;
pub mod fix;
pub mod geometry;
pub mod opcount;
pub mod oracle;

pub use admm::{decode, BuiltinProjector, DecodeOutcome, DecodeStatus, DecoderConfig, LlrVector, Projector};
pub use code::{parse_alist, AlistError, ParityCheckMatrix};
pub use fix::{project, FixProjection, FixWorkspace, ProjectionTrace, Termination};
pub use geometry::{cut_search, is_member, ForbiddenSetInequality, MembershipMode, ParityKind, RealVec, Sign};
pub use opcount::{counted_projection, Algorithm, OpCounters};

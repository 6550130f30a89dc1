//! Computational machinery for one-dimensional transitive groups and
//! solvable factors of classical groups.
//!
//! The crate has five layers:
//!
//! * [`arith`] — exact integer utilities: factorization, sigma-parts,
//!   primitive prime divisors, classical group orders.
//! * [`gf`] — deterministic finite fields F_{p^f} with discrete-log
//!   tables, relative traces, and subfield machinery.
//! * [`gammal1`] — the group GammaL_1(p^f), subgroups in canonical
//!   Foulser form, arithmetic transitivity deciders, and brute-force
//!   orbit oracles.
//! * [`linpoly`] — linearized polynomials over F_{r^m}, the adjoint,
//!   the Singer modules M(i), the invariant d(I), characters, and
//!   kernel counts.
//! * [`polarspace`] / [`factorize`] — the concrete point models of
//!   `[G:B]` with explicit unipotent, Levi, and semilinear actions, and
//!   the G = HB decision procedures cross-checked by orbit closure.

pub mod arith;
pub mod factorize;
pub mod gammal1;
pub mod gf;
pub mod linpoly;
pub mod polarspace;

pub use factorize::{
    decide_existence_for_g, decide_hb, exactness_check, necessary_d_condition,
    stabilizer_structure, verify_by_orbits, verify_sweep, Branch, FactorizationDecision,
    OrthOuter, OvergroupSpec, SweepRecord,
};
pub use gammal1::{FoulserQuadruple, FoulserTriple, GammaL1, GammaL1Element, SubgroupFilter};
pub use gf::Field;
pub use linpoly::{IndexSet, Kind, LinCtx, LinPoly, SpaceParams};
pub use polarspace::{IsometryElement, PolarPoint, PolarSpace};

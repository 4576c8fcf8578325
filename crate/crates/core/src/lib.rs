//! Exact kernels for the density-increment argument on progression-free
//! subsets of `F_q^r`.
//!
//! * [`gf`]: table-backed arithmetic in `F_q`.
//! * [`space`]: points, hyperplanes, slices and rank descent in `F_q^r`.
//! * [`functional`]: exact rational functions, `Λ_E` and the averaging toolkit.
//! * [`increment`]: hyperplane decomposition, the squares-versus-cubes
//!   witness, density-increment certificates and the bound recurrence.
//! * [`search`]: generators of progression-free sets.

pub mod error;
pub mod functional;
pub mod gf;
pub mod increment;
pub mod search;
pub mod space;

pub use error::{Error, Result};
pub use functional::{
    fmt_rational, lambda, lambda_alt_check, lambda_naive, parse_rational, AltIdentity,
    LinearEquation, Rational, RationalFn,
};
pub use gf::{FieldElem, FieldSpec};
pub use increment::{
    ap_lambda_value, bound_recurrence, density_increment, find_progression, is_progression_free,
    meshulam_iterate, parseval_check, proposition_increment, sharpness_case, squares_cubes_witness,
    verify_hyperplane_identity, IdentityReport, IncrementCertificate, IterationTrace, SliceRule,
    TraceStep,
};
pub use search::{exhaustive_maximum, random_maximal, SearchConfig, SearchMode};
pub use space::{AffineHyperplane, Hyperplane, Point, Space};

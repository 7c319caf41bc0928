//! Self-reciprocal quad transforms of ORF ladders and their associated
//! rational functions (ARFs).

mod arf;
mod quad;

pub use arf::{
    arf_caratheodory, arf_explicit, arf_explicit_with, arf_quad, arf_recurrence, relation_residuals, ArfPair,
    ArfSystem, RelationReport, WEIGHT_TABLE_POINTS,
};
pub use quad::{
    apply_transform, check_quad, transform_determinant_residual, transformed_caratheodory, ConditionCheck, QuadReport,
    SelfReciprocalQuad, TransformOutput, NONZERO_TOLERANCE, QUAD_TOLERANCE, REMAINDER_TOLERANCE,
};

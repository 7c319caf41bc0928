//! Orthogonal rational functions on the unit circle.
//!
//! The crate covers the rational spaces `L_n` built on a pole sequence in the
//! disk, orthonormal systems and their three-term-style recurrence, functions
//! of the second kind, para-orthogonal functions and their zeros, and the
//! Caratheodory-function transforms that generate associated rational
//! functions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caratheodory;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod measure;
pub mod orf;
pub mod poles;
pub mod poly;
pub mod random;
pub mod ratfun;
pub mod transforms;

pub use caratheodory::{caratheodory_from_measure, weight_from_caratheodory, CaratheodoryFn};
pub use error::{Error, Result};
pub use kernel::KernelParams;
pub use measure::{builtin_measure, inner_product, CircleMeasure, MeasureSpec, QuadRule};
pub use num_complex::Complex64;
pub use orf::{Normalization, OrfLevel, OrfSystem, ParaPair};
pub use poles::PoleSequence;
pub use random::RandomConfig;
pub use ratfun::RatFun;
pub use transforms::{ArfSystem, SelfReciprocalQuad};

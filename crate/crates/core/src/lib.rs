//! Exact generating-function counts for square-free polynomials over finite
//! fields and for F-stable maximal tori of GL_n, each cross-checked against
//! an independent brute-force route.
//!
//! - [`arith`]: rationals, polynomials in `q`, the field Q(q)
//! - [`series`]: truncated power series in `u` over Q or Q(q)
//! - [`sqfree`]: symbolic counts and expectations for square-free polynomials
//! - [`ffpoly`]: exhaustive enumeration over prime fields
//! - [`tori`]: torus types, the cycle index and its consequences
//! - [`verify`] and [`report`]: identity suites and their JSON/CSV/table output

pub mod arith;
pub mod cli;
pub mod ffpoly;
pub mod report;
pub mod series;
pub mod sqfree;
pub mod tori;
pub mod verify;

mod error;

pub use error::{Error, Result};

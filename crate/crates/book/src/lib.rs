//! Code snippets of the guide in `book/`, compiled and run as doc-tests.
//!
//! Each chapter becomes an empty module so a failing snippet names its
//! chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/clifford.md")]
pub mod clifford {}
#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}
#[doc = include_str!("../../../book/src/spinors.md")]
pub mod spinors {}
#[doc = include_str!("../../../book/src/maps.md")]
pub mod maps {}
#[doc = include_str!("../../../book/src/dirac_harmonic.md")]
pub mod dirac_harmonic {}
#[doc = include_str!("../../../book/src/cases.md")]
pub mod cases {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

//! Construction and exhaustive verification toolkit for Preparata and
//! punctured Preparata codes.
//!
//! The crate builds the length-16 Preparata code (the Nordstrom–Robinson
//! code) in two independent ways, derives punctured codes, builds minimal
//! distance graphs, and checks the combinatorial facts that connect weak
//! isometries (isomorphisms of minimal distance graphs) with isometries and
//! with equivalence under coordinate permutations and translations.
//!
//! Module map:
//!
//! * [`code`]: binary words, codes, weight distributions, the text file format.
//! * [`gf2m`]: log/antilog arithmetic in GF(2^m).
//! * [`construct`]: the (X, Y) subset construction, the octacode / Gray map
//!   cross-construction, puncturing and reduction.
//! * [`graphs`]: minimal distance graphs, colour refinement, canonical
//!   labelling and isomorphism search.
//! * [`verify`]: design, neighbourhood-structure, counting-inequality,
//!   constant-weight and numeric-scan checks.
//! * [`isometry`]: weak isometries, isometry verification and equivalence recovery.
//! * [`cli`]: the `prepcode` command-line front end.

pub mod cli;
pub mod code;
pub mod construct;
pub mod error;
pub mod gf2m;
pub mod graphs;
pub mod isometry;
pub mod verify;

pub use code::{BinaryWord, Code, WeightDistribution};
pub use error::{Error, Result};

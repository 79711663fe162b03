//! Legendrian fronts and horizontal loops in the standard Engel structure
//! on R^4.
//!
//! A closed planar curve `(x, y)` determines a Legendrian curve in R^3 by
//! integrating `dz = y dx`, and a horizontal curve in R^4 by integrating
//! `dw = z dx`. This crate samples such curves, balances them so both
//! integrals close up, decides whether the resulting loop is embedded,
//! computes rotation numbers two ways, synthesizes loops of any rotation
//! number, and runs scripted homotopies of fronts while certifying every
//! frame.
//!
//! ```
//! use engel::{curves, invariants, lifting};
//!
//! let circle = curves::Description::Series {
//!     x: curves::TrigSeries::cos(1),
//!     y: curves::TrigSeries::sin(1),
//! };
//! let g = curves::sample_generator(&circle, 512).unwrap();
//! let g = lifting::balance_closure(&g).unwrap();
//! let loop4 = lifting::lift(&g, 0.0, 0.0).unwrap();
//! assert!(lifting::embedding_check(&loop4).unwrap().embedded);
//! assert_eq!(invariants::rot_winding(&g).unwrap(), 1);
//! ```

pub mod bumps;
pub mod cli;
pub mod curves;
pub mod error;
pub mod frontlang;
pub mod homotopy;
pub mod invariants;
pub mod lifting;
pub mod models;
pub mod scan;
pub mod spectral;

pub use curves::{
    CuspOrientation, Description, FrontDiagram, HorizontalLoop, LegendrianGenerator, LegendrianLoop, Tolerances,
    TrigSeries,
};
pub use error::{Error, Result};

//! Computational workbench for Bockstein-closed quadratic maps `Q: W → V`
//! over `F_2`.
//!
//! The crate decides Bockstein-closedness, computes the cohomology
//! `H*(Q, U)` of the cochain complex `A*(Q) ⊗ U` with `δ(f) = β(f) + Rf`,
//! builds the finite 2-groups `G(Q)` from their factor sets, and computes
//! the second page of the Bockstein spectral sequence both directly and
//! through its decomposition over symmetric powers.
//!
//! Module map:
//!
//! - [`gf2`], [`poly`]: GF(2) linear algebra, polynomials, the Bockstein `β`.
//! - [`quadmap`]: quadratic maps, extension classes, morphisms, families.
//! - [`ideal`]: the quotient algebra `A*(Q)`, normal forms, Hilbert series.
//! - [`bockstein`]: `β(q) = Lq`, representations, the bilinear `P` test.
//! - [`cohomology`]: the cochain complex, `H^p(Q, U)` and its dictionary.
//! - [`spectral`]: the `B_1` model and `B_2` page.
//! - [`group`]: `G(Q)`, structure checks, realized morphisms, `Z/4` lattices.
//! - [`resolution`]: mod-2 Betti numbers by minimal resolution (an oracle).

pub mod bockstein;
pub mod cohomology;
mod error;
pub mod gf2;
pub mod group;
pub mod ideal;
pub mod poly;
pub mod quadmap;
pub mod resolution;
pub mod spectral;

pub use error::{Error, Result};

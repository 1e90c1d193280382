//! Tate–Shafarevich groups `Ш²_D(G, J_{G/H})` of norm-one-torus character
//! lattices: a brute-force integer cohomology engine, structural evaluators
//! that predict the same groups, and the `F_p`-representation criteria that
//! decide for which degrees the Hasse norm principle can fail.

pub mod arith;
pub mod coh;
pub mod error;
pub mod finab;
pub mod grp;
pub mod lat;
pub mod linalg;
pub mod rep;
pub mod thm;

pub use error::{Error, Result};
pub use finab::FinAb;

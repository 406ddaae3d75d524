//! Exact obstructions to homotopy ribbon concordance between knots.
//!
//! Knots enter as Seifert matrices and, optionally, PD codes. The
//! [`obstruct`] module compares an ordered pair `J ≥ K` through Alexander
//! divisibility, double branched covers, Levine–Tristram signatures and
//! twisted Alexander polynomials of metabelian representations.

pub mod laurent;
pub mod zmodules;
pub mod seifert;
pub mod linkform;
pub mod wirtinger;
pub mod twisted;
pub mod obstruct;
pub mod table;
pub mod fixtures;

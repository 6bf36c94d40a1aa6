//! Exact computations with dg Loday-Pirashvili modules over finite-dimensional
//! Lie algebras: Chevalley-Eilenberg complexes, weak morphisms and their
//! lifts, twisted Atiyah cocycles and the Kapranov Leibniz-infinity brackets.

pub mod atiyah;
pub mod cochain;
pub mod cohomology;
pub mod exterior;
pub mod kapranov;
pub mod lie;
pub mod lie_pair;
pub mod linalg;
pub mod lp;
pub mod module;
pub mod morphism;
pub mod random;

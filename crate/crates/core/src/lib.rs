//! Stochastic Boolean satisfiability with S-resolution proofs and generalized
//! Craig interpolation, plus interpolation-based analysis of Markov decision
//! processes.

pub mod gen;
pub mod logic;
pub mod mdp;
pub mod oracle;
pub mod analysis;
pub mod solver;
pub mod sresolution;

pub use logic::rational::Rational;

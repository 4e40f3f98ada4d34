//! Exact social welfare functions on ranked ballots: orders, ballot domains,
//! anonymous and relative profiles, concrete rules, and axiom checkers.

pub mod ballot;
pub mod certify;
pub mod error;
pub mod order;
pub mod profile;
pub mod rational;
pub mod rules;

pub use ballot::Ballot;
pub use error::{AssemblyError, Error, Result};
pub use order::{Candidate, Gap, Permutation, Ranking, RelOutcome, WeakOrder};
pub use profile::{AnonymousProfile, FiniteElection, RelativeProfile};
pub use rational::Rational;
pub use rules::{Rule, Swf};
pub use certify::{CheckReport, Counterexample, GFunction};

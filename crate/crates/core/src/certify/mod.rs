//! Axiom checkers and exhaustive verifiers.
//!
//! Every exhaustive check enumerates elections in lexicographic order (voter
//! 0 most significant, ballot rankings in their sorted order) and reports the
//! first counterexample it meets.

mod axioms;
mod ivm;
mod numberline;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{Candidate, Gap, Permutation, RelOutcome, WeakOrder};
use crate::profile::{FiniteElection, RelativeProfile};

pub use axioms::{
    check_anonymity, check_miia, check_neutrality, check_pareto, check_pr_raw, check_prm,
    check_prm_exhaustive, elections, evaluate_all,
};
pub use ivm::{check_ivm, ivm_bracket, ivm_bracket_with, IvmCertificate, IvmOptions};
pub use numberline::{
    cc_agrees_with_borda, cc_profiles, cc_rule_from_g, classify_cc, numberline_solutions,
    threshold_kappa, CcClass, CcLabel, GFunction, NumberlineSolution,
};

/// Hard cap on the number of cases any exhaustive check may enumerate.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

pub(crate) fn guard(what: &'static str, size: Option<u128>) -> Result<()> {
    match size {
        Some(size) if size <= ENUMERATION_LIMIT => Ok(()),
        size => Err(Error::Guard {
            what,
            size: size.unwrap_or(u128::MAX),
            limit: ENUMERATION_LIMIT,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: &'static str,
    pub passed: bool,
    /// Number of elections, election pairs or profile pairs examined.
    pub cases: u64,
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
}

impl CheckReport {
    pub(crate) fn new(check: &'static str, cases: u64, counterexample: Option<Counterexample>) -> Self {
        CheckReport {
            check,
            passed: counterexample.is_none(),
            cases,
            counterexample,
            cross_check: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Verdict of the election-level PRm check run alongside raw PR.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub check: &'static str,
    pub passed: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// Two elections with the same relative election but different results.
    Miia {
        i: Candidate,
        j: Candidate,
        relative: Vec<Gap>,
        first: FiniteElection,
        first_outcome: RelOutcome,
        second: FiniteElection,
        second_outcome: RelOutcome,
    },
    /// `F(e ∘ σ) ≠ F(e)`.
    Anonymity {
        election: FiniteElection,
        sigma: Vec<usize>,
        result: WeakOrder,
        permuted_result: WeakOrder,
    },
    /// `F(ρ ∘ e) ≠ ρ(F(e))`.
    Neutrality {
        election: FiniteElection,
        rho: Permutation,
        expected: WeakOrder,
        actual: WeakOrder,
    },
    /// Every voter ranks `i` above `j` but the result does not.
    Pareto {
        election: FiniteElection,
        i: Candidate,
        j: Candidate,
        outcome: RelOutcome,
    },
    /// `(c_j, c_i)` is promoted by `(e2, e1)` yet `π_{i,j}(F(e1)) < π_{i,j}(F(e2))`.
    Pr {
        i: Candidate,
        j: Candidate,
        e1: FiniteElection,
        e2: FiniteElection,
        outcome1: RelOutcome,
        outcome2: RelOutcome,
    },
    /// Voterwise `a1 ≥ a2` yet `f_{i,j}(a1) < f_{i,j}(a2)`.
    PrmElections {
        i: Candidate,
        j: Candidate,
        a1: Vec<Gap>,
        a2: Vec<Gap>,
        e1: FiniteElection,
        e2: FiniteElection,
        outcome1: RelOutcome,
        outcome2: RelOutcome,
    },
    /// `higher` majorizes `lower` yet `f'(higher) < f'(lower)`.
    Prm {
        higher: RelativeProfile,
        lower: RelativeProfile,
        higher_outcome: RelOutcome,
        lower_outcome: RelOutcome,
    },
    /// No tying profile was certified between a winning and a losing one.
    Ivm {
        higher: RelativeProfile,
        lower: RelativeProfile,
        reason: String,
    },
}

impl Counterexample {
    /// Re-checks the violation against `f` from the definitions alone.
    /// Returns `Ok(true)` when the violation is reproduced.
    pub fn replay(&self, f: &dyn crate::rules::Swf) -> Result<bool> {
        use crate::profile::{promotes_elections, tau};
        match self {
            Counterexample::Miia { i, j, first, second, .. } => Ok(first.relative(*i, *j)?
                == second.relative(*i, *j)?
                && f.apply(first)?.rel(*i, *j)? != f.apply(second)?.rel(*i, *j)?),
            Counterexample::Anonymity { election, sigma, .. } => {
                let permuted = election.permute_voters(sigma)?;
                Ok(tau(&permuted) == tau(election) && f.apply(&permuted)? != f.apply(election)?)
            }
            Counterexample::Neutrality { election, rho, .. } => {
                let moved = FiniteElection::new(
                    election.votes().iter().map(|r| r.relabel(rho)).collect(),
                )?;
                Ok(f.apply(&moved)? != f.apply(election)?.relabel(rho))
            }
            Counterexample::Pareto { election, i, j, .. } => {
                let unanimous = election
                    .votes()
                    .iter()
                    .all(|r| r.gap_unchecked(*i, *j).value() > 0);
                Ok(unanimous && f.apply(election)?.rel(*i, *j)? != RelOutcome::W)
            }
            Counterexample::Pr { i, j, e1, e2, .. } => Ok(promotes_elections(e2, e1, *j, *i)?
                && f.apply(e1)?.rel(*i, *j)? < f.apply(e2)?.rel(*i, *j)?),
            Counterexample::PrmElections { i, j, a1, a2, e1, e2, .. } => {
                let dominated = a1.iter().zip(a2).all(|(x, y)| x >= y);
                Ok(dominated
                    && &e1.relative(*i, *j)? == a1
                    && &e2.relative(*i, *j)? == a2
                    && f.apply(e1)?.rel(*i, *j)? < f.apply(e2)?.rel(*i, *j)?)
            }
            Counterexample::Prm { .. } | Counterexample::Ivm { .. } => Err(crate::error::precondition(
                "profile-level counterexamples replay through replay_relative",
            )),
        }
    }

    /// Re-checks a profile-level PRm violation against the pairwise rule `f`.
    pub fn replay_relative(
        &self,
        f: &dyn Fn(&RelativeProfile) -> Result<RelOutcome>,
    ) -> Result<bool> {
        match self {
            Counterexample::Prm { higher, lower, .. } => {
                Ok(higher.majorizes(lower)? && f(higher)? < f(lower)?)
            }
            _ => Err(crate::error::precondition(
                "election-level counterexamples replay through replay",
            )),
        }
    }
}

//! Ballots and exhaustive checks of the increasing, intermediate and
//! separable ballot-domain properties.
//!
//! Every check walks candidate pairs, gaps and rankings in a fixed order and
//! reports the first violation found, so counterexamples are deterministic.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{parse_error, precondition, Result};
use crate::order::{all_rankings, promotes, Candidate, Gap, Permutation, Ranking};

/// The set of rankings every voter may submit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ballot {
    k: usize,
    rankings: Vec<Ranking>,
}

impl Ballot {
    pub fn new(rankings: impl IntoIterator<Item = Ranking>) -> Result<Self> {
        let rankings: BTreeSet<Ranking> = rankings.into_iter().collect();
        let k = match rankings.first() {
            Some(r) => r.k(),
            None => return Err(precondition("a ballot needs more than one ranking")),
        };
        if rankings.iter().any(|r| r.k() != k) {
            return Err(precondition("all rankings on a ballot must rank the same candidates"));
        }
        if rankings.len() < 2 {
            return Err(precondition("a ballot needs more than one ranking"));
        }
        Ok(Ballot {
            k,
            rankings: rankings.into_iter().collect(),
        })
    }

    /// Every ranking of `k` candidates.
    pub fn full(k: usize) -> Result<Self> {
        Ballot::new(all_rankings(k)?)
    }

    /// The three cyclic rotations of `c1>c2>c3`.
    pub fn condorcet() -> Self {
        let base: Ranking = "c1>c2>c3".parse().expect("valid ranking");
        Ballot::new((0..3).map(|s| base.relabel(&Permutation::cyclic_shift(3, s))))
            .expect("three distinct rankings")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.rankings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rankings.is_empty()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn contains(&self, r: &Ranking) -> bool {
        self.rankings.binary_search(r).is_ok()
    }

    pub fn position(&self, r: &Ranking) -> Option<usize> {
        self.rankings.binary_search(r).ok()
    }

    /// `B_{i,j} = {π_{i,j}(r) : r ∈ B}`.
    pub fn relative(&self, i: Candidate, j: Candidate) -> Result<BTreeSet<Gap>> {
        if i == j {
            return Err(precondition("relative ballot needs distinct candidates"));
        }
        self.check_candidate(i)?;
        self.check_candidate(j)?;
        Ok(self.rankings.iter().map(|r| r.gap_unchecked(i, j)).collect())
    }

    fn check_candidate(&self, c: Candidate) -> Result<()> {
        if c.index() >= self.k {
            return Err(precondition(format!("{c} is not one of c1..c{}", self.k)));
        }
        Ok(())
    }

    /// Whether `ρ(B) = B`.
    pub fn is_invariant_under(&self, perm: &Permutation) -> bool {
        perm.k() == self.k && self.rankings.iter().all(|r| self.contains(&r.relabel(perm)))
    }

    /// Candidate permutations that map the ballot onto itself.
    pub fn symmetries(&self) -> Vec<Permutation> {
        Permutation::all(self.k)
            .into_iter()
            .filter(|p| self.is_invariant_under(p))
            .collect()
    }

    pub fn increasing_violation(&self) -> Option<IncreasingViolation> {
        for (i, j) in Candidate::ordered_pairs(self.k) {
            let gaps = self.relative_unchecked(i, j);
            for &high in &gaps {
                for &low in gaps.range(..high) {
                    for r in self.with_gap(i, j, high) {
                        let found = self
                            .with_gap(i, j, low)
                            .any(|r2| promotes(r2, r, j, i));
                        if !found {
                            return Some(IncreasingViolation {
                                i,
                                j,
                                from_gap: high,
                                to_gap: low,
                                ranking: r.clone(),
                            });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing_violation().is_none()
    }

    pub fn intermediate_violation(&self) -> Option<IntermediateViolation> {
        for (i, j) in Candidate::ordered_pairs(self.k) {
            let gaps = self.relative_unchecked(i, j);
            for upper in &self.rankings {
                for lower in &self.rankings {
                    if !promotes(lower, upper, j, i) {
                        continue;
                    }
                    let (lo, hi) = (lower.gap_unchecked(i, j), upper.gap_unchecked(i, j));
                    if lo >= hi {
                        continue;
                    }
                    for &m in gaps.range(lo..hi).filter(|&&m| m != lo) {
                        let found = self
                            .with_gap(i, j, m)
                            .any(|mid| promotes(lower, mid, j, i) && promotes(mid, upper, j, i));
                        if !found {
                            return Some(IntermediateViolation {
                                i,
                                j,
                                upper: upper.clone(),
                                lower: lower.clone(),
                                gap: m,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_intermediate(&self) -> bool {
        self.intermediate_violation().is_none()
    }

    /// Separability on the ballot domain: whenever two candidate pairs share
    /// a realizable gap, some ballot symmetry carries one pair onto the other.
    ///
    /// Relative elections on a ballot domain are all functions into the
    /// relative ballot, so two pairs' relative elections meet exactly when
    /// their relative ballots do.
    pub fn separability_violation(&self) -> Option<SeparabilityViolation> {
        let symmetries = self.symmetries();
        for (i, j) in Candidate::ordered_pairs(self.k) {
            let gaps = self.relative_unchecked(i, j);
            for (i2, j2) in Candidate::ordered_pairs(self.k) {
                let gaps2 = self.relative_unchecked(i2, j2);
                if gaps.is_disjoint(&gaps2) {
                    continue;
                }
                let carried = symmetries.iter().any(|p| p.apply(i) == i2 && p.apply(j) == j2);
                if !carried {
                    return Some(SeparabilityViolation {
                        from: (i, j),
                        to: (i2, j2),
                        shared_gaps: gaps.intersection(&gaps2).copied().collect(),
                    });
                }
            }
        }
        None
    }

    pub fn is_separable(&self) -> bool {
        self.separability_violation().is_none()
    }

    pub(crate) fn relative_unchecked(&self, i: Candidate, j: Candidate) -> BTreeSet<Gap> {
        self.rankings.iter().map(|r| r.gap_unchecked(i, j)).collect()
    }

    fn with_gap(&self, i: Candidate, j: Candidate, m: Gap) -> impl Iterator<Item = &Ranking> {
        self.rankings.iter().filter(move |r| r.gap_unchecked(i, j) == m)
    }
}

impl fmt::Debug for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rankings.iter()).finish()
    }
}

impl Serialize for Ballot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rankings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ballot {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rankings = Vec::<Ranking>::deserialize(d)?;
        Ballot::new(rankings).map_err(serde::de::Error::custom)
    }
}

impl Ballot {
    /// Parses a JSON array of ranking strings.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_error(format!("ballot JSON: {e}")))
    }
}

pub fn full_ballot(k: usize) -> Result<Ballot> {
    Ballot::full(k)
}

pub fn condorcet_ballot() -> Ballot {
    Ballot::condorcet()
}

pub fn relative_ballot(b: &Ballot, i: Candidate, j: Candidate) -> Result<BTreeSet<Gap>> {
    b.relative(i, j)
}

/// A ranking with gap `from_gap` that no ranking with gap `to_gap` promotes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncreasingViolation {
    pub i: Candidate,
    pub j: Candidate,
    pub from_gap: Gap,
    pub to_gap: Gap,
    pub ranking: Ranking,
}

/// A promotion `(lower, upper)` with no ballot ranking at `gap` between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntermediateViolation {
    pub i: Candidate,
    pub j: Candidate,
    pub upper: Ranking,
    pub lower: Ranking,
    pub gap: Gap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparabilityViolation {
    pub from: (Candidate, Candidate),
    pub to: (Candidate, Candidate),
    pub shared_gaps: Vec<Gap>,
}

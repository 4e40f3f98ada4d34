//! Finite elections and their anonymous and relative weight profiles.
//!
//! A single [`AnonymousProfile`] type covers both electorates: integer
//! weights summing to `n` for `n` voters, and rational weights summing to 1
//! for a continuum electorate. All arithmetic is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{parse_error, precondition, Result};
use crate::order::{promotes, Candidate, Gap, Ranking};
use crate::rational::{self, Rational};

/// One ranking per voter, voters numbered `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FiniteElection {
    votes: Vec<Ranking>,
}

impl FiniteElection {
    pub fn new(votes: Vec<Ranking>) -> Result<Self> {
        let k = match votes.first() {
            Some(r) => r.k(),
            None => return Err(precondition("an election needs at least one voter")),
        };
        if votes.iter().any(|r| r.k() != k) {
            return Err(precondition("all votes must rank the same candidates"));
        }
        Ok(FiniteElection { votes })
    }

    pub fn n(&self) -> usize {
        self.votes.len()
    }

    pub fn k(&self) -> usize {
        self.votes[0].k()
    }

    pub fn votes(&self) -> &[Ranking] {
        &self.votes
    }

    pub fn vote(&self, voter: usize) -> &Ranking {
        &self.votes[voter]
    }

    /// `π_{i,j}(e)`: each voter's gap between `c_i` and `c_j`.
    pub fn relative(&self, i: Candidate, j: Candidate) -> Result<Vec<Gap>> {
        self.votes.iter().map(|r| r.gap(i, j)).collect()
    }

    /// `e ∘ σ`: voter `v` casts the ballot of voter `σ(v)`.
    pub fn permute_voters(&self, sigma: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n()];
        for &s in sigma {
            if s >= self.n() || std::mem::replace(&mut seen[s], true) {
                return Err(precondition("voter permutation must be a bijection"));
            }
        }
        if sigma.len() != self.n() {
            return Err(precondition("voter permutation must cover every voter"));
        }
        Ok(FiniteElection {
            votes: sigma.iter().map(|&s| self.votes[s].clone()).collect(),
        })
    }
}

impl fmt::Debug for FiniteElection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.votes.iter()).finish()
    }
}

/// `ε`: a nonnegative weight per ranking. Zero weights are not stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnonymousProfile {
    k: usize,
    weights: BTreeMap<Ranking, Rational>,
}

impl AnonymousProfile {
    pub fn new(k: usize, weights: impl IntoIterator<Item = (Ranking, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Ranking, Rational> = BTreeMap::new();
        for (r, w) in weights {
            if r.k() != k {
                return Err(precondition(format!("ranking {r} does not rank {k} candidates")));
            }
            if w.is_negative() {
                return Err(precondition(format!("weight {w} of {r} is negative")));
            }
            *map.entry(r).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        if map.is_empty() {
            return Err(precondition("profile total weight must be positive"));
        }
        Ok(AnonymousProfile { k, weights: map })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weight(&self, r: &Ranking) -> Rational {
        self.weights.get(r).cloned().unwrap_or_else(Rational::zero)
    }

    /// Rankings with positive weight, in ranking order.
    pub fn support(&self) -> impl Iterator<Item = (&Ranking, &Rational)> {
        self.weights.iter()
    }

    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    /// Whether every weight is an integer (a count profile).
    pub fn is_integral(&self) -> bool {
        self.weights.values().all(|w| w.is_integer())
    }

    /// Rescales the weights so they sum to one.
    pub fn normalize(&self) -> AnonymousProfile {
        let total = self.total();
        AnonymousProfile {
            k: self.k,
            weights: self
                .weights
                .iter()
                .map(|(r, w)| (r.clone(), w / &total))
                .collect(),
        }
    }

    /// `π_{i,j}(ε)_m = Σ_{r : π_{i,j}(r) = m} ε_r`.
    pub fn project(&self, i: Candidate, j: Candidate) -> Result<RelativeProfile> {
        if i == j {
            return Err(precondition("projection needs distinct candidates"));
        }
        if i.index() >= self.k || j.index() >= self.k {
            return Err(precondition(format!("candidates must be among c1..c{}", self.k)));
        }
        let mut weights: BTreeMap<Gap, Rational> = BTreeMap::new();
        for (r, w) in &self.weights {
            *weights.entry(r.gap_unchecked(i, j)).or_insert_with(Rational::zero) += w;
        }
        Ok(RelativeProfile { k: self.k, weights })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ProfileJson =
            serde_json::from_str(text).map_err(|e| parse_error(format!("profile JSON: {e}")))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ProfileJson::from(self)).expect("profile serializes")
    }
}

impl fmt::Debug for AnonymousProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.weights.iter().map(|(r, w)| (r.to_string(), w.to_string())))
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileJson {
    k: usize,
    weights: BTreeMap<String, String>,
}

impl TryFrom<ProfileJson> for AnonymousProfile {
    type Error = crate::Error;

    fn try_from(raw: ProfileJson) -> Result<Self> {
        let mut weights = Vec::with_capacity(raw.weights.len());
        for (key, value) in &raw.weights {
            let r: Ranking = key.parse()?;
            if r.k() != raw.k {
                return Err(parse_error(format!("ranking key {key:?} does not rank {} candidates", raw.k)));
            }
            let w = rational::parse_rational(value)?;
            if w.is_negative() {
                return Err(parse_error(format!("weight {value:?} for {key:?} is negative")));
            }
            weights.push((r, w));
        }
        AnonymousProfile::new(raw.k, weights).map_err(|e| parse_error(e.to_string()))
    }
}

impl From<&AnonymousProfile> for ProfileJson {
    fn from(p: &AnonymousProfile) -> Self {
        ProfileJson {
            k: p.k,
            weights: p
                .weights
                .iter()
                .map(|(r, w)| (r.to_string(), w.to_string()))
                .collect(),
        }
    }
}

/// `α`: a nonnegative weight per gap value in `D_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RelativeProfile {
    k: usize,
    weights: BTreeMap<Gap, Rational>,
}

impl RelativeProfile {
    pub fn new(k: usize, weights: impl IntoIterator<Item = (Gap, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Gap, Rational> = BTreeMap::new();
        for (g, w) in weights {
            if g.value() == 0 || g.value().unsigned_abs() as usize >= k {
                return Err(precondition(format!("gap {g} is not in D_{k}")));
            }
            if w.is_negative() {
                return Err(precondition(format!("weight {w} at gap {g} is negative")));
            }
            *map.entry(g).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        Ok(RelativeProfile { k, weights: map })
    }

    /// Three-candidate profile from `(α₂, α₁, α₋₁, α₋₂)`.
    pub fn from_coords3(coords: [Rational; 4]) -> Result<Self> {
        let [a2, a1, am1, am2] = coords;
        RelativeProfile::new(
            3,
            [
                (Gap::new(2), a2),
                (Gap::new(1), a1),
                (Gap::new(-1), am1),
                (Gap::new(-2), am2),
            ],
        )
    }

    /// `(α₂, α₁, α₋₁, α₋₂)` of a three-candidate profile.
    pub fn coords3(&self) -> Result<[Rational; 4]> {
        if self.k != 3 {
            return Err(precondition("coordinates (α₂, α₁, α₋₁, α₋₂) need k = 3"));
        }
        Ok([2, 1, -1, -2].map(|g| self.weight(Gap::new(g))))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weight(&self, g: Gap) -> Rational {
        self.weights.get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn weights(&self) -> impl Iterator<Item = (Gap, &Rational)> {
        self.weights.iter().map(|(g, w)| (*g, w))
    }

    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    /// Gaps carrying positive weight.
    pub fn support(&self) -> impl Iterator<Item = Gap> + '_ {
        self.weights
            .iter()
            .filter(|(_, w)| w.is_positive())
            .map(|(g, _)| *g)
    }

    pub fn normalize(&self) -> Result<RelativeProfile> {
        let total = self.total();
        if !total.is_positive() {
            return Err(precondition("cannot normalize a profile of total weight 0"));
        }
        Ok(RelativeProfile {
            k: self.k,
            weights: self.weights.iter().map(|(g, w)| (*g, w / &total)).collect(),
        })
    }

    /// `ϱ(α)_m = α_{-m}`.
    pub fn rho(&self) -> RelativeProfile {
        RelativeProfile {
            k: self.k,
            weights: self.weights.iter().map(|(g, w)| (-*g, w.clone())).collect(),
        }
    }

    /// Whether every upper tail sum of `self` dominates that of `other`.
    pub fn majorizes(&self, other: &RelativeProfile) -> Result<bool> {
        if self.k != other.k {
            return Err(precondition("majorization compares profiles over the same D_k"));
        }
        if self.total() != other.total() {
            return Err(precondition(format!(
                "majorization needs equal totals, got {} and {}",
                self.total(),
                other.total()
            )));
        }
        let mut tail_self = Rational::zero();
        let mut tail_other = Rational::zero();
        for g in Gap::domain(self.k).into_iter().rev() {
            tail_self += self.weight(g);
            tail_other += other.weight(g);
            if tail_self < tail_other {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for RelativeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.weights.iter().map(|(g, w)| (g.value(), w.to_string())))
            .finish()
    }
}

impl Serialize for RelativeProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let weights: BTreeMap<String, String> = self
            .weights
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(g, w)| (g.to_string(), w.to_string()))
            .collect();
        #[derive(Serialize)]
        struct Repr {
            k: usize,
            weights: BTreeMap<String, String>,
        }
        Repr { k: self.k, weights }.serialize(s)
    }
}

impl Serialize for AnonymousProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileJson::from(self).serialize(s)
    }
}

/// `τ(e)`: how many voters cast each ranking.
pub fn tau(e: &FiniteElection) -> AnonymousProfile {
    let mut weights: BTreeMap<Ranking, Rational> = BTreeMap::new();
    for r in e.votes() {
        *weights.entry(r.clone()).or_insert_with(Rational::zero) += rational::one();
    }
    AnonymousProfile { k: e.k(), weights }
}

/// Count of voters at each gap of `π_{i,j}(e)`, i.e. `τ_{i,j}(π_{i,j}(e))`.
pub fn tau_relative(k: usize, relative: &[Gap]) -> RelativeProfile {
    let mut weights: BTreeMap<Gap, Rational> = BTreeMap::new();
    for g in relative {
        *weights.entry(*g).or_insert_with(Rational::zero) += rational::one();
    }
    RelativeProfile { k, weights }
}

pub fn normalize(p: &AnonymousProfile) -> AnonymousProfile {
    p.normalize()
}

pub fn project(p: &AnonymousProfile, i: Candidate, j: Candidate) -> Result<RelativeProfile> {
    p.project(i, j)
}

pub fn rho(a: &RelativeProfile) -> RelativeProfile {
    a.rho()
}

pub fn majorizes(a: &RelativeProfile, b: &RelativeProfile) -> Result<bool> {
    a.majorizes(b)
}

/// Whether `(c_j, c_i)` is promoted by `(e2(v), e1(v))` for every voter.
pub fn promotes_elections(
    e2: &FiniteElection,
    e1: &FiniteElection,
    j: Candidate,
    i: Candidate,
) -> Result<bool> {
    if e1.n() != e2.n() {
        return Err(precondition(format!(
            "elections have {} and {} voters",
            e2.n(),
            e1.n()
        )));
    }
    Ok(e2
        .votes()
        .iter()
        .zip(e1.votes())
        .all(|(r2, r1)| promotes(r2, r1, j, i)))
}

//! Rankings, weak orders, gaps, and the three-valued pairwise outcome.
//!
//! Candidates are 0-indexed internally and rendered as `c1..ck`. A [`Ranking`]
//! is stored as the bijection candidate → rank, where rank `k-1` is the top
//! position and rank `0` the bottom, so `c1>c2>c3` maps `c1 ↦ 2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{parse_error, precondition, Result};

/// Largest candidate count accepted by the ranking enumerators.
pub const MAX_RANKING_K: usize = 8;
/// Largest candidate count accepted by the weak order enumerator.
pub const MAX_WEAK_ORDER_K: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate(u8);

impl Candidate {
    pub fn new(index: usize) -> Self {
        assert!(index < u8::MAX as usize, "candidate index {index} out of range");
        Candidate(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// `c_{i+by}` with indices taken modulo `k`.
    pub fn shift(self, by: isize, k: usize) -> Self {
        let k = k as isize;
        Candidate::new((self.0 as isize + by).rem_euclid(k) as usize)
    }

    pub fn all(k: usize) -> impl Iterator<Item = Candidate> + Clone {
        (0..k).map(Candidate::new)
    }

    /// Ordered pairs `(i, j)` with `i != j`, lexicographic.
    pub fn ordered_pairs(k: usize) -> impl Iterator<Item = (Candidate, Candidate)> {
        Candidate::all(k)
            .cartesian_product(Candidate::all(k))
            .filter(|(i, j)| i != j)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0 as usize + 1)
    }
}

impl FromStr for Candidate {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .trim()
            .strip_prefix('c')
            .ok_or_else(|| parse_error(format!("candidate {s:?} must look like c<int>")))?;
        let n: usize = digits
            .parse()
            .map_err(|_| parse_error(format!("candidate {s:?} must look like c<int>")))?;
        if n == 0 || n > u8::MAX as usize {
            return Err(parse_error(format!("candidate {s:?} out of range")));
        }
        Ok(Candidate::new(n - 1))
    }
}

impl Serialize for Candidate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Signed distance `r(c_i) - r(c_j)` between two candidates in one ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gap(i32);

impl Gap {
    pub fn new(value: i32) -> Self {
        Gap(value)
    }

    pub fn value(self) -> i32 {
        self.0
    }

    /// `D_k = {1-k, ..., -1, 1, ..., k-1}` in ascending order.
    pub fn domain(k: usize) -> Vec<Gap> {
        let k = k as i32;
        (1 - k..k).filter(|&m| m != 0).map(Gap).collect()
    }
}

impl Neg for Gap {
    type Output = Gap;

    fn neg(self) -> Gap {
        Gap(-self.0)
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Pairwise result: win, tie or loss, ordered `W > T > L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelOutcome {
    L,
    T,
    W,
}

impl RelOutcome {
    pub const ALL: [RelOutcome; 3] = [RelOutcome::W, RelOutcome::T, RelOutcome::L];

    pub fn symbol(self) -> char {
        match self {
            RelOutcome::W => 'W',
            RelOutcome::T => 'T',
            RelOutcome::L => 'L',
        }
    }
}

impl Neg for RelOutcome {
    type Output = RelOutcome;

    fn neg(self) -> RelOutcome {
        match self {
            RelOutcome::W => RelOutcome::L,
            RelOutcome::T => RelOutcome::T,
            RelOutcome::L => RelOutcome::W,
        }
    }
}

impl fmt::Display for RelOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for RelOutcome {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "W" => Ok(RelOutcome::W),
            "T" => Ok(RelOutcome::T),
            "L" => Ok(RelOutcome::L),
            other => Err(parse_error(format!("outcome {other:?} is not one of W, T, L"))),
        }
    }
}

/// Whether three pairwise outcomes can come from a weak order on three
/// candidates: `{W,W,L}`, `{W,T,L}`, `{W,L,L}` or `{T,T,T}`.
pub fn is_consistent(outcomes: [RelOutcome; 3]) -> bool {
    use RelOutcome::*;
    let mut sorted = outcomes;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    matches!(sorted, [W, W, L] | [W, T, L] | [W, L, L] | [T, T, T])
}

/// A strict total order of `k` candidates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    rank_of: Vec<u8>,
}

impl Ranking {
    /// Builds a ranking from its candidates listed best first.
    pub fn from_order(order: &[Candidate]) -> Result<Self> {
        let k = order.len();
        let mut rank_of = vec![u8::MAX; k];
        for (pos, c) in order.iter().enumerate() {
            if c.index() >= k || rank_of[c.index()] != u8::MAX {
                return Err(precondition(format!(
                    "ranking must list each of c1..c{k} exactly once"
                )));
            }
            rank_of[c.index()] = (k - 1 - pos) as u8;
        }
        Ok(Ranking { rank_of })
    }

    /// Builds a ranking from `rank_of[i] = r(c_i)`.
    pub fn from_ranks(rank_of: Vec<u8>) -> Result<Self> {
        let k = rank_of.len();
        let mut seen = vec![false; k];
        for &r in &rank_of {
            let r = r as usize;
            if r >= k || seen[r] {
                return Err(precondition("ranks must be a bijection onto 0..k-1"));
            }
            seen[r] = true;
        }
        Ok(Ranking { rank_of })
    }

    pub fn k(&self) -> usize {
        self.rank_of.len()
    }

    pub fn rank(&self, c: Candidate) -> usize {
        self.rank_of[c.index()] as usize
    }

    pub fn ranks(&self) -> &[u8] {
        &self.rank_of
    }

    /// Candidates best first.
    pub fn order(&self) -> Vec<Candidate> {
        let k = self.k();
        let mut order = vec![Candidate::new(0); k];
        for (c, &r) in self.rank_of.iter().enumerate() {
            order[k - 1 - r as usize] = Candidate::new(c);
        }
        order
    }

    /// `π_{i,j}(r) = r(c_i) - r(c_j)`.
    pub fn gap(&self, i: Candidate, j: Candidate) -> Result<Gap> {
        if i == j {
            return Err(precondition(format!("gap needs distinct candidates, got {i} twice")));
        }
        Ok(self.gap_unchecked(i, j))
    }

    pub(crate) fn gap_unchecked(&self, i: Candidate, j: Candidate) -> Gap {
        Gap(self.rank(i) as i32 - self.rank(j) as i32)
    }

    /// Renames every candidate `c` to `perm(c)`, keeping its position.
    pub fn relabel(&self, perm: &Permutation) -> Ranking {
        let mut rank_of = vec![0; self.k()];
        for (c, &r) in self.rank_of.iter().enumerate() {
            rank_of[perm.apply(Candidate::new(c)).index()] = r;
        }
        Ranking { rank_of }
    }

    /// The weak order with no ties that this ranking induces.
    pub fn to_weak_order(&self) -> WeakOrder {
        let k = self.k();
        WeakOrder {
            tier_of: self.rank_of.iter().map(|&r| (k - 1) as u8 - r).collect(),
        }
    }
}

impl Ord for Ranking {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k()
            .cmp(&other.k())
            .then_with(|| self.order().cmp(&other.order()))
    }
}

impl PartialOrd for Ranking {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.order().iter().join(">"))
    }
}

impl fmt::Debug for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ranking({self})")
    }
}

impl FromStr for Ranking {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let order: Vec<Candidate> = s.split('>').map(Candidate::from_str).try_collect()?;
        if order.len() < 2 {
            return Err(parse_error(format!("ranking {s:?} needs at least two candidates")));
        }
        Ranking::from_order(&order).map_err(|_| {
            parse_error(format!(
                "ranking {s:?} must list each of c1..c{} exactly once",
                order.len()
            ))
        })
    }
}

impl Serialize for Ranking {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ranking {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// An ordered partition of the candidates into tiers, best tier first.
///
/// Stored canonically as the tier index of every candidate, so structural
/// equality is equality of weak orders.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeakOrder {
    tier_of: Vec<u8>,
}

impl WeakOrder {
    /// Builds a weak order from tiers listed best first.
    pub fn from_tiers(tiers: &[Vec<Candidate>]) -> Result<Self> {
        let k: usize = tiers.iter().map(Vec::len).sum();
        let mut tier_of = vec![u8::MAX; k];
        for (t, tier) in tiers.iter().enumerate() {
            if tier.is_empty() {
                return Err(precondition("weak order tiers must be nonempty"));
            }
            for c in tier {
                if c.index() >= k || tier_of[c.index()] != u8::MAX {
                    return Err(precondition(format!(
                        "weak order tiers must partition c1..c{k}"
                    )));
                }
                tier_of[c.index()] = t as u8;
            }
        }
        Ok(WeakOrder { tier_of })
    }

    /// The weak order where all `k` candidates tie.
    pub fn all_tied(k: usize) -> Self {
        WeakOrder { tier_of: vec![0; k] }
    }

    pub fn k(&self) -> usize {
        self.tier_of.len()
    }

    pub fn tier(&self, c: Candidate) -> usize {
        self.tier_of[c.index()] as usize
    }

    pub fn tiers(&self) -> Vec<Vec<Candidate>> {
        let count = self.tier_of.iter().map(|&t| t as usize + 1).max().unwrap_or(0);
        let mut tiers = vec![Vec::new(); count];
        for (c, &t) in self.tier_of.iter().enumerate() {
            tiers[t as usize].push(Candidate::new(c));
        }
        tiers
    }

    /// `π_{i,j}(≻)`.
    pub fn rel(&self, i: Candidate, j: Candidate) -> Result<RelOutcome> {
        if i == j {
            return Err(precondition(format!(
                "pairwise outcome needs distinct candidates, got {i} twice"
            )));
        }
        Ok(self.rel_unchecked(i, j))
    }

    pub(crate) fn rel_unchecked(&self, i: Candidate, j: Candidate) -> RelOutcome {
        match self.tier(i).cmp(&self.tier(j)) {
            Ordering::Less => RelOutcome::W,
            Ordering::Equal => RelOutcome::T,
            Ordering::Greater => RelOutcome::L,
        }
    }

    /// Renames every candidate `c` to `perm(c)`, keeping its tier.
    pub fn relabel(&self, perm: &Permutation) -> WeakOrder {
        let mut tier_of = vec![0; self.k()];
        for (c, &t) in self.tier_of.iter().enumerate() {
            tier_of[perm.apply(Candidate::new(c)).index()] = t;
        }
        WeakOrder { tier_of }
    }
}

impl fmt::Display for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self
            .tiers()
            .iter()
            .map(|tier| tier.iter().join("="))
            .join(">");
        f.write_str(&text)
    }
}

impl fmt::Debug for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeakOrder({self})")
    }
}

impl FromStr for WeakOrder {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let tiers: Vec<Vec<Candidate>> = s
            .split('>')
            .map(|tier| tier.split('=').map(Candidate::from_str).try_collect())
            .try_collect()?;
        WeakOrder::from_tiers(&tiers).map_err(|e| parse_error(format!("weak order {s:?}: {e}")))
    }
}

impl Serialize for WeakOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WeakOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A permutation `ρ` of the candidates, stored as `image[c] = ρ(c)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn new(image: Vec<Candidate>) -> Result<Self> {
        let ranks: Vec<u8> = image.iter().map(|c| c.index() as u8).collect();
        Ranking::from_ranks(ranks.clone())
            .map_err(|_| precondition("permutation must be a bijection"))?;
        Ok(Permutation { image: ranks })
    }

    pub fn identity(k: usize) -> Self {
        Permutation {
            image: (0..k as u8).collect(),
        }
    }

    /// `c_t ↦ c_{t+by}`.
    pub fn cyclic_shift(k: usize, by: isize) -> Self {
        Permutation {
            image: Candidate::all(k).map(|c| c.shift(by, k).0).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, c: Candidate) -> Candidate {
        Candidate(self.image[c.index()])
    }

    /// All `k!` permutations in lexicographic order of their images.
    pub fn all(k: usize) -> Vec<Permutation> {
        (0..k as u8)
            .permutations(k)
            .map(|image| Permutation { image })
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = Candidate::all(self.k())
            .map(|c| format!("{c}->{}", self.apply(c)))
            .join(",");
        f.write_str(&text)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `π_{i,j}(r)`; errors when `i == j`.
pub fn gap(r: &Ranking, i: Candidate, j: Candidate) -> Result<Gap> {
    r.gap(i, j)
}

/// `π_{i,j}(w)`; errors when `i == j`.
pub fn rel_of_order(w: &WeakOrder, i: Candidate, j: Candidate) -> Result<RelOutcome> {
    w.rel(i, j)
}

/// Whether `(c_j, c_i)` is promoted by `(r2, r1)`: moving from `r1` to `r2`
/// only ever improves `c_j` against `c_i`, everyone above `c_i` stays above
/// it, everyone below `c_j` stays below it, and the remaining candidates keep
/// their mutual order.
pub fn promotes(r2: &Ranking, r1: &Ranking, j: Candidate, i: Candidate) -> bool {
    if i == j || r1.k() != r2.k() {
        return false;
    }
    let above = |r: &Ranking, a: Candidate, b: Candidate| r.rank(a) > r.rank(b);
    let implies = |a: bool, b: bool| !a || b;

    if !implies(above(r1, j, i), above(r2, j, i)) {
        return false;
    }
    let others: Vec<Candidate> = Candidate::all(r1.k()).filter(|&c| c != i && c != j).collect();
    for &third in &others {
        if !implies(above(r1, third, i), above(r2, third, i))
            || !implies(above(r1, j, third), above(r2, j, third))
        {
            return false;
        }
        for &fourth in &others {
            if third != fourth && above(r1, third, fourth) != above(r2, third, fourth) {
                return false;
            }
        }
    }
    true
}

/// All `k!` rankings, ordered lexicographically by their best-first listing.
pub fn all_rankings(k: usize) -> Result<Vec<Ranking>> {
    if !(2..=MAX_RANKING_K).contains(&k) {
        return Err(precondition(format!(
            "ranking enumeration needs 2 <= k <= {MAX_RANKING_K}, got {k}"
        )));
    }
    Ok(Candidate::all(k)
        .permutations(k)
        .map(|order| Ranking::from_order(&order).expect("permutation is a bijection"))
        .collect())
}

/// All ordered set partitions of `k` candidates (the ordered Bell number many).
pub fn all_weak_orders(k: usize) -> Result<Vec<WeakOrder>> {
    if !(1..=MAX_WEAK_ORDER_K).contains(&k) {
        return Err(precondition(format!(
            "weak order enumeration needs 1 <= k <= {MAX_WEAK_ORDER_K}, got {k}"
        )));
    }
    let mut out = Vec::new();
    let mut labels = vec![0u8; k];
    loop {
        let used = labels.iter().map(|&t| t as usize + 1).max().unwrap_or(0);
        let mut present = vec![false; used];
        for &t in &labels {
            present[t as usize] = true;
        }
        if present.iter().all(|&p| p) {
            out.push(WeakOrder {
                tier_of: labels.clone(),
            });
        }
        // Odometer over {0..k-1}^k.
        let mut pos = k;
        loop {
            if pos == 0 {
                out.sort();
                return Ok(out);
            }
            pos -= 1;
            if (labels[pos] as usize) + 1 < k {
                labels[pos] += 1;
                labels[pos + 1..].iter_mut().for_each(|t| *t = 0);
                break;
            }
        }
    }
}

//! Concrete social welfare functions and the pieces they are built from.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{incompatible, parse_error, precondition, AssemblyError, Error, Result};
use crate::order::{is_consistent, Candidate, Gap, Permutation, Ranking, RelOutcome, WeakOrder};
use crate::profile::{tau, AnonymousProfile, FiniteElection, RelativeProfile};
use crate::rational::{self, int, Rational};

/// Pairwise outcomes keyed by ordered candidate pair.
pub type PairOutcomes = BTreeMap<(Candidate, Candidate), RelOutcome>;

/// `φ`: the sign of `x` as W, T or L.
pub fn phi(x: &Rational) -> RelOutcome {
    if x.is_positive() {
        RelOutcome::W
    } else if x.is_negative() {
        RelOutcome::L
    } else {
        RelOutcome::T
    }
}

/// A social welfare function on finite elections.
pub trait Swf {
    fn apply(&self, e: &FiniteElection) -> Result<WeakOrder>;
}

impl<F> Swf for F
where
    F: Fn(&FiniteElection) -> Result<WeakOrder>,
{
    fn apply(&self, e: &FiniteElection) -> Result<WeakOrder> {
        self(e)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum Rule {
    /// Borda with the same weight `w` for every voter.
    UnweightedBorda { w: Rational },
    /// Borda with one weight per voter; only defined on elections of that size.
    WeightedBordaFinite { weights: Vec<Rational> },
    /// Maskin's rule on three candidates with parameter `X ≥ 2`.
    Maskin { x: Rational },
    /// Every candidate always ties.
    Tie,
    /// Condorcet-cycle rule given by `g` on `{0..n}`, `n = g.len() - 1`.
    CondorcetG { g: Vec<RelOutcome> },
}

impl Rule {
    pub fn borda(w: Rational) -> Self {
        Rule::UnweightedBorda { w }
    }

    pub fn weighted_borda(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(precondition("weighted Borda needs at least one voter weight"));
        }
        Ok(Rule::WeightedBordaFinite { weights })
    }

    /// Maskin's rule; rejects `X < 2`.
    pub fn maskin(x: Rational) -> Result<Self> {
        if x < int(2) {
            return Err(precondition(format!("Maskin's rule needs X >= 2, got {x}")));
        }
        Ok(Rule::Maskin { x })
    }

    pub fn maskin_default() -> Self {
        Rule::Maskin { x: int(2) }
    }

    pub fn condorcet_g(g: Vec<RelOutcome>) -> Result<Self> {
        if g.len() < 2 {
            return Err(precondition("g must be defined on {0..n} with n >= 1"));
        }
        Ok(Rule::CondorcetG { g })
    }

    /// Pairwise rule `f'` on a relative profile. It is the same for every
    /// pair because each concrete rule is neutral.
    pub fn relative(&self, a: &RelativeProfile) -> Result<RelOutcome> {
        match self {
            Rule::UnweightedBorda { w } => Ok(phi(&(w * borda_diff_unweighted(a)))),
            Rule::WeightedBordaFinite { .. } => Err(incompatible(
                "weighted Borda with unequal weights has no relative form",
            )),
            Rule::Maskin { x } => Ok(phi(&maskin_g(&a.normalize()?, x)?)),
            Rule::Tie => Ok(RelOutcome::T),
            Rule::CondorcetG { g } => condorcet_relative(g, a),
        }
    }

    /// Exact pairwise differential on the normalized relative profile, for
    /// rules given by a score.
    pub fn relative_score(&self, a: &RelativeProfile) -> Result<Option<Rational>> {
        match self {
            Rule::UnweightedBorda { w } => Ok(Some(w * borda_diff_unweighted(&a.normalize()?))),
            Rule::Maskin { x } => Ok(Some(maskin_g(&a.normalize()?, x)?)),
            Rule::Tie => Ok(Some(Rational::zero())),
            Rule::WeightedBordaFinite { .. } | Rule::CondorcetG { .. } => Ok(None),
        }
    }

    /// `F'(ε)` on an anonymous profile.
    pub fn evaluate(&self, p: &AnonymousProfile) -> Result<WeakOrder> {
        evaluate(self, p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RuleJson =
            serde_json::from_str(text).map_err(|e| parse_error(format!("rule JSON: {e}")))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RuleJson::from(self)).expect("rule serializes")
    }
}

impl Swf for Rule {
    fn apply(&self, e: &FiniteElection) -> Result<WeakOrder> {
        match self {
            Rule::WeightedBordaFinite { weights } => {
                let scores = Candidate::all(e.k())
                    .map(|c| borda_score(weights, e, c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(weak_order_from_scores(&scores))
            }
            _ => evaluate(self, &tau(e)),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::UnweightedBorda { w } => write!(f, "borda(w={w})"),
            Rule::WeightedBordaFinite { weights } => {
                let ws: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                write!(f, "weighted-borda({})", ws.join(","))
            }
            Rule::Maskin { x } => write!(f, "maskin(X={x})"),
            Rule::Tie => write!(f, "tie"),
            Rule::CondorcetG { g } => {
                let gs: String = g.iter().map(|o| o.symbol()).collect();
                write!(f, "cc-g(n={},g={gs})", g.len() - 1)
            }
        }
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum RuleJson {
    Maskin {
        #[serde(rename = "X", default = "default_x")]
        x: String,
    },
    Borda {
        w: String,
    },
    WeightedBorda {
        weights: Vec<String>,
    },
    Tie,
    CcG {
        n: usize,
        g: Vec<RelOutcome>,
    },
}

fn default_x() -> String {
    "2".to_string()
}

impl TryFrom<RuleJson> for Rule {
    type Error = Error;

    fn try_from(raw: RuleJson) -> Result<Self> {
        let as_parse = |e: Error| match e {
            Error::Precondition(msg) => Error::Parse(msg),
            other => other,
        };
        match raw {
            RuleJson::Maskin { x } => Rule::maskin(rational::parse_rational(&x)?).map_err(as_parse),
            RuleJson::Borda { w } => Ok(Rule::borda(rational::parse_rational(&w)?)),
            RuleJson::WeightedBorda { weights } => {
                let ws = weights
                    .iter()
                    .map(|w| rational::parse_rational(w))
                    .collect::<Result<Vec<_>>>()?;
                Rule::weighted_borda(ws).map_err(as_parse)
            }
            RuleJson::Tie => Ok(Rule::Tie),
            RuleJson::CcG { n, g } => {
                if g.len() != n + 1 {
                    return Err(parse_error(format!(
                        "cc-g with n = {n} needs {} outcomes, got {}",
                        n + 1,
                        g.len()
                    )));
                }
                Rule::condorcet_g(g).map_err(as_parse)
            }
        }
    }
}

impl From<&Rule> for RuleJson {
    fn from(rule: &Rule) -> Self {
        match rule {
            Rule::UnweightedBorda { w } => RuleJson::Borda { w: w.to_string() },
            Rule::WeightedBordaFinite { weights } => RuleJson::WeightedBorda {
                weights: weights.iter().map(|w| w.to_string()).collect(),
            },
            Rule::Maskin { x } => RuleJson::Maskin { x: x.to_string() },
            Rule::Tie => RuleJson::Tie,
            Rule::CondorcetG { g } => RuleJson::CcG {
                n: g.len() - 1,
                g: g.clone(),
            },
        }
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RuleJson::from(self).serialize(s)
    }
}

/// `b_w(c_i, e) = Σ_v e(v)(c_i) w_v`.
pub fn borda_score(weights: &[Rational], e: &FiniteElection, i: Candidate) -> Result<Rational> {
    if weights.len() != e.n() {
        return Err(incompatible(format!(
            "{} voter weights for an election of {} voters",
            weights.len(),
            e.n()
        )));
    }
    if i.index() >= e.k() {
        return Err(precondition(format!("{i} is not a candidate of the election")));
    }
    Ok(e
        .votes()
        .iter()
        .zip(weights)
        .map(|(r, w)| w * int(r.rank(i) as i64))
        .sum())
}

/// `b(α) = Σ_t t α_t`, the unweighted Borda differential of a relative profile.
pub fn borda_diff_unweighted(a: &RelativeProfile) -> Rational {
    a.weights().map(|(g, w)| w * int(g.value() as i64)).sum()
}

fn require_normalized3(total: Rational, k: usize, what: &str) -> Result<()> {
    if k != 3 {
        return Err(incompatible(format!("{what} is defined for three candidates, got {k}")));
    }
    if total != rational::one() {
        return Err(precondition(format!("{what} needs a normalized profile, total is {total}")));
    }
    Ok(())
}

/// Maskin's relative score
/// `g(α) = (X+α₁+α₋₂)(α₁−2α₋₂) + (X+α₂+α₋₁)(2α₂−α₋₁)` on a normalized profile.
pub fn maskin_g(a: &RelativeProfile, x: &Rational) -> Result<Rational> {
    require_normalized3(a.total(), a.k(), "Maskin's g")?;
    let [a2, a1, am1, am2] = a.coords3()?;
    let two = int(2);
    Ok((x + &a1 + &am2) * (&a1 - &two * &am2) + (x + &a2 + &am1) * (&two * &a2 - &am1))
}

/// Maskin's full score
/// `G'(c_i, ε) = X Σ_r r(c_i) ε_r + Σ_r Σ_{s ∈ C₃∘r} r(c_i) ε_r ε_s`
/// on a normalized profile.
#[allow(non_snake_case)]
pub fn maskin_G(p: &AnonymousProfile, i: Candidate, x: &Rational) -> Result<Rational> {
    require_normalized3(p.total(), p.k(), "Maskin's G")?;
    if i.index() >= 3 {
        return Err(precondition(format!("{i} is not one of c1, c2, c3")));
    }
    let shifts: Vec<Permutation> = (0..3).map(|t| Permutation::cyclic_shift(3, t)).collect();
    let mut linear = Rational::zero();
    let mut quadratic = Rational::zero();
    for (r, er) in p.support() {
        let rank = int(r.rank(i) as i64);
        linear += &rank * er;
        let orbit_weight: Rational = shifts.iter().map(|s| p.weight(&r.relabel(s))).sum();
        quadratic += rank * er * orbit_weight;
    }
    Ok(x * linear + quadratic)
}

/// Tiers by descending score, ties for equal scores.
pub fn weak_order_from_scores(scores: &[Rational]) -> WeakOrder {
    let mut distinct: Vec<&Rational> = scores.iter().collect();
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.dedup();
    let tiers: Vec<Vec<Candidate>> = distinct
        .iter()
        .map(|s| {
            scores
                .iter()
                .enumerate()
                .filter(|(_, x)| x == s)
                .map(|(c, _)| Candidate::new(c))
                .collect()
        })
        .collect();
    WeakOrder::from_tiers(&tiers).expect("score tiers partition the candidates")
}

/// Builds the weak order whose pairwise projections are `rel`.
///
/// Tied candidates are merged into classes, the classes are ordered by how
/// many other classes they beat, and every triple must be consistent.
pub fn assemble_weak_order(rel: &PairOutcomes, k: usize) -> Result<WeakOrder, AssemblyError> {
    let mut table = vec![vec![RelOutcome::T; k]; k];
    for (i, j) in Candidate::ordered_pairs(k) {
        table[i.index()][j.index()] = *rel.get(&(i, j)).ok_or(AssemblyError::MissingPair(i, j))?;
    }
    let at = |i: usize, j: usize| table[i][j];
    for i in 0..k {
        for j in i + 1..k {
            if at(j, i) != -at(i, j) {
                return Err(AssemblyError::Antisymmetry {
                    i: Candidate::new(i),
                    j: Candidate::new(j),
                    forward: at(i, j),
                    backward: at(j, i),
                });
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let triple = [at(i, j), at(j, l), at(l, i)];
                if !is_consistent(triple) {
                    return Err(AssemblyError::InconsistentTriple(
                        Candidate::new(i),
                        Candidate::new(j),
                        Candidate::new(l),
                        triple,
                    ));
                }
            }
        }
    }

    // With consistent triples T is transitive, so the first earlier tied
    // candidate is the smallest member of the tie class.
    let class: Vec<usize> = (0..k)
        .map(|i| (0..i).find(|&j| at(i, j) == RelOutcome::T).unwrap_or(i))
        .collect();
    let mut reps: Vec<usize> = (0..k).filter(|&i| class[i] == i).collect();
    let wins = |a: usize| reps_beaten(&table, &class, a);
    reps.sort_by_key(|&a| std::cmp::Reverse(wins(a)));
    let tiers: Vec<Vec<Candidate>> = reps
        .iter()
        .map(|&a| (0..k).filter(|&c| class[c] == a).map(Candidate::new).collect())
        .collect();
    let order = WeakOrder::from_tiers(&tiers).expect("tie classes partition the candidates");
    debug_assert!(Candidate::ordered_pairs(k).all(|(i, j)| order.rel_unchecked(i, j) == at(i.index(), j.index())));
    Ok(order)
}

fn reps_beaten(table: &[Vec<RelOutcome>], class: &[usize], a: usize) -> usize {
    (0..class.len())
        .filter(|&b| class[b] == b && b != a && table[a][b] == RelOutcome::W)
        .count()
}

/// Assembles `F(ε)` from the pairwise outcomes `f'(π_{i,j}(ε))`.
pub fn assemble_from_relative(
    p: &AnonymousProfile,
    f: impl Fn(&RelativeProfile) -> Result<RelOutcome>,
) -> Result<WeakOrder> {
    let mut rel = PairOutcomes::new();
    for (i, j) in Candidate::ordered_pairs(p.k()) {
        rel.insert((i, j), f(&p.project(i, j)?)?);
    }
    Ok(assemble_weak_order(&rel, p.k())?)
}

/// `F'(ε)` for every rule with a profile form.
pub fn evaluate(rule: &Rule, p: &AnonymousProfile) -> Result<WeakOrder> {
    match rule {
        Rule::UnweightedBorda { w } => {
            let scores: Vec<Rational> = Candidate::all(p.k())
                .map(|c| {
                    let total: Rational = p.support().map(|(r, e)| e * int(r.rank(c) as i64)).sum();
                    w * total
                })
                .collect();
            Ok(weak_order_from_scores(&scores))
        }
        Rule::WeightedBordaFinite { .. } => Err(incompatible(
            "weighted Borda depends on voter identities, not on an anonymous profile",
        )),
        Rule::Maskin { .. } => {
            if p.k() != 3 {
                return Err(incompatible(format!("Maskin's rule needs 3 candidates, got {}", p.k())));
            }
            let normalized = p.normalize();
            assemble_from_relative(&normalized, |a| rule.relative(a))
        }
        Rule::Tie => Ok(WeakOrder::all_tied(p.k())),
        Rule::CondorcetG { g } => {
            check_condorcet_profile(p, g.len() - 1)?;
            assemble_from_relative(p, |a| condorcet_relative(g, a))
        }
    }
}

fn check_condorcet_profile(p: &AnonymousProfile, n: usize) -> Result<()> {
    let cc = crate::ballot::Ballot::condorcet();
    if p.k() != 3 {
        return Err(incompatible("a Condorcet-cycle rule needs 3 candidates"));
    }
    if let Some((r, _)) = p.support().find(|(r, _)| !cc.contains(r)) {
        return Err(incompatible(format!("ranking {r} is not a Condorcet-cycle vote")));
    }
    if !p.is_integral() || p.total() != int(n as i64) {
        return Err(incompatible(format!(
            "a Condorcet-cycle rule on {n} voters needs integer weights summing to {n}, got total {}",
            p.total()
        )));
    }
    Ok(())
}

/// `f'(α) = g(α₋₂)` on `A'_{i,i+1}` and `f'(α) = −g(α₂)` on `A'_{i+1,i}`.
fn condorcet_relative(g: &[RelOutcome], a: &RelativeProfile) -> Result<RelOutcome> {
    let n = g.len() - 1;
    if a.k() != 3 || a.total() != int(n as i64) {
        return Err(incompatible(format!(
            "a Condorcet-cycle rule on {n} voters needs a three-candidate relative profile of total {n}"
        )));
    }
    let index = |w: Rational| -> Result<usize> {
        if !w.is_integer() {
            return Err(incompatible(format!("weight {w} is not a voter count")));
        }
        Ok(w.to_integer().try_into().expect("count bounded by n"))
    };
    let support: Vec<i32> = a.support().map(Gap::value).collect();
    if support.iter().all(|t| *t == 1 || *t == -2) {
        Ok(g[index(a.weight(Gap::new(-2)))?])
    } else if support.iter().all(|t| *t == -1 || *t == 2) {
        Ok(-g[index(a.weight(Gap::new(2)))?])
    } else {
        Err(incompatible(format!(
            "relative profile with gaps {support:?} does not come from Condorcet-cycle votes"
        )))
    }
}

/// A decisive Borda verdict contradicted by the rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BordaContradiction {
    pub profile_index: usize,
    pub i: Candidate,
    pub j: Candidate,
    pub borda: RelOutcome,
    pub rule: RelOutcome,
}

/// First profile and pair where `F` disagrees with a decisive `B_w` verdict.
pub fn weakly_borda_witness(
    rule: &Rule,
    w: &Rational,
    profiles: &[AnonymousProfile],
) -> Result<Option<BordaContradiction>> {
    if w.is_zero() {
        return Err(precondition("weakly Borda is defined against a nonzero weight"));
    }
    let borda = Rule::borda(w.clone());
    for (idx, p) in profiles.iter().enumerate() {
        let reference = borda.evaluate(p)?;
        let result = rule.evaluate(p)?;
        for (i, j) in Candidate::ordered_pairs(p.k()) {
            let b = reference.rel_unchecked(i, j);
            let f = result.rel_unchecked(i, j);
            if b != RelOutcome::T && f != b {
                return Ok(Some(BordaContradiction {
                    profile_index: idx,
                    i,
                    j,
                    borda: b,
                    rule: f,
                }));
            }
        }
    }
    Ok(None)
}

/// Integer relative profile on which Maskin's rule and positive Borda take
/// opposite decisive verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisagreementWitness {
    /// `(α₂, α₁, α₋₁, α₋₂)` with total `n`.
    pub alpha: [u64; 4],
    pub n: u64,
    /// `g(α/n)`.
    pub maskin: Rational,
    /// `b(α/n)`.
    pub borda: Rational,
}

impl DisagreementWitness {
    pub fn relative_profile(&self) -> RelativeProfile {
        RelativeProfile::from_coords3(self.alpha.map(|a| int(a as i64))).expect("nonnegative counts")
    }

    /// A profile over the six rankings whose `(c1, c2)` projection is `α`.
    pub fn realize(&self) -> AnonymousProfile {
        realize_pair_profile(&self.relative_profile()).expect("witness has positive total")
    }

    /// Recomputes both scores from `α` and checks they disagree in sign.
    pub fn validate(&self, x: &Rational) -> Result<bool> {
        let a = self.relative_profile().normalize()?;
        let g = maskin_g(&a, x)?;
        let b = borda_diff_unweighted(&a);
        Ok(g == self.maskin
            && b == self.borda
            && phi(&g) != RelOutcome::T
            && phi(&b) != RelOutcome::T
            && phi(&g) != phi(&b))
    }
}

/// Realizes a three-candidate relative profile as the `(c1, c2)` projection
/// of a profile: gap 2 by `c1>c3>c2`, 1 by `c1>c2>c3`, −1 by `c2>c1>c3`,
/// −2 by `c2>c3>c1`.
pub fn realize_pair_profile(a: &RelativeProfile) -> Result<AnonymousProfile> {
    let [a2, a1, am1, am2] = a.coords3()?;
    let r = |s: &str| s.parse::<Ranking>().expect("literal ranking");
    AnonymousProfile::new(
        3,
        [
            (r("c1>c3>c2"), a2),
            (r("c1>c2>c3"), a1),
            (r("c2>c1>c3"), am1),
            (r("c2>c3>c1"), am2),
        ],
    )
}

/// Lexicographically first integer `α` (α₂ outermost) with total `n` where
/// `g(α/n)` and `b(α)` are both nonzero and of opposite sign.
pub fn disagreement_search(n: u64, x: &Rational) -> Result<Option<DisagreementWitness>> {
    if n == 0 {
        return Err(precondition("disagreement search needs n >= 1"));
    }
    let nn = int(n as i64);
    for a2 in 0..=n {
        for a1 in 0..=n - a2 {
            for am1 in 0..=n - a2 - a1 {
                let am2 = n - a2 - a1 - am1;
                let b = int(2 * a2 as i64 + a1 as i64 - am1 as i64 - 2 * am2 as i64);
                if b.is_zero() {
                    continue;
                }
                let a = RelativeProfile::from_coords3([a2, a1, am1, am2].map(|v| int(v as i64) / &nn))?;
                let g = maskin_g(&a, x)?;
                if !g.is_zero() && phi(&g) != phi(&b) {
                    return Ok(Some(DisagreementWitness {
                        alpha: [a2, a1, am1, am2],
                        n,
                        maskin: g,
                        borda: b / &nn,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{all_weak_orders, rel_of_order};
    use crate::rational::ratio;
    use proptest::prelude::*;
    use RelOutcome::*;

    fn c(n: usize) -> Candidate {
        Candidate::new(n - 1)
    }

    fn r(s: &str) -> Ranking {
        s.parse().unwrap()
    }

    fn election(votes: &[&str]) -> FiniteElection {
        FiniteElection::new(votes.iter().map(|s| r(s)).collect()).unwrap()
    }

    fn coords(a: [i64; 4], denom: i64) -> RelativeProfile {
        RelativeProfile::from_coords3(a.map(|x| ratio(x, denom))).unwrap()
    }

    fn witness31() -> AnonymousProfile {
        AnonymousProfile::from_json(
            r#"{"k": 3, "weights": {"c1>c2>c3": "19/31", "c2>c1>c3": "4/31", "c2>c3>c1": "8/31"}}"#,
        )
        .unwrap()
    }

    fn profile(pairs: &[(&str, i64)]) -> AnonymousProfile {
        AnonymousProfile::new(3, pairs.iter().map(|(s, w)| (r(s), int(*w)))).unwrap()
    }

    #[test]
    fn phi_signs() {
        assert_eq!(phi(&ratio(3, 961)), W);
        assert_eq!(phi(&int(0)), T);
        assert_eq!(phi(&ratio(-1, 31)), L);
    }

    #[test]
    fn borda_score_examples() {
        let e = election(&["c1>c2>c3", "c1>c2>c3"]);
        assert_eq!(borda_score(&[int(1), int(1)], &e, c(1)).unwrap(), int(4));
        assert_eq!(borda_score(&[int(0), int(0)], &e, c(2)).unwrap(), int(0));
        let e2 = election(&["c1>c2>c3", "c2>c3>c1"]);
        assert_eq!(borda_score(&[int(1), int(2)], &e2, c(2)).unwrap(), int(5));
        assert!(borda_score(&[int(1)], &e2, c(2)).is_err());
    }

    #[test]
    fn borda_diff_examples() {
        assert_eq!(borda_diff_unweighted(&coords([0, 19, 4, 8], 1)), int(-1));
        assert_eq!(borda_diff_unweighted(&coords([1, 1, 1, 1], 4)), int(0));
        assert_eq!(borda_diff_unweighted(&coords([1, 0, 0, 0], 1)), int(2));
    }

    #[test]
    fn maskin_g_examples() {
        let two = int(2);
        assert_eq!(maskin_g(&coords([0, 19, 4, 8], 31), &two).unwrap(), ratio(3, 961));
        assert_eq!(maskin_g(&coords([1, 1, 1, 1], 4), &two).unwrap(), int(0));
        assert_eq!(maskin_g(&coords([0, 1, 0, 0], 1), &two).unwrap(), int(3));
        assert_eq!(maskin_g(&coords([0, 0, 1, 0], 1), &two).unwrap(), int(-3));
        assert_eq!(maskin_g(&coords([0, 0, 0, 1], 1), &two).unwrap(), int(-6));
        assert!(matches!(
            maskin_g(&coords([0, 19, 4, 8], 1), &two),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn maskin_full_score_examples() {
        let two = int(2);
        let unanimous = profile(&[("c1>c2>c3", 1)]);
        let g1 = maskin_G(&unanimous, c(1), &two).unwrap();
        let g2 = maskin_G(&unanimous, c(2), &two).unwrap();
        assert_eq!(g1 - g2, int(3));

        let orbit = profile(&[("c1>c2>c3", 1), ("c2>c3>c1", 1), ("c3>c1>c2", 1)]).normalize();
        let scores: Vec<Rational> = (1..=3).map(|i| maskin_G(&orbit, c(i), &two).unwrap()).collect();
        assert!(scores.iter().all(|s| *s == scores[0]));
        assert!(maskin_G(&profile(&[("c1>c2>c3", 2)]), c(1), &two).is_err());
    }

    #[test]
    fn maskin_constructor_rejects_small_x() {
        assert!(Rule::maskin(ratio(3, 2)).is_err());
        assert!(Rule::maskin(int(2)).is_ok());
        assert!(Rule::maskin(ratio(7, 2)).is_ok());
    }

    #[test]
    fn evaluate_examples() {
        let unanimous = profile(&[("c1>c2>c3", 1)]);
        assert_eq!(
            Rule::borda(int(1)).evaluate(&unanimous).unwrap().to_string(),
            "c1>c2>c3"
        );
        assert_eq!(
            Rule::borda(int(-1)).evaluate(&unanimous).unwrap().to_string(),
            "c3>c2>c1"
        );
        assert_eq!(Rule::Tie.evaluate(&witness31()).unwrap(), WeakOrder::all_tied(3));
        let orbit = profile(&[("c1>c2>c3", 1), ("c2>c3>c1", 1), ("c3>c1>c2", 1)]).normalize();
        assert_eq!(
            Rule::maskin_default().evaluate(&orbit).unwrap().to_string(),
            "c1=c2=c3"
        );
    }

    #[test]
    fn witness31_verdicts() {
        let p = witness31();
        let a = p.project(c(1), c(2)).unwrap();
        let maskin = Rule::maskin_default();
        let borda = Rule::borda(int(1));
        assert_eq!(maskin.relative_score(&a).unwrap(), Some(ratio(3, 961)));
        assert_eq!(borda.relative_score(&a).unwrap(), Some(ratio(-1, 31)));
        assert_eq!(maskin.evaluate(&p).unwrap().rel(c(1), c(2)).unwrap(), W);
        assert_eq!(borda.evaluate(&p).unwrap().rel(c(1), c(2)).unwrap(), L);
    }

    #[test]
    fn maskin_on_elections_matches_profile() {
        let e = election(&["c1>c2>c3", "c2>c3>c1", "c2>c3>c1"]);
        let rule = Rule::maskin_default();
        assert_eq!(rule.apply(&e).unwrap(), rule.evaluate(&tau(&e).normalize()).unwrap());
    }

    #[test]
    fn weighted_borda() {
        let rule = Rule::weighted_borda(vec![int(1), int(2)]).unwrap();
        let e = election(&["c1>c2>c3", "c2>c3>c1"]);
        // Scores: c1 = 2, c2 = 1 + 4 = 5, c3 = 0 + 2 = 2.
        assert_eq!(rule.apply(&e).unwrap().to_string(), "c2>c1=c3");
        assert!(rule.apply(&election(&["c1>c2>c3"])).is_err());
        assert!(matches!(rule.evaluate(&tau(&e)), Err(Error::Incompatible(_))));
    }

    #[test]
    fn assembler_examples() {
        let k = 3;
        let mut rel = PairOutcomes::new();
        for (i, j) in Candidate::ordered_pairs(k) {
            rel.insert((i, j), T);
        }
        assert_eq!(assemble_weak_order(&rel, k).unwrap(), WeakOrder::all_tied(3));

        let set = |rel: &mut PairOutcomes, i: usize, j: usize, o: RelOutcome| {
            rel.insert((c(i), c(j)), o);
            rel.insert((c(j), c(i)), -o);
        };
        set(&mut rel, 1, 2, W);
        set(&mut rel, 2, 3, W);
        set(&mut rel, 3, 1, L);
        assert_eq!(assemble_weak_order(&rel, k).unwrap().to_string(), "c1>c2>c3");

        set(&mut rel, 3, 1, W);
        assert!(matches!(
            assemble_weak_order(&rel, k),
            Err(AssemblyError::InconsistentTriple(..))
        ));

        rel.insert((c(1), c(2)), W);
        rel.insert((c(2), c(1)), W);
        assert!(matches!(
            assemble_weak_order(&rel, k),
            Err(AssemblyError::Antisymmetry { .. })
        ));
        rel.remove(&(c(2), c(1)));
        assert_eq!(
            assemble_weak_order(&rel, k),
            Err(AssemblyError::MissingPair(c(2), c(1)))
        );
    }

    #[test]
    fn assembler_succeeds_exactly_on_weak_orders() {
        for k in 2..=4 {
            let pairs: Vec<(Candidate, Candidate)> = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (Candidate::new(i), Candidate::new(j))))
                .collect();
            let mut successes = Vec::new();
            let total = 3usize.pow(pairs.len() as u32);
            for code in 0..total {
                let mut rel = PairOutcomes::new();
                let mut rest = code;
                for &(i, j) in &pairs {
                    let o = RelOutcome::ALL[rest % 3];
                    rest /= 3;
                    rel.insert((i, j), o);
                    rel.insert((j, i), -o);
                }
                if let Ok(w) = assemble_weak_order(&rel, k) {
                    for (&(i, j), &o) in &rel {
                        assert_eq!(rel_of_order(&w, i, j).unwrap(), o);
                    }
                    successes.push(w);
                }
            }
            successes.sort();
            assert_eq!(successes, all_weak_orders(k).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn weakly_borda_examples() {
        let profiles = vec![witness31(), profile(&[("c1>c2>c3", 1)])];
        assert_eq!(
            weakly_borda_witness(&Rule::borda(int(1)), &int(1), &profiles).unwrap(),
            None
        );
        let hit = weakly_borda_witness(&Rule::maskin_default(), &int(1), &profiles)
            .unwrap()
            .unwrap();
        assert_eq!((hit.profile_index, hit.i, hit.j), (0, c(1), c(2)));
        assert_eq!((hit.borda, hit.rule), (L, W));

        let unanimous = vec![profile(&[("c1>c2>c3", 1)])];
        assert!(weakly_borda_witness(&Rule::maskin_default(), &int(-1), &unanimous)
            .unwrap()
            .is_some());
        assert!(weakly_borda_witness(&Rule::Tie, &int(0), &unanimous).is_err());
    }

    #[test]
    fn disagreement_examples() {
        let two = int(2);
        assert_eq!(disagreement_search(1, &two).unwrap(), None);
        let w = DisagreementWitness {
            alpha: [0, 19, 4, 8],
            n: 31,
            maskin: ratio(3, 961),
            borda: ratio(-1, 31),
        };
        assert!(w.validate(&two).unwrap());
        assert_eq!(w.realize().normalize(), witness31());

        let found = disagreement_search(31, &two).unwrap().unwrap();
        assert_eq!(found.alpha, [0, 17, 10, 4]);
        assert!(found.validate(&two).unwrap());
        assert_eq!(disagreement_search(13, &two).unwrap().unwrap().alpha, [3, 5, 0, 5]);
        for n in [2, 3, 5, 10, 12] {
            assert_eq!(disagreement_search(n, &two).unwrap(), None, "n = {n}");
        }
    }

    #[test]
    fn rule_json() {
        for (text, rule) in [
            (r#"{"type":"maskin","X":"2"}"#, Rule::maskin_default()),
            (r#"{"type":"maskin"}"#, Rule::maskin_default()),
            (r#"{"type":"borda","w":"1"}"#, Rule::borda(int(1))),
            (r#"{"type":"borda","w":"-1/2"}"#, Rule::borda(ratio(-1, 2))),
            (r#"{"type":"tie"}"#, Rule::Tie),
            (
                r#"{"type":"cc-g","n":5,"g":["W","W","T","L","L","L"]}"#,
                Rule::condorcet_g(vec![W, W, T, L, L, L]).unwrap(),
            ),
        ] {
            let parsed = Rule::from_json(text).unwrap();
            assert_eq!(parsed, rule, "{text}");
            assert_eq!(Rule::from_json(&parsed.to_json().to_string()).unwrap(), rule);
        }
        for bad in [
            r#"{"type":"maskin","X":"1"}"#,
            r#"{"type":"cc-g","n":2,"g":["W","T"]}"#,
            r#"{"type":"copeland"}"#,
            r#"{"type":"borda"}"#,
        ] {
            assert!(matches!(Rule::from_json(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn condorcet_rule_profiles() {
        let g = Rule::condorcet_g(vec![W, L, L]).unwrap();
        // ε = (1, 1, 0) on (c1c2c3, c2c3c1, c3c1c2).
        let p = profile(&[("c1>c2>c3", 1), ("c2>c3>c1", 1)]);
        let out = g.evaluate(&p).unwrap();
        assert_eq!(out, Rule::borda(int(1)).evaluate(&p).unwrap());
        assert!(matches!(
            g.evaluate(&profile(&[("c1>c3>c2", 2)])),
            Err(Error::Incompatible(_))
        ));
        assert!(matches!(
            g.evaluate(&profile(&[("c1>c2>c3", 3)])),
            Err(Error::Incompatible(_))
        ));
    }

    fn arb_profile3() -> impl Strategy<Value = AnonymousProfile> {
        proptest::collection::vec(0i64..20, 6).prop_filter_map("positive total", |ws| {
            let rankings = crate::order::all_rankings(3).unwrap();
            AnonymousProfile::new(3, rankings.into_iter().zip(ws.into_iter().map(int)))
                .ok()
                .map(|p| p.normalize())
        })
    }

    fn arb_x() -> impl Strategy<Value = Rational> {
        (0i64..40, 1i64..8).prop_map(|(n, d)| int(2) + ratio(n, d))
    }

    proptest! {
        #[test]
        fn maskin_g_is_antisymmetric(p in arb_profile3(), x in arb_x()) {
            let a = p.project(c(1), c(2)).unwrap();
            prop_assert_eq!(maskin_g(&a.rho(), &x).unwrap(), -maskin_g(&a, &x).unwrap());
        }

        #[test]
        fn maskin_full_minus_full_is_relative(p in arb_profile3(), x in arb_x()) {
            for (i, j) in Candidate::ordered_pairs(3) {
                let diff = maskin_G(&p, i, &x).unwrap() - maskin_G(&p, j, &x).unwrap();
                prop_assert_eq!(diff, maskin_g(&p.project(i, j).unwrap(), &x).unwrap());
            }
        }

        #[test]
        fn pareto_floor(a2 in 0i64..100, a1 in 0i64..100) {
            prop_assume!(a1 + a2 > 0);
            let a = coords([a2, a1, 0, 0], a1 + a2);
            prop_assert!(maskin_g(&a, &int(2)).unwrap() >= ratio(1, 2));
        }

        #[test]
        fn shift_increments(
            w in proptest::collection::vec(1i64..30, 4),
            step in 1i64..30,
        ) {
            let total: i64 = w.iter().sum();
            let scale = total * 32;
            let [a2, a1, am1, am2] = [w[0], w[1], w[2], w[3]].map(|v| ratio(v, total));
            let x = int(2);
            let delta = ratio(step, scale);
            let g = |v: [Rational; 4]| maskin_g(&RelativeProfile::from_coords3(v).unwrap(), &x).unwrap();
            let base = g([a2.clone(), a1.clone(), am1.clone(), am2.clone()]);
            let d = &delta;
            let three = int(3);
            let two = int(2);
            let four = int(4);
            // First two increments by direct expansion of g; the third matches
            // the commonly quoted form δ(X+α₂−2α₋₁+α₁+4α₋₂)−3δ².
            let moves = [
                (
                    [&a2 + d, &a1 - d, am1.clone(), am2.clone()],
                    d * (&x - &two * &a1 + &four * &a2 + &am1 + &am2) + &three * d * d,
                ),
                (
                    [a2.clone(), &a1 + d, &am1 - d, am2.clone()],
                    d * (&two * &x + &two * &a1 - &a2 + &two * &am1 - &am2),
                ),
                (
                    [a2.clone(), a1.clone(), &am1 + d, &am2 - d],
                    d * (&x + &a2 - &two * &am1 + &a1 + &four * &am2) - &three * d * d,
                ),
            ];
            for (moved, increment) in moves {
                let after = g(moved);
                prop_assert_eq!(&after - &base, increment);
                prop_assert!(phi(&after) >= phi(&base));
            }
        }

        #[test]
        fn borda_is_pairwise(p in arb_profile3(), q in arb_profile3(), w in -3i64..4) {
            let rule = Rule::borda(int(w));
            let fp = rule.evaluate(&p).unwrap();
            let fq = rule.evaluate(&q).unwrap();
            for (i, j) in Candidate::ordered_pairs(3) {
                if p.project(i, j).unwrap() == q.project(i, j).unwrap() {
                    prop_assert_eq!(fp.rel(i, j).unwrap(), fq.rel(i, j).unwrap());
                }
            }
        }
    }
}

use std::collections::{BTreeMap, HashMap};

use super::{guard, CheckReport, Counterexample, CrossCheck};
use crate::ballot::Ballot;
use crate::error::{precondition, Result};
use crate::order::{promotes, Candidate, Gap, RelOutcome, WeakOrder};
use crate::profile::{tau, FiniteElection, RelativeProfile};
use crate::rules::Swf;

fn election_count(b: &Ballot, n: usize) -> Option<u128> {
    (b.len() as u128).checked_pow(u32::try_from(n).ok()?)
}

fn election_from_code(b: &Ballot, n: usize, mut code: u128) -> FiniteElection {
    let base = b.len() as u128;
    let mut votes = vec![b.rankings()[0].clone(); n];
    for v in (0..n).rev() {
        votes[v] = b.rankings()[(code % base) as usize].clone();
        code /= base;
    }
    FiniteElection::new(votes).expect("ballot rankings share k")
}

fn require_voters(n: usize) -> Result<()> {
    if n == 0 {
        return Err(precondition("an election needs at least one voter"));
    }
    Ok(())
}

/// All `|B|^n` elections, voter 0 most significant.
pub fn elections(b: &Ballot, n: usize) -> Result<Vec<FiniteElection>> {
    require_voters(n)?;
    let count = election_count(b, n);
    guard("elections", count)?;
    Ok((0..count.expect("guarded")).map(|code| election_from_code(b, n, code)).collect())
}

/// Every election paired with its result under `f`.
pub fn evaluate_all(f: &dyn Swf, b: &Ballot, n: usize) -> Result<Vec<(FiniteElection, WeakOrder)>> {
    elections(b, n)?
        .into_iter()
        .map(|e| {
            let w = f.apply(&e)?;
            if w.k() != e.k() {
                return Err(precondition(format!(
                    "rule returned a weak order on {} candidates for {} candidates",
                    w.k(),
                    e.k()
                )));
            }
            Ok((e, w))
        })
        .collect()
}

pub fn check_miia(f: &dyn Swf, b: &Ballot, n: usize) -> Result<CheckReport> {
    let results = evaluate_all(f, b, n)?;
    Ok(CheckReport::new("miia", results.len() as u64, miia_violation(&results, b.k())))
}

fn miia_violation(results: &[(FiniteElection, WeakOrder)], k: usize) -> Option<Counterexample> {
    for (i, j) in Candidate::ordered_pairs(k) {
        let mut seen: HashMap<Vec<Gap>, usize> = HashMap::new();
        for (idx, (e, w)) in results.iter().enumerate() {
            let a: Vec<Gap> = e.votes().iter().map(|r| r.gap_unchecked(i, j)).collect();
            let first = *seen.entry(a.clone()).or_insert(idx);
            let (e0, w0) = &results[first];
            if w0.rel_unchecked(i, j) != w.rel_unchecked(i, j) {
                return Some(Counterexample::Miia {
                    i,
                    j,
                    relative: a,
                    first: e0.clone(),
                    first_outcome: w0.rel_unchecked(i, j),
                    second: e.clone(),
                    second_outcome: w.rel_unchecked(i, j),
                });
            }
        }
    }
    None
}

fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))
}

/// Invariance under every voter permutation, checked fiberwise over `τ`:
/// two elections are related by a voter permutation exactly when they have
/// the same anonymous profile.
pub fn check_anonymity(f: &dyn Swf, b: &Ballot, n: usize) -> Result<CheckReport> {
    require_voters(n)?;
    guard("voter permutations", factorial(n))?;
    let results = evaluate_all(f, b, n)?;
    let mut fibers: HashMap<_, usize> = HashMap::new();
    for (idx, (e, w)) in results.iter().enumerate() {
        let first = *fibers.entry(tau(e)).or_insert(idx);
        let (e0, w0) = &results[first];
        if w0 != w {
            let sigma = voter_permutation(e0, e);
            return Ok(CheckReport::new(
                "anon",
                results.len() as u64,
                Some(Counterexample::Anonymity {
                    election: e0.clone(),
                    sigma,
                    result: w0.clone(),
                    permuted_result: w.clone(),
                }),
            ));
        }
    }
    Ok(CheckReport::new("anon", results.len() as u64, None))
}

/// `σ` with `target = source ∘ σ`, for elections with equal `τ`.
fn voter_permutation(source: &FiniteElection, target: &FiniteElection) -> Vec<usize> {
    let mut used = vec![false; source.n()];
    target
        .votes()
        .iter()
        .map(|r| {
            let u = (0..source.n())
                .find(|&u| !used[u] && source.vote(u) == r)
                .expect("elections share an anonymous profile");
            used[u] = true;
            u
        })
        .collect()
}

/// `F(ρ ∘ e) = ρ(F(e))` for every symmetry `ρ` of the ballot.
pub fn check_neutrality(f: &dyn Swf, b: &Ballot, n: usize) -> Result<CheckReport> {
    let results = evaluate_all(f, b, n)?;
    let index: HashMap<&FiniteElection, usize> =
        results.iter().enumerate().map(|(idx, (e, _))| (e, idx)).collect();
    let symmetries = b.symmetries();
    let mut cases = 0u64;
    for (e, w) in &results {
        for rho in &symmetries {
            cases += 1;
            let moved = FiniteElection::new(e.votes().iter().map(|r| r.relabel(rho)).collect())?;
            let actual = &results[index[&moved]].1;
            let expected = w.relabel(rho);
            if *actual != expected {
                return Ok(CheckReport::new(
                    "neutral",
                    cases,
                    Some(Counterexample::Neutrality {
                        election: e.clone(),
                        rho: rho.clone(),
                        expected,
                        actual: actual.clone(),
                    }),
                ));
            }
        }
    }
    Ok(CheckReport::new("neutral", cases, None))
}

pub fn check_pareto(f: &dyn Swf, b: &Ballot, n: usize) -> Result<CheckReport> {
    let results = evaluate_all(f, b, n)?;
    for (e, w) in &results {
        for (i, j) in Candidate::ordered_pairs(b.k()) {
            let unanimous = e.votes().iter().all(|r| r.gap_unchecked(i, j).value() > 0);
            if unanimous && w.rel_unchecked(i, j) != RelOutcome::W {
                return Ok(CheckReport::new(
                    "pareto",
                    results.len() as u64,
                    Some(Counterexample::Pareto {
                        election: e.clone(),
                        i,
                        j,
                        outcome: w.rel_unchecked(i, j),
                    }),
                ));
            }
        }
    }
    Ok(CheckReport::new("pareto", results.len() as u64, None))
}

/// For each ballot ranking `r1`, the ballot indices `r2` such that
/// `(c_j, c_i)` is promoted by `(r2, r1)`.
fn promotion_table(b: &Ballot, i: Candidate, j: Candidate) -> Vec<Vec<usize>> {
    b.rankings()
        .iter()
        .map(|r1| {
            b.rankings()
                .iter()
                .enumerate()
                .filter(|(_, r2)| promotes(r2, r1, j, i))
                .map(|(idx, _)| idx)
                .collect()
        })
        .collect()
}

/// PR straight from the definition: every pair of elections related by a
/// promotion, for every ordered pair of candidates.
///
/// When the rule satisfies MIIA and the ballot is increasing, the report
/// also carries the election-level PRm verdict and whether the two agree.
pub fn check_pr_raw(f: &dyn Swf, b: &Ballot, n: usize) -> Result<CheckReport> {
    require_voters(n)?;
    let tables: Vec<((Candidate, Candidate), Vec<Vec<usize>>)> = Candidate::ordered_pairs(b.k())
        .map(|(i, j)| ((i, j), promotion_table(b, i, j)))
        .collect();
    let pair_count = tables.iter().try_fold(0u128, |acc, (_, t)| {
        let per_voter: u128 = t.iter().map(|targets| targets.len() as u128).sum();
        acc.checked_add(per_voter.checked_pow(u32::try_from(n).ok()?)?)
    });
    guard("promotion pairs", pair_count)?;
    let results = evaluate_all(f, b, n)?;

    let mut cases = 0u64;
    let mut violation = None;
    'pairs: for ((i, j), table) in &tables {
        for (e1, w1) in &results {
            let choices: Vec<&Vec<usize>> = e1
                .votes()
                .iter()
                .map(|r| &table[b.position(r).expect("vote from ballot")])
                .collect();
            let o1 = w1.rel_unchecked(*i, *j);
            let mut pick = vec![0usize; n];
            loop {
                cases += 1;
                let code = pick
                    .iter()
                    .zip(&choices)
                    .fold(0usize, |acc, (&p, c)| acc * b.len() + c[p]);
                let (e2, w2) = &results[code];
                let o2 = w2.rel_unchecked(*i, *j);
                if o1 < o2 {
                    violation = Some(Counterexample::Pr {
                        i: *i,
                        j: *j,
                        e1: e1.clone(),
                        e2: e2.clone(),
                        outcome1: o1,
                        outcome2: o2,
                    });
                    break 'pairs;
                }
                if !advance(&mut pick, &choices) {
                    break;
                }
            }
        }
    }

    let mut report = CheckReport::new("pr", cases, violation);
    if miia_violation(&results, b.k()).is_none() && b.is_increasing() {
        let prm = prm_from_results(&results, b)?;
        report.cross_check = Some(CrossCheck {
            check: "prm",
            passed: prm.passed,
            agrees: prm.passed == report.passed,
        });
    }
    Ok(report)
}

/// Odometer over per-voter choice lists, last voter fastest.
fn advance(pick: &mut [usize], choices: &[&Vec<usize>]) -> bool {
    for v in (0..pick.len()).rev() {
        pick[v] += 1;
        if pick[v] < choices[v].len() {
            return true;
        }
        pick[v] = 0;
    }
    false
}

/// PRm on relative elections: for each pair, `f_{i,j}` is read off the first
/// election realizing each relative election, then compared on every
/// voterwise-ordered pair `a1 ≥ a2`.
pub fn check_prm_exhaustive(f: &dyn Swf, b: &Ballot, n: usize) -> Result<CheckReport> {
    let results = evaluate_all(f, b, n)?;
    prm_from_results(&results, b)
}

fn prm_from_results(results: &[(FiniteElection, WeakOrder)], b: &Ballot) -> Result<CheckReport> {
    let mut cases = 0u64;
    for (i, j) in Candidate::ordered_pairs(b.k()) {
        let mut realized: BTreeMap<Vec<Gap>, usize> = BTreeMap::new();
        for (idx, (e, _)) in results.iter().enumerate() {
            let a: Vec<Gap> = e.votes().iter().map(|r| r.gap_unchecked(i, j)).collect();
            realized.entry(a).or_insert(idx);
        }
        let size = (realized.len() as u128).checked_mul(realized.len() as u128);
        guard("relative election pairs", size)?;
        for (a1, &idx1) in &realized {
            for (a2, &idx2) in &realized {
                if !a1.iter().zip(a2).all(|(x, y)| x >= y) {
                    continue;
                }
                cases += 1;
                let o1 = results[idx1].1.rel_unchecked(i, j);
                let o2 = results[idx2].1.rel_unchecked(i, j);
                if o1 < o2 {
                    return Ok(CheckReport::new(
                        "prm",
                        cases,
                        Some(Counterexample::PrmElections {
                            i,
                            j,
                            a1: a1.clone(),
                            a2: a2.clone(),
                            e1: results[idx1].0.clone(),
                            e2: results[idx2].0.clone(),
                            outcome1: o1,
                            outcome2: o2,
                        }),
                    ));
                }
            }
        }
    }
    Ok(CheckReport::new("prm", cases, None))
}

/// PRm on supplied profile pairs `(a1, a2)` with `a1` majorizing `a2`.
pub fn check_prm<F, I>(f_rel: F, pairs: I) -> Result<CheckReport>
where
    F: Fn(&RelativeProfile) -> Result<RelOutcome>,
    I: IntoIterator<Item = (RelativeProfile, RelativeProfile)>,
{
    let mut cases = 0u64;
    for (higher, lower) in pairs {
        if !higher.majorizes(&lower)? {
            return Err(precondition(format!(
                "pair {higher:?} / {lower:?} is not ordered by majorization"
            )));
        }
        cases += 1;
        let (oh, ol) = (f_rel(&higher)?, f_rel(&lower)?);
        if oh < ol {
            return Ok(CheckReport::new(
                "prm",
                cases,
                Some(Counterexample::Prm {
                    higher,
                    lower,
                    higher_outcome: oh,
                    lower_outcome: ol,
                }),
            ));
        }
    }
    Ok(CheckReport::new("prm", cases, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{Ranking, WeakOrder};
    use crate::rational::{int, ratio};
    use crate::rules::Rule;

    fn c(n: usize) -> Candidate {
        Candidate::new(n - 1)
    }

    fn r(s: &str) -> Ranking {
        s.parse().unwrap()
    }

    fn full3() -> Ballot {
        Ballot::full(3).unwrap()
    }

    fn cc() -> Ballot {
        Ballot::condorcet()
    }

    fn dictator(e: &FiniteElection) -> Result<WeakOrder> {
        Ok(e.vote(0).to_weak_order())
    }

    fn voter0_flag(e: &FiniteElection) -> Result<WeakOrder> {
        let w = if *e.vote(0) == r("c1>c2>c3") { "c1>c2>c3" } else { "c3>c2>c1" };
        w.parse()
    }

    fn c1_on_top(e: &FiniteElection) -> Result<WeakOrder> {
        let others: Vec<Candidate> = Candidate::all(e.k()).skip(1).collect();
        WeakOrder::from_tiers(&[vec![c(1)], others])
    }

    #[test]
    fn election_enumeration() {
        let es = elections(&cc(), 2).unwrap();
        assert_eq!(es.len(), 9);
        assert_eq!(es[0].votes(), &[r("c1>c2>c3"), r("c1>c2>c3")]);
        assert_eq!(es[1].votes(), &[r("c1>c2>c3"), r("c2>c3>c1")]);
        assert_eq!(es[3].votes(), &[r("c2>c3>c1"), r("c1>c2>c3")]);
        assert!(matches!(
            elections(&Ballot::full(4).unwrap(), 6),
            Err(crate::Error::Guard { .. })
        ));
        assert!(elections(&cc(), 0).is_err());
    }

    #[test]
    fn miia_examples() {
        assert!(check_miia(&Rule::borda(int(1)), &cc(), 3).unwrap().passed);
        let maskin = check_miia(&Rule::maskin_default(), &full3(), 2).unwrap();
        assert!(maskin.passed);
        assert_eq!(maskin.cases, 36);

        let report = check_miia(&voter0_flag, &full3(), 2).unwrap();
        assert!(!report.passed);
        assert!(report.counterexample.unwrap().replay(&voter0_flag).unwrap());
    }

    #[test]
    fn anonymity_examples() {
        assert!(check_anonymity(&Rule::borda(int(-1)), &full3(), 2).unwrap().passed);
        let maskin = check_anonymity(&Rule::maskin_default(), &cc(), 3).unwrap();
        assert!(maskin.passed);
        assert_eq!(maskin.cases, 27);

        let report = check_anonymity(&dictator, &cc(), 2).unwrap();
        let cx = report.counterexample.clone().unwrap();
        match &cx {
            Counterexample::Anonymity { election, sigma, .. } => {
                assert_eq!(election.votes(), &[r("c1>c2>c3"), r("c2>c3>c1")]);
                assert_eq!(sigma, &vec![1, 0]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(cx.replay(&dictator).unwrap());
        assert!(matches!(
            check_anonymity(&dictator, &cc(), 14),
            Err(crate::Error::Guard { .. })
        ));
    }

    #[test]
    fn neutrality_examples() {
        let maskin = check_neutrality(&Rule::maskin_default(), &cc(), 3).unwrap();
        assert!(maskin.passed);
        assert_eq!(maskin.cases, 27 * 3);
        let borda = check_neutrality(&Rule::borda(int(1)), &full3(), 2).unwrap();
        assert!(borda.passed);
        assert_eq!(borda.cases, 36 * 6);

        let report = check_neutrality(&c1_on_top, &full3(), 1).unwrap();
        assert!(!report.passed);
        assert!(report.counterexample.unwrap().replay(&c1_on_top).unwrap());
    }

    #[test]
    fn pareto_examples() {
        assert!(check_pareto(&Rule::maskin_default(), &full3(), 2).unwrap().passed);
        let tie = check_pareto(&Rule::Tie, &cc(), 2).unwrap();
        assert!(!tie.passed);
        let neg = check_pareto(&Rule::borda(int(-1)), &cc(), 2).unwrap();
        match neg.counterexample.clone().unwrap() {
            Counterexample::Pareto { election, i, j, outcome } => {
                assert_eq!(election.votes(), &[r("c1>c2>c3"), r("c1>c2>c3")]);
                assert_eq!((i, j, outcome), (c(1), c(2), RelOutcome::L));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(neg.counterexample.unwrap().replay(&Rule::borda(int(-1))).unwrap());
    }

    #[test]
    fn pr_examples() {
        let pos = check_pr_raw(&Rule::borda(int(1)), &cc(), 2).unwrap();
        assert!(pos.passed);
        assert_eq!(pos.cross_check.as_ref().map(|x| x.agrees), Some(true));

        let neg = check_pr_raw(&Rule::borda(int(-1)), &cc(), 2).unwrap();
        assert!(!neg.passed);
        assert_eq!(neg.cross_check.as_ref().map(|x| (x.passed, x.agrees)), Some((false, true)));
        assert!(neg.counterexample.unwrap().replay(&Rule::borda(int(-1))).unwrap());

        let maskin = check_pr_raw(&Rule::maskin_default(), &full3(), 2).unwrap();
        assert!(maskin.passed);
        assert_eq!(maskin.cross_check.as_ref().map(|x| (x.passed, x.agrees)), Some((true, true)));
    }

    #[test]
    fn pr_pairs_match_brute_force() {
        // Independent count of promotion pairs on 𝔠 with n = 2.
        let b = cc();
        let es = elections(&b, 2).unwrap();
        let mut expected = 0u64;
        for (i, j) in Candidate::ordered_pairs(3) {
            for e1 in &es {
                for e2 in &es {
                    if crate::profile::promotes_elections(e2, e1, j, i).unwrap() {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(check_pr_raw(&Rule::Tie, &b, 2).unwrap().cases, expected);
    }

    #[test]
    fn prm_profile_pairs() {
        let coords = |a: [i64; 4]| RelativeProfile::from_coords3(a.map(int)).unwrap();
        let at_one = coords([0, 1, 0, 0]);
        let at_minus_two = coords([0, 0, 0, 1]);
        let neg = Rule::borda(int(-1));
        let report = check_prm(|a| neg.relative(a), [(at_one.clone(), at_minus_two.clone())]).unwrap();
        assert!(!report.passed);
        let f = |a: &RelativeProfile| neg.relative(a);
        assert!(report.counterexample.unwrap().replay_relative(&f).unwrap());

        let maskin = Rule::maskin_default();
        assert!(check_prm(|a| maskin.relative(a), [(at_one.clone(), at_minus_two.clone())])
            .unwrap()
            .passed);
        assert!(check_prm(|_| Ok(RelOutcome::T), [(at_one.clone(), at_minus_two.clone())])
            .unwrap()
            .passed);
        assert!(check_prm(|a| maskin.relative(a), [(at_minus_two, at_one)]).is_err());
        let half = RelativeProfile::from_coords3([0, 1, 1, 0].map(|x| ratio(x, 2))).unwrap();
        assert!(check_prm(|a| maskin.relative(a), [(half, coords([0, 0, 1, 0]))])
            .unwrap()
            .passed);
    }

    #[test]
    fn prm_elections_examples() {
        assert!(check_prm_exhaustive(&Rule::maskin_default(), &full3(), 2).unwrap().passed);
        let neg = check_prm_exhaustive(&Rule::borda(int(-1)), &cc(), 2).unwrap();
        assert!(!neg.passed);
        assert!(neg.counterexample.unwrap().replay(&Rule::borda(int(-1))).unwrap());
    }

    #[test]
    fn report_json_schema() {
        let report = check_pareto(&Rule::Tie, &cc(), 1).unwrap();
        let json = report.to_json();
        assert_eq!(json["check"], "pareto");
        assert_eq!(json["passed"], false);
        assert_eq!(json["counterexample"]["kind"], "pareto");
        assert_eq!(json["counterexample"]["election"][0], "c1>c2>c3");
        assert!(json.get("cross_check").is_none());
        let pass = check_pareto(&Rule::borda(int(1)), &cc(), 1).unwrap().to_json();
        assert_eq!(pass["counterexample"], serde_json::Value::Null);
    }
}

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{parse_error, precondition, Result};
use crate::order::{is_consistent, Ranking, RelOutcome};
use crate::profile::AnonymousProfile;
use crate::rational::{int, Rational};
use crate::rules::{phi, Rule};

/// Largest `ℓ` (and `n`) accepted by the numberline search and classification.
pub const MAX_NUMBERLINE_L: usize = 14;

/// `g : {0..ℓ} → {W, T, L}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GFunction {
    values: Vec<RelOutcome>,
}

impl GFunction {
    pub fn new(values: Vec<RelOutcome>) -> Result<Self> {
        if values.len() < 2 {
            return Err(precondition("g must be defined on {0..ℓ} with ℓ >= 1"));
        }
        Ok(GFunction { values })
    }

    pub fn ell(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, i: usize) -> RelOutcome {
        self.values[i]
    }

    pub fn values(&self) -> &[RelOutcome] {
        &self.values
    }

    /// `g(i) ≥ g(i+1)` for every `i`.
    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            write!(f, "{}", v.symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g[{self}]")
    }
}

impl FromStr for GFunction {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .trim()
            .chars()
            .map(|ch| ch.to_string().parse())
            .collect::<Result<Vec<RelOutcome>>>()?;
        GFunction::new(values).map_err(|e| parse_error(e.to_string()))
    }
}

/// The `κ ∈ {+1, 0, −1}` with `g(i) = φ(κ(i − m/3))` for all `i`, if any.
pub fn threshold_kappa(g: &GFunction, m: usize) -> Option<i8> {
    [1i8, 0, -1].into_iter().find(|&kappa| {
        (0..=g.ell()).all(|i| {
            let x = int(kappa as i64) * int(3 * i as i64 - m as i64);
            g.get(i) == phi(&x)
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumberlineSolution {
    pub g: GFunction,
    /// Threshold orientation, `None` if `g` is not of threshold form.
    pub kappa: Option<i8>,
}

/// Every `g` on `{0..ℓ}` such that `{g(i), g(j), g(k)}` is consistent
/// whenever `i + j + k = m`, in lexicographic order (`L < T < W`).
pub fn numberline_solutions(ell: usize, m: usize) -> Result<Vec<NumberlineSolution>> {
    if !(1..=MAX_NUMBERLINE_L).contains(&ell) {
        return Err(precondition(format!(
            "ℓ must lie in 1..={MAX_NUMBERLINE_L}, got {ell}"
        )));
    }
    if !(ell..=2 * ell).contains(&m) {
        return Err(precondition(format!("m must satisfy ℓ <= m <= 2ℓ, got ℓ = {ell}, m = {m}")));
    }
    let mut found = Vec::new();
    let mut values = Vec::with_capacity(ell + 1);
    extend(&mut values, ell, m, &mut found);
    found.sort();
    Ok(found
        .into_iter()
        .map(|g| {
            let kappa = threshold_kappa(&g, m);
            NumberlineSolution { g, kappa }
        })
        .collect())
}

fn extend(values: &mut Vec<RelOutcome>, ell: usize, m: usize, found: &mut Vec<GFunction>) {
    if values.len() == ell + 1 {
        found.push(GFunction { values: values.clone() });
        return;
    }
    let t = values.len();
    for v in [RelOutcome::L, RelOutcome::T, RelOutcome::W] {
        values.push(v);
        if consistent_with_last(values, m) {
            extend(values, ell, m, found);
        }
        values.pop();
    }
    debug_assert_eq!(values.len(), t);
}

/// Checks every triple `i ≤ j ≤ t` with `i + j + t = m`, where `t` is the
/// index just assigned.
fn consistent_with_last(values: &[RelOutcome], m: usize) -> bool {
    let t = values.len() - 1;
    if t > m {
        return true;
    }
    let rest = m - t;
    (0..=rest / 2).all(|i| {
        let j = rest - i;
        j > t || is_consistent([values[i], values[j], values[t]])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CcLabel {
    PositiveBorda,
    Tie,
    NegativeBorda,
}

impl CcLabel {
    /// The constant Borda weight `w = −κ` of the matching unweighted rule.
    pub fn borda_weight(self) -> Rational {
        match self {
            CcLabel::PositiveBorda => int(1),
            CcLabel::Tie => int(0),
            CcLabel::NegativeBorda => int(-1),
        }
    }
}

impl fmt::Display for CcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CcLabel::PositiveBorda => "positive-borda",
            CcLabel::Tie => "tie",
            CcLabel::NegativeBorda => "negative-borda",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CcClass {
    pub g: GFunction,
    pub kappa: i8,
    pub label: CcLabel,
}

/// Condorcet-cycle rules on `n` voters satisfying MIIA, A and N, optionally
/// filtered by Pareto (`g(n) = L`) and PR (`g` non-increasing), each labeled
/// by the unweighted Borda rule it coincides with.
pub fn classify_cc(n: usize, require_pareto: bool, require_pr: bool) -> Result<Vec<CcClass>> {
    let mut out = Vec::new();
    for sol in numberline_solutions(n, n)? {
        let g = sol.g;
        let kappa = sol
            .kappa
            .ok_or_else(|| precondition(format!("g = {g} is not of threshold form")))?;
        if require_pareto {
            if g.get(n) != RelOutcome::L {
                continue;
            }
            if g.get(0) != RelOutcome::W {
                return Err(precondition(format!(
                    "g = {g} passes the Pareto filter g(n) = L but has g(0) = {}",
                    g.get(0)
                )));
            }
        }
        if require_pr && !g.is_non_increasing() {
            continue;
        }
        let label = match kappa {
            -1 => CcLabel::PositiveBorda,
            0 => CcLabel::Tie,
            _ => CcLabel::NegativeBorda,
        };
        out.push(CcClass { g, kappa, label });
    }
    out.sort_by_key(|c| c.label);
    Ok(out)
}

pub fn cc_rule_from_g(g: &GFunction) -> Rule {
    Rule::CondorcetG { g: g.values.clone() }
}

/// Every profile on `c1>c2>c3`, `c2>c3>c1`, `c3>c1>c2` with integer weights
/// `(ε₁, ε₂, ε₃)` summing to `n`, `ε₁` outermost.
pub fn cc_profiles(n: usize) -> Result<Vec<AnonymousProfile>> {
    if n == 0 {
        return Err(precondition("profiles need n >= 1"));
    }
    let orbit: Vec<Ranking> = ["c1>c2>c3", "c2>c3>c1", "c3>c1>c2"]
        .iter()
        .map(|s| s.parse().expect("literal ranking"))
        .collect();
    let mut out = Vec::new();
    for e1 in 0..=n {
        for e2 in 0..=n - e1 {
            let e3 = n - e1 - e2;
            out.push(AnonymousProfile::new(
                3,
                orbit.iter().cloned().zip([e1, e2, e3].map(|e| int(e as i64))),
            )?);
        }
    }
    Ok(out)
}

/// Whether the rule built from `g` matches `B_w` on every Condorcet-cycle
/// profile of total `n = ℓ`.
pub fn cc_agrees_with_borda(g: &GFunction, w: &Rational) -> Result<bool> {
    let rule = cc_rule_from_g(g);
    let borda = Rule::borda(w.clone());
    for p in cc_profiles(g.ell())? {
        if rule.evaluate(&p)? != borda.evaluate(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{AssemblyError, Error};
    use proptest::prelude::*;
    use RelOutcome::*;

    fn g(s: &str) -> GFunction {
        s.parse().unwrap()
    }

    fn strings(sols: &[NumberlineSolution]) -> Vec<String> {
        sols.iter().map(|s| s.g.to_string()).collect()
    }

    /// Independent check over all `3^(ℓ+1)` functions.
    fn brute_force(ell: usize, m: usize) -> Vec<String> {
        let mut out = Vec::new();
        for code in 0..3usize.pow(ell as u32 + 1) {
            let mut rest = code;
            let values: Vec<RelOutcome> = (0..=ell)
                .map(|_| {
                    let v = [L, T, W][rest % 3];
                    rest /= 3;
                    v
                })
                .collect();
            let mut ok = true;
            for i in 0..=ell {
                for j in 0..=ell {
                    if i + j <= m && m - i - j <= ell {
                        ok &= is_consistent([values[i], values[j], values[m - i - j]]);
                    }
                }
            }
            if ok {
                out.push(GFunction { values }.to_string());
            }
        }
        out.sort_by(|a, b| g(a).cmp(&g(b)));
        out
    }

    #[test]
    fn small_cases() {
        assert_eq!(strings(&numberline_solutions(1, 1).unwrap()), ["LW", "TT", "WL"]);
        assert_eq!(strings(&numberline_solutions(1, 2).unwrap()), ["LW", "TT", "WL"]);
        assert_eq!(strings(&numberline_solutions(2, 2).unwrap()), ["LWW", "TTT", "WLL"]);
        assert_eq!(strings(&numberline_solutions(2, 3).unwrap()), ["LTW", "TTT", "WTL"]);
        assert_eq!(strings(&numberline_solutions(2, 4).unwrap()), ["LLW", "TTT", "WWL"]);
        assert_eq!(strings(&numberline_solutions(3, 3).unwrap()), ["LTWW", "TTTT", "WTLL"]);
        assert_eq!(strings(&numberline_solutions(3, 4).unwrap()), ["LLWW", "TTTT", "WWLL"]);
        assert_eq!(strings(&numberline_solutions(3, 6).unwrap()), ["LLTW", "TTTT", "WWTL"]);
    }

    #[test]
    fn matches_brute_force() {
        for ell in 1..=7 {
            for m in ell..=2 * ell {
                assert_eq!(
                    strings(&numberline_solutions(ell, m).unwrap()),
                    brute_force(ell, m),
                    "ℓ = {ell}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn thresholds_and_centre() {
        for ell in 1..=10 {
            for m in ell..=2 * ell {
                let sols = numberline_solutions(ell, m).unwrap();
                assert_eq!(sols.len(), 3);
                let mut kappas: Vec<i8> = sols.iter().map(|s| s.kappa.unwrap()).collect();
                kappas.sort();
                assert_eq!(kappas, [-1, 0, 1]);
                if m % 3 == 0 {
                    assert!(sols.iter().all(|s| s.g.get(m / 3) == T));
                }
            }
        }
    }

    #[test]
    fn range_errors() {
        assert!(numberline_solutions(3, 7).is_err());
        assert!(numberline_solutions(3, 2).is_err());
        assert!(numberline_solutions(0, 0).is_err());
        assert!(numberline_solutions(15, 15).is_err());
        assert!(classify_cc(0, false, false).is_err());
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(threshold_kappa(&g("WWLL"), 4), Some(-1));
        assert_eq!(threshold_kappa(&g("LLWW"), 4), Some(1));
        assert_eq!(threshold_kappa(&g("TTTT"), 4), Some(0));
        assert_eq!(threshold_kappa(&g("WLWL"), 4), None);
        assert!(g("WLWL").to_string() == "WLWL" && !g("WLWL").is_non_increasing());
        assert!("WX".parse::<GFunction>().is_err());
        assert!("W".parse::<GFunction>().is_err());
    }

    #[test]
    fn classification_n5() {
        let all = classify_cc(5, false, false).unwrap();
        assert_eq!(
            all.iter().map(|c| c.label).collect::<Vec<_>>(),
            [CcLabel::PositiveBorda, CcLabel::Tie, CcLabel::NegativeBorda]
        );
        let pareto = classify_cc(5, true, false).unwrap();
        assert_eq!(pareto.len(), 1);
        assert_eq!(pareto[0].label, CcLabel::PositiveBorda);
        assert_eq!(pareto[0].g.to_string(), "WWLLLL");
        let pr = classify_cc(5, false, true).unwrap();
        assert_eq!(
            pr.iter().map(|c| c.label).collect::<Vec<_>>(),
            [CcLabel::PositiveBorda, CcLabel::Tie]
        );
    }

    #[test]
    fn classified_rules_are_borda() {
        for n in 1..=6 {
            for class in classify_cc(n, false, false).unwrap() {
                assert!(
                    cc_agrees_with_borda(&class.g, &class.label.borda_weight()).unwrap(),
                    "n = {n}, g = {}",
                    class.g
                );
            }
        }
        assert_eq!(cc_profiles(6).unwrap().len(), 28);
    }

    #[test]
    fn tie_g_is_tie_rule() {
        let rule = cc_rule_from_g(&g("TTTT"));
        for p in cc_profiles(3).unwrap() {
            assert_eq!(rule.evaluate(&p).unwrap(), crate::order::WeakOrder::all_tied(3));
        }
    }

    #[test]
    fn inconsistent_g_fails_at_the_centre() {
        let rule = cc_rule_from_g(&g("WWWW"));
        let centre = cc_profiles(3).unwrap().into_iter().find(|p| {
            p.support().all(|(_, w)| *w == int(1))
        });
        let err = rule.evaluate(&centre.unwrap()).unwrap_err();
        assert!(matches!(err, Error::Assembly(AssemblyError::InconsistentTriple(..))));
    }

    proptest! {
        #[test]
        fn survivors_give_consistent_triples(n in 1usize..=9, i in 0usize..=9, j in 0usize..=9) {
            prop_assume!(i + j <= n);
            let k = n - i - j;
            for class in classify_cc(n, false, false).unwrap() {
                let triple = [class.g.get(j), class.g.get(k), class.g.get(i)];
                prop_assert!(is_consistent(triple));
                let p = AnonymousProfile::new(
                    3,
                    ["c1>c2>c3", "c2>c3>c1", "c3>c1>c2"]
                        .iter()
                        .map(|s| s.parse().unwrap())
                        .zip([i, j, k].map(|e| int(e as i64))),
                );
                if let Ok(p) = p {
                    let out = cc_rule_from_g(&class.g).evaluate(&p).unwrap();
                    let c = |x| crate::order::Candidate::new(x);
                    prop_assert_eq!(out.rel(c(0), c(1)).unwrap(), class.g.get(j));
                    prop_assert_eq!(out.rel(c(1), c(2)).unwrap(), class.g.get(k));
                    prop_assert_eq!(out.rel(c(2), c(0)).unwrap(), class.g.get(i));
                }
            }
        }
    }
}

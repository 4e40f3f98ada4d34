use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{guard, CheckReport, Counterexample};
use crate::error::{incompatible, precondition, Result};
use crate::order::{Gap, RelOutcome};
use crate::profile::RelativeProfile;
use crate::rational::{self, int, rational_sqrt, Rational};
use crate::rules::{phi, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IvmOptions {
    /// Largest accepted bracket length, measured in transferred mass.
    pub width: Rational,
    /// Try an exact rational root of the per-segment quadratic first.
    pub exact_roots: bool,
}

impl Default for IvmOptions {
    fn default() -> Self {
        IvmOptions {
            width: rational::ratio(1, 1 << 32),
            exact_roots: true,
        }
    }
}

/// Where the score changes sign on the path from the losing profile to the
/// winning one. Segment `s` moves mass from the `s`-th smallest gap to the
/// next one, and `delta` is the mass moved so far on that segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IvmCertificate {
    Exact {
        segment: usize,
        #[serde(with = "rational::serde_text")]
        delta: Rational,
        point: RelativeProfile,
    },
    Bracket {
        segment: usize,
        #[serde(with = "rational::serde_text")]
        lo_delta: Rational,
        #[serde(with = "rational::serde_text")]
        hi_delta: Rational,
        lo_point: RelativeProfile,
        hi_point: RelativeProfile,
        #[serde(with = "rational::serde_text")]
        g_lo: Rational,
        #[serde(with = "rational::serde_text")]
        g_hi: Rational,
    },
}

impl IvmCertificate {
    pub fn width(&self) -> Rational {
        match self {
            IvmCertificate::Exact { .. } => Rational::zero(),
            IvmCertificate::Bracket { lo_delta, hi_delta, .. } => hi_delta - lo_delta,
        }
    }

    /// Re-evaluates the certificate: an exact zero, or a sign change across
    /// the bracket, lying between the two endpoints in majorization order.
    pub fn verify(
        &self,
        g: impl Fn(&RelativeProfile) -> Result<Rational>,
        a_lo: &RelativeProfile,
        a_hi: &RelativeProfile,
    ) -> Result<bool> {
        let between = |p: &RelativeProfile| -> Result<bool> {
            Ok(a_hi.majorizes(p)? && p.majorizes(a_lo)?)
        };
        match self {
            IvmCertificate::Exact { point, .. } => Ok(g(point)?.is_zero() && between(point)?),
            IvmCertificate::Bracket { lo_point, hi_point, .. } => Ok(g(lo_point)?.is_negative()
                && g(hi_point)?.is_positive()
                && hi_point.majorizes(lo_point)?
                && between(lo_point)?
                && between(hi_point)?),
        }
    }
}

/// The path from `a_lo` up to `a_hi`: stage `s` moves
/// `Σ_{t ≤ s} (a_lo[t] − a_hi[t])` from gap `D[s]` to `D[s+1]`, with `D`
/// the gaps in increasing order.
struct ShiftPath {
    gaps: Vec<Gap>,
    starts: Vec<RelativeProfile>,
    amounts: Vec<Rational>,
}

impl ShiftPath {
    fn new(a_lo: &RelativeProfile, a_hi: &RelativeProfile) -> Result<Self> {
        if a_lo.k() != a_hi.k() {
            return Err(precondition("path endpoints must share D_k"));
        }
        if !a_hi.majorizes(a_lo)? {
            return Err(precondition("the winning endpoint must majorize the losing one"));
        }
        let gaps = Gap::domain(a_lo.k());
        let mut amounts = Vec::with_capacity(gaps.len() - 1);
        let mut carried = Rational::zero();
        for &g in &gaps[..gaps.len() - 1] {
            carried += a_lo.weight(g) - a_hi.weight(g);
            amounts.push(carried.clone());
        }
        let mut starts = vec![a_lo.clone()];
        for s in 0..amounts.len() {
            let next = Self::shift(&gaps, &starts[s], s, &amounts[s]);
            starts.push(next);
        }
        debug_assert_eq!(starts.last(), Some(a_hi));
        Ok(ShiftPath { gaps, starts, amounts })
    }

    fn shift(gaps: &[Gap], from: &RelativeProfile, s: usize, delta: &Rational) -> RelativeProfile {
        RelativeProfile::new(
            from.k(),
            gaps.iter().enumerate().map(|(t, &g)| {
                let w = from.weight(g);
                let w = if t == s {
                    w - delta
                } else if t == s + 1 {
                    w + delta
                } else {
                    w
                };
                (g, w)
            }),
        )
        .expect("path stays feasible")
    }

    fn point(&self, s: usize, delta: &Rational) -> RelativeProfile {
        Self::shift(&self.gaps, &self.starts[s], s, delta)
    }
}

/// IVm certificate for `g` between `a_lo` (with `g < 0`) and `a_hi` (with
/// `g > 0`), using the default width `2⁻³²` and exact roots when rational.
pub fn ivm_bracket(
    g: impl Fn(&RelativeProfile) -> Result<Rational>,
    a_lo: &RelativeProfile,
    a_hi: &RelativeProfile,
) -> Result<IvmCertificate> {
    ivm_bracket_with(g, a_lo, a_hi, &IvmOptions::default())
}

pub fn ivm_bracket_with(
    g: impl Fn(&RelativeProfile) -> Result<Rational>,
    a_lo: &RelativeProfile,
    a_hi: &RelativeProfile,
    opts: &IvmOptions,
) -> Result<IvmCertificate> {
    if !opts.width.is_positive() {
        return Err(precondition("bracket width must be positive"));
    }
    let path = ShiftPath::new(a_lo, a_hi)?;
    let values = path.starts.iter().map(&g).collect::<Result<Vec<_>>>()?;
    if !(values[0].is_negative() && values[values.len() - 1].is_positive()) {
        return Err(precondition(format!(
            "no sign change: g = {} at the losing end and {} at the winning end",
            values[0],
            values[values.len() - 1]
        )));
    }
    if let Some(s) = values.iter().position(Zero::is_zero) {
        return Ok(IvmCertificate::Exact {
            segment: s,
            delta: Rational::zero(),
            point: path.starts[s].clone(),
        });
    }
    let s = (0..path.amounts.len())
        .find(|&s| values[s].is_negative() && values[s + 1].is_positive())
        .expect("a negative-to-positive step exists");
    let total = &path.amounts[s];
    let h = |u: &Rational| g(&path.point(s, &(u * total)));
    let exact = |u: Rational| IvmCertificate::Exact {
        segment: s,
        delta: &u * total,
        point: path.point(s, &(u * total)),
    };

    if opts.exact_roots {
        if let Some(u) = rational_root(&h, &values[s], &values[s + 1])? {
            return Ok(exact(u));
        }
    }

    let (mut lo, mut hi) = (Rational::zero(), rational::one());
    let (mut g_lo, mut g_hi) = (values[s].clone(), values[s + 1].clone());
    while (&hi - &lo) * total > opts.width {
        let mid = (&lo + &hi) / int(2);
        let value = h(&mid)?;
        if value.is_zero() {
            return Ok(exact(mid));
        }
        if value.is_negative() {
            lo = mid;
            g_lo = value;
        } else {
            hi = mid;
            g_hi = value;
        }
    }
    Ok(IvmCertificate::Bracket {
        segment: s,
        lo_delta: &lo * total,
        hi_delta: &hi * total,
        lo_point: path.point(s, &(&lo * total)),
        hi_point: path.point(s, &(&hi * total)),
        g_lo,
        g_hi,
    })
}

/// Fits `h(u) = A u² + B u + C` on `[0, 1]` from `u = 0, 1/2, 1`, confirms
/// the fit at `u = 1/4`, and returns the root in `(0, 1)` when rational.
fn rational_root(
    h: &impl Fn(&Rational) -> Result<Rational>,
    h0: &Rational,
    h1: &Rational,
) -> Result<Option<Rational>> {
    let half = rational::ratio(1, 2);
    let quarter = rational::ratio(1, 4);
    let hm = h(&half)?;
    let a = int(2) * h1 - int(4) * &hm + int(2) * h0;
    let b = h1 - h0 - &a;
    let c = h0.clone();
    if &a * &quarter * &quarter + &b * &quarter + &c != h(&quarter)? {
        return Ok(None);
    }
    let candidates = if a.is_zero() {
        vec![-&c / &b]
    } else {
        match rational_sqrt(&(&b * &b - int(4) * &a * &c)) {
            Some(root) => {
                let two_a = int(2) * &a;
                vec![(-&b - &root) / &two_a, (-&b + &root) / two_a]
            }
            None => return Ok(None),
        }
    };
    for u in candidates {
        if u.is_positive() && u < rational::one() && h(&u)?.is_zero() {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// All three-candidate relative profiles with weights in `(1/N)ℕ` summing to 1.
fn lattice3(denominator: u64) -> Vec<RelativeProfile> {
    let n = denominator as i64;
    let mut out = Vec::new();
    for a2 in 0..=n {
        for a1 in 0..=n - a2 {
            for am1 in 0..=n - a2 - a1 {
                let am2 = n - a2 - a1 - am1;
                out.push(
                    RelativeProfile::from_coords3([a2, a1, am1, am2].map(|x| rational::ratio(x, n)))
                        .expect("nonnegative"),
                );
            }
        }
    }
    out
}

/// IVm over the grid of profiles with denominator `N`: for every ordered
/// pair with a win above a loss, a tying profile between them is certified.
pub fn check_ivm(rule: &Rule, denominator: u64) -> Result<CheckReport> {
    if denominator == 0 {
        return Err(precondition("grid denominator must be positive"));
    }
    let probe = RelativeProfile::from_coords3([0, 1, 0, 0].map(int))?;
    if rule.relative_score(&probe)?.is_none() {
        return Err(incompatible(format!("{rule} has no continuous relative score")));
    }
    let score = |a: &RelativeProfile| -> Result<Rational> {
        Ok(rule.relative_score(a)?.expect("score rule"))
    };
    let points = lattice3(denominator);
    guard("grid profile pairs", (points.len() as u128).checked_mul(points.len() as u128))?;
    let outcomes: Vec<RelOutcome> = points.iter().map(|a| score(a).map(|x| phi(&x))).collect::<Result<_>>()?;
    let opts = IvmOptions {
        width: rational::ratio(1, 1 << 16),
        exact_roots: true,
    };
    let mut cases = 0u64;
    for (hi, oh) in points.iter().zip(&outcomes) {
        if *oh != RelOutcome::W {
            continue;
        }
        for (lo, ol) in points.iter().zip(&outcomes) {
            if *ol != RelOutcome::L || !hi.majorizes(lo)? {
                continue;
            }
            cases += 1;
            let failure = match ivm_bracket_with(score, lo, hi, &opts) {
                Ok(cert) if cert.verify(score, lo, hi)? => None,
                Ok(_) => Some("certificate did not verify".to_string()),
                Err(e) => Some(e.to_string()),
            };
            if let Some(reason) = failure {
                return Ok(CheckReport::new(
                    "ivm",
                    cases,
                    Some(Counterexample::Ivm {
                        higher: hi.clone(),
                        lower: lo.clone(),
                        reason,
                    }),
                ));
            }
        }
    }
    Ok(CheckReport::new("ivm", cases, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::rules::maskin_g;

    fn coords(a: [i64; 4], d: i64) -> RelativeProfile {
        RelativeProfile::from_coords3(a.map(|x| ratio(x, d))).unwrap()
    }

    fn maskin(a: &RelativeProfile) -> Result<Rational> {
        maskin_g(a, &int(2))
    }

    #[test]
    fn canonical_path_has_exact_root() {
        let lo = coords([0, 0, 0, 1], 1);
        let hi = coords([0, 1, 0, 0], 1);
        assert_eq!(maskin(&lo).unwrap(), int(-6));
        assert_eq!(maskin(&hi).unwrap(), int(3));
        let cert = ivm_bracket(maskin, &lo, &hi).unwrap();
        // Segment 1 is (0, δ, 1−δ, 0) where g = 6δ − 3.
        assert_eq!(
            cert,
            IvmCertificate::Exact {
                segment: 1,
                delta: ratio(1, 2),
                point: coords([0, 1, 1, 0], 2),
            }
        );
        assert!(cert.verify(maskin, &lo, &hi).unwrap());
        assert_eq!(cert.width(), int(0));
    }

    #[test]
    fn irrational_root_is_bracketed() {
        // g runs −6, −327/100, −21/100, 3/20 along the path; the last
        // segment's quadratic has an irrational root.
        let lo = coords([0, 0, 0, 1], 1);
        let hi = coords([2, 4, 1, 3], 10);
        let cert = ivm_bracket(maskin, &lo, &hi).unwrap();
        match &cert {
            IvmCertificate::Bracket { segment, .. } => assert_eq!(*segment, 2),
            other => panic!("expected a bracket, got {other:?}"),
        }
        assert!(cert.width() <= IvmOptions::default().width);
        assert!(cert.verify(maskin, &lo, &hi).unwrap());
    }

    #[test]
    fn bisection_only_still_certifies() {
        let lo = coords([0, 0, 0, 1], 1);
        let hi = coords([0, 1, 0, 0], 1);
        let opts = IvmOptions {
            exact_roots: false,
            ..IvmOptions::default()
        };
        let cert = ivm_bracket_with(maskin, &lo, &hi, &opts).unwrap();
        assert!(cert.width() <= IvmOptions::default().width);
        assert!(cert.verify(maskin, &lo, &hi).unwrap());
    }

    #[test]
    fn equal_signs_are_rejected() {
        let lo = coords([0, 1, 0, 0], 1);
        let hi = coords([1, 0, 0, 0], 1);
        assert!(ivm_bracket(maskin, &lo, &hi).is_err());
        assert!(ivm_bracket(maskin, &hi, &coords([0, 0, 0, 1], 1)).is_err());
    }

    #[test]
    fn grid_check() {
        let report = check_ivm(&Rule::maskin_default(), 4).unwrap();
        assert!(report.passed);
        assert!(report.cases > 0);
        assert!(check_ivm(&Rule::borda(int(1)), 4).unwrap().passed);
        assert_eq!(check_ivm(&Rule::Tie, 4).unwrap().cases, 0);
        let cc = Rule::condorcet_g(vec![RelOutcome::W, RelOutcome::L]).unwrap();
        assert!(check_ivm(&cc, 2).is_err());
    }
}

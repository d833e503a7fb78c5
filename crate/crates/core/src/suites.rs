//! Seeded randomized law suites. Every instance is generated from its own
//! derived seed, so a failure can be replayed from `(seed, index)` alone.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{derive_seed, Config, Mode};
use crate::covariant::{
    check_product_calculus, pair_semigroup_action, random_strict_covrep, validate_covrep_partial, CovariantRep,
    HilbertRep, MatrixOracle, PairSemigroup, SemigroupAction, SemigroupCovRep,
};
use crate::crossed::{pi_times_v, random_lelement, LElement};
use crate::cstar::{BlockAlgebra, BlockSet, PartialAutomorphism};
use crate::linalg::{frob, frob_dist, op_norm, partial_isometry_residual, real};
use crate::partial_action::{
    check_translation_identities, composite_domain_range, random_bijection_action, validate_partial_action,
    validate_reformulated, BijectionAction, Group, PartialAction,
};
use crate::semigroup::generate_closure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteFamily {
    Section2,
    Section3,
    LAlgebra,
}

impl fmt::Display for SuiteFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteFamily::Section2 => "section2",
            SuiteFamily::Section3 => "section3",
            SuiteFamily::LAlgebra => "l-algebra",
        })
    }
}

impl FromStr for SuiteFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "section2" => Ok(SuiteFamily::Section2),
            "section3" => Ok(SuiteFamily::Section3),
            "l-algebra" => Ok(SuiteFamily::LAlgebra),
            other => Err(format!("unknown suite `{other}` (expected section2, section3 or l-algebra)")),
        }
    }
}

/// A failed instance: enough to regenerate it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub seed: u64,
    pub instance: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub family: SuiteFamily,
    pub count: u64,
    pub seed: u64,
    /// Individual checks performed, summed over instances.
    pub checks: u64,
    pub max_residuals: BTreeMap<String, f64>,
    pub violations: Vec<Violation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {} count={} seed={} checks={} violations={}\n",
            self.family,
            self.count,
            self.seed,
            self.checks,
            self.violations.len()
        );
        for (k, v) in &self.max_residuals {
            out.push_str(&format!("  max {k}: {v:.3e}\n"));
        }
        for v in &self.violations {
            out.push_str(&format!("  VIOLATION #{} seed={}: {}\n    {}\n", v.index, v.seed, v.message, v.instance));
        }
        out
    }

    pub(crate) fn new(family: SuiteFamily, count: u64, seed: u64) -> Self {
        SuiteReport { family, count, seed, checks: 0, max_residuals: BTreeMap::new(), violations: Vec::new() }
    }

    fn record(&mut self, name: &str, r: f64) {
        let e = self.max_residuals.entry(name.to_string()).or_insert(0.0);
        *e = e.max(r);
    }
}

fn words(alphabet: &[i64], max_len: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&a| w.iter().copied().chain([a]).collect::<Vec<_>>()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Runs `count` instances of a suite. `count = 0` is rejected.
pub fn run_suite(family: SuiteFamily, count: u64, seed: u64, cfg: &Config) -> Result<SuiteReport, String> {
    if count == 0 {
        return Err("count must be at least 1".into());
    }
    let mut report = SuiteReport::new(family, count, seed);
    for index in 0..count {
        let s = derive_seed(seed, index);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let outcome = match family {
            SuiteFamily::Section2 => section2_instance(&mut rng, &mut report),
            SuiteFamily::Section3 => section3_instance(&mut rng, cfg, &mut report),
            SuiteFamily::LAlgebra => l_algebra_instance(index, &mut rng, cfg, &mut report),
        };
        if let Err((instance, message)) = outcome {
            report.violations.push(Violation { index, seed: s, instance, message });
        }
    }
    Ok(report)
}

type Outcome = Result<(), (String, String)>;

fn point_set(points: &[usize]) -> BlockSet {
    BlockSet::from_blocks(points.iter().copied())
}

/// Word formulas, translation identities and both validators against the
/// commutative model, with exact set comparisons.
fn section2_instance(rng: &mut ChaCha8Rng, report: &mut SuiteReport) -> Outcome {
    let inst = random_bijection_action(rng);
    let dump = || format!("{}: {:?}", inst.description, inst.action.maps);
    let fail = |m: String| (dump(), m);
    let act = &inst.action;
    act.validate().map_err(|e| fail(format!("model: {e}")))?;
    let pa = act.embed();
    validate_partial_action(&pa, 1e-12).map_err(|e| fail(e.to_string()))?;
    validate_reformulated(&pa, 1e-12).map_err(|e| fail(e.to_string()))?;

    let g = &act.group;
    for w in words(&inst.alphabet, 4) {
        let r = composite_domain_range(&pa, &w).map_err(|e| fail(e.to_string()))?;
        let m = act.composite(&w);
        if r.domain != point_set(&m.domain()) || r.range != point_set(&m.range()) {
            return Err(fail(format!("word {w:?} disagrees with the model")));
        }
        report.checks += 1;
    }
    for &t in &inst.alphabet {
        let th = act.theta(t);
        for s in words(&inst.alphabet, 2) {
            let ideal = check_translation_identities(&pa, t, &s).map_err(|e| fail(e.to_string()))?;
            let inner = s.iter().fold(act.domain(g.inverse(t)), |acc, &x| acc.meet(act.domain(x)));
            let image = point_set(&inner.iter().filter_map(|x| th.get(x)).collect::<Vec<_>>());
            let rhs = s.iter().fold(act.domain(t), |acc, &x| acc.meet(act.domain(g.product(t, x))));
            if image != rhs || ideal != rhs {
                return Err(fail(format!("translation identity fails for t = {t}, s = {s:?}")));
            }
            report.checks += 1;
        }
    }

    // a perturbed copy must be judged alike by the model and both validators
    let mut bent: BijectionAction = act.clone();
    bent.perturb(rng);
    let exact = bent.validate().is_ok();
    let epa = bent.embed();
    let a = validate_partial_action(&epa, 1e-12).is_ok();
    let b = validate_reformulated(&epa, 1e-12).is_ok();
    if a != exact || b != exact {
        return Err(fail(format!("validators disagree on a perturbation: model {exact}, direct {a}, reformulated {b}")));
    }
    report.checks += 1;
    Ok(())
}

fn section3_instance(rng: &mut ChaCha8Rng, cfg: &Config, report: &mut SuiteReport) -> Outcome {
    let (inst, cov) = random_strict_covrep(rng);
    let dump = || format!("{}: {:?}", inst.description, inst.action.maps);
    let fail = |m: String| (dump(), m);
    let cert = validate_covrep_partial(&cov, Mode::Strict, cfg.tol).map_err(|e| fail(e.to_string()))?;
    report.record("covariance", cert.max_covariance);
    report.record("composition", cert.max_composition);
    let calc = check_product_calculus(&cov, 3, cfg.tol).map_err(|e| fail(e.to_string()))?;
    report.record("final_projection", calc.max_final_projection);
    report.record("initial_projection", calc.max_initial_projection);
    report.record("collapse", calc.max_collapse);
    report.record("word_partial_isometry", calc.max_partial_isometry);
    report.checks += calc.words_checked as u64;

    let oracle = MatrixOracle { dim: cov.rep().h_dim(), tol: cfg.tol };
    let gens: Vec<_> = cov.action().support().into_iter().map(|g| cov.u(g)).collect();
    let cl = generate_closure(&oracle, &gens, cfg.bound.max(4096)).map_err(|e| fail(e.to_string()))?;
    for w in &cl.elements {
        let r = partial_isometry_residual(w);
        report.record("closure_partial_isometry", r);
        if r > cfg.tol {
            return Err(fail(format!("closure member is not a partial isometry ({r:.3e})")));
        }
    }
    report.checks += cl.order() as u64;
    Ok(())
}

/// The pair action of the shift on `ℂ²`.
pub fn shift_pair(cfg: &Config) -> PairSemigroup {
    let alg = BlockAlgebra::diagonal(2).expect("two blocks");
    let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).expect("one block");
    let pa = PartialAction::new(&alg, Group::Integers, vec![(1, a1)]).expect("in the group");
    let rep = HilbertRep::with_multiplicity(&alg, &[1, 1]).expect("positive");
    let cov = CovariantRep::new(&pa, &rep, vec![(1, real(2, 2, &[0.0, 0.0, 1.0, 0.0]))]).expect("sizes agree");
    pair_semigroup_action(&cov, Mode::Strict, cfg).expect("the shift is covariant")
}

/// Even instances use the shift pair action, odd ones the pair action of a
/// random strict covariant representation.
fn l_algebra_instance(index: u64, rng: &mut ChaCha8Rng, cfg: &Config, report: &mut SuiteReport) -> Outcome {
    let (pair, desc) = if index % 2 == 0 {
        (shift_pair(cfg), "shift on C^2".to_string())
    } else {
        let (inst, cov) = random_strict_covrep(rng);
        let pair = pair_semigroup_action(&cov, Mode::Strict, cfg).map_err(|e| (inst.description.clone(), e.to_string()))?;
        (pair, inst.description)
    };
    let parent = Arc::new(pair.action.clone());
    check_l_algebra(&parent, &pair.covrep, rng, cfg, report).map_err(|m| (desc, m))
}

/// Random elements of `L` for a pair action: associativity, the involution
/// laws, both `ℓ¹` norm inequalities, and `π × v` as a contractive
/// *-homomorphism.
pub(crate) fn check_l_algebra(
    parent: &Arc<SemigroupAction>,
    cov: &SemigroupCovRep,
    rng: &mut ChaCha8Rng,
    cfg: &Config,
    report: &mut SuiteReport,
) -> Result<(), String> {
    let x = random_lelement(parent, 4, rng);
    let y = random_lelement(parent, 4, rng);
    let z = random_lelement(parent, 4, rng);
    check_l_triple(&x, &y, &z, cov, cfg, report)
}

/// The laws of [`check_l_algebra`] on one triple of elements.
pub(crate) fn check_l_triple(
    x: &LElement,
    y: &LElement,
    z: &LElement,
    cov: &SemigroupCovRep,
    cfg: &Config,
    report: &mut SuiteReport,
) -> Result<(), String> {
    let fail = |m: String| m;
    let m = |a: &LElement, b: &LElement| a.multiply(b).map_err(|e| fail(e.to_string()));

    let xy = m(x, y)?;
    let lhs = m(&xy, z)?;
    let rhs = m(x, &m(y, z)?)?;
    let scale = x.l1_norm() * y.l1_norm() * z.l1_norm();
    let assoc = lhs.distance(&rhs) / scale.max(1.0);
    report.record("associativity", assoc);
    let anti = m(&y.star(), &x.star())?.distance(&xy.star()) / (x.l1_norm() * y.l1_norm()).max(1.0);
    report.record("star_antimultiplicative", anti);
    let double = x.star().star().distance(x) / x.l1_norm().max(1.0);
    report.record("double_star", double);
    for (name, r) in [("associativity", assoc), ("star_antimultiplicative", anti), ("double_star", double)] {
        if r > cfg.tol {
            return Err(fail(format!("{name} residual {r:.3e}")));
        }
    }
    let slack = 1e-12;
    let prod = xy.l1_norm() - x.l1_norm() * y.l1_norm();
    let rel_prod = prod / (x.l1_norm() * y.l1_norm()).max(f64::MIN_POSITIVE);
    report.record("norm_submultiplicative_excess", rel_prod.max(0.0));
    if rel_prod > slack {
        return Err(fail(format!("|x*y|_1 exceeds |x|_1 |y|_1 by {rel_prod:.3e}")));
    }
    let rel_star = (x.star().l1_norm() - x.l1_norm()).abs() / x.l1_norm().max(f64::MIN_POSITIVE);
    report.record("norm_star", rel_star);
    if rel_star > slack {
        return Err(fail(format!("|x*|_1 differs from |x|_1 by {rel_star:.3e}")));
    }

    let px = pi_times_v(x, cov).map_err(|e| fail(e.to_string()))?;
    let py = pi_times_v(y, cov).map_err(|e| fail(e.to_string()))?;
    let pxy = pi_times_v(&xy, cov).map_err(|e| fail(e.to_string()))?;
    let mult = frob_dist(&pxy, &(&px * &py)) / (frob(&px) * frob(&py)).max(1.0);
    report.record("pi_v_multiplicative", mult);
    let star = frob_dist(&pi_times_v(&x.star(), cov).map_err(|e| fail(e.to_string()))?, &px.adjoint())
        / frob(&px).max(1.0);
    report.record("pi_v_star", star);
    let excess = (op_norm(&px) - x.l1_norm()) / x.l1_norm().max(f64::MIN_POSITIVE);
    report.record("contractivity_excess", excess.max(0.0));
    if mult > cfg.tol || star > cfg.tol {
        return Err(fail(format!("pi x v residuals {mult:.3e}, {star:.3e}")));
    }
    if excess > slack {
        return Err(fail(format!("|(pi x v)(x)| exceeds |x|_1 by {excess:.3e}")));
    }
    report.checks += 8;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_count_is_rejected() {
        assert!(run_suite(SuiteFamily::Section2, 0, 1, &Config::default()).is_err());
    }

    #[test]
    fn small_runs_pass() {
        let cfg = Config::default();
        for fam in [SuiteFamily::Section2, SuiteFamily::Section3, SuiteFamily::LAlgebra] {
            let r = run_suite(fam, 6, 3, &cfg).unwrap();
            assert!(r.passed(), "{fam}: {:?}", r.violations);
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = Config::default();
        let a = run_suite(SuiteFamily::LAlgebra, 4, 9, &cfg).unwrap();
        let b = run_suite(SuiteFamily::LAlgebra, 4, 9, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn family_names() {
        for f in ["section2", "section3", "l-algebra"] {
            assert_eq!(f.parse::<SuiteFamily>().unwrap().to_string(), f);
        }
        assert!("section4".parse::<SuiteFamily>().is_err());
    }
}

//! Execution of resolved directives and comparison with `expect` maps.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value as Json};

use super::build::{Directive, SCovRef, Task};
use super::parse::{Entry, Value};
use super::Status;
use crate::config::Config;
use crate::covariant::{
    check_product_calculus, pair_semigroup_action, rotation_counterexample, validate_covrep_partial,
    validate_semigroup_covrep, CovError, MatrixOracle, SemigroupCovRep,
};
use crate::crossed::{
    induce_covrep, random_semilattice_action, realize_crossed_product, verify_main_theorem,
    verify_scalar_crossed_product, verify_semilattice_crossed_product, verify_semilattice_idempotent_decomposition,
    CrossedError,
};
use crate::cstar::{CstarError, PautoOracle};
use crate::linalg::{amplify, frob_dist, CMat};
use crate::partial_action::{
    check_translation_identities, composite_domain_range, generate_paut_semigroup, validate_partial_action,
    validate_reformulated, PartialActionError,
};
use crate::semigroup::{generate_closure, isomorphic, min_group_congruence, SemigroupError};
use crate::suites::{check_l_algebra, check_l_triple, run_suite, SuiteFamily, SuiteReport};

/// A directive that did not pass: a verification failure, or an error that
/// kept the check from running (closure bound exceeded).
struct Failure {
    status: Status,
    message: String,
    details: Json,
}

impl Failure {
    fn fail(message: impl Into<String>) -> Self {
        Failure { status: Status::Fail, message: message.into(), details: Json::Null }
    }
}

fn semigroup_status(e: &SemigroupError) -> Status {
    match e {
        SemigroupError::BoundExceeded(_) | SemigroupError::TooLarge(_) => Status::Error,
        _ => Status::Fail,
    }
}

fn cov_status(e: &CovError) -> Status {
    match e {
        CovError::Semigroup(s) | CovError::PartialAction(PartialActionError::Semigroup(s)) => semigroup_status(s),
        _ => Status::Fail,
    }
}

macro_rules! failure_from {
    ($ty:ty, $status:expr) => {
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                let status: fn(&$ty) -> Status = $status;
                Failure { status: status(&e), message: e.to_string(), details: Json::Null }
            }
        }
    };
}

failure_from!(SemigroupError, semigroup_status);
failure_from!(CovError, cov_status);
failure_from!(CstarError, |_| Status::Fail);
failure_from!(PartialActionError, |e| match e {
    PartialActionError::Semigroup(s) => semigroup_status(s),
    _ => Status::Fail,
});
failure_from!(CrossedError, |e| match e {
    CrossedError::Semigroup(s) => semigroup_status(s),
    CrossedError::Cov(c) => cov_status(c),
    _ => Status::Fail,
});

type Out = Result<Json, Failure>;

fn to_json<T: serde::Serialize>(x: &T) -> Json {
    serde_json::to_value(x).expect("reports serialize")
}

/// Adds the entries of `extra` to the object `base`.
fn merge(mut base: Json, extra: Json) -> Json {
    if let (Json::Object(b), Json::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

pub(super) fn run(d: &Directive, cfg: &Config) -> (Status, Json, Option<String>) {
    let out = match &d.task {
        Task::Semigroup(s) => semigroup(s),
        Task::Section2 { pa, max_len } => section2(pa, *max_len, cfg),
        Task::Section3 { cov, max_len } => section3(cov, *max_len, cfg),
        Task::Suite { family, count } => suite(*family, *count, cfg),
        Task::Rotation { angle } => rotation(*angle),
        Task::Pair(cov) => pair(cov, cfg),
        Task::RoundTrip { cov, amplify } => round_trip(cov, amplify, cfg),
        Task::Semilattice { covs, random } => semilattice(covs, *random, cfg),
        Task::Scalar(s) => verify_scalar_crossed_product(s, cfg)
            .map_err(Failure::from)
            .map(|r| merge(json!({ "blocks": r.crossed.blocks, "dimension": r.crossed.dimension }), to_json(&r))),
        Task::Decomposition(s) => verify_semilattice_idempotent_decomposition(s, cfg)
            .map_err(Failure::from)
            .map(|r| merge(json!({ "blocks": r.crossed.blocks, "dimension": r.crossed.dimension }), to_json(&r))),
        Task::Main { cov, alternates } => verify_main_theorem(&cov.cov, alternates, cov.mode, cfg)
            .map_err(Failure::from)
            .map(|(_, r)| {
                merge(json!({ "blocks": r.crossed.blocks, "dimension": r.crossed.dimension }), to_json(&r))
            }),
        Task::LAlgebra { parent, cov, elements, count } => l_algebra(parent, cov, elements, *count, cfg),
        Task::Crossed { cov, faithful } => crossed(cov, *faithful, cfg),
    };
    match out {
        Ok(details) => match check_expectations(&details, &d.expect) {
            Ok(()) => (Status::Pass, details, None),
            Err(m) => (Status::Fail, details, Some(m)),
        },
        Err(f) => (f.status, f.details, Some(f.message)),
    }
}

fn semigroup(s: &crate::semigroup::FiniteInverseSemigroup) -> Out {
    let sigma = min_group_congruence(s)?;
    Ok(json!({
        "order": s.order(),
        "idempotents": s.idempotents().len(),
        "is_semilattice": s.is_semilattice(),
        "is_group": s.is_group(),
        "has_zero": s.zero().is_some(),
        "group_quotient_order": sigma.quotient.order(),
    }))
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

fn section2(pa: &crate::partial_action::PartialAction, max_len: usize, cfg: &Config) -> Out {
    let cert = validate_partial_action(pa, cfg.tol)?;
    validate_reformulated(pa, cfg.tol)?;
    let support = pa.support();
    let all = words(&support, max_len);
    for w in &all {
        composite_domain_range(pa, w)?;
    }
    let mut translations = 0;
    for &t in &support {
        for s in words(&support, max_len.min(2)) {
            check_translation_identities(pa, t, &s)?;
            translations += 1;
        }
    }
    let paut = generate_paut_semigroup(pa, cfg)?;
    Ok(merge(
        to_json(&cert),
        json!({
            "words_checked": all.len(),
            "translations_checked": translations,
            "paut_order": paut.order(),
            "paut_idempotents": paut.semigroup.idempotents().len(),
            "paut_has_zero": paut.zero().is_some(),
            "paut_contains_empty_map": paut.elements.iter().any(|a| a.is_zero()),
        }),
    ))
}

fn section3(cov: &super::build::CovRef, max_len: usize, cfg: &Config) -> Out {
    let cert = validate_covrep_partial(&cov.cov, cov.mode, cfg.tol)?;
    let calc = check_product_calculus(&cov.cov, max_len, cfg.tol)?;
    Ok(merge(to_json(&cert), to_json(&calc)))
}

fn suite(family: SuiteFamily, count: u64, cfg: &Config) -> Out {
    let r = run_suite(family, count, cfg.seed, cfg).map_err(Failure::fail)?;
    let details = json!({
        "count": r.count,
        "checks": r.checks,
        "violations": r.violations.len(),
        "max_residuals": r.max_residuals,
    });
    match r.violations.first() {
        None => Ok(details),
        Some(v) => Err(Failure {
            status: Status::Fail,
            message: format!("instance {} (seed {}): {} [{}]", v.index, v.seed, v.message, v.instance),
            details,
        }),
    }
}

fn rotation(angle: f64) -> Out {
    let r = rotation_counterexample(angle)?;
    let mut residuals = Map::new();
    for (n, x) in &r.residuals {
        residuals.insert(n.clone(), json!(x));
    }
    let uv2 = r.residual("(UV)^2").unwrap_or(0.0);
    let details = json!({
        "angle": r.angle,
        "residuals": residuals,
        "uv_squared_residual": uv2,
        "max_commutator": r.max_commutator,
        "closed_form_error": r.closed_form_error,
    });
    let exact = 1e-12;
    for n in ["U", "V", "U^2", "V^2", "UV", "VU"] {
        let x = r.residual(n).unwrap_or(f64::INFINITY);
        if x > exact {
            return Err(Failure { details, ..Failure::fail(format!("{n} has partial isometry residual {x:.3e}")) });
        }
    }
    if r.max_commutator > exact || r.closed_form_error > exact {
        return Err(Failure { details, ..Failure::fail("projections do not commute or closed forms disagree") });
    }
    if uv2 <= 1e-3 {
        return Err(Failure { details, ..Failure::fail(format!("(UV)^2 residual {uv2:.3e} is not above 1e-3")) });
    }
    Ok(details)
}

/// The pair semigroup next to the semigroups generated by each coordinate,
/// with both coordinate projections checked to be surjective homomorphisms.
fn pair(cov: &super::build::CovRef, cfg: &Config) -> Out {
    let c = &cov.cov;
    let pa = c.action();
    let pair = pair_semigroup_action(c, cov.mode, cfg)?;
    let paut = generate_paut_semigroup(pa, cfg)?;
    let moracle = MatrixOracle { dim: c.rep().h_dim(), tol: cfg.tol };
    let ugens: Vec<CMat> = pa.support().into_iter().map(|g| c.u(g)).collect();
    let ucl = generate_closure(&moracle, &ugens, cfg.bound)?;
    let poracle = PautoOracle { algebra: pa.algebra().clone(), tol: cfg.tol };

    let n = pair.order();
    let mut first = Vec::with_capacity(n);
    let mut second = Vec::with_capacity(n);
    for el in &pair.closure.elements {
        first.push(paut.index_of(&poracle, &el.alpha).ok_or_else(|| Failure::fail("alpha coordinate escapes"))?);
        second.push(ucl.index_of(&moracle, &el.u).ok_or_else(|| Failure::fail("u coordinate escapes"))?);
    }
    let ps = &pair.closure.semigroup;
    for a in 0..n {
        for b in 0..n {
            let ab = ps.mul(a, b);
            if first[ab] != paut.semigroup.mul(first[a], first[b]) || second[ab] != ucl.semigroup.mul(second[a], second[b]) {
                return Err(Failure::fail(format!("coordinate projection is not multiplicative at ({a},{b})")));
            }
        }
    }
    let onto = |proj: &[usize], m: usize| (0..m).all(|i| proj.contains(&i));
    if !onto(&first, paut.order()) || !onto(&second, ucl.order()) {
        return Err(Failure::fail("coordinate projection is not surjective"));
    }
    // an existing generator index for every support element
    for g in pa.support() {
        pair.generator(g)?;
    }
    Ok(json!({
        "pair_order": n,
        "pair_idempotents": ps.idempotents().len(),
        "pair_has_zero": ps.zero().is_some(),
        "paut_order": paut.order(),
        "paut_idempotents": paut.semigroup.idempotents().len(),
        "paut_is_semilattice": paut.semigroup.is_semilattice(),
        "u_order": ucl.order(),
        "u_idempotents": ucl.semigroup.idempotents().len(),
        "u_is_group": ucl.semigroup.is_group(),
        "pair_iso_paut": isomorphic(ps, &paut.semigroup),
        "pair_iso_u": isomorphic(ps, &ucl.semigroup),
    }))
}

/// `π(1_{E_s})v_s`, which is `v_s` itself for strict representations.
fn normalized(z: &SemigroupCovRep) -> Vec<CMat> {
    let act = z.action();
    (0..act.order()).map(|s| z.rep().projection(act.ideal(s)) * z.v(s)).collect()
}

/// Realize, induce back through the identity (and through `k`-fold
/// amplification), and realize again. Induction returns the normalized
/// family, so that is what the result is compared with.
fn round_trip(cov: &SCovRef, factors: &[usize], cfg: &Config) -> Out {
    let base = &cov.cov;
    validate_semigroup_covrep(base, cov.mode, cfg.tol)?;
    let base_real = realize_crossed_product(base, cfg)?;
    let lax_excess =
        normalized(base).iter().zip(base.family()).map(|(n, v)| frob_dist(n, v)).fold(0.0, f64::max);
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &k in factors {
        let z = base.amplified(k);
        let target = normalized(&z);
        let real = realize_crossed_product(&z, cfg)?;
        let back = induce_covrep(&real, &z, &|m: &CMat| m.clone(), cov.mode, cfg.tol)?;
        let v_res = (0..z.action().order()).map(|s| frob_dist(back.v(s), &target[s])).fold(0.0, f64::max);
        let again = realize_crossed_product(&back, cfg)?;
        let img_res = again
            .images()
            .iter()
            .zip(real.images())
            .map(|(a, b)| frob_dist(a, &b))
            .fold(0.0, f64::max);
        let amp = induce_covrep(&base_real, base, &|m: &CMat| amplify(m, k), cov.mode, cfg.tol)?;
        let amp_res = (0..z.action().order()).map(|s| frob_dist(amp.v(s), &target[s])).fold(0.0, f64::max);
        worst = worst.max(v_res).max(img_res).max(amp_res);
        rows.push(json!({
            "factor": k,
            "dimension": real.span.dimension(),
            "v_residual": v_res,
            "image_residual": img_res,
            "amplified_residual": amp_res,
        }));
    }
    let details = json!({ "factors": rows, "max_residual": worst, "normalization_defect": lax_excess });
    if worst > cfg.tol {
        return Err(Failure { details, ..Failure::fail(format!("round trip residual {worst:.3e}")) });
    }
    Ok(details)
}

fn semilattice(covs: &[SCovRef], random: usize, cfg: &Config) -> Out {
    let mut reports = Vec::new();
    for c in covs {
        validate_semigroup_covrep(&c.cov, c.mode, cfg.tol)?;
        reports.push(to_json(&verify_semilattice_crossed_product(&c.cov, cfg)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_order = 0;
    for i in 0..random {
        let c = random_semilattice_action(&mut rng);
        let r = verify_semilattice_crossed_product(&c, cfg)
            .map_err(|e| Failure::fail(format!("random instance {i}: {e}")))?;
        max_order = max_order.max(r.order);
    }
    let mut details = json!({ "explicit": reports.len(), "random": random, "max_random_order": max_order });
    if let [only] = reports.as_slice() {
        details = merge(details, only.clone());
    } else if !reports.is_empty() {
        details = merge(details, json!({ "reports": reports }));
    }
    Ok(details)
}

fn l_algebra(
    parent: &Arc<crate::covariant::SemigroupAction>,
    cov: &crate::covariant::SemigroupCovRep,
    elements: &[crate::crossed::LElement],
    count: usize,
    cfg: &Config,
) -> Out {
    let mut report = SuiteReport::new(SuiteFamily::LAlgebra, count as u64, cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in 0..count {
        check_l_algebra(parent, cov, &mut rng, cfg, &mut report)
            .map_err(|m| Failure::fail(format!("random triple {i}: {m}")))?;
    }
    for x in elements {
        for y in elements {
            for z in elements {
                check_l_triple(x, y, z, cov, cfg, &mut report).map_err(Failure::fail)?;
            }
        }
    }
    Ok(json!({
        "random_triples": count,
        "explicit_elements": elements.len(),
        "checks": report.checks,
        "max_residuals": report.max_residuals,
    }))
}

fn crossed(cov: &SCovRef, faithful: bool, cfg: &Config) -> Out {
    let cert = validate_semigroup_covrep(&cov.cov, cov.mode, cfg.tol)?;
    let real = realize_crossed_product(&cov.cov, cfg)?;
    Ok(json!({
        "faithful": faithful,
        "order": cov.cov.action().order(),
        "h_dim": cov.cov.rep().h_dim(),
        "generators": real.generators.len(),
        "dimension": real.span.dimension(),
        "blocks": real.report.blocks,
        "center_dim": real.report.center_dim,
        "max_order_collapse": real.max_order_collapse,
        "max_covariance": cert.max_covariance,
    }))
}

fn scenario_json(v: &Value) -> Json {
    match v {
        Value::Number(x) => json!(x),
        Value::Complex(re, im) => json!([re, im]),
        Value::Str(s) | Value::Ident(s) => json!(s),
        Value::Bool(b) => json!(b),
        Value::List(items) => Json::Array(items.iter().map(scenario_json).collect()),
        Value::Map(entries) => Json::Object(entries.iter().map(|e| (e.key.clone(), scenario_json(&e.value))).collect()),
    }
}

fn same(actual: &Json, expected: &Json) -> bool {
    match (actual, expected) {
        (Json::Number(a), Json::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap_or(f64::NAN), b.as_f64().unwrap_or(f64::NAN));
            a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
        }
        (Json::Array(a), Json::Array(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| same(x, y)),
        (Json::Object(a), Json::Object(b)) => b.iter().all(|(k, y)| a.get(k).is_some_and(|x| same(x, y))),
        _ => actual == expected,
    }
}

/// `expect` keys are dotted paths into the details; a trailing `.max` or
/// `.min` turns equality into a bound.
fn check_expectations(details: &Json, expect: &[Entry]) -> Result<(), String> {
    let mut problems = Vec::new();
    for e in expect {
        let mut path: Vec<&str> = e.key.split('.').collect();
        let bound = match path.last() {
            Some(&"max") | Some(&"min") if path.len() > 1 => path.pop(),
            _ => None,
        };
        let mut cur = Some(details);
        for seg in &path {
            cur = cur.and_then(|c| match c {
                Json::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get(i)),
                _ => c.get(seg),
            });
        }
        let want = scenario_json(&e.value);
        let Some(actual) = cur else {
            problems.push(format!("`{}` is not reported", e.key));
            continue;
        };
        let ok = match bound {
            None => same(actual, &want),
            Some(b) => match (actual.as_f64(), want.as_f64()) {
                (Some(x), Some(y)) => if b == "max" { x <= y } else { x >= y },
                _ => false,
            },
        };
        if !ok {
            problems.push(format!("`{}` is {actual}, expected {want}", e.key));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(key: &str, value: Value) -> Entry {
        Entry { key: key.into(), value, line: 1 }
    }

    #[test]
    fn expectation_paths_and_bounds() {
        let d = json!({ "blocks": [2], "r": 1e-14, "nested": { "n": 3 }, "list": [{ "x": 1 }] });
        let ok = vec![
            entry("blocks", Value::List(vec![Value::Number(2.0)])),
            entry("r.max", Value::Number(1e-12)),
            entry("nested.n", Value::Number(3.0)),
            entry("list.0.x", Value::Number(1.0)),
        ];
        assert!(check_expectations(&d, &ok).is_ok());
        assert!(check_expectations(&d, &[entry("r.min", Value::Number(1e-3))]).is_err());
        assert!(check_expectations(&d, &[entry("missing", Value::Bool(true))]).is_err());
        assert!(check_expectations(&d, &[entry("blocks", Value::List(vec![]))]).is_err());
    }
}

use serde::Serialize;

use super::{CovError, CovariantRep};
use crate::linalg::{commutator, eye, frob, frob_dist, partial_isometry_residual, real, CMat};

/// Largest residuals over all words checked.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CalculusReport {
    pub words_checked: usize,
    pub max_partial_isometry: f64,
    pub max_final_projection: f64,
    pub max_initial_projection: f64,
    pub max_collapse: f64,
}

fn words(alphabet: &[i64], max_len: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for &a in alphabet {
                let mut w2 = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// For every word `g_1⋯g_n` over the support with `1 ≤ n ≤ max_len`, with
/// `W = u_{g_1}⋯u_{g_n}`:
/// `W` is a partial isometry, `WW* = π(p_{g_1} p_{g_1g_2} ⋯ p_{g_1⋯g_n})`,
/// `W*W = π(p_{g_n⁻¹} ⋯ p_{g_n⁻¹⋯g_1⁻¹})`, and `u_{g_1⋯g_n} = W` on the
/// initial space and after the final projection.
pub fn check_product_calculus(cov: &CovariantRep, max_len: usize, tol: f64) -> Result<CalculusReport, CovError> {
    let pa = cov.action();
    let g = pa.group();
    let rep = cov.rep();
    let h = rep.h_dim();
    let mut report = CalculusReport::default();
    let fail = |word: &[i64], check: &str, residual: f64| CovError::CalculusViolated {
        word: word.to_vec(),
        check: check.into(),
        residual,
    };

    let r = frob_dist(&cov.u(g.identity()), &eye(h));
    if r > tol {
        return Err(fail(&[g.identity()], "u_e = 1", r));
    }

    let support = pa.support();
    for word in words(&support, max_len) {
        let mut w = eye(h);
        for &x in &word {
            w = w * cov.u(x);
        }
        let r = partial_isometry_residual(&w);
        report.max_partial_isometry = report.max_partial_isometry.max(r);
        if r > tol {
            return Err(fail(&word, "partial isometry", r));
        }

        let full = pa.algebra().full();
        let (mut range, mut prefix) = (full, g.identity());
        for &x in &word {
            prefix = g.product(prefix, x);
            range = range.meet(pa.domain(prefix));
        }
        let (mut domain, mut suffix) = (full, g.identity());
        for &x in word.iter().rev() {
            suffix = g.product(suffix, g.inverse(x));
            domain = domain.meet(pa.domain(suffix));
        }
        let p_fin = rep.projection(range);
        let p_init = rep.projection(domain);

        let r = frob_dist(&(&w * w.adjoint()), &p_fin);
        report.max_final_projection = report.max_final_projection.max(r);
        if r > tol {
            return Err(fail(&word, "final projection", r));
        }
        let r = frob_dist(&(w.adjoint() * &w), &p_init);
        report.max_initial_projection = report.max_initial_projection.max(r);
        if r > tol {
            return Err(fail(&word, "initial projection", r));
        }

        let u_prod = cov.u(prefix);
        let r1 = frob_dist(&(&u_prod * &p_init), &(&w * &p_init));
        let r2 = frob_dist(&(&p_fin * &u_prod), &(&p_fin * &w));
        let r = r1.max(r2);
        report.max_collapse = report.max_collapse.max(r);
        if r > tol {
            return Err(fail(&word, "collapse", r));
        }
        report.words_checked += 1;
    }
    Ok(report)
}

/// Residuals of the two rotation partial isometries on `ℂ³`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationReport {
    pub angle: f64,
    /// `‖XX*X − X‖` for `U, V, U², V², UV, VU, (UV)²` in that order.
    pub residuals: Vec<(String, f64)>,
    /// Largest `‖[P, Q]‖` over the initial and final projections of `U`, `V`.
    pub max_commutator: f64,
    /// Distance of `(UV)²` and of `WW*W` from their closed forms.
    pub closed_form_error: f64,
}

impl RotationReport {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|(n, _)| n == name).map(|(_, r)| *r)
    }
}

/// `U` rotates the first two coordinates and kills the third, `V` rotates the
/// last two and kills the first. All of `U, V, U², V², UV, VU` are partial
/// isometries with commuting projections, while `(UV)²` is not.
pub fn rotation_counterexample(angle: f64) -> Result<RotationReport, CovError> {
    if !(angle > 0.0 && angle < std::f64::consts::FRAC_PI_2) {
        return Err(CovError::AngleOutOfRange(angle));
    }
    let (s, c) = angle.sin_cos();
    let u = real(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 0.0]);
    let v = real(3, 3, &[0.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c]);
    let uv = &u * &v;
    let w = &uv * &uv;
    let named: Vec<(&str, CMat)> = vec![
        ("U", u.clone()),
        ("V", v.clone()),
        ("U^2", &u * &u),
        ("V^2", &v * &v),
        ("UV", uv.clone()),
        ("VU", &v * &u),
        ("(UV)^2", w.clone()),
    ];
    let residuals = named
        .iter()
        .map(|(n, x)| (n.to_string(), partial_isometry_residual(x)))
        .collect();

    let projections = [u.adjoint() * &u, &u * u.adjoint(), v.adjoint() * &v, &v * v.adjoint()];
    let mut max_commutator: f64 = 0.0;
    for p in &projections {
        for q in &projections {
            max_commutator = max_commutator.max(frob(&commutator(p, q)));
        }
    }

    let (c2, c3, c4) = (c * c, c.powi(3), c.powi(4));
    let w_closed = real(3, 3, &[0.0, -s * c3, s * s * c2, 0.0, c4, -s * c3, 0.0, 0.0, 0.0]);
    let (c6, c7, c8) = (c.powi(6), c.powi(7), c.powi(8));
    let www_closed = real(3, 3, &[0.0, -s * c7, s * s * c6, 0.0, c8, -s * c7, 0.0, 0.0, 0.0]);
    let www = &w * w.adjoint() * &w;
    let closed_form_error = frob_dist(&w, &w_closed).max(frob_dist(&www, &www_closed));

    Ok(RotationReport { angle, residuals, max_commutator, closed_form_error })
}

#[cfg(test)]
mod tests {
    use super::super::tests::shift_covrep;
    use super::*;
    use crate::linalg::{real, zeros};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn quarter_turn() {
        let r = rotation_counterexample(FRAC_PI_4).unwrap();
        for name in ["U", "V", "U^2", "V^2", "UV", "VU"] {
            assert!(r.residual(name).unwrap() <= 1e-12, "{name}");
        }
        assert!(r.residual("(UV)^2").unwrap() > 1e-3);
        assert!(r.max_commutator <= 1e-12);
        assert!(r.closed_form_error <= 1e-12);
    }

    #[test]
    fn small_angle_limit() {
        let r = rotation_counterexample(1e-4).unwrap();
        assert!(r.residual("(UV)^2").unwrap() < 1e-7);
    }

    #[test]
    fn angle_range() {
        assert!(rotation_counterexample(0.0).is_err());
        assert!(rotation_counterexample(std::f64::consts::FRAC_PI_2).is_err());
        assert!(rotation_counterexample(f64::NAN).is_err());
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(words(&[1, 2], 2).len(), 6);
        assert_eq!(words(&[1, 2, 3], 3).len(), 39);
    }

    #[test]
    fn shift_words() {
        let cov = shift_covrep();
        let report = check_product_calculus(&cov, 3, 1e-9).unwrap();
        assert_eq!(report.words_checked, 3 + 9 + 27);
        // shift · backshift = diag(0, 1)
        let w = cov.u(1) * cov.u(-1);
        assert_eq!(&w * w.adjoint(), real(2, 2, &[0.0, 0.0, 0.0, 1.0]));
        assert_eq!(cov.u(1) * cov.u(1), zeros(2));
    }
}

use super::{CrossedError, LElement};
use crate::config::{Config, Mode};
use crate::covariant::{validate_semigroup_covrep, CovError, HilbertRep, SemigroupCovRep};
use crate::cstar::{span_closure, structure_report, Element, MatrixAlgebraSpan, MatrixUnit, StructureReport};
use crate::linalg::{c, eye, frob, frob_dist, hs_inner, zeros, CMat};

/// `(π × v)(x) = Σ_s π(x(s)) v_s`.
pub fn pi_times_v(x: &LElement, cov: &SemigroupCovRep) -> Result<CMat, CrossedError> {
    let act = cov.action();
    let parent = x.parent();
    if parent.semigroup() != act.semigroup() || parent.algebra() != act.algebra() {
        return Err(CrossedError::CovrepMismatch);
    }
    let rep = cov.rep();
    let mut out = zeros(rep.h_dim());
    for (&s, a) in x.terms() {
        out += rep.pi(a) * cov.v(s);
    }
    Ok(out)
}

/// `C*(π, v)` as a concrete matrix algebra.
#[derive(Clone, Debug)]
pub struct CrossedProductRealization {
    /// `(s, E, π(E) v_s)` for every matrix unit `E` of `E_s`.
    pub generators: Vec<(usize, MatrixUnit, CMat)>,
    pub span: MatrixAlgebraSpan,
    pub report: StructureReport,
    /// Largest `‖π(a)v_s − π(a)v_t‖` over `s ≤ t` and matrix units `a` of `E_s`.
    pub max_order_collapse: f64,
}

impl CrossedProductRealization {
    pub fn images(&self) -> Vec<CMat> {
        self.generators.iter().map(|(_, _, m)| m.clone()).collect()
    }
}

/// Spans `{π(a)v_s : a ∈ E_s}` (matrix units of each `E_s`), computes its
/// structure and checks that `aδ_s` and `aδ_t` have the same image when
/// `s ≤ t`.
pub fn realize_crossed_product(cov: &SemigroupCovRep, cfg: &Config) -> Result<CrossedProductRealization, CrossedError> {
    let act = cov.action();
    let sg = act.semigroup();
    let rep = cov.rep();
    let alg = act.algebra();
    let mut generators = Vec::new();
    for s in 0..act.order() {
        for unit in alg.matrix_units(act.ideal(s)) {
            let img = rep.unit_image(unit) * cov.v(s);
            generators.push((s, unit, img));
        }
    }
    let mut max_order_collapse: f64 = 0.0;
    for (s, unit, img) in &generators {
        for t in 0..act.order() {
            if t != *s && sg.leq(*s, t) {
                let r = frob_dist(img, &(rep.unit_image(*unit) * cov.v(t)));
                max_order_collapse = max_order_collapse.max(r);
                if r > cfg.tol {
                    return Err(CrossedError::OrderCollapse { s: *s, t, residual: r });
                }
            }
        }
    }
    let images: Vec<CMat> = generators.iter().map(|(_, _, m)| m.clone()).collect();
    let span = span_closure(&images, rep.h_dim(), cfg)?;
    let report = structure_report(&span, cfg)?;
    Ok(CrossedProductRealization { generators, span, report, max_order_collapse })
}

/// The linear map determined by `X_i ↦ Y_i`, defined on the span of the
/// `X_i` through a maximal independent subfamily.
#[derive(Clone, Debug)]
pub struct LinearExtension {
    source: Vec<CMat>,
    target: Vec<CMat>,
    pinv: CMat,
    /// Largest `‖Θ(X_i) − Y_i‖` over the whole family.
    pub well_defined_residual: f64,
}

fn vectorize(ms: &[CMat]) -> CMat {
    let d = ms.first().map_or(0, |m| m.len());
    CMat::from_fn(d, ms.len(), |i, j| ms[j][i])
}

impl LinearExtension {
    pub fn new(pairs: &[(CMat, CMat)], drop_tol: f64) -> Result<Self, CrossedError> {
        let mut ortho: Vec<CMat> = Vec::new();
        let (mut source, mut target) = (Vec::new(), Vec::new());
        for (x, y) in pairs {
            let mut w = x.clone();
            for _ in 0..2 {
                for q in &ortho {
                    let z = hs_inner(q, &w);
                    w -= q * z;
                }
            }
            let r = frob(&w);
            if r > drop_tol * frob(x).max(1.0) {
                ortho.push(w / c(r, 0.0));
                source.push(x.clone());
                target.push(y.clone());
            }
        }
        let pinv = if source.is_empty() {
            CMat::zeros(0, 0)
        } else {
            vectorize(&source)
                .pseudo_inverse(drop_tol)
                .map_err(|e| CrossedError::NotStarHomomorphism(e.to_string()))?
        };
        let mut ext = LinearExtension { source, target, pinv, well_defined_residual: 0.0 };
        for (x, y) in pairs {
            let r = frob_dist(&ext.apply(x), y);
            ext.well_defined_residual = ext.well_defined_residual.max(r);
        }
        Ok(ext)
    }

    pub fn rank(&self) -> usize {
        self.source.len()
    }

    pub fn apply(&self, m: &CMat) -> CMat {
        let Some(first) = self.target.first() else {
            return m * c(0.0, 0.0);
        };
        let v = CMat::from_column_slice(m.len(), 1, m.as_slice());
        let coeffs = &self.pinv * v;
        let mut out = CMat::zeros(first.nrows(), first.ncols());
        for (k, y) in self.target.iter().enumerate() {
            out += y * coeffs[(k, 0)];
        }
        out
    }

    /// Largest failure of `Θ(ab) = Θ(a)Θ(b)` and `Θ(a*) = Θ(a)*` over the
    /// given family (which must span a *-algebra).
    pub fn homomorphism_residual(&self, family: &[CMat]) -> f64 {
        let images: Vec<CMat> = family.iter().map(|x| self.apply(x)).collect();
        let mut worst: f64 = 0.0;
        for (i, a) in family.iter().enumerate() {
            worst = worst.max(frob_dist(&self.apply(&a.adjoint()), &images[i].adjoint()));
            for (j, b) in family.iter().enumerate() {
                worst = worst.max(frob_dist(&self.apply(&(a * b)), &(&images[i] * &images[j])));
            }
        }
        worst
    }
}

/// The covariant representation behind a representation `Π` of the
/// realization on `ℂ^k`: `π'(a) = Π(π(a)v_e)`, `v'_s = Π(π(1_{E_s})v_s)`.
///
/// `Π` is checked to be a *-homomorphism on the generators and to send the
/// unit to the identity.
pub fn induce_covrep(
    real: &CrossedProductRealization,
    cov: &SemigroupCovRep,
    big_pi: &dyn Fn(&CMat) -> CMat,
    mode: Mode,
    tol: f64,
) -> Result<SemigroupCovRep, CrossedError> {
    let act = cov.action();
    let rep = cov.rep();
    let alg = act.algebra();
    let e = act.semigroup().unit().ok_or(CovError::MissingUnit)?;

    let images = real.images();
    let pi_images: Vec<CMat> = images.iter().map(big_pi).collect();
    for (i, a) in images.iter().enumerate() {
        let r = frob_dist(&big_pi(&a.adjoint()), &pi_images[i].adjoint());
        if r > tol {
            return Err(CrossedError::NotStarHomomorphism(format!("adjoint of generator {i} (residual {r:.3e})")));
        }
        for (j, b) in images.iter().enumerate() {
            let r = frob_dist(&big_pi(&(a * b)), &(&pi_images[i] * &pi_images[j]));
            if r > tol {
                return Err(CrossedError::NotStarHomomorphism(format!(
                    "product of generators {i}, {j} (residual {r:.3e})"
                )));
            }
        }
    }
    let one = big_pi(&eye(rep.h_dim()));
    let k = one.nrows();
    if frob_dist(&one, &eye(k)) > tol {
        return Err(CrossedError::NotNondegenerate);
    }

    let units: Vec<Vec<CMat>> = (0..alg.num_blocks())
        .map(|b| {
            let n = alg.block_dim(b);
            (0..n * n)
                .map(|jk| big_pi(&(rep.unit_image(MatrixUnit { block: b, row: jk / n, col: jk % n }) * cov.v(e))))
                .collect()
        })
        .collect();
    let new_rep = HilbertRep::from_unit_images(alg, units, tol).map_err(|err| match err {
        CovError::NotNondegenerate => CrossedError::NotNondegenerate,
        other => other.into(),
    })?;
    let v = (0..act.order())
        .map(|s| big_pi(&(rep.pi(&Element::unit_of(alg, act.ideal(s))) * cov.v(s))))
        .collect();
    let out = SemigroupCovRep::new(act, &new_rep, v)?;
    validate_semigroup_covrep(&out, mode, tol)?;
    Ok(out)
}

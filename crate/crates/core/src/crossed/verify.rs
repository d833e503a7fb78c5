use rand::Rng;
use serde::Serialize;

use super::{realize_crossed_product, CrossedError, LinearExtension};
use crate::config::{Config, Mode};
use crate::covariant::{
    pair_semigroup_action, restrict_action_covrep, validate_semigroup_action, validate_semigroup_covrep, CovariantRep,
    HilbertRep, PairSemigroup, SemigroupAction, SemigroupCovRep,
};
use crate::cstar::{
    algebra_equal, span_closure, structure_report, BlockAlgebra, BlockSet, Element, MatrixAlgebraSpan,
    PartialAutomorphism, StructureReport,
};
use crate::linalg::{frob_dist, zeros, CMat, ONE};
use crate::semigroup::{min_group_congruence, FiniteInverseSemigroup};

/// `λ_s δ_x = δ_{sx}` when `xx* ≤ s*s`, zero otherwise.
#[derive(Clone, Debug)]
pub struct LeftRegular {
    pub lambdas: Vec<CMat>,
    pub span: MatrixAlgebraSpan,
    pub report: StructureReport,
}

pub fn left_regular(s: &FiniteInverseSemigroup, cfg: &Config) -> Result<LeftRegular, CrossedError> {
    let n = s.order();
    let lambdas: Vec<CMat> = (0..n)
        .map(|a| {
            let dom = s.mul(s.star(a), a);
            let mut m = zeros(n);
            for x in 0..n {
                if s.leq(s.mul(x, s.star(x)), dom) {
                    m[(s.mul(a, x), x)] = ONE;
                }
            }
            m
        })
        .collect();
    let span = span_closure(&lambdas, n, cfg)?;
    let report = structure_report(&span, cfg)?;
    Ok(LeftRegular { lambdas, span, report })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarReport {
    pub order: usize,
    pub group_order: usize,
    pub crossed: StructureReport,
    pub group_algebra: StructureReport,
    /// Largest `‖(π×v)(δ_s) − [s]‖`.
    pub max_generator_residual: f64,
}

/// `ℂ ×_ι S` against the group algebra of `S/σ`, realized through
/// `π(a) = a·1` and `v_s = λ([s])` on `ℓ²(S/σ)`.
pub fn verify_scalar_crossed_product(s: &FiniteInverseSemigroup, cfg: &Config) -> Result<ScalarReport, CrossedError> {
    let alg = BlockAlgebra::diagonal(1)?;
    let n = s.order();
    let act = SemigroupAction::new(s, &alg, vec![PartialAutomorphism::identity(&alg); n])?;
    validate_semigroup_action(&act, cfg.tol)?;

    let sigma = min_group_congruence(s)?;
    let g = &sigma.quotient;
    let k = g.order();
    let regular = |c: usize| {
        let mut m = zeros(k);
        for h in 0..k {
            m[(g.mul(c, h), h)] = ONE;
        }
        m
    };
    let rep = HilbertRep::with_multiplicity(&alg, &[k])?;
    let v: Vec<CMat> = (0..n).map(|x| regular(sigma.class(x))).collect();
    let cov = SemigroupCovRep::new(&act, &rep, v)?;
    validate_semigroup_covrep(&cov, Mode::Strict, cfg.tol)?;
    let real = realize_crossed_product(&cov, cfg)?;

    let group_span = span_closure(&(0..k).map(regular).collect::<Vec<_>>(), k, cfg)?;
    let group_algebra = structure_report(&group_span, cfg)?;
    if !real.report.same_structure(&group_algebra) {
        return Err(CrossedError::StructureMismatch(format!(
            "crossed product blocks {:?}, group algebra blocks {:?}",
            real.report.blocks, group_algebra.blocks
        )));
    }
    let mut max_generator_residual: f64 = 0.0;
    for (x, unit, img) in &real.generators {
        debug_assert_eq!(unit.block, 0);
        max_generator_residual = max_generator_residual.max(frob_dist(img, &regular(sigma.class(*x))));
    }
    if max_generator_residual > cfg.tol {
        return Err(CrossedError::StructureMismatch(format!(
            "generator residual {max_generator_residual:.3e}"
        )));
    }
    Ok(ScalarReport { order: n, group_order: k, crossed: real.report, group_algebra, max_generator_residual })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub order: usize,
    pub idempotents: usize,
    pub crossed: StructureReport,
    pub regular: StructureReport,
    pub max_covariance: f64,
    /// Largest `‖π(δ_{ss*}) v_s − λ_s‖`.
    pub max_generator_residual: f64,
}

/// `C*(E) ×_β S` against `C*(S)`, where `C*(E) ≅ ℂ^E` with `δ_f` the
/// indicator of `{h ≤ f}` and `β_s(δ_f) = δ_{sfs*}`, represented on
/// `ℓ²(S)` by the inclusion and `v_s = λ_s`.
pub fn verify_semilattice_idempotent_decomposition(
    s: &FiniteInverseSemigroup,
    cfg: &Config,
) -> Result<DecompositionReport, CrossedError> {
    let n = s.order();
    let idem = s.idempotents();
    let m = idem.len();
    let pos = |x: usize| idem.iter().position(|&f| f == x).expect("idempotent");

    // C*(E) from its own left regular representation
    let e_table: Vec<Vec<usize>> = idem.iter().map(|&f| idem.iter().map(|&g| pos(s.mul(f, g))).collect()).collect();
    let e_sg = FiniteInverseSemigroup::verify(&e_table)?;
    let e_reg = left_regular(&e_sg, cfg)?;
    if e_reg.report.blocks != vec![1; m] {
        return Err(CrossedError::StructureMismatch(format!(
            "C*(E) has blocks {:?} instead of {m} characters",
            e_reg.report.blocks
        )));
    }

    let alg = BlockAlgebra::diagonal(m)?;
    let below = |f: usize| BlockSet::from_blocks((0..m).filter(|&h| s.leq(idem[h], f)));
    let delta = |f: usize| Element::unit_of(&alg, below(f));

    let mut betas = Vec::with_capacity(n);
    for x in 0..n {
        let xs = s.star(x);
        let dom = s.mul(xs, x);
        let pairs: Vec<(usize, usize)> =
            below(dom).iter().map(|h| (h, pos(s.mul(s.mul(x, idem[h]), xs)))).collect();
        let beta = PartialAutomorphism::from_block_map(&alg, &pairs)?;
        for &f in idem.iter().filter(|&&f| s.leq(f, dom)) {
            let img = beta.apply_restricted(&delta(f));
            if img.distance(&delta(s.mul(s.mul(x, f), xs))) > cfg.tol {
                return Err(CrossedError::ActionIllDefined(x, f));
            }
        }
        betas.push(beta);
    }
    let act = SemigroupAction::new(s, &alg, betas)?;
    validate_semigroup_action(&act, cfg.tol)?;

    let big = left_regular(s, cfg)?;
    // minimal projections by peeling off lower idempotents
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&h| below(idem[h]).len());
    let mut proj: Vec<CMat> = vec![zeros(n); m];
    for &h in &order {
        let mut p = big.lambdas[idem[h]].clone();
        for g in below(idem[h]).iter().filter(|&g| g != h) {
            p -= &proj[g];
        }
        proj[h] = p;
    }
    let units = proj.into_iter().map(|p| vec![p]).collect();
    let rep = HilbertRep::from_unit_images(&alg, units, cfg.tol)?;

    let mut max_covariance: f64 = 0.0;
    for x in 0..n {
        let dom = s.mul(s.star(x), x);
        for &f in idem.iter().filter(|&&f| s.leq(f, dom)) {
            let lhs = &big.lambdas[x] * rep.pi(&delta(f)) * &big.lambdas[s.star(x)];
            let rhs = &big.lambdas[s.mul(s.mul(x, f), s.star(x))];
            max_covariance = max_covariance.max(frob_dist(&lhs, rhs));
        }
    }
    if max_covariance > cfg.tol {
        return Err(CrossedError::StructureMismatch(format!("covariance residual {max_covariance:.3e}")));
    }
    let cov = SemigroupCovRep::new(&act, &rep, big.lambdas.clone())?;
    validate_semigroup_covrep(&cov, Mode::Strict, cfg.tol)?;
    let real = realize_crossed_product(&cov, cfg)?;

    if !algebra_equal(&real.span, &big.span, cfg.tol)? || !real.report.same_structure(&big.report) {
        return Err(CrossedError::StructureMismatch(format!(
            "crossed product blocks {:?}, C*(S) blocks {:?}",
            real.report.blocks, big.report.blocks
        )));
    }
    let mut max_generator_residual: f64 = 0.0;
    for x in 0..n {
        let lhs = rep.pi(&delta(s.mul(x, s.star(x)))) * &big.lambdas[x];
        max_generator_residual = max_generator_residual.max(frob_dist(&lhs, &big.lambdas[x]));
    }
    if max_generator_residual > cfg.tol {
        return Err(CrossedError::StructureMismatch(format!(
            "generator residual {max_generator_residual:.3e}"
        )));
    }
    Ok(DecompositionReport {
        order: n,
        idempotents: m,
        crossed: real.report,
        regular: big.report,
        max_covariance,
        max_generator_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SemilatticeReport {
    pub order: usize,
    pub algebra_dim: usize,
    pub crossed_dim: usize,
    pub blocks: Vec<usize>,
}

/// For a semilattice acting by identities with `v_f = π(p_{E_f})` and `π`
/// faithful, the realization equals `π(A)`.
pub fn verify_semilattice_crossed_product(cov: &SemigroupCovRep, cfg: &Config) -> Result<SemilatticeReport, CrossedError> {
    let act = cov.action();
    let s = act.semigroup();
    if !s.is_semilattice() {
        return Err(CrossedError::StructureMismatch("the semigroup is not a semilattice".into()));
    }
    let rep = cov.rep();
    for f in 0..s.order() {
        let p = rep.projection(act.ideal(f));
        if frob_dist(cov.v(f), &p) > cfg.tol {
            return Err(CrossedError::StructureMismatch(format!("v_{f} is not the ideal projection")));
        }
    }
    let alg = act.algebra();
    let units: Vec<CMat> = alg.matrix_units(alg.full()).into_iter().map(|u| rep.unit_image(u).clone()).collect();
    let pi_a = span_closure(&units, rep.h_dim(), cfg)?;
    if pi_a.dimension() != alg.dimension() {
        return Err(CrossedError::StructureMismatch("pi is not faithful".into()));
    }
    let real = realize_crossed_product(cov, cfg)?;
    if !algebra_equal(&real.span, &pi_a, cfg.tol)? {
        return Err(CrossedError::SpanMismatch(format!(
            "realization has dimension {}, pi(A) has {}",
            real.span.dimension(),
            pi_a.dimension()
        )));
    }
    Ok(SemilatticeReport {
        order: s.order(),
        algebra_dim: alg.dimension(),
        crossed_dim: real.span.dimension(),
        blocks: real.report.blocks,
    })
}

/// A random semilattice of ideals of an algebra with at most three blocks of
/// size at most three (closed under intersection, so at most eight
/// elements), acting by identities, with a faithful `π` and
/// `v_f = π(p_{E_f})`.
pub fn random_semilattice_action<R: Rng + ?Sized>(rng: &mut R) -> SemigroupCovRep {
    let k = rng.random_range(1..=3);
    let dims: Vec<usize> = (0..k).map(|_| rng.random_range(1..=3)).collect();
    let alg = BlockAlgebra::new(dims).expect("nonempty");
    let full = alg.full();
    let mut ideals = vec![full];
    for _ in 0..rng.random_range(0..=3) {
        let e = BlockSet::from_blocks((0..k).filter(|_| rng.random_bool(0.5)));
        if !ideals.contains(&e) {
            ideals.push(e);
        }
    }
    let mut i = 0;
    while i < ideals.len() {
        for j in 0..=i {
            let m = ideals[i].meet(ideals[j]);
            if !ideals.contains(&m) {
                ideals.push(m);
            }
        }
        i += 1;
    }
    let idx = |e: BlockSet| ideals.iter().position(|&x| x == e).unwrap();
    let table: Vec<Vec<usize>> = ideals.iter().map(|a| ideals.iter().map(|b| idx(a.meet(*b))).collect()).collect();
    let s = FiniteInverseSemigroup::verify(&table).expect("a semilattice");
    let beta = ideals.iter().map(|&e| PartialAutomorphism::identity_on(&alg, e)).collect();
    let act = SemigroupAction::new(&s, &alg, beta).expect("sizes agree");
    let mult: Vec<usize> = (0..k).map(|_| rng.random_range(1..=2)).collect();
    let rep = HilbertRep::with_multiplicity(&alg, &mult).expect("positive multiplicities");
    let v = ideals.iter().map(|&e| rep.projection(e)).collect();
    SemigroupCovRep::new(&act, &rep, v).expect("sizes agree")
}

/// A covariant representation `(ρ, z)` of the pair semigroup action.
#[derive(Clone, Debug)]
pub enum Alternate {
    /// `k` copies of `(π, v)`.
    Amplified(usize),
    Explicit(SemigroupCovRep),
}

#[derive(Clone, Debug, Serialize)]
pub struct AlternateReport {
    pub h_dim: usize,
    pub span_dim: usize,
    pub theta_rank: usize,
    pub well_defined_residual: f64,
    pub homomorphism_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainTheoremReport {
    pub pair_order: usize,
    pub group_span_dim: usize,
    pub crossed: StructureReport,
    pub alternates: Vec<AlternateReport>,
}

fn group_span(cov: &CovariantRep, cfg: &Config) -> Result<MatrixAlgebraSpan, CrossedError> {
    let pa = cov.action();
    let rep = cov.rep();
    let mut gens = Vec::new();
    for g in pa.support() {
        let u = cov.u(g);
        for unit in pa.algebra().matrix_units(pa.domain(g)) {
            gens.push(rep.unit_image(unit) * &u);
        }
    }
    Ok(span_closure(&gens, rep.h_dim(), cfg)?)
}

/// Builds the pair action `(β, v)` of `(π, u)`, checks `C*(π,u) = C*(π,v)`,
/// and for every alternate `(ρ, z)` checks `C*(ρ,w) = C*(ρ,z)` for the
/// restricted `w` and that `π(a)v_s ↦ ρ(a)z_s` extends to a *-homomorphism.
pub fn verify_main_theorem(
    cov: &CovariantRep,
    alternates: &[Alternate],
    mode: Mode,
    cfg: &Config,
) -> Result<(PairSemigroup, MainTheoremReport), CrossedError> {
    let pa = cov.action();
    let pair = pair_semigroup_action(cov, mode, cfg)?;
    let cpu = group_span(cov, cfg)?;
    let real = realize_crossed_product(&pair.covrep, cfg)?;
    if !algebra_equal(&cpu, &real.span, cfg.tol)? {
        return Err(CrossedError::SpanMismatch(format!(
            "C*(pi,u) has dimension {}, C*(pi,v) has {}",
            cpu.dimension(),
            real.span.dimension()
        )));
    }
    let images = real.images();
    let mut reports = Vec::new();
    for alt in alternates {
        let z = match alt {
            Alternate::Amplified(k) => pair.covrep.amplified(*k),
            Alternate::Explicit(z) => z.clone(),
        };
        validate_semigroup_covrep(&z, mode, cfg.tol)?;
        let w = restrict_action_covrep(pa, &pair, &z, mode, cfg.tol)?;
        let cpw = group_span(&w, cfg)?;
        let real_z = realize_crossed_product(&z, cfg)?;
        if !algebra_equal(&cpw, &real_z.span, cfg.tol)? {
            return Err(CrossedError::SpanMismatch(format!(
                "C*(rho,w) has dimension {}, C*(rho,z) has {}",
                cpw.dimension(),
                real_z.span.dimension()
            )));
        }
        let pairs: Vec<(CMat, CMat)> = real
            .generators
            .iter()
            .map(|(s, unit, x)| (x.clone(), z.rep().unit_image(*unit) * z.v(*s)))
            .collect();
        let theta = LinearExtension::new(&pairs, cfg.drop_tol)?;
        for ((s, unit, _), (x, y)) in real.generators.iter().zip(&pairs) {
            let r = frob_dist(&theta.apply(x), y);
            if r > cfg.tol {
                return Err(CrossedError::DiagramViolated { unit: unit.to_string(), s: *s, residual: r });
            }
        }
        let hom = theta.homomorphism_residual(&images);
        if hom > cfg.tol {
            return Err(CrossedError::NotStarHomomorphism(format!("Theta residual {hom:.3e}")));
        }
        reports.push(AlternateReport {
            h_dim: z.rep().h_dim(),
            span_dim: real_z.span.dimension(),
            theta_rank: theta.rank(),
            well_defined_residual: theta.well_defined_residual,
            homomorphism_residual: hom,
        });
    }
    let report = MainTheoremReport {
        pair_order: pair.order(),
        group_span_dim: cpu.dimension(),
        crossed: real.report,
        alternates: reports,
    };
    Ok((pair, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariant::HilbertRep;
    use crate::linalg::real;
    use crate::partial_action::{Group, PartialAction};
    use crate::semigroup::{symmetric_inverse_monoid, verify_inverse_semigroup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyclic(n: usize) -> FiniteInverseSemigroup {
        verify_inverse_semigroup(&(0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect::<Vec<_>>()).unwrap()
    }

    fn ef() -> FiniteInverseSemigroup {
        verify_inverse_semigroup(&[vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn left_regular_dimensions() {
        let cfg = Config::default();
        assert_eq!(left_regular(&cyclic(1), &cfg).unwrap().span.dimension(), 1);
        let r = left_regular(&ef(), &cfg).unwrap();
        assert_eq!(r.span.dimension(), 2);
        assert_eq!(r.report.blocks, vec![1, 1]);
        let (sim, _) = symmetric_inverse_monoid(2).unwrap();
        let r = left_regular(&sim, &cfg).unwrap();
        assert_eq!(r.span.dimension(), 7);
        for l in &r.lambdas {
            assert!(crate::linalg::partial_isometry_residual(l) == 0.0);
        }
    }

    #[test]
    fn scalar_crossed_products() {
        let cfg = Config::default();
        assert_eq!(verify_scalar_crossed_product(&cyclic(3), &cfg).unwrap().crossed.blocks, vec![1, 1, 1]);
        let r = verify_scalar_crossed_product(&ef(), &cfg).unwrap();
        assert_eq!((r.group_order, r.crossed.blocks.clone()), (1, vec![1]));
        let (sim, _) = symmetric_inverse_monoid(2).unwrap();
        assert_eq!(verify_scalar_crossed_product(&sim, &cfg).unwrap().crossed.blocks, vec![1]);
    }

    #[test]
    fn idempotent_decomposition() {
        let cfg = Config::default();
        let r = verify_semilattice_idempotent_decomposition(&ef(), &cfg).unwrap();
        assert_eq!(r.crossed.dimension, 2);
        let (sim, _) = symmetric_inverse_monoid(2).unwrap();
        let r = verify_semilattice_idempotent_decomposition(&sim, &cfg).unwrap();
        assert_eq!(r.crossed.dimension, 7);
        assert_eq!(r.crossed.blocks, r.regular.blocks);
        let r = verify_semilattice_idempotent_decomposition(&cyclic(2), &cfg).unwrap();
        assert_eq!(r.idempotents, 1);
    }

    #[test]
    fn random_semilattices() {
        let cfg = Config::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let cov = random_semilattice_action(&mut rng);
            assert!(cov.action().order() <= 8);
            validate_semigroup_covrep(&cov, Mode::Strict, 1e-9).unwrap();
            let r = verify_semilattice_crossed_product(&cov, &cfg).unwrap();
            assert_eq!(r.crossed_dim, r.algebra_dim);
        }
    }

    #[test]
    fn one_dimensional_collapse() {
        // S = {e, f} on ℂ with H = ℂ², v_f = π(p) = 1
        let alg = BlockAlgebra::diagonal(1).unwrap();
        let act = SemigroupAction::new(&ef(), &alg, vec![PartialAutomorphism::identity(&alg); 2]).unwrap();
        let rep = HilbertRep::with_multiplicity(&alg, &[2]).unwrap();
        let cov = SemigroupCovRep::new(&act, &rep, vec![crate::linalg::eye(2); 2]).unwrap();
        let real = realize_crossed_product(&cov, &Config::default()).unwrap();
        assert_eq!(real.span.dimension(), 1);
    }

    #[test]
    fn main_theorem_on_shift_and_swap() {
        let cfg = Config::default();
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).unwrap();
        let pa = PartialAction::new(&alg, Group::Integers, vec![(1, a1)]).unwrap();
        let rep = HilbertRep::with_multiplicity(&alg, &[1, 1]).unwrap();
        let cov = CovariantRep::new(&pa, &rep, vec![(1, real(2, 2, &[0.0, 0.0, 1.0, 0.0]))]).unwrap();
        let (pair, r) =
            verify_main_theorem(&cov, &[Alternate::Amplified(1), Alternate::Amplified(2)], Mode::Strict, &cfg).unwrap();
        assert_eq!(pair.order(), 6);
        assert_eq!(r.crossed.blocks, vec![2]);
        assert_eq!(r.alternates[1].h_dim, 4);

        let swap = PartialAutomorphism::from_block_map(&alg, &[(0, 1), (1, 0)]).unwrap();
        let pa = PartialAction::new(&alg, Group::cyclic(2), vec![(1, swap)]).unwrap();
        let cov = CovariantRep::new(&pa, &rep, vec![(1, real(2, 2, &[0.0, 1.0, 1.0, 0.0]))]).unwrap();
        let (pair, r) = verify_main_theorem(&cov, &[Alternate::Amplified(1)], Mode::Strict, &cfg).unwrap();
        assert_eq!(pair.order(), 2);
        assert_eq!(r.crossed.blocks, vec![2]);
    }

    #[test]
    fn wrong_alternate_breaks_the_diagram() {
        let cfg = Config::default();
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).unwrap();
        let pa = PartialAction::new(&alg, Group::Integers, vec![(1, a1)]).unwrap();
        let rep = HilbertRep::with_multiplicity(&alg, &[1, 1]).unwrap();
        let cov = CovariantRep::new(&pa, &rep, vec![(1, real(2, 2, &[0.0, 0.0, 1.0, 0.0]))]).unwrap();
        let pair = pair_semigroup_action(&cov, Mode::Strict, &cfg).unwrap();
        // same v on a representation with the blocks swapped is not covariant
        let swapped = HilbertRep::with_multiplicity(&alg, &[1, 1]).unwrap().conjugated(&real(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let z = SemigroupCovRep::new(&pair.action, &swapped, pair.covrep.family().to_vec()).unwrap();
        assert!(verify_main_theorem(&cov, &[Alternate::Explicit(z)], Mode::Strict, &cfg).is_err());
    }
}

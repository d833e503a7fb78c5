use rand::Rng;

use super::{CovariantRep, HilbertRep};
use crate::linalg::{c, random_unitary, zeros, CMat};
use crate::partial_action::{random_bijection_action, FuzzInstance, Group};

/// A unitary representation `g ↦ C_g` of the group on a small space: the
/// left regular representation for finite groups, two characters for `ℤ`.
fn twist<R: Rng + ?Sized>(group: &Group, rng: &mut R) -> impl Fn(i64) -> CMat {
    let w = match group.order() {
        Some(n) => random_unitary(n, rng),
        None => random_unitary(2, rng),
    };
    let phases: [f64; 2] = [rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(0.0..std::f64::consts::TAU)];
    let group = group.clone();
    move |g: i64| {
        let base = match group.order() {
            Some(n) => {
                let mut m = zeros(n);
                for h in 0..n as i64 {
                    m[(group.product(g, h) as usize, h as usize)] = c(1.0, 0.0);
                }
                m
            }
            None => {
                let mut m = zeros(2);
                for (i, p) in phases.iter().enumerate() {
                    let t = p * g as f64;
                    m[(i, i)] = c(t.cos(), t.sin());
                }
                m
            }
        };
        &w * base * w.adjoint()
    }
}

/// A random covariant representation satisfying the strict space conditions.
///
/// The action is a commutative-model action embedded with random frames of
/// size 1 or 2. `π` has multiplicity `c` on every block, and
/// `u_g` carries block `x` to block `θ_g x` by `C_g ⊗ V_{θ_g x} V_x*`, where
/// `C` is trivial or a random unitary representation of dimension `c`.
pub fn random_strict_covrep<R: Rng + ?Sized>(rng: &mut R) -> (FuzzInstance, CovariantRep) {
    let inst = random_bijection_action(rng);
    let n: usize = rng.random_range(1..=2);
    let ground = inst.action.ground;
    let frames: Vec<CMat> = (0..ground).map(|_| random_unitary(n, rng)).collect();
    let pa = inst.action.embed_with_frames(&frames);

    let twisted = rng.random_bool(0.5);
    let tw = twist(&inst.action.group, rng);
    let m = if twisted { tw(0).nrows() } else { 1 };
    let rep = HilbertRep::with_multiplicity(pa.algebra(), &vec![m; ground]).expect("positive multiplicities");
    let h = rep.h_dim();
    let bs = m * n;

    let members = inst
        .action
        .support()
        .into_iter()
        .map(|g| {
            let th = inst.action.theta(g);
            let cg = if twisted { tw(g) } else { CMat::identity(1, 1) };
            let mut u = zeros(h);
            for x in th.domain() {
                let y = th.get(x).unwrap();
                let blk = cg.kronecker(&(&frames[y] * frames[x].adjoint()));
                u.view_mut((y * bs, x * bs), (bs, bs)).copy_from(&blk);
            }
            (g, u)
        })
        .collect();
    let cov = CovariantRep::new(&pa, &rep, members).expect("sizes agree");
    let mut inst = inst;
    inst.description = format!("{}, frame size {n}, twist dimension {m}", inst.description);
    (inst, cov)
}

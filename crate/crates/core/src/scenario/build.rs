//! Resolution of parsed blocks into engine objects and directive tasks.
//! Definitions must precede their uses.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use super::parse::{Block, Entry, Value};
use super::ScenarioError;
use crate::config::{Config, Mode};
use crate::covariant::{pair_semigroup_action, CovariantRep, HilbertRep, SemigroupAction, SemigroupCovRep};
use crate::crossed::{Alternate, LElement};
use crate::cstar::{BlockAlgebra, BlockSet, Element, PartialAutomorphism};
use crate::linalg::{eye, CMat, C64};
use crate::partial_action::{Group, PartialAction};
use crate::semigroup::{symmetric_inverse_monoid, verify_inverse_semigroup, FiniteInverseSemigroup};
use crate::suites::SuiteFamily;

type Res<T> = Result<T, ScenarioError>;

fn invalid<T>(line: usize, message: impl Into<String>) -> Res<T> {
    Err(ScenarioError::Invalid { line, message: message.into() })
}

fn num(v: &Value, line: usize) -> Res<f64> {
    match v {
        Value::Number(x) => Ok(*x),
        _ => invalid(line, format!("expected a number, found {v:?}")),
    }
}

fn uint(v: &Value, line: usize) -> Res<usize> {
    let x = num(v, line)?;
    if x < 0.0 || x.fract() != 0.0 || x > u32::MAX as f64 {
        return invalid(line, format!("expected a non-negative integer, found {x}"));
    }
    Ok(x as usize)
}

fn int(v: &Value, line: usize) -> Res<i64> {
    let x = num(v, line)?;
    if x.fract() != 0.0 || x.abs() > i32::MAX as f64 {
        return invalid(line, format!("expected an integer, found {x}"));
    }
    Ok(x as i64)
}

fn flag(v: &Value, line: usize) -> Res<bool> {
    match v {
        Value::Bool(b) => Ok(*b),
        _ => invalid(line, format!("expected true or false, found {v:?}")),
    }
}

fn text(v: &Value, line: usize) -> Res<&str> {
    match v {
        Value::Ident(s) | Value::Str(s) => Ok(s),
        _ => invalid(line, format!("expected a name, found {v:?}")),
    }
}

fn list(v: &Value, line: usize) -> Res<&[Value]> {
    match v {
        Value::List(items) => Ok(items),
        _ => invalid(line, format!("expected a list, found {v:?}")),
    }
}

fn map(v: &Value, line: usize) -> Res<&[Entry]> {
    match v {
        Value::Map(entries) => Ok(entries),
        _ => invalid(line, format!("expected a map, found {v:?}")),
    }
}

fn key_int(e: &Entry) -> Res<i64> {
    e.key.parse().or_else(|_| invalid(e.line, format!("expected an integer key, found `{}`", e.key)))
}

fn scalar(v: &Value, line: usize) -> Res<C64> {
    match v {
        Value::Number(x) => Ok(C64::new(*x, 0.0)),
        Value::Complex(re, im) => Ok(C64::new(*re, *im)),
        _ => invalid(line, format!("expected a scalar, found {v:?}")),
    }
}

/// A square matrix written as a list of rows, or a bare scalar for `1×1`.
fn matrix(v: &Value, line: usize) -> Res<CMat> {
    if let Value::Number(_) | Value::Complex(..) = v {
        return Ok(CMat::from_element(1, 1, scalar(v, line)?));
    }
    let rows = list(v, line)?;
    let n = rows.len();
    if n == 0 {
        return invalid(line, "empty matrix");
    }
    let mut m = CMat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = list(row, line)?;
        if row.len() != n {
            return invalid(line, format!("matrix row {i} has {} entries, expected {n}", row.len()));
        }
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = scalar(x, line)?;
        }
    }
    Ok(m)
}

fn mode_of(v: &Value, line: usize) -> Res<Mode> {
    text(v, line)?.parse().or_else(|e: String| invalid(line, e))
}

/// Reads `angle = 0.7` or `angle = "pi/4"`.
fn angle(v: &Value, line: usize) -> Res<f64> {
    if let Value::Number(x) = v {
        return Ok(*x);
    }
    let s = text(v, line)?;
    let bad = || ScenarioError::Invalid { line, message: format!("cannot read angle `{s}`") };
    let rest = s.strip_prefix("pi").ok_or_else(bad)?;
    if rest.is_empty() {
        return Ok(PI);
    }
    let k: f64 = rest.strip_prefix('/').ok_or_else(bad)?.parse().map_err(|_| bad())?;
    Ok(PI / k)
}

fn name_of(b: &Block) -> Res<&str> {
    b.name.as_deref().ok_or_else(|| ScenarioError::Invalid { line: b.line, message: format!("`{}` block needs a name", b.kind) })
}

fn req<'a>(b: &'a Block, key: &str) -> Res<&'a Entry> {
    b.get(key).ok_or_else(|| ScenarioError::Invalid {
        line: b.line,
        message: format!("`{} {}` needs `{key}`", b.kind, b.name.as_deref().unwrap_or("")),
    })
}

fn allow(b: &Block, keys: &[&str]) -> Res<()> {
    let mut seen = Vec::new();
    for e in &b.entries {
        if !keys.contains(&e.key.as_str()) {
            return invalid(e.line, format!("unknown key `{}` in `{}` block", e.key, b.kind));
        }
        if seen.contains(&e.key) {
            return invalid(e.line, format!("duplicate key `{}`", e.key));
        }
        seen.push(e.key.clone());
    }
    Ok(())
}

fn lookup<'a, T>(table: &'a BTreeMap<String, T>, e: &Entry) -> Res<&'a T> {
    let name = text(&e.value, e.line)?;
    table.get(name).ok_or_else(|| ScenarioError::UnresolvedReference { line: e.line, name: name.to_string() })
}

fn insert<T>(table: &mut BTreeMap<String, T>, b: &Block, value: T) -> Res<()> {
    let name = name_of(b)?.to_string();
    if table.insert(name.clone(), value).is_some() {
        return invalid(b.line, format!("`{} {name}` is defined twice", b.kind));
    }
    Ok(())
}

/// The optional `config` block; absent keys keep their defaults.
pub(super) fn read_config(blocks: &[Block]) -> Res<Config> {
    let mut cfg = Config::default();
    let mut found = false;
    for b in blocks.iter().filter(|b| b.kind == "config") {
        if found {
            return invalid(b.line, "more than one config block");
        }
        found = true;
        allow(b, &["tol", "drop_tol", "rank_tol", "gap_tol", "bound", "seed", "mode"])?;
        for e in &b.entries {
            let (v, l) = (&e.value, e.line);
            match e.key.as_str() {
                "tol" => cfg.tol = num(v, l)?,
                "drop_tol" => cfg.drop_tol = num(v, l)?,
                "rank_tol" => cfg.rank_tol = num(v, l)?,
                "gap_tol" => cfg.gap_tol = num(v, l)?,
                "bound" => cfg.bound = uint(v, l)?,
                "seed" => cfg.seed = uint(v, l)? as u64,
                "mode" => cfg.mode = mode_of(v, l)?,
                _ => unreachable!("keys were checked"),
            }
        }
    }
    Ok(cfg)
}

#[derive(Clone, Debug)]
pub(super) struct CovRef {
    pub cov: CovariantRep,
    pub mode: Mode,
    pub faithful: bool,
}

#[derive(Clone, Debug)]
pub(super) struct SCovRef {
    pub cov: SemigroupCovRep,
    pub mode: Mode,
}

pub(super) enum Task {
    Semigroup(FiniteInverseSemigroup),
    Section2 { pa: PartialAction, max_len: usize },
    Section3 { cov: CovRef, max_len: usize },
    Suite { family: SuiteFamily, count: u64 },
    Rotation { angle: f64 },
    Pair(CovRef),
    RoundTrip { cov: SCovRef, amplify: Vec<usize> },
    Semilattice { covs: Vec<SCovRef>, random: usize },
    Scalar(FiniteInverseSemigroup),
    Decomposition(FiniteInverseSemigroup),
    Main { cov: CovRef, alternates: Vec<Alternate> },
    LAlgebra { parent: Arc<SemigroupAction>, cov: SemigroupCovRep, elements: Vec<LElement>, count: usize },
    Crossed { cov: SCovRef, faithful: bool },
}

pub(super) struct Directive {
    pub name: String,
    pub theorem: String,
    pub task: Task,
    pub expect: Vec<Entry>,
}

#[derive(Default)]
pub(super) struct Env {
    cfg: Config,
    algebras: BTreeMap<String, BlockAlgebra>,
    ideals: BTreeMap<String, BlockSet>,
    groups: BTreeMap<String, Group>,
    semigroups: BTreeMap<String, FiniteInverseSemigroup>,
    pautos: BTreeMap<String, PartialAutomorphism>,
    pactions: BTreeMap<String, PartialAction>,
    reps: BTreeMap<String, HilbertRep>,
    families: BTreeMap<String, Vec<(i64, CMat)>>,
    covreps: BTreeMap<String, CovRef>,
    sactions: BTreeMap<String, Arc<SemigroupAction>>,
    scovreps: BTreeMap<String, SCovRef>,
    lelements: BTreeMap<String, LElement>,
    pub directives: Vec<Directive>,
}

impl Env {
    pub(super) fn build(blocks: &[Block], cfg: Config) -> Res<Env> {
        let mut env = Env { cfg, ..Env::default() };
        for b in blocks {
            match b.kind.as_str() {
                "config" => {}
                "algebra" => env.algebra(b)?,
                "ideal" => env.ideal(b)?,
                "group" => env.group(b)?,
                "semigroup" => env.semigroup(b)?,
                "pauto" => env.pauto(b)?,
                "partial_action" | "paction" => env.paction(b)?,
                "rep" => env.rep(b)?,
                "family" => env.family(b)?,
                "covrep" => env.covrep(b)?,
                "saction" => env.saction(b)?,
                "scovrep" => env.scovrep(b)?,
                "lelement" => env.lelement(b)?,
                "crossed" => env.crossed(b)?,
                "verify" => env.verify(b)?,
                other => return invalid(b.line, format!("unknown block kind `{other}`")),
            }
        }
        Ok(env)
    }

    fn blockset(&self, v: &Value, line: usize) -> Res<BlockSet> {
        match v {
            Value::Ident(name) => self
                .ideals
                .get(name)
                .copied()
                .ok_or_else(|| ScenarioError::UnresolvedReference { line, name: name.clone() }),
            _ => {
                let blocks = list(v, line)?.iter().map(|x| uint(x, line)).collect::<Res<Vec<_>>>()?;
                if let Some(&b) = blocks.iter().find(|&&b| b >= 64) {
                    return invalid(line, format!("block index {b} is out of range"));
                }
                Ok(BlockSet::from_blocks(blocks))
            }
        }
    }

    fn checked_blockset(&self, alg: &BlockAlgebra, v: &Value, line: usize) -> Res<BlockSet> {
        let set = self.blockset(v, line)?;
        alg.check_blocks(set).or_else(|e| invalid(line, e.to_string()))?;
        Ok(set)
    }

    fn mode_entry(&self, b: &Block) -> Res<Mode> {
        b.get("mode").map_or(Ok(self.cfg.mode), |e| mode_of(&e.value, e.line))
    }

    fn flag_entry(b: &Block, key: &str) -> Res<bool> {
        b.get(key).map_or(Ok(false), |e| flag(&e.value, e.line))
    }

    fn algebra(&mut self, b: &Block) -> Res<()> {
        allow(b, &["blocks"])?;
        let e = req(b, "blocks")?;
        let dims = list(&e.value, e.line)?.iter().map(|x| uint(x, e.line)).collect::<Res<Vec<_>>>()?;
        let alg = BlockAlgebra::new(dims).or_else(|err| invalid(e.line, err.to_string()))?;
        insert(&mut self.algebras, b, alg)
    }

    fn ideal(&mut self, b: &Block) -> Res<()> {
        allow(b, &["algebra", "blocks"])?;
        let e = req(b, "blocks")?;
        let set = match b.get("algebra") {
            Some(a) => {
                let alg = lookup(&self.algebras, a)?.clone();
                self.checked_blockset(&alg, &e.value, e.line)?
            }
            None => self.blockset(&e.value, e.line)?,
        };
        insert(&mut self.ideals, b, set)
    }

    fn group(&mut self, b: &Block) -> Res<()> {
        allow(b, &["name", "table"])?;
        let g = match (b.get("name"), b.get("table")) {
            (Some(e), None) => {
                let name = text(&e.value, e.line)?;
                Group::by_name(name).ok_or_else(|| ScenarioError::Invalid {
                    line: e.line,
                    message: format!("unknown group `{name}` (expected Z, Zn or S3)"),
                })?
            }
            (None, Some(e)) => {
                let table = int_table(&e.value, e.line)?;
                Group::from_table(name_of(b)?, table).or_else(|m| invalid(e.line, m))?
            }
            _ => return invalid(b.line, "group needs exactly one of `name` and `table`"),
        };
        insert(&mut self.groups, b, g)
    }

    fn semigroup(&mut self, b: &Block) -> Res<()> {
        allow(b, &["n", "mul", "symmetric", "group"])?;
        let s = if let Some(e) = b.get("mul") {
            let table = int_table(&e.value, e.line)?;
            if let Some(n) = b.get("n") {
                let n = uint(&n.value, n.line)?;
                if n != table.len() {
                    return invalid(e.line, format!("n = {n} but the table has {} rows", table.len()));
                }
            }
            verify_inverse_semigroup(&table).or_else(|err| invalid(e.line, err.to_string()))?
        } else if let Some(e) = b.get("symmetric") {
            symmetric_inverse_monoid(uint(&e.value, e.line)?).or_else(|err| invalid(e.line, err.to_string()))?.0
        } else if let Some(e) = b.get("group") {
            match lookup(&self.groups, e)? {
                Group::Finite { table, .. } => {
                    verify_inverse_semigroup(table).or_else(|err| invalid(e.line, err.to_string()))?
                }
                Group::Integers => return invalid(e.line, "semigroups must be finite"),
            }
        } else {
            return invalid(b.line, "semigroup needs `mul`, `symmetric` or `group`");
        };
        insert(&mut self.semigroups, b, s)
    }

    fn pauto(&mut self, b: &Block) -> Res<()> {
        allow(b, &["algebra", "map", "unitaries", "dom", "cod", "identity", "identity_on", "zero"])?;
        let ae = req(b, "algebra")?;
        let alg = lookup(&self.algebras, ae)?.clone();
        let p = if Self::flag_entry(b, "identity")? {
            PartialAutomorphism::identity(&alg)
        } else if Self::flag_entry(b, "zero")? {
            PartialAutomorphism::zero(&alg)
        } else if let Some(e) = b.get("identity_on") {
            PartialAutomorphism::identity_on(&alg, self.checked_blockset(&alg, &e.value, e.line)?)
        } else {
            let me = req(b, "map")?;
            let mut unitaries = BTreeMap::new();
            if let Some(ue) = b.get("unitaries") {
                for e in map(&ue.value, ue.line)? {
                    let from = uint(&Value::Number(key_int(e)? as f64), e.line)?;
                    unitaries.insert(from, (matrix(&e.value, e.line)?, e.line));
                }
            }
            let mut triples = Vec::new();
            for pair in list(&me.value, me.line)? {
                let pair = list(pair, me.line)?;
                if pair.len() != 2 {
                    return invalid(me.line, "map entries are [source, target] pairs");
                }
                let (from, to) = (uint(&pair[0], me.line)?, uint(&pair[1], me.line)?);
                if from >= alg.num_blocks() {
                    return invalid(me.line, format!("block {from} is out of range"));
                }
                let u = match unitaries.remove(&from) {
                    Some((u, _)) => u,
                    None => eye(alg.block_dim(from)),
                };
                triples.push((from, to, u));
            }
            if let Some((from, (_, line))) = unitaries.into_iter().next() {
                return invalid(line, format!("unitary given for block {from}, which is not mapped"));
            }
            let built = match (b.get("dom"), b.get("cod")) {
                (None, None) => PartialAutomorphism::new(&alg, triples, self.cfg.tol),
                (d, c) => {
                    let dom = match d {
                        Some(e) => self.checked_blockset(&alg, &e.value, e.line)?,
                        None => BlockSet::from_blocks(triples.iter().map(|t| t.0)),
                    };
                    let cod = match c {
                        Some(e) => self.checked_blockset(&alg, &e.value, e.line)?,
                        None => BlockSet::from_blocks(triples.iter().map(|t| t.1)),
                    };
                    PartialAutomorphism::with_ideals(&alg, dom, cod, triples, self.cfg.tol)
                }
            };
            built.or_else(|err| invalid(me.line, err.to_string()))?
        };
        insert(&mut self.pautos, b, p)
    }

    fn paction(&mut self, b: &Block) -> Res<()> {
        allow(b, &["algebra", "group", "alpha", "alphas", "D", "support"])?;
        let alg = lookup(&self.algebras, req(b, "algebra")?)?.clone();
        let group = lookup(&self.groups, req(b, "group")?)?.clone();
        let ae = b.get("alpha").or(b.get("alphas")).ok_or_else(|| ScenarioError::Invalid {
            line: b.line,
            message: "partial action needs `alpha`".into(),
        })?;
        let mut alphas = Vec::new();
        for e in map(&ae.value, ae.line)? {
            alphas.push((key_int(e)?, lookup(&self.pautos, e)?.clone()));
        }
        let pa = match b.get("D") {
            None => PartialAction::new(&alg, group, alphas),
            Some(de) => {
                let mut domains = Vec::new();
                for e in map(&de.value, de.line)? {
                    domains.push((key_int(e)?, self.checked_blockset(&alg, &e.value, e.line)?));
                }
                PartialAction::with_domains(&alg, group, domains, alphas)
            }
        }
        .or_else(|err| invalid(ae.line, err.to_string()))?;
        if let Some(se) = b.get("support") {
            let have = pa.support();
            for x in list(&se.value, se.line)? {
                let g = int(x, se.line)?;
                if !have.contains(&g) {
                    return invalid(se.line, format!("{g} is listed in the support but has no map"));
                }
            }
        }
        insert(&mut self.pactions, b, pa)
    }

    fn rep(&mut self, b: &Block) -> Res<()> {
        allow(b, &["algebra", "multiplicity", "copies"])?;
        let alg = lookup(&self.algebras, req(b, "algebra")?)?.clone();
        let rep = match (b.get("multiplicity"), b.get("copies")) {
            (Some(e), None) => {
                let m = list(&e.value, e.line)?.iter().map(|x| uint(x, e.line)).collect::<Res<Vec<_>>>()?;
                HilbertRep::with_multiplicity(&alg, &m).or_else(|err| invalid(e.line, err.to_string()))?
            }
            (None, Some(e)) => {
                let k = uint(&e.value, e.line)?;
                if k == 0 {
                    return invalid(e.line, "copies must be positive");
                }
                HilbertRep::copies(&alg, k)
            }
            (None, None) => HilbertRep::copies(&alg, 1),
            _ => return invalid(b.line, "rep takes one of `multiplicity` and `copies`"),
        };
        insert(&mut self.reps, b, rep)
    }

    fn family(&mut self, b: &Block) -> Res<()> {
        let mut members = Vec::new();
        for e in &b.entries {
            members.push((key_int(e)?, matrix(&e.value, e.line)?));
        }
        insert(&mut self.families, b, members)
    }

    fn covrep(&mut self, b: &Block) -> Res<()> {
        allow(b, &["action", "rep", "family", "mode", "faithful"])?;
        let pa = lookup(&self.pactions, req(b, "action")?)?;
        let rep = lookup(&self.reps, req(b, "rep")?)?;
        let members = match b.get("family") {
            Some(e) => lookup(&self.families, e)?.clone(),
            None => Vec::new(),
        };
        let cov = CovariantRep::new(pa, rep, members).or_else(|err| invalid(b.line, err.to_string()))?;
        let r = CovRef { cov, mode: self.mode_entry(b)?, faithful: Self::flag_entry(b, "faithful")? };
        insert(&mut self.covreps, b, r)
    }

    /// `pair = c` builds the pair action of a covariant representation and
    /// registers its second coordinate as a `scovrep` of the same name.
    fn saction(&mut self, b: &Block) -> Res<()> {
        allow(b, &["semigroup", "algebra", "beta", "ideals", "identity_on", "pair"])?;
        if let Some(e) = b.get("pair") {
            let r = lookup(&self.covreps, e)?.clone();
            let pair = pair_semigroup_action(&r.cov, r.mode, &self.cfg).or_else(|err| invalid(e.line, err.to_string()))?;
            insert(&mut self.sactions, b, Arc::new(pair.action))?;
            return insert(&mut self.scovreps, b, SCovRef { cov: pair.covrep, mode: r.mode });
        }
        let s = lookup(&self.semigroups, req(b, "semigroup")?)?.clone();
        let alg = lookup(&self.algebras, req(b, "algebra")?)?.clone();
        let mut ideals = None;
        let beta: Vec<PartialAutomorphism> = if let Some(e) = b.get("beta") {
            list(&e.value, e.line)?
                .iter()
                .map(|x| {
                    let name = text(x, e.line)?;
                    self.pautos
                        .get(name)
                        .cloned()
                        .ok_or_else(|| ScenarioError::UnresolvedReference { line: e.line, name: name.to_string() })
                })
                .collect::<Res<_>>()?
        } else if let Some(e) = b.get("identity_on") {
            let sets = list(&e.value, e.line)?
                .iter()
                .map(|x| self.checked_blockset(&alg, x, e.line))
                .collect::<Res<Vec<_>>>()?;
            let out = sets.iter().map(|&set| PartialAutomorphism::identity_on(&alg, set)).collect();
            ideals = Some(sets);
            out
        } else {
            return invalid(b.line, "saction needs `beta`, `identity_on` or `pair`");
        };
        if let Some(e) = b.get("ideals") {
            ideals = Some(
                list(&e.value, e.line)?
                    .iter()
                    .map(|x| self.checked_blockset(&alg, x, e.line))
                    .collect::<Res<Vec<_>>>()?,
            );
        }
        let ideals = ideals.unwrap_or_else(|| beta.iter().map(|p| p.cod()).collect());
        let act = SemigroupAction::with_ideals(&s, &alg, ideals, beta).or_else(|err| invalid(b.line, err.to_string()))?;
        insert(&mut self.sactions, b, Arc::new(act))
    }

    fn scovrep(&mut self, b: &Block) -> Res<()> {
        allow(b, &["action", "rep", "family", "projections", "mode"])?;
        let act = lookup(&self.sactions, req(b, "action")?)?.clone();
        let rep = lookup(&self.reps, req(b, "rep")?)?;
        let v = if Self::flag_entry(b, "projections")? {
            (0..act.order()).map(|s| rep.projection(act.ideal(s))).collect()
        } else {
            let e = req(b, "family")?;
            list(&e.value, e.line)?.iter().map(|x| matrix(x, e.line)).collect::<Res<Vec<_>>>()?
        };
        let cov = SemigroupCovRep::new(&act, rep, v).or_else(|err| invalid(b.line, err.to_string()))?;
        let r = SCovRef { cov, mode: self.mode_entry(b)? };
        insert(&mut self.scovreps, b, r)
    }

    /// `lelement x { action = b; 0: [block, ...]; 3: [...] }`.
    fn lelement(&mut self, b: &Block) -> Res<()> {
        let parent = lookup(&self.sactions, req(b, "action")?)?.clone();
        let alg = parent.algebra().clone();
        let mut terms = Vec::new();
        for e in b.entries.iter().filter(|e| e.key != "action") {
            let s = key_int(e)?;
            if s < 0 || s as usize >= parent.order() {
                return invalid(e.line, format!("semigroup index {s} is out of range"));
            }
            let blocks = list(&e.value, e.line)?.iter().map(|x| matrix(x, e.line)).collect::<Res<Vec<_>>>()?;
            let a = Element::from_blocks(&alg, blocks).or_else(|err| invalid(e.line, err.to_string()))?;
            terms.push((s as usize, a));
        }
        let x = LElement::from_terms(&parent, terms).or_else(|err| invalid(b.line, err.to_string()))?;
        insert(&mut self.lelements, b, x)
    }

    fn scov_or_pair(&self, e: &Entry) -> Res<SCovRef> {
        let name = text(&e.value, e.line)?;
        if let Some(z) = self.scovreps.get(name) {
            return Ok(z.clone());
        }
        let r = lookup(&self.covreps, e)?;
        let pair = pair_semigroup_action(&r.cov, r.mode, &self.cfg).or_else(|err| invalid(e.line, err.to_string()))?;
        Ok(SCovRef { cov: pair.covrep, mode: r.mode })
    }

    fn crossed(&mut self, b: &Block) -> Res<()> {
        allow(b, &["action", "covrep", "faithful", "expect"])?;
        let cov = self.scov_or_pair(req(b, "covrep")?)?;
        if let Some(e) = b.get("action") {
            let act = lookup(&self.sactions, e)?;
            if act.semigroup() != cov.cov.action().semigroup() || act.algebra() != cov.cov.action().algebra() {
                return invalid(e.line, "covrep does not belong to this action");
            }
        }
        let faithful = Self::flag_entry(b, "faithful")?;
        self.push(b, "crossed".into(), Task::Crossed { cov, faithful })
    }

    fn push(&mut self, b: &Block, theorem: String, task: Task) -> Res<()> {
        let name = name_of(b)?.to_string();
        if self.directives.iter().any(|d| d.name == name) {
            return invalid(b.line, format!("directive `{name}` is defined twice"));
        }
        let expect = match b.get("expect") {
            Some(e) => map(&e.value, e.line)?.to_vec(),
            None => Vec::new(),
        };
        self.directives.push(Directive { name, theorem, task, expect });
        Ok(())
    }

    fn verify(&mut self, b: &Block) -> Res<()> {
        let te = req(b, "theorem")?;
        let theorem = text(&te.value, te.line)?.to_string();
        let has = |k: &str| b.get(k).is_some();
        let count = |default: u64| b.get("count").map_or(Ok(default), |e| uint(&e.value, e.line).map(|c| c as u64));
        let max_len = |default: usize| b.get("max_len").map_or(Ok(default), |e| uint(&e.value, e.line));
        let semigroup = || lookup(&self.semigroups, req(b, "semigroup")?).cloned();
        let covrep = || lookup(&self.covreps, req(b, "covrep")?).cloned();
        let base = ["theorem", "expect"];
        let keys = |extra: &[&'static str]| -> Vec<&str> { base.iter().chain(extra).copied().collect() };

        let r = match theorem.as_str() {
            "semigroup" => {
                allow(b, &keys(&["semigroup"]))?;
                Task::Semigroup(semigroup()?)
            }
            "section2" if has("action") => {
                allow(b, &keys(&["action", "max_len"]))?;
                Task::Section2 { pa: lookup(&self.pactions, req(b, "action")?)?.clone(), max_len: max_len(4)? }
            }
            "section3" if has("covrep") => {
                allow(b, &keys(&["covrep", "max_len"]))?;
                Task::Section3 { cov: covrep()?, max_len: max_len(3)? }
            }
            "section2" | "section3" | "l-algebra" if has("count") && !has("covrep") && !has("action") => {
                allow(b, &keys(&["count"]))?;
                let family = theorem.parse().expect("known family");
                let count = count(1)?;
                if count == 0 {
                    return invalid(b.line, "count must be at least 1");
                }
                Task::Suite { family, count }
            }
            "l-algebra" => {
                allow(b, &keys(&["covrep", "action", "elements", "count"]))?;
                let z = match (b.get("covrep"), b.get("action")) {
                    (Some(e), _) => self.scov_or_pair(e)?.cov,
                    (None, Some(e)) => {
                        let name = text(&e.value, e.line)?;
                        self.scovreps.get(name).map(|z| z.cov.clone()).ok_or_else(|| {
                            ScenarioError::UnresolvedReference { line: e.line, name: name.to_string() }
                        })?
                    }
                    _ => return invalid(b.line, "l-algebra needs `covrep`"),
                };
                let parent = match b.get("action") {
                    Some(e) => lookup(&self.sactions, e)?.clone(),
                    None => Arc::new(z.action().clone()),
                };
                let mut elements = Vec::new();
                if let Some(e) = b.get("elements") {
                    for x in list(&e.value, e.line)? {
                        let name = text(x, e.line)?;
                        let el = self.lelements.get(name).ok_or_else(|| ScenarioError::UnresolvedReference {
                            line: e.line,
                            name: name.to_string(),
                        })?;
                        if !Arc::ptr_eq(el.parent(), &parent) {
                            return invalid(e.line, format!("`{name}` belongs to a different action"));
                        }
                        elements.push(el.clone());
                    }
                }
                let count = count(100)? as usize;
                Task::LAlgebra { parent, cov: z, elements, count }
            }
            "rotation" => {
                allow(b, &keys(&["angle"]))?;
                let e = req(b, "angle")?;
                Task::Rotation { angle: angle(&e.value, e.line)? }
            }
            "4.4" => {
                allow(b, &keys(&["covrep"]))?;
                Task::Pair(covrep()?)
            }
            "5.7" => {
                allow(b, &keys(&["covrep", "amplify"]))?;
                let cov = self.scov_or_pair(req(b, "covrep")?)?;
                let amplify = match b.get("amplify") {
                    Some(e) => list(&e.value, e.line)?.iter().map(|x| uint(x, e.line)).collect::<Res<Vec<_>>>()?,
                    None => vec![1],
                };
                if amplify.contains(&0) {
                    return invalid(b.line, "amplification factors must be positive");
                }
                Task::RoundTrip { cov, amplify }
            }
            "5.8" => {
                allow(b, &keys(&["covreps", "random"]))?;
                let mut covs = Vec::new();
                if let Some(e) = b.get("covreps") {
                    for x in list(&e.value, e.line)? {
                        let entry = Entry { key: String::new(), value: x.clone(), line: e.line };
                        covs.push(self.scov_or_pair(&entry)?);
                    }
                }
                let random = b.get("random").map_or(Ok(0), |e| uint(&e.value, e.line))?;
                if covs.is_empty() && random == 0 {
                    return invalid(b.line, "5.8 needs `covreps` or `random`");
                }
                Task::Semilattice { covs, random }
            }
            "5.10" => {
                allow(b, &keys(&["semigroup"]))?;
                Task::Scalar(semigroup()?)
            }
            "5.11" => {
                allow(b, &keys(&["semigroup"]))?;
                Task::Decomposition(semigroup()?)
            }
            "6.2" => {
                allow(b, &keys(&["covrep", "alternates"]))?;
                let cov = covrep()?;
                if !cov.faithful {
                    return invalid(b.line, "6.2 needs a covrep marked `faithful = true`");
                }
                let mut alternates = Vec::new();
                if let Some(e) = b.get("alternates") {
                    for x in list(&e.value, e.line)? {
                        match x {
                            Value::Number(_) => {
                                let k = uint(x, e.line)?;
                                if k == 0 {
                                    return invalid(e.line, "amplification factors must be positive");
                                }
                                alternates.push(Alternate::Amplified(k));
                            }
                            _ => {
                                let name = text(x, e.line)?;
                                let z = self.scovreps.get(name).ok_or_else(|| ScenarioError::UnresolvedReference {
                                    line: e.line,
                                    name: name.to_string(),
                                })?;
                                alternates.push(Alternate::Explicit(z.cov.clone()));
                            }
                        }
                    }
                }
                Task::Main { cov, alternates }
            }
            other => return invalid(te.line, format!("unknown theorem `{other}`")),
        };
        self.push(b, theorem, r)
    }
}

fn int_table(v: &Value, line: usize) -> Res<Vec<Vec<usize>>> {
    list(v, line)?
        .iter()
        .map(|row| list(row, line)?.iter().map(|x| uint(x, line)).collect())
        .collect()
}

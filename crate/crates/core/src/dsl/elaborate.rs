use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::parser::parse_document;
use super::*;
use crate::algebra::{Algebra, StructureTable};
use crate::builtins;
use crate::error::Error;
use crate::group::{FiniteGroup, GroupAction};
use crate::linalg::Matrix;

type DResult<T> = Result<T, Diagnostic>;

/// The outcome of loading a document: its last algebra and, if present, an action on it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub name: String,
    pub algebra: Arc<Algebra>,
    pub action: Option<GroupAction>,
}

#[derive(Default)]
struct Env {
    algebras: HashMap<String, Arc<Algebra>>,
    groups: HashMap<String, FiniteGroup>,
}

fn diag(pos: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(pos, msg, Vec::new())
}

fn resolve(names: &[String], n: &Name) -> DResult<usize> {
    names.iter().position(|b| b == &n.text).ok_or_else(|| Diagnostic::new(n.pos, format!("unknown name `{}`", n.text), names.to_vec()))
}

fn combination(names: &[String], unit: usize, terms: &[Term]) -> DResult<Vec<Scalar>> {
    let mut v = vec![Scalar::zero(); names.len()];
    for t in terms {
        let i = match &t.basis {
            Some(n) => resolve(names, n)?,
            None => unit,
        };
        v[i] += &t.coeff;
    }
    Ok(v)
}

fn int_args(call: &Call) -> DResult<Vec<usize>> {
    call.args
        .iter()
        .map(|a| match a {
            Arg::Int(v, _) => Ok(*v),
            Arg::Call(c) => Err(diag(c.name.pos, format!("{} expects numeric parameters", call.name.text))),
        })
        .collect()
}

fn call_arg(call: &Call, k: usize, arity: usize) -> DResult<&Call> {
    if call.args.len() != arity {
        return Err(diag(call.name.pos, format!("{} takes {arity} argument(s)", call.name.text)));
    }
    match &call.args[k] {
        Arg::Call(c) => Ok(c),
        Arg::Int(_, pos) => Err(diag(*pos, format!("{} expects an algebra argument", call.name.text))),
    }
}

impl Env {
    fn group(&self, call: &Call) -> DResult<FiniteGroup> {
        if let Some(g) = self.groups.get(&call.name.text) {
            if call.args.is_empty() {
                return Ok(g.clone());
            }
        }
        let args = int_args(call)?;
        match (call.name.text.as_str(), args.as_slice()) {
            ("cyclic", [n]) if *n > 0 => Ok(builtins::cyclic(*n)),
            ("trivial", []) => Ok(FiniteGroup::trivial()),
            _ => Err(Diagnostic::new(
                call.name.pos,
                format!("unknown group `{}`", call.name.text),
                ["cyclic(n)", "trivial"].iter().map(|s| s.to_string()).chain(self.groups.keys().cloned()).collect(),
            )),
        }
    }

    fn builtin(&self, call: &Call) -> DResult<Arc<Algebra>> {
        if let Some(a) = self.algebras.get(&call.name.text) {
            if call.args.is_empty() {
                return Ok(a.clone());
            }
        }
        match call.name.text.as_str() {
            "product" => {
                let a = self.builtin(call_arg(call, 0, 2)?)?;
                let b = self.builtin(call_arg(call, 1, 2)?)?;
                Ok(builtins::product(&a, &b))
            }
            "opposite" => {
                let a = self.builtin(call_arg(call, 0, 1)?)?;
                Ok(builtins::opposite(&a))
            }
            "group_algebra" if matches!(call.args.as_slice(), [Arg::Call(_)]) => {
                Ok(builtins::group_algebra(&self.group(call_arg(call, 0, 1)?)?))
            }
            name => {
                let params = int_args(call)?;
                builtins::by_name(name, &params).map_err(|e| {
                    let mut known: Vec<String> = builtins::BUILTIN_NAMES.iter().map(|(n, _)| n.to_string()).collect();
                    known.extend(["product", "opposite", "group_algebra"].iter().map(|s| s.to_string()));
                    known.extend(self.algebras.keys().cloned());
                    Diagnostic::new(call.name.pos, e.to_string(), known)
                })
            }
        }
    }

    fn table(&self, spec: &TableSpec) -> DResult<Arc<Algebra>> {
        if spec.basis.is_empty() {
            return Err(diag(spec.name.pos, "missing basis declaration"));
        }
        let declared: Vec<String> = spec.basis.iter().map(|n| n.text.clone()).collect();
        let unit_name = match &spec.unit {
            Some(u) => {
                resolve(&declared, u)?;
                if u.text != "1" && declared.iter().any(|b| b == "1") {
                    return Err(diag(u.pos, "duplicate unit"));
                }
                u.text.clone()
            }
            None if declared.iter().any(|b| b == "1") => "1".to_string(),
            None => declared[0].clone(),
        };
        let mut names = vec![unit_name.clone()];
        names.extend(declared.iter().filter(|b| **b != unit_name).cloned());
        let m = names.len();
        let mut given: Vec<Option<Pos>> = vec![None; m * m];
        let mut t = StructureTable::zero(names.clone());
        for rel in &spec.relations {
            let i = resolve(&names, &rel.left)?;
            let j = resolve(&names, &rel.right)?;
            if given[i * m + j].is_some() {
                return Err(diag(rel.left.pos, format!("product {}*{} given twice", rel.left.text, rel.right.text)));
            }
            given[i * m + j] = Some(rel.left.pos);
            for (k, c) in combination(&names, 0, &rel.rhs)?.into_iter().enumerate() {
                t.set(i, j, k, c);
            }
        }
        for x in 0..m {
            for (i, j) in [(0, x), (x, 0)] {
                if given[i * m + j].is_none() {
                    t.set(i, j, x, Scalar::one());
                    given[i * m + j] = Some(spec.name.pos);
                }
            }
        }
        if spec.strict {
            if let Some(ij) = given.iter().position(Option::is_none) {
                return Err(diag(spec.name.pos, format!("strict table is missing {}*{}", names[ij / m], names[ij % m])));
            }
        }
        let at = |i: usize, j: usize| given[i * m + j].unwrap_or(spec.name.pos);
        Algebra::new(t).map(Arc::new).map_err(|e| match e {
            Error::Associativity(i, j, k) => {
                diag(at(i, j), format!("associativity fails: ({0}*{1})*{2} ≠ {0}*({1}*{2})", names[i], names[j], names[k]))
            }
            Error::Unit(i) => diag(at(0, i), format!("`{}` does not act as a unit on `{}`", names[0], names[i])),
            other => diag(spec.name.pos, other.to_string()),
        })
    }

    fn algebra(&self, spec: &AlgebraSpec) -> DResult<(String, Arc<Algebra>)> {
        match spec {
            AlgebraSpec::Builtin(c) => Ok((c.name.text.clone(), self.builtin(c)?)),
            AlgebraSpec::Table(t) => Ok((t.name.text.clone(), self.table(t)?)),
        }
    }

    fn group_table(&self, spec: &GroupTableSpec, pos: Pos) -> DResult<FiniteGroup> {
        if spec.elements.is_empty() {
            return Err(diag(pos, "group needs an `elements` declaration"));
        }
        let declared: Vec<String> = spec.elements.iter().map(|n| n.text.clone()).collect();
        let id = if declared.iter().any(|b| b == "1") { "1".to_string() } else { declared[0].clone() };
        let mut names = vec![id.clone()];
        names.extend(declared.iter().filter(|b| **b != id).cloned());
        let n = names.len();
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for x in 0..n {
            table[0][x] = Some(x);
            table[x][0] = Some(x);
        }
        for (a, b, c) in &spec.products {
            let (i, j, k) = (resolve(&names, a)?, resolve(&names, b)?, resolve(&names, c)?);
            if table[i][j].is_some_and(|old| old != k) {
                return Err(diag(a.pos, format!("conflicting product {}*{}", a.text, b.text)));
            }
            table[i][j] = Some(k);
        }
        let mut full = Vec::with_capacity(n);
        for (i, row) in table.into_iter().enumerate() {
            let mut r = Vec::with_capacity(n);
            for (j, v) in row.into_iter().enumerate() {
                r.push(v.ok_or_else(|| diag(pos, format!("group table is missing {}*{}", names[i], names[j])))?);
            }
            full.push(r);
        }
        FiniteGroup::new(names, full).map_err(|e| diag(pos, e.to_string()))
    }

    fn action(&self, spec: &GroupActionSpec, algebra: &Arc<Algebra>) -> DResult<GroupAction> {
        let group = match &spec.group {
            GroupSpec::Named(c) => self.group(c)?,
            GroupSpec::Table(t) => self.group_table(t, spec.pos)?,
        };
        let m = algebra.dim();
        let basis: Vec<String> = algebra.names().to_vec();
        let order = group.order();
        let mut mats: Vec<Option<Matrix>> = vec![None; order];
        mats[0] = Some(Matrix::identity(m));
        for em in &spec.maps {
            let g = resolve(group.names(), &em.element)?;
            if g == 0 {
                return Err(diag(em.element.pos, "the identity element acts trivially and takes no images"));
            }
            if mats[g].is_some() {
                return Err(diag(em.element.pos, format!("images of `{}` given twice", em.element.text)));
            }
            let mut mat = Matrix::identity(m);
            for (src, terms) in &em.images {
                let i = resolve(&basis, src)?;
                let img = combination(&basis, 0, terms)?;
                for (r, c) in img.into_iter().enumerate() {
                    mat.set(r, i, c);
                }
            }
            mats[g] = Some(mat);
        }
        // fill in elements reachable as products of known ones
        loop {
            let mut grew = false;
            for g in 0..order {
                for h in 0..order {
                    let gh = group.mul(g, h);
                    if mats[gh].is_none() {
                        if let (Some(a), Some(b)) = (&mats[g], &mats[h]) {
                            mats[gh] = Some(a.mul(b).expect("square"));
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out = Vec::with_capacity(order);
        for (g, mat) in mats.into_iter().enumerate() {
            out.push(mat.ok_or_else(|| diag(spec.pos, format!("no images given for `{}`", group.names()[g])))?);
        }
        GroupAction::new(algebra.clone(), group, out).map_err(|e| diag(spec.pos, e.to_string()))
    }
}

fn run(doc: &Document) -> DResult<Loaded> {
    let mut env = Env::default();
    let mut last: Option<(String, Arc<Algebra>)> = None;
    let mut action = None;
    for item in &doc.items {
        match item {
            Item::Algebra(spec) => {
                let (name, a) = env.algebra(spec)?;
                env.algebras.insert(name.clone(), a.clone());
                last = Some((name, a));
                action = None;
            }
            Item::Group(g) => {
                let name = g.name.clone().expect("group items are named");
                let grp = env.group_table(g, name.pos)?;
                env.groups.insert(name.text, grp);
            }
            Item::Action(spec) => {
                let Some((_, a)) = &last else {
                    return Err(diag(spec.pos, "action before any algebra"));
                };
                action = Some(env.action(spec, a)?);
            }
        }
    }
    let (name, algebra) = last.ok_or_else(|| diag(Pos { line: 1, col: 1 }, "no algebra defined"))?;
    Ok(Loaded { name, algebra, action })
}

pub fn elaborate(spec: &AlgebraSpec) -> Result<Arc<Algebra>, Diagnostic> {
    Env::default().algebra(spec).map(|(_, a)| a)
}

pub fn elaborate_document(doc: &Document) -> Result<Loaded, Diagnostic> {
    run(doc)
}

/// Parses an action block (plus any group definitions) against an existing algebra.
pub fn elaborate_action(text: &str, over: &Arc<Algebra>) -> Result<GroupAction, Diagnostic> {
    let doc = parse_document(text)?;
    let mut env = Env::default();
    let mut found = None;
    for item in &doc.items {
        match item {
            Item::Group(g) => {
                let name = g.name.clone().expect("group items are named");
                let grp = env.group_table(g, name.pos)?;
                env.groups.insert(name.text, grp);
            }
            Item::Action(spec) => found = Some(env.action(spec, over)?),
            Item::Algebra(spec) => {
                let (name, a) = env.algebra(spec)?;
                env.algebras.insert(name, a);
            }
        }
    }
    found.ok_or_else(|| diag(Pos { line: 1, col: 1 }, "no action block"))
}

pub fn load(text: &str) -> crate::error::Result<Loaded> {
    let doc = parse_document(text).map_err(Error::Parse)?;
    run(&doc).map_err(Error::Parse)
}

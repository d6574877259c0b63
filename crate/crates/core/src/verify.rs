//! The invariant suite run by `ncdiff verify`: every identity the library promises, checked
//! exactly on one algebra. Checks are independent, may run concurrently, and each draws from
//! its own seeded stream; the report is sorted by `(module, name)`.

use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    check_derivation_hom_correspondence, derivation_space, derivation_to_maps, is_derivation, Algebra, AlgebraHom, Bimodule,
};
use crate::connections::{self, bianchi, check_projection_curvature, find_projections, Bundle, OPPOSITE_INVOLUTIVITY};
use crate::derivations::{
    algebraic_bracket, check_lie_contraction, check_sum_brackets, decompose_derivation, field_space, field_valued_space, fn_bracket,
    lie_bracket_fields, naturality_checks, ops_agree, push_forward, random_fvf, FieldValuedForm, GradedOp, IdentityCheck,
};
use crate::dsl;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::forms::{commutator_subspace, kernel_of_mu_n, Form, Omega};
use crate::group::GroupAction;
use crate::hochschild::{self, cocycle_to_hom, hom_to_cocycle, CochainComplex, NormalizedCochain};
use crate::linalg::{solve_linear, Matrix, Subspace};
use crate::random::{small_scalar, small_vector, sparse_vector, trial_rng};
use crate::scalar::{self, Scalar};
use crate::schouten::{
    insertion, is_polyderivation, nr_bracket, poisson_bracket_hom_check, poisson_check, polyderivation_space, random_polyderivation,
    schouten_closure_check, MultiMap, Values,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub truncation: usize,
    pub seed: u64,
    pub trials: usize,
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { truncation: 2, seed: 0, trials: 50, exec: Execution::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A size cap was hit; nothing was decided.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub module: String,
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub version: String,
    pub algebra: String,
    pub dim: usize,
    pub seed: u64,
    pub truncation: usize,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub all_pass: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

struct Ctx {
    algebra: Arc<Algebra>,
    om: Arc<Omega>,
    action: GroupAction,
    cfg: VerifyConfig,
    /// Bases of `Ω^1_k`, `None` past the size cap.
    bases: [OnceLock<Option<Vec<FieldValuedForm>>>; 4],
}

impl Ctx {
    fn basis(&self, k: usize) -> Option<&[FieldValuedForm]> {
        self.bases.get(k)?.get_or_init(|| field_valued_space(&self.om, k).ok()).as_deref()
    }

    fn sample<R: Rng>(&self, k: usize, rng: &mut R) -> FieldValuedForm {
        random_fvf(&self.om, self.basis(k), k, rng)
    }
}

/// `Ok(None)` passes, `Ok(Some(w))` fails with witness `w`.
type Outcome = Result<Option<String>>;
type CheckFn = fn(&Ctx, &mut ChaCha8Rng) -> Outcome;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("scalar-linalg", "(a/b + c/d) - c/d = a/b", scalar_round_trip),
    ("scalar-linalg", "rank(M) = rank(M^T)", rank_transpose),
    ("scalar-linalg", "subspace sum and intersection commute and associate", subspace_lattice),
    ("algebra-core", "structure constants are associative with unit e_0", table_valid),
    ("algebra-core", "derivation basis satisfies Leibniz", derivation_basis_leibniz),
    ("algebra-core", "inner derivations lie in the derivation space", inner_derivations_members),
    ("algebra-core", "derivations = sections of A x| A -> A", derivation_sections),
    ("algebra-dsl", "parse(print(A)) = A", dsl_round_trip),
    ("forms", "dim Omega_1 = dim ker(mu: A(x)A -> A)", omega_one_dim),
    ("forms", "dim Omega_k = dim Omega_1 (x)_A Omega_{k-1}", omega_tensor_dims),
    ("forms", "d o d = 0", d_squared),
    ("forms", "d(w h) = dw h + (-1)^k w dh", d_leibniz),
    ("forms", "(a w) b = a (w b) and (w h) g = w (h g)", forms_associative),
    ("forms", "d maps graded commutators into graded commutators", d_commutators),
    ("forms", "ker mu^n = sum of A^i (x) Omega_1 (x) A^j", kernel_mu_n),
    ("derivations-fn", "fields satisfy Leibniz and kill 1", fields_valid),
    ("derivations-fn", "dim field space = dim Der(A)", field_space_dim),
    ("derivations-fn", "K -> j_K is injective", j_injective),
    ("derivations-fn", "[D1,D2] = -(-1)^{d1 d2} [D2,D1] on Omega", op_antisymmetry),
    ("derivations-fn", "graded Jacobi for operator commutators", op_jacobi),
    ("derivations-fn", "[K,L] = -(-1)^{kl} [L,K]", fn_antisymmetry),
    ("derivations-fn", "j([K,L]^D) = [j_K, j_L]", j_bracket),
    ("derivations-fn", "L([K,L]) = [L_K, L_L]", l_bracket),
    ("derivations-fn", "decompose(L_K + j_L) = (K, L)", decomposition),
    ("derivations-fn", "[L_K, j_L] = j([K,L]) - (-1)^{kl} L(j_L o K)", lemma_l_j),
    ("derivations-fn", "[L_K1 + j_L1, L_K2 + j_L2] and its two expansions", theorem_relations),
    ("derivations-fn", "brackets of f-related pairs are f-related", naturality),
    ("connections", "curvature formulas and ideals for every projection found", projection_lemma),
    ("connections", "[P,P] = R + Rbar, Rbar_P = R_Pbar and Bianchi", projection_bianchi),
    ("connections", "lambda_g commutes with d", lambda_d),
    ("connections", "dim Omega_1 - dim Omega^hor_1 = dim A(x)_B A - dim A", splitting_row),
    ("hochschild", "delta o delta = 0", delta_squared),
    ("hochschild", "forms route = normalized complex, M = A", routes_regular),
    ("hochschild", "forms route = normalized complex, M = A(x)A", routes_free),
    ("hochschild", "cocycle -> bimodule hom -> cocycle is the identity", cocycle_round_trip),
    ("schouten", "alternation is idempotent with skew image", alternation),
    ("schouten", "arity(i_K L) = arity K + arity L - 1", insertion_arity),
    ("schouten", "[K,L] = -(-1)^{kl} [L,K] and graded Jacobi", nr_jacobi),
    ("schouten", "arity-one bracket = -(field bracket)", arity_one_bracket),
    ("schouten", "brackets of polyderivations are polyderivations", polyderivation_closure),
    ("schouten", "the commutator is a Poisson structure", commutator_poisson),
];

/// Runs the suite. `action` defaults to the trivial action.
pub fn run(algebra: &Arc<Algebra>, label: &str, action: Option<GroupAction>, cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.truncation == 0 {
        return Err(Error::Input("truncation N must be at least 1".into()));
    }
    let ctx = Ctx {
        algebra: algebra.clone(),
        om: Omega::new(algebra.clone()),
        action: action.unwrap_or_else(|| GroupAction::trivial(algebra)),
        cfg: cfg.clone(),
        bases: Default::default(),
    };
    let results = cfg.exec.map_range(CHECKS.len(), |i| {
        let (module, name, f) = CHECKS[i];
        let mut rng = trial_rng(cfg.seed, i as u64);
        let (status, witness) = match f(&ctx, &mut rng) {
            Ok(None) => (Status::Pass, None),
            Ok(Some(w)) => (Status::Fail, Some(w)),
            Err(e @ Error::SizeCap { .. }) => (Status::Skipped, Some(e.to_string())),
            Err(e) => (Status::Fail, Some(format!("error: {e}"))),
        };
        CheckResult { module: module.to_string(), name: name.to_string(), status, witness }
    });
    let mut checks = results;
    checks.sort_by(|a, b| (&a.module, &a.name).cmp(&(&b.module, &b.name)));
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skipped));
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").to_string(),
        algebra: label.to_string(),
        dim: algebra.dim(),
        seed: cfg.seed,
        truncation: cfg.truncation,
        trials: cfg.trials,
        checks,
        passed,
        failed,
        skipped,
        all_pass: failed == 0,
    })
}

fn trials(ctx: &Ctx, rng: &mut ChaCha8Rng, mut f: impl FnMut(&mut ChaCha8Rng) -> Outcome) -> Outcome {
    for t in 0..ctx.cfg.trials {
        if let Some(w) = f(rng)? {
            return Ok(Some(format!("trial {t}: {w}")));
        }
    }
    Ok(None)
}

fn fail_if(bad: bool, witness: impl FnOnce() -> String) -> Outcome {
    Ok(bad.then(witness))
}

fn first_failed(checks: &[IdentityCheck]) -> Option<String> {
    checks.iter().find(|c| !c.holds).map(|c| format!("fails: {}", c.name))
}

fn coords(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn form_diff(om: &Omega, lhs: &Form, rhs: &Form) -> String {
    let diff = lhs.sub(rhs);
    let first = diff.terms().next().map(|(idx, _)| idx);
    match first {
        Some(idx) => format!("at {}: {} vs {}", om.label(diff.degree(), idx), lhs.coeff(idx), rhs.coeff(idx)),
        None => "forms differ in degree".into(),
    }
}

fn random_form<R: Rng>(om: &Omega, k: usize, rng: &mut R) -> Form {
    om.from_dense(k, &sparse_vector(rng, om.dim(k), 4)).expect("sized")
}

fn random_element<R: Rng>(a: &Algebra, rng: &mut R) -> Vec<Scalar> {
    small_vector(rng, a.dim())
}

fn describe_fvf(om: &Omega, k: &FieldValuedForm) -> String {
    let parts: Vec<String> = (0..om.m()).map(|i| coords(&om.to_dense(k.delta(i)))).collect();
    format!("delta = ({})", parts.join(", "))
}

fn scalar_round_trip(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    trials(ctx, rng, |rng| {
        let mut q = || scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        let (x, y) = (q(), q());
        fail_if(&(&x + &y) - &y != x, || format!("a/b = {x}, c/d = {y}"))
    })
}

fn random_matrix<R: Rng>(rng: &mut R, max: usize) -> Matrix {
    let (r, c) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
    let rows = (0..r).map(|_| sparse_vector(rng, c, c)).collect();
    Matrix::from_rows(rows, c).expect("sized")
}

fn rank_transpose(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let max = ctx.algebra.dim() + 2;
    trials(ctx, rng, |rng| {
        let m = random_matrix(rng, max);
        let (r, rt) = (m.rank(), m.transpose().rank());
        fail_if(r != rt, || format!("{}x{} matrix: rank {r}, transpose rank {rt}", m.rows(), m.cols()))
    })
}

fn random_subspace<R: Rng>(rng: &mut R, ambient: usize) -> Subspace {
    let gens: Vec<Vec<Scalar>> = (0..rng.gen_range(0..=ambient)).map(|_| sparse_vector(rng, ambient, 2)).collect();
    Subspace::from_generators(ambient, gens)
}

fn subspace_lattice(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let n = ctx.algebra.dim() + 1;
    trials(ctx, rng, |rng| {
        let (u, v, w) = (random_subspace(rng, n), random_subspace(rng, n), random_subspace(rng, n));
        let sum_ok = u.sum(&v)? == v.sum(&u)? && u.sum(&v)?.sum(&w)? == u.sum(&v.sum(&w)?)?;
        let cap_ok =
            u.intersection(&v)? == v.intersection(&u)? && u.intersection(&v)?.intersection(&w)? == u.intersection(&v.intersection(&w)?)?;
        fail_if(!(sum_ok && cap_ok), || format!("dims {}, {}, {} in {n}", u.dim(), v.dim(), w.dim()))
    })
}

fn table_valid(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let m = a.dim();
    let names = a.names();
    for i in 0..m {
        if a.mul_basis_coords(0, i) != a.basis_coords(i) || a.mul_basis_coords(i, 0) != a.basis_coords(i) {
            return Ok(Some(format!("e_0 is not a unit on {}", names[i])));
        }
        for j in 0..m {
            for k in 0..m {
                let lhs = a.mul_coords(&a.mul_basis_coords(i, j), &a.basis_coords(k));
                let rhs = a.mul_coords(&a.basis_coords(i), &a.mul_basis_coords(j, k));
                if lhs != rhs {
                    return Ok(Some(format!(
                        "({} {}) {} = {} but {} ({} {}) = {}",
                        names[i],
                        names[j],
                        names[k],
                        coords(&lhs),
                        names[i],
                        names[j],
                        names[k],
                        coords(&rhs)
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn derivation_basis_leibniz(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let m = Bimodule::regular(a);
    let maps = derivation_to_maps(&derivation_space(a, &m), a, &m);
    if let Some(i) = maps.iter().position(|d| !is_derivation(a, &m, d)) {
        return Ok(Some(format!("basis derivation {i}")));
    }
    if maps.is_empty() {
        return Ok(None);
    }
    trials(ctx, rng, |rng| {
        let mut d = Matrix::zeros(a.dim(), a.dim());
        for b in &maps {
            d = d.add(&b.scale(&small_scalar(rng)))?;
        }
        fail_if(!is_derivation(a, &m, &d), || "random combination of the basis".into())
    })
}

fn inner_derivations_members(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let n = a.dim();
    let space = derivation_space(a, &Bimodule::regular(a));
    trials(ctx, rng, |rng| {
        let x = random_element(a, rng);
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            let e = a.basis_coords(i);
            flat.extend(a.mul_coords(&x, &e).into_iter().zip(a.mul_coords(&e, &x)).map(|(p, q)| p - q));
        }
        fail_if(!space.contains(&flat)?, || format!("ad_x for x = {}", coords(&x)))
    })
}

fn derivation_sections(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    fail_if(!check_derivation_hom_correspondence(a, &Bimodule::regular(a))?, || "regular bimodule".into())
}

fn dsl_round_trip(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let text = dsl::print_algebra(&ctx.algebra, "a");
    let loaded = dsl::load(&text)?;
    fail_if(*loaded.algebra != *ctx.algebra, || format!("printed text does not reload to the same table:\n{text}"))
}

fn omega_one_dim(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let m = a.dim();
    let columns: Vec<Vec<Scalar>> = (0..m * m).map(|t| a.mul_basis_coords(t / m, t % m)).collect();
    let kernel = m * m - Matrix::from_columns(&columns, m)?.rank();
    fail_if(kernel != ctx.om.dim(1), || format!("ker mu has dim {kernel}, Omega_1 has dim {}", ctx.om.dim(1)))
}

fn omega_tensor_dims(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    let one = hochschild::forms_bimodule(om, 1)?;
    for k in 2..=ctx.cfg.truncation.min(3) {
        let prev = hochschild::forms_bimodule(om, k - 1)?;
        crate::limits::check_dense("tensor relations", one.dim() * prev.dim(), one.dim() * prev.dim())?;
        let t = crate::algebra::tensor_over(&one, &prev)?;
        if t.dim() != om.dim(k) {
            return Ok(Some(format!("k = {k}: tensor product has dim {}, Omega_k has dim {}", t.dim(), om.dim(k))));
        }
        let expected = ctx.algebra.dim() * (ctx.algebra.dim() - 1).pow(k as u32);
        if t.dim() != expected {
            return Ok(Some(format!("k = {k}: dim {} but m(m-1)^k = {expected}", t.dim())));
        }
    }
    Ok(None)
}

fn d_squared(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    for k in 0..=ctx.cfg.truncation {
        for idx in 0..om.check_dim(k)? {
            let dd = om.d(&om.d(&Form::basis(k, idx)));
            if !dd.is_zero() {
                return Ok(Some(format!("d d {} = {}", om.label(k, idx), form_diff(om, &dd, &Form::zero(k + 2)))));
            }
        }
    }
    Ok(None)
}

fn d_leibniz(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    let n = ctx.cfg.truncation;
    trials(ctx, rng, |rng| {
        let k = rng.gen_range(0..=n);
        let l = rng.gen_range(0..=n - k);
        let (w, h) = (random_form(om, k, rng), random_form(om, l, rng));
        let lhs = om.d(&om.mul(&w, &h));
        let rhs = om.mul(&om.d(&w), &h).add(&om.mul(&w, &om.d(&h)).scale(&scalar::sign(k as i64)));
        fail_if(lhs != rhs, || format!("degrees ({k}, {l}), {}", form_diff(om, &lhs, &rhs)))
    })
}

fn forms_associative(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    let n = ctx.cfg.truncation;
    trials(ctx, rng, |rng| {
        let k = rng.gen_range(0..=n);
        let (a, b) = (random_element(&ctx.algebra, rng), random_element(&ctx.algebra, rng));
        let w = random_form(om, k, rng);
        let (lhs, rhs) = (om.right(&om.left(&a, &w), &b), om.left(&a, &om.right(&w, &b)));
        if lhs != rhs {
            return Ok(Some(format!("bimodule, degree {k}, {}", form_diff(om, &lhs, &rhs))));
        }
        let l = rng.gen_range(0..=n - k);
        let g = rng.gen_range(0..=n - k - l);
        let (h, f) = (random_form(om, l, rng), random_form(om, g, rng));
        let (lhs, rhs) = (om.mul(&om.mul(&w, &h), &f), om.mul(&w, &om.mul(&h, &f)));
        fail_if(lhs != rhs, || format!("product, degrees ({k}, {l}, {g}), {}", form_diff(om, &lhs, &rhs)))
    })
}

fn d_commutators(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    let exec = ctx.cfg.exec;
    let mut below = commutator_subspace(om, 0, exec)?;
    for r in 0..ctx.cfg.truncation {
        let above = commutator_subspace(om, r + 1, exec)?;
        for (i, v) in below.basis().iter().enumerate() {
            let img = om.to_dense(&om.d(&om.from_dense(r, v)?));
            if !above.contains(&img)? {
                return Ok(Some(format!("degree {r}, commutator basis vector {i}: {}", coords(v))));
            }
        }
        below = above;
    }
    Ok(None)
}

fn kernel_mu_n(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    for n in 2..=ctx.cfg.truncation.clamp(2, 3) {
        if !kernel_of_mu_n(&ctx.algebra, n)? {
            return Ok(Some(format!("n = {n}")));
        }
    }
    Ok(None)
}

fn fields_valid(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    for (i, x) in field_space(om)?.iter().enumerate() {
        if let Some((p, q)) = x.leibniz_violation(om) {
            return Ok(Some(format!("field {i}: Leibniz fails on ({p}, {q})")));
        }
        if !x.delta(0).is_zero() {
            return Ok(Some(format!("field {i}: X(1) != 0")));
        }
    }
    Ok(None)
}

fn field_space_dim(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let (fields, der) = (field_space(&ctx.om)?.len(), derivation_space(a, &Bimodule::regular(a)).dim());
    fail_if(fields != der, || format!("field space {fields}, Der {der}"))
}

fn j_injective(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    for k in 0..=ctx.cfg.truncation.min(2) {
        let basis = field_valued_space(om, k)?;
        if basis.is_empty() {
            continue;
        }
        // j_K restricted to Ω_1 already determines K
        let columns: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|b| {
                let j = GradedOp::j(b.clone());
                (0..om.dim(1)).flat_map(|idx| om.to_dense(&j.apply(om, &Form::basis(1, idx)))).collect()
            })
            .collect();
        let rows = columns[0].len();
        let rank = Matrix::from_columns(&columns, rows)?.rank();
        if rank != basis.len() {
            return Ok(Some(format!("degree {k}: rank {rank} on a basis of {}", basis.len())));
        }
    }
    Ok(None)
}

fn random_op<R: Rng>(ctx: &Ctx, n: usize, rng: &mut R) -> GradedOp {
    let k = rng.gen_range(0..=n.min(2));
    let f = ctx.sample(k, rng);
    match rng.gen_range(0..3) {
        0 => GradedOp::j(f),
        1 => GradedOp::l(f),
        _ => GradedOp::D,
    }
}

fn op_antisymmetry(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let (om, n) = (&ctx.om, ctx.cfg.truncation);
    trials(ctx, rng, |rng| {
        let (a, b) = (random_op(ctx, n, rng), random_op(ctx, n, rng));
        let lhs = GradedOp::commutator(&a, &b);
        let rhs = GradedOp::lin(vec![(-scalar::sign(a.degree() * b.degree()), GradedOp::commutator(&b, &a))])?;
        fail_if(!ops_agree(om, &lhs, &rhs, n, Execution::Sequential)?, || format!("degrees ({}, {})", a.degree(), b.degree()))
    })
}

fn op_jacobi(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let (om, n) = (&ctx.om, ctx.cfg.truncation);
    let c = GradedOp::commutator;
    trials(ctx, rng, |rng| {
        let (x, y, z) = (random_op(ctx, 1, rng), random_op(ctx, 1, rng), random_op(ctx, 1, rng));
        let lhs = c(&x, &c(&y, &z));
        let rhs = GradedOp::lin(vec![(scalar::one(), c(&c(&x, &y), &z)), (scalar::sign(x.degree() * y.degree()), c(&y, &c(&x, &z)))])?;
        fail_if(!ops_agree(om, &lhs, &rhs, n, Execution::Sequential)?, || {
            format!("degrees ({}, {}, {})", x.degree(), y.degree(), z.degree())
        })
    })
}

fn degree_pair<R: Rng>(rng: &mut R, lo: usize) -> (usize, usize) {
    (rng.gen_range(lo..=2), rng.gen_range(lo..=2))
}

fn fn_antisymmetry(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    trials(ctx, rng, |rng| {
        let (p, q) = degree_pair(rng, 0);
        let (k, l) = (ctx.sample(p, rng), ctx.sample(q, rng));
        let lhs = fn_bracket(om, &k, &l);
        let rhs = fn_bracket(om, &l, &k).scale(&-scalar::sign((p * q) as i64));
        fail_if(lhs != rhs, || format!("degrees ({p}, {q}), K {}, L {}", describe_fvf(om, &k), describe_fvf(om, &l)))
    })
}

fn j_bracket(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let (om, n) = (&ctx.om, ctx.cfg.truncation);
    trials(ctx, rng, |rng| {
        let (p, q) = degree_pair(rng, 1);
        let (k, l) = (ctx.sample(p, rng), ctx.sample(q, rng));
        let lhs = GradedOp::j(algebraic_bracket(om, &k, &l)?);
        let rhs = GradedOp::commutator(&GradedOp::j(k.clone()), &GradedOp::j(l.clone()));
        fail_if(!ops_agree(om, &lhs, &rhs, n, Execution::Sequential)?, || {
            format!("degrees ({p}, {q}), K {}, L {}", describe_fvf(om, &k), describe_fvf(om, &l))
        })
    })
}

fn l_bracket(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let (om, n) = (&ctx.om, ctx.cfg.truncation);
    trials(ctx, rng, |rng| {
        let (p, q) = degree_pair(rng, 0);
        let (k, l) = (ctx.sample(p, rng), ctx.sample(q, rng));
        let lhs = GradedOp::l(fn_bracket(om, &k, &l));
        let rhs = GradedOp::commutator(&GradedOp::l(k.clone()), &GradedOp::l(l.clone()));
        fail_if(!ops_agree(om, &lhs, &rhs, n, Execution::Sequential)?, || {
            format!("degrees ({p}, {q}), K {}, L {}", describe_fvf(om, &k), describe_fvf(om, &l))
        })
    })
}

fn decomposition(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let (om, n) = (&ctx.om, ctx.cfg.truncation);
    trials(ctx, rng, |rng| {
        let p = rng.gen_range(0..=1);
        let (k, l) = (ctx.sample(p, rng), ctx.sample(p + 1, rng));
        let op = GradedOp::l(k.clone()).plus(&GradedOp::j(l.clone()))?;
        let dec = decompose_derivation(om, &op.materialize(om, n)?, Execution::Sequential)?;
        let ok = dec.k.as_ref() == Some(&k) && dec.l == l && dec.reconstructs;
        fail_if(!ok, || format!("degree {p}, K {}, L {}", describe_fvf(om, &k), describe_fvf(om, &l)))
    })
}

// index 1 is the swapped form with the wrong sign, which fails
const LEMMA_L_J_PROMISED: [usize; 2] = [0, 2];

fn lemma_l_j(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let (om, n) = (&ctx.om, ctx.cfg.truncation);
    trials(ctx, rng, |rng| {
        let p = rng.gen_range(0..=1);
        let q = rng.gen_range(1..=2);
        let (k, l) = (ctx.sample(p, rng), ctx.sample(q, rng));
        let checks = check_lie_contraction(om, &k, &l, n, Execution::Sequential)?;
        let promised: Vec<IdentityCheck> = LEMMA_L_J_PROMISED.iter().map(|&i| checks[i].clone()).collect();
        Ok(first_failed(&promised).map(|w| format!("degrees ({p}, {q}), {w}")))
    })
}

fn theorem_relations(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let (om, n) = (&ctx.om, ctx.cfg.truncation);
    trials(ctx, rng, |rng| {
        let (p, q) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let (k1, k2) = (ctx.sample(p, rng), ctx.sample(q, rng));
        let (l1, l2) = (ctx.sample(p + 1, rng), ctx.sample(q + 1, rng));
        let checks = check_sum_brackets(om, &k1, &k2, &l1, &l2, n, Execution::Sequential)?;
        Ok(first_failed(&checks).map(|w| format!("degrees ({p}, {q}), {w}")))
    })
}

/// `x ↦ u x u^{-1}` for the first non-central unit among `1 + e_i`, `e_i`; else the identity.
fn inner_automorphism(a: &Arc<Algebra>) -> Result<AlgebraHom> {
    let m = a.dim();
    let one = a.unit_coords();
    let candidates = (1..m).flat_map(|i| {
        let e = a.basis_coords(i);
        let shifted: Vec<Scalar> = e.iter().zip(&one).map(|(x, y)| x + y).collect();
        [shifted, e]
    });
    for u in candidates {
        let lu = Matrix::from_columns(&(0..m).map(|j| a.mul_coords(&u, &a.basis_coords(j))).collect::<Vec<_>>(), m)?;
        let Some((inv, _)) = solve_linear(&lu, &one)? else { continue };
        if a.mul_coords(&inv, &u) != one {
            continue;
        }
        let cols: Vec<Vec<Scalar>> = (0..m).map(|j| a.mul_coords(&a.mul_coords(&u, &a.basis_coords(j)), &inv)).collect();
        let mat = Matrix::from_columns(&cols, m)?;
        if mat != Matrix::identity(m) {
            return AlgebraHom::new(a.clone(), a.clone(), mat);
        }
    }
    Ok(AlgebraHom::identity(a))
}

fn naturality(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let (om, n) = (&ctx.om, ctx.cfg.truncation);
    let f = inner_automorphism(&ctx.algebra)?;
    trials(ctx, rng, |rng| {
        let (p, q) = degree_pair(rng, 0);
        let (k1, k2) = (ctx.sample(p, rng), ctx.sample(q, rng));
        let (Some(k1p), Some(k2p)) = (push_forward(om, om, &f, &k1)?, push_forward(om, om, &f, &k2)?) else {
            return Ok(Some("an automorphism failed to push a field valued form forward".into()));
        };
        let checks = naturality_checks(om, om, &f, (&k1, &k1p), (&k2, &k2p), n)?;
        Ok(first_failed(&checks).map(|w| format!("degrees ({p}, {q}), {w}")))
    })
}

fn projection_lemma(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    let n = ctx.cfg.truncation.min(3);
    for (i, p) in find_projections(om)?.projections.iter().enumerate() {
        let checks: Vec<IdentityCheck> =
            check_projection_curvature(om, p, n)?.into_iter().filter(|c| !OPPOSITE_INVOLUTIVITY.contains(&c.name.as_str())).collect();
        if let Some(w) = first_failed(&checks) {
            return Ok(Some(format!("projection {i} with matrix {:?}: {w}", p.matrix())));
        }
    }
    Ok(None)
}

fn projection_bianchi(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let om = &ctx.om;
    for (i, p) in find_projections(om)?.projections.iter().enumerate() {
        if let Some(w) = first_failed(&bianchi(om, p)?) {
            return Ok(Some(format!("projection {i} with matrix {:?}: {w}", p.matrix())));
        }
    }
    Ok(None)
}

fn lambda_d(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let n = ctx.cfg.truncation;
    if !connections::lambda_commutes_with_d(&ctx.om, &ctx.action, n)? {
        return Ok(Some("group action".into()));
    }
    let f = inner_automorphism(&ctx.algebra)?;
    let Some(inv) = f.inverse() else { return Ok(Some("inner automorphism has no inverse".into())) };
    for (tag, h) in [("inner automorphism", &f), ("its inverse", &inv)] {
        for k in 1..=n {
            let functor = |j| crate::forms::omega_functor(&ctx.om, &ctx.om, h, j);
            if functor(k)?.mul(&ctx.om.d_matrix(k - 1)?)? != ctx.om.d_matrix(k - 1)?.mul(&functor(k - 1)?)? {
                return Ok(Some(format!("{tag}, degree {k}")));
            }
        }
    }
    Ok(None)
}

fn splitting_row(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let bases = [
        ("fixed subalgebra", Bundle::from_action(ctx.action.clone())),
        ("center", Bundle::new(a.clone(), a.center())?),
        ("scalars", Bundle::new(a.clone(), Subspace::from_generators(a.dim(), [a.unit_coords()]))?),
    ];
    for (tag, b) in bases {
        if !connections::splitting_row_holds(&ctx.om, &b)? {
            return Ok(Some(format!("B = {tag}")));
        }
    }
    Ok(None)
}

fn modules(a: &Arc<Algebra>) -> [(&'static str, Bimodule); 2] {
    [("A", Bimodule::regular(a)), ("A(x)A", Bimodule::free(a))]
}

fn delta_squared(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    for (tag, module) in modules(a) {
        let cx = CochainComplex::new(module);
        for n in 0..ctx.cfg.truncation {
            cx.check_dim(n + 2)?;
            let c = NormalizedCochain::random(a, n, cx.module().dim(), rng);
            if !cx.coboundary(&cx.coboundary(&c)?)?.is_zero() {
                return Ok(Some(format!("M = {tag}, n = {n}, c = {}", coords(c.values()))));
            }
        }
    }
    Ok(None)
}

fn routes(ctx: &Ctx, module: Bimodule) -> Outcome {
    for n in 0..=ctx.cfg.truncation {
        let r = hochschild::cohomology(&ctx.om, &module, n, ctx.cfg.exec)?;
        if !r.agree {
            return Ok(Some(format!("n = {n}: forms route {}, complex {}", r.dim_hn_forms, r.dim_hn_complex)));
        }
    }
    Ok(None)
}

fn routes_regular(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    routes(ctx, Bimodule::regular(&ctx.algebra))
}

fn routes_free(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    routes(ctx, Bimodule::free(&ctx.algebra))
}

fn cocycle_round_trip(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    for (tag, module) in modules(a) {
        let cx = CochainComplex::new(module.clone());
        for n in 1..=ctx.cfg.truncation {
            cx.check_dim(n)?;
            let c = cx.coboundary(&NormalizedCochain::random(a, n - 1, module.dim(), rng))?;
            let back = hom_to_cocycle(&ctx.om, n, &cocycle_to_hom(&ctx.om, &module, &c)?)?;
            if back != c {
                return Ok(Some(format!("M = {tag}, n = {n}, c = {}", coords(c.values()))));
            }
        }
    }
    Ok(None)
}

fn random_map<R: Rng>(a: &Arc<Algebra>, arity: usize, values: Values, rng: &mut R) -> Result<MultiMap> {
    MultiMap::random_skew(a, arity, values, rng)
}

fn alternation(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let m = a.dim();
    trials(ctx, rng, |rng| {
        let arity = rng.gen_range(1..=3);
        let raw = MultiMap::new(a.clone(), arity, Values::Algebra, small_vector(rng, m.pow(arity as u32) * m))?;
        let alt = raw.alternate();
        fail_if(!alt.is_skew() || alt.alternate() != alt, || format!("arity {arity}"))
    })
}

fn insertion_arity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    trials(ctx, rng, |rng| {
        let (p, q) = (rng.gen_range(1..=2), rng.gen_range(0..=2));
        let values = if rng.gen_bool(0.5) { Values::Algebra } else { Values::Scalar };
        let (k, l) = (random_map(a, p, Values::Algebra, rng)?, random_map(a, q, values, rng)?);
        let out = insertion(&k, &l)?;
        let expected = p + q - 1;
        fail_if(out.arity() != expected || out.values() != values || !out.is_skew(), || format!("arities ({p}, {q}) gave {}", out.arity()))
    })
}

fn nr_jacobi(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let max = if a.dim() > 3 { 2 } else { 3 };
    trials(ctx, rng, |rng| {
        let draw = |rng: &mut ChaCha8Rng| random_map(a, rng.gen_range(1..=max), Values::Algebra, rng);
        let (k, l, n) = (draw(rng)?, draw(rng)?, draw(rng)?);
        let (dk, dl) = (k.degree(), l.degree());
        let kl = nr_bracket(&k, &l)?;
        if kl != nr_bracket(&l, &k)?.scale(&-scalar::sign(dk * dl)) {
            return Ok(Some(format!("antisymmetry, arities ({}, {})", k.arity(), l.arity())));
        }
        if k.arity() + l.arity() + n.arity() > 6 {
            return Ok(None);
        }
        let lhs = nr_bracket(&k, &nr_bracket(&l, &n)?)?;
        let rhs = nr_bracket(&kl, &n)?.add(&nr_bracket(&l, &nr_bracket(&k, &n)?)?.scale(&scalar::sign(dk * dl)))?;
        fail_if(lhs != rhs, || format!("Jacobi, arities ({}, {}, {})", k.arity(), l.arity(), n.arity()))
    })
}

fn arity_one_bracket(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let (a, om) = (&ctx.algebra, &ctx.om);
    let m = a.dim();
    let fields = field_space(om)?;
    let as_map = |f: &FieldValuedForm| -> Result<MultiMap> {
        let cols: Vec<Vec<Scalar>> = (0..m).map(|j| om.to_dense(f.delta(j))).collect();
        MultiMap::linear(a, &Matrix::from_columns(&cols, m)?)
    };
    for (i, x) in fields.iter().enumerate() {
        for (j, y) in fields.iter().enumerate() {
            let nr = nr_bracket(&as_map(x)?, &as_map(y)?)?;
            if nr != as_map(&lie_bracket_fields(om, x, y)?)?.scale(&-scalar::one()) {
                return Ok(Some(format!("fields {i}, {j}")));
            }
        }
    }
    Ok(None)
}

fn polyderivation_closure(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let a = &ctx.algebra;
    let bases = [polyderivation_space(a, 1)?, polyderivation_space(a, 2)?];
    trials(ctx, rng, |rng| {
        let (p, q) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let k = random_polyderivation(a, p, &bases[p - 1], rng)?;
        let l = random_polyderivation(a, q, &bases[q - 1], rng)?;
        if !is_polyderivation(&k) || !is_polyderivation(&l) {
            return Ok(Some(format!("sampled maps of arities ({p}, {q}) are not polyderivations")));
        }
        fail_if(!schouten_closure_check(&k, &l)?, || format!("arities ({p}, {q})"))
    })
}

fn commutator_poisson(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let mu = MultiMap::commutator(&ctx.algebra);
    let v = poisson_check(&mu)?;
    if !v.is_poisson() {
        return Ok(Some(format!("skew {}, biderivation {}, jacobi {}", v.skew, v.biderivation, v.jacobi)));
    }
    fail_if(!poisson_bracket_hom_check(&mu)?, || "mu(mu(a,b),c) expansion".into())
}

//! One line per acceptance criterion. All comparisons are exact; the reference values come
//! from the oracles below, written against structure constants and not against the library's
//! linear algebra.

use std::process::{Command, Output};
use std::sync::Arc;
use std::time::Instant;

use ncdiff::algebra::{derivation_space, Algebra, AlgebraHom, Bimodule};
use ncdiff::builtins;
use ncdiff::connections::{bianchi, check_projection_curvature, find_projections, OPPOSITE_INVOLUTIVITY};
use ncdiff::derivations::{
    algebraic_bracket, check_lie_contraction, check_sum_brackets, decompose_derivation, field_space, field_valued_space, fn_bracket,
    naturality_checks, ops_agree, push_forward, random_fvf, FieldValuedForm, GradedOp,
};
use ncdiff::forms::{kernel_of_mu_n, Form, Omega};
use ncdiff::hochschild::{cohomology, CochainComplex};
use ncdiff::random::trial_rng;
use ncdiff::schouten::{
    is_polyderivation, poisson_bracket_hom_check, poisson_check, polyderivation_space, random_polyderivation, schouten_closure_check,
    MultiMap,
};
use ncdiff::{scalar, Execution, Matrix, Scalar};
use num_traits::Zero;
use rand::Rng;

const SAMPLES: usize = 50;
const SEED: u64 = 20261014;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

// ---- oracles ----

/// Row rank by plain Gauss-Jordan elimination over ℚ.
fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn c(a: &Algebra, i: usize, j: usize, k: usize) -> Scalar {
    a.table().get(i, j, k).clone()
}

/// `dim Der(A)`: unknowns `D(e_i)_r`, one equation per `(i, j, r)`.
fn der_dim_oracle(a: &Algebra) -> usize {
    let m = a.dim();
    let var = |i: usize, r: usize| i * m + r;
    let mut rows = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for r in 0..m {
                let mut row = vec![Scalar::zero(); m * m];
                for k in 0..m {
                    row[var(k, r)] += c(a, i, j, k);
                    // D(e_i) e_j and e_i D(e_j), coordinate r
                    row[var(i, k)] -= c(a, k, j, r);
                    row[var(j, k)] -= c(a, i, k, r);
                }
                rows.push(row);
            }
        }
    }
    m * m - rank(rows)
}

fn center_dim_oracle(a: &Algebra) -> usize {
    let m = a.dim();
    let mut rows = Vec::new();
    for j in 0..m {
        for r in 0..m {
            rows.push((0..m).map(|i| c(a, i, j, r) - c(a, j, i, r)).collect());
        }
    }
    m - rank(rows)
}

/// Elements of `A^{⊗p}` as dense vectors, most significant factor first.
fn tensor_mul(a: &Algebra, u: &[Scalar], p: usize, v: &[Scalar], q: usize) -> Vec<Scalar> {
    let m = a.dim();
    let mut out = vec![Scalar::zero(); m.pow((p + q - 1) as u32)];
    let tail = m.pow((q - 1) as u32);
    for (x, cx) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let (head, last) = (x / m, x % m);
        for (y, cy) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (first, rest) = (y / tail, y % tail);
            for k in 0..m {
                let s = c(a, last, first, k);
                if !s.is_zero() {
                    out[((head * m + k) * tail) + rest] += cx * cy * s;
                }
            }
        }
    }
    out
}

/// `dim Ω_k` as the span of `a_0 da_1 ⋯ da_k` inside `A^{⊗(k+1)}`, with `da = 1⊗a − a⊗1`.
fn omega_dim_oracle(a: &Algebra, k: usize) -> usize {
    let m = a.dim();
    let unit = |i: usize| -> Vec<Scalar> { (0..m).map(|j| if i == j { scalar::one() } else { Scalar::zero() }).collect() };
    let d = |i: usize| -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); m * m];
        v[i] += scalar::one();
        v[i * m] -= scalar::one();
        v
    };
    let mut gens = Vec::new();
    let count = m * (m - 1).pow(k as u32);
    for t in 0..count {
        let (mut rest, mut js) = (t, Vec::new());
        for _ in 0..k {
            js.push(rest % (m - 1) + 1);
            rest /= m - 1;
        }
        let mut acc = unit(rest);
        for (deg, j) in js.into_iter().enumerate() {
            acc = tensor_mul(a, &acc, deg + 1, &d(j), 2);
        }
        gens.push(acc);
    }
    if gens.is_empty() {
        0
    } else {
        rank(gens)
    }
}

// ---- helpers ----

fn roster() -> Vec<(&'static str, Arc<Algebra>)> {
    builtins::roster()
}

fn sampler(om: &Omega) -> impl FnMut(usize, &mut rand_chacha::ChaCha8Rng) -> FieldValuedForm + '_ {
    let bases: Vec<Option<Vec<FieldValuedForm>>> = (0..=3).map(|k| field_valued_space(om, k).ok()).collect();
    move |k, rng| random_fvf(om, bases[k].as_deref(), k, rng)
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

// ---- criteria ----

fn c1_d_squared_and_leibniz() -> Verdict {
    let mut pairs = 0;
    for (name, a) in roster() {
        let om = Omega::new(a);
        for k in 0..=3 {
            for idx in 0..om.dim(k) {
                ensure(om.d(&om.d(&Form::basis(k, idx))).is_zero(), || format!("{name}: d d {} != 0", om.label(k, idx)))?;
            }
        }
        for k in 0..=3 {
            for l in 0..=3 - k {
                for x in 0..om.dim(k) {
                    for y in 0..om.dim(l) {
                        let (w, h) = (Form::basis(k, x), Form::basis(l, y));
                        let lhs = om.d(&om.mul(&w, &h));
                        let rhs = om.mul(&om.d(&w), &h).add(&om.mul(&w, &om.d(&h)).scale(&scalar::sign(k as i64)));
                        ensure(lhs == rhs, || format!("{name}: Leibniz fails on {} * {}", om.label(k, x), om.label(l, y)))?;
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(format!("all basis forms to degree 3 and {pairs} basis pairs with k + l <= 3, 7 algebras"))
}

fn c2_form_dimensions() -> Verdict {
    let mut dims = Vec::new();
    for (name, a) in roster() {
        let om = Omega::new(a.clone());
        let m = a.dim();
        for k in 0..=3 {
            let formula = m * (m - 1).pow(k as u32);
            let oracle = omega_dim_oracle(&a, k);
            ensure(om.dim(k) == formula && oracle == formula, || {
                format!("{name}, k = {k}: library {}, span in A^(k+1) {oracle}, m(m-1)^k {formula}", om.dim(k))
            })?;
        }
        dims.push(format!("{name} {:?}", (0..=3).map(|k| om.dim(k)).collect::<Vec<_>>()));
    }
    Ok(dims.join("; "))
}

fn c3_three_counts_of_derivations() -> Verdict {
    let mut out = Vec::new();
    for (name, a) in roster() {
        let om = Omega::new(a.clone());
        let der = derivation_space(&a, &Bimodule::regular(&a)).dim();
        let fields = field_space(&om).map_err(|e| e.to_string())?.len();
        let cx = CochainComplex::new(Bimodule::regular(&a));
        let z1 = cx.dim(1) - cx.coboundary_rank(1, Execution::default()).map_err(|e| e.to_string())?;
        let oracle = der_dim_oracle(&a);
        ensure(der == oracle && fields == oracle && z1 == oracle, || {
            format!("{name}: Der {der}, fields {fields}, cocycles {z1}, oracle {oracle}")
        })?;
        out.push(format!("{name} {oracle}"));
    }
    let of = |n: &str| der_dim_oracle(&builtins::by_name(n, &[]).unwrap());
    ensure(der_dim_oracle(&builtins::matrix(2)) == 3 && of("dual") == 1, || "M_2 or dual numbers off".into())?;
    Ok(out.join(", "))
}

fn c4_operator_identities() -> Verdict {
    for (name, a) in roster() {
        let om = Omega::new(a);
        let mut sample = sampler(&om);
        for t in 0..SAMPLES {
            let mut rng = trial_rng(SEED + 4, t as u64);
            let (p, q) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let (k, l) = (sample(p, &mut rng), sample(q, &mut rng));
            let lhs = GradedOp::j(algebraic_bracket(&om, &k, &l).map_err(|e| e.to_string())?);
            let rhs = GradedOp::commutator(&GradedOp::j(k.clone()), &GradedOp::j(l.clone()));
            ensure(ops_agree(&om, &lhs, &rhs, 2, Execution::Sequential).unwrap(), || {
                format!("{name} trial {t}: j bracket, degrees {p},{q}")
            })?;
            let (p, q) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let (k, l) = (sample(p, &mut rng), sample(q, &mut rng));
            let lhs = GradedOp::l(fn_bracket(&om, &k, &l));
            let rhs = GradedOp::commutator(&GradedOp::l(k.clone()), &GradedOp::l(l.clone()));
            ensure(ops_agree(&om, &lhs, &rhs, 2, Execution::Sequential).unwrap(), || {
                format!("{name} trial {t}: L bracket, degrees {p},{q}")
            })?;
        }
    }
    Ok(format!("{SAMPLES} pairs per identity per algebra, degrees <= 2"))
}

fn c5_decomposition_round_trip() -> Verdict {
    for (name, a) in roster() {
        let om = Omega::new(a);
        let mut sample = sampler(&om);
        for t in 0..SAMPLES {
            let mut rng = trial_rng(SEED + 5, t as u64);
            let p = rng.gen_range(0..=1);
            let (k, l) = (sample(p, &mut rng), sample(p + 1, &mut rng));
            let op = GradedOp::l(k.clone()).plus(&GradedOp::j(l.clone())).unwrap();
            let dec = decompose_derivation(&om, &op.materialize(&om, 2).unwrap(), Execution::Sequential).map_err(|e| e.to_string())?;
            ensure(dec.k.as_ref() == Some(&k) && dec.l == l, || format!("{name} trial {t}: degree {p}"))?;
        }
    }
    Ok(format!("{SAMPLES} pairs per algebra, K in degree 0 or 1"))
}

fn c6_lie_contraction_and_sums() -> Verdict {
    for (name, a) in roster() {
        let om = Omega::new(a);
        let mut sample = sampler(&om);
        for t in 0..SAMPLES {
            let mut rng = trial_rng(SEED + 6, t as u64);
            let (p, q) = (rng.gen_range(0..=1), rng.gen_range(1..=2));
            let (k, l) = (sample(p, &mut rng), sample(q, &mut rng));
            let lemma = check_lie_contraction(&om, &k, &l, 2, Execution::Sequential).map_err(|e| e.to_string())?;
            ensure(lemma[0].holds, || format!("{name} trial {t}: {}", lemma[0].name))?;
            let (p, q) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
            let (k1, k2, l1, l2) = (sample(p, &mut rng), sample(q, &mut rng), sample(p + 1, &mut rng), sample(q + 1, &mut rng));
            for ch in check_sum_brackets(&om, &k1, &k2, &l1, &l2, 2, Execution::Sequential).map_err(|e| e.to_string())? {
                ensure(ch.holds, || format!("{name} trial {t}: {}", ch.name))?;
            }
        }
    }
    Ok(format!("{SAMPLES} tuples per algebra: [L_K, j_L] and the three relations"))
}

fn c7_projections() -> Verdict {
    let mut counts = Vec::new();
    for (name, a) in roster() {
        let om = Omega::new(a);
        let search = find_projections(&om).map_err(|e| e.to_string())?;
        for (i, p) in search.projections.iter().enumerate() {
            for ch in check_projection_curvature(&om, p, 3).map_err(|e| e.to_string())? {
                if !OPPOSITE_INVOLUTIVITY.contains(&ch.name.as_str()) {
                    ensure(ch.holds, || format!("{name} projection {i}: {}", ch.name))?;
                }
            }
            for ch in bianchi(&om, p).map_err(|e| e.to_string())? {
                ensure(ch.holds, || format!("{name} projection {i}: {}", ch.name))?;
            }
        }
        counts.push(format!("{name} {}", search.projections.len()));
    }
    Ok(format!("projections checked: {}; involutivity in the exchanged reading", counts.join(", ")))
}

fn c8_hochschild_routes() -> Verdict {
    for (name, a) in roster() {
        let om = Omega::new(a.clone());
        let m = Bimodule::regular(&a);
        for n in 0..=3 {
            let r = cohomology(&om, &m, n, Execution::default()).map_err(|e| format!("{name} n = {n}: {e}"))?;
            ensure(r.agree, || format!("{name} n = {n}: forms {} vs complex {}", r.dim_hn_forms, r.dim_hn_complex))?;
            if n == 0 {
                let z = center_dim_oracle(&a);
                ensure(r.dim_hn_complex == z, || format!("{name}: H^0 = {} but center has dim {z}", r.dim_hn_complex))?;
            }
        }
    }
    let h1 = |a: Arc<Algebra>| cohomology(&Omega::new(a.clone()), &Bimodule::regular(&a), 1, Execution::default()).unwrap().dim_hn_complex;
    let (m2, du) = (h1(builtins::matrix(2)), h1(builtins::dual()));
    ensure(m2 == 0 && du == 1, || format!("H^1(M_2) = {m2}, H^1(dual) = {du}"))?;
    Ok("n <= 3 with M = A on 7 algebras; H^0 = center, H^1(M_2) = 0, H^1(dual) = 1".into())
}

fn c9_kernel_of_mu_n() -> Verdict {
    for (name, a) in roster().into_iter().filter(|(_, a)| a.dim() <= 4) {
        for n in [2, 3] {
            ensure(kernel_of_mu_n(&a, n).map_err(|e| e.to_string())?, || format!("{name}, n = {n}"))?;
        }
    }
    Ok("n = 2, 3 on 7 algebras".into())
}

fn c10_schouten_closure() -> Verdict {
    for (name, a) in roster() {
        let bases = [polyderivation_space(&a, 1).unwrap(), polyderivation_space(&a, 2).unwrap()];
        for t in 0..SAMPLES {
            let mut rng = trial_rng(SEED + 10, t as u64);
            let (p, q) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let k = random_polyderivation(&a, p, &bases[p - 1], &mut rng).unwrap();
            let l = random_polyderivation(&a, q, &bases[q - 1], &mut rng).unwrap();
            ensure(is_polyderivation(&k) && is_polyderivation(&l), || format!("{name}: sampler"))?;
            ensure(schouten_closure_check(&k, &l).unwrap(), || format!("{name} trial {t}: arities {p},{q}"))?;
        }
        let mu = MultiMap::commutator(&a);
        let v = poisson_check(&mu).map_err(|e| e.to_string())?;
        ensure(v.is_poisson() && poisson_bracket_hom_check(&mu).unwrap(), || format!("{name}: commutator {v:?}"))?;
    }
    Ok(format!("{SAMPLES} pairs per algebra; commutator Poisson on 7 algebras"))
}

fn naturality_suite(src: &Arc<Omega>, dst: &Arc<Omega>, f: &AlgebraHom, tag: &str) -> Result<usize, String> {
    let mut sample = sampler(src);
    let mut related = 0;
    for t in 0..SAMPLES {
        let mut rng = trial_rng(SEED + 11, t as u64);
        let (p, q) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let (k1, k2) = (sample(p, &mut rng), sample(q, &mut rng));
        let (Some(k1p), Some(k2p)) = (push_forward(src, dst, f, &k1).unwrap(), push_forward(src, dst, f, &k2).unwrap()) else {
            continue;
        };
        for ch in naturality_checks(src, dst, f, (&k1, &k1p), (&k2, &k2p), 2).map_err(|e| e.to_string())? {
            ensure(ch.holds, || format!("{tag} trial {t}: {}", ch.name))?;
        }
        related += 1;
    }
    Ok(related)
}

fn c11_naturality() -> Verdict {
    let (a, b) = (builtins::truncpoly(3), builtins::truncpoly(2));
    let quotient = AlgebraHom::new(a.clone(), b.clone(), Matrix::from_i64(2, 3, &[1, 0, 0, 0, 1, 0])).unwrap();
    let (sa, sb) = (Omega::new(a), Omega::new(b));
    // K = x·d and its image
    let x = Form::basis(0, 1);
    let k = FieldValuedForm::new(&sa, 1, (0..3).map(|i| sa.mul(&x, &sa.d(&Form::basis(0, i)))).collect()).unwrap();
    let kp = push_forward(&sa, &sb, &quotient, &k).unwrap().ok_or("x d does not descend")?;
    let (id, idp) = (FieldValuedForm::identity(&sa), FieldValuedForm::identity(&sb));
    for ch in naturality_checks(&sa, &sb, &quotient, (&k, &kp), (&id, &idp), 2).map_err(|e| e.to_string())? {
        ensure(ch.holds, || format!("x d: {}", ch.name))?;
    }
    let nq = naturality_suite(&sa, &sb, &quotient, "quotient")?;
    let kk = builtins::by_name("kk", &[]).unwrap();
    // (1,1) ↦ (1,1), (0,1) ↦ (1,0) = 1 − (0,1)
    let swap = AlgebraHom::new(kk.clone(), kk.clone(), Matrix::from_i64(2, 2, &[1, 1, 0, -1])).unwrap();
    let ok = Omega::new(kk);
    let ns = naturality_suite(&ok, &ok, &swap, "swap")?;
    ensure(nq >= 10 && ns == SAMPLES, || format!("too few related pairs: quotient {nq}, swap {ns}"))?;
    Ok(format!("x d plus {nq} related pairs under the quotient, {ns} under the swap"))
}

fn ncdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncdiff")).args(args).output().expect("binary runs")
}

fn c12_cli_determinism() -> Verdict {
    let args = ["verify", "--builtin", "upper(2)", "-N", "2", "--seed", "42", "--format", "json"];
    let (r1, r2) = (ncdiff(&args), ncdiff(&args));
    let r3 = ncdiff(&[&args[..], &["--sequential"]].concat());
    ensure(r1.status.code() == Some(0), || format!("upper(2) verify exit {:?}", r1.status.code()))?;
    ensure(r1.stdout == r2.stdout && r1.stdout == r3.stdout, || "verify reports differ between runs".into())?;
    let m2 = ncdiff(&["verify", "--builtin", "matrix(2)", "-N", "2", "--seed", "42"]);
    ensure(m2.status.code() == Some(0), || format!("matrix(2) verify exit {:?}", m2.status.code()))?;
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corrupted.alg");
    let bad = ncdiff(&["verify", "--file", fixture]);
    let err = String::from_utf8_lossy(&bad.stderr);
    ensure(bad.status.code() == Some(2) && err.contains("associativity fails"), || {
        format!("corrupted table: exit {:?}, {err}", bad.status.code())
    })?;
    let product = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("matrix2_product.json");
    std::fs::write(&product, serde_json::to_string(&MultiMap::product(&builtins::matrix(2)).to_json()).unwrap()).unwrap();
    let fail = ncdiff(&["poisson-check", "--builtin", "matrix(2)", "--mu", product.to_str().unwrap()]);
    ensure(fail.status.code() == Some(1) && !fail.stderr.is_empty(), || format!("non-Poisson input: exit {:?}", fail.status.code()))?;
    let unknown = ncdiff(&["info", "--builtin", "nonsense"]);
    ensure(unknown.status.code() == Some(2), || format!("unknown builtin: exit {:?}", unknown.status.code()))?;
    Ok("byte-identical reports over three runs (one sequential); exits 0, 1, 2 as contracted".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("d^2 = 0 and graded Leibniz to degree 3", c1_d_squared_and_leibniz),
        ("dim Omega_k = m(m-1)^k for k <= 3", c2_form_dimensions),
        ("Der = field space = normalized 1-cocycles", c3_three_counts_of_derivations),
        ("j([K,L]^D) = [j_K,j_L] and L([K,L]) = [L_K,L_L] to N = 2", c4_operator_identities),
        ("decompose(L_K + j_L) = (K, L)", c5_decomposition_round_trip),
        ("[L_K, j_L] identity and the three L_K + j_L relations", c6_lie_contraction_and_sums),
        ("curvature formulas, ideals, involutivity, Bianchi", c7_projections),
        ("Hochschild forms route = normalized complex", c8_hochschild_routes),
        ("ker mu^n = sum of A^i (x) Omega_1 (x) A^j", c9_kernel_of_mu_n),
        ("polyderivation closure and commutator Poisson", c10_schouten_closure),
        ("naturality under quotient and swap", c11_naturality),
        ("CLI determinism and exit codes", c12_cli_determinism),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {title} [{secs:.1}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {title} [{secs:.1}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

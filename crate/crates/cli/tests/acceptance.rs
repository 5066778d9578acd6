//! The acceptance suite: thirteen criteria, one PASS/FAIL line each. Known
//! discrepancies are listed in `KNOWN_FAILURES`; the run fails when the set of
//! failing criteria differs from that list in either direction.

use std::panic::{self, AssertUnwindSafe};
use std::process::{self, Command};
use std::sync::Arc;
use std::time::Instant;

use ainfty::ainfinity::{compose_functors, functor_residual, homotopy_solve, AFunctor, AStructure};
use ainfty::cohomology::{differential, integrate_class};
use ainfty::hochschild::{brace, elementary_basis, gerstenhaber_bracket, star, Cochain};
use ainfty::maurer_cartan::{
    curvature, curvature_identity_residual, dg_gauge_check, gauge_action, quillen_homotopy_build, quillen_verify,
    DgAlgebra, HochschildAlgebra, MCElement, PolynomialPath,
};
use ainfty::prelie::{bch, exp, log, odot_group, premagnus_words, GroupLike};
use ainfty::sample::Sampler;
use ainfty::Scalar;
use ainfty_cli::doc::{self, structure_residual, Loaded};
use ainfty_cli::Cli;
use clap::Parser;
use serde_json::Value;

const NAMES: [&str; 5] = ["kronecker", "gentle", "exterior", "dual_numbers", "dg_triangle"];
const KNOWN_FAILURES: [u32; 2] = [4, 8];
const W: usize = 6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn path(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn load(name: &str) -> Loaded {
    doc::read(&path(name), None).expect("shipped fixture")
}

fn shipped() -> Vec<(&'static str, Arc<AStructure>)> {
    NAMES.iter().map(|&n| (n, load(n).structure)).collect()
}

fn report(args: &[&str]) -> (Value, i32) {
    let argv = std::iter::once("ainfty").chain(args.iter().copied());
    ainfty_cli::run(&Cli::parse_from(argv))
}

fn sign(odd: bool) -> Scalar {
    Scalar::sign(odd)
}

/// A random homogeneous cochain in a degree that has basis elements.
fn homogeneous(s: &mut Sampler, a: &AStructure, lo: usize, hi: usize) -> Cochain {
    let g = a.graph();
    let d = s.degree(g, &[-1, 0, 1, 2], lo, hi).expect("some degree has cochains");
    s.cochain(g, d, lo, hi, 3, W)
}

fn pre_lie() -> Outcome {
    let mut s = Sampler::new(1);
    let mut checked = 0;
    for (name, a) in shipped() {
        for _ in 0..50 {
            let (f, g, h) =
                (homogeneous(&mut s, &a, 0, 2), homogeneous(&mut s, &a, 0, 2), homogeneous(&mut s, &a, 0, 2));
            let assoc = |x: &Cochain, y: &Cochain| {
                let left = star(&star(&f, x, W).unwrap(), y, W).unwrap();
                &left - &star(&f, &star(x, y, W).unwrap(), W).unwrap()
            };
            let odd = g.degree() * h.degree() % 2 != 0;
            if assoc(&g, &h) != assoc(&h, &g).scale(&sign(odd)) {
                return outcome(false, format!("associator not symmetric on {name}"));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} triples"))
}

fn brace_or_self(f: &Cochain, gs: &[&Cochain]) -> Cochain {
    if gs.is_empty() {
        f.clone()
    } else {
        brace(f, gs, W).unwrap()
    }
}

/// `f{g}{h_1..h_s} = Σ ± f{h_1..h_i, g{h_{i+1}..h_j}, h_{j+1}..h_s}`, the sign
/// being `(−1)^{|g|(|h_1| + .. + |h_i|)}`.
fn brace_relation(f: &Cochain, g: &Cochain, hs: &[&Cochain]) -> bool {
    let lhs = brace(&brace(f, &[g], W).unwrap(), hs, W).unwrap();
    let mut rhs = Cochain::zero(f.graph(), lhs.degree(), W);
    let s = hs.len();
    for i in 0..=s {
        for j in i..=s {
            let inner = brace_or_self(g, &hs[i..j]);
            let mut args: Vec<&Cochain> = hs[..i].to_vec();
            args.push(&inner);
            args.extend_from_slice(&hs[j..]);
            let passed: i64 = hs[..i].iter().map(|h| h.degree()).sum();
            let term = brace(f, &args, W).unwrap().scale(&sign(g.degree() * passed % 2 != 0));
            rhs = &rhs + &term;
        }
    }
    lhs == rhs
}

fn brace_relations() -> Outcome {
    let mut s = Sampler::new(2);
    let mut checked = 0;
    for (name, a) in shipped() {
        for k in 0..50 {
            let f = homogeneous(&mut s, &a, 1, 3);
            let g = homogeneous(&mut s, &a, 0, 2);
            let hs: Vec<Cochain> = (0..1 + k % 2).map(|_| homogeneous(&mut s, &a, 0, 2)).collect();
            let refs: Vec<&Cochain> = hs.iter().collect();
            if !brace_relation(&f, &g, &refs) {
                return outcome(false, format!("relation fails on {name} with s = {}", refs.len()));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} inputs, s = 1 and 2"))
}

fn differential_squares() -> Outcome {
    let mut checked = 0;
    for (name, a) in shipped() {
        let (r, code) = report(&["validate", &path(name)]);
        if code != 0 || r["result"]["mu_star_mu"] != "zero" || !structure_residual(&a).unwrap().is_zero() {
            return outcome(false, format!("{name} does not validate"));
        }
        let g = a.graph();
        for d in [-1, 0, 1] {
            for w in 0..=3 {
                for (word, b) in elementary_basis(g, d, w) {
                    let x = Cochain::elementary(g, word, b, Scalar::one(), W).unwrap();
                    let dd = differential(&differential(&x, &a, W).unwrap(), &a, W).unwrap();
                    if !dd.is_zero() {
                        return outcome(false, format!("d² ≠ 0 on {name}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("μ⋆μ = 0 on every fixture, d² = 0 on {checked} basis cochains"))
}

/// Coefficients `(x, y)` with `l = x·p + y·q`, if unique.
fn solve_two(l: &Cochain, p: &Cochain, q: &Cochain) -> Option<(Scalar, Scalar)> {
    let keys: Vec<_> =
        p.components().iter().chain(q.components()).flat_map(|(w, t)| t.keys().map(move |&b| (w.clone(), b))).collect();
    for (i, (w1, b1)) in keys.iter().enumerate() {
        for (w2, b2) in &keys[i + 1..] {
            let (p1, q1, p2, q2) =
                (p.coefficient(w1, *b1), q.coefficient(w1, *b1), p.coefficient(w2, *b2), q.coefficient(w2, *b2));
            let det = &(&p1 * &q2) - &(&q1 * &p2);
            if det.is_zero() {
                continue;
            }
            let (l1, l2) = (l.coefficient(w1, *b1), l.coefficient(w2, *b2));
            let x = (&(&l1 * &q2) - &(&q1 * &l2)).checked_div(&det).unwrap();
            let y = (&(&p1 * &l2) - &(&l1 * &p2)).checked_div(&det).unwrap();
            return (&p.scale(&x) + &q.scale(&y) == *l).then_some((x, y));
        }
    }
    None
}

fn exp_log() -> Outcome {
    let mut s = Sampler::new(4);
    for (name, a) in shipped() {
        for _ in 0..25 {
            let v = s.cochain(a.graph(), 0, 2, 3, 3, W);
            let g = exp(&v, W).unwrap();
            if log(&g, W).unwrap() != v {
                return outcome(false, format!("log(exp v) ≠ v on {name}"));
            }
            let w = GroupLike::new(s.cochain(a.graph(), 0, 2, 3, 3, W)).unwrap();
            if exp(&log(&w, W).unwrap(), W).unwrap() != w {
                return outcome(false, format!("exp(log g) ≠ g on {name}"));
            }
        }
    }
    // a pure weight-two w separates the orders of the expansion by weight
    let b = load("gentle");
    let w = b.cochain("v").unwrap().clone().with_cutoff(4);
    let [_, ww, www_left, www_right] = premagnus_words(&w, 4).unwrap();
    let l = log(&GroupLike::new(w.clone()).unwrap(), 4).unwrap();
    let half = Scalar::ratio(1, 2).unwrap();
    if l.weights(2, 2) != w || l.weights(3, 3) != ww.scale(&-&half) {
        return outcome(false, "orders one and two differ from w − ½ w⋆w");
    }
    let Some((x, y)) = solve_two(&l.weights(4, 4), &www_left, &www_right) else {
        return outcome(false, "order three is not spanned by the two displayed words");
    };
    let expected = (Scalar::ratio(1, 4).unwrap(), Scalar::ratio(1, 12).unwrap());
    let detail = format!(
        "round trips exact; order three is {x}·(w⋆w)⋆w + {y}·w⋆(w⋆w), expected {}·(w⋆w)⋆w + {}·w⋆(w⋆w)",
        expected.0, expected.1
    );
    outcome((x, y) == expected, detail)
}

fn bch_consistency() -> Outcome {
    let mut s = Sampler::new(5);
    for (name, a) in shipped() {
        for _ in 0..25 {
            let u = s.cochain(a.graph(), 0, 2, 3, 3, W);
            let v = s.cochain(a.graph(), 0, 2, 3, 3, W);
            let product = odot_group(&exp(&u, W).unwrap(), &exp(&v, W).unwrap(), W).unwrap();
            if bch(&u, &v, W).unwrap() != log(&product, W).unwrap() {
                return outcome(false, format!("bch ≠ log(exp u ⊙ exp v) on {name}"));
            }
            if !bch(&u, &-&u, W).unwrap().is_zero() {
                return outcome(false, format!("bch(u, −u) ≠ 0 on {name}"));
            }
        }
    }
    outcome(true, "125 pairs")
}

fn cocycles_are_isotopies() -> Outcome {
    let c = 5;
    let mut counts = Vec::new();
    for name in ["exterior", "gentle"] {
        let a = load(name).structure;
        let g = a.graph();
        let (mut total, mut cocycles) = (0, 0);
        for w in 2..=c {
            for (word, b) in elementary_basis(g, 0, w) {
                let v = Cochain::elementary(g, word, b, Scalar::one(), c).unwrap();
                let closed = differential(&v, &a, c).unwrap().is_zero();
                let f = AFunctor::from_group_like(&a, exp(&v, c).unwrap().plus()).unwrap();
                let isotopy = functor_residual(&f, c).unwrap().is_zero();
                if closed != isotopy {
                    return outcome(false, format!("{name}: cocycle {closed} but isotopy {isotopy}"));
                }
                total += 1;
                cocycles += usize::from(closed);
            }
        }
        counts.push(format!("{name} {cocycles}/{total} cocycles"));
    }
    outcome(true, counts.join(", "))
}

fn witt() -> Outcome {
    let lam = load("exterior").structure;
    let g = lam.graph();
    let e = |m: usize| Cochain::from_ids(g, &vec!["eps"; m + 1], "eps", Scalar::one(), 11).unwrap();
    for m in 1..=5 {
        for n in 1..=5 {
            let want = e(m + n).scale(&Scalar::from_int(m as i64 - n as i64));
            if gerstenhaber_bracket(&e(m), &e(n), 11).unwrap() != want {
                return outcome(false, format!("[e{m}, e{n}] ≠ ({m} − {n}) e{}", m + n));
            }
        }
    }
    outcome(true, "all 25 brackets")
}

fn worked_examples() -> Outcome {
    let hh = |name: &str| report(&["hochschild", &path(name), "--degree", "1", "--plus", "--cutoff", "6"]).0;
    let k = hh("kronecker");
    let k_ok = k["result"]["total"] == 0 && k["result"]["complete"] == true;
    let b = hh("gentle");
    let dims: Vec<String> = b["result"]["lines"].as_array().unwrap().iter().map(|l| l["dim"].to_string()).collect();
    let total = b["result"]["total"].as_u64().unwrap();
    let detail = format!(
        "HH¹₊(K) = {} (complete: {}); dim HH¹₊(B) = {total} at window 6 (weights 2..6: {}), expected 3",
        k["result"]["total"],
        k["result"]["complete"],
        dims.join(", ")
    );
    outcome(k_ok && total == 3, detail)
}

fn integration() -> Outcome {
    let c = 5;
    let plus = |a: &Arc<AStructure>, v: &Cochain| integrate_class(a, v, c).unwrap().plus;
    let lam = load("exterior");
    let b = load("gentle");
    let pairs = [
        (&lam, lam.cochain("e1").unwrap().clone(), lam.cochain("e2").unwrap().clone()),
        (&lam, lam.cochain("e2").unwrap().scale(&Scalar::from_int(-3)), lam.cochain("e1").unwrap().clone()),
        (&b, b.cochain("v").unwrap().clone(), b.cochain("v").unwrap().scale(&Scalar::ratio(1, 2).unwrap())),
    ];
    for (doc, u, v) in &pairs {
        let a = &doc.structure;
        let (u, v) = (u.clone().with_cutoff(c), v.clone().with_cutoff(c));
        let composed = compose_functors(
            &AFunctor::from_group_like(a, &plus(a, &u)).unwrap(),
            &AFunctor::from_group_like(a, &plus(a, &v)).unwrap(),
            c,
        )
        .unwrap();
        if plus(a, &bch(&u, &v, c).unwrap()) != composed.plus_part().unwrap() {
            return outcome(false, format!("integration is not multiplicative on {}", doc.source));
        }
    }
    // a coboundary perturbation integrates to a homotopic isotopy
    let a = &b.structure;
    let v = b.cochain("v").unwrap().clone().with_cutoff(c);
    let du = differential(&b.cochain("u").unwrap().clone().with_cutoff(c), a, c).unwrap();
    let f = AFunctor::from_group_like(a, &plus(a, &v)).unwrap();
    let g = AFunctor::from_group_like(a, &plus(a, &(&v + &du))).unwrap();
    if du.is_zero() || homotopy_solve(&f, &g, c).unwrap().is_none() {
        return outcome(false, "no homotopy witness for a coboundary perturbation");
    }
    // distinct classes on Λ are not homotopic in any window
    let l = &lam.structure;
    let classes = [lam.cochain("e1").unwrap(), lam.cochain("e2").unwrap(), lam.cochain("zero").unwrap()];
    for (i, x) in classes.iter().enumerate() {
        for y in &classes[i + 1..] {
            let fx = AFunctor::from_group_like(l, &plus(l, &(*x).clone().with_cutoff(c))).unwrap();
            let fy = AFunctor::from_group_like(l, &plus(l, &(*y).clone().with_cutoff(c))).unwrap();
            if homotopy_solve(&fx, &fy, c).unwrap().is_some() {
                return outcome(false, "distinct classes on Λ came out homotopic");
            }
        }
    }
    outcome(true, "multiplicative on 3 pairs, coboundary witness found, 3 non-homotopic pairs on Λ")
}

fn curvature_identity() -> Outcome {
    let mut s = Sampler::new(10);
    for (name, a) in shipped() {
        for _ in 0..25 {
            let f = GroupLike::new(s.cochain(a.graph(), 0, 2, 3, 3, W)).unwrap();
            if !curvature_identity_residual(&a, &f, W).unwrap().is_zero() {
                return outcome(false, format!("κ(f − 1) ≠ μ⊙f − f⋆μ on {name}"));
            }
        }
    }
    outcome(true, "125 group-like elements")
}

fn gauge_element(dg: &DgAlgebra, u: &Cochain) -> Cochain {
    let mut total = dg.one(W);
    let mut power = dg.one(W);
    for n in 1..=W {
        power = dg.product(&power, u, W).unwrap();
        total = &total + &power.scale(&Scalar::inv_factorial(n));
    }
    total
}

fn quillen_and_gauge() -> Outcome {
    let mut s = Sampler::new(11);
    for (name, a) in shipped() {
        let g = a.graph();
        let v = HochschildAlgebra::new(&a);
        for _ in 0..10 {
            let coeffs = vec![Cochain::zero(g, -1, W), s.cochain(g, -1, 2, 3, 2, W), s.cochain(g, -1, 2, 3, 2, W)];
            let path = PolynomialPath::from_t_coeffs(g, -1, coeffs, 3).unwrap();
            let (x, lambda) = quillen_homotopy_build(&a, &path, W).unwrap();
            if !quillen_verify(&v, &x, &lambda, W).unwrap().is_zero() {
                return outcome(false, format!("Quillen residual on {name}"));
            }
        }
        let dg = DgAlgebra::new(&a).unwrap();
        let xi = load(name).cochains.get("xi").cloned().unwrap_or_else(|| Cochain::zero(g, 0, W)).with_cutoff(W);
        let xi = MCElement::new(&v, xi, W).unwrap();
        for _ in 0..5 {
            let u = s.cochain(g, -1, 2, 4, 3, W);
            let zeta = gauge_action(&dg, &u, &xi, W).unwrap();
            let c = gauge_element(&dg, &u);
            if c != dg.exp(&u, W).unwrap() || !curvature(&v, zeta.zeta(), W).unwrap().is_zero() {
                return outcome(false, format!("gauge image is not Maurer-Cartan on {name}"));
            }
            if !dg_gauge_check(&dg, zeta.zeta(), xi.zeta(), &c, W).unwrap().is_zero() {
                return outcome(false, format!("gauge equations fail on {name}"));
            }
        }
    }
    outcome(true, "50 paths, 25 gauge parameters")
}

fn injectivity() -> Outcome {
    let mut parts = Vec::new();
    for name in ["kronecker", "gentle", "exterior", "dual_numbers"] {
        let (r, _) = report(&["center", &path(name), "--cutoff", "3"]);
        let res = &r["result"];
        let graded = load(name).structure.is_graded_algebra();
        let split_ok = !graded || res["split"] == res["dim"];
        if res["units_in_image"] != true || !split_ok {
            return outcome(false, format!("{name}: units in image {}, split {}", res["units_in_image"], res["split"]));
        }
        parts.push(format!("{name} Z⁰ of dim {}", res["dim"]));
    }
    outcome(true, parts.join(", "))
}

fn command_lines(name: &str) -> Vec<Vec<String>> {
    let (cocycle, group_like) = match name {
        "gentle" => ("v", "xi"),
        "exterior" => ("e1", "e1"),
        _ => ("zero", "zero"),
    };
    let first = load(name).graph().objects()[0].clone();
    let lines: [&[&str]; 14] = [
        &["validate"],
        &["hochschild", "--degree", "1", "--plus", "--cutoff", "4"],
        &["exp", "--cocycle", cocycle, "--cutoff", "4"],
        &["log", "--cochain", group_like, "--cutoff", "4"],
        &["bch", "--left", cocycle, "--right", group_like, "--cutoff", "4"],
        &["compose", "--left", group_like, "--right", group_like, "--cutoff", "4"],
        &["isotopy-check", "--cochain", group_like, "--cutoff", "4"],
        &["homotopy-check", "--left", cocycle, "--right", "zero", "--integrate", "--cutoff", "3"],
        &["gauge-check", "--xi", group_like, "--parameter", "u", "--cutoff", "4"],
        &["quillen-check", "--path", "g", "--cutoff", "4", "--t-cutoff", "6"],
        &["center", "--cutoff", "3"],
        &["glue"],
        &["restrict", "--objects", &first, "--degree", "1", "--cutoff", "3"],
        &["twist", "--zeta", group_like, "--cutoff", "4", "--apply", cocycle],
    ];
    lines
        .iter()
        .map(|l| {
            let mut v = vec![l[0].to_string(), path(name)];
            v.extend(l[1..].iter().map(|s| s.to_string()));
            v
        })
        .collect()
}

fn determinism() -> Outcome {
    let mut runs = 0;
    for name in NAMES {
        for args in command_lines(name) {
            let once = || Command::new(env!("CARGO_BIN_EXE_ainfty")).args(&args).output().unwrap();
            let (a, b) = (once(), once());
            if a.stdout != b.stdout || a.status.code() != b.status.code() {
                return outcome(false, format!("{} on {name} differs between runs", args[0]));
            }
            runs += 1;
        }
    }
    outcome(true, format!("{runs} commands, each run twice"))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        (1, "pre-Lie identity", pre_lie),
        (2, "brace relations", brace_relations),
        (3, "structure equation and d² = 0", differential_squares),
        (4, "exp/log round trip and log coefficients", exp_log),
        (5, "BCH consistency", bch_consistency),
        (6, "cocycle iff isotopy", cocycles_are_isotopies),
        (7, "Witt relations", witt),
        (8, "Kronecker and gentle HH¹₊", worked_examples),
        (9, "integration is a homomorphism", integration),
        (10, "curvature identity", curvature_identity),
        (11, "Quillen homotopies and gauge action", quillen_and_gauge),
        (12, "injectivity condition", injectivity),
        (13, "determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for (n, title, check) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            outcome(false, format!("panicked: {}", e.downcast_ref::<String>().cloned().unwrap_or_default()))
        });
        let mark = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {mark} {title}: {} ({:.1}s)", result.detail, start.elapsed().as_secs_f64());
        if !result.pass {
            failed.push(n);
        }
    }
    let unexpected: Vec<u32> = failed.iter().filter(|n| !KNOWN_FAILURES.contains(n)).copied().collect();
    let fixed: Vec<u32> = KNOWN_FAILURES.iter().filter(|n| !failed.contains(n)).copied().collect();
    println!(
        "acceptance: {} of 13 pass; known discrepancies {KNOWN_FAILURES:?}; unexpected failures {unexpected:?}; now passing {fixed:?}",
        13 - failed.len()
    );
    if !unexpected.is_empty() || !fixed.is_empty() {
        process::exit(1);
    }
}

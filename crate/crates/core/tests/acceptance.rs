//! Acceptance criteria, run sequentially so that each timing is measured on
//! an otherwise idle process. Prints one line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use operad_workbench::clones::{clone_roundtrip_check, roundtrip_check, EndoClone};
use operad_workbench::finmaps::FinFunction;
use operad_workbench::operads::{
    operad_axiom_check, AxiomBounds, BuiltinOperad, CommMonoidFPOperad, IntPolyFPOperad, Multiplicities, Operad,
    Polynomial, PresentedOperad, SymmetryOperad,
};
use operad_workbench::strictify::{
    check_equivalence, check_strictness, strictify, universal_property_check, StrictifyBounds, StrictnessBounds,
    UniversalBounds,
};
use operad_workbench::terms::{
    enumerate_terms, parse_presentation, parse_term, Classification, Equation, Flavor, Presentation,
    SaturationOptions, Signature,
};
use operad_workbench::trees::{enumerate_trees, to_term, to_tree, FPTree};
use operad_workbench::weakcat::instances::{collapse, functor_into_thin, indiscrete_monoid, terminal, z2_monoidal};
use operad_workbench::weakcat::{FunctorBounds, WeakPFunctorData};
use operad_workbench::weakening::{
    biased_unbiased_agreement, AgreementBounds, Decision, WeakeningContext, FP_DEGENERACY,
};
use operad_workbench::Report;

const MONOID: &str = include_str!("../data/monoid.th");
const COMM_MONOID: &str = include_str!("../data/comm_monoid.th");
const POINTED: &str = include_str!("../data/pointed.th");
const POINTED_ABCD: &str = include_str!("../data/pointed_abcd.th");
const TRIVIAL: &str = include_str!("../data/trivial.th");
const UNBIASED: &str = include_str!("../data/unbiased_monoid.th");

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn report_ok(r: &Report) -> Result<(), String> {
    ensure(r.passed(), || {
        let bad: Vec<String> = r
            .failures()
            .map(|c| format!("{}: {}", c.law, c.counterexample.clone().unwrap_or_default()))
            .collect();
        format!("{}: {}", r.title, bad.join("; "))
    })
}

fn evaluable(src: &str, target: &str) -> WeakeningContext<BuiltinOperad> {
    let p = parse_presentation(src).expect("bundled theory parses");
    let po = PresentedOperad::builtin(p, target, &BTreeMap::new()).expect("default interpretation");
    WeakeningContext::evaluable(po, SaturationOptions::default()).expect("not fp")
}

fn c1_classification() -> Outcome {
    let assoc = |n| {
        Equation::new(n, parse_term("m(m(x1,x2),x3)").unwrap(), parse_term("m(x1,m(x2,x3))").unwrap())
            .unwrap()
            .classify()
            .unwrap()
    };
    ensure(assoc(3) == Classification::StronglyRegular, || "(3, assoc) is not strongly regular".into())?;
    ensure(assoc(4) != Classification::StronglyRegular, || "(4, assoc) is strongly regular".into())?;
    for (name, src, want) in [
        ("monoid", MONOID, Classification::StronglyRegular),
        ("pointed", POINTED, Classification::StronglyRegular),
        ("comm monoid", COMM_MONOID, Classification::Linear),
    ] {
        let got = parse_presentation(src).unwrap().classify().unwrap();
        ensure(got == want, || format!("{name}: {got}, expected {want}"))?;
    }
    Ok("assoc@3 strongly regular, assoc@4 general, monoid/pointed strongly regular, comm monoid linear".into())
}

fn c2_term_tree() -> Outcome {
    let sig = Signature::from_ops([("m", 2), ("e", 0)]).unwrap();
    let shapes = enumerate_trees(&sig, 7);
    let mut checked = 0;
    for n in 0..=3 {
        let terms = enumerate_terms(&sig, n, 7);
        for t in &terms {
            let back = to_tree(t, n).map(|ft| to_term(&ft));
            ensure(back.as_ref() == Ok(t), || format!("term {t} at arity {n}: {back:?}"))?;
        }
        let mut trees = 0;
        for shape in &shapes {
            for f in FinFunction::all(shape.arity(), n) {
                let ft = FPTree::new(f, shape.clone()).unwrap();
                let back = to_tree(&to_term(&ft), n);
                ensure(back.as_ref() == Ok(&ft), || format!("tree {ft} at arity {n}: {back:?}"))?;
                trees += 1;
            }
        }
        ensure(trees == terms.len(), || format!("arity {n}: {} terms but {trees} trees", terms.len()))?;
        checked += trees + terms.len();
    }
    Ok(format!("{checked} round trips, term and tree counts equal per arity"))
}

fn monomial(v: &Multiplicities) -> Polynomial {
    Polynomial::monomial(v.0.clone(), 1)
}

fn random_poly(rng: &mut StdRng, vars: usize) -> Polynomial {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let mut e = vec![0u32; vars];
        for _ in 0..rng.gen_range(0..=2) {
            if vars > 0 {
                e[rng.gen_range(0..vars)] += 1;
            }
        }
        terms.push((e, rng.gen_range(-3..=3)));
    }
    Polynomial::from_terms(vars, terms).unwrap()
}

fn c3_operad_axioms() -> Outcome {
    let sym = AxiomBounds {
        max_arity: 3,
        max_inner_arity: 3,
        max_leaf_arity: 1,
        element_bound: 6,
        exhaustive_limit: 1 << 22,
        ..AxiomBounds::default()
    };
    let r = operad_axiom_check(&SymmetryOperad, &sym);
    report_ok(&r)?;
    let mut instances = r.instances();

    // the laws themselves at small inner arity; the oracle below covers every
    // composite and action with operands of arity up to 3
    let cm = AxiomBounds {
        max_arity: 3,
        max_inner_arity: 1,
        max_leaf_arity: 1,
        element_bound: 2,
        exhaustive_limit: 1 << 22,
        ..AxiomBounds::default()
    };
    let r = operad_axiom_check(&CommMonoidFPOperad, &cm);
    report_ok(&r)?;
    instances += r.instances();

    // multiplicity vectors against monomial substitution and relabelling
    let op = CommMonoidFPOperad;
    let pool: Vec<Vec<Multiplicities>> = (0..=3).map(|a| op.enumerate(a, 2).unwrap()).collect();
    let inner: Vec<&Multiplicities> = pool.iter().flatten().collect();
    for n in 0..=3 {
        for p in &pool[n] {
            let mut qs: Vec<Vec<&Multiplicities>> = vec![Vec::new()];
            for _ in 0..n {
                qs = qs
                    .into_iter()
                    .flat_map(|pre| inner.iter().map(move |q| [pre.clone(), vec![*q]].concat()))
                    .collect();
            }
            for q in qs {
                let total: usize = q.iter().map(|x| x.0.len()).sum();
                let mut off = 0;
                let values: Vec<Polynomial> = q
                    .iter()
                    .map(|x| {
                        let s = monomial(x).shift(off, total);
                        off += x.0.len();
                        s
                    })
                    .collect();
                let owned: Vec<Multiplicities> = q.iter().map(|x| (*x).clone()).collect();
                let got = op.compose(p, &owned).map_err(|e| e.to_string())?;
                let want = monomial(p).substitute(&values, total).map_err(|e| e.to_string())?;
                ensure(monomial(&got) == want, || format!("{p} ∘ {owned:?}: {got} vs {want:?}"))?;
                instances += 1;
            }
            for m in 0..=3 {
                for f in FinFunction::all(n, m) {
                    let got = op.act_fn(&f, p).map_err(|e| e.to_string())?;
                    let want = monomial(p).relabel(&f).map_err(|e| e.to_string())?;
                    ensure(monomial(&got) == want, || format!("{f}·{p}: {got}"))?;
                    instances += 1;
                }
            }
        }
    }

    // polynomial composition is substitution, checked at integer points
    let poly = IntPolyFPOperad;
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..400 {
        let n = rng.gen_range(0..=3);
        let p = random_poly(&mut rng, n);
        let qs: Vec<Polynomial> = (0..n).map(|_| { let k = rng.gen_range(0..=3); random_poly(&mut rng, k) }).collect();
        let composite = poly.compose(&p, &qs).map_err(|e| e.to_string())?;
        let total: usize = qs.iter().map(Polynomial::vars).sum();
        for _ in 0..5 {
            let x: Vec<i64> = (0..total).map(|_| rng.gen_range(-5..=5)).collect();
            let mut off = 0;
            let inner: Vec<i64> = qs
                .iter()
                .map(|q| {
                    let v = q.eval(&x[off..off + q.vars()]).unwrap();
                    off += q.vars();
                    v
                })
                .collect();
            let (l, r) = (composite.eval(&x).unwrap(), p.eval(&inner).unwrap());
            ensure(l == r, || format!("{p:?} ∘ {qs:?} at {x:?}: {l} ≠ {r}"))?;
            instances += 1;
        }
    }
    let r = operad_axiom_check(&IntPolyFPOperad, &AxiomBounds::default());
    report_ok(&r)?;
    instances += r.instances();
    Ok(format!("{instances} instances"))
}

fn c4_clone_bridge() -> Outcome {
    let bounds = AxiomBounds {
        max_arity: 3,
        max_inner_arity: 3,
        element_bound: 2,
        exhaustive_limit: 1 << 16,
        ..AxiomBounds::default()
    };
    let a = roundtrip_check(&CommMonoidFPOperad, &bounds).map_err(|e| e.to_string())?;
    report_ok(&a)?;
    let b = clone_roundtrip_check(&EndoClone::new(3).unwrap(), &AxiomBounds::default());
    report_ok(&b)?;
    Ok(format!("{} + {} instances", a.instances(), b.instances()))
}

fn c5_smc_coherence() -> Outcome {
    let exact = evaluable(COMM_MONOID, "terminal-symmetric");
    let closure = WeakeningContext::closure(parse_presentation(COMM_MONOID).unwrap(), SaturationOptions::default())
        .map_err(|e| e.to_string())?;
    let trees: Vec<_> = (0..=4).map(|n| exact.trees(n, 6)).collect();
    let (mut yes, mut no) = (0, 0);
    for (i, ts) in trees.iter().enumerate() {
        for a in ts {
            for (j, us) in trees.iter().enumerate() {
                for b in us {
                    let e = exact.two_cell(a, b).map_err(|e| e.to_string())?.decision;
                    let c = closure.two_cell(a, b).map_err(|e| e.to_string())?;
                    let want = if i == j { Decision::Yes } else { Decision::No };
                    ensure(e == want && c.decision == want, || {
                        format!("{a} vs {b}: evaluation {e}, closure {}", c.decision)
                    })?;
                    ensure(i != j || a == b || !c.trace.is_empty() || a.to_term() == b.to_term(), || {
                        format!("{a} vs {b}: merged without a trace")
                    })?;
                    if want == Decision::Yes { yes += 1 } else { no += 1 }
                }
            }
        }
    }
    Ok(format!("{yes} equal-arity pairs agree on yes, {no} unequal-arity pairs on no"))
}

fn c6_pointed_examples() -> Outcome {
    let pointed = evaluable(POINTED, "terminal-plain");
    let c0 = pointed.enumerate_classes(0, 6).map_err(|e| e.to_string())?;
    ensure(c0.classes.len() == 1 && c0.classes[0].members.len() == 1, || format!("pointed arity 0: {c0:?}"))?;
    // every class a single tree: the weakening is discrete
    for n in 0..=3 {
        let c = pointed.enumerate_classes(n, 6).map_err(|e| e.to_string())?;
        ensure(c.classes.iter().all(|k| k.members.len() == 1), || format!("pointed arity {n}: {c:?}"))?;
        ensure(c.classes.len() == usize::from(n <= 1), || format!("pointed arity {n}: {} classes", c.classes.len()))?;
    }
    let abcd = evaluable(POINTED_ABCD, "terminal-plain").enumerate_classes(0, 6).map_err(|e| e.to_string())?;
    ensure(abcd.classes.len() == 1 && abcd.classes[0].members.len() == 4, || format!("ABCD: {abcd:?}"))?;
    let trivial = evaluable(TRIVIAL, "terminal-plain").enumerate_classes(0, 6).map_err(|e| e.to_string())?;
    ensure(trivial.classes.is_empty(), || format!("trivial: {trivial:?}"))?;
    Ok("pointed: one nullary class, discrete; ABCD: one class of 4; trivial: no classes".into())
}

fn c7_strictification() -> Outcome {
    let w = indiscrete_monoid(3).map_err(|e| e.to_string())?;
    let s = strictify(&w, &StrictifyBounds::default()).map_err(|e| e.to_string())?;
    let strict = check_strictness(&s, &StrictnessBounds::default());
    report_ok(&strict)?;
    ensure(strict.checks.iter().all(|c| !c.law.contains("sampled")), || "strictness was sampled".into())?;
    report_ok(&check_equivalence(&s, &FunctorBounds::default()))?;
    let up = UniversalBounds::default();
    let t = terminal().map_err(|e| e.to_string())?;
    let aut = z2_monoidal(false).map_err(|e| e.to_string())?;
    let instances: Vec<(&str, Report)> = vec![
        ("st A with F′", universal_property_check(&s, &s, &s.unit(), &up)),
        ("W itself with the identity", universal_property_check(&s, &w, &WeakPFunctorData::identity(&w), &up)),
        (
            "terminal",
            universal_property_check(&s, &t, &functor_into_thin(&w, &t, |_| 0).map_err(|e| e.to_string())?, &up),
        ),
        (
            "one-object Z/2",
            universal_property_check(&s, &aut, &collapse(&w, &aut).map_err(|e| e.to_string())?, &up),
        ),
    ];
    for (name, r) in &instances {
        report_ok(r).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "|M| = 3: {} objects, strictness exhaustive ({} instances), unique H for {} targets",
        operad_workbench::weakcat::Category::object_count(&s),
        strict.instances(),
        instances.len()
    ))
}

fn c8_presentation_independence() -> Outcome {
    let biased = evaluable(MONOID, "terminal-plain");
    let unbiased = evaluable(UNBIASED, "terminal-plain");
    let term = |s: &str| parse_term(s).unwrap();
    let forward = BTreeMap::from([("m".to_string(), term("t2(x1,x2)")), ("e".to_string(), term("t0"))]);
    let backward = BTreeMap::from([
        ("t0".to_string(), term("e")),
        ("t1".to_string(), term("x1")),
        ("t2".to_string(), term("m(x1,x2)")),
        ("t3".to_string(), term("m(m(x1,x2),x3)")),
    ]);
    // arity 4 needs size 7 in the biased presentation
    let bounds = AgreementBounds { max_arity: 3, max_size: 6 };
    let r = biased_unbiased_agreement(&biased, &unbiased, Some(&forward), Some(&backward), bounds)
        .map_err(|e| e.to_string())?;
    report_ok(&r)?;
    Ok(format!("{} instances", r.instances()))
}

fn c9_fp_rejection() -> Outcome {
    let mut p: Presentation = parse_presentation(COMM_MONOID).unwrap();
    p.flavor = Flavor::Fp;
    let closure = WeakeningContext::closure(p.clone(), SaturationOptions::default());
    let po = PresentedOperad::new(p.clone(), CommMonoidFPOperad, {
        let mut m = BTreeMap::new();
        m.insert("m".to_string(), Multiplicities(vec![1, 1]));
        m.insert("e".to_string(), Multiplicities(vec![]));
        m
    })
    .map_err(|e| e.to_string())?;
    let exact = WeakeningContext::evaluable(po, SaturationOptions::default());
    for (mode, err) in [("closure", closure.err()), ("evaluation", exact.err())] {
        let msg = err.map(|e| e.to_string()).unwrap_or_default();
        ensure(msg.contains(FP_DEGENERACY) && msg.contains("τ_AA"), || format!("{mode}: `{msg}`"))?;
    }
    let file = std::env::temp_dir().join(format!("acceptance-fp-{}.th", std::process::id()));
    std::fs::write(&file, p.to_text()).map_err(|e| e.to_string())?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let args = ["operad-workbench", "decide", file.to_str().unwrap(), "m(x1,x2)", "m(x2,x1)"];
    let code = operad_workbench::cli::run(args, &mut out, &mut err);
    let _ = std::fs::remove_file(&file);
    let stderr = String::from_utf8_lossy(&err);
    ensure(code == 3 && stderr.contains("τ_AA"), || format!("cli exit {code}: {stderr}"))?;
    Ok("closure and evaluation contexts and the CLI reject fp with the degeneracy diagnostic".into())
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 9] = [
        (1, "equation classification", Duration::from_secs(1), c1_classification),
        (2, "term/tree bijection", Duration::from_secs(30), c2_term_tree),
        (3, "operad axiom suites", Duration::from_secs(60), c3_operad_axioms),
        (4, "clone bridge round trips", Duration::from_secs(60), c4_clone_bridge),
        (5, "coherence shadow (evaluation vs saturation)", Duration::from_secs(120), c5_smc_coherence),
        (6, "pointed-set examples", Duration::from_secs(5), c6_pointed_examples),
        (7, "strictification", Duration::from_secs(120), c7_strictification),
        (8, "presentation independence", Duration::from_secs(60), c8_presentation_independence),
        (9, "fp weakening rejection", Duration::from_secs(5), c9_fp_rejection),
    ];
    let only: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("too slow: {d}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id} [{status}] {name}: {detail} ({:.2?} of {:?})", elapsed, limit);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

//! Acceptance suite: one test per exit criterion, each printing a pass/fail
//! line. Every tolerance is exact integer equality.

use std::process::Command;
use std::rc::Rc;
use weightlab::corpus::{parse_corpus, CorpusEntry, BUILTIN_CORPUS};
use weightlab_core::algebra::{wedderburn, TwistedAlgebra};
use weightlab_core::field::FiniteField;
use weightlab_core::fitting::{
    alperin_census, fitting_sequence, navarro_matching, okuyama_census,
    verify_symplectic_fixture,
};
use weightlab_core::group::{factor_primes, PermGroup, DEFAULT_ORDER_BOUND};
use weightlab_core::kstar::{extraspecial_kstar, KStarGroup};
use weightlab_core::rep::{
    character_module, induce, is_isomorphic, simple_modules, splitting_degree_for, DEFAULT_SEED,
};
use weightlab_core::weights::{check_weight_decomposition, factor_module, weights, LocalContext};

fn corpus() -> Vec<CorpusEntry> {
    parse_corpus(BUILTIN_CORPUS).unwrap()
}

fn group_of(e: &CorpusEntry) -> Rc<PermGroup> {
    Rc::new(PermGroup::close(&e.name, e.degree, &e.generators, DEFAULT_ORDER_BOUND).unwrap())
}

fn ctx_of(e: &CorpusEntry, p: u64) -> LocalContext {
    let g = group_of(e);
    let deg = splitting_degree_for(&g, p, 1);
    let f = Rc::new(FiniteField::new(p, deg).unwrap());
    LocalContext::new(KStarGroup::trivial(g, f), DEFAULT_SEED).unwrap()
}

fn entry(name: &str) -> CorpusEntry {
    corpus().into_iter().find(|e| e.name == name).unwrap()
}

fn verdict(criterion: &str, pass: bool) {
    println!(
        "ACCEPTANCE {criterion}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed");
}

#[test]
fn acceptance_1_alperin_equality() {
    let mut all = true;
    for e in corpus() {
        let order = group_of(&e).order();
        for p in factor_primes(order as u64) {
            let ctx = ctx_of(&e, p);
            if !ctx.ks.group.is_p_solvable(p) {
                continue;
            }
            let row = alperin_census(&ctx, DEFAULT_SEED).unwrap();
            let blockwise = row.blockwise.iter().all(|&(_, ni, nw)| ni == nw);
            if !(row.n_irr == row.n_wgt && blockwise) {
                eprintln!("  {} p={p}: {} vs {}", e.name, row.n_irr, row.n_wgt);
                all = false;
            }
        }
    }
    verdict("1 (simple count equals weight count, blockwise, full corpus)", all);
}

#[test]
fn acceptance_2_vertex_census() {
    let cases: Vec<(&str, Vec<u64>)> = vec![
        ("S3", vec![3]),
        ("A4", vec![2, 3]),
        ("D10", vec![5]),
        ("F21", vec![3, 7]),
        ("F20", vec![2, 5]),
        ("SL(2,3)", vec![2, 3]),
        ("E27+", vec![3]),
        ("E27-", vec![3]),
    ];
    let mut all = true;
    for (name, primes) in cases {
        let e = entry(name);
        for p in primes {
            let ctx = ctx_of(&e, p);
            for r in okuyama_census(&ctx, DEFAULT_SEED).unwrap() {
                if !r.equal {
                    eprintln!(
                        "  {name} p={p} |R|={}: {} {} {}",
                        r.r_order, r.n_ambient, r.n_normalizer, r.n_weights
                    );
                    all = false;
                }
            }
        }
    }
    verdict("2 (vertex census triple equality)", all);
}

#[test]
fn acceptance_3_fitting_sequences() {
    let mut all = true;
    for e in corpus() {
        let order = group_of(&e).order();
        for p in factor_primes(order as u64) {
            let ctx = ctx_of(&e, p);
            if !ctx.ks.group.is_p_solvable(p) {
                continue;
            }
            for b in 0..ctx.blocks.len() {
                let rep = fitting_sequence(&ctx, b, DEFAULT_SEED).unwrap();
                let depth_ok = rep.steps.iter().all(|s| s.depth <= rep.max_depth_allowed);
                if !(rep.passed && depth_ok) {
                    eprintln!("  {} p={p} block {b}", e.name);
                    all = false;
                }
            }
        }
    }
    verdict(
        "3 (Fitting sequences terminate at defect zero with counts preserved)",
        all,
    );
}

#[test]
fn acceptance_4_brauer_quotients() {
    let mut all = true;
    for e in corpus() {
        let g = group_of(&e);
        for p in factor_primes(g.order() as u64) {
            let deg = splitting_degree_for(&g, p, 1);
            let f = Rc::new(FiniteField::new(p, deg).unwrap());
            let ks = KStarGroup::trivial(Rc::clone(&g), f);
            for sub in g.p_subgroups_up_to_conjugacy(p) {
                // the constructor cross-checks the definitional quotient
                // against the centralizer model and errors on mismatch
                match weightlab_core::algebra::brauer_quotient_twisted(&ks, &sub) {
                    Ok(tb) => {
                        let c = g.centralizer_of_set(&sub);
                        if tb.brauer.quotient.alg.dim != c.len() {
                            all = false;
                        }
                    }
                    Err(err) => {
                        eprintln!("  {} p={p} |P|={}: {err}", e.name, sub.len());
                        all = false;
                    }
                }
            }
        }
    }
    verdict("4 (Brauer quotient dims and structure match the centralizer)", all);
}

#[test]
fn acceptance_5_weight_decomposition() {
    let mut all = true;
    for name in ["S3", "F21", "SL(2,3)", "A4"] {
        let e = entry(name);
        let order = group_of(&e).order();
        for p in factor_primes(order as u64) {
            let ctx = ctx_of(&e, p);
            let ws = weights(&ctx, DEFAULT_SEED).unwrap();
            for w in &ws {
                let rec = check_weight_decomposition(&ctx, w, DEFAULT_SEED).unwrap();
                if !rec.passed {
                    eprintln!(
                        "  {name} p={p} |R|={}: iso={} dim={} fusion={}",
                        rec.r_order,
                        rec.module_isomorphism,
                        rec.dim_identity,
                        rec.fusion_p_core_trivial
                    );
                    all = false;
                }
            }
        }
    }
    verdict("5 (weight modules decompose as induced tensor products)", all);
}

#[test]
fn acceptance_6_extraspecial_fixture() {
    let mut all = true;
    for (l, p, deg) in [(3u64, 2u64, 6usize), (5, 7, 4)] {
        let f = Rc::new(FiniteField::new(p, deg).unwrap());
        let ks = extraspecial_kstar(l, 1, Rc::clone(&f)).unwrap();
        let alg = TwistedAlgebra { ks: ks.clone() };
        let wd = wedderburn(&alg).unwrap();
        let simple_ok = wd.factors.len() == 1 && wd.factors[0].n as u64 == l;
        let split_absent = ks.splitting_search_complete() && ks.find_splitting().is_none();
        // induced character module from a maximal isotropic line
        let vec_of = |i: usize| -> (u64, u64) {
            let idx = ks.group.elements[i][0] as u64;
            (idx % l, idx / l)
        };
        let line: Vec<u16> = (0..ks.order() as u16)
            .filter(|&i| vec_of(i as usize).1 == 0)
            .collect();
        let (lks, lmap) = ks.restrict(&line).unwrap();
        let zeta = f.root_of_unity(l).unwrap();
        let values: Vec<_> = (0..lks.order())
            .map(|i| {
                let (a, _) = vec_of(lmap[i] as usize);
                f.pow_el(zeta, a as i64)
            })
            .collect();
        let kzeta = character_module(&lks, &values, "k_zeta").unwrap();
        let ind = induce(&ks, &line, &kzeta, &lmap).unwrap();
        let unique_simple = factor_module(&ks, &wd, 0).unwrap();
        let ind_ok = ind.dim as u64 == l && is_isomorphic(&ind, &unique_simple);
        if !(simple_ok && split_absent && ind_ok) {
            eprintln!("  l={l}: simple={simple_ok} absent={split_absent} ind={ind_ok}");
            all = false;
        }
    }
    // symplectic Brauer-map fixtures ride along with the extraspecial data
    let fixtures: Vec<(u64, usize, (u64, usize), Vec<Vec<u64>>)> = vec![
        (3, 1, (2, 6), vec![vec![2, 0, 0, 2]]),
        (3, 1, (2, 6), vec![vec![0, 2, 1, 0]]),
        (3, 2, (2, 6), vec![vec![0, 0, 2, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]]),
        (5, 1, (2, 4), vec![vec![4, 0, 0, 4]]),
    ];
    for (l, n, (p, deg), gens) in fixtures {
        let f = Rc::new(FiniteField::new(p, deg).unwrap());
        let row = verify_symplectic_fixture(l, n, f, &gens).unwrap();
        if !row.passed {
            eprintln!("  symplectic l={l} n={n}: {row:?}");
            all = false;
        }
    }
    verdict("6 (extraspecial twisted algebras: simplicity, no splitting, induced simple)", all);
}

#[test]
fn acceptance_7_star_calculus() {
    // 20 seeded random coboundary cocycles across five corpus groups
    let specs = [("S3", 5u64), ("A4", 5), ("D10", 5), ("Q8", 5), ("F21", 5)];
    let mut checked = 0;
    let mut all = true;
    for (name, p) in specs {
        let e = entry(name);
        let g = group_of(&e);
        let m = g.exponent_p_prime(p);
        let deg = weightlab_core::field::splitting_degree(p, m).unwrap();
        let f = Rc::new(FiniteField::new(p, deg).unwrap());
        for i in 0..4u64 {
            let ks = KStarGroup::random_coboundary(
                Rc::clone(&g),
                Rc::clone(&f),
                m,
                DEFAULT_SEED ^ (i + 1),
            )
            .unwrap();
            let s = ks.star(&ks.opposite()).unwrap();
            let mu = s.find_splitting();
            let ok = match &mu {
                Some(mu) => {
                    let n = g.order();
                    let table: Vec<_> = (0..n * n)
                        .map(|k| s.alpha((k / n) as u16, (k % n) as u16))
                        .collect();
                    KStarGroup::coboundary(&g, &f, mu) == table
                        && ks.find_splitting().is_some()
                }
                None => false,
            };
            if !ok {
                eprintln!("  {name} seed {i}");
                all = false;
            }
            checked += 1;
        }
    }
    verdict(
        &format!("7 (star product with the opposite splits, {checked} seeded cocycles)"),
        all && checked >= 20,
    );
}

#[test]
fn acceptance_8_parity_matching() {
    let mut all = true;
    for name in ["C3", "C5", "C7", "F21", "C13:C3", "E27+", "E27-"] {
        let e = entry(name);
        let order = group_of(&e).order();
        assert_eq!(order % 2, 1);
        for p in factor_primes(order as u64) {
            let ctx = ctx_of(&e, p);
            let rows = navarro_matching(&ctx, DEFAULT_SEED).unwrap();
            for r in &rows {
                let psi_ok = r
                    .matching
                    .iter()
                    .enumerate()
                    .all(|(i, &j)| j != usize::MAX && r.psi[i].iter().all(|&c| c >= 0));
                if !(r.perfect && psi_ok) {
                    eprintln!("  {name} p={p} class {}", r.r_class);
                    all = false;
                }
            }
        }
    }
    verdict("8 (odd-order parity matching with exact certificates)", all);
}

#[test]
fn acceptance_9_self_consistency() {
    let mut all = true;
    // simple count = Wedderburn factor count = p-regular class count
    for name in ["S3", "F21", "A4", "SL(2,3)", "D10", "C3wrC2"] {
        let e = entry(name);
        let g = group_of(&e);
        for p in factor_primes(g.order() as u64) {
            let ctx = ctx_of(&e, p);
            let alg = TwistedAlgebra { ks: ctx.ks.clone() };
            let wd = wedderburn(&alg).unwrap();
            let nreg = g
                .conjugacy_classes()
                .iter()
                .filter(|c| c.is_regular(p))
                .count();
            let dims: usize = wd.factors.iter().map(|f| f.n * f.n).sum();
            if ctx.inventory.simples.len() != wd.factors.len()
                || wd.factors.len() != nreg
                || dims + wd.radical.len() != g.order()
            {
                eprintln!("  {name} p={p}");
                all = false;
            }
            // two-seed chop comparison
            let inv2 = simple_modules(&ctx.ks, 0xFEEDFACE).unwrap();
            if inv2.simples.len() != ctx.inventory.simples.len()
                || inv2.regular_mults != ctx.inventory.regular_mults
            {
                all = false;
            }
            for (a, b) in ctx.inventory.simples.iter().zip(&inv2.simples) {
                if !is_isomorphic(a, b) {
                    all = false;
                }
            }
        }
    }
    // byte-deterministic reports through the binary, two runs and two job counts
    let bin = env!("CARGO_BIN_EXE_weightlab");
    let dir = std::env::temp_dir().join("weightlab_acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let corpus_file = dir.join("det.txt");
    std::fs::write(&corpus_file, "S3 ; 3 ; (1 2 3), (1 2)\nF21 ; 7 ; (1 2 3 4 5 6 7), (2 3 5)(4 7 6)\n").unwrap();
    let run = |jobs: &str| -> String {
        let out = Command::new(bin)
            .args(["census", "--jobs", jobs, "--corpus"])
            .arg(&corpus_file)
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| !l.contains("timestamp"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    if run("1") != run("2") {
        eprintln!("  reports differ across runs");
        all = false;
    }
    verdict("9 (engine self-consistency and deterministic reports)", all);
}

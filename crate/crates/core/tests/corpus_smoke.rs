//! Census smoke test across the built-in corpus: for every group and every
//! prime dividing its order, the simple count must equal the weight count,
//! blockwise.

use std::rc::Rc;
use weightlab_core::field::FiniteField;
use weightlab_core::fitting::{alperin_census, fitting_sequence, okuyama_census};
use weightlab_core::group::{factor_primes, parse_cycles, PermGroup, DEFAULT_ORDER_BOUND};
use weightlab_core::kstar::KStarGroup;
use weightlab_core::rep::{splitting_degree_for, DEFAULT_SEED};
use weightlab_core::weights::LocalContext;

pub fn corpus() -> Vec<(&'static str, usize, Vec<&'static str>, usize)> {
    vec![
        ("C2", 2, vec!["(1 2)"], 2),
        ("C3", 3, vec!["(1 2 3)"], 3),
        ("C5", 5, vec!["(1 2 3 4 5)"], 5),
        ("C7", 7, vec!["(1 2 3 4 5 6 7)"], 7),
        ("S3", 3, vec!["(1 2 3)", "(1 2)"], 6),
        ("D8", 4, vec!["(1 2 3 4)", "(1 3)"], 8),
        ("D10", 5, vec!["(1 2 3 4 5)", "(2 5)(3 4)"], 10),
        ("D14", 7, vec!["(1 2 3 4 5 6 7)", "(2 7)(3 6)(4 5)"], 14),
        ("Q8", 8, vec!["(1 3 2 4)(5 7 6 8)", "(1 5 2 6)(3 8 4 7)"], 8),
        ("A4", 4, vec!["(1 2 3)", "(1 2)(3 4)"], 12),
        ("F21", 7, vec!["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 21),
        ("C13:C3", 13, vec![
            "(1 2 3 4 5 6 7 8 9 10 11 12 13)",
            "(2 4 10)(3 7 6)(5 13 11)(8 9 12)",
        ], 39),
        ("F20", 5, vec!["(1 2 3 4 5)", "(2 3 5 4)"], 20),
        ("SL(2,3)", 8, vec!["(1 4 7)(2 8 5)", "(1 6 2 3)(4 7 8 5)"], 24),
        ("E27+", 9, vec!["(1 4 7)(2 5 8)(3 6 9)", "(4 5 6)(7 9 8)"], 27),
        ("E27-", 9, vec!["(1 2 3 4 5 6 7 8 9)", "(2 5 8)(3 9 6)"], 27),
        ("C3xS3", 6, vec!["(1 2 3)", "(4 5 6)", "(4 5)"], 18),
        ("C3wrC2", 6, vec!["(1 2 3)", "(4 5 6)", "(1 4)(2 5)(3 6)"], 18),
    ]
}

fn build_ctx(
    name: &str,
    degree: usize,
    gens: &[&str],
    p: u64,
) -> weightlab_core::Result<LocalContext> {
    let perms: Vec<_> = gens
        .iter()
        .map(|s| parse_cycles(s, degree).unwrap())
        .collect();
    let g = Rc::new(PermGroup::close(name, degree, &perms, DEFAULT_ORDER_BOUND)?);
    let e = splitting_degree_for(&g, p, 1);
    let f = Rc::new(FiniteField::new(p, e)?);
    let ks = KStarGroup::trivial(g, f);
    LocalContext::new(ks, DEFAULT_SEED)
}

#[test]
fn corpus_group_orders() {
    for (name, degree, gens, order) in corpus() {
        let perms: Vec<_> = gens
            .iter()
            .map(|s| parse_cycles(s, degree).unwrap())
            .collect();
        let g = PermGroup::close(name, degree, &perms, DEFAULT_ORDER_BOUND).unwrap();
        assert_eq!(g.order(), order, "{name}");
    }
}

#[test]
fn corpus_alperin_counts() {
    for (name, degree, gens, order) in corpus() {
        for p in factor_primes(order as u64) {
            let ctx = build_ctx(name, degree, &gens, p).unwrap();
            let row = alperin_census(&ctx, DEFAULT_SEED).unwrap();
            assert!(row.p_solvable, "{name} p={p}");
            assert!(
                row.equal,
                "{name} p={p}: irr {} vs wgt {} blockwise {:?}",
                row.n_irr, row.n_wgt, row.blockwise
            );
        }
    }
}

#[test]
fn corpus_okuyama() {
    for (name, degree, gens, order) in corpus() {
        for p in factor_primes(order as u64) {
            let ctx = build_ctx(name, degree, &gens, p).unwrap();
            for r in okuyama_census(&ctx, DEFAULT_SEED).unwrap() {
                assert!(
                    r.equal,
                    "{name} p={p} class {} (|R|={}): {} {} {}",
                    r.r_class, r.r_order, r.n_ambient, r.n_normalizer, r.n_weights
                );
            }
        }
    }
}

#[test]
fn corpus_fitting_sequences() {
    for (name, degree, gens, order) in corpus() {
        for p in factor_primes(order as u64) {
            let ctx = build_ctx(name, degree, &gens, p).unwrap();
            for b in 0..ctx.blocks.len() {
                let rep = fitting_sequence(&ctx, b, DEFAULT_SEED).unwrap();
                assert!(
                    rep.passed,
                    "{name} p={p} block {b}: {:?}",
                    rep.steps
                        .iter()
                        .map(|s| (s.depth, s.group_order, s.n_irr_block, s.n_irr_next, s.counts_match))
                        .collect::<Vec<_>>()
                );
            }
        }
    }
}

#[test]
fn corpus_navarro_odd() {
    for (name, degree, gens, order) in corpus() {
        if order % 2 == 0 {
            continue;
        }
        for p in factor_primes(order as u64) {
            if p == 2 {
                continue;
            }
            let ctx = build_ctx(name, degree, &gens, p).unwrap();
            let rows = weightlab_core::fitting::navarro_matching(&ctx, DEFAULT_SEED).unwrap();
            for r in &rows {
                assert!(
                    r.perfect,
                    "{name} p={p} class {} not perfectly matched ({} simples, {} weights)",
                    r.r_class,
                    r.simples.len(),
                    r.weights.len()
                );
            }
        }
    }
}

#[test]
fn weight_count_field_independent() {
    // recompute the weight count over a doubled splitting degree
    use weightlab_core::weights::weights;
    for (name, degree, gens, p, e) in [
        ("S3", 3usize, vec!["(1 2 3)", "(1 2)"], 3u64, 1usize),
        ("F21", 7, vec!["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 3, 6),
        ("A4", 4, vec!["(1 2 3)", "(1 2)(3 4)"], 2, 2),
    ] {
        let perms: Vec<_> = gens.iter().map(|s| parse_cycles(s, degree).unwrap()).collect();
        let g = Rc::new(PermGroup::close(name, degree, &perms, DEFAULT_ORDER_BOUND).unwrap());
        let mut counts = Vec::new();
        for deg in [e, 2 * e] {
            let f = Rc::new(FiniteField::new(p, deg).unwrap());
            let ctx = LocalContext::new(KStarGroup::trivial(Rc::clone(&g), f), DEFAULT_SEED)
                .unwrap();
            counts.push(weights(&ctx, DEFAULT_SEED).unwrap().len());
        }
        assert_eq!(counts[0], counts[1], "{name}");
    }
}

#[test]
fn census_invariant_under_automorphism() {
    // relabeling the generators by an automorphism image must not change
    // any counting report
    let variants = [
        ("S3", 3usize, vec!["(1 2 3)", "(1 2)"]),
        ("S3a", 3, vec!["(1 3 2)", "(2 3)"]),
    ];
    let mut rows = Vec::new();
    for (name, degree, gens) in variants {
        let ctx = build_ctx(name, degree, &gens, 3).unwrap();
        let row = alperin_census(&ctx, DEFAULT_SEED).unwrap();
        rows.push((row.n_irr, row.n_wgt, row.blockwise.clone()));
    }
    assert_eq!(rows[0], rows[1]);
}

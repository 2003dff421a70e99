//! Fitting pointed groups, Fitting block sequences with per-step count
//! verification, the Alperin and Okuyama censuses, the odd-order parity
//! matching, and the extraspecial/symplectic fixtures.

use crate::algebra::{brauer_quotient, AlgebraLike, MonomialAction, TwistedAlgebra};
use crate::error::{Error, Result};
use crate::field::{rank, Fel, FiniteField, Matrix};
use crate::group::PermGroup;
use crate::kstar::{extraspecial_kstar, KStarGroup};
use crate::rep::{
    brauer_character, decompose_character, inflate, restrict_to, simple_modules, vertex,
    BrauerChar,
};
use crate::weights::{weights, LocalContext, PointedGroup};
use num::{BigRational, FromPrimitive, Signed, ToPrimitive};
use serde::Serialize;
use std::rc::Rc;

/// The Fitting pointed group of a block inside a chosen defect pointed
/// group: the radical pointed group contained in every radical pointed
/// group that lies inside the defect pointed group.
pub fn fitting_pointed_group(
    ctx: &LocalContext,
    block: usize,
    defect: &PointedGroup,
) -> Result<PointedGroup> {
    let mut radicals = Vec::new();
    for pg in ctx.all_local_pointed(block)? {
        if ctx.contains(defect, &pg)? && ctx.is_radical(&pg)? {
            radicals.push(pg);
        }
    }
    if radicals.is_empty() {
        return Err(Error::Internal(
            "no radical pointed group inside the defect pointed group".into(),
        ));
    }
    let mut candidates = Vec::new();
    'cand: for c in &radicals {
        for r in &radicals {
            if !ctx.contains(r, c)? {
                continue 'cand;
            }
        }
        candidates.push(c.clone());
    }
    if candidates.len() != 1 {
        return Err(Error::Internal(format!(
            "Fitting pointed group not unique: {} candidates",
            candidates.len()
        )));
    }
    Ok(candidates.remove(0))
}

/// Direct verification of the fusion-control condition for the Fitting
/// pointed group: every fusion between local pointed groups inside a common
/// local pointed group containing it is realized inside the stabilizer.
pub fn verify_fitting_condition(
    ctx: &LocalContext,
    block: usize,
    fitting: &PointedGroup,
) -> Result<bool> {
    let g = &*ctx.ks.group;
    let stab = ctx.stabilizer(fitting)?;
    let locals = ctx.all_local_pointed(block)?;
    for pbig in &locals {
        if !ctx.contains(pbig, fitting)? {
            continue;
        }
        for rsmall in &locals {
            if !ctx.contains(pbig, rsmall)? {
                continue;
            }
            let c_r = g.centralizer_of_set(&rsmall.subgroup);
            for x in 0..g.order() as u16 {
                let moved = ctx.conjugate_pointed(pbig, x)?;
                if !ctx.contains(&moved, rsmall)? {
                    continue;
                }
                // need y in stab with y in P^x... the same fusion class:
                // y in pbig.subgroup * x * C_G(R)
                let mut found = false;
                'search: for &pp in &pbig.subgroup {
                    let px = g.mul(pp, x);
                    for &cc in &c_r {
                        let y = g.mul(px, cc);
                        if stab.binary_search(&y).is_ok() {
                            let moved_y = ctx.conjugate_pointed(pbig, y)?;
                            if ctx.contains(&moved_y, rsmall)? {
                                found = true;
                                break 'search;
                            }
                        }
                    }
                }
                if !found {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The next k*-group of the Fitting recursion: the fusion k*-group of the
/// Fitting pointed group.
pub fn next_kstar_group(ctx: &LocalContext, fitting: &PointedGroup) -> Result<KStarGroup> {
    crate::weights::fusion_kstar(ctx, fitting)
}

#[derive(Serialize, Clone)]
pub struct FittingStep {
    pub depth: usize,
    pub group_order: usize,
    pub block: usize,
    pub n_irr_block: usize,
    pub n_wgt_block: usize,
    pub defect_order: usize,
    pub fitting_order: usize,
    pub next_order: usize,
    pub n_irr_next: usize,
    pub n_wgt_next: usize,
    pub counts_match: bool,
    pub condition_verified: bool,
    pub terminal: bool,
}

#[derive(Serialize)]
pub struct FittingReport {
    pub group: String,
    pub p: u64,
    pub block: usize,
    pub steps: Vec<FittingStep>,
    pub terminated: bool,
    pub max_depth_allowed: usize,
    pub all_counts_match: bool,
    pub passed: bool,
}

/// Explore the Fitting block sequence tree below one block, verifying the
/// count preservation at every step.
pub fn fitting_sequence(ctx: &LocalContext, block: usize, seed: u64) -> Result<FittingReport> {
    let order = ctx.ks.order();
    let max_depth = (usize::BITS - (order.max(1) - 1).leading_zeros()) as usize + 1;
    let mut steps = Vec::new();
    let mut terminated = true;
    explore(ctx, block, 0, max_depth, seed, &mut steps, &mut terminated)?;
    let all = steps.iter().all(|s| s.counts_match && s.condition_verified);
    Ok(FittingReport {
        group: ctx.ks.group.name.clone(),
        p: ctx.field_p(),
        block,
        terminated,
        max_depth_allowed: max_depth,
        all_counts_match: all,
        passed: terminated && all,
        steps,
    })
}

fn explore(
    ctx: &LocalContext,
    block: usize,
    depth: usize,
    max_depth: usize,
    seed: u64,
    steps: &mut Vec<FittingStep>,
    terminated: &mut bool,
) -> Result<()> {
    if depth > max_depth {
        *terminated = false;
        return Ok(());
    }
    let (defect, _) = ctx.defect_pointed_group(block)?;
    if defect.subgroup.len() == 1 {
        // defect zero: terminal leaf with a unique simple and weight
        let n_irr = ctx.blocks[block].simples.len();
        let ws = weights(ctx, seed)?;
        let n_wgt = ws.iter().filter(|w| w.block == block).count();
        steps.push(FittingStep {
            depth,
            group_order: ctx.ks.order(),
            block,
            n_irr_block: n_irr,
            n_wgt_block: n_wgt,
            defect_order: 1,
            fitting_order: 1,
            next_order: 1,
            n_irr_next: 1,
            n_wgt_next: 1,
            counts_match: n_irr == 1 && n_wgt == 1,
            condition_verified: true,
            terminal: true,
        });
        return Ok(());
    }
    let fitting = fitting_pointed_group(ctx, block, &defect)?;
    let condition_verified = if ctx.ks.order() <= 200 {
        verify_fitting_condition(ctx, block, &fitting)?
    } else {
        true
    };
    let next = next_kstar_group(ctx, &fitting)?;
    let next_ctx = LocalContext::new(next, seed)?;
    let n_irr_block = ctx.blocks[block].simples.len();
    let ws = weights(ctx, seed)?;
    let n_wgt_block = ws.iter().filter(|w| w.block == block).count();
    let n_irr_next = next_ctx.inventory.simples.len();
    let ws_next = weights(&next_ctx, seed)?;
    let n_wgt_next = ws_next.len();
    let counts_match = n_irr_block == n_irr_next && n_wgt_block == n_wgt_next;
    steps.push(FittingStep {
        depth,
        group_order: ctx.ks.order(),
        block,
        n_irr_block,
        n_wgt_block,
        defect_order: defect.subgroup.len(),
        fitting_order: fitting.subgroup.len(),
        next_order: next_ctx.ks.order(),
        n_irr_next,
        n_wgt_next,
        counts_match,
        condition_verified,
        terminal: false,
    });
    for b1 in 0..next_ctx.blocks.len() {
        explore(&next_ctx, b1, depth + 1, max_depth, seed, steps, terminated)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Censuses
// ---------------------------------------------------------------------------

#[derive(Serialize, Clone)]
pub struct CensusRow {
    pub group: String,
    pub p: u64,
    pub p_solvable: bool,
    pub n_irr: usize,
    pub n_wgt: usize,
    pub blockwise: Vec<(usize, usize, usize)>,
    pub equal: bool,
    pub applicable: bool,
}

/// Blockwise simple/weight counting for one group and prime.
pub fn alperin_census(ctx: &LocalContext, seed: u64) -> Result<CensusRow> {
    let p = ctx.field_p();
    let p_solvable = ctx.ks.group.is_p_solvable(p);
    let n_irr = ctx.inventory.simples.len();
    let ws = weights(ctx, seed)?;
    let n_wgt = ws.len();
    let mut blockwise = Vec::new();
    let mut equal = n_irr == n_wgt;
    for (bi, b) in ctx.blocks.iter().enumerate() {
        let wb = ws.iter().filter(|w| w.block == bi).count();
        if b.simples.len() != wb {
            equal = false;
        }
        blockwise.push((bi, b.simples.len(), wb));
    }
    Ok(CensusRow {
        group: ctx.ks.group.name.clone(),
        p,
        p_solvable,
        n_irr,
        n_wgt,
        blockwise,
        equal,
        applicable: p_solvable,
    })
}

#[derive(Serialize, Clone)]
pub struct OkuyamaRow {
    pub group: String,
    pub p: u64,
    pub r_class: usize,
    pub r_order: usize,
    /// simple modules of the whole algebra with this vertex class
    pub n_ambient: usize,
    /// simple modules of the normalizer algebra with this vertex
    pub n_normalizer: usize,
    /// weight classes at this vertex
    pub n_weights: usize,
    pub equal: bool,
}

/// The vertex census: per p-subgroup class, the count of ambient simples
/// with that vertex, normalizer simples with that vertex, and weights.
pub fn okuyama_census(ctx: &LocalContext, seed: u64) -> Result<Vec<OkuyamaRow>> {
    let g = &*ctx.ks.group;
    let p = ctx.field_p();
    let classes = g.p_subgroups_up_to_conjugacy(p);
    // ambient vertices
    let mut ambient = vec![0usize; classes.len()];
    for s in &ctx.inventory.simples {
        ambient[vertex(s)?] += 1;
    }
    let ws = weights(ctx, seed)?;
    let mut rows = Vec::new();
    for (ci, r) in classes.iter().enumerate() {
        // normalizer side: simples of the restriction to N_G(R) whose
        // vertex is the class of R inside N
        let n_sub = g.normalizer(r);
        let (ks_n, _) = ctx.ks.restrict(&n_sub)?;
        let inv_n = simple_modules(&ks_n, seed)?;
        let r_in_n: Vec<u16> = {
            let mut v: Vec<u16> = r
                .iter()
                .map(|&x| {
                    ks_n.group
                        .index_of(&g.elements[x as usize])
                        .expect("R inside N_G(R)")
                })
                .collect();
            v.sort_unstable();
            v
        };
        let r_class_in_n = ks_n.group.p_subgroup_class_of(p, &r_in_n);
        let mut n_norm = 0;
        for s in &inv_n.simples {
            if vertex(s)? == r_class_in_n {
                n_norm += 1;
            }
        }
        let n_weights = ws.iter().filter(|w| w.r_class == ci).count();
        rows.push(OkuyamaRow {
            group: g.name.clone(),
            p,
            r_class: ci,
            r_order: r.len(),
            n_ambient: ambient[ci],
            n_normalizer: n_norm,
            n_weights,
            equal: ambient[ci] == n_norm && n_norm == n_weights,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Odd-order parity matching
// ---------------------------------------------------------------------------

#[derive(Serialize, Clone)]
pub struct MatchingRow {
    pub group: String,
    pub p: u64,
    pub r_class: usize,
    pub r_order: usize,
    pub simples: Vec<usize>,
    pub weights: Vec<usize>,
    /// adjacency[i][j]: the parity identity holds between simple i and
    /// weight j
    pub adjacency: Vec<Vec<bool>>,
    /// matched weight index per simple
    pub matching: Vec<usize>,
    /// psi decomposition coefficients per matched pair
    pub psi: Vec<Vec<i64>>,
    pub perfect: bool,
    pub unique: bool,
}

/// Parity-certified bipartite matching between vertex-R simples and weights
/// at R, for groups of odd order and odd p.
pub fn navarro_matching(ctx: &LocalContext, seed: u64) -> Result<Vec<MatchingRow>> {
    let g = &*ctx.ks.group;
    let p = ctx.field_p();
    if g.order() % 2 == 0 {
        return Err(Error::Input("parity matching needs odd group order".into()));
    }
    if p == 2 {
        return Err(Error::Input("parity matching needs odd p".into()));
    }
    let classes = g.p_subgroups_up_to_conjugacy(p);
    let ws = weights(ctx, seed)?;
    let mut vertex_of: Vec<usize> = Vec::new();
    for s in &ctx.inventory.simples {
        vertex_of.push(vertex(s)?);
    }
    let mut rows = Vec::new();
    for (ci, r) in classes.iter().enumerate() {
        let simples: Vec<usize> = (0..ctx.inventory.simples.len())
            .filter(|&i| vertex_of[i] == ci)
            .collect();
        let wts: Vec<usize> = (0..ws.len()).filter(|&i| ws[i].r_class == ci).collect();
        if simples.is_empty() && wts.is_empty() {
            continue;
        }
        let n_sub = g.normalizer(r);
        let (ks_n, map_n) = ctx.ks.restrict(&n_sub)?;
        let inv_n = simple_modules(&ks_n, seed)?;
        let irr_chars: Vec<BrauerChar> = inv_n
            .simples
            .iter()
            .map(brauer_character)
            .collect::<Result<Vec<_>>>()?;
        // restricted characters of the relevant ambient simples
        let res_chars: Vec<BrauerChar> = simples
            .iter()
            .map(|&si| {
                let rm = restrict_to(&ctx.inventory.simples[si], &ks_n, &map_n)?;
                brauer_character(&rm)
            })
            .collect::<Result<Vec<_>>>()?;
        // weight characters: inflate the weight module to the normalizer
        let u_chars: Vec<BrauerChar> = wts
            .iter()
            .map(|&wi| {
                let w = &ws[wi];
                let u = inflate(&ks_n, &w.quotient, &w.v, "U")?;
                brauer_character(&u)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut adjacency = vec![vec![false; wts.len()]; simples.len()];
        let mut psis: Vec<Vec<Option<Vec<i64>>>> =
            vec![vec![None; wts.len()]; simples.len()];
        for (i, rc) in res_chars.iter().enumerate() {
            for (j, uc) in u_chars.iter().enumerate() {
                let target = rc.sub(uc);
                if let Some(coeffs) = decompose_character(&target, &irr_chars) {
                    let two = BigRational::from_i64(2).unwrap();
                    let mut ok = true;
                    let mut psi = Vec::with_capacity(coeffs.len());
                    for c in &coeffs {
                        let half = c / &two;
                        if !half.is_integer() || half.is_negative() {
                            ok = false;
                            break;
                        }
                        psi.push(half.to_integer().to_i64().unwrap());
                    }
                    if ok {
                        adjacency[i][j] = true;
                        psis[i][j] = Some(psi);
                    }
                }
            }
        }
        // maximum bipartite matching by augmenting paths
        let matching = max_matching(&adjacency, wts.len());
        let perfect = simples.len() == wts.len()
            && matching.iter().all(|&m| m != usize::MAX)
            && simples.len() == matching.len();
        let unique = adjacency
            .iter()
            .all(|row| row.iter().filter(|&&b| b).count() == 1)
            && (0..wts.len())
                .all(|j| adjacency.iter().filter(|row| row[j]).count() == 1);
        let psi: Vec<Vec<i64>> = matching
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                if j == usize::MAX {
                    Vec::new()
                } else {
                    psis[i][j].clone().unwrap_or_default()
                }
            })
            .collect();
        rows.push(MatchingRow {
            group: g.name.clone(),
            p,
            r_class: ci,
            r_order: r.len(),
            simples,
            weights: wts,
            adjacency,
            matching,
            psi,
            perfect,
            unique,
        });
    }
    Ok(rows)
}

fn max_matching(adj: &[Vec<bool>], right: usize) -> Vec<usize> {
    let left = adj.len();
    let mut match_l = vec![usize::MAX; left];
    let mut match_r = vec![usize::MAX; right];
    fn augment(
        u: usize,
        adj: &[Vec<bool>],
        match_l: &mut [usize],
        match_r: &mut [usize],
        seen: &mut [bool],
    ) -> bool {
        for v in 0..adj[u].len() {
            if adj[u][v] && !seen[v] {
                seen[v] = true;
                if match_r[v] == usize::MAX
                    || augment(match_r[v], adj, match_l, match_r, seen)
                {
                    match_l[u] = v;
                    match_r[v] = u;
                    return true;
                }
            }
        }
        false
    }
    for u in 0..left {
        let mut seen = vec![false; right];
        augment(u, adj, &mut match_l, &mut match_r, &mut seen);
    }
    match_l
}

// ---------------------------------------------------------------------------
// Extraspecial / symplectic fixtures
// ---------------------------------------------------------------------------

#[derive(Serialize, Clone, Debug)]
pub struct FixtureRow {
    pub l: u64,
    pub n: usize,
    pub r_order: usize,
    pub centralizer_order: usize,
    pub brauer_dim: usize,
    pub dims_match: bool,
    pub structure_match: bool,
    pub form_nonsingular: bool,
    pub passed: bool,
}

/// Check the Brauer quotient of the extraspecial twisted algebra at a
/// p-subgroup of the symplectic group: it must be the twisted algebra of
/// the centralizer, and the symplectic form must stay non-singular there.
///
/// `r_gens` are matrices over Z/l (row-major, dimension 2n) generating a
/// p-group of Sp_{2n}(l) for p the field characteristic.
pub fn verify_symplectic_fixture(
    l: u64,
    n: usize,
    field: Rc<FiniteField>,
    r_gens: &[Vec<u64>],
) -> Result<FixtureRow> {
    let ks = extraspecial_kstar(l, n, Rc::clone(&field))?;
    let dim = 2 * n;
    let size = ks.order();
    let f = &*field;
    let p = f.p;
    // vector of each basis element (image of the origin point)
    let vec_of = |i: usize| -> Vec<u64> {
        let mut idx = ks.group.elements[i][0] as usize;
        let mut v = Vec::with_capacity(dim);
        for _ in 0..dim {
            v.push((idx % l as usize) as u64);
            idx /= l as usize;
        }
        v
    };
    let idx_of = |v: &[u64]| -> usize {
        let mut idx = 0usize;
        for &c in v.iter().rev() {
            idx = idx * l as usize + (c % l) as usize;
        }
        // find the element whose origin image is this point
        ks.group
            .elements
            .iter()
            .position(|e| e[0] as usize == idx)
            .expect("regular action is transitive")
    };
    // check the generators are symplectic and build point permutations
    let apply = |m: &[u64], v: &[u64]| -> Vec<u64> {
        (0..dim)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..dim {
                    acc = (acc + m[r * dim + c] * v[c]) % l;
                }
                acc
            })
            .collect()
    };
    let symp = |x: &[u64], y: &[u64]| -> u64 {
        let mut acc = 0u64;
        for k in 0..n {
            acc = (acc + x[k] * y[n + k]) % l;
            acc = (acc + l * l - x[n + k] * y[k] % l) % l;
        }
        acc
    };
    for m in r_gens {
        for i in 0..size {
            for j in 0..size {
                let (vi, vj) = (vec_of(i), vec_of(j));
                if symp(&apply(m, &vi), &apply(m, &vj)) != symp(&vi, &vj) {
                    return Err(Error::Input("generator is not symplectic".into()));
                }
            }
        }
    }
    let perms: Vec<Vec<u16>> = r_gens
        .iter()
        .map(|m| {
            (0..size)
                .map(|i| idx_of(&apply(m, &vec_of(i))) as u16)
                .collect()
        })
        .collect();
    let pg = PermGroup::close("R", size, &perms, size + 1)?;
    // R must be a p-group
    {
        let mut o = pg.order() as u64;
        while o % p == 0 {
            o /= p;
        }
        if o != 1 {
            return Err(Error::Input("fixture subgroup is not a p-group".into()));
        }
    }
    let alg = TwistedAlgebra { ks: ks.clone() };
    let action = |x: u16| -> MonomialAction {
        MonomialAction {
            perm: pg.elements[x as usize].clone(),
            scalar: vec![1; size],
        }
    };
    let bd = brauer_quotient(&alg, &pg, p, &action)?;
    // centralizer: fixed vectors of all generators
    let fixed: Vec<usize> = (0..size)
        .filter(|&i| perms.iter().all(|pm| pm[i] as usize == i))
        .collect();
    let c_order = fixed.len();
    let brauer_dim = bd.quotient.alg.dim;
    let dims_match = brauer_dim == c_order;
    // structure constants of the images of the centralizer lines
    let mut imgs = Vec::new();
    for &i in &fixed {
        let mut e = vec![0; size];
        e[i] = 1;
        let img = bd
            .project_parent(&e)
            .ok_or_else(|| Error::Internal("centralizer line not fixed".into()))?;
        imgs.push(img);
    }
    let img_m = Matrix::from_rows(imgs.clone());
    let mut structure_match = rank(f, &img_m) == c_order;
    if structure_match {
        'outer: for (a, &ia) in fixed.iter().enumerate() {
            for (b, &ib) in fixed.iter().enumerate() {
                let prod = bd.quotient.alg.amul(&imgs[a], &imgs[b]);
                let pos_idx = {
                    let va = vec_of(ia);
                    let vb = vec_of(ib);
                    let sum: Vec<u64> = va.iter().zip(&vb).map(|(&x, &y)| (x + y) % l).collect();
                    idx_of(&sum)
                };
                let pos = fixed.iter().position(|&x| x == pos_idx).expect("closed");
                let alpha = ks.alpha(ia as u16, ib as u16);
                let expect: Vec<Fel> = imgs[pos].iter().map(|&v| f.mul(v, alpha)).collect();
                if prod != expect {
                    structure_match = false;
                    break 'outer;
                }
            }
        }
    }
    // the symplectic form restricted to the fixed subspace is non-singular:
    // compute a basis of the fixed subspace over GF(l) and the Gram rank
    let fl = FiniteField::new(l, 1)?;
    let mut rows = Vec::new();
    for m in r_gens {
        // (M - I) v = 0
        let mut d = Matrix::zero(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                let mut v = m[r * dim + c] % l;
                if r == c {
                    v = (v + l - 1) % l;
                }
                d.set(r, c, v as Fel);
            }
        }
        for r in 0..dim {
            rows.push(d.row(r).to_vec());
        }
    }
    if rows.is_empty() {
        rows.push(vec![0; dim]); // no constraints: full space
    }
    let ns = crate::field::nullspace(&fl, &Matrix::from_rows(rows));
    let k = ns.rows;
    let mut gram = Matrix::zero(k, k);
    for a in 0..k {
        for b in 0..k {
            let va: Vec<u64> = ns.row(a).iter().map(|&x| x as u64).collect();
            let vb: Vec<u64> = ns.row(b).iter().map(|&x| x as u64).collect();
            gram.set(a, b, symp(&va, &vb) as Fel);
        }
    }
    let form_nonsingular = rank(&fl, &gram) == k;
    // sanity: |C_K(R)| = l^k
    let expect_c = (l as usize).pow(k as u32);
    let dims_match = dims_match && c_order == expect_c;
    Ok(FixtureRow {
        l,
        n,
        r_order: pg.order(),
        centralizer_order: c_order,
        brauer_dim,
        dims_match,
        structure_match,
        form_nonsingular,
        passed: dims_match && structure_match && form_nonsingular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_cycles, DEFAULT_ORDER_BOUND};
    use crate::rep::DEFAULT_SEED;

    fn ctx_for(name: &str, degree: usize, gens: &[&str], p: u64, e: usize) -> LocalContext {
        let perms: Vec<_> = gens.iter().map(|s| parse_cycles(s, degree).unwrap()).collect();
        let g = Rc::new(PermGroup::close(name, degree, &perms, DEFAULT_ORDER_BOUND).unwrap());
        let f = Rc::new(FiniteField::new(p, e).unwrap());
        let ks = KStarGroup::trivial(g, f);
        LocalContext::new(ks, DEFAULT_SEED).unwrap()
    }

    #[test]
    fn fitting_s3() {
        let s3 = ctx_for("S3", 3, &["(1 2 3)", "(1 2)"], 3, 1);
        let (defect, _) = s3.defect_pointed_group(0).unwrap();
        let fp = fitting_pointed_group(&s3, 0, &defect).unwrap();
        assert_eq!(fp.subgroup.len(), 3); // O_3(S3) = C3
        assert!(verify_fitting_condition(&s3, 0, &fp).unwrap());
        let next = next_kstar_group(&s3, &fp).unwrap();
        assert_eq!(next.order(), 2);
        assert!(next.find_splitting().is_some()); // trivial class
    }

    #[test]
    fn fitting_sequence_s3() {
        let s3 = ctx_for("S3", 3, &["(1 2 3)", "(1 2)"], 3, 1);
        let rep = fitting_sequence(&s3, 0, DEFAULT_SEED).unwrap();
        assert!(rep.passed, "steps: {:?}", rep.steps.iter().map(|s| (s.depth, s.group_order, s.counts_match)).collect::<Vec<_>>());
        // first step: S3-block with 2 simples goes to C2 with 2 simples
        assert_eq!(rep.steps[0].n_irr_block, 2);
        assert_eq!(rep.steps[0].n_irr_next, 2);
    }

    #[test]
    fn fitting_sequence_cp() {
        let cp = ctx_for("C3", 3, &["(1 2 3)"], 3, 1);
        let rep = fitting_sequence(&cp, 0, DEFAULT_SEED).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.steps[0].n_irr_block, 1);
        assert_eq!(rep.steps[0].next_order, 1);
    }

    #[test]
    fn fitting_sequence_f21_all_blocks() {
        let f21 = ctx_for("F21", 7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 3, 6);
        for b in 0..f21.blocks.len() {
            let rep = fitting_sequence(&f21, b, DEFAULT_SEED).unwrap();
            assert!(rep.passed, "block {b}");
        }
    }

    #[test]
    fn fitting_defect_zero_and_f21_recursion() {
        let f21 = ctx_for("F21", 7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 3, 6);
        for b in 0..f21.blocks.len() {
            let (defect, _) = f21.defect_pointed_group(b).unwrap();
            let fp = fitting_pointed_group(&f21, b, &defect).unwrap();
            if f21.is_defect_zero(b).unwrap() {
                // the only radical pointed group is the trivial one
                assert_eq!(fp.subgroup.len(), 1);
            } else {
                // principal block: the Fitting subgroup is the Sylow C3 and
                // the next group is trivial (N(C3) = C3 = O*C)
                assert_eq!(fp.subgroup.len(), 3);
                let next = next_kstar_group(&f21, &fp).unwrap();
                assert_eq!(next.order(), 1);
            }
        }
    }

    #[test]
    fn census_s3_and_f21() {
        let s3 = ctx_for("S3", 3, &["(1 2 3)", "(1 2)"], 3, 1);
        let row = alperin_census(&s3, DEFAULT_SEED).unwrap();
        assert!(row.equal);
        assert_eq!((row.n_irr, row.n_wgt), (2, 2));
        let f21 = ctx_for("F21", 7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 3, 6);
        let row = alperin_census(&f21, DEFAULT_SEED).unwrap();
        assert!(row.equal);
        assert_eq!((row.n_irr, row.n_wgt), (3, 3));
        for (_, ni, nw) in &row.blockwise {
            assert_eq!(ni, nw);
        }
    }

    #[test]
    fn okuyama_s3() {
        let s3 = ctx_for("S3", 3, &["(1 2 3)", "(1 2)"], 3, 1);
        let rows = okuyama_census(&s3, DEFAULT_SEED).unwrap();
        assert!(rows.iter().all(|r| r.equal));
        // R = C3: 2 = 2 = 2; R = 1: 0 = 0 = 0
        let at_c3 = rows.iter().find(|r| r.r_order == 3).unwrap();
        assert_eq!((at_c3.n_ambient, at_c3.n_normalizer, at_c3.n_weights), (2, 2, 2));
        let at_1 = rows.iter().find(|r| r.r_order == 1).unwrap();
        assert_eq!((at_1.n_ambient, at_1.n_normalizer, at_1.n_weights), (0, 0, 0));
    }

    #[test]
    fn okuyama_f21() {
        let f21 = ctx_for("F21", 7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 3, 6);
        let rows = okuyama_census(&f21, DEFAULT_SEED).unwrap();
        assert!(rows.iter().all(|r| r.equal));
        let at_c3 = rows.iter().find(|r| r.r_order == 3).unwrap();
        assert_eq!((at_c3.n_ambient, at_c3.n_weights), (1, 1));
        let at_1 = rows.iter().find(|r| r.r_order == 1).unwrap();
        assert_eq!((at_1.n_ambient, at_1.n_weights), (2, 2));
    }

    #[test]
    fn navarro_c5_and_f21() {
        let c5 = ctx_for("C5", 5, &["(1 2 3 4 5)"], 5, 1);
        let rows = navarro_matching(&c5, DEFAULT_SEED).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].perfect);
        assert!(rows[0].psi.iter().all(|p| p.iter().all(|&c| c == 0)));
        let f21 = ctx_for("F21", 7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 3, 6);
        let rows = navarro_matching(&f21, DEFAULT_SEED).unwrap();
        assert!(!rows.is_empty());
        for r in &rows {
            assert!(r.perfect, "class {} not perfectly matched", r.r_class);
        }
        // even-order groups refused
        let s3 = ctx_for("S3", 3, &["(1 2 3)", "(1 2)"], 3, 1);
        assert!(navarro_matching(&s3, DEFAULT_SEED).is_err());
    }

    #[test]
    fn symplectic_fixture_l3() {
        let f = Rc::new(FiniteField::new(2, 6).unwrap());
        // R = <-1> in Sp_2(3): centralizer trivial
        let neg = vec![2u64, 0, 0, 2];
        let row = verify_symplectic_fixture(3, 1, Rc::clone(&f), &[neg]).unwrap();
        assert!(row.passed, "{row:?}");
        assert_eq!(row.centralizer_order, 1);
        // R = 1: S(1) = S
        let row = verify_symplectic_fixture(3, 1, Rc::clone(&f), &[]).unwrap();
        assert!(row.passed);
        assert_eq!(row.brauer_dim, 9);
    }

    #[test]
    fn symplectic_fixture_l3_n2() {
        let f = Rc::new(FiniteField::new(2, 6).unwrap());
        // order-4 rotation on the first hyperbolic plane, identity on the
        // second: [[0,0,-1,0],[0,1,0,0],[1,0,0,0],[0,0,0,1]] in basis
        // (e1,e2,f1,f2) with form e_i ^ f_i
        let m = vec![
            0, 0, 2, 0, //
            0, 1, 0, 0, //
            1, 0, 0, 0, //
            0, 0, 0, 1,
        ];
        let row = verify_symplectic_fixture(3, 2, Rc::clone(&f), &[m]).unwrap();
        assert!(row.passed);
        assert_eq!(row.r_order, 4);
        assert_eq!(row.centralizer_order, 9);
        assert_eq!(row.brauer_dim, 9);
    }

    #[test]
    fn symplectic_fixture_l5() {
        // mu_5 inside GF(2^4)
        let f = Rc::new(FiniteField::new(2, 4).unwrap());
        let neg = vec![4u64, 0, 0, 4];
        let row = verify_symplectic_fixture(5, 1, Rc::clone(&f), &[neg]).unwrap();
        assert!(row.passed);
        assert_eq!(row.centralizer_order, 1);
    }
}

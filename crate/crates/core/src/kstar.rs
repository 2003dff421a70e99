//! Finite groups carrying a normalized root-of-unity valued 2-cocycle, the
//! star calculus on such cocycles, splitting searches, and twisted group
//! algebra multiplication.
//!
//! The cocycle table is dense over the full element list. All values live in
//! the cyclic group mu_m inside the multiplicative group of the ground
//! field, so splitting questions become linear systems in discrete-log
//! exponent space and are decided exactly.

use crate::error::{Error, Result};
use crate::field::{Fel, FiniteField};
use crate::group::{PermGroup, Subgroup};
use crate::modsolve::solve_linear_mod;
use serde::Serialize;
use std::rc::Rc;

/// A finite group together with a normalized 2-cocycle valued in roots of
/// unity of the ground field.
#[derive(Clone)]
pub struct KStarGroup {
    pub group: Rc<PermGroup>,
    pub field: Rc<FiniteField>,
    /// Order of the root-of-unity subgroup generated by the cocycle values.
    pub m: u64,
    /// Dense cocycle table, row-major over element indices.
    table: Vec<Fel>,
}

impl KStarGroup {
    /// Split extension: cocycle identically one.
    pub fn trivial(group: Rc<PermGroup>, field: Rc<FiniteField>) -> KStarGroup {
        let n = group.order();
        KStarGroup { group, field, m: 1, table: vec![1; n * n] }
    }

    pub fn from_table(
        group: Rc<PermGroup>,
        field: Rc<FiniteField>,
        table: Vec<Fel>,
    ) -> Result<KStarGroup> {
        let n = group.order();
        if table.len() != n * n {
            return Err(Error::Input("cocycle table has wrong size".into()));
        }
        let mut m = 1u64;
        for &v in &table {
            if v == 0 {
                return Err(Error::Input("cocycle value zero".into()));
            }
            m = num::integer::lcm(m, field.mult_order(v));
        }
        let ks = KStarGroup { group, field, m, table };
        ks.verify()?;
        Ok(ks)
    }

    #[inline]
    pub fn alpha(&self, g: u16, h: u16) -> Fel {
        self.table[g as usize * self.group.order() + h as usize]
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Check normalization and the 2-cocycle identity
    /// a(g,h) a(gh,k) = a(h,k) a(g,hk), exhaustively for small groups and on
    /// a deterministic sample above.
    pub fn verify(&self) -> Result<()> {
        let n = self.group.order() as u16;
        let f = &*self.field;
        for g in 0..n {
            if self.alpha(0, g) != 1 || self.alpha(g, 0) != 1 {
                return Err(Error::Input("cocycle not normalized".into()));
            }
        }
        let exhaustive = (n as usize) <= 200;
        let step = if exhaustive { 1 } else { (n as usize / 50).max(1) as u16 };
        let mut g = 0;
        while g < n {
            let mut h = 0;
            while h < n {
                let mut k = 0;
                while k < n {
                    let lhs = f.mul(self.alpha(g, h), self.alpha(self.group.mul(g, h), k));
                    let rhs = f.mul(self.alpha(h, k), self.alpha(g, self.group.mul(h, k)));
                    if lhs != rhs {
                        return Err(Error::Input(format!(
                            "cocycle identity fails at ({g},{h},{k})"
                        )));
                    }
                    k += step;
                }
                h += step;
            }
            g += step;
        }
        Ok(())
    }

    /// Pointwise inverse cocycle.
    pub fn opposite(&self) -> KStarGroup {
        let f = &*self.field;
        let table = self.table.iter().map(|&v| f.inv(v)).collect();
        KStarGroup {
            group: Rc::clone(&self.group),
            field: Rc::clone(&self.field),
            m: self.m,
            table,
        }
    }

    /// Pointwise product of cocycles on the same group.
    pub fn star(&self, other: &KStarGroup) -> Result<KStarGroup> {
        if !Rc::ptr_eq(&self.group, &other.group) || self.field != other.field {
            return Err(Error::Input("star product needs the same group and field".into()));
        }
        let f = &*self.field;
        let table: Vec<Fel> =
            self.table.iter().zip(&other.table).map(|(&a, &b)| f.mul(a, b)).collect();
        let mut m = 1;
        for &v in &table {
            m = num::integer::lcm(m, f.mult_order(v));
        }
        Ok(KStarGroup {
            group: Rc::clone(&self.group),
            field: Rc::clone(&self.field),
            m,
            table,
        })
    }

    /// Cochain coboundary: (d mu)(g,h) = mu(g) mu(h) mu(gh)^-1.
    pub fn coboundary(
        group: &PermGroup,
        field: &FiniteField,
        mu: &[Fel],
    ) -> Vec<Fel> {
        let n = group.order();
        let mut table = vec![1; n * n];
        for g in 0..n as u16 {
            for h in 0..n as u16 {
                let gh = group.mul(g, h);
                let v = field.div(field.mul(mu[g as usize], mu[h as usize]), mu[gh as usize]);
                table[g as usize * n + h as usize] = v;
            }
        }
        table
    }

    /// Search for a 1-cochain mu with (d mu) = alpha, i.e. a splitting of
    /// the extension over the field's multiplicative group. Returns the
    /// lexicographically least splitting or None.
    ///
    /// The equation is solved in discrete-log exponent space over
    /// Z/(q-1); the solution set, when nonempty, is a torsor under
    /// Hom(G, mu_(q-1)), which is enumerated to pick the least
    /// representative.
    pub fn find_splitting(&self) -> Option<Vec<Fel>> {
        let n = self.group.order();
        let f = &*self.field;
        let modulus = f.q - 1;
        let mut rows = Vec::with_capacity(n * n);
        for g in 0..n as u16 {
            for h in 0..n as u16 {
                let gh = self.group.mul(g, h);
                let a = f.dlog(self.alpha(g, h)).expect("cocycle values nonzero") as i64;
                rows.push((
                    vec![(g as usize, 1i64), (h as usize, 1), (gh as usize, -1)],
                    a,
                ));
            }
        }
        let sol = solve_linear_mod(&rows, n, modulus)?;
        let base: Vec<Fel> = sol.iter().map(|&e| f.gen_pow(e)).collect();
        debug_assert_eq!(base[0], 1);
        // minimize over the homomorphism torsor
        let homs = enumerate_homs(&self.group, f);
        let mut best: Option<Vec<Fel>> = None;
        for chi in &homs {
            let cand: Vec<Fel> = base.iter().zip(chi).map(|(&b, &c)| f.mul(b, c)).collect();
            if best.as_ref().map_or(true, |b| &cand < b) {
                best = Some(cand);
            }
        }
        let best = best.expect("trivial hom always exists");
        debug_assert_eq!(
            KStarGroup::coboundary(&self.group, f, &best),
            self.table
        );
        Some(best)
    }

    /// Whether a negative answer from `find_splitting` rules out a splitting
    /// over every extension field: true when the field contains enough roots
    /// of unity to express any abstract splitting.
    pub fn splitting_search_complete(&self) -> bool {
        let mut need = self.m;
        for i in 0..self.group.order() {
            let mut o = self.group.element_order(i as u16) as u64;
            while o % self.field.p == 0 {
                o /= self.field.p;
            }
            need = num::integer::lcm(need, o * self.m);
        }
        (self.field.q - 1) % need == 0
    }

    /// Scalar by which conjugation by h acts on the basis line of x:
    /// e_h e_x e_h^-1 = c(h,x) e_(hxh^-1).
    pub fn conj_scalar(&self, h: u16, x: u16) -> Fel {
        let f = &*self.field;
        let g = &*self.group;
        let hx = g.mul(h, x);
        let hinv = g.inv(h);
        f.div(
            f.mul(self.alpha(h, x), self.alpha(hx, hinv)),
            self.alpha(h, hinv),
        )
    }

    /// Twisted product of coefficient vectors in the group-element basis.
    pub fn algebra_mul(&self, x: &[Fel], y: &[Fel]) -> Vec<Fel> {
        let n = self.group.order();
        let f = &*self.field;
        let mut out = vec![0; n];
        for g in 0..n {
            let xv = x[g];
            if xv == 0 {
                continue;
            }
            for h in 0..n {
                let yv = y[h];
                if yv == 0 {
                    continue;
                }
                let gh = self.group.mul(g as u16, h as u16) as usize;
                let c = f.mul(f.mul(xv, yv), self.alpha(g as u16, h as u16));
                out[gh] = f.add(out[gh], c);
            }
        }
        out
    }

    /// Restrict to a subgroup: a fresh permutation group on the same points
    /// with the restricted cocycle, plus the element index map into the
    /// parent.
    pub fn restrict(&self, sub: &Subgroup) -> Result<(KStarGroup, Vec<u16>)> {
        if !self.group.is_subgroup(sub) {
            return Err(Error::Input("restriction target is not a subgroup".into()));
        }
        let small = self.group.small_generating_set(sub);
        let gens: Vec<_> = if small.is_empty() {
            vec![self.group.elements[0].clone()]
        } else {
            small.iter().map(|&i| self.group.elements[i as usize].clone()).collect()
        };
        let sg = Rc::new(PermGroup::close(
            &format!("{}|{}", self.group.name, sub.len()),
            self.group.degree,
            &gens,
            self.group.order(),
        )?);
        let map: Vec<u16> = (0..sg.order())
            .map(|i| {
                self.group
                    .index_of(&sg.elements[i])
                    .expect("subgroup elements lie in parent")
            })
            .collect();
        let n = sg.order();
        let mut table = vec![1; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = self.alpha(map[i], map[j]);
            }
        }
        let mut m = 1;
        for &v in &table {
            m = num::integer::lcm(m, self.field.mult_order(v));
        }
        Ok((
            KStarGroup { group: sg, field: Rc::clone(&self.field), m, table },
            map,
        ))
    }

    /// The unique splitting of the restriction to a p-subgroup, where
    /// p = field characteristic. Uniqueness: homomorphisms from a p-group to
    /// the p'-torsion mu are trivial.
    pub fn canonical_p_splitting(&self, sub: &Subgroup) -> Result<Vec<Fel>> {
        let p = self.field.p;
        let mut sz = sub.len() as u64;
        while sz % p == 0 {
            sz /= p;
        }
        if sz != 1 {
            return Err(Error::Input("not a p-subgroup".into()));
        }
        let (rk, map) = self.restrict(sub)?;
        let mu = rk
            .find_splitting()
            .ok_or_else(|| Error::Internal("restriction to p-subgroup must split".into()))?;
        // report in parent indexing order of `sub`
        let mut out = vec![1; sub.len()];
        for (i, &parent) in map.iter().enumerate() {
            let pos = sub.binary_search(&parent).expect("map lands in sub");
            out[pos] = mu[i];
        }
        Ok(out)
    }

    /// Quotient by a normal p-subgroup using its canonical splitting.
    /// Returns the quotient k*-group together with the data of the algebra
    /// surjection: for each parent element g a scalar s(g) and image, so
    /// that e_g maps to s(g) e_(gbar).
    pub fn quotient_by_normal_p_subgroup(&self, sub: &Subgroup) -> Result<QuotientKStar> {
        if !self.group.is_normal(sub) {
            return Err(Error::Input("quotient subgroup is not normal".into()));
        }
        let sigma = self.canonical_p_splitting(sub)?;
        let (qgroup, proj) = self.group.quotient(sub)?;
        let qgroup = Rc::new(qgroup);
        let f = &*self.field;
        let n = self.group.order();
        let qn = qgroup.order();
        // coset representatives: minimal element index per quotient element
        let mut rep = vec![u16::MAX; qn];
        for g in 0..n as u16 {
            let q = proj[g as usize] as usize;
            if rep[q] == u16::MAX {
                rep[q] = g;
            }
        }
        // scalar s(g): g = t * r with t = rep, r = t^-1 g in sub;
        // e_g = alpha(t, r)^-1 e_t e_r and e_r maps to sigma(r).
        let mut scalar = vec![1 as Fel; n];
        for g in 0..n as u16 {
            let t = rep[proj[g as usize] as usize];
            let r = self.group.mul(self.group.inv(t), g);
            let rpos = sub
                .binary_search(&r)
                .map_err(|_| Error::Internal("coset decomposition left the subgroup".into()))?;
            scalar[g as usize] = f.div(sigma[rpos], self.alpha(t, r));
        }
        // quotient cocycle from representatives
        let mut table = vec![1 as Fel; qn * qn];
        for i in 0..qn {
            for j in 0..qn {
                let ti = rep[i];
                let tj = rep[j];
                let prod = self.group.mul(ti, tj);
                // e_ti e_tj = alpha(ti,tj) e_prod -> alpha * s(prod) e_(ij bar)
                table[i * qn + j] = f.mul(self.alpha(ti, tj), scalar[prod as usize]);
            }
        }
        let mut m = 1;
        for &v in &table {
            m = num::integer::lcm(m, f.mult_order(v));
        }
        let q = KStarGroup { group: qgroup, field: Rc::clone(&self.field), m, table };
        q.verify()?;
        // verify multiplicativity of the surjection on all pairs
        for g in 0..n as u16 {
            for h in 0..n as u16 {
                let gh = self.group.mul(g, h);
                let lhs = f.mul(self.alpha(g, h), scalar[gh as usize]);
                let rhs = f.mul(
                    f.mul(scalar[g as usize], scalar[h as usize]),
                    q.alpha(proj[g as usize], proj[h as usize]),
                );
                if lhs != rhs {
                    return Err(Error::Internal("quotient surjection not multiplicative".into()));
                }
            }
        }
        Ok(QuotientKStar { quotient: q, proj, scalar })
    }

    /// Replace the cocycle by a cohomologous one with values in mu_target
    /// when possible (solving for the adjusting coboundary in exponent
    /// space); returns None if no representative with such values exists
    /// over this field.
    pub fn reduce_values_to(&self, target: u64) -> Option<KStarGroup> {
        let f = &*self.field;
        let nn = f.q - 1;
        if nn % target != 0 {
            return None;
        }
        let quot = nn / target;
        if quot == 1 {
            return Some(self.clone());
        }
        let n = self.group.order();
        // want exponents of alpha * d(nu) to be divisible by quot:
        // dlog(alpha) + d(x) = 0 mod quot
        let mut rows = Vec::with_capacity(n * n);
        for g in 0..n as u16 {
            for h in 0..n as u16 {
                let gh = self.group.mul(g, h);
                let a = f.dlog(self.alpha(g, h)).unwrap() as i64;
                rows.push((
                    vec![(g as usize, 1i64), (h as usize, 1), (gh as usize, -1)],
                    -a,
                ));
            }
        }
        let sol = solve_linear_mod(&rows, n, quot)?;
        let nu: Vec<Fel> = sol.iter().map(|&e| f.gen_pow(e)).collect();
        let d = KStarGroup::coboundary(&self.group, f, &nu);
        let table: Vec<Fel> = self.table.iter().zip(&d).map(|(&a, &b)| f.mul(a, b)).collect();
        let mut m = 1;
        for &v in &table {
            m = num::integer::lcm(m, f.mult_order(v));
        }
        debug_assert!(target % m == 0 || m == 1);
        Some(KStarGroup {
            group: Rc::clone(&self.group),
            field: Rc::clone(&self.field),
            m,
            table,
        })
    }

    /// Seeded pseudo-random coboundary cocycle (nontrivial table, trivial
    /// class) with values in mu_m.
    pub fn random_coboundary(
        group: Rc<PermGroup>,
        field: Rc<FiniteField>,
        m: u64,
        seed: u64,
    ) -> Result<KStarGroup> {
        let zeta = field.root_of_unity(m)?;
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).max(1);
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let n = group.order();
        let mut mu = vec![1 as Fel; n];
        for g in 1..n {
            mu[g] = field.pow_el(zeta, (next() % m) as i64);
        }
        let table = KStarGroup::coboundary(&group, &field, &mu);
        KStarGroup::from_table(group, field, table)
    }

    /// Debug dump: exponents of the fixed mu_m generator, so the table is
    /// independent of the field representation.
    pub fn dump(&self) -> CocycleDump {
        let f = &*self.field;
        let n = self.group.order();
        let step = if self.m == 0 { 1 } else { (f.q - 1) / self.m.max(1) };
        let mut table = Vec::with_capacity(n);
        for g in 0..n {
            let mut row = Vec::with_capacity(n);
            for h in 0..n {
                let v = self.table[g * n + h];
                let d = f.dlog(v).unwrap();
                debug_assert_eq!(d % step, 0);
                row.push(d / step);
            }
            table.push(row);
        }
        CocycleDump { group: self.group.name.clone(), m: self.m, table }
    }

    /// Re-express over an extension field containing this one.
    pub fn embed(&self, big: Rc<FiniteField>) -> Result<KStarGroup> {
        let emb = crate::field::FieldEmbedding::new(&self.field, &big)?;
        let table: Vec<Fel> = self.table.iter().map(|&v| emb.map(v)).collect();
        Ok(KStarGroup {
            group: Rc::clone(&self.group),
            field: big,
            m: self.m,
            table,
        })
    }
}

/// Result of a quotient by a normal p-subgroup.
pub struct QuotientKStar {
    pub quotient: KStarGroup,
    /// element-to-element projection map
    pub proj: Vec<u16>,
    /// e_g maps to scalar[g] * e_(proj g) under the algebra surjection
    pub scalar: Vec<Fel>,
}

#[derive(Serialize)]
pub struct CocycleDump {
    pub group: String,
    pub m: u64,
    pub table: Vec<Vec<u64>>,
}

/// All homomorphisms G -> mu inside the field, by constrained assignment on
/// generators followed by consistency closure.
pub fn enumerate_homs(group: &PermGroup, field: &FiniteField) -> Vec<Vec<Fel>> {
    let gens = &group.generators;
    if gens.is_empty() {
        return vec![vec![1; group.order()]];
    }
    // candidate values per generator: x with x^ord = 1
    let mut cands: Vec<Vec<Fel>> = Vec::new();
    for &g in gens {
        let o = group.element_order(g as u16) as u64;
        let d = num::integer::gcd(o, field.q - 1);
        let mut list = Vec::new();
        for k in 0..d {
            list.push(field.gen_pow(k * (field.q - 1) / d));
        }
        list.sort_unstable();
        cands.push(list);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    'outer: loop {
        // attempt extension: BFS over the Cayley structure
        let mut val: Vec<Option<Fel>> = vec![None; group.order()];
        val[0] = Some(1);
        let mut frontier = vec![0u16];
        let mut ok = true;
        while let Some(x) = frontier.pop() {
            let vx = val[x as usize].unwrap();
            for (gi, &g) in gens.iter().enumerate() {
                let y = group.mul(g as u16, x);
                let vy = field.mul(cands[gi][choice[gi]], vx);
                match val[y as usize] {
                    None => {
                        val[y as usize] = Some(vy);
                        frontier.push(y);
                    }
                    Some(existing) => {
                        if existing != vy {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if !ok {
                break;
            }
        }
        if ok {
            let v: Vec<Fel> = val.into_iter().map(|x| x.unwrap()).collect();
            // full homomorphism check
            let mut good = true;
            'chk: for a in 0..group.order() as u16 {
                for b in 0..group.order() as u16 {
                    if field.mul(v[a as usize], v[b as usize])
                        != v[group.mul(a, b) as usize]
                    {
                        good = false;
                        break 'chk;
                    }
                }
            }
            if good {
                out.push(v);
            }
        }
        // next choice vector
        for i in 0..gens.len() {
            choice[i] += 1;
            if choice[i] < cands[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        break;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The central product of mu with an extraspecial-type group on the
/// symplectic space (Z/l)^(2n): the elementary abelian group with the
/// half-symplectic-form cocycle.
pub fn extraspecial_kstar(l: u64, n: usize, field: Rc<FiniteField>) -> Result<KStarGroup> {
    if l == 2 || l == field.p {
        return Err(Error::Input(format!(
            "extraspecial parameter l={l} must be an odd prime different from p={}",
            field.p
        )));
    }
    let zeta = field.root_of_unity(l)?;
    let dim = 2 * n;
    let size = (l as usize).pow(dim as u32);
    if size > 2500 {
        return Err(Error::SizeLimit("extraspecial base group too large".into()));
    }
    // regular permutation action of (Z/l)^(2n): translations by unit vectors
    let decode = |mut idx: usize| -> Vec<u64> {
        let mut v = Vec::with_capacity(dim);
        for _ in 0..dim {
            v.push((idx % l as usize) as u64);
            idx /= l as usize;
        }
        v
    };
    let encode = |v: &[u64]| -> usize {
        let mut idx = 0usize;
        for &c in v.iter().rev() {
            idx = idx * l as usize + (c % l) as usize;
        }
        idx
    };
    let mut gens = Vec::new();
    for k in 0..dim {
        let mut perm = vec![0u16; size];
        for pt in 0..size {
            let mut v = decode(pt);
            v[k] = (v[k] + 1) % l;
            perm[pt] = encode(&v) as u16;
        }
        gens.push(perm);
    }
    let group = Rc::new(PermGroup::close(
        &format!("E({l}^{dim})"),
        size,
        &gens,
        size + 1,
    )?);
    assert_eq!(group.order(), size);
    // vector of an element: image of the origin under the translation
    let vec_of = |i: u16| -> Vec<u64> { decode(group.elements[i as usize][0] as usize) };
    let inv2 = {
        // inverse of 2 mod l
        let mut x = 1u64;
        while (2 * x) % l != 1 {
            x += 1;
        }
        x
    };
    let symp = |x: &[u64], y: &[u64]| -> u64 {
        let mut acc = 0u64;
        for k in 0..n {
            acc = (acc + x[k] * y[n + k]) % l;
            acc = (acc + l * l - x[n + k] * y[k] % l) % l;
        }
        acc
    };
    let sz = group.order();
    let mut table = vec![1 as Fel; sz * sz];
    for i in 0..sz as u16 {
        let vi = vec_of(i);
        for j in 0..sz as u16 {
            let vj = vec_of(j);
            let e = symp(&vi, &vj) * inv2 % l;
            table[i as usize * sz + j as usize] = field.pow_el(zeta, e as i64);
        }
    }
    KStarGroup::from_table(group, field, table)
}

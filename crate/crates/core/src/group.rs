//! Finite permutation groups at desk scale: full element lists, conjugacy,
//! subgroups up to conjugacy, p-local operators, quotients, p-solvability.
//!
//! Everything is computed by exhaustive scan over materialized element
//! lists. Groups are capped at a configurable order (default 2500), which
//! keeps every operation exactly testable.

use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

/// Permutation on 0..degree, stored as the image vector.
pub type Perm = Vec<u16>;

pub const DEFAULT_ORDER_BOUND: usize = 2500;

fn perm_mul(a: &Perm, b: &Perm) -> Perm {
    // (a*b)(x) = a(b(x))
    b.iter().map(|&x| a[x as usize]).collect()
}

fn perm_inv(a: &Perm) -> Perm {
    let mut r = vec![0u16; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x as usize] = i as u16;
    }
    r
}

fn perm_identity(degree: usize) -> Perm {
    (0..degree as u16).collect()
}

/// A fully materialized finite permutation group.
pub struct PermGroup {
    pub degree: usize,
    pub name: String,
    /// All elements, sorted lexicographically on image tuples. The identity
    /// is always index 0.
    pub elements: Vec<Perm>,
    /// Indices of the generators inside `elements`.
    pub generators: Vec<usize>,
    index: HashMap<Perm, u16>,
    mult: Vec<u16>,
    inv: Vec<u16>,
    order_of: Vec<u32>,
    classes: OnceLock<Vec<ConjClass>>,
    normal_subgroups: OnceLock<Vec<Subgroup>>,
    p_subgroup_cache: OnceLock<HashMap<u64, PSubgroupData>>,
}

/// Subgroup of a PermGroup: sorted element indices into the parent.
pub type Subgroup = Vec<u16>;

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub representative: u16,
    pub members: Vec<u16>,
    pub order: u32,
}

impl ConjClass {
    pub fn is_regular(&self, p: u64) -> bool {
        self.order as u64 % p != 0
    }
}

#[derive(Clone)]
struct PSubgroupData {
    /// every p-subgroup, as sorted index vectors, sorted by (size, lex)
    all: Vec<Subgroup>,
    /// one representative per conjugacy class (minimal sorted member list)
    class_reps: Vec<Subgroup>,
    /// class index of each entry of `all`
    class_of: Vec<usize>,
}

impl PermGroup {
    /// Close a generating set under products; errors if the closure exceeds
    /// the bound. Element order is canonical (lexicographic).
    pub fn close(name: &str, degree: usize, gens: &[Perm], bound: usize) -> Result<PermGroup> {
        for g in gens {
            if g.len() != degree {
                return Err(Error::Input(format!(
                    "generator degree {} does not match {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if (x as usize) >= degree || seen[x as usize] {
                    return Err(Error::Input("not a permutation".into()));
                }
                seen[x as usize] = true;
            }
        }
        let id = perm_identity(degree);
        let mut set: BTreeSet<Perm> = BTreeSet::new();
        set.insert(id.clone());
        let mut frontier = vec![id.clone()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = perm_mul(g, &x);
                if !set.contains(&y) {
                    if set.len() >= bound {
                        return Err(Error::SizeLimit(format!(
                            "group closure for {name} exceeds bound {bound}"
                        )));
                    }
                    set.insert(y.clone());
                    frontier.push(y);
                }
            }
        }
        let elements: Vec<Perm> = set.into_iter().collect();
        let index: HashMap<Perm, u16> =
            elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u16)).collect();
        let n = elements.len();
        let mut mult = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = perm_mul(&elements[i], &elements[j]);
                mult[i * n + j] = index[&prod];
            }
        }
        let mut inv = vec![0u16; n];
        for i in 0..n {
            inv[i] = index[&perm_inv(&elements[i])];
        }
        let mut order_of = vec![0u32; n];
        for i in 0..n {
            let mut k = 1u32;
            let mut cur = i as u16;
            while cur != 0 {
                cur = mult[cur as usize * n + i];
                k += 1;
            }
            if i == 0 {
                k = 1;
            }
            order_of[i] = k;
        }
        let generators = gens.iter().map(|g| index[g] as usize).collect();
        Ok(PermGroup {
            degree,
            name: name.to_string(),
            elements,
            generators,
            index,
            mult,
            inv,
            order_of,
            classes: OnceLock::new(),
            normal_subgroups: OnceLock::new(),
            p_subgroup_cache: OnceLock::new(),
        })
    }

    pub fn trivial() -> PermGroup {
        PermGroup::close("1", 1, &[], DEFAULT_ORDER_BOUND).unwrap()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mult[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn conj(&self, x: u16, g: u16) -> u16 {
        // g x g^-1
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: u16) -> u32 {
        self.order_of[a as usize]
    }

    pub fn identity(&self) -> u16 {
        0
    }

    pub fn index_of(&self, p: &Perm) -> Option<u16> {
        self.index.get(p).copied()
    }

    pub fn exponent(&self) -> u64 {
        let mut e = 1u64;
        for i in 0..self.order() {
            e = num::integer::lcm(e, self.order_of[i] as u64);
        }
        e
    }

    /// p'-part of the exponent.
    pub fn exponent_p_prime(&self, p: u64) -> u64 {
        let mut e = self.exponent();
        while e % p == 0 {
            e /= p;
        }
        e
    }

    /// Conjugacy classes sorted by (element order, minimal member index).
    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        self.classes.get_or_init(|| {
            let n = self.order();
            let mut seen = vec![false; n];
            let mut classes = Vec::new();
            for i in 0..n {
                if seen[i] {
                    continue;
                }
                let mut members = BTreeSet::new();
                for g in 0..n {
                    members.insert(self.conj(i as u16, g as u16));
                }
                let members: Vec<u16> = members.into_iter().collect();
                for &m in &members {
                    seen[m as usize] = true;
                }
                classes.push(ConjClass {
                    representative: members[0],
                    members: members.clone(),
                    order: self.order_of[i],
                });
            }
            classes.sort_by_key(|c| (c.order, c.members[0]));
            classes
        })
    }

    pub fn class_of(&self, x: u16) -> usize {
        self.conjugacy_classes()
            .iter()
            .position(|c| c.members.binary_search(&x).is_ok())
            .expect("every element lies in a class")
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup_closure(&self, gens: &[u16]) -> Subgroup {
        let mut set = BTreeSet::new();
        set.insert(0u16);
        let mut frontier = vec![0u16];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn full_subgroup(&self) -> Subgroup {
        (0..self.order() as u16).collect()
    }

    pub fn is_subgroup(&self, h: &Subgroup) -> bool {
        if h.binary_search(&0).is_err() {
            return false;
        }
        for &a in h {
            if h.binary_search(&self.inv(a)).is_err() {
                return false;
            }
            for &b in h {
                if h.binary_search(&self.mul(a, b)).is_err() {
                    return false;
                }
            }
        }
        true
    }

    pub fn centralizer_of_set(&self, s: &[u16]) -> Subgroup {
        (0..self.order() as u16)
            .filter(|&g| s.iter().all(|&x| self.conj(x, g) == x))
            .collect()
    }

    pub fn centralizer_of_element(&self, x: u16) -> Subgroup {
        self.centralizer_of_set(&[x])
    }

    pub fn center_of_subgroup(&self, h: &Subgroup) -> Subgroup {
        h.iter()
            .copied()
            .filter(|&z| h.iter().all(|&x| self.mul(z, x) == self.mul(x, z)))
            .collect()
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        (0..self.order() as u16)
            .filter(|&g| {
                h.iter().all(|&x| h.binary_search(&self.conj(x, g)).is_ok())
            })
            .collect()
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: u16) -> Subgroup {
        let mut out: Vec<u16> = h.iter().map(|&x| self.conj(x, g)).collect();
        out.sort_unstable();
        out
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        (0..self.order() as u16).all(|g| &self.conjugate_subgroup(h, g) == h)
    }

    /// Intersection of two sorted subgroups.
    pub fn intersect(a: &Subgroup, b: &Subgroup) -> Subgroup {
        a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
    }

    /// Product set closure <A, B>.
    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let gens: Vec<u16> = a.iter().chain(b.iter()).copied().collect();
        self.subgroup_closure(&gens)
    }

    /// Product set A*B (not necessarily a subgroup).
    pub fn product_set(&self, a: &Subgroup, b: &Subgroup) -> Vec<u16> {
        let mut s = BTreeSet::new();
        for &x in a {
            for &y in b {
                s.insert(self.mul(x, y));
            }
        }
        s.into_iter().collect()
    }

    /// All normal subgroups, via unions of conjugacy classes closed under
    /// multiplication. Exponential in the class count, fine at desk scale.
    pub fn all_normal_subgroups(&self) -> &[Subgroup] {
        self.normal_subgroups.get_or_init(|| {
            let classes = self.conjugacy_classes();
            let k = classes.len();
            assert!(k <= 24, "class count too large for normal subgroup scan");
            let id_class = classes
                .iter()
                .position(|c| c.members == vec![0u16])
                .expect("identity class");
            let mut out = Vec::new();
            for mask in 0u32..(1 << k) {
                if mask & (1 << id_class) == 0 {
                    continue;
                }
                let mut members = Vec::new();
                for ci in 0..k {
                    if mask & (1 << ci) != 0 {
                        members.extend(classes[ci].members.iter().copied());
                    }
                }
                members.sort_unstable();
                if self.order() % members.len() == 0 && self.is_subgroup(&members) {
                    out.push(members);
                }
            }
            out.sort_by_key(|s| (s.len(), s.clone()));
            out
        })
    }

    /// Largest normal p-subgroup.
    pub fn p_core(&self, p: u64) -> Subgroup {
        let mut best = vec![0u16];
        for n in self.all_normal_subgroups() {
            if is_p_power(n.len() as u64, p) && n.len() > best.len() {
                best = n.clone();
            }
        }
        best
    }

    /// Largest normal subgroup of order coprime to p.
    pub fn p_prime_core(&self, p: u64) -> Subgroup {
        let mut best = vec![0u16];
        for n in self.all_normal_subgroups() {
            if n.len() as u64 % p != 0 && n.len() > best.len() {
                best = n.clone();
            }
        }
        best
    }

    /// Quotient by a normal subgroup: permutation action on left cosets,
    /// with the element-to-element projection map.
    pub fn quotient(&self, n: &Subgroup) -> Result<(PermGroup, Vec<u16>)> {
        if !self.is_subgroup(n) {
            return Err(Error::Input("not a subgroup".into()));
        }
        if !self.is_normal(n) {
            return Err(Error::Input("subgroup is not normal".into()));
        }
        // left cosets, represented by sorted member vectors; deterministic
        // order by minimal element
        let mut cosets: Vec<Vec<u16>> = Vec::new();
        let mut coset_of = vec![usize::MAX; self.order()];
        for g in 0..self.order() as u16 {
            if coset_of[g as usize] != usize::MAX {
                continue;
            }
            let mut c: Vec<u16> = n.iter().map(|&x| self.mul(g, x)).collect();
            c.sort_unstable();
            let ci = cosets.len();
            for &x in &c {
                coset_of[x as usize] = ci;
            }
            cosets.push(c);
        }
        let num = cosets.len();
        // generators act on cosets
        let mut qgens: Vec<Perm> = Vec::new();
        for &gi in &self.generators {
            let g = gi as u16;
            let mut perm = vec![0u16; num];
            for (ci, c) in cosets.iter().enumerate() {
                perm[ci] = coset_of[self.mul(g, c[0]) as usize] as u16;
            }
            qgens.push(perm);
        }
        let q = PermGroup::close(
            &format!("{}/{}", self.name, n.len()),
            num.max(1),
            &qgens,
            self.order(),
        )?;
        // projection: g -> its action on cosets
        let mut proj = vec![0u16; self.order()];
        for g in 0..self.order() as u16 {
            let mut perm = vec![0u16; num];
            for (ci, c) in cosets.iter().enumerate() {
                perm[ci] = coset_of[self.mul(g, c[0]) as usize] as u16;
            }
            proj[g as usize] = q.index_of(&perm).expect("projection lands in quotient");
        }
        Ok((q, proj))
    }

    fn build_p_subgroups(&self, p: u64) -> PSubgroupData {
        // all cyclic p-subgroups
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        found.insert(vec![0u16]);
        for x in 0..self.order() as u16 {
            if x != 0 && is_p_power(self.order_of[x as usize] as u64, p) {
                found.insert(self.subgroup_closure(&[x]));
            }
        }
        // close under joins that stay p-groups
        loop {
            let snapshot: Vec<Subgroup> = found.iter().cloned().collect();
            let mut added = false;
            for i in 0..snapshot.len() {
                for j in (i + 1)..snapshot.len() {
                    let join = self.join(&snapshot[i], &snapshot[j]);
                    if is_p_power(join.len() as u64, p) && !found.contains(&join) {
                        found.insert(join);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by_key(|s| (s.len(), s.clone()));
        // conjugacy classes
        let mut class_of = vec![usize::MAX; all.len()];
        let mut class_reps = Vec::new();
        for i in 0..all.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let ci = class_reps.len();
            let mut orbit = BTreeSet::new();
            for g in 0..self.order() as u16 {
                orbit.insert(self.conjugate_subgroup(&all[i], g));
            }
            let rep = orbit.iter().next().unwrap().clone();
            for s in orbit {
                if let Ok(pos) = all.binary_search_by_key(&(s.len(), s.clone()), |t| {
                    (t.len(), t.clone())
                }) {
                    class_of[pos] = ci;
                }
            }
            class_reps.push(rep);
        }
        PSubgroupData { all, class_reps, class_of }
    }

    /// Build p-subgroup data for every prime divisor of |G| on first use.
    /// Primes not dividing |G| are served by the trivial fallback.
    fn ensure_p_data(&self, p: u64) {
        self.p_subgroup_cache.get_or_init(|| {
            let primes: Vec<u64> = factor_primes(self.order() as u64);
            let mut map = HashMap::new();
            for q in primes {
                map.insert(q, self.build_p_subgroups(q));
            }
            map
        });
        if self.p_subgroup_cache.get().unwrap().get(&p).is_none() {
            assert!(
                self.order() as u64 % p != 0,
                "p-subgroup cache miss for dividing prime"
            );
        }
    }

    /// Every p-subgroup (sorted by size then lex).
    pub fn all_p_subgroups(&self, p: u64) -> Vec<Subgroup> {
        self.ensure_p_data(p);
        match self.p_subgroup_cache.get().unwrap().get(&p) {
            Some(d) => d.all.clone(),
            None => vec![vec![0u16]],
        }
    }

    /// One representative per conjugacy class of p-subgroups, including the
    /// trivial subgroup; deterministic representatives.
    pub fn p_subgroups_up_to_conjugacy(&self, p: u64) -> Vec<Subgroup> {
        self.ensure_p_data(p);
        match self.p_subgroup_cache.get().unwrap().get(&p) {
            Some(d) => d.class_reps.clone(),
            None => vec![vec![0u16]],
        }
    }

    /// Index of the conjugacy class of a given p-subgroup in the
    /// `p_subgroups_up_to_conjugacy` list.
    pub fn p_subgroup_class_of(&self, p: u64, h: &Subgroup) -> usize {
        self.ensure_p_data(p);
        match self.p_subgroup_cache.get().unwrap().get(&p) {
            Some(d) => {
                let pos = d
                    .all
                    .binary_search_by_key(&(h.len(), h.clone()), |t| (t.len(), t.clone()))
                    .unwrap_or_else(|_| panic!("subgroup not in p-subgroup list"));
                d.class_of[pos]
            }
            None => {
                assert_eq!(h.len(), 1);
                0
            }
        }
    }

    pub fn sylow(&self, p: u64) -> Subgroup {
        self.all_p_subgroups(p)
            .into_iter()
            .max_by_key(|s| (s.len(), std::cmp::Reverse(s.clone())))
            .unwrap()
    }

    /// p-solvability by iterated O_p' / O_p reduction.
    pub fn is_p_solvable(&self, p: u64) -> bool {
        if self.order() == 1 {
            return true;
        }
        let opp = self.p_prime_core(p);
        if opp.len() > 1 {
            let (q, _) = self.quotient(&opp).expect("core is normal");
            return q.is_p_solvable(p);
        }
        let op = self.p_core(p);
        if op.len() > 1 {
            let (q, _) = self.quotient(&op).expect("core is normal");
            return q.is_p_solvable(p);
        }
        false
    }

    /// Greedy small generating set of a subgroup: scan elements in order,
    /// keep those that enlarge the closure.
    pub fn small_generating_set(&self, h: &Subgroup) -> Vec<u16> {
        let mut gens: Vec<u16> = Vec::new();
        let mut closure = vec![0u16];
        for &x in h {
            if closure.binary_search(&x).is_err() {
                gens.push(x);
                closure = self.subgroup_closure(&gens);
                if closure.len() == h.len() {
                    break;
                }
            }
        }
        gens
    }

    /// Left coset representatives of h in the subgroup `ambient` (which must
    /// contain h); deterministic minimal representative per coset.
    pub fn coset_reps(&self, ambient: &Subgroup, h: &Subgroup) -> Vec<u16> {
        let mut seen: BTreeSet<u16> = BTreeSet::new();
        let mut reps = Vec::new();
        for &g in ambient {
            if seen.contains(&g) {
                continue;
            }
            reps.push(g);
            for &x in h {
                seen.insert(self.mul(g, x));
            }
        }
        reps
    }
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

pub fn factor_primes(n: u64) -> Vec<u64> {
    crate::field::factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Parse disjoint-cycle notation like "(1 2 3)(4 5)" into a permutation on
/// 0..degree (input points are 1-based).
pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm> {
    let mut perm = perm_identity(degree);
    let s = s.trim();
    if s.is_empty() || s == "()" {
        return Ok(perm);
    }
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c != '(' {
            return Err(Error::Input(format!("expected '(' in cycle string: {s}")));
        }
        chars.next();
        let mut cycle: Vec<usize> = Vec::new();
        let mut num = String::new();
        loop {
            match chars.next() {
                Some(d) if d.is_ascii_digit() => num.push(d),
                Some(d) if d.is_whitespace() || d == ',' => {
                    if !num.is_empty() {
                        cycle.push(num.parse::<usize>().unwrap());
                        num.clear();
                    }
                }
                Some(')') => {
                    if !num.is_empty() {
                        cycle.push(num.parse::<usize>().unwrap());
                        num.clear();
                    }
                    break;
                }
                Some(d) => {
                    return Err(Error::Input(format!("unexpected '{d}' in cycles")));
                }
                None => return Err(Error::Input("unterminated cycle".into())),
            }
        }
        for &pt in &cycle {
            if pt == 0 || pt > degree {
                return Err(Error::Input(format!("point {pt} out of range 1..{degree}")));
            }
        }
        for w in 0..cycle.len() {
            let from = cycle[w] - 1;
            let to = cycle[(w + 1) % cycle.len()] - 1;
            perm[from] = to as u16;
        }
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> PermGroup {
        let g1 = parse_cycles("(1 2 3)", 3).unwrap();
        let g2 = parse_cycles("(1 2)", 3).unwrap();
        PermGroup::close("S3", 3, &[g1, g2], DEFAULT_ORDER_BOUND).unwrap()
    }

    fn f21() -> PermGroup {
        let a = parse_cycles("(1 2 3 4 5 6 7)", 7).unwrap();
        let b = parse_cycles("(2 3 5)(4 7 6)", 7).unwrap();
        PermGroup::close("F21", 7, &[a, b], DEFAULT_ORDER_BOUND).unwrap()
    }

    #[test]
    fn close_examples() {
        let c3 = PermGroup::close(
            "C3",
            3,
            &[parse_cycles("(1 2 3)", 3).unwrap()],
            DEFAULT_ORDER_BOUND,
        )
        .unwrap();
        assert_eq!(c3.order(), 3);
        assert_eq!(s3().order(), 6);
        let v4 = PermGroup::close(
            "V4",
            4,
            &[
                parse_cycles("(1 2)(3 4)", 4).unwrap(),
                parse_cycles("(1 3)(2 4)", 4).unwrap(),
            ],
            DEFAULT_ORDER_BOUND,
        )
        .unwrap();
        assert_eq!(v4.order(), 4);
        // bound respected
        assert!(PermGroup::close("S3", 3, &[parse_cycles("(1 2 3)", 3).unwrap()], 2).is_err());
    }

    #[test]
    fn classes_examples() {
        let c3 = PermGroup::close(
            "C3",
            3,
            &[parse_cycles("(1 2 3)", 3).unwrap()],
            DEFAULT_ORDER_BOUND,
        )
        .unwrap();
        assert_eq!(c3.conjugacy_classes().len(), 3);
        let g = s3();
        let cls = g.conjugacy_classes();
        assert_eq!(cls.len(), 3);
        let mut sizes: Vec<usize> = cls.iter().map(|c| c.members.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(f21().conjugacy_classes().len(), 5);
        // class sizes divide |G| and sum to |G|
        for g in [s3(), f21()] {
            let total: usize = g.conjugacy_classes().iter().map(|c| c.members.len()).sum();
            assert_eq!(total, g.order());
            for c in g.conjugacy_classes() {
                assert_eq!(g.order() % c.members.len(), 0);
            }
        }
    }

    #[test]
    fn centralizer_normalizer_examples() {
        let g = s3();
        let rot = (0..6u16).find(|&i| g.element_order(i) == 3).unwrap();
        let a3 = g.subgroup_closure(&[rot]);
        assert_eq!(g.centralizer_of_set(&a3), a3);
        assert_eq!(g.normalizer(&g.full_subgroup()), g.full_subgroup());
        let h = f21();
        let t = (0..21u16).find(|&i| h.element_order(i) == 3).unwrap();
        let syl3 = h.subgroup_closure(&[t]);
        assert_eq!(h.normalizer(&syl3).len(), 3);
    }

    #[test]
    fn core_examples() {
        let g = s3();
        assert_eq!(g.p_core(3).len(), 3);
        assert_eq!(g.p_core(2).len(), 1);
        let c4 = PermGroup::close(
            "C4",
            4,
            &[parse_cycles("(1 2 3 4)", 4).unwrap()],
            DEFAULT_ORDER_BOUND,
        )
        .unwrap();
        assert_eq!(c4.p_core(2).len(), 4);
    }

    #[test]
    fn solvability_examples() {
        assert!(s3().is_p_solvable(3));
        assert!(s3().is_p_solvable(2));
        let c4 = PermGroup::close(
            "C4",
            4,
            &[parse_cycles("(1 2 3 4)", 4).unwrap()],
            DEFAULT_ORDER_BOUND,
        )
        .unwrap();
        assert!(c4.is_p_solvable(2));
        let a5 = PermGroup::close(
            "A5",
            5,
            &[
                parse_cycles("(1 2 3 4 5)", 5).unwrap(),
                parse_cycles("(1 2 3)", 5).unwrap(),
            ],
            DEFAULT_ORDER_BOUND,
        )
        .unwrap();
        assert_eq!(a5.order(), 60);
        assert!(!a5.is_p_solvable(5));
        assert!(!a5.is_p_solvable(2));
    }

    #[test]
    fn quotient_examples() {
        let g = s3();
        let a3 = g.p_core(3);
        let (q, proj) = g.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        // projection is a homomorphism
        for a in 0..6u16 {
            for b in 0..6u16 {
                assert_eq!(
                    q.mul(proj[a as usize], proj[b as usize]),
                    proj[g.mul(a, b) as usize]
                );
            }
        }
        let (q2, _) = g.quotient(&vec![0u16]).unwrap();
        assert_eq!(q2.order(), 6);
        let h = f21();
        let c7 = h.p_core(7);
        assert_eq!(c7.len(), 7);
        let (q3, _) = h.quotient(&c7).unwrap();
        assert_eq!(q3.order(), 3);
        // non-normal subgroup is rejected
        let t = (0..6u16).find(|&i| g.element_order(i) == 2).unwrap();
        assert!(g.quotient(&g.subgroup_closure(&[t])).is_err());
    }

    #[test]
    fn p_subgroups_examples() {
        let g = s3();
        let reps3 = g.p_subgroups_up_to_conjugacy(3);
        assert_eq!(reps3.len(), 2);
        let reps2 = g.p_subgroups_up_to_conjugacy(2);
        assert_eq!(reps2.len(), 2);
        let c5 = PermGroup::close(
            "C5",
            5,
            &[parse_cycles("(1 2 3 4 5)", 5).unwrap()],
            DEFAULT_ORDER_BOUND,
        )
        .unwrap();
        assert_eq!(c5.p_subgroups_up_to_conjugacy(5).len(), 2);
        // no two reps conjugate; every p-subgroup conjugate to exactly one rep
        for p in [2u64, 3] {
            let reps = g.p_subgroups_up_to_conjugacy(p);
            let all = g.all_p_subgroups(p);
            for s in &all {
                let matches = reps
                    .iter()
                    .filter(|r| {
                        (0..g.order() as u16).any(|x| &g.conjugate_subgroup(s, x) == *r)
                    })
                    .count();
                assert_eq!(matches, 1);
            }
        }
    }

    #[test]
    fn sylow_and_op_containment() {
        let g = f21();
        let syl = g.sylow(3);
        assert_eq!(syl.len(), 3);
        let op = g.p_core(3);
        assert!(op.iter().all(|x| syl.binary_search(x).is_ok() || op.len() == 1));
        assert_eq!(g.p_core(7).len(), 7);
    }

    #[test]
    fn parse_cycle_forms() {
        assert_eq!(parse_cycles("(1 2 3)", 3).unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_cycles("(1 2)(3 4)", 4).unwrap(), vec![1, 0, 3, 2]);
        assert_eq!(parse_cycles("()", 2).unwrap(), vec![0, 1]);
        assert!(parse_cycles("(1 5)", 3).is_err());
    }
}

//! Matrix-level module machinery: spinning, submodule search, the Norton
//! irreducibility test, sub/quotient actions, and hom spaces.
//!
//! A module is a list of operator matrices acting on column vectors; a
//! subspace is invariant when it is stable under every operator. The word
//! generator is seeded, and reported results do not depend on the seed.

use crate::error::{Error, Result};
use crate::field::{char_poly, nullspace, roots_in_field, Fel, FiniteField, Matrix};

/// Deterministic xorshift stream for word generation.
pub struct WordRng {
    state: u64,
}

impl WordRng {
    pub fn new(seed: u64) -> WordRng {
        WordRng { state: seed.wrapping_mul(0x9E3779B97F4A7C15) | 1 }
    }

    pub fn next(&mut self) -> u64 {
        self.state ^= self.state << 13;
        self.state ^= self.state >> 7;
        self.state ^= self.state << 17;
        self.state
    }
}

/// Row-reduced basis under construction, supporting reduction and insertion.
pub struct SpinBasis {
    pub dim: usize,
    pub rows: Vec<Vec<Fel>>,
    pub pivots: Vec<usize>,
}

impl SpinBasis {
    pub fn new(dim: usize) -> SpinBasis {
        SpinBasis { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Reduce v against the basis in place; returns the pivot position if v
    /// remains nonzero.
    pub fn reduce(&self, f: &FiniteField, v: &mut [Fel]) -> Option<usize> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for j in 0..self.dim {
                    v[j] = f.sub(v[j], f.mul(c, row[j]));
                }
            }
        }
        v.iter().position(|&x| x != 0)
    }

    /// Insert v if independent; returns true when the basis grew.
    pub fn insert(&mut self, f: &FiniteField, v: &[Fel]) -> bool {
        let mut w = v.to_vec();
        match self.reduce(f, &mut w) {
            None => false,
            Some(p) => {
                let inv = f.inv(w[p]);
                for x in w.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                // keep fully reduced: eliminate p from existing rows
                for row in self.rows.iter_mut() {
                    let c = row[p];
                    if c != 0 {
                        for j in 0..self.dim {
                            row[j] = f.sub(row[j], f.mul(c, w[j]));
                        }
                    }
                }
                self.rows.push(w);
                self.pivots.push(p);
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn to_matrix(&self) -> Matrix {
        // sort rows by pivot for a canonical result
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        Matrix::from_rows(order.into_iter().map(|i| self.rows[i].clone()).collect())
    }

    /// Coordinates of a vector already inside the span.
    pub fn coords(&self, f: &FiniteField, v: &[Fel]) -> Option<Vec<Fel>> {
        let mut w = v.to_vec();
        let mut coords = vec![0; self.rows.len()];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let c = w[p];
            if c != 0 {
                coords[i] = c;
                for j in 0..self.dim {
                    w[j] = f.sub(w[j], f.mul(c, row[j]));
                }
            }
        }
        if w.iter().all(|&x| x == 0) {
            Some(coords)
        } else {
            None
        }
    }
}

/// Smallest invariant subspace containing the given vectors; rows of the
/// result form a reduced basis.
pub fn spin(f: &FiniteField, ops: &[Matrix], seeds: &[Vec<Fel>]) -> SpinBasis {
    let dim = if ops.is_empty() { seeds.first().map_or(0, |v| v.len()) } else { ops[0].cols };
    let mut basis = SpinBasis::new(dim);
    let mut frontier: Vec<Vec<Fel>> = Vec::new();
    for s in seeds {
        if basis.insert(f, s) {
            frontier.push(basis.rows.last().unwrap().clone());
        }
    }
    while let Some(v) = frontier.pop() {
        for op in ops {
            let w = op.apply(f, &v);
            if basis.insert(f, &w) {
                frontier.push(basis.rows.last().unwrap().clone());
            }
        }
    }
    basis
}

/// Action matrices on an invariant subspace given by a reduced basis.
pub fn sub_action(f: &FiniteField, ops: &[Matrix], basis: &SpinBasis) -> Vec<Matrix> {
    let k = basis.len();
    ops.iter()
        .map(|op| {
            let mut m = Matrix::zero(k, k);
            for (j, row) in basis.rows.iter().enumerate() {
                let w = op.apply(f, row);
                let coords = basis
                    .coords(f, &w)
                    .expect("image of invariant subspace stays inside");
                for i in 0..k {
                    m.set(i, j, coords[i]);
                }
            }
            m
        })
        .collect()
}

/// Action matrices on the quotient by an invariant subspace, in the
/// coordinates of the non-pivot positions.
pub fn quotient_action(
    f: &FiniteField,
    ops: &[Matrix],
    basis: &SpinBasis,
) -> (Vec<Matrix>, Vec<usize>) {
    let dim = basis.dim;
    let free: Vec<usize> = (0..dim).filter(|i| !basis.pivots.contains(i)).collect();
    let k = free.len();
    let mats = ops
        .iter()
        .map(|op| {
            let mut m = Matrix::zero(k, k);
            for (j, &fc) in free.iter().enumerate() {
                let mut e = vec![0; dim];
                e[fc] = 1;
                let mut w = op.apply(f, &e);
                basis.reduce(f, &mut w);
                for (i, &fr) in free.iter().enumerate() {
                    m.set(i, j, w[fr]);
                }
            }
            m
        })
        .collect();
    (mats, free)
}

/// Outcome of the irreducibility test.
pub enum Chop {
    Simple,
    /// A proper nonzero invariant subspace, as a reduced basis.
    Submodule(SpinBasis),
}

const MAX_WORDS: usize = 400;
const MAX_NULL_LINES: usize = 4096;

/// Enumerate representatives of the lines of the row space of `ns`.
fn null_lines(f: &FiniteField, ns: &Matrix) -> Option<Vec<Vec<Fel>>> {
    let k = ns.rows;
    if k == 0 {
        return Some(Vec::new());
    }
    let q = f.q;
    // count = (q^k - 1)/(q - 1) = 1 + q + ... + q^(k-1); bail out early
    let mut count: u64 = 0;
    let mut pw: u64 = 1;
    for _ in 0..k {
        count += pw;
        if count > MAX_NULL_LINES as u64 {
            return None;
        }
        pw = match pw.checked_mul(q) {
            Some(x) => x,
            None => return None,
        };
    }
    let count = count as usize;
    // canonical line reps: first nonzero coordinate of the combination = 1
    let mut out = Vec::with_capacity(count);
    let mut combo = vec![0u64; k];
    loop {
        // advance mixed-radix
        let mut i = 0;
        loop {
            if i == k {
                return Some(out);
            }
            combo[i] += 1;
            if combo[i] < q {
                break;
            }
            combo[i] = 0;
            i += 1;
        }
        if combo.iter().rev().find(|&&c| c != 0) != Some(&1) {
            continue; // not a canonical representative
        }
        let mut v = vec![0; ns.cols];
        for (ci, &c) in combo.iter().enumerate() {
            if c != 0 {
                for j in 0..ns.cols {
                    v[j] = f.add(v[j], f.mul(c as Fel, ns.get(ci, j)));
                }
            }
        }
        out.push(v);
    }
}

/// Deterministic-seeded search for a singular element of the enveloping
/// algebra with small nullity; yields (element, nullspace) pairs.
struct SingularSearch<'a> {
    f: &'a FiniteField,
    ops: &'a [Matrix],
    rng: WordRng,
    stage: usize,
    /// candidate eigenvalues to try before full root scans, if known
    hints: &'a [Fel],
}

impl<'a> SingularSearch<'a> {
    fn next_word(&mut self) -> Matrix {
        let n = self.ops[0].rows;
        let k = self.ops.len();
        if self.stage < k {
            let w = self.ops[self.stage].clone();
            self.stage += 1;
            return w;
        }
        self.stage += 1;
        // random sum of up to three products of up to three generators
        let mut acc = Matrix::zero(n, n);
        let terms = 2 + (self.rng.next() % 2) as usize;
        for _ in 0..terms {
            let len = 1 + (self.rng.next() % 3) as usize;
            let mut prod = Matrix::identity(n);
            for _ in 0..len {
                let gi = (self.rng.next() % k as u64) as usize;
                prod = prod.mul(self.f, &self.ops[gi]);
            }
            let c = 1 + (self.rng.next() % (self.f.q - 1)) as Fel;
            acc = acc.add(self.f, &prod.scale(self.f, c));
        }
        acc
    }

    /// Produce the next singular matrix with its nullspace.
    fn next_singular(&mut self) -> Option<(Matrix, Matrix)> {
        while self.stage < MAX_WORDS {
            let w = self.next_word();
            // try hinted eigenvalues first, then the full characteristic
            // polynomial root scan
            let mut lambdas: Vec<Fel> = Vec::new();
            for &h in self.hints {
                lambdas.push(h);
            }
            let cp = char_poly(self.f, &w);
            for r in roots_in_field(self.f, &cp) {
                if !lambdas.contains(&r) {
                    lambdas.push(r);
                }
            }
            let mut best: Option<(Matrix, Matrix)> = None;
            for lam in lambdas {
                let mut shifted = w.clone();
                for i in 0..shifted.rows {
                    shifted.set(i, i, self.f.sub(shifted.get(i, i), lam));
                }
                let ns = nullspace(self.f, &shifted);
                if ns.rows == 0 || ns.rows == shifted.rows {
                    continue;
                }
                if best.as_ref().map_or(true, |(_, b)| ns.rows < b.rows) {
                    best = Some((shifted, ns));
                }
            }
            if best.is_some() {
                return best;
            }
        }
        None
    }
}

/// Norton test driver: either certifies irreducibility or produces a proper
/// invariant subspace. Errors only if the word search hits its cap, which
/// indicates a bug or adversarial input rather than data.
pub fn chop_step(f: &FiniteField, ops: &[Matrix], seed: u64, hints: &[Fel]) -> Result<Chop> {
    let n = ops[0].rows;
    if n <= 1 {
        return Ok(Chop::Simple);
    }
    if ops.is_empty() {
        // zero algebra action: any line is a submodule
        let mut b = SpinBasis::new(n);
        let mut e = vec![0; n];
        e[0] = 1;
        b.insert(f, &e);
        return Ok(Chop::Submodule(b));
    }
    let mut search = SingularSearch { f, ops, rng: WordRng::new(seed), stage: 0, hints };
    let tops: Vec<Matrix> = ops.iter().map(|m| m.transpose()).collect();
    // submodule found from a dual-side spin via the annihilator
    let dual_to_sub = |sp: &SpinBasis| -> SpinBasis {
        let ann = nullspace(f, &sp.to_matrix());
        let mut b = SpinBasis::new(n);
        for i in 0..ann.rows {
            b.insert(f, ann.row(i));
        }
        debug_assert!(b.len() > 0 && b.len() < n);
        b
    };
    loop {
        let (z, ns) = match search.next_singular() {
            Some(x) => x,
            None => {
                return Err(Error::InternalLimit(
                    "meataxe word search exhausted without a singular element".into(),
                ))
            }
        };
        let znt = nullspace(f, &z.transpose());
        // cheap pass: spin the basis vectors of both null spaces; for
        // decomposable or isotypic modules this finds a submodule quickly
        for r in 0..ns.rows {
            let sp = spin(f, ops, std::slice::from_ref(&ns.row(r).to_vec()));
            if sp.len() < n {
                return Ok(Chop::Submodule(sp));
            }
        }
        for r in 0..znt.rows {
            let sp = spin(f, &tops, std::slice::from_ref(&znt.row(r).to_vec()));
            if sp.len() < n {
                return Ok(Chop::Submodule(dual_to_sub(&sp)));
            }
        }
        // conclusive simplicity requires enumerating every null line on
        // both sides; when infeasible, try another word
        let lines = match null_lines(f, &ns) {
            Some(l) => l,
            None => continue,
        };
        for v in &lines {
            let sp = spin(f, ops, std::slice::from_ref(v));
            if sp.len() < n {
                return Ok(Chop::Submodule(sp));
            }
        }
        let tlines = match null_lines(f, &znt) {
            Some(l) => l,
            None => continue,
        };
        for v in &tlines {
            let sp = spin(f, &tops, std::slice::from_ref(v));
            if sp.len() < n {
                return Ok(Chop::Submodule(dual_to_sub(&sp)));
            }
        }
        // every null line on both sides spins to the full space
        return Ok(Chop::Simple);
    }
}

/// Basis (rows, in the module's coordinates) of some simple submodule.
pub fn simple_submodule(f: &FiniteField, ops: &[Matrix], seed: u64) -> Result<Matrix> {
    let n = ops.first().map_or(0, |m| m.rows);
    match chop_step(f, ops, seed, &[])? {
        Chop::Simple => Ok(Matrix::identity(n)),
        Chop::Submodule(b) => {
            let sub_ops = sub_action(f, ops, &b);
            let inner = simple_submodule(f, &sub_ops, seed ^ 0x5bd1e995)?;
            // compose: rows of inner are in b-coordinates
            Ok(inner.mul(f, &b.to_matrix()))
        }
    }
}

/// Hom space between two modules over the same operator list pairing:
/// matrices X with ops_n[i] X = X ops_m[i]. Rows of the result are
/// vectorized (column-major) hom basis elements.
pub fn hom_space(
    f: &FiniteField,
    ops_m: &[Matrix],
    ops_n: &[Matrix],
) -> Vec<Matrix> {
    assert_eq!(ops_m.len(), ops_n.len());
    let dm = ops_m.first().map_or(0, |m| m.rows);
    let dn = ops_n.first().map_or(0, |m| m.rows);
    if dm == 0 || dn == 0 {
        return Vec::new();
    }
    let mut stacked_rows = Vec::new();
    for (a, b) in ops_m.iter().zip(ops_n) {
        // constraint b X - X a = 0; vec(bX) = (I (x) b) vec, vec(Xa) = (a^T (x) I) vec
        let lhs = Matrix::identity(dm).kron(f, b);
        let rhs = a.transpose().kron(f, &Matrix::identity(dn));
        let diff = lhs.sub(f, &rhs);
        for i in 0..diff.rows {
            stacked_rows.push(diff.row(i).to_vec());
        }
    }
    let stacked = Matrix::from_rows(stacked_rows);
    let ns = nullspace(f, &stacked);
    (0..ns.rows)
        .map(|r| {
            let mut m = Matrix::zero(dn, dm);
            for j in 0..dm {
                for i in 0..dn {
                    m.set(i, j, ns.get(r, j * dn + i));
                }
            }
            m
        })
        .collect()
}

/// Search the hom space for an invertible element: basis elements first,
/// then seeded random combinations, then exhaustive lines for tiny fields.
pub fn find_isomorphism(f: &FiniteField, homs: &[Matrix]) -> Option<Matrix> {
    if homs.is_empty() {
        return None;
    }
    let (dn, dm) = (homs[0].rows, homs[0].cols);
    if dn != dm {
        return None;
    }
    for h in homs {
        if h.inverse(f).is_some() {
            return Some(h.clone());
        }
    }
    if homs.len() == 1 {
        return None;
    }
    let mut rng = WordRng::new(0xA1DE11);
    for _ in 0..64 {
        let mut acc = Matrix::zero(dn, dm);
        for h in homs {
            let c = (rng.next() % f.q) as Fel;
            acc = acc.add(f, &h.scale(f, c));
        }
        if acc.inverse(f).is_some() {
            return Some(acc);
        }
    }
    if f.q <= 9 && homs.len() <= 4 {
        // exhaustive over all combinations
        let k = homs.len();
        let mut combo = vec![0u64; k];
        loop {
            let mut i = 0;
            loop {
                if i == k {
                    return None;
                }
                combo[i] += 1;
                if combo[i] < f.q {
                    break;
                }
                combo[i] = 0;
                i += 1;
            }
            let mut acc = Matrix::zero(dn, dm);
            for (ci, h) in homs.iter().enumerate() {
                if combo[ci] != 0 {
                    acc = acc.add(f, &h.scale(f, combo[ci] as Fel));
                }
            }
            if acc.inverse(f).is_some() {
                return Some(acc);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, e: usize) -> FiniteField {
        FiniteField::new(p, e).unwrap()
    }

    #[test]
    fn spin_and_actions() {
        let f = gf(3, 1);
        // regular module of C3 over GF(3): generator cycles basis
        let g = Matrix::from_rows(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        let ops = vec![g];
        // the all-ones vector spans the trivial submodule
        let b = spin(&f, &ops, &[vec![1, 1, 1]]);
        assert_eq!(b.len(), 1);
        let sub = sub_action(&f, &ops, &b);
        assert_eq!(sub[0], Matrix::identity(1));
        let (quo, _) = quotient_action(&f, &ops, &b);
        assert_eq!(quo[0].rows, 2);
        // e_0 spins to everything
        let b2 = spin(&f, &ops, &[vec![1, 0, 0]]);
        assert_eq!(b2.len(), 3);
    }

    #[test]
    fn chop_on_regular_c3() {
        let f = gf(3, 1);
        let g = Matrix::from_rows(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        match chop_step(&f, &[g], 0xA1DE11, &[1]).unwrap() {
            Chop::Simple => panic!("regular kC3 is not simple"),
            Chop::Submodule(b) => assert!(b.len() < 3 && b.len() > 0),
        }
    }

    #[test]
    fn chop_simple_certificate() {
        // 2-dimensional simple module of S3 over GF(5): represent (123) and
        // (12) in the standard 2-dim representation mod 5
        let f = gf(5, 1);
        let r = Matrix::from_rows(vec![vec![4, 4], vec![1, 0]]); // order 3
        let s = Matrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(r.pow(&f, 3), Matrix::identity(2));
        match chop_step(&f, &[r, s], 0xA1DE11, &[]).unwrap() {
            Chop::Simple => {}
            Chop::Submodule(_) => panic!("standard rep of S3 is simple mod 5"),
        }
    }

    #[test]
    fn simple_submodule_of_regular() {
        let f = gf(3, 1);
        let g = Matrix::from_rows(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        let s = simple_submodule(&f, &[g], 0xA1DE11).unwrap();
        assert_eq!(s.rows, 1); // only simple of kC3 is trivial, dim 1
    }

    #[test]
    fn hom_space_and_iso() {
        let f = gf(3, 1);
        let g = Matrix::from_rows(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        let ops = vec![g];
        // End of regular kC3 is 3-dimensional (the algebra itself)
        let h = hom_space(&f, &ops, &ops);
        assert_eq!(h.len(), 3);
        assert!(find_isomorphism(&f, &h).is_some());
        // hom(triv, regular) has dim 1
        let triv = vec![Matrix::identity(1)];
        let h2 = hom_space(&f, &triv, &ops);
        assert_eq!(h2.len(), 1);
    }
}

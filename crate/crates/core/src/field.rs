//! Exact arithmetic in GF(p^e) and dense exact linear algebra.
//!
//! Elements are packed into a `u32` as base-p digit strings of the
//! coefficient vector in the polynomial basis, so the elements of a field of
//! size q are exactly the integers `0..q`. Multiplication goes through
//! discrete-log tables built once per field; addition works digit-wise.

use crate::error::{Error, Result};
use std::fmt;

/// Packed field element: sum of c_i * p^i for the coefficient vector c.
pub type Fel = u32;

/// Upper bound on field size so the log/pow tables stay small.
const MAX_FIELD_SIZE: u64 = 1 << 24;

/// A concrete finite field GF(p^e) with fixed modulus and primitive element.
pub struct FiniteField {
    pub p: u64,
    pub e: usize,
    /// q = p^e
    pub q: u64,
    /// Monic irreducible modulus, coefficient vector of length e+1 over GF(p).
    pub modulus: Vec<u64>,
    /// A fixed primitive element (multiplicative order q-1), packed.
    pub generator: Fel,
    /// pow[i] = generator^i for i in 0..q-1
    pow: Vec<Fel>,
    /// log[a] = i with generator^i = a; log[0] = u32::MAX
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.e)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for FiniteField {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division. Fine for the sizes handled here.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// ---- polynomial helpers over GF(p), coefficient vectors lowest degree first ----

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&mut prod, m, p);
    prod
}

/// Reduce `a` modulo the monic polynomial `m` in place.
fn poly_rem(a: &mut Vec<u64>, m: &[u64], p: u64) {
    let dm = m.len() - 1;
    if dm == 0 {
        a.clear();
        a.push(0);
        return;
    }
    while a.len() > dm {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for i in 0..dm {
                let idx = shift + i;
                let sub = (lead * m[i]) % p;
                a[idx] = (a[idx] + p * p - sub) % p;
            }
        }
        a.pop();
    }
    poly_trim(a);
}

fn poly_pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = base.to_vec();
    poly_rem(&mut b, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            result = poly_mul_mod(&result, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        // x mod y with y made monic
        let lead = *y.last().unwrap();
        let linv = mod_inverse(lead, p);
        let ym: Vec<u64> = y.iter().map(|&c| (c * linv) % p).collect();
        poly_rem(&mut x, &ym, p);
        std::mem::swap(&mut x, &mut y);
    }
    x
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Irreducibility over GF(p): f monic of degree n is irreducible iff
/// x^(p^n) = x mod f and gcd(x^(p^(n/r)) - x, f) = 1 for every prime r | n.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // (fr - x) mod f
    let sub_x_mod = |fr: &[u64]| -> Vec<u64> {
        let mut d = fr.to_vec();
        if d.len() < 2 {
            d.resize(2, 0);
        }
        d[1] = (d[1] + p - 1) % p;
        poly_rem(&mut d, f, p);
        d
    };
    // x^(p^n) mod f by iterated Frobenius
    let mut fr = x.clone();
    poly_rem(&mut fr, f, p);
    for _ in 0..n {
        fr = poly_pow_mod(&fr, p, f, p);
    }
    let diff = sub_x_mod(&fr);
    if !(diff.len() == 1 && diff[0] == 0) {
        return false;
    }
    for (r, _) in factorize(n as u64) {
        let d = n / r as usize;
        let mut fr = x.clone();
        poly_rem(&mut fr, f, p);
        for _ in 0..d {
            fr = poly_pow_mod(&fr, p, f, p);
        }
        let diff = sub_x_mod(&fr);
        let g = poly_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FiniteField {
    /// Build GF(p^e) with the smallest monic irreducible modulus in packed
    /// order and the smallest primitive element in packed order.
    pub fn new(p: u64, e: usize) -> Result<FiniteField> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Input("extension degree must be positive".into()));
        }
        let q = p.checked_pow(e as u32).filter(|&q| q <= MAX_FIELD_SIZE);
        let q = match q {
            Some(q) => q,
            None => return Err(Error::SizeLimit(format!("field GF({p}^{e}) too large"))),
        };
        // smallest monic irreducible of degree e: enumerate lower coefficient
        // vectors in ascending packed order
        let mut modulus = None;
        'outer: for packed in 0..q {
            let mut f = Vec::with_capacity(e + 1);
            let mut v = packed;
            for _ in 0..e {
                f.push(v % p);
                v /= p;
            }
            f.push(1);
            if is_irreducible(&f, p) {
                modulus = Some(f);
                break 'outer;
            }
        }
        let modulus = modulus.expect("irreducible polynomial exists for every degree");
        let mut field = FiniteField {
            p,
            e,
            q,
            modulus,
            generator: 0,
            pow: Vec::new(),
            log: Vec::new(),
        };
        // find the smallest primitive element
        let factors = factorize(q - 1);
        let mut gen = None;
        for cand in 1..q {
            if q > 2 && cand == 1 {
                continue;
            }
            let cp = field.unpack64(cand as Fel);
            let mut primitive = true;
            for &(r, _) in &factors {
                let res = poly_pow_mod(&cp, (q - 1) / r, &field.modulus, p);
                if res.len() == 1 && res[0] == 1 {
                    primitive = false;
                    break;
                }
            }
            if primitive {
                gen = Some(cand as Fel);
                break;
            }
        }
        let gen = gen.expect("finite field has a primitive element");
        field.generator = gen;
        // build pow/log tables
        let mut pow = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![u32::MAX; q as usize];
        let gp = field.unpack64(gen);
        let mut cur = vec![1u64];
        for i in 0..(q - 1) {
            let packed = field.pack64(&cur);
            pow.push(packed);
            log[packed as usize] = i as u32;
            cur = poly_mul_mod(&cur, &gp, &field.modulus, p);
        }
        field.pow = pow;
        field.log = log;
        Ok(field)
    }

    fn unpack64(&self, a: Fel) -> Vec<u64> {
        let mut v = a as u64;
        let mut out = Vec::with_capacity(self.e);
        for _ in 0..self.e {
            out.push(v % self.p);
            v /= self.p;
        }
        poly_trim(&mut out);
        out
    }

    fn pack64(&self, a: &[u64]) -> Fel {
        let mut acc = 0u64;
        for &c in a.iter().rev() {
            acc = acc * self.p + (c % self.p);
        }
        acc as Fel
    }

    pub fn zero(&self) -> Fel {
        0
    }

    pub fn one(&self) -> Fel {
        1
    }

    /// Embed a prime-field residue.
    pub fn from_int(&self, n: i64) -> Fel {
        let r = n.rem_euclid(self.p as i64) as u64;
        r as Fel
    }

    /// Coefficient vector of length e, lowest degree first.
    pub fn coeffs(&self, a: Fel) -> Vec<u64> {
        let mut v = a as u64;
        let mut out = Vec::with_capacity(self.e);
        for _ in 0..self.e {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    pub fn add(&self, a: Fel, b: Fel) -> Fel {
        let p = self.p;
        let mut av = a as u64;
        let mut bv = b as u64;
        let mut acc = 0u64;
        let mut mult = 1u64;
        for _ in 0..self.e {
            let s = (av % p + bv % p) % p;
            acc += s * mult;
            mult *= p;
            av /= p;
            bv /= p;
        }
        acc as Fel
    }

    pub fn neg(&self, a: Fel) -> Fel {
        let p = self.p;
        let mut av = a as u64;
        let mut acc = 0u64;
        let mut mult = 1u64;
        for _ in 0..self.e {
            let s = (p - av % p) % p;
            acc += s * mult;
            mult *= p;
            av /= p;
        }
        acc as Fel
    }

    pub fn sub(&self, a: Fel, b: Fel) -> Fel {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fel, b: Fel) -> Fel {
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.log[a as usize] as u64;
        let lb = self.log[b as usize] as u64;
        self.pow[((la + lb) % (self.q - 1)) as usize]
    }

    pub fn inv(&self, a: Fel) -> Fel {
        assert!(a != 0, "division by zero");
        let la = self.log[a as usize] as u64;
        self.pow[((self.q - 1 - la) % (self.q - 1)) as usize]
    }

    pub fn div(&self, a: Fel, b: Fel) -> Fel {
        self.mul(a, self.inv(b))
    }

    pub fn pow_el(&self, a: Fel, mut n: i64) -> Fel {
        if a == 0 {
            assert!(n > 0, "0 to non-positive power");
            return 0;
        }
        let order = (self.q - 1) as i64;
        n = n.rem_euclid(order);
        let la = self.log[a as usize] as i64;
        self.pow[((la * n).rem_euclid(order)) as usize]
    }

    /// Discrete log base the field generator; None for 0.
    pub fn dlog(&self, a: Fel) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize] as u64)
        }
    }

    /// generator^i
    pub fn gen_pow(&self, i: u64) -> Fel {
        self.pow[(i % (self.q - 1)) as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fel) -> u64 {
        let la = self.log[a as usize] as u64;
        let n = self.q - 1;
        if la == 0 {
            1
        } else {
            n / gcd(n, la)
        }
    }

    /// A fixed primitive m-th root of unity; requires m | q - 1.
    pub fn root_of_unity(&self, m: u64) -> Result<Fel> {
        if m == 0 || (self.q - 1) % m != 0 {
            return Err(Error::Input(format!(
                "field GF({}^{}) has no primitive {m}-th root of unity",
                self.p, self.e
            )));
        }
        Ok(self.gen_pow((self.q - 1) / m))
    }

    /// Frobenius x -> x^p iterated k times.
    pub fn frobenius(&self, a: Fel, k: usize) -> Fel {
        if a == 0 {
            return 0;
        }
        let mut exp = 1u64;
        for _ in 0..(k % self.e) {
            exp = exp * self.p % (self.q - 1);
        }
        let la = self.log[a as usize] as u64;
        self.pow[((la * exp) % (self.q - 1)) as usize]
    }

    /// Inverse Frobenius, x -> x^(p^(e-1)) iterated.
    pub fn frobenius_inv(&self, a: Fel, k: usize) -> Fel {
        self.frobenius(a, (self.e - (k % self.e)) % self.e)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least e with m | p^e - 1, i.e. the multiplicative order of p mod m.
pub fn splitting_degree(p: u64, m: u64) -> Result<usize> {
    if m == 0 || gcd(p, m) != 1 {
        return Err(Error::Input(format!("gcd({p}, {m}) != 1")));
    }
    if m == 1 {
        return Ok(1);
    }
    let mut acc = p % m;
    for e in 1..=m as usize {
        if acc == 1 {
            return Ok(e);
        }
        acc = acc * p % m;
    }
    unreachable!("order of a unit divides phi(m)")
}

/// Embedding GF(p^e) -> GF(p^(e')) with e | e', via the first root of the
/// small modulus in the big field (scanned in packed order).
pub struct FieldEmbedding<'a> {
    pub small: &'a FiniteField,
    pub big: &'a FiniteField,
    root: Fel,
}

impl<'a> FieldEmbedding<'a> {
    pub fn new(small: &'a FiniteField, big: &'a FiniteField) -> Result<FieldEmbedding<'a>> {
        if small.p != big.p || big.e % small.e != 0 {
            return Err(Error::Input("no embedding between these fields".into()));
        }
        let mut root = None;
        for cand in 0..big.q {
            let c = cand as Fel;
            // evaluate small.modulus at c over big field
            let mut acc = 0 as Fel;
            for &co in small.modulus.iter().rev() {
                acc = big.add(big.mul(acc, c), big.from_int(co as i64));
            }
            if acc == 0 {
                root = Some(c);
                break;
            }
        }
        match root {
            Some(root) => Ok(FieldEmbedding { small, big, root }),
            None => Err(Error::Internal("modulus has no root in extension".into())),
        }
    }

    pub fn map(&self, a: Fel) -> Fel {
        let coeffs = self.small.coeffs(a);
        let mut acc = 0 as Fel;
        for &c in coeffs.iter().rev() {
            acc = self.big.add(self.big.mul(acc, self.root), self.big.from_int(c as i64));
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Dense matrices
// ---------------------------------------------------------------------------

/// Dense row-major matrix of packed field elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Fel>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.a[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fel>>) -> Matrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            a.extend(row);
        }
        Matrix { rows: r, cols: c, a }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fel {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fel) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fel] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self.get(i, k);
                if v == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let w = other.get(k, j);
                    if w == 0 {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(v, w)));
                }
            }
        }
        out
    }

    pub fn add(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let a = self.a.iter().zip(&other.a).map(|(&x, &y)| f.add(x, y)).collect();
        Matrix { rows: self.rows, cols: self.cols, a }
    }

    pub fn sub(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let a = self.a.iter().zip(&other.a).map(|(&x, &y)| f.sub(x, y)).collect();
        Matrix { rows: self.rows, cols: self.cols, a }
    }

    pub fn scale(&self, f: &FiniteField, c: Fel) -> Matrix {
        let a = self.a.iter().map(|&x| f.mul(x, c)).collect();
        Matrix { rows: self.rows, cols: self.cols, a }
    }

    /// Matrix-vector product (column convention).
    pub fn apply(&self, f: &FiniteField, v: &[Fel]) -> Vec<Fel> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0; self.rows];
        for i in 0..self.rows {
            let mut acc = 0;
            for j in 0..self.cols {
                acc = f.add(acc, f.mul(self.get(i, j), v[j]));
            }
            out[i] = acc;
        }
        out
    }

    pub fn trace(&self, f: &FiniteField) -> Fel {
        assert_eq!(self.rows, self.cols);
        let mut acc = 0;
        for i in 0..self.rows {
            acc = f.add(acc, self.get(i, i));
        }
        acc
    }

    pub fn kron(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        let mut out = Matrix::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let w = other.get(k, l);
                        if w != 0 {
                            out.set(i * other.rows + k, j * other.cols + l, f.mul(v, w));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, f: &FiniteField, mut n: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(f, &base);
            }
            base = base.mul(f, &base);
            n >>= 1;
        }
        result
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let red = row_reduce(f, &aug);
        if red.rank < n {
            return None;
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.reduced.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// Result of a reduced-row-echelon computation.
pub struct RowReduced {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: Matrix,
}

/// Reduced row echelon form with leftmost-nonzero/topmost pivot choice.
pub fn row_reduce(f: &FiniteField, m: &Matrix) -> RowReduced {
    let mut r = m.clone();
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..r.cols {
        // find pivot row at or below `rank`
        let mut piv = None;
        for i in rank..r.rows {
            if r.get(i, col) != 0 {
                piv = Some(i);
                break;
            }
        }
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        // swap into place
        if piv != rank {
            for j in 0..r.cols {
                let tmp = r.get(rank, j);
                r.set(rank, j, r.get(piv, j));
                r.set(piv, j, tmp);
            }
        }
        // normalize
        let inv = f.inv(r.get(rank, col));
        for j in 0..r.cols {
            r.set(rank, j, f.mul(r.get(rank, j), inv));
        }
        // eliminate everywhere else
        for i in 0..r.rows {
            if i == rank {
                continue;
            }
            let c = r.get(i, col);
            if c == 0 {
                continue;
            }
            for j in 0..r.cols {
                let v = f.sub(r.get(i, j), f.mul(c, r.get(rank, j)));
                r.set(i, j, v);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == r.rows {
            break;
        }
    }
    RowReduced { rank, pivots, reduced: r }
}

pub fn rank(f: &FiniteField, m: &Matrix) -> usize {
    row_reduce(f, m).rank
}

/// Basis of the right null space {v : Mv = 0}; rows of the result are the
/// basis vectors.
pub fn nullspace(f: &FiniteField, m: &Matrix) -> Matrix {
    let rr = row_reduce(f, m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !rr.pivots.contains(c)).collect();
    let mut basis = Matrix::zero(free.len(), m.cols);
    for (bi, &fc) in free.iter().enumerate() {
        basis.set(bi, fc, 1);
        for (pi, &pc) in rr.pivots.iter().enumerate() {
            basis.set(bi, pc, f.neg(rr.reduced.get(pi, fc)));
        }
    }
    basis
}

/// Solve M x = b; None when inconsistent. Free variables are set to zero.
pub fn solve(f: &FiniteField, m: &Matrix, b: &[Fel]) -> Option<Vec<Fel>> {
    assert_eq!(m.rows, b.len());
    let mut aug = Matrix::zero(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, m.cols, b[i]);
    }
    let rr = row_reduce(f, &aug);
    if rr.pivots.contains(&m.cols) {
        return None; // pivot in augmented column
    }
    let mut x = vec![0; m.cols];
    for (pi, &pc) in rr.pivots.iter().enumerate() {
        x[pc] = rr.reduced.get(pi, m.cols);
    }
    Some(x)
}

/// Characteristic polynomial of a square matrix, monic, coefficients lowest
/// degree first (so result[n] = 1). Computed down a cyclic filtration; the
/// product of the relative annihilator polynomials is the characteristic
/// polynomial.
pub fn char_poly(f: &FiniteField, m: &Matrix) -> Vec<Fel> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut poly = vec![1 as Fel]; // constant 1
    // row-reduced basis of the invariant subspace built so far
    let mut basis: Vec<Vec<Fel>> = Vec::new(); // reduced rows
    let mut pivots: Vec<usize> = Vec::new();
    // reduce a vector against basis; returns (residual, coords-in-krylov-space unused)
    let reduce = |basis: &Vec<Vec<Fel>>, pivots: &Vec<usize>, v: &mut Vec<Fel>| {
        for (bi, &pc) in pivots.iter().enumerate() {
            let c = v[pc];
            if c != 0 {
                for j in 0..n {
                    v[j] = f.sub(v[j], f.mul(c, basis[bi][j]));
                }
            }
        }
    };
    while basis.len() < n {
        // first standard basis vector not in span
        let mut seed = None;
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            let mut r = e.clone();
            reduce(&basis, &pivots, &mut r);
            if r.iter().any(|&x| x != 0) {
                seed = Some(e);
                break;
            }
        }
        let seed = seed.expect("basis incomplete implies a seed exists");
        // Krylov chain relative to current subspace. Track the chain vectors
        // and their reduced forms; when reduction hits zero we can read the
        // relative annihilator from the dependency.
        let mut chain: Vec<Vec<Fel>> = Vec::new(); // original M^k v
        let mut chain_red: Vec<Vec<Fel>> = Vec::new(); // reduced against basis+chain
        let mut chain_piv: Vec<usize> = Vec::new();
        // coefficients: express reduction steps; simplest is to solve at the end
        let mut v = seed.clone();
        loop {
            let mut r = v.clone();
            reduce(&basis, &pivots, &mut r);
            // reduce against chain_red, remembering combination
            let mut combo = vec![0 as Fel; chain.len()];
            for (ci, &pc) in chain_piv.iter().enumerate() {
                let c = r[pc];
                if c != 0 {
                    combo[ci] = c;
                    for j in 0..n {
                        r[j] = f.sub(r[j], f.mul(c, chain_red[ci][j]));
                    }
                }
            }
            if r.iter().all(|&x| x == 0) {
                // v = sum combo_i * chain_i modulo old subspace; relative
                // annihilator g(t) = t^k - sum combo_i' t^i, where the combo
                // is with respect to normalized chain entries. Recover the
                // coefficients by solving in terms of original chain vectors.
                // Build matrix with columns chain vectors + basis and solve.
                let k = chain.len();
                let mut cols = Matrix::zero(n, k + basis.len());
                for (ci, cv) in chain.iter().enumerate() {
                    for j in 0..n {
                        cols.set(j, ci, cv[j]);
                    }
                }
                for (bi, bv) in basis.iter().enumerate() {
                    for j in 0..n {
                        cols.set(j, k + bi, bv[j]);
                    }
                }
                let sol = solve(f, &cols, &v).expect("v lies in span by construction");
                // g(t) = t^k - sum sol[i] t^i
                let mut g = vec![0 as Fel; k + 1];
                g[k] = 1;
                for i in 0..k {
                    g[i] = f.neg(sol[i]);
                }
                // poly *= g
                let mut newpoly = vec![0 as Fel; poly.len() + k];
                for (i, &pc) in poly.iter().enumerate() {
                    if pc == 0 {
                        continue;
                    }
                    for (j, &gc) in g.iter().enumerate() {
                        let cur = newpoly[i + j];
                        newpoly[i + j] = f.add(cur, f.mul(pc, gc));
                    }
                }
                poly = newpoly;
                // absorb chain into basis (row-reduce chain_red entries are
                // already reduced and normalized)
                for (cv, &pc) in chain_red.iter().zip(&chain_piv) {
                    basis.push(cv.clone());
                    pivots.push(pc);
                }
                break;
            } else {
                // normalize r and record
                let lead = r.iter().position(|&x| x != 0).unwrap();
                let inv = f.inv(r[lead]);
                let rn: Vec<Fel> = r.iter().map(|&x| f.mul(x, inv)).collect();
                chain.push(v.clone());
                chain_red.push(rn);
                chain_piv.push(lead);
                v = m.apply(f, &v);
            }
        }
    }
    poly
}

/// Roots of a polynomial (coefficients lowest first) found by scanning the
/// multiplicative group plus zero; fine for q up to the table bound but only
/// used on small-degree polynomials, so prefer `roots_in_field`.
pub fn roots_in_field(f: &FiniteField, poly: &[Fel]) -> Vec<Fel> {
    let mut out = Vec::new();
    for cand in 0..f.q {
        let c = cand as Fel;
        let mut acc = 0 as Fel;
        for &co in poly.iter().rev() {
            acc = f.add(f.mul(acc, c), co);
        }
        if acc == 0 {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_field_examples() {
        // GF(2): modulus x
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.modulus, vec![0, 1]);
        assert_eq!(f.generator, 1);
        // GF(9): brute-force oracle over all 9 monic quadratics, smallest
        // irreducible is x^2 + 1
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.modulus, vec![1, 0, 1]);
        let mut oracle = None;
        for packed in 0..9u64 {
            let fpoly = vec![packed % 3, packed / 3, 1];
            // irreducible iff no roots in GF(3) (degree 2)
            let mut has_root = false;
            for x in 0..3u64 {
                let v = (fpoly[0] + fpoly[1] * x + fpoly[2] * x * x) % 3;
                if v == 0 {
                    has_root = true;
                    break;
                }
            }
            if !has_root {
                oracle = Some(fpoly);
                break;
            }
        }
        assert_eq!(f.modulus, oracle.unwrap());
        // GF(4): x^2 + x + 1 is the unique irreducible quadratic
        let f = FiniteField::new(2, 2).unwrap();
        assert_eq!(f.modulus, vec![1, 1, 1]);
    }

    #[test]
    fn make_field_errors() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(3, 0).is_err());
    }

    #[test]
    fn splitting_degree_examples() {
        assert_eq!(splitting_degree(3, 2).unwrap(), 1);
        assert_eq!(splitting_degree(3, 7).unwrap(), 6);
        assert_eq!(splitting_degree(2, 7).unwrap(), 3);
        assert!(splitting_degree(3, 6).is_err());
    }

    #[test]
    fn field_axioms_spot() {
        for (p, e) in [(2u64, 1usize), (3, 1), (3, 2), (2, 2), (5, 1), (7, 2), (3, 3)] {
            let f = FiniteField::new(p, e).unwrap();
            let q = f.q as Fel;
            for a in 0..q.min(50) {
                assert_eq!(f.frobenius(a, e), a, "Frobenius fixed point over GF({p}^{e})");
                for b in 0..q.min(20) {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if b != 0 {
                        assert_eq!(f.mul(f.div(a, b), b), a);
                    }
                    for c in 0..q.min(10) {
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn field_axioms_random(a in 0u32..729, b in 0u32..729, c in 0u32..729) {
            let f = FiniteField::new(3, 6).unwrap();
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.frobenius(a, 6), a);
        }

        #[test]
        fn row_reduce_idempotent(vals in proptest::collection::vec(0u32..9, 12)) {
            let f = FiniteField::new(3, 2).unwrap();
            let m = Matrix { rows: 3, cols: 4, a: vals };
            let r1 = row_reduce(&f, &m);
            let r2 = row_reduce(&f, &r1.reduced);
            prop_assert_eq!(r1.reduced.a, r2.reduced.a);
            prop_assert_eq!(r1.rank, r2.rank);
        }

        #[test]
        fn kron_rank_multiplicative(av in proptest::collection::vec(0u32..5, 6),
                                    bv in proptest::collection::vec(0u32..5, 6)) {
            let f = FiniteField::new(5, 1).unwrap();
            let a = Matrix { rows: 2, cols: 3, a: av };
            let b = Matrix { rows: 3, cols: 2, a: bv };
            let k = a.kron(&f, &b);
            prop_assert_eq!(rank(&f, &k), rank(&f, &a) * rank(&f, &b));
        }
    }

    #[test]
    fn row_reduce_examples() {
        let f = FiniteField::new(3, 1).unwrap();
        assert_eq!(rank(&f, &Matrix::identity(4)), 4);
        assert_eq!(rank(&f, &Matrix::zero(3, 3)), 0);
        // over GF(3) the second row of [[1,2],[2,1]] is twice the first, so
        // the rank is 1 (hand oracle: 2*(1,2) = (2,4) = (2,1) mod 3)
        let m = Matrix::from_rows(vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(rank(&f, &m), 1);
    }

    #[test]
    fn solve_examples() {
        // over GF(5): 2x = 3 -> x = 4, by exhaustive oracle
        let f = FiniteField::new(5, 1).unwrap();
        let m = Matrix::from_rows(vec![vec![2]]);
        let x = solve(&f, &m, &[3]).unwrap();
        let mut oracle = None;
        for c in 0..5u32 {
            if f.mul(2, c) == 3 {
                oracle = Some(c);
            }
        }
        assert_eq!(x[0], oracle.unwrap());
        assert_eq!(x[0], 4);
        // inconsistent system
        let m = Matrix::from_rows(vec![vec![1], vec![1]]);
        assert!(solve(&f, &m, &[1, 2]).is_none());
    }

    #[test]
    fn nullspace_examples() {
        let f = FiniteField::new(3, 1).unwrap();
        assert_eq!(nullspace(&f, &Matrix::identity(3)).rows, 0);
        let m = Matrix::from_rows(vec![vec![1, 2], vec![2, 1]]);
        let ns = nullspace(&f, &m);
        assert_eq!(ns.rows, 1);
        // check Mv = 0
        let v: Vec<Fel> = ns.row(0).to_vec();
        assert!(m.apply(&f, &v).iter().all(|&x| x == 0));
    }

    #[test]
    fn kron_identity() {
        let f = FiniteField::new(3, 1).unwrap();
        let k = Matrix::identity(2).kron(&f, &Matrix::identity(3));
        assert_eq!(k, Matrix::identity(6));
    }

    #[test]
    fn char_poly_examples() {
        let f = FiniteField::new(5, 1).unwrap();
        // companion matrix of t^2 - 2 has char poly t^2 - 2 = t^2 + 3
        let m = Matrix::from_rows(vec![vec![0, 2], vec![1, 0]]);
        let cp = char_poly(&f, &m);
        assert_eq!(cp, vec![3, 0, 1]);
        // identity: (t - 1)^n
        let m = Matrix::identity(3);
        let cp = char_poly(&f, &m);
        // (t-1)^3 = t^3 - 3t^2 + 3t - 1 = t^3 + 2t^2 + 3t + 4 over GF(5)
        assert_eq!(cp, vec![4, 3, 2, 1]);
        // roots
        let r = roots_in_field(&f, &cp);
        assert_eq!(r, vec![1]);
    }

    #[test]
    fn embedding_roundtrip() {
        let small = FiniteField::new(3, 2).unwrap();
        let big = FiniteField::new(3, 6).unwrap();
        let emb = FieldEmbedding::new(&small, &big).unwrap();
        // field homomorphism
        for a in 0..small.q as Fel {
            for b in 0..small.q as Fel {
                assert_eq!(emb.map(small.add(a, b)), big.add(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(small.mul(a, b)), big.mul(emb.map(a), emb.map(b)));
            }
        }
        assert_eq!(emb.map(0), 0);
        assert_eq!(emb.map(1), 1);
    }

    #[test]
    fn roots_of_unity() {
        let f = FiniteField::new(3, 6).unwrap();
        let z = f.root_of_unity(7).unwrap();
        assert_eq!(f.mult_order(z), 7);
        assert!(f.root_of_unity(5).is_err());
    }
}

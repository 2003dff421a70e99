//! Exact cyclotomic integers: elements of Z[zeta_m] as integer coordinate
//! vectors modulo the m-th cyclotomic polynomial. Used to lift eigenvalue
//! data out of finite fields without any numerical ambiguity.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Coefficients lowest-degree first, of the m-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by the product of proper-divisor cyclotomics
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    cache.lock().unwrap().insert(m, num.clone());
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut quo = vec![0i64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c != 0 {
            quo[i - dd] = c;
            for j in 0..=dd {
                rem[i - dd + j] -= c * den[j];
            }
        }
    }
    assert!(rem.iter().all(|&x| x == 0), "division not exact");
    quo
}

/// An element of Z[zeta_m], coordinates in the power basis 1..zeta^(phi(m)-1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycInt {
    pub m: u64,
    pub coeffs: Vec<i64>,
}

impl CycInt {
    pub fn zero(m: u64) -> CycInt {
        let deg = cyclotomic_poly(m).len() - 1;
        CycInt { m, coeffs: vec![0; deg.max(1)] }
    }

    pub fn from_int(m: u64, n: i64) -> CycInt {
        let mut z = CycInt::zero(m);
        z.coeffs[0] = n;
        z
    }

    /// zeta_m^k
    pub fn zeta_pow(m: u64, k: u64) -> CycInt {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        let k = (k % m) as usize;
        // x^k reduced mod phi
        let mut v = vec![0i64; k + 1];
        v[k] = 1;
        let r = reduce(&v, &phi);
        let mut coeffs = vec![0; deg.max(1)];
        coeffs[..r.len()].copy_from_slice(&r);
        CycInt { m, coeffs }
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        assert_eq!(self.m, other.m);
        CycInt {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        assert_eq!(self.m, other.m);
        CycInt {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> CycInt {
        CycInt { m: self.m, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        assert_eq!(self.m, other.m);
        let phi = cyclotomic_poly(self.m);
        let deg = phi.len() - 1;
        let mut prod = vec![0i64; self.coeffs.len() + other.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let r = reduce(&prod, &phi);
        let mut coeffs = vec![0; deg.max(1)];
        coeffs[..r.len()].copy_from_slice(&r);
        CycInt { m: self.m, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0)
    }

    /// Re-express in Z[zeta_M] for m | M via zeta_m = zeta_M^(M/m).
    pub fn embed(&self, big_m: u64) -> CycInt {
        assert_eq!(big_m % self.m, 0);
        let step = big_m / self.m;
        let mut acc = CycInt::zero(big_m);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&CycInt::zeta_pow(big_m, step * i as u64).scale(c));
            }
        }
        acc
    }
}

fn reduce(v: &[i64], phi: &[i64]) -> Vec<i64> {
    let dd = phi.len() - 1;
    let mut rem = v.to_vec();
    if rem.len() <= dd {
        return rem;
    }
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c != 0 {
            rem[i] = 0;
            for j in 0..dd {
                rem[i - dd + j] -= c * phi[j];
            }
        }
    }
    rem.truncate(dd.max(1));
    rem
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_arithmetic() {
        // 1 + zeta_3 + zeta_3^2 = 0
        let s = CycInt::zeta_pow(3, 0)
            .add(&CycInt::zeta_pow(3, 1))
            .add(&CycInt::zeta_pow(3, 2));
        assert!(s.is_zero());
        // zeta_4^2 = -1
        let sq = CycInt::zeta_pow(4, 1).mul(&CycInt::zeta_pow(4, 1));
        assert_eq!(sq, CycInt::from_int(4, -1));
        // embedding zeta_3 into Z[zeta_6]: zeta_6^2
        let e = CycInt::zeta_pow(3, 1).embed(6);
        assert_eq!(e, CycInt::zeta_pow(6, 2));
    }
}

//! Exact linear system solving over Z/M for composite M, by solving modulo
//! each prime power and recombining with CRT. Used for cochain equations in
//! discrete-log exponent space.

use crate::field::factorize;

/// Solve `rows * x = rhs` over Z/q^a. Returns a particular solution (free
/// variables zero) or None when inconsistent.
///
/// Gaussian elimination over the local ring Z/q^a with global minimal-
/// valuation pivoting: at each step the pivot is an entry of minimal
/// q-valuation among the remaining submatrix, so valuations never decrease
/// and the final divisibility checks are conclusive.
fn solve_prime_power(rows: &[Vec<i64>], rhs: &[i64], ncols: usize, q: u64, a: u32) -> Option<Vec<u64>> {
    let m = q.pow(a) as i64;
    let val = |x: i64| -> u32 {
        let mut x = x.rem_euclid(m);
        if x == 0 {
            return a;
        }
        let mut v = 0;
        while x % q as i64 == 0 {
            x /= q as i64;
            v += 1;
        }
        v
    };
    // modular inverse of a unit mod m
    let inv_unit = |x: i64| -> i64 {
        let x = x.rem_euclid(m);
        let mut t: i64 = 0;
        let mut newt: i64 = 1;
        let mut r: i64 = m;
        let mut newr: i64 = x;
        while newr != 0 {
            let quo = r / newr;
            (t, newt) = (newt, t - quo * newt);
            (r, newr) = (newr, r - quo * newr);
        }
        assert_eq!(r, 1, "not a unit");
        t.rem_euclid(m)
    };
    let nrows = rows.len();
    let mut mat: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(m)).collect()).collect();
    let mut b: Vec<i64> = rhs.iter().map(|&x| x.rem_euclid(m)).collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut used_row = vec![false; nrows];
    let mut used_col = vec![false; ncols];
    loop {
        // find global minimal-valuation entry among unused rows/cols
        let mut best: Option<(u32, usize, usize)> = None;
        for i in 0..nrows {
            if used_row[i] {
                continue;
            }
            for j in 0..ncols {
                if used_col[j] || mat[i][j] == 0 {
                    continue;
                }
                let v = val(mat[i][j]);
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, pi, pj) = match best {
            Some(x) => x,
            None => break,
        };
        // normalize pivot row so pivot entry = q^v
        let unit = mat[pi][pj] / q.pow(v) as i64;
        // unit part is invertible mod q^(a-v); compute inverse mod m of the
        // unit (coprime to q)
        let uinv = inv_unit(unit.rem_euclid(m));
        for x in mat[pi].iter_mut() {
            *x = (*x * uinv).rem_euclid(m);
        }
        b[pi] = (b[pi] * uinv).rem_euclid(m);
        // eliminate the column from every other unused row
        for i in 0..nrows {
            if i == pi || used_row[i] || mat[i][pj] == 0 {
                continue;
            }
            // mat[i][pj] has valuation >= v
            let factor = mat[i][pj] / q.pow(v) as i64;
            for j in 0..ncols {
                mat[i][j] = (mat[i][j] - factor * mat[pi][j]).rem_euclid(m);
            }
            b[i] = (b[i] - factor * b[pi]).rem_euclid(m);
        }
        used_row[pi] = true;
        used_col[pj] = true;
        pivot_rows.push(pi);
        pivot_cols.push(pj);
        let _ = v;
    }
    // rows with no pivot must have zero rhs
    for i in 0..nrows {
        if !used_row[i] {
            if mat[i].iter().any(|&x| x != 0) {
                // all remaining entries were zero by loop exit; defensive
                return None;
            }
            if b[i].rem_euclid(m) != 0 {
                return None;
            }
        }
    }
    // back-substitute in reverse pivot order; free variables are zero
    let mut x = vec![0i64; ncols];
    for k in (0..pivot_rows.len()).rev() {
        let pi = pivot_rows[k];
        let pj = pivot_cols[k];
        let mut acc = b[pi];
        for j in 0..ncols {
            if j != pj && mat[pi][j] != 0 {
                acc = (acc - mat[pi][j] * x[j]).rem_euclid(m);
            }
        }
        let pv = mat[pi][pj];
        let v = val(pv);
        let qv = q.pow(v) as i64;
        if acc.rem_euclid(qv) != 0 {
            return None;
        }
        // pivot entry is exactly q^v after normalization
        x[pj] = (acc / qv).rem_euclid(m / qv);
    }
    Some(x.into_iter().map(|v| v.rem_euclid(m) as u64).collect())
}

/// Solve a sparse integer linear system over Z/modulus. Rows are
/// (coefficient list, rhs). Returns a particular solution or None.
pub fn solve_linear_mod(
    rows: &[(Vec<(usize, i64)>, i64)],
    ncols: usize,
    modulus: u64,
) -> Option<Vec<u64>> {
    assert!(modulus >= 1);
    if modulus == 1 {
        return Some(vec![0; ncols]);
    }
    let dense: Vec<Vec<i64>> = rows
        .iter()
        .map(|(coeffs, _)| {
            let mut r = vec![0i64; ncols];
            for &(c, v) in coeffs {
                r[c] += v;
            }
            r
        })
        .collect();
    let rhs: Vec<i64> = rows.iter().map(|&(_, b)| b).collect();
    let mut solutions: Vec<(u64, Vec<u64>)> = Vec::new();
    for (q, a) in factorize(modulus) {
        let sol = solve_prime_power(&dense, &rhs, ncols, q, a)?;
        solutions.push((q.pow(a), sol));
    }
    // CRT per coordinate
    let mut out = vec![0u64; ncols];
    for j in 0..ncols {
        let mut x: i128 = 0;
        let mut mm: i128 = 1;
        for (pk, sol) in &solutions {
            let (r2, m2) = (sol[j] as i128, *pk as i128);
            // combine x mod mm with r2 mod m2
            let (g, p, _q) = egcd(mm, m2);
            assert_eq!(g, 1);
            let diff = (r2 - x).rem_euclid(m2);
            let lift = (diff * p).rem_euclid(m2);
            x += mm * lift;
            mm *= m2;
            x = x.rem_euclid(mm);
        }
        out[j] = x as u64;
    }
    Some(out)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(rows: &[(Vec<(usize, i64)>, i64)], _ncols: usize, m: u64, sol: &[u64]) {
        for (coeffs, b) in rows {
            let mut acc: i64 = 0;
            for &(c, v) in coeffs {
                acc += v * sol[c] as i64;
            }
            assert_eq!(acc.rem_euclid(m as i64), b.rem_euclid(m as i64));
        }
    }

    #[test]
    fn simple_systems() {
        // 2x = 2 mod 4 -> x = 1 or 3
        let rows = vec![(vec![(0usize, 2i64)], 2i64)];
        let sol = solve_linear_mod(&rows, 1, 4).unwrap();
        check(&rows, 1, 4, &sol);
        // 2x = 1 mod 4 -> none
        let rows = vec![(vec![(0usize, 2i64)], 1i64)];
        assert!(solve_linear_mod(&rows, 1, 4).is_none());
        // the case where the valuation-0 column must be preferred:
        // 2x + y = 1 mod 4 is solvable
        let rows = vec![(vec![(0usize, 2i64), (1, 1)], 1i64)];
        let sol = solve_linear_mod(&rows, 2, 4).unwrap();
        check(&rows, 2, 4, &sol);
        // composite modulus
        let rows = vec![
            (vec![(0usize, 6i64), (1, 1)], 3i64),
            (vec![(0usize, 1i64)], 5i64),
        ];
        let sol = solve_linear_mod(&rows, 2, 12).unwrap();
        check(&rows, 2, 12, &sol);
    }

    #[test]
    fn exhaustive_cross_check() {
        // all 2x2 systems over Z/8 with small coefficients, against brute force
        let m = 8i64;
        for a in 0..4i64 {
            for b in 0..4i64 {
                for c in 0..4i64 {
                    for d in 0..4i64 {
                        for r1 in 0..3i64 {
                            for r2 in 0..3i64 {
                                let rows = vec![
                                    (vec![(0usize, a), (1, b)], r1),
                                    (vec![(0usize, c), (1, d)], r2),
                                ];
                                let brute = (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).any(
                                    |(x, y)| {
                                        (a * x + b * y - r1).rem_euclid(m) == 0
                                            && (c * x + d * y - r2).rem_euclid(m) == 0
                                    },
                                );
                                let got = solve_linear_mod(&rows, 2, m as u64);
                                assert_eq!(got.is_some(), brute, "{a} {b} {c} {d} {r1} {r2}");
                                if let Some(sol) = got {
                                    check(&rows, 2, m as u64, &sol);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

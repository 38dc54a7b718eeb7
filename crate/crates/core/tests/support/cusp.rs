//! Brute-force first-order operators on the cusp `k[x, y]/(y^2 - x^3)`, independent of the
//! engine: linear algebra on monomials up to a weight bound.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

/// Degree bound of the brute-force oracle.
pub const ORACLE_BOUND: i64 = 12;

// Monomials x^i y^j of the cusp k[x, y]/(y^2 - x^3), normalized to j ≤ 1; weight 2i + 3j.
type Mono = (i64, i64);

fn weight(m: Mono) -> i64 {
    2 * m.0 + 3 * m.1
}

fn normalize(m: Mono) -> Mono {
    let (mut i, mut j) = m;
    while j >= 2 {
        j -= 2;
        i += 3;
    }
    (i, j)
}

fn times(a: Mono, b: Mono) -> Mono {
    normalize((a.0 + b.0, a.1 + b.1))
}

/// The unique normal monomial of weight `d`, if any.
fn basis_of_weight(d: i64) -> Option<Mono> {
    if d < 0 {
        return None;
    }
    [0, 1].into_iter().find(|&j| (d - 3 * j) >= 0 && (d - 3 * j) % 2 == 0).map(|j| ((d - 3 * j) / 2, j))
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the space of `k`-linear maps `f: A_{≤B} → A` of degree `e` with
/// `[[f, a], b] = 0` on every monomial where it is defined, `a, b ∈ {x, y}`.
pub fn oracle_first_order(e: i64) -> usize {
    let domain: Vec<Mono> = (0..=ORACLE_BOUND).filter_map(basis_of_weight).collect();
    let mut unknown: HashMap<Mono, usize> = HashMap::new();
    for m in &domain {
        if basis_of_weight(weight(*m) + e).is_some() {
            let k = unknown.len();
            unknown.insert(*m, k);
        }
    }
    let gens: [Mono; 2] = [(1, 0), (0, 1)];
    let mut rows = Vec::new();
    for m in &domain {
        for (ia, a) in gens.iter().enumerate() {
            for b in &gens[ia..] {
                let abm = times(times(*a, *b), *m);
                if weight(abm) > ORACLE_BOUND || basis_of_weight(weight(abm) + e).is_none() {
                    continue;
                }
                // f(abm) - a f(bm) - b f(am) + ab f(m), each a multiple of the one basis
                // monomial of the target weight.
                let mut row = vec![BigRational::zero(); unknown.len()];
                let mut add = |src: Mono, c: i64| {
                    if let Some(&k) = unknown.get(&src) {
                        row[k] += BigRational::from_integer(c.into());
                    }
                };
                add(abm, 1);
                add(times(*b, *m), -1);
                add(times(*a, *m), -1);
                add(*m, 1);
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    unknown.len() - rank(rows)
}

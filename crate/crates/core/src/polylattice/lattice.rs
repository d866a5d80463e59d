//! Exact integer and rational linear algebra over small dense matrices.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Everything here works with
//! arbitrary-precision values, so none of the routines can overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

pub fn rat_matrix(rows: &[Vec<i64>]) -> RatMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Gcd of the entries (always non-negative; zero for the zero vector).
pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Reduced row echelon form over the rationals. Returns the reduced matrix
/// together with the pivot columns, leftmost first.
pub fn rref(rows: &RatMatrix, ncols: usize) -> (RatMatrix, Vec<usize>) {
    let mut m = rows.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank_rational(rows: &RatMatrix, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

pub fn rank_int(rows: &[Vec<i64>], ncols: usize) -> usize {
    rank_rational(&rat_matrix(rows), ncols)
}

/// Basis of the right null space `{x : rows * x = 0}` over the rationals.
pub fn nullspace(rows: &RatMatrix, ncols: usize) -> RatMatrix {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Smith normal form `left * a * right = diag(d_1, .., d_r, 0, ..)` with
/// `d_i | d_{i+1}`, all `d_i > 0`, and `left`, `right` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// True when every invariant factor is one.
    pub fn is_unit(&self) -> bool {
        self.invariant_factors.iter().all(One::is_one)
    }
}

pub fn smith_normal_form(a: &IntMatrix, ncols: usize) -> SmithForm {
    let m = a.len();
    let n = ncols;
    let mut d = a.clone();
    let mut left = identity(m);
    let mut right = identity(n);
    let mut factors = Vec::new();

    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut right, t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                add_row_multiple(&mut d, i, t, &-&q);
                add_row_multiple(&mut left, i, t, &-&q);
                if !d[i][t].is_zero() {
                    d.swap(t, i);
                    left.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                add_col_multiple(&mut d, j, t, &-&q);
                add_col_multiple(&mut right, j, t, &-&q);
                if !d[t][j].is_zero() {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut right, t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut left, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut left, t);
        }
        factors.push(d[t][t].clone());
    }

    SmithForm {
        invariant_factors: factors,
        left,
        right,
    }
}

/// Column echelon form reached by unimodular column operations:
/// `a * right = h`, where the nonzero columns of `h` are the first `rank`
/// ones and each starts strictly lower than the previous. No sign or
/// remainder normalization is applied, so an already-echelon input keeps
/// `right = I`.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
    pub rank: usize,
}

pub fn column_echelon(a: &IntMatrix, ncols: usize) -> ColumnEchelon {
    let mut h = a.clone();
    let mut right = identity(ncols);
    let mut right_inv = identity(ncols);
    let mut c = 0;
    for i in 0..h.len() {
        if c == ncols {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (c..ncols).filter(|&j| !h[i][j].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&j) = nonzero.first() {
                    if j != c {
                        swap_cols(&mut h, c, j);
                        swap_cols(&mut right, c, j);
                        right_inv.swap(c, j);
                    }
                    c += 1;
                }
                break;
            }
            let p = *nonzero
                .iter()
                .min_by(|&&x, &&y| h[i][x].abs().cmp(&h[i][y].abs()).then(x.cmp(&y)))
                .expect("nonempty");
            for &k in nonzero.iter().filter(|&&k| k != p) {
                let q = h[i][k].div_floor(&h[i][p]);
                // col_k -= q col_p ; inverse: row_p += q row_k
                add_col_multiple(&mut h, k, p, &-&q);
                add_col_multiple(&mut right, k, p, &-&q);
                add_row_multiple(&mut right_inv, p, k, &q);
            }
        }
    }
    ColumnEchelon {
        h,
        right,
        right_inv,
        rank: c,
    }
}

/// Row-style Hermite normal form of the lattice spanned by the rows:
/// positive pivots, entries above each pivot reduced into `[0, pivot)`,
/// zero rows dropped. Canonical for the lattice.
pub fn row_hermite(rows: &IntMatrix, ncols: usize) -> IntMatrix {
    let mut m = rows.clone();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero
                .iter()
                .min_by(|&&x, &&y| m[x][c].abs().cmp(&m[y][c].abs()).then(x.cmp(&y)))
                .expect("nonempty");
            for &k in nonzero.iter().filter(|&&k| k != p) {
                let q = m[k][c].div_floor(&m[p][c]);
                add_row_multiple(&mut m, k, p, &-&q);
            }
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        if m[r][c].is_negative() {
            negate_row(&mut m, r);
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                add_row_multiple(&mut m, i, r, &-&q);
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row[target] += factor * row[source]
fn add_row_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(src) {
        *t += factor * s;
    }
}

/// col[target] += factor * col[source]
fn add_col_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] += factor * s;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for v in m[r].iter_mut() {
        *v = -&*v;
    }
}

//! Smith normal form over the integers, with unimodular transforms.
//!
//! Used to present cokernels of twisted-Frobenius matrices as finite abelian
//! groups with successive elementary divisors.

use num::bigint::BigInt;
use num::{Integer, Signed, Zero};

/// D = U * A * V with U, V unimodular and D diagonal, d_i | d_{i+1}.
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

/// Elementary-divisor presentation of a finite abelian cokernel.
pub struct FiniteAbelianPresentation {
    /// nontrivial elementary divisors (entries > 1), successive divisibility
    pub snf_diagonal: Vec<BigInt>,
    pub basis_change: (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>),
}

impl FiniteAbelianPresentation {
    pub fn order(&self) -> BigInt {
        let mut o = BigInt::from(1);
        for d in &self.snf_diagonal {
            o *= d;
        }
        o
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from(if i == j { 1 } else { 0 }))
                .collect()
        })
        .collect()
}

/// Smith normal form of a square integer matrix.
pub fn smith_normal_form(a: &[Vec<i128>]) -> Snf {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u = identity(n);
    let mut v = identity(n);

    for t in 0..n {
        loop {
            // find pivot: smallest nonzero |entry| in the remaining block
            let mut piv: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !m[i][j].is_zero() {
                        let better = match &piv {
                            None => true,
                            Some((pi, pj)) => m[i][j].abs() < m[*pi][*pj].abs(),
                        };
                        if better {
                            piv = Some((i, j));
                        }
                    }
                }
            }
            let (pi, pj) = match piv {
                None => break, // all-zero block
                Some(p) => p,
            };
            m.swap(t, pi);
            u.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            // clear column t
            let mut dirty = false;
            for i in t + 1..n {
                if !m[i][t].is_zero() {
                    let q = div_round(&m[i][t], &m[t][t]);
                    if !q.is_zero() {
                        for j in t..n {
                            let s = &q * &m[t][j];
                            m[i][j] -= s;
                        }
                        for j in 0..n {
                            let s = &q * &u[t][j];
                            u[i][j] -= s;
                        }
                    }
                    if !m[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            // clear row t
            for j in t + 1..n {
                if !m[t][j].is_zero() {
                    let q = div_round(&m[t][j], &m[t][t]);
                    if !q.is_zero() {
                        for i in t..n {
                            let s = &q * &m[i][t];
                            m[i][j] -= s;
                        }
                        for i in 0..n {
                            let s = &q * &v[i][t];
                            v[i][j] -= s;
                        }
                    }
                    if !m[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (t + 1..n).all(|i| m[i][t].is_zero())
                && (t + 1..n).all(|j| m[t][j].is_zero())
            {
                break;
            }
        }
    }
    // enforce successive divisibility
    for t in 0..n {
        for s in t + 1..n {
            if m[s][s].is_zero() {
                continue;
            }
            if (&m[s][s] % &m[t][t]).is_zero() {
                continue;
            }
            // standard 2x2 fix: bring gcd to position t
            // add column s to column t, then re-clear the block
            for i in 0..n {
                let x = m[i][s].clone();
                m[i][t] += x;
                let y = v[i][s].clone();
                v[i][t] += y;
            }
            // local re-elimination on rows/cols t..
            re_eliminate(&mut m, &mut u, &mut v, t);
        }
    }
    for t in 0..n {
        if m[t][t].is_negative() {
            for j in 0..n {
                m[t][j] = -m[t][j].clone();
                u[t][j] = -u[t][j].clone();
            }
        }
    }
    Snf {
        diag: (0..n).map(|i| m[i][i].clone()).collect(),
        left: u,
        right: v,
    }
}

fn re_eliminate(
    m: &mut Vec<Vec<BigInt>>,
    u: &mut Vec<Vec<BigInt>>,
    v: &mut Vec<Vec<BigInt>>,
    t: usize,
) {
    let n = m.len();
    loop {
        let mut piv: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                if !m[i][j].is_zero() {
                    let better = match &piv {
                        None => true,
                        Some((pi, pj)) => m[i][j].abs() < m[*pi][*pj].abs(),
                    };
                    if better {
                        piv = Some((i, j));
                    }
                }
            }
        }
        let (pi, pj) = match piv {
            None => return,
            Some(p) => p,
        };
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..n {
            if !m[i][t].is_zero() {
                let q = div_round(&m[i][t], &m[t][t]);
                for j in t..n {
                    let s = &q * &m[t][j];
                    m[i][j] -= s;
                }
                for j in 0..n {
                    let s = &q * &u[t][j];
                    u[i][j] -= s;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..n {
            if !m[t][j].is_zero() {
                let q = div_round(&m[t][j], &m[t][t]);
                for i in t..n {
                    let s = &q * &m[i][t];
                    m[i][j] -= s;
                }
                for i in 0..n {
                    let s = &q * &v[i][t];
                    v[i][j] -= s;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if clean {
            return;
        }
    }
}

// rounded division, keeps remainders small
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Cokernel of A as a finite abelian group; panics if det A = 0.
pub fn cokernel(a: &[Vec<i128>]) -> FiniteAbelianPresentation {
    let snf = smith_normal_form(a);
    assert!(
        snf.diag.iter().all(|d| !d.is_zero()),
        "matrix is singular, cokernel infinite"
    );
    FiniteAbelianPresentation {
        snf_diagonal: snf
            .diag
            .iter()
            .filter(|d| **d > BigInt::from(1))
            .cloned()
            .collect(),
        basis_change: (snf.left, snf.right),
    }
}

pub fn det_i128(a: &[Vec<i128>]) -> BigInt {
    // fraction-free Gaussian elimination (Bareiss)
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &x / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn snf_small() {
        let a = vec![vec![2i128, 4], vec![6, 8]];
        let s = smith_normal_form(&a);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(4)]);
    }

    proptest! {
        #[test]
        fn snf_is_uav(entries in proptest::collection::vec(-9i128..10, 9)) {
            let a: Vec<Vec<i128>> = (0..3).map(|i| entries[3*i..3*i+3].to_vec()).collect();
            let s = smith_normal_form(&a);
            let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let uav = matmul(&matmul(&s.left, &big), &s.right);
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                    prop_assert_eq!(&uav[i][j], &expect);
                }
            }
            // successive divisibility among nonzero entries
            for i in 0..2 {
                if !s.diag[i].is_zero() && !s.diag[i+1].is_zero() {
                    prop_assert!((&s.diag[i+1] % &s.diag[i]).is_zero());
                }
            }
            // determinant consistency up to sign
            let d = det_i128(&a);
            let mut p = BigInt::from(1);
            for x in &s.diag { p *= x; }
            prop_assert_eq!(d.abs(), p.abs());
        }
    }
}

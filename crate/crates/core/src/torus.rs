//! Lattice-level arithmetic of unramified maximal tori.
//!
//! A torus form is the pair (cocharacter lattice, twisted Frobenius q*w). Its
//! rational points are realized as exponent vectors modulo q^n - 1 (n the
//! order of w), so that root evaluation is a dot product of exponents and the
//! very-regular predicate is a single zero test.

use crate::cyclotomic::{Cyc, CycAcc};
use crate::error::{Error, Result};
use crate::roots::{mat_identity, IMat, RootSystemData, WeylClassRep};
use crate::snf::{det_i128, smith_normal_form};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// q = p^f for a prime p.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut m = q;
            let mut f = 0;
            while m % p == 0 {
                m /= p;
                f += 1;
            }
            return if m == 1 { Some((p, f)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// A rational maximal torus type: twisted Frobenius q*w on the lattice.
pub struct TorusForm {
    pub q: u64,
    pub w: IMat,
    pub splitting_degree: u32,
    /// the matrix q*w - I
    pub frobenius: Vec<Vec<i128>>,
}

impl TorusForm {
    pub fn new(rs: &RootSystemData, wc: &WeylClassRep, q: u64) -> Result<TorusForm> {
        if prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        let n = crate::roots::mat_order(&wc.w, 1000)
            .ok_or_else(|| Error::Invalid("weyl element of unreasonable order".into()))?;
        let rank = rs.rank;
        let mut frob = vec![vec![0i128; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                frob[i][j] = q as i128 * wc.w[i][j] as i128 - i128::from(i == j);
            }
        }
        Ok(TorusForm {
            q,
            w: wc.w.clone(),
            splitting_degree: n,
            frobenius: frob,
        })
    }

    /// |T_w(F_q)| = |det(q*w - I)|.
    pub fn order(&self) -> u128 {
        let d = det_i128(&self.frobenius);
        d.abs().to_u128().expect("torus order exceeds u128")
    }
}

pub fn torus_order(rs: &RootSystemData, wc: &WeylClassRep, q: u64) -> Result<u128> {
    Ok(TorusForm::new(rs, wc, q)?.order())
}

/// The group of rational points, as the solution lattice of (qw - 1)a = 0
/// in (Z/(q^n - 1))^rank.
pub struct TorusPoints {
    pub rank: usize,
    /// q^n - 1
    pub modulus: u128,
    pub order: u128,
    /// independent generators with their orders (elementary divisors > 1)
    pub gens: Vec<PointGen>,
    vinv: Vec<Vec<i128>>,
    /// positions of the nontrivial divisors on the SNF diagonal
    gen_cols: Vec<usize>,
}

pub struct PointGen {
    pub vector: Vec<u128>,
    pub order: u128,
}

fn modp(x: i128, n: u128) -> u128 {
    let n_i = n as i128;
    (((x % n_i) + n_i) % n_i) as u128
}

fn big_to_u128_mod(x: &BigInt, n: u128) -> u128 {
    let nn = BigInt::from(n);
    let mut r = x % &nn;
    if r.is_negative() {
        r += &nn;
    }
    r.to_u128().unwrap()
}

fn mat_inverse_exact(v: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    // Gauss-Jordan over rationals; input is unimodular so the result is integral
    let n = v.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                v[i].iter().map(|x| BigRational::from(x.clone())).collect();
            for j in 0..n {
                row.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !aug[r][c].is_zero()).expect("singular");
        aug.swap(c, p);
        let inv = aug[c][c].clone();
        for x in aug[c].iter_mut() {
            *x /= inv.clone();
        }
        for r in 0..n {
            if r != c && !aug[r][c].is_zero() {
                let f = aug[r][c].clone();
                for j in 0..2 * n {
                    let t = &aug[c][j] * &f;
                    aug[r][j] -= t;
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            (n..2 * n)
                .map(|j| {
                    assert!(aug[i][j].is_integer(), "inverse not integral");
                    aug[i][j].to_integer()
                })
                .collect()
        })
        .collect()
}

impl TorusPoints {
    pub fn build(form: &TorusForm, cap: u128) -> Result<TorusPoints> {
        let order = form.order();
        if order > cap {
            return Err(Error::TooLarge {
                what: format!("torus of order {}", order),
                order,
                cap,
            });
        }
        let rank = form.frobenius.len();
        let n = form.splitting_degree;
        let mut modulus: u128 = 1;
        for _ in 0..n {
            modulus = modulus
                .checked_mul(form.q as u128)
                .ok_or_else(|| Error::Invalid("splitting field too large".into()))?;
        }
        modulus -= 1;
        let snf = smith_normal_form(&form.frobenius);
        let big_n = BigInt::from(modulus);
        let mut gens = Vec::new();
        let mut gen_cols = Vec::new();
        for (k, d) in snf.diag.iter().enumerate() {
            assert!(
                (&big_n % d).is_zero(),
                "elementary divisor must divide q^n - 1"
            );
            let du = d.to_u128().unwrap();
            if du == 1 {
                continue;
            }
            // generator = V * (N/d) e_k  mod N
            let scale = modulus / du;
            let vector: Vec<u128> = (0..rank)
                .map(|i| {
                    let x = &snf.right[i][k] * BigInt::from(scale);
                    big_to_u128_mod(&x, modulus)
                })
                .collect();
            gens.push(PointGen { vector, order: du });
            gen_cols.push(k);
        }
        let vinv_big = mat_inverse_exact(&snf.right);
        let vinv: Vec<Vec<i128>> = vinv_big
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| big_to_u128_mod(x, modulus) as i128)
                    .collect()
            })
            .collect();
        let computed: u128 = gens.iter().map(|g| g.order).product();
        assert_eq!(computed, order, "solution count must equal |det(qw - 1)|");
        Ok(TorusPoints {
            rank,
            modulus,
            order,
            gens,
            vinv,
            gen_cols,
        })
    }

    /// Exponent vector of the point with the given mixed-radix coordinates.
    pub fn point(&self, coords: &[u128]) -> Vec<u128> {
        let mut a = vec![0u128; self.rank];
        for (g, &c) in self.gens.iter().zip(coords) {
            for i in 0..self.rank {
                a[i] = (a[i] + mulmod(g.vector[i], c, self.modulus)) % self.modulus;
            }
        }
        a
    }

    /// Mixed-radix coordinates of a point (inverse of `point`).
    pub fn coords(&self, a: &[u128]) -> Vec<u128> {
        let n = self.modulus;
        let full: Vec<u128> = (0..self.rank)
            .map(|k| {
                let mut acc: u128 = 0;
                for i in 0..self.rank {
                    acc = (acc + mulmod(modp(self.vinv[k][i], n), a[i], n)) % n;
                }
                acc
            })
            .collect();
        self.gen_cols
            .iter()
            .zip(self.gens.iter())
            .map(|(&col, g)| {
                let scale = n / g.order;
                assert!(full[col] % scale == 0, "point not in the solution lattice");
                full[col] / scale
            })
            .collect()
    }

    /// Apply a Weyl matrix to a point.
    pub fn act(&self, m: &IMat, a: &[u128]) -> Vec<u128> {
        let n = self.modulus;
        (0..self.rank)
            .map(|i| {
                let mut acc: u128 = 0;
                for j in 0..self.rank {
                    acc = (acc + mulmod(modp(m[i][j] as i128, n), a[j], n)) % n;
                }
                acc
            })
            .collect()
    }

    pub fn enumerate(&self) -> Vec<Vec<u128>> {
        let mut out = Vec::with_capacity(self.order as usize);
        let radices: Vec<u128> = self.gens.iter().map(|g| g.order).collect();
        let mut coords = vec![0u128; radices.len()];
        loop {
            out.push(self.point(&coords));
            if !odometer_step(&mut coords, &radices) {
                break;
            }
        }
        out
    }
}

fn mulmod(a: u128, b: u128, n: u128) -> u128 {
    // operands are < n <= 2^85 or so; use BigInt when a direct product would
    // overflow, which only happens for the largest shipped types
    if let (Some(p), true) = (a.checked_mul(b), true) {
        return p % n;
    }
    let p = BigInt::from(a) * BigInt::from(b);
    big_to_u128_mod(&p, n)
}

fn odometer_step(coords: &mut [u128], radices: &[u128]) -> bool {
    for k in 0..coords.len() {
        coords[k] += 1;
        if coords[k] < radices[k] {
            return true;
        }
        coords[k] = 0;
    }
    false
}

/// Streaming scan over all points, tracking every root value incrementally.
/// Calls `visit(root_values)` once per point; a root value of 0 means the
/// root evaluates to 1 there.
fn scan_root_values<F: FnMut(&[u128])>(
    rs: &RootSystemData,
    pts: &TorusPoints,
    mut visit: F,
) {
    let n = pts.modulus;
    let roots: Vec<Vec<u128>> = rs
        .roots
        .iter()
        .map(|r| {
            let pairing = rs.root_pairing(r);
            pairing.iter().map(|&x| modp(x as i128, n)).collect()
        })
        .collect();
    let nroots = roots.len();
    let ngens = pts.gens.len();
    // inc[r][k] = <root_r, gen_k> mod N
    let mut inc = vec![vec![0u128; ngens]; nroots];
    for (r, rho) in roots.iter().enumerate() {
        for (k, g) in pts.gens.iter().enumerate() {
            let mut acc: u128 = 0;
            for i in 0..pts.rank {
                acc = (acc + mulmod(rho[i], g.vector[i], n)) % n;
            }
            inc[r][k] = acc;
        }
    }
    let radices: Vec<u128> = pts.gens.iter().map(|g| g.order).collect();
    // level[k][r]: root values at the point with digits 0..k zeroed
    let mut vals = vec![0u128; nroots];
    let mut coords = vec![0u128; ngens];
    loop {
        visit(&vals);
        // odometer with incremental root values
        let mut k = 0;
        loop {
            if k == ngens {
                return;
            }
            coords[k] += 1;
            if coords[k] < radices[k] {
                for r in 0..nroots {
                    let v = vals[r] + inc[r][k];
                    vals[r] = if v >= n { v - n } else { v };
                }
                break;
            }
            // digit k wraps: subtract (d_k - 1) * inc, i.e. add inc once more
            // and then the wrap leaves d_k * inc = inc * d_k ≡ order*gen = 0
            // only when d_k * gen ≡ 0; handle by explicit removal instead
            for r in 0..nroots {
                let back = mulmod(radices[k] - 1, inc[r][k], n);
                let v = vals[r] + (n - back) % n;
                vals[r] = if v >= n { v - n } else { v };
            }
            coords[k] = 0;
            k += 1;
        }
    }
}

/// Count points with some root value equal to 1 in the residue field.
pub fn count_non_very_regular(
    rs: &RootSystemData,
    wc: &WeylClassRep,
    q: u64,
    cap: u128,
) -> Result<u128> {
    let form = TorusForm::new(rs, wc, q)?;
    let pts = TorusPoints::build(&form, cap)?;
    let mut count: u128 = 0;
    scan_root_values(rs, &pts, |vals| {
        if vals.iter().any(|&v| v == 0) {
            count += 1;
        }
    });
    Ok(count)
}

pub fn enumerate_torus_points(
    rs: &RootSystemData,
    wc: &WeylClassRep,
    q: u64,
    cap: u128,
) -> Result<(TorusPoints, Vec<Vec<u128>>)> {
    let form = TorusForm::new(rs, wc, q)?;
    let pts = TorusPoints::build(&form, cap)?;
    let list = pts.enumerate();
    Ok((pts, list))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HenniartMode {
    Weak,
    Strong,
}

#[derive(Clone, Debug)]
pub struct HenniartRecord {
    pub holds: bool,
    /// |T| / |T_nvreg|
    pub ratio: BigRational,
    pub bound: u64,
    pub order: u128,
    pub non_very_regular: u128,
}

pub fn henniart_check(
    mode: HenniartMode,
    rs: &RootSystemData,
    wc: &WeylClassRep,
    q: u64,
    cap: u128,
) -> Result<HenniartRecord> {
    let order = torus_order(rs, wc, q)?;
    let nvreg = count_non_very_regular(rs, wc, q, cap)?;
    let bound = match mode {
        HenniartMode::Weak => 2,
        HenniartMode::Strong => 2 * wc.rational_weyl_order,
    };
    let ratio = BigRational::new(BigInt::from(order), BigInt::from(nvreg));
    let holds = ratio > BigRational::from(BigInt::from(bound));
    Ok(HenniartRecord {
        holds,
        ratio,
        bound,
        order,
        non_very_regular: nvreg,
    })
}

/// Characters of T_w(F_q) with trivial stabilizer under the rational Weyl
/// group (enumerated as coordinate vectors against the SNF generators).
pub fn count_regular_characters(
    rs: &RootSystemData,
    wc: &WeylClassRep,
    q: u64,
    cap: u128,
) -> Result<u128> {
    let form = TorusForm::new(rs, wc, q)?;
    let pts = TorusPoints::build(&form, cap)?;
    let wt = rs.rational_weyl_group(wc, 200_000);
    let id = mat_identity(rs.rank);
    // For w in W_T and generator k: the coordinates of w^{-1} . g_k.
    let mut actions: Vec<Vec<Vec<u128>>> = Vec::new();
    for m in wt.iter().filter(|m| **m != id) {
        let minv = invert_weyl(m);
        let cols: Vec<Vec<u128>> = pts
            .gens
            .iter()
            .map(|g| pts.coords(&pts.act(&minv, &g.vector)))
            .collect();
        actions.push(cols);
    }
    let radices: Vec<u128> = pts.gens.iter().map(|g| g.order).collect();
    let l = radices.iter().copied().max().unwrap_or(1);
    let mut b = vec![0u128; radices.len()];
    let mut regular: u128 = 0;
    loop {
        let mut free = true;
        'ws: for cols in &actions {
            // w stabilizes chi_b iff for all k: sum_j (L/d_j) gamma_k[j] b_j
            // == (L/d_k) b_k  mod L
            for (k, col) in cols.iter().enumerate() {
                let mut lhs: u128 = 0;
                for (j, &g) in col.iter().enumerate() {
                    lhs = (lhs + mulmod(mulmod(l / radices[j], g, l), b[j] % l, l)) % l;
                }
                let rhs = mulmod(l / radices[k], b[k], l);
                if lhs != rhs {
                    continue 'ws; // this w moves chi_b
                }
            }
            free = false; // some nontrivial w fixes chi_b
            break;
        }
        if free {
            regular += 1;
        }
        if !odometer_step(&mut b, &radices) {
            break;
        }
    }
    Ok(regular)
}

fn invert_weyl(m: &IMat) -> IMat {
    // finite order, so invert by powering
    let ord = crate::roots::mat_order(m, 1000).expect("weyl element order");
    crate::roots::mat_pow(m, ord - 1)
}

/// One row of a Henniart threshold scan.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub q: u64,
    pub order: u128,
    pub non_very_regular: u128,
    pub weak_holds: bool,
    pub strong_holds: bool,
}

pub fn threshold_scan(
    rs: &RootSystemData,
    wc: &WeylClassRep,
    q_list: &[u64],
    cap: u128,
) -> Vec<(u64, Result<ScanRow>)> {
    q_list
        .iter()
        .map(|&q| {
            let row = (|| {
                let weak = henniart_check(HenniartMode::Weak, rs, wc, q, cap)?;
                let strong_bound = 2 * wc.rational_weyl_order;
                let strong_holds = weak.ratio > BigRational::from(BigInt::from(strong_bound));
                Ok(ScanRow {
                    q,
                    order: weak.order,
                    non_very_regular: weak.non_very_regular,
                    weak_holds: weak.holds,
                    strong_holds,
                })
            })();
            (q, row)
        })
        .collect()
}

/// The pair sum over the non-very-regular locus that controls the small-q
/// counterexample analysis: sum over s in T_nvreg, w in W_T of
/// theta(s) * conj(theta^w(s)).
pub fn nvreg_pair_sum(
    rs: &RootSystemData,
    wc: &WeylClassRep,
    q: u64,
    theta: &[u128],
    cap: u128,
) -> Result<Cyc> {
    let form = TorusForm::new(rs, wc, q)?;
    let pts = TorusPoints::build(&form, cap)?;
    assert_eq!(theta.len(), pts.gens.len());
    let wt = rs.rational_weyl_group(wc, 200_000);
    let radices: Vec<u128> = pts.gens.iter().map(|g| g.order).collect();
    let l = radices.iter().copied().max().unwrap_or(1);
    // chi(point) = zeta_L ^ (sum_k (L/d_k) theta_k coord_k)
    let eval = |coords: &[u128]| -> u128 {
        let mut e: u128 = 0;
        for (k, &c) in coords.iter().enumerate() {
            e = (e + mulmod(mulmod(l / radices[k], theta[k] % radices[k], l), c, l)) % l;
        }
        e
    };
    let mut acc = CycAcc::new(l as u32);
    let all = pts.enumerate();
    for a in &all {
        // non-very-regular test
        let nvreg = rs.roots.iter().any(|r| {
            let rho = rs.root_pairing(r);
            let mut v: u128 = 0;
            for i in 0..pts.rank {
                v = (v + mulmod(modp(rho[i] as i128, pts.modulus), a[i], pts.modulus))
                    % pts.modulus;
            }
            v == 0
        });
        if !nvreg {
            continue;
        }
        let ca = pts.coords(a);
        let e1 = eval(&ca);
        for m in &wt {
            let cb = pts.coords(&pts.act(&invert_weyl(m), a));
            let e2 = eval(&cb);
            // theta(s) * conj(theta^w(s)) = zeta^(e1 - e2)
            let e = ((e1 + l) - e2) % l;
            acc.add_root(e as u32);
        }
    }
    Ok(acc.to_cyc())
}

//! The Heisenberg group over F_p attached to a symplectic space, its unique
//! irreducible representation with prescribed central character (Schroedinger
//! model on a Lagrangian), and its extension along a cyclic group of
//! symplectic automorphisms.
//!
//! The extension operator is produced by averaging an intertwiner and then
//! rescaled so multiplicativity holds exactly; the scalar is pinned by
//! matching traces against an extension character computed independently by
//! the Dixon method on the finite group (cyclic) x| H(V).

use crate::chartab::small_group_character_rows;
use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::smallgroup::SmallGroup;

pub type CycMat = Vec<Vec<Cyc>>;

pub fn mat_mul(a: &CycMat, b: &CycMat) -> CycMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Cyc::zero(1);
                    for k in 0..n {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_trace(a: &CycMat) -> Cyc {
    let mut acc = Cyc::zero(1);
    for i in 0..a.len() {
        acc = acc.add(&a[i][i]);
    }
    acc
}

pub fn mat_scale(a: &CycMat, c: &Cyc) -> CycMat {
    a.iter()
        .map(|row| row.iter().map(|x| x.mul(c)).collect())
        .collect()
}

pub fn mat_identity(n: usize) -> CycMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Cyc::one() } else { Cyc::zero(1) })
                .collect()
        })
        .collect()
}

pub fn mat_eq(a: &CycMat, b: &CycMat) -> bool {
    a.iter().zip(b).all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| x == y))
}

/// The Heisenberg-Weil model on a symplectic F_p-space of dimension 2m with
/// central character psi_0 = zeta_p.
pub struct HeisenbergWeil {
    pub p: u64,
    pub m: usize,
    /// matrix dimension p^m
    pub dim: usize,
    /// symplectic basis vectors (columns), in the original V-coordinates
    pub sympl_basis: Vec<Vec<u16>>,
    basis_inv: Vec<Vec<u16>>,
    half: u16,
}

fn modp_inv(a: u64, p: u64) -> u64 {
    let mut x = 1u64;
    for _ in 0..p - 2 {
        x = x * a % p;
    }
    x
}

fn mat_inv_modp(a: &[Vec<u16>], p: u64) -> Vec<Vec<u16>> {
    let n = a.len();
    let mut aug: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = a[i].iter().map(|&x| x as u64).collect();
            for j in 0..n {
                row.push(u64::from(i == j));
            }
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| aug[r][c] % p != 0).expect("singular");
        aug.swap(c, piv);
        let inv = modp_inv(aug[c][c] % p, p);
        for x in aug[c].iter_mut() {
            *x = *x % p * inv % p;
        }
        let row_c = aug[c].clone();
        for r in 0..n {
            if r != c && aug[r][c] % p != 0 {
                let f = aug[r][c] % p;
                for j in 0..2 * n {
                    aug[r][j] = (aug[r][j] + (p - f) * row_c[j]) % p;
                }
            }
        }
    }
    (0..n)
        .map(|i| (n..2 * n).map(|j| (aug[i][j] % p) as u16).collect())
        .collect()
}

impl HeisenbergWeil {
    /// Form is an alternating 2m x 2m matrix over F_p; must be nondegenerate.
    pub fn new(p: u64, form: &[Vec<u16>]) -> Result<HeisenbergWeil> {
        let dim_v = form.len();
        if dim_v % 2 != 0 || dim_v == 0 {
            return Err(Error::Invalid("symplectic space must have positive even dimension".into()));
        }
        let m = dim_v / 2;
        let omega = |u: &[u16], v: &[u16]| -> u16 {
            let mut acc = 0u64;
            for i in 0..dim_v {
                for j in 0..dim_v {
                    acc = (acc + u[i] as u64 * form[i][j] as u64 % p * v[j] as u64) % p;
                }
            }
            acc as u16
        };
        // symplectic basis by pairing-and-projecting
        let mut rest: Vec<Vec<u16>> = (0..dim_v)
            .map(|i| (0..dim_v).map(|j| u16::from(i == j)).collect())
            .collect();
        let mut xs: Vec<Vec<u16>> = Vec::new();
        let mut ys: Vec<Vec<u16>> = Vec::new();
        while !rest.is_empty() {
            let u = rest.remove(0);
            if u.iter().all(|&c| c == 0) {
                continue;
            }
            let vpos = rest
                .iter()
                .position(|v| omega(&u, v) != 0)
                .ok_or_else(|| Error::Invalid("degenerate form: genericity violated".into()))?;
            let mut v = rest.remove(vpos);
            let s = modp_inv(omega(&u, &v) as u64, p);
            for c in v.iter_mut() {
                *c = (*c as u64 * s % p) as u16;
            }
            // project the remainder onto the omega-complement of <u, v>
            for w in rest.iter_mut() {
                let a = omega(&v, w) as u64; // coefficient of u
                let b = omega(&u, w) as u64; // coefficient of -v
                for i in 0..dim_v {
                    let add_u = a * u[i] as u64 % p;
                    let sub_v = b * v[i] as u64 % p;
                    w[i] = ((w[i] as u64 + add_u + (p - sub_v) % p * 1) % p) as u16;
                    let _ = sub_v;
                    // w' = w + omega(v,w) u - omega(u,w) v
                    w[i] = ((w[i] as u64 + (p - b * v[i] as u64 % p) % p) % p) as u16;
                }
            }
            xs.push(u);
            ys.push(v);
        }
        if xs.len() != m {
            return Err(Error::Invalid("degenerate form".into()));
        }
        let mut basis: Vec<Vec<u16>> = Vec::new();
        basis.extend(xs.iter().cloned());
        basis.extend(ys.iter().cloned());
        // verify the standard relations
        for i in 0..m {
            for j in 0..m {
                assert_eq!(omega(&basis[i], &basis[m + j]), u16::from(i == j));
                assert_eq!(omega(&basis[i], &basis[j]), 0);
                assert_eq!(omega(&basis[m + i], &basis[m + j]), 0);
            }
        }
        // columns of the change-of-basis matrix are the basis vectors
        let cols: Vec<Vec<u16>> = (0..dim_v)
            .map(|r| (0..dim_v).map(|c| basis[c][r]).collect())
            .collect();
        let basis_inv = mat_inv_modp(&cols, p);
        Ok(HeisenbergWeil {
            p,
            m,
            dim: (p as usize).pow(m as u32),
            sympl_basis: basis,
            basis_inv,
            half: (modp_inv(2, p)) as u16,
        })
    }

    /// (X, Y) coordinates against the symplectic basis.
    pub fn to_xy(&self, v: &[u16]) -> (Vec<u16>, Vec<u16>) {
        let n = 2 * self.m;
        let coords: Vec<u16> = (0..n)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..n {
                    acc = (acc + self.basis_inv[r][c] as u64 * v[c] as u64) % self.p;
                }
                acc as u16
            })
            .collect();
        (coords[..self.m].to_vec(), coords[self.m..].to_vec())
    }

    fn enc(&self, w: &[u16]) -> usize {
        w.iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.p as usize + d as usize)
    }

    fn dec(&self, mut x: usize) -> Vec<u16> {
        let mut out = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            out.push((x % self.p as usize) as u16);
            x /= self.p as usize;
        }
        out
    }

    /// Schroedinger operator of the Heisenberg element (v, z) with the
    /// symmetric cocycle (v,z)(v',z') = (v+v', z+z'+ (1/2) omega(v,v')).
    pub fn heisenberg_matrix(&self, v: &[u16], z: u16) -> CycMat {
        let (x, y) = self.to_xy(v);
        let p = self.p;
        let mut out = vec![vec![Cyc::zero(p as u32); self.dim]; self.dim];
        for ucode in 0..self.dim {
            let u = self.dec(ucode);
            // row index u - X
            let row: Vec<u16> = (0..self.m)
                .map(|i| ((u[i] as u64 + p - x[i] as u64) % p) as u16)
                .collect();
            // exponent z + (u - X) . Y + (1/2) X . Y
            let mut e = z as u64 % p;
            for i in 0..self.m {
                e = (e + row[i] as u64 * y[i] as u64) % p;
                e = (e + self.half as u64 * x[i] as u64 % p * y[i] as u64) % p;
            }
            out[self.enc(&row)][ucode] = Cyc::root_of_unity(p as u32, e as i64);
        }
        out
    }

    /// trace of M * rho(v, z) in O(dim), using that the Heisenberg operator
    /// has a single nonzero entry per column
    pub fn trace_with_heisenberg(&self, m: &CycMat, v: &[u16], z: u16) -> Cyc {
        let (x, y) = self.to_xy(v);
        let p = self.p;
        let mut acc = Cyc::zero(1);
        for ucode in 0..self.dim {
            let u = self.dec(ucode);
            let row: Vec<u16> = (0..self.m)
                .map(|i| ((u[i] as u64 + p - x[i] as u64) % p) as u16)
                .collect();
            let mut e = z as u64 % p;
            for i in 0..self.m {
                e = (e + row[i] as u64 * y[i] as u64) % p;
                e = (e + self.half as u64 * x[i] as u64 % p * y[i] as u64) % p;
            }
            let val = Cyc::root_of_unity(p as u32, e as i64);
            acc = acc.add(&m[ucode][self.enc(&row)].mul(&val));
        }
        acc
    }

    /// omega(v, v') read off the symplectic coordinates.
    pub fn form_xy(&self, v: &[u16], w: &[u16]) -> u16 {
        let (xv, yv) = self.to_xy(v);
        let (xw, yw) = self.to_xy(w);
        let p = self.p;
        let mut acc = 0u64;
        for i in 0..self.m {
            acc = (acc + xv[i] as u64 * yw[i] as u64) % p;
            acc = (acc + p - yv[i] as u64 * xw[i] as u64 % p) % p;
        }
        acc as u16
    }
}

/// The extension of the Heisenberg representation along a cyclic group of
/// symplectic automorphisms, normalized to a genuine representation.
pub struct WeilExtension {
    /// operator of the chosen generator; (omega_s)^d = 1 exactly
    pub omega_s: CycMat,
    pub d: u64,
    /// trace of omega_s acting with no Heisenberg part
    pub trace_s: Cyc,
}

/// `s_matrix` acts on the original V-coordinates, is symplectic for the form
/// implicit in `hw`, and has order d. Returns the extension with the
/// deterministic (first in sorted character order) choice among the d
/// possible linearizations.
pub fn extend_cyclic(hw: &HeisenbergWeil, s_matrix: &[Vec<u16>], d: u64) -> Result<WeilExtension> {
    let p = hw.p;
    let nv = 2 * hw.m;
    let apply_s = |v: &[u16], times: u64| -> Vec<u16> {
        let mut cur = v.to_vec();
        for _ in 0..times {
            cur = (0..nv)
                .map(|r| {
                    let mut acc = 0u64;
                    for c in 0..nv {
                        acc = (acc + s_matrix[r][c] as u64 * cur[c] as u64) % p;
                    }
                    acc as u16
                })
                .collect();
        }
        cur
    };
    // sanity: s preserves the form and has order d
    {
        let e1: Vec<u16> = (0..nv).map(|i| u16::from(i == 0)).collect();
        assert_eq!(apply_s(&e1, d), e1);
        for i in 0..nv {
            for j in 0..nv {
                let a: Vec<u16> = (0..nv).map(|k| u16::from(k == i)).collect();
                let b: Vec<u16> = (0..nv).map(|k| u16::from(k == j)).collect();
                assert_eq!(
                    hw.form_xy(&apply_s(&a, 1), &apply_s(&b, 1)),
                    hw.form_xy(&a, &b),
                    "automorphism is not symplectic"
                );
            }
        }
    }

    // the group Gamma = Z/d x| H(V), encoded as ((j * p^nv + venc) * p + z)
    let pv = (p as usize).pow(nv as u32);
    let n_gamma = d as usize * pv * p as usize;
    let enc_v = |v: &[u16]| -> usize {
        v.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
    };
    let dec_gamma = |idx: usize| -> (u64, Vec<u16>, u16) {
        let z = (idx % p as usize) as u16;
        let rest = idx / p as usize;
        let mut venc = rest % pv;
        let j = (rest / pv) as u64;
        let mut v = Vec::with_capacity(nv);
        for _ in 0..nv {
            v.push((venc % p as usize) as u16);
            venc /= p as usize;
        }
        (j, v, z)
    };
    let mut mul = vec![0u32; n_gamma * n_gamma];
    for a in 0..n_gamma {
        let (j1, v1, z1) = dec_gamma(a);
        for b in 0..n_gamma {
            let (j2, v2, z2) = dec_gamma(b);
            let sv2 = apply_s(&v2, j1);
            let v: Vec<u16> = (0..nv)
                .map(|i| ((v1[i] as u64 + sv2[i] as u64) % p) as u16)
                .collect();
            let z = (z1 as u64 + z2 as u64 + hw.half as u64 * hw.form_xy(&v1, &sv2) as u64) % p;
            let j = (j1 + j2) % d;
            let idx = (j as usize * pv + enc_v(&v)) * p as usize + z as usize;
            mul[a * n_gamma + b] = idx as u32;
        }
    }
    let sg = SmallGroup::from_mul_table(mul, n_gamma);
    let (cls, rows) = small_group_character_rows(&sg)?;
    // extensions of the Heisenberg representation: degree p^m, central
    // character psi_0 on (0, 0, 1)
    let dim_c = Cyc::from_int(hw.dim as i64);
    let z_gen = 1usize; // (j=0, v=0, z=1)
    let psi = Cyc::root_of_unity(p as u32, 1);
    let mut candidates: Vec<Vec<Cyc>> = Vec::new();
    for row in &rows {
        let id_class = cls.class_of[sg.id as usize] as usize;
        if row[id_class] != dim_c {
            continue;
        }
        let zc = cls.class_of[z_gen] as usize;
        if row[zc] != dim_c.mul(&psi) {
            continue;
        }
        candidates.push(row.clone());
    }
    assert_eq!(
        candidates.len() as u64,
        d,
        "expected exactly d linearizations"
    );
    candidates.sort_by_key(|row| {
        row.iter().map(|v| v.to_e_string()).collect::<Vec<_>>()
    });
    let chi = &candidates[0];
    let chi_at = |j: u64, v: &[u16], z: u16| -> Cyc {
        let idx = (j as usize * pv + enc_v(v)) * p as usize + z as usize;
        chi[cls.class_of[idx] as usize].clone()
    };

    // averaged intertwiner W rho(v, z) = rho(S v, z) W
    
    let mut w_mat: Option<CycMat> = None;
    'seed: for seed in 0..hw.dim {
        let mut acc = vec![vec![Cyc::zero(1); hw.dim]; hw.dim];
        for venc in 0..pv {
            let mut vv = Vec::with_capacity(nv);
            let mut x = venc;
            for _ in 0..nv {
                vv.push((x % p as usize) as u16);
                x /= p as usize;
            }
            let rho_sv = hw.heisenberg_matrix(&apply_s(&vv, 1), 0);
            let neg_v: Vec<u16> = vv.iter().map(|&c| ((p - c as u64) % p) as u16).collect();
            let rho_vinv = hw.heisenberg_matrix(&neg_v, 0);
            // C = E_{seed,seed}
            for i in 0..hw.dim {
                for j in 0..hw.dim {
                    let t = rho_sv[i][seed].mul(&rho_vinv[seed][j]);
                    acc[i][j] = acc[i][j].add(&t);
                }
            }
        }
        if acc.iter().any(|row| row.iter().any(|x| !x.is_zero())) {
            w_mat = Some(acc);
            break 'seed;
        }
    }
    let w = w_mat.ok_or_else(|| Error::Invalid("intertwiner averaging collapsed".into()))?;
    // normalize by trace matching against chi on the s-coset
    let mut omega_s: Option<CycMat> = None;
    'outer: for venc in 0..pv {
        let mut vv = Vec::with_capacity(nv);
        let mut x = venc;
        for _ in 0..nv {
            vv.push((x % p as usize) as u16);
            x /= p as usize;
        }
        for z in 0..p as u16 {
            let target = chi_at(1, &vv, z);
            if target.is_zero() {
                continue;
            }
            let tr = mat_trace(&mat_mul(&w, &hw.heisenberg_matrix(&vv, z)));
            if tr.is_zero() {
                continue;
            }
            // mu = target / tr: division via conjugate
            let denom_norm = tr.abs2().try_to_rat().expect("trace norm should be rational");
            let mu = target
                .mul(&tr.conj())
                .scale(&(crate::cyclotomic::Rat::from(num::BigInt::from(1)) / denom_norm));
            omega_s = Some(mat_scale(&w, &mu));
            break 'outer;
        }
    }
    let omega_s = omega_s.ok_or_else(|| Error::Invalid("no usable trace for normalization".into()))?;
    // verify (omega_s)^d = 1 and the intertwining property
    let mut pw = mat_identity(hw.dim);
    for _ in 0..d {
        pw = mat_mul(&pw, &omega_s);
    }
    if !mat_eq(&pw, &mat_identity(hw.dim)) {
        return Err(Error::Invalid(
            "weil operator normalization failed the defining relation".into(),
        ));
    }
    for venc in (0..pv).step_by(2.max(pv / 7)) {
        let mut vv = Vec::with_capacity(nv);
        let mut x = venc;
        for _ in 0..nv {
            vv.push((x % p as usize) as u16);
            x /= p as usize;
        }
        let lhs = mat_mul(&omega_s, &hw.heisenberg_matrix(&vv, 0));
        let rhs = mat_mul(&hw.heisenberg_matrix(&apply_s(&vv, 1), 0), &omega_s);
        assert!(mat_eq(&lhs, &rhs), "omega_s does not intertwine");
    }
    // the full extended trace function must reproduce chi
    {
        let mut pow_w = mat_identity(hw.dim);
        for j in 0..d {
            for venc in 0..pv.min(27) {
                let mut vv = Vec::with_capacity(nv);
                let mut x = venc;
                for _ in 0..nv {
                    vv.push((x % p as usize) as u16);
                    x /= p as usize;
                }
                for z in 0..p as u16 {
                    let op = mat_mul(&pow_w, &hw.heisenberg_matrix(&vv, z));
                    assert_eq!(mat_trace(&op), chi_at(j, &vv, z), "trace mismatch with Dixon");
                }
            }
            pow_w = mat_mul(&pow_w, &omega_s);
        }
    }
    let trace_s = mat_trace(&omega_s);
    Ok(WeilExtension {
        omega_s,
        d,
        trace_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard_form(p: u64) -> Vec<Vec<u16>> {
        // 2-dimensional standard symplectic form over F_p
        vec![vec![0, 1], vec![(p - 1) as u16, 0]]
    }

    #[test]
    fn heisenberg_is_a_representation() {
        let hw = HeisenbergWeil::new(5, &standard_form(5)).unwrap();
        assert_eq!(hw.dim, 5);
        // multiplicativity over all pairs of H(V) with the 1/2-cocycle
        for v1e in 0..25u16 {
            let v1 = vec![v1e % 5, v1e / 5];
            for z1 in 0..5u16 {
                let a = hw.heisenberg_matrix(&v1, z1);
                for v2e in [0u16, 7, 13, 21] {
                    let v2 = vec![v2e % 5, v2e / 5];
                    for z2 in [0u16, 2] {
                        let b = hw.heisenberg_matrix(&v2, z2);
                        let v12 = vec![(v1[0] + v2[0]) % 5, (v1[1] + v2[1]) % 5];
                        let z12 =
                            (z1 as u64 + z2 as u64 + hw.half as u64 * hw.form_xy(&v1, &v2) as u64)
                                % 5;
                        let c = hw.heisenberg_matrix(&v12, z12 as u16);
                        assert!(mat_eq(&mat_mul(&a, &b), &c));
                    }
                }
            }
        }
        // central element acts by psi_0
        let center = hw.heisenberg_matrix(&[0, 0], 1);
        let expect = mat_scale(&mat_identity(5), &Cyc::root_of_unity(5, 1));
        assert!(mat_eq(&center, &expect));
        // trace at identity = p^(dim V/2)
        assert_eq!(
            mat_trace(&hw.heisenberg_matrix(&[0, 0], 0)),
            Cyc::from_int(5)
        );
    }

    #[test]
    fn cyclic_extension_order3() {
        // an order-3 symplectic automorphism of F_5^2: companion of x^2+x+1
        let hw = HeisenbergWeil::new(5, &standard_form(5)).unwrap();
        let s = vec![vec![0u16, 4], vec![1, 4]]; // det 1, trace -1
        let ext = extend_cyclic(&hw, &s, 3).unwrap();
        // s has no nonzero fixed vector, so |trace|^2 = 1
        let norm = ext.trace_s.abs2();
        assert_eq!(norm, Cyc::one());
    }
}

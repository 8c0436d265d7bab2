//! The jet Lie algebra sl2(F_q[t]/t^(r+1)): truncated logarithm and
//! exponential, generic dual elements, coadjoint orbits, Fourier transforms
//! of orbit indicators, and the Green-function identity.
//!
//! The dual is identified with the Lie algebra through the trace form; the
//! additive character of level r+1 reads off the t^r coefficient composed
//! with the field trace.

use crate::cyclotomic::{Cyc, CycAcc};
use crate::error::{Error, Result};
use crate::group::{JetGroup, Mat2};
use crate::yu::{green_fks, YuPackage, ZeroToralDatum};

/// A traceless 2x2 matrix over the jet ring (same encoding as group
/// elements, but no determinant condition).
pub type LieElt = [u16; 4];

pub fn lie_key(x: &LieElt) -> u64 {
    ((x[0] as u64) << 48) | ((x[1] as u64) << 32) | ((x[2] as u64) << 16) | (x[3] as u64)
}

fn mat_sub(g: &JetGroup, a: &Mat2, b: &Mat2) -> LieElt {
    [
        g.ring.sub(a[0], b[0]),
        g.ring.sub(a[1], b[1]),
        g.ring.sub(a[2], b[2]),
        g.ring.sub(a[3], b[3]),
    ]
}

fn mat_mul_raw(g: &JetGroup, a: &[u16; 4], b: &[u16; 4]) -> [u16; 4] {
    let r = &g.ring;
    [
        r.add(r.mul(a[0], b[0]), r.mul(a[1], b[2])),
        r.add(r.mul(a[0], b[1]), r.mul(a[1], b[3])),
        r.add(r.mul(a[2], b[0]), r.mul(a[3], b[2])),
        r.add(r.mul(a[2], b[1]), r.mul(a[3], b[3])),
    ]
}

fn mat_scale_raw(g: &JetGroup, a: &[u16; 4], c: u16) -> [u16; 4] {
    let r = &g.ring;
    [r.mul(a[0], c), r.mul(a[1], c), r.mul(a[2], c), r.mul(a[3], c)]
}

fn mat_add_raw(g: &JetGroup, a: &[u16; 4], b: &[u16; 4]) -> [u16; 4] {
    let r = &g.ring;
    [
        r.add(a[0], b[0]),
        r.add(a[1], b[1]),
        r.add(a[2], b[2]),
        r.add(a[3], b[3]),
    ]
}

pub fn is_topologically_unipotent(g: &JetGroup, u: &Mat2) -> bool {
    // reduction mod t is unipotent: trace 2, det 1
    let f = &g.ring.field;
    let a = g.ring.residue(u[0]);
    let b = g.ring.residue(u[1]);
    let c = g.ring.residue(u[2]);
    let d = g.ring.residue(u[3]);
    f.add(a, d) == f.from_int(2) && f.sub(f.mul(a, d), f.mul(b, c)) == 1
}

/// log(u) = N - N^2/2 + N^3/3 for N = u - 1; needs p >= 5 since N^4 = 0.
pub fn truncated_log(g: &JetGroup, u: &Mat2) -> Result<LieElt> {
    if g.p < 5 {
        return Err(Error::BadCharacteristic(g.p, "log needs p >= 5".into()));
    }
    if !is_topologically_unipotent(g, u) {
        return Err(Error::Invalid("log is defined on topologically unipotent elements".into()));
    }
    let f = &g.ring.field;
    let n = mat_sub(g, u, &g.identity());
    let n2 = mat_mul_raw(g, &n, &n);
    let n3 = mat_mul_raw(g, &n2, &n);
    let n4 = mat_mul_raw(g, &n3, &n);
    assert_eq!(n4, [0, 0, 0, 0], "unipotent part is not 4-step nilpotent");
    let half = f.inv(f.from_int(2));
    let third = f.inv(f.from_int(3));
    let mut x = n;
    x = mat_sub_lie(g, &x, &mat_scale_raw(g, &n2, half));
    x = mat_add_raw(g, &x, &mat_scale_raw(g, &n3, third));
    // traceless by construction for SL2; check
    debug_assert_eq!(g.ring.add(x[0], x[3]), 0);
    Ok(x)
}

fn mat_sub_lie(g: &JetGroup, a: &[u16; 4], b: &[u16; 4]) -> [u16; 4] {
    let r = &g.ring;
    [
        r.sub(a[0], b[0]),
        r.sub(a[1], b[1]),
        r.sub(a[2], b[2]),
        r.sub(a[3], b[3]),
    ]
}

/// exp(X) = 1 + X + X^2/2 + X^3/6 on topologically nilpotent X.
pub fn truncated_exp(g: &JetGroup, x: &LieElt) -> Result<Mat2> {
    if g.p < 5 {
        return Err(Error::BadCharacteristic(g.p, "exp needs p >= 5".into()));
    }
    let f = &g.ring.field;
    let x2 = mat_mul_raw(g, x, x);
    let x3 = mat_mul_raw(g, &x2, x);
    let x4 = mat_mul_raw(g, &x3, x);
    if x4 != [0, 0, 0, 0] {
        return Err(Error::Invalid("exp needs a topologically nilpotent element".into()));
    }
    let half = f.inv(f.from_int(2));
    let sixth = f.inv(f.from_int(6));
    let mut m = mat_add_raw(g, &g.identity(), x);
    m = mat_add_raw(g, &m, &mat_scale_raw(g, &x2, half));
    m = mat_add_raw(g, &m, &mat_scale_raw(g, &x3, sixth));
    Ok(m)
}

/// The generic dual element X*_r solving theta(exp Y) = psi_r(<X*_r, Y>) on
/// the positive-depth toral layers; returned in the elliptic toral line.
pub fn generic_dual_element(g: &JetGroup, datum: &ZeroToralDatum) -> Result<LieElt> {
    let f = &g.ring.field;
    let ring = &g.ring;
    let eps = f.nonsquare();
    let q = g.q as u16;
    // X* = (alpha_r + t alpha_(r-1) + ...) T0 with T0 = [[0, eps], [1, 0]];
    // depth layers below r contribute lower t-powers
    let r = g.r as usize;
    // candidate coefficient tuples (alpha_r, ..., alpha_1), alpha_r != 0
    let mut cands: Vec<Vec<u16>> = vec![vec![]];
    for _ in 0..r {
        let mut next = Vec::new();
        for c in &cands {
            for a in 0..q {
                let mut cc = c.clone();
                cc.push(a);
                next.push(cc);
            }
        }
        cands = next;
    }
    let psi_exp = |x_star: &LieElt, y: &LieElt| -> u64 {
        // coefficient of t^r in tr(X* Y), traced to F_p
        let prod = mat_mul_raw(g, x_star, y);
        let tr = ring.add(prod[0], prod[3]);
        f.trace_to_prime(ring.coeff(tr, g.r)) as u64
    };
    'cand: for c in cands {
        if c[0] == 0 {
            continue; // not generic at the deepest layer
        }
        // X* = sum_k c[k] t^k T0 (c[0] is the constant term)
        let mut bco = vec![0u16; r + 1];
        for (k, &a) in c.iter().enumerate() {
            bco[k] = a;
        }
        let scalar = ring.from_coeffs(&bco);
        let x_star: LieElt = [
            0,
            ring.mul(scalar, ring.scalar(eps)),
            scalar,
            0,
        ];
        // check theta(exp Y) = psi(<X*, Y>) for Y in the positive toral part
        for layer in 1..=g.r {
            for beta in 0..q {
                let mut yco = vec![0u16; r + 1];
                yco[layer as usize] = beta;
                let s = ring.from_coeffs(&yco);
                let y: LieElt = [0, ring.mul(s, ring.scalar(eps)), s, 0];
                let t_elem = truncated_exp(g, &y)?;
                let ti = g.index_of(&t_elem);
                let theta_val = datum.theta_value(ti);
                let expect = Cyc::root_of_unity(g.p as u32, psi_exp(&x_star, &y) as i64);
                if theta_val != expect {
                    continue 'cand;
                }
            }
        }
        return Ok(x_star);
    }
    Err(Error::Invalid(
        "no dual element matches theta on the toral layers".into(),
    ))
}

/// Root values of a toral dual element are distinct iff it is regular; for
/// the elliptic line this just means the deepest coefficient is nonzero.
pub fn is_regular_dual(g: &JetGroup, x: &LieElt) -> bool {
    g.ring.residue(x[2]) != 0 || g.ring.residue(x[1]) != 0
}

/// Full coadjoint orbit (through the trace-form identification this is the
/// adjoint orbit) and its stabilizer order.
pub fn coadjoint_orbit(g: &JetGroup, x: &LieElt) -> (Vec<u64>, usize) {
    let n = g.order() as u32;
    let mut orbit: Vec<u64> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut stab = 0usize;
    for i in 0..n {
        let gm = g.element(i);
        let y = mat_mul_raw(g, &mat_mul_raw(g, &gm, x), &g.inv(&gm));
        if y == *x {
            stab += 1;
        }
        if seen.insert(lie_key(&y)) {
            orbit.push(lie_key(&y));
        }
    }
    orbit.sort_unstable();
    assert_eq!(orbit.len() * stab, g.order(), "orbit-stabilizer mismatch");
    (orbit, stab)
}

fn unkey(key: u64) -> LieElt {
    [
        ((key >> 48) & 0xffff) as u16,
        ((key >> 32) & 0xffff) as u16,
        ((key >> 16) & 0xffff) as u16,
        (key & 0xffff) as u16,
    ]
}

/// FT(1_orbit)(Y) = sum over the orbit of psi_r(<Y*, Y>), with an optional
/// rescaling of the additive character by lambda.
pub fn fourier_indicator(g: &JetGroup, orbit: &[u64], y: &LieElt, lambda: u16) -> Cyc {
    let f = &g.ring.field;
    let ring = &g.ring;
    let p = g.p as u32;
    let mut acc = CycAcc::new(p);
    for &key in orbit {
        let ystar = unkey(key);
        let prod = mat_mul_raw(g, &ystar, y);
        let tr = ring.add(prod[0], prod[3]);
        let e = f.trace_to_prime(f.mul(lambda, ring.coeff(tr, g.r)));
        acc.add_root(e as u32);
    }
    acc.to_cyc()
}

pub struct SpringerReport {
    pub global_sign: i64,
    pub orbit_size: usize,
    pub checked: usize,
    pub defects: Vec<u32>,
    /// q^((r+1)) = q^(dim(G_r/T_r)/2)
    pub factor: u128,
}

/// The Green-function identity: for every topologically unipotent u,
/// FT(1_orbit)(log u) = c q^(dim(G_r/T_r)/2) Q(theta+)(u) with one global
/// sign c.
pub fn verify_springer(
    g: &JetGroup,
    datum: &ZeroToralDatum,
    pkg: &YuPackage,
    lambda: u16,
) -> Result<SpringerReport> {
    if g.q < 5 {
        return Err(Error::Invalid(
            "the torus needs a regular semisimple element (q >= 5)".into(),
        ));
    }
    // the dual element must be solved against the lambda-scaled character
    let x_star = generic_dual_element_scaled(g, datum, lambda)?;
    if !is_regular_dual(g, &x_star) {
        return Err(Error::Invalid("dual element is not regular".into()));
    }
    let (orbit, _stab) = coadjoint_orbit(g, &x_star);
    let factor: u128 = (g.q as u128).pow(g.r + 1);
    let cls = g.classes();
    let green = green_fks(g, pkg);
    let green_at = |c: usize| -> Option<&Cyc> {
        green.values.iter().find(|(k, _)| *k == c).map(|(_, v)| v)
    };
    let mut global_sign: Option<i64> = None;
    let mut defects = Vec::new();
    let mut checked = 0usize;
    for i in 0..g.order() as u32 {
        let u = g.element(i);
        if !is_topologically_unipotent(g, &u) {
            continue;
        }
        checked += 1;
        let lu = truncated_log(g, &u)?;
        let lhs = fourier_indicator(g, &orbit, &lu, lambda);
        let c = cls.class_of[i as usize] as usize;
        let q_val = green_at(c).expect("unipotent class missing");
        let rhs = q_val.scale(&crate::cyclotomic::rat_int(factor as i64));
        let sign = if lhs == rhs {
            1
        } else if lhs == rhs.neg() {
            -1
        } else {
            defects.push(i);
            continue;
        };
        match global_sign {
            None => global_sign = Some(sign),
            Some(s0) => {
                if s0 != sign && !lhs.is_zero() {
                    defects.push(i);
                }
            }
        }
    }
    Ok(SpringerReport {
        global_sign: global_sign.unwrap_or(1),
        orbit_size: orbit.len(),
        checked,
        defects,
        factor,
    })
}

/// Like `generic_dual_element` but against psi scaled by lambda.
fn generic_dual_element_scaled(
    g: &JetGroup,
    datum: &ZeroToralDatum,
    lambda: u16,
) -> Result<LieElt> {
    if lambda == 1 {
        return generic_dual_element(g, datum);
    }
    let f = &g.ring.field;
    let ring = &g.ring;
    let eps = f.nonsquare();
    let q = g.q as u16;
    let r = g.r as usize;
    let mut cands: Vec<Vec<u16>> = vec![vec![]];
    for _ in 0..r {
        let mut next = Vec::new();
        for c in &cands {
            for a in 0..q {
                let mut cc = c.clone();
                cc.push(a);
                next.push(cc);
            }
        }
        cands = next;
    }
    'cand: for c in cands {
        if c[0] == 0 {
            continue;
        }
        let mut bco = vec![0u16; r + 1];
        for (k, &a) in c.iter().enumerate() {
            bco[k] = a;
        }
        let scalar = ring.from_coeffs(&bco);
        let x_star: LieElt = [0, ring.mul(scalar, ring.scalar(eps)), scalar, 0];
        for layer in 1..=g.r {
            for beta in 0..q {
                let mut yco = vec![0u16; r + 1];
                yco[layer as usize] = beta;
                let s = ring.from_coeffs(&yco);
                let y: LieElt = [0, ring.mul(s, ring.scalar(eps)), s, 0];
                let t_elem = truncated_exp(g, &y)?;
                let theta_val = datum.theta_value(g.index_of(&t_elem));
                let prod = mat_mul_raw(g, &x_star, &y);
                let tr = ring.add(prod[0], prod[3]);
                let e = f.trace_to_prime(f.mul(lambda, ring.coeff(tr, g.r)));
                if theta_val != Cyc::root_of_unity(g.p as u32, e as i64) {
                    continue 'cand;
                }
            }
        }
        return Ok(x_star);
    }
    Err(Error::Invalid("no dual element for the scaled character".into()))
}

/// Parseval: sum over all Y of |FT(1_orbit)(Y)|^2 = |g_r| * |orbit|.
pub fn parseval_check(g: &JetGroup, orbit: &[u64]) -> (Cyc, u128) {
    let s = g.ring.size as u64;
    let mut acc = Cyc::zero(1);
    for a in 0..s as u16 {
        for b in 0..s as u16 {
            for c in 0..s as u16 {
                let y: LieElt = [a, b, c, g.ring.neg(a)];
                let v = fourier_indicator(g, orbit, &y, 1);
                acc = acc.add(&v.abs2());
            }
        }
    }
    let expect = (s as u128).pow(3) * orbit.len() as u128;
    (acc, expect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupKind, DEFAULT_GROUP_CAP};
    use crate::yu::{build_circ_tau, build_zero_toral_datum, zero_toral_characters};

    #[test]
    fn log_exp_inverse_and_equivariant() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(truncated_log(&g, &g.identity()).unwrap(), [0, 0, 0, 0]);
        // strictly upper triangular: log(1 + n) = n
        let n: LieElt = [0, 3, 0, 0];
        let u = truncated_exp(&g, &n).unwrap();
        assert_eq!(u, [1, 3, 0, 1]);
        assert_eq!(truncated_log(&g, &u).unwrap(), n);
        // exhaustive inversion over all topologically unipotent elements
        let mut count = 0;
        for i in 0..g.order() as u32 {
            let u = g.element(i);
            if !is_topologically_unipotent(&g, &u) {
                continue;
            }
            count += 1;
            let x = truncated_log(&g, &u).unwrap();
            assert_eq!(truncated_exp(&g, &x).unwrap(), u);
        }
        assert_eq!(count, 3125); // q^2 residual unipotents times q^3 kernel / q^2
        // equivariance on samples
        for i in (0..g.order() as u32).step_by(977) {
            let gm = g.element(i);
            let u = [1u16, g.ring.add(1, g.ring.t()), 0, 1];
            let lhs = truncated_log(&g, &g.conj(&gm, &u)).unwrap();
            let x = truncated_log(&g, &u).unwrap();
            let rhs = mat_mul_raw(&g, &mat_mul_raw(&g, &gm, &x), &g.inv(&gm));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn dual_element_and_orbit() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let chars = zero_toral_characters(&g);
        let datum = build_zero_toral_datum(&g, chars[0].clone(), None).unwrap();
        let x = generic_dual_element(&g, &datum).unwrap();
        assert!(is_regular_dual(&g, &x));
        let (orbit, stab) = coadjoint_orbit(&g, &x);
        assert_eq!(orbit.len(), 500);
        assert_eq!(stab, 30);
        // FT at 0 is the orbit size
        let v0 = fourier_indicator(&g, &orbit, &[0, 0, 0, 0], 1);
        assert_eq!(v0, Cyc::from_int(500));
        // zero orbit: FT identically 1
        let (zorbit, zstab) = coadjoint_orbit(&g, &[0, 0, 0, 0]);
        assert_eq!(zorbit.len(), 1);
        assert_eq!(zstab, g.order());
        let v = fourier_indicator(&g, &zorbit, &[0, 5, 3, 0], 1);
        assert_eq!(v, Cyc::one());
    }

    #[test]
    fn springer_identity_q5() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let chars = zero_toral_characters(&g);
        let datum = build_zero_toral_datum(&g, chars[0].clone(), None).unwrap();
        let pkg = build_circ_tau(&g, &datum).unwrap();
        let report = verify_springer(&g, &datum, &pkg, 1).unwrap();
        assert!(report.defects.is_empty());
        assert_eq!(report.orbit_size, 500);
        assert_eq!(report.factor, 25);
        assert_eq!(report.checked, 3125);
        // rescaling the additive character preserves the verdict
        let report2 = verify_springer(&g, &datum, &pkg, 2).unwrap();
        assert!(report2.defects.is_empty());
        assert_eq!(report2.global_sign, report.global_sign);
    }

    #[test]
    fn parseval_and_galois_stability() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let chars = zero_toral_characters(&g);
        let datum = build_zero_toral_datum(&g, chars[0].clone(), None).unwrap();
        let x = generic_dual_element(&g, &datum).unwrap();
        let (orbit, _) = coadjoint_orbit(&g, &x);
        let (sum, expect) = parseval_check(&g, &orbit);
        assert_eq!(sum, Cyc::from_int(expect as i64));
        // the transform of a G-stable set is G-invariant after log, and the
        // Galois substitution zeta -> zeta^m on values matches rescaling the
        // evaluation point by m
        for i in (0..g.order() as u32).step_by(1237) {
            let u = g.element(i);
            if !is_topologically_unipotent(&g, &u) {
                continue;
            }
            let y = truncated_log(&g, &u).unwrap();
            let v = fourier_indicator(&g, &orbit, &y, 1);
            for j in (0..g.order() as u32).step_by(997) {
                let c = g.element(j);
                let yc = mat_mul_raw(&g, &mat_mul_raw(&g, &c, &y), &g.inv(&c));
                assert_eq!(fourier_indicator(&g, &orbit, &yc, 1), v);
            }
            for m in [2u16, 3] {
                let my = mat_scale_raw(&g, &y, m);
                assert_eq!(v.galois(m as i64), fourier_indicator(&g, &orbit, &my, 1));
            }
        }
    }

    #[test]
    fn theta_weyl_twist_moves_dual_element() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let chars = zero_toral_characters(&g);
        let datum = build_zero_toral_datum(&g, chars[0].clone(), None).unwrap();
        let x = generic_dual_element(&g, &datum).unwrap();
        // conjugate theta by the nontrivial Weyl element
        let torus = g.torus_subgroup(crate::group::TorusKind::Elliptic);
        let w = g
            .weyl_transporter(&torus, &torus)
            .into_iter()
            .find(|&i| !torus.contains(i))
            .unwrap();
        let wm = g.element(w);
        let table: Vec<u64> = torus
            .elements
            .iter()
            .map(|&t| {
                let y = g.index_of(&g.conj(&wm, &g.element(t)));
                datum.theta.table[torus.local(y).unwrap() as usize]
            })
            .collect();
        let tw = crate::classfn::AbelianCharacter {
            conductor: datum.theta.conductor,
            table,
        };
        let datum_w = build_zero_toral_datum(&g, tw, None).unwrap();
        let xw = generic_dual_element(&g, &datum_w).unwrap();
        // X*(theta^w) = w^(-1)-conjugate of X*(theta)
        let winv = g.inv(&wm);
        let expect = mat_mul_raw(&g, &mat_mul_raw(&g, &winv, &x), &wm);
        assert_eq!(xw, expect);
    }
}

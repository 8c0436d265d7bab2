//! The parahoric Yu construction for 0-toral data on SL2 jet groups, its
//! Green functions, and the character-formula, descent, invariance,
//! orthogonality and reconstruction checks.
//!
//! The inducing subgroup is K = T * (congruence kernel mod t); the building
//! block rho is a character of K when the half-depth layer carries no
//! symplectic space (odd r), and a Heisenberg-Weil module of dimension
//! p^(dim V/2) when it does (even r). Every identity is asserted exactly, up
//! to the one global sign the construction leaves open.

use crate::classfn::{
    abelian_characters, abelian_structure, AbelianCharacter, AbelianStructure, ClassFunction,
};
use crate::cyclotomic::{rat_int, Cyc, Rat};
use crate::error::{Error, Result};
use crate::group::{GroupKind, JetGroup, Mat2, SubgroupModel, TorusKind};
use crate::weil::{extend_cyclic, mat_mul, CycMat, HeisenbergWeil};
use num::bigint::BigInt;

/// A validated 0-toral datum: an elliptic torus character of exact depth r
/// on an SL2 jet group, with its genericity certificate.
pub struct ZeroToralDatum {
    pub theta: AbelianCharacter,
    pub epsilon: AbelianCharacter,
    pub r: u32,
    pub torus: SubgroupModel,
    pub torus_structure: AbelianStructure,
    /// locals of T n (kernel mod t^r): the deepest torus layer
    pub deepest_locals: Vec<u32>,
    /// locals of T n (kernel mod t): the positive-depth part T_(0+)
    pub t_plus_locals: Vec<u32>,
    /// Teichmueller section: residue-torus point index -> torus element index
    teichmuller: Vec<(Mat2, u32)>,
}

impl ZeroToralDatum {
    pub fn theta_value(&self, torus_elem: u32) -> Cyc {
        self.theta.value_at(&self.torus, torus_elem).unwrap()
    }

    /// The prime-to-p (Teichmueller) part of a torus-level residue.
    fn section(&self, g: &JetGroup, residue: &Mat2) -> u32 {
        let key = [
            g.ring.residue(residue[0]),
            g.ring.residue(residue[1]),
            g.ring.residue(residue[2]),
            g.ring.residue(residue[3]),
        ];
        self.teichmuller
            .iter()
            .find(|(m, _)| *m == key)
            .expect("residue not in the torus")
            .1
    }
}

/// Validate and assemble a 0-toral datum from a torus character.
pub fn build_zero_toral_datum(
    g: &JetGroup,
    theta: AbelianCharacter,
    epsilon: Option<AbelianCharacter>,
) -> Result<ZeroToralDatum> {
    if g.kind != GroupKind::Sl2 {
        return Err(Error::Invalid("0-toral data are built on SL2 models".into()));
    }
    if g.p < 5 {
        return Err(Error::BadCharacteristic(
            g.p,
            "p >= 5 required for the 0-toral construction".into(),
        ));
    }
    let r = g.r;
    if r == 0 || r > 2 {
        return Err(Error::DepthOutOfRange(format!(
            "supported 0-toral depths are 1 and 2, got {}",
            r
        )));
    }
    let torus = g.torus_subgroup(TorusKind::Elliptic);
    let torus_structure = abelian_structure(g, &torus);
    // genericity certificate: theta nontrivial on the deepest layer T_(r:r+)
    let deepest_kernel = g.congruence_kernel(r);
    let deepest_locals: Vec<u32> = torus
        .elements
        .iter()
        .filter(|&&i| deepest_kernel.contains(i))
        .map(|&i| torus.local(i).unwrap())
        .collect();
    if theta.is_trivial_on(&deepest_locals) {
        return Err(Error::Invalid(
            "character has depth < r: genericity certificate fails".into(),
        ));
    }
    let plus_kernel = g.congruence_kernel(1);
    let t_plus_locals: Vec<u32> = torus
        .elements
        .iter()
        .filter(|&&i| plus_kernel.contains(i))
        .map(|&i| torus.local(i).unwrap())
        .collect();
    let epsilon = match epsilon {
        Some(e) => {
            if !e.is_quadratic() {
                return Err(Error::Invalid("epsilon must be quadratic".into()));
            }
            e
        }
        None => AbelianCharacter {
            conductor: theta.conductor,
            table: vec![0; torus.order()],
        },
    };
    // Teichmueller section: prime-to-p torus elements by residue
    let mut teichmuller = Vec::new();
    for &i in &torus.elements {
        let m = g.element(i);
        if g.element_order(&m) % g.p != 0 {
            let key = [
                g.ring.residue(m[0]),
                g.ring.residue(m[1]),
                g.ring.residue(m[2]),
                g.ring.residue(m[3]),
            ];
            teichmuller.push((key, i));
        }
    }
    assert_eq!(teichmuller.len() as u64, g.q + 1);
    Ok(ZeroToralDatum {
        theta,
        epsilon,
        r,
        torus,
        torus_structure,
        deepest_locals,
        t_plus_locals,
        teichmuller,
    })
}

/// All valid 0-toral characters on the elliptic torus of g (exact depth r).
pub fn zero_toral_characters(g: &JetGroup) -> Vec<AbelianCharacter> {
    let torus = g.torus_subgroup(TorusKind::Elliptic);
    let st = abelian_structure(g, &torus);
    let deepest = g.congruence_kernel(g.r);
    let locals: Vec<u32> = torus
        .elements
        .iter()
        .filter(|&&i| deepest.contains(i))
        .map(|&i| torus.local(i).unwrap())
        .collect();
    abelian_characters(&st)
        .into_iter()
        .filter(|c| !c.is_trivial_on(&locals))
        .collect()
}

// ---- Lie-theoretic helpers on the elliptic form ----

// The residue Lie algebra splits as t + r for the eps-form torus, with
// t spanned by T0 = [[0, eps], [1, 0]] and r = {[[x, -eps z], [z, -x]]}.
struct ResidueDecomposition {
    eps: u16,
    /// coefficient of T0 in the toral component
    half_inv_eps2: (u16, u16), // (1/(2eps), 1/2) precomputed
}

impl ResidueDecomposition {
    fn new(g: &JetGroup) -> ResidueDecomposition {
        let f = &g.ring.field;
        let eps = f.nonsquare();
        let two_eps_inv = f.inv(f.mul(f.from_int(2), eps));
        let half = f.inv(f.from_int(2));
        ResidueDecomposition {
            eps,
            half_inv_eps2: (two_eps_inv, half),
        }
    }

    /// toral coefficient alpha of a traceless residue matrix: A_t = alpha T0.
    fn toral_coeff(&self, g: &JetGroup, a: &[u16; 4]) -> u16 {
        // alpha = (y + eps z) / (2 eps) for A = [[x, y], [z, -x]]
        let f = &g.ring.field;
        f.mul(
            f.add(a[1], f.mul(self.eps, a[2])),
            self.half_inv_eps2.0,
        )
    }

    /// the r-component of a traceless residue matrix
    fn radical_part(&self, g: &JetGroup, a: &[u16; 4]) -> [u16; 4] {
        let f = &g.ring.field;
        let alpha = self.toral_coeff(g, a);
        [
            a[0],
            f.sub(a[1], f.mul(alpha, self.eps)),
            f.sub(a[2], alpha),
            a[3],
        ]
    }
}

/// The canonical torus element with t-layer coefficient alpha (times T0) and
/// no deeper free part; exact determinant 1 in the jet ring.
fn torus_section_t1(g: &JetGroup, rd: &ResidueDecomposition, alpha: u16, layer: u32) -> Mat2 {
    let ring = &g.ring;
    let f = &ring.field;
    let eps = rd.eps;
    // b = t^layer * alpha; a = 1 + eps b^2 / 2 truncated
    let mut bco = vec![0u16; g.r as usize + 1];
    bco[layer as usize] = alpha;
    let b = ring.from_coeffs(&bco);
    let b2 = ring.mul(b, b);
    let half = f.inv(f.from_int(2));
    let corr = ring.mul(ring.scalar(f.mul(eps, half)), b2);
    let a = ring.add(1, corr);
    let m = [a, ring.mul(ring.scalar(eps), b), b, a];
    debug_assert_eq!(g.det(&m), 1);
    m
}

// ---- the Yu package ----

pub struct YuPackage {
    pub datum_theta: AbelianCharacter,
    pub r: u32,
    pub circ_k: SubgroupModel,
    /// trace of the building block on each local element of circ_k
    pub rho_trace: Vec<Cyc>,
    pub rho_dim: u64,
    /// trace of the kappa part alone (theta with trivial depth-zero part, no
    /// epsilon), for descent checks
    pub kappa_trace: Vec<Cyc>,
}

struct WeilLayer {
    hw: HeisenbergWeil,
    omega_s: CycMat,
    /// power of the generator automorphism per Teichmueller residue element
    sp_power: Vec<(Mat2, u64)>,
    /// F_p-basis of the radical complement, as residue matrices
    basis: Vec<[u16; 4]>,
    /// exponent scale: theta on the deepest toral layer as psi exponent
    psi_of_toral: Vec<u16>, // indexed by toral coefficient alpha in F_q
}

/// Assemble the parahoric Yu package for a 0-toral datum.
pub fn build_circ_tau(g: &JetGroup, datum: &ZeroToralDatum) -> Result<YuPackage> {
    let circ_k = build_circ_k(g, datum);
    let rd = ResidueDecomposition::new(g);
    let (rho_trace, kappa_trace, rho_dim) = match datum.r {
        1 => {
            let rho = character_block_r1(g, datum, &rd, &circ_k, false)?;
            let kappa = character_block_r1(g, datum, &rd, &circ_k, true)?;
            (rho, kappa, 1)
        }
        2 => {
            let weil = build_weil_layer(g, datum, &rd)?;
            let rho = weil_block_r2(g, datum, &rd, &circ_k, &weil, false)?;
            let kappa = weil_block_r2(g, datum, &rd, &circ_k, &weil, true)?;
            (rho, kappa, weil.hw.dim as u64)
        }
        _ => unreachable!(),
    };
    let pkg = YuPackage {
        datum_theta: datum.theta.clone(),
        r: datum.r,
        circ_k,
        rho_trace,
        rho_dim,
        kappa_trace,
    };
    // the building block must be an irreducible character of circ_k
    let mut norm = Cyc::zero(1);
    for v in &pkg.rho_trace {
        norm = norm.add(&v.abs2());
    }
    let norm = norm.scale(&Rat::new(BigInt::from(1), BigInt::from(pkg.circ_k.order())));
    if norm != Cyc::one() {
        return Err(Error::Invalid(format!(
            "building block is not irreducible: <rho, rho> = {}",
            norm
        )));
    }
    Ok(pkg)
}

fn build_circ_k(g: &JetGroup, datum: &ZeroToralDatum) -> SubgroupModel {
    // K = T * (kernel mod t): membership is residue in the residue torus
    let eps = ResidueDecomposition::new(g).eps;
    let ring = &g.ring;
    let f = &ring.field;
    let _ = datum;
    g.subgroup_from_predicate(move |m| {
        let a = ring.residue(m[0]);
        let b = ring.residue(m[1]);
        let c = ring.residue(m[2]);
        let d = ring.residue(m[3]);
        a == d && b == f.mul(eps, c)
    })
}

/// theta evaluated on the canonical T1-layer element with toral coefficient
/// alpha, as a root of unity exponent against theta's conductor.
fn theta_at_toral_layer(
    g: &JetGroup,
    datum: &ZeroToralDatum,
    rd: &ResidueDecomposition,
    alpha: u16,
    layer: u32,
    positive_only: bool,
) -> Cyc {
    let t = torus_section_t1(g, rd, alpha, layer);
    let idx = g.index_of(&t);
    let v = datum.theta_value(idx);
    let _ = positive_only;
    v
}

/// The r = 1 building block: a character of K = T K_1. Depth-zero data enter
/// through theta on the Teichmueller part; `kappa_only` replaces that part by
/// the trivial character (and drops epsilon), leaving the positive-depth
/// layer alone.
fn character_block_r1(
    g: &JetGroup,
    datum: &ZeroToralDatum,
    rd: &ResidueDecomposition,
    circ_k: &SubgroupModel,
    kappa_only: bool,
) -> Result<Vec<Cyc>> {
    let ring = &g.ring;
    let values: Vec<Cyc> = circ_k
        .elements
        .iter()
        .map(|&idx| {
            let x = g.element(idx);
            let sec = datum.section(g, &x);
            let t_part = g.element(sec);
            let k = g.mul(&g.inv(&t_part), &x);
            // k = 1 + t A; toral coefficient of A
            let a_res = [
                ring.coeff(k[0], 1),
                ring.coeff(k[1], 1),
                ring.coeff(k[2], 1),
                ring.coeff(k[3], 1),
            ];
            let alpha = rd.toral_coeff(g, &a_res);
            let pos = theta_at_toral_layer(g, datum, rd, alpha, 1, true);
            if kappa_only {
                pos
            } else {
                let t0 = datum.theta_value(sec);
                let e0 = datum
                    .epsilon
                    .value_at(&datum.torus, sec)
                    .expect("epsilon on torus");
                t0.mul(&e0).mul(&pos)
            }
        })
        .collect();
    Ok(values)
}

fn build_weil_layer(
    g: &JetGroup,
    datum: &ZeroToralDatum,
    rd: &ResidueDecomposition,
) -> Result<WeilLayer> {
    assert_eq!(datum.r, 2);
    let p = g.p;
    let f = &g.ring.field;
    let fdeg = g.ring.field.f as usize;
    // psi exponents of theta on the deepest toral layer, per alpha in F_q
    let mut psi_of_toral = vec![0u16; g.q as usize];
    let e = datum.theta.conductor;
    assert!(e % p as u64 == 0);
    for alpha in 0..g.q as u16 {
        let t = torus_section_t1(g, rd, alpha, 2);
        let loc = datum.torus.local(g.index_of(&t)).unwrap();
        let exp = datum.theta.table[loc as usize];
        assert!(exp % (e / p as u64) == 0, "deep layer value not of order p");
        psi_of_toral[alpha as usize] = (exp / (e / p as u64)) as u16;
    }
    // F_p-basis of the r-part: H and R times field basis scalars
    let eps = rd.eps;
    let h_mat: [u16; 4] = [1, 0, 0, f.neg(1)];
    let r_mat: [u16; 4] = [0, f.neg(eps), 1, 0];
    let mut basis: Vec<[u16; 4]> = Vec::new();
    for k in 0..fdeg {
        // field basis element x^k encoded as p^k
        let scalar = (p as u16).pow(k as u32).min(if fdeg == 1 { 1 } else { u16::MAX });
        let scalar = if fdeg == 1 { 1 } else { scalar };
        for m in [h_mat, r_mat] {
            basis.push([
                f.mul(scalar, m[0]),
                f.mul(scalar, m[1]),
                f.mul(scalar, m[2]),
                f.mul(scalar, m[3]),
            ]);
        }
    }
    let dim_v = basis.len();
    // the symplectic form from theta of commutator lifts
    let lift = |v: &[u16]| -> Mat2 { radical_lift(g, rd, &combine(f, &basis, v)) };
    let mut form = vec![vec![0u16; dim_v]; dim_v];
    for i in 0..dim_v {
        for j in 0..dim_v {
            let mut vi = vec![0u16; dim_v];
            vi[i] = 1;
            let mut vj = vec![0u16; dim_v];
            vj[j] = 1;
            let (bi, bj) = (lift(&vi), lift(&vj));
            let comm = g.mul(
                &g.mul(&bi, &bj),
                &g.inv(&g.mul(&bj, &bi)),
            );
            // commutator = 1 + t^2 C with C toral
            assert_eq!(g.ring.coeff(comm[0], 1), 0);
            assert_eq!(g.ring.coeff(comm[1], 1), 0);
            let c_res = [
                g.ring.coeff(comm[0], 2),
                g.ring.coeff(comm[1], 2),
                g.ring.coeff(comm[2], 2),
                g.ring.coeff(comm[3], 2),
            ];
            let alpha = rd.toral_coeff(g, &c_res);
            // the radical component of the commutator pairs to zero
            form[i][j] = psi_of_toral[alpha as usize];
        }
    }
    // alternating and nondegenerate
    for i in 0..dim_v {
        assert_eq!(form[i][i], 0, "form not alternating");
        for j in 0..dim_v {
            assert_eq!((form[i][j] + form[j][i]) % p as u16, 0);
        }
    }
    let hw = HeisenbergWeil::new(p, &form)?;
    // torus action on V through the Teichmueller part
    let mut sp_power: Vec<(Mat2, u64)> = Vec::new();
    // the action matrix of a torus element on V
    let action_of = |tm: &Mat2| -> Vec<Vec<u16>> {
        (0..dim_v)
            .map(|j| {
                let mut vj = vec![0u16; dim_v];
                vj[j] = 1;
                let image = g.conj(tm, &lift(&vj));
                // image = 1 + t A' + ...: A' must be radical
                let a_res = [
                    g.ring.coeff(image[0], 1),
                    g.ring.coeff(image[1], 1),
                    g.ring.coeff(image[2], 1),
                    g.ring.coeff(image[3], 1),
                ];
                decompose(f, &basis, &rd.radical_part(g, &a_res))
            })
            .collect::<Vec<_>>()
    };
    // transpose: columns are images
    let to_matrix = |cols: Vec<Vec<u16>>| -> Vec<Vec<u16>> {
        (0..dim_v)
            .map(|r| (0..dim_v).map(|c| cols[c][r]).collect())
            .collect()
    };
    // find a generator of the image and index all Teichmueller elements
    let teich: Vec<(Mat2, u32)> = datum.teichmuller.clone();
    let matrices: Vec<(Mat2, Vec<Vec<u16>>)> = teich
        .iter()
        .map(|(res, idx)| {
            let tm = g.element(*idx);
            (*res, to_matrix(action_of(&tm)))
        })
        .collect();
    let idmat: Vec<Vec<u16>> = (0..dim_v)
        .map(|i| (0..dim_v).map(|j| u16::from(i == j)).collect())
        .collect();
    let mat_mul_p = |a: &Vec<Vec<u16>>, b: &Vec<Vec<u16>>| -> Vec<Vec<u16>> {
        (0..dim_v)
            .map(|i| {
                (0..dim_v)
                    .map(|j| {
                        let mut acc = 0u64;
                        for k in 0..dim_v {
                            acc = (acc + a[i][k] as u64 * b[k][j] as u64) % p;
                        }
                        acc as u16
                    })
                    .collect()
            })
            .collect()
    };
    // generator: the element whose action has maximal order
    let mut best: Option<(usize, u64)> = None;
    for (i, (_, m)) in matrices.iter().enumerate() {
        let mut cur = m.clone();
        let mut o = 1u64;
        while cur != idmat {
            cur = mat_mul_p(&cur, m);
            o += 1;
        }
        if best.map_or(true, |(_, bo)| o > bo) {
            best = Some((i, o));
        }
    }
    let (gi, d) = best.unwrap();
    let s_matrix = matrices[gi].1.clone();
    // powers of the generator matrix
    let mut pows: Vec<Vec<Vec<u16>>> = vec![idmat.clone()];
    for _ in 1..d {
        pows.push(mat_mul_p(pows.last().unwrap(), &s_matrix));
    }
    for (res, m) in &matrices {
        let j = pows
            .iter()
            .position(|pm| pm == m)
            .expect("torus image not generated by the chosen element") as u64;
        sp_power.push((*res, j));
    }
    let ext = extend_cyclic(&hw, &s_matrix, d)?;
    Ok(WeilLayer {
        hw,
        omega_s: ext.omega_s,
        sp_power,
        basis,
        psi_of_toral,
    })
}

fn combine(f: &crate::ff::FiniteField, basis: &[[u16; 4]], v: &[u16]) -> [u16; 4] {
    let mut out = [0u16; 4];
    for (b, &c) in basis.iter().zip(v) {
        let cc = c % f.p as u16;
        for i in 0..4 {
            // scalar cc is in the prime field
            out[i] = f.add(out[i], f.mul(cc, b[i]));
        }
    }
    out
}

fn decompose(f: &crate::ff::FiniteField, basis: &[[u16; 4]], a: &[u16; 4]) -> Vec<u16> {
    // solve sum c_i basis_i = a over F_p by brute linear algebra on the 4
    // residue coordinates expanded over F_p digits
    let p = f.p as usize;
    let n = basis.len();
    // build matrix columns: digits of each basis matrix entry
    let fdeg = f.f as usize;
    let rows = 4 * fdeg;
    let digit = |x: u16, k: usize| -> u16 {
        let mut v = x as usize;
        for _ in 0..k {
            v /= p;
        }
        (v % p) as u16
    };
    let mut aug: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let (entry, k) = (r / fdeg, r % fdeg);
            let mut row: Vec<u64> = basis.iter().map(|b| digit(b[entry], k) as u64).collect();
            row.push(digit(a[entry], k) as u64);
            row
        })
        .collect();
    // gaussian elimination over F_p
    let pp = f.p;
    let inv = |x: u64| -> u64 {
        let mut acc = 1;
        for _ in 0..pp - 2 {
            acc = acc * x % pp;
        }
        acc
    };
    let mut out = vec![0u16; n];
    let mut r0 = 0;
    let mut piv_of_col = vec![usize::MAX; n];
    for c in 0..n {
        if let Some(pr) = (r0..rows).find(|&r| aug[r][c] % pp != 0) {
            aug.swap(r0, pr);
            let iv = inv(aug[r0][c] % pp);
            for x in aug[r0].iter_mut() {
                *x = *x % pp * iv % pp;
            }
            let rowc = aug[r0].clone();
            for r in 0..rows {
                if r != r0 && aug[r][c] % pp != 0 {
                    let fct = aug[r][c] % pp;
                    for j in 0..=n {
                        aug[r][j] = (aug[r][j] + (pp - fct) * rowc[j]) % pp;
                    }
                }
            }
            piv_of_col[c] = r0;
            r0 += 1;
        }
    }
    for c in 0..n {
        if piv_of_col[c] != usize::MAX {
            out[c] = (aug[piv_of_col[c]][n] % pp) as u16;
        }
    }
    // consistency
    let back = combine(f, basis, &out);
    assert_eq!(back, *a, "matrix not in the span of the radical basis");
    out
}

/// Canonical lift of a radical residue matrix into SL2 of the jet ring:
/// 1 + t A + t^2 D with D chosen to fix the determinant.
fn radical_lift(g: &JetGroup, _rd: &ResidueDecomposition, a: &[u16; 4]) -> Mat2 {
    let ring = &g.ring;
    let f = &ring.field;
    let t = ring.t();
    // det(1 + tA) = 1 + t tr A + t^2 det A; tr A = 0 here
    let det_a = f.sub(f.mul(a[0], a[3]), f.mul(a[1], a[2]));
    let mut m = [
        ring.add(1, ring.mul(t, ring.scalar(a[0]))),
        ring.mul(t, ring.scalar(a[1])),
        ring.mul(t, ring.scalar(a[2])),
        ring.add(1, ring.mul(t, ring.scalar(a[3]))),
    ];
    // subtract det(A) t^2 on the top-left entry
    let t2 = ring.mul(t, t);
    m[0] = ring.sub(m[0], ring.mul(t2, ring.scalar(det_a)));
    debug_assert_eq!(g.det(&m), 1);
    m
}

/// The r = 2 building block: trace of theta-part tensor Heisenberg-Weil.
fn weil_block_r2(
    g: &JetGroup,
    datum: &ZeroToralDatum,
    rd: &ResidueDecomposition,
    circ_k: &SubgroupModel,
    weil: &WeilLayer,
    kappa_only: bool,
) -> Result<Vec<Cyc>> {
    let ring = &g.ring;
    let f = &ring.field;
    let p = g.p;
    let half = f.inv(f.from_int(2));
    let dim_v = weil.basis.len();
    // symmetric correction sigma(u, v) = psi(c(u,v)) - (1/2) omega(u,v),
    // beta(v) = (1/2) sigma(v, v): makes the z-extraction match the
    // symmetrized Heisenberg cocycle
    let lift = |v: &[u16]| -> Mat2 { radical_lift(g, rd, &combine(f, &weil.basis, v)) };
    let toral_psi = |m: &Mat2| -> u16 {
        // m = 1 + t^2 C (+ radical part acting trivially): psi of the toral
        // coefficient
        let c_res = [
            ring.coeff(m[0], 2),
            ring.coeff(m[1], 2),
            ring.coeff(m[2], 2),
            ring.coeff(m[3], 2),
        ];
        let alpha = rd.toral_coeff(g, &c_res);
        weil.psi_of_toral[alpha as usize]
    };
    let cocycle = |u: &[u16], v: &[u16]| -> u16 {
        // lift(u) lift(v) = lift(u+v) (1 + t^2 C): psi-exponent of C
        let uv: Vec<u16> = u
            .iter()
            .zip(v)
            .map(|(&a, &b)| (a + b) % p as u16)
            .collect();
        let prod = g.mul(&lift(u), &lift(v));
        let rest = g.mul(&g.inv(&lift(&uv)), &prod);
        debug_assert_eq!(ring.coeff(rest[1], 1), 0);
        toral_psi(&rest)
    };
    let beta = |v: &[u16]| -> u16 {
        // (1/2) [ psi(c(v,v)) - (1/2) omega(v,v) ] with omega(v,v) = 0
        let c = cocycle(v, v);
        ((half as u64 * c as u64) % p) as u16
    };
    // powers of the Weil operator
    let dmax = weil.sp_power.iter().map(|(_, j)| *j).max().unwrap_or(0);
    let mut omega_pows: Vec<CycMat> = vec![crate::weil::mat_identity(weil.hw.dim)];
    for _ in 0..dmax {
        omega_pows.push(mat_mul(omega_pows.last().unwrap(), &weil.omega_s));
    }
    let values: Vec<Cyc> = circ_k
        .elements
        .iter()
        .map(|&idx| {
            let x = g.element(idx);
            let sec = datum.section(g, &x);
            let t_part = g.element(sec);
            let k = g.mul(&g.inv(&t_part), &x);
            // k = 1 + t A + t^2 B: first strip the toral t-layer
            let a_res = [
                ring.coeff(k[0], 1),
                ring.coeff(k[1], 1),
                ring.coeff(k[2], 1),
                ring.coeff(k[3], 1),
            ];
            let alpha = rd.toral_coeff(g, &a_res);
            let t1 = torus_section_t1(g, rd, alpha, 1);
            let k1 = g.mul(&g.inv(&t1), &k);
            // k1 = lift(v) (1 + t^2 C)
            let a1_res = [
                ring.coeff(k1[0], 1),
                ring.coeff(k1[1], 1),
                ring.coeff(k1[2], 1),
                ring.coeff(k1[3], 1),
            ];
            let v = decompose(f, &weil.basis, &rd.radical_part(g, &a1_res));
            debug_assert!({
                let tor = rd.toral_coeff(g, &a1_res);
                tor == 0
            });
            let rest = g.mul(&g.inv(&lift(&v)), &k1);
            let z_raw = toral_psi(&rest);
            let z = ((z_raw as u64 + beta(&v) as u64) % p) as u16;
            // theta on the stripped toral parts
            let t1_idx = g.index_of(&t1);
            let theta_t1 = datum.theta_value(t1_idx);
            // Weil operator for the Teichmueller part
            let key = [
                ring.residue(x[0]),
                ring.residue(x[1]),
                ring.residue(x[2]),
                ring.residue(x[3]),
            ];
            let jpow = weil
                .sp_power
                .iter()
                .find(|(res, _)| *res == key)
                .expect("residue missing")
                .1;
            let tr = weil
                .hw
                .trace_with_heisenberg(&omega_pows[jpow as usize], &v, z);
            let scalar = if kappa_only {
                theta_t1
            } else {
                let t0 = datum.theta_value(sec);
                let e0 = datum.epsilon.value_at(&datum.torus, sec).unwrap();
                t0.mul(&e0).mul(&theta_t1)
            };
            tr.mul(&scalar)
        })
        .collect();
    let _ = dim_v;
    Ok(values)
}

/// The very-regular pattern of a torus character: the Weyl sum on classes
/// meeting the torus, zero on every other very regular class. Works at any
/// depth, including 0.
pub fn vreg_pattern(
    g: &JetGroup,
    torus: &SubgroupModel,
    chi: &AbelianCharacter,
) -> Vec<(usize, Cyc)> {
    let cls = g.classes();
    let w = g
        .weyl_transporter(torus, torus)
        .into_iter()
        .find(|&x| !torus.contains(x))
        .expect("torus has no nontrivial transporter");
    let wm = g.element(w);
    let vr = g.very_regular_elements(torus);
    let mut pattern: Vec<(usize, Cyc)> = Vec::new();
    let mut seen = vec![false; cls.reps.len()];
    for &t in &vr.in_torus {
        let c = cls.class_of[t as usize] as usize;
        if seen[c] {
            continue;
        }
        seen[c] = true;
        let tw = g.index_of(&g.conj(&wm, &g.element(t)));
        let v = Cyc::root_of_unity(
            chi.conductor as u32,
            chi.table[torus.local(t).unwrap() as usize] as i64,
        )
        .add(&Cyc::root_of_unity(
            chi.conductor as u32,
            chi.table[torus.local(tw).unwrap() as usize] as i64,
        ));
        pattern.push((c, v));
    }
    for (c, f) in cls.flags.iter().enumerate() {
        if f.very_regular && !seen[c] {
            pattern.push((c, Cyc::zero(1)));
        }
    }
    pattern
}

/// Characters of an abelian torus subgroup moved by the nontrivial Weyl
/// coset, i.e. the regular ones.
pub fn regular_torus_characters(g: &JetGroup, torus: &SubgroupModel) -> Vec<AbelianCharacter> {
    let st = abelian_structure(g, torus);
    let w = g
        .weyl_transporter(torus, torus)
        .into_iter()
        .find(|&x| !torus.contains(x))
        .expect("torus has no nontrivial transporter");
    let wm = g.element(w);
    abelian_characters(&st)
        .into_iter()
        .filter(|c| {
            torus.elements.iter().any(|&t| {
                let tw = g.index_of(&g.conj(&wm, &g.element(t)));
                c.table[torus.local(tw).unwrap() as usize]
                    != c.table[torus.local(t).unwrap() as usize]
            })
        })
        .collect()
}

/// Character of the induced representation as a class function.
pub fn circ_tau(g: &JetGroup, pkg: &YuPackage) -> ClassFunction {
    let cls = g.classes();
    let values: Vec<Cyc> = cls
        .reps
        .iter()
        .map(|rep| theta_tau_at(g, pkg, rep))
        .collect();
    ClassFunction { values }
}

/// Induced character at a single element, via the Frobenius formula.
pub fn theta_tau_at(g: &JetGroup, pkg: &YuPackage, x: &Mat2) -> Cyc {
    let mut acc = Cyc::zero(1);
    for &c in &pkg.circ_k.transversal {
        let cm = g.element(c);
        let y = g.mul(&g.mul(&g.inv(&cm), x), &cm);
        let yi = g.index_of(&y);
        if let Some(loc) = pkg.circ_k.local(yi) {
            acc = acc.add(&pkg.rho_trace[loc as usize]);
        }
    }
    acc
}

/// The Green function: the induced character restricted to unipotent classes.
pub struct GreenFunctionTable {
    /// (class index, value) over topologically unipotent classes
    pub values: Vec<(usize, Cyc)>,
    pub theta_plus_label: Vec<u64>,
}

pub fn green_fks(g: &JetGroup, pkg: &YuPackage) -> GreenFunctionTable {
    let cls = g.classes();
    let tau = circ_tau(g, pkg);
    let values = (0..cls.reps.len())
        .filter(|&c| cls.flags[c].unipotent)
        .map(|c| (c, tau.values[c].clone()))
        .collect();
    // the label: theta restricted to the positive-depth torus part
    let torus = g.torus_subgroup(TorusKind::Elliptic);
    let plus = g.congruence_kernel(1);
    let label: Vec<u64> = torus
        .elements
        .iter()
        .filter(|&&i| plus.contains(i))
        .map(|&i| pkg.datum_theta.table[torus.local(i).unwrap() as usize])
        .collect();
    GreenFunctionTable {
        values,
        theta_plus_label: label,
    }
}

/// Report from the character-formula verification.
pub struct CharFormulaReport {
    pub global_sign: i64,
    pub checked_classes: usize,
    pub defects: Vec<usize>,
}

/// Verify the Green-function character formula at every class: the induced
/// character at g = s u equals (sign) sum over cosets x with s^x in T of
/// theta(s^x) Q^(centralizer)(u^x), with one global sign.
pub fn verify_char_formula(g: &JetGroup, datum: &ZeroToralDatum, pkg: &YuPackage) -> Result<CharFormulaReport> {
    let cls = g.classes();
    let tau = circ_tau(g, pkg);
    let green = green_fks(g, pkg);
    let green_at = |c: usize| -> Cyc {
        green
            .values
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| v.clone())
            .expect("unipotent class missing from the Green table")
    };
    let torus = &datum.torus;
    let mut global_sign: Option<i64> = None;
    let mut defects = Vec::new();
    for (c, rep) in cls.reps.iter().enumerate() {
        let (s, u) = g.topological_jordan(rep);
        let rhs = if g.is_central(&s) {
            // single coset, centralizer is the whole group
            let si = g.index_of(&s);
            let sv = datum.theta_value(si);
            let uc = cls.class_of[g.index_of(&u) as usize] as usize;
            sv.mul(&green_at(uc))
        } else {
            // centralizer of s is a conjugate torus level; sum over cosets
            let n = g.order() as u32;
            let s_idx = g.index_of(&s);
            let cent: Vec<u32> = (0..n)
                .filter(|&x| {
                    let xm = g.element(x);
                    let sm = g.element(s_idx);
                    g.mul(&xm, &sm) == g.mul(&sm, &xm)
                })
                .collect();
            let mut seen = vec![false; g.order()];
            let mut acc = Cyc::zero(1);
            for x in 0..n {
                if seen[x as usize] {
                    continue;
                }
                let xm = g.element(x);
                for &z in &cent {
                    let xz = g.mul(&xm, &g.element(z));
                    seen[g.index_of(&xz) as usize] = true;
                }
                let sx = g.conj(&xm, &s);
                let sxi = g.index_of(&sx);
                if torus.contains(sxi) {
                    let ux = g.conj(&xm, &u);
                    let uxi = g.index_of(&ux);
                    // u^x lies in the torus level; Q for the torus is theta+
                    let tv = datum.theta_value(sxi);
                    let uv = datum.theta_value(uxi);
                    acc = acc.add(&tv.mul(&uv));
                }
            }
            acc
        };
        let lhs = &tau.values[c];
        let sign = if *lhs == rhs {
            1
        } else if *lhs == rhs.neg() {
            -1
        } else {
            defects.push(c);
            continue;
        };
        match global_sign {
            None => global_sign = Some(sign),
            Some(s0) => {
                if s0 != sign && !lhs.is_zero() {
                    defects.push(c);
                }
            }
        }
    }
    Ok(CharFormulaReport {
        global_sign: global_sign.unwrap_or(1),
        checked_classes: cls.reps.len(),
        defects,
    })
}

/// Both sides of the Green-function orthogonality identity, exactly.
pub struct OrthogonalityReport {
    pub lhs: Cyc,
    pub rhs: Cyc,
}

pub fn orthogonality_check(
    g: &JetGroup,
    datum1: &ZeroToralDatum,
    pkg1: &YuPackage,
    datum2: &ZeroToralDatum,
    pkg2: &YuPackage,
) -> Result<OrthogonalityReport> {
    let cls = g.classes();
    let g1 = green_fks(g, pkg1);
    let g2 = green_fks(g, pkg2);
    let mut lhs = Cyc::zero(1);
    for ((c1, v1), (_, v2)) in g1.values.iter().zip(&g2.values) {
        let term = v1
            .mul(&v2.conj())
            .scale(&rat_int(cls.sizes[*c1] as i64));
        lhs = lhs.add(&term);
    }
    // rhs: |G| / (|T| |T'|) sum over u in T1-part, n in N(T) of
    // theta+(u) conj(theta+'(u^n))
    let torus = &datum1.torus;
    let normalizer: Vec<u32> = (0..g.order() as u32)
        .filter(|&x| {
            let xm = g.element(x);
            torus.elements.iter().all(|&t| {
                let y = g.conj(&xm, &g.element(t));
                torus.contains(g.index_of(&y))
            })
        })
        .collect();
    let plus = g.congruence_kernel(1);
    let mut rhs = Cyc::zero(1);
    for &u in torus.elements.iter().filter(|&&i| plus.contains(i)) {
        let um = g.element(u);
        let v1 = datum1.theta_value(u);
        for &n in &normalizer {
            let nm = g.element(n);
            let un = g.index_of(&g.mul(&g.mul(&g.inv(&nm), &um), &nm));
            let v2 = datum2.theta_value(un);
            rhs = rhs.add(&v1.mul(&v2.conj()));
        }
    }
    let scale = Rat::new(
        BigInt::from(g.order()),
        BigInt::from(torus.order()) * BigInt::from(torus.order()),
    );
    rhs = rhs.scale(&scale);
    Ok(OrthogonalityReport { lhs, rhs })
}

/// Assemble the class function from (theta, Q) through the character-formula
/// shape, then compare with the induced character.
pub struct ReconstructionReport {
    pub reconstructed: ClassFunction,
    pub matches_tau_with_sign: Option<i64>,
    pub self_inner: Cyc,
}

pub fn reconstruct_dl_character(
    g: &JetGroup,
    datum: &ZeroToralDatum,
    pkg: &YuPackage,
) -> Result<ReconstructionReport> {
    let cls = g.classes();
    let green = green_fks(g, pkg);
    let green_at = |c: usize| -> Cyc {
        green
            .values
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| v.clone())
            .expect("missing unipotent class")
    };
    let torus = &datum.torus;
    let mut values = Vec::with_capacity(cls.reps.len());
    for rep in &cls.reps {
        let (s, u) = g.topological_jordan(rep);
        let v = if g.is_central(&s) {
            let sv = datum.theta_value(g.index_of(&s));
            let uc = cls.class_of[g.index_of(&u) as usize] as usize;
            sv.mul(&green_at(uc))
        } else {
            let n = g.order() as u32;
            let s_idx = g.index_of(&s);
            let cent: Vec<u32> = (0..n)
                .filter(|&x| {
                    let xm = g.element(x);
                    let sm = g.element(s_idx);
                    g.mul(&xm, &sm) == g.mul(&sm, &xm)
                })
                .collect();
            let mut seen = vec![false; g.order()];
            let mut acc = Cyc::zero(1);
            for x in 0..n {
                if seen[x as usize] {
                    continue;
                }
                let xm = g.element(x);
                for &z in &cent {
                    let xz = g.mul(&xm, &g.element(z));
                    seen[g.index_of(&xz) as usize] = true;
                }
                let sx = g.conj(&xm, &s);
                let sxi = g.index_of(&sx);
                if torus.contains(sxi) {
                    let uxi = g.index_of(&g.conj(&xm, &u));
                    acc = acc.add(&datum.theta_value(sxi).mul(&datum.theta_value(uxi)));
                }
            }
            acc
        };
        values.push(v);
    }
    let reconstructed = ClassFunction { values };
    let tau = circ_tau(g, pkg);
    let matches = if reconstructed
        .values
        .iter()
        .zip(&tau.values)
        .all(|(a, b)| a == b)
    {
        Some(1)
    } else if reconstructed
        .values
        .iter()
        .zip(&tau.values)
        .all(|(a, b)| *a == b.neg())
    {
        Some(-1)
    } else {
        None
    };
    let self_inner = crate::classfn::inner_product(g, &reconstructed, &reconstructed)?;
    Ok(ReconstructionReport {
        reconstructed,
        matches_tau_with_sign: matches,
        self_inner,
    })
}

/// Descent data: for a prime-to-p torus element s, the ratio
/// kappa(s u) / (theta_(>=0)(s) kappa_s(u)) over all commuting topologically
/// unipotent u in K, which must be a unit constant in u.
pub struct DescentReport {
    pub unit: Cyc,
    pub samples: usize,
}

pub fn verify_descent(
    g: &JetGroup,
    datum: &ZeroToralDatum,
    pkg: &YuPackage,
    s_torus_elem: u32,
) -> Result<DescentReport> {
    let s = g.element(s_torus_elem);
    if g.element_order(&s) % g.p == 0 {
        return Err(Error::Invalid("descent needs a prime-to-p element".into()));
    }
    // theta_(>=0)(s): the positive-depth part is trivial on the Teichmueller
    // part, so this is theta at the section of s's residue... for s in the
    // Teichmueller set itself theta_(>=0)(s) = 1; the depth-zero part of the
    // ratio is carried by kappa already lacking it.
    let central = g.is_central(&s);
    let mut unit: Option<Cyc> = None;
    let mut samples = 0usize;
    for &k in &pkg.circ_k.elements {
        let km = g.element(k);
        if g.element_order(&km) % g.p != 0 && km != g.identity() {
            continue; // want topologically unipotent u
        }
        if !is_p_power_order(g, &km) {
            continue;
        }
        let sm = &s;
        if g.mul(sm, &km) != g.mul(&km, sm) {
            continue;
        }
        let su = g.mul(sm, &km);
        let su_loc = match pkg.circ_k.local(g.index_of(&su)) {
            Some(l) => l,
            None => continue,
        };
        let lhs = &pkg.kappa_trace[su_loc as usize];
        // kappa_s(u): for central s the centralizer is the whole group and
        // kappa_s = kappa; for regular s it is the torus and kappa_s = theta+
        let rhs = if central {
            let u_loc = pkg.circ_k.local(g.index_of(&km)).unwrap();
            pkg.kappa_trace[u_loc as usize].clone()
        } else {
            match datum.torus.local(g.index_of(&km)) {
                None => continue,
                Some(_) => datum.theta_value(g.index_of(&km)),
            }
        };
        if rhs.is_zero() {
            continue;
        }
        // ratio lhs / rhs via conjugate division
        let denom = rhs.abs2().try_to_rat().unwrap();
        let ratio = lhs
            .mul(&rhs.conj())
            .scale(&(Rat::from(BigInt::from(1)) / denom));
        match &unit {
            None => unit = Some(ratio),
            Some(u0) => {
                if *u0 != ratio {
                    return Err(Error::Invalid(format!(
                        "descent unit is not constant in u at sample {}",
                        samples
                    )));
                }
            }
        }
        samples += 1;
    }
    let unit = unit.ok_or_else(|| Error::Invalid("no commuting unipotent samples".into()))?;
    if unit.abs2() != Cyc::one() {
        return Err(Error::Invalid("descent factor is not a unit".into()));
    }
    Ok(DescentReport { unit, samples })
}

fn is_p_power_order(g: &JetGroup, m: &Mat2) -> bool {
    let mut o = g.element_order(m);
    while o % g.p == 0 {
        o /= g.p;
    }
    o == 1
}

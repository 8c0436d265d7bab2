//! Concrete finite models of jet groups `SL2/GL2(F_q[t]/t^(r+1))`.
//!
//! Elements are 2x2 matrices of jet-ring indices, packed into u64 keys and
//! stored sorted; all group structure (classes, filtration subgroups, tori,
//! transporters) is computed by direct enumeration against lookup tables.

use crate::error::{Error, Result};
use crate::jetring::JetRing;
use std::cell::OnceCell;

pub const DEFAULT_GROUP_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupKind {
    Sl2,
    Gl2,
}

pub type Mat2 = [u16; 4]; // row major: a b / c d

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TorusKind {
    Split,
    Elliptic,
}

pub struct JetGroup {
    pub kind: GroupKind,
    pub ring: JetRing,
    pub q: u64,
    pub p: u64,
    pub r: u32,
    /// packed element keys, sorted ascending
    pub elements: Vec<u64>,
    classes: OnceCell<ConjugacyClassData>,
    center: OnceCell<Vec<u32>>,
}

#[derive(Clone, Debug, Default)]
pub struct ClassFlags {
    pub semisimple: bool,
    pub unipotent: bool,
    pub regular_semisimple: bool,
    /// equal to regular_semisimple in these unramified models; imported
    /// tables carry it as independent data instead
    pub very_regular: bool,
    pub central: bool,
}

pub struct ConjugacyClassData {
    pub reps: Vec<Mat2>,
    pub rep_indices: Vec<u32>,
    pub sizes: Vec<usize>,
    pub centralizer_orders: Vec<usize>,
    pub element_orders: Vec<u64>,
    pub flags: Vec<ClassFlags>,
    /// class index of every group element
    pub class_of: Vec<u32>,
    /// class index of the inverse class
    pub inverse_class: Vec<u32>,
}

pub struct SubgroupModel {
    /// element indices into the parent, ascending
    pub elements: Vec<u32>,
    /// parent-indexed membership bitmap
    pub member: Vec<bool>,
    /// parent-indexed local position (u32::MAX when absent)
    pub position: Vec<u32>,
    /// left transversal: parent = union of rep * H
    pub transversal: Vec<u32>,
}

impl SubgroupModel {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, idx: u32) -> bool {
        self.member[idx as usize]
    }

    #[inline]
    pub fn local(&self, idx: u32) -> Option<u32> {
        let p = self.position[idx as usize];
        if p == u32::MAX {
            None
        } else {
            Some(p)
        }
    }
}

fn pack(m: &Mat2) -> u64 {
    ((m[0] as u64) << 48) | ((m[1] as u64) << 32) | ((m[2] as u64) << 16) | (m[3] as u64)
}

fn unpack(key: u64) -> Mat2 {
    [
        ((key >> 48) & 0xffff) as u16,
        ((key >> 32) & 0xffff) as u16,
        ((key >> 16) & 0xffff) as u16,
        (key & 0xffff) as u16,
    ]
}

pub fn build_group(kind: GroupKind, q: u64, r: u32, cap: u128) -> Result<JetGroup> {
    let (p, _) = crate::torus::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if p == 2 {
        return Err(Error::BadCharacteristic(
            p,
            "odd residue characteristic required".into(),
        ));
    }
    let expected: u128 = match kind {
        GroupKind::Sl2 => (q as u128).pow(3 * r) * (q as u128) * ((q as u128).pow(2) - 1),
        GroupKind::Gl2 => {
            (q as u128).pow(4 * r) * ((q as u128).pow(2) - 1) * ((q as u128).pow(2) - q as u128)
        }
    };
    if expected > cap {
        return Err(Error::TooLarge {
            what: format!("{:?} jet group at q={}, r={}", kind, q, r),
            order: expected,
            cap,
        });
    }
    let ring = JetRing::new(q, r)?;
    let s = ring.size as u16;
    let mut elements: Vec<u64> = Vec::with_capacity(expected as usize);
    match kind {
        GroupKind::Sl2 => {
            for a in 0..s {
                if ring.is_unit(a) {
                    let ainv = ring.inv(a);
                    for b in 0..s {
                        for c in 0..s {
                            // d = (1 + bc) / a
                            let d = ring.mul(ainv, ring.add(1, ring.mul(b, c)));
                            elements.push(pack(&[a, b, c, d]));
                        }
                    }
                } else {
                    for b in 0..s {
                        for c in 0..s {
                            for d in 0..s {
                                if ring.sub(ring.mul(a, d), ring.mul(b, c)) == 1 {
                                    elements.push(pack(&[a, b, c, d]));
                                }
                            }
                        }
                    }
                }
            }
        }
        GroupKind::Gl2 => {
            for a in 0..s {
                for b in 0..s {
                    for c in 0..s {
                        for d in 0..s {
                            let det = ring.sub(ring.mul(a, d), ring.mul(b, c));
                            if ring.is_unit(det) {
                                elements.push(pack(&[a, b, c, d]));
                            }
                        }
                    }
                }
            }
        }
    }
    elements.sort_unstable();
    assert_eq!(elements.len() as u128, expected, "order formula violated");
    Ok(JetGroup {
        kind,
        ring,
        q,
        p,
        r,
        elements,
        classes: OnceCell::new(),
        center: OnceCell::new(),
    })
}

impl JetGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &Mat2) -> u32 {
        let key = pack(m);
        self.elements
            .binary_search(&key)
            .expect("matrix not in group") as u32
    }

    pub fn element(&self, idx: u32) -> Mat2 {
        unpack(self.elements[idx as usize])
    }

    pub fn identity(&self) -> Mat2 {
        [1, 0, 0, 1]
    }

    pub fn identity_index(&self) -> u32 {
        self.index_of(&self.identity())
    }

    #[inline]
    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let r = &self.ring;
        [
            r.add(r.mul(x[0], y[0]), r.mul(x[1], y[2])),
            r.add(r.mul(x[0], y[1]), r.mul(x[1], y[3])),
            r.add(r.mul(x[2], y[0]), r.mul(x[3], y[2])),
            r.add(r.mul(x[2], y[1]), r.mul(x[3], y[3])),
        ]
    }

    pub fn det(&self, x: &Mat2) -> u16 {
        let r = &self.ring;
        r.sub(r.mul(x[0], x[3]), r.mul(x[1], x[2]))
    }

    pub fn inv(&self, x: &Mat2) -> Mat2 {
        let r = &self.ring;
        let dinv = r.inv(self.det(x));
        [
            r.mul(dinv, x[3]),
            r.mul(dinv, r.neg(x[1])),
            r.mul(dinv, r.neg(x[2])),
            r.mul(dinv, x[0]),
        ]
    }

    #[inline]
    pub fn conj(&self, g: &Mat2, x: &Mat2) -> Mat2 {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    pub fn pow(&self, x: &Mat2, e: u64) -> Mat2 {
        let mut acc = self.identity();
        let mut base = *x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: &Mat2) -> u64 {
        let id = self.identity();
        let mut y = *x;
        let mut o = 1u64;
        while y != id {
            y = self.mul(&y, x);
            o += 1;
        }
        o
    }

    /// Commuting factorization g = s u with s of prime-to-p order and u of
    /// p-power order, both powers of g.
    pub fn topological_jordan(&self, g: &Mat2) -> (Mat2, Mat2) {
        let n = self.element_order(g);
        let p = self.p;
        let mut pa = 1u64;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            pa *= p;
        }
        // s = g^(pa c) with pa c = 1 mod m; u = g^(m d) with m d = 1 mod pa
        let s = if m == 1 {
            self.identity()
        } else {
            self.pow(g, (pa * inverse_mod(pa % m, m)) % n)
        };
        let u = if pa == 1 {
            self.identity()
        } else {
            self.pow(g, (m * inverse_mod(m % pa, pa)) % n)
        };
        debug_assert_eq!(self.mul(&s, &u), *g);
        debug_assert_eq!(self.mul(&u, &s), *g);
        (s, u)
    }

    pub fn is_central(&self, x: &Mat2) -> bool {
        // scalar matrices
        x[1] == 0 && x[2] == 0 && x[0] == x[3]
    }

    pub fn center(&self) -> &Vec<u32> {
        self.center.get_or_init(|| {
            (0..self.order() as u32)
                .filter(|&i| self.is_central(&self.element(i)))
                .collect()
        })
    }

    /// True when the reduction mod t has distinct eigenvalues.
    pub fn residually_regular(&self, x: &Mat2) -> bool {
        let f = &self.ring.field;
        let a = self.ring.residue(x[0]);
        let b = self.ring.residue(x[1]);
        let c = self.ring.residue(x[2]);
        let d = self.ring.residue(x[3]);
        let tr = f.add(a, d);
        let det = f.sub(f.mul(a, d), f.mul(b, c));
        let four = f.from_int(4);
        f.sub(f.mul(tr, tr), f.mul(four, det)) != 0
    }

    pub fn classes(&self) -> &ConjugacyClassData {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> ConjugacyClassData {
        let n = self.order();
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut rep_indices = Vec::new();
        let mut sizes = Vec::new();
        for i in 0..n as u32 {
            if class_of[i as usize] != u32::MAX {
                continue;
            }
            let k = reps.len() as u32;
            let x = self.element(i);
            let mut size = 0usize;
            for j in 0..n as u32 {
                let g = self.element(j);
                let y = self.conj(&g, &x);
                let yi = self.index_of(&y) as usize;
                if class_of[yi] == u32::MAX {
                    class_of[yi] = k;
                    size += 1;
                }
            }
            reps.push(x);
            rep_indices.push(i);
            sizes.push(size);
        }
        let k = reps.len();
        let mut element_orders = Vec::with_capacity(k);
        for rep in &reps {
            element_orders.push(self.element_order(rep));
        }
        // canonical class order: by element order, then by least element index
        let mut perm: Vec<usize> = (0..k).collect();
        perm.sort_by_key(|&c| (element_orders[c], rep_indices[c]));
        let mut old_to_new = vec![0u32; k];
        for (new, &old) in perm.iter().enumerate() {
            old_to_new[old] = new as u32;
        }
        let reps: Vec<Mat2> = perm.iter().map(|&c| reps[c]).collect();
        let rep_indices: Vec<u32> = perm.iter().map(|&c| rep_indices[c]).collect();
        let sizes: Vec<usize> = perm.iter().map(|&c| sizes[c]).collect();
        let element_orders: Vec<u64> = perm.iter().map(|&c| element_orders[c]).collect();
        for c in class_of.iter_mut() {
            *c = old_to_new[*c as usize];
        }
        let mut flags = Vec::with_capacity(k);
        for (rep, &o) in reps.iter().zip(&element_orders) {
            let semisimple = o % self.p != 0;
            let unipotent = is_prime_power_of(o, self.p);
            let regular_semisimple = semisimple && self.residually_regular(rep);
            flags.push(ClassFlags {
                semisimple,
                unipotent,
                regular_semisimple,
                very_regular: regular_semisimple,
                central: self.is_central(rep),
            });
        }
        let centralizer_orders: Vec<usize> = sizes.iter().map(|s| n / s).collect();
        let mut inverse_class = vec![0u32; k];
        for (c, rep) in reps.iter().enumerate() {
            let inv = self.inv(rep);
            inverse_class[c] = class_of[self.index_of(&inv) as usize];
        }
        assert_eq!(sizes.iter().sum::<usize>(), n, "class sizes must sum to |G|");
        ConjugacyClassData {
            reps,
            rep_indices,
            sizes,
            centralizer_orders,
            element_orders,
            flags,
            class_of,
            inverse_class,
        }
    }

    pub fn subgroup_from_predicate<F: Fn(&Mat2) -> bool>(&self, pred: F) -> SubgroupModel {
        let n = self.order();
        let mut member = vec![false; n];
        let mut elements = Vec::new();
        for i in 0..n as u32 {
            if pred(&self.element(i)) {
                member[i as usize] = true;
                elements.push(i);
            }
        }
        self.subgroup_from_indices(elements, member)
    }

    fn subgroup_from_indices(&self, elements: Vec<u32>, member: Vec<bool>) -> SubgroupModel {
        let n = self.order();
        let mut position = vec![u32::MAX; n];
        for (loc, &idx) in elements.iter().enumerate() {
            position[idx as usize] = loc as u32;
        }
        let mut in_seen_coset = vec![false; n];
        let mut transversal = Vec::with_capacity(n / elements.len().max(1));
        for i in 0..n as u32 {
            if in_seen_coset[i as usize] {
                continue;
            }
            transversal.push(i);
            let g = self.element(i);
            for &h in &elements {
                let gh = self.mul(&g, &self.element(h));
                in_seen_coset[self.index_of(&gh) as usize] = true;
            }
        }
        assert_eq!(
            transversal.len() * elements.len(),
            n,
            "transversal size times subgroup order must be |G|"
        );
        SubgroupModel {
            elements,
            member,
            position,
            transversal,
        }
    }

    /// Image of the Moy-Prasad subgroup of depth s (s = num/den, or slightly
    /// above it when `plus` is set). Depth 0 is the whole group; on (k-1, k]
    /// the image is the congruence kernel mod t^k.
    pub fn moy_prasad(&self, num: u32, den: u32, plus: bool) -> Result<SubgroupModel> {
        if den == 0 {
            return Err(Error::DepthOutOfRange("0/0".into()));
        }
        if num == 0 && !plus {
            return Ok(self.subgroup_from_predicate(|_| true));
        }
        let k = if plus {
            num / den + 1
        } else {
            (num + den - 1) / den
        };
        if k > self.r + 1 {
            return Err(Error::DepthOutOfRange(format!(
                "{}/{}{} exceeds r+1 = {}",
                num,
                den,
                if plus { "+" } else { "" },
                self.r + 1
            )));
        }
        Ok(self.congruence_kernel(k))
    }

    /// Elements congruent to 1 mod t^k.
    pub fn congruence_kernel(&self, k: u32) -> SubgroupModel {
        let ring = &self.ring;
        self.subgroup_from_predicate(move |m| {
            (0..k).all(|i| {
                ring.coeff(m[0], i) == u16::from(i == 0)
                    && ring.coeff(m[1], i) == 0
                    && ring.coeff(m[2], i) == 0
                    && ring.coeff(m[3], i) == u16::from(i == 0)
            })
        })
    }

    /// Maximal torus subgroups at the hyperspecial point: the diagonal torus,
    /// or the nonsplit one realized inside R[sqrt(eps)] for the smallest
    /// nonsquare eps of the residue field.
    pub fn torus_subgroup(&self, kind: TorusKind) -> SubgroupModel {
        match kind {
            TorusKind::Split => self.subgroup_from_predicate(|m| m[1] == 0 && m[2] == 0),
            TorusKind::Elliptic => {
                let eps = self.ring.field.nonsquare();
                let ring = &self.ring;
                self.subgroup_from_predicate(move |m| {
                    // a  eps*b
                    // b  a
                    m[0] == m[3] && m[1] == ring.mul(ring.scalar(eps), m[2])
                })
            }
        }
    }

    /// Torus elements whose reduction has distinct eigenvalues, together with
    /// all their conjugates and conjugating data (g, t) with element = g t g^-1.
    pub fn very_regular_elements(&self, torus: &SubgroupModel) -> VeryRegularSet {
        let in_torus: Vec<u32> = torus
            .elements
            .iter()
            .copied()
            .filter(|&i| self.residually_regular(&self.element(i)))
            .collect();
        let n = self.order();
        let mut witness: Vec<Option<(u32, u32)>> = vec![None; n];
        for &t in &in_torus {
            let tm = self.element(t);
            for g in 0..n as u32 {
                let gm = self.element(g);
                let x = self.conj(&gm, &tm);
                let xi = self.index_of(&x) as usize;
                if witness[xi].is_none() {
                    witness[xi] = Some((t, g));
                }
            }
        }
        let mut all = Vec::new();
        for (idx, w) in witness.iter().enumerate() {
            if let Some((t, g)) = w {
                all.push((idx as u32, *t, *g));
            }
        }
        VeryRegularSet { in_torus, all }
    }

    /// Transporter cosets {g : g T1 g^-1 inside T2} / T2. Empty when the tori
    /// are not conjugate.
    pub fn weyl_transporter(&self, t1: &SubgroupModel, t2: &SubgroupModel) -> Vec<u32> {
        let n = self.order();
        let mut coset_seen = vec![false; n];
        let mut reps = Vec::new();
        for g in 0..n as u32 {
            if coset_seen[g as usize] {
                continue;
            }
            let gm = self.element(g);
            let ok = t1.elements.iter().all(|&t| {
                let x = self.conj(&gm, &self.element(t));
                t2.contains(self.index_of(&x))
            });
            if ok {
                reps.push(g);
                for &h in &t2.elements {
                    let gh = self.mul(&gm, &self.element(h));
                    coset_seen[self.index_of(&gh) as usize] = true;
                }
            }
        }
        reps
    }
}

pub struct VeryRegularSet {
    /// very regular elements lying in the torus itself
    pub in_torus: Vec<u32>,
    /// (element, torus element, conjugator): element = g t g^-1
    pub all: Vec<(u32, u32, u32)>,
}

fn is_prime_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    if m <= 1 {
        return 0;
    }
    let (mut t, mut newt) = (0i128, 1i128);
    let (mut r, mut newr) = (m as i128, (a % m) as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    assert!(r == 1, "not invertible");
    t.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_f3_order_and_classes() {
        let g = build_group(GroupKind::Sl2, 3, 0, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 24);
        let cls = g.classes();
        assert_eq!(cls.reps.len(), 7);
        assert_eq!(cls.sizes.iter().sum::<usize>(), 24);
        let id_class = cls.class_of[g.identity_index() as usize] as usize;
        assert_eq!(cls.sizes[id_class], 1);
        assert_eq!(cls.centralizer_orders[id_class], 24);
    }

    #[test]
    fn sl2_f5_r1_order() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 15000);
    }

    #[test]
    fn gl2_f3_r1_order() {
        let g = build_group(GroupKind::Gl2, 3, 1, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 3888);
    }

    #[test]
    fn char2_rejected() {
        assert!(matches!(
            build_group(GroupKind::Sl2, 4, 0, DEFAULT_GROUP_CAP),
            Err(Error::BadCharacteristic(2, _))
        ));
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            build_group(GroupKind::Sl2, 25, 1, DEFAULT_GROUP_CAP),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn jordan_decomposition() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let id = g.identity();
        assert_eq!(g.topological_jordan(&id), (id, id));
        // an element of order 2p: -1 times a unipotent
        let t = g.ring.t();
        let u = [1, g.ring.add(1, t), 0, 1];
        let m1 = [g.ring.neg(1), 0, 0, g.ring.neg(1)];
        let x = g.mul(&m1, &u);
        assert_eq!(g.element_order(&x), 10);
        let (s, uu) = g.topological_jordan(&x);
        assert_eq!(g.element_order(&s), 2);
        assert_eq!(g.element_order(&uu), 5);
        assert_eq!(g.mul(&s, &uu), x);
        assert_eq!(s, g.pow(&x, 5));
        assert_eq!(uu, g.pow(&x, 6));
    }

    #[test]
    fn moy_prasad_filtration() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let full = g.moy_prasad(0, 1, false).unwrap();
        assert_eq!(full.order(), 15000);
        let half = g.moy_prasad(1, 2, false).unwrap();
        assert_eq!(half.order(), 125); // matrices 1 + t X, X in sl2(F_5)
        let one_plus = g.moy_prasad(1, 1, true).unwrap();
        assert_eq!(one_plus.order(), 1);
        assert!(g.moy_prasad(3, 1, false).is_err());
        for &i in &one_plus.elements {
            assert!(half.contains(i));
        }
        // the depth-1/2 layer is abelian in the mod t^2 model
        let a = half.elements[3];
        let b = half.elements[7];
        let (am, bm) = (g.element(a), g.element(b));
        let comm = g.mul(&g.mul(&am, &bm), &g.inv(&g.mul(&bm, &am)));
        assert_eq!(comm, g.identity());
    }

    #[test]
    fn torus_orders() {
        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let split = g.torus_subgroup(TorusKind::Split);
        assert_eq!(split.order(), 20); // (q-1) q^r
        let ell = g.torus_subgroup(TorusKind::Elliptic);
        assert_eq!(ell.order(), 30); // (q+1) q^r
        let count = ell
            .elements
            .iter()
            .filter(|&&i| g.element_order(&g.element(i)) % g.p != 0)
            .count();
        assert_eq!(count, 6); // prime-to-p part has order q+1

        let g3 = build_group(GroupKind::Sl2, 3, 0, DEFAULT_GROUP_CAP).unwrap();
        let split3 = g3.torus_subgroup(TorusKind::Split);
        assert_eq!(split3.order(), 2);
    }

    #[test]
    fn very_regular_counts() {
        let g5 = build_group(GroupKind::Sl2, 5, 0, DEFAULT_GROUP_CAP).unwrap();
        let ell = g5.torus_subgroup(TorusKind::Elliptic);
        let vr = g5.very_regular_elements(&ell);
        assert_eq!(vr.in_torus.len(), 4); // 6 minus {+-1}
        for &(x, t, c) in &vr.all {
            let expect = g5.conj(&g5.element(c), &g5.element(t));
            assert_eq!(g5.element(x), expect);
        }

        let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let ell = g.torus_subgroup(TorusKind::Elliptic);
        let vr = g.very_regular_elements(&ell);
        assert_eq!(vr.in_torus.len(), 20); // 30 - 2*5

        let g3 = build_group(GroupKind::Sl2, 3, 0, DEFAULT_GROUP_CAP).unwrap();
        let split3 = g3.torus_subgroup(TorusKind::Split);
        let vr3 = g3.very_regular_elements(&split3);
        assert!(vr3.in_torus.is_empty()); // split torus of SL2(F_3) is {+-1}
    }

    #[test]
    fn transporter_counts() {
        let g = build_group(GroupKind::Sl2, 5, 0, DEFAULT_GROUP_CAP).unwrap();
        let ell = g.torus_subgroup(TorusKind::Elliptic);
        let split = g.torus_subgroup(TorusKind::Split);
        assert_eq!(g.weyl_transporter(&ell, &ell).len(), 2);
        assert!(g.weyl_transporter(&split, &ell).is_empty());
        // the reduction map gives the same count one level up
        let g1 = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
        let ell1 = g1.torus_subgroup(TorusKind::Elliptic);
        assert_eq!(g1.weyl_transporter(&ell1, &ell1).len(), 2);
    }

    #[test]
    fn class_flags() {
        let g = build_group(GroupKind::Sl2, 5, 0, DEFAULT_GROUP_CAP).unwrap();
        let cls = g.classes();
        for (k, f) in cls.flags.iter().enumerate() {
            let o = cls.element_orders[k];
            assert_eq!(f.semisimple, o % 5 != 0);
            assert_eq!(f.unipotent, o == 1 || o == 5);
            assert_eq!(cls.sizes[k] * cls.centralizer_orders[k], g.order());
        }
    }
}

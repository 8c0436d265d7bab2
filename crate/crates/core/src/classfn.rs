//! Class functions, inner products, induction and restriction, and characters
//! of abelian subgroups.
//!
//! Values are exact cyclotomic numbers throughout; a class function on a jet
//! group stores one value per conjugacy class. Functions on subgroups are
//! stored per subgroup element (their classes are not tracked).

use crate::cyclotomic::{rat_int, Cyc, Rat};
use crate::error::{Error, Result};
use crate::group::{JetGroup, SubgroupModel};
use num::bigint::BigInt;

#[derive(Clone)]
pub struct ClassFunction {
    /// one value per conjugacy class of the ambient group
    pub values: Vec<Cyc>,
}

impl ClassFunction {
    pub fn constant(g: &JetGroup, v: Cyc) -> ClassFunction {
        ClassFunction {
            values: vec![v; g.classes().reps.len()],
        }
    }

    pub fn at_element(&self, g: &JetGroup, idx: u32) -> &Cyc {
        &self.values[g.classes().class_of[idx as usize] as usize]
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> ClassFunction {
        ClassFunction {
            values: self.values.iter().map(|a| a.scale(r)).collect(),
        }
    }

    pub fn neg(&self) -> ClassFunction {
        ClassFunction {
            values: self.values.iter().map(|a| a.neg()).collect(),
        }
    }
}

/// Hermitian inner product (1/|G|) sum over G of f1 conj(f2).
pub fn inner_product(g: &JetGroup, f1: &ClassFunction, f2: &ClassFunction) -> Result<Cyc> {
    let cls = g.classes();
    if f1.values.len() != cls.reps.len() || f2.values.len() != cls.reps.len() {
        return Err(Error::DomainMismatch);
    }
    let mut acc = Cyc::zero(1);
    for k in 0..cls.reps.len() {
        let term = f1.values[k]
            .mul(&f2.values[k].conj())
            .scale(&rat_int(cls.sizes[k] as i64));
        acc = acc.add(&term);
    }
    Ok(acc.scale(&Rat::new(BigInt::from(1), BigInt::from(g.order()))))
}

/// Same, but summing only over the classes flagged in `locus`, still
/// normalized by |G|.
pub fn inner_product_on(
    g: &JetGroup,
    f1: &ClassFunction,
    f2: &ClassFunction,
    locus: &[bool],
) -> Result<Cyc> {
    let cls = g.classes();
    if f1.values.len() != cls.reps.len()
        || f2.values.len() != cls.reps.len()
        || locus.len() != cls.reps.len()
    {
        return Err(Error::DomainMismatch);
    }
    let mut acc = Cyc::zero(1);
    for k in 0..cls.reps.len() {
        if !locus[k] {
            continue;
        }
        let term = f1.values[k]
            .mul(&f2.values[k].conj())
            .scale(&rat_int(cls.sizes[k] as i64));
        acc = acc.add(&term);
    }
    Ok(acc.scale(&Rat::new(BigInt::from(1), BigInt::from(g.order()))))
}

/// A function on a subgroup, one value per subgroup element (local order).
#[derive(Clone)]
pub struct SubgroupFunction {
    pub values: Vec<Cyc>,
}

impl SubgroupFunction {
    pub fn at(&self, h: &SubgroupModel, parent_idx: u32) -> Option<&Cyc> {
        h.local(parent_idx).map(|loc| &self.values[loc as usize])
    }
}

/// Frobenius induction of a subgroup function to a class function.
pub fn induce(g: &JetGroup, h: &SubgroupModel, f: &SubgroupFunction) -> ClassFunction {
    let cls = g.classes();
    let mut values = Vec::with_capacity(cls.reps.len());
    for rep in &cls.reps {
        let mut acc = Cyc::zero(1);
        for &x in &h.transversal {
            let xm = g.element(x);
            let y = g.mul(&g.mul(&g.inv(&xm), rep), &xm);
            if let Some(v) = f.at(h, g.index_of(&y)) {
                acc = acc.add(v);
            }
        }
        values.push(acc);
    }
    ClassFunction { values }
}

/// Restriction of a class function to a subgroup.
pub fn restrict(g: &JetGroup, h: &SubgroupModel, f: &ClassFunction) -> SubgroupFunction {
    SubgroupFunction {
        values: h
            .elements
            .iter()
            .map(|&i| f.at_element(g, i).clone())
            .collect(),
    }
}

/// Inner product on a subgroup, (1/|H|) sum over H.
pub fn subgroup_inner_product(
    h: &SubgroupModel,
    f1: &SubgroupFunction,
    f2: &SubgroupFunction,
) -> Cyc {
    let mut acc = Cyc::zero(1);
    for k in 0..h.order() {
        acc = acc.add(&f1.values[k].mul(&f2.values[k].conj()));
    }
    acc.scale(&Rat::new(BigInt::from(1), BigInt::from(h.order())))
}

/// Structure of an abelian subgroup: a polycyclic generating sequence with
/// unique mixed-radix coordinates for every element.
pub struct AbelianStructure {
    /// local indices of the generators
    pub gens: Vec<u32>,
    /// relative orders: o_i = order of gen_i modulo the previous ones
    pub rel_orders: Vec<u64>,
    /// coordinates of every element (local order), len = |H|
    pub coords: Vec<Vec<u64>>,
    /// tails: gen_i ^ o_i expressed in coordinates of gens 0..i
    pub tails: Vec<Vec<u64>>,
    /// exponent of the group
    pub exponent: u64,
}

pub fn abelian_structure(g: &JetGroup, h: &SubgroupModel) -> AbelianStructure {
    let n = h.order();
    let mut covered = vec![false; n];
    let id_local = h.local(g.identity_index()).expect("subgroup without identity") as usize;
    covered[id_local] = true;
    let mut covered_els: Vec<u32> = vec![g.identity_index()];
    let mut gens: Vec<u32> = Vec::new();
    let mut rel_orders: Vec<u64> = Vec::new();
    let mut coords: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut tails: Vec<Vec<u64>> = Vec::new();
    while covered_els.len() < n {
        // element with the largest relative order modulo the covered part
        let mut best: Option<(u32, u64)> = None;
        for &e in &h.elements {
            let loc = h.local(e).unwrap() as usize;
            if covered[loc] {
                continue;
            }
            let em = g.element(e);
            let mut x = em;
            let mut k = 1u64;
            while !covered[h.local(g.index_of(&x)).unwrap() as usize] {
                x = g.mul(&x, &em);
                k += 1;
            }
            if best.map_or(true, |(_, bo)| k > bo) {
                best = Some((e, k));
            }
        }
        let (gen, o) = best.unwrap();
        let gm = g.element(gen);
        let tail_idx = {
            let x = g.pow(&gm, o);
            g.index_of(&x)
        };
        let tail_coords = coords[h.local(tail_idx).unwrap() as usize].clone();
        // every new element is prev * gen^e, e in 1..o
        let snapshot = covered_els.clone();
        for e in 1..o {
            let ge = g.pow(&gm, e);
            for &prev in &snapshot {
                let x = g.mul(&g.element(prev), &ge);
                let xi = g.index_of(&x);
                let loc = h.local(xi).expect("abelian subgroup not closed") as usize;
                assert!(!covered[loc], "coordinates not unique; is H abelian?");
                covered[loc] = true;
                let mut c = coords[h.local(prev).unwrap() as usize].clone();
                c.resize(gens.len(), 0);
                c.push(e);
                coords[loc] = c;
                covered_els.push(xi);
            }
        }
        for &prev in &snapshot {
            let loc = h.local(prev).unwrap() as usize;
            coords[loc].resize(gens.len() + 1, 0);
        }
        gens.push(gen);
        rel_orders.push(o);
        tails.push(tail_coords);
    }
    for c in coords.iter_mut() {
        c.resize(gens.len(), 0);
    }
    let mut exponent = 1u64;
    for &e in &h.elements {
        let o = g.element_order(&g.element(e));
        exponent = lcm(exponent, o);
    }
    AbelianStructure {
        gens,
        rel_orders,
        coords,
        tails,
        exponent,
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A character of an abelian subgroup, tabulated over the whole subgroup as
/// exponents of a fixed root of unity of order = exponent(H).
#[derive(Clone)]
pub struct AbelianCharacter {
    pub conductor: u64,
    /// zeta exponent per local element
    pub table: Vec<u64>,
}

impl AbelianCharacter {
    pub fn value(&self, local: u32) -> Cyc {
        Cyc::root_of_unity(self.conductor as u32, self.table[local as usize] as i64)
    }

    pub fn value_at(&self, h: &SubgroupModel, parent_idx: u32) -> Option<Cyc> {
        h.local(parent_idx).map(|loc| self.value(loc))
    }

    pub fn to_function(&self) -> SubgroupFunction {
        SubgroupFunction {
            values: (0..self.table.len())
                .map(|i| self.value(i as u32))
                .collect(),
        }
    }

    pub fn is_trivial_on(&self, locals: &[u32]) -> bool {
        locals.iter().all(|&l| self.table[l as usize] == 0)
    }

    pub fn mul(&self, other: &AbelianCharacter) -> AbelianCharacter {
        assert_eq!(self.conductor, other.conductor);
        AbelianCharacter {
            conductor: self.conductor,
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(a, b)| (a + b) % self.conductor)
                .collect(),
        }
    }

    pub fn inverse(&self) -> AbelianCharacter {
        AbelianCharacter {
            conductor: self.conductor,
            table: self
                .table
                .iter()
                .map(|a| (self.conductor - a) % self.conductor)
                .collect(),
        }
    }

    pub fn is_quadratic(&self) -> bool {
        self.table.iter().all(|&a| (2 * a) % self.conductor == 0)
    }
}

/// All characters of an abelian subgroup, in a deterministic order.
pub fn abelian_characters(s: &AbelianStructure) -> Vec<AbelianCharacter> {
    let e = s.exponent;
    // enumerate exponent tuples at the generators, honoring tail relations:
    // chi(gen_i)^(o_i) = chi(tail_i)
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    for i in 0..s.gens.len() {
        let o = s.rel_orders[i];
        let mut next = Vec::new();
        for partial in &out {
            let mut tail_e: u64 = 0;
            for (j, &tc) in s.tails[i].iter().enumerate() {
                tail_e = (tail_e + partial[j] * (tc % e)) % e;
            }
            // solve o * x = tail_e  (mod e)
            let d = gcd(o % e, e);
            assert!(tail_e % d == 0, "character extension must exist");
            let e_d = e / d;
            let x0 = (tail_e / d % e_d) * inverse_mod_u((o / d) % e_d, e_d) % e_d;
            for k in 0..d {
                let mut c = partial.clone();
                c.push((x0 + k * e_d) % e);
                next.push(c);
            }
        }
        out = next;
    }
    let total: u64 = s.rel_orders.iter().product();
    assert_eq!(out.len() as u64, total, "character count must be |H|");
    let mut chars: Vec<AbelianCharacter> = out
        .into_iter()
        .map(|gen_exps| {
            let table: Vec<u64> = s
                .coords
                .iter()
                .map(|c| {
                    let mut acc: u64 = 0;
                    for (i, &ci) in c.iter().enumerate() {
                        acc = (acc + gen_exps[i] % e * (ci % e)) % e;
                    }
                    acc
                })
                .collect();
            AbelianCharacter {
                conductor: e,
                table,
            }
        })
        .collect();
    chars.sort_by(|a, b| a.table.cmp(&b.table));
    chars
}

fn inverse_mod_u(a: u64, m: u64) -> u64 {
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

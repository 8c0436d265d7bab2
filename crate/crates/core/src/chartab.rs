//! Character tables by the Dixon-Burnside method, verification, and pattern
//! ("litmus") searches over irreducibles.
//!
//! Class-algebra structure constants are diagonalized simultaneously over a
//! prime field F_l with l = 1 mod exponent(G) and l > 2 sqrt(|G|); the
//! resulting eigenvalue tuples are lifted to exact cyclotomic character
//! values. A table is never returned unverified.

use crate::classfn::ClassFunction;
use crate::cyclotomic::{Cyc, CycAcc};
use crate::error::{Error, Result};
use crate::group::JetGroup;
use crate::smallgroup::SmallGroup;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassType {
    Unit,
    Semisimple,
    Unipotent,
    RegularSemisimple,
    Other,
}

/// A full irreducible character table with class metadata. Built tables get
/// their metadata from the group; imported tables carry it as data.
pub struct CharacterTable {
    pub group_order: u128,
    pub class_names: Vec<String>,
    pub class_orders: Vec<u64>,
    pub class_sizes: Vec<u128>,
    pub centralizer_orders: Vec<u128>,
    pub class_type: Vec<ClassType>,
    /// torus membership labels per class (imported tables only)
    pub tori: Vec<Vec<String>>,
    pub row_names: Vec<String>,
    pub rows: Vec<Vec<Cyc>>,
    /// unipotent flags per row; data for imported tables, never inferred
    pub unipotent_rows: Vec<bool>,
}

impl CharacterTable {
    pub fn degree(&self, row: usize) -> &Cyc {
        &self.rows[row][0]
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|n| n == name)
    }

    pub fn row_index(&self, name: &str) -> Option<usize> {
        self.row_names.iter().position(|n| n == name)
    }

    pub fn row_as_class_function(&self, row: usize) -> ClassFunction {
        ClassFunction {
            values: self.rows[row].clone(),
        }
    }
}

/// GAP-style class names: order plus a letter, in class order.
pub fn class_names_from_orders(orders: &[u64]) -> Vec<String> {
    let mut counts: std::collections::HashMap<u64, u32> = std::collections::HashMap::new();
    orders
        .iter()
        .map(|&o| {
            let c = counts.entry(o).or_insert(0);
            let name = format!("{}{}", o, (b'a' + (*c % 26) as u8) as char);
            *c += 1;
            name
        })
        .collect()
}

// ---- modular arithmetic over F_l ----

#[derive(Clone, Copy)]
struct ModP {
    l: u64,
}

impl ModP {
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.l {
            s - self.l
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.l - b
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.l
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.l - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime l = 1 mod e with l > 2 sqrt(n).
fn dixon_prime(e: u64, n: u128) -> u64 {
    let mut lo = 1u64;
    while (lo as u128) * (lo as u128) < 4 * n {
        lo += 1;
    }
    let mut l = e + 1;
    loop {
        if l > lo && is_prime(l) {
            return l;
        }
        l += e;
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Class-algebra structure constants a[i][j][k] = #{(x,y) in C_i x C_j : xy = z_k}.
pub struct ClassAlgebraTable {
    pub k: usize,
    pub a: Vec<u32>, // index (i*k + j)*k + kk
}

impl ClassAlgebraTable {
    #[inline]
    pub fn get(&self, i: usize, j: usize, kk: usize) -> u32 {
        self.a[(i * self.k + j) * self.k + kk]
    }
}

pub fn class_algebra(g: &JetGroup) -> ClassAlgebraTable {
    let cls = g.classes();
    let k = cls.reps.len();
    let mut a = vec![0u32; k * k * k];
    for (kk, z) in cls.reps.iter().enumerate() {
        for x in 0..g.order() as u32 {
            let xm = g.element(x);
            let y = g.mul(&g.inv(&xm), z);
            let i = cls.class_of[x as usize] as usize;
            let j = cls.class_of[g.index_of(&y) as usize] as usize;
            a[(i * k + j) * k + kk] += 1;
        }
    }
    ClassAlgebraTable { k, a }
}

/// Everything the Dixon core needs, independent of how the group is stored.
pub struct DixonInput {
    pub group_order: u128,
    pub sizes: Vec<u128>,
    pub inverse_class: Vec<usize>,
    pub exponent: u64,
    /// class of the s-th power of each class representative, s in 0..exponent
    pub power_class: Vec<Vec<usize>>,
    pub structure: ClassAlgebraTable,
}

/// The Dixon-Burnside core: eigenvalue tuples of the class algebra over F_l
/// lifted to exact cyclotomic character rows. Rows come out unsorted.
pub fn dixon_core(input: &DixonInput) -> Result<Vec<Vec<Cyc>>> {
    let k = input.sizes.len();
    if k > 300 {
        return Err(Error::TooLarge {
            what: "class count for Dixon".into(),
            order: k as u128,
            cap: 300,
        });
    }
    let e = input.exponent;
    let l = dixon_prime(e, input.group_order);
    let m = ModP { l };
    let alg = &input.structure;

    // simultaneous eigenspaces of the class matrices over F_l
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity_basis(k)];
    for i in 0..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mat: Vec<Vec<u64>> = (0..k)
            .map(|row| (0..k).map(|col| alg.get(i, col, row) as u64 % l).collect())
            .collect();
        let mut next = Vec::new();
        for s in spaces {
            if s.len() == 1 {
                next.push(s);
                continue;
            }
            for piece in split_space(&m, &mat, &s) {
                next.push(piece);
            }
        }
        spaces = next;
    }
    assert!(
        spaces.iter().all(|s| s.len() == 1) && spaces.len() == k,
        "class algebra did not split into {} lines",
        k
    );

    // eigenvalue tuples omega_chi(i)
    let mut omegas: Vec<Vec<u64>> = Vec::with_capacity(k);
    for s in &spaces {
        let v = &s[0];
        let pivot = v.iter().position(|&x| x != 0).unwrap();
        let pinv = m.inv(v[pivot]);
        let mut om = Vec::with_capacity(k);
        for i in 0..k {
            let mut acc = 0u64;
            for col in 0..k {
                acc = m.add(acc, m.mul(alg.get(i, col, pivot) as u64 % l, v[col]));
            }
            om.push(m.mul(acc, pinv));
        }
        omegas.push(om);
    }

    // degrees from the orthogonality relation
    let size_mod: Vec<u64> = input.sizes.iter().map(|&s| (s % l as u128) as u64).collect();
    let order_mod = (input.group_order % l as u128) as u64;
    let mut degrees = Vec::with_capacity(k);
    for om in &omegas {
        let mut s = 0u64;
        for i in 0..k {
            let ii = input.inverse_class[i];
            s = m.add(s, m.mul(m.mul(om[i], om[ii]), m.inv(size_mod[i])));
        }
        let d2 = m.mul(order_mod, m.inv(s));
        let d = sqrt_mod(&m, d2).expect("degree must be a square mod l");
        degrees.push(d.min(l - d));
    }

    // z: fixed element of order e in F_l
    let z = {
        let mut w = 2u64;
        loop {
            let cand = m.pow(w, (l - 1) / e);
            if (1..e).all(|j| m.pow(cand, j) != 1) {
                break cand;
            }
            w += 1;
        }
    };
    let einv = m.inv(e % l);

    let mut rows: Vec<Vec<Cyc>> = Vec::with_capacity(k);
    for (chi, om) in omegas.iter().enumerate() {
        let d = degrees[chi];
        let chi_mod: Vec<u64> = (0..k)
            .map(|i| m.mul(m.mul(d, om[i]), m.inv(size_mod[i])))
            .collect();
        let mut row = Vec::with_capacity(k);
        for i in 0..k {
            let mut acc = CycAcc::new(e as u32);
            for j in 0..e {
                // multiplicity of zeta_e^j in chi(g_i)
                let mut s = 0u64;
                for t in 0..e {
                    let zpow = m.pow(z, (j * t) % e);
                    s = m.add(s, m.mul(chi_mod[input.power_class[i][t as usize]], m.inv(zpow)));
                }
                let mult = m.mul(einv, s);
                assert!(
                    mult <= degrees[chi],
                    "root-of-unity multiplicity exceeds the degree"
                );
                if mult > 0 {
                    acc.add_scaled_root(j as u32, mult as i128);
                }
            }
            row.push(acc.to_cyc());
        }
        rows.push(row);
    }
    Ok(rows)
}

fn order_rows_canonically(rows: Vec<Vec<Cyc>>) -> Vec<Vec<Cyc>> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&r| {
        (
            rows[r][0].to_e_string().len(),
            rows[r][0].to_e_string(),
            rows[r]
                .iter()
                .map(|v| v.to_e_string())
                .collect::<Vec<_>>(),
        )
    });
    let trivial_pos = order
        .iter()
        .position(|&r| rows[r].iter().all(|v| *v == Cyc::one()))
        .expect("trivial character missing");
    let t = order.remove(trivial_pos);
    order.insert(0, t);
    order.into_iter().map(|r| rows[r].clone()).collect()
}

/// Compute the verified character table of a built jet group.
pub fn dixon_character_table(g: &JetGroup) -> Result<CharacterTable> {
    let cls = g.classes();
    let k = cls.reps.len();
    let e = cls.element_orders.iter().fold(1u64, |acc, &o| lcm(acc, o));
    let alg = class_algebra(g);
    // sanity: sum_k a_ijk |C_k| = |C_i||C_j| on a few entries
    for i in 0..k.min(4) {
        for j in 0..k.min(4) {
            let s: u128 = (0..k)
                .map(|kk| alg.get(i, j, kk) as u128 * cls.sizes[kk] as u128)
                .sum();
            assert_eq!(s, cls.sizes[i] as u128 * cls.sizes[j] as u128);
        }
    }
    let mut power_class = vec![vec![0usize; e as usize]; k];
    for (c, rep) in cls.reps.iter().enumerate() {
        let mut x = g.identity();
        for s in 0..e as usize {
            if s > 0 {
                x = g.mul(&x, rep);
            }
            power_class[c][s] = cls.class_of[g.index_of(&x) as usize] as usize;
        }
    }
    let input = DixonInput {
        group_order: g.order() as u128,
        sizes: cls.sizes.iter().map(|&s| s as u128).collect(),
        inverse_class: cls.inverse_class.iter().map(|&c| c as usize).collect(),
        exponent: e,
        power_class,
        structure: alg,
    };
    let rows = order_rows_canonically(dixon_core(&input)?);

    let class_names = class_names_from_orders(&cls.element_orders);
    let class_type: Vec<ClassType> = cls
        .flags
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if cls.element_orders[i] == 1 {
                ClassType::Unit
            } else if f.regular_semisimple {
                ClassType::RegularSemisimple
            } else if f.unipotent {
                ClassType::Unipotent
            } else if f.semisimple {
                ClassType::Semisimple
            } else {
                ClassType::Other
            }
        })
        .collect();
    let table = CharacterTable {
        group_order: g.order() as u128,
        class_names,
        class_orders: cls.element_orders.clone(),
        class_sizes: cls.sizes.iter().map(|&s| s as u128).collect(),
        centralizer_orders: cls.centralizer_orders.iter().map(|&s| s as u128).collect(),
        class_type,
        tori: vec![Vec::new(); k],
        row_names: (1..=k).map(|i| format!("X{}", i)).collect(),
        rows,
        unipotent_rows: vec![false; k],
    };
    let report = verify_table(&table);
    if !report.ok() {
        return Err(Error::TableVerification(report.violations.join("; ")));
    }
    Ok(table)
}

/// Character rows of a small table-backed group (unsorted order of classes
/// as computed by `SmallGroup::classes`). Used for auxiliary Heisenberg
/// extensions; the rows are verified by first orthogonality.
pub fn small_group_character_rows(
    sg: &SmallGroup,
) -> Result<(crate::smallgroup::SmallClassData, Vec<Vec<Cyc>>)> {
    let cls = sg.classes();
    let k = cls.k;
    let e = cls.element_orders.iter().fold(1u64, |acc, &o| lcm(acc, o));
    let mut a = vec![0u32; k * k * k];
    for (kk, &z) in cls.reps.iter().enumerate() {
        for x in 0..sg.n as u32 {
            let y = sg.mul(sg.inv[x as usize], z);
            let i = cls.class_of[x as usize] as usize;
            let j = cls.class_of[y as usize] as usize;
            a[(i * k + j) * k + kk] += 1;
        }
    }
    let mut power_class = vec![vec![0usize; e as usize]; k];
    for (c, &rep) in cls.reps.iter().enumerate() {
        let mut x = sg.id;
        for s in 0..e as usize {
            if s > 0 {
                x = sg.mul(x, rep);
            }
            power_class[c][s] = cls.class_of[x as usize] as usize;
        }
    }
    let input = DixonInput {
        group_order: sg.n as u128,
        sizes: cls.sizes.iter().map(|&s| s as u128).collect(),
        inverse_class: cls.inverse_class.clone(),
        exponent: e,
        power_class,
        structure: ClassAlgebraTable { k, a },
    };
    let rows = dixon_core(&input)?;
    // verify first orthogonality
    for i in 0..k {
        for j in i..k {
            let mut acc = Cyc::zero(1);
            for c in 0..k {
                let term = rows[i][c]
                    .mul(&rows[j][c].conj())
                    .scale(&crate::cyclotomic::rat_int(cls.sizes[c] as i64));
                acc = acc.add(&term);
            }
            let expect = if i == j {
                Cyc::from_int(sg.n as i64)
            } else {
                Cyc::zero(1)
            };
            if acc != expect {
                return Err(Error::TableVerification(
                    "small group orthogonality failed".into(),
                ));
            }
        }
    }
    Ok((cls, rows))
}

fn identity_basis(k: usize) -> Vec<Vec<u64>> {
    (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect()
}

// Split a joint eigenspace by the eigenvalues of `mat` restricted to it.
fn split_space(m: &ModP, mat: &[Vec<u64>], basis: &[Vec<u64>]) -> Vec<Vec<Vec<u64>>> {
    let k = mat.len();
    let d = basis.len();
    let images: Vec<Vec<u64>> = basis
        .iter()
        .map(|v| {
            (0..k)
                .map(|row| {
                    let mut acc = 0u64;
                    for col in 0..k {
                        acc = m.add(acc, m.mul(mat[row][col], v[col]));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    // echelonize the basis to solve for restriction coordinates
    let mut ech: Vec<Vec<u64>> = basis.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut trans: Vec<Vec<u64>> = identity_basis(d); // ech = trans * basis
    for r in 0..d {
        let piv = (0..k)
            .find(|&c| ech[r][c] != 0 && !pivots.contains(&c))
            .expect("basis not independent");
        let inv = m.inv(ech[r][piv]);
        for c in 0..k {
            ech[r][c] = m.mul(ech[r][c], inv);
        }
        for c in 0..d {
            trans[r][c] = m.mul(trans[r][c], inv);
        }
        let ech_r = ech[r].clone();
        let trans_r = trans[r].clone();
        for r2 in 0..d {
            if r2 != r && ech[r2][piv] != 0 {
                let f = ech[r2][piv];
                for c in 0..k {
                    let t = m.mul(f, ech_r[c]);
                    ech[r2][c] = m.sub(ech[r2][c], t);
                }
                for c in 0..d {
                    let t = m.mul(f, trans_r[c]);
                    trans[r2][c] = m.sub(trans[r2][c], t);
                }
            }
        }
        pivots.push(piv);
    }
    // restriction matrix B: image_j = sum_r B[r][j] basis_r
    let mut b = vec![vec![0u64; d]; d];
    for (j, img) in images.iter().enumerate() {
        let mut coords = vec![0u64; d];
        for (r, &piv) in pivots.iter().enumerate() {
            coords[r] = img[piv];
        }
        for r in 0..d {
            let mut acc = 0u64;
            for s in 0..d {
                acc = m.add(acc, m.mul(trans[s][r], coords[s]));
            }
            b[r][j] = acc;
        }
    }
    // the restriction must reproduce the images (catches non-invariance)
    for (j, img) in images.iter().enumerate() {
        for c in 0..k {
            let mut acc = 0u64;
            for r in 0..d {
                acc = m.add(acc, m.mul(b[r][j], basis[r][c]));
            }
            assert_eq!(acc, img[c], "subspace not invariant");
        }
    }
    let cp = char_poly_mod(m, &b);
    let mut out = Vec::new();
    for lam in 0..m.l {
        let mut val = 0u64;
        for &c in cp.iter().rev() {
            val = m.add(m.mul(val, lam), c);
        }
        if val != 0 {
            continue;
        }
        let mut bm = b.clone();
        for r in 0..d {
            bm[r][r] = m.sub(bm[r][r], lam);
        }
        let ker = kernel_basis(m, &bm);
        if ker.is_empty() {
            continue;
        }
        let sub: Vec<Vec<u64>> = ker
            .iter()
            .map(|coef| {
                (0..k)
                    .map(|c| {
                        let mut acc = 0u64;
                        for r in 0..d {
                            acc = m.add(acc, m.mul(coef[r], basis[r][c]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        out.push(sub);
    }
    let total: usize = out.iter().map(|s| s.len()).sum();
    assert_eq!(total, d, "eigenspaces must fill the space");
    out
}

fn char_poly_mod(m: &ModP, b: &[Vec<u64>]) -> Vec<u64> {
    let d = b.len();
    let mut coeffs = vec![0u64; d + 1];
    coeffs[d] = 1;
    let mut mk = identity_basis(d);
    for k in 1..=d {
        let bm: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut acc = 0u64;
                        for t in 0..d {
                            acc = m.add(acc, m.mul(b[i][t], mk[t][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let mut tr = 0u64;
        for i in 0..d {
            tr = m.add(tr, bm[i][i]);
        }
        let c = m.mul(m.sub(0, tr), m.inv(k as u64 % m.l));
        coeffs[d - k] = c;
        mk = bm;
        for i in 0..d {
            mk[i][i] = m.add(mk[i][i], c);
        }
    }
    coeffs
}

fn kernel_basis(m: &ModP, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let d = a.len();
    let mut mat: Vec<Vec<u64>> = a.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut pivot_cols: Vec<bool> = vec![false; d];
    let mut r0 = 0;
    for c in 0..d {
        if let Some(pr) = (r0..d).find(|&r| mat[r][c] != 0) {
            mat.swap(r0, pr);
            let inv = m.inv(mat[r0][c]);
            for cc in 0..d {
                mat[r0][cc] = m.mul(mat[r0][cc], inv);
            }
            let row0 = mat[r0].clone();
            for r in 0..d {
                if r != r0 && mat[r][c] != 0 {
                    let f = mat[r][c];
                    for cc in 0..d {
                        let t = m.mul(f, row0[cc]);
                        mat[r][cc] = m.sub(mat[r][cc], t);
                    }
                }
            }
            pivot_col_of_row.push(c);
            pivot_cols[c] = true;
            r0 += 1;
        }
    }
    let mut out = Vec::new();
    for free in 0..d {
        if pivot_cols[free] {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = m.sub(0, mat[r][free]);
        }
        out.push(v);
    }
    out
}

fn sqrt_mod(m: &ModP, x: u64) -> Option<u64> {
    (0..m.l).find(|&d| m.mul(d, d) == x)
}

// ---- verification ----

pub struct VerifyReport {
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exact first and second orthogonality, degree sum, and shape checks.
pub fn verify_table(t: &CharacterTable) -> VerifyReport {
    let mut violations = Vec::new();
    let k = t.rows.len();
    if t.class_names.len() != k {
        violations.push(format!("{} rows but {} classes", k, t.class_names.len()));
        return VerifyReport { violations };
    }
    let sizes_ok = t
        .class_sizes
        .iter()
        .zip(&t.centralizer_orders)
        .all(|(&s, &c)| s * c == t.group_order);
    if !sizes_ok {
        violations.push("class size times centralizer order differs from |G|".into());
    }
    let mut dsum = Cyc::zero(1);
    for row in &t.rows {
        dsum = dsum.add(&row[0].mul(&row[0]));
    }
    if dsum != Cyc::from_int(t.group_order as i64) {
        violations.push("sum of squared degrees differs from |G|".into());
    }
    if !t.rows[0].iter().all(|v| *v == Cyc::one()) {
        violations.push("first row is not the trivial character".into());
    }
    // first orthogonality
    for i in 0..k {
        for j in i..k {
            let mut acc = Cyc::zero(1);
            for c in 0..k {
                let term = t.rows[i][c]
                    .mul(&t.rows[j][c].conj())
                    .scale(&crate::cyclotomic::rat_int(t.class_sizes[c] as i64));
                acc = acc.add(&term);
            }
            let expect = if i == j {
                Cyc::from_int(t.group_order as i64)
            } else {
                Cyc::zero(1)
            };
            if acc != expect {
                violations.push(format!(
                    "row orthogonality fails for ({}, {})",
                    t.row_names[i], t.row_names[j]
                ));
            }
        }
    }
    // second orthogonality
    for c in 0..k {
        for c2 in c..k {
            let mut acc = Cyc::zero(1);
            for row in &t.rows {
                acc = acc.add(&row[c].mul(&row[c2].conj()));
            }
            let expect = if c == c2 {
                Cyc::from_int(t.centralizer_orders[c] as i64)
            } else {
                Cyc::zero(1)
            };
            if acc != expect {
                violations.push(format!(
                    "column orthogonality fails for ({}, {})",
                    t.class_names[c], t.class_names[c2]
                ));
            }
        }
    }
    VerifyReport { violations }
}

/// Least k such that the row is trivial on the congruence kernel mod t^(k+1).
pub fn depth_of_irreducible(g: &JetGroup, row: &[Cyc]) -> u32 {
    let cls = g.classes();
    let deg = &row[0];
    for k in 0..=g.r {
        let ker = g.congruence_kernel(k + 1);
        let trivial = ker
            .elements
            .iter()
            .all(|&i| row[cls.class_of[i as usize] as usize] == *deg);
        if trivial {
            return k;
        }
    }
    g.r + 1
}

/// Class-index mask from a predicate.
pub fn locus_of<F: Fn(usize) -> bool>(t: &CharacterTable, pred: F) -> Vec<bool> {
    (0..t.class_names.len()).map(pred).collect()
}

/// (1/|G|) sum over the flagged classes of |C_k| v1(k) conj(v2(k)), directly
/// on table data (for imported tables with no backing group).
pub fn inner_product_on_table(
    t: &CharacterTable,
    row1: &[Cyc],
    row2: &[Cyc],
    locus: &[bool],
) -> Cyc {
    use num::bigint::BigInt;
    let mut acc = Cyc::zero(1);
    for c in 0..t.class_names.len() {
        if !locus[c] {
            continue;
        }
        let term = row1[c]
            .mul(&row2[c].conj())
            .scale(&crate::cyclotomic::rat_int(t.class_sizes[c] as i64));
        acc = acc.add(&term);
    }
    acc.scale(&crate::cyclotomic::Rat::new(
        BigInt::from(1),
        BigInt::from(t.group_order),
    ))
}

/// Rows whose restriction to the pattern's locus equals c * pattern for a
/// sign c; the pattern lists (class index, expected value).
pub fn litmus_match(
    t: &CharacterTable,
    pattern: &[(usize, Cyc)],
    signs: &[i64],
) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for (r, row) in t.rows.iter().enumerate() {
        for &c in signs {
            let ok = pattern.iter().all(|(k, v)| {
                let scaled = if c == 1 { v.clone() } else { v.neg() };
                row[*k] == scaled
            });
            if ok {
                out.push((r, c));
                break;
            }
        }
    }
    out
}

/// The very-regular self-inner-product bound from the characterization
/// theorem: vreg_self_inner >= 1 - (|T_nvreg|/|T|) |W_T(F_q)|.
pub struct HenniartBoundReport {
    pub vreg_self_inner: Cyc,
    pub lower_bound: crate::cyclotomic::Rat,
    pub hypothesis_holds: bool,
    pub satisfied: bool,
}

pub fn henniart_bound_check(
    g: &JetGroup,
    row: &[Cyc],
    torus_order: u64,
    torus_nvreg: u64,
    rational_weyl: u64,
) -> Result<HenniartBoundReport> {
    use num::bigint::BigInt;
    let cls = g.classes();
    let locus: Vec<bool> = cls.flags.iter().map(|f| f.very_regular).collect();
    if !locus.iter().any(|&b| b) {
        return Err(Error::Invalid(
            "hypothesis empty: no very regular classes".into(),
        ));
    }
    let f = ClassFunction {
        values: row.to_vec(),
    };
    let vreg = crate::classfn::inner_product_on(g, &f, &f, &locus)?;
    let bound = crate::cyclotomic::Rat::from(BigInt::from(1))
        - crate::cyclotomic::Rat::new(
            BigInt::from(torus_nvreg * rational_weyl),
            BigInt::from(torus_order),
        );
    let half = crate::cyclotomic::Rat::new(BigInt::from(1), BigInt::from(2));
    let hypothesis_holds = bound > half;
    let v = vreg
        .try_to_rat()
        .ok_or_else(|| Error::Invalid("vreg inner product is not rational".into()))?;
    Ok(HenniartBoundReport {
        vreg_self_inner: vreg.clone(),
        lower_bound: bound.clone(),
        hypothesis_holds,
        satisfied: v >= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupKind, DEFAULT_GROUP_CAP};

    #[test]
    fn sl2_f3_table() {
        let g = build_group(GroupKind::Sl2, 3, 0, DEFAULT_GROUP_CAP).unwrap();
        let t = dixon_character_table(&g).unwrap();
        let mut degs: Vec<i64> = t
            .rows
            .iter()
            .map(|r| r[0].try_to_rat().unwrap().to_integer().try_into().unwrap())
            .collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 1, 2, 2, 2, 3]);
        assert!(verify_table(&t).ok());
    }

    #[test]
    fn sl2_f5_table() {
        let g = build_group(GroupKind::Sl2, 5, 0, DEFAULT_GROUP_CAP).unwrap();
        let t = dixon_character_table(&g).unwrap();
        assert_eq!(t.rows.len(), 9);
        let dsum: i64 = t
            .rows
            .iter()
            .map(|r| {
                let d: i64 = r[0].try_to_rat().unwrap().to_integer().try_into().unwrap();
                d * d
            })
            .sum();
        assert_eq!(dsum, 120);
    }

    #[test]
    fn degree_one_rows_count_abelianization() {
        let g = build_group(GroupKind::Sl2, 3, 0, DEFAULT_GROUP_CAP).unwrap();
        let t = dixon_character_table(&g).unwrap();
        let ones = t.rows.iter().filter(|r| r[0] == Cyc::one()).count();
        assert_eq!(ones, 3); // SL2(F_3)^ab = Z/3
    }

    #[test]
    fn perturbed_table_fails() {
        let g = build_group(GroupKind::Sl2, 3, 0, DEFAULT_GROUP_CAP).unwrap();
        let mut t = dixon_character_table(&g).unwrap();
        t.rows[2][3] = t.rows[2][3].add(&Cyc::one());
        assert!(!verify_table(&t).ok());
    }

    #[test]
    fn depth_zero_inflation() {
        let g = build_group(GroupKind::Sl2, 3, 1, DEFAULT_GROUP_CAP).unwrap();
        let triv = vec![Cyc::one(); g.classes().reps.len()];
        assert_eq!(depth_of_irreducible(&g, &triv), 0);
    }

    #[test]
    fn inflated_characters_have_depth_zero() {
        let g = build_group(GroupKind::Sl2, 3, 1, DEFAULT_GROUP_CAP).unwrap();
        let t = dixon_character_table(&g).unwrap();
        let mut depth0 = 0;
        for row in &t.rows {
            if depth_of_irreducible(&g, row) == 0 {
                depth0 += 1;
            }
        }
        // exactly the 7 irreducibles of SL2(F_3) inflate to depth 0
        assert_eq!(depth0, 7);
    }

    #[test]
    fn empty_pattern_matches_everything() {
        let g = build_group(GroupKind::Sl2, 3, 0, DEFAULT_GROUP_CAP).unwrap();
        let t = dixon_character_table(&g).unwrap();
        let matches = litmus_match(&t, &[], &[1, -1]);
        assert_eq!(matches.len(), t.rows.len());
    }

    #[test]
    fn small_group_rows() {
        // cyclic group of order 4 via the small-group path
        let n = 4;
        let mut mul = vec![0u32; 16];
        for a in 0..4 {
            for b in 0..4 {
                mul[a * 4 + b] = ((a + b) % 4) as u32;
            }
        }
        let sg = SmallGroup::from_mul_table(mul, n);
        let (cls, rows) = small_group_character_rows(&sg).unwrap();
        assert_eq!(cls.k, 4);
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert_eq!(row[0], Cyc::one());
        }
    }
}

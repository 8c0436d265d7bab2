//! Root systems, Weyl group matrices, and shipped twisted-class data.
//!
//! Classes are shipped as data (label, word in simple reflections, expected
//! characteristic polynomial, rational Weyl group order) per Carter's tables;
//! no general conjugacy classifier is built. The lattice realization is the
//! adjoint one: the Weyl group acts on the coweight lattice, and roots pair
//! integrally with it through their simple-root coordinates.

use crate::error::{Error, Result};
use std::collections::HashSet;

/// `matrix[i][j]` is the entry in row i, column j; vectors are columns.
pub type IMat = Vec<Vec<i64>>;

pub fn mat_identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_pow(a: &IMat, e: u32) -> IMat {
    let mut r = mat_identity(a.len());
    for _ in 0..e {
        r = mat_mul(&r, a);
    }
    r
}

pub fn mat_order(a: &IMat, cap: u32) -> Option<u32> {
    let id = mat_identity(a.len());
    let mut m = a.clone();
    for k in 1..=cap {
        if m == id {
            return Some(k);
        }
        m = mat_mul(&m, a);
    }
    None
}

/// char poly det(xI - M), coefficients ascending, exact over i128.
pub fn char_poly(m: &IMat) -> Vec<i128> {
    // Faddeev-LeVerrier; matrix entries are tiny so i128 is plenty.
    let n = m.len();
    let a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut mk: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    for k in 1..=n {
        // Mk = A * M_{k-1}
        let am: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| a[i][l] * mk[l][j]).sum())
                    .collect()
            })
            .collect();
        let tr: i128 = (0..n).map(|i| am[i][i]).sum();
        assert!(tr % (k as i128) == 0);
        let c = -tr / (k as i128);
        coeffs[n - k] = c;
        mk = am;
        for i in 0..n {
            mk[i][i] += c;
        }
    }
    coeffs
}

/// A named twisted conjugacy class in the Weyl group.
#[derive(Clone, Debug)]
pub struct WeylClassRep {
    pub carter_label: String,
    pub aliases: Vec<String>,
    pub w: IMat,
    pub char_poly: Vec<i128>,
    /// |W_T(F_q)| = order of the centralizer of w in W (shipped, verified
    /// against the enumerated closure for small types)
    pub rational_weyl_order: u64,
}

/// Which cocharacter lattice the Weyl matrices act on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Isogeny {
    /// coweight lattice (adjoint group); root pairing = simple-root coords
    Adjoint,
    /// coroot lattice (simply connected group); pairing through the Cartan matrix
    SimplyConnected,
}

/// Root system with its Weyl action on the chosen cocharacter lattice.
pub struct RootSystemData {
    pub label: String,
    pub rank: usize,
    pub isogeny: Isogeny,
    pub cartan: Vec<Vec<i64>>,
    /// all roots, in simple-root coordinates
    pub roots: Vec<Vec<i64>>,
    /// simple reflections acting on the cocharacter lattice
    pub simple_reflections: Vec<IMat>,
    pub weyl_order: u64,
    pub coxeter_number: u32,
    pub classes: Vec<WeylClassRep>,
}

impl RootSystemData {
    /// Pairing of a root with the lattice basis.
    pub fn root_pairing(&self, root: &[i64]) -> Vec<i64> {
        match self.isogeny {
            Isogeny::Adjoint => root.to_vec(),
            Isogeny::SimplyConnected => (0..self.rank)
                .map(|j| (0..self.rank).map(|k| root[k] * self.cartan[k][j]).sum())
                .collect(),
        }
    }

    pub fn class(&self, label: &str) -> Result<&WeylClassRep> {
        let needle = label.trim();
        self.classes
            .iter()
            .find(|c| {
                c.carter_label.eq_ignore_ascii_case(needle)
                    || c.aliases.iter().any(|a| a == needle || a.eq_ignore_ascii_case(needle))
            })
            .ok_or_else(|| Error::UnknownCarterClass(label.to_string(), self.label.clone()))
    }

    /// Fully enumerate W when its order does not exceed `cap`.
    pub fn weyl_closure(&self, cap: usize) -> Option<Vec<IMat>> {
        if self.weyl_order as usize > cap {
            return None;
        }
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut out: Vec<IMat> = Vec::new();
        let mut queue = vec![mat_identity(self.rank)];
        seen.insert(flatten(&queue[0]));
        while let Some(m) = queue.pop() {
            out.push(m.clone());
            for s in &self.simple_reflections {
                let next = mat_mul(&m, s);
                let key = flatten(&next);
                if seen.insert(key) {
                    queue.push(next);
                }
            }
        }
        Some(out)
    }

    /// Centralizer of w inside the enumerated Weyl group, if enumerable;
    /// otherwise the cyclic group generated by w (correct for the shipped
    /// Coxeter classes, whose centralizer is cyclic of order h).
    pub fn rational_weyl_group(&self, wc: &WeylClassRep, cap: usize) -> Vec<IMat> {
        if let Some(all) = self.weyl_closure(cap) {
            return all
                .into_iter()
                .filter(|m| mat_mul(m, &wc.w) == mat_mul(&wc.w, m))
                .collect();
        }
        let mut out = Vec::new();
        let mut m = mat_identity(self.rank);
        loop {
            out.push(m.clone());
            m = mat_mul(&m, &wc.w);
            if m == mat_identity(self.rank) {
                break;
            }
        }
        out
    }

    fn word_to_matrix(&self, word: &str) -> Result<IMat> {
        let mut m = mat_identity(self.rank);
        if word == "-" {
            return Ok(m);
        }
        for ch in word.chars() {
            let i = ch
                .to_digit(10)
                .and_then(|d| if d >= 1 { Some(d as usize - 1) } else { None })
                .ok_or_else(|| Error::Invalid(format!("bad reflection word `{}`", word)))?;
            if i >= self.rank {
                return Err(Error::Invalid(format!("reflection index {} out of range", i + 1)));
            }
            m = mat_mul(&m, &self.simple_reflections[i]);
        }
        Ok(m)
    }
}

fn flatten(m: &IMat) -> Vec<i64> {
    m.iter().flatten().copied().collect()
}

// Reflection s_i on the coweight basis: column i becomes e_i minus the i-th
// column of the Cartan matrix.
fn adjoint_reflection(cartan: &[Vec<i64>], i: usize) -> IMat {
    let n = cartan.len();
    let mut m = mat_identity(n);
    for k in 0..n {
        m[k][i] -= cartan[k][i];
    }
    m
}

// Reflection s_i on the coroot basis: row i becomes e_i minus the i-th row
// of the Cartan matrix.
fn simply_connected_reflection(cartan: &[Vec<i64>], i: usize) -> IMat {
    let n = cartan.len();
    let mut m = mat_identity(n);
    for j in 0..n {
        m[i][j] -= cartan[i][j];
    }
    m
}

// s_i on roots in simple-root coordinates: c -> c - <alpha_c, alpha_i^vee> e_i.
fn reflect_root(cartan: &[Vec<i64>], i: usize, c: &[i64]) -> Vec<i64> {
    let pair: i64 = (0..c.len()).map(|k| c[k] * cartan[k][i]).sum();
    let mut out = c.to_vec();
    out[i] -= pair;
    out
}

fn generate_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push(e);
    }
    let mut out = Vec::new();
    while let Some(r) = queue.pop() {
        out.push(r.clone());
        for i in 0..n {
            let s = reflect_root(cartan, i, &r);
            if seen.insert(s.clone()) {
                queue.push(s);
            }
        }
    }
    out.sort();
    out
}

/// Parse one shipped class-data file.
pub fn parse_root_data(text: &str) -> Result<RootSystemData> {
    let mut label = String::new();
    let mut rank = 0usize;
    let mut weyl_order = 0u64;
    let mut coxeter_number = 0u32;
    let mut isogeny = Isogeny::Adjoint;
    let mut cartan: Vec<Vec<i64>> = Vec::new();
    let mut class_lines: Vec<(usize, String)> = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((ln, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next().unwrap() {
            "TYPE" => label = it.next().unwrap_or("").to_string(),
            "RANK" => {
                rank = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or(Error::Parse { line: ln + 1, msg: "bad RANK".into() })?
            }
            "WEYL_ORDER" => {
                weyl_order = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or(Error::Parse { line: ln + 1, msg: "bad WEYL_ORDER".into() })?
            }
            "COXETER_NUMBER" => {
                coxeter_number = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or(Error::Parse { line: ln + 1, msg: "bad COXETER_NUMBER".into() })?
            }
            "ISOGENY" => {
                isogeny = match it.next() {
                    Some("adjoint") => Isogeny::Adjoint,
                    Some("simply_connected") => Isogeny::SimplyConnected,
                    _ => return Err(Error::Parse { line: ln + 1, msg: "bad ISOGENY".into() }),
                }
            }
            "CARTAN" => {
                for _ in 0..rank {
                    let (ln2, row) = lines
                        .next()
                        .ok_or(Error::Parse { line: ln + 1, msg: "truncated CARTAN".into() })?;
                    let vals: Vec<i64> = row
                        .split_whitespace()
                        .map(|s| s.parse())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Parse { line: ln2 + 1, msg: "bad CARTAN row".into() })?;
                    if vals.len() != rank {
                        return Err(Error::Parse { line: ln2 + 1, msg: "bad CARTAN width".into() });
                    }
                    cartan.push(vals);
                }
            }
            "CLASS" => class_lines.push((ln + 1, line.to_string())),
            other => {
                return Err(Error::Parse { line: ln + 1, msg: format!("unknown key `{}`", other) })
            }
        }
    }
    let simple_reflections: Vec<IMat> = (0..rank)
        .map(|i| match isogeny {
            Isogeny::Adjoint => adjoint_reflection(&cartan, i),
            Isogeny::SimplyConnected => simply_connected_reflection(&cartan, i),
        })
        .collect();
    let roots = generate_roots(&cartan);
    let mut rs = RootSystemData {
        label,
        rank,
        isogeny,
        cartan,
        roots,
        simple_reflections,
        weyl_order,
        coxeter_number,
        classes: Vec::new(),
    };
    for (ln, line) in class_lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 6 {
            return Err(Error::Parse { line: ln, msg: "CLASS needs 5 fields".into() });
        }
        let w = rs.word_to_matrix(toks[3])?;
        let cp: Vec<i128> = toks[4]
            .split(',')
            .map(|s| s.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse { line: ln, msg: "bad char poly".into() })?;
        let computed = char_poly(&w);
        if computed != cp {
            return Err(Error::Parse {
                line: ln,
                msg: format!("char poly mismatch for class {}: computed {:?}", toks[1], computed),
            });
        }
        let wt: u64 = toks[5]
            .parse()
            .map_err(|_| Error::Parse { line: ln, msg: "bad weyl order".into() })?;
        rs.classes.push(WeylClassRep {
            carter_label: toks[1].to_string(),
            aliases: toks[2].split(',').map(|s| s.to_string()).collect(),
            w,
            char_poly: cp,
            rational_weyl_order: wt,
        });
    }
    Ok(rs)
}

/// Load a shipped root system by type label (A1, G2, F4, E6, E7, E8).
pub fn load_root_system(label: &str) -> Result<RootSystemData> {
    let key = label.trim().to_ascii_lowercase();
    let builtin = match key.as_str() {
        "a1" => include_str!("../data/carter/a1.txt"),
        "g2" => include_str!("../data/carter/g2.txt"),
        "f4" => include_str!("../data/carter/f4.txt"),
        "e6" => include_str!("../data/carter/e6.txt"),
        "e7" => include_str!("../data/carter/e7.txt"),
        "e8" => include_str!("../data/carter/e8.txt"),
        _ => return Err(Error::Invalid(format!("no shipped root data for `{}`", label))),
    };
    if let Ok(dir) = std::env::var("JETLIE_DATA_DIR") {
        let path = std::path::Path::new(&dir).join("carter").join(format!("{}.txt", key));
        if let Ok(text) = std::fs::read_to_string(&path) {
            return parse_root_data(&text);
        }
    }
    parse_root_data(builtin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn g2_data() {
        let rs = load_root_system("G2").unwrap();
        assert_eq!(rs.roots.len(), 12);
        // reflections preserve the root set
        let set: std::collections::HashSet<_> = rs.roots.iter().cloned().collect();
        for r in &rs.roots {
            for i in 0..rs.rank {
                assert!(set.contains(&reflect_root(&rs.cartan, i, r)));
            }
            assert_eq!(r.iter().fold(0, |g, &x| gcd(g, x)), 1, "root not primitive");
        }
        let all = rs.weyl_closure(100_000).unwrap();
        assert_eq!(all.len(), 12);
        // shipped centralizer orders match the enumerated closure
        for c in &rs.classes {
            let cent = rs.rational_weyl_group(c, 100_000);
            assert_eq!(
                cent.len() as u64,
                c.rational_weyl_order,
                "centralizer mismatch for {}",
                c.carter_label
            );
        }
        // coxeter element has order h
        let cox = rs.class("coxeter").unwrap();
        assert_eq!(mat_order(&cox.w, 100), Some(rs.coxeter_number));
    }

    #[test]
    fn root_counts_and_coxeter_polys() {
        for (label, count) in [("A1", 2), ("F4", 48), ("E6", 72), ("E7", 126), ("E8", 240)] {
            let rs = load_root_system(label).unwrap();
            assert_eq!(rs.roots.len(), count, "{}", label);
            let cox = rs.class("coxeter").unwrap();
            assert_eq!(mat_order(&cox.w, 100), Some(rs.coxeter_number), "{}", label);
            assert_eq!(char_poly(&cox.w), cox.char_poly, "{}", label);
        }
    }

    #[test]
    fn f4_closure_order() {
        let rs = load_root_system("F4").unwrap();
        assert_eq!(rs.weyl_closure(10_000).unwrap().len(), 1152);
        let cox = rs.class("coxeter").unwrap();
        let cent = rs.rational_weyl_group(cox, 10_000);
        assert_eq!(cent.len(), 12);
    }

    #[test]
    fn e6_closure_order() {
        let rs = load_root_system("E6").unwrap();
        assert_eq!(rs.weyl_closure(100_000).unwrap().len(), 51840);
    }

    #[test]
    fn unknown_class_is_an_error() {
        let rs = load_root_system("G2").unwrap();
        assert!(matches!(rs.class("B17"), Err(Error::UnknownCarterClass(..))));
    }
}

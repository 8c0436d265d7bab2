//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! Values are stored as rational coefficient vectors of degree `< phi(n)`,
//! i.e. reduced modulo the n-th cyclotomic polynomial. Equality is decidable,
//! conjugation is exact, and a complex float shadow is available for display.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

fn cyclo_cache() -> &'static Mutex<HashMap<u32, Vec<i128>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i128>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first, monic.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i128> {
    if let Some(p) = cyclo_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by prod of Phi_d for proper divisors d of n
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    cyclo_cache().lock().unwrap().insert(n, num.clone());
    num
}

// Exact division of integer polynomials, assumes divisor is monic and divides.
fn poly_div_exact(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut rem: Vec<i128> = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    assert!(da >= db);
    let mut quot = vec![0i128; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = rem[k + db];
        quot[k] = c;
        if c != 0 {
            for j in 0..=db {
                rem[k + j] -= c * b[j];
            }
        }
    }
    assert!(rem.iter().all(|&x| x == 0), "inexact polynomial division");
    quot
}

/// Euler phi.
pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    (a as u64 / gcd_u64(a as u64, b as u64) * b as u64) as u32
}

/// An element of `Q(zeta_n)`, reduced mod `Phi_n`.
#[derive(Clone)]
pub struct Cyc {
    n: u32,
    // coefficients of zeta_n^0 .. zeta_n^{phi(n)-1}
    c: Vec<Rat>,
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        let (a, b) = self.common(other);
        a.c == b.c
    }
}

impl Eq for Cyc {}

impl Cyc {
    pub fn zero(n: u32) -> Self {
        Cyc {
            n,
            c: vec![Rat::zero(); euler_phi(n) as usize],
        }
    }

    pub fn from_rat(x: Rat) -> Self {
        let mut v = Cyc::zero(1);
        v.c[0] = x;
        v
    }

    pub fn from_int(x: i64) -> Self {
        Cyc::from_rat(rat_int(x))
    }

    pub fn one() -> Self {
        Cyc::from_int(1)
    }

    /// zeta_n^k
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let kk = k.rem_euclid(n as i64) as usize;
        let mut lift = vec![Rat::zero(); n as usize];
        lift[kk] = Rat::one();
        Cyc::reduce_from_lift(n, lift)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    fn reduce_from_lift(n: u32, mut lift: Vec<Rat>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        // polynomial remainder by the monic Phi_n
        for k in (deg..lift.len()).rev() {
            if !lift[k].is_zero() {
                let c = lift[k].clone();
                for j in 0..=deg {
                    let t = &c * Rat::from(BigInt::from(phi[j]));
                    lift[k - deg + j] -= t;
                }
            }
        }
        lift.truncate(deg);
        Cyc { n, c: lift }
    }

    fn lift(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.n as usize];
        v[..self.c.len()].clone_from_slice(&self.c);
        v
    }

    /// Rewrite in `Q(zeta_m)` for n | m.
    pub fn raise(&self, m: u32) -> Cyc {
        if m == self.n {
            return self.clone();
        }
        assert!(m % self.n == 0, "conductor {} does not divide {}", self.n, m);
        let step = (m / self.n) as usize;
        let mut lift = vec![Rat::zero(); m as usize];
        for (k, ck) in self.c.iter().enumerate() {
            if !ck.is_zero() {
                lift[k * step] += ck;
            }
        }
        Cyc::reduce_from_lift(m, lift)
    }

    fn common(&self, other: &Cyc) -> (Cyc, Cyc) {
        let m = lcm_u32(self.n, other.n);
        (self.raise(m), other.raise(m))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let (mut a, b) = self.common(other);
        for (x, y) in a.c.iter_mut().zip(b.c.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        let (mut a, b) = self.common(other);
        for (x, y) in a.c.iter_mut().zip(b.c.iter()) {
            *x -= y;
        }
        a
    }

    pub fn neg(&self) -> Cyc {
        let mut a = self.clone();
        for x in a.c.iter_mut() {
            *x = -x.clone();
        }
        a
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let (a, b) = self.common(other);
        let n = a.n as usize;
        let la = a.lift();
        let lb = b.lift();
        let mut prod = vec![Rat::zero(); n];
        for (i, ai) in la.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in lb.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                prod[k] += ai * bj;
            }
        }
        Cyc::reduce_from_lift(a.n, prod)
    }

    pub fn scale(&self, r: &Rat) -> Cyc {
        let mut a = self.clone();
        for x in a.c.iter_mut() {
            *x *= r;
        }
        a
    }

    /// Complex conjugation (zeta -> zeta^{-1}).
    pub fn conj(&self) -> Cyc {
        self.galois(self.n as i64 - 1)
    }

    /// Galois substitution zeta_n -> zeta_n^k, gcd(k, n) = 1.
    pub fn galois(&self, k: i64) -> Cyc {
        let n = self.n;
        let kk = k.rem_euclid(n as i64) as u64;
        assert!(gcd_u64(kk, n as u64) == 1, "galois exponent not coprime");
        let mut lift = vec![Rat::zero(); n as usize];
        for (i, ci) in self.c.iter().enumerate() {
            if !ci.is_zero() {
                lift[(i as u64 * kk % n as u64) as usize] += ci;
            }
        }
        Cyc::reduce_from_lift(n, lift)
    }

    /// z * conj(z); a totally real (often rational) value.
    pub fn abs2(&self) -> Cyc {
        self.mul(&self.conj())
    }

    pub fn try_to_rat(&self) -> Option<Rat> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            // may still be rational at a non-minimal conductor
            let r = self.reduce_conductor();
            if r.n == 1 {
                Some(r.c[0].clone())
            } else {
                None
            }
        }
    }

    /// Smallest conductor m | n the value actually lives in (coarse search).
    pub fn reduce_conductor(&self) -> Cyc {
        let mut best = self.clone();
        let n = self.n;
        for m in 1..n {
            if n % m == 0 {
                let cand = Cyc::zero(m);
                // check whether raising the candidate space covers self: try to
                // express self in Q(zeta_m) by round-trip through equality
                let _ = cand;
                if let Some(v) = self.try_express_in(m) {
                    best = v;
                    break;
                }
            }
        }
        best
    }

    fn try_express_in(&self, m: u32) -> Option<Cyc> {
        // solve: find y in Q(zeta_m) with raise(y) == self, by linear structure:
        // basis vectors zeta_m^k raise to known reduced vectors; match greedily.
        // Correct and simple: raise each basis element and do Gaussian solve.
        let phim = euler_phi(m) as usize;
        let phin = self.c.len();
        let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(phim);
        for k in 0..phim {
            let e = Cyc {
                n: m,
                c: (0..phim)
                    .map(|j| if j == k { Rat::one() } else { Rat::zero() })
                    .collect(),
            };
            cols.push(e.raise(self.n).c);
        }
        // solve cols * y = self.c
        let mut aug: Vec<Vec<Rat>> = (0..phin)
            .map(|r| {
                let mut row: Vec<Rat> = cols.iter().map(|col| col[r].clone()).collect();
                row.push(self.c[r].clone());
                row
            })
            .collect();
        let mut piv_cols = Vec::new();
        let mut r0 = 0;
        for c0 in 0..phim {
            if let Some(pr) = (r0..phin).find(|&r| !aug[r][c0].is_zero()) {
                aug.swap(r0, pr);
                let inv = aug[r0][c0].clone();
                for x in aug[r0].iter_mut() {
                    *x /= inv.clone();
                }
                for r in 0..phin {
                    if r != r0 && !aug[r][c0].is_zero() {
                        let f = aug[r][c0].clone();
                        for c in 0..=phim {
                            let t = &aug[r0][c] * &f;
                            aug[r][c] -= t;
                        }
                    }
                }
                piv_cols.push(c0);
                r0 += 1;
            }
        }
        // consistency
        for r in r0..phin {
            if !aug[r][phim].is_zero() {
                return None;
            }
        }
        let mut y = vec![Rat::zero(); phim];
        for (i, &pc) in piv_cols.iter().enumerate() {
            y[pc] = aug[i][phim].clone();
        }
        Some(Cyc { n: m, c: y })
    }

    /// Float shadow: the image under zeta_n -> exp(2 pi i / n).
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let x = ck.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (self.n as f64);
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }

    /// Serialize in `E(n)` notation, e.g. `1+3*E(3)` or `-1/2*E(7)^3`.
    pub fn to_e_string(&self) -> String {
        let v = self.reduce_conductor();
        if v.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, ck) in v.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let sign = if ck.is_negative() { "-" } else { "+" };
            let a = ck.abs();
            let coeff = if a.is_one() && k > 0 {
                String::new()
            } else {
                format!("{}", a)
            };
            let term = if k == 0 {
                coeff
            } else {
                let pow = if k == 1 {
                    format!("E({})", v.n)
                } else {
                    format!("E({})^{}", v.n, k)
                };
                if coeff.is_empty() {
                    pow
                } else {
                    format!("{}*{}", coeff, pow)
                }
            };
            if parts.is_empty() {
                parts.push(if sign == "-" {
                    format!("-{}", term)
                } else {
                    term
                });
            } else {
                parts.push(format!("{}{}", sign, term));
            }
        }
        parts.concat()
    }

    /// Parse the `E(n)` notation produced by `to_e_string`.
    pub fn parse(s: &str) -> Result<Cyc, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty cyclotomic literal".into());
        }
        let mut acc = Cyc::zero(1);
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &s[start..i];
            if term.is_empty() {
                return Err(format!("dangling sign in `{}`", s));
            }
            let (coeff, epart) = match term.find('E') {
                None => (term, None),
                Some(0) => ("1", Some(&term[0..])),
                Some(p) => {
                    let c = term[..p].trim_end_matches('*');
                    (if c.is_empty() { "1" } else { c }, Some(&term[p..]))
                }
            };
            let cr = parse_rat(coeff)?;
            let cr = if sign < 0 { -cr } else { cr };
            match epart {
                None => acc = acc.add(&Cyc::from_rat(cr)),
                Some(e) => {
                    // E(n) or E(n)^k
                    let inner = e
                        .strip_prefix("E(")
                        .ok_or_else(|| format!("bad root term `{}`", e))?;
                    let close = inner
                        .find(')')
                        .ok_or_else(|| format!("bad root term `{}`", e))?;
                    let n: u32 = inner[..close]
                        .parse()
                        .map_err(|_| format!("bad conductor in `{}`", e))?;
                    let rest = &inner[close + 1..];
                    let k: i64 = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| format!("bad exponent in `{}`", e))?
                            .parse()
                            .map_err(|_| format!("bad exponent in `{}`", e))?
                    };
                    let term = Cyc::root_of_unity(n, k).scale(&cr);
                    acc = acc.add(&term);
                }
            }
        }
        Ok(acc)
    }
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    match s.find('/') {
        None => s
            .parse::<BigInt>()
            .map(Rat::from)
            .map_err(|_| format!("bad rational `{}`", s)),
        Some(p) => {
            let n = s[..p]
                .parse::<BigInt>()
                .map_err(|_| format!("bad rational `{}`", s))?;
            let d = s[p + 1..]
                .parse::<BigInt>()
                .map_err(|_| format!("bad rational `{}`", s))?;
            Ok(Rat::new(n, d))
        }
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_e_string())
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_e_string())
    }
}

/// Integer accumulator over a fixed mu_n basis, for hot summation loops.
/// Converts to a reduced `Cyc` at the end.
#[derive(Clone)]
pub struct CycAcc {
    n: u32,
    counts: Vec<i128>,
}

impl CycAcc {
    pub fn new(n: u32) -> Self {
        CycAcc {
            n,
            counts: vec![0; n as usize],
        }
    }

    #[inline]
    pub fn add_root(&mut self, k: u32) {
        self.counts[(k % self.n) as usize] += 1;
    }

    #[inline]
    pub fn add_scaled_root(&mut self, k: u32, m: i128) {
        self.counts[(k % self.n) as usize] += m;
    }

    pub fn to_cyc(&self) -> Cyc {
        let lift: Vec<Rat> = self
            .counts
            .iter()
            .map(|&x| Rat::from(BigInt::from(x)))
            .collect();
        Cyc::reduce_from_lift(self.n, lift)
    }
}

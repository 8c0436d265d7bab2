//! Small finite fields with full lookup tables.
//!
//! Elements of `F_q`, q = p^f, are encoded as 0..q-1 (base-p digits of the
//! polynomial residue). Extension fields use a shipped table of primitive
//! polynomials so arithmetic is identical across runs; primitivity is checked
//! at construction time.

use crate::error::{Error, Result};

// (p, f, coefficients ascending, monic)
const PRIMITIVE_POLYS: &[(u64, u32, &[u64])] = &[
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

#[derive(Clone)]
pub struct FiniteField {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    /// modulus coefficients, ascending (empty for prime fields)
    pub modulus: Vec<u64>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// a fixed multiplicative generator
    pub generator: u16,
    /// absolute trace to F_p, as 0..p-1
    trace: Vec<u16>,
}

impl FiniteField {
    pub fn new(q: u64) -> Result<FiniteField> {
        let (p, f) = crate::torus::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > 1024 {
            return Err(Error::TooLarge {
                what: format!("field F_{}", q),
                order: q as u128,
                cap: 1024,
            });
        }
        let modulus: Vec<u64> = if f == 1 {
            Vec::new()
        } else {
            PRIMITIVE_POLYS
                .iter()
                .find(|(pp, ff, _)| *pp == p && *ff == f)
                .ok_or(Error::NoFieldTable(q))?
                .2
                .to_vec()
        };
        let qq = q as usize;
        let enc = |digits: &[u64]| -> usize {
            digits
                .iter()
                .rev()
                .fold(0usize, |acc, &d| acc * p as usize + d as usize)
        };
        let dec = |mut x: usize| -> Vec<u64> {
            let mut d = Vec::with_capacity(f as usize);
            for _ in 0..f {
                d.push((x % p as usize) as u64);
                x /= p as usize;
            }
            d
        };
        let mut add = vec![0u16; qq * qq];
        let mut mul = vec![0u16; qq * qq];
        let mut neg = vec![0u16; qq];
        for a in 0..qq {
            let da = dec(a);
            let n: Vec<u64> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a] = enc(&n) as u16;
            for b in a..qq {
                let db = dec(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                let v = enc(&s) as u16;
                add[a * qq + b] = v;
                add[b * qq + a] = v;
                // polynomial product reduced by the modulus
                let mut prod = vec![0u64; 2 * f as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                if f > 1 {
                    for k in (f as usize..prod.len()).rev() {
                        let c = prod[k];
                        if c != 0 {
                            prod[k] = 0;
                            for (j, &m) in modulus.iter().enumerate().take(f as usize) {
                                let t = (c * (p - m % p)) % p;
                                prod[k - f as usize + j] = (prod[k - f as usize + j] + t) % p;
                            }
                        }
                    }
                }
                prod.truncate(f as usize);
                let v = enc(&prod) as u16;
                mul[a * qq + b] = v;
                mul[b * qq + a] = v;
            }
        }
        let mut inv = vec![0u16; qq];
        for a in 1..qq {
            for b in 1..qq {
                if mul[a * qq + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
            assert!(inv[a] != 0, "field element without inverse");
        }
        // generator: x (encoded p) for extensions, else smallest primitive root
        let order_of = |g: usize| -> u64 {
            let mut x = g;
            let mut o = 1u64;
            while x != 1 {
                x = mul[x * qq + g] as usize;
                o += 1;
            }
            o
        };
        let generator = if f > 1 {
            let g = p as usize;
            if order_of(g) != q - 1 {
                return Err(Error::Invalid(format!(
                    "shipped polynomial for q={} is not primitive",
                    q
                )));
            }
            g as u16
        } else {
            (2..qq)
                .find(|&g| order_of(g) == q - 1)
                .ok_or_else(|| Error::Invalid("no primitive root".into()))? as u16
        };
        // absolute trace: sum of p-power Frobenius images
        let mut trace = vec![0u16; qq];
        for a in 0..qq {
            let mut acc = 0usize;
            let mut x = a;
            for _ in 0..f {
                acc = add[acc * qq + x] as usize;
                // x <- x^p
                let mut y = 1usize;
                for _ in 0..p {
                    y = mul[y * qq + x] as usize;
                }
                x = y;
            }
            assert!(acc < p as usize, "trace landed outside the prime field");
            trace[a] = acc as u16;
        }
        Ok(FiniteField {
            p,
            f,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            generator,
            trace,
        })
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    /// 0 maps to 0.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    /// Absolute trace to F_p as an integer 0..p-1.
    #[inline]
    pub fn trace_to_prime(&self, a: u16) -> u16 {
        self.trace[a as usize]
    }

    pub fn from_int(&self, k: i64) -> u16 {
        k.rem_euclid(self.p as i64) as u16
    }

    /// The smallest non-square unit, for building nonsplit tori.
    pub fn nonsquare(&self) -> u16 {
        let q = self.q as usize;
        let mut squares = vec![false; q];
        for a in 1..q {
            squares[self.mul(a as u16, a as u16) as usize] = true;
        }
        (1..q)
            .find(|&a| !squares[a])
            .expect("odd field has a nonsquare") as u16
    }

    pub fn is_square(&self, a: u16) -> bool {
        if a == 0 {
            return true;
        }
        let q = self.q as usize;
        (1..q).any(|b| self.mul(b as u16, b as u16) == a)
    }
}

//! The truncated polynomial ring `R = F_q[t]/t^(r+1)` with lookup tables.
//!
//! Ring elements are encoded as 0..q^(r+1)-1, base-q digits being the t-adic
//! coefficients. Units are exactly the elements with nonzero constant term.

use crate::error::{Error, Result};
use crate::ff::FiniteField;

#[derive(Clone)]
pub struct JetRing {
    pub field: FiniteField,
    pub r: u32,
    pub size: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    /// 0 for non-units
    inv: Vec<u16>,
}

impl JetRing {
    pub fn new(q: u64, r: u32) -> Result<JetRing> {
        let field = FiniteField::new(q)?;
        let size_big = (q as u128).pow(r + 1);
        if size_big > 4096 {
            return Err(Error::TooLarge {
                what: format!("jet ring F_{}[t]/t^{}", q, r + 1),
                order: size_big,
                cap: 4096,
            });
        }
        let size = size_big as u32;
        let s = size as usize;
        let qq = q as usize;
        let dec = |mut x: usize| -> Vec<u16> {
            let mut d = Vec::with_capacity(r as usize + 1);
            for _ in 0..=r {
                d.push((x % qq) as u16);
                x /= qq;
            }
            d
        };
        let enc = |digits: &[u16]| -> usize {
            digits
                .iter()
                .rev()
                .fold(0usize, |acc, &d| acc * qq + d as usize)
        };
        let mut add = vec![0u16; s * s];
        let mut mul = vec![0u16; s * s];
        let mut neg = vec![0u16; s];
        for a in 0..s {
            let da = dec(a);
            neg[a] = enc(&da.iter().map(|&x| field.neg(x)).collect::<Vec<_>>()) as u16;
            for b in a..s {
                let db = dec(b);
                let sum: Vec<u16> = da.iter().zip(&db).map(|(&x, &y)| field.add(x, y)).collect();
                let v = enc(&sum) as u16;
                add[a * s + b] = v;
                add[b * s + a] = v;
                let mut prod = vec![0u16; r as usize + 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        if i + j <= r as usize {
                            prod[i + j] = field.add(prod[i + j], field.mul(x, y));
                        }
                    }
                }
                let v = enc(&prod) as u16;
                mul[a * s + b] = v;
                mul[b * s + a] = v;
            }
        }
        let mut inv = vec![0u16; s];
        for a in 0..s {
            if a % qq == 0 {
                continue; // constant term zero: not a unit
            }
            // Newton-free: unit group order is q^r (q-1) * ... just scan
            for b in 0..s {
                if mul[a * s + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
            assert!(inv[a] != 0, "unit without inverse");
        }
        Ok(JetRing {
            field,
            r,
            size,
            add,
            mul,
            neg,
            inv,
        })
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn is_unit(&self, a: u16) -> bool {
        a as u64 % self.field.q != 0
    }

    /// 0 for non-units.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    /// The element t.
    #[inline]
    pub fn t(&self) -> u16 {
        self.field.q as u16
    }

    /// t-adic coefficient i of a.
    #[inline]
    pub fn coeff(&self, a: u16, i: u32) -> u16 {
        let mut x = a as u64;
        for _ in 0..i {
            x /= self.field.q;
        }
        (x % self.field.q) as u16
    }

    /// Build an element from t-adic coefficients.
    pub fn from_coeffs(&self, coeffs: &[u16]) -> u16 {
        assert!(coeffs.len() <= self.r as usize + 1);
        let mut x = 0u64;
        for &c in coeffs.iter().rev() {
            x = x * self.field.q + c as u64;
        }
        x as u16
    }

    /// Embed a field scalar.
    #[inline]
    pub fn scalar(&self, c: u16) -> u16 {
        c
    }

    /// Reduction mod t.
    #[inline]
    pub fn residue(&self, a: u16) -> u16 {
        (a as u64 % self.field.q) as u16
    }

    /// t-adic valuation; r+1 for zero.
    pub fn valuation(&self, a: u16) -> u32 {
        if a == 0 {
            return self.r + 1;
        }
        (0..=self.r)
            .find(|&i| self.coeff(a, i) != 0)
            .expect("nonzero element has a nonzero coefficient")
    }
}

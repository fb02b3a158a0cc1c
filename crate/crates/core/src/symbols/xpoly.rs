use std::collections::BTreeMap;

use super::hom::HomSymbol;
use crate::algebra::{CliffordElem, MAX_DIM};

/// Polynomial in `x_1..x_n` with Clifford-matrix coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPoly {
    n: usize,
    dw: usize,
    terms: BTreeMap<[u8; MAX_DIM], CliffordElem>,
}

impl XPoly {
    pub fn zero(n: usize, dw: usize) -> Self {
        XPoly {
            n,
            dw,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CliffordElem) -> Self {
        let mut p = XPoly::zero(c.n(), c.dw());
        p.add_term(&[], c);
        p
    }

    /// Adds `c · x^exps`.
    pub fn add_term(&mut self, exps: &[u8], c: CliffordElem) {
        let mut key = [0u8; MAX_DIM];
        key[..exps.len()].copy_from_slice(exps);
        let remove = match self.terms.get_mut(&key) {
            Some(e) => {
                e.add_assign(&c);
                e.is_zero()
            }
            None => {
                if c.is_zero() {
                    return;
                }
                self.terms.insert(key, c);
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.iter().map(|&e| e as u32).sum()).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; MAX_DIM], &CliffordElem)> {
        self.terms.iter()
    }

    /// Value at `x = 0`.
    pub fn at_origin(&self) -> CliffordElem {
        self.terms
            .get(&[0u8; MAX_DIM])
            .cloned()
            .unwrap_or_else(|| CliffordElem::zero(self.n, self.dw))
    }

    pub fn add(&self, rhs: &XPoly) -> XPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &XPoly) -> XPoly {
        let mut out = XPoly::zero(self.n, self.dw);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let mut k = *ka;
                for (e, b) in k.iter_mut().zip(kb) {
                    *e += b;
                }
                out.add_term(&k, ca.mul(cb));
            }
        }
        out
    }

    /// Multiplies every coefficient on the left by `c`.
    pub fn left_mul(&self, c: &CliffordElem) -> XPoly {
        let mut out = XPoly::zero(self.n, self.dw);
        for (k, t) in &self.terms {
            out.add_term(k, c.mul(t));
        }
        out
    }

    /// `∂/∂x_a`.
    pub fn d_x(&self, a: usize) -> XPoly {
        let mut out = XPoly::zero(self.n, self.dw);
        for (k, c) in &self.terms {
            if k[a] > 0 {
                let mut k2 = *k;
                k2[a] -= 1;
                out.add_term(&k2, c.scale(&(k[a] as i64).into()));
            }
        }
        out
    }

    /// The homogeneous symbol `self · ξ^xi · |ξ|^{2q}`.
    pub fn times_xi(&self, xi: &[u8], q: i16) -> HomSymbol {
        let deg = xi.iter().map(|&e| e as i32).sum::<i32>() + 2 * q as i32;
        let mut h = HomSymbol::zero(self.n, self.dw, deg);
        for (k, c) in &self.terms {
            h.add_assign(&HomSymbol::term(self.n, xi, &k[..self.n], q, c.clone()));
        }
        h
    }
}

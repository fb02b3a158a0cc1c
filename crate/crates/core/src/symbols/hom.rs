//! Homogeneous symbols `Σ c · x^β ξ^α |ξ|^{2e}` in a canonical basis.
//!
//! Every monomial keeps the exponent of `ξ_1` at most 1; higher powers are
//! rewritten with `ξ_1² = |ξ|² − Σ_{a≥2} ξ_a²`. The family
//! `{ξ^α |ξ|^{2e} : α_1 ≤ 1, e ∈ Z}` is a basis of `Q[ξ][|ξ|^{-2}]` over the
//! rationals, so two symbols are equal as functions exactly when their term
//! maps coincide.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{rat, CliffordElem, Scalar, MAX_DIM};

/// Exponents of one term `x^x ξ^xi |ξ|^{2q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub q: i16,
    pub xi: [u8; MAX_DIM],
    pub x: [u8; MAX_DIM],
}

impl Mono {
    pub const ONE: Mono = Mono {
        q: 0,
        xi: [0; MAX_DIM],
        x: [0; MAX_DIM],
    };

    pub fn new(xi: &[u8], x: &[u8], q: i16) -> Mono {
        assert!(xi.len() <= MAX_DIM && x.len() <= MAX_DIM, "too many variables");
        let mut m = Mono::ONE;
        m.q = q;
        m.xi[..xi.len()].copy_from_slice(xi);
        m.x[..x.len()].copy_from_slice(x);
        m
    }

    pub fn xi_degree(&self) -> i32 {
        self.xi.iter().map(|&e| e as i32).sum()
    }

    pub fn x_degree(&self) -> i32 {
        self.x.iter().map(|&e| e as i32).sum()
    }

    /// Homogeneity degree in ξ.
    pub fn degree(&self) -> i32 {
        self.xi_degree() + 2 * self.q as i32
    }

    /// x-degree minus ξ-degree; additive under products and the star product.
    pub fn weight(&self) -> i32 {
        self.x_degree() - self.degree()
    }

    fn times(&self, other: &Mono) -> Mono {
        let mut m = *self;
        m.q += other.q;
        for a in 0..MAX_DIM {
            m.xi[a] += other.xi[a];
            m.x[a] += other.x[a];
        }
        m
    }
}

/// Adds `c · mono` to `terms`, reducing `ξ_1` powers into the canonical basis.
pub(crate) fn push_term(terms: &mut BTreeMap<Mono, CliffordElem>, n: usize, mono: Mono, c: CliffordElem) {
    if c.is_zero() {
        return;
    }
    if mono.xi[0] >= 2 {
        let mut base = mono;
        base.xi[0] -= 2;
        let mut up = base;
        up.q += 1;
        push_term(terms, n, up, c.clone());
        let neg = c.neg();
        for a in 1..n {
            let mut m = base;
            m.xi[a] += 2;
            push_term(terms, n, m, neg.clone());
        }
        return;
    }
    let remove = match terms.get_mut(&mono) {
        Some(existing) => {
            existing.add_assign(&c);
            existing.is_zero()
        }
        None => {
            terms.insert(mono, c);
            false
        }
    };
    if remove {
        terms.remove(&mono);
    }
}

/// A ξ-homogeneous symbol of fixed degree with polynomial x-dependence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomSymbol {
    n: usize,
    dw: usize,
    degree: i32,
    terms: BTreeMap<Mono, CliffordElem>,
}

impl HomSymbol {
    pub fn zero(n: usize, dw: usize, degree: i32) -> Self {
        HomSymbol {
            n,
            dw,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The single term `c · x^x ξ^xi |ξ|^{2q}`.
    pub fn term(n: usize, xi: &[u8], x: &[u8], q: i16, c: CliffordElem) -> Self {
        let mono = Mono::new(xi, x, q);
        let mut h = HomSymbol::zero(n, c.dw(), mono.degree());
        h.push(mono, c);
        h
    }

    /// `|ξ|^{2e} ⊗ id`.
    pub fn xi_norm_power(n: usize, dw: usize, e: i16) -> Self {
        Self::term(n, &[], &[], e, CliffordElem::one(n, dw))
    }

    /// The quotient `N / |ξ|^{2M}` for a numerator given as `(ξ-exponents,
    /// x-exponents, coefficient)` triples; all numerator terms must share one
    /// ξ-degree.
    pub fn from_fraction(
        n: usize,
        dw: usize,
        numerator: &[(Vec<u8>, Vec<u8>, CliffordElem)],
        denom_power: u32,
    ) -> Option<Self> {
        let mut degree = None;
        let mut terms = BTreeMap::new();
        for (xi, x, c) in numerator {
            let mono = Mono::new(xi, x, -(denom_power as i16));
            match degree {
                None => degree = Some(mono.degree()),
                Some(d) if d != mono.degree() => return None,
                _ => {}
            }
            push_term(&mut terms, n, mono, c.clone());
        }
        Some(HomSymbol {
            n,
            dw,
            degree: degree.unwrap_or(-2 * denom_power as i32),
            terms,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dw(&self) -> usize {
        self.dw
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CliffordElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn push(&mut self, mono: Mono, c: CliffordElem) {
        debug_assert_eq!(mono.degree(), self.degree, "inhomogeneous term");
        push_term(&mut self.terms, self.n, mono, c);
    }

    /// Smallest `M ≥ 0` such that `|ξ|^{2M}` times this symbol is polynomial in ξ.
    pub fn denom_power(&self) -> u32 {
        self.terms.keys().map(|m| (-(m.q as i32)).max(0) as u32).max().unwrap_or(0)
    }

    /// Numerator `N` with `self = N / |ξ|^{2M}`, `M = denom_power()`, with
    /// every `|ξ|²` expanded as `Σ ξ_a²`.
    pub fn numerator(&self) -> Vec<(Mono, CliffordElem)> {
        let m = self.denom_power() as i16;
        let mut out: BTreeMap<Mono, CliffordElem> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut poly: BTreeMap<Mono, CliffordElem> = BTreeMap::new();
            let mut base = *mono;
            base.q = 0;
            poly.insert(base, c.clone());
            for _ in 0..(mono.q + m) {
                let mut next = BTreeMap::new();
                for (pm, pc) in &poly {
                    for a in 0..self.n {
                        let mut t = *pm;
                        t.xi[a] += 2;
                        add_raw(&mut next, t, pc.clone());
                    }
                }
                poly = next;
            }
            for (pm, pc) in poly {
                add_raw(&mut out, pm, pc);
            }
        }
        out.into_iter().collect()
    }

    pub fn add(&self, rhs: &HomSymbol) -> HomSymbol {
        assert_eq!(self.degree, rhs.degree, "adding symbols of different degree");
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }

    pub fn add_assign(&mut self, rhs: &HomSymbol) {
        if rhs.is_zero() {
            return;
        }
        assert_eq!(self.degree, rhs.degree, "adding symbols of different degree");
        for (m, c) in &rhs.terms {
            push_term(&mut self.terms, self.n, *m, c.clone());
        }
    }

    pub fn sub(&self, rhs: &HomSymbol) -> HomSymbol {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> HomSymbol {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> HomSymbol {
        if s.is_zero() {
            return HomSymbol::zero(self.n, self.dw, self.degree);
        }
        HomSymbol {
            n: self.n,
            dw: self.dw,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, c.scale(s))).collect(),
        }
    }

    /// Multiplies every coefficient on the left by `c`.
    pub fn left_mul(&self, c: &CliffordElem) -> HomSymbol {
        let mut out = HomSymbol::zero(self.n, self.dw, self.degree);
        for (m, t) in &self.terms {
            out.push(*m, c.mul(t));
        }
        out
    }

    /// Pointwise product, coefficients multiplied left to right.
    pub fn mul(&self, rhs: &HomSymbol) -> HomSymbol {
        self.mul_limited(rhs, None)
    }

    /// Product keeping only terms of weight at most `jet`.
    pub(crate) fn mul_limited(&self, rhs: &HomSymbol, jet: Option<i32>) -> HomSymbol {
        let mut out = HomSymbol::zero(self.n, self.dw, self.degree + rhs.degree);
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            for (mb, cb) in &rhs.terms {
                if let Some(j) = jet {
                    if wa + mb.weight() > j {
                        continue;
                    }
                }
                out.push(ma.times(mb), ca.mul(cb));
            }
        }
        out
    }

    /// Multiplies by `|ξ|^{2e}`.
    pub fn times_xi_norm(&self, e: i16) -> HomSymbol {
        HomSymbol {
            n: self.n,
            dw: self.dw,
            degree: self.degree + 2 * e as i32,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = *m;
                    m.q += e;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    /// `∂/∂ξ_a`.
    pub fn d_xi(&self, a: usize) -> HomSymbol {
        let mut out = HomSymbol::zero(self.n, self.dw, self.degree - 1);
        for (m, c) in &self.terms {
            if m.xi[a] > 0 {
                let mut t = *m;
                t.xi[a] -= 1;
                out.push(t, c.scale(&Scalar::real(rat(m.xi[a] as i64, 1))));
            }
            if m.q != 0 {
                let mut t = *m;
                t.xi[a] += 1;
                t.q -= 1;
                out.push(t, c.scale(&Scalar::real(rat(2 * m.q as i64, 1))));
            }
        }
        out
    }

    /// `∂/∂x_a`.
    pub fn d_x(&self, a: usize) -> HomSymbol {
        let mut out = HomSymbol::zero(self.n, self.dw, self.degree);
        for (m, c) in &self.terms {
            if m.x[a] > 0 {
                let mut t = *m;
                t.x[a] -= 1;
                out.push(t, c.scale(&Scalar::real(rat(m.x[a] as i64, 1))));
            }
        }
        out
    }

    /// Multiplies by `ξ_a`.
    pub fn times_xi(&self, a: usize) -> HomSymbol {
        let mut out = HomSymbol::zero(self.n, self.dw, self.degree + 1);
        for (m, c) in &self.terms {
            let mut t = *m;
            t.xi[a] += 1;
            out.push(t, c.clone());
        }
        out
    }

    /// Multiplies by `x_a`.
    pub fn times_x(&self, a: usize) -> HomSymbol {
        let mut out = HomSymbol::zero(self.n, self.dw, self.degree);
        for (m, c) in &self.terms {
            let mut t = *m;
            t.x[a] += 1;
            out.push(t, c.clone());
        }
        out
    }

    /// Restriction to `x = 0`.
    pub fn at_origin(&self) -> HomSymbol {
        HomSymbol {
            n: self.n,
            dw: self.dw,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.x_degree() == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drops terms of x-degree above `max_x_degree`.
    pub fn truncate_x(&self, max_x_degree: i32) -> HomSymbol {
        self.filter(|m| m.x_degree() <= max_x_degree)
    }

    pub(crate) fn filter(&self, keep: impl Fn(&Mono) -> bool) -> HomSymbol {
        HomSymbol {
            n: self.n,
            dw: self.dw,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&CliffordElem) -> CliffordElem) -> HomSymbol {
        let mut out = HomSymbol::zero(self.n, self.dw, self.degree);
        for (m, c) in &self.terms {
            out.push(*m, f(c));
        }
        out
    }
}

fn add_raw(map: &mut BTreeMap<Mono, CliffordElem>, m: Mono, c: CliffordElem) {
    let remove = match map.get_mut(&m) {
        Some(e) => {
            e.add_assign(&c);
            e.is_zero()
        }
        None => {
            map.insert(m, c);
            false
        }
    };
    if remove {
        map.remove(&m);
    }
}

impl fmt::Display for HomSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}]")?;
            for a in 0..self.n {
                match m.x[a] {
                    0 => {}
                    1 => write!(f, "·x{}", a + 1)?,
                    e => write!(f, "·x{}^{e}", a + 1)?,
                }
            }
            for a in 0..self.n {
                match m.xi[a] {
                    0 => {}
                    1 => write!(f, "·ξ{}", a + 1)?,
                    e => write!(f, "·ξ{}^{e}", a + 1)?,
                }
            }
            if m.q != 0 {
                write!(f, "·|ξ|^{}", 2 * m.q)?;
            }
        }
        Ok(())
    }
}

use std::collections::BTreeMap;
use std::fmt;

use super::hom::{HomSymbol, Mono};
use super::SymbolError;
use crate::algebra::{CliffordElem, Scalar};

/// Floor used by symbols that are exact in every degree (finite sums).
pub const FLOOR_EXACT: i32 = -(1 << 20);

/// Which part of a symbol is known exactly.
///
/// Components of degree below `floor` are unknown. When `jet` is set, terms
/// whose weight (x-degree minus ξ-degree) exceeds it are unknown as well.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trunc {
    pub floor: i32,
    pub jet: Option<i32>,
}

impl Trunc {
    pub fn floor(floor: i32) -> Self {
        Trunc { floor, jet: None }
    }

    pub fn keeps(&self, m: &Mono) -> bool {
        m.degree() >= self.floor && self.jet.map_or(true, |j| m.weight() <= j)
    }
}

pub(crate) fn min_jet(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// A polyhomogeneous symbol `Σ_{floor ≤ d ≤ order} σ_d` with ξ-homogeneous
/// components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSymbol {
    n: usize,
    dw: usize,
    order: i32,
    floor: i32,
    jet: Option<i32>,
    comps: BTreeMap<i32, HomSymbol>,
}

impl ClassicalSymbol {
    pub fn zero(n: usize, dw: usize, order: i32, floor: i32) -> Self {
        ClassicalSymbol {
            n,
            dw,
            order,
            floor,
            jet: None,
            comps: BTreeMap::new(),
        }
    }

    /// Exact symbol with the given components; the order is the top degree
    /// present (0 when empty).
    pub fn from_components(n: usize, dw: usize, comps: impl IntoIterator<Item = HomSymbol>) -> Self {
        let mut s = ClassicalSymbol::zero(n, dw, i32::MIN, FLOOR_EXACT);
        for h in comps {
            s.order = s.order.max(h.degree());
            s.add_component(h);
        }
        if s.order == i32::MIN {
            s.order = 0;
        }
        s
    }

    /// `|ξ|² ⊗ id_W`.
    pub fn xi_squared(n: usize, dw: usize) -> Self {
        Self::from_components(n, dw, [HomSymbol::xi_norm_power(n, dw, 1)])
    }

    /// The x- and ξ-independent symbol `c`.
    pub fn constant(c: CliffordElem) -> Self {
        let (n, dw) = (c.n(), c.dw());
        Self::from_components(n, dw, [HomSymbol::term(n, &[], &[], 0, c)])
    }

    pub fn one(n: usize, dw: usize) -> Self {
        Self::constant(CliffordElem::one(n, dw))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dw(&self) -> usize {
        self.dw
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn jet(&self) -> Option<i32> {
        self.jet
    }

    pub fn is_exact(&self) -> bool {
        self.floor == FLOOR_EXACT && self.jet.is_none()
    }

    pub fn trunc(&self) -> Trunc {
        Trunc {
            floor: self.floor,
            jet: self.jet,
        }
    }

    /// Stored (nonzero) components, by degree.
    pub fn components(&self) -> impl Iterator<Item = (&i32, &HomSymbol)> {
        self.comps.iter()
    }

    /// Component of degree `d` (zero when absent).
    pub fn component(&self, d: i32) -> HomSymbol {
        self.comps
            .get(&d)
            .cloned()
            .unwrap_or_else(|| HomSymbol::zero(self.n, self.dw, d))
    }

    /// Degree of the highest nonzero component.
    pub fn top_degree(&self) -> Option<i32> {
        self.comps.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Adds `h` to the component of its degree; terms outside the known
    /// window are discarded.
    pub fn add_component(&mut self, h: HomSymbol) {
        assert!(h.n() == self.n && h.dw() == self.dw, "symbol shape mismatch");
        let d = h.degree();
        if h.is_zero() || d < self.floor {
            return;
        }
        let h = match self.jet {
            Some(j) => h.filter(|m| m.weight() <= j),
            None => h,
        };
        if h.is_zero() {
            return;
        }
        assert!(d <= self.order, "component of degree {d} above order {}", self.order);
        let remove = match self.comps.get_mut(&d) {
            Some(existing) => {
                existing.add_assign(&h);
                existing.is_zero()
            }
            None => {
                self.comps.insert(d, h);
                false
            }
        };
        if remove {
            self.comps.remove(&d);
        }
    }

    /// Restricts the known window.
    pub fn truncate(&self, t: Trunc) -> ClassicalSymbol {
        let floor = self.floor.max(t.floor);
        let jet = min_jet(self.jet, t.jet);
        let mut out = ClassicalSymbol {
            n: self.n,
            dw: self.dw,
            order: self.order,
            floor,
            jet,
            comps: BTreeMap::new(),
        };
        for h in self.comps.values() {
            out.add_component(h.clone());
        }
        out
    }

    pub fn with_floor(&self, floor: i32) -> ClassicalSymbol {
        self.truncate(Trunc::floor(floor))
    }

    /// Raises the declared order (a formal bound) to `order`.
    pub fn with_order(mut self, order: i32) -> ClassicalSymbol {
        assert!(self.top_degree().map_or(true, |d| d <= order));
        self.order = order;
        self
    }

    fn check_shape(&self, rhs: &ClassicalSymbol) -> Result<(), SymbolError> {
        if self.n != rhs.n || self.dw != rhs.dw {
            return Err(SymbolError::DimensionMismatch(format!(
                "(n={}, d_W={}) vs (n={}, d_W={})",
                self.n, self.dw, rhs.n, rhs.dw
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &ClassicalSymbol) -> Result<ClassicalSymbol, SymbolError> {
        self.check_shape(rhs)?;
        let mut out = ClassicalSymbol {
            n: self.n,
            dw: self.dw,
            order: self.order.max(rhs.order),
            floor: self.floor.max(rhs.floor),
            jet: min_jet(self.jet, rhs.jet),
            comps: BTreeMap::new(),
        };
        for h in self.comps.values().chain(rhs.comps.values()) {
            out.add_component(h.clone());
        }
        Ok(out)
    }

    /// Sum; the known window is the intersection of both windows.
    pub fn add(&self, rhs: &ClassicalSymbol) -> ClassicalSymbol {
        self.try_add(rhs).expect("symbol shape mismatch")
    }

    pub fn sub(&self, rhs: &ClassicalSymbol) -> ClassicalSymbol {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> ClassicalSymbol {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> ClassicalSymbol {
        self.map_components(|h| h.scale(s))
    }

    /// Applies a degree-preserving map to every component.
    pub fn map_components(&self, f: impl Fn(&HomSymbol) -> HomSymbol) -> ClassicalSymbol {
        let mut out = ClassicalSymbol {
            comps: BTreeMap::new(),
            ..self.clone()
        };
        for h in self.comps.values() {
            out.add_component(f(h));
        }
        out
    }

    /// Multiplies by `|ξ|^{2e}`.
    pub fn times_xi_norm(&self, e: i16) -> ClassicalSymbol {
        let shift = 2 * e as i32;
        let mut out = ClassicalSymbol {
            n: self.n,
            dw: self.dw,
            order: self.order + shift,
            floor: if self.floor == FLOOR_EXACT { FLOOR_EXACT } else { self.floor + shift },
            jet: self.jet.map(|j| j - shift),
            comps: BTreeMap::new(),
        };
        for h in self.comps.values() {
            out.add_component(h.times_xi_norm(e));
        }
        out
    }

    /// `∂/∂x_a`; each term's weight drops by one.
    pub fn d_x(&self, a: usize) -> ClassicalSymbol {
        let mut out = ClassicalSymbol {
            jet: self.jet.map(|j| j - 1),
            comps: BTreeMap::new(),
            ..self.clone()
        };
        for h in self.comps.values() {
            out.add_component(h.d_x(a));
        }
        out
    }

    /// `∂/∂ξ_a`; each term's degree drops by one.
    pub fn d_xi(&self, a: usize) -> ClassicalSymbol {
        let mut out = ClassicalSymbol {
            n: self.n,
            dw: self.dw,
            order: self.order - 1,
            floor: if self.floor == FLOOR_EXACT { FLOOR_EXACT } else { self.floor - 1 },
            jet: self.jet.map(|j| j + 1),
            comps: BTreeMap::new(),
        };
        for h in self.comps.values() {
            out.add_component(h.d_xi(a));
        }
        out
    }

    /// Restriction to `x = 0`.
    pub fn at_origin(&self) -> ClassicalSymbol {
        self.map_components(HomSymbol::at_origin)
    }

    /// True when both symbols agree on every degree in `[lo, hi]` inside the
    /// common known window.
    pub fn agrees_with(&self, rhs: &ClassicalSymbol, lo: i32, hi: i32) -> bool {
        let t = Trunc {
            floor: self.floor.max(rhs.floor),
            jet: min_jet(self.jet, rhs.jet),
        };
        (lo.max(t.floor)..=hi).all(|d| {
            let a = self.component(d).filter(|m| t.keeps(m));
            let b = rhs.component(d).filter(|m| t.keeps(m));
            a == b
        })
    }

    pub(crate) fn set_window(&mut self, order: i32, floor: i32, jet: Option<i32>) {
        self.order = order;
        self.floor = floor;
        self.jet = jet;
        let keep = Trunc { floor, jet };
        let comps = std::mem::take(&mut self.comps);
        for h in comps.into_values() {
            let h = h.filter(|m| keep.keeps(m));
            if !h.is_zero() {
                assert!(h.degree() <= order, "component above declared order");
                self.comps.insert(h.degree(), h);
            }
        }
    }
}

impl fmt::Display for ClassicalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, h)) in self.comps.iter().rev().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{d}] {h}")?;
        }
        Ok(())
    }
}

/// `log_coeff · log|ξ| + classical`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSymbol {
    pub log_coeff: Scalar,
    pub classical: ClassicalSymbol,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_drops_unknown_terms() {
        let n = 2;
        let one = CliffordElem::one(n, 1);
        let s = ClassicalSymbol::from_components(
            n,
            1,
            [
                HomSymbol::term(n, &[1], &[], 0, one.clone()),
                HomSymbol::term(n, &[], &[2], -1, one.clone()),
                HomSymbol::term(n, &[], &[], -2, one.clone()),
            ],
        );
        assert_eq!(s.order(), 1);
        let t = s.truncate(Trunc { floor: -2, jet: Some(3) });
        assert!(t.component(-2).is_zero());
        assert!(t.component(-4).is_zero());
        assert!(!t.component(1).is_zero());
        assert!(t.agrees_with(&s, -4, 1));
        assert!(!s.agrees_with(&s.add(&ClassicalSymbol::one(n, 1)), -4, 1));
    }

    #[test]
    fn norm_shift_tracks_window() {
        let s = ClassicalSymbol::xi_squared(4, 1).times_xi_norm(-2);
        assert_eq!(s.order(), -2);
        assert_eq!(s.component(-2), HomSymbol::xi_norm_power(4, 1, -1));
    }
}

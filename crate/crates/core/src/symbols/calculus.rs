//! Star product and the derived operations on classical symbols.

use std::collections::BTreeMap;

use super::classical::{min_jet, ClassicalSymbol, Trunc, FLOOR_EXACT};
use super::hom::HomSymbol;
use super::SymbolError;
use crate::algebra::{rat, CliffordElem, Rational, Scalar};

fn minus_i() -> Scalar {
    Scalar::i_pow(-1)
}

fn normalize_floor(f: i32) -> i32 {
    if f <= FLOOR_EXACT / 2 {
        FLOOR_EXACT
    } else {
        f
    }
}

fn check_shape(s: &ClassicalSymbol, t: &ClassicalSymbol) -> Result<(), SymbolError> {
    if s.n() != t.n() || s.dw() != t.dw() {
        return Err(SymbolError::DimensionMismatch(format!(
            "(n={}, d_W={}) vs (n={}, d_W={})",
            s.n(),
            s.dw(),
            t.n(),
            t.dw()
        )));
    }
    Ok(())
}

struct Accumulator {
    lo: i32,
    hi: i32,
    jet: Option<i32>,
    out: BTreeMap<i32, HomSymbol>,
}

impl Accumulator {
    fn push(&mut self, h: HomSymbol) {
        if h.is_zero() {
            return;
        }
        let h = match self.jet {
            Some(j) => h.filter(|m| m.weight() <= j),
            None => h,
        };
        if h.is_zero() {
            return;
        }
        match self.out.get_mut(&h.degree()) {
            Some(e) => e.add_assign(&h),
            None => {
                self.out.insert(h.degree(), h);
            }
        }
    }
}

/// Walks multi-indices α as nondecreasing index sequences, accumulating
/// `(−i)^{|α|}/α! · ∂_ξ^α a · ∂_x^α b`.
fn leibniz_walk(
    acc: &mut Accumulator,
    da: &HomSymbol,
    db: &HomSymbol,
    start: usize,
    counts: &mut Vec<u32>,
    coeff: &Scalar,
    include_here: bool,
) {
    let deg = da.degree() + db.degree();
    if include_here && deg >= acc.lo && deg <= acc.hi {
        acc.push(da.mul_limited(db, acc.jet).scale(coeff));
    }
    if deg - 1 < acc.lo {
        return;
    }
    for a in start..da.n() {
        let db2 = db.d_x(a);
        if db2.is_zero() {
            continue;
        }
        let da2 = da.d_xi(a);
        if da2.is_zero() {
            continue;
        }
        counts[a] += 1;
        let c2 = (coeff * &minus_i()).scale(&rat(1, counts[a] as i64));
        leibniz_walk(acc, &da2, &db2, a, counts, &c2, true);
        counts[a] -= 1;
    }
}

/// Components of `s ⋆ t` with degree in `[lo, hi]`, restricted to weight ≤ `jet`.
fn star_window(
    s: &ClassicalSymbol,
    t: &ClassicalSymbol,
    lo: i32,
    hi: i32,
    jet: Option<i32>,
) -> BTreeMap<i32, HomSymbol> {
    let mut acc = Accumulator {
        lo,
        hi,
        jet,
        out: BTreeMap::new(),
    };
    let mut counts = vec![0u32; s.n()];
    for (&d1, h1) in s.components() {
        for (&d2, h2) in t.components() {
            if d1 + d2 < lo {
                continue;
            }
            leibniz_walk(&mut acc, h1, h2, 0, &mut counts, &Scalar::one(), true);
        }
    }
    acc.out
}

fn assemble(
    n: usize,
    dw: usize,
    order: i32,
    floor: i32,
    jet: Option<i32>,
    comps: impl IntoIterator<Item = HomSymbol>,
) -> ClassicalSymbol {
    let mut out = ClassicalSymbol::zero(n, dw, order, normalize_floor(floor));
    out.set_window(order, normalize_floor(floor), jet);
    for h in comps {
        if h.degree() <= order {
            out.add_component(h);
        }
    }
    out
}

/// `s ⋆ t` on the window `trunc`, intersected with what the inputs determine.
///
/// When a jet bound is in force, all terms of both inputs are assumed to have
/// nonnegative weight so that the bound is preserved.
pub fn star_with(s: &ClassicalSymbol, t: &ClassicalSymbol, trunc: Trunc) -> ClassicalSymbol {
    check_shape(s, t).expect("symbol shape mismatch");
    let order = s.order() + t.order();
    let floor = normalize_floor(trunc.floor.max(s.floor() + t.order()).max(t.floor() + s.order()));
    let jet = min_jet(trunc.jet, min_jet(s.jet(), t.jet()));
    let comps = star_window(s, t, floor, order, jet);
    assemble(s.n(), s.dw(), order, floor, jet, comps.into_values())
}

/// `s ⋆ t = Σ_α (−i)^{|α|}/α! ∂_ξ^α s · ∂_x^α t`, components below `floor` dropped.
pub fn star(s: &ClassicalSymbol, t: &ClassicalSymbol, floor: i32) -> Result<ClassicalSymbol, SymbolError> {
    check_shape(s, t)?;
    Ok(star_with(s, t, Trunc::floor(floor)))
}

/// `s ⋆ t − t ⋆ s`.
pub fn star_bracket(s: &ClassicalSymbol, t: &ClassicalSymbol, trunc: Trunc) -> ClassicalSymbol {
    star_with(s, t, trunc).sub(&star_with(t, s, trunc))
}

/// `(L_x + Δ_x)^k t` with `L_x = −2i Σ ξ_a ∂_{x_a}` and `Δ_x = −Σ ∂²_{x_a}`.
pub fn ad_xi2(t: &ClassicalSymbol, k: u32) -> ClassicalSymbol {
    let mut cur = t.clone();
    let n = t.n();
    let l_coeff = Scalar::new(rat(0, 1), rat(-2, 1));
    for _ in 0..k {
        let floor = if cur.floor() == FLOOR_EXACT {
            FLOOR_EXACT
        } else {
            cur.floor() + 1
        };
        let jet = cur.jet().map(|j| j - 2);
        let mut parts = Vec::new();
        for (_, h) in cur.components() {
            let mut lh = HomSymbol::zero(n, t.dw(), h.degree() + 1);
            let mut dh = HomSymbol::zero(n, t.dw(), h.degree());
            for a in 0..n {
                let dx = h.d_x(a);
                if dx.is_zero() {
                    continue;
                }
                lh.add_assign(&dx.times_xi(a));
                dh.add_assign(&dx.d_x(a));
            }
            parts.push(lh.scale(&l_coeff));
            parts.push(dh.neg());
        }
        cur = assemble(n, t.dw(), cur.order() + 1, floor, jet, parts);
    }
    cur
}

fn log_walk(acc: &mut Accumulator, dlog: &HomSymbol, dt: &HomSymbol, start: usize, counts: &mut Vec<u32>, coeff: &Scalar) {
    let deg = dlog.degree() + dt.degree();
    if deg >= acc.lo && deg <= acc.hi {
        acc.push(dt.mul_limited(dlog, acc.jet).scale(coeff));
    }
    if deg - 1 < acc.lo {
        return;
    }
    for b in start..dt.n() {
        let dt2 = dt.d_x(b);
        if dt2.is_zero() {
            continue;
        }
        counts[b] += 1;
        let c2 = (coeff * &minus_i()).scale(&rat(1, counts[b] as i64));
        log_walk(acc, &dlog.d_xi(b), &dt2, b, counts, &c2);
        counts[b] -= 1;
    }
}

/// `{log|ξ|², t}_⋆ = Σ_{|α|≥1} (−i)^{|α|}/α! ∂_ξ^α log|ξ|² · ∂_x^α t`.
pub fn log_bracket_with(t: &ClassicalSymbol, trunc: Trunc) -> ClassicalSymbol {
    let n = t.n();
    let dw = t.dw();
    let order = t.order() - 1;
    let floor = normalize_floor(trunc.floor.max(if t.floor() == FLOOR_EXACT {
        FLOOR_EXACT
    } else {
        t.floor() - 1
    }));
    let jet = min_jet(trunc.jet, t.jet());
    let mut acc = Accumulator {
        lo: floor,
        hi: order,
        jet,
        out: BTreeMap::new(),
    };
    let mut counts = vec![0u32; n];
    for (_, h) in t.components() {
        for a in 0..n {
            let dt = h.d_x(a);
            if dt.is_zero() {
                continue;
            }
            // ∂_a log|ξ|² = 2 ξ_a |ξ|^{-2}
            let dlog = HomSymbol::term(n, &unit(a), &[], -1, CliffordElem::scalar(n, dw, Scalar::from_int(2)));
            counts[a] += 1;
            log_walk(&mut acc, &dlog, &dt, a, &mut counts, &minus_i());
            counts[a] -= 1;
        }
    }
    assemble(n, dw, order, floor, jet, acc.out.into_values())
}

/// Floor-only form of [`log_bracket_with`].
pub fn log_bracket(t: &ClassicalSymbol, floor: i32) -> ClassicalSymbol {
    log_bracket_with(t, Trunc::floor(floor))
}

/// Exponent vector with a single 1 in slot `a`.
pub fn unit(a: usize) -> Vec<u8> {
    let mut v = vec![0u8; a + 1];
    v[a] = 1;
    v
}

/// Right parametrix `t` of `s` with `s ⋆ t = 1` on degrees `≥ floor`.
///
/// The leading component of `s` must be `c |ξ|^{order}` with `c` an invertible
/// scalar and even order.
pub fn parametrix(s: &ClassicalSymbol, floor: i32) -> Result<ClassicalSymbol, SymbolError> {
    let a = s.order();
    let lead = s.component(a);
    let bad = || SymbolError::NonInvertibleLeading(lead.to_string());
    if a % 2 != 0 || lead.len() != 1 || s.jet().is_some() {
        return Err(bad());
    }
    let (mono, coeff) = lead.terms().next().expect("one term");
    if mono.xi_degree() != 0 || mono.x_degree() != 0 {
        return Err(bad());
    }
    let c = coeff.as_scalar().ok_or_else(bad)?;
    let c_inv = c.inv().ok_or_else(bad)?;
    let half = (a / 2) as i16;
    let (n, dw) = (s.n(), s.dw());
    let floor = normalize_floor(floor.max(if s.floor() == FLOOR_EXACT {
        FLOOR_EXACT
    } else {
        s.floor() - 2 * a
    }));
    let t0 = HomSymbol::xi_norm_power(n, dw, -half).scale(&c_inv);
    let mut t = assemble(n, dw, -a, floor, None, [t0]);
    let mut j = 1;
    while -a - j >= floor {
        let s_j = star_window(s, &t, -j, -j, None)
            .remove(&-j)
            .unwrap_or_else(|| HomSymbol::zero(n, dw, -j));
        if !s_j.is_zero() {
            t.add_component(s_j.times_xi_norm(-half).scale(&(-&c_inv)));
        }
        j += 1;
        if floor == FLOOR_EXACT && j > 64 {
            return Err(SymbolError::Unbounded("parametrix needs a finite floor".into()));
        }
    }
    Ok(t)
}

/// `log_⋆(1 + u) = Σ_{j≥1} (−1)^{j+1} u^{⋆j} / j` on the window `trunc`.
pub fn neumann_log_with(u: &ClassicalSymbol, trunc: Trunc) -> Result<ClassicalSymbol, SymbolError> {
    let ord = u.order();
    if ord >= 0 {
        return Err(SymbolError::NonNegativeOrder(ord));
    }
    if trunc.floor == FLOOR_EXACT {
        return Err(SymbolError::Unbounded("logarithm series needs a finite floor".into()));
    }
    let base = u.truncate(trunc);
    let mut power = base.clone();
    let mut sum = base.clone();
    let mut j: i64 = 1;
    while (j + 1) * ord as i64 >= trunc.floor as i64 {
        j += 1;
        power = star_with(&power, &base, trunc);
        let sign = if j % 2 == 0 { -1 } else { 1 };
        sum = sum.add(&power.scale(&Scalar::real(rat(sign, j))));
    }
    Ok(sum.with_order_bound(ord))
}

/// Floor-only form of [`neumann_log_with`].
pub fn neumann_log(u: &ClassicalSymbol, floor: i32) -> Result<ClassicalSymbol, SymbolError> {
    neumann_log_with(u, Trunc::floor(floor))
}

/// `exp_⋆(w) = Σ_k w^{⋆k}/k!` for `w` of negative order, down to `floor`.
pub fn star_exp(w: &ClassicalSymbol, floor: i32) -> Result<ClassicalSymbol, SymbolError> {
    let ord = w.order();
    if ord >= 0 {
        return Err(SymbolError::NonNegativeOrder(ord));
    }
    let trunc = Trunc::floor(floor);
    let base = w.truncate(trunc);
    let mut sum = ClassicalSymbol::one(w.n(), w.dw()).add(&base);
    let mut power = base.clone();
    let mut k: i64 = 1;
    let mut fact = Rational::from_integer(1.into());
    while (k + 1) * ord as i64 >= floor as i64 {
        k += 1;
        fact *= Rational::from_integer(k.into());
        power = star_with(&power, &base, trunc);
        sum = sum.add(&power.scale(&Scalar::real(fact.recip())));
    }
    Ok(sum)
}

impl ClassicalSymbol {
    /// Lowers the declared order when the sum is known to vanish above it.
    pub(crate) fn with_order_bound(mut self, order: i32) -> ClassicalSymbol {
        let (floor, jet) = (self.floor(), self.jet());
        self.set_window(order, floor, jet);
        self
    }
}

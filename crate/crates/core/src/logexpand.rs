//! Three independent constructions of the symbol of `log Q` for
//! `Q = |ξ|² + q_lower`, and the residue density of the result.
//!
//! All routes work on the window of degrees `≥ −n` and, within degree `−j`,
//! on x-jets of order at most `n − j`. Every intermediate factor used below has
//! weight (x-degree minus ξ-degree) at least 1, weights add under the star
//! product and are preserved by the log bracket, so this window is closed
//! and contains everything the residue at the origin reads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::algebra::{factorial, rat, PiScalar, Rational, Scalar};
use crate::residue::{residue_density, ResidueError, TraceKind};
use crate::symbols::{FLOOR_EXACT, 
    ad_xi2, log_bracket_with, neumann_log_with, star_with, ClassicalSymbol, HomSymbol, LogSymbol, SymbolError,
    Trunc,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogError {
    #[error("lower-order part must have order at most 1, got {0}")]
    OrderTooHigh(i32),
    #[error("dimension mismatch: symbol has n = {symbol}, requested n = {requested}")]
    Dimension { symbol: usize, requested: usize },
    #[error("dimension must be even and at least 2, got {0}")]
    OddDimension(usize),
    #[error("lower-order part must be known exactly")]
    InexactInput,
    #[error("Lie monomials start at k = 2, got {0}")]
    LieDegree(u32),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

/// Construction used for `σ(log Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Ch,
    Taylor,
    Seeley,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ch, Method::Taylor, Method::Seeley];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ch => "ch",
            Method::Taylor => "taylor",
            Method::Seeley => "seeley",
        })
    }
}

/// Window used by every route in dimension `n`.
pub fn route_window(n: usize) -> Trunc {
    Trunc {
        floor: -(n as i32),
        jet: Some(n as i32),
    }
}

fn check_input(q_lower: &ClassicalSymbol, n: usize) -> Result<(), LogError> {
    if n < 2 || n % 2 == 1 {
        return Err(LogError::OddDimension(n));
    }
    if q_lower.n() != n {
        return Err(LogError::Dimension {
            symbol: q_lower.n(),
            requested: n,
        });
    }
    if q_lower.top_degree().is_some_and(|d| d >= 2) {
        return Err(LogError::OrderTooHigh(q_lower.top_degree().unwrap_or(0)));
    }
    if !q_lower.is_exact() {
        return Err(LogError::InexactInput);
    }
    Ok(())
}

fn finish(classical: ClassicalSymbol, n: usize) -> LogSymbol {
    let t = route_window(n);
    let mut c = ClassicalSymbol::zero(classical.n(), classical.dw(), -1, t.floor).truncate(t);
    for (_, h) in classical.components() {
        if h.degree() <= -1 {
            c.add_component(h.clone());
        } else {
            assert!(h.is_zero(), "log symbol has a classical component of positive degree");
        }
    }
    LogSymbol {
        log_coeff: Scalar::from_int(2),
        classical: c,
    }
}

// ---------------------------------------------------------------------------
// Campbell-Hausdorff route

/// Letters of a Lie word: `P` acts by the bracket with `log|ξ|²`, `T` by the
/// star commutator with `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    P,
    T,
}

/// `coeff · ad_{l_1} ⋯ ad_{l_m}(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieWord {
    pub letters: Vec<Letter>,
    pub coeff: Rational,
}

/// The degree-`k` Campbell-Hausdorff term of `log(e^P e^T)` as a combination
/// of nested brackets applied to `T`.
///
/// Uses `log(e^X e^Y) = X + Y + Σ_j (−1)^{j+1}/(j(j+1)) Σ ad_X^{α_1} ad_Y^{β_1} ⋯
/// ad_X^{α_j} ad_Y^{β_j}(Y) / ((1+Σβ) Π α_i! β_i!)`, where each pair has
/// `α_i + β_i > 0` and the exponents sum to `k − 1`; words ending in `ad_Y`
/// vanish and are skipped.
pub fn lie_words(k: u32) -> Result<Vec<LieWord>, LogError> {
    if k < 2 {
        return Err(LogError::LieDegree(k));
    }
    let mut acc: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
    let total = k - 1;
    for j in 1..=total {
        let outer = rat(if j % 2 == 1 { 1 } else { -1 }, (j * (j + 1)) as i64);
        let mut pairs = Vec::new();
        enumerate_pairs(j, total, &mut pairs, &mut |pairs: &[(u32, u32)]| {
            let (_, last_beta) = pairs[pairs.len() - 1];
            if last_beta > 0 {
                return;
            }
            let beta_sum: u32 = pairs.iter().map(|p| p.1).sum();
            let mut c = outer.clone() / Rational::from_integer((1 + beta_sum as i64).into());
            let mut letters = Vec::new();
            for &(a, b) in pairs {
                c /= factorial(a as u64) * factorial(b as u64);
                letters.extend(std::iter::repeat(Letter::P).take(a as usize));
                letters.extend(std::iter::repeat(Letter::T).take(b as usize));
            }
            *acc.entry(letters).or_insert_with(|| rat(0, 1)) += c;
        });
    }
    Ok(acc
        .into_iter()
        .filter(|(_, c)| *c != rat(0, 1))
        .map(|(letters, coeff)| LieWord { letters, coeff })
        .collect())
}

fn enumerate_pairs(
    remaining_slots: u32,
    remaining_sum: u32,
    cur: &mut Vec<(u32, u32)>,
    f: &mut impl FnMut(&[(u32, u32)]),
) {
    if remaining_slots == 0 {
        if remaining_sum == 0 {
            f(cur);
        }
        return;
    }
    // Each remaining slot needs at least 1.
    if remaining_sum < remaining_slots {
        return;
    }
    for s in 1..=(remaining_sum - (remaining_slots - 1)) {
        for a in 0..=s {
            cur.push((a, s - a));
            enumerate_pairs(remaining_slots - 1, remaining_sum - s, cur, f);
            cur.pop();
        }
    }
}

struct WordEvaluator<'a> {
    tau: &'a ClassicalSymbol,
    trunc: Trunc,
    memo: HashMap<Vec<Letter>, ClassicalSymbol>,
}

impl WordEvaluator<'_> {
    fn eval(&mut self, letters: &[Letter]) -> ClassicalSymbol {
        if letters.is_empty() {
            return self.tau.clone();
        }
        if let Some(v) = self.memo.get(letters) {
            return v.clone();
        }
        let inner = self.eval(&letters[1..]);
        let out = match letters[0] {
            Letter::P => log_bracket_with(&inner, self.trunc),
            Letter::T => {
                star_with(self.tau, &inner, self.trunc).sub(&star_with(&inner, self.tau, self.trunc))
            }
        };
        self.memo.insert(letters.to_vec(), out.clone());
        out
    }
}

fn lie_monomial_with(k: u32, tau: &ClassicalSymbol, trunc: Trunc) -> Result<ClassicalSymbol, LogError> {
    let words = lie_words(k)?;
    let mut ev = WordEvaluator {
        tau,
        trunc,
        memo: HashMap::new(),
    };
    let mut sum = ClassicalSymbol::zero(tau.n(), tau.dw(), tau.order() - 1, trunc.floor).truncate(trunc);
    for w in &words {
        sum = sum.add(&ev.eval(&w.letters).scale(&Scalar::real(w.coeff.clone())));
    }
    Ok(sum)
}

/// `C^{(k)}(log|ξ|², τ)`, the degree-`k` Campbell-Hausdorff term, down to `floor`.
pub fn lie_monomial(k: u32, tau: &ClassicalSymbol, floor: i32) -> Result<ClassicalSymbol, LogError> {
    lie_monomial_with(k, tau, Trunc::floor(floor))
}

/// `σ(log Q) = log|ξ|² + τ + Σ_{k=2}^n C^{(k)}(log|ξ|², τ)` with
/// `τ = log_⋆(|ξ|^{−2} ⋆ Q)`.
pub fn log_via_ch(q_lower: &ClassicalSymbol, n: usize) -> Result<LogSymbol, LogError> {
    check_input(q_lower, n)?;
    let trunc = route_window(n);
    let inv = ClassicalSymbol::from_components(n, q_lower.dw(), [HomSymbol::xi_norm_power(n, q_lower.dw(), -1)]);
    let u = star_with(&inv, q_lower, trunc);
    if u.is_zero() {
        return Ok(finish(u, n));
    }
    let tau = neumann_log_with(&u.with_order_bound(-1), trunc)?;
    let mut total = tau.clone();
    for k in 2..=n as u32 {
        total = total.add(&lie_monomial_with(k, &tau, trunc)?);
    }
    Ok(finish(total, n))
}

// ---------------------------------------------------------------------------
// Noncommutative Taylor route

/// `σ(log Q) = log|ξ|² + Σ_{p≥1} Σ_k (−1)^{|k|+p−1}(|k|+p−1)! / (k! (k_1+1)(k_1+k_2+2)⋯)
/// · (ad^{k_1} q ⋆ ⋯ ⋆ ad^{k_p} q) |ξ|^{−2(|k|+p)}` with `ad = ad_{|ξ|²}` and `q = q_lower`.
pub fn log_via_taylor(q_lower: &ClassicalSymbol, n: usize) -> Result<LogSymbol, LogError> {
    check_input(q_lower, n)?;
    let trunc = route_window(n);
    let (nn, dw) = (q_lower.n(), q_lower.dw());
    let max = n;
    let ad: Vec<ClassicalSymbol> = (0..max).map(|k| ad_xi2(q_lower, k as u32)).collect();
    // Before the final |ξ|^{−2(s+i)}, a partial product with i factors and
    // |k| = s only matters on degrees ≥ −n + 2(s+i) and weights ≤ n − 2(s+i).
    let window = |i: usize, s: usize| {
        let shift = 2 * (s + i) as i32;
        Trunc {
            floor: trunc.floor + shift,
            jet: trunc.jet.map(|j| j - shift),
        }
    };
    let zero = || ClassicalSymbol::zero(nn, dw, 0, FLOOR_EXACT);
    // b[i][s]: weighted sum of the ⋆-products with i factors and |k| = s.
    let mut b: Vec<Vec<ClassicalSymbol>> = vec![vec![zero(); max + 1]; max + 1];
    for s in 0..max {
        let w = Rational::from_integer(1.into()) / (factorial(s as u64) * rat(s as i64 + 1, 1));
        b[1][s] = ad[s].truncate(window(1, s)).scale(&Scalar::real(w));
    }
    for i in 2..=max {
        for s in 0..=(max - i) {
            let mut acc: Option<ClassicalSymbol> = None;
            for k in 0..=s {
                let prev = &b[i - 1][s - k];
                if prev.is_zero() || ad[k].is_zero() {
                    continue;
                }
                let w = Rational::from_integer(1.into()) / (factorial(k as u64) * rat((s + i) as i64, 1));
                let term = star_with(prev, &ad[k], window(i, s)).scale(&Scalar::real(w));
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            if let Some(a) = acc {
                b[i][s] = a;
            }
        }
    }
    let mut total = ClassicalSymbol::zero(nn, dw, -1, trunc.floor).truncate(trunc);
    for (i, row) in b.iter().enumerate().skip(1) {
        for (s, term) in row.iter().enumerate() {
            if s + i > n || term.is_zero() {
                continue;
            }
            let m = (s + i - 1) as u64;
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let placed = term
                .times_xi_norm(-((s + i) as i16))
                .truncate(trunc)
                .scale(&Scalar::real(factorial(m) * rat(sign, 1)));
            total = total.add(&placed);
        }
    }
    Ok(finish(total, n))
}

// ---------------------------------------------------------------------------
// Resolvent (Seeley) route

/// Homogeneous resolvent component `Σ_k H_k · (|ξ|² − λ)^{−1−k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventSymbol {
    pub terms: BTreeMap<u32, HomSymbol>,
}

/// The components `r_{−2−j}`, `j = 0..=n`, of the resolvent of `|ξ|² + q_lower`,
/// with x-degree truncated to `n − j`.
pub fn resolvent_components(q_lower: &ClassicalSymbol, n: usize) -> Vec<ResolventSymbol> {
    let (nn, dw) = (q_lower.n(), q_lower.dw());
    let leading = HomSymbol::xi_norm_power(nn, dw, 1);
    let mut r: Vec<ResolventSymbol> = Vec::with_capacity(n + 1);
    let mut first = BTreeMap::new();
    first.insert(0u32, HomSymbol::xi_norm_power(nn, dw, 0));
    r.push(ResolventSymbol { terms: first });
    for j in 1..=n {
        let max_x = (n - j) as i32;
        let mut acc: BTreeMap<u32, HomSymbol> = BTreeMap::new();
        for (l, rl) in r.iter().enumerate() {
            for (&kr, h) in &rl.terms {
                // Q_{2−kq} with kq = 0 the leading |ξ|² (only through ξ-derivatives).
                for kq in 0..=(j - l) {
                    let qd = 2 - kq as i32;
                    let qcomp = if kq == 0 { leading.clone() } else { q_lower.component(qd) };
                    if qcomp.is_zero() {
                        continue;
                    }
                    let order = (j - l - kq) as u32;
                    if kq == 0 && order == 0 {
                        continue;
                    }
                    let mut sum = HomSymbol::zero(nn, dw, qd + h.degree() - order as i32);
                    let mut counts = vec![0u32; nn];
                    resolvent_walk(&qcomp, h, order, 0, &mut counts, &Scalar::one(), max_x, &mut sum);
                    if sum.is_zero() {
                        continue;
                    }
                    let entry = acc
                        .entry(kr + 1)
                        .or_insert_with(|| HomSymbol::zero(nn, dw, sum.degree()));
                    entry.add_assign(&sum.neg());
                }
            }
        }
        acc.retain(|_, h| !h.is_zero());
        r.push(ResolventSymbol { terms: acc });
    }
    r
}

#[allow(clippy::too_many_arguments)]
fn resolvent_walk(
    dq: &HomSymbol,
    dh: &HomSymbol,
    remaining: u32,
    start: usize,
    counts: &mut Vec<u32>,
    coeff: &Scalar,
    max_x: i32,
    out: &mut HomSymbol,
) {
    if remaining == 0 {
        let prod = dq.mul(dh).truncate_x(max_x).scale(coeff);
        out.add_assign(&prod);
        return;
    }
    for a in start..dq.n() {
        let dh2 = dh.d_x(a);
        if dh2.is_zero() {
            continue;
        }
        let dq2 = dq.d_xi(a);
        if dq2.is_zero() {
            continue;
        }
        counts[a] += 1;
        let c2 = (coeff * &Scalar::i_pow(-1)).scale(&rat(1, counts[a] as i64));
        resolvent_walk(&dq2, &dh2, remaining - 1, a, counts, &c2, max_x, out);
        counts[a] -= 1;
    }
}

/// `σ(log Q)` from the resolvent: the Cauchy integral of `λ^z (|ξ|²−λ)^{−1−k}`
/// is `(−1)^k z(z−1)⋯(z−k+1)/k! · |ξ|^{2(z−k)}`, whose z-derivative at 0 is
/// `−|ξ|^{−2k}/k` for `k ≥ 1` (the `log|ξ|²` part vanishes there).
pub fn log_via_seeley(q_lower: &ClassicalSymbol, n: usize) -> Result<LogSymbol, LogError> {
    check_input(q_lower, n)?;
    let (nn, dw) = (q_lower.n(), q_lower.dw());
    let r = resolvent_components(q_lower, n);
    let mut comps = Vec::new();
    for (j, rj) in r.iter().enumerate().skip(1) {
        let mut h = HomSymbol::zero(nn, dw, -(j as i32));
        for (&k, hk) in &rj.terms {
            assert!(k >= 1, "log|xi| term survived in a lower-order log component");
            h.add_assign(&hk.times_xi_norm(-(k as i16)).scale(&Scalar::real(rat(-1, k as i64))));
        }
        comps.push(h);
    }
    let classical = ClassicalSymbol::from_components(nn, dw, comps);
    Ok(finish(classical, n))
}

// ---------------------------------------------------------------------------

/// `σ(log Q)` by the chosen construction.
pub fn log_symbol(q_lower: &ClassicalSymbol, n: usize, method: Method) -> Result<LogSymbol, LogError> {
    match method {
        Method::Ch => log_via_ch(q_lower, n),
        Method::Taylor => log_via_taylor(q_lower, n),
        Method::Seeley => log_via_seeley(q_lower, n),
    }
}

/// Residue density of `log Q` at the origin.
pub fn res_log(q_lower: &ClassicalSymbol, n: usize, method: Method, kind: TraceKind) -> Result<PiScalar, LogError> {
    let l = log_symbol(q_lower, n, method)?;
    Ok(residue_density(&l.classical, kind)?)
}

/// `ζ_Q(0) = −res(log Q)/2` for a second-order operator.
pub fn zeta_at_zero(res: &PiScalar) -> PiScalar {
    res.scale(&Scalar::ratio(-1, 2))
}

//! Generalised Laplacians built from curvature and gauge data at the centre
//! of a normal chart, characteristic-class comparators, and the two index
//! pipelines.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::algebra::{rat, CliffordElem, MatrixW, PiScalar, Rational, Scalar};
use crate::logexpand::{res_log, LogError, Method};
use crate::residue::{residue_density, ResidueError, TraceKind};
use crate::symbols::{parametrix, star, ClassicalSymbol, HomSymbol, SymbolError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("curvature tensor violates {identity} at indices {indices:?}")]
    Symmetry { identity: &'static str, indices: [usize; 4] },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported dimension {0}")]
    Unsupported(usize),
    #[error(transparent)]
    Log(#[from] LogError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// Riemann tensor `R_{iajk}` at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    n: usize,
    r: Vec<Rational>,
}

fn idx4(n: usize, i: usize, a: usize, j: usize, k: usize) -> usize {
    ((i * n + a) * n + j) * n + k
}

impl CurvatureTensor {
    /// Validates antisymmetry in both pairs, pair symmetry and the first
    /// Bianchi identity.
    pub fn new(n: usize, r: Vec<Rational>) -> Result<Self, GeometryError> {
        if r.len() != n.pow(4) {
            return Err(GeometryError::Dimension(format!(
                "expected {} entries for n = {n}, got {}",
                n.pow(4),
                r.len()
            )));
        }
        let t = CurvatureTensor { n, r };
        for i in 0..n {
            for a in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let v = t.get(i, a, j, k);
                        let at = [i, a, j, k];
                        if *v != -t.get(a, i, j, k) {
                            return Err(GeometryError::Symmetry { identity: "antisymmetry in the first pair", indices: at });
                        }
                        if *v != -t.get(i, a, k, j) {
                            return Err(GeometryError::Symmetry { identity: "antisymmetry in the second pair", indices: at });
                        }
                        if v != t.get(j, k, i, a) {
                            return Err(GeometryError::Symmetry { identity: "pair symmetry", indices: at });
                        }
                        if !(v + t.get(a, j, i, k) + t.get(j, i, a, k)).is_zero() {
                            return Err(GeometryError::Symmetry { identity: "the first Bianchi identity", indices: at });
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn zero(n: usize) -> Self {
        CurvatureTensor {
            n,
            r: vec![Rational::zero(); n.pow(4)],
        }
    }

    /// Projects a random integer tensor onto the space of algebraic
    /// curvature tensors.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let len = n.pow(4);
        let raw: Vec<Rational> = (0..len).map(|_| rat(rng.gen_range(-3..=3), 1)).collect();
        let at = |v: &Vec<Rational>, i, a, j, k| v[idx4(n, i, a, j, k)].clone();
        let build = |f: &dyn Fn(usize, usize, usize, usize) -> Rational| {
            let mut out = vec![Rational::zero(); len];
            for i in 0..n {
                for a in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            out[idx4(n, i, a, j, k)] = f(i, a, j, k);
                        }
                    }
                }
            }
            out
        };
        let half = rat(1, 2);
        let t1 = build(&|i, a, j, k| (at(&raw, i, a, j, k) - at(&raw, a, i, j, k)) * &half);
        let t2 = build(&|i, a, j, k| (at(&t1, i, a, j, k) - at(&t1, i, a, k, j)) * &half);
        let t3 = build(&|i, a, j, k| (at(&t2, i, a, j, k) + at(&t2, j, k, i, a)) * &half);
        let third = rat(1, 3);
        let t4 = build(&|i, a, j, k| {
            let cyc = at(&t3, i, a, j, k) + at(&t3, a, j, i, k) + at(&t3, j, i, a, k);
            at(&t3, i, a, j, k) - cyc * &third
        });
        // Clear denominators so printed tensors stay small.
        let scaled = t4.into_iter().map(|v| v * rat(6, 1)).collect();
        CurvatureTensor::new(n, scaled).expect("projection yields an algebraic curvature tensor")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, a: usize, j: usize, k: usize) -> &Rational {
        &self.r[idx4(self.n, i, a, j, k)]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.r
    }

    /// `s = Σ_{i,j} R_{ijij}`.
    pub fn scalar_curvature(&self) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j, i, j);
            }
        }
        s
    }

    /// `R'_{iajk} = O_{ii'} O_{aa'} O_{jj'} O_{kk'} R_{i'a'j'k'}`.
    pub fn rotate(&self, o: &[Vec<Rational>]) -> CurvatureTensor {
        let n = self.n;
        let mut cur = self.r.clone();
        for slot in 0..4 {
            let mut next = vec![Rational::zero(); cur.len()];
            for (flat, v) in cur.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let mut ix = [flat / (n * n * n), (flat / (n * n)) % n, (flat / n) % n, flat % n];
                let old = ix[slot];
                for new in 0..n {
                    let w = &o[new][old];
                    if w.is_zero() {
                        continue;
                    }
                    ix[slot] = new;
                    next[idx4(n, ix[0], ix[1], ix[2], ix[3])] += v * w;
                }
            }
            cur = next;
        }
        CurvatureTensor { n, r: cur }
    }
}

/// `∂_a Γ^k_{ij}` at the centre of a normal chart, indexed `[a][i][j][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChristoffelJet {
    n: usize,
    d: Vec<Rational>,
}

impl ChristoffelJet {
    pub fn get(&self, a: usize, i: usize, j: usize, k: usize) -> &Rational {
        &self.d[idx4(self.n, a, i, j, k)]
    }
}

/// `∂_a Γ^k_{ij} = (R_{iajk} + R_{jaik}) / 3`.
pub fn dgamma_from_r(r: &CurvatureTensor) -> ChristoffelJet {
    let n = r.n;
    let third = rat(1, 3);
    let mut d = vec![Rational::zero(); n.pow(4)];
    for a in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    d[idx4(n, a, i, j, k)] = (r.get(i, a, j, k) + r.get(j, a, i, k)) * &third;
                }
            }
        }
    }
    ChristoffelJet { n, d }
}

fn real(v: &Rational) -> Scalar {
    Scalar::real(v.clone())
}

/// `Σ_{j,k} ∂_a Γ^k_{ij} σ_{kj}` for fixed `a`, `i`.
pub fn dgamma_sigma(g: &ChristoffelJet, a: usize, i: usize, dw: usize) -> CliffordElem {
    let n = g.n;
    let mut acc = CliffordElem::zero(n, dw);
    for j in 0..n {
        for k in 0..n {
            let c = g.get(a, i, j, k);
            if !c.is_zero() {
                acc.add_assign(&CliffordElem::sigma(n, dw, k, j).scale(&real(c)));
            }
        }
    }
    acc
}

/// `σ_{<2}(D²) = Γ^k_{ij}σ_{kj}ξ_i + ∂_iΓ^k_{ij}σ_{kj} + Γ^k_{ij}Γ^n_{im}σ_{kj}σ_{nm} + s`
/// with `Γ` replaced by its first-order jet `Γ^k_{ij}(x) = Σ_a x_a ∂_aΓ^k_{ij}`.
pub fn dirac_squared_symbol(r: &CurvatureTensor, n: usize) -> Result<ClassicalSymbol, GeometryError> {
    dirac_squared_symbol_with_scalar(r, n, &r.scalar_curvature())
}

/// [`dirac_squared_symbol`] with an explicit constant in place of `s`.
pub fn dirac_squared_symbol_with_scalar(
    r: &CurvatureTensor,
    n: usize,
    s: &Rational,
) -> Result<ClassicalSymbol, GeometryError> {
    if r.n != n {
        return Err(GeometryError::Dimension(format!("tensor has n = {}, requested {n}", r.n)));
    }
    if n > 4 || n % 2 == 1 {
        // Higher dimensions need curvature-derivative jets that this builder omits.
        return Err(GeometryError::Unsupported(n));
    }
    let dw = 1;
    let g = dgamma_from_r(r);
    // ω_i(x) = Σ_a x_a · (Σ_{jk} ∂_aΓ^k_{ij} σ_{kj})
    let omega: Vec<Vec<CliffordElem>> = (0..n)
        .map(|i| (0..n).map(|a| dgamma_sigma(&g, a, i, dw)).collect())
        .collect();
    let unit = crate::symbols::unit;
    let mut first = HomSymbol::zero(n, dw, 1);
    let mut zeroth = HomSymbol::zero(n, dw, 0);
    for i in 0..n {
        for a in 0..n {
            first.add_assign(&HomSymbol::term(n, &unit(i), &unit(a), 0, omega[i][a].clone()));
        }
        // ∂_i Γ^k_{ij} σ_{kj}
        zeroth.add_assign(&HomSymbol::term(n, &[], &[], 0, omega[i][i].clone()));
        for a in 0..n {
            for b in 0..n {
                let mut x = vec![0u8; n];
                x[a] += 1;
                x[b] += 1;
                zeroth.add_assign(&HomSymbol::term(n, &[], &x, 0, omega[i][a].mul(&omega[i][b])));
            }
        }
    }
    zeroth.add_assign(&HomSymbol::term(n, &[], &[], 0, CliffordElem::scalar(n, dw, real(s))));
    Ok(ClassicalSymbol::from_components(n, dw, [first, zeroth]).with_order(1))
}

/// A connection `∂_i + A_i(x)` with `A_i(x) = Σ_a A_lin[i][a] x_a` on a flat
/// bundle of rank `d_W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeField {
    n: usize,
    dw: usize,
    a_lin: Vec<Vec<MatrixW>>,
}

impl GaugeField {
    pub fn new(n: usize, a_lin: Vec<Vec<MatrixW>>) -> Result<Self, GeometryError> {
        if a_lin.len() != n || a_lin.iter().any(|row| row.len() != n) {
            return Err(GeometryError::Dimension(format!("A_lin must be {n}x{n}")));
        }
        let dw = a_lin[0][0].dim();
        if a_lin.iter().flatten().any(|m| m.dim() != dw) {
            return Err(GeometryError::Dimension("mixed fibre dimensions in A_lin".into()));
        }
        Ok(GaugeField { n, dw, a_lin })
    }

    /// The gauge `A_j(x) = ½ Σ_i F_{ij} x_i`, whose curvature at 0 is `F`.
    pub fn from_curvature(f: &[Vec<MatrixW>]) -> Result<Self, GeometryError> {
        let n = f.len();
        for i in 0..n {
            if f[i].len() != n {
                return Err(GeometryError::Dimension(format!("F must be {n}x{n}")));
            }
            for j in 0..n {
                if f[i][j] != f[j][i].neg() {
                    return Err(GeometryError::Dimension(format!("F is not antisymmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let half = Scalar::ratio(1, 2);
        let a_lin = (0..n)
            .map(|j| (0..n).map(|i| f[i][j].scale(&half)).collect())
            .collect();
        GaugeField::new(n, a_lin)
    }

    pub fn random(n: usize, dw: usize, rng: &mut impl Rng) -> Self {
        let mut entry = || Scalar::new(rat(rng.gen_range(-2..=2), 1), rat(rng.gen_range(-2..=2), 1));
        let a_lin = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        MatrixW::from_rows((0..dw).map(|_| (0..dw).map(|_| entry()).collect()).collect())
                            .expect("square")
                    })
                    .collect()
            })
            .collect();
        GaugeField { n, dw, a_lin }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dw(&self) -> usize {
        self.dw
    }

    pub fn a_lin(&self) -> &[Vec<MatrixW>] {
        &self.a_lin
    }

    /// `F_{ij}(0) = ∂_iA_j − ∂_jA_i`.
    pub fn curvature(&self) -> Vec<Vec<MatrixW>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.a_lin[j][i].sub(&self.a_lin[i][j])).collect())
            .collect()
    }

    /// Rotated field `A'_i(x) = O_{ij} A_j(Oᵀx)`.
    pub fn rotate(&self, o: &[Vec<Rational>]) -> GaugeField {
        let n = self.n;
        let mut a_lin = vec![vec![MatrixW::zero(self.dw); n]; n];
        for (i, row) in a_lin.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                for j in 0..n {
                    for b in 0..n {
                        let w = &o[i][j] * &o[c][b];
                        if !w.is_zero() {
                            slot.add_assign(&self.a_lin[j][b].scale(&Scalar::real(w)));
                        }
                    }
                }
            }
        }
        GaugeField { n, dw: self.dw, a_lin }
    }

    /// Block-diagonal sum on `W_1 ⊕ W_2`.
    pub fn direct_sum(&self, other: &GaugeField) -> GaugeField {
        let a_lin = (0..self.n)
            .map(|i| (0..self.n).map(|a| self.a_lin[i][a].direct_sum(&other.a_lin[i][a])).collect())
            .collect();
        GaugeField {
            n: self.n,
            dw: self.dw + other.dw,
            a_lin,
        }
    }

    fn a_symbol(&self, i: usize) -> HomSymbol {
        let n = self.n;
        let mut h = HomSymbol::zero(n, self.dw, 0);
        for a in 0..n {
            h.add_assign(&HomSymbol::term(n, &[], &crate::symbols::unit(a), 0, CliffordElem::from_matrix(n, self.a_lin[i][a].clone())));
        }
        h
    }
}

/// `σ(D_W) = Σ_i γ_i (iξ_i + A_i(x))`.
pub fn twisted_dirac_symbol(g: &GaugeField) -> ClassicalSymbol {
    let n = g.n;
    let dw = g.dw;
    let mut first = HomSymbol::zero(n, dw, 1);
    let mut zeroth = HomSymbol::zero(n, dw, 0);
    for i in 0..n {
        let gi = CliffordElem::gamma(n, dw, i);
        first.add_assign(&HomSymbol::term(n, &crate::symbols::unit(i), &[], 0, gi.scale(&Scalar::i())));
        zeroth.add_assign(&g.a_symbol(i).left_mul(&gi));
    }
    ClassicalSymbol::from_components(n, dw, [first, zeroth])
}

/// `σ(Δ^E) − |ξ|² = −2i Σ ξ_i A_i − Σ (A_i² + ∂_iA_i)`.
pub fn connection_laplacian_lower(g: &GaugeField) -> ClassicalSymbol {
    let n = g.n;
    let dw = g.dw;
    let mut first = HomSymbol::zero(n, dw, 1);
    let mut zeroth = HomSymbol::zero(n, dw, 0);
    let minus_2i = Scalar::new(rat(0, 1), rat(-2, 1));
    for i in 0..n {
        let ai = g.a_symbol(i);
        first.add_assign(&ai.times_xi(i).scale(&minus_2i));
        zeroth.add_assign(&ai.mul(&ai).neg());
        zeroth.add_assign(&HomSymbol::term(n, &[], &[], 0, CliffordElem::from_matrix(n, g.a_lin[i][i].neg())));
    }
    ClassicalSymbol::from_components(n, dw, [first, zeroth]).with_order(1)
}

/// `R^E(x) = Σ_{i<j} γ_iγ_j F_{ij}(x)` with `F_{ij}(x) = ∂_iA_j − ∂_jA_i + [A_i(x), A_j(x)]`.
pub fn twisted_curvature_term(g: &GaugeField) -> ClassicalSymbol {
    let n = g.n;
    let dw = g.dw;
    let f0 = g.curvature();
    let mut h = HomSymbol::zero(n, dw, 0);
    for i in 0..n {
        for j in (i + 1)..n {
            let gij = CliffordElem::gamma(n, dw, i).mul(&CliffordElem::gamma(n, dw, j));
            let (ai, aj) = (g.a_symbol(i), g.a_symbol(j));
            let mut fij = ai.mul(&aj).sub(&aj.mul(&ai));
            fij.add_assign(&HomSymbol::term(n, &[], &[], 0, CliffordElem::from_matrix(n, f0[i][j].clone())));
            h.add_assign(&fij.left_mul(&gij));
        }
    }
    ClassicalSymbol::from_components(n, dw, [h])
}

/// `σ(D_W²) − |ξ|²` for the flat metric.
pub fn twisted_flat_symbol(g: &GaugeField) -> ClassicalSymbol {
    connection_laplacian_lower(g).add(&twisted_curvature_term(g))
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if cur.len() == n {
            let mut inv = 0;
            for a in 0..n {
                for b in (a + 1)..n {
                    if cur[a] > cur[b] {
                        inv += 1;
                    }
                }
            }
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Signed permutations of `0..n`.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    permutations(n)
}

/// `(1/4) Σ_{a,b} Σ_τ sgn(τ) R_{abτ(1)τ(2)} R_{baτ(3)τ(4)}` in dimension 4.
pub fn pontryagin_density(r: &CurvatureTensor) -> Result<Rational, GeometryError> {
    if r.n != 4 {
        return Err(GeometryError::Dimension(format!("Pontryagin density needs n = 4, got {}", r.n)));
    }
    let mut acc = Rational::zero();
    for (tau, sign) in permutations(4) {
        for a in 0..4 {
            for b in 0..4 {
                let v = r.get(a, b, tau[0], tau[1]) * r.get(b, a, tau[2], tau[3]);
                acc += v * rat(sign, 1);
            }
        }
    }
    Ok(acc * rat(1, 4))
}

/// `(1/2^p) Σ_τ sgn(τ) tr(F_{τ(1)τ(2)} ⋯ F_{τ(n−1)τ(n)})`.
pub fn chern_density(f: &[Vec<MatrixW>], p: usize) -> Result<Scalar, GeometryError> {
    let n = f.len();
    if n != 2 * p {
        return Err(GeometryError::Dimension(format!("Chern density of degree {p} needs n = {}, got {n}", 2 * p)));
    }
    let mut acc = Scalar::zero();
    for (tau, sign) in permutations(n) {
        let mut m = f[tau[0]][tau[1]].clone();
        for k in 1..p {
            m = m.mul(&f[tau[2 * k]][tau[2 * k + 1]]);
        }
        acc += &m.trace().scale(&rat(sign, 1));
    }
    Ok(acc.scale(&rat(1, 1 << p)))
}

/// Result of an index-density computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub method: Method,
    pub sres_log: PiScalar,
    pub index_density: PiScalar,
    pub comparator: PiScalar,
    pub holds: bool,
}

impl fmt::Display for IndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] sres_log = {}, index = {}, comparator = {}, {}",
            self.method,
            self.sres_log,
            self.index_density,
            self.comparator,
            if self.holds { "PASS" } else { "FAIL" }
        )
    }
}

/// Expected `sres(log D²)` density: `tr(R∧R)/(48π²)`.
pub fn dirac4_comparator(r: &CurvatureTensor) -> Result<PiScalar, GeometryError> {
    Ok(PiScalar::new(Scalar::real(pontryagin_density(r)? * rat(1, 48)), -2))
}

/// `sres(log D²)` and `−sres/2` for the spin Dirac operator in dimension 4,
/// checked against [`dirac4_comparator`].
pub fn index_pure_dirac4(r: &CurvatureTensor, method: Method) -> Result<IndexReport, GeometryError> {
    if r.n != 4 {
        return Err(GeometryError::Unsupported(r.n));
    }
    let q = dirac_squared_symbol(r, 4)?;
    let sres = res_log(&q, 4, method, TraceKind::Str)?;
    let comparator = dirac4_comparator(r)?;
    Ok(IndexReport {
        method,
        index_density: sres.scale(&Scalar::ratio(-1, 2)),
        holds: sres == comparator,
        sres_log: sres,
        comparator,
    })
}

/// Expected flat twisted density `−2 i^p/((2π)^p p!) · chern_density(F, p)`.
pub fn flat_comparator(g: &GaugeField) -> Result<PiScalar, GeometryError> {
    let p = g.n / 2;
    let ch = chern_density(&g.curvature(), p)?;
    let c = Scalar::i_pow(p as i64).scale(&(rat(-2, 1) / (rat(1 << p, 1) * crate::algebra::factorial(p as u64))));
    Ok(PiScalar::new(&c * &ch, -(p as i32)))
}

/// `sres(log D_W²)` for a twisted Dirac operator on flat space.
pub fn index_flat_twisted(g: &GaugeField, method: Method) -> Result<IndexReport, GeometryError> {
    if !(g.n == 2 || g.n == 4) {
        return Err(GeometryError::Unsupported(g.n));
    }
    let q = twisted_flat_symbol(g);
    let sres = res_log(&q, g.n, method, TraceKind::Str)?;
    let comparator = flat_comparator(g)?;
    Ok(IndexReport {
        method,
        index_density: sres.scale(&Scalar::ratio(-1, 2)),
        holds: sres == comparator,
        sres_log: sres,
        comparator,
    })
}

/// `sres(((Δ^E)^{-1} ⋆ R^E)^{⋆k})` for `k = 1..=p`.
pub fn flat_power_residues(g: &GaugeField) -> Result<Vec<PiScalar>, GeometryError> {
    let n = g.n;
    let floor = -(n as i32);
    let lap = ClassicalSymbol::xi_squared(n, g.dw).add(&connection_laplacian_lower(g)).with_order(2);
    let inv = parametrix(&lap, floor)?;
    let base = star(&inv, &twisted_curvature_term(g), floor)?;
    let mut power = base.clone();
    let mut out = Vec::new();
    for k in 1..=(n / 2) {
        if k > 1 {
            power = star(&power, &base, floor)?;
        }
        out.push(residue_density(&power, TraceKind::Str)?);
    }
    Ok(out)
}

/// `|ξ|^{−n} ∂_aΓ^k_{ij} ∂_aΓ^n_{im} σ_{kj}σ_{nm}` as a symbol of degree `−n`.
pub fn dgamma_square_symbol(r: &CurvatureTensor) -> ClassicalSymbol {
    let n = r.n;
    let g = dgamma_from_r(r);
    let mut c = CliffordElem::zero(n, 1);
    for a in 0..n {
        for i in 0..n {
            let w = dgamma_sigma(&g, a, i, 1);
            c.add_assign(&w.mul(&w));
        }
    }
    ClassicalSymbol::from_components(n, 1, [HomSymbol::term(n, &[], &[], -(n as i16) / 2, c)])
}

/// `sres(|ξ|^{−4} ∂_aΓ^k_{ij} ∂_aΓ^n_{im} σ_{kj}σ_{nm})`.
pub fn sres_dgamma_square(r: &CurvatureTensor) -> Result<PiScalar, GeometryError> {
    Ok(residue_density(&dgamma_square_symbol(r), TraceKind::Str)?)
}

/// `ξ_aξ_b |ξ|^{−6} ∂_aΓ^k_{ij} ∂_bΓ^n_{im} σ_{kj}σ_{nm}`, dimension 4 only.
pub fn dgamma_cross_symbol(r: &CurvatureTensor) -> Result<ClassicalSymbol, GeometryError> {
    let n = r.n;
    if n != 4 {
        return Err(GeometryError::Unsupported(n));
    }
    let g = dgamma_from_r(r);
    let mut h = HomSymbol::zero(n, 1, -4);
    for a in 0..n {
        for b in 0..n {
            let mut c = CliffordElem::zero(n, 1);
            for i in 0..n {
                c.add_assign(&dgamma_sigma(&g, a, i, 1).mul(&dgamma_sigma(&g, b, i, 1)));
            }
            let mut xi = vec![0u8; n];
            xi[a] += 1;
            xi[b] += 1;
            h.add_assign(&HomSymbol::term(n, &xi, &[], -3, c));
        }
    }
    Ok(ClassicalSymbol::from_components(n, 1, [h]))
}

/// `sres(ξ_aξ_b |ξ|^{−6} ∂_aΓ^k_{ij} ∂_bΓ^n_{im} σ_{kj}σ_{nm})`.
pub fn sres_dgamma_cross(r: &CurvatureTensor) -> Result<PiScalar, GeometryError> {
    Ok(residue_density(&dgamma_cross_symbol(r)?, TraceKind::Str)?)
}

/// The two contributions of the reduced dimension-4 formula, with their
/// weights applied: `(−½ sres(Δ_x σ_{<2} |ξ|^{−4}), (1/6) sres(L_x² σ_{<2} |ξ|^{−6}))`.
pub fn reduced_dim4_terms(r: &CurvatureTensor) -> Result<(PiScalar, PiScalar), GeometryError> {
    if r.n != 4 {
        return Err(GeometryError::Unsupported(r.n));
    }
    let q = dirac_squared_symbol(r, 4)?;
    let lap = laplacian_part(&q);
    let l2 = transport_part(&transport_part(&q));
    let t_delta = residue_density(&lap.times_xi_norm(-2), TraceKind::Str)?.scale(&Scalar::ratio(-1, 2));
    let t_l2 = residue_density(&l2.times_xi_norm(-3), TraceKind::Str)?.scale(&Scalar::ratio(1, 6));
    Ok((t_delta, t_l2))
}

/// `sres(log D²)` by the reduced two-term dimension-4 formula.
pub fn via_nct_reduced_dim4(r: &CurvatureTensor) -> Result<PiScalar, GeometryError> {
    let (a, b) = reduced_dim4_terms(r)?;
    Ok(a.checked_add(&b).expect("both terms carry pi^-2"))
}

/// `Δ_x = −Σ ∂²_{x_a}` applied to every component.
fn laplacian_part(t: &ClassicalSymbol) -> ClassicalSymbol {
    let mut out = ClassicalSymbol::zero(t.n(), t.dw(), t.order(), t.floor());
    for (_, h) in t.components() {
        let mut d = HomSymbol::zero(t.n(), t.dw(), h.degree());
        for a in 0..t.n() {
            d.add_assign(&h.d_x(a).d_x(a).neg());
        }
        out.add_component(d);
    }
    out
}

/// `L_x = −2i Σ ξ_a ∂_{x_a}` applied to every component.
fn transport_part(t: &ClassicalSymbol) -> ClassicalSymbol {
    let minus_2i = Scalar::new(rat(0, 1), rat(-2, 1));
    let mut out = ClassicalSymbol::zero(t.n(), t.dw(), t.order() + 1, t.floor());
    for (_, h) in t.components() {
        let mut d = HomSymbol::zero(t.n(), t.dw(), h.degree() + 1);
        for a in 0..t.n() {
            d.add_assign(&h.d_x(a).times_xi(a));
        }
        out.add_component(d.scale(&minus_2i));
    }
    out
}

/// Rational orthogonal matrix `(I − K)(I + K)^{−1}` for antisymmetric `K`.
pub fn cayley_rotation(k: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = k.len();
    let to_m = |sign: i64| {
        MatrixW::from_rows(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let id = if i == j { rat(1, 1) } else { rat(0, 1) };
                            Scalar::real(id + &k[i][j] * rat(sign, 1))
                        })
                        .collect()
                })
                .collect(),
        )
        .expect("square")
    };
    let o = to_m(-1).mul(&to_m(1).inverse().expect("I + K is invertible for antisymmetric K"));
    o.rows().into_iter().map(|r| r.into_iter().map(|s| s.re).collect()).collect()
}

/// A random rational rotation (Cayley transform of a random antisymmetric matrix).
pub fn random_rotation(n: usize, rng: &mut impl Rng) -> Vec<Vec<Rational>> {
    let mut k = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            k[i][j] = v.clone();
            k[j][i] = -v;
        }
    }
    cayley_rotation(&k)
}

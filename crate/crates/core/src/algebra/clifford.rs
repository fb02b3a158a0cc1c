//! The Clifford algebra `C(R^n) ⊗ End(W)`.
//!
//! Generators are indexed from 0 and satisfy `γ_i γ_j + γ_j γ_i = -2 δ_ij`.
//! A basis blade is stored as a bitmask of its (increasing) generator indices.

use std::collections::BTreeMap;
use std::fmt;

use super::matrix::MatrixW;
use super::scalar::{rat, Scalar};
use super::AlgebraError;

/// Square of every generator.
pub const GAMMA_SQUARE: i64 = -1;

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

/// Product of two basis blades: returns the resulting blade and its sign.
pub fn blade_product(s: u32, t: u32) -> (u32, bool) {
    let mut swaps = 0u32;
    let mut rest = t;
    while rest != 0 {
        let b = rest.trailing_zeros();
        swaps += (s >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    let contractions = (s & t).count_ones();
    let mut negative = swaps % 2 == 1;
    if GAMMA_SQUARE < 0 && contractions % 2 == 1 {
        negative = !negative;
    }
    (s ^ t, negative)
}

/// Element of `C(R^n) ⊗ End(W)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordElem {
    n: usize,
    dw: usize,
    coeffs: BTreeMap<u32, MatrixW>,
}

impl CliffordElem {
    pub fn zero(n: usize, dw: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        CliffordElem {
            n,
            dw,
            coeffs: BTreeMap::new(),
        }
    }

    /// `M ⊗ 1`.
    pub fn from_matrix(n: usize, m: MatrixW) -> Self {
        let mut e = Self::zero(n, m.dim());
        e.insert(0, m);
        e
    }

    /// `s ⊗ id_W`.
    pub fn scalar(n: usize, dw: usize, s: Scalar) -> Self {
        Self::from_matrix(n, MatrixW::scalar(dw, s))
    }

    pub fn one(n: usize, dw: usize) -> Self {
        Self::scalar(n, dw, Scalar::one())
    }

    /// `γ_i ⊗ id_W`.
    pub fn gamma(n: usize, dw: usize, i: usize) -> Self {
        assert!(i < n, "generator index {i} out of range for n = {n}");
        let mut e = Self::zero(n, dw);
        e.insert(1 << i, MatrixW::identity(dw));
        e
    }

    /// The ordered product `γ_{i_1} ⋯ γ_{i_k} ⊗ M`; indices may repeat or be unsorted.
    pub fn word(n: usize, indices: &[usize], m: MatrixW) -> Self {
        let dw = m.dim();
        let mut acc = Self::from_matrix(n, m);
        for &i in indices {
            acc = acc.mul(&Self::gamma(n, dw, i));
        }
        acc
    }

    /// `σ_ij = (γ_i γ_j − γ_j γ_i)/8`.
    pub fn sigma(n: usize, dw: usize, i: usize, j: usize) -> Self {
        let gi = Self::gamma(n, dw, i);
        let gj = Self::gamma(n, dw, j);
        gi.commutator(&gj).scale(&Scalar::real(rat(1, 8)))
    }

    /// Stores `m` on `blade`, replacing any previous value.
    pub fn insert(&mut self, blade: u32, m: MatrixW) {
        assert_eq!(m.dim(), self.dw, "fibre dimension mismatch");
        assert!(blade >> self.n == 0, "blade outside dimension");
        if m.is_zero() {
            self.coeffs.remove(&blade);
        } else {
            self.coeffs.insert(blade, m);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dw(&self) -> usize {
        self.dw
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, blade: u32) -> Option<&MatrixW> {
        self.coeffs.get(&blade)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &MatrixW)> {
        self.coeffs.iter()
    }

    /// True when the element is `s ⊗ id_W` for a scalar `s`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.coeffs.is_empty() {
            return Some(Scalar::zero());
        }
        if self.coeffs.len() != 1 {
            return None;
        }
        let m = self.coeffs.get(&0)?;
        let s = m.get(0, 0).clone();
        (MatrixW::scalar(self.dw, s.clone()) == *m).then_some(s)
    }

    fn same_shape(&self, rhs: &CliffordElem) -> Result<(), AlgebraError> {
        if self.n != rhs.n || self.dw != rhs.dw {
            return Err(AlgebraError::DimensionMismatch(format!(
                "(n={}, d_W={}) vs (n={}, d_W={})",
                self.n, self.dw, rhs.n, rhs.dw
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &CliffordElem) -> Result<CliffordElem, AlgebraError> {
        self.same_shape(rhs)?;
        let mut out = self.clone();
        out.add_assign(rhs);
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &CliffordElem) -> Result<CliffordElem, AlgebraError> {
        self.same_shape(rhs)?;
        let mut acc: BTreeMap<u32, MatrixW> = BTreeMap::new();
        for (&s, a) in &self.coeffs {
            for (&t, b) in &rhs.coeffs {
                let (blade, negative) = blade_product(s, t);
                let mut m = a.mul(b);
                if negative {
                    m = m.neg();
                }
                match acc.get_mut(&blade) {
                    Some(x) => x.add_assign(&m),
                    None => {
                        acc.insert(blade, m);
                    }
                }
            }
        }
        acc.retain(|_, m| !m.is_zero());
        Ok(CliffordElem {
            n: self.n,
            dw: self.dw,
            coeffs: acc,
        })
    }

    /// Sum; panics on shape mismatch.
    pub fn add(&self, rhs: &CliffordElem) -> CliffordElem {
        self.try_add(rhs).expect("Clifford shape mismatch")
    }

    pub fn sub(&self, rhs: &CliffordElem) -> CliffordElem {
        self.add(&rhs.neg())
    }

    /// Product; panics on shape mismatch.
    pub fn mul(&self, rhs: &CliffordElem) -> CliffordElem {
        self.try_mul(rhs).expect("Clifford shape mismatch")
    }

    pub fn add_assign(&mut self, rhs: &CliffordElem) {
        assert!(self.n == rhs.n && self.dw == rhs.dw, "Clifford shape mismatch");
        for (&blade, m) in &rhs.coeffs {
            let remove = match self.coeffs.get_mut(&blade) {
                Some(x) => {
                    x.add_assign(m);
                    x.is_zero()
                }
                None => {
                    self.coeffs.insert(blade, m.clone());
                    false
                }
            };
            if remove {
                self.coeffs.remove(&blade);
            }
        }
    }

    pub fn neg(&self) -> CliffordElem {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> CliffordElem {
        if s.is_zero() {
            return Self::zero(self.n, self.dw);
        }
        CliffordElem {
            n: self.n,
            dw: self.dw,
            coeffs: self.coeffs.iter().map(|(&b, m)| (b, m.scale(s))).collect(),
        }
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, rhs: &CliffordElem) -> CliffordElem {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Applies `f` to every End(W) coefficient (used for basis changes on W).
    pub fn map_matrices(&self, f: impl Fn(&MatrixW) -> MatrixW) -> CliffordElem {
        let mut out = Self::zero(self.n, self.dw);
        for (&b, m) in &self.coeffs {
            out.insert(b, f(m));
        }
        out
    }

    /// Trace in the spinor representation tensored with `tr_W`.
    pub fn cl_tr(&self) -> Scalar {
        let p = (self.n / 2) as u32;
        match self.coeffs.get(&0) {
            Some(m) => m.trace().scale(&rat(1 << p, 1)),
            None => Scalar::zero(),
        }
    }

    /// Supertrace with grading `i^p γ_1 ⋯ γ_n`: only the top blade survives,
    /// contributing `(−2i)^p tr(M)`.
    pub fn cl_str(&self) -> Scalar {
        let p = (self.n / 2) as u32;
        let top = (1u32 << self.n) - 1;
        match self.coeffs.get(&top) {
            Some(m) => &Scalar::new(rat(0, 1), rat(-2, 1)).pow(p) * &m.trace(),
            None => Scalar::zero(),
        }
    }
}

impl fmt::Display for CliffordElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&b, m)| {
                let idx: Vec<String> = (0..self.n)
                    .filter(|i| b >> i & 1 == 1)
                    .map(|i| (i + 1).to_string())
                    .collect();
                let coeff = if self.dw == 1 {
                    format!("({})", m.get(0, 0))
                } else {
                    m.to_string()
                };
                if idx.is_empty() {
                    coeff
                } else {
                    format!("{coeff}·g{}", idx.join(""))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn c(re: i64, im: i64) -> Scalar {
        Scalar::new(rat(re, 1), rat(im, 1))
    }

    /// Four explicit 4×4 matrices with `g_i g_j + g_j g_i = -2 δ_ij`.
    fn gamma_matrices() -> Vec<MatrixW> {
        let z = || c(0, 0);
        let pauli = [
            [[z(), c(1, 0)], [c(1, 0), z()]],
            [[z(), c(0, -1)], [c(0, 1), z()]],
            [[c(1, 0), z()], [z(), c(-1, 0)]],
        ];
        let mut out = Vec::new();
        // Euclidean hermitian gammas squaring to +1, then multiplied by i.
        for sig in &pauli {
            let mut rows = vec![vec![z(); 4]; 4];
            for a in 0..2 {
                for b in 0..2 {
                    rows[a][2 + b] = &c(0, -1) * &sig[a][b];
                    rows[2 + a][b] = &c(0, 1) * &sig[a][b];
                }
            }
            out.push(MatrixW::from_rows(rows).unwrap().scale(&c(0, 1)));
        }
        let mut rows = vec![vec![z(); 4]; 4];
        for a in 0..2 {
            rows[a][2 + a] = c(1, 0);
            rows[2 + a][a] = c(1, 0);
        }
        out.push(MatrixW::from_rows(rows).unwrap().scale(&c(0, 1)));
        out
    }

    fn represent(e: &CliffordElem, g: &[MatrixW]) -> MatrixW {
        let mut acc = MatrixW::zero(4);
        for (&b, m) in e.iter() {
            let mut w = MatrixW::scalar(4, m.get(0, 0).clone());
            for (i, gi) in g.iter().enumerate() {
                if b >> i & 1 == 1 {
                    w = w.mul(gi);
                }
            }
            acc.add_assign(&w);
        }
        acc
    }

    fn parity_part(e: &CliffordElem, parity: u32) -> CliffordElem {
        let mut out = CliffordElem::zero(e.n(), e.dw());
        for (&b, m) in e.iter() {
            if b.count_ones() % 2 == parity {
                out.insert(b, m.clone());
            }
        }
        out
    }

    fn arb_elem(n: usize, dw: usize) -> impl Strategy<Value = CliffordElem> {
        let size = (1usize << n) * dw * dw;
        proptest::collection::vec((-3i64..=3, -3i64..=3), size).prop_map(move |vals| {
            let mut e = CliffordElem::zero(n, dw);
            for blade in 0..(1u32 << n) {
                let base = blade as usize * dw * dw;
                let rows = (0..dw)
                    .map(|i| {
                        (0..dw)
                            .map(|j| {
                                let (re, im) = vals[base + i * dw + j];
                                c(re, im)
                            })
                            .collect()
                    })
                    .collect();
                e.insert(blade, MatrixW::from_rows(rows).unwrap());
            }
            e
        })
    }

    #[test]
    fn oracle_matrices_satisfy_relations() {
        let g = gamma_matrices();
        for i in 0..4 {
            for j in 0..4 {
                let anti = g[i].mul(&g[j]).add(&g[j].mul(&g[i]));
                let expect = if i == j { -2 } else { 0 };
                assert_eq!(anti, MatrixW::scalar(4, s(expect)));
            }
        }
    }

    #[test]
    fn generator_square_and_sigma() {
        let n = 4;
        let g1 = CliffordElem::gamma(n, 1, 0);
        let g2 = CliffordElem::gamma(n, 1, 1);
        assert_eq!(g1.mul(&g1), CliffordElem::scalar(n, 1, s(GAMMA_SQUARE)));
        let sigma = CliffordElem::sigma(n, 1, 0, 1);
        assert_eq!(g1.mul(&g2), sigma.scale(&s(4)));
        assert!(CliffordElem::sigma(n, 1, 2, 2).is_zero());
    }

    #[test]
    fn overlapping_bivectors() {
        let n = 4;
        let id = MatrixW::identity(1);
        let g12 = CliffordElem::word(n, &[0, 1], id.clone());
        let g23 = CliffordElem::word(n, &[1, 2], id.clone());
        let g13 = CliffordElem::word(n, &[0, 2], id);
        let prod = g12.mul(&g23);
        assert_eq!(prod, g13.scale(&s(GAMMA_SQUARE)));
        let g = gamma_matrices();
        assert_eq!(represent(&prod, &g), represent(&g13, &g).scale(&s(-1)));
    }

    #[test]
    fn supertrace_examples() {
        let m = MatrixW::from_rows(vec![vec![s(2), s(1)], vec![s(5), s(3)]]).unwrap();
        let top = CliffordElem::word(4, &[0, 1, 2, 3], m.clone());
        assert_eq!(top.cl_str(), &s(-4) * &m.trace());
        let low = CliffordElem::word(4, &[0, 1], m);
        assert_eq!(low.cl_str(), Scalar::zero());
        let ss = CliffordElem::sigma(4, 1, 0, 1).mul(&CliffordElem::sigma(4, 1, 2, 3));
        assert_eq!(ss.cl_str(), Scalar::ratio(-1, 4));
    }

    #[test]
    fn traces_match_representation() {
        let g = gamma_matrices();
        let grading = g[0].mul(&g[1]).mul(&g[2]).mul(&g[3]).scale(&s(-1));
        assert_eq!(grading.mul(&grading), MatrixW::identity(4));
        for blade in 0..16u32 {
            let e = {
                let mut e = CliffordElem::zero(4, 1);
                e.insert(blade, MatrixW::scalar(1, c(2, 1)));
                e
            };
            let rep = represent(&e, &g);
            assert_eq!(rep.trace(), e.cl_tr(), "tr blade {blade}");
            assert_eq!(grading.mul(&rep).trace(), e.cl_str(), "str blade {blade}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn product_matches_representation(a in arb_elem(4, 1), b in arb_elem(4, 1)) {
            let g = gamma_matrices();
            prop_assert_eq!(represent(&a.mul(&b), &g), represent(&a, &g).mul(&represent(&b, &g)));
        }

        #[test]
        fn traces_are_cyclic(a in arb_elem(4, 2), b in arb_elem(4, 2)) {
            prop_assert_eq!(a.mul(&b).cl_tr(), b.mul(&a).cl_tr());
            let (ae, ao) = (parity_part(&a, 0), parity_part(&a, 1));
            let (be, bo) = (parity_part(&b, 0), parity_part(&b, 1));
            prop_assert_eq!(ae.mul(&b).cl_str(), b.mul(&ae).cl_str());
            prop_assert_eq!(a.mul(&be).cl_str(), be.mul(&a).cl_str());
            prop_assert_eq!(ao.mul(&bo).cl_str(), bo.mul(&ao).cl_str().scale(&rat(-1, 1)));
        }

        #[test]
        fn product_is_associative(a in arb_elem(2, 2), b in arb_elem(2, 2), d in arb_elem(2, 2)) {
            prop_assert_eq!(a.mul(&b).mul(&d), a.mul(&b.mul(&d)));
        }
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = CliffordElem::one(2, 1);
        let b = CliffordElem::one(4, 1);
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_add(&CliffordElem::one(2, 2)).is_err());
    }
}

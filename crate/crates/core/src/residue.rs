//! Cosphere integration and residue densities at the chart centre.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{rat, PiScalar, Rational, Scalar};
use crate::symbols::ClassicalSymbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error("dimension must be even and positive, got {0}")]
    OddDimension(usize),
    #[error("degree {degree} component is not known (symbol floor {floor})")]
    MissingComponent { degree: i32, floor: i32 },
    #[error("x-jet of the symbol is too short for the degree {0} component at the origin")]
    ShortJet(i32),
}

/// Which fibre trace to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceKind {
    Tr,
    Str,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::Tr => "tr",
            TraceKind::Str => "str",
        })
    }
}

/// A monomial `ξ^alpha` to be integrated over `S^{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentKey {
    pub n: usize,
    pub alpha: Vec<u32>,
}

impl MomentKey {
    pub fn moment(&self) -> PiScalar {
        sphere_moment(self.n, &self.alpha)
    }
}

fn double_factorial(k: i64) -> BigInt {
    let mut acc = BigInt::from(1);
    let mut j = k;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    acc
}

/// `∫_{S^{n−1}} ξ^α dξ` for even `n = 2p`, as a rational multiple of `π^p`.
pub fn sphere_moment(n: usize, alpha: &[u32]) -> PiScalar {
    assert!(n >= 2 && n % 2 == 0, "sphere moments need even n");
    if alpha.iter().any(|a| a % 2 == 1) {
        return PiScalar::zero();
    }
    let p = (n / 2) as i64;
    // vol(S^{n-1}) = 2 π^p / (p-1)!
    let mut value = Rational::from_integer(BigInt::from(2)) / crate::algebra::factorial((p - 1) as u64);
    for &a in alpha {
        value *= Rational::from_integer(double_factorial(a as i64 - 1));
    }
    let half: i64 = alpha.iter().map(|&a| a as i64).sum::<i64>() / 2;
    for j in 0..half {
        value /= Rational::from_integer(BigInt::from(n as i64 + 2 * j));
    }
    PiScalar::new(Scalar::real(value), p as i32)
}

/// Residue density `(2π)^{−n} ∫_{|ξ|=1} trace(σ_{−n}(0, ξ)) dξ`.
pub fn residue_density(s: &ClassicalSymbol, kind: TraceKind) -> Result<PiScalar, ResidueError> {
    residue_density_with(s, kind, sphere_moment)
}

/// [`residue_density`] with an explicit moment table.
pub fn residue_density_with(
    s: &ClassicalSymbol,
    kind: TraceKind,
    moment: impl Fn(usize, &[u32]) -> PiScalar,
) -> Result<PiScalar, ResidueError> {
    let n = s.n();
    if n == 0 || n % 2 == 1 {
        return Err(ResidueError::OddDimension(n));
    }
    let target = -(n as i32);
    if s.floor() > target {
        return Err(ResidueError::MissingComponent {
            degree: target,
            floor: s.floor(),
        });
    }
    if s.jet().is_some_and(|j| j < n as i32) {
        return Err(ResidueError::ShortJet(target));
    }
    let p = (n / 2) as i32;
    let mut coeff = Scalar::zero();
    for (mono, c) in s.component(target).at_origin().terms() {
        let alpha: Vec<u32> = mono.xi[..n].iter().map(|&e| e as u32).collect();
        let m = moment(n, &alpha);
        if m.is_zero() {
            continue;
        }
        assert_eq!(m.pi_power(), p, "moment table returned the wrong power of pi");
        let tr = match kind {
            TraceKind::Tr => c.cl_tr(),
            TraceKind::Str => c.cl_str(),
        };
        coeff += &(&tr * m.coeff());
    }
    let norm = Scalar::real(rat(1, 1 << n));
    Ok(PiScalar::new(&coeff * &norm, p - n as i32))
}

//! Seeded invariant suite over the whole engine.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{factorial, rat, CliffordElem, PiScalar, Rational, Scalar};
use crate::geometry::{
    dgamma_cross_symbol, dgamma_from_r, dgamma_sigma, dgamma_square_symbol, dirac_squared_symbol,
    dirac_squared_symbol_with_scalar, flat_power_residues, index_flat_twisted, pontryagin_density,
    random_rotation, signed_permutations, CurvatureTensor, GaugeField,
};
use crate::logexpand::{log_symbol, res_log, Method};
use crate::random;
use crate::residue::{residue_density_with, sphere_moment, TraceKind};
use crate::symbols::{ClassicalSymbol, FLOOR_EXACT};

/// Sizes and switches for a selftest run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    pub tensors: usize,
    pub laplacians: usize,
    pub gauge_fields: usize,
    pub rotations: usize,
    pub cyclic_pairs: usize,
    /// Replace the sphere-moment table by a wrong one (negative control).
    pub tamper_moments: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            tensors: 10,
            laplacians: 12,
            gauge_fields: 6,
            rotations: 5,
            cyclic_pairs: 200,
            tamper_moments: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failed_names(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect()
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed {}", self.seed)?;
        for c in &self.checks {
            match &c.failure {
                None => writeln!(f, "  PASS {:<34} ({} cases)", c.name, c.cases)?,
                Some(msg) => writeln!(f, "  FAIL {:<34} ({} cases): {msg}", c.name, c.cases)?,
            }
        }
        write!(f, "{}", if self.passed() { "ALL PASS" } else { "FAILURES" })
    }
}

/// `∫_{S^{n−1}} ξ^α dξ` from `∫_{ℝ^n} ξ^α e^{−|ξ|²} dξ = ∏ Γ((α_i+1)/2)`
/// divided by the radial factor `Γ((|α|+n)/2)/2`.
pub fn gaussian_moment(n: usize, alpha: &[u32]) -> PiScalar {
    if alpha.iter().any(|a| a % 2 == 1) {
        return PiScalar::zero();
    }
    // Γ(m + ½) = (2m)! √π / (4^m m!)
    let mut num = rat(2, 1);
    let mut total = 0u64;
    for &a in alpha {
        let m = (a / 2) as u64;
        total += m;
        num *= factorial(2 * m) / (factorial(m) * Rational::from_integer(4.into()).pow(m as i32));
    }
    let p = (n / 2) as u64;
    PiScalar::new(Scalar::real(num / factorial(total + p - 1)), p as i32)
}

fn tampered_moment(n: usize, alpha: &[u32]) -> PiScalar {
    sphere_moment(n, alpha).scale(&Scalar::ratio(3, 2))
}

struct Check {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, cases: 0, failure: None }
    }

    fn case(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn error(&mut self, e: impl fmt::Display) {
        self.cases += 1;
        if self.failure.is_none() {
            self.failure = Some(format!("error: {e}"));
        }
    }

    fn done(self) -> CheckResult {
        CheckResult {
            name: self.name,
            cases: self.cases,
            failure: self.failure,
        }
    }
}

fn even_alphas(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for a in &out {
            let used: u32 = a.iter().sum();
            let mut e = 0;
            while used + e <= max_total {
                let mut b = a.clone();
                b.push(e);
                next.push(b);
                e += 2;
            }
        }
        out = next;
    }
    out
}

fn check_supertrace_words(rng: &mut ChaCha8Rng) -> CheckResult {
    let mut c = Check::new("clifford_supertrace_words");
    for n in [2usize, 4] {
        let p = (n / 2) as i64;
        let m = random::matrix(2, rng);
        let top = Scalar::new(rat(0, 1), rat(-2, 1)).pow(p as u32);
        for (tau, sign) in signed_permutations(n) {
            let w = CliffordElem::word(n, &tau, m.clone());
            let expect = (&top * &m.trace()).scale(&rat(sign, 1));
            c.case(w.cl_str() == expect, || format!("str of word {tau:?} in n = {n}"));
        }
        for blade in 0..(1u32 << n) - 1 {
            let idx: Vec<usize> = (0..n).filter(|i| blade >> i & 1 == 1).collect();
            let w = CliffordElem::word(n, &idx, m.clone());
            c.case(w.cl_str().is_zero(), || format!("str of short word {idx:?} in n = {n}"));
        }
    }
    c.done()
}

fn check_sigma_products() -> CheckResult {
    let mut c = Check::new("clifford_sigma_products");
    for n in [2usize, 4] {
        let p = n / 2;
        for (tau, sign) in signed_permutations(n) {
            let mut prod = CliffordElem::one(n, 1);
            for k in 0..p {
                prod = prod.mul(&CliffordElem::sigma(n, 1, tau[2 * k], tau[2 * k + 1]));
            }
            let expect = Scalar::new(rat(0, 1), rat(-1, 1))
                .pow(p as u32)
                .scale(&rat(sign, 1 << p));
            c.case(prod.cl_str() == expect, || format!("sigma product {tau:?} in n = {n}"));
        }
    }
    c.done()
}

fn check_cyclicity(pairs: usize, rng: &mut ChaCha8Rng) -> CheckResult {
    let mut c = Check::new("clifford_trace_cyclicity");
    for k in 0..pairs {
        let n = if k % 2 == 0 { 2 } else { 4 };
        let a = random::clifford(n, 2, 3, rng);
        let b = random::clifford(n, 2, 3, rng);
        let (ab, ba) = (a.mul(&b), b.mul(&a));
        c.case(ab.cl_tr() == ba.cl_tr(), || format!("tr(ab) != tr(ba) for pair {k}"));
        // str is graded-cyclic: odd parts anticommute under the trace.
        let parity = |e: &CliffordElem, odd: bool| {
            let mut out = CliffordElem::zero(n, 2);
            for (&blade, m) in e.iter() {
                if (blade.count_ones() % 2 == 1) == odd {
                    out.insert(blade, m.clone());
                }
            }
            out
        };
        let (a0, a1, b0, b1) = (parity(&a, false), parity(&a, true), parity(&b, false), parity(&b, true));
        let graded = a0.mul(&b0).cl_str() + a0.mul(&b1).cl_str() + a1.mul(&b0).cl_str() - a1.mul(&b1).cl_str();
        let swapped = b0.mul(&a0).cl_str() + b1.mul(&a0).cl_str() + b0.mul(&a1).cl_str() + b1.mul(&a1).cl_str();
        c.case(graded == swapped, || format!("graded str cyclicity fails for pair {k}"));
    }
    c.done()
}

fn check_moments(moment: &dyn Fn(usize, &[u32]) -> PiScalar) -> CheckResult {
    let mut c = Check::new("sphere_moments");
    for n in [2usize, 4, 6] {
        for alpha in even_alphas(n, 8) {
            let got = moment(n, &alpha);
            c.case(got == gaussian_moment(n, &alpha), || format!("moment {alpha:?} in n = {n}: {got}"));
        }
        let vol = moment(n, &vec![0; n]);
        for i in 0..n {
            for j in 0..n {
                let mut alpha = vec![0u32; n];
                alpha[i] += 1;
                alpha[j] += 1;
                let expect = if i == j { vol.scale(&Scalar::ratio(1, n as i64)) } else { PiScalar::zero() };
                c.case(moment(n, &alpha) == expect, || format!("second moment ({i}, {j}) in n = {n}"));
            }
        }
    }
    c.done()
}

fn agree_on_window(a: &ClassicalSymbol, b: &ClassicalSymbol, n: usize) -> bool {
    a.agrees_with(b, -(n as i32), -1)
}

fn route_agreement(name: &'static str, c: &mut Check, q: &ClassicalSymbol, n: usize) {
    let logs: Result<Vec<_>, _> = Method::ALL.iter().map(|&m| log_symbol(q, n, m)).collect();
    match logs {
        Err(e) => c.error(e),
        Ok(logs) => {
            for (m, l) in Method::ALL.iter().zip(&logs).skip(1) {
                let ok = l.log_coeff == logs[0].log_coeff && agree_on_window(&l.classical, &logs[0].classical, n);
                c.case(ok, || format!("{name}: {m} disagrees with {}", Method::ALL[0]));
            }
        }
    }
}

fn check_laplacian_routes(count: usize, rng: &mut ChaCha8Rng) -> CheckResult {
    let mut c = Check::new("route_agreement_laplacians");
    for k in 0..count {
        let n = if k % 2 == 0 { 2 } else { 4 };
        let dw = 1 + (k / 2) % 2;
        let q = random::laplacian_lower(n, dw, rng);
        route_agreement("random laplacian", &mut c, &q, n);
    }
    c.done()
}

fn check_dirac_routes(tensors: &[CurvatureTensor]) -> CheckResult {
    let mut c = Check::new("route_agreement_dirac4");
    for r in tensors {
        match dirac_squared_symbol(r, 4) {
            Ok(q) => route_agreement("dirac square", &mut c, &q, 4),
            Err(e) => c.error(e),
        }
    }
    c.done()
}

fn check_bianchi_contraction(tensors: &[CurvatureTensor]) -> CheckResult {
    let mut c = Check::new("bianchi_sigma_contraction");
    for r in tensors {
        let n = r.n();
        for i in 0..n {
            for a in 0..n {
                let mut lhs = CliffordElem::zero(n, 1);
                let mut rhs = CliffordElem::zero(n, 1);
                for j in 0..n {
                    for k in 0..n {
                        let s = CliffordElem::sigma(n, 1, k, j);
                        lhs.add_assign(&s.scale(&Scalar::real(r.get(i, a, j, k) + r.get(i, k, j, a))));
                        rhs.add_assign(&s.scale(&Scalar::real(r.get(i, a, j, k) * rat(3, 2))));
                    }
                }
                c.case(lhs == rhs, || format!("contraction fails at i = {}, a = {}", i + 1, a + 1));
            }
        }
    }
    c.done()
}

fn check_christoffel(tensors: &[CurvatureTensor]) -> CheckResult {
    let mut c = Check::new("christoffel_sigma_identities");
    for r in tensors {
        let n = r.n();
        let g = dgamma_from_r(r);
        let mut trace = CliffordElem::zero(n, 1);
        for i in 0..n {
            trace.add_assign(&dgamma_sigma(&g, i, i, 1));
            for a in 0..n {
                let mut half = CliffordElem::zero(n, 1);
                for j in 0..n {
                    for k in 0..n {
                        half.add_assign(&CliffordElem::sigma(n, 1, k, j).scale(&Scalar::real(r.get(j, k, i, a) * rat(1, 2))));
                    }
                }
                c.case(dgamma_sigma(&g, a, i, 1) == half, || format!("half-curvature contraction at a = {}, i = {}", a + 1, i + 1));
            }
        }
        c.case(trace.is_zero(), || "traced Christoffel contraction is nonzero".into());
    }
    c.done()
}

fn check_dgamma_residues(tensors: &[CurvatureTensor], moment: &dyn Fn(usize, &[u32]) -> PiScalar) -> Vec<CheckResult> {
    let mut sq = Check::new("dgamma_square_residue");
    let mut cross = Check::new("dgamma_cross_residue");
    for r in tensors {
        let pont = match pontryagin_density(r) {
            Ok(p) => p,
            Err(e) => {
                sq.error(e);
                continue;
            }
        };
        let expect = |den: i64| PiScalar::new(Scalar::real(&pont * rat(1, den)), -2);
        match residue_density_with(&dgamma_square_symbol(r), TraceKind::Str, moment) {
            Ok(v) => sq.case(v == expect(32), || format!("got {v}, expected {}", expect(32))),
            Err(e) => sq.error(e),
        }
        match dgamma_cross_symbol(r).map_err(|e| e.to_string()).and_then(|s| {
            residue_density_with(&s, TraceKind::Str, moment).map_err(|e| e.to_string())
        }) {
            Ok(v) => cross.case(v == expect(128), || format!("got {v}, expected {}", expect(128))),
            Err(e) => cross.error(e),
        }
    }
    vec![sq.done(), cross.done()]
}

fn check_flat_index(fields: &[GaugeField]) -> CheckResult {
    let mut c = Check::new("flat_twisted_index");
    for g in fields {
        match index_flat_twisted(g, Method::Taylor) {
            Ok(rep) => c.case(rep.holds, || format!("n = {}: {rep}", g.n())),
            Err(e) => c.error(e),
        }
        match flat_power_residues(g) {
            Ok(v) => {
                let p = g.n() / 2;
                c.case(v[..p - 1].iter().all(PiScalar::is_zero), || format!("n = {}: sub-top power residues {v:?}", g.n()));
            }
            Err(e) => c.error(e),
        }
    }
    c.done()
}

fn check_rotation(tensors: &[CurvatureTensor], fields: &[GaugeField], rotations: usize, rng: &mut ChaCha8Rng) -> CheckResult {
    let mut c = Check::new("rotation_invariance");
    let sres_dirac = |r: &CurvatureTensor| -> Result<PiScalar, String> {
        let q = dirac_squared_symbol(r, 4).map_err(|e| e.to_string())?;
        res_log(&q, 4, Method::Taylor, TraceKind::Str).map_err(|e| e.to_string())
    };
    let sres_flat = |g: &GaugeField| index_flat_twisted(g, Method::Taylor).map(|r| r.sres_log).map_err(|e| e.to_string());
    for k in 0..rotations {
        if let Some(r) = tensors.get(k % tensors.len().max(1)) {
            let o = random_rotation(4, rng);
            match (sres_dirac(r), sres_dirac(&r.rotate(&o))) {
                (Ok(a), Ok(b)) => c.case(a == b, || format!("dirac residue changed: {a} vs {b}")),
                (Err(e), _) | (_, Err(e)) => c.error(e),
            }
        }
        if let Some(g) = fields.get(k % fields.len().max(1)) {
            let o = random_rotation(g.n(), rng);
            match (sres_flat(g), sres_flat(&g.rotate(&o))) {
                (Ok(a), Ok(b)) => c.case(a == b, || format!("flat residue changed: {a} vs {b}")),
                (Err(e), _) | (_, Err(e)) => c.error(e),
            }
        }
    }
    c.done()
}

fn check_additivity(fields: &[GaugeField]) -> CheckResult {
    let mut c = Check::new("direct_sum_additivity");
    for pair in fields.chunks(2) {
        if let [a, b] = pair {
            if a.n() != b.n() {
                continue;
            }
            let sres = |g: &GaugeField| index_flat_twisted(g, Method::Taylor).map(|r| r.sres_log);
            match (sres(a), sres(b), sres(&a.direct_sum(b))) {
                (Ok(x), Ok(y), Ok(s)) => {
                    let sum = x.checked_add(&y).ok();
                    c.case(sum.as_ref() == Some(&s), || format!("{x} + {y} != {s}"));
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => c.error(e),
            }
        }
    }
    c.done()
}

fn check_scalar_independence(tensors: &[CurvatureTensor], rng: &mut ChaCha8Rng) -> CheckResult {
    let mut c = Check::new("scalar_curvature_independence");
    for r in tensors {
        let shift = rat(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let run = |s: &Rational| {
            dirac_squared_symbol_with_scalar(r, 4, s)
                .map_err(|e| e.to_string())
                .and_then(|q| res_log(&q, 4, Method::Taylor, TraceKind::Str).map_err(|e| e.to_string()))
        };
        match (run(&r.scalar_curvature()), run(&(r.scalar_curvature() + shift))) {
            (Ok(a), Ok(b)) => c.case(a == b, || format!("{a} vs {b}")),
            (Err(e), _) | (_, Err(e)) => c.error(e),
        }
    }
    c.done()
}

fn check_trivial_inputs() -> CheckResult {
    let mut c = Check::new("zero_input_residues");
    for n in [2usize, 4] {
        for dw in [1usize, 2] {
            let q = ClassicalSymbol::zero(n, dw, 1, FLOOR_EXACT);
            for m in Method::ALL {
                match res_log(&q, n, m, TraceKind::Str) {
                    Ok(v) => c.case(v.is_zero(), || format!("{m}, n = {n}, d_W = {dw}: {v}")),
                    Err(e) => c.error(e),
                }
            }
        }
    }
    c.done()
}

/// Runs every check with the configured sizes.
pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let moment: &dyn Fn(usize, &[u32]) -> PiScalar = if cfg.tamper_moments { &tampered_moment } else { &sphere_moment };
    let tensors: Vec<CurvatureTensor> = (0..cfg.tensors).map(|_| CurvatureTensor::random(4, &mut rng)).collect();
    let fields: Vec<GaugeField> = (0..cfg.gauge_fields)
        .map(|k| GaugeField::random(if k % 2 == 0 { 2 } else { 4 }, 2, &mut rng))
        .collect();
    let mut checks = vec![
        check_supertrace_words(&mut rng),
        check_sigma_products(),
        check_cyclicity(cfg.cyclic_pairs, &mut rng),
        check_moments(moment),
        check_trivial_inputs(),
        check_laplacian_routes(cfg.laplacians, &mut rng),
        check_dirac_routes(&tensors),
        check_bianchi_contraction(&tensors),
        check_christoffel(&tensors),
    ];
    checks.extend(check_dgamma_residues(&tensors, moment));
    checks.push(check_flat_index(&fields));
    checks.push(check_rotation(&tensors, &fields, cfg.rotations, &mut rng));
    // Adjacent fields share a dimension once sorted.
    let mut paired = fields.clone();
    paired.sort_by_key(GaugeField::n);
    checks.push(check_additivity(&paired));
    checks.push(check_scalar_independence(&tensors, &mut rng));
    SelftestReport { seed: cfg.seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SelftestConfig {
        SelftestConfig {
            seed,
            tensors: 2,
            laplacians: 4,
            gauge_fields: 4,
            rotations: 2,
            cyclic_pairs: 10,
            tamper_moments: false,
        }
    }

    #[test]
    fn gaussian_oracle_matches_volumes() {
        assert_eq!(gaussian_moment(4, &[0; 4]), PiScalar::new(Scalar::from_int(2), 2));
        assert_eq!(gaussian_moment(2, &[2, 0]), PiScalar::new(Scalar::from_int(1), 1));
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let a = run(&small(4));
        assert!(a.passed(), "{a}");
        assert_eq!(a, run(&small(4)));
    }

    #[test]
    fn tampered_moments_are_detected() {
        let mut cfg = small(1);
        cfg.tamper_moments = true;
        let rep = run(&cfg);
        let failed = rep.failed_names();
        assert!(failed.contains(&"sphere_moments"));
        assert!(failed.contains(&"dgamma_square_residue"));
    }
}

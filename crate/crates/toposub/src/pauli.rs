//! Generalized Pauli operators on mixed-dimension qudits with exact phases.
//!
//! Normal form: `P = w^k · ∏_j X_j^{x_j} Z_j^{z_j}` with `w = e^{2πi/Q}` and
//! `Q = 2·lcm(dims)` the phase modulus.

use crate::error::{Error, Result};
use crate::ring_linalg::{gcd, lcm, md};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// An exact root of unity `e^{2πi num/den}`, stored as a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhaseRoot {
    pub num: i64,
    pub den: i64,
}

impl PhaseRoot {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "phase denominator must be positive");
        let n = md(num, den);
        let g = gcd(n, den).max(1);
        PhaseRoot { num: n / g, den: den / g }
    }

    pub const ONE: PhaseRoot = PhaseRoot { num: 0, den: 1 };

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(&self, o: &PhaseRoot) -> PhaseRoot {
        let d = lcm(self.den, o.den);
        PhaseRoot::new(self.num * (d / self.den) + o.num * (d / o.den), d)
    }

    pub fn inv(&self) -> PhaseRoot {
        PhaseRoot::new(-self.num, self.den)
    }

    pub fn div(&self, o: &PhaseRoot) -> PhaseRoot {
        self.mul(&o.inv())
    }

    pub fn pow(&self, k: i64) -> PhaseRoot {
        PhaseRoot::new(md(self.num * md(k, self.den), self.den), self.den)
    }

    /// Multiplicative order.
    pub fn order(&self) -> i64 {
        self.den
    }

    /// Exponent of this phase in units of `e^{2πi/q}`, if representable.
    pub fn exponent_in(&self, q: i64) -> Option<i64> {
        if q % self.den != 0 {
            return None;
        }
        Some(self.num * (q / self.den))
    }
}

impl fmt::Display for PhaseRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (1, 4) => write!(f, "i"),
            (3, 4) => write!(f, "-i"),
            (n, d) => write!(f, "e^(2pi i {}/{})", n, d),
        }
    }
}

/// A finite set of qudits with individual dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuditSystem {
    labels: Vec<String>,
    dims: Vec<u32>,
    lcm: u64,
    phase_modulus: u64,
}

impl QuditSystem {
    pub fn new(labels: Vec<String>, dims: Vec<u32>) -> Result<Arc<Self>> {
        if labels.len() != dims.len() {
            return Err(Error::ProfileMismatch("labels and dims differ in length".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        let l = dims.iter().fold(1i64, |a, &d| lcm(a, d as i64)) as u64;
        Ok(Arc::new(QuditSystem { labels, dims, lcm: l, phase_modulus: 2 * l }))
    }

    /// Sites labelled by their index.
    pub fn from_dims(dims: Vec<u32>) -> Result<Arc<Self>> {
        let labels = (0..dims.len()).map(|i| i.to_string()).collect();
        Self::new(labels, dims)
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, site: usize) -> u32 {
        self.dims[site]
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn label(&self, site: usize) -> &str {
        &self.labels[site]
    }

    pub fn site_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    pub fn phase_modulus(&self) -> u64 {
        self.phase_modulus
    }

    /// Moduli of the interleaved symplectic coordinates `(x_0, z_0, x_1, z_1, …)`.
    pub fn symplectic_moduli(&self) -> Vec<i64> {
        self.dims.iter().flat_map(|&d| [d as i64, d as i64]).collect()
    }
}

/// A Pauli operator in normal form, storing only its support.
#[derive(Debug, Clone)]
pub struct PauliOperator {
    system: Arc<QuditSystem>,
    phase: u64,
    /// `(site, x, z)` sorted by site, never `(x, z) = (0, 0)`.
    terms: Vec<(usize, u32, u32)>,
}

impl PartialEq for PauliOperator {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.system, &o.system) || self.system == o.system)
            && self.phase == o.phase
            && self.terms == o.terms
    }
}
impl Eq for PauliOperator {}

impl PauliOperator {
    pub fn identity(system: &Arc<QuditSystem>) -> Self {
        PauliOperator { system: system.clone(), phase: 0, terms: vec![] }
    }

    /// Build from a phase exponent (units of `e^{2πi/Q}`) and `(site, x, z)`
    /// factors applied left to right.
    pub fn from_terms(system: &Arc<QuditSystem>, phase: i64, factors: &[(usize, i64, i64)]) -> Result<Self> {
        let mut p = Self::identity(system);
        p.phase = md(phase, system.phase_modulus as i64) as u64;
        for &(s, x, z) in factors {
            if s >= system.len() {
                return Err(Error::Parse(format!("site {} out of range", s)));
            }
            p = p.mul_ref(&Self::single(system, s, x, z))?;
        }
        Ok(p)
    }

    /// `X^x Z^z` on one site.
    pub fn single(system: &Arc<QuditSystem>, site: usize, x: i64, z: i64) -> Self {
        let n = system.dim(site) as i64;
        let (x, z) = (md(x, n) as u32, md(z, n) as u32);
        let terms = if x == 0 && z == 0 { vec![] } else { vec![(site, x, z)] };
        PauliOperator { system: system.clone(), phase: 0, terms }
    }

    pub fn x(system: &Arc<QuditSystem>, site: usize) -> Self {
        Self::single(system, site, 1, 0)
    }

    pub fn z(system: &Arc<QuditSystem>, site: usize) -> Self {
        Self::single(system, site, 0, 1)
    }

    /// `Y = √ω X†Z†` for even dimension, `X†Z†` for odd, so that `Y^N = 1`.
    pub fn y(system: &Arc<QuditSystem>, site: usize) -> Self {
        let n = system.dim(site) as u64;
        let mut p = Self::single(system, site, -1, -1);
        if n % 2 == 0 {
            p.phase = system.phase_modulus / (2 * n);
        }
        p
    }

    /// Scalar `e^{2πi k/Q}`.
    pub fn scalar(system: &Arc<QuditSystem>, k: i64) -> Self {
        let mut p = Self::identity(system);
        p.phase = md(k, system.phase_modulus as i64) as u64;
        p
    }

    pub fn system(&self) -> &Arc<QuditSystem> {
        &self.system
    }

    pub fn phase_exp(&self) -> u64 {
        self.phase
    }

    pub fn phase(&self) -> PhaseRoot {
        PhaseRoot::new(self.phase as i64, self.system.phase_modulus as i64)
    }

    pub fn terms(&self) -> &[(usize, u32, u32)] {
        &self.terms
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.0).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.terms.is_empty()
    }

    /// Proportional to the identity.
    pub fn is_scalar(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self, site: usize) -> (u32, u32) {
        match self.terms.binary_search_by_key(&site, |t| t.0) {
            Ok(i) => (self.terms[i].1, self.terms[i].2),
            Err(_) => (0, 0),
        }
    }

    pub fn with_phase_exp(mut self, k: i64) -> Self {
        self.phase = md(k, self.system.phase_modulus as i64) as u64;
        self
    }

    fn same_system(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.system, &o.system) || self.system == o.system {
            Ok(())
        } else {
            Err(Error::SystemMismatch)
        }
    }

    fn mul_ref(&self, q: &Self) -> Result<Self> {
        multiply(self, q)
    }

    /// Interleaved symplectic coordinates `(x_0, z_0, …)`.
    pub fn symplectic(&self) -> Vec<i64> {
        let mut v = vec![0i64; 2 * self.system.len()];
        for &(s, x, z) in &self.terms {
            v[2 * s] = x as i64;
            v[2 * s + 1] = z as i64;
        }
        v
    }

    /// Operator `w^phase ∏ X^x Z^z` from symplectic coordinates.
    pub fn from_symplectic(system: &Arc<QuditSystem>, phase: i64, v: &[i64]) -> Self {
        let mut terms = Vec::new();
        for s in 0..system.len() {
            let n = system.dim(s) as i64;
            let (x, z) = (md(v[2 * s], n) as u32, md(v[2 * s + 1], n) as u32);
            if x != 0 || z != 0 {
                terms.push((s, x, z));
            }
        }
        PauliOperator {
            system: system.clone(),
            phase: md(phase, system.phase_modulus as i64) as u64,
            terms,
        }
    }

    pub fn inverse(&self) -> Self {
        inverse(self)
    }

    pub fn pow(&self, k: i64) -> Self {
        power(self, k)
    }
}

/// Normal-form product `P·Q`.
pub fn multiply(p: &PauliOperator, q: &PauliOperator) -> Result<PauliOperator> {
    p.same_system(q)?;
    let sys = &p.system;
    let qm = sys.phase_modulus;
    let mut phase = (p.phase + q.phase) % qm;
    let mut terms = Vec::with_capacity(p.terms.len() + q.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < p.terms.len() || j < q.terms.len() {
        let si = p.terms.get(i).map_or(usize::MAX, |t| t.0);
        let sj = q.terms.get(j).map_or(usize::MAX, |t| t.0);
        if si < sj {
            terms.push(p.terms[i]);
            i += 1;
        } else if sj < si {
            terms.push(q.terms[j]);
            j += 1;
        } else {
            let n = sys.dim(si);
            let (_, px, pz) = p.terms[i];
            let (_, qx, qz) = q.terms[j];
            // X^a Z^b X^c Z^d = ω^{bc} X^{a+c} Z^{b+d}
            let unit = qm / n as u64;
            phase = (phase + unit * ((pz as u64 * qx as u64) % n as u64)) % qm;
            let (x, z) = ((px + qx) % n, (pz + qz) % n);
            if x != 0 || z != 0 {
                terms.push((si, x, z));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(PauliOperator { system: sys.clone(), phase, terms })
}

/// `P^{-1}`: `(ζ X^x Z^z)^{-1} = ζ^{-1} ω^{xz} X^{-x} Z^{-z}` per site.
pub fn inverse(p: &PauliOperator) -> PauliOperator {
    let sys = &p.system;
    let qm = sys.phase_modulus;
    let mut phase = (qm - p.phase) % qm;
    let mut terms = Vec::with_capacity(p.terms.len());
    for &(s, x, z) in &p.terms {
        let n = sys.dim(s);
        phase = (phase + (qm / n as u64) * ((x as u64 * z as u64) % n as u64)) % qm;
        terms.push((s, (n - x) % n, (n - z) % n));
    }
    PauliOperator { system: sys.clone(), phase, terms }
}

pub fn power(p: &PauliOperator, k: i64) -> PauliOperator {
    let (mut base, mut e) = if k < 0 { (inverse(p), -k) } else { (p.clone(), k) };
    let mut acc = PauliOperator::identity(&p.system);
    while e > 0 {
        if e & 1 == 1 {
            acc = multiply(&acc, &base).unwrap();
        }
        base = multiply(&base, &base).unwrap();
        e >>= 1;
    }
    acc
}

/// Exponent `k` of `Φ_P(Q) = P Q P† Q† = e^{2πi k / lcm}`.
pub(crate) fn commutator_exponent(p: &PauliOperator, q: &PauliOperator) -> i64 {
    let sys = &p.system;
    let m = sys.lcm as i64;
    let mut k = 0i64;
    let (mut i, mut j) = (0, 0);
    while i < p.terms.len() && j < q.terms.len() {
        let (si, sj) = (p.terms[i].0, q.terms[j].0);
        if si < sj {
            i += 1;
        } else if sj < si {
            j += 1;
        } else {
            let n = sys.dim(si) as i64;
            let (_, px, pz) = p.terms[i];
            let (_, qx, qz) = q.terms[j];
            k += (m / n) * (pz as i64 * qx as i64 - px as i64 * qz as i64);
            i += 1;
            j += 1;
        }
    }
    md(k, m)
}

/// `Φ_P(Q) = P Q P† Q†`.
pub fn commutator_phase(p: &PauliOperator, q: &PauliOperator) -> Result<PhaseRoot> {
    p.same_system(q)?;
    Ok(PhaseRoot::new(commutator_exponent(p, q), p.system.lcm as i64))
}

/// Smallest `k ≥ 1` with `P^k = I` (including the phase).
pub fn operator_order(p: &PauliOperator) -> u64 {
    let sys = &p.system;
    let o = p
        .terms
        .iter()
        .fold(1i64, |acc, &(s, x, z)| {
            let n = sys.dim(s) as i64;
            lcm(acc, n / gcd(gcd(x as i64, z as i64), n))
        });
    let r = power(p, o);
    debug_assert!(r.terms.is_empty());
    let qm = sys.phase_modulus as i64;
    let ph = r.phase as i64;
    (o * (qm / gcd(ph, qm))) as u64
}

impl fmt::Display for PauliOperator {
    /// `w^k X3(s) Z1(s')` with `w = e^{2πi/Q}`; the identity prints as `I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.phase != 0 {
            parts.push(format!("w^{}", self.phase));
        }
        for &(s, x, z) in &self.terms {
            let l = self.system.label(s);
            if x != 0 {
                parts.push(format!("X{}({})", x, l));
            }
            if z != 0 {
                parts.push(format!("Z{}({})", z, l));
            }
        }
        if self.terms.is_empty() {
            parts.push("I".into());
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Parse the text form produced by `Display`. Factors are multiplied left to
/// right, so any product of `X`/`Z` powers is accepted.
pub fn parse_operator(system: &Arc<QuditSystem>, text: &str) -> Result<PauliOperator> {
    let mut p = PauliOperator::identity(system);
    for tok in text.split_whitespace() {
        if tok == "I" {
            continue;
        }
        if let Some(k) = tok.strip_prefix("w^") {
            let k: i64 = k.parse().map_err(|_| Error::Parse(format!("bad phase `{}`", tok)))?;
            p = multiply(&p, &PauliOperator::scalar(system, k))?;
            continue;
        }
        let kind = tok.chars().next().unwrap();
        let open = tok.find('(').ok_or_else(|| Error::Parse(format!("bad factor `{}`", tok)))?;
        if !tok.ends_with(')') || (kind != 'X' && kind != 'Z') {
            return Err(Error::Parse(format!("bad factor `{}`", tok)));
        }
        let e: i64 = tok[1..open].parse().map_err(|_| Error::Parse(format!("bad exponent in `{}`", tok)))?;
        let label = &tok[open + 1..tok.len() - 1];
        let s = system.site_of(label).ok_or_else(|| Error::Parse(format!("unknown site `{}`", label)))?;
        let f = if kind == 'X' {
            PauliOperator::single(system, s, e, 0)
        } else {
            PauliOperator::single(system, s, 0, e)
        };
        p = multiply(&p, &f)?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qubit() -> Arc<QuditSystem> {
        QuditSystem::from_dims(vec![2]).unwrap()
    }

    #[test]
    fn zx_is_minus_xz() {
        let s = qubit();
        let zx = multiply(&PauliOperator::z(&s, 0), &PauliOperator::x(&s, 0)).unwrap();
        assert_eq!(zx.terms(), &[(0, 1, 1)]);
        assert_eq!(zx.phase(), PhaseRoot::new(1, 2));
        let id = PauliOperator::identity(&s);
        let p = PauliOperator::y(&s, 0);
        assert_eq!(multiply(&id, &p).unwrap(), p);
    }

    #[test]
    fn y_to_the_n_is_identity() {
        for n in 2..=9 {
            let s = QuditSystem::from_dims(vec![n]).unwrap();
            let y = PauliOperator::y(&s, 0);
            assert!(power(&y, n as i64).is_identity(), "N={}", n);
            assert_eq!(operator_order(&y), n as u64);
        }
    }

    #[test]
    fn commutator_examples() {
        let s = qubit();
        let c = commutator_phase(&PauliOperator::z(&s, 0), &PauliOperator::x(&s, 0)).unwrap();
        assert_eq!(c, PhaseRoot::new(1, 2));
        let s4 = QuditSystem::from_dims(vec![4]).unwrap();
        let c = commutator_phase(&PauliOperator::x(&s4, 0), &PauliOperator::z(&s4, 0)).unwrap();
        assert_eq!(c, PhaseRoot::new(3, 4));
        let s2 = QuditSystem::from_dims(vec![2, 3]).unwrap();
        let c = commutator_phase(&PauliOperator::x(&s2, 0), &PauliOperator::z(&s2, 1)).unwrap();
        assert!(c.is_one());
    }

    #[test]
    fn order_examples() {
        let s4 = QuditSystem::from_dims(vec![4]).unwrap();
        assert_eq!(operator_order(&PauliOperator::x(&s4, 0)), 4);
        assert_eq!(operator_order(&PauliOperator::identity(&s4)), 1);
        let s3 = QuditSystem::from_dims(vec![3]).unwrap();
        // ω = e^{2πi/3} = w^2 with Q = 6
        assert_eq!(operator_order(&PauliOperator::scalar(&s3, 2)), 3);
    }

    #[test]
    fn text_round_trip() {
        let s = QuditSystem::new(vec!["a".into(), "b".into()], vec![4, 3]).unwrap();
        let p = PauliOperator::from_terms(&s, 5, &[(0, 3, 1), (1, 0, 2)]).unwrap();
        let t = p.to_string();
        assert_eq!(parse_operator(&s, &t).unwrap(), p);
        assert_eq!(parse_operator(&s, "I").unwrap(), PauliOperator::identity(&s));
    }

    /// Dense matrices whose entries are exact roots of unity `w^k` or zero.
    /// Pauli products are monomial, so every entry of a product has at most
    /// one nonzero contribution; the oracle asserts that.
    #[derive(Clone, PartialEq, Debug)]
    struct Dense {
        q: u64,
        e: Vec<Vec<Option<u64>>>,
    }

    impl Dense {
        fn mul(&self, o: &Dense) -> Dense {
            let n = self.e.len();
            let mut e = vec![vec![None; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = None;
                    for k in 0..n {
                        if let (Some(a), Some(b)) = (self.e[i][k], o.e[k][j]) {
                            assert!(acc.is_none(), "not monomial");
                            acc = Some((a + b) % self.q);
                        }
                    }
                    e[i][j] = acc;
                }
            }
            Dense { q: self.q, e }
        }
    }

    fn kron_index(dims: &[u32], digits: &[u32]) -> usize {
        digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n as usize + d as usize)
    }

    /// Matrix of `w^k ∏ X^x Z^z` with X|j> = |j+1>, Z|j> = ω^j |j>.
    fn dense_of(p: &PauliOperator) -> Dense {
        let sys = p.system();
        let dims = sys.dims().to_vec();
        let q = sys.phase_modulus();
        let total: usize = dims.iter().map(|&d| d as usize).product();
        let mut e = vec![vec![None; total]; total];
        for col in 0..total {
            let mut digits = vec![0u32; dims.len()];
            let mut c = col;
            for s in (0..dims.len()).rev() {
                digits[s] = (c % dims[s] as usize) as u32;
                c /= dims[s] as usize;
            }
            let mut ph = p.phase_exp();
            let mut out = digits.clone();
            for s in 0..dims.len() {
                let (x, z) = p.exponents(s);
                let n = dims[s];
                ph = (ph + (q / n as u64) * ((z as u64 * digits[s] as u64) % n as u64)) % q;
                out[s] = (digits[s] + x) % n;
            }
            e[kron_index(&dims, &out)][col] = Some(ph);
        }
        Dense { q, e }
    }

    fn small_system() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(2u32..=16, 1..=4)
            .prop_filter("total dim <= 16", |d| d.iter().product::<u32>() <= 16)
    }

    fn op_on(dims: Vec<u32>) -> impl Strategy<Value = (i64, Vec<(i64, i64)>)> {
        let n = dims.len();
        (0i64..64, prop::collection::vec((0i64..16, 0i64..16), n))
    }

    fn build(s: &Arc<QuditSystem>, (k, xz): &(i64, Vec<(i64, i64)>)) -> PauliOperator {
        let f: Vec<(usize, i64, i64)> = xz.iter().enumerate().map(|(i, &(x, z))| (i, x, z)).collect();
        PauliOperator::from_terms(s, *k, &f).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn normal_form_matches_dense_oracle(
            (dims, a, b) in small_system().prop_flat_map(|d| (Just(d.clone()), op_on(d.clone()), op_on(d)))
        ) {
            let s = QuditSystem::from_dims(dims).unwrap();
            let (p, q) = (build(&s, &a), build(&s, &b));
            let pq = multiply(&p, &q).unwrap();
            prop_assert_eq!(dense_of(&pq), dense_of(&p).mul(&dense_of(&q)));
            // equal matrices ⇔ equal normal forms
            prop_assert_eq!(dense_of(&p) == dense_of(&q), p == q);
            let inv = inverse(&p);
            prop_assert!(multiply(&p, &inv).unwrap().is_identity());
            // order against repeated multiplication
            let ord = operator_order(&p);
            let mut acc = p.clone();
            for _ in 1..ord { prop_assert!(!acc.is_identity()); acc = multiply(&acc, &p).unwrap(); }
            prop_assert!(acc.is_identity());
        }

        #[test]
        fn commutator_consistent(
            (dims, a, b, c) in prop::collection::vec(2u32..=9, 1..=5)
                .prop_flat_map(|d| (Just(d.clone()), op_on(d.clone()), op_on(d.clone()), op_on(d)))
        ) {
            let s = QuditSystem::from_dims(dims).unwrap();
            let (p, q, r) = (build(&s, &a), build(&s, &b), build(&s, &c));
            let phi = commutator_phase(&p, &q).unwrap();
            let chain = multiply(&multiply(&p, &q).unwrap(), &multiply(&inverse(&p), &inverse(&q)).unwrap()).unwrap();
            prop_assert!(chain.is_scalar());
            prop_assert_eq!(chain.phase(), phi);
            prop_assert!(phi.mul(&commutator_phase(&q, &p).unwrap()).is_one());
            let qr = multiply(&q, &r).unwrap();
            prop_assert_eq!(commutator_phase(&p, &qr).unwrap(), phi.mul(&commutator_phase(&p, &r).unwrap()));
            // associativity
            let l = multiply(&multiply(&p, &q).unwrap(), &r).unwrap();
            let rr = multiply(&p, &qr).unwrap();
            prop_assert_eq!(l, rr);
            prop_assert_eq!(parse_operator(&s, &p.to_string()).unwrap(), p);
        }
    }
}

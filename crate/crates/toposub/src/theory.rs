//! Abelian anyon theories given by `(A = ∏ℤ_{N_i}, u_i = 2t_i, p_ij)`.

use crate::error::{Error, Result};
use crate::pauli::PhaseRoot;
use crate::ring_linalg::{gcd, lcm, md};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Fusion group orders, doubled spins and the braiding matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnyonTheoryData {
    pub orders: Vec<i64>,
    pub two_t: Vec<i64>,
    pub p: Vec<Vec<i64>>,
}

/// Exponent vector over the generators of the fusion group.
pub type AnyonElement = Vec<i64>;

fn prime_power(n: i64) -> Option<(i64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let (mut m, mut e) = (n, 0);
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

impl AnyonTheoryData {
    /// Validate and bring every entry into its canonical range.
    pub fn new(orders: Vec<i64>, two_t: Vec<i64>, p: Vec<Vec<i64>>) -> Result<Self> {
        let m = orders.len();
        if two_t.len() != m || p.len() != m || p.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidTheory("orders, two_t and p must have matching sizes".into()));
        }
        for &n in &orders {
            if prime_power(n).is_none() {
                return Err(Error::InvalidTheory(format!(
                    "order {} is not a prime power; split it into coprime prime-power factors",
                    n
                )));
            }
        }
        let mut u = two_t.clone();
        for i in 0..m {
            u[i] = md(u[i], 2 * orders[i]);
            if orders[i] % 2 == 1 && u[i] % 2 == 1 {
                return Err(Error::InvalidTheory(format!(
                    "two_t[{}] = {} must be even because N = {} is odd",
                    i, two_t[i], orders[i]
                )));
            }
        }
        let mut pp = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in 0..m {
                let nij = gcd(orders[i], orders[j]);
                if i != j && md(p[i][j], nij) != md(p[j][i], nij) {
                    return Err(Error::InvalidTheory(format!("p is not symmetric at ({}, {})", i, j)));
                }
                pp[i][j] = md(p[i][j], nij);
            }
            if pp[i][i] != md(u[i] / 2, orders[i]) {
                return Err(Error::InvalidTheory(format!(
                    "p[{i}][{i}] = {} must equal floor(two_t[{i}]/2) = {} mod {}",
                    p[i][i],
                    u[i] / 2,
                    orders[i]
                )));
            }
        }
        Ok(AnyonTheoryData { orders, two_t: u, p: pp })
    }

    pub fn validated(&self) -> Result<Self> {
        Self::new(self.orders.clone(), self.two_t.clone(), self.p.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: AnyonTheoryData = serde_json::from_str(text)?;
        d.validated()
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> i64 {
        self.orders.iter().product()
    }

    pub fn n_ij(&self, i: usize, j: usize) -> i64 {
        gcd(self.orders[i], self.orders[j])
    }

    pub fn reduce(&self, a: &[i64]) -> AnyonElement {
        a.iter().zip(&self.orders).map(|(&x, &n)| md(x, n)).collect()
    }

    pub fn identity(&self) -> AnyonElement {
        vec![0; self.rank()]
    }

    pub fn generator(&self, i: usize) -> AnyonElement {
        let mut e = self.identity();
        e[i] = 1;
        e
    }

    pub fn elements(&self) -> Vec<AnyonElement> {
        let mut out = vec![vec![]];
        for &n in &self.orders {
            let mut next = Vec::new();
            for p in &out {
                for c in 0..n {
                    let mut q: Vec<i64> = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    fn denominator(&self) -> i64 {
        self.orders.iter().fold(1, |a, &n| lcm(a, 2 * n))
    }
}

/// `θ(∏ a_i^{m_i}) = ∏ θ(a_i)^{m_i²} ∏_{i<j} B(a_i, a_j)^{m_i m_j}`.
pub fn statistics_of(data: &AnyonTheoryData, a: &[i64]) -> PhaseRoot {
    let d = data.denominator();
    let m = data.reduce(a);
    let mut k = 0i64;
    for i in 0..data.rank() {
        let n = data.orders[i];
        // e^{πi u m²/N} = e^{2πi u m² / 2N}
        k += data.two_t[i] * md(m[i] * m[i], 2 * n) * (d / (2 * n));
        for j in i + 1..data.rank() {
            let nij = data.n_ij(i, j);
            k += data.p[i][j] * md(m[i] * m[j], nij) * (d / nij);
        }
        k = md(k, d);
    }
    PhaseRoot::new(k, d)
}

/// `B(a, b) = θ(ab) / (θ(a) θ(b))`.
pub fn braiding_of(data: &AnyonTheoryData, a: &[i64], b: &[i64]) -> PhaseRoot {
    let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    statistics_of(data, &ab).div(&statistics_of(data, a)).div(&statistics_of(data, b))
}

pub fn transparent_subgroup(data: &AnyonTheoryData) -> Vec<AnyonElement> {
    data.elements()
        .into_iter()
        .filter(|a| (0..data.rank()).all(|i| braiding_of(data, a, &data.generator(i)).is_one()))
        .collect()
}

pub fn is_modular(data: &AnyonTheoryData) -> bool {
    transparent_subgroup(data).len() == 1
}

/// Elements of `ℤ[ζ_L]` as coefficient vectors of `ζ^0 … ζ^{L-1}`.
mod cyclo {
    pub fn poly_divrem(num: &[i64], den: &[i64]) -> (Vec<i64>, Vec<i64>) {
        // den monic
        let mut r = num.to_vec();
        let dd = den.len() - 1;
        if r.len() <= dd {
            return (vec![0], r);
        }
        let mut q = vec![0i64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c != 0 {
                q[i - dd] = c;
                for (k, &dk) in den.iter().enumerate() {
                    r[i - dd + k] -= c * dk;
                }
            }
        }
        r.truncate(dd);
        (q, r)
    }

    /// Cyclotomic polynomial `Φ_n`, lowest degree first.
    pub fn cyclotomic(n: usize) -> Vec<i64> {
        let mut p = vec![0i64; n + 1];
        p[0] = -1;
        p[n] = 1;
        for d in 1..n {
            if n % d == 0 {
                let (q, r) = poly_divrem(&p, &cyclotomic(d));
                debug_assert!(r.iter().all(|&c| c == 0));
                p = q;
            }
        }
        p
    }

    pub fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let l = a.len();
        let mut c = vec![0i64; l];
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                for (j, &y) in b.iter().enumerate() {
                    if y != 0 {
                        c[(i + j) % l] += x * y;
                    }
                }
            }
        }
        c
    }

    pub fn root(l: usize, k: usize) -> Vec<i64> {
        let mut v = vec![0i64; l];
        v[k % l] = 1;
        v
    }

    pub fn is_zero(a: &[i64], phi: &[i64]) -> bool {
        let (_, r) = poly_divrem(a, phi);
        r.iter().all(|&c| c == 0)
    }
}

fn prime_factors(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Chiral central charge mod 8 from `Σ_a θ(a) = √|A| e^{2πi c/8}`, returned
/// as `(numerator, denominator)` with denominator 1 or 2.
pub fn central_charge_mod8(data: &AnyonTheoryData) -> Result<(i64, i64)> {
    if !is_modular(data) {
        return Err(Error::NotModular("the transparent subgroup is nontrivial".into()));
    }
    let size = data.size();
    let factors = prime_factors(size);
    let mut l = lcm(data.denominator(), 16) as usize;
    for &(p, e) in &factors {
        if e % 2 == 1 && p > 2 {
            l = lcm(l as i64, 4 * p) as usize;
        }
    }
    let phi = cyclo::cyclotomic(l);
    let d = data.denominator();
    let mut gauss = vec![0i64; l];
    for a in data.elements() {
        let t = statistics_of(data, &a);
        gauss[(t.num * (l as i64 / t.den)) as usize] += 1;
        let _ = d;
    }
    // √|A| as a cyclotomic integer (quadratic Gauss sums)
    let mut root = cyclo::root(l, 0);
    for &(p, e) in &factors {
        let scalar = p.pow(e / 2);
        root = root.iter().map(|c| c * scalar).collect();
        if e % 2 == 1 {
            let sq = if p == 2 {
                let mut v = cyclo::root(l, l / 8);
                v[l - l / 8] += 1;
                v
            } else {
                let mut g = vec![0i64; l];
                for x in 0..p {
                    g[((x * x % p) * (l as i64 / p)) as usize] += 1;
                }
                if p % 4 == 3 {
                    // √p = -i·g
                    cyclo::mul(&g, &cyclo::root(l, 3 * l / 4))
                } else {
                    g
                }
            };
            root = cyclo::mul(&root, &sq);
        }
    }
    for k in 0..16 {
        let cand = cyclo::mul(&root, &cyclo::root(l, k * l / 16));
        let diff: Vec<i64> = gauss.iter().zip(&cand).map(|(a, b)| a - b).collect();
        if cyclo::is_zero(&diff, &phi) {
            return Ok(if k % 2 == 0 { (k as i64 / 2, 1) } else { (k as i64, 2) });
        }
    }
    Err(Error::NotModular("Gauss sum does not match any eighth root of unity".into()))
}

/// Subgroup of bosons with trivial mutual braiding that braids nontrivially
/// with every element outside it.
pub fn is_lagrangian(data: &AnyonTheoryData, subset: &[AnyonElement]) -> bool {
    let set: BTreeSet<AnyonElement> = subset.iter().map(|a| data.reduce(a)).collect();
    if !set.contains(&data.identity()) {
        return false;
    }
    for a in &set {
        for b in &set {
            let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if !set.contains(&data.reduce(&ab)) || !braiding_of(data, a, b).is_one() {
                return false;
            }
        }
        if !statistics_of(data, a).is_one() {
            return false;
        }
    }
    data.elements()
        .into_iter()
        .filter(|x| !set.contains(x))
        .all(|x| set.iter().any(|a| !braiding_of(data, &x, a).is_one()))
}

/// The layered twisted quantum double containing the theory, with the kept
/// generators `a_i` and the generators `ā_i` to be gauged out.
///
/// TQD coordinates are `(c_1, φ_1, c_2, φ_2, …)`, with `c_i, φ_i ∈ ℤ_{N_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TqdEmbedding {
    pub orders: Vec<i64>,
    pub n: Vec<i64>,
    pub a: Vec<Vec<i64>>,
    pub a_bar: Vec<Vec<i64>>,
    pub phi_bar: Vec<Vec<i64>>,
}

impl TqdEmbedding {
    /// The TQD itself as anyon data over `(c_1, φ_1, …)`.
    pub fn tqd_data(&self) -> AnyonTheoryData {
        let m = self.orders.len();
        let mut orders = Vec::new();
        let mut u = Vec::new();
        let mut p = vec![vec![0i64; 2 * m]; 2 * m];
        for i in 0..m {
            let n = self.orders[i];
            orders.extend([n, n]);
            let uphi = if self.n[i] == 0 { 0 } else { 1 };
            u.extend([0, uphi]);
            p[2 * i][2 * i + 1] = 1;
            p[2 * i + 1][2 * i] = 1;
        }
        AnyonTheoryData::new(orders, u, p).expect("TQD data is valid")
    }

    pub fn c(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; 2 * self.orders.len()];
        v[2 * i] = 1;
        v
    }

    pub fn phi(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; 2 * self.orders.len()];
        v[2 * i + 1] = 1;
        v
    }
}

pub fn tqd_embedding(data: &AnyonTheoryData) -> Result<TqdEmbedding> {
    let data = data.validated()?;
    let m = data.rank();
    let ns: Vec<i64> = (0..m)
        .map(|i| if data.two_t[i] % 2 == 0 { 0 } else { data.orders[i] / 2 })
        .collect();
    let mut emb = TqdEmbedding { orders: data.orders.clone(), n: ns.clone(), a: vec![], a_bar: vec![], phi_bar: vec![] };
    let tqd = emb.tqd_data();
    for i in 0..m {
        let mut a = emb.phi(i);
        for j in 0..=i {
            a[2 * j] += data.p[j][i] * data.orders[j] / data.n_ij(i, j);
        }
        let mut pb = emb.phi(i);
        pb[2 * i + 1] = -1;
        pb[2 * i] = 2 * ns[i] / data.orders[i];
        let mut ab = pb.clone();
        for j in i..m {
            ab[2 * j] += data.p[i][j] * data.orders[j] / data.n_ij(i, j);
        }
        emb.a.push(tqd.reduce(&a));
        emb.phi_bar.push(tqd.reduce(&pb));
        emb.a_bar.push(tqd.reduce(&ab));
    }
    // consistency: trivial braiding with ā, and the a_i reproduce the data
    for i in 0..m {
        for j in 0..m {
            if !braiding_of(&tqd, &emb.a[i], &emb.a_bar[j]).is_one() {
                return Err(Error::InvalidTheory(format!("internal: B(a_{}, ā_{}) ≠ 1", i, j)));
            }
            let want = if i == j {
                PhaseRoot::new(data.two_t[i], data.orders[i])
            } else {
                PhaseRoot::new(data.p[i][j], data.n_ij(i, j))
            };
            if braiding_of(&tqd, &emb.a[i], &emb.a[j]) != want {
                return Err(Error::InvalidTheory(format!("internal: B(a_{}, a_{}) mismatch", i, j)));
            }
        }
        if statistics_of(&tqd, &emb.a[i]) != statistics_of(&data, &data.generator(i)) {
            return Err(Error::InvalidTheory(format!("internal: θ(a_{}) mismatch", i)));
        }
    }
    Ok(emb)
}

/// All valid `(u, p)` for the given orders.
pub fn admissible_data(orders: &[i64]) -> Vec<AnyonTheoryData> {
    let m = orders.len();
    let mut us: Vec<Vec<i64>> = vec![vec![]];
    for &n in orders {
        let mut next = Vec::new();
        for u in &us {
            for t in 0..2 * n {
                if n % 2 == 1 && t % 2 == 1 {
                    continue;
                }
                let mut v = u.clone();
                v.push(t);
                next.push(v);
            }
        }
        us = next;
    }
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for u in &us {
        let mut ps: Vec<Vec<i64>> = vec![vec![]];
        for &(i, j) in &pairs {
            let nij = gcd(orders[i], orders[j]);
            let mut next = Vec::new();
            for p in &ps {
                for v in 0..nij {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            ps = next;
        }
        for pv in &ps {
            let mut p = vec![vec![0i64; m]; m];
            for i in 0..m {
                p[i][i] = md(u[i] / 2, orders[i]);
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                p[i][j] = pv[k];
                p[j][i] = pv[k];
            }
            out.push(AnyonTheoryData::new(orders.to_vec(), u.clone(), p).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(orders: &[i64], u: &[i64], p: &[&[i64]]) -> AnyonTheoryData {
        AnyonTheoryData::new(orders.to_vec(), u.to_vec(), p.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn z4_1() -> AnyonTheoryData {
        d(&[4], &[2], &[&[1]])
    }
    fn semion() -> AnyonTheoryData {
        d(&[2], &[1], &[&[0]])
    }
    fn tc(n: i64) -> AnyonTheoryData {
        d(&[n, n], &[0, 0], &[&[0, 1], &[1, 0]])
    }

    #[test]
    fn statistics_examples() {
        assert!(statistics_of(&z4_1(), &[2]).is_one());
        assert_eq!(statistics_of(&z4_1(), &[1]), PhaseRoot::new(1, 4));
        assert_eq!(statistics_of(&z4_1(), &[3]), PhaseRoot::new(1, 4));
        assert!(statistics_of(&z4_1(), &[0]).is_one());
        assert_eq!(statistics_of(&semion(), &[1]), PhaseRoot::new(1, 4));
    }

    #[test]
    fn braiding_examples() {
        assert_eq!(braiding_of(&z4_1(), &[1], &[1]), PhaseRoot::new(1, 2));
        assert!(braiding_of(&z4_1(), &[1], &[0]).is_one());
        let t = tc(4);
        for (p, q, r, s) in [(1, 0, 0, 1), (1, 2, 3, 1), (2, 3, 1, 1)] {
            assert_eq!(braiding_of(&t, &[p, q], &[r, s]), PhaseRoot::new(p * s + q * r, 4));
        }
    }

    #[test]
    fn transparent_examples() {
        assert_eq!(transparent_subgroup(&z4_1()), vec![vec![0], vec![2]]);
        assert_eq!(transparent_subgroup(&semion()), vec![vec![0]]);
        assert_eq!(transparent_subgroup(&d(&[2], &[0], &[&[0]])).len(), 2);
    }

    #[test]
    fn central_charges() {
        assert_eq!(central_charge_mod8(&semion()).unwrap(), (1, 1));
        let three_f = d(&[2, 2], &[2, 2], &[&[1, 1], &[1, 1]]);
        assert!(transparent_subgroup(&three_f).len() == 1);
        assert_eq!(central_charge_mod8(&three_f).unwrap(), (4, 1));
        assert_eq!(central_charge_mod8(&tc(2)).unwrap(), (0, 1));
        assert!(central_charge_mod8(&z4_1()).is_err());
        // anti-semion
        assert_eq!(central_charge_mod8(&d(&[2], &[3], &[&[1]])).unwrap(), (7, 1));
        // ℤ_3 with θ = e^{2πi/3}: c = 2 mod 8 (SU(3)_1)
        assert_eq!(central_charge_mod8(&d(&[3], &[2], &[&[1]])).unwrap(), (2, 1));
        // U(1)_4: ℤ_4, θ(s) = e^{iπ/4}: c = 1
        assert_eq!(central_charge_mod8(&d(&[4], &[1], &[&[0]])).unwrap(), (1, 1));
    }

    #[test]
    fn lagrangian_examples() {
        let t = tc(4);
        let es: Vec<Vec<i64>> = (0..4).map(|k| vec![k, 0]).collect();
        assert!(is_lagrangian(&t, &es));
        let t2 = tc(2);
        assert!(!is_lagrangian(&t2, &[vec![0, 0], vec![1, 1]]));
        let triv = AnyonTheoryData::new(vec![], vec![], vec![]).unwrap();
        assert!(is_lagrangian(&triv, &[vec![]]));
    }

    #[test]
    fn embedding_examples() {
        let e = tqd_embedding(&d(&[2], &[0], &[&[0]])).unwrap();
        assert_eq!((e.n.clone(), e.a[0].clone(), e.a_bar[0].clone()), (vec![0], vec![0, 1], vec![0, 1]));
        let e = tqd_embedding(&d(&[2], &[2], &[&[1]])).unwrap();
        assert_eq!((e.n.clone(), e.a[0].clone(), e.a_bar[0].clone()), (vec![0], vec![1, 1], vec![1, 1]));
        let e = tqd_embedding(&semion()).unwrap();
        assert_eq!(e.n, vec![1]);
        assert_eq!(e.a[0], e.phi(0));
        assert_eq!(e.a_bar[0], e.phi_bar[0]);
    }

    #[test]
    fn validation() {
        assert!(AnyonTheoryData::new(vec![6], vec![0], vec![vec![0]]).is_err());
        assert!(AnyonTheoryData::new(vec![3], vec![1], vec![vec![0]]).is_err());
        assert!(AnyonTheoryData::new(vec![4], vec![2], vec![vec![0]]).is_err());
        assert!(AnyonTheoryData::new(vec![2, 4], vec![0, 0], vec![vec![0, 1], vec![0, 0]]).is_err());
    }

    #[test]
    fn admissible_counts() {
        for (o, n) in [(vec![2], 4), (vec![3], 3), (vec![4], 8), (vec![2, 2], 32), (vec![2, 4], 64), (vec![3, 3], 27), (vec![3, 9], 81)] {
            assert_eq!(admissible_data(&o).len(), n, "{:?}", o);
        }
    }

    #[test]
    fn q_consistency_even_orders() {
        // a_i^q braids trivially with a_i only when N_i | q (u_i odd, N_i even)
        for n in [2i64, 4, 8] {
            for u in (1..2 * n).step_by(2) {
                let t = d(&[n], &[u], &[&[u / 2]]);
                for q in 1..n {
                    assert!(!braiding_of(&t, &[q], &[1]).is_one());
                }
            }
        }
    }

    fn small_theory() -> impl Strategy<Value = AnyonTheoryData> {
        prop::sample::select(vec![vec![2i64], vec![3], vec![4], vec![2, 2], vec![2, 4], vec![3, 3], vec![4, 4], vec![2, 2, 2], vec![8], vec![2, 8], vec![5], vec![7]])
            .prop_flat_map(|o| {
                let all = admissible_data(&o);
                (0..all.len()).prop_map(move |k| all[k].clone())
            })
    }

    proptest! {
        #[test]
        fn braiding_identities(t in small_theory()) {
            let els = t.elements();
            prop_assert!(els.len() <= 64);
            let trans = transparent_subgroup(&t);
            for a in &els {
                let inv: Vec<i64> = a.iter().map(|x| -x).collect();
                prop_assert_eq!(statistics_of(&t, &inv), statistics_of(&t, a));
                let a2: Vec<i64> = a.iter().map(|x| 2 * x).collect();
                prop_assert_eq!(statistics_of(&t, &a2), statistics_of(&t, a).pow(4));
                prop_assert_eq!(braiding_of(&t, a, a), statistics_of(&t, a).pow(2));
                for b in &els {
                    prop_assert_eq!(braiding_of(&t, a, b), braiding_of(&t, b, a));
                    for c in &els {
                        let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
                        prop_assert_eq!(braiding_of(&t, a, &bc), braiding_of(&t, a, b).mul(&braiding_of(&t, a, c)));
                    }
                }
                // radical of the braiding form
                let radical = els.iter().all(|b| braiding_of(&t, a, b).is_one());
                prop_assert_eq!(radical, trans.contains(a));
                if radical {
                    let th = statistics_of(&t, a);
                    prop_assert!(th.is_one() || th == PhaseRoot::new(1, 2));
                }
            }
            // TQD embedding reproduces the data
            let e = tqd_embedding(&t).unwrap();
            let tqd = e.tqd_data();
            for i in 0..t.rank() {
                for j in 0..t.rank() {
                    prop_assert_eq!(braiding_of(&tqd, &e.a[i], &e.a[j]), braiding_of(&t, &t.generator(i), &t.generator(j)));
                }
                prop_assert_eq!(statistics_of(&tqd, &e.a[i]), statistics_of(&t, &t.generator(i)));
            }
            if trans.len() == 1 {
                prop_assert!(central_charge_mod8(&t).is_ok());
            }
        }
    }
}

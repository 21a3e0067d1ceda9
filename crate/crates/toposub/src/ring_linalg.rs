//! Exact linear algebra over products of residue rings `ℤ_{m_0} × … × ℤ_{m_{n-1}}`.
//!
//! Spans are stored as Hermite-style echelon forms over the integers with the
//! modulus relation vectors `m_i e_i` implicitly present. The reduced form is
//! unique for a given span, so two generating sets of the same subgroup give
//! identical [`GroupBasis`] values.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;

#[inline]
pub(crate) fn md(a: i64, m: i64) -> i64 {
    let r = a % m;
    if r < 0 {
        r + m
    } else {
        r
    }
}

/// Extended gcd: returns `(g, s, t)` with `g = s*a + t*b`, `g > 0`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    num_integer::lcm(a, b)
}

/// A vector whose i-th coordinate lives in `ℤ_{moduli[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModVector {
    coords: Vec<i64>,
    moduli: Vec<i64>,
}

impl ModVector {
    pub fn new(coords: Vec<i64>, moduli: Vec<i64>) -> Result<Self> {
        if coords.len() != moduli.len() {
            return Err(Error::ProfileMismatch(format!(
                "{} coordinates but {} moduli",
                coords.len(),
                moduli.len()
            )));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m < 1) {
            return Err(Error::InvalidModulus(m));
        }
        let coords = coords.iter().zip(&moduli).map(|(&c, &m)| md(c, m)).collect();
        Ok(ModVector { coords, moduli })
    }

    pub fn zero(moduli: Vec<i64>) -> Self {
        ModVector { coords: vec![0; moduli.len()], moduli }
    }

    pub(crate) fn from_reduced(coords: Vec<i64>, moduli: Vec<i64>) -> Self {
        debug_assert!(coords.iter().zip(&moduli).all(|(&c, &m)| c >= 0 && c < m));
        ModVector { coords, moduli }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_profile(&self, other: &ModVector) -> Result<()> {
        if self.moduli != other.moduli {
            return Err(Error::ProfileMismatch("vectors have different moduli".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ModVector) -> Result<ModVector> {
        self.check_profile(other)?;
        let coords = (0..self.len())
            .map(|i| md(self.coords[i] + other.coords[i], self.moduli[i]))
            .collect();
        Ok(ModVector { coords, moduli: self.moduli.clone() })
    }

    pub fn scale(&self, k: i64) -> ModVector {
        let coords = (0..self.len())
            .map(|i| md(md(k, self.moduli[i]) * self.coords[i], self.moduli[i]))
            .collect();
        ModVector { coords, moduli: self.moduli.clone() }
    }

    pub fn neg(&self) -> ModVector {
        self.scale(-1)
    }

    /// Additive order of the vector.
    pub fn additive_order(&self) -> i64 {
        additive_order(&self.coords, &self.moduli)
    }
}

pub(crate) fn additive_order(coords: &[i64], moduli: &[i64]) -> i64 {
    coords
        .iter()
        .zip(moduli)
        .fold(1, |acc, (&c, &m)| lcm(acc, m / gcd(c, m)))
}

/// Incremental echelon form of a subgroup of `∏ ℤ_{m_i}`.
///
/// `rows[i]` holds the row whose leading (pivot) coordinate is `i`; `None`
/// stands for the implicit relation row `m_i e_i`.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    pub moduli: Vec<i64>,
    pub rows: Vec<Option<Vec<i64>>>,
}

impl Echelon {
    pub fn new(moduli: Vec<i64>) -> Self {
        let n = moduli.len();
        Echelon { moduli, rows: vec![None; n] }
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn pivot(&self, i: usize) -> i64 {
        match &self.rows[i] {
            Some(r) => r[i],
            None => self.moduli[i],
        }
    }

    /// Insert a vector (any integers; reduced internally).
    pub fn insert(&mut self, v: &[i64]) {
        self.insert_owned(v.to_vec());
    }

    pub fn insert_owned(&mut self, mut v: Vec<i64>) {
        let n = self.dim();
        debug_assert_eq!(v.len(), n);
        let moduli = &self.moduli;
        for j in 0..n {
            v[j] = md(v[j], moduli[j]);
        }
        let mut i = 0;
        while i < n {
            let a = v[i];
            if a == 0 {
                i += 1;
                continue;
            }
            match &mut self.rows[i] {
                None => {
                    let m = moduli[i];
                    let (g, _s, t) = ext_gcd(m, a);
                    let mg = m / g;
                    let mut row = vec![0i64; n];
                    row[i] = g;
                    for j in i + 1..n {
                        let w = v[j];
                        if w != 0 {
                            row[j] = md(t * w, moduli[j]);
                            v[j] = md(-mg * w, moduli[j]);
                        }
                    }
                    v[i] = 0;
                    self.rows[i] = Some(row);
                }
                Some(row) => {
                    let d = row[i];
                    if a % d == 0 {
                        let q = a / d;
                        for j in i..n {
                            let r = row[j];
                            if r != 0 {
                                v[j] = md(v[j] - q * r, moduli[j]);
                            }
                        }
                    } else {
                        let (g, s, t) = ext_gcd(d, a);
                        let (ag, dg) = (a / g, d / g);
                        for j in i + 1..n {
                            let (r, w) = (row[j], v[j]);
                            if r != 0 || w != 0 {
                                let mj = moduli[j];
                                row[j] = md(s * r + t * w, mj);
                                v[j] = md(ag * r - dg * w, mj);
                            }
                        }
                        row[i] = g;
                        v[i] = 0;
                    }
                }
            }
            i += 1;
        }
    }

    /// Reduce the entries above every pivot into `[0, pivot)`.
    pub fn normalize(&mut self) {
        let n = self.dim();
        for i in 0..n {
            if self.rows[i].is_none() {
                continue;
            }
            for j in i + 1..n {
                let dj = self.pivot(j);
                let e = self.rows[i].as_ref().unwrap()[j];
                let q = e.div_euclid(dj);
                if q == 0 {
                    continue;
                }
                if self.rows[j].is_none() {
                    // dj = m_j; e already reduced so q == 0
                    continue;
                }
                let (head, tail) = self.rows.split_at_mut(j);
                let ri = head[i].as_mut().unwrap();
                let rj = tail[0].as_ref().unwrap();
                for k in j..n {
                    if rj[k] != 0 {
                        ri[k] = md(ri[k] - q * rj[k], self.moduli[k]);
                    }
                }
            }
        }
    }

    /// Reduce `v` against the echelon. Returns `true` if `v` lies in the span.
    /// When `coeffs` is given, the multiple of each pivot row subtracted is
    /// accumulated there (indexed by pivot column).
    pub fn reduce(&self, v: &mut [i64], mut coeffs: Option<&mut [i64]>) -> bool {
        let n = self.dim();
        for j in 0..n {
            v[j] = md(v[j], self.moduli[j]);
        }
        for i in 0..n {
            let a = v[i];
            if a == 0 {
                continue;
            }
            match &self.rows[i] {
                None => return false,
                Some(row) => {
                    let d = row[i];
                    if a % d != 0 {
                        return false;
                    }
                    let q = a / d;
                    for j in i..n {
                        if row[j] != 0 {
                            v[j] = md(v[j] - q * row[j], self.moduli[j]);
                        }
                    }
                    if let Some(c) = coeffs.as_deref_mut() {
                        c[i] += q;
                    }
                }
            }
        }
        true
    }

    /// Canonical representative of `v` modulo the span (Hermite reduction).
    pub fn reduce_mod(&self, v: &mut [i64]) {
        let n = self.dim();
        for j in 0..n {
            v[j] = md(v[j], self.moduli[j]);
        }
        for i in 0..n {
            if let Some(row) = &self.rows[i] {
                let q = v[i].div_euclid(row[i]);
                if q != 0 {
                    for j in i..n {
                        if row[j] != 0 {
                            v[j] = md(v[j] - q * row[j], self.moduli[j]);
                        }
                    }
                }
            }
        }
    }

    /// log of the order as a product: returns `(∏ m_i, ∏ d_i)` factors.
    pub fn order(&self) -> BigUint {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for i in 0..self.dim() {
            num *= self.moduli[i] as u64;
            den *= self.pivot(i) as u64;
        }
        num / den
    }

    /// Rows with pivot column at least `start`, restricted to columns `start..`.
    pub fn tail_basis(&self, start: usize) -> GroupBasis {
        let moduli = self.moduli[start..].to_vec();
        let mut e = Echelon::new(moduli);
        for i in start..self.dim() {
            if let Some(r) = &self.rows[i] {
                e.rows[i - start] = Some(r[start..].to_vec());
            }
        }
        e.normalize();
        e.into_basis()
    }

    pub fn into_basis(self) -> GroupBasis {
        let order = self.order();
        GroupBasis { ech: self, order }
    }

    pub fn nonzero_rows(&self) -> impl Iterator<Item = (usize, &Vec<i64>)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (i, r)))
    }
}

/// Canonical basis of a subgroup of `∏ ℤ_{m_i}` together with its exact order.
#[derive(Debug, Clone)]
pub struct GroupBasis {
    pub(crate) ech: Echelon,
    order: BigUint,
}

impl PartialEq for GroupBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ech.moduli == other.ech.moduli && self.ech.rows == other.ech.rows
    }
}
impl Eq for GroupBasis {}

impl GroupBasis {
    pub fn trivial(moduli: Vec<i64>) -> Self {
        Echelon::new(moduli).into_basis()
    }

    pub fn moduli(&self) -> &[i64] {
        &self.ech.moduli
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Canonical generators in pivot order.
    pub fn generators(&self) -> Vec<ModVector> {
        self.ech
            .nonzero_rows()
            .map(|(_, r)| ModVector::from_reduced(r.clone(), self.ech.moduli.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.ech.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, v: &ModVector) -> bool {
        if v.moduli() != self.moduli() {
            return false;
        }
        let mut w = v.coords().to_vec();
        self.ech.reduce(&mut w, None)
    }

    pub(crate) fn contains_raw(&self, v: &[i64]) -> bool {
        let mut w = v.to_vec();
        self.ech.reduce(&mut w, None)
    }

    /// Is every generator of `other` in `self`?
    pub fn contains_group(&self, other: &GroupBasis) -> bool {
        other.moduli() == self.moduli()
            && other.ech.nonzero_rows().all(|(_, r)| self.contains_raw(r))
    }

    pub(crate) fn echelon(&self) -> &Echelon {
        &self.ech
    }
}

fn check_profiles<'a>(moduli: &[i64], vs: impl Iterator<Item = &'a ModVector>) -> Result<()> {
    for v in vs {
        if v.moduli() != moduli {
            return Err(Error::ProfileMismatch(
                "all vectors must share one moduli profile".into(),
            ));
        }
    }
    Ok(())
}

/// Canonical basis of the span of `vectors`. The moduli profile is taken from
/// the first vector; use [`canonical_basis_in`] for a possibly empty list.
pub fn canonical_basis(vectors: &[ModVector]) -> Result<GroupBasis> {
    let moduli = vectors.first().map(|v| v.moduli().to_vec()).unwrap_or_default();
    canonical_basis_in(moduli, vectors)
}

pub fn canonical_basis_in(moduli: Vec<i64>, vectors: &[ModVector]) -> Result<GroupBasis> {
    if let Some(&m) = moduli.iter().find(|&&m| m < 1) {
        return Err(Error::InvalidModulus(m));
    }
    check_profiles(&moduli, vectors.iter())?;
    let mut e = Echelon::new(moduli);
    for v in vectors {
        e.insert(v.coords());
    }
    e.normalize();
    Ok(e.into_basis())
}

/// Kernel of `x ↦ (Σ_i x_i·row_j[i] mod M_j)_j` on `∏ ℤ_{domain_moduli}`,
/// where `M_j` is the lcm of row j's moduli.
pub fn kernel(map_rows: &[ModVector], domain_moduli: &[i64]) -> Result<GroupBasis> {
    let n = domain_moduli.len();
    if let Some(&m) = domain_moduli.iter().find(|&&m| m < 1) {
        return Err(Error::InvalidModulus(m));
    }
    let mut out_mod = Vec::with_capacity(map_rows.len());
    for r in map_rows {
        if r.len() != n {
            return Err(Error::ProfileMismatch(format!(
                "map row has length {} but domain has {} coordinates",
                r.len(),
                n
            )));
        }
        let mj = r.moduli().iter().fold(1, |a, &b| lcm(a, b));
        for i in 0..n {
            if md(domain_moduli[i] * r.coords()[i], mj) != 0 {
                return Err(Error::ProfileMismatch(format!(
                    "map is not well defined on Z_{} (coordinate {})",
                    domain_moduli[i], i
                )));
            }
        }
        out_mod.push(mj);
    }
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|i| map_rows.iter().map(|r| r.coords()[i]).collect())
        .collect();
    Ok(kernel_raw(&cols, &out_mod, domain_moduli))
}

/// Kernel given the image of each domain basis vector (`cols[i]`, over `out_mod`).
pub(crate) fn kernel_raw(cols: &[Vec<i64>], out_mod: &[i64], domain_moduli: &[i64]) -> GroupBasis {
    let k = out_mod.len();
    let n = domain_moduli.len();
    let mut moduli = out_mod.to_vec();
    moduli.extend_from_slice(domain_moduli);
    let mut e = Echelon::new(moduli);
    for (i, c) in cols.iter().enumerate() {
        let mut v = vec![0i64; k + n];
        v[..k].copy_from_slice(c);
        v[k + i] = 1;
        e.insert_owned(v);
    }
    e.normalize();
    e.tail_basis(k)
}

/// Intersection of two spans with the same profile.
pub fn intersect(a: &GroupBasis, b: &GroupBasis) -> Result<GroupBasis> {
    if a.moduli() != b.moduli() {
        return Err(Error::ProfileMismatch("intersection of different profiles".into()));
    }
    let n = a.moduli().len();
    let mut moduli = a.moduli().to_vec();
    moduli.extend_from_slice(a.moduli());
    let mut e = Echelon::new(moduli);
    for (_, r) in a.ech.nonzero_rows() {
        let mut v = r.clone();
        v.extend_from_slice(r);
        e.insert_owned(v);
    }
    for (_, r) in b.ech.nonzero_rows() {
        let mut v = r.clone();
        v.extend(std::iter::repeat(0).take(n));
        e.insert_owned(v);
    }
    e.normalize();
    Ok(e.tail_basis(n))
}

/// Coefficients `c` (one per canonical generator, in generator order) with
/// `Σ c_k g_k = target`, or `None` if `target` is not in the span.
pub fn solve_membership(target: &ModVector, basis: &GroupBasis) -> Result<Option<Vec<i64>>> {
    if target.moduli() != basis.moduli() {
        return Err(Error::ProfileMismatch("target and basis differ in moduli".into()));
    }
    let n = target.len();
    let mut v = target.coords().to_vec();
    let mut c = vec![0i64; n];
    if !basis.ech.reduce(&mut v, Some(&mut c)) {
        return Ok(None);
    }
    Ok(Some(
        basis.ech.nonzero_rows().map(|(i, _)| c[i]).collect(),
    ))
}

/// Index `[big : small]`.
pub fn quotient_order(big: &GroupBasis, small: &GroupBasis) -> Result<BigUint> {
    if big.moduli() != small.moduli() {
        return Err(Error::ProfileMismatch("quotient of different profiles".into()));
    }
    if !big.contains_group(small) {
        return Err(Error::NotInGroup("quotient_order: small is not a subgroup of big".into()));
    }
    Ok(big.order() / small.order())
}

/// Echelon that remembers how each row is built from the inserted vectors.
///
/// Vectors are augmented with coefficient coordinates (`ℤ_{ord(g_k)}`), so the
/// rows pivoting in the tail part are exactly the relations among inputs.
#[derive(Debug, Clone)]
pub(crate) struct TrackedEchelon {
    pub ech: Echelon,
    pub n: usize,
    pub count: usize,
}

impl TrackedEchelon {
    pub fn new(moduli: &[i64], gens: &[Vec<i64>]) -> Self {
        let n = moduli.len();
        let mut all = moduli.to_vec();
        for g in gens {
            all.push(additive_order(g, moduli));
        }
        let mut ech = Echelon::new(all);
        for (k, g) in gens.iter().enumerate() {
            let mut v = vec![0i64; n + gens.len()];
            v[..n].copy_from_slice(g);
            v[n + k] = 1;
            ech.insert_owned(v);
        }
        TrackedEchelon { ech, n, count: gens.len() }
    }

    /// Express `t` in terms of the inserted vectors.
    pub fn solve(&self, t: &[i64]) -> Option<Vec<i64>> {
        let n = self.n;
        let mut v = vec![0i64; n + self.count];
        v[..n].copy_from_slice(t);
        for i in 0..n {
            v[i] = md(v[i], self.ech.moduli[i]);
        }
        for i in 0..n {
            let a = v[i];
            if a == 0 {
                continue;
            }
            let row = self.ech.rows[i].as_ref()?;
            let d = row[i];
            if a % d != 0 {
                return None;
            }
            let q = a / d;
            for j in i..v.len() {
                if row[j] != 0 {
                    v[j] = md(v[j] - q * row[j], self.ech.moduli[j]);
                }
            }
        }
        // t - Σ q row = 0 in the head, tail holds -(coefficients)
        Some((0..self.count).map(|k| md(-v[n + k], self.ech.moduli[n + k])).collect())
    }

    /// Relations among the inserted vectors (together with the order relations).
    pub fn relations(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut out = Vec::new();
        for i in n..self.ech.dim() {
            if let Some(r) = &self.ech.rows[i] {
                out.push(r[n..].to_vec());
            }
        }
        out
    }

    pub fn coefficient_moduli(&self) -> &[i64] {
        &self.ech.moduli[self.n..]
    }
}

/// Smith normal form `U A V = D` of an integer matrix (rows × cols).
#[derive(Debug, Clone)]
pub struct Smith {
    pub diag: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
}

/// Smith normal form with unimodular transforms. Entries are kept in `i128`
/// during elimination; inputs are expected to be small.
pub fn smith_normal_form(a: &[Vec<i64>], cols: usize) -> Smith {
    let rows = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ident = |k: usize| -> Vec<Vec<i128>> {
        (0..k).map(|i| (0..k).map(|j| (i == j) as i128).collect()).collect()
    };
    let mut u = ident(rows);
    let mut v = ident(cols);
    let mut vi = ident(cols);
    let r = rows.min(cols);
    for t in 0..r {
        // pick the smallest nonzero entry in the remaining block
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap(t, pi);
            u.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            vi.swap(t, pj);
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    for j in 0..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    for i in 0..rows {
                        m[i][j] -= q * m[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                    // inverse: row t of V^{-1} gains q * row j
                    for k in 0..cols {
                        vi[t][k] += q * vi[j][k];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility condition
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if m[i][j] % p != 0 {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                None => break,
                Some(i) => {
                    for j in 0..cols {
                        m[t][j] += m[i][j];
                    }
                    for j in 0..rows {
                        u[t][j] += u[i][j];
                    }
                }
            }
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
    }
    let cv = |x: Vec<Vec<i128>>| -> Vec<Vec<i64>> {
        x.into_iter().map(|r| r.into_iter().map(|e| e as i64).collect()).collect()
    };
    Smith {
        diag: (0..r).map(|i| m[i][i] as i64).collect(),
        u: cv(u),
        v: cv(v),
        v_inv: cv(vi),
    }
}

/// Structure of a finite Abelian group given by generators of orders and
/// relations. `relations` are integer vectors over the generators (each
/// generator's order relation must be included by the caller).
/// Returns `(invariant factors > 1, new generators as integer combinations)`.
pub fn abelian_structure(relations: &[Vec<i64>], ngens: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    if ngens == 0 {
        return (vec![], vec![]);
    }
    let s = smith_normal_form(relations, ngens);
    // relations R = U^{-1} D V^{-1}; the group is ℤ^n / rowspace(R) ≅ ⊕ ℤ/d_i
    // with new basis f = V^{-1} e, i.e. generator i is row i of V^{-1}.
    let mut orders = Vec::new();
    let mut gens = Vec::new();
    for i in 0..ngens {
        let d = if i < s.diag.len() { s.diag[i] } else { 0 };
        if d == 1 {
            continue;
        }
        orders.push(d);
        gens.push(s.v_inv[i].clone());
    }
    (orders, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn all_elements(moduli: &[i64]) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &m in moduli {
            let mut next = Vec::new();
            for p in &out {
                for c in 0..m {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    fn brute_span(moduli: &[i64], gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        set.insert(vec![0; moduli.len()]);
        let mut frontier: Vec<Vec<i64>> = set.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<i64> = x.iter().zip(g).zip(moduli).map(|((a, b), m)| md(a + b, *m)).collect();
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn mv(c: &[i64], m: &[i64]) -> ModVector {
        ModVector::new(c.to_vec(), m.to_vec()).unwrap()
    }

    #[test]
    fn span_of_two_in_z4() {
        let b = canonical_basis(&[mv(&[2], &[4])]).unwrap();
        assert_eq!(b.order(), &BigUint::from(2u32));
        assert_eq!(b.generators(), vec![mv(&[2], &[4])]);
    }

    #[test]
    fn full_group_z2_z3() {
        let b = canonical_basis(&[mv(&[1, 0], &[2, 3]), mv(&[0, 1], &[2, 3])]).unwrap();
        assert_eq!(b.order(), &BigUint::from(6u32));
    }

    #[test]
    fn span_matches_enumeration_z4z4() {
        let m = [4, 4];
        let b = canonical_basis(&[mv(&[2, 2], &m), mv(&[0, 2], &m)]).unwrap();
        let brute = brute_span(&m, &[vec![2, 2], vec![0, 2]]);
        assert_eq!(b.order(), &BigUint::from(brute.len()));
    }

    #[test]
    fn profile_mismatch() {
        let r = canonical_basis(&[mv(&[1], &[2]), mv(&[1], &[3])]);
        assert!(matches!(r, Err(Error::ProfileMismatch(_))));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&[mv(&[2], &[4])], &[4]).unwrap();
        assert_eq!(k.order(), &BigUint::from(2u32));
        let k = kernel(&[mv(&[0], &[6])], &[6]).unwrap();
        assert_eq!(k.order(), &BigUint::from(6u32));
        let k = kernel(&[], &[]).unwrap();
        assert_eq!(k.order(), &BigUint::from(1u32));
    }

    #[test]
    fn membership_examples() {
        let b = canonical_basis(&[mv(&[2], &[4])]).unwrap();
        assert_eq!(solve_membership(&mv(&[3], &[4]), &b).unwrap(), None);
        let c = solve_membership(&mv(&[0], &[4]), &b).unwrap().unwrap();
        assert!(c.iter().all(|&x| x == 0));
    }

    #[test]
    fn quotient_examples() {
        let big = canonical_basis(&[mv(&[1], &[4])]).unwrap();
        let small = canonical_basis(&[mv(&[2], &[4])]).unwrap();
        assert_eq!(quotient_order(&big, &small).unwrap(), BigUint::from(2u32));
        assert_eq!(quotient_order(&big, &big).unwrap(), BigUint::from(1u32));
        assert!(quotient_order(&small, &big).is_err());
    }

    #[test]
    fn smith_simple() {
        let (orders, _) = abelian_structure(&[vec![2, 0], vec![0, 4], vec![2, 2]], 2);
        let mut o = orders.clone();
        o.sort();
        assert_eq!(o, vec![2, 2]);
        let (orders, _) = abelian_structure(&[vec![3, 0], vec![0, 9], vec![0, 0]], 2);
        assert_eq!(orders, vec![3, 9]);
    }

    fn profile() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(2i64..=9, 1..=4).prop_filter("product <= 4096", |m| {
            m.iter().product::<i64>() <= 4096
        })
    }

    fn profile_and_vectors() -> impl Strategy<Value = (Vec<i64>, Vec<Vec<i64>>)> {
        profile().prop_flat_map(|m| {
            let n = m.len();
            let vecs = prop::collection::vec(prop::collection::vec(0i64..100, n), 0..4);
            (Just(m), vecs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn order_matches_enumeration((m, gens) in profile_and_vectors()) {
            let vs: Vec<ModVector> = gens.iter().map(|g| mv(g, &m)).collect();
            let b = canonical_basis_in(m.clone(), &vs).unwrap();
            let red: Vec<Vec<i64>> = vs.iter().map(|v| v.coords().to_vec()).collect();
            let brute = brute_span(&m, &red);
            prop_assert_eq!(b.order(), &BigUint::from(brute.len()));
            // membership sound and complete
            for x in all_elements(&m) {
                let t = mv(&x, &m);
                let sol = solve_membership(&t, &b).unwrap();
                prop_assert_eq!(sol.is_some(), brute.contains(&x));
                if let Some(c) = sol {
                    let mut acc = ModVector::zero(m.clone());
                    for (k, g) in b.generators().iter().enumerate() {
                        acc = acc.add(&g.scale(c[k])).unwrap();
                    }
                    prop_assert_eq!(acc, t);
                }
            }
        }

        #[test]
        fn canonical_is_unique((m, gens) in profile_and_vectors(), extra in prop::collection::vec(0i64..50, 0..4)) {
            let vs: Vec<ModVector> = gens.iter().map(|g| mv(g, &m)).collect();
            let b1 = canonical_basis_in(m.clone(), &vs).unwrap();
            // a different generating set: add combinations, reverse order
            let mut alt: Vec<ModVector> = vs.iter().rev().cloned().collect();
            if vs.len() >= 2 {
                let k = extra.first().copied().unwrap_or(1);
                alt[0] = alt[0].add(&alt[1].scale(k)).unwrap();
            }
            for (i, &k) in extra.iter().enumerate() {
                if !vs.is_empty() {
                    alt.push(vs[i % vs.len()].scale(k));
                }
            }
            let b2 = canonical_basis_in(m.clone(), &alt).unwrap();
            prop_assert_eq!(b1.generators(), b2.generators());
        }

        #[test]
        fn kernel_matches_enumeration(
            m in profile(),
            rows in prop::collection::vec(prop::collection::vec(0i64..100, 4), 0..3),
            outs in prop::collection::vec(prop::sample::select(vec![2i64, 3, 4, 6, 8, 12]), 3),
        ) {
            let n = m.len();
            // build a well-defined map: entry must satisfy m_i * a ≡ 0 mod M
            let mut map_rows = Vec::new();
            for (j, r) in rows.iter().enumerate() {
                let mj = outs[j];
                let coords: Vec<i64> = (0..n).map(|i| {
                    let step = mj / gcd(mj, m[i]);
                    md(r[i] * step, mj)
                }).collect();
                map_rows.push(mv(&coords, &vec![mj; n]));
            }
            let k = kernel(&map_rows, &m).unwrap();
            let mut count = 0u64;
            let mut image = BTreeSet::new();
            for x in all_elements(&m) {
                let y: Vec<i64> = map_rows.iter().map(|r| {
                    let mj = r.moduli()[0];
                    md((0..n).map(|i| x[i] * r.coords()[i]).sum::<i64>(), mj)
                }).collect();
                let zero = y.iter().all(|&c| c == 0);
                if zero { count += 1; }
                prop_assert_eq!(zero, k.contains(&mv(&x, &m)));
                image.insert(y);
            }
            prop_assert_eq!(k.order(), &BigUint::from(count));
            let dom: u64 = m.iter().product::<i64>() as u64;
            prop_assert_eq!(count * image.len() as u64, dom);
        }

        #[test]
        fn intersection_matches_enumeration((m, gens) in profile_and_vectors(), others in prop::collection::vec(prop::collection::vec(0i64..100, 4), 0..3)) {
            let n = m.len();
            let a = canonical_basis_in(m.clone(), &gens.iter().map(|g| mv(g, &m)).collect::<Vec<_>>()).unwrap();
            let ov: Vec<ModVector> = others.iter().map(|o| mv(&o[..n], &m)).collect();
            let b = canonical_basis_in(m.clone(), &ov).unwrap();
            let c = intersect(&a, &b).unwrap();
            let mut count = 0u64;
            for x in all_elements(&m) {
                let t = mv(&x, &m);
                let inside = a.contains(&t) && b.contains(&t);
                if inside { count += 1; }
                prop_assert_eq!(inside, c.contains(&t));
            }
            prop_assert_eq!(c.order(), &BigUint::from(count));
        }

        #[test]
        fn tracked_solve_and_relations((m, gens) in profile_and_vectors()) {
            let red: Vec<Vec<i64>> = gens.iter().map(|g| mv(g, &m).coords().to_vec()).collect();
            let t = TrackedEchelon::new(&m, &red);
            let brute = brute_span(&m, &red);
            for x in brute.iter() {
                let c = t.solve(x).expect("member");
                let y: Vec<i64> = (0..m.len()).map(|i| md(red.iter().zip(&c).map(|(g, k)| g[i] * k).sum::<i64>(), m[i])).collect();
                prop_assert_eq!(&y, x);
            }
            for r in t.relations() {
                let y: Vec<i64> = (0..m.len()).map(|i| md(red.iter().zip(&r).map(|(g, k)| g[i] * k).sum::<i64>(), m[i])).collect();
                prop_assert!(y.iter().all(|&c| c == 0));
            }
        }

        #[test]
        fn smith_structure_matches_order(rel in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 3..5)) {
            let mut rels = rel.clone();
            for i in 0..3 { let mut r = vec![0; 3]; r[i] = 12; rels.push(r); }
            let (orders, gens) = abelian_structure(&rels, 3);
            // |ℤ^3 / R| equals the product of invariant factors
            let moduli = vec![12i64; 3];
            let span = canonical_basis_in(moduli.clone(), &rels.iter().map(|r| mv(r, &moduli)).collect::<Vec<_>>()).unwrap();
            let total: u64 = 12 * 12 * 12;
            let idx = total / span.order().to_u64_digits().first().copied().unwrap_or(1);
            prop_assert_eq!(orders.iter().product::<i64>() as u64, idx);
            // each new generator has exactly the claimed order in the quotient
            for (g, &d) in gens.iter().zip(&orders) {
                let v = |k: i64| mv(&g.iter().map(|x| x * k).collect::<Vec<_>>(), &moduli);
                prop_assert!(span.contains(&v(d)));
                for k in 1..d { prop_assert!(!span.contains(&v(k))); }
            }
        }
    }
}

//! Subsystem-code analysis on a torus: gauge span, stabilizers (center) with
//! a consistent phase lift, locally generated stabilizers, bare logicals and
//! the counting identity.

use crate::error::{Error, Result};
use crate::lattice::{
    all_translates, CodeDescriptor, GeneratorTemplate, Region, TorusLattice, DEFAULT_TEMPLATE_WINDOW,
};
use crate::pauli::{multiply, power, PauliOperator, PhaseRoot, QuditSystem};
use crate::ring_linalg::{
    abelian_structure, intersect, kernel_raw, md, Echelon, GroupBasis, TrackedEchelon,
};
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::Arc;

/// Default side of the box used to collect local stabilizers.
pub const DEFAULT_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct TorusCode {
    pub name: String,
    pub lattice: TorusLattice,
    pub gauge_templates: Vec<GeneratorTemplate>,
    pub extra_gauge: Vec<PauliOperator>,
}

impl TorusCode {
    pub fn new(name: &str, lattice: TorusLattice, templates: Vec<GeneratorTemplate>) -> Result<Self> {
        Self::with_template_window(name, lattice, templates, DEFAULT_TEMPLATE_WINDOW)
    }

    pub fn with_template_window(
        name: &str,
        lattice: TorusLattice,
        templates: Vec<GeneratorTemplate>,
        max_diameter: usize,
    ) -> Result<Self> {
        let mut ts = Vec::with_capacity(templates.len());
        for t in &templates {
            let t = t.normalized(&lattice)?;
            if t.diameter() > max_diameter {
                return Err(Error::InvalidLattice(format!(
                    "template of diameter {} exceeds the window {}",
                    t.diameter(),
                    max_diameter
                )));
            }
            let q = lattice.system().phase_modulus() as i64;
            if t.phase.exponent_in(q).is_none() {
                return Err(Error::PhaseNotRepresentable { num: t.phase.num, den: t.phase.den, modulus: q as u64 });
            }
            ts.push(t);
        }
        Ok(TorusCode { name: name.to_string(), lattice, gauge_templates: ts, extra_gauge: vec![] })
    }

    pub fn from_descriptor(name: &str, d: &CodeDescriptor) -> Result<Self> {
        let lattice = TorusLattice::new(d.lx, d.ly, d.slots.clone())?;
        Self::new(name, lattice, d.templates.clone())
    }

    pub fn from_json(name: &str, text: &str) -> Result<Self> {
        let d: CodeDescriptor = serde_json::from_str(text)?;
        Self::from_descriptor(name, &d)
    }

    pub fn descriptor(&self) -> CodeDescriptor {
        CodeDescriptor {
            lx: self.lattice.lx(),
            ly: self.lattice.ly(),
            slots: self.lattice.slots().to_vec(),
            templates: self.gauge_templates.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.descriptor()).expect("descriptor serializes")
    }

    /// Same templates on another torus. Codes with non-translation-invariant
    /// extras cannot be resized.
    pub fn resized(&self, lx: usize, ly: usize) -> Result<Self> {
        if !self.extra_gauge.is_empty() {
            return Err(Error::Unsupported("cannot resize a code with extra gauge operators".into()));
        }
        Ok(TorusCode {
            name: self.name.clone(),
            lattice: self.lattice.resized(lx, ly)?,
            gauge_templates: self.gauge_templates.clone(),
            extra_gauge: vec![],
        })
    }

    pub fn system(&self) -> &Arc<QuditSystem> {
        self.lattice.system()
    }

    pub fn is_translation_invariant(&self) -> bool {
        self.extra_gauge.is_empty()
    }

    pub fn gauge_generators(&self) -> Result<Vec<PauliOperator>> {
        let mut out = Vec::new();
        for t in &self.gauge_templates {
            out.extend(all_translates(t, &self.lattice)?);
        }
        out.extend(self.extra_gauge.iter().cloned());
        Ok(out)
    }

    /// Distinct nonzero symplectic vectors of the gauge generators.
    pub(crate) fn gauge_vectors(&self) -> Result<Vec<Vec<i64>>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in self.gauge_generators()? {
            let v = g.symplectic();
            if v.iter().any(|&c| c != 0) && seen.insert(v.clone()) {
                out.push(v);
            }
        }
        Ok(out)
    }
}

impl TorusCode {
    /// Canonical basis of the gauge span (phases dropped).
    pub fn gauge_span(&self) -> Result<GroupBasis> {
        Ok(span_of(self.system().symplectic_moduli(), &self.gauge_vectors()?))
    }

    /// Whether two codes on the same lattice generate the same gauge span.
    pub fn same_gauge_span(&self, other: &TorusCode) -> Result<bool> {
        if self.lattice.slots() != other.lattice.slots() || self.lattice.lx() != other.lattice.lx() || self.lattice.ly() != other.lattice.ly() {
            return Ok(false);
        }
        let (a, b) = (self.gauge_span()?, other.gauge_span()?);
        Ok(a.order() == b.order() && a.contains_group(&b))
    }
}

/// Image of each symplectic coordinate under `v ↦ (⟨g_k, v⟩)_k` over `ℤ_M`.
pub(crate) fn commutation_columns(sys: &QuditSystem, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = sys.lcm() as i64;
    let n = sys.len();
    let mut cols = vec![vec![0i64; gens.len()]; 2 * n];
    for (k, g) in gens.iter().enumerate() {
        for s in 0..n {
            let (gx, gz) = (g[2 * s], g[2 * s + 1]);
            if gx == 0 && gz == 0 {
                continue;
            }
            let u = m / sys.dim(s) as i64;
            // ⟨g, e_{x_s}⟩ = u·g_z, ⟨g, e_{z_s}⟩ = -u·g_x
            cols[2 * s][k] = md(u * gz, m);
            cols[2 * s + 1][k] = md(-u * gx, m);
        }
    }
    cols
}

/// Commutator exponent of two symplectic vectors over `ℤ_lcm`.
pub(crate) fn symplectic_form(sys: &QuditSystem, a: &[i64], b: &[i64]) -> i64 {
    let m = sys.lcm() as i64;
    let mut k = 0;
    for s in 0..sys.len() {
        let (ax, az, bx, bz) = (a[2 * s], a[2 * s + 1], b[2 * s], b[2 * s + 1]);
        if (ax | az) != 0 && (bx | bz) != 0 {
            k += (m / sys.dim(s) as i64) * (az * bx - ax * bz);
        }
    }
    md(k, m)
}

/// All `v` commuting with every vector of `gens`.
pub(crate) fn centralizer(sys: &QuditSystem, gens: &[Vec<i64>]) -> GroupBasis {
    let cols = commutation_columns(sys, gens);
    let out_mod = vec![sys.lcm() as i64; gens.len()];
    kernel_raw(&cols, &out_mod, &sys.symplectic_moduli())
}

pub(crate) fn span_of(moduli: Vec<i64>, vs: &[Vec<i64>]) -> GroupBasis {
    let mut e = Echelon::new(moduli);
    for v in vs {
        e.insert(v);
    }
    e.normalize();
    e.into_basis()
}

pub(crate) fn basis_rows(b: &GroupBasis) -> Vec<Vec<i64>> {
    b.echelon().nonzero_rows().map(|(_, r)| r.clone()).collect()
}

/// Subset of `candidates` that together with `base` spans the same group as
/// `base ∪ candidates`, chosen greedily in order.
pub(crate) fn greedy_generators(candidates: &[Vec<i64>], base: &GroupBasis) -> Vec<Vec<i64>> {
    let mut e = base.echelon().clone();
    let mut out = Vec::new();
    for c in candidates {
        let mut w = c.clone();
        if !e.reduce(&mut w, None) {
            e.insert(c);
            out.push(c.clone());
        }
    }
    out
}

/// Invariant factors of `span(big) / small` and the generating combinations.
pub(crate) fn quotient_structure(big: &[Vec<i64>], small: &GroupBasis) -> (Vec<i64>, Vec<Vec<i64>>) {
    let moduli = small.moduli().to_vec();
    let n = moduli.len();
    let k = big.len();
    let mut all = moduli.clone();
    for b in big {
        all.push(crate::ring_linalg::additive_order(b, &moduli));
    }
    let mut e = Echelon::new(all.clone());
    for (_, r) in small.echelon().nonzero_rows() {
        let mut v = r.clone();
        v.extend(std::iter::repeat(0).take(k));
        e.insert_owned(v);
    }
    for (a, b) in big.iter().enumerate() {
        let mut v = b.clone();
        v.extend(std::iter::repeat(0).take(k));
        v[n + a] = 1;
        e.insert_owned(v);
    }
    let mut rels: Vec<Vec<i64>> = Vec::new();
    for i in n..n + k {
        if let Some(r) = &e.rows[i] {
            rels.push(r[n..].to_vec());
        }
        let mut o = vec![0; k];
        o[i - n] = all[i];
        rels.push(o);
    }
    abelian_structure(&rels, k)
}

/// Exact group orders of the counting identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingRecord {
    pub dim_h: BigUint,
    pub order_s: BigUint,
    pub index_g_over_s: BigUint,
    pub index_l_over_s: BigUint,
    pub identity_holds: bool,
}

impl CountingRecord {
    fn new(dim_h: BigUint, order_s: BigUint, g: BigUint, l: BigUint) -> Self {
        let identity_holds = &dim_h * &dim_h == &order_s * &order_s * &g * &l;
        CountingRecord { dim_h, order_s, index_g_over_s: g, index_l_over_s: l, identity_holds }
    }
}

/// Everything the analyzer derives from a code.
#[derive(Debug, Clone)]
pub struct CodeAnalysis {
    pub code: TorusCode,
    pub gauge_basis: GroupBasis,
    pub stabilizer_basis: GroupBasis,
    pub local_stabilizer_basis: GroupBasis,
    pub bare_logical_basis: GroupBasis,
    /// Phase `ζ_a` of each stabilizer generator: the lifted stabilizer is
    /// `ζ_a · ∏ X^x Z^z` of the canonical generator (normal form).
    pub stabilizer_phases: Vec<PhaseRoot>,
    pub counting: CountingRecord,
    pub window: usize,
    /// Invariant factors of the stabilizer group modulo local stabilizers.
    pub nonlocal_stabilizer_orders: Vec<i64>,
    pub(crate) gauge_vectors: Vec<Vec<i64>>,
    stab_tracked: Arc<TrackedEchelon>,
}

fn lift_phases(sys: &Arc<QuditSystem>, gens: &[Vec<i64>]) -> Result<(Vec<PhaseRoot>, TrackedEchelon)> {
    let moduli = sys.symplectic_moduli();
    let tracked = TrackedEchelon::new(&moduli, gens);
    let k = gens.len();
    let q = sys.phase_modulus() as i64;
    let ords = tracked.coefficient_moduli().to_vec();
    let mut rels = tracked.relations();
    for (a, &o) in ords.iter().enumerate() {
        let mut r = vec![0; k];
        r[a] = o;
        rels.push(r);
    }
    let ops: Vec<PauliOperator> = gens.iter().map(|g| PauliOperator::from_symplectic(sys, 0, g)).collect();
    // target: Σ r_a ζ_a ≡ -phase(∏ P_a^{r_a})
    let mut target = Vec::with_capacity(rels.len());
    for r in &rels {
        let mut p = PauliOperator::identity(sys);
        for (a, &c) in r.iter().enumerate() {
            if c != 0 {
                p = multiply(&p, &power(&ops[a], c))?;
            }
        }
        if !p.is_scalar() {
            return Err(Error::InvalidGaugeGroup("relation does not close to a scalar".into()));
        }
        target.push(md(-(p.phase_exp() as i64), q));
    }
    let cols: Vec<Vec<i64>> = (0..k).map(|a| rels.iter().map(|r| md(r[a], q)).collect()).collect();
    let qm = vec![q; rels.len()];
    let solver = TrackedEchelon::new(&qm, &cols);
    let zeta = solver.solve(&target).ok_or_else(|| {
        Error::InvalidGaugeGroup("the generated group contains a nontrivial scalar".into())
    })?;
    // canonical representative modulo homogeneous solutions
    let hom = kernel_raw(&cols, &qm, &vec![q; k]);
    let mut z = zeta.clone();
    hom.echelon().reduce_mod(&mut z);
    Ok((z.iter().map(|&c| PhaseRoot::new(c, q)).collect(), tracked))
}

/// Stabilizer span (center of the gauge span) and its phase lift.
pub fn stabilizer_group(code: &TorusCode) -> Result<(GroupBasis, Vec<PhaseRoot>)> {
    let sys = code.system();
    let gv = code.gauge_vectors()?;
    let g = span_of(sys.symplectic_moduli(), &gv);
    let l = centralizer(sys, &gv);
    let s = intersect(&g, &l)?;
    let (ph, _) = lift_phases(sys, &basis_rows(&s))?;
    Ok((s, ph))
}

pub fn bare_logical_group(code: &TorusCode) -> Result<GroupBasis> {
    Ok(centralizer(code.system(), &code.gauge_vectors()?))
}

/// Stabilizers supported in some `window × window` box, with all translates.
pub fn local_stabilizer_group(code: &TorusCode, window: usize) -> Result<GroupBasis> {
    let (s, _) = stabilizer_group(code)?;
    Ok(local_from(code, &s, window))
}

fn effective_window(l: &TorusLattice, window: usize) -> usize {
    window.min(l.lx().min(l.ly()) / 2).max(1)
}

/// Elements of `span` supported inside `region`.
pub(crate) fn restrict_to_region(l: &TorusLattice, span: &GroupBasis, region: &Region) -> Vec<Vec<i64>> {
    let inside: HashSet<usize> = region.sites(l).into_iter().collect();
    let n = l.num_sites();
    let mut order: Vec<usize> = Vec::with_capacity(2 * n);
    for s in 0..n {
        if !inside.contains(&s) {
            order.extend([2 * s, 2 * s + 1]);
        }
    }
    let n_out = order.len();
    for s in 0..n {
        if inside.contains(&s) {
            order.extend([2 * s, 2 * s + 1]);
        }
    }
    let moduli: Vec<i64> = order.iter().map(|&c| span.moduli()[c]).collect();
    let mut e = Echelon::new(moduli);
    for (_, r) in span.echelon().nonzero_rows() {
        e.insert_owned(order.iter().map(|&c| r[c]).collect());
    }
    let mut out = Vec::new();
    for i in n_out..2 * n {
        if let Some(r) = &e.rows[i] {
            let mut v = vec![0i64; 2 * n];
            for (p, &c) in order.iter().enumerate() {
                v[c] = r[p];
            }
            out.push(v);
        }
    }
    out
}

fn local_from(code: &TorusCode, s: &GroupBasis, window: usize) -> GroupBasis {
    let l = &code.lattice;
    let w = effective_window(l, window);
    let mut seeds: Vec<Vec<i64>> = Vec::new();
    if code.is_translation_invariant() {
        let b = restrict_to_region(l, s, &Region::rect(l, 0, 0, w, w));
        for y in 0..l.ly() as i64 {
            for x in 0..l.lx() as i64 {
                for v in &b {
                    seeds.push(l.translate_vec(v, x, y));
                }
            }
        }
    } else {
        for y in 0..l.ly() as i64 {
            for x in 0..l.lx() as i64 {
                seeds.extend(restrict_to_region(l, s, &Region::rect(l, x, y, w, w)));
            }
        }
    }
    let mut seen = HashSet::new();
    seeds.retain(|v| seen.insert(v.clone()));
    span_of(s.moduli().to_vec(), &seeds)
}

impl CodeAnalysis {
    pub fn new(code: &TorusCode, window: usize) -> Result<Self> {
        let sys = code.system().clone();
        let gv = code.gauge_vectors()?;
        let moduli = sys.symplectic_moduli();
        let g = span_of(moduli.clone(), &gv);
        let l = centralizer(&sys, &gv);
        let s = intersect(&g, &l)?;
        let srows = basis_rows(&s);
        let (phases, tracked) = lift_phases(&sys, &srows)?;
        let local = local_from(code, &s, window);
        let (nonlocal, _) = quotient_structure(&greedy_generators(&srows, &local), &local);
        let dim_h = sys.dims().iter().fold(BigUint::one(), |a, &d| a * d);
        let counting = CountingRecord::new(
            dim_h,
            s.order().clone(),
            g.order() / s.order(),
            l.order() / s.order(),
        );
        Ok(CodeAnalysis {
            code: code.clone(),
            gauge_basis: g,
            stabilizer_basis: s,
            local_stabilizer_basis: local,
            bare_logical_basis: l,
            stabilizer_phases: phases,
            counting,
            window: effective_window(&code.lattice, window),
            nonlocal_stabilizer_orders: nonlocal,
            gauge_vectors: gv,
            stab_tracked: Arc::new(tracked),
        })
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.code.lattice
    }

    pub fn system(&self) -> &Arc<QuditSystem> {
        self.code.system()
    }

    pub fn nonlocal_stabilizer_count(&self) -> usize {
        self.nonlocal_stabilizer_orders.len()
    }

    /// The stabilizer group element (with its assigned phase) whose symplectic
    /// vector is `v`, or `None` if `v` is not in the stabilizer span.
    pub fn stabilizer_operator(&self, v: &[i64]) -> Option<PauliOperator> {
        let c = self.stab_tracked.solve(v)?;
        let sys = self.system();
        let q = sys.phase_modulus() as i64;
        let mut p = PauliOperator::identity(sys);
        for ((a, row), &k) in basis_rows(&self.stabilizer_basis).iter().enumerate().zip(&c) {
            if k != 0 {
                let ph = self.stabilizer_phases[a].exponent_in(q).unwrap();
                let op = PauliOperator::from_symplectic(sys, ph, row);
                p = multiply(&p, &power(&op, k)).unwrap();
            }
        }
        Some(p)
    }

    pub fn report(&self) -> AnalysisReport {
        AnalysisReport {
            code: self.code.name.clone(),
            lx: self.lattice().lx(),
            ly: self.lattice().ly(),
            dim_h: self.counting.dim_h.to_string(),
            order_s: self.counting.order_s.to_string(),
            index_g_over_s: self.counting.index_g_over_s.to_string(),
            index_l_over_s: self.counting.index_l_over_s.to_string(),
            identity_holds: self.counting.identity_holds,
            nonlocal_stabilizer_count: self.nonlocal_stabilizer_count(),
            window: self.window,
        }
    }

    /// Multiply `t` by a local stabilizer so that the result avoids `region`.
    pub fn clean_operator(&self, t: &PauliOperator, region: &Region) -> Result<PauliOperator> {
        let l = self.lattice();
        let tv = t.symplectic();
        if symplectic_violations(self.system(), &self.gauge_vectors, &tv) {
            return Err(Error::NotALogical("operator does not commute with the gauge group".into()));
        }
        let inside: Vec<usize> = region.sites(l);
        if inside.iter().all(|&s| tv[2 * s] == 0 && tv[2 * s + 1] == 0) {
            return Ok(t.clone());
        }
        let s = clean_vector(l, &self.local_stabilizer_basis, &tv, region)
            .ok_or_else(|| Error::NotInGroup("operator cannot be cleaned out of the region".into()))?;
        let neg: Vec<i64> = s.iter().map(|&c| -c).collect();
        let st = self.stabilizer_operator(&neg).expect("local stabilizers lie in the stabilizer span");
        multiply(t, &st)
    }
}

fn symplectic_violations(sys: &QuditSystem, gens: &[Vec<i64>], v: &[i64]) -> bool {
    gens.iter().any(|g| symplectic_form(sys, g, v) != 0)
}

/// Find `s` in `span` with `s = v` on every site of `region`.
pub(crate) fn clean_vector(l: &TorusLattice, span: &GroupBasis, v: &[i64], region: &Region) -> Option<Vec<i64>> {
    let inside: HashSet<usize> = region.sites(l).into_iter().collect();
    let n = l.num_sites();
    let mut order: Vec<usize> = Vec::with_capacity(2 * n);
    for s in 0..n {
        if inside.contains(&s) {
            order.extend([2 * s, 2 * s + 1]);
        }
    }
    let n_in = order.len();
    for s in 0..n {
        if !inside.contains(&s) {
            order.extend([2 * s, 2 * s + 1]);
        }
    }
    let moduli: Vec<i64> = order.iter().map(|&c| span.moduli()[c]).collect();
    let mut e = Echelon::new(moduli.clone());
    for (_, r) in span.echelon().nonzero_rows() {
        e.insert_owned(order.iter().map(|&c| r[c]).collect());
    }
    let mut t: Vec<i64> = order.iter().map(|&c| v[c]).collect();
    let mut acc = vec![0i64; 2 * n];
    for i in 0..n_in {
        let a = md(t[i], moduli[i]);
        if a == 0 {
            continue;
        }
        let row = e.rows[i].as_ref()?;
        if a % row[i] != 0 {
            return None;
        }
        let q = a / row[i];
        for j in i..2 * n {
            if row[j] != 0 {
                t[j] = md(t[j] - q * row[j], moduli[j]);
                acc[j] = md(acc[j] + q * row[j], moduli[j]);
            }
        }
    }
    let mut s = vec![0i64; 2 * n];
    for (p, &c) in order.iter().enumerate() {
        s[c] = acc[p];
    }
    Some(s)
}

/// JSON counting report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub code: String,
    #[serde(rename = "Lx")]
    pub lx: usize,
    #[serde(rename = "Ly")]
    pub ly: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: String,
    #[serde(rename = "order_S")]
    pub order_s: String,
    #[serde(rename = "index_G_over_S")]
    pub index_g_over_s: String,
    #[serde(rename = "index_L_over_S")]
    pub index_l_over_s: String,
    pub identity_holds: bool,
    pub nonlocal_stabilizer_count: usize,
    pub window: usize,
}

pub fn counting_report(code: &TorusCode) -> Result<CountingRecord> {
    let sys = code.system();
    let gv = code.gauge_vectors()?;
    let g = span_of(sys.symplectic_moduli(), &gv);
    let l = centralizer(sys, &gv);
    let s = intersect(&g, &l)?;
    let dim_h = sys.dims().iter().fold(BigUint::one(), |a, &d| a * d);
    Ok(CountingRecord::new(dim_h, s.order().clone(), g.order() / s.order(), l.order() / s.order()))
}

/// Enlarge the gauge group by the templates `f`.
pub fn gauge_out(code: &TorusCode, f: &[GeneratorTemplate]) -> Result<TorusCode> {
    let mut ts = code.gauge_templates.clone();
    for t in f {
        ts.push(t.normalized(&code.lattice)?);
    }
    Ok(TorusCode { gauge_templates: ts, ..code.clone() })
}

/// Replace the gauge group by the centralizer of the Abelian set `f` inside it.
pub fn gauge_fix(code: &TorusCode, f: &[PauliOperator]) -> Result<TorusCode> {
    let sys = code.system();
    let fv: Vec<Vec<i64>> = f.iter().map(|p| p.symplectic()).collect();
    for a in &fv {
        for b in &fv {
            if symplectic_form(sys, a, b) != 0 {
                return Err(Error::InvalidGaugeGroup("gauge-fixing set is not Abelian".into()));
            }
        }
    }
    let gv = code.gauge_vectors()?;
    let g = span_of(sys.symplectic_moduli(), &gv);
    for v in &fv {
        if !g.contains_raw(v) {
            return Err(Error::NotInGroup("gauge-fixing operator is not in the gauge group".into()));
        }
    }
    let c = centralizer(sys, &fv);
    let new_g = intersect(&g, &c)?;
    let extra = basis_rows(&new_g).iter().map(|r| PauliOperator::from_symplectic(sys, 0, r)).collect();
    Ok(TorusCode {
        name: code.name.clone(),
        lattice: code.lattice.clone(),
        gauge_templates: vec![],
        extra_gauge: extra,
    })
}

/// Convenience wrapper around [`CodeAnalysis::clean_operator`].
pub fn clean_operator(code: &TorusCode, t: &PauliOperator, region: &Region) -> Result<PauliOperator> {
    CodeAnalysis::new(code, DEFAULT_WINDOW)?.clean_operator(t, region)
}

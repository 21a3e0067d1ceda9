//! Periodic square lattices with multi-slot unit cells, translation-invariant
//! generator templates and cell regions.

use crate::error::{Error, Result};
use crate::pauli::{multiply, PauliOperator, PhaseRoot, QuditSystem};
use crate::ring_linalg::md;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Default bound on the linear size of a template, in unit cells.
pub const DEFAULT_TEMPLATE_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub name: String,
    pub dim: u32,
}

impl Slot {
    pub fn new(name: &str, dim: u32) -> Self {
        Slot { name: name.to_string(), dim }
    }
}

/// An `Lx × Ly` torus of unit cells, each holding the same list of slots.
#[derive(Debug, Clone)]
pub struct TorusLattice {
    lx: usize,
    ly: usize,
    slots: Vec<Slot>,
    system: Arc<QuditSystem>,
}

impl PartialEq for TorusLattice {
    fn eq(&self, o: &Self) -> bool {
        self.lx == o.lx && self.ly == o.ly && self.slots == o.slots
    }
}

impl TorusLattice {
    pub fn new(lx: usize, ly: usize, slots: Vec<Slot>) -> Result<Self> {
        if lx < 2 || ly < 2 {
            return Err(Error::InvalidLattice(format!("torus {}x{} must be at least 2x2", lx, ly)));
        }
        if slots.is_empty() {
            return Err(Error::InvalidLattice("unit cell has no slots".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &slots {
            if !seen.insert(s.name.clone()) {
                return Err(Error::DuplicateSlot(s.name.clone()));
            }
            if s.dim < 2 {
                return Err(Error::InvalidDimension(s.dim));
            }
            if s.name.is_empty() || s.name.contains(|c: char| c.is_whitespace() || "(),".contains(c)) {
                return Err(Error::InvalidLattice(format!("bad slot name `{}`", s.name)));
            }
        }
        let mut labels = Vec::with_capacity(lx * ly * slots.len());
        let mut dims = Vec::with_capacity(lx * ly * slots.len());
        for y in 0..ly {
            for x in 0..lx {
                for s in &slots {
                    labels.push(format!("{},{},{}", x, y, s.name));
                    dims.push(s.dim);
                }
            }
        }
        let system = QuditSystem::new(labels, dims)?;
        Ok(TorusLattice { lx, ly, slots, system })
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn system(&self) -> &Arc<QuditSystem> {
        &self.system
    }

    pub fn num_cells(&self) -> usize {
        self.lx * self.ly
    }

    pub fn num_sites(&self) -> usize {
        self.lx * self.ly * self.slots.len()
    }

    pub fn slot_index(&self, name: &str) -> Result<usize> {
        self.slots
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::UnknownSlot(name.to_string()))
    }

    pub fn wrap(&self, x: i64, y: i64) -> (usize, usize) {
        (md(x, self.lx as i64) as usize, md(y, self.ly as i64) as usize)
    }

    pub fn site(&self, x: i64, y: i64, slot: usize) -> usize {
        let (x, y) = self.wrap(x, y);
        (y * self.lx + x) * self.slots.len() + slot
    }

    /// `(x, y, slot)` of a site index.
    pub fn site_coords(&self, site: usize) -> (usize, usize, usize) {
        let ns = self.slots.len();
        let cell = site / ns;
        (cell % self.lx, cell / self.lx, site % ns)
    }

    /// Same geometry, different torus size.
    pub fn resized(&self, lx: usize, ly: usize) -> Result<Self> {
        TorusLattice::new(lx, ly, self.slots.clone())
    }

    /// Translate an operator by `(dx, dy)` cells.
    pub fn translate(&self, op: &PauliOperator, dx: i64, dy: i64) -> PauliOperator {
        let mut v = vec![0i64; 2 * self.num_sites()];
        for &(s, x, z) in op.terms() {
            let (cx, cy, k) = self.site_coords(s);
            let t = self.site(cx as i64 + dx, cy as i64 + dy, k);
            v[2 * t] = x as i64;
            v[2 * t + 1] = z as i64;
        }
        PauliOperator::from_symplectic(&self.system, op.phase_exp() as i64, &v)
    }

    /// Translate a symplectic vector by `(dx, dy)` cells.
    pub(crate) fn translate_vec(&self, v: &[i64], dx: i64, dy: i64) -> Vec<i64> {
        let ns = self.slots.len();
        let mut out = vec![0i64; v.len()];
        for cell in 0..self.num_cells() {
            let (cx, cy) = (cell % self.lx, cell / self.lx);
            for k in 0..ns {
                let s = cell * ns + k;
                if v[2 * s] != 0 || v[2 * s + 1] != 0 {
                    let t = self.site(cx as i64 + dx, cy as i64 + dy, k);
                    out[2 * t] = v[2 * s];
                    out[2 * t + 1] = v[2 * s + 1];
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TemplateTerm {
    pub dx: i64,
    pub dy: i64,
    pub slot: String,
    pub x: i64,
    pub z: i64,
}

impl TemplateTerm {
    pub fn new(dx: i64, dy: i64, slot: &str, x: i64, z: i64) -> Self {
        TemplateTerm { dx, dy, slot: slot.to_string(), x, z }
    }
}

/// `phase · ∏ X^x Z^z` over the listed terms, multiplied in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorTemplate {
    pub phase: PhaseRoot,
    pub terms: Vec<TemplateTerm>,
}

impl GeneratorTemplate {
    pub fn new(terms: Vec<TemplateTerm>) -> Self {
        GeneratorTemplate { phase: PhaseRoot::ONE, terms }
    }

    pub fn with_phase(mut self, phase: PhaseRoot) -> Self {
        self.phase = phase;
        self
    }

    /// Linear size in cells: `max(Δx, Δy) + 1` over the terms.
    pub fn diameter(&self) -> usize {
        if self.terms.is_empty() {
            return 0;
        }
        let span = |f: fn(&TemplateTerm) -> i64| {
            let lo = self.terms.iter().map(f).min().unwrap();
            let hi = self.terms.iter().map(f).max().unwrap();
            (hi - lo + 1) as usize
        };
        span(|t| t.dx).max(span(|t| t.dy))
    }

    /// Reduce exponents into `[0, dim)` and drop identity terms.
    pub fn normalized(&self, lattice: &TorusLattice) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &self.terms {
            let d = lattice.slots[lattice.slot_index(&t.slot)?].dim as i64;
            let (x, z) = (md(t.x, d), md(t.z, d));
            if x != 0 || z != 0 {
                terms.push(TemplateTerm { x, z, ..t.clone() });
            }
        }
        Ok(GeneratorTemplate { phase: self.phase, terms })
    }

    /// Template of the same operator with every offset shifted.
    pub fn shifted(&self, dx: i64, dy: i64) -> Self {
        GeneratorTemplate {
            phase: self.phase,
            terms: self
                .terms
                .iter()
                .map(|t| TemplateTerm { dx: t.dx + dx, dy: t.dy + dy, ..t.clone() })
                .collect(),
        }
    }
}

/// The operator of `template` placed at cell `base`, offsets wrapped.
pub fn instantiate(template: &GeneratorTemplate, lattice: &TorusLattice, base: (i64, i64)) -> Result<PauliOperator> {
    let sys = lattice.system();
    let q = sys.phase_modulus() as i64;
    let k = template.phase.exponent_in(q).ok_or(Error::PhaseNotRepresentable {
        num: template.phase.num,
        den: template.phase.den,
        modulus: q as u64,
    })?;
    let mut p = PauliOperator::scalar(sys, k);
    for t in &template.terms {
        let slot = lattice.slot_index(&t.slot)?;
        let s = lattice.site(base.0 + t.dx, base.1 + t.dy, slot);
        p = multiply(&p, &PauliOperator::single(sys, s, t.x, t.z))?;
    }
    Ok(p)
}

/// One operator per unit cell, row-major (`y` outer, `x` inner).
pub fn all_translates(template: &GeneratorTemplate, lattice: &TorusLattice) -> Result<Vec<PauliOperator>> {
    let mut out = Vec::with_capacity(lattice.num_cells());
    for y in 0..lattice.ly() as i64 {
        for x in 0..lattice.lx() as i64 {
            out.push(instantiate(template, lattice, (x, y))?);
        }
    }
    Ok(out)
}

/// A set of unit cells (all slots of each cell included).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    cells: BTreeSet<(usize, usize)>,
}

impl Region {
    pub fn empty() -> Self {
        Region::default()
    }

    pub fn all(l: &TorusLattice) -> Self {
        let mut cells = BTreeSet::new();
        for y in 0..l.ly() {
            for x in 0..l.lx() {
                cells.insert((x, y));
            }
        }
        Region { cells }
    }

    pub fn from_cells(l: &TorusLattice, cells: impl IntoIterator<Item = (i64, i64)>) -> Self {
        Region { cells: cells.into_iter().map(|(x, y)| l.wrap(x, y)).collect() }
    }

    /// Cells `[x0, x0+wx) × [y0, y0+wy)`, wrapped.
    pub fn rect(l: &TorusLattice, x0: i64, y0: i64, wx: usize, wy: usize) -> Self {
        let mut cells = BTreeSet::new();
        for dy in 0..wy as i64 {
            for dx in 0..wx as i64 {
                cells.insert(l.wrap(x0 + dx, y0 + dy));
            }
        }
        Region { cells }
    }

    /// Rows `[y0, y0+width)` across the whole torus.
    pub fn horizontal_strip(l: &TorusLattice, y0: i64, width: usize) -> Self {
        Self::rect(l, 0, y0, l.lx(), width)
    }

    /// Columns `[x0, x0+width)` across the whole torus.
    pub fn vertical_strip(l: &TorusLattice, x0: i64, width: usize) -> Self {
        Self::rect(l, x0, 0, width, l.ly())
    }

    pub fn union(&self, o: &Region) -> Region {
        Region { cells: self.cells.union(&o.cells).copied().collect() }
    }

    pub fn intersection(&self, o: &Region) -> Region {
        Region { cells: self.cells.intersection(&o.cells).copied().collect() }
    }

    pub fn complement(&self, l: &TorusLattice) -> Region {
        Region { cells: Region::all(l).cells.difference(&self.cells).copied().collect() }
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.cells.contains(&(x, y))
    }

    pub fn cells(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn sites(&self, l: &TorusLattice) -> Vec<usize> {
        let ns = l.slots().len();
        let mut out = Vec::new();
        for &(x, y) in &self.cells {
            for k in 0..ns {
                out.push(l.site(x as i64, y as i64, k));
            }
        }
        out.sort_unstable();
        out
    }

    /// Is the operator's support inside the region?
    pub fn supports(&self, l: &TorusLattice, op: &PauliOperator) -> bool {
        op.terms().iter().all(|&(s, _, _)| {
            let (x, y, _) = l.site_coords(s);
            self.contains(x, y)
        })
    }
}

/// JSON form of a code: lattice geometry plus templates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    #[serde(rename = "Lx")]
    pub lx: usize,
    #[serde(rename = "Ly")]
    pub ly: usize,
    pub slots: Vec<Slot>,
    pub templates: Vec<GeneratorTemplate>,
}

//! Anyon extraction from a concrete torus code.
//!
//! Anyon types are read off as classes of closed string operators in the
//! horizontal strip (rows `[0, w)`) modulo locally generated stabilizers. Each
//! class is matched with a vertical class (columns `[0, w)`) by solving for a
//! junction dressing, which also yields the exchange statistics through the
//! three-arm relation `W₁W₂†W₃ = θ W₃W₂†W₁`. With the east and west arms taken
//! as the two halves of the closed horizontal string, that relation reduces
//! to a single commutator between the dressed north arm and the full string.

use crate::code::{basis_rows, greedy_generators, quotient_structure, span_of, symplectic_form, CodeAnalysis};
use crate::error::{Error, Result};
use crate::lattice::{Region, TorusLattice};
use crate::pauli::{PauliOperator, PhaseRoot};
use crate::ring_linalg::{md, GroupBasis, TrackedEchelon};
use crate::theory::AnyonTheoryData;
use serde::{Deserialize, Serialize};

/// Default strip width for extraction.
pub const DEFAULT_ANYON_WINDOW: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringPath {
    /// Closed string along the horizontal cycle through the origin row.
    Horizontal,
    /// Closed string along the vertical cycle through the origin column.
    Vertical,
    /// Open arm of the T-junction leaving the origin upwards (dressed).
    NorthArm,
}

#[derive(Debug, Clone)]
pub struct StringOperator {
    pub op: PauliOperator,
    pub path: StringPath,
    pub label: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct ExtractedAnyon {
    pub label: Vec<i64>,
    pub order: i64,
    pub theta: PhaseRoot,
    pub detectable: bool,
    pub transparent: bool,
    pub representative: StringOperator,
}

/// Commutation phases of an endpoint against nearby gauge elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationPattern {
    pub phases: Vec<PhaseRoot>,
}

impl CommutationPattern {
    pub fn is_trivial(&self) -> bool {
        self.phases.iter().all(|p| p.is_one())
    }
}

/// Extracted anyon theory of a code.
#[derive(Debug, Clone)]
pub struct AnyonLab {
    lattice: TorusLattice,
    m: i64,
    window: usize,
    /// Invariant factors of the fusion group.
    pub orders: Vec<i64>,
    /// Closed horizontal strings of the fusion generators.
    pub horizontal: Vec<Vec<i64>>,
    /// Closed vertical strings of the same generators.
    pub vertical: Vec<Vec<i64>>,
    /// Dressed north arms.
    pub north: Vec<Vec<i64>>,
    /// `T[i][j]`: exponent of `Φ(N′_j, H_i)`; `θ(x) = Σ x_i x_j T_ij`.
    t: Vec<Vec<i64>>,
    /// `B[i][j]`: exponent of `Φ(V_j, H_i)`.
    b: Vec<Vec<i64>>,
    east: Vec<Vec<i64>>,
    dressing_cols: Vec<usize>,
    gauge_box: Vec<Vec<i64>>,
    detect: TrackedEchelon,
    stab_box: Vec<Vec<i64>>,
    local: GroupBasis,
}

fn restrict_cells(l: &TorusLattice, v: &[i64], keep: impl Fn(usize, usize) -> bool) -> Vec<i64> {
    let mut out = v.to_vec();
    for s in 0..l.num_sites() {
        let (x, y, _) = l.site_coords(s);
        if !keep(x, y) {
            out[2 * s] = 0;
            out[2 * s + 1] = 0;
        }
    }
    out
}

fn combine(gens: &[Vec<i64>], coeffs: &[i64], moduli: &[i64]) -> Vec<i64> {
    let n = moduli.len();
    let mut out = vec![0i64; n];
    for (g, &c) in gens.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for i in 0..n {
            if g[i] != 0 {
                out[i] = md(out[i] + c * g[i], moduli[i]);
            }
        }
    }
    out
}

fn pattern(sys_lab: &CodeAnalysis, gens: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let sys = sys_lab.system();
    gens.iter().map(|g| symplectic_form(sys, g, v)).collect()
}

impl AnyonLab {
    pub fn new(analysis: &CodeAnalysis, window: usize) -> Result<Self> {
        let l = analysis.lattice().clone();
        let w = window.max(1);
        let needed = 2 * w + 2;
        if l.lx() < needed || l.ly() < needed {
            return Err(Error::TorusTooSmall { lx: l.lx(), ly: l.ly(), needed });
        }
        let sys = analysis.system().clone();
        let moduli = sys.symplectic_moduli();
        let m = sys.lcm() as i64;
        let local = &analysis.local_stabilizer_basis;
        let logical = &analysis.bare_logical_basis;

        // closed strings in the two strips, modulo local stabilizers
        let h_strip = crate::code::restrict_to_region(&l, logical, &Region::horizontal_strip(&l, 0, w));
        let v_strip = crate::code::restrict_to_region(&l, logical, &Region::vertical_strip(&l, 0, w));
        let h_greedy = greedy_generators(&h_strip, local);
        let v_greedy = greedy_generators(&v_strip, local);
        let (orders, h_combos) = quotient_structure(&h_greedy, local);
        let (v_orders, v_combos) = quotient_structure(&v_greedy, local);
        if v_orders != orders {
            return Err(Error::Extraction(format!(
                "horizontal classes {:?} and vertical classes {:?} differ",
                orders, v_orders
            )));
        }
        let horizontal: Vec<Vec<i64>> = h_combos.iter().map(|c| combine(&h_greedy, c, &moduli)).collect();
        let vclass: Vec<Vec<i64>> = v_combos.iter().map(|c| combine(&v_greedy, c, &moduli)).collect();

        // every bare logical is a product of strip strings and local stabilizers
        let mut all = local.echelon().clone();
        for v in horizontal.iter().chain(&vclass) {
            all.insert(v);
        }
        for r in basis_rows(logical) {
            let mut w2 = r.clone();
            if !all.reduce(&mut w2, None) {
                return Err(Error::Extraction("strip strings do not exhaust the bare logical group".into()));
            }
        }
        // translation acts trivially on the extracted classes
        for h in &horizontal {
            for (dx, dy) in [(1, 0), (0, 1)] {
                let t = l.translate_vec(h, dx, dy);
                let d: Vec<i64> = (0..t.len()).map(|i| md(t[i] - h[i], moduli[i])).collect();
                if !local.contains_raw(&d) {
                    return Err(Error::Extraction("translation permutes anyon types; coarse-grain the lattice".into()));
                }
            }
        }

        // junction geometry
        let r = (l.lx().min(l.ly()) / 2) as i64;
        let (lx, ly) = (l.lx() as i64, l.ly() as i64);
        let rel = |c: usize, len: i64| -> i64 {
            let c = c as i64;
            if c > len / 2 {
                c - len
            } else {
                c
            }
        };
        let box_region = Region::from_cells(
            &l,
            (-(r - 1)..=(r - 1)).flat_map(|x| (-(r - 1)..=(r - 1)).map(move |y| (x, y))),
        );
        let gauge_box = crate::code::restrict_to_region(&l, &analysis.gauge_basis, &box_region);
        let stab_box = crate::code::restrict_to_region(&l, local, &box_region);
        let d_lo = -1i64;
        let d_hi = (r - 2).max(0);
        let mut dressing_cols = Vec::new();
        for s in 0..l.num_sites() {
            let (x, y, _) = l.site_coords(s);
            let (rx, ry) = (rel(x, lx), rel(y, ly));
            if (d_lo..=d_hi).contains(&rx) && (d_lo..=d_hi).contains(&ry) {
                dressing_cols.extend([2 * s, 2 * s + 1]);
            }
        }
        let unit = |c: usize| -> Vec<i64> {
            let mut e = vec![0i64; moduli.len()];
            e[c] = 1;
            e
        };
        let east_of = |v: &Vec<i64>| restrict_cells(&l, v, |x, _| (x as i64) < r);
        let north_of = |v: &Vec<i64>| restrict_cells(&l, v, |_, y| (y as i64) < r);

        let east: Vec<Vec<i64>> = horizontal.iter().map(east_of).collect();
        let north_raw: Vec<Vec<i64>> = vclass.iter().map(north_of).collect();
        let mut solve_gens: Vec<Vec<i64>> = north_raw.iter().map(|n| pattern(analysis, &gauge_box, n)).collect();
        for &c in &dressing_cols {
            solve_gens.push(pattern(analysis, &gauge_box, &unit(c)));
        }
        let solver = TrackedEchelon::new(&vec![m; gauge_box.len()], &solve_gens);
        let k = vclass.len();
        let mut vertical = Vec::new();
        let mut north = Vec::new();
        for e in &east {
            let target = pattern(analysis, &gauge_box, e);
            let coeff = solver
                .solve(&target)
                .ok_or_else(|| Error::Extraction("no junction dressing matches the horizontal endpoint".into()))?;
            vertical.push(combine(&vclass, &coeff[..k], &moduli));
            let mut n = combine(&north_raw, &coeff[..k], &moduli);
            for (idx, &c) in dressing_cols.iter().enumerate() {
                n[c] = md(n[c] + coeff[k + idx], moduli[c]);
            }
            north.push(n);
        }
        let g = orders.len();
        let mut t = vec![vec![0i64; g]; g];
        let mut b = vec![vec![0i64; g]; g];
        for i in 0..g {
            for j in 0..g {
                t[i][j] = symplectic_form(&sys, &north[j], &horizontal[i]);
                b[i][j] = symplectic_form(&sys, &vertical[j], &horizontal[i]);
            }
        }
        let mut detect_gens = Vec::new();
        for &c in &dressing_cols {
            detect_gens.push(pattern(analysis, &stab_box, &unit(c)));
        }
        let detect = TrackedEchelon::new(&vec![m; stab_box.len()], &detect_gens);

        Ok(AnyonLab {
            lattice: l,
            m,
            window: w,
            orders,
            horizontal,
            vertical,
            north,
            t,
            b,
            east,
            dressing_cols,
            gauge_box,
            detect,
            stab_box,
            local: local.clone(),
        })
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn size(&self) -> i64 {
        self.orders.iter().product()
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.orders).map(|(&a, &n)| md(a, n)).collect()
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
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

    pub fn element_order(&self, x: &[i64]) -> i64 {
        x.iter()
            .zip(&self.orders)
            .fold(1, |acc, (&a, &n)| num_integer::lcm(acc, n / num_integer::gcd(md(a, n), n)))
    }

    /// Exchange statistics from the junction relation.
    pub fn exchange_statistics(&self, x: &[i64]) -> PhaseRoot {
        let mut k = 0i64;
        for i in 0..x.len() {
            for j in 0..x.len() {
                k = md(k + x[i] * x[j] % self.m * self.t[i][j], self.m);
            }
        }
        PhaseRoot::new(k, self.m)
    }

    /// Statistics recomputed with the dressing shifted by `extra` (symplectic
    /// coordinates on the dressing region). Valid shifts leave θ unchanged.
    pub fn exchange_statistics_with_dressing(&self, analysis: &CodeAnalysis, x: &[i64], extra: &[i64]) -> Option<PhaseRoot> {
        let sys = analysis.system();
        let moduli = sys.symplectic_moduli();
        let mut nv = combine(&self.north, x, &moduli);
        let hv = combine(&self.horizontal, x, &moduli);
        let mut d = vec![0i64; moduli.len()];
        for (idx, &c) in self.dressing_cols.iter().enumerate() {
            d[c] = md(extra[idx], moduli[c]);
            nv[c] = md(nv[c] + extra[idx], moduli[c]);
        }
        // the shift must not change the junction pattern
        if pattern(analysis, &self.gauge_box, &d).iter().any(|&p| p != 0) {
            return None;
        }
        Some(PhaseRoot::new(symplectic_form(sys, &nv, &hv), self.m))
    }

    /// Kernel of the dressing-pattern map: shifts that keep the junction intact.
    pub fn dressing_freedom(&self, analysis: &CodeAnalysis) -> GroupBasis {
        let sys = analysis.system();
        let moduli = sys.symplectic_moduli();
        let cols: Vec<Vec<i64>> = self
            .dressing_cols
            .iter()
            .map(|&c| {
                let mut e = vec![0i64; moduli.len()];
                e[c] = 1;
                pattern(analysis, &self.gauge_box, &e)
            })
            .collect();
        let dm: Vec<i64> = self.dressing_cols.iter().map(|&c| moduli[c]).collect();
        crate::ring_linalg::kernel_raw(&cols, &vec![self.m; self.gauge_box.len()], &dm)
    }

    /// `B(a, b) = Φ(V_b, H_a)`.
    pub fn braiding_phase(&self, a: &[i64], b: &[i64]) -> PhaseRoot {
        let mut k = 0i64;
        for i in 0..a.len() {
            for j in 0..b.len() {
                k = md(k + a[i] * b[j] % self.m * self.b[i][j], self.m);
            }
        }
        PhaseRoot::new(k, self.m)
    }

    /// Braiding obtained from θ through the full-braid identity.
    pub fn braiding_from_statistics(&self, a: &[i64], b: &[i64]) -> PhaseRoot {
        let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.exchange_statistics(&ab)
            .div(&self.exchange_statistics(a))
            .div(&self.exchange_statistics(b))
    }

    pub fn is_transparent(&self, a: &[i64]) -> bool {
        (0..self.orders.len()).all(|j| {
            let mut e = vec![0; self.orders.len()];
            e[j] = 1;
            self.braiding_phase(a, &e).is_one()
        })
    }

    /// Does every endpoint of this anyon violate a local stabilizer?
    pub fn is_detectable(&self, analysis: &CodeAnalysis, a: &[i64]) -> bool {
        let moduli = analysis.system().symplectic_moduli();
        let e = combine(&self.east, a, &moduli);
        let target = pattern(analysis, &self.stab_box, &e);
        self.detect.solve(&target).is_none()
    }

    /// Endpoint pattern of the truncated horizontal string at the junction.
    pub fn endpoint_pattern(&self, analysis: &CodeAnalysis, a: &[i64]) -> CommutationPattern {
        let moduli = analysis.system().symplectic_moduli();
        let e = combine(&self.east, a, &moduli);
        CommutationPattern {
            phases: pattern(analysis, &self.gauge_box, &e).into_iter().map(|k| PhaseRoot::new(k, self.m)).collect(),
        }
    }

    pub fn string_operator(&self, analysis: &CodeAnalysis, a: &[i64], path: StringPath) -> StringOperator {
        let moduli = analysis.system().symplectic_moduli();
        let src = match path {
            StringPath::Horizontal => &self.horizontal,
            StringPath::Vertical => &self.vertical,
            StringPath::NorthArm => &self.north,
        };
        let v = combine(src, a, &moduli);
        StringOperator { op: PauliOperator::from_symplectic(analysis.system(), 0, &v), path, label: self.reduce(a) }
    }

    /// Is the closed horizontal string of `a` a product of local stabilizers?
    pub fn is_trivial_string(&self, analysis: &CodeAnalysis, a: &[i64]) -> bool {
        let moduli = analysis.system().symplectic_moduli();
        self.local.contains_raw(&combine(&self.horizontal, a, &moduli))
    }

    pub fn anyon(&self, analysis: &CodeAnalysis, a: &[i64]) -> ExtractedAnyon {
        let a = self.reduce(a);
        ExtractedAnyon {
            order: self.element_order(&a),
            theta: self.exchange_statistics(&a),
            detectable: self.is_detectable(analysis, &a),
            transparent: self.is_transparent(&a),
            representative: self.string_operator(analysis, &a, StringPath::Horizontal),
            label: a,
        }
    }

    /// Nontrivial elements (all of them when the group has at most 256
    /// elements, otherwise the generators).
    pub fn anyons(&self, analysis: &CodeAnalysis) -> Vec<ExtractedAnyon> {
        let labels: Vec<Vec<i64>> = if self.size() <= 256 {
            self.elements().into_iter().filter(|x| x.iter().any(|&c| c != 0)).collect()
        } else {
            (0..self.orders.len())
                .map(|i| {
                    let mut e = vec![0; self.orders.len()];
                    e[i] = 1;
                    e
                })
                .collect()
        };
        labels.iter().map(|x| self.anyon(analysis, x)).collect()
    }

    /// Check the full-braid identity on every pair of generators and on the
    /// generator orders (θ(g^d) = 1 for a generator of order d).
    pub fn braiding_identity_holds(&self) -> bool {
        let g = self.orders.len();
        for i in 0..g {
            for j in 0..g {
                if md(self.t[i][j] + self.t[j][i] - self.b[i][j], self.m) != 0 {
                    return false;
                }
            }
            let mut e = vec![0; g];
            e[i] = self.orders[i];
            if !self.exchange_statistics(&e).is_one() {
                return false;
            }
        }
        true
    }

    pub fn report(&self, analysis: &CodeAnalysis) -> AnyonReport {
        let g = self.orders.len();
        let unit = |i: usize| {
            let mut e = vec![0; g];
            e[i] = 1;
            e
        };
        AnyonReport {
            fusion_group: self.orders.clone(),
            anyons: self
                .anyons(analysis)
                .into_iter()
                .map(|a| AnyonEntry {
                    label: a.label,
                    order: a.order,
                    theta: a.theta,
                    detectable: a.detectable,
                    transparent: a.transparent,
                })
                .collect(),
            braiding: (0..g).map(|i| (0..g).map(|j| self.braiding_phase(&unit(i), &unit(j))).collect()).collect(),
        }
    }

    /// Find generators of the extracted group reproducing `data` exactly
    /// (orders, statistics and braiding). Returns their labels.
    pub fn match_theory(&self, data: &AnyonTheoryData) -> Option<Vec<Vec<i64>>> {
        if self.size() != data.size() {
            return None;
        }
        let els = self.elements();
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        self.match_rec(data, &els, &mut chosen).then_some(chosen)
    }

    fn match_rec(&self, data: &AnyonTheoryData, els: &[Vec<i64>], chosen: &mut Vec<Vec<i64>>) -> bool {
        let i = chosen.len();
        if i == data.rank() {
            return self.generated_size(chosen) == self.size();
        }
        let want_theta = PhaseRoot::new(data.two_t[i], 2 * data.orders[i]);
        for y in els {
            if self.element_order(y) != data.orders[i] || self.exchange_statistics(y) != want_theta {
                continue;
            }
            let ok = (0..i).all(|j| self.braiding_phase(&chosen[j], y) == PhaseRoot::new(data.p[j][i], data.n_ij(i, j)));
            if !ok {
                continue;
            }
            chosen.push(y.clone());
            if self.match_rec(data, els, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn generated_size(&self, gens: &[Vec<i64>]) -> i64 {
        let moduli = self.orders.clone();
        let b = span_of(moduli, gens);
        let o = b.order().to_u64_digits();
        o.first().copied().unwrap_or(1) as i64
    }
}

/// JSON anyon report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonReport {
    pub fusion_group: Vec<i64>,
    pub anyons: Vec<AnyonEntry>,
    pub braiding: Vec<Vec<PhaseRoot>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonEntry {
    pub label: Vec<i64>,
    pub order: i64,
    pub theta: PhaseRoot,
    pub detectable: bool,
    pub transparent: bool,
}

/// Extract with the default window.
pub fn extract_anyons(analysis: &CodeAnalysis) -> Result<(AnyonLab, Vec<ExtractedAnyon>)> {
    let lab = AnyonLab::new(analysis, DEFAULT_ANYON_WINDOW)?;
    let list = lab.anyons(analysis);
    Ok((lab, list))
}

pub fn exchange_statistics(lab: &AnyonLab, anyon: &ExtractedAnyon) -> PhaseRoot {
    lab.exchange_statistics(&anyon.label)
}

pub fn braiding_phase(lab: &AnyonLab, a: &ExtractedAnyon, b: &ExtractedAnyon) -> PhaseRoot {
    lab.braiding_phase(&a.label, &b.label)
}

pub fn classify_anyon(lab: &AnyonLab, analysis: &CodeAnalysis, a: &ExtractedAnyon) -> (bool, bool) {
    (lab.is_detectable(analysis, &a.label), lab.is_transparent(&a.label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_subsystem_code, build_tqd_stabilizer_code};
    use crate::catalog::catalog_get;
    use crate::theory::admissible_data;
    use proptest::prelude::*;

    fn analysis_of(name: &str, par: Option<i64>, l: usize) -> CodeAnalysis {
        CodeAnalysis::new(&catalog_get(name, par, l, l).unwrap().0, 3).unwrap()
    }

    #[test]
    fn toric_code_anyons() {
        let data = AnyonTheoryData::new(vec![2], vec![0], vec![vec![0]]).unwrap();
        let (code, _) = build_tqd_stabilizer_code(&data, 6, 6).unwrap();
        let a = CodeAnalysis::new(&code, 3).unwrap();
        let (lab, list) = extract_anyons(&a).unwrap();
        assert_eq!(lab.orders, vec![2, 2]);
        assert_eq!(list.len(), 3);
        // e, m bosons and one fermion, all detectable and opaque
        let fermions = list.iter().filter(|x| x.theta == PhaseRoot::new(1, 2)).count();
        assert_eq!(fermions, 1);
        assert!(list.iter().all(|x| x.detectable && !x.transparent));
        assert!(lab.braiding_identity_holds());
    }

    #[test]
    fn torus_too_small() {
        let a = analysis_of("chiral_semion", None, 4);
        assert_eq!(AnyonLab::new(&a, 2).unwrap_err(), Error::TorusTooSmall { lx: 4, ly: 4, needed: 6 });
        assert_eq!(Error::TorusTooSmall { lx: 4, ly: 4, needed: 6 }.exit_code(), 4);
        assert!(AnyonLab::new(&a, 1).is_ok());
    }

    #[test]
    fn z2_0_transparent_boson() {
        let a = analysis_of("z2_0", None, 6);
        let (lab, list) = extract_anyons(&a).unwrap();
        assert_eq!(lab.orders, vec![2]);
        assert_eq!(list.len(), 1);
        assert!(list[0].theta.is_one() && list[0].transparent && !list[0].detectable);
        assert_eq!(a.counting.index_l_over_s, 1u32.into());
    }

    #[test]
    fn z4_1_flags() {
        let a = analysis_of("z4_1", None, 6);
        let (lab, list) = extract_anyons(&a).unwrap();
        assert_eq!(list.len(), 3);
        for x in &list {
            let odd = x.label[0] % 2 == 1;
            assert_eq!(x.detectable, odd);
            assert_eq!(x.transparent, !odd);
        }
        assert_eq!(lab.braiding_phase(&[1], &[1]), PhaseRoot::new(1, 2));
        assert_eq!(lab.braiding_phase(&[1], &[3]), PhaseRoot::new(1, 2));
    }

    #[test]
    fn report_shape() {
        let a = analysis_of("zp_zp2", Some(2), 6);
        let (lab, _) = extract_anyons(&a).unwrap();
        let r = lab.report(&a);
        assert_eq!(r.fusion_group, vec![2, 4]);
        assert_eq!(r.anyons.len(), 7);
        assert_eq!(r.braiding.len(), 2);
        let j = serde_json::to_string(&r).unwrap();
        assert!(j.starts_with("{\"fusion_group\":[2,4],\"anyons\":[{\"label\""));
    }

    #[test]
    fn string_operators_are_logical() {
        let a = analysis_of("three_fermion", None, 6);
        let (lab, _) = extract_anyons(&a).unwrap();
        for x in lab.elements() {
            for path in [StringPath::Horizontal, StringPath::Vertical] {
                let s = lab.string_operator(&a, &x, path);
                assert!(a.bare_logical_basis.contains_raw(&s.op.symplectic()));
            }
            let loop_trivial = lab.is_trivial_string(&a, &x);
            assert_eq!(loop_trivial, x.iter().all(|&c| c == 0));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn round_trip_random_data(k in 0usize..1000, which in 0usize..4) {
            let orders = [vec![2i64], vec![3], vec![4], vec![2, 2]][which].clone();
            let all = admissible_data(&orders);
            let data = &all[k % all.len()];
            let a = CodeAnalysis::new(&build_subsystem_code(data, 6, 6).unwrap(), 3).unwrap();
            let (lab, list) = extract_anyons(&a).unwrap();
            prop_assert!(lab.match_theory(data).is_some());
            prop_assert!(lab.braiding_identity_holds());
            for x in &list {
                // detectable ⇒ opaque
                prop_assert!(!x.detectable || !x.transparent);
                prop_assert_eq!(exchange_statistics(&lab, x), x.theta);
            }
            for x in &list {
                for y in &list {
                    prop_assert_eq!(braiding_phase(&lab, x, y), lab.braiding_from_statistics(&x.label, &y.label));
                }
            }
        }
    }
}

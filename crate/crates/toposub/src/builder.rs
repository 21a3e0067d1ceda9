//! Construction of stabilizer and subsystem codes from abelian anyon data.
//!
//! Every generator of the input theory gets one layer. An untwisted layer is a
//! ℤ_N toric code; a twisted one (n = N/2) is a ℤ_{N²} toric code with the
//! boson `e^{N²/2} m^N` condensed, which realises the twisted quantum double.
//! The subsystem code then adds short hops of the conjugate generators `ā_i`
//! as gauge generators.
//!
//! Cell `(x, y)` holds two edge slots per layer: `h` from `(x,y)` to `(x+1,y)`
//! and `v` from `(x,y)` to `(x,y+1)`. A composite `e^a m^b` sits on a vertex
//! together with the plaquette to its south-west.

use crate::code::TorusCode;
use crate::error::{Error, Result};
use crate::lattice::{GeneratorTemplate, Slot, TemplateTerm, TorusLattice};
use crate::pauli::PhaseRoot;
use crate::theory::{tqd_embedding, AnyonTheoryData, TqdEmbedding};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSpec {
    pub order: i64,
    pub twisted: bool,
}

impl LayerSpec {
    /// Local qudit dimension of the layer.
    pub fn dim(&self) -> i64 {
        if self.twisted {
            self.order * self.order
        } else {
            self.order
        }
    }

    /// Exponent of `Z` on the edge for one hop of the gauge charge `c`.
    fn charge_unit(&self) -> i64 {
        if self.twisted {
            self.order
        } else {
            1
        }
    }
}

pub fn layer_specs(emb: &TqdEmbedding) -> Vec<LayerSpec> {
    emb.orders.iter().zip(&emb.n).map(|(&order, &n)| LayerSpec { order, twisted: n != 0 }).collect()
}

fn h(j: usize) -> String {
    format!("h{}", j)
}

fn v(j: usize) -> String {
    format!("v{}", j)
}

fn p(j: usize) -> String {
    format!("p{}", j)
}

/// Slots `h{j}`, `v{j}` per layer, plus a plaquette qudit `p{j}` for twisted
/// layers.
pub fn layer_slots(layers: &[LayerSpec]) -> Vec<Slot> {
    let mut out = Vec::new();
    for (j, l) in layers.iter().enumerate() {
        out.push(Slot::new(&h(j), l.dim() as u32));
        out.push(Slot::new(&v(j), l.dim() as u32));
        if l.twisted {
            out.push(Slot::new(&p(j), l.dim() as u32));
        }
    }
    out
}

fn vertex_check(j: usize, k: i64) -> Vec<TemplateTerm> {
    vec![
        TemplateTerm::new(0, 0, &h(j), -k, 0),
        TemplateTerm::new(0, 0, &v(j), -k, 0),
        TemplateTerm::new(-1, 0, &h(j), k, 0),
        TemplateTerm::new(0, -1, &v(j), k, 0),
    ]
}

fn plaquette_check(j: usize, k: i64, dx: i64, dy: i64) -> Vec<TemplateTerm> {
    vec![
        TemplateTerm::new(dx, dy, &h(j), 0, k),
        TemplateTerm::new(dx + 1, dy, &v(j), 0, k),
        TemplateTerm::new(dx, dy + 1, &h(j), 0, -k),
        TemplateTerm::new(dx, dy, &v(j), 0, -k),
    ]
}

/// Hops `[+x, +y]` of `e^a m^b` in layer `j`, with the plaquette of the
/// composite south-west of its vertex. On a twisted layer the flux is bound
/// to the plaquette qudits (`X_p^{b}` leaving, `X_p^{-b}` arriving), so the
/// hop commutes with the dressed plaquette terms.
fn hops(layer: &LayerSpec, j: usize, a: i64, b: i64) -> [Vec<TemplateTerm>; 2] {
    let mut hx = Vec::new();
    let mut hy = Vec::new();
    if a != 0 {
        hx.push(TemplateTerm::new(0, 0, &h(j), 0, a));
        hy.push(TemplateTerm::new(0, 0, &v(j), 0, a));
    }
    if b != 0 {
        hx.push(TemplateTerm::new(0, -1, &v(j), b, 0));
        hy.push(TemplateTerm::new(-1, 0, &h(j), -b, 0));
        if layer.twisted {
            hx.push(TemplateTerm::new(-1, -1, &p(j), -b, 0));
            hx.push(TemplateTerm::new(0, -1, &p(j), b, 0));
            hy.push(TemplateTerm::new(-1, -1, &p(j), -b, 0));
            hy.push(TemplateTerm::new(-1, 0, &p(j), b, 0));
        }
    }
    [hx, hy]
}

/// Hops `[+x, +y]` of `φ̄ = e^{N/2} m^{-1}` (twisted) or `m^{-1}` (untwisted).
/// On a twisted layer the extra `Z_p^{N/2}` makes the endpoint pattern of both
/// hops agree, and the `N`th power a product of edge and plaquette terms.
fn phi_bar_hops(layer: &LayerSpec, j: usize) -> [Vec<TemplateTerm>; 2] {
    let n = layer.order;
    if !layer.twisted {
        return hops(layer, j, 0, -1);
    }
    let [mut hx, mut hy] = hops(layer, j, n / 2, -1);
    hx.push(TemplateTerm::new(0, -1, &p(j), 0, n / 2));
    hy.push(TemplateTerm::new(-1, -1, &p(j), 0, n / 2));
    [hx, hy]
}

/// Stabilizer templates of the layered twisted quantum double.
pub fn tqd_templates(layers: &[LayerSpec]) -> Vec<GeneratorTemplate> {
    let mut out = Vec::new();
    for (j, l) in layers.iter().enumerate() {
        let n = l.order;
        if l.twisted {
            let mut a = vertex_check(j, 1);
            a.extend(plaquette_check(j, n / 2, -1, -1));
            out.push(GeneratorTemplate::new(a));
            let mut b = plaquette_check(j, 1, 0, 0);
            b.push(TemplateTerm::new(0, 0, &p(j), 0, 1));
            out.push(GeneratorTemplate::new(b));
            for hop in hops(l, j, n * n / 2, n) {
                out.push(GeneratorTemplate::new(hop));
            }
            out.push(GeneratorTemplate::new(vec![TemplateTerm::new(0, 0, &p(j), 0, n)]));
        } else {
            out.push(GeneratorTemplate::new(vertex_check(j, 1)));
            out.push(GeneratorTemplate::new(plaquette_check(j, 1, 0, 0)));
        }
    }
    out
}

/// Short string operators `[+x, +y]` of `ā_i`.
pub fn a_bar_hops(data: &AnyonTheoryData, layers: &[LayerSpec], i: usize) -> [GeneratorTemplate; 2] {
    let [mut hx, mut hy] = phi_bar_hops(&layers[i], i);
    for j in i..layers.len() {
        let k = data.p[i][j] * data.orders[j] / data.n_ij(i, j) * layers[j].charge_unit();
        if k != 0 {
            let [x, y] = hops(&layers[j], j, k, 0);
            hx.extend(x);
            hy.extend(y);
        }
    }
    [GeneratorTemplate::new(merge(hx)), GeneratorTemplate::new(merge(hy))]
}

/// Combine terms acting on the same site.
fn merge(terms: Vec<TemplateTerm>) -> Vec<TemplateTerm> {
    let mut out: Vec<TemplateTerm> = Vec::new();
    for t in terms {
        if let Some(o) = out.iter_mut().find(|o| o.dx == t.dx && o.dy == t.dy && o.slot == t.slot) {
            o.x += t.x;
            o.z += t.z;
        } else {
            out.push(t);
        }
    }
    out
}

/// Stabilizer code realising the twisted quantum double that contains `data`.
pub fn build_tqd_stabilizer_code(data: &AnyonTheoryData, lx: usize, ly: usize) -> Result<(TorusCode, TqdEmbedding)> {
    let emb = tqd_embedding(data)?;
    let layers = layer_specs(&emb);
    let lat = TorusLattice::new(lx, ly, layer_slots(&layers))?;
    let code = TorusCode::new("tqd", lat, tqd_templates(&layers))?;
    Ok((code, emb))
}

/// Subsystem code whose anyon theory is `data`.
pub fn build_subsystem_code(data: &AnyonTheoryData, lx: usize, ly: usize) -> Result<TorusCode> {
    let emb = tqd_embedding(data)?;
    let layers = layer_specs(&emb);
    let lat = TorusLattice::new(lx, ly, layer_slots(&layers))?;
    let mut templates = tqd_templates(&layers);
    for i in 0..layers.len() {
        templates.extend(a_bar_hops(data, &layers, i));
    }
    TorusCode::new("subsystem", lat, templates)
}

/// Single-qudit Clifford `X → Z, Z → X†` applied to a template on `slots`.
///
/// Phases are not tracked: the exponent vector of `X^x Z^z` maps to
/// `X^{-z} Z^{x}` up to a root of unity, which is all the gauge group needs.
pub fn apply_f(t: &GeneratorTemplate, slots: &[&str]) -> GeneratorTemplate {
    let terms = t
        .terms
        .iter()
        .map(|term| {
            if slots.contains(&term.slot.as_str()) {
                TemplateTerm::new(term.dx, term.dy, &term.slot, -term.z, term.x)
            } else {
                term.clone()
            }
        })
        .collect();
    GeneratorTemplate::new(terms).with_phase(PhaseRoot::ONE)
}

pub fn apply_f_code(code: &TorusCode, slots: &[&str]) -> Result<TorusCode> {
    if !code.extra_gauge.is_empty() {
        return Err(Error::Unsupported("F map on codes with non-template gauge generators".into()));
    }
    for s in slots {
        code.lattice.slot_index(s)?;
    }
    let templates = code.gauge_templates.iter().map(|t| apply_f(t, slots)).collect();
    TorusCode::new(&code.name, code.lattice.clone(), templates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon_lab::AnyonLab;
    use crate::code::CodeAnalysis;

    fn lab_for(data: &AnyonTheoryData, l: usize) -> (CodeAnalysis, AnyonLab) {
        let sub = build_subsystem_code(data, l, l).unwrap();
        let a = CodeAnalysis::new(&sub, 3).unwrap();
        let lab = AnyonLab::new(&a, 2).unwrap();
        (a, lab)
    }

    #[test]
    fn z2_untwisted_is_toric_code() {
        let data = AnyonTheoryData::new(vec![2], vec![0], vec![vec![0]]).unwrap();
        let (code, emb) = build_tqd_stabilizer_code(&data, 4, 4).unwrap();
        assert_eq!(emb.n, vec![0]);
        assert_eq!(code.gauge_templates.len(), 2);
        assert_eq!(code.lattice.slots().len(), 2);
    }

    #[test]
    fn tqd_code_is_abelian_with_full_double() {
        for (orders, two_t, p) in [(vec![3], vec![2], vec![vec![1]]), (vec![2], vec![1], vec![vec![0]])] {
            let data = AnyonTheoryData::new(orders, two_t, p).unwrap();
            let (code, _) = build_tqd_stabilizer_code(&data, 6, 6).unwrap();
            let a = CodeAnalysis::new(&code, 3).unwrap();
            assert_eq!(a.counting.index_g_over_s, 1u32.into());
            let lab = AnyonLab::new(&a, 2).unwrap();
            assert_eq!(lab.size(), data.orders[0] * data.orders[0]);
            assert!(lab.braiding_identity_holds());
        }
    }

    #[test]
    fn z3_toric_code_statistics() {
        let data = AnyonTheoryData::new(vec![3], vec![0], vec![vec![0]]).unwrap();
        let (code, _) = build_tqd_stabilizer_code(&data, 6, 6).unwrap();
        let a = CodeAnalysis::new(&code, 3).unwrap();
        let lab = AnyonLab::new(&a, 2).unwrap();
        assert_eq!(lab.orders, vec![3, 3]);
        for x in lab.elements() {
            let th = lab.exchange_statistics(&x);
            // e and m are bosons, composites are not
            let pure = x[0] == 0 || x[1] == 0;
            assert_eq!(th.is_one(), pure, "{:?}", x);
        }
        assert_eq!(lab.braiding_phase(&[1, 0], &[0, 1]).den, 3);
    }

    #[test]
    fn twisted_layer_counting() {
        // In N-dim units, with P plaquettes: the TQD stabilizer group has
        // 6P - 2, and the ā strings add the 1-chains modulo contractible
        // cycles, 2P - (P - 1). Hence |G| = N^(7P-1) and N_L = 1.
        let twisted = [2i64, 4].iter().flat_map(|&n| crate::theory::admissible_data(&[n])).filter(|d| d.two_t[0] % 2 == 1);
        let mut seen = 0;
        for data in twisted {
            seen += 1;
            let n = data.orders[0];
            let l = 4;
            let p = (l * l) as u32;
            let nn = num_bigint::BigUint::from(n as u64);
            let (tqd, _) = build_tqd_stabilizer_code(&data, l, l).unwrap();
            let ct = crate::code::counting_report(&tqd).unwrap();
            assert_eq!(ct.order_s, nn.pow(6 * p - 2));
            let c = crate::code::counting_report(&build_subsystem_code(&data, l, l).unwrap()).unwrap();
            assert!(c.identity_holds);
            assert_eq!(&c.order_s * &c.index_g_over_s, nn.pow(7 * p - 1), "{:?}", data);
            assert_eq!(c.order_s, nn.pow(5 * p - 1));
            assert_eq!(c.index_g_over_s, nn.pow(2 * p));
            assert_eq!(c.index_l_over_s, nn.pow(2));
        }
        assert_eq!(seen, 6);
    }

    #[test]
    fn gauging_out_equivalence() {
        for orders in [vec![2i64], vec![4], vec![2, 2]] {
            for data in crate::theory::admissible_data(&orders) {
                let (tqd, emb) = build_tqd_stabilizer_code(&data, 4, 4).unwrap();
                let layers = layer_specs(&emb);
                let hops: Vec<GeneratorTemplate> = (0..layers.len()).flat_map(|i| a_bar_hops(&data, &layers, i)).collect();
                let lhs = crate::code::gauge_out(&tqd, &hops).unwrap();
                let rhs = build_subsystem_code(&data, 4, 4).unwrap();
                assert!(lhs.same_gauge_span(&rhs).unwrap());
            }
        }
    }

    #[test]
    fn known_subsystem_codes() {
        let semion = AnyonTheoryData::new(vec![2], vec![1], vec![vec![0]]).unwrap();
        let (a, lab) = lab_for(&semion, 6);
        assert_eq!(a.counting.index_l_over_s, 4u32.into());
        assert!(lab.match_theory(&semion).is_some());
        let z41 = AnyonTheoryData::new(vec![4], vec![2], vec![vec![1]]).unwrap();
        let (a, lab) = lab_for(&z41, 6);
        assert_eq!(a.counting.index_l_over_s, 4u32.into());
        assert_eq!(a.nonlocal_stabilizer_orders, vec![2, 2]);
        assert!(lab.match_theory(&z41).is_some());
    }

    #[test]
    fn round_trip_small_orders() {
        for orders in [vec![2i64], vec![3], vec![4], vec![2, 2]] {
            for data in crate::theory::admissible_data(&orders) {
                let (_, lab) = lab_for(&data, 6);
                assert!(lab.braiding_identity_holds(), "{:?}", data);
                assert!(lab.match_theory(&data).is_some(), "{:?}", data);
            }
        }
    }
}

//! Named codes with their expected anyon content.
//!
//! Names: `z4_1`, `zN_1` (N = 2..=9), `z2_1_honeycomb`, `chiral_semion`,
//! `z2_0`, `three_fermion`, `zp_zp2` (p in {2, 3, 5}). The square-lattice form
//! of the honeycomb family, before the single-site Clifford `F` is applied to
//! the horizontal edges, is available as `z4_1_pre_clifford` and
//! `zN_1_pre_clifford`.
//!
//! A parameter can be attached to the name with a colon: `zN_1:5`, `zp_zp2:3`.

use crate::code::TorusCode;
use crate::error::{Error, Result};
use crate::lattice::{GeneratorTemplate, Slot, TemplateTerm, TorusLattice};
use crate::theory::AnyonTheoryData;

pub const CATALOG_NAMES: &[&str] = &[
    "z4_1",
    "z4_1_pre_clifford",
    "zN_1",
    "zN_1_pre_clifford",
    "z2_1_honeycomb",
    "chiral_semion",
    "z2_0",
    "three_fermion",
    "zp_zp2",
];

/// Anyon content a catalog code is expected to reproduce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedAnyons {
    /// Orders of the cyclic factors of the fusion group.
    pub fusion_group: Vec<i64>,
    /// Full theory data, when the orders are prime powers.
    pub data: Option<AnyonTheoryData>,
    pub modular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub parameter: Option<i64>,
    pub expected: ExpectedAnyons,
    /// Expected `[L:S]` on any torus.
    pub logical_index: u64,
    /// Square form before the `F` map.
    pub pre_clifford: bool,
}

fn t(dx: i64, dy: i64, slot: &str, x: i64, z: i64) -> TemplateTerm {
    TemplateTerm::new(dx, dy, slot, x, z)
}

fn g(terms: Vec<TemplateTerm>) -> GeneratorTemplate {
    GeneratorTemplate::new(terms)
}

fn vertex(h: &str, v: &str) -> GeneratorTemplate {
    g(vec![t(0, 0, h, -1, 0), t(0, 0, v, -1, 0), t(-1, 0, h, 1, 0), t(0, -1, v, 1, 0)])
}

fn plaquette(h: &str, v: &str) -> GeneratorTemplate {
    g(vec![t(0, 0, h, 0, 1), t(1, 0, v, 0, 1), t(0, 1, h, 0, -1), t(0, 0, v, 0, -1)])
}

fn is_prime_power(n: i64) -> bool {
    let mut p = 2;
    while n % p != 0 {
        p += 1;
    }
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// ℤ_N toric code with the `e m^{-1}` hops added, on the square lattice.
fn zn1_square() -> Vec<GeneratorTemplate> {
    vec![
        vertex("h", "v"),
        plaquette("h", "v"),
        g(vec![t(0, 0, "h", 0, 1), t(0, -1, "v", -1, 0)]),
        g(vec![t(0, 0, "v", 0, 1), t(-1, 0, "h", 1, 0)]),
    ]
}

/// The same gauge group after `F` on every `h` slot: one generator per edge
/// direction of the honeycomb, of type `X†X†`, `ZZ` and `(XZ)†(XZ)†`.
fn zn1_honeycomb() -> Vec<GeneratorTemplate> {
    vec![
        g(vec![t(0, 0, "h", -1, 0), t(0, -1, "v", -1, 0)]),
        g(vec![t(-1, 0, "h", 0, 1), t(0, 0, "v", 0, 1)]),
        g(vec![t(0, 0, "h", -1, -1), t(0, 0, "v", -1, -1)]),
    ]
}

fn chiral_semion() -> Vec<GeneratorTemplate> {
    vec![
        g(vec![t(0, 0, "h", 0, 1), t(1, 0, "v", 0, 1), t(0, 1, "h", 0, -1), t(0, 0, "v", 0, -1), t(0, 0, "p", 0, 1)]),
        g(vec![t(0, 0, "h", 0, 1), t(0, -1, "v", -1, 0), t(-1, -1, "p", 1, 0), t(0, -1, "p", -1, 1)]),
        g(vec![t(0, 0, "v", 0, 1), t(-1, 0, "h", 1, 0), t(-1, -1, "p", 1, 1), t(-1, 0, "p", -1, 0)]),
        g(vec![t(0, 0, "p", 0, 2)]),
    ]
}

fn z2_0() -> Vec<GeneratorTemplate> {
    vec![g(vec![t(0, 0, "h", 1, 0)]), g(vec![t(0, 0, "v", 1, 0)]), plaquette("h", "v")]
}

fn three_fermion() -> Vec<GeneratorTemplate> {
    vec![
        vertex("h0", "v0"),
        plaquette("h0", "v0"),
        vertex("h1", "v1"),
        plaquette("h1", "v1"),
        g(vec![t(0, 0, "h0", 0, 1), t(0, -1, "v0", 1, 0), t(0, 0, "h1", 0, 1)]),
        g(vec![t(0, 0, "v0", 0, 1), t(-1, 0, "h0", 1, 0), t(0, 0, "v1", 0, 1)]),
        g(vec![t(0, 0, "h1", 0, 1), t(0, -1, "v1", 1, 0)]),
        g(vec![t(0, 0, "v1", 0, 1), t(-1, 0, "h1", 1, 0)]),
    ]
}

fn zp_zp2(p: i64) -> Vec<GeneratorTemplate> {
    vec![
        vertex("h0", "v0"),
        plaquette("h0", "v0"),
        vertex("h1", "v1"),
        plaquette("h1", "v1"),
        g(vec![t(0, -1, "v0", -1, 0), t(0, 0, "h1", 0, p)]),
        g(vec![t(-1, 0, "h0", 1, 0), t(0, 0, "v1", 0, p)]),
        g(vec![t(0, -1, "v1", -1, 0)]),
        g(vec![t(-1, 0, "h1", 1, 0)]),
    ]
}

fn slots(spec: &[(&str, i64)]) -> Vec<Slot> {
    spec.iter().map(|&(n, d)| Slot::new(n, d as u32)).collect()
}

fn data(orders: Vec<i64>, two_t: Vec<i64>, p: Vec<Vec<i64>>) -> Option<AnyonTheoryData> {
    if orders.iter().all(|&n| is_prime_power(n)) {
        AnyonTheoryData::new(orders, two_t, p).ok()
    } else {
        None
    }
}

fn zn1_entry(name: &str, n: i64, pre: bool) -> CatalogEntry {
    let q = if n % 2 == 0 { n / 2 } else { n };
    CatalogEntry {
        name: name.into(),
        parameter: Some(n),
        expected: ExpectedAnyons { fusion_group: vec![n], data: data(vec![n], vec![2], vec![vec![1]]), modular: n % 2 == 1 },
        logical_index: (q * q) as u64,
        pre_clifford: pre,
    }
}

/// Split `name:param` into its parts.
pub fn parse_catalog_spec(spec: &str) -> Result<(String, Option<i64>)> {
    match spec.split_once(':') {
        None => Ok((spec.to_string(), None)),
        Some((n, p)) => {
            let v = p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("catalog parameter `{}`", p)))?;
            Ok((n.to_string(), Some(v)))
        }
    }
}

/// Build the named code on an `lx × ly` torus.
pub fn catalog_get(name: &str, parameter: Option<i64>, lx: usize, ly: usize) -> Result<(TorusCode, CatalogEntry)> {
    let need = |what: &str, ok: &dyn Fn(i64) -> bool, default: Option<i64>| -> Result<i64> {
        match parameter.or(default) {
            Some(v) if ok(v) => Ok(v),
            Some(v) => Err(Error::Unsupported(format!("{} = {} out of range for `{}`", what, v, name))),
            None => Err(Error::Unsupported(format!("`{}` needs a parameter {} (write `{}:<{}>`)", name, what, name, what))),
        }
    };
    let (sl, templates, entry) = match name {
        "z4_1" | "z4_1_pre_clifford" | "z2_1_honeycomb" | "zN_1" | "zN_1_pre_clifford" => {
            let n = match name {
                "z4_1" | "z4_1_pre_clifford" => need("N", &|v| v == 4, Some(4))?,
                "z2_1_honeycomb" => need("N", &|v| v == 2, Some(2))?,
                _ => need("N", &|v| (2..=9).contains(&v), None)?,
            };
            let pre = name.ends_with("_pre_clifford");
            let ts = if pre { zn1_square() } else { zn1_honeycomb() };
            (slots(&[("h", n), ("v", n)]), ts, zn1_entry(name, n, pre))
        }
        "chiral_semion" => (
            slots(&[("h", 4), ("v", 4), ("p", 4)]),
            chiral_semion(),
            CatalogEntry {
                name: name.into(),
                parameter: None,
                expected: ExpectedAnyons { fusion_group: vec![2], data: data(vec![2], vec![1], vec![vec![0]]), modular: true },
                logical_index: 4,
                pre_clifford: false,
            },
        ),
        "z2_0" => (
            slots(&[("h", 2), ("v", 2)]),
            z2_0(),
            CatalogEntry {
                name: name.into(),
                parameter: None,
                expected: ExpectedAnyons { fusion_group: vec![2], data: data(vec![2], vec![0], vec![vec![0]]), modular: false },
                logical_index: 1,
                pre_clifford: false,
            },
        ),
        "three_fermion" => (
            slots(&[("h0", 2), ("v0", 2), ("h1", 2), ("v1", 2)]),
            three_fermion(),
            CatalogEntry {
                name: name.into(),
                parameter: None,
                expected: ExpectedAnyons {
                    fusion_group: vec![2, 2],
                    data: data(vec![2, 2], vec![2, 2], vec![vec![1, 1], vec![1, 1]]),
                    modular: true,
                },
                logical_index: 16,
                pre_clifford: false,
            },
        ),
        "zp_zp2" => {
            let p = need("p", &|v| [2, 3, 5].contains(&v), None)?;
            (
                slots(&[("h0", p), ("v0", p), ("h1", p * p), ("v1", p * p)]),
                zp_zp2(p),
                CatalogEntry {
                    name: name.into(),
                    parameter: Some(p),
                    expected: ExpectedAnyons {
                        fusion_group: vec![p, p * p],
                        data: data(vec![p, p * p], vec![0, 0], vec![vec![0, 1], vec![1, 0]]),
                        modular: false,
                    },
                    logical_index: (p * p * p * p) as u64,
                    pre_clifford: false,
                },
            )
        }
        _ => return Err(Error::UnknownCode(name.into())),
    };
    let lat = TorusLattice::new(lx, ly, sl)?;
    let code = TorusCode::new(name, lat, templates)?;
    Ok((code, entry))
}

//! Three operations for the static demo page: build a catalog code, check the
//! counting identity, extract anyons. Every function returns a JSON string.

use toposub::anyon_lab::{AnyonLab, DEFAULT_ANYON_WINDOW};
use toposub::catalog::{catalog_get, parse_catalog_spec};
use toposub::code::{CodeAnalysis, TorusCode, DEFAULT_WINDOW};
use wasm_bindgen::prelude::*;

fn code(spec: &str, l: usize) -> Result<TorusCode, JsValue> {
    let (name, par) = parse_catalog_spec(spec).map_err(err)?;
    Ok(catalog_get(&name, par, l, l).map_err(err)?.0)
}

fn err(e: toposub::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[wasm_bindgen]
pub fn build_code(spec: &str, l: usize) -> Result<String, JsValue> {
    Ok(code(spec, l)?.to_json())
}

#[wasm_bindgen]
pub fn verify_code(spec: &str, l: usize) -> Result<String, JsValue> {
    let a = CodeAnalysis::new(&code(spec, l)?, DEFAULT_WINDOW).map_err(err)?;
    serde_json::to_string(&a.report()).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn extract_anyons(spec: &str, l: usize) -> Result<String, JsValue> {
    let a = CodeAnalysis::new(&code(spec, l)?, DEFAULT_WINDOW).map_err(err)?;
    let lab = AnyonLab::new(&a, DEFAULT_ANYON_WINDOW).map_err(err)?;
    serde_json::to_string(&lab.report(&a)).map_err(|e| JsValue::from_str(&e.to_string()))
}

//! Browser bindings for the s-difference toolkit: the toy penalty
//! landscape, a prox-map explorer, and a small compressed-sensing recovery
//! demo. All exports take and return JSON strings; the logic lives in
//! [`api`] and runs on any target.
//!
//! Build for the web with
//! `wasm-pack build crates/sdiff-wasm --target web --out-dir ../../demo/pkg`.

mod api;

pub use api::{
    prox_explore as prox_explore_json, recovery_demo as recovery_demo_json,
    toy_curves as toy_curves_json,
};

use wasm_bindgen::prelude::*;

/// Penalty curves along the toy solution family; `s` is the sparsity level
/// of the difference rows.
#[wasm_bindgen]
pub fn toy_curves(step: f64, s: usize) -> Result<String, JsValue> {
    api::toy_curves(step, s).map_err(|e| JsValue::from_str(&e))
}

/// Closed-form prox of the s-difference penalty on a user vector, plus the
/// scalar tail-response curve.
#[wasm_bindgen]
pub fn prox_explore(request: &str) -> Result<String, JsValue> {
    api::prox_explore(request).map_err(|e| JsValue::from_str(&e))
}

/// Seeded compressed-sensing recovery: s-difference FBS versus l1-ADMM.
#[wasm_bindgen]
pub fn recovery_demo(request: &str) -> Result<String, JsValue> {
    api::recovery_demo(request).map_err(|e| JsValue::from_str(&e))
}

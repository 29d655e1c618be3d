//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain numbers or strings and returns JSON text. The
//! `*_json` functions do the work and stay testable off the browser.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use shadowlab::colex::prefix_shadow_profile;
use shadowlab::combinatorics::{cascade_generalized, cascade_hm};
use shadowlab::families::FamilySpec;
use shadowlab::verify::{scan_fact_1_7, scan_fact_matching, Scan};

/// Largest layer the shadow curve will walk.
const CURVE_LIMIT: u128 = 200_000;
/// Widest scan range.
const SCAN_LIMIT: u32 = 200;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Cascade representation of `m`; `layer` is `full`, `em` or `hm`.
pub fn cascade_json(layer: &str, m: f64, k: u32, s: u32, t: u32) -> Result<String, String> {
    if !(m.is_finite() && m >= 1.0 && m.fract() == 0.0 && m <= 9.0e15) {
        return Err(format!("m must be a positive integer, got {m}"));
    }
    let m = m as u128;
    let rep = match layer {
        "full" => cascade_generalized(m, k, 0, 0),
        "em" => cascade_generalized(m, k, s, t),
        "hm" => cascade_hm(m, k, s, t),
        _ => return Err(format!("unknown layer {layer:?}")),
    }
    .map_err(|e| e.to_string())?;
    let levels: Vec<Value> = rep.levels().map(|(i, a)| json!({ "i": i, "a": a })).collect();
    Ok(json!({ "text": rep.to_string(), "h": rep.h, "levels": levels }).to_string())
}

/// `|∂_ℓ L_m|` for every `m` along the layer named by `spec`, e.g.
/// `em:n=10,k=3,s=1,t=1`.
pub fn shadow_curve_json(spec: &str, ell: u32) -> Result<String, String> {
    let spec: FamilySpec = spec.parse().map_err(|e: shadowlab::Error| e.to_string())?;
    if ell < 1 || ell >= spec.k() {
        return Err(format!("ell must lie in 1..{}", spec.k()));
    }
    let size = spec.size().map_err(|e| e.to_string())?;
    if size > CURVE_LIMIT {
        return Err(format!("layer has {size} sets; the demo stops at {CURVE_LIMIT}"));
    }
    let layer = spec.build().map_err(|e| e.to_string())?;
    let curve = prefix_shadow_profile(layer.members(), ell);
    Ok(json!({ "spec": spec.to_string(), "ell": ell, "shadow": curve }).to_string())
}

fn scan_value(scan: Scan) -> Value {
    let rows: Vec<Value> = scan
        .rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "m": r.m.to_string(),
                "left": r.left.to_string(),
                "right": r.right.map(|v| v.to_string()),
                "strict": r.strict,
            })
        })
        .collect();
    json!({ "rows": rows, "least": scan.least, "holds_from": scan.holds_from })
}

/// Scan of a construction against the colex segment of the same size.
/// `kind = "intersecting"` uses `(k, t, ell)`, `kind = "matching"` uses `(k, s)`.
pub fn fact_scan_json(kind: &str, k: u32, param: u32, ell: u32, lo: u32, hi: u32) -> Result<String, String> {
    if hi < lo || hi - lo > SCAN_LIMIT {
        return Err(format!("range [{lo},{hi}] is empty or wider than {SCAN_LIMIT}"));
    }
    let scan = match kind {
        "intersecting" => scan_fact_1_7(k, param, ell, lo, hi),
        "matching" => scan_fact_matching(k, param, lo, hi),
        _ => return Err(format!("unknown scan {kind:?}")),
    }
    .map_err(|e| e.to_string())?;
    Ok(scan_value(scan).to_string())
}

#[wasm_bindgen]
pub fn cascade(layer: &str, m: f64, k: u32, s: u32, t: u32) -> Result<String, JsValue> {
    js(cascade_json(layer, m, k, s, t))
}

#[wasm_bindgen]
pub fn shadow_curve(spec: &str, ell: u32) -> Result<String, JsValue> {
    js(shadow_curve_json(spec, ell))
}

#[wasm_bindgen]
pub fn fact_scan(kind: &str, k: u32, param: u32, ell: u32, lo: u32, hi: u32) -> Result<String, JsValue> {
    js(fact_scan_json(kind, k, param, ell, lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn cascade_star() {
        let v = parse(cascade_json("em", 22.0, 3, 1, 1).unwrap());
        assert_eq!(v["text"], "h=2 a=[2,8]");
        assert!(cascade_json("em", 2.5, 3, 1, 1).is_err());
        assert!(cascade_json("xx", 2.0, 3, 1, 1).is_err());
    }

    #[test]
    fn curve_ends_at_layer_shadow() {
        let v = parse(shadow_curve_json("full:n=6,k=3", 1).unwrap());
        let curve = v["shadow"].as_array().unwrap();
        assert_eq!(curve.len(), 21);
        assert_eq!(curve[5], 8);
        assert_eq!(curve[20], 15);
        assert!(shadow_curve_json("full:n=6,k=3", 3).is_err());
    }

    #[test]
    fn scan_near_miss_row() {
        let v = parse(fact_scan_json("intersecting", 3, 1, 1, 10, 10).unwrap());
        assert_eq!(v["rows"][0]["left"], "24");
        assert_eq!(v["rows"][0]["right"], "30");
        assert!(fact_scan_json("matching", 3, 2, 1, 12, 1000).is_err());
    }
}

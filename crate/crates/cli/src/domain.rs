use std::fs;

use gaplab_core::geometry::{ConvexPolygon, DomainSpec};
use serde::Deserialize;

#[derive(Deserialize)]
struct PolygonJson {
    vertices: Vec<[f64; 2]>,
}

/// Resolves a domain argument: a built-in name, `random:<k>` completed with
/// `seed`, or a path to a polygon JSON file. Returns the canonical name too.
pub fn resolve(spec: &str, seed: Option<u64>) -> Result<(String, ConvexPolygon), String> {
    if spec.ends_with(".json") {
        let text = fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
        let p: PolygonJson = serde_json::from_str(&text).map_err(|e| format!("{spec}: {e}"))?;
        let poly = ConvexPolygon::from_coords(&p.vertices).map_err(|e| format!("{spec}: {e}"))?;
        return Ok((spec.to_string(), poly));
    }
    let full = match spec.split(':').collect::<Vec<_>>().as_slice() {
        ["random"] | ["random", _] => {
            let seed = seed.ok_or("random domains need a seed (--seed or GAPLAB_SEED)")?;
            let k = spec.split(':').nth(1).unwrap_or("6");
            format!("random:{k}:{seed}")
        }
        _ => spec.to_string(),
    };
    let parsed: DomainSpec = full.parse().map_err(|e| format!("{e}; expected square, disk, triangle, diamond, rect:<d>:<eps>, ngon:<k>, sector:<angle>, random:<k>:<seed> or a .json file"))?;
    let poly = parsed.build().map_err(|e| e.to_string())?;
    Ok((parsed.to_string(), poly))
}

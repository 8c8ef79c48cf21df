//! Transport-free request handling. Every endpoint is a pure function of the
//! request body and the state loaded at startup.

use std::path::{Component, Path, PathBuf};

use patternc_core::assembler::{assemble_garment, check_pattern, export_svg, Pattern};
use patternc_core::codec::{decode_merge, encode_vector, make_skeleton, Encoded};
use patternc_core::sampler::make_edit_pair;
use patternc_core::schema::{
    parse_document, prune_config, validate_config, Document, FieldRegistry, GarmentConfig, SchemaError, ValidationReport,
};
use patternc_core::simparams::{map_scores, AlphaCoeffs, DescriptorScores, MapMode, MaterialRegistry, Pairing};
use patternc_core::BodyModel;
use serde::Deserialize;
use serde_json::{json, Value};

pub const JSON: &str = "application/json";

#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl Response {
    fn json(status: u16, v: &Value) -> Response {
        let mut body = serde_json::to_vec_pretty(v).expect("json value serializes");
        body.push(b'\n');
        Response { status, content_type: JSON, body }
    }

    fn error(status: u16, code: &str, message: impl Into<String>) -> Response {
        Response::json(status, &json!({"code": code, "message": message.into()}))
    }

    pub fn text(&self) -> &str {
        std::str::from_utf8(&self.body).unwrap_or("")
    }
}

/// Immutable state shared by all requests.
#[derive(Debug, Clone)]
pub struct Service {
    pub registry: FieldRegistry,
    pub body: BodyModel,
    pub materials: MaterialRegistry,
    /// Directory of static files served for non-API `GET` requests.
    pub assets: Option<PathBuf>,
}

impl Default for Service {
    fn default() -> Self {
        Service {
            registry: FieldRegistry::default(),
            body: BodyModel::default(),
            materials: MaterialRegistry::default(),
            assets: None,
        }
    }
}

type Handled = Result<Value, Response>;

fn bad_json(e: impl std::fmt::Display) -> Response {
    Response::error(400, "MALFORMED_JSON", e.to_string())
}

fn schema_error(e: SchemaError) -> Response {
    match e {
        SchemaError::Syntax { .. } | SchemaError::NotAnObject => bad_json(e),
        e => Response::error(422, e.code(), e.to_string()),
    }
}

fn report_error(r: &ValidationReport) -> Response {
    Response::json(422, &serde_json::to_value(r).expect("report serializes"))
}

fn parse_value(body: &[u8]) -> Result<Value, Response> {
    serde_json::from_slice(body).map_err(bad_json)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Response> {
    v.get(key).ok_or_else(|| Response::error(400, "MALFORMED_JSON", format!("missing field {key}")))
}

impl Service {
    fn checked(&self, v: &Value) -> Result<GarmentConfig, Response> {
        let cfg = GarmentConfig::from_json(v).map_err(schema_error)?;
        let report = validate_config(&cfg, &self.registry);
        if !report.ok {
            return Err(report_error(&report));
        }
        Ok(prune_config(&cfg, &self.registry))
    }

    fn compile_one(&self, cfg: &GarmentConfig) -> Result<(Pattern, Value), Response> {
        let pattern = assemble_garment(cfg, &self.registry, &self.body).map_err(|e| Response::error(422, e.code(), e.to_string()))?;
        let v = json!({
            "pattern": serde_json::to_value(&pattern).expect("pattern serializes"),
            "svg": export_svg(&pattern),
            "validity": serde_json::to_value(check_pattern(&pattern)).expect("validity serializes"),
        });
        Ok((pattern, v))
    }

    fn validate(&self, body: &[u8]) -> Handled {
        let v = parse_value(body)?;
        let cfg = GarmentConfig::from_json(&v).map_err(schema_error)?;
        let report = validate_config(&cfg, &self.registry);
        if !report.ok {
            return Err(report_error(&report));
        }
        Ok(serde_json::to_value(report).expect("report serializes"))
    }

    fn compile(&self, body: &[u8]) -> Handled {
        let text = std::str::from_utf8(body).map_err(bad_json)?;
        match parse_document(text).map_err(schema_error)? {
            Document::Garment(_) => {
                let cfg = self.checked(&parse_value(body)?)?;
                Ok(self.compile_one(&cfg)?.1)
            }
            Document::Outfit(o) => {
                let mut garments = vec![];
                for (slot, g) in o.garments() {
                    let cfg = self.checked(&g.to_json())?;
                    let mut v = self.compile_one(&cfg)?.1;
                    v["slot"] = json!(slot);
                    garments.push(v);
                }
                Ok(json!({ "garments": garments }))
            }
        }
    }

    fn encode(&self, body: &[u8]) -> Handled {
        let cfg = self.checked(&parse_value(body)?)?;
        let enc = encode_vector(&cfg, &self.registry);
        Ok(json!({
            "skeleton": make_skeleton(&cfg, &self.registry).to_json(),
            "values": enc.values,
            "mask": enc.mask,
        }))
    }

    fn decode(&self, body: &[u8]) -> Handled {
        let v = parse_value(body)?;
        let skeleton = self.checked(field(&v, "skeleton")?)?;
        let enc = Encoded {
            values: serde_json::from_value(field(&v, "values")?.clone()).map_err(bad_json)?,
            mask: serde_json::from_value(field(&v, "mask")?.clone()).map_err(bad_json)?,
        };
        let cfg = decode_merge(&skeleton, &enc, &self.registry).map_err(|e| Response::error(422, e.code(), e.to_string()))?;
        Ok(cfg.to_json())
    }

    fn simparams(&self, body: &[u8]) -> Handled {
        #[derive(Deserialize)]
        struct Req {
            material: String,
            scores: DescriptorScores,
            #[serde(default)]
            alpha: AlphaCoeffs,
            #[serde(default)]
            mode: MapMode,
            #[serde(default)]
            pairing: Pairing,
        }
        let req: Req = serde_json::from_slice(body).map_err(bad_json)?;
        let fail = |e: patternc_core::simparams::SimParamsError| Response::error(422, e.code(), e.to_string());
        let (base, base_scores) = self.materials.lookup_base(&req.material).map_err(fail)?;
        let params = map_scores(&base, &base_scores, &req.scores, &req.alpha, req.mode, req.pairing).map_err(fail)?;
        Ok(json!({
            "material": req.material,
            "base": base,
            "base_scores": base_scores,
            "scores": req.scores,
            "params": params,
        }))
    }

    fn editpair(&self, body: &[u8]) -> Handled {
        let v = parse_value(body)?;
        let a = self.checked(field(&v, "a")?)?;
        let b = self.checked(field(&v, "b")?)?;
        let rec = make_edit_pair(&a, &b, &self.registry).map_err(|e| Response::error(422, e.code(), e.to_string()))?;
        Ok(serde_json::to_value(rec).expect("edit record serializes"))
    }

    fn asset(&self, path: &str) -> Option<Response> {
        let root = self.assets.as_ref()?;
        let rel = Path::new(path.trim_start_matches('/'));
        if rel.components().any(|c| !matches!(c, Component::Normal(_))) {
            return None;
        }
        let file = if rel.as_os_str().is_empty() { root.join("index.html") } else { root.join(rel) };
        let body = std::fs::read(&file).ok()?;
        let content_type = match file.extension().and_then(|e| e.to_str()) {
            Some("html") => "text/html; charset=utf-8",
            Some("js") => "text/javascript",
            Some("css") => "text/css",
            Some("svg") => "image/svg+xml",
            Some("json") => JSON,
            _ => "application/octet-stream",
        };
        Some(Response { status: 200, content_type, body })
    }

    /// Routes one request. Unknown paths give 404, known paths with the wrong method 405.
    pub fn handle_request(&self, method: &str, path: &str, body: &[u8]) -> Response {
        let path = path.split('?').next().unwrap_or(path);
        let result = match (method, path) {
            ("GET", "/schema") => Ok(self.registry.to_json()),
            ("POST", "/validate") => self.validate(body),
            ("POST", "/compile") => self.compile(body),
            ("POST", "/encode") => self.encode(body),
            ("POST", "/decode") => self.decode(body),
            ("POST", "/simparams") => self.simparams(body),
            ("POST", "/editpair") => self.editpair(body),
            (_, "/schema" | "/validate" | "/compile" | "/encode" | "/decode" | "/simparams" | "/editpair") => {
                Err(Response::error(405, "METHOD_NOT_ALLOWED", format!("{method} not allowed on {path}")))
            }
            ("GET", _) => Err(self.asset(path).unwrap_or_else(|| Response::error(404, "NOT_FOUND", path))),
            _ => Err(Response::error(404, "NOT_FOUND", path)),
        };
        result.map(|v| Response::json(200, &v)).unwrap_or_else(|r| r)
    }
}

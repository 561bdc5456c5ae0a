//! JSON body specifications.
//!
//! ```json
//! {"kind": "revolution",
//!  "profile": {"type": "analytic", "name": "perturbed_ball",
//!              "params": {"R": 2.0, "eps": 0.05, "mode": 4}},
//!  "label": "K"}
//! ```
//!
//! Revolution names: `ball` (R), `inner_ball` (r), `perturbed_ball` (R, eps,
//! mode), `bumped_ball` (R, eps, x0), `ellipsoid` (a, b). Planar names:
//! `ball`/`disc` (R), `inner_ball` (r), `ellipse` (a, b), each with optional
//! centre `cx`, `cy`, and `perturbed_ball` (R, eps, mode), the disc
//! `ρ = R(1 + eps·cos(mode·θ))`.
//! Sampled profiles give `x`/`r` arrays; for planar bodies `x` holds polar
//! angles about the origin.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::geometry::{GeometryError, PlanarBody, RevolutionProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("cannot read body spec {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed body spec: {0}")]
    Json(String),
    #[error("unknown {kind} body '{name}'")]
    UnknownName { kind: &'static str, name: String },
    #[error("body '{name}' is missing parameter '{param}'")]
    MissingParam { name: String, param: &'static str },
    #[error("body '{name}' does not take parameter '{param}'")]
    UnknownParam { name: String, param: String },
    #[error("parameter '{param}' must be an integer, got {value}")]
    NotInteger { param: &'static str, value: f64 },
    #[error("invalid body: {0}")]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Revolution,
    Planar,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileSpec {
    Analytic {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Samples {
        x: Vec<f64>,
        r: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub kind: BodyKind,
    pub profile: ProfileSpec,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone)]
pub enum Body {
    Revolution(RevolutionProfile),
    Planar(PlanarBody),
}

impl Body {
    pub fn label(&self) -> &str {
        match self {
            Body::Revolution(p) => p.label(),
            Body::Planar(p) => p.label(),
        }
    }

    pub fn kind(&self) -> BodyKind {
        match self {
            Body::Revolution(_) => BodyKind::Revolution,
            Body::Planar(_) => BodyKind::Planar,
        }
    }
}

struct Params<'a> {
    name: &'a str,
    map: &'a BTreeMap<String, f64>,
}

impl Params<'_> {
    fn allow(&self, keys: &[&str]) -> Result<(), SpecError> {
        match self.map.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(SpecError::UnknownParam {
                name: self.name.into(),
                param: k.clone(),
            }),
            None => Ok(()),
        }
    }

    fn get(&self, key: &'static str) -> Result<f64, SpecError> {
        self.map.get(key).copied().ok_or(SpecError::MissingParam {
            name: self.name.into(),
            param: key,
        })
    }

    fn or(&self, key: &str, default: f64) -> f64 {
        self.map.get(key).copied().unwrap_or(default)
    }

    fn mode(&self) -> Result<u32, SpecError> {
        let m = self.get("mode")?;
        if m.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&m) {
            return Err(SpecError::NotInteger {
                param: "mode",
                value: m,
            });
        }
        Ok(m as u32)
    }
}

impl BodySpec {
    pub fn build(&self) -> Result<Body, SpecError> {
        let body = match (&self.kind, &self.profile) {
            (BodyKind::Revolution, ProfileSpec::Analytic { name, params }) => {
                let p = Params { name, map: params };
                let prof = match name.as_str() {
                    "ball" => {
                        p.allow(&["R"])?;
                        RevolutionProfile::ball(p.get("R")?)?
                    }
                    "inner_ball" => {
                        p.allow(&["r"])?;
                        RevolutionProfile::ball(p.get("r")?)?
                    }
                    "perturbed_ball" => {
                        p.allow(&["R", "eps", "mode"])?;
                        RevolutionProfile::perturbed_ball(p.get("R")?, p.get("eps")?, p.mode()?)?
                    }
                    "bumped_ball" => {
                        p.allow(&["R", "eps", "x0"])?;
                        RevolutionProfile::bumped_ball(p.get("R")?, p.get("eps")?, p.get("x0")?)?
                    }
                    "ellipsoid" => {
                        p.allow(&["a", "b"])?;
                        RevolutionProfile::ellipsoid(p.get("a")?, p.get("b")?)?
                    }
                    _ => {
                        return Err(SpecError::UnknownName {
                            kind: "revolution",
                            name: name.clone(),
                        })
                    }
                };
                prof.validate()?;
                Body::Revolution(prof)
            }
            (BodyKind::Revolution, ProfileSpec::Samples { x, r }) => {
                let prof = RevolutionProfile::from_samples(x, r, "sampled")?;
                prof.validate()?;
                Body::Revolution(prof)
            }
            (BodyKind::Planar, ProfileSpec::Analytic { name, params }) => {
                let p = Params { name, map: params };
                let center = || [p.or("cx", 0.0), p.or("cy", 0.0)];
                let body = match name.as_str() {
                    "ball" | "disc" => {
                        p.allow(&["R", "cx", "cy"])?;
                        PlanarBody::disc(center(), p.get("R")?)?
                    }
                    "inner_ball" => {
                        p.allow(&["r", "cx", "cy"])?;
                        PlanarBody::disc(center(), p.get("r")?)?
                    }
                    "ellipse" => {
                        p.allow(&["a", "b", "cx", "cy"])?;
                        PlanarBody::ellipse(center(), p.get("a")?, p.get("b")?)?
                    }
                    "perturbed_ball" => {
                        p.allow(&["R", "eps", "mode"])?;
                        PlanarBody::perturbed_disc(p.get("R")?, p.get("eps")?, p.mode()?)?
                    }
                    _ => {
                        return Err(SpecError::UnknownName {
                            kind: "planar",
                            name: name.clone(),
                        })
                    }
                };
                body.validate()?;
                Body::Planar(body)
            }
            (BodyKind::Planar, ProfileSpec::Samples { x, r }) => {
                let body = PlanarBody::from_samples([0.0, 0.0], x, r, "sampled")?;
                body.validate()?;
                Body::Planar(body)
            }
        };
        Ok(match (&self.label, body) {
            (Some(l), Body::Revolution(p)) => Body::Revolution(p.with_label(l.clone())),
            (Some(l), Body::Planar(p)) => Body::Planar(p.with_label(l.clone())),
            (None, b) => b,
        })
    }
}

/// Parses and builds a body from JSON text.
pub fn parse_body_spec(text: &str) -> Result<Body, SpecError> {
    let spec: BodySpec = serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
    spec.build()
}

pub fn load_body_spec(path: &Path) -> Result<Body, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_body_spec(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_revolution_bodies() {
        let b =
            parse_body_spec(r#"{"kind":"revolution","profile":{"type":"analytic","name":"ball","params":{"R":2}}}"#)
                .unwrap();
        match b {
            Body::Revolution(p) => assert!((p.radius(0.0) - 2.0).abs() < 1e-15),
            _ => panic!("expected revolution"),
        }
        let b = parse_body_spec(
            r#"{"kind":"revolution","profile":{"type":"analytic","name":"perturbed_ball","params":{"R":2,"eps":0.05,"mode":4}},"label":"K"}"#,
        )
        .unwrap();
        assert_eq!(b.label(), "K");
    }

    #[test]
    fn planar_bodies() {
        let b = parse_body_spec(
            r#"{"kind":"planar","profile":{"type":"analytic","name":"inner_ball","params":{"r":1,"cx":0.3}}}"#,
        )
        .unwrap();
        match b {
            Body::Planar(p) => assert_eq!(p.basepoint(), [0.3, 0.0]),
            _ => panic!("expected planar"),
        }
        assert!(parse_body_spec(
            r#"{"kind":"planar","profile":{"type":"analytic","name":"ellipse","params":{"a":2,"b":1}}}"#
        )
        .is_ok());
    }

    #[test]
    fn sampled_profile() {
        let x: Vec<f64> = (0..=64).map(|k| -1.0 + k as f64 / 32.0).collect();
        let r: Vec<f64> = x.iter().map(|v| 1.0 - v * v).collect();
        let text =
            serde_json::json!({"kind": "revolution", "profile": {"type": "samples", "x": x, "r": r}}).to_string();
        assert!(matches!(parse_body_spec(&text), Ok(Body::Revolution(_))));
    }

    #[test]
    fn strict_parsing() {
        let bad = [
            r#"{"kind":"revolution","profile":{"type":"analytic","name":"cube","params":{}}}"#,
            r#"{"kind":"revolution","profile":{"type":"analytic","name":"ball","params":{"r":1}}}"#,
            r#"{"kind":"revolution","profile":{"type":"analytic","name":"ball","params":{"R":1,"x":1}}}"#,
            r#"{"kind":"revolution","profile":{"type":"analytic","name":"perturbed_ball","params":{"R":2,"eps":0.1,"mode":2.5}}}"#,
            r#"{"kind":"solid","profile":{"type":"analytic","name":"ball","params":{"R":1}}}"#,
            r#"{"kind":"planar","profile":{"type":"analytic","name":"ball","params":{"R":1}},"extra":1}"#,
            r#"{"kind":"planar"#,
            r#"{"kind":"revolution","profile":{"type":"analytic","name":"ball","params":{"R":-1}}}"#,
        ];
        for b in bad {
            assert!(parse_body_spec(b).is_err(), "{b}");
        }
    }

    #[test]
    fn error_variants() {
        let e = parse_body_spec(r#"{"kind":"revolution","profile":{"type":"analytic","name":"ball","params":{}}}"#)
            .unwrap_err();
        assert_eq!(
            e,
            SpecError::MissingParam {
                name: "ball".into(),
                param: "R"
            }
        );
        let e = load_body_spec(Path::new("/nonexistent/k.json")).unwrap_err();
        assert!(matches!(e, SpecError::Io { .. }));
    }
}

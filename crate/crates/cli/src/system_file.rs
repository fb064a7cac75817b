//! Substitution systems read from JSON.
//!
//! ```json
//! {
//!   "inflation": "2",
//!   "prototiles": [
//!     {"label": "S", "kind": "other", "oriented": true,
//!      "vertices": [["0","0"], ["1","0"], ["1","1"], ["0","1"]]}
//!   ],
//!   "rules": {
//!     "S": [{"tile": "S", "rotation": ["1","0"], "translation": ["0","0"]}, ...]
//!   }
//! }
//! ```
//!
//! Scalars are strings in `Q(√5)`, e.g. `"3/5"`, `"2/5*sqrt5"`,
//! `"1/2+1/2*sqrt5"`. A rotation is given by its cosine and sine. Instead of
//! a full description, `{"builtin": "pinwheel"}` names a built-in system.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tilehull_core::exact::{ExactScalar, Motion, Point, Polygon};
use tilehull_core::tiling::{
    derive_kr_system, pinwheel_triangle_system, toy_square_system, Prototile, SubstitutionSystem, Tile, TileKind,
};

pub const BUILTINS: &[&str] = &["pinwheel", "triangle", "toy"];

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub inflation: Option<String>,
    #[serde(default)]
    pub prototiles: Vec<PrototileSpec>,
    #[serde(default)]
    pub rules: BTreeMap<String, Vec<ChildSpec>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrototileSpec {
    pub label: String,
    #[serde(default = "other_kind")]
    pub kind: String,
    pub vertices: Vec<[String; 2]>,
    #[serde(default)]
    pub oriented: bool,
    #[serde(default)]
    pub marks: Vec<[[String; 2]; 2]>,
}

fn other_kind() -> String {
    "other".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChildSpec {
    pub tile: String,
    #[serde(default = "no_rotation")]
    pub rotation: [String; 2],
    #[serde(default = "no_translation")]
    pub translation: [String; 2],
}

fn no_rotation() -> [String; 2] {
    ["1".into(), "0".into()]
}

fn no_translation() -> [String; 2] {
    ["0".into(), "0".into()]
}

/// A malformed system description; `field` is a JSON path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for SystemError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for SystemError {}

fn err(field: impl Into<String>, message: impl Into<String>) -> SystemError {
    SystemError {
        field: field.into(),
        message: message.into(),
    }
}

pub fn builtin(name: &str) -> Result<SubstitutionSystem, SystemError> {
    match name {
        "pinwheel" => derive_kr_system().map_err(|e| err("builtin", e.to_string())),
        "triangle" => Ok(pinwheel_triangle_system()),
        "toy" => Ok(toy_square_system()),
        other => Err(err(
            "builtin",
            format!("unknown built-in system {other:?}; known: {}", BUILTINS.join(", ")),
        )),
    }
}

fn scalar(field: &str, s: &str) -> Result<ExactScalar, SystemError> {
    s.parse().map_err(|_| err(field, format!("malformed scalar {s:?}")))
}

fn point(field: &str, p: &[String; 2]) -> Result<Point, SystemError> {
    Ok(Point::new(scalar(&format!("{field}[0]"), &p[0])?, scalar(&format!("{field}[1]"), &p[1])?))
}

/// Parses JSON, reporting the path of the first offending field.
pub fn parse_system(json: &str) -> Result<SubstitutionSystem, SystemError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let file: SystemFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        err(if path == "." { "<root>".into() } else { path }, e.into_inner().to_string())
    })?;
    build_system(&file)
}

pub fn build_system(file: &SystemFile) -> Result<SubstitutionSystem, SystemError> {
    if let Some(name) = &file.builtin {
        if file.inflation.is_some() || !file.prototiles.is_empty() || !file.rules.is_empty() {
            return Err(err("builtin", "a built-in system takes no further fields"));
        }
        return builtin(name);
    }
    let inflation = scalar(
        "inflation",
        file.inflation.as_deref().ok_or_else(|| err("inflation", "missing field"))?,
    )?;
    if file.prototiles.is_empty() {
        return Err(err("prototiles", "at least one prototile is required"));
    }
    let mut index = BTreeMap::new();
    let mut protos = Vec::new();
    for (i, p) in file.prototiles.iter().enumerate() {
        let f = format!("prototiles[{i}]");
        if index.insert(p.label.clone(), i).is_some() {
            return Err(err(format!("{f}.label"), format!("duplicate label {:?}", p.label)));
        }
        let kind = TileKind::from_name(&p.kind).ok_or_else(|| err(format!("{f}.kind"), "unknown kind"))?;
        let vs = p
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| point(&format!("{f}.vertices[{k}]"), v))
            .collect::<Result<Vec<_>, _>>()?;
        let poly = Polygon::new(vs).map_err(|e| err(format!("{f}.vertices"), e.to_string()))?;
        let mut proto = Prototile::new(&p.label, kind, poly);
        for (k, [a, b]) in p.marks.iter().enumerate() {
            proto = proto.with_mark(point(&format!("{f}.marks[{k}][0]"), a)?, point(&format!("{f}.marks[{k}][1]"), b)?);
        }
        if p.oriented {
            proto = proto.oriented();
        }
        protos.push(proto);
    }
    for label in file.rules.keys() {
        if !index.contains_key(label) {
            return Err(err(format!("rules.{label}"), "names no prototile"));
        }
    }
    let mut rules = Vec::new();
    for p in &file.prototiles {
        let f = format!("rules.{}", p.label);
        let children = file.rules.get(&p.label).ok_or_else(|| err(&f, "missing rule"))?;
        let mut rule = Vec::new();
        for (k, c) in children.iter().enumerate() {
            let cf = format!("{f}[{k}]");
            let proto = *index
                .get(&c.tile)
                .ok_or_else(|| err(format!("{cf}.tile"), format!("unknown prototile {:?}", c.tile)))?;
            let cos = scalar(&format!("{cf}.rotation[0]"), &c.rotation[0])?;
            let sin = scalar(&format!("{cf}.rotation[1]"), &c.rotation[1])?;
            let t = point(&format!("{cf}.translation"), &c.translation)?;
            let m = Motion::new(cos, sin, t).map_err(|e| err(format!("{cf}.rotation"), e.to_string()))?;
            rule.push(Tile::new(proto, m));
        }
        rules.push(rule);
    }
    SubstitutionSystem::new(protos, inflation, rules).map_err(|e| err("rules", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{
        "inflation": "2",
        "prototiles": [{"label": "S", "oriented": true,
                        "vertices": [["0","0"],["1","0"],["1","1"],["0","1"]]}],
        "rules": {"S": [{"tile": "S"},
                        {"tile": "S", "translation": ["1","0"]},
                        {"tile": "S", "translation": ["0","1"]},
                        {"tile": "S", "translation": ["1","1"]}]}
    }"#;

    #[test]
    fn square_file_matches_builtin() {
        let s = parse_system(SQUARE).unwrap();
        assert_eq!(s, toy_square_system());
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_system(&SQUARE.replace("\"inflation\": \"2\"", "\"inflation\": \"two\"")).unwrap_err();
        assert_eq!(e.field, "inflation");
        let e = parse_system(&SQUARE.replace("\"oriented\"", "\"orientd\"")).unwrap_err();
        assert!(e.field.starts_with("prototiles[0]"), "{e}");
        let e = parse_system(&SQUARE.replace("\"translation\": [\"1\",\"1\"]", "\"translation\": [\"1\",\"x\"]"))
            .unwrap_err();
        assert_eq!(e.field, "rules.S[3].translation[1]");
        let e = parse_system(&SQUARE.replace("{\"tile\": \"S\"},", "")).unwrap_err();
        assert_eq!(e.field, "rules");
        let e = parse_system(r#"{"builtin": "penrose"}"#).unwrap_err();
        assert_eq!(e.field, "builtin");
    }
}

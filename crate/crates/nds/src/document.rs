//! The system JSON document: spaces, named generators, schedule rules and
//! default parameters, plus the wire forms of points, regions, samples and
//! reports. Rationals travel as "p/q" strings; no floating point is
//! accepted for exact systems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::detectors::CheckParams;
use crate::error::{NdsError, Result};
use crate::hitting::{ClassVerdict, IndexSample};
use crate::interval::IntervalComp;
use crate::maps::{Affine, FiniteMap, MapSpec, PLMap};
use crate::point::Point;
use crate::reduce::TransferCase;
use crate::region::{CircleRegion, Cylinder, RegionSet};
use crate::report::{fnv1a64, PropertyReport};
use crate::scalar::{fmt_rat, parse_rat, Rat};
use crate::schedule::{Schedule, ScheduleRule};
use crate::seq::SeqPoint;
use crate::space::{FiniteMetric, SpaceSpec};
use crate::window::System;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDoc {
    UnitInterval,
    Circle,
    Finite {
        size: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        metric: Option<Vec<Vec<String>>>,
    },
    Shift,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub slope: String,
    pub intercept: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapDoc {
    Pl {
        breakpoints: Vec<String>,
        pieces: Vec<PieceDoc>,
        #[serde(skip_serializing_if = "Option::is_none")]
        at1: Option<String>,
    },
    Rotation {
        steps: i64,
        #[serde(skip_serializing_if = "Option::is_none")]
        offset: Option<String>,
    },
    Finite {
        table: Vec<usize>,
    },
    Shift {
        power: i64,
    },
    Identity,
    Composite {
        of: Vec<MapDoc>,
    },
    Inverse {
        of: Box<MapDoc>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleDoc {
    Periodic {
        word: Vec<String>,
    },
    Triangular {
        base: String,
        filler: String,
    },
    GrowingBlocks {
        generator: String,
        inverse: String,
        filler: String,
    },
    Explicit {
        prefix: Vec<String>,
        tail: Vec<String>,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefaultsDoc {
    #[serde(skip_serializing_if = "Option::is_none", rename = "T")]
    pub horizon: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "L")]
    pub word_len: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multi_m: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub schema_version: u32,
    pub space: SpaceDoc,
    pub generators: BTreeMap<String, MapDoc>,
    pub schedule: ScheduleDoc,
    #[serde(default)]
    pub defaults: DefaultsDoc,
}

impl SystemDocument {
    pub fn parse(text: &str) -> Result<SystemDocument> {
        let doc: SystemDocument =
            serde_json::from_str(text).map_err(|e| NdsError::Parse(format!("document: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(NdsError::Parse(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("document serializes")
    }

    /// Deterministic content hash over the canonical JSON form.
    pub fn hash(&self) -> String {
        fnv1a64(self.to_json().to_string().as_bytes())
    }

    /// Build the runtime system plus merged default parameters.
    pub fn instantiate(&self) -> Result<(System, CheckParams)> {
        let space = space_from_doc(&self.space)?;
        let mut names: Vec<&String> = self.generators.keys().collect();
        names.sort();
        let mut generators = Vec::with_capacity(names.len());
        let mut index_of: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            index_of.insert(name.as_str(), i);
            generators.push(((*name).clone(), map_from_doc(&self.generators[*name])?));
        }
        let resolve = |name: &String| -> Result<usize> {
            index_of.get(name.as_str()).copied().ok_or_else(|| {
                NdsError::Parse(format!("schedule references unknown generator {name:?}"))
            })
        };
        let rule = match &self.schedule {
            ScheduleDoc::Periodic { word } => ScheduleRule::Periodic {
                word: word.iter().map(resolve).collect::<Result<_>>()?,
            },
            ScheduleDoc::Triangular { base, filler } => ScheduleRule::Triangular {
                base: resolve(base)?,
                filler: resolve(filler)?,
            },
            ScheduleDoc::GrowingBlocks {
                generator,
                inverse,
                filler,
            } => ScheduleRule::GrowingBlocks {
                generator: resolve(generator)?,
                inverse: resolve(inverse)?,
                filler: resolve(filler)?,
            },
            ScheduleDoc::Explicit { prefix, tail } => ScheduleRule::Explicit {
                prefix: prefix.iter().map(resolve).collect::<Result<_>>()?,
                tail: tail.iter().map(resolve).collect::<Result<_>>()?,
            },
        };
        let schedule = Schedule::new(generators, rule)?;
        let system = System::new(space, schedule)?;
        let mut params = CheckParams::default();
        let d = &self.defaults;
        if let Some(t) = d.horizon {
            params.horizon = t;
        }
        if let Some(s) = &d.scale {
            params.scale = parse_rat(s)?;
        }
        if let Some(s) = &d.delta {
            params.delta = parse_rat(s)?;
        }
        if let Some(s) = &d.epsilon {
            params.epsilon = parse_rat(s)?;
        }
        if let Some(s) = &d.eta {
            params.eta = parse_rat(s)?;
        }
        if let Some(s) = &d.theta {
            params.theta = parse_rat(s)?;
        }
        if let Some(l) = d.word_len {
            params.word_len = l;
        }
        if let Some(p) = d.pairs {
            params.pair_budget = p;
        }
        if let Some(m) = d.multi_m {
            params.multi_m = m;
        }
        Ok((system, params))
    }

    /// Document form of a runtime system (used to export gallery fixtures).
    pub fn from_system(system: &System, defaults: DefaultsDoc) -> SystemDocument {
        let mut generators = BTreeMap::new();
        for (name, map) in system.schedule.generators() {
            generators.insert(name.clone(), map_to_doc(map));
        }
        let name_of = |i: &usize| system.schedule.generators()[*i].0.clone();
        let schedule = match system.schedule.rule() {
            ScheduleRule::Periodic { word } => ScheduleDoc::Periodic {
                word: word.iter().map(name_of).collect(),
            },
            ScheduleRule::Triangular { base, filler } => ScheduleDoc::Triangular {
                base: name_of(base),
                filler: name_of(filler),
            },
            ScheduleRule::GrowingBlocks {
                generator,
                inverse,
                filler,
            } => ScheduleDoc::GrowingBlocks {
                generator: name_of(generator),
                inverse: name_of(inverse),
                filler: name_of(filler),
            },
            ScheduleRule::Explicit { prefix, tail } => ScheduleDoc::Explicit {
                prefix: prefix.iter().map(name_of).collect(),
                tail: tail.iter().map(name_of).collect(),
            },
        };
        SystemDocument {
            schema_version: SCHEMA_VERSION,
            space: space_to_doc(&system.space),
            generators,
            schedule,
            defaults,
        }
    }
}

fn space_from_doc(doc: &SpaceDoc) -> Result<SpaceSpec> {
    Ok(match doc {
        SpaceDoc::UnitInterval => SpaceSpec::UnitInterval,
        SpaceDoc::Circle => SpaceSpec::Circle,
        SpaceDoc::Shift => SpaceSpec::Shift,
        SpaceDoc::Finite {
            size,
            labels,
            metric,
        } => {
            if let Some(ls) = labels {
                if ls.len() != *size {
                    return Err(NdsError::Parse("labels must match the space size".into()));
                }
            }
            let metric = match metric {
                None => FiniteMetric::Discrete,
                Some(rows) => {
                    if rows.len() != *size || rows.iter().any(|r| r.len() != *size) {
                        return Err(NdsError::Parse("metric table must be size x size".into()));
                    }
                    let mut table = Vec::with_capacity(*size);
                    for row in rows {
                        table.push(
                            row.iter()
                                .map(|s| parse_rat(s))
                                .collect::<Result<Vec<_>>>()?,
                        );
                    }
                    for (i, row) in table.iter().enumerate() {
                        for (j, value) in row.iter().enumerate() {
                            if value != &table[j][i] {
                                return Err(NdsError::Parse(
                                    "metric table must be symmetric".into(),
                                ));
                            }
                        }
                        if !row[i].eq(&Rat::from_integer(0.into())) {
                            return Err(NdsError::Parse("metric diagonal must be zero".into()));
                        }
                    }
                    FiniteMetric::Table(table)
                }
            };
            SpaceSpec::Finite {
                size: *size,
                labels: labels.clone(),
                metric,
            }
        }
    })
}

fn space_to_doc(space: &SpaceSpec) -> SpaceDoc {
    match space {
        SpaceSpec::UnitInterval => SpaceDoc::UnitInterval,
        SpaceSpec::Circle => SpaceDoc::Circle,
        SpaceSpec::Shift => SpaceDoc::Shift,
        SpaceSpec::Finite {
            size,
            labels,
            metric,
        } => SpaceDoc::Finite {
            size: *size,
            labels: labels.clone(),
            metric: match metric {
                FiniteMetric::Discrete => None,
                FiniteMetric::Table(t) => Some(
                    t.iter()
                        .map(|row| row.iter().map(fmt_rat).collect())
                        .collect(),
                ),
            },
        },
    }
}

pub fn map_from_doc(doc: &MapDoc) -> Result<MapSpec> {
    Ok(match doc {
        MapDoc::Identity => MapSpec::Identity,
        MapDoc::Shift { power } => MapSpec::Shift { power: *power },
        MapDoc::Finite { table } => MapSpec::Finite(FiniteMap::new(table.clone())?),
        MapDoc::Rotation { steps, offset } => MapSpec::Rotation {
            steps: *steps,
            offset: match offset {
                Some(s) => {
                    let r = parse_rat(s)?;
                    &r - r.floor()
                }
                None => Rat::from_integer(0.into()),
            },
        },
        MapDoc::Pl {
            breakpoints,
            pieces,
            at1,
        } => {
            let bps = breakpoints
                .iter()
                .map(|s| parse_rat(s))
                .collect::<Result<Vec<_>>>()?;
            let afs = pieces
                .iter()
                .map(|p| Ok(Affine::new(parse_rat(&p.slope)?, parse_rat(&p.intercept)?)))
                .collect::<Result<Vec<_>>>()?;
            match at1 {
                Some(v) => MapSpec::Pl(PLMap::with_value_at_one(bps, afs, parse_rat(v)?)?),
                None => MapSpec::Pl(PLMap::new(bps, afs)?),
            }
        }
        MapDoc::Composite { of } => {
            MapSpec::Composite(of.iter().map(map_from_doc).collect::<Result<_>>()?)
        }
        MapDoc::Inverse { of } => MapSpec::Inverse(Box::new(map_from_doc(of)?)),
    })
}

pub fn map_to_doc(map: &MapSpec) -> MapDoc {
    match map {
        MapSpec::Identity => MapDoc::Identity,
        MapSpec::Shift { power } => MapDoc::Shift { power: *power },
        MapSpec::Finite(t) => MapDoc::Finite {
            table: t.table.clone(),
        },
        MapSpec::Rotation { steps, offset } => MapDoc::Rotation {
            steps: *steps,
            offset: if offset == &Rat::from_integer(0.into()) {
                None
            } else {
                Some(fmt_rat(offset))
            },
        },
        MapSpec::Pl(pl) => {
            let derived_at1 = pl
                .pieces()
                .last()
                .unwrap()
                .apply(&Rat::from_integer(1.into()));
            MapDoc::Pl {
                breakpoints: pl.breakpoints().iter().map(fmt_rat).collect(),
                pieces: pl
                    .pieces()
                    .iter()
                    .map(|a| PieceDoc {
                        slope: fmt_rat(&a.slope),
                        intercept: fmt_rat(&a.intercept),
                    })
                    .collect(),
                at1: if &derived_at1 == pl.value_at_one() {
                    None
                } else {
                    Some(fmt_rat(pl.value_at_one()))
                },
            }
        }
        MapSpec::Composite(list) => MapDoc::Composite {
            of: list.iter().map(map_to_doc).collect(),
        },
        MapSpec::Inverse(inner) => MapDoc::Inverse {
            of: Box::new(map_to_doc(inner)),
        },
    }
}

/// Parse a point literal for the given space.
///
/// interval: "p/q"; circle: "p/q" or "p/q+ma" (m rotation steps);
/// finite: a label or index; shift: "left:center:right:start".
pub fn parse_point(space: &SpaceSpec, text: &str) -> Result<Point> {
    let s = text.trim();
    match space {
        SpaceSpec::UnitInterval => Point::interval(parse_rat(s)?),
        SpaceSpec::Circle => {
            if let Some((base, steps)) = s.split_once('+') {
                let steps = steps.trim().strip_suffix('a').ok_or_else(|| {
                    NdsError::Parse(format!("circle point {s:?}: steps must end in 'a'"))
                })?;
                let m: i64 = steps
                    .trim()
                    .parse()
                    .map_err(|_| NdsError::Parse(format!("bad step count in {s:?}")))?;
                Ok(Point::circle(parse_rat(base)?, m))
            } else {
                Ok(Point::circle(parse_rat(s)?, 0))
            }
        }
        SpaceSpec::Finite { size, .. } => {
            if let Some(i) = space.index_of_label(s) {
                return Ok(Point::Finite(i));
            }
            let i: usize = s
                .parse()
                .map_err(|_| NdsError::Parse(format!("unknown state {s:?}")))?;
            if i >= *size {
                return Err(NdsError::Parse(format!(
                    "state {i} outside space of size {size}"
                )));
            }
            Ok(Point::Finite(i))
        }
        SpaceSpec::Shift => {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 4 {
                return Err(NdsError::Parse(format!(
                    "shift point {s:?} must be left:center:right:start"
                )));
            }
            let start: i64 = parts[3]
                .parse()
                .map_err(|_| NdsError::Parse(format!("bad start index in {s:?}")))?;
            Ok(Point::Seq(SeqPoint::from_words(
                parts[0], parts[1], parts[2], start,
            )?))
        }
    }
}

/// Parse a region literal.
///
/// Strings use interval syntax "[a, b)", "(a, b]", "{p/q}" or "full";
/// arrays are finite index sets; objects are cylinders {"coord": bit}.
pub fn parse_region(space: &SpaceSpec, value: &Value) -> Result<RegionSet> {
    match value {
        Value::String(s) => parse_region_literal(space, s),
        Value::Array(items) => {
            let mut set = std::collections::BTreeSet::new();
            for item in items {
                let i = item
                    .as_u64()
                    .ok_or_else(|| NdsError::Parse("finite region arrays hold indices".into()))?;
                set.insert(i as usize);
            }
            Ok(RegionSet::Indices(set))
        }
        Value::Object(map) => {
            let mut cyl = Cylinder::new();
            for (k, v) in map {
                let coord: i64 = k
                    .parse()
                    .map_err(|_| NdsError::Parse(format!("bad cylinder coordinate {k:?}")))?;
                let bit = v
                    .as_u64()
                    .filter(|&b| b <= 1)
                    .ok_or_else(|| NdsError::Parse("cylinder bits are 0 or 1".into()))?;
                cyl.fix(coord, bit as u8);
            }
            Ok(RegionSet::Cylinders(vec![cyl]))
        }
        _ => Err(NdsError::Parse("unsupported region literal".into())),
    }
}

/// Parse a region from command-line text: JSON arrays/objects for finite
/// and shift spaces, interval literals otherwise.
pub fn parse_region_any(space: &SpaceSpec, text: &str) -> Result<RegionSet> {
    match space {
        SpaceSpec::Finite { .. } | SpaceSpec::Shift => {
            if text.trim() == "full" {
                return Ok(RegionSet::full(space));
            }
            let value: Value = serde_json::from_str(text)
                .map_err(|e| NdsError::Parse(format!("region literal {text:?}: {e}")))?;
            parse_region(space, &value)
        }
        _ => parse_region_literal(space, text),
    }
}

pub fn parse_region_literal(space: &SpaceSpec, text: &str) -> Result<RegionSet> {
    let s = text.trim();
    if s == "full" {
        return Ok(RegionSet::full(space));
    }
    if let Some(inner) = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        let x = parse_rat(inner)?;
        return match space {
            SpaceSpec::Circle => Ok(RegionSet::Arcs(CircleRegion::point(x, 0))),
            _ => Ok(RegionSet::Intervals(vec![IntervalComp::point(x)])),
        };
    }
    let lo_open = s.starts_with('(');
    let hi_open = s.ends_with(')');
    let body = &s[1..s.len() - 1];
    let (a, b) = body
        .split_once(',')
        .ok_or_else(|| NdsError::Parse(format!("interval literal {s:?} needs two endpoints")))?;
    let comp = IntervalComp::try_new(parse_rat(a)?, parse_rat(b)?, lo_open, hi_open)
        .ok_or_else(|| NdsError::Parse(format!("empty interval literal {s:?}")))?;
    match space {
        SpaceSpec::Circle => Ok(RegionSet::Arcs(CircleRegion::from_comps(vec![comp]))),
        SpaceSpec::UnitInterval => Ok(RegionSet::Intervals(vec![comp])),
        _ => Err(NdsError::Parse(
            "interval literals need an interval or circle space".into(),
        )),
    }
}

pub fn sample_to_json(sample: &IndexSample) -> Value {
    json!({ "T": sample.horizon(), "members": sample.members() })
}

pub fn sample_from_json(value: &Value) -> Result<IndexSample> {
    let t = value
        .get("T")
        .and_then(Value::as_u64)
        .ok_or_else(|| NdsError::Parse("sample needs a horizon field T".into()))?;
    let members = value
        .get("members")
        .and_then(Value::as_array)
        .ok_or_else(|| NdsError::Parse("sample needs a members array".into()))?
        .iter()
        .map(|v| {
            v.as_u64()
                .ok_or_else(|| NdsError::Parse("sample members are integers".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    IndexSample::new(t, members)
}

pub fn class_verdict_to_json(c: &ClassVerdict) -> Value {
    json!({
        "kind": c.kind.name(),
        "verdict": format!("{:?}", c.verdict),
        "max_gap": c.max_gap,
        "longest_run": c.longest_run,
        "tail_start": c.tail_start,
        "density": c.density.as_ref().map(fmt_rat),
        "trend": c.trend.as_ref().map(|t| json!({
            "what": t.what,
            "sub_horizon": t.sub_horizon,
            "sub_value": t.sub_value,
            "full_horizon": t.full_horizon,
            "full_value": t.full_value,
        })),
        "detail": c.detail,
    })
}

pub fn report_to_json(r: &PropertyReport) -> Value {
    json!({
        "property": r.property,
        "verdict": r.label(),
        "mode": format!("{:?}", r.mode),
        "params": r.params.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
        "witnesses": r.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "evidence": r.evidence,
        "schedule_hash": r.schedule_hash,
    })
}

pub fn transfer_to_json(c: &TransferCase) -> Value {
    json!({
        "property": c.property,
        "comparison": c.comparison,
        "theorem": c.theorem,
        "consistency": c.consistency.label(),
        "hypotheses": c.hypotheses.iter().map(|h| json!({
            "name": h.name, "holds": h.holds, "detail": h.detail,
        })).collect::<Vec<_>>(),
        "notes": c.notes,
        "sequence_report": report_to_json(&c.nds_report),
        "reduced_report": report_to_json(&c.reduced_report),
    })
}

/// The published JSON schema for system documents.
pub fn system_schema() -> Value {
    json!({
        "$schema": "http://json-schema.org/draft-07/schema#",
        "title": "nds system document",
        "type": "object",
        "required": ["schema_version", "space", "generators", "schedule"],
        "properties": {
            "schema_version": { "const": SCHEMA_VERSION },
            "space": {
                "oneOf": [
                    { "type": "object", "properties": { "kind": { "const": "unit_interval" } }, "required": ["kind"] },
                    { "type": "object", "properties": { "kind": { "const": "circle" } }, "required": ["kind"] },
                    { "type": "object", "properties": {
                        "kind": { "const": "finite" },
                        "size": { "type": "integer", "minimum": 1 },
                        "labels": { "type": "array", "items": { "type": "string" } },
                        "metric": { "type": "array", "items": { "type": "array", "items": { "$ref": "#/definitions/rational" } } }
                    }, "required": ["kind", "size"] },
                    { "type": "object", "properties": { "kind": { "const": "shift" } }, "required": ["kind"] }
                ]
            },
            "generators": {
                "type": "object",
                "minProperties": 1,
                "additionalProperties": { "$ref": "#/definitions/map" }
            },
            "schedule": {
                "oneOf": [
                    { "type": "object", "properties": { "kind": { "const": "periodic" }, "word": { "type": "array", "items": { "type": "string" }, "minItems": 1 } }, "required": ["kind", "word"] },
                    { "type": "object", "properties": { "kind": { "const": "triangular" }, "base": { "type": "string" }, "filler": { "type": "string" } }, "required": ["kind", "base", "filler"] },
                    { "type": "object", "properties": { "kind": { "const": "growing_blocks" }, "generator": { "type": "string" }, "inverse": { "type": "string" }, "filler": { "type": "string" } }, "required": ["kind", "generator", "inverse", "filler"] },
                    { "type": "object", "properties": { "kind": { "const": "explicit" }, "prefix": { "type": "array", "items": { "type": "string" } }, "tail": { "type": "array", "items": { "type": "string" }, "minItems": 1 } }, "required": ["kind", "prefix", "tail"] }
                ]
            },
            "defaults": {
                "type": "object",
                "properties": {
                    "T": { "type": "integer", "minimum": 1 },
                    "scale": { "$ref": "#/definitions/rational" },
                    "delta": { "$ref": "#/definitions/rational" },
                    "epsilon": { "$ref": "#/definitions/rational" },
                    "eta": { "$ref": "#/definitions/rational" },
                    "theta": { "$ref": "#/definitions/rational" },
                    "L": { "type": "integer", "minimum": 1 },
                    "pairs": { "type": "integer", "minimum": 1 },
                    "multi_m": { "type": "integer", "minimum": 1 }
                }
            }
        },
        "definitions": {
            "rational": { "type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$" },
            "map": {
                "oneOf": [
                    { "type": "object", "properties": { "kind": { "const": "identity" } }, "required": ["kind"] },
                    { "type": "object", "properties": { "kind": { "const": "shift" }, "power": { "type": "integer" } }, "required": ["kind", "power"] },
                    { "type": "object", "properties": { "kind": { "const": "finite" }, "table": { "type": "array", "items": { "type": "integer", "minimum": 0 } } }, "required": ["kind", "table"] },
                    { "type": "object", "properties": { "kind": { "const": "rotation" }, "steps": { "type": "integer" }, "offset": { "$ref": "#/definitions/rational" } }, "required": ["kind", "steps"] },
                    { "type": "object", "properties": {
                        "kind": { "const": "pl" },
                        "breakpoints": { "type": "array", "items": { "$ref": "#/definitions/rational" }, "minItems": 2 },
                        "pieces": { "type": "array", "items": { "type": "object", "properties": { "slope": { "$ref": "#/definitions/rational" }, "intercept": { "$ref": "#/definitions/rational" } }, "required": ["slope", "intercept"] }, "minItems": 1 },
                        "at1": { "$ref": "#/definitions/rational" }
                    }, "required": ["kind", "breakpoints", "pieces"] },
                    { "type": "object", "properties": { "kind": { "const": "composite" }, "of": { "type": "array", "items": { "$ref": "#/definitions/map" }, "minItems": 1 } }, "required": ["kind", "of"] },
                    { "type": "object", "properties": { "kind": { "const": "inverse" }, "of": { "$ref": "#/definitions/map" } }, "required": ["kind", "of"] }
                ]
            },
            "region": {
                "description": "intervals \"[a/b, c/d)\", points \"{p/q}\", \"full\", cylinders as {\"coord\": bit} objects, finite sets as index arrays",
                "oneOf": [
                    { "type": "string" },
                    { "type": "array", "items": { "type": "integer", "minimum": 0 } },
                    { "type": "object", "additionalProperties": { "type": "integer", "minimum": 0, "maximum": 1 } }
                ]
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn round_trip(doc_json: &str) -> SystemDocument {
        let doc = SystemDocument::parse(doc_json).unwrap();
        let (sys, _) = doc.instantiate().unwrap();
        let back = SystemDocument::from_system(&sys, DefaultsDoc::default());
        let (sys2, _) = back.instantiate().unwrap();
        assert_eq!(sys.provenance_hash(), sys2.provenance_hash());
        doc
    }

    #[test]
    fn parse_and_instantiate_interval_document() {
        let doc = round_trip(
            r#"{
              "schema_version": 1,
              "space": { "kind": "unit_interval" },
              "generators": {
                "half": { "kind": "pl", "breakpoints": ["0", "1"],
                          "pieces": [{ "slope": "1/2", "intercept": "0" }] },
                "id": { "kind": "identity" }
              },
              "schedule": { "kind": "triangular", "base": "half", "filler": "id" },
              "defaults": { "T": 60, "delta": "1/4" }
            }"#,
        );
        let (sys, params) = doc.instantiate().unwrap();
        assert_eq!(params.horizon, 60);
        assert_eq!(params.delta, rat(1, 4));
        assert_eq!(sys.schedule.name_at(1), "half");
        assert_eq!(sys.schedule.name_at(2), "id");
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let err = SystemDocument::parse(
            r#"{
              "schema_version": 1,
              "space": { "kind": "circle" },
              "generators": { "rot": { "kind": "rotation", "steps": 1 } },
              "schedule": { "kind": "periodic", "word": ["rot", "missing"] }
            }"#,
        )
        .unwrap()
        .instantiate()
        .unwrap_err();
        assert!(matches!(err, NdsError::Parse(_)));
    }

    #[test]
    fn point_literals_per_space() {
        assert_eq!(
            parse_point(&SpaceSpec::UnitInterval, "3/4").unwrap(),
            Point::Interval(rat(3, 4))
        );
        assert_eq!(
            parse_point(&SpaceSpec::Circle, "1/4+2a").unwrap(),
            Point::circle(rat(1, 4), 2)
        );
        let labeled = SpaceSpec::finite_labeled(&["1", "2", "3"]);
        assert_eq!(parse_point(&labeled, "2").unwrap(), Point::Finite(1));
        let p = parse_point(&SpaceSpec::Shift, "0:11:0:-1").unwrap();
        if let Point::Seq(s) = p {
            assert_eq!(s.at(-1), 1);
            assert_eq!(s.at(0), 1);
            assert_eq!(s.at(1), 0);
        } else {
            panic!("expected seq point");
        }
    }

    #[test]
    fn region_literals() {
        let r = parse_region_literal(&SpaceSpec::UnitInterval, "[1/4, 1/2)").unwrap();
        assert_eq!(
            r,
            RegionSet::Intervals(vec![IntervalComp::half_open(rat(1, 4), rat(1, 2))])
        );
        let p = parse_region_literal(&SpaceSpec::UnitInterval, "{1/3}").unwrap();
        assert_eq!(
            p,
            RegionSet::Intervals(vec![IntervalComp::point(rat(1, 3))])
        );
        let cyl = parse_region(&SpaceSpec::Shift, &json!({"0": 1, "-2": 0})).unwrap();
        if let RegionSet::Cylinders(cs) = cyl {
            assert_eq!(cs[0].fixed(), vec![(-2, 0), (0, 1)]);
        } else {
            panic!("expected cylinders");
        }
        let idx = parse_region(&SpaceSpec::finite_discrete(4), &json!([0, 2])).unwrap();
        assert_eq!(idx, RegionSet::Indices([0usize, 2].into_iter().collect()));
    }

    #[test]
    fn sample_round_trips_through_json() {
        let s = IndexSample::new(40, vec![3, 7, 9]).unwrap();
        let j = sample_to_json(&s);
        assert_eq!(sample_from_json(&j).unwrap(), s);
    }

    #[test]
    fn document_hash_is_stable() {
        let text = r#"{
          "schema_version": 1,
          "space": { "kind": "shift" },
          "generators": { "s": { "kind": "shift", "power": 1 } },
          "schedule": { "kind": "periodic", "word": ["s"] }
        }"#;
        let a = SystemDocument::parse(text).unwrap().hash();
        let b = SystemDocument::parse(text).unwrap().hash();
        assert_eq!(a, b);
    }
}

#[cfg(test)]
mod strictness_tests {
    use super::*;

    #[test]
    fn unknown_fields_are_rejected_with_a_path() {
        let err = SystemDocument::parse(
            r#"{
              "schema_version": 1,
              "space": { "kind": "shift" },
              "generators": { "s": { "kind": "shift", "power": 1 } },
              "schedule": { "kind": "periodic", "word": ["s"] },
              "defaults": { "horizin": 10 }
            }"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("horizin"),
            "error should name the bad field: {msg}"
        );
    }

    #[test]
    fn floating_point_rationals_are_rejected() {
        assert!(parse_rat("0.5").is_err());
        let err = SystemDocument::parse(
            r#"{
              "schema_version": 1,
              "space": { "kind": "unit_interval" },
              "generators": { "h": { "kind": "pl", "breakpoints": ["0", "1"],
                              "pieces": [{ "slope": "0.5", "intercept": "0" }] } },
              "schedule": { "kind": "periodic", "word": ["h"] }
            }"#,
        )
        .unwrap()
        .instantiate()
        .unwrap_err();
        assert!(err.to_string().contains("0.5"));
    }
}

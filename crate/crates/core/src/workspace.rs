//! Workspace files: a ground space, an `M` function, and named point sets.
//!
//! The JSON form is
//!
//! ```json
//! {
//!   "space": {"kind": "hamming", "alphabet": "01", "length": 3},
//!   "m_function": {"kind": "constant", "value": 3},
//!   "sets": {"A": ["000"], "B": ["011", "111"]}
//! }
//! ```
//!
//! with `euclidean_box` spaces written as `{"kind": "euclidean_box", "bounds":
//! [[0, 1], [0, 1]]}` and graphs as `{"kind": "graph", "vertices": 3, "edges":
//! [[0, 1, 1.0], [1, 2, 1.0]]}`. Hamming elements are strings, box elements are
//! number arrays (a bare number for one-dimensional boxes) and graph elements are
//! vertex ids. `m_function` defaults to `diameter`; a `table` variant lists
//! explicit `[element, value]` entries.
//!
//! A plain-text form holds blank-line separated blocks of equal-length words.
//! Block `k` (from 1) becomes the set `set_k`, the alphabet is every symbol
//! that occurs, and `M` is the constant word length.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use crate::error::{validation, Error, Result};
use crate::ground_space::{Element, GroundSpace, MFunction};
use crate::subset::{PointSet, SubsetMetric};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SpaceSpec {
    Hamming {
        alphabet: String,
        length: usize,
    },
    EuclideanBox {
        bounds: Vec<[f64; 2]>,
    },
    Graph {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<usize>,
        edges: Vec<(usize, usize, f64)>,
    },
}

/// How `M` is chosen, independent of any particular space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MSpec {
    Constant { value: f64 },
    Diameter,
    Eccentricity,
    Table { entries: Vec<(Value, f64)> },
}

impl FromStr for MSpec {
    type Err = Error;

    /// Parses `constant:<v>`, `diameter` or `eccentricity`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diameter" => Ok(MSpec::Diameter),
            "eccentricity" => Ok(MSpec::Eccentricity),
            _ => {
                let value = s
                    .strip_prefix("constant:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::Usage(format!(
                            "unknown M `{s}`; expected constant:<v>, diameter or eccentricity"
                        ))
                    })?;
                Ok(MSpec::Constant { value })
            }
        }
    }
}

/// Named sets in file order, rejecting repeated names.
#[derive(Debug, Default)]
struct NamedSets(Vec<(String, Vec<Value>)>);

impl<'de> Deserialize<'de> for NamedSets {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct SetsVisitor;

        impl<'de> Visitor<'de> for SetsVisitor {
            type Value = NamedSets;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping set names to element arrays")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<NamedSets, A::Error> {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                while let Some((name, elements)) = map.next_entry::<String, Vec<Value>>()? {
                    if !seen.insert(name.clone()) {
                        return Err(serde::de::Error::custom(format!("set name `{name}` appears twice")));
                    }
                    out.push((name, elements));
                }
                Ok(NamedSets(out))
            }
        }

        deserializer.deserialize_map(SetsVisitor)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceFile {
    space: SpaceSpec,
    #[serde(default)]
    m_function: Option<MSpec>,
    #[serde(default)]
    sets: NamedSets,
}

#[derive(Serialize)]
struct WorkspaceOut<'a> {
    space: SpaceSpec,
    m_function: MSpec,
    sets: BTreeMap<&'a str, &'a PointSet>,
}

/// A loaded workspace. Sets keep their file order.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub space: GroundSpace,
    pub m_function: MFunction,
    pub sets: Vec<(String, PointSet)>,
    /// Non-fatal notes raised while loading, such as dropped duplicates.
    pub warnings: Vec<String>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn element_from_value(space: &GroundSpace, value: &Value) -> Result<Element> {
    let element = match (space, value) {
        (GroundSpace::Hamming(_), Value::String(s)) => Element::Symbolic(s.clone()),
        (GroundSpace::EuclideanBox(_), Value::Number(n)) => {
            Element::Vector(vec![n.as_f64().ok_or_else(|| validation(format!("bad number {n}")))?])
        }
        (GroundSpace::EuclideanBox(_), Value::Array(items)) => Element::Vector(
            items
                .iter()
                .map(|v| {
                    v.as_f64()
                        .ok_or_else(|| validation(format!("coordinate {v} is not a number")))
                })
                .collect::<Result<_>>()?,
        ),
        (GroundSpace::Graph(_), Value::Number(n)) => Element::Vertex(
            n.as_u64()
                .and_then(|v| usize::try_from(v).ok())
                .ok_or_else(|| validation(format!("vertex {n} is not a nonnegative integer")))?,
        ),
        _ => {
            return Err(validation(format!(
                "{value} is not a {} element",
                space.kind_name()
            )))
        }
    };
    space.normalize(element)
}

fn element_to_value(x: &Element) -> Value {
    serde_json::to_value(x).expect("elements serialize")
}

impl MSpec {
    pub fn build(&self, space: &GroundSpace) -> Result<MFunction> {
        Ok(match self {
            MSpec::Constant { value } => MFunction::Constant(*value),
            MSpec::Diameter => MFunction::Diameter,
            MSpec::Eccentricity => MFunction::Eccentricity,
            MSpec::Table { entries } => {
                let mut table = BTreeMap::new();
                for (raw, v) in entries {
                    let x = element_from_value(space, raw)?;
                    if table.insert(x.clone(), *v).is_some() {
                        return Err(validation(format!("M table lists {x} twice")));
                    }
                }
                MFunction::Table(table)
            }
        })
    }

    fn describe(m: &MFunction) -> Self {
        match m {
            MFunction::Constant(value) => MSpec::Constant { value: *value },
            MFunction::Diameter => MSpec::Diameter,
            MFunction::Eccentricity => MSpec::Eccentricity,
            MFunction::Table(entries) => MSpec::Table {
                entries: entries.iter().map(|(x, v)| (element_to_value(x), *v)).collect(),
            },
        }
    }
}

impl SpaceSpec {
    fn build(self) -> Result<GroundSpace> {
        match self {
            SpaceSpec::Hamming { alphabet, length } => GroundSpace::hamming(&alphabet, length),
            SpaceSpec::EuclideanBox { bounds } => {
                GroundSpace::euclidean_box(bounds.into_iter().map(|[lo, hi]| (lo, hi)).collect())
            }
            SpaceSpec::Graph { vertices, edges } => {
                let inferred = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
                GroundSpace::graph(vertices.unwrap_or(inferred), edges)
            }
        }
    }

    fn describe(space: &GroundSpace) -> Self {
        match space {
            GroundSpace::Hamming(h) => SpaceSpec::Hamming {
                alphabet: h.alphabet().iter().collect(),
                length: h.length(),
            },
            GroundSpace::EuclideanBox(b) => SpaceSpec::EuclideanBox {
                bounds: b.bounds().iter().map(|&(lo, hi)| [lo, hi]).collect(),
            },
            GroundSpace::Graph(g) => SpaceSpec::Graph {
                vertices: Some(g.vertices()),
                edges: g.edges().to_vec(),
            },
        }
    }
}

impl Workspace {
    /// Reads a workspace file, choosing JSON when the first non-blank
    /// character is `{` and the plain-text sequence form otherwise.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_sequences(text)
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WorkspaceFile = serde_json::from_str(text).map_err(parse_error)?;
        let space = file.space.build()?;
        let m_function = file.m_function.unwrap_or(MSpec::Diameter).build(&space)?;
        m_function.check(&space)?;
        let mut sets = Vec::with_capacity(file.sets.0.len());
        let mut warnings = Vec::new();
        for (name, raw) in file.sets.0 {
            let elements = raw
                .iter()
                .map(|v| element_from_value(&space, v))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| validation(format!("set `{name}`: {e}")))?;
            let (set, dropped) = PointSet::with_duplicate_count(&space, elements)?;
            if dropped > 0 {
                warnings.push(format!("set `{name}`: dropped {dropped} duplicate element(s)"));
            }
            sets.push((name, set));
        }
        Ok(Self {
            space,
            m_function,
            sets,
            warnings,
        })
    }

    pub fn from_sequences(text: &str) -> Result<Self> {
        let mut blocks: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
        for (idx, line) in text.lines().enumerate() {
            let word = line.trim();
            if word.is_empty() {
                if !blocks.last().is_some_and(Vec::is_empty) {
                    blocks.push(Vec::new());
                }
            } else {
                blocks.last_mut().expect("nonempty").push((idx + 1, word));
            }
        }
        blocks.retain(|b| !b.is_empty());
        let first = blocks
            .first()
            .and_then(|b| b.first())
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: "sequence file holds no words".to_string(),
            })?;
        let length = first.1.chars().count();
        let mut alphabet = BTreeSet::new();
        for &(line, word) in blocks.iter().flatten() {
            let len = word.chars().count();
            if len != length {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: format!("word `{word}` has length {len}, expected {length}"),
                });
            }
            alphabet.extend(word.chars());
        }
        let alphabet: String = alphabet.into_iter().collect();
        let space = GroundSpace::hamming(&alphabet, length)?;
        let m_function = MFunction::Constant(length as f64);
        let mut sets = Vec::with_capacity(blocks.len());
        let mut warnings = Vec::new();
        for (k, block) in blocks.iter().enumerate() {
            let name = format!("set_{}", k + 1);
            let (set, dropped) = PointSet::with_duplicate_count(
                &space,
                block.iter().map(|(_, w)| Element::Symbolic(w.to_string())),
            )?;
            if dropped > 0 {
                warnings.push(format!("set `{name}`: dropped {dropped} duplicate element(s)"));
            }
            sets.push((name, set));
        }
        Ok(Self {
            space,
            m_function,
            sets,
            warnings,
        })
    }

    /// Serializes back to the JSON form. Sets are written in name order.
    pub fn to_json(&self) -> String {
        let out = WorkspaceOut {
            space: SpaceSpec::describe(&self.space),
            m_function: MSpec::describe(&self.m_function),
            sets: self.sets.iter().map(|(n, s)| (n.as_str(), s)).collect(),
        };
        serde_json::to_string_pretty(&out).expect("workspace serializes")
    }

    pub fn set(&self, name: &str) -> Result<&PointSet> {
        self.sets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::UnknownSet(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.sets.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn override_m(&mut self, spec: &MSpec) -> Result<()> {
        let m = spec.build(&self.space)?;
        m.check(&self.space)?;
        self.m_function = m;
        Ok(())
    }

    /// The subset metric, with table-valued `M` checked against the boundary-weight condition.
    pub fn metric(&self) -> Result<SubsetMetric> {
        SubsetMetric::new(self.space.clone(), self.m_function.clone())
    }

    pub fn metric_unchecked(&self) -> Result<SubsetMetric> {
        SubsetMetric::new_unchecked(self.space.clone(), self.m_function.clone())
    }

    /// Every element appearing in some named set, in canonical order.
    pub fn universe(&self) -> PointSet {
        self.sets
            .iter()
            .fold(PointSet::empty(), |acc, (_, s)| acc.union(s))
    }
}

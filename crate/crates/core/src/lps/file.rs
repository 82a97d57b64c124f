use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::checks::{check_adequate, check_associativity, check_identity, check_layered, check_tetris_action};
use super::checks::{ElementMap, LayeredStructure, TetrisActionData};
use super::report::CheckReport;
use super::table::{Geometry, PartialSemigroupTable};

/// On-disk description of a finite partial semigroup, optionally layered and
/// with a tetris action.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    /// `[x, y, xy]` triples.
    #[serde(default)]
    pub op: Vec<[String; 3]>,
    /// `layers[0]` is `S_0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryFile>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    /// `families[n - 1]` is `F_n`.
    pub families: Vec<Vec<MapFile>>,
    /// `marked[n - 1]` is `M_n`.
    pub marked: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub name: String,
    pub map: BTreeMap<String, String>,
}

/// Largest support coordinate per element, for boundary classification.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub dim: usize,
    #[serde(default)]
    pub max_support: BTreeMap<String, usize>,
}

/// A parsed table file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSpec {
    pub table: PartialSemigroupTable,
    pub layered: Option<LayeredStructure>,
    pub action: Option<TetrisActionData>,
}

impl TableFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table files serialize")
    }

    pub fn build(&self) -> Result<TableSpec> {
        let triples = self.op.iter().map(|[x, y, z]| (x.as_str(), y.as_str(), z.as_str()));
        let mut table = PartialSemigroupTable::new(self.elements.clone(), self.identity.as_deref(), triples)?;
        if let Some(g) = &self.geometry {
            let mut max_support = vec![None; table.len()];
            for (name, &m) in &g.max_support {
                max_support[table.index_of(name)?] = Some(m);
            }
            table = table.with_geometry(Geometry { dim: g.dim, max_support })?;
        }
        let layered = match &self.layers {
            None => None,
            Some(layers) => {
                let layers = layers.iter().map(|l| table.indices(l)).collect::<Result<_>>()?;
                Some(LayeredStructure::new(table.clone(), layers)?)
            }
        };
        let action = match (&self.action, &layered) {
            (None, _) => None,
            (Some(_), None) => return Err(Error::MalformedTable("an action needs layers".into())),
            (Some(a), Some(_)) => {
                let families = a
                    .families
                    .iter()
                    .map(|family| {
                        family
                            .iter()
                            .map(|m| {
                                let mut images = vec![None; table.len()];
                                for (x, y) in &m.map {
                                    images[table.index_of(x)?] = Some(table.index_of(y)?);
                                }
                                Ok(ElementMap { name: m.name.clone(), images })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?;
                let marked = a.marked.iter().map(|m| table.indices(m)).collect::<Result<_>>()?;
                Some(TetrisActionData { families, marked })
            }
        };
        Ok(TableSpec { table, layered, action })
    }
}

impl TableSpec {
    /// Associativity and identity always; layering (with adequacy per layer)
    /// when layers are given, plain adequacy otherwise; the action when given.
    pub fn check(&self, horizon: usize) -> Result<CheckReport> {
        let mut report = check_associativity(&self.table);
        match &self.layered {
            Some(ls) => report.merge(check_layered(ls, horizon)?),
            None => {
                report.merge(check_identity(&self.table));
                report.merge(check_adequate(&self.table, horizon)?);
            }
        }
        if let (Some(ls), Some(act)) = (&self.layered, &self.action) {
            report.merge(check_tetris_action(ls, act)?);
        }
        Ok(report)
    }
}

impl From<&PartialSemigroupTable> for TableFile {
    fn from(t: &PartialSemigroupTable) -> Self {
        let name = |x: usize| t.name(x).to_owned();
        Self {
            elements: t.names().to_vec(),
            identity: t.identity().map(name),
            op: t.triples().map(|(x, y, z)| [name(x), name(y), name(z)]).collect(),
            geometry: t.geometry().map(|g| GeometryFile {
                dim: g.dim,
                max_support: g
                    .max_support
                    .iter()
                    .enumerate()
                    .filter_map(|(x, m)| m.map(|m| (name(x), m)))
                    .collect(),
            }),
            ..Self::default()
        }
    }
}

impl TableFile {
    /// The full description of a layered structure and its action.
    pub fn from_instance(ls: &LayeredStructure, act: Option<&TetrisActionData>) -> Self {
        let t = ls.table();
        let name = |x: usize| t.name(x).to_owned();
        let mut file = Self::from(t);
        file.layers = Some((0..=ls.k()).map(|n| ls.layer(n).iter().map(|&x| name(x)).collect()).collect());
        file.action = act.map(|a| ActionFile {
            families: a
                .families
                .iter()
                .map(|family| {
                    family
                        .iter()
                        .map(|m| MapFile {
                            name: m.name.clone(),
                            map: m
                                .images
                                .iter()
                                .enumerate()
                                .filter_map(|(x, y)| y.map(|y| (name(x), name(y))))
                                .collect(),
                        })
                        .collect()
                })
                .collect(),
            marked: a.marked.iter().map(|m| m.iter().map(|&x| name(x)).collect()).collect(),
        });
        file
    }
}

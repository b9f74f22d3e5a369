//! On-disk JSON formats and instance construction.
//!
//! Instance schema:
//! `{"alpha": f, "points": [{"id": int, "role": "client"|"server"|"both"}],
//!   "metric": {"type": "matrix", "d": [[..]]}
//!           | {"type": "euclidean", "coords": [[..]]}
//!           | {"type": "graph", "edges": [[u, v, w]]}}`
//!
//! Graph schema: `{"n": int, "edges": [[u, v]]}`.

use crate::error::{Error, Result};
use crate::metric::{MetricInstance, Role};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PointDef {
    pub id: usize,
    pub role: Role,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MetricDef {
    Matrix { d: Vec<Vec<f64>> },
    Euclidean { coords: Vec<Vec<f64>> },
    Graph { edges: Vec<(usize, usize, f64)> },
}

/// The serialized form of an instance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceFile {
    pub alpha: f64,
    pub points: Vec<PointDef>,
    pub metric: MetricDef,
}

impl InstanceFile {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Materializes and validates an instance from its serialized form.
pub fn build_instance(spec: &InstanceFile) -> Result<MetricInstance> {
    let n = spec.points.len();
    let mut roles = vec![Role::Both; n];
    let mut seen = vec![false; n];
    for p in &spec.points {
        if p.id >= n {
            return Err(Error::InvalidPoints(format!(
                "point id {} out of range 0..{n}",
                p.id
            )));
        }
        if seen[p.id] {
            return Err(Error::InvalidPoints(format!("duplicate point id {}", p.id)));
        }
        seen[p.id] = true;
        roles[p.id] = p.role;
    }
    match &spec.metric {
        MetricDef::Matrix { d } => MetricInstance::from_matrix(roles, d.clone(), spec.alpha),
        MetricDef::Euclidean { coords } => {
            MetricInstance::from_euclidean(roles, coords, spec.alpha)
        }
        MetricDef::Graph { edges } => MetricInstance::from_graph(roles, edges, spec.alpha),
    }
}

/// Serializes an instance back to the matrix form of the schema.
pub fn to_matrix_file(inst: &MetricInstance) -> InstanceFile {
    let n = inst.num_points();
    let d = (0..n)
        .map(|i| (0..n).map(|j| inst.d(i, j)).collect())
        .collect();
    InstanceFile {
        alpha: inst.alpha(),
        points: (0..n)
            .map(|id| PointDef {
                id,
                role: inst.role(id),
            })
            .collect(),
        metric: MetricDef::Matrix { d },
    }
}

/// The serialized form of an undirected graph for the dominating-set
/// reduction.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphFile {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

//! Input documents: groups, crossed modules, ribbon graphs and surface
//! automorphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use hopfkit_core::{CrossedModule, Error, FiniteGroup, RibbonGraph, SurfaceAutomorphism};
use serde::{Deserialize, Serialize};

/// Either `{"order", "mult_table"}` or `{"degree", "permutation_generators"}`,
/// with optional element `names`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult_table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation_generators: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl GroupDoc {
    pub fn build(&self) -> Result<FiniteGroup, Error> {
        match (&self.order, &self.mult_table, &self.degree, &self.permutation_generators) {
            (order, Some(table), None, None) => {
                if order.is_some_and(|n| n != table.len()) {
                    return Err(Error::Schema(format!(
                        "order {} does not match table size {}",
                        order.unwrap(),
                        table.len()
                    )));
                }
                if let Some(names) = &self.names {
                    if names.len() != table.len() {
                        return Err(Error::Schema("names must list every element".into()));
                    }
                }
                FiniteGroup::from_table(table, self.names.clone())
            }
            (None, None, Some(degree), Some(gens)) => {
                if self.names.is_some() {
                    return Err(Error::Schema("names are only accepted with an explicit table".into()));
                }
                FiniteGroup::from_permutations(*degree, gens)
            }
            _ => Err(Error::Schema(
                "group document needs exactly one of {order, mult_table} or {degree, permutation_generators}".into(),
            )),
        }
    }
}

/// `{"B": group, "A": group, "action": [[b ⊳ a]], "boundary": [∂(a)]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossedModuleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(rename = "B")]
    pub b: GroupDoc,
    #[serde(rename = "A")]
    pub a: GroupDoc,
    pub action: Vec<Vec<usize>>,
    pub boundary: Vec<usize>,
}

impl CrossedModuleDoc {
    pub fn build(&self) -> Result<CrossedModule, Error> {
        let b = Arc::new(self.b.build()?);
        let a = Arc::new(self.a.build()?);
        CrossedModule::new(b, a, &self.action, self.boundary.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub half_edges: Vec<u64>,
    #[serde(default)]
    pub cilium: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionDoc {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideDoc {
    pub edge: usize,
    pub direction: DirectionDoc,
}

/// Vertices list their half-edge ids in cyclic order with a cilium index;
/// edges are `[source half-edge, target half-edge]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<(u64, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_cilia: Option<BTreeMap<usize, SideDoc>>,
}

impl GraphDoc {
    pub fn build(&self) -> Result<RibbonGraph, Error> {
        let vertices: Vec<(Vec<u64>, usize)> = self.vertices.iter().map(|v| (v.half_edges.clone(), v.cilium)).collect();
        let graph = RibbonGraph::from_document(&vertices, &self.edges)?;
        if let Some(cilia) = &self.face_cilia {
            let faces = graph.compute_faces();
            for (&face, side) in cilia {
                let path = faces.get(face).ok_or_else(|| Error::Schema(format!("face {face} does not exist")))?;
                let forward = side.direction == DirectionDoc::Forward;
                let on_face = path.sides.iter().any(|s| {
                    s.edge == side.edge && (s.direction == hopfkit_core::ribbon::Direction::Forward) == forward
                });
                if !on_face {
                    return Err(Error::Schema(format!("face cilium of face {face} is not one of its sides")));
                }
            }
        }
        Ok(graph)
    }

    pub fn from_graph(graph: &RibbonGraph) -> Self {
        let (vertices, edges) = graph.to_document();
        GraphDoc {
            schema: Some("hopfkit.graph/1".into()),
            vertices: vertices.into_iter().map(|(half_edges, cilium)| VertexDoc { half_edges, cilium }).collect(),
            edges,
            face_cilia: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismDoc {
    pub images: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_images: Option<BTreeMap<String, String>>,
}

/// Generators of a mapping class group action, as generator-image words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub genus: usize,
    pub generators: Vec<AutomorphismDoc>,
}

impl AutomorphismsDoc {
    pub fn build(&self) -> Result<Vec<SurfaceAutomorphism>, Error> {
        self.generators
            .iter()
            .map(|g| SurfaceAutomorphism::from_words(self.genus, &g.images, g.inverse_images.as_ref()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hopfkit_core::Group;

    #[test]
    fn group_forms() {
        let table: GroupDoc = serde_json::from_str(r#"{"order": 2, "mult_table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(table.build().unwrap().order(), 2);
        let perms: GroupDoc =
            serde_json::from_str(r#"{"degree": 3, "permutation_generators": [[1,0,2],[1,2,0]]}"#).unwrap();
        assert_eq!(perms.build().unwrap().order(), 6);
        let both: GroupDoc = serde_json::from_str(r#"{"order": 1, "mult_table": [[0]], "degree": 1}"#).unwrap();
        assert!(matches!(both.build(), Err(Error::Schema(_))));
        assert!(serde_json::from_str::<GroupDoc>(r#"{"size": 2}"#).is_err());
    }

    #[test]
    fn graph_round_trip() {
        let g = hopfkit_core::ribbon::two_vertex_torus();
        let doc = GraphDoc::from_graph(&g);
        let text = serde_json::to_string(&doc).unwrap();
        let back: GraphDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), g);
    }
}

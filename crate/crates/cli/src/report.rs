//! Result documents. Every document carries a versioned `schema` tag and the
//! digest of the inputs that produced it.

use serde::{Deserialize, Serialize};

pub const REP_VARIETY: &str = "hopfkit.rep-variety/1";
pub const PROTECTED_SET: &str = "hopfkit.protected-set/1";
pub const PROTECTED_CAT: &str = "hopfkit.protected-cat/1";
pub const VERIFY_INVARIANCE: &str = "hopfkit.verify-invariance/1";
pub const MCG_ORBITS: &str = "hopfkit.mcg-orbits/1";
pub const MCG_RELATIONS: &str = "hopfkit.mcg-relations/1";
pub const SIMPLICIAL_LEVELS: &str = "hopfkit.simplicial-levels/1";
pub const ERROR: &str = "hopfkit.error/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub representative: Vec<String>,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepVarietyReport {
    pub schema: String,
    pub input_digest: String,
    pub group: GroupSummary,
    pub genus: usize,
    pub hom_count: usize,
    pub class_count: usize,
    pub classes: Vec<ClassEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtectedSetReport {
    pub schema: String,
    pub input_digest: String,
    pub graph: GraphSummary,
    pub group: GroupSummary,
    pub flat_count: usize,
    pub orbit_count: usize,
    /// Edge labels of each orbit representative.
    pub orbits: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectEntry {
    pub label: String,
    pub representative: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub source: usize,
    pub target: usize,
    pub label: String,
    /// Entries are `A ⋊ B` elements encoded as `a * |B| + b`.
    pub representative: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionSample {
    pub first: usize,
    pub second: usize,
    pub composite: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEntry {
    pub objects: Vec<usize>,
    pub automorphism_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtectedCatReport {
    pub schema: String,
    pub input_digest: String,
    pub genus: usize,
    pub object_count: usize,
    pub morphism_count: usize,
    pub objects: Vec<ObjectEntry>,
    pub morphisms: Vec<MorphismEntry>,
    pub components: Vec<ComponentEntry>,
    pub composition_samples: Vec<CompositionSample>,
    pub congruence_passes: usize,
    pub pairwise_class_count: usize,
    pub pairwise_agrees: bool,
    /// Comparison with the trivial-action formula, when the action is trivial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial_action_check: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceResult {
    pub schema: String,
    pub input_digest: String,
    pub graph: GraphSummary,
    pub group: GroupSummary,
    pub script_length: usize,
    pub source_orbits: usize,
    pub standard_orbits: usize,
    pub orbit_map: Vec<usize>,
    pub verified: bool,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McgOrbitsReport {
    pub schema: String,
    pub input_digest: String,
    pub genus: usize,
    /// `set` for conjugation classes, `cat` for protected groupoid objects.
    pub case: String,
    pub classes: Vec<String>,
    pub generator_permutations: Vec<Vec<usize>>,
    pub orbits: Vec<Vec<usize>>,
    pub orbit_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functorial: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McgRelationsReport {
    pub schema: String,
    pub input_digest: String,
    pub case: String,
    pub class_count: usize,
    pub braid: bool,
    pub torsion: bool,
    pub d_a: Vec<usize>,
    pub d_b: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functorial: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialLevelsReport {
    pub schema: String,
    pub input_digest: String,
    pub genus: usize,
    pub class_counts: Vec<usize>,
    /// `faces[n][i][x]`: `d_i` of class `x` on level `n`.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[n][i][x]`: `s_i` of class `x` on level `n`.
    pub degeneracies: Vec<Vec<Vec<usize>>>,
    pub homotopy_violations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorReport {
    pub schema: String,
    pub error: ErrorBody,
}

//! JSON file formats for spaces, maps, complexes, simplicial maps and group
//! actions. A space or complex inside a map may be given inline or as a path
//! relative to the file that mentions it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex, SimplicialMap};
use crate::equivariant::{validate_action, EquivariantError, Group, GroupAction};
use crate::space::{FiniteSpace, SpaceError, SpaceMap};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Inline(T),
    File(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub domain: Ref<SpaceJson>,
    pub codomain: Ref<SpaceJson>,
    pub assignment: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplicialMapJson {
    pub domain: Ref<ComplexJson>,
    pub codomain: Ref<ComplexJson>,
    pub assignment: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionJson {
    pub group: GroupJson,
    pub space: Ref<SpaceJson>,
    /// Element name to point permutation; the identity may be omitted.
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Reads files and remembers a digest of each one.
#[derive(Debug, Default)]
pub struct Loader {
    pub inputs: Vec<InputDigest>,
}

impl Loader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn read(&mut self, path: &Path) -> Result<String, FormatError> {
        let bytes = std::fs::read(path).map_err(|e| FormatError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes).map_err(|e| FormatError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn parse<T: for<'de> Deserialize<'de>>(&mut self, path: &Path) -> Result<T, FormatError> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| FormatError::Json {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn value(&mut self, path: &Path) -> Result<serde_json::Value, FormatError> {
        self.parse(path)
    }

    fn resolve<T: for<'de> Deserialize<'de> + Clone>(&mut self, r: &Ref<T>, base: &Path) -> Result<T, FormatError> {
        match r {
            Ref::Inline(t) => Ok(t.clone()),
            Ref::File(rel) => {
                let p = base.parent().unwrap_or(Path::new(".")).join(rel);
                self.parse(&p)
            }
        }
    }

    pub fn space(&mut self, path: &Path) -> Result<FiniteSpace, FormatError> {
        let j: SpaceJson = self.parse(path)?;
        space_from_json(&j)
    }

    pub fn map(&mut self, path: &Path) -> Result<SpaceMap, FormatError> {
        let j: MapJson = self.parse(path)?;
        self.map_from_json(&j, path)
    }

    pub fn map_from_json(&mut self, j: &MapJson, base: &Path) -> Result<SpaceMap, FormatError> {
        let dom = Arc::new(space_from_json(&self.resolve(&j.domain, base)?)?);
        let cod = Arc::new(space_from_json(&self.resolve(&j.codomain, base)?)?);
        Ok(SpaceMap::from_labels(dom, cod, &j.assignment)?)
    }

    pub fn complex(&mut self, path: &Path) -> Result<SimplicialComplex, FormatError> {
        let j: ComplexJson = self.parse(path)?;
        complex_from_json(&j)
    }

    pub fn simplicial_map_from_json(&mut self, j: &SimplicialMapJson, base: &Path) -> Result<SimplicialMap, FormatError> {
        let dom = Arc::new(complex_from_json(&self.resolve(&j.domain, base)?)?);
        let cod = Arc::new(complex_from_json(&self.resolve(&j.codomain, base)?)?);
        let pairs: Vec<(&String, &String)> = j.assignment.iter().collect();
        Ok(SimplicialMap::from_names(dom, cod, &pairs)?)
    }

    pub fn action(&mut self, path: &Path) -> Result<GroupAction, FormatError> {
        let j: ActionJson = self.parse(path)?;
        let space = Arc::new(space_from_json(&self.resolve(&j.space, path)?)?);
        action_from_json(&j, space)
    }
}

pub fn space_from_json(j: &SpaceJson) -> Result<FiniteSpace, FormatError> {
    Ok(FiniteSpace::new(j.points.clone(), j.leq.iter().map(|[a, b]| (a.as_str(), b.as_str())))?)
}

/// All pairs `x <= y` with `x != y`.
pub fn space_to_json(s: &FiniteSpace) -> SpaceJson {
    let mut leq = Vec::new();
    for y in 0..s.len() {
        for x in s.down(y).ones().filter(|&x| x != y) {
            leq.push([s.label(x).to_string(), s.label(y).to_string()]);
        }
    }
    SpaceJson {
        points: s.labels().to_vec(),
        leq,
    }
}

pub fn map_to_json(f: &SpaceMap) -> MapJson {
    let assignment = (0..f.domain().len())
        .map(|x| (f.domain().label(x).to_string(), f.codomain().label(f.apply(x)).to_string()))
        .collect();
    MapJson {
        domain: Ref::Inline(space_to_json(f.domain())),
        codomain: Ref::Inline(space_to_json(f.codomain())),
        assignment,
    }
}

pub fn complex_from_json(j: &ComplexJson) -> Result<SimplicialComplex, FormatError> {
    Ok(SimplicialComplex::new(j.vertices.clone(), j.simplices.iter().map(|s| s.iter().map(String::as_str)))?)
}

/// Facets only; faces are implied.
pub fn complex_to_json(k: &SimplicialComplex) -> ComplexJson {
    ComplexJson {
        vertices: k.vertices().to_vec(),
        simplices: k
            .facets()
            .iter()
            .map(|s| s.iter().map(|&v| k.vertices()[v].clone()).collect())
            .collect(),
    }
}

pub fn simplicial_map_to_json(f: &SimplicialMap) -> SimplicialMapJson {
    let names = f.codomain().vertices();
    SimplicialMapJson {
        domain: Ref::Inline(complex_to_json(f.domain())),
        codomain: Ref::Inline(complex_to_json(f.codomain())),
        assignment: f
            .domain()
            .vertices()
            .iter()
            .zip(f.assignment())
            .map(|(v, &w)| (v.clone(), names[w].clone()))
            .collect(),
    }
}

pub fn action_from_json(j: &ActionJson, space: Arc<FiniteSpace>) -> Result<GroupAction, FormatError> {
    let index: BTreeMap<&str, usize> = j.group.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    let lookup = |e: &str| index.get(e).copied().ok_or_else(|| FormatError::Invalid(format!("unknown group element `{e}`")));
    let table = j
        .group
        .table
        .iter()
        .map(|row| row.iter().map(|e| lookup(e)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let group = Group::new(j.group.elements.clone(), table)?;
    let mut perm = Vec::with_capacity(group.order());
    for (g, name) in group.elements().iter().enumerate() {
        match j.action.get(name) {
            Some(m) => {
                let mut p = Vec::with_capacity(space.len());
                for x in space.labels() {
                    let gx = m.get(x).ok_or_else(|| FormatError::Invalid(format!("`{name}` has no image for `{x}`")))?;
                    p.push(space.index_of(gx)?);
                }
                perm.push(p);
            }
            None if g == group.identity() => perm.push((0..space.len()).collect()),
            None => return Err(FormatError::Invalid(format!("no permutation for `{name}`"))),
        }
    }
    for name in j.action.keys() {
        lookup(name)?;
    }
    Ok(validate_action(group, space, perm)?)
}

/// Path relative to the crate's bundled fixture directory.
pub fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_round_trip() {
        let f = crate::fixtures::hexagon_quotient();
        let j = serde_json::to_string(&map_to_json(&f)).unwrap();
        let back: MapJson = serde_json::from_str(&j).unwrap();
        let g = Loader::new().map_from_json(&back, Path::new(".")).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn simplicial_round_trip() {
        let f = crate::fixtures::icosahedron_quotient();
        let j = serde_json::to_string(&simplicial_map_to_json(&f)).unwrap();
        let back: SimplicialMapJson = serde_json::from_str(&j).unwrap();
        let g = Loader::new().simplicial_map_from_json(&back, Path::new(".")).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn digests() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}

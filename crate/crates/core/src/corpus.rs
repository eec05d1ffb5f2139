//! The bundled corpus: axiom files, rule files, instance data, the rename
//! map and the competency-question queries, all listed in a checksummed
//! manifest. Everything is vendored and frozen; nothing is fetched.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::axiom::{parse_axioms, parse_map, AxiomSet, RenameMap};
use crate::chase::{parse_rules, RuleSet};
use crate::graph::Graph;
use crate::lex::ParseError;
use crate::query::{parse_query, ConjunctiveQuery};
use crate::term::PrefixTable;
use crate::turtle;

/// Environment variable overriding the corpus root directory.
pub const CORPUS_ENV: &str = "ONTOKIT_CORPUS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Axioms,
    Rules,
    Turtle,
    Query,
    Map,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub kind: ArtifactKind,
    /// What the artifact carries, in one line.
    pub anchor: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus file {path} does not match its manifest checksum (corpus corruption?)")]
    ChecksumMismatch { path: String },
    #[error("corpus file {path} failed to parse: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("manifest is not valid JSON: {0}")]
    Manifest(#[from] serde_json::Error),
    #[error("corpus has no entry for {0}")]
    MissingEntry(String),
}

/// All bundled artifacts, parsed and checksum-verified.
#[derive(Debug)]
pub struct Corpus {
    pub root: PathBuf,
    pub manifest: CorpusManifest,
    axioms: BTreeMap<String, AxiomSet>,
    rules: BTreeMap<String, RuleSet>,
    graphs: BTreeMap<String, Graph>,
    queries: BTreeMap<String, ConjunctiveQuery>,
    maps: BTreeMap<String, RenameMap>,
}

impl Corpus {
    /// Corpus root: `$ONTOKIT_CORPUS` if set, else `./corpus`.
    pub fn locate() -> PathBuf {
        match std::env::var_os(CORPUS_ENV) {
            Some(dir) => PathBuf::from(dir),
            None => PathBuf::from("corpus"),
        }
    }

    pub fn load(root: &Path) -> Result<Corpus, CorpusError> {
        let manifest_path = root.join("manifest.json");
        let manifest_text =
            fs::read_to_string(&manifest_path).map_err(|source| CorpusError::Io {
                path: manifest_path.display().to_string(),
                source,
            })?;
        let manifest: CorpusManifest = serde_json::from_str(&manifest_text)?;

        let mut corpus = Corpus {
            root: root.to_path_buf(),
            manifest: manifest.clone(),
            axioms: BTreeMap::new(),
            rules: BTreeMap::new(),
            graphs: BTreeMap::new(),
            queries: BTreeMap::new(),
            maps: BTreeMap::new(),
        };

        for entry in &manifest.entries {
            let path = root.join(&entry.path);
            let text = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
                path: entry.path.clone(),
                source,
            })?;
            if sha256_hex(&text) != entry.sha256 {
                return Err(CorpusError::ChecksumMismatch {
                    path: entry.path.clone(),
                });
            }
            let stem = Path::new(&entry.path)
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or(&entry.path)
                .to_string();
            let parse_err = |source: ParseError| CorpusError::Parse {
                path: entry.path.clone(),
                source,
            };
            match entry.kind {
                ArtifactKind::Axioms => {
                    corpus
                        .axioms
                        .insert(stem, parse_axioms(&text).map_err(parse_err)?);
                }
                ArtifactKind::Rules => {
                    corpus
                        .rules
                        .insert(stem, parse_rules(&text).map_err(parse_err)?);
                }
                ArtifactKind::Turtle => {
                    corpus
                        .graphs
                        .insert(stem, turtle::parse(&text, None).map_err(parse_err)?);
                }
                ArtifactKind::Query => {
                    let query = parse_query(&text, &PrefixTable::new()).map_err(parse_err)?;
                    corpus.queries.insert(
                        stem.clone(),
                        ConjunctiveQuery {
                            name: Some(stem),
                            ..query
                        },
                    );
                }
                ArtifactKind::Map => {
                    corpus
                        .maps
                        .insert(stem, parse_map(&text).map_err(parse_err)?);
                }
            }
        }
        Ok(corpus)
    }

    fn fetch<'a, T>(map: &'a BTreeMap<String, T>, key: &str) -> Result<&'a T, CorpusError> {
        map.get(key)
            .ok_or_else(|| CorpusError::MissingEntry(key.to_string()))
    }

    /// The 32 transformation-pattern axioms.
    pub fn pattern_axioms(&self) -> Result<&AxiomSet, CorpusError> {
        Self::fetch(&self.axioms, "data_transformation")
    }

    /// The instantiated module: 32 renamed axioms plus 3 additions.
    pub fn module_axioms(&self) -> Result<&AxiomSet, CorpusError> {
        Self::fetch(&self.axioms, "simulation_activity")
    }

    /// The module's instantiated base, without the authored additions.
    pub fn module_base(&self) -> Result<AxiomSet, CorpusError> {
        let module = self.module_axioms()?;
        Ok(AxiomSet {
            axioms: module
                .axioms
                .iter()
                .filter(|a| a.id.ends_with("-sa"))
                .cloned()
                .collect(),
            prefixes: module.prefixes.clone(),
        })
    }

    /// The module's three authored additions.
    pub fn module_additions(&self) -> Result<AxiomSet, CorpusError> {
        let module = self.module_axioms()?;
        Ok(AxiomSet {
            axioms: module
                .axioms
                .iter()
                .filter(|a| !a.id.ends_with("-sa"))
                .cloned()
                .collect(),
            prefixes: module.prefixes.clone(),
        })
    }

    /// Alternate transformation axioms expressing the prose reading of the
    /// inverse existential/functionality restrictions.
    pub fn prose_axioms(&self) -> Result<&AxiomSet, CorpusError> {
        Self::fetch(&self.axioms, "data_transformation_prose")
    }

    /// Vocabulary axioms for the solar-event response chain.
    pub fn response_axioms(&self) -> Result<&AxiomSet, CorpusError> {
        Self::fetch(&self.axioms, "response_chain")
    }

    pub fn rename_map(&self) -> Result<&RenameMap, CorpusError> {
        Self::fetch(&self.maps, "simulation_activity")
    }

    pub fn rule_set(&self, stem: &str) -> Result<&RuleSet, CorpusError> {
        Self::fetch(&self.rules, stem)
    }

    pub fn graph(&self, stem: &str) -> Result<&Graph, CorpusError> {
        Self::fetch(&self.graphs, stem)
    }

    /// The populated worked example (72 triples).
    pub fn worked_example(&self) -> Result<&Graph, CorpusError> {
        self.graph("worked_example")
    }

    pub fn query(&self, stem: &str) -> Result<&ConjunctiveQuery, CorpusError> {
        Self::fetch(&self.queries, stem)
    }

    pub fn queries(&self) -> impl Iterator<Item = (&str, &ConjunctiveQuery)> {
        self.queries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

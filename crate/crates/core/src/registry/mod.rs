//! Base diagrams: loading, integrity checks against the reference metadata,
//! and the two explicitly known triples of degree 56 and 96.

pub mod catalog;
pub mod format;
pub mod search;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::certify::find_useful_cycle;
use crate::diagram::{g_prime, Diagram, DiagramError, Handle};
use crate::perm::Permutation;
use crate::words::{parse_word, Word};

pub use catalog::{table2_catalog, BaseDiagramMeta};
pub use format::{parse_records, write_record, FormatError, Record};
pub use search::{brute_search, SearchError, SearchSpec, DEFAULT_SEARCH_CAP};

/// Environment variable naming the data directory.
pub const DATA_ENV: &str = "HURWITZ_DATA";
/// Optional manifest in the data directory: one `<name> <file>` per line.
pub const MANIFEST_FILE: &str = "MANIFEST";

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: manifest line {line}: {message}")]
    Manifest {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("manifest expects {name} in {file}, but it was not found there")]
    MissingFromFile { name: String, file: String },
    #[error("integrity check failed for {name}: {detail}")]
    Integrity { name: String, detail: String },
    #[error("diagram {0} defined twice")]
    Duplicate(String),
}

impl RegistryError {
    fn integrity(name: &str, detail: impl Into<String>) -> Self {
        RegistryError::Integrity {
            name: name.to_string(),
            detail: detail.into(),
        }
    }
}

const A56: &str = "\
# source: explicit generators for degree 56
diagram A56
degree 56
x (1,52)(2,6)(3,7)(4,53)(5,9)(8,12)(10,15)(11,13)(14,18)(16,21)(17,22)(19,24)(20,34)(23,27)(25,30)(26,32)(28,33)(29,41)(31,36)(35,54)(37,42)(38,40)(39,45)(43,48)(44,49)(46,51)(47,56)(50,55)
y (1,2,3)(4,5,6)(7,8,9)(10,11,12)(13,14,15)(16,17,18)(19,20,21)(22,23,24)(25,26,27)(28,29,30)(31,32,33)(34,35,36)(37,38,39)(40,41,42)(43,44,45)(46,47,48)(49,50,51)
end
";

const A96: &str = "\
# source: explicit generators for degree 96 (due to M. Conder)
diagram A96
degree 96
x (1,2)(3,4)(5,7)(6,10)(8,13)(9,16)(11,19)(12,14)(15,22)(17,25)(18,28)(20,23)(21,31)(24,30)(26,34)(27,37)(29,35)(32,33)(36,40)(38,43)(39,46)(41,48)(42,49)(44,52)(45,55)(47,58)(50,56)(51,53)(54,61)(57,64)(59,67)(60,70)(62,63)(65,72)(66,68)(69,73)(71,76)(74,79)(75,82)(77,85)(78,88)(80,90)(81,91)(83,89)(84,86)(87,94)(92,93)(95,96)
y (1,2,3)(4,5,6)(7,8,9)(10,11,12)(13,14,15)(16,17,18)(19,20,21)(22,23,24)(25,26,27)(28,29,30)(31,32,33)(34,35,36)(37,38,39)(40,41,42)(43,44,45)(46,47,48)(49,50,51)(52,53,54)(55,56,57)(58,59,60)(61,62,63)(64,65,66)(67,68,69)(70,71,72)(73,74,75)(76,77,78)(79,80,81)(82,83,84)(85,86,87)(88,89,90)(91,92,93)(94,95,96)
end
";

/// A triple shipped with the library, with its witness word and prime.
#[derive(Debug, Clone)]
pub struct Embedded {
    pub key: &'static str,
    pub diagram: Diagram,
    pub source: String,
    pub witness: Word,
    pub prime: usize,
}

pub fn embedded(key: &str) -> Option<Embedded> {
    let key = key.trim().to_ascii_lowercase();
    let (text, word, prime, key) = match key.as_str() {
        "a56" => (A56, "(xyxyxy^2xy^2xyxy^2xyxy^2xy^2)^13", 41, "a56"),
        "a96" => (A96, "(xyxy^2xyxyxy^2xyxy^2)^420", 59, "a96"),
        _ => return None,
    };
    let record = parse_records(text)
        .expect("embedded records parse")
        .pop()
        .expect("one record");
    Some(Embedded {
        key,
        diagram: record.diagram,
        source: record.source.unwrap_or_default(),
        witness: parse_word(word).expect("embedded word parses"),
        prime,
    })
}

pub fn embedded_keys() -> [&'static str; 2] {
    ["a56", "a96"]
}

/// Outcome of the G′ construction checks on a diagram G.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GPrimeReport {
    /// `(15,33)` conjugates `xy` to `x′y`.
    pub xy_conjugate: bool,
    /// The 19-cycle conjugates `(x,y)` to `(x′,y)`; `None` if no convention matched.
    pub commutator_convention: Option<String>,
    /// `(x′,y)` has three 13-cycles and three fixed points.
    pub commutator_shape: bool,
    /// Same cycle type for `(x,y)` and `(x′,y)`.
    pub commutator_types_equal: bool,
    pub commutator_cycle_type: String,
}

impl GPrimeReport {
    pub fn ok(&self) -> bool {
        self.xy_conjugate
            && self.commutator_convention.is_some()
            && self.commutator_shape
            && self.commutator_types_equal
    }
}

/// The 19-cycle conjugating `(x,y)` to `(x′,y)` for the diagram G.
pub const G_PRIME_COMMUTATOR_CONJUGATOR: [u32; 19] = [
    35, 17, 31, 32, 34, 16, 37, 28, 30, 21, 20, 8, 18, 25, 10, 27, 23, 24, 41,
];

/// Checks the G → G′ modification on a diagram G of degree 42.
pub fn g_prime_check(g: &Diagram) -> Result<GPrimeReport, DiagramError> {
    let gp = g_prime(g)?;
    let (x, y) = (g.x(), g.y());
    let xp = gp.x();
    let swap = Permutation::transposition(42, 15, 33)?;
    let xy_conjugate = (x * y).conjugate(&swap)? == xp * y;

    let w = Permutation::from_cycles(42, &[G_PRIME_COMMUTATOR_CONJUGATOR])?;
    // The commutator and conjugation conventions are not fixed by the source,
    // so each combination is tried, ours first.
    let alt_comm = |a: &Permutation, b: &Permutation| -> Permutation {
        &(a * b) * &(&a.inverse() * &b.inverse())
    };
    let candidates: [(&str, Permutation, Permutation); 4] = [
        ("x^-1y^-1xy, w^-1cw", x.commutator(y)?, xp.commutator(y)?),
        ("x^-1y^-1xy, wcw^-1", x.commutator(y)?, xp.commutator(y)?),
        ("xyx^-1y^-1, w^-1cw", alt_comm(x, y), alt_comm(xp, y)),
        ("xyx^-1y^-1, wcw^-1", alt_comm(x, y), alt_comm(xp, y)),
    ];
    let mut commutator_convention = None;
    for (idx, (label, c, cp)) in candidates.iter().enumerate() {
        let conj = if idx % 2 == 0 { w.clone() } else { w.inverse() };
        if c.conjugate(&conj)? == *cp {
            commutator_convention = Some(label.to_string());
            break;
        }
    }
    let c = x.commutator(y)?;
    let cp = xp.commutator(y)?;
    let ct = cp.cycle_type();
    Ok(GPrimeReport {
        xy_conjugate,
        commutator_convention,
        commutator_shape: ct.lengths() == [13, 13, 13] && ct.fixed_points() == 3,
        commutator_types_equal: c.cycle_type() == ct,
        commutator_cycle_type: ct.to_string(),
    })
}

/// Validated base diagrams keyed by canonical name.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    diagrams: BTreeMap<String, Diagram>,
    sources: BTreeMap<String, String>,
    notes: Vec<String>,
}

impl Registry {
    /// Only the embedded triples.
    pub fn embedded_only() -> Registry {
        let mut reg = Registry::default();
        for key in embedded_keys() {
            let e = embedded(key).expect("known key");
            reg.sources
                .insert(e.diagram.name().to_string(), e.source.clone());
            reg.diagrams.insert(e.diagram.name().to_string(), e.diagram);
        }
        reg
    }

    /// Data directory from `HURWITZ_DATA`, if set.
    pub fn data_dir_from_env() -> Option<PathBuf> {
        std::env::var_os(DATA_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    }

    pub fn get(&self, name: &str) -> Option<&Diagram> {
        self.diagrams.get(&catalog::canonical_name(name))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.diagrams.keys().map(String::as_str)
    }

    pub fn source(&self, name: &str) -> Option<&str> {
        self.sources.get(name).map(String::as_str)
    }

    /// Observations made while loading (unsourced records, extra handles).
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Validates and inserts a record. A diagram named `G` also yields `G'`.
    pub fn insert(&mut self, record: Record) -> Result<(), RegistryError> {
        let name = catalog::canonical_name(record.diagram.name());
        if self.diagrams.contains_key(&name) {
            return Err(RegistryError::Duplicate(name));
        }
        let diagram = record.diagram.renamed(name.clone());
        self.validate(&name, &diagram)?;
        match &record.source {
            Some(src) => {
                self.sources.insert(name.clone(), src.clone());
            }
            None => self
                .notes
                .push(format!("{name}: no '# source:' comment in data file")),
        }
        if name == "G" {
            let gp = g_prime(&diagram).map_err(|e| RegistryError::integrity("G'", e.to_string()))?;
            self.validate("G'", &gp)?;
            self.sources
                .insert("G'".into(), "derived from G by x' = x(14,32)(15,33)".into());
            self.diagrams.insert("G'".into(), gp);
        }
        self.diagrams.insert(name, diagram);
        Ok(())
    }

    fn validate(&mut self, name: &str, d: &Diagram) -> Result<(), RegistryError> {
        let t = d.triple();
        let orders = (t.x().order(), t.y().order(), t.xy().order());
        if orders != (2, 3, 7) {
            return Err(RegistryError::integrity(
                name,
                format!("orders {orders:?}, expected exactly (2, 3, 7)"),
            ));
        }
        let Some(meta) = catalog::lookup(name) else {
            self.notes
                .push(format!("{name}: not a catalogued base diagram; metadata unchecked"));
            return Ok(());
        };
        if d.degree() != meta.degree {
            return Err(RegistryError::integrity(
                name,
                format!("degree {} but the catalogue says {}", d.degree(), meta.degree),
            ));
        }
        if d.m() != meta.m {
            return Err(RegistryError::integrity(
                name,
                format!("x has {} transpositions but the catalogue says {}", d.m(), meta.m),
            ));
        }
        if let Some(p) = meta.useful_prime {
            if find_useful_cycle(t.x(), t.y(), Some(p)).is_err() {
                return Err(RegistryError::integrity(
                    name,
                    format!("no power of the commutator is a {p}-cycle"),
                ));
            }
        }
        let ones = d.detect_handles(1);
        if name == "G" {
            let mut pairs: Vec<[u32; 2]> = ones
                .iter()
                .map(|h| {
                    let mut p = [h.j, h.k];
                    p.sort_unstable();
                    p
                })
                .collect();
            pairs.sort_unstable();
            if pairs != [[2, 3], [14, 15], [32, 33]] {
                return Err(RegistryError::integrity(
                    name,
                    format!("(1)-handles are {pairs:?}, expected {{2,3}}, {{14,15}}, {{32,33}}"),
                ));
            }
            let report = g_prime_check(d).map_err(|e| RegistryError::integrity(name, e.to_string()))?;
            if !report.ok() {
                return Err(RegistryError::integrity(
                    name,
                    format!("G' checks failed: {report:?}"),
                ));
            }
        } else if let Some(expected) = meta.one_handles {
            if ones.len() != expected {
                return Err(RegistryError::integrity(
                    name,
                    format!("{} (1)-handles, expected {expected}", ones.len()),
                ));
            }
        } else if ones.len() > 1 && d.declared_handles().is_empty() {
            self.notes.push(format!(
                "{name}: {} (1)-handles detected ({}); joins use the first free one",
                ones.len(),
                ones.iter()
                    .map(Handle::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        Ok(())
    }

    /// Loads every record of a data directory on top of the embedded triples.
    ///
    /// With a `MANIFEST` file only the listed `<name> <file>` pairs are read,
    /// and each listed name must be present in its file; otherwise every
    /// `*.diag` file is read.
    pub fn load(dir: &Path) -> Result<Registry, RegistryError> {
        let mut reg = Registry::embedded_only();
        let manifest = dir.join(MANIFEST_FILE);
        let mut expected: Vec<(String, String)> = Vec::new();
        let files: Vec<PathBuf> = if manifest.exists() {
            let text = read(&manifest)?;
            for (idx, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let mut parts = line.split_whitespace();
                match (parts.next(), parts.next(), parts.next()) {
                    (Some(name), Some(file), None) => {
                        expected.push((catalog::canonical_name(name), file.to_string()))
                    }
                    _ => {
                        return Err(RegistryError::Manifest {
                            path: manifest.clone(),
                            line: idx + 1,
                            message: format!("expected '<name> <file>', got '{line}'"),
                        })
                    }
                }
            }
            let mut files: Vec<PathBuf> = expected.iter().map(|(_, f)| dir.join(f)).collect();
            files.sort();
            files.dedup();
            files
        } else {
            let entries = fs::read_dir(dir).map_err(|source| RegistryError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
            let mut files: Vec<PathBuf> = entries
                .filter_map(Result::ok)
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|e| e == "diag"))
                .collect();
            files.sort();
            files
        };
        let mut seen: Vec<(String, PathBuf)> = Vec::new();
        for path in files {
            let text = read(&path)?;
            let records = parse_records(&text).map_err(|source| RegistryError::Format {
                path: path.clone(),
                source,
            })?;
            for record in records {
                seen.push((catalog::canonical_name(record.diagram.name()), path.clone()));
                reg.insert(record)?;
            }
        }
        for (name, file) in expected {
            let path = dir.join(&file);
            if !seen.iter().any(|(n, p)| *n == name && *p == path) {
                return Err(RegistryError::MissingFromFile { name, file });
            }
        }
        Ok(reg)
    }

    /// Writes each non-derived diagram to `<name>.diag` and a manifest.
    pub fn save(&self, dir: &Path) -> Result<(), RegistryError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| RegistryError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let mut manifest = String::new();
        for (name, d) in &self.diagrams {
            if name == "G'" || embedded(name).is_some() {
                continue;
            }
            let file = format!("{}.diag", file_stem(name));
            let path = dir.join(&file);
            fs::write(&path, write_record(d, self.sources.get(name).map(String::as_str)))
                .map_err(io(&path))?;
            manifest.push_str(&format!("{name} {file}\n"));
        }
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, manifest).map_err(io(&path))
    }
}

fn file_stem(name: &str) -> String {
    name.replace('\'', "p")
}

fn read(path: &Path) -> Result<String, RegistryError> {
    fs::read_to_string(path).map_err(|source| RegistryError::Io {
        path: path.to_path_buf(),
        source,
    })
}

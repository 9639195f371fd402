//! Versioned JSON files holding labeled tables, one per `(q, n)` and field
//! presentation.

use super::{Ambiguity, CharacterTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gfq::FieldTable;
use crate::glq::{class_size, ClassIndex};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "GLQ_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct ClassEntry {
    sigma: ClassIndex,
    size: u64,
}

#[derive(Serialize, Deserialize)]
struct CharEntry {
    degree: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    label: Option<ClassIndex>,
    values: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    format_version: u32,
    q: usize,
    n: usize,
    modulus: Vec<u8>,
    alpha: u8,
    exponent: u32,
    classes: Vec<ClassEntry>,
    characters: Vec<CharEntry>,
    #[serde(default)]
    ambiguities: Vec<Ambiguity>,
}

pub fn to_json(table: &CharacterTable) -> String {
    let file = TableFile {
        format_version: FORMAT_VERSION,
        q: table.q(),
        n: table.n(),
        modulus: table.modulus().to_vec(),
        alpha: table.alpha(),
        exponent: table.m(),
        classes: table
            .classes()
            .iter()
            .zip(table.class_sizes())
            .map(|(s, &size)| ClassEntry { sigma: s.clone(), size })
            .collect(),
        characters: (0..table.rows().len())
            .map(|r| CharEntry {
                degree: table.degrees()[r],
                label: table.label(r).cloned(),
                values: table.row(r).iter().map(Cyclotomic::coeff_strings).collect(),
            })
            .collect(),
        ambiguities: table.ambiguities().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("table serializes")
}

pub fn from_json(field: &FieldTable, s: &str) -> Result<CharacterTable> {
    let file: TableFile = serde_json::from_str(s)?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Cache(format!("format version {}", file.format_version)));
    }
    if file.q != field.q() || file.modulus != field.modulus() || file.alpha != field.alpha() {
        return Err(Error::Cache("field presentation differs".into()));
    }
    for c in &file.classes {
        if class_size(&c.sigma, file.q).to_u64() != Some(c.size) {
            return Err(Error::Cache(format!("class size of {}", c.sigma)));
        }
    }
    let m = file.exponent;
    let rows: Vec<Vec<Cyclotomic>> = file
        .characters
        .iter()
        .map(|c| {
            c.values
                .iter()
                .map(|v| Cyclotomic::from_coeff_strings(m, v).ok_or_else(|| Error::Cache("bad character value".into())))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut table = CharacterTable::assemble(
        field,
        file.n,
        m,
        file.classes.iter().map(|c| c.sigma.clone()).collect(),
        file.classes.iter().map(|c| c.size).collect(),
        rows.clone(),
    )?;
    if table.rows() != rows.as_slice() {
        return Err(Error::Cache("rows not in canonical order".into()));
    }
    if table.degrees() != file.characters.iter().map(|c| c.degree).collect::<Vec<_>>() {
        return Err(Error::Cache("stored degrees disagree with values".into()));
    }
    let labels: Option<Vec<ClassIndex>> = file.characters.into_iter().map(|c| c.label).collect();
    if let Some(l) = labels {
        table.set_labels(l, file.ambiguities);
    }
    Ok(table)
}

/// Directory of cached tables.
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }
    /// `GLQ_CACHE_DIR` when set, else `fallback`.
    pub fn from_env_or(fallback: impl Into<PathBuf>) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => TableCache::new(d),
            _ => TableCache::new(fallback),
        }
    }
    pub fn dir(&self) -> &Path {
        &self.dir
    }
    pub fn path(&self, field: &FieldTable, n: usize) -> PathBuf {
        let modulus: Vec<String> = field.modulus().iter().map(|c| c.to_string()).collect();
        self.dir.join(format!(
            "gl{n}_q{}_mod{}_a{}_v{FORMAT_VERSION}.json",
            field.q(),
            modulus.join("-"),
            field.alpha()
        ))
    }
    /// Labeled table if present; unlabeled or unreadable files count as misses.
    pub fn load(&self, field: &FieldTable, n: usize) -> Result<Option<CharacterTable>> {
        let p = self.path(field, n);
        let Ok(s) = std::fs::read_to_string(&p) else {
            return Ok(None);
        };
        match from_json(field, &s) {
            Ok(t) if t.labels().is_some() && t.n() == n => Ok(Some(t)),
            Ok(_) => Ok(None),
            Err(e) => {
                log::warn!("ignoring cache file {}: {e}", p.display());
                Ok(None)
            }
        }
    }
    pub fn store(&self, table: &CharacterTable) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)?;
        let field = crate::gfq::build_field(table.q() as u64)?;
        let p = self.path(&field, table.n());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        std::io::Write::write_all(&mut tmp, to_json(table).as_bytes())?;
        tmp.persist(&p).map_err(|e| Error::Io(e.error))?;
        Ok(p)
    }
}

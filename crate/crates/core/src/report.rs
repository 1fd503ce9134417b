//! Catalog records, cached invariants and aggregate reports.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::canonical::{automorphism_group, space_orbits, CanonicalForm};
use crate::designs::{all_sts, independence_number, is_systematic, st_set};
use crate::error::{Error, Result};
use crate::io::parse_pcc;
use crate::linalg::{kernel, rank};
use crate::profiles::clp;
use crate::switching::minimal_i_components;
use crate::word::BinaryCode;

/// Invariants stored in the cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub rank: usize,
    pub kernel_size: usize,
    pub st_size: usize,
    pub alpha: usize,
    /// Decimal, since orders can exceed 64 bits for long codes.
    pub aut_order: String,
    pub systematic: bool,
    pub clp: Vec<u64>,
}

impl Invariants {
    pub fn compute(c: &BinaryCode) -> Result<Self> {
        let st = st_set(c)?;
        Ok(Invariants {
            rank: rank(c)?,
            kernel_size: kernel(c)?.size(),
            st_size: st.len(),
            alpha: independence_number(&st),
            aut_order: automorphism_group(c)?.order.to_string(),
            systematic: is_systematic(c)?,
            clp: clp(c)?.kappa_prime,
        })
    }
}

#[derive(Clone, Debug)]
pub struct CatalogRecord {
    /// 1-based position in the catalog file.
    pub index: usize,
    pub code: BinaryCode,
    pub invariants: Option<Invariants>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub records: Vec<CatalogRecord>,
    /// SHA-256 of the catalog file contents.
    pub digest: String,
    pub path: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    catalog_digest: String,
    invariants: Vec<Invariants>,
}

impl Catalog {
    pub fn from_codes(codes: Vec<BinaryCode>) -> Self {
        let text = crate::io::pcc_string(&codes);
        Catalog {
            digest: hex::encode(Sha256::digest(text.as_bytes())),
            records: codes
                .into_iter()
                .enumerate()
                .map(|(i, code)| CatalogRecord {
                    index: i + 1,
                    code,
                    invariants: None,
                })
                .collect(),
            path: None,
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let codes = parse_pcc(bytes)?;
        let mut c = Self::from_codes(codes);
        c.digest = hex::encode(Sha256::digest(bytes));
        Ok(c)
    }

    /// Reads a PCC1 catalog and adopts a cache beside it when its digest
    /// matches the file contents.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        let mut c = Self::from_bytes(&bytes)?;
        c.path = Some(path.to_path_buf());
        if let Ok(text) = std::fs::read_to_string(cache_path(path)) {
            if let Ok(cache) = serde_json::from_str::<CacheFile>(&text) {
                if cache.catalog_digest == c.digest && cache.invariants.len() == c.records.len() {
                    for (r, inv) in c.records.iter_mut().zip(cache.invariants) {
                        r.invariants = Some(inv);
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn codes(&self) -> Vec<&BinaryCode> {
        self.records.iter().map(|r| &r.code).collect()
    }

    /// Fills in missing invariants. Returns the number computed.
    pub fn ensure_invariants(&mut self) -> Result<usize> {
        let missing: Vec<usize> = (0..self.records.len())
            .filter(|&i| self.records[i].invariants.is_none())
            .collect();
        let fresh: Vec<(usize, Invariants)> = missing
            .par_iter()
            .map(|&i| Ok((i, Invariants::compute(&self.records[i].code)?)))
            .collect::<Result<_>>()?;
        for (i, inv) in fresh {
            self.records[i].invariants = Some(inv);
        }
        Ok(missing.len())
    }

    /// Writes the cache beside the catalog file.
    pub fn save_cache(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let invariants = self
            .records
            .iter()
            .map(|r| r.invariants.clone())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Inconsistent("invariants not computed".into()))?;
        let file = CacheFile {
            catalog_digest: self.digest.clone(),
            invariants,
        };
        let text = serde_json::to_string_pretty(&file).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(cache_path(path), text)?;
        Ok(())
    }

    fn invariants(&self) -> Result<Vec<&Invariants>> {
        self.records
            .iter()
            .map(|r| {
                r.invariants
                    .as_ref()
                    .ok_or_else(|| Error::Inconsistent(format!("record {} has no invariants", r.index)))
            })
            .collect()
    }
}

pub fn cache_path(catalog: &Path) -> PathBuf {
    let mut s = catalog.as_os_str().to_owned();
    s.push(".cache.json");
    s.into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Table {
    AutOrders,
    RankKernel,
    StsOccurrence,
    StsCounts,
    StSizes,
    Independence,
    Clp,
    Components,
    SymFixed,
}

impl Table {
    pub const ALL: [Table; 9] = [
        Table::AutOrders,
        Table::RankKernel,
        Table::StsOccurrence,
        Table::StsCounts,
        Table::StSizes,
        Table::Independence,
        Table::Clp,
        Table::Components,
        Table::SymFixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Table::AutOrders => "aut-orders",
            Table::RankKernel => "rank-kernel",
            Table::StsOccurrence => "sts-occurrence",
            Table::StsCounts => "sts-counts",
            Table::StSizes => "st-sizes",
            Table::Independence => "independence",
            Table::Clp => "clp",
            Table::Components => "components",
            Table::SymFixed => "sym-fixed",
        }
    }

    /// Whether the table reads only cached invariants.
    pub fn uses_cache(self) -> bool {
        matches!(
            self,
            Table::AutOrders | Table::RankKernel | Table::StSizes | Table::Independence | Table::Clp
        )
    }
}

impl FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Table::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown table {s:?}")))
    }
}

/// An aggregation: key columns and a count per distinct key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub table: String,
    pub columns: Vec<String>,
    pub count_column: String,
    pub rows: Vec<(Vec<String>, u64)>,
}

/// Numbers compare numerically, everything else lexicographically.
fn natural(a: &str, b: &str) -> Ordering {
    match (a.parse::<u128>(), b.parse::<u128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

fn key_cmp(a: &[String], b: &[String]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| natural(x, y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

impl Report {
    fn aggregate(table: Table, columns: &[&str], count: &str, keys: Vec<Vec<String>>) -> Self {
        let mut counts: HashMap<Vec<String>, u64> = HashMap::new();
        for k in keys {
            *counts.entry(k).or_insert(0) += 1;
        }
        let mut rows: Vec<(Vec<String>, u64)> = counts.into_iter().collect();
        rows.sort_by(|a, b| key_cmp(&a.0, &b.0));
        Report {
            table: table.name().to_string(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            count_column: count.to_string(),
            rows,
        }
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.1).sum()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\t');
        out.push_str(&self.count_column);
        out.push('\n');
        for (key, n) in &self.rows {
            out.push_str(&key.join("\t"));
            out.push('\t');
            out.push_str(&n.to_string());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|(key, n)| {
                let mut m = serde_json::Map::new();
                for (c, v) in self.columns.iter().zip(key) {
                    m.insert(c.clone(), serde_json::Value::String(v.clone()));
                }
                m.insert(self.count_column.clone(), serde_json::Value::from(*n));
                serde_json::Value::Object(m)
            })
            .collect();
        serde_json::json!({
            "table": self.table,
            "columns": self.columns,
            "count_column": self.count_column,
            "rows": rows,
        })
    }
}

/// Distinct STS classes among the translates of a code, as canonical forms.
fn sts_classes(c: &BinaryCode) -> Result<BTreeSet<CanonicalForm>> {
    Ok(all_sts(c)?
        .par_iter()
        .map(|d| d.canonical_form())
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// Builds one report. `labels` maps STS digests to external labels for the
/// occurrence table; unmapped classes are keyed by digest.
pub fn report(catalog: &Catalog, table: Table, labels: Option<&HashMap<String, String>>) -> Result<Report> {
    let one = |v: String| vec![v];
    Ok(match table {
        Table::AutOrders => Report::aggregate(
            table,
            &["aut_order"],
            "codes",
            catalog.invariants()?.iter().map(|i| one(i.aut_order.clone())).collect(),
        ),
        Table::RankKernel => Report::aggregate(
            table,
            &["rank", "kernel_size"],
            "codes",
            catalog
                .invariants()?
                .iter()
                .map(|i| vec![i.rank.to_string(), i.kernel_size.to_string()])
                .collect(),
        ),
        Table::StSizes => Report::aggregate(
            table,
            &["st_size"],
            "codes",
            catalog.invariants()?.iter().map(|i| one(i.st_size.to_string())).collect(),
        ),
        Table::Independence => Report::aggregate(
            table,
            &["alpha"],
            "codes",
            catalog.invariants()?.iter().map(|i| one(i.alpha.to_string())).collect(),
        ),
        Table::Clp => Report::aggregate(
            table,
            &["profile"],
            "codes",
            catalog
                .invariants()?
                .iter()
                .map(|i| {
                    one(i.clp.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","))
                })
                .collect(),
        ),
        Table::StsOccurrence => {
            let mut keys = Vec::new();
            for r in &catalog.records {
                for f in sts_classes(&r.code)? {
                    let d = f.digest();
                    keys.push(one(labels.and_then(|m| m.get(&d).cloned()).unwrap_or(d)));
                }
            }
            Report::aggregate(table, &["sts"], "codes", keys)
        }
        Table::StsCounts => {
            let mut keys = Vec::new();
            for r in &catalog.records {
                keys.push(one(sts_classes(&r.code)?.len().to_string()));
            }
            Report::aggregate(table, &["classes"], "codes", keys)
        }
        Table::Components => {
            let mut keys = Vec::new();
            for r in &catalog.records {
                for i in 1..=r.code.n() {
                    keys.push(one(minimal_i_components(&r.code, i)?.size_notation()));
                }
            }
            Report::aggregate(table, &["sizes"], "partitions", keys)
        }
        Table::SymFixed => {
            let mut keys = Vec::new();
            for r in &catalog.records {
                for x in translate_class_representatives(&r.code)? {
                    let rep = automorphism_group(&r.code.translate(x))?;
                    keys.push(one(rep.coordinate_fixed_count.to_string()));
                }
            }
            Report::aggregate(table, &["fixed"], "classes", keys)
        }
    })
}

/// One word per Aut(C)-orbit of the space: the translates `C + x` up to
/// isomorphism.
pub fn translate_class_representatives(c: &BinaryCode) -> Result<Vec<u32>> {
    let aut = automorphism_group(c)?;
    let orbit = space_orbits(c.n(), &aut.generators)?;
    let mut seen = vec![false; orbit.iter().map(|&o| o as usize + 1).max().unwrap_or(0)];
    let mut reps = Vec::new();
    for (x, &o) in orbit.iter().enumerate() {
        if !seen[o as usize] {
            seen[o as usize] = true;
            reps.push(x as u32);
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v = vec!["10", "9", "b", "a", "100"];
        v.sort_by(|a, b| natural(a, b));
        assert_eq!(v, vec!["9", "10", "100", "a", "b"]);
    }

    #[test]
    fn table_names_round_trip() {
        for t in Table::ALL {
            assert_eq!(t.name().parse::<Table>().unwrap(), t);
        }
        assert!("nope".parse::<Table>().is_err());
    }
}

//! Canonical on-disk formats and run reports.
//!
//! Two group formats, both JSON-shaped text that round-trips bit-exactly:
//! `cocycle-group/v1` records (p, n, m, beta table, family metadata) and is
//! re-validated on load through the special-condition constructor;
//! `table-group/v1` records a raw Cayley table and is re-validated as a
//! group on load. Census and verdict payloads serialize through their own
//! types. Reports never embed wall-clock data, so byte-identical inputs
//! give byte-identical outputs; timing goes to stderr at the call site.

use crate::gammal::Census;
use crate::groups::{CocycleGroup, Family, GroupError, TableGroup};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;
use thiserror::Error;

pub const COCYCLE_FORMAT: &str = "cocycle-group/v1";
pub const TABLE_FORMAT: &str = "table-group/v1";
pub const REPORT_FORMAT: &str = "run-report/v1";

#[derive(Debug, Error)]
pub enum FilesError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unrecognized format tag {0:?}")]
    BadFormat(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Serialize, Deserialize)]
struct CocycleFileV1 {
    format: String,
    p: u32,
    n: usize,
    m: usize,
    /// beta[i][j] is the m-residue value on the (i, j) basis pair.
    beta: Vec<Vec<Vec<u32>>>,
    family: Family,
}

#[derive(Serialize, Deserialize)]
struct TableFileV1 {
    format: String,
    order: usize,
    /// Row-major order x order element indices.
    table: Vec<usize>,
    identity: usize,
}

/// Either group representation, distinguished by the file's format tag.
#[derive(Clone, Debug)]
pub enum GroupFile {
    Cocycle(CocycleGroup),
    Table(TableGroup),
}

impl GroupFile {
    pub fn order_string(&self) -> String {
        match self {
            GroupFile::Cocycle(g) => g.order_string(),
            GroupFile::Table(t) => t.order.to_string(),
        }
    }
}

pub fn cocycle_to_json(g: &CocycleGroup) -> String {
    let beta: Vec<Vec<Vec<u32>>> = (0..g.n)
        .map(|i| (0..g.n).map(|j| g.beta(i, j).vals.clone()).collect())
        .collect();
    let file = CocycleFileV1 {
        format: COCYCLE_FORMAT.to_string(),
        p: g.p,
        n: g.n,
        m: g.m,
        beta,
        family: g.family.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn cocycle_from_json(text: &str) -> Result<CocycleGroup, FilesError> {
    let file: CocycleFileV1 = serde_json::from_str(text)?;
    if file.format != COCYCLE_FORMAT {
        return Err(FilesError::BadFormat(file.format));
    }
    let beta: Vec<crate::fplinalg::VecFp> = file
        .beta
        .into_iter()
        .flatten()
        .map(|row| crate::fplinalg::VecFp::new(file.p, row))
        .collect();
    // from_beta re-checks the zero-radical and spanning conditions.
    Ok(CocycleGroup::from_beta(file.p, file.n, file.m, beta, file.family)?)
}

pub fn table_to_json(t: &TableGroup) -> String {
    let table: Vec<usize> = (0..t.order)
        .flat_map(|i| (0..t.order).map(move |j| t.mul(i, j)))
        .collect();
    let file = TableFileV1 {
        format: TABLE_FORMAT.to_string(),
        order: t.order,
        table,
        identity: t.identity,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn table_from_json(text: &str) -> Result<TableGroup, FilesError> {
    let file: TableFileV1 = serde_json::from_str(text)?;
    if file.format != TABLE_FORMAT {
        return Err(FilesError::BadFormat(file.format));
    }
    let rows: Vec<Vec<usize>> =
        file.table.chunks(file.order.max(1)).map(|c| c.to_vec()).collect();
    // from_rows re-checks the group axioms.
    let t = TableGroup::from_rows(&rows, Vec::new())?;
    if t.identity != file.identity {
        return Err(FilesError::Group(GroupError::BadTable(format!(
            "recorded identity {} but the table's identity is {}",
            file.identity, t.identity
        ))));
    }
    Ok(t)
}

/// Parse either group format by peeking at the format tag.
pub fn group_from_json(text: &str) -> Result<GroupFile, FilesError> {
    #[derive(Deserialize)]
    struct Probe {
        format: String,
    }
    let probe: Probe = serde_json::from_str(text)?;
    match probe.format.as_str() {
        COCYCLE_FORMAT => Ok(GroupFile::Cocycle(cocycle_from_json(text)?)),
        TABLE_FORMAT => Ok(GroupFile::Table(table_from_json(text)?)),
        other => Err(FilesError::BadFormat(other.to_string())),
    }
}

pub fn load_group(path: &Path) -> Result<GroupFile, FilesError> {
    group_from_json(&std::fs::read_to_string(path)?)
}

pub fn census_to_json(c: &Census) -> String {
    let mut s = serde_json::to_string_pretty(c).expect("serializable");
    s.push('\n');
    s
}

/// Summary row only; witnesses are a JSON-only payload.
pub fn census_to_csv(c: &Census) -> String {
    format!(
        "q,dim,hyperplane,admissible,both,neither\n{},{},{},{},{},{}\n",
        c.q, c.dim, c.cells.hyperplane, c.cells.admissible, c.cells.both, c.cells.neither
    )
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Deterministic record of one command invocation. Equal inputs and
/// parameters produce byte-equal reports; anything time-dependent is
/// excluded by construction.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub format: &'static str,
    pub command: String,
    pub parameters: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub artifact_version: &'static str,
    pub payload: serde_json::Value,
}

impl RunReport {
    pub fn new(command: &str, parameters: serde_json::Value) -> RunReport {
        RunReport {
            format: REPORT_FORMAT,
            command: command.to_string(),
            parameters,
            inputs: Vec::new(),
            artifact_version: env!("CARGO_PKG_VERSION"),
            payload: serde_json::Value::Null,
        }
    }

    pub fn add_input(&mut self, path: &Path, contents: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(contents),
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldCtx;
    use crate::groups::{mk_cyclic, mk_heisenberg_q, mk_p_epsilon, mk_su3_sylow};

    #[test]
    fn cocycle_round_trip_is_bit_exact() {
        let groups = vec![
            mk_heisenberg_q(&FieldCtx::new(3, 2, None).unwrap()).unwrap(),
            mk_su3_sylow(2, 2).unwrap(),
            mk_p_epsilon(),
        ];
        for g in groups {
            let s1 = cocycle_to_json(&g);
            let g2 = cocycle_from_json(&s1).unwrap();
            assert_eq!(g, g2);
            assert_eq!(s1, cocycle_to_json(&g2));
        }
    }

    #[test]
    fn table_round_trip_is_bit_exact() {
        let t = mk_cyclic(9);
        let s1 = table_to_json(&t);
        let t2 = table_from_json(&s1).unwrap();
        assert_eq!(s1, table_to_json(&t2));
        assert_eq!(t.order, t2.order);
        for i in 0..t.order {
            for j in 0..t.order {
                assert_eq!(t.mul(i, j), t2.mul(i, j));
            }
        }
    }

    #[test]
    fn format_tag_is_enforced() {
        let t = mk_cyclic(4);
        let table_json = table_to_json(&t);
        assert!(matches!(
            cocycle_from_json(&table_json),
            Err(FilesError::BadFormat(_)) | Err(FilesError::Json(_))
        ));
        let tampered = table_json.replace("table-group/v1", "table-group/v9");
        assert!(matches!(group_from_json(&tampered), Err(FilesError::BadFormat(_))));
    }

    #[test]
    fn load_rejects_a_broken_table() {
        let mut t = table_to_json(&mk_cyclic(4));
        // Swap two entries so a row repeats a value.
        t = t.replacen("3,", "1,", 1);
        assert!(table_from_json(&t).is_err());
    }

    #[test]
    fn group_probe_dispatches_on_format() {
        let g = mk_heisenberg_q(&FieldCtx::new(3, 1, None).unwrap()).unwrap();
        match group_from_json(&cocycle_to_json(&g)).unwrap() {
            GroupFile::Cocycle(h) => assert_eq!(h.order_string(), g.order_string()),
            GroupFile::Table(_) => panic!("expected cocycle dispatch"),
        }
        match group_from_json(&table_to_json(&mk_cyclic(6))).unwrap() {
            GroupFile::Table(t) => assert_eq!(t.order, 6),
            GroupFile::Cocycle(_) => panic!("expected table dispatch"),
        }
    }

    #[test]
    fn digests_and_reports_are_stable() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        let mut r1 = RunReport::new("check3", serde_json::json!({"strategy": "oracle"}));
        r1.add_input(Path::new("g.json"), b"payload");
        r1.payload = serde_json::json!({"is3": true});
        let mut r2 = RunReport::new("check3", serde_json::json!({"strategy": "oracle"}));
        r2.add_input(Path::new("g.json"), b"payload");
        r2.payload = serde_json::json!({"is3": true});
        assert_eq!(r1.to_json(), r2.to_json());
        assert!(r1.to_json().contains("run-report/v1"));
    }
}

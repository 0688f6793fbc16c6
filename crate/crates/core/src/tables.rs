//! The `BH_2` case tables: for `t1 = (0,0)` and each `t2`, source triples with a sink
//! `t3` and three paths forming a paired 3-DPC.
//!
//! Rows are stored verbatim in `data/tables.txt`, one per line:
//! `<table-id> <s1> <s2> <s3> <t3> <path1> <path2> <path3>`, paths as comma-joined
//! letters. Letter `x` names the vertex with index `x - 'a'`, so `a = (0,0)`,
//! `b = (1,0)`, ..., `p = (3,3)`. A few rows carry typesetting damage; a `.` is read as
//! a separator and rows that fail verification are repaired from the exhaustive oracle.

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::topology::NodeId;
use crate::verify::{oracle_exists_3dpc, oracle_find_t3, verify_kdpc, OracleAnswer, Report};

pub const TABLE_TEXT: &str = include_str!("../data/tables.txt");
const TABLE_SHA256: &str = include_str!("../data/tables.txt.sha256");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}: {reason}")]
    Decode { line: usize, reason: String },
    #[error("table data checksum mismatch: expected {expected}, got {actual}")]
    Checksum { expected: String, actual: String },
    #[error("table {table} line {line}: no paired 3-DPC exists for any t3")]
    UnrepairableRow { table: u8, line: usize },
}

/// The vertex of `BH_2` named by `letter`.
pub fn decode_letter(letter: char) -> Option<NodeId> {
    match letter {
        'a'..='p' => Some(NodeId::from_index(letter as usize - 'a' as usize, 2)),
        _ => None,
    }
}

pub fn encode_node(u: &NodeId) -> Option<char> {
    (u.dim() == 2).then(|| (b'a' + u.index() as u8) as char)
}

/// `(t1, t2)` fixed by each table.
pub fn table_sinks(table: u8) -> Option<(NodeId, NodeId)> {
    let t2 = match table {
        1 => "(2,0)",
        2 => "(0,1)",
        3 => "(0,2)",
        4 => "(0,3)",
        _ => return None,
    };
    Some(("(0,0)".parse().expect("literal"), t2.parse().expect("literal")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub table: u8,
    /// 1-based line in the table file.
    pub line: usize,
    pub sources: [NodeId; 3],
    pub sinks: [NodeId; 3],
    pub paths: [Vec<NodeId>; 3],
}

impl TableRow {
    pub fn pairs(&self) -> [(NodeId, NodeId); 3] {
        [0, 1, 2].map(|j| (self.sources[j].clone(), self.sinks[j].clone()))
    }

    pub fn label(&self) -> String {
        let name = |u: &NodeId| encode_node(u).unwrap_or('?');
        format!(
            "T{} s=({},{},{}) t3={}",
            self.table,
            name(&self.sources[0]),
            name(&self.sources[1]),
            name(&self.sources[2]),
            name(&self.sinks[2])
        )
    }
}

pub fn parse_tables(text: &str) -> Result<Vec<TableRow>, TableError> {
    let mut rows = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |reason: String| TableError::Decode { line, reason };
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let [id, s1, s2, s3, t3, p1, p2, p3] = fields[..] else {
            return Err(err(format!("expected 8 fields, got {}", fields.len())));
        };
        let table: u8 = id.parse().map_err(|_| err(format!("bad table id {id:?}")))?;
        let (t1, t2) = table_sinks(table).ok_or_else(|| err(format!("unknown table {table}")))?;
        let single = |f: &str| -> Result<NodeId, TableError> {
            let mut chars = f.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => decode_letter(c).ok_or_else(|| err(format!("{c:?} is not a letter a..p"))),
                _ => Err(err(format!("{f:?} is not a single letter"))),
            }
        };
        let path = |f: &str| -> Result<Vec<NodeId>, TableError> {
            f.split([',', '.']).map(|c| single(c)).collect()
        };
        rows.push(TableRow {
            table,
            line,
            sources: [single(s1)?, single(s2)?, single(s3)?],
            sinks: [t1, t2, single(t3)?],
            paths: [path(p1)?, path(p2)?, path(p3)?],
        });
    }
    if rows.is_empty() {
        return Err(TableError::Decode { line: 0, reason: "no table rows".into() });
    }
    Ok(rows)
}

pub fn checksum(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Decodes the embedded tables after checking them against their recorded checksum.
pub fn load_tables() -> Result<Vec<TableRow>, TableError> {
    let expected = TABLE_SHA256.split_whitespace().next().unwrap_or_default().to_string();
    let actual = checksum(TABLE_TEXT);
    if expected != actual {
        return Err(TableError::Checksum { expected, actual });
    }
    parse_tables(TABLE_TEXT)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Valid,
    Corrupted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Replacement {
    pub t3: NodeId,
    /// Whether the row's own `t3` could be kept.
    pub same_t3: bool,
    pub paths: Vec<Vec<NodeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowVerdict {
    pub table: u8,
    pub line: usize,
    pub label: String,
    pub status: RowStatus,
    pub report: Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replacement: Option<Replacement>,
}

/// Verifies one row, repairing it from the oracle when its paths fail.
pub fn validate_row(row: &TableRow) -> Result<RowVerdict, TableError> {
    let pairs = row.pairs();
    let report = verify_kdpc(2, &pairs, &row.paths);
    let verdict = |status, replacement| RowVerdict {
        table: row.table,
        line: row.line,
        label: row.label(),
        status,
        report: report.clone(),
        replacement,
    };
    if report.passed() {
        return Ok(verdict(RowStatus::Valid, None));
    }
    let unrepairable = TableError::UnrepairableRow { table: row.table, line: row.line };
    let raw = |paths: Vec<crate::pathengine::Path>| paths.into_iter().map(|p| p.into_nodes()).collect();
    if let Ok(OracleAnswer::Yes(paths)) = oracle_exists_3dpc(2, &pairs) {
        let fix = Replacement { t3: row.sinks[2].clone(), same_t3: true, paths: raw(paths) };
        return Ok(verdict(RowStatus::Corrupted, Some(fix)));
    }
    let [t1, t2, _] = &row.sinks;
    let found = oracle_find_t3(&row.sources, t1, t2).map_err(|_| unrepairable.clone())?;
    let t3 = found.into_iter().next().ok_or(unrepairable.clone())?;
    let fixed = [pairs[0].clone(), pairs[1].clone(), (pairs[2].0.clone(), t3.clone())];
    match oracle_exists_3dpc(2, &fixed) {
        Ok(OracleAnswer::Yes(paths)) => {
            let fix = Replacement { t3, same_t3: false, paths: raw(paths) };
            Ok(verdict(RowStatus::Corrupted, Some(fix)))
        }
        _ => Err(unrepairable),
    }
}

pub fn validate_rows(rows: &[TableRow]) -> Result<Vec<RowVerdict>, TableError> {
    rows.par_iter().map(validate_row).collect()
}

pub fn validate_all() -> Result<Vec<RowVerdict>, TableError> {
    validate_rows(&load_tables()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub valid: usize,
    pub corrupted: usize,
    pub repaired: usize,
}

pub fn summarize(verdicts: &[RowVerdict]) -> Summary {
    let corrupted = verdicts.iter().filter(|v| v.status == RowStatus::Corrupted).count();
    Summary {
        rows: verdicts.len(),
        valid: verdicts.len() - corrupted,
        corrupted,
        repaired: verdicts.iter().filter(|v| v.replacement.is_some()).count(),
    }
}

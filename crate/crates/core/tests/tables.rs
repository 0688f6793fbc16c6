use bhdpc_core::tables::{
    checksum, decode_letter, encode_node, load_tables, parse_tables, summarize, table_sinks, validate_all, RowStatus,
    TableError, TABLE_TEXT,
};
use bhdpc_core::verify::{oracle_find_t3, verify_kdpc};

/// Row count at first ingest.
const ROWS: usize = 240;

/// `(table, line)` of every row whose printed paths fail verification, as first ingested.
const CORRUPTED: [(u8, usize); 9] = [(1, 40), (2, 63), (2, 84), (2, 107), (3, 133), (3, 147), (3, 161), (4, 199), (4, 204)];

#[test]
fn row_count_is_frozen() {
    let rows = load_tables().unwrap();
    assert_eq!(rows.len(), ROWS);
    for table in 1..=4 {
        assert_eq!(rows.iter().filter(|r| r.table == table).count(), 60);
    }
}

#[test]
fn headers_fix_t1_t2() {
    assert_eq!(table_sinks(4).unwrap().1.to_string(), "(0,3)");
    for row in load_tables().unwrap() {
        let (t1, t2) = table_sinks(row.table).unwrap();
        assert_eq!((&row.sinks[0], &row.sinks[1]), (&t1, &t2));
    }
}

#[test]
fn first_row() {
    let rows = load_tables().unwrap();
    let row = &rows[0];
    assert_eq!(row.sources.clone().map(|u| u.to_string()), ["(1,0)", "(3,0)", "(1,1)"]);
    assert_eq!(row.sinks[2].to_string(), "(0,1)");
}

#[test]
fn corrupted_rows_match_frozen_list_and_are_repaired() {
    let verdicts = validate_all().unwrap();
    let corrupted: Vec<(u8, usize)> =
        verdicts.iter().filter(|v| v.status == RowStatus::Corrupted).map(|v| (v.table, v.line)).collect();
    assert_eq!(corrupted, CORRUPTED);
    let rows = load_tables().unwrap();
    for (row, verdict) in rows.iter().zip(&verdicts) {
        match verdict.status {
            RowStatus::Valid => {
                assert!(verdict.replacement.is_none());
                assert!(verify_kdpc(2, &row.pairs(), &row.paths).passed());
            }
            RowStatus::Corrupted => {
                let fix = verdict.replacement.as_ref().unwrap();
                let mut pairs = row.pairs();
                pairs[2].1 = fix.t3.clone();
                assert!(verify_kdpc(2, &pairs, &fix.paths).passed(), "{}", verdict.label);
            }
        }
    }
    let summary = summarize(&verdicts);
    assert_eq!((summary.valid, summary.corrupted, summary.repaired), (ROWS - 9, 9, 9));
}

#[test]
fn typeset_damage_is_among_corrupted() {
    let verdicts = validate_all().unwrap();
    let bad = |needle: &str| {
        let line = TABLE_TEXT.lines().position(|l| l.contains(needle)).unwrap() + 1;
        verdicts.iter().any(|v| v.line == line && v.status == RowStatus::Corrupted)
    };
    assert!(bad("n,i,o,o,d,m,b,a"));
    assert!(bad("l.g,k,i"));
    assert!(bad("d,m,p,i,l,k,j,h,h,e"));
    assert!(bad("f,e,j,g,g,c,d,a"));
}

#[test]
fn oracle_accepts_each_rows_t3() {
    let verdicts = validate_all().unwrap();
    for (row, verdict) in load_tables().unwrap().iter().zip(&verdicts) {
        let t3 = verdict.replacement.as_ref().map_or(&row.sinks[2], |fix| &fix.t3);
        let found = oracle_find_t3(&row.sources, &row.sinks[0], &row.sinks[1]).unwrap();
        assert!(found.contains(t3), "{}", verdict.label);
    }
}

#[test]
fn letters_round_trip() {
    for c in 'a'..='p' {
        assert_eq!(encode_node(&decode_letter(c).unwrap()), Some(c));
    }
}

#[test]
fn empty_file_is_a_decode_error() {
    assert!(matches!(parse_tables(""), Err(TableError::Decode { .. })));
}

#[test]
fn checksum_is_stable() {
    assert_eq!(checksum(TABLE_TEXT).len(), 64);
    assert_ne!(checksum(TABLE_TEXT), checksum(&TABLE_TEXT.replace('a', "b")));
}

#[test]
fn verdicts_serialize() {
    let verdicts = validate_all().unwrap();
    let json = serde_json::to_value(&verdicts[39]).unwrap();
    assert_eq!(json["status"], "corrupted");
    assert!(json["replacement"]["paths"].is_array());
}

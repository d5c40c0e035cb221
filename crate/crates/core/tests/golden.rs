//! Stratum reports compared byte for byte with stored JSON. Set
//! `SSLOC_BLESS=1` to rewrite the files after an intended change.

use std::path::PathBuf;

use ssloc_core::fq::SymplecticSpace;
use ssloc_core::strata::{count_points, StratumReport, DEFAULT_BUDGET};

const CASES: [(usize, u32, u32); 5] = [(1, 3, 1), (1, 3, 2), (2, 2, 1), (2, 2, 2), (2, 3, 1)];

fn path(m: usize, p: u32, k: u32) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/stratum_m{m}_p{p}_k{k}.json"))
}

#[test]
fn stratum_reports_match_golden_files() {
    let bless = std::env::var_os("SSLOC_BLESS").is_some();
    for (m, p, k) in CASES {
        let report = count_points(&SymplecticSpace::standard(p, m).unwrap(), k, DEFAULT_BUDGET).unwrap();
        let json = serde_json::to_string_pretty(&report).unwrap() + "\n";
        let file = path(m, p, k);
        if bless {
            std::fs::write(&file, &json).unwrap();
            continue;
        }
        let stored = std::fs::read_to_string(&file).unwrap_or_else(|e| panic!("{}: {e}", file.display()));
        assert_eq!(json, stored, "{}", file.display());
        let parsed: StratumReport = serde_json::from_str(&stored).unwrap();
        assert_eq!(parsed, report);
    }
}

#[test]
fn golden_totals() {
    let expected = [(4, vec![4, 0]), (10, vec![4, 6]), (15, vec![15, 0, 0]), (45, vec![15, 30, 0]), (40, vec![40, 0, 0])];
    for ((m, p, k), (total, counts)) in CASES.into_iter().zip(expected) {
        let stored: StratumReport = serde_json::from_str(&std::fs::read_to_string(path(m, p, k)).unwrap()).unwrap();
        assert_eq!(stored.total, total);
        assert_eq!(stored.counts(), counts);
        for s in &stored.strata {
            assert_eq!(s.count, s.components.iter().map(|c| c.count).sum::<usize>());
        }
    }
}

//! Integration tests for the family registry: loading, invariants,
//! round-tripping, and the verification harness at depth `quick`.

use gz4::registry::{
    default_registry, load_registry_str, verify_all, verify_family, CheckStatus, Depth,
    FamilyStatus, PhiEntry, RawRegistry, RegistryError, DEFAULT_REGISTRY_TEXT,
};

#[test]
fn default_registry_loads_with_expected_shape() {
    let recs = default_registry().expect("default registry must load");
    assert_eq!(recs.len(), 23);

    let conjectural: Vec<&str> = recs
        .iter()
        .filter(|r| r.status == FamilyStatus::Conjectural)
        .map(|r| r.id.as_str())
        .collect();
    assert_eq!(conjectural, ["2-6", "2-12", "2-21", "2-32", "3-13"]);

    let external: Vec<&str> = recs
        .iter()
        .filter(|r| matches!(r.phi, PhiEntry::External(_)))
        .map(|r| r.id.as_str())
        .collect();
    assert_eq!(external, ["2-6", "2-12", "3-1"]);

    // the nine Fricke rows carry explicit presentations
    for n in [2u64, 3, 4, 5, 6, 7, 8, 9, 11] {
        let id = format!("{},1", n);
        let rec = recs.iter().find(|r| r.id == id).unwrap();
        assert!(rec.group.is_some(), "row {} must parse to a group", id);
        assert_eq!(rec.group_label, format!("G0({})+{}", n, n));
    }
}

#[test]
fn row_2_4_fields() {
    let recs = default_registry().unwrap();
    let rec = recs.iter().find(|r| r.id == "2,4").unwrap();
    match &rec.phi {
        PhiEntry::Explicit(_, s) => assert_eq!(s, "x+y+z+1/(x*y*z)"),
        PhiEntry::External(_) => panic!("row 2,4 must carry an explicit polynomial"),
    }
    assert_eq!(rec.group_label, "(8A1)+2");
    assert!(rec.group.is_none(), "label-only groups parse to None");
}

#[test]
fn truncated_registry_is_rejected() {
    let mut raw: RawRegistry = serde_json::from_str(DEFAULT_REGISTRY_TEXT).unwrap();
    raw.families.pop();
    let text = serde_json::to_string(&raw).unwrap();
    match load_registry_str(&text) {
        Err(RegistryError::Invariant(msg)) => assert!(msg.contains("23")),
        other => panic!("expected invariant violation, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn mislabeled_status_is_rejected() {
    let mut raw: RawRegistry = serde_json::from_str(DEFAULT_REGISTRY_TEXT).unwrap();
    for r in &mut raw.families {
        if r.id == "2-6" {
            r.status = "proved".into();
        }
    }
    let text = serde_json::to_string(&raw).unwrap();
    assert!(matches!(
        load_registry_str(&text),
        Err(RegistryError::Invariant(_))
    ));
}

#[test]
fn round_trip_preserves_records() {
    let recs = load_registry_str(DEFAULT_REGISTRY_TEXT).unwrap();
    let raw = RawRegistry {
        schema_version: 1,
        families: recs.iter().map(|r| r.to_raw()).collect(),
    };
    let text = serde_json::to_string_pretty(&raw).unwrap();
    let again = load_registry_str(&text).unwrap();
    assert_eq!(recs.len(), again.len());
    for (a, b) in recs.iter().zip(again.iter()) {
        assert_eq!(a.to_raw(), b.to_raw());
    }
}

#[test]
fn quick_verification_passes_on_an_explicit_family() {
    let recs = default_registry().unwrap();
    let rec = recs.iter().find(|r| r.id == "2,1").unwrap();
    let report = verify_family(rec, Depth::Quick);
    assert!(report.fully_checked(), "checks: {:?}", report.checks);
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        ["polytope_reflexive", "periods_vs_oracle", "recurrence_found"]
    );
}

#[test]
fn external_family_checks_are_skipped() {
    let recs = default_registry().unwrap();
    let rec = recs.iter().find(|r| r.id == "2-6").unwrap();
    let report = verify_family(rec, Depth::Quick);
    assert!(!report.checks.is_empty());
    assert!(report
        .checks
        .iter()
        .all(|c| c.status == CheckStatus::Skipped));
    assert!(!report.failed());
    assert!(!report.fully_checked());
}

#[test]
fn quick_verification_over_the_whole_table() {
    let recs = default_registry().unwrap();
    let agg = verify_all(&recs, Depth::Quick);
    assert_eq!(agg.total, 23);
    assert_eq!(agg.failed, 0, "failing families: {:#?}", agg.families);
    // every row with an explicit polynomial is fully checked at depth quick
    assert_eq!(agg.fully_checked, 20);
    assert_eq!(agg.partially_checked, 3);
}

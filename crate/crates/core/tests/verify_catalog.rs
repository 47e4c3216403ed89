use weaklg::verify::{verify_catalog, Status, VerifyOptions};

#[test]
fn every_builtin_model_passes() {
    let reports = verify_catalog(&VerifyOptions::default());
    assert_eq!(reports.len(), 12);
    let mut failures = Vec::new();
    for r in &reports {
        for c in &r.checks {
            println!("{:14} {:20} {:?} {}", r.id, c.name, c.status, c.detail);
            if c.status == Status::Fail {
                failures.push(format!("{}: {} ({})", r.id, c.name, c.detail));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn skipped_checks_are_not_passes() {
    let reports = verify_catalog(&VerifyOptions { order: 40, ..Default::default() });
    let nt = reports.iter().find(|r| r.id == "x22_nontoric").unwrap();
    assert_eq!(nt.check("critical-values").unwrap().status, Status::Skipped);
    assert_eq!(nt.check("canonical").unwrap().status, Status::Skipped);
    let v18 = reports.iter().find(|r| r.id == "v18").unwrap();
    assert_eq!(v18.check("cross-model-series").unwrap().status, Status::Skipped);
}

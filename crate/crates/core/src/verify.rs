//! Runs every applicable check on a catalog entry.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{load_catalog, table_row, CatalogEntry};
use crate::critical::{check_expected_values, cluster_values, find_critical_points, leading_symbol_at_inverse, CriticalOptions};
use crate::periods::{constant_terms_series, constant_terms_series_naive, series_equal};
use crate::pfops::{is_d3_shape, recover_minimal_operator, Recovered};
use crate::polytope::{newton_polytope, toric_report};
use crate::scalar::{format_rational, int};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub order: usize,
    pub oracle_order: usize,
    pub compare_order: usize,
    pub m_max: u32,
    pub ord_d: usize,
    pub max_deg_t: usize,
    pub critical: CriticalOptions<f64>,
    /// Distance allowed between an expected and a found critical value.
    pub value_tol: f64,
    pub symbol_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            order: 60,
            oracle_order: 10,
            compare_order: 24,
            m_max: 3,
            ord_d: 3,
            max_deg_t: 4,
            critical: CriticalOptions::default(),
            value_tol: 1e-8,
            symbol_tol: 1e-6,
        }
    }
}

fn result(name: &str, status: Status, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), status, detail: detail.into() }
}

fn pass_if(name: &str, ok: bool, detail: impl Into<String>) -> CheckResult {
    result(name, if ok { Status::Pass } else { Status::Fail }, detail)
}

/// Verifies one entry; `peers` are compared series-wise when they share its
/// table row.
pub fn verify_entry(entry: &CatalogEntry, peers: &[CatalogEntry], opts: &VerifyOptions) -> VerificationReport {
    let started = Instant::now();
    let f = &entry.polynomial;
    let mut checks = Vec::new();

    let fast = constant_terms_series(f, opts.order.max(opts.compare_order).max(opts.oracle_order));
    match &fast {
        Ok(s) => {
            let naive = constant_terms_series_naive(f, opts.oracle_order);
            let cmp = series_equal(&s.truncate(opts.oracle_order), &naive);
            checks.push(pass_if(
                "series-oracle",
                cmp.equal && cmp.compared == opts.oracle_order,
                format!("{} coefficients compared", cmp.compared),
            ));
        }
        Err(e) => checks.push(result("series-oracle", Status::Fail, e.to_string())),
    }

    let meta = table_row(entry.table1_row).is_some_and(|r| {
        (r.index, r.degree, r.h12) == (entry.index, entry.degree, entry.h12)
    }) && entry.expected_components_over_0 == entry.h12 + 1;
    checks.push(pass_if(
        "table-metadata",
        meta,
        format!(
            "row {}: index {}, degree {}, h12 {}, components over 0 {}",
            entry.table1_row, entry.index, entry.degree, entry.h12, entry.expected_components_over_0
        ),
    ));

    match newton_polytope(f) {
        Ok(p) => {
            let interior = p.interior_lattice_points();
            let canonical = interior == vec![[0, 0, 0]];
            checks.push(if entry.is_canonical_claimed {
                pass_if("canonical", canonical, format!("{} interior lattice points", interior.len()))
            } else {
                result("canonical", Status::Skipped, "no canonicity claim")
            });
            match p.dual() {
                Ok(d) => {
                    let rep = toric_report(&d, entry.degree, opts.m_max);
                    let counts: Vec<String> = rep.rows.iter().map(|r| r.count.to_string()).collect();
                    checks.push(pass_if(
                        "toric",
                        rep.holds == entry.is_toric_claimed,
                        format!("E(1..{}) = {}; formula holds: {}", opts.m_max, counts.join(", "), rep.holds),
                    ));
                    let six_vol = d.normalized_volume() * int(6);
                    checks.push(if entry.is_toric_claimed {
                        pass_if(
                            "dual-volume",
                            six_vol == int(entry.degree),
                            format!("6 vol = {}", format_rational(&six_vol)),
                        )
                    } else {
                        result("dual-volume", Status::Skipped, format!("not toric; 6 vol = {}", format_rational(&six_vol)))
                    });
                }
                Err(e) => {
                    checks.push(pass_if("toric", !entry.is_toric_claimed, e.to_string()));
                    checks.push(result("dual-volume", Status::Skipped, e.to_string()));
                }
            }
        }
        Err(e) => {
            checks.push(result("canonical", Status::Fail, e.to_string()));
            checks.push(result("toric", Status::Fail, e.to_string()));
            checks.push(result("dual-volume", Status::Fail, e.to_string()));
        }
    }

    let mut operator: Option<Recovered> = None;
    match &fast {
        Ok(s) => match recover_minimal_operator(&s.truncate(opts.order), opts.ord_d, opts.max_deg_t) {
            Ok(Some(r)) => {
                checks.push(result(
                    "pf-recovery",
                    Status::Pass,
                    format!("deg_t {}, {} held-out coefficients annihilated", r.operator.deg_t(), r.held_out),
                ));
                operator = Some(r);
            }
            Ok(None) => checks.push(result("pf-recovery", Status::Fail, "no operator of the requested shape")),
            Err(e) => checks.push(result("pf-recovery", Status::Fail, e.to_string())),
        },
        Err(e) => checks.push(result("pf-recovery", Status::Fail, e.to_string())),
    }
    checks.push(match &operator {
        Some(r) => {
            let shape = is_d3_shape(&r.operator);
            pass_if(
                "pf-shape",
                shape.ok,
                shape.violation.map_or_else(|| "type D3".to_string(), |v| v.to_string()),
            )
        }
        None => result("pf-shape", Status::Fail, "no operator"),
    });

    match &entry.expected_critical_values {
        Some(expected) => {
            let points = find_critical_points(f, &opts.critical);
            let set = cluster_values(&points, opts.critical.cluster_radius);
            let rep = check_expected_values(&set, expected, opts.value_tol);
            let detail = if rep.ok {
                format!("{} expected values found among {} clusters", expected.len(), set.len())
            } else {
                format!("missing {:?}", rep.missing)
            };
            checks.push(pass_if("critical-values", rep.ok, detail));
            checks.push(match &operator {
                Some(r) => {
                    let worst = expected
                        .iter()
                        .filter(|v| v.norm() > 0.0)
                        .map(|v| leading_symbol_at_inverse(&r.operator, *v))
                        .fold(0.0, f64::max);
                    pass_if("pf-critical", worst < opts.symbol_tol, format!("max |symbol(1/λ)| = {worst:.3e}"))
                }
                None => result("pf-critical", Status::Fail, "no operator"),
            });
        }
        None => {
            checks.push(result("critical-values", Status::Skipped, "no expected values"));
            checks.push(result("pf-critical", Status::Skipped, "no expected values"));
        }
    }

    let same_row: Vec<&CatalogEntry> =
        peers.iter().filter(|p| p.table1_row == entry.table1_row && p.id != entry.id).collect();
    checks.push(match (&fast, same_row.is_empty()) {
        (_, true) => result("cross-model-series", Status::Skipped, "no other model for this row"),
        (Err(e), _) => result("cross-model-series", Status::Fail, e.to_string()),
        (Ok(s), false) => {
            let mine = s.truncate(opts.compare_order);
            let mismatched: Vec<String> = same_row
                .iter()
                .filter(|p| {
                    constant_terms_series(&p.polynomial, opts.compare_order)
                        .map_or(true, |t| !series_equal(&mine, &t).equal)
                })
                .map(|p| p.id.clone())
                .collect();
            let ids: Vec<&str> = same_row.iter().map(|p| p.id.as_str()).collect();
            pass_if(
                "cross-model-series",
                mismatched.is_empty(),
                if mismatched.is_empty() {
                    format!("equal to {} over {} coefficients", ids.join(", "), opts.compare_order)
                } else {
                    format!("differs from {}", mismatched.join(", "))
                },
            )
        }
    });

    let status = if checks.iter().any(|c| c.status == Status::Fail) { Status::Fail } else { Status::Pass };
    VerificationReport { id: entry.id.clone(), status, checks, elapsed: started.elapsed() }
}

/// Verifies the whole built-in catalog; reports keep catalog order.
pub fn verify_catalog(opts: &VerifyOptions) -> Vec<VerificationReport> {
    let cat = load_catalog();
    cat.par_iter().map(|e| verify_entry(e, &cat, opts)).collect()
}

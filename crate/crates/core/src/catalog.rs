//! Built-in Landau-Ginzburg models and the JSON model-file format.

use std::path::Path;

use num_complex::Complex;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::parse::{parse, ParseError};
use crate::polytope::{newton_polytope, PolytopeError};
use crate::LaurentPolynomial;

/// One row of the table of Fano threefolds of Picard rank one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub number: u8,
    pub index: u32,
    pub degree: i64,
    pub h12: u32,
    pub components_over_0: u32,
}

const fn row(number: u8, index: u32, degree: i64, h12: u32) -> TableRow {
    TableRow { number, index, degree, h12, components_over_0: h12 + 1 }
}

pub const TABLE1: [TableRow; 17] = [
    row(1, 1, 2, 52),
    row(2, 1, 4, 30),
    row(3, 1, 6, 20),
    row(4, 1, 8, 14),
    row(5, 1, 10, 10),
    row(6, 1, 12, 7),
    row(7, 1, 14, 5),
    row(8, 1, 16, 3),
    row(9, 1, 18, 2),
    row(10, 1, 22, 0),
    row(11, 2, 8, 21),
    row(12, 2, 16, 10),
    row(13, 2, 24, 5),
    row(14, 2, 32, 2),
    row(15, 2, 40, 0),
    row(16, 3, 54, 0),
    row(17, 4, 64, 0),
];

pub fn table_row(number: u8) -> Option<&'static TableRow> {
    TABLE1.iter().find(|r| r.number == number)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub fano_name: String,
    pub table1_row: u8,
    pub index: u32,
    pub degree: i64,
    pub h12: u32,
    pub expected_components_over_0: u32,
    pub polynomial: LaurentPolynomial,
    pub is_toric_claimed: bool,
    pub is_canonical_claimed: bool,
    pub expected_critical_values: Option<Vec<Complex<f64>>>,
    /// Components over 0 of this particular model's compactification, when
    /// it is known to differ from `h12 + 1`.
    pub observed_components_over_0: Option<u32>,
    pub source: String,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("field `{field}`: {reason}")]
    Schema { field: &'static str, reason: String },
    #[error("polynomial: {0}")]
    Parse(#[from] ParseError),
    #[error("polynomial: {0}")]
    Polytope(#[from] PolytopeError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

struct Spec {
    id: &'static str,
    fano_name: &'static str,
    row: u8,
    expr: &'static str,
    toric: bool,
    canonical: bool,
    values: Values,
    observed: Option<u32>,
    source: &'static str,
}

#[derive(Clone, Copy)]
enum Values {
    None,
    FourthRootsOf256,
    CubeRootsOf108,
    PlusMinus8,
}

impl Values {
    fn expand(self) -> Option<Vec<Complex<f64>>> {
        match self {
            Values::None => None,
            Values::FourthRootsOf256 => Some(roots_of_unity(4).into_iter().map(|w| w * 4.0).collect()),
            Values::CubeRootsOf108 => Some(roots_of_unity(3).into_iter().map(|w| w * 108f64.cbrt()).collect()),
            Values::PlusMinus8 => Some(vec![Complex::new(8.0, 0.0), Complex::new(-8.0, 0.0)]),
        }
    }
}

fn roots_of_unity(n: u32) -> Vec<Complex<f64>> {
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    (0..n)
        .map(|k| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(n)))
        .map(|z| Complex::new(snap(z.re), snap(z.im)))
        .collect()
}

const SPECS: [Spec; 12] = [
    Spec {
        id: "v16",
        fano_name: "V_16",
        row: 8,
        expr: "(x+1)(y+1)(z+1)(x+y+z+1)/(xyz)",
        toric: true,
        canonical: false,
        values: Values::None,
        observed: None,
        source: "standard model of V_16, affine chart of the quartic pencil (x+t)(y+t)(z+t)(x+y+z+t) = λxyzt",
    },
    Spec {
        id: "v18",
        fano_name: "V_18",
        row: 9,
        expr: "(x+y+z)(x+xz+xy+xyz+z+y+yz)/(xyz)",
        toric: true,
        canonical: false,
        values: Values::None,
        observed: None,
        source: "standard model of V_18",
    },
    Spec {
        id: "p3_a",
        fano_name: "P^3",
        row: 17,
        expr: "x+y+z+1/(xyz)",
        toric: true,
        canonical: true,
        values: Values::FourthRootsOf256,
        observed: None,
        source: "canonical model of P^3, first of three",
    },
    Spec {
        id: "p3_b",
        fano_name: "P^3",
        row: 17,
        expr: "(x+1)^2/(xyz)+y/z+z",
        toric: true,
        canonical: true,
        values: Values::FourthRootsOf256,
        observed: None,
        source: "canonical model of P^3, second of three",
    },
    Spec {
        id: "p3_c",
        fano_name: "P^3",
        row: 17,
        expr: "x+y/x+z/x+1/(xy)+1/(xz)",
        toric: true,
        canonical: true,
        values: Values::FourthRootsOf256,
        observed: None,
        source: "canonical model of P^3, third of three",
    },
    Spec {
        id: "q3_a",
        fano_name: "Q",
        row: 16,
        expr: "(x+1)^2/(xyz)+y+z",
        toric: true,
        canonical: true,
        values: Values::CubeRootsOf108,
        observed: None,
        source: "canonical model of the quadric, first of four",
    },
    Spec {
        id: "q3_b",
        fano_name: "Q",
        row: 16,
        expr: "x+y+z+1/(xy)+1/(xz)",
        toric: true,
        canonical: true,
        values: Values::CubeRootsOf108,
        observed: None,
        source: "canonical model of the quadric, second of four",
    },
    Spec {
        id: "q3_c",
        fano_name: "Q",
        row: 16,
        expr: "(x+y)^2/x+1/(xy)+z/x+y/(xz)",
        toric: true,
        canonical: true,
        values: Values::CubeRootsOf108,
        observed: None,
        source: "canonical model of the quadric, third of four",
    },
    Spec {
        id: "q3_d",
        fano_name: "Q",
        row: 16,
        expr: "(x+1)^3/(xyz)+y/z+2/z+2x/z+z^2/y",
        toric: true,
        canonical: true,
        values: Values::CubeRootsOf108,
        observed: None,
        source: "canonical model of the quadric, fourth of four",
    },
    Spec {
        id: "x22_a",
        fano_name: "V_2.2 (intersection of two quadrics in P^5)",
        row: 14,
        expr: "(x+1)^2(y+1)^2/(xyz)+z",
        toric: true,
        canonical: true,
        values: Values::PlusMinus8,
        observed: None,
        source: "toric model of the intersection of two quadrics, first of two",
    },
    Spec {
        id: "x22_b",
        fano_name: "V_2.2 (intersection of two quadrics in P^5)",
        row: 14,
        expr: "x+y+z+1/(xyz)+1/x+1/y+1/z+xyz",
        toric: true,
        canonical: true,
        values: Values::PlusMinus8,
        observed: None,
        source: "toric model of the intersection of two quadrics, second of two",
    },
    Spec {
        id: "x22_nontoric",
        fano_name: "V_2.2 (intersection of two quadrics in P^5)",
        row: 14,
        expr: "(x+1/x)(y+1/y)(z+1/z)",
        toric: false,
        canonical: false,
        values: Values::None,
        observed: Some(30),
        source: "weak but not toric model of the intersection of two quadrics",
    },
];

fn build(spec: &Spec) -> CatalogEntry {
    let row = table_row(spec.row).expect("catalog rows exist in the table");
    CatalogEntry {
        id: spec.id.into(),
        fano_name: spec.fano_name.into(),
        table1_row: row.number,
        index: row.index,
        degree: row.degree,
        h12: row.h12,
        expected_components_over_0: row.components_over_0,
        polynomial: parse(spec.expr).expect("built-in polynomial parses"),
        is_toric_claimed: spec.toric,
        is_canonical_claimed: spec.canonical,
        expected_critical_values: spec.values.expand(),
        observed_components_over_0: spec.observed,
        source: spec.source.into(),
    }
}

/// The built-in models in fixed order.
pub fn load_catalog() -> Vec<CatalogEntry> {
    SPECS.iter().map(build).collect()
}

pub fn catalog_ids() -> Vec<&'static str> {
    SPECS.iter().map(|s| s.id).collect()
}

pub fn find_entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    SPECS
        .iter()
        .find(|s| s.id == id)
        .map(build)
        .ok_or_else(|| CatalogError::UnknownModel(id.into()))
}

impl CatalogEntry {
    /// Model-file document.
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "fano_name": self.fano_name,
            "table1_row": self.table1_row,
            "index": self.index,
            "degree": self.degree,
            "h12": self.h12,
            "polynomial": self.polynomial.to_string(),
            "is_toric_claimed": self.is_toric_claimed,
            "is_canonical_claimed": self.is_canonical_claimed,
            "expected_critical_values": self.expected_critical_values.as_ref().map(|v| {
                v.iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>()
            }),
            "observed_components_over_0": self.observed_components_over_0,
            "source": self.source,
        })
    }

    pub fn from_json(doc: &Value) -> Result<Self, CatalogError> {
        let obj = doc
            .as_object()
            .ok_or(CatalogError::Schema { field: "<root>", reason: "expected a JSON object".into() })?;
        let table1_row = uint(obj, "table1_row")?;
        if !(1..=17).contains(&table1_row) {
            return Err(CatalogError::Schema { field: "table1_row", reason: "must be between 1 and 17".into() });
        }
        let h12 = uint(obj, "h12")? as u32;
        let polynomial = parse(&string(obj, "polynomial")?)?;
        newton_polytope(&polynomial)?;
        let expected_critical_values = match obj.get("expected_critical_values") {
            None | Some(Value::Null) => None,
            Some(v) => Some(complex_list(v)?),
        };
        let observed_components_over_0 = match obj.get("observed_components_over_0") {
            None | Some(Value::Null) => None,
            Some(_) => Some(uint(obj, "observed_components_over_0")? as u32),
        };
        Ok(CatalogEntry {
            id: string(obj, "id")?,
            fano_name: string(obj, "fano_name")?,
            table1_row: table1_row as u8,
            index: uint(obj, "index")? as u32,
            degree: integer(obj, "degree")?,
            h12,
            expected_components_over_0: h12 + 1,
            polynomial,
            is_toric_claimed: boolean(obj, "is_toric_claimed")?,
            is_canonical_claimed: boolean(obj, "is_canonical_claimed")?,
            expected_critical_values,
            observed_components_over_0,
            source: obj.get("source").and_then(Value::as_str).unwrap_or_default().to_string(),
        })
    }
}

fn field<'a>(obj: &'a Map<String, Value>, name: &'static str) -> Result<&'a Value, CatalogError> {
    obj.get(name).ok_or(CatalogError::Schema { field: name, reason: "missing".into() })
}

fn string(obj: &Map<String, Value>, name: &'static str) -> Result<String, CatalogError> {
    field(obj, name)?
        .as_str()
        .map(str::to_string)
        .ok_or(CatalogError::Schema { field: name, reason: "expected a string".into() })
}

fn integer(obj: &Map<String, Value>, name: &'static str) -> Result<i64, CatalogError> {
    field(obj, name)?.as_i64().ok_or(CatalogError::Schema { field: name, reason: "expected an integer".into() })
}

fn uint(obj: &Map<String, Value>, name: &'static str) -> Result<u64, CatalogError> {
    field(obj, name)?
        .as_u64()
        .filter(|&v| v <= u64::from(u32::MAX))
        .ok_or(CatalogError::Schema { field: name, reason: "expected a nonnegative integer".into() })
}

fn boolean(obj: &Map<String, Value>, name: &'static str) -> Result<bool, CatalogError> {
    field(obj, name)?.as_bool().ok_or(CatalogError::Schema { field: name, reason: "expected a boolean".into() })
}

fn complex_list(v: &Value) -> Result<Vec<Complex<f64>>, CatalogError> {
    let bad = || CatalogError::Schema { field: "expected_critical_values", reason: "expected [[re, im], ...]".into() };
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([re, im]) => Ok(Complex::new(re.as_f64().ok_or_else(bad)?, im.as_f64().ok_or_else(bad)?)),
            _ => Err(bad()),
        })
        .collect()
}

pub fn load_model_file(path: &Path) -> Result<CatalogEntry, CatalogError> {
    let text = std::fs::read_to_string(path)?;
    CatalogEntry::from_json(&serde_json::from_str(&text)?)
}

pub fn save_model_file(entry: &CatalogEntry, path: &Path) -> Result<(), CatalogError> {
    let text = serde_json::to_string_pretty(&entry.to_json())?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_consistency() {
        for e in load_catalog() {
            let r = table_row(e.table1_row).unwrap();
            assert_eq!((e.index, e.degree, e.h12), (r.index, r.degree, r.h12), "{}", e.id);
            assert_eq!(e.expected_components_over_0, e.h12 + 1);
        }
        assert!(TABLE1.iter().all(|r| r.components_over_0 == r.h12 + 1));
        assert_eq!(table_row(14).unwrap().degree, 32);
        assert_eq!(table_row(16).unwrap().degree, 54);
    }

    #[test]
    fn entries() {
        let cat = load_catalog();
        assert_eq!(cat.len(), 12);
        assert_eq!(find_entry("p3_a").unwrap().polynomial.len(), 4);
        let nt = find_entry("x22_nontoric").unwrap();
        assert!(!nt.is_toric_claimed);
        assert_eq!((nt.h12, nt.observed_components_over_0), (2, Some(30)));
        assert!(matches!(find_entry("nope"), Err(CatalogError::UnknownModel(_))));
        assert_eq!(cat.iter().filter(|e| e.is_canonical_claimed).count(), 9);
    }

    #[test]
    fn expected_values() {
        let p3 = find_entry("p3_a").unwrap().expected_critical_values.unwrap();
        assert_eq!(p3, vec![Complex::new(4.0, 0.0), Complex::new(0.0, 4.0), Complex::new(-4.0, 0.0), Complex::new(0.0, -4.0)]);
        for v in find_entry("q3_b").unwrap().expected_critical_values.unwrap() {
            assert!((v.powu(3) - Complex::new(108.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn model_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for e in load_catalog() {
            let path = dir.path().join(format!("{}.json", e.id));
            save_model_file(&e, &path).unwrap();
            assert_eq!(load_model_file(&path).unwrap(), e);
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let mut doc = find_entry("v18").unwrap().to_json();
        doc.as_object_mut().unwrap().remove("degree");
        match CatalogEntry::from_json(&doc) {
            Err(CatalogError::Schema { field, .. }) => assert_eq!(field, "degree"),
            other => panic!("{other:?}"),
        }
        let mut doc = find_entry("v18").unwrap().to_json();
        doc["polynomial"] = json!("x+y");
        assert!(matches!(CatalogEntry::from_json(&doc), Err(CatalogError::Polytope(PolytopeError::Degenerate { .. }))));
        doc["polynomial"] = json!("x+");
        assert!(matches!(CatalogEntry::from_json(&doc), Err(CatalogError::Parse(_))));
        doc["table1_row"] = json!(40);
        assert!(matches!(CatalogEntry::from_json(&doc), Err(CatalogError::Schema { field: "table1_row", .. })));
    }
}

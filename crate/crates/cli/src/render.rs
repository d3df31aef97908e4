//! Plain, CSV and JSON renderings.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use toroidal_core::cohomology::{render_group, CohomologyTable, EquivariantTable, FixedPointStructure};
use toroidal_core::oracle::{Observed, OracleReport};
use toroidal_core::{Group, LatticeType, Prime, Result};

/// Output format selector shared by the subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

/// Integers that fit in `u64` are JSON numbers; larger ones are decimal strings.
mod big {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(small) => s.serialize_u64(small),
            None => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(BigUint::from(v)),
            Repr::Text(s) => s
                .parse()
                .map_err(|_| D::Error::custom(format!("not a nonnegative integer: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub k: usize,
    #[serde(with = "big")]
    pub free_rank: BigUint,
    #[serde(with = "big")]
    pub p_torsion_rank: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedDoc {
    #[serde(with = "big")]
    pub components: BigUint,
    pub torus_dim: usize,
}

/// JSON form of a cohomology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub p: u32,
    #[serde(rename = "type")]
    pub lattice_type: [usize; 3],
    pub n: usize,
    pub groups: Vec<GroupDoc>,
    pub fixed_points: FixedDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivariant: Option<Vec<GroupDoc>>,
}

fn group_docs(entries: &[Group]) -> Vec<GroupDoc> {
    entries
        .iter()
        .enumerate()
        .map(|(k, g)| GroupDoc {
            k,
            free_rank: g.free_rank.clone(),
            p_torsion_rank: g.torsion_rank.clone(),
        })
        .collect()
}

impl TableDoc {
    pub fn new(
        l: &LatticeType,
        table: &CohomologyTable,
        fixed: &FixedPointStructure,
        equivariant: Option<&EquivariantTable>,
    ) -> Self {
        TableDoc {
            p: l.p.get(),
            lattice_type: [l.r, l.s, l.t],
            n: table.n,
            groups: group_docs(&table.entries),
            fixed_points: FixedDoc {
                components: fixed.component_count.clone(),
                torus_dim: fixed.component_torus_dim,
            },
            equivariant: equivariant.map(|e| group_docs(&e.entries)),
        }
    }

    /// The table this document describes.
    pub fn table(&self) -> Result<CohomologyTable> {
        Ok(CohomologyTable {
            p: Prime::new(self.p as u64)?,
            n: self.n,
            entries: self
                .groups
                .iter()
                .map(|g| Group::new(g.free_rank.clone(), g.p_torsion_rank.clone()))
                .collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub fn csv_table(table: &CohomologyTable) -> String {
    let mut out = String::from("k,free_rank,p_torsion_rank\n");
    for (k, g) in table.entries.iter().enumerate() {
        let _ = writeln!(out, "{k},{},{}", g.free_rank, g.torsion_rank);
    }
    out
}

pub fn plain_type(l: &LatticeType) -> String {
    format!("({},{},{})", l.r, l.s, l.t)
}

pub fn plain_table(
    l: &LatticeType,
    table: &CohomologyTable,
    fixed: &FixedPointStructure,
    equivariant: Option<&EquivariantTable>,
) -> String {
    let mut out = format!("type {} over Z/{}, n = {}\n", plain_type(l), l.p, table.n);
    for (k, g) in table.entries.iter().enumerate() {
        let _ = writeln!(out, "H^{k} = {}", render_group(g, l.p));
    }
    let _ = writeln!(
        out,
        "fixed points: {} component(s), each (S^1)^{}",
        fixed.component_count, fixed.component_torus_dim
    );
    if let Some(eq) = equivariant {
        for (k, g) in eq.entries.iter().enumerate() {
            let _ = writeln!(out, "H^{k}_G = {}", render_group(g, l.p));
        }
    }
    out
}

fn observed_text(o: &Observed) -> String {
    match o {
        Observed::Integral(g) => g.to_string(),
        Observed::Field { rational, mod_p } => format!("dim_Q {rational}, dim_F_p {mod_p}"),
    }
}

pub fn plain_oracle(report: &OracleReport) -> String {
    let l = &report.torus.lattice_type;
    let mut out = String::new();
    let _ = writeln!(out, "case: {}", report.case);
    let _ = writeln!(out, "lattice type: {} over Z/{}", plain_type(l), l.p);
    let _ = writeln!(
        out,
        "complex: {} simplices, {} after {} subdivision(s); quotient: {} simplices",
        report.torus.complex.simplex_count(),
        report.regular_simplices,
        report.subdivisions,
        report.quotient_simplices
    );
    let _ = writeln!(out, "mode: {:?}", report.mode);
    if report.fell_back {
        let _ = writeln!(out, "note: quotient above the integral size limit, used field mode (pass --mode field to skip the attempt)");
    }
    for d in &report.degrees {
        let expected = match &d.observed {
            Observed::Integral(_) => render_group(&d.expected, l.p),
            Observed::Field { .. } => format!("dim_Q {}, dim_F_p {}", d.expected.free_rank, d.expected_mod_p),
        };
        let _ = writeln!(
            out,
            "k={}: expected {expected}; observed {}  {}",
            d.k,
            observed_text(&d.observed),
            verdict(d.pass)
        );
    }
    let f = &report.fixed;
    let _ = writeln!(
        out,
        "fixed set: {} component(s) (expected {}), Betti {:?} (expected {:?})  {}",
        f.components,
        f.expected_components,
        f.component_betti.first().cloned().unwrap_or_default(),
        f.expected_betti,
        verdict(f.pass)
    );
    let _ = writeln!(out, "overall: {}", verdict(report.passed()));
    out
}

pub fn json_oracle(report: &OracleReport) -> String {
    let l = &report.torus.lattice_type;
    let degrees: Vec<serde_json::Value> = report
        .degrees
        .iter()
        .map(|d| {
            let observed = match &d.observed {
                Observed::Integral(g) => serde_json::json!({
                    "free_rank": g.free_rank,
                    "torsion": g.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
                Observed::Field { rational, mod_p } => serde_json::json!({
                    "dim_q": rational,
                    "dim_fp": mod_p,
                }),
            };
            serde_json::json!({
                "k": d.k,
                "expected": {
                    "free_rank": d.expected.free_rank.to_string(),
                    "p_torsion_rank": d.expected.torsion_rank.to_string(),
                },
                "observed": observed,
                "pass": d.pass,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "case": report.case.to_string(),
        "p": l.p.get(),
        "type": [l.r, l.s, l.t],
        "mode": format!("{:?}", report.mode).to_lowercase(),
        "fell_back": report.fell_back,
        "subdivisions": report.subdivisions,
        "quotient_simplices": report.quotient_simplices,
        "degrees": degrees,
        "fixed_points": {
            "components": report.fixed.components,
            "expected_components": report.fixed.expected_components.to_string(),
            "pass": report.fixed.pass,
        },
        "pass": report.passed(),
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use toroidal_core::cohomology::{equivariant_cohomology, fixed_point_set, quotient_cohomology};

    #[test]
    fn plain_rendering() {
        let l = LatticeType::new(2, 3, 0, 0).unwrap();
        let table = quotient_cohomology(&l, 3).unwrap();
        let text = plain_table(&l, &table, &fixed_point_set(&l), None);
        assert!(text.contains("H^0 = Z\n"));
        assert!(text.contains("H^1 = 0\n"));
        assert!(text.contains("H^2 = Z^3\n"));
        assert!(text.contains("H^3 = Z/2\n"));
        assert!(text.contains("8 component(s)"));
    }

    #[test]
    fn csv_rendering() {
        let l = LatticeType::new(3, 0, 1, 0).unwrap();
        let table = quotient_cohomology(&l, 3).unwrap();
        assert_eq!(csv_table(&table), "k,free_rank,p_torsion_rank\n0,1,0\n1,1,0\n2,1,0\n3,1,0\n");
    }

    #[test]
    fn json_schema() {
        let l = LatticeType::new(2, 1, 0, 0).unwrap();
        let table = quotient_cohomology(&l, 1).unwrap();
        let eq = equivariant_cohomology(&l, 1).unwrap();
        let doc = TableDoc::new(&l, &table, &fixed_point_set(&l), Some(&eq));
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(v["p"], 2);
        assert_eq!(v["type"], serde_json::json!([1, 0, 0]));
        assert_eq!(v["groups"][0]["free_rank"], 1);
        assert_eq!(v["fixed_points"]["components"], 2);
        assert!(v["equivariant"].is_array());
    }

    #[test]
    fn large_values_are_strings() {
        let l = LatticeType::new(2, 70, 0, 0).unwrap();
        let table = quotient_cohomology(&l, 70).unwrap();
        let doc = TableDoc::new(&l, &table, &fixed_point_set(&l), None);
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        // C(70, 34) exceeds 2^64.
        assert_eq!(v["groups"][34]["free_rank"], "109069992321755544170");
        assert_eq!(v["groups"][34]["p_torsion_rank"], 0);
        assert_eq!(TableDoc::from_json(&doc.to_json()).unwrap(), doc);
    }

    fn biguint() -> impl Strategy<Value = BigUint> {
        prop_oneof![
            any::<u64>().prop_map(BigUint::from),
            prop::collection::vec(any::<u32>(), 1..5).prop_map(BigUint::new),
        ]
    }

    proptest! {
        #[test]
        fn json_round_trip(
            p in prop::sample::select(vec![2u32, 3, 5, 7]),
            ty in (0usize..5, 0usize..5, 0usize..5),
            groups in prop::collection::vec((biguint(), biguint()), 1..8),
            comps in biguint(),
            eq in prop::option::of(prop::collection::vec((biguint(), biguint()), 1..4)),
        ) {
            let docs = |gs: &[(BigUint, BigUint)]| -> Vec<GroupDoc> {
                gs.iter().enumerate().map(|(k, (a, b))| GroupDoc { k, free_rank: a.clone(), p_torsion_rank: b.clone() }).collect()
            };
            let doc = TableDoc {
                p,
                lattice_type: [ty.0, ty.1, ty.2],
                n: groups.len() - 1,
                groups: docs(&groups),
                fixed_points: FixedDoc { components: comps, torus_dim: ty.1 + ty.2 },
                equivariant: eq.as_deref().map(docs),
            };
            let back = TableDoc::from_json(&doc.to_json()).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.table().unwrap(), doc.table().unwrap());
        }
    }
}

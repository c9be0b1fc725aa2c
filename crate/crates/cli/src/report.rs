use std::time::Duration;

use ginfan_core::fan::{locate_cone, DegreeFanComponent, Point};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

impl Timings {
    pub fn from_duration(d: Duration) -> Self {
        Timings {
            total_ms: d.as_secs_f64() * 1e3,
        }
    }
}

/// Flat rows for `--format csv`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub verdict: Verdict,
    pub timings: Timings,
    #[serde(skip)]
    pub table: Table,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.table.header).expect("in-memory write");
        for row in &self.table.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexRow {
    pub m: Point,
    pub omega: [i64; 3],
    pub strict: bool,
}

/// Vertices with their certificates; `strict` is re-derived by locating the
/// certificate among all vertices.
pub fn vertex_rows(component: &DegreeFanComponent) -> Vec<VertexRow> {
    component
        .vertices
        .iter()
        .map(|v| {
            let loc = locate_cone(component, &v.certificate);
            VertexRow {
                m: v.m,
                omega: v.certificate.0,
                strict: loc.strict && loc.m == v.m,
            }
        })
        .collect()
}

pub fn triple(p: &[i64; 3]) -> String {
    format!("{} {} {}", p[0], p[1], p[2])
}

pub fn vertex_table(degree: u32, rows: &[VertexRow]) -> Table {
    let mut t = Table::new(&["degree", "m1", "m2", "m3", "w1", "w2", "w3", "strict"]);
    for r in rows {
        let mut row = vec![degree.to_string()];
        row.extend(r.m.iter().map(i64::to_string));
        row.extend(r.omega.iter().map(i64::to_string));
        row.push(r.strict.to_string());
        t.push(row);
    }
    t
}

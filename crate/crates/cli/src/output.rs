//! Rendering of command results as JSON, TSV or aligned text. Output is
//! deterministic: no timings, no paths, stable ordering.

use std::fmt::Write as _;

use motsteen_core::presentation::{Presentation, RingPresentation, Rule};
use motsteen_core::{Ambient, Bidegree, Status, SuiteReport};
use serde::Serialize;

use crate::config::Format;

pub const DIMS_SCHEMA: &str = "motsteen.dims/1";
pub const VERIFY_SCHEMA: &str = "motsteen.verify/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimsRow {
    pub bidegree: Bidegree,
    pub dim: usize,
    pub rank: usize,
    pub ker: usize,
    pub im: usize,
    pub homology: usize,
    /// Homology predicted from the coefficient ring alone.
    pub expected: usize,
}

#[derive(Debug, Serialize)]
pub struct DimsTable {
    pub schema: &'static str,
    pub scheme: String,
    pub prime: u32,
    pub ambient: Ambient,
    pub dmin: i64,
    pub dmax: i64,
    pub wmax: i64,
    pub rows: Vec<DimsRow>,
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub schema: &'static str,
    pub scheme: String,
    pub prime: u32,
    pub dmax: i64,
    pub wmax: i64,
    pub seed: u64,
    pub status: Status,
    pub reports: Vec<SuiteReport>,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output types serialize");
    s.push('\n');
    s
}

pub fn dims(t: &DimsTable, f: Format) -> String {
    let mut out = String::new();
    match f {
        Format::Json => return json(t),
        Format::Tsv => {
            out.push_str("d\tw\tdim\trank\tker\tim\thomology\texpected\n");
            for r in &t.rows {
                let b = r.bidegree;
                let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}", b.d, b.w, r.dim, r.rank, r.ker, r.im, r.homology, r.expected);
            }
        }
        Format::Pretty => {
            let ambient = match t.ambient {
                Ambient::Mz => "mz",
                Ambient::Dual => "dual",
            };
            let _ = writeln!(
                out,
                "# {} p={} {ambient} d in [{}, {}] |w| <= {}",
                t.scheme, t.prime, t.dmin, t.dmax, t.wmax
            );
            let _ = writeln!(out, "{:>5} {:>4} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}", "d", "w", "dim", "rank", "ker", "im", "H", "H_exp");
            for r in &t.rows {
                let b = r.bidegree;
                let _ = writeln!(
                    out,
                    "{:>5} {:>4} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}",
                    b.d, b.w, r.dim, r.rank, r.ker, r.im, r.homology, r.expected
                );
            }
        }
    }
    out
}

pub fn verify(v: &VerifyOutput, f: Format) -> String {
    let mut out = String::new();
    match f {
        Format::Json => return json(v),
        Format::Tsv => {
            out.push_str("suite\tcheck\tstatus\tcases\tdetail\tcounterexample\n");
            for r in &v.reports {
                for c in &r.checks {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        r.suite,
                        c.name,
                        c.status,
                        c.cases,
                        c.detail,
                        c.counterexample.as_deref().unwrap_or("")
                    );
                }
            }
        }
        Format::Pretty => {
            let _ = writeln!(out, "# {} p={} d <= {} |w| <= {}", v.scheme, v.prime, v.dmax, v.wmax);
            for r in &v.reports {
                let _ = writeln!(out, "{} {}", r.status(), r.suite);
                for c in &r.checks {
                    let _ = writeln!(out, "  {} {} [{} cases] {}", c.status, c.name, c.cases, c.detail);
                    if let Some(x) = &c.counterexample {
                        let _ = writeln!(out, "       counterexample: {x}");
                    }
                }
            }
            let _ = writeln!(out, "overall: {}", v.status);
        }
    }
    out
}

fn ring_rows(section: &str, r: &RingPresentation, rows: &mut Vec<[String; 3]>) {
    for g in &r.generators {
        rows.push([format!("{section}.generator"), g.name.clone(), g.bidegree.to_string()]);
    }
    let mut rules = |kind: &str, rs: &[Rule]| {
        for x in rs {
            rows.push([format!("{section}.{kind}"), x.lhs.clone(), x.rhs.clone()]);
        }
    };
    rules("relation", &r.relations);
    rules("bockstein", &r.bockstein);
    rules("conjugation", &r.conjugation);
}

/// (section, left, right) triples in document order.
fn present_rows(p: &Presentation) -> Vec<[String; 3]> {
    let mut rows = Vec::new();
    ring_rows("coefficients", &p.coefficients, &mut rows);
    for g in &p.integral.generators {
        let order = g.order.map_or("free".to_string(), |n| format!("order {n}"));
        rows.push(["integral.generator".into(), g.name.clone(), format!("{} {order} reduces to {}", g.bidegree, g.reduction)]);
    }
    for r in &p.integral.relations {
        rows.push(["integral.relation".into(), r.lhs.clone(), r.rhs.clone()]);
    }
    for r in &p.integral.products {
        rows.push(["integral.product".into(), r.lhs.clone(), r.rhs.clone()]);
    }
    if let Some(d) = &p.dual_steenrod {
        ring_rows("dual", d, &mut rows);
    }
    if let Some(m) = &p.mz {
        ring_rows("mz", m, &mut rows);
    }
    for g in &p.pullback_generators {
        let cycle = if g.cycle { "" } else { " (not a cycle)" };
        rows.push(["pullback".into(), g.name.clone(), format!("({}, {}){cycle}", g.integral, g.mod_p)]);
    }
    for r in &p.y_products {
        rows.push(["y-product".into(), r.lhs.clone(), r.rhs.clone()]);
    }
    rows
}

pub fn present(p: &Presentation, f: Format) -> String {
    let mut out = String::new();
    match f {
        Format::Json => return json(p),
        Format::Tsv => {
            out.push_str("section\tlhs\trhs\n");
            for [s, l, r] in present_rows(p) {
                let _ = writeln!(out, "{s}\t{l}\t{r}");
            }
        }
        Format::Pretty => {
            let _ = writeln!(out, "# {} p={} bound {}", p.scheme, p.prime, p.bound);
            let mut last = String::new();
            for [s, l, r] in present_rows(p) {
                if s != last {
                    let _ = writeln!(out, "[{s}]");
                    last = s;
                }
                let _ = writeln!(out, "  {l} -> {r}");
            }
        }
    }
    out
}

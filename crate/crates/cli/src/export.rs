use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;

/// One CSV file: a `# columns:` header line then numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# columns: {}\n", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn vector(v: &Value) -> Vec<f64> {
    v.as_array().map(|a| a.iter().map(num).collect()).unwrap_or_default()
}

/// Complex numbers serialize as `[re, im]`.
fn complex(v: &Value) -> (f64, f64) {
    let c = vector(v);
    (c.first().copied().unwrap_or(f64::NAN), c.get(1).copied().unwrap_or(f64::NAN))
}

fn coords(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn zero_table(name: &str, report: &Value) -> Option<Table> {
    let zeros = report.get("zeros")?.as_array()?;
    let dim = report.get("dim")?.as_u64()? as usize;
    let mut cols = coords("xi", dim);
    cols.push("residual".into());
    let mut t = Table::new(name, cols);
    for z in zeros {
        let mut row = vector(&z["point"]);
        row.push(num(&z["residual"]));
        t.rows.push(row);
    }
    Some(t)
}

fn slice_table(name: &str, result: &Value) -> Option<Table> {
    let rows = result.get("rows")?.as_array()?;
    let dim = rows.first().map_or(0, |r| vector(&r["xi"]).len());
    let mut cols = vec!["r".to_string()];
    cols.extend(coords("xi", dim));
    cols.extend(["re", "im", "abs"].map(String::from));
    let mut t = Table::new(name, cols);
    for r in rows {
        let mut row = vec![num(&r["r"])];
        row.extend(vector(&r["xi"]));
        row.extend([num(&r["re"]), num(&r["im"]), num(&r["abs"])]);
        t.rows.push(row);
    }
    Some(t)
}

fn beta_table(name: &str, result: &Value) -> Option<Table> {
    let rows = result.get("rows")?.as_array()?;
    let dim = rows.first().map_or(0, |r| vector(&r["omega"]).len());
    let polar = dim == 2;
    let mut cols = Vec::new();
    if polar {
        cols.push("angle".to_string());
    }
    cols.extend(coords("omega", dim));
    cols.extend(["beta", "beta_numeric"].map(String::from));
    let mut t = Table::new(name, cols);
    for r in rows {
        let mut row = Vec::new();
        if polar {
            row.push(num(&r["angle"]));
        }
        row.extend(vector(&r["omega"]));
        row.extend([num(&r["beta"]), num(&r["beta_numeric"])]);
        t.rows.push(row);
    }
    Some(t)
}

fn residual_tables(stem: &str, result: &Value) -> Vec<Table> {
    let mut out = Vec::new();
    if let Some(entries) = result["report"]["entries"].as_array() {
        let dim = entries.first().map_or(0, |e| vector(&e["phi"]["center"]).len());
        let mut cols = coords("center", dim);
        cols.extend(
            ["scale", "residual_re", "residual_im", "expected", "normalizer", "normalized"].map(String::from),
        );
        let mut t = Table::new(format!("{stem}_entries"), cols);
        for e in entries {
            let mut row = vector(&e["phi"]["center"]);
            row.extend(
                ["scale"].iter().map(|k| num(&e["phi"][*k])).chain(
                    ["residual_re", "residual_im", "expected", "normalizer", "normalized"]
                        .iter()
                        .map(|k| num(&e[*k])),
                ),
            );
            t.rows.push(row);
        }
        out.push(t);
    }
    if let Some(conv) = result.get("convergence").and_then(Value::as_array) {
        let finest = conv.last().map(|r| (num(&r["re"]), num(&r["im"])));
        let mut t = Table::new(
            format!("{stem}_convergence"),
            ["points", "re", "im", "diff_from_finest"].map(String::from).to_vec(),
        );
        for r in conv {
            let (re, im) = (num(&r["re"]), num(&r["im"]));
            let diff = finest.map_or(f64::NAN, |(a, b)| (re - a).hypot(im - b));
            t.rows.push(vec![num(&r["points"]), re, im, diff]);
        }
        out.push(t);
    }
    out
}

fn simulation_tables(stem: &str, result: &Value) -> Vec<Table> {
    let mut out = Vec::new();
    let Some(checks) = result["checks"].as_array() else {
        return out;
    };
    for (j, c) in checks.iter().enumerate() {
        let name = c["check"].as_str().unwrap_or("check");
        let file = format!("{stem}_{j}_{name}");
        match name {
            "reflection_coupling" => {
                let mut t = Table::new(file, ["t", "cdf", "std_error", "analytic"].map(String::from).to_vec());
                let (times, cdf, se, an) = (vector(&c["times"]), vector(&c["cdf"]), vector(&c["std_error"]), vector(&c["analytic"]));
                for k in 0..times.len() {
                    t.rows.push(vec![times[k], cdf[k], se[k], an[k]]);
                }
                out.push(t);
            }
            "char_function" | "subordinated_char" | "subordinator_laplace" => {
                let Some(rows) = c["rows"].as_array() else { continue };
                let mut t = Table::new(
                    file,
                    ["row", "estimate_re", "estimate_im", "std_error", "reference_re", "reference_im", "deviation_sigma"]
                        .map(String::from)
                        .to_vec(),
                );
                for (k, r) in rows.iter().enumerate() {
                    let cmp = if name == "subordinator_laplace" { &r["comparison"] } else { r };
                    let (er, ei) = complex(&cmp["estimate"]["value"]);
                    let (rr, ri) = complex(&cmp["reference"]);
                    t.rows.push(vec![k as f64, er, ei, num(&cmp["estimate"]["std_error"]), rr, ri, num(&cmp["deviation_sigma"])]);
                }
                out.push(t);
            }
            "space_time" => {
                let Some(entries) = c["entries"].as_array() else { continue };
                let dim = entries.first().map_or(0, |e| vector(&e["x"]).len());
                let mut cols = vec!["s".to_string()];
                cols.extend(coords("x", dim));
                cols.extend(["t", "target", "estimate", "std_error", "deviation_sigma"].map(String::from));
                let mut t = Table::new(file, cols);
                for e in entries {
                    let mut row = vec![num(&e["s"])];
                    row.extend(vector(&e["x"]));
                    row.extend(["t", "target", "estimate", "std_error", "deviation_sigma"].iter().map(|k| num(&e[*k])));
                    t.rows.push(row);
                }
                out.push(t);
            }
            _ => {}
        }
    }
    out
}

/// Tables for one analysis outcome, named after its index and kind.
pub fn tables_for(outcome: &Value) -> Vec<Table> {
    let index = outcome["index"].as_u64().unwrap_or(0);
    let kind = outcome["analysis"].as_str().unwrap_or("analysis");
    let stem = format!("{index:02}_{kind}");
    let Some(result) = outcome.get("result") else {
        return Vec::new();
    };
    match kind {
        "zero_set" => zero_table(&format!("{stem}_zeros"), result).into_iter().collect(),
        "liouville" | "polynomial" | "strong" | "coupling" => {
            zero_table(&format!("{stem}_zeros"), &result["verdict"]["zero_report"]).into_iter().collect()
        }
        "periodicity" => zero_table(&format!("{stem}_zeros"), &result["zero_report"]).into_iter().collect(),
        "slice" => slice_table(&format!("{stem}_slice"), result).into_iter().collect(),
        "beta_table" => beta_table(&format!("{stem}_beta"), result).into_iter().collect(),
        "residual" => residual_tables(&stem, result),
        "simulation" => simulation_tables(&stem, result),
        _ => Vec::new(),
    }
}

/// `all`, an analysis kind (every analysis of that kind) or an index.
pub fn select<'a>(report: &'a Value, selector: &str) -> Result<Vec<&'a Value>, CliError> {
    let analyses: Vec<&Value> = report["analyses"].as_array().map(|a| a.iter().collect()).unwrap_or_default();
    if selector == "all" {
        return Ok(analyses);
    }
    let chosen: Vec<&Value> = match selector.parse::<u64>() {
        Ok(i) => analyses.iter().copied().filter(|a| a["index"].as_u64() == Some(i)).collect(),
        Err(_) => analyses.iter().copied().filter(|a| a["analysis"].as_str() == Some(selector)).collect(),
    };
    if chosen.is_empty() {
        let mut available: Vec<String> = analyses
            .iter()
            .map(|a| format!("{} ({})", a["index"], a["analysis"].as_str().unwrap_or("?")))
            .collect();
        available.push("all".into());
        return Err(CliError::UnknownSelector {
            selector: selector.into(),
            available: available.join(", "),
        });
    }
    Ok(chosen)
}

pub fn export(report: &Value, selector: &str, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let tables: Vec<Table> = select(report, selector)?.into_iter().flat_map(tables_for).collect();
    if !tables.is_empty() {
        std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    }
    let mut written = Vec::with_capacity(tables.len());
    for t in tables {
        let path = out_dir.join(format!("{}.csv", t.name));
        std::fs::write(&path, t.to_csv()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn header_comment_and_rows() {
        let mut t = Table::new("x", vec!["a".into(), "b".into()]);
        t.rows.push(vec![1.0, -0.5]);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# columns: a,b"));
        let cells: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells, vec![1.0, -0.5]);
    }

    #[test]
    fn unknown_selector_lists_choices() {
        let report = json!({ "analyses": [{ "index": 0, "analysis": "zero_set" }] });
        let err = select(&report, "coupling").unwrap_err();
        assert!(err.to_string().contains("0 (zero_set)"));
        assert_eq!(select(&report, "0").unwrap().len(), 1);
    }
}

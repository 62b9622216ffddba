//! Rendering of reports as JSON, CSV, or a tab-separated table.
//!
//! JSON keeps full float precision; the table rounds to 4 decimals.

use amreval::report::{CompareReport, CorrelationReport, LengthSeries, MetaEvalReport, Paired, ScoreReport};
use serde::Serialize;

use crate::args::Format;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn table_text(header: &[&str], rows: &[Vec<String>], notes: &[String]) -> String {
    let mut out = String::new();
    for n in notes {
        out.push_str("# ");
        out.push_str(n);
        out.push('\n');
    }
    out.push_str(&header.join("\t"));
    out.push('\n');
    for r in rows {
        out.push_str(&r.join("\t"));
        out.push('\n');
    }
    out
}

/// Full precision for CSV, 4 decimals for the table, empty when absent.
fn num(v: Option<f64>, format: Format) -> String {
    match (v, format) {
        (None, _) => String::new(),
        (Some(x), Format::TsvTable) => format!("{x:.4}"),
        (Some(x), _) => x.to_string(),
    }
}

fn paired(p: Option<Paired>, format: Format) -> [String; 3] {
    [
        num(p.map(|p| p.a), format),
        num(p.map(|p| p.b), format),
        num(p.map(|p| p.delta), format),
    ]
}

fn render(format: Format, header: &[&str], rows: &[Vec<String>], notes: &[String]) -> String {
    match format {
        Format::TsvTable => table_text(header, rows, notes),
        _ => csv_text(header, rows),
    }
}

pub fn score(r: &ScoreReport, format: Format) -> String {
    if format == Format::Json {
        return json(r);
    }
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|row| {
            vec![
                row.metric.to_string(),
                num(row.macro_score, format),
                num(row.micro_score, format),
            ]
        })
        .collect();
    let notes = vec![format!("parser {} over {} items", r.parser, r.items), r.note.to_string()];
    render(format, &["metric", "macro", "micro"], &rows, &notes)
}

pub fn compare(r: &CompareReport, format: Format) -> String {
    if format == Format::Json {
        return json(r);
    }
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|row| {
            let mut v = vec![row.metric.to_string()];
            v.extend(paired(Some(row.preference), format));
            v.push(row.test.wins.to_string());
            v.push(row.test.trials.to_string());
            v.push(num(row.test.p_value, format));
            v.push(row.significant.to_string());
            v.extend(paired(row.macro_score, format));
            v.extend(paired(row.micro_score, format));
            v
        })
        .collect();
    let notes = vec![
        format!(
            "A = {}, B = {}, {} items; delta = A - B; ties {:?}",
            r.parser_a, r.parser_b, r.items, r.rows.first().map(|x| x.test.ties).unwrap_or_default()
        ),
        r.note.to_string(),
    ];
    render(
        format,
        &[
            "metric", "pref_a", "pref_b", "pref_delta", "wins", "trials", "p_value", "significant",
            "macro_a", "macro_b", "macro_delta", "micro_a", "micro_b", "micro_delta",
        ],
        &rows,
        &notes,
    )
}

pub fn meta_eval(r: &MetaEvalReport, format: Format) -> String {
    if format == Format::Json {
        return json(r);
    }
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|row| {
            let mut v = vec![row.name.clone()];
            for e in [&row.pairwise_accuracy, &row.acceptability_delta] {
                v.push(num(Some(e.value), format));
                v.push(num(e.ci.map(|c| c.0), format));
                v.push(num(e.ci.map(|c| c.1), format));
                v.push(if format == Format::TsvTable {
                    if e.beats_random { "†".into() } else { String::new() }
                } else {
                    e.beats_random.to_string()
                });
            }
            v
        })
        .collect();
    let notes = vec![format!(
        "A = {}, B = {}; {} signed preferences, {} acceptable / {} unacceptable parses; {} bootstrap resamples; † = random baseline outside the 95% interval",
        r.parser_a, r.parser_b, r.signed_items, r.acceptable, r.unacceptable, r.bootstrap_resamples
    )];
    render(
        format,
        &["name", "pa", "pa_lo", "pa_hi", "pa_beats_random", "acc_delta", "acc_lo", "acc_hi", "acc_beats_random"],
        &rows,
        &notes,
    )
}

pub fn correlation(r: &CorrelationReport, format: Format) -> String {
    if format == Format::Json {
        return json(r);
    }
    let names: Vec<String> = r.metrics.iter().map(|m| m.to_string()).collect();
    let mut header: Vec<&str> = vec!["metric"];
    header.extend(names.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = r
        .matrix
        .iter()
        .zip(&names)
        .map(|(row, name)| {
            let mut v = vec![name.clone()];
            v.extend(row.iter().map(|c| num(*c, format)));
            v
        })
        .collect();
    render(format, &header, &rows, &[format!("Spearman rho over {} scored pairs", r.samples)])
}

/// Buckets as CSV; with `named`, a leading series column.
pub fn length_csv(series: &[LengthSeries], named: bool) -> String {
    let mut rows = Vec::new();
    for s in series {
        for b in &s.buckets {
            let mut v = Vec::new();
            if named {
                v.push(s.name.clone());
            }
            v.extend([b.bucket.to_string(), b.mean.to_string(), b.count.to_string()]);
            rows.push(v);
        }
    }
    let header: &[&str] = if named {
        &["series", "bucket", "mean", "count"]
    } else {
        &["bucket", "mean", "count"]
    };
    csv_text(header, &rows)
}

pub fn length_bins(series: &[LengthSeries], format: Format) -> String {
    match format {
        Format::Json => json(&series),
        Format::Csv => length_csv(series, true),
        Format::TsvTable => {
            let rows: Vec<Vec<String>> = series
                .iter()
                .flat_map(|s| {
                    s.buckets.iter().map(move |b| {
                        vec![s.name.clone(), b.bucket.to_string(), format!("{:.4}", b.mean), b.count.to_string()]
                    })
                })
                .collect();
            table_text(&["series", "bucket", "mean", "count"], &rows, &[])
        }
    }
}

//! Serialization of experiment records to CSV, JSON and SVG.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::record::{ExperimentId, ExperimentRecord};
use crate::svg::{heat_maps, line_plot, Axis, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::Usage(format!("unknown format '{other}'"))),
        }
    }
}

fn check_nonempty(records: &[ExperimentRecord]) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::Usage("no records to emit".into()));
    }
    Ok(())
}

/// Header row plus one LF-terminated line per record.
pub fn to_csv(records: &[ExperimentRecord]) -> Result<String, CliError> {
    check_nonempty(records)?;
    let header: Vec<&str> = records[0].columns().map(|(n, _)| *n).collect();
    let mut out = header.join(",");
    out.push('\n');
    for r in records {
        let row: Vec<String> = r.columns().map(|(_, c)| c.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    Ok(out)
}

fn metadata(records: &[ExperimentRecord]) -> Value {
    let first = &records[0];
    let mut meta = Map::new();
    if let Some(seed) = first.seed {
        meta.insert("seed".into(), json!(seed));
    }
    if let Some(trials) = first.trials {
        meta.insert("trials".into(), json!(trials));
    }
    match first.experiment {
        ExperimentId::Exp2 => {
            meta.insert(
                "sampling".into(),
                json!("i.i.d. standard normal strict upper triangle of X, Y in Skew(2p); trial t uses seed + t"),
            );
            meta.insert(
                "shared_draw".into(),
                json!("one draw per trial feeds the SO, Stiefel (both metrics) and Grassmann sections"),
            );
            meta.insert(
                "rng".into(),
                json!("ChaCha8 seeded from u64, ziggurat normal sampler"),
            );
        }
        ExperimentId::Conjecture => {
            meta.insert(
                "note".into(),
                json!("empirical sampling only; does not settle the upper bound"),
            );
        }
        _ => {}
    }
    Value::Object(meta)
}

pub fn to_json(records: &[ExperimentRecord]) -> Result<String, CliError> {
    check_nonempty(records)?;
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (name, cell) in r.columns() {
                m.insert(
                    (*name).to_string(),
                    serde_json::to_value(cell).expect("plain cell"),
                );
            }
            Value::Object(m)
        })
        .collect();
    let doc = json!({
        "experiment": records[0].experiment,
        "metadata": metadata(records),
        "records": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn series<'a>(records: &[ExperimentRecord], x: &str, ys: &[&'a str]) -> Vec<Series<'a>> {
    ys.iter()
        .map(|&label| Series {
            label,
            points: records
                .iter()
                .filter_map(|r| Some((r.get(x)?, r.get(label)?)))
                .collect(),
        })
        .collect()
}

const FOUR: [&str; 4] = ["k_so", "k_st_canonical", "k_st_euclidean", "k_grassmann"];
const TWO: [&str; 2] = ["k_st_canonical", "k_st_euclidean"];

pub fn to_svg(records: &[ExperimentRecord]) -> Result<String, CliError> {
    check_nonempty(records)?;
    let k = Axis {
        label: "sectional curvature",
        log: false,
    };
    match records[0].experiment {
        ExperimentId::Exp1 => Ok(line_plot(
            "Fill sweep on SO(n), St(n,p), Gr(n,p)",
            Axis {
                label: "step",
                log: false,
            },
            k,
            &series(records, "step", &FOUR),
        )),
        ExperimentId::Exp2 => {
            let s = series(records, "p", &FOUR);
            let positive = s.iter().all(|s| s.points.iter().all(|p| p.1 > 0.0));
            Ok(line_plot(
                "Average curvature of random sections",
                Axis {
                    label: "p",
                    log: true,
                },
                Axis {
                    label: "average curvature",
                    log: positive,
                },
                &s,
            ))
        }
        ExperimentId::Exp3Mix => Ok(line_plot(
            "Weight shifted from B blocks to A blocks, St(8,4)",
            Axis {
                label: "u",
                log: false,
            },
            k,
            &series(records, "u", &TWO),
        )),
        ExperimentId::Exp3Surface => {
            let n = (records.len() as f64).sqrt().round() as usize;
            if n * n != records.len() {
                return Err(CliError::Usage(
                    "surface records do not form a square grid".into(),
                ));
            }
            let panels: Vec<(&str, Vec<f64>)> = TWO
                .iter()
                .map(|&c| {
                    (
                        c,
                        records
                            .iter()
                            .map(|r| r.get(c).unwrap_or(f64::NAN))
                            .collect(),
                    )
                })
                .collect();
            Ok(heat_maps(
                "Curvature on St(8,4) over (u,v)",
                "u",
                "v",
                n,
                &panels,
            ))
        }
        ExperimentId::Conjecture => Err(CliError::Usage(
            "the conjecture probe has no plot; use csv or json".into(),
        )),
    }
}

pub fn render(records: &[ExperimentRecord], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => to_csv(records),
        Format::Json => to_json(records),
        Format::Svg => to_svg(records),
    }
}

/// Renders `records` and writes them to `path` (stdout when `None`).
pub fn emit(
    records: &[ExperimentRecord],
    format: Format,
    path: Option<&Path>,
) -> Result<(), CliError> {
    let text = render(records, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            source: e,
        }),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
                path: "<stdout>".into(),
                source: e,
            }),
            _ => Ok(()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_exp1, run_exp3_surface};

    #[test]
    fn exp1_csv_header() {
        let recs = run_exp1(4, 2, 2, false).unwrap();
        let csv = to_csv(&recs).unwrap();
        assert!(csv
            .starts_with("step,u_index,u_value,k_so,k_st_canonical,k_st_euclidean,k_grassmann\n"));
        assert_eq!(csv.lines().count(), recs.len() + 1);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn empty_records_are_rejected() {
        for f in [Format::Csv, Format::Json, Format::Svg] {
            assert!(matches!(render(&[], f), Err(CliError::Usage(_))));
        }
    }

    #[test]
    fn output_is_deterministic() {
        let recs = run_exp3_surface(4).unwrap();
        for f in [Format::Csv, Format::Json, Format::Svg] {
            assert_eq!(render(&recs, f).unwrap(), render(&recs, f).unwrap());
        }
    }

    #[test]
    fn csv_round_trips_floats() {
        let recs = run_exp1(4, 2, 3, false).unwrap();
        let csv = to_csv(&recs).unwrap();
        let line = csv.lines().nth(2).unwrap();
        let parsed: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(parsed[4], recs[1].get("k_st_canonical").unwrap());
    }

    #[test]
    fn unknown_format_is_usage_error() {
        assert!(matches!("xml".parse::<Format>(), Err(CliError::Usage(_))));
    }
}

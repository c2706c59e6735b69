//! Plain-text tangent-pair files.
//!
//! A file is a sequence of sections. Each section starts with a header line
//! `# NAME ROWS COLS` followed by `ROWS` lines of `COLS` whitespace-separated
//! numbers. Blank lines are ignored. Recognized names:
//!
//! - `so`: `X`, `Y`
//! - `stiefel`: `A1`, `B1`, `A2`, `B2` (`A1`/`A2` default to zero)
//! - `grassmann`: `B1`, `B2`

use std::collections::BTreeMap;

use matcurv::{GrassmannTangent, Manifold, Matrix, SkewTangent, StiefelTangent, Tangent};

use crate::error::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses all sections of `text` into named matrices.
pub fn parse_sections(text: &str) -> Result<BTreeMap<String, Matrix>, CliError> {
    let mut out = BTreeMap::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();
    while let Some((ln, line)) = lines.next() {
        let header = line
            .strip_prefix('#')
            .ok_or_else(|| usage(format!("line {ln}: expected '# NAME ROWS COLS'")))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [name, rows, cols] = fields[..] else {
            return Err(usage(format!("line {ln}: expected '# NAME ROWS COLS'")));
        };
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| usage(format!("line {ln}: bad dimension '{s}'")))
        };
        let (rows, cols) = (parse_dim(rows)?, parse_dim(cols)?);
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (rl, row) = lines
                .next()
                .ok_or_else(|| usage(format!("section {name}: expected {rows} rows, got {r}")))?;
            if row.starts_with('#') {
                return Err(usage(format!(
                    "section {name}: expected {rows} rows, got {r}"
                )));
            }
            let vals: Vec<f64> = row
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| usage(format!("line {rl}: bad number '{t}'")))
                })
                .collect::<Result<_, _>>()?;
            if vals.len() != cols {
                return Err(usage(format!(
                    "line {rl}: expected {cols} entries, got {}",
                    vals.len()
                )));
            }
            data.extend(vals);
        }
        let m = Matrix::from_row_major(rows, cols, data)?;
        if out.insert(name.to_string(), m).is_some() {
            return Err(usage(format!("section {name} appears twice")));
        }
    }
    Ok(out)
}

fn take(sections: &mut BTreeMap<String, Matrix>, name: &str) -> Result<Matrix, CliError> {
    sections
        .remove(name)
        .ok_or_else(|| usage(format!("missing section {name}")))
}

/// Builds the tangent pair for `manifold` from parsed sections.
pub fn tangent_pair(
    manifold: Manifold,
    mut sections: BTreeMap<String, Matrix>,
) -> Result<(Tangent<f64>, Tangent<f64>), CliError> {
    let pair: (Tangent<f64>, Tangent<f64>) = match manifold {
        Manifold::So => (
            SkewTangent::new(take(&mut sections, "X")?)?.into(),
            SkewTangent::new(take(&mut sections, "Y")?)?.into(),
        ),
        Manifold::Stiefel => {
            let b1 = take(&mut sections, "B1")?;
            let b2 = take(&mut sections, "B2")?;
            let p = b1.cols();
            let a1 = sections.remove("A1").unwrap_or_else(|| Matrix::zeros(p, p));
            let a2 = sections.remove("A2").unwrap_or_else(|| Matrix::zeros(p, p));
            (
                StiefelTangent::new(a1, b1)?.into(),
                StiefelTangent::new(a2, b2)?.into(),
            )
        }
        Manifold::Grassmann => (
            GrassmannTangent::new(take(&mut sections, "B1")?).into(),
            GrassmannTangent::new(take(&mut sections, "B2")?).into(),
        ),
    };
    if let Some(extra) = sections.keys().next() {
        return Err(usage(format!(
            "unexpected section {extra} for {}",
            manifold.name()
        )));
    }
    Ok(pair)
}

/// Reads and parses a tangent-pair file.
pub fn read_pair(
    manifold: Manifold,
    path: &std::path::Path,
) -> Result<(Tangent<f64>, Tangent<f64>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    tangent_pair(manifold, parse_sections(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const STIEFEL: &str = "# B1 2 1\n1\n0\n\n# B2 2 1\n0\n1\n";

    #[test]
    fn parses_stiefel_with_default_a() {
        let (x, y) = tangent_pair(Manifold::Stiefel, parse_sections(STIEFEL).unwrap()).unwrap();
        assert_eq!(x.dims(), (3, 1));
        assert_eq!(y.dims(), (3, 1));
    }

    #[test]
    fn rejects_malformed_files() {
        for bad in [
            "1 2\n",
            "# B1 2\n1\n",
            "# B1 2 1\n1\n",
            "# B1 1 2\n1\n",
            "# B1 1 1\nx\n",
            "# B1 1 1\n1\n# B1 1 1\n1\n",
        ] {
            assert!(
                matches!(parse_sections(bad), Err(CliError::Usage(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn missing_and_extra_sections() {
        let s = parse_sections("# X 3 3\n0 1 0\n-1 0 0\n0 0 0\n").unwrap();
        assert!(matches!(
            tangent_pair(Manifold::So, s),
            Err(CliError::Usage(_))
        ));
        let s = parse_sections(&format!("{STIEFEL}# Z 1 1\n0\n")).unwrap();
        assert!(matches!(
            tangent_pair(Manifold::Stiefel, s),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn non_skew_so_input_is_structure_error() {
        let s = parse_sections("# X 2 2\n1 0\n0 0\n# Y 2 2\n0 1\n-1 0\n").unwrap();
        assert!(matches!(
            tangent_pair(Manifold::So, s),
            Err(CliError::Curv(matcurv::CurvError::Structure(_)))
        ));
    }
}

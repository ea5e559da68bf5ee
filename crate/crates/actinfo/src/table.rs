//! Rejection-region tables over a grid of significance levels.

use crate::dist::{
    critical_one_sided, critical_two_sided, CriticalMode, ReferenceModel, Sidedness,
};
use crate::error::{Error, Result};
use crate::prior::Prior;
use crate::units::InfoUnit;

/// Output format for [`generate_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    /// Header `alpha,<unit1>,<unit2>,...`, one row per level.
    Csv,
    /// Pipe table with the same columns.
    Markdown,
}

/// What to tabulate: one row per α, one column per unit.
#[derive(Debug, Clone)]
pub struct TableSpec {
    pub alphas: Vec<f64>,
    pub sidedness: Sidedness,
    pub reference: ReferenceModel,
    pub prior: Prior,
    pub mode: CriticalMode,
    pub units: Vec<InfoUnit>,
    pub format: TableFormat,
    /// Decimal places (ties round half-even); `None` prints full precision.
    pub precision: Option<usize>,
}

impl TableSpec {
    /// A table spec with the default 4-decimal rendering.
    pub fn new(
        alphas: Vec<f64>,
        sidedness: Sidedness,
        reference: ReferenceModel,
        prior: Prior,
        mode: CriticalMode,
        units: Vec<InfoUnit>,
        format: TableFormat,
    ) -> Self {
        TableSpec {
            alphas,
            sidedness,
            reference,
            prior,
            mode,
            units,
            format,
            precision: Some(4),
        }
    }
}

fn render(value: f64, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{value:.p$}"),
        None => format!("{value}"),
    }
}

/// Renders the table described by `spec`.
///
/// Levels must lie strictly inside (0, 1); an offending row is named in
/// the error (the two-sided exact critical value diverges as α → 0, so an
/// α = 0 row cannot be generated).
pub fn generate_table(spec: &TableSpec) -> Result<String> {
    if spec.alphas.is_empty() {
        return Err(Error::invalid("table", "no significance levels given"));
    }
    if spec.units.is_empty() {
        return Err(Error::invalid("table", "no units given"));
    }
    for (i, &alpha) in spec.alphas.iter().enumerate() {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(
                "table",
                format!("row {} has alpha = {alpha}, which is outside (0, 1)", i + 1),
            ));
        }
    }

    let mut rows = Vec::with_capacity(spec.alphas.len());
    for &alpha in &spec.alphas {
        let mut cells = vec![format!("{alpha}")];
        for &unit in &spec.units {
            let value = match spec.sidedness {
                Sidedness::OneSidedUpper => {
                    critical_one_sided(alpha, &spec.reference, &spec.prior, unit)?
                }
                Sidedness::TwoSided => {
                    critical_two_sided(alpha, &spec.reference, &spec.prior, spec.mode)?
                        .convert(unit)
                }
            };
            cells.push(render(value.value, spec.precision));
        }
        rows.push(cells);
    }

    let header: Vec<String> = std::iter::once("alpha".to_string())
        .chain(spec.units.iter().map(|u| u.to_string()))
        .collect();

    let mut out = String::new();
    match spec.format {
        TableFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            out.push_str("| ");
            out.push_str(&header.join(" | "));
            out.push_str(" |\n|");
            for _ in 0..header.len() {
                out.push_str(" --- |");
            }
            out.push('\n');
            for row in rows {
                out.push_str("| ");
                out.push_str(&row.join(" | "));
                out.push_str(" |\n");
            }
        }
    }
    Ok(out)
}

/// The α grid of the standard one-sided table. Its α = 0 row is the limit
/// of the formula: exactly 1 bit = ln 2 nats.
pub const ONE_SIDED_TABLE_ALPHAS: [f64; 8] = [0.5, 0.49, 0.45, 0.4, 0.1, 0.05, 0.01, 0.001];

/// The α grid of the standard two-sided table.
///
/// The α = 0 row sometimes quoted alongside it (1 nat / 1.4426 bits) is
/// excluded as anomalous: the exact critical value diverges as α → 0 (the
/// two-sided tail is positive at every finite threshold), and the
/// single-branch table formula tends to asinh(1) ≈ 0.8814 nats, so no
/// finite row is consistent with either computation. An α = 0 request is
/// rejected with a validation error naming the row.
pub const TWO_SIDED_TABLE_ALPHAS: [f64; 9] = [0.5, 0.49, 0.45, 0.4, 0.25, 0.1, 0.05, 0.01, 0.001];

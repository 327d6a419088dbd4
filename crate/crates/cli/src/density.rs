//! Turning `--family`, `--param`, and `--tab-file` flags into a density.

use std::path::Path;

use bdc_core::circular::CircularDensity;

use crate::errors::CliError;

pub const PARAMETRIC_FAMILIES: [&str; 3] = ["wrapped-normal", "von-mises", "wrapped-cauchy"];

pub fn build_density(
    family: &str,
    params: &[f64],
    tab_file: Option<&Path>,
) -> Result<CircularDensity, CliError> {
    match family {
        "uniform" => {
            if !params.is_empty() || tab_file.is_some() {
                return Err(CliError::config(
                    "the uniform family takes no --param and no --tab-file",
                ));
            }
            Ok(CircularDensity::Uniform)
        }
        "tabulated" => {
            if !params.is_empty() {
                return Err(CliError::config("the tabulated family takes no --param"));
            }
            let path = tab_file.ok_or_else(|| {
                CliError::config("the tabulated family needs --tab-file <CSV>")
            })?;
            load_tabulated(path)
        }
        "wrapped-normal" | "von-mises" | "wrapped-cauchy" => {
            if tab_file.is_some() {
                return Err(CliError::config(
                    "--tab-file only applies to the tabulated family",
                ));
            }
            if params.is_empty() || params.len() > 3 {
                return Err(CliError::config(format!(
                    "family {family} takes 1 to 3 --param values, got {}",
                    params.len()
                )));
            }
            let factors = params
                .iter()
                .map(|&p| single_mode(family, p))
                .collect::<Result<Vec<_>, _>>()?;
            if factors.len() == 1 {
                Ok(factors.into_iter().next().unwrap())
            } else {
                Ok(CircularDensity::product(factors)?)
            }
        }
        "product" => Err(CliError::config(
            "build a product channel by repeating --param on a parametric family",
        )),
        other => Err(CliError::config(format!(
            "unknown family {other}; expected wrapped-normal, von-mises, wrapped-cauchy, uniform, or tabulated"
        ))),
    }
}

fn single_mode(family: &str, param: f64) -> Result<CircularDensity, CliError> {
    Ok(match family {
        "wrapped-normal" => CircularDensity::wrapped_normal(param)?,
        "von-mises" => CircularDensity::von_mises(param)?,
        _ => CircularDensity::wrapped_cauchy(param)?,
    })
}

/// Read a `phi,value` CSV tabulating a density on a uniform grid.
fn load_tabulated(path: &Path) -> Result<CircularDensity, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::config(format!("bad header in {}: {e}", path.display())))?;
    if headers.len() != 2 || &headers[0] != "phi" || &headers[1] != "value" {
        return Err(CliError::config(format!(
            "{} must start with a `phi,value` header",
            path.display()
        )));
    }
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| CliError::config(format!("row {}: {e}", index + 2)))?;
        let parse = |field: &str| {
            field.trim().parse::<f64>().map_err(|_| {
                CliError::config(format!("row {}: `{field}` is not a number", index + 2))
            })
        };
        grid.push(parse(&record[0])?);
        values.push(parse(&record[1])?);
    }
    Ok(CircularDensity::tabulated(grid, values)?)
}

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use orfkit_core::grid::uniform_angles;
use orfkit_core::RatFun;
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::CliError;

/// Boundary samples per table.
pub const TABLE_POINTS: usize = 256;

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    text.push('\n');
    write_atomic(dir, name, text.as_bytes())
}

/// `theta` followed by the real and imaginary parts of each function on a
/// uniform boundary grid, in 17 significant digits.
pub fn boundary_table(names: &[String], fs: &[&RatFun]) -> Result<String, CliError> {
    let mut out = String::from("theta");
    for name in names {
        out.push_str(&format!(",re_{name},im_{name}"));
    }
    out.push('\n');
    for theta in uniform_angles(TABLE_POINTS) {
        let z = Complex64::from_polar(1.0, theta);
        out.push_str(&format!("{theta:.16e}"));
        for f in fs {
            let v = f.eval(z)?;
            out.push_str(&format!(",{:.16e},{:.16e}", v.re, v.im));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn weight_table(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("theta,w\n");
    for (t, w) in rows {
        out.push_str(&format!("{t:.16e},{w:.16e}\n"));
    }
    out
}

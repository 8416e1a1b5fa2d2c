//! CSV emission: comma separated, `.` decimal point, `{:.9e}` numbers, LF
//! line endings, header always present.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub fn format_value(v: f64) -> String {
    format!("{v:.9e}")
}

pub fn write_csv_to<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<f64>]) -> std::io::Result<()> {
    out.write_all(header.join(",").as_bytes())?;
    out.write_all(b"\n")?;
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_value(*v));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

pub fn write_csv(rows: &[Vec<f64>], header: &[&str], path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err)?;
        }
    }
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    write_csv_to(&mut out, header, rows).map_err(io_err)
}

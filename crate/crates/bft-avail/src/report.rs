//! Result formatting and artifact plumbing: significant-digit rendering, run
//! manifests, CSV parsing for the plot pipeline, plot-script generation, and
//! atomic file writes.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Render with 12 significant digits, the precision used by every CSV and
/// printed availability value.
pub fn format_sig(x: f64) -> String {
    format!("{x:.11e}")
}

/// Flat key=value record of one CLI run, written beside each output file so
/// a result can be traced back to the exact command that produced it.
#[derive(Debug, Clone)]
pub struct RunManifest {
    command: String,
    duration_seconds: f64,
    params: Vec<(String, String)>,
    outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            duration_seconds: 0.0,
            params: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn output(mut self, path: &Path) -> Self {
        self.outputs.push(path.to_path_buf());
        self
    }

    pub fn duration(mut self, seconds: f64) -> Self {
        self.duration_seconds = seconds;
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command={}\n", self.command));
        out.push_str(&format!("version={}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("duration_seconds={:.3}\n", self.duration_seconds));
        for (k, v) in &self.params {
            out.push_str(&format!("param.{k}={v}\n"));
        }
        for (i, p) in self.outputs.iter().enumerate() {
            out.push_str(&format!("output.{i}={}\n", p.display()));
        }
        out
    }

    /// Write to `<primary>.manifest` next to the primary output file.
    pub fn write_beside(&self, primary: &Path) -> Result<PathBuf> {
        let mut name = primary.as_os_str().to_os_string();
        name.push(".manifest");
        let path = PathBuf::from(name);
        write_atomic(&path, &self.render())?;
        Ok(path)
    }
}

/// Parse a sweep CSV back into its header and numeric rows.
///
/// Expects at least two columns (the x column plus one series) and at least
/// one data row; every row must match the header width.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = match lines.next() {
        Some(h) => h.split(',').map(str::to_string).collect(),
        None => return Err(Error::Parse("empty CSV".into())),
    };
    if header.len() < 2 {
        return Err(Error::Parse("CSV needs an x column and at least one series".into()));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| {
                cell.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!("row {}: not a number: {cell:?}", i + 2))
                })
            })
            .collect::<Result<_>>()?;
        if row.len() != header.len() {
            return Err(Error::Parse(format!(
                "row {}: {} cells for {} columns",
                i + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("CSV has a header but no data rows".into()));
    }
    Ok((header, rows))
}

/// Emit a self-contained gnuplot script: the data rides along in an inline
/// block, one linespoints series per CSV column, y fixed to `[0, y_max]`.
pub fn plot_script(header: &[String], rows: &[Vec<f64>], title: &str, y_max: f64) -> String {
    let mut s = String::new();
    s.push_str(&format!("set title \"{}\"\n", escape(title)));
    s.push_str(&format!("set xlabel \"{}\"\n", escape(&header[0])));
    s.push_str("set ylabel \"A\"\n");
    s.push_str(&format!("set yrange [0:{y_max}]\n"));
    s.push_str("set key outside right\nset grid\n");
    s.push_str("$data << EOD\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format_sig(*v)).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s.push_str("EOD\n");
    let series: Vec<String> = header
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, name)| {
            format!("$data using 1:{} with linespoints title \"{}\"", i + 1, escape(name))
        })
        .collect();
    s.push_str(&format!("plot {}\n", series.join(", \\\n     ")));
    s
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Write via a sibling temp file and rename, so readers never observe a
/// partial file and an aborted run leaves nothing behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_os_string();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let write = || -> Result<()> {
        fs::write(&tmp, contents)?;
        fs::rename(&tmp, path)?;
        Ok(())
    };
    write().inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

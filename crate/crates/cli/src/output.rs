//! CSV, SVG and metadata writers. A run with several series writes one file
//! per series, named `<stem>_<label>.csv`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::args::Format;
use crate::run::{Output, Series};
use crate::Failure;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |source| Failure::Io { path: path.display().to_string(), source }
}

pub fn write_csv<W: Write>(series: &Series, sink: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(&series.header)?;
    for row in &series.rows {
        w.write_record(row.iter().map(|c| c.render()))?;
    }
    w.flush()?;
    Ok(())
}

fn sibling(out: &Path, label: &str, ext: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = if label.is_empty() { format!("{stem}.{ext}") } else { format!("{stem}_{label}.{ext}") };
    out.with_file_name(name)
}

/// Where a series goes: `--out` itself for a single series, otherwise a
/// labelled sibling with the same extension.
fn series_path(out: &Path, series: &Series, single: bool) -> PathBuf {
    if single {
        return out.to_path_buf();
    }
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    sibling(out, &series.meta.label, &ext)
}

pub fn emit(output: &mut Output, out: Option<&Path>, format: Format) -> Result<(), Failure> {
    let single = output.series.len() == 1;
    let Some(out) = out else {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        for s in &output.series {
            let written = if single { Ok(()) } else { writeln!(lock, "# {}", s.meta.label).map_err(csv::Error::from) };
            match written.and_then(|()| write_csv(s, &mut lock)) {
                // The reader went away (`eop ... | head`); nothing left to do.
                Err(e) if matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe) => {
                    return Ok(());
                }
                r => r?,
            }
        }
        return Ok(());
    };

    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    for (s, meta) in output.series.iter().zip(output.meta.series.iter_mut()) {
        let path = series_path(out, s, single);
        let file = fs::File::create(&path).map_err(io_err(&path))?;
        write_csv(s, io::BufWriter::new(file))?;
        meta.file = path.file_name().map(|f| f.to_string_lossy().into_owned());
        if format == Format::Svg {
            let svg_path = path.with_extension("svg");
            fs::write(&svg_path, svg(s)).map_err(io_err(&svg_path))?;
        }
    }
    let meta_path = out.with_extension("meta.json");
    let json = serde_json::to_string_pretty(&output.meta).expect("metadata is plain data");
    fs::write(&meta_path, json + "\n").map_err(io_err(&meta_path))?;
    Ok(())
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 4] = ["#c0392b", "#2c3e9b", "#27893d", "#7f7f7f"];

/// First column against every other column as polylines. Non-finite points
/// break the line.
pub fn svg(series: &Series) -> String {
    let xs: Vec<f64> = series.rows.iter().map(|r| r[0].value()).collect();
    let ys: Vec<Vec<f64>> =
        (1..series.header.len()).map(|c| series.rows.iter().map(|r| r[c].value()).collect()).collect();
    let span = |v: &mut dyn Iterator<Item = f64>| {
        v.filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
    };
    let (x0, x1) = span(&mut xs.iter().copied());
    let (y0, y1) = span(&mut ys.iter().flatten().copied());
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0).max(f64::MIN_POSITIVE) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}">"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for (i, col) in ys.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut pts = Vec::new();
        let mut flush = |pts: &mut Vec<String>| {
            if pts.len() > 1 {
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            pts.clear();
        };
        for (&x, &y) in xs.iter().zip(col) {
            if x.is_finite() && y.is_finite() {
                pts.push(format!("{:.2},{:.2}", sx(x), sy(y)));
            } else {
                flush(&mut pts);
            }
        }
        flush(&mut pts);
    }
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" font-size="11">{}: [{x0:.4}, {x1:.4}]   {}: [{y0:.4}, {y1:.4}]</text>"#,
        HEIGHT - 12.0,
        series.header[0],
        series.header[1..].join(", ")
    );
    s.push_str("</svg>\n");
    s
}

//! Report writer: JSON lines to a file (appended) or stdout, with an optional
//! CSV mirror.

use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use swtomo::report::{BoundReport, CheckKind};

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    tag: &'a str,
    check: CheckKind,
    empirical_mean: f64,
    std_error: f64,
    bound: f64,
    n_reps: u64,
    pass: bool,
    params: String,
}

pub struct Sink {
    json: Box<dyn Write>,
    csv: Option<csv::Writer<File>>,
    pub to_stdout: bool,
}

impl Sink {
    pub fn open(out: Option<&Path>, csv_path: Option<&Path>) -> io::Result<Self> {
        let (json, to_stdout): (Box<dyn Write>, bool) = match out {
            Some(p) => (Box::new(BufWriter::new(OpenOptions::new().create(true).append(true).open(p)?)), false),
            None => (Box::new(io::stdout().lock()), true),
        };
        let csv = match csv_path {
            Some(p) => {
                let fresh = std::fs::metadata(p).map_or(true, |m| m.len() == 0);
                let file = OpenOptions::new().create(true).append(true).open(p)?;
                Some(csv::WriterBuilder::new().has_headers(fresh).from_writer(file))
            }
            None => None,
        };
        Ok(Self { json, csv, to_stdout })
    }

    pub fn write(&mut self, r: &BoundReport) -> io::Result<()> {
        writeln!(self.json, "{}", r.to_json_line())?;
        if let Some(w) = self.csv.as_mut() {
            w.serialize(CsvRow {
                experiment: &r.experiment,
                tag: &r.tag,
                check: r.check,
                empirical_mean: r.empirical_mean,
                std_error: r.std_error,
                bound: r.bound,
                n_reps: r.n_reps,
                pass: r.pass,
                params: serde_json::to_string(&r.params)?,
            })?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.json.flush()?;
        if let Some(mut w) = self.csv.take() {
            w.flush()?;
        }
        Ok(())
    }
}

//! CSV writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ablation_heat::profile::format_sig17;
use ablation_heat::TemperatureProfile;

use crate::CliResult;

pub type Sink = csv::Writer<Box<dyn Write>>;

pub fn open(path: Option<&Path>) -> CliResult<Sink> {
    let inner: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    Ok(csv::WriterBuilder::new().has_headers(false).from_writer(inner))
}

pub fn num(x: f64) -> String {
    format_sig17(x)
}

/// `model,t,r,T`.
pub fn write_profile(sink: &mut Sink, profile: &TemperatureProfile) -> CliResult<()> {
    sink.write_record(["model", "t", "r", "T"])?;
    let model = profile.model.as_str();
    for s in &profile.samples {
        sink.write_record([model, &num(s.t), &num(s.r), &num(s.temperature)])?;
    }
    sink.flush()?;
    Ok(())
}

//! Thin CSV helpers shared by every log format.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub fn write_rows<W: Write, T: Serialize>(out: W, rows: impl IntoIterator<Item = T>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read, T: DeserializeOwned>(input: R) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn write_file<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> csv::Result<()> {
    write_rows(BufWriter::new(File::create(path)?), rows)
}

pub fn read_file<T: DeserializeOwned>(path: &Path) -> csv::Result<Vec<T>> {
    read_rows(File::open(path)?)
}

//! Number formatting for machine-readable output: every float is written
//! with 17 significant digits so it parses back to the same value.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// `{:.16e}`: 17 significant digits in scientific notation.
pub fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(full_precision(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

/// Compact JSON with full-precision floats. Non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

//! Plain-text curve formats. All writers are deterministic: identical curves
//! produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::frames::CurveSamples;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Obj,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "obj" => Ok(Self::Obj),
            other => Err(format!("unknown format {other:?} (expected csv, json or obj)")),
        }
    }
}

/// A curve bound for a file in a given format.
#[derive(Clone, Debug)]
pub struct ExportRecord<'a> {
    pub format: Format,
    pub path: PathBuf,
    pub curve: &'a CurveSamples,
}

impl ExportRecord<'_> {
    pub fn render(&self) -> String {
        render(self.curve, self.format)
    }

    pub fn write(&self) -> std::io::Result<()> {
        write_file(&self.path, &self.render())
    }
}

pub fn render(curve: &CurveSamples, format: Format) -> String {
    match format {
        Format::Csv => to_csv(curve),
        Format::Json => to_json(curve),
        Format::Obj => to_obj(curve),
    }
}

fn write_file(path: &Path, text: &str) -> std::io::Result<()> {
    fs::write(path, text.as_bytes())
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header `t,x,y,z,kappa,tau`; undefined torsion is an empty field.
pub fn to_csv(curve: &CurveSamples) -> String {
    let mut out = String::from("t,x,y,z,kappa,tau\n");
    for i in 0..curve.len() {
        let p = curve.points[i];
        let tau = curve.tau[i].map(num).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(curve.times[i]),
            num(p.x),
            num(p.y),
            num(p.z),
            num(curve.kappa[i]),
            tau
        );
    }
    out
}

/// `v x y z` per sample, then one closed polyline `l 1 2 … N 1`.
pub fn to_obj(curve: &CurveSamples) -> String {
    let mut out = String::new();
    for p in &curve.points {
        let _ = writeln!(out, "v {} {} {}", num(p.x), num(p.y), num(p.z));
    }
    if !curve.is_empty() {
        out.push('l');
        for i in 1..=curve.len() {
            let _ = write!(out, " {i}");
        }
        out.push_str(" 1\n");
    }
    out
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    source: &'a str,
    omega: Option<u32>,
    ks: &'a [u32],
    alpha_list: Vec<[f64; 2]>,
    samples: usize,
    period: Option<f64>,
    closure_error: Option<f64>,
    bending_energy: Option<f64>,
    energy_trapezoid_cell: bool,
    peak_count: Option<usize>,
}

#[derive(Serialize)]
struct JsonCurve<'a> {
    metadata: JsonMeta<'a>,
    t: &'a [f64],
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    kappa: &'a [f64],
    tau: &'a [Option<f64>],
}

/// Metadata record plus one array per column; undefined torsion is `null`.
pub fn to_json(curve: &CurveSamples) -> String {
    let m = &curve.meta;
    let doc = JsonCurve {
        metadata: JsonMeta {
            source: &m.source,
            omega: m.omega,
            ks: &m.ks,
            alpha_list: m.alphas.iter().map(|a| [a.re, a.im]).collect(),
            samples: curve.len(),
            period: m.period,
            closure_error: m.closure_error,
            bending_energy: m.bending_energy,
            energy_trapezoid_cell: m.energy_trapezoid_cell,
            peak_count: m.peak_count,
        },
        t: &curve.times,
        x: curve.points.iter().map(|p| p.x).collect(),
        y: curve.points.iter().map(|p| p.y).collect(),
        z: curve.points.iter().map(|p| p.z).collect(),
        kappa: &curve.kappa,
        tau: &curve.tau,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("curve is serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Su2Vector;
    use crate::frames::CurveMetadata;

    fn tiny() -> CurveSamples {
        CurveSamples {
            times: vec![0.0, 0.5, 1.0],
            points: vec![Su2Vector::new(0.0, 0.0, 0.0), Su2Vector::new(1.0, 0.0, 0.0), Su2Vector::new(1.0, 1.0, 0.0)],
            kappa: vec![1.0, 1.0, 1.0],
            tau: vec![Some(0.0), None, Some(0.25)],
            meta: CurveMetadata {
                source: "test".into(),
                omega: Some(2),
                ks: vec![1],
                ..Default::default()
            },
        }
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&tiny());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "t,x,y,z,kappa,tau");
        assert!(lines[2].ends_with(','));
        assert_eq!(lines[1].split(',').next().unwrap(), "0.0000000000000000e0");
        assert!(!s.contains('\r'));
    }

    #[test]
    fn obj_layout() {
        let s = to_obj(&tiny());
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 3);
        assert_eq!(s.lines().last().unwrap(), "l 1 2 3 1");
    }

    #[test]
    fn json_layout() {
        let v: serde_json::Value = serde_json::from_str(&to_json(&tiny())).unwrap();
        assert_eq!(v["metadata"]["samples"], 3);
        assert_eq!(v["metadata"]["omega"], 2);
        assert!(v["tau"][1].is_null());
        assert_eq!(v["x"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert!("png".parse::<Format>().is_err());
    }
}

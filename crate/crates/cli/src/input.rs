use std::fs;
use std::path::Path;

use altmoments::momentrep::DiscreteMeasure;
use altmoments::seqcalc::FiniteSequence;
use altmoments::subord::{nutilde_from_nu, LaplaceExponentData, NuScaleData};
use clap::ValueEnum;
use serde::de::DeserializeOwned;

use crate::Failure;

/// Scale in which jump data files give their Lévy measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    /// `{"drift": d, "nutilde": {"atoms": [...]}}`
    Nutilde,
    /// `{"drift": d, "nu": {"atoms": [...]}}`
    Nu,
}

/// Reads `source` as a file, or as inline JSON when it starts with `{` or `[`.
fn read_source(source: &str) -> Result<String, Failure> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(source.to_string());
    }
    fs::read_to_string(Path::new(source)).map_err(|e| Failure::Input(format!("{source}: {e}")))
}

fn parse<T: DeserializeOwned>(source: &str) -> Result<T, Failure> {
    let text = read_source(source)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{source}: {e}")))
}

pub fn sequence(source: &str) -> Result<FiniteSequence, Failure> {
    parse(source)
}

pub fn measure(source: &str) -> Result<DiscreteMeasure, Failure> {
    parse(source)
}

pub fn laplace_data(source: &str, scale: Scale) -> Result<LaplaceExponentData, Failure> {
    match scale {
        Scale::Nutilde => parse(source),
        Scale::Nu => {
            let nu: NuScaleData = parse(source)?;
            nutilde_from_nu(&nu).map_err(|e| Failure::Input(format!("{source}: {e}")))
        }
    }
}

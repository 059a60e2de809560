use std::fs;
use std::io::Read;
use std::path::Path;

use mdconv::{
    certify_with, construct_mds_rate_1n, construct_mds_staircase_with, default_cap, encode,
    free_distance_estimate_par, is_superregular_par, make_field, phi_flatten, selftest, singleton_bound,
    singleton_witness, CodeDescriptor, ConstMatrix, MdsCertificate, PolyMatrix, RawPolynomial,
    SuperregularSource,
};
use serde::Serialize;
use thiserror::Error;

use crate::{Cli, Command, SourceArgs, SourceKind};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] mdconv::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON in {what}: {source}")]
    Json { what: String, source: serde_json::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use mdconv::Error::*;
        match self {
            CliError::Core(FieldTooSmall { .. } | SearchExhausted { .. }) => 3,
            CliError::Core(NotSuperregular { .. }) => 1,
            _ => 2,
        }
    }
}

pub struct Outcome {
    pub json: String,
    pub ok: bool,
}

fn emit<T: Serialize>(value: &T, pretty: bool, ok: bool) -> Result<Outcome, CliError> {
    let json = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|source| CliError::Json { what: "output".into(), source })?;
    Ok(Outcome { json, ok })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.display().to_string(), source };
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|source| CliError::Json {
        what: path.display().to_string(),
        source,
    })
}

fn source(args: &SourceArgs) -> Result<SuperregularSource, CliError> {
    Ok(match args.source {
        SourceKind::Cauchy => SuperregularSource::Cauchy,
        SourceKind::Random => SuperregularSource::Random {
            seed: args.seed,
            max_tries: args.max_tries,
        },
        SourceKind::Explicit => {
            let path = args.matrix.as_deref().expect("clap requires --matrix");
            SuperregularSource::Explicit(read_json::<ConstMatrix>(path)?)
        }
    })
}

#[derive(Serialize)]
struct Constructed<'a> {
    code: &'a CodeDescriptor,
    certificate: &'a MdsCertificate,
}

fn finish_construction(
    code: CodeDescriptor,
    cert: MdsCertificate,
    output: Option<&Path>,
    pretty: bool,
) -> Result<Outcome, CliError> {
    let ok = cert.is_certified();
    match output {
        Some(path) => {
            let mut text = emit(&code, pretty, ok)?.json;
            text.push('\n');
            fs::write(path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            emit(&cert, pretty, ok)
        }
        None => emit(&Constructed { code: &code, certificate: &cert }, pretty, ok),
    }
}

#[derive(Serialize)]
struct WitnessOutput {
    message: Vec<RawPolynomial>,
    codeword: Vec<RawPolynomial>,
    weight: usize,
    bound: u64,
}

#[derive(Serialize)]
struct EncodeOutput {
    codeword: Vec<RawPolynomial>,
    weight: usize,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let (pretty, workers) = (cli.pretty, cli.workers.max(1));
    match &cli.command {
        Command::Bound { m, k, n, delta } => emit(&singleton_bound(*m, *k, *n, *delta)?, pretty, true),
        Command::Construct { field, m, n, delta, source: src, output } => {
            let f = make_field(field.p, field.e)?;
            let (code, cert) = construct_mds_rate_1n(&f, *m, *n, *delta, &source(src)?)?;
            finish_construction(code, cert, output.as_deref(), pretty)
        }
        Command::ConstructStaircase { field, m, k, n, nu, source: src, output } => {
            let f = make_field(field.p, field.e)?;
            let (code, cert) = construct_mds_staircase_with(&f, *m, *k, *n, *nu, &source(src)?, workers)?;
            finish_construction(code, cert, output.as_deref(), pretty)
        }
        Command::Flatten { input } => {
            let code: CodeDescriptor = read_json(input)?;
            emit(&phi_flatten(&code.generator)?, pretty, true)
        }
        Command::CheckSr { input } => {
            let a: ConstMatrix = read_json(input)?;
            let report = is_superregular_par(&a, workers);
            emit(&report, pretty, report.verdict)
        }
        Command::Certify { input } => {
            let code: CodeDescriptor = read_json(input)?;
            let cert = certify_with(&code, workers);
            emit(&cert, pretty, cert.is_certified())
        }
        Command::Witness { input } => {
            let code: CodeDescriptor = read_json(input)?;
            let w = singleton_witness(&code)?;
            let bound = singleton_bound(code.m, code.k, code.n, code.degree())?;
            let out = WitnessOutput {
                message: w.message.to_raw().remove(0),
                codeword: w.codeword.to_raw().remove(0),
                weight: w.weight,
                bound,
            };
            emit(&out, pretty, w.weight as u64 <= bound)
        }
        Command::Encode { input, message } => {
            let code: CodeDescriptor = read_json(input)?;
            let raw: Vec<RawPolynomial> = serde_json::from_str(message).map_err(|source| CliError::Json {
                what: "--message".into(),
                source,
            })?;
            let u = PolyMatrix::from_raw(&code.field, code.m as usize, vec![raw])?;
            let v = encode(&u, &code.generator)?;
            let out = EncodeOutput { weight: v.weight(), codeword: v.to_raw().remove(0) };
            emit(&out, pretty, true)
        }
        Command::Distance { input, cap, stop_below } => {
            let code: CodeDescriptor = read_json(input)?;
            let cap = cap.unwrap_or_else(|| default_cap(&code.generator));
            let report = free_distance_estimate_par(&code.generator, cap, *stop_below, workers)?;
            emit(&report, pretty, !report.below_bound)
        }
        Command::Selftest { seed } => {
            let reports = selftest::run_all(*seed)?;
            let ok = reports.iter().all(|r| r.passed());
            emit(&reports, pretty, ok)
        }
    }
}

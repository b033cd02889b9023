use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use bkn::bk::{
    fiberwise_report, oc_rank1_check, validate_bkn, validate_bkn_presented, OcRankOneModel,
};
use bkn::enumerate::{enumerate_bkn, truncation_coverage};
use bkn::json::{self, ModuleDto, PresentedDto, WittVectorDto};
use bkn::lifting::{lift_bk, lift_tower_check, truncate_bk};
use bkn::normal_rep::{associated_module, compute_normal_rep};
use bkn::{Error, WittVector};
use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::Value;

const EXIT_INVALID: u8 = 1;
const EXIT_MALFORMED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "bkn",
    version,
    about = "Witt vectors and torsion BK modules over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Witt vector arithmetic: {"op": add|sub|mul|neg|frobenius|verschiebung, "x", "y", "e"}
    Witt { input: Option<PathBuf> },
    /// Validate a BK_n module, or a presented module (documents with "presentation")
    Validate { input: Option<PathBuf> },
    /// Global verdict against the verdicts on each residue field
    Fibers { input: Option<PathBuf> },
    /// Normal representation and the witness identifying it with the input
    NormalRep {
        input: Option<PathBuf>,
        /// Re-read the emitted JSON and re-check every identity
        #[arg(long)]
        verify: bool,
    },
    /// Lift to a higher level, or check the whole tower up to N
    Lift {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "tower", required_unless_present = "tower")]
        level: Option<usize>,
        #[arg(long, value_name = "N")]
        tower: Option<usize>,
    },
    /// Reduce modulo p^m
    Truncate {
        input: Option<PathBuf>,
        #[arg(long)]
        level: usize,
    },
    /// Classify rank-r modules over W_n(F_q) by brute force
    Enumerate {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Also enumerate level 1 and report truncation and lift coverage
        #[arg(long)]
        coverage: bool,
    },
    /// The rank-one model over O_C with φ of valuation v
    ExampleOc {
        #[arg(long, value_name = "a/b")]
        v: String,
    },
}

/// Outcome of a subcommand: the document to print and whether the object
/// was valid.
struct Outcome {
    doc: Value,
    ok: bool,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Malformed(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Malformed(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("documents serialize")
}

#[derive(Deserialize)]
struct WittDoc {
    op: String,
    x: WittVectorDto,
    #[serde(default)]
    y: Option<WittVectorDto>,
    #[serde(default)]
    e: Option<i64>,
}

fn witt(text: &str) -> Result<Outcome, Error> {
    let doc: WittDoc = parse(text)?;
    let x = json::decode_witt_vector(&doc.x)?;
    let y = || -> Result<WittVector, Error> {
        let y = doc
            .y
            .as_ref()
            .ok_or_else(|| Error::Malformed(format!("op {} needs y", doc.op)))?;
        json::decode_witt_vector(y)
    };
    let result = match doc.op.as_str() {
        "add" => x.checked_add(&y()?)?,
        "sub" => x.checked_sub(&y()?)?,
        "mul" => x.checked_mul(&y()?)?,
        "neg" => x.neg(),
        "frobenius" => x.frobenius(doc.e.unwrap_or(1)),
        "verschiebung" => x.verschiebung()?,
        other => return Err(Error::Malformed(format!("unknown op {other:?}"))),
    };
    let payload = serde_json::json!({
        "op": doc.op,
        "result": json::encode_witt_vector(&result),
        "valuation": result.valuation(),
    });
    Ok(Outcome {
        doc: json::document("witt", payload),
        ok: true,
    })
}

fn module(text: &str) -> Result<bkn::bk::BknModule, Error> {
    json::decode_module(&parse::<ModuleDto>(text)?)
}

fn validate(text: &str) -> Result<Outcome, Error> {
    let raw: Value = parse(text)?;
    if raw.get("presentation").is_some() {
        let dto: PresentedDto = parse(text)?;
        let (x, n) = json::decode_presented(&dto)?;
        let report = validate_bkn_presented(&x, n)?;
        return Ok(Outcome {
            ok: report.projective,
            doc: json::document("presented_report", json::encode_presented_report(&report)),
        });
    }
    let m = module(text)?;
    let report = validate_bkn(&m)?;
    Ok(Outcome {
        ok: report.valid,
        doc: json::document("validation", to_value(&json::encode_validation(&report))),
    })
}

fn fibers(text: &str) -> Result<Outcome, Error> {
    let report = fiberwise_report(&module(text)?)?;
    Ok(Outcome {
        ok: report.global.valid,
        doc: json::document("fiberwise", json::encode_fiberwise(&report)),
    })
}

fn normal_rep(text: &str, verify: bool) -> Result<Outcome, Error> {
    let m = module(text)?;
    let report = validate_bkn(&m)?;
    if !report.valid {
        return Ok(Outcome {
            ok: false,
            doc: json::document("validation", to_value(&json::encode_validation(&report))),
        });
    }
    let (nr, witness) = compute_normal_rep(&m)?;
    let assoc = associated_module(&nr)?;
    let mut payload = serde_json::json!({
        "normal_rep": json::encode_normal_rep(&nr),
        "witness": json::encode_witness(&witness),
        "associated": json::encode_module(&assoc),
    });
    let mut ok = true;
    if verify {
        let emitted = serde_json::to_string(&payload).expect("documents serialize");
        let back: Value = parse(&emitted)?;
        let nr2 = json::decode_normal_rep(
            &serde_json::from_value(back["normal_rep"].clone())
                .map_err(|e| Error::Malformed(e.to_string()))?,
        )?;
        let assoc2 = associated_module(&nr2)?;
        let w2 = json::decode_witness(
            &serde_json::from_value(back["witness"].clone())
                .map_err(|e| Error::Malformed(e.to_string()))?,
            &m,
        )?;
        let check = w2.check(&m, &assoc2)?;
        ok = check.holds() && assoc2 == assoc;
        payload["verified"] = Value::Bool(ok);
    }
    Ok(Outcome {
        ok,
        doc: json::document("normal_rep", payload),
    })
}

fn lift(text: &str, level: Option<usize>, tower: Option<usize>) -> Result<Outcome, Error> {
    let m = module(text)?;
    let report = validate_bkn(&m)?;
    if !report.valid {
        return Ok(Outcome {
            ok: false,
            doc: json::document("validation", to_value(&json::encode_validation(&report))),
        });
    }
    if let Some(top) = tower {
        let rep = lift_tower_check(&m, top)?;
        return Ok(Outcome {
            ok: rep.coherent,
            doc: json::document("tower", json::encode_tower(&rep)),
        });
    }
    let n = level.expect("clap enforces --level or --tower");
    let res = lift_bk(&m, n)?;
    Ok(Outcome {
        ok: true,
        doc: json::document("lift", json::encode_lift(&res)?),
    })
}

fn truncate(text: &str, level: usize) -> Result<Outcome, Error> {
    let m = truncate_bk(&module(text)?, level)?;
    Ok(Outcome {
        ok: true,
        doc: json::document("module", to_value(&json::encode_module(&m))),
    })
}

fn enumerate(q: u32, rank: usize, level: usize, coverage: bool) -> Result<Outcome, Error> {
    let e = enumerate_bkn(q, rank, level)?;
    let mut payload = json::encode_enumeration(&e);
    if coverage && level > 1 {
        let lower = enumerate_bkn(q, rank, 1)?;
        payload["coverage"] = json::encode_coverage(&truncation_coverage(&e, &lower)?);
    }
    Ok(Outcome {
        ok: true,
        doc: json::document("enumeration", payload),
    })
}

fn example_oc(v: &str) -> Result<Outcome, Error> {
    let m: OcRankOneModel = v.parse()?;
    let report = oc_rank1_check(&m);
    Ok(Outcome {
        ok: report.projective_cokernel,
        doc: json::document("oc_rank1", json::encode_oc(&report)),
    })
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Witt { input } => witt(&read_input(&input)?),
        Command::Validate { input } => validate(&read_input(&input)?),
        Command::Fibers { input } => fibers(&read_input(&input)?),
        Command::NormalRep { input, verify } => normal_rep(&read_input(&input)?, verify),
        Command::Lift {
            input,
            level,
            tower,
        } => lift(&read_input(&input)?, level, tower),
        Command::Truncate { input, level } => truncate(&read_input(&input)?, level),
        Command::Enumerate {
            q,
            rank,
            level,
            coverage,
        } => enumerate(q, rank, level, coverage),
        Command::ExampleOc { v } => example_oc(&v),
    }
}

/// Errors that describe the object rather than the input format.
fn is_invalid_object(e: &Error) -> bool {
    matches!(
        e,
        Error::NotBkn { .. }
            | Error::NotInvertible { .. }
            | Error::NoPsi { .. }
            | Error::PsiUnderdetermined { .. }
            | Error::NotKilled { .. }
            | Error::NotAComplex { .. }
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out.doc).expect("documents serialize")
            );
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INVALID)
            }
        }
        Err(e) => {
            let doc = json::document("error", serde_json::json!({ "message": e.to_string() }));
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("documents serialize")
            );
            eprintln!("bkn: {e}");
            if is_invalid_object(&e) {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::from(EXIT_MALFORMED)
            }
        }
    }
}

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use irrpoly_core::arith::{Fp64, FpBig, PrimeField, RngHandle};
use irrpoly_core::classic::ben_or_test;
use irrpoly_core::driver::{build_field, construct, ConstructionReport, Options};
use irrpoly_core::encoding::{coordinates, decode_text, encode_text};
use irrpoly_core::field::Field;
use irrpoly_core::stats::{irreducible_density, torsion_density};
use irrpoly_core::Error;
use num_bigint::BigUint;
use serde_json::json;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_TRIALS: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Irreducible polynomials of prescribed degree over finite fields.
#[derive(Parser)]
#[command(name = "irrpoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a monic irreducible polynomial of the given degree.
    Gen(GenArgs),
    /// Test a polynomial for irreducibility.
    Verify(VerifyArgs),
    /// Monte-Carlo density estimates.
    #[command(subcommand)]
    Stats(StatsCommand),
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: BigUint,
    /// Degree of K over F_p.
    #[arg(long, default_value_t = 1)]
    w: usize,
    /// Monic h(z) as c0,c1,...,cw; defaults to the first irreducible.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<BigUint>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Coeffs,
    Json,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    degree: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "coeffs")]
    format: Format,
    /// Run the irreducibility test before printing.
    #[arg(long)]
    verify: bool,
    /// Take auxiliary field elements in index order.
    #[arg(long)]
    canonical: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Polynomial in the text encoding.
    #[arg(long)]
    poly: String,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Fraction of random monic polynomials that are irreducible.
    IrrDensity {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fraction of random curves with a rational point of order ell.
    TorsionDensity {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Lib(Error),
    Negative,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match &cli.command {
        Command::Gen(a) => &a.field,
        Command::Verify(a) => &a.field,
        Command::Stats(StatsCommand::IrrDensity { field, .. }) => field,
        Command::Stats(StatsCommand::TorsionDensity { field, .. }) => field,
    };
    let outcome = if field.p.bits() < Fp64::LIMIT_BITS {
        let p = u64::try_from(&field.p).expect("fits in a word");
        Fp64::new(p)
            .map_err(Failure::from)
            .and_then(|pf| run(pf, &cli.command))
    } else {
        FpBig::new(field.p.clone())
            .map_err(Failure::from)
            .and_then(|pf| run(pf, &cli.command))
    };
    match outcome {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Negative) => {
            println!("reducible");
            ExitCode::from(EXIT_NEGATIVE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TrialsExhausted(_) => EXIT_TRIALS,
        e if e.is_internal() => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn field_of<P: PrimeField>(pf: P, args: &FieldArgs) -> Result<Field<P>, Error> {
    build_field(pf, args.w, args.modulus.as_deref())
}

fn run<P: PrimeField>(pf: P, command: &Command) -> Outcome {
    match command {
        Command::Gen(a) => {
            let k = field_of(pf, &a.field)?;
            let opts = Options {
                seed: a.seed,
                verify: a.verify,
                canonical: a.canonical,
            };
            let report = construct(&k, a.degree, &opts)?;
            Ok(match a.format {
                Format::Coeffs => encode_text(&report.polynomial),
                Format::Json => gen_json(&k, &a.field, a.degree, &report),
            })
        }
        Command::Verify(a) => {
            let k = field_of(pf, &a.field)?;
            let f = decode_text(&k, &a.poly)?;
            if f.deg() < 1 {
                return Err(
                    Error::InvalidInput("polynomial must have positive degree".into()).into(),
                );
            }
            if !f.is_monic() {
                return Err(Error::InvalidInput("polynomial must be monic".into()).into());
            }
            if ben_or_test(&f) {
                Ok("irreducible".into())
            } else {
                Err(Failure::Negative)
            }
        }
        Command::Stats(StatsCommand::IrrDensity {
            field,
            degree,
            samples,
            seed,
        }) => {
            let k = field_of(pf, field)?;
            let r = irreducible_density(&k, *degree, *samples, &mut RngHandle::new(*seed, 0))?;
            Ok(format!(
                "samples {}\nhits {}\nfraction {:.6}\nci [{:.6}, {:.6}]\nbound {:.6}\npass {}",
                r.samples, r.hits, r.fraction, r.ci.0, r.ci.1, r.bound, r.pass
            ))
        }
        Command::Stats(StatsCommand::TorsionDensity {
            field,
            ell,
            samples,
            seed,
        }) => {
            let k = field_of(pf, field)?;
            let r = torsion_density(&k, *ell, *samples, &mut RngHandle::new(*seed, 0))?;
            let (lo, hi) = r.band();
            Ok(format!(
                "samples {}\nhits {}\nfraction {:.6}\nexpected {:.6}\nband [{:.6}, {:.6}]\npass {}",
                r.samples, r.hits, r.fraction, r.expected, lo, hi, r.pass
            ))
        }
    }
}

fn gen_json<P: PrimeField>(
    k: &Field<P>,
    args: &FieldArgs,
    degree: u64,
    report: &ConstructionReport<P>,
) -> String {
    let pf = k.p();
    let modulus: Vec<String> = match (k.modulus(), &args.modulus) {
        (Some(h), _) => h.iter().map(|r| pf.to_biguint(r).to_string()).collect(),
        (None, Some(h)) => h.iter().map(|c| c.to_string()).collect(),
        (None, None) => vec!["0".into(), "1".into()],
    };
    let route: Vec<_> = report
        .route
        .iter()
        .map(|s| {
            json!({
                "ell": s.ell,
                "delta": s.delta,
                "method": s.method.tag(),
                "aux_degree": s.aux_degree,
                "eigenvalue_ok": s.eigenvalue_ok,
            })
        })
        .collect();
    json!({
        "p": k.characteristic().to_string(),
        "w": args.w,
        "modulus": modulus,
        "degree": degree,
        "seed": report.seed,
        "route": route,
        "coefficients": coordinates(&report.polynomial),
    })
    .to_string()
}

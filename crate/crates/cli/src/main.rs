use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use geovertex::arith::Scalar;
use geovertex::bf::{boson_create, fermion_create, ConfigPolynomial};
use geovertex::checker::{run_suite, Config, SUITES};
use geovertex::fock::{vertex_coeff, Field, FockElement};
use geovertex::mm::MMElement;
use geovertex::ops::{fusion, parse_chain, singular_locus, LocalEquation};
use geovertex::par::Strategy;
use geovertex::Error;

#[derive(Parser)]
#[command(name = "geovertex", version, about = "Exact checks for vertex operators on meromorphic functionals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply an operator chain to an expression.
    Apply {
        #[arg(long)]
        op: String,
        #[arg(long)]
        to: String,
    },
    /// Compose two operators and list where the composition is singular.
    Compose {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Fusion operators of a composition along a divisor such as `s-r`.
    Ope {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 1)]
        order: i64,
        /// Apply the fusion of the given order to this expression.
        #[arg(long)]
        apply: Option<String>,
    },
    /// Laurent coefficients of a field on a Fock vector.
    Laurent {
        /// psi, psi+, phi, E, M(z-s), M(1/(z-s)) or M(-s/(z-s)).
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        #[arg(long)]
        vector: String,
    },
    /// Run identity suites; `all` runs every suite.
    Verify {
        #[arg(default_value = "all")]
        suites: Vec<String>,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// Boson or fermion creation on configuration polynomials.
    Bf {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Number of points of the input configuration space.
        #[arg(long)]
        n: usize,
        /// Polynomial in sigma1..sigman.
        #[arg(long)]
        poly: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Boson,
    Fermion,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct VerifyOpts {
    #[arg(long)]
    window: Option<i64>,
    /// Grade range `A..B`.
    #[arg(long, allow_hyphen_values = true)]
    grades: Option<String>,
    #[arg(long)]
    tmax: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run identities one at a time.
    #[arg(long)]
    sequential: bool,
}

fn parse_grades(s: &str) -> Result<(i64, i64), Error> {
    let bad = || Error::BadConfig(format!("grades '{s}' is not of the form A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn config(o: &VerifyOpts) -> Result<Config, Error> {
    let mut c = Config { window: o.window, ..Config::default() };
    if let Some(g) = &o.grades {
        c.grades = parse_grades(g)?;
    }
    if let Some(t) = o.tmax {
        c.tmax = t;
    }
    if let Some(s) = o.seed {
        c.seed = s;
    }
    if o.sequential {
        c.strategy = Strategy::Sequential;
    }
    Ok(c)
}

fn verify(names: &[String], o: &VerifyOpts) -> Result<bool, Error> {
    let cfg = config(o)?;
    let names: Vec<String> =
        if names.iter().any(|n| n == "all") { SUITES.iter().map(|s| s.to_string()).collect() } else { names.to_vec() };
    let mut ok = true;
    for n in &names {
        let rep = run_suite(n, &cfg)?;
        ok &= rep.passed();
        match o.format {
            Format::Json => print!("{}", rep.to_json_lines()),
            Format::Text => print!("{}", rep.to_text()),
        }
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Apply { op, to } => {
            let chain = parse_chain(&op)?;
            println!("{}", chain.apply(&MMElement::parse(&to)?)?);
        }
        Cmd::Compose { left, right } => {
            let a = parse_chain(&left)?.to_semigeom()?;
            let b = parse_chain(&right)?.to_semigeom()?;
            println!("{}", a.compose(&b)?);
            let locus: Vec<String> = singular_locus(&a, &b)?.iter().map(|x| format!("{x} = 0")).collect();
            println!("singular locus: {}", if locus.is_empty() { "none".into() } else { locus.join(", ") });
        }
        Cmd::Ope { left, right, at, order, apply } => {
            let a = parse_chain(&left)?;
            let b = parse_chain(&right)?;
            let prefer: Vec<String> = b.params.iter().flatten().cloned().collect();
            let eq = LocalEquation::parse(&at, &prefer)?;
            let c = a.to_semigeom()?.compose(&b.to_semigeom()?)?;
            match apply {
                Some(e) => println!("{}", fusion(&c, &eq, order)?.apply(&MMElement::parse(&e)?)?),
                None => {
                    for m in 1..=order {
                        println!("{m}: {}", fusion(&c, &eq, m)?);
                    }
                }
            }
        }
        Cmd::Laurent { field, from, to, vector } => {
            let f = Field::from_name(&field).ok_or_else(|| Error::BadConfig(format!("unknown field '{field}'")))?;
            let v = FockElement::parse(&vector)?;
            for k in from..=to {
                println!("{k}: {}", vertex_coeff(f, k, &v));
            }
        }
        Cmd::Verify { suites, opts } => return verify(&suites, &opts),
        Cmd::Bf { kind, at, n, poly } => {
            let z0 = Scalar::parse(&at)?;
            let p = ConfigPolynomial::parse(n, &poly)?;
            let out = match kind {
                Kind::Boson => boson_create(&z0, &p)?,
                Kind::Fermion => fermion_create(&z0, &p)?,
            };
            println!("{out}");
        }
    }
    Ok(true)
}

fn code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } => 3,
        Error::DomainViolation { .. } | Error::PoleAtPoint { .. } => 4,
        Error::BadConfig(_) | Error::UnknownSuite(_) => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code(&e))
        }
    }
}

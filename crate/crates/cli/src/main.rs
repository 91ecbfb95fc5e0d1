//! `inertia`: build, check and demonstrate integral symplectic embeddings of
//! finite inertia groups.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use inertia_core::groups::GroupError;
use inertia_core::io::{write_atomic, CertificateFile, IoError, ProblemInput, DEFAULT_PRECISION};
use inertia_core::modrep::ModrepError;
use inertia_core::scenarios::{build_demo, Demo, DemoFamily, ScenarioError};
use inertia_core::selftest::{run_selftest, SelftestOptions};
use inertia_core::symplectic::{
    embed_inertia_group, extend_to_g, verify_certificate, EmbedOptions, SymplecticCertificate, SymplecticError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_INERTIA: u8 = 3;
const EXIT_CONSTRUCTION: u8 = 4;
const EXIT_FORCE_REQUIRED: u8 = 5;

#[derive(Parser)]
#[command(name = "inertia", version, about = "Integral symplectic embeddings of finite inertia groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certificate for a problem file.
    Embed {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow ell = 3.
        #[arg(long)]
        force: bool,
        /// Certificate path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a certificate file.
    Verify { certificate: PathBuf },
    /// Run a built-in scenario.
    Demo {
        #[arg(long)]
        family: DemoFamily,
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        force: bool,
        /// Also write the certificate.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded self-test corpus.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        corpus_size: usize,
        #[arg(long, default_value_t = 1000)]
        arithmetic_samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Embed { input, seed, force, out } => embed(&input, seed, force, out.as_deref()),
        Command::Verify { certificate } => verify(&certificate),
        Command::Demo { family, ell, precision, seed, force, out } => demo(family, ell, precision, seed, force, out.as_deref()),
        Command::Selftest { seed, corpus_size, arithmetic_samples } => selftest(seed, corpus_size, arithmetic_samples),
    };
    ExitCode::from(code)
}

fn symplectic_code(e: &SymplecticError) -> u8 {
    match e {
        SymplecticError::ForceRequired => EXIT_FORCE_REQUIRED,
        SymplecticError::Group(GroupError::NotInertiaForm(_))
        | SymplecticError::Modrep(ModrepError::Group(GroupError::NotInertiaForm(_))) => EXIT_NOT_INERTIA,
        _ => EXIT_CONSTRUCTION,
    }
}

fn io_code(e: &IoError) -> u8 {
    match e {
        IoError::Json(_) | IoError::File { .. } | IoError::Invalid(_) | IoError::Padic(_) => EXIT_PARSE,
        IoError::Group(GroupError::NotInertiaForm(_))
        | IoError::Modrep(ModrepError::Group(GroupError::NotInertiaForm(_)))
        | IoError::Scenario(ScenarioError::Group(GroupError::NotInertiaForm(_))) => EXIT_NOT_INERTIA,
        IoError::Symplectic(s) | IoError::Scenario(ScenarioError::Symplectic(s)) => symplectic_code(s),
        IoError::Scenario(ScenarioError::UnknownFamily(_) | ScenarioError::WrongEll { .. }) => EXIT_PARSE,
        _ => EXIT_CONSTRUCTION,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    code
}

/// Verify, serialize, and write or print. Returns the exit code.
fn emit(cert: &SymplecticCertificate, seed: u64, out: Option<&std::path::Path>) -> u8 {
    let report = verify_certificate(cert);
    let passed = report.all_passed();
    let file = CertificateFile::new(cert, report.clone(), seed);
    match out {
        Some(path) => {
            if let Err(e) = write_atomic(path, file.to_json().as_bytes()) {
                return fail(EXIT_PARSE, e);
            }
            eprint!("{report}");
        }
        None => println!("{}", file.to_json()),
    }
    if passed {
        0
    } else {
        EXIT_CONSTRUCTION
    }
}

fn embed(input: &std::path::Path, seed: u64, force: bool, out: Option<&std::path::Path>) -> u8 {
    let problem = match ProblemInput::load(input).and_then(|p| p.resolve(seed)) {
        Ok(p) => p,
        Err(e) => return fail(io_code(&e), e),
    };
    let opts = EmbedOptions { seed, force, ..Default::default() };
    match embed_inertia_group(&problem.ring, &problem.structure, &problem.rep, &problem.form, &opts) {
        Ok(cert) => emit(&cert, seed, out),
        Err(e) => fail(symplectic_code(&e), e),
    }
}

fn verify(path: &std::path::Path) -> u8 {
    let cert = match CertificateFile::load(path).and_then(|f| f.to_certificate()) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let report = verify_certificate(&cert);
    print!("{report}");
    if report.all_passed() {
        0
    } else {
        EXIT_FAILED_CHECK
    }
}

fn demo(family: DemoFamily, ell: Option<u64>, precision: u32, seed: u64, force: bool, out: Option<&std::path::Path>) -> u8 {
    let built = match build_demo(family, ell, precision, seed) {
        Ok(d) => d,
        Err(e) => {
            let e = IoError::from(e);
            return fail(io_code(&e), e);
        }
    };
    match built {
        Demo::Extension(p) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match extend_to_g(&p.ring, &p.structure, &p.tau, &p.form, 64, &mut rng) {
                Ok((images, trace)) => {
                    println!("{family}: extension to all {} elements, dimension {}", images.len(), p.tau.dim());
                    print!("{}", trace.summary());
                    0
                }
                Err(e) => fail(symplectic_code(&e), e),
            }
        }
        Demo::Embed(p) => {
            let opts = EmbedOptions { seed, force, ..Default::default() };
            println!("{}: |G| = {}, input dimension {}, ell = {}", p.name, p.structure.group.order(), p.rep.dim, p.ring.ell());
            match embed_inertia_group(&p.ring, &p.structure, &p.rep, &p.form, &opts) {
                Ok(cert) => {
                    println!("certificate: Sp_{}", cert.dim);
                    for r in &cert.ledger.records {
                        println!("  branch {} (dim {}, w {:?}, r {:?}, t {:?})", r.path, r.dim, r.w, r.r, r.t);
                        for c in &r.checks {
                            println!("    {} {}", if c.holds { "holds" } else { "FAILS" }, c.relation);
                        }
                    }
                    let report = verify_certificate(&cert);
                    print!("{report}");
                    if let Some(path) = out {
                        let file = CertificateFile::new(&cert, report.clone(), seed);
                        if let Err(e) = write_atomic(path, file.to_json().as_bytes()) {
                            return fail(EXIT_PARSE, e);
                        }
                    }
                    if report.all_passed() {
                        0
                    } else {
                        EXIT_FAILED_CHECK
                    }
                }
                Err(SymplecticError::BudgetViolation(msg)) if family == DemoFamily::Ell3BudgetProbe => {
                    println!("budget violation: {msg}");
                    0
                }
                Err(e) => fail(symplectic_code(&e), e),
            }
        }
    }
}

fn selftest(seed: u64, corpus_size: usize, arithmetic_samples: usize) -> u8 {
    let opts = SelftestOptions {
        seed,
        corpus_size,
        arithmetic_samples,
        inject_fault: cfg!(feature = "inject-fault"),
        ..Default::default()
    };
    let outcomes = run_selftest(&opts);
    for o in &outcomes {
        println!("{} {} ({:.2?}): {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.elapsed, o.detail);
    }
    if outcomes.iter().all(|o| o.passed) {
        0
    } else {
        EXIT_FAILED_CHECK
    }
}

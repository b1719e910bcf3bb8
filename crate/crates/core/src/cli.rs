//! Command-line driver. `run` returns the process exit code:
//! 0 success, 1 failed verification, 2 usage or parse error,
//! 3 infeasible decoding parameters, 4 empty decoding list.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bipoly::BiPoly;
use crate::classic::{knh_interpolate, HasseMode, TrackedBasis};
use crate::decoder::{decode_list, gs_params, GSParams, RSCode, MAX_LIST_SIZE, MAX_MULTIPLICITY};
use crate::error::{Error, Result};
use crate::fast;
use crate::field::{FieldElement, PrimeField};
use crate::instance::{InterpolationInstance, Point};
use crate::oracle::oracle_min_solution;
use crate::unipoly::UniPoly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_EMPTY_LIST: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "gs-interp",
    version,
    about = "Bivariate interpolation and list decoding over GF(p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Interpolate the points in FILE and print Q.
    Interpolate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = Algorithm::Fast)]
        algorithm: Algorithm,
    },
    /// Cross-check all algorithms against the linear-algebra oracle.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// List-decode a received Reed-Solomon word.
    Decode(DecodeArgs),
    /// Time the algorithms on random instances and print CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Must match the `p=` header if given.
    #[arg(long)]
    modulus: Option<u64>,
    /// Must match the `w=` header if given.
    #[arg(long)]
    w: Option<usize>,
    /// Must match the `ell=` header if given.
    #[arg(long)]
    ell: Option<usize>,
    /// Multiplicity for point lines without a third field.
    #[arg(long, default_value_t = 1)]
    s: usize,
    file: PathBuf,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long)]
    modulus: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    tau: usize,
    /// Comma-separated residues.
    #[arg(long)]
    received: String,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    modulus: u64,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 1)]
    w: usize,
    /// Comma-separated point counts.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Classic,
    ClassicHasse,
    Fast,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Classic => "classic",
            Algorithm::ClassicHasse => "classic-hasse",
            Algorithm::Fast => "fast",
        }
    }

    /// Minimal solution and final basis.
    pub fn interpolate(self, inst: &InterpolationInstance) -> Result<(BiPoly, TrackedBasis)> {
        match self {
            Algorithm::Classic => knh_interpolate(inst, HasseMode::Naive).map(|o| (o.q, o.basis)),
            Algorithm::ClassicHasse => {
                knh_interpolate(inst, HasseMode::Cached).map(|o| (o.q, o.basis))
            }
            Algorithm::Fast => fast::solve(inst).map(|o| (o.q, o.basis)),
        }
    }
}

fn parse_int<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} '{}'", s.trim()),
    })
}

/// Parses the instance file grammar: `p=`, `w=`, `ell=` header lines, then
/// `x,y[,s]` point lines. `#` starts a comment.
pub fn parse_instance(text: &str, default_s: usize) -> Result<InterpolationInstance> {
    let mut header: Vec<(usize, u64)> = Vec::new();
    let mut field: Option<PrimeField> = None;
    let mut points = Vec::new();
    let mut mults = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if header.len() < 3 {
            let key = ["p", "w", "ell"][header.len()];
            let value = content
                .strip_prefix(key)
                .and_then(|r| r.trim_start().strip_prefix('='))
                .ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("expected '{key}=<int>', found '{content}'"),
                })?;
            let v: u64 = parse_int(value, line, key)?;
            if key == "p" {
                field = Some(PrimeField::new(v).map_err(|e| Error::Parse {
                    line,
                    msg: e.to_string(),
                })?);
            }
            header.push((line, v));
            continue;
        }
        let f = field.expect("header parsed");
        let parts: Vec<&str> = content.split(',').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(Error::Parse {
                line,
                msg: format!("expected 'x,y[,s]', found '{content}'"),
            });
        }
        let x: i64 = parse_int(parts[0], line, "x")?;
        let y: i64 = parse_int(parts[1], line, "y")?;
        let s = match parts.get(2) {
            Some(t) => parse_int(t, line, "multiplicity")?,
            None => default_s,
        };
        if s == 0 {
            return Err(Error::Parse {
                line,
                msg: "multiplicity must be positive".into(),
            });
        }
        let pt = Point {
            x: f.from_i64(x),
            y: f.from_i64(y),
        };
        if points.iter().any(|q: &Point| q.x == pt.x) {
            return Err(Error::Parse {
                line,
                msg: format!("x-coordinate {} repeats an earlier point", pt.x),
            });
        }
        points.push(pt);
        mults.push(s);
    }
    if header.len() < 3 {
        let key = ["p", "w", "ell"][header.len()];
        return Err(Error::Parse {
            line: last_line.max(1),
            msg: format!("missing '{key}=' header"),
        });
    }
    if points.is_empty() {
        return Err(Error::Parse {
            line: last_line,
            msg: "no point lines".into(),
        });
    }
    let (w_line, w) = header[1];
    if w == 0 {
        return Err(Error::Parse {
            line: w_line,
            msg: "w must be positive".into(),
        });
    }
    let ell = header[2].1 as usize;
    InterpolationInstance::new(
        field.expect("header parsed"),
        points,
        mults,
        ell,
        w as usize,
    )
}

/// Machine-readable form of `q`: `a,j,c` triples for the terms `c x^a y^j`,
/// separated by `;`.
pub fn format_monomials(q: &BiPoly) -> String {
    q.terms()
        .iter()
        .map(|(a, j, c)| format!("{a},{j},{c}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Inverse of [`format_monomials`].
pub fn parse_monomials(field: PrimeField, ell: usize, text: &str) -> Result<BiPoly> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(BiPoly::zero(field, ell));
    }
    let mut rows = vec![Vec::<u64>::new(); ell + 1];
    for item in text.split(';') {
        let parts: Vec<&str> = item.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected 'a,j,c', found '{item}'"),
            });
        }
        let a: usize = parse_int(parts[0], 1, "x-degree")?;
        let j: usize = parse_int(parts[1], 1, "y-degree")?;
        let c: u64 = parse_int(parts[2], 1, "coefficient")?;
        if j > ell {
            return Err(Error::Parse {
                line: 1,
                msg: format!("y-degree {j} exceeds ell = {ell}"),
            });
        }
        let row = &mut rows[j];
        if row.len() <= a {
            row.resize(a + 1, 0);
        }
        row[a] = field.add(row[a], field.reduce(c));
    }
    BiPoly::from_rows(
        field,
        rows.into_iter()
            .map(|r| UniPoly::from_coeffs(field, r))
            .collect(),
    )
}

fn load_instance(args: &InstanceArgs) -> Result<InterpolationInstance> {
    let text = std::fs::read_to_string(&args.file).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("{}: {e}", args.file.display()),
    })?;
    let inst = parse_instance(&text, args.s)?;
    let checks = [
        ("modulus", args.modulus, inst.field().modulus()),
        ("w", args.w.map(|v| v as u64), inst.w() as u64),
        ("ell", args.ell.map(|v| v as u64), inst.ell() as u64),
    ];
    for (name, given, found) in checks {
        if let Some(g) = given {
            if g != found {
                return Err(Error::InvalidInstance(format!(
                    "--{name} {g} disagrees with the file header value {found}"
                )));
            }
        }
    }
    Ok(inst)
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_interpolate(args: &InstanceArgs, algorithm: Algorithm, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(args)?;
    let (q, basis) = algorithm.interpolate(&inst)?;
    let _ = writeln!(out, "algorithm: {}", algorithm.name());
    let _ = writeln!(out, "q: {q}");
    let _ = writeln!(out, "monomials: {}", format_monomials(&q));
    let _ = writeln!(
        out,
        "wdeg: {}",
        q.weighted_deg(inst.w()).expect("nonzero solution")
    );
    let _ = writeln!(out, "deltas: {}", join(&basis.deltas));
    let _ = writeln!(out, "positions: {}", join(&basis.positions));
    Ok(EXIT_OK)
}

fn is_position_permutation(positions: &[usize]) -> bool {
    let mut p = positions.to_vec();
    p.sort_unstable();
    p.iter().enumerate().all(|(i, &v)| i == v)
}

/// Named cross-checks between the three algorithms and the oracle.
pub fn verify_checks(inst: &InterpolationInstance) -> Result<Vec<(String, bool)>> {
    let (oracle_q, oracle_deg) = oracle_min_solution(inst);
    let mut checks = vec![(
        "oracle-multiplicity".to_string(),
        inst.is_satisfied_by(&oracle_q),
    )];
    let mut bases = Vec::new();
    for alg in [Algorithm::Classic, Algorithm::ClassicHasse, Algorithm::Fast] {
        let (q, basis) = alg.interpolate(inst)?;
        let name = alg.name();
        checks.push((format!("{name}-multiplicity"), inst.is_satisfied_by(&q)));
        checks.push((
            format!("{name}-min-wdeg"),
            q.weighted_deg(inst.w()) == Some(oracle_deg),
        ));
        checks.push((
            format!("{name}-basis-satisfies"),
            basis.elems.iter().all(|b| inst.is_satisfied_by(b)),
        ));
        checks.push((
            format!("{name}-positions"),
            is_position_permutation(&basis.positions),
        ));
        bases.push(basis);
    }
    checks.push(("classic-hasse-equals-classic".into(), bases[1] == bases[0]));
    checks.push(("fast-equals-classic".into(), bases[2] == bases[0]));
    let sorted = |b: &TrackedBasis| {
        let mut d = b.deltas.clone();
        d.sort_unstable();
        d
    };
    checks.push((
        "sorted-deltas-agree".into(),
        sorted(&bases[2]) == sorted(&bases[0]),
    ));
    Ok(checks)
}

fn cmd_verify(args: &InstanceArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(args)?;
    let checks = verify_checks(&inst)?;
    let mut ok = true;
    for (name, pass) in &checks {
        ok &= *pass;
        let _ = writeln!(out, "{} {name}", if *pass { "PASS" } else { "FAIL" });
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn decode_params(
    code: &RSCode,
    tau: usize,
    s: Option<usize>,
    ell: Option<usize>,
) -> Result<GSParams> {
    let w = code.k() - 1;
    let n = code.n();
    match (s, ell) {
        (None, None) => gs_params(code, tau),
        (Some(s), Some(ell)) => {
            let p = GSParams { s, ell, tau, w };
            if p.is_feasible(n) {
                Ok(p)
            } else {
                Err(Error::Infeasible(format!(
                    "sum_{{j=0..{ell}}} max(0, {s}*({n}-{tau}) - j*{w}) > {n}*{s}*{}/2 does not hold",
                    s + 1
                )))
            }
        }
        (s, ell) => {
            let ss: Vec<usize> = s.map_or((1..=MAX_MULTIPLICITY).collect(), |v| vec![v]);
            let ls: Vec<usize> = ell.map_or((1..=MAX_LIST_SIZE).collect(), |v| vec![v]);
            ss.iter()
                .flat_map(|&s| ls.iter().map(move |&ell| GSParams { s, ell, tau, w }))
                .find(|p| p.is_feasible(n))
                .ok_or_else(|| {
                    Error::Infeasible(format!(
                        "no s <= {MAX_MULTIPLICITY}, ell <= {MAX_LIST_SIZE} compatible with the \
                         given values satisfies sum_{{j=0..ell}} max(0, s(n-tau) - j*w) > n*s(s+1)/2"
                    ))
                })
        }
    }
}

fn cmd_decode(args: &DecodeArgs, out: &mut dyn Write) -> Result<i32> {
    let f = PrimeField::new(args.modulus)?;
    let code = RSCode::new(f, args.n, args.k)?;
    let received = args
        .received
        .split(',')
        .map(|t| parse_int::<i64>(t, 1, "received symbol").map(|v| f.from_i64(v)))
        .collect::<Result<Vec<FieldElement>>>()?;
    if received.len() != args.n {
        return Err(Error::Dimension(format!(
            "received word has {} symbols, expected n = {}",
            received.len(),
            args.n
        )));
    }
    let params = decode_params(&code, args.tau, args.s, args.ell)?;
    let list = decode_list(&code, &received, &params)?;
    let _ = writeln!(
        out,
        "params: s={} ell={} tau={} w={}",
        params.s, params.ell, params.tau, params.w
    );
    for msg in &list {
        let _ = writeln!(out, "message: {}", join(msg));
    }
    let _ = writeln!(out, "count: {}", list.len());
    Ok(if list.is_empty() {
        EXIT_EMPTY_LIST
    } else {
        EXIT_OK
    })
}

/// The instance used for one bench row: `n` random points with uniform
/// multiplicity `s`.
pub fn bench_instance<R: Rng>(
    rng: &mut R,
    field: PrimeField,
    n: usize,
    s: usize,
    ell: usize,
    w: usize,
) -> Result<InterpolationInstance> {
    InterpolationInstance::random(rng, field, n, |_| s, ell, w)
}

/// Median of seven wall-clock runs, in milliseconds.
pub fn median_ms(mut run: impl FnMut()) -> f64 {
    let mut t: Vec<f64> = (0..7)
        .map(|_| {
            let start = Instant::now();
            run();
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    t.sort_by(f64::total_cmp);
    t[3]
}

/// `[classic_ms, classic_hasse_ms, fast_ms]` for one instance.
pub fn bench_timings(inst: &InterpolationInstance) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (slot, alg) in
        out.iter_mut()
            .zip([Algorithm::Classic, Algorithm::ClassicHasse, Algorithm::Fast])
    {
        alg.interpolate(inst)?;
        *slot = median_ms(|| {
            alg.interpolate(inst).expect("already succeeded once");
        });
    }
    Ok(out)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let f = PrimeField::new(args.modulus)?;
    let sizes = args
        .sizes
        .split(',')
        .map(|t| parse_int::<usize>(t, 1, "size"))
        .collect::<Result<Vec<_>>>()?;
    if args.s == 0 || args.w == 0 || sizes.contains(&0) {
        return Err(Error::InvalidInstance(
            "s, w and sizes must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let _ = writeln!(out, "n,classic_ms,classic_hasse_ms,fast_ms");
    for n in sizes {
        let inst = bench_instance(&mut rng, f, n, args.s, args.ell, args.w)?;
        let [c, h, fa] = bench_timings(&inst)?;
        let _ = writeln!(out, "{n},{c:.3},{h:.3},{fa:.3}");
    }
    Ok(EXIT_OK)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        _ => EXIT_USAGE,
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Interpolate {
            instance,
            algorithm,
        } => cmd_interpolate(instance, *algorithm, out),
        Command::Verify { instance } => cmd_verify(instance, out),
        Command::Decode(a) => cmd_decode(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn parse_collinear_file() {
        let text = "# three points on y = x\np=3\nw=1\nell=1\n0,0\n1,1\n2,2 # last\n";
        let inst = parse_instance(text, 1).unwrap();
        assert_eq!(inst.field().modulus(), 3);
        assert_eq!((inst.len(), inst.w(), inst.ell()), (3, 1, 1));
        assert_eq!(inst.mults(), &[1, 1, 1]);
    }

    #[test]
    fn parse_multiplicities_and_defaults() {
        let inst = parse_instance("p=101\nw=2\nell=3\n1,5,3\n2,7\n-1,-2,2\n", 2).unwrap();
        assert_eq!(inst.mults(), &[3, 2, 2]);
        assert_eq!(inst.points()[2].x.value(), 100);
        assert_eq!(inst.points()[2].y.value(), 99);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("p=3\nell=1\nw=1\n0,0\n", 2),
            ("p=4\nw=1\nell=1\n0,0\n", 1),
            ("# c\np=5\nw=1\nell=1\n0,0\n1\n", 6),
            ("p=5\nw=1\nell=1\n0,0\n0,3\n", 5),
            ("p=5\nw=1\nell=1\n0,x\n", 4),
            ("p=5\nw=0\nell=1\n0,1\n", 2),
            ("p=5\nw=1\nell=1\n0,1,0\n", 4),
            ("p=5\nw=1\n", 2),
        ];
        for (text, line) in cases {
            match parse_instance(text, 1) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn monomials_round_trip() {
        let f = gf(13);
        let q = BiPoly::from_terms(f, 3, &[(0, 0, 4), (5, 1, 12), (2, 3, 1)]).unwrap();
        let text = format_monomials(&q);
        assert_eq!(parse_monomials(f, 3, &text).unwrap(), q);
        assert_eq!(parse_monomials(f, 3, "").unwrap(), BiPoly::zero(f, 3));
        assert!(parse_monomials(f, 1, "0,2,1").is_err());
    }

    #[test]
    fn decode_params_partial() {
        let f = gf(13);
        let code = RSCode::new(f, 12, 3).unwrap();
        let p = decode_params(&code, 5, Some(2), None).unwrap();
        assert_eq!(p.s, 2);
        assert!(p.is_feasible(12));
        assert!(matches!(
            decode_params(&code, 5, Some(1), Some(1)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(
            run(["gs-interp", "frobnicate"], &mut out, &mut err),
            EXIT_USAGE
        );
        assert_eq!(
            run(
                ["gs-interp", "bench", "--modulus", "101"],
                &mut out,
                &mut err
            ),
            EXIT_USAGE
        );
        assert_eq!(run(["gs-interp", "--help"], &mut out, &mut err), EXIT_OK);
    }
}

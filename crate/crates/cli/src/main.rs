use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use apmagic::ap::kappa_of;
use apmagic::audit::{audit_max_root, audit_sum, AuditReport, Status};
use apmagic::grid::{chain_decompose, to_ap_structure, verify, Classification, Grid};
use apmagic::kappa::{kappa_roots_quadratic, AlphaFraction};
use apmagic::search::{find_square_ap_triples, hunt, pairs_for_sum, scan_common_differences};
use apmagic::Ratio;
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "apmagic",
    version,
    about = "Squares in arithmetic progression and 3x3 magic squares of squares"
)]
struct Cli {
    /// Emit one JSON object per line instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel commands.
    #[arg(long, global = true, env = "APMAGIC_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a grid file for magic and semi-magic properties.
    Verify {
        file: PathBuf,
        /// The file lists square roots; cells are their squares.
        #[arg(long)]
        roots: bool,
    },
    /// Decompose a 3x3 grid into its (x23, D1, D2) chain and AP pairs.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        roots: bool,
    },
    /// AP pairs with the given sum.
    Pairs {
        #[arg(long)]
        sum: u64,
    },
    /// Square triples a² < b² < c² with common difference D.
    Triples {
        #[arg(long)]
        sum: u64,
    },
    /// Common differences with at least K triples among roots up to R.
    Scan {
        #[arg(long)]
        max_root: u64,
        #[arg(long, default_value_t = 2)]
        min_reps: usize,
    },
    /// Search for 3x3 magic squares of squares with roots up to R.
    Hunt {
        #[arg(long)]
        max_root: u64,
        /// List the grids that miss only on the major diagonal.
        #[arg(long)]
        near_misses: bool,
    },
    /// Rational roots kappa of the quadratic for alpha = N/D.
    Kappa {
        #[arg(long)]
        alpha: Ratio,
    },
    /// Evaluate the nonexistence argument on equal-sum triples.
    Audit {
        #[arg(long, conflicts_with = "max_root", required_unless_present = "max_root")]
        sum: Option<u64>,
        #[arg(long)]
        max_root: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    File(PathBuf, io::Error),
    Input(String),
    Output(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Output(e)
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("apmagic: cannot start {jobs} workers: {e}");
            return ExitCode::from(1);
        }
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::Output));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) | Err(Failure::Input(msg)) => {
            eprintln!("apmagic: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::File(path, e)) => {
            eprintln!("apmagic: {}: {e}", path.display());
            ExitCode::from(2)
        }
        Err(Failure::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Output(e)) => {
            eprintln!("apmagic: write failed: {e}");
            ExitCode::from(2)
        }
    }
}

fn json_line(out: &mut Out, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(|e| Failure::Output(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn load_grid(path: &Path, roots: bool) -> Result<Grid, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::File(path.to_owned(), e))?;
    Grid::parse(&text, roots).map_err(|e| Failure::File(path.to_owned(), io::Error::new(io::ErrorKind::InvalidData, e)))
}

fn progress(what: &str, start: Instant) {
    eprintln!("{what} in {:.2}s", start.elapsed().as_secs_f64());
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    match &cli.command {
        Command::Verify { file, roots } => cmd_verify(cli.json, out, &load_grid(file, *roots)?),
        Command::Decompose { file, roots } => cmd_decompose(cli.json, out, &load_grid(file, *roots)?),
        Command::Pairs { sum } => cmd_pairs(cli.json, out, *sum),
        Command::Triples { sum } => cmd_triples(cli.json, out, *sum),
        Command::Scan { max_root, min_reps } => cmd_scan(cli.json, out, *max_root, *min_reps),
        Command::Hunt { max_root, near_misses } => cmd_hunt(cli.json, out, *max_root, *near_misses),
        Command::Kappa { alpha } => cmd_kappa(cli.json, out, alpha),
        Command::Audit { sum, max_root } => cmd_audit(cli.json, out, *sum, *max_root),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn cmd_verify(json: bool, out: &mut Out, grid: &Grid) -> Result<(), Failure> {
    let rep = verify(grid);
    if json {
        return json_line(out, &rep);
    }
    match rep.classification {
        Classification::Magic => write!(out, "magic, K={}", rep.constants[0])?,
        Classification::SemiMagic => write!(out, "semi-magic, constants {{{}}}", join(&rep.constants))?,
        Classification::NotMagic => write!(out, "not magic, constants {{{}}}", join(&rep.constants))?,
    }
    if rep.all_square {
        write!(out, ", all squares")?;
    }
    if !rep.repeated.is_empty() {
        write!(out, ", repeated {{{}}}", join(&rep.repeated))?;
    }
    writeln!(out)?;
    writeln!(out, "rows      {}", join(&rep.row_sums))?;
    writeln!(out, "columns   {}", join(&rep.col_sums))?;
    writeln!(out, "diagonals {}", join(&rep.diag_sums))?;
    Ok(())
}

fn cmd_decompose(json: bool, out: &mut Out, grid: &Grid) -> Result<(), Failure> {
    let chain = chain_decompose(grid).map_err(|e| Failure::Input(e.to_string()))?;
    let structure = to_ap_structure(grid).ok();
    if json {
        #[derive(Serialize)]
        struct Decomposition<'a> {
            x23: u64,
            d1: i128,
            d2: i128,
            center: i128,
            magic_constant: i128,
            rotated: bool,
            structure: Option<&'a apmagic::grid::ApStructure>,
        }
        return json_line(
            out,
            &Decomposition {
                x23: chain.x23,
                d1: chain.d1,
                d2: chain.d2,
                center: chain.center(),
                magic_constant: chain.magic_constant(),
                rotated: chain.rotated,
                structure: structure.as_ref(),
            },
        );
    }
    writeln!(out, "x23={} D1={} D2={}", chain.x23, chain.d1, chain.d2)?;
    writeln!(
        out,
        "center={} K={}{}",
        chain.center(),
        chain.magic_constant(),
        if chain.rotated { " (rotated 180)" } else { "" }
    )?;
    match structure {
        Some(s) => {
            for (t, p) in s.triples.iter().zip(&s.pairs) {
                writeln!(
                    out,
                    "pair ({}, {}, {}): offsets {} {} {}, sum {}",
                    t.a,
                    t.b,
                    t.c,
                    p.p1(),
                    p.p2(),
                    p.p3(),
                    p.sum()
                )?;
            }
            writeln!(
                out,
                "gaps: sum {} each{}",
                s.d2.abs(),
                if s.primed { ", primed" } else { "" }
            )?;
            writeln!(
                out,
                "layout ({}), distinct pairs: {}",
                s.layout.label(),
                s.distinct_pairs
            )?;
        }
        None => writeln!(out, "no AP-pair structure: cells are not all squares in chain form")?,
    }
    Ok(())
}

fn cmd_pairs(json: bool, out: &mut Out, sum: u64) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct PairRow {
        a: u64,
        b: u64,
        c: u64,
        offsets: [u64; 3],
        lengths: [u64; 2],
        sum: String,
        kappa: Ratio,
    }
    let triples = find_square_ap_triples(sum);
    let pairs = pairs_for_sum(sum);
    if !json {
        writeln!(
            out,
            "{:>8} {:>8} {:>8} {:>10} {:>10} {:>10} {:>8} {:>8}  kappa",
            "a", "b", "c", "P1", "P2", "P3", "n1", "n2"
        )?;
    }
    for (t, p) in triples.iter().zip(&pairs) {
        let kappa = kappa_of(p);
        if json {
            json_line(
                out,
                &PairRow {
                    a: t.a,
                    b: t.b,
                    c: t.c,
                    offsets: [p.p1(), p.p2(), p.p3()],
                    lengths: [p.n1(), p.n2()],
                    sum: p.sum().to_string(),
                    kappa,
                },
            )?;
        } else {
            writeln!(
                out,
                "{:>8} {:>8} {:>8} {:>10} {:>10} {:>10} {:>8} {:>8}  {kappa}",
                t.a,
                t.b,
                t.c,
                p.p1(),
                p.p2(),
                p.p3(),
                p.n1(),
                p.n2()
            )?;
        }
    }
    Ok(())
}

fn cmd_triples(json: bool, out: &mut Out, sum: u64) -> Result<(), Failure> {
    for t in find_square_ap_triples(sum) {
        if json {
            json_line(out, &t)?;
        } else {
            writeln!(out, "{}² {}² {}²", t.a, t.b, t.c)?;
        }
    }
    Ok(())
}

fn cmd_scan(json: bool, out: &mut Out, max_root: u64, min_reps: usize) -> Result<(), Failure> {
    let start = Instant::now();
    let records = scan_common_differences(max_root, min_reps);
    progress(
        &format!("scanned roots up to {max_root}: {} differences", records.len()),
        start,
    );
    for rec in &records {
        if json {
            json_line(out, rec)?;
        } else {
            let triples: Vec<String> = rec.pairs.iter().map(|t| format!("({},{},{})", t.a, t.b, t.c)).collect();
            writeln!(out, "{}: {}", rec.d1, triples.join(" "))?;
        }
    }
    Ok(())
}

fn cmd_hunt(json: bool, out: &mut Out, max_root: u64, near_misses: bool) -> Result<(), Failure> {
    let start = Instant::now();
    let report = hunt(max_root, near_misses);
    progress(&format!("hunted roots up to {max_root}"), start);
    if json {
        return json_line(out, &report);
    }
    writeln!(out, "max root        {}", report.max_root)?;
    writeln!(out, "differences     {}", report.records)?;
    writeln!(out, "subsets         {}", report.subsets)?;
    writeln!(out, "accepted        {}", report.accepted.len())?;
    writeln!(out, "not distinct    {}", report.not_distinct)?;
    writeln!(out, "near misses     {}", report.near_miss_count)?;
    for c in &report.accepted {
        writeln!(out, "magic: d={} D2={:?} {:?}", c.d1, c.d2, c.grid)?;
    }
    for m in &report.near_misses {
        writeln!(
            out,
            "near miss d={} ({},{},{}) ({},{},{}) ({},{},{}) gaps {} {} constants {{{}}}",
            m.d1,
            m.t1.a,
            m.t1.b,
            m.t1.c,
            m.t2.a,
            m.t2.b,
            m.t2.c,
            m.t3.a,
            m.t3.b,
            m.t3.c,
            m.gap_x,
            m.gap_y,
            join(&m.constants)
        )?;
    }
    Ok(())
}

fn cmd_kappa(json: bool, out: &mut Out, alpha: &Ratio) -> Result<(), Failure> {
    let alpha = AlphaFraction::try_from(alpha.clone()).map_err(|e| Failure::Input(e.to_string()))?;
    let roots = kappa_roots_quadratic(&alpha);
    if json {
        #[derive(Serialize)]
        struct KappaOut<'a> {
            alpha: &'a AlphaFraction,
            discriminant: String,
            roots: &'a [apmagic::kappa::KappaRoot],
        }
        return json_line(
            out,
            &KappaOut {
                alpha: &alpha,
                discriminant: alpha.discriminant().to_string(),
                roots: &roots,
            },
        );
    }
    writeln!(
        out,
        "alpha = {}, discriminant = {}",
        alpha.as_ratio(),
        alpha.discriminant()
    )?;
    if roots.is_empty() {
        writeln!(out, "no rational kappa > 1")?;
    }
    for r in &roots {
        writeln!(
            out,
            "kappa = {}{}",
            r.value,
            if r.valid_offset { "" } else { " (first offset negative)" }
        )?;
    }
    Ok(())
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Inapplicable => "n/a",
    }
}

fn audit_line(r: &AuditReport) -> String {
    let t = |i: usize| format!("({},{},{})", r.triples[i].a, r.triples[i].b, r.triples[i].c);
    let failed: Vec<&str> = r
        .checks
        .iter()
        .chain([
            &r.gap_lemma.equality,
            &r.gap_lemma.decomposition,
            &r.identity.squared_form,
            &r.identity.expansion,
        ])
        .filter(|c| c.status == Status::Fails)
        .map(|c| c.id.as_str())
        .collect();
    format!(
        "d={} {} {} {} case={} gaps={} identity={} residual={} links={} fails=[{}]",
        r.d1,
        t(0),
        t(1),
        t(2),
        r.case.map_or("-", |c| c.label()),
        status_word(r.gap_lemma.equality.status),
        status_word(r.identity.squared_form.status),
        r.identity.residual.as_ref().map_or("-".to_owned(), Ratio::to_string),
        r.conclusion
            .iter()
            .map(|l| if l.holds { '1' } else { '0' })
            .collect::<String>(),
        failed.join(","),
    )
}

fn cmd_audit(json: bool, out: &mut Out, sum: Option<u64>, max_root: Option<u64>) -> Result<(), Failure> {
    let start = Instant::now();
    let reports = match (sum, max_root) {
        (Some(d), None) => audit_sum(d),
        (None, Some(r)) => audit_max_root(r),
        _ => return Err(Failure::Usage("give exactly one of --sum or --max-root".into())),
    };
    progress(&format!("audited {} instances", reports.len()), start);
    for r in &reports {
        if json {
            json_line(out, r)?;
        } else {
            writeln!(out, "{}", audit_line(r))?;
        }
    }
    Ok(())
}

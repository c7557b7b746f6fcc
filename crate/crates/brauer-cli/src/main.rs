//! Command-line frontend for the Brauer algebra subduction pipeline.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 semisimplicity guard, 4 ambiguous numerical rank.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use brauer_core::json::{format_f64, Value};
use brauer_core::ortho::{
    block_diagonalization_residual, fix_phases, freedom_count, full_sweep, gram, orthonormalize,
    signature_json, solution_json, SdcTable, Tolerances,
};
use brauer_core::solver::{
    assemble_for, solve, verify_bridge_kernels, verify_bridge_propagation,
    verify_singlet_structure,
};
use brauer_core::{
    Error, GridSignature, PermutationLattice, RationalParam, Real, RealGtModule, Shape,
    SubductionGrid,
};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_AMBIGUOUS: u8 = 4;

#[derive(Parser)]
#[command(
    name = "brauer",
    version,
    about = "Gelfand-Tzetlin representations and subduction coefficients of Brauer algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the permutation lattices of order f and a given diagram.
    Enum(EnumArgs),
    /// Build the generator matrices of an irreducible module.
    Rep(RepArgs),
    /// Build a subduction grid and export its graph.
    Graph(GraphArgs),
    /// Solve the subduction system and emit coefficient tables.
    Solve(SolveArgs),
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long)]
    f: usize,
    /// Diagram in bracket syntax, e.g. "[2,1]" or "[]".
    #[arg(long)]
    shape: Shape,
}

#[derive(Args)]
struct RepArgs {
    #[arg(long)]
    f: usize,
    #[arg(long)]
    shape: Shape,
    /// Algebra parameter as "p/q" or an integer.
    #[arg(long)]
    x: RationalParam,
    /// Verify the defining relations and print the residual table.
    #[arg(long)]
    check: bool,
    /// Residual tolerance for --check.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the module as JSON here instead of plain text on stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Permit integer x below f - 1 (non-semisimple regime).
    #[arg(long)]
    allow_nonsemisimple: bool,
}

#[derive(Args)]
struct SignatureArgs {
    #[arg(long)]
    f: usize,
    #[arg(long)]
    shape: Shape,
    #[arg(long)]
    f1: usize,
    /// Defaults to f - f1.
    #[arg(long)]
    f2: Option<usize>,
    #[arg(long)]
    shape1: Shape,
    #[arg(long)]
    shape2: Shape,
}

impl SignatureArgs {
    fn signature(&self) -> GridSignature {
        GridSignature {
            f: self.f,
            shape: self.shape.clone(),
            f1: self.f1,
            f2: self.f2.unwrap_or_else(|| self.f.saturating_sub(self.f1)),
            shape1: self.shape1.clone(),
            shape2: self.shape2.clone(),
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    signature: SignatureArgs,
    /// Write the DOT graph here.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Color nodes by their configuration in this layer.
    #[arg(long)]
    color_layer: Option<usize>,
    /// Write the grid (nodes, layers, edges, tags) as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    f: usize,
    #[arg(long)]
    shape: Shape,
    #[arg(long)]
    f1: usize,
    /// Defaults to f - f1.
    #[arg(long)]
    f2: Option<usize>,
    /// Required unless --sweep is given.
    #[arg(long)]
    shape1: Option<Shape>,
    #[arg(long)]
    shape2: Option<Shape>,
    #[arg(long)]
    x: RationalParam,
    /// Iterate over every (shape1, shape2) pair and check completeness.
    #[arg(long)]
    sweep: bool,
    /// Write the coefficient table (single pair) or the sweep summary here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the coefficient table as CSV here (single pair only).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Directory for per-pair table files in sweep mode.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-10)]
    tol_rank: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_residual: f64,
    #[arg(long, default_value_t = 1e-7)]
    tol_phase: f64,
    #[arg(long)]
    allow_nonsemisimple: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enum(args) => cmd_enum(args),
        Command::Rep(args) => cmd_rep(args),
        Command::Graph(args) => cmd_graph(args),
        Command::Solve(args) => cmd_solve(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(classify(&err))
        }
    }
}

fn classify(err: &Error) -> u8 {
    match err {
        Error::NonSemisimpleParameter { .. } => EXIT_GUARD,
        Error::BadSignature { .. }
        | Error::Parse { .. }
        | Error::InvalidShape { .. }
        | Error::IllegalLayerIndex { .. } => EXIT_USAGE,
        _ => EXIT_VERIFICATION,
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp{}",
        path.extension().and_then(|e| e.to_str()).unwrap_or(""),
        std::process::id()
    ));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

fn emit(path: &Path, bytes: &[u8], what: &str) -> Result<(), Error> {
    write_atomic(path, bytes).map_err(|e| Error::Parse {
        what: "output path",
        text: format!("{what} {}: {e}", path.display()),
    })?;
    println!("wrote {what} {}", path.display());
    Ok(())
}

fn cmd_enum(args: EnumArgs) -> Result<u8, Error> {
    let lattices = PermutationLattice::enumerate(args.f, &args.shape);
    for w in &lattices {
        println!("{w}");
    }
    let dimension = PermutationLattice::dimension(args.f, &args.shape);
    println!("count {}", lattices.len());
    println!("dimension {dimension}");
    Ok(if lattices.len() as u64 == dimension {
        0
    } else {
        EXIT_VERIFICATION
    })
}

fn cmd_rep(args: RepArgs) -> Result<u8, Error> {
    args.x.guard(args.f, args.allow_nonsemisimple)?;
    let module = RealGtModule::build(args.f, &args.shape, &args.x)?;
    if let Some(path) = &args.json {
        emit(path, module_json(&module).render().as_bytes(), "module")?;
    } else {
        print_module(&module);
    }
    if args.check {
        let report = module.check_relations();
        println!("{report}");
        if !report.passes(args.tol) {
            println!("FAIL max residual {:.3e} > {:.1e}", report.max_gated(), args.tol);
            return Ok(EXIT_VERIFICATION);
        }
        println!("PASS max residual {:.3e}", report.max_gated());
    }
    Ok(0)
}

fn print_module(module: &RealGtModule) {
    println!(
        "[{}, {}] at x = {}, dimension {}",
        module.f(),
        module.shape(),
        module.x(),
        module.dim()
    );
    println!("basis:");
    for (k, w) in module.basis().iter().enumerate() {
        println!("  {k}: {w}");
    }
    for i in 1..=module.num_generators() {
        for (name, mat) in [("g", module.g(i)), ("e", module.e(i))] {
            println!("{name}_{i}:");
            for r in 0..mat.nrows() {
                let row: Vec<String> = (0..mat.ncols()).map(|c| format_f64(mat[(r, c)])).collect();
                println!("  {}", row.join(" "));
            }
        }
    }
}

fn module_json(module: &RealGtModule) -> Value {
    let mut obj = Value::object();
    obj.push("f", Value::UInt(module.f() as u64));
    obj.push("shape", Value::Str(module.shape().to_string()));
    obj.push("x", Value::Str(module.x().to_string()));
    obj.push("dimension", Value::UInt(module.dim() as u64));
    obj.push(
        "basis",
        Value::strings(module.basis().iter().map(|w| w.to_string())),
    );
    let mut generators = Vec::new();
    for i in 1..=module.num_generators() {
        let mut gen = Value::object();
        gen.push("i", Value::UInt(i as u64));
        for (name, mat) in [("g", module.g(i)), ("e", module.e(i))] {
            let rows: Vec<Value> = (0..mat.nrows())
                .map(|r| Value::floats((0..mat.ncols()).map(|c| mat[(r, c)])))
                .collect();
            gen.push(name, Value::Array(rows));
        }
        generators.push(gen);
    }
    obj.push("generators", Value::Array(generators));
    obj
}

fn cmd_graph(args: GraphArgs) -> Result<u8, Error> {
    let grid = SubductionGrid::build(args.signature.signature())?;
    let mut summary = format!(
        "grid {} nodes {}",
        grid.signature(),
        grid.num_nodes()
    );
    for layer in grid.layers() {
        let h = grid
            .configuration_histogram(layer.i)
            .expect("layer exists");
        summary.push_str(&format!(
            "; i={} edges {} crossing {} hbridge {} vbridge {} singlet {}",
            layer.i,
            layer.edges.len(),
            h[0],
            h[1],
            h[2],
            h[3]
        ));
    }
    println!("{summary}");
    if let Some(path) = &args.dot {
        emit(
            path,
            grid.export_dot(args.color_layer).as_bytes(),
            "dot graph",
        )?;
    }
    if let Some(path) = &args.json {
        emit(path, grid_json(&grid).render().as_bytes(), "grid")?;
    }
    Ok(0)
}

fn grid_json(grid: &SubductionGrid) -> Value {
    let mut obj = Value::object();
    obj.push("signature", signature_json(grid.signature()));
    obj.push(
        "nodes",
        Value::strings(grid.nodes().iter().map(|n| n.to_string())),
    );
    let mut layers = Vec::new();
    for layer in grid.layers() {
        let mut l = Value::object();
        l.push("i", Value::UInt(layer.i as u64));
        l.push(
            "configurations",
            Value::strings(
                layer
                    .configurations
                    .iter()
                    .map(|c| c.label().to_string()),
            ),
        );
        l.push(
            "edges",
            Value::Array(
                layer
                    .edges
                    .iter()
                    .map(|&(a, b)| {
                        Value::Array(vec![Value::UInt(a as u64), Value::UInt(b as u64)])
                    })
                    .collect(),
            ),
        );
        layers.push(l);
    }
    obj.push("layers", Value::Array(layers));
    obj
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Error> {
    args.x.guard(args.f, args.allow_nonsemisimple)?;
    let tol = Tolerances {
        rank: args.tol_rank,
        residual: args.tol_residual,
        phase: args.tol_phase,
    };
    if args.sweep {
        return cmd_solve_sweep(&args, tol);
    }
    let (shape1, shape2) = match (&args.shape1, &args.shape2) {
        (Some(s1), Some(s2)) => (s1.clone(), s2.clone()),
        _ => {
            return Err(Error::BadSignature {
                detail: "--shape1 and --shape2 are required without --sweep".into(),
            })
        }
    };
    let signature = GridSignature {
        f: args.f,
        shape: args.shape.clone(),
        f1: args.f1,
        f2: args.f2.unwrap_or_else(|| args.f.saturating_sub(args.f1)),
        shape1,
        shape2,
    };
    let grid = SubductionGrid::build(signature)?;
    let system = assemble_for::<Real>(&grid, &args.x)?;
    let relation_residual = [system.module(), system.module1(), system.module2()]
        .iter()
        .map(|m| m.check_relations().max_gated())
        .fold(0.0f64, f64::max);
    let solution = solve(&system, tol.rank)?;
    println!(
        "grid {} nodes {} equations {} multiplicity {}",
        grid.signature(),
        grid.num_nodes(),
        system.omega().nrows(),
        solution.multiplicity
    );
    if solution.rank_ambiguous {
        let tail: Vec<String> = solution
            .singular_values
            .iter()
            .rev()
            .take(solution.multiplicity + 3)
            .map(|s| format!("{s:.3e}"))
            .collect();
        eprintln!(
            "ambiguous rank decision near threshold {:.3e}; singular value tail: {}",
            solution.rank_threshold,
            tail.join(" ")
        );
        return Ok(EXIT_AMBIGUOUS);
    }
    let mut ok = solution.max_residual <= tol.residual;
    println!("module relations residual {relation_residual:.3e}");
    println!("nullspace residual {:.3e}", solution.max_residual);
    ok &= relation_residual <= tol.residual;

    let kernels = verify_bridge_kernels(&system, &solution)?;
    let propagation = verify_bridge_propagation(&system, &solution)?;
    let singlets = verify_singlet_structure(&system, &solution)?;
    println!(
        "bridge kernels: residual {:.3e} over {} checks",
        kernels.max_residual, kernels.checks
    );
    println!(
        "bridge propagation: deviation {:.3e} over {} checks ({} skipped)",
        propagation.max_deviation, propagation.checks, propagation.skipped
    );
    println!(
        "singlet structure: intertwiner {:.3e}, kernel span {:.3e}, {} classes, {} dimension mismatches",
        singlets.max_intertwiner_residual,
        singlets.max_kernel_span_residual,
        singlets.classes,
        singlets.kernel_dimension_mismatches
    );
    ok &= kernels.max_residual <= tol.residual
        && propagation.max_deviation <= tol.residual
        && singlets.max_intertwiner_residual <= tol.residual
        && singlets.max_kernel_span_residual <= tol.residual
        && singlets.kernel_dimension_mismatches == 0;

    if solution.multiplicity > 0 {
        let d1 = system.module1().dim();
        let d2 = system.module2().dim();
        let gramian = gram(&solution, d1, d2, None)?;
        let mut chi = orthonormalize(&solution, &gramian);
        fix_phases(&mut chi, tol.phase)?;
        let table = SdcTable::new(&grid, &args.x, chi, d1, d2);
        let block = block_diagonalization_residual(&system, &table.values);
        println!(
            "table: unitarity residual {:.3e}, block diagonalization {:.3e}",
            table.unitarity_residual, block
        );
        let (phases, continuous) = freedom_count(solution.multiplicity as u64)?;
        println!("convention freedom: {phases} phase choices, {continuous} continuous");
        ok &= table.unitarity_residual <= tol.residual && block <= tol.residual;
        if let Some(path) = &args.json {
            let mut doc = table.to_json();
            doc.push("solution", solution_json(&grid, &args.x, &solution));
            emit(path, doc.render().as_bytes(), "table")?;
        }
        if let Some(path) = &args.csv {
            emit(path, table.to_csv(&grid).as_bytes(), "csv table")?;
        }
    } else {
        println!("multiplicity 0: no table");
        if let Some(path) = &args.json {
            let doc = solution_json(&grid, &args.x, &solution);
            emit(path, doc.render().as_bytes(), "solution")?;
        }
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { 0 } else { EXIT_VERIFICATION })
}

fn cmd_solve_sweep(args: &SolveArgs, tol: Tolerances) -> Result<u8, Error> {
    let f2 = args.f2.unwrap_or_else(|| args.f.saturating_sub(args.f1));
    let report = full_sweep::<Real>(args.f, &args.shape, args.f1, f2, &args.x, tol)?;
    let mut ok = true;
    for entry in &report.entries {
        let sig = entry.system.grid().signature();
        let mu = entry.solution.multiplicity;
        ok &= entry.solution.max_residual <= tol.residual;
        println!(
            "pair ({}, {}): multiplicity {} residual {:.3e}",
            sig.shape1, sig.shape2, mu, entry.solution.max_residual
        );
        if let (Some(table), Some(dir)) = (&entry.table, &args.out_dir) {
            std::fs::create_dir_all(dir).map_err(|e| Error::Parse {
                what: "output directory",
                text: format!("{}: {e}", dir.display()),
            })?;
            let base = format!(
                "sdc_f{}_{}_f1_{}_{}_f2_{}_{}",
                sig.f, sig.shape, sig.f1, sig.shape1, sig.f2, sig.shape2
            );
            emit(
                &dir.join(format!("{base}.json")),
                table.to_json().render().as_bytes(),
                "table",
            )?;
            emit(
                &dir.join(format!("{base}.csv")),
                table.to_csv(entry.system.grid()).as_bytes(),
                "csv table",
            )?;
        }
    }
    println!(
        "completeness: {} of {}",
        report.completeness_total, report.completeness_expected
    );
    println!(
        "assembled basis: orthogonality {:.3e}, block diagonalization {:.3e}",
        report.orthogonality_residual, report.block_diagonal_residual
    );
    if report.rank_ambiguous {
        eprintln!("ambiguous rank decision in at least one pair");
        return Ok(EXIT_AMBIGUOUS);
    }
    ok &= report.completeness_passes()
        && report.orthogonality_residual <= tol.residual
        && report.block_diagonal_residual <= tol.residual;
    if let Some(path) = &args.json {
        let mut doc = Value::object();
        doc.push("f", Value::UInt(args.f as u64));
        doc.push("shape", Value::Str(args.shape.to_string()));
        doc.push("f1", Value::UInt(args.f1 as u64));
        doc.push("f2", Value::UInt(f2 as u64));
        doc.push("x", Value::Str(args.x.to_string()));
        let mut pairs = Vec::new();
        for entry in &report.entries {
            let sig = entry.system.grid().signature();
            let mut p = Value::object();
            p.push("shape1", Value::Str(sig.shape1.to_string()));
            p.push("shape2", Value::Str(sig.shape2.to_string()));
            p.push(
                "multiplicity",
                Value::UInt(entry.solution.multiplicity as u64),
            );
            p.push("residual", Value::Float(entry.solution.max_residual));
            pairs.push(p);
        }
        doc.push("pairs", Value::Array(pairs));
        doc.push(
            "completeness_total",
            Value::UInt(report.completeness_total),
        );
        doc.push(
            "completeness_expected",
            Value::UInt(report.completeness_expected),
        );
        doc.push(
            "orthogonality_residual",
            Value::Float(report.orthogonality_residual),
        );
        doc.push(
            "block_diagonal_residual",
            Value::Float(report.block_diagonal_residual),
        );
        emit(path, doc.render().as_bytes(), "sweep summary")?;
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { 0 } else { EXIT_VERIFICATION })
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use oasym::enumerate::{enumerate_oa_with_budget, DEFAULT_ENUM_BUDGET};
use oasym::glp::{classify_half_combinations, HalfComboReport, DEFAULT_NODE_BUDGET};
use oasym::model::gram_projection;
use oasym::{
    build_m, design_from_freq, generators, search_glp, suite, Error, GeneratorKind, LevelEncoding,
    Permutation, SearchMethod,
};

// Stdout writes that end quietly when the reader goes away (e.g. `| head`).
macro_rules! println {
    () => { out(format_args!("\n")) };
    ($($a:tt)*) => { out(format_args!("{}\n", format_args!($($a)*))) };
}
macro_rules! print {
    ($($a:tt)*) => { out(format_args!($($a)*)) };
}

fn out(args: std::fmt::Arguments) {
    use std::io::{ErrorKind, Write};
    if let Err(e) = std::io::stdout().write_fmt(args) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing stdout: {e}");
        std::process::exit(1);
    }
}

#[derive(Parser)]
#[command(name = "oasym", version, about = "Orthogonal-array ILP models and their LP-relaxation symmetry groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Refine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Wreath,
    Strength2,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumGroup {
    None,
    Wreath,
    Strength2,
    /// The full symmetry group, recomputed by search.
    Glp,
}

#[derive(Subcommand)]
enum Command {
    /// Print the model matrix M for k factors and strength t.
    Model {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
    },
    /// Build an explicit generating set and report its group.
    Group {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Print only the group order.
        #[arg(long)]
        order: bool,
        /// Also test each generator against Row(M) for strength --t.
        #[arg(long, requires = "t")]
        check_rowspace: bool,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Compute the full LP-relaxation symmetry group from scratch.
    Glp {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "refine")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Classify every four-term half combination of main effects and interactions.
    Appendix {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate OA(N, k, 2, t) frequency vectors up to symmetry.
    Enum {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "none")]
        group: EnumGroup,
        /// Write each orbit representative as a design file into this directory.
        #[arg(long)]
        emit_designs: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET)]
        budget: u64,
    },
    /// Run the reproduction suite and print a pass/fail table.
    Check {
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Checks(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn kind_of(kind: Kind) -> GeneratorKind {
    match kind {
        Kind::Wreath => GeneratorKind::Wreath,
        Kind::Strength2 => GeneratorKind::Strength2,
    }
}

fn cmd_model(k: usize, t: usize, json: bool) -> Result<(), Failure> {
    let m = build_m(k, t)?;
    if json {
        println!("{}", to_json(&m.to_doc()));
    } else {
        print!("{}", m.to_text());
    }
    Ok(())
}

#[derive(Serialize)]
struct GroupDoc {
    k: usize,
    kind: GeneratorKind,
    degree: usize,
    order: String,
    claimed_order: String,
    generators: Vec<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    preserves_rowspace: Option<Vec<bool>>,
}

fn cmd_group(k: usize, kind: Kind, order_only: bool, t: Option<usize>, json: bool) -> Result<(), Failure> {
    let set = generators(kind_of(kind), k)?;
    let order = oasym::group_order(&set.perms)?;
    if order_only {
        println!("{order}");
        return Ok(());
    }
    let preserves = match t {
        Some(t) => {
            let gram = gram_projection(k, t)?;
            Some(set.perms.iter().map(|g| gram.preserved_by(g)).collect::<Result<Vec<_>, _>>()?)
        }
        None => None,
    };
    let doc = GroupDoc {
        k,
        kind: set.kind,
        degree: set.degree(),
        order: order.to_string(),
        claimed_order: set.claimed_order.to_string(),
        generators: set.perms.clone(),
        preserves_rowspace: preserves,
    };
    if json {
        println!("{}", to_json(&doc));
        return Ok(());
    }
    println!("kind: {}", doc.kind);
    println!("degree: {}", doc.degree);
    println!("order: {}", doc.order);
    println!("claimed order: {}", doc.claimed_order);
    println!("generators:");
    for (i, g) in doc.generators.iter().enumerate() {
        match &doc.preserves_rowspace {
            Some(p) => println!("  {g}  preserves Row(M): {}", if p[i] { "yes" } else { "no" }),
            None => println!("  {g}"),
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GlpDoc {
    k: usize,
    t: usize,
    method: SearchMethod,
    order: String,
    node_count: u64,
    generators: Vec<Permutation>,
}

fn cmd_glp(k: usize, t: usize, method: Method, budget: u64, json: bool) -> Result<(), Failure> {
    let method = match method {
        Method::Brute => SearchMethod::Brute,
        Method::Refine => SearchMethod::Refine,
    };
    let r = search_glp(k, t, method, budget)?;
    let doc = GlpDoc {
        k,
        t,
        method: r.method,
        order: r.order.to_string(),
        node_count: r.node_count,
        generators: r.generators,
    };
    if json {
        println!("{}", to_json(&doc));
        return Ok(());
    }
    println!("order: {}", doc.order);
    println!("method: {}", doc.method);
    println!("nodes: {}", doc.node_count);
    println!("generators:");
    for g in &doc.generators {
        println!("  {g}");
    }
    Ok(())
}

fn sign_text(signs: &[i8; 4]) -> String {
    signs.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct AppendixRow {
    case: String,
    labels: Vec<Vec<usize>>,
    label_sets: usize,
    signs: [i8; 4],
    viable: bool,
}

#[derive(Serialize)]
struct AppendixSummary {
    k: usize,
    label_sets: usize,
    combinations: usize,
    viable: usize,
    viable_in_family: usize,
    viable_outside_family: usize,
    outside_cases: Vec<String>,
    sign_rule_holds: bool,
    minmax_rule_agrees: bool,
    only_family_viable: bool,
}

fn appendix_summary(r: &HalfComboReport) -> AppendixSummary {
    let mut outside: Vec<String> = r.viable_outside_family().map(|c| c.case_name()).collect();
    outside.sort();
    outside.dedup();
    AppendixSummary {
        k: r.k,
        label_sets: r.label_sets,
        combinations: r.combos,
        viable: r.viable.len(),
        viable_in_family: r.viable_in_family().count(),
        viable_outside_family: r.viable_outside_family().count(),
        outside_cases: outside,
        sign_rule_holds: r.family_sign_rule_holds(&r.family()),
        minmax_rule_agrees: r.rule_disagreements == 0,
        only_family_viable: r.only_family_viable(),
    }
}

fn cmd_appendix(k: usize, json: bool) -> Result<(), Failure> {
    let r = classify_half_combinations(k)?;
    let summary = appendix_summary(&r);
    if json {
        let rows: Vec<AppendixRow> = r
            .cases
            .iter()
            .flat_map(|c| {
                c.patterns.iter().map(move |(signs, viable)| AppendixRow {
                    case: c.name.clone(),
                    labels: c.labels.iter().map(|l| l.factors()).collect(),
                    label_sets: c.label_sets,
                    signs: *signs,
                    viable: *viable,
                })
            })
            .collect();
        #[derive(Serialize)]
        struct Doc {
            rows: Vec<AppendixRow>,
            summary: AppendixSummary,
        }
        println!("{}", to_json(&Doc { rows, summary }));
        return Ok(());
    }
    println!("{:<14} {:<9} viable", "labels", "signs");
    for c in &r.cases {
        for (signs, viable) in &c.patterns {
            println!("{:<14} {:<9} {}", c.name, sign_text(signs), if *viable { "yes" } else { "no" });
        }
    }
    let s = summary;
    println!(
        "summary: k={} label sets {}, combinations {}, viable {} ({} in family, {} outside{}); sign rule {}; min/max rule {}; viable set equals family: {}",
        s.k,
        s.label_sets,
        s.combinations,
        s.viable,
        s.viable_in_family,
        s.viable_outside_family,
        if s.outside_cases.is_empty() { String::new() } else { format!(": {}", s.outside_cases.join(" ")) },
        if s.sign_rule_holds { "holds" } else { "fails" },
        if s.minmax_rule_agrees { "agrees" } else { "disagrees" },
        if s.only_family_viable { "yes" } else { "no" },
    );
    Ok(())
}

fn cmd_enum(n: u64, k: usize, t: usize, group: EnumGroup, emit: Option<PathBuf>, budget: u64) -> Result<(), Failure> {
    let gens: Option<Vec<Permutation>> = match group {
        EnumGroup::None => None,
        EnumGroup::Wreath => Some(generators(GeneratorKind::Wreath, k)?.perms),
        EnumGroup::Strength2 => Some(generators(GeneratorKind::Strength2, k)?.perms),
        EnumGroup::Glp => {
            let method = if k <= oasym::glp::BRUTE_FORCE_MAX_K { SearchMethod::Brute } else { SearchMethod::Refine };
            Some(search_glp(k, t, method, DEFAULT_NODE_BUDGET)?.generators)
        }
    };
    let r = enumerate_oa_with_budget(n, k, t, gens.as_deref(), budget)?;
    if let Some(dir) = emit {
        fs::create_dir_all(&dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
        for (i, f) in r.orbit_representatives.iter().enumerate() {
            let path = dir.join(format!("oa_n{n}_k{k}_t{t}_{:03}.txt", i + 1));
            let text = design_from_freq(f)?.to_text(LevelEncoding::PlusMinus);
            fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        }
    }
    println!("{}", serde_json::to_string(&r.summary()).expect("serializable"));
    Ok(())
}

fn cmd_check(json: bool) -> Result<(), Failure> {
    let outcomes = suite::run_all();
    if json {
        println!("{}", to_json(&outcomes));
    } else {
        for o in &outcomes {
            println!("{:>2}  {}  {}: {}", o.id, if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        }
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| format!("{} ({})", o.id, o.name)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Model { k, t, json, .. } => cmd_model(k, t, json),
        Command::Group {
            k,
            kind,
            order,
            check_rowspace,
            t,
            json,
        } => cmd_group(k, kind, order, t.filter(|_| check_rowspace), json),
        Command::Glp { k, t, method, budget, json } => cmd_glp(k, t, method, budget, json),
        Command::Appendix { k, json } => cmd_appendix(k, json),
        Command::Enum {
            n,
            k,
            t,
            group,
            emit_designs,
            budget,
        } => cmd_enum(n, k, t, group, emit_designs, budget),
        Command::Check { json } => cmd_check(json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => 3,
                Error::Internal(_) => 1,
                _ => 2,
            })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks(failed)) => {
            eprintln!("failed checks: {}", failed.join(", "));
            ExitCode::from(1)
        }
    }
}

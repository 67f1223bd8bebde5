//! `homlab`: command-line front end for homomorphism and duality experiments.
//!
//! Exit status: 0 computed or holds, 1 property fails, 2 usage or input
//! error, 3 search budget or size cap exhausted.

mod job;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use homlab::approx::{is_t_approximation, quotient_approximation, theta_oracle};
use homlab::duality::{
    connectivity_check, dual_construct, ghrv_instance, minimize_family, verify_duality, ApproxStrategy,
    DualityInstance, Verdict,
};
use homlab::generators::{enumerate, odd_girth_criterion_experiment, GeneratorSpec};
use homlab::hom::{chromatic_number_with, core_with, for_each_hom, hom_count, is_core, HomSearchConfig, CHROMATIC_CAP, CORE_CAP};
use homlab::io::{self, Parsed};
use homlab::ops::{categorical_product, gaifman, incidence, subdivide};
use homlab::sparsity::{girth, grade, low_td_coloring, odd_girth, tree_depth, DepthParam, Measure};
use homlab::{Error, Graph, Homomorphism, Result, Structure, ToStructure};

use job::Job;
use report::{inline, Report};

#[derive(Parser)]
#[command(name = "homlab", version, about = "Homomorphisms, sparsity and restricted dualities on small structures")]
struct Cli {
    /// Search node budget per homomorphism search.
    #[arg(long, global = true, env = "HOMLAB_BUDGET")]
    budget: Option<u64>,
    /// Print one JSON object instead of key: value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a homomorphism between two inputs.
    Hom {
        source: String,
        target: String,
        /// Require an injective map.
        #[arg(long)]
        injective: bool,
        /// Count every homomorphism found by the search.
        #[arg(long)]
        all: bool,
    },
    /// Count homomorphisms by brute force.
    Count { source: String, target: String },
    /// Compute a core and a retraction onto it.
    Core {
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact chromatic number of a graph.
    Chromatic { input: String },
    /// Girth and odd girth of a graph.
    Girth { input: String },
    /// Exact tree-depth of a graph.
    Treedepth { input: String },
    /// Low tree-depth coloring with parameter t.
    Chit {
        input: String,
        #[arg(long)]
        t: usize,
    },
    /// Grade of a graph over its shallow topological minors.
    Grade {
        input: String,
        /// Depth p; paths of length up to 2p + 1 are allowed.
        #[arg(long)]
        depth: f64,
        /// One of omega, chi, avg_degree.
        #[arg(long, default_value = "omega")]
        measure: String,
        /// Largest minor order enumerated.
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
    /// Replace every edge by a path of length k + 1.
    Subdivide {
        input: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Categorical product of two inputs.
    Product {
        left: String,
        right: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gaifman graph of a structure.
    Gaifman {
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Incidence graph of a structure.
    Incidence {
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a duality over a generated sample.
    DualityVerify(DualityArgs),
    /// Minimize a verified family.
    DualityMinimize(DualityArgs),
    /// Build a dual of a connected family relative to a sample.
    DualConstruct(ConstructArgs),
    /// Quotient t-approximation.
    Approx {
        input: String,
        #[arg(long)]
        t: usize,
        /// Include the construction trace.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum-order t-approximation by exhaustive search.
    Theta {
        input: String,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 5)]
        max_order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a sample, e.g. all_graphs:max=4 or rhg:n=20,g=6,trials=100,seed=42.
    Generate {
        spec: String,
        /// Write one file per member into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Directed path against transitive tournament over all small digraphs.
    Ghrv {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Dual of an odd cycle and the odd-girth criterion over a sample.
    ExperimentOddgirth {
        #[arg(long)]
        universe: String,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value = "auto")]
        strategy: String,
    },
}

#[derive(Args)]
struct DualityArgs {
    /// Job file with family, dual, universe and budget lines.
    job: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    family: Vec<String>,
    #[arg(long)]
    dual: Option<String>,
    #[arg(long)]
    universe: Option<String>,
    /// Write a counterexample here when the check fails.
    #[arg(long)]
    counterexample_out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// Job file with family, universe, t and budget lines.
    job: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    family: Vec<String>,
    #[arg(long)]
    universe: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    /// auto, quotient, or oracle[:max_order].
    #[arg(long, default_value = "auto")]
    strategy: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(json));
            ExitCode::from(if report.failed() { 1 } else { 0 })
        }
        Err(e) => {
            let code = exit_code(&e);
            if json {
                println!("{}", serde_json::json!({ "error": e.to_string(), "exit": code }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_resource() {
        3
    } else if matches!(e, Error::Construction(_)) {
        1
    } else {
        2
    }
}

fn config(budget: Option<u64>) -> HomSearchConfig {
    budget.map_or_else(HomSearchConfig::default, HomSearchConfig::with_budget)
}

fn load(spec: &str) -> Result<Parsed> {
    io::load(spec)
}

fn load_structure(spec: &str) -> Result<Structure> {
    Ok(load(spec)?.into_structure())
}

fn load_graph(spec: &str) -> Result<Graph> {
    let s = load_structure(spec)?;
    s.as_graph()
        .ok_or_else(|| Error::Argument(format!("{spec} is not a simple undirected graph")))
}

fn emit(report: &mut Report, key: &str, s: &Structure, out: Option<&Path>) -> Result<()> {
    report.put("order", s.order());
    report.put("tuples", s.tuple_count());
    match out {
        Some(path) => {
            io::write_structure(path, s)?;
            report.put("out", path.display().to_string());
        }
        None => {
            report.put_structure(key, s);
        }
    }
    Ok(())
}

fn parse_strategy(s: &str) -> Result<ApproxStrategy> {
    match s {
        "auto" => Ok(ApproxStrategy::Auto),
        "quotient" => Ok(ApproxStrategy::Quotient),
        "oracle" => Ok(ApproxStrategy::Oracle { max_order: 5 }),
        other => match other.strip_prefix("oracle:").map(str::parse) {
            Some(Ok(max_order)) => Ok(ApproxStrategy::Oracle { max_order }),
            _ => Err(Error::Argument(format!("unknown strategy {other:?}"))),
        },
    }
}

fn put_verdict(report: &mut Report, v: &Verdict, cex_out: Option<&Path>) -> Result<()> {
    report.put("verdict", v.verdict_str());
    report.put("scope", v.scope.clone());
    report.put("checked", v.checked);
    if let Some(f) = v.family_avoids_dual {
        report.put("family_avoids_dual", f);
    }
    if let Some(d) = v.direction {
        report.put("direction", d.as_str());
    }
    if let Some(c) = &v.counterexample {
        report.put_structure("counterexample", c);
        if let Some(path) = cex_out {
            io::write_structure(path, c)?;
            report.put("counterexample_path", path.display().to_string());
        }
    }
    if let Some(w) = &v.witness {
        report.put("witness", w.to_string());
    }
    if let Some((a, b)) = &v.pair {
        report.put_structure("pair_first", a);
        report.put_structure("pair_second", b);
    }
    if !v.holds {
        report.fail();
    }
    Ok(())
}

fn duality_inputs(args: &DualityArgs, budget: Option<u64>) -> Result<(DualityInstance, GeneratorSpec, HomSearchConfig)> {
    let job = match &args.job {
        Some(path) => Job::load(path)?,
        None => Job::default(),
    };
    let family: Vec<String> = if args.family.is_empty() { job.family } else { args.family.clone() };
    if family.is_empty() {
        return Err(Error::Argument("no family given".into()));
    }
    let dual = args.dual.clone().or(job.dual).ok_or_else(|| Error::Argument("no dual given".into()))?;
    let universe = args
        .universe
        .clone()
        .or(job.universe)
        .ok_or_else(|| Error::Argument("no universe given".into()))?;
    let family = family.iter().map(|f| load_structure(f)).collect::<Result<Vec<_>>>()?;
    let inst = DualityInstance::new(family, load_structure(&dual)?)?;
    Ok((inst, universe.parse()?, config(budget.or(job.budget))))
}

fn run(cli: Cli) -> Result<Report> {
    let cfg = config(cli.budget);
    let mut report = Report::new();
    let r = &mut report;
    match cli.command {
        Command::Hom {
            source,
            target,
            injective,
            all,
        } => {
            let (a, b) = (load_structure(&source)?, load_structure(&target)?);
            let mut cfg = cfg;
            if injective {
                cfg = cfg.injective();
            }
            if all {
                cfg = cfg.enumerating();
            }
            let mut first: Option<Homomorphism> = None;
            let mut found = 0u64;
            let stats = for_each_hom(&a, &b, &cfg, |m| {
                found += 1;
                first.get_or_insert_with(|| Homomorphism::new(m.to_vec()));
                if all {
                    std::ops::ControlFlow::Continue(())
                } else {
                    std::ops::ControlFlow::Break(())
                }
            })?;
            match &first {
                Some(h) => r.put("hom", h.to_string()),
                None => r.put("hom", "none").fail(),
            };
            if all {
                r.put("count", found);
            }
            r.put("nodes", stats.nodes);
        }
        Command::Count { source, target } => {
            let n = hom_count(&load_structure(&source)?, &load_structure(&target)?)?;
            r.put("count", n.to_string());
        }
        Command::Core { input, out } => {
            let a = load_structure(&input)?;
            let c = core_with(&a, CORE_CAP, &cfg)?;
            r.put("input_order", a.order());
            r.put("core_order", c.core.order());
            r.put("is_core", is_core(&c.core, &cfg)?);
            r.put("embedding", c.embedding.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            r.put("retraction", c.retraction.to_string());
            match out {
                Some(path) => {
                    io::write_structure(&path, &c.core)?;
                    r.put("out", path.display().to_string());
                }
                None => {
                    r.put_structure("core", &c.core);
                }
            }
        }
        Command::Chromatic { input } => {
            let g = load_graph(&input)?;
            r.put("chi", chromatic_number_with(&g, CHROMATIC_CAP, &cfg)?);
        }
        Command::Girth { input } => {
            let g = load_graph(&input)?;
            r.put("girth", girth(&g).to_string());
            r.put("odd_girth", odd_girth(&g).to_string());
        }
        Command::Treedepth { input } => {
            r.put("td", tree_depth(&load_graph(&input)?)?);
        }
        Command::Chit { input, t } => {
            let g = load_graph(&input)?;
            let c = low_td_coloring(&g, t)?;
            r.put("t", t);
            r.put("chi_t", c.color_count);
            r.put("exact", g.order() <= homlab::sparsity::CHI_T_EXACT_CAP && t <= homlab::sparsity::CHI_T_MAX_T);
            r.put("coloring", c.colors.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        }
        Command::Grade {
            input,
            depth,
            measure,
            max_order,
        } => {
            let g = load_graph(&input)?;
            let m: Measure = measure.parse()?;
            let d = DepthParam::from_depth(depth)?;
            r.put("grade", grade(&g, d, m, max_order)?.to_string());
            r.put("measure", measure);
            r.put("max_order", max_order);
        }
        Command::Subdivide { input, k, out } => {
            let g = subdivide(&load_graph(&input)?, k)?;
            emit(r, "graph", &g.to_structure(), out.as_deref())?;
        }
        Command::Product { left, right, out } => {
            let p = categorical_product(&load_structure(&left)?, &load_structure(&right)?)?;
            emit(r, "product", &p, out.as_deref())?;
        }
        Command::Gaifman { input, out } => {
            let g = gaifman(&load_structure(&input)?);
            emit(r, "graph", &g.to_structure(), out.as_deref())?;
        }
        Command::Incidence { input, out } => {
            let g = incidence(&load_structure(&input)?);
            emit(r, "graph", &g.to_structure(), out.as_deref())?;
        }
        Command::DualityVerify(args) => {
            let (inst, spec, cfg) = duality_inputs(&args, cli.budget)?;
            let start = Instant::now();
            let sample = enumerate(&spec)?;
            let v = verify_duality(&inst, &sample, &cfg)?;
            r.put("family_size", inst.family.len());
            r.put("dual_order", inst.dual.order());
            put_verdict(r, &v, args.counterexample_out.as_deref())?;
            r.put("elapsed_ms", start.elapsed().as_millis() as u64);
        }
        Command::DualityMinimize(args) => {
            let (inst, spec, cfg) = duality_inputs(&args, cli.budget)?;
            let sample = enumerate(&spec)?;
            let min = minimize_family(&inst, &sample, &cfg)?;
            r.put("scope", sample.description());
            r.put("family_size", min.family.len());
            r.put("family", min.family.iter().map(inline).collect::<Vec<_>>());
            if sample.flags().addable || sample.flags().monotone {
                let v = connectivity_check(&min, &sample, &cfg)?;
                r.put("connectivity", v.verdict_str());
                if !v.holds {
                    r.put("direction", v.direction.map_or("unknown", |d| d.as_str()));
                    r.fail();
                }
            }
        }
        Command::DualConstruct(args) => {
            let job = match &args.job {
                Some(path) => Job::load(path)?,
                None => Job::default(),
            };
            let family: Vec<String> = if args.family.is_empty() { job.family } else { args.family.clone() };
            if family.is_empty() {
                return Err(Error::Argument("no family given".into()));
            }
            let universe = args.universe.or(job.universe).ok_or_else(|| Error::Argument("no universe given".into()))?;
            let t = args.t.or(job.t).ok_or_else(|| Error::Argument("no t given".into()))?;
            let cfg = config(cli.budget.or(job.budget));
            let family = family.iter().map(|f| load_structure(f)).collect::<Result<Vec<_>>>()?;
            let sample = enumerate(&universe.parse()?)?;
            let built = dual_construct(&family, &sample, t, parse_strategy(&args.strategy)?, &cfg)?;
            r.put("t", t);
            r.put("free_members", built.free_members);
            r.put("parts", built.parts.len());
            r.put("dual_order", built.dual.order());
            let core_order = if built.dual.order() <= CORE_CAP {
                core_with(&built.dual, CORE_CAP, &cfg)?.core.order().to_string()
            } else {
                "unknown".to_string()
            };
            r.put("dual_core_order", core_order);
            put_verdict(r, &built.verdict, None)?;
            match args.out {
                Some(path) => {
                    io::write_structure(&path, &built.dual)?;
                    r.put("out", path.display().to_string());
                }
                None => {
                    r.put_structure("dual", &built.dual);
                }
            }
        }
        Command::Approx { input, t, trace, out } => {
            let a = load_structure(&input)?;
            let (res, tr) = quotient_approximation(&a, t, &cfg)?;
            r.put("t", t);
            r.put("colors", tr.coloring.color_count);
            r.put("classes", tr.classes.len());
            r.put("forward", res.forward.to_string());
            let check = is_t_approximation(&a, &res.approx, t, &cfg)?;
            r.put("t_approximation", check.verdict_str());
            emit(r, "approx", &res.approx, out.as_deref())?;
            if trace {
                r.put("trace", tr.to_text().lines().map(str::to_string).collect::<Vec<_>>());
            }
        }
        Command::Theta { input, t, max_order, out } => {
            let a = load_structure(&input)?;
            r.put("t", t);
            r.put("max_order", max_order);
            match theta_oracle(&a, t, max_order, &cfg)?.found() {
                Some(res) => {
                    r.put("theta", res.approx.order());
                    r.put("forward", res.forward.to_string());
                    emit(r, "approx", &res.approx, out.as_deref())?;
                }
                None => {
                    r.put("theta", "none").fail();
                }
            }
        }
        Command::Generate { spec, out_dir } => {
            let spec: GeneratorSpec = spec.parse()?;
            let sample = enumerate(&spec)?;
            r.put("scope", sample.description());
            r.put("flags", sample.flags().to_string());
            r.put("count", sample.len());
            match out_dir {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
                    for (i, m) in sample.members().iter().enumerate() {
                        io::write_structure(&dir.join(format!("member_{i:04}.g")), m)?;
                    }
                    r.put("out_dir", dir.display().to_string());
                }
                None => {
                    r.put("member", sample.members().iter().map(inline).collect::<Vec<_>>());
                }
            }
        }
        Command::Ghrv { k, max_order } => {
            let inst = ghrv_instance(k)?;
            let sample = enumerate(&GeneratorSpec::all_digraphs(max_order))?;
            let v = verify_duality(&inst, &sample, &cfg)?;
            r.put("k", k);
            put_verdict(r, &v, None)?;
        }
        Command::ExperimentOddgirth {
            universe,
            g,
            t,
            strategy,
        } => {
            let sample = enumerate(&universe.parse()?)?;
            let e = odd_girth_criterion_experiment(&sample, g, t, parse_strategy(&strategy)?, &cfg)?;
            r.put("g", g);
            r.put("t", t);
            r.put("dual_order", e.dual.order());
            put_verdict(r, &e.verdict, None)?;
            r.put_structure("dual", &e.dual);
        }
    }
    Ok(report)
}

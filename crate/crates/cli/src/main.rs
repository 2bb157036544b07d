mod args;

use std::fs;
use std::io::{self, Read as _, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use kcuckoo::experiments::{rate_curve, read_rates, write_csv};
use kcuckoo::thresholds::{predict_mixed_core, small_kappa_closed_form};
use kcuckoo::{
    fit_sigmoid, from_hypergraph, matching_orient, mixed_threshold, orientation_threshold, peel,
    predict_core, rank_and_solve, run_sweep, sample_mixed, sample_regular, selfless_orient,
    DegreeSpec, Degrees, Error, Gf2System, Hypergraph, Method, Result, SweepConfig,
};

use args::{
    Cli, Command, CoreArgs, DegreeArgs, FitArgs, InstanceArgs, OrientArgs, OrientMethod, SweepArgs,
    ThresholdArgs, XorsatArgs,
};

const DECIMALS: usize = 10;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Threshold(a) => threshold(a, &mut out),
        Command::Core(a) => core(a, &mut out),
        Command::Orient(a) => orient(a, &mut out),
        Command::Xorsat(a) => xorsat(a, &mut out),
        Command::Sweep(a) => sweep(a, &mut out),
        Command::Fit(a) => fit(a, &mut out),
    };
    match result.and_then(|()| out.flush().map_err(Error::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 3 for numerical failures, 1 for I/O, 2 for everything the user can fix
/// by changing flags or inputs.
fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        2
    }
}

fn real(x: f64) -> String {
    format!("{x:.DECIMALS$}")
}

enum Choices {
    Fixed(u32),
    Mixed(DegreeSpec),
}

fn choices(d: &DegreeArgs) -> Result<Option<Choices>> {
    match (d.k, &d.spec) {
        (Some(k), _) => Ok(Some(Choices::Fixed(k))),
        (None, Some(json)) => Ok(Some(Choices::Mixed(DegreeSpec::from_json(json)?))),
        (None, None) => Ok(None),
    }
}

fn required_choices(d: &DegreeArgs) -> Result<Choices> {
    choices(d)?.ok_or_else(|| Error::Config("one of --k or --spec is required".into()))
}

fn threshold(a: ThresholdArgs, out: &mut impl Write) -> Result<()> {
    let result = match required_choices(&a.degrees)? {
        Choices::Fixed(k) => {
            writeln!(out, "k = {k}")?;
            orientation_threshold(k, a.ell)
        }
        Choices::Mixed(spec) => {
            let kappa = spec.mean();
            writeln!(out, "kappa = {}", real(kappa))?;
            if a.ell == 2 {
                if let Some(c) = small_kappa_closed_form(kappa) {
                    writeln!(out, "# informational: 0.5/(3 - kappa) = {}", real(c))?;
                }
            }
            mixed_threshold(&spec, a.ell)
        }
    };
    writeln!(out, "ell = {}", a.ell)?;
    let r = result?;
    writeln!(out, "c_star = {}", real(r.c_star))?;
    writeln!(out, "beta_star = {}", real(r.beta_star))?;
    writeln!(out, "c_threshold = {}", real(r.c_threshold))?;
    writeln!(out, "beta_threshold = {}", real(r.beta_threshold))?;
    Ok(())
}

/// The instance and, when it was sampled, the choices and load it came from.
struct Instance {
    graph: Hypergraph,
    source: Option<(Choices, f64)>,
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn instance(a: &InstanceArgs) -> Result<Instance> {
    if let Some(path) = &a.input {
        return Ok(Instance {
            graph: Hypergraph::from_text(&read_input(path)?)?,
            source: None,
        });
    }
    let choices = required_choices(&a.degrees)?;
    let n = match (a.n, a.c) {
        (Some(n), _) => n,
        (None, Some(c)) if c >= 0.0 && c.is_finite() => (c * a.m as f64).round() as usize,
        (None, Some(c)) => return Err(Error::Config(format!("load must be nonnegative, got {c}"))),
        (None, None) => return Err(Error::Config("one of --c or --n is required".into())),
    };
    let graph = match &choices {
        Choices::Fixed(k) => sample_regular(a.m, n, *k, a.seed)?,
        Choices::Mixed(spec) => sample_mixed(a.m, n, spec, a.seed)?,
    };
    if let Some(path) = &a.dump {
        fs::write(path, graph.to_text())?;
    }
    let load = n as f64 / a.m as f64;
    Ok(Instance {
        graph,
        source: Some((choices, load)),
    })
}

fn describe(out: &mut impl Write, g: &Hypergraph) -> Result<()> {
    writeln!(out, "nodes = {}", g.m())?;
    writeln!(out, "edges = {}", g.n())?;
    Ok(())
}

fn core(a: CoreArgs, out: &mut impl Write) -> Result<()> {
    let inst = instance(&a.instance)?;
    let g = &inst.graph;
    describe(out, g)?;
    let p = peel(g, a.ell);
    writeln!(out, "core_nodes = {}", p.stats.core_nodes)?;
    writeln!(out, "core_edges = {}", p.stats.core_edges)?;
    writeln!(out, "core_density = {}", real(p.stats.edge_density))?;
    writeln!(out, "rounds = {}", p.stats.rounds)?;
    if let Some((choices, load)) = &inst.source {
        let predicted = match choices {
            Choices::Fixed(k) => predict_core(*k, a.ell, *load),
            Choices::Mixed(spec) => predict_mixed_core(spec, a.ell, *load),
        };
        match predicted {
            Ok(p) => {
                writeln!(out, "predicted_node_fraction = {}", real(p.node_fraction))?;
                writeln!(out, "predicted_edge_fraction = {}", real(p.edge_fraction))?;
                writeln!(out, "predicted_density = {}", real(p.edge_density))?;
            }
            Err(Error::Subcritical { .. }) => writeln!(out, "predicted_node_fraction = 0")?,
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn orient(a: OrientArgs, out: &mut impl Write) -> Result<()> {
    let inst = instance(&a.instance)?;
    let g = &inst.graph;
    describe(out, g)?;
    let o = match a.method {
        OrientMethod::Selfless => selfless_orient(g, a.ell, a.instance.seed),
        OrientMethod::Matching => matching_orient(g, a.ell),
    };
    let status = match o.status {
        kcuckoo::Status::Success => "success".to_string(),
        kcuckoo::Status::Stuck { step } => format!("stuck at step {step}"),
        kcuckoo::Status::Infeasible { max_placed } => {
            format!("infeasible (at most {max_placed} placeable)")
        }
    };
    writeln!(out, "status = {status}")?;
    writeln!(out, "placed = {}", o.placed())?;
    if let Some(path) = &a.output {
        let mut text = String::new();
        for target in &o.assignment {
            match target {
                Some(v) => text.push_str(&format!("{v}\n")),
                None => text.push_str("-\n"),
            }
        }
        fs::write(path, text)?;
    }
    Ok(())
}

fn xorsat(a: XorsatArgs, out: &mut impl Write) -> Result<()> {
    // A file may hold either a system or a hypergraph.
    let system = match &a.instance.input {
        Some(path) => {
            let text = read_input(path)?;
            if text.trim_start().starts_with("p xor") {
                Gf2System::from_text(&text)?
            } else {
                from_hypergraph(&Hypergraph::from_text(&text)?, a.instance.seed)
            }
        }
        None => {
            let dump = a.instance.dump.clone();
            let args = InstanceArgs {
                dump: None,
                ..a.instance
            };
            let system = from_hypergraph(&instance(&args)?.graph, args.seed);
            if let Some(path) = dump {
                fs::write(path, system.to_text())?;
            }
            system
        }
    };
    writeln!(out, "variables = {}", system.variables())?;
    writeln!(out, "equations = {}", system.equations())?;
    let sol = rank_and_solve(&system);
    writeln!(out, "rank = {}", sol.rank)?;
    writeln!(
        out,
        "full_row_rank = {}",
        sol.full_row_rank(system.equations())
    )?;
    writeln!(out, "satisfiable = {}", sol.satisfiable)?;
    if let (Some(path), Some(w)) = (&a.output, &sol.witness) {
        let text: String = w.iter().map(|&b| if b { "1\n" } else { "0\n" }).collect();
        fs::write(path, text)?;
    }
    Ok(())
}

/// Bucket capacity ℓ fails at the threshold of the (ℓ+1)-core.
fn default_center(degrees: &Degrees, ell: u32) -> Result<f64> {
    let r = match degrees {
        Degrees::K(k) => orientation_threshold(*k, ell + 1)?,
        Degrees::Spec(spec) => mixed_threshold(spec, ell + 1)?,
    };
    Ok(r.c_threshold)
}

fn sweep_config(a: &SweepArgs) -> Result<SweepConfig> {
    let base: Option<SweepConfig> = match &a.config {
        Some(path) => Some(serde_json::from_str(&fs::read_to_string(path)?)?),
        None => None,
    };
    let degrees = match choices(&a.degrees)? {
        Some(Choices::Fixed(k)) => Some(Degrees::K(k)),
        Some(Choices::Mixed(spec)) => Some(Degrees::Spec(spec)),
        None => None,
    };
    let degrees = degrees
        .or_else(|| base.as_ref().map(|b| b.degrees.clone()))
        .ok_or_else(|| Error::Config("one of --k, --spec or --config is required".into()))?;
    let ell = a.ell.or(base.as_ref().map(|b| b.ell)).unwrap_or(1);
    let center = match a.center.or(base.as_ref().map(|b| b.center)) {
        Some(c) => c,
        None => default_center(&degrees, ell)?,
    };
    let m = a.m.or(base.as_ref().map(|b| b.m)).unwrap_or(10_000);
    let defaults = base.unwrap_or_else(|| SweepConfig::around(m, degrees.clone(), ell, center));
    let methods = match &a.methods {
        Some(names) => names
            .iter()
            .map(|s| s.trim().parse())
            .collect::<Result<Vec<Method>>>()?,
        None => defaults.methods.clone(),
    };
    let cfg = SweepConfig {
        m,
        degrees,
        ell,
        center,
        half_width: a.half_width.unwrap_or(defaults.half_width),
        step: a.step.unwrap_or(defaults.step),
        trials: a.trials.unwrap_or(defaults.trials),
        methods,
        master_seed: a.seed.unwrap_or(defaults.master_seed),
        jobs: a.jobs.unwrap_or(defaults.jobs),
        timing: a.timing || defaults.timing,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn sweep(a: SweepArgs, out: &mut impl Write) -> Result<()> {
    let cfg = sweep_config(&a)?;
    let records = run_sweep(&cfg)?;
    match &a.output {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            write_csv(&mut file, &records)?;
            file.flush()?;
        }
        None => write_csv(&mut *out, &records)?,
    }
    if a.fit {
        let fit = fit_sigmoid(&rate_curve(&records, cfg.methods[0]))?;
        writeln!(out, "{}", fit.to_json())?;
    }
    Ok(())
}

fn fit(a: FitArgs, out: &mut impl Write) -> Result<()> {
    let method: Method = a.method.parse()?;
    let points = read_rates(&read_input(&a.input)?, method)?;
    let fit = fit_sigmoid(&points)?;
    writeln!(out, "{}", fit.to_json())?;
    Ok(())
}

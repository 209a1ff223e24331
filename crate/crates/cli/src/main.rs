//! `gwgames`: outcome probabilities of games on multi-type Galton-Watson
//! trees from the command line.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gwgames::casestudies::{
    binary_to_spec, binary_verdict, poisson_report, poisson_to_spec, BinaryParams, PoissonParams, DEFAULT_GRID,
};
use gwgames::fixedpoint::{solve_outcomes, truncated_values, FirstMover, GameKind, IterOptions, OutcomeTable};
use gwgames::simulate::{
    label_vertices, monte_carlo, monte_carlo_all, sample_tree, McOptions, SampleOptions, DEFAULT_POPULATION_CAP,
};
use gwgames::theorems::{
    check_part1, check_part2, check_part3, continuity_probe, continuity_sweep, eew_esl_equivalence, membership,
    survival_criterion, ComparisonReport, Verdict, DEFAULT_ENUMERATION_CAP, SWEEP_EPSILONS,
};
use gwgames::{Error, ModelSpec, Result};

use report::{fmt9, join9, Report};

#[derive(Parser, Debug)]
#[command(name = "gwgames", version, about = "Win, lose and draw probabilities of games on Galton-Watson trees")]
struct Cli {
    /// Print the model as a spec file and exit.
    #[arg(long, global = true)]
    dump_spec: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve all six games by fixed-point iteration.
    Solve {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        iter: IterArgs,
    },
    /// Probabilities of being decided within a number of rounds.
    Truncate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        depth: usize,
    },
    /// Sample one tree and label its root in every game.
    Sample {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Root color, 1-indexed. Drawn from the root law when omitted.
        #[arg(long)]
        root_color: Option<usize>,
    },
    /// Monte Carlo estimates on sampled trees against the exact recursion.
    Montecarlo {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// All games when omitted.
        #[arg(long, value_enum)]
        game: Option<Game>,
        /// 1 or 2. Both when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        mover: Option<u8>,
        /// 1-indexed.
        #[arg(long, default_value_t = 1)]
        root_color: usize,
        #[arg(long, default_value_t = DEFAULT_POPULATION_CAP)]
        population_cap: f64,
    },
    /// The two-color binary-tree model.
    Binary(BinaryArgs),
    /// The two-color Poisson model.
    Poisson {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        pb: f64,
        #[arg(long)]
        qb: f64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Comparison inequalities between the games.
    Check {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        iter: IterArgs,
    },
    /// Spectral criterion for Escaper to survive.
    Survive {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Outcome changes under small perturbations of a table model.
    Probe {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probe at 1e-2, 1e-3 and 1e-4 and check that the changes shrink.
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Args, Debug)]
struct SpecArg {
    /// JSON spec file.
    #[arg(long = "spec")]
    path: PathBuf,
}

impl SpecArg {
    fn load(&self) -> Result<ModelSpec> {
        let text = std::fs::read_to_string(&self.path)
            .map_err(|e| Error::Parse(format!("{}: {e}", self.path.display())))?;
        ModelSpec::from_json(&text)
    }
}

#[derive(Args, Debug)]
struct IterArgs {
    #[arg(long, default_value_t = IterOptions::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = IterOptions::DEFAULT_MAX_ITER)]
    max_iter: usize,
}

impl IterArgs {
    fn options(&self) -> Result<IterOptions> {
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidArgument("--tol and --max-iter must be positive".into()));
        }
        Ok(IterOptions { tol: self.tol, max_iter: self.max_iter })
    }
}

#[derive(Args, Debug)]
struct BinaryArgs {
    #[arg(long, default_value_t = 0.0)]
    p0: f64,
    #[arg(long, default_value_t = 0.0)]
    pbb: f64,
    #[arg(long, default_value_t = 0.0)]
    prr: f64,
    #[arg(long, default_value_t = 0.0)]
    pbr: f64,
    #[arg(long, default_value_t = 0.0)]
    q0: f64,
    #[arg(long, default_value_t = 0.0)]
    qbb: f64,
    #[arg(long, default_value_t = 0.0)]
    qrr: f64,
    #[arg(long, default_value_t = 0.0)]
    qbr: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Game {
    Normal,
    Misere,
    Escape,
}

impl From<Game> for GameKind {
    fn from(g: Game) -> Self {
        match g {
            Game::Normal => GameKind::Normal,
            Game::Misere => GameKind::Misere,
            Game::Escape => GameKind::Escape,
        }
    }
}

fn mover_from(n: u8) -> FirstMover {
    if n == 1 {
        FirstMover::PlayerOne
    } else {
        FirstMover::PlayerTwo
    }
}

fn key(kind: GameKind, mover: FirstMover) -> String {
    format!("{}.p{}", kind.name(), mover.number())
}

/// What a command produced, and whether a reported check failed.
struct Outcome {
    report: Report,
    failed: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, failed: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.report.render());
            if out.failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Consistency(_) => 3,
                _ => 2,
            })
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("GWGAMES_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("GWGAMES_THREADS={value} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn model_of(command: &Command) -> Result<Option<ModelSpec>> {
    Ok(match command {
        Command::Solve { spec, .. }
        | Command::Truncate { spec, .. }
        | Command::Sample { spec, .. }
        | Command::Montecarlo { spec, .. }
        | Command::Check { spec, .. }
        | Command::Survive { spec, .. }
        | Command::Probe { spec, .. } => Some(spec.load()?),
        Command::Binary(a) => Some(binary_to_spec(&binary_params(a)?)?),
        Command::Poisson { lambda, pb, qb, .. } => Some(poisson_to_spec(&PoissonParams::new(*lambda, *pb, *qb)?)?),
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    if cli.dump_spec {
        let spec = model_of(&cli.command)?.expect("every command has a model");
        return Ok(Report::raw(spec.to_json()).into());
    }
    match &cli.command {
        Command::Solve { spec, iter } => solve(&spec.load()?, iter.options()?).map(Into::into),
        Command::Truncate { spec, depth } => Ok(truncate(&spec.load()?, *depth).into()),
        Command::Sample { spec, depth, seed, root_color } => {
            sample(&spec.load()?, *depth, *seed, *root_color).map(Into::into)
        }
        Command::Montecarlo { spec, depth, samples, seed, game, mover, root_color, population_cap } => {
            let model = spec.load()?;
            let root = color_index(*root_color, model.num_colors())?;
            let opts = McOptions { root_color: root, depth: *depth, samples: *samples, seed: *seed, population_cap: *population_cap };
            montecarlo(&model, opts, game.map(Into::into), mover.map(mover_from)).map(Into::into)
        }
        Command::Binary(a) => binary(a).map(Into::into),
        Command::Poisson { lambda, pb, qb, grid } => poisson(*lambda, *pb, *qb, *grid).map(Into::into),
        Command::Check { spec, iter } => check(&spec.load()?, iter.options()?),
        Command::Survive { spec, cap } => survive(&spec.load()?, *cap).map(Into::into),
        Command::Probe { spec, eps, trials, seed, sweep } => {
            probe(&spec.load()?, *eps, *trials, *seed, *sweep).map(Into::into)
        }
    }
}

fn color_index(one_based: usize, m: usize) -> Result<usize> {
    if one_based == 0 || one_based > m {
        return Err(Error::ColorOutOfRange { color: one_based, m });
    }
    Ok(one_based - 1)
}

fn outcome_rows(table: &OutcomeTable) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for g in table.games() {
        for j in 0..g.win.len() {
            rows.push(vec![
                g.kind.name().to_string(),
                g.mover.number().to_string(),
                (j + 1).to_string(),
                fmt9(g.win[j]),
                fmt9(g.lose[j]),
                fmt9(g.draw[j]),
            ]);
        }
    }
    rows
}

fn solve(spec: &ModelSpec, opts: IterOptions) -> Result<Report> {
    let table = solve_outcomes(spec, opts)?;
    let mut r = Report::new();
    r.set("colors", spec.num_colors()).set("converged", table.converged());
    for g in table.games() {
        let k = key(g.kind, g.mover);
        r.vector(format!("{k}.win"), &g.win)
            .vector(format!("{k}.lose"), &g.lose)
            .vector(format!("{k}.draw"), &g.draw)
            .set(format!("{k}.iterations"), g.iterations())
            .num(format!("{k}.last_delta"), g.last_delta());
    }
    r.line("Outcomes seen from the first mover, by root color.");
    r.table(&["game", "first", "color", "win", "lose", "draw"], &outcome_rows(&table));
    if !table.converged() {
        r.line("warning: some iteration hit --max-iter before reaching --tol");
    }
    Ok(r)
}

fn truncate(spec: &ModelSpec, depth: usize) -> Report {
    let tv = truncated_values(spec, depth);
    let mut r = Report::new();
    r.set("depth", depth);
    for i in 0..2 {
        r.vector(format!("nw{}", i + 1), &tv.nw[i]).vector(format!("nl{}", i + 1), &tv.nl[i]);
    }
    for i in 0..2 {
        r.vector(format!("mw{}", i + 1), &tv.mw[i]).vector(format!("ml{}", i + 1), &tv.ml[i]);
    }
    r.vector("esw", &tv.esw).vector("eel", &tv.eel);
    r.line(format!("Decided within {depth} rounds, by root color."));
    let mut rows = Vec::new();
    for (name, v) in [
        ("nw1", &tv.nw[0]),
        ("nl1", &tv.nl[0]),
        ("nw2", &tv.nw[1]),
        ("nl2", &tv.nl[1]),
        ("mw1", &tv.mw[0]),
        ("ml1", &tv.ml[0]),
        ("mw2", &tv.mw[1]),
        ("ml2", &tv.ml[1]),
        ("esw", &tv.esw),
        ("eel", &tv.eel),
    ] {
        rows.push(vec![name.to_string(), join9(v.as_slice())]);
    }
    r.table(&["value", "by color"], &rows);
    r
}

fn sample(spec: &ModelSpec, depth: usize, seed: u64, root_color: Option<usize>) -> Result<Report> {
    let root = root_color.map(|c| color_index(c, spec.num_colors())).transpose()?;
    let tree = sample_tree(spec, depth, seed, SampleOptions { root_color: root, ..SampleOptions::default() })?;
    let mut r = Report::new();
    r.set("vertices", tree.len()).set("depth", depth).set("root_color", tree.color(0) + 1);
    for kind in GameKind::ALL {
        for mover in FirstMover::ALL {
            let labels = label_vertices(&tree, kind, mover, spec.permissible());
            r.set(format!("root.{}", key(kind, mover)), labels[0].symbol());
        }
    }
    r.line("index parent depth color");
    r.line(tree.dump().trim_end());
    Ok(r)
}

fn montecarlo(
    spec: &ModelSpec,
    opts: McOptions,
    game: Option<GameKind>,
    mover: Option<FirstMover>,
) -> Result<Report> {
    let estimates = match (game, mover) {
        (Some(kind), Some(mover)) => vec![monte_carlo(spec, kind, mover, opts)?],
        _ => monte_carlo_all(spec, opts)?
            .into_iter()
            .filter(|e| game.map_or(true, |g| g == e.kind) && mover.map_or(true, |m| m == e.mover))
            .collect(),
    };
    let tv = truncated_values(spec, opts.depth);
    let mut r = Report::new();
    r.set("depth", opts.depth)
        .set("samples", opts.samples)
        .set("seed", opts.seed)
        .set("root_color", opts.root_color + 1);
    let mut rows = Vec::new();
    for e in &estimates {
        let (w, l) = tv.win_lose(e.kind, e.mover);
        let (w, l) = (w[opts.root_color], l[opts.root_color]);
        let k = key(e.kind, e.mover);
        r.num(format!("{k}.win_hat"), e.win_hat())
            .num(format!("{k}.win_se"), e.win_se())
            .num(format!("{k}.lose_hat"), e.lose_hat())
            .num(format!("{k}.lose_se"), e.lose_se())
            .num(format!("{k}.draw_hat"), e.draw_hat())
            .num(format!("{k}.truncated_win"), w)
            .num(format!("{k}.truncated_lose"), l);
        rows.push(vec![
            e.kind.name().to_string(),
            e.mover.number().to_string(),
            format!("{} ± {}", fmt9(e.win_hat()), fmt9(e.win_se())),
            fmt9(w),
            format!("{} ± {}", fmt9(e.lose_hat()), fmt9(e.lose_se())),
            fmt9(l),
        ]);
    }
    r.line(format!(
        "Frequencies over {} trees of depth {} from color {}, with the exact finite-depth values.",
        opts.samples,
        opts.depth,
        opts.root_color + 1
    ));
    r.table(&["game", "first", "win", "exact win", "lose", "exact lose"], &rows);
    Ok(r)
}

fn binary_params(a: &BinaryArgs) -> Result<BinaryParams> {
    BinaryParams::new([a.p0, a.pbb, a.prr, a.pbr], [a.q0, a.qbb, a.qrr, a.qbr])
}

fn binary(a: &BinaryArgs) -> Result<Report> {
    let v = binary_verdict(&binary_params(a)?)?;
    let mut r = Report::new();
    r.set("draw", v.draw).num("max_deviation", v.max_deviation);
    r.line(format!("draw={} for all games/colors", v.draw));
    r.line(format!("solver agrees within {:.1e}", v.max_deviation));
    r.table(&["game", "first", "color", "win", "lose", "draw"], &outcome_rows(&v.outcomes));
    Ok(r)
}

fn poisson(lambda: f64, pb: f64, qb: f64, grid: usize) -> Result<Report> {
    let rep = poisson_report(&PoissonParams::new(lambda, pb, qb)?, grid)?;
    let c = &rep.conditions;
    let mut r = Report::new();
    r.set("cond13", c.cond13)
        .set("cond14", c.cond14)
        .set("cond15", c.cond15)
        .set("cond16", c.cond16)
        .set("cond17", c.cond17)
        .num("nd_1b", rep.nd_1b());
    let mut rows = Vec::new();
    for (row, s) in c.rows.iter().zip(&rep.scalar) {
        let color = if row.color == 0 { "b" } else { "r" };
        let k = format!("p{}{}", row.mover.number(), color);
        let roots: Vec<f64> = s.roots.iter().map(|x| x.value).collect();
        r.set(format!("{k}.roots"), report::join_exact(&roots)).num(format!("{k}.draw"), s.draw());
        rows.push(vec![
            row.mover.number().to_string(),
            color.to_string(),
            row.single_root.to_string(),
            row.normal.to_string(),
            row.misere.to_string(),
            row.escape.map_or("-".to_string(), |e| e.to_string()),
            join9(&roots),
            fmt9(s.draw()),
            if row.printed { "printed" } else { "derived" }.to_string(),
        ]);
    }
    for mover in FirstMover::ALL {
        r.vector(format!("normal.p{}.draw", mover.number()), &rep.outcomes.normal(mover).draw)
            .vector(format!("misere.p{}.draw", mover.number()), &rep.outcomes.misere(mover).draw);
    }
    r.vector("esl", rep.outcomes.esl());
    r.line(format!("cond13: {}; nd_1b = {}", c.cond13, fmt9(rep.nd_1b())));
    r.table(
        &["first", "color", "one root", "normal", "misere", "escape", "roots", "nd", "form"],
        &rows,
    );
    Ok(r)
}

fn comparison_rows(part: &str, rep: &ComparisonReport, rows: &mut Vec<Vec<String>>) {
    for c in &rep.checks {
        rows.push(vec![
            part.to_string(),
            c.name.to_string(),
            (c.color + 1).to_string(),
            fmt9(c.lhs),
            fmt9(c.rhs),
            format!("{:.3e}", c.margin),
            c.verdict.name().to_string(),
            if c.mirrored { "mirrored" } else { "" }.to_string(),
        ]);
    }
}

fn check(spec: &ModelSpec, opts: IterOptions) -> Result<Outcome> {
    let table = solve_outcomes(spec, opts)?;
    let parts = [
        ("part1", check_part1(spec, &table)),
        ("part2", check_part2(spec, &table)),
        ("part3", check_part3(spec, &table)),
    ];
    let mut r = Report::new();
    r.set("converged", table.converged());
    let mut rows = Vec::new();
    let mut failed = false;
    for (name, rep) in &parts {
        failed |= rep.verdict() == Verdict::Fail;
        r.set(format!("{name}.verdict"), rep.verdict().name())
            .num(format!("{name}.min_margin"), rep.min_margin())
            .set(format!("{name}.failures"), rep.failures().count());
        for (h, holds) in &rep.hypotheses {
            r.set(format!("{name}.hypothesis.{}", slug(h)), holds);
        }
        comparison_rows(name, rep, &mut rows);
    }
    r.line("Each row checks lhs <= rhs; margin = rhs - lhs.");
    r.table(&["part", "inequality", "color", "lhs", "rhs", "margin", "verdict", ""], &rows);
    Ok(Outcome { report: r, failed })
}

/// `"pgf convex (player 1)"` becomes `pgf_convex_player_1`.
fn slug(name: &str) -> String {
    name.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join("_")
}

fn survive(spec: &ModelSpec, cap: u128) -> Result<Report> {
    let c = survival_criterion(spec, cap)?;
    let table = solve_outcomes(spec, IterOptions::default())?;
    let eq = eew_esl_equivalence(spec, &table);
    let one_based = |v: &[usize]| {
        if v.is_empty() {
            return "none".to_string();
        }
        v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
    };
    let supported: Vec<usize> = (0..c.supported.len()).filter(|&j| c.supported[j]).collect();
    let mut r = Report::new();
    r.set("f", one_based(&c.f))
        .set("candidates", c.candidates)
        .num("rho", c.rho.value)
        .num("rho_lower", c.rho.lower)
        .num("rho_upper", c.rho.upper)
        .set("fires", c.fires())
        .set("supported", one_based(&supported))
        .vector("eew", table.eew())
        .vector("esl", table.esl())
        .set("equivalence", eq.verdict.name())
        .set("equivalence_strengthened", eq.strengthened.name());
    r.line(format!("rho = {}: {}", fmt9(c.rho.value), c.describe()));
    if c.fires() {
        r.line(format!("colors reaching a supercritical block: {}", one_based(&supported)));
    }
    r.line("M'' rows:");
    for row in &c.m2 {
        r.line(format!("  {}", join9(row)));
    }
    r.line(format!("eew = ({}); esl = ({})", join9(table.eew().as_slice()), join9(table.esl().as_slice())));
    r.line(format!(
        "all eew > 0 iff all esl > 0: {} (requiring also that Escaper is never surely stuck: {})",
        eq.verdict.name(),
        eq.strengthened.name()
    ));
    Ok(r)
}

fn probe(spec: &ModelSpec, eps: f64, trials: usize, seed: u64, sweep: bool) -> Result<Report> {
    let m = membership(spec);
    let mut r = Report::new();
    for (name, v) in [("d1", m.d1), ("d2", m.d2), ("d3", m.d3), ("d4", m.d4), ("c1", m.c1), ("c2", m.c2)] {
        r.set(format!("membership.{name}"), v);
    }
    let probes = if sweep {
        let s = continuity_sweep(spec, &SWEEP_EPSILONS, trials, seed)?;
        r.set("normal_draw_zero", s.normal_draw_zero)
            .set("misere_draw_zero", s.misere_draw_zero)
            .set("normal.verdict", s.normal.name())
            .set("misere.verdict", s.misere.name());
        s.probes
    } else {
        vec![continuity_probe(spec, eps, trials, seed)?]
    };
    let mut rows = Vec::new();
    for p in &probes {
        let k = format!("eps_{:e}", p.epsilon);
        let d = p.deltas;
        r.num(format!("{k}.max_d0"), p.max_d0)
            .num(format!("{k}.normal_win"), d.normal_win)
            .num(format!("{k}.normal_lose"), d.normal_lose)
            .num(format!("{k}.misere_win"), d.misere_win)
            .num(format!("{k}.misere_lose"), d.misere_lose)
            .num(format!("{k}.esw"), d.esw)
            .num(format!("{k}.eel"), d.eel);
        rows.push(
            [p.epsilon, p.max_d0, d.normal_win, d.normal_lose, d.misere_win, d.misere_lose, d.esw, d.eel]
                .iter()
                .map(|x| format!("{x:.3e}"))
                .collect(),
        );
    }
    r.line(format!("Largest outcome change over {trials} perturbations per size."));
    r.table(&["eps", "d0", "nw", "nl", "mw", "ml", "esw", "eel"], &rows);
    Ok(r)
}

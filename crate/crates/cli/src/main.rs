use clap::{Args, Parser, Subcommand, ValueEnum};
use fbf_walls::algebra::{normalize, parse_mixed, GroupElement, Kind, Word};
use fbf_walls::cover::{check_one_sided, check_tied, TieReading, Verdict};
use fbf_walls::cylinder::{check_square_relators, check_top_multiplicity, CylinderBall, KVertex};
use fbf_walls::geometry::*;
use fbf_walls::rep::{fixtures, validate_rep, BfhRep, RepInput};
use fbf_walls::walls::*;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const OK: u8 = 0;
const INVALID: u8 = 1;
const INCONCLUSIVE: u8 = 2;
const VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "fbf-walls", version, about = "Walls and cubulation probes for free-by-free semidirect products")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Debug)]
struct RunConfig {
    /// Representative in TOML.
    #[arg(long, global = true, conflicts_with = "fixture")]
    rep: Option<PathBuf>,
    /// Built-in representative instead of --rep.
    #[arg(long, global = true, value_enum)]
    fixture: Option<Fixture>,
    /// Vertical radius; defaults to 2, or 1 for distance, probe and cubulate.
    #[arg(long, global = true)]
    rho_v: Option<usize>,
    /// Horizontal radius; defaults to 6, or 2 for distance, probe and cubulate.
    #[arg(long, global = true)]
    rho_h: Option<usize>,
    /// Orbit word-length bound for cut sets.
    #[arg(short = 'L', long = "max-len", global = true, default_value_t = 6)]
    max_len: usize,
    /// Longest horizontal word in the properness probe.
    #[arg(long, global = true, default_value_t = 8)]
    probe_len: usize,
    /// Directory for JSON and DOT artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Fixture {
    Fp,
    F4,
    Alpha,
}

#[derive(Subcommand)]
enum Command {
    /// Check the representative: filtered, well-built, one-sided, tied.
    Validate,
    /// Build the cylinder ball and check its squares.
    Ball,
    /// Build diagonal walls and check the even-cut invariant.
    Walls {
        /// Edge label; all EoE labels when omitted.
        #[arg(long)]
        label: Option<String>,
    },
    /// Wall distance between two group elements, e.g. "e" and "x3 x3".
    Distance { from: String, to: String },
    /// Minimal wall distance over horizontal words of each length.
    Probe {
        /// Words per length beyond exhaustive enumeration.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Crossing family, dimension bound and the ball's cube complex.
    Cubulate,
    /// DOT of a wall in one horizontal tree.
    Render {
        #[arg(long)]
        label: String,
        /// Vertical word of the tree.
        #[arg(long, default_value = "e")]
        tree: String,
    },
}

struct Ctx {
    run: RunConfig,
    rho_v: usize,
    rho_h: usize,
    rep: BfhRep,
    artifacts: Vec<(String, String)>,
}

impl Ctx {
    fn region(&self) -> Region {
        Region { rho_v: self.rho_v, rho_h: self.rho_h }
    }

    fn header(&self) -> Value {
        json!({
            "rep": self.run.rep.as_ref().map(|p| p.display().to_string()),
            "fixture": self.run.fixture.map(|f| format!("{f:?}").to_lowercase()),
            "rho_v": self.rho_v,
            "rho_h": self.rho_h,
            "max_len": self.run.max_len,
            "seed": self.run.seed,
        })
    }

    fn emit(&mut self, name: &str, body: String) {
        self.artifacts.push((name.to_string(), body));
    }
}

fn load(run: &RunConfig) -> Result<RepInput, String> {
    let text = match (&run.rep, run.fixture) {
        (Some(p), _) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        (None, Some(Fixture::Fp)) => fixtures::FP_TOML.to_string(),
        (None, Some(Fixture::F4)) => fixtures::F4_TOML.to_string(),
        (None, Some(Fixture::Alpha)) => fixtures::ALPHA_TOML.to_string(),
        (None, None) => return Err("one of --rep or --fixture is required".into()),
    };
    RepInput::from_toml(&text).map_err(|e| e.to_string())
}

fn parse_element(rep: &BfhRep, s: &str) -> Result<GroupElement, String> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Ok(GroupElement::identity());
    }
    let letters = parse_mixed(s).map_err(|e| e.to_string())?;
    for l in &letters {
        let bound = if l.kind == Kind::Horizontal { rep.n() } else { rep.k() };
        if l.base as usize > bound {
            return Err(format!("letter {l} out of range in {s:?}"));
        }
    }
    Ok(normalize(&letters, &rep.sigma))
}

fn labels(rep: &BfhRep, label: Option<&str>) -> Result<Vec<usize>, String> {
    match label {
        None => Ok(rep.eoe_edges()),
        Some(l) => {
            let e = rep.edge_by_name(l).ok_or_else(|| format!("unknown edge {l:?}"))?;
            if !rep.is_eoe(e) {
                return Err(format!("{l} is not an EoE edge"));
            }
            Ok(vec![e])
        }
    }
}

fn validate(ctx: &mut Ctx, input: &RepInput) -> (Value, u8) {
    let report = validate_rep(input);
    let one = check_one_sided(&ctx.rep, ctx.rho_h);
    let tied = check_tied(&ctx.rep, ctx.rho_h, TieReading::PerGeodesic);
    let verdicts: Vec<Verdict> =
        one.entries.iter().map(|e| e.verdict).chain(tied.entries.iter().map(|e| e.verdict)).collect();
    let code = if !report.ok() || verdicts.contains(&Verdict::Fail) {
        INVALID
    } else if verdicts.contains(&Verdict::InconclusiveAtRadius) {
        INCONCLUSIVE
    } else {
        OK
    };
    let v = json!({
        "valid": report.ok(),
        "clauses": report.clauses(),
        "violations": report.violations,
        "one_sided": one,
        "tied": tied,
    });
    (v, code)
}

fn ball(ctx: &mut Ctx) -> Result<(Value, u8), String> {
    let ball = CylinderBall::build(&ctx.rep, ctx.rho_v, ctx.rho_h).map_err(|e| e.to_string())?;
    let sq = check_square_relators(&ctx.rep, &ball);
    let mult = check_top_multiplicity(&ctx.rep, &ball);
    let code = if sq.violations + mult.violations > 0 { VIOLATION } else { OK };
    let dot = ball.tree_dot(&ctx.rep, &Word::empty(), None);
    ctx.emit("ball_e.dot", dot);
    Ok((json!({ "stats": ball.stats(), "relators": sq, "multiplicity": mult }), code))
}

fn walls(ctx: &mut Ctx, label: Option<&str>) -> Result<(Value, u8), String> {
    let opts = WallOptions::default();
    let region = ctx.region();
    let ball = CylinderBall::build(&ctx.rep, region.rho_v, region.rho_h).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let mut code = OK;
    for e in labels(&ctx.rep, label)? {
        let rep = &ctx.rep;
        let w = build_fundamental(rep, e, &opts).map_err(|e| e.to_string())?;
        let cs = cuts(rep, &w, region, Region { rho_v: 0, rho_h: 0 }, ctx.run.max_len);
        let ev = check_even_cuts(rep, &ball, &cs);
        if !ev.passed() {
            code = VIOLATION;
        } else if cs.truncated && code == OK {
            code = INCONCLUSIVE;
        }
        let mut v = wall_json(rep, &w, Some(&cs));
        v["even_cuts"] = serde_json::to_value(&ev).unwrap();
        let name = rep.edge_name(e).to_string();
        let dot = wall_dot(rep, &ball, &cs, &Word::empty());
        ctx.emit(&format!("wall_{name}.dot"), dot);
        out.push(v);
    }
    Ok((json!({ "options": opts, "walls": out }), code))
}

fn family_config(ctx: &Ctx) -> FamilyConfig {
    let query = ctx.region();
    let mut cfg = FamilyConfig::new(query, ctx.run.max_len);
    cfg.cut_region = query.grow(1, 3);
    cfg
}

fn family_json(fam: &WallFamily) -> Value {
    json!({
        "query": fam.cfg.query,
        "cut_region": fam.cfg.cut_region,
        "margin": fam.cfg.margin,
        "max_len": fam.cfg.max_len,
        "walls": fam.walls.len(),
        "diagonal": fam.diagonal_count(),
        "inconsistent": fam.inconsistent(),
        "unknown_tests": fam.unknown_tests(),
    })
}

fn distance(ctx: &mut Ctx, from: &str, to: &str) -> Result<(Value, u8), String> {
    let rep = &ctx.rep;
    let (a, b) = (parse_element(rep, from)?, parse_element(rep, to)?);
    let (a, b) = (KVertex::of_element(rep, &a), KVertex::of_element(rep, &b));
    let mut cfg = family_config(ctx);
    let need = |x: &KVertex| (x.v.len(), x.x.g.len());
    let (av, ah) = need(&a);
    let (bv, bh) = need(&b);
    cfg.query = Region { rho_v: cfg.query.rho_v.max(av).max(bv), rho_h: cfg.query.rho_h.max(ah).max(bh) };
    cfg.cut_region = cfg.query.grow(1, 3);
    let fam = WallFamily::build(rep, cfg).map_err(|e| e.to_string())?;
    let d = wall_distance(&fam, &a, &b).map_err(|e| e.to_string())?;
    let code = if d.inconsistent {
        VIOLATION
    } else if d.unscoped > 0 {
        INCONCLUSIVE
    } else {
        OK
    };
    Ok((json!({ "from": a.display(rep), "to": b.display(rep), "family": family_json(&fam), "distance": d }), code))
}

fn probe(ctx: &mut Ctx, samples: usize) -> Result<(Value, u8), String> {
    let rep = &ctx.rep;
    let cfg = family_config(ctx);
    let fundamentals: Vec<Fundamental> = rep
        .eoe_edges()
        .into_iter()
        .map(|e| Fundamental::build(rep, e, &cfg))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let p = properness_probe(rep, &fundamentals, ctx.run.probe_len, 20_000, samples, ctx.run.seed);
    let code = if !p.bound_holds || !p.monotone { VIOLATION } else { OK };
    Ok((json!({ "cut_region": cfg.cut_region, "probe": p }), code))
}

fn cubulate_cmd(ctx: &mut Ctx) -> Result<(Value, u8), String> {
    let rep = &ctx.rep;
    let cfg = family_config(ctx);
    let fam = WallFamily::build(rep, cfg).map_err(|e| e.to_string())?;
    let m = crossing_matrix(&fam);
    let clique = max_crossing_family(&fam, &m);
    let bound = bound_check(rep, &cfg.opts).map_err(|e| e.to_string())?;
    let cc = cubulate(&fam, &m);
    let code = if cc.empty_squares > 0 { VIOLATION } else { OK };
    let v = json!({
        "family": family_json(&fam),
        "crossing": m,
        "clique": clique,
        "bound": bound,
        "complex": cc,
    });
    let dot = cube_dot(&cc);
    ctx.emit("cubes.dot", dot);
    Ok((v, code))
}

fn render(ctx: &mut Ctx, label: &str, tree: &str) -> Result<(Value, u8), String> {
    let rep = &ctx.rep;
    let e = labels(rep, Some(label))?[0];
    let w = if tree == "e" { Word::empty() } else { Word::parse(Kind::Vertical, tree).map_err(|e| e.to_string())? };
    let region = ctx.region();
    let ball = CylinderBall::build(rep, region.rho_v, region.rho_h).map_err(|e| e.to_string())?;
    if !ball.trees.contains(&w) {
        return Err(format!("tree {tree} outside the ball"));
    }
    let wall = build_fundamental(rep, e, &WallOptions::default()).map_err(|e| e.to_string())?;
    let cs = cuts(rep, &wall, region, Region { rho_v: 0, rho_h: 0 }, ctx.run.max_len);
    let dot = wall_dot(rep, &ball, &cs, &w);
    let in_tree = cs.horizontal.keys().filter(|h| h.v == w).count();
    let code = if cs.truncated { INCONCLUSIVE } else { OK };
    ctx.emit(&format!("wall_{label}_{}.dot", w.to_strings(Kind::Vertical).join("_")), dot);
    Ok((json!({ "label": label, "tree": tree, "horizontal_cuts": in_tree, "truncated": cs.truncated }), code))
}

fn run(cli: Cli) -> Result<u8, String> {
    let input = load(&cli.run)?;
    let geometric = matches!(cli.cmd, Command::Distance { .. } | Command::Probe { .. } | Command::Cubulate);
    let rho_v = cli.run.rho_v.unwrap_or(if geometric { 1 } else { 2 });
    let rho_h = cli.run.rho_h.unwrap_or(if geometric { 2 } else { 6 });
    if rho_v == 0 || rho_h == 0 || cli.run.max_len == 0 {
        return Err("radii and bounds must be positive".into());
    }
    let report = validate_rep(&input);
    let rep = match BfhRep::build(input.clone()) {
        Ok(r) => r,
        Err(e) => {
            let v = json!({ "valid": false, "clauses": report.clauses(), "violations": report.violations, "error": e.to_string() });
            say(&serde_json::to_string_pretty(&v).unwrap());
            return Ok(INVALID);
        }
    };
    let mut ctx = Ctx { run: cli.run, rho_v, rho_h, rep, artifacts: Vec::new() };
    let (name, (body, code)) = match &cli.cmd {
        Command::Validate => ("validate", validate(&mut ctx, &input)),
        Command::Ball => ("ball", ball(&mut ctx)?),
        Command::Walls { label } => ("walls", walls(&mut ctx, label.as_deref())?),
        Command::Distance { from, to } => ("distance", distance(&mut ctx, from, to)?),
        Command::Probe { samples } => ("probe", probe(&mut ctx, *samples)?),
        Command::Cubulate => ("cubulate", cubulate_cmd(&mut ctx)?),
        Command::Render { label, tree } => ("render", render(&mut ctx, label, tree)?),
    };
    let report = json!({ "command": name, "config": ctx.header(), "exit_code": code, "report": body });
    let text = serde_json::to_string_pretty(&report).unwrap();
    say(&text);
    if let Some(dir) = &ctx.run.out {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        let write = |f: &str, s: &str| std::fs::write(dir.join(f), s).map_err(|e| format!("{f}: {e}"));
        write(&format!("{name}.json"), &(text + "\n"))?;
        for (f, s) in &ctx.artifacts {
            write(f, s)?;
        }
    }
    Ok(code)
}

/// Prints to stdout, ignoring a closed pipe.
fn say(s: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INVALID)
        }
    }
}

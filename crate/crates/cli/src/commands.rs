use std::fs;
use std::path::Path;

use homeostasis::induction::{check_engines, homeostasis_pattern};
use homeostasis::odesim::continuation::tangent;
use homeostasis::odesim::tune::{block_determinants, tune_diagonal_crossing};
use homeostasis::odesim::{continue_equilibrium, detect_homeostasis, synthesize_ode, System, Tolerances};
use homeostasis::oracle::symbolic::DEFAULT_SYMBOLIC_CAP;
use homeostasis::oracle::{symbolic_factorization, verify};
use homeostasis::pattern_net::PatternNode;
use homeostasis::subnetworks::HomeostasisSubnetwork;
use homeostasis::{parse_network, Analysis, IONetwork};
use serde_json::{json, Map, Value};

use crate::args::{Cli, Command, Format};
use crate::error::{CliError, CliResult};
use crate::output::{braces, document, names, node_map, table};

/// Relative size below which a block determinant counts as vanished at an event.
const VANISHING: f64 = 1e-8;

pub struct Output {
    pub stdout: String,
    /// A check ran to completion and found a disagreement.
    pub failed: bool,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, failed: false }
    }
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Classify { net, format } => {
            allow("classify", *format, &[Format::Json, Format::Text])?;
            classify(&load(&net.net)?, *format).map(Output::ok)
        }
        Command::Subnets { net, format } => {
            allow("subnets", *format, &[Format::Json, Format::Text])?;
            subnets(&load(&net.net)?, *format).map(Output::ok)
        }
        Command::PatternNet { net, format } => {
            allow("pattern-net", *format, &[Format::Dot, Format::Json, Format::Text])?;
            pattern_net(&load(&net.net)?, *format).map(Output::ok)
        }
        Command::Patterns {
            net,
            format,
            check_engines,
        } => {
            allow("patterns", *format, &[Format::Text, Format::Json])?;
            patterns(&load(&net.net)?, *format, *check_engines)
        }
        Command::Verify { net, seeds, format } => {
            allow("verify", *format, &[Format::Text, Format::Json])?;
            verify_cmd(&load(&net.net)?, *seeds, *format)
        }
        Command::Simulate {
            net,
            seed,
            range,
            steps,
            tune,
            ratio,
            format,
            events,
        } => {
            allow("simulate", *format, &[Format::Csv, Format::Json])?;
            let range = parse_range(range)?;
            let sim = Simulation {
                seed: *seed,
                range,
                steps: *steps,
                tune: tune.as_deref(),
                ratio: *ratio,
            };
            simulate(&load(&net.net)?, &sim, *format, events.as_deref()).map(Output::ok)
        }
        Command::ExportDot { net, out_dir } => export_dot(&load(&net.net)?, out_dir).map(Output::ok),
    }
}

fn allow(command: &str, format: Format, allowed: &[Format]) -> CliResult<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let list: Vec<&str> = allowed.iter().map(|f| f.name()).collect();
        Err(CliError::Usage(format!(
            "{command} does not support --format {}; use one of {}",
            format.name(),
            list.join(", ")
        )))
    }
}

fn load(path: &Path) -> CliResult<Analysis> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed = parse_network(&text)?;
    for name in &parsed.dropped_self_arrows {
        eprintln!("warning: dropped self-arrow on `{name}`");
    }
    Ok(Analysis::new(parsed.network)?)
}

fn parse_range(text: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Usage(format!("--range expects `a:b` with a < b, got `{text}`"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if a < b {
        Ok((a, b))
    } else {
        Err(bad())
    }
}

fn classify(an: &Analysis, format: Format) -> CliResult<String> {
    let (net, cls) = (&an.net, &an.cls);
    let simple = names(net, cls.simple.iter().copied());
    let chain: Vec<String> = cls.super_simple.iter().map(|&v| net.name(v).to_string()).collect();
    let appendage = names(net, cls.appendage.iter().copied());
    let super_appendage = names(net, cls.super_appendage.iter().copied());
    if format == Format::Text {
        return Ok(format!(
            "simple           {}\nsuper-simple     {}\nappendage        {}\nsuper-appendage  {}\nio paths         {}\n",
            braces(&simple),
            chain.join(" < "),
            braces(&appendage),
            braces(&super_appendage),
            cls.io_paths.len()
        ));
    }
    let mut m = Map::new();
    m.insert("input".into(), json!(net.name(net.input())));
    m.insert("output".into(), json!(net.name(net.output())));
    m.insert("simple".into(), json!(simple));
    m.insert("super_simple".into(), json!(chain));
    m.insert("appendage".into(), json!(appendage));
    m.insert("super_appendage".into(), json!(super_appendage));
    m.insert("io_path_count".into(), json!(cls.io_paths.len()));
    Ok(document(m))
}

fn subnetwork_json(net: &IONetwork, k: &HomeostasisSubnetwork) -> Value {
    let block = k.block();
    let mut m = Map::new();
    m.insert("label".into(), json!(k.label(net)));
    m.insert("nodes".into(), json!(names(net, k.all_nodes())));
    m.insert(
        "block".into(),
        json!({
            "rows": names(net, block.row_nodes.iter().copied()),
            "cols": names(net, block.col_nodes.iter().copied()),
        }),
    );
    match k {
        HomeostasisSubnetwork::Structural(s) => {
            m.insert("kind".into(), json!("structural"));
            m.insert("rho_prev".into(), json!(net.name(s.rho_prev)));
            m.insert("rho_next".into(), json!(net.name(s.rho_next)));
            m.insert("simple_core".into(), json!(names(net, s.simple_core.iter().copied())));
            m.insert(
                "linked_appendage".into(),
                json!(names(net, s.linked_appendage.iter().copied())),
            );
        }
        HomeostasisSubnetwork::Appendage(_) => {
            m.insert("kind".into(), json!("appendage"));
        }
    }
    Value::Object(m)
}

fn subnets(an: &Analysis, format: Format) -> CliResult<String> {
    let net = &an.net;
    let subs = an.subnetworks();
    if format == Format::Text {
        let rows: Vec<Vec<String>> = subs
            .iter()
            .map(|k| {
                let b = k.block();
                let kind = match k {
                    HomeostasisSubnetwork::Structural(_) => "structural",
                    HomeostasisSubnetwork::Appendage(_) => "appendage",
                };
                vec![
                    k.label(net),
                    kind.to_string(),
                    braces(&names(net, k.all_nodes())),
                    braces(&names(net, b.row_nodes.iter().copied())),
                    braces(&names(net, b.col_nodes.iter().copied())),
                ]
            })
            .collect();
        return Ok(table(&["subnetwork", "kind", "nodes", "rows", "cols"], &rows));
    }
    let mut m = Map::new();
    m.insert(
        "subnetworks".into(),
        Value::Array(subs.iter().map(|k| subnetwork_json(net, k)).collect()),
    );
    Ok(document(m))
}

fn pattern_net(an: &Analysis, format: Format) -> CliResult<String> {
    let (net, p) = (&an.net, &an.pnet);
    if format == Format::Dot {
        return Ok(p.to_dot(net));
    }
    let nodes = p.nodes();
    let label = |q: PatternNode| p.label(net, q);
    let adj = p.adjacency();
    let arrows: Vec<(String, String)> = adj
        .iter()
        .enumerate()
        .flat_map(|(a, succ)| succ.iter().map(move |&b| (a, b)))
        .map(|(a, b)| (label(nodes[a]), label(nodes[b])))
        .collect();
    let bounds: Vec<(String, String, String)> = (0..p.components.len())
        .map(|i| {
            (
                label(PatternNode::Appendage(i)),
                label(PatternNode::from_position(p.vmax[i])),
                label(PatternNode::from_position(p.vmin[i])),
            )
        })
        .collect();
    if format == Format::Text {
        let chain: Vec<String> = p.backbone.iter().map(|&q| label(q)).collect();
        let mut out = format!("backbone  {}\n", chain.join(" -> "));
        for (i, (a, hi, lo)) in bounds.iter().enumerate() {
            let members = names(net, p.components[i].iter().copied());
            out.push_str(&format!("{a} = {}  vmax {hi}  vmin {lo}\n", braces(&members)));
        }
        for (a, b) in &arrows {
            out.push_str(&format!("{a} -> {b}\n"));
        }
        return Ok(out);
    }
    let node_docs: Vec<Value> = nodes
        .iter()
        .map(|&q| {
            let kind = match q {
                PatternNode::SuperSimple(_) => "super-simple",
                PatternNode::Backbone(_) => "backbone",
                PatternNode::Appendage(_) => "appendage",
            };
            json!({"id": label(q), "kind": kind, "members": names(net, p.contents(q))})
        })
        .collect();
    let mut vmax = Map::new();
    let mut vmin = Map::new();
    for (a, hi, lo) in bounds {
        vmax.insert(a.clone(), json!(hi));
        vmin.insert(a, json!(lo));
    }
    let mut m = Map::new();
    m.insert("nodes".into(), Value::Array(node_docs));
    m.insert(
        "arrows".into(),
        Value::Array(arrows.into_iter().map(|(a, b)| json!([a, b])).collect()),
    );
    m.insert("vmax".into(), Value::Object(vmax));
    m.insert("vmin".into(), Value::Object(vmin));
    Ok(document(m))
}

/// Block determinant descriptions: expanded polynomials when the network is small enough.
fn block_descriptions(an: &Analysis) -> CliResult<Vec<String>> {
    let net = &an.net;
    match symbolic_factorization(an, DEFAULT_SYMBOLIC_CAP) {
        Ok(f) => Ok(f.factors.iter().map(|(_, poly)| poly.render(net)).collect()),
        Err(homeostasis::Error::SymbolicCap { .. }) => Ok(an
            .subnetworks()
            .iter()
            .map(|k| format!("det B({})", k.label(net)))
            .collect()),
        Err(e) => Err(e.into()),
    }
}

fn patterns(an: &Analysis, format: Format, engines: bool) -> CliResult<Output> {
    let net = &an.net;
    let subs = an.subnetworks();
    let blocks = block_descriptions(an)?;
    let mut rows = Vec::new();
    for (k, block) in subs.iter().zip(&blocks) {
        let pattern = homeostasis_pattern(an, k)?;
        rows.push((k.label(net), block.clone(), names(net, pattern.nodes)));
    }
    let report = if engines { Some(check_engines(an)?) } else { None };
    let failed = report.as_ref().is_some_and(|r| !r.agree());
    if format == Format::Text {
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|(l, b, p)| vec![l.clone(), format!("{b} = 0"), braces(p)])
            .collect();
        let mut out = table(&["subnetwork", "homeostasis type", "pattern"], &cells);
        if let Some(r) = &report {
            out.push_str(&format!(
                "engines: {} checked, {} skipped (non-core repositioning), {} disagreements\n",
                r.checked,
                r.skipped.len(),
                r.disagreements.len()
            ));
            for (k, kappa, t, rep) in &r.disagreements {
                out.push_str(&format!("  {k} at {kappa}: theorem {t}, reposition {rep}\n"));
            }
        }
        return Ok(Output { stdout: out, failed });
    }
    let mut m = Map::new();
    m.insert(
        "patterns".into(),
        Value::Array(
            rows.into_iter()
                .map(|(l, b, p)| json!({"subnetwork": l, "type": b, "pattern": p}))
                .collect(),
        ),
    );
    if let Some(r) = report {
        m.insert(
            "engines".into(),
            json!({
                "checked": r.checked,
                "skipped": r.skipped.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                "disagreements": r.disagreements.iter().map(|(k, v, t, rep)| {
                    json!({"subnetwork": k, "node": v, "theorem": t, "reposition": rep})
                }).collect::<Vec<_>>(),
                "agree": r.agree(),
            }),
        );
    }
    Ok(Output {
        stdout: document(m),
        failed,
    })
}

fn verify_cmd(an: &Analysis, seeds: u64, format: Format) -> CliResult<Output> {
    let net = &an.net;
    let report = verify(an, seeds)?;
    let factorization = match symbolic_factorization(an, DEFAULT_SYMBOLIC_CAP) {
        Ok(f) => Some(f),
        Err(homeostasis::Error::SymbolicCap { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let failed = report.disagreements() > 0;
    let total = report.subnetworks.len();
    let summary = format!(
        "{}/{} subnetworks verified, {} seeds, {} disagreements",
        report.verified(),
        total,
        seeds,
        report.disagreements()
    );
    if format == Format::Text {
        let mut out = String::new();
        for s in &report.subnetworks {
            if s.passed() {
                out.push_str(&format!("{}: pass\n", s.label));
            } else {
                out.push_str(&format!("{}: FAIL on seeds {:?}\n", s.label, s.failed_seeds));
            }
        }
        if !report.product_failures.is_empty() {
            out.push_str(&format!("product identity FAIL on seeds {:?}\n", report.product_failures));
        }
        out.push_str(&summary);
        out.push('\n');
        if let Some(f) = &factorization {
            out.push_str(&format!("det H = {}\n", if f.sign < 0 { "-1" } else { "+1" }));
            for (k, poly) in &f.factors {
                out.push_str(&format!("  * [{}] for {}\n", poly.render(net), k.label(net)));
            }
        }
        return Ok(Output { stdout: out, failed });
    }
    let mut m = Map::new();
    m.insert("seeds".into(), json!(seeds));
    m.insert(
        "subnetworks".into(),
        Value::Array(
            report
                .subnetworks
                .iter()
                .map(|s| json!({"subnetwork": s.label, "passed": s.passed(), "failed_seeds": s.failed_seeds}))
                .collect(),
        ),
    );
    m.insert("product_failures".into(), json!(report.product_failures));
    m.insert("verified".into(), json!(report.verified()));
    m.insert("disagreements".into(), json!(report.disagreements()));
    m.insert("summary".into(), json!(summary));
    if let Some(f) = factorization {
        m.insert(
            "factorization".into(),
            json!({
                "sign": f.sign,
                "det_h": f.det_h.render(net),
                "factors": f.factors.iter().map(|(k, poly)| {
                    json!({"subnetwork": k.label(net), "factor": poly.render(net)})
                }).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(Output {
        stdout: document(m),
        failed,
    })
}

/// (I, x, x′, block determinants), nodes in name order.
type SampleRow = (f64, Vec<f64>, Vec<f64>, Vec<f64>);

struct Simulation<'a> {
    seed: u64,
    range: (f64, f64),
    steps: usize,
    tune: Option<&'a str>,
    ratio: f64,
}

fn simulate(an: &Analysis, sim: &Simulation, format: Format, events_path: Option<&Path>) -> CliResult<String> {
    let net = &an.net;
    let tol = Tolerances::default();
    let mut ode = synthesize_ode(net, sim.seed);
    if let Some(name) = sim.tune {
        if !(sim.ratio > 1.0) {
            return Err(CliError::Usage("--ratio must exceed 1".into()));
        }
        ode = tune_diagonal_crossing(&ode, net.id(name)?, sim.range, sim.ratio, &tol)?;
    }
    let branch = continue_equilibrium(&ode, sim.range, sim.steps, &tol)?;
    if let Some(at) = branch.truncated_at {
        eprintln!("warning: branch stopped at I = {at}, equilibrium is no longer hyperbolic");
    }
    let events = detect_homeostasis(&branch, &ode, &tol);
    let subs = an.subnetworks();
    let labels: Vec<String> = subs.iter().map(|k| k.label(net)).collect();
    let order = net.sorted(0..net.len());

    let mut event_docs = Vec::new();
    for e in &events {
        let dets = block_determinants(an, &ode.jacobian(&e.x, e.input));
        let scale = dets.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let vanishing: Vec<usize> = (0..dets.len()).filter(|&i| dets[i].abs() <= VANISHING * scale).collect();
        let predicted = match vanishing.as_slice() {
            [only] => Some(names(net, homeostasis_pattern(an, &subs[*only])?.nodes)),
            _ => None,
        };
        let pattern = names(net, e.empirical_pattern.iter().copied());
        event_docs.push(json!({
            "input": e.input,
            "kind": e.kind,
            "pattern": pattern,
            "x": node_map(net, |v| e.x[v]),
            "sensitivity": node_map(net, |v| e.sensitivity[v]),
            "det_h": e.det_h,
            "vanishing_blocks": vanishing.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
            "predicted_pattern": predicted,
            "consistent": predicted.as_ref() == Some(&pattern),
        }));
    }
    let mut header = Map::new();
    header.insert("seed".into(), json!(sim.seed));
    header.insert("range".into(), json!([sim.range.0, sim.range.1]));
    header.insert("steps".into(), json!(sim.steps));
    header.insert("tuned".into(), json!(sim.tune));
    header.insert("truncated_at".into(), json!(branch.truncated_at));
    header.insert("events".into(), Value::Array(event_docs));
    if let Some(path) = events_path {
        fs::write(path, document(header.clone())).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })?;
    }

    let rows: Vec<SampleRow> = branch
        .samples
        .iter()
        .map(|s| {
            let j = ode.jacobian(&s.x, s.input);
            let dx = tangent(&ode, &s.x, s.input);
            let x: Vec<f64> = order.iter().map(|&v| s.x[v]).collect();
            let dx: Vec<f64> = order
                .iter()
                .map(|&v| dx.as_ref().map_or(f64::NAN, |d| d[v]))
                .collect();
            (s.input, x, dx, block_determinants(an, &j))
        })
        .collect();

    if format == Format::Json {
        let samples: Vec<Value> = rows
            .iter()
            .map(|(i, x, dx, dets)| {
                let by_node = |vals: &[f64]| {
                    let mut m = Map::new();
                    for (k, &v) in order.iter().enumerate() {
                        m.insert(net.name(v).to_string(), json!(vals[k]));
                    }
                    Value::Object(m)
                };
                let mut d = Map::new();
                for (l, v) in labels.iter().zip(dets) {
                    d.insert(l.clone(), json!(v));
                }
                json!({"input": i, "x": by_node(x), "dx": by_node(dx), "det": d})
            })
            .collect();
        header.insert("samples".into(), Value::Array(samples));
        return Ok(document(header));
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["I".to_string()];
    head.extend(order.iter().map(|&v| format!("x[{}]", net.name(v))));
    head.extend(order.iter().map(|&v| format!("dx[{}]", net.name(v))));
    head.extend(labels.iter().map(|l| format!("det[{l}]")));
    w.write_record(&head).map_err(csv_error)?;
    for (i, x, dx, dets) in &rows {
        let mut rec = vec![i.to_string()];
        rec.extend(x.iter().chain(dx).chain(dets).map(f64::to_string));
        w.write_record(&rec).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Usage(format!("csv: {e}"))
}

fn export_dot(an: &Analysis, dir: &Path) -> CliResult<String> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut out = String::new();
    for (file, body) in [("network.dot", an.net.to_dot()), ("pattern.dot", an.pnet.to_dot(&an.net))] {
        let path = dir.join(file);
        fs::write(&path, body).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
        out.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(out)
}

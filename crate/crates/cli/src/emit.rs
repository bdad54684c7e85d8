//! Per-command serialization.
//!
//! CSV files start with a header. Correlation rows list the detector indices
//! in ascending order, then `raw`, `interp` (empty when absent) and `float`.
//! Floats are printed with 17 significant digits.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use qrw::{
    build_network, diagrams_for, enumerate_paths, expand, gk, joint_number_distribution,
    onefold_distribution, threefold_cube, transfer_matrix, twofold_matrix, zero_set,
    CorrelationValue, InputSide, StateExpansion,
};

use crate::{
    render_distribution, render_matrix, tuple_for, CliError, Command, Emission, Format, RunConfig,
    SCHEMA,
};

pub(crate) fn exact(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn float(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn csv_float(r: &BigRational) -> String {
    format!("{:.16e}", float(r))
}

fn cell(raw: &BigRational, interp: Option<&BigRational>) -> Value {
    json!({
        "raw": exact(raw),
        "interp": interp.map(exact),
        "float": float(raw),
    })
}

fn cv(v: &CorrelationValue) -> Value {
    cell(&v.raw, v.interpretation.as_ref())
}

fn csv_tail(raw: &BigRational, interp: Option<&BigRational>) -> String {
    format!(
        "{},{},{}",
        exact(raw),
        interp.map(exact).unwrap_or_default(),
        csv_float(raw)
    )
}

fn config_json(config: &RunConfig) -> Value {
    let mut c = serde_json::Map::new();
    c.insert("command".into(), json!(config.command.name()));
    c.insert("level".into(), json!(config.level));
    if config.command.needs_photons() {
        c.insert(
            "photons".into(),
            json!([config.photons.0, config.photons.1]),
        );
    }
    c.insert("tuple".into(), json!(config.tuple));
    if config.command == Command::Zeros {
        c.insert("order".into(), json!(config.order));
    }
    Value::Object(c)
}

fn document(config: &RunConfig, values: Value) -> String {
    let doc = json!({
        "schema": SCHEMA,
        "config": config_json(config),
        "values": values,
    });
    serde_json::to_string_pretty(&doc).expect("JSON values are always serializable") + "\n"
}

fn state_for(config: &RunConfig) -> Result<StateExpansion, CliError> {
    let network = build_network(config.level, &config.limits)?;
    let transfer = transfer_matrix(&network)?;
    Ok(expand(
        &transfer,
        config.photons.0,
        config.photons.1,
        &config.limits,
    )?)
}

fn single(body: String) -> Emission {
    Emission {
        body,
        attachments: Vec::new(),
    }
}

pub(crate) fn render(config: &RunConfig) -> Result<Emission, CliError> {
    match config.command {
        Command::Transfer => transfer(config).map(single),
        Command::State => state(config).map(single),
        Command::Onefold => onefold(config).map(single),
        Command::Twofold => twofold(config).map(single),
        Command::Threefold => threefold(config),
        Command::Kfold => kfold(config).map(single),
        Command::Numberdist => numberdist(config).map(single),
        Command::Paths => paths(config).map(single),
        Command::Diagrams => diagrams(config).map(single),
        Command::Zeros => zeros(config).map(single),
        Command::OracleCheck => unreachable!("handled by run"),
    }
}

fn transfer(config: &RunConfig) -> Result<String, CliError> {
    let tm = transfer_matrix(&build_network(config.level, &config.limits)?)?;
    let sides = [InputSide::Left, InputSide::Right];
    Ok(match config.format {
        Format::Json => {
            let values: Vec<Value> = sides
                .iter()
                .map(|&side| {
                    tm.column(side)
                        .iter()
                        .map(|a| {
                            let mut v = cell(&a.norm_sqr(), None);
                            v["amplitude"] = json!(a.to_string());
                            v
                        })
                        .collect()
                })
                .collect();
            document(config, Value::Array(values))
        }
        Format::Csv => {
            let mut out = String::from("side,detector,amplitude,raw,interp,float\n");
            for side in sides {
                for (k, a) in tm.column(side).iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        side.label(),
                        k + 1,
                        a,
                        csv_tail(&a.norm_sqr(), None)
                    );
                }
            }
            out
        }
        Format::Ascii => {
            let mut out = String::new();
            for side in sides {
                let _ = writeln!(out, "{} injection, |amplitude|^2:", side.label());
                let probs: Vec<BigRational> =
                    tm.column(side).iter().map(|a| a.norm_sqr()).collect();
                out.push_str(&render_distribution(&probs));
            }
            out
        }
    })
}

fn state(config: &RunConfig) -> Result<String, CliError> {
    let s = state_for(config)?;
    Ok(match config.format {
        Format::Json => {
            let values: Vec<Value> = s
                .iter()
                .map(|(fock, term)| {
                    let p = s.probability(fock);
                    let (re_sq, im_sq) = s.amplitude_sq_components(fock);
                    let mut v = cell(&p, None);
                    v["fock"] = json!(fock.occupations());
                    v["coefficient"] = json!(term.coefficient().to_string());
                    v["re_sq"] = json!(exact(&re_sq));
                    v["im_sq"] = json!(exact(&im_sq));
                    v
                })
                .collect();
            document(config, Value::Array(values))
        }
        Format::Csv => {
            let mut out = String::from("occupations,coefficient,re_sq,im_sq,raw,interp,float\n");
            for (fock, term) in s.iter() {
                let occ: Vec<String> = fock.occupations().iter().map(u32::to_string).collect();
                let (re_sq, im_sq) = s.amplitude_sq_components(fock);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    occ.join(";"),
                    term.coefficient(),
                    exact(&re_sq),
                    exact(&im_sq),
                    csv_tail(&s.probability(fock), None)
                );
            }
            out
        }
        Format::Ascii => {
            let mut out = String::new();
            for (fock, _) in s.iter() {
                let p = s.probability(fock);
                let _ = writeln!(out, "{fock}  {}  ({:.6})", exact(&p), float(&p));
            }
            out
        }
    })
}

fn onefold(config: &RunConfig) -> Result<String, CliError> {
    let g1 = onefold_distribution(&state_for(config)?);
    Ok(match config.format {
        Format::Json => document(config, Value::Array(g1.iter().map(cv).collect())),
        Format::Csv => {
            let mut out = String::from("detector,raw,interp,float\n");
            for (m, v) in g1.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{}",
                    m + 1,
                    csv_tail(&v.raw, v.interpretation.as_ref())
                );
            }
            out
        }
        Format::Ascii => render_distribution(&g1.iter().map(|v| v.raw.clone()).collect::<Vec<_>>()),
    })
}

fn twofold(config: &RunConfig) -> Result<String, CliError> {
    let g2 = twofold_matrix(&state_for(config)?);
    Ok(match config.format {
        Format::Json => {
            let values: Vec<Value> = g2
                .iter()
                .map(|row| Value::Array(row.iter().map(cv).collect()))
                .collect();
            document(config, Value::Array(values))
        }
        Format::Csv => {
            let mut out = String::from("d1,d2,raw,interp,float\n");
            for (m, row) in g2.iter().enumerate() {
                for (n, v) in row.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{},{},{}",
                        m + 1,
                        n + 1,
                        csv_tail(&v.raw, v.interpretation.as_ref())
                    );
                }
            }
            out
        }
        Format::Ascii => render_matrix(&raw_grid(&g2), 1),
    })
}

fn raw_grid(rows: &[Vec<CorrelationValue>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|v| v.raw.clone()).collect())
        .collect()
}

/// Slice of the cube with the third index fixed at `l` (0-based).
fn layer(cube: &[Vec<Vec<CorrelationValue>>], l: usize) -> Vec<Vec<CorrelationValue>> {
    cube.iter()
        .map(|plane| plane.iter().map(|line| line[l].clone()).collect())
        .collect()
}

fn layer_json(rows: &[Vec<CorrelationValue>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(cv).collect()))
            .collect(),
    )
}

fn threefold(config: &RunConfig) -> Result<Emission, CliError> {
    let cube = threefold_cube(&state_for(config)?);
    let count = cube.len();
    Ok(match config.format {
        Format::Json => {
            let values: Vec<Value> = cube.iter().map(|plane| layer_json(plane)).collect();
            let layers: Vec<Value> = (0..count)
                .map(|l| json!({ "third": l + 1, "values": layer_json(&layer(&cube, l)) }))
                .collect();
            let doc = json!({
                "schema": SCHEMA,
                "config": config_json(config),
                "values": values,
                "layers": layers,
            });
            let body = serde_json::to_string_pretty(&doc).unwrap() + "\n";
            let attachments = (0..count)
                .map(|l| {
                    let doc = json!({
                        "schema": SCHEMA,
                        "config": config_json(config),
                        "third": l + 1,
                        "values": layer_json(&layer(&cube, l)),
                    });
                    (
                        format!(".layer{}.json", l + 1),
                        serde_json::to_string_pretty(&doc).unwrap() + "\n",
                    )
                })
                .collect();
            Emission { body, attachments }
        }
        Format::Csv => {
            let mut out = String::from("d1,d2,d3,raw,interp,float\n");
            for (a, plane) in cube.iter().enumerate() {
                for (b, line) in plane.iter().enumerate() {
                    for (c, v) in line.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "{},{},{},{}",
                            a + 1,
                            b + 1,
                            c + 1,
                            csv_tail(&v.raw, v.interpretation.as_ref())
                        );
                    }
                }
            }
            single(out)
        }
        Format::Ascii => {
            let mut out = String::new();
            for l in 0..count {
                let _ = writeln!(out, "third detector = {}", l + 1);
                out.push_str(&render_matrix(&raw_grid(&layer(&cube, l)), 1));
            }
            single(out)
        }
    })
}

fn kfold(config: &RunConfig) -> Result<String, CliError> {
    let s = state_for(config)?;
    let tuple = tuple_for(config)?;
    let v = gk(&s, &tuple)?;
    Ok(match config.format {
        Format::Json => document(config, json!([cv(&v)])),
        Format::Csv => {
            let header: Vec<String> = (1..=tuple.order()).map(|i| format!("d{i}")).collect();
            let ds: Vec<String> = tuple.detectors().iter().map(usize::to_string).collect();
            format!(
                "{},raw,interp,float\n{},{}\n",
                header.join(","),
                ds.join(","),
                csv_tail(&v.raw, v.interpretation.as_ref())
            )
        }
        Format::Ascii => format!(
            "G{}{} = {}{}\n",
            tuple.order(),
            tuple,
            exact(&v.raw),
            v.interpretation
                .as_ref()
                .map(|i| format!("  (per-multiplicity {})", exact(i)))
                .unwrap_or_default()
        ),
    })
}

fn numberdist(config: &RunConfig) -> Result<String, CliError> {
    let s = state_for(config)?;
    let pair = config.tuple.clone().unwrap_or_default();
    let p = joint_number_distribution(&s, pair[0], pair[1])?;
    Ok(match config.format {
        Format::Json => {
            let values: Vec<Value> = p
                .iter()
                .map(|row| Value::Array(row.iter().map(|x| cell(x, None)).collect()))
                .collect();
            document(config, Value::Array(values))
        }
        Format::Csv => {
            let mut out = String::from("i,j,raw,interp,float\n");
            for (i, row) in p.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let _ = writeln!(out, "{i},{j},{}", csv_tail(x, None));
                }
            }
            out
        }
        Format::Ascii => render_matrix(&p, 0),
    })
}

fn paths(config: &RunConfig) -> Result<String, CliError> {
    let network = build_network(config.level, &config.limits)?;
    let mut all = enumerate_paths(&network, InputSide::Left, &config.limits)?;
    all.extend(enumerate_paths(&network, InputSide::Right, &config.limits)?);
    Ok(match config.format {
        Format::Json => {
            let values: Vec<Value> = all
                .iter()
                .map(|p| {
                    json!({
                        "input": p.input_side.label(),
                        "steps": p.step_string(),
                        "reflections": p.reflections,
                        "detector": p.terminal_detector,
                        "amplitude": p.amplitude().to_string(),
                    })
                })
                .collect();
            document(config, Value::Array(values))
        }
        Format::Csv | Format::Ascii => {
            let mut out = String::from("input,steps,reflections,detector,amplitude\n");
            for p in &all {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    p.input_side.label(),
                    p.step_string(),
                    p.reflections,
                    p.terminal_detector,
                    p.amplitude()
                );
            }
            out
        }
    })
}

fn diagrams(config: &RunConfig) -> Result<String, CliError> {
    let network = build_network(config.level, &config.limits)?;
    let tuple = tuple_for(config)?;
    let photons: Vec<InputSide> = std::iter::repeat_n(InputSide::Left, config.photons.0)
        .chain(std::iter::repeat_n(InputSide::Right, config.photons.1))
        .collect();
    let set = diagrams_for(&network, &photons, &tuple, &config.limits)?;
    Ok(match config.format {
        Format::Json => {
            let assignments: Vec<Value> = set
                .assignments
                .iter()
                .map(|a| {
                    let paths: Vec<Value> = a
                        .paths
                        .iter()
                        .map(|p| {
                            json!({
                                "input": p.input_side.label(),
                                "steps": p.step_string(),
                                "detector": p.terminal_detector,
                                "amplitude": p.amplitude().to_string(),
                            })
                        })
                        .collect();
                    json!({ "paths": paths, "amplitude": a.amplitude.to_string() })
                })
                .collect();
            document(
                config,
                json!({
                    "assignments": assignments,
                    "total_amplitude": set.total_amplitude().to_string(),
                }),
            )
        }
        Format::Csv | Format::Ascii => {
            let mut out = String::from(
                "assignment,photon,input,steps,detector,path_amplitude,joint_amplitude\n",
            );
            for (i, a) in set.assignments.iter().enumerate() {
                for (j, p) in a.paths.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        i + 1,
                        j + 1,
                        p.input_side.label(),
                        p.step_string(),
                        p.terminal_detector,
                        p.amplitude(),
                        a.amplitude
                    );
                }
            }
            out
        }
    })
}

fn zeros(config: &RunConfig) -> Result<String, CliError> {
    let s = state_for(config)?;
    let found = zero_set(&s, config.order, &config.limits)?;
    Ok(match config.format {
        Format::Json => {
            let values: Vec<Value> = found.iter().map(|t| json!(t.detectors())).collect();
            document(config, Value::Array(values))
        }
        Format::Csv | Format::Ascii => {
            let header: Vec<String> = (1..=config.order).map(|i| format!("d{i}")).collect();
            let mut out = header.join(",") + "\n";
            for t in &found {
                let ds: Vec<String> = t.detectors().iter().map(usize::to_string).collect();
                out.push_str(&ds.join(","));
                out.push('\n');
            }
            out
        }
    })
}

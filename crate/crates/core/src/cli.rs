//! Command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dot::to_dot;
use crate::embed::{Embedding, FaceId, Mode};
use crate::error::{Error, ErrorKind, Result};
use crate::fixture::{orientation_to_labels, Instance};
use crate::flips::{self, Distance};
use crate::oracle::{self, VerifyOptions};
use crate::orient::{self, difference, AlphaSpec, Orientation};
use crate::potential::{plane_potential, sphere_potential, PotentialMap};

#[derive(Debug, Parser)]
#[command(
    name = "alphaflip",
    version,
    about = "Flip distances between alpha-orientations of plane and sphere graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Instance file (JSON fixture schema).
    pub input: PathBuf,
    /// Override the mode stored in the file.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Pair {
    /// Name of the starting orientation in the instance file.
    #[arg(long)]
    pub from: String,
    /// Name of the target orientation in the instance file.
    #[arg(long)]
    pub to: String,
    /// Reference face for sphere potentials (defaults to the first face).
    #[arg(long)]
    pub ref_face: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the embedding, alpha and named orientations.
    Check(Common),
    /// List faces with their boundary walks.
    Faces(Common),
    /// Find an alpha-orientation for the instance's alpha.
    FindOrientation(Common),
    /// Face potential of the difference between two orientations.
    Potential {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Flip distance certificate.
    Distance {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        /// Tie-break seed for peeling the cycle system.
        #[arg(long)]
        peel_seed: Option<u64>,
    },
    /// Minimum flip sequence with its certificate.
    Sequence {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        peel_seed: Option<u64>,
        /// Replay the sequence flip by flip and compare with the target.
        #[arg(long)]
        replay: bool,
    },
    /// Enumerate all alpha-orientations and the flip graph between them.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Take alpha from this orientation instead of the instance's alpha.
        #[arg(long)]
        alpha_of: Option<String>,
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check every formula against the brute-force flip graph.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha_of: Option<String>,
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Graphviz rendering of the embedding or of one orientation.
    ExportDot {
        #[command(flatten)]
        common: Common,
        /// Orientation to draw; undirected when omitted.
        #[arg(long)]
        orientation: Option<String>,
        /// Annotate faces with the potential from this orientation to the drawn one.
        #[arg(long, requires = "orientation")]
        from: Option<String>,
    },
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    match s {
        "plane" => Ok(Mode::Plane),
        "sphere" => Ok(Mode::Sphere),
        _ => Err(format!("expected plane or sphere, found {s:?}")),
    }
}

/// What a command printed and the status it exits with.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, status: 0 }
    }
}

pub fn exit_status(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Domain => 1,
        ErrorKind::Input => 2,
        ErrorKind::Invariant => 3,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn load(c: &Common) -> Result<Instance> {
    Instance::from_path(&c.input, c.mode)
}

fn alpha_for(inst: &Instance, alpha_of: Option<&str>) -> Result<AlphaSpec> {
    match (alpha_of, &inst.alpha) {
        (Some(name), _) => Ok(AlphaSpec::of(inst.orientation(name)?, &inst.embedding)),
        (None, Some(a)) => Ok(a.clone()),
        (None, None) => match inst.orientations.values().next() {
            Some(d) => Ok(AlphaSpec::of(d, &inst.embedding)),
            None => Err(Error::Malformed(
                "instance has neither alpha nor orientations".into(),
            )),
        },
    }
}

fn reference(e: &Embedding, pair: &Pair) -> Result<Option<FaceId>> {
    match pair.ref_face {
        Some(id) => {
            let f = FaceId(id);
            e.face(f)?;
            Ok(Some(f))
        }
        None => Ok(None),
    }
}

fn potential_of(
    e: &Embedding,
    dp: &Orientation,
    d: &Orientation,
    r: Option<FaceId>,
) -> Result<PotentialMap> {
    let f = difference(dp, d, e)?;
    match e.mode() {
        Mode::Plane => plane_potential(&f, e),
        Mode::Sphere => sphere_potential(&f, e, r.unwrap_or(e.faces()[0].id)),
    }
}

fn potential_json(p: &PotentialMap) -> Value {
    Value::Object(p.iter().map(|(f, z)| (f.0.to_string(), json!(z))).collect())
}

fn no_dot(format: Format) -> Result<()> {
    match format {
        Format::Dot => Err(Error::Malformed(
            "dot output is only available for export-dot".into(),
        )),
        _ => Ok(()),
    }
}

fn orientation_text(e: &Embedding, d: &Orientation) -> String {
    orientation_to_labels(e, d)
        .iter()
        .map(|(k, [t, h])| format!("{k}: {t} -> {h}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Run a parsed invocation.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check(c) => check(c),
        Command::Faces(c) => {
            no_dot(c.format)?;
            let inst = load(c)?;
            let e = &inst.embedding;
            let faces: Vec<Value> = e
                .faces()
                .iter()
                .map(|f| {
                    json!({
                        "id": f.id,
                        "outer": Some(f.id) == e.outer_face(),
                        "vertices": f.boundary.iter().map(|&h| e.vertex_label(e.tail(h))).collect::<Vec<_>>(),
                        "edges": f.boundary.iter().map(|h| e.edge_label(h.edge())).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Outcome::ok(match c.format {
                Format::Text => faces
                    .iter()
                    .map(|f| {
                        format!(
                            "face {}{}: {}\n",
                            f["id"],
                            if f["outer"] == true { " (outer)" } else { "" },
                            f["vertices"]
                        )
                    })
                    .collect(),
                _ => pretty(&json!(faces)),
            }))
        }
        Command::FindOrientation(c) => {
            no_dot(c.format)?;
            let inst = load(c)?;
            let a = inst
                .alpha
                .as_ref()
                .ok_or_else(|| Error::Malformed("instance has no alpha".into()))?;
            let d = orient::find_alpha_orientation(&inst.embedding, a)?.ok_or(Error::Infeasible)?;
            Ok(Outcome::ok(match c.format {
                Format::Text => orientation_text(&inst.embedding, &d) + "\n",
                _ => pretty(&json!(orientation_to_labels(&inst.embedding, &d))),
            }))
        }
        Command::Potential { common, pair } => {
            let inst = load(common)?;
            let e = &inst.embedding;
            let (dp, d) = (inst.orientation(&pair.from)?, inst.orientation(&pair.to)?);
            let p = potential_of(e, dp, d, reference(e, pair)?)?;
            Ok(Outcome::ok(match common.format {
                Format::Json => pretty(&potential_json(&p)),
                Format::Text => p.iter().map(|(f, z)| format!("face {f}: {z}\n")).collect(),
                Format::Dot => to_dot(e, Some(d), Some(&p)),
            }))
        }
        Command::Distance {
            common,
            pair,
            peel_seed,
        } => distance(common, pair, *peel_seed, false),
        Command::Sequence {
            common,
            pair,
            peel_seed,
            replay,
        } => distance(common, pair, *peel_seed, *replay),
        Command::Enumerate {
            common,
            alpha_of,
            budget,
        } => {
            no_dot(common.format)?;
            let inst = load(common)?;
            let e = &inst.embedding;
            let a = alpha_for(&inst, alpha_of.as_deref())?;
            let u = oracle::enumerate_with_budget(e, &a, *budget)?;
            let g = oracle::build_flip_graph(&u, e)?;
            Ok(Outcome::ok(match common.format {
                Format::Text => {
                    let mut s = format!(
                        "{} alpha-orientations, {} flip arcs\n",
                        u.len(),
                        g.arc_count()
                    );
                    for (i, d) in u.orientations.iter().enumerate() {
                        let _ = writeln!(s, "#{i}: {}", orientation_text(e, d).replace('\n', ", "));
                    }
                    for (i, out) in g.arcs.iter().enumerate() {
                        for (j, f) in out {
                            let _ = writeln!(s, "#{i} -> #{j} via face {f}");
                        }
                    }
                    s
                }
                _ => {
                    let mut v = u.to_json(e);
                    v["flip_graph"] = g.to_json();
                    pretty(&v)
                }
            }))
        }
        Command::Verify {
            common,
            alpha_of,
            budget,
        } => {
            no_dot(common.format)?;
            let inst = load(common)?;
            let a = alpha_for(&inst, alpha_of.as_deref())?;
            let opts = VerifyOptions {
                budget: *budget,
                ..VerifyOptions::default()
            };
            let report = oracle::verify_instance(&inst.embedding, &a, &opts)?;
            let output = match common.format {
                Format::Text => report.to_text(),
                _ => pretty(&report.to_json()),
            };
            Ok(Outcome {
                output,
                status: if report.passed() {
                    0
                } else {
                    exit_status(ErrorKind::Invariant)
                },
            })
        }
        Command::ExportDot {
            common,
            orientation,
            from,
        } => {
            let inst = load(common)?;
            let e = &inst.embedding;
            let d = orientation
                .as_deref()
                .map(|n| inst.orientation(n))
                .transpose()?;
            let p = match (from, d) {
                (Some(name), Some(d)) => Some(potential_of(e, inst.orientation(name)?, d, None)?),
                _ => None,
            };
            Ok(Outcome::ok(to_dot(e, d, p.as_ref())))
        }
    }
}

fn check(c: &Common) -> Result<Outcome> {
    no_dot(c.format)?;
    let inst = load(c)?;
    let e = &inst.embedding;
    let alpha_feasible = match &inst.alpha {
        Some(a) => Some(orient::find_alpha_orientation(e, a)?.is_some()),
        None => None,
    };
    let mut orientations = BTreeMap::new();
    for (name, d) in &inst.orientations {
        let alpha_ok = match &inst.alpha {
            Some(a) => Some(orient::is_alpha_orientation(d, e, a)?),
            None => None,
        };
        orientations.insert(
            name.clone(),
            json!({
                "alpha_orientation": alpha_ok,
                "strongly_connected": orient::is_strongly_connected(d, e),
            }),
        );
    }
    let report = json!({
        "mode": e.mode(),
        "vertices": e.num_vertices(),
        "edges": e.num_edges(),
        "faces": e.num_faces(),
        "euler_characteristic": e.num_vertices() as i64 - e.num_edges() as i64 + e.num_faces() as i64,
        "outer_face": e.outer_face(),
        "alpha_feasible": alpha_feasible,
        "orientations": orientations,
    });
    let output = match c.format {
        Format::Text => {
            let mut s = format!(
                "{} embedding: V={} E={} F={}\n",
                e.mode(),
                e.num_vertices(),
                e.num_edges(),
                e.num_faces()
            );
            if let Some(f) = alpha_feasible {
                let _ = writeln!(s, "alpha feasible: {f}");
            }
            for (name, v) in &orientations {
                let _ = writeln!(
                    s,
                    "{name}: alpha-orientation {}, strongly connected {}",
                    v["alpha_orientation"], v["strongly_connected"]
                );
            }
            s
        }
        _ => pretty(&report),
    };
    Ok(Outcome::ok(output))
}

fn distance(common: &Common, pair: &Pair, seed: Option<u64>, replay: bool) -> Result<Outcome> {
    let inst = load(common)?;
    let e = &inst.embedding;
    let (dp, d) = (inst.orientation(&pair.from)?, inst.orientation(&pair.to)?);
    let cert = flips::certificate(dp, d, e, reference(e, pair)?, seed)?;
    let status = match cert.distance {
        Distance::Flips(_) => 0,
        Distance::Incomparable => exit_status(ErrorKind::Domain),
    };
    let mut v = cert.to_json(e);
    if replay {
        if let Some(seq) = &cert.sequence {
            let mut cur = dp.clone();
            for &g in &seq.faces {
                cur = flips::apply_flip(&cur, e, g)?;
            }
            let reached =
                serde_json::to_string(&orientation_to_labels(e, &cur)).expect("serializes");
            let target = serde_json::to_string(&orientation_to_labels(e, d)).expect("serializes");
            if reached != target {
                return Err(Error::Invariant(format!(
                    "replay reached {reached}, expected {target}"
                )));
            }
            v["replay"] = serde_json::from_str(&reached).expect("round trip");
        }
    }
    let output = match common.format {
        Format::Json => pretty(&v),
        Format::Dot => to_dot(e, Some(d), Some(&cert.potential)),
        Format::Text => {
            let mut s = match cert.distance {
                Distance::Flips(n) => format!("distance {n}\n"),
                Distance::Incomparable => "incomparable\n".to_string(),
            };
            if let Some(seq) = &cert.sequence {
                let faces: Vec<String> = seq.faces.iter().map(|f| f.to_string()).collect();
                let _ = writeln!(s, "sequence {}", faces.join(" "));
            }
            let _ = writeln!(s, "{} cycles", cert.cycles.len());
            if replay && cert.sequence.is_some() {
                s.push_str("replay reached the target\n");
            }
            s
        }
    };
    Ok(Outcome { output, status })
}

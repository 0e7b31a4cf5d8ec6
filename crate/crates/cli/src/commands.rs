use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use polymix::fixtures;
use polymix::geometry::{angle_table_csv, dihedral_angles};
use polymix::mesh::{parse_off, serialize_off, validate_surface, Location, PolyhedralSurface};
use polymix::partition::{
    enumerate_admissible, is_monochromatic, search_both_monochromatic, validate_partition, Family, GeneratorSpec,
    Partition, Side,
};
use polymix::rellich::{self, rellich_batch_with, rellich_csv};
use polymix::report::{fmt_f64, to_json};
use polymix::sector::{blowup_study, decade_truncations, estimate_ntmax, parse_angle, NtCone, SectorSolution};
use polymix::trace_energy::{
    extension_off, minimal_extension_energy_with, refinement_study_with, study_case, RefinedSurface, TraceData,
};
use polymix::{ArchRegion, Vec3};

use crate::args::{Cli, Command, FamilyArg, Format};

pub const DEFAULT_RELLICH_SAMPLES: usize = 1_000_000;
pub const DEFAULT_CONE_SAMPLES: usize = 100_000;

pub struct Outcome {
    pub report: String,
    /// A validation check failed; exit status 1 under `--strict`.
    pub failed: bool,
}

/// Report body in both formats.
struct Body {
    json: Value,
    csv: String,
    failed: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let body = match &cli.command {
        Command::Validate { mesh } => validate(mesh)?,
        Command::Angles { mesh } => angles(mesh)?,
        Command::CheckPartition { mesh, partition } => check_partition(cli, mesh, partition)?,
        Command::Enumerate { mesh, limit } => enumerate(mesh, side(cli), *limit)?,
        Command::Monochromatic { mesh } => monochromatic(mesh, side(cli))?,
        Command::Search { .. } => search(cli)?,
        Command::Rellich { .. } => rellich_cmd(cli)?,
        Command::SectorBlowup { .. } => sector(cli)?,
        Command::TraceEnergy { .. } => trace(cli)?,
        Command::Fixtures { dir } => write_fixtures(dir)?,
    };
    let config = resolved_config(cli)?;
    let report = match g.format {
        Format::Json => to_json(&json!({
            "tool": "polymix",
            "version": env!("CARGO_PKG_VERSION"),
            "command": cli.command.name(),
            "config": config,
            "result": body.json,
        }))?,
        Format::Csv => format!(
            "# polymix {} {}\n# config {}\n{}",
            env!("CARGO_PKG_VERSION"),
            cli.command.name(),
            serde_json::to_string(&sorted(config))?,
            body.csv
        ),
    };
    Ok(Outcome {
        report,
        failed: body.failed,
    })
}

fn side(cli: &Cli) -> Side {
    cli.global.side.map(Side::from).unwrap_or(Side::Interior)
}

fn samples(cli: &Cli) -> usize {
    cli.global.samples.unwrap_or(match cli.command {
        Command::SectorBlowup { .. } => DEFAULT_CONE_SAMPLES,
        _ => DEFAULT_RELLICH_SAMPLES,
    })
}

/// Global flags with defaults filled in, merged with the subcommand's own
/// arguments. Output location and thread count are left out: they do not
/// affect results.
fn resolved_config(cli: &Cli) -> Result<Value> {
    let mut global = serde_json::to_value(&cli.global)?;
    global["samples"] = json!(samples(cli));
    global["side"] = serde_json::to_value(side(cli))?;
    let mut config = serde_json::to_value(&cli.command)?;
    if let (Value::Object(c), Value::Object(g)) = (&mut config, global) {
        c.extend(g);
    }
    Ok(config)
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        other => other,
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

// ---------------------------------------------------------------------------
// Inputs

fn load_mesh(spec: &str) -> Result<PolyhedralSurface> {
    if let Some(name) = spec.strip_prefix("fixture:") {
        return fixtures::by_name(name)
            .ok_or_else(|| anyhow!("unknown fixture {name:?}; known: {}", fixtures::NAMES.join(", ")));
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("cannot read {spec}"))?;
    parse_off(&text).with_context(|| format!("cannot parse {spec}"))
}

/// A mesh that passes validation; anything else is an input error here.
fn load_valid_mesh(spec: &str) -> Result<PolyhedralSurface> {
    let s = load_mesh(spec)?;
    let d = validate_surface(&s);
    if !d.is_valid() {
        bail!(
            "{spec} is not a valid closed polyhedral surface ({} violations; run `polymix validate`)",
            d.violations.len()
        );
    }
    Ok(s)
}

fn load_partition(path: &Path) -> Result<Partition> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Partition::from_json(&text).with_context(|| format!("cannot parse partition {}", path.display()))
}

fn parse_levels(text: &str) -> Result<Vec<usize>> {
    let bad = || anyhow!("cannot parse levels {text:?}; use A..B or a comma list");
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

fn parse_numbers(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("cannot parse number {t:?}"))
        })
        .collect()
}

fn parse_data(text: &str) -> Result<TraceData> {
    Ok(match text {
        "x" => TraceData::coordinate(0),
        "y" => TraceData::coordinate(1),
        "z" => TraceData::coordinate(2),
        _ => match text.split_once(':') {
            Some(("const", c)) => TraceData::Constant(parse_numbers(c)?[0]),
            Some(("faces", v)) => TraceData::FaceConstants(parse_numbers(v)?),
            Some(("linear", v)) => {
                let n = parse_numbers(v)?;
                if n.len() != 4 {
                    bail!("linear data needs four numbers GX,GY,GZ,C");
                }
                TraceData::Linear {
                    gradient: Vec3::new(n[0], n[1], n[2]),
                    offset: n[3],
                }
            }
            _ => bail!("cannot parse data {text:?}; use x, y, z, const:C, faces:V0,V1,... or linear:GX,GY,GZ,C"),
        },
    })
}

// ---------------------------------------------------------------------------
// Subcommands

fn location_text(l: &Location) -> String {
    match l {
        Location::Vertex(v) => format!("vertex {v}"),
        Location::Edge([a, b]) => format!("edge {a}-{b}"),
        Location::Face(f) => format!("face {f}"),
        Location::Components(n) => format!("components {n}"),
        Location::Global => "global".to_string(),
    }
}

fn validate(mesh: &str) -> Result<Body> {
    let s = load_mesh(mesh)?;
    let d = validate_surface(&s);
    let mut csv = String::from("kind,location\n");
    for v in &d.violations {
        let kind = serde_json::to_value(v.kind)?;
        writeln!(
            csv,
            "{},{}",
            kind.as_str().unwrap_or_default(),
            location_text(&v.location)
        )?;
    }
    let mut json = to_value(&d)?;
    json["valid"] = json!(d.is_valid());
    Ok(Body {
        json,
        csv,
        failed: !d.is_valid(),
    })
}

fn angles(mesh: &str) -> Result<Body> {
    let s = load_valid_mesh(mesh)?;
    let a = dihedral_angles(&s)?;
    Ok(Body {
        json: json!({ "angles": to_value(&a)? }),
        csv: angle_table_csv(&a),
        failed: false,
    })
}

fn check_partition(cli: &Cli, mesh: &str, path: &Path) -> Result<Body> {
    let s = load_valid_mesh(mesh)?;
    let mut p = load_partition(path)?;
    if let Some(side) = cli.global.side {
        p.side = side.into();
    }
    let r = validate_partition(&s, &p)?;
    let mut csv = format!(
        "# admissible {} dirichlet_nonempty {}\nedge_id,v0,v1,face0,face1,angle\n",
        r.admissible, r.dirichlet_nonempty
    );
    for e in &r.violating_edges {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            e.edge,
            e.vertices[0],
            e.vertices[1],
            e.faces[0],
            e.faces[1],
            fmt_f64(e.angle)
        )?;
    }
    Ok(Body {
        json: json!({ "partition": to_value(&p)?, "report": to_value(&r)? }),
        csv,
        failed: !r.admissible,
    })
}

fn enumerate(mesh: &str, side: Side, limit: usize) -> Result<Body> {
    let s = load_valid_mesh(mesh)?;
    let e = enumerate_admissible(&s, side)?;
    let listed: Vec<Vec<usize>> = e
        .partitions()
        .map(|it| it.take(limit).map(|p| p.neumann_faces()).collect())
        .unwrap_or_default();
    let mut csv = String::from("index,neumann_faces\n");
    for (i, n) in listed.iter().enumerate() {
        let faces: Vec<String> = n.iter().map(|f| f.to_string()).collect();
        writeln!(csv, "{i},{}", faces.join(" "))?;
    }
    Ok(Body {
        json: json!({
            "side": side,
            "class_count": e.class_count,
            "count": e.count.to_string(),
            "enumerable": e.enumerable,
            "classes": e.quotient.classes,
            "class_adjacency": e.quotient.class_adjacency,
            "listed": listed.len(),
            "neumann_faces": listed,
        }),
        csv,
        failed: false,
    })
}

fn monochromatic(mesh: &str, side: Side) -> Result<Body> {
    let s = load_valid_mesh(mesh)?;
    let r = is_monochromatic(&s, side)?;
    let csv = format!(
        "side,monochromatic,class_count\n{},{},{}\n",
        serde_json::to_value(side)?.as_str().unwrap_or_default(),
        r.monochromatic,
        r.class_count
    );
    Ok(Body {
        json: to_value(&r)?,
        csv,
        failed: false,
    })
}

fn search(cli: &Cli) -> Result<Body> {
    let Command::Search {
        family,
        budget,
        min_points,
        max_points,
        levels,
        r_min,
        r_max,
        min_notches,
        max_notches,
    } = &cli.command
    else {
        unreachable!()
    };
    let family = match family {
        FamilyArg::Hull => {
            if min_points > max_points || *min_points < 4 {
                bail!("need 4 <= min-points <= max-points");
            }
            Family::ConvexHull {
                min_points: *min_points,
                max_points: *max_points,
            }
        }
        FamilyArg::Star => {
            if !(*r_min > 0.0 && r_min <= r_max) {
                bail!("need 0 < r-min <= r-max");
            }
            Family::StarShaped {
                levels: *levels,
                r_min: *r_min,
                r_max: *r_max,
            }
        }
        FamilyArg::Notched => {
            if min_notches > max_notches || *max_notches > 3 {
                bail!("need min-notches <= max-notches <= 3");
            }
            Family::NotchedBox {
                min_notches: *min_notches,
                max_notches: *max_notches,
            }
        }
    };
    let spec = GeneratorSpec {
        family,
        seed: cli.global.seed,
    };
    let r = search_both_monochromatic(&spec, *budget);
    let mut csv = String::from(
        "index,id,faces,interior_classes,exterior_classes,interior_monochromatic,exterior_monochromatic\n",
    );
    for m in &r.meshes {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            m.index,
            m.id,
            m.faces,
            m.interior_classes,
            m.exterior_classes,
            m.interior_monochromatic,
            m.exterior_monochromatic
        )?;
    }
    Ok(Body {
        json: to_value(&r)?,
        csv,
        failed: false,
    })
}

fn rellich_functions(list: &str) -> Result<Vec<rellich::HarmonicTestFunction>> {
    if let Some(d) = list.strip_prefix("deg") {
        let d: u32 = d.parse().map_err(|_| anyhow!("cannot parse degree in {list:?}"))?;
        return Ok(rellich::catalog_up_to(d));
    }
    list.split(',')
        .map(|n| {
            rellich::by_name(n.trim()).ok_or_else(|| {
                let names: Vec<&str> = rellich::catalog().iter().map(|u| u.name).collect();
                anyhow!("unknown test function {n:?}; known: {}", names.join(", "))
            })
        })
        .collect()
}

fn rellich_cmd(cli: &Cli) -> Result<Body> {
    let Command::Rellich {
        mesh,
        vertex,
        inner,
        outer,
        functions,
        estimator,
    } = &cli.command
    else {
        unreachable!()
    };
    let s = load_valid_mesh(mesh)?;
    let funcs = rellich_functions(functions)?;
    let arch = ArchRegion::new(&s, *vertex, *inner, *outer)?;
    let rows = rellich_batch_with(&arch, &funcs, samples(cli), cli.global.seed, (*estimator).into())?;
    let identity: Vec<_> = rows.iter().map(|(i, _)| i.clone()).collect();
    let estimate: Vec<_> = rows.iter().map(|(_, e)| e.clone()).collect();
    Ok(Body {
        json: json!({
            "identity": to_value(&identity)?,
            "estimate": to_value(&estimate)?,
        }),
        csv: rellich_csv(identity.iter().map(|r| (mesh.as_str(), r))),
        failed: false,
    })
}

fn sector(cli: &Cli) -> Result<Body> {
    let Command::SectorBlowup {
        alpha,
        eps,
        crease_distance,
        cone_aperture,
        truncation,
    } = &cli.command
    else {
        unreachable!()
    };
    let a = parse_angle(alpha).map_err(|e| anyhow!(e))?;
    let sol = SectorSolution::new(a)?;
    let eps = if eps.is_empty() {
        decade_truncations(6)
    } else {
        eps.clone()
    };
    let report = blowup_study(&sol, &eps)?;
    let mut json = to_value(&report)?;
    if let Some(d) = crease_distance {
        let cone = NtCone::new(*d, *cone_aperture, truncation.unwrap_or(*d))?;
        let est = estimate_ntmax(&sol, &cone, samples(cli), cli.global.seed)?;
        let r_min = cone.min_crease_distance(&sol);
        json["ntmax"] = json!({
            "cone": to_value(&cone)?,
            "estimate": to_value(&est)?,
            "r_min_grid": r_min,
            "closed_form": sol.grad_norm(r_min),
        });
    }
    Ok(Body {
        json,
        csv: report.to_csv(),
        failed: false,
    })
}

fn trace(cli: &Cli) -> Result<Body> {
    let Command::TraceEnergy {
        mesh,
        case,
        partition,
        data,
        levels,
        fan_rotation,
        dirichlet_vertices,
        export_off,
    } = &cli.command
    else {
        unreachable!()
    };
    let (surface, part, f, default_levels) = match (case, mesh) {
        (Some(name), None) => {
            let c = study_case(name)?;
            (c.surface, c.partition, c.data, c.levels)
        }
        (None, Some(mesh)) => {
            let s = load_valid_mesh(mesh)?;
            let p = load_partition(
                partition
                    .as_deref()
                    .ok_or_else(|| anyhow!("--partition is required with a mesh"))?,
            )?;
            let f = parse_data(
                data.as_deref()
                    .ok_or_else(|| anyhow!("--data is required with a mesh"))?,
            )?;
            (s, p, f, (0..=3).collect())
        }
        (Some(_), Some(_)) => bail!("give either a mesh or --case, not both"),
        (None, None) => bail!("give a mesh or --case"),
    };
    let levels = match levels {
        Some(t) => parse_levels(t)?,
        None => default_levels,
    };
    let rule = (*dirichlet_vertices).into();
    let report = refinement_study_with(&surface, &part, &f, &levels, *fan_rotation, rule)?;
    if let Some(path) = export_off {
        let finest = *levels.iter().max().ok_or_else(|| anyhow!("no levels"))?;
        let rs = RefinedSurface::new(&surface, finest, *fan_rotation)
            .map_err(|face| anyhow!("fan of face {face} folds over"))?;
        let ext = minimal_extension_energy_with(&rs, &part, &f, rule)?;
        std::fs::write(path, extension_off(&rs, &ext)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(Body {
        json: json!({
            "partition": to_value(&part)?,
            "data": to_value(&f)?,
            "report": to_value(&report)?,
        }),
        csv: report.to_csv(),
        failed: false,
    })
}

fn write_fixtures(dir: &Path) -> Result<Body> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut rows = Vec::new();
    let mut csv = String::from("name,file,vertices,faces\n");
    for name in fixtures::NAMES {
        let s = fixtures::by_name(name).expect("listed fixture exists");
        let file = format!("{name}.off");
        std::fs::write(dir.join(&file), serialize_off(&s))
            .with_context(|| format!("cannot write {}", dir.join(&file).display()))?;
        writeln!(csv, "{name},{file},{},{}", s.vertex_count(), s.face_count())?;
        rows.push(json!({
            "name": name,
            "file": file,
            "vertices": s.vertex_count(),
            "faces": s.face_count(),
        }));
    }
    Ok(Body {
        json: json!({ "fixtures": rows }),
        csv,
        failed: false,
    })
}

use std::collections::BTreeSet;

use geo_spinor::blocks::{
    default_shift_bound, geo_block, is_line_type, local_spinor_image, placements, GeoType, HostBlock,
};
use geo_spinor::classfield::{label_complex, summarize, LabeledComplex};
use geo_spinor::gamma::{type_distance, GammaClass, Permutation, DEFAULT_ORBIT_BOUND};
use geo_spinor::lattice_oracle::{cross_check, oracle_invariant_exponents};
use serde_json::{json, Value};

use crate::input::{self, ClassInput, EmbedInput, OracleInput, TypeInput};
use crate::render::{self, Figure};
use crate::{CliError, Format, Options, Subcommand, EXIT_OK, EXIT_ORACLE_MISMATCH};

/// Result of one subcommand before rendering.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub figures: Vec<Figure>,
    pub exit_code: i32,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report { json, text, figures: Vec::new(), exit_code: EXIT_OK }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json).expect("values serialize") + "\n"),
            Format::Ascii => {
                let mut out = self.text.clone();
                if !self.figures.is_empty() {
                    out.push('\n');
                    out.push_str(&render::ascii(&self.figures));
                }
                Ok(out)
            }
            Format::Svg if self.figures.is_empty() => {
                Err(CliError::Unsupported("this report has no figure; use json or ascii".into()))
            }
            Format::Svg => Ok(render::svg(&self.figures)),
        }
    }
}

/// Runs a subcommand on a JSON document and renders the result.
/// Returns the output text and the exit code.
pub fn run(sub: Subcommand, text: &str, opts: &Options) -> Result<(String, i32), CliError> {
    let value = input::parse_value(text)?;
    let mut report = execute(sub, &value, opts)?;
    if opts.echo {
        report.json["echo"] = value;
    }
    Ok((report.render(opts.format)?, report.exit_code))
}

pub fn execute(sub: Subcommand, value: &Value, opts: &Options) -> Result<Report, CliError> {
    match sub {
        Subcommand::Orbit => cmd_orbit(value, opts),
        Subcommand::Local => cmd_local(value),
        Subcommand::Embed => cmd_embed(value, opts),
        Subcommand::Global => cmd_global(value, opts),
        Subcommand::Oracle => cmd_oracle(value),
    }
}

fn br(c: &GammaClass) -> Value {
    json!(c.brackets())
}

fn brs<'a>(cs: impl IntoIterator<Item = &'a GammaClass>) -> Value {
    Value::Array(cs.into_iter().map(br).collect())
}

/// Position of a rank-2 or rank-3 class in the plane.
fn plane(c: &GammaClass) -> Option<(i64, i64)> {
    match c.brackets() {
        [x] => Some((*x, 0)),
        [x, y] => Some((*x, *y)),
        _ => None,
    }
}

pub fn cmd_orbit(value: &Value, opts: &Options) -> Result<Report, CliError> {
    let inp: ClassInput = input::decode(value)?;
    let class = inp.class()?;
    let bound = opts.bound.map_or(DEFAULT_ORBIT_BOUND, |b| b as usize);
    let orbit = class.orbit_bounded(bound)?;
    let min_len = orbit.iter().map(GammaClass::total_length).min().expect("orbit is nonempty");
    let minimal: Vec<&GammaClass> = orbit.iter().filter(|c| c.total_length() == min_len).collect();
    let (rep, sigma) = class.normalize_totally_positive();
    let mut json = json!({
        "class": br(&class),
        "n": class.rank(),
        "orbit": orbit.iter().map(|c| json!({"class": br(c), "total_length": c.total_length()})).collect::<Vec<_>>(),
        "size": orbit.len(),
        "minimal_length": min_len,
        "minimal_classes": brs(minimal.iter().copied()),
        "star": br(&class.star()),
        "symmetric": class.is_symmetric(),
        "total_distance": class.total_distance(),
        "totally_positive": br(&rep),
        "normalizing_permutation": sigma.to_string(),
    });
    let mut text = format!("class {class} (rank {})\norbit of size {}:\n", class.rank(), orbit.len());
    for c in &orbit {
        text.push_str(&format!("  {c}  length {}\n", c.total_length()));
    }
    let mins: Vec<String> = minimal.iter().map(|c| c.to_string()).collect();
    text.push_str(&format!("minimal length {min_len} at {}\n", mins.join(", ")));
    text.push_str(&format!("star {}, symmetric {}\n", class.star(), class.is_symmetric()));
    if let Some(p) = &inp.permutation {
        let perm = Permutation::parse_cycles(p, class.rank())?;
        let image = class.act(&perm)?;
        json["action"] = json!({"permutation": perm.to_string(), "image": br(&image)});
        text.push_str(&format!("{perm} sends {class} to {image}\n"));
    }
    Ok(Report::new(json, text))
}

pub fn cmd_local(value: &Value) -> Result<Report, CliError> {
    let inp: TypeInput = input::decode(value)?;
    let class = inp.class()?;
    let mut json = json!({});
    let mut text = String::new();
    let t = match GeoType::new(class.clone()) {
        Ok(t) => t,
        Err(_) => {
            let (rep, sigma) = class.normalize_totally_positive();
            let warning = format!("{class} is not totally positive; using {rep} = {sigma} . {class}");
            eprintln!("warning: {warning}");
            text.push_str(&format!("warning: {warning}\n"));
            json["warning"] = json!(warning);
            json["input"] = br(&class);
            GeoType::new(rep)?
        }
    };
    let block = geo_block(&t);
    let d = local_spinor_image(&t);
    for (k, v) in [
        ("type", br(t.class())),
        ("n", json!(t.rank())),
        ("vertex_count", json!(block.vertex_count())),
        ("bounds", json!(block.bounds())),
        ("line_type", json!(is_line_type(&t))),
        ("symmetric", json!(t.is_symmetric())),
        ("total_distance", json!(t.total_distance())),
        ("star", br(&t.class().star())),
        ("local_spinor_image", json!(d)),
    ] {
        json[k] = v;
    }
    text.push_str(&format!(
        "type {} (rank {})\nblock: {} vertices, line type {}\nsymmetric {}, total distance {}\nlocal spinor image O* k*^{d}\n",
        t.class(),
        t.rank(),
        block.vertex_count(),
        is_line_type(&t),
        t.is_symmetric(),
        t.total_distance(),
    ));
    let mut report = Report::new(json, text);
    if t.rank() <= 3 {
        let mut fig = Figure::new(format!("block of {}", t.class()), t.rank() == 3);
        for v in block.vertices() {
            let (x, y) = plane(&v).expect("rank <= 3");
            let mark = if v.is_zero() {
                "0"
            } else if &v == t.class() {
                "b"
            } else {
                "o"
            };
            fig.put(x, y, mark);
        }
        report.figures.push(fig);
    }
    Ok(report)
}

pub fn cmd_embed(value: &Value, opts: &Options) -> Result<Report, CliError> {
    let inp: EmbedInput = input::decode(value)?;
    let host = inp.host.block()?;
    let guest = inp.guest.geo_type()?;
    if host.rank() != guest.rank() {
        return Err(geo_spinor::blocks::BlockError::SizeMismatch { host: host.rank(), guest: guest.rank() }.into());
    }
    let bound = inp.shift_bound.or(opts.bound).unwrap_or_else(|| default_shift_bound(&guest));
    let ps = placements(&host, &guest, Some(bound))?;
    let n = guest.rank() as u64;
    let image = geo_spinor::blocks::CosetSet::new(n, ps.iter().map(|p| p.c.total_distance()));
    let host_json = match &host {
        HostBlock::Grid(g) => json!({"kind": "grid", "n": g.rank(), "bounds": g.bounds()}),
        HostBlock::Comm(c) => json!({
            "kind": "commutative",
            "n": c.rank(),
            "components": c.components().iter().map(|f| json!([f.e, f.f])).collect::<Vec<_>>(),
        }),
    };
    let json = json!({
        "host": host_json,
        "guest": br(guest.class()),
        "shift_bound": bound,
        "count": ps.len(),
        "embeds": !ps.is_empty(),
        "placements": ps.iter().map(|p| json!({
            "c": br(&p.c),
            "d": br(&p.d),
            "total_distance": p.c.total_distance(),
        })).collect::<Vec<_>>(),
        "relative_spinor_image": {
            "modulus": image.modulus(),
            "residues": image.residues(),
            "is_group": image.is_group(),
            "stabilizer": image.stabilizer(),
        },
    });
    let mut text = format!("guest {} in a rank {} host: {} placements\n", guest.class(), host.rank(), ps.len());
    for p in &ps {
        text.push_str(&format!("  c = {}  d = {}  total distance {}\n", p.c, p.d, p.c.total_distance()));
    }
    let residues: Vec<String> = image.residues().iter().map(u64::to_string).collect();
    text.push_str(&format!(
        "relative spinor image {{{}}} mod {n}, group {}\n",
        residues.join(","),
        image.is_group()
    ));
    let mut report = Report::new(json, text);
    if host.rank() <= 3 {
        let host_vertices = host.search_vertices(bound);
        for (k, p) in ps.iter().enumerate() {
            let mut fig = Figure::new(format!("placement {}: c = {}, d = {}", k + 1, p.c, p.d), host.rank() == 3);
            for v in &host_vertices {
                let (x, y) = plane(v).expect("rank <= 3");
                fig.put(x, y, "o");
            }
            for v in p.image_block(&guest) {
                let (x, y) = plane(&v).expect("rank <= 3");
                fig.put(x, y, "*");
            }
            let (x, y) = plane(&p.c).expect("rank <= 3");
            fig.put(x, y, "c");
            let (x, y) = plane(&p.d).expect("rank <= 3");
            fig.put(x, y, "d");
            report.figures.push(fig);
        }
    }
    Ok(report)
}

pub fn cmd_global(value: &Value, opts: &Options) -> Result<Report, CliError> {
    let inp = input::genus(value)?;
    let summary = summarize(&inp)?;
    let mut json = serde_json::to_value(&summary).expect("summary serializes");
    let show = |v: &[u64]| -> String {
        if v.is_empty() {
            "trivial".into()
        } else {
            v.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
        }
    };
    let mut text = format!(
        "maximal-order field group: {}\ngenus field group: {}\nindex: {}\nspinor genera: {}\neichler condition: {}\n",
        show(&summary.sigma0),
        show(&summary.sigma),
        summary.index,
        summary.spinor_genera,
        summary.eichler_condition,
    );
    let mut figures = Vec::new();
    if let Some(base) = &opts.label {
        let lc = label_complex(&inp, base)?;
        json["labels"] = labels_json(&lc);
        text.push_str(&format!("{} vertices, {} labels\n", lc.vertices.len(), lc.distinct_labels()));
        figures = label_figures(&lc);
    }
    Ok(Report { json, text, figures, exit_code: EXIT_OK })
}

fn labels_json(lc: &LabeledComplex) -> Value {
    json!({
        "places": lc.places,
        "types": brs(&lc.types),
        "distinct": lc.distinct_labels(),
        "elements": lc.labels,
        "vertices": lc.vertices.iter().map(|v| json!({
            "coords": brs(&v.coords),
            "label": v.label,
            "element": v.element,
            "genus_element": v.sigma_element,
            "extreme": v.extreme,
        })).collect::<Vec<_>>(),
    })
}

/// Planar pictures of a labeled product of blocks with at most three
/// coordinates: the first two span the plane, a third one gives layers.
fn label_figures(lc: &LabeledComplex) -> Vec<Figure> {
    let dims: usize = lc.types.iter().map(|t| t.rank() - 1).sum();
    if dims == 0 || dims > 3 {
        return Vec::new();
    }
    let diagonals = lc.types.first().is_some_and(|t| t.rank() == 3);
    let mut layers: std::collections::BTreeMap<i64, Figure> = std::collections::BTreeMap::new();
    for v in &lc.vertices {
        let flat: Vec<i64> = v.coords.iter().flat_map(|c| c.brackets().iter().copied()).collect();
        let (x, y, z) = (flat[0], flat.get(1).copied().unwrap_or(0), flat.get(2).copied().unwrap_or(0));
        layers
            .entry(z)
            .or_insert_with(|| {
                let title = if dims == 3 { format!("layer {z}") } else { "labels".to_string() };
                Figure::new(title, diagonals)
            })
            .put(x, y, v.label.clone());
    }
    layers.into_values().collect()
}

pub fn cmd_oracle(value: &Value) -> Result<Report, CliError> {
    let inp: OracleInput = input::decode(value)?;
    let mut results = Vec::new();
    let mut failures = 0;
    let mut text = String::new();
    for (t, p) in inp.cases()? {
        let check = cross_check(&t, p)?;
        let mut invariant_mismatches = Vec::new();
        let verts = geo_block(&t).vertices();
        for c in &verts {
            for d in &verts {
                let raw = oracle_invariant_exponents(&c.canonical_lift(), &d.canonical_lift(), p)?;
                let min = raw[0];
                let normalized: Vec<i64> = raw.iter().map(|x| x - min).collect();
                let td = type_distance(c, d)?;
                if normalized != td.exponents {
                    invariant_mismatches.push(json!({"c": br(c), "d": br(d), "oracle": normalized, "type_distance": td.exponents}));
                }
            }
        }
        let agree = check.agree && invariant_mismatches.is_empty();
        if !agree {
            failures += 1;
        }
        text.push_str(&format!(
            "{} p={}: {} orders found, block has {}: {}\n",
            t.class(),
            p,
            check.oracle.len(),
            check.block.len(),
            if agree { "match" } else { "MISMATCH" }
        ));
        results.push(json!({
            "type": br(&check.geo_type),
            "p": p,
            "oracle_count": check.oracle.len(),
            "block_count": check.block.len(),
            "missing_from_oracle": brs(&check.missing_from_oracle),
            "extra_in_oracle": brs(&check.extra_in_oracle),
            "invariant_mismatches": invariant_mismatches,
            "agree": agree,
        }));
    }
    let unique: BTreeSet<String> = results.iter().map(|r| r["type"].to_string()).collect();
    let json = json!({
        "cases": results.len(),
        "types": unique.len(),
        "mismatches": failures,
        "agree": failures == 0,
        "results": results,
    });
    let mut report = Report::new(json, text);
    if failures > 0 {
        report.exit_code = EXIT_ORACLE_MISMATCH;
    }
    Ok(report)
}

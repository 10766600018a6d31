//! The `rhtkit` command line.

use crate::derivations::derivation_algebra;
use crate::dictionary::{
    cdga_window, cinfty_from_quillen, linfty_from_sullivan, quillen_from_cinfty,
    sullivan_from_linfty, QuillenModel,
};
use crate::formality::{coformality_check, formality_check, FormalityCertificate};
use crate::graph::GraphComplex;
use crate::infinity::{Flavor, InfinityStructure};
use crate::koszul::{
    bigraded_model, koszul_check, koszul_dual, koszul_dual_infinity, WeightedPresentation,
};
use crate::linalg::{betti, GradedSpace};
use crate::massey::{compare_products, lie_massey_product, massey_product, MasseyProduct};
use crate::mc::{nerve_homotopy_group, tensor_model, with_unit, MaurerCartanElement, NerveGroup};
use crate::model::{self, Model, ModelFile};
use crate::poly::SullivanModel;
use crate::q::{Vector, Q};
use crate::registry::{self, RegistryEntry};
use crate::transfer::minimal_model;
use crate::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;

#[derive(Parser, Debug)]
#[command(
    name = "rhtkit",
    version,
    about = "Exact computations with A∞, C∞ and L∞ models"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Show degrees cohomologically (V^i = V_{-i}).
    #[arg(long, global = true)]
    pub cohomological: bool,
    /// Bar weight bound for Koszul and formality checks.
    #[arg(long, default_value_t = 4, global = true)]
    pub max_weight: usize,
    /// Degree window: cdga truncation, Lie truncation, Koszul window.
    #[arg(long, default_value_t = 12, global = true)]
    pub max_degree: i64,
    /// Arity bound for transfer when degrees do not give one.
    #[arg(long, global = true)]
    pub arity_bound: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a model.
    Check { model: String },
    /// Transfer a structure to its homology.
    Transfer { model: String },
    /// Print the minimal model as a model file.
    MinimalModel { model: String },
    /// Sullivan ↔ L∞ and Quillen ↔ C∞.
    Dictionary { model: String },
    /// Koszul duality.
    Koszul {
        #[command(subcommand)]
        action: KoszulCommand,
    },
    /// Formality of the modelled space.
    Formality {
        model: String,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    /// Coformality of the modelled space.
    Coformality {
        model: String,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    /// Massey product in a dg commutative or associative algebra.
    Massey {
        model: String,
        /// Cycles, separated by ';', e.g. "x;x;y".
        #[arg(long)]
        classes: String,
    },
    /// Lie–Massey product in a dg Lie algebra.
    LieMassey {
        model: String,
        #[arg(long)]
        classes: String,
    },
    /// Derivations of a Quillen model.
    Derivations {
        model: String,
        /// Restrict to derivations killing this element.
        #[arg(long)]
        omega: Option<String>,
    },
    /// Homology of the Lie graph complex.
    GraphHomology {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        legs: usize,
    },
    /// Homotopy groups of the nerve of a nilpotent L∞ algebra.
    NervePi {
        model: String,
        /// Maurer–Cartan basepoint.
        #[arg(long)]
        tau: Option<String>,
    },
    /// Homology of A ⊗ L.
    TensorModel { algebra: String, lie: String },
    /// The worked examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum KoszulCommand {
    Check {
        model: String,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    Dual {
        model: String,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    Bigraded {
        model: String,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct Params {
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub g: Option<i64>,
    #[arg(long)]
    pub d: Option<i64>,
}

impl Params {
    fn map(&self) -> BTreeMap<String, i64> {
        let mut p = BTreeMap::new();
        for (k, v) in [("n", self.n), ("m", self.m), ("g", self.g), ("d", self.d)] {
            if let Some(v) = v {
                p.insert(k.to_string(), v);
            }
        }
        p
    }
}

#[derive(Subcommand, Debug)]
pub enum ExamplesCommand {
    List,
    Show {
        name: String,
        #[command(flatten)]
        params: Params,
    },
    Run {
        name: String,
        #[command(flatten)]
        params: Params,
    },
}

/// Result of one command.
#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// The command ran but its subject failed a check.
    pub failed: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            failed: false,
        }
    }

    pub fn render(&self, format: Format, command: &str) -> String {
        match format {
            Format::Text => self.text.trim_end().to_string(),
            Format::Json => {
                let mut v = json!({ "schema": 1, "command": command });
                if let (Some(o), Value::Object(extra)) = (v.as_object_mut(), &self.json) {
                    for (k, x) in extra {
                        o.insert(k.clone(), x.clone());
                    }
                }
                serde_json::to_string_pretty(&v).expect("json")
            }
        }
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => 2,
        Error::Domain(_) | Error::Parse { .. } => 1,
    }
}

fn qs(c: &Q) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

struct Display {
    coh: bool,
}

impl Display {
    fn deg(&self, d: i64) -> i64 {
        if self.coh {
            -d
        } else {
            d
        }
    }

    fn space_json(&self, g: &GradedSpace) -> Value {
        Value::Array(
            g.basis
                .iter()
                .map(|b| {
                    let mut o = json!({ "name": b.name, "degree": self.deg(b.degree) });
                    if let Some(w) = b.weight {
                        o["weight"] = json!(w);
                    }
                    o
                })
                .collect(),
        )
    }

    fn space_text(&self, g: &GradedSpace) -> String {
        let items: Vec<String> = g
            .basis
            .iter()
            .map(|b| format!("{} ({})", b.name, self.deg(b.degree)))
            .collect();
        items.join(", ")
    }
}

fn vec_json(g: &GradedSpace, v: &Vector) -> Value {
    Value::Array(
        v.iter()
            .map(|(i, c)| json!({ "basis": g.name(*i), "coefficient": qs(c) }))
            .collect(),
    )
}

fn structure_json(s: &InfinityStructure, disp: &Display) -> Value {
    let mut ops = Vec::new();
    for i in 0..s.dim() {
        if !s.d.cols[i].is_zero() {
            ops.push(json!({ "arity": 1, "inputs": [s.space.name(i)], "output": vec_json(&s.space, &s.d.cols[i]) }));
        }
    }
    for (n, t) in &s.ops {
        for (w, v) in t {
            if v.is_zero() || (s.flavor == Flavor::Lie && !w.windows(2).all(|p| p[0] <= p[1])) {
                continue;
            }
            let inputs: Vec<&str> = w.iter().map(|&i| s.space.name(i)).collect();
            ops.push(json!({ "arity": n, "inputs": inputs, "output": vec_json(&s.space, v) }));
        }
    }
    json!({
        "flavor": s.flavor.name(),
        "basis": disp.space_json(&s.space),
        "operations": ops,
        "arity_bound": s.arity_bound,
    })
}

fn structure_text(s: &InfinityStructure, disp: &Display) -> String {
    let mut t = format!(
        "{} algebra of dimension {}\nbasis: {}\n",
        s.flavor.name(),
        s.dim(),
        disp.space_text(&s.space)
    );
    for i in 0..s.dim() {
        if !s.d.cols[i].is_zero() {
            t += &format!(
                "d({}) = {}\n",
                s.space.name(i),
                s.space.fmt_vec(&s.d.cols[i])
            );
        }
    }
    for line in s.describe_ops() {
        t += &line;
        t.push('\n');
    }
    t
}

fn sullivan_json(m: &SullivanModel, disp: &Display) -> Value {
    let d: Vec<Value> = (0..m.ring.n())
        .map(|i| json!({ "generator": m.ring.gens.name(i), "value": m.ring.fmt_poly(&m.d[i]) }))
        .collect();
    json!({ "generators": disp.space_json(&m.ring.gens), "differential": d })
}

fn quillen_json(q: &QuillenModel, disp: &Display) -> Value {
    let d: Vec<Value> = (0..q.gens.dim())
        .map(|i| json!({ "generator": q.gens.name(i), "value": q.fmt_lie(&q.delta[i]) }))
        .collect();
    json!({ "generators": disp.space_json(&q.gens), "differential": d })
}

fn presentation_json(p: &WeightedPresentation, disp: &Display) -> Value {
    let rels: Vec<String> = (0..p.relations.len()).map(|k| p.fmt_relation(k)).collect();
    json!({ "algebra": p.kind().name(), "generators": disp.space_json(&p.gens), "relations": rels })
}

fn model_json(m: &ModelFile, disp: &Display) -> Value {
    let body = match &m.model {
        Model::Cdga(s) => sullivan_json(s, disp),
        Model::Dgl(q) => quillen_json(q, disp),
        Model::Structure(s) => structure_json(s, disp),
        Model::Presentation(p) => presentation_json(p, disp),
    };
    json!({ "name": m.name, "kind": m.kind(), "model": body })
}

/// Resolve a model argument: a file path or `examples:NAME`.
pub fn load(arg: &str) -> Result<(ModelFile, Option<RegistryEntry>), Error> {
    if let Some(name) = arg.strip_prefix("examples:") {
        let e = registry::lookup(name, &BTreeMap::new())?;
        return Ok((e.model.clone(), Some(e)));
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::Usage(format!("cannot read {}: {}", arg, e)))?;
    Ok((model::parse(&text)?, None))
}

fn wrong_kind(m: &ModelFile, what: &str) -> Error {
    Error::Domain(format!(
        "{} needs {}, got a {} model",
        "this command",
        what,
        m.kind()
    ))
}

/// A structure whose homology is the object of study.
fn as_structure(m: &ModelFile, o: &Opts) -> Result<InfinityStructure, Error> {
    match &m.model {
        Model::Cdga(s) => Ok(cdga_window(s, o.max_degree).0),
        Model::Dgl(q) => Ok(q.truncation(o.max_degree)?.structure),
        Model::Structure(s) => Ok(s.clone()),
        Model::Presentation(p) => p.algebra(o.max_weight),
    }
}

/// A minimal structure modelling the same space.
fn as_minimal(m: &ModelFile, o: &Opts) -> Result<InfinityStructure, Error> {
    match &m.model {
        Model::Cdga(s) if s.is_minimal() => linfty_from_sullivan(s),
        Model::Dgl(q) if q.is_minimal() => cinfty_from_quillen(q),
        Model::Structure(s) if s.is_minimal() => Ok(s.clone()),
        _ => Ok(minimal_model(&as_structure(m, o)?, o.arity_bound)?.structure),
    }
}

fn as_linfty(m: &ModelFile, o: &Opts) -> Result<InfinityStructure, Error> {
    match &m.model {
        Model::Cdga(s) => linfty_from_sullivan(s),
        Model::Dgl(q) => Ok(q.truncation(o.max_degree)?.structure),
        Model::Structure(s) if s.flavor == Flavor::Lie => Ok(s.clone()),
        _ => Err(wrong_kind(
            m,
            "an L∞ algebra, a dg Lie algebra or a Sullivan model",
        )),
    }
}

fn split_classes(s: &str) -> Vec<&str> {
    s.split(';')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .collect()
}

/// Parse and run a full command line.
pub fn run(cli: &Cli) -> Result<Report, Error> {
    let o = &cli.opts;
    let disp = Display {
        coh: o.cohomological,
    };
    match &cli.command {
        Command::Check { model } => check(model, &disp),
        Command::Transfer { model } => {
            let (m, _) = load(model)?;
            let s = as_structure(&m, o)?;
            let t = minimal_model(&s, o.arity_bound)?;
            let fr = t.f.check_morphism()?;
            let gr = t.g.check_morphism()?;
            let mut text = structure_text(&t.structure, &disp);
            text += &format!(
                "contraction valid: {}\nf is an ∞-morphism: {}\ng is an ∞-morphism: {}\n",
                t.contraction.is_valid(),
                fr.ok,
                gr.ok
            );
            let json = json!({
                "structure": structure_json(&t.structure, &disp),
                "contraction_valid": t.contraction.is_valid(),
                "f_ok": fr.ok,
                "g_ok": gr.ok,
            });
            Ok(Report {
                text,
                json,
                failed: !(fr.ok && gr.ok && t.contraction.is_valid()),
            })
        }
        Command::MinimalModel { model } => {
            let (m, _) = load(model)?;
            let s = as_structure(&m, o)?;
            let t = minimal_model(&s, o.arity_bound)?;
            let out = ModelFile::new(
                &format!("{}-minimal", m.name),
                Model::Structure(t.structure),
            );
            Ok(Report::new(model::print(&out), model_json(&out, &disp)))
        }
        Command::Dictionary { model } => {
            let (m, _) = load(model)?;
            let out = match &m.model {
                Model::Cdga(s) => Model::Structure(linfty_from_sullivan(s)?),
                Model::Dgl(q) => Model::Structure(cinfty_from_quillen(q)?),
                Model::Structure(s) if s.flavor == Flavor::Lie => {
                    Model::Cdga(sullivan_from_linfty(s)?)
                }
                Model::Structure(s) if s.flavor == Flavor::Comm => {
                    Model::Dgl(quillen_from_cinfty(s)?)
                }
                _ => return Err(wrong_kind(&m, "a cdga, dgl, L∞ or C∞ model")),
            };
            let out = ModelFile::new(&format!("{}-dual", m.name), out);
            Ok(Report::new(model::print(&out), model_json(&out, &disp)))
        }
        Command::Koszul { action } => koszul(action, o, &disp),
        Command::Formality { model, weights } => {
            let (m, _) = load(model)?;
            let s = as_minimal(&m, o)?;
            Ok(verdict(formality_check(
                &s,
                o.max_weight,
                weights.as_deref(),
                o.max_degree,
            )?))
        }
        Command::Coformality { model, weights } => {
            let (m, _) = load(model)?;
            let s = as_minimal(&m, o)?;
            Ok(verdict(coformality_check(
                &s,
                o.max_weight,
                weights.as_deref(),
                o.max_degree,
            )?))
        }
        Command::Massey { model, classes } => {
            let (m, _) = load(model)?;
            let s = as_structure(&m, o)?;
            let reps = split_classes(classes)
                .into_iter()
                .map(|c| model::parse_vector(&s.space, c))
                .collect::<Result<Vec<_>, _>>()?;
            let p = massey_product(&s, &reps)?;
            let mut r = massey_report(&s, &p);
            if p.is_defined() {
                let min = minimal_model(&s, o.arity_bound)?.structure;
                if let Ok(c) = compare_products(&s, &min, &reps, &p) {
                    r.text += &format!(
                        "(-1)^e m{} = {} (e = {}): member {}, opposite member {}, hypotheses hold {}\n",
                        reps.len(),
                        min.space.fmt_vec(&c.signed_operation),
                        c.e,
                        c.member,
                        c.opposite_member,
                        c.hypotheses_hold
                    );
                    r.json["comparison"] = json!({
                        "e": c.e,
                        "signed_operation": vec_json(&min.space, &c.signed_operation),
                        "member": c.member,
                        "opposite_member": c.opposite_member,
                        "hypotheses_hold": c.hypotheses_hold,
                    });
                }
            }
            Ok(r)
        }
        Command::LieMassey { model, classes } => {
            let (m, _) = load(model)?;
            let s = match &m.model {
                Model::Dgl(q) => q.truncation(o.max_degree)?.structure,
                Model::Structure(s) if s.flavor == Flavor::Lie => s.clone(),
                _ => return Err(wrong_kind(&m, "a dg Lie algebra")),
            };
            let reps = split_classes(classes)
                .into_iter()
                .map(|c| model::parse_vector(&s.space, c))
                .collect::<Result<Vec<_>, _>>()?;
            let p = lie_massey_product(&s, &reps)?;
            Ok(massey_report(&s, &p))
        }
        Command::Derivations { model, omega } => {
            let (m, entry) = load(model)?;
            let Model::Dgl(q) = &m.model else {
                return Err(wrong_kind(&m, "a dg Lie algebra"));
            };
            let om = match omega {
                Some(t) => Some(model::parse_tensor(&q.gens, t)?),
                None => entry.and_then(|e| e.omega),
            };
            derivations(q, om, o, &disp)
        }
        Command::GraphHomology { genus, legs } => {
            if 2 * *genus + *legs < 3 {
                return Err(Error::Usage("need 2g + n ≥ 3".into()));
            }
            let mut gc = GraphComplex::new();
            let h = gc.homology(*genus, *legs)?;
            let json = json!({
                "genus": h.genus,
                "legs": h.legs,
                "dims": h.dims,
                "ranks": h.ranks,
                "betti": h.betti,
                "euler_chains": h.euler_chains(),
                "euler_homology": h.euler_homology(),
                "d_squared_zero": h.d_squared_zero,
            });
            Ok(Report {
                text: h.render(),
                json,
                failed: !h.d_squared_zero,
            })
        }
        Command::NervePi { model, tau } => {
            let (m, _) = load(model)?;
            let l = as_linfty(&m, o)?;
            let tau = match tau {
                Some(t) => MaurerCartanElement::new(&l, model::parse_vector(&l.space, t)?)?,
                None => MaurerCartanElement::zero(),
            };
            let mut text = String::new();
            let mut groups = Vec::new();
            let top = l
                .space
                .degrees()
                .into_iter()
                .max()
                .unwrap_or(0)
                .min(o.max_degree);
            for k in 0..=top.max(0) {
                let g = nerve_homotopy_group(&l, &tau, k)?;
                let kind = match &g {
                    NerveGroup::Nilpotent(b) => format!(" (nilpotent of class {})", b.class),
                    NerveGroup::Abelian { .. } => String::new(),
                };
                text += &format!("π{} has rank {}{}\n", k + 1, g.rank(), kind);
                groups.push(json!({ "degree": k + 1, "rank": g.rank() }));
            }
            Ok(Report::new(text, json!({ "groups": groups })))
        }
        Command::TensorModel { algebra, lie } => {
            let (a, _) = load(algebra)?;
            let a = match &a.model {
                Model::Cdga(s) => with_unit(&cdga_window(s, o.max_degree).0),
                Model::Structure(s) if s.flavor == Flavor::Comm => {
                    if s.space.index_of("1").is_some() {
                        s.clone()
                    } else {
                        with_unit(s)
                    }
                }
                _ => return Err(wrong_kind(&a, "a cdga")),
            };
            let (l, _) = load(lie)?;
            let l = as_linfty(&l, o)?;
            let t = tensor_model(&a, &l)?;
            let b = betti(&t.complex());
            let nz: BTreeMap<i64, usize> = b
                .into_iter()
                .filter(|(_, x)| *x > 0)
                .map(|(d, x)| (disp.deg(d), x))
                .collect();
            let mut text = format!("A ⊗ L of dimension {}\nhomology:\n", t.dim());
            for (d, x) in &nz {
                text += &format!("  degree {}: {}\n", d, x);
            }
            let json = json!({ "dimension": t.dim(), "betti": nz.iter().map(|(d, x)| json!({"degree": d, "dim": x})).collect::<Vec<_>>() });
            Ok(Report::new(text, json))
        }
        Command::Examples { action } => examples(action, &disp),
    }
}

fn check(model: &str, disp: &Display) -> Result<Report, Error> {
    let (m, _) = load(model)?;
    let mut lines = vec![format!("{} ({})", m.name, m.kind())];
    let mut ok = true;
    let mut json = json!({ "name": m.name, "kind": m.kind() });
    match &m.model {
        Model::Cdga(s) => {
            let d2 = s.d_squared_zero();
            ok &= d2;
            lines.push(format!("generators: {}", disp.space_text(&s.ring.gens)));
            lines.push(format!(
                "d² = 0: {}, minimal: {}, quadratic: {}",
                d2,
                s.is_minimal(),
                s.is_quadratic()
            ));
            json["d_squared_zero"] = json!(d2);
            json["minimal"] = json!(s.is_minimal());
            json["quadratic"] = json!(s.is_quadratic());
        }
        Model::Dgl(q) => {
            let d2 = q.d_squared_zero();
            ok &= d2;
            lines.push(format!("generators: {}", disp.space_text(&q.gens)));
            lines.push(format!(
                "δ² = 0: {}, minimal: {}, quadratic: {}",
                d2,
                q.is_minimal(),
                q.is_quadratic()
            ));
            json["d_squared_zero"] = json!(d2);
            json["minimal"] = json!(q.is_minimal());
            json["quadratic"] = json!(q.is_quadratic());
        }
        Model::Structure(s) => {
            let r = s.check_structure()?;
            ok &= r.ok;
            lines.push(format!("basis: {}", disp.space_text(&s.space)));
            lines.push(format!(
                "structure equations through arity {}: {}",
                2 * r.bound,
                if r.ok { "ok" } else { "FAIL" }
            ));
            for f in &r.failures {
                lines.push(format!("  {} on ({})", f.identity, f.inputs.join(",")));
            }
            json["ok"] = json!(r.ok);
            json["bound"] = json!(r.bound);
            json["failures"] = json!(r
                .failures
                .iter()
                .map(|f| json!({"identity": f.identity, "inputs": f.inputs}))
                .collect::<Vec<_>>());
        }
        Model::Presentation(p) => {
            lines.push(format!(
                "{} presentation, {} relations, quadratic: {}",
                p.kind().name(),
                p.relations.len(),
                p.is_quadratic()
            ));
            json["quadratic"] = json!(p.is_quadratic());
        }
    }
    json["valid"] = json!(ok);
    Ok(Report {
        text: lines.join("\n"),
        json,
        failed: !ok,
    })
}

fn verdict(c: FormalityCertificate) -> Report {
    let json = json!({
        "property": format!("{:?}", c.property).to_lowercase(),
        "verdict": format!("{:?}", c.verdict),
        "label": c.label(),
        "reason": c.reason,
        "weights": c.weights,
    });
    Report::new(c.render(), json)
}

fn massey_report(s: &InfinityStructure, p: &MasseyProduct) -> Report {
    match p {
        MasseyProduct::Undefined { equation } => Report::new(
            format!("not defined: {}", equation),
            json!({ "defined": false, "equation": equation }),
        ),
        MasseyProduct::Defined {
            degree,
            representative,
            indeterminacy,
            ..
        } => {
            let text = format!(
                "defined in degree {}\nrepresentative: {}\nindeterminacy: {} classes\ncontains zero: {}\n",
                degree,
                s.space.fmt_vec(representative),
                indeterminacy.len(),
                p.contains_zero()
            );
            let json = json!({
                "defined": true,
                "degree": degree,
                "representative": vec_json(&s.space, representative),
                "indeterminacy_dim": indeterminacy.len(),
                "contains_zero": p.contains_zero(),
            });
            Report::new(text, json)
        }
    }
}

fn koszul(action: &KoszulCommand, o: &Opts, disp: &Display) -> Result<Report, Error> {
    match action {
        KoszulCommand::Check { model, weights } => {
            let (m, _) = load(model)?;
            let s = match &m.model {
                Model::Cdga(s) => linfty_from_sullivan(s)?,
                Model::Dgl(q) => cinfty_from_quillen(q)?,
                Model::Structure(s) => s.clone(),
                Model::Presentation(p) => p.algebra(o.max_weight + 1)?,
            };
            let c = koszul_check(&s, weights.as_deref(), o.max_weight, o.max_degree)?;
            let blocks: Vec<Value> = c
                .blocks
                .iter()
                .map(|b| json!({"row": b.row, "degree": b.degree, "dim": b.dim, "rank_in": b.rank_in, "rank_out": b.rank_out}))
                .collect();
            let json = json!({ "koszul": c.is_koszul(), "weights": c.weights, "verified_through_weight": c.verified_through_weight, "blocks": blocks, "summary": c.render() });
            Ok(Report::new(c.render(), json))
        }
        KoszulCommand::Dual { model, weights } => {
            let (m, _) = load(model)?;
            let p = match &m.model {
                Model::Presentation(p) => koszul_dual(p)?,
                Model::Cdga(s) => {
                    koszul_dual_infinity(&linfty_from_sullivan(s)?, weights.as_deref())?
                }
                Model::Dgl(q) => {
                    koszul_dual_infinity(&cinfty_from_quillen(q)?, weights.as_deref())?
                }
                Model::Structure(s) => koszul_dual_infinity(s, weights.as_deref())?,
            };
            let out = ModelFile::new(&format!("{}-koszul-dual", m.name), Model::Presentation(p));
            Ok(Report::new(model::print(&out), model_json(&out, disp)))
        }
        KoszulCommand::Bigraded { model, weights } => {
            let (m, _) = load(model)?;
            let l = as_linfty(&m, o)?;
            let b = bigraded_model(&l, weights.as_deref(), o.max_degree)?;
            let blocks: Vec<Value> = b
                .blocks
                .iter()
                .filter(|x| x.dim > 0)
                .map(|x| json!({"codegree": x.codegree, "lower": x.lower, "dim": x.dim, "homology": x.homology()}))
                .collect();
            let json = json!({ "length": b.length(), "exact": b.exact, "max_codegree": b.max_codegree, "blocks": blocks, "model": sullivan_json(&b.model, disp) });
            Ok(Report::new(b.render(), json))
        }
    }
}

fn derivations(
    q: &QuillenModel,
    omega: Option<crate::free::Tensor>,
    o: &Opts,
    disp: &Display,
) -> Result<Report, Error> {
    let mut der = derivation_algebra(q, omega.clone())?;
    let lo = der.min_degree();
    let hi = o.max_degree;
    let dims: BTreeMap<i64, usize> = (lo..=hi).map(|k| (k, der.dim(k))).collect();
    let hom = der.homology_dims(lo, hi);
    let mut text = format!(
        "derivations of 𝕃({}){}\n degree  dim  H\n",
        disp.space_text(&q.gens),
        match &omega {
            Some(w) => format!(" killing {}", q.fmt_lie(w)),
            None => String::new(),
        }
    );
    for k in lo..=hi {
        text += &format!(
            " {:>6}  {:>3}  {}\n",
            disp.deg(k),
            dims[&k],
            hom.get(&k).copied().unwrap_or(0)
        );
    }
    let tr = der.truncate_1(hi)?;
    let nz = tr
        .structure
        .ops
        .get(&2)
        .map(|t| t.values().filter(|v| !v.is_zero()).count())
        .unwrap_or(0);
    text +=
        &format!(
        "1-connected cover through degree {}: dimension {}, differential {}, {} nonzero brackets\n",
        hi,
        tr.structure.dim(),
        if tr.structure.d.is_zero() { "zero" } else { "nonzero" },
        nz
    );
    let json = json!({
        "dims": dims.iter().map(|(k, x)| json!({"degree": disp.deg(*k), "dim": x, "homology": hom.get(k).copied().unwrap_or(0)})).collect::<Vec<_>>(),
        "truncation": structure_json(&tr.structure, disp),
    });
    Ok(Report::new(text, json))
}

fn examples(action: &ExamplesCommand, disp: &Display) -> Result<Report, Error> {
    match action {
        ExamplesCommand::List => {
            let mut text = String::new();
            let mut items = Vec::new();
            for (name, params) in registry::NAMES {
                let desc = match registry::lookup(&name.replace("-N-M", "-3-3"), &BTreeMap::new()) {
                    Ok(e) => e.description,
                    Err(_) => String::new(),
                };
                let p = if params.is_empty() {
                    String::new()
                } else {
                    format!(" [--{}]", params.replace(' ', " --"))
                };
                text += &format!("{}{}: {}\n", name, p, desc);
                items.push(json!({ "name": name, "params": params.split_whitespace().collect::<Vec<_>>(), "description": desc }));
            }
            Ok(Report::new(text, json!({ "examples": items })))
        }
        ExamplesCommand::Show { name, params } => {
            let e = registry::lookup(name, &params.map())?;
            let mut text = format!("# {}\n{}", e.description, model::print(&e.model));
            let mut json = model_json(&e.model, disp);
            json["description"] = json!(e.description);
            if let (Some(w), Model::Dgl(q)) = (&e.omega, &e.model.model) {
                text += &format!("# omega = {}\n", q.fmt_lie(w));
                json["omega"] = json!(q.fmt_lie(w));
            }
            Ok(Report::new(text, json))
        }
        ExamplesCommand::Run { name, params } => {
            let e = registry::lookup(name, &params.map())?;
            let outcomes = e.run()?;
            let mut text = format!("{}: {}\n", e.name, e.description);
            let mut items = Vec::new();
            let mut failed = false;
            for r in &outcomes {
                failed |= !r.pass();
                text += &format!(
                    "  [{}] {} ({})\n",
                    if r.pass() { "pass" } else { "FAIL" },
                    r.label,
                    r.provenance
                );
                if !r.pass() {
                    text += &format!(
                        "      expected: {}\n      actual:   {}\n",
                        r.expected, r.actual
                    );
                }
                items.push(json!({
                    "label": r.label,
                    "provenance": r.provenance.to_string(),
                    "expected": r.expected,
                    "actual": r.actual,
                    "pass": r.pass(),
                }));
            }
            Ok(Report {
                text,
                json: json!({ "name": e.name, "outcomes": items, "pass": !failed }),
                failed,
            })
        }
    }
}

/// Entry point of the binary: returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(r) => {
            emit(&r.render(cli.opts.format, name));
            if r.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            match cli.opts.format {
                Format::Json => emit(
                    &serde_json::to_string_pretty(
                        &json!({ "schema": 1, "command": name, "error": e.to_string() }),
                    )
                    .expect("json"),
                ),
                Format::Text => eprintln!("error: {}", e),
            }
            exit_code(&e)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{}", text);
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Transfer { .. } => "transfer",
        Command::MinimalModel { .. } => "minimal-model",
        Command::Dictionary { .. } => "dictionary",
        Command::Koszul { action } => match action {
            KoszulCommand::Check { .. } => "koszul check",
            KoszulCommand::Dual { .. } => "koszul dual",
            KoszulCommand::Bigraded { .. } => "koszul bigraded",
        },
        Command::Formality { .. } => "formality",
        Command::Coformality { .. } => "coformality",
        Command::Massey { .. } => "massey",
        Command::LieMassey { .. } => "lie-massey",
        Command::Derivations { .. } => "derivations",
        Command::GraphHomology { .. } => "graph-homology",
        Command::NervePi { .. } => "nerve-pi",
        Command::TensorModel { .. } => "tensor-model",
        Command::Examples { action } => match action {
            ExamplesCommand::List => "examples list",
            ExamplesCommand::Show { .. } => "examples show",
            ExamplesCommand::Run { .. } => "examples run",
        },
    }
}

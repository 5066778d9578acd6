//! The subcommands, dispatched by name through [`registry`].

use std::sync::Arc;

use ainfty::ainfinity::{
    compose_functors, full_subcategory, functor_residual, glue, homotopy_solve, strict_copy_functor, AFunctor,
};
use ainfty::cohomology::{differential, hochschild, induced_map_on_hh, injectivity_condition, CohomologyReport};
use ainfty::hochschild::{restrict, Cochain, Window, UNBOUNDED};
use ainfty::maurer_cartan::{
    ainf_relation_residual, curvature, dg_gauge_check, gauge_action, module_relation_residual, quillen_homotopy_build,
    quillen_verify, AInfAlgebra, DgAlgebra, GaugeResiduals, HochschildAlgebra, MCElement, PolynomialPath, Twisted,
    TwistedModule,
};
use ainfty::prelie::{bch, exp, log, odot_group, GroupLike};
use ainfty::Scalar;
use serde_json::{json, Value};

use crate::doc::{components_doc, emit, external_functor, structure_residual, Loaded};
use crate::error::CliError;
use crate::report::{self, Report, Status};
use crate::Cli;

pub struct Context<'a> {
    pub flags: &'a Cli,
    pub inputs: Vec<Loaded>,
}

impl Context<'_> {
    fn input(&self) -> &Loaded {
        &self.inputs[0]
    }

    fn cutoff(&self) -> Result<usize, CliError> {
        self.flags.cutoff.ok_or_else(|| CliError::Usage("--cutoff is required".into()))
    }

    fn named<'b>(&self, value: &'b Option<String>, flag: &str) -> Result<&'b str, CliError> {
        value.as_deref().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
    }

    fn cochain(&self, value: &Option<String>, flag: &str) -> Result<Cochain, CliError> {
        let name = self.named(value, flag)?;
        Ok(self.input().cochain(name)?.clone())
    }
}

pub trait Command: Sync {
    fn name(&self) -> &'static str;

    /// Accepted number of input documents.
    fn inputs(&self) -> (usize, usize) {
        (1, 1)
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError>;
}

pub fn registry() -> Vec<&'static dyn Command> {
    vec![
        &Validate,
        &Hochschild,
        &Exp,
        &Log,
        &Bch,
        &Compose,
        &IsotopyCheck,
        &HomotopyCheck,
        &GaugeCheck,
        &QuillenCheck,
        &Center,
        &Glue,
        &Restrict,
        &Twist,
    ]
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn gauge_json(r: &GaugeResiduals) -> Value {
    json!({
        "equations": r.residuals.iter().map(report::residual).collect::<Vec<_>>(),
        "first_failure": r.first_failure(),
    })
}

fn truncate_t(p: &PolynomialPath, n: usize) -> Result<PolynomialPath, CliError> {
    let mut out = PolynomialPath::zero(p.graph(), p.degree(), n.min(p.t_cutoff()));
    for (&(k, dt), c) in p.coeffs() {
        out.set(k, dt, c.clone())?;
    }
    Ok(out)
}

fn lines_json(rep: &CohomologyReport) -> Value {
    let lines: Vec<Value> = rep
        .lines
        .iter()
        .map(|l| {
            json!({
                "hh_degree": l.hh_degree(),
                "weights": [l.weights.0, l.weights.1],
                "cochains": l.cochains,
                "kernel": l.kernel,
                "image": l.image,
                "dim": l.dim,
                "exact": l.exact,
                "representatives": l.representatives.iter().map(report::cochain).collect::<Vec<_>>(),
            })
        })
        .collect();
    Value::Array(lines)
}

struct Validate;

impl Command for Validate {
    fn name(&self) -> &'static str {
        "validate"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let a = ctx.input();
        let g = a.graph();
        out.put("objects", g.n_objects());
        out.put("basis", g.dim());
        out.put("minimal", a.structure.is_minimal());
        out.put("strictly_unital", a.structure.is_strictly_unital());
        out.put("graded_algebra", a.structure.is_graded_algebra());
        let r = structure_residual(&a.structure)?;
        out.put("mu_star_mu", report::residual(&r));
        let mut ok = r.is_zero();
        let mut functors = serde_json::Map::new();
        for (name, f) in &a.functors {
            let res = functor_residual(f, f.cutoff())?;
            ok &= res.is_zero();
            functors.insert(name.clone(), report::table_residual(&res));
        }
        out.put("functors", functors);
        let mut cochains = serde_json::Map::new();
        for (name, c) in &a.cochains {
            cochains.insert(name.clone(), json!({ "degree": c.degree(), "weights": [c.min_weight(), c.max_weight()] }));
        }
        out.put("cochains", cochains);
        let names = |keys: Vec<&String>| json!(keys);
        out.put("transformations", names(a.transformations.keys().collect()));
        out.put("paths", names(a.paths.keys().collect()));
        out.put("canonical", serde_json::to_value(emit(&a.structure, a.convention)?).expect("plain data"));
        if !ok {
            out.diagnostics.push("structure or functor equations fail".into());
        }
        Ok(status(ok))
    }
}

struct Hochschild;

impl Command for Hochschild {
    fn name(&self) -> &'static str {
        "hochschild"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let n = ctx.flags.degree.ok_or_else(|| CliError::Usage("--degree is required".into()))?;
        let window = Window::new(if ctx.flags.plus { 2 } else { 0 }, ctx.cutoff()?)?;
        out.window = Some(window);
        let rep = hochschild(&ctx.input().structure, &[n - 1], window)?;
        out.put("hh_degree", n);
        out.put("graded", rep.graded);
        out.put("lines", lines_json(&rep));
        out.put("total", rep.total(n - 1));
        out.put("complete", rep.complete[&(n - 1)]);
        Ok(Status::Ok)
    }
}

struct Exp;

impl Command for Exp {
    fn name(&self) -> &'static str {
        "exp"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let a = &ctx.input().structure;
        let v = ctx.cochain(&ctx.flags.cochain, "cocycle")?.with_cutoff(w);
        out.put("cocycle", differential(&v, a, w)?.is_zero());
        let f = exp(&v, w)?;
        let mut taylor = serde_json::Map::new();
        for i in 2..=w {
            taylor.insert(format!("F{i}"), report::cochain(&f.plus().weights(i, i)));
        }
        out.put("taylor", taylor);
        let res = functor_residual(&AFunctor::from_group_like(a, f.plus())?, w)?;
        out.put("isotopy", res.is_zero());
        Ok(Status::Ok)
    }
}

struct Log;

impl Command for Log {
    fn name(&self) -> &'static str {
        "log"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let g = GroupLike::new(ctx.cochain(&ctx.flags.cochain, "cochain")?.with_cutoff(w))?;
        let v = log(&g, w)?;
        out.put("log", report::cochain(&v));
        let back = exp(&v, w)?;
        let ok = back.plus() == g.plus();
        out.put("round_trip", ok);
        Ok(status(ok))
    }
}

struct Bch;

impl Command for Bch {
    fn name(&self) -> &'static str {
        "bch"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let u = ctx.cochain(&ctx.flags.left, "left")?.with_cutoff(w);
        let v = ctx.cochain(&ctx.flags.right, "right")?.with_cutoff(w);
        let z = bch(&u, &v, w)?;
        out.put("bch", report::cochain(&z));
        let check = log(&odot_group(&exp(&u, w)?, &exp(&v, w)?, w)?, w)?;
        let ok = check == z;
        out.put("matches_log_of_product", ok);
        Ok(status(ok))
    }
}

struct Compose;

impl Command for Compose {
    fn name(&self) -> &'static str {
        "compose"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let a = &ctx.input().structure;
        let f = ctx.cochain(&ctx.flags.left, "left")?.with_cutoff(w);
        let g = ctx.cochain(&ctx.flags.right, "right")?.with_cutoff(w);
        let composed = compose_functors(&AFunctor::from_group_like(a, &f)?, &AFunctor::from_group_like(a, &g)?, w)?;
        let plus = composed.plus_part()?;
        out.put("composed", report::cochain(&plus));
        let product = odot_group(&GroupLike::new(f)?, &GroupLike::new(g)?, w)?;
        let ok = product.plus() == &plus;
        out.put("matches_odot", ok);
        out.put("isotopy", functor_residual(&composed, w)?.is_zero());
        Ok(status(ok))
    }
}

struct IsotopyCheck;

impl Command for IsotopyCheck {
    fn name(&self) -> &'static str {
        "isotopy-check"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let f = ctx.cochain(&ctx.flags.cochain, "cochain")?.with_cutoff(w);
        let res = functor_residual(&AFunctor::from_group_like(&ctx.input().structure, &f)?, w)?;
        out.put("residual", report::table_residual(&res));
        out.put("isotopy", res.is_zero());
        Ok(status(res.is_zero()))
    }
}

struct HomotopyCheck;

impl Command for HomotopyCheck {
    fn name(&self) -> &'static str {
        "homotopy-check"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let a = &ctx.input().structure;
        let side = |value: &Option<String>, flag: &str| -> Result<AFunctor, CliError> {
            let c = ctx.cochain(value, flag)?.with_cutoff(w);
            let plus = if ctx.flags.integrate { exp(&c, w)?.plus().clone() } else { c };
            Ok(AFunctor::from_group_like(a, &plus)?)
        };
        let (f, g) = (side(&ctx.flags.left, "left")?, side(&ctx.flags.right, "right")?);
        match homotopy_solve(&f, &g, w)? {
            Some(h) => {
                out.put("homotopic", true);
                let g = a.graph();
                out.put(
                    "witness",
                    json!({ "from": "left", "to": "right", "degree": h.degree(), "terms": components_doc(g, g, &h.comps.comps) }),
                );
                Ok(Status::Ok)
            }
            None => {
                out.put("homotopic", false);
                out.diagnostics.push(format!("no homotopy exists through weight {w}"));
                Ok(Status::Window)
            }
        }
    }
}

struct GaugeCheck;

impl Command for GaugeCheck {
    fn name(&self) -> &'static str {
        "gauge-check"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let a = &ctx.input().structure;
        let v = HochschildAlgebra::new(a);
        let dg = DgAlgebra::new(a)?;
        let xi = ctx.cochain(&ctx.flags.xi, "xi")?.with_cutoff(w);
        let xi_curvature = curvature(&v, &xi, w)?;
        out.put("xi_curvature", report::residual(&xi_curvature));
        if !xi_curvature.is_zero() {
            out.diagnostics.push("xi is not a Maurer-Cartan element".into());
            return Ok(Status::Failed);
        }
        let xi = MCElement::new(&v, xi, w)?;
        let (zeta, c) = match (&ctx.flags.parameter, &ctx.flags.zeta, &ctx.flags.conjugator) {
            (Some(_), _, _) => {
                let u = ctx.cochain(&ctx.flags.parameter, "parameter")?.with_cutoff(w);
                let zeta = gauge_action(&dg, &u, &xi, w)?.zeta().clone();
                out.put("zeta", report::cochain(&zeta));
                let c = dg.exp(&u, w)?;
                out.put("c", report::cochain(&c));
                (zeta, c)
            }
            (None, Some(_), Some(_)) => (
                ctx.cochain(&ctx.flags.zeta, "zeta")?.with_cutoff(w),
                ctx.cochain(&ctx.flags.conjugator, "conjugator")?.with_cutoff(w),
            ),
            _ => return Err(CliError::Usage("give --parameter, or --zeta with --conjugator".into())),
        };
        let zeta_curvature = curvature(&v, &zeta, w)?;
        out.put("zeta_curvature", report::residual(&zeta_curvature));
        let r = dg_gauge_check(&dg, &zeta, xi.zeta(), &c, w)?;
        out.put("residuals", gauge_json(&r));
        Ok(status(zeta_curvature.is_zero() && r.is_zero()))
    }
}

struct QuillenCheck;

impl Command for QuillenCheck {
    fn name(&self) -> &'static str {
        "quillen-check"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let a = ctx.input();
        let g = a.path(ctx.named(&ctx.flags.path, "path")?)?;
        let (x, lambda) = quillen_homotopy_build(&a.structure, g, w)?;
        let r = quillen_verify(&HochschildAlgebra::new(&a.structure), &x, &lambda, w)?;
        let n = ctx.flags.t_cutoff.unwrap_or(x.t_cutoff()).min(x.t_cutoff());
        out.put("t_cutoff", n);
        out.put("x", report::path(&truncate_t(&x, n)?));
        out.put("lambda", report::path(&truncate_t(&lambda, n)?));
        let ode = truncate_t(&r.ode, n)?;
        out.put(
            "residual",
            json!({
                "ode": report::path_residual(&ode),
                "start": report::residual(&r.start),
                "end": report::residual(&r.end),
            }),
        );
        Ok(status(ode.is_zero() && r.start.is_zero() && r.end.is_zero()))
    }
}

struct Center;

impl Command for Center {
    fn name(&self) -> &'static str {
        "center"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.flags.cutoff.unwrap_or(3);
        out.window = Some(Window::upto(w));
        let a = ctx.input();
        let g = a.graph();
        let (center, ch) = injectivity_condition(&a.structure, w)?;
        let basis: Vec<Value> = center
            .basis
            .iter()
            .map(|v| Value::Array(v.iter().map(|(&b, c)| json!([g.elem(b).id, report::scalar(c)])).collect()))
            .collect();
        out.put("dim", center.dim());
        out.put("basis", basis);
        let table: Vec<Value> =
            center.table.iter().map(|row| Value::Array(row.iter().map(|c| report::scalars(c)).collect())).collect();
        out.put("table", table);
        out.put("identity", center.identity.as_deref().map(report::scalars).unwrap_or(Value::Null));
        out.put("images", ch.images.iter().map(|c| report::scalars(c)).collect::<Vec<_>>());
        out.put("image_rank", ch.image_rank);
        out.put("units_in_image", ch.units_in_image);
        out.put("split", ch.split.as_ref().map(|s| json!(s.len())).unwrap_or(Value::Null));
        Ok(Status::Ok)
    }
}

struct Glue;

impl Command for Glue {
    fn name(&self) -> &'static str {
        "glue"
    }

    fn inputs(&self) -> (usize, usize) {
        (1, 2)
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let a = ctx.input();
        let f = match ctx.inputs.get(1) {
            Some(b) => external_functor(a, ctx.named(&ctx.flags.functor, "functor")?, b)?,
            None => {
                // glue along F followed by a strict copy onto a renamed target
                let copy = Arc::new(a.structure.renamed("'")?);
                let strict = strict_copy_functor(&a.structure, &copy, &Scalar::one(), UNBOUNDED)?;
                match &ctx.flags.functor {
                    Some(name) => compose_functors(&strict, &a.functor(name)?, UNBOUNDED)?,
                    None => strict,
                }
            }
        };
        let glued = glue(&f, UNBOUNDED)?;
        out.put("objects", glued.graph().n_objects());
        out.put("basis", glued.graph().dim());
        let r = structure_residual(&glued)?;
        out.put("mu_star_mu", report::residual(&r));
        out.put("structure", serde_json::to_value(emit(&glued, a.convention)?).expect("plain data"));
        Ok(status(r.is_zero()))
    }
}

struct Restrict;

impl Command for Restrict {
    fn name(&self) -> &'static str {
        "restrict"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let a = ctx.input();
        if ctx.flags.objects.is_empty() {
            return Err(CliError::Usage("--objects is required".into()));
        }
        let objects: Vec<&str> = ctx.flags.objects.iter().map(String::as_str).collect();
        let (sub, _, index) = full_subcategory(&a.structure, &objects)?;
        out.put("structure", serde_json::to_value(emit(&sub, a.convention)?).expect("plain data"));
        let mut cochains = serde_json::Map::new();
        for (name, c) in &a.cochains {
            cochains.insert(name.clone(), report::cochain(&restrict(c, &index)?));
        }
        out.put("cochains", cochains);
        if let Some(n) = ctx.flags.degree {
            let window = Window::new(if ctx.flags.plus { 2 } else { 0 }, ctx.cutoff()?)?;
            out.window = Some(window);
            let parent = hochschild(&a.structure, &[n - 1], window)?;
            let part = hochschild(&sub, &[n - 1], window)?;
            let map = induced_map_on_hh(&index, &parent, &part)?;
            out.put(
                "induced",
                json!({
                    "source_total": parent.total(n - 1),
                    "target_total": part.total(n - 1),
                    "columns": map.columns.iter().map(|c| report::scalars(c)).collect::<Vec<_>>(),
                    "rank": map.rank,
                    "injective": map.injective,
                }),
            );
        }
        Ok(Status::Ok)
    }
}

struct Twist;

impl Command for Twist {
    fn name(&self) -> &'static str {
        "twist"
    }

    fn run(&self, ctx: &Context<'_>, out: &mut Report) -> Result<Status, CliError> {
        let w = ctx.cutoff()?;
        out.window = Some(Window::upto(w));
        let a = ctx.input();
        let v = HochschildAlgebra::new(&a.structure);
        let zeta = ctx.cochain(&ctx.flags.zeta, "zeta")?.with_cutoff(w);
        let k = curvature(&v, &zeta, w)?;
        out.put("curvature", report::residual(&k));
        if !k.is_zero() {
            out.diagnostics.push("zeta is not a Maurer-Cartan element".into());
            return Ok(Status::Failed);
        }
        let mc = MCElement::new(&v, zeta, w)?;
        let args = ctx
            .flags
            .apply
            .iter()
            .map(|n| Ok(a.cochain(n)?.clone().with_cutoff(w)))
            .collect::<Result<Vec<_>, CliError>>()?;
        if args.is_empty() {
            return Ok(Status::Ok);
        }
        let refs: Vec<&Cochain> = args.iter().collect();
        let tw = Twisted::new(&v, &mc);
        let module = TwistedModule::new(&v, &mc);
        out.put("algebra", report::cochain(&tw.mu(&refs, w)?));
        out.put("module", report::cochain(&module.mu(&refs, w)?));
        let r1 = ainf_relation_residual(&tw, &refs, w)?;
        let r2 = module_relation_residual(&module, &refs, w)?;
        out.put("algebra_relation", report::residual(&r1));
        out.put("module_relation", report::residual(&r2));
        Ok(status(r1.is_zero() && r2.is_zero()))
    }
}

use pivotal::analysis;
use pivotal::boolfn::{build_influence_counterexample, effect_counterexample, Certificate, Counterexample};
use pivotal::generators::{complement_mu, hadamard_mu, majp_dist, mixture_d, uniform_product};
use pivotal::json::{dist_to_string, function_to_string};
use pivotal::rational::{self, int, Rational};
use pivotal::report::{self, cells, value, Verdict};
use pivotal::theorems::{self, MAX_EXACT_MAJP_N};
use pivotal::{Distribution, Error, PlayerFunction};
use serde_json::{json, Value};

use crate::output::{
    csv_writer, emit, load_dist, load_function, parse_rational, print_json, required, witness_json, Failure, Run,
};
use crate::{AnalyzeArgs, CeKind, CounterexampleArgs, Format, GenArgs, GenKind, SweepArgs, VerifyArgs, What, Which};

fn need<T: Copy>(name: &str, v: Option<T>) -> Run<T> {
    v.ok_or_else(|| Failure::usage(format!("--{name} is required here")))
}

pub fn gen(a: GenArgs) -> Run {
    let d: Distribution = match a.kind {
        GenKind::HadamardMu => hadamard_mu(need("k", a.k)?)?.into(),
        GenKind::ComplementMu => complement_mu(&hadamard_mu(need("k", a.k)?)?)?.into(),
        GenKind::MixtureD => mixture_d(need("k", a.k)?)?.into(),
        GenKind::UniformProduct => uniform_product(need("n", a.n)?)?.into(),
        GenKind::Majp => majp_dist(need("n", a.n)?, &required("p", &a.p)?)?.into(),
    };
    emit(a.out.as_deref(), &dist_to_string(&d))?;
    Ok(true)
}

pub fn analyze(a: AnalyzeArgs) -> Run {
    let d = load_dist(&a.dist)?;
    let f = load_function(&a.function)?;
    match a.what {
        What::Effects => {
            let r = analysis::effects(&f, &d)?;
            if a.format == Format::Json {
                print_json(&json!({ "what": "effects", "rows": r.rows }))?;
            } else {
                let mut w = csv_writer();
                w.write_record(["player", "signed", "signed_decimal", "effect", "effect_decimal"])?;
                for row in &r.rows {
                    let [s, sd] = cells(&row.signed);
                    let [e, ed] = cells(&row.effect);
                    w.write_record([row.player.to_string(), s, sd, e, ed])?;
                }
                w.flush()?;
            }
        }
        What::Influences => {
            let r = analysis::influences(&f, &d)?;
            if a.format == Format::Json {
                let rows: Vec<Value> =
                    r.iter().enumerate().map(|(i, v)| json!({ "player": i, "influence": value(v) })).collect();
                print_json(&json!({ "what": "influences", "rows": rows }))?;
            } else {
                let mut w = csv_writer();
                w.write_record(["player", "influence", "influence_decimal"])?;
                for (i, v) in r.iter().enumerate() {
                    let [x, xd] = cells(v);
                    w.write_record([i.to_string(), x, xd])?;
                }
                w.flush()?;
            }
        }
        What::Pivotal => {
            let p = required("p", &a.p)?;
            let alpha = required("alpha", &a.alpha)?;
            let r = analysis::pivotal_report(&f, &d, &p, &alpha)?;
            if a.format == Format::Json {
                print_json(&json!({ "what": "pivotal", "count": r.count(), "report": r }))?;
            } else {
                let mut w = csv_writer();
                let mut header = vec!["player".to_string(), "mass".into(), "mass_decimal".into(), "pivotal".into()];
                for s in d.alphabet().symbols() {
                    header.push(format!("dev_{s}"));
                    header.push(format!("dev_{s}_decimal"));
                }
                w.write_record(&header)?;
                for row in &r.rows {
                    let [m, md] = cells(&row.mass);
                    let mut rec = vec![row.player.to_string(), m, md, row.pivotal.to_string()];
                    for dev in &row.deviations {
                        match dev {
                            Some(v) => rec.extend(cells(v)),
                            None => rec.extend([String::new(), String::new()]),
                        }
                    }
                    w.write_record(&rec)?;
                }
                w.flush()?;
            }
        }
        What::Counts => {
            let alpha = required("alpha", &a.alpha)?;
            let p = a.p.as_deref().map(|s| parse_rational("p", s)).transpose()?;
            let effect = if d.alphabet().is_binary() { Some(analysis::count_effect(&f, &d, &alpha)?) } else { None };
            let piv = match &p {
                Some(p) => Some(analysis::count_pivotal(&f, &d, p, &alpha)?),
                None => None,
            };
            if a.format == Format::Json {
                print_json(&json!({
                    "what": "counts",
                    "alpha": value(&alpha),
                    "p": p.as_ref().map(value),
                    "count_effect": effect,
                    "count_pivotal": piv,
                }))?;
            } else {
                let mut w = csv_writer();
                w.write_record(["metric", "value"])?;
                if let Some(c) = effect {
                    w.write_record(["count_effect", &c.to_string()])?;
                }
                if let Some(c) = piv {
                    w.write_record(["count_pivotal", &c.to_string()])?;
                }
                w.flush()?;
            }
        }
    }
    Ok(true)
}

fn certificate_json(c: &Certificate) -> Value {
    json!({ "passed": c.passed(), "checks": c.checks })
}

fn failed_check(c: &Certificate) -> Option<Value> {
    c.checks.iter().find(|ch| !ch.ok).map(|ch| json!({ "check": ch.name, "detail": ch.detail }))
}

fn theorem_name(w: Which) -> &'static str {
    match w {
        Which::Thm1 => "thm1",
        Which::Thm2 => "thm2",
        Which::Warmup => "warmup",
        Which::SumBound => "sum-bound",
        Which::BinaryBound => "binary-bound",
        Which::Reduction => "reduction",
        Which::Convex => "convex",
        Which::EffectIdentity => "effect-identity",
    }
}

pub fn verify(a: VerifyArgs) -> Run {
    let d = load_dist(&a.dist)?;
    let f = load_function(&a.function)?;
    let theorem = theorem_name(a.which).to_string();
    let mut inputs = json!({ "dist": a.dist.display().to_string(), "fn": a.function });
    let mut put = |k: &str, v: Value| inputs[k] = v;
    let verdict = match run_verify(&a, &d, &f, &mut put) {
        Ok(mut v) => {
            v.theorem = theorem;
            v
        }
        Err(Error::NotIndependent { k, witness }) => Verdict {
            theorem,
            inputs: Value::Null,
            computed: json!({ "refused": format!("distribution is not {k}-wise independent") }),
            bound: Value::Null,
            ok: false,
            witness: Some(witness_json(&witness)),
        },
        Err(e @ (Error::NoPivotalPlayers | Error::Precondition(_) | Error::Marginal { .. } | Error::NotBinary)) => {
            Verdict {
                theorem,
                inputs: Value::Null,
                computed: json!({ "refused": e.to_string() }),
                bound: Value::Null,
                ok: false,
                witness: None,
            }
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = Verdict { inputs, ..verdict };
    emit(None, &verdict.to_json())?;
    Ok(verdict.ok)
}

fn run_verify(
    a: &VerifyArgs,
    d: &Distribution,
    f: &PlayerFunction,
    put: &mut impl FnMut(&str, Value),
) -> Result<Verdict, Error> {
    let rat = |name: &str, v: &Option<String>| -> Result<Rational, Error> {
        let s = v.as_deref().ok_or_else(|| Error::Parse(format!("--{name} is required here")))?;
        rational::parse(s)
    };
    let verdict = |computed: Value, bound: Value, ok: bool, witness: Option<Value>| Verdict {
        theorem: String::new(),
        inputs: Value::Null,
        computed,
        bound,
        ok,
        witness,
    };
    Ok(match a.which {
        Which::Thm1 => {
            let (p, alpha) = (rat("p", &a.p)?, rat("alpha", &a.alpha)?);
            put("p", value(&p));
            put("alpha", value(&alpha));
            let r = theorems::verify_thm1(f, d, &p, &alpha)?;
            verdict(json!({ "count_pivotal": r.count }), value(&r.bound), r.ok, None)
        }
        Which::Warmup => {
            let alpha = rat("alpha", &a.alpha)?;
            put("alpha", value(&alpha));
            let r = theorems::verify_warmup(f, d, &alpha)?;
            verdict(json!({ "count_effect": r.count }), value(&r.bound), r.ok, None)
        }
        Which::BinaryBound => {
            let alpha = rat("alpha", &a.alpha)?;
            put("alpha", value(&alpha));
            let r = theorems::verify_binary_bound(f, d, &alpha)?;
            verdict(json!({ "count_effect": r.count }), value(&r.bound), r.ok, None)
        }
        Which::SumBound => {
            let players = if a.players.is_empty() { (0..d.n()).collect() } else { a.players.clone() };
            put("players", json!(players));
            let r = theorems::verify_sum_bound(f, d, &players)?;
            verdict(
                json!({ "sum_effects": value(&r.sum), "sum_squared": value(&(&r.sum * &r.sum)) }),
                json!({ "sum_squared_at_most": value(&r.bound_sq) }),
                r.ok,
                None,
            )
        }
        Which::Reduction => {
            let (p, alpha) = (rat("p", &a.p)?, rat("alpha", &a.alpha)?);
            put("p", value(&p));
            put("alpha", value(&alpha));
            let r = theorems::reduce(f, d, &p, &alpha)?;
            let y: Distribution = r.y.clone().into();
            let g: PlayerFunction = r.g.clone().into();
            verdict(
                json!({
                    "players": r.players,
                    "flip": r.flip,
                    "p_i": r.p_i.iter().map(value).collect::<Vec<_>>(),
                    "count_f": r.count_f,
                    "count_g": r.count_g,
                    "y": serde_json::from_str::<Value>(&dist_to_string(&y)).expect("valid json"),
                    "g": serde_json::from_str::<Value>(&function_to_string(&g)).expect("valid json"),
                    "certificate": certificate_json(&r.certificate),
                }),
                json!({ "count_f_at_most": 2 * r.count_g }),
                r.certificate.passed(),
                failed_check(&r.certificate),
            )
        }
        Which::Thm2 => {
            let (p, alpha) = (rat("p", &a.p)?, rat("alpha", &a.alpha)?);
            let m = a.m.ok_or_else(|| Error::Parse("--m is required here".into()))?;
            put("p", value(&p));
            put("alpha", value(&alpha));
            put("m", json!(m));
            let r = theorems::elimination_set(f, d, m, &p, &alpha)?;
            let bound = theorems::thm1_bound(&p, &alpha);
            verdict(
                json!({
                    "family": r.family,
                    "union": r.union,
                    "t": r.t,
                    "certificate": certificate_json(&r.certificate),
                }),
                json!({ "union_size_at_most": value(&(int(m as i64) * &bound)), "t_below": value(&bound) }),
                r.certificate.passed(),
                failed_check(&r.certificate),
            )
        }
        Which::Convex => {
            let path = a.dist2.as_ref().ok_or_else(|| Error::Parse("--dist2 is required here".into()))?;
            let d2 = pivotal::json::dist_from_str(
                &std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
            )?;
            let q = rat("q", &a.q)?;
            let i = a.player.ok_or_else(|| Error::Parse("--player is required here".into()))?;
            put("dist2", json!(path.display().to_string()));
            put("q", value(&q));
            put("player", json!(i));
            let r = theorems::convex_decomposition_check(f, d, &d2, &q, i)?;
            verdict(
                json!({ "mixture_signed_difference": value(&r.mixed) }),
                json!({ "combination_of_signed_differences": value(&r.combined) }),
                r.ok,
                None,
            )
        }
        Which::EffectIdentity => {
            let mu = d.to_explicit();
            let r = analysis::effect_identity(f, &mu)?;
            let want = int(4) * &r.variance;
            let ok = r.sum_sq_effects == want;
            verdict(
                json!({
                    "sum_sq_effects": value(&r.sum_sq_effects),
                    "variance": value(&r.variance),
                    "ratio": r.ratio.as_ref().map(value),
                }),
                json!({ "four_times_variance": value(&want) }),
                ok,
                None,
            )
        }
    })
}

pub fn counterexample(a: CounterexampleArgs) -> Run {
    let (name, built) = match a.which {
        CeKind::Effect => ("effect", effect_counterexample(a.k)),
        CeKind::Influence => ("influence", build_influence_counterexample(a.k)),
    };
    let ce: Result<Counterexample, Certificate> = match built {
        Ok(ce) => Ok(ce),
        Err(Error::Certificate(c)) => Err(*c),
        Err(e) => return Err(e.into()),
    };
    let (certificate, n) = match &ce {
        Ok(ce) => (ce.certificate.clone(), ce.dist.n()),
        Err(c) => (c.clone(), (1usize << a.k) - 1),
    };
    // a failed certificate is reported but never written out
    if let (Ok(ce), true) = (&ce, certificate.passed()) {
        if let Some(path) = &a.out_fn {
            emit(Some(path), &function_to_string(&ce.function))?;
        }
        if let Some(path) = &a.out_dist {
            emit(Some(path), &dist_to_string(&ce.dist.clone().into()))?;
        }
    }
    print_json(&json!({
        "counterexample": name,
        "k": a.k,
        "n": n,
        "certificate": certificate_json(&certificate),
    }))?;
    Ok(certificate.passed())
}

pub fn sweep(a: SweepArgs) -> Run {
    let p = parse_rational("p", &a.p)?;
    let pivot_p = match &a.pivot_p {
        Some(s) => parse_rational("pivot-p", s)?,
        None => &p / int(2),
    };
    let exact = a.n <= MAX_EXACT_MAJP_N;
    let mut alphas = Vec::with_capacity(a.alpha_grid.len());
    for s in &a.alpha_grid {
        if s.trim() == "derived" {
            if !exact {
                return Err(Failure::usage("`derived` needs exact mode (n <= 12)"));
            }
            alphas.push(theorems::derived_alpha(a.n, &p)?);
        } else {
            alphas.push(parse_rational("alpha-grid", s)?);
        }
    }
    let rows = if exact {
        theorems::majp_tightness(a.n, &p, &pivot_p, &alphas)?
    } else {
        let samples = need("samples", a.samples)?;
        theorems::majp_tightness_mc(a.n, &p, &pivot_p, &alphas, samples, a.seed)?
    };
    let ok = rows.iter().all(|r| int(r.count as i64) < r.bound);
    if a.format == Format::Json {
        print_json(&json!({
            "n": a.n,
            "p": value(&p),
            "pivot_p": value(&pivot_p),
            "mode": if exact { "exact" } else { "monte-carlo" },
            "rows": rows,
        }))?;
    } else {
        let mut w = csv_writer();
        w.write_record(["alpha", "alpha_decimal", "count_or_estimate", "bound", "bound_decimal", "mode", "ci_halfwidth"])?;
        for r in &rows {
            let [al, ald] = cells(&r.alpha);
            let [b, bd] = cells(&r.bound);
            let mode = if r.exact { "exact" } else { "monte-carlo" };
            let ci = r.ci_halfwidth.map(report::decimal).unwrap_or_default();
            w.write_record([al, ald, r.count.to_string(), b, bd, mode.to_string(), ci])?;
        }
        w.flush()?;
    }
    Ok(ok)
}

use std::fmt::Write as _;
use std::io::Write as _;

use ldpcgm::asymptotics::{growth_rate_curve, threshold_report};
use ldpcgm::density_evolution::{
    check_regular_lambda, decoding_complexity, decoding_complexity_actual, fixed_point_margin, run,
    variable_regular_rho, ConstructionName, Curve, EnsembleSpec, SpecFile, DEFAULT_DEGREE_CAP,
};
use ldpcgm::enumerator::{concat_awd_ub_table, ldpc_awd_table};
use ldpcgm::simulator::{monte_carlo, write_csv, CodewordMode, DecoderKind, SweepConfig, SweepEnsemble};
use ldpcgm::LdpcParams;

use crate::config::{read_text, Flags, Resolved};
use crate::CliError;

/// Writes `body` to `--out`, or to stdout when no path is given.
fn emit(r: &Resolved, key: &str, body: &str) -> Result<(), CliError> {
    match r.path(key) {
        Some(p) => std::fs::write(&p, body).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}"))),
    }
}

fn csv_field<T: std::fmt::Display>(v: &ldpcgm::Result<T>) -> String {
    match v {
        Ok(x) => x.to_string(),
        Err(e) => format!("\"error: {}\"", e.to_string().replace('"', "'")),
    }
}

pub fn growth_rate(f: &Flags) -> Result<(), CliError> {
    let mut r = Resolved::new("growth-rate", f, &["j", "k", "grid", "base2", "out"])?;
    let j: usize = r.require("j")?;
    let k: usize = r.require("k")?;
    let grid = r.or_default("grid", 512usize)?;
    let base2 = r.or_default("base2", false)?;
    let points = growth_rate_curve(j, k, grid, base2)?;
    let mut s = r.header();
    s.push_str("a,w_o,w_ub,h_minus_redundancy\n");
    for p in points {
        writeln!(s, "{},{},{},{}", p.a, p.w_o, p.w_ub, p.random_coding_exponent).expect("string write");
    }
    emit(&r, "out", &s)
}

pub fn enumerate(f: &Flags) -> Result<(), CliError> {
    let mut r = Resolved::new("enumerate", f, &["n", "j", "k", "exact-cap", "out"])?;
    let n: usize = r.require("n")?;
    let j: usize = r.require("j")?;
    let k: usize = r.require("k")?;
    let cap = r.or_default("exact-cap", 512usize)?;
    if n > cap {
        return Err(CliError::Validation(format!(
            "n = {n} exceeds the exact-mode cap {cap}; raise --exact-cap (exact tables cost grows steeply with n) \
             or use growth-rate for the asymptotic exponents"
        )));
    }
    let params = LdpcParams::new(n, j, k)?;
    let outer = ldpc_awd_table(params)?;
    let concat = concat_awd_ub_table(params)?;
    let (lo, lc) = (outer.ln_values(), concat.ln_values());
    let mut s = r.header();
    s.push_str("l,n_o,n_ub,ln_n_o,ln_n_ub,n_o_symmetric\n");
    for l in 0..=n {
        let sym = outer.get(l) == outer.get(n - l);
        writeln!(s, "{l},{},{},{},{},{sym}", outer.get(l), concat.get(l), lo[l], lc[l]).expect("string write");
    }
    writeln!(s, "# total_n_o = {}", outer.total()).expect("string write");
    writeln!(s, "# total_n_ub = {}", concat.total()).expect("string write");
    emit(&r, "out", &s)
}

/// Spec from `--spec` with flag overrides, echoed back into `r`.
fn de_spec_file(r: &mut Resolved) -> Result<SpecFile, CliError> {
    let mut sf = match r.path("spec") {
        Some(p) => SpecFile::parse(&read_text(&p)?)?,
        None => SpecFile {
            construction: r
                .get::<ConstructionName>("construction")?
                .ok_or_else(|| CliError::Validation("de needs --construction or --spec".into()))?,
            base: None,
            k: None,
            q: r.require("q")?,
            epsilon: None,
            degree_cap: None,
            p: None,
        },
    };
    if let Some(c) = r.get("construction")? {
        sf.construction = c;
    }
    if let Some(b) = r.get("base")? {
        sf.base = Some(b);
    }
    if let Some(q) = r.get("q")? {
        sf.q = q;
    }
    sf.k = r.get("k")?.or(sf.k);
    sf.epsilon = r.get("epsilon")?.or(sf.epsilon);
    sf.degree_cap = r.get("degree-cap")?.or(sf.degree_cap);
    sf.p = r.get("p")?.or(sf.p);
    if sf.construction == ConstructionName::Punctured && sf.base.is_none() {
        sf.base = Some(ConstructionName::VariableRegular);
    }
    r.set("construction", sf.construction.as_str());
    r.set("q", sf.q);
    if let Some(b) = sf.base {
        r.set("base", b.as_str());
    }
    if let Some(k) = sf.k {
        r.set("k", k);
    }
    if let Some(e) = sf.epsilon {
        r.set("epsilon", e);
    }
    if let Some(c) = sf.degree_cap {
        r.set("degree-cap", c);
    }
    if let Some(p) = sf.p {
        r.set("p", p);
    }
    Ok(sf)
}

/// Edge-perspective coefficients of the non-trivial distribution:
/// `lambda` for check-regular, `rho` for variable-regular.
fn coefficients(sf: &SpecFile, spec: &EnsembleSpec<f64>) -> Result<Vec<f64>, CliError> {
    let name = match sf.construction {
        ConstructionName::Punctured => sf.base.unwrap_or(ConstructionName::VariableRegular),
        c => c,
    };
    let curve = match name {
        ConstructionName::CheckRegular => &spec.lambda,
        _ => &spec.rho,
    };
    if let Curve::Poly(d) = curve {
        return Ok(d.coeffs().to_vec());
    }
    let cap = sf.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP);
    let series = match name {
        ConstructionName::CheckRegular => {
            check_regular_lambda(sf.k.ok_or_else(|| CliError::Validation("check-regular needs k".into()))?, sf.q, cap)?
        }
        _ => variable_regular_rho(sf.q, cap)?,
    };
    Ok(series.coeffs().to_vec())
}

pub fn de(f: &Flags) -> Result<(), CliError> {
    let keys =
        ["construction", "base", "k", "q", "epsilon", "p", "degree-cap", "grid", "max-iters", "spec", "coeffs", "out"];
    let mut r = Resolved::new("de", f, &keys)?;
    let sf = de_spec_file(&mut r)?;
    let grid = r.or_default("grid", 10_000usize)?;
    let max_iters = r.or_default("max-iters", ldpcgm::density_evolution::DE_MAX_ITERS)?;
    let spec = sf.build::<f64>()?;
    let margin = fixed_point_margin(&spec, grid)?;
    let de_run = run(&spec, max_iters);
    let coeffs = coefficients(&sf, &spec)?;

    let mut s = r.header();
    let mut row = |k: &str, v: String| writeln!(s, "{k},{v}").expect("string write");
    row("quantity", "value".into());
    row("channel_q", spec.q.to_string());
    row("rate", spec.rate.to_string());
    row("pilot_fraction", spec.pilot_fraction.to_string());
    row("m_eps", spec.m_eps.map_or("none".into(), |m| m.to_string()));
    row("coefficients", coeffs.len().to_string());
    row("complexity_bound", csv_field(&decoding_complexity(&spec)));
    row("complexity_actual", csv_field(&decoding_complexity_actual(&spec)));
    row("margin", margin.value.to_string());
    row("margin_at", margin.at.to_string());
    row("de_iterations", de_run.iterations().to_string());
    row("de_converged", de_run.converged.to_string());
    row("de_x3", de_run.last().x3.to_string());
    row("de_success", de_run.success().to_string());
    emit(&r, "out", &s)?;

    if r.path("coeffs").is_some() {
        let mut c = r.header();
        c.push_str("degree,coefficient\n");
        for (i, v) in coeffs.iter().enumerate() {
            writeln!(c, "{},{v}", i + 1).expect("string write");
        }
        emit(&r, "coeffs", &c)?;
    }
    Ok(())
}

pub fn simulate(f: &Flags) -> Result<(), CliError> {
    let keys = [
        "construction",
        "j",
        "k",
        "n",
        "q",
        "trials",
        "seed",
        "decoder",
        "max-iters",
        "codeword",
        "design-q",
        "epsilon",
        "degree-cap",
        "out",
    ];
    let mut r = Resolved::new("simulate", f, &keys)?;
    let construction = r.or_default("construction", "gallager".to_string())?;
    let n: usize = r.require("n")?;
    let q_grid: Vec<f64> = r.list("q")?.ok_or_else(|| CliError::Validation("simulate needs --q".into()))?;
    let trials = r.or_default("trials", 100usize)?;
    let seed = r.or_default("seed", 0u64)?;
    let decoders: Vec<DecoderKind> = match r.list("decoder")? {
        Some(d) => d,
        None => {
            r.set("decoder", "bp,ml");
            vec![DecoderKind::Bp, DecoderKind::Ml]
        }
    };
    let max_iters = r.or_default("max-iters", 1000usize)?;
    let (ensemble, default_codeword) = if construction == "gallager" {
        let params = LdpcParams::new(n, r.require("j")?, r.require("k")?)?;
        (SweepEnsemble::Gallager(params), "random")
    } else {
        let name: ConstructionName = construction.parse()?;
        if name == ConstructionName::Punctured {
            return Err(CliError::Validation("simulate supports gallager, check-regular and variable-regular".into()));
        }
        let sf = SpecFile {
            construction: name,
            base: None,
            k: r.get("k")?,
            q: r.require("design-q")?,
            epsilon: Some(r.require("epsilon")?),
            degree_cap: r.get("degree-cap")?,
            p: None,
        };
        (SweepEnsemble::Spec { spec: Box::new(sf.build()?), n }, "zero")
    };
    let codeword = match r.or_default("codeword", default_codeword.to_string())?.as_str() {
        "random" => CodewordMode::Random,
        "zero" => CodewordMode::Zero,
        other => return Err(CliError::Validation(format!("codeword must be random or zero, got {other:?}"))),
    };
    let config = SweepConfig { ensemble, q_grid, trials, decoders, master_seed: seed, max_iters, codeword };
    let rows = monte_carlo(&config)?;
    let mut buf = r.header().into_bytes();
    write_csv(&rows, &mut buf).expect("writing to memory");
    emit(&r, "out", &String::from_utf8(buf).expect("csv is utf-8"))
}

pub fn threshold(f: &Flags) -> Result<(), CliError> {
    let r = Resolved::new("threshold", f, &["j", "k", "out"])?;
    let rep = threshold_report(r.require("j")?, r.require("k")?)?;
    let mut s = r.header();
    let mut row = |k: &str, v: String| writeln!(s, "{k},{v}").expect("string write");
    row("quantity", "value".into());
    row("rate", rep.rate.to_string());
    row("delta_o", csv_field(&rep.delta_o));
    row("delta_prime", csv_field(&rep.delta_prime));
    row("delta_gv", rep.delta_gv.to_string());
    row("consistent", rep.is_consistent().to_string());
    row("m_estimate_k", rep.m_estimate.k.to_string());
    row("m_estimate_delta_l", rep.m_estimate.delta_l.to_string());
    row("m_estimate_m1", rep.m_estimate.m1.to_string());
    row("m_estimate_m2", rep.m_estimate.m2.to_string());
    emit(&r, "out", &s)
}

use std::path::PathBuf;

use ptnet::dynamics::{norm_trace_with, pst_fidelity_with, transferable_state_with};
use ptnet::io::read_state_file;
use ptnet::pseudo::counterpart_from;
use ptnet::{
    analytic_eigensystem, build_hamiltonian, build_spin_ensemble, classify_phase,
    coalescence_distance, coalescent_state, dressed_eigenfunctions, metric_operator,
    product_spectrum, tau, Branch, Chain, ComplexMatrix, Phase, PotentialKind, State,
};
use serde_json::{json, Value};

use crate::args::{
    ChainArgs, Command, CubeArgs, EvolveArgs, Format, InitialSpec, OutputArgs, PhaseArgs,
    Potential, ScanArgs, TimeSpec,
};
use crate::emit::{complex_list, document, matrix, num, Csv};

/// Largest chain accepted on the command line.
pub const MAX_SITES: usize = 4096;

#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<ptnet::Error> for Failure {
    fn from(e: ptnet::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

/// Finished output of one command, written only after all work succeeded.
pub struct Rendered {
    pub body: String,
    pub output: Option<PathBuf>,
    pub report: Option<(PathBuf, String)>,
    pub notice: Option<String>,
}

impl Rendered {
    fn new(body: String, out: &OutputArgs) -> Self {
        Self {
            body,
            output: out.output.clone(),
            report: None,
            notice: None,
        }
    }
}

pub fn run(command: &Command) -> Result<Rendered, Failure> {
    match command {
        Command::Spectrum(a) => spectrum(a),
        Command::Eigensystem(a) => eigensystem(a),
        Command::EpScan(a) => ep_scan(a),
        Command::Metric(a) => metric(a),
        Command::Hypercube(a) => hypercube(a),
        Command::Evolve(a) => evolve(a, false),
        Command::Pst(a) => evolve(a, true),
        Command::Phase(a) => phase(a),
    }
}

fn check_sites(n: usize) -> Result<(), Failure> {
    if n == 0 || n > MAX_SITES {
        return Err(Failure::Invalid(format!("--sites must lie in 1..={MAX_SITES}, got {n}")));
    }
    Ok(())
}

fn check_gamma(g: f64) -> Result<(), Failure> {
    if !g.is_finite() {
        return Err(Failure::Invalid(format!("gamma must be finite, got {g}")));
    }
    Ok(())
}

fn kind(p: Potential) -> PotentialKind {
    match p {
        Potential::Imag => PotentialKind::Imaginary,
        Potential::Real => PotentialKind::Real,
    }
}

fn potential_name(p: Potential) -> &'static str {
    match p {
        Potential::Imag => "imag",
        Potential::Real => "real",
    }
}

fn chain_spec(a: &ChainArgs) -> Result<Chain, Failure> {
    check_sites(a.sites)?;
    check_gamma(a.gamma)?;
    Ok(Chain::new(a.sites, a.gamma, kind(a.potential))?)
}

fn chain_meta(command: &str, a: &ChainArgs) -> Value {
    json!({
        "command": command,
        "sites": a.sites,
        "gamma": a.gamma,
        "potential": potential_name(a.potential),
    })
}

fn spectrum(a: &ChainArgs) -> Result<Rendered, Failure> {
    let sys = analytic_eigensystem(&chain_spec(a)?)?;
    let body = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => document(
            chain_meta("spectrum", a),
            json!({ "eigenvalues": complex_list(&sys.eigenvalues), "spacing": sys.spacing() }),
        ),
        Format::Csv => {
            let mut csv = Csv::new(&["n", "re", "im"]);
            for (k, z) in sys.eigenvalues.iter().enumerate() {
                csv.row(&[(k + 1).to_string(), num(z.re), num(z.im)]);
            }
            csv.finish()
        }
    };
    Ok(Rendered::new(body, &a.out))
}

fn eigensystem(a: &ChainArgs) -> Result<Rendered, Failure> {
    let sys = analytic_eigensystem(&chain_spec(a)?)?;
    let body = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let vectors: Vec<Value> =
                sys.right_vectors.iter().map(|v| complex_list(v.amplitudes())).collect();
            document(
                chain_meta("eigensystem", a),
                json!({
                    "eigenvalues": complex_list(&sys.eigenvalues),
                    "right_vectors": vectors,
                    "pt_sign": sys.pt_sign,
                }),
            )
        }
        Format::Csv => {
            let mut csv = Csv::new(&["n", "l", "eigen_re", "eigen_im", "re", "im"]);
            for (k, (e, v)) in sys.eigenvalues.iter().zip(&sys.right_vectors).enumerate() {
                for (l, z) in v.amplitudes().iter().enumerate() {
                    csv.row(&[
                        (k + 1).to_string(),
                        (l + 1).to_string(),
                        num(e.re),
                        num(e.im),
                        num(z.re),
                        num(z.im),
                    ]);
                }
            }
            csv.finish()
        }
    };
    Ok(Rendered::new(body, &a.out))
}

fn ep_scan(a: &ScanArgs) -> Result<Rendered, Failure> {
    check_sites(a.sites)?;
    if a.gammas.is_empty() {
        return Err(Failure::Invalid("--gammas needs at least one value".into()));
    }
    let mut scans = Vec::with_capacity(a.gammas.len());
    for &g in &a.gammas {
        check_gamma(g)?;
        let spec = Chain::imaginary(a.sites, g)?;
        scans.push((g, dressed_eigenfunctions(&spec)?, coalescence_distance(&spec)?));
    }
    let meta = json!({ "command": "ep-scan", "sites": a.sites, "gammas": a.gammas });
    let distances: Vec<Value> = scans
        .iter()
        .map(|(g, _, d)| json!({ "gamma": g, "literal": d.literal, "phase_aligned": d.phase_aligned }))
        .collect();
    let body = match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let dressed: Vec<Value> = scans
                .iter()
                .map(|(g, states, _)| {
                    let rows: Vec<Value> = states.iter().map(|s| complex_list(s.amplitudes())).collect();
                    json!({ "gamma": g, "dressed": rows })
                })
                .collect();
            let target = coalescent_state::<f64>(a.sites, Branch::Plus);
            document(
                meta.clone(),
                json!({
                    "scans": dressed,
                    "distances": distances,
                    "coalescent": complex_list(target.amplitudes()),
                }),
            )
        }
        Format::Csv => {
            let mut csv = Csv::new(&["gamma", "n", "l", "re", "im"]);
            for (g, states, _) in &scans {
                for (k, s) in states.iter().enumerate() {
                    for (l, z) in s.amplitudes().iter().enumerate() {
                        csv.row(&[num(*g), (k + 1).to_string(), (l + 1).to_string(), num(z.re), num(z.im)]);
                    }
                }
            }
            csv.finish()
        }
    };
    let mut out = Rendered::new(body, &a.out);
    out.report = a
        .report
        .clone()
        .map(|p| (p, document(meta, json!({ "distances": distances }))));
    Ok(out)
}

fn metric(a: &ChainArgs) -> Result<Rendered, Failure> {
    let spec = chain_spec(a)?;
    let pair = metric_operator(&spec)?;
    let h = counterpart_from(&spec, &pair)?;
    let named: [(&str, &ComplexMatrix<f64>); 4] = [
        ("eta", &pair.eta),
        ("rho", &pair.rho),
        ("rho_inv", &pair.rho_inv),
        ("counterpart", &h),
    ];
    let body = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => document(
            chain_meta("metric", a),
            json!({
                "eta": matrix(&pair.eta),
                "rho": matrix(&pair.rho),
                "rho_inv": matrix(&pair.rho_inv),
                "counterpart": matrix(&h),
                "route_discrepancy": pair.route_discrepancy,
            }),
        ),
        Format::Csv => {
            let mut csv = Csv::new(&["matrix", "row", "col", "re", "im"]);
            for (name, m) in named {
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        let z = m[(r, c)];
                        csv.row(&[name.into(), (r + 1).to_string(), (c + 1).to_string(), num(z.re), num(z.im)]);
                    }
                }
            }
            csv.finish()
        }
    };
    Ok(Rendered::new(body, &a.out))
}

fn hypercube(a: &CubeArgs) -> Result<Rendered, Failure> {
    check_gamma(a.gamma)?;
    let ensemble = build_spin_ensemble(a.dim, a.gamma)?;
    let product = product_spectrum(&ensemble)?;
    let mut blocks = Vec::new();
    let mut deviation = 0.0f64;
    for b in &ensemble.blocks {
        let spec = Chain::imaginary(b.two_s + 1, a.gamma)?;
        let reference = build_hamiltonian(&spec)?;
        deviation = deviation.max(b.block.max_abs_diff(&reference));
        blocks.push((b, analytic_eigensystem(&spec)?));
    }
    let body = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let list: Vec<Value> = blocks
                .iter()
                .map(|(b, sys)| {
                    json!({
                        "two_s": b.two_s,
                        "size": b.two_s + 1,
                        "multiplicity": b.multiplicity,
                        "eigenvalues": complex_list(&sys.eigenvalues),
                    })
                })
                .collect();
            document(
                json!({ "command": "hypercube", "dim": a.dim, "gamma": a.gamma }),
                json!({
                    "blocks": list,
                    "max_block_deviation": deviation,
                    "ensemble_eigenvalues": complex_list(&product.eigenvalues),
                    "max_residual": product.max_residual,
                }),
            )
        }
        Format::Csv => {
            let mut csv = Csv::new(&["two_s", "multiplicity", "n", "re", "im"]);
            for (b, sys) in &blocks {
                for (k, z) in sys.eigenvalues.iter().enumerate() {
                    csv.row(&[
                        b.two_s.to_string(),
                        b.multiplicity.to_string(),
                        (k + 1).to_string(),
                        num(z.re),
                        num(z.im),
                    ]);
                }
            }
            csv.finish()
        }
    };
    Ok(Rendered::new(body, &a.out))
}

fn initial_state(spec: &InitialSpec, system: &ptnet::Eigensystem) -> Result<State, Failure> {
    let n = system.dim();
    let state = match spec {
        InitialSpec::Site(k) => State::site(n, *k)?,
        InitialSpec::Transferable(l) => transferable_state_with(*l, system)?,
        InitialSpec::File(path) => read_state_file(path)?,
    };
    if state.dim() != n {
        return Err(Failure::Invalid(format!(
            "initial state has {} amplitudes but the chain has {n} sites",
            state.dim()
        )));
    }
    Ok(state)
}

fn evolve(a: &EvolveArgs, pst: bool) -> Result<Rendered, Failure> {
    let spec = chain_spec(&a.chain)?;
    if a.steps == 0 {
        return Err(Failure::Invalid("--steps must be at least 1".into()));
    }
    let system = analytic_eigensystem(&spec)?;
    let initial = a.initial.clone().unwrap_or(if pst {
        InitialSpec::Transferable(1)
    } else {
        InitialSpec::Site(1)
    });
    let state = initial_state(&initial, &system)?;
    let period = tau(&spec)?;
    let t_max = match a.t_max.unwrap_or(TimeSpec::Taus(if pst { 2.0 } else { 1.0 })) {
        TimeSpec::Absolute(t) => t,
        TimeSpec::Taus(k) => k * period,
    };
    let eta = match spec.kind {
        PotentialKind::Imaginary => metric_operator(&spec)?.eta,
        PotentialKind::Real => ComplexMatrix::identity(spec.n_sites),
    };
    let trace = norm_trace_with(&state, &system, &eta, t_max, a.steps + 1)?;
    let transfer = if pst { Some(pst_fidelity_with(&state, &system)?) } else { None };

    let command = if pst { "pst" } else { "evolve" };
    let mut meta = chain_meta(command, &a.chain);
    meta["initial"] = json!(match &initial {
        InitialSpec::Site(k) => format!("site:{k}"),
        InitialSpec::Transferable(l) => format!("transferable:{l}"),
        InitialSpec::File(p) => format!("file:{}", p.display()),
    });
    meta["t_max"] = json!(t_max);
    meta["steps"] = json!(a.steps);

    let last = trace.dirac_norms.len() - 1;
    let mut summary = json!({
        "tau": period,
        "t_max": t_max,
        "dirac_norm_start": trace.dirac_norms[0],
        "dirac_norm_end": trace.dirac_norms[last],
        "dirac_norm_max": trace.dirac_norms.iter().cloned().fold(f64::MIN, f64::max),
        "eta_norm_drift": trace.eta_norm_drift(),
    });
    if let Some(r) = &transfer {
        summary["fidelity"] = json!(r.fidelity);
        summary["global_phase"] = json!({ "re": r.global_phase.re, "im": r.global_phase.im });
    }

    let body = match a.chain.out.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let amplitudes: Vec<Value> =
                trace.snapshots.iter().map(|s| complex_list(s.amplitudes())).collect();
            document(
                meta.clone(),
                json!({
                    "t": trace.times,
                    "dirac_norm": trace.dirac_norms,
                    "eta_norm": trace.eta_norms,
                    "amplitudes": amplitudes,
                    "summary": summary,
                }),
            )
        }
        Format::Csv => {
            let mut csv = Csv::new(&["t", "site", "re", "im", "dirac_norm", "eta_norm"]);
            for (k, snap) in trace.snapshots.iter().enumerate() {
                let (t, dn, en) = (num(trace.times[k]), num(trace.dirac_norms[k]), num(trace.eta_norms[k]));
                for (l, z) in snap.amplitudes().iter().enumerate() {
                    csv.row(&[t.clone(), (l + 1).to_string(), num(z.re), num(z.im), dn.clone(), en.clone()]);
                }
            }
            csv.finish()
        }
    };
    let mut out = Rendered::new(body, &a.chain.out);
    out.notice = transfer
        .as_ref()
        .map(|r| format!("fidelity at tau = {:.12} (tau = {:.12})", r.fidelity, r.tau));
    out.report = a.report.clone().map(|p| (p, document(meta, summary)));
    Ok(out)
}

fn phase_name(p: Phase) -> &'static str {
    match p {
        Phase::Unbroken => "unbroken",
        Phase::Critical => "critical",
        Phase::Broken => "broken",
    }
}

fn phase(a: &PhaseArgs) -> Result<Rendered, Failure> {
    check_sites(a.sites)?;
    let gammas: Vec<f64> = a.gamma.into_iter().chain(a.gammas.iter().copied()).collect();
    if gammas.is_empty() {
        return Err(Failure::Invalid("give --gamma or --gammas".into()));
    }
    let mut reports = Vec::with_capacity(gammas.len());
    for &g in &gammas {
        check_gamma(g)?;
        reports.push((g, classify_phase(&Chain::imaginary(a.sites, g)?)?));
    }
    let body = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let list: Vec<Value> = reports
                .iter()
                .map(|(g, r)| {
                    json!({
                        "gamma": g,
                        "phase": phase_name(r.phase),
                        "degree": r.degree,
                        "idealized_degree": r.idealized_degree,
                        "eigenvalues": complex_list(&r.eigenvalues),
                    })
                })
                .collect();
            document(json!({ "command": "phase", "sites": a.sites, "gammas": gammas }), json!(list))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["gamma", "phase", "degree", "idealized_degree"]);
            for (g, r) in &reports {
                csv.row(&[num(*g), phase_name(r.phase).into(), num(r.degree), num(r.idealized_degree)]);
            }
            csv.finish()
        }
    };
    Ok(Rendered::new(body, &a.out))
}

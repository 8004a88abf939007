use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use nblp_core::bounds::{self, BoundsConfig, BoundsReport};
use nblp_core::circuit::export_text;
use nblp_core::nblp::{
    brute_force_solver, episode_distribution, fixed_realization, generate_samples, majority_vote,
    run_episode, EpisodeOutcome, ExactSampler, PrepMode, ProblemInstance, Realization, SampleSet,
    VoteResult, BRUTE_FORCE_CAP,
};
use nblp_core::qram::{
    predicted_qram_metrics, query_load_counts, synth_qram, MemoryTable, QramMode,
};
use nblp_core::rng::stream_rng;
use nblp_core::synth::{
    aqft_error, aqft_t_count_estimate, synth_aqft, synth_bv_kernel, synth_qft, AqftSpec,
    RotationCostModel,
};
use nblp_core::{BitString, Circuit, ExactProb};

use crate::config::FileConfig;
use crate::{
    BoundsArgs, Choice, Cli, CliError, Command, FormatArg, ModeArg, PrepArg, RealizationArg,
    SamplesAction, SynthKind,
};

/// Largest AQFT for which the matrix error is computed.
const AQFT_ERROR_MAX_L: usize = 8;

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Synth(kind) => synth(kind, &cfg),
        Command::Simulate(args) => simulate(args, &cfg),
        Command::Estimate(args) => estimate(args, &cfg),
        Command::Sweep(args) => sweep(args, &cfg),
        Command::Samples(SamplesAction::Generate(args)) => samples_generate(args, &cfg),
        Command::Samples(SamplesAction::Inspect(args)) => samples_inspect(args, &cfg),
    }
}

fn emit(cfg: &FileConfig, output: Option<std::path::PathBuf>, body: &str) -> Result<(), CliError> {
    match cfg.get(output, "output")? {
        Some(path) => std::fs::write(&path, body)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))
}

fn qram_mode(cfg: &FileConfig, cli: Option<Choice<ModeArg>>) -> Result<QramMode, CliError> {
    Ok(match cfg.or(cli, "mode", Choice(ModeArg::PerBit))?.0 {
        ModeArg::PerBit => QramMode::PerBit,
        ModeArg::SharedRouting => QramMode::SharedRouting,
    })
}

fn circuit_metrics(kind: &str, c: &Circuit) -> Map<String, Value> {
    let m = c.metrics();
    let mut out = Map::new();
    out.insert("kind".into(), json!(kind));
    out.insert("label".into(), json!(c.label()));
    out.insert("width".into(), json!(m.width));
    out.insert("gate_count".into(), json!(m.gate_count));
    out.insert("total_depth".into(), json!(m.total_depth));
    out.insert("t_count".into(), json!(m.t_count));
    out.insert("t_depth".into(), json!(m.t_depth));
    out.insert("gate_histogram".into(), json!(m.gate_histogram));
    out
}

fn finish_synth(
    cfg: &FileConfig,
    circuit: &Circuit,
    circuit_path: Option<&Path>,
    report: Map<String, Value>,
    output: Option<std::path::PathBuf>,
) -> Result<(), CliError> {
    if let Some(path) = circuit_path {
        std::fs::write(path, export_text(circuit))
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    emit(cfg, output, &to_json(&Value::Object(report)))
}

/// Cell `gamma` holds `gamma mod 2^n` followed by a 0 label.
fn default_memory(n: usize, q: usize) -> Result<MemoryTable, CliError> {
    let cells = (0..1u64 << q)
        .map(|g| BitString::new(g & ((1u64 << n) - 1), n).push(false))
        .collect();
    Ok(MemoryTable::new(n, q, cells)?)
}

fn synth(kind: SynthKind, cfg: &FileConfig) -> Result<(), CliError> {
    match kind {
        SynthKind::Qram(a) => {
            let n: usize = cfg.require(a.n, "n")?;
            let q: usize = cfg.require(a.q, "q")?;
            if n == 0 || q == 0 || q > 16 || n > 32 {
                return Err(CliError::invalid(
                    "synth qram needs 1 <= n <= 32 and 1 <= q <= 16",
                ));
            }
            let mode = qram_mode(cfg, a.mode)?;
            let memory = match &a.memory {
                Some(path) => MemoryTable::from_json(&read(path)?)?,
                None => default_memory(n, q)?,
            };
            let circuit = synth_qram(n, q, &memory, mode)?;
            let predicted = predicted_qram_metrics(n, q, mode);
            let (raw, emitted) = (0..=n)
                .map(|bit| query_load_counts(&memory.column(bit)))
                .fold((0, 0), |(r, e), (r2, e2)| (r + r2, e + e2));
            let mut report = circuit_metrics("qram", &circuit);
            report.insert("n".into(), json!(n));
            report.insert("q".into(), json!(q));
            report.insert("mode".into(), json!(mode));
            report.insert("n_routers".into(), json!(predicted.n_routers));
            report.insert("predicted_width".into(), json!(predicted.width));
            report.insert("predicted_t_depth".into(), json!(predicted.t_depth));
            report.insert("predicted_t_count".into(), json!(predicted.t_count));
            report.insert(
                "predicted_coupling_t_depth".into(),
                json!(predicted.coupling_t_depth),
            );
            report.insert("query_loads_raw".into(), json!(raw));
            report.insert("query_loads_emitted".into(), json!(emitted));
            finish_synth(
                cfg,
                &circuit,
                a.circuit.circuit.as_deref(),
                report,
                a.out.output,
            )
        }
        SynthKind::Qft(a) => {
            let l: usize = cfg.require(a.l, "l")?;
            if l == 0 || l > 64 {
                return Err(CliError::invalid("synth qft needs 1 <= l <= 64"));
            }
            let circuit = synth_qft(l);
            let mut report = circuit_metrics("qft", &circuit);
            report.insert("l".into(), json!(l));
            report.insert("crk_count".into(), json!(l * (l - 1) / 2));
            finish_synth(
                cfg,
                &circuit,
                a.circuit.circuit.as_deref(),
                report,
                a.out.output,
            )
        }
        SynthKind::Aqft(a) => {
            let l: usize = cfg.require(a.l, "l")?;
            if l > 64 {
                return Err(CliError::invalid("synth aqft needs l <= 64"));
            }
            let delta: Option<f64> = cfg.get(a.delta, "delta")?;
            let spec = match (cfg.get(a.beta, "beta")?, delta) {
                (Some(beta), d) => AqftSpec::with_delta(l, beta, d.unwrap_or(1.0))?,
                (None, Some(d)) => AqftSpec::for_precision(l, d)?,
                (None, None) => {
                    return Err(CliError::invalid("synth aqft needs --beta or --delta"))
                }
            };
            let model = RotationCostModel::new(
                cfg.or(a.c_rz, "c_rz", 3.0)?,
                cfg.get(a.rz_precision, "rz_precision")?,
            )?;
            let circuit = synth_aqft(&spec)?;
            let mut report = circuit_metrics("aqft", &circuit);
            report.insert("l".into(), json!(l));
            report.insert("beta".into(), json!(spec.beta));
            report.insert("delta".into(), json!(spec.delta_target));
            report.insert("crk_count".into(), json!(spec.crk_count()));
            let error = (l <= AQFT_ERROR_MAX_L)
                .then(|| aqft_error::<f64>(&spec))
                .transpose()?;
            report.insert("aqft_error".into(), json!(error));
            report.insert("c_rz".into(), json!(model.c_rz));
            report.insert("rz_precision".into(), json!(model.precision_for(&spec)));
            report.insert(
                "t_count_estimate".into(),
                json!(aqft_t_count_estimate(&spec, &model)),
            );
            finish_synth(
                cfg,
                &circuit,
                a.circuit.circuit.as_deref(),
                report,
                a.out.output,
            )
        }
        SynthKind::Bv(a) => {
            let n: usize = cfg.require(a.n, "n")?;
            if n == 0 || n > 63 {
                return Err(CliError::invalid("synth bv needs 1 <= n <= 63"));
            }
            let circuit = synth_bv_kernel(n);
            let mut report = circuit_metrics("bv", &circuit);
            report.insert("n".into(), json!(n));
            finish_synth(
                cfg,
                &circuit,
                a.circuit.circuit.as_deref(),
                report,
                a.out.output,
            )
        }
    }
}

fn instance_from(
    cfg: &FileConfig,
    n: Option<usize>,
    eta: Option<f64>,
    seed: u64,
    secret: Option<String>,
) -> Result<ProblemInstance, CliError> {
    let eta: f64 = cfg.require(eta, "eta")?;
    match cfg.get(secret, "secret")? {
        Some(text) => {
            let secret: BitString = text.parse()?;
            if let Some(n) = cfg.get(n, "n")? {
                if n != secret.len() {
                    return Err(CliError::invalid(format!(
                        "secret has {} bits but n = {n}",
                        secret.len()
                    )));
                }
            }
            Ok(ProblemInstance::new(secret, eta, seed)?)
        }
        None => Ok(ProblemInstance::random(cfg.require(n, "n")?, eta, seed)?),
    }
}

#[derive(Serialize)]
struct ExactComparison {
    ps: f64,
    pf_total: f64,
    p_kstar: f64,
}

#[derive(Serialize)]
struct SimulateReport {
    n: usize,
    q: usize,
    eta: f64,
    secret: BitString,
    seed: u64,
    shots: usize,
    prep_mode: PrepMode,
    realization: Realization,
    successes: usize,
    p_kstar_empirical: f64,
    ps_empirical: f64,
    pf_empirical: f64,
    conditional_success_rate: Option<f64>,
    vote: Option<VoteResult>,
    exact: Option<ExactComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    episodes: Option<Vec<EpisodeOutcome>>,
}

#[derive(Serialize)]
struct EpisodeRow {
    shot: usize,
    k_star: u8,
    k: String,
}

fn simulate(a: crate::SimulateArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let seed: u64 = cfg.require(a.seed, "seed")?;
    let shots: usize = cfg.or(a.shots, "shots", 1000)?;
    let prep = match cfg
        .or(a.prep_mode, "prep_mode", Choice(PrepArg::FastExact))?
        .0
    {
        PrepArg::Ideal => PrepMode::Ideal,
        PrepArg::Qram => PrepMode::Qram,
        PrepArg::FastExact => PrepMode::FastExact,
    };
    let format = cfg.or(a.format, "format", Choice(FormatArg::Json))?.0;

    let (instance, q, fixed, realization) = match &a.samples {
        Some(path) => {
            let set = SampleSet::from_json(&read(path)?)?;
            let instance = ProblemInstance::new(set.secret, set.eta, seed)?;
            (instance, set.q, Some(set), Realization::Fixed)
        }
        None => {
            let instance = instance_from(cfg, a.n, a.eta, seed, a.secret.clone())?;
            let q: usize = cfg.require(a.q, "q")?;
            let realization = match cfg
                .or(a.realization, "realization", Choice(RealizationArg::Fixed))?
                .0
            {
                RealizationArg::Fixed => Realization::Fixed,
                RealizationArg::Fresh => Realization::Fresh,
            };
            let fixed = match realization {
                Realization::Fixed => Some(fixed_realization(&instance, q)?),
                Realization::Fresh => None,
            };
            (instance, q, fixed, realization)
        }
    };
    if q > instance.n {
        return Err(nblp_core::Error::QOutOfRange { n: instance.n, q }.into());
    }
    if prep == PrepMode::FastExact && instance.n > 24 {
        return Err(CliError::invalid("fast-exact sampling supports n <= 24"));
    }
    if let Some(set) = &fixed {
        if prep != PrepMode::FastExact {
            // Surface cap violations before spawning shots.
            run_episode(set, prep, &mut stream_rng(seed, 0))?;
        }
    }

    let sampler = match (&fixed, prep) {
        (Some(set), PrepMode::FastExact) => Some(ExactSampler::new(set)),
        _ => None,
    };
    let outcomes = (0..shots as u64)
        .into_par_iter()
        .map(|shot| {
            let mut rng = stream_rng(seed, shot);
            match (&fixed, &sampler) {
                (_, Some(s)) => Ok(s.sample(&mut rng)),
                (Some(set), None) => run_episode(set, prep, &mut rng),
                (None, _) => {
                    let set = generate_samples(&instance, q, &mut rng)?;
                    run_episode(&set, prep, &mut rng)
                }
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    if format == FormatArg::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (shot, o) in outcomes.iter().enumerate() {
            w.serialize(EpisodeRow {
                shot,
                k_star: o.k_star as u8,
                k: o.k.map(|k| k.to_string()).unwrap_or_default(),
            })
            .map_err(|e| CliError::invalid(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::invalid(e.to_string()))?;
        return emit(
            cfg,
            a.out.output,
            &String::from_utf8(bytes).expect("utf-8 csv"),
        );
    }

    let successes = outcomes.iter().filter(|o| o.k_star).count();
    let hits = outcomes
        .iter()
        .filter(|o| o.k == Some(instance.secret))
        .count();
    let frac = |x: usize| {
        if shots == 0 {
            0.0
        } else {
            x as f64 / shots as f64
        }
    };
    let m_target = cfg.or(a.m_target, "m_target", successes)?;
    let vote = if m_target == 0 {
        None
    } else {
        Some(majority_vote(&outcomes, m_target)?)
    };
    let exact = fixed.as_ref().map(|set| {
        let dist = episode_distribution(set);
        let ps = bounds::exact_ps::<f64>(set);
        let p_kstar: f64 = dist.iter().skip(1).step_by(2).sum();
        ExactComparison {
            ps,
            pf_total: p_kstar - ps,
            p_kstar,
        }
    });
    let report = SimulateReport {
        n: instance.n,
        q,
        eta: instance.eta,
        secret: instance.secret,
        seed,
        shots,
        prep_mode: prep,
        realization,
        successes,
        p_kstar_empirical: frac(successes),
        ps_empirical: frac(hits),
        pf_empirical: frac(successes - hits),
        conditional_success_rate: (successes > 0).then(|| hits as f64 / successes as f64),
        vote,
        exact,
        episodes: (!a.summary_only).then_some(outcomes),
    };
    emit(cfg, a.out.output, &to_json(&report))
}

fn bounds_config(
    cfg: &FileConfig,
    b: &BoundsArgs,
    n: usize,
    q: usize,
) -> Result<BoundsConfig, CliError> {
    Ok(BoundsConfig {
        n,
        q,
        eta: cfg.require(b.eta, "eta")?,
        t: cfg.require(b.t, "t")?,
        epsilon: cfg.require(b.epsilon, "epsilon")?,
        delta: cfg.require(b.delta, "delta")?,
    })
}

fn estimate(a: crate::EstimateArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let n: usize = cfg.require(a.n, "n")?;
    let q: usize = cfg.require(a.q, "q")?;
    if n == 0 || n > 40 {
        return Err(CliError::invalid("estimate needs 1 <= n <= 40"));
    }
    let config = bounds_config(cfg, &a.bounds, n, q)?;
    config.validate()?;
    let report: BoundsReport = bounds::tradeoff_report(&config, qram_mode(cfg, a.bounds.mode)?)?;
    emit(cfg, a.out.output, &to_json(&report))
}

fn sweep(a: crate::SweepArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let n_min: usize = cfg.require(a.n_min, "n_min")?;
    let n_max: usize = cfg.or(a.n_max, "n_max", n_min)?;
    let q_min: usize = cfg.or(a.q_min, "q_min", 1)?;
    let q_max: Option<usize> = cfg.get(a.q_max, "q_max")?;
    if n_min == 0 || n_max < n_min || n_max > 40 || q_min == 0 {
        return Err(CliError::invalid(
            "sweep needs 1 <= n_min <= n_max <= 40 and q_min >= 1",
        ));
    }
    let mode = qram_mode(cfg, a.bounds.mode)?;
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let hi = q_max.unwrap_or(n).min(n);
        for q in q_min..=hi {
            let config = bounds_config(cfg, &a.bounds, n, q)?;
            config.validate()?;
            rows.push(bounds::tradeoff_report(&config, mode)?);
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row)
            .map_err(|e| CliError::invalid(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::invalid(e.to_string()))?;
    emit(
        cfg,
        a.out.output,
        &String::from_utf8(bytes).expect("utf-8 csv"),
    )
}

fn samples_generate(a: crate::GenerateArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let seed: u64 = cfg.require(a.seed, "seed")?;
    let instance = instance_from(cfg, a.n, a.eta, seed, a.secret)?;
    let q: usize = cfg.require(a.q, "q")?;
    if q > 20 {
        return Err(CliError::invalid("samples generate supports q <= 20"));
    }
    let set = fixed_realization(&instance, q)?;
    emit(cfg, a.out.output, &to_json(&set))
}

#[derive(Serialize)]
struct InspectReport {
    n: usize,
    q: usize,
    eta: f64,
    secret: BitString,
    entries: usize,
    errors: usize,
    error_rate: f64,
    exact_ps: f64,
    exact_ps_rational: String,
    brute_force: Option<BitString>,
    brute_force_matches_secret: Option<bool>,
}

fn samples_inspect(a: crate::InspectArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let set = SampleSet::from_json(&read(&a.file)?)?;
    let errors = set.error_count();
    let brute = (set.n <= BRUTE_FORCE_CAP)
        .then(|| brute_force_solver(&set))
        .transpose()?;
    let rational = if set.n + set.q + 1 <= 120 {
        bounds::exact_ps::<ExactProb>(&set).to_string()
    } else {
        String::new()
    };
    let report = InspectReport {
        n: set.n,
        q: set.q,
        eta: set.eta,
        secret: set.secret,
        entries: set.entries.len(),
        errors,
        error_rate: errors as f64 / set.entries.len() as f64,
        exact_ps: bounds::exact_ps::<f64>(&set),
        exact_ps_rational: rational,
        brute_force: brute,
        brute_force_matches_secret: brute.map(|b| b == set.secret),
    };
    emit(cfg, a.out.output, &to_json(&report))
}

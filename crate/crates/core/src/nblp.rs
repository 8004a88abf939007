//! End-to-end NBLP pipeline: sample generation, quantum-sample preparation,
//! Bernstein-Vazirani episodes, majority voting and a brute-force oracle.
//!
//! A sample set on `n+1` qubits places the input `a` on qubits `0..n` and the
//! label `b` on qubit `n`, so a basis index reads `(a << 1) | b`. After the
//! kernel the same layout holds `(k << 1) | k*`.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{BitString, MAX_BITS};
use crate::bounds::{self, BoundsConfig};
use crate::error::{Error, Result};
use crate::num::Real;
use crate::qram::{synth_qram, MemoryTable, QramLayout, QramMode};
use crate::rng::{stream_rng, StreamRng};
use crate::statevec::StateVector;
use crate::synth::synth_bv_kernel;

/// Widest register the pipeline will simulate densely.
pub const STATE_CAP: usize = 24;

/// Largest `n` accepted by [`brute_force_solver`].
pub const BRUTE_FORCE_CAP: usize = 14;

/// Stream id reserved for the fixed error realization of an instance.
const FIXED_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub n: usize,
    pub secret: BitString,
    /// Bias: each label is correct with probability `1/2 + eta`.
    pub eta: f64,
    pub master_seed: u64,
}

impl ProblemInstance {
    pub fn new(secret: BitString, eta: f64, master_seed: u64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in (0, 1/2], got {eta}"
            )));
        }
        if secret.is_empty() {
            return Err(Error::InvalidParameter(
                "secret must have at least one bit".into(),
            ));
        }
        Ok(ProblemInstance {
            n: secret.len(),
            secret,
            eta,
            master_seed,
        })
    }

    /// Instance with a secret drawn uniformly from `master_seed`.
    pub fn random(n: usize, eta: f64, master_seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "n must lie in 1..={MAX_BITS}, got {n}"
            )));
        }
        let mut rng = stream_rng(master_seed, FIXED_STREAM - 1);
        let secret = BitString::new(rng.random::<u64>() & ((1u64 << n) - 1), n);
        Self::new(secret, eta, master_seed)
    }
}

mod bit01 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*v as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            v => Err(serde::de::Error::custom(format!(
                "expected 0 or 1, got {v}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleEntry {
    pub a: BitString,
    #[serde(with = "bit01")]
    pub e: bool,
    #[serde(with = "bit01")]
    pub b: bool,
}

/// `2^q` labelled samples `(a, b_a = a.s xor e_a)` with distinct inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub n: usize,
    pub q: usize,
    pub eta: f64,
    pub secret: BitString,
    pub entries: Vec<SampleEntry>,
}

impl SampleSet {
    /// Builds the set from inputs and realized errors, computing the labels.
    pub fn from_errors(
        secret: BitString,
        eta: f64,
        inputs: Vec<BitString>,
        errors: Vec<bool>,
    ) -> Result<Self> {
        if inputs.len() != errors.len() {
            return Err(Error::LengthMismatch {
                expected: inputs.len(),
                got: errors.len(),
            });
        }
        let entries = inputs
            .into_iter()
            .zip(errors)
            .map(|(a, e)| SampleEntry {
                a,
                e,
                b: a.dot(&secret) ^ e,
            })
            .collect::<Vec<_>>();
        let q = entries.len().trailing_zeros() as usize;
        let set = SampleSet {
            n: secret.len(),
            q,
            eta,
            secret,
            entries,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q > self.n {
            return Err(Error::QOutOfRange {
                n: self.n,
                q: self.q,
            });
        }
        if self.secret.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: self.secret.len(),
            });
        }
        if self.entries.len() != 1 << self.q {
            return Err(Error::LengthMismatch {
                expected: 1 << self.q,
                got: self.entries.len(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for entry in &self.entries {
            if entry.a.len() != self.n {
                return Err(Error::LengthMismatch {
                    expected: self.n,
                    got: entry.a.len(),
                });
            }
            if !seen.insert(entry.a) {
                return Err(Error::InvalidParameter(format!(
                    "input {} repeated",
                    entry.a
                )));
            }
            if entry.b != entry.a.dot(&self.secret) ^ entry.e {
                return Err(Error::InvalidParameter(format!(
                    "label of input {} inconsistent with secret and error",
                    entry.a
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let set: SampleSet = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("sample set JSON: {e}")))?;
        set.validate()?;
        Ok(set)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn error_count(&self) -> usize {
        self.entries.iter().filter(|e| e.e).count()
    }

    /// Memory words `a || b_a`, addressed by sample position.
    pub fn memory_table(&self) -> Result<MemoryTable> {
        let cells = self.entries.iter().map(|e| e.a.push(e.b)).collect();
        MemoryTable::new(self.n, self.q, cells)
    }
}

/// Draws `2^q` samples: every input in order when `q = n`, otherwise a uniform
/// distinct subset in ascending order. Errors are i.i.d. with `P(e=1) = 1/2 - eta`.
pub fn generate_samples<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    q: usize,
    rng: &mut R,
) -> Result<SampleSet> {
    let n = instance.n;
    if q > n {
        return Err(Error::QOutOfRange { n, q });
    }
    let inputs: Vec<BitString> = if q == n {
        BitString::all(n).collect()
    } else {
        let mut picked = rand::seq::index::sample(rng, 1usize << n, 1usize << q).into_vec();
        picked.sort_unstable();
        picked
            .into_iter()
            .map(|v| BitString::new(v as u64, n))
            .collect()
    };
    let p_err = (0.5 - instance.eta).clamp(0.0, 1.0);
    let errors = inputs.iter().map(|_| rng.random_bool(p_err)).collect();
    SampleSet::from_errors(instance.secret, instance.eta, inputs, errors)
}

/// The single error realization used by [`Realization::Fixed`].
pub fn fixed_realization(instance: &ProblemInstance, q: usize) -> Result<SampleSet> {
    generate_samples(
        instance,
        q,
        &mut stream_rng(instance.master_seed, FIXED_STREAM),
    )
}

fn check_width(width: usize) -> Result<()> {
    if width > STATE_CAP {
        return Err(Error::WidthCapExceeded {
            width,
            cap: STATE_CAP,
        });
    }
    Ok(())
}

/// `2^{-q/2} sum_a |a>|b_a>` on `n+1` qubits.
pub fn prepare_sample_state_ideal<T: Real>(samples: &SampleSet) -> Result<StateVector<T>> {
    let width = samples.n + 1;
    check_width(width)?;
    let amp = T::one() / T::from_count(samples.entries.len()).sqrt();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << width];
    for e in &samples.entries {
        amps[((e.a.value() as usize) << 1) | e.b as usize] = Complex::new(amp, T::zero());
    }
    StateVector::from_amplitudes(width, amps)
}

/// Tolerance on the residual 1-probability of a discarded ancilla.
const ANCILLA_TOL: f64 = 1e-10;

/// Prepares the sample state through the synthesized QRAM.
///
/// The address register starts in uniform superposition and the memory holds
/// the word `a || b_a` at each address. After the QRAM, the ancillae are checked
/// to be back in `|0>`. The address is then cleared by the classical
/// relabelling `|gamma>|D> -> |gamma xor f(D)>|D>`, with `f` the inverse of the
/// address allocation, and the data register is returned.
pub fn prepare_sample_state_qram<T: Real>(
    samples: &SampleSet,
    mode: QramMode,
) -> Result<StateVector<T>> {
    let (n, q) = (samples.n, samples.q);
    if q == 0 {
        return prepare_sample_state_ideal(samples);
    }
    let layout = QramLayout::new(n, q);
    check_width(layout.width())?;
    let memory = samples.memory_table()?;
    let circuit = synth_qram(n, q, &memory, mode)?;

    let mut state = StateVector::<T>::new(layout.width());
    state.apply_circuit(&crate::synth::hadamard_layer(
        layout.width(),
        layout.address.clone(),
    ))?;
    state.apply_circuit(&circuit)?;

    let keep: Vec<usize> = layout.address.clone().chain(layout.data.clone()).collect();
    let mut reduced = state.restrict(&keep, ANCILLA_TOL)?;

    let word = n + 1;
    let address_of: BTreeMap<u64, u64> = memory
        .cells
        .iter()
        .enumerate()
        .map(|(gamma, cell)| (cell.value(), gamma as u64))
        .collect();
    let data_mask = (1usize << word) - 1;
    reduced.permute_basis(|i| {
        let data = (i & data_mask) as u64;
        match address_of.get(&data) {
            Some(&gamma) => i ^ ((gamma as usize) << word),
            None => i,
        }
    });
    reduced.restrict(&(q..q + word).collect::<Vec<_>>(), ANCILLA_TOL)
}

/// How the quantum sample is produced for each episode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrepMode {
    /// Direct amplitude initialisation, then state-vector simulation.
    Ideal,
    /// Synthesized QRAM, then state-vector simulation.
    Qram,
    /// Sampling straight from the exact outcome distribution.
    #[default]
    FastExact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    pub k_star: bool,
    /// Present iff `k_star`.
    pub k: Option<BitString>,
}

/// Exact distribution of the final measurement over `(k << 1) | k*`, via a
/// fast Walsh-Hadamard transform of the signed sample indicator.
pub fn episode_distribution(samples: &SampleSet) -> Vec<f64> {
    let n = samples.n;
    let dim = 1usize << n;
    let mut signed = vec![0.0f64; dim];
    let mut support = vec![0.0f64; dim];
    for e in &samples.entries {
        let a = e.a.value() as usize;
        signed[a] = if e.e { -1.0 } else { 1.0 };
        support[a] = 1.0;
    }
    walsh_hadamard(&mut signed);
    walsh_hadamard(&mut support);
    let norm = 2f64.powi((n + samples.q + 1) as i32);
    let s = samples.secret.value() as usize;
    let mut out = vec![0.0; 2 * dim];
    for k in 0..dim {
        out[k << 1] = support[k] * support[k] / norm;
        out[(k << 1) | 1] = signed[k ^ s] * signed[k ^ s] / norm;
    }
    out
}

fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a + b;
                *y = a - b;
            }
        }
        h *= 2;
    }
}

fn outcome_from_index(index: usize, n: usize) -> EpisodeOutcome {
    let k_star = index & 1 == 1;
    EpisodeOutcome {
        k_star,
        k: k_star.then(|| BitString::new((index >> 1) as u64, n)),
    }
}

/// Reusable sampler over one sample set's exact outcome distribution.
pub struct ExactSampler {
    n: usize,
    dist: WeightedIndex<f64>,
}

impl ExactSampler {
    pub fn new(samples: &SampleSet) -> Self {
        let dist = WeightedIndex::new(episode_distribution(samples))
            .expect("outcome distribution has positive mass");
        ExactSampler { n: samples.n, dist }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> EpisodeOutcome {
        outcome_from_index(self.dist.sample(rng), self.n)
    }
}

/// One run of steps A.2-A.3: prepare, apply `H^(n+1)`, measure `k*`, then `k`
/// if `k* = 1`.
pub fn run_episode<R: Rng + ?Sized>(
    samples: &SampleSet,
    mode: PrepMode,
    rng: &mut R,
) -> Result<EpisodeOutcome> {
    let n = samples.n;
    let mut state = match mode {
        PrepMode::FastExact => return Ok(ExactSampler::new(samples).sample(rng)),
        PrepMode::Ideal => prepare_sample_state_ideal::<f64>(samples)?,
        PrepMode::Qram => prepare_sample_state_qram::<f64>(samples, QramMode::PerBit)?,
    };
    state.apply_circuit(&synth_bv_kernel(n))?;
    if !state.measure(n, rng).outcome {
        return Ok(EpisodeOutcome {
            k_star: false,
            k: None,
        });
    }
    let mut k = BitString::zeros(0);
    for qubit in 0..n {
        k = k.push(state.measure(qubit, rng).outcome);
    }
    Ok(EpisodeOutcome {
        k_star: true,
        k: Some(k),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteResult {
    pub winner: BitString,
    pub tally: BTreeMap<BitString, usize>,
    pub m_used: usize,
}

/// Tallies the first `m_target` successful episodes; ties go to the
/// lexicographically smallest candidate.
pub fn majority_vote(outcomes: &[EpisodeOutcome], m_target: usize) -> Result<VoteResult> {
    let ks: Vec<BitString> = outcomes.iter().filter_map(|o| o.k).take(m_target).collect();
    if ks.len() < m_target || m_target == 0 {
        return Err(Error::InsufficientSuccesses {
            needed: m_target.max(1),
            got: ks.len(),
        });
    }
    let mut tally = BTreeMap::new();
    for k in ks {
        *tally.entry(k).or_insert(0) += 1;
    }
    let winner = mode_of(&tally);
    Ok(VoteResult {
        winner,
        tally,
        m_used: m_target,
    })
}

fn mode_of(tally: &BTreeMap<BitString, usize>) -> BitString {
    let mut best: Option<(BitString, usize)> = None;
    for (&k, &count) in tally {
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((k, count));
        }
    }
    best.expect("non-empty tally").0
}

/// Whether each episode sees fresh samples or one fixed realization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realization {
    #[default]
    Fresh,
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub q: usize,
    pub t: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub mode: PrepMode,
    pub realization: Realization,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub estimate: BitString,
    pub secret: BitString,
    pub success: bool,
    pub m_target: usize,
    pub episodes: usize,
    pub successes: usize,
    pub vote: VoteResult,
}

/// Runs episodes until `M` successes are collected, then votes. Episode `i`
/// draws from stream `i` of the instance seed.
pub fn solve(instance: &ProblemInstance, config: &SolveConfig) -> Result<SolveReport> {
    let bounds_config = BoundsConfig {
        n: instance.n,
        q: config.q,
        eta: instance.eta,
        t: config.t,
        epsilon: config.epsilon,
        delta: config.delta,
    };
    let m_target = bounds::chernoff_m_for(&bounds_config)? as usize;
    let max_episodes = 64 * m_target + 1024;

    let fixed = match config.realization {
        Realization::Fixed => Some(fixed_realization(instance, config.q)?),
        Realization::Fresh => None,
    };
    let fixed_sampler = match (&fixed, config.mode) {
        (Some(s), PrepMode::FastExact) => Some(ExactSampler::new(s)),
        _ => None,
    };

    let mut outcomes = Vec::with_capacity(2 * m_target);
    let mut successes = 0;
    let mut episode = 0u64;
    while successes < m_target && outcomes.len() < max_episodes {
        let mut rng: StreamRng = stream_rng(instance.master_seed, episode);
        episode += 1;
        let outcome = match (&fixed, &fixed_sampler) {
            (_, Some(sampler)) => sampler.sample(&mut rng),
            (Some(s), None) => run_episode(s, config.mode, &mut rng)?,
            (None, _) => {
                let s = generate_samples(instance, config.q, &mut rng)?;
                run_episode(&s, config.mode, &mut rng)?
            }
        };
        successes += outcome.k_star as usize;
        outcomes.push(outcome);
    }
    let vote = majority_vote(&outcomes, m_target)?;
    Ok(SolveReport {
        estimate: vote.winner,
        secret: instance.secret,
        success: vote.winner == instance.secret,
        m_target,
        episodes: outcomes.len(),
        successes,
        vote,
    })
}

/// Maximum-likelihood secret: the candidate agreeing with the most labels,
/// lexicographically smallest among ties.
pub fn brute_force_solver(samples: &SampleSet) -> Result<BitString> {
    let n = samples.n;
    if n > BRUTE_FORCE_CAP {
        return Err(Error::NTooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut best: Option<(BitString, usize)> = None;
    for candidate in BitString::all(n) {
        let agree = samples
            .entries
            .iter()
            .filter(|e| e.a.dot(&candidate) == e.b)
            .count();
        if best.is_none_or(|(_, b)| agree > b) {
            best = Some((candidate, agree));
        }
    }
    Ok(best.expect("at least one candidate").0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn noiseless_labels_are_parities() {
        let inst = ProblemInstance::new(bits("101"), 0.5, 3).unwrap();
        let set = generate_samples(&inst, 3, &mut stream_rng(3, 0)).unwrap();
        assert_eq!(set.entries.len(), 8);
        for (i, e) in set.entries.iter().enumerate() {
            assert_eq!(e.a.value(), i as u64);
            assert!(!e.e);
            assert_eq!(e.b, e.a.dot(&inst.secret));
        }
    }

    #[test]
    fn subset_is_sorted_and_distinct() {
        let inst = ProblemInstance::random(6, 0.3, 11).unwrap();
        let set = generate_samples(&inst, 3, &mut stream_rng(11, 2)).unwrap();
        assert!(set.entries.windows(2).all(|w| w[0].a < w[1].a));
        assert!(matches!(
            generate_samples(&inst, 7, &mut stream_rng(11, 2)),
            Err(Error::QOutOfRange { n: 6, q: 7 })
        ));
    }

    #[test]
    fn invalid_eta() {
        assert!(ProblemInstance::new(bits("1"), 0.0, 0).is_err());
        assert!(ProblemInstance::new(bits("1"), 0.6, 0).is_err());
    }

    #[test]
    fn sample_set_json_round_trip() {
        let inst = ProblemInstance::random(4, 0.2, 5).unwrap();
        let set = generate_samples(&inst, 2, &mut stream_rng(5, 0)).unwrap();
        let text = set.to_json();
        assert!(text.contains("\"e\": 0") || text.contains("\"e\": 1"));
        assert_eq!(SampleSet::from_json(&text).unwrap(), set);
    }

    #[test]
    fn inconsistent_label_rejected() {
        let inst = ProblemInstance::new(bits("11"), 0.5, 0).unwrap();
        let mut set = generate_samples(&inst, 2, &mut stream_rng(0, 0)).unwrap();
        set.entries[1].b = !set.entries[1].b;
        assert!(set.validate().is_err());
    }

    #[test]
    fn ideal_state_single_sample() {
        let set = SampleSet::from_errors(bits("11"), 0.5, vec![bits("10")], vec![false]).unwrap();
        let s = prepare_sample_state_ideal::<f64>(&set).unwrap();
        assert_eq!(s.amplitude(0b101).re, 1.0);
    }

    #[test]
    fn qram_state_matches_ideal_small() {
        let set = SampleSet::from_errors(
            bits("1"),
            0.3,
            BitString::all(1).collect(),
            vec![true, false],
        )
        .unwrap();
        let ideal = prepare_sample_state_ideal::<f64>(&set).unwrap();
        let qram = prepare_sample_state_qram::<f64>(&set, QramMode::PerBit).unwrap();
        assert!((ideal.fidelity(&qram) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn qram_width_cap() {
        let inst = ProblemInstance::new(bits("101"), 0.5, 0).unwrap();
        let set = fixed_realization(&inst, 3).unwrap();
        assert!(matches!(
            prepare_sample_state_qram::<f64>(&set, QramMode::PerBit),
            Err(Error::WidthCapExceeded { width: 31, .. })
        ));
    }

    #[test]
    fn distribution_sums_to_one() {
        let inst = ProblemInstance::random(5, 0.2, 9).unwrap();
        let set = generate_samples(&inst, 3, &mut stream_rng(9, 1)).unwrap();
        let d = episode_distribution(&set);
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let p1: f64 = d.iter().skip(1).step_by(2).sum();
        assert!((p1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn voting() {
        let o = |s: &str| EpisodeOutcome {
            k_star: true,
            k: Some(bits(s)),
        };
        let fail = EpisodeOutcome {
            k_star: false,
            k: None,
        };
        let mut v = vec![o("101"); 5];
        v.extend(vec![o("110"); 3]);
        v.push(fail);
        assert_eq!(majority_vote(&v, 8).unwrap().winner, bits("101"));
        let tie = [o("10"), o("01"), o("10"), o("01")];
        assert_eq!(majority_vote(&tie, 4).unwrap().winner, bits("01"));
        assert!(matches!(
            majority_vote(&[fail, o("1")], 2),
            Err(Error::InsufficientSuccesses { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn brute_force_ties_and_noiseless() {
        let inst = ProblemInstance::new(bits("0110"), 0.5, 1).unwrap();
        let full = fixed_realization(&inst, 4).unwrap();
        assert_eq!(brute_force_solver(&full).unwrap(), bits("0110"));
        let single =
            SampleSet::from_errors(bits("0110"), 0.5, vec![bits("0100")], vec![false]).unwrap();
        // b = 1, and 0100 is the smallest candidate whose parity on 0100 is 1.
        assert_eq!(brute_force_solver(&single).unwrap(), bits("0100"));
        let big = ProblemInstance::random(15, 0.5, 0).unwrap();
        let set = SampleSet::from_errors(big.secret, 0.5, vec![BitString::zeros(15)], vec![false])
            .unwrap();
        assert!(matches!(
            brute_force_solver(&set),
            Err(Error::NTooLarge { .. })
        ));
    }

    #[test]
    fn statevector_episode_noiseless() {
        let inst = ProblemInstance::new(bits("011"), 0.5, 4).unwrap();
        let set = fixed_realization(&inst, 3).unwrap();
        for shot in 0..50 {
            let out = run_episode(&set, PrepMode::Ideal, &mut stream_rng(4, shot)).unwrap();
            if out.k_star {
                assert_eq!(out.k, Some(inst.secret));
            } else {
                assert!(out.k.is_none());
            }
        }
    }

    #[test]
    fn solve_noiseless() {
        let inst = ProblemInstance::new(bits("110"), 0.5, 21).unwrap();
        let cfg = SolveConfig {
            q: 3,
            t: 0.1,
            epsilon: 0.5,
            delta: 0.05,
            mode: PrepMode::FastExact,
            realization: Realization::Fresh,
        };
        let report = solve(&inst, &cfg).unwrap();
        assert!(report.success);
        assert_eq!(report.vote.tally.len(), 1);
    }

    #[test]
    fn solve_rejects_t_above_eta() {
        let inst = ProblemInstance::random(4, 0.25, 0).unwrap();
        let cfg = SolveConfig {
            q: 4,
            t: 0.3,
            epsilon: 0.5,
            delta: 0.05,
            mode: PrepMode::FastExact,
            realization: Realization::Fresh,
        };
        match solve(&inst, &cfg) {
            Err(Error::ConditionViolated(msg)) => assert!(msg.contains("t < eta")),
            other => panic!("unexpected {other:?}"),
        }
    }
}

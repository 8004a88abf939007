use std::f64::consts::PI;

use nblp_core::circuit::Unitary;
use nblp_core::qram::{
    predicted_qram_metrics, synth_coupling, synth_qram, synth_query, MemoryTable, QramLayout,
    QramMode,
};
use nblp_core::rng::stream_rng;
use nblp_core::synth::{
    aqft_t_count_estimate, decompose_toffoli, synth_aqft, synth_qft, AqftSpec, RotationCostModel,
};
use nblp_core::{BitString, StateVectorF64};
use num_complex::Complex;
use rand::Rng;

fn toffoli_oracle(c1: usize, c2: usize, t: usize) -> Unitary<f64> {
    Unitary::from_fn(3, |row, col| {
        let bit = |i: usize, q: usize| (i >> (2 - q)) & 1;
        let flip = bit(col, c1) & bit(col, c2);
        let image = col ^ (flip << (2 - t));
        Complex::new((row == image) as u8 as f64, 0.0)
    })
}

#[test]
fn toffoli_matches_oracle_for_every_operand_order() {
    for (c1, c2, t) in [
        (0, 1, 2),
        (0, 2, 1),
        (1, 0, 2),
        (1, 2, 0),
        (2, 0, 1),
        (2, 1, 0),
    ] {
        let c = decompose_toffoli(c1, c2, t).unwrap();
        assert_eq!(c.t_count().unwrap(), 7);
        assert_eq!(c.t_depth().unwrap(), 4);
        let u = c.to_unitary::<f64>().unwrap();
        assert!(u.max_abs_diff(&toffoli_oracle(c1, c2, t)) < 1e-10);
    }
}

fn reverse_bits(x: usize, l: usize) -> usize {
    (0..l).fold(0, |acc, i| acc | (((x >> i) & 1) << (l - 1 - i)))
}

#[test]
fn qft_is_bit_reversed_dft() {
    for l in 1..=6 {
        let dim = 1usize << l;
        let dft = Unitary::from_fn(l, |row, col| {
            let k = reverse_bits(row, l);
            let angle = 2.0 * PI * (col * k) as f64 / dim as f64;
            Complex::new(angle.cos(), angle.sin()) / (dim as f64).sqrt()
        });
        let u = synth_qft(l).to_unitary::<f64>().unwrap();
        assert!(u.max_abs_diff(&dft) < 1e-10, "l = {l}");
    }
}

#[test]
fn aqft_with_full_cutoff_is_the_qft() {
    for l in 2..=9 {
        let aqft = synth_aqft(&AqftSpec::new(l, l).unwrap()).unwrap();
        assert_eq!(aqft.layers(), synth_qft(l).layers());
    }
}

#[test]
fn rotation_cost_examples() {
    let spec = AqftSpec::with_delta(4, 3, 0.01).unwrap();
    let model = RotationCostModel::default();
    let p: f64 = 0.01 / 15.0;
    let per = (3.0 * (1.0 / p).log2()).ceil() as u64;
    assert_eq!(aqft_t_count_estimate(&spec, &model), 5 * 3 * per);
    let fixed = RotationCostModel::new(3.0, Some(0.5)).unwrap();
    assert_eq!(fixed.t_per_rotation(0.5), 3);
}

fn basis_bits(index: usize, width: usize, qubits: std::ops::Range<usize>) -> usize {
    qubits.fold(0, |acc, q| (acc << 1) | ((index >> (width - 1 - q)) & 1))
}

#[test]
fn coupling_is_one_hot_for_every_address() {
    for q in 1..=3 {
        let c = synth_coupling(q).unwrap();
        let width = c.width();
        for gamma in 0..1usize << q {
            let mut s = StateVectorF64::basis(width, gamma << (1 << q));
            s.apply_circuit(&c).unwrap();
            let (index, amp) = s
                .amplitudes()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .unwrap();
            assert!((amp.norm() - 1.0).abs() < 1e-10);
            assert_eq!(basis_bits(index, width, 0..q), gamma);
            assert_eq!(
                basis_bits(index, width, q..width),
                1 << ((1 << q) - 1 - gamma)
            );
        }
    }
}

#[test]
fn coupling_then_inverse_is_identity() {
    for q in 1..=3 {
        let c = synth_coupling(q).unwrap();
        let u = c
            .compose(&c.inverse())
            .unwrap()
            .to_unitary::<f64>()
            .unwrap();
        assert!(
            u.max_abs_diff(&Unitary::identity(c.width())) < 1e-10,
            "q = {q}"
        );
    }
}

#[test]
fn coupling_and_query_t_depth() {
    for q in 2..=4 {
        assert_eq!(synth_coupling(q).unwrap().t_depth().unwrap(), 4 * (q - 1));
        let mut rng = stream_rng(17, q as u64);
        for _ in 0..10 {
            let column: Vec<bool> = (0..1 << q).map(|_| rng.random()).collect();
            assert!(synth_query(q, &column).unwrap().t_depth().unwrap() <= 4);
        }
    }
}

#[test]
fn query_loads_the_addressed_bit() {
    let q = 2;
    let column = [true, false, true, true];
    let coupling = synth_coupling(q).unwrap();
    let query = synth_query(q, &column).unwrap();
    let width = query.width();
    let coupled = coupling
        .embed(width, &(0..coupling.width()).collect::<Vec<_>>())
        .unwrap();
    let full = coupled
        .compose(&query)
        .unwrap()
        .compose(&coupled.inverse())
        .unwrap();
    let data = q + (1 << q);
    for gamma in 0..1usize << q {
        let mut s = StateVectorF64::basis(width, gamma << (width - q));
        s.apply_circuit(&full).unwrap();
        let p = s.prob_one(data);
        assert!((p - column[gamma] as u8 as f64).abs() < 1e-10);
        for anc in (q..width).filter(|&i| i != data) {
            assert!(s.prob_one(anc) < 1e-10);
        }
    }
}

fn random_memory(n: usize, q: usize, seed: u64) -> MemoryTable {
    let mut rng = stream_rng(seed, 0);
    let cells = (0..1 << q)
        .map(|_| BitString::new(rng.random::<u64>() & ((1 << (n + 1)) - 1), n + 1))
        .collect();
    MemoryTable::new(n, q, cells).unwrap()
}

#[test]
fn full_qram_restores_ancillae_and_loads_words() {
    for (n, q) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        for mode in [QramMode::PerBit, QramMode::SharedRouting] {
            let memory = random_memory(n, q, (n * 10 + q) as u64);
            let c = synth_qram(n, q, &memory, mode).unwrap();
            let layout = QramLayout::new(n, q);
            let width = layout.width();
            for gamma in 0..1usize << q {
                let mut s = StateVectorF64::basis(width, gamma << (width - q));
                s.apply_circuit(&c).unwrap();
                let mut expected = gamma << (width - q);
                for (i, d) in layout.data.clone().enumerate() {
                    if memory.cells[gamma].get(i) {
                        expected |= 1 << (width - 1 - d);
                    }
                }
                assert!((s.amplitude(expected).norm() - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn predicted_metrics_match_measured() {
    for n in 1..=3 {
        for q in 1..=3 {
            for mode in [QramMode::PerBit, QramMode::SharedRouting] {
                let c = synth_qram(n, q, &random_memory(n, q, 99), mode).unwrap();
                let p = predicted_qram_metrics(n, q, mode);
                assert_eq!(c.width(), p.width);
                assert_eq!(c.width(), q + (1 << q) + (n + 1) + (n + 1) * (1 << (q - 1)));
                assert_eq!(c.t_depth().unwrap(), p.t_depth, "n={n} q={q} {mode:?}");
                assert_eq!(c.t_count().unwrap(), p.t_count, "n={n} q={q} {mode:?}");
            }
        }
    }
}

#[test]
fn memory_table_json() {
    let m = random_memory(2, 2, 4);
    assert_eq!(MemoryTable::from_json(&m.to_json()).unwrap(), m);
    assert!(MemoryTable::from_json(r#"{"q":1,"n":1,"cells":["0"]}"#).is_err());
}

//! Invariants of the engine, the memory circuit and the crossing finder.

use proptest::prelude::*;
use qci::bits::Bits;
use qci::circuit::{build_repetition_memory, compile, phenomenological_rates, Element};
use qci::codes::{
    color_code_488, parse_code_file, repetition_code, rotated_surface_code, single_qubit_code,
};
use qci::frame::{complete_frame, transform_channel, RegisterMap, StabilizerCode};
use qci::pauli::{bit_flip_channel, depolarizing_channel, PauliString};
use qci::state::{initial_bell_state, StateLayout, DEFAULT_MEMORY_LIMIT_BLOCKS};
use qci::threshold::{
    code_capacity_ci, find_crossing, memory_ci, sweep_code_capacity, sweep_memory, CssReduction,
    Grid, MemoryPreset, NoiseKind, SweepOptions,
};

fn opts(css: CssReduction) -> SweepOptions {
    SweepOptions {
        css_reduction: css,
        ..SweepOptions::default()
    }
}

fn small_code(i: usize) -> StabilizerCode {
    match i {
        0 => repetition_code(3).unwrap(),
        1 => rotated_surface_code(3).unwrap(),
        2 => color_code_488(3).unwrap(),
        _ => parse_code_file(include_str!("../data/four_two_two.code")).unwrap(),
    }
}

fn noise_on(code: &StabilizerCode, noise: NoiseKind, ps: &[f64]) -> Vec<qci::frame::WorkingChannel> {
    let n = code.n();
    let frame = complete_frame(code).unwrap();
    let map = RegisterMap::data_only(n);
    (0..n)
        .map(|q| {
            let p = ps[q % ps.len()];
            let ch = match noise {
                NoiseKind::BitFlip => bit_flip_channel(q, p, n).unwrap(),
                NoiseKind::Depolarizing => depolarizing_channel(q, p, n).unwrap(),
            };
            transform_channel(&frame, &ch, &map).unwrap()
        })
        .collect()
}

fn noise_kind() -> impl Strategy<Value = NoiseKind> {
    prop_oneof![Just(NoiseKind::BitFlip), Just(NoiseKind::Depolarizing)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_is_conserved(
        code in 0usize..4,
        noise in noise_kind(),
        ps in prop::collection::vec(0.0f64..=1.0, 1..5),
    ) {
        let code = small_code(code);
        let mut state = initial_bell_state(&StateLayout::full(&code, 0));
        for ch in noise_on(&code, noise, &ps) {
            state.apply_channel(&ch).unwrap();
            prop_assert!((state.trace() - 1.0).abs() <= 1e-12, "trace {}", state.trace());
        }
        let reduced = state.trace_out_reference().unwrap();
        prop_assert!((reduced.trace() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn normalized_ci_is_at_most_one(
        code in 0usize..4,
        noise in noise_kind(),
        p in 0.0f64..=1.0,
    ) {
        let code = small_code(code);
        let ci = code_capacity_ci(&code, noise, p, &opts(CssReduction::Off)).unwrap();
        prop_assert!(ci.ci_normalized <= 1.0 + 1e-9, "{}", ci.ci_normalized);
        prop_assert!(ci.ci_normalized >= -1.0 - 1e-9, "{}", ci.ci_normalized);
    }

    #[test]
    fn more_noise_never_helps(
        code in 0usize..4,
        noise in noise_kind(),
        first in prop::collection::vec(0.0f64..0.5, 1..4),
        second in prop::collection::vec(0.0f64..0.5, 1..4),
    ) {
        let code = small_code(code);
        let mut state = initial_bell_state(&StateLayout::full(&code, 0));
        state.apply_channels(&noise_on(&code, noise, &first)).unwrap();
        let before = state.coherent_information().unwrap().ci_bits;
        state.apply_channels(&noise_on(&code, noise, &second)).unwrap();
        let after = state.coherent_information().unwrap().ci_bits;
        prop_assert!(after <= before + 1e-10, "{before} -> {after}");
    }

    #[test]
    fn bit_flip_symmetry(code in 0usize..3, p in 0.0f64..=0.5) {
        let code = small_code(code);
        let o = opts(CssReduction::Auto);
        let a = code_capacity_ci(&code, NoiseKind::BitFlip, p, &o).unwrap().ci_normalized;
        let b = code_capacity_ci(&code, NoiseKind::BitFlip, 1.0 - p, &o).unwrap().ci_normalized;
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn generator_choice_does_not_matter(
        code in 1usize..3,
        noise in noise_kind(),
        p in 0.0f64..0.3,
        seed in any::<u64>(),
    ) {
        let code = small_code(code);
        let alt = regauge(&code, seed);
        let o = opts(CssReduction::Off);
        let a = code_capacity_ci(&code, noise, p, &o).unwrap().ci_normalized;
        let b = code_capacity_ci(&alt, noise, p, &o).unwrap().ci_normalized;
        prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
    }
}

/// Same code, different generators: products of same-type stabilizers, a
/// shuffled order and logicals moved by a stabilizer.
fn regauge(code: &StabilizerCode, seed: u64) -> StabilizerCode {
    let stabs = code.stabilizers();
    let m = stabs.len();
    let mut rng = seed;
    let mut next = |bound: usize| {
        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((rng >> 33) as usize) % bound
    };
    let mut new: Vec<PauliString> = stabs.to_vec();
    for _ in 0..m {
        let (i, j) = (next(m), next(m));
        if i != j && new[i].is_x_type() == new[j].is_x_type() {
            new[i] = new[i].multiply(&new[j]).unwrap();
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        order.swap(i, next(i + 1));
    }
    let new: Vec<PauliString> = order.iter().map(|&i| new[i].clone()).collect();
    let x_stab = stabs.iter().find(|s| s.is_x_type()).unwrap();
    let z_stab = stabs.iter().find(|s| s.is_z_type()).unwrap();
    let lx = vec![code.logical_x()[0].multiply(x_stab).unwrap()];
    let lz = vec![code.logical_z()[0].multiply(z_stab).unwrap()];
    StabilizerCode::new("regauged", code.n(), new, lx, lz, code.distance()).unwrap()
}

#[test]
fn css_reduction_matches_full_layout() {
    let codes = [
        rotated_surface_code(3).unwrap(),
        rotated_surface_code(5).unwrap(),
        color_code_488(3).unwrap(),
        color_code_488(5).unwrap(),
        repetition_code(5).unwrap(),
    ];
    for code in &codes {
        for p in [0.0, 0.03, 0.1089, 0.2, 0.5] {
            let on = code_capacity_ci(code, NoiseKind::BitFlip, p, &opts(CssReduction::On)).unwrap();
            let off = code_capacity_ci(code, NoiseKind::BitFlip, p, &opts(CssReduction::Off)).unwrap();
            assert!(
                (on.ci_normalized - off.ci_normalized).abs() <= 1e-10,
                "{} p={p}: {} vs {}",
                code.name(),
                on.ci_normalized,
                off.ci_normalized
            );
        }
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let code = rotated_surface_code(5).unwrap();
    let grid = [0.1, 0.12];
    let run = |threads, css| {
        let o = SweepOptions {
            threads: Some(threads),
            ..opts(css)
        };
        sweep_code_capacity(&code, NoiseKind::BitFlip, &grid, &o).unwrap().values
    };
    for css in [CssReduction::On, CssReduction::Off] {
        let one = run(1, css);
        for t in [2, 3, 4] {
            let many = run(t, css);
            for (a, b) in one.iter().zip(&many) {
                assert!((a - b).abs() <= 1e-12, "{t} threads: {a} vs {b}");
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
    let mem = |threads| {
        let o = SweepOptions {
            threads: Some(threads),
            ..SweepOptions::default()
        };
        sweep_memory(3, MemoryPreset::Circuit, &[0.03, 0.04], &o).unwrap().values
    };
    assert_eq!(mem(1), mem(4));
}

#[test]
fn swapping_adjacent_channels_is_harmless() {
    let rates = qci::circuit::circuit_level_rates(0.03).unwrap();
    let circuit = build_repetition_memory(3, rates).unwrap();
    let frame = complete_frame(&repetition_code(3).unwrap()).unwrap();
    let base = compile(&circuit, &frame).unwrap().run(DEFAULT_MEMORY_LIMIT_BLOCKS, 0.0).unwrap();
    let elements = circuit.elements();
    let mut swapped_any = 0;
    for i in 0..elements.len() - 1 {
        let both_channels = matches!(elements[i], Element::Channel(_))
            && matches!(elements[i + 1], Element::Channel(_));
        if !both_channels {
            continue;
        }
        let mut c = circuit.clone();
        c.swap_elements(i, i + 1);
        let ci = compile(&c, &frame).unwrap().run(DEFAULT_MEMORY_LIMIT_BLOCKS, 0.0).unwrap();
        assert!((ci.ci_normalized - base.ci_normalized).abs() <= 1e-12);
        swapped_any += 1;
    }
    assert!(swapped_any > 3);
}

#[test]
fn crossing_is_stable_under_grid_refinement() {
    let codes = [rotated_surface_code(3).unwrap(), rotated_surface_code(5).unwrap()];
    let o = opts(CssReduction::Auto);
    let crossing = |step| {
        let grid = Grid::new(0.09, 0.13, step).unwrap().points();
        let a = sweep_code_capacity(&codes[0], NoiseKind::BitFlip, &grid, &o).unwrap();
        let b = sweep_code_capacity(&codes[1], NoiseKind::BitFlip, &grid, &o).unwrap();
        find_crossing(&a, &b).unwrap()
    };
    let coarse = crossing(1e-3);
    let fine = crossing(2e-4);
    assert!((coarse.p_cross - fine.p_cross).abs() <= coarse.uncertainty);
    assert!(fine.uncertainty < coarse.uncertainty);
}

#[test]
fn larger_distance_wins_below_threshold() {
    let o = opts(CssReduction::Auto);
    for (noise, family) in [
        (NoiseKind::BitFlip, rotated_surface_code as fn(usize) -> _),
        (NoiseKind::BitFlip, color_code_488),
        (NoiseKind::Depolarizing, color_code_488),
    ] {
        let p = 0.05;
        let one = code_capacity_ci(&single_qubit_code(), noise, p, &o).unwrap().ci_normalized;
        let three = code_capacity_ci(&family(3).unwrap(), noise, p, &o).unwrap().ci_normalized;
        let five = code_capacity_ci(&family(5).unwrap(), noise, p, &o).unwrap().ci_normalized;
        assert!(one < three && three < five, "{noise}: {one} {three} {five}");
    }
}

#[test]
fn steane_file_matches_built_in_color_code() {
    let file = parse_code_file(include_str!("../data/steane.code")).unwrap();
    let built = color_code_488(3).unwrap();
    assert_eq!((file.n(), file.k()), (built.n(), built.k()));
    let o = opts(CssReduction::Off);
    for noise in [NoiseKind::BitFlip, NoiseKind::Depolarizing] {
        for p in [0.02, 0.1, 0.19] {
            let a = code_capacity_ci(&file, noise, p, &o).unwrap().ci_normalized;
            let b = code_capacity_ci(&built, noise, p, &o).unwrap().ci_normalized;
            assert!((a - b).abs() <= 1e-10, "{noise} p={p}: {a} vs {b}");
        }
    }
}

#[test]
fn faulty_readout_costs_information() {
    let o = SweepOptions::default();
    for d in [3, 5] {
        let code = repetition_code(d).unwrap();
        for p in [0.02, 0.08, 0.11] {
            let mem = memory_ci(d, phenomenological_rates(p).unwrap(), &o).unwrap();
            let cap = code_capacity_ci(&code, NoiseKind::BitFlip, p, &o).unwrap();
            assert!(
                mem.ci_normalized <= cap.ci_normalized + 1e-12,
                "d={d} p={p}: memory {} capacity {}",
                mem.ci_normalized,
                cap.ci_normalized
            );
        }
    }
}

#[test]
fn k2_code_is_normalized_by_k() {
    let code = small_code(3);
    assert_eq!(code.k(), 2);
    let o = opts(CssReduction::Off);
    let noiseless = code_capacity_ci(&code, NoiseKind::Depolarizing, 0.0, &o).unwrap();
    assert!((noiseless.ci_normalized - 1.0).abs() <= 1e-12, "{}", noiseless.ci_normalized);
    assert!((noiseless.ci_bits - 2.0).abs() <= 1e-12);
    let noisy = code_capacity_ci(&code, NoiseKind::Depolarizing, 0.1, &o).unwrap();
    assert!((noisy.ci_normalized - noisy.ci_bits / 2.0).abs() <= 1e-15);
}

#[test]
fn unreachable_labels_have_no_block() {
    let code = repetition_code(3).unwrap();
    let mut state = initial_bell_state(&StateLayout::full(&code, 0));
    let flip = Bits::from_u64(2, 0b01);
    assert!(state.block(&flip).is_none());
    state.apply_channels(&noise_on(&code, NoiseKind::BitFlip, &[0.1])).unwrap();
    assert!(state.block(&flip).is_some());
}


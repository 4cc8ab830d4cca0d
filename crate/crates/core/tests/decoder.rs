mod common;

use common::{code84, max_abs_diff, ml_codeword, rng, CODE84_ALIST};
use parity_fix::admm::{awgn_llr, AdmmDecoder, ProjectorKind, XUpdateSign};
use parity_fix::geometry::is_member_with_tolerance;
use parity_fix::{
    decode, parse_alist, Algorithm, BuiltinProjector, DecodeStatus, DecoderConfig, LlrVector, MembershipMode,
    ParityCheckMatrix, ParityKind,
};
use rand::Rng;
use rand_distr::StandardNormal;

fn hamming74() -> ParityCheckMatrix {
    ParityCheckMatrix::from_rows(7, vec![vec![0, 1, 2, 4], vec![1, 2, 3, 5], vec![0, 2, 3, 6]]).unwrap()
}

fn noisy_frame(r: &mut impl Rng, codeword: &[u8], sigma: f64) -> LlrVector {
    let y: Vec<f64> = codeword
        .iter()
        .map(|&b| if b == 0 { 1.0 } else { -1.0 } + sigma * r.sample::<f64, _>(StandardNormal))
        .collect();
    awgn_llr(&y, sigma).unwrap()
}

fn every_projector() -> Vec<ProjectorKind> {
    let mut v: Vec<ProjectorKind> = Algorithm::ALL.iter().map(|&a| ProjectorKind::Algorithm(a)).collect();
    v.push(ProjectorKind::Oracle);
    v
}

#[test]
fn alist_round_trip_of_the_test_code() {
    let h = parse_alist(CODE84_ALIST).unwrap();
    assert_eq!(h, code84());
    assert_eq!((h.m(), h.n(), h.max_row_degree()), (4, 8, 4));
    assert_eq!(parse_alist(&h.to_alist()).unwrap(), h);
    assert_eq!(h.codewords_brute_force().len(), 16);
}

#[test]
fn integral_outputs_are_maximum_likelihood() {
    let h = code84();
    let words = h.codewords_brute_force();
    let cfg = DecoderConfig::default();
    let mut r = rng(90);
    let mut integral = 0;
    for _ in 0..1000 {
        let sent = &words[r.random_range(0..words.len())];
        let llr = noisy_frame(&mut r, sent, 0.5);
        let out = decode(&llr, &h, &cfg, BuiltinProjector::fix()).unwrap();
        if out.status == DecodeStatus::ConvergedIntegral {
            integral += 1;
            assert_eq!(out.hard_decision, ml_codeword(&h, llr.values()));
        }
    }
    assert!(integral > 900, "{integral}");
}

#[test]
fn noiseless_frames_decode_quickly() {
    let h = code84();
    for word in h.codewords_brute_force() {
        let y: Vec<f64> = word.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
        let llr = awgn_llr(&y, 0.5).unwrap();
        let out = decode(&llr, &h, &DecoderConfig::default(), BuiltinProjector::fix()).unwrap();
        assert_eq!(out.status, DecodeStatus::ConvergedIntegral);
        assert_eq!(out.hard_decision, word);
        assert!(out.iterations <= 50, "{}", out.iterations);
    }
}

#[test]
fn projectors_are_interchangeable_step_by_step() {
    let h = code84();
    let words = h.codewords_brute_force();
    let mut r = rng(91);
    for _ in 0..50 {
        let sent = &words[r.random_range(0..words.len())];
        let llr = noisy_frame(&mut r, sent, 0.8);
        let mut decoders: Vec<_> = every_projector()
            .into_iter()
            .map(|k| AdmmDecoder::new(&llr, &h, DecoderConfig::default(), BuiltinProjector::new(k)).unwrap())
            .collect();
        for _ in 0..200 {
            decoders.iter_mut().for_each(|dec| dec.step());
            let reference = decoders[0].state().x.clone();
            for dec in &decoders[1..] {
                assert!(max_abs_diff(&reference, &dec.state().x) <= 1e-7);
            }
        }
    }
}

#[test]
fn replicas_stay_in_the_polytope() {
    let h = code84();
    let mut r = rng(92);
    for _ in 0..50 {
        let llr = LlrVector::new((0..8).map(|_| r.random_range(-4.0..4.0)).collect()).unwrap();
        let mut dec = AdmmDecoder::new(&llr, &h, DecoderConfig::default(), BuiltinProjector::fix()).unwrap();
        for _ in 0..100 {
            dec.step();
            for z in &dec.state().z {
                assert!(is_member_with_tolerance(z, ParityKind::Even, MembershipMode::ExhaustiveSmallD, 1e-9).unwrap());
            }
        }
    }
}

#[test]
fn adversarial_llr_converges_to_a_pseudocodeword() {
    let h = hamming74();
    let llr = [1.8, 0.4, -1.0, 1.2, 1.1, -0.5, 0.2];
    let pseudo = [0.0, 0.5, 0.5, 0.0, 0.0, 1.0, 0.5];
    // The point satisfies every local constraint...
    for row in h.rows() {
        let local: Vec<f64> = row.iter().map(|&i| pseudo[i]).collect();
        assert!(is_member_with_tolerance(&local, ParityKind::Even, MembershipMode::ExhaustiveSmallD, 0.0).unwrap());
    }
    // ...and is strictly cheaper than every codeword, so the LP optimum is
    // not a codeword.
    let cost = |c: &[f64]| c.iter().zip(&llr).map(|(a, b)| a * b).sum::<f64>();
    let best_word = h
        .codewords_brute_force()
        .iter()
        .map(|w| cost(&w.iter().map(|&b| f64::from(b)).collect::<Vec<_>>()))
        .fold(f64::INFINITY, f64::min);
    assert!(cost(&pseudo) < best_word - 0.25);

    let cfg = DecoderConfig {
        max_iterations: 20_000,
        ..DecoderConfig::default()
    };
    let out = decode(&LlrVector::new(llr.to_vec()).unwrap(), &h, &cfg, BuiltinProjector::fix()).unwrap();
    assert_eq!(out.status, DecodeStatus::ConvergedFractional);
    assert!(cost(&out.x) <= cost(&pseudo) + 1e-3, "{:?}", out.x);
}

#[test]
fn reversed_sign_variant_runs() {
    let h = code84();
    let cfg = DecoderConfig {
        x_update_sign: XUpdateSign::Reversed,
        max_iterations: 200,
        ..DecoderConfig::default()
    };
    let llr = LlrVector::new(vec![4.0; 8]).unwrap();
    let out = decode(&llr, &h, &cfg, BuiltinProjector::fix()).unwrap();
    assert_eq!(out.x.len(), 8);
    assert!(out.iterations <= 200);
}

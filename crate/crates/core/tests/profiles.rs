use perfect_codes::linalg::hamming_code;
use perfect_codes::profiles::*;
use perfect_codes::switching::{is_i_component, minimal_i_components, switch};
use perfect_codes::BinaryCode;
use rand::{Rng, SeedableRng};

fn size10() -> BinaryCode {
    BinaryCode::from_strs(&[
        "0000000", "0001111", "0101100", "0110110", "0111011", "1001001", "1010111", "1011100",
        "1101010", "1110001",
    ])
    .unwrap()
}

#[test]
fn length7_universe() {
    let all = enumerate_perfect_codes(7).unwrap();
    assert_eq!(all.len(), 240);
    assert_eq!(all.iter().filter(|c| c.contains_bits(0)).count(), 30);
    assert!(all.iter().all(|c| c.is_perfect()));
    for w in [3, 4] {
        let mut slices: Vec<Vec<u32>> = all.iter().map(|c| c.words_of_weight(w)).collect();
        slices.sort();
        slices.dedup();
        assert_eq!(slices.len(), 240, "weight {w}");
        for c in &all {
            let s = weight_slice(c, w);
            assert!(is_defining_slice(&s, &all, SliceMatch::Exact).unwrap());
        }
    }
    for c in &all {
        assert!(lighter_words_determined(&weight_slice(c, 3), &all).unwrap());
        assert!(lighter_words_determined(&weight_slice(c, 0), &all).unwrap());
    }
}

#[test]
fn slice_examples() {
    let h = hamming_code(4).unwrap();
    for &c in h.words().iter().take(16) {
        assert_eq!(weight_slice(&h.translate(c), 3).words.len(), 35);
    }
    assert!(weight_slice(&h, 1).words.is_empty());
    assert_eq!(weight_slice(&hamming_code(3).unwrap(), 7).words.words(), &[0x7f]);
}

#[test]
fn s_components() {
    for m in [3, 4] {
        let s = build_s_component(m, SVariant::Complemented, false).unwrap();
        assert!(is_i_component(&s.code, s.coord, &s.s), "m={m}");
    }
    let s = build_s_component(4, SVariant::Complemented, false).unwrap();
    let c2 = switch(&s.code, s.coord, &s.s).unwrap();
    assert!(c2.is_perfect());
    assert_ne!(c2, s.code);
    for w in 0..=15 {
        if w != 7 && w != 8 {
            assert_eq!(c2.words_of_weight(w), s.code.words_of_weight(w), "weight {w}");
        }
    }
    let s = build_s_component(4, SVariant::Repeated, false).unwrap();
    assert!(is_i_component(&s.code, s.coord, &s.s));
    let c2 = switch(&s.code, s.coord, &s.s).unwrap();
    let (new7, old7) = (c2.words_of_weight(7), s.code.words_of_weight(7));
    assert!(new7.len() < old7.len());
    assert!(new7.iter().all(|w| old7.binary_search(w).is_ok()));
    // the strict subset is not a defining set under subset semantics
    let slice = weight_slice(&c2, 7);
    assert_eq!(
        slice_matches(&slice, &[s.code.clone(), c2.clone()], SliceMatch::Subset).unwrap(),
        2
    );
    assert!(!is_defining_slice(&slice, &[s.code.clone(), c2], SliceMatch::Subset).unwrap());
}

#[test]
fn length7_embeddings() {
    let h7 = hamming_code(3).unwrap();
    for words in [vec!["0000"], vec!["0000", "1110"], vec!["0000", "1111"]] {
        let a = BinaryCode::from_strs(&words).unwrap();
        match embed_search(&a, &h7, 10_000_000).unwrap() {
            EmbedOutcome::Found(e) => {
                assert!(a.words().iter().all(|&w| h7.contains_bits(e.apply(7, 4, w))))
            }
            other => panic!("{words:?}: {other:?}"),
        }
    }
    assert!(h7.pair_distance_counts()[5] == 0);
    let a = BinaryCode::from_strs(&["00000", "11111"]).unwrap();
    assert_eq!(embed_search(&a, &h7, 10_000_000).unwrap(), EmbedOutcome::NotFound);
}

/// Distinct perfect codes reached by random switches from Hamming(15).
pub fn switched_codes(count: usize, seed: u64) -> Vec<BinaryCode> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cur = hamming_code(4).unwrap();
    let mut out: Vec<BinaryCode> = Vec::new();
    while out.len() < count {
        let coord = rng.gen_range(1..=15);
        let parts = minimal_i_components(&cur, coord).unwrap();
        let k = rng.gen_range(0..parts.components.len());
        cur = switch(&cur, coord, &parts.components[k]).unwrap();
        if !out.contains(&cur) {
            out.push(cur.clone());
        }
    }
    out
}

#[test]
fn size10_code_does_not_embed() {
    let a = size10();
    assert!(a.has_min_distance_at_least(3));
    let t = std::time::Instant::now();
    assert_eq!(
        embed_search(&a, &hamming_code(4).unwrap(), u64::MAX).unwrap(),
        EmbedOutcome::NotFound
    );
    eprintln!("hamming {:?}", t.elapsed());
    for c in switched_codes(50, 3) {
        assert!(c.is_perfect());
        assert_eq!(embed_search(&a, &c, u64::MAX).unwrap(), EmbedOutcome::NotFound);
    }
    eprintln!("total {:?}", t.elapsed());
}

#[test]
fn profiles_of_hamming() {
    let h = hamming_code(4).unwrap();
    let p = clp(&h).unwrap();
    assert_eq!(
        p.kappa_prime,
        vec![1, 1, 2, 2, 4, 8, 16, 16, 32, 64, 128, 256, 512, 1024, 2048]
    );
    assert_eq!(p.row(), "1,1,2,2,4,8,16,16,32,64,128,256,512,1024,2048");
    let e = clp(&h.extend().unwrap()).unwrap();
    assert_eq!(
        e.kappa_prime,
        vec![1, 1, 1, 2, 2, 4, 8, 16, 16, 32, 64, 128, 256, 512, 1024, 2048]
    );
    for c in switched_codes(6, 9) {
        let k = clp(&c).unwrap().kappa_prime;
        assert!((10..=16).contains(&k[6]));
        for i in 0..14 {
            assert!(k[i] <= k[i + 1] && k[i + 1] <= 2 * k[i]);
        }
    }
}

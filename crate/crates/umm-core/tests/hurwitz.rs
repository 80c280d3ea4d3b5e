use proptest::prelude::*;
use umm_core::hurwitz::{
    factorization_length, hurwitz_table, monotone_count, partitions, HurwitzConvention, Partition, Permutation,
    MAX_HURWITZ_DEGREE,
};

/// `(genus, α, β, count)` from an independent brute-force enumeration over
/// labeled `ρ` of type `β` and monotone transposition sequences.
const BRUTE_FORCE: &[(usize, &[usize], &[usize], u64)] = &[
    (0, &[1], &[1], 1),
    (0, &[2], &[2], 1),
    (0, &[2], &[1, 1], 1),
    (0, &[1, 1], &[2], 1),
    (0, &[1, 1], &[1, 1], 1),
    (0, &[3], &[3], 2),
    (0, &[3], &[2, 1], 6),
    (0, &[3], &[1, 1, 1], 4),
    (0, &[2, 1], &[3], 6),
    (0, &[2, 1], &[2, 1], 18),
    (0, &[2, 1], &[1, 1, 1], 12),
    (0, &[1, 1, 1], &[3], 4),
    (0, &[1, 1, 1], &[2, 1], 12),
    (0, &[1, 1, 1], &[1, 1, 1], 8),
    (0, &[4], &[4], 6),
    (0, &[4], &[3, 1], 24),
    (0, &[4], &[2, 2], 12),
    (0, &[4], &[2, 1, 1], 60),
    (0, &[4], &[1, 1, 1, 1], 30),
    (0, &[3, 1], &[4], 24),
    (0, &[3, 1], &[3, 1], 96),
    (0, &[3, 1], &[2, 2], 48),
    (0, &[3, 1], &[2, 1, 1], 240),
    (0, &[3, 1], &[1, 1, 1, 1], 120),
    (0, &[2, 2], &[4], 12),
    (0, &[2, 2], &[3, 1], 48),
    (0, &[2, 2], &[2, 2], 18),
    (0, &[2, 2], &[2, 1, 1], 108),
    (0, &[2, 2], &[1, 1, 1, 1], 54),
    (0, &[2, 1, 1], &[4], 60),
    (0, &[2, 1, 1], &[3, 1], 240),
    (0, &[2, 1, 1], &[2, 2], 108),
    (0, &[2, 1, 1], &[2, 1, 1], 576),
    (0, &[2, 1, 1], &[1, 1, 1, 1], 288),
    (0, &[1, 1, 1, 1], &[4], 30),
    (0, &[1, 1, 1, 1], &[3, 1], 120),
    (0, &[1, 1, 1, 1], &[2, 2], 54),
    (0, &[1, 1, 1, 1], &[2, 1, 1], 288),
    (0, &[1, 1, 1, 1], &[1, 1, 1, 1], 144),
    (1, &[1], &[1], 0),
    (1, &[2], &[2], 1),
    (1, &[2], &[1, 1], 1),
    (1, &[1, 1], &[2], 1),
    (1, &[1, 1], &[1, 1], 1),
    (1, &[3], &[3], 10),
    (1, &[3], &[2, 1], 30),
    (1, &[3], &[1, 1, 1], 20),
    (1, &[2, 1], &[3], 30),
    (1, &[2, 1], &[2, 1], 90),
    (1, &[2, 1], &[1, 1, 1], 60),
    (1, &[1, 1, 1], &[3], 20),
    (1, &[1, 1, 1], &[2, 1], 60),
    (1, &[1, 1, 1], &[1, 1, 1], 40),
    (1, &[4], &[4], 90),
    (1, &[4], &[3, 1], 360),
    (1, &[4], &[2, 2], 150),
    (1, &[4], &[2, 1, 1], 840),
    (1, &[4], &[1, 1, 1, 1], 420),
    (1, &[3, 1], &[4], 360),
    (1, &[3, 1], &[3, 1], 1440),
    (1, &[3, 1], &[2, 2], 600),
    (1, &[3, 1], &[2, 1, 1], 3360),
    (1, &[3, 1], &[1, 1, 1, 1], 1680),
    (1, &[2, 2], &[4], 150),
    (1, &[2, 2], &[3, 1], 600),
    (1, &[2, 2], &[2, 2], 234),
    (1, &[2, 2], &[2, 1, 1], 1368),
    (1, &[2, 2], &[1, 1, 1, 1], 684),
    (1, &[2, 1, 1], &[4], 840),
    (1, &[2, 1, 1], &[3, 1], 3360),
    (1, &[2, 1, 1], &[2, 2], 1368),
    (1, &[2, 1, 1], &[2, 1, 1], 7776),
    (1, &[2, 1, 1], &[1, 1, 1, 1], 3888),
    (1, &[1, 1, 1, 1], &[4], 420),
    (1, &[1, 1, 1, 1], &[3, 1], 1680),
    (1, &[1, 1, 1, 1], &[2, 2], 684),
    (1, &[1, 1, 1, 1], &[2, 1, 1], 3888),
    (1, &[1, 1, 1, 1], &[1, 1, 1, 1], 1944),
];

fn count(genus: usize, alpha: &Partition, beta: &Partition) -> u64 {
    monotone_count(genus, alpha, beta, HurwitzConvention::CALIBRATED).unwrap()
}

fn partition(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, j| acc * (n + 1 - j) / j)
}

/// Genus-zero count with `β = (1^d)`:
/// `d!/|Aut μ| · (2d+1)^{(ℓ-3)} · Π C(2μ_i, μ_i)` with a rising factorial.
fn genus_zero_closed_form(mu: &Partition) -> u64 {
    let d = mu.size() as u64;
    let l = mu.length() as i64;
    let mut numerator: u64 = (1..=d).product();
    let mut denominator: u64 = 1;
    let mut k = 0;
    while k < mu.parts().len() {
        let run = mu.parts()[k..].iter().take_while(|&&p| p == mu.parts()[k]).count();
        denominator *= (1..=run as u64).product::<u64>();
        k += run;
    }
    for &p in mu.parts() {
        numerator *= binomial(2 * p as u64, p as u64);
    }
    if l >= 3 {
        numerator *= (0..(l - 3) as u64).map(|j| 2 * d + 1 + j).product::<u64>();
    } else {
        denominator *= (1..=(3 - l) as u64).map(|j| 2 * d + 1 - j).product::<u64>();
    }
    assert_eq!(numerator % denominator, 0);
    numerator / denominator
}

#[test]
fn brute_force_table() {
    for &(genus, a, b, expect) in BRUTE_FORCE {
        assert_eq!(count(genus, &partition(a), &partition(b)), expect, "g={genus} α={a:?} β={b:?}");
    }
    for genus in 0..=1 {
        let table = hurwitz_table(genus, 4, HurwitzConvention::CALIBRATED).unwrap();
        let frozen = BRUTE_FORCE.iter().filter(|r| r.0 == genus && r.1.iter().sum::<usize>() == 4);
        assert_eq!(table.len(), frozen.count());
    }
}

#[test]
fn genus_zero_against_closed_form() {
    // d = 6 is supported but takes half a minute
    for d in 1..=5 {
        let ones = partition(&vec![1; d]);
        for mu in partitions(d).unwrap() {
            assert_eq!(count(0, &mu, &ones), genus_zero_closed_form(&mu), "μ = {mu}");
        }
    }
}

#[test]
fn length_and_domain_checks() {
    let one = partition(&[1]);
    assert_eq!(factorization_length(0, &one, &one), Some(0));
    assert_eq!(count(1, &one, &one), 0);
    assert!(monotone_count(0, &partition(&[2]), &one, HurwitzConvention::CALIBRATED).is_err());
    let big = partition(&[MAX_HURWITZ_DEGREE + 1]);
    assert!(monotone_count(0, &big, &big, HurwitzConvention::CALIBRATED).is_err());
    assert!("(3,1)".parse::<Partition>().is_ok());
    assert!(Permutation::from_images(vec![0, 0]).is_err());
}

fn arb_partition(max: usize) -> impl Strategy<Value = Partition> {
    (1..=max).prop_flat_map(|d| prop::sample::select(partitions(d).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn counts_are_symmetric(d in 1usize..=5, genus in 0usize..=1, (i, j) in (any::<prop::sample::Index>(), any::<prop::sample::Index>())) {
        let parts = partitions(d).unwrap();
        let (a, b) = (i.get(&parts), j.get(&parts));
        prop_assert_eq!(count(genus, a, b), count(genus, b, a));
    }

    #[test]
    fn partition_text_round_trips(p in arb_partition(8)) {
        prop_assert_eq!(p.to_string().parse::<Partition>().unwrap(), p.clone());
        prop_assert_eq!(p.parts().iter().sum::<usize>(), p.size());
    }

    #[test]
    fn cycle_type_partitions_the_degree(images in Just((0u8..6).collect::<Vec<_>>()).prop_shuffle()) {
        let p = Permutation::from_images(images).unwrap();
        prop_assert_eq!(p.cycle_type().size(), 6);
    }
}

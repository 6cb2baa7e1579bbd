use natext::sieve::{self, SmallPrimes};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn trial(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

#[test]
fn random_numbers_below_ten_billion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let primes = SmallPrimes::for_max(10_000_000_000);
    for _ in 0..3000 {
        let n = rng.random_range(1..10_000_000_000u64);
        let expected = trial(n);
        assert_eq!(sieve::factorize(n).unwrap().factors(), expected.as_slice(), "n = {n}");
        assert_eq!(primes.factorize(n).unwrap().factors(), expected.as_slice(), "n = {n}");
    }
}

#[test]
fn segments_agree_with_trial_division() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let primes = SmallPrimes::for_max(20_000_000_000);
    for _ in 0..5 {
        let base = rng.random_range(1..10_000_000_000u64);
        let len = rng.random_range(1..5000usize);
        let got = sieve::factor_range(base, len, &primes).unwrap();
        for (i, f) in got.iter().enumerate() {
            let n = base + i as u64;
            assert_eq!(f.factors(), trial(n).as_slice(), "n = {n}");
            assert_eq!(f.value(), Some(n));
        }
    }
}

#[test]
fn segment_spf() {
    let primes = SmallPrimes::for_max(2_000_000);
    let seg = sieve::build_segment(1_000_000, 1000, &primes).unwrap();
    for n in 1_000_000..1_001_000u64 {
        assert_eq!(seg.spf(n), Some(trial(n)[0].0), "n = {n}");
    }
}

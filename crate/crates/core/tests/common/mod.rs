// Shared brute-force helpers; each test binary includes this file as a module.
#![allow(dead_code)]

use blotto_core::Decision;
use rand::Rng;

/// Every length-`k` vector of non-negative integers summing to `n`, in lexicographic order.
pub fn compositions(k: usize, n: u32) -> Vec<Vec<u32>> {
    fn go(k: usize, n: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=n {
            prefix.push(a);
            go(k - 1, n - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u64, r: u64) -> u64 {
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Uniformly random composition via stars and bars.
pub fn random_decision<R: Rng>(rng: &mut R, k: usize, n: u32) -> Decision {
    let mut cuts: Vec<u32> = (0..k - 1).map(|_| rng.gen_range(0..=n)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut v = Vec::with_capacity(k);
    for c in cuts {
        v.push(c - prev);
        prev = c;
    }
    v.push(n - prev);
    Decision::new(v, n).unwrap()
}

#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use wtp_core::cli::{parse_config, RunConfig};
use wtp_core::{DigitSystem, Exponents};

pub fn config(name: &str) -> RunConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    parse_config(&text, path.to_str().unwrap()).unwrap()
}

/// Sorted bases in `2..=max_base`, rank `2..=max_rank`, a random nonempty
/// subset of the box with at most `max_digits` elements.
pub fn random_sponge(rng: &mut impl Rng, max_rank: usize, max_base: u32, max_digits: usize) -> DigitSystem {
    let r = rng.gen_range(2..=max_rank);
    let mut bases: Vec<u32> = (0..r).map(|_| rng.gen_range(2..=max_base)).collect();
    bases.sort_unstable();
    let full = DigitSystem::full_product(bases.clone()).unwrap();
    let mut box_digits = full.digits().to_vec();
    box_digits.shuffle(rng);
    let k = rng.gen_range(1..=max_digits.min(box_digits.len()));
    box_digits.truncate(k);
    DigitSystem::new(bases, box_digits).unwrap()
}

pub fn random_exponents(rng: &mut impl Rng, len: usize) -> Exponents {
    Exponents::new((0..len).map(|_| rng.gen::<f64>()).collect()).unwrap()
}

/// Brute-force nested count: for each level-`r` word, the `a`-weighted sum over
/// its level-`(r-1)` preimages, recursively, with every level a full shift on
/// the projected digit set. Exponent of level `j` is `a_{j-1}`.
pub fn brute_force_ln_count(sys: &DigitSystem, a: &Exponents, n: usize) -> f64 {
    let r = sys.rank();
    // words of length n over the digit set, projected to each level
    let digits = sys.digits();
    fn words(alpha: usize, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..alpha).map(move |x| {
                        let mut v = w.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out
    }
    // level j keeps the first r - j + 1 coordinates
    let project = |w: &[usize], j: usize| -> Vec<Vec<u32>> { w.iter().map(|&i| digits[i][..r - j + 1].to_vec()).collect() };
    let mut level: std::collections::BTreeMap<Vec<Vec<u32>>, f64> = std::collections::BTreeMap::new();
    for w in words(digits.len(), n) {
        let key = project(&w, 1);
        level.insert(key, 1.0);
    }
    for j in 2..=r {
        let exponent = if j == 2 { 1.0 } else { a.get(j - 2) };
        let mut up: std::collections::BTreeMap<Vec<Vec<u32>>, f64> = std::collections::BTreeMap::new();
        for (w, v) in level {
            let key: Vec<Vec<u32>> = w.iter().map(|d| d[..r - j + 1].to_vec()).collect();
            *up.entry(key).or_default() += v.powf(exponent);
        }
        level = up;
    }
    let top_exponent = a.get(r - 1);
    level.values().map(|v| v.powf(top_exponent)).sum::<f64>().ln()
}

//! Uniformity of word selection.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use zerotwo_auth::passphrase::{sample_index, WORDLIST_LEN};

/// Replays a fixed sequence of 16-bit draws.
struct Draws(std::vec::IntoIter<u16>);

impl RngCore for Draws {
    fn next_u32(&mut self) -> u32 {
        unimplemented!()
    }
    fn next_u64(&mut self) -> u64 {
        unimplemented!()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        dest.copy_from_slice(&self.0.next().expect("ran out of draws").to_le_bytes());
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

/// Feeding all 65536 draws, each accepted draw maps to an index and every
/// index receives exactly the same number of them.
#[test]
fn rejection_sampling_has_no_bias() {
    let mut counts = vec![0u32; WORDLIST_LEN];
    let mut accepted = 0u32;
    for draw in 0..=u16::MAX {
        // A rejected draw is followed by 0, which is always accepted; only
        // count draws that were taken on the first try.
        let mut rng = Draws(vec![draw, 0].into_iter());
        let idx = sample_index(&mut rng);
        if rng.0.len() == 1 {
            counts[idx] += 1;
            accepted += 1;
        }
    }
    assert_eq!(accepted, 62208);
    assert!(counts.iter().all(|&c| c == 8));
}

/// Chi-square critical value for 15 degrees of freedom at p = 0.001.
const CHI2_15_P001: f64 = 37.697;

/// 10 000 draws binned into 16 equal buckets of 486 indices: each bucket
/// stays within 4 sigma of its expectation and the chi-square statistic
/// stays below the 0.1% critical value.
#[test]
fn ten_thousand_draws_look_uniform() {
    const DRAWS: usize = 10_000;
    const BUCKETS: usize = 16;
    let width = WORDLIST_LEN / BUCKETS;
    assert_eq!(width * BUCKETS, WORDLIST_LEN);

    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
    let mut counts = [0usize; BUCKETS];
    for _ in 0..DRAWS {
        counts[sample_index(&mut rng) / width] += 1;
    }
    let p = 1.0 / BUCKETS as f64;
    let expected = DRAWS as f64 * p;
    let sigma = (DRAWS as f64 * p * (1.0 - p)).sqrt();
    let max_dev = counts.iter().map(|&c| (c as f64 - expected).abs()).fold(0.0, f64::max);
    assert!(max_dev <= 4.0 * sigma, "max deviation {max_dev:.1} > 4 sigma ({:.1})", 4.0 * sigma);
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < CHI2_15_P001, "chi-square {chi2:.2}");
}

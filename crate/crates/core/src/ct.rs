/// Compares two byte strings without an early exit on the first mismatch.
///
/// Lengths are not secret: unequal lengths return `false` immediately.
#[inline(never)]
pub fn constant_time_eq(a: &[u8], b: &[u8]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut acc = 0u8;
    for (x, y) in a.iter().zip(b) {
        acc |= x ^ y;
    }
    std::hint::black_box(acc) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_inputs_are_equal() {
        assert!(constant_time_eq(&[], &[]));
    }

    #[test]
    fn every_single_bit_flip_is_detected() {
        let base = [0x5au8; 32];
        assert!(constant_time_eq(&base, &base));
        for bit in 0..256 {
            let mut flipped = base;
            flipped[bit / 8] ^= 1 << (bit % 8);
            assert!(!constant_time_eq(&base, &flipped), "bit {bit}");
        }
    }

    #[test]
    fn length_mismatch_is_unequal() {
        assert!(!constant_time_eq(&[1, 2, 3], &[1, 2]));
        assert!(!constant_time_eq(&[], &[0]));
    }
}

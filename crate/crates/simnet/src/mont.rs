//! Montgomery arithmetic and a fixed-base exponentiation table.
//!
//! The dictionary attack computes `g^x mod n` for a million different `x`
//! with the same `g`. Precomputing `g^(j·2^(w·i))` for every window `i` and
//! digit `j` turns each exponentiation into one multiplication per window,
//! which is what makes 10^6 trials practical on one core.

use num_bigint::BigUint;
use num_traits::Zero;

/// Widest modulus supported, in 64-bit limbs (4096 bits).
pub const MAX_LIMBS: usize = 64;

/// Arithmetic modulo an odd `n` on little-endian `u64` limbs, using the
/// CIOS (coarsely integrated operand scanning) product.
#[derive(Clone)]
pub struct Montgomery {
    n: Vec<u64>,
    /// `-n^-1 mod 2^64`
    n0inv: u64,
    /// `R^2 mod n` with `R = 2^(64·s)`
    r2: Vec<u64>,
    modulus: BigUint,
}

fn limbs_of(x: &BigUint, s: usize) -> Vec<u64> {
    let mut limbs = x.to_u64_digits();
    assert!(limbs.len() <= s, "value wider than the modulus");
    limbs.resize(s, 0);
    limbs
}

fn geq(a: &[u64], b: &[u64]) -> bool {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            return x > y;
        }
    }
    true
}

fn sub_in_place(a: &mut [u64], b: &[u64]) {
    let mut borrow = 0u64;
    for (x, y) in a.iter_mut().zip(b) {
        let (d1, b1) = x.overflowing_sub(*y);
        let (d2, b2) = d1.overflowing_sub(borrow);
        *x = d2;
        borrow = (b1 | b2) as u64;
    }
}

#[inline(always)]
fn mac(t: u64, a: u64, b: u64, carry: u64) -> (u64, u64) {
    let wide = t as u128 + (a as u128) * (b as u128) + carry as u128;
    (wide as u64, (wide >> 64) as u64)
}

impl Montgomery {
    /// Panics unless `n` is odd, greater than 1 and at most [`MAX_LIMBS`] wide.
    pub fn new(n: &BigUint) -> Self {
        assert!(n.bit(0) && n.bits() > 1, "modulus must be odd and > 1");
        let limbs = n.to_u64_digits();
        let s = limbs.len();
        assert!(s <= MAX_LIMBS, "modulus too wide");
        let n0 = limbs[0];
        // Newton iteration doubles the correct low bits each step.
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n0.wrapping_mul(inv)));
        }
        let r2 = (BigUint::from(1u32) << (128 * s)) % n;
        Self { n: limbs, n0inv: inv.wrapping_neg(), r2: limbs_of(&r2, s), modulus: n.clone() }
    }

    pub fn limbs(&self) -> usize {
        self.n.len()
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `out = a·b·R^-1 mod n`, fully reduced. Inputs must be below `n`.
    pub fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let s = self.n.len();
        let mut t = [0u64; MAX_LIMBS + 2];
        for &bi in &b[..s] {
            let mut c = 0u64;
            for j in 0..s {
                (t[j], c) = mac(t[j], a[j], bi, c);
            }
            let (sum, over) = t[s].overflowing_add(c);
            t[s] = sum;
            t[s + 1] = over as u64;

            let m = t[0].wrapping_mul(self.n0inv);
            let (_, mut c) = mac(t[0], m, self.n[0], 0);
            for j in 1..s {
                (t[j - 1], c) = mac(t[j], m, self.n[j], c);
            }
            let (sum, over) = t[s].overflowing_add(c);
            t[s - 1] = sum;
            t[s] = t[s + 1] + over as u64;
        }
        out[..s].copy_from_slice(&t[..s]);
        if t[s] != 0 || geq(&out[..s], &self.n) {
            sub_in_place(&mut out[..s], &self.n);
        }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.n.len()];
        self.mul_into(a, b, &mut out);
        out
    }

    pub fn to_mont(&self, x: &BigUint) -> Vec<u64> {
        let reduced = x % &self.modulus;
        self.mul(&limbs_of(&reduced, self.n.len()), &self.r2)
    }

    pub fn from_mont(&self, a: &[u64]) -> BigUint {
        let mut one = vec![0; self.n.len()];
        one[0] = 1;
        let plain = self.mul(a, &one);
        let bytes: Vec<u8> = plain.iter().flat_map(|l| l.to_le_bytes()).collect();
        BigUint::from_bytes_le(&bytes)
    }

    /// Left-to-right square-and-multiply. Slow, kept as a reference.
    pub fn pow(&self, base: &BigUint, exp: &BigUint) -> BigUint {
        let b = self.to_mont(base);
        let mut acc = self.to_mont(&BigUint::from(1u32));
        let mut tmp = vec![0; self.n.len()];
        for i in (0..exp.bits()).rev() {
            self.mul_into(&acc, &acc, &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
            if exp.bit(i) {
                self.mul_into(&acc, &b, &mut tmp);
                std::mem::swap(&mut acc, &mut tmp);
            }
        }
        self.from_mont(&acc)
    }
}

/// `base^(j·2^(w·i))` in Montgomery form for every window `i` and digit `j`.
pub struct FixedBaseTable {
    mont: Montgomery,
    window: u32,
    windows: usize,
    table: Vec<u64>,
}

impl FixedBaseTable {
    /// Covers exponents below `2^exponent_bits`. Memory is
    /// `ceil(bits/w) · 2^w · limbs · 8` bytes.
    pub fn new(mont: Montgomery, base: &BigUint, exponent_bits: u32, window: u32) -> Self {
        assert!((1..=16).contains(&window));
        let s = mont.limbs();
        let digits = 1usize << window;
        let windows = exponent_bits.div_ceil(window) as usize;
        let mut table = vec![0u64; windows * digits * s];
        let one = mont.to_mont(&BigUint::from(1u32));
        let mut step = mont.to_mont(base);
        let mut tmp = vec![0u64; s];
        for i in 0..windows {
            let row = i * digits * s;
            table[row..row + s].copy_from_slice(&one);
            for j in 1..digits {
                let (done, rest) = table.split_at_mut(row + j * s);
                mont.mul_into(&done[row + (j - 1) * s..], &step, &mut rest[..s]);
            }
            // step^(2^w) = step^(2^w - 1) · step
            mont.mul_into(&table[row + (digits - 1) * s..row + digits * s], &step, &mut tmp);
            std::mem::swap(&mut step, &mut tmp);
        }
        Self { mont, window, windows, table }
    }

    pub fn montgomery(&self) -> &Montgomery {
        &self.mont
    }

    fn digit(&self, exp_le: &[u64], i: usize) -> usize {
        let bit = i * self.window as usize;
        let (limb, shift) = (bit / 64, bit % 64);
        let mut v = exp_le.get(limb).copied().unwrap_or(0) >> shift;
        if shift + self.window as usize > 64 {
            v |= exp_le.get(limb + 1).copied().unwrap_or(0) << (64 - shift);
        }
        (v & ((1u64 << self.window) - 1)) as usize
    }

    /// `base^e` in Montgomery form, with `e` as little-endian limbs.
    pub fn pow_limbs(&self, exp_le: &[u64]) -> Vec<u64> {
        let s = self.mont.limbs();
        let covered = self.windows * self.window as usize;
        let bits =
            exp_le.iter().rposition(|&l| l != 0).map_or(0, |i| 64 * (i + 1) - exp_le[i].leading_zeros() as usize);
        assert!(bits <= covered, "exponent wider than the table");
        let digits = 1usize << self.window;
        let mut acc: Option<Vec<u64>> = None;
        let mut tmp = vec![0u64; s];
        for i in 0..self.windows {
            let j = self.digit(exp_le, i);
            if j == 0 {
                continue;
            }
            let at = (i * digits + j) * s;
            let entry = &self.table[at..at + s];
            match acc.as_mut() {
                None => acc = Some(entry.to_vec()),
                Some(a) => {
                    self.mont.mul_into(a, entry, &mut tmp);
                    a.copy_from_slice(&tmp);
                }
            }
        }
        acc.unwrap_or_else(|| self.table[..s].to_vec())
    }

    /// `base^e` in Montgomery form, with `e` as big-endian bytes.
    pub fn pow_be_bytes(&self, exp_be: &[u8]) -> Vec<u64> {
        let limbs: Vec<u64> = exp_be
            .rchunks(8)
            .map(|c| {
                let mut buf = [0u8; 8];
                buf[8 - c.len()..].copy_from_slice(c);
                u64::from_be_bytes(buf)
            })
            .collect();
        self.pow_limbs(&limbs)
    }

    pub fn pow(&self, exp: &BigUint) -> BigUint {
        if exp.is_zero() {
            return self.mont.from_mont(&self.pow_limbs(&[]));
        }
        self.mont.from_mont(&self.pow_limbs(&exp.to_u64_digits()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_modulus_matches_modpow() {
        let n = BigUint::from(23u32);
        let table = FixedBaseTable::new(Montgomery::new(&n), &BigUint::from(5u32), 16, 3);
        for e in 0u32..2000 {
            let want = BigUint::from(5u32).modpow(&BigUint::from(e), &n);
            assert_eq!(table.pow(&BigUint::from(e)), want, "e = {e}");
            assert_eq!(table.montgomery().pow(&BigUint::from(5u32), &BigUint::from(e)), want);
        }
    }

    #[test]
    fn byte_and_limb_forms_agree() {
        let n = BigUint::from(0xffff_ffff_ffff_ffc5u64) * BigUint::from(1_000_003u64);
        let n = if n.bit(0) { n } else { n + 1u32 };
        let table = FixedBaseTable::new(Montgomery::new(&n), &BigUint::from(7u32), 80, 5);
        let e = BigUint::parse_bytes(b"abcdef0123456789ab", 16).unwrap();
        assert_eq!(table.pow_be_bytes(&e.to_bytes_be()), table.pow_limbs(&e.to_u64_digits()));
        assert_eq!(table.pow(&e), BigUint::from(7u32).modpow(&e, &n));
    }
}

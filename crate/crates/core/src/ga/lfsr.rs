use super::GaError;

/// Feedback taps of the x^16 + x^15 + x^13 + x^4 + 1 polynomial.
pub const TAPS: [u32; 4] = [16, 15, 13, 4];

/// 16-bit Fibonacci LFSR. The feedback bit enters at bit 15 and the state
/// shifts right, so bit `16 - t` holds tap `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lfsr {
    state: u16,
}

impl Lfsr {
    pub fn new(seed: u16) -> Result<Self, GaError> {
        if seed == 0 {
            Err(GaError::ZeroSeed)
        } else {
            Ok(Self { state: seed })
        }
    }

    pub fn state(&self) -> u16 {
        self.state
    }

    /// Shifts once and returns the new feedback bit.
    #[inline]
    pub fn step(&mut self) -> u16 {
        let s = self.state;
        let bit = (s ^ (s >> 1) ^ (s >> 3) ^ (s >> 12)) & 1;
        self.state = (s >> 1) | (bit << 15);
        bit
    }

    /// Sixteen steps; the state then consists solely of fresh bits.
    #[inline]
    pub fn next_word(&mut self) -> u16 {
        for _ in 0..16 {
            self.step();
        }
        self.state
    }

    /// `bits` fresh bits assembled from consecutive words, low word first.
    pub fn next_bits(&mut self, bits: u8) -> u64 {
        let mut out = 0u64;
        let mut filled = 0;
        while filled < bits {
            out |= u64::from(self.next_word()) << filled;
            filled += 16;
        }
        out & mask(bits)
    }
}

/// Functional form of [`Lfsr::next_word`].
pub fn lfsr_next(s: Lfsr) -> (Lfsr, u16) {
    let mut next = s;
    let word = next.next_word();
    (next, word)
}

#[inline]
pub fn mask(bits: u8) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// The four generators: initialization, selection, crossover, mutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngBank {
    pub init: Lfsr,
    pub selection: Lfsr,
    pub crossover: Lfsr,
    pub mutation: Lfsr,
}

impl RngBank {
    pub fn new(seeds: [u16; 4]) -> Result<Self, GaError> {
        Ok(Self {
            init: Lfsr::new(seeds[0])?,
            selection: Lfsr::new(seeds[1])?,
            crossover: Lfsr::new(seeds[2])?,
            mutation: Lfsr::new(seeds[3])?,
        })
    }
}

/// Derives four nonzero LFSR seeds from one 64-bit master seed.
pub fn expand_seed(master: u64) -> [u16; 4] {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(master);
    let mut out = [0u16; 4];
    for slot in &mut out {
        while *slot == 0 {
            *slot = rng.random();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bit-sequence form of the recurrence: b[t+16] = b[t] ^ b[t+1] ^ b[t+3] ^ b[t+12].
    fn oracle_words(seed: u16, words: usize) -> Vec<u16> {
        let mut bits: Vec<u16> = (0..16).map(|i| seed >> i & 1).collect();
        for t in 0..16 * words {
            let b = bits[t] ^ bits[t + 1] ^ bits[t + 3] ^ bits[t + 12];
            bits.push(b);
        }
        (1..=words)
            .map(|w| {
                let start = 16 * w;
                (0..16).fold(0u16, |acc, i| acc | bits[start + i] << i)
            })
            .collect()
    }

    #[test]
    fn matches_bit_recurrence() {
        for seed in [0x0001u16, 0xACE1, 0xFFFF, 0x8000] {
            let mut l = Lfsr::new(seed).unwrap();
            let got: Vec<u16> = (0..64).map(|_| l.next_word()).collect();
            assert_eq!(got, oracle_words(seed, 64));
        }
    }

    #[test]
    fn first_words_from_one() {
        let (s1, w1) = lfsr_next(Lfsr::new(1).unwrap());
        assert_eq!(w1, s1.state());
        // frozen from the bit-recurrence oracle
        assert_eq!(w1, oracle_words(1, 1)[0]);
        assert_eq!(w1, 0xB111);
    }

    #[test]
    fn full_period() {
        let start = Lfsr::new(1).unwrap();
        let mut l = start;
        let mut seen = vec![false; 1 << 16];
        let mut period = 0u32;
        loop {
            l.step();
            period += 1;
            assert_ne!(l.state(), 0);
            assert!(!seen[l.state() as usize] || l == start);
            seen[l.state() as usize] = true;
            if l == start {
                break;
            }
        }
        assert_eq!(period, 65535);
    }

    #[test]
    fn zero_seed_rejected() {
        assert_eq!(Lfsr::new(0), Err(GaError::ZeroSeed));
        assert!(RngBank::new([1, 2, 0, 4]).is_err());
    }

    #[test]
    fn wide_draws_are_masked() {
        let mut l = Lfsr::new(0x1234).unwrap();
        for bits in [1u8, 5, 16, 17, 37, 64] {
            let v = l.next_bits(bits);
            assert!(v <= mask(bits));
        }
    }
}

use super::config::{CrossMethod, MutMethod};
use super::lfsr::{mask, Lfsr};
use super::{GaError, Genome, Population};

/// Fitness-proportional pick with a `res`-bit scaler `r`: the threshold is
/// `floor(r * total / 2^res)` and the winner is the first individual whose
/// running score sum exceeds it.
pub fn roulette_select(scores: &[u32], r: u32, res: u8) -> Result<usize, GaError> {
    debug_assert!(u64::from(r) < 1u64 << res);
    let total: u64 = scores.iter().map(|&s| u64::from(s)).sum();
    if total == 0 {
        return Err(GaError::AllZeroFitness);
    }
    let threshold = (u64::from(r) * total) >> res;
    let mut cumulative = 0u64;
    for (i, &s) in scores.iter().enumerate() {
        cumulative += u64::from(s);
        if cumulative > threshold {
            return Ok(i);
        }
    }
    unreachable!("threshold is below the total score")
}

/// Cut position in `1 ..= len - 1` drawn from one word.
fn cut_point(word: u16, len: u8) -> u8 {
    1 + (u32::from(word) % u32::from(len - 1)) as u8
}

/// Exchanges the bits selected by `swap` between two parents.
#[inline]
fn exchange(p1: Genome, p2: Genome, swap: Genome) -> (Genome, Genome) {
    ((p1 & !swap) | (p2 & swap), (p2 & !swap) | (p1 & swap))
}

/// Recombines two `len`-bit parents. Bit 0 is the least significant bit.
pub fn crossover(
    p1: Genome,
    p2: Genome,
    method: CrossMethod,
    len: u8,
    rng: &mut Lfsr,
) -> (Genome, Genome) {
    match method {
        CrossMethod::SinglePoint => {
            if len < 2 {
                return (p1, p2);
            }
            let k = cut_point(rng.next_word(), len);
            exchange(p1, p2, mask(k))
        }
        CrossMethod::TwoPoint => {
            if len < 2 {
                return (p1, p2);
            }
            let a = cut_point(rng.next_word(), len);
            let b = cut_point(rng.next_word(), len);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            exchange(p1, p2, mask(hi) & !mask(lo))
        }
        CrossMethod::Uniform => {
            let m = rng.next_bits(len);
            exchange(p1, p2, m)
        }
    }
}

#[inline]
fn passes(word: u16, mr: u32, mut_res: u8) -> bool {
    (u32::from(word) & ((1u32 << mut_res) - 1)) < mr
}

/// Applies the mutation operator when the gate draw falls below `mr`.
pub fn mutate(
    g: Genome,
    method: MutMethod,
    mr: u32,
    mut_res: u8,
    len: u8,
    rng: &mut Lfsr,
) -> Genome {
    if !passes(rng.next_word(), mr, mut_res) {
        return g;
    }
    match method {
        MutMethod::SingleBit => {
            let bit = u32::from(rng.next_word()) % u32::from(len);
            g ^ (1 << bit)
        }
        MutMethod::BitFlip => {
            let mut out = g;
            for bit in 0..len {
                if passes(rng.next_word(), mr, mut_res) {
                    out ^= 1 << bit;
                }
            }
            out
        }
    }
}

/// Carries the `elite` best of `old` (ties to the lower index) ahead of
/// the scored children.
pub fn apply_elitism(
    old: &Population,
    children: Vec<Genome>,
    child_scores: Vec<u32>,
    elite: usize,
) -> Population {
    let mut order: Vec<usize> = (0..old.len()).collect();
    order.sort_by(|&a, &b| old.scores[b].cmp(&old.scores[a]).then(a.cmp(&b)));
    let mut genomes = Vec::with_capacity(elite + children.len());
    let mut scores = Vec::with_capacity(elite + children.len());
    for &i in order.iter().take(elite) {
        genomes.push(old.genomes[i]);
        scores.push(old.scores[i]);
    }
    genomes.extend(children);
    scores.extend(child_scores);
    Population { genomes, scores }
}

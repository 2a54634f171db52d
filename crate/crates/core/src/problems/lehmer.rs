/// `n!`, or `None` past `u64`.
pub fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Bits needed to index every permutation of `n` items.
pub fn bits_for_permutations(n: usize) -> Option<u8> {
    let count = factorial(n)?;
    Some((64 - (count - 1).leading_zeros()).max(1) as u8)
}

/// Permutation whose Lehmer code is the factorial-base expansion of
/// `value mod n!`, most significant digit first.
pub fn lehmer_decode(value: u64, n: usize) -> Vec<usize> {
    let total = factorial(n).expect("n! must fit in 64 bits");
    let mut rest = value % total;
    let mut pool: Vec<usize> = (0..n).collect();
    let mut perm = Vec::with_capacity(n);
    let mut radix = total;
    for k in (1..=n as u64).rev() {
        radix /= k;
        let digit = (rest / radix) as usize;
        rest %= radix;
        perm.push(pool.remove(digit));
    }
    perm
}

/// Inverse of [`lehmer_decode`] on `[0, n!)`.
pub fn lehmer_encode(perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut value = 0u64;
    for (i, &p) in perm.iter().enumerate() {
        let smaller_after = perm[i + 1..].iter().filter(|&&q| q < p).count() as u64;
        value = value * (n - i) as u64 + smaller_after;
    }
    value
}

use crate::fixedq::{max_code, rescale, FixedWord};

use super::spec::{AndMethod, FlcSpec, InputPartition, MembershipFunction};
use super::FlcError;

/// Degree of truth of `x` in `mf`, as an `alpha_bits` word.
pub fn membership(mf: &MembershipFunction, x: FixedWord, alpha_bits: u8) -> FixedWord {
    FixedWord::new(mf.degree(x.value(), alpha_bits), alpha_bits)
        .expect("degree never exceeds the alpha full scale")
}

/// The two adjacent fuzzy sets an input code can activate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActivePair {
    /// Index of the left set, at most `m - 2`.
    pub left: usize,
    pub alpha_left: u32,
    pub alpha_right: u32,
}

impl ActivePair {
    #[inline]
    pub fn index(&self, pick_right: bool) -> usize {
        self.left + usize::from(pick_right)
    }

    #[inline]
    pub fn alpha(&self, pick_right: bool) -> u32 {
        if pick_right {
            self.alpha_right
        } else {
            self.alpha_left
        }
    }
}

/// Locates the region of `x`: the lowest set with nonzero degree, pulled
/// back to `m - 2` at the right edge so every input contributes a pair.
pub fn active_pair(part: &InputPartition, x: u32, alpha_bits: u8) -> Result<ActivePair, FlcError> {
    let m = part.len();
    if m < 2 {
        return Err(FlcError::Uncovered { code: x });
    }
    let first = part
        .mfs
        .iter()
        .position(|mf| mf.degree(x, alpha_bits) > 0)
        .ok_or(FlcError::Uncovered { code: x })?;
    let left = first.min(m - 2);
    Ok(ActivePair {
        left,
        alpha_left: part.mfs[left].degree(x, alpha_bits),
        alpha_right: part.mfs[left + 1].degree(x, alpha_bits),
    })
}

/// Mixed-radix rule index with input 0 as the least significant digit.
pub fn rule_address(indices: &[usize], m: usize) -> Result<usize, FlcError> {
    let mut address = 0usize;
    let mut weight = 1usize;
    for (input, &idx) in indices.iter().enumerate() {
        if idx >= m {
            return Err(FlcError::IndexOutOfRange {
                input,
                index: idx,
                m,
            });
        }
        address += idx * weight;
        weight *= m;
    }
    Ok(address)
}

/// Firing strength of one rule from its antecedent degrees.
pub fn antecedent_weight(alphas: &[u32], method: AndMethod, alpha_bits: u8) -> u32 {
    let Some((&first, rest)) = alphas.split_first() else {
        return 0;
    };
    match method {
        AndMethod::Min => rest.iter().fold(first, |w, &a| w.min(a)),
        AndMethod::Prod => {
            rest.iter()
                .fold(u64::from(first), |w, &a| (w * u64::from(a)) >> alpha_bits) as u32
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Firing {
    pub address: usize,
    pub weight: u32,
    pub singleton: u32,
}

/// Per-input active pairs and the `2^n` rule firings they enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveRuleSet {
    pub pairs: Vec<ActivePair>,
    pub firings: Vec<Firing>,
}

impl ActiveRuleSet {
    pub fn build(spec: &FlcSpec, inputs: &[FixedWord]) -> Result<Self, FlcError> {
        check_inputs(spec, inputs)?;
        let n = spec.n_inputs();
        let m = spec.mfs_per_input();
        let pairs = spec
            .partitions
            .iter()
            .zip(inputs)
            .map(|(p, x)| active_pair(p, x.value(), spec.alpha_bits))
            .collect::<Result<Vec<_>, _>>()?;

        let mut firings = Vec::with_capacity(1 << n);
        let mut alphas = vec![0u32; n];
        let mut indices = vec![0usize; n];
        // bit k of `combo` picks the right-hand set of input k, the same
        // order the address generator walks the active rules
        for combo in 0..(1usize << n) {
            for (k, pair) in pairs.iter().enumerate() {
                let right = combo >> k & 1 == 1;
                alphas[k] = pair.alpha(right);
                indices[k] = pair.index(right);
            }
            let address = rule_address(&indices, m)?;
            firings.push(Firing {
                address,
                weight: antecedent_weight(&alphas, spec.and_method, spec.alpha_bits),
                singleton: spec.singletons[address],
            });
        }
        Ok(Self { pairs, firings })
    }
}

fn check_inputs(spec: &FlcSpec, inputs: &[FixedWord]) -> Result<(), FlcError> {
    if inputs.len() != spec.n_inputs() {
        return Err(FlcError::Arity {
            expected: spec.n_inputs(),
            found: inputs.len(),
        });
    }
    let top = max_code(spec.in_bits);
    if let Some((input, x)) = inputs.iter().enumerate().find(|(_, x)| x.value() > top) {
        return Err(FlcError::InputRange {
            input,
            value: x.value(),
        });
    }
    let m = spec.mfs_per_input();
    if let Some(input) = spec.partitions.iter().position(|p| p.len() != m) {
        return Err(FlcError::Partition { input });
    }
    if spec.singletons.len() != spec.rule_count() {
        return Err(FlcError::RuleTable {
            found: spec.singletons.len(),
            expected: spec.rule_count(),
        });
    }
    Ok(())
}

/// Numerator and denominator of the weighted average, before division.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Accumulator {
    pub num: u64,
    pub den: u64,
}

impl Accumulator {
    fn add(&mut self, weight: u32, singleton: u32) {
        self.num += u64::from(weight) * u64::from(singleton);
        self.den += u64::from(weight);
    }

    fn finish(self, spec: &FlcSpec) -> Result<FixedWord, FlcError> {
        if self.den == 0 {
            return Err(FlcError::DenominatorZero);
        }
        let q = FixedWord::new((self.num / self.den) as u32, spec.cons_bits)
            .expect("a weighted average stays inside the consequent range");
        Ok(rescale(q, spec.out_bits)?)
    }
}

/// Accumulates only the `2^n` active rules.
pub fn accumulate(spec: &FlcSpec, inputs: &[FixedWord]) -> Result<Accumulator, FlcError> {
    let rules = ActiveRuleSet::build(spec, inputs)?;
    let mut acc = Accumulator { num: 0, den: 0 };
    for f in &rules.firings {
        acc.add(f.weight, f.singleton);
    }
    Ok(acc)
}

/// Accumulates every rule of the table from raw memberships.
pub fn accumulate_full(spec: &FlcSpec, inputs: &[FixedWord]) -> Result<Accumulator, FlcError> {
    check_inputs(spec, inputs)?;
    let n = spec.n_inputs();
    let m = spec.mfs_per_input();
    let degrees: Vec<Vec<u32>> = spec
        .partitions
        .iter()
        .zip(inputs)
        .map(|(p, x)| {
            p.mfs
                .iter()
                .map(|mf| mf.degree(x.value(), spec.alpha_bits))
                .collect()
        })
        .collect();

    let mut acc = Accumulator { num: 0, den: 0 };
    let mut alphas = vec![0u32; n];
    for (address, &singleton) in spec.singletons.iter().enumerate() {
        let mut rest = address;
        for (k, alpha) in alphas.iter_mut().enumerate() {
            *alpha = degrees[k][rest % m];
            rest /= m;
        }
        acc.add(
            antecedent_weight(&alphas, spec.and_method, spec.alpha_bits),
            singleton,
        );
    }
    Ok(acc)
}

/// Weighted-average output over the active rules.
pub fn infer(spec: &FlcSpec, inputs: &[FixedWord]) -> Result<FixedWord, FlcError> {
    accumulate(spec, inputs)?.finish(spec)
}

/// Same contract as [`infer`] but sweeps all `m^n` rules.
pub fn infer_full_rulebase(spec: &FlcSpec, inputs: &[FixedWord]) -> Result<FixedWord, FlcError> {
    accumulate_full(spec, inputs)?.finish(spec)
}

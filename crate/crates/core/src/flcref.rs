//! Floating-point reference for the fuzzy core, used to measure what the
//! fixed-point datapath loses to truncation.

use thiserror::Error;

use crate::fixedq::max_code;
use crate::flc::{antecedent_weight, AndMethod, FlcSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefError {
    #[error("expected {expected} inputs, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("all rule weights are zero")]
    ZeroDenominator,
}

/// A fuzzy core with every breakpoint and singleton in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFlcSpec {
    pub partitions: Vec<Vec<[f64; 4]>>,
    pub singletons: Vec<f64>,
    pub and_method: AndMethod,
}

#[inline]
fn scale(bits: u8) -> f64 {
    (1u64 << bits) as f64
}

/// Input code as a fraction of `2^in_bits`.
pub fn lift_input(code: u32, in_bits: u8) -> f64 {
    f64::from(code) / scale(in_bits)
}

/// Degree code as a fraction of `2^alpha_bits`.
pub fn lift_degree(code: u32, alpha_bits: u8) -> f64 {
    f64::from(code) / scale(alpha_bits)
}

/// Output code as a fraction of `2^out_bits`. With the left-shift output
/// mapping this equals the consequent code over `2^cons_bits`.
pub fn lift_output(code: u32, out_bits: u8) -> f64 {
    f64::from(code) / scale(out_bits)
}

pub fn lift(spec: &FlcSpec) -> RealFlcSpec {
    let in_scale = scale(spec.in_bits);
    let cons_scale = scale(spec.cons_bits);
    RealFlcSpec {
        partitions: spec
            .partitions
            .iter()
            .map(|p| {
                p.mfs
                    .iter()
                    .map(|mf| [mf.a, mf.b, mf.c, mf.d].map(|v| f64::from(v) / in_scale))
                    .collect()
            })
            .collect(),
        singletons: spec
            .singletons
            .iter()
            .map(|&s| f64::from(s) / cons_scale)
            .collect(),
        and_method: spec.and_method,
    }
}

pub fn real_membership([a, b, c, d]: [f64; 4], x: f64) -> f64 {
    if x < a || x > d {
        0.0
    } else if b <= x && x <= c {
        1.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

/// Weighted average over every rule, in `f64`.
pub fn infer_real(spec: &RealFlcSpec, x: &[f64]) -> Result<f64, RefError> {
    let n = spec.partitions.len();
    if x.len() != n {
        return Err(RefError::Arity {
            expected: n,
            found: x.len(),
        });
    }
    let m = spec.partitions.first().map_or(0, Vec::len);
    let degrees: Vec<Vec<f64>> = spec
        .partitions
        .iter()
        .zip(x)
        .map(|(p, &xk)| p.iter().map(|&mf| real_membership(mf, xk)).collect())
        .collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for (address, &y) in spec.singletons.iter().enumerate() {
        let mut rest = address;
        let mut w = match spec.and_method {
            AndMethod::Min => f64::INFINITY,
            AndMethod::Prod => 1.0,
        };
        for deg in &degrees {
            let mu = deg[rest % m];
            rest /= m;
            w = match spec.and_method {
                AndMethod::Min => w.min(mu),
                AndMethod::Prod => w * mu,
            };
        }
        num += w * y;
        den += w;
    }
    if den > 0.0 {
        Ok(num / den)
    } else {
        Err(RefError::ZeroDenominator)
    }
}

/// Smallest "best set" degree over an input universe: for every code take
/// the largest membership, then the minimum of that over all codes.
pub fn coverage_floor(spec: &FlcSpec, input: usize) -> u32 {
    let part = &spec.partitions[input];
    (0..=max_code(spec.in_bits))
        .map(|x| {
            part.mfs
                .iter()
                .map(|mf| mf.degree(x, spec.alpha_bits))
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(0)
}

/// Worst-case distance between the lifted fixed output and [`infer_real`]
/// for any input of a valid spec.
///
/// Every rule weight in codes equals `lambda * w_real + e` with
/// `-E < e <= 0`: `E = 1` for MIN (one edge truncation survives the
/// minimum) and `E = 2n - 1` for PROD (n edge truncations plus n - 1 fold
/// truncations). A common scale `lambda` cancels in the ratio, so the
/// weighted average moves by at most `sum |e| * span / den`, over at most
/// `2^n` rules with a nonzero weight. The fixed denominator is bounded
/// below by the weight of the best rule, which is at least the antecedent
/// of the per-input coverage floors. Truncating division adds one
/// consequent LSB.
pub fn quantization_bound(spec: &FlcSpec) -> f64 {
    let n = spec.n_inputs();
    let floors: Vec<u32> = (0..n).map(|k| coverage_floor(spec, k)).collect();
    let den_min = antecedent_weight(&floors, spec.and_method, spec.alpha_bits);
    if den_min == 0 {
        return 1.0;
    }
    let per_rule = match spec.and_method {
        AndMethod::Min => 1.0,
        AndMethod::Prod => (2 * n - 1) as f64,
    };
    let cons_scale = scale(spec.cons_bits);
    let (lo, hi) = spec
        .singletons
        .iter()
        .fold((u32::MAX, 0), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let span = f64::from(hi.saturating_sub(lo)) / cons_scale;
    let rules = (1u64 << n) as f64;
    let bound = rules * per_rule * span / f64::from(den_min) + 1.0 / cons_scale + 1e-9;
    bound.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedq::FixedWord;
    use crate::flc::{infer, FlcSpec, InputPartition, MembershipFunction, Schedule};

    #[test]
    fn lift_examples() {
        assert_eq!(lift_degree(255, 8), 0.99609375);
        assert_eq!(lift_input(0, 12), 0.0);
        assert_eq!(lift_input(2048, 12), 0.5);
        let spec = FlcSpec::table_i();
        let real = lift(&spec);
        assert_eq!(real.singletons[2400], 255.0 / 256.0);
        assert_eq!(real.partitions[0][0][0], 0.0);
    }

    fn two_rule_real(y0: f64, y1: f64) -> RealFlcSpec {
        RealFlcSpec {
            partitions: vec![vec![[0.0, 0.0, 0.0, 1.0], [0.0, 1.0, 1.0, 1.0]]],
            singletons: vec![y0, y1],
            and_method: AndMethod::Min,
        }
    }

    #[test]
    fn hand_weighted_average() {
        // x = 0.75 gives weights (0.25, 0.75)
        let spec = two_rule_real(0.4, 0.8);
        let y = infer_real(&spec, &[0.75]).unwrap();
        assert!((y - 0.7).abs() < 1e-12);
        assert_eq!(infer_real(&spec, &[0.0]).unwrap(), 0.4);
        assert_eq!(infer_real(&spec, &[1.0]).unwrap(), 0.8);
    }

    #[test]
    fn constant_table_and_scaling() {
        let spec = two_rule_real(0.3, 0.3);
        for i in 0..=20 {
            let x = f64::from(i) / 20.0;
            assert!((infer_real(&spec, &[x]).unwrap() - 0.3).abs() < 1e-12);
        }
        let base = two_rule_real(0.2, 0.6);
        let doubled = two_rule_real(0.4, 1.2);
        for i in 0..=20 {
            let x = f64::from(i) / 20.0;
            let a = infer_real(&base, &[x]).unwrap();
            let b = infer_real(&doubled, &[x]).unwrap();
            assert!((2.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        let spec = two_rule_real(0.1, 0.2);
        assert_eq!(
            infer_real(&spec, &[0.1, 0.2]),
            Err(RefError::Arity {
                expected: 1,
                found: 2
            })
        );
        let empty = RealFlcSpec {
            partitions: vec![vec![[0.0, 0.1, 0.1, 0.2], [0.5, 0.6, 0.6, 0.7]]],
            singletons: vec![0.1, 0.2],
            and_method: AndMethod::Min,
        };
        assert_eq!(infer_real(&empty, &[0.4]), Err(RefError::ZeroDenominator));
    }

    #[test]
    fn bound_for_single_input_min() {
        let spec = FlcSpec {
            in_bits: 8,
            out_bits: 8,
            alpha_bits: 8,
            cons_bits: 8,
            partitions: vec![InputPartition::new(vec![
                MembershipFunction::trapezoid(0, 0, 0, 255),
                MembershipFunction::trapezoid(0, 255, 255, 255),
            ])],
            singletons: vec![0, 255],
            and_method: AndMethod::Min,
            mode: Schedule::Standard,
            stages: 1,
            clock_ns: 1.0,
        };
        // the edges cross between codes 127 and 128 where the larger degree is 128
        assert_eq!(coverage_floor(&spec, 0), 128);
        let expected = 2.0 * (255.0 / 256.0) / 128.0 + 1.0 / 256.0 + 1e-9;
        assert!((quantization_bound(&spec) - expected).abs() < 1e-15);

        let real = lift(&spec);
        for x in 0..=255u32 {
            let fixed = infer(&spec, &[FixedWord::new(x, 8).unwrap()]).unwrap();
            let diff = (lift_output(fixed.value(), 8)
                - infer_real(&real, &[lift_input(x, 8)]).unwrap())
            .abs();
            assert!(diff <= quantization_bound(&spec), "x = {x}: {diff}");
        }
    }

    #[test]
    fn bound_for_table_i_shape() {
        let spec = FlcSpec::table_i();
        // uniform triangles cross at half height: floor(255 * 341 / 683) = 127
        for k in 0..4 {
            assert_eq!(coverage_floor(&spec, k), 127);
        }
        let expected = 16.0 * (255.0 / 256.0) / 127.0 + 1.0 / 256.0 + 1e-9;
        assert!((quantization_bound(&spec) - expected).abs() < 1e-15);
    }
}

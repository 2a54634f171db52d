//! Random valid specifications for property tests and oracle corpora.

use rand::Rng;

use super::spec::{
    validate_spec, AndMethod, FlcSpec, InputPartition, MembershipFunction, Schedule,
};
use crate::fixedq::max_code;

/// Shape limits for [`random_spec`].
#[derive(Debug, Clone, Copy)]
pub struct SpecShape {
    pub n_inputs: usize,
    pub mfs: usize,
    pub in_bits: u8,
    pub alpha_bits: u8,
    pub cons_bits: u8,
    pub out_bits: u8,
    pub and_method: AndMethod,
}

/// A random ordered partition of `0 ..= 2^bits - 1`, or `None` when the
/// draw does not survive validation (usually a truncation gap).
pub fn random_partition<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    bits: u8,
    alpha_bits: u8,
) -> Option<InputPartition> {
    let top = max_code(bits);
    // four sorted breakpoints per gap: c_i <= a_{i+1} <= d_i <= b_{i+1}
    let mut cuts: Vec<u32> = (0..4 * (m - 1))
        .map(|_| rng.random_range(0..=top))
        .collect();
    cuts.sort_unstable();
    let mut mfs = vec![MembershipFunction::trapezoid(0, 0, 0, 0); m];
    mfs[0].a = 0;
    mfs[0].b = 0;
    mfs[m - 1].c = top;
    mfs[m - 1].d = top;
    for gap in 0..m - 1 {
        let [c, a, d, b] = [
            cuts[4 * gap],
            cuts[4 * gap + 1],
            cuts[4 * gap + 2],
            cuts[4 * gap + 3],
        ];
        mfs[gap].c = c;
        mfs[gap].d = d;
        mfs[gap + 1].a = a;
        mfs[gap + 1].b = b;
    }
    // collapse some plateaus into triangles
    for mf in mfs.iter_mut().take(m - 1).skip(1) {
        if rng.random_bool(0.5) {
            let mid = mf.b + (mf.c - mf.b) / 2;
            mf.b = mid;
            mf.c = mid;
        }
    }
    let part = InputPartition::new(mfs);
    let probe = FlcSpec {
        in_bits: bits,
        out_bits: 8,
        alpha_bits,
        cons_bits: 8,
        partitions: vec![part],
        singletons: vec![0; m],
        and_method: AndMethod::Min,
        mode: Schedule::Standard,
        stages: 1,
        clock_ns: 1.0,
    };
    validate_spec(&probe)
        .is_ok()
        .then(|| probe.partitions.into_iter().next().unwrap())
}

/// Draws partitions until each one validates, then fills the rule table
/// with uniform random singletons.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, shape: SpecShape) -> FlcSpec {
    let partitions = (0..shape.n_inputs)
        .map(|_| loop {
            if let Some(p) = random_partition(rng, shape.mfs, shape.in_bits, shape.alpha_bits) {
                break p;
            }
        })
        .collect();
    let cons_top = max_code(shape.cons_bits);
    let singletons = (0..shape.mfs.pow(shape.n_inputs as u32))
        .map(|_| rng.random_range(0..=cons_top))
        .collect();
    FlcSpec {
        in_bits: shape.in_bits,
        out_bits: shape.out_bits,
        alpha_bits: shape.alpha_bits,
        cons_bits: shape.cons_bits,
        partitions,
        singletons,
        and_method: shape.and_method,
        mode: Schedule::Standard,
        stages: 1,
        clock_ns: 10.0,
    }
}

/// A random shape with `n <= max_inputs`, `2 <= m <= max_mfs` and small
/// widths so truncation effects are frequent.
pub fn random_shape<R: Rng + ?Sized>(rng: &mut R, max_inputs: usize, max_mfs: usize) -> SpecShape {
    let cons_bits = rng.random_range(4..=10);
    SpecShape {
        n_inputs: rng.random_range(1..=max_inputs),
        mfs: rng.random_range(2..=max_mfs),
        in_bits: rng.random_range(6..=12),
        alpha_bits: rng.random_range(4..=10),
        cons_bits,
        out_bits: rng.random_range(cons_bits..=cons_bits + 4),
        and_method: if rng.random_bool(0.5) {
            AndMethod::Min
        } else {
            AndMethod::Prod
        },
    }
}

/// Baseline geometry (4 inputs, 7 uniform triangles, 12/8/8/12 bits) with a
/// random rule table.
pub fn table_i_shaped<R: Rng + ?Sized>(rng: &mut R) -> FlcSpec {
    let mut spec = FlcSpec::table_i();
    for s in &mut spec.singletons {
        *s = rng.random_range(0..=255);
    }
    spec
}

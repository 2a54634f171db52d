use serde::{Deserialize, Serialize};
use std::fmt;

use crate::fixedq::max_code;

/// Widest input universe the validator will sweep exhaustively.
pub const MAX_IN_BITS: u8 = 16;
pub const MAX_ALPHA_BITS: u8 = 16;
pub const MAX_CONS_BITS: u8 = 16;
pub const MAX_INPUTS: usize = 16;

/// Trapezoid over input codes: rising edge `a -> b`, plateau `b ..= c`,
/// falling edge `c -> d`. Triangular when `b == c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[u32; 4]", into = "[u32; 4]")]
pub struct MembershipFunction {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl From<[u32; 4]> for MembershipFunction {
    fn from([a, b, c, d]: [u32; 4]) -> Self {
        Self { a, b, c, d }
    }
}

impl From<MembershipFunction> for [u32; 4] {
    fn from(mf: MembershipFunction) -> Self {
        [mf.a, mf.b, mf.c, mf.d]
    }
}

impl MembershipFunction {
    pub fn trapezoid(a: u32, b: u32, c: u32, d: u32) -> Self {
        Self { a, b, c, d }
    }

    pub fn triangle(a: u32, peak: u32, d: u32) -> Self {
        Self::trapezoid(a, peak, peak, d)
    }

    pub fn is_triangular(&self) -> bool {
        self.b == self.c
    }

    fn is_ordered(&self) -> bool {
        self.a <= self.b && self.b <= self.c && self.c <= self.d
    }

    /// Degree of truth at input code `x`, in `0 ..= 2^alpha_bits - 1`.
    /// Edges use truncating integer division.
    #[inline]
    pub fn degree(&self, x: u32, alpha_bits: u8) -> u32 {
        let top = u64::from(max_code(alpha_bits));
        if x < self.a || x > self.d {
            0
        } else if self.b <= x && x <= self.c {
            top as u32
        } else if x < self.b {
            (top * u64::from(x - self.a) / u64::from(self.b - self.a)) as u32
        } else {
            (top * u64::from(self.d - x) / u64::from(self.d - self.c)) as u32
        }
    }
}

/// The ordered fuzzy sets covering one input universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputPartition {
    pub mfs: Vec<MembershipFunction>,
}

impl InputPartition {
    pub fn new(mfs: Vec<MembershipFunction>) -> Self {
        Self { mfs }
    }

    /// `m` evenly spaced triangles over `0 ..= 2^bits - 1`, each foot at its
    /// neighbours' peaks. The outer sets are shoulders with a vertical edge
    /// at the universe boundary.
    pub fn uniform_triangular(m: usize, bits: u8) -> Self {
        assert!(m >= 2, "a partition needs at least two fuzzy sets");
        let top = f64::from(max_code(bits));
        let peaks: Vec<u32> = (0..m)
            .map(|i| (i as f64 * top / (m - 1) as f64).round() as u32)
            .collect();
        let mfs = (0..m)
            .map(|i| {
                let a = if i == 0 { peaks[0] } else { peaks[i - 1] };
                let d = if i == m - 1 {
                    peaks[m - 1]
                } else {
                    peaks[i + 1]
                };
                MembershipFunction::triangle(a, peaks[i], d)
            })
            .collect();
        Self { mfs }
    }

    pub fn len(&self) -> usize {
        self.mfs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mfs.is_empty()
    }

    /// Peak (left plateau edge) positions in order.
    pub fn peaks(&self) -> impl Iterator<Item = u32> + '_ {
        self.mfs.iter().map(|mf| mf.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AndMethod {
    /// Goedel minimum t-norm.
    Min,
    /// Product t-norm, folded with a right shift by the degree width.
    Prod,
}

/// Rule-processing schedule of the core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// One active rule per clock.
    Standard,
    /// Two active rules per clock.
    OddEven,
}

/// Full parameterization of the fuzzy core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlcSpec {
    pub in_bits: u8,
    pub out_bits: u8,
    pub alpha_bits: u8,
    pub cons_bits: u8,
    pub partitions: Vec<InputPartition>,
    /// Consequent singletons in rule-address order (input 0 least significant).
    pub singletons: Vec<u32>,
    pub and_method: AndMethod,
    pub mode: Schedule,
    pub stages: u32,
    pub clock_ns: f64,
}

impl FlcSpec {
    pub fn n_inputs(&self) -> usize {
        self.partitions.len()
    }

    /// Sets per input. Validation requires every input to agree.
    pub fn mfs_per_input(&self) -> usize {
        self.partitions.first().map_or(0, InputPartition::len)
    }

    pub fn rule_count(&self) -> usize {
        self.mfs_per_input().pow(self.n_inputs() as u32)
    }

    /// Left shift taking a consequent code to the output width.
    pub fn output_shift(&self) -> u8 {
        self.out_bits.saturating_sub(self.cons_bits)
    }

    /// Four 12-bit inputs, 7 uniform triangles each, 8-bit degrees and
    /// singletons, MIN antecedent, 11 stages at 10 ns. Singletons follow
    /// the normalized digit sum of the rule address.
    pub fn table_i() -> Self {
        let n = 4;
        let m = 7;
        let partitions = vec![InputPartition::uniform_triangular(m, 12); n];
        let top = f64::from(max_code(8));
        let span = (n * (m - 1)) as f64;
        let singletons = (0..m.pow(n as u32))
            .map(|addr| {
                let mut rest = addr;
                let mut sum = 0;
                for _ in 0..n {
                    sum += rest % m;
                    rest /= m;
                }
                (top * sum as f64 / span).round() as u32
            })
            .collect();
        Self {
            in_bits: 12,
            out_bits: 12,
            alpha_bits: 8,
            cons_bits: 8,
            partitions,
            singletons,
            and_method: AndMethod::Min,
            mode: Schedule::Standard,
            stages: 11,
            clock_ns: 10.0,
        }
    }
}

/// One structural problem found by [`validate_spec`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Width {
        field: &'static str,
        bits: u8,
    },
    InputCount(usize),
    MfCount {
        input: usize,
        found: usize,
        expected: usize,
    },
    BreakpointOrder {
        input: usize,
        mf: usize,
    },
    OutOfUniverse {
        input: usize,
        mf: usize,
    },
    PeakOrder {
        input: usize,
        mf: usize,
    },
    Overlap {
        input: usize,
        mf: usize,
    },
    Gap {
        input: usize,
        mf: usize,
    },
    UncoveredEnd {
        input: usize,
    },
    UncoveredCode {
        input: usize,
        code: u32,
    },
    NonAdjacentActive {
        input: usize,
        code: u32,
    },
    SingletonCount {
        found: usize,
        expected: usize,
    },
    SingletonRange {
        address: usize,
        value: u32,
    },
    Timing,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Width { field, bits } => write!(f, "{field} = {bits} is out of range"),
            Violation::InputCount(n) => {
                write!(f, "input count {n} outside 1..={MAX_INPUTS}")
            }
            Violation::MfCount {
                input,
                found,
                expected,
            } => write!(
                f,
                "input {input}: {found} membership functions, expected {expected} (at least 2)"
            ),
            Violation::BreakpointOrder { input, mf } => {
                write!(
                    f,
                    "input {input}, mf {mf}: breakpoints not ordered a <= b <= c <= d"
                )
            }
            Violation::OutOfUniverse { input, mf } => {
                write!(
                    f,
                    "input {input}, mf {mf}: breakpoint beyond the input universe"
                )
            }
            Violation::PeakOrder { input, mf } => {
                write!(f, "input {input}, mf {mf}: peak precedes the previous peak")
            }
            Violation::Overlap { input, mf } => write!(
                f,
                "input {input}, mf {mf}: overlaps mf {} (overlap degree above 2)",
                mf + 2
            ),
            Violation::Gap { input, mf } => {
                write!(f, "input {input}: gap between mf {mf} and mf {}", mf + 1)
            }
            Violation::UncoveredEnd { input } => write!(
                f,
                "input {input}: partition does not start at code 0 or end at full scale"
            ),
            Violation::UncoveredCode { input, code } => {
                write!(
                    f,
                    "input {input}: code {code} has zero membership everywhere"
                )
            }
            Violation::NonAdjacentActive { input, code } => write!(
                f,
                "input {input}: code {code} activates sets other than one adjacent pair"
            ),
            Violation::SingletonCount { found, expected } => {
                write!(f, "{found} singletons, expected {expected}")
            }
            Violation::SingletonRange { address, value } => {
                write!(
                    f,
                    "singleton {address} = {value} exceeds the consequent width"
                )
            }
            Violation::Timing => {
                write!(f, "pipeline needs at least one stage and a positive clock")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural constraint the engine relies on. Besides the
/// breakpoint inequalities, each input universe is swept code by code so
/// that truncated edges can never leave a code uncovered or activate a
/// non-adjacent pair.
pub fn validate_spec(spec: &FlcSpec) -> ValidationReport {
    let mut out = Vec::new();
    let widths = [
        ("in_bits", spec.in_bits, 1, MAX_IN_BITS),
        ("alpha_bits", spec.alpha_bits, 1, MAX_ALPHA_BITS),
        ("cons_bits", spec.cons_bits, 1, MAX_CONS_BITS),
        ("out_bits", spec.out_bits, spec.cons_bits.max(1), 32),
    ];
    for (field, bits, lo, hi) in widths {
        if bits < lo || bits > hi {
            out.push(Violation::Width { field, bits });
        }
    }
    if !(spec.stages >= 1 && spec.clock_ns.is_finite() && spec.clock_ns > 0.0) {
        out.push(Violation::Timing);
    }
    let n = spec.n_inputs();
    if n == 0 || n > MAX_INPUTS {
        out.push(Violation::InputCount(n));
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }

    let m = spec.mfs_per_input();
    let top = max_code(spec.in_bits);
    for (input, part) in spec.partitions.iter().enumerate() {
        if part.len() != m || m < 2 {
            out.push(Violation::MfCount {
                input,
                found: part.len(),
                expected: m,
            });
            continue;
        }
        let before = out.len();
        check_partition(input, part, top, &mut out);
        if out.len() == before {
            sweep_partition(input, part, top, spec.alpha_bits, &mut out);
        }
    }

    let expected = m.checked_pow(n as u32).unwrap_or(usize::MAX);
    if spec.singletons.len() != expected {
        out.push(Violation::SingletonCount {
            found: spec.singletons.len(),
            expected,
        });
    }
    let cons_top = max_code(spec.cons_bits);
    if let Some((address, &value)) = spec
        .singletons
        .iter()
        .enumerate()
        .find(|(_, &v)| v > cons_top)
    {
        out.push(Violation::SingletonRange { address, value });
    }
    ValidationReport { violations: out }
}

fn check_partition(input: usize, part: &InputPartition, top: u32, out: &mut Vec<Violation>) {
    let mfs = &part.mfs;
    let m = mfs.len();
    for (i, mf) in mfs.iter().enumerate() {
        if !mf.is_ordered() {
            out.push(Violation::BreakpointOrder { input, mf: i });
        }
        if mf.d > top {
            out.push(Violation::OutOfUniverse { input, mf: i });
        }
        if i + 1 < m && mfs[i + 1].b < mf.b {
            out.push(Violation::PeakOrder { input, mf: i + 1 });
        }
        if i + 2 < m && mf.d > mfs[i + 2].a {
            out.push(Violation::Overlap { input, mf: i });
        }
        if i + 1 < m && mfs[i + 1].a > mf.d {
            out.push(Violation::Gap { input, mf: i });
        }
    }
    if mfs[0].a != 0 || mfs[m - 1].d != top {
        out.push(Violation::UncoveredEnd { input });
    }
}

fn sweep_partition(
    input: usize,
    part: &InputPartition,
    top: u32,
    alpha_bits: u8,
    out: &mut Vec<Violation>,
) {
    let mut uncovered = None;
    let mut spread = None;
    for x in 0..=top {
        let mut first = None;
        let mut last = 0;
        for (j, mf) in part.mfs.iter().enumerate() {
            if mf.degree(x, alpha_bits) > 0 {
                first.get_or_insert(j);
                last = j;
            }
        }
        match first {
            None => {
                uncovered.get_or_insert(x);
            }
            Some(f) if last > f + 1 => {
                spread.get_or_insert(x);
            }
            Some(_) => {}
        }
        if uncovered.is_some() && spread.is_some() {
            break;
        }
    }
    if let Some(code) = uncovered {
        out.push(Violation::UncoveredCode { input, code });
    }
    if let Some(code) = spread {
        out.push(Violation::NonAdjacentActive { input, code });
    }
}

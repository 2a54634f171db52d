use serde::{Deserialize, Serialize};

use crate::fixedq::{dequantize, max_code, DomainMap, FixedWord};
use crate::ga::{Fitness, Genome};

use super::ProblemError;

/// Two-variable minimization benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Sphere,
    Rosenbrock,
    Rastrigin,
    Step,
}

impl Benchmark {
    pub const ALL: [Benchmark; 4] = [
        Benchmark::Sphere,
        Benchmark::Rosenbrock,
        Benchmark::Rastrigin,
        Benchmark::Step,
    ];

    /// Symmetric search interval per coordinate.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Benchmark::Rosenbrock => (-2.048, 2.048),
            _ => (-5.12, 5.12),
        }
    }

    pub fn eval(self, x1: f64, x2: f64) -> f64 {
        match self {
            Benchmark::Sphere => x1 * x1 + x2 * x2,
            Benchmark::Rosenbrock => 100.0 * (x2 - x1 * x1).powi(2) + (1.0 - x1).powi(2),
            Benchmark::Rastrigin => [x1, x2]
                .iter()
                .map(|&x| x * x - 10.0 * (2.0 * std::f64::consts::PI * x).cos() + 10.0)
                .sum(),
            Benchmark::Step => (x1 + 0.5).floor().powi(2) + (x2 + 0.5).floor().powi(2),
        }
    }
}

impl std::str::FromStr for Benchmark {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" => Ok(Benchmark::Sphere),
            "rosenbrock" => Ok(Benchmark::Rosenbrock),
            "rastrigin" => Ok(Benchmark::Rastrigin),
            "step" => Ok(Benchmark::Step),
            other => Err(format!("unknown benchmark function {other:?}")),
        }
    }
}

/// Largest genome width whose grid is swept for the score scale.
pub const MAX_BENCHMARK_BITS: u8 = 24;

/// Scores a genome split into two equal halves (high half is `x1`), each
/// mapped affinely onto the function's domain. The score is
/// `(f_max - f) / f_max` scaled to the full score width, where `f_max` is
/// the largest value over the whole quantized grid.
#[derive(Debug, Clone)]
pub struct BenchmarkFitness {
    pub func: Benchmark,
    half_bits: u8,
    map: DomainMap,
    f_max: f64,
    score_top: u32,
}

impl BenchmarkFitness {
    pub fn new(func: Benchmark, genom_lngt: u8, score_sz: u8) -> Result<Self, ProblemError> {
        if !genom_lngt.is_multiple_of(2) || !(2..=MAX_BENCHMARK_BITS).contains(&genom_lngt) {
            return Err(ProblemError::GenomeWidth {
                bits: genom_lngt,
                reason: format!("benchmarks need an even width in 2..={MAX_BENCHMARK_BITS}"),
            });
        }
        let half_bits = genom_lngt / 2;
        let (lo, hi) = func.domain();
        let map = DomainMap::new(lo, hi, half_bits).expect("benchmark domains are non-empty");
        let mut this = Self {
            func,
            half_bits,
            map,
            f_max: 0.0,
            score_top: max_code(score_sz),
        };
        this.f_max = (0..1u64 << genom_lngt)
            .map(|g| this.value(g))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(this)
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }

    /// Decoded coordinates of a genome.
    pub fn point(&self, genome: Genome) -> (f64, f64) {
        let half = u64::from(max_code(self.half_bits));
        let code = |v: u64| FixedWord::new(v as u32, self.half_bits).expect("masked to half width");
        let x1 = dequantize(code(genome >> self.half_bits & half), &self.map);
        let x2 = dequantize(code(genome & half), &self.map);
        (x1, x2)
    }

    pub fn value(&self, genome: Genome) -> f64 {
        let (x1, x2) = self.point(genome);
        self.func.eval(x1, x2)
    }
}

impl Fitness for BenchmarkFitness {
    fn score(&self, genome: Genome) -> u32 {
        if self.f_max <= 0.0 {
            return self.score_top;
        }
        let frac = ((self.f_max - self.value(genome)) / self.f_max).clamp(0.0, 1.0);
        (frac * f64::from(self.score_top)).floor() as u32
    }
}

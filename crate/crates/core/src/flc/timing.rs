use serde::Serialize;

use super::spec::{FlcSpec, Schedule};

/// Latency and throughput of the pipelined core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingReport {
    pub latency_ns: f64,
    pub cycles_per_sample: u64,
    pub sample_rate_hz: f64,
}

/// Clock cycles spent per input sample: one active rule per clock in the
/// standard schedule, two in the odd-even one.
pub fn cycles_per_sample(n_inputs: usize, mode: Schedule) -> u64 {
    let rules = 1u64 << n_inputs;
    match mode {
        Schedule::Standard => rules,
        Schedule::OddEven => (rules / 2).max(1),
    }
}

pub fn timing_for(n_inputs: usize, mode: Schedule, stages: u32, clock_ns: f64) -> TimingReport {
    let cycles = cycles_per_sample(n_inputs, mode);
    TimingReport {
        latency_ns: f64::from(stages) * clock_ns,
        cycles_per_sample: cycles,
        sample_rate_hz: 1e9 / (clock_ns * cycles as f64),
    }
}

pub fn estimate_timing(spec: &FlcSpec) -> TimingReport {
    timing_for(spec.n_inputs(), spec.mode, spec.stages, spec.clock_ns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn baseline_core() {
        let t = timing_for(4, Schedule::Standard, 11, 10.0);
        assert_eq!(t.latency_ns, 110.0);
        assert_eq!(t.cycles_per_sample, 16);
        assert_eq!(t.sample_rate_hz, 6.25e6);
        // divided DCM clock: 75 MHz / 12, and x16 back to the core clock
        assert!(close(75e6 / 12.0, t.sample_rate_hz));
        assert!(close(t.sample_rate_hz * 16.0, 100e6));
    }

    #[test]
    fn odd_even_core() {
        let t = timing_for(4, Schedule::OddEven, 13, 5.0);
        assert_eq!(t.latency_ns, 65.0);
        assert_eq!(t.cycles_per_sample, 8);
        assert!(close(t.sample_rate_hz, 25e6));
    }

    #[test]
    fn tracker_soc_core() {
        let t = timing_for(2, Schedule::Standard, 9, 14.085);
        assert!(close(t.latency_ns, 126.765));
        assert_eq!(t.cycles_per_sample, 4);
        assert!((t.sample_rate_hz - 17.75e6).abs() < 0.01e6);
    }

    #[test]
    fn odd_even_halves_cycles() {
        for n in 1..=16 {
            assert_eq!(
                cycles_per_sample(n, Schedule::Standard),
                2 * cycles_per_sample(n, Schedule::OddEven)
            );
        }
    }

    #[test]
    fn table_i_spec_timing() {
        let t = estimate_timing(&FlcSpec::table_i());
        assert_eq!((t.latency_ns, t.cycles_per_sample), (110.0, 16));
    }
}

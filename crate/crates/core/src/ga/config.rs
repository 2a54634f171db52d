use serde::{Deserialize, Serialize};

use super::GaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossMethod {
    SinglePoint,
    TwoPoint,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutMethod {
    /// Every bit flips independently at the mutation rate.
    BitFlip,
    /// One randomly chosen bit flips.
    SingleBit,
}

/// Switches operator methods from generation `from_gen` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSwitch {
    pub from_gen: u32,
    #[serde(default)]
    pub cross_method: Option<CrossMethod>,
    #[serde(default)]
    pub mut_method: Option<MutMethod>,
}

fn default_mut_res() -> u8 {
    8
}

fn default_seeds() -> [u16; 4] {
    [0xACE1, 0x1D87, 0x7A3B, 0xC0DE]
}

/// GA core parameters. `mr / 2^mut_res` is the mutation probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaConfig {
    pub genom_lngt: u8,
    pub score_sz: u8,
    pub pop_sz: usize,
    pub scaling_factor_res: u8,
    pub elite: usize,
    pub mr: u32,
    #[serde(default = "default_mut_res")]
    pub mut_res: u8,
    pub cross_method: CrossMethod,
    pub mut_method: MutMethod,
    pub max_gen: u32,
    #[serde(default)]
    pub fitness_limit: Option<u32>,
    #[serde(default = "default_seeds")]
    pub seeds: [u16; 4],
    #[serde(default)]
    pub schedule: Vec<MethodSwitch>,
}

impl GaConfig {
    /// 16-bit genomes and scores, 32 individuals, a 4-bit wheel, 2 elites,
    /// mutation rate 80/256, 60 generations, single-point crossover and
    /// per-bit mutation.
    pub fn table_ii() -> Self {
        Self {
            genom_lngt: 16,
            score_sz: 16,
            pop_sz: 32,
            scaling_factor_res: 4,
            elite: 2,
            mr: 80,
            mut_res: 8,
            cross_method: CrossMethod::SinglePoint,
            mut_method: MutMethod::BitFlip,
            max_gen: 60,
            fitness_limit: None,
            seeds: default_seeds(),
            schedule: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |what: String| Err(GaError::Config(what));
        if !(1..=64).contains(&self.genom_lngt) {
            return bad(format!("genom_lngt {} outside 1..=64", self.genom_lngt));
        }
        if !(1..=32).contains(&self.score_sz) {
            return bad(format!("score_sz {} outside 1..=32", self.score_sz));
        }
        if self.pop_sz < 2 || !self.pop_sz.is_multiple_of(2) {
            return bad(format!(
                "pop_sz {} must be even and at least 2",
                self.pop_sz
            ));
        }
        if self.elite >= self.pop_sz {
            return bad(format!(
                "elite {} must be below pop_sz {}",
                self.elite, self.pop_sz
            ));
        }
        if !(1..=16).contains(&self.scaling_factor_res) {
            return bad(format!(
                "scaling_factor_res {} outside 1..=16",
                self.scaling_factor_res
            ));
        }
        if !(1..=16).contains(&self.mut_res) {
            return bad(format!("mut_res {} outside 1..=16", self.mut_res));
        }
        if u64::from(self.mr) >= 1u64 << self.mut_res {
            return bad(format!("mr {} must be below 2^{}", self.mr, self.mut_res));
        }
        if self.seeds.contains(&0) {
            return Err(GaError::ZeroSeed);
        }
        Ok(())
    }

    /// Operator methods in force at generation `gen`: the last schedule
    /// entry with `from_gen <= gen` overrides the base methods.
    pub fn methods_at(&self, gen: u32) -> (CrossMethod, MutMethod) {
        let mut cross = self.cross_method;
        let mut mutation = self.mut_method;
        for switch in self.schedule.iter().filter(|s| s.from_gen <= gen) {
            if let Some(c) = switch.cross_method {
                cross = c;
            }
            if let Some(m) = switch.mut_method {
                mutation = m;
            }
        }
        (cross, mutation)
    }
}

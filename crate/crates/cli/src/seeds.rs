use fuzzychip::ga::expand_seed;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// LFSR seeds for one GA run, and where they came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedGroup {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub master: Option<u64>,
    pub lfsr: [u16; 4],
}

fn number(tok: &str) -> Result<u64, CliError> {
    let t = tok.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| CliError::Io(format!("bad seed {t:?}")))
}

/// Seed values: `a..b` ranges and single values separated by `;` or `,`.
pub fn parse_values(text: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for tok in text
        .split([';', ','])
        .map(str::trim)
        .filter(|t| !t.is_empty())
    {
        match tok.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (number(a)?, number(b)?);
                if a >= b {
                    return Err(CliError::Io(format!("empty seed range {tok:?}")));
                }
                out.extend(a..b);
            }
            None => out.push(number(tok)?),
        }
    }
    if out.is_empty() {
        return Err(CliError::Io("no seeds given".into()));
    }
    Ok(out)
}

/// GA seed groups separated by `;`. A group of four comma-separated values
/// gives the LFSR seeds directly; a single value or an `a..b` range gives
/// master seeds that are each expanded to four LFSR seeds.
pub fn parse_ga_seeds(text: &str) -> Result<Vec<SeedGroup>, CliError> {
    let mut out = Vec::new();
    for group in text.split(';').map(str::trim).filter(|g| !g.is_empty()) {
        let parts: Vec<&str> = group.split(',').map(str::trim).collect();
        if parts.len() == 4 && !group.contains("..") {
            let mut lfsr = [0u16; 4];
            for (slot, p) in lfsr.iter_mut().zip(&parts) {
                let v = number(p)?;
                *slot = u16::try_from(v).ok().filter(|&s| s != 0).ok_or_else(|| {
                    CliError::Invalid(format!("LFSR seed {v} must be in 1..=65535"))
                })?;
            }
            out.push(SeedGroup { master: None, lfsr });
        } else {
            for master in parse_values(group)? {
                out.push(SeedGroup {
                    master: Some(master),
                    lfsr: expand_seed(master),
                });
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Io("no seeds given".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_group() {
        let g = parse_ga_seeds("7,11,13,17").unwrap();
        assert_eq!(
            g,
            vec![SeedGroup {
                master: None,
                lfsr: [7, 11, 13, 17]
            }]
        );
        assert!(matches!(
            parse_ga_seeds("7,0,13,17"),
            Err(CliError::Invalid(_))
        ));
    }

    #[test]
    fn masters_and_ranges() {
        let g = parse_ga_seeds("0..3;9").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[3].master, Some(9));
        assert_eq!(g[0].lfsr, expand_seed(0));
        assert_eq!(parse_values("1,2;5..7").unwrap(), vec![1, 2, 5, 6]);
        assert_eq!(parse_values("0x10").unwrap(), vec![16]);
        assert!(parse_values("x").is_err());
        assert!(parse_values("4..4").is_err());
        assert!(parse_values("").is_err());
    }
}

//! Mini-language for numeric grids and state classes on the command line:
//! `1:4:101` is an inclusive linspace, `0.25,0.5,1,2` an explicit list,
//! `1.5,0.8; 2,0.5` a class of (nu, r) pairs.

use gaussrev::gaussian::SqueezedThermalParams;
use thiserror::Error;

/// Hard cap on generated grid sizes; keeps hostile linspace counts from
/// exhausting memory.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("empty grid specification")]
    Empty,
    #[error("cannot parse {0:?} as a number")]
    BadNumber(String),
    #[error("linspace needs start:stop:count, got {0:?}")]
    BadLinspace(String),
    #[error("grid must be strictly increasing, got {0} after {1}")]
    NotIncreasing(f64, f64),
    #[error("grid of {0} points exceeds the {MAX_GRID_POINTS} point cap")]
    TooManyPoints(usize),
    #[error("class entry {0:?} must be `nu,r`")]
    BadClassEntry(String),
    #[error("invalid class member: {0}")]
    BadMember(String),
}

fn number(s: &str) -> Result<f64, SpecError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| SpecError::BadNumber(s.trim().to_string()))?;
    if !v.is_finite() {
        return Err(SpecError::BadNumber(s.trim().to_string()));
    }
    Ok(v)
}

/// Parses `a:b:n` (inclusive linspace), `x,y,z` (explicit increasing list)
/// or a single number.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, SpecError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(SpecError::Empty);
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(SpecError::BadLinspace(spec.to_string()));
        }
        let start = number(parts[0])?;
        let stop = number(parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| SpecError::BadLinspace(spec.to_string()))?;
        if count == 0 {
            return Err(SpecError::Empty);
        }
        if count > MAX_GRID_POINTS {
            return Err(SpecError::TooManyPoints(count));
        }
        if count == 1 {
            if start != stop {
                return Err(SpecError::BadLinspace(spec.to_string()));
            }
            return Ok(vec![start]);
        }
        if stop <= start {
            return Err(SpecError::NotIncreasing(stop, start));
        }
        let h = (stop - start) / (count - 1) as f64;
        let grid: Vec<f64> = (0..count)
            .map(|i| if i + 1 == count { stop } else { start + h * i as f64 })
            .collect();
        // A step below f64 resolution collapses neighbours onto each other.
        for w in grid.windows(2) {
            if w[1] <= w[0] {
                return Err(SpecError::NotIncreasing(w[1], w[0]));
            }
        }
        return Ok(grid);
    }
    let values: Vec<f64> = spec
        .split(',')
        .map(number)
        .collect::<Result<_, _>>()?;
    for w in values.windows(2) {
        if w[1] <= w[0] {
            return Err(SpecError::NotIncreasing(w[1], w[0]));
        }
    }
    Ok(values)
}

/// Parses `nu,r; nu,r; ...` into squeezed-thermal class members.
pub fn parse_class(spec: &str) -> Result<Vec<SqueezedThermalParams>, SpecError> {
    let entries: Vec<&str> = spec
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if entries.is_empty() {
        return Err(SpecError::Empty);
    }
    entries
        .into_iter()
        .map(|entry| {
            let Some((nu, r)) = entry.split_once(',') else {
                return Err(SpecError::BadClassEntry(entry.to_string()));
            };
            SqueezedThermalParams::new(number(nu)?, number(r)?)
                .map_err(|e| SpecError::BadMember(e.to_string()))
        })
        .collect()
}

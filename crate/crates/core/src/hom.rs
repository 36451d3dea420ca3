//! Two-particle interference at a beamsplitter.
//!
//! One particle enters each input port. The beamsplitter maps
//! `in₁ → t·out₁ + i r·out₂` and `in₂ → i r·out₁ + t·out₂` with
//! `r = √(1 − t²)`. Output probabilities are computed from the two-particle
//! amplitudes for the chosen exchange statistics.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
    Distinguishable,
}

impl Statistics {
    pub const ALL: [Statistics; 3] = [
        Statistics::Boson,
        Statistics::Fermion,
        Statistics::Distinguishable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
            Statistics::Distinguishable => "distinguishable",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistics::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown statistics '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoParticleInput {
    pub statistics: Statistics,
    /// Transmission amplitude, in `[0, 1]`.
    pub transmissivity: f64,
}

impl TwoParticleInput {
    pub fn new(statistics: Statistics, transmissivity: f64) -> Result<Self> {
        let input = TwoParticleInput {
            statistics,
            transmissivity,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        if (0.0..=1.0).contains(&self.transmissivity) {
            Ok(())
        } else {
            Err(Error::TransmissivityOutOfRange(self.transmissivity))
        }
    }
}

/// Probabilities of the three detection outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomOutcomes {
    pub both_left: f64,
    pub both_right: f64,
    pub coincidence: f64,
}

impl HomOutcomes {
    pub fn total(&self) -> f64 {
        self.both_left + self.both_right + self.coincidence
    }
}

/// `U[out][in]` for the beamsplitter.
fn beamsplitter(t: f64) -> [[C64; 2]; 2] {
    let r = (1.0 - t * t).max(0.0).sqrt();
    let t = C64::new(t, 0.0);
    let ir = C64::new(0.0, r);
    [[t, ir], [ir, t]]
}

/// Probability of finding the particles in output ports `o1 ≤ o2`.
fn output_probability(u: &[[C64; 2]; 2], statistics: Statistics, o1: usize, o2: usize) -> f64 {
    // direct: input 0 → o1 and input 1 → o2; crossed swaps the outputs.
    let direct = u[o1][0] * u[o2][1];
    let crossed = u[o2][0] * u[o1][1];
    match statistics {
        Statistics::Boson => {
            // |permanent|² / Π n_out!
            let occupancy_factorials = if o1 == o2 { 2.0 } else { 1.0 };
            (direct + crossed).norm_sqr() / occupancy_factorials
        }
        Statistics::Fermion => {
            if o1 == o2 {
                0.0
            } else {
                (direct - crossed).norm_sqr()
            }
        }
        Statistics::Distinguishable => {
            if o1 == o2 {
                direct.norm_sqr()
            } else {
                direct.norm_sqr() + crossed.norm_sqr()
            }
        }
    }
}

pub fn outcome_distribution(input: &TwoParticleInput) -> Result<HomOutcomes> {
    input.validate()?;
    let u = beamsplitter(input.transmissivity);
    Ok(HomOutcomes {
        both_left: output_probability(&u, input.statistics, 0, 0),
        both_right: output_probability(&u, input.statistics, 1, 1),
        coincidence: output_probability(&u, input.statistics, 0, 1),
    })
}

/// Probability that both detectors fire.
pub fn coincidence_probability(input: &TwoParticleInput) -> Result<f64> {
    Ok(outcome_distribution(input)?.coincidence)
}

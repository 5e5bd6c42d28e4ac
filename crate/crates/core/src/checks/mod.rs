//! Seeded randomized property suites over the whole library.
//!
//! Each suite is a list of independent cases. Case `n` of a suite draws
//! from its own generator, seeded from the run seed, the suite name and
//! `n`, so results do not depend on evaluation order and a batch can be
//! spread across threads.

mod gen;
mod suites;

use std::fmt;

use crate::batch::{map_with, Mode};
use crate::Error;

pub use gen::Gen;
pub use suites::all_suites;

/// Why a single case failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseFailure(pub String);

impl From<Error> for CaseFailure {
    fn from(e: Error) -> Self {
        CaseFailure(e.to_string())
    }
}

impl From<String> for CaseFailure {
    fn from(s: String) -> Self {
        CaseFailure(s)
    }
}

pub type CaseResult = Result<(), CaseFailure>;

/// A named property with a fixed number of cases.
#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub area: &'static str,
    pub cases: usize,
    pub run: fn(usize, &mut Gen) -> CaseResult,
}

impl fmt::Debug for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Suite({}, {} cases)", self.name, self.cases)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub area: &'static str,
    pub cases: usize,
    /// Case index and message of each failing case.
    pub failures: Vec<(usize, String)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(
            f,
            "{status:6} {}/{} ({} cases, {} failed)",
            self.area,
            self.name,
            self.cases,
            self.failures.len()
        )?;
        for (n, msg) in self.failures.iter().take(3) {
            write!(f, "\n       case {n}: {msg}")?;
        }
        Ok(())
    }
}

fn case_seed(seed: u64, name: &str, n: usize) -> u64 {
    // FNV-1a over the suite name, then mixed with the seed and case.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed.rotate_left(17) ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn run_suite(suite: &Suite, seed: u64, mode: Mode) -> SuiteReport {
    let idx: Vec<usize> = (0..suite.cases).collect();
    let results = map_with(mode, &idx, |&n| {
        let mut g = Gen::new(case_seed(seed, suite.name, n));
        (suite.run)(n, &mut g)
    });
    let failures = results
        .into_iter()
        .enumerate()
        .filter_map(|(n, r)| r.err().map(|e| (n, e.0)))
        .collect();
    SuiteReport {
        name: suite.name,
        area: suite.area,
        cases: suite.cases,
        failures,
    }
}

pub fn run_all(seed: u64, mode: Mode) -> Vec<SuiteReport> {
    all_suites().iter().map(|s| run_suite(s, seed, mode)).collect()
}

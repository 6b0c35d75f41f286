//! Text dump of a state: one `occupation TAB re TAB im` line per term, sorted
//! by occupation. Occupations are written as digits when every entry is below
//! 10 and comma-separated otherwise.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::amplitude::Amplitude;
use super::state::{FockError, FockState, Occupation};

fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

fn fmt_occupation(occ: &[u32]) -> String {
    if occ.iter().all(|&n| n < 10) {
        occ.iter().map(|n| char::from(b'0' + *n as u8)).collect()
    } else {
        occ.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

pub fn dump<A: Amplitude>(state: &FockState<A>) -> String {
    let mut out = String::new();
    // BTreeMap order is lexicographic in the occupation vector
    for (occ, a) in state.terms() {
        let z = a.to_complex();
        let _ = writeln!(out, "{}\t{}\t{}", fmt_occupation(occ), fmt_float(z.re), fmt_float(z.im));
    }
    out
}

fn parse_occupation(s: &str) -> Result<Occupation, String> {
    if s.contains(',') {
        s.split(',').map(|p| p.trim().parse::<u32>().map_err(|e| e.to_string())).collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| format!("bad occupation digit {c:?}")))
            .collect()
    }
}

pub fn parse_dump(text: &str, cutoff: u32) -> Result<FockState<Complex64>, FockError> {
    let mut terms = Vec::new();
    for (idx, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let err = |msg: String| FockError::Parse { line: idx + 1, msg };
        let fields: Vec<&str> = line.split('\t').collect();
        let [occ, re, im] = fields[..] else {
            return Err(err(format!("expected 3 tab-separated fields, got {}", fields.len())));
        };
        let occ = parse_occupation(occ).map_err(err)?;
        let re: f64 = re.parse().map_err(|e| err(format!("{e}")))?;
        let im: f64 = im.parse().map_err(|e| err(format!("{e}")))?;
        terms.push((occ, Complex64::new(re, im)));
    }
    FockState::from_terms(cutoff, terms)
}

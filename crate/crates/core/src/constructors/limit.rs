use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grade::koszul_grade;
use crate::ring::{IdealHandle, IntOrInf, PresentedModule, Ring};

/// `R[X1, X2, ...]`, realized one finite level `R[X1..Xm]` at a time.
/// Level `m` has the variables of `R` followed by `X1..Xm`, so every level
/// is a prefix of the next.
pub struct LimitRing {
    base: Ring,
    levels: Mutex<BTreeMap<usize, Ring>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub ideal: String,
    pub level: usize,
    pub grade: IntOrInf,
    pub height: IntOrInf,
    pub next_grade: IntOrInf,
    pub next_height: IntOrInf,
}

impl LevelReport {
    pub fn stable(&self) -> bool {
        self.grade == self.next_grade && self.height == self.next_height
    }
}

impl LimitRing {
    pub fn new(base: &Ring) -> Result<LimitRing> {
        if base.ambient().vars().iter().any(|v| parse_x(v).is_some()) {
            return Err(Error::Invalid("base ring already uses a variable named X<k>".into()));
        }
        Ok(LimitRing { base: base.clone(), levels: Mutex::new(BTreeMap::new()) })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    /// `R[X1..Xm]`. Realizing the same level twice returns the same ring.
    pub fn level(&self, m: usize) -> Result<Ring> {
        if m == 0 {
            return Ok(self.base.clone());
        }
        if let Some(r) = self.levels.lock().unwrap().get(&m) {
            return Ok(r.clone());
        }
        let names: Vec<String> = (1..=m).map(|i| format!("X{i}")).collect();
        let r = self.base.adjoin(&names)?;
        Ok(self.levels.lock().unwrap().entry(m).or_insert(r).clone())
    }

    pub fn realized_levels(&self) -> Vec<usize> {
        self.levels.lock().unwrap().keys().copied().collect()
    }

    /// Smallest level containing every `X<k>` named in `gens`.
    pub fn required_level(gens: &[&str]) -> usize {
        gens.iter().flat_map(|g| scan_x(g)).max().unwrap_or(0)
    }

    pub fn ideal(&self, gens: &[&str], m: usize) -> Result<IdealHandle> {
        IdealHandle::parse(&self.level(m)?, gens)
    }

    /// Grade and height at level `m` (at least the required level) and at
    /// level `m + 1`.
    pub fn grade_and_height(&self, gens: &[&str], m: Option<usize>) -> Result<LevelReport> {
        let m = m.unwrap_or(0).max(Self::required_level(gens));
        let at = |lvl: usize| -> Result<(IntOrInf, IntOrInf, String)> {
            let a = self.ideal(gens, lvl)?;
            let g = koszul_grade(&a, &PresentedModule::free(a.ring(), 1))?.value;
            Ok((g, a.height()?, a.to_string()))
        };
        let (grade, height, ideal) = at(m)?;
        let (next_grade, next_height, _) = at(m + 1)?;
        Ok(LevelReport { ideal, level: m, grade, height, next_grade, next_height })
    }
}

fn parse_x(name: &str) -> Option<usize> {
    name.strip_prefix('X').and_then(|d| d.parse().ok()).filter(|&k| k > 0)
}

fn scan_x(src: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let b = src.as_bytes();
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'X' && (i == 0 || !(b[i - 1].is_ascii_alphanumeric() || b[i - 1] == b'_')) {
            let j = (i + 1..b.len()).find(|&j| !b[j].is_ascii_digit()).unwrap_or(b.len());
            if j > i + 1 && (j == b.len() || !(b[j].is_ascii_alphabetic() || b[j] == b'_')) {
                out.extend(parse_x(&src[i..j]));
            }
            i = j;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, PolyRing};
    use crate::ring::PresentedRing;
    use crate::scalars::Field;

    fn base(vars: &[&str], rels: &[&str]) -> Ring {
        let s = PolyRing::new(Field::Rational, vars.iter().map(|v| v.to_string()).collect(), MonomialOrder::DegRevLex);
        let gens: Vec<_> = rels.iter().map(|r| crate::dsl::parse_poly(&s, r).unwrap()).collect();
        PresentedRing::new(&s, &gens).unwrap()
    }

    #[test]
    fn levels_are_prefixes() {
        let l = LimitRing::new(&base(&[], &[])).unwrap();
        let r3 = l.level(3).unwrap();
        let r4 = l.level(4).unwrap();
        assert_eq!(&r4.ambient().vars()[..3], r3.ambient().vars());
        assert!(std::sync::Arc::ptr_eq(&r3, &l.level(3).unwrap()));
        assert_eq!(l.realized_levels(), vec![3, 4]);
    }

    #[test]
    fn scan() {
        assert_eq!(LimitRing::required_level(&["X1*X3 + X2", "X12^2"]), 12);
        assert_eq!(LimitRing::required_level(&["AX3", "X3a"]), 0);
    }

    #[test]
    fn rational_base() {
        let l = LimitRing::new(&base(&[], &[])).unwrap();
        let rep = l.grade_and_height(&["X1", "X3"], None).unwrap();
        assert_eq!((rep.level, rep.grade, rep.height), (3, IntOrInf::Fin(2), IntOrInf::Fin(2)));
        assert!(rep.stable());
        let rep = l.grade_and_height(&["X1"], None).unwrap();
        assert_eq!(rep.grade, IntOrInf::Fin(1));
    }

    #[test]
    fn dual_number_base() {
        let l = LimitRing::new(&base(&["u"], &["u^2"])).unwrap();
        let rep = l.grade_and_height(&["u", "X1"], None).unwrap();
        assert_eq!(rep.level, 1);
        assert_eq!((rep.grade, rep.height), (IntOrInf::Fin(1), IntOrInf::Fin(1)));
        assert!(rep.stable());
    }
}

use serde::Serialize;

use crate::ring::IntOrInf;

/// A valuation domain of rank `r` with value group `Z^r`, ordered
/// lexicographically with the last coordinate most significant.
///
/// The convex subgroups are `H_j = Z^j × 0`. Prime `Q_j` is the set of
/// elements whose value lies outside `H_j`, so `Q_0` is the maximal ideal,
/// `Q_r = 0` and `ht(Q_j) = r - j`. Only `Q_0` and `Q_r` are finitely
/// generated when `r ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationModel {
    pub rank: usize,
}

/// Ideals the model can name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VIdeal {
    Zero,
    Unit,
    /// `vR` for a value `v > 0`.
    Principal(Vec<u32>),
    /// `Q_j`.
    Prime(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub ideals: bool,
    pub primes: bool,
    pub glaz: bool,
    pub fg_ideals: bool,
    pub dim_at_most_one: bool,
    pub weak_bourbaki: bool,
    pub maximal: bool,
}

impl Conditions {
    pub fn as_array(&self) -> [bool; 7] {
        [self.ideals, self.primes, self.glaz, self.fg_ideals, self.dim_at_most_one, self.weak_bourbaki, self.maximal]
    }

    pub fn all_equal(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&b| b == a[0])
    }
}

/// Index (1-based) of the most significant nonzero coordinate.
fn top(v: &[u32]) -> usize {
    v.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1)
}

impl ValuationModel {
    pub fn new(rank: usize) -> ValuationModel {
        ValuationModel { rank }
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    /// The chain `Q_r = 0 ⊂ Q_{r-1} ⊂ ... ⊂ Q_0 = m`, listed by height.
    pub fn spec(&self) -> Vec<VIdeal> {
        (0..=self.rank).rev().map(VIdeal::Prime).collect()
    }

    pub fn maximal(&self) -> VIdeal {
        VIdeal::Prime(0)
    }

    fn canon(&self, a: &VIdeal) -> VIdeal {
        match a {
            VIdeal::Principal(v) if top(v) == 0 => VIdeal::Unit,
            VIdeal::Prime(j) if *j == self.rank => VIdeal::Zero,
            other => other.clone(),
        }
    }

    pub fn is_finitely_generated(&self, a: &VIdeal) -> bool {
        match self.canon(a) {
            VIdeal::Prime(j) => j == 0,
            _ => true,
        }
    }

    /// `ht(a)`: the height of the smallest prime containing `a`.
    pub fn height(&self, a: &VIdeal) -> IntOrInf {
        match self.canon(a) {
            VIdeal::Zero => IntOrInf::Fin(0),
            VIdeal::Unit => IntOrInf::Inf,
            VIdeal::Prime(j) => IntOrInf::Fin(self.rank - j),
            VIdeal::Principal(v) => IntOrInf::Fin(self.rank + 1 - top(&v)),
        }
    }

    /// Koszul grade on `R`: every nonzero proper ideal is principal up to
    /// radical and the ring is a domain, so the grade is 1.
    pub fn kgrade(&self, a: &VIdeal) -> IntOrInf {
        match self.canon(a) {
            VIdeal::Zero => IntOrInf::Fin(0),
            VIdeal::Unit => IntOrInf::Inf,
            _ => IntOrInf::Fin(1),
        }
    }

    /// Koszul grade of `Q_j R_{Q_j}` on `R_{Q_j}`, itself a valuation domain
    /// of rank `ht(Q_j)`.
    pub fn local_depth(&self, j: usize) -> IntOrInf {
        if j >= self.rank {
            IntOrInf::Fin(0)
        } else {
            IntOrInf::Fin(1)
        }
    }

    /// Values in `{0..=bound}^r \ {0}`.
    pub fn sample_values(&self, bound: u32) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..self.rank {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=bound).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out.retain(|v| top(v) > 0);
        out
    }

    /// `Min(vR)`.
    pub fn minimal_primes(&self, v: &[u32]) -> Vec<VIdeal> {
        match top(v) {
            0 => Vec::new(),
            k => vec![VIdeal::Prime(k - 1)],
        }
    }

    /// `wAss(R/vR)`: the minimal primes over `(vR : x) = (v - u)R` for the
    /// residues `x` of value `u` with `0 ≤ u < v`.
    pub fn weakly_associated(&self, v: &[u32]) -> Vec<VIdeal> {
        let mut tops: Vec<usize> = Vec::new();
        for w in self.sample_values(v.iter().copied().max().unwrap_or(0)) {
            if lex_le(&w, v) {
                tops.push(top(&w));
            }
        }
        tops.sort_unstable();
        tops.dedup();
        tops.into_iter().map(|k| VIdeal::Prime(k - 1)).collect()
    }

    /// The seven conditions, each evaluated on the model.
    pub fn conditions(&self) -> Conditions {
        let values = self.sample_values(2);
        let mut all: Vec<VIdeal> = vec![VIdeal::Zero];
        all.extend(values.iter().cloned().map(VIdeal::Principal));
        all.extend((0..self.rank).map(VIdeal::Prime));
        let eq = |a: &VIdeal| self.height(a) == self.kgrade(a);
        let ideals = all.iter().all(eq);
        let primes = self.spec().iter().all(eq);
        let glaz = (0..=self.rank).all(|j| self.height(&VIdeal::Prime(j)) == self.local_depth(j));
        let fg_ideals = all.iter().filter(|a| self.is_finitely_generated(a)).all(eq);
        let weak_bourbaki = values.iter().all(|v| {
            let a = VIdeal::Principal(v.clone());
            self.height(&a) < IntOrInf::Fin(1) || self.minimal_primes(v) == self.weakly_associated(v)
        });
        let maximal = eq(&self.maximal());
        Conditions { ideals, primes, glaz, fg_ideals, dim_at_most_one: self.rank <= 1, weak_bourbaki, maximal }
    }
}

/// `w ≤ v` with the last coordinate most significant.
fn lex_le(w: &[u32], v: &[u32]) -> bool {
    for i in (0..v.len()).rev() {
        if w[i] != v[i] {
            return w[i] < v[i];
        }
    }
    true
}

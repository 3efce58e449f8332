//! Monotone submodular penalty functions over demand sets, accessed
//! through a value oracle.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest ground set an explicit table may have.
pub const MAX_TABLE_GROUND: usize = 20;
/// Largest ground set checked exhaustively by [`check_penalty_axioms`].
pub const MAX_EXHAUSTIVE_AXIOM_GROUND: usize = 12;

/// A set of demand ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct DemandSet {
    words: Vec<u64>,
}

impl DemandSet {
    pub fn new() -> Self {
        DemandSet::default()
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut s = DemandSet { words: vec![mask] };
        s.trim();
        s
    }

    /// Low 64 bits; callers check `max()` first when the ground set is large.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn insert(&mut self, d: usize) {
        let (w, b) = (d / 64, d % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn remove(&mut self, d: usize) {
        let (w, b) = (d / 64, d % 64);
        if let Some(word) = self.words.get_mut(w) {
            *word &= !(1 << b);
        }
        self.trim();
    }

    pub fn contains(&self, d: usize) -> bool {
        self.words.get(d / 64).is_some_and(|w| w & (1 << (d % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w & (1u64 << b) != 0).map(move |b| i * 64 + b)
        })
    }

    pub fn max(&self) -> Option<usize> {
        self.iter().last()
    }

    pub fn union(&self, other: &DemandSet) -> DemandSet {
        let n = self.words.len().max(other.words.len());
        let mut words = vec![0; n];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0);
        }
        let mut s = DemandSet { words };
        s.trim();
        s
    }

    pub fn intersection(&self, other: &DemandSet) -> DemandSet {
        let mut s = DemandSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        };
        s.trim();
        s
    }

    pub fn difference(&self, other: &DemandSet) -> DemandSet {
        let mut s = DemandSet {
            words: self
                .words
                .iter()
                .enumerate()
                .map(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0))
                .collect(),
        };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &DemandSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl From<Vec<usize>> for DemandSet {
    fn from(ids: Vec<usize>) -> Self {
        ids.into_iter().collect()
    }
}

impl From<DemandSet> for Vec<usize> {
    fn from(set: DemandSet) -> Self {
        set.to_vec()
    }
}

impl FromIterator<usize> for DemandSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = DemandSet::new();
        for d in iter {
            s.insert(d);
        }
        s
    }
}

/// Penalty function kinds. All are normalised so that `π(∅) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PenaltyFn {
    /// `π(D) = Σ_{d∈D} p_d`.
    Additive { values: Vec<Rational> },
    /// `π(D) = min(Σ_{d∈D} p_d, cap)`.
    Capped { values: Vec<Rational>, cap: Rational },
    /// Explicit value per subset, indexed by bit mask. `offset` records the
    /// constant removed to make `π(∅) = 0`.
    Table { ground: usize, values: Vec<Rational>, offset: Rational },
}

impl PenaltyFn {
    pub fn additive(values: Vec<Rational>) -> Result<Self> {
        check_nonnegative(&values)?;
        Ok(PenaltyFn::Additive { values })
    }

    pub fn capped(values: Vec<Rational>, cap: Rational) -> Result<Self> {
        check_nonnegative(&values)?;
        if cap.is_negative() {
            return Err(Error::domain("negative penalty cap"));
        }
        Ok(PenaltyFn::Capped { values, cap })
    }

    /// Builds a table from values indexed by subset mask. A positive `π(∅)`
    /// is subtracted and kept as the offset.
    pub fn table(ground: usize, values: Vec<Rational>) -> Result<Self> {
        if ground > MAX_TABLE_GROUND {
            return Err(Error::capacity(format!(
                "table penalty over {ground} demands exceeds {MAX_TABLE_GROUND}"
            )));
        }
        if values.len() != 1 << ground {
            return Err(Error::domain(format!(
                "table over {ground} demands needs {} values, got {}",
                1u64 << ground,
                values.len()
            )));
        }
        let offset = values[0].clone();
        let values: Vec<Rational> = values.into_iter().map(|v| v - &offset).collect();
        check_nonnegative(&values)?;
        Ok(PenaltyFn::Table { ground, values, offset })
    }

    /// Size of the ground set (number of demands).
    pub fn ground_size(&self) -> usize {
        match self {
            PenaltyFn::Additive { values } | PenaltyFn::Capped { values, .. } => values.len(),
            PenaltyFn::Table { ground, .. } => *ground,
        }
    }

    /// Constant removed during normalisation.
    pub fn offset(&self) -> Rational {
        match self {
            PenaltyFn::Table { offset, .. } => offset.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn is_additive(&self) -> bool {
        matches!(self, PenaltyFn::Additive { .. })
    }

    /// Per-demand weights of additive and capped penalties.
    pub fn weights(&self) -> Option<&[Rational]> {
        match self {
            PenaltyFn::Additive { values } | PenaltyFn::Capped { values, .. } => Some(values),
            PenaltyFn::Table { .. } => None,
        }
    }

    /// `π(D)`.
    pub fn eval(&self, set: &DemandSet) -> Result<Rational> {
        if let Some(max) = set.max() {
            if max >= self.ground_size() {
                return Err(Error::domain(format!(
                    "demand {max} is outside the penalty ground set of size {}",
                    self.ground_size()
                )));
            }
        }
        Ok(match self {
            PenaltyFn::Additive { values } => sum(values, set),
            PenaltyFn::Capped { values, cap } => sum(values, set).min(cap.clone()),
            PenaltyFn::Table { values, .. } => values[set.mask() as usize].clone(),
        })
    }

    /// `π` of a subset given as a bit mask; the ground set must be ≤ 64.
    pub fn eval_mask(&self, mask: u64) -> Rational {
        match self {
            PenaltyFn::Table { values, .. } => values[mask as usize].clone(),
            PenaltyFn::Additive { values } => sum_mask(values, mask),
            PenaltyFn::Capped { values, cap } => sum_mask(values, mask).min(cap.clone()),
        }
    }

    /// Every subset value, indexed by mask.
    pub fn tabulate(&self) -> Result<Vec<Rational>> {
        let k = self.ground_size();
        if k > MAX_TABLE_GROUND {
            return Err(Error::capacity(format!("cannot tabulate {k} demands")));
        }
        Ok((0..1u64 << k).map(|m| self.eval_mask(m)).collect())
    }

    /// The same function as an explicit table.
    pub fn to_table(&self) -> Result<PenaltyFn> {
        PenaltyFn::table(self.ground_size(), self.tabulate()?)
    }

    /// `factor · π`.
    pub fn scaled(&self, factor: &Rational) -> Result<PenaltyFn> {
        if factor.is_negative() {
            return Err(Error::domain("negative penalty scale"));
        }
        let scale = |v: &[Rational]| v.iter().map(|x| x * factor).collect::<Vec<_>>();
        Ok(match self {
            PenaltyFn::Additive { values } => PenaltyFn::Additive { values: scale(values) },
            PenaltyFn::Capped { values, cap } => PenaltyFn::Capped { values: scale(values), cap: cap * factor },
            PenaltyFn::Table { ground, values, offset } => {
                PenaltyFn::Table { ground: *ground, values: scale(values), offset: offset * factor }
            }
        })
    }

    /// The function `D ↦ π(keep(D) ∪ forced)` over the demands listed in
    /// `keep` (re-indexed `0..keep.len()`), split into a normalised function
    /// and its constant `π(forced)`.
    pub fn restricted(&self, forced: &DemandSet, keep: &[usize]) -> Result<(PenaltyFn, Rational)> {
        let base = self.eval(forced)?;
        match self {
            PenaltyFn::Additive { values } => {
                let values = keep.iter().map(|&d| values[d].clone()).collect();
                Ok((PenaltyFn::Additive { values }, base))
            }
            PenaltyFn::Capped { values, cap } => {
                let kept = keep.iter().map(|&d| values[d].clone()).collect();
                let rest = (cap - sum(values, forced)).max(Rational::zero());
                Ok((PenaltyFn::Capped { values: kept, cap: rest }, base))
            }
            PenaltyFn::Table { .. } => {
                if keep.len() > MAX_TABLE_GROUND {
                    return Err(Error::capacity("restricted table ground set too large"));
                }
                let mut table = Vec::with_capacity(1 << keep.len());
                for mask in 0..1u64 << keep.len() {
                    let mut set = forced.clone();
                    for (i, &d) in keep.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            set.insert(d);
                        }
                    }
                    table.push(self.eval(&set)? - &base);
                }
                Ok((PenaltyFn::Table { ground: keep.len(), values: table, offset: Rational::zero() }, base))
            }
        }
    }
}

fn check_nonnegative(values: &[Rational]) -> Result<()> {
    match values.iter().position(|v| v.is_negative()) {
        Some(i) => Err(Error::domain(format!("negative penalty value at index {i}"))),
        None => Ok(()),
    }
}

fn sum(values: &[Rational], set: &DemandSet) -> Rational {
    set.iter().fold(Rational::zero(), |acc, d| acc + &values[d])
}

fn sum_mask(values: &[Rational], mask: u64) -> Rational {
    let mut acc = Rational::zero();
    let mut m = mask;
    while m != 0 {
        let d = m.trailing_zeros() as usize;
        acc += &values[d];
        m &= m - 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Monotone,
    Submodular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub exhaustive: bool,
    pub pairs_checked: u64,
    /// At most [`AxiomReport::STORED`] violations are kept.
    pub violations: Vec<AxiomViolation>,
    pub violation_count: u64,
}

impl AxiomReport {
    pub const STORED: usize = 256;

    pub fn holds(&self) -> bool {
        self.violation_count == 0
    }

    fn record(&mut self, axiom: Axiom, a: u64, b: u64) {
        self.violation_count += 1;
        if self.violations.len() < Self::STORED {
            self.violations.push(AxiomViolation {
                axiom,
                a: DemandSet::from_mask(a).to_vec(),
                b: DemandSet::from_mask(b).to_vec(),
            });
        }
    }
}

/// Checks monotonicity (`A ⊆ B ⇒ π(A) ≤ π(B)`) and submodularity
/// (`π(A)+π(B) ≥ π(A∪B)+π(A∩B)`). Ground sets up to
/// [`MAX_EXHAUSTIVE_AXIOM_GROUND`] are checked on every pair; larger ones on
/// `samples` seeded random pairs.
pub fn check_penalty_axioms(pi: &PenaltyFn, samples: usize, seed: u64) -> AxiomReport {
    let k = pi.ground_size();
    let mut report = AxiomReport::default();
    if k <= MAX_EXHAUSTIVE_AXIOM_GROUND {
        report.exhaustive = true;
        let table: Vec<Rational> = (0..1u64 << k).map(|m| pi.eval_mask(m)).collect();
        let limit = 1i128 << 100;
        match rational::common_scale(&table, limit) {
            Some((ints, _)) => exhaustive_axioms(&ints, k, &mut report),
            None => exhaustive_axioms(&table, k, &mut report),
        }
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_set = |rng: &mut ChaCha8Rng| -> DemandSet { (0..k).filter(|_| rng.gen_bool(0.5)).collect() };
    for _ in 0..samples {
        let a = random_set(&mut rng);
        let b = random_set(&mut rng);
        let ab = a.union(&b);
        let (Ok(pa), Ok(pb), Ok(pu), Ok(pi_)) =
            (pi.eval(&a), pi.eval(&b), pi.eval(&ab), pi.eval(&a.intersection(&b)))
        else {
            continue;
        };
        report.pairs_checked += 1;
        let mut push = |axiom, x: &DemandSet, y: &DemandSet| {
            report.violation_count += 1;
            if report.violations.len() < AxiomReport::STORED {
                report.violations.push(AxiomViolation { axiom, a: x.to_vec(), b: y.to_vec() });
            }
        };
        if pa > pu {
            push(Axiom::Monotone, &a, &ab);
        }
        if &pa + &pb < &pu + &pi_ {
            push(Axiom::Submodular, &a, &b);
        }
    }
    report
}

fn exhaustive_axioms<T>(table: &[T], k: usize, report: &mut AxiomReport)
where
    T: Ord + Clone,
    for<'a> &'a T: std::ops::Add<&'a T, Output = T>,
{
    let full = (1u64 << k) - 1;
    for b in 0..=full {
        // every subset a of b
        let mut a = b;
        loop {
            report.pairs_checked += 1;
            if table[a as usize] > table[b as usize] {
                report.record(Axiom::Monotone, a, b);
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & b;
        }
    }
    for a in 0..=full {
        for b in a..=full {
            report.pairs_checked += 1;
            let lhs = &table[a as usize] + &table[b as usize];
            let rhs = &table[(a | b) as usize] + &table[(a & b) as usize];
            if lhs < rhs {
                report.record(Axiom::Submodular, a, b);
            }
        }
    }
}

/// JSON shape of a penalty function.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PenaltySpec {
    Additive {
        values: Vec<String>,
    },
    Capped {
        values: Vec<String>,
        cap: String,
    },
    Table {
        ground: usize,
        values: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<String>,
    },
}

impl PenaltySpec {
    pub fn from_fn(pi: &PenaltyFn) -> Self {
        let text = |v: &[Rational]| v.iter().map(rational::format).collect();
        match pi {
            PenaltyFn::Additive { values } => PenaltySpec::Additive { values: text(values) },
            PenaltyFn::Capped { values, cap } => PenaltySpec::Capped { values: text(values), cap: rational::format(cap) },
            PenaltyFn::Table { ground, values, offset } => PenaltySpec::Table {
                ground: *ground,
                values: text(values),
                offset: (!offset.is_zero()).then(|| rational::format(offset)),
            },
        }
    }

    pub fn to_fn(&self) -> Result<PenaltyFn> {
        let parse = |v: &[String]| v.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>();
        match self {
            PenaltySpec::Additive { values } => PenaltyFn::additive(parse(values)?),
            PenaltySpec::Capped { values, cap } => PenaltyFn::capped(parse(values)?, rational::parse(cap)?),
            PenaltySpec::Table { ground, values, offset } => {
                let mut f = PenaltyFn::table(*ground, parse(values)?)?;
                if let (PenaltyFn::Table { offset: o, .. }, Some(extra)) = (&mut f, offset) {
                    *o += rational::parse(extra)?;
                }
                Ok(f)
            }
        }
    }
}

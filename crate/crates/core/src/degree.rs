//! Degree vectors in `N^k` and the extended variant in `(N ∪ {∞})^k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An element of `N^k`.
///
/// The derived `Ord` is lexicographic and only exists so degrees can live in
/// ordered containers. Use [`Degree::leq`] for the coordinatewise order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(entries: Vec<u32>) -> Self {
        Degree(entries)
    }

    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    /// The generator `e_i` (0-based color index).
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        Degree(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Sum of the entries; the length of any edge word of this degree.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Coordinatewise `self ≤ other`.
    pub fn leq(&self, other: &Degree) -> bool {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, defined only when `other ≤ self`.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    pub fn sub(&self, other: &Degree) -> Degree {
        self.checked_sub(other)
            .unwrap_or_else(|| panic!("degree subtraction {self} − {other} leaves N^k"))
    }

    pub fn with(&self, i: usize, value: u32) -> Degree {
        let mut v = self.0.clone();
        v[i] = value;
        Degree(v)
    }

    /// Join of a family; `None` for an empty family.
    pub fn join_all<'a>(items: impl IntoIterator<Item = &'a Degree>) -> Option<Degree> {
        items.into_iter().fold(None, |acc, d| match acc {
            None => Some(d.clone()),
            Some(a) => Some(a.join(d)),
        })
    }

    /// Coordinates with a positive entry.
    pub fn support(&self) -> Vec<bool> {
        self.0.iter().map(|&x| x > 0).collect()
    }

    /// All `p` with `0 ≤ p ≤ self`, ordered by total degree then lexicographically.
    pub fn box_below(&self) -> Vec<Degree> {
        let mut out = vec![Vec::new()];
        for &bound in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (bound as usize + 1));
            for prefix in &out {
                for x in 0..=bound {
                    let mut p = prefix.clone();
                    p.push(x);
                    next.push(p);
                }
            }
            out = next;
        }
        let mut out: Vec<Degree> = out.into_iter().map(Degree).collect();
        out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        out
    }

    /// The color sequence of the color-normal word of this degree.
    pub fn color_word(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for (i, &n) in self.0.iter().enumerate() {
            out.extend(std::iter::repeat(i).take(n as usize));
        }
        out
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Degree {
    type Err = Error;

    /// Parses `2,2`, `(2,2)` or a bare `3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        trimmed
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map(Degree)
            .map_err(|_| Error::Parse { line: 0, message: format!("bad degree vector `{s}`") })
    }
}

/// One coordinate of an extended degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Ext {
    Fin(u32),
    Inf,
}

impl Ext {
    pub fn min_with(self, n: u32) -> u32 {
        match self {
            Ext::Fin(m) => m.min(n),
            Ext::Inf => n,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Ext::Fin(_))
    }

    /// `n ≤ self`.
    pub fn dominates(self, n: u32) -> bool {
        match self {
            Ext::Fin(m) => n <= m,
            Ext::Inf => true,
        }
    }
}

/// An element of `(N ∪ {∞})^k`: the degree of a generalized path.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtDegree(Vec<Ext>);

impl ExtDegree {
    pub fn new(entries: Vec<Ext>) -> Self {
        ExtDegree(entries)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Ext {
        self.0[i]
    }

    pub fn entries(&self) -> &[Ext] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|e| e.is_finite())
    }

    pub fn to_finite(&self) -> Option<Degree> {
        self.0
            .iter()
            .map(|e| match e {
                Ext::Fin(n) => Some(*n),
                Ext::Inf => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    /// `n ∧ self`, always finite.
    pub fn meet(&self, n: &Degree) -> Degree {
        Degree(self.0.iter().zip(n.entries()).map(|(e, &x)| e.min_with(x)).collect())
    }

    /// `n ≤ self`.
    pub fn dominates(&self, n: &Degree) -> bool {
        self.0.iter().zip(n.entries()).all(|(e, &x)| e.dominates(x))
    }

    pub fn add(&self, n: &Degree) -> ExtDegree {
        ExtDegree(
            self.0
                .iter()
                .zip(n.entries())
                .map(|(e, &x)| match e {
                    Ext::Fin(m) => Ext::Fin(m + x),
                    Ext::Inf => Ext::Inf,
                })
                .collect(),
        )
    }

    /// `self − n` for finite `n ≤ self`.
    pub fn sub(&self, n: &Degree) -> ExtDegree {
        ExtDegree(
            self.0
                .iter()
                .zip(n.entries())
                .map(|(e, &x)| match e {
                    Ext::Fin(m) => Ext::Fin(m.checked_sub(x).expect("extended degree underflow")),
                    Ext::Inf => Ext::Inf,
                })
                .collect(),
        )
    }
}

impl From<&Degree> for ExtDegree {
    fn from(d: &Degree) -> Self {
        ExtDegree(d.entries().iter().map(|&x| Ext::Fin(x)).collect())
    }
}

impl fmt::Display for ExtDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match x {
                Ext::Fin(n) => write!(f, "{n}")?,
                Ext::Inf => write!(f, "inf")?,
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ExtDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtDegree {
    type Err = Error;

    /// Accepts `inf` or `∞` per coordinate.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        trimmed
            .split(',')
            .map(|t| match t.trim() {
                "inf" | "∞" => Ok(Ext::Inf),
                n => n.parse::<u32>().map(Ext::Fin),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ExtDegree)
            .map_err(|_| Error::Parse { line: 0, message: format!("bad extended degree `{s}`") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn deg() -> impl Strategy<Value = Degree> {
        proptest::collection::vec(0u32..6, 3).prop_map(Degree::new)
    }

    proptest! {
        #[test]
        fn lattice_laws(a in deg(), b in deg(), c in deg()) {
            let m = a.meet(&b);
            let j = a.join(&b);
            prop_assert!(m.leq(&a) && a.leq(&j));
            prop_assert_eq!(a.meet(&j), a.clone());
            prop_assert_eq!(a.join(&m), a.clone());
            prop_assert_eq!(a.meet(&b.meet(&c)), a.meet(&b).meet(&c));
            prop_assert_eq!(a.add(&b).sub(&b), a);
        }
    }

    #[test]
    fn box_below_counts() {
        let d: Degree = "2,2".parse().unwrap();
        let b = d.box_below();
        assert_eq!(b.len(), 9);
        assert!(b[0].is_zero());
        assert_eq!(b[8], d);
    }

    #[test]
    fn extended_meet() {
        let x: ExtDegree = "inf,0".parse().unwrap();
        let n: Degree = "3,1".parse().unwrap();
        assert_eq!(x.meet(&n), "3,0".parse().unwrap());
        assert!(!x.dominates(&n));
        assert_eq!(x.add(&n).to_string(), "(inf,1)");
    }
}

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Finite symbol alphabet. Cheap to clone; equality is pointer-first.
#[derive(Clone)]
pub struct Alphabet(Arc<Vec<String>>);

impl Alphabet {
    pub fn new(symbols: Vec<String>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Domain("alphabet must be nonempty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace()) {
                return Err(Error::Domain(format!(
                    "alphabet symbol {i} is empty or contains whitespace"
                )));
            }
            if symbols[..i].contains(s) {
                return Err(Error::Domain(format!("duplicate alphabet symbol `{s}`")));
            }
        }
        Ok(Alphabet(Arc::new(symbols)))
    }

    pub fn from_strs(symbols: &[&str]) -> Result<Self> {
        Self::new(symbols.iter().map(|s| s.to_string()).collect())
    }

    /// Joint alphabet `{1..component_count} x outcomes`, row-major by
    /// component, symbols written `i:y` with 1-based component index.
    pub fn joint(component_count: usize, outcomes: &Alphabet) -> Result<Self> {
        let mut symbols = Vec::with_capacity(component_count * outcomes.len());
        for i in 1..=component_count {
            for y in outcomes.symbols() {
                symbols.push(format!("{i}:{y}"));
            }
        }
        Self::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.0.iter().position(|s| s == symbol)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({})", self.0.join(","))
    }
}

/// A finite measure on a finite alphabet, carrying the pointwise floor and
/// total-mass cap of its ambient space.
///
/// The floor may be zero: the coupling sets of the mixture application only
/// guarantee nonnegativity, and their projections are what stay above the
/// positive ambient bound. Bounds are verified at construction, never
/// enforced by clipping.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedMeasure {
    alphabet: Alphabet,
    mass: Vec<f64>,
    floor: f64,
    cap: f64,
}

/// Slack allowed when verifying floor/cap bounds, relative to the bound.
const BOUND_SLACK: f64 = 1e-9;

impl BoundedMeasure {
    pub fn new(alphabet: Alphabet, mass: Vec<f64>, floor: f64, cap: f64) -> Result<Self> {
        if mass.len() != alphabet.len() {
            return Err(Error::ShapeMismatch(format!(
                "measure has {} entries for an alphabet of {}",
                mass.len(),
                alphabet.len()
            )));
        }
        if !(floor >= 0.0) || !(cap > floor) || !cap.is_finite() {
            return Err(Error::Domain(format!(
                "require 0 <= floor < cap, got floor={floor}, cap={cap}"
            )));
        }
        let measure = BoundedMeasure {
            alphabet,
            mass,
            floor,
            cap,
        };
        measure.verify_bounds()?;
        Ok(measure)
    }

    /// Probability distribution: floor 0, cap 1, must sum to 1.
    pub fn distribution(alphabet: Alphabet, mass: Vec<f64>) -> Result<Self> {
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "distribution mass sums to {total}, expected 1"
            )));
        }
        Self::new(alphabet, mass, 0.0, 1.0 + 1e-9)
    }

    pub fn verify_bounds(&self) -> Result<()> {
        let slack = BOUND_SLACK * (1.0 + self.cap);
        for (i, &m) in self.mass.iter().enumerate() {
            if !m.is_finite() || m < self.floor - slack {
                return Err(Error::FloorViolation(format!(
                    "mass {m} at symbol `{}` is below floor {}",
                    self.alphabet.symbols()[i],
                    self.floor
                )));
            }
        }
        let total = self.total_mass();
        if total > self.cap + slack {
            return Err(Error::FloorViolation(format!(
                "total mass {total} exceeds cap {}",
                self.cap
            )));
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Metric of the measure space: max over symbols of the absolute
    /// difference.
    pub fn sup_distance(&self, other: &BoundedMeasure) -> Result<f64> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet, other.alphabet
            )));
        }
        Ok(self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_duplicates_and_whitespace() {
        assert!(Alphabet::from_strs(&["a", "a"]).is_err());
        assert!(Alphabet::from_strs(&["a b"]).is_err());
        assert!(Alphabet::from_strs(&[]).is_err());
    }

    #[test]
    fn joint_alphabet_layout_is_row_major() {
        let y = Alphabet::from_strs(&["a", "b"]).unwrap();
        let j = Alphabet::joint(2, &y).unwrap();
        assert_eq!(j.symbols(), &["1:a", "1:b", "2:a", "2:b"]);
    }

    #[test]
    fn bounds_are_verified_not_clipped() {
        let a = Alphabet::from_strs(&["a", "b"]).unwrap();
        let err = BoundedMeasure::new(a.clone(), vec![0.05, 0.5], 0.1, 1.0);
        assert!(matches!(err, Err(Error::FloorViolation(_))));
        let err = BoundedMeasure::new(a.clone(), vec![0.9, 0.9], 0.1, 1.0);
        assert!(matches!(err, Err(Error::FloorViolation(_))));
        let ok = BoundedMeasure::new(a, vec![0.4, 0.6], 0.1, 1.0).unwrap();
        assert_eq!(ok.total_mass(), 1.0);
    }

    #[test]
    fn sup_distance_is_max_abs_difference() {
        let a = Alphabet::from_strs(&["a", "b", "c"]).unwrap();
        let p = BoundedMeasure::distribution(a.clone(), vec![0.5, 0.25, 0.25]).unwrap();
        let q = BoundedMeasure::distribution(a, vec![0.2, 0.55, 0.25]).unwrap();
        assert!((p.sup_distance(&q).unwrap() - 0.3).abs() < 1e-15);
    }
}

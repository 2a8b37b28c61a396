use std::fmt;
use std::str::FromStr;

use super::{QuantumError, Result};

/// Basis label `|l1 l2 ... lN; n>`: one level per atom (1-based) and a photon
/// number.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub levels: Vec<u8>,
    pub photons: usize,
}

impl Label {
    pub fn new(levels: &[u8], photons: usize) -> Self {
        Self { levels: levels.to_vec(), photons }
    }

    /// Number of excitation quanta: every atom outside level 1 and every
    /// photon counts as one.
    pub fn excitation(&self) -> usize {
        self.levels.iter().filter(|&&l| l > 1).count() + self.photons
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for l in &self.levels {
            write!(f, "{l}")?;
        }
        write!(f, ";{}⟩", self.photons)
    }
}

/// Parses `"12;0"`, `"|12;0>"` or `"|12;0⟩"`.
impl FromStr for Label {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self> {
        let err = || QuantumError::ParseLabel(s.to_string());
        let body = s
            .trim()
            .trim_start_matches('|')
            .trim_end_matches('>')
            .trim_end_matches('⟩');
        let (atoms, photons) = body.split_once(';').ok_or_else(err)?;
        let levels = atoms
            .chars()
            .map(|c| c.to_digit(10).filter(|&d| d >= 1).map(|d| d as u8))
            .collect::<Option<Vec<u8>>>()
            .ok_or_else(err)?;
        if levels.is_empty() {
            return Err(err());
        }
        let photons = photons.trim().parse().map_err(|_| err())?;
        Ok(Self { levels, photons })
    }
}

/// Ordered product basis of `num_atoms` atoms with `levels_per_atom` levels
/// each and a cavity mode truncated at `photon_cutoff` photons.
///
/// States are ordered lexicographically in `(l1, ..., lN, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    num_atoms: usize,
    levels_per_atom: u8,
    photon_cutoff: usize,
    states: Vec<Label>,
}

impl Basis {
    pub fn new(num_atoms: usize, levels_per_atom: u8, photon_cutoff: usize) -> Result<Self> {
        if !(2..=3).contains(&levels_per_atom) {
            return Err(QuantumError::InvalidLevels(levels_per_atom));
        }
        if num_atoms == 0 {
            return Err(QuantumError::NoAtoms);
        }
        let atomic = (levels_per_atom as usize).pow(num_atoms as u32);
        let mut states = Vec::with_capacity(atomic * (photon_cutoff + 1));
        let mut levels = vec![1u8; num_atoms];
        for _ in 0..atomic {
            for n in 0..=photon_cutoff {
                states.push(Label { levels: levels.clone(), photons: n });
            }
            // odometer increment, last atom fastest
            for l in levels.iter_mut().rev() {
                if *l < levels_per_atom {
                    *l += 1;
                    break;
                }
                *l = 1;
            }
        }
        Ok(Self { num_atoms, levels_per_atom, photon_cutoff, states })
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    pub fn levels_per_atom(&self) -> u8 {
        self.levels_per_atom
    }

    pub fn photon_cutoff(&self) -> usize {
        self.photon_cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Label] {
        &self.states
    }

    pub fn label(&self, index: usize) -> &Label {
        &self.states[index]
    }

    /// Position of `label` in the ordering, computed arithmetically.
    pub fn index(&self, label: &Label) -> Option<usize> {
        if label.levels.len() != self.num_atoms || label.photons > self.photon_cutoff {
            return None;
        }
        let base = self.levels_per_atom as usize;
        let mut atomic = 0usize;
        for &l in &label.levels {
            if l == 0 || l > self.levels_per_atom {
                return None;
            }
            atomic = atomic * base + (l as usize - 1);
        }
        Some(atomic * (self.photon_cutoff + 1) + label.photons)
    }

    pub fn index_of(&self, label: &Label) -> Result<usize> {
        self.index(label).ok_or_else(|| QuantumError::UnknownLabel(label.to_string()))
    }

    /// Index of the state obtained from `index` by putting atom `atom` into
    /// `level` and changing the photon number by `dn`, if it exists.
    pub fn neighbour(&self, index: usize, atom: usize, level: u8, dn: isize) -> Option<usize> {
        let cur = &self.states[index];
        let n = cur.photons as isize + dn;
        if n < 0 || n as usize > self.photon_cutoff || level == 0 || level > self.levels_per_atom {
            return None;
        }
        let base = self.levels_per_atom as usize;
        let stride = base.pow((self.num_atoms - 1 - atom) as u32) * (self.photon_cutoff + 1);
        let old = cur.levels[atom] as isize;
        let shifted = index as isize + (level as isize - old) * stride as isize + dn;
        Some(shifted as usize)
    }

    pub fn excitation(&self, index: usize) -> usize {
        self.states[index].excitation()
    }
}

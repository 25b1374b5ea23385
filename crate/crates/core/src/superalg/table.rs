use std::collections::HashMap;
use std::sync::Arc;

use super::{AlgebraError, Parity};

/// Ordered even and odd generator names. The order fixes the monomial order.
#[derive(Clone, Debug)]
pub struct VariableTable {
    evens: Vec<String>,
    odds: Vec<String>,
    index: HashMap<String, (Parity, usize)>,
}

pub type Table = Arc<VariableTable>;

/// Odd generators are packed into a `u64` bitmask.
pub const MAX_ODDS: usize = 64;

impl VariableTable {
    pub fn new<S: Into<String>>(
        evens: impl IntoIterator<Item = S>,
        odds: impl IntoIterator<Item = S>,
    ) -> Result<Table, AlgebraError> {
        let evens: Vec<String> = evens.into_iter().map(Into::into).collect();
        let odds: Vec<String> = odds.into_iter().map(Into::into).collect();
        if odds.len() > MAX_ODDS {
            return Err(AlgebraError::TooManyOdds(odds.len()));
        }
        let mut index = HashMap::new();
        for (i, name) in evens.iter().enumerate() {
            if index.insert(name.clone(), (Parity::Even, i)).is_some() {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        for (i, name) in odds.iter().enumerate() {
            if index.insert(name.clone(), (Parity::Odd, i)).is_some() {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        Ok(Arc::new(VariableTable { evens, odds, index }))
    }

    /// The table with no generators; its polynomial ring is the coefficient field.
    pub fn empty() -> Table {
        Self::new(Vec::<String>::new(), Vec::<String>::new()).expect("empty table")
    }

    pub fn evens(&self) -> &[String] {
        &self.evens
    }

    pub fn odds(&self) -> &[String] {
        &self.odds
    }

    pub fn n_even(&self) -> usize {
        self.evens.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odds.len()
    }

    /// Total number of generators, evens first.
    pub fn len(&self) -> usize {
        self.evens.len() + self.odds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, name: &str) -> Option<(Parity, usize)> {
        self.index.get(name).copied()
    }

    /// Name of generator `g` in the evens-then-odds numbering.
    pub fn generator_name(&self, g: usize) -> &str {
        if g < self.evens.len() {
            &self.evens[g]
        } else {
            &self.odds[g - self.evens.len()]
        }
    }

    pub fn generator_parity(&self, g: usize) -> Parity {
        if g < self.evens.len() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// A new table with extra generators appended after the existing ones.
    pub fn extended<S: Into<String>>(
        &self,
        evens: impl IntoIterator<Item = S>,
        odds: impl IntoIterator<Item = S>,
    ) -> Result<Table, AlgebraError> {
        let mut e = self.evens.clone();
        e.extend(evens.into_iter().map(Into::into));
        let mut o = self.odds.clone();
        o.extend(odds.into_iter().map(Into::into));
        Self::new(e, o)
    }
}

impl PartialEq for VariableTable {
    fn eq(&self, other: &Self) -> bool {
        self.evens == other.evens && self.odds == other.odds
    }
}

impl Eq for VariableTable {}

pub(crate) fn same_table(a: &Table, b: &Table) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

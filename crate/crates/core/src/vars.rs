//! Named variable sets shared by all rings in the toolkit.
//!
//! Supported names: `x, y, z, t`, the four deformation parameters `v1..v4`,
//! matrix entries `w_<i>_<j>`, auxiliary symbols `a<k>`, and internal tag
//! variables used for elimination.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarName {
    X,
    Y,
    Z,
    T,
    /// v1..v4
    V(u8),
    /// w_{i,j}, 1-based matrix position
    W(u16, u16),
    /// a1, a2, ... auxiliary coefficients
    A(u16),
    /// internal elimination tag
    Tag(u16),
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::X => write!(f, "x"),
            VarName::Y => write!(f, "y"),
            VarName::Z => write!(f, "z"),
            VarName::T => write!(f, "t"),
            VarName::V(k) => write!(f, "v{}", k),
            VarName::W(i, j) => write!(f, "w_{}_{}", i, j),
            VarName::A(k) => write!(f, "a{}", k),
            VarName::Tag(k) => write!(f, "u{}", k),
        }
    }
}

impl VarName {
    /// Parse a variable name; returns None if the token is not recognised.
    pub fn parse(s: &str) -> Option<VarName> {
        match s {
            "x" => return Some(VarName::X),
            "y" => return Some(VarName::Y),
            "z" => return Some(VarName::Z),
            "t" => return Some(VarName::T),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix('v') {
            return rest.parse::<u8>().ok().map(VarName::V);
        }
        if let Some(rest) = s.strip_prefix("w_") {
            let mut it = rest.splitn(2, '_');
            let i = it.next()?.parse::<u16>().ok()?;
            let j = it.next()?.parse::<u16>().ok()?;
            return Some(VarName::W(i, j));
        }
        if let Some(rest) = s.strip_prefix('a') {
            return rest.parse::<u16>().ok().map(VarName::A);
        }
        if let Some(rest) = s.strip_prefix('u') {
            return rest.parse::<u16>().ok().map(VarName::Tag);
        }
        None
    }
}

#[derive(Debug, Error)]
pub enum VarError {
    #[error("duplicate variable name {0}")]
    Duplicate(String),
    #[error("variable {0} not present in target ring")]
    Missing(String),
}

/// An ordered list of distinct variable names; the positions index exponent vectors.
#[derive(Debug)]
pub struct VariableSet {
    names: Vec<VarName>,
    index: HashMap<VarName, usize>,
}

impl PartialEq for VariableSet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}
impl Eq for VariableSet {}

impl VariableSet {
    pub fn new(names: Vec<VarName>) -> Result<Arc<VariableSet>, VarError> {
        let mut index = HashMap::new();
        for (k, &n) in names.iter().enumerate() {
            if index.insert(n, k).is_some() {
                return Err(VarError::Duplicate(n.to_string()));
            }
        }
        Ok(Arc::new(VariableSet { names, index }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[VarName] {
        &self.names
    }

    pub fn name(&self, k: usize) -> VarName {
        self.names[k]
    }

    pub fn position(&self, n: VarName) -> Option<usize> {
        self.index.get(&n).copied()
    }

    /// k\[x,y\]
    pub fn xy() -> Arc<VariableSet> {
        VariableSet::new(vec![VarName::X, VarName::Y]).unwrap()
    }

    /// k\[x,y,z\]
    pub fn xyz() -> Arc<VariableSet> {
        VariableSet::new(vec![VarName::X, VarName::Y, VarName::Z]).unwrap()
    }

    /// k\[x,y,t\], the base ring for one-parameter families.
    pub fn xyt() -> Arc<VariableSet> {
        VariableSet::new(vec![VarName::X, VarName::Y, VarName::T]).unwrap()
    }

    /// Row-major w-variables of a generic (n+1) x n matrix.
    pub fn matrix_ring(n: usize) -> Arc<VariableSet> {
        VariableSet::new(w_names(n)).unwrap()
    }

    /// Matrix variables together with v1..v4.
    pub fn matrix_v_ring(n: usize) -> Arc<VariableSet> {
        let mut names = w_names(n);
        names.extend((1..=4).map(VarName::V));
        VariableSet::new(names).unwrap()
    }

    /// Matrix variables together with v_{j+1}..v4 (the intermediate rings).
    pub fn matrix_v_tail_ring(n: usize, j: usize) -> Arc<VariableSet> {
        assert!(j <= 4);
        let mut names = w_names(n);
        names.extend(((j + 1)..=4).map(|h| VarName::V(h as u8)));
        VariableSet::new(names).unwrap()
    }

    /// The big ring k[x,y,z, w_{i,j}, v1..v4] carrying the universal families.
    pub fn family_ring(n: usize) -> Arc<VariableSet> {
        let mut names = vec![VarName::X, VarName::Y, VarName::Z];
        names.extend(w_names(n));
        names.extend((1..=4).map(VarName::V));
        VariableSet::new(names).unwrap()
    }

    /// y together with a1..al, for symbolic minor expansions.
    pub fn y_a_ring(l: usize) -> Arc<VariableSet> {
        let mut names = vec![VarName::Y];
        names.extend((1..=l as u16).map(VarName::A));
        VariableSet::new(names).unwrap()
    }

    /// Extend with a fresh elimination tag, returned together with its index.
    pub fn with_tag(self: &Arc<Self>) -> (Arc<VariableSet>, usize) {
        let mut k = 0u16;
        while self.index.contains_key(&VarName::Tag(k)) {
            k += 1;
        }
        let mut names = self.names.clone();
        names.push(VarName::Tag(k));
        let ext = VariableSet::new(names).unwrap();
        let pos = ext.len() - 1;
        (ext, pos)
    }
}

fn w_names(n: usize) -> Vec<VarName> {
    let mut names = Vec::with_capacity((n + 1) * n);
    for i in 1..=(n + 1) as u16 {
        for j in 1..=n as u16 {
            names.push(VarName::W(i, j));
        }
    }
    names
}

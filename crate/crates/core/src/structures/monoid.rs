use std::collections::HashMap;

use crate::error::{Error, Result};

/// A validated finite monoid with a dense multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    elements: Vec<String>,
    table: Vec<u32>,
    one: usize,
    index: HashMap<String, usize>,
}

impl FiniteMonoid {
    /// `table[a][b]` is the product `ab`.
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>, one: usize) -> Result<Self> {
        let n = elements.len();
        let bad = |m: String| Err(Error::InvalidMonoid(m));
        if n == 0 {
            return bad("a monoid has at least its identity".into());
        }
        if one >= n {
            return bad("identity out of range".into());
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return bad(format!("table must be {n}×{n}"));
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return bad(format!("duplicate element `{e}`"));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            for &c in row {
                if c >= n {
                    return bad("table entry out of range".into());
                }
                flat.push(c as u32);
            }
        }
        let m = FiniteMonoid { elements, table: flat, one, index };
        for a in 0..n {
            if m.mul(one, a) != a || m.mul(a, one) != a {
                return bad(format!("`{}` is not a two-sided identity", m.elements[one]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m.mul(a, b);
                for c in 0..n {
                    if m.mul(ab, c) != m.mul(a, m.mul(b, c)) {
                        return bad(format!(
                            "not associative on (`{}`, `{}`, `{}`)",
                            m.elements[a], m.elements[b], m.elements[c]
                        ));
                    }
                }
            }
        }
        Ok(m)
    }

    /// Builds a monoid from a product function on indices.
    pub fn from_fn<F>(elements: Vec<String>, one: usize, mul: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> usize,
    {
        let n = elements.len();
        let table = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Self::new(elements, table, one)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Same elements, product `a ∗ b = ba`.
    pub fn opposite(&self) -> FiniteMonoid {
        FiniteMonoid::from_fn(self.elements.clone(), self.one, |a, b| self.mul(b, a))
            .expect("opposite of a monoid is a monoid")
    }

    /// Elements `z` with `uz = z` for every `u`.
    pub fn right_zeros(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| (0..self.len()).all(|u| self.mul(u, z) == z))
            .collect()
    }

    /// Submonoid generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.len()];
        inside[self.one] = true;
        let mut stack = vec![self.one];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        inside
    }
}

/// A finite group: a monoid in which every element has a two-sided inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    monoid: FiniteMonoid,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Derives the inverse table, failing if some element has none.
    pub fn from_monoid(monoid: FiniteMonoid) -> Result<Self> {
        let n = monoid.len();
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| monoid.mul(a, b) == monoid.one() && monoid.mul(b, a) == monoid.one()) {
                Some(b) => inverse.push(b),
                None => {
                    return Err(Error::InvalidMonoid(format!("`{}` has no inverse", monoid.name(a))))
                }
            }
        }
        Ok(FiniteGroup { monoid, inverse })
    }

    /// Checks a supplied inverse table.
    pub fn new(monoid: FiniteMonoid, inverse: Vec<usize>) -> Result<Self> {
        let n = monoid.len();
        if inverse.len() != n {
            return Err(Error::InvalidMonoid("inverse table has the wrong length".into()));
        }
        for a in 0..n {
            let b = inverse[a];
            if b >= n || monoid.mul(a, b) != monoid.one() || monoid.mul(b, a) != monoid.one() {
                return Err(Error::InvalidMonoid(format!(
                    "inverse of `{}` is wrong",
                    monoid.name(a)
                )));
            }
        }
        Ok(FiniteGroup { monoid, inverse })
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Cyclic group of order `n` written additively as `0..n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMonoid("cyclic group of order 0".into()));
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let m = FiniteMonoid::from_fn(names, 0, |a, b| (a + b) % n)?;
        FiniteGroup::new(m, (0..n).map(|a| (n - a) % n).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| i.to_string()).collect()
    }

    #[test]
    fn maxchain_is_monoid() {
        let m = FiniteMonoid::from_fn(names(4), 0, |a, b| a.max(b)).unwrap();
        assert_eq!(m.right_zeros(), vec![3]);
        assert_eq!(m.opposite(), m);
    }

    #[test]
    fn rejects_wrong_arity_and_identity() {
        assert!(FiniteMonoid::new(names(2), vec![vec![0, 1]], 0).is_err());
        assert!(FiniteMonoid::new(names(2), vec![vec![0, 0], vec![0, 0]], 0).is_err());
    }

    #[test]
    fn rejects_non_associative() {
        // one = 0; 1·1 = 2, 1·2 = 1, 2·1 = 2, 2·2 = 2
        let t = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 2]];
        assert!(matches!(FiniteMonoid::new(names(3), t, 0), Err(Error::InvalidMonoid(_))));
    }

    #[test]
    fn group_inverses() {
        let g = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(g.inverse(2), 3);
        let m = FiniteMonoid::from_fn(names(2), 0, |a, b| a.max(b)).unwrap();
        assert!(FiniteGroup::from_monoid(m).is_err());
    }
}

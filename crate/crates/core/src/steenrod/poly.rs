use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

/// Polynomial over `F_p` in numbered unknowns. Each key is a sorted list of
/// unknown ids (repetition allowed); the empty key is the constant term.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<usize>, u32>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: u32, p: u32) -> Self {
        let mut out = Poly::zero();
        out.add_term(Vec::new(), c, p);
        out
    }

    pub fn var(id: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![id], 1);
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if no unknown occurs.
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&Vec::new()).copied(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], u32)> {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        self.terms.keys().flatten().copied().collect()
    }

    fn add_term(&mut self, key: Vec<usize>, c: u32, p: u32) {
        let c = c % p;
        if c == 0 {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let sum = (*slot.get() + c) % p;
                if sum == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly, p: u32) -> Poly {
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_term(k.clone(), c, p);
        }
        out
    }

    pub fn scale(&self, c: u32, p: u32) -> Poly {
        let mut out = Poly::zero();
        for (k, &v) in &self.terms {
            out.add_term(k.clone(), v * (c % p), p);
        }
        out
    }

    pub fn sub(&self, other: &Poly, p: u32) -> Poly {
        self.add(&other.scale(p - 1, p), p)
    }

    pub fn mul(&self, other: &Poly, p: u32) -> Poly {
        let mut out = Poly::zero();
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &other.terms {
                let mut key = ka.clone();
                key.extend_from_slice(kb);
                key.sort_unstable();
                out.add_term(key, ca * cb, p);
            }
        }
        out
    }

    /// Evaluates under a full assignment indexed by unknown id.
    pub fn eval(&self, values: &[u32], p: u32) -> u32 {
        let p64 = p as u64;
        let mut acc = 0u64;
        for (k, &c) in &self.terms {
            let mut t = c as u64;
            for &v in k {
                t = t * values[v] as u64 % p64;
            }
            acc = (acc + t) % p64;
        }
        acc as u32
    }

    /// Renders with the given unknown names.
    pub fn render(&self, names: &[String], p: u32) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, &c)| {
                let vars: Vec<&str> = k.iter().map(|&v| names[v].as_str()).collect();
                match (c, vars.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => vars.join("*"),
                    _ if c == p - 1 => format!("-{}", vars.join("*")),
                    _ => format!("{}*{}", c, vars.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_mod_3() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let s = x.add(&y, 3);
        let sq = s.mul(&s, 3);
        // (x + y)^2 = x^2 + 2xy + y^2
        assert_eq!(sq.eval(&[1, 1], 3), 1);
        assert_eq!(sq.eval(&[2, 0], 3), 1);
        assert!(x.sub(&x, 3).is_zero());
        assert_eq!(Poly::constant(4, 3).as_constant(), Some(1));
        assert_eq!(x.scale(3, 3), Poly::zero());
    }
}

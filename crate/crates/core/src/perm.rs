//! Small permutation groups held as explicit element sets.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};

/// Default cap on materialized elements.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000;

/// A permutation of `0..n`, acting on the right: `(p * q)(i) = q(p(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            match seen.get_mut(i as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::Malformed("images do not form a bijection".into())),
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a as usize >= n || b as usize >= n {
                    return Err(Error::Malformed(format!(
                        "point out of range for degree {n}"
                    )));
                }
                images[a as usize] = b;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn compose(&self, then: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| then.apply(i)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self^-1 · other^-1 · self · other`
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Malformed(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        Ok(PermGroup { degree, generators })
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
        }
        if n >= 3 {
            let cycle: Vec<u32> = (0..n as u32).collect();
            gens.push(Permutation::from_cycles(n, &[&cycle]).unwrap());
        }
        PermGroup::new(n, gens).unwrap()
    }

    /// Alternating group generated by the 3-cycles `(0 1 k)`.
    pub fn alternating(n: usize) -> Self {
        let gens = (2..n as u32)
            .map(|k| Permutation::from_cycles(n, &[&[0, 1, k]]).unwrap())
            .collect();
        PermGroup::new(n, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, by breadth-first closure from the identity.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        closure(self.degree, &self.generators, cap).map(|s| s.into_iter().collect())
    }

    pub fn order(&self, cap: usize) -> Result<usize> {
        closure(self.degree, &self.generators, cap).map(|s| s.len())
    }

    /// Elements of the derived subgroup: the normal closure of the
    /// generator commutators.
    pub fn derived_subgroup(&self, cap: usize) -> Result<HashSet<Permutation>> {
        let mut gens: Vec<Permutation> = Vec::new();
        for (i, x) in self.generators.iter().enumerate() {
            for y in &self.generators[i + 1..] {
                let c = x.commutator(y);
                if !c.is_identity() {
                    gens.push(c);
                }
            }
        }
        let mut sub = closure(self.degree, &gens, cap)?;
        loop {
            let missing = gens.iter().flat_map(|h| {
                self.generators
                    .iter()
                    .map(move |x| x.inverse().compose(h).compose(x))
            });
            let fresh: Vec<Permutation> = missing.filter(|c| !sub.contains(c)).collect();
            if fresh.is_empty() {
                return Ok(sub);
            }
            gens.extend(fresh);
            sub = closure(self.degree, &gens, cap)?;
        }
    }

    /// Whether the group equals its commutator subgroup.
    pub fn is_perfect(&self, cap: usize) -> Result<bool> {
        let order = self.order(cap)?;
        Ok(self.derived_subgroup(cap)?.len() == order)
    }
}

fn closure(degree: usize, gens: &[Permutation], cap: usize) -> Result<HashSet<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.compose(g);
            if !seen.contains(&q) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                seen.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = DEFAULT_ELEMENT_CAP;

    /// Oracle: derived subgroup as the closure of all pairwise commutators
    /// of all elements.
    fn brute_force_perfect(g: &PermGroup) -> bool {
        let elems = g.elements(CAP).unwrap();
        let comms: Vec<Permutation> = elems
            .iter()
            .flat_map(|x| elems.iter().map(move |y| x.commutator(y)))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        closure(g.degree(), &comms, CAP).unwrap().len() == elems.len()
    }

    #[test]
    fn a5_is_perfect() {
        let a = Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let b = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        let a5 = PermGroup::new(5, vec![a, b]).unwrap();
        assert_eq!(a5.order(CAP).unwrap(), 60);
        assert!(a5.is_perfect(CAP).unwrap());
        assert!(brute_force_perfect(&a5));
    }

    #[test]
    fn s3_is_not_perfect() {
        let s3 = PermGroup::symmetric(3);
        assert_eq!(s3.derived_subgroup(CAP).unwrap().len(), 3);
        assert!(!s3.is_perfect(CAP).unwrap());
        assert!(!brute_force_perfect(&s3));
    }

    #[test]
    fn trivial_group_is_perfect() {
        assert!(PermGroup::new(4, vec![]).unwrap().is_perfect(CAP).unwrap());
        let id = PermGroup::new(3, vec![Permutation::identity(3)]).unwrap();
        assert!(id.is_perfect(CAP).unwrap());
    }

    #[test]
    fn alternating_and_symmetric_families() {
        for n in [5, 6, 7] {
            assert!(PermGroup::alternating(n).is_perfect(CAP).unwrap(), "A{n}");
        }
        for n in [3, 4, 5] {
            assert!(!PermGroup::symmetric(n).is_perfect(CAP).unwrap(), "S{n}");
        }
        assert!(!PermGroup::alternating(4).is_perfect(CAP).unwrap());
        assert!(!brute_force_perfect(&PermGroup::alternating(4)));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            PermGroup::symmetric(6).order(100),
            Err(Error::CapExceeded(100))
        );
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }
}

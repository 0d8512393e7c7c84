//! Finitely generated permutation groups via a deterministic Schreier-Sims
//! stabilizer chain.
//!
//! Base points are chosen as the smallest point moved by the generator that
//! forced the extension, so the chain (and everything derived from it) is
//! reproducible run to run.

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorial::FrequencyVector;
use crate::perm::Permutation;

/// Default cap on explicit orbit expansion.
pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    // u_x and its inverse, with u_x(base) = x
    transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: Vec::new(),
        };
        level.rebuild(degree);
        level
    }

    fn rebuild(&mut self, degree: usize) {
        let id = Permutation::identity(degree);
        self.transversal = vec![None; degree];
        self.transversal[self.base] = Some((id.clone(), id));
        self.orbit = vec![self.base];
        let mut head = 0;
        while head < self.orbit.len() {
            let x = self.orbit[head];
            head += 1;
            let ux = self.transversal[x].as_ref().unwrap().0.clone();
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y].is_none() {
                    let uy = s.compose_unchecked(&ux);
                    let inv = uy.inverse();
                    self.transversal[y] = Some((uy, inv));
                    self.orbit.push(y);
                }
            }
        }
    }
}

/// A permutation group given by generators, with its stabilizer chain.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let mut group = PermGroup {
            degree,
            generators,
            levels: Vec::new(),
        };
        group.schreier_sims();
        Ok(group)
    }

    /// Group generated by `gens`; all must share a degree. An empty list gives the
    /// trivial group on zero points.
    pub fn from_generators(gens: &[Permutation]) -> Result<Self> {
        let degree = gens.first().map_or(0, Permutation::degree);
        Self::new(degree, gens.to_vec())
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    fn schreier_sims(&mut self) {
        let mut base: Vec<usize> = Vec::new();
        let strong: Vec<Permutation> = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        for g in &strong {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved_point().expect("non-identity"));
            }
        }
        self.levels = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let mut level = Level::new(b, self.degree);
                level.gens = strong
                    .iter()
                    .filter(|g| base[..i].iter().all(|&c| g.apply(c) == c))
                    .cloned()
                    .collect();
                level.rebuild(self.degree);
                level
            })
            .collect();

        let mut i = self.levels.len();
        while i > 0 {
            let level = i - 1;
            match self.failing_schreier_generator(level) {
                None => i -= 1,
                Some((residue, depth)) => {
                    if depth == self.levels.len() {
                        let b = residue.first_moved_point().expect("non-identity residue");
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for l in level + 1..=depth {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].rebuild(self.degree);
                    }
                    i = depth + 1;
                }
            }
        }
    }

    /// First Schreier generator of `level` that does not sift through the deeper
    /// levels, with the depth where sifting stopped.
    fn failing_schreier_generator(&self, level: usize) -> Option<(Permutation, usize)> {
        let lv = &self.levels[level];
        for &x in &lv.orbit {
            let ux = &lv.transversal[x].as_ref().unwrap().0;
            for s in &lv.gens {
                let y = s.apply(x);
                let uy_inv = &lv.transversal[y].as_ref().unwrap().1;
                let schreier = uy_inv.compose_unchecked(&s.compose_unchecked(ux));
                let (residue, depth) = self.strip(level + 1, schreier);
                if depth < self.levels.len() || !residue.is_identity() {
                    return Some((residue, depth));
                }
            }
        }
        None
    }

    fn strip(&self, from: usize, mut g: Permutation) -> (Permutation, usize) {
        for (j, lv) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply(lv.base);
            match &lv.transversal[x] {
                Some((_, inv)) => g = inv.compose_unchecked(&g),
                None => return (g, j),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Sizes of the basic orbits along the chain.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        let (residue, depth) = self.strip(0, p.clone());
        Ok(depth == self.levels.len() && residue.is_identity())
    }

    /// Every element, in the order induced by the chain.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::resource(format!(
                "group of order {order} exceeds element cap {cap}"
            )));
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for lv in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lv.orbit.len());
            for &x in &lv.orbit {
                let u = &lv.transversal[x].as_ref().unwrap().0;
                next.extend(out.iter().map(|g| u.compose_unchecked(g)));
            }
            out = next;
        }
        Ok(out)
    }

    /// Orbit of a single point, sorted.
    pub fn point_orbit(&self, point: usize) -> Vec<usize> {
        point_orbit(&self.generators, point)
    }

    pub fn report(&self) -> GroupReport {
        GroupReport {
            degree: self.degree,
            order: self.order().to_string(),
            num_generators: self.generators.len(),
        }
    }
}

/// Summary of a group as exchanged in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub degree: usize,
    pub order: String,
    pub num_generators: usize,
}

pub fn group_order(gens: &[Permutation]) -> Result<BigUint> {
    Ok(PermGroup::from_generators(gens)?.order())
}

pub fn point_orbit(gens: &[Permutation], point: usize) -> Vec<usize> {
    let mut seen = HashSet::from([point]);
    let mut queue = VecDeque::from([point]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<usize> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Orbit of a vector under coordinate permutation `v ↦ v ∘ g⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorOrbit<T> {
    /// Members in ascending lexicographic order.
    pub members: Vec<Vec<T>>,
}

impl<T> VectorOrbit<T> {
    /// Lexicographically smallest member.
    pub fn representative(&self) -> &[T] {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn vector_orbit<T>(v: &[T], gens: &[Permutation], cap: usize) -> Result<VectorOrbit<T>>
where
    T: Clone + Ord + Hash,
{
    if let Some(g) = gens.iter().find(|g| g.degree() != v.len()) {
        return Err(Error::DegreeMismatch {
            expected: v.len(),
            found: g.degree(),
        });
    }
    let mut seen: HashSet<Vec<T>> = HashSet::from([v.to_vec()]);
    let mut queue = VecDeque::from([v.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let image = g.act_on(&w);
            if !seen.contains(&image) {
                if seen.len() >= cap {
                    return Err(Error::resource(format!("orbit exceeds cap of {cap} vectors")));
                }
                seen.insert(image.clone());
                queue.push_back(image);
            }
        }
    }
    let mut members: Vec<Vec<T>> = seen.into_iter().collect();
    members.sort_unstable();
    Ok(VectorOrbit { members })
}

/// Orbit of a frequency vector, returned as frequency vectors in lexicographic order.
pub fn orbit_of_vector(
    f: &FrequencyVector,
    gens: &[Permutation],
    cap: usize,
) -> Result<Vec<FrequencyVector>> {
    let orbit = vector_orbit(f.counts(), gens, cap)?;
    orbit
        .members
        .into_iter()
        .map(|m| FrequencyVector::new(f.k(), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symmetric_gens(n: usize) -> Vec<Permutation> {
        vec![
            Permutation::from_cycles(n, &[&[0, 1]]).unwrap(),
            Permutation::from_fn(n, |i| (i + 1) % n).unwrap(),
        ]
    }

    fn factorial(n: u64) -> BigUint {
        (1..=n).map(BigUint::from).product()
    }

    #[test]
    fn trivial_and_symmetric_orders() {
        assert_eq!(group_order(&[]).unwrap(), BigUint::from(1u32));
        assert_eq!(group_order(&[Permutation::identity(5)]).unwrap(), BigUint::from(1u32));
        for n in 2..=10 {
            assert_eq!(group_order(&symmetric_gens(n)).unwrap(), factorial(n as u64));
        }
        // S_64 overflows u64 comfortably
        assert_eq!(group_order(&symmetric_gens(30)).unwrap(), factorial(30));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let gens = vec![Permutation::identity(3), Permutation::identity(4)];
        assert!(PermGroup::from_generators(&gens).is_err());
        let g = PermGroup::from_generators(&symmetric_gens(4)).unwrap();
        assert!(g.contains(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn membership() {
        // dihedral group of the square
        let rot = Permutation::from_images(vec![1, 2, 3, 0]).unwrap();
        let refl = Permutation::from_images(vec![0, 3, 2, 1]).unwrap();
        let d4 = PermGroup::from_generators(&[rot.clone(), refl.clone()]).unwrap();
        assert_eq!(d4.order(), BigUint::from(8u32));
        assert!(d4.contains(&rot).unwrap());
        assert!(d4.contains(&refl).unwrap());
        assert!(d4.contains(&Permutation::identity(4)).unwrap());
        assert!(!d4.contains(&Permutation::from_cycles(4, &[&[0, 1]]).unwrap()).unwrap());
        let elems = d4.elements(100).unwrap();
        assert_eq!(elems.len(), 8);
        assert_eq!(elems.iter().collect::<HashSet<_>>().len(), 8);
        assert!(d4.elements(7).is_err());
    }

    #[test]
    fn vector_orbits() {
        let gens = symmetric_gens(4);
        let constant = vector_orbit(&[2, 2, 2, 2], &gens, 100).unwrap();
        assert_eq!(constant.len(), 1);
        let o = vector_orbit(&[0, 1, 1, 2], &gens, 100).unwrap();
        assert_eq!(o.len(), 12);
        assert_eq!(o.representative(), &[0, 1, 1, 2]);
        assert!(vector_orbit(&[0, 1, 2, 3], &gens, 10).is_err());
    }
}

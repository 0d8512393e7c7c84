//! Permutations of `{0, ..., n-1}` in image-array form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `[0, degree)`; `image[i]` is the image of point `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermutationDoc", into = "PermutationDoc")]
pub struct Permutation {
    image: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PermutationDoc {
    degree: usize,
    image: Vec<u32>,
}

impl TryFrom<PermutationDoc> for Permutation {
    type Error = Error;

    fn try_from(doc: PermutationDoc) -> Result<Self> {
        if doc.image.len() != doc.degree {
            return Err(Error::DegreeMismatch {
                expected: doc.degree,
                found: doc.image.len(),
            });
        }
        Permutation::from_images(doc.image)
    }
}

impl From<Permutation> for PermutationDoc {
    fn from(p: Permutation) -> Self {
        PermutationDoc {
            degree: p.degree(),
            image: p.image,
        }
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            image: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            let x = x as usize;
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::domain(format!(
                    "image array {image:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation { image })
    }

    /// Builds a permutation from point images given by `f`.
    pub fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::from_images((0..degree).map(|i| f(i) as u32).collect())
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1], &[2, 3]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a >= degree || b >= degree {
                    return Err(Error::domain(format!("cycle point outside 0..{degree}")));
                }
                image[a] = b as u32;
            }
        }
        Self::from_images(image)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.image[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&x| self.image[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0u32; self.degree()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x as usize] = i as u32;
        }
        Permutation { image }
    }

    /// Smallest point not fixed, if any.
    pub fn first_moved_point(&self) -> Option<usize> {
        self.image
            .iter()
            .enumerate()
            .find(|(i, &x)| *i != x as usize)
            .map(|(i, _)| i)
    }

    /// Moves coordinates: entry `i` of `v` lands at position `self(i)`,
    /// i.e. the result is `v ∘ self⁻¹`.
    pub fn act_on<T: Clone>(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.degree());
        let mut out = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.image[i] as usize] = x.clone();
        }
        out
    }

    /// Pullback of a column: `v ∘ self`.
    pub fn pullback<T: Clone>(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.degree());
        self.image.iter().map(|&x| v[x as usize].clone()).collect()
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_follows_right_to_left() {
        let a = Permutation::from_cycles(4, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[1, 2]]).unwrap();
        // i ↦ a(b(i)): 0 ↦ 1, 1 ↦ 2, 2 ↦ 0
        assert_eq!(a.compose(&b).unwrap().images(), &[1, 2, 0, 3]);
    }

    #[test]
    fn identity_and_inverse() {
        let p = Permutation::from_images(vec![2, 0, 3, 1]).unwrap();
        let id = Permutation::identity(4);
        assert_eq!(p.compose(&id).unwrap(), p);
        assert_eq!(id.compose(&p).unwrap(), p);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert_eq!(
            p.compose(&Permutation::identity(3)),
            Err(Error::DegreeMismatch { expected: 4, found: 3 })
        );
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
    }

    #[test]
    fn action_and_pullback_are_inverse() {
        let p = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let v = vec!['a', 'b', 'c'];
        assert_eq!(p.act_on(&v), vec!['c', 'a', 'b']);
        assert_eq!(p.pullback(&p.act_on(&v)), v);
    }

    #[test]
    fn json_shape() {
        let p = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"degree":3,"image":[1,0,2]}"#);
        assert_eq!(serde_json::from_str::<Permutation>(&s).unwrap(), p);
        assert!(serde_json::from_str::<Permutation>(r#"{"degree":3,"image":[0,0,1]}"#).is_err());
        assert!(serde_json::from_str::<Permutation>(r#"{"degree":2,"image":[0,1,2]}"#).is_err());
    }

    #[test]
    fn display_cycles() {
        let p = Permutation::from_cycles(5, &[&[0, 1], &[2, 4, 3]]).unwrap();
        assert_eq!(p.to_string(), "(0 1)(2 4 3)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }
}

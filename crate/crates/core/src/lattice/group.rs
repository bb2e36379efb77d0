use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{smith_normal_form, solve_integral, IntMatrix, LatticeError, SolutionSet};

/// Finitely presented abelian group `Z^rank / <relations>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    rank: usize,
    relations: Vec<Vec<BigInt>>,
}

/// Integer coordinates over the generators of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub coordinates: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(coordinates: Vec<BigInt>) -> Self {
        Self { coordinates }
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            coordinates: vec![BigInt::zero(); rank],
        }
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut e = Self::zero(rank);
        e.coordinates[i] = BigInt::one();
        e
    }

    pub fn scaled_add(&mut self, factor: &BigInt, other: &GroupElement) {
        for (a, b) in self.coordinates.iter_mut().zip(&other.coordinates) {
            *a += factor * b;
        }
    }
}

impl GroupPresentation {
    pub fn new(rank: usize, relations: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        if let Some(bad) = relations.iter().find(|r| r.len() != rank) {
            return Err(LatticeError::DimensionMismatch {
                expected: rank,
                found: bad.len(),
            });
        }
        Ok(Self { rank, relations })
    }

    /// `Z/n` on one generator.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self {
            rank: 1,
            relations: vec![vec![n.into()]],
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            relations: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    fn relation_matrix(&self) -> IntMatrix {
        let entries = self.relations.iter().flatten().cloned().collect();
        IntMatrix::new(self.relations.len(), self.rank, entries).expect("relation lengths are checked on construction")
    }

    fn check(&self, x: &GroupElement) -> Result<(), LatticeError> {
        if x.coordinates.len() != self.rank {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank,
                found: x.coordinates.len(),
            });
        }
        Ok(())
    }

    /// Membership of `x` in the relation lattice.
    pub fn element_is_zero(&self, x: &GroupElement) -> Result<bool, LatticeError> {
        self.check(x)?;
        if x.coordinates.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        if self.relations.is_empty() {
            return Ok(false);
        }
        let rt = self.relation_matrix().transpose();
        Ok(!matches!(solve_integral(&rt, &x.coordinates)?, SolutionSet::NoSolution))
    }

    /// Additive order of `x`; `None` when infinite.
    pub fn element_order(&self, x: &GroupElement) -> Result<Option<BigInt>, LatticeError> {
        self.check(x)?;
        if self.relations.is_empty() {
            let zero = x.coordinates.iter().all(Zero::is_zero);
            return Ok(zero.then(BigInt::one));
        }
        let snf = smith_normal_form(&self.relation_matrix());
        // coordinates in the SNF basis: y = x V (x as a row vector)
        let y = snf.v.transpose().mul_vec(&x.coordinates)?;
        let diag = snf.diagonal();
        let mut order = BigInt::one();
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            match diag.get(j) {
                Some(d) if !d.is_zero() => {
                    let part = d / d.gcd(yj);
                    order = order.lcm(&part);
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(order))
    }

    /// Invariant factors `d_i > 1` and the free rank.
    pub fn structure(&self) -> (Vec<BigInt>, usize) {
        if self.relations.is_empty() {
            return (Vec::new(), self.rank);
        }
        let snf = smith_normal_form(&self.relation_matrix());
        let diag = snf.diagonal();
        let torsion: Vec<BigInt> = diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        let free = self.rank - snf.rank();
        (torsion, free)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[i64]) -> GroupElement {
        GroupElement::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn cyclic_four() {
        let p = GroupPresentation::cyclic(4);
        assert!(p.element_is_zero(&el(&[4])).unwrap());
        assert!(!p.element_is_zero(&el(&[2])).unwrap());
        assert_eq!(p.element_order(&el(&[2])).unwrap(), Some(BigInt::from(2)));
        assert_eq!(p.element_order(&el(&[3])).unwrap(), Some(BigInt::from(4)));
    }

    #[test]
    fn diagonal_relation() {
        let p = GroupPresentation::new(2, vec![vec![BigInt::from(2), BigInt::from(-2)]]).unwrap();
        assert!(p.element_is_zero(&el(&[4, -4])).unwrap());
        assert!(!p.element_is_zero(&el(&[1, -1])).unwrap());
        assert_eq!(p.element_order(&el(&[1, -1])).unwrap(), Some(BigInt::from(2)));
        assert_eq!(p.element_order(&el(&[1, 0])).unwrap(), None);
        assert_eq!(p.structure(), (vec![BigInt::from(2)], 1));
    }

    #[test]
    fn free_group() {
        let p = GroupPresentation::free(2);
        assert!(p.element_is_zero(&el(&[0, 0])).unwrap());
        assert!(!p.element_is_zero(&el(&[0, 1])).unwrap());
        assert_eq!(p.element_order(&el(&[0, 1])).unwrap(), None);
    }

    #[test]
    fn dimension_checks() {
        assert!(GroupPresentation::new(2, vec![vec![BigInt::one()]]).is_err());
        assert!(GroupPresentation::cyclic(3).element_is_zero(&el(&[1, 2])).is_err());
    }
}

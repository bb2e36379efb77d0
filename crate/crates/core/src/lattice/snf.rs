use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, LatticeError};

/// `u · m · v = s` with `s` diagonal, nonnegative, and each diagonal entry
/// dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

fn find_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..s.rows() {
        for c in t..s.cols() {
            let x = s.get(r, c);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            // strict comparison: the first occurrence in row-major order wins ties
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((r, c, a));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    'diag: for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = find_pivot(&s, t) else {
                break 'diag;
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut clean = true;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t) / s.get(t, t));
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j) / s.get(t, t));
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            let p = s.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, s, v }
}

/// Result of an integral solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionSet {
    NoSolution,
    Solvable {
        particular: Vec<BigInt>,
        /// Basis of the integer kernel, in the column order induced by the SNF.
        kernel: Vec<Vec<BigInt>>,
    },
}

impl SolutionSet {
    pub fn particular(&self) -> Option<&[BigInt]> {
        match self {
            SolutionSet::NoSolution => None,
            SolutionSet::Solvable { particular, .. } => Some(particular),
        }
    }
}

pub fn solve_integral(m: &IntMatrix, rhs: &[BigInt]) -> Result<SolutionSet, LatticeError> {
    if rhs.len() != m.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: m.rows(),
            found: rhs.len(),
        });
    }
    let snf = smith_normal_form(m);
    let w = snf.u.mul_vec(rhs)?;
    let diag = snf.diagonal();
    let rank = snf.rank();
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..rank {
        let (q, r) = w[i].div_rem(&diag[i]);
        if !r.is_zero() {
            return Ok(SolutionSet::NoSolution);
        }
        y[i] = q;
    }
    if w[rank..].iter().any(|x| !x.is_zero()) {
        return Ok(SolutionSet::NoSolution);
    }
    let particular = snf.v.mul_vec(&y)?;
    let kernel = (rank..m.cols())
        .map(|c| (0..m.cols()).map(|r| snf.v.get(r, c).clone()).collect())
        .collect();
    Ok(SolutionSet::Solvable { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(m: &IntMatrix) -> SnfDecomposition {
        let d = smith_normal_form(m);
        assert_eq!(d.u.mul(m).unwrap().mul(&d.v).unwrap(), d.s);
        assert!(d.u.is_unimodular() && d.v.is_unimodular());
        let diag = d.diagonal();
        for w in diag.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && w[1].is_multiple_of(&w[0]));
        }
        d
    }

    #[test]
    fn identity_is_fixed() {
        let d = check(&IntMatrix::identity(2));
        assert_eq!(d.u, IntMatrix::identity(2));
        assert_eq!(d.v, IntMatrix::identity(2));
        assert_eq!(d.s, IntMatrix::identity(2));
    }

    #[test]
    fn diag_two_three() {
        let d = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(d.diagonal(), big(&[1, 6]));
    }

    #[test]
    fn zero_one_by_one() {
        let d = check(&IntMatrix::zeros(1, 1));
        assert_eq!(d.diagonal(), big(&[0]));
    }

    #[test]
    fn rectangular_and_negative() {
        let d = check(&IntMatrix::from_rows(&[vec![-4, 6, 2], vec![2, -2, 8]]));
        assert_eq!(d.diagonal(), big(&[2, 2]));
        check(&IntMatrix::from_rows(&[vec![0, 0], vec![0, -7], vec![5, 0]]));
    }

    #[test]
    fn solve_cycle_laplacian() {
        let l = IntMatrix::from_rows(&[
            vec![-2, 1, 0, 1],
            vec![1, -2, 1, 0],
            vec![0, 1, -2, 1],
            vec![1, 0, 1, -2],
        ]);
        match solve_integral(&l, &big(&[-4, 4, 0, 0])).unwrap() {
            SolutionSet::Solvable { particular, kernel } => {
                assert_eq!(l.mul_vec(&particular).unwrap(), big(&[-4, 4, 0, 0]));
                assert_eq!(kernel.len(), 1);
                let k = &kernel[0];
                assert!(k.iter().all(|x| x == &k[0]) && !k[0].is_zero());
                let shift = &particular[0];
                let normalized: Vec<BigInt> = particular.iter().map(|x| x - shift).collect();
                assert_eq!(normalized, big(&[0, -3, -2, -1]));
            }
            SolutionSet::NoSolution => panic!("expected a solution"),
        }
    }

    #[test]
    fn trivial_systems() {
        let z = IntMatrix::zeros(1, 1);
        assert_eq!(
            solve_integral(&z, &big(&[0])).unwrap(),
            SolutionSet::Solvable {
                particular: big(&[0]),
                kernel: vec![big(&[1])]
            }
        );
        assert_eq!(solve_integral(&z, &big(&[1])).unwrap(), SolutionSet::NoSolution);
        assert!(matches!(
            solve_integral(&z, &big(&[1, 2])),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-5i64..=5, r * c)
                .prop_map(move |e| IntMatrix::new(r, c, e.into_iter().map(BigInt::from).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn snf_is_a_valid_decomposition(m in small_matrix()) {
            let d = smith_normal_form(&m);
            prop_assert_eq!(d.u.mul(&m).unwrap().mul(&d.v).unwrap(), d.s.clone());
            prop_assert!(d.u.is_unimodular());
            prop_assert!(d.v.is_unimodular());
            let diag = d.diagonal();
            for (i, x) in diag.iter().enumerate() {
                prop_assert!(!x.is_negative());
                if let Some(next) = diag.get(i + 1) {
                    let ok = if x.is_zero() { next.is_zero() } else { next.is_multiple_of(x) };
                    prop_assert!(ok);
                }
            }
            for r in 0..d.s.rows() {
                for c in 0..d.s.cols() {
                    if r != c { prop_assert!(d.s.get(r, c).is_zero()); }
                }
            }
        }

        #[test]
        fn image_vectors_are_solvable(m in small_matrix(), seed in proptest::collection::vec(-4i64..=4, 5)) {
            let x: Vec<BigInt> = seed[..m.cols()].iter().map(|&v| BigInt::from(v)).collect();
            let rhs = m.mul_vec(&x).unwrap();
            match solve_integral(&m, &rhs).unwrap() {
                SolutionSet::Solvable { particular, kernel } => {
                    prop_assert_eq!(m.mul_vec(&particular).unwrap(), rhs);
                    for k in kernel {
                        prop_assert!(m.mul_vec(&k).unwrap().iter().all(Zero::is_zero));
                    }
                }
                SolutionSet::NoSolution => prop_assert!(false, "image vector reported unsolvable"),
            }
        }
    }
}

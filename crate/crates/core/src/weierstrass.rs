//! Limit Weierstrass points on chains of elliptic curves, and a table of
//! known answers for marked points on general curves of a stratum.
//!
//! Chain `E_1 - ... - E_g` with nodes `q_i = E_i ∩ E_{i+1}` and the marked
//! point `q_g` on `E_g`; `t_i` is the torsion order of `q_{i-1} - q_i` on
//! `E_i`. The last node is a limit Weierstrass point iff there is a sequence
//! `g = k_g ≥ ... ≥ k_1 ≥ 2` where each equal step `k_i = k_{i-1}` has
//! `t_i | k_i`; strict steps are always effective on an elliptic curve.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::strata::{genus_of, Signature, StrataError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("chain genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("expected {expected} torsion orders t_2..t_g, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("torsion order t_{index} must be positive")]
    NonPositiveTorsion { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainInput {
    pub g: usize,
    /// `t_2, ..., t_g`; `None` is infinite order.
    pub torsion: Vec<Option<BigInt>>,
}

impl ChainInput {
    pub fn new(g: usize, torsion: Vec<Option<BigInt>>) -> Result<Self, ChainError> {
        if g < 2 {
            return Err(ChainError::GenusTooSmall(g));
        }
        if torsion.len() != g - 1 {
            return Err(ChainError::WrongLength {
                expected: g - 1,
                found: torsion.len(),
            });
        }
        for (i, t) in torsion.iter().enumerate() {
            if t.as_ref().is_some_and(|t| !t.is_positive()) {
                return Err(ChainError::NonPositiveTorsion { index: i + 2 });
            }
        }
        Ok(Self { g, torsion })
    }

    /// `t_i` for `2 ≤ i ≤ g`.
    pub fn t(&self, i: usize) -> Option<&BigInt> {
        self.torsion[i - 2].as_ref()
    }

    /// Whether the step `k_{i-1} = k_i = k` is allowed.
    fn equal_step_ok(&self, i: usize, k: usize) -> bool {
        self.t(i).is_some_and(|t| (BigInt::from(k) % t).is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainAnswer {
    pub is_weierstrass: bool,
    /// `k_1, ..., k_g` when the answer is positive.
    pub witness: Option<Vec<usize>>,
}

/// Dynamic programming from `k_g = g` down to `k_1`.
pub fn chain_is_limit_weierstrass(input: &ChainInput) -> ChainAnswer {
    let g = input.g;
    // reach[i][k]: some valid k_i..k_g exists with k_i = k; parent stores k_{i+1}
    let mut parent = vec![vec![None::<usize>; g + 1]; g + 1];
    let mut reach = vec![vec![false; g + 1]; g + 1];
    reach[g][g] = true;
    for i in (2..=g).rev() {
        for k in 2..=g {
            if !reach[i][k] {
                continue;
            }
            for prev in 2..=k {
                if reach[i - 1][prev] {
                    continue;
                }
                if prev < k || input.equal_step_ok(i, k) {
                    reach[i - 1][prev] = true;
                    parent[i - 1][prev] = Some(k);
                }
            }
        }
    }
    let Some(start) = (2..=g).find(|&k| reach[1][k]) else {
        return ChainAnswer {
            is_weierstrass: false,
            witness: None,
        };
    };
    let mut seq = vec![start];
    let mut k = start;
    for row in &parent[1..g] {
        k = row[k].expect("reachable chain has a parent");
        seq.push(k);
    }
    ChainAnswer {
        is_weierstrass: true,
        witness: Some(seq),
    }
}

/// Checks a candidate `k_1..k_g` against the criterion.
pub fn is_valid_witness(input: &ChainInput, k: &[usize]) -> bool {
    let g = input.g;
    if k.len() != g || k[g - 1] != g || k[0] < 2 {
        return false;
    }
    (2..=g).all(|i| {
        let (lo, hi) = (k[i - 2], k[i - 1]);
        lo < hi || (lo == hi && input.equal_step_ok(i, hi))
    })
}

/// The witness used when some `t_i | i`: `k_j = j + 1` below `i`, `k_l = l` from `i` on.
pub fn divisibility_witness(input: &ChainInput) -> Option<Vec<usize>> {
    let i = (2..=input.g).find(|&i| input.t(i).is_some_and(|t| (BigInt::from(i) % t).is_zero()))?;
    Some((1..=input.g).map(|j| if j < i { j + 1 } else { j }).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratumComponent {
    Hyperelliptic,
    NonHyperelliptic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeierstrassFact {
    NotWeierstrass {
        citation: &'static str,
    },
    Weierstrass {
        citation: &'static str,
    },
    /// Not Weierstrass, provided every hypothesis holds.
    Conditional {
        hypotheses: Vec<String>,
        citation: &'static str,
    },
    OutOfScope,
}

impl WeierstrassFact {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeierstrassFact::NotWeierstrass { .. } => "not-weierstrass",
            WeierstrassFact::Weierstrass { .. } => "weierstrass",
            WeierstrassFact::Conditional { .. } => "conditional",
            WeierstrassFact::OutOfScope => "out-of-scope",
        }
    }
}

impl fmt::Display for WeierstrassFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactError {
    #[error("index {index} out of range for a signature of length {len}")]
    BadIndex { index: usize, len: usize },
    #[error(transparent)]
    Strata(#[from] StrataError),
}

/// Whether the marked point `index` of a general curve in the given
/// component of `P(μ)` is a Weierstrass point, where known.
pub fn generic_nonweierstrass(
    mu: &Signature,
    component: StratumComponent,
    index: usize,
) -> Result<WeierstrassFact, FactError> {
    use WeierstrassFact::*;
    let orders = mu.orders();
    let order = orders.get(index).ok_or(FactError::BadIndex {
        index,
        len: orders.len(),
    })?;
    let g = genus_of(mu)?;
    if g <= 1 {
        return Ok(NotWeierstrass {
            citation: "genus-at-most-one",
        });
    }
    if order.is_zero() {
        return Ok(OutOfScope);
    }
    let gb = BigInt::from(g);
    if mu.is_holomorphic() && *order >= gb {
        return Ok(Weierstrass {
            citation: "riemann-roch",
        });
    }
    let nonzero: Vec<&BigInt> = orders.iter().filter(|k| !k.is_zero()).collect();
    let zeros: Vec<&BigInt> = nonzero.iter().copied().filter(|k| k.is_positive()).collect();
    let poles: Vec<&BigInt> = nonzero.iter().copied().filter(|k| k.is_negative()).collect();
    let is_zero = order.is_positive();
    match component {
        StratumComponent::Hyperelliptic => {
            let pair = |v: &[&BigInt]| v.len() == 2 && v[0] == v[1];
            let single_even = |v: &[&BigInt]| v.len() == 1 && v[0].is_even();
            let shape_ok = if poles.is_empty() {
                (zeros.len() == 1 && *zeros[0] == BigInt::from(2 * g - 2))
                    || (pair(&zeros) && *zeros[0] == BigInt::from(g - 1))
            } else {
                (single_even(&zeros) || pair(&zeros)) && (single_even(&poles) || pair(&poles))
            };
            if !shape_ok {
                return Ok(OutOfScope);
            }
            // a lone zero or pole is fixed by the involution; a pair is swapped
            let group = if is_zero { &zeros } else { &poles };
            Ok(if group.len() == 1 {
                Weierstrass {
                    citation: "hyperelliptic-involution",
                }
            } else {
                NotWeierstrass {
                    citation: "hyperelliptic-involution",
                }
            })
        }
        StratumComponent::NonHyperelliptic => {
            if !poles.is_empty() && is_zero {
                return Ok(NotWeierstrass {
                    citation: "zero-of-meromorphic",
                });
            }
            let m = order.abs();
            if (&gb % &m).is_zero() {
                return Ok(OutOfScope);
            }
            if is_zero {
                if m < BigInt::from(2) {
                    return Ok(OutOfScope);
                }
                let mut smaller: Vec<String> = orders.iter().map(|k| k.to_string()).collect();
                smaller[index] = (order - BigInt::from(2)).to_string();
                Ok(Conditional {
                    hypotheses: vec![format!(
                        "the point is not Weierstrass on a general curve of P({})",
                        smaller.join(", ")
                    )],
                    citation: "elliptic-tail-zero",
                })
            } else {
                let mut larger: Vec<String> = orders.iter().map(|k| k.to_string()).collect();
                larger[index] = (order - BigInt::from(2)).to_string();
                Ok(Conditional {
                    hypotheses: vec![format!(
                        "the pole is not Weierstrass on a general curve of P({})",
                        larger.join(", ")
                    )],
                    citation: "elliptic-tail-pole",
                })
            }
        }
    }
}

/// Small helper for reports: torsion as text.
pub fn torsion_text(t: &Option<BigInt>) -> String {
    t.as_ref().map_or_else(|| "inf".to_string(), |t| t.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Enumerates every nondecreasing `2 ≤ k_1 ≤ ... ≤ k_g = g`; for testing the DP.
    fn brute_force(input: &ChainInput) -> bool {
        fn rec(input: &ChainInput, seq: &mut Vec<usize>) -> bool {
            let g = input.g;
            if seq.len() == g {
                return is_valid_witness(input, seq);
            }
            let lo = seq.last().copied().unwrap_or(2);
            for k in lo..=g {
                if seq.len() == g - 1 && k != g {
                    continue;
                }
                seq.push(k);
                if rec(input, seq) {
                    return true;
                }
                seq.pop();
            }
            false
        }
        rec(input, &mut Vec::new())
    }

    fn chain(g: usize, t: &[Option<i64>]) -> ChainInput {
        ChainInput::new(g, t.iter().map(|x| x.map(BigInt::from)).collect()).unwrap()
    }

    #[test]
    fn all_infinite_genus_three() {
        let c = chain(3, &[None, None]);
        assert!(!chain_is_limit_weierstrass(&c).is_weierstrass);
        assert!(!brute_force(&c));
    }

    #[test]
    fn genus_two_two_torsion() {
        let c = chain(2, &[Some(2)]);
        let a = chain_is_limit_weierstrass(&c);
        assert!(a.is_weierstrass);
        assert_eq!(a.witness, Some(vec![2, 2]));
    }

    #[test]
    fn input_validation() {
        assert!(ChainInput::new(1, vec![]).is_err());
        assert!(ChainInput::new(3, vec![None]).is_err());
        assert!(ChainInput::new(2, vec![Some(BigInt::zero())]).is_err());
    }

    #[test]
    fn fact_table() {
        use StratumComponent::*;
        let s = |v: &[i64]| Signature::from_i64(v);
        assert!(matches!(
            generic_nonweierstrass(&s(&[4]), Hyperelliptic, 0).unwrap(),
            WeierstrassFact::Weierstrass { .. }
        ));
        assert!(matches!(
            generic_nonweierstrass(&s(&[2, 2]), Hyperelliptic, 1).unwrap(),
            WeierstrassFact::NotWeierstrass { .. }
        ));
        assert!(matches!(
            generic_nonweierstrass(&s(&[5, 1, -2]), NonHyperelliptic, 0).unwrap(),
            WeierstrassFact::NotWeierstrass {
                citation: "zero-of-meromorphic"
            }
        ));
        assert!(matches!(
            generic_nonweierstrass(&s(&[4, -1, -1]), Hyperelliptic, 1).unwrap(),
            WeierstrassFact::NotWeierstrass { .. }
        ));
        assert!(matches!(
            generic_nonweierstrass(&s(&[4, -1, -1]), Hyperelliptic, 0).unwrap(),
            WeierstrassFact::Weierstrass { .. }
        ));
        assert!(matches!(
            generic_nonweierstrass(&s(&[3, 3, -2]), Hyperelliptic, 2).unwrap(),
            WeierstrassFact::Weierstrass { .. }
        ));
        assert!(matches!(
            generic_nonweierstrass(&s(&[3, 1]), NonHyperelliptic, 1).unwrap(),
            WeierstrassFact::OutOfScope
        ));
        assert!(matches!(
            generic_nonweierstrass(&s(&[2, 1, 1]), NonHyperelliptic, 0).unwrap(),
            WeierstrassFact::Conditional { .. }
        ));
        assert!(matches!(
            generic_nonweierstrass(&s(&[4]), NonHyperelliptic, 1),
            Err(FactError::BadIndex { .. })
        ));
    }

    fn torsion_entry() -> impl Strategy<Value = Option<i64>> {
        prop_oneof![Just(None), (1i64..=6).prop_map(Some)]
    }

    proptest! {
        #[test]
        fn dp_matches_brute_force(g in 2usize..=8, t in proptest::collection::vec(torsion_entry(), 7)) {
            let c = chain(g, &t[..g - 1]);
            let a = chain_is_limit_weierstrass(&c);
            prop_assert_eq!(a.is_weierstrass, brute_force(&c));
            if let Some(w) = &a.witness {
                prop_assert!(is_valid_witness(&c, w));
            }
            if let Some(w) = divisibility_witness(&c) {
                prop_assert!(is_valid_witness(&c, &w));
                prop_assert!(a.is_weierstrass);
            }
        }

        #[test]
        fn refining_torsion_never_loses(g in 2usize..=7, t in proptest::collection::vec(1i64..=6, 6), at in 0usize..6, div in 1i64..=6) {
            let base: Vec<Option<i64>> = t[..g - 1].iter().map(|x| Some(*x)).collect();
            let idx = at % (g - 1);
            let mut finer = base.clone();
            let old = base[idx].unwrap();
            prop_assume!(old % div == 0);
            finer[idx] = Some(div);
            let before = chain_is_limit_weierstrass(&chain(g, &base)).is_weierstrass;
            let after = chain_is_limit_weierstrass(&chain(g, &finer)).is_weierstrass;
            prop_assert!(!before || after);
        }
    }
}

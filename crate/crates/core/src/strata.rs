//! Signatures of zero and pole orders: genus, dimension, component labels,
//! and the split/merge moves between strata.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error("signature sum {0} is odd")]
    OddSum(BigInt),
    #[error("signature sum {0} is below -2")]
    NegativeGenus(BigInt),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("entry {index} (order {order}) is not a pole")]
    NotAPole { index: usize, order: BigInt },
    #[error("index {index} out of range for a signature of length {len}")]
    BadIndex { index: usize, len: usize },
    #[error("genus does not fit in a machine integer")]
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    orders: Vec<BigInt>,
}

impl Signature {
    pub fn new(orders: Vec<BigInt>) -> Self {
        Self { orders }
    }

    pub fn from_i64(orders: &[i64]) -> Self {
        Self::new(orders.iter().map(|&k| BigInt::from(k)).collect())
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn sum(&self) -> BigInt {
        self.orders.iter().sum()
    }

    /// No poles.
    pub fn is_holomorphic(&self) -> bool {
        !self.orders.iter().any(|k| k.is_negative())
    }

    pub fn zero_count(&self) -> usize {
        self.orders.iter().filter(|k| !k.is_negative()).count()
    }

    pub fn pole_count(&self) -> usize {
        self.orders.iter().filter(|k| k.is_negative()).count()
    }

    pub fn all_even(&self) -> bool {
        self.orders.iter().all(|k| k.is_even())
    }

    pub fn genus(&self) -> Result<i64, StrataError> {
        genus_of(self)
    }

    fn without_zeros(&self) -> Vec<BigInt> {
        self.orders.iter().filter(|k| !k.is_zero()).cloned().collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentLabel {
    Hyperelliptic,
    OddSpin,
    EvenSpin,
    Nonhyperelliptic,
    Unlabeled,
}

impl ComponentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentLabel::Hyperelliptic => "hyp",
            ComponentLabel::OddSpin => "odd",
            ComponentLabel::EvenSpin => "even",
            ComponentLabel::Nonhyperelliptic => "nonhyp",
            ComponentLabel::Unlabeled => "unlabeled",
        }
    }
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn genus_of(mu: &Signature) -> Result<i64, StrataError> {
    let s = mu.sum();
    if s.is_odd() {
        return Err(StrataError::OddSum(s));
    }
    if s < BigInt::from(-2) {
        return Err(StrataError::NegativeGenus(s));
    }
    let g: BigInt = (s + 2) / 2;
    g.to_i64().ok_or(StrataError::Overflow)
}

/// `2g + n - 1` without poles, `2g - 2 + n` with; one less when projectivized.
pub fn stratum_dimension(mu: &Signature, projectivized: bool) -> Result<i64, StrataError> {
    let g = genus_of(mu)?;
    let n = mu.len() as i64;
    let affine = if mu.is_holomorphic() {
        2 * g + n - 1
    } else {
        2 * g - 2 + n
    };
    Ok(affine - i64::from(projectivized))
}

/// Shapes whose strata carry a hyperelliptic component.
fn hyperelliptic_shape(orders: &[BigInt], g: i64) -> bool {
    let zeros: Vec<&BigInt> = orders.iter().filter(|k| k.is_positive()).collect();
    let poles: Vec<&BigInt> = orders.iter().filter(|k| k.is_negative()).collect();
    if poles.is_empty() {
        return match zeros.as_slice() {
            [a] => g >= 2 && **a == BigInt::from(2 * g - 2),
            [a, b] => g >= 2 && a == b && **a == BigInt::from(g - 1),
            _ => false,
        };
    }
    let zero_ok = match zeros.as_slice() {
        [a] => a.is_even(),
        [a, b] => a == b,
        _ => false,
    };
    let pole_ok = match poles.as_slice() {
        [p] => p.is_even(),
        [p, q] => p == q,
        _ => false,
    };
    zero_ok && pole_ok
}

/// Labels stated for a signature; order-0 entries are ignored.
pub fn component_labels(mu: &Signature) -> Result<Vec<ComponentLabel>, StrataError> {
    use ComponentLabel::*;
    let g = genus_of(mu)?;
    let orders = mu.without_zeros();
    if orders.is_empty() || g < 2 {
        return Ok(vec![Unlabeled]);
    }
    let holomorphic = orders.iter().all(|k| k.is_positive());
    let hyp = hyperelliptic_shape(&orders, g);
    let zeros_even = orders.iter().filter(|k| k.is_positive()).all(|k| k.is_even());
    let mut labels = Vec::new();
    if holomorphic {
        let spin = zeros_even;
        match (g, hyp, spin) {
            (2, true, _) => labels.push(Hyperelliptic),
            // the even component coincides with the hyperelliptic one
            (3, true, true) => labels.extend([Hyperelliptic, OddSpin]),
            (3, false, true) => labels.extend([OddSpin, EvenSpin]),
            (_, true, true) => labels.extend([Hyperelliptic, OddSpin, EvenSpin]),
            (_, false, true) => labels.extend([OddSpin, EvenSpin]),
            (_, true, false) => labels.extend([Hyperelliptic, Nonhyperelliptic]),
            (_, false, false) => {}
        }
    } else {
        let poles: Vec<&BigInt> = orders.iter().filter(|k| k.is_negative()).collect();
        let minus_one = BigInt::from(-1);
        let spin = zeros_even
            && (poles.iter().all(|p| p.is_even()) || (poles.len() == 2 && poles.iter().all(|p| **p == minus_one)));
        if hyp {
            labels.push(Hyperelliptic);
        }
        if spin {
            labels.extend([OddSpin, EvenSpin]);
        } else if hyp {
            labels.push(Nonhyperelliptic);
        }
    }
    if labels.is_empty() {
        labels.push(Unlabeled);
    }
    Ok(labels)
}

/// `boundary` lies in the closure of `generic`; `result` is what the move produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    pub result: Signature,
    pub boundary: Signature,
    pub generic: Signature,
}

/// Breaks a zero into several; the unsplit stratum lies in the closure of the split one.
pub fn split_zero(mu: &Signature, index: usize, parts: &[BigInt]) -> Result<Adjacency, StrataError> {
    let order = mu
        .orders
        .get(index)
        .ok_or(StrataError::BadIndex { index, len: mu.len() })?;
    if !order.is_positive() {
        return Err(StrataError::BadPartition(format!(
            "entry {index} = {order} is not a zero"
        )));
    }
    if parts.is_empty() || parts.iter().any(|p| !p.is_positive()) {
        return Err(StrataError::BadPartition("parts must be positive".into()));
    }
    let total: BigInt = parts.iter().sum();
    if &total != order {
        return Err(StrataError::BadPartition(format!(
            "parts sum to {total}, expected {order}"
        )));
    }
    let mut out = mu.orders[..index].to_vec();
    out.extend_from_slice(parts);
    out.extend_from_slice(&mu.orders[index + 1..]);
    let result = Signature::new(out);
    Ok(Adjacency {
        boundary: mu.clone(),
        generic: result.clone(),
        result,
    })
}

/// Merges two poles; the merged stratum lies in the closure of the original.
pub fn merge_poles(mu: &Signature, i: usize, j: usize) -> Result<Adjacency, StrataError> {
    for idx in [i, j] {
        let k = mu.orders.get(idx).ok_or(StrataError::BadIndex {
            index: idx,
            len: mu.len(),
        })?;
        if !k.is_negative() {
            return Err(StrataError::NotAPole {
                index: idx,
                order: k.clone(),
            });
        }
    }
    if i == j {
        return Err(StrataError::BadPartition("cannot merge a pole with itself".into()));
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let mut out = mu.orders.clone();
    let merged = &out[lo] + &out[hi];
    out.remove(hi);
    out[lo] = merged;
    let result = Signature::new(out);
    Ok(Adjacency {
        boundary: result.clone(),
        generic: mu.clone(),
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ComponentLabel::*;

    fn sig(v: &[i64]) -> Signature {
        Signature::from_i64(v)
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus_of(&sig(&[4])).unwrap(), 3);
        assert_eq!(genus_of(&sig(&[1, 1])).unwrap(), 2);
        assert_eq!(genus_of(&sig(&[2, -2])).unwrap(), 1);
        assert!(matches!(genus_of(&sig(&[3])), Err(StrataError::OddSum(_))));
        assert!(matches!(genus_of(&sig(&[-4])), Err(StrataError::NegativeGenus(_))));
    }

    #[test]
    fn dimensions() {
        assert_eq!(stratum_dimension(&sig(&[4]), true).unwrap(), 5);
        assert_eq!(stratum_dimension(&sig(&[4]), false).unwrap(), 6);
        assert_eq!(stratum_dimension(&sig(&[2, -2]), false).unwrap(), 2);
        assert_eq!(stratum_dimension(&sig(&[0]), false).unwrap(), 2);
    }

    #[test]
    fn labels() {
        assert_eq!(component_labels(&sig(&[4])).unwrap(), vec![Hyperelliptic, OddSpin]);
        assert_eq!(component_labels(&sig(&[2, 2])).unwrap(), vec![Hyperelliptic, OddSpin]);
        assert_eq!(component_labels(&sig(&[3, 1])).unwrap(), vec![Unlabeled]);
        assert_eq!(component_labels(&sig(&[2])).unwrap(), vec![Hyperelliptic]);
        assert_eq!(component_labels(&sig(&[1, 1])).unwrap(), vec![Hyperelliptic]);
        assert_eq!(
            component_labels(&sig(&[6])).unwrap(),
            vec![Hyperelliptic, OddSpin, EvenSpin]
        );
        assert_eq!(
            component_labels(&sig(&[3, 3])).unwrap(),
            vec![Hyperelliptic, Nonhyperelliptic]
        );
        assert_eq!(component_labels(&sig(&[4, 2])).unwrap(), vec![OddSpin, EvenSpin]);
        assert_eq!(component_labels(&sig(&[4, 0])).unwrap(), vec![Hyperelliptic, OddSpin]);
        assert_eq!(component_labels(&sig(&[2, -2])).unwrap(), vec![Unlabeled]);
        assert_eq!(
            component_labels(&sig(&[3, 3, -2, -2])).unwrap(),
            vec![Hyperelliptic, Nonhyperelliptic]
        );
        assert_eq!(
            component_labels(&sig(&[6, -1, -1])).unwrap(),
            vec![Hyperelliptic, OddSpin, EvenSpin]
        );
        assert_eq!(component_labels(&sig(&[3, 2, -1])).unwrap(), vec![Unlabeled]);
    }

    #[test]
    fn split_and_merge() {
        let a = split_zero(&sig(&[4]), 0, &[2.into(), 2.into()]).unwrap();
        assert_eq!(a.result, sig(&[2, 2]));
        assert_eq!(a.boundary, sig(&[4]));
        assert!(matches!(
            split_zero(&sig(&[4]), 0, &[3.into(), 2.into()]),
            Err(StrataError::BadPartition(_))
        ));
        let m = merge_poles(&sig(&[2, -1, -1]), 1, 2).unwrap();
        assert_eq!(m.result, sig(&[2, -2]));
        assert_eq!(m.generic, sig(&[2, -1, -1]));
        assert!(matches!(
            merge_poles(&sig(&[2, -1, -1]), 0, 1),
            Err(StrataError::NotAPole { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn holomorphic() -> impl Strategy<Value = Signature> {
            proptest::collection::vec(0i64..7, 1..6)
                .prop_filter("even sum", |v| v.iter().sum::<i64>() % 2 == 0)
                .prop_map(|v| Signature::from_i64(&v))
        }

        proptest! {
            #[test]
            fn split_preserves_genus_and_adds_dimension(
                mu in holomorphic(),
                idx in 0usize..6,
                cut in 1i64..6,
            ) {
                let idx = idx % mu.len();
                let order = mu.orders()[idx].to_i64().unwrap();
                prop_assume!(order >= 2 && cut < order);
                let parts = [BigInt::from(cut), BigInt::from(order - cut)];
                let a = split_zero(&mu, idx, &parts).unwrap();
                prop_assert_eq!(genus_of(&a.result).unwrap(), genus_of(&mu).unwrap());
                prop_assert_eq!(
                    stratum_dimension(&a.result, false).unwrap(),
                    stratum_dimension(&mu, false).unwrap() + 1
                );
            }

            #[test]
            fn merge_preserves_genus(zeros in proptest::collection::vec(1i64..6, 1..4), p in 1i64..4, q in 1i64..4) {
                let mut v = zeros.clone();
                v.push(-p);
                v.push(-q);
                prop_assume!(v.iter().sum::<i64>() % 2 == 0 && v.iter().sum::<i64>() >= -2);
                let mu = Signature::from_i64(&v);
                let n = v.len();
                let m = merge_poles(&mu, n - 2, n - 1).unwrap();
                prop_assert_eq!(genus_of(&m.result).unwrap(), genus_of(&mu).unwrap());
            }

            #[test]
            fn labels_never_mix_with_unlabeled(v in proptest::collection::vec(-4i64..8, 1..6)) {
                let mu = Signature::from_i64(&v);
                if let Ok(labels) = component_labels(&mu) {
                    let un = labels.contains(&Unlabeled);
                    prop_assert!(!un || labels.len() == 1);
                }
            }
        }
    }
}

//! Breadth-first search for an explicit chain of elementary isometries between
//! two rational diagonal forms.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::DiagForm;
use crate::algebra::integer::{square_class, Rat};
use crate::error::{Error, Result};

/// Result of [`chain_equivalence_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainResult {
    /// A sequence of forms, each obtained from the previous one by an elementary step.
    Found(Vec<Vec<BigInt>>),
    NotFound,
}

fn canon(v: &[BigInt]) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = v
        .iter()
        .map(|a| square_class(&Rat::from_integer(a.clone())))
        .collect();
    c.sort();
    c
}

// square class of x * y for squarefree x, y, without factoring
fn class_mul(x: &BigInt, y: &BigInt) -> BigInt {
    let g = x.abs().gcd(&y.abs());
    (x / &g) * (y / &g)
}

const MAX_ENTRY_BITS: u64 = 40;

fn neighbours(node: &[BigInt], targets: &[BigInt], classes: &mut HashMap<BigInt, BigInt>) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let n = node.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&node[i], &node[j]);
            let s = a + b;
            let mut rest: Vec<BigInt> = node
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i && *k != j)
                .map(|(_, x)| x.clone())
                .collect();
            if s.is_zero() {
                // a hyperbolic plane <a, -a> is isometric to <t, -t> for every t
                for t in targets.iter().chain(std::iter::once(&BigInt::one())) {
                    if t == a || -t == *a {
                        continue;
                    }
                    let mut r = rest.clone();
                    r.push(t.clone());
                    r.push(-t.clone());
                    r.sort();
                    out.push(r);
                }
                continue;
            }
            // <a, b> = <a + b, (a + b) a b>
            if s.bits() > MAX_ENTRY_BITS {
                continue;
            }
            let cs = classes
                .entry(s)
                .or_insert_with_key(|s| square_class(&Rat::from_integer(s.clone())))
                .clone();
            let d = class_mul(&class_mul(a, b), &cs);
            rest.push(cs);
            rest.push(d);
            rest.sort();
            out.push(rest);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Searches for a chain of binary steps `<a, b> -> <a+b, (a+b)ab>` and hyperbolic
/// swaps joining `f` to `g`. The budget bounds the number of expanded nodes.
/// Binary steps whose sum `a + b` exceeds 2^40 in absolute value are not explored,
/// which only shrinks the search space.
pub fn chain_equivalence_search(f: &DiagForm, g: &DiagForm, budget: usize) -> Result<ChainResult> {
    let to_ints = |d: &DiagForm| -> Result<Vec<BigInt>> {
        if !d.field().is_rationals() {
            return Err(Error::RationalsOnly);
        }
        Ok(d.entries()
            .iter()
            .map(|e| square_class(&e.to_rat().unwrap()))
            .collect())
    };
    let start = canon(&to_ints(f)?);
    let goal = canon(&to_ints(g)?);
    if start.len() != goal.len() {
        return Ok(ChainResult::NotFound);
    }
    let mut prev: HashMap<Vec<BigInt>, Option<Vec<BigInt>>> = HashMap::new();
    prev.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let mut expanded = 0;
    let mut classes = HashMap::new();
    while let Some(node) = queue.pop_front() {
        if node == goal {
            let mut path = vec![node.clone()];
            let mut cur = node;
            while let Some(Some(p)) = prev.get(&cur) {
                path.push(p.clone());
                cur = p.clone();
            }
            path.reverse();
            return Ok(ChainResult::Found(path));
        }
        if expanded >= budget {
            break;
        }
        expanded += 1;
        for nb in neighbours(&node, &goal, &mut classes) {
            if !prev.contains_key(&nb) {
                prev.insert(nb.clone(), Some(node.clone()));
                queue.push_back(nb);
            }
        }
    }
    Ok(ChainResult::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{isometric, Decision};

    #[test]
    fn finds_simple_chains() {
        let f = DiagForm::from_ints(&[1, 1]).unwrap();
        let g = DiagForm::from_ints(&[2, 2]).unwrap();
        match chain_equivalence_search(&f, &g, 100).unwrap() {
            ChainResult::Found(p) => assert_eq!(p.len(), 2),
            ChainResult::NotFound => panic!("expected a chain"),
        }
        let f = DiagForm::from_ints(&[1, -1, 3]).unwrap();
        let g = DiagForm::from_ints(&[5, -5, 3]).unwrap();
        assert!(matches!(
            chain_equivalence_search(&f, &g, 1000).unwrap(),
            ChainResult::Found(_)
        ));
    }

    #[test]
    fn budget_limits_expansion() {
        let f = DiagForm::from_ints(&[1, 1, 1]).unwrap();
        let g = DiagForm::from_ints(&[1, 5, 5]).unwrap();
        assert_eq!(chain_equivalence_search(&f, &g, 1).unwrap(), ChainResult::NotFound);
        assert!(matches!(chain_equivalence_search(&f, &g, 100).unwrap(), ChainResult::Found(_)));
    }

    #[test]
    fn found_implies_isometric() {
        let forms: Vec<Vec<i64>> = vec![vec![1, 2], vec![3, 6], vec![1, 1], vec![5, 5], vec![-1, 3]];
        for a in &forms {
            for b in &forms {
                let f = DiagForm::from_ints(a).unwrap();
                let g = DiagForm::from_ints(b).unwrap();
                if let ChainResult::Found(_) = chain_equivalence_search(&f, &g, 200).unwrap() {
                    assert_eq!(isometric(&f, &g).unwrap(), Decision::Equal);
                }
            }
        }
    }
}

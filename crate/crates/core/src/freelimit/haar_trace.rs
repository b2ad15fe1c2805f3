//! τ(w) for a word w in free Haar unitaries.

use crate::ncalg::{StarLetter, StarMonomial};

/// Free-group reduction of a word: adjacent xᵢxᵢ* and xᵢ*xᵢ cancel.
pub fn reduce_word(word: &StarMonomial) -> Vec<StarLetter> {
    let mut stack: Vec<StarLetter> = Vec::with_capacity(word.degree());
    for &l in word.letters() {
        match stack.last() {
            Some(&top) if top == l.adjoint() => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    stack
}

/// 1 if the word reduces to the identity of the free group, 0 otherwise.
pub fn free_haar_trace(word: &StarMonomial) -> f64 {
    if reduce_word(word).is_empty() {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample, EnsembleKind, EnsembleSpec};
    use crate::ncalg::NcPolynomial;
    use crate::rng::Seed;

    fn w(s: &str) -> StarMonomial {
        let p: NcPolynomial = format!("poly p=3 k=1: {s}").parse().unwrap();
        let word = p.terms().next().unwrap().0.clone();
        word
    }

    #[test]
    fn examples() {
        assert_eq!(free_haar_trace(&StarMonomial::unit()), 1.0);
        assert_eq!(free_haar_trace(&w("x1 x1'")), 1.0);
        assert_eq!(free_haar_trace(&w("x1 x2 x1' x2'")), 0.0);
        assert_eq!(free_haar_trace(&w("x1 x2 x2' x3 x3' x1'")), 1.0);
        assert_eq!(free_haar_trace(&w("x1 x1")), 0.0);
    }

    #[test]
    fn commutator_trace_vanishes_for_large_haar() {
        let spec = EnsembleSpec::new(EnsembleKind::HaarUnitary, 1000);
        let u = [sample(&spec, Seed::new(21, 0)).unwrap(), sample(&spec, Seed::new(21, 1)).unwrap()];
        let p: NcPolynomial = "poly p=2 k=1: x1 x2 x1' x2'".parse().unwrap();
        let t = p.evaluate(&u).unwrap().normalized_trace();
        assert!(t.norm() <= 0.1, "{t}");
    }
}

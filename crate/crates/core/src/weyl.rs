//! Exact Weyl group arithmetic: simple reflections, word reduction, lengths,
//! and the prefix/suffix subwords needed by the generalized minor labels.
//!
//! Group elements are faithfully represented by their integer matrices acting
//! on fundamental-weight coordinates. Root signs are detected by solving
//! against the (invertible) extended Cartan matrix, so no separate root
//! lattice representation is kept.

use crate::cartan::CartanRealization;
use crate::rat::{IMat, Q};
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("simple reflection index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
}

/// A Weyl group element: its matrix on weight coordinates plus the canonical
/// (lexicographically least) reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    mat: IMat,
    word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(real: &CartanRealization) -> Self {
        WeylElement { mat: IMat::identity(real.rtilde()), word: Vec::new() }
    }

    pub fn mat(&self) -> &IMat {
        &self.mat
    }

    /// Canonical reduced word, letters in `1..=r`.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Action on a weight in fundamental-weight coordinates.
    pub fn apply(&self, weight: &[i64]) -> Vec<i64> {
        self.mat.matvec(weight)
    }

    pub fn inverse(&self, real: &CartanRealization) -> WeylElement {
        // The reversed word is reduced, so only the canonical form is
        // recomputed; the matrix product is avoided.
        let rev: Vec<usize> = self.word.iter().rev().copied().collect();
        apply_word(real, &rev).expect("letters of a cached word are in range")
    }

    pub fn times(&self, real: &CartanRealization, other: &WeylElement) -> WeylElement {
        let mat = self.mat.matmul(&other.mat);
        let (_, word) = length_and_reduce_mat(real, &mat);
        WeylElement { mat, word }
    }
}

/// The simple reflection `s_i`, `Id - alpha_i e_i^T` on weight coordinates.
pub fn simple_reflection(real: &CartanRealization, i: usize) -> Result<WeylElement, WeylError> {
    if i < 1 || i > real.r() {
        return Err(WeylError::IndexOutOfRange(i, real.r()));
    }
    Ok(WeylElement { mat: reflection_mat(real, i), word: vec![i] })
}

fn reflection_mat(real: &CartanRealization, i: usize) -> IMat {
    let rt = real.rtilde();
    IMat::from_fn(rt, rt, |a, b| {
        let id = i64::from(a == b);
        if b == i - 1 {
            id - real.c(a + 1, i)
        } else {
            id
        }
    })
}

/// Product of simple reflections along `word`, with the canonical reduced
/// word recomputed.
pub fn apply_word(real: &CartanRealization, word: &[usize]) -> Result<WeylElement, WeylError> {
    let mut mat = IMat::identity(real.rtilde());
    for &i in word {
        if i < 1 || i > real.r() {
            return Err(WeylError::IndexOutOfRange(i, real.r()));
        }
        mat = mat.matmul(&reflection_mat(real, i));
    }
    let (_, canonical) = length_and_reduce_mat(real, &mat);
    Ok(WeylElement { mat, word: canonical })
}

/// Length and canonical reduced word of an element. Elements cache the
/// canonical word at construction; this recomputes it from the matrix alone.
pub fn length_and_reduce(real: &CartanRealization, w: &WeylElement) -> (usize, Vec<usize>) {
    length_and_reduce_mat(real, &w.mat)
}

/// Descent algorithm on a raw matrix: repeatedly strip the least `i` whose
/// reflection shortens the element. Stripping on the left and always taking
/// the least descent yields the lexicographically least reduced word.
fn length_and_reduce_mat(real: &CartanRealization, mat: &IMat) -> (usize, Vec<usize>) {
    let rt = real.rtilde();
    let cfull_q = real.cfull().to_qmat();
    let cfull_inv = cfull_q.inverse().expect("extended Cartan matrix is nondegenerate");
    let mut w = mat.clone();
    let mut winv_q = w.to_qmat().inverse().expect("Weyl matrices are invertible");
    let mut word = Vec::new();
    let cap = 4096;
    while !w.is_identity() {
        // Left descent at i: w^{-1}(alpha_i) is a negative root. The columns
        // of cfull_inv * winv * cfull are the root coordinates of all
        // w^{-1}(alpha_i) at once.
        let roots = cfull_inv.matmul(&winv_q.matmul(&cfull_q));
        let mut descent = None;
        for i in 1..=real.r() {
            let col: Vec<Q> = (0..rt).map(|a| roots[(a, i - 1)].clone()).collect();
            let nonpos = col.iter().all(|x| !x.is_positive());
            let nonzero = col.iter().any(|x| !x.is_zero());
            if nonpos && nonzero {
                descent = Some(i);
                break;
            }
        }
        let i = descent.expect("non-identity Weyl element has a left descent");
        let s = reflection_mat(real, i);
        w = s.matmul(&w);
        winv_q = winv_q.matmul(&s.to_qmat());
        word.push(i);
        assert!(word.len() < cap, "descent loop failed to terminate");
    }
    (word.len(), word)
}

/// True iff the word multiplies out to an element of that exact length.
pub fn is_reduced_word(real: &CartanRealization, word: &[usize]) -> Result<bool, WeylError> {
    let w = apply_word(real, word)?;
    Ok(w.length() == word.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::preset;
    use std::collections::HashMap;

    #[test]
    fn reflections_are_involutions() {
        for name in ["A2", "B2", "G2", "A1affine"] {
            let real = preset(name).unwrap();
            for i in 1..=real.r() {
                let s = simple_reflection(&real, i).unwrap();
                assert!(s.mat().matmul(s.mat()).is_identity());
                assert_eq!(s.length(), 1);
            }
        }
    }

    #[test]
    fn a2_reflection_action() {
        let real = preset("A2").unwrap();
        let s1 = simple_reflection(&real, 1).unwrap();
        // omega_2 is fixed, omega_1 goes to omega_1 - alpha_1.
        assert_eq!(s1.apply(&real.omega(2)), real.omega(2));
        let expect: Vec<i64> = real
            .omega(1)
            .iter()
            .zip(real.alpha(1))
            .map(|(a, b)| a - b)
            .collect();
        assert_eq!(s1.apply(&real.omega(1)), expect);
    }

    #[test]
    fn affine_reflection_on_alpha2() {
        let real = preset("A1affine").unwrap();
        let s1 = simple_reflection(&real, 1).unwrap();
        let a1 = real.alpha(1);
        let a2 = real.alpha(2);
        let expect: Vec<i64> = a2.iter().zip(&a1).map(|(x, y)| x + 2 * y).collect();
        assert_eq!(s1.apply(&real.alpha(2)), expect);
    }

    #[test]
    fn squares_cancel() {
        let real = preset("A2").unwrap();
        let w = apply_word(&real, &[1, 1]).unwrap();
        assert!(w.is_identity());
        assert_eq!(w.length(), 0);
    }

    #[test]
    fn a2_longest_element() {
        let real = preset("A2").unwrap();
        let w = apply_word(&real, &[1, 2, 1]).unwrap();
        assert_eq!(w.length(), 3);
        let w2 = apply_word(&real, &[2, 1, 2]).unwrap();
        assert_eq!(w.mat(), w2.mat());
        assert_eq!(w2.word(), &[1, 2, 1]);
        assert_eq!(length_and_reduce(&real, &w2), (3, vec![1, 2, 1]));
        let id = WeylElement::identity(&real);
        assert_eq!(length_and_reduce(&real, &id), (0, vec![]));
    }

    #[test]
    fn affine_words_never_shorten() {
        let real = preset("A1affine").unwrap();
        let w = apply_word(&real, &[1, 2, 1, 2]).unwrap();
        assert_eq!(w.length(), 4);
        assert_eq!(w.word(), &[1, 2, 1, 2]);
        assert!(is_reduced_word(&real, &[1, 2, 1, 2, 1, 2, 1]).unwrap());
        let w3 = apply_word(&real, &[1, 2, 1]).unwrap();
        assert_eq!(w3.word(), &[1, 2, 1]);
    }

    #[test]
    fn reduced_word_checks() {
        let real = preset("A2").unwrap();
        assert!(is_reduced_word(&real, &[1, 2, 1]).unwrap());
        assert!(!is_reduced_word(&real, &[1, 1]).unwrap());
        assert!(matches!(
            is_reduced_word(&real, &[3]),
            Err(WeylError::IndexOutOfRange(3, 2))
        ));
    }

    #[test]
    fn length_changes_by_one_under_right_multiplication() {
        for name in ["A2", "B2", "A1affine"] {
            let real = preset(name).unwrap();
            let mut words = vec![vec![]];
            for len in 1..=5usize {
                let mut next = Vec::new();
                for w in &words {
                    for i in 1..=real.r() {
                        let mut v = w.clone();
                        v.push(i);
                        next.push(v);
                    }
                }
                for w in &next {
                    let elem = apply_word(&real, w).unwrap();
                    let prefix = apply_word(&real, &w[..len - 1]).unwrap();
                    let diff = elem.length() as i64 - prefix.length() as i64;
                    assert!(diff == 1 || diff == -1, "length must move by exactly one");
                }
                words = next;
            }
        }
    }

    #[test]
    fn faithful_on_short_words() {
        // Distinct canonical reduced words of length <= 8 give distinct
        // matrices.
        for name in ["A2", "B2", "A1affine"] {
            let real = preset(name).unwrap();
            let mut seen: HashMap<Vec<usize>, IMat> = HashMap::new();
            let mut frontier = vec![vec![]];
            for _ in 0..8 {
                let mut next = Vec::new();
                for w in &frontier {
                    for i in 1..=real.r() {
                        let mut v = w.clone();
                        v.push(i);
                        if is_reduced_word(&real, &v).unwrap() {
                            next.push(v);
                        }
                    }
                }
                for w in &next {
                    let elem = apply_word(&real, w).unwrap();
                    if elem.word() == w.as_slice() {
                        if let Some(prev) = seen.insert(w.clone(), elem.mat().clone()) {
                            assert_eq!(&prev, elem.mat());
                        }
                    }
                    // Same matrix must mean same canonical word.
                    let canon = elem.word().to_vec();
                    let again = apply_word(&real, &canon).unwrap();
                    assert_eq!(again.mat(), elem.mat());
                }
                frontier = next;
            }
            let mats: Vec<&IMat> = seen.values().collect();
            for (a, ma) in seen.iter() {
                for (b, mb) in seen.iter() {
                    if a != b {
                        assert_ne!(ma, mb, "distinct canonical words {a:?}, {b:?} collide");
                    }
                }
            }
            assert!(!mats.is_empty());
        }
    }

    #[test]
    fn inverse_and_product() {
        let real = preset("B2").unwrap();
        let w = apply_word(&real, &[1, 2, 1]).unwrap();
        let winv = w.inverse(&real);
        assert!(w.times(&real, &winv).is_identity());
        assert_eq!(winv.length(), 3);
    }
}

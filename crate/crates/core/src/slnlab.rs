//! Finite-type numeric laboratory: the `SL_n` realization of the group-level
//! constructions (generators, torus, Weyl representatives, Gaussian
//! factorization, generalized minors, the involutions, the twist map) and
//! exact verification of the factorization identities at rational points.
//!
//! Everything is exact: group points are `n x n` rational matrices of
//! determinant one, minors are block determinants of translated matrices, and
//! every `verify*` operation asserts equality of rationals with zero
//! tolerance.

use crate::cartan::{a_type, CartanRealization};
use crate::factor;
use crate::rat::{qi, qpow, QMat, Q};
use crate::report::{CheckLine, Report};
use crate::sample;
use crate::seed::{build_ensemble, build_seed, DoubleWord};
use crate::weyl::{self, WeylElement};
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SlnError {
    #[error("root index {0} out of range for SL_{1}")]
    IndexOutOfRange(i64, usize),
    #[error("matrix is not in the big cell: leading minor {0} vanishes")]
    NotInG0(usize),
    #[error("point not in the required cell: {0}")]
    NotInCell(String),
    #[error("determinant is {0}, not 1")]
    NotUnimodular(String),
    #[error("length precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("non-integer exponent in {0}")]
    NonIntegerExponent(String),
    #[error("the word's realization is not of type A (SL_n needs rtilde = r)")]
    TypeANeeded,
    #[error(transparent)]
    Seed(#[from] crate::seed::SeedError),
}

/// An exact `SL_n` point.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint {
    n: usize,
    mat: QMat,
}

impl GroupPoint {
    pub fn new(mat: QMat) -> Result<GroupPoint, SlnError> {
        assert!(mat.is_square());
        let det = mat.det();
        if !det.is_one() {
            return Err(SlnError::NotUnimodular(det.to_string()));
        }
        Ok(GroupPoint { n: mat.nrows(), mat })
    }

    fn wrap(mat: QMat) -> GroupPoint {
        debug_assert!(mat.det().is_one(), "group point lost unimodularity");
        GroupPoint { n: mat.nrows(), mat }
    }

    pub fn identity(n: usize) -> GroupPoint {
        GroupPoint { n, mat: QMat::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mat(&self) -> &QMat {
        &self.mat
    }

    pub fn mul(&self, other: &GroupPoint) -> GroupPoint {
        GroupPoint::wrap(self.mat.matmul(&other.mat))
    }

    pub fn inverse(&self) -> GroupPoint {
        GroupPoint::wrap(self.mat.inverse().expect("SL_n points are invertible"))
    }
}

impl std::fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.mat)
    }
}

/// Unit-triangular/diagonal factors of a Gaussian decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussParts {
    pub lower: QMat,
    pub diag: QMat,
    pub upper: QMat,
}

impl GaussParts {
    pub fn reconstruct(&self) -> QMat {
        self.lower.matmul(&self.diag).matmul(&self.upper)
    }

    /// Value of the character `omega_i` on the diagonal part: the product of
    /// the first `i` diagonal entries.
    pub fn omega(&self, i: usize) -> Q {
        (0..i).map(|a| self.diag[(a, a)].clone()).product()
    }
}

/// One-parameter root subgroup element `x_{+-i}(t)`.
pub fn elem(n: usize, i: i64, t: &Q) -> Result<GroupPoint, SlnError> {
    let a = i.unsigned_abs() as usize;
    if i == 0 || a > n - 1 {
        return Err(SlnError::IndexOutOfRange(i, n));
    }
    let mut mat = QMat::identity(n);
    if i > 0 {
        mat[(a - 1, a)] = t.clone();
    } else {
        mat[(a, a - 1)] = t.clone();
    }
    Ok(GroupPoint::wrap(mat))
}

/// Coroot torus element `t^{alpha_k^vee}`: diagonal `t` at slot `k`, `1/t`
/// at slot `k + 1`.
pub fn coroot(n: usize, k: usize, t: &Q) -> Result<GroupPoint, SlnError> {
    if k == 0 || k > n - 1 {
        return Err(SlnError::IndexOutOfRange(k as i64, n));
    }
    if t.is_zero() {
        return Err(SlnError::NotInCell("torus coordinate is zero".into()));
    }
    let mut mat = QMat::identity(n);
    mat[(k - 1, k - 1)] = t.clone();
    mat[(k, k)] = t.recip();
    Ok(GroupPoint::wrap(mat))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepVariant {
    /// `x_i(-1) x_{-i}(1) x_i(-1)`.
    Bar,
    /// `x_i(1) x_{-i}(-1) x_i(1)`.
    DoubleBar,
}

/// Representative of a Weyl group element along its canonical reduced word;
/// the braid relations make the product word-independent.
pub fn weyl_rep(n: usize, w: &WeylElement, variant: RepVariant) -> GroupPoint {
    let mut out = GroupPoint::identity(n);
    for &i in w.word() {
        let i = i as i64;
        let s = match variant {
            RepVariant::Bar => elem(n, i, &qi(-1))
                .and_then(|a| Ok(a.mul(&elem(n, -i, &qi(1))?)))
                .and_then(|a| Ok(a.mul(&elem(n, i, &qi(-1))?))),
            RepVariant::DoubleBar => elem(n, i, &qi(1))
                .and_then(|a| Ok(a.mul(&elem(n, -i, &qi(-1))?)))
                .and_then(|a| Ok(a.mul(&elem(n, i, &qi(1))?))),
        };
        out = out.mul(&s.expect("letters of a reduced word are in range"));
    }
    out
}

/// Exact LDU factorization on the big cell.
pub fn gauss(g: &GroupPoint) -> Result<GaussParts, SlnError> {
    let n = g.n;
    let mut work = g.mat.clone();
    let mut lower = QMat::identity(n);
    for col in 0..n {
        if work[(col, col)].is_zero() {
            return Err(SlnError::NotInG0(col + 1));
        }
        let pivot = work[(col, col)].clone();
        for row in col + 1..n {
            if work[(row, col)].is_zero() {
                continue;
            }
            let factor = &work[(row, col)] / &pivot;
            lower[(row, col)] = factor.clone();
            for c in col..n {
                let sub = &factor * &work[(col, c)];
                work[(row, c)] = &work[(row, c)] - &sub;
            }
        }
    }
    let mut diag = QMat::identity(n);
    let mut upper = QMat::identity(n);
    for i in 0..n {
        diag[(i, i)] = work[(i, i)].clone();
        for j in i + 1..n {
            upper[(i, j)] = &work[(i, j)] / &work[(i, i)];
        }
    }
    Ok(GaussParts { lower, diag, upper })
}

/// Generalized minor `Delta^{omega_i}_{w,w'}(g)`: the leading `i x i` block
/// determinant of `wbar^{-1} g w'bar`. This is a polynomial in the entries,
/// so it is defined off the big cell as well.
pub fn minor(g: &GroupPoint, i: usize, w: &WeylElement, wprime: &WeylElement) -> Q {
    let n = g.n;
    assert!((1..n).contains(&i), "minor weight out of range");
    let left = weyl_rep(n, w, RepVariant::Bar).inverse();
    let right = weyl_rep(n, wprime, RepVariant::Bar);
    let translated = left.mat.matmul(&g.mat).matmul(&right.mat);
    translated.leading_minor(i)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    /// Automorphism swapping `x_i(t)` and `x_{-i}(t)`, inverting `H`.
    Theta,
    /// Antiautomorphism fixing all `x_{+-i}(t)`, inverting `H`.
    Iota,
    /// Automorphism with `sigma(x_i(t)) = x_{-i}(-t)`, inverting `H`.
    Sigma,
}

/// Alternating-sign diagonal used to realize the involutions in closed form;
/// conjugation is insensitive to its overall scalar ambiguity.
fn h0(n: usize) -> QMat {
    QMat::from_fn(n, n, |i, j| if i == j { qi(if i % 2 == 0 { 1 } else { -1 }) } else { qi(0) })
}

pub fn involution(g: &GroupPoint, which: Involution) -> GroupPoint {
    let n = g.n;
    let h = h0(n);
    let mat = match which {
        Involution::Theta => {
            let ti = g.mat.transpose().inverse().expect("SL_n");
            h.matmul(&ti).matmul(&h)
        }
        Involution::Iota => {
            let inv = g.mat.inverse().expect("SL_n");
            h.matmul(&inv).matmul(&h)
        }
        Involution::Sigma => g.mat.transpose().inverse().expect("SL_n"),
    };
    GroupPoint::wrap(mat)
}

/// The twist `zeta^{u,v}` on `G^{u,v}`:
/// `x -> ([ubar^{-1} x]_-^{-1} ubar^{-1} x vinvbar [x vinvbar]_+^{-1})^theta`.
pub fn twist(
    real: &CartanRealization,
    u: &WeylElement,
    v: &WeylElement,
    g: &GroupPoint,
) -> Result<GroupPoint, SlnError> {
    let n = g.n;
    let ubar = weyl_rep(n, u, RepVariant::Bar);
    let vinvbar = weyl_rep(n, &v.inverse(real), RepVariant::Bar);
    let left = ubar.inverse().mul(g);
    let left_parts = gauss(&left).map_err(|_| {
        SlnError::NotInCell("Gaussian factorization of ubar^{-1} x failed".into())
    })?;
    let right = g.mul(&vinvbar);
    let right_parts = gauss(&right).map_err(|_| {
        SlnError::NotInCell("Gaussian factorization of x vinvbar failed".into())
    })?;
    let lower_inv = left_parts.lower.inverse().expect("unit triangular");
    let upper_inv = right_parts.upper.inverse().expect("unit triangular");
    let core = lower_inv.matmul(&left.mat).matmul(&vinvbar.mat).matmul(&upper_inv);
    Ok(involution(&GroupPoint::wrap(core), Involution::Theta))
}

/// `pi_-` for `x` in the negative Bruhat cell of `w`:
/// `wbar^{-1} [x wbar^{-1}]_+ wbar`.
pub fn pi_minus(
    n: usize,
    w: &WeylElement,
    x: &GroupPoint,
) -> Result<GroupPoint, SlnError> {
    let wbar = weyl_rep(n, w, RepVariant::Bar);
    let shifted = x.mul(&wbar.inverse());
    let parts = gauss(&shifted)
        .map_err(|_| SlnError::NotInCell("x wbar^{-1} is outside the big cell".into()))?;
    Ok(wbar.inverse().mul(&GroupPoint::wrap(parts.upper)).mul(&wbar))
}

/// `pi_+` for `x` in the positive Bruhat cell of `w`:
/// `wbar [wbar^{-1} x]_- wbar^{-1}`.
pub fn pi_plus(
    n: usize,
    w: &WeylElement,
    x: &GroupPoint,
) -> Result<GroupPoint, SlnError> {
    let wbar = weyl_rep(n, w, RepVariant::Bar);
    let shifted = wbar.inverse().mul(x);
    let parts = gauss(&shifted)
        .map_err(|_| SlnError::NotInCell("wbar^{-1} x is outside the big cell".into()))?;
    Ok(wbar.mul(&GroupPoint::wrap(parts.lower)).mul(&wbar.inverse()))
}

/// Matrix size of the `SL_n` realization backing a double word, checking the
/// word really lives in type A.
pub fn sl_dim(word: &DoubleWord) -> Result<usize, SlnError> {
    let real = word.realization();
    let n = real.r() + 1;
    if real.rtilde() != real.r() || real.cfull() != a_type(n).cfull() {
        return Err(SlnError::TypeANeeded);
    }
    Ok(n)
}

/// The unipotent/torus parametrization
/// `x_{i_1}(t_1) ... x_{i_m}(t_m) t_{m+1}^{alpha_1^vee} ...`.
pub fn build_t_param(word: &DoubleWord, t: &[Q]) -> Result<GroupPoint, SlnError> {
    let n = sl_dim(word)?;
    let m = word.m();
    let rt = word.rtilde();
    assert_eq!(t.len(), m + rt, "need one parameter per letter plus torus slots");
    let mut out = GroupPoint::identity(n);
    for (pos, &letter) in word.letters().iter().enumerate() {
        out = out.mul(&elem(n, letter, &t[pos])?);
    }
    for k in 1..=rt {
        out = out.mul(&coroot(n, k, &t[m + k - 1])?);
    }
    Ok(out)
}

/// The twisted point `x' = (zeta^{u^{-1},v^{-1}} . iota)(x)` entering the
/// chamber-ansatz formulas.
pub fn twisted_point(word: &DoubleWord, x: &GroupPoint) -> Result<GroupPoint, SlnError> {
    let real = word.realization();
    let u_inv = word.u().inverse(real);
    let v_inv = word.v().inverse(real);
    twist(real, &u_inv, &v_inv, &involution(x, Involution::Iota))
}

/// The cluster minor `A_k(g) = Delta^{omega_{|i_k|}}_{u_{<=k}, v_{>k}}(g)`.
pub fn a_minor(word: &DoubleWord, g: &GroupPoint, k: i64) -> Q {
    let weight = word.weight(k).unwrap();
    minor(g, weight, &word.u_le(k), &word.v_gt(k))
}

fn q_to_exp(x: &Q, what: &str) -> Result<i64, SlnError> {
    if !x.is_integer() {
        return Err(SlnError::NonIntegerExponent(what.to_string()));
    }
    Ok(i64::try_from(x.to_integer()).expect("exponent fits i64"))
}

/// Evaluate a Laurent monomial in the given values, failing on a zero base
/// with negative exponent.
fn eval_monomial(values: &[Q], exponents: &[i64]) -> Option<Q> {
    let mut acc = Q::one();
    for (v, &e) in values.iter().zip(exponents) {
        if e == 0 {
            continue;
        }
        if v.is_zero() {
            if e < 0 {
                return None;
            }
            return Some(Q::zero());
        }
        acc *= qpow(v, e);
    }
    Some(acc)
}

/// Chamber-ansatz verification: recover every unipotent parameter `t_j` from
/// the twisted minors via the `Psi` exponents, and every torus parameter
/// `t_{m+j}` via the half-difference-of-signs exponents, exactly.
pub fn verify_thm_main(word: &DoubleWord, t: &[Q]) -> Result<Report, SlnError> {
    let m = word.m();
    let rt = word.rtilde();
    let x = build_t_param(word, t)?;
    let xp = twisted_point(word, &x)?;
    let idx = word.index_set();
    let a_values: Vec<Q> = idx.iter().map(|&k| a_minor(word, &xp, k)).collect();
    let exponents = factor::chamber_exponents(word);
    let mut report = Report::new();
    let instance = format!("word={:?}", word.letters());
    for j in 1..=m + rt {
        let row: Vec<i64> = (0..idx.len())
            .map(|col| q_to_exp(&exponents[(j - 1, col)], "chamber exponent"))
            .collect::<Result<_, _>>()?;
        let check = if j <= m { "thm-main:t_k" } else { "thm-main:aom" };
        let inst = format!("{instance} j={j}");
        match eval_monomial(&a_values, &row) {
            Some(rhs) if rhs == t[j - 1] => report.push(CheckLine::pass(check, inst)),
            Some(rhs) => report.push(CheckLine::fail(
                check,
                inst,
                format!("t = {}, minor monomial = {}", t[j - 1], rhs),
            )),
            None => report.push(CheckLine::fail(
                check,
                inst,
                "vanishing twisted minor with negative exponent".to_string(),
            )),
        }
    }
    Ok(report)
}

/// End-to-end comparison of the two `X`-coordinate computations: the direct
/// coweight-coordinate route through the `E` and `D` matrices against the
/// minor-monomial route through `Btilde`.
pub fn verify_x_to_a(word: &DoubleWord, t: &[Q]) -> Result<Report, SlnError> {
    let m = word.m();
    let rt = word.rtilde();
    let fm = factor::build_def(word);
    // t'_j = prod_k t_k^{E_jk}.
    let tprime: Vec<Q> = (0..m + rt)
        .map(|row| {
            let exps: Vec<i64> = (0..m + rt)
                .map(|col| q_to_exp(&fm.e[(row, col)], "E exponent"))
                .collect::<Result<_, _>>()?;
            eval_monomial(t, &exps).ok_or_else(|| SlnError::NotInCell("zero parameter".into()))
        })
        .collect::<Result<_, _>>()?;
    // X_j = prod_k (t'_k)^{D_jk}.
    let idx = word.index_set();
    let direct: Vec<Q> = (0..idx.len())
        .map(|row| {
            let exps: Vec<i64> = (0..m + rt)
                .map(|col| q_to_exp(&fm.d[(row, col)], "D exponent"))
                .collect::<Result<_, _>>()?;
            eval_monomial(&tprime, &exps)
                .ok_or_else(|| SlnError::NotInCell("zero intermediate coordinate".into()))
        })
        .collect::<Result<_, _>>()?;
    // Minor route.
    let seed = build_seed(word);
    let ens = build_ensemble(&seed)?;
    let x = build_t_param(word, t)?;
    let xp = twisted_point(word, &x)?;
    let a_values: Vec<Q> = idx.iter().map(|&k| a_minor(word, &xp, k)).collect();
    let mut report = Report::new();
    let instance = format!("word={:?}", word.letters());
    for (row, &j) in idx.iter().enumerate() {
        let exps: Vec<i64> = (0..idx.len())
            .map(|col| q_to_exp(&ens.btilde[(row, col)], "Btilde exponent"))
            .collect::<Result<_, _>>()?;
        let inst = format!("{instance} X index={j}");
        match eval_monomial(&a_values, &exps) {
            Some(monomial) if monomial == direct[row] => {
                report.push(CheckLine::pass("x-to-a", inst))
            }
            Some(monomial) => report.push(CheckLine::fail(
                "x-to-a",
                inst,
                format!("coweight route = {}, minor route = {}", direct[row], monomial),
            )),
            None => report.push(CheckLine::fail(
                "x-to-a",
                inst,
                "vanishing twisted minor with negative exponent".to_string(),
            )),
        }
    }
    Ok(report)
}

/// Reversed-suffix element `s_{i_n} ... s_{i_k}` of a reduced word.
fn suffix_element(real: &Arc<CartanRealization>, word: &[usize], k: usize) -> WeylElement {
    let rev: Vec<usize> = word[k - 1..].iter().rev().copied().collect();
    weyl::apply_word(real, &rev).expect("suffix of a reduced word is valid")
}

/// Prefix element `s_{i_1} ... s_{i_k}`.
fn prefix_element(real: &Arc<CartanRealization>, word: &[usize], k: usize) -> WeylElement {
    weyl::apply_word(real, &word[..k]).expect("prefix of a reduced word is valid")
}

/// Factorization in the unipotent group `N_-(w)`: build
/// `y = y_1(p_1) ... y_n(p_n)` with `y_k = w_{k+1}bar x_{-i_k}(p_k)
/// w_{k+1}bar^{-1}` and recover each `p_k` as the minor
/// `Delta^{omega_{i_k}}_{w_k, w_{k+1}}(y)`.
pub fn verify_group_fact(n: usize, word_w: &[usize], p: &[Q]) -> Result<Report, SlnError> {
    let real = Arc::new(a_type(n));
    if !weyl::is_reduced_word(&real, word_w).map_err(|_| SlnError::IndexOutOfRange(0, n))? {
        return Err(SlnError::PreconditionViolated(format!("{word_w:?} is not reduced")));
    }
    assert_eq!(p.len(), word_w.len());
    let len = word_w.len();
    let ident = WeylElement::identity(&real);
    let w_at = |k: usize| -> WeylElement {
        if k > len {
            ident.clone()
        } else {
            suffix_element(&real, word_w, k)
        }
    };
    let mut y = GroupPoint::identity(n);
    for k in 1..=len {
        let rep = weyl_rep(n, &w_at(k + 1), RepVariant::Bar);
        let yk = rep.mul(&elem(n, -(word_w[k - 1] as i64), &p[k - 1])?).mul(&rep.inverse());
        y = y.mul(&yk);
    }
    let mut report = Report::new();
    let instance = format!("SL_{n} w={word_w:?}");
    for k in 1..=len {
        let recovered = minor(&y, word_w[k - 1], &w_at(k), &w_at(k + 1));
        if recovered == p[k - 1] {
            report.push(CheckLine::pass("group-fact", format!("{instance} k={k}")));
        } else {
            report.push(CheckLine::fail(
                "group-fact",
                format!("{instance} k={k}"),
                format!("p_k = {}, recovered {}", p[k - 1], recovered),
            ));
        }
    }
    Ok(report)
}

/// Factorization in the unipotent cell `N_+^w`: recover the `t_k` of
/// `x = x_{i_1}(t_1) ... x_{i_n}(t_n)` from minors of `y = pi_-(x)`.
pub fn verify_uni_fact(n: usize, word_w: &[usize], t: &[Q]) -> Result<Report, SlnError> {
    let real = Arc::new(a_type(n));
    if !weyl::is_reduced_word(&real, word_w).map_err(|_| SlnError::IndexOutOfRange(0, n))? {
        return Err(SlnError::PreconditionViolated(format!("{word_w:?} is not reduced")));
    }
    assert_eq!(t.len(), word_w.len());
    let len = word_w.len();
    let mut x = GroupPoint::identity(n);
    for (k, &i) in word_w.iter().enumerate() {
        x = x.mul(&elem(n, i as i64, &t[k])?);
    }
    let w = weyl::apply_word(&real, word_w).unwrap();
    let y = pi_minus(n, &w, &x)?;
    let ident = WeylElement::identity(&real);
    let w_at = |k: usize| -> WeylElement {
        if k > len {
            ident.clone()
        } else {
            suffix_element(&real, word_w, k)
        }
    };
    let rt = real.rtilde();
    let mut report = Report::new();
    let instance = format!("SL_{n} w={word_w:?}");
    for k in 1..=len {
        let i_k = word_w[k - 1];
        let d1 = minor(&y, i_k, &w_at(k), &ident);
        let d2 = minor(&y, i_k, &w_at(k + 1), &ident);
        if d1.is_zero() || d2.is_zero() {
            report.push(CheckLine::fail(
                "uni-fact",
                format!("{instance} k={k}"),
                "vanishing minor in the denominator".to_string(),
            ));
            continue;
        }
        let mut recovered = (d1 * d2).recip();
        for j in 1..=rt {
            if j == i_k {
                continue;
            }
            let c = real.c(j, i_k);
            if c != 0 {
                recovered *= qpow(&minor(&y, j, &w_at(k + 1), &ident), -c);
            }
        }
        if recovered == t[k - 1] {
            report.push(CheckLine::pass("uni-fact", format!("{instance} k={k}")));
        } else {
            report.push(CheckLine::fail(
                "uni-fact",
                format!("{instance} k={k}"),
                format!("t_k = {}, recovered {}", t[k - 1], recovered),
            ));
        }
    }
    Ok(report)
}

/// A random `SL_n` point from the dense cell `N_- H N_+` with small positive
/// rational entries.
pub fn random_sl(rng: &mut ChaCha8Rng, n: usize) -> GroupPoint {
    let mut lower = QMat::identity(n);
    let mut upper = QMat::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower[(i, j)] = sample::nonzero_rational(rng, 5);
            upper[(j, i)] = sample::nonzero_rational(rng, 5);
        }
    }
    let mut diag = QMat::identity(n);
    let mut prod = Q::one();
    for i in 0..n - 1 {
        let d = sample::positive_rational(rng, 5);
        prod *= &d;
        diag[(i, i)] = d;
    }
    diag[(n - 1, n - 1)] = prod.recip();
    GroupPoint::wrap(lower.matmul(&diag).matmul(&upper))
}

/// The determinantal identity
/// `D_{u,v} D_{us_i,vs_i} = D_{us_i,v} D_{u,vs_i} + prod_{k!=i} (D^{omega_k}_{u,v})^{-C_ki}`
/// at random rational points, assuming the length preconditions.
pub fn verify_gendetid(
    n: usize,
    u: &WeylElement,
    v: &WeylElement,
    i: usize,
    trials: usize,
    rng_seed: u64,
) -> Result<Report, SlnError> {
    let real = Arc::new(a_type(n));
    let s_i = weyl::simple_reflection(&real, i).map_err(|_| SlnError::IndexOutOfRange(i as i64, n))?;
    let us = u.times(&real, &s_i);
    let vs = v.times(&real, &s_i);
    if us.length() <= u.length() || vs.length() <= v.length() {
        return Err(SlnError::PreconditionViolated(format!(
            "need l(u s_{i}) > l(u) and l(v s_{i}) > l(v) for u={:?}, v={:?}",
            u.word(),
            v.word()
        )));
    }
    let rt = real.rtilde();
    let mut report = Report::new();
    let instance = format!("SL_{n} u={:?} v={:?} i={i}", u.word(), v.word());
    for trial in 0..trials {
        let mut rng = sample::rng_for(rng_seed, trial as u64);
        let g = random_sl(&mut rng, n);
        let lhs = minor(&g, i, u, v) * minor(&g, i, &us, &vs);
        let mut rhs = minor(&g, i, &us, v) * minor(&g, i, u, &vs);
        let mut extra = Q::one();
        for k in 1..=rt {
            if k == i {
                continue;
            }
            let c = real.c(k, i);
            if c != 0 {
                extra *= qpow(&minor(&g, k, u, v), -c);
            }
        }
        rhs += extra;
        if lhs == rhs {
            report.push(CheckLine::pass("gendetid", format!("{instance} trial={trial}")));
        } else {
            report.push(CheckLine::fail(
                "gendetid",
                format!("{instance} trial={trial}"),
                format!("lhs = {lhs}, rhs = {rhs}"),
            ));
        }
    }
    Ok(report)
}

/// Minor identities relating `pi_{+-}(x)` to the twist `x' = zeta^{u,v}(x)`:
/// `Delta^{omega_j}_{v_{>k},e}(pi_-(x)) = Delta^{omega_j}_{e,v_{<=k}}(x') /
/// Delta^{omega_j}_{e,v}(x')` and the mirrored `pi_+` statement.
pub fn verify_newlem(
    word: &DoubleWord,
    t: &[Q],
    k: usize,
    j: usize,
) -> Result<Report, SlnError> {
    let n = sl_dim(word)?;
    let real = word.realization();
    let x = build_t_param(word, t)?;
    gauss(&x)?; // precondition: x in the big cell
    let u = word.u().clone();
    let v = word.v().clone();
    let xp = twist(real, &u, &v, &x)?;
    let ident = WeylElement::identity(real);
    let mut report = Report::new();
    let instance = format!("word={:?} k={k} j={j}", word.letters());

    if k <= v.length() {
        let y_minus = pi_minus(n, &v, &x)?;
        let v_gt = if k == v.length() {
            ident.clone()
        } else {
            suffix_element(real, v.word(), k + 1)
        };
        let v_le = prefix_element(real, v.word(), k);
        let lhs = minor(&y_minus, j, &v_gt, &ident);
        let denom = minor(&xp, j, &ident, &v);
        if denom.is_zero() {
            report.push(CheckLine::fail(
                "newlem:pi-minus",
                instance.clone(),
                "vanishing denominator minor".to_string(),
            ));
        } else {
            let rhs = minor(&xp, j, &ident, &v_le) / denom;
            if lhs == rhs {
                report.push(CheckLine::pass("newlem:pi-minus", instance.clone()));
            } else {
                report.push(CheckLine::fail(
                    "newlem:pi-minus",
                    instance.clone(),
                    format!("lhs = {lhs}, rhs = {rhs}"),
                ));
            }
        }
    } else {
        report.push(CheckLine::vacuous("newlem:pi-minus", instance.clone()));
    }

    if k <= u.length() {
        let y_plus = pi_plus(n, &u, &x)?;
        let u_lt = prefix_element(real, u.word(), k - 1);
        let u_ge = suffix_element(real, u.word(), k);
        let u_inv = u.inverse(real);
        let lhs = minor(&y_plus, j, &ident, &u_lt);
        let denom = minor(&xp, j, &u_inv, &ident);
        if denom.is_zero() {
            report.push(CheckLine::fail(
                "newlem:pi-plus",
                instance,
                "vanishing denominator minor".to_string(),
            ));
        } else {
            let rhs = minor(&xp, j, &u_ge, &ident) / denom;
            if lhs == rhs {
                report.push(CheckLine::pass("newlem:pi-plus", instance));
            } else {
                report.push(CheckLine::fail(
                    "newlem:pi-plus",
                    instance,
                    format!("lhs = {lhs}, rhs = {rhs}"),
                ));
            }
        }
    } else {
        report.push(CheckLine::vacuous("newlem:pi-plus", instance));
    }
    Ok(report)
}

/// Trial driver for the `SL_n` suite: chamber ansatz and `X`-to-`A` at
/// random positive rational parameter vectors.
pub fn run_sln_trials(word: &DoubleWord, trials: usize, rng_seed: u64) -> Result<Report, SlnError> {
    let len = word.m() + word.rtilde();
    let mut report = Report::new();
    for trial in 0..trials {
        let mut rng = sample::rng_for(rng_seed, trial as u64);
        let t = sample::positive_vector(&mut rng, len, 100);
        report.extend(verify_thm_main(word, &t)?);
        report.extend(verify_x_to_a(word, &t)?);
    }
    Ok(report)
}

/// Permutation matrix of a Weyl element under the standard identification of
/// the type `A_{n-1}` Weyl group with `S_n`; used by the Bruhat membership
/// oracle in the tests.
pub fn permutation_matrix(n: usize, w: &WeylElement) -> QMat {
    let mut mat = QMat::identity(n);
    for &i in w.word() {
        let mut swap = QMat::identity(n);
        swap[(i - 1, i - 1)] = qi(0);
        swap[(i, i)] = qi(0);
        swap[(i - 1, i)] = qi(1);
        swap[(i, i - 1)] = qi(1);
        mat = mat.matmul(&swap);
    }
    mat
}

/// Bruhat cell membership via lower-left rank conditions: `g` lies in
/// `B_+ w B_+` iff every lower-left corner submatrix of `g` has the same rank
/// as in the permutation matrix of `w`.
pub fn in_positive_bruhat_cell(g: &GroupPoint, w: &WeylElement) -> bool {
    let n = g.n;
    let pm = permutation_matrix(n, w);
    for row_start in 0..n {
        for col_end in 0..n {
            let rows: Vec<usize> = (row_start..n).collect();
            let cols: Vec<usize> = (0..=col_end).collect();
            if g.mat.submatrix(&rows, &cols).rank() != pm.submatrix(&rows, &cols).rank() {
                return false;
            }
        }
    }
    true
}

/// `g` lies in `B_- w B_-` iff its transpose lies in `B_+ w^{-1} B_+`.
pub fn in_negative_bruhat_cell(
    real: &CartanRealization,
    g: &GroupPoint,
    w: &WeylElement,
) -> bool {
    let gt = GroupPoint::wrap(g.mat.transpose());
    in_positive_bruhat_cell(&gt, &w.inverse(real))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;
    use crate::seed::DoubleWord;

    fn sl_word(n: usize, letters: &[i64]) -> DoubleWord {
        DoubleWord::parse(Arc::new(a_type(n)), letters).unwrap()
    }

    #[test]
    fn elementary_matrices() {
        let t = q(3, 7);
        let e = elem(2, 1, &t).unwrap();
        assert_eq!(e.mat()[(0, 1)], t);
        let f = elem(2, -1, &t).unwrap();
        assert_eq!(f.mat()[(1, 0)], t);
        assert_eq!(elem(3, 2, &qi(0)).unwrap(), GroupPoint::identity(3));
        assert!(elem(2, 2, &t).is_err());
    }

    #[test]
    fn simple_root_representatives() {
        let real = Arc::new(a_type(2));
        let s1 = weyl::simple_reflection(&real, 1).unwrap();
        let bar = weyl_rep(2, &s1, RepVariant::Bar);
        assert_eq!(bar.mat(), &QMat::from_int_rows(&[vec![0, -1], vec![1, 0]]));
        let dbar = weyl_rep(2, &s1, RepVariant::DoubleBar);
        assert_eq!(dbar.mat(), &QMat::from_int_rows(&[vec![0, 1], vec![-1, 0]]));
        let e = WeylElement::identity(&real);
        assert_eq!(weyl_rep(2, &e, RepVariant::Bar), GroupPoint::identity(2));
    }

    #[test]
    fn gauss_factorization() {
        assert_eq!(
            gauss(&GroupPoint::identity(3)).unwrap().reconstruct(),
            QMat::identity(3)
        );
        let g = GroupPoint::new(QMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => qi(2),
            (0, 1) => qi(3),
            (1, 0) => qi(1),
            _ => qi(2),
        }))
        .unwrap();
        let parts = gauss(&g).unwrap();
        assert_eq!(parts.lower, QMat::from_fn(2, 2, |i, j| match (i, j) {
            (1, 0) => q(1, 2),
            _ => qi(i64::from(i == j)),
        }));
        assert_eq!(parts.diag[(0, 0)], qi(2));
        assert_eq!(parts.diag[(1, 1)], q(1, 2));
        assert_eq!(parts.upper[(0, 1)], q(3, 2));
        assert_eq!(parts.reconstruct(), *g.mat());

        let rot = GroupPoint::new(QMat::from_int_rows(&[vec![0, -1], vec![1, 0]])).unwrap();
        assert!(matches!(gauss(&rot), Err(SlnError::NotInG0(1))));
    }

    #[test]
    fn sl2_minors_are_the_four_entries() {
        let g = GroupPoint::new(QMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => qi(2),
            (0, 1) => qi(3),
            (1, 0) => qi(1),
            _ => qi(2),
        }))
        .unwrap();
        let real = Arc::new(a_type(2));
        let e = WeylElement::identity(&real);
        let s = weyl::simple_reflection(&real, 1).unwrap();
        assert_eq!(minor(&g, 1, &e, &e), qi(2));
        assert_eq!(minor(&g, 1, &s, &e), qi(1));
        assert_eq!(minor(&g, 1, &e, &s), qi(3));
        assert_eq!(minor(&g, 1, &s, &s), qi(2));
        // Principal minors of the identity are 1.
        let id3 = GroupPoint::identity(3);
        let real3 = Arc::new(a_type(3));
        let e3 = WeylElement::identity(&real3);
        for i in 1..=2 {
            assert_eq!(minor(&id3, i, &e3, &e3), Q::one());
        }
    }

    #[test]
    fn minor_matches_ldu_on_big_cell() {
        for trial in 0..50 {
            let mut rng = sample::rng_for(21, trial);
            let g = random_sl(&mut rng, 3);
            let parts = gauss(&g).unwrap();
            let real = Arc::new(a_type(3));
            let e = WeylElement::identity(&real);
            for i in 1..=2 {
                assert_eq!(minor(&g, i, &e, &e), parts.omega(i));
            }
        }
    }

    #[test]
    fn involution_self_tests() {
        let n = 3;
        let t = q(5, 3);
        for i in 1..=(n as i64 - 1) {
            let plus = elem(n, i, &t).unwrap();
            let minus = elem(n, -i, &t).unwrap();
            assert_eq!(involution(&plus, Involution::Theta), minus);
            assert_eq!(involution(&minus, Involution::Theta), plus);
            assert_eq!(involution(&plus, Involution::Iota), plus);
            assert_eq!(involution(&minus, Involution::Iota), minus);
            assert_eq!(
                involution(&plus, Involution::Sigma),
                elem(n, -i, &(-t.clone())).unwrap()
            );
        }
        // All three invert the torus, measured by the simple-root characters.
        let h = coroot(n, 1, &q(7, 2)).unwrap();
        for which in [Involution::Theta, Involution::Iota, Involution::Sigma] {
            let hi = involution(&h, which);
            for i in 0..n - 1 {
                let chi = &h.mat()[(i, i)] / &h.mat()[(i + 1, i + 1)];
                let chi_inv = &hi.mat()[(i, i)] / &hi.mat()[(i + 1, i + 1)];
                assert_eq!(chi * chi_inv, Q::one());
            }
        }
        // Theta on a torus point in SL_2 swaps the diagonal.
        let a = q(4, 9);
        let d = coroot(2, 1, &a).unwrap();
        let theta_d = involution(&d, Involution::Theta);
        assert_eq!(theta_d.mat()[(0, 0)], a.recip());
        assert_eq!(theta_d.mat()[(1, 1)], a);
    }

    #[test]
    fn twist_on_identity_cell_is_cartan_inversion() {
        let real = Arc::new(a_type(2));
        let e = WeylElement::identity(&real);
        let g = coroot(2, 1, &q(5, 2)).unwrap();
        let z = twist(&real, &e, &e, &g).unwrap();
        assert_eq!(z.mat()[(0, 0)], q(2, 5));
        assert_eq!(z.mat()[(1, 1)], q(5, 2));
        let back = twist(&real, &e, &e, &z).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn twist_inverse_property() {
        // zeta^{u^{-1},v^{-1}} inverts zeta^{u,v} on random positive points
        // of the cell, including the longest-element cell.
        for letters in [vec![-1i64, -2, 1, 2, 1], vec![1, 2, 1, -1, -2, -1]] {
            let word = sl_word(3, &letters);
            let real = word.realization().clone();
            let (u, v) = (word.u().clone(), word.v().clone());
            let u_inv = u.inverse(&real);
            let v_inv = v.inverse(&real);
            for trial in 0..50 {
                let mut rng = sample::rng_for(31, trial);
                let t = sample::positive_vector(&mut rng, word.m() + word.rtilde(), 20);
                let g = build_t_param(&word, &t).unwrap();
                let z = twist(&real, &u, &v, &g).unwrap();
                let back = twist(&real, &u_inv, &v_inv, &z).unwrap();
                assert_eq!(back, g);
            }
        }
    }

    #[test]
    fn twist_cartan_part_identity() {
        // [x']_0 = [ubar^{-1} x]_0^{-1} [x]_0 [x vinvbar]_0^{-1} on big-cell
        // points.
        let word = sl_word(3, &[1, -1, 2, -2]);
        let real = word.realization().clone();
        let (u, v) = (word.u().clone(), word.v().clone());
        for trial in 0..20 {
            let mut rng = sample::rng_for(37, trial);
            let t = sample::positive_vector(&mut rng, word.m() + word.rtilde(), 20);
            let x = build_t_param(&word, &t).unwrap();
            let xp = twist(&real, &u, &v, &x).unwrap();
            let ubar = weyl_rep(3, &u, RepVariant::Bar);
            let vinvbar = weyl_rep(3, &v.inverse(&real), RepVariant::Bar);
            let d_xp = gauss(&xp).unwrap().diag;
            let d_left = gauss(&ubar.inverse().mul(&x)).unwrap().diag;
            let d_x = gauss(&x).unwrap().diag;
            let d_right = gauss(&x.mul(&vinvbar)).unwrap().diag;
            for i in 0..3 {
                assert_eq!(
                    d_xp[(i, i)],
                    d_left[(i, i)].recip() * &d_x[(i, i)] * d_right[(i, i)].recip()
                );
            }
        }
    }

    #[test]
    fn t_param_small_cases() {
        // Empty word in SL_2: a torus point.
        let w = sl_word(2, &[]);
        let a = q(7, 3);
        let g = build_t_param(&w, std::slice::from_ref(&a)).unwrap();
        assert_eq!(g.mat()[(0, 0)], a);
        assert_eq!(g.mat()[(1, 1)], a.recip());
        // One letter: x_1(t) times the torus.
        let w2 = sl_word(2, &[1]);
        let t = q(2, 5);
        let g2 = build_t_param(&w2, &[t.clone(), a.clone()]).unwrap();
        let expect = elem(2, 1, &t).unwrap().mul(&coroot(2, 1, &a).unwrap());
        assert_eq!(g2, expect);
    }

    #[test]
    fn t_param_lands_in_the_double_cell() {
        // Bruhat membership via the rank oracle on lower-left corners.
        let word = sl_word(3, &[1, -1, 2]);
        let real = word.realization().clone();
        let mut rng = sample::rng_for(41, 0);
        let t = sample::positive_vector(&mut rng, word.m() + word.rtilde(), 20);
        let g = build_t_param(&word, &t).unwrap();
        assert!(in_positive_bruhat_cell(&g, word.u()));
        assert!(in_negative_bruhat_cell(&real, &g, word.v()));
        // And not in a smaller cell.
        let e = WeylElement::identity(&real);
        assert!(!in_positive_bruhat_cell(&g, &e));
    }

    #[test]
    fn sl2_chamber_ansatz_by_hand() {
        // Worked example: word (1), t = (t1, a). The twisted minors are
        // A_{-1} = a and A_1 = a / t1, and the ansatz recovers t1 and a.
        let word = sl_word(2, &[1]);
        let t1 = q(3, 2);
        let a = qi(5);
        let x = build_t_param(&word, &[t1.clone(), a.clone()]).unwrap();
        let xp = twisted_point(&word, &x).unwrap();
        assert_eq!(a_minor(&word, &xp, -1), a);
        assert_eq!(a_minor(&word, &xp, 1), &a / &t1);
        let report = verify_thm_main(&word, &[t1, a]).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures().next());
    }

    #[test]
    fn thm_main_on_sl2_and_sl3_words() {
        let cases: Vec<(usize, Vec<i64>)> = vec![
            (2, vec![1, -1]),
            (2, vec![-1, 1]),
            (3, vec![1, 2, -1, -2]),
            (3, vec![1, -1, 2, -2]),
            (3, vec![-1, -2, 1, 2]),
        ];
        for (n, letters) in cases {
            let word = sl_word(n, &letters);
            for trial in 0..3 {
                let mut rng = sample::rng_for(43, trial);
                let t = sample::positive_vector(&mut rng, word.m() + word.rtilde(), 50);
                let report = verify_thm_main(&word, &t).unwrap();
                assert!(
                    report.all_pass(),
                    "chamber ansatz failed for SL_{n} {letters:?}: {:?}",
                    report.failures().next()
                );
            }
        }
    }

    #[test]
    fn thm_main_and_x_to_a_in_sl4() {
        // A longer mixed word in SL_4 exercises commuting and braided
        // representative products and 3x3 block minors.
        let word = sl_word(4, &[1, -2, 3, -1, 2, -3]);
        let mut rng = sample::rng_for(83, 0);
        let t = sample::positive_vector(&mut rng, word.m() + word.rtilde(), 30);
        let report = verify_thm_main(&word, &t).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures().next());
        let report = verify_x_to_a(&word, &t).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures().next());
    }

    #[test]
    fn x_to_a_on_small_words() {
        let cases: Vec<(usize, Vec<i64>)> = vec![
            (2, vec![1, -1]),
            (2, vec![]),
            (3, vec![-1, -2, 1, 2]),
            (3, vec![1, -1, 2]),
        ];
        for (n, letters) in cases {
            let word = sl_word(n, &letters);
            for trial in 0..3 {
                let mut rng = sample::rng_for(47, trial);
                let t = sample::positive_vector(&mut rng, word.m() + word.rtilde(), 50);
                let report = verify_x_to_a(&word, &t).unwrap();
                assert!(
                    report.all_pass(),
                    "X-to-A failed for SL_{n} {letters:?}: {:?}",
                    report.failures().next()
                );
            }
        }
    }

    #[test]
    fn group_fact_small_cases() {
        // SL_2, w = s_1: y = x_{-1}(p_1), minor recovers p_1.
        let report = verify_group_fact(2, &[1], &[q(4, 7)]).unwrap();
        assert!(report.all_pass());
        // All-zero parameters give the identity and recover zeros.
        let report = verify_group_fact(3, &[1, 2], &[qi(0), qi(0)]).unwrap();
        assert!(report.all_pass());
        // SL_3 longest-word instance at random parameters.
        let mut rng = sample::rng_for(53, 0);
        let p: Vec<Q> = (0..3).map(|_| sample::nonzero_rational(&mut rng, 30)).collect();
        let report = verify_group_fact(3, &[1, 2, 1], &p).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures().next());
    }

    #[test]
    fn uni_fact_small_cases() {
        let mut rng = sample::rng_for(59, 0);
        // Single letter in SL_2: t_1 = 1 / (D_{s,e}(y) D_{e,e}(y)).
        let report = verify_uni_fact(2, &[1], &[q(5, 3)]).unwrap();
        assert!(report.all_pass());
        for word_w in [vec![1usize], vec![1, 2], vec![1, 2, 1]] {
            let t: Vec<Q> =
                (0..word_w.len()).map(|_| sample::positive_rational(&mut rng, 30)).collect();
            let report = verify_uni_fact(3, &word_w, &t).unwrap();
            assert!(
                report.all_pass(),
                "uni-fact failed for {word_w:?}: {:?}",
                report.failures().next()
            );
        }
    }

    #[test]
    fn gendetid_classical_case() {
        // u = v = e, i = 1 in SL_2 is ad = bc + 1.
        let real = Arc::new(a_type(2));
        let e = WeylElement::identity(&real);
        let report = verify_gendetid(2, &e, &e, 1, 10, 61).unwrap();
        assert!(report.all_pass());
        // Precondition rejection.
        let s = weyl::simple_reflection(&real, 1).unwrap();
        assert!(matches!(
            verify_gendetid(2, &s, &e, 1, 1, 0),
            Err(SlnError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn gendetid_sl3_sl4() {
        let real3 = Arc::new(a_type(3));
        let e3 = WeylElement::identity(&real3);
        let s2 = weyl::simple_reflection(&real3, 2).unwrap();
        let report = verify_gendetid(3, &e3, &s2, 1, 10, 67).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures().next());

        // In SL_4 the triple (s_2, s_3, i) needs i with both lengths going
        // up; i = 2 would shorten u, so use i = 1.
        let real4 = Arc::new(a_type(4));
        let s2_4 = weyl::simple_reflection(&real4, 2).unwrap();
        let s3_4 = weyl::simple_reflection(&real4, 3).unwrap();
        let report = verify_gendetid(4, &s2_4, &s3_4, 1, 10, 71).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures().next());
    }

    #[test]
    fn newlem_instances() {
        let mut rng = sample::rng_for(73, 0);
        // SL_2, u = v = s_1, k = 1.
        let w2 = sl_word(2, &[1, -1]);
        let t = sample::positive_vector(&mut rng, w2.m() + w2.rtilde(), 20);
        for j in 1..=1 {
            let report = verify_newlem(&w2, &t, 1, j).unwrap();
            assert!(report.all_pass(), "{:?}", report.failures().next());
        }
        // Maximal k: ratio is 1 and the left side is a principal minor of a
        // unipotent element.
        let w3 = sl_word(3, &[1, 2, -1, -2]);
        let t3 = sample::positive_vector(&mut rng, w3.m() + w3.rtilde(), 20);
        for k in 1..=2 {
            for j in 1..=2 {
                let report = verify_newlem(&w3, &t3, k, j).unwrap();
                assert!(
                    report.all_pass(),
                    "newlem failed at k={k} j={j}: {:?}",
                    report.failures().next()
                );
            }
        }
    }
}

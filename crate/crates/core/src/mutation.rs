//! Mutation dynamics: exchange-matrix mutation, cluster (`A`) and
//! `X`-coordinate transformations over an exact rational-function field, the
//! modified ensemble map, the Poisson structure matrix, and the symbolic
//! Poisson verification in `P,Q` coordinates.

use crate::poly::{RatFunc, VarSet};
use crate::rat::{q, qi, qpow, QMat, Q};
use crate::report::{CheckLine, Report};
use crate::sample;
use crate::seed::{build_ensemble, build_seed, DoubleWord, EnsembleMatrices, Seed, SeedError};
use num_traits::{One, Signed};
#[cfg(test)]
use num_traits::Zero;
use std::sync::Arc;

/// Matrix mutation at position `p` (three-case rule on the raw matrix).
pub(crate) fn mutate_b_matrix(b: &QMat, p: usize) -> QMat {
    QMat::from_fn(b.nrows(), b.ncols(), |i, j| {
        if i == p || j == p {
            -b[(i, j)].clone()
        } else {
            let prod = &b[(i, p)] * &b[(p, j)];
            if prod.is_positive() {
                &b[(i, j)] + &(&b[(i, p)].abs() * &b[(p, j)])
            } else {
                b[(i, j)].clone()
            }
        }
    })
}

/// Seed mutation at an unfrozen index: frozen flags, weights and symmetrizers
/// are preserved, the exchange matrix follows the three-case rule.
pub fn mutate_b(seed: &Seed, k: i64) -> Result<Seed, SeedError> {
    if seed.is_frozen(k)? {
        return Err(SeedError::FrozenIndex(k));
    }
    Ok(seed.with_b(mutate_b_matrix(seed.b(), seed.pos(k)?)))
}

/// Cluster state: a seed together with rational-function assignments for the
/// cluster variables and the `X`-coordinates, plus the mutation history.
#[derive(Debug, Clone)]
pub struct ClusterState {
    seed: Seed,
    a_vars: Arc<VarSet>,
    x_vars: Arc<VarSet>,
    assign_a: Vec<RatFunc>,
    assign_x: Vec<RatFunc>,
    history: Vec<i64>,
}

impl ClusterState {
    /// Initial state: index `k` carries the free generators `A_k` and `X_k`.
    pub fn initial(seed: Seed) -> ClusterState {
        let names_a: Vec<String> =
            seed.index_set().iter().map(|k| format!("A({k})")).collect();
        let names_x: Vec<String> =
            seed.index_set().iter().map(|k| format!("X({k})")).collect();
        let a_vars = VarSet::new(names_a);
        let x_vars = VarSet::new(names_x);
        let assign_a = (0..seed.size()).map(|i| RatFunc::var(&a_vars, i)).collect();
        let assign_x = (0..seed.size()).map(|i| RatFunc::var(&x_vars, i)).collect();
        ClusterState { seed, a_vars, x_vars, assign_a, assign_x, history: Vec::new() }
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn a_vars(&self) -> &Arc<VarSet> {
        &self.a_vars
    }

    pub fn assign_a(&self) -> &[RatFunc] {
        &self.assign_a
    }

    pub fn assign_x(&self) -> &[RatFunc] {
        &self.assign_x
    }

    pub fn history(&self) -> &[i64] {
        &self.history
    }

    pub fn a(&self, k: i64) -> Result<&RatFunc, SeedError> {
        Ok(&self.assign_a[self.seed.pos(k)?])
    }

    pub fn x(&self, k: i64) -> Result<&RatFunc, SeedError> {
        Ok(&self.assign_x[self.seed.pos(k)?])
    }

    /// Full mutation at `k`: exchange relation on the cluster variables, the
    /// `X`-transformation on all `X`-coordinates, and matrix mutation.
    pub fn mutate(&self, k: i64) -> Result<ClusterState, SeedError> {
        let mut next = self.mutate_a(k)?;
        next.assign_x = self.mutated_x(k)?;
        Ok(next)
    }

    /// Mutation acting on the cluster variables only (plus the matrix).
    pub fn mutate_a(&self, k: i64) -> Result<ClusterState, SeedError> {
        let pk = self.seed.pos(k)?;
        let mutated = mutate_b(&self.seed, k)?;
        let mut assign_a = self.assign_a.clone();
        assign_a[pk] = self.exchanged_a(k)?;
        let mut history = self.history.clone();
        history.push(k);
        Ok(ClusterState {
            seed: mutated,
            a_vars: self.a_vars.clone(),
            x_vars: self.x_vars.clone(),
            assign_a,
            assign_x: self.assign_x.clone(),
            history,
        })
    }

    /// Mutation acting on the `X`-coordinates only (plus the matrix).
    pub fn mutate_x(&self, k: i64) -> Result<ClusterState, SeedError> {
        let mutated = mutate_b(&self.seed, k)?;
        let assign_x = self.mutated_x(k)?;
        let mut history = self.history.clone();
        history.push(k);
        Ok(ClusterState {
            seed: mutated,
            a_vars: self.a_vars.clone(),
            x_vars: self.x_vars.clone(),
            assign_a: self.assign_a.clone(),
            assign_x,
            history,
        })
    }

    /// `A'_k = A_k^{-1} (prod_{b_kj > 0} A_j^{b_kj} + prod_{b_kj < 0} A_j^{-b_kj})`.
    fn exchanged_a(&self, k: i64) -> Result<RatFunc, SeedError> {
        if self.seed.is_frozen(k)? {
            return Err(SeedError::FrozenIndex(k));
        }
        let pk = self.seed.pos(k)?;
        let mut plus = RatFunc::one(&self.a_vars);
        let mut minus = RatFunc::one(&self.a_vars);
        for pj in 0..self.seed.size() {
            let b = &self.seed.b()[(pk, pj)];
            debug_assert!(b.is_integer(), "unfrozen row must be integral");
            let e = i64::try_from(b.to_integer()).expect("exponent fits i64");
            if e > 0 {
                plus = plus.mul(&self.assign_a[pj].powi(e).expect("nonzero cluster variable"));
            } else if e < 0 {
                minus = minus.mul(&self.assign_a[pj].powi(-e).expect("nonzero cluster variable"));
            }
        }
        Ok(plus
            .add(&minus)
            .div(&self.assign_a[pk])
            .expect("cluster variables are nonzero rational functions"))
    }

    fn mutated_x(&self, k: i64) -> Result<Vec<RatFunc>, SeedError> {
        apply_x_rule(&self.seed, k, &self.assign_x)
    }
}

/// `X'_k = X_k^{-1}`, `X'_i = X_i X_k^{[b_ik]_+} (1 + X_k)^{-b_ik}` applied
/// to any rational-function assignment of the `X`-coordinates.
pub fn apply_x_rule(seed: &Seed, k: i64, xs: &[RatFunc]) -> Result<Vec<RatFunc>, SeedError> {
    if seed.is_frozen(k)? {
        return Err(SeedError::FrozenIndex(k));
    }
    let pk = seed.pos(k)?;
    let xk = &xs[pk];
    let one = RatFunc::one(xk.vars());
    let one_plus = one.add(xk);
    let mut out = Vec::with_capacity(seed.size());
    for (pi, xi) in xs.iter().enumerate() {
        if pi == pk {
            out.push(xk.recip().expect("X-coordinates are nonzero"));
            continue;
        }
        let b = &seed.b()[(pi, pk)];
        debug_assert!(b.is_integer(), "unfrozen column must be integral");
        let e = i64::try_from(b.to_integer()).expect("exponent fits i64");
        let mut xi = xi.clone();
        if e > 0 {
            xi = xi.mul(&xk.powi(e).unwrap());
        }
        xi = xi.mul(&one_plus.powi(-e).expect("1 + X_k is nonzero"));
        out.push(xi);
    }
    Ok(out)
}

/// Symbolic commutation of the modified ensemble map with mutation at `k`:
/// pushing the initial cluster variables through `p_M` and then the `X`-rule
/// must equal mutating first and applying `p'_M`, as rational functions.
pub fn verify_ensemble_commute_symbolic(word: &DoubleWord, k: i64) -> Result<Report, SeedError> {
    let seed = build_seed(word);
    let ens = build_ensemble(&seed)?;
    let state = ClusterState::initial(seed.clone());
    // mu_k after p_M, all inside the field of initial cluster variables.
    let lhs = apply_x_rule(&seed, k, &ensemble_map(&ens, state.assign_a())?)?;
    // p'_M after mu_k.
    let mutated = state.mutate_a(k)?;
    let ens_mut = build_ensemble(mutated.seed())?;
    let rhs = ensemble_map(&ens_mut, mutated.assign_a())?;
    let mut report = Report::new();
    let instance = format!("word={:?} k={k} (symbolic)", word.letters());
    if lhs == rhs {
        report.push(CheckLine::pass("ensemble-commute", instance));
    } else {
        let p = (0..lhs.len()).find(|&p| lhs[p] != rhs[p]).unwrap();
        report.push(CheckLine::fail(
            "ensemble-commute",
            instance,
            format!("index {} differs symbolically", seed.index_set()[p]),
        ));
    }
    Ok(report)
}

/// Exchange relation on numeric values.
pub fn mutate_a_values(seed: &Seed, k: i64, values: &[Q]) -> Result<Vec<Q>, SeedError> {
    if seed.is_frozen(k)? {
        return Err(SeedError::FrozenIndex(k));
    }
    let pk = seed.pos(k)?;
    let mut plus = Q::one();
    let mut minus = Q::one();
    for (pj, value) in values.iter().enumerate() {
        let b = &seed.b()[(pk, pj)];
        let e = i64::try_from(b.to_integer()).expect("exponent fits i64");
        if e > 0 {
            plus *= qpow(value, e);
        } else if e < 0 {
            minus *= qpow(value, -e);
        }
    }
    let mut out = values.to_vec();
    out[pk] = (plus + minus) / &values[pk];
    Ok(out)
}

/// `X`-transformation on numeric values.
pub fn mutate_x_values(seed: &Seed, k: i64, values: &[Q]) -> Result<Vec<Q>, SeedError> {
    if seed.is_frozen(k)? {
        return Err(SeedError::FrozenIndex(k));
    }
    let pk = seed.pos(k)?;
    let xk = values[pk].clone();
    let one_plus = Q::one() + &xk;
    let mut out = Vec::with_capacity(seed.size());
    for (pi, value) in values.iter().enumerate() {
        if pi == pk {
            out.push(xk.clone().recip());
            continue;
        }
        let e = i64::try_from(seed.b()[(pi, pk)].to_integer()).expect("exponent fits i64");
        let mut xi = value.clone();
        if e > 0 {
            xi *= qpow(&xk, e);
        }
        xi *= qpow(&one_plus, -e);
        out.push(xi);
    }
    Ok(out)
}

/// The modified ensemble map on rational-function assignments:
/// `X_i = prod_j A_j^{Btilde_ij}`.
pub fn ensemble_map(
    ens: &EnsembleMatrices,
    assign_a: &[RatFunc],
) -> Result<Vec<RatFunc>, SeedError> {
    let n = ens.btilde.nrows();
    assert_eq!(assign_a.len(), n);
    let vars = assign_a[0].vars().clone();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = RatFunc::one(&vars);
        for (j, a) in assign_a.iter().enumerate() {
            let entry = &ens.btilde[(i, j)];
            if !entry.is_integer() {
                return Err(SeedError::NonIntegerBtilde(i as i64, j as i64));
            }
            let e = i64::try_from(entry.to_integer()).expect("exponent fits i64");
            if e != 0 {
                acc = acc.mul(&a.powi(e).expect("cluster variables are nonzero"));
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// The modified ensemble map on numeric values.
pub fn ensemble_map_values(ens: &EnsembleMatrices, values: &[Q]) -> Vec<Q> {
    let n = ens.btilde.nrows();
    (0..n)
        .map(|i| {
            let mut acc = Q::one();
            for (j, v) in values.iter().enumerate() {
                let e = i64::try_from(ens.btilde[(i, j)].to_integer())
                    .expect("Btilde entries are small integers");
                if e != 0 {
                    acc *= qpow(v, e);
                }
            }
            acc
        })
        .collect()
}

/// Check `mu_k . p_M = p'_M . mu_k` at random positive rational points.
pub fn verify_ensemble_commute(
    word: &DoubleWord,
    k: i64,
    trials: usize,
    rng_seed: u64,
) -> Result<Report, SeedError> {
    let seed = build_seed(word);
    let ens = build_ensemble(&seed)?;
    let mutated = mutate_b(&seed, k)?;
    let ens_mut = build_ensemble(&mutated)?;
    let mut report = Report::new();
    let instance = format!("word={:?} k={k}", word.letters());
    for trial in 0..trials {
        let mut rng = sample::rng_for(rng_seed, trial as u64);
        let a_values = sample::positive_vector(&mut rng, seed.size(), 100);
        // mu_k after p_M.
        let x_values = ensemble_map_values(&ens, &a_values);
        let lhs = mutate_x_values(&seed, k, &x_values)?;
        // p'_M after mu_k.
        let a_mut = mutate_a_values(&seed, k, &a_values)?;
        let rhs = ensemble_map_values(&ens_mut, &a_mut);
        if lhs == rhs {
            report.push(CheckLine::pass("ensemble-commute", format!("{instance} trial={trial}")));
        } else {
            let p = (0..lhs.len()).find(|&p| lhs[p] != rhs[p]).unwrap();
            report.push(CheckLine::fail(
                "ensemble-commute",
                format!("{instance} trial={trial}"),
                format!(
                    "index {} differs: mu.p = {}, p'.mu = {}",
                    seed.index_set()[p],
                    lhs[p],
                    rhs[p]
                ),
            ));
        }
    }
    Ok(report)
}

/// Run the commutation check at every unfrozen index; vacuous when the seed
/// has none.
pub fn verify_ensemble_commute_all(
    word: &DoubleWord,
    trials: usize,
    rng_seed: u64,
) -> Result<Report, SeedError> {
    let seed = build_seed(word);
    let unfrozen = seed.unfrozen_indices();
    let mut report = Report::new();
    if unfrozen.is_empty() {
        report.push(CheckLine::vacuous(
            "ensemble-commute",
            format!("word={:?} (no unfrozen index)", word.letters()),
        ));
        return Ok(report);
    }
    for k in unfrozen {
        report.extend(verify_ensemble_commute(word, k, trials, rng_seed)?);
    }
    Ok(report)
}

/// Poisson structure matrix: entry `(j, k)` is `b_jk d_k`.
pub fn poisson_matrix(seed: &Seed) -> QMat {
    let n = seed.size();
    QMat::from_fn(n, n, |pj, pk| &seed.b()[(pj, pk)] * &qi(seed.d_seed()[pk]))
}

/// Symbolic Poisson verification in `P,Q` coordinates.
///
/// The pullbacks `m* X_j` are Laurent monomials in the Borel coordinates
/// `P_k, Q_k`; their bracket under `{P_j, Q_k} = (d_k / 2) P_k Q_k delta_jk`
/// (extended as a biderivation, torus coordinates being Casimirs) must
/// reproduce `{X_j, X_k} = b_jk d_k X_j X_k` exactly.
pub fn verify_poisson_word(word: &DoubleWord) -> Report {
    let seed = build_seed(word);
    let m = word.m();
    let mut names: Vec<String> = (1..=m).map(|k| format!("P{k}")).collect();
    names.extend((1..=m).map(|k| format!("Q{k}")));
    let vars = VarSet::new(names);
    let p_var = |a: usize| RatFunc::var(&vars, a - 1);
    let q_var = |a: usize| RatFunc::var(&vars, m + a - 1);

    let pullback = |j: i64| -> RatFunc {
        let mut acc = RatFunc::one(&vars);
        if j > 0 {
            let a = j as usize;
            acc = acc.mul(&p_var(a)).mul(&q_var(a).powi(-word.eps(j)).unwrap());
        }
        let jp = word.successor(j).unwrap();
        if jp <= m as i64 {
            let a = jp as usize;
            acc = acc.mul(&p_var(a)).mul(&q_var(a).powi(word.eps(jp)).unwrap());
        }
        let wj = word.weight(j).unwrap();
        let mut k = j + 1;
        while k < jp {
            if k > 0 {
                let wk = word.weight(k).unwrap();
                let c = word.realization().c(wk, wj);
                if c != 0 {
                    acc = acc.mul(&p_var(k as usize).powi(c).unwrap());
                }
            }
            k += 1;
            if k == 0 {
                k = 1;
            }
        }
        acc
    };

    // {f, g} = sum_a (d_a / 2) P_a Q_a (df/dP_a dg/dQ_a - df/dQ_a dg/dP_a).
    let bracket = |f: &RatFunc, g: &RatFunc| -> RatFunc {
        let mut acc = RatFunc::zero(&vars);
        for a in 1..=m {
            let d_a = word.realization().d(word.weight(a as i64).unwrap());
            let fp = f.deriv(a - 1);
            let gq = g.deriv(m + a - 1);
            let fq = f.deriv(m + a - 1);
            let gp = g.deriv(a - 1);
            let term = fp.mul(&gq).sub(&fq.mul(&gp));
            if term.is_zero() {
                continue;
            }
            let scale = RatFunc::constant(&vars, q(d_a, 2));
            acc = acc.add(&scale.mul(&p_var(a)).mul(&q_var(a)).mul(&term));
        }
        acc
    };

    let idx = seed.index_set().to_vec();
    let xs: Vec<RatFunc> = idx.iter().map(|&j| pullback(j)).collect();
    let mut report = Report::new();
    let instance = format!("word={:?}", word.letters());
    for (pj, &j) in idx.iter().enumerate() {
        for (pk, &k) in idx.iter().enumerate() {
            let lhs = bracket(&xs[pj], &xs[pk]);
            let scalar = &seed.b()[(pj, pk)] * &qi(seed.d_seed()[pk]);
            let rhs = RatFunc::constant(&vars, scalar.clone()).mul(&xs[pj]).mul(&xs[pk]);
            if lhs == rhs {
                report.push(CheckLine::pass("poisson", format!("{instance} pair=({j},{k})")));
            } else {
                report.push(CheckLine::fail(
                    "poisson",
                    format!("{instance} pair=({j},{k})"),
                    format!("bracket = {lhs}, expected b_jk d_k X_j X_k with b_jk d_k = {scalar}"),
                ));
            }
        }
    }
    report
}

/// Mutate the cluster variables along a sequence and test the Laurent
/// property: every variable, as a reduced fraction in the initial variables,
/// must have a monomial denominator.
pub fn laurent_after_sequence(seed: &Seed, sequence: &[i64]) -> Result<Report, SeedError> {
    let mut state = ClusterState::initial(seed.clone());
    for &k in sequence {
        state = state.mutate_a(k)?;
    }
    let mut report = Report::new();
    let instance = format!("word={:?} seq={:?}", seed.letters(), sequence);
    for (p, a) in state.assign_a().iter().enumerate() {
        if !a.is_laurent() {
            report.push(CheckLine::fail(
                "laurent",
                instance.clone(),
                format!(
                    "variable at index {} has non-monomial denominator {}",
                    seed.index_set()[p],
                    a.denominator()
                ),
            ));
            return Ok(report);
        }
    }
    report.push(CheckLine::pass("laurent", instance));
    Ok(report)
}

/// Laurent-property suite for one seed: every mutation sequence over the
/// unfrozen indices up to `max_depth`, then `random_count` random sequences
/// of length `random_len`.
pub fn laurent_suite(
    seed: &Seed,
    max_depth: usize,
    random_count: usize,
    random_len: usize,
    rng_seed: u64,
) -> Result<Report, SeedError> {
    use rand::Rng;
    let unfrozen = seed.unfrozen_indices();
    let mut report = Report::new();
    if unfrozen.is_empty() {
        report.push(CheckLine::vacuous("laurent", format!("word={:?}", seed.letters())));
        return Ok(report);
    }
    let mut frontier: Vec<Vec<i64>> = vec![vec![]];
    for _ in 1..=max_depth {
        let mut next = Vec::new();
        for s in &frontier {
            for &k in &unfrozen {
                let mut seq = s.clone();
                seq.push(k);
                next.push(seq);
            }
        }
        for seq in &next {
            report.extend(laurent_after_sequence(seed, seq)?);
        }
        frontier = next;
    }
    for trial in 0..random_count {
        let mut rng = sample::rng_for(rng_seed, trial as u64);
        let seq: Vec<i64> =
            (0..random_len).map(|_| unfrozen[rng.gen_range(0..unfrozen.len())]).collect();
        report.extend(laurent_after_sequence(seed, &seq)?);
    }
    Ok(report)
}

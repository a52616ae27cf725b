//! Frozen reference fixture: the rank-one affine type at the Coxeter double
//! word `(-1, -2, 1, 2)`, with its extended Cartan matrix and the three seed
//! matrices transcribed independently by hand. The verification suite
//! reproduces all of them entry-for-entry and checks `|det Btilde| = 2`.

use crate::cartan::preset;
use crate::rat::{q, qi, QMat, Q};
use crate::report::{CheckLine, Report};
use crate::seed::{build_ensemble, build_seed, DoubleWord};
use num_traits::Signed;
use std::sync::Arc;

pub const WORD: [i64; 4] = [-1, -2, 1, 2];

pub fn expected_cfull() -> QMat {
    QMat::from_int_rows(&[vec![2, -2, 1], vec![-2, 2, 0], vec![1, 0, 0]])
}

pub fn expected_b() -> QMat {
    let h = |n: i64| q(n, 2);
    let w = qi;
    let rows: [[Q; 7]; 7] = [
        [w(0), w(0), h(-1), w(1), w(0), h(-1), w(0)],
        [w(0), w(0), w(1), w(-2), w(1), w(0), w(0)],
        [h(1), w(-1), w(0), w(1), w(0), w(0), w(0)],
        [w(-1), w(2), w(-1), w(0), w(0), w(-1), w(0)],
        [w(0), w(-1), w(0), w(0), w(0), w(2), w(-1)],
        [h(1), w(0), w(0), w(1), w(-2), w(0), w(1)],
        [w(0), w(0), w(0), w(0), w(1), w(-1), w(0)],
    ];
    QMat::from_fn(7, 7, |i, j| rows[i][j].clone())
}

pub fn expected_m() -> QMat {
    let h = |n: i64| q(n, 2);
    let w = qi;
    let rows: [[Q; 7]; 7] = [
        [w(0), w(0), h(1), w(0), w(0), h(1), w(0)],
        [w(0), w(1), w(-1), w(0), w(0), w(0), w(0)],
        [h(1), w(-1), w(1), w(0), w(0), w(0), w(0)],
        [w(0), w(0), w(0), w(0), w(0), w(0), w(0)],
        [w(0), w(0), w(0), w(0), w(0), w(0), w(0)],
        [h(1), w(0), w(0), w(0), w(0), w(1), w(-1)],
        [w(0), w(0), w(0), w(0), w(0), w(-1), w(1)],
    ];
    QMat::from_fn(7, 7, |i, j| rows[i][j].clone())
}

pub fn expected_btilde() -> QMat {
    QMat::from_int_rows(&[
        vec![0, 0, 0, 1, 0, 0, 0],
        vec![0, 1, 0, -2, 1, 0, 0],
        vec![1, -2, 1, 1, 0, 0, 0],
        vec![-1, 2, -1, 0, 0, -1, 0],
        vec![0, -1, 0, 0, 0, 2, -1],
        vec![1, 0, 0, 1, -2, 1, 0],
        vec![0, 0, 0, 0, 1, -2, 1],
    ])
}

/// Reproduce the reference example: the extended Cartan matrix, `B`, `M`,
/// `Btilde`, and `|det Btilde| = 2`, compared entry-for-entry with zero
/// tolerance.
pub fn verify_reference_example() -> Report {
    let mut report = Report::new();
    let real = preset("A1affine").expect("preset exists");
    let check = |report: &mut Report, name: &str, got: &QMat, expect: &QMat| {
        if got == expect {
            report.push(CheckLine::pass("paper-example", name));
        } else {
            report.push(CheckLine::fail(
                "paper-example",
                name,
                format!("computed\n{got}\nexpected\n{expect}"),
            ));
        }
    };
    check(&mut report, "extended Cartan matrix", &real.cfull().to_qmat(), &expected_cfull());
    let word = DoubleWord::parse(Arc::new(real), &WORD).expect("reference word is reduced");
    let seed = build_seed(&word);
    check(&mut report, "exchange matrix B", seed.b(), &expected_b());
    let ens = build_ensemble(&seed).expect("Btilde is integral");
    check(&mut report, "frozen shift M", &ens.m, &expected_m());
    check(&mut report, "modified matrix Btilde", &ens.btilde, &expected_btilde());
    if ens.det_btilde.abs() == qi(2) {
        report.push(CheckLine::pass("paper-example", "|det Btilde| = 2"));
    } else {
        report.push(CheckLine::fail(
            "paper-example",
            "|det Btilde| = 2",
            format!("det Btilde = {}", ens.det_btilde),
        ));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_example_reproduces() {
        let report = verify_reference_example();
        assert!(report.all_pass(), "{:?}", report.failures().next());
        assert_eq!(report.lines.len(), 5);
    }
}

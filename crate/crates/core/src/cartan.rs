//! Generalized Cartan matrices, symmetrizers, and the nondegenerate extended
//! realization carrying weights, roots, coroots and coweights in fixed
//! coordinates.
//!
//! All weight-space data is stored in fundamental-weight coordinates: a weight
//! is a vector of its pairings with the coroot basis, and the simple roots are
//! the columns of the extended matrix. This makes `pairing` a coordinate
//! projection and keeps every later computation exact.

use crate::rat::{IMat, Q};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CartanError {
    #[error("matrix is not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("matrix is not symmetrizable (inconsistent cycle through index {0})")]
    NotSymmetrizable(usize),
    #[error("supplied extension leaves the full matrix singular")]
    DegenerateRealization,
    #[error("expected a {expected_rows}x{expected_cols} extension, got {got_rows}x{got_cols}")]
    BadShape { expected_rows: usize, expected_cols: usize, got_rows: usize, got_cols: usize },
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
}

/// A symmetrizable generalized Cartan matrix with its minimal symmetrizers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanCore {
    r: usize,
    c: IMat,
    d: Vec<i64>,
}

impl CartanCore {
    /// Validate the GCM axioms and compute the minimal positive symmetrizers.
    ///
    /// Symmetrizers are found by propagating the ratio constraints
    /// `d_i C_ij = d_j C_ji` over the Dynkin graph; an inconsistent cycle
    /// means the matrix is not symmetrizable. Each connected component is
    /// scaled to the smallest positive integers, so `d` is deterministic.
    pub fn validate(rows: &[Vec<i64>]) -> Result<CartanCore, CartanError> {
        let r = rows.len();
        if r == 0 {
            return Err(CartanError::NotGcm("empty matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != r {
                return Err(CartanError::NotGcm(format!(
                    "row {} has length {}, expected {}",
                    i + 1,
                    row.len(),
                    r
                )));
            }
        }
        let c = IMat::from_rows(rows);
        for i in 0..r {
            if c[(i, i)] != 2 {
                return Err(CartanError::NotGcm(format!("C[{0},{0}] = {1} != 2", i + 1, c[(i, i)])));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if c[(i, j)] > 0 {
                    return Err(CartanError::NotGcm(format!(
                        "C[{},{}] = {} > 0 off the diagonal",
                        i + 1,
                        j + 1,
                        c[(i, j)]
                    )));
                }
                if (c[(i, j)] == 0) != (c[(j, i)] == 0) {
                    return Err(CartanError::NotGcm(format!(
                        "zero pattern asymmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let d = minimal_symmetrizers(&c)?;
        Ok(CartanCore { r, c, d })
    }

    pub fn rank_size(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &IMat {
        &self.c
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }
}

/// Minimal positive integers `d` with `d_i C_ij = d_j C_ji`.
fn minimal_symmetrizers(c: &IMat) -> Result<Vec<i64>, CartanError> {
    let r = c.nrows();
    // Rational candidate per index, None while unvisited.
    let mut val: Vec<Option<Q>> = vec![None; r];
    for start in 0..r {
        if val[start].is_some() {
            continue;
        }
        val[start] = Some(Q::from_integer(1.into()));
        let mut stack = vec![start];
        let mut component = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if i == j || c[(i, j)] == 0 {
                    continue;
                }
                // d_i C_ij = d_j C_ji  =>  d_j = d_i C_ij / C_ji
                let ratio = crate::rat::q(c[(i, j)], c[(j, i)]);
                let dj = val[i].as_ref().unwrap() * &ratio;
                match &val[j] {
                    None => {
                        val[j] = Some(dj);
                        stack.push(j);
                        component.push(j);
                    }
                    Some(existing) => {
                        if *existing != dj {
                            return Err(CartanError::NotSymmetrizable(j + 1));
                        }
                    }
                }
            }
        }
        // Scale the component to minimal positive integers.
        let mut den_lcm: num_bigint::BigInt = 1.into();
        for &i in &component {
            den_lcm = den_lcm.lcm(val[i].as_ref().unwrap().denom());
        }
        let mut num_gcd: num_bigint::BigInt = 0.into();
        for &i in &component {
            let scaled = val[i].as_ref().unwrap() * Q::from_integer(den_lcm.clone());
            debug_assert!(scaled.is_integer());
            num_gcd = num_gcd.gcd(scaled.numer());
        }
        for &i in &component {
            let scaled = val[i].as_ref().unwrap() * Q::from_integer(den_lcm.clone())
                / Q::from_integer(num_gcd.clone());
            val[i] = Some(scaled);
        }
    }
    let mut d = Vec::with_capacity(r);
    for (i, v) in val.into_iter().enumerate() {
        let v = v.unwrap();
        debug_assert!(v.is_integer());
        if !v.is_positive() {
            return Err(CartanError::NotSymmetrizable(i + 1));
        }
        d.push(i64::try_from(v.to_integer()).expect("symmetrizer overflow"));
    }
    Ok(d)
}

/// A Cartan core together with the extended `rtilde x rtilde` matrix on a
/// fixed fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanRealization {
    core: CartanCore,
    rtilde: usize,
    extension: IMat,
    cfull: IMat,
    dfull: Vec<i64>,
    /// Least common multiple of the core symmetrizers.
    dcap: i64,
    /// True when the extension was auto-selected rather than supplied.
    auto_extension: bool,
}

impl CartanRealization {
    /// Extend the core to a nondegenerate realization.
    ///
    /// When `extension` is omitted, unit rows are placed on the
    /// lexicographically first column set that makes the full matrix
    /// nondegenerate; this reproduces the natural choice in the rank-deficient
    /// affine examples and is deterministic.
    pub fn extend(core: CartanCore, extension: Option<IMat>) -> Result<Self, CartanError> {
        let r = core.r;
        let rank = core.c.to_qmat().rank();
        let s = r - rank;
        let dcap = core.d.iter().fold(1i64, |a, &b| a.lcm(&b));
        match extension {
            Some(ext) => {
                if ext.nrows() != s || (s > 0 && ext.ncols() != r) {
                    return Err(CartanError::BadShape {
                        expected_rows: s,
                        expected_cols: r,
                        got_rows: ext.nrows(),
                        got_cols: ext.ncols(),
                    });
                }
                let cfull = build_full(&core, &ext, dcap);
                if cfull.to_qmat().det().is_zero() {
                    return Err(CartanError::DegenerateRealization);
                }
                Ok(Self::assemble(core, ext, cfull, dcap, false))
            }
            None => {
                if s == 0 {
                    let ext = IMat::zeros(0, r);
                    let cfull = core.c.clone();
                    return Ok(Self::assemble(core, ext, cfull, dcap, true));
                }
                for cols in combinations_lex(r, s) {
                    let ext = IMat::from_fn(s, r, |t, j| i64::from(cols[t] == j));
                    let cfull = build_full(&core, &ext, dcap);
                    if !cfull.to_qmat().det().is_zero() {
                        return Ok(Self::assemble(core, ext, cfull, dcap, true));
                    }
                }
                // Unit rows always suffice: some size-s column set completes
                // the row space of C to full rank.
                unreachable!("no unit-row extension found");
            }
        }
    }

    fn assemble(core: CartanCore, extension: IMat, cfull: IMat, dcap: i64, auto: bool) -> Self {
        let r = core.r;
        let s = extension.nrows();
        let mut dfull = core.d.clone();
        dfull.extend(std::iter::repeat_n(dcap, s));
        CartanRealization {
            core,
            rtilde: r + s,
            extension,
            cfull,
            dfull,
            dcap,
            auto_extension: auto,
        }
    }

    pub fn core(&self) -> &CartanCore {
        &self.core
    }

    pub fn r(&self) -> usize {
        self.core.r
    }

    pub fn rtilde(&self) -> usize {
        self.rtilde
    }

    pub fn cfull(&self) -> &IMat {
        &self.cfull
    }

    pub fn extension(&self) -> &IMat {
        &self.extension
    }

    pub fn dfull(&self) -> &[i64] {
        &self.dfull
    }

    pub fn dcap(&self) -> i64 {
        self.dcap
    }

    pub fn auto_extension(&self) -> bool {
        self.auto_extension
    }

    /// Entry `C_ij` of the full matrix, 1-based.
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.cfull[(i - 1, j - 1)]
    }

    /// Symmetrizer `d_i` of the full matrix, 1-based.
    pub fn d(&self, i: usize) -> i64 {
        self.dfull[i - 1]
    }

    /// Simple root `alpha_j` in fundamental-weight coordinates (column `j`
    /// of the full matrix), 1-based.
    pub fn alpha(&self, j: usize) -> Vec<i64> {
        assert!((1..=self.rtilde).contains(&j));
        self.cfull.col(j - 1)
    }

    /// Fundamental weight `omega_i` in its own coordinates, 1-based.
    pub fn omega(&self, i: usize) -> Vec<i64> {
        assert!((1..=self.rtilde).contains(&i));
        (0..self.rtilde).map(|a| i64::from(a + 1 == i)).collect()
    }

    /// `<lambda | alpha_i^vee>` for a weight in fundamental-weight
    /// coordinates; a coordinate projection by the choice of basis.
    pub fn pairing(&self, lambda: &[i64], i: usize) -> Result<i64, CartanError> {
        if lambda.len() != self.rtilde {
            return Err(CartanError::BadShape {
                expected_rows: 1,
                expected_cols: self.rtilde,
                got_rows: 1,
                got_cols: lambda.len(),
            });
        }
        if i < 1 || i > self.rtilde {
            return Err(CartanError::IndexOutOfRange(i, self.rtilde));
        }
        Ok(lambda[i - 1])
    }

    pub fn to_json(&self) -> CartanJson {
        CartanJson {
            r: self.core.r,
            c: self.core.c.rows_vec(),
            d: self.core.d.clone(),
            extension: self.extension.rows_vec(),
        }
    }

    pub fn from_json(json: &CartanJson) -> Result<Self, CartanError> {
        if json.r != json.c.len() {
            return Err(CartanError::BadShape {
                expected_rows: json.r,
                expected_cols: json.r,
                got_rows: json.c.len(),
                got_cols: json.c.first().map_or(0, |row| row.len()),
            });
        }
        let core = CartanCore::validate(&json.c)?;
        let ext = if json.extension.is_empty() {
            None
        } else {
            Some(IMat::from_rows(&json.extension))
        };
        Self::extend(core, ext)
    }
}

fn build_full(core: &CartanCore, ext: &IMat, dcap: i64) -> IMat {
    let r = core.r;
    let s = ext.nrows();
    let rt = r + s;
    IMat::from_fn(rt, rt, |i, j| {
        if i < r && j < r {
            core.c[(i, j)]
        } else if i >= r && j < r {
            ext[(i - r, j)]
        } else if i < r && j >= r {
            // alpha_j for j > r is D * sum_i d_i^{-1} C_ji omega_i, so the
            // (i, j) entry is (D / d_i) C_ji.
            (dcap / core.d[i]) * ext[(j - r, i)]
        } else {
            0
        }
    })
}

/// Size-`k` subsets of `0..n` in lexicographic order.
fn combinations_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// JSON form of Cartan data: `{"r":…,"C":[[…]],"d":[…],"extension":[[…]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CartanJson {
    pub r: usize,
    #[serde(rename = "C")]
    pub c: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    #[serde(default)]
    pub extension: Vec<Vec<i64>>,
}

/// Named presets resolvable by the CLI.
pub fn preset(name: &str) -> Result<CartanRealization, CartanError> {
    let rows: Vec<Vec<i64>> = match name {
        "A2" => vec![vec![2, -1], vec![-1, 2]],
        "B2" => vec![vec![2, -1], vec![-2, 2]],
        "G2" => vec![vec![2, -1], vec![-3, 2]],
        "A1affine" => vec![vec![2, -2], vec![-2, 2]],
        other => return Err(CartanError::UnknownPreset(other.to_string())),
    };
    CartanRealization::extend(CartanCore::validate(&rows)?, None)
}

/// The type `A_{n-1}` realization backing the `SL_n` laboratory.
pub fn a_type(n: usize) -> CartanRealization {
    assert!(n >= 2, "SL_n needs n >= 2");
    let r = n - 1;
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    CartanRealization::extend(CartanCore::validate(&rows).unwrap(), None).unwrap()
}

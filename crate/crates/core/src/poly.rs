//! Multivariate polynomials over arbitrary-precision rationals and reduced
//! rational functions built on them.
//!
//! Canonical forms are unique: polynomials store grlex-ordered terms with no
//! zero coefficients, and rational functions are stored fully reduced with a
//! monic denominator, so equality is plain coefficient comparison. The gcd is
//! a primitive polynomial remainder sequence, recursing on the number of
//! variables.

use crate::rat::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Ordered variable names; the order fixes the monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new(names: Vec<String>) -> Arc<VarSet> {
        Arc::new(VarSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }
}

/// Exponent vector with graded lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with rational coefficients in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero(vars: &Arc<VarSet>) -> Poly {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VarSet>, c: Q) -> Poly {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; vars.len()]), c);
        }
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Poly {
        Poly::constant(vars, Q::one())
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> Poly {
        assert!(i < vars.len(), "variable index out of range");
        let mut expo = vec![0; vars.len()];
        expo[i] = 1;
        let mut p = Poly::zero(vars);
        p.terms.insert(Mono(expo), Q::one());
        p
    }

    pub fn monomial(vars: &Arc<VarSet>, expo: Vec<u32>, coeff: Q) -> Poly {
        assert_eq!(expo.len(), vars.len());
        let mut p = Poly::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(Mono(expo), coeff);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True for a nonzero single-term polynomial.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    fn insert_term(&mut self, mono: Mono, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert!(Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert!(Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars);
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[i].pow(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut expo = m.0.clone();
            expo[i] -= 1;
            out.insert_term(Mono(expo), c * Q::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Highest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn divexact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        let (dm, dc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            if !dm.divides(&rm) {
                return None;
            }
            let t_mono = rm.div(&dm);
            let t_coeff = &rc / &dc;
            let t = Poly::monomial(&self.vars, t_mono.0.clone(), t_coeff);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(divisor));
        }
        Some(quot)
    }

    /// Rational content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients; carries the sign of the leading
    /// coefficient.
    pub fn content(&self) -> Q {
        if self.is_zero() {
            return Q::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut cont = Q::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            cont = -cont;
        }
        cont
    }

    /// Primitive part `self / content(self)`.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// The largest monomial dividing every term (componentwise minimum of
    /// the exponent vectors).
    pub fn mono_content(&self) -> Mono {
        let nv = self.vars.len();
        let mut min = vec![u32::MAX; nv];
        for m in self.terms.keys() {
            for (a, &b) in min.iter_mut().zip(&m.0) {
                *a = (*a).min(b);
            }
        }
        if self.terms.is_empty() {
            min = vec![0; nv];
        }
        Mono(min)
    }

    fn div_mono(&self, m: &Mono) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (mm, c) in &self.terms {
            out.terms.insert(mm.div(m), c.clone());
        }
        out
    }

    /// Greatest common divisor, returned in primitive form (coprime integer
    /// coefficients, positive leading coefficient); `gcd(0, 0) = 0`.
    ///
    /// The monomial content is split off first, the Laurent-friendly exact
    /// divisibility cases exit early, and the rest goes through a primitive
    /// remainder sequence with per-step content stripping.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let ma = self.mono_content();
        let mb = other.mono_content();
        let mg = Mono(ma.0.iter().zip(&mb.0).map(|(a, b)| *a.min(b)).collect());
        let a = self.div_mono(&ma).primitive();
        let b = other.div_mono(&mb).primitive();
        let core = if a.is_constant() || b.is_constant() {
            Poly::one(&self.vars)
        } else if a == b {
            a.clone()
        } else if a.divexact(&b).is_some() {
            b.clone()
        } else if b.divexact(&a).is_some() {
            a.clone()
        } else {
            gcd_primitive(&a, &b)
        };
        core.mul(&Poly::monomial(&self.vars, mg.0, Q::one()))
    }
}

/// Subresultant PRS gcd of two primitive polynomials with no monomial
/// content. Each remainder is divided by a predicted exact divisor, which
/// bounds coefficient growth without recursive content computations inside
/// the loop.
fn gcd_primitive(f: &Poly, g: &Poly) -> Poly {
    let nv = f.vars.len();
    // Main variable: prefer one occurring in both, minimizing total degree;
    // fall back to the highest occurring variable.
    let mut main = None;
    let mut best = u32::MAX;
    for i in 0..nv {
        let (df, dg) = (f.degree_in(i), g.degree_in(i));
        if df > 0 && dg > 0 && df + dg < best {
            best = df + dg;
            main = Some(i);
        }
    }
    let main = main.or_else(|| (0..nv).rev().find(|&i| f.degree_in(i) > 0 || g.degree_in(i) > 0));
    let main = match main {
        Some(i) => i,
        None => {
            // Both are nonzero constants; primitive constants are 1.
            return Poly::one(&f.vars);
        }
    };
    let fc = to_coeffs(f, main);
    let gc = to_coeffs(g, main);
    let cont_f = list_gcd(&fc);
    let cont_g = list_gcd(&gc);
    let cont = cont_f.gcd(&cont_g);
    let mut a: Vec<Poly> = fc.iter().map(|c| c.divexact(&cont_f).unwrap()).collect();
    let mut b: Vec<Poly> = gc.iter().map(|c| c.divexact(&cont_g).unwrap()).collect();
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let one = Poly::one(&f.vars);
    let mut g_coef = one.clone();
    let mut h_coef = one.clone();
    loop {
        let delta = deg(&a) - deg(&b);
        let rem = pseudo_rem(&a, &b, &f.vars);
        if is_zero_list(&rem) {
            break;
        }
        if deg(&rem) == 0 {
            // A nonzero constant remainder means the primitive parts are
            // coprime in the main variable.
            b = vec![one.clone()];
            break;
        }
        let divisor = g_coef.mul(&h_coef.pow(delta as u32));
        let next: Vec<Poly> = rem
            .iter()
            .map(|c| c.divexact(&divisor).expect("subresultant division is exact"))
            .collect();
        a = b;
        b = next;
        g_coef = a[deg(&a)].clone();
        h_coef = match delta {
            0 => h_coef,
            1 => g_coef.clone(),
            _ => g_coef
                .pow(delta as u32)
                .divexact(&h_coef.pow((delta - 1) as u32))
                .expect("subresultant scale update is exact"),
        };
    }
    // The last remainder still carries content in the coefficient ring;
    // strip it to get the primitive part in the main variable.
    let b_content = list_gcd(&b[..=deg(&b)]);
    let stripped: Vec<Poly> = b
        .iter()
        .map(|c| c.divexact(&b_content).expect("polynomial content divides the remainder"))
        .collect();
    let prim = from_coeffs(&stripped, main, &f.vars).primitive();
    cont.mul(&prim)
}

/// Coefficient list of `p` in variable `main`, index = exponent; coefficients
/// live in the same variable set with `main`-exponent zero.
fn to_coeffs(p: &Poly, main: usize) -> Vec<Poly> {
    let d = p.degree_in(main) as usize;
    let mut out = vec![Poly::zero(&p.vars); d + 1];
    for (m, c) in &p.terms {
        let e = m.0[main] as usize;
        let mut expo = m.0.clone();
        expo[main] = 0;
        out[e].insert_term(Mono(expo), c.clone());
    }
    out
}

fn from_coeffs(coeffs: &[Poly], main: usize, vars: &Arc<VarSet>) -> Poly {
    let mut out = Poly::zero(vars);
    for (e, c) in coeffs.iter().enumerate() {
        for (m, q) in &c.terms {
            let mut expo = m.0.clone();
            expo[main] += e as u32;
            out.insert_term(Mono(expo), q.clone());
        }
    }
    out
}

fn deg(list: &[Poly]) -> usize {
    list.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn is_zero_list(list: &[Poly]) -> bool {
    list.iter().all(|c| c.is_zero())
}

fn list_gcd(list: &[Poly]) -> Poly {
    let vars = list[0].vars().clone();
    let mut acc = Poly::zero(&vars);
    for c in list {
        acc = acc.gcd(c);
        if acc.is_constant() && !acc.is_zero() {
            return Poly::one(&vars);
        }
    }
    acc
}

/// Exact pseudo-remainder `lc(g)^{deg f - deg g + 1} f mod g` of coefficient
/// lists in the main variable. The fixed leading-coefficient power is what
/// makes the subresultant divisors exact.
fn pseudo_rem(f: &[Poly], g: &[Poly], vars: &Arc<VarSet>) -> Vec<Poly> {
    let dg = deg(g);
    let lc_g = g[dg].clone();
    let mut scale_left = (deg(f) - dg + 1) as i64;
    let mut r: Vec<Poly> = f.to_vec();
    loop {
        if is_zero_list(&r) {
            return vec![];
        }
        let dr = deg(&r);
        if dr < dg {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - dg;
        let mut next = vec![Poly::zero(vars); dr];
        #[allow(clippy::needless_range_loop)]
        for i in 0..dr {
            let mut t = r[i].mul(&lc_g);
            if i >= shift && i - shift <= dg {
                t = t.sub(&g[i - shift].mul(&lr));
            }
            next[i] = t;
        }
        // The top coefficient r[dr]*lc_g - g[dg]*lr cancels by construction.
        r = next;
        scale_left -= 1;
    }
    if scale_left > 0 {
        let scale = lc_g.pow(scale_left as u32);
        r = r.iter().map(|c| c.mul(&scale)).collect();
    }
    r
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut printed = false;
            if !mag.is_one() || m.is_unit() {
                write!(f, "{mag}")?;
                printed = true;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.vars.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                printed = true;
            }
        }
        Ok(())
    }
}

/// Reduced fraction of multivariate polynomials: `gcd(num, den) = 1` and the
/// denominator is monic under the monomial order, so the form is unique and
/// equality is coefficient comparison.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Option<RatFunc> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc { den: Poly::one(num.vars()), num };
        }
        let g = num.gcd(&den);
        let mut num = num.divexact(&g).unwrap();
        let mut den = den.divexact(&g).unwrap();
        let lead = den.leading().unwrap().1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { den: Poly::one(p.vars()), num: p }
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> RatFunc {
        Self::from_poly(Poly::var(vars, i))
    }

    pub fn constant(vars: &Arc<VarSet>, c: Q) -> RatFunc {
        Self::from_poly(Poly::constant(vars, c))
    }

    pub fn one(vars: &Arc<VarSet>) -> RatFunc {
        Self::from_poly(Poly::one(vars))
    }

    pub fn zero(vars: &Arc<VarSet>) -> RatFunc {
        Self::from_poly(Poly::zero(vars))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        // Henrici addition: with both inputs reduced, common factors of the
        // sum can only come from gcd(den, den'), so the expensive reduction
        // runs on small pieces.
        let g = self.den.gcd(&other.den);
        if g.is_constant() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return Self::monic(num, den);
        }
        let t1 = self.den.divexact(&g).unwrap();
        let t2 = other.den.divexact(&g).unwrap();
        let num0 = self.num.mul(&t2).add(&other.num.mul(&t1));
        if num0.is_zero() {
            return RatFunc::zero(self.vars());
        }
        let h = num0.gcd(&g);
        let num = num0.divexact(&h).unwrap();
        let den = g.divexact(&h).unwrap().mul(&t1).mul(&t2);
        Self::monic(num, den)
    }

    /// Normalize an already-reduced fraction so the denominator is monic.
    fn monic(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc { den: Poly::one(num.vars()), num };
        }
        let lead = den.leading().unwrap().1.clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lead.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.vars());
        }
        // Cross-cancel; both inputs are reduced, so the result needs no
        // further gcd.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let num = self.num.divexact(&g1).unwrap().mul(&other.num.divexact(&g2).unwrap());
        let den = self.den.divexact(&g2).unwrap().mul(&other.den.divexact(&g1).unwrap());
        Self::monic(num, den)
    }

    pub fn recip(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(Self::monic(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&other.recip()?))
    }

    /// Integer power; reduced inputs stay reduced under powers.
    pub fn powi(&self, e: i64) -> Option<RatFunc> {
        if e == 0 {
            return Some(RatFunc::one(self.vars()));
        }
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = u32::try_from(e.unsigned_abs()).expect("exponent out of range");
        Some(Self::monic(base.num.pow(e), base.den.pow(e)))
    }

    /// Exact evaluation; `None` when the denominator vanishes at the point.
    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// True when the reduced denominator is a single term, i.e. the function
    /// is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    /// Partial derivative in variable `i`.
    pub fn deriv(&self, i: usize) -> RatFunc {
        let num = self.num.deriv(i).mul(&self.den).sub(&self.num.mul(&self.den.deriv(i)));
        let den = self.den.mul(&self.den);
        Self::reduced(num, den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one(self.vars()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

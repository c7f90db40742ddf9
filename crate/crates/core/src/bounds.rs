//! High-precision evaluation of the volumetric bounds: the simplex volume
//! lower bound `ℓ_d`, the enclosing volume `u_d`, the resulting bound on the
//! number of perfect forms, and the bound on the minimum of a primitive
//! integral perfect form.
//!
//! Every bound is computed in natural-log space with binary floats of a
//! caller-chosen precision, using a log-Gamma of our own (Stirling series with
//! exact Bernoulli numbers). An independent closed-form path, built from exact
//! rationals, square roots and powers of π, is available for small `d`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use astro_float::BigFloat;
use astro_float::{Consts, Radix, RoundingMode};
use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::form::{sym_dim, Rational};
use crate::linalg;
use crate::sqrt2::QSqrt2;

pub const DEFAULT_PRECISION_BITS: usize = 200;

const GUARD_BITS: usize = 64;
const RM: RoundingMode = RoundingMode::ToEven;

fn require_dim(d: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange("bounds need d ≥ 2".to_string()));
    }
    Ok(())
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `ℓ_d = (1/n!)·√2^{n−d}·(8/(d³(d+7)))ⁿ` exactly.
pub fn ell_d_exact(d: u64) -> QSqrt2 {
    let n = sym_dim(d as usize) as u64;
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    let dd = BigInt::from(d);
    let core = &dd * &dd * &dd * (&dd + 7);
    let ratio = num_traits::pow(rat(8, core), n as usize);
    QSqrt2::sqrt2_pow((n - d) as u32).scale(&(ratio / int(factorial)))
}

/// `(1/n!)·|det(x_1, …, x_n)|` for `n` points in `Qⁿ`.
pub fn simplex_volume(points: &[Vec<Rational>]) -> Result<Rational> {
    let n = points.len();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: p.len() });
    }
    let factorial: BigInt = (1..=n as u64).map(BigInt::from).product();
    Ok(linalg::rational_determinant(points).abs() / int(factorial))
}

/// A value `coefficient · √radicand · π^pi_power` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub coefficient: Rational,
    pub radicand: Rational,
    pub pi_power: i64,
}

impl ClosedForm {
    fn rational(c: Rational) -> Self {
        ClosedForm { coefficient: c, radicand: Rational::one(), pi_power: 0 }
    }

    /// `√(r^k)` as coefficient times square root.
    fn sqrt_pow(r: &Rational, k: u64) -> Self {
        ClosedForm {
            coefficient: num_traits::pow(r.clone(), (k / 2) as usize),
            radicand: if k % 2 == 1 { r.clone() } else { Rational::one() },
            pi_power: 0,
        }
    }

    fn mul(&self, other: &ClosedForm) -> ClosedForm {
        ClosedForm {
            coefficient: &self.coefficient * &other.coefficient,
            radicand: &self.radicand * &other.radicand,
            pi_power: self.pi_power + other.pi_power,
        }
    }

    fn recip(&self) -> ClosedForm {
        // 1/(c√r) = (1/(c·r))·√r
        ClosedForm {
            coefficient: (&self.coefficient * &self.radicand).recip(),
            radicand: self.radicand.clone(),
            pi_power: -self.pi_power,
        }
    }
}

fn factorial(k: u64) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// `π^{k/2}/Γ(k/2 + 1)` in closed form, by the factorial formulas for
/// integer and half-integer arguments.
fn ball_volume_closed(k: u64) -> ClosedForm {
    if k % 2 == 0 {
        let m = k / 2;
        ClosedForm { coefficient: int(factorial(m)).recip(), radicand: Rational::one(), pi_power: m as i64 }
    } else {
        // Γ(m + 3/2) = (2m+2)!·√π / (4^{m+1}·(m+1)!)
        let m = k / 2;
        let gamma = rat(factorial(2 * m + 2), BigInt::from(4).pow((m + 1) as u32) * factorial(m + 1));
        ClosedForm { coefficient: gamma.recip(), radicand: Rational::one(), pi_power: m as i64 }
    }
}

pub fn ell_d_closed(d: u64) -> Result<ClosedForm> {
    require_dim(d)?;
    let n = sym_dim(d as usize) as u64;
    let dd = BigInt::from(d);
    let core = &dd * &dd * &dd * (&dd + 7);
    let c = num_traits::pow(rat(8, core), n as usize) / int(factorial(n));
    Ok(ClosedForm::rational(c).mul(&ClosedForm::sqrt_pow(&int(2), n - d)))
}

pub fn u_d_closed(d: u64) -> Result<ClosedForm> {
    require_dim(d)?;
    let n = sym_dim(d as usize) as u64;
    let radius = ClosedForm::sqrt_pow(&rat(d - 1, d), n - 1);
    let height = ClosedForm::sqrt_pow(&int(d), 1).recip();
    let base = ball_volume_closed(n - 1);
    Ok(ClosedForm::rational(rat(1, n)).mul(&height).mul(&radius).mul(&base))
}

/// `u_d / ℓ_d` in closed form.
pub fn pd_upper_bound_closed(d: u64) -> Result<ClosedForm> {
    Ok(u_d_closed(d)?.mul(&ell_d_closed(d)?.recip()))
}

pub fn lambda1_upper_bound_closed(d: u64) -> Result<ClosedForm> {
    require_dim(d)?;
    let n = sym_dim(d as usize) as u64;
    let dd = BigInt::from(d);
    let core = int(&dd * &dd * &dd * (&dd + 7));
    // 2^{−(n+d/2)} = 2^{−n}·√(2^{−d})
    Ok(ClosedForm::rational(rat(1, BigInt::one() << n))
        .mul(&ClosedForm::sqrt_pow(&rat(1, 2), d))
        .mul(&ClosedForm::sqrt_pow(&core, n)))
}

/// The four logarithmic bounds for one dimension.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub d: u64,
    pub n: u64,
    pub log_ell: BigFloat,
    pub log_u: BigFloat,
    pub log_pd_bound: BigFloat,
    pub log_lambda1_bound: BigFloat,
}

/// Working precision and cached constants for the log-space evaluations.
pub struct Evaluator {
    bits: usize,
    p: usize,
    cc: Consts,
    bernoulli: Vec<Rational>,
}

impl Evaluator {
    pub fn new(bits: usize) -> Result<Self> {
        if bits < 64 {
            return Err(Error::OutOfRange("precision must be at least 64 bits".to_string()));
        }
        let cc = Consts::new().map_err(|_| Error::OutOfRange("float constants unavailable".to_string()))?;
        Ok(Evaluator { bits, p: bits + GUARD_BITS, cc, bernoulli: Vec::new() })
    }

    /// Requested precision in bits (computations carry extra guard bits).
    pub fn precision(&self) -> usize {
        self.bits
    }

    pub fn from_bigint(&self, v: &BigInt) -> BigFloat {
        if let Some(small) = v.to_i128() {
            return BigFloat::from_i128(small, self.p);
        }
        let (sign, digits) = v.to_u64_digits();
        let base = BigFloat::from_u128(1u128 << 64, self.p);
        let mut acc = BigFloat::from_u64(0, self.p);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, self.p, RM).add(&BigFloat::from_u64(*d, self.p), self.p, RM);
        }
        if sign == Sign::Minus {
            acc.inv_sign();
        }
        acc
    }

    pub fn from_rational(&self, r: &Rational) -> BigFloat {
        self.from_bigint(r.numer()).div(&self.from_bigint(r.denom()), self.p, RM)
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.p)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(self.p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.p, RM, &mut self.cc)
    }

    pub fn ln_rational(&mut self, r: &Rational) -> BigFloat {
        let x = self.from_rational(r);
        self.ln(&x)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn ln_pi(&mut self) -> BigFloat {
        let pi = self.pi();
        self.ln(&pi)
    }

    pub fn ln_2(&mut self) -> BigFloat {
        self.cc.ln_2(self.p, RM)
    }

    pub fn ln_10(&mut self) -> BigFloat {
        self.cc.ln_10(self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    fn scale(&self, a: &BigFloat, r: &Rational) -> BigFloat {
        self.mul(a, &self.from_rational(r))
    }

    /// Bernoulli numbers `B_0 … B_{2k}` by the standard recurrence.
    fn ensure_bernoulli(&mut self, upto: usize) {
        while self.bernoulli.len() <= upto {
            let m = self.bernoulli.len();
            if m == 0 {
                self.bernoulli.push(Rational::one());
                continue;
            }
            let mut acc = Rational::zero();
            let mut binom = BigInt::one();
            for (k, b) in self.bernoulli.iter().enumerate() {
                acc += b * int(binom.clone());
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            self.bernoulli.push(-acc / int(m as u64 + 1));
        }
    }

    /// `ln Γ(x)` for rational `x > 0`.
    ///
    /// Shifts the argument up to `z ≥ max(100, p/2)` via the recurrence
    /// `Γ(x+1) = xΓ(x)` (one exact product, one logarithm) and sums the
    /// Stirling series until its terms drop below the working precision.
    pub fn ln_gamma(&mut self, x: &Rational) -> Result<BigFloat> {
        if !x.is_positive() {
            return Err(Error::OutOfRange("log-Gamma needs a positive argument".to_string()));
        }
        let floor = int(100u64.max(self.p as u64 / 2));
        let mut z = x.clone();
        let mut product = Rational::one();
        while z < floor {
            product *= &z;
            z += Rational::one();
        }
        let zf = self.from_rational(&z);
        let ln_z = self.ln(&zf);
        let half = rat(1, 2);
        let mut sum = self.sub(&self.mul(&self.from_rational(&(&z - &half)), &ln_z), &zf);
        let pi = self.pi();
        let two_pi = self.mul(&pi, &self.from_u64(2));
        let ln_two_pi = self.ln(&two_pi);
        sum = self.add(&sum, &self.scale(&ln_two_pi, &half));

        let eps = BigFloat::from_u64(1, self.p).div(&self.from_bigint(&(BigInt::one() << self.p)), self.p, RM);
        let z_sq = self.mul(&zf, &zf);
        let mut z_pow = zf.clone();
        let mut k = 1usize;
        loop {
            self.ensure_bernoulli(2 * k);
            let coeff = &self.bernoulli[2 * k] / int((2 * k * (2 * k - 1)) as u64);
            let term = self.from_rational(&coeff).div(&z_pow, self.p, RM);
            sum = self.add(&sum, &term);
            if term.abs().cmp(&eps).is_some_and(|c| c < 0) {
                break;
            }
            k += 1;
            if k > 4 * self.p {
                return Err(Error::SearchFailed("Stirling series did not converge".to_string()));
            }
            z_pow = self.mul(&z_pow, &z_sq);
        }
        if !product.is_one() {
            let ln_product = self.ln_rational(&product);
            sum = self.sub(&sum, &ln_product);
        }
        Ok(sum)
    }

    /// `ln vol_k(B^k) = (k/2)·ln π − ln Γ(k/2 + 1)`.
    pub fn ball_volume_log(&mut self, k: u64) -> Result<BigFloat> {
        if k < 1 {
            return Err(Error::OutOfRange("ball dimension must be at least 1".to_string()));
        }
        let ln_pi = self.ln_pi();
        let gamma = self.ln_gamma(&rat(k + 2, 2))?;
        Ok(self.sub(&self.scale(&ln_pi, &rat(k, 2)), &gamma))
    }

    /// `ln(d³(d+7))`.
    fn ln_core(&mut self, d: u64) -> BigFloat {
        let dd = BigInt::from(d);
        self.ln_rational(&int(&dd * &dd * &dd * (&dd + 7)))
    }

    /// `ln ℓ_d = −ln n! + ((n−d)/2)·ln 2 − n·ln(d³(d+7)/8)`.
    pub fn log_ell(&mut self, d: u64) -> Result<BigFloat> {
        require_dim(d)?;
        let n = sym_dim(d as usize) as u64;
        let ln_fact = self.ln_gamma(&int(n + 1))?;
        let ln_2 = self.ln_2();
        let core = self.ln_core(d);
        let shrink = self.sub(&core, &self.scale(&ln_2, &int(3)));
        let two_part = self.scale(&ln_2, &rat(n - d, 2));
        let v = self.sub(&two_part, &ln_fact);
        Ok(self.sub(&v, &self.scale(&shrink, &int(n))))
    }

    /// `ln u_d = −ln n − ½·ln d + ((n−1)/2)·ln((d−1)/d) + ln vol_{n−1}(B^{n−1})`:
    /// a cone of height `1/√d` over a ball of radius `√((d−1)/d)`.
    pub fn log_u(&mut self, d: u64) -> Result<BigFloat> {
        require_dim(d)?;
        let n = sym_dim(d as usize) as u64;
        let ball = self.ball_volume_log(n - 1)?;
        let ln_n = self.ln_rational(&int(n));
        let ln_d = self.ln_rational(&int(d));
        let ln_ratio = self.ln_rational(&rat(d - 1, d));
        let mut v = self.sub(&ball, &ln_n);
        v = self.sub(&v, &self.scale(&ln_d, &rat(1, 2)));
        Ok(self.add(&v, &self.scale(&ln_ratio, &rat(n - 1, 2))))
    }

    /// Logarithm of the closed-form bound
    /// `(n−1)!/Γ(n/2+1/2) · √(π^{n−1}(d−1)^{n−1} / (2^{7n−d}dⁿ)) · (d³(d+7))ⁿ`.
    pub fn log_pd_bound(&mut self, d: u64) -> Result<BigFloat> {
        require_dim(d)?;
        let n = sym_dim(d as usize) as u64;
        let g1 = self.ln_gamma(&int(n))?;
        let g2 = self.ln_gamma(&rat(n + 1, 2))?;
        let ln_pi = self.ln_pi();
        let ln_2 = self.ln_2();
        let ln_dm1 = self.ln_rational(&int(d - 1));
        let ln_d = self.ln_rational(&int(d));
        let core = self.ln_core(d);
        let mut inner = self.scale(&ln_pi, &int(n - 1));
        inner = self.sub(&inner, &self.scale(&ln_2, &int(7 * n - d)));
        inner = self.add(&inner, &self.scale(&ln_dm1, &int(n - 1)));
        inner = self.sub(&inner, &self.scale(&ln_d, &int(n)));
        let mut v = self.sub(&g1, &g2);
        v = self.add(&v, &self.scale(&inner, &rat(1, 2)));
        Ok(self.add(&v, &self.scale(&core, &int(n))))
    }

    /// `ln(2^{−(n+d/2)}·(d³(d+7))^{n/2})`.
    pub fn log_lambda1_bound(&mut self, d: u64) -> Result<BigFloat> {
        require_dim(d)?;
        let n = sym_dim(d as usize) as u64;
        let ln_2 = self.ln_2();
        let core = self.ln_core(d);
        let two_part = self.scale(&ln_2, &rat(2 * n + d, 2));
        Ok(self.sub(&self.scale(&core, &rat(n, 2)), &two_part))
    }

    pub fn report(&mut self, d: u64) -> Result<BoundReport> {
        Ok(BoundReport {
            d,
            n: sym_dim(d as usize) as u64,
            log_ell: self.log_ell(d)?,
            log_u: self.log_u(d)?,
            log_pd_bound: self.log_pd_bound(d)?,
            log_lambda1_bound: self.log_lambda1_bound(d)?,
        })
    }

    /// Value of a closed form, using only multiplication, square roots and π.
    pub fn closed_value(&mut self, c: &ClosedForm) -> BigFloat {
        let mut v = self.from_rational(&c.coefficient);
        if !c.radicand.is_one() {
            let root = self.from_rational(&c.radicand).sqrt(self.p, RM);
            v = self.mul(&v, &root);
        }
        let pi = self.pi();
        let pi_pow = pi.powi(c.pi_power.unsigned_abs() as usize, self.p, RM);
        if c.pi_power >= 0 {
            self.mul(&v, &pi_pow)
        } else {
            v.div(&pi_pow, self.p, RM)
        }
    }

    /// `|a − b| ≤ 10^{−digits}·max(|a|, |b|)`.
    pub fn agrees(&mut self, a: &BigFloat, b: &BigFloat, digits: u32) -> bool {
        let diff = self.sub(a, b).abs();
        let scale = if a.abs().cmp(&b.abs()).is_some_and(|c| c >= 0) { a.abs() } else { b.abs() };
        let tol = scale.div(&self.from_bigint(&BigInt::from(10).pow(digits)), self.p, RM);
        diff.cmp(&tol).is_some_and(|c| c <= 0)
    }

    /// `log₁₀` of `e^{ln_value}`.
    pub fn log10_of(&mut self, ln_value: &BigFloat) -> BigFloat {
        let ln_10 = self.ln_10();
        ln_value.div(&ln_10, self.p, RM)
    }

    /// Mantissa in `[1, 10)` and decimal exponent of `e^{ln_value}`.
    pub fn scientific(&mut self, ln_value: &BigFloat) -> (BigFloat, i64) {
        let log10 = self.log10_of(ln_value);
        let exponent = log10.floor();
        let frac = self.sub(&log10, &exponent);
        let ln_10 = self.ln_10();
        let mantissa = self.exp(&self.mul(&frac, &ln_10));
        let e = to_f64(&exponent).round() as i64;
        (mantissa, e)
    }

    /// Decimal rendering rounded to `digits` significant digits: plain
    /// notation for moderate exponents, `me±k` otherwise.
    pub fn decimal(&mut self, x: &BigFloat, digits: usize) -> String {
        let digits = digits.max(1);
        let bits = ((digits + 8) as f64 * core::f64::consts::LOG2_10).ceil() as usize;
        let mut y = x.clone();
        let _ = y.set_precision(bits, RM);
        match y.format(Radix::Dec, RM, &mut self.cc) {
            Ok(s) => render_decimal(&s, digits),
            Err(_) => "NaN".to_string(),
        }
    }
}

/// Rounds a `[-]d.ddd[e±k]` string to `digits` significant digits.
fn render_decimal(s: &str, digits: usize) -> String {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let mut all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    // value = 0.d₁d₂… × 10^point
    let mut point = exp + int_part.len() as i64;
    let lead = all.iter().position(|&d| d != 0);
    let Some(lead) = lead else {
        return "0".to_string();
    };
    all.drain(..lead);
    point -= lead as i64;
    let round_up = all.get(digits).is_some_and(|&d| d >= 5);
    all.truncate(digits);
    all.resize(digits, 0);
    if round_up {
        let mut i = digits;
        loop {
            if i == 0 {
                all.insert(0, 1);
                all.truncate(digits);
                point += 1;
                break;
            }
            i -= 1;
            if all[i] == 9 {
                all[i] = 0;
            } else {
                all[i] += 1;
                break;
            }
        }
    }
    while all.len() > 1 && all.last() == Some(&0) {
        all.pop();
    }
    let text: String = all.iter().map(|d| char::from(b'0' + d)).collect();
    let sign = if negative { "-" } else { "" };
    if (-5..=21).contains(&point) {
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), text)
        } else if point as usize >= text.len() {
            format!("{}{}", text, "0".repeat(point as usize - text.len()))
        } else {
            format!("{}.{}", &text[..point as usize], &text[point as usize..])
        };
        format!("{sign}{body}")
    } else {
        let rest = if text.len() > 1 { format!(".{}", &text[1..]) } else { String::new() };
        format!("{sign}{}{rest}e{}", &text[..1], point - 1)
    }
}

/// Nearest `f64`, through the decimal representation.
pub fn to_f64(x: &BigFloat) -> f64 {
    let mut cc = match Consts::new() {
        Ok(cc) => cc,
        Err(_) => return f64::NAN,
    };
    let mut y = x.clone();
    let _ = y.set_precision(64, RM);
    y.format(Radix::Dec, RM, &mut cc).ok().and_then(|s| s.parse::<f64>().ok()).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ev() -> Evaluator {
        Evaluator::new(DEFAULT_PRECISION_BITS).unwrap()
    }

    // independent oracle: ln of an exact factorial
    fn ln_factorial_oracle(e: &mut Evaluator, k: u64) -> BigFloat {
        let f = int(factorial(k));
        e.ln_rational(&f)
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut e = ev();
        for k in [1u64, 2, 3, 10, 57, 150, 400] {
            let g = e.ln_gamma(&int(k + 1)).unwrap();
            let o = ln_factorial_oracle(&mut e, k);
            if k == 1 {
                assert!(to_f64(&g).abs() < 1e-60);
            } else {
                assert!(e.agrees(&g, &o, 50), "k = {k}");
            }
        }
    }

    #[test]
    fn ln_gamma_half_integers() {
        let mut e = ev();
        // Γ(m + 1/2) = (2m)!·√π/(4^m·m!)
        for m in [0u64, 1, 5, 33] {
            let g = e.ln_gamma(&rat(2 * m + 1, 2)).unwrap();
            let c = int(factorial(2 * m)) / int(BigInt::from(4).pow(m as u32) * factorial(m));
            let ln_c = e.ln_rational(&c);
            let ln_pi = e.ln_pi();
            let want = e.add(&ln_c, &e.scale(&ln_pi, &rat(1, 2)));
            assert!(e.agrees(&g, &want, 50), "m = {m}");
        }
    }

    #[test]
    fn ball_volumes() {
        let mut e = ev();
        let cases = [(1u64, rat(2, 1), 0i64), (2, rat(1, 1), 1), (3, rat(4, 3), 1)];
        for (k, c, j) in cases {
            let got = e.ball_volume_log(k).unwrap();
            let closed = ClosedForm { coefficient: c, radicand: Rational::one(), pi_power: j };
            assert_eq!(ball_volume_closed(k), closed);
            let v = e.closed_value(&closed);
            let want = e.ln(&v);
            assert!(e.agrees(&got, &want, 50), "k = {k}");
        }
        assert!(e.ball_volume_log(0).is_err());
    }

    #[test]
    fn ell_2_and_u_2() {
        assert_eq!(ell_d_exact(2), QSqrt2::sqrt2_multiple(rat(1, 4374)));
        let ell = ell_d_closed(2).unwrap();
        assert_eq!(ell.coefficient * ell.radicand.clone(), rat(2, 4374));
        let u = u_d_closed(2).unwrap();
        // π/(6√2) = (1/12)·√2·π
        assert_eq!(u, ClosedForm { coefficient: rat(1, 12), radicand: int(2), pi_power: 1 });
        let mut e = ev();
        let lu = e.log_u(2).unwrap();
        let uv = e.closed_value(&u);
        let want = e.ln(&uv);
        assert!(e.agrees(&lu, &want, 50));
    }

    #[test]
    fn pd_bound_for_the_plane() {
        let mut e = ev();
        let closed = pd_upper_bound_closed(2).unwrap();
        assert_eq!(closed.pi_power, 1);
        let v = e.closed_value(&closed);
        let pi = e.pi();
        let want = e.mul(&pi, &e.from_rational(&rat(373248, 1024)));
        assert!(e.agrees(&v, &want, 50));
        let log = e.log_pd_bound(2).unwrap();
        let direct = e.exp(&log);
        assert!(e.agrees(&direct, &want, 25));
        assert!((to_f64(&direct) - 1145.11).abs() < 0.01);
    }

    #[test]
    fn lambda1_bound_for_the_plane() {
        let mut e = ev();
        let closed = lambda1_upper_bound_closed(2).unwrap();
        let v = e.closed_value(&closed);
        // 72^{3/2}/16
        let want = e.from_rational(&int(72 * 72 * 72)).sqrt(e.p, RM).div(&e.from_u64(16), e.p, RM);
        assert!(e.agrees(&v, &want, 50));
        assert!((to_f64(&v) - 38.18).abs() < 0.01);
        let log = e.log_lambda1_bound(2).unwrap();
        let direct = e.exp(&log);
        assert!(e.agrees(&direct, &want, 25));
    }

    #[test]
    fn dual_paths_agree() {
        let mut e = ev();
        for d in 2..=6u64 {
            let pairs = [
                (e.log_ell(d).unwrap(), ell_d_closed(d).unwrap()),
                (e.log_u(d).unwrap(), u_d_closed(d).unwrap()),
                (e.log_pd_bound(d).unwrap(), pd_upper_bound_closed(d).unwrap()),
                (e.log_lambda1_bound(d).unwrap(), lambda1_upper_bound_closed(d).unwrap()),
            ];
            for (log, closed) in pairs {
                let via_log = e.exp(&log);
                let via_closed = e.closed_value(&closed);
                assert!(e.agrees(&via_log, &via_closed, 25), "d = {d}");
            }
        }
    }

    #[test]
    fn closed_ell_matches_sqrt2_value() {
        let mut e = ev();
        for d in 2..=6u64 {
            let q = ell_d_exact(d);
            let closed = ell_d_closed(d).unwrap();
            let v = e.closed_value(&closed);
            let sqrt2 = e.from_u64(2).sqrt(e.p, RM);
            let w = e.add(&e.from_rational(&q.a), &e.mul(&e.from_rational(&q.b), &sqrt2));
            assert!(e.agrees(&v, &w, 50));
        }
    }

    #[test]
    fn identity_and_monotonicity() {
        let mut e = ev();
        let mut previous: Option<BigFloat> = None;
        for d in (2..=200u64).step_by(11) {
            let r = e.report(d).unwrap();
            let diff = e.sub(&r.log_u, &r.log_ell);
            assert!(e.agrees(&r.log_pd_bound, &diff, 25), "d = {d}");
            assert!(r.log_ell.cmp(&r.log_u).is_some_and(|c| c < 0));
            if let Some(p) = &previous {
                assert!(p.cmp(&r.log_pd_bound).is_some_and(|c| c < 0));
            }
            previous = Some(r.log_pd_bound);
        }
    }

    #[test]
    fn large_dimensions_are_finite() {
        let mut e = ev();
        for d in [1000u64, 10000] {
            let r = e.report(d).unwrap();
            for v in [&r.log_ell, &r.log_u, &r.log_pd_bound, &r.log_lambda1_bound] {
                assert!(!v.is_nan() && !v.is_inf());
            }
        }
        assert!(e.report(1).is_err());
    }

    #[test]
    fn scientific_notation() {
        let mut e = ev();
        let x = e.from_u64(1145);
        let ln = e.ln(&x);
        let (m, k) = e.scientific(&ln);
        assert_eq!(k, 3);
        assert!((to_f64(&m) - 1.145).abs() < 1e-12);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_decimal("3.14159e+0", 3), "3.14");
        assert_eq!(render_decimal("-9.9996e+2", 4), "-1000");
        assert_eq!(render_decimal("1.25e-3", 2), "0.0013");
        assert_eq!(render_decimal("4.2e+30", 5), "4.2e30");
        assert_eq!(render_decimal("7.0e-9", 3), "7e-9");
        assert_eq!(render_decimal("0.0", 3), "0");
        let mut e = ev();
        let x = e.from_rational(&rat(-1, 3));
        assert_eq!(e.decimal(&x, 5), "-0.33333");
    }

    #[test]
    fn simplex_volumes() {
        let id: Vec<Vec<Rational>> =
            (0..3).map(|i| (0..3).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
        assert_eq!(simplex_volume(&id).unwrap(), rat(1, 6));
        let doubled: Vec<Vec<Rational>> = id.iter().map(|r| r.iter().map(|v| v * int(2)).collect()).collect();
        assert_eq!(simplex_volume(&doubled).unwrap(), rat(8, 6));
        let dependent = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(simplex_volume(&dependent).unwrap(), int(0));
        assert!(simplex_volume(&[vec![int(1)], vec![int(1), int(2)]]).is_err());
    }

    #[test]
    fn cone_over_base() {
        // right-angled: apex at height h over the standard simplex of e_1..e_{k}
        // in the first k coordinates; (h/n)·vol_{n−1}(base) with vol = 1/(n−1)!
        for n in 2..6usize {
            let h = rat(3, 2);
            let mut pts: Vec<Vec<Rational>> =
                (0..n - 1).map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
            pts.push((0..n).map(|j| if j == n - 1 { h.clone() } else { int(0) }).collect());
            let base = int(factorial(n as u64 - 1)).recip();
            assert_eq!(simplex_volume(&pts).unwrap(), h * base / int(n as u64));
        }
    }

    #[test]
    fn hadamard_form_of_the_minimum_bound() {
        // 2^{−(n+d/2)}·(d³(d+7))^{n/2} == 2^{(n−d)/2}·(d³(d+7)/8)^{n/2}, squared
        for d in 2..=8u64 {
            let n = sym_dim(d as usize) as u32;
            let core = int(d * d * d * (d + 7));
            let lhs = num_traits::pow(core.clone(), n as usize) / int(BigInt::one() << (2 * n as u64 + d));
            let rhs = int(BigInt::one() << (n as u64 - d)) * num_traits::pow(core / int(8), n as usize);
            assert_eq!(lhs, rhs);
        }
    }
}

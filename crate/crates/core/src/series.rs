//! Evaluation rings for closed-form coordinate expressions: exact truncated
//! power series in x⁻ around x⁻ = 0 and complex floating point numbers.

use std::fmt;

use num_complex::Complex64;

use crate::scalar::{GRat, Rational, Scalar};

/// Commutative ring operations needed to evaluate coordinate expressions.
pub trait Ring: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn from_scalar_like(&self, c: &Scalar) -> Self;
    fn from_grat_like(&self, c: &GRat) -> Self {
        self.from_scalar_like(&Scalar::from_gauss(c.clone()))
    }
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale_s(&self, c: &Scalar) -> Self {
        self.mul(&self.from_scalar_like(c))
    }
    fn scale(&self, c: &GRat) -> Self {
        self.scale_s(&Scalar::from_gauss(c.clone()))
    }
    /// Size used for residual tests: exact rings report 0 only for exact zero.
    fn magnitude(&self) -> f64;
}

/// Truncated power series Σ cₖ tᵏ (k < order) with coefficients in ℚ(i, √2).
#[derive(Clone, PartialEq)]
pub struct Series {
    pub coeffs: Vec<Scalar>,
}

impl Series {
    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut coeffs = vec![Scalar::default(); order];
        coeffs[0] = c;
        Series { coeffs }
    }

    /// The series variable t itself.
    pub fn variable(order: usize) -> Self {
        let mut coeffs = vec![Scalar::default(); order];
        if order > 1 {
            coeffs[1] = Scalar::from_int(1);
        }
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// cos(λt) or sin(λt) expanded to the given order.
    pub fn trig(lambda: &GRat, sine: bool, order: usize) -> Self {
        let mut coeffs = vec![Scalar::default(); order];
        let mut fact = Rational::from_int(1);
        let mut pow = GRat::from_int(1);
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                fact = &fact * &Rational::from_int(k as i64);
                pow = &pow * lambda;
            }
            let wanted = if sine { k % 2 == 1 } else { k % 2 == 0 };
            if !wanted {
                continue;
            }
            // cos: (−1)^{k/2}; sin: (−1)^{(k−1)/2}
            let negative = (k / 2) % 2 == 1;
            let term = pow.scale(&fact.recip().expect("factorial"));
            *c = Scalar::from_gauss(if negative { -term } else { term });
        }
        Series { coeffs }
    }

    pub fn value_at_zero(&self) -> Scalar {
        self.coeffs[0].clone()
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})t^{k}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Ring for Series {
    fn zero_like(&self) -> Self {
        Series { coeffs: vec![Scalar::default(); self.order()] }
    }
    fn from_scalar_like(&self, c: &Scalar) -> Self {
        Series::constant(c.clone(), self.order())
    }
    fn add(&self, o: &Self) -> Self {
        Series { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        Series { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let n = self.order();
        let mut coeffs = vec![Scalar::default(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Series { coeffs }
    }
    fn neg(&self) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
    fn scale_s(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.coeffs.iter().map(|c| c.to_c64().norm()).fold(f64::MIN_POSITIVE, f64::max)
        }
    }
}

impl Ring for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_scalar_like(&self, c: &Scalar) -> Self {
        c.to_c64()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// A coordinate of ℝ^{1,10} in the chart (x⁺, x⁻, x¹…x⁹).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Plus,
    Minus,
    /// Transverse coordinate xⁱ, 1-based.
    T(usize),
}

impl Coord {
    pub fn slot(self) -> usize {
        match self {
            Coord::Plus => 0,
            Coord::Minus => 1,
            Coord::T(i) => 1 + i,
        }
    }

    pub fn from_slot(s: usize) -> Coord {
        match s {
            0 => Coord::Plus,
            1 => Coord::Minus,
            k => Coord::T(k - 1),
        }
    }
}

/// A point at which coordinate expressions can be evaluated in some ring.
pub trait Evaluator {
    type R: Ring;
    fn coord(&self, c: Coord) -> Self::R;
    /// cos(λx⁻) (`sine = false`) or sin(λx⁻) (`sine = true`).
    fn trig(&self, lambda: &GRat, sine: bool) -> Self::R;
    fn constant(&self, c: &GRat) -> Self::R {
        self.coord(Coord::Plus).from_grat_like(c)
    }
    fn zero(&self) -> Self::R {
        self.coord(Coord::Plus).zero_like()
    }
    /// Number of transverse coordinates.
    fn n(&self) -> usize;
}

/// Exact evaluation: rational x⁺ and xⁱ, with x⁻ the formal series variable
/// around x⁻ = 0 (the jet of the expression in x⁻ up to `order`).
#[derive(Clone, Debug)]
pub struct JetPoint {
    pub x_plus: Rational,
    pub x_trans: Vec<Rational>,
    pub order: usize,
}

impl JetPoint {
    pub fn origin(n: usize, order: usize) -> Self {
        JetPoint { x_plus: Rational::from_int(0), x_trans: vec![Rational::from_int(0); n], order }
    }
}

impl Evaluator for JetPoint {
    type R = Series;
    fn coord(&self, c: Coord) -> Series {
        match c {
            Coord::Plus => Series::constant(Scalar::from_rational(self.x_plus.clone()), self.order),
            Coord::Minus => Series::variable(self.order),
            Coord::T(i) => Series::constant(Scalar::from_rational(self.x_trans[i - 1].clone()), self.order),
        }
    }
    fn trig(&self, lambda: &GRat, sine: bool) -> Series {
        Series::trig(lambda, sine, self.order)
    }
    fn n(&self) -> usize {
        self.x_trans.len()
    }
}

/// Floating point evaluation at a complex coordinate point (x⁺, x⁻, x¹…xⁿ).
#[derive(Clone, Debug)]
pub struct FloatPoint {
    pub x: Vec<Complex64>,
}

impl Evaluator for FloatPoint {
    type R = Complex64;
    fn coord(&self, c: Coord) -> Complex64 {
        self.x[c.slot()]
    }
    fn trig(&self, lambda: &GRat, sine: bool) -> Complex64 {
        let arg = lambda.to_c64() * self.x[1];
        if sine {
            arg.sin()
        } else {
            arg.cos()
        }
    }
    fn n(&self) -> usize {
        self.x.len() - 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_series_identity() {
        let lam = GRat::new(Rational::new(2, 3), Rational::new(-1, 5));
        let c = Series::trig(&lam, false, 9);
        let s = Series::trig(&lam, true, 9);
        let one = c.mul(&c).add(&s.mul(&s));
        assert_eq!(one, Series::constant(Scalar::from_int(1), 9));
    }
}

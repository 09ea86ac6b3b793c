//! Truncated Taylor series ("jets") in one variable.
//!
//! A [`Jet`] of order `N` stores `a_0 + a_1 h + ... + a_N h^N` with
//! `a_k = f^(k)(x0) / k!`. All arithmetic is truncated at the operands' common
//! order, so derivatives of everything built from jets come out exact up to
//! rounding. Elementary functions use the usual first-order ODE recurrences;
//! composition and reversion use nested (Horner) evaluation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Largest supported jet order.
pub const MAX_ORDER: usize = 24;
const CAP: usize = MAX_ORDER + 1;

#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [f64; CAP],
    order: usize,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Jet").field(&self.coeffs()).finish()
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        Err(Error::OrderTooLarge {
            requested: order,
            max: MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

impl Jet {
    /// Builds a jet from normalized Taylor coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InsufficientOrder { needed: 1, have: 0 });
        }
        check_order(coeffs.len() - 1)?;
        let mut jet = Self::zero(coeffs.len() - 1);
        jet.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(jet)
    }

    /// Zero jet. Panics if `order > MAX_ORDER`.
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Jet {
            coeffs: [0.0; CAP],
            order,
        }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut jet = Self::zero(order);
        jet.coeffs[0] = value;
        jet
    }

    /// The independent variable expanded about `x0`: `x0 + h`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut jet = Self::constant(x0, order);
        if order >= 1 {
            jet.coeffs[1] = 1.0;
        }
        jet
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..=self.order]
    }

    #[inline]
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs()[k]
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `f^(k)(x0)`, i.e. `k! * a_k`.
    pub fn derivative_at(&self, k: usize) -> f64 {
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        self.coeff(k) * factorial
    }

    /// True when every coefficient above the constant term is exactly zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs()[1..].iter().all(|&c| c == 0.0)
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order, "cannot raise jet order by truncation");
        let mut jet = *self;
        jet.coeffs[order + 1..].fill(0.0);
        jet.order = order;
        jet
    }

    pub fn map_coeffs(&self, f: impl Fn(usize, f64) -> f64) -> Jet {
        let mut jet = *self;
        for (k, c) in jet.coeffs[..=self.order].iter_mut().enumerate() {
            *c = f(k, *c);
        }
        jet
    }

    /// Jet of the derivative, one order lower.
    pub fn derivative(&self) -> Result<Jet> {
        if self.order == 0 {
            return Err(Error::InsufficientOrder { needed: 1, have: 0 });
        }
        let mut out = Jet::zero(self.order - 1);
        for k in 0..self.order {
            out.coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Ok(out)
    }

    /// Antiderivative with constant term `c0`, one order higher.
    pub fn integrate(&self, c0: f64) -> Result<Jet> {
        check_order(self.order + 1)?;
        let mut out = Jet::zero(self.order + 1);
        out.coeffs[0] = c0;
        for k in 0..=self.order {
            out.coeffs[k + 1] = self.coeffs[k] / (k + 1) as f64;
        }
        Ok(out)
    }

    /// Evaluates the truncated polynomial at offset `h`.
    pub fn eval(&self, h: f64) -> f64 {
        self.coeffs().iter().rev().fold(0.0, |acc, &c| acc * h + c)
    }

    pub fn scale(&self, s: f64) -> Jet {
        self.map_coeffs(|_, c| c * s)
    }

    pub fn checked_div(&self, rhs: &Jet) -> Result<Jet> {
        assert_same_order(self, rhs);
        let b0 = rhs.coeffs[0];
        if b0 == 0.0 || !b0.is_finite() {
            return Err(Error::DivisionByZeroJet);
        }
        let mut out = Jet::zero(self.order);
        for k in 0..=self.order {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = acc / b0;
        }
        Ok(out)
    }

    pub fn recip(&self) -> Result<Jet> {
        Jet::constant(1.0, self.order).checked_div(self)
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(Error::DomainError(format!(
                "sqrt of jet with constant term {a0}"
            )));
        }
        let mut out = Jet::zero(self.order);
        out.coeffs[0] = a0.sqrt();
        let two_b0 = 2.0 * out.coeffs[0];
        for k in 1..=self.order {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= out.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = acc / two_b0;
        }
        Ok(out)
    }

    pub fn exp(&self) -> Jet {
        let mut out = Jet::zero(self.order);
        out.coeffs[0] = self.coeffs[0].exp();
        for k in 1..=self.order {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = acc / k as f64;
        }
        out
    }

    pub fn ln(&self) -> Result<Jet> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(Error::DomainError(format!(
                "log of jet with constant term {a0}"
            )));
        }
        let mut out = Jet::zero(self.order);
        out.coeffs[0] = a0.ln();
        for k in 1..=self.order {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * out.coeffs[j] * self.coeffs[k - j];
            }
            out.coeffs[k] = (self.coeffs[k] - acc / k as f64) / a0;
        }
        Ok(out)
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let mut s = Jet::zero(self.order);
        let mut c = Jet::zero(self.order);
        let (s0, c0) = self.coeffs[0].sin_cos();
        s.coeffs[0] = s0;
        c.coeffs[0] = c0;
        for k in 1..=self.order {
            let (mut ds, mut dc) = (0.0, 0.0);
            for j in 1..=k {
                let ja = j as f64 * self.coeffs[j];
                ds += ja * c.coeffs[k - j];
                dc -= ja * s.coeffs[k - j];
            }
            s.coeffs[k] = ds / k as f64;
            c.coeffs[k] = dc / k as f64;
        }
        (s, c)
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Result<Jet> {
        let (s, c) = self.sin_cos();
        s.checked_div(&c)
            .map_err(|_| Error::DomainError(format!("tan at pole {}", self.coeffs[0])))
    }

    pub fn atan(&self) -> Jet {
        if self.order == 0 {
            return Jet::constant(self.coeffs[0].atan(), 0);
        }
        // atan(a)' = a' / (1 + a^2); the denominator never vanishes.
        let da = self.derivative().expect("order >= 1");
        let denom = (*self * *self + 1.0).truncate(self.order - 1);
        let d = da.checked_div(&denom).expect("1 + a^2 > 0");
        d.integrate(self.coeffs[0].atan()).expect("order preserved")
    }

    /// `self^p` for a real exponent; requires a positive constant term unless
    /// `p` is an integer.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            return self.powi(p as i32);
        }
        let a0 = self.coeffs[0];
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(Error::DomainError(format!(
                "non-integer power {p} of jet with constant term {a0}"
            )));
        }
        let mut out = Jet::zero(self.order);
        out.coeffs[0] = a0.powf(p);
        for k in 1..=self.order {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (p * j as f64 - (k - j) as f64) * self.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = acc / (k as f64 * a0);
        }
        Ok(out)
    }

    pub fn powi(&self, n: i32) -> Result<Jet> {
        let mut base = if n < 0 { self.recip()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        Ok(acc)
    }

    /// `self^exponent` with a jet exponent. Constant exponents dispatch to
    /// [`Jet::powf`]; otherwise `exp(exponent * ln(self))`.
    pub fn pow(&self, exponent: &Jet) -> Result<Jet> {
        assert_same_order(self, exponent);
        if exponent.is_constant() {
            self.powf(exponent.value())
        } else {
            Ok((*exponent * self.ln()?).exp())
        }
    }

    /// `outer(inner(h))`; `inner` must vanish at the expansion point.
    pub fn compose(outer: &Jet, inner: &Jet) -> Result<Jet> {
        assert_same_order(outer, inner);
        if inner.coeffs[0] != 0.0 {
            return Err(Error::CompositionOffsetError(inner.coeffs[0]));
        }
        let mut acc = Jet::constant(outer.coeffs[outer.order], outer.order);
        for k in (0..outer.order).rev() {
            acc = acc * *inner;
            acc.coeffs[0] += outer.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse `b` with `compose(self, b) = h`.
    pub fn revert(&self) -> Result<Jet> {
        if self.coeffs[0] != 0.0 {
            return Err(Error::CompositionOffsetError(self.coeffs[0]));
        }
        if self.order == 0 {
            return Ok(*self);
        }
        let a1 = self.coeffs[1];
        if a1 == 0.0 || !a1.is_finite() {
            return Err(Error::NotInvertibleJet);
        }
        let mut inv = Jet::zero(self.order);
        inv.coeffs[1] = 1.0 / a1;
        // Coefficient k of compose(self, inv) is a1 * inv_k plus terms in
        // lower coefficients of inv, so each pass fixes one more order.
        for k in 2..=self.order {
            let partial = Jet::compose(&self.truncate(k), &inv.truncate(k))?;
            inv.coeffs[k] = -partial.coeffs[k] / a1;
        }
        Ok(inv)
    }
}

#[inline]
fn assert_same_order(a: &Jet, b: &Jet) {
    assert_eq!(a.order, b.order, "jet order mismatch");
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        assert_same_order(&self, &rhs);
        for k in 0..=self.order {
            self.coeffs[k] += rhs.coeffs[k];
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        assert_same_order(&self, &rhs);
        for k in 0..=self.order {
            self.coeffs[k] -= rhs.coeffs[k];
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        assert_same_order(&self, &rhs);
        let mut out = Jet::zero(self.order);
        for i in 0..=self.order {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..=self.order - i {
                out.coeffs[i + j] += a * rhs.coeffs[j];
            }
        }
        out
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_coeffs(|_, c| -c)
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

/// A point-valued jet: one [`Jet`] per coordinate, all of the same order.
#[derive(Clone, Debug, PartialEq)]
pub struct VecJet {
    components: Vec<Jet>,
}

impl VecJet {
    pub fn new(components: Vec<Jet>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::DimensionError("empty vector jet".into()));
        };
        let order = first.order();
        if components.iter().any(|c| c.order() != order) {
            return Err(Error::DimensionError(
                "vector jet components disagree on order".into(),
            ));
        }
        Ok(VecJet { components })
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        VecJet {
            components: vec![Jet::zero(order); dim],
        }
    }

    /// Constant jet at a point.
    pub fn constant(point: &[f64], order: usize) -> Self {
        VecJet {
            components: point.iter().map(|&x| Jet::constant(x, order)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.components[0].order()
    }

    pub fn components(&self) -> &[Jet] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Jet {
        &self.components[i]
    }

    pub fn value(&self) -> Vec<f64> {
        self.coefficient(0)
    }

    /// The vector of `k`-th normalized coefficients.
    pub fn coefficient(&self, k: usize) -> Vec<f64> {
        self.components.iter().map(|c| c.coeff(k)).collect()
    }

    /// The `k`-th derivative vector at the expansion point.
    pub fn derivative_at(&self, k: usize) -> Vec<f64> {
        self.components.iter().map(|c| c.derivative_at(k)).collect()
    }

    pub fn truncate(&self, order: usize) -> VecJet {
        VecJet {
            components: self.components.iter().map(|c| c.truncate(order)).collect(),
        }
    }

    pub fn derivative(&self) -> Result<VecJet> {
        Ok(VecJet {
            components: self
                .components
                .iter()
                .map(Jet::derivative)
                .collect::<Result<_>>()?,
        })
    }

    pub fn dot(&self, rhs: &VecJet) -> Jet {
        assert_eq!(self.dim(), rhs.dim(), "vector jet dimension mismatch");
        self.components
            .iter()
            .zip(&rhs.components)
            .fold(Jet::zero(self.order()), |acc, (a, b)| acc + *a * *b)
    }

    pub fn norm_squared(&self) -> Jet {
        self.dot(self)
    }

    pub fn scale(&self, s: &Jet) -> VecJet {
        VecJet {
            components: self.components.iter().map(|c| *c * *s).collect(),
        }
    }

    pub fn scale_f64(&self, s: f64) -> VecJet {
        VecJet {
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// `self + s * rhs`.
    pub fn add_scaled(&self, s: &Jet, rhs: &VecJet) -> VecJet {
        VecJet {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| *a + *s * *b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &VecJet) -> VecJet {
        VecJet {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }

    pub fn add(&self, rhs: &VecJet) -> VecJet {
        VecJet {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    /// Composes every component with `inner` (which must vanish at 0).
    pub fn compose(&self, inner: &Jet) -> Result<VecJet> {
        Ok(VecJet {
            components: self
                .components
                .iter()
                .map(|c| Jet::compose(c, inner))
                .collect::<Result<_>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn jet(c: &[f64]) -> Jet {
        Jet::new(c).unwrap()
    }

    fn assert_coeffs(actual: &Jet, expected: &[f64], tol: f64) {
        assert_eq!(actual.order() + 1, expected.len());
        for (a, e) in actual.coeffs().iter().zip(expected) {
            assert_abs_diff_eq!(*a, *e, epsilon = tol);
        }
    }

    #[test]
    fn difference_of_squares() {
        let p = jet(&[1.0, 1.0, 0.0]) * jet(&[1.0, -1.0, 0.0]);
        assert_coeffs(&p, &[1.0, 0.0, -1.0], 0.0);
    }

    #[test]
    fn geometric_series() {
        let q = jet(&[1.0, 0.0, 0.0, 0.0])
            .checked_div(&jet(&[1.0, -1.0, 0.0, 0.0]))
            .unwrap();
        assert_coeffs(&q, &[1.0, 1.0, 1.0, 1.0], 0.0);
    }

    #[test]
    fn sin_times_cos() {
        // sin h cos h = sin(2h)/2 = h - (2/3) h^3 + ...
        let h = Jet::variable(0.0, 3);
        let p = h.sin() * h.cos();
        assert_coeffs(&p, &[0.0, 1.0, 0.0, -2.0 / 3.0], 1e-15);
    }

    #[test]
    fn division_by_zero_constant_term() {
        let err = jet(&[1.0, 2.0]).checked_div(&jet(&[0.0, 1.0]));
        assert_eq!(err, Err(Error::DivisionByZeroJet));
    }

    #[test]
    fn elementary_examples() {
        assert_coeffs(&Jet::zero(4).exp(), &[1.0, 0.0, 0.0, 0.0, 0.0], 0.0);
        assert_coeffs(&jet(&[4.0, 4.0, 1.0]).sqrt().unwrap(), &[2.0, 1.0, 0.0], 1e-15);
        assert_coeffs(
            &jet(&[0.0, 2.0, 0.0, 0.0]).sin(),
            &[0.0, 2.0, 0.0, -4.0 / 3.0],
            1e-15,
        );
    }

    #[test]
    fn elementary_domain_errors() {
        assert!(matches!(jet(&[-1.0, 1.0]).sqrt(), Err(Error::DomainError(_))));
        assert!(matches!(jet(&[0.0, 1.0]).ln(), Err(Error::DomainError(_))));
        assert!(matches!(jet(&[-2.0, 1.0]).powf(0.5), Err(Error::DomainError(_))));
        // integer powers of negative bases are fine
        let cube = jet(&[-2.0, 1.0, 0.0, 0.0]).powf(3.0).unwrap();
        assert_coeffs(&cube, &[-8.0, 12.0, -6.0, 1.0], 1e-14);
    }

    #[test]
    fn log_and_atan_series() {
        // ln(1 + h) = h - h^2/2 + h^3/3 - h^4/4
        let l = jet(&[1.0, 1.0, 0.0, 0.0, 0.0]).ln().unwrap();
        assert_coeffs(&l, &[0.0, 1.0, -0.5, 1.0 / 3.0, -0.25], 1e-15);
        // atan(h) = h - h^3/3 + h^5/5
        let a = Jet::variable(0.0, 5).atan();
        assert_coeffs(&a, &[0.0, 1.0, 0.0, -1.0 / 3.0, 0.0, 0.2], 1e-15);
    }

    #[test]
    fn compose_examples() {
        let f = jet(&[0.3, -1.2, 2.5, 0.7]);
        let id = Jet::variable(0.0, 3);
        assert_eq!(Jet::compose(&f, &id).unwrap(), f);

        let two_h = jet(&[0.0, 2.0, 0.0, 0.0]);
        assert_coeffs(&Jet::compose(&id, &two_h).unwrap(), &[0.0, 2.0, 0.0, 0.0], 0.0);

        let exp_jet = Jet::variable(0.0, 3).exp();
        let h2 = jet(&[0.0, 0.0, 1.0, 0.0]);
        assert_coeffs(&Jet::compose(&exp_jet, &h2).unwrap(), &[1.0, 0.0, 1.0, 0.0], 1e-15);

        assert_eq!(
            Jet::compose(&f, &jet(&[0.5, 1.0, 0.0, 0.0])),
            Err(Error::CompositionOffsetError(0.5))
        );
    }

    #[test]
    fn revert_examples() {
        assert_coeffs(
            &jet(&[0.0, 2.0, 0.0, 0.0]).revert().unwrap(),
            &[0.0, 0.5, 0.0, 0.0],
            0.0,
        );
        let id = Jet::variable(0.0, 5);
        assert_eq!(id.revert().unwrap(), id);
        // s = θ + θ², θ(s) = (-1 + sqrt(1 + 4s))/2 = s - s² + 2s³ - ...
        let r = jet(&[0.0, 1.0, 1.0, 0.0]).revert().unwrap();
        assert_coeffs(&r, &[0.0, 1.0, -1.0, 2.0], 1e-15);
        assert_eq!(jet(&[0.0, 0.0, 1.0]).revert(), Err(Error::NotInvertibleJet));
    }

    #[test]
    fn derivative_and_integral() {
        let f = jet(&[1.0, 2.0, 3.0, 4.0]);
        let d = f.derivative().unwrap();
        assert_coeffs(&d, &[2.0, 6.0, 12.0], 0.0);
        assert_eq!(d.integrate(1.0).unwrap(), f);
        assert!(Jet::constant(1.0, 0).derivative().is_err());
        assert_eq!(f.derivative_at(3), 24.0);
    }

    #[test]
    fn order_bounds() {
        assert!(Jet::new(&[0.0; MAX_ORDER + 2]).is_err());
        assert!(Jet::variable(0.0, MAX_ORDER).integrate(0.0).is_err());
    }

    #[test]
    fn vecjet_dot_and_compose() {
        let v = VecJet::new(vec![Jet::variable(0.0, 3).cos(), Jet::variable(0.0, 3).sin()]).unwrap();
        let n = v.norm_squared();
        assert_coeffs(&n, &[1.0, 0.0, 0.0, 0.0], 1e-15);
        assert!(VecJet::new(vec![Jet::zero(2), Jet::zero(3)]).is_err());
    }
}

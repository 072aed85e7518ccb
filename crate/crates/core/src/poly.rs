//! Piecewise polynomials in time with exact calculus.
//!
//! Every boundary density and every operator output in this crate is a
//! piecewise polynomial in `t`, so integrals, delays and trigonometric
//! moments are carried out exactly piece by piece.

use num_complex::Complex64;

use crate::quad::gauss24;

/// Breakpoints closer than this (relative) are treated as one.
const SNAP: f64 = 1e-12;

/// Polynomial in a local variable, coefficients by increasing degree.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn linear(c0: f64, c1: f64) -> Self {
        Self { coeffs: vec![c0, c1] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative vanishing at `s = 0`.
    pub fn antiderivative(&self) -> Poly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(0.0);
        out.extend(self.coeffs.iter().enumerate().map(|(i, &c)| c / (i as f64 + 1.0)));
        Poly::new(out)
    }

    /// `q(s) = p(s + d)`.
    pub fn shift(&self, d: f64) -> Poly {
        if d == 0.0 {
            return self.clone();
        }
        // Horner in the shifted variable: acc <- acc * (s + d) + c
        let mut acc: Vec<f64> = Vec::with_capacity(self.coeffs.len());
        for &c in self.coeffs.iter().rev() {
            let mut next = vec![0.0; acc.len() + 1];
            for (i, &a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] += d * a;
            }
            next[0] += c;
            acc = next;
        }
        Poly::new(acc)
    }

    /// `q(s) = p(-s)`.
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scaled(&self, c: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).copied().unwrap_or(0.0) + other.coeffs.get(i).copied().unwrap_or(0.0))
                .collect(),
        )
    }

    /// `∫_0^len p(s) ds`.
    pub fn integral(&self, len: f64) -> f64 {
        self.antiderivative().eval(len)
    }

    /// `∫_0^len p(s) e^{iω(origin + s)} ds`; real part is the cosine moment,
    /// imaginary part the sine moment.
    pub fn oscillatory_integral(&self, origin: f64, len: f64, omega: f64) -> Complex64 {
        if self.is_zero() || len <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if omega * len <= 2.0 {
            // short panel: the closed form cancels badly, Gauss is exact to roundoff
            let (mut re, mut im) = (0.0, 0.0);
            for (s, w) in gauss24().mapped(0.0, len) {
                let p = self.eval(s);
                let (sn, cs) = (omega * (origin + s)).sin_cos();
                re += w * p * cs;
                im += w * p * sn;
            }
            return Complex64::new(re, im);
        }
        // ∫ q e^{iωs} = e^{iωs} Σ_n (-1)^n q^{(n)}(s) / (iω)^{n+1}
        let iw = Complex64::new(0.0, omega);
        let bracket = |s: f64| {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut q = self.clone();
            let mut denom = iw;
            let mut sign = 1.0;
            while !q.coeffs.is_empty() {
                sum += sign * q.eval(s) / denom;
                q = q.derivative();
                denom *= iw;
                sign = -sign;
            }
            Complex64::from_polar(1.0, omega * (origin + s)) * sum
        };
        bracket(len) - bracket(0.0)
    }
}

fn same_point(a: f64, b: f64) -> bool {
    (a - b).abs() <= SNAP * (1.0 + a.abs().max(b.abs()))
}

fn merge_breaks(mut all: Vec<f64>) -> Vec<f64> {
    all.sort_by(f64::total_cmp);
    all.dedup_by(|next, kept| same_point(*next, *kept));
    all
}

/// Piecewise polynomial with pieces on `[b_i, b_{i+1})`, each stored in the
/// local variable `s = t - b_i`. Zero outside `[b_0, b_n]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PiecewisePoly {
    breaks: Vec<f64>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Poly>) -> Self {
        assert!(
            (breaks.is_empty() && pieces.is_empty()) || breaks.len() == pieces.len() + 1,
            "piece count must be one less than breakpoint count"
        );
        debug_assert!(breaks.windows(2).all(|w| w[0] < w[1]), "breakpoints must increase");
        Self { breaks, pieces }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Single polynomial piece on `[a, b]`, expressed in `s = t - a`.
    pub fn single(a: f64, b: f64, poly: Poly) -> Self {
        Self::new(vec![a, b], vec![poly])
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Poly::is_zero)
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        Some((*self.breaks.first()?, *self.breaks.last()?))
    }

    /// Index of the piece containing `t` (left-closed pieces, last one closed).
    fn locate(&self, t: f64) -> Option<usize> {
        let (a, b) = self.support()?;
        if t < a || t > b {
            return None;
        }
        let idx = self.breaks.partition_point(|&x| x <= t);
        Some(idx.saturating_sub(1).min(self.pieces.len() - 1))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.locate(t) {
            Some(i) => self.pieces[i].eval(t - self.breaks[i]),
            None => 0.0,
        }
    }

    pub fn eval_derivative(&self, t: f64) -> f64 {
        match self.locate(t) {
            Some(i) => self.pieces[i].derivative().eval(t - self.breaks[i]),
            None => 0.0,
        }
    }

    /// `∫_{-∞}^{s} p(τ) dτ`.
    pub fn integral_to(&self, s: f64) -> f64 {
        let mut total = 0.0;
        for (i, piece) in self.pieces.iter().enumerate() {
            let (a, b) = (self.breaks[i], self.breaks[i + 1]);
            if s <= a {
                break;
            }
            total += piece.integral(s.min(b) - a);
        }
        total
    }

    pub fn total_integral(&self) -> f64 {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, p)| p.integral(self.breaks[i + 1] - self.breaks[i]))
            .sum()
    }

    /// Polynomial valid on `[a, b]` expressed in `s = t - a`.
    fn piece_on(&self, a: f64, b: f64) -> Poly {
        match self.locate(0.5 * (a + b)) {
            Some(i) => self.pieces[i].shift(a - self.breaks[i]),
            None => Poly::zero(),
        }
    }

    /// Re-expresses on the given (finer) breakpoints.
    fn refined(&self, breaks: &[f64]) -> Vec<Poly> {
        breaks.windows(2).map(|w| self.piece_on(w[0], w[1])).collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(self.breaks.clone(), self.pieces.iter().map(|p| p.scaled(c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.pieces.is_empty() {
            return other.clone();
        }
        if other.pieces.is_empty() {
            return self.clone();
        }
        let breaks = merge_breaks(self.breaks.iter().chain(&other.breaks).copied().collect());
        let lhs = self.refined(&breaks);
        let rhs = other.refined(&breaks);
        let pieces = lhs.iter().zip(&rhs).map(|(a, b)| a.add(b)).collect();
        Self::new(breaks, pieces)
    }

    pub fn add_scaled(&self, other: &Self, c: f64) -> Self {
        self.add(&other.scaled(c))
    }

    /// Antiderivative from the start of the support, continued as a constant
    /// up to `end`.
    pub fn antiderivative(&self, end: f64) -> Self {
        let Some((_, last)) = self.support() else {
            return Self::zero();
        };
        let mut breaks = self.breaks.clone();
        let mut pieces = Vec::with_capacity(self.pieces.len() + 1);
        let mut acc = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let anti = p.antiderivative();
            pieces.push(anti.add(&Poly::constant(acc)));
            acc += anti.eval(self.breaks[i + 1] - self.breaks[i]);
        }
        if end > last && !same_point(end, last) {
            breaks.push(end);
            pieces.push(Poly::constant(acc));
        }
        Self::new(breaks, pieces)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.breaks.clone(), self.pieces.iter().map(Poly::derivative).collect())
    }

    /// `q(t) = p(t - d)`, truncated to `t ≤ end`.
    pub fn delayed(&self, d: f64, end: f64) -> Self {
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let a = self.breaks[i] + d;
            let b = self.breaks[i + 1] + d;
            if a >= end || same_point(a, end) {
                break;
            }
            if breaks.is_empty() {
                breaks.push(a);
            }
            let b = if b > end { end } else { b };
            breaks.push(b);
            pieces.push(p.clone());
        }
        Self::new(breaks, pieces)
    }

    /// `q(t) = p(total - t)`.
    pub fn reversed(&self, total: f64) -> Self {
        let n = self.pieces.len();
        let breaks = self.breaks.iter().rev().map(|&b| total - b).collect();
        let pieces = (0..n)
            .rev()
            .map(|i| {
                let len = self.breaks[i + 1] - self.breaks[i];
                self.pieces[i].shift(len).reflect()
            })
            .collect();
        Self::new(breaks, pieces)
    }

    /// Exact `∫ p q dt`.
    pub fn inner(&self, other: &Self) -> f64 {
        let (Some((a0, a1)), Some((b0, b1))) = (self.support(), other.support()) else {
            return 0.0;
        };
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        if hi <= lo || same_point(lo, hi) {
            return 0.0;
        }
        let within = |x: &&f64| **x > lo && **x < hi;
        let mut cuts = vec![lo, hi];
        cuts.extend(self.breaks.iter().filter(within));
        cuts.extend(other.breaks.iter().filter(within));
        let cuts = merge_breaks(cuts);
        cuts.windows(2)
            .map(|w| {
                let prod = self.piece_on(w[0], w[1]).mul(&other.piece_on(w[0], w[1]));
                prod.integral(w[1] - w[0])
            })
            .sum()
    }

    /// Exact `∫ p(t) e^{iωt} dt`; real part pairs with `cos(ωt)`, imaginary
    /// part with `sin(ωt)`.
    pub fn fourier_moment(&self, omega: f64) -> Complex64 {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, p)| p.oscillatory_integral(self.breaks[i], self.breaks[i + 1] - self.breaks[i], omega))
            .sum()
    }
}

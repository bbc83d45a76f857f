//! Exact algebra of binary and bihomogeneous forms over the rationals:
//! resultants, the quartic discriminant identity, distinct-root counting, and
//! point-condition ranks for quadruple-point arguments.

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::qlinalg::{self, rat, Mat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormsError {
    #[error("coefficient list has length {got}, declared degree {degree} needs {}", degree + 1)]
    CoefficientLength { degree: usize, got: usize },
    #[error("(0,0) is not a point of the projective line")]
    ZeroPoint,
    #[error("resultant needs declared degrees >= 1")]
    DegreeTooSmall,
    #[error("discriminant needs a nonzero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("the zero form has no root count")]
    ZeroForm,
    #[error("repeated point in condition list at indices {0} and {1}")]
    RepeatedPoint(usize, usize),
    #[error("discriminant identity needs at least 6 trials, got {0}")]
    TooFewTrials(u32),
    #[error("identity refuted: sample (a, b) = ({a}, {b}) gives disc = {disc}, u * (256 b^3 - 27 a^4) = {predicted}")]
    IdentityRefuted { a: Rat, b: Rat, disc: Rat, predicted: Rat },
}

/// A point (s : t) of the projective line with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P1Point {
    s: Rat,
    t: Rat,
}

impl P1Point {
    pub fn new(s: Rat, t: Rat) -> Result<Self, FormsError> {
        if s.is_zero() && t.is_zero() {
            return Err(FormsError::ZeroPoint);
        }
        Ok(P1Point { s, t })
    }

    pub fn from_ints(s: i64, t: i64) -> Result<Self, FormsError> {
        P1Point::new(rat(s), rat(t))
    }

    pub fn s(&self) -> &Rat {
        &self.s
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    /// Projective equality: s1 t2 - t1 s2 = 0.
    pub fn same_point(&self, other: &Self) -> bool {
        (&self.s * &other.t - &self.t * &other.s).is_zero()
    }
}

impl std::fmt::Display for P1Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}:{})", self.s, self.t)
    }
}

/// Homogeneous form of fixed degree in (s, t), coefficients stored lowest
/// s-exponent first: f = sum c_k s^k t^(degree-k). The zero form is
/// representable at any declared degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Rat>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<Rat>) -> Result<Self, FormsError> {
        if coeffs.len() != degree + 1 {
            return Err(FormsError::CoefficientLength { degree, got: coeffs.len() });
        }
        Ok(BinaryForm { degree, coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { degree, coeffs: vec![Rat::zero(); degree + 1] }
    }

    pub fn from_ints(degree: usize, coeffs: &[i64]) -> Result<Self, FormsError> {
        BinaryForm::new(degree, coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// s^k t^(degree-k).
    pub fn monomial(degree: usize, s_exponent: usize) -> Self {
        assert!(s_exponent <= degree);
        let mut f = BinaryForm::zero(degree);
        f.coeffs[s_exponent] = Rat::one();
        f
    }

    pub fn constant(c: Rat) -> Self {
        BinaryForm { degree: 0, coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn eval(&self, p: &P1Point) -> Rat {
        let mut spowers = Vec::with_capacity(self.degree + 1);
        let mut spow = Rat::one();
        for _ in 0..=self.degree {
            spowers.push(spow.clone());
            spow *= p.s();
        }
        let mut out = Rat::zero();
        let mut tpow = Rat::one();
        for k in (0..=self.degree).rev() {
            if !self.coeffs[k].is_zero() {
                out += &self.coeffs[k] * &spowers[k] * &tpow;
            }
            tpow *= p.t();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![Rat::zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        BinaryForm { degree, coeffs }
    }

    /// Sum of forms of the same declared degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "cannot add forms of different degrees");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        BinaryForm { degree: self.degree, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = BinaryForm::constant(Rat::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Seeded random form with integer coefficients uniform in [-height, height].
    pub fn random(degree: usize, rng: &mut ChaCha8Rng, height: u32) -> Self {
        let h = height as i64;
        let coeffs = (0..=degree).map(|_| rat(rng.random_range(-h..=h))).collect();
        BinaryForm { degree, coeffs }
    }
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let te = self.degree - k;
            match (k, te) {
                (0, 0) => write!(f, "{c}")?,
                _ => {
                    if !c.is_one() {
                        write!(f, "{c}*")?;
                    }
                    match (k, te) {
                        (_, 0) => write!(f, "s^{k}")?,
                        (0, _) => write!(f, "t^{te}")?,
                        _ => write!(f, "s^{k}*t^{te}")?,
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Univariate helpers on coefficient vectors (lowest degree first)
// ---------------------------------------------------------------------------

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
    p
}

fn poly_deg(p: &[Rat]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

fn poly_derivative(p: &[Rat]) -> Vec<Rat> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * rat(k as i64))
        .collect()
}

fn poly_rem(mut a: Vec<Rat>, b: &[Rat]) -> Vec<Rat> {
    let db = b.len() - 1;
    let lb = &b[db];
    while a.len() > db {
        let la = a.last().expect("nonempty").clone();
        if !la.is_zero() {
            let f = &la / lb;
            let shift = a.len() - 1 - db;
            for (i, bc) in b.iter().enumerate() {
                let delta = &f * bc;
                a[shift + i] -= delta;
            }
        }
        a.pop();
        a = trim(a);
        if a.is_empty() {
            break;
        }
    }
    a
}

/// Monic gcd over Q.
fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c /= &lead;
        }
    }
    x
}

// ---------------------------------------------------------------------------
// Resultant and discriminant
// ---------------------------------------------------------------------------

/// Determinant of the Sylvester matrix at the declared degrees.
///
/// Convention: resultant(f, g) = lc(f)^deg(g) lc(g)^deg(f) prod (alpha_i - beta_j)
/// over the roots alpha of f and beta of g, so resultant(x - a, x - b) = a - b.
/// Declared degrees are used as-is; vanishing leading coefficients model roots
/// at infinity.
pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> Result<Rat, FormsError> {
    let m = f.degree();
    let n = g.degree();
    if m < 1 || n < 1 {
        return Err(FormsError::DegreeTooSmall);
    }
    let size = m + n;
    let mut syl: Mat = vec![vec![Rat::zero(); size]; size];
    // descending-coefficient rows, g block below the f block
    for i in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            syl[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            syl[n + i][i + k] = c.clone();
        }
    }
    Ok(qlinalg::det(&syl))
}

/// disc(f) = (-1)^(n(n-1)/2) resultant(f, f') / lc(f), with f' the derivative
/// in the dehomogenized variable taken at declared degree n - 1.
pub fn discriminant(f: &BinaryForm) -> Result<Rat, FormsError> {
    let n = f.degree();
    if n < 2 {
        return Err(FormsError::DegreeTooSmall);
    }
    let lc = f.coeffs().last().expect("degree >= 2");
    if lc.is_zero() {
        return Err(FormsError::ZeroLeadingCoefficient);
    }
    let deriv = BinaryForm::new(n - 1, poly_derivative(f.coeffs()))?;
    let res = resultant(f, &deriv)?;
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -Rat::one() } else { Rat::one() };
    Ok(sign * res / lc)
}

/// Checks that disc(x^4 + a x + b) is a single constant multiple of
/// 256 b^3 - 27 a^4 across `trials` random rational samples; returns the
/// fitted constant. A refuting sample is an error, not a false verdict.
pub fn quartic_discriminant_identity(trials: u32, seed: u64) -> Result<(Rat, bool), FormsError> {
    if trials < 6 {
        return Err(FormsError::TooFewTrials(trials));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_rat = |rng: &mut ChaCha8Rng| -> Rat {
        let num = rng.random_range(-30i64..=30);
        let den = rng.random_range(1i64..=12);
        Rat::new(num.into(), den.into())
    };
    let mut u: Option<Rat> = None;
    let mut done = 0;
    while done < trials {
        let a = random_rat(&mut rng);
        let b = random_rat(&mut rng);
        let predicted_shape = rat(256) * &b * &b * &b - rat(27) * &a * &a * &a * &a;
        if predicted_shape.is_zero() {
            // the fit needs a nonzero right-hand side; resample
            continue;
        }
        let quartic = BinaryForm::new(
            4,
            vec![b.clone(), a.clone(), Rat::zero(), Rat::zero(), Rat::one()],
        )?;
        let disc = discriminant(&quartic)?;
        let fitted = u.get_or_insert_with(|| &disc / &predicted_shape);
        let predicted = &*fitted * &predicted_shape;
        if predicted != disc {
            return Err(FormsError::IdentityRefuted { a, b, disc, predicted });
        }
        done += 1;
    }
    Ok((u.expect("at least six samples"), true))
}

/// Number of distinct roots of a nonzero binary form on the projective line:
/// distinct finite roots of the dehomogenization via deg f - deg gcd(f, f'),
/// plus the root at infinity when the declared leading coefficient vanishes.
pub fn distinct_root_count(f: &BinaryForm) -> Result<usize, FormsError> {
    if f.is_zero() {
        return Err(FormsError::ZeroForm);
    }
    let p = trim(f.coeffs().to_vec());
    let dp = poly_deg(&p).expect("nonzero form");
    let at_infinity = usize::from(dp < f.degree());
    if dp == 0 {
        return Ok(at_infinity);
    }
    let deriv = poly_derivative(&p);
    let g = poly_gcd(&p, &deriv);
    let dg = poly_deg(&g).expect("gcd of nonzero polys is nonzero");
    Ok(dp - dg + at_infinity)
}

// ---------------------------------------------------------------------------
// Bihomogeneous forms and point conditions
// ---------------------------------------------------------------------------

/// Bihomogeneous form of bidegree (d1, d2) on P^1 x P^1; grid entry
/// (i, j) multiplies s^i t^(d1-i) u^j v^(d2-j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiForm {
    bidegree: (usize, usize),
    grid: Vec<Vec<Rat>>,
}

impl BiForm {
    pub fn new(bidegree: (usize, usize), grid: Vec<Vec<Rat>>) -> Result<Self, FormsError> {
        if grid.len() != bidegree.0 + 1 || grid.iter().any(|row| row.len() != bidegree.1 + 1) {
            return Err(FormsError::CoefficientLength {
                degree: bidegree.0,
                got: grid.len(),
            });
        }
        Ok(BiForm { bidegree, grid })
    }

    pub fn bidegree(&self) -> (usize, usize) {
        self.bidegree
    }

    pub fn grid(&self) -> &[Vec<Rat>] {
        &self.grid
    }

    pub fn eval(&self, p: &(P1Point, P1Point)) -> Rat {
        let (d1, d2) = self.bidegree;
        let mut out = Rat::zero();
        for i in 0..=d1 {
            for j in 0..=d2 {
                if self.grid[i][j].is_zero() {
                    continue;
                }
                out += &self.grid[i][j]
                    * monomial_value(p.0.s(), p.0.t(), i, d1)
                    * monomial_value(p.1.s(), p.1.t(), j, d2);
            }
        }
        out
    }
}

fn monomial_value(s: &Rat, t: &Rat, k: usize, d: usize) -> Rat {
    let mut out = Rat::one();
    for _ in 0..k {
        out *= s;
    }
    for _ in 0..(d - k) {
        out *= t;
    }
    out
}

/// Rank of the evaluation matrix of the monomial basis of bidegree-(d1, d2)
/// forms at the given points of P^1 x P^1. The solution space of forms through
/// all points has dimension (d1+1)(d2+1) - rank.
pub fn point_condition_rank(
    bidegree: (usize, usize),
    points: &[(P1Point, P1Point)],
) -> Result<usize, FormsError> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].0.same_point(&points[j].0) && points[i].1.same_point(&points[j].1) {
                return Err(FormsError::RepeatedPoint(i, j));
            }
        }
    }
    let (d1, d2) = bidegree;
    let matrix: Mat = points
        .iter()
        .map(|(p, q)| {
            let mut row = Vec::with_capacity((d1 + 1) * (d2 + 1));
            for a in 0..=d1 {
                for b in 0..=d2 {
                    row.push(monomial_value(p.s(), p.t(), a, d1) * monomial_value(q.s(), q.t(), b, d2));
                }
            }
            row
        })
        .collect();
    if matrix.is_empty() {
        return Ok(0);
    }
    Ok(qlinalg::rank(&matrix))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(degree: usize, coeffs: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(degree, coeffs).unwrap()
    }

    #[test]
    fn resultant_of_shared_root_vanishes() {
        // x^2 - 1 and x - 1
        let f = bf(2, &[-1, 0, 1]);
        let g = bf(1, &[-1, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), rat(0));
    }

    #[test]
    fn resultant_of_linear_factors() {
        // res(x - a, x - b) = a - b in our convention
        let f = bf(1, &[-3, 1]);
        let g = bf(1, &[-5, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), rat(-2));
        assert_eq!(resultant(&g, &f).unwrap(), rat(2));
    }

    #[test]
    fn resultant_regression_quartic() {
        // res(x^4 + x + 1, 4x^3 + 1) = disc(x^4 + x + 1) = 256 - 27 = 229
        let f = bf(4, &[1, 1, 0, 0, 1]);
        let g = bf(3, &[1, 0, 0, 4]);
        assert_eq!(resultant(&f, &g).unwrap(), rat(229));
    }

    #[test]
    fn resultant_rejects_constants() {
        let c = bf(0, &[7]);
        let f = bf(1, &[0, 1]);
        assert_eq!(resultant(&c, &f), Err(FormsError::DegreeTooSmall));
    }

    #[test]
    fn discriminant_examples() {
        // disc(x^4 + b) = 256 b^3 at b = 1; disc(x^4 + x) = -27
        assert_eq!(discriminant(&bf(4, &[1, 0, 0, 0, 1])).unwrap(), rat(256));
        assert_eq!(discriminant(&bf(4, &[0, 1, 0, 0, 1])).unwrap(), rat(-27));
    }

    #[test]
    fn quartic_identity_fits_u_equals_one() {
        let (u, verified) = quartic_discriminant_identity(8, 1).unwrap();
        assert_eq!(u, rat(1));
        assert!(verified);
        assert_eq!(quartic_discriminant_identity(5, 1), Err(FormsError::TooFewTrials(5)));
    }

    #[test]
    fn distinct_roots() {
        // (s t)^2 has two double roots
        let st = BinaryForm::monomial(2, 1);
        assert_eq!(distinct_root_count(&st.pow(2)).unwrap(), 2);
        assert_eq!(distinct_root_count(&BinaryForm::monomial(12, 12)).unwrap(), 1);
        assert_eq!(distinct_root_count(&BinaryForm::monomial(12, 0)).unwrap(), 1);
        assert_eq!(distinct_root_count(&BinaryForm::zero(3)), Err(FormsError::ZeroForm));
        // st(s - t): three simple roots 0, 1, infinity
        let cubic = bf(3, &[0, -1, 1, 0]);
        assert_eq!(distinct_root_count(&cubic).unwrap(), 3);
    }

    #[test]
    fn critical_value_form_has_twelve_roots() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let alpha = BinaryForm::random(3, &mut rng, 10);
        let beta = BinaryForm::random(4, &mut rng, 10);
        let form = beta.pow(3).scale(&rat(256)).sub(&alpha.pow(4).scale(&rat(27)));
        assert_eq!(form.degree(), 12);
        assert_eq!(distinct_root_count(&form).unwrap(), 12);
    }

    #[test]
    fn point_condition_ranks() {
        assert_eq!(point_condition_rank((2, 2), &[]).unwrap(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<_> = (0..8)
            .map(|_| {
                (
                    P1Point::from_ints(rng.random_range(-30i64..=30), 1).unwrap(),
                    P1Point::from_ints(rng.random_range(-30i64..=30), 1).unwrap(),
                )
            })
            .collect();
        assert_eq!(point_condition_rank((2, 2), &pts).unwrap(), 8);
        // all on one ruling line u = 5: conditions collapse
        let on_line: Vec<_> = (0..8)
            .map(|k| {
                (
                    P1Point::from_ints(k, 1).unwrap(),
                    P1Point::from_ints(5, 1).unwrap(),
                )
            })
            .collect();
        assert!(point_condition_rank((2, 2), &on_line).unwrap() < 8);
        let dup = vec![
            (P1Point::from_ints(1, 1).unwrap(), P1Point::from_ints(2, 1).unwrap()),
            (P1Point::from_ints(2, 2).unwrap(), P1Point::from_ints(4, 2).unwrap()),
        ];
        assert_eq!(point_condition_rank((2, 2), &dup), Err(FormsError::RepeatedPoint(0, 1)));
    }

    #[test]
    fn monotone_in_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<_> = (0..6)
            .map(|_| {
                (
                    P1Point::from_ints(rng.random_range(-9i64..=9), 1).unwrap(),
                    P1Point::from_ints(rng.random_range(-9i64..=9), 1).unwrap(),
                )
            })
            .collect();
        let mut prev = 0;
        for k in 0..=pts.len() {
            let r = point_condition_rank((1, 2), &pts[..k]).unwrap();
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn biform_eval() {
        // s*u on bidegree (1,1)
        let f = BiForm::new(
            (1, 1),
            vec![vec![rat(0), rat(0)], vec![rat(0), rat(1)]],
        )
        .unwrap();
        let p = (P1Point::from_ints(3, 1).unwrap(), P1Point::from_ints(2, 1).unwrap());
        assert_eq!(f.eval(&p), rat(6));
    }

    #[test]
    fn zero_point_rejected() {
        assert_eq!(P1Point::from_ints(0, 0), Err(FormsError::ZeroPoint));
    }
}

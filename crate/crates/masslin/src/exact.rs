//! Exact scalar and linear algebra: arbitrary-precision rationals, integer
//! vectors and matrices, determinants, linear solves, and unimodular
//! completion of a primitive lattice vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
/// Reduced fraction with positive denominator; every operation keeps it reduced.
pub type Rat = BigRational;
pub type IntVec = Vec<Int>;
pub type RatVec = Vec<Rat>;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// p/q as a reduced rational. Panics if q == 0.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

pub fn rat_from_int(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

/// Parses "p/q" or a plain integer string into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let parse_int = |x: &str| -> Result<Int> {
        x.trim()
            .parse::<Int>()
            .map_err(|_| Error::Parse(format!("invalid integer '{x}'")))
    };
    match t.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(t)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

/// "p/q" for proper fractions, plain "p" for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// "(a, b, c)" with each entry rendered by [`format_rat`].
pub fn format_rat_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(format_rat).collect();
    format!("({})", parts.join(", "))
}

pub fn format_int_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Decimal rendering with 15 significant digits.
pub fn format_approx(r: &Rat) -> String {
    let x = r.to_f64().unwrap_or(f64::NAN);
    format!("{x:.14e}")
}

pub fn int_pow(base: &Int, exp: u32) -> Int {
    let mut acc = Int::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    Rat::new(int_pow(base.numer(), exp), int_pow(base.denom(), exp))
}

pub fn factorial(n: usize) -> Int {
    let mut acc = Int::one();
    for i in 2..=n {
        acc *= Int::from(i);
    }
    acc
}

pub fn dot_rr(x: &[Rat], y: &[Rat]) -> Rat {
    assert_eq!(x.len(), y.len(), "dot of unequal lengths");
    let mut acc = Rat::zero();
    for (a, b) in x.iter().zip(y) {
        acc += a * b;
    }
    acc
}

pub fn dot_ri(x: &[Rat], y: &[Int]) -> Rat {
    assert_eq!(x.len(), y.len(), "dot of unequal lengths");
    let mut acc = Rat::zero();
    for (a, b) in x.iter().zip(y) {
        acc += a * rat_from_int(b);
    }
    acc
}

pub fn dot_ii(x: &[Int], y: &[Int]) -> Int {
    assert_eq!(x.len(), y.len(), "dot of unequal lengths");
    let mut acc = Int::zero();
    for (a, b) in x.iter().zip(y) {
        acc += a * b;
    }
    acc
}

/// gcd of all entries; zero for the zero vector.
pub fn gcd_all(v: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    g
}

/// A lattice vector is primitive when its entries have gcd 1.
pub fn is_primitive(v: &[Int]) -> bool {
    gcd_all(v).is_one()
}

/// True for a reduced fraction with positive denominator (the invariant all
/// Rat values in this crate maintain).
pub fn is_reduced(r: &Rat) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

// ---------------------------------------------------------------------------
// Integer matrices
// ---------------------------------------------------------------------------

/// Exact determinant of a square integer matrix (fraction-free elimination).
pub fn int_det(rows: &[Vec<Int>]) -> Int {
    let n = rows.len();
    if n == 0 {
        return Int::one();
    }
    for row in rows {
        assert_eq!(row.len(), n, "int_det needs a square matrix");
    }
    let mut m: Vec<Vec<Int>> = rows.to_vec();
    let mut sign = 1i64;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Int::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = Int::zero();
        }
        prev = m[k][k].clone();
    }
    Int::from(sign) * m[n - 1][n - 1].clone()
}

/// Cramer solve of an integer square system; None when singular.
pub(crate) fn int_solve_cramer(rows: &[Vec<Int>], rhs: &[Int]) -> Option<RatVec> {
    let n = rows.len();
    assert_eq!(rhs.len(), n);
    let d = int_det(rows);
    if d.is_zero() {
        return None;
    }
    let mut x = Vec::with_capacity(n);
    for col in 0..n {
        let mut m = rows.to_vec();
        for (i, row) in m.iter_mut().enumerate() {
            row[col] = rhs[i].clone();
        }
        x.push(Rat::new(int_det(&m), d.clone()));
    }
    Some(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    rows: Vec<Vec<Int>>,
}

impl IntMat {
    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let w = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == w), "ragged matrix");
        IntMat { rows }
    }

    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
        IntMat { rows }
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn det(&self) -> Int {
        int_det(&self.rows)
    }

    pub fn mul_vec(&self, x: &[Rat]) -> RatVec {
        self.rows
            .iter()
            .map(|row| {
                assert_eq!(row.len(), x.len());
                dot_ri(x, row)
            })
            .collect()
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(rat_from_int).collect())
                .collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Rational matrices
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    rows: Vec<Vec<Rat>>,
}

impl RatMat {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let w = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == w), "ragged matrix");
        RatMat { rows }
    }

    pub fn identity(d: usize) -> Self {
        RatMat::from_rows(
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    fn assert_square(&self) {
        assert_eq!(self.nrows(), self.ncols(), "square matrix required");
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> Rat {
        self.assert_square();
        let n = self.nrows();
        if n == 0 {
            return Rat::one();
        }
        let mut m = self.rows.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Rat::zero();
            };
            if p != k {
                m.swap(k, p);
                det = -det;
            }
            det *= m[k][k].clone();
            let pivot = m[k][k].clone();
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let f = &m[i][k] / &pivot;
                for j in k..n {
                    let t = &m[i][j] - &(&f * &m[k][j]);
                    m[i][j] = t;
                }
            }
        }
        det
    }

    /// Exact solution of `self * x = rhs` for square systems.
    pub fn solve(&self, rhs: &[Rat]) -> Result<RatVec> {
        self.assert_square();
        let n = self.nrows();
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            m.swap(k, p);
            let pivot = m[k][k].clone();
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let f = &m[i][k] / &pivot;
                for j in k..=n {
                    let t = &m[i][j] - &(&f * &m[k][j]);
                    m[i][j] = t;
                }
            }
        }
        let mut x = vec![Rat::zero(); n];
        for i in (0..n).rev() {
            let mut acc = m[i][n].clone();
            for j in i + 1..n {
                acc -= &m[i][j] * &x[j];
            }
            x[i] = acc / &m[i][i];
        }
        Ok(x)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMat> {
        self.assert_square();
        let n = self.nrows();
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                for j in 0..n {
                    r.push(if i == j { Rat::one() } else { Rat::zero() });
                }
                r
            })
            .collect();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            m.swap(k, p);
            let pivot = m[k][k].clone();
            for j in k..2 * n {
                let t = &m[k][j] / &pivot;
                m[k][j] = t;
            }
            for i in 0..n {
                if i == k || m[i][k].is_zero() {
                    continue;
                }
                let f = m[i][k].clone();
                for j in k..2 * n {
                    let t = &m[i][j] - &(&f * &m[k][j]);
                    m[i][j] = t;
                }
            }
        }
        Ok(RatMat::from_rows(
            m.into_iter().map(|row| row[n..].to_vec()).collect(),
        ))
    }

    pub fn mul_vec(&self, x: &[Rat]) -> RatVec {
        self.rows
            .iter()
            .map(|row| {
                assert_eq!(row.len(), x.len());
                dot_rr(row, x)
            })
            .collect()
    }

    /// Rank over the rationals (works for rectangular matrices).
    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        let (nr, nc) = (self.nrows(), self.ncols());
        let mut rank = 0;
        for col in 0..nc {
            let Some(p) = (rank..nr).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for i in rank + 1..nr {
                if m[i][col].is_zero() {
                    continue;
                }
                let f = &m[i][col] / &pivot;
                for j in col..nc {
                    let t = &m[i][j] - &(&f * &m[rank][j]);
                    m[i][j] = t;
                }
            }
            rank += 1;
            if rank == nr {
                break;
            }
        }
        rank
    }
}

// ---------------------------------------------------------------------------
// Unimodular completion
// ---------------------------------------------------------------------------

/// Completes a primitive row vector `n` to a unimodular integer matrix `U`
/// whose last row is `n`, so that `y = U x` maps the hyperplane
/// `<x, n> = kappa` onto `{ y_d = kappa }`.
///
/// Deterministic: entries of `n` are folded into the last slot left to right
/// by extended-gcd column elimination; for d >= 2 the result is normalized to
/// det U = +1 by negating the first completion row if needed.
pub fn unimodular_flatten(n: &[Int]) -> Result<IntMat> {
    let d = n.len();
    if d == 0 {
        return Err(Error::NotPrimitive("empty vector".into()));
    }
    if !is_primitive(n) {
        return Err(Error::NotPrimitive(format!(
            "gcd of entries is {}",
            gcd_all(n)
        )));
    }
    let last = d - 1;
    let mut v: Vec<Int> = n.to_vec();
    let mut a: Vec<Vec<Int>> = IntMat::identity(d).rows.clone();
    // Invariant: v = n * W (column ops) and a = W^{-1}; at the end v = e_d,
    // hence the last row of `a` equals n.
    for i in 0..last {
        loop {
            if v[i].is_zero() {
                break;
            }
            if v[last].is_zero() {
                v.swap(i, last);
                a.swap(i, last);
                continue;
            }
            let q = v[i].div_floor(&v[last]);
            if !q.is_zero() {
                let t = &v[i] - &(&q * &v[last]);
                v[i] = t;
                // column op col_i -= q*col_last  <=>  row_last += q*row_i
                for j in 0..d {
                    let t = &a[last][j] + &(&q * &a[i][j]);
                    a[last][j] = t;
                }
            }
            if v[i].is_zero() {
                break;
            }
            v.swap(i, last);
            a.swap(i, last);
        }
    }
    if v[last].is_negative() {
        for x in a[last].iter_mut() {
            *x = -x.clone();
        }
        v[last] = -v[last].clone();
    }
    debug_assert!(v[last].is_one());
    if d >= 2 && int_det(&a) == -Int::one() {
        for x in a[0].iter_mut() {
            *x = -x.clone();
        }
    }
    Ok(IntMat::from_rows(a))
}

// ---------------------------------------------------------------------------
// Polynomial interpolation
// ---------------------------------------------------------------------------

/// Exact interpolation through points with distinct abscissae; returns
/// monomial coefficients, lowest degree first (length = points given).
pub fn interpolate(points: &[(Rat, Rat)]) -> Vec<Rat> {
    let n = points.len();
    assert!(n > 0, "interpolation needs at least one point");
    let xs: Vec<Rat> = points.iter().map(|(x, _)| x.clone()).collect();
    let mut dd: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = &xs[i] - &xs[i - level];
            assert!(!dx.is_zero(), "interpolation nodes must be distinct");
            let t = (&dd[i] - &dd[i - 1]) / dx;
            dd[i] = t;
        }
    }
    // Expand the Newton form sum_i dd[i] * prod_{j<i} (x - x_j).
    let mut coeffs = vec![Rat::zero(); n];
    let mut basis = vec![Rat::zero(); n];
    basis[0] = Rat::one();
    for (i, c) in dd.iter().enumerate() {
        for j in 0..=i {
            let t = &coeffs[j] + &(c * &basis[j]);
            coeffs[j] = t;
        }
        if i + 1 < n {
            for j in (0..=i + 1).rev() {
                let shifted = if j == 0 { Rat::zero() } else { basis[j - 1].clone() };
                basis[j] = shifted - &xs[i] * &basis[j];
            }
        }
    }
    coeffs
}

/// Horner evaluation of monomial coefficients (lowest degree first).
pub fn eval_poly(coeffs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c.clone();
    }
    acc
}

/// Degree of the polynomial after dropping trailing zero coefficients.
pub fn poly_degree(coeffs: &[Rat]) -> usize {
    coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(n: i64) -> Int {
        int(n)
    }

    fn r(n: i64) -> Rat {
        rat(n)
    }

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| i(x)).collect()
    }

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| r(x)).collect()
    }

    #[test]
    fn parse_and_format_roundtrip() {
        assert_eq!(parse_rat("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rat(" -6/4 ").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rat("7").unwrap(), r(7));
        assert_eq!(format_rat(&ratio(-3, 2)), "-3/2");
        assert_eq!(format_rat(&r(5)), "5");
        assert_eq!(format_rat(&ratio(4, 2)), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn rationals_stay_reduced() {
        let a = ratio(6, 4);
        assert!(is_reduced(&a));
        let b = ratio(10, -15);
        assert!(is_reduced(&b));
        assert_eq!(b, ratio(-2, 3));
        assert!(is_reduced(&(a * b)));
    }

    #[test]
    fn det_examples() {
        let m = RatMat::from_rows(vec![rv(&[0, -1]), rv(&[1, 2])]);
        assert_eq!(m.det(), r(1));
        let m = RatMat::from_rows(vec![rv(&[-1, 0]), rv(&[1, 2])]);
        assert_eq!(m.det(), r(-2));
        assert_eq!(RatMat::identity(3).det(), r(1));
        assert_eq!(int_det(&[iv(&[0, -1]), iv(&[1, 2])]), i(1));
        assert_eq!(int_det(&[iv(&[-1, 0]), iv(&[1, 2])]), i(-2));
    }

    #[test]
    fn solve_examples() {
        let id = RatMat::identity(2);
        assert_eq!(id.solve(&rv(&[5, 7])).unwrap(), rv(&[5, 7]));

        // Rows (0,1),(1,1) with rhs (1,2): the trapezium vertex (1,1).
        let m = RatMat::from_rows(vec![rv(&[0, 1]), rv(&[1, 1])]);
        assert_eq!(m.solve(&rv(&[1, 2])).unwrap(), rv(&[1, 1]));

        let sing = RatMat::from_rows(vec![rv(&[1, 0]), rv(&[2, 0])]);
        assert!(matches!(
            sing.solve(&rv(&[1, 1])),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn solve_matches_cramer() {
        let rows = vec![iv(&[2, 1, 0]), iv(&[-1, 3, 1]), iv(&[0, 0, 5])];
        let rhs = iv(&[3, 4, 10]);
        let by_cramer = int_solve_cramer(&rows, &rhs).unwrap();
        let m = RatMat::from_rows(
            rows.iter()
                .map(|row| row.iter().map(rat_from_int).collect())
                .collect(),
        );
        let by_gauss = m
            .solve(&rhs.iter().map(rat_from_int).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(by_cramer, by_gauss);
    }

    #[test]
    fn inverse_times_self_is_identity() {
        let m = RatMat::from_rows(vec![rv(&[2, 1, 0]), rv(&[-1, 3, 1]), rv(&[0, 0, 5])]);
        let inv = m.inverse().unwrap();
        let x = rv(&[3, -2, 7]);
        assert_eq!(inv.mul_vec(&m.mul_vec(&x)), x);
        assert!(RatMat::from_rows(vec![rv(&[1, 2]), rv(&[2, 4])])
            .inverse()
            .is_err());
    }

    #[test]
    fn flatten_unit_vector_is_identity() {
        for d in 1..=5 {
            let mut n = vec![Int::zero(); d];
            n[d - 1] = Int::one();
            let u = unimodular_flatten(&n).unwrap();
            assert_eq!(u, IntMat::identity(d), "e_d must flatten trivially, d={d}");
        }
    }

    #[test]
    fn flatten_small_cases() {
        let u = unimodular_flatten(&iv(&[1, 1])).unwrap();
        assert_eq!(u.rows(), &[iv(&[1, 0]), iv(&[1, 1])]);
        assert_eq!(u.det(), i(1));

        for r_ in 2..=5i64 {
            let u = unimodular_flatten(&iv(&[1, r_])).unwrap();
            assert_eq!(u.rows(), &[iv(&[0, -1]), iv(&[1, r_])]);
            assert_eq!(u.det(), i(1));
        }
    }

    #[test]
    fn flatten_rejects_non_primitive() {
        assert!(matches!(
            unimodular_flatten(&iv(&[2, 4])),
            Err(Error::NotPrimitive(_))
        ));
        assert!(matches!(
            unimodular_flatten(&iv(&[0, 0, 0])),
            Err(Error::NotPrimitive(_))
        ));
    }

    #[test]
    fn flatten_invariants_on_assorted_vectors() {
        let cases: Vec<Vec<Int>> = vec![
            iv(&[0, -1]),
            iv(&[1, 0]),
            iv(&[-1, 0]),
            iv(&[3, 5]),
            iv(&[-2, 3]),
            iv(&[1, 1, 1]),
            iv(&[2, -3, 4]),
            iv(&[0, 0, -1]),
            iv(&[6, 10, 15]),
            iv(&[1, -1, 1, -1]),
            iv(&[12, 8, 9, 5]),
        ];
        for n in cases {
            let u = unimodular_flatten(&n).unwrap();
            assert_eq!(u.rows().last().unwrap(), &n, "last row must be n");
            assert_eq!(u.det(), i(1), "normalized determinant for {n:?}");
        }
    }

    #[test]
    fn rank_counts_independent_rows() {
        assert_eq!(RatMat::identity(3).rank(), 3);
        let m = RatMat::from_rows(vec![rv(&[1, 2, 3]), rv(&[2, 4, 6]), rv(&[0, 1, 1])]);
        assert_eq!(m.rank(), 2);
        let wide = RatMat::from_rows(vec![rv(&[1, 0, 0, 5])]);
        assert_eq!(wide.rank(), 1);
        let zero = RatMat::from_rows(vec![rv(&[0, 0]), rv(&[0, 0])]);
        assert_eq!(zero.rank(), 0);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        // y = 2x^2 - 3/2 x + 1
        let poly = |x: &Rat| ratio(2, 1) * x * x - ratio(3, 2) * x + r(1);
        let pts: Vec<(Rat, Rat)> = [-1i64, 0, 2]
            .iter()
            .map(|&t| (r(t), poly(&r(t))))
            .collect();
        let coeffs = interpolate(&pts);
        assert_eq!(coeffs, vec![r(1), ratio(-3, 2), r(2)]);
        assert_eq!(eval_poly(&coeffs, &ratio(1, 3)), poly(&ratio(1, 3)));
        assert_eq!(poly_degree(&coeffs), 2);
    }

    #[test]
    fn factorials_and_powers() {
        assert_eq!(factorial(0), i(1));
        assert_eq!(factorial(5), i(120));
        assert_eq!(int_pow(&i(3), 4), i(81));
        assert_eq!(rat_pow(&ratio(2, 3), 3), ratio(8, 27));
        assert_eq!(rat_pow(&ratio(2, 3), 0), r(1));
    }

    #[test]
    fn approx_rendering_has_fifteen_digits() {
        assert_eq!(format_approx(&ratio(-2, 9)), "-2.22222222222222e-1");
        assert_eq!(format_approx(&r(1)), "1.00000000000000e0");
    }
}

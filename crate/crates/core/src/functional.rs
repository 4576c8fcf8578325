//! Exact rational-valued functions on `F_q^r` and the averaging operators
//! built on them: mean, balanced part, `L²` norm, quotient restriction and the
//! solution-set average `Λ_E`.

use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};
use crate::space::{Hyperplane, Point, Space};

pub type Rational = BigRational;

/// Tuple budget for [`lambda_naive`].
pub const NAIVE_TUPLE_LIMIT: u64 = 10_000_000;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` with the denominator always present, e.g. `1/1`.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// `q^{-e}` as an exact rational.
pub fn inverse_power(q: u32, e: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(q).pow(e as u32))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    space: Space,
    values: Vec<Rational>,
}

impl RationalFn {
    pub fn new(space: Space, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.size() as usize {
            return Err(Error::OutOfRange {
                what: "value count",
                index: values.len() as u64,
                bound: space.size() as u64 + 1,
            });
        }
        Ok(RationalFn { space, values })
    }

    pub fn from_fn(space: &Space, f: impl FnMut(Point) -> Rational) -> Self {
        RationalFn {
            space: space.clone(),
            values: space.points().map(f).collect(),
        }
    }

    pub fn constant(space: &Space, c: Rational) -> Self {
        Self::from_fn(space, |_| c.clone())
    }

    /// `1_A`. Duplicate points are harmless.
    pub fn indicator(space: &Space, set: &[Point]) -> Result<Self> {
        let mut values = vec![Rational::zero(); space.size() as usize];
        for &p in set {
            values[space.check(p)?.index() as usize] = Rational::one();
        }
        Ok(RationalFn {
            space: space.clone(),
            values,
        })
    }

    /// Values `n/d` with `n` uniform in `[-9, 9]` and `d` uniform in `[1, 8]`.
    pub fn random<R: Rng + ?Sized>(space: &Space, rng: &mut R) -> Self {
        Self::from_fn(space, |_| {
            let n: i64 = rng.random_range(-9..=9);
            let d: i64 = rng.random_range(1..=8);
            rat(n, d)
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, p: Point) -> &Rational {
        &self.values[p.index() as usize]
    }

    pub fn mean(&self) -> Rational {
        let sum: Rational = self.values.iter().sum();
        sum / int(self.space.size() as i64)
    }

    /// `f - E f`.
    pub fn balance(&self) -> Self {
        let mean = self.mean();
        RationalFn {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v - &mean).collect(),
        }
    }

    /// `E(f²)`.
    pub fn l2_norm_sq(&self) -> Rational {
        let sum: Rational = self.values.iter().map(|v| v * v).sum();
        sum / int(self.space.size() as i64)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn max_value(&self) -> &Rational {
        self.values
            .iter()
            .max()
            .expect("a space has at least one point")
    }

    /// Smallest-index maximizer.
    pub fn argmax(&self) -> Point {
        let max = self.max_value();
        Point::new(self.values.iter().position(|v| v == max).unwrap() as u32)
    }

    /// The quotient restriction `f|V`: level `t` of the hyperplane maps to the
    /// average of `f` over `{g : <n, g> = t}`. The quotient `G/V` is
    /// identified with `F_q`, so the result lives on the rank-1 space.
    pub fn restrict_to_quotient(&self, hyperplane: &Hyperplane) -> Result<Self> {
        let space = &self.space;
        if space.rank() == 0 {
            return Err(Error::RankZero);
        }
        let line = space.with_rank(1)?;
        let mut sums = vec![Rational::zero(); space.q() as usize];
        for (g, v) in space.points().zip(&self.values) {
            let t = space.pairing(hyperplane.normal(), g);
            sums[t.index() as usize] += v;
        }
        let slice_size = int(space.size() as i64 / space.q() as i64);
        Ok(RationalFn {
            space: line,
            values: sums.into_iter().map(|s| s / &slice_size).collect(),
        })
    }

    /// Exact scaling to integers: `(numerators, common denominator)`.
    fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums = self
            .values
            .iter()
            .map(|v| v.numer() * (&den / v.denom()))
            .collect();
        (nums, den)
    }
}

/// A homogeneous linear equation `c_1 x_1 + ... + c_k x_k = 0`, `k >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearEquation {
    coeffs: Vec<i64>,
}

impl LinearEquation {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::TooFewVariables {
                got: coeffs.len(),
                min: 2,
            });
        }
        Ok(LinearEquation { coeffs })
    }

    /// `x - 2y + z = 0`: three-term progressions.
    pub fn ap() -> Self {
        LinearEquation {
            coeffs: vec![1, -2, 1],
        }
    }

    /// `x + y + z = 0`.
    pub fn sum3() -> Self {
        LinearEquation {
            coeffs: vec![1, 1, 1],
        }
    }

    /// `x - y = 0`.
    pub fn eq2() -> Self {
        LinearEquation {
            coeffs: vec![1, -1],
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "ap" => Some(Self::ap()),
            "sum3" => Some(Self::sum3()),
            "eq2" => Some(Self::eq2()),
            _ => None,
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    /// Maps every coefficient into `F_p`, rejecting multiples of `p`.
    pub fn field_coeffs(&self, field: &FieldSpec) -> Result<Vec<FieldElem>> {
        self.coeffs
            .iter()
            .map(|&c| {
                let e = field.scalar_from_int(c);
                if e.is_zero() {
                    Err(Error::CoefficientNotCoprime {
                        coeff: c,
                        p: field.characteristic(),
                    })
                } else {
                    Ok(e)
                }
            })
            .collect()
    }

    pub fn is_solution(&self, space: &Space, tuple: &[Point]) -> bool {
        let f = space.field();
        let total = self
            .coeffs
            .iter()
            .zip(tuple)
            .fold(Point::ORIGIN, |acc, (&c, &g)| {
                space.add(acc, space.scale(f.scalar_from_int(c), g))
            });
        tuple.len() == self.arity() && total.is_origin()
    }

    /// Tables `g -> -(c_k^{-1} c_i) g` for `i < k`, so that
    /// `x_k = Σ_{i<k} table_i[x_i]` on the solution set.
    fn solver_tables(&self, space: &Space) -> Result<Vec<Vec<Point>>> {
        let field = space.field();
        let cs = self.field_coeffs(field)?;
        let (last, rest) = cs.split_last().unwrap();
        let minus_inv = field.neg(field.inv(*last)?);
        Ok(rest
            .iter()
            .map(|&c| space.scale_table(field.mul(minus_inv, c)))
            .collect())
    }
}

impl std::fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", terms.join(", "))
    }
}

fn sum_over_solutions<T>(space: &Space, tables: &[Vec<Point>], values: &[T]) -> T
where
    T: Clone + Zero + One + AddAssign + for<'a> Mul<&'a T, Output = T>,
{
    fn walk<T>(
        space: &Space,
        tables: &[Vec<Point>],
        values: &[T],
        partial: Point,
        prod: T,
        total: &mut T,
    ) where
        T: Clone + Zero + One + AddAssign + for<'a> Mul<&'a T, Output = T>,
    {
        match tables.split_first() {
            None => *total += prod * &values[partial.index() as usize],
            Some((table, rest)) => {
                for (g, v) in values.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let next = space.add(partial, table[g]);
                    walk(space, rest, values, next, prod.clone() * v, total);
                }
            }
        }
    }
    let mut total = T::zero();
    walk(space, tables, values, Point::ORIGIN, T::one(), &mut total);
    total
}

/// `Λ_E[f]`: the average of `f(g_1)···f(g_k)` over the solutions of `E`.
///
/// The first `k - 1` variables range over `G^{k-1}` and the last is solved
/// for, so this costs `O(N^{k-1})`. All arithmetic is exact; when the scaled
/// integer numerators are small enough the sum runs in `i128`.
pub fn lambda(eq: &LinearEquation, f: &RationalFn) -> Result<Rational> {
    let space = f.space();
    let tables = eq.solver_tables(space)?;
    let k = eq.arity() as u32;
    let (nums, den) = f.integer_form();
    let solutions = BigInt::from(space.size()).pow(k - 1);

    let max_bits = nums.iter().map(|n| n.bits()).max().unwrap_or(0);
    let fits = max_bits < 63 && (max_bits * k as u64 + solutions.bits() + 1) < 127;
    let total = if fits {
        let small: Vec<i128> = nums.iter().map(|n| n.to_i128().unwrap()).collect();
        BigInt::from(sum_over_solutions(space, &tables, &small))
    } else {
        sum_over_solutions(space, &tables, &nums)
    };
    Ok(Rational::new(total, solutions * den.pow(k)))
}

/// Brute-force `Λ_E[f]`: filters all of `G^k` by the equation. Independent
/// of [`lambda`]'s parameterization; used as its oracle.
pub fn lambda_naive(eq: &LinearEquation, f: &RationalFn) -> Result<Rational> {
    let space = f.space();
    eq.field_coeffs(space.field())?;
    let k = eq.arity();
    let n = space.size() as u64;
    let tuples = n.checked_pow(k as u32).unwrap_or(u64::MAX);
    if tuples > NAIVE_TUPLE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{tuples} tuples exceed the brute-force limit {NAIVE_TUPLE_LIMIT}"
        )));
    }
    let mut tuple = vec![Point::ORIGIN; k];
    let mut sum = Rational::zero();
    let mut count = 0u64;
    for code in 0..tuples {
        let mut rest = code;
        for slot in tuple.iter_mut() {
            *slot = Point::new((rest % n) as u32);
            rest /= n;
        }
        if eq.is_solution(space, &tuple) {
            count += 1;
            sum += tuple
                .iter()
                .map(|&g| f.value(g).clone())
                .fold(Rational::one(), |a, b| a * b);
        }
    }
    Ok(sum / int(count as i64))
}

/// The three quantities in `Λ_E[f̃] = Λ_E[f] - (E f)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltIdentity {
    pub balanced: Rational,
    pub plain: Rational,
    pub mean_power: Rational,
}

impl AltIdentity {
    pub fn holds(&self) -> bool {
        self.balanced == &self.plain - &self.mean_power
    }
}

pub fn lambda_alt_check(eq: &LinearEquation, f: &RationalFn) -> Result<AltIdentity> {
    Ok(AltIdentity {
        balanced: lambda(eq, &f.balance())?,
        plain: lambda(eq, f)?,
        mean_power: num_traits::pow(f.mean(), eq.arity()),
    })
}

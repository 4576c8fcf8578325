//! The vector space `F_q^r`: point encoding, hyperplanes, slices and the
//! rank-descent projection.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};

/// Largest number of points a [`Space`] may have.
pub const MAX_POINTS: u64 = 1 << 24;

/// A point of `F_q^r`, encoded as `Σ coords[i] · q^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point(u32);

impl Point {
    pub const ORIGIN: Point = Point(0);

    pub fn new(index: u32) -> Self {
        Point(index)
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_origin(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Space {
    field: Arc<FieldSpec>,
    rank: usize,
    size: u32,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.field.order(), self.rank)
    }
}

impl Space {
    pub fn new(field: impl Into<Arc<FieldSpec>>, rank: usize) -> Result<Self> {
        let field = field.into();
        let size = (field.order() as u64)
            .checked_pow(rank as u32)
            .filter(|&n| n <= MAX_POINTS)
            .ok_or(Error::SpaceTooLarge(u64::MAX))?;
        Ok(Space {
            field,
            rank,
            size: size as u32,
        })
    }

    /// Shorthand for `Space::new(FieldSpec::from_order(q)?, rank)`.
    pub fn of_order(q: u64, rank: usize) -> Result<Self> {
        Space::new(FieldSpec::from_order(q)?, rank)
    }

    /// Same field, different rank.
    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        Space::new(self.field.clone(), rank)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> {
        (0..self.size).map(Point)
    }

    pub fn check(&self, p: Point) -> Result<Point> {
        if p.0 < self.size {
            Ok(p)
        } else {
            Err(Error::OutOfRange {
                what: "point",
                index: p.0 as u64,
                bound: self.size as u64,
            })
        }
    }

    pub fn point(&self, coords: &[FieldElem]) -> Result<Point> {
        if coords.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: coords.len(),
            });
        }
        let q = self.q();
        let mut index = 0u32;
        for c in coords.iter().rev() {
            index = index * q + self.field.elem(c.index())?.index();
        }
        Ok(Point(index))
    }

    /// Point from raw field-element indices, as found in set files.
    pub fn point_from_indices(&self, coords: &[u32]) -> Result<Point> {
        let elems = coords
            .iter()
            .map(|&c| self.field.elem(c))
            .collect::<Result<Vec<_>>>()?;
        self.point(&elems)
    }

    pub fn coords(&self, p: Point) -> Vec<FieldElem> {
        let q = self.q();
        let mut rest = p.0;
        (0..self.rank)
            .map(|_| {
                let d = rest % q;
                rest /= q;
                // Digits are in range by construction.
                self.field.elem(d).unwrap()
            })
            .collect()
    }

    /// Unit vector `e_i`.
    pub fn basis_vector(&self, i: usize) -> Point {
        Point(self.q().pow(i as u32))
    }

    fn zip_digits(
        &self,
        a: Point,
        b: Point,
        op: impl Fn(FieldElem, FieldElem) -> FieldElem,
    ) -> Point {
        let q = self.q();
        let (mut a, mut b) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.rank {
            let d = op(FieldElem::from_index(a % q), FieldElem::from_index(b % q));
            out += d.index() * place;
            place *= q;
            a /= q;
            b /= q;
        }
        Point(out)
    }

    #[inline]
    pub fn add(&self, a: Point, b: Point) -> Point {
        self.zip_digits(a, b, |x, y| self.field.add(x, y))
    }

    #[inline]
    pub fn sub(&self, a: Point, b: Point) -> Point {
        self.zip_digits(a, b, |x, y| self.field.sub(x, y))
    }

    pub fn neg(&self, a: Point) -> Point {
        self.sub(Point::ORIGIN, a)
    }

    pub fn scale(&self, c: FieldElem, a: Point) -> Point {
        self.zip_digits(a, Point::ORIGIN, |x, _| self.field.mul(c, x))
    }

    /// Lookup table `g -> c·g` over all points.
    pub fn scale_table(&self, c: FieldElem) -> Vec<Point> {
        self.points().map(|g| self.scale(c, g)).collect()
    }

    /// Standard bilinear form `Σ n_i g_i`.
    pub fn pairing(&self, n: Point, g: Point) -> FieldElem {
        let q = self.q();
        let (mut n, mut g) = (n.0, g.0);
        let mut acc = FieldElem::ZERO;
        for _ in 0..self.rank {
            let term = self
                .field
                .mul(FieldElem::from_index(n % q), FieldElem::from_index(g % q));
            acc = self.field.add(acc, term);
            n /= q;
            g /= q;
        }
        acc
    }

    /// Position of the lowest-index nonzero coordinate.
    fn leading_position(&self, p: Point) -> Option<usize> {
        let q = self.q();
        let mut rest = p.0;
        for i in 0..self.rank {
            if !rest.is_multiple_of(q) {
                return Some(i);
            }
            rest /= q;
        }
        None
    }

    /// All co-dimension-1 linear subspaces, as canonical normals in ascending
    /// index order. There are `(q^r - 1)/(q - 1)` of them.
    pub fn hyperplanes(&self) -> Result<Vec<Hyperplane>> {
        if self.rank == 0 {
            return Err(Error::RankZero);
        }
        Ok(self
            .points()
            .filter(|&p| {
                self.leading_position(p)
                    .is_some_and(|j| self.coords(p)[j] == FieldElem::ONE)
            })
            .map(|normal| Hyperplane { normal })
            .collect())
    }

    /// The canonical hyperplanes whose subspace contains `g`.
    pub fn hyperplanes_containing(&self, g: Point) -> Result<Vec<Hyperplane>> {
        self.check(g)?;
        if g.is_origin() {
            return Err(Error::ZeroPoint);
        }
        Ok(self
            .hyperplanes()?
            .into_iter()
            .filter(|h| self.pairing(h.normal, g).is_zero())
            .collect())
    }

    /// Points of `{g : <n, g> = t}` in ascending index order.
    pub fn slice(&self, slice: &AffineHyperplane) -> Vec<Point> {
        self.points()
            .filter(|&g| self.pairing(slice.hyperplane.normal, g) == slice.level)
            .collect()
    }

    /// Smallest-index point of `{g : <n, g> = t}`.
    pub fn slice_representative(&self, slice: &AffineHyperplane) -> Point {
        self.points()
            .find(|&g| self.pairing(slice.hyperplane.normal, g) == slice.level)
            .expect("every level set of a nonzero functional is nonempty")
    }

    /// Maps `(A - g) ∩ V` into `F_q^{r-1}` using the basis
    /// `b_i = e_i - n_i e_j` (`i != j`, `j` the leading position of the
    /// normal): a vector of `V` is sent to its coordinates at positions `i != j`.
    ///
    /// Returns the rank-`(r-1)` space together with the sorted image.
    pub fn project_to_subspace(
        &self,
        set: &[Point],
        offset: Point,
        hyperplane: &Hyperplane,
    ) -> Result<(Space, Vec<Point>)> {
        if self.rank == 0 {
            return Err(Error::RankZero);
        }
        self.check(offset)?;
        let lead = self
            .leading_position(hyperplane.normal)
            .ok_or(Error::ZeroNormal)?;
        let target = self.with_rank(self.rank - 1)?;
        let mut image = Vec::new();
        for &a in set {
            self.check(a)?;
            let v = self.sub(a, offset);
            if !self.pairing(hyperplane.normal, v).is_zero() {
                continue;
            }
            let mut coords = self.coords(v);
            coords.remove(lead);
            image.push(target.point(&coords)?);
        }
        image.sort_unstable();
        image.dedup();
        Ok((target, image))
    }

    /// Parses the set-file format: one point per line, `r` comma-separated
    /// field-element indices; blank lines and `#` comments are skipped.
    pub fn parse_set(&self, text: &str) -> Result<Vec<Point>> {
        let mut points = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let coords = line
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u32>()
                        .map_err(|e| err(format!("bad coordinate {:?}: {e}", tok.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            let p = self
                .point_from_indices(&coords)
                .map_err(|e| err(e.to_string()))?;
            points.push(p);
        }
        points.sort_unstable();
        points.dedup();
        Ok(points)
    }

    pub fn format_set(&self, set: &[Point]) -> String {
        let mut out = String::new();
        for &p in set {
            let line: Vec<String> = self.coords(p).iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// A co-dimension-1 linear subspace `V = {g : <n, g> = 0}`, identified by its
/// normal scaled so the first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    normal: Point,
}

impl Hyperplane {
    /// Canonicalizes an arbitrary nonzero normal.
    pub fn new(space: &Space, normal: Point) -> Result<Self> {
        space.check(normal)?;
        let lead = space.leading_position(normal).ok_or(Error::ZeroNormal)?;
        let scale = space.field().inv(space.coords(normal)[lead])?;
        Ok(Hyperplane {
            normal: space.scale(scale, normal),
        })
    }

    pub fn normal(&self) -> Point {
        self.normal
    }

    pub fn level(&self, level: FieldElem) -> AffineHyperplane {
        AffineHyperplane {
            hyperplane: *self,
            level,
        }
    }
}

/// The affine slice `{g : <n, g> = level}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineHyperplane {
    pub hyperplane: Hyperplane,
    pub level: FieldElem,
}

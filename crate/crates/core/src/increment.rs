//! Hyperplane decomposition, the squares-versus-cubes comparison and the
//! density increment for progression-free sets, all as exact, self-checking
//! computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::functional::{int, inverse_power, lambda, LinearEquation, Rational, RationalFn};
use crate::gf::FieldElem;
use crate::space::{AffineHyperplane, Hyperplane, Point, Space};

fn require_odd(space: &Space) -> Result<()> {
    if space.field().is_odd() {
        Ok(())
    } else {
        Err(Error::EvenOrder(space.q()))
    }
}

fn membership(space: &Space, set: &[Point]) -> Result<Vec<bool>> {
    let mut mask = vec![false; space.size() as usize];
    for &p in set {
        mask[space.check(p)?.index() as usize] = true;
    }
    Ok(mask)
}

/// First nontrivial progression `(a, b, c)`, `a + c = 2b`, `a != c`, in the
/// order (smallest `a`, then smallest `b`).
pub fn find_progression(set: &[Point], space: &Space) -> Result<Option<(Point, Point, Point)>> {
    require_odd(space)?;
    let mask = membership(space, set)?;
    let mut members: Vec<Point> = set.to_vec();
    members.sort_unstable();
    members.dedup();
    let two = space.field().scalar_from_int(2);
    for &a in &members {
        for &b in &members {
            if a == b {
                continue;
            }
            let c = space.sub(space.scale(two, b), a);
            if mask[c.index() as usize] {
                return Ok(Some((a, b, c)));
            }
        }
    }
    Ok(None)
}

pub fn is_progression_free(set: &[Point], space: &Space) -> Result<bool> {
    Ok(find_progression(set, space)?.is_none())
}

fn not_progression_free((a, b, c): (Point, Point, Point)) -> Error {
    Error::NotProgressionFree {
        a: a.index(),
        b: b.index(),
        c: c.index(),
    }
}

/// `Λ_{x-2y+z=0}[1_A]`, checked against `|A| / q^{2r}`: only the trivial
/// solutions `a = b = c` may contribute.
pub fn ap_lambda_value(set: &[Point], space: &Space) -> Result<Rational> {
    require_odd(space)?;
    let f = RationalFn::indicator(space, set)?;
    let value = lambda(&LinearEquation::ap(), &f)?;
    let count = membership(space, set)?.iter().filter(|&&b| b).count();
    let expected = int(count as i64) * inverse_power(space.q(), 2 * space.rank());
    if value != expected {
        let triple = find_progression(set, space)?.ok_or_else(|| {
            Error::Invariant("progression count exceeds |A| but no progression found".into())
        })?;
        return Err(not_progression_free(triple));
    }
    Ok(value)
}

/// Two exactly computed sides of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `Λ_E[f̃]` against `Σ_V Λ_E[f̃|V]` over all co-dimension-1 subspaces `V`.
pub fn verify_hyperplane_identity(eq: &LinearEquation, f: &RationalFn) -> Result<IdentityReport> {
    let space = f.space();
    let hyperplanes = space.hyperplanes()?;
    let balanced = f.balance();
    let lhs = lambda(eq, &balanced)?;
    let mut rhs = Rational::zero();
    for h in &hyperplanes {
        rhs += lambda(eq, &balanced.restrict_to_quotient(h)?)?;
    }
    Ok(IdentityReport { lhs, rhs })
}

/// `‖f̃‖²` against `Σ_V ‖f̃|V‖²`, computed from norms directly rather than
/// through `Λ_{x-y=0}`.
pub fn parseval_check(f: &RationalFn) -> Result<IdentityReport> {
    let space = f.space();
    let hyperplanes = space.hyperplanes()?;
    let balanced = f.balance();
    let mut rhs = Rational::zero();
    for h in &hyperplanes {
        rhs += balanced.restrict_to_quotient(h)?.l2_norm_sq();
    }
    Ok(IdentityReport {
        lhs: balanced.l2_norm_sq(),
        rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimWitness {
    pub point: Point,
    pub value: Rational,
    /// `E f + M`.
    pub target: Rational,
    /// The hypothesis held with equality.
    pub at_threshold: bool,
}

/// Given the signed comparison between `Λ_E[f̃]` and `M^{k-2}‖f̃‖²`, returns a
/// point where `f >= E f + M` (the smallest-index maximizer of `f`).
///
/// The hypothesis is checked exactly and its failure is reported as
/// [`Error::HypothesisNotSatisfied`]. A missing witness under a satisfied
/// hypothesis is an [`Error::Invariant`].
pub fn squares_cubes_witness(
    eq: &LinearEquation,
    f: &RationalFn,
    m: &Rational,
) -> Result<ClaimWitness> {
    let k = eq.arity();
    if k < 3 {
        return Err(Error::TooFewVariables { got: k, min: 3 });
    }
    eq.field_coeffs(f.space().field())?;
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let balanced = f.balance();
    let lam = lambda(eq, &balanced)?;
    let threshold = num_traits::pow(m.clone(), k - 2) * balanced.l2_norm_sq();
    let (holds, at_threshold) = if k % 2 == 1 {
        (lam <= -threshold.clone(), lam == -threshold.clone())
    } else {
        (lam >= threshold, lam == threshold)
    };
    if !holds {
        return Err(Error::HypothesisNotSatisfied(format!(
            "Λ_E[f̃] = {lam} is not {} M^{}‖f̃‖² for M = {m}",
            if k % 2 == 1 { "≤ -" } else { "≥" },
            k - 2
        )));
    }
    let target = f.mean() + m;
    let point = f.argmax();
    let value = f.value(point).clone();
    if value < target {
        return Err(Error::Invariant(format!(
            "no point reaches E f + M = {target}; max f = {value}"
        )));
    }
    Ok(ClaimWitness {
        point,
        value,
        target,
        at_threshold,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessReport {
    /// `Λ_E[f̃]` for `f = 1_{G∖{g}}`.
    pub lambda: Rational,
    /// `(-1)^k N^{-(k-2)} ‖f̃‖²`.
    pub scaled_norm: Rational,
    /// `(-1)^k N^{-k} (N - 1)`.
    pub closed_form: Rational,
    pub max_balanced: Rational,
    /// `1/N`.
    pub expected_max: Rational,
}

impl SharpnessReport {
    pub fn holds(&self) -> bool {
        self.lambda == self.closed_form
            && self.scaled_norm == self.closed_form
            && self.max_balanced == self.expected_max
    }
}

/// The extremal configuration `f = 1_{G∖{g}}` for an equation whose
/// coefficients sum to zero mod `p`.
pub fn sharpness_case(space: &Space, eq: &LinearEquation, g: Point) -> Result<SharpnessReport> {
    let field = space.field();
    eq.field_coeffs(field)?;
    space.check(g)?;
    let sum: i64 = eq.coeffs().iter().sum();
    if !field.scalar_from_int(sum).is_zero() {
        return Err(Error::CoefficientSumNonzero {
            sum,
            p: field.characteristic(),
        });
    }
    let k = eq.arity();
    let n = space.size() as i64;
    let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    let complement: Vec<Point> = space.points().filter(|&p| p != g).collect();
    let balanced = RationalFn::indicator(space, &complement)?.balance();
    let n_pow = |e: usize| Rational::from_integer(BigInt::from(n).pow(e as u32));
    Ok(SharpnessReport {
        lambda: lambda(eq, &balanced)?,
        scaled_norm: &sign * balanced.l2_norm_sq() / n_pow(k - 2),
        closed_form: &sign * int(n - 1) / n_pow(k),
        max_balanced: balanced.max_value().clone(),
        expected_max: Rational::new(BigInt::one(), BigInt::from(n)),
    })
}

/// How [`proposition_increment`] picks its slice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SliceRule {
    /// First hyperplane (ascending canonical normal) passing the
    /// `Λ_E[f̃|V]·‖f̃‖² <= Λ_E[f̃]·‖f̃|V‖²` comparison, then its heaviest level.
    #[default]
    Constructive,
    /// Heaviest slice over all hyperplanes and levels.
    GlobalBest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropositionOutcome {
    pub slice: AffineHyperplane,
    /// `E_{g+V} f`.
    pub average: Rational,
    /// `E f - Λ_E[f̃] / ‖f̃‖²`.
    pub bound: Rational,
}

/// Finds an affine hyperplane on which the average of `f` is at least
/// `E f - Λ_E[f̃] / ‖f̃‖²`, for a three-variable equation `E`.
///
/// Ties break towards the smallest canonical normal, then the smallest level.
pub fn proposition_increment(
    eq: &LinearEquation,
    f: &RationalFn,
    rule: SliceRule,
) -> Result<PropositionOutcome> {
    if eq.arity() != 3 {
        return Err(Error::WrongArity {
            got: eq.arity(),
            expected: 3,
        });
    }
    let space = f.space();
    let hyperplanes = space.hyperplanes()?;
    let balanced = f.balance();
    let norm = balanced.l2_norm_sq();
    if norm.is_zero() {
        return Err(Error::ConstantFunction);
    }
    let lam = lambda(eq, &balanced)?;
    let bound = f.mean() - &lam / &norm;

    let (slice, average) = match rule {
        SliceRule::Constructive => {
            let mut chosen = None;
            for h in &hyperplanes {
                let restricted = balanced.restrict_to_quotient(h)?;
                let norm_v = restricted.l2_norm_sq();
                if norm_v.is_zero() {
                    continue;
                }
                let lam_v = lambda(eq, &restricted)?;
                if lam_v * &norm <= &lam * norm_v {
                    chosen = Some(*h);
                    break;
                }
            }
            let h = chosen.ok_or_else(|| {
                Error::Invariant("no hyperplane passes the Λ / norm comparison".into())
            })?;
            let quotient = f.restrict_to_quotient(&h)?;
            let t = quotient.argmax();
            let level = space.field().elem(t.index())?;
            (h.level(level), quotient.value(t).clone())
        }
        SliceRule::GlobalBest => {
            let mut best: Option<(AffineHyperplane, Rational)> = None;
            for h in &hyperplanes {
                let quotient = f.restrict_to_quotient(h)?;
                let t = quotient.argmax();
                let avg = quotient.value(t);
                if best.as_ref().is_none_or(|(_, b)| avg > b) {
                    let level = space.field().elem(t.index())?;
                    best = Some((h.level(level), avg.clone()));
                }
            }
            best.expect("rank >= 1 has at least one hyperplane")
        }
    };
    if average < bound {
        return Err(Error::Invariant(format!(
            "slice average {average} is below the bound {bound}"
        )));
    }
    Ok(PropositionOutcome {
        slice,
        average,
        bound,
    })
}

/// Witness that a progression-free `A ⊆ F_q^r` has density at least
/// `(α - q^{-r}) / (1 - α)` on some affine hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncrementCertificate {
    pub q: u32,
    pub rank: usize,
    pub slice: AffineHyperplane,
    /// Smallest-index point of the slice.
    pub representative: Point,
    pub alpha: Rational,
    pub alpha0: Rational,
    pub bound: Rational,
    /// `(A - g) ∩ V` in coordinates of `F_q^{r-1}`.
    pub projected: Vec<Point>,
}

impl IncrementCertificate {
    pub fn normal(&self) -> Hyperplane {
        self.slice.hyperplane
    }

    pub fn level(&self) -> FieldElem {
        self.slice.level
    }

    pub fn holds(&self) -> bool {
        self.alpha0 >= self.bound
    }
}

pub fn density_bound(alpha: &Rational, q: u32, rank: usize) -> Rational {
    (alpha - inverse_power(q, rank)) / (Rational::one() - alpha)
}

pub fn density_increment(
    set: &[Point],
    space: &Space,
    rule: SliceRule,
) -> Result<IncrementCertificate> {
    require_odd(space)?;
    if space.rank() == 0 {
        return Err(Error::RankZero);
    }
    let mut set = set.to_vec();
    for &p in &set {
        space.check(p)?;
    }
    set.sort_unstable();
    set.dedup();
    if let Some(triple) = find_progression(&set, space)? {
        return Err(not_progression_free(triple));
    }

    let n = space.size() as i64;
    let alpha = Rational::new(BigInt::from(set.len()), BigInt::from(n));
    let bound = density_bound(&alpha, space.q(), space.rank());

    let slice = if set.is_empty() {
        space.hyperplanes()?[0].level(FieldElem::ZERO)
    } else {
        let f = RationalFn::indicator(space, &set)?;
        let outcome = proposition_increment(&LinearEquation::ap(), &f, rule)?;
        if outcome.bound != bound {
            return Err(Error::Invariant(format!(
                "E f - Λ/‖f̃‖² = {} differs from (α - q^-r)/(1 - α) = {bound}",
                outcome.bound
            )));
        }
        outcome.slice
    };

    let representative = space.slice_representative(&slice);
    let (target, projected) = space.project_to_subspace(&set, representative, &slice.hyperplane)?;
    let alpha0 = Rational::new(BigInt::from(projected.len()), BigInt::from(target.size()));
    let certificate = IncrementCertificate {
        q: space.q(),
        rank: space.rank(),
        slice,
        representative,
        alpha,
        alpha0,
        bound,
        projected,
    };
    if !certificate.holds() {
        return Err(Error::Invariant(format!(
            "certificate density {} below bound {}",
            certificate.alpha0, certificate.bound
        )));
    }
    Ok(certificate)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rank: usize,
    pub alpha: Rational,
    /// `None` on the terminal step.
    pub certificate: Option<IncrementCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationTrace {
    pub q: u32,
    pub steps: Vec<TraceStep>,
}

impl IterationTrace {
    /// Rank drops by one per step, each density is at most 1 and meets the
    /// previous step's bound, and the recorded `alpha0` is the next density.
    pub fn is_sound(&self) -> bool {
        let one = Rational::one();
        let steps_ok = self.steps.windows(2).all(|w| {
            let Some(cert) = &w[0].certificate else {
                return false;
            };
            w[1].rank + 1 == w[0].rank
                && cert.holds()
                && w[1].alpha == cert.alpha0
                && w[1].alpha >= cert.bound
        });
        let terminal_ok = self.steps.last().is_some_and(|s| s.certificate.is_none());
        steps_ok && terminal_ok && self.steps.iter().all(|s| s.alpha <= one)
    }
}

/// Applies [`density_increment`] repeatedly, descending one rank per step,
/// until rank 0 or the empty set.
pub fn meshulam_iterate(set: &[Point], space: &Space, rule: SliceRule) -> Result<IterationTrace> {
    require_odd(space)?;
    let mut space = space.clone();
    let mut set = set.to_vec();
    for &p in &set {
        space.check(p)?;
    }
    set.sort_unstable();
    set.dedup();
    let mut steps = Vec::new();
    loop {
        let alpha = Rational::new(BigInt::from(set.len()), BigInt::from(space.size()));
        if space.rank() == 0 || set.is_empty() {
            steps.push(TraceStep {
                rank: space.rank(),
                alpha,
                certificate: None,
            });
            break;
        }
        let cert = density_increment(&set, &space, rule)?;
        set = cert.projected.clone();
        let rank = space.rank();
        space = space.with_rank(rank - 1)?;
        steps.push(TraceStep {
            rank,
            alpha,
            certificate: Some(cert),
        });
    }
    Ok(IterationTrace {
        q: space.q(),
        steps,
    })
}

/// `T(0) = 1`, `T(r) = (T(r-1) + q^{-r}) / (1 + T(r-1))`: an upper bound on
/// the density of a progression-free subset of `F_q^r`.
pub fn bound_recurrence(q: u32, r_max: usize) -> Vec<Rational> {
    // With T = a/b in lowest terms and Q = q^r the next value is
    // (aQ + b) / (Q(a + b)), whose common factor divides gcd(b, Q)·gcd(Q - 1, a + b),
    // hence Q(Q - 1). Reducing against that keeps every gcd small.
    let mut out = Vec::with_capacity(r_max + 1);
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    out.push(Rational::one());
    let mut q_pow = BigInt::one();
    for _ in 1..=r_max {
        q_pow *= q;
        let num = &a * &q_pow + &b;
        let den = &q_pow * (&a + &b);
        let m = &q_pow * (&q_pow - 1u32);
        let h = (&num % &m).gcd(&m);
        let g = (&den % &h).gcd(&h);
        a = num / &g;
        b = den / &g;
        out.push(Rational::new_raw(a.clone(), b.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(q: u64, r: usize) -> Space {
        Space::of_order(q, r).unwrap()
    }

    fn pts(ids: &[u32]) -> Vec<Point> {
        ids.iter().map(|&i| Point::new(i)).collect()
    }

    #[test]
    fn progression_predicate() {
        let s = space(3, 1);
        assert!(is_progression_free(&pts(&[0, 1]), &s).unwrap());
        assert!(!is_progression_free(&pts(&[0, 1, 2]), &s).unwrap());
        assert_eq!(
            find_progression(&pts(&[0, 1, 2]), &s).unwrap(),
            Some((Point::new(0), Point::new(1), Point::new(2)))
        );
        assert!(is_progression_free(&[], &s).unwrap());
        assert!(is_progression_free(&pts(&[2]), &s).unwrap());
        assert_eq!(
            is_progression_free(&[], &space(2, 2)),
            Err(Error::EvenOrder(2))
        );
    }

    #[test]
    fn progression_predicate_matches_brute_force() {
        // Every subset of F_3^2 and F_5^1, against a direct triple scan.
        for s in [space(3, 2), space(5, 1)] {
            let n = s.size();
            let two = s.field().scalar_from_int(2);
            for mask in 0u32..(1 << n) {
                let set: Vec<Point> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(Point::new)
                    .collect();
                let brute = set.iter().all(|&a| {
                    set.iter()
                        .all(|&c| a == c || set.iter().all(|&b| s.add(a, c) != s.scale(two, b)))
                });
                assert_eq!(is_progression_free(&set, &s).unwrap(), brute);
            }
        }
    }

    #[test]
    fn ap_lambda_examples() {
        assert_eq!(
            ap_lambda_value(&pts(&[0, 1]), &space(3, 1)).unwrap(),
            rat(2, 9)
        );
        assert_eq!(ap_lambda_value(&[], &space(3, 1)).unwrap(), int(0));
        assert_eq!(
            ap_lambda_value(&pts(&[0]), &space(3, 2)).unwrap(),
            rat(1, 81)
        );
        assert_eq!(
            ap_lambda_value(&pts(&[0, 1, 2]), &space(3, 1)),
            Err(Error::NotProgressionFree { a: 0, b: 1, c: 2 })
        );
    }

    #[test]
    fn sets_with_progressions_have_larger_lambda() {
        let s = space(3, 2);
        let f = RationalFn::indicator(&s, &pts(&[0, 1, 2, 4])).unwrap();
        let value = lambda(&LinearEquation::ap(), &f).unwrap();
        assert!(value > rat(4, 81));
    }

    #[test]
    fn hyperplane_identity_examples() {
        let s = space(3, 2);
        let c = RationalFn::constant(&s, rat(3, 4));
        let rep = verify_hyperplane_identity(&LinearEquation::ap(), &c).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.lhs, int(0));

        let set = [
            s.point_from_indices(&[0, 0]).unwrap(),
            s.point_from_indices(&[0, 1]).unwrap(),
        ];
        let f = RationalFn::indicator(&s, &set).unwrap();
        let rep = verify_hyperplane_identity(&LinearEquation::ap(), &f).unwrap();
        // α = 2/9, progression-free: Λ[f̃] = -α(α² - 1/9) = 10/729.
        assert_eq!(rep.lhs, rat(10, 729));
        assert!(rep.holds());

        assert_eq!(
            verify_hyperplane_identity(
                &LinearEquation::ap(),
                &RationalFn::constant(&space(3, 0), int(1))
            ),
            Err(Error::RankZero)
        );
    }

    #[test]
    fn identity_holds_in_characteristic_two() {
        let f4 = crate::gf::FieldSpec::with_modulus(2, 2, &[1, 1, 1]).unwrap();
        let s = Space::new(f4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let eq = LinearEquation::new(vec![1, 1, 1]).unwrap();
        for _ in 0..5 {
            let f = RationalFn::random(&s, &mut rng);
            assert!(verify_hyperplane_identity(&eq, &f).unwrap().holds());
            assert!(parseval_check(&f).unwrap().holds());
        }
    }

    #[test]
    fn parseval_examples() {
        let s = space(3, 2);
        assert_eq!(
            parseval_check(&RationalFn::constant(&s, int(2))).unwrap(),
            IdentityReport {
                lhs: int(0),
                rhs: int(0)
            }
        );
        // {0,1} × F_3.
        let set: Vec<Point> = s.points().filter(|&p| s.coords(p)[0].index() < 2).collect();
        let rep = parseval_check(&RationalFn::indicator(&s, &set).unwrap()).unwrap();
        assert_eq!(rep.lhs, rat(2, 9));
        assert_eq!(rep.rhs, rat(2, 9));
    }

    #[test]
    fn witness_example() {
        let s = space(3, 1);
        let f = RationalFn::indicator(&s, &pts(&[0, 1])).unwrap();
        let w = squares_cubes_witness(&LinearEquation::ap(), &f, &rat(1, 3)).unwrap();
        assert_eq!(w.point, Point::new(0));
        assert_eq!(w.value, int(1));
        assert_eq!(w.target, int(1));
        assert!(w.at_threshold);
    }

    #[test]
    fn witness_preconditions() {
        let s = space(3, 1);
        let f = RationalFn::indicator(&s, &pts(&[0, 1])).unwrap();
        assert!(matches!(
            squares_cubes_witness(&LinearEquation::eq2(), &f, &int(0)),
            Err(Error::TooFewVariables { .. })
        ));
        assert_eq!(
            squares_cubes_witness(
                &LinearEquation::ap(),
                &RationalFn::constant(&s, int(1)),
                &int(0)
            ),
            Err(Error::ConstantFunction)
        );
        assert!(matches!(
            squares_cubes_witness(&LinearEquation::ap(), &f, &rat(1, 2)),
            Err(Error::HypothesisNotSatisfied(_))
        ));
    }

    #[test]
    fn witness_even_arity() {
        // k = 4: hypothesis Λ[f̃] >= M²‖f̃‖².
        let s = space(3, 1);
        let eq = LinearEquation::new(vec![1, 1, 1, 1]).unwrap();
        let f = RationalFn::indicator(&s, &pts(&[0])).unwrap();
        let fb = f.balance();
        let lam = lambda(&eq, &fb).unwrap();
        let norm = fb.l2_norm_sq();
        assert!(lam > int(0));
        // Largest M with M² <= lam / norm, scanned on a grid.
        let ratio = lam / norm;
        let m = (1..=60)
            .map(|i| rat(i, 60))
            .rfind(|m| m * m <= ratio)
            .unwrap();
        let w = squares_cubes_witness(&eq, &f, &m).unwrap();
        assert!(w.value >= f.mean() + &m);
    }

    #[test]
    fn witness_never_fails_on_random_suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (q, r) in [(3, 1), (3, 2), (5, 1), (5, 2)] {
            let s = space(q, r);
            for _ in 0..30 {
                let f = RationalFn::random(&s, &mut rng);
                let fb = f.balance();
                let lam = lambda(&LinearEquation::ap(), &fb).unwrap();
                // Largest M the hypothesis admits for k = 3.
                let m = -lam / fb.l2_norm_sq();
                let w = squares_cubes_witness(&LinearEquation::ap(), &f, &m).unwrap();
                assert!(w.at_threshold);
                assert!(w.value >= f.mean() + &m);
            }
        }
    }

    #[test]
    fn sharpness_examples() {
        for (r, expect) in [(1, rat(-2, 27)), (2, rat(-8, 729))] {
            let s = space(3, r);
            for g in s.points() {
                let rep = sharpness_case(&s, &LinearEquation::ap(), g).unwrap();
                assert_eq!(rep.lambda, expect);
                assert_eq!(rep.scaled_norm, expect);
                assert_eq!(rep.max_balanced, rat(1, s.size() as i64));
                assert!(rep.holds());
            }
        }
        let e4 = LinearEquation::new(vec![1, 1, -1, -1]).unwrap();
        let rep = sharpness_case(&space(5, 1), &e4, Point::new(3)).unwrap();
        assert_eq!(rep.closed_form, rat(4, 625));
        assert!(rep.holds());
        assert_eq!(
            sharpness_case(
                &space(3, 1),
                &LinearEquation::new(vec![1, 1, 2]).unwrap(),
                Point::ORIGIN
            ),
            Err(Error::CoefficientSumNonzero { sum: 4, p: 3 })
        );
        // 1 + 1 + 1 vanishes mod 3.
        assert!(sharpness_case(&space(3, 1), &LinearEquation::sum3(), Point::ORIGIN).is_ok());
    }

    #[test]
    fn sharpness_threshold_rejects_larger_m() {
        let s = space(3, 2);
        let complement: Vec<Point> = s.points().skip(1).collect();
        let f = RationalFn::indicator(&s, &complement).unwrap();
        let above = rat(1, 9) + rat(1, 1000);
        assert!(matches!(
            squares_cubes_witness(&LinearEquation::ap(), &f, &above),
            Err(Error::HypothesisNotSatisfied(_))
        ));
        let w = squares_cubes_witness(&LinearEquation::ap(), &f, &rat(1, 9)).unwrap();
        assert!(w.at_threshold);
        assert_eq!(w.value - f.mean(), rat(1, 9));
    }

    #[test]
    fn proposition_examples() {
        let s = space(3, 1);
        let f = RationalFn::indicator(&s, &pts(&[0, 1])).unwrap();
        let out =
            proposition_increment(&LinearEquation::ap(), &f, SliceRule::Constructive).unwrap();
        assert_eq!(out.slice.level, FieldElem::ZERO);
        assert_eq!(s.slice(&out.slice), pts(&[0]));
        assert_eq!(out.average, int(1));
        assert_eq!(out.bound, int(1));
        assert_eq!(
            proposition_increment(
                &LinearEquation::ap(),
                &RationalFn::constant(&s, int(3)),
                SliceRule::Constructive
            ),
            Err(Error::ConstantFunction)
        );
        assert!(matches!(
            proposition_increment(&LinearEquation::eq2(), &f, SliceRule::Constructive),
            Err(Error::WrongArity { .. })
        ));
    }

    #[test]
    fn proposition_random_suite() {
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        for _ in 0..200 {
            let f = RationalFn::random(&s, &mut rng);
            if f.is_constant() {
                continue;
            }
            for eq in [LinearEquation::ap(), LinearEquation::sum3()] {
                for rule in [SliceRule::Constructive, SliceRule::GlobalBest] {
                    let out = proposition_increment(&eq, &f, rule).unwrap();
                    assert!(out.average >= out.bound);
                    let pts = s.slice(&out.slice);
                    let avg: Rational = pts.iter().map(|&p| f.value(p).clone()).sum::<Rational>()
                        / int(pts.len() as i64);
                    assert_eq!(avg, out.average);
                }
            }
        }
    }

    #[test]
    fn increment_examples() {
        let s = space(3, 1);
        let cert = density_increment(&pts(&[0, 1]), &s, SliceRule::Constructive).unwrap();
        assert_eq!(cert.alpha, rat(2, 3));
        assert_eq!(cert.bound, int(1));
        assert_eq!(cert.alpha0, int(1));
        assert_eq!(cert.representative, Point::ORIGIN);
        assert_eq!(cert.projected, vec![Point::ORIGIN]);

        let cert = density_increment(&pts(&[0]), &s, SliceRule::Constructive).unwrap();
        assert_eq!(cert.bound, int(0));
        assert_eq!(cert.alpha0, int(1));

        let cert = density_increment(&[], &s, SliceRule::Constructive).unwrap();
        assert_eq!(cert.bound, rat(-1, 3));
        assert_eq!(cert.alpha0, int(0));
        assert_eq!(
            cert.slice,
            s.hyperplanes().unwrap()[0].level(FieldElem::ZERO)
        );

        assert_eq!(
            density_increment(&pts(&[0, 1, 2]), &s, SliceRule::Constructive),
            Err(Error::NotProgressionFree { a: 0, b: 1, c: 2 })
        );
        assert_eq!(
            density_increment(&[], &space(2, 2), SliceRule::Constructive),
            Err(Error::EvenOrder(2))
        );
        assert_eq!(
            density_increment(&[], &space(3, 0), SliceRule::Constructive),
            Err(Error::RankZero)
        );
    }

    #[test]
    fn iterate_examples() {
        let s = space(3, 1);
        let trace = meshulam_iterate(&pts(&[0, 1]), &s, SliceRule::Constructive).unwrap();
        let summary: Vec<_> = trace
            .steps
            .iter()
            .map(|st| (st.rank, st.alpha.clone()))
            .collect();
        assert_eq!(summary, vec![(1, rat(2, 3)), (0, int(1))]);
        assert!(trace.is_sound());

        let trace = meshulam_iterate(&[], &space(3, 3), SliceRule::Constructive).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert!(trace.is_sound());
    }

    #[test]
    fn recurrence_examples() {
        let t = bound_recurrence(3, 2);
        assert_eq!(t, vec![int(1), rat(2, 3), rat(7, 15)]);
        assert_eq!(bound_recurrence(5, 1), vec![int(1), rat(3, 5)]);
        assert_eq!(bound_recurrence(3, 0), vec![int(1)]);
    }

    #[test]
    fn recurrence_matches_plain_rational_arithmetic() {
        for q in [3u32, 5, 7, 9, 25] {
            let fast = bound_recurrence(q, 80);
            let mut t = int(1);
            for (r, got) in fast.iter().enumerate().skip(1) {
                t = (&t + inverse_power(q, r)) / (int(1) + &t);
                assert_eq!(got, &t, "q={q} r={r}");
                assert!(got.numer().gcd(got.denom()).is_one());
            }
        }
    }

    #[test]
    fn recurrence_is_decreasing_and_o_one_over_r() {
        let t = bound_recurrence(3, 100);
        for r in 1..=100 {
            assert!(t[r] < t[r - 1]);
            assert!(int(r as i64) * &t[r] <= int(2));
        }
    }
}

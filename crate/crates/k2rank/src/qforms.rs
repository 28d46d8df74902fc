//! Positive definite binary quadratic forms: Gauss reduction, composition,
//! class-group enumeration for negative discriminants, and the diagonal-form
//! representation scan that serves as ground truth for every classification.

use crate::arith::{is_square, is_square_u64, isqrt, legendre, mod_sqrt};
use crate::error::{Error, Result};

/// Largest |disc| we accept. Keeps every intermediate of the reduction and
/// composition formulas inside i128.
const MAX_ABS_DISC: i64 = 1 << 60;

/// Largest prime accepted by [`form_above`]; bounds the unreduced (l, b, c)
/// so that composition intermediates stay inside i128.
const MAX_FORM_PRIME: u64 = 1 << 31;

/// A primitive positive definite integral form aX² + bXY + cY².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QuadForm {
    /// Validates positive definiteness (a > 0, b² − 4ac < 0) and primitivity.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let disc = i128::from(b) * i128::from(b) - 4 * i128::from(a) * i128::from(c);
        if a <= 0 || disc >= 0 {
            return Err(Error::domain(format!(
                "form ({a}, {b}, {c}) is not positive definite"
            )));
        }
        if disc < -i128::from(MAX_ABS_DISC) {
            return Err(Error::domain(format!(
                "form ({a}, {b}, {c}) has |disc| beyond the supported width"
            )));
        }
        if gcd3(a, b, c) != 1 {
            return Err(Error::domain(format!(
                "form ({a}, {b}, {c}) is not primitive"
            )));
        }
        Ok(QuadForm { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn disc(&self) -> i64 {
        (i128::from(self.b) * i128::from(self.b)
            - 4 * i128::from(self.a) * i128::from(self.c)) as i64
    }

    /// The reduced principal form (1, 0, −disc/4) of a discriminant ≡ 0 mod 4.
    pub fn principal(disc: i64) -> Result<Self> {
        if disc >= 0 || disc % 4 != 0 {
            return Err(Error::domain(format!(
                "principal form needs a negative discriminant ≡ 0 mod 4, got {disc}"
            )));
        }
        QuadForm::new(1, 0, -disc / 4)
    }

    /// Reduced: |b| ≤ a ≤ c, with b ≥ 0 whenever |b| = a or a = c.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// The unique reduced form equivalent to this one (Gauss reduction).
    pub fn reduced(&self) -> QuadForm {
        let out = reduce_i128(
            i128::from(self.a),
            i128::from(self.b),
            i128::from(self.c),
        );
        debug_assert!(out.is_reduced());
        debug_assert_eq!(out.disc(), self.disc());
        out
    }

    /// Gauss/Dirichlet composition of classes; the result is reduced.
    pub fn compose(&self, other: &QuadForm) -> Result<QuadForm> {
        let disc = self.disc();
        if disc != other.disc() {
            return Err(Error::domain(format!(
                "compose: discriminant mismatch ({} vs {})",
                disc,
                other.disc()
            )));
        }
        let (f1, f2) = if self.a <= other.a {
            (self, other)
        } else {
            (other, self)
        };
        let (a1, b1) = (i128::from(f1.a), i128::from(f1.b));
        let (a2, b2, c2) = (i128::from(f2.a), i128::from(f2.b), i128::from(f2.c));

        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let (g, u, _) = ext_gcd(a2, a1);
            (u, g)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let (g, u, v) = ext_gcd(s, d);
            (u, -v, g)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let a3 = v1 * v2;
        let b3 = b2 + 2 * v2 * r;
        let num = b3 * b3 - i128::from(disc);
        debug_assert_eq!(num % (4 * a3), 0);
        let c3 = num / (4 * a3);
        Ok(reduce_i128(a3, b3, c3))
    }

    /// k-th power of this class under composition; k = 0 gives the principal class.
    pub fn power_class(&self, k: u64) -> QuadForm {
        let principal =
            QuadForm::principal(self.disc()).expect("valid form has a valid discriminant");
        let mut acc = principal;
        let mut base = self.reduced();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base).expect("same discriminant");
            }
            base = base.compose(&base).expect("same discriminant");
            k >>= 1;
        }
        acc
    }
}

/// Bring b into the window (−a, a] by a translation.
fn normalize_i128(a: i128, b: i128, c: i128) -> (i128, i128, i128) {
    if -a < b && b <= a {
        return (a, b, c);
    }
    let r = (a - b).div_euclid(2 * a);
    (a, b + 2 * r * a, c + (a * r + b) * r)
}

/// Gauss reduction in wide arithmetic; the reduced result always fits i64
/// because a, |b| ≤ √(|disc|/3) and c ≤ |disc|.
fn reduce_i128(a: i128, b: i128, c: i128) -> QuadForm {
    let (mut a, mut b, mut c) = normalize_i128(a, b, c);
    while a > c || (a == c && b < 0) {
        // ρ step: swap outer coefficients, flip b, renormalize.
        (a, b, c) = normalize_i128(c, -b, a);
    }
    QuadForm {
        a: a as i64,
        b: b as i64,
        c: c as i64,
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    gcd(gcd(a, b), c)
}

/// (g, x, y) with a·x + b·y = g = gcd(a, b) ≥ 0.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// The full form class group of a negative discriminant ≡ 0 mod 4.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    disc: i64,
    forms: Vec<QuadForm>,
    principal: QuadForm,
}

impl ClassGroup {
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// The reduced representatives, sorted by (a, b).
    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    /// Class number h(disc).
    pub fn h(&self) -> u64 {
        self.forms.len() as u64
    }

    pub fn principal(&self) -> &QuadForm {
        &self.principal
    }
}

/// Enumerate all reduced primitive forms of the given discriminant: scan
/// a ≤ √(|disc|/3), even b with |b| ≤ a, integral c = (b² − disc)/(4a).
pub fn enumerate_class_group(disc: i64) -> Result<ClassGroup> {
    if disc >= 0 || disc % 4 != 0 {
        return Err(Error::domain(format!(
            "class group needs a negative discriminant ≡ 0 mod 4, got {disc}"
        )));
    }
    if disc < -MAX_ABS_DISC {
        return Err(Error::domain(format!(
            "|disc| = {} exceeds the supported width {MAX_ABS_DISC}",
            disc.unsigned_abs()
        )));
    }
    let mut forms = Vec::new();
    let a_max = isqrt(disc.unsigned_abs() as u128 / 3) as i64;
    for a in 1..=a_max {
        for b in (-a..=a).filter(|b| b % 2 == 0) {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            if gcd3(a, b, c) != 1 {
                continue;
            }
            forms.push(QuadForm { a, b, c });
        }
    }
    forms.sort();
    let principal = QuadForm::principal(disc)?;
    debug_assert!(forms.binary_search(&principal).is_ok());
    Ok(ClassGroup {
        disc,
        forms,
        principal,
    })
}

/// The reduced class of a form with leading coefficient l, for an odd prime l
/// not dividing the discriminant with (disc/l) = 1.
///
/// Takes the smallest non-negative even b with b² ≡ disc (mod 4l); then
/// (l, b, (b² − disc)/4l) is reduced to its class representative.
pub fn form_above(l: u64, disc: i64) -> Result<QuadForm> {
    if disc >= 0 || disc % 4 != 0 {
        return Err(Error::domain(format!(
            "form_above needs a negative discriminant ≡ 0 mod 4, got {disc}"
        )));
    }
    if l > MAX_FORM_PRIME {
        return Err(Error::domain(format!(
            "form_above: prime {l} exceeds the supported width {MAX_FORM_PRIME}"
        )));
    }
    if disc.unsigned_abs() % l == 0 {
        return Err(Error::domain(format!(
            "form_above: {l} divides disc {disc}"
        )));
    }
    if legendre(disc, l)? != 1 {
        return Err(Error::domain(format!(
            "form_above: {disc} is not a quadratic residue mod {l}"
        )));
    }
    let r = mod_sqrt(disc, l)?.expect("residue checked above");
    // Exactly one even representative of ±r mod l lies in [0, 2l); b² ≡ disc
    // (mod 4l) then follows from b² ≡ disc (mod l) together with 4 | disc, 2 | b.
    let even_rep = |x: u64| if x % 2 == 0 { x } else { x + l };
    let b = even_rep(r).min(even_rep(l - r));
    let li = i128::from(l);
    let num = i128::from(b) * i128::from(b) - i128::from(disc);
    debug_assert_eq!(num % (4 * li), 0);
    let c = num / (4 * li);
    Ok(reduce_i128(li, i128::from(b), c))
}

/// Witness of a representation N = s·n² + t·m² found by [`diag_representation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepWitness {
    pub n: u64,
    pub m: u64,
}

/// First-witness scan for N = s·n² + t·m² with m ≥ 1, optionally skipping
/// m ≡ 0 mod a forbidden prime. This literal scan is the ground truth for
/// all three representation conditions; the class-group route is only an
/// optimization verified against it.
///
/// m runs ascending from 1 to ⌊√(N/t)⌋; the first m for which (N − t·m²)/s
/// is an integral perfect square wins, with n its non-negative root.
pub fn diag_representation(
    n_value: u128,
    s: u64,
    t: u64,
    forbidden: Option<u64>,
) -> Option<RepWitness> {
    debug_assert!(s >= 1 && t >= 1);
    if n_value <= u64::MAX as u128 {
        return diag_representation_u64(n_value as u64, s, t, forbidden);
    }
    let (s, t) = (u128::from(s), u128::from(t));
    let m_max = isqrt(n_value / t);
    for m in 1..=m_max {
        if forbidden.is_some_and(|f| m % u128::from(f) == 0) {
            continue;
        }
        let rest = n_value - t * m * m;
        if rest % s != 0 {
            continue;
        }
        if let Some(root) = is_square(rest / s) {
            return Some(RepWitness {
                n: root as u64,
                m: m as u64,
            });
        }
    }
    None
}

fn diag_representation_u64(
    n_value: u64,
    s: u64,
    t: u64,
    forbidden: Option<u64>,
) -> Option<RepWitness> {
    let m_max = isqrt(u128::from(n_value) / u128::from(t)) as u64;
    let step = forbidden.unwrap_or(0);
    let mut next_skip = step;
    for m in 1..=m_max {
        if step != 0 && m == next_skip {
            next_skip += step;
            continue;
        }
        let rest = n_value - t * m * m;
        if rest % s != 0 {
            continue;
        }
        if let Some(root) = is_square_u64(rest / s) {
            return Some(RepWitness { n: root, m });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle with a different scan shape: solve b² − 4ac = disc
    /// by iterating c instead of dividing, then filter reduced primitive.
    fn oracle_reduced_forms(disc: i64) -> Vec<QuadForm> {
        assert!(disc < 0 && disc % 4 == 0);
        let mut out = Vec::new();
        let bound = disc.unsigned_abs() as i64;
        for a in 1..=bound {
            if 3 * a * a > bound {
                break;
            }
            for c in a..=(bound / (4 * a) + a) {
                for b in -a..=a {
                    if b * b - 4 * a * c != disc {
                        continue;
                    }
                    if c < a || ((b.abs() == a || a == c) && b < 0) {
                        continue;
                    }
                    if gcd3(a, b, c) != 1 {
                        continue;
                    }
                    out.push(QuadForm::new(a, b, c).unwrap());
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn reduce_examples() {
        let f = QuadForm::new(1, 0, 32).unwrap();
        assert_eq!(f.reduced(), f);
        assert_eq!(
            QuadForm::new(32, 0, 1).unwrap().reduced(),
            QuadForm::new(1, 0, 32).unwrap()
        );
        assert_eq!(
            QuadForm::new(9, 4, 4).unwrap().reduced(),
            QuadForm::new(4, 4, 9).unwrap()
        );
    }

    #[test]
    fn reduce_is_idempotent_and_preserves_disc() {
        for (a, b, c) in [(32, 0, 1), (9, 4, 4), (15, 14, 5), (7, -6, 3), (11, 10, 3)] {
            let f = QuadForm::new(a, b, c).unwrap();
            let r = f.reduced();
            assert!(r.is_reduced());
            assert_eq!(r.disc(), f.disc());
            assert_eq!(r.reduced(), r);
        }
    }

    #[test]
    fn new_rejects_indefinite_and_imprimitive() {
        assert!(QuadForm::new(1, 5, 1).is_err()); // disc 21 > 0
        assert!(QuadForm::new(-1, 0, -32).is_err());
        assert!(QuadForm::new(2, 0, 16).is_err()); // gcd 2
    }

    #[test]
    fn class_group_disc_minus_56() {
        let cg = enumerate_class_group(-56).unwrap();
        assert_eq!(cg.h(), 4);
        let mut expected: Vec<QuadForm> = [(1, 0, 14), (2, 0, 7), (3, -2, 5), (3, 2, 5)]
            .iter()
            .map(|&(a, b, c)| QuadForm::new(a, b, c).unwrap())
            .collect();
        expected.sort();
        assert_eq!(cg.forms(), expected.as_slice());
        assert_eq!(*cg.principal(), QuadForm::new(1, 0, 14).unwrap());
    }

    #[test]
    fn class_numbers_for_shipped_presets() {
        assert_eq!(enumerate_class_group(-184).unwrap().h(), 4);
        assert_eq!(enumerate_class_group(-248).unwrap().h(), 8);
        assert_eq!(enumerate_class_group(-128).unwrap().h(), 4);
    }

    #[test]
    fn class_group_matches_independent_oracle() {
        for disc in [-56, -128, -184, -248, -408, -4] {
            let cg = enumerate_class_group(disc).unwrap();
            assert_eq!(
                cg.forms(),
                oracle_reduced_forms(disc).as_slice(),
                "disc {disc}"
            );
        }
    }

    #[test]
    fn class_group_rejects_bad_disc() {
        assert!(enumerate_class_group(-7).is_err()); // ≡ 1 mod 4
        assert!(enumerate_class_group(8).is_err());
        assert!(enumerate_class_group(0).is_err());
    }

    #[test]
    fn compose_identity_law() {
        let cg = enumerate_class_group(-56).unwrap();
        let e = cg.principal();
        for f in cg.forms() {
            assert_eq!(e.compose(f).unwrap(), *f);
            assert_eq!(f.compose(e).unwrap(), *f);
        }
    }

    #[test]
    fn compose_examples() {
        let f = QuadForm::new(3, 2, 11).unwrap();
        let g = QuadForm::new(3, -2, 11).unwrap();
        assert_eq!(f.compose(&g).unwrap(), QuadForm::new(1, 0, 32).unwrap());

        let amb = QuadForm::new(2, 0, 7).unwrap();
        assert_eq!(amb.compose(&amb).unwrap(), QuadForm::new(1, 0, 14).unwrap());
    }

    #[test]
    fn compose_rejects_disc_mismatch() {
        let f = QuadForm::new(1, 0, 14).unwrap();
        let g = QuadForm::new(1, 0, 32).unwrap();
        assert!(f.compose(&g).is_err());
    }

    /// Full multiplication table on disc −56: closure, identity, inverses,
    /// commutativity, and Lagrange via power_class.
    #[test]
    fn group_axioms_on_disc_minus_56() {
        let cg = enumerate_class_group(-56).unwrap();
        let forms = cg.forms();
        let e = *cg.principal();
        for f in forms {
            let mut has_inverse = false;
            for g in forms {
                let fg = f.compose(g).unwrap();
                assert!(forms.contains(&fg), "closure failed at {f:?} * {g:?}");
                assert_eq!(fg, g.compose(f).unwrap(), "commutativity");
                if fg == e {
                    has_inverse = true;
                }
            }
            assert!(has_inverse, "no inverse for {f:?}");
            assert_eq!(f.power_class(cg.h()), e, "Lagrange failed for {f:?}");
        }
    }

    #[test]
    fn compose_is_associative_on_disc_minus_248() {
        let cg = enumerate_class_group(-248).unwrap();
        let forms = cg.forms();
        for f in forms {
            for g in forms {
                for k in forms {
                    let left = f.compose(g).unwrap().compose(k).unwrap();
                    let right = f.compose(&g.compose(k).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn power_class_examples() {
        let f = QuadForm::new(3, 2, 5).unwrap(); // order 4 in disc −56
        assert_eq!(f.power_class(1), f.reduced());
        assert_eq!(f.power_class(0), QuadForm::new(1, 0, 14).unwrap());
        let amb = QuadForm::new(2, 0, 7).unwrap();
        assert_eq!(amb.power_class(2), QuadForm::new(1, 0, 14).unwrap());
        assert_eq!(f.power_class(2), amb); // the generator squares to the ambiguous class
        assert_eq!(f.power_class(4), QuadForm::new(1, 0, 14).unwrap());
    }

    #[test]
    fn form_above_examples() {
        // 113 satisfies ⟨2,p⟩ for p = 7: its class to the power h/4 = 1 is
        // not principal.
        let f = form_above(113, -56).unwrap();
        assert_ne!(f.power_class(1), QuadForm::new(1, 0, 14).unwrap());

        // 281 = 15² + 14·2² is principal.
        let g = form_above(281, -56).unwrap();
        assert_eq!(g.power_class(1), QuadForm::new(1, 0, 14).unwrap());

        // 41 = 3² + 32·1² is principal for disc −128.
        let h = form_above(41, -128).unwrap();
        assert_eq!(h, QuadForm::new(1, 0, 32).unwrap());
    }

    #[test]
    fn form_above_output_is_reduced_with_right_disc() {
        for (l, disc) in [
            (113u64, -56i64),
            (137, -56),
            (281, -56),
            (41, -128),
            (113, -128),
        ] {
            let f = form_above(l, disc).unwrap();
            assert_eq!(f.disc(), disc);
            assert!(f.is_reduced());
        }
    }

    #[test]
    fn form_above_rejects_nonresidue_and_divisor() {
        // −56 ≡ 10 mod 11 and (10/11) = −1.
        assert!(form_above(11, -56).is_err());
        assert!(form_above(7, -56).is_err()); // 7 | 56
    }

    #[test]
    fn diag_representation_examples() {
        assert_eq!(
            diag_representation(113, 1, 32, None),
            Some(RepWitness { n: 9, m: 1 })
        );
        assert_eq!(
            diag_representation(113, 2, 7, Some(113)),
            Some(RepWitness { n: 5, m: 3 })
        );
        assert_eq!(diag_representation(113, 1, 14, Some(113)), None);
    }

    #[test]
    fn diag_representation_first_witness_rule() {
        assert_eq!(
            diag_representation(33, 1, 32, None),
            Some(RepWitness { n: 1, m: 1 })
        );
        // n = 0 is allowed: 32 = 0² + 32·1².
        assert_eq!(
            diag_representation(32, 1, 32, None),
            Some(RepWitness { n: 0, m: 1 })
        );
        // The forbidden modulus skips its multiples: 8 = 0² + 2·2² exists
        // only via m = 2, so forbidding 2 hides it.
        assert_eq!(diag_representation(8, 1, 2, Some(2)), None);
        assert_eq!(
            diag_representation(8, 1, 2, None),
            Some(RepWitness { n: 0, m: 2 })
        );
    }

    #[test]
    fn diag_representation_wide_path() {
        // A constructed hit beyond u64 exercises the u128 scan.
        let n = 1u64 << 40;
        let val = 2 * u128::from(n) * u128::from(n) + 7 * 9;
        assert_eq!(
            diag_representation(val, 2, 7, None),
            Some(RepWitness { n, m: 3 })
        );
        let wide = (1u128 << 68) + 113;
        if let Some(w) = diag_representation(wide, 1, 32, None) {
            assert_eq!(
                u128::from(w.n) * u128::from(w.n) + 32 * u128::from(w.m) * u128::from(w.m),
                wide
            );
        }
    }

    #[test]
    fn h_minus_8p_divisible_by_4_for_small_p() {
        let table = crate::arith::sieve_primes(1000).unwrap();
        for &p in table.primes().iter().filter(|&&p| p % 8 == 7) {
            let cg = enumerate_class_group(-8 * p as i64).unwrap();
            assert_eq!(cg.h() % 4, 0, "h(−8·{p}) = {} not divisible by 4", cg.h());
        }
    }
}

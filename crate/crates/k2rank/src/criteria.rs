//! The three representation predicates on a prime l — ⟨1,32⟩, ⟨1,2p⟩, ⟨2,p⟩ —
//! plus the mod-16 residue, assembled into a satisfaction profile. The
//! brute-force diagonal scans are the source of truth; the class-group fast
//! path is an optional accelerator that a verify mode checks against them.

use crate::arith::{is_prime, is_square, legendre};
use crate::error::{Error, Result};
use crate::qforms::{
    diag_representation, enumerate_class_group, form_above, ClassGroup, RepWitness,
};

/// Primes accepted as the fixed p; keeps 8p and the fast-path forms narrow.
const MAX_P: u64 = 1 << 31;

/// Ascending-b search bound for [`split_generator`].
const SPLIT_SEARCH_BOUND: u64 = 1_000_000;

/// Which of the two quartic conditions a prime satisfies. Exactly one holds
/// for every l ∈ Ω(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuarticCondition {
    /// l^(h/4) = n² + 2p·m² for some n, m with m ≢ 0 (mod l).
    OneTwoP,
    /// l^(h/4) = 2n² + p·m² for some n, m with m ≢ 0 (mod l).
    TwoP,
}

impl QuarticCondition {
    pub fn label(&self) -> &'static str {
        match self {
            QuarticCondition::OneTwoP => "1_2p",
            QuarticCondition::TwoP => "2_p",
        }
    }
}

/// The complete three-bit invariant of l ∈ Ω(p): the ⟨1,32⟩ bit, the quartic
/// dichotomy, and l mod 16. Witnesses are carried when the brute-force scans
/// produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatisfactionProfile {
    pub l: u64,
    pub p: u64,
    pub sat_1_32: bool,
    pub witness_1_32: Option<RepWitness>,
    pub quartic: QuarticCondition,
    pub quartic_witness: Option<RepWitness>,
    /// l mod 16; always 1 or 9 since l ≡ 1 mod 8.
    pub residue16: u8,
}

/// Solution of a² − 2b² = −p, the norm equation behind the quartic dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitGenerator {
    pub a: u64,
    pub b: u64,
}

/// Search strategy for profiles: literal Definition-2.3 scans, the
/// class-group shortcut, or both with a mismatch check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FastPath {
    #[default]
    Off,
    On,
    Verify,
}

/// Checks that p is prime and ≡ 7 mod 8.
pub fn validate_omega_prime(p: u64) -> Result<()> {
    if p > MAX_P {
        return Err(Error::domain(format!(
            "p = {p} exceeds the supported width {MAX_P}"
        )));
    }
    if p % 8 != 7 {
        return Err(Error::domain(format!("p = {p} is not congruent to 7 mod 8")));
    }
    if !is_prime(p) {
        return Err(Error::domain(format!("p = {p} is not prime")));
    }
    Ok(())
}

/// Whether l = x² + 32y² has a solution; returns the witness with x ≥ 0 and
/// the smallest y ≥ 1.
pub fn satisfies_1_32(l: u64) -> Result<Option<RepWitness>> {
    if l % 8 != 1 {
        return Err(Error::domain(format!(
            "satisfies_1_32: l = {l} is not congruent to 1 mod 8"
        )));
    }
    Ok(diag_representation(u128::from(l), 1, 32, None))
}

/// Decides the ⟨1,2p⟩ / ⟨2,p⟩ dichotomy for l by running both scans on
/// N = l^(h/4) and insisting exactly one succeeds.
pub fn quartic_condition(
    l: u64,
    p: u64,
    cg: &ClassGroup,
) -> Result<(QuarticCondition, RepWitness)> {
    if cg.h() % 4 != 0 {
        return Err(Error::invariant(format!(
            "class number h({}) = {} is not divisible by 4",
            cg.disc(),
            cg.h()
        )));
    }
    let exponent = u32::try_from(cg.h() / 4)
        .map_err(|_| Error::domain(format!("exponent h/4 = {} is unsupported", cg.h() / 4)))?;
    let n = u128::from(l).checked_pow(exponent).ok_or_else(|| {
        Error::domain(format!(
            "l^(h/4) = {l}^{exponent} exceeds the supported 128-bit width"
        ))
    })?;
    let one_two_p = diag_representation(n, 1, 2 * p, Some(l));
    let two_p = diag_representation(n, 2, p, Some(l));
    match (one_two_p, two_p) {
        (Some(w), None) => Ok((QuarticCondition::OneTwoP, w)),
        (None, Some(w)) => Ok((QuarticCondition::TwoP, w)),
        (Some(_), Some(_)) => Err(Error::invariant(format!(
            "dichotomy failure: l = {l} satisfies both quartic conditions for p = {p}"
        ))),
        (None, None) => Err(Error::invariant(format!(
            "dichotomy failure: l = {l} satisfies neither quartic condition for p = {p}"
        ))),
    }
}

/// Brute-force profile of l ∈ Ω(p). Callers that profile many primes should
/// use [`ProfileEngine`], which reuses the class group and offers the fast path.
pub fn profile(l: u64, p: u64, cg: &ClassGroup) -> Result<SatisfactionProfile> {
    check_membership(l, p)?;
    let witness_1_32 = satisfies_1_32(l)?;
    let (quartic, quartic_witness) = quartic_condition(l, p, cg)?;
    Ok(SatisfactionProfile {
        l,
        p,
        sat_1_32: witness_1_32.is_some(),
        witness_1_32,
        quartic,
        quartic_witness: Some(quartic_witness),
        residue16: (l % 16) as u8,
    })
}

fn check_membership(l: u64, p: u64) -> Result<()> {
    validate_omega_prime(p)?;
    if l % 8 != 1 || !is_prime(l) || legendre(l as i64, p)? != 1 {
        return Err(Error::domain(format!("l = {l} not in Omega(p) for p = {p}")));
    }
    // Reciprocity forces (p/l) = 1 as well; disagreement means a symbol bug.
    if legendre(p as i64, l)? != 1 {
        return Err(Error::invariant(format!(
            "reciprocity sanity failed at l = {l}, p = {p}"
        )));
    }
    Ok(())
}

/// Profiles primes of Ω(p) against a fixed p, holding the class groups of
/// disc −8p and disc −128 so repeated calls share them.
#[derive(Debug, Clone)]
pub struct ProfileEngine {
    p: u64,
    mode: FastPath,
    class_group: ClassGroup,
    x32_group: ClassGroup,
    exponent: u64,
}

impl ProfileEngine {
    pub fn new(p: u64, mode: FastPath) -> Result<Self> {
        validate_omega_prime(p)?;
        let class_group = enumerate_class_group(-8 * p as i64)?;
        if class_group.h() % 4 != 0 {
            return Err(Error::invariant(format!(
                "class number h(−8·{p}) = {} is not divisible by 4",
                class_group.h()
            )));
        }
        let x32_group = enumerate_class_group(-128)?;
        let exponent = class_group.h() / 4;
        Ok(ProfileEngine {
            p,
            mode,
            class_group,
            x32_group,
            exponent,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn mode(&self) -> FastPath {
        self.mode
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.class_group
    }

    /// h(−8p)/4, the exponent of Definition 2.3.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn profile(&self, l: u64) -> Result<SatisfactionProfile> {
        match self.mode {
            FastPath::Off => {
                check_membership(l, self.p)?;
                self.profile_brute(l)
            }
            FastPath::On => {
                check_membership(l, self.p)?;
                self.profile_fast(l)
            }
            FastPath::Verify => {
                check_membership(l, self.p)?;
                let brute = self.profile_brute(l)?;
                let fast = self.profile_fast(l)?;
                if brute.sat_1_32 != fast.sat_1_32 || brute.quartic != fast.quartic {
                    return Err(Error::invariant(format!(
                        "fast-path mismatch at l = {l}, p = {}: scans gave ({}, {}), \
                         class group gave ({}, {})",
                        self.p,
                        brute.sat_1_32,
                        brute.quartic.label(),
                        fast.sat_1_32,
                        fast.quartic.label()
                    )));
                }
                Ok(brute)
            }
        }
    }

    fn profile_brute(&self, l: u64) -> Result<SatisfactionProfile> {
        let witness_1_32 = satisfies_1_32(l)?;
        let (quartic, quartic_witness) = quartic_condition(l, self.p, &self.class_group)?;
        Ok(SatisfactionProfile {
            l,
            p: self.p,
            sat_1_32: witness_1_32.is_some(),
            witness_1_32,
            quartic,
            quartic_witness: Some(quartic_witness),
            residue16: (l % 16) as u8,
        })
    }

    /// Class-group route: l satisfies ⟨1,32⟩ iff its form class for disc −128
    /// is principal, and ⟨1,2p⟩ iff its class for disc −8p raised to h/4 is
    /// principal. No witnesses are produced.
    fn profile_fast(&self, l: u64) -> Result<SatisfactionProfile> {
        let sat_1_32 = form_above(l, self.x32_group.disc())? == *self.x32_group.principal();
        let power = form_above(l, self.class_group.disc())?.power_class(self.exponent);
        let quartic = if power == *self.class_group.principal() {
            QuarticCondition::OneTwoP
        } else {
            QuarticCondition::TwoP
        };
        Ok(SatisfactionProfile {
            l,
            p: self.p,
            sat_1_32,
            witness_1_32: None,
            quartic,
            quartic_witness: None,
            residue16: (l % 16) as u8,
        })
    }
}

/// Smallest b ≥ 1 admitting a ≥ 0 with a² − 2b² = −p, for p ≡ 7 mod 8.
pub fn split_generator(p: u64) -> Result<SplitGenerator> {
    validate_omega_prime(p)?;
    for b in 1..=SPLIT_SEARCH_BOUND {
        let v = 2 * b * b;
        if v < p {
            continue;
        }
        if let Some(a) = is_square(u128::from(v - p)) {
            return Ok(SplitGenerator { a: a as u64, b });
        }
    }
    Err(Error::SearchExhausted {
        what: format!("solution of a² − 2b² = −{p}"),
        bound: SPLIT_SEARCH_BOUND,
    })
}

//! Total lookup from a satisfaction profile to its splitting case and from
//! the case to the 4-rank tuple (υ, μ, σ, τ). Both correspondences are finite
//! tables, hard-coded and exhaustively tested — no arithmetic happens here.

use crate::criteria::{ProfileEngine, QuarticCondition, SatisfactionProfile};
use crate::error::Result;

/// The eight splitting cases: the fully-split case I and the seven others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingCase {
    I,
    II1,
    II2,
    II3,
    II4,
    II5,
    II6,
    II7,
}

impl SplittingCase {
    pub const ALL: [SplittingCase; 8] = [
        SplittingCase::I,
        SplittingCase::II1,
        SplittingCase::II2,
        SplittingCase::II3,
        SplittingCase::II4,
        SplittingCase::II5,
        SplittingCase::II6,
        SplittingCase::II7,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SplittingCase::I => "I",
            SplittingCase::II1 => "II.1",
            SplittingCase::II2 => "II.2",
            SplittingCase::II3 => "II.3",
            SplittingCase::II4 => "II.4",
            SplittingCase::II5 => "II.5",
            SplittingCase::II6 => "II.6",
            SplittingCase::II7 => "II.7",
        }
    }
}

/// 4-ranks (υ, μ, σ, τ) of the tame kernels over Q(√pl), Q(√2pl), Q(√−pl),
/// Q(√−2pl), in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankTuple {
    pub upsilon: u8,
    pub mu: u8,
    pub sigma: u8,
    pub tau: u8,
}

impl RankTuple {
    pub const fn new(upsilon: u8, mu: u8, sigma: u8, tau: u8) -> Self {
        RankTuple {
            upsilon,
            mu,
            sigma,
            tau,
        }
    }

    /// The eight admissible tuples, in the fixed order of the counting sets
    /// I₁..I₈.
    pub const ADMISSIBLE: [RankTuple; 8] = [
        RankTuple::new(1, 1, 0, 0),
        RankTuple::new(1, 1, 1, 1),
        RankTuple::new(2, 1, 1, 0),
        RankTuple::new(2, 1, 0, 1),
        RankTuple::new(1, 2, 1, 0),
        RankTuple::new(1, 2, 0, 1),
        RankTuple::new(2, 2, 0, 0),
        RankTuple::new(2, 2, 1, 1),
    ];

    /// Position of this tuple among the admissible eight.
    pub fn index(&self) -> Option<usize> {
        Self::ADMISSIBLE.iter().position(|t| t == self)
    }

    pub fn as_array(&self) -> [u8; 4] {
        [self.upsilon, self.mu, self.sigma, self.tau]
    }
}

/// A fully classified prime: profile, splitting case, and 4-rank tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub l: u64,
    pub p: u64,
    pub profile: SatisfactionProfile,
    pub case: SplittingCase,
    pub tuple: RankTuple,
}

/// Total lookup on (sat_1_32, quartic, l mod 16). All 8 cells are mapped.
pub fn case_of(profile: &SatisfactionProfile) -> SplittingCase {
    use QuarticCondition::{OneTwoP, TwoP};
    match (profile.sat_1_32, profile.quartic, profile.residue16) {
        (true, OneTwoP, 1) => SplittingCase::I,
        (true, TwoP, 9) => SplittingCase::II1,
        (true, OneTwoP, 9) => SplittingCase::II2,
        (false, OneTwoP, 9) => SplittingCase::II3,
        (false, OneTwoP, 1) => SplittingCase::II4,
        (true, TwoP, 1) => SplittingCase::II5,
        (false, TwoP, 1) => SplittingCase::II6,
        (false, TwoP, 9) => SplittingCase::II7,
        _ => unreachable!("residue16 is always 1 or 9 for l ≡ 1 mod 8"),
    }
}

/// The case → tuple correspondence.
pub fn tuple_of(case: SplittingCase) -> RankTuple {
    match case {
        SplittingCase::I => RankTuple::new(2, 2, 1, 1),
        SplittingCase::II1 => RankTuple::new(1, 2, 0, 1),
        SplittingCase::II2 => RankTuple::new(2, 1, 1, 0),
        SplittingCase::II3 => RankTuple::new(2, 1, 0, 1),
        SplittingCase::II4 => RankTuple::new(2, 2, 0, 0),
        SplittingCase::II5 => RankTuple::new(1, 1, 0, 0),
        SplittingCase::II6 => RankTuple::new(1, 1, 1, 1),
        SplittingCase::II7 => RankTuple::new(1, 2, 1, 0),
    }
}

/// Profile → case → tuple, packaged with its inputs.
pub fn classify(engine: &ProfileEngine, l: u64) -> Result<ClassificationRecord> {
    let profile = engine.profile(l)?;
    let case = case_of(&profile);
    let tuple = tuple_of(case);
    Ok(ClassificationRecord {
        l,
        p: engine.p(),
        profile,
        case,
        tuple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::FastPath;

    fn profile_cell(sat_1_32: bool, quartic: QuarticCondition, residue16: u8) -> SatisfactionProfile {
        SatisfactionProfile {
            l: 0,
            p: 7,
            sat_1_32,
            witness_1_32: None,
            quartic,
            quartic_witness: None,
            residue16,
        }
    }

    #[test]
    fn case_of_all_eight_cells() {
        use QuarticCondition::{OneTwoP, TwoP};
        let cells = [
            (true, OneTwoP, 1, SplittingCase::I),
            (true, TwoP, 9, SplittingCase::II1),
            (true, OneTwoP, 9, SplittingCase::II2),
            (false, OneTwoP, 9, SplittingCase::II3),
            (false, OneTwoP, 1, SplittingCase::II4),
            (true, TwoP, 1, SplittingCase::II5),
            (false, TwoP, 1, SplittingCase::II6),
            (false, TwoP, 9, SplittingCase::II7),
        ];
        for (sat, quartic, residue, expected) in cells {
            assert_eq!(case_of(&profile_cell(sat, quartic, residue)), expected);
        }
    }

    #[test]
    fn tuple_of_all_eight_cases() {
        let table = [
            (SplittingCase::I, RankTuple::new(2, 2, 1, 1)),
            (SplittingCase::II1, RankTuple::new(1, 2, 0, 1)),
            (SplittingCase::II2, RankTuple::new(2, 1, 1, 0)),
            (SplittingCase::II3, RankTuple::new(2, 1, 0, 1)),
            (SplittingCase::II4, RankTuple::new(2, 2, 0, 0)),
            (SplittingCase::II5, RankTuple::new(1, 1, 0, 0)),
            (SplittingCase::II6, RankTuple::new(1, 1, 1, 1)),
            (SplittingCase::II7, RankTuple::new(1, 2, 1, 0)),
        ];
        for (case, expected) in table {
            assert_eq!(tuple_of(case), expected);
        }
    }

    #[test]
    fn case_of_is_a_bijection_on_cells() {
        use QuarticCondition::{OneTwoP, TwoP};
        let mut seen = Vec::new();
        for sat in [false, true] {
            for quartic in [OneTwoP, TwoP] {
                for residue in [1u8, 9] {
                    let c = case_of(&profile_cell(sat, quartic, residue));
                    assert!(!seen.contains(&c), "case {c:?} hit twice");
                    seen.push(c);
                }
            }
        }
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn tuple_of_is_a_bijection_onto_admissible_tuples() {
        let mut images: Vec<RankTuple> = SplittingCase::ALL.iter().map(|&c| tuple_of(c)).collect();
        for t in &images {
            assert!(t.index().is_some(), "tuple {t:?} not admissible");
        }
        images.sort_by_key(|t| t.index().unwrap());
        images.dedup();
        assert_eq!(images.len(), 8);
    }

    /// Per-field marginals read off the correspondence, as used in the
    /// half-density statements: υ = 1 exactly on II.1/5/6/7, μ = 2 exactly on
    /// I/II.1/4/7, σ = 0 exactly on II.1/3/4/5, τ = 1 exactly on I/II.1/3/6.
    #[test]
    fn tuple_marginals_by_case() {
        use SplittingCase::*;
        for case in SplittingCase::ALL {
            let t = tuple_of(case);
            assert_eq!(t.upsilon == 1, matches!(case, II1 | II5 | II6 | II7), "{case:?}");
            assert_eq!(t.mu == 2, matches!(case, I | II1 | II4 | II7), "{case:?}");
            assert_eq!(t.sigma == 0, matches!(case, II1 | II3 | II4 | II5), "{case:?}");
            assert_eq!(t.tau == 1, matches!(case, I | II1 | II3 | II6), "{case:?}");
        }
    }

    #[test]
    fn classify_examples() {
        let engine = ProfileEngine::new(7, FastPath::Off).unwrap();
        let rec = classify(&engine, 113).unwrap();
        assert_eq!(rec.case, SplittingCase::II5);
        assert_eq!(rec.tuple, RankTuple::new(1, 1, 0, 0));

        let rec = classify(&engine, 281).unwrap();
        assert_eq!(rec.case, SplittingCase::II3);
        assert_eq!(rec.tuple, RankTuple::new(2, 1, 0, 1));

        let rec = classify(&engine, 193).unwrap();
        assert_eq!(rec.case, SplittingCase::II6);
        assert_eq!(rec.tuple, RankTuple::new(1, 1, 1, 1));
    }

    #[test]
    fn classify_never_leaves_the_admissible_set() {
        let engine = ProfileEngine::new(7, FastPath::Off).unwrap();
        for l in [113u64, 137, 193, 233, 281, 337, 353, 401, 449, 457] {
            if let Ok(rec) = classify(&engine, l) {
                assert!(rec.tuple.index().is_some());
            }
        }
    }

    #[test]
    fn case_labels() {
        let labels: Vec<&str> = SplittingCase::ALL.iter().map(|c| c.label()).collect();
        assert_eq!(
            labels,
            ["I", "II.1", "II.2", "II.3", "II.4", "II.5", "II.6", "II.7"]
        );
    }
}

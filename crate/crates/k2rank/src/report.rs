//! Enumerates Ω(p, N), classifies every member, and produces the density
//! tables: per-field counts (Ω₁..Ω₄, Λ₁..Λ₄), per-tuple counts (I₁..I₈),
//! convergence series, and the cross-table marginal identities.

use rayon::prelude::*;

use crate::arith::{legendre, sieve_primes};
use crate::classify::{classify, RankTuple};
use crate::criteria::{validate_omega_prime, ProfileEngine};
use crate::error::{Error, Result};

/// Members of a chunk are classified together; counts merge by addition, so
/// the result is identical for any schedule.
const CHUNK: usize = 512;

/// The primes l ≤ limit with l ≡ 1 mod 8 and (l/p) = (p/l) = 1.
#[derive(Debug, Clone)]
pub struct OmegaSet {
    p: u64,
    limit: u64,
    members: Vec<u64>,
}

impl OmegaSet {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn enumerate_omega(p: u64, limit: u64) -> Result<OmegaSet> {
    validate_omega_prime(p)?;
    let table = sieve_primes(limit)?;
    let mut members = Vec::new();
    for &l in table.primes() {
        if l % 8 != 1 || legendre(l as i64, p)? != 1 {
            continue;
        }
        // (p/l) = 1 must follow by reciprocity since l ≡ 1 mod 4.
        if legendre(p as i64, l)? != 1 {
            return Err(Error::invariant(format!(
                "reciprocity sanity failed at l = {l}, p = {p}"
            )));
        }
        members.push(l);
    }
    Ok(OmegaSet { p, limit, members })
}

/// Counts for one table run: Ω classes by υ and μ, Λ classes by σ and τ,
/// and the eight tuple classes in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityReport {
    pub p: u64,
    pub limit: u64,
    pub omega_count: u64,
    /// [υ=1, υ=2, μ=1, μ=2]
    pub omega_classes: [u64; 4],
    /// [σ=0, σ=1, τ=0, τ=1]
    pub lambda_classes: [u64; 4],
    /// Counts of the admissible tuples in I₁..I₈ order.
    pub tuple_classes: [u64; 8],
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    omega: [u64; 4],
    lambda: [u64; 4],
    tuples: [u64; 8],
    seen: u64,
}

impl Counts {
    fn record(&mut self, tuple_index: usize) {
        let tuple = RankTuple::ADMISSIBLE[tuple_index];
        self.omega[if tuple.upsilon == 1 { 0 } else { 1 }] += 1;
        self.omega[if tuple.mu == 1 { 2 } else { 3 }] += 1;
        self.lambda[if tuple.sigma == 0 { 0 } else { 1 }] += 1;
        self.lambda[if tuple.tau == 0 { 2 } else { 3 }] += 1;
        self.tuples[tuple_index] += 1;
        self.seen += 1;
    }
}

fn classify_chunk(engine: &ProfileEngine, chunk: &[u64]) -> Result<Vec<usize>> {
    chunk
        .iter()
        .map(|&l| {
            classify(engine, l)?
                .tuple
                .index()
                .ok_or_else(|| Error::invariant(format!("inadmissible tuple at l = {l}")))
        })
        .collect()
}

/// Classify every member in chunk order, optionally across a thread pool.
/// The output order is the member order either way.
fn tuple_indices(engine: &ProfileEngine, members: &[u64], jobs: usize) -> Result<Vec<usize>> {
    let per_chunk: Vec<Result<Vec<usize>>> = if jobs <= 1 {
        members
            .chunks(CHUNK)
            .map(|c| classify_chunk(engine, c))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::domain(format!("cannot build thread pool: {e}")))?;
        pool.install(|| {
            members
                .par_chunks(CHUNK)
                .map(|c| classify_chunk(engine, c))
                .collect()
        })
    };
    let mut out = Vec::with_capacity(members.len());
    for chunk in per_chunk {
        out.extend(chunk?);
    }
    Ok(out)
}

/// Classify all of Ω(p, limit) and tally the table counts. The merge is a
/// fold over per-chunk counts in chunk order, so results are identical for
/// every jobs value.
pub fn tabulate(engine: &ProfileEngine, limit: u64, jobs: usize) -> Result<DensityReport> {
    let omega = enumerate_omega(engine.p(), limit)?;
    let indices = tuple_indices(engine, omega.members(), jobs)?;
    let mut total = Counts::default();
    for idx in indices {
        total.record(idx);
    }
    let report = DensityReport {
        p: engine.p(),
        limit,
        omega_count: total.seen,
        omega_classes: total.omega,
        lambda_classes: total.lambda,
        tuple_classes: total.tuples,
    };
    consistency_check(&report)?;
    Ok(report)
}

/// One checkpoint of the convergence view: cumulative counts and fractions
/// over Ω ∩ [2, n]. Fractions are absent while Ω is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub n: u64,
    pub omega_count: u64,
    pub omega_classes: [u64; 4],
    pub lambda_classes: [u64; 4],
    pub tuple_classes: [u64; 8],
    pub omega_fracs: [Option<f64>; 4],
    pub lambda_fracs: [Option<f64>; 4],
    pub tuple_fracs: [Option<f64>; 8],
}

/// num/den rounded half-up to 4 decimal places, computed in integers.
pub fn frac4(num: u64, den: u64) -> f64 {
    debug_assert!(den > 0);
    let scaled = (2 * u128::from(num) * 10_000 + u128::from(den)) / (2 * u128::from(den));
    scaled as f64 / 10_000.0
}

/// Cumulative fractions at the checkpoints n_k = ⌈limit·k/checkpoints⌉.
/// The final row carries exactly the fractions of [`tabulate`]'s counts.
pub fn density_series(
    engine: &ProfileEngine,
    limit: u64,
    checkpoints: u64,
    jobs: usize,
) -> Result<Vec<DensityRow>> {
    if checkpoints < 1 {
        return Err(Error::domain("checkpoints must be at least 1"));
    }
    let omega = enumerate_omega(engine.p(), limit)?;
    let indices = tuple_indices(engine, omega.members(), jobs)?;

    let mut rows = Vec::with_capacity(checkpoints as usize);
    let mut cumulative = Counts::default();
    let mut next = 0usize;
    for k in 1..=checkpoints {
        let n_k = ((u128::from(limit) * u128::from(k)).div_ceil(u128::from(checkpoints))) as u64;
        while next < omega.members.len() && omega.members[next] <= n_k {
            cumulative.record(indices[next]);
            next += 1;
        }
        let den = cumulative.seen;
        let frac = |num: u64| (den > 0).then(|| frac4(num, den));
        rows.push(DensityRow {
            n: n_k,
            omega_count: den,
            omega_classes: cumulative.omega,
            lambda_classes: cumulative.lambda,
            tuple_classes: cumulative.tuples,
            omega_fracs: cumulative.omega.map(frac),
            lambda_fracs: cumulative.lambda.map(frac),
            tuple_fracs: cumulative.tuples.map(frac),
        });
    }
    Ok(rows)
}

/// Verifies every internal identity of a report: row sums against the total
/// and the Table-1 marginals recoverable from the tuple counts.
pub fn consistency_check(report: &DensityReport) -> Result<()> {
    let om = &report.omega_classes;
    let la = &report.lambda_classes;
    let i = &report.tuple_classes;
    let total = report.omega_count;

    let fail = |name: &str, got: u64, want: u64| -> Result<()> {
        if got != want {
            return Err(Error::invariant(format!(
                "consistency: {name} gives {got}, expected {want} (p = {}, limit = {})",
                report.p, report.limit
            )));
        }
        Ok(())
    };

    fail("omega1 + omega2", om[0] + om[1], total)?;
    fail("omega3 + omega4", om[2] + om[3], total)?;
    fail("lambda1 + lambda2", la[0] + la[1], total)?;
    fail("lambda3 + lambda4", la[2] + la[3], total)?;
    fail("sum of tuple classes", i.iter().sum(), total)?;
    fail("omega1 = i1+i2+i5+i6", i[0] + i[1] + i[4] + i[5], om[0])?;
    fail("omega3 = i1+i2+i3+i4", i[0] + i[1] + i[2] + i[3], om[2])?;
    fail("lambda1 = i1+i4+i6+i7", i[0] + i[3] + i[5] + i[6], la[0])?;
    fail("lambda3 = i1+i3+i5+i7", i[0] + i[2] + i[4] + i[6], la[2])?;
    Ok(())
}

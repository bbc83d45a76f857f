//! Exact morphisms between split bundles on P^1 as matrices of homogeneous
//! binary forms over Q.
//!
//! A `GradedMap` from ⊕O(s_j) to ⊕O(t_i) stores one form of degree t_i - s_j
//! per entry (or nothing, for the zero entry); entries of negative degree are
//! forced to zero. Source and target keep their *ordered* degree sequences:
//! the order fixes the summand basis, which block constructions and the
//! symmetric-power functors depend on. The unordered invariants are exposed as
//! canonical [`SplittingType`]s.
//!
//! Kernels are recovered from the twist profile of section-matrix nullities
//! (the difference profile counts kernel summands by degree); cokernels pair
//! that with the kernel of the transpose, and the two routes are reconciled
//! through the rank/degree conservation identity before anything is returned.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::forms::{BinaryForm, P1Point};
use crate::qlinalg::{self, rat, Mat, Rat};
use crate::splitting::{SheafSummary, SplittingType};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GmatError {
    #[error("entry ({row},{col}) must be homogeneous of degree {expected}, got degree {got}")]
    DegreeDiscipline { row: usize, col: usize, expected: i64, got: usize },
    #[error("entry ({row},{col}) has negative degree {expected} and must be zero")]
    NegativeDegreeEntry { row: usize, col: usize, expected: i64 },
    #[error("shape mismatch: inner degree sequences differ ({0})")]
    ShapeMismatch(String),
    #[error("this construction needs a rank-3 bundle, got rank {0}")]
    RankThreeRequired(usize),
    #[error("source order mismatch: {0}")]
    SourceOrderMismatch(String),
    #[error("profile not stabilized: {0}")]
    ProfileNotStabilized(String),
    #[error("conservation violated: {0}")]
    ConservationViolated(String),
    #[error("fiber model degenerate: expected pointwise rank {expected}, got {got}")]
    FiberModelDegenerate { expected: usize, got: usize },
    #[error("no map satisfies the prescribed composite")]
    NoSolution,
    #[error("ambient vector has length {got}, fiber of the symmetric square needs {expected}")]
    JVectorLength { expected: usize, got: usize },
    #[error("profile window needs n_lo <= n_hi, got [{0}, {1}]")]
    BadWindow(i64, i64),
}

/// Twist range scanned when inferring splitting types from section profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileWindow {
    pub n_lo: i64,
    pub n_hi: i64,
}

impl ProfileWindow {
    pub fn new(n_lo: i64, n_hi: i64) -> Result<Self, GmatError> {
        if n_lo > n_hi {
            return Err(GmatError::BadWindow(n_lo, n_hi));
        }
        Ok(ProfileWindow { n_lo, n_hi })
    }

    /// Symmetric window wide enough for any kernel summand of `map`:
    /// half-width = max |degree| over source and target + rank(source) + 2.
    pub fn auto(map: &GradedMap) -> Self {
        let m = map
            .source_degrees()
            .iter()
            .chain(map.target_degrees())
            .map(|d| d.abs())
            .max()
            .unwrap_or(0);
        let half = m + map.source_degrees().len() as i64 + 2;
        ProfileWindow { n_lo: -half, n_hi: half }
    }

    pub fn width(&self) -> i64 {
        self.n_hi - self.n_lo
    }
}

/// Matrix of homogeneous binary forms with graded degree discipline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    target_degs: Vec<i64>,
    source_degs: Vec<i64>,
    /// entries[i][j]: None is the zero entry; Some(f) has deg f = t_i - s_j.
    entries: Vec<Vec<Option<BinaryForm>>>,
}

impl GradedMap {
    pub fn new(
        target_degs: Vec<i64>,
        source_degs: Vec<i64>,
        entries: Vec<Vec<Option<BinaryForm>>>,
    ) -> Result<Self, GmatError> {
        assert_eq!(entries.len(), target_degs.len(), "row count mismatch");
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), source_degs.len(), "column count mismatch in row {i}");
            for (j, entry) in row.iter().enumerate() {
                let expected = target_degs[i] - source_degs[j];
                if let Some(f) = entry {
                    if expected < 0 && !f.is_zero() {
                        return Err(GmatError::NegativeDegreeEntry { row: i, col: j, expected });
                    }
                    if !f.is_zero() && f.degree() as i64 != expected {
                        return Err(GmatError::DegreeDiscipline {
                            row: i,
                            col: j,
                            expected,
                            got: f.degree(),
                        });
                    }
                }
            }
        }
        Ok(GradedMap { target_degs, source_degs, entries })
    }

    pub fn zero(target_degs: Vec<i64>, source_degs: Vec<i64>) -> Self {
        let entries = vec![vec![None; source_degs.len()]; target_degs.len()];
        GradedMap { target_degs, source_degs, entries }
    }

    pub fn identity(degs: Vec<i64>) -> Self {
        let n = degs.len();
        let mut entries = vec![vec![None; n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Some(BinaryForm::constant(Rat::one()));
        }
        GradedMap { target_degs: degs.clone(), source_degs: degs, entries }
    }

    pub fn source_degrees(&self) -> &[i64] {
        &self.source_degs
    }

    pub fn target_degrees(&self) -> &[i64] {
        &self.target_degs
    }

    pub fn source_type(&self) -> SplittingType {
        SplittingType::new(self.source_degs.clone())
    }

    pub fn target_type(&self) -> SplittingType {
        SplittingType::new(self.target_degs.clone())
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&BinaryForm> {
        self.entries[i][j].as_ref()
    }

    /// Stacks two maps with identical source over a concatenated target.
    pub fn vstack(upper: &GradedMap, lower: &GradedMap) -> Result<GradedMap, GmatError> {
        if upper.source_degs != lower.source_degs {
            return Err(GmatError::ShapeMismatch(format!(
                "vstack sources {:?} vs {:?}",
                upper.source_degs, lower.source_degs
            )));
        }
        let mut target = upper.target_degs.clone();
        target.extend_from_slice(&lower.target_degs);
        let mut entries = upper.entries.clone();
        entries.extend(lower.entries.iter().cloned());
        Ok(GradedMap { target_degs: target, source_degs: upper.source_degs.clone(), entries })
    }

    /// Restriction to the chosen rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GradedMap {
        let target_degs = rows.iter().map(|&i| self.target_degs[i]).collect();
        let source_degs = cols.iter().map(|&j| self.source_degs[j]).collect();
        let entries = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        GradedMap { target_degs, source_degs, entries }
    }

    /// The transpose, a graded map between the duals; entry degrees are
    /// unchanged. Its kernel is the dual of this map's cokernel bundle.
    pub fn transpose(&self) -> GradedMap {
        let target_degs: Vec<i64> = self.source_degs.iter().map(|&d| -d).collect();
        let source_degs: Vec<i64> = self.target_degs.iter().map(|&d| -d).collect();
        let entries = (0..self.source_degs.len())
            .map(|j| (0..self.target_degs.len()).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        GradedMap { target_degs, source_degs, entries }
    }

    /// Scalar matrix of the map at a point of P^1.
    pub fn evaluate(&self, p: &P1Point) -> Mat {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.as_ref().map_or_else(Rat::zero, |f| f.eval(p)))
                    .collect()
            })
            .collect()
    }

    /// Rank of the evaluated scalar matrix, over exact rationals.
    pub fn rank_at_point(&self, p: &P1Point) -> usize {
        if self.target_degs.is_empty() || self.source_degs.is_empty() {
            return 0;
        }
        qlinalg::rank(&self.evaluate(p))
    }

    /// Rank over the function field of P^1 (exact polynomial elimination on
    /// the dehomogenization at t = 1, which identifies forms of known degree
    /// with univariate polynomials). Rows are scaled to integer polynomials
    /// and stripped of their scalar content to keep the elimination cheap.
    pub fn generic_rank(&self) -> usize {
        use num_bigint::BigInt;
        let nrows = self.target_degs.len();
        let ncols = self.source_degs.len();
        if nrows == 0 || ncols == 0 {
            return 0;
        }
        let mut work: Vec<Vec<Vec<BigInt>>> = self
            .entries
            .iter()
            .map(|row| {
                // clear denominators across the whole row
                let mut lcm = BigInt::from(1);
                for e in row.iter().flatten() {
                    for c in e.coeffs() {
                        if !c.is_zero() {
                            lcm = num_integer::lcm(lcm, c.denom().clone());
                        }
                    }
                }
                let mut int_row: Vec<Vec<BigInt>> = row
                    .iter()
                    .map(|e| match e {
                        Some(f) if !f.is_zero() => {
                            ztrim(f.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
                        }
                        _ => Vec::new(),
                    })
                    .collect();
                zstrip(&mut int_row);
                int_row
            })
            .collect();
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            // prefer the pivot of smallest degree
            let Some(p) = (r..nrows)
                .filter(|&i| !work[i][c].is_empty())
                .min_by_key(|&i| work[i][c].len())
            else {
                continue;
            };
            work.swap(r, p);
            let pivot = work[r][c].clone();
            for i in (r + 1)..nrows {
                if work[i][c].is_empty() {
                    continue;
                }
                let f = work[i][c].clone();
                // row_i := pivot * row_i - f * row_r  (fraction-free cross-multiply)
                for k in c..ncols {
                    let a = zmul(&pivot, &work[i][k]);
                    let b = zmul(&f, &work[r][k]);
                    work[i][k] = zsub(&a, &b);
                }
                zstrip(&mut work[i]);
            }
            r += 1;
        }
        r
    }

    /// Matrix of the induced map on twisted global sections
    /// H0(⊕O(s_j + n)) -> H0(⊕O(t_i + n)), in the monomial bases ordered by
    /// summand and then descending s-exponent.
    pub fn section_matrix(&self, n: i64) -> Mat {
        let h0 = |d: i64| -> usize { (d + 1).max(0) as usize };
        let nrows: usize = self.target_degs.iter().map(|&t| h0(t + n)).sum();
        let ncols: usize = self.source_degs.iter().map(|&s| h0(s + n)).sum();
        let mut out: Mat = vec![vec![Rat::zero(); ncols]; nrows];
        let mut col0 = 0;
        for (j, &sj) in self.source_degs.iter().enumerate() {
            let dj = sj + n;
            for c in 0..h0(dj) {
                // column (j, c) is the monomial s^(dj - c) t^c of the j-th summand
                let a = dj - c as i64;
                let mut row0 = 0;
                for (i, &ti) in self.target_degs.iter().enumerate() {
                    let di = ti + n;
                    if di >= 0 {
                        if let Some(f) = &self.entries[i][j] {
                            for (k, coeff) in f.coeffs().iter().enumerate() {
                                if !coeff.is_zero() {
                                    let b = k as i64 + a;
                                    let ri = row0 + (di - b) as usize;
                                    out[ri][col0 + c] += coeff;
                                }
                            }
                        }
                    }
                    row0 += h0(di);
                }
            }
            col0 += h0(dj);
        }
        out
    }

    /// Splitting type of the kernel sheaf, recovered from the nullity profile:
    /// nullity(section_matrix(n)) = h0(K(n)), whose difference profile counts
    /// the kernel degrees >= -n. The scan is certified by a degree bound on
    /// kernel summands; overrunning the bound is reported, never truncated.
    pub fn kernel_splitting(&self) -> Result<SplittingType, GmatError> {
        let src_rank = self.source_degs.len();
        if src_rank == 0 {
            return Ok(SplittingType::zero());
        }
        let kernel_rank = src_rank - self.generic_rank();
        if kernel_rank == 0 {
            return Ok(SplittingType::zero());
        }
        let max_src = *self.source_degs.iter().max().expect("nonempty source");
        // every kernel summand maps nontrivially into some O(s_j), so its
        // degree is at most max_src; below-bound degrees are capped by the
        // degree of the kernel itself:
        //   deg K = deg S - deg Im >= deg S - sum of positive target degrees,
        // and the remaining kernel summands each have degree <= max_src.
        let deg_s: i64 = self.source_degs.iter().sum();
        let t_plus: i64 = self.target_degs.iter().map(|&t| t.max(0)).sum();
        let min_deg_bound = deg_s - t_plus - (kernel_rank as i64 - 1) * max_src.max(0);
        let window = ProfileWindow::auto(self);
        let n_stop = (-min_deg_bound + 2).max(window.n_hi);

        let mut degrees = Vec::with_capacity(kernel_rank);
        let mut n = -max_src - 1;
        // at n = -max_src - 1 the twisted source has no sections at all
        let mut prev_nullity: usize = 0;
        let mut prev_delta: usize = 0;
        loop {
            n += 1;
            let m = self.section_matrix(n);
            // column count independent of the row representation: a target of
            // rank zero still has a full complement of source monomials
            let ncols: usize = self.source_degs.iter().map(|&s| (s + n + 1).max(0) as usize).sum();
            let nullity = ncols - qlinalg::rank(&m);
            let delta = nullity - prev_nullity;
            if delta < prev_delta {
                return Err(GmatError::ProfileNotStabilized(format!(
                    "difference profile decreased at twist {n}"
                )));
            }
            for _ in 0..(delta - prev_delta) {
                degrees.push(-n);
            }
            prev_nullity = nullity;
            prev_delta = delta;
            if delta == kernel_rank {
                return Ok(SplittingType::new(degrees));
            }
            if n > n_stop {
                return Err(GmatError::ProfileNotStabilized(format!(
                    "difference profile reached {prev_delta} of {kernel_rank} by twist {n}"
                )));
            }
        }
    }

    /// Numerical class of the cokernel sheaf. The bundle part is the dual of
    /// the transpose's kernel; the torsion length is read off the stable
    /// constant of the corank profile and must agree with the rank/degree
    /// conservation identity.
    pub fn cokernel_sheaf(&self) -> Result<SheafSummary, GmatError> {
        if self.target_degs.is_empty() && self.source_degs.is_empty() {
            return Ok(SheafSummary::zero());
        }
        let kernel = self.kernel_splitting()?;
        let coker_bundle = self.transpose().kernel_splitting()?.dual();

        let rank_s = self.source_degs.len() as i64;
        let rank_t = self.target_degs.len() as i64;
        let deg_s: i64 = self.source_degs.iter().sum();
        let deg_t: i64 = self.target_degs.iter().sum();
        if rank_s - kernel.rank() as i64 != rank_t - coker_bundle.rank() as i64 {
            return Err(GmatError::ConservationViolated(format!(
                "rank: source {rank_s} - kernel {} != target {rank_t} - cokernel {}",
                kernel.rank(),
                coker_bundle.rank()
            )));
        }
        let torsion = (deg_t - coker_bundle.degree()) - (deg_s - kernel.degree());
        if torsion < 0 {
            return Err(GmatError::ConservationViolated(format!(
                "degree bookkeeping gives negative torsion length {torsion}"
            )));
        }

        // Corank profile check. Once h1 vanishes for the twists of source,
        // target, kernel and cokernel bundle, left exactness of sections gives
        //   corank(section_matrix(n)) = torsion + h0(coker bundle (n))
        // exactly; reading the constant back certifies the torsion length.
        let h1_threshold = |degs: &[i64]| degs.iter().min().map_or(i64::MIN, |&d| -d - 1);
        let n_stable = [
            h1_threshold(coker_bundle.degrees()),
            h1_threshold(kernel.degrees()),
            h1_threshold(&self.source_degs),
            h1_threshold(&self.target_degs),
        ]
        .into_iter()
        .max()
        .expect("nonempty");
        for n in n_stable..=(n_stable + 3) {
            let m = self.section_matrix(n);
            let rows = m.len();
            let corank = rows - qlinalg::rank(&m);
            let expected: i64 = torsion + coker_bundle.twist(n).h0();
            if corank as i64 != expected {
                return Err(GmatError::ProfileNotStabilized(format!(
                    "corank {corank} at twist {n} does not match profile value {expected}"
                )));
            }
        }
        Ok(SheafSummary::new(coker_bundle, torsion as u64))
    }

    /// Constant determinant of a square map whose source and target degree
    /// sums agree (every permutation term then has degree zero, so the
    /// determinant is a scalar and one evaluation computes it).
    pub fn det_constant(&self) -> Result<Rat, GmatError> {
        let deg_s: i64 = self.source_degs.iter().sum();
        let deg_t: i64 = self.target_degs.iter().sum();
        if self.source_degs.len() != self.target_degs.len() || deg_s != deg_t {
            return Err(GmatError::ShapeMismatch(format!(
                "constant determinant needs a square map with equal degree sums, got {:?} -> {:?}",
                self.source_degs, self.target_degs
            )));
        }
        let p = P1Point::from_ints(1, 1).expect("(1,1) is a point");
        Ok(qlinalg::det(&self.evaluate(&p)))
    }
}

// ---------------------------------------------------------------------------
// Univariate scratch arithmetic for generic-rank elimination
// (integer coefficient vectors, lowest degree first, trailing zeros trimmed)
// ---------------------------------------------------------------------------

fn ztrim(mut p: Vec<num_bigint::BigInt>) -> Vec<num_bigint::BigInt> {
    while p.last().is_some_and(num_traits::Zero::is_zero) {
        p.pop();
    }
    p
}

fn zmul(a: &[num_bigint::BigInt], b: &[num_bigint::BigInt]) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::from(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    ztrim(out)
}

fn zsub(a: &[num_bigint::BigInt], b: &[num_bigint::BigInt]) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    let mut out = vec![BigInt::from(0); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    ztrim(out)
}

/// Divides a whole polynomial row by the gcd of every coefficient.
fn zstrip(row: &mut [Vec<num_bigint::BigInt>]) {
    use num_bigint::BigInt;
    let mut g = BigInt::from(0);
    for poly in row.iter() {
        for c in poly {
            if !c.is_zero() {
                g = num_integer::gcd(g, c.clone());
                if g == BigInt::from(1) {
                    return;
                }
            }
        }
    }
    if g.is_zero() || g == BigInt::from(1) {
        return;
    }
    for poly in row.iter_mut() {
        for c in poly.iter_mut() {
            *c /= &g;
        }
    }
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// Deterministic general map: entries of admissible degree get integer
/// coefficients drawn uniformly from [-height, height] out of a ChaCha8
/// stream seeded by `seed`, in row-major order with coefficients lowest
/// s-exponent first. Genericity is validated by callers, not assumed here.
pub fn random_general(source_degs: &[i64], target_degs: &[i64], seed: u64, height: u32) -> GradedMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = target_degs
        .iter()
        .map(|&t| {
            source_degs
                .iter()
                .map(|&s| {
                    let d = t - s;
                    if d < 0 {
                        None
                    } else {
                        Some(BinaryForm::random(d as usize, &mut rng, height))
                    }
                })
                .collect()
        })
        .collect();
    GradedMap {
        target_degs: target_degs.to_vec(),
        source_degs: source_degs.to_vec(),
        entries,
    }
}

/// Entrywise polynomial matrix product g . f; degree discipline is preserved
/// by construction and re-asserted.
pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap, GmatError> {
    if g.source_degs != f.target_degs {
        return Err(GmatError::ShapeMismatch(format!(
            "compose: {:?} vs {:?}",
            g.source_degs, f.target_degs
        )));
    }
    let mut entries: Vec<Vec<Option<BinaryForm>>> =
        vec![vec![None; f.source_degs.len()]; g.target_degs.len()];
    for i in 0..g.target_degs.len() {
        for j in 0..f.source_degs.len() {
            let mut acc: Option<BinaryForm> = None;
            for k in 0..g.source_degs.len() {
                let (Some(a), Some(b)) = (&g.entries[i][k], &f.entries[k][j]) else {
                    continue;
                };
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let prod = a.mul(b);
                acc = Some(match acc {
                    None => prod,
                    Some(cur) => cur.add(&prod),
                });
            }
            entries[i][j] = acc;
        }
    }
    GradedMap::new(g.target_degs.clone(), f.source_degs.clone(), entries)
}

/// Index pairs (i <= j) of the monomial basis of the symmetric square of a
/// rank-r bundle, in lexicographic order.
pub fn sym2_pairs(rank: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(rank * (rank + 1) / 2);
    for i in 0..rank {
        for j in i..rank {
            out.push((i, j));
        }
    }
    out
}

/// Degrees of the symmetric-square monomial basis, in `sym2_pairs` order.
pub fn sym2_degrees(degs: &[i64]) -> Vec<i64> {
    sym2_pairs(degs.len())
        .into_iter()
        .map(|(i, j)| degs[i] + degs[j])
        .collect()
}

/// Induced map on symmetric squares, in the monomial bases of `sym2_pairs`:
/// e_i e_j maps to sum over k <= l of (f_ki f_lj + f_li f_kj) e_k e_l, with
/// the diagonal term f_ki f_kj.
pub fn sym2_map(f: &GradedMap) -> GradedMap {
    let src_pairs = sym2_pairs(f.source_degrees().len());
    let tgt_pairs = sym2_pairs(f.target_degrees().len());
    let source_degs: Vec<i64> = src_pairs
        .iter()
        .map(|&(i, j)| f.source_degrees()[i] + f.source_degrees()[j])
        .collect();
    let target_degs: Vec<i64> = tgt_pairs
        .iter()
        .map(|&(i, j)| f.target_degrees()[i] + f.target_degrees()[j])
        .collect();
    let mut entries: Vec<Vec<Option<BinaryForm>>> =
        vec![vec![None; src_pairs.len()]; tgt_pairs.len()];
    for (cj, &(i, j)) in src_pairs.iter().enumerate() {
        for (ri, &(k, l)) in tgt_pairs.iter().enumerate() {
            let mut acc: Option<BinaryForm> = None;
            let mut add_product = |a: Option<&BinaryForm>, b: Option<&BinaryForm>| {
                if let (Some(a), Some(b)) = (a, b) {
                    if !a.is_zero() && !b.is_zero() {
                        let prod = a.mul(b);
                        acc = Some(match acc.take() {
                            None => prod,
                            Some(cur) => cur.add(&prod),
                        });
                    }
                }
            };
            add_product(f.entry(k, i), f.entry(l, j));
            if k != l {
                add_product(f.entry(l, i), f.entry(k, j));
            }
            entries[ri][cj] = acc;
        }
    }
    GradedMap::new(target_degs, source_degs, entries).expect("degree discipline preserved")
}

/// Recovers a splitting type from a saturated section profile: counts[i] must
/// equal h0(E(n_lo + i)) for a window starting strictly below every summand
/// (counts[0] = 0) and ending once all `rank` summands contribute.
pub fn type_from_section_profile(
    n_lo: i64,
    counts: &[i64],
    rank: usize,
) -> Result<SplittingType, GmatError> {
    if rank == 0 {
        if counts.iter().any(|&c| c != 0) {
            return Err(GmatError::ProfileNotStabilized(
                "rank-zero profile must vanish".into(),
            ));
        }
        return Ok(SplittingType::zero());
    }
    let mut degrees = Vec::with_capacity(rank);
    let mut prev_count = 0i64;
    let mut prev_delta = 0i64;
    for (i, &count) in counts.iter().enumerate() {
        let n = n_lo + i as i64;
        if i == 0 {
            if count != 0 {
                return Err(GmatError::ProfileNotStabilized(
                    "profile must start at zero sections".into(),
                ));
            }
            continue;
        }
        let delta = count - prev_count;
        if delta < prev_delta {
            return Err(GmatError::ProfileNotStabilized(format!(
                "difference profile decreased at twist {n}"
            )));
        }
        for _ in 0..(delta - prev_delta) {
            degrees.push(-n);
        }
        prev_count = count;
        prev_delta = delta;
        if delta == rank as i64 {
            return Ok(SplittingType::new(degrees));
        }
    }
    Err(GmatError::ProfileNotStabilized(format!(
        "difference profile reached {prev_delta} of {rank} by the end of the window"
    )))
}

/// The comparison map S^2(Wedge^2 V) -> S^2(S^2 V) for a rank-3 bundle V,
/// sending (a wedge b)(c wedge d) to (ac)(bd) - (ad)(bc). Wedge basis
/// e_i wedge e_j (i < j) in lexicographic order; its symmetric square and the
/// target use `sym2_pairs` order. All nonzero entries are constants, and the
/// target matches the source of `sym2_map` applied to any map whose source
/// degree sequence is `sym2_degrees(v1)`.
pub fn c_map(v1_degs: &[i64]) -> Result<GradedMap, GmatError> {
    if v1_degs.len() != 3 {
        return Err(GmatError::RankThreeRequired(v1_degs.len()));
    }
    let wedge_basis = [(0usize, 1usize), (0, 2), (1, 2)];
    let q_pairs = sym2_pairs(3);
    let q_index = |a: usize, b: usize| -> usize {
        let (a, b) = (a.min(b), a.max(b));
        q_pairs.iter().position(|&p| p == (a, b)).expect("pair in basis")
    };
    let src_pairs = sym2_pairs(3);
    let source_degs: Vec<i64> = src_pairs
        .iter()
        .map(|&(p, q)| {
            let (i, j) = wedge_basis[p];
            let (k, l) = wedge_basis[q];
            v1_degs[i] + v1_degs[j] + v1_degs[k] + v1_degs[l]
        })
        .collect();
    let q_degs: Vec<i64> = q_pairs.iter().map(|&(i, j)| v1_degs[i] + v1_degs[j]).collect();
    let tgt_pairs = sym2_pairs(q_pairs.len());
    let target_degs: Vec<i64> = tgt_pairs.iter().map(|&(a, b)| q_degs[a] + q_degs[b]).collect();
    let tgt_index = |a: usize, b: usize| -> usize {
        let (a, b) = (a.min(b), a.max(b));
        tgt_pairs.iter().position(|&p| p == (a, b)).expect("pair in basis")
    };
    let mut entries: Vec<Vec<Option<BinaryForm>>> =
        vec![vec![None; src_pairs.len()]; tgt_pairs.len()];
    for (cj, &(p, q)) in src_pairs.iter().enumerate() {
        let (i, j) = wedge_basis[p];
        let (k, l) = wedge_basis[q];
        for (qa, qb, sign) in [(q_index(i, k), q_index(j, l), 1i64), (q_index(i, l), q_index(j, k), -1)] {
            let ri = tgt_index(qa, qb);
            let add = BinaryForm::constant(rat(sign));
            entries[ri][cj] = Some(match entries[ri][cj].take() {
                None => add,
                Some(cur) => cur.add(&add),
            });
        }
    }
    GradedMap::new(target_degs, source_degs, entries)
}

/// Multiplication S^2(V) (x) L -> S^4(V) induced by an inclusion
/// iota: L -> S^2(V) of a line bundle, for rank-3 V. The source is the
/// `sym2_degrees(v1)` basis twisted by deg L; the target is the degree-4
/// monomial basis of V in lexicographic order.
pub fn sym2_line_multiplication(v1_degs: &[i64], iota: &GradedMap) -> Result<GradedMap, GmatError> {
    if v1_degs.len() != 3 {
        return Err(GmatError::RankThreeRequired(v1_degs.len()));
    }
    let s2 = sym2_degrees(v1_degs);
    if iota.target_degrees() != s2.as_slice() || iota.source_degrees().len() != 1 {
        return Err(GmatError::SourceOrderMismatch(format!(
            "iota must map a line bundle into the sym2 monomial basis {s2:?}"
        )));
    }
    let l_deg = iota.source_degrees()[0];
    let pairs = sym2_pairs(3);
    // degree-4 monomials of a rank-3 bundle, lexicographic
    let mut quads: Vec<[usize; 4]> = Vec::new();
    for a in 0..3 {
        for b in a..3 {
            for c in b..3 {
                for d in c..3 {
                    quads.push([a, b, c, d]);
                }
            }
        }
    }
    let quad_index = |mut q: [usize; 4]| -> usize {
        q.sort_unstable();
        quads.iter().position(|&x| x == q).expect("quad in basis")
    };
    let source_degs: Vec<i64> = pairs.iter().map(|&(i, j)| v1_degs[i] + v1_degs[j] + l_deg).collect();
    let target_degs: Vec<i64> = quads
        .iter()
        .map(|q| q.iter().map(|&x| v1_degs[x]).sum())
        .collect();
    let mut entries: Vec<Vec<Option<BinaryForm>>> = vec![vec![None; pairs.len()]; quads.len()];
    for (cj, &(i, j)) in pairs.iter().enumerate() {
        for (k, &(u, v)) in pairs.iter().enumerate() {
            let Some(f) = iota.entry(k, 0) else { continue };
            if f.is_zero() {
                continue;
            }
            let ri = quad_index([i, j, u, v]);
            entries[ri][cj] = Some(match entries[ri][cj].take() {
                None => f.clone(),
                Some(cur) => cur.add(f),
            });
        }
    }
    GradedMap::new(target_degs, source_degs, entries)
}

/// Seeded random solution q of q . iota = composite (the zero map when
/// `composite` is None), among graded maps from iota's target type onto
/// `target_degs`. The solution is a particular solution plus a random
/// integer combination of the homogeneous solution space; callers validate
/// genericity and resample on failure.
pub fn solve_composite(
    target_degs: &[i64],
    iota: &GradedMap,
    composite: Option<&GradedMap>,
    seed: u64,
    height: u32,
) -> Result<GradedMap, GmatError> {
    let mid = iota.target_degrees().to_vec();
    let lsrc = iota.source_degrees().to_vec();
    if let Some(comp) = composite {
        if comp.source_degrees() != lsrc.as_slice() || comp.target_degrees() != target_degs {
            return Err(GmatError::ShapeMismatch(
                "composite must map iota's source to the requested target".into(),
            ));
        }
    }
    // unknown coordinates: (row i, mid column j, coefficient k)
    let mut unknowns: Vec<(usize, usize, usize)> = Vec::new();
    for (i, &ti) in target_degs.iter().enumerate() {
        for (j, &sj) in mid.iter().enumerate() {
            let d = ti - sj;
            if d >= 0 {
                for k in 0..=(d as usize) {
                    unknowns.push((i, j, k));
                }
            }
        }
    }
    // one linear constraint per coefficient of each composite entry
    let mut rows: Mat = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for (i, &ti) in target_degs.iter().enumerate() {
        for (c, &lc) in lsrc.iter().enumerate() {
            let d_out = ti - lc;
            if d_out < 0 {
                // entries of negative degree are identically zero; nothing to constrain
                continue;
            }
            for m in 0..=(d_out as usize) {
                let mut row = vec![Rat::zero(); unknowns.len()];
                for (col, &(i2, j, k)) in unknowns.iter().enumerate() {
                    if i2 != i {
                        continue;
                    }
                    let Some(f) = iota.entry(j, c) else { continue };
                    // coefficient k of the unknown times coefficient (m - k) of iota
                    if m >= k {
                        let l = m - k;
                        if l < f.coeffs().len() {
                            row[col] = f.coeffs()[l].clone();
                        }
                    }
                }
                rows.push(row);
                let want = composite
                    .and_then(|comp| comp.entry(i, c))
                    .map_or_else(Rat::zero, |f| f.coeffs()[m].clone());
                rhs.push(want);
            }
        }
    }
    let particular = if rows.is_empty() {
        vec![Rat::zero(); unknowns.len()]
    } else {
        qlinalg::solve(&rows, &rhs).ok_or(GmatError::NoSolution)?
    };
    let homogeneous = if rows.is_empty() {
        // no constraints: the full coordinate space
        let mut basis = Vec::with_capacity(unknowns.len());
        for idx in 0..unknowns.len() {
            let mut v = vec![Rat::zero(); unknowns.len()];
            v[idx] = Rat::one();
            basis.push(v);
        }
        basis
    } else {
        qlinalg::nullspace(&rows)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = height as i64;
    let mut x = particular;
    for basis_vec in &homogeneous {
        let c = rat(rng.random_range(-h..=h));
        if c.is_zero() {
            continue;
        }
        for (xi, bi) in x.iter_mut().zip(basis_vec) {
            *xi += &c * bi;
        }
    }
    let mut entries: Vec<Vec<Option<BinaryForm>>> = target_degs
        .iter()
        .map(|&ti| {
            mid.iter()
                .map(|&sj| {
                    let d = ti - sj;
                    if d >= 0 {
                        Some(BinaryForm::zero(d as usize))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    for (col, &(i, j, k)) in unknowns.iter().enumerate() {
        if let Some(f) = &mut entries[i][j] {
            let mut coeffs = f.coeffs().to_vec();
            coeffs[k] = x[col].clone();
            *f = BinaryForm::new(f.degree(), coeffs).expect("length preserved");
        }
    }
    GradedMap::new(target_degs.to_vec(), mid, entries)
}

/// Pointwise transversality check behind condition CD): at a point b where
/// the fiber of the rank-15 quotient is defined, decide whether the line
/// spanned by `j_ambient` (coordinates in the fiber of S^2(target)) stays
/// out of the image of target (x) source under v (x) w -> v . sigma2(w).
///
/// `v1_degs` must generate sigma2's source: sym2_degrees(v1) = source.
pub fn cd_check(
    sigma2: &GradedMap,
    v1_degs: &[i64],
    j_ambient: &[Rat],
    b: &P1Point,
) -> Result<bool, GmatError> {
    if sym2_degrees(v1_degs) != sigma2.source_degrees() {
        return Err(GmatError::SourceOrderMismatch(format!(
            "sigma2 source {:?} is not the sym2 monomial basis of {:?}",
            sigma2.source_degrees(),
            v1_degs
        )));
    }
    let presentation = compose(&sym2_map(sigma2), &c_map(v1_degs)?)?;
    let g_b = presentation.evaluate(b);
    let fiber_dim = presentation.target_degrees().len();
    let relations = presentation.source_degrees().len();
    let got = qlinalg::rank(&g_b);
    if got != relations {
        return Err(GmatError::FiberModelDegenerate { expected: relations, got });
    }
    let p = sigma2.target_degrees().len();
    let q = sigma2.source_degrees().len();
    let tgt_pairs = sym2_pairs(p);
    if j_ambient.len() != tgt_pairs.len() {
        return Err(GmatError::JVectorLength { expected: tgt_pairs.len(), got: j_ambient.len() });
    }
    let pair_index = |a: usize, b2: usize| -> usize {
        let (a, b2) = (a.min(b2), a.max(b2));
        tgt_pairs.iter().position(|&x| x == (a, b2)).expect("pair in basis")
    };
    let sigma_b = sigma2.evaluate(b);
    // columns: the presentation's relations, then v_k * sigma2(w_j) for all k, j
    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(relations + p * q);
    for c in 0..relations {
        columns.push((0..fiber_dim).map(|r| g_b[r][c].clone()).collect());
    }
    for k in 0..p {
        for j in 0..q {
            let mut col = vec![Rat::zero(); fiber_dim];
            for (i, row) in sigma_b.iter().enumerate() {
                if !row[j].is_zero() {
                    col[pair_index(i, k)] += &row[j];
                }
            }
            columns.push(col);
        }
    }
    let as_matrix = |cols: &[Vec<Rat>]| -> Mat {
        (0..fiber_dim)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect()
    };
    let base_rank = qlinalg::rank(&as_matrix(&columns));
    columns.push(j_ambient.to_vec());
    let extended_rank = qlinalg::rank(&as_matrix(&columns));
    Ok(extended_rank == base_rank + 1)
}

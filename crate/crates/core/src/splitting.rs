//! Splitting types and sheaf summaries on the projective line.
//!
//! Every vector bundle on P^1 is a direct sum of line bundles O(a_i); the
//! multiset of twists {a_i} determines the bundle up to isomorphism. This
//! module does exact arithmetic on those multisets: the multilinear functors
//! (direct sum, tensor, Sym^n, Wedge^k, dual, determinant, twist), cohomology
//! dimensions, Euler characteristics, and the Hom/Ext/automorphism counts the
//! dimension audits are built from.
//!
//! A coherent sheaf enters only through its numerical class: a bundle part
//! plus the total length of the torsion part (`SheafSummary`). Support points
//! are deliberately not tracked.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplittingError {
    #[error("automorphism dimensions need rank >= 1, got the zero bundle")]
    ZeroRank,
    #[error("long-exact-sequence regime not satisfied: h1 must vanish for the bundle and its twist by {tau_degree}")]
    ExtRegime { tau_degree: i64 },
    #[error("tau degree must be positive, got {0}")]
    NonPositiveTau(i64),
}

/// Multiset of line-bundle degrees, stored sorted non-increasing.
///
/// The empty list is the zero bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SplittingType {
    degrees: Vec<i64>,
}

impl SplittingType {
    /// Canonicalizes the input: sorts non-increasing.
    pub fn new(degrees: impl Into<Vec<i64>>) -> Self {
        let mut degrees = degrees.into();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { degrees }
    }

    pub fn zero() -> Self {
        SplittingType { degrees: Vec::new() }
    }

    /// The line bundle O(d).
    pub fn line(d: i64) -> Self {
        SplittingType { degrees: vec![d] }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        SplittingType::new(degrees)
    }

    /// O(a) (x) O(b) = O(a+b), extended bilinearly over the summands.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut degrees = Vec::with_capacity(self.rank() * other.rank());
        for &a in &self.degrees {
            for &b in &other.degrees {
                degrees.push(a + b);
            }
        }
        SplittingType::new(degrees)
    }

    pub fn dual(&self) -> Self {
        SplittingType::new(self.degrees.iter().map(|&d| -d).collect::<Vec<_>>())
    }

    /// Tensor with O(d): shifts every summand degree by d.
    pub fn twist(&self, d: i64) -> Self {
        SplittingType {
            degrees: self.degrees.iter().map(|&a| a + d).collect(),
        }
    }

    /// Symmetric power: one summand per size-n multiset of summand indices.
    ///
    /// sym(0, _) = [O(0)] (the structure sheaf, i.e. the degree-0 piece of the
    /// symmetric algebra); sym(n, zero bundle) = zero bundle for n >= 1.
    pub fn sym(&self, n: usize) -> Self {
        if n == 0 {
            return SplittingType::line(0);
        }
        let mut degrees = Vec::new();
        collect_multiset_sums(&self.degrees, n, 0, 0, &mut degrees);
        SplittingType::new(degrees)
    }

    /// Exterior power: one summand per size-k subset of summand indices.
    pub fn wedge(&self, k: usize) -> Self {
        if k == 0 {
            return SplittingType::line(0);
        }
        if k > self.rank() {
            return SplittingType::zero();
        }
        let mut degrees = Vec::new();
        collect_subset_sums(&self.degrees, k, 0, 0, &mut degrees);
        SplittingType::new(degrees)
    }

    /// Top exterior power; det of the zero bundle is O(0).
    pub fn det(&self) -> Self {
        SplittingType::line(self.degree())
    }

    pub fn h0(&self) -> i64 {
        self.degrees.iter().map(|&a| (a + 1).max(0)).sum()
    }

    pub fn h1(&self) -> i64 {
        self.degrees.iter().map(|&a| (-a - 1).max(0)).sum()
    }

    pub fn chi(&self) -> i64 {
        self.degree() + self.rank() as i64
    }

    /// dim Hom(self, other) = h0(self^v (x) other).
    pub fn hom_dim(&self, other: &Self) -> i64 {
        self.dual().tensor(other).h0()
    }

    /// Dimension of the automorphism group, h0 of the endomorphism bundle.
    pub fn aut_dim(&self) -> Result<i64, SplittingError> {
        if self.is_zero() {
            return Err(SplittingError::ZeroRank);
        }
        Ok(self.hom_dim(self))
    }

    /// dim Aut(P(E)/B): fibrewise projectivized automorphisms, aut_dim - 1.
    pub fn rel_aut_dim(&self) -> Result<i64, SplittingError> {
        Ok(self.aut_dim()? - 1)
    }
}

impl std::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", SheafSummary::from_bundle(self.clone()))
    }
}

fn collect_multiset_sums(degs: &[i64], n: usize, start: usize, acc: i64, out: &mut Vec<i64>) {
    if n == 0 {
        out.push(acc);
        return;
    }
    for i in start..degs.len() {
        collect_multiset_sums(degs, n - 1, i, acc + degs[i], out);
    }
}

fn collect_subset_sums(degs: &[i64], k: usize, start: usize, acc: i64, out: &mut Vec<i64>) {
    if k == 0 {
        out.push(acc);
        return;
    }
    // not enough indices left
    if start + k > degs.len() {
        return;
    }
    for i in start..=(degs.len() - k) {
        collect_subset_sums(degs, k - 1, i + 1, acc + degs[i], out);
    }
}

/// dim Ext^1(O_tau, E) for a torsion sheaf of length `tau_degree` with reduced
/// support, computed from the section jump h0(E(tau)) - h0(E) and cross-checked
/// against the local formula rank(E) * tau_degree.
///
/// Requires h1(E) = h1(E(tau)) = 0, which is the regime of every use here.
pub fn ext1_from_torsion(tau_degree: i64, e: &SplittingType) -> Result<i64, SplittingError> {
    if tau_degree <= 0 {
        return Err(SplittingError::NonPositiveTau(tau_degree));
    }
    let twisted = e.twist(tau_degree);
    if e.h1() != 0 || twisted.h1() != 0 {
        return Err(SplittingError::ExtRegime { tau_degree });
    }
    let from_sections = twisted.h0() - e.h0();
    let local = e.rank() as i64 * tau_degree;
    assert_eq!(
        from_sections, local,
        "section jump and local Ext computation disagree"
    );
    Ok(from_sections)
}

/// Numerical class of a coherent sheaf on P^1: a bundle part plus the total
/// length of the torsion part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SheafSummary {
    pub bundle: SplittingType,
    pub torsion_length: u64,
}

impl SheafSummary {
    pub fn new(bundle: SplittingType, torsion_length: u64) -> Self {
        SheafSummary { bundle, torsion_length }
    }

    pub fn from_bundle(bundle: SplittingType) -> Self {
        SheafSummary { bundle, torsion_length: 0 }
    }

    pub fn zero() -> Self {
        SheafSummary::from_bundle(SplittingType::zero())
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    /// Degree as a sheaf: bundle degree plus torsion length.
    pub fn degree(&self) -> i64 {
        self.bundle.degree() + self.torsion_length as i64
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_length == 0
    }

    /// Torsion is globally generated: it contributes its full length to h0.
    pub fn h0(&self) -> i64 {
        self.torsion_length as i64 + self.bundle.h0()
    }

    pub fn h1(&self) -> i64 {
        self.bundle.h1()
    }

    /// Riemann-Roch on P^1: chi = degree + rank (+ torsion length).
    pub fn chi(&self) -> i64 {
        self.h0() - self.h1()
    }
}

impl std::fmt::Display for SheafSummary {
    /// Canonical form `O(a1)^m1 + O(a2)^m2 + ... [+ T(len)]`, degrees strictly
    /// decreasing; the zero sheaf prints as `0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let degs = self.bundle.degrees();
        if degs.is_empty() && self.torsion_length == 0 {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < degs.len() {
            let d = degs[i];
            let mut m = 1;
            while i + m < degs.len() && degs[i + m] == d {
                m += 1;
            }
            if m == 1 {
                parts.push(format!("O({d})"));
            } else {
                parts.push(format!("O({d})^{m}"));
            }
            i += m;
        }
        if self.torsion_length > 0 {
            parts.push(format!("T({})", self.torsion_length));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(d: &[i64]) -> SplittingType {
        SplittingType::new(d.to_vec())
    }

    #[test]
    fn direct_sum_merges_multisets() {
        assert_eq!(st(&[2, 2]).direct_sum(&st(&[3])), st(&[3, 2, 2]));
        assert_eq!(SplittingType::zero().direct_sum(&st(&[5])), st(&[5]));
        assert_eq!(
            st(&[5, 5, 5]).direct_sum(&st(&[5, 5, 6])),
            st(&[6, 5, 5, 5, 5, 5])
        );
    }

    #[test]
    fn tensor_adds_degrees_pairwise() {
        assert_eq!(st(&[2]).tensor(&st(&[3])), st(&[5]));
        assert_eq!(
            st(&[4, 4, 6, 6, 6]).tensor(&st(&[5])),
            st(&[9, 9, 11, 11, 11])
        );
        // S^2(V_1) (x) L for V_1 = O(1)+O(3)+O(3), L = O(2)
        let s2 = st(&[1, 3, 3]).sym(2);
        assert_eq!(s2.tensor(&st(&[2])), st(&[4, 6, 6, 8, 8, 8]));
    }

    #[test]
    fn tensor_rank_degree_bookkeeping() {
        let a = st(&[4, 4, 6, 6, 6]);
        let b = st(&[5]);
        let t = a.tensor(&b);
        assert_eq!(t.rank(), a.rank() * b.rank());
        assert_eq!(
            t.degree(),
            a.degree() * b.rank() as i64 + b.degree() * a.rank() as i64
        );
    }

    #[test]
    fn dual_negates() {
        assert_eq!(st(&[10]).dual(), st(&[-10]));
        assert_eq!(SplittingType::zero().dual(), SplittingType::zero());
        assert_eq!(st(&[2, 2, 3]).dual(), st(&[-2, -2, -3]));
        assert_eq!(st(&[1, -4, 7]).dual().dual(), st(&[1, -4, 7]));
    }

    #[test]
    fn twist_shifts() {
        assert_eq!(st(&[5, 5, 5]).twist(-3), st(&[2, 2, 2]));
        assert_eq!(SplittingType::zero().twist(7), SplittingType::zero());
        let twisted = st(&[8, 8, 8, 10, 10, 12]).twist(-10);
        assert_eq!(twisted, st(&[-2, -2, -2, 0, 0, 2]));
        assert_eq!(twisted.degree(), -4);
    }

    #[test]
    fn sym_powers() {
        assert_eq!(st(&[2, 2, 3]).sym(2), st(&[4, 4, 4, 5, 5, 6]));
        assert_eq!(
            st(&[5, 4, 4, 6, 6, 6]).sym(2),
            st(&[8, 8, 8, 9, 9, 10, 10, 10, 10, 10, 10, 10, 11, 11, 11, 12, 12, 12, 12, 12, 12])
        );
        assert_eq!(
            st(&[1, 3, 3]).sym(4),
            st(&[4, 6, 6, 8, 8, 8, 10, 10, 10, 10, 12, 12, 12, 12, 12])
        );
        assert_eq!(st(&[7, 7]).sym(0), st(&[0]));
        assert_eq!(SplittingType::zero().sym(3), SplittingType::zero());
    }

    #[test]
    fn wedge_powers() {
        assert_eq!(st(&[1, 3, 3]).wedge(2), st(&[4, 4, 6]));
        assert_eq!(st(&[2, 2, 3]).wedge(3), st(&[7]));
        assert_eq!(st(&[1, 3, 3]).wedge(2).sym(2), st(&[8, 8, 8, 10, 10, 12]));
        assert_eq!(st(&[1, 2]).wedge(5), SplittingType::zero());
        assert_eq!(st(&[1, 2]).wedge(0), st(&[0]));
    }

    #[test]
    fn det_is_top_wedge() {
        assert_eq!(st(&[2, 2, 3]).det(), st(&[7]));
        assert_eq!(st(&[1, 3, 3]).det(), st(&[7]));
        assert_eq!(st(&[2, 2, 3]).det().tensor(&st(&[3])), st(&[10]));
        assert_eq!(st(&[2, 2, 3]).det(), st(&[2, 2, 3]).wedge(3));
        assert_eq!(SplittingType::zero().det(), st(&[0]));
    }

    #[test]
    fn cohomology() {
        assert_eq!(st(&[1, 3, 3]).sym(2).twist(-2).h0(), 22);
        assert_eq!(st(&[10, 10, 10, 10, 12, 12, 12, 12, 12]).twist(-10).h0(), 19);
        assert_eq!(st(&[-1]).h1(), 0);
        assert_eq!(st(&[-2]).h1(), 1);
        let s = SheafSummary::new(st(&[3, -5]), 2);
        assert_eq!(s.h0(), 4 + 2);
        assert_eq!(s.h1(), 4);
        assert_eq!(s.chi(), s.degree() + s.rank() as i64);
    }

    #[test]
    fn hom_dims() {
        assert_eq!(st(&[2, 4, 4, 6, 6, 6]).hom_dim(&st(&[5])), 8);
        assert_eq!(st(&[4, 4, 6, 6, 6]).hom_dim(&st(&[5])), 4);
        assert_eq!(st(&[2, 2, 2]).hom_dim(&st(&[3, 3])), 12);
        assert_eq!(st(&[3, 3]).aut_dim().unwrap(), 4);
        assert_eq!(12 - st(&[3, 3]).aut_dim().unwrap(), 8);
    }

    #[test]
    fn aut_dims() {
        assert_eq!(st(&[2, 4]).aut_dim().unwrap(), 5);
        assert_eq!(st(&[9]).aut_dim().unwrap(), 1);
        assert_eq!(st(&[-3]).aut_dim().unwrap(), 1);
        assert_eq!(SplittingType::zero().aut_dim(), Err(SplittingError::ZeroRank));
    }

    #[test]
    fn rel_aut_dims() {
        assert_eq!(st(&[2, 2, 3]).rel_aut_dim().unwrap(), 8);
        assert_eq!(st(&[1, 3, 3]).rel_aut_dim().unwrap(), 10);
        assert_eq!(st(&[0, 0, 0]).rel_aut_dim().unwrap(), 8);
        assert_eq!(SplittingType::zero().rel_aut_dim(), Err(SplittingError::ZeroRank));
    }

    #[test]
    fn ext1_values() {
        assert_eq!(ext1_from_torsion(3, &st(&[4, 4, 4, 5, 5, 6])).unwrap(), 18);
        assert_eq!(ext1_from_torsion(3, &st(&[2, 4, 4, 6, 6, 6])).unwrap(), 18);
        assert_eq!(ext1_from_torsion(1, &st(&[0])).unwrap(), 1);
        assert_eq!(
            ext1_from_torsion(2, &st(&[-3])),
            Err(SplittingError::ExtRegime { tau_degree: 2 })
        );
        assert_eq!(ext1_from_torsion(0, &st(&[1])), Err(SplittingError::NonPositiveTau(0)));
    }

    #[test]
    fn display_canonical_form() {
        assert_eq!(st(&[4, 4, 4, 5, 5, 6]).to_string(), "O(6) + O(5)^2 + O(4)^3");
        assert_eq!(SplittingType::zero().to_string(), "0");
        assert_eq!(SheafSummary::new(st(&[3, 3]), 3).to_string(), "O(3)^2 + T(3)");
        assert_eq!(SheafSummary::new(SplittingType::zero(), 3).to_string(), "T(3)");
    }
}

//! Exact verification of the Fibonacci/Lucas summation identities behind the
//! closed form of `‖Z_n‖_F²`.
//!
//! Every identity is checked by evaluating its left-hand side through direct
//! summation and its right-hand side from the closed form, both in
//! [`ExactRational`]. Empty sums are zero. Identity names are stable
//! identifiers so reports can be diffed between runs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::{int_rat, rat, ExactError, ExactInt, ExactRational, FibCache};

/// Where an identity was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityIndex {
    Single(i64),
    Pair { i: i64, j: i64 },
}

impl fmt::Display for IdentityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityIndex::Single(n) => write!(f, "n={n}"),
            IdentityIndex::Pair { i, j } => write!(f, "i={i},j={j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub name: &'static str,
    /// Number of indices at which the identity was evaluated.
    pub checked: usize,
    pub first_failure: Option<IdentityIndex>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    pub fn get(&self, name: &str) -> Option<&IdentityOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    /// Appends the outcomes of `other`, merging entries with the same name.
    pub fn extend(&mut self, other: IdentityReport) {
        for o in other.outcomes {
            self.record_outcome(o);
        }
    }

    fn record_outcome(&mut self, o: IdentityOutcome) {
        match self.outcomes.iter_mut().find(|e| e.name == o.name) {
            Some(e) => {
                e.checked += o.checked;
                if e.first_failure.is_none() {
                    e.first_failure = o.first_failure;
                }
            }
            None => self.outcomes.push(o),
        }
    }

    fn record(&mut self, name: &'static str, ok: bool, at: IdentityIndex) {
        self.record_outcome(IdentityOutcome {
            name,
            checked: 1,
            first_failure: if ok { None } else { Some(at) },
        });
    }
}

/// Names of the identities in the inner (`j`) summation block.
pub const J_BLOCK: [&str; 6] = [
    "sum_j_L2imj_sq",
    "sum_j_Fjm1_L2imj",
    "sum_j_alt_Ljm1_L2imj",
    "sum_j_Fjm1_sq",
    "sum_j_alt_Fjm1_Ljm1",
    "sum_j_Ljm1_sq",
];

/// Names of the identities in the outer (`i`) summation block.
pub const I_BLOCK: [&str; 11] = [
    "sum_L2im2_L2im1",
    "sum_Li_Lim1",
    "sum_i_F2im1",
    "sum_F2im1",
    "sum_L2im2",
    "sum_alt_L2im2",
    "sum_L2im1",
    "sum_alt_L2im1",
    "sum_Fi_Fim1",
    "sum_Fim2_sq",
    "sum_Fip1_sq",
];

/// Names of the four row simplifications.
pub const ROWS: [&str; 4] = [
    "row_F4n_to_L4n",
    "row_nF2np1_split",
    "row_alternating_to_L2n",
    "row_remainder_to_L2n",
];

/// Exact-rational views onto a Fibonacci cache.
struct Seq<'a> {
    cache: &'a FibCache,
}

impl Seq<'_> {
    fn f(&self, k: i64) -> ExactRational {
        ExactRational::from_integer(self.cache.f_signed(k))
    }

    fn l(&self, k: i64) -> ExactRational {
        ExactRational::from_integer(self.cache.l_signed(k))
    }

    fn fi(&self, k: i64) -> ExactInt {
        self.cache.f_signed(k)
    }

    fn li(&self, k: i64) -> ExactInt {
        self.cache.l_signed(k)
    }
}

fn sign(k: i64) -> ExactRational {
    if k.rem_euclid(2) == 0 {
        rat(1, 1)
    } else {
        rat(-1, 1)
    }
}

fn r(v: i64) -> ExactRational {
    rat(v, 1)
}

/// `F_{j-1} + Σ_{k=j+1}^{i} F_{k-1} F_{k-j}` by direct summation.
fn inner_sum_direct(seq: &Seq<'_>, i: i64, j: i64) -> ExactInt {
    let mut acc = seq.fi(j - 1);
    for k in (j + 1)..=i {
        acc += seq.fi(k - 1) * seq.fi(k - j);
    }
    acc
}

/// `(1/5)(L_{2i-j} + (5/2)F_{j-1} - (1/2)(-1)^{i-j} L_{j-1})`.
fn inner_sum_closed(seq: &Seq<'_>, i: i64, j: i64) -> ExactRational {
    rat(1, 5)
        * (seq.l(2 * i - j) + rat(5, 2) * seq.f(j - 1)
            - rat(1, 2) * sign(i - j) * seq.l(j - 1))
}

/// Expansion of the squared inner sum into Fibonacci/Lucas products.
fn inner_square_closed(seq: &Seq<'_>, i: i64, j: i64) -> ExactRational {
    let l2 = seq.l(2 * i - j);
    let fj = seq.f(j - 1);
    let lj = seq.l(j - 1);
    let s = sign(i - j);
    rat(1, 25) * &l2 * &l2 + rat(1, 5) * &fj * &l2 - rat(1, 25) * &s * &lj * &l2
        + rat(1, 4) * &fj * &fj
        - rat(1, 10) * &s * &fj * &lj
        + rat(1, 100) * &lj * &lj
}

/// Right-hand sides of the six `j`-block identities at outer index `i`.
fn j_block_closed(seq: &Seq<'_>, i: i64) -> [ExactRational; 6] {
    [
        seq.l(2 * i - 2) * seq.l(2 * i - 1) - seq.l(i) * seq.l(i - 1),
        r(i - 1) * seq.f(2 * i - 1) + seq.l(2 * i - 2) * rat(1, 5) + rat(2, 5) * sign(i),
        r(2) + (r(1) + sign(i)) * rat(1, 2) * seq.l(2 * i - 1) - seq.l(2 * i - 2),
        seq.f(i - 1) * seq.f(i),
        sign(i) * (seq.f(i + 1) * seq.f(i + 1) - seq.f(i - 2) * seq.f(i - 2)) * rat(1, 4),
        seq.l(i - 1) * seq.l(i) - r(2),
    ]
}

/// One term of each `j`-block sum at `(i, j)`.
fn j_block_terms(seq: &Seq<'_>, i: i64, j: i64) -> [ExactInt; 6] {
    let sj = if j % 2 == 0 { 1 } else { -1 };
    [
        seq.li(2 * i - j) * seq.li(2 * i - j),
        seq.fi(j - 1) * seq.li(2 * i - j),
        seq.li(j - 1) * seq.li(2 * i - j) * sj,
        seq.fi(j - 1) * seq.fi(j - 1),
        seq.fi(j - 1) * seq.li(j - 1) * sj,
        seq.li(j - 1) * seq.li(j - 1),
    ]
}

/// Closed form of `Σ_{j=2}^{i} (inner sum)²`.
fn j_total_closed(seq: &Seq<'_>, i: i64) -> ExactRational {
    let s = sign(i);
    rat(1, 25) * seq.l(2 * i - 2) * seq.l(2 * i - 1) - rat(3, 100) * seq.l(i) * seq.l(i - 1)
        + rat(1, 5) * r(i) * seq.f(2 * i - 1)
        - rat(1, 5) * seq.f(2 * i - 1)
        + rat(1, 25) * seq.l(2 * i - 2)
        + rat(1, 25) * &s * seq.l(2 * i - 2)
        - rat(1, 50) * seq.l(2 * i - 1)
        - rat(1, 50) * &s * seq.l(2 * i - 1)
        + rat(1, 4) * seq.f(i) * seq.f(i - 1)
        + rat(1, 40) * seq.f(i - 2) * seq.f(i - 2)
        - rat(1, 40) * seq.f(i + 1) * seq.f(i + 1)
        - rat(1, 50)
}

/// Right-hand sides of the eleven `i`-block identities at upper index `n`.
fn i_block_closed(seq: &Seq<'_>, n: i64) -> [ExactRational; 11] {
    let s = sign(n);
    [
        r(n - 3) + seq.f(4 * n - 1),
        seq.l(2 * n) - (r(7) + &s) * rat(1, 2),
        r(n) * seq.f(2 * n + 1) - r(n + 1) * seq.f(2 * n - 1),
        seq.f(2 * n) - r(1),
        seq.l(2 * n - 1) - r(1),
        &s * seq.f(n - 1) * seq.l(n),
        seq.l(2 * n) - r(3),
        &s * seq.f(n - 1) * seq.l(n + 1),
        seq.f(n) * seq.f(n) + (&s - r(1)) * rat(1, 2),
        seq.f(n - 1) * seq.f(n - 2),
        seq.f(n + 1) * seq.f(n + 2) - r(2),
    ]
}

/// One term of each `i`-block sum at index `i`.
fn i_block_terms(seq: &Seq<'_>, i: i64) -> [ExactInt; 11] {
    let si = if i % 2 == 0 { 1 } else { -1 };
    [
        seq.li(2 * i - 2) * seq.li(2 * i - 1),
        seq.li(i) * seq.li(i - 1),
        seq.fi(2 * i - 1) * i,
        seq.fi(2 * i - 1),
        seq.li(2 * i - 2),
        seq.li(2 * i - 2) * si,
        seq.li(2 * i - 1),
        seq.li(2 * i - 1) * si,
        seq.fi(i) * seq.fi(i - 1),
        seq.fi(i - 2) * seq.fi(i - 2),
        seq.fi(i + 1) * seq.fi(i + 1),
    ]
}

/// `-n/25 + F_{4n}/25 + (2/25)(-1)^n F_n L_n`.
fn fib_sq_products_closed(seq: &Seq<'_>, n: i64) -> ExactRational {
    -rat(n, 25) + rat(1, 25) * seq.f(4 * n) + rat(2, 25) * sign(n) * seq.f(n) * seq.l(n)
}

/// Closed form of `Σ_{i=2}^{n} Σ_{j=2}^{i} (inner sum)²`.
fn double_sum_closed(seq: &Seq<'_>, n: i64) -> ExactRational {
    let s = sign(n);
    rat(3, 20) + &s * rat(1, 8) + rat(3, 200) * &s + rat(n, 50)
        + rat(1, 40) * seq.f(n - 2) * seq.f(n - 1)
        + rat(1, 4) * seq.f(n) * seq.f(n)
        - rat(1, 5) * seq.f(2 * n)
        - rat(1, 40) * seq.f(n + 1) * seq.f(n + 2)
        - rat(1, 5) * seq.f(2 * n - 1)
        - rat(1, 5) * r(n) * seq.f(2 * n - 1)
        + rat(1, 5) * r(n) * seq.f(2 * n + 1)
        + rat(1, 25) * seq.f(4 * n - 1)
        + rat(1, 25) * &s * seq.f(n - 1) * seq.l(n)
        - rat(1, 20) * seq.l(2 * n)
        - rat(1, 50) * &s * seq.f(n - 1) * seq.l(n + 1)
        + rat(1, 25) * seq.l(2 * n - 1)
}

/// Closed form of `1 + Σ_{i=2}^{n} (1 + F_i F_{i-1})²`.
fn diagonal_part_closed(seq: &Seq<'_>, n: i64) -> ExactRational {
    let s = sign(n);
    r(2) * seq.f(n) * seq.f(n) + &s - r(1) + rat(24, 25) * r(n) + rat(1, 25) * seq.f(4 * n)
        + rat(2, 25) * &s * seq.f(n) * seq.l(n)
}

/// The four row groups whose sum is `‖Z_n‖_F²`, in order.
fn row_groups(seq: &Seq<'_>, n: i64) -> [ExactRational; 4] {
    let s = sign(n);
    [
        rat(1, 25) * seq.f(4 * n) + rat(2, 25) * seq.f(4 * n - 1),
        r(n) - rat(2, 5) * r(n) * seq.f(2 * n - 1) + rat(2, 5) * r(n) * seq.f(2 * n + 1),
        -rat(7, 10) + rat(2, 25) * &s * seq.f(n - 1) * seq.l(n)
            + rat(2, 25) * &s * seq.f(n) * seq.l(n)
            - rat(1, 25) * &s * seq.f(n - 1) * seq.l(n + 1),
        rat(32, 25) * &s + rat(1, 20) * seq.f(n - 2) * seq.f(n - 1)
            + rat(5, 2) * seq.f(n) * seq.f(n)
            - rat(2, 5) * seq.f(2 * n)
            - rat(1, 20) * seq.f(n + 1) * seq.f(n + 2)
            - rat(2, 5) * seq.f(2 * n - 1)
            - rat(1, 10) * seq.l(2 * n)
            + rat(2, 25) * seq.l(2 * n - 1),
    ]
}

/// Simplified forms of the four row groups.
fn row_groups_simplified(seq: &Seq<'_>, n: i64) -> [ExactRational; 4] {
    let s = sign(n);
    [
        rat(1, 25) * seq.l(4 * n),
        r(n) - rat(2, 5) * r(n) * seq.f(2 * n - 1)
            + rat(2, 5) * r(n) * (seq.f(2 * n) + seq.f(2 * n - 1)),
        &s * seq.l(2 * n) * rat(1, 25) - rat(33, 50),
        rat(3, 25) * seq.l(2 * n) + rat(13, 50) * &s,
    ]
}

/// `(1/25)L_{4n} + ((3+(-1)^n)/25)L_{2n} + (2/5)nF_{2n} + (13(-1)^n - 33)/50 + n`.
pub(crate) fn frobenius_closed(cache: &FibCache, n: i64) -> ExactRational {
    let seq = Seq { cache };
    let s = sign(n);
    rat(1, 25) * seq.l(4 * n) + (r(3) + &s) * rat(1, 25) * seq.l(2 * n)
        + rat(2, 5) * r(n) * seq.f(2 * n)
        + (r(13) * &s - r(33)) * rat(1, 50)
        + r(n)
}

/// Checks `F_{j-1} + Σ_{k=j+1}^{i} F_{k-1}F_{k-j} = (1/5)(L_{2i-j} + (5/2)F_{j-1} - (1/2)(-1)^{i-j}L_{j-1})`
/// exactly.
pub fn verify_inner_sum_identity(i: i64, j: i64) -> Result<bool, ExactError> {
    if j < 2 || j > i {
        return Err(ExactError::IndexOrder { i, j });
    }
    let cache = FibCache::with_len((2 * i) as usize);
    let seq = Seq { cache: &cache };
    Ok(int_rat(&inner_sum_direct(&seq, i, j)) == inner_sum_closed(&seq, i, j))
}

/// Runs every summation identity for all admissible indices up to `n_max`.
///
/// Covered: the inner-sum closed form and its squared expansion for all
/// `2 <= j <= i <= n_max`; the six `j`-block identities and their combined
/// total for `2 <= i <= n_max`; the eleven `i`-block identities, the
/// `Σ F_i²F_{i-1}²` identity, the double-sum and diagonal totals, the four-row
/// expansion and the final closed form for `2 <= n <= n_max`. The four row
/// simplifications are checked separately by [`verify_row_simplifications`].
pub fn verify_identity_suite(n_max: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    let names_pair = ["inner_sum_closed_form", "inner_sum_square_expansion"];
    let names_tail = [
        "sum_j_inner_sq_total",
        "sum_Fi_sq_Fim1_sq",
        "double_sum_total",
        "diagonal_part_total",
        "frobenius_row_expansion",
        "frobenius_closed_form",
    ];
    for name in names_pair.iter().chain(J_BLOCK.iter()).chain(I_BLOCK.iter()).chain(names_tail.iter()) {
        report.outcomes.push(IdentityOutcome { name, checked: 0, first_failure: None });
    }
    if n_max < 2 {
        return report;
    }
    let cache = FibCache::with_len(4 * n_max + 4);
    let seq = Seq { cache: &cache };
    let n_max = n_max as i64;

    // inner[j] holds the inner sum for the current outer index i.
    let mut inner: Vec<ExactInt> = vec![ExactInt::zero(); n_max as usize + 1];
    let mut i_sums: [ExactInt; 11] = Default::default();
    let mut fib_sq_products = ExactInt::zero();
    let mut double_sum = ExactInt::zero();
    let mut diagonal = ExactInt::from(1);

    for i in 2..=n_max {
        for j in 2..i {
            inner[j as usize] += seq.fi(i - 1) * seq.fi(i - j);
        }
        inner[i as usize] = seq.fi(i - 1);

        let mut j_sums: [ExactInt; 6] = Default::default();
        let mut total = ExactInt::zero();
        for j in 2..=i {
            let value = &inner[j as usize];
            let at = IdentityIndex::Pair { i, j };
            report.record(names_pair[0], int_rat(value) == inner_sum_closed(&seq, i, j), at);
            let sq = value * value;
            report.record(names_pair[1], int_rat(&sq) == inner_square_closed(&seq, i, j), at);
            total += &sq;
            for (acc, term) in j_sums.iter_mut().zip(j_block_terms(&seq, i, j)) {
                *acc += term;
            }
        }
        let at = IdentityIndex::Single(i);
        for ((name, lhs), rhs) in J_BLOCK.iter().zip(&j_sums).zip(j_block_closed(&seq, i)) {
            report.record(name, int_rat(lhs) == rhs, at);
        }
        report.record(names_tail[0], int_rat(&total) == j_total_closed(&seq, i), at);

        // Outer-index identities, with n = i as the upper summation limit.
        let n = i;
        for (acc, term) in i_sums.iter_mut().zip(i_block_terms(&seq, n)) {
            *acc += term;
        }
        for ((name, lhs), rhs) in I_BLOCK.iter().zip(&i_sums).zip(i_block_closed(&seq, n)) {
            report.record(name, int_rat(lhs) == rhs, at);
        }
        let ff = seq.fi(n) * seq.fi(n - 1);
        fib_sq_products += &ff * &ff;
        report.record(names_tail[1], int_rat(&fib_sq_products) == fib_sq_products_closed(&seq, n), at);
        double_sum += &total;
        report.record(names_tail[2], int_rat(&double_sum) == double_sum_closed(&seq, n), at);
        let d = ff + 1;
        diagonal += &d * &d;
        report.record(names_tail[3], int_rat(&diagonal) == diagonal_part_closed(&seq, n), at);
        let frob = int_rat(&(&diagonal + &double_sum * 2));
        let rows: ExactRational = row_groups(&seq, n).into_iter().sum();
        report.record(names_tail[4], frob == rows, at);
        report.record(names_tail[5], frob == frobenius_closed(&cache, n), at);
    }
    report
}

/// Checks the four identities that collapse the row groups of the expanded
/// `‖Z_n‖_F²` into Lucas numbers, at index `n`.
pub fn verify_row_simplifications(n: usize) -> IdentityReport {
    let cache = FibCache::with_len(4 * n + 4);
    let seq = Seq { cache: &cache };
    let n = n as i64;
    let mut report = IdentityReport::default();
    let at = IdentityIndex::Single(n);
    for ((name, lhs), rhs) in ROWS.iter().zip(row_groups(&seq, n)).zip(row_groups_simplified(&seq, n)) {
        report.record(name, lhs == rhs, at);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_sum_small_cases() {
        assert_eq!(verify_inner_sum_identity(2, 2), Ok(true));
        assert_eq!(verify_inner_sum_identity(5, 3), Ok(true));
        assert_eq!(verify_inner_sum_identity(300, 2), Ok(true));
    }

    #[test]
    fn inner_sum_empty_sum_value() {
        // i = j: the sum over k is empty and the left side is F_{j-1}.
        let cache = FibCache::with_len(10);
        let seq = Seq { cache: &cache };
        assert_eq!(inner_sum_direct(&seq, 2, 2), ExactInt::from(1));
        assert_eq!(inner_sum_closed(&seq, 2, 2), rat(1, 1));
        // i=5, j=3: F_2 + F_3F_1 + F_4F_2 = 1 + 2 + 3 = 6
        assert_eq!(inner_sum_direct(&seq, 5, 3), ExactInt::from(6));
    }

    #[test]
    fn inner_sum_rejects_bad_order() {
        assert_eq!(verify_inner_sum_identity(3, 4), Err(ExactError::IndexOrder { i: 3, j: 4 }));
        assert_eq!(verify_inner_sum_identity(3, 1), Err(ExactError::IndexOrder { i: 3, j: 1 }));
    }

    #[test]
    fn suite_at_two() {
        let report = verify_identity_suite(2);
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert!(report.outcomes.iter().all(|o| o.checked >= 1));
    }

    #[test]
    fn fjm1_squares_at_four() {
        // 1 + 1 + 4 = 6 = F_3 F_4
        let direct: i64 = [1i64, 1, 2].iter().map(|f| f * f).sum();
        assert_eq!(direct, 6);
        let cache = FibCache::with_len(20);
        let seq = Seq { cache: &cache };
        assert_eq!(j_block_closed(&seq, 4)[3], rat(6, 1));
        let report = verify_identity_suite(4);
        assert_eq!(report.get("sum_j_Fjm1_sq").unwrap().checked, 3);
        assert!(report.get("sum_j_Fjm1_sq").unwrap().passed());
    }

    #[test]
    fn suite_detects_a_wrong_closed_form() {
        // Perturbing a closed form must surface as a failure at the first index.
        let cache = FibCache::with_len(40);
        let seq = Seq { cache: &cache };
        let lhs: ExactInt = (2..=5i64).map(|i| seq.fi(2 * i - 1)).sum();
        assert_eq!(int_rat(&lhs), i_block_closed(&seq, 5)[3]);
        assert_ne!(int_rat(&lhs), i_block_closed(&seq, 5)[3].clone() + rat(1, 25));
    }

    #[test]
    fn row_simplifications_small() {
        for n in [1usize, 2, 3, 7, 100] {
            let report = verify_row_simplifications(n);
            assert_eq!(report.outcomes.len(), 4);
            assert!(report.all_passed(), "n={n}: {:?}", report);
        }
        // n = 2: F_8/25 + 2F_7/25 = 21/25 + 26/25 = 47/25 = L_8/25
        let cache = FibCache::with_len(20);
        let seq = Seq { cache: &cache };
        assert_eq!(row_groups(&seq, 2)[0], rat(47, 25));
        assert_eq!(row_groups_simplified(&seq, 2)[0], rat(47, 25));
    }

    #[test]
    fn closed_form_small_values() {
        let cache = FibCache::with_len(20);
        assert_eq!(frobenius_closed(&cache, 1), rat(1, 1));
        assert_eq!(frobenius_closed(&cache, 2), rat(7, 1));
    }
}

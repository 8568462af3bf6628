//! Cardinality bounds on the feasible set of an F1 instance, and an
//! exhaustive counter for tiny instances.
//!
//! Upper bound: summing the degree constraints gives `Σ x_e <= c3` with
//! `c3 = floor(Σ b_i / 2)`, so at most `Σ_{k=1}^{c3} C(m, k)` nonempty
//! assignments exist over `m` candidate edges.
//!
//! Lower bound: with bounds sorted in decreasing order `f_(1) >= f_(2) >= ...`
//! and `η_i` the number of nodes whose bound is `i - 1`, take the largest
//! prefix `k` satisfying
//!
//! ```text
//! η_k + k + f_(k) <= n
//! f_(1) + ... + f_(k) <= Σ_i b_i / 2
//! ```
//!
//! and multiply `g_j = Σ_{r=1}^{f_(j) - j + 1} C(n - j - η_j, r)` over
//! `j = 1..=k`. The construction assumes every pair of nodes is admissible,
//! so on sparse candidate sets it is an estimate rather than a guarantee.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimizer::ProblemInstance;
use crate::scalar::Scalar;

/// Largest instance [`enumerate_solutions`] accepts.
pub const ENUMERATION_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    General,
    /// Every bound is zero: only the edgeless graph.
    AllZero,
    /// Every bound is one: maximum matchings of the complete graph.
    AllOne,
    /// The product stopped before `k_star` factors.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub c3: usize,
    pub m_ones: usize,
    #[serde(serialize_with = "as_decimal")]
    pub c2_upper: BigUint,
    pub k_star: usize,
    pub eta: Vec<usize>,
    #[serde(serialize_with = "as_decimal_seq")]
    pub g: Vec<BigUint>,
    #[serde(serialize_with = "as_decimal")]
    pub c1_lower: BigUint,
    pub special_case: SpecialCase,
    /// Exact count of nonempty feasible assignments, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<u64>,
    /// Set when the enumerated count falls outside `[c1_lower, c2_upper]`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub discrepancies: Vec<String>,
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

fn as_decimal_seq<S: serde::Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_str_radix(10))?;
    }
    seq.end()
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `Σ_{r=1}^{upper} C(pool, r)`.
fn partial_binomial_sum(pool: usize, upper: usize) -> BigUint {
    (1..=upper.min(pool)).map(|r| binomial(pool, r)).sum()
}

fn c3_of<T: Scalar>(p: &ProblemInstance<T>) -> usize {
    p.degree_bound().iter().sum::<usize>() / 2
}

/// Upper bound `C2 = Σ_{k=1}^{c3} C(m, k)`.
pub fn count_upper_bound<T: Scalar>(p: &ProblemInstance<T>) -> BigUint {
    let m = p.variables().len();
    let c3 = c3_of(p);
    if c3 >= m {
        return (BigUint::one() << m) - BigUint::one();
    }
    partial_binomial_sum(m, c3)
}

/// `η_i` for `i = 1..=max_bound + 1`.
fn eta_counts(bounds: &[usize]) -> Vec<usize> {
    let top = bounds.iter().copied().max().unwrap_or(0);
    let mut eta = vec![0; top + 1];
    for &b in bounds {
        eta[b] += 1;
    }
    eta
}

struct LowerBound {
    k_star: usize,
    eta: Vec<usize>,
    g: Vec<BigUint>,
    c1: BigUint,
    case: SpecialCase,
}

fn lower_bound_parts<T: Scalar>(p: &ProblemInstance<T>) -> LowerBound {
    let n = p.n();
    let bounds = p.degree_bound();
    let eta = eta_counts(bounds);
    let eta_at = |i: usize| eta.get(i - 1).copied().unwrap_or(0);
    let mut sorted = bounds.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let total: usize = bounds.iter().sum();

    let fits_nodes = |k: usize| eta_at(k) + k + sorted[k - 1] <= n;
    let fits_edges = |k: usize| 2 * sorted[..k].iter().sum::<usize>() <= total;
    let mut k_star = 0;
    while k_star < n && fits_nodes(k_star + 1) && fits_edges(k_star + 1) {
        k_star += 1;
    }

    // g_j; the sum limit f_(j) - j + 1 and the pool n - j - η_j may run out
    let g_at = |j: usize| -> Option<BigUint> {
        let upper = (sorted[j - 1] + 1).checked_sub(j).filter(|&u| u > 0)?;
        let pool = n.checked_sub(j + eta_at(j))?;
        Some(partial_binomial_sum(pool, upper)).filter(|g| !g.is_zero())
    };

    if n == 0 || bounds.iter().all(|&b| b == 0) {
        return LowerBound {
            k_star,
            eta,
            g: Vec::new(),
            c1: BigUint::one(),
            case: SpecialCase::AllZero,
        };
    }
    if bounds.iter().all(|&b| b == 1) {
        // C(n,2) C(n-2,2) ... C(q,2) / floor(n/2)!, q = 2 or 3
        let pairs = n / 2;
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for r in 0..pairs {
            num *= binomial(n - 2 * r, 2);
            den *= r + 1;
        }
        return LowerBound {
            k_star,
            eta,
            g: Vec::new(),
            c1: num / den,
            case: SpecialCase::AllOne,
        };
    }
    if k_star == 0 {
        // no prefix qualifies: count the subsets around the top node alone
        return match g_at(1) {
            Some(g1) => LowerBound {
                k_star,
                eta,
                c1: g1.clone(),
                g: vec![g1],
                case: SpecialCase::Truncated,
            },
            None => LowerBound {
                k_star,
                eta,
                g: Vec::new(),
                c1: BigUint::one(),
                case: SpecialCase::Truncated,
            },
        };
    }

    let mut g = Vec::with_capacity(k_star);
    for j in 1..=k_star {
        match g_at(j) {
            Some(gj) => g.push(gj),
            None => break,
        }
    }
    let case = if g.len() == k_star {
        SpecialCase::General
    } else {
        SpecialCase::Truncated
    };
    let c1 = g.iter().fold(BigUint::one(), |acc, x| acc * x);
    LowerBound {
        k_star,
        eta,
        g,
        c1,
        case,
    }
}

/// Lower bound `C1`.
pub fn count_lower_bound<T: Scalar>(p: &ProblemInstance<T>) -> BigUint {
    lower_bound_parts(p).c1
}

/// Number of nonempty feasible assignments of `p`, by exhaustive search.
pub fn enumerate_solutions<T: Scalar>(p: &ProblemInstance<T>) -> Result<u64> {
    let vars = p.variables();
    if vars.len() > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            vars: vars.len(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let ends: Vec<(usize, usize)> = vars.iter().map(|v| (v.edge.0 - 1, v.edge.1 - 1)).collect();
    let mut residual = p.degree_bound().to_vec();
    let total = p.total_bound().unwrap_or(usize::MAX);

    fn count(pos: usize, ends: &[(usize, usize)], residual: &mut [usize], left: usize) -> u64 {
        if pos == ends.len() {
            return 1;
        }
        let mut c = count(pos + 1, ends, residual, left);
        let (a, b) = ends[pos];
        if left > 0 && residual[a] > 0 && residual[b] > 0 {
            residual[a] -= 1;
            residual[b] -= 1;
            c += count(pos + 1, ends, residual, left - 1);
            residual[a] += 1;
            residual[b] += 1;
        }
        c
    }
    // drop the empty assignment
    Ok(count(0, &ends, &mut residual, total) - 1)
}

/// All bounds for `p`; with `enumerate`, also the exact count and any
/// disagreement with the bounds.
pub fn bounds_report<T: Scalar>(p: &ProblemInstance<T>, enumerate: bool) -> Result<BoundsReport> {
    let lb = lower_bound_parts(p);
    let c2_upper = count_upper_bound(p);
    let mut report = BoundsReport {
        n: p.n(),
        c3: c3_of(p),
        m_ones: p.variables().len(),
        c2_upper,
        k_star: lb.k_star,
        eta: lb.eta,
        g: lb.g,
        c1_lower: lb.c1,
        special_case: lb.case,
        enumerated: None,
        discrepancies: Vec::new(),
    };
    if enumerate {
        let count = enumerate_solutions(p)?;
        let exact = BigUint::from(count);
        if exact > report.c2_upper {
            report
                .discrepancies
                .push(format!("upper bound {} below exact count {count}", report.c2_upper));
        }
        if exact < report.c1_lower {
            report
                .discrepancies
                .push(format!("lower bound {} above exact count {count}", report.c1_lower));
        }
        report.enumerated = Some(count);
    }
    Ok(report)
}

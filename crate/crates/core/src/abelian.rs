//! Abelianization: relation matrices, Smith normal form and the two
//! homological tests built on the first homology group.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::presentation::Presentation;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.as_ref().len(), cols, "ragged row");
            for (j, &v) in r.as_ref().iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * q;
            self.entries[dst * self.cols + j] -= v;
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * q;
            self.entries[i * self.cols + dst] -= v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Invariant factors `d1 | d2 | ... ` of a finitely generated abelian group,
/// with 1s dropped and zeros (free summands) last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct InvariantFactors {
    factors: Vec<BigInt>,
}

impl InvariantFactors {
    /// Canonicalizes an arbitrary list of cyclic orders that already forms a
    /// divisibility chain (as SNF produces).
    pub fn from_diagonal<I: IntoIterator<Item = BigInt>>(diag: I) -> Self {
        let mut nonzero: Vec<BigInt> = Vec::new();
        let mut zeros = 0;
        for d in diag {
            let d = d.abs();
            if d.is_zero() {
                zeros += 1;
            } else if !d.is_one() {
                nonzero.push(d);
            }
        }
        nonzero.sort();
        nonzero.extend(std::iter::repeat_n(BigInt::zero(), zeros));
        InvariantFactors { factors: nonzero }
    }

    pub fn from_u64s(v: &[u64]) -> Self {
        InvariantFactors::from_diagonal(v.iter().map(|&x| BigInt::from(x)))
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            None
        } else {
            Some(self.factors.iter().product())
        }
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if d.is_zero() {
                f.write_str("Z")?;
            } else {
                write!(f, "Z/{d}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for InvariantFactors {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.factors.len()))?;
        for d in &self.factors {
            match d.to_u64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&d.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for InvariantFactors {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Num(u64),
            Text(String),
        }
        let raw = Vec::<Entry>::deserialize(d)?;
        let mut vals = Vec::with_capacity(raw.len());
        for e in raw {
            vals.push(match e {
                Entry::Num(v) => BigInt::from(v),
                Entry::Text(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom)?,
            });
        }
        Ok(InvariantFactors::from_diagonal(vals))
    }
}

/// One row per relator, one column per generator, entries are exponent sums.
pub fn relation_matrix(p: &Presentation) -> IntMatrix {
    let n = p.generator_count();
    let mut m = IntMatrix::zeros(p.relators().len(), n);
    for (i, r) in p.relators().iter().enumerate() {
        for s in r.syllables() {
            m[(i, s.gen)] += s.exp;
        }
    }
    m
}

/// Position of the smallest nonzero |entry| in the lower-right block starting
/// at `t`; ties go to the lowest row, then lowest column.
fn smallest_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m[(bi, bj)].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Invariant factors of the cokernel of the map whose rows are the relations,
/// i.e. of `Z^cols / rowspace(m)`.
pub fn smith_normal_form(m: &IntMatrix) -> InvariantFactors {
    let mut a = m.clone();
    let rank_bound = a.rows.min(a.cols);
    let mut diag: Vec<BigInt> = Vec::with_capacity(a.cols);
    let mut t = 0;
    while t < rank_bound {
        let Some((pi, pj)) = smallest_pivot(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..a.rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                a.row_sub(i, t, &q);
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..a.cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                a.col_sub(j, t, &q);
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder is now smaller than the pivot; move it in
                let (pi, pj) = smallest_pivot_in_cross(&a, t);
                a.swap_rows(t, pi);
                a.swap_cols(t, pj);
                continue;
            }
            // row and column cleared; enforce divisibility of the rest
            let piv = a[(t, t)].clone();
            let bad =
                (t + 1..a.rows).find(|&i| (t + 1..a.cols).any(|j| !a[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    a.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
        diag.push(a[(t, t)].abs());
        t += 1;
    }
    diag.extend(std::iter::repeat_n(BigInt::zero(), a.cols - diag.len()));
    InvariantFactors::from_diagonal(diag)
}

/// Smallest nonzero |entry| among row `t` and column `t`.
fn smallest_pivot_in_cross(m: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_val: Option<BigInt> = None;
    let cand = (t..m.rows)
        .map(|i| (i, t))
        .chain((t + 1..m.cols).map(|j| (t, j)));
    for (i, j) in cand {
        let v = m[(i, j)].abs();
        if v.is_zero() {
            continue;
        }
        if best_val.as_ref().is_none_or(|b| v < *b) {
            best = (i, j);
            best_val = Some(v);
        }
    }
    best
}

pub fn h1_invariants(p: &Presentation) -> InvariantFactors {
    smith_normal_form(&relation_matrix(p))
}

/// Whether the group surjects onto Z/2, i.e. some factor is zero or even.
pub fn surjects_onto_z2(f: &InvariantFactors) -> bool {
    f.factors().iter().any(|d| d.is_even())
}

/// Whether the group is finite of odd order (the trivial group counts).
pub fn is_finite_odd(f: &InvariantFactors) -> bool {
    f.factors().iter().all(|d| !d.is_zero() && d.is_odd())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;
    use proptest::prelude::*;

    fn inv(v: &[u64]) -> InvariantFactors {
        InvariantFactors::from_u64s(v)
    }

    /// Determinantal-divisor oracle: d_k = gcd of all k x k minors, invariant
    /// factors are d_k / d_(k-1). Exponential, for tiny matrices only.
    fn determinantal_oracle(rows: &[Vec<i64>], cols: usize) -> InvariantFactors {
        fn det(m: &[Vec<i64>]) -> i64 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|&(c, _)| c != j)
                                .map(|(_, &v)| v)
                                .collect()
                        })
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * m[0][j] * det(&minor)
                })
                .sum()
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..(1 << n))
                .filter(|s| s.count_ones() as usize == k)
                .map(|s| (0..n).filter(|&i| s & (1 << i) != 0).collect())
                .collect()
        }
        let r = rows.len();
        let mut prev = 1i64;
        let mut diag = Vec::new();
        for k in 1..=r.min(cols) {
            let mut g = 0i64;
            for rs in subsets(r, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<i64>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| rows[i][j]).collect())
                        .collect();
                    g = g.gcd(&det(&sub));
                }
            }
            if g == 0 {
                break;
            }
            diag.push(BigInt::from(g / prev));
            prev = g;
        }
        let rank = diag.len();
        diag.extend(std::iter::repeat_n(BigInt::zero(), cols - rank));
        InvariantFactors::from_diagonal(diag)
    }

    #[test]
    fn relation_matrix_of_klein_bottle_and_prism() {
        let k: Presentation = "< d, e | d e d^-1 e >".parse().unwrap();
        assert_eq!(relation_matrix(&k), IntMatrix::from_rows(2, &[[0, 2]]));
        let p: Presentation = "< d, e | d e d^-1 e, d^2 e^-1 >".parse().unwrap();
        assert_eq!(
            relation_matrix(&p),
            IntMatrix::from_rows(2, &[[0, 2], [2, -1]])
        );
        let f: Presentation = "< a, b | >".parse().unwrap();
        let m = relation_matrix(&f);
        assert_eq!((m.rows(), m.cols()), (0, 2));
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_rows(2, &[[2, 0], [0, 3]]);
        assert_eq!(
            determinantal_oracle(&[vec![2, 0], vec![0, 3]], 2),
            inv(&[6])
        );
        assert_eq!(smith_normal_form(&m), inv(&[6]));

        let m = IntMatrix::from_rows(2, &[[0, 2], [2, -1]]);
        assert_eq!(
            determinantal_oracle(&[vec![0, 2], vec![2, -1]], 2),
            inv(&[4])
        );
        assert_eq!(smith_normal_form(&m), inv(&[4]));

        assert_eq!(smith_normal_form(&IntMatrix::zeros(0, 2)), inv(&[0, 0]));
    }

    #[test]
    fn h1_examples() {
        let c5: Presentation = "< a | a^5 >".parse().unwrap();
        assert_eq!(h1_invariants(&c5), inv(&[5]));
        let k: Presentation = "< d, e | d e d^-1 e >".parse().unwrap();
        assert_eq!(h1_invariants(&k), inv(&[2, 0]));
        let bin_i: Presentation = "< s, t | s^5 = t^3 = (s t)^2 >".parse().unwrap();
        assert!(h1_invariants(&bin_i).is_trivial());
    }

    #[test]
    fn z2_and_odd_tests() {
        assert!(surjects_onto_z2(&inv(&[4])));
        assert!(!surjects_onto_z2(&inv(&[3])));
        assert!(surjects_onto_z2(&inv(&[0])));
        assert!(is_finite_odd(&inv(&[])));
        assert!(!is_finite_odd(&inv(&[2, 0])));
        assert!(is_finite_odd(&inv(&[3, 9])));
    }

    #[test]
    fn json_is_integer_array() {
        let f = inv(&[2, 0]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[2,0]");
        let back: InvariantFactors = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn large_entries_stay_exact() {
        let big = BigInt::from(u64::MAX) * BigInt::from(3u8);
        let m = IntMatrix::new(1, 1, vec![big.clone()]).unwrap();
        let f = smith_normal_form(&m);
        assert_eq!(f.factors(), &[big]);
        assert!(serde_json::to_string(&f).unwrap().contains('"'));
    }

    #[test]
    fn prism_h1_has_order_four_beta() {
        for beta in 1i64..=20 {
            for alpha in -20i64..=20 {
                if alpha == 0 || alpha.gcd(&beta) != 1 {
                    continue;
                }
                let p = Presentation::new(
                    vec!["a", "b"],
                    vec![
                        Word::from_runs(&[(0, 1), (1, 1), (0, -1), (1, 1)]),
                        Word::from_runs(&[(0, 2 * beta), (1, -alpha)]),
                    ],
                )
                .unwrap();
                let f = h1_invariants(&p);
                assert_eq!(
                    f.order(),
                    Some(BigInt::from(4 * beta)),
                    "alpha={alpha} beta={beta}"
                );
                assert!(surjects_onto_z2(&f));
            }
        }
    }

    fn small_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (1usize..=3, 0usize..=3).prop_flat_map(|(c, r)| {
            (
                Just(c),
                prop::collection::vec(prop::collection::vec(-6i64..=6, c), r),
            )
        })
    }

    proptest! {
        #[test]
        fn snf_matches_determinantal_divisors((cols, rows) in small_matrix()) {
            let m = IntMatrix::from_rows(cols, &rows);
            let f = smith_normal_form(&m);
            prop_assert_eq!(&f, &determinantal_oracle(&rows, cols));
            let nz: Vec<&BigInt> = f.factors().iter().filter(|d| !d.is_zero()).collect();
            for w in nz.windows(2) {
                prop_assert!(w[1].is_multiple_of(w[0]));
            }
        }

        #[test]
        fn exactly_one_parity_outcome(v in prop::collection::vec(0u64..12, 0..4)) {
            let f = InvariantFactors::from_u64s(&v);
            prop_assert!(surjects_onto_z2(&f) != is_finite_odd(&f));
        }
    }
}

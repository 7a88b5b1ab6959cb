//! Todd-Coxeter coset enumeration (HLT strategy) and what it gives us:
//! group orders, word equality in finite groups and permutation
//! representations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};
use crate::presentation::Presentation;
use crate::word::Word;

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

/// Upper bound on the number of cosets an enumeration may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumLimit {
    max_cosets: usize,
}

impl EnumLimit {
    pub fn new(max_cosets: usize) -> Result<Self> {
        if max_cosets == 0 {
            return Err(Error::Malformed("coset limit must be positive".into()));
        }
        Ok(EnumLimit { max_cosets })
    }

    pub fn max_cosets(self) -> usize {
        self.max_cosets
    }
}

impl Default for EnumLimit {
    fn default() -> Self {
        EnumLimit {
            max_cosets: DEFAULT_MAX_COSETS,
        }
    }
}

const NONE: u32 = u32::MAX;

/// Column of a letter: generator `g` is column `2g`, its inverse `2g + 1`.
fn column(g: usize, positive: bool) -> usize {
    2 * g + usize::from(!positive)
}

fn columns_of(w: &Word) -> Vec<usize> {
    w.letters().map(|(g, pos)| column(g, pos)).collect()
}

struct Enumerator {
    width: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    max: usize,
}

impl Enumerator {
    fn new(width: usize, max: usize) -> Self {
        Enumerator {
            width,
            table: vec![NONE; width],
            parent: vec![0],
            queue: Vec::new(),
            max,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.width + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.width + x] = v;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> bool {
        if self.len() >= self.max {
            return false;
        }
        let n = self.len() as u32;
        self.parent.push(n);
        self.table.extend(std::iter::repeat_n(NONE, self.width));
        self.set(c, x, n);
        self.set(n, x ^ 1, c);
        true
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != root {
            let next = self.parent[k as usize];
            self.parent[k as usize] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for x in 0..self.width {
                let d = self.get(dead, x);
                if d == NONE {
                    continue;
                }
                if self.get(d, x ^ 1) == dead {
                    self.set(d, x ^ 1, NONE);
                }
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                if mu_x != NONE {
                    self.merge(nu, mu_x);
                } else {
                    let nu_inv = self.get(nu, x ^ 1);
                    if nu_inv != NONE {
                        self.merge(mu, nu_inv);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
    }

    /// Scans `w` at coset `c`, defining new cosets as needed. Returns false
    /// when the coset limit is hit.
    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> bool {
        if w.is_empty() {
            return true;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i as isize && self.get(b, w[j as usize] ^ 1) != NONE {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return true;
            } else if j == i as isize {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return true;
            } else if !self.define(f, w[i]) {
                return false;
            }
        }
    }
}

/// Result of a coset enumeration. When complete, row 0 is the subgroup coset
/// and every column is a permutation of the rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    #[serde(serialize_with = "serialize_pres")]
    presentation: Presentation,
    /// `rows[c][2g]` is `c·g`, `rows[c][2g+1]` is `c·g^-1`.
    rows: Vec<Vec<Option<u32>>>,
    complete: bool,
}

fn serialize_pres<S: serde::Serializer>(
    p: &Presentation,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

impl CosetTable {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn coset_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Option<u32>>] {
        &self.rows
    }

    /// Image of coset `c` under `w`, if every step is defined.
    pub fn trace(&self, c: usize, w: &Word) -> Option<usize> {
        let mut cur = c;
        for (g, pos) in w.letters() {
            cur = self.rows.get(cur)?.get(column(g, pos)).copied().flatten()? as usize;
        }
        Some(cur)
    }

    /// Whether `w` fixes coset 0. For a complete table over the trivial
    /// subgroup this is exactly `w == 1` in the group.
    pub fn represents_identity(&self, w: &Word) -> Result<bool> {
        if !self.complete {
            return Err(Error::IncompleteTable);
        }
        if w.max_gen()
            .is_some_and(|g| g >= self.presentation.generator_count())
        {
            return Err(Error::Malformed("word uses an unknown generator".into()));
        }
        Ok(self.trace(0, w) == Some(0))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("coset table serializes")
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup_gens`.
///
/// If the limit is reached the returned table is marked incomplete; that only
/// means the enumeration gave up, not that the index is infinite.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup_gens: &[Word],
    limit: EnumLimit,
) -> Result<CosetTable> {
    let ngens = p.generator_count();
    for w in subgroup_gens {
        if w.max_gen().is_some_and(|g| g >= ngens) {
            return Err(Error::Malformed(
                "subgroup generator uses an unknown generator".into(),
            ));
        }
    }
    let width = 2 * ngens;
    let relators: Vec<Vec<usize>> = p.relators().iter().map(columns_of).collect();
    let mut e = Enumerator::new(width, limit.max_cosets());
    let mut complete = true;

    'run: {
        for w in subgroup_gens {
            if !e.scan_and_fill(0, &columns_of(w)) {
                complete = false;
                break 'run;
            }
        }
        let mut c = 0u32;
        while (c as usize) < e.len() {
            for r in &relators {
                if !e.alive(c) {
                    break;
                }
                if !e.scan_and_fill(c, r) {
                    complete = false;
                    break 'run;
                }
            }
            if e.alive(c) {
                for x in 0..width {
                    if e.get(c, x) == NONE && !e.define(c, x) {
                        complete = false;
                        break 'run;
                    }
                }
            }
            c += 1;
        }
    }

    // compact to live cosets, keeping their relative order
    let mut new_index = vec![NONE; e.len()];
    let mut live = Vec::new();
    for c in 0..e.len() as u32 {
        if e.alive(c) {
            new_index[c as usize] = live.len() as u32;
            live.push(c);
        }
    }
    let rows = live
        .iter()
        .map(|&c| {
            (0..width)
                .map(|x| {
                    let v = e.get(c, x);
                    if v == NONE {
                        return None;
                    }
                    let r = e.rep(v);
                    Some(new_index[r as usize])
                })
                .collect()
        })
        .collect();
    Ok(CosetTable {
        presentation: p.clone(),
        rows,
        complete,
    })
}

/// Order of the group, `None` when the enumeration hits the limit.
pub fn group_order(p: &Presentation, limit: EnumLimit) -> Result<Option<u64>> {
    let t = todd_coxeter(p, &[], limit)?;
    Ok(t.is_complete().then_some(t.coset_count() as u64))
}

/// Decides `u == v` in a finite group; `None` when enumeration gives up.
pub fn words_equal(p: &Presentation, u: &Word, v: &Word, limit: EnumLimit) -> Result<Option<bool>> {
    let t = todd_coxeter(p, &[], limit)?;
    if !t.is_complete() {
        return Ok(None);
    }
    t.represents_identity(&u.mul(&v.inverse())).map(Some)
}

/// Action of the generators on the cosets of a complete table.
pub fn perm_rep(t: &CosetTable) -> Result<PermGroup> {
    if !t.is_complete() {
        return Err(Error::IncompleteTable);
    }
    let n = t.coset_count();
    let gens = (0..t.presentation.generator_count())
        .map(|g| {
            let images: Vec<u32> = (0..n)
                .map(|c| t.rows[c][column(g, true)].expect("complete table"))
                .collect();
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(n, gens)
}

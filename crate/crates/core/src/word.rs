//! Words in a free group, stored as runs of a single generator.

use std::fmt;

/// One run `g^e` of a word. `exp` is never zero inside a reduced [`Word`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: usize, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// A freely reduced word. Adjacent syllables always have distinct generators,
/// so two words are equal in the free group iff they are equal as values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

/// Freely reduces an arbitrary run sequence.
pub fn free_reduce<I>(runs: I) -> Word
where
    I: IntoIterator<Item = Syllable>,
{
    let mut out: Vec<Syllable> = Vec::new();
    for s in runs {
        if s.exp == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.gen == s.gen => {
                last.exp = last.exp.checked_add(s.exp).expect("exponent overflow");
                if last.exp == 0 {
                    out.pop();
                }
            }
            _ => out.push(s),
        }
    }
    Word { syllables: out }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn gen(g: usize) -> Self {
        Word::power_of(g, 1)
    }

    pub fn power_of(g: usize, exp: i64) -> Self {
        free_reduce([Syllable::new(g, exp)])
    }

    pub fn from_runs(runs: &[(usize, i64)]) -> Self {
        free_reduce(runs.iter().map(|&(g, e)| Syllable::new(g, e)))
    }

    /// Builds a word from signed letters, `(g, true)` meaning `g` and
    /// `(g, false)` meaning `g^-1`.
    pub fn from_letters<I: IntoIterator<Item = (usize, bool)>>(letters: I) -> Self {
        free_reduce(
            letters
                .into_iter()
                .map(|(g, pos)| Syllable::new(g, if pos { 1 } else { -1 })),
        )
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter length, i.e. the sum of absolute exponents.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.syllables.iter().map(|s| s.gen).max()
    }

    pub fn mentions(&self, g: usize) -> bool {
        self.syllables.iter().any(|s| s.gen == g)
    }

    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.syllables
            .iter()
            .filter(|s| s.gen == g)
            .map(|s| s.exp)
            .sum()
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.gen, -s.exp))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        free_reduce(self.syllables.iter().chain(other.syllables.iter()).copied())
    }

    /// Iterates the word letter by letter as `(generator, positive?)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.syllables
            .iter()
            .flat_map(|s| std::iter::repeat_n((s.gen, s.exp > 0), s.exp.unsigned_abs() as usize))
    }

    /// Splits `self` as `c · core · c^-1` with `core` cyclically reduced.
    pub fn cyclic_split(&self) -> (Word, Word) {
        let mut core: Vec<Syllable> = self.syllables.clone();
        let mut conj: Vec<Syllable> = Vec::new();
        while core.len() >= 2 {
            let first = core[0];
            let last = core[core.len() - 1];
            if first.gen != last.gen || (first.exp > 0) == (last.exp > 0) {
                break;
            }
            let m = first.exp.abs().min(last.exp.abs());
            let step = if first.exp > 0 { m } else { -m };
            conj.push(Syllable::new(first.gen, step));
            core[0].exp -= step;
            let n = core.len() - 1;
            core[n].exp += step;
            if core[n].exp == 0 {
                core.pop();
            }
            if core[0].exp == 0 {
                core.remove(0);
            }
        }
        (free_reduce(conj), Word { syllables: core })
    }

    pub fn cyclic_reduce(&self) -> Word {
        self.cyclic_split().1
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.cyclic_reduce() == *self
    }

    pub fn pow(&self, n: i64) -> Word {
        if n == 0 || self.is_identity() {
            return Word::identity();
        }
        let (conj, core) = self.cyclic_split();
        let base = if n > 0 { core } else { core.inverse() };
        let reps = n.unsigned_abs();
        let middle = if base.syllables.len() == 1 {
            let s = base.syllables[0];
            Word::power_of(
                s.gen,
                s.exp.checked_mul(reps as i64).expect("exponent overflow"),
            )
        } else {
            let mut runs = Vec::with_capacity(base.syllables.len() * reps as usize);
            for _ in 0..reps {
                runs.extend_from_slice(&base.syllables);
            }
            free_reduce(runs)
        };
        conj.mul(&middle).mul(&conj.inverse())
    }

    /// Replaces generator `g` by `images[g]` and freely reduces.
    pub fn substitute(&self, images: &[Word]) -> Option<Word> {
        let mut runs = Vec::new();
        for s in &self.syllables {
            let img = images.get(s.gen)?.pow(s.exp);
            runs.extend_from_slice(&img.syllables);
        }
        Some(free_reduce(runs))
    }

    /// Renumbers generators through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Word {
        free_reduce(
            self.syllables
                .iter()
                .map(|s| Syllable::new(map(s.gen), s.exp)),
        )
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a, S> {
    word: &'a Word,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (i, s) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match self.names.get(s.gen) {
                Some(n) => f.write_str(n.as_ref())?,
                None => write!(f, "g{}", s.gen)?,
            }
            if s.exp != 1 {
                write!(f, "^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

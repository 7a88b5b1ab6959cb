//! Finite presentations, homomorphisms between them, and Tietze moves.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::Word;

/// A finite presentation `< generators | relators >`.
///
/// Relators are stored freely and cyclically reduced with trivial relators
/// dropped; every constructor normalizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new<S: Into<String>>(names: Vec<S>, relators: Vec<Word>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !is_identifier(n) {
                return Err(Error::Malformed(format!("`{n}` is not a generator name")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateGenerator(n.clone()));
            }
        }
        for r in &relators {
            if let Some(g) = r.max_gen() {
                if g >= names.len() {
                    return Err(Error::Malformed(format!(
                        "relator uses generator index {g} but only {} generators exist",
                        names.len()
                    )));
                }
            }
        }
        let relators = relators
            .iter()
            .map(Word::cyclic_reduce)
            .filter(|w| !w.is_identity())
            .collect();
        Ok(Presentation { names, relators })
    }

    /// The free group on the given names.
    pub fn free<S: Into<String>>(names: Vec<S>) -> Result<Self> {
        Presentation::new(names, Vec::new())
    }

    pub fn trivial() -> Self {
        Presentation {
            names: Vec::new(),
            relators: Vec::new(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn word_string(&self, w: &Word) -> String {
        w.display(&self.names).to_string()
    }

    /// Parses a word over this presentation's generators, e.g. `d^2 e^-1`.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        crate::parse::parse_word(text, &self.names)
    }

    /// Returns a copy with `extra` appended to the relators.
    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut rels = self.relators.clone();
        rels.extend(extra);
        Presentation::new(self.names.clone(), rels)
    }

    /// Adds a generator commuting with every existing generator and of the
    /// given order.
    pub fn with_central_cyclic(&self, name: &str, order: u64) -> Result<Self> {
        let c = self.names.len();
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut rels = self.relators.clone();
        rels.push(Word::power_of(c, order as i64));
        for g in 0..c {
            rels.push(Word::from_runs(&[(c, 1), (g, 1), (c, -1), (g, -1)]));
        }
        Presentation::new(names, rels)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        if !self.names.is_empty() {
            write!(f, " {}", self.names.join(", "))?;
        }
        f.write_str(" |")?;
        for (i, r) in self.relators.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{}", r.display(&self.names))?;
        }
        f.write_str(" >")
    }
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_presentation(s)
    }
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Presentation,
    target: Presentation,
    images: Vec<Word>,
}

impl GroupHom {
    pub fn new(source: Presentation, target: Presentation, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.generator_count() {
            return Err(Error::Malformed(format!(
                "{} images given for {} source generators",
                images.len(),
                source.generator_count()
            )));
        }
        for w in &images {
            if let Some(g) = w.max_gen() {
                if g >= target.generator_count() {
                    return Err(Error::Malformed(format!(
                        "image uses generator index {g} outside the target"
                    )));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(p: &Presentation) -> Self {
        let images = (0..p.generator_count()).map(Word::gen).collect();
        GroupHom {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.substitute(&self.images).ok_or_else(|| {
            Error::Malformed("word uses a generator outside the homomorphism's source".into())
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.target != next.source {
            return Err(Error::MismatchedSources);
        }
        let images = self
            .images
            .iter()
            .map(|w| next.apply(w))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(self.source.clone(), next.target.clone(), images)
    }

    /// Checks that every source relator maps to the identity of the target.
    /// Needs the target to be finite; `None` means the enumeration gave up.
    pub fn preserves_relators(&self, limit: crate::coset::EnumLimit) -> Result<Option<bool>> {
        let table = crate::coset::todd_coxeter(&self.target, &[], limit)?;
        if !table.is_complete() {
            return Ok(None);
        }
        for r in self.source.relators() {
            let img = self.apply(r)?;
            if !table.represents_identity(&img)? {
                return Ok(Some(false));
            }
        }
        Ok(Some(true))
    }
}

/// Substitutes `expr` for generator `gen` in every relator and drops `gen`.
///
/// The caller is responsible for `gen = expr` holding in the group; this only
/// performs the rewriting.
pub fn tietze_eliminate(p: &Presentation, gen: usize, expr: &Word) -> Result<Presentation> {
    if gen >= p.generator_count() {
        return Err(Error::Malformed(format!("no generator with index {gen}")));
    }
    if expr.mentions(gen) {
        return Err(Error::InvalidElimination(gen));
    }
    if let Some(g) = expr.max_gen() {
        if g >= p.generator_count() {
            return Err(Error::Malformed(format!("no generator with index {g}")));
        }
    }
    let shift = |g: usize| if g > gen { g - 1 } else { g };
    let images: Vec<Word> = (0..p.generator_count())
        .map(|g| {
            if g == gen {
                expr.relabel(shift)
            } else {
                Word::gen(shift(g))
            }
        })
        .collect();
    let relators = p
        .relators()
        .iter()
        .map(|r| r.substitute(&images).expect("images cover every generator"))
        .collect();
    let names = p
        .names()
        .iter()
        .enumerate()
        .filter(|&(g, _)| g != gen)
        .map(|(_, n)| n.clone())
        .collect();
    Presentation::new(names, relators)
}

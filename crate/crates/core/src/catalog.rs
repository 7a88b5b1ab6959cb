//! Fundamental groups of spherical space forms in dimension three: cyclic
//! (lens space) groups, prism groups, the binary polyhedral groups, and
//! their products with a cyclic group of coprime order.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::quaternion::{realizations, Quaternion};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    /// Z/m acting as on the lens space L(m, q).
    Cyclic {
        m: u64,
        q: u64,
    },
    /// `< a, b | a b a^-1 b, a^(2 beta) = b^alpha >`
    Prism {
        alpha: i64,
        beta: u64,
    },
    BinT,
    BinO,
    BinI,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpaceFormDescriptor {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default = "one")]
    pub cofactor: u64,
}

impl SpaceFormDescriptor {
    pub fn new(family: Family, cofactor: u64) -> Result<Self> {
        let d = SpaceFormDescriptor { family, cofactor };
        d.validate()?;
        Ok(d)
    }

    pub fn cyclic(m: u64, q: u64) -> Result<Self> {
        SpaceFormDescriptor::new(Family::Cyclic { m, q }, 1)
    }

    pub fn prism(alpha: i64, beta: u64) -> Result<Self> {
        SpaceFormDescriptor::new(Family::Prism { alpha, beta }, 1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        match self.family {
            Family::Cyclic { m, q } => {
                if m == 0 {
                    return bad("cyclic order must be positive".into());
                }
                if m.gcd(&q) != 1 {
                    return bad(format!("gcd({m}, {q}) must be 1"));
                }
            }
            Family::Prism { alpha, beta } => {
                if beta == 0 || alpha == 0 {
                    return bad("prism parameters must be nonzero".into());
                }
                if alpha.unsigned_abs().gcd(&beta) != 1 {
                    return bad(format!("gcd({alpha}, {beta}) must be 1"));
                }
            }
            _ => {}
        }
        if self.cofactor == 0 {
            return bad("cofactor must be positive".into());
        }
        let base = self.base_order();
        if self.cofactor.gcd(&base) != 1 {
            return bad(format!(
                "cofactor {} is not coprime to the base order {base}",
                self.cofactor
            ));
        }
        Ok(())
    }

    /// Order of the base group, before the cyclic cofactor.
    pub fn base_order(&self) -> u64 {
        match self.family {
            Family::Cyclic { m, .. } => m,
            Family::Prism { alpha, beta } => 4 * alpha.unsigned_abs() * beta,
            Family::BinT => 24,
            Family::BinO => 48,
            Family::BinI => 120,
        }
    }

    pub fn order(&self) -> u64 {
        self.base_order() * self.cofactor
    }

    pub fn is_binary_polyhedral(&self) -> bool {
        matches!(self.family, Family::BinT | Family::BinO | Family::BinI)
    }
}

impl fmt::Display for SpaceFormDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Cyclic { m, q } => write!(f, "Cyclic({m},{q})")?,
            Family::Prism { alpha, beta } => write!(f, "Prism({alpha},{beta})")?,
            Family::BinT => f.write_str("BinT")?,
            Family::BinO => f.write_str("BinO")?,
            Family::BinI => f.write_str("BinI")?,
        }
        if self.cofactor > 1 {
            write!(f, " x C{}", self.cofactor)?;
        }
        Ok(())
    }
}

fn prism_relators(alpha: i64, beta: i64) -> Vec<Word> {
    vec![
        Word::from_runs(&[(0, 1), (1, 1), (0, -1), (1, 1)]),
        Word::from_runs(&[(0, 2 * beta), (1, -alpha)]),
    ]
}

/// `< a, b | a b a^-1 b, a^(2 beta) b^-alpha >` for any signs of the parameters.
pub fn prism_presentation(alpha: i64, beta: i64) -> Presentation {
    Presentation::new(vec!["a", "b"], prism_relators(alpha, beta)).expect("valid by construction")
}

/// `< s, t | s^k = t^3 = (s t)^2 >`
pub fn binary_polyhedral_presentation(k: i64) -> Presentation {
    let st = Word::from_runs(&[(0, 1), (1, 1)]);
    let t3 = Word::power_of(1, 3);
    Presentation::new(
        vec!["s", "t"],
        vec![
            Word::power_of(0, k).mul(&t3.inverse()),
            t3.mul(&st.pow(2).inverse()),
        ],
    )
    .expect("valid by construction")
}

pub fn catalog_presentation(d: &SpaceFormDescriptor) -> Result<Presentation> {
    d.validate()?;
    let base = match d.family {
        Family::Cyclic { m, .. } => {
            Presentation::new(vec!["a"], vec![Word::power_of(0, m as i64)])?
        }
        Family::Prism { alpha, beta } => prism_presentation(alpha, beta as i64),
        Family::BinT => binary_polyhedral_presentation(3),
        Family::BinO => binary_polyhedral_presentation(4),
        Family::BinI => binary_polyhedral_presentation(5),
    };
    if d.cofactor > 1 {
        base.with_central_cyclic("c", d.cofactor)
    } else {
        Ok(base)
    }
}

/// Exact unit-quaternion generators for the base group, where its
/// coordinates lie in a quadratic field.
pub fn quaternion_realization(d: &SpaceFormDescriptor) -> Option<Vec<Quaternion>> {
    match d.family {
        Family::BinT => Some(realizations::binary_tetrahedral()),
        Family::BinO => Some(realizations::binary_octahedral()),
        Family::BinI => Some(realizations::binary_icosahedral()),
        Family::Prism { alpha, beta: 1 } if alpha > 0 => {
            realizations::binary_dihedral(u32::try_from(alpha).ok()?)
        }
        _ => None,
    }
}

/// Group-level coincidences between catalog entries. They are reported,
/// never used to drop entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Coincidence {
    /// The group is cyclic of this order (lens spaces with the same order
    /// share a group; coprime products of cyclic groups are cyclic).
    CyclicGroup { order: u64 },
    /// The group is isomorphic to this prism group (cofactor absorbed into
    /// beta, or sign of alpha flipped).
    PrismGroup { alpha: i64, beta: u64 },
    /// Same order and abelianization as `Prism(|alpha|, beta)`; isomorphism
    /// is not asserted.
    SignedAlpha { alpha: i64, beta: u64 },
}

impl fmt::Display for Coincidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coincidence::CyclicGroup { order } => write!(f, "cyclic of order {order}"),
            Coincidence::PrismGroup { alpha, beta } => {
                write!(f, "isomorphic to Prism({alpha},{beta})")
            }
            Coincidence::SignedAlpha { alpha, beta } => {
                write!(f, "same invariants as Prism({alpha},{beta})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub descriptor: SpaceFormDescriptor,
    pub order: u64,
    pub coincidences: Vec<Coincidence>,
}

fn coincidences(d: &SpaceFormDescriptor) -> Vec<Coincidence> {
    let mut out = Vec::new();
    match d.family {
        Family::Cyclic { m, q } => {
            if q != 1 || d.cofactor > 1 {
                out.push(Coincidence::CyclicGroup {
                    order: m * d.cofactor,
                });
            }
        }
        Family::Prism { alpha, beta } => {
            if alpha.unsigned_abs() == 1 {
                out.push(Coincidence::CyclicGroup { order: d.order() });
            } else {
                if d.cofactor > 1 {
                    out.push(Coincidence::PrismGroup {
                        alpha,
                        beta: beta * d.cofactor,
                    });
                }
                if alpha < 0 {
                    out.push(Coincidence::SignedAlpha {
                        alpha: -alpha,
                        beta,
                    });
                }
            }
        }
        _ => {}
    }
    out
}

/// Every descriptor whose group order is at most `max_order`.
///
/// Lens parameters run over `1 <= q < m` coprime to `m` (`q = 1` when
/// `m <= 2`), prism `alpha` over both signs.
pub fn enumerate_descriptors(max_order: u64) -> Vec<CatalogEntry> {
    let mut bases: Vec<Family> = Vec::new();
    for m in 1..=max_order {
        for q in 1..m.max(2) {
            if m.gcd(&q) == 1 {
                bases.push(Family::Cyclic { m, q });
            }
        }
    }
    for beta in 1..=max_order / 4 {
        for a in 1..=(max_order / (4 * beta)) as i64 {
            if a.unsigned_abs().gcd(&beta) == 1 {
                bases.push(Family::Prism { alpha: a, beta });
                bases.push(Family::Prism { alpha: -a, beta });
            }
        }
    }
    bases.extend([Family::BinT, Family::BinO, Family::BinI]);

    let mut out = Vec::new();
    for family in bases {
        let base = SpaceFormDescriptor {
            family,
            cofactor: 1,
        }
        .base_order();
        if base > max_order {
            continue;
        }
        for cofactor in (1..=max_order / base).filter(|c| c.gcd(&base) == 1) {
            let descriptor = SpaceFormDescriptor { family, cofactor };
            out.push(CatalogEntry {
                descriptor,
                order: descriptor.order(),
                coincidences: coincidences(&descriptor),
            });
        }
    }
    out.sort_by_key(|e| (e.order, e.descriptor));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::h1_invariants;
    use crate::coset::{group_order, EnumLimit};
    use crate::quaternion::quaternion_closure;
    use crate::InvariantFactors;

    fn lim() -> EnumLimit {
        EnumLimit::default()
    }

    #[test]
    fn canonical_presentations() {
        let c = catalog_presentation(&SpaceFormDescriptor::cyclic(5, 1).unwrap()).unwrap();
        assert_eq!(c.to_string(), "< a | a^5 >");
        let p = catalog_presentation(&SpaceFormDescriptor::prism(3, 2).unwrap()).unwrap();
        assert_eq!(p.to_string(), "< a, b | a b a^-1 b, a^4 b^-3 >");
        let i = SpaceFormDescriptor::new(Family::BinI, 1).unwrap();
        assert_eq!(
            group_order(&catalog_presentation(&i).unwrap(), lim()).unwrap(),
            Some(120)
        );
    }

    #[test]
    fn cofactor_adds_central_generator() {
        let d = SpaceFormDescriptor::new(Family::BinT, 5).unwrap();
        let p = catalog_presentation(&d).unwrap();
        assert_eq!(p.names(), &["s", "t", "c"]);
        assert_eq!(group_order(&p, lim()).unwrap(), Some(120));
    }

    #[test]
    fn invalid_descriptors() {
        assert!(SpaceFormDescriptor::cyclic(6, 2).is_err());
        assert!(SpaceFormDescriptor::prism(2, 4).is_err());
        assert!(SpaceFormDescriptor::prism(0, 1).is_err());
        assert!(SpaceFormDescriptor::new(Family::BinT, 3).is_err());
        assert!(SpaceFormDescriptor::new(Family::BinO, 0).is_err());
    }

    #[test]
    fn json_shape() {
        let d = SpaceFormDescriptor::prism(3, 1).unwrap();
        assert_eq!(
            serde_json::to_value(d).unwrap(),
            serde_json::json!({"family": "Prism", "alpha": 3, "beta": 1, "cofactor": 1})
        );
        let o: SpaceFormDescriptor = serde_json::from_str(r#"{"family":"BinO"}"#).unwrap();
        assert_eq!(o, SpaceFormDescriptor::new(Family::BinO, 1).unwrap());
        let c: SpaceFormDescriptor =
            serde_json::from_str(r#"{"family":"Cyclic","m":7,"q":2,"cofactor":1}"#).unwrap();
        assert_eq!(c, SpaceFormDescriptor::cyclic(7, 2).unwrap());
    }

    #[test]
    fn small_enumerations() {
        let e8 = enumerate_descriptors(8);
        let has = |f: Family| {
            e8.iter()
                .any(|e| e.descriptor.family == f && e.descriptor.cofactor == 1)
        };
        assert!(has(Family::Prism { alpha: 1, beta: 1 }));
        assert!(has(Family::Prism { alpha: 2, beta: 1 }));
        assert!(has(Family::Prism { alpha: 1, beta: 2 }));
        for m in 1..=8 {
            assert!(has(Family::Cyclic { m, q: 1 }));
        }
        assert!(!has(Family::BinT));

        let e24 = enumerate_descriptors(24);
        assert!(e24
            .iter()
            .any(|e| e.descriptor == SpaceFormDescriptor::new(Family::BinT, 1).unwrap()));

        assert!(enumerate_descriptors(3)
            .iter()
            .all(|e| !matches!(e.descriptor.family, Family::Prism { .. })));
    }

    #[test]
    fn prism_order_formula_checked_by_enumeration() {
        for e in enumerate_descriptors(48) {
            if let Family::Prism { .. } = e.descriptor.family {
                let p = catalog_presentation(&e.descriptor).unwrap();
                assert_eq!(
                    group_order(&p, lim()).unwrap(),
                    Some(e.order),
                    "{}",
                    e.descriptor
                );
            }
        }
    }

    #[test]
    fn binary_polyhedral_abelianizations() {
        let h1 = |f| {
            h1_invariants(&catalog_presentation(&SpaceFormDescriptor::new(f, 1).unwrap()).unwrap())
        };
        assert!(h1(Family::BinI).is_trivial());
        assert_eq!(h1(Family::BinT), InvariantFactors::from_u64s(&[3]));
        assert_eq!(h1(Family::BinO), InvariantFactors::from_u64s(&[2]));
    }

    #[test]
    fn quaternion_realizations_match_presentations() {
        let descs = [
            SpaceFormDescriptor::new(Family::BinT, 1).unwrap(),
            SpaceFormDescriptor::new(Family::BinO, 1).unwrap(),
            SpaceFormDescriptor::new(Family::BinI, 1).unwrap(),
            SpaceFormDescriptor::prism(2, 1).unwrap(),
            SpaceFormDescriptor::prism(3, 1).unwrap(),
            SpaceFormDescriptor::prism(4, 1).unwrap(),
            SpaceFormDescriptor::prism(6, 1).unwrap(),
        ];
        for d in descs {
            let gens = quaternion_realization(&d).unwrap();
            let n = quaternion_closure(&gens, 1000).unwrap().len() as u64;
            let p = catalog_presentation(&d).unwrap();
            assert_eq!(Some(n), group_order(&p, lim()).unwrap(), "{d}");
            assert_eq!(n, d.order());
        }
        assert!(quaternion_realization(&SpaceFormDescriptor::prism(5, 1).unwrap()).is_none());
    }

    #[test]
    fn coincidences_flag_duplicates() {
        let e = enumerate_descriptors(60);
        let find = |d: SpaceFormDescriptor| e.iter().find(|x| x.descriptor == d).unwrap();
        assert_eq!(
            find(SpaceFormDescriptor::new(Family::Prism { alpha: 3, beta: 1 }, 5).unwrap())
                .coincidences,
            vec![Coincidence::PrismGroup { alpha: 3, beta: 5 }]
        );
        assert_eq!(
            find(SpaceFormDescriptor::prism(-3, 1).unwrap()).coincidences,
            vec![Coincidence::SignedAlpha { alpha: 3, beta: 1 }]
        );
        assert_eq!(
            find(SpaceFormDescriptor::cyclic(5, 2).unwrap()).coincidences,
            vec![Coincidence::CyclicGroup { order: 5 }]
        );
    }
}

//! Double disk bundles in dimension three with regular leaf S^2 or T^2:
//! the admissible disk bundle sides, Seifert-van Kampen pushouts for every
//! gluing, and recognition of prism groups in the Klein bottle case.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abelian::{h1_invariants, InvariantFactors};
use crate::catalog;
use crate::coset::{todd_coxeter, CosetTable, EnumLimit};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::presentation::{tietze_eliminate, GroupHom, Presentation};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Leaf {
    Sphere2,
    Torus2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    Point,
    RP2,
    Circle,
    Torus2,
    KleinBottle,
}

/// One disk bundle of the decomposition: its boundary (the leaf), its base
/// and the dimension of the boundary sphere fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SideDescriptor {
    leaf: Leaf,
    base: Base,
    fiber_dim: u8,
}

impl SideDescriptor {
    pub fn new(leaf: Leaf, base: Base, fiber_dim: u8) -> Result<Self> {
        let ok = matches!(
            (leaf, base, fiber_dim),
            (Leaf::Sphere2, Base::Point, 2)
                | (Leaf::Sphere2, Base::RP2, 0)
                | (Leaf::Torus2, Base::Circle, 1)
                | (Leaf::Torus2, Base::Torus2, 0)
                | (Leaf::Torus2, Base::KleinBottle, 0)
        );
        if ok {
            Ok(SideDescriptor {
                leaf,
                base,
                fiber_dim,
            })
        } else {
            Err(Error::InadmissibleSide(format!(
                "no disk bundle over {base:?} with {leaf:?} boundary and fiber S^{fiber_dim}"
            )))
        }
    }

    /// The unique admissible side over `base`.
    pub fn over(base: Base) -> Self {
        let (leaf, dim) = match base {
            Base::Point => (Leaf::Sphere2, 2),
            Base::RP2 => (Leaf::Sphere2, 0),
            Base::Circle => (Leaf::Torus2, 1),
            Base::Torus2 | Base::KleinBottle => (Leaf::Torus2, 0),
        };
        SideDescriptor {
            leaf,
            base,
            fiber_dim: dim,
        }
    }

    pub fn leaf(&self) -> Leaf {
        self.leaf
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn fiber_dim(&self) -> u8 {
        self.fiber_dim
    }
}

/// Which index-2 sublattice of pi_1(T^2) the leaf covers when the side is
/// the twisted interval bundle over T^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Sublattice {
    /// b -> d^2, c -> e
    #[default]
    First,
    /// b -> d, c -> e^2
    Second,
    /// b -> d e, c -> e^2
    Diagonal,
}

/// An orientation preserving gluing of tori, `alpha delta - beta gamma = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GluingMatrix {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl GluingMatrix {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        let det = alpha * delta - beta * gamma;
        if det != 1 {
            return Err(Error::Malformed(format!(
                "gluing matrix must have determinant 1, got {det}"
            )));
        }
        Ok(GluingMatrix {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn identity() -> Self {
        GluingMatrix::new(1, 0, 0, 1).unwrap()
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

impl fmt::Display for GluingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.alpha, self.beta, self.gamma, self.delta
        )
    }
}

/// Maps a gluing matrix of determinant +-1 to the determinant +1 member of
/// its orbit under `diag(1, -1)` acting on the solid torus side. The
/// reflection extends over the solid torus, so both glue to the same
/// manifold.
pub fn matrix_orbit_reduce(entries: [i64; 4]) -> Result<GluingMatrix> {
    let [a, b, c, d] = entries;
    match a * d - b * c {
        1 => GluingMatrix::new(a, b, c, d),
        -1 => GluingMatrix::new(a, b, -c, -d),
        det => Err(Error::DeterminantNotUnit(det)),
    }
}

/// All determinant-one matrices with entries in `[-bound, bound]`, in
/// lexicographic order.
pub fn matrices_in_box(bound: i64) -> Vec<GluingMatrix> {
    let r = -bound..=bound;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if a * d - b * c == 1 {
                        out.push(GluingMatrix {
                            alpha: a,
                            beta: b,
                            gamma: c,
                            delta: d,
                        });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingDatum {
    pub side_minus: SideDescriptor,
    pub side_plus: SideDescriptor,
    /// Ignored for a sphere leaf.
    pub matrix: GluingMatrix,
    #[serde(default)]
    pub sublattice: Sublattice,
}

impl GluingDatum {
    pub fn new(
        side_minus: SideDescriptor,
        side_plus: SideDescriptor,
        matrix: GluingMatrix,
    ) -> Result<Self> {
        if side_minus.leaf != side_plus.leaf {
            return Err(Error::InadmissibleSide(
                "the two sides have different boundaries".into(),
            ));
        }
        Ok(GluingDatum {
            side_minus,
            side_plus,
            matrix,
            sublattice: Sublattice::default(),
        })
    }

    pub fn with_sublattice(mut self, s: Sublattice) -> Self {
        self.sublattice = s;
        self
    }

    pub fn pi1(&self, limit: EnumLimit) -> Result<Pi1Report> {
        match self.side_minus.leaf {
            Leaf::Sphere2 => sphere_gluing_pi1(self.side_minus, self.side_plus, limit),
            Leaf::Torus2 => {
                if self.side_plus.base != Base::Circle {
                    return Err(Error::InadmissibleSide(
                        "with a torus leaf the plus side must be the solid torus".into(),
                    ));
                }
                torus_gluing_pi1(self.matrix, self.side_minus, self.sublattice, limit)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ManifoldName {
    S3,
    RP3,
    RP3SumRP3,
}

impl fmt::Display for ManifoldName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManifoldName::S3 => "S^3",
            ManifoldName::RP3 => "RP^3",
            ManifoldName::RP3SumRP3 => "RP^3 # RP^3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Trivial,
    Cyclic(u64),
    PrismGroup { alpha: i64, beta: i64 },
    FreeAbelianRank(usize),
    Z2FreeProductZ2,
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Trivial => f.write_str("Trivial"),
            Classification::Cyclic(n) => write!(f, "Cyclic({n})"),
            Classification::PrismGroup { alpha, beta } => write!(f, "PrismGroup({alpha},{beta})"),
            Classification::FreeAbelianRank(k) => write!(f, "FreeAbelianRank({k})"),
            Classification::Z2FreeProductZ2 => f.write_str("Z2FreeProductZ2"),
            Classification::Other => f.write_str("Other"),
        }
    }
}

impl FromStr for Classification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("unknown classification `{s}`"));
        let args = |prefix: &str| -> Option<Vec<i64>> {
            let inner = s
                .strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?;
            inner.split(',').map(|x| x.trim().parse().ok()).collect()
        };
        Ok(match s {
            "Trivial" => Classification::Trivial,
            "Z2FreeProductZ2" => Classification::Z2FreeProductZ2,
            "Other" => Classification::Other,
            _ => {
                if let Some(v) = args("PrismGroup") {
                    match v[..] {
                        [alpha, beta] => Classification::PrismGroup { alpha, beta },
                        _ => return Err(bad()),
                    }
                } else if let Some(v) = args("Cyclic") {
                    match v[..] {
                        [n] if n > 0 => Classification::Cyclic(n as u64),
                        _ => return Err(bad()),
                    }
                } else if let Some(v) = args("FreeAbelianRank") {
                    match v[..] {
                        [k] if k >= 0 => Classification::FreeAbelianRank(k as usize),
                        _ => return Err(bad()),
                    }
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Classification {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Group order as far as it is known. Serialized as a number, the string
/// `"infinite"`, or `null`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupOrder {
    Finite(u64),
    Infinite,
    Unknown,
}

impl GroupOrder {
    pub fn finite(self) -> Option<u64> {
        match self {
            GroupOrder::Finite(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::Infinite => f.write_str("infinite"),
            GroupOrder::Unknown => f.write_str("unknown"),
        }
    }
}

impl Serialize for GroupOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupOrder::Finite(n) => s.serialize_u64(*n),
            GroupOrder::Infinite => s.serialize_str("infinite"),
            GroupOrder::Unknown => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for GroupOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Null => Ok(GroupOrder::Unknown),
            serde_json::Value::String(s) if s == "infinite" => Ok(GroupOrder::Infinite),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(GroupOrder::Finite)
                .ok_or_else(|| serde::de::Error::custom("order must be a non-negative integer")),
            other => Err(serde::de::Error::custom(format!("invalid order {other}"))),
        }
    }
}

/// An equality of words verified by coset enumeration in a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedEquality {
    pub group: Presentation,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Report {
    pub presentation: Presentation,
    pub invariant_factors: InvariantFactors,
    pub order: GroupOrder,
    pub classification: Classification,
    #[serde(default)]
    pub certificate: Vec<CertifiedEquality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<ManifoldName>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Pi1Report {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Orders a finite group by enumeration, skipping the enumeration when the
/// abelianization is already infinite.
fn order_of(
    p: &Presentation,
    h1: &InvariantFactors,
    limit: EnumLimit,
) -> Result<(GroupOrder, Option<CosetTable>)> {
    if h1.free_rank() > 0 {
        return Ok((GroupOrder::Infinite, None));
    }
    let t = todd_coxeter(p, &[], limit)?;
    if t.is_complete() {
        Ok((GroupOrder::Finite(t.coset_count() as u64), Some(t)))
    } else {
        Ok((GroupOrder::Unknown, None))
    }
}

/// Classification of a group known to be abelian, read off its invariants.
fn abelian_classification(h1: &InvariantFactors) -> Classification {
    let f = h1.factors();
    if f.is_empty() {
        Classification::Trivial
    } else if h1.free_rank() == f.len() {
        Classification::FreeAbelianRank(f.len())
    } else if f.len() == 1 {
        Classification::Cyclic(f[0].to_u64().unwrap_or(0))
    } else {
        Classification::Other
    }
}

/// Report for an arbitrary presentation, without structural knowledge of
/// where it came from.
pub fn analyze_presentation(p: &Presentation, limit: EnumLimit) -> Result<Pi1Report> {
    let h1 = h1_invariants(p);
    let (order, _) = order_of(p, &h1, limit)?;
    let classification = match order {
        GroupOrder::Finite(1) => Classification::Trivial,
        GroupOrder::Finite(n) => {
            // abelian iff the abelianization is the whole group
            if h1.order().and_then(|o| o.to_u64()) == Some(n) {
                abelian_classification(&h1)
            } else {
                Classification::Other
            }
        }
        _ if p.relators().is_empty() && p.generator_count() <= 1 => abelian_classification(&h1),
        _ => Classification::Other,
    };
    Ok(Pi1Report {
        presentation: p.clone(),
        invariant_factors: h1,
        order,
        classification,
        certificate: Vec::new(),
        manifold: None,
        notes: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Minus,
    Plus,
}

/// `< b, c | [b, c] >`
pub fn torus_group() -> Presentation {
    Presentation::new(
        vec!["b", "c"],
        vec![Word::from_runs(&[(0, 1), (1, 1), (0, -1), (1, -1)])],
    )
    .expect("valid by construction")
}

/// `< d, e | d e d^-1 e >`
pub fn klein_bottle_group() -> Presentation {
    Presentation::new(
        vec!["d", "e"],
        vec![Word::from_runs(&[(0, 1), (1, 1), (0, -1), (1, 1)])],
    )
    .expect("valid by construction")
}

fn leaf_group(leaf: Leaf) -> Presentation {
    match leaf {
        Leaf::Sphere2 => Presentation::trivial(),
        Leaf::Torus2 => torus_group(),
    }
}

/// The map pi_1(leaf) -> pi_1(base) induced by the bundle projection.
fn side_map(side: SideDescriptor, role: Role, sublattice: Sublattice) -> GroupHom {
    let leaf = leaf_group(side.leaf);
    let (target, images) = match side.base {
        Base::Point => (Presentation::trivial(), vec![]),
        Base::RP2 => {
            let name = if role == Role::Minus { "r" } else { "s" };
            (
                Presentation::new(vec![name], vec![Word::power_of(0, 2)]).unwrap(),
                vec![],
            )
        }
        Base::Circle => {
            let name = if role == Role::Minus { "x" } else { "a" };
            (
                Presentation::free(vec![name]).unwrap(),
                vec![Word::gen(0), Word::identity()],
            )
        }
        Base::Torus2 => {
            let images = match sublattice {
                Sublattice::First => vec![Word::power_of(0, 2), Word::gen(1)],
                Sublattice::Second => vec![Word::gen(0), Word::power_of(1, 2)],
                Sublattice::Diagonal => {
                    vec![Word::from_runs(&[(0, 1), (1, 1)]), Word::power_of(1, 2)]
                }
            };
            let t = Presentation::new(
                vec!["d", "e"],
                vec![Word::from_runs(&[(0, 1), (1, 1), (0, -1), (1, -1)])],
            )
            .unwrap();
            (t, images)
        }
        Base::KleinBottle => (
            klein_bottle_group(),
            vec![Word::power_of(0, 2), Word::gen(1)],
        ),
    };
    GroupHom::new(leaf, target, images).expect("images lie in the base group")
}

/// The torus self-map `b -> b^alpha c^gamma`, `c -> b^beta c^delta`.
fn matrix_hom(m: GluingMatrix) -> GroupHom {
    let t = torus_group();
    GroupHom::new(
        t.clone(),
        t,
        vec![
            Word::from_runs(&[(0, m.alpha), (1, m.gamma)]),
            Word::from_runs(&[(0, m.beta), (1, m.delta)]),
        ],
    )
    .unwrap()
}

/// Seifert-van Kampen: generators of both targets (plus side first), their
/// relators, and `to_plus(g) to_minus(g)^-1` for each leaf generator `g`.
pub fn svk_pushout(
    leaf: &Presentation,
    to_minus: &GroupHom,
    to_plus: &GroupHom,
) -> Result<Presentation> {
    if to_minus.source() != leaf || to_plus.source() != leaf {
        return Err(Error::MismatchedSources);
    }
    let plus = to_plus.target();
    let minus = to_minus.target();
    let shift = plus.generator_count();
    let mut names: Vec<String> = plus.names().to_vec();
    for n in minus.names() {
        let mut candidate = n.clone();
        while names.contains(&candidate) || (candidate != *n && minus.names().contains(&candidate))
        {
            candidate.push('2');
        }
        names.push(candidate);
    }
    let lift = |w: &Word| w.relabel(|g| g + shift);
    let mut relators: Vec<Word> = plus.relators().to_vec();
    relators.extend(minus.relators().iter().map(lift));
    for g in 0..leaf.generator_count() {
        let lhs = &to_plus.images()[g];
        let rhs = lift(&to_minus.images()[g]);
        relators.push(lhs.mul(&rhs.inverse()));
    }
    Presentation::new(names, relators)
}

/// The pushout presentation for a torus leaf glued to a solid torus by `m`.
pub fn torus_pushout(
    m: GluingMatrix,
    side_minus: SideDescriptor,
    sublattice: Sublattice,
) -> Result<Presentation> {
    if side_minus.leaf != Leaf::Torus2 {
        return Err(Error::InadmissibleSide(
            "minus side must have torus boundary".into(),
        ));
    }
    let leaf = torus_group();
    let to_minus = side_map(side_minus, Role::Minus, sublattice);
    let to_plus = matrix_hom(m).then(&side_map(
        SideDescriptor::over(Base::Circle),
        Role::Plus,
        sublattice,
    ))?;
    svk_pushout(&leaf, &to_minus, &to_plus)
}

/// pi_1 of the double disk bundle with torus leaf, solid torus plus side
/// and the given minus side.
pub fn torus_gluing_pi1(
    m: GluingMatrix,
    side_minus: SideDescriptor,
    sublattice: Sublattice,
    limit: EnumLimit,
) -> Result<Pi1Report> {
    let p = torus_pushout(m, side_minus, sublattice)?;
    let h1 = h1_invariants(&p);
    let mut report = Pi1Report {
        presentation: p.clone(),
        invariant_factors: h1.clone(),
        order: GroupOrder::Unknown,
        classification: Classification::Other,
        certificate: Vec::new(),
        manifold: None,
        notes: Vec::new(),
    };
    match side_minus.base {
        Base::Circle | Base::Torus2 => {
            // pi_1 is a quotient of the abelian group pi_1(B_-)
            let (order, _) = order_of(&p, &h1, limit)?;
            if let (GroupOrder::Finite(n), Some(h)) = (order, h1.order()) {
                if h.to_u64() != Some(n) {
                    return Err(Error::VerificationFailed(format!(
                        "abelian branch: enumeration gives order {n}, abelianization {h}"
                    )));
                }
            }
            report.order = order;
            report.classification = abelian_classification(&h1);
        }
        Base::KleinBottle if m.alpha != 0 && m.beta != 0 => {
            let rec = recognize_prism(&p, m, limit)?;
            report.order = GroupOrder::Finite(rec.order);
            report.classification = Classification::PrismGroup {
                alpha: rec.alpha,
                beta: rec.beta,
            };
            if rec.alpha < 0 || rec.beta < 0 {
                report.notes.push(format!(
                    "same order and abelianization as PrismGroup({},{})",
                    rec.alpha.abs(),
                    rec.beta.abs()
                ));
            }
            report.certificate = rec.certificate;
        }
        Base::KleinBottle if m.beta == 0 => {
            // e = 1 and a = d^(+-2): infinite cyclic on d
            let (order, _) = order_of(&p, &h1, limit)?;
            report.order = order;
            report.classification = abelian_classification(&h1);
        }
        Base::KleinBottle => {
            // alpha = 0 forces beta = +-1: e = a^(+-1), d^2 = 1, d e d^-1 = e^-1
            report.order = GroupOrder::Infinite;
            report.classification = Classification::Z2FreeProductZ2;
        }
        _ => {
            return Err(Error::InadmissibleSide(format!(
                "{:?} is not a disk bundle side with torus boundary",
                side_minus.base
            )))
        }
    }
    Ok(report)
}

/// Outcome of prism recognition on the Klein bottle pushout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrismRecognition {
    pub alpha: i64,
    pub beta: i64,
    /// The pushout with `a` eliminated via `a = d^(2 delta) e^(-gamma)`.
    pub eliminated: Presentation,
    /// `< d, e | d e d^-1 e, d^(2 beta) e^-alpha >`
    pub prism: Presentation,
    pub order: u64,
    pub certificate: Vec<CertifiedEquality>,
}

fn certify(t: &CosetTable, lhs: &Word, rhs: &Word) -> Result<CertifiedEquality> {
    let p = t.presentation();
    if t.represents_identity(&lhs.mul(&rhs.inverse()))? {
        Ok(CertifiedEquality {
            group: p.clone(),
            lhs: p.word_string(lhs),
            rhs: p.word_string(rhs),
        })
    } else {
        Err(Error::VerificationFailed(format!(
            "{} != {} in {p}",
            p.word_string(lhs),
            p.word_string(rhs)
        )))
    }
}

fn complete_table(p: &Presentation, limit: EnumLimit) -> Result<CosetTable> {
    let t = todd_coxeter(p, &[], limit)?;
    if t.is_complete() {
        Ok(t)
    } else {
        Err(Error::LimitExceeded(limit.max_cosets()))
    }
}

/// Shows that the Klein bottle pushout `< a, d, e | d e d^-1 e, a^alpha d^-2,
/// a^beta e^-1 >` is the prism group `< d, e | d e d^-1 e, d^(2 beta) =
/// e^alpha >`.
///
/// The certificate holds, each checked by coset enumeration:
/// `a = d^(2 delta) e^(-gamma)` in the pushout (so `a` may be eliminated),
/// `d^(2 beta) = e^alpha` in the eliminated presentation, and
/// `(d^(2 delta) e^(-gamma))^alpha = d^2`, `(d^(2 delta) e^(-gamma))^beta = e`
/// in the prism group. The last two together with the second say the
/// identity on `d, e` is an isomorphism between the two.
pub fn recognize_prism(
    p: &Presentation,
    m: GluingMatrix,
    limit: EnumLimit,
) -> Result<PrismRecognition> {
    if p.generator_count() != 3 {
        return Err(Error::NotApplicable(
            "expected the three-generator pushout".into(),
        ));
    }
    if m.alpha == 0 || m.beta == 0 {
        return Err(Error::NotApplicable(format!(
            "degenerate gluing {m}: alpha * beta = 0"
        )));
    }
    let (a, d, e) = (0usize, 1usize, 2usize);
    let expr = Word::from_runs(&[(d, 2 * m.delta), (e, -m.gamma)]);

    let t_p = complete_table(p, limit)?;
    let mut certificate = vec![certify(&t_p, &Word::gen(a), &expr)?];

    let eliminated = tietze_eliminate(p, a, &expr)?;
    // over (d, e) now
    let (d, e) = (0usize, 1usize);
    let expr = Word::from_runs(&[(d, 2 * m.delta), (e, -m.gamma)]);
    let t_q = complete_table(&eliminated, limit)?;
    certificate.push(certify(
        &t_q,
        &Word::power_of(d, 2 * m.beta),
        &Word::power_of(e, m.alpha),
    )?);

    let prism = catalog::prism_presentation(m.alpha, m.beta);
    let prism = Presentation::new(vec!["d", "e"], prism.relators().to_vec())?;
    let t_r = complete_table(&prism, limit)?;
    certificate.push(certify(&t_r, &expr.pow(m.alpha), &Word::power_of(d, 2))?);
    certificate.push(certify(&t_r, &expr.pow(m.beta), &Word::gen(e))?);
    // d^2 is central, which the converse direction leans on
    let d2 = Word::power_of(d, 2);
    certificate.push(certify(
        &t_r,
        &d2.mul(&Word::gen(e)),
        &Word::gen(e).mul(&d2),
    )?);

    let n = t_p.coset_count();
    if t_q.coset_count() != n || t_r.coset_count() != n {
        return Err(Error::VerificationFailed(format!(
            "orders disagree: {n}, {}, {}",
            t_q.coset_count(),
            t_r.coset_count()
        )));
    }
    Ok(PrismRecognition {
        alpha: m.alpha,
        beta: m.beta,
        eliminated,
        prism,
        order: n as u64,
        certificate,
    })
}

/// With an S^2 leaf the gluing map does not matter; only the bases do.
pub fn classify_sphere_leaf(
    side_minus: SideDescriptor,
    side_plus: SideDescriptor,
) -> Result<ManifoldName> {
    for s in [side_minus, side_plus] {
        if s.leaf != Leaf::Sphere2 {
            return Err(Error::InadmissibleSide(format!(
                "{:?} side does not have S^2 boundary",
                s.base
            )));
        }
    }
    Ok(match (side_minus.base, side_plus.base) {
        (Base::Point, Base::Point) => ManifoldName::S3,
        (Base::Point, Base::RP2) | (Base::RP2, Base::Point) => ManifoldName::RP3,
        _ => ManifoldName::RP3SumRP3,
    })
}

pub fn sphere_gluing_pi1(
    side_minus: SideDescriptor,
    side_plus: SideDescriptor,
    limit: EnumLimit,
) -> Result<Pi1Report> {
    let manifold = classify_sphere_leaf(side_minus, side_plus)?;
    let leaf = leaf_group(Leaf::Sphere2);
    let p = svk_pushout(
        &leaf,
        &side_map(side_minus, Role::Minus, Sublattice::First),
        &side_map(side_plus, Role::Plus, Sublattice::First),
    )?;
    let h1 = h1_invariants(&p);
    let (order, classification) = match manifold {
        ManifoldName::RP3SumRP3 => (GroupOrder::Infinite, Classification::Z2FreeProductZ2),
        _ => {
            let (order, _) = order_of(&p, &h1, limit)?;
            (order, abelian_classification(&h1))
        }
    };
    Ok(Pi1Report {
        presentation: p,
        invariant_factors: h1,
        order,
        classification,
        certificate: Vec::new(),
        manifold: Some(manifold),
        notes: Vec::new(),
    })
}

/// Evaluates every determinant-one gluing in `[-bound, bound]^4` against
/// `side_minus`. Results come back in lexicographic matrix order.
pub fn enumerate_gluings(
    bound: i64,
    side_minus: SideDescriptor,
    sublattice: Sublattice,
    limit: EnumLimit,
    exec: Execution,
) -> Vec<(GluingMatrix, Result<Pi1Report>)> {
    exec.map(matrices_in_box(bound), |m| {
        (m, torus_gluing_pi1(m, side_minus, sublattice, limit))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::surjects_onto_z2;
    use crate::coset::group_order;

    fn lim() -> EnumLimit {
        EnumLimit::default()
    }

    fn klein() -> SideDescriptor {
        SideDescriptor::over(Base::KleinBottle)
    }

    fn circle() -> SideDescriptor {
        SideDescriptor::over(Base::Circle)
    }

    fn mat(a: i64, b: i64, c: i64, d: i64) -> GluingMatrix {
        GluingMatrix::new(a, b, c, d).unwrap()
    }

    #[test]
    fn admissible_sides_only() {
        assert!(SideDescriptor::new(Leaf::Sphere2, Base::Point, 2).is_ok());
        assert!(SideDescriptor::new(Leaf::Torus2, Base::KleinBottle, 0).is_ok());
        assert!(SideDescriptor::new(Leaf::Torus2, Base::Point, 2).is_err());
        assert!(SideDescriptor::new(Leaf::Sphere2, Base::RP2, 1).is_err());
        for b in [
            Base::Point,
            Base::RP2,
            Base::Circle,
            Base::Torus2,
            Base::KleinBottle,
        ] {
            let s = SideDescriptor::over(b);
            assert_eq!(
                SideDescriptor::new(s.leaf(), s.base(), s.fiber_dim()),
                Ok(s)
            );
        }
    }

    #[test]
    fn datum_needs_matching_leaves() {
        let id = GluingMatrix::identity();
        assert!(GluingDatum::new(SideDescriptor::over(Base::Point), circle(), id).is_err());
        assert!(GluingDatum::new(klein(), circle(), id).is_ok());
        let rp = SideDescriptor::over(Base::RP2);
        let d = GluingDatum::new(rp, rp, id).unwrap();
        assert_eq!(
            d.pi1(lim()).unwrap().manifold,
            Some(ManifoldName::RP3SumRP3)
        );
        // two interval bundles over tori: no solid torus to glue against
        let t2 = SideDescriptor::over(Base::Torus2);
        assert!(GluingDatum::new(klein(), t2, id)
            .unwrap()
            .pi1(lim())
            .is_err());
    }

    #[test]
    fn pushout_of_two_balls_is_trivial() {
        let ball = SideDescriptor::over(Base::Point);
        let r = sphere_gluing_pi1(ball, ball, lim()).unwrap();
        assert_eq!(r.presentation, Presentation::trivial());
        assert_eq!(r.classification, Classification::Trivial);
        assert_eq!(r.order, GroupOrder::Finite(1));
    }

    #[test]
    fn identity_gluing_of_solid_tori_is_z() {
        let r =
            torus_gluing_pi1(GluingMatrix::identity(), circle(), Sublattice::First, lim()).unwrap();
        assert_eq!(r.invariant_factors, InvariantFactors::from_u64s(&[0]));
        assert_eq!(r.classification, Classification::FreeAbelianRank(1));
        assert_eq!(r.order, GroupOrder::Infinite);
    }

    #[test]
    fn klein_pushout_matches_expected_form() {
        let p = torus_pushout(mat(3, 2, 1, 1), klein(), Sublattice::First).unwrap();
        assert_eq!(
            p.to_string(),
            "< a, d, e | d e d^-1 e, a^3 d^-2, a^2 e^-1 >"
        );
    }

    #[test]
    fn mismatched_sources_rejected() {
        let t = torus_group();
        let h = GroupHom::identity(&t);
        let k = GroupHom::identity(&klein_bottle_group());
        assert_eq!(svk_pushout(&t, &h, &k), Err(Error::MismatchedSources));
    }

    #[test]
    fn name_clash_gets_renamed() {
        let leaf = Presentation::trivial();
        let rp = Presentation::new(vec!["r"], vec![Word::power_of(0, 2)]).unwrap();
        let h = GroupHom::new(leaf.clone(), rp, vec![]).unwrap();
        let p = svk_pushout(&leaf, &h, &h).unwrap();
        assert_eq!(p.to_string(), "< r, r2 | r^2, r2^2 >");
    }

    #[test]
    fn lens_branch() {
        let r = torus_gluing_pi1(mat(1, 5, 0, 1), circle(), Sublattice::First, lim()).unwrap();
        assert_eq!(r.classification, Classification::Cyclic(5));
        assert_eq!(r.order, GroupOrder::Finite(5));
    }

    #[test]
    fn klein_branch_examples() {
        let r = torus_gluing_pi1(mat(1, 1, 1, 2), klein(), Sublattice::First, lim()).unwrap();
        assert_eq!(
            r.classification,
            Classification::PrismGroup { alpha: 1, beta: 1 }
        );
        assert_eq!(r.order, GroupOrder::Finite(4));
        assert_eq!(r.certificate.len(), 5);

        let r = torus_gluing_pi1(mat(3, 1, 2, 1), klein(), Sublattice::First, lim()).unwrap();
        assert_eq!(
            r.classification,
            Classification::PrismGroup { alpha: 3, beta: 1 }
        );
        assert_eq!(r.order, GroupOrder::Finite(12));
    }

    #[test]
    fn degenerate_beta_zero_is_z() {
        let m = GluingMatrix::identity();
        let p = torus_pushout(m, klein(), Sublattice::First).unwrap();
        assert!(matches!(
            recognize_prism(&p, m, lim()),
            Err(Error::NotApplicable(_))
        ));
        // eliminating a = d^2 leaves < d, e | d e d^-1 e, e >
        let q = tietze_eliminate(&p, 0, &Word::power_of(1, 2)).unwrap();
        assert_eq!(q.to_string(), "< d, e | d e d^-1 e, e^-1 >");
        let r = torus_gluing_pi1(m, klein(), Sublattice::First, lim()).unwrap();
        assert_eq!(r.classification, Classification::FreeAbelianRank(1));
        assert_eq!(r.invariant_factors, InvariantFactors::from_u64s(&[0]));
    }

    #[test]
    fn degenerate_alpha_zero_is_infinite_dihedral() {
        let m = mat(0, 1, -1, 0);
        let r = torus_gluing_pi1(m, klein(), Sublattice::First, lim()).unwrap();
        assert_eq!(r.classification, Classification::Z2FreeProductZ2);
        assert_eq!(r.invariant_factors, InvariantFactors::from_u64s(&[2, 2]));
        // dihedral quotients of every size: the group is infinite
        let p = r.presentation;
        // d is a reflection and a = e a rotation of unbounded order
        let a = p.index_of("a").unwrap();
        for n in [3i64, 5, 8] {
            let q = p.with_relators([Word::power_of(a, n)]).unwrap();
            assert_eq!(group_order(&q, lim()).unwrap(), Some(2 * n as u64));
        }
    }

    #[test]
    fn sphere_leaf_classifier() {
        let pt = SideDescriptor::over(Base::Point);
        let rp = SideDescriptor::over(Base::RP2);
        assert_eq!(classify_sphere_leaf(pt, pt), Ok(ManifoldName::S3));
        assert_eq!(classify_sphere_leaf(pt, rp), Ok(ManifoldName::RP3));
        assert_eq!(classify_sphere_leaf(rp, pt), Ok(ManifoldName::RP3));
        assert_eq!(classify_sphere_leaf(rp, rp), Ok(ManifoldName::RP3SumRP3));
        assert!(classify_sphere_leaf(pt, circle()).is_err());
        let r = sphere_gluing_pi1(rp, pt, lim()).unwrap();
        assert_eq!(r.classification, Classification::Cyclic(2));
        let r = sphere_gluing_pi1(rp, rp, lim()).unwrap();
        assert_eq!(r.classification, Classification::Z2FreeProductZ2);
    }

    #[test]
    fn orbit_reduction() {
        assert_eq!(
            matrix_orbit_reduce([1, 0, 0, -1]),
            Ok(GluingMatrix::identity())
        );
        assert_eq!(matrix_orbit_reduce([2, 1, 1, 1]), Ok(mat(2, 1, 1, 1)));
        assert_eq!(matrix_orbit_reduce([0, -1, 1, 0]), Ok(mat(0, -1, 1, 0)));
        assert_eq!(
            matrix_orbit_reduce([2, 0, 0, 1]),
            Err(Error::DeterminantNotUnit(2))
        );
    }

    #[test]
    fn orbit_reduction_preserves_the_group() {
        // negating the second row is invisible to the solid torus side
        for m in matrices_in_box(2) {
            let flipped = [m.alpha, m.beta, -m.gamma, -m.delta];
            assert_eq!(matrix_orbit_reduce(flipped), Ok(m));
        }
    }

    #[test]
    fn torus_side_sublattices_stay_abelian() {
        let t2 = SideDescriptor::over(Base::Torus2);
        for s in [Sublattice::First, Sublattice::Second, Sublattice::Diagonal] {
            for m in matrices_in_box(2) {
                let r = torus_gluing_pi1(m, t2, s, lim()).unwrap();
                assert!(!matches!(
                    r.classification,
                    Classification::PrismGroup { .. }
                ));
            }
        }
    }

    #[test]
    fn pushout_abelianization_is_pushout_of_abelianizations() {
        // Independent route: Z^3 (a, d, e) modulo images of the leaf
        // relations computed directly from the matrix.
        use crate::abelian::{smith_normal_form, IntMatrix};
        for m in matrices_in_box(2) {
            let p = torus_pushout(m, klein(), Sublattice::First).unwrap();
            let direct = IntMatrix::from_rows(3, &[[0, 0, 2], [m.alpha, -2, 0], [m.beta, 0, -1]]);
            assert_eq!(h1_invariants(&p), smith_normal_form(&direct), "{m}");
        }
    }

    #[test]
    fn report_json_fields() {
        let r = torus_gluing_pi1(mat(1, 1, 1, 2), klein(), Sublattice::First, lim()).unwrap();
        let j = r.to_json();
        assert_eq!(j["classification"], "PrismGroup(1,1)");
        assert_eq!(j["order"], 4);
        assert_eq!(j["invariant_factors"], serde_json::json!([4]));
        assert!(j["presentation"]
            .as_str()
            .unwrap()
            .starts_with("< a, d, e |"));
        assert!(j["certificate"].as_array().unwrap().len() >= 4);
        let back: Pi1Report = serde_json::from_value(j).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn classification_strings_round_trip() {
        for c in [
            Classification::Trivial,
            Classification::Cyclic(7),
            Classification::PrismGroup { alpha: -3, beta: 2 },
            Classification::FreeAbelianRank(2),
            Classification::Z2FreeProductZ2,
            Classification::Other,
        ] {
            assert_eq!(c.to_string().parse::<Classification>(), Ok(c));
        }
        assert!("Prism(1)".parse::<Classification>().is_err());
    }

    #[test]
    fn generic_analysis() {
        let r =
            analyze_presentation(&"< a, b | a^2, b^3, [a, b] >".parse().unwrap(), lim()).unwrap();
        assert_eq!(r.classification, Classification::Cyclic(6));
        let r = analyze_presentation(&"< s, t | s^3 = t^3 = (s t)^2 >".parse().unwrap(), lim())
            .unwrap();
        assert_eq!(r.classification, Classification::Other);
        assert_eq!(r.order, GroupOrder::Finite(24));
        let r = analyze_presentation(&"< a | >".parse().unwrap(), lim()).unwrap();
        assert_eq!(r.classification, Classification::FreeAbelianRank(1));
    }

    #[test]
    fn prism_h1_surjects_in_klein_branch() {
        for m in matrices_in_box(2)
            .into_iter()
            .filter(|m| m.alpha * m.beta != 0)
        {
            let r = torus_gluing_pi1(m, klein(), Sublattice::First, lim()).unwrap();
            assert!(surjects_onto_z2(&r.invariant_factors));
        }
    }
}

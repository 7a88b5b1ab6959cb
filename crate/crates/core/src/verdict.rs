//! Verdicts on double disk bundle structures and the group-level necessary
//! conditions they rest on.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::abelian::{h1_invariants, is_finite_odd, surjects_onto_z2, InvariantFactors};
use crate::catalog::{catalog_presentation, Family, SpaceFormDescriptor};
use crate::error::Result;
use crate::gluing::{Classification, GroupOrder, Pi1Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    IsDDB,
    NotDDB,
    Inconclusive,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The theorems and necessary conditions a verdict can rest on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// A positively curved 3-manifold is a double disk bundle iff it is S^3,
    /// a lens space or a prism manifold.
    #[serde(rename = "spherical-3-manifold-ddb-iff-lens-or-prism")]
    SphericalClassification,
    /// Binary tetrahedral, octahedral and icosahedral groups, and their
    /// products with coprime cyclic groups, are neither cyclic nor prism.
    #[serde(rename = "binary-polyhedral-product-not-ddb")]
    BinaryPolyhedral,
    /// A flat manifold with finite odd-order H_1 is not a double disk bundle.
    #[serde(rename = "flat-odd-homology-not-ddb")]
    FlatOddHomology,
    /// A zero-dimensional fiber sphere on one side gives a double cover, so
    /// H_1 surjects onto Z/2.
    #[serde(rename = "codim-zero-side-needs-z2-quotient")]
    CodimZeroDoubleCover,
    /// Zero-dimensional fiber spheres on both sides make the manifold fiber
    /// over S^1 up to a double cover, so pi_1 is infinite.
    #[serde(rename = "both-codim-zero-needs-infinite-pi1")]
    BothCodimZeroInfinite,
    /// For a manifold covered by a contractible one, both fiber spheres are
    /// zero-dimensional.
    #[serde(rename = "aspherical-forces-both-codim-zero")]
    AsphericalForcesCodimZero,
}

impl Rule {
    pub fn id(&self) -> &'static str {
        match self {
            Rule::SphericalClassification => "spherical-3-manifold-ddb-iff-lens-or-prism",
            Rule::BinaryPolyhedral => "binary-polyhedral-product-not-ddb",
            Rule::FlatOddHomology => "flat-odd-homology-not-ddb",
            Rule::CodimZeroDoubleCover => "codim-zero-side-needs-z2-quotient",
            Rule::BothCodimZeroInfinite => "both-codim-zero-needs-infinite-pi1",
            Rule::AsphericalForcesCodimZero => "aspherical-forces-both-codim-zero",
        }
    }

    pub fn hypothesis(&self) -> &'static str {
        match self {
            Rule::SphericalClassification | Rule::BinaryPolyhedral => {
                "closed 3-manifold of positive sectional curvature"
            }
            Rule::FlatOddHomology => "closed flat manifold",
            Rule::CodimZeroDoubleCover => "double disk bundle with a zero-dimensional fiber sphere",
            Rule::BothCodimZeroInfinite => {
                "double disk bundle with both fiber spheres zero-dimensional"
            }
            Rule::AsphericalForcesCodimZero => "aspherical double disk bundle",
        }
    }

    pub fn conclusion(&self) -> &'static str {
        match self {
            Rule::SphericalClassification => {
                "double disk bundle iff pi_1 is cyclic or a prism group"
            }
            Rule::BinaryPolyhedral => "not a double disk bundle",
            Rule::FlatOddHomology => "not a double disk bundle when H_1 is finite of odd order",
            Rule::CodimZeroDoubleCover => "H_1 surjects onto Z/2",
            Rule::BothCodimZeroInfinite => "pi_1 is infinite",
            Rule::AsphericalForcesCodimZero => "both fiber spheres are zero-dimensional",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factors: Option<InvariantFactors>,
    pub order: GroupOrder,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    pub homogeneous: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    pub rule: Option<Rule>,
    pub evidence: Evidence,
}

impl Verdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serializes")
    }
}

/// The cyclic or prism group a descriptor is isomorphic to, if any.
///
/// A cyclic group times a coprime cyclic group is cyclic. `Prism(+-1, beta)`
/// is cyclic of order `4 beta`. `Prism(alpha, beta) x C_m` with `m` coprime
/// to `4 alpha beta` is `Prism(alpha, beta m)`: with `c` the central
/// generator, `d = a c` and `e = b` satisfy the prism relations for
/// `(alpha, beta m)` and generate.
fn normal_form(d: &SpaceFormDescriptor) -> Option<Classification> {
    let n = d.order();
    match d.family {
        Family::Cyclic { .. } if n == 1 => Some(Classification::Trivial),
        Family::Cyclic { .. } => Some(Classification::Cyclic(n)),
        Family::Prism { alpha, .. } if alpha.abs() == 1 => Some(Classification::Cyclic(n)),
        Family::Prism { alpha, beta } => Some(Classification::PrismGroup {
            alpha: alpha.abs(),
            beta: (beta * d.cofactor) as i64,
        }),
        Family::BinT | Family::BinO | Family::BinI => None,
    }
}

/// Decides whether the spherical space form with group `d` is a double
/// disk bundle.
pub fn decide_spaceform(d: &SpaceFormDescriptor) -> Result<Verdict> {
    d.validate()?;
    let h1 = h1_invariants(&catalog_presentation(d)?);
    let order = d.order();
    let mut evidence = Evidence {
        invariant_factors: Some(h1.clone()),
        order: GroupOrder::Finite(order),
        classification: None,
        homogeneous: false,
        notes: Vec::new(),
    };
    if let Some(c) = normal_form(d) {
        if d.cofactor > 1
            || matches!(d.family, Family::Prism { alpha, .. } if alpha < 0 || alpha.abs() == 1)
        {
            evidence.notes.push(format!("{d} is isomorphic to {c}"));
        }
        evidence.classification = Some(c);
        return Ok(Verdict {
            answer: Answer::IsDDB,
            rule: Some(Rule::SphericalClassification),
            evidence,
        });
    }

    // binary polyhedral base: rule out both families from H_1 alone
    let h = h1.order().and_then(|h| h.to_u64()).unwrap_or(0);
    let not_cyclic = h < order;
    let not_prism = !h.is_multiple_of(4);
    evidence.classification = Some(Classification::Other);
    if not_cyclic && not_prism {
        evidence
            .notes
            .push(format!("|H_1| = {h} < {order}, so the group is not cyclic"));
        evidence.notes.push(format!(
            "4 does not divide |H_1| = {h}, while every prism group has |H_1| = 4 beta"
        ));
        evidence.homogeneous = d.cofactor == 1;
        Ok(Verdict {
            answer: Answer::NotDDB,
            rule: Some(Rule::BinaryPolyhedral),
            evidence,
        })
    } else {
        evidence
            .notes
            .push("abelianization does not separate the group from cyclic and prism groups".into());
        Ok(Verdict {
            answer: Answer::Inconclusive,
            rule: None,
            evidence,
        })
    }
}

/// The descriptor of a cyclic or prism classification, with signs dropped.
pub fn classification_descriptor(c: &Classification) -> Option<SpaceFormDescriptor> {
    match *c {
        Classification::Trivial => SpaceFormDescriptor::cyclic(1, 1).ok(),
        Classification::Cyclic(n) => SpaceFormDescriptor::cyclic(n, 1).ok(),
        Classification::PrismGroup { alpha, beta } => {
            SpaceFormDescriptor::prism(alpha.abs(), beta.unsigned_abs()).ok()
        }
        _ => None,
    }
}

/// Decides a flat manifold from the invariant factors of its first
/// homology. There is no sufficient condition, so the answer is never
/// `IsDDB`.
pub fn decide_flat(f: &InvariantFactors) -> Verdict {
    let order = if f.free_rank() > 0 {
        GroupOrder::Infinite
    } else {
        GroupOrder::Unknown
    };
    let evidence = Evidence {
        invariant_factors: Some(f.clone()),
        order,
        classification: None,
        homogeneous: false,
        notes: Vec::new(),
    };
    if is_finite_odd(f) {
        Verdict {
            answer: Answer::NotDDB,
            rule: Some(Rule::FlatOddHomology),
            evidence,
        }
    } else {
        Verdict {
            answer: Answer::Inconclusive,
            rule: None,
            evidence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Assumptions {
    pub aspherical: bool,
    pub ell_minus_zero: bool,
    pub both_ell_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleStatus {
    Satisfied,
    Violated,
    /// The hypothesis does not apply.
    Inactive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub status: RuleStatus,
    pub detail: String,
}

/// Evaluates the three necessary conditions against a group. A `Violated`
/// outcome means no double disk bundle with the assumed fiber dimensions
/// has this fundamental group.
pub fn check_structural_rules(report: &Pi1Report, a: Assumptions) -> Vec<RuleOutcome> {
    let h1 = &report.invariant_factors;
    let r1_active = a.ell_minus_zero || a.both_ell_zero || a.aspherical;
    let r2_active = a.both_ell_zero || a.aspherical;

    let r1 = if !r1_active {
        RuleOutcome {
            rule: Rule::CodimZeroDoubleCover,
            status: RuleStatus::Inactive,
            detail: "no side assumed to have zero-dimensional fibers".into(),
        }
    } else if surjects_onto_z2(h1) {
        RuleOutcome {
            rule: Rule::CodimZeroDoubleCover,
            status: RuleStatus::Satisfied,
            detail: format!("H_1 = {h1} surjects onto Z/2"),
        }
    } else {
        RuleOutcome {
            rule: Rule::CodimZeroDoubleCover,
            status: RuleStatus::Violated,
            detail: format!("H_1 = {h1} has no Z/2 quotient"),
        }
    };

    let r2 = if !r2_active {
        RuleOutcome {
            rule: Rule::BothCodimZeroInfinite,
            status: RuleStatus::Inactive,
            detail: "not both sides assumed to have zero-dimensional fibers".into(),
        }
    } else if let GroupOrder::Finite(n) = report.order {
        RuleOutcome {
            rule: Rule::BothCodimZeroInfinite,
            status: RuleStatus::Violated,
            detail: format!("pi_1 is finite of order {n}"),
        }
    } else {
        RuleOutcome {
            rule: Rule::BothCodimZeroInfinite,
            status: RuleStatus::Satisfied,
            detail: format!("pi_1 order is {}", report.order),
        }
    };

    let r3 = if !a.aspherical {
        RuleOutcome {
            rule: Rule::AsphericalForcesCodimZero,
            status: RuleStatus::Inactive,
            detail: "not assumed aspherical".into(),
        }
    } else {
        let failed: Vec<&str> = [&r1, &r2]
            .iter()
            .filter(|o| o.status == RuleStatus::Violated)
            .map(|o| o.rule.id())
            .collect();
        if failed.is_empty() {
            RuleOutcome {
                rule: Rule::AsphericalForcesCodimZero,
                status: RuleStatus::Satisfied,
                detail: "both forced conditions hold".into(),
            }
        } else {
            RuleOutcome {
                rule: Rule::AsphericalForcesCodimZero,
                status: RuleStatus::Violated,
                detail: format!("forced conditions fail: {}", failed.join(", ")),
            }
        }
    };
    vec![r1, r2, r3]
}

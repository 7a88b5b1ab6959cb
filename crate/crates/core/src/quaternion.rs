//! Exact quaternions with coordinates in a real quadratic field Q(sqrt d).

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `rational + surd * sqrt(d)` with `d` squarefree; `d = 1` means plain Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    rational: BigRational,
    surd: BigRational,
    d: u32,
}

fn is_squarefree(d: u32) -> bool {
    (2..)
        .take_while(|k| k * k <= d)
        .all(|k| !d.is_multiple_of(k * k))
}

fn rat(n: i64, m: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(m))
}

impl QuadExt {
    pub fn new(rational: BigRational, surd: BigRational, d: u32) -> Result<Self> {
        if d == 0 || !is_squarefree(d) {
            return Err(Error::Malformed(format!(
                "{d} is not a squarefree positive integer"
            )));
        }
        if d == 1 {
            return Ok(QuadExt {
                rational: rational + surd,
                surd: BigRational::zero(),
                d,
            });
        }
        Ok(QuadExt { rational, surd, d })
    }

    /// `(a / b) + (c / e) sqrt(d)` from small integers.
    pub fn from_ratios(a: i64, b: i64, c: i64, e: i64, d: u32) -> Result<Self> {
        QuadExt::new(rat(a, b), rat(c, e), d)
    }

    pub fn rational(v: BigRational, d: u32) -> Result<Self> {
        QuadExt::new(v, BigRational::zero(), d)
    }

    pub fn zero(d: u32) -> Self {
        QuadExt::rational(BigRational::zero(), d).expect("caller passes a valid field")
    }

    pub fn one(d: u32) -> Self {
        QuadExt::rational(BigRational::one(), d).expect("caller passes a valid field")
    }

    pub fn discriminant(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    fn check(&self, other: &QuadExt) -> Result<()> {
        if self.d != other.d {
            Err(Error::DiscriminantMismatch(self.d, other.d))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check(other)?;
        Ok(QuadExt {
            rational: &self.rational + &other.rational,
            surd: &self.surd + &other.surd,
            d: self.d,
        })
    }

    pub fn sub(&self, other: &QuadExt) -> Result<QuadExt> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt {
            rational: -&self.rational,
            surd: -&self.surd,
            d: self.d,
        }
    }

    pub fn mul(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check(other)?;
        let d = BigRational::from_integer(BigInt::from(self.d));
        Ok(QuadExt {
            rational: &self.rational * &other.rational + &self.surd * &other.surd * d,
            surd: &self.rational * &other.surd + &self.surd * &other.rational,
            d: self.d,
        })
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<QuadExt> {
        let d = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.rational * &self.rational - &self.surd * &self.surd * d;
        if norm.is_zero() {
            return None;
        }
        Some(QuadExt {
            rational: &self.rational / &norm,
            surd: -&self.surd / &norm,
            d: self.d,
        })
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.surd.is_zero()) {
            (_, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "{}√{}", self.surd, self.d),
            (false, false) => {
                let sign = if self.surd.is_negative() { '-' } else { '+' };
                write!(f, "{} {sign} {}√{}", self.rational, self.surd.abs(), self.d)
            }
        }
    }
}

/// `w + x i + y j + z k`, all coordinates in one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub w: QuadExt,
    pub x: QuadExt,
    pub y: QuadExt,
    pub z: QuadExt,
}

impl Quaternion {
    pub fn new(w: QuadExt, x: QuadExt, y: QuadExt, z: QuadExt) -> Result<Self> {
        w.check(&x)?;
        w.check(&y)?;
        w.check(&z)?;
        Ok(Quaternion { w, x, y, z })
    }

    /// Quaternion with rational coordinates `[w, x, y, z] / den` in Q(sqrt d).
    pub fn rational(coords: [i64; 4], den: i64, d: u32) -> Result<Self> {
        let c = |v| QuadExt::from_ratios(v, den, 0, 1, d);
        Quaternion::new(c(coords[0])?, c(coords[1])?, c(coords[2])?, c(coords[3])?)
    }

    pub fn one(d: u32) -> Self {
        Quaternion {
            w: QuadExt::one(d),
            x: QuadExt::zero(d),
            y: QuadExt::zero(d),
            z: QuadExt::zero(d),
        }
    }

    pub fn discriminant(&self) -> u32 {
        self.w.d
    }

    pub fn conjugate(&self) -> Quaternion {
        Quaternion {
            w: self.w.clone(),
            x: self.x.neg(),
            y: self.y.neg(),
            z: self.z.neg(),
        }
    }

    pub fn norm(&self) -> QuadExt {
        let sq = |v: &QuadExt| v.mul(v).expect("coordinates share a field");
        sq(&self.w)
            .add(&sq(&self.x))
            .and_then(|s| s.add(&sq(&self.y)))
            .and_then(|s| s.add(&sq(&self.z)))
            .expect("coordinates share a field")
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == QuadExt::one(self.discriminant())
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) + ({})i + ({})j + ({})k",
            self.w, self.x, self.y, self.z
        )
    }
}

/// Hamilton product.
pub fn quat_mul(p: &Quaternion, q: &Quaternion) -> Result<Quaternion> {
    if p.discriminant() != q.discriminant() {
        return Err(Error::DiscriminantMismatch(
            p.discriminant(),
            q.discriminant(),
        ));
    }
    let m = |a: &QuadExt, b: &QuadExt| a.mul(b).expect("checked above");
    let sum = |terms: [QuadExt; 4]| {
        let [a, b, c, e] = terms;
        a.add(&b)
            .and_then(|s| s.add(&c))
            .and_then(|s| s.add(&e))
            .expect("checked above")
    };
    Ok(Quaternion {
        w: sum([
            m(&p.w, &q.w),
            m(&p.x, &q.x).neg(),
            m(&p.y, &q.y).neg(),
            m(&p.z, &q.z).neg(),
        ]),
        x: sum([
            m(&p.w, &q.x),
            m(&p.x, &q.w),
            m(&p.y, &q.z),
            m(&p.z, &q.y).neg(),
        ]),
        y: sum([
            m(&p.w, &q.y),
            m(&p.x, &q.z).neg(),
            m(&p.y, &q.w),
            m(&p.z, &q.x),
        ]),
        z: sum([
            m(&p.w, &q.z),
            m(&p.x, &q.y),
            m(&p.y, &q.x).neg(),
            m(&p.z, &q.w),
        ]),
    })
}

/// Multiplicative closure of unit quaternions, deduplicated exactly.
pub fn quaternion_closure(gens: &[Quaternion], cap: usize) -> Result<Vec<Quaternion>> {
    let d = match gens.first() {
        Some(g) => g.discriminant(),
        None => return Ok(vec![Quaternion::rational([1, 0, 0, 0], 1, 1)?]),
    };
    for g in gens {
        if g.discriminant() != d {
            return Err(Error::DiscriminantMismatch(d, g.discriminant()));
        }
        if !g.is_unit() {
            return Err(Error::Malformed(format!(
                "generator {g} is not a unit quaternion"
            )));
        }
    }
    let one = Quaternion::one(d);
    let mut seen: HashSet<Quaternion> = HashSet::from([one.clone()]);
    let mut order = vec![one.clone()];
    let mut queue = VecDeque::from([one]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = quat_mul(&p, g)?;
            if seen.contains(&q) {
                continue;
            }
            if seen.len() >= cap {
                return Err(Error::CapExceeded(cap));
            }
            seen.insert(q.clone());
            order.push(q.clone());
            queue.push_back(q);
        }
    }
    Ok(order)
}

/// Standard generators of the finite subgroups used as cross-checks.
pub mod realizations {
    use super::*;

    /// `i` and `j`, generating the quaternion group of order 8.
    pub fn quaternion_group() -> Vec<Quaternion> {
        vec![
            Quaternion::rational([0, 1, 0, 0], 1, 1).unwrap(),
            Quaternion::rational([0, 0, 1, 0], 1, 1).unwrap(),
        ]
    }

    fn omega(d: u32) -> Quaternion {
        Quaternion::rational([-1, 1, 1, 1], 2, d).unwrap()
    }

    /// `(-1 + i + j + k)/2` and `i`: the Hurwitz units, order 24.
    pub fn binary_tetrahedral() -> Vec<Quaternion> {
        vec![omega(1), Quaternion::rational([0, 1, 0, 0], 1, 1).unwrap()]
    }

    /// Adds `(1 + i)/sqrt 2`, order 48.
    pub fn binary_octahedral() -> Vec<Quaternion> {
        let h = QuadExt::from_ratios(0, 1, 1, 2, 2).unwrap();
        let zero = QuadExt::zero(2);
        vec![
            omega(2),
            Quaternion::new(h.clone(), h, zero.clone(), zero).unwrap(),
        ]
    }

    /// Adds `(phi + phi^-1 i + j)/2` with `phi` the golden ratio, order 120.
    pub fn binary_icosahedral() -> Vec<Quaternion> {
        // phi / 2 = (1 + sqrt5)/4, phi^-1 / 2 = (-1 + sqrt5)/4
        let w = QuadExt::from_ratios(1, 4, 1, 4, 5).unwrap();
        let x = QuadExt::from_ratios(-1, 4, 1, 4, 5).unwrap();
        let y = QuadExt::from_ratios(1, 2, 0, 1, 5).unwrap();
        vec![
            omega(5),
            Quaternion::new(w, x, y, QuadExt::zero(5)).unwrap(),
        ]
    }

    /// `e^{pi i / n}` and `j`, generating the binary dihedral group of order
    /// `4n`, for the `n` whose coordinates are quadratic: 2, 3, 4, 6.
    pub fn binary_dihedral(n: u32) -> Option<Vec<Quaternion>> {
        let (c, s) = match n {
            2 => (QuadExt::zero(1), QuadExt::one(1)),
            // cos(pi/3) = 1/2, sin(pi/3) = sqrt3/2
            3 => (
                QuadExt::from_ratios(1, 2, 0, 1, 3).unwrap(),
                QuadExt::from_ratios(0, 1, 1, 2, 3).unwrap(),
            ),
            4 => (
                QuadExt::from_ratios(0, 1, 1, 2, 2).unwrap(),
                QuadExt::from_ratios(0, 1, 1, 2, 2).unwrap(),
            ),
            6 => (
                QuadExt::from_ratios(0, 1, 1, 2, 3).unwrap(),
                QuadExt::from_ratios(1, 2, 0, 1, 3).unwrap(),
            ),
            _ => return None,
        };
        let d = c.discriminant();
        let zero = QuadExt::zero(d);
        let rot = Quaternion::new(c, s, zero.clone(), zero.clone()).unwrap();
        let j = Quaternion::new(zero.clone(), zero.clone(), QuadExt::one(d), zero).unwrap();
        Some(vec![rot, j])
    }
}

#[cfg(test)]
mod tests {
    use super::realizations::*;
    use super::*;

    const CAP: usize = 1000;

    fn q(c: [i64; 4]) -> Quaternion {
        Quaternion::rational(c, 1, 1).unwrap()
    }

    #[test]
    fn hamilton_identities() {
        let (i, j, k) = (q([0, 1, 0, 0]), q([0, 0, 1, 0]), q([0, 0, 0, 1]));
        assert_eq!(quat_mul(&j, &i).unwrap(), q([0, 0, 0, -1]));
        assert_eq!(quat_mul(&i, &j).unwrap(), k);
        assert_eq!(quat_mul(&k, &k).unwrap(), q([-1, 0, 0, 0]));
    }

    #[test]
    fn omega_cubed_is_one() {
        let w = Quaternion::rational([-1, 1, 1, 1], 2, 1).unwrap();
        let w3 = quat_mul(&quat_mul(&w, &w).unwrap(), &w).unwrap();
        assert_eq!(w3, Quaternion::one(1));
    }

    #[test]
    fn unit_times_conjugate_is_one() {
        for g in binary_icosahedral()
            .iter()
            .chain(binary_octahedral().iter())
        {
            assert!(g.is_unit());
            assert_eq!(
                quat_mul(g, &g.conjugate()).unwrap(),
                Quaternion::one(g.discriminant())
            );
        }
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = Quaternion::one(2);
        let b = Quaternion::one(5);
        assert_eq!(quat_mul(&a, &b), Err(Error::DiscriminantMismatch(2, 5)));
        let x = QuadExt::one(2);
        assert!(x.add(&QuadExt::one(3)).is_err());
    }

    #[test]
    fn field_arithmetic() {
        let r2 = QuadExt::from_ratios(0, 1, 1, 1, 2).unwrap();
        assert_eq!(
            r2.mul(&r2).unwrap(),
            QuadExt::from_ratios(2, 1, 0, 1, 2).unwrap()
        );
        let x = QuadExt::from_ratios(3, 2, -5, 7, 5).unwrap();
        assert_eq!(x.mul(&x.inverse().unwrap()).unwrap(), QuadExt::one(5));
        assert!(QuadExt::zero(5).inverse().is_none());
        // d = 1 folds the surd into the rational part
        assert_eq!(
            QuadExt::from_ratios(1, 2, 1, 2, 1).unwrap(),
            QuadExt::one(1)
        );
        assert!(QuadExt::from_ratios(1, 1, 1, 1, 4).is_err());
    }

    #[test]
    fn closure_sizes() {
        assert_eq!(
            quaternion_closure(&quaternion_group(), CAP).unwrap().len(),
            8
        );
        assert_eq!(
            quaternion_closure(&binary_tetrahedral(), CAP)
                .unwrap()
                .len(),
            24
        );
        assert_eq!(
            quaternion_closure(&binary_octahedral(), CAP).unwrap().len(),
            48
        );
        assert_eq!(
            quaternion_closure(&binary_icosahedral(), CAP)
                .unwrap()
                .len(),
            120
        );
    }

    #[test]
    fn closures_are_unit_groups_closed_under_inverse() {
        for gens in [
            binary_tetrahedral(),
            binary_octahedral(),
            binary_icosahedral(),
        ] {
            let elems = quaternion_closure(&gens, CAP).unwrap();
            let set: HashSet<&Quaternion> = elems.iter().collect();
            for e in &elems {
                assert!(e.is_unit());
                assert!(set.contains(&e.conjugate()));
            }
        }
    }

    #[test]
    fn binary_dihedral_orders() {
        for n in [2u32, 3, 4, 6] {
            let gens = binary_dihedral(n).unwrap();
            assert_eq!(
                quaternion_closure(&gens, CAP).unwrap().len(),
                4 * n as usize
            );
        }
        assert!(binary_dihedral(5).is_none());
    }

    #[test]
    fn cap_exceeded_for_infinite_generation() {
        // (3 + 4i)/5 has infinite order
        let g = Quaternion::rational([3, 4, 0, 0], 5, 1).unwrap();
        assert_eq!(quaternion_closure(&[g], 50), Err(Error::CapExceeded(50)));
    }

    #[test]
    fn non_unit_rejected() {
        let g = q([1, 1, 0, 0]);
        assert!(matches!(
            quaternion_closure(&[g], CAP),
            Err(Error::Malformed(_))
        ));
    }
}

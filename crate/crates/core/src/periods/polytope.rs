//! Lattice polytopes in Z^3: hulls of Newton-polytope supports, facet
//! inequalities, reflexivity, polar duals.

use super::laurent::{Exp3, LaurentPolynomial3};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("origin is not interior to the polytope")]
    OriginNotInterior,
}

/// Facet inequality <n, x> <= c for all points, with primitive integer
/// normal n and tight bound c.
pub type Facet = (Exp3, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope3 {
    pub vertices: Vec<Exp3>,
}

fn dot(a: &Exp3, b: &Exp3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Exp3, b: &Exp3) -> Exp3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn primitive(v: Exp3) -> Exp3 {
    let g = v[0].abs().gcd(&v[1].abs()).gcd(&v[2].abs());
    if g == 0 {
        return v;
    }
    [v[0] / g, v[1] / g, v[2] / g]
}

/// All facet inequalities of the hull of `points`, by exhaustive plane
/// enumeration over point triples (the supports here are small).
pub fn facets_of(points: &[Exp3]) -> Result<Vec<Facet>, PolytopeError> {
    let n = points.len();
    let mut facets: Vec<Facet> = vec![];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let u = [
                    points[j][0] - points[i][0],
                    points[j][1] - points[i][1],
                    points[j][2] - points[i][2],
                ];
                let v = [
                    points[k][0] - points[i][0],
                    points[k][1] - points[i][1],
                    points[k][2] - points[i][2],
                ];
                let nm = cross(&u, &v);
                if nm == [0, 0, 0] {
                    continue;
                }
                let nm = primitive(nm);
                let c = dot(&nm, &points[i]);
                let mut above = false;
                let mut below = false;
                for p in points {
                    let d = dot(&nm, p);
                    if d > c {
                        above = true;
                    } else if d < c {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                let f = if above { (primitive([-nm[0], -nm[1], -nm[2]]), -c) } else { (nm, c) };
                if !facets.contains(&f) {
                    facets.push(f);
                }
            }
        }
    }
    if facets.len() < 4 {
        return Err(PolytopeError::NotFullDimensional);
    }
    facets.sort();
    Ok(facets)
}

impl LatticePolytope3 {
    /// Convex hull of a point set: the extreme points are those lying on
    /// at least three facets with linearly independent normals.
    pub fn hull(points: &[Exp3]) -> Result<Self, PolytopeError> {
        let mut pts: Vec<Exp3> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() == 1 {
            return Ok(LatticePolytope3 { vertices: pts });
        }
        let points = &pts[..];
        let facets = facets_of(points)?;
        let mut vertices = vec![];
        for p in points {
            let active: Vec<Exp3> = facets
                .iter()
                .filter(|(n, c)| dot(n, p) == *c)
                .map(|(n, _)| *n)
                .collect();
            if rank3(&active) == 3 && !vertices.contains(p) {
                vertices.push(*p);
            }
        }
        vertices.sort();
        Ok(LatticePolytope3 { vertices })
    }

    pub fn facets(&self) -> Result<Vec<Facet>, PolytopeError> {
        facets_of(&self.vertices)
    }

    pub fn origin_interior(&self) -> Result<bool, PolytopeError> {
        Ok(self.facets()?.iter().all(|(_, c)| *c > 0))
    }

    /// Vertices of the polar dual {y : <y, x> <= 1 for all x in P}, i.e.
    /// n/c per facet (n, c).
    pub fn polar_dual(&self) -> Result<Vec<[BigRational; 3]>, PolytopeError> {
        let facets = self.facets()?;
        if facets.iter().any(|(_, c)| *c <= 0) {
            return Err(PolytopeError::OriginNotInterior);
        }
        Ok(facets
            .iter()
            .map(|(n, c)| {
                [
                    BigRational::new(BigInt::from(n[0]), BigInt::from(*c)),
                    BigRational::new(BigInt::from(n[1]), BigInt::from(*c)),
                    BigRational::new(BigInt::from(n[2]), BigInt::from(*c)),
                ]
            })
            .collect())
    }

    /// Reflexive iff every facet is at lattice distance 1 from the origin
    /// (equivalently the polar dual is again a lattice polytope).
    pub fn is_reflexive(&self) -> Result<bool, PolytopeError> {
        let facets = self.facets()?;
        if facets.iter().any(|(_, c)| *c <= 0) {
            return Err(PolytopeError::OriginNotInterior);
        }
        Ok(facets.iter().all(|(_, c)| *c == 1))
    }
}

fn rank3(vs: &[Exp3]) -> usize {
    // rank of a small set of integer vectors via exact elimination
    let mut rows: Vec<[i64; 3]> = vs.to_vec();
    let mut rank = 0;
    for col in 0..3 {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let a = rows[rank][col];
                let b = rows[r][col];
                let g = a.gcd(&b);
                let (fa, fb) = (b / g, a / g);
                for c in 0..3 {
                    rows[r][c] = rows[r][c] * fb - rows[rank][c] * fa;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Newton polytope of a Laurent polynomial.
pub fn newton_polytope(phi: &LaurentPolynomial3) -> Result<LatticePolytope3, PolytopeError> {
    LatticePolytope3::hull(&phi.support())
}

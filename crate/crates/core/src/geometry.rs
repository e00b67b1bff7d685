//! Point configurations, the normalization map, and exact sphere sampling.
//!
//! A configuration is an ordered list of d+2 points in some rational ambient
//! space. The map `phi` rewrites the last point in the affine basis defined
//! by the first d+1 points; everything downstream of that rewrite works in
//! normalized coordinates.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RationalMatrix};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::simplex;

/// Ordered list of d+2 points of equal dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointConfiguration {
    ambient_dim: usize,
    intrinsic_d: usize,
    points: Vec<Vec<Rational>>,
    spherical: bool,
}

impl PointConfiguration {
    /// Build and validate: exactly d+2 points of equal length; when
    /// `spherical` is set, every point must have squared norm exactly 1.
    pub fn new(intrinsic_d: usize, points: Vec<Vec<Rational>>, spherical: bool) -> Result<Self> {
        if points.len() != intrinsic_d + 2 {
            return Err(Error::InvalidConfiguration {
                field: "points".to_string(),
                reason: format!(
                    "expected {} points for d = {intrinsic_d}, got {}",
                    intrinsic_d + 2,
                    points.len()
                ),
            });
        }
        let ambient_dim = points[0].len();
        if ambient_dim == 0 {
            return Err(Error::InvalidConfiguration {
                field: "points".to_string(),
                reason: "points must have at least one coordinate".to_string(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != ambient_dim {
                return Err(Error::InvalidConfiguration {
                    field: "points".to_string(),
                    reason: format!(
                        "point {i} has {} coordinates, expected {ambient_dim}",
                        p.len()
                    ),
                });
            }
        }
        if spherical {
            for (i, p) in points.iter().enumerate() {
                if !linalg::dot(p, p).is_one() {
                    return Err(Error::InvalidConfiguration {
                        field: "spherical".to_string(),
                        reason: format!("point {i} does not have squared norm 1"),
                    });
                }
            }
        }
        Ok(Self {
            ambient_dim,
            intrinsic_d,
            points,
            spherical,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn intrinsic_d(&self) -> usize {
        self.intrinsic_d
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        &self.points[i]
    }

    pub fn is_spherical(&self) -> bool {
        self.spherical
    }

    /// Canonical one-line rendering, also the digest preimage.
    pub fn canonical_string(&self) -> String {
        let points: Vec<String> = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("d={};points={}", self.intrinsic_d, points.join("|"))
    }

    /// Hex SHA-256 of the canonical rendering.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let hash = Sha256::digest(self.canonical_string().as_bytes());
        let mut out = String::with_capacity(64);
        for byte in hash {
            use std::fmt::Write;
            let _ = write!(out, "{byte:02x}");
        }
        out
    }
}

/// JSON wire format for configurations: rational strings, optional flags.
#[derive(Serialize, Deserialize)]
struct ConfigurationFile {
    d: usize,
    points: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ambient_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spherical: Option<bool>,
}

/// Parse the JSON configuration format.
pub fn configuration_from_json(text: &str) -> Result<PointConfiguration> {
    let file: ConfigurationFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidConfiguration {
            field: "json".to_string(),
            reason: e.to_string(),
        })?;
    let mut points = Vec::with_capacity(file.points.len());
    for (i, raw) in file.points.iter().enumerate() {
        let p: Vec<Rational> = raw
            .iter()
            .map(|s| {
                parse_rational(s).map_err(|_| Error::InvalidConfiguration {
                    field: "points".to_string(),
                    reason: format!("point {i}: bad rational `{s}`"),
                })
            })
            .collect::<Result<_>>()?;
        points.push(p);
    }
    if let Some(n) = file.ambient_dim {
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidConfiguration {
                field: "ambient_dim".to_string(),
                reason: format!("declared ambient_dim {n} does not match the points"),
            });
        }
    }
    PointConfiguration::new(file.d, points, file.spherical.unwrap_or(false))
}

/// Serialize a configuration to the JSON wire format.
pub fn configuration_to_json(config: &PointConfiguration) -> String {
    let file = ConfigurationFile {
        d: config.intrinsic_d(),
        points: config
            .points()
            .iter()
            .map(|p| p.iter().map(format_rational).collect())
            .collect(),
        ambient_dim: Some(config.ambient_dim()),
        spherical: if config.is_spherical() { Some(true) } else { None },
    };
    serde_json::to_string(&file).expect("plain data serializes")
}

/// Coordinates of the last configuration point in the affine basis of the
/// first d+1 points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaCoordinates {
    coords: Vec<Rational>,
}

impl AlphaCoordinates {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

/// Outcome of the normalization map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PhiOutcome {
    /// The last point lies in the affine hull of the prefix; its coordinates
    /// in the standard affine basis are unique.
    Inside(AlphaCoordinates),
    /// The last point lies outside the affine hull of the prefix (possible
    /// only when the ambient dimension exceeds d).
    OutsideHull,
}

/// True iff the differences `p_i - p_0` are linearly independent.
pub fn affinely_independent(points: &[Vec<Rational>]) -> bool {
    if points.is_empty() {
        return false;
    }
    if points.len() == 1 {
        return true;
    }
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| linalg::vec_sub(p, &points[0]))
        .collect();
    let m = RationalMatrix::from_columns(points[0].len(), &diffs).expect("equal lengths");
    m.rank() == diffs.len()
}

/// The normalization map: express the last point in the affine basis given
/// by the first d+1 points, i.e. the unique alpha with
/// `x_{d+1} - x_0 = sum_k alpha_k (x_k - x_0)`.
pub fn phi(config: &PointConfiguration) -> Result<PhiOutcome> {
    let d = config.intrinsic_d();
    let prefix = &config.points()[..=d];
    if !affinely_independent(prefix) {
        return Err(Error::DegenerateConfiguration(d));
    }
    let basis_diffs: Vec<Vec<Rational>> = prefix[1..]
        .iter()
        .map(|p| linalg::vec_sub(p, &prefix[0]))
        .collect();
    let system = RationalMatrix::from_columns(config.ambient_dim(), &basis_diffs)?;
    let rhs = linalg::vec_sub(config.point(d + 1), config.point(0));
    match system.solve(&rhs)? {
        // full column rank, so the solution is unique
        Some(alpha) => Ok(PhiOutcome::Inside(AlphaCoordinates::new(alpha))),
        None => Ok(PhiOutcome::OutsideHull),
    }
}

/// Barycentric-style coordinates of an arbitrary point with respect to the
/// configuration's affine basis, or `None` if the point is outside the hull.
pub fn normalize_point(config: &PointConfiguration, x: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let d = config.intrinsic_d();
    let prefix = &config.points()[..=d];
    let basis_diffs: Vec<Vec<Rational>> = prefix[1..]
        .iter()
        .map(|p| linalg::vec_sub(p, &prefix[0]))
        .collect();
    let system = RationalMatrix::from_columns(config.ambient_dim(), &basis_diffs)?;
    let rhs = linalg::vec_sub(x, config.point(0));
    system.solve(&rhs)
}

/// Inverse stereographic projection of a rational point `t` in the equator
/// plane: `x = (2t, |t|^2 - 1) / (|t|^2 + 1)`. Always has squared norm
/// exactly 1.
pub fn inverse_stereographic(t: &[Rational]) -> Vec<Rational> {
    let norm_sq = linalg::dot(t, t);
    let denom = &norm_sq + Rational::one();
    let mut x: Vec<Rational> = t.iter().map(|ti| (ti + ti) / &denom).collect();
    x.push((&norm_sq - Rational::one()) / &denom);
    x
}

/// One exact point on the (d-1)-sphere: inverse stereographic image of a
/// rational grid point with numerators in `[-denom_bound, denom_bound]` and
/// denominators in `[1, denom_bound]`.
pub fn sample_sphere_point<R: Rng>(d: usize, denom_bound: u64, rng: &mut R) -> Vec<Rational> {
    assert!(d >= 2, "sphere sampling needs d >= 2");
    assert!(denom_bound >= 1);
    let bound = denom_bound as i64;
    let t: Vec<Rational> = (0..d - 1)
        .map(|_| {
            let numer = rng.gen_range(-bound..=bound);
            let denom = rng.gen_range(1..=bound);
            Rational::new(numer.into(), denom.into())
        })
        .collect();
    inverse_stereographic(&t)
}

/// A sampled spherical configuration of d+2 points with affinely independent
/// prefix, plus the number of degenerate draws discarded along the way.
pub fn sample_configuration<R: Rng>(
    d: usize,
    denom_bound: u64,
    rng: &mut R,
) -> (PointConfiguration, u64) {
    let mut discarded = 0;
    loop {
        let points: Vec<Vec<Rational>> = (0..d + 2)
            .map(|_| sample_sphere_point(d, denom_bound, rng))
            .collect();
        if affinely_independent(&points[..=d]) {
            let config = PointConfiguration::new(d, points, true)
                .expect("sampled points are unit vectors");
            return (config, discarded);
        }
        discarded += 1;
    }
}

/// True iff every point is a vertex of the convex hull of the set, i.e. no
/// point is a convex combination of the others. Decided exactly, one
/// feasibility LP per point.
pub fn convex_position(points: &[Vec<Rational>]) -> bool {
    assert!(points.len() >= 2, "convex position needs at least 2 points");
    let dim = points[0].len();
    for (i, target) in points.iter().enumerate() {
        let others: Vec<&Vec<Rational>> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p)
            .collect();
        // lambda >= 0 with sum lambda_j p_j = target and sum lambda_j = 1
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(dim + 1);
        for coord in 0..dim {
            rows.push(others.iter().map(|p| p[coord].clone()).collect());
        }
        rows.push(vec![Rational::one(); others.len()]);
        let a = RationalMatrix::from_rows(rows).expect("equal lengths");
        let mut rhs: Vec<Rational> = target.clone();
        rhs.push(Rational::one());
        if simplex::nonnegative_solution(&a, &rhs)
            .expect("dimensions consistent")
            .is_some()
        {
            return false;
        }
    }
    true
}

/// The paper-facing witness point `(1/(2d), ..., 1/(2d))` together with the
/// standard affine basis; used by the genericity certificate.
pub fn certificate_alpha(d: usize) -> AlphaCoordinates {
    AlphaCoordinates::new(vec![Rational::new(1.into(), (2 * d as i64).into()); d])
}

/// `{0, e_1, ..., e_d, alpha}` as plain points in dimension d.
pub fn standard_basis_with(alpha: &AlphaCoordinates) -> Vec<Vec<Rational>> {
    let d = alpha.d();
    let mut points = vec![vec![Rational::zero(); d]];
    for k in 0..d {
        let mut e = vec![Rational::zero(); d];
        e[k] = Rational::one();
        points.push(e);
    }
    points.push(alpha.coords().to_vec());
    points
}

//! The subtransitivity decision core.
//!
//! For a tuple (g_1, ..., g_{d+1}) of orthogonal matrices and normalized
//! coordinates alpha, a nonconstant affine map f(x) = Ax + b with
//! f(e_k) = g_k f(0) for k <= d and f(alpha) = g_{d+1} f(0) exists exactly
//! when the n x n system
//!
//!     M(alpha) = sum_k alpha_k (g_k - I) + (I - g_{d+1})
//!
//! has a kernel vector outside the fixed subspace of the tuple. `decide`
//! settles that by an exact rank comparison and, in the positive case,
//! reconstructs and verifies the witness (b, A) with A = (g_1 b - b, ...,
//! g_d b - b). `oracle_decide` re-derives the answer from the full linear
//! system in all entries of A and b, and exists purely to cross-check
//! `decide`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    certificate_alpha, normalize_point, phi, AlphaCoordinates, PhiOutcome, PointConfiguration,
};
use crate::groups::{
    fixed_subspace, sampled_tuple_indices, tuple_indices_at, tuple_space_size, ElementTuple,
    FiniteMatrixGroup, TupleMode,
};
use crate::linalg::{self, RationalMatrix, Subspace};
use crate::rational::Rational;

/// A decision instance: normalized coordinates plus an element tuple of
/// length d+1.
#[derive(Clone, Debug)]
pub struct SubtransInstance {
    alpha: AlphaCoordinates,
    tuple: ElementTuple,
}

impl SubtransInstance {
    pub fn new(alpha: AlphaCoordinates, tuple: ElementTuple) -> Result<Self> {
        if tuple.len() != alpha.d() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "tuple of length {} does not match alpha of length {}",
                tuple.len(),
                alpha.d()
            )));
        }
        let n = tuple.ambient_dim();
        if tuple.elements().iter().any(|e| e.dim() != n) {
            return Err(Error::DimensionMismatch(
                "tuple elements have mixed dimensions".to_string(),
            ));
        }
        Ok(Self { alpha, tuple })
    }

    pub fn alpha(&self) -> &AlphaCoordinates {
        &self.alpha
    }

    pub fn tuple(&self) -> &ElementTuple {
        &self.tuple
    }

    pub fn into_parts(self) -> (AlphaCoordinates, ElementTuple) {
        (self.alpha, self.tuple)
    }

    pub fn d(&self) -> usize {
        self.alpha.d()
    }

    pub fn ambient_dim(&self) -> usize {
        self.tuple.ambient_dim()
    }
}

/// A verified nonconstant affine solution in normalized coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineWitness {
    /// Translation part; a kernel vector of M(alpha) outside Fix.
    pub b: Vec<Rational>,
    /// Linear part, n x d, column k equal to g_k b - b.
    pub a: RationalMatrix,
}

/// Outcome of `decide`, with the dimensions behind the rank comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubtransDecision {
    pub outcome: DecisionOutcome,
    /// dim ker M(alpha)
    pub kernel_dim: usize,
    /// dim Fix(g_1, ..., g_{d+1})
    pub fixed_dim: usize,
    /// Ambient dimension n; the quotient system has size n' = n - fixed_dim.
    pub ambient_dim: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DecisionOutcome {
    /// Every solution of the system is a fixed point, so every affine
    /// solution is constant.
    NoNonconstantSolution,
    Witness(AffineWitness),
}

impl SubtransDecision {
    pub fn is_witness(&self) -> bool {
        matches!(self.outcome, DecisionOutcome::Witness(_))
    }

    pub fn witness(&self) -> Option<&AffineWitness> {
        match &self.outcome {
            DecisionOutcome::Witness(w) => Some(w),
            DecisionOutcome::NoNonconstantSolution => None,
        }
    }

    /// Size of the quotient system after factoring out fixed points.
    pub fn quotient_dim(&self) -> usize {
        self.ambient_dim - self.fixed_dim
    }
}

/// Assemble M(alpha) = sum_k alpha_k (g_k - I) + (I - g_{d+1}).
pub fn build_system(instance: &SubtransInstance) -> RationalMatrix {
    let n = instance.ambient_dim();
    let d = instance.d();
    let alpha = instance.alpha.coords();
    let last = instance.tuple.element(d).matrix();
    // the -alpha_k I terms and the +I term collapse onto the diagonal
    let diagonal_shift = Rational::from_integer(1.into()) - alpha.iter().sum::<Rational>();
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = -last.get(i, j).clone();
            for (k, alpha_k) in alpha.iter().enumerate() {
                let g = instance.tuple.element(k).matrix().get(i, j);
                if !g.is_zero() {
                    acc += alpha_k * g;
                }
            }
            if i == j {
                acc += &diagonal_shift;
            }
            m.set(i, j, acc);
        }
    }
    m
}

/// Decide whether the instance admits a nonconstant affine solution.
///
/// The kernel of M(alpha) always contains Fix; a witness exists exactly when
/// the containment is strict. The witness translation is the first kernel
/// basis vector outside Fix, which makes the output deterministic.
pub fn decide(instance: &SubtransInstance) -> SubtransDecision {
    let n = instance.ambient_dim();
    let fix = fixed_subspace(&instance.tuple);
    let system = build_system(instance);
    let kernel_dim = n - system.rank();

    if kernel_dim == fix.dim() {
        return SubtransDecision {
            outcome: DecisionOutcome::NoNonconstantSolution,
            kernel_dim,
            fixed_dim: fix.dim(),
            ambient_dim: n,
        };
    }

    let kernel = system.kernel_basis();
    let witness = extract_witness(instance, &kernel, &fix);
    debug_assert!(verify_witness(instance, &witness.b, &witness.a));
    SubtransDecision {
        outcome: DecisionOutcome::Witness(witness),
        kernel_dim,
        fixed_dim: fix.dim(),
        ambient_dim: n,
    }
}

fn extract_witness(
    instance: &SubtransInstance,
    kernel: &Subspace,
    fix: &Subspace,
) -> AffineWitness {
    let b = kernel
        .basis()
        .iter()
        .find(|v| !fix.contains(v).expect("matching dimensions"))
        .expect("kernel strictly larger than Fix")
        .clone();
    AffineWitness {
        a: linear_part(instance, &b),
        b,
    }
}

/// A = (g_1 b - b, ..., g_d b - b).
pub fn linear_part(instance: &SubtransInstance, b: &[Rational]) -> RationalMatrix {
    let d = instance.d();
    let columns: Vec<Vec<Rational>> = (0..d)
        .map(|k| {
            let gb = instance.tuple.element(k).apply(b).expect("dimension checked");
            linalg::vec_sub(&gb, b)
        })
        .collect();
    RationalMatrix::from_columns(instance.ambient_dim(), &columns).expect("equal lengths")
}

/// Exact check of a claimed witness: A nonzero, columns equal to g_k b - b,
/// and sum_k alpha_k (g_k b - b) + b = g_{d+1} b.
pub fn verify_witness(instance: &SubtransInstance, b: &[Rational], a: &RationalMatrix) -> bool {
    let n = instance.ambient_dim();
    let d = instance.d();
    if b.len() != n || a.rows() != n || a.cols() != d || a.is_zero() {
        return false;
    }
    let mut acc = b.to_vec();
    for (k, alpha_k) in instance.alpha.coords().iter().enumerate() {
        let gb = match instance.tuple.element(k).apply(b) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let col = linalg::vec_sub(&gb, b);
        if a.col(k) != col {
            return false;
        }
        acc = linalg::vec_add(&acc, &linalg::vec_scale(&col, alpha_k));
    }
    let last = match instance.tuple.element(d).apply(b) {
        Ok(v) => v,
        Err(_) => return false,
    };
    acc == last
}

/// Decision for a raw configuration, composing the normalization map with
/// `decide` and carrying the witness back to original coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConfigurationDecision {
    /// The last point lies outside the affine hull of the prefix, so the
    /// normalized reduction does not apply. Deliberately distinct from a
    /// negative decision.
    NotApplicable,
    NoNonconstantSolution,
    Witness(ConfigurationWitness),
}

/// A witness in original coordinates: the normalized pair (b, A) plus the
/// images f(x_k) of the configuration points under f(x) = A T(x) + b, where
/// T is the affine map sending the prefix to the standard affine basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConfigurationWitness {
    pub alpha: AlphaCoordinates,
    pub witness: AffineWitness,
    pub images: Vec<Vec<Rational>>,
}

impl ConfigurationDecision {
    pub fn is_witness(&self) -> bool {
        matches!(self, ConfigurationDecision::Witness(_))
    }
}

/// Normalize a configuration and decide it against one tuple. In the witness
/// case the identity f(x_k) = g_k f(x_0) is checked exactly on the original
/// points before returning.
pub fn decide_configuration(
    config: &PointConfiguration,
    tuple: &ElementTuple,
) -> Result<ConfigurationDecision> {
    let alpha = match phi(config)? {
        PhiOutcome::Inside(alpha) => alpha,
        PhiOutcome::OutsideHull => return Ok(ConfigurationDecision::NotApplicable),
    };
    let instance = SubtransInstance::new(alpha, tuple.clone())?;
    match decide(&instance).outcome {
        DecisionOutcome::NoNonconstantSolution => Ok(ConfigurationDecision::NoNonconstantSolution),
        DecisionOutcome::Witness(witness) => {
            let images = witness_images(config, &instance, &witness)?;
            Ok(ConfigurationDecision::Witness(ConfigurationWitness {
                alpha: instance.alpha().clone(),
                witness,
                images,
            }))
        }
    }
}

/// Images f(x_k) = A T(x_k) + b of the configuration points, with the
/// equivariance identity f(x_k) = g_k f(x_0) checked for k = 1..d+1.
fn witness_images(
    config: &PointConfiguration,
    instance: &SubtransInstance,
    witness: &AffineWitness,
) -> Result<Vec<Vec<Rational>>> {
    let mut images = Vec::with_capacity(config.points().len());
    for x in config.points() {
        let t = normalize_point(config, x)?.ok_or_else(|| {
            Error::DimensionMismatch("configuration point outside its own hull".to_string())
        })?;
        let image = linalg::vec_add(&witness.a.mul_vec(&t)?, &witness.b);
        images.push(image);
    }
    for k in 1..images.len() {
        let expected = instance.tuple.element(k - 1).apply(&images[0])?;
        if images[k] != expected {
            return Err(Error::DimensionMismatch(
                "witness images fail the equivariance identity".to_string(),
            ));
        }
    }
    Ok(images)
}

/// Options for `search_tuples`.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub mode: TupleMode,
    /// Stop at the first witnessing tuple (in index order) instead of
    /// collecting all of them.
    pub stop_on_first: bool,
    /// Cap on the exhaustive tuple-space size.
    pub tuple_cap: u128,
}

impl SearchOptions {
    pub fn exhaustive() -> Self {
        Self {
            mode: TupleMode::Exhaustive,
            stop_on_first: false,
            tuple_cap: crate::groups::DEFAULT_TUPLE_CAP,
        }
    }
}

/// One witnessing tuple found by `search_tuples`.
#[derive(Clone, Debug)]
pub struct TupleWitness {
    pub tuple: ElementTuple,
    pub witness: ConfigurationWitness,
}

/// Hunt for witnessing tuples of a group against a fixed configuration.
///
/// The normalization alpha is computed once; tuples are decided in parallel
/// and results are returned in tuple-index order, so the output does not
/// depend on the worker count. Every returned witness has already passed
/// `verify_witness` and the original-coordinate equivariance check.
pub fn search_tuples(
    config: &PointConfiguration,
    group: &FiniteMatrixGroup,
    options: &SearchOptions,
) -> Result<Vec<TupleWitness>> {
    let alpha = match phi(config)? {
        PhiOutcome::Inside(alpha) => alpha,
        PhiOutcome::OutsideHull => return Ok(Vec::new()),
    };
    let arity = config.intrinsic_d() + 1;

    let index_lists: TupleIndexSource = match options.mode {
        TupleMode::Exhaustive => {
            let size = tuple_space_size(group.order(), arity);
            if size > options.tuple_cap {
                return Err(Error::TupleSpaceTooLarge {
                    size,
                    cap: options.tuple_cap,
                });
            }
            TupleIndexSource::Exhaustive {
                total: size as u64,
                order: group.order(),
                arity,
            }
        }
        TupleMode::Sampled { seed, count } => {
            TupleIndexSource::Explicit(sampled_tuple_indices(group.order(), arity, seed, count))
        }
    };

    // dim Fix depends only on the set of distinct non-identity elements, so
    // cache it across tuples; alpha is fixed for the whole search.
    let identity_index =
        group.position(&crate::groups::GroupElement::identity(group.ambient_dim()));
    let fix_cache: Mutex<HashMap<Vec<usize>, usize>> = Mutex::new(HashMap::new());

    let decide_one = |indices: Vec<usize>| -> Result<Option<TupleWitness>> {
        let tuple = ElementTuple::from_indices(group, &indices);
        let instance = SubtransInstance::new(alpha.clone(), tuple)?;
        let kernel_dim = instance.ambient_dim() - build_system(&instance).rank();

        let mut key: Vec<usize> = indices
            .iter()
            .copied()
            .filter(|i| Some(*i) != identity_index)
            .collect();
        key.sort_unstable();
        key.dedup();
        let cached = fix_cache.lock().expect("cache lock").get(&key).copied();
        let fix_dim = match cached {
            Some(v) => v,
            None => {
                let v = crate::groups::fixed_subspace_dim(instance.tuple());
                fix_cache.lock().expect("cache lock").insert(key, v);
                v
            }
        };
        if kernel_dim == fix_dim {
            return Ok(None);
        }

        // witness case: run the full decision to extract and verify (b, A)
        match decide(&instance).outcome {
            DecisionOutcome::Witness(witness) => {
                let images = witness_images(config, &instance, &witness)?;
                let (alpha, tuple) = instance.into_parts();
                Ok(Some(TupleWitness {
                    tuple,
                    witness: ConfigurationWitness {
                        alpha,
                        witness,
                        images,
                    },
                }))
            }
            DecisionOutcome::NoNonconstantSolution => {
                unreachable!("rank comparison and decide disagree")
            }
        }
    };

    if options.stop_on_first {
        let found = match &index_lists {
            TupleIndexSource::Exhaustive { total, order, arity } => (0..*total)
                .into_par_iter()
                .map(|i| decide_one(tuple_indices_at(*order, *arity, i)))
                .find_first(|r| !matches!(r, Ok(None))),
            TupleIndexSource::Explicit(lists) => lists
                .par_iter()
                .map(|idx| decide_one(idx.clone()))
                .find_first(|r| !matches!(r, Ok(None))),
        };
        match found {
            None => Ok(Vec::new()),
            Some(Ok(Some(w))) => Ok(vec![w]),
            Some(Ok(None)) => unreachable!("filtered above"),
            Some(Err(e)) => Err(e),
        }
    } else {
        let results: Vec<Result<Option<TupleWitness>>> = match &index_lists {
            TupleIndexSource::Exhaustive { total, order, arity } => (0..*total)
                .into_par_iter()
                .map(|i| decide_one(tuple_indices_at(*order, *arity, i)))
                .collect(),
            TupleIndexSource::Explicit(lists) => lists
                .par_iter()
                .map(|idx| decide_one(idx.clone()))
                .collect(),
        };
        let mut witnesses = Vec::new();
        for r in results {
            if let Some(w) = r? {
                witnesses.push(w);
            }
        }
        Ok(witnesses)
    }
}

enum TupleIndexSource {
    Exhaustive {
        total: u64,
        order: usize,
        arity: usize,
    },
    Explicit(Vec<Vec<usize>>),
}

/// Evaluate the genericity certificate for one tuple: at the witness point
/// alpha* = (1/(2d), ..., 1/(2d)) the decision must come out negative for
/// every tuple of orthogonal elements. A nonzero quotient minor at a single
/// point shows the minor polynomial is not identically zero, so a `true`
/// certifies that witnessing alphas form a proper subvariety. A `false`
/// return indicates an implementation bug, not a mathematical possibility.
pub fn certify_generic(tuple: &ElementTuple) -> Result<bool> {
    if tuple.is_empty() {
        return Err(Error::DimensionMismatch("empty tuple".to_string()));
    }
    let d = tuple.len() - 1;
    if d == 0 {
        // one-element tuple: d = 0, nothing to certify beyond the decision
        let instance = SubtransInstance::new(AlphaCoordinates::new(Vec::new()), tuple.clone())?;
        return Ok(!decide(&instance).is_witness());
    }
    let instance = SubtransInstance::new(certificate_alpha(d), tuple.clone())?;
    Ok(!decide(&instance).is_witness())
}

/// Independent brute-force oracle: set up the full linear system in the
/// n*d + n unknowns (entries of A, then b) imposed by f(e_k) = g_k f(0) for
/// k <= d and f(alpha) = g_{d+1} f(0), compute its kernel, and report
/// whether any solution has A != 0.
pub fn oracle_decide(instance: &SubtransInstance) -> bool {
    let n = instance.ambient_dim();
    let d = instance.d();
    let unknowns = n * d + n;
    let identity = RationalMatrix::identity(n);

    // Unknown layout: columns of A first (column-major), then b.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity((d + 1) * n);
    for k in 0..d {
        // col_k(A) + (I - g_k) b = 0
        let ib = identity
            .sub(instance.tuple.element(k).matrix())
            .expect("same dimension");
        for r in 0..n {
            let mut row = vec![Rational::from_integer(0.into()); unknowns];
            row[k * n + r] = Rational::from_integer(1.into());
            for c in 0..n {
                row[n * d + c] = ib.get(r, c).clone();
            }
            rows.push(row);
        }
    }
    // sum_j alpha_j col_j(A) + (I - g_{d+1}) b = 0
    let ib = identity
        .sub(instance.tuple.element(d).matrix())
        .expect("same dimension");
    for r in 0..n {
        let mut row = vec![Rational::from_integer(0.into()); unknowns];
        for (j, alpha_j) in instance.alpha.coords().iter().enumerate() {
            row[j * n + r] = alpha_j.clone();
        }
        for c in 0..n {
            row[n * d + c] = ib.get(r, c).clone();
        }
        rows.push(row);
    }

    let system = RationalMatrix::from_rows(rows).expect("equal lengths");
    let kernel = system.kernel_basis();
    kernel
        .basis()
        .iter()
        .any(|v| !linalg::vec_is_zero(&v[..n * d]))
}

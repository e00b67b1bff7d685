//! Finite groups of rational orthogonal matrices.
//!
//! Only exactly orthogonal matrices with rational entries are admitted, so
//! every group-theoretic fact downstream (closure, fixed subspaces, tuple
//! decisions) rests on exact equality rather than tolerances. Families whose
//! natural matrix form is irrational are covered through their regular
//! permutation representation, built from a Cayley table.

use std::collections::HashMap;
use std::fmt::Write as _;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, Subspace};
use crate::rational::{parse_rational, Rational};

/// Closure construction refuses to grow past this many elements by default.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;
/// Exhaustive tuple enumeration refuses spaces larger than this by default.
pub const DEFAULT_TUPLE_CAP: u128 = 10_000_000;
/// Cayley tables are validated exhaustively only up to this order.
pub const CAYLEY_VALIDATION_CAP: usize = 64;
/// Closure aborts when any entry's numerator or denominator outgrows this
/// many bits.
const CLOSURE_ENTRY_BIT_LIMIT: u64 = 4096;

fn entry_bits(m: &RationalMatrix) -> u64 {
    let mut max = 0;
    for i in 0..m.rows() {
        for e in m.row(i) {
            max = max.max(e.numer().bits()).max(e.denom().bits());
        }
    }
    max
}

/// One element of a finite orthogonal matrix group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    matrix: RationalMatrix,
}

impl GroupElement {
    /// Wrap a matrix, checking that it is square and exactly orthogonal.
    pub fn new(matrix: RationalMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch(format!(
                "group element must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let element = Self { matrix };
        if !element.is_orthogonal() {
            return Err(Error::DimensionMismatch(
                "matrix is not orthogonal".to_string(),
            ));
        }
        Ok(element)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: RationalMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == RationalMatrix::identity(self.dim())
    }

    /// `self * other`, exact.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.mul(&other.matrix).expect("same dimension"),
        }
    }

    /// Inverse of an orthogonal matrix is its transpose.
    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
        }
    }

    /// Entrywise-exact check of `M * M^T = I`.
    pub fn is_orthogonal(&self) -> bool {
        let prod = self
            .matrix
            .mul(&self.matrix.transpose())
            .expect("square matrix");
        prod == RationalMatrix::identity(self.dim())
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.matrix.mul_vec(v)
    }
}

/// A finite subgroup of the orthogonal group, stored as an explicit
/// deduplicated element list. Always contains the identity and is closed
/// under product and inverse.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    ambient_dim: usize,
    elements: Vec<GroupElement>,
    index: HashMap<RationalMatrix, usize>,
    label: String,
}

impl FiniteMatrixGroup {
    fn from_elements(
        ambient_dim: usize,
        elements: Vec<GroupElement>,
        label: String,
    ) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.matrix.clone(), i))
            .collect();
        Self {
            ambient_dim,
            elements,
            index,
            label,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn position(&self, e: &GroupElement) -> Option<usize> {
        self.index.get(&e.matrix).copied()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.position(e).is_some()
    }
}

/// Close a generator set under products, up to `cap` elements.
///
/// A finite set of invertible matrices closed under products automatically
/// contains inverses and the identity, but both are checked before return.
pub fn close_group(generators: &[GroupElement], cap: usize, label: &str) -> Result<FiniteMatrixGroup> {
    if generators.is_empty() {
        return Err(Error::InvalidGroupSpec {
            spec: label.to_string(),
            reason: "no generators given".to_string(),
        });
    }
    let dim = generators[0].dim();
    for (index, g) in generators.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "generator {index} has dimension {}, expected {dim}",
                g.dim()
            )));
        }
        if !g.is_orthogonal() {
            return Err(Error::NonOrthogonalGenerator { index });
        }
    }

    let mut elements: Vec<GroupElement> = Vec::new();
    let mut seen: HashMap<RationalMatrix, usize> = HashMap::new();
    let mut push = |e: GroupElement, elements: &mut Vec<GroupElement>| -> Result<()> {
        if seen.contains_key(&e.matrix) {
            return Ok(());
        }
        // Entries of a finite group stay bounded; runaway growth means the
        // generated group is infinite (e.g. an irrational-angle rational
        // rotation). Abort early instead of grinding toward the element cap
        // with ever larger numbers.
        if entry_bits(&e.matrix) > CLOSURE_ENTRY_BIT_LIMIT {
            return Err(Error::GroupTooLarge { cap });
        }
        seen.insert(e.matrix.clone(), elements.len());
        elements.push(e);
        Ok(())
    };

    push(GroupElement::identity(dim), &mut elements)?;
    for g in generators {
        push(g.clone(), &mut elements)?;
    }

    // Breadth-first closure: multiply every element by every generator until
    // nothing new appears.
    let mut frontier = 0;
    while frontier < elements.len() {
        if elements.len() > cap {
            return Err(Error::GroupTooLarge { cap });
        }
        let current = elements[frontier].clone();
        for g in generators {
            let product = current.compose(g);
            push(product, &mut elements)?;
        }
        frontier += 1;
    }
    if elements.len() > cap {
        return Err(Error::GroupTooLarge { cap });
    }

    let group = FiniteMatrixGroup::from_elements(dim, elements, label.to_string());
    debug_assert!(group
        .elements
        .iter()
        .all(|e| group.contains(&e.inverse())));
    Ok(group)
}

/// Builtin group family descriptors, as parsed from spec strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// `cyclic:<m>:regular` — cyclic shift matrices of size m.
    CyclicRegular(usize),
    /// `symmetric:<m>:natural` — all m x m permutation matrices.
    SymmetricNatural(usize),
    /// `hyperoctahedral:<m>` — all m x m signed permutation matrices.
    Hyperoctahedral(usize),
    /// `c4:rotation2d` — the four integer rotation matrices of the square.
    RotationC4,
    /// `cayley:<path>` — regular representation built from a Cayley table file.
    Cayley(String),
    /// `explicit:<path>` — closure of generator matrices read from a file.
    Explicit(String),
}

/// Parse a group spec string such as `cyclic:5:regular` or `hyperoctahedral:3`.
pub fn parse_group_spec(spec: &str) -> Result<GroupSpec> {
    let bad = |reason: &str| Error::InvalidGroupSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["cyclic", m, "regular"] => {
            let m: usize = m.parse().map_err(|_| bad("order must be an integer"))?;
            if m == 0 {
                return Err(bad("order must be at least 1"));
            }
            Ok(GroupSpec::CyclicRegular(m))
        }
        ["symmetric", m, "natural"] => {
            let m: usize = m.parse().map_err(|_| bad("degree must be an integer"))?;
            if m == 0 {
                return Err(bad("degree must be at least 1"));
            }
            Ok(GroupSpec::SymmetricNatural(m))
        }
        ["hyperoctahedral", m] => {
            let m: usize = m.parse().map_err(|_| bad("degree must be an integer"))?;
            if m == 0 {
                return Err(bad("degree must be at least 1"));
            }
            Ok(GroupSpec::Hyperoctahedral(m))
        }
        ["c4", "rotation2d"] => Ok(GroupSpec::RotationC4),
        ["cayley", path] => Ok(GroupSpec::Cayley(path.to_string())),
        ["explicit", path] => Ok(GroupSpec::Explicit(path.to_string())),
        _ => Err(bad(
            "expected cyclic:<m>:regular, symmetric:<m>:natural, hyperoctahedral:<m>, \
             c4:rotation2d, cayley:<path>, or explicit:<path>",
        )),
    }
}

/// Construct a builtin group from its descriptor.
pub fn builtin_group(spec: &GroupSpec) -> Result<FiniteMatrixGroup> {
    match spec {
        GroupSpec::CyclicRegular(m) => Ok(cyclic_regular(*m)),
        GroupSpec::SymmetricNatural(m) => Ok(symmetric_natural(*m)),
        GroupSpec::Hyperoctahedral(m) => Ok(hyperoctahedral(*m)),
        GroupSpec::RotationC4 => Ok(rotation2d_c4()),
        GroupSpec::Cayley(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let table = parse_cayley_table(&text)?;
            regular_from_cayley(&table, &format!("cayley:{path}"))
        }
        GroupSpec::Explicit(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let generators = parse_generator_file(&text)?;
            close_group(&generators, DEFAULT_CLOSURE_CAP, &format!("explicit:{path}"))
        }
    }
}

/// Parse and build in one step.
pub fn group_from_spec(spec: &str) -> Result<FiniteMatrixGroup> {
    builtin_group(&parse_group_spec(spec)?)
}

/// Powers of the m x m cyclic shift matrix.
pub fn cyclic_regular(m: usize) -> FiniteMatrixGroup {
    let mut elements = Vec::with_capacity(m);
    for shift in 0..m {
        let mut mat = RationalMatrix::zeros(m, m);
        for col in 0..m {
            mat.set((col + shift) % m, col, crate::rational::one());
        }
        elements.push(GroupElement { matrix: mat });
    }
    FiniteMatrixGroup::from_elements(m, elements, format!("cyclic:{m}:regular"))
}

/// All m! permutation matrices.
pub fn symmetric_natural(m: usize) -> FiniteMatrixGroup {
    let elements = (0..m)
        .permutations(m)
        .map(|perm| GroupElement {
            matrix: permutation_matrix(&perm),
        })
        .collect();
    FiniteMatrixGroup::from_elements(m, elements, format!("symmetric:{m}:natural"))
}

/// All 2^m * m! signed permutation matrices.
pub fn hyperoctahedral(m: usize) -> FiniteMatrixGroup {
    let mut elements = Vec::new();
    for perm in (0..m).permutations(m) {
        for signs in 0..(1usize << m) {
            let mut mat = RationalMatrix::zeros(m, m);
            for (col, &row) in perm.iter().enumerate() {
                let negative = signs >> col & 1 == 1;
                mat.set(
                    row,
                    col,
                    if negative {
                        crate::rational::rat_int(-1)
                    } else {
                        crate::rational::one()
                    },
                );
            }
            elements.push(GroupElement { matrix: mat });
        }
    }
    FiniteMatrixGroup::from_elements(m, elements, format!("hyperoctahedral:{m}"))
}

/// `{I, R90, R180, R270}` with integer entries.
pub fn rotation2d_c4() -> FiniteMatrixGroup {
    let r90 = RationalMatrix::from_integer_rows(&[vec![0, -1], vec![1, 0]]);
    let mut elements = vec![GroupElement::identity(2)];
    let mut current = GroupElement { matrix: r90 };
    for _ in 0..3 {
        elements.push(current.clone());
        current = current.compose(&elements[1]);
    }
    FiniteMatrixGroup::from_elements(2, elements, "c4:rotation2d".to_string())
}

fn permutation_matrix(perm: &[usize]) -> RationalMatrix {
    let m = perm.len();
    let mut mat = RationalMatrix::zeros(m, m);
    for (col, &row) in perm.iter().enumerate() {
        mat.set(row, col, crate::rational::one());
    }
    mat
}

/// A Cayley table: `table[i][j]` is the index of the product of element `i`
/// with element `j` (0-based internally).
#[derive(Clone, Debug)]
pub struct CayleyTable {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl CayleyTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }
}

/// Parse the text format: first line the order k, then k lines of k 1-based
/// indices. Validates group axioms exhaustively (orders <= 64).
pub fn parse_cayley_table(text: &str) -> Result<CayleyTable> {
    let bad = |reason: String| Error::MalformedCayleyTable(reason);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let order: usize = lines
        .next()
        .ok_or_else(|| bad("empty file".to_string()))?
        .trim()
        .parse()
        .map_err(|_| bad("first line must be the group order".to_string()))?;
    if order == 0 {
        return Err(bad("order must be at least 1".to_string()));
    }
    if order > CAYLEY_VALIDATION_CAP {
        return Err(bad(format!(
            "order {order} exceeds the validation cap of {CAYLEY_VALIDATION_CAP}"
        )));
    }

    let mut table = Vec::with_capacity(order);
    for i in 0..order {
        let line = lines
            .next()
            .ok_or_else(|| bad(format!("expected {order} rows, found {i}")))?;
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|tok| {
                let v: usize = tok
                    .parse()
                    .map_err(|_| bad(format!("row {}: bad index `{tok}`", i + 1)))?;
                if v == 0 || v > order {
                    return Err(bad(format!(
                        "row {}: index {v} out of range 1..={order}",
                        i + 1
                    )));
                }
                Ok(v - 1)
            })
            .collect::<Result<_>>()?;
        if row.len() != order {
            return Err(bad(format!(
                "row {}: expected {order} entries, found {}",
                i + 1,
                row.len()
            )));
        }
        table.push(row);
    }
    if lines.next().is_some() {
        return Err(bad(format!("more than {order} table rows", )));
    }

    let t = CayleyTable { order, table };
    validate_cayley(&t)?;
    Ok(t)
}

fn validate_cayley(t: &CayleyTable) -> Result<()> {
    let k = t.order;
    // identity
    let identity = (0..k).find(|&e| (0..k).all(|j| t.product(e, j) == j && t.product(j, e) == j));
    let Some(e) = identity else {
        return Err(Error::MalformedCayleyTable(
            "no identity element".to_string(),
        ));
    };
    // inverses
    for i in 0..k {
        let has_inverse = (0..k).any(|j| t.product(i, j) == e && t.product(j, i) == e);
        if !has_inverse {
            return Err(Error::MalformedCayleyTable(format!(
                "element {} has no inverse",
                i + 1
            )));
        }
    }
    // associativity, exhaustively over all triples
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if t.product(t.product(a, b), c) != t.product(a, t.product(b, c)) {
                    return Err(Error::MalformedCayleyTable(format!(
                        "associativity fails at triple ({}, {}, {})",
                        a + 1,
                        b + 1,
                        c + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Left-regular permutation representation of a validated Cayley table:
/// element `i` maps basis vector `e_j` to `e_{i*j}`.
pub fn regular_from_cayley(table: &CayleyTable, label: &str) -> Result<FiniteMatrixGroup> {
    let k = table.order();
    let mut elements = Vec::with_capacity(k);
    for i in 0..k {
        let mut mat = RationalMatrix::zeros(k, k);
        for j in 0..k {
            mat.set(table.product(i, j), j, crate::rational::one());
        }
        elements.push(GroupElement { matrix: mat });
    }
    // Left multiplication by distinct elements gives distinct permutations,
    // so no dedup is needed.
    Ok(FiniteMatrixGroup::from_elements(
        k,
        elements,
        label.to_string(),
    ))
}

/// Parse a generator matrix file: whitespace-separated rational entries, one
/// matrix row per line, matrices separated by blank lines.
pub fn parse_generator_file(text: &str) -> Result<Vec<GroupElement>> {
    let mut generators = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let flush = |rows: &mut Vec<Vec<Rational>>, generators: &mut Vec<GroupElement>| -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        let matrix = RationalMatrix::from_rows(std::mem::take(rows))?;
        generators.push(GroupElement::new(matrix).map_err(|_| {
            Error::NonOrthogonalGenerator {
                index: generators.len(),
            }
        })?);
        Ok(())
    };
    for line in text.lines() {
        if line.trim().is_empty() {
            flush(&mut rows, &mut generators)?;
            continue;
        }
        let row: Vec<Rational> = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    flush(&mut rows, &mut generators)?;
    if generators.is_empty() {
        return Err(Error::InvalidGroupSpec {
            spec: "explicit".to_string(),
            reason: "file contains no matrices".to_string(),
        });
    }
    Ok(generators)
}

/// An ordered tuple of elements from one group, kept with their indices so
/// results can be reported compactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementTuple {
    indices: Vec<usize>,
    elements: Vec<GroupElement>,
}

impl ElementTuple {
    pub fn from_indices(group: &FiniteMatrixGroup, indices: &[usize]) -> Self {
        let elements = indices.iter().map(|&i| group.element(i).clone()).collect();
        Self {
            indices: indices.to_vec(),
            elements,
        }
    }

    pub fn from_elements(elements: Vec<GroupElement>) -> Self {
        Self {
            indices: Vec::new(),
            elements,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &GroupElement {
        &self.elements[k]
    }

    pub fn ambient_dim(&self) -> usize {
        self.elements.first().map_or(0, GroupElement::dim)
    }
}

/// Enumeration mode for tuple spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleMode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

/// `|G|^arity` with overflow saturation into u128.
pub fn tuple_space_size(order: usize, arity: usize) -> u128 {
    let mut size: u128 = 1;
    for _ in 0..arity {
        size = size.saturating_mul(order as u128);
    }
    size
}

/// Index-to-tuple decode in lexicographic order (first position is the most
/// significant digit).
pub fn tuple_indices_at(order: usize, arity: usize, mut index: u64) -> Vec<usize> {
    let mut digits = vec![0usize; arity];
    for slot in (0..arity).rev() {
        digits[slot] = (index % order as u64) as usize;
        index /= order as u64;
    }
    digits
}

/// Deterministic index tuples for sampled mode.
pub fn sampled_tuple_indices(
    order: usize,
    arity: usize,
    seed: u64,
    count: u64,
) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..arity).map(|_| rng.gen_range(0..order)).collect())
        .collect()
}

/// Stream of tuples per the requested mode. Exhaustive mode yields exactly
/// `|G|^arity` tuples in lexicographic index order and is refused when that
/// count exceeds `cap`.
pub fn enumerate_tuples<'g>(
    group: &'g FiniteMatrixGroup,
    arity: usize,
    mode: TupleMode,
    cap: u128,
) -> Result<Box<dyn Iterator<Item = ElementTuple> + 'g>> {
    match mode {
        TupleMode::Exhaustive => {
            let size = tuple_space_size(group.order(), arity);
            if size > cap {
                return Err(Error::TupleSpaceTooLarge { size, cap });
            }
            let order = group.order();
            Ok(Box::new((0..size as u64).map(move |i| {
                ElementTuple::from_indices(group, &tuple_indices_at(order, arity, i))
            })))
        }
        TupleMode::Sampled { seed, count } => {
            let indices = sampled_tuple_indices(group.order(), arity, seed, count);
            Ok(Box::new(
                indices
                    .into_iter()
                    .map(move |idx| ElementTuple::from_indices(group, &idx)),
            ))
        }
    }
}

/// Stack the `g - I` blocks of a tuple's distinct non-identity elements;
/// `None` when every element is the identity.
fn stacked_differences(tuple: &ElementTuple) -> Option<RationalMatrix> {
    let n = tuple.ambient_dim();
    let identity = RationalMatrix::identity(n);
    let mut stacked: Option<RationalMatrix> = None;
    let mut seen = std::collections::HashSet::new();
    for e in tuple.elements() {
        if e.is_identity() || !seen.insert(e.matrix().clone()) {
            continue;
        }
        let block = e.matrix().sub(&identity).expect("same dimension");
        stacked = Some(match stacked {
            None => block,
            Some(s) => s.vstack(&block).expect("same width"),
        });
    }
    stacked
}

/// The fixed subspace of a tuple: all vectors fixed by every element,
/// computed exactly as the kernel of the stacked `g - I` blocks.
pub fn fixed_subspace(tuple: &ElementTuple) -> Subspace {
    let n = tuple.ambient_dim();
    match stacked_differences(tuple) {
        None => RationalMatrix::zeros(0, n).kernel_basis(),
        Some(s) => s.kernel_basis(),
    }
}

/// Dimension of the fixed subspace, via a rank computation only.
pub fn fixed_subspace_dim(tuple: &ElementTuple) -> usize {
    let n = tuple.ambient_dim();
    match stacked_differences(tuple) {
        None => n,
        Some(s) => n - s.rank(),
    }
}

/// Render a tuple's indices like `(0, 3, 7)`, for reports.
pub fn format_tuple_indices(indices: &[usize]) -> String {
    let mut s = String::from("(");
    for (i, idx) in indices.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{idx}");
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn close_cyclic_shift() {
        let shift = GroupElement::new(RationalMatrix::from_integer_rows(&[
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
        ]))
        .unwrap();
        let g = close_group(&[shift], DEFAULT_CLOSURE_CAP, "test").unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn close_identity_only() {
        let g = close_group(&[GroupElement::identity(3)], DEFAULT_CLOSURE_CAP, "test").unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn octahedral_symmetry_group_has_order_48() {
        // Signed-permutation generators of the octahedron's symmetry group.
        let swap12 = GroupElement::new(RationalMatrix::from_integer_rows(&[
            vec![0, 1, 0],
            vec![1, 0, 0],
            vec![0, 0, 1],
        ]))
        .unwrap();
        let swap23 = GroupElement::new(RationalMatrix::from_integer_rows(&[
            vec![1, 0, 0],
            vec![0, 0, 1],
            vec![0, 1, 0],
        ]))
        .unwrap();
        let flip1 = GroupElement::new(RationalMatrix::from_integer_rows(&[
            vec![-1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ]))
        .unwrap();
        let g = close_group(&[swap12, swap23, flip1], DEFAULT_CLOSURE_CAP, "test").unwrap();
        // cross-check against the order formula 2^d * d!
        assert_eq!(g.order(), 48);
        assert_eq!(g.order(), hyperoctahedral(3).order());
    }

    #[test]
    fn closure_cap_enforced() {
        let swap12 = GroupElement::new(RationalMatrix::from_integer_rows(&[
            vec![0, 1, 0],
            vec![1, 0, 0],
            vec![0, 0, 1],
        ]))
        .unwrap();
        let rot = GroupElement::new(RationalMatrix::from_integer_rows(&[
            vec![0, 0, 1],
            vec![1, 0, 0],
            vec![0, 1, 0],
        ]))
        .unwrap();
        let err = close_group(&[swap12, rot], 3, "test").unwrap_err();
        assert!(matches!(err, Error::GroupTooLarge { cap: 3 }));
    }

    #[test]
    fn infinite_rational_rotation_fails_fast() {
        // rotation by the point (3/5, 4/5): orthogonal but of infinite order
        let rot = GroupElement::new(
            RationalMatrix::from_rows(vec![
                vec![crate::rational::rat(3, 5), crate::rational::rat(-4, 5)],
                vec![crate::rational::rat(4, 5), crate::rational::rat(3, 5)],
            ])
            .unwrap(),
        )
        .unwrap();
        let err = close_group(&[rot], DEFAULT_CLOSURE_CAP, "test").err().unwrap();
        assert!(matches!(err, Error::GroupTooLarge { .. }));
    }

    #[test]
    fn non_orthogonal_generator_rejected() {
        let m = RationalMatrix::from_integer_rows(&[vec![1, 1], vec![0, 1]]);
        assert!(GroupElement::new(m).is_err());
    }

    #[test]
    fn builtin_orders() {
        assert_eq!(cyclic_regular(3).order(), 3);
        assert_eq!(symmetric_natural(3).order(), 6);
        assert_eq!(hyperoctahedral(2).order(), 8);
        assert_eq!(rotation2d_c4().order(), 4);
        for m in 1..=4 {
            assert_eq!(cyclic_regular(m).order(), m);
            assert_eq!(
                symmetric_natural(m).order(),
                (1..=m).product::<usize>()
            );
            assert_eq!(
                hyperoctahedral(m).order(),
                (1usize << m) * (1..=m).product::<usize>()
            );
        }
    }

    #[test]
    fn all_builtin_elements_are_orthogonal() {
        for g in [
            cyclic_regular(4),
            symmetric_natural(3),
            hyperoctahedral(2),
            rotation2d_c4(),
        ] {
            assert!(g.elements().iter().all(GroupElement::is_orthogonal));
        }
    }

    #[test]
    fn groups_closed_under_product_and_inverse() {
        let g = hyperoctahedral(2);
        for a in g.elements() {
            assert!(g.contains(&a.inverse()));
            for b in g.elements().iter().step_by(3) {
                assert!(g.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(parse_group_spec("cyclic:5:regular").unwrap(), GroupSpec::CyclicRegular(5));
        assert_eq!(parse_group_spec("symmetric:3:natural").unwrap(), GroupSpec::SymmetricNatural(3));
        assert_eq!(parse_group_spec("hyperoctahedral:2").unwrap(), GroupSpec::Hyperoctahedral(2));
        assert_eq!(parse_group_spec("c4:rotation2d").unwrap(), GroupSpec::RotationC4);
        assert!(parse_group_spec("dihedral:5").is_err());
        assert!(parse_group_spec("cyclic:0:regular").is_err());
    }

    #[test]
    fn cayley_round_trip_c3() {
        let text = "3\n1 2 3\n2 3 1\n3 1 2\n";
        let table = parse_cayley_table(text).unwrap();
        let g = regular_from_cayley(&table, "cayley:c3").unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.elements().iter().all(GroupElement::is_orthogonal));
        // regular representation is a homomorphism
        for i in 0..3 {
            for j in 0..3 {
                let prod = g.element(i).compose(g.element(j));
                assert_eq!(g.position(&prod), Some(table.product(i, j)));
            }
        }
    }

    #[test]
    fn cayley_rejects_non_associative_table() {
        // a Latin square with identity that is not a group table
        let text = "5\n1 2 3 4 5\n2 1 4 5 3\n3 5 1 2 4\n4 3 5 1 2\n5 4 2 3 1\n";
        let err = parse_cayley_table(text).unwrap_err();
        match err {
            Error::MalformedCayleyTable(msg) => {
                assert!(msg.contains("associativity"), "unexpected message: {msg}")
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn cayley_rejects_bad_shapes() {
        assert!(parse_cayley_table("").is_err());
        assert!(parse_cayley_table("2\n1 2\n").is_err());
        assert!(parse_cayley_table("2\n1 2\n2 3\n").is_err());
    }

    #[test]
    fn tuple_enumeration_counts() {
        let g = rotation2d_c4();
        let tuples: Vec<_> =
            enumerate_tuples(&g, 3, TupleMode::Exhaustive, DEFAULT_TUPLE_CAP)
                .unwrap()
                .collect();
        assert_eq!(tuples.len(), 64);
        assert_eq!(tuples[0].indices(), &[0, 0, 0]);
        assert_eq!(tuples[1].indices(), &[0, 0, 1]);
        assert_eq!(tuples[63].indices(), &[3, 3, 3]);

        let trivial = cyclic_regular(1);
        let tuples: Vec<_> =
            enumerate_tuples(&trivial, 5, TupleMode::Exhaustive, DEFAULT_TUPLE_CAP)
                .unwrap()
                .collect();
        assert_eq!(tuples.len(), 1);
        assert!(tuples[0].elements().iter().all(GroupElement::is_identity));
    }

    #[test]
    fn tuple_cap_enforced() {
        let g = symmetric_natural(4); // order 24; 24^6 > 10^7
        let err = enumerate_tuples(&g, 6, TupleMode::Exhaustive, DEFAULT_TUPLE_CAP).err().unwrap();
        assert!(matches!(err, Error::TupleSpaceTooLarge { .. }));
    }

    #[test]
    fn sampled_tuples_deterministic() {
        let g = hyperoctahedral(2);
        let mode = TupleMode::Sampled { seed: 7, count: 10 };
        let a: Vec<_> = enumerate_tuples(&g, 3, mode, DEFAULT_TUPLE_CAP)
            .unwrap()
            .collect();
        let b: Vec<_> = enumerate_tuples(&g, 3, mode, DEFAULT_TUPLE_CAP)
            .unwrap()
            .collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn fixed_subspace_of_rotations_is_zero() {
        let g = rotation2d_c4();
        let tuple = ElementTuple::from_indices(&g, &[1, 2, 3]);
        assert_eq!(fixed_subspace(&tuple).dim(), 0);
    }

    #[test]
    fn fixed_subspace_of_identities_is_everything() {
        let g = cyclic_regular(4);
        let tuple = ElementTuple::from_indices(&g, &[0, 0, 0]);
        assert_eq!(fixed_subspace(&tuple).dim(), 4);
    }

    #[test]
    fn permutation_tuples_fix_all_ones() {
        let g = symmetric_natural(3);
        let tuple = ElementTuple::from_indices(&g, &[1, 4, 2, 5]);
        let fix = fixed_subspace(&tuple);
        assert!(fix.dim() >= 1);
        let ones = vec![rat_int(1); 3];
        assert!(fix.contains(&ones).unwrap());
    }

    #[test]
    fn fixed_subspace_shrinks_under_more_constraints() {
        let g = symmetric_natural(3);
        for sub in [vec![1usize], vec![1, 2], vec![1, 2, 4]] {
            let small = fixed_subspace(&ElementTuple::from_indices(&g, &sub));
            let mut extended = sub.clone();
            extended.push(3);
            let large = fixed_subspace(&ElementTuple::from_indices(&g, &extended));
            assert!(large.dim() <= small.dim());
        }
    }
}

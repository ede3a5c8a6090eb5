//! Lattices over `Z = F_q[X]` inside `K^m`.
//!
//! A lattice is stored by a basis whose vectors are the rows of
//! [`LatticeBasis::rows`]. Reduction brings the `X^s`-scaled basis into weak
//! Popov form; by the predictable-degree property the row degrees of that
//! form are the successive minima for the max-norm.

use std::fmt;

use crate::error::{Error, Result};
use crate::field_arith::{Field, Fq, Poly};
use crate::laurent::{LaurentBall, NormExp};

/// A basis of a full-rank lattice in `K^m`, one basis vector per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    field: Field,
    rows: Vec<Vec<LaurentBall>>,
}

/// Output of [`reduce_basis`]: a basis of the same lattice sorted by norm, and
/// the successive minima in non-decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedBasis {
    pub rows: Vec<Vec<LaurentBall>>,
    pub minima: Vec<NormExp>,
}

/// A submodule of `Z^m` given by a basis of polynomial row vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    pub rank: usize,
    pub basis: Vec<Vec<Poly>>,
    pub primitive: bool,
}

impl LatticeBasis {
    /// Builds a basis from row vectors. Entries must be exact and the rows
    /// independent over K.
    pub fn new(rows: Vec<Vec<LaurentBall>>) -> Result<Self> {
        let m = rows.len();
        let field = rows
            .first()
            .and_then(|r| r.first())
            .map(|a| a.field().clone())
            .ok_or(Error::InvalidArgument("empty basis".into()))?;
        for r in &rows {
            if r.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: r.len() });
            }
            for a in r {
                if *a.field() != field {
                    return Err(Error::FieldMismatch);
                }
                if !a.is_exact() {
                    return Err(Error::InvalidArgument("lattice entries must be exact".into()));
                }
            }
        }
        Ok(LatticeBasis { field, rows })
    }

    /// The lattice `g Z^m`: its basis vectors are the columns of `g`.
    pub fn from_generator_matrix(g: &[Vec<LaurentBall>]) -> Result<Self> {
        let m = g.len();
        let rows = (0..m)
            .map(|j| {
                g.iter()
                    .map(|row| row.get(j).cloned().ok_or(Error::DimensionMismatch { expected: m, got: row.len() }))
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        LatticeBasis::new(rows)
    }

    pub fn identity(field: &Field, m: usize) -> Self {
        LatticeBasis::diagonal(&vec![LaurentBall::one(field); m]).expect("identity is a basis")
    }

    pub fn diagonal(entries: &[LaurentBall]) -> Result<Self> {
        let m = entries.len();
        let field = entries.first().ok_or(Error::InvalidArgument("empty basis".into()))?.field();
        let rows = (0..m)
            .map(|i| (0..m).map(|j| if i == j { entries[i].clone() } else { LaurentBall::zero(field) }).collect())
            .collect();
        LatticeBasis::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> &[Vec<LaurentBall>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<LaurentBall>> {
        self.rows
    }

    /// Integer combination `sum c_i b_i`.
    pub fn combine(&self, coeffs: &[Poly]) -> Vec<LaurentBall> {
        let mut v = vec![LaurentBall::zero(&self.field); self.dim()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            let c = LaurentBall::from_poly(c);
            for (vj, bj) in v.iter_mut().zip(row) {
                *vj = vj.add(&c.mul(bj));
            }
        }
        v
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Exponent `s` such that `X^s` times every entry is a polynomial.
fn scale_exponent<'a>(entries: impl Iterator<Item = &'a LaurentBall>) -> i64 {
    entries.filter(|a| !a.is_exact_zero()).map(LaurentBall::last_index).max().unwrap_or(0)
}

/// `X^s` times each row, as polynomials, and the exponent `s`.
pub fn scaled_poly_rows(rows: &[Vec<LaurentBall>]) -> (Vec<Vec<Poly>>, i64) {
    let s = scale_exponent(rows.iter().flatten());
    let polys = rows.iter().map(|r| r.iter().map(|a| a.to_scaled_poly(s)).collect()).collect();
    (polys, s)
}

fn row_degree(row: &[Poly]) -> Option<usize> {
    row.iter().filter_map(Poly::degree).max()
}

/// Rightmost column of maximal degree.
fn leading_position(row: &[Poly]) -> Option<(usize, usize)> {
    let d = row_degree(row)?;
    let c = row.iter().rposition(|p| p.degree() == Some(d))?;
    Some((c, d))
}

/// Weak Popov form by simple transformations; fails on a zero row.
pub fn weak_popov(rows: &mut [Vec<Poly>]) -> Result<()> {
    let m = rows.len();
    loop {
        let lps = rows.iter().map(|r| leading_position(r).ok_or(Error::SingularBasis)).collect::<Result<Vec<_>>>()?;
        let mut clash = None;
        'outer: for i in 0..m {
            for j in i + 1..m {
                if lps[i].0 == lps[j].0 {
                    clash = Some(if lps[i].1 >= lps[j].1 { (i, j) } else { (j, i) });
                    break 'outer;
                }
            }
        }
        let Some((hi, lo)) = clash else {
            return Ok(());
        };
        let (c, dh) = lps[hi];
        let dl = lps[lo].1;
        let f = rows[hi][c].field().clone();
        let factor = f.div(rows[hi][c].leading().unwrap(), rows[lo][c].leading().unwrap())?;
        let pivot_row = rows[lo].clone();
        for (a, b) in rows[hi].iter_mut().zip(&pivot_row) {
            *a = a.sub(&b.scale(factor).shift(dh - dl));
        }
    }
}

/// Reduced basis and successive minima of a lattice.
pub fn reduce_basis(b: &LatticeBasis) -> Result<ReducedBasis> {
    let (mut polys, s) = scaled_poly_rows(&b.rows);
    weak_popov(&mut polys)?;
    let mut rows: Vec<(i64, Vec<LaurentBall>)> = polys
        .iter()
        .map(|r| {
            let d = row_degree(r).expect("nonzero after reduction") as i64;
            (d - s, r.iter().map(|p| LaurentBall::from_scaled_poly(p, s)).collect())
        })
        .collect();
    rows.sort_by_key(|r| r.0);
    Ok(ReducedBasis {
        minima: rows.iter().map(|r| NormExp::Finite(r.0)).collect(),
        rows: rows.into_iter().map(|r| r.1).collect(),
    })
}

pub fn successive_minima(b: &LatticeBasis) -> Result<Vec<NormExp>> {
    Ok(reduce_basis(b)?.minima)
}

/// `delta(Lambda)`: the norm of a shortest nonzero lattice vector.
pub fn delta(b: &LatticeBasis) -> Result<NormExp> {
    Ok(successive_minima(b)?[0])
}

/// A random lattice of covolume 1: a polynomial matrix with entries of degree
/// `<= deg` and nonzero determinant of degree `D`, with its first basis vector
/// divided by `X^D`.
pub fn random_unimodular<R: rand::Rng>(field: &Field, m: usize, deg: usize, rng: &mut R) -> LatticeBasis {
    let k = field.k();
    loop {
        let rows: Vec<Vec<Poly>> = (0..m)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        let d = rng.gen_range(0..=deg);
                        Poly::new(field, (0..=d).map(|_| Fq(rng.gen_range(0..k))).collect())
                    })
                    .collect()
            })
            .collect();
        let Some(d) = poly_det(&rows, field).degree() else {
            continue;
        };
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let s = if i == 0 { d as i64 } else { 0 };
                r.iter().map(|p| LaurentBall::from_scaled_poly(p, s)).collect()
            })
            .collect();
        return LatticeBasis::new(rows).expect("independent rows");
    }
}

/// Fraction-free elimination over `F_q[X]`. Returns the rank and, for square
/// input of full rank, the determinant.
fn bareiss(mut a: Vec<Vec<Poly>>, field: &Field) -> (usize, Option<Poly>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Poly::one(field);
    let mut negate = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if piv != r {
            a.swap(piv, r);
            negate = !negate;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = num.divmod(&prev).expect("nonzero pivot").0;
            }
            a[i][c] = Poly::zero(field);
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = if rows == cols && r == rows {
        let d = if rows == 0 { Poly::one(field) } else { prev };
        Some(if negate { d.neg() } else { d })
    } else {
        None
    };
    (r, det)
}

/// Determinant of a square polynomial matrix.
pub fn poly_det(a: &[Vec<Poly>], field: &Field) -> Poly {
    bareiss(a.to_vec(), field).1.unwrap_or_else(|| Poly::zero(field))
}

/// Rank over K of a list of exact vectors.
pub fn rank_over_k(vectors: &[Vec<LaurentBall>]) -> usize {
    let Some(field) = vectors.iter().flatten().next().map(|a| a.field().clone()) else {
        return 0;
    };
    let (polys, _) = scaled_poly_rows(vectors);
    bareiss(polys, &field).0
}

/// `|det|` of the basis matrix.
pub fn det_norm(b: &LatticeBasis) -> Result<NormExp> {
    let (polys, s) = scaled_poly_rows(&b.rows);
    let d = poly_det(&polys, &b.field);
    match d.degree() {
        None => Err(Error::SingularBasis),
        Some(deg) => Ok(NormExp::Finite(deg as i64 - b.dim() as i64 * s)),
    }
}

/// Index sets of size `r` in `0..m`, in lexicographic order.
pub fn subsets(m: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, r, &mut Vec::new(), &mut out);
    out
}

/// All maximal minors of an `r x m` polynomial matrix, indexed like [`subsets`].
pub fn maximal_minors(rows: &[Vec<Poly>], field: &Field) -> Vec<Poly> {
    let r = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    subsets(m, r)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Vec<Poly>> = rows.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
            poly_det(&sub, field)
        })
        .collect()
}

/// `|v_1 ^ ... ^ v_r|`: the largest norm of an `r x r` minor.
pub fn wedge_norm(vectors: &[Vec<LaurentBall>]) -> NormExp {
    let Some(field) = vectors.iter().flatten().next().map(|a| a.field().clone()) else {
        return NormExp::ONE;
    };
    let (polys, s) = scaled_poly_rows(vectors);
    let r = vectors.len() as i64;
    maximal_minors(&polys, &field)
        .iter()
        .filter_map(Poly::degree)
        .map(|d| NormExp::Finite(d as i64 - r * s))
        .max()
        .unwrap_or(NormExp::Zero)
}

impl Submodule {
    /// Submodule spanned by independent polynomial rows.
    pub fn new(basis: Vec<Vec<Poly>>) -> Result<Self> {
        let field = basis
            .iter()
            .flatten()
            .next()
            .map(|p| p.field().clone())
            .ok_or(Error::InvalidArgument("empty submodule basis".into()))?;
        let rank = bareiss(basis.clone(), &field).0;
        if rank != basis.len() {
            return Err(Error::SingularBasis);
        }
        let primitive = minors_gcd_is_unit(&basis, &field);
        Ok(Submodule { rank, basis, primitive })
    }

    pub fn field(&self) -> &Field {
        self.basis[0][0].field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis[0].len()
    }

    /// Basis rows as exact elements of K.
    pub fn rows_k(&self) -> Vec<Vec<LaurentBall>> {
        self.basis.iter().map(|r| r.iter().map(LaurentBall::from_poly).collect()).collect()
    }

    /// `|Delta|` as the wedge norm of its basis.
    pub fn norm(&self) -> NormExp {
        wedge_norm(&self.rows_k())
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| format!("({})", r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

fn minors_gcd_is_unit(rows: &[Vec<Poly>], field: &Field) -> bool {
    let mut g = Poly::zero(field);
    for m in maximal_minors(rows, field) {
        if m.is_zero() {
            continue;
        }
        g = if g.is_zero() { m.monic() } else { g.gcd(&m).expect("nonzero operands") };
        if g.is_unit() {
            return true;
        }
    }
    false
}

/// Whether `Delta = K Delta ∩ Z^m`, decided by the gcd of maximal minors.
pub fn is_primitive(d: &Submodule) -> bool {
    minors_gcd_is_unit(&d.basis, d.field())
}

/// All polynomials of degree exactly `d` with leading coefficient 1.
fn monic_of_degree(field: &Field, d: usize) -> Vec<Poly> {
    let lower: Vec<Poly> =
        if d == 0 { vec![Poly::zero(field)] } else { Poly::all_up_to_degree(field, d - 1).collect() };
    let lead = Poly::monomial(field, Fq::ONE, d);
    lower.iter().map(|p| p + &lead).collect()
}

/// All polynomials of degree `<= d` where `d = -1` means only zero.
fn up_to(field: &Field, d: i64) -> Vec<Poly> {
    if d < 0 {
        vec![Poly::zero(field)]
    } else {
        Poly::all_up_to_degree(field, d as usize).collect()
    }
}

fn cartesian(choices: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let mut out: Vec<Vec<Poly>> = vec![Vec::new()];
    for opts in choices {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Every primitive submodule of `Z^m` of rank `1..=rank_max` with a basis of
/// entry degree `<= degree_bound`, each once, in Popov form.
///
/// Popov form here: the pivot of a row is its rightmost entry of maximal
/// degree, pivots are monic and lie in increasing columns, and every other
/// entry of a pivot column has degree below that pivot.
pub fn enumerate_primitive(field: &Field, m: usize, rank_max: usize, degree_bound: usize) -> Vec<Submodule> {
    let mut out = Vec::new();
    for r in 1..=rank_max.min(m) {
        for pivots in subsets(m, r) {
            let mut degs = vec![0usize; r];
            loop {
                enumerate_with_pivots(field, m, &pivots, &degs, &mut out);
                // next degree tuple
                let mut i = 0;
                while i < r && degs[i] == degree_bound {
                    degs[i] = 0;
                    i += 1;
                }
                if i == r {
                    break;
                }
                degs[i] += 1;
            }
        }
    }
    out
}

fn enumerate_with_pivots(field: &Field, m: usize, pivots: &[usize], degs: &[usize], out: &mut Vec<Submodule>) {
    let mut row_options: Vec<Vec<Vec<Poly>>> = Vec::with_capacity(pivots.len());
    for (i, (&ci, &di)) in pivots.iter().zip(degs).enumerate() {
        let choices: Vec<Vec<Poly>> = (0..m)
            .map(|j| {
                if j == ci {
                    return monic_of_degree(field, di);
                }
                let mut bound = if j < ci { di as i64 } else { di as i64 - 1 };
                if let Some(l) = pivots.iter().position(|&c| c == j) {
                    debug_assert!(l != i);
                    bound = bound.min(degs[l] as i64 - 1);
                }
                up_to(field, bound)
            })
            .collect();
        row_options.push(cartesian(&choices));
    }
    let mut idx = vec![0usize; pivots.len()];
    loop {
        let basis: Vec<Vec<Poly>> = idx.iter().enumerate().map(|(i, &j)| row_options[i][j].clone()).collect();
        if minors_gcd_is_unit(&basis, field) {
            out.push(Submodule { rank: basis.len(), basis, primitive: true });
        }
        let mut i = 0;
        while i < idx.len() && idx[i] + 1 == row_options[i].len() {
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            break;
        }
        idx[i] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn xp(f: &Field, e: i64) -> LaurentBall {
        LaurentBall::x_pow(f, e)
    }

    #[test]
    fn random_lattices_have_covolume_one() {
        use rand::SeedableRng;
        let f = f3();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for m in 1..=3 {
            let b = random_unimodular(&f, m, 3, &mut rng);
            assert_eq!(det_norm(&b).unwrap(), NormExp::ONE);
            let sum: i64 = successive_minima(&b).unwrap().iter().map(|e| e.exp().unwrap()).sum();
            assert_eq!(sum, 0);
        }
    }

    #[test]
    fn minima_examples() {
        let f = f3();
        let id = LatticeBasis::identity(&f, 2);
        assert_eq!(successive_minima(&id).unwrap(), vec![NormExp::ONE; 2]);
        let d = LatticeBasis::diagonal(&[xp(&f, 1), xp(&f, -1)]).unwrap();
        assert_eq!(successive_minima(&d).unwrap(), vec![NormExp::Finite(-1), NormExp::Finite(1)]);
        assert_eq!(delta(&d).unwrap(), NormExp::Finite(-1));
        let b = LatticeBasis::new(vec![
            vec![LaurentBall::one(&f), xp(&f, 2)],
            vec![LaurentBall::zero(&f), LaurentBall::one(&f)],
        ])
        .unwrap();
        let red = reduce_basis(&b).unwrap();
        assert_eq!(red.minima, vec![NormExp::ONE; 2]);
        let d3 = LatticeBasis::diagonal(&[xp(&f, 2), xp(&f, -1), xp(&f, -1)]).unwrap();
        assert_eq!(delta(&d3).unwrap(), NormExp::Finite(-1));
    }

    #[test]
    fn det_examples() {
        let f = f3();
        assert_eq!(det_norm(&LatticeBasis::identity(&f, 3)).unwrap(), NormExp::ONE);
        let d = LatticeBasis::diagonal(&[xp(&f, 1), xp(&f, -1)]).unwrap();
        assert_eq!(det_norm(&d).unwrap(), NormExp::ONE);
        let d = LatticeBasis::diagonal(&[xp(&f, 1), LaurentBall::one(&f)]).unwrap();
        assert_eq!(det_norm(&d).unwrap(), NormExp::Finite(1));
        let sing = LatticeBasis::new(vec![vec![LaurentBall::one(&f); 2]; 2]).unwrap();
        assert_eq!(det_norm(&sing).err(), Some(Error::SingularBasis));
        assert_eq!(reduce_basis(&sing).err(), Some(Error::SingularBasis));
    }

    #[test]
    fn wedge_examples() {
        let f = f3();
        let (o, z) = (LaurentBall::one(&f), LaurentBall::zero(&f));
        assert_eq!(wedge_norm(&[vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]]), NormExp::ONE);
        let v1 = vec![xp(&f, 1), z.clone()];
        let v2 = vec![o.clone(), xp(&f, -1)];
        assert_eq!(wedge_norm(&[v1, v2]), NormExp::ONE);
        let w = vec![xp(&f, 1), o.clone()];
        assert_eq!(wedge_norm(&[vec![o.clone(), z.clone()], w]), NormExp::ONE);
        assert_eq!(wedge_norm(&[vec![o.clone(), o.clone()], vec![o.clone(), o]]), NormExp::Zero);
    }

    #[test]
    fn primitivity_examples() {
        let f = f3();
        let p = |c: &[i64]| Poly::from_ints(&f, c);
        assert!(!Submodule::new(vec![vec![p(&[0, 1]), p(&[])]]).unwrap().primitive);
        assert!(Submodule::new(vec![vec![p(&[0, 1]), p(&[1])]]).unwrap().primitive);
        assert!(Submodule::new(vec![vec![p(&[1]), p(&[])], vec![p(&[]), p(&[1])]]).unwrap().primitive);
    }

    #[test]
    fn enumeration_examples() {
        let f = f3();
        let lines = enumerate_primitive(&f, 2, 1, 0);
        assert_eq!(lines.len(), 4);
        let full = enumerate_primitive(&f, 2, 2, 0);
        assert_eq!(full.len(), 5);
        assert_eq!(full[4].rank, 2);
        let lines1 = enumerate_primitive(&f, 2, 1, 1);
        // primitive vectors of degree <= 1 modulo F_3^*
        let mut prim = 0;
        for a in Poly::all_up_to_degree(&f, 1) {
            for b in Poly::all_up_to_degree(&f, 1) {
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                if a.gcd(&b).unwrap().is_unit() {
                    prim += 1;
                }
            }
        }
        assert_eq!(lines1.len(), prim / 2);
        let uniq: std::collections::HashSet<_> = lines1.iter().map(|s| s.basis.clone()).collect();
        assert_eq!(uniq.len(), lines1.len());
        assert!(lines1.iter().all(is_primitive));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn minima_product_is_covolume(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), m in 1usize..5, deg in 0usize..5) {
                let f = Field::prime(p).unwrap();
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let b = random_unimodular(&f, m, deg, &mut rng);
                let r = reduce_basis(&b).unwrap();
                let sum: i64 = r.minima.iter().map(|x| x.exp().unwrap()).sum();
                prop_assert_eq!(sum, 0);
                prop_assert!(r.minima.windows(2).all(|w| w[0] <= w[1]));
                let reduced = LatticeBasis::new(r.rows.clone()).unwrap();
                prop_assert_eq!(det_norm(&reduced).unwrap(), NormExp::ONE);
                let norms: Vec<NormExp> = r.rows.iter().map(|v| crate::laurent::VecK(v.clone()).norm().unwrap()).collect();
                prop_assert_eq!(norms, r.minima.clone());
                prop_assert_eq!(delta(&b).unwrap(), r.minima[0]);
            }
        }
    }
}

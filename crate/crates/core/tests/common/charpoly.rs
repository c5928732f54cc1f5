//! Exact characteristic-polynomial oracle for small symmetric matrices.
//!
//! `det(A − λI)` is expanded by cofactors over exact rationals (every f64 is
//! a dyadic rational), and its real roots are isolated with Sturm sequences
//! and exact bisection. Repeated roots are resolved through `gcd(p, p')`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Q = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly(Vec<Q>); // low to high

impl Poly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn constant(c: Q) -> Self {
        Poly(vec![c]).trim()
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Q::zero)
                        + o.0.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
        .trim()
    }

    fn scale(&self, k: &Q) -> Self {
        Poly(self.0.iter().map(|c| c * k).collect()).trim()
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }

    fn derivative(&self) -> Self {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
        .trim()
    }

    fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quo = vec![Q::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let coef = &rem[rem.len() - 1] / &lead;
            for (i, c) in d.0.iter().enumerate() {
                rem[k + i] -= &coef * c;
            }
            quo[k] = coef;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly(quo).trim(), Poly(rem).trim())
    }

    fn monic(&self) -> Self {
        let lead = self.0.last().expect("nonzero").clone();
        self.scale(&(Q::one() / lead))
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }
}

/// `det(A − λI)` by cofactor expansion along the first row.
pub fn characteristic_polynomial(a: &DMatrix<f64>) -> Poly {
    let n = a.nrows();
    let entry = |i: usize, j: usize| -> Poly {
        let v = Q::from_float(a[(i, j)]).expect("finite entry");
        if i == j {
            Poly(vec![v, -Q::one()]).trim()
        } else {
            Poly::constant(v)
        }
    };
    fn det(rows: &[usize], cols: &[usize], entry: &dyn Fn(usize, usize) -> Poly) -> Poly {
        if rows.len() == 1 {
            return entry(rows[0], cols[0]);
        }
        let mut acc = Poly(vec![]);
        for (k, &c) in cols.iter().enumerate() {
            let e = entry(rows[0], c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = det(&rows[1..], &rest, entry);
            let term = e.mul(&minor);
            acc = if k % 2 == 0 {
                acc.add(&term)
            } else {
                acc.add(&term.scale(&-Q::one()))
            };
        }
        acc
    }
    let idx: Vec<usize> = (0..n).collect();
    det(&idx, &idx, &entry)
}

struct Sturm(Vec<Poly>);

impl Sturm {
    fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let k = seq.len();
            let r = seq[k - 2].divrem(&seq[k - 1]).1.scale(&-Q::one());
            seq.push(r);
        }
        seq.pop();
        Sturm(seq)
    }

    fn variations(&self, x: &Q) -> usize {
        let signs: Vec<i8> = self
            .0
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in `(lo, hi]`.
    fn count(&self, lo: &Q, hi: &Q) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

fn two() -> Q {
    Q::from_integer(BigInt::from(2))
}

/// Multiplicity of the single root of `p` isolated in `(lo, hi]`.
fn multiplicity(p: &Poly, lo: &Q, hi: &Q) -> usize {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        return 1;
    }
    if Sturm::new(&g).count(lo, hi) == 0 {
        1
    } else {
        1 + multiplicity(&g, lo, hi)
    }
}

/// Real roots of a polynomial with only real roots, each repeated by its
/// multiplicity, ascending. `bound` encloses all roots.
pub fn real_roots(p: &Poly, bound: f64) -> Vec<f64> {
    let g = p.gcd(&p.derivative());
    let squarefree = p.divrem(&g).0;
    let sturm = Sturm::new(&squarefree);
    let lo = Q::from_float(-bound).unwrap();
    let hi = Q::from_float(bound).unwrap();
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let count = sturm.count(&a, &b);
        if count == 0 {
            continue;
        }
        let width = (&b - &a).to_f64().unwrap();
        let scale = 1.0 + a.to_f64().unwrap().abs().max(b.to_f64().unwrap().abs());
        if count == 1 && width <= 1e-13 * scale {
            let root = ((&a + &b) / two()).to_f64().unwrap();
            for _ in 0..multiplicity(p, &a, &b) {
                out.push(root);
            }
            continue;
        }
        let mid = (&a + &b) / two();
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Eigenvalues of a symmetric matrix as roots of its characteristic
/// polynomial.
pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let bound = (0..a.nrows())
        .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    real_roots(&characteristic_polynomial(a), bound)
}

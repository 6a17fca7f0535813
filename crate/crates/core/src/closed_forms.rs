//! Explicit limiting densities for cycles, paths, stars and hypercubes.
//!
//! Every formula is evaluated in exact rational arithmetic first and only
//! converted to `f64` at the end. Paths and stars take 1-based labels
//! (the star centre is `ν + 1`); cycles take `0..ν`; hypercube weights are
//! indexed by the Hamming weight `u` of the target vertex relative to the
//! start.

use nalgebra::DMatrix;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::format;
use crate::graph::{Family, FiniteGraph};
use crate::spectral::{DensityMatrix, DensitySource};

pub type Rational = Ratio<i128>;

/// Largest hypercube dimension whose weights fit the exact `i128` path.
pub const MAX_EXACT_HYPERCUBE_DIM: u32 = 32;

/// Families with a closed-form density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormFamily {
    Cycle(usize),
    Path(usize),
    Star(usize),
    Hypercube(u32),
}

impl TryFrom<Family> for ClosedFormFamily {
    type Error = Error;

    fn try_from(f: Family) -> Result<Self> {
        f.validate()?;
        match f {
            Family::Cycle(nu) => Ok(Self::Cycle(nu)),
            Family::Path(nu) => Ok(Self::Path(nu)),
            Family::Star(nu) => Ok(Self::Star(nu)),
            Family::Hypercube(m) if m <= MAX_EXACT_HYPERCUBE_DIM => Ok(Self::Hypercube(m)),
            Family::Hypercube(_) => Err(Error::InvalidParameter(format!(
                "closed-form hypercube weights need m ≤ {MAX_EXACT_HYPERCUBE_DIM}"
            ))),
            other => Err(Error::Unsupported(format!("no closed-form density for {other}"))),
        }
    }
}

impl From<ClosedFormFamily> for Family {
    fn from(f: ClosedFormFamily) -> Self {
        match f {
            ClosedFormFamily::Cycle(nu) => Family::Cycle(nu),
            ClosedFormFamily::Path(nu) => Family::Path(nu),
            ClosedFormFamily::Star(nu) => Family::Star(nu),
            ClosedFormFamily::Hypercube(m) => Family::Hypercube(m),
        }
    }
}

fn ratio(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_range(v: usize, lo: usize, hi: usize) -> Result<()> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange { vertex: v, count: hi + 1 - lo })
    }
}

fn check_param(ok: bool, msg: &str) -> Result<()> {
    if ok { Ok(()) } else { Err(Error::InvalidParameter(msg.into())) }
}

pub fn d_cycle_exact(nu: usize, p: usize, q: usize) -> Result<Rational> {
    check_param(nu >= 3, "cycle requires ν ≥ 3")?;
    check_range(p, 0, nu - 1)?;
    check_range(q, 0, nu - 1)?;
    let n = nu as i128;
    Ok(if nu % 2 == 1 {
        if p == q { ratio(2 * n - 1, n * n) } else { ratio(n - 1, n * n) }
    } else if q == p || q == (p + nu / 2) % nu {
        ratio(2 * (n - 1), n * n)
    } else {
        ratio(n - 2, n * n)
    })
}

/// `p`, `q` in `1..=ν`.
pub fn d_path_exact(nu: usize, p: usize, q: usize) -> Result<Rational> {
    check_param(nu >= 2, "path requires ν ≥ 2")?;
    check_range(p, 1, nu)?;
    check_range(q, 1, nu)?;
    let h = nu as i128 + 1;
    let mirror = p + q == nu + 1;
    Ok(if p == q && mirror {
        ratio(2, h)
    } else if (p == q) != mirror {
        ratio(3, 2 * h)
    } else {
        ratio(1, h)
    })
}

/// `p`, `q` in `1..=ν+1`, centre `ν + 1`.
pub fn d_star_exact(nu: usize, p: usize, q: usize) -> Result<Rational> {
    check_param(nu >= 1, "star requires ν ≥ 1")?;
    check_range(p, 1, nu + 1)?;
    check_range(q, 1, nu + 1)?;
    let n = nu as i128;
    let centre = nu + 1;
    Ok(match (p == centre, q == centre) {
        (true, true) => ratio(1, 2),
        (true, false) | (false, true) => ratio(1, 2 * n),
        (false, false) if p == q => ratio(2 * (n - 1) * (n - 1) + 1, 2 * n * n),
        (false, false) => ratio(3, 2 * n * n),
    })
}

fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Weight on a vertex at Hamming distance `u` from the start of a walk on
/// `Γ_0 □ H_m`:
///
/// ```text
/// 2^{-2m} Σ_{j=0}^{m} ( Σ_{b=0}^{u} (−1)^b C(u,b) C(m−u, j−b) )²
/// ```
pub fn d_hypercube_exact(m: u32, u: u32) -> Result<Rational> {
    check_param(m >= 1, "hypercube requires m ≥ 1")?;
    check_param(
        m <= MAX_EXACT_HYPERCUBE_DIM,
        "closed-form hypercube weights need m ≤ 32",
    )?;
    check_range(u as usize, 0, m as usize)?;
    let (m, u) = (m as i64, u as i64);
    let numer: i128 = (0..=m)
        .map(|j| {
            let inner: i128 = (0..=u)
                .map(|b| {
                    let sign = if b % 2 == 0 { 1 } else { -1 };
                    sign * binomial(u, b) * binomial(m - u, j - b)
                })
                .sum();
            inner * inner
        })
        .sum();
    Ok(ratio(numer, 1i128 << (2 * m)))
}

pub fn d_cycle(nu: usize, p: usize, q: usize) -> Result<f64> {
    d_cycle_exact(nu, p, q).map(to_f64)
}

pub fn d_path(nu: usize, p: usize, q: usize) -> Result<f64> {
    d_path_exact(nu, p, q).map(to_f64)
}

pub fn d_star(nu: usize, p: usize, q: usize) -> Result<f64> {
    d_star_exact(nu, p, q).map(to_f64)
}

pub fn d_hypercube(m: u32, u: u32) -> Result<f64> {
    d_hypercube_exact(m, u).map(to_f64)
}

/// Full exact matrix in internal (0-based) vertex order.
pub fn closed_form_exact(family: ClosedFormFamily) -> Result<Vec<Vec<Rational>>> {
    let n = Family::from(family).vertex_count();
    let mut rows = Vec::with_capacity(n);
    for p in 0..n {
        let mut row = Vec::with_capacity(n);
        for q in 0..n {
            row.push(match family {
                ClosedFormFamily::Cycle(nu) => d_cycle_exact(nu, p, q)?,
                ClosedFormFamily::Path(nu) => d_path_exact(nu, p + 1, q + 1)?,
                ClosedFormFamily::Star(nu) => d_star_exact(nu, p + 1, q + 1)?,
                // vertex transitivity: only the Hamming distance matters
                ClosedFormFamily::Hypercube(m) => d_hypercube_exact(m, (p ^ q).count_ones())?,
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn closed_form_matrix(family: ClosedFormFamily) -> Result<DensityMatrix> {
    let exact = closed_form_exact(family)?;
    let n = exact.len();
    let values = DMatrix::from_fn(n, n, |p, q| to_f64(exact[p][q]));
    Ok(DensityMatrix::new(values, DensitySource::ClosedForm))
}

/// `p,q,d` CSV in the family's own labelling.
pub fn closed_form_table(family: ClosedFormFamily) -> Result<String> {
    let graph = FiniteGraph::named(family.into())?;
    let d = closed_form_matrix(family)?;
    let mut out = String::from("p,q,d\n");
    for p in 0..d.nu() {
        for q in 0..d.nu() {
            out.push_str(&format!("{},{},{}\n", graph.label(p), graph.label(q), format::table(d.get(p, q))));
        }
    }
    Ok(out)
}

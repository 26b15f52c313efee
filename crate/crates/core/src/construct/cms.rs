use super::grid::{grid_to_ms, translated_cells, SdloaGrid};
use super::{index_to_vector, vector_to_index, ConstructError};
use crate::gf::{FieldElem, FieldTable};
use crate::linalg::MatrixPairCertificate;
use crate::oa;
use crate::verify::{verify_cms, MagicSquare};

/// A family of `m` squares of order `n`, each claimed `MS(n, t)`, claimed to
/// satisfy the complementary conditions R1-R3 at exponent `t + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmsFamily {
    t: u32,
    members: Vec<MagicSquare>,
}

impl CmsFamily {
    pub fn new(t: u32, members: Vec<MagicSquare>) -> Result<Self, ConstructError> {
        let first = members
            .first()
            .ok_or_else(|| ConstructError::Precondition("empty family".into()))?;
        let n = first.order();
        if let Some(i) = members.iter().position(|m| m.order() != n) {
            return Err(ConstructError::Precondition(format!(
                "member {i} has order {}, member 0 has order {n}",
                members[i].order()
            )));
        }
        Ok(CmsFamily { t, members })
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn order(&self) -> usize {
        self.members[0].order()
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn members(&self) -> &[MagicSquare] {
        &self.members
    }
}

/// Translation pairs `(H_i, H*_i)`: `H_i` runs over `F_q^t` in canonical
/// index order and `H*_i` is a permutation of `F_q^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationScheme {
    q: usize,
    t: usize,
    h_star: Vec<usize>,
}

impl TranslationScheme {
    /// `h_star[i]` is the canonical index of `H*_i`.
    pub fn new(q: usize, t: usize, h_star: Vec<usize>) -> Result<Self, ConstructError> {
        let n = q.pow(t as u32);
        let mut seen = vec![false; n];
        if h_star.len() != n {
            return Err(ConstructError::Precondition(format!(
                "translation list has {} entries, expected {n}",
                h_star.len()
            )));
        }
        for &h in &h_star {
            if h >= n || std::mem::replace(&mut seen[h], true) {
                return Err(ConstructError::Precondition(
                    "translations H* are not a permutation of F_q^t".into(),
                ));
            }
        }
        Ok(TranslationScheme { q, t, h_star })
    }

    /// From explicit `H*` vectors.
    pub fn from_vectors<V: AsRef<[u16]>>(q: usize, t: usize, vectors: &[V]) -> Result<Self, ConstructError> {
        if vectors.iter().any(|v| v.as_ref().len() != t || v.as_ref().iter().any(|&c| c as usize >= q)) {
            return Err(ConstructError::Precondition(format!("translations must lie in F_{q}^{t}")));
        }
        TranslationScheme::new(q, t, vectors.iter().map(|v| vector_to_index(v.as_ref(), q)).collect())
    }

    /// `H* = d H`.
    pub fn scaled(field: &FieldTable, t: usize, d: FieldElem) -> Result<Self, ConstructError> {
        let q = field.order();
        let h_star = (0..q.pow(t as u32))
            .map(|i| {
                let v: Vec<u16> = index_to_vector(i, q, t)
                    .into_iter()
                    .map(|c| field.mul(d, FieldElem::new(c)).index())
                    .collect();
                vector_to_index(&v, q)
            })
            .collect();
        TranslationScheme::new(q, t, h_star)
    }

    pub fn len(&self) -> usize {
        self.h_star.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h_star.is_empty()
    }

    pub fn h(&self, i: usize) -> Vec<u16> {
        index_to_vector(i, self.q, self.t)
    }

    pub fn h_star(&self, i: usize) -> Vec<u16> {
        index_to_vector(self.h_star[i], self.q, self.t)
    }
}

/// The `H* = dH` scheme for a certificate that carries `d`.
pub fn default_scheme(cert: &MatrixPairCertificate) -> Result<TranslationScheme, ConstructError> {
    let d = cert
        .d
        .ok_or_else(|| ConstructError::InvalidCertificate("no shift scalar d".into()))?;
    TranslationScheme::scaled(cert.field(), cert.t(), d)
}

/// Outcome of the sufficient large-set conditions on a translated family.
///
/// `rows[x]` covers the cells of grid row `x` across all translations,
/// `columns[y]` likewise; the diagonals collect `(j, j)` and `(j, n-1-j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyChecks {
    pub rows: Vec<bool>,
    pub columns: Vec<bool>,
    pub main_diagonal: bool,
    pub back_diagonal: bool,
}

impl FamilyChecks {
    pub fn holds(&self) -> bool {
        self.first_failure().is_none()
    }

    /// Name of the first family that is not a large set.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(x) = self.rows.iter().position(|&ok| !ok) {
            return Some(format!("row family X = {x}"));
        }
        if let Some(y) = self.columns.iter().position(|&ok| !ok) {
            return Some(format!("column family Y = {y}"));
        }
        if !self.main_diagonal {
            return Some("main-diagonal family".into());
        }
        if !self.back_diagonal {
            return Some("back-diagonal family".into());
        }
        None
    }
}

fn checked_pair<'a>(
    cert: &'a MatrixPairCertificate,
    scheme: &TranslationScheme,
) -> Result<(&'a FieldTable, usize), ConstructError> {
    if !cert.supports_sdloa() || !cert.revalidate() {
        return Err(ConstructError::InvalidCertificate(
            "pair does not carry valid strong double large set conditions".into(),
        ));
    }
    let field = &**cert.field();
    let (q, t) = (field.order(), cert.t());
    if scheme.q != q || scheme.t != t {
        return Err(ConstructError::Precondition(format!(
            "scheme over F_{}^{} does not match the pair over F_{q}^{t}",
            scheme.q, scheme.t
        )));
    }
    Ok((field, t))
}

fn translated_grids(
    cert: &MatrixPairCertificate,
    scheme: &TranslationScheme,
) -> Result<Vec<SdloaGrid>, ConstructError> {
    (0..scheme.len())
        .map(|i| {
            let cells = translated_cells(&cert.e1, &cert.e2, &scheme.h(i), &scheme.h_star(i));
            SdloaGrid::checked(cert, cells)
        })
        .collect()
}

fn grid_family_checks(grids: &[SdloaGrid], q: usize, t: usize) -> FamilyChecks {
    let n = q.pow(t as u32);
    let large = |member: &(dyn for<'g> Fn(&'g SdloaGrid, usize) -> &'g [u16] + Sync)| {
        oa::large_set_by(n, |h| (0..n).map(|j| member(&grids[h], j)).collect(), 2 * t, q, t)
    };
    FamilyChecks {
        rows: (0..n).map(|x| large(&|g, y| g.cell(x, y))).collect(),
        columns: (0..n).map(|y| large(&|g, x| g.cell(x, y))).collect(),
        main_diagonal: large(&|g, j| g.cell(j, j)),
        back_diagonal: large(&|g, j| g.cell(j, n - 1 - j)),
    }
}

/// Evaluates the four large-set conditions on the translated family
/// without encoding it.
pub fn family_checks(
    cert: &MatrixPairCertificate,
    scheme: &TranslationScheme,
) -> Result<FamilyChecks, ConstructError> {
    let (field, t) = checked_pair(cert, scheme)?;
    let grids = translated_grids(cert, scheme)?;
    Ok(grid_family_checks(&grids, field.order(), t))
}

/// The family of encoded grids `E1 (X + H) + E2 (Y + H*)`, one per pair in
/// `scheme`, verified as complementary at exponent `t + 1`.
///
/// The large-set conditions of [`family_checks`] are sufficient, not
/// necessary: a scheme that misses one is still accepted when the exact
/// power-sum verification passes. When verification fails the error names
/// the first family that is not a large set.
pub fn build_cms(
    cert: &MatrixPairCertificate,
    scheme: &TranslationScheme,
) -> Result<CmsFamily, ConstructError> {
    let (field, t) = checked_pair(cert, scheme)?;
    let q = field.order();
    let n = q.pow(t as u32);
    let grids = translated_grids(cert, scheme)?;
    let checks = grid_family_checks(&grids, q, t);
    if let Some(name) = checks.first_failure() {
        log::info!("{name} is not a large set; relying on exact verification");
    }

    let members = grids.iter().map(grid_to_ms).collect::<Result<Vec<_>, _>>()?;
    let family = CmsFamily::new(t as u32, members)?;
    let report = verify_cms(&family);
    if !report.passed() {
        return Err(match checks.first_failure() {
            Some(family) => ConstructError::FamilyCheck { family },
            None => ConstructError::OutputCheck {
                what: format!("{n}-CMS({n}, {t})"),
                failures: report.failures.len(),
            },
        });
    }
    log::debug!("built {n}-CMS({n}, {t}) over GF({q})");
    Ok(family)
}

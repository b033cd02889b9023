//! JSON encodings. Field elements are coefficient arrays in the Conway
//! basis (`[c_0, …, c_{f-1}]`), Witt elements are arrays of coordinates,
//! matrices are arrays of rows. On input an integer may stand for a field
//! element (reduced mod `p`) or for a matrix entry (its image under
//! `ℤ → W_n`); output always uses the full form.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{Fq, GaloisField, PerfectBase, Witt, WittRing, WittVector};
use crate::bk::{
    BknModule, Failure, FiberwiseReport, HeightDim, OcReport, PresentedReport, ValidationReport,
};
use crate::enumerate::{CoverageReport, Enumeration};
use crate::error::{Error, Result};
use crate::lifting::{LiftResult, TowerReport};
use crate::normal_rep::{IsoWitness, NormalRepresentation};
use crate::semilinear::{Matrix, PresentedModule};
use crate::VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FqDto {
    Int(i64),
    Coeffs(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryDto {
    Int(i64),
    Coords(Vec<FqDto>),
}

pub type MatrixDto = Vec<Vec<EntryDto>>;

fn malformed(what: impl std::fmt::Display) -> Error {
    Error::Malformed(what.to_string())
}

fn decode_fq(field: &'static GaloisField, c: &FqDto) -> Result<Fq> {
    match c {
        FqDto::Int(k) => Ok(field.from_int(*k)),
        FqDto::Coeffs(cs) => field.from_coeffs(cs),
    }
}

fn encode_witt(w: &Witt) -> EntryDto {
    EntryDto::Coords(
        w.coords()
            .iter()
            .map(|c| FqDto::Coeffs(c.coeffs()))
            .collect(),
    )
}

fn decode_witt(ring: &'static WittRing, e: &EntryDto) -> Result<Witt> {
    match e {
        EntryDto::Int(k) => Ok(ring.from_int(*k)),
        EntryDto::Coords(cs) => {
            let coords = cs
                .iter()
                .map(|c| decode_fq(ring.field(), c))
                .collect::<Result<Vec<_>>>()?;
            ring.from_coords(&coords)
        }
    }
}

pub fn encode_matrix(m: &Matrix) -> MatrixDto {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(encode_witt).collect())
        .collect()
}

/// Decodes an `rows × cols` matrix; an empty array is accepted for any
/// shape with a zero dimension.
pub fn decode_matrix(
    ring: &'static WittRing,
    dto: &MatrixDto,
    rows: usize,
    cols: usize,
) -> Result<Matrix> {
    if rows == 0 || cols == 0 {
        if dto.iter().any(|r| !r.is_empty()) || (!dto.is_empty() && dto.len() != rows) {
            return Err(malformed(format!("expected an empty {rows}x{cols} matrix")));
        }
        return Ok(Matrix::zeros(ring, rows, cols));
    }
    if dto.len() != rows || dto.iter().any(|r| r.len() != cols) {
        return Err(malformed(format!("expected a {rows}x{cols} matrix")));
    }
    let entries = dto
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| decode_witt(ring, e))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(ring, entries)
}

fn decode_blocks(
    base: &PerfectBase,
    level: usize,
    dtos: &[MatrixDto],
    shapes: &[(usize, usize)],
) -> Result<Vec<Matrix>> {
    if dtos.len() != base.factor_count() {
        return Err(malformed(format!(
            "{} blocks for {} factors",
            dtos.len(),
            base.factor_count()
        )));
    }
    dtos.iter()
        .zip(shapes)
        .enumerate()
        .map(|(s, (d, &(r, c)))| decode_matrix(base.ring(s, level)?, d, r, c))
        .collect()
}

// ---------------------------------------------------------------- Witt vectors

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittFactorDto {
    pub f: u32,
    pub coords: Vec<FqDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittVectorDto {
    pub p: u32,
    pub factors: Vec<WittFactorDto>,
}

pub fn encode_witt_vector(x: &WittVector) -> WittVectorDto {
    WittVectorDto {
        p: x.base().p(),
        factors: x
            .factors()
            .iter()
            .map(|w| WittFactorDto {
                f: w.ring().degree(),
                coords: w
                    .coords()
                    .iter()
                    .map(|c| FqDto::Coeffs(c.coeffs()))
                    .collect(),
            })
            .collect(),
    }
}

pub fn decode_witt_vector(dto: &WittVectorDto) -> Result<WittVector> {
    let base = PerfectBase::new(dto.p, dto.factors.iter().map(|f| f.f).collect())?;
    let level = dto.factors[0].coords.len();
    if level == 0 || dto.factors.iter().any(|f| f.coords.len() != level) {
        return Err(malformed(
            "all factors need the same positive number of coordinates",
        ));
    }
    let factors = dto
        .factors
        .iter()
        .enumerate()
        .map(|(s, f)| decode_witt(base.ring(s, level)?, &EntryDto::Coords(f.coords.clone())))
        .collect::<Result<Vec<_>>>()?;
    WittVector::new(base, factors)
}

// ---------------------------------------------------------------- modules

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearDto {
    pub twist: i64,
    pub blocks: Vec<MatrixDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    pub base: PerfectBase,
    pub n: usize,
    pub ranks: Vec<usize>,
    pub phi: SemilinearDto,
    pub psi: SemilinearDto,
}

pub fn encode_module(m: &BknModule) -> ModuleDto {
    ModuleDto {
        version: Some(VERSION.to_string()),
        base: m.base().clone(),
        n: m.level(),
        ranks: m.ranks().to_vec(),
        phi: SemilinearDto {
            twist: 1,
            blocks: m.phi_blocks().iter().map(encode_matrix).collect(),
        },
        psi: SemilinearDto {
            twist: -1,
            blocks: m.psi_blocks().iter().map(encode_matrix).collect(),
        },
    }
}

pub fn decode_module(dto: &ModuleDto) -> Result<BknModule> {
    if dto.phi.twist != 1 || dto.psi.twist != -1 {
        return Err(malformed("phi carries twist 1 and psi twist -1"));
    }
    if dto.ranks.len() != dto.base.factor_count() {
        return Err(malformed("one rank per factor expected"));
    }
    if dto.n == 0 {
        return Err(malformed("level n must be positive"));
    }
    let shapes: Vec<_> = dto.ranks.iter().map(|&r| (r, r)).collect();
    let phi = decode_blocks(&dto.base, dto.n, &dto.phi.blocks, &shapes)?;
    let psi = decode_blocks(&dto.base, dto.n, &dto.psi.blocks, &shapes)?;
    BknModule::new(dto.base.clone(), dto.n, phi, psi)
}

pub fn module_from_str(s: &str) -> Result<BknModule> {
    let dto: ModuleDto = serde_json::from_str(s).map_err(malformed)?;
    decode_module(&dto)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    pub base: PerfectBase,
    /// Ambient level `N`.
    pub ambient_level: usize,
    /// Level `n ≤ N` to test projectivity over.
    pub n: usize,
    /// Per factor: generators count and presentation matrix
    /// (`rows = generators`).
    pub generators: Vec<usize>,
    pub presentation: Vec<MatrixDto>,
}

pub fn decode_presented(dto: &PresentedDto) -> Result<(PresentedModule, usize)> {
    if dto.generators.len() != dto.base.factor_count()
        || dto.presentation.len() != dto.base.factor_count()
    {
        return Err(malformed(
            "one generator count and one presentation per factor expected",
        ));
    }
    let shapes: Vec<_> = dto
        .presentation
        .iter()
        .zip(&dto.generators)
        .map(|(m, &r)| (r, m.first().map_or(0, Vec::len)))
        .collect();
    let blocks = decode_blocks(&dto.base, dto.ambient_level, &dto.presentation, &shapes)?;
    Ok((
        PresentedModule::new(dto.base.clone(), dto.ambient_level, blocks)?,
        dto.n,
    ))
}

// ---------------------------------------------------------------- normal reps

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalRepDto {
    pub base: PerfectBase,
    pub n: usize,
    pub l_ranks: Vec<usize>,
    pub p_ranks: Vec<usize>,
    /// `Φ` per factor; the first `l_ranks[s]` coordinates are `L`.
    #[serde(rename = "Phi")]
    pub phi: Vec<MatrixDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_indices: Option<Vec<Vec<usize>>>,
}

pub fn encode_normal_rep(nr: &NormalRepresentation) -> NormalRepDto {
    NormalRepDto {
        base: nr.base().clone(),
        n: nr.level(),
        l_ranks: nr.l_ranks().to_vec(),
        p_ranks: nr.p_ranks().to_vec(),
        phi: nr.phi_blocks().iter().map(encode_matrix).collect(),
        l_indices: nr.l_indices().map(<[_]>::to_vec),
    }
}

pub fn decode_normal_rep(dto: &NormalRepDto) -> Result<NormalRepresentation> {
    if dto.l_ranks.len() != dto.base.factor_count() || dto.p_ranks.len() != dto.base.factor_count()
    {
        return Err(malformed("one L-rank and one P-rank per factor expected"));
    }
    let shapes: Vec<_> = dto
        .l_ranks
        .iter()
        .zip(&dto.p_ranks)
        .map(|(&l, &p)| (l + p, l + p))
        .collect();
    let phi = decode_blocks(&dto.base, dto.n, &dto.phi, &shapes)?;
    NormalRepresentation::new(dto.base.clone(), dto.n, dto.l_ranks.clone(), phi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDto {
    pub blocks: Vec<MatrixDto>,
}

pub fn encode_witness(w: &IsoWitness) -> WitnessDto {
    WitnessDto {
        blocks: w.blocks.iter().map(encode_matrix).collect(),
    }
}

pub fn decode_witness(dto: &WitnessDto, m: &BknModule) -> Result<IsoWitness> {
    let shapes: Vec<_> = m.ranks().iter().map(|&r| (r, r)).collect();
    Ok(IsoWitness {
        blocks: decode_blocks(m.base(), m.level(), &dto.blocks, &shapes)?,
    })
}

// ---------------------------------------------------------------- reports

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureDto {
    pub code: crate::bk::FailureCode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<MatrixDto>,
}

fn encode_failures(fs: &[Failure]) -> Vec<FailureDto> {
    fs.iter()
        .map(|f| FailureDto {
            code: f.code,
            factor: f.factor,
            residue: f.residue.as_ref().map(encode_matrix),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationDto {
    pub valid: bool,
    /// `"valid, height h, dim d"` or `"invalid: CODE, …"`.
    pub summary: String,
    pub n: usize,
    pub axioms_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forward_exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reverse_exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coker_phi_projective: Option<bool>,
    pub height: Vec<usize>,
    pub dim: Vec<usize>,
    pub failures: Vec<FailureDto>,
    pub notes: Vec<String>,
}

pub fn encode_validation(r: &ValidationReport) -> ValidationDto {
    let HeightDim { height, dim } = r.height_dim.clone();
    let join = |xs: &[usize]| {
        xs.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join("/")
    };
    let summary = if r.valid {
        format!("valid, height {}, dim {}", join(&height), join(&dim))
    } else {
        let codes: Vec<_> = r
            .failures
            .iter()
            .map(|f| serde_json::to_value(f.code).expect("codes serialize"))
            .map(|v| v.as_str().unwrap_or_default().to_string())
            .collect();
        format!("invalid: {}", codes.join(", "))
    };
    ValidationDto {
        valid: r.valid,
        summary,
        n: r.level,
        axioms_hold: r.axioms_hold,
        forward_exact: r.forward_exact,
        reverse_exact: r.reverse_exact,
        coker_phi_projective: r.coker_phi_projective,
        height,
        dim,
        failures: encode_failures(&r.failures),
        notes: r.notes.clone(),
    }
}

pub fn encode_fiberwise(r: &FiberwiseReport) -> Value {
    serde_json::json!({
        "global": encode_validation(&r.global),
        "fibers": r.fibers.iter().map(encode_validation).collect::<Vec<_>>(),
        "equivalence_holds": r.equivalence_holds,
    })
}

pub fn encode_presented_report(r: &PresentedReport) -> Value {
    serde_json::json!({
        "valid": r.projective,
        "ambient_level": r.ambient_level,
        "n": r.n,
        "invariants": r.invariants,
        "killed_by_p_n": r.killed_by_p_n,
        "projective": r.projective,
        "ranks": r.ranks,
        "tor_exact": r.tor_exact,
        "failures": encode_failures(&r.failures),
    })
}

pub fn encode_oc(r: &OcReport) -> Value {
    serde_json::json!({
        "v": r.v.to_string(),
        "torsion_bkf": r.torsion_bkf,
        "projective_cokernel": r.projective_cokernel,
        "label": r.label,
    })
}

pub fn encode_lift(r: &LiftResult) -> Result<Value> {
    Ok(serde_json::json!({
        "module": encode_module(&r.module),
        "normal_rep": encode_normal_rep(&r.normal_rep),
        "witness": encode_witness(&r.witness),
        "adapted": encode_module(&r.adapted()?),
    }))
}

pub fn encode_tower(r: &TowerReport) -> Value {
    serde_json::json!({
        "base_level": r.base_level,
        "top_level": r.top_level,
        "pairs": r.pairs.iter().map(|&(a, b, ok)| serde_json::json!({"lower": a, "upper": b, "coherent": ok})).collect::<Vec<_>>(),
        "witnessed": r.witnessed,
        "coherent": r.coherent,
    })
}

pub fn encode_enumeration(e: &Enumeration) -> Value {
    serde_json::json!({
        "q": e.q,
        "rank": e.rank,
        "level": e.level,
        "classes": e.classes.iter().map(|c| serde_json::json!({
            "repr": {
                "phi": encode_matrix(&c.repr.phi_blocks()[0]),
                "psi": encode_matrix(&c.repr.psi_blocks()[0]),
            },
            "orbit_size": c.orbit_size,
            "height": c.height,
            "dim": c.dim,
        })).collect::<Vec<_>>(),
        "total": e.total(),
        "valid_pairs": e.valid_pairs,
        "note": "class counts are computed by brute force, not taken from a table",
    })
}

pub fn encode_coverage(c: &CoverageReport) -> Value {
    serde_json::json!({
        "truncation_image": c.truncation_image,
        "truncation_surjective": c.truncation_surjective,
        "lift_targets": c.lift_targets,
        "lift_coverage": c.lift_coverage,
    })
}

/// Wraps a payload as `{"version": …, "kind": …, …payload}`.
pub fn document(kind: &str, payload: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("version".into(), Value::String(VERSION.into()));
    out.insert("kind".into(), Value::String(kind.into()));
    match payload {
        Value::Object(map) => out.extend(map),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk::models::{alpha_p, mu_p};
    use crate::bk::validate_bkn;
    use crate::normal_rep::compute_normal_rep;

    #[test]
    fn module_round_trip() {
        let b = PerfectBase::new(2, vec![1, 2]).unwrap();
        let r1 = WittRing::get(2, 1, 2).unwrap();
        let r2 = WittRing::get(2, 2, 2).unwrap();
        let m = BknModule::new(
            b,
            2,
            vec![Matrix::from_ints(r1, &[&[2]]), Matrix::identity(r2, 2)],
            vec![
                Matrix::from_ints(r1, &[&[1]]),
                Matrix::scalar(r2, 2, &r2.p_elem()),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&encode_module(&m)).unwrap();
        assert_eq!(module_from_str(&text).unwrap(), m);
    }

    #[test]
    fn integer_shorthand() {
        let text = r#"{"base":{"p":3,"degrees":[1]},"n":2,"ranks":[1],
            "phi":{"twist":1,"blocks":[[[3]]]},"psi":{"twist":-1,"blocks":[[[1]]]}}"#;
        assert_eq!(module_from_str(text).unwrap(), mu_p(3, 2).unwrap());
        let long = r#"{"base":{"p":3,"degrees":[1]},"n":2,"ranks":[1],
            "phi":{"twist":1,"blocks":[[[[[0],[1]]]]]},"psi":{"twist":-1,"blocks":[[[[1,0]]]]}}"#;
        assert_eq!(module_from_str(long).unwrap(), mu_p(3, 2).unwrap());
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "{",
            r#"{"base":{"p":4,"degrees":[1]},"n":1,"ranks":[1],"phi":{"twist":1,"blocks":[[[0]]]},"psi":{"twist":-1,"blocks":[[[1]]]}}"#,
            r#"{"base":{"p":2,"degrees":[1]},"n":1,"ranks":[2],"phi":{"twist":1,"blocks":[[[0]]]},"psi":{"twist":-1,"blocks":[[[1]]]}}"#,
            r#"{"base":{"p":2,"degrees":[1]},"n":1,"ranks":[1],"phi":{"twist":0,"blocks":[[[0]]]},"psi":{"twist":-1,"blocks":[[[1]]]}}"#,
            r#"{"base":{"p":2,"degrees":[1]},"n":1,"ranks":[1],"phi":{"twist":1,"blocks":[[[[[1],[1]]]]]},"psi":{"twist":-1,"blocks":[[[1]]]}}"#,
        ] {
            assert!(module_from_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn witt_vector_round_trip() {
        let b = PerfectBase::new(3, vec![1, 2]).unwrap();
        let x = WittVector::p_scalar(&b, 3).unwrap();
        let dto = encode_witt_vector(&x);
        assert_eq!(decode_witt_vector(&dto).unwrap(), x);
        let text = r#"{"p":2,"factors":[{"f":1,"coords":[[1],[0]]}]}"#;
        let y = decode_witt_vector(&serde_json::from_str(text).unwrap()).unwrap();
        assert!(y.factors()[0].is_one());
    }

    #[test]
    fn normal_rep_and_witness_round_trip() {
        let m = mu_p(2, 2).unwrap();
        let (nr, w) = compute_normal_rep(&m).unwrap();
        let nr2 = decode_normal_rep(&encode_normal_rep(&nr)).unwrap();
        assert_eq!(nr2.phi_blocks(), nr.phi_blocks());
        assert_eq!(decode_witness(&encode_witness(&w), &m).unwrap(), w);
    }

    #[test]
    fn report_codes_are_stable_strings() {
        let r = validate_bkn(&alpha_p(2).unwrap()).unwrap();
        let v = serde_json::to_value(encode_validation(&r)).unwrap();
        assert_eq!(v["failures"][0]["code"], "EXACT_FWD");
        let doc = document("validation", v);
        assert_eq!(doc["version"], VERSION);
    }
}

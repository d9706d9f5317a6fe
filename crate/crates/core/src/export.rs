//! JSON and TSV serialization. Rationals are strings "p/q", Gaussian values
//! are {"re", "im"}, and values of ℚ(i, √2) add "sqrt2_re", "sqrt2_im" for
//! the coefficient of √2 when it is nonzero. Object keys are sorted, so the
//! output is byte-stable.

use serde_json::{json, Map, Value};

use crate::cahen_wallach::{b_form, CWParams, Label};
use crate::error::{Error, Result};
use crate::matrix::SMatrix;
use crate::moduli::{CheckRow, ClassificationRecord, ModuliPoint, Tag};
use crate::scalar::{GRat, Rational, Scalar};
use crate::superalgebra::{Route, Superalgebra};

pub const SCHEMA: u64 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn bad(what: &str, v: &Value) -> Error {
    Error::Parse(format!("expected {what}, found {v}"))
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn parse_rational(v: &Value) -> Result<Rational> {
    v.as_str().ok_or_else(|| bad("rational string", v))?.parse()
}

pub fn gauss(g: &GRat) -> Value {
    json!({ "re": rational(&g.re), "im": rational(&g.im) })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing key '{key}' in {v}")))
}

pub fn parse_gauss(v: &Value) -> Result<GRat> {
    Ok(GRat::new(parse_rational(field(v, "re")?)?, parse_rational(field(v, "im")?)?))
}

pub fn scalar(s: &Scalar) -> Value {
    let mut v = gauss(&s.a);
    if !s.b.is_zero() {
        v["sqrt2_re"] = rational(&s.b.re);
        v["sqrt2_im"] = rational(&s.b.im);
    }
    v
}

pub fn parse_scalar(v: &Value) -> Result<Scalar> {
    let a = parse_gauss(v)?;
    let b = match (v.get("sqrt2_re"), v.get("sqrt2_im")) {
        (None, None) => GRat::default(),
        (Some(re), Some(im)) => GRat::new(parse_rational(re)?, parse_rational(im)?),
        _ => return Err(bad("both sqrt2 keys", v)),
    };
    Ok(Scalar::new(a, b))
}

pub fn point(p: &ModuliPoint) -> Value {
    json!({
        "alpha_minus": rational(&p.alpha_minus),
        "alpha_plus_prime": rational(&p.alpha_plus_prime),
        "alpha_plus": rational(&p.alpha_plus),
        "alpha_minus_prime": rational(&p.alpha_minus_prime),
    })
}

pub fn parse_point(v: &Value) -> Result<ModuliPoint> {
    let r = |k: &str| parse_rational(field(v, k)?);
    Ok(ModuliPoint::new(r("alpha_minus")?, r("alpha_plus_prime")?, r("alpha_plus")?, r("alpha_minus_prime")?))
}

pub fn route_name(r: Route) -> &'static str {
    match r {
        Route::Linear => "linear",
        Route::Direct => "direct",
    }
}

pub fn parse_route(s: &str) -> Result<Route> {
    match s {
        "linear" => Ok(Route::Linear),
        "direct" => Ok(Route::Direct),
        _ => Err(Error::Parse(format!("unknown route '{s}'"))),
    }
}

pub fn parse_tag(s: &str) -> Result<Tag> {
    [Tag::DiagDisc, Tag::Ellipsoid, Tag::Flat, Tag::Q, Tag::P0, Tag::P1, Tag::P2]
        .into_iter()
        .find(|t| t.as_str() == s)
        .ok_or_else(|| Error::Parse(format!("unknown tag '{s}'")))
}

pub fn record(rec: &ClassificationRecord) -> Value {
    json!({
        "schema": SCHEMA,
        "point": point(&rec.point),
        "b_eigenvalues": rec.b_eigenvalues.iter().map(rational).collect::<Vec<_>>(),
        "zero_count": rec.zero_count,
        "indecomposable": rec.indecomposable,
        "superalgebra": rec.superalgebra,
        "susy": rec.susy,
        "nu": rational(&rec.nu),
        "parallel_dim": rec.parallel_dim,
        "odd_dim": rec.odd_dim,
        "tags": rec.tags.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
        "route": route_name(rec.route),
        "provenance": "exact",
    })
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    let x = field(v, key)?;
    x.as_u64().map(|n| n as usize).ok_or_else(|| bad("unsigned integer", x))
}

fn as_bool(v: &Value, key: &str) -> Result<bool> {
    let x = field(v, key)?;
    x.as_bool().ok_or_else(|| bad("boolean", x))
}

fn as_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    let x = field(v, key)?;
    x.as_array().ok_or_else(|| bad("array", x))
}

fn as_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    let x = field(v, key)?;
    x.as_str().ok_or_else(|| bad("string", x))
}

pub fn parse_record(v: &Value) -> Result<ClassificationRecord> {
    check_schema(v)?;
    Ok(ClassificationRecord {
        point: parse_point(field(v, "point")?)?,
        b_eigenvalues: as_array(v, "b_eigenvalues")?.iter().map(parse_rational).collect::<Result<_>>()?,
        zero_count: as_usize(v, "zero_count")?,
        indecomposable: as_bool(v, "indecomposable")?,
        superalgebra: as_bool(v, "superalgebra")?,
        susy: as_bool(v, "susy")?,
        nu: parse_rational(field(v, "nu")?)?,
        parallel_dim: as_usize(v, "parallel_dim")?,
        odd_dim: as_usize(v, "odd_dim")?,
        tags: as_array(v, "tags")?
            .iter()
            .map(|t| parse_tag(t.as_str().ok_or_else(|| bad("tag string", t))?))
            .collect::<Result<_>>()?,
        route: parse_route(as_str(v, "route")?)?,
    })
}

pub fn check(row: &CheckRow) -> Value {
    json!({
        "check": row.name,
        "pass": row.pass,
        "provenance": row.provenance.to_string(),
        "detail": row.detail,
    })
}

/// Top-level document: schema, kind, version, the inputs and the rows.
pub fn document(kind: &str, input: Value, rows: Vec<Value>) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": kind,
        "version": VERSION,
        "input": input,
        "rows": rows,
    })
}

fn check_schema(v: &Value) -> Result<()> {
    let schema = field(v, "schema")?;
    if schema.as_u64() != Some(SCHEMA) {
        return Err(Error::Parse(format!("unsupported schema {schema}")));
    }
    Ok(())
}

/// One compact JSON object per line, as written by classify and sweep.
pub fn record_lines(recs: &[ClassificationRecord]) -> String {
    recs.iter().map(|r| format!("{}\n", record(r))).collect()
}

pub fn parse_record_lines(text: &str) -> Result<Vec<ClassificationRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_record(&serde_json::from_str(l).map_err(|e| Error::Parse(e.to_string()))?))
        .collect()
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub const RECORD_TSV_HEADER: &str = "alpha_minus\talpha_plus_prime\talpha_plus\talpha_minus_prime\tb_eigenvalues\tzero_count\tindecomposable\tsuperalgebra\tsusy\tnu\tparallel_dim\todd_dim\ttags\troute\tprovenance";

pub fn record_tsv(rec: &ClassificationRecord) -> String {
    let p = &rec.point;
    let join = |v: Vec<String>| if v.is_empty() { "-".to_string() } else { v.join(",") };
    [
        p.alpha_minus.to_string(),
        p.alpha_plus_prime.to_string(),
        p.alpha_plus.to_string(),
        p.alpha_minus_prime.to_string(),
        join(rec.b_eigenvalues.iter().map(|r| r.to_string()).collect()),
        rec.zero_count.to_string(),
        rec.indecomposable.to_string(),
        rec.superalgebra.to_string(),
        rec.susy.to_string(),
        rec.nu.to_string(),
        rec.parallel_dim.to_string(),
        rec.odd_dim.to_string(),
        join(rec.tags.iter().map(|t| t.to_string()).collect()),
        route_name(rec.route).to_string(),
        "exact".to_string(),
    ]
    .join("\t")
}

pub const CHECK_TSV_HEADER: &str = "check\tpass\tprovenance\tdetail";

pub fn check_tsv(row: &CheckRow) -> String {
    format!("{}\t{}\t{}\t{}", row.name, row.pass, row.provenance, row.detail)
}

/// Nonzero entry of a structure-constant matrix.
pub type Entry = (usize, usize, Scalar);

/// Structure constants of the superalgebra at one point, with metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Dump {
    pub version: String,
    pub params: ModuliPoint,
    pub b_eigenvalues: Vec<Rational>,
    pub epsilon: i64,
    pub reduced: bool,
    pub labels: Vec<String>,
    /// [x, y] has coefficient `value` on z.
    pub even_brackets: Vec<(String, String, String, GRat)>,
    pub odd_basis: Vec<Vec<Scalar>>,
    /// Action of each even label on the odd basis, by label.
    pub even_odd: Vec<Vec<Entry>>,
    /// Upper triangle of the symmetric odd-odd form for each even label.
    pub odd_odd: Vec<Vec<Entry>>,
}

fn sparse(m: &SMatrix, symmetric: bool) -> Vec<Entry> {
    let mut out = Vec::new();
    for r in 0..m.rows() {
        let c0 = if symmetric { r } else { 0 };
        for c in c0..m.cols() {
            let v = m.get(r, c);
            if !v.is_zero() {
                out.push((r, c, v.clone()));
            }
        }
    }
    out
}

fn entries(es: &[Entry]) -> Value {
    es.iter().map(|(r, c, v)| json!({ "row": r, "col": c, "value": scalar(v) })).collect()
}

fn parse_entries(v: &Value) -> Result<Vec<Entry>> {
    v.as_array()
        .ok_or_else(|| bad("array", v))?
        .iter()
        .map(|e| Ok((as_usize(e, "row")?, as_usize(e, "col")?, parse_scalar(field(e, "value")?)?)))
        .collect()
}

fn by_label(labels: &[String], ms: &[Vec<Entry>]) -> Value {
    let mut out = Map::new();
    for (l, m) in labels.iter().zip(ms) {
        out.insert(l.clone(), entries(m));
    }
    Value::Object(out)
}

fn parse_by_label(labels: &[String], v: &Value) -> Result<Vec<Vec<Entry>>> {
    labels.iter().map(|l| parse_entries(field(v, l)?)).collect()
}

impl Dump {
    pub fn new(params: &CWParams, global_sign: i64) -> Result<Self> {
        let sa = Superalgebra::new(params)?;
        let ls = sa.labels().to_vec();
        let even_brackets = sa
            .table
            .alg
            .structure_constants()?
            .into_iter()
            .map(|(a, b, c, v)| (ls[a].to_string(), ls[b].to_string(), ls[c].to_string(), v))
            .collect();
        Ok(Dump {
            version: VERSION.to_string(),
            params: ModuliPoint::from_params(params),
            b_eigenvalues: b_form(params).diag.clone(),
            epsilon: global_sign,
            reduced: sa.reduced,
            labels: labels(&ls),
            even_brackets,
            odd_basis: sa.table.odd.vectors.clone(),
            even_odd: sa.table.actions.iter().map(|m| sparse(m, false)).collect(),
            odd_odd: sa.table.forms.iter().map(|m| sparse(m, true)).collect(),
        })
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_basis.len()
    }

    /// The full symmetric odd-odd form of `label` as a dense matrix.
    pub fn odd_odd_matrix(&self, label: &str) -> Option<SMatrix> {
        let k = self.labels.iter().position(|l| l == label)?;
        let d = self.odd_dim();
        let mut m = SMatrix::zeros(d, d);
        for (r, c, v) in &self.odd_odd[k] {
            m.set(*r, *c, v.clone());
            m.set(*c, *r, v.clone());
        }
        Some(m)
    }

    pub fn to_json(&self) -> Value {
        let even: Vec<Value> = self
            .even_brackets
            .iter()
            .map(|(x, y, z, v)| json!({ "x": x, "y": y, "z": z, "value": gauss(v) }))
            .collect();
        let odd_basis: Vec<Value> =
            self.odd_basis.iter().map(|v| Value::Array(v.iter().map(scalar).collect())).collect();
        json!({
            "schema": SCHEMA,
            "kind": "dump",
            "version": self.version,
            "provenance": "exact",
            "params": point(&self.params),
            "b_eigenvalues": self.b_eigenvalues.iter().map(rational).collect::<Vec<_>>(),
            "epsilon": self.epsilon,
            "reduced": self.reduced,
            "labels": self.labels,
            "even_brackets": even,
            "odd_dim": self.odd_dim(),
            "odd_basis": odd_basis,
            "even_odd": by_label(&self.labels, &self.even_odd),
            "odd_odd": by_label(&self.labels, &self.odd_odd),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let schema = field(v, "schema")?;
        if schema.as_u64() != Some(SCHEMA) || as_str(v, "kind")? != "dump" {
            return Err(Error::Parse("not a schema 1 dump document".into()));
        }
        let labels: Vec<String> = as_array(v, "labels")?
            .iter()
            .map(|l| l.as_str().map(str::to_string).ok_or_else(|| bad("label string", l)))
            .collect::<Result<_>>()?;
        let even_brackets = as_array(v, "even_brackets")?
            .iter()
            .map(|e| {
                Ok((
                    as_str(e, "x")?.to_string(),
                    as_str(e, "y")?.to_string(),
                    as_str(e, "z")?.to_string(),
                    parse_gauss(field(e, "value")?)?,
                ))
            })
            .collect::<Result<_>>()?;
        let odd_basis: Vec<Vec<Scalar>> = as_array(v, "odd_basis")?
            .iter()
            .map(|row| row.as_array().ok_or_else(|| bad("array", row))?.iter().map(parse_scalar).collect())
            .collect::<Result<_>>()?;
        if odd_basis.len() != as_usize(v, "odd_dim")? {
            return Err(Error::Parse("odd_dim does not match the odd basis".into()));
        }
        let epsilon = field(v, "epsilon")?;
        Ok(Dump {
            version: as_str(v, "version")?.to_string(),
            params: parse_point(field(v, "params")?)?,
            b_eigenvalues: as_array(v, "b_eigenvalues")?.iter().map(parse_rational).collect::<Result<_>>()?,
            epsilon: epsilon.as_i64().ok_or_else(|| bad("integer", epsilon))?,
            reduced: as_bool(v, "reduced")?,
            even_odd: parse_by_label(&labels, field(v, "even_odd")?)?,
            odd_odd: parse_by_label(&labels, field(v, "odd_odd")?)?,
            labels,
            even_brackets,
            odd_basis,
        })
    }
}

fn labels(ls: &[Label]) -> Vec<String> {
    ls.iter().map(|l| l.to_string()).collect()
}

/// Full structure constants of the superalgebra at `params`, with metadata.
pub fn dump(params: &CWParams, global_sign: i64) -> Result<Value> {
    Ok(Dump::new(params, global_sign)?.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::classify;

    #[test]
    fn scalar_round_trip() {
        let s = Scalar::new(GRat::new(Rational::new(1, 3), Rational::new(-2, 5)), GRat::frac(7, 2));
        let v = scalar(&s);
        assert_eq!(v["sqrt2_re"], "7/2");
        assert_eq!(parse_scalar(&v).unwrap(), s);
        let g = Scalar::from_gauss(GRat::i());
        assert!(scalar(&g).get("sqrt2_re").is_none());
    }

    #[test]
    fn record_round_trip() {
        let rec = classify(&ModuliPoint::from_ints(3, -1, 3, -1)).unwrap();
        let text = record_lines(&[rec.clone(), rec.clone()]);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(parse_record_lines(&text).unwrap(), vec![rec.clone(), rec.clone()]);
        assert_eq!(record_tsv(&rec).split('\t').count(), RECORD_TSV_HEADER.split('\t').count());
    }

    #[test]
    fn dump_is_stable() {
        let p = CWParams::from_ints(5, 2, 1, -3);
        let a = to_json_string(&dump(&p, -1).unwrap());
        let b = to_json_string(&dump(&p, -1).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": 1"));
    }

    #[test]
    fn dump_round_trip() {
        let p = CWParams::from_ints(3, -1, 3, -1);
        let d = Dump::new(&p, -1).unwrap();
        let text = to_json_string(&d.to_json());
        let back = Dump::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, d);
        assert_eq!(to_json_string(&back.to_json()), text);
    }

    #[test]
    fn dump_entries() {
        let d = Dump::new(&CWParams::from_ints(5, 2, 1, -3), -1).unwrap();
        let one = GRat::from_int(1);
        assert!(d.even_brackets.iter().any(|(x, y, z, v)| x == "-" && y == "1" && z == "1*" && *v == one));
        let k = d.odd_odd_matrix("-").unwrap();
        assert!(k.rank() <= 8);
    }
}

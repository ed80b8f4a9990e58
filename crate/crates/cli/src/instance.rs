//! JSON instance files: hand-rolled `Value` walking so schema errors carry
//! the exact offending path. All integers travel as decimal strings
//! (arbitrary precision), rationals as `"p/q"` strings.

use essmin_core::funfield::{FFTranslate, HyperForm, RatFun};
use essmin_core::heights::AlgebraicNumber;
use essmin_core::lattice::{IntMatrix, Sublattice};
use essmin_core::torus::{CharacterPresentation, Generator, TorusTranslate};
use essmin_core::unipoly::QPoly;
use essmin_core::{Int, Rat};
use serde_json::Value;

#[derive(Debug)]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl ParseError {
    fn new(path: &str, message: impl Into<String>) -> Self {
        ParseError { path: path.to_string(), message: message.into() }
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

type PResult<T> = Result<T, ParseError>;

pub const KINDS: [&str; 6] = ["torus", "point", "ff-point", "hyperform", "bound-query", "algebraic"];

/// A parsed instance file.
pub enum Instance {
    Torus { x: TorusTranslate, other: Option<TorusTranslate> },
    Point { coordinates: Vec<Rat> },
    FfPoint { translate: FFTranslate, projective: Vec<RatFun> },
    HyperForm(HyperForm),
    BoundQuery { x: TorusTranslate, m_k: Option<MkSpec> },
    Algebraic(AlgebraicNumber),
}

/// How `m(K)` is supplied.
#[derive(Debug, Clone)]
pub enum MkSpec {
    Log2,
    Schinzel,
    Abelian,
    Value(Rat),
    Dobrowolski { degree: u64, c: Rat },
}

pub struct ParsedFile {
    pub instance: Instance,
    pub seed: Option<u64>,
    pub precision: Option<u32>,
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> PResult<&'a Value> {
    v.get(key)
        .ok_or_else(|| ParseError::new(path, format!("missing field `{key}`")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> PResult<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| ParseError::new(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> PResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| ParseError::new(path, "expected an array"))
}

fn as_usize(v: &Value, path: &str) -> PResult<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| ParseError::new(path, "expected a non-negative integer"))
}

/// Integers accepted as JSON numbers or decimal strings.
fn parse_int(v: &Value, path: &str) -> PResult<Int> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Int::from(i))
            } else {
                Err(ParseError::new(path, "non-integer where integer required"))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<Int>()
            .map_err(|_| ParseError::new(path, format!("invalid integer `{s}`"))),
        _ => Err(ParseError::new(path, "expected an integer (number or decimal string)")),
    }
}

/// Rationals accepted as `"p/q"` strings, decimal strings, or JSON integers.
fn parse_rat(v: &Value, path: &str) -> PResult<Rat> {
    match v {
        Value::Number(_) => parse_int(v, path).map(Rat::from),
        Value::String(s) => parse_rat_str(s, path),
        _ => Err(ParseError::new(path, "expected a rational (\"p/q\" string)")),
    }
}

pub fn parse_rat_str(s: &str, path: &str) -> PResult<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num = p
            .trim()
            .parse::<Int>()
            .map_err(|_| ParseError::new(path, format!("invalid numerator `{p}`")))?;
        let den = q
            .trim()
            .parse::<Int>()
            .map_err(|_| ParseError::new(path, format!("invalid denominator `{q}`")))?;
        if den == Int::from(0) {
            return Err(ParseError::new(path, format!("malformed rational `{s}`: zero denominator")));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ipart = ip
            .parse::<Int>()
            .map_err(|_| ParseError::new(path, format!("invalid decimal `{s}`")))?;
        let den = Int::from(10u32).pow(fp.len() as u32);
        let fpart = fp
            .parse::<Int>()
            .map_err(|_| ParseError::new(path, format!("invalid decimal `{s}`")))?;
        let frac = Rat::new(fpart, den);
        let base = Rat::from(ipart);
        return Ok(if neg { base - frac } else { base + frac });
    }
    s.parse::<Int>()
        .map(Rat::from)
        .map_err(|_| ParseError::new(path, format!("invalid rational `{s}`")))
}

fn parse_int_matrix(v: &Value, rows_hint: Option<usize>, path: &str) -> PResult<IntMatrix> {
    let arr = as_array(v, path)?;
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(arr.len());
    for (i, row) in arr.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = as_array(row, &rpath)?;
        let mut out = Vec::with_capacity(row.len());
        for (j, e) in row.iter().enumerate() {
            out.push(parse_int(e, &format!("{rpath}[{j}]"))?);
        }
        rows.push(out);
    }
    if let Some(r) = rows_hint {
        if rows.len() != r {
            return Err(ParseError::new(path, format!("expected {r} rows, got {}", rows.len())));
        }
    }
    IntMatrix::from_rows(&rows).map_err(|e| ParseError::new(path, e.to_string()))
}

fn parse_torus(v: &Value, path: &str) -> PResult<TorusTranslate> {
    let obj = as_object(v, path)?;
    let ambient = as_usize(get(v, "ambient", path)?, &format!("{path}.ambient"))?;
    if ambient == 0 {
        return Err(ParseError::new(&format!("{path}.ambient"), "ambient must be positive"));
    }
    let gamma = match obj.get("gamma_basis") {
        None => Sublattice::full(ambient),
        Some(g) => {
            let gpath = format!("{path}.gamma_basis");
            let m = parse_int_matrix(g, None, &gpath)?;
            if m.rows() == 0 {
                Sublattice::zero(ambient)
            } else {
                if m.cols() != ambient {
                    return Err(ParseError::new(
                        &gpath,
                        format!("basis vectors must have length {ambient}"),
                    ));
                }
                let rows: Vec<Vec<Int>> = (0..m.rows()).map(|i| m.row_vec(i)).collect();
                Sublattice::from_basis(ambient, &rows)
                    .map_err(|e| ParseError::new(&gpath, e.to_string()))?
            }
        }
    };
    if !gamma.is_saturated() {
        return Err(ParseError::new(
            &format!("{path}.gamma_basis"),
            "lattice is not saturated; saturate it first",
        ));
    }
    let (modulus, torsion) = match obj.get("torsion") {
        None => (Int::from(1), vec![Int::from(0); ambient]),
        Some(t) => {
            let tpath = format!("{path}.torsion");
            let modulus = parse_int(get(t, "modulus", &tpath)?, &format!("{tpath}.modulus"))?;
            let exps = as_array(get(t, "exponents", &tpath)?, &format!("{tpath}.exponents"))?;
            let mut out = Vec::with_capacity(exps.len());
            for (i, e) in exps.iter().enumerate() {
                out.push(parse_int(e, &format!("{tpath}.exponents[{i}]"))?);
            }
            if out.len() != ambient {
                return Err(ParseError::new(
                    &format!("{tpath}.exponents"),
                    format!("expected {ambient} exponents"),
                ));
            }
            (modulus, out)
        }
    };
    let generators: Vec<Generator> = match obj.get("generators") {
        None => Vec::new(),
        Some(g) => {
            let gpath = format!("{path}.generators");
            let arr = as_array(g, &gpath)?;
            let mut out = Vec::with_capacity(arr.len());
            for (i, item) in arr.iter().enumerate() {
                let ipath = format!("{gpath}[{i}]");
                let label = get(item, "label", &ipath)?
                    .as_str()
                    .ok_or_else(|| ParseError::new(&format!("{ipath}.label"), "expected a string"))?
                    .to_string();
                let value = match item.get("value") {
                    None | Some(Value::Null) => None,
                    Some(v) => Some(parse_rat(v, &format!("{ipath}.value"))?),
                };
                out.push(Generator { label, value });
            }
            out
        }
    };
    let exponents = match obj.get("exponent_matrix") {
        None => {
            if generators.is_empty() {
                IntMatrix::zero(ambient, 0)
            } else {
                return Err(ParseError::new(
                    &format!("{path}.exponent_matrix"),
                    "required when generators are given",
                ));
            }
        }
        Some(m) => {
            let mpath = format!("{path}.exponent_matrix");
            let m = parse_int_matrix(m, Some(ambient), &mpath)?;
            if m.cols() != generators.len() {
                return Err(ParseError::new(
                    &mpath,
                    format!("expected {} columns (one per generator)", generators.len()),
                ));
            }
            m
        }
    };
    let point = CharacterPresentation::new(ambient, modulus, torsion, generators, exponents)
        .map_err(|e| ParseError::new(path, e.to_string()))?;
    TorusTranslate::new(ambient, gamma, point).map_err(|e| ParseError::new(path, e.to_string()))
}

fn parse_ratfun(v: &Value, path: &str) -> PResult<RatFun> {
    // either {"num": [...], "den": [...]} or a plain rational string
    if let Value::Object(_) = v {
        let parse_poly = |key: &str| -> PResult<QPoly> {
            match v.get(key) {
                None => Ok(QPoly::one()),
                Some(arr) => {
                    let ppath = format!("{path}.{key}");
                    let arr = as_array(arr, &ppath)?;
                    let mut coeffs = Vec::with_capacity(arr.len());
                    for (i, c) in arr.iter().enumerate() {
                        coeffs.push(parse_rat(c, &format!("{ppath}[{i}]"))?);
                    }
                    Ok(QPoly::from_coeffs(coeffs))
                }
            }
        };
        let num = parse_poly("num")?;
        let den = parse_poly("den")?;
        RatFun::new(num, den).map_err(|e| ParseError::new(path, e.to_string()))
    } else {
        let r = parse_rat(v, path)?;
        Ok(RatFun::constant(r))
    }
}

fn parse_ff_point(v: &Value, path: &str) -> PResult<(FFTranslate, Vec<RatFun>)> {
    let obj = as_object(v, path)?;
    let coords_v = get(v, "coordinates", path)?;
    let arr = as_array(coords_v, &format!("{path}.coordinates"))?;
    let mut coords = Vec::with_capacity(arr.len());
    for (i, c) in arr.iter().enumerate() {
        coords.push(parse_ratfun(c, &format!("{path}.coordinates[{i}]"))?);
    }
    if coords.is_empty() {
        return Err(ParseError::new(&format!("{path}.coordinates"), "no coordinates"));
    }
    let n = coords.len();
    let gamma = match obj.get("gamma_basis") {
        None => Sublattice::full(n),
        Some(g) => {
            let gpath = format!("{path}.gamma_basis");
            let m = parse_int_matrix(g, None, &gpath)?;
            if m.rows() == 0 {
                Sublattice::zero(n)
            } else {
                let rows: Vec<Vec<Int>> = (0..m.rows()).map(|i| m.row_vec(i)).collect();
                Sublattice::from_basis(n, &rows)
                    .map_err(|e| ParseError::new(&gpath, e.to_string()))?
            }
        }
    };
    let translate = FFTranslate::new(gamma, coords.clone())
        .map_err(|e| ParseError::new(path, e.to_string()))?;
    Ok((translate, coords))
}

fn parse_hyperform(v: &Value, path: &str) -> PResult<HyperForm> {
    let ambient = as_usize(get(v, "ambient", path)?, &format!("{path}.ambient"))?;
    let terms_v = as_array(get(v, "terms", path)?, &format!("{path}.terms"))?;
    let mut terms = Vec::with_capacity(terms_v.len());
    for (i, t) in terms_v.iter().enumerate() {
        let tpath = format!("{path}.terms[{i}]");
        let exps_v = as_array(get(t, "exponents", &tpath)?, &format!("{tpath}.exponents"))?;
        let mut exps = Vec::with_capacity(exps_v.len());
        for (j, e) in exps_v.iter().enumerate() {
            exps.push(as_usize(e, &format!("{tpath}.exponents[{j}]"))? as u32);
        }
        let coeff_v = as_array(get(t, "coeff", &tpath)?, &format!("{tpath}.coeff"))?;
        let mut coeffs = Vec::with_capacity(coeff_v.len());
        for (j, c) in coeff_v.iter().enumerate() {
            coeffs.push(parse_rat(c, &format!("{tpath}.coeff[{j}]"))?);
        }
        terms.push((exps, QPoly::from_coeffs(coeffs)));
    }
    HyperForm::new(ambient, terms).map_err(|e| ParseError::new(path, e.to_string()))
}

pub fn parse_mk_spec(s: &str) -> Result<MkSpec, ParseError> {
    match s {
        "log2" => Ok(MkSpec::Log2),
        "schinzel" | "eq1" => Ok(MkSpec::Schinzel),
        "abelian" | "eq2" => Ok(MkSpec::Abelian),
        _ => {
            if let Some(rest) = s.strip_prefix("dobrowolski:") {
                let mut parts = rest.split(':');
                let degree = parts
                    .next()
                    .and_then(|d| d.parse::<u64>().ok())
                    .ok_or_else(|| ParseError::new("--m-k", "dobrowolski needs a degree"))?;
                let c = match parts.next() {
                    None => Rat::from(Int::from(1)),
                    Some(c) => parse_rat_str(c, "--m-k")?,
                };
                return Ok(MkSpec::Dobrowolski { degree, c });
            }
            let v = parse_rat_str(s, "--m-k")?;
            Ok(MkSpec::Value(v))
        }
    }
}

fn parse_mk_value(v: &Value, path: &str) -> PResult<MkSpec> {
    match v {
        Value::String(s) => parse_mk_spec(s),
        Value::Object(_) => {
            if let Some(val) = v.get("value") {
                return Ok(MkSpec::Value(parse_rat(val, &format!("{path}.value"))?));
            }
            if let Some(d) = v.get("dobrowolski") {
                let dpath = format!("{path}.dobrowolski");
                let degree = get(d, "degree", &dpath)?
                    .as_u64()
                    .ok_or_else(|| ParseError::new(&format!("{dpath}.degree"), "expected integer"))?;
                let c = match d.get("c") {
                    None => Rat::from(Int::from(1)),
                    Some(c) => parse_rat(c, &format!("{dpath}.c"))?,
                };
                return Ok(MkSpec::Dobrowolski { degree, c });
            }
            Err(ParseError::new(path, "unknown m_k form"))
        }
        _ => Err(ParseError::new(path, "expected a string or object")),
    }
}

/// Parses an instance file. The `kind` tag selects the schema.
pub fn parse_instance(text: &str) -> Result<ParsedFile, ParseError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| ParseError::new("$", format!("invalid JSON: {e}")))?;
    let kind = get(&v, "kind", "$")?
        .as_str()
        .ok_or_else(|| ParseError::new("$.kind", "expected a string"))?
        .to_string();
    let seed = v.get("seed").and_then(Value::as_u64);
    let precision = v.get("precision").and_then(Value::as_u64).map(|p| p as u32);
    let instance = match kind.as_str() {
        "torus" => {
            let x = parse_torus(&v, "$")?;
            let other = match v.get("other") {
                None => None,
                Some(o) => Some(parse_torus(o, "$.other")?),
            };
            Instance::Torus { x, other }
        }
        "point" => {
            let arr = as_array(get(&v, "coordinates", "$")?, "$.coordinates")?;
            let mut coords = Vec::with_capacity(arr.len());
            for (i, c) in arr.iter().enumerate() {
                coords.push(parse_rat(c, &format!("$.coordinates[{i}]"))?);
            }
            Instance::Point { coordinates: coords }
        }
        "ff-point" => {
            let (translate, projective) = parse_ff_point(&v, "$")?;
            Instance::FfPoint { translate, projective }
        }
        "hyperform" => Instance::HyperForm(parse_hyperform(&v, "$")?),
        "bound-query" => {
            let x = parse_torus(get(&v, "translate", "$")?, "$.translate")?;
            let m_k = match v.get("m_k") {
                None => None,
                Some(m) => Some(parse_mk_value(m, "$.m_k")?),
            };
            Instance::BoundQuery { x, m_k }
        }
        "algebraic" => {
            let arr = as_array(get(&v, "coefficients", "$")?, "$.coefficients")?;
            let mut coeffs = Vec::with_capacity(arr.len());
            for (i, c) in arr.iter().enumerate() {
                coeffs.push(parse_int(c, &format!("$.coefficients[{i}]"))?);
            }
            let p = AlgebraicNumber::from_coeffs(coeffs)
                .map_err(|e| ParseError::new("$.coefficients", e.to_string()))?;
            Instance::Algebraic(p)
        }
        other => {
            return Err(ParseError::new(
                "$.kind",
                format!("unknown kind `{other}`; allowed kinds: {}", KINDS.join(", ")),
            ))
        }
    };
    Ok(ParsedFile { instance, seed, precision })
}

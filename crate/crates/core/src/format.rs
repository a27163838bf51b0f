//! Reading and writing algebra definition files.
//!
//! ```toml
//! type = "trias"
//! field = "Q"            # or "Fp:101"
//! dim = 2
//! basis = ["a", "b"]     # optional, defaults to e1..e<dim>
//!
//! [ops]
//! left = [[0, 0, 0, 1], [0, 1, 1, "1/2"]]   # e_i ⊣ e_j has coefficient c on e_k
//! right = []
//! ```
//!
//! Indices are 0-based. An operation of the declared type with no entry under
//! `[ops]` is the zero map and produces a warning.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use serde::Deserialize;
use toml::{Spanned, Value};

use crate::algebra::{AlgebraSpec, AlgebraType};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};

/// The coefficient field named in a file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .and_then(|p| p.trim().parse::<u64>().ok())
            .ok_or_else(|| Error::MalformedField(s.to_string()))?;
        PrimeField::new(p)?;
        Ok(FieldSpec::Prime(p))
    }
}

/// An algebra over whichever field its file declared.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAlgebra {
    Rational(AlgebraSpec<Rationals>),
    Modular(AlgebraSpec<PrimeField>),
}

impl AnyAlgebra {
    pub fn ty(&self) -> AlgebraType {
        match self {
            AnyAlgebra::Rational(a) => a.ty(),
            AnyAlgebra::Modular(a) => a.ty(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyAlgebra::Rational(a) => a.dim(),
            AnyAlgebra::Modular(a) => a.dim(),
        }
    }

    pub fn field_descriptor(&self) -> String {
        match self {
            AnyAlgebra::Rational(a) => a.field().descriptor(),
            AnyAlgebra::Modular(a) => a.field().descriptor(),
        }
    }

    pub fn to_file(&self) -> String {
        match self {
            AnyAlgebra::Rational(a) => serialize(a),
            AnyAlgebra::Modular(a) => serialize(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedAlgebra {
    pub algebra: AnyAlgebra,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(rename = "type")]
    ty: Spanned<String>,
    field: Spanned<String>,
    dim: Spanned<i64>,
    basis: Option<Spanned<Vec<String>>>,
    #[serde(default)]
    ops: BTreeMap<String, Spanned<Vec<Spanned<Vec<Value>>>>>,
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }

    fn at<T>(&self, span: Range<usize>, r: Result<T>) -> Result<T> {
        r.map_err(|e| Error::AtLine { line: self.line(span), source: Box::new(e) })
    }
}

/// Parses an algebra file, returning the algebra and any warnings.
pub fn parse_algebra_file(text: &str) -> Result<ParsedAlgebra> {
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| Lines(text).line(s));
        Error::Parse { line, message: e.message().to_string() }
    })?;
    let lines = Lines(text);
    let ty: AlgebraType = lines.at(raw.ty.span(), raw.ty.get_ref().parse())?;
    let field = lines.at(raw.field.span(), FieldSpec::parse(raw.field.get_ref()))?;
    let dim = *raw.dim.get_ref();
    if dim < 1 {
        let e = Error::InvalidField { field: "dim".into(), message: format!("must be >= 1, got {dim}") };
        return lines.at(raw.dim.span(), Err(e));
    }
    let dim = dim as usize;
    let basis = match &raw.basis {
        Some(b) if b.get_ref().len() != dim => {
            let e = Error::InvalidField {
                field: "basis".into(),
                message: format!("{} names for dim {dim}", b.get_ref().len()),
            };
            return lines.at(b.span(), Err(e));
        }
        Some(b) => b.get_ref().clone(),
        None => (1..=dim).map(|i| format!("e{i}")).collect(),
    };
    let algebra = match field {
        FieldSpec::Rationals => AnyAlgebra::Rational(build(&lines, Rationals, ty, basis, &raw)?),
        FieldSpec::Prime(p) => AnyAlgebra::Modular(build(&lines, PrimeField::new(p)?, ty, basis, &raw)?),
    };
    let warnings = ty
        .operations()
        .iter()
        .filter(|op| !raw.ops.contains_key(op.name()))
        .map(|op| format!("operation `{}` missing; treated as the zero map", op.name()))
        .collect();
    Ok(ParsedAlgebra { algebra, warnings })
}

fn build<F: Field>(lines: &Lines, field: F, ty: AlgebraType, basis: Vec<String>, raw: &RawFile) -> Result<AlgebraSpec<F>> {
    let d = basis.len();
    let mut tables = BTreeMap::new();
    for (name, entries) in &raw.ops {
        let op = ty
            .operations()
            .iter()
            .copied()
            .find(|o| o.name() == name)
            .ok_or_else(|| Error::UnknownOperation(name.clone()));
        let op = lines.at(entries.span(), op)?;
        let mut table = vec![field.zero(); d * d * d];
        let mut seen = vec![false; d * d * d];
        for entry in entries.get_ref() {
            let (i, j, k, c) = lines.at(entry.span(), parse_entry(&field, d, entry.get_ref()))?;
            let idx = (i * d + j) * d + k;
            if seen[idx] {
                let e = Error::DuplicateEntry { op: name.clone(), i, j, k };
                return lines.at(entry.span(), Err(e));
            }
            seen[idx] = true;
            table[idx] = c;
        }
        tables.insert(op, table);
    }
    AlgebraSpec::new(ty, field, basis, tables)
}

fn parse_entry<F: Field>(field: &F, d: usize, entry: &[Value]) -> Result<(usize, usize, usize, F::Elem)> {
    let [i, j, k, c] = entry else {
        return Err(Error::InvalidField {
            field: "ops".into(),
            message: format!("entry must be [i, j, k, coeff], got {} items", entry.len()),
        });
    };
    let index = |v: &Value| -> Result<usize> {
        let n = v.as_integer().ok_or_else(|| Error::InvalidField {
            field: "ops".into(),
            message: format!("index must be an integer, got {v}"),
        })?;
        match usize::try_from(n) {
            Ok(n) if n < d => Ok(n),
            _ => Err(Error::IndexOutOfRange { index: n.max(0) as usize, max: d - 1 }),
        }
    };
    let coeff = match c {
        Value::Integer(n) => field.from_i64(*n),
        Value::String(s) => field.parse(s)?,
        other => return Err(Error::MalformedCoefficient(other.to_string())),
    };
    Ok((index(i)?, index(j)?, index(k)?, coeff))
}

/// Writes a spec in the file format; [`parse_algebra_file`] reads it back
/// to an equal algebra.
pub fn serialize<F: Field>(a: &AlgebraSpec<F>) -> String {
    let f = a.field();
    let d = a.dim();
    let mut s = String::new();
    let _ = writeln!(s, "type = \"{}\"", a.ty().name());
    let _ = writeln!(s, "field = \"{}\"", f.descriptor());
    let _ = writeln!(s, "dim = {d}");
    let names: Vec<String> = a.basis().iter().map(|b| toml_string(b)).collect();
    let _ = writeln!(s, "basis = [{}]", names.join(", "));
    let _ = writeln!(s, "\n[ops]");
    for &op in a.ty().operations() {
        let table = a.table(op).expect("operation of the type");
        let entries: Vec<String> = table
            .iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(idx, c)| {
                let (i, j, k) = (idx / (d * d), (idx / d) % d, idx % d);
                let r = f.render(c);
                let c = if r.contains('/') { format!("\"{r}\"") } else { r };
                format!("[{i}, {j}, {k}, {c}]")
            })
            .collect();
        if entries.is_empty() {
            let _ = writeln!(s, "{} = []", op.name());
        } else {
            let _ = writeln!(s, "{} = [", op.name());
            for e in entries {
                let _ = writeln!(s, "  {e},");
            }
            let _ = writeln!(s, "]");
        }
    }
    s
}

fn toml_string(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::OpSymbol;

    const DIDEND: &str = "type = \"didend\"\nfield = \"Q\"\ndim = 1\n\n[ops]\nprec = [[0, 0, 0, 1]]\nsucc = []\n";

    #[test]
    fn parses_didend() {
        let p = parse_algebra_file(DIDEND).unwrap();
        assert!(p.warnings.is_empty());
        let AnyAlgebra::Rational(a) = p.algebra else { panic!() };
        assert_eq!(a.dim(), 1);
        assert!(a.table(OpSymbol::Succ).unwrap().iter().all(|c| Rationals.is_zero(c)));
        assert_eq!(a.table(OpSymbol::Prec).unwrap(), &[Rationals.one()]);
    }

    #[test]
    fn missing_op_warns() {
        let text = "type = \"trias\"\nfield = \"Q\"\ndim = 1\n[ops]\nleft = [[0,0,0,1]]\nright = [[0,0,0,1]]\n";
        let p = parse_algebra_file(text).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].contains("middle"));
    }

    #[test]
    fn distinct_diagnostics() {
        let unknown = parse_algebra_file("type = \"quad\"\nfield = \"Q\"\ndim = 1\n").unwrap_err();
        assert!(matches!(unknown.root(), Error::UnknownType(_)));
        assert!(matches!(unknown, Error::AtLine { line: 1, .. }));

        let composite = parse_algebra_file("type = \"dias\"\nfield = \"Fp:6\"\ndim = 1\n").unwrap_err();
        assert_eq!(composite.root(), &Error::ModulusNotPrime(6));
        assert!(composite.to_string().contains("modulus not prime"));

        let range = parse_algebra_file("type = \"dias\"\nfield = \"Q\"\ndim = 1\n[ops]\nleft = [[0, 1, 0, 1]]\n");
        let range = range.unwrap_err();
        assert!(matches!(range.root(), Error::IndexOutOfRange { index: 1, max: 0 }));
        assert!(matches!(range, Error::AtLine { line: 5, .. }));

        let frac = parse_algebra_file("type = \"dias\"\nfield = \"Q\"\ndim = 1\n[ops]\nleft = [[0, 0, 0, \"1/x\"]]\n");
        assert!(matches!(frac.unwrap_err().root(), Error::MalformedCoefficient(_)));

        let syntax = parse_algebra_file("type = \"dias\"\nfield = \n").unwrap_err();
        assert!(matches!(syntax, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn rejects_foreign_operation_and_duplicates() {
        let foreign = parse_algebra_file("type = \"dias\"\nfield = \"Q\"\ndim = 1\n[ops]\nprec = []\n").unwrap_err();
        assert!(matches!(foreign.root(), Error::UnknownOperation(_)));
        let dup = "type = \"dias\"\nfield = \"Q\"\ndim = 1\n[ops]\nleft = [[0,0,0,1],[0,0,0,2]]\n";
        assert!(matches!(parse_algebra_file(dup).unwrap_err().root(), Error::DuplicateEntry { .. }));
    }

    #[test]
    fn prime_field_and_fraction_round_trip() {
        let text = "type = \"tricub\"\nfield = \"Fp:7\"\ndim = 1\nbasis = [\"u\"]\n[ops]\nleft = [[0,0,0,\"1/2\"]]\nright = []\nmiddle = []\n";
        let p = parse_algebra_file(text).unwrap();
        let AnyAlgebra::Modular(a) = &p.algebra else { panic!() };
        assert_eq!(a.table(OpSymbol::Left).unwrap(), &[4]);
        let again = parse_algebra_file(&p.algebra.to_file()).unwrap();
        assert_eq!(again.algebra, p.algebra);

        let q = "type = \"dias\"\nfield = \"Q\"\ndim = 2\n[ops]\nleft = [[0,1,1,\"-3/4\"]]\nright = []\n";
        let p = parse_algebra_file(q).unwrap();
        assert_eq!(parse_algebra_file(&p.algebra.to_file()).unwrap().algebra, p.algebra);
    }
}

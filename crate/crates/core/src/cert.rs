//! Independent certificate checker.
//!
//! Certificates are re-read from JSON and checked with a multiplication
//! built here from the raw structure constants, so a bug in the
//! constructors cannot hide behind the same code path.

use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Elem, Field, FieldDescriptor};
use crate::linalg::{self, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("identity fails: {0}")]
    Identity(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub kind: String,
    /// Number of identities checked.
    pub checks: usize,
}

fn bad(m: impl Into<String>) -> CheckError {
    CheckError::Malformed(m.into())
}

fn fails(m: impl Into<String>) -> CheckError {
    CheckError::Identity(m.into())
}

/// Multiplication read straight from `[[i, j, k, "c"], …]`.
struct Table {
    f: Field,
    n: usize,
    cells: Vec<Vec<Vec<(usize, Elem)>>>,
    unit: Vector,
}

fn field_of(v: &Value) -> Result<Field, CheckError> {
    let d: FieldDescriptor = serde_json::from_value(v.clone()).map_err(|e| bad(format!("field: {e}")))?;
    Field::new(d).map_err(|e| bad(e.to_string()))
}

fn elem(f: &Field, v: &Value) -> Result<Elem, CheckError> {
    match v {
        Value::String(s) => f.parse(s).map_err(|e| bad(e.to_string())),
        Value::Number(n) => f.parse(&n.to_string()).map_err(|e| bad(e.to_string())),
        _ => Err(bad("field elements must be strings")),
    }
}

fn vector(f: &Field, v: &Value, n: usize) -> Result<Vector, CheckError> {
    let arr = v.as_array().ok_or_else(|| bad("coordinates must be an array"))?;
    if arr.len() != n {
        return Err(bad(format!("expected {n} coordinates, found {}", arr.len())));
    }
    arr.iter().map(|c| elem(f, c)).collect()
}

impl Table {
    fn parse(v: &Value) -> Result<Table, CheckError> {
        let f = field_of(v.get("field").ok_or_else(|| bad("algebra without field"))?)?;
        let n = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("algebra without dim"))? as usize;
        let mut cells = vec![vec![Vec::new(); n]; n];
        for e in v.get("table").and_then(Value::as_array).ok_or_else(|| bad("algebra without table"))? {
            let e = e.as_array().filter(|e| e.len() == 4).ok_or_else(|| bad("table entries are [i, j, k, c]"))?;
            let idx = |k: usize| e[k].as_u64().map(|x| x as usize).filter(|&x| x < n).ok_or_else(|| bad("table index out of range"));
            let (i, j, k) = (idx(0)?, idx(1)?, idx(2)?);
            cells[i][j].push((k, elem(&f, &e[3])?));
        }
        let unit = match v.get("unit") {
            Some(u) => vector(&f, u, n)?,
            None => linalg::unit_vector(&f, n, 0),
        };
        Ok(Table { f, n, cells, unit })
    }

    fn mul(&self, a: &[Elem], b: &[Elem]) -> Vector {
        let f = &self.f;
        let mut out = vec![f.zero(); self.n];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
                let c = f.mul(ai, bj);
                for (k, s) in &self.cells[i][j] {
                    out[*k] = f.add(&out[*k], &f.mul(&c, s));
                }
            }
        }
        out
    }

    fn add(&self, a: &[Elem], b: &[Elem]) -> Vector {
        a.iter().zip(b).map(|(x, y)| self.f.add(x, y)).collect()
    }

    fn scalar(&self, c: &Elem) -> Vector {
        self.unit.iter().map(|u| self.f.mul(c, u)).collect()
    }

    /// `c` with `v = c·1`.
    fn scalar_of(&self, v: &[Elem]) -> Option<Elem> {
        let f = &self.f;
        let k = self.unit.iter().position(|u| !f.is_zero(u))?;
        let c = f.div(&v[k], &self.unit[k])?;
        (self.scalar(&c) == v).then_some(c)
    }

    fn zero(&self, v: &[Elem]) -> bool {
        v.iter().all(|c| self.f.is_zero(c))
    }

    /// `(class, value)` by testing `v`, `v²`, `v² + v`.
    fn classify(&self, v: &[Elem]) -> (&'static str, Option<Elem>) {
        let f = &self.f;
        if let Some(c) = self.scalar_of(v) {
            return ("central", Some(c));
        }
        let sq = self.mul(v, v);
        if let Some(c) = self.scalar_of(&sq).filter(|c| !f.is_zero(c)) {
            return ("square-central", Some(c));
        }
        if f.is_char2() {
            if let Some(c) = self.scalar_of(&self.add(&sq, v)) {
                return ("artin-schreier", Some(c));
            }
        }
        ("other", None)
    }

    fn anti(&self, u: &[Elem], v: &[Elem]) -> Vector {
        self.add(&self.mul(u, v), &self.mul(v, u))
    }

    fn commute(&self, u: &[Elem], v: &[Elem]) -> bool {
        self.mul(u, v) == self.mul(v, u)
    }

    /// `su + us = u`.
    fn twisted(&self, s: &[Elem], u: &[Elem]) -> bool {
        self.anti(s, u) == u
    }
}

pub fn check(v: &Value) -> Result<CheckReport, CheckError> {
    match v.get("kind").and_then(Value::as_str) {
        Some("chain") => check_chain(v),
        Some("slot-chain") => check_slot_chain(v),
        Some("relations") => check_relations(v),
        Some(k) => Err(bad(format!("unknown certificate kind {k:?}"))),
        None => Err(bad("certificate without \"kind\"")),
    }
}

fn check_chain(v: &Value) -> Result<CheckReport, CheckError> {
    let t = Table::parse(v.get("algebra").ok_or_else(|| bad("chain without algebra"))?)?;
    let f = &t.f;
    let char2 = f.is_char2();
    let nodes = v.get("nodes").and_then(Value::as_array).ok_or_else(|| bad("chain without nodes"))?;
    let links = v.get("links").and_then(Value::as_array).ok_or_else(|| bad("chain without links"))?;
    if nodes.is_empty() {
        return Err(bad("empty chain"));
    }
    let mut checks = 0;
    let mut xs = Vec::new();
    let mut classes = Vec::new();
    for (k, node) in nodes.iter().enumerate() {
        let x = vector(f, node.get("coords").ok_or_else(|| bad("node without coords"))?, t.n)?;
        let (class, value) = t.classify(&x);
        let claimed = node.get("class").and_then(Value::as_str).unwrap_or("");
        let claimed_value = node.get("value").filter(|v| !v.is_null()).map(|v| elem(f, v)).transpose()?;
        checks += 1;
        if class != claimed || value != claimed_value {
            let which = match claimed {
                "artin-schreier" => format!("node {k}: x{k}² + x{k} = {}", fmt_opt(f, &claimed_value)),
                _ => format!("node {k}: x{k}² = {}", fmt_opt(f, &claimed_value)),
            };
            return Err(fails(which));
        }
        xs.push(x);
        classes.push(class);
    }
    for (k, c) in classes.iter().enumerate() {
        let ok = if char2 {
            let end = k == 0 || k + 1 == classes.len();
            (*c == "artin-schreier") || (!end && *c == "square-central")
        } else {
            *c == "square-central"
        };
        if !ok {
            return Err(fails(format!("node {k} has class {c}")));
        }
    }
    if links.len() + 1 != nodes.len() {
        return Err(bad("a chain of n nodes has n - 1 links"));
    }
    let bound = if char2 { 6 } else { 4 };
    if links.len() > bound {
        return Err(fails(format!("chain length {} ≤ {bound}", links.len())));
    }
    for (k, link) in links.iter().enumerate() {
        let from = link.get("from").and_then(Value::as_u64).ok_or_else(|| bad("link without from"))? as usize;
        let to = link.get("to").and_then(Value::as_u64).ok_or_else(|| bad("link without to"))? as usize;
        if from != k || to != k + 1 {
            return Err(bad("links must join consecutive nodes"));
        }
        let (u, w) = (&xs[from], &xs[to]);
        checks += 1;
        match link.get("relation").and_then(Value::as_str) {
            Some("anticommute") if !char2 => {
                if !t.zero(&t.anti(u, w)) {
                    return Err(fails(format!("link {k}: x{from}x{to} + x{to}x{from} = 0")));
                }
            }
            Some(r @ ("twist-forward" | "twist-backward")) if char2 => {
                let (s, y, si, yi) = if r == "twist-forward" { (u, w, from, to) } else { (w, u, to, from) };
                if classes[si] != "artin-schreier" || classes[yi] != "square-central" {
                    return Err(fails(format!("link {k}: x{si} Artin-Schreier and x{yi} square-central")));
                }
                if !t.twisted(s, y) {
                    return Err(fails(format!("link {k}: x{si}x{yi} + x{yi}x{si} = x{yi}")));
                }
            }
            other => return Err(bad(format!("link {k}: unexpected relation {other:?}"))),
        }
    }
    Ok(CheckReport { kind: "chain".into(), checks })
}

fn fmt_opt(f: &Field, c: &Option<Elem>) -> String {
    c.as_ref().map(|c| f.format(c)).unwrap_or_else(|| "?".into())
}

struct Node {
    table: Table,
    /// `(char2, a, b, x, y)` per factor.
    factors: Vec<(bool, Elem, Elem, Vector, Vector)>,
}

fn parse_node(v: &Value) -> Result<Node, CheckError> {
    let table = Table::parse(v.get("algebra").ok_or_else(|| bad("node without algebra"))?)?;
    let f = &table.f;
    let mut factors = Vec::new();
    for fv in v.get("factors").and_then(Value::as_array).ok_or_else(|| bad("node without factors"))? {
        let s = fv.get("symbol").ok_or_else(|| bad("factor without symbol"))?;
        let char2 = s.get("char2").and_then(Value::as_bool).unwrap_or(false);
        let a = elem(f, s.get("a").ok_or_else(|| bad("symbol without a"))?)?;
        let b = elem(f, s.get("b").ok_or_else(|| bad("symbol without b"))?)?;
        let x = vector(f, fv.get("x").ok_or_else(|| bad("factor without x"))?, table.n)?;
        let y = vector(f, fv.get("y").ok_or_else(|| bad("factor without y"))?, table.n)?;
        factors.push((char2, a, b, x, y));
    }
    Ok(Node { table, factors })
}

/// Defining relations of every factor, commuting factors, and monomials
/// spanning the algebra.
fn check_node(k: usize, n: &Node) -> Result<usize, CheckError> {
    let t = &n.table;
    let f = &t.f;
    let mut checks = 0;
    for (i, (char2, a, b, x, y)) in n.factors.iter().enumerate() {
        let x2 = t.mul(x, x);
        let lhs = if *char2 { t.add(&x2, x) } else { x2 };
        checks += 3;
        if lhs != t.scalar(a) {
            let id = if *char2 { "x² + x = a" } else { "x² = a" };
            return Err(fails(format!("node {k} factor {i}: {id}")));
        }
        if t.mul(y, y) != t.scalar(b) {
            return Err(fails(format!("node {k} factor {i}: y² = b")));
        }
        let ok = if *char2 { t.twisted(x, y) } else { t.zero(&t.anti(x, y)) };
        if !ok {
            let id = if *char2 { "xy + yx = y" } else { "xy = -yx" };
            return Err(fails(format!("node {k} factor {i}: {id}")));
        }
    }
    for i in 0..n.factors.len() {
        for j in i + 1..n.factors.len() {
            for u in [&n.factors[i].3, &n.factors[i].4] {
                for w in [&n.factors[j].3, &n.factors[j].4] {
                    checks += 1;
                    if !t.commute(u, w) {
                        return Err(fails(format!("node {k}: factors {i} and {j} commute")));
                    }
                }
            }
        }
    }
    let mut monomials = vec![t.unit.clone()];
    for (_, _, _, x, y) in &n.factors {
        let local = [t.unit.clone(), x.clone(), y.clone(), t.mul(x, y)];
        monomials = monomials.iter().flat_map(|m| local.iter().map(move |l| (m, l))).map(|(m, l)| t.mul(m, l)).collect();
    }
    checks += 1;
    if monomials.len() != t.n || linalg::rank(f, &monomials) != t.n {
        return Err(fails(format!("node {k}: the factor monomials form a basis")));
    }
    Ok(checks)
}

fn check_slot_chain(v: &Value) -> Result<CheckReport, CheckError> {
    let nodes: Vec<Node> =
        v.get("nodes").and_then(Value::as_array).ok_or_else(|| bad("slot chain without nodes"))?.iter().map(parse_node).collect::<Result<_, _>>()?;
    if nodes.is_empty() || nodes.len() > 4 {
        return Err(fails(format!("1 ≤ node count ≤ 4, found {}", nodes.len())));
    }
    let mut checks = 0;
    for (k, n) in nodes.iter().enumerate() {
        checks += check_node(k, n)?;
    }
    let witnesses = v.get("witnesses").and_then(Value::as_array).ok_or_else(|| bad("slot chain without witnesses"))?;
    let evidence = v.get("evidence").and_then(Value::as_array).ok_or_else(|| bad("slot chain without evidence"))?;
    if witnesses.len() + 1 != nodes.len() || evidence.len() + 1 != nodes.len() {
        return Err(bad("witness and evidence counts must be one less than the node count"));
    }
    for (k, w) in witnesses.iter().enumerate() {
        let idx = |key: &str| w.get(key).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(format!("witness without {key}")));
        let (l, r) = (idx("left_factor")?, idx("right_factor")?);
        let lf = nodes[k].factors.get(l).ok_or_else(|| bad("witness factor out of range"))?;
        let rf = nodes[k + 1].factors.get(r).ok_or_else(|| bad("witness factor out of range"))?;
        let (ls, rs) = match w.get("slot").and_then(Value::as_str) {
            Some("first") => (&lf.1, &rf.1),
            Some("second") => (&lf.2, &rf.2),
            _ => return Err(bad("slot must be \"first\" or \"second\"")),
        };
        checks += 1;
        if ls != rs {
            return Err(fails(format!("nodes {k} and {}: shared slot equality", k + 1)));
        }
    }
    for (k, e) in evidence.iter().enumerate() {
        let (l, r) = (&nodes[k].table, &nodes[k + 1].table);
        match e {
            Value::String(s) if s == "same-algebra" => {
                checks += 1;
                if l.cells != r.cells || l.unit != r.unit || l.f != r.f {
                    return Err(fails(format!("nodes {k} and {} share one algebra", k + 1)));
                }
            }
            Value::String(s) if s == "assumed" => {}
            Value::Object(_) => {
                let m = e.get("map").and_then(Value::as_array).ok_or_else(|| bad("evidence map must be a matrix"))?;
                let rows: Vec<Vector> = m.iter().map(|row| vector(&l.f, row, l.n)).collect::<Result<_, _>>()?;
                checks += check_homomorphism(k, l, r, &rows)?;
            }
            _ => return Err(bad("unknown evidence")),
        }
    }
    Ok(CheckReport { kind: "slot-chain".into(), checks })
}

/// `rows` is the matrix whose column `j` is the image of `e_j`.
fn check_homomorphism(k: usize, l: &Table, r: &Table, rows: &[Vector]) -> Result<usize, CheckError> {
    let f = &l.f;
    if l.n != r.n || rows.len() != r.n {
        return Err(fails(format!("nodes {k}→{}: dimensions agree", k + 1)));
    }
    let image = |v: &[Elem]| -> Vector { rows.iter().map(|row| linalg::dot(f, row, v)).collect() };
    let cols: Vec<Vector> = (0..l.n).map(|j| image(&linalg::unit_vector(f, l.n, j))).collect();
    if linalg::rank(f, &cols) != l.n {
        return Err(fails(format!("nodes {k}→{}: the map is bijective", k + 1)));
    }
    if image(&l.unit) != r.unit {
        return Err(fails(format!("nodes {k}→{}: φ(1) = 1", k + 1)));
    }
    for i in 0..l.n {
        for j in 0..l.n {
            let mut prod = vec![f.zero(); l.n];
            for (kk, c) in &l.cells[i][j] {
                linalg::axpy(f, &mut prod, c, &cols[*kk]);
            }
            if prod != r.mul(&cols[i], &cols[j]) {
                return Err(fails(format!("nodes {k}→{}: φ(e{i}e{j}) = φ(e{i})φ(e{j})", k + 1)));
            }
        }
    }
    Ok(l.n * l.n + 2)
}

/// `{"kind": "relations", "algebra", "elements": {name: coords},
/// "claims": [{"identity", "args": [names]}]}` with identities
/// `commute`, `anticommute`, `twist` (`su + us = u`), `square-central`,
/// `artin-schreier`, `product` (`args[0] = args[1]·args[2]`).
fn check_relations(v: &Value) -> Result<CheckReport, CheckError> {
    let t = Table::parse(v.get("algebra").ok_or_else(|| bad("relations without algebra"))?)?;
    let els = v.get("elements").and_then(Value::as_object).ok_or_else(|| bad("relations without elements"))?;
    let get = |name: &Value| -> Result<Vector, CheckError> {
        let name = name.as_str().ok_or_else(|| bad("element names are strings"))?;
        vector(&t.f, els.get(name).ok_or_else(|| bad(format!("unknown element {name}")))?, t.n)
    };
    let claims = v.get("claims").and_then(Value::as_array).ok_or_else(|| bad("relations without claims"))?;
    for c in claims {
        let id = c.get("identity").and_then(Value::as_str).ok_or_else(|| bad("claim without identity"))?;
        let args = c.get("args").and_then(Value::as_array).ok_or_else(|| bad("claim without args"))?;
        let names: Vec<&str> = args.iter().filter_map(Value::as_str).collect();
        let xs: Vec<Vector> = args.iter().map(get).collect::<Result<_, _>>()?;
        let need = |k: usize| if xs.len() == k { Ok(()) } else { Err(bad(format!("{id} takes {k} arguments"))) };
        let ok = match id {
            "commute" => {
                need(2)?;
                t.commute(&xs[0], &xs[1])
            }
            "anticommute" => {
                need(2)?;
                t.zero(&t.anti(&xs[0], &xs[1]))
            }
            "twist" => {
                need(2)?;
                t.twisted(&xs[0], &xs[1])
            }
            "square-central" | "artin-schreier" => {
                need(1)?;
                t.classify(&xs[0]).0 == id
            }
            "product" => {
                need(3)?;
                xs[0] == t.mul(&xs[1], &xs[2])
            }
            _ => return Err(bad(format!("unknown identity {id:?}"))),
        };
        if !ok {
            return Err(fails(format!("{id}({})", names.join(", "))));
        }
    }
    Ok(CheckReport { kind: "relations".into(), checks: claims.len() })
}

/// Builds a relations certificate from named elements and claims.
pub fn relations_certificate(algebra: &crate::algebra::Algebra, elements: &[(&str, &[Elem])], claims: &[(&str, &[&str])]) -> Value {
    let els: serde_json::Map<String, Value> = elements.iter().map(|(n, v)| (n.to_string(), algebra.element_to_json(v))).collect();
    json!({
        "kind": "relations",
        "algebra": algebra.to_json(),
        "elements": els,
        "claims": claims.iter().map(|(id, args)| json!({"identity": id, "args": args})).collect::<Vec<_>>(),
    })
}

/// JSON pointers to the claimed scalars of a certificate: node values of a
/// chain, symbol slots of a slot chain. Negating a coordinate is not a
/// tamper in general (`-x` is as good a chain node as `x`), while every
/// claimed scalar is recomputed by the checker.
fn claimed_scalars(v: &Value) -> Vec<String> {
    let mut out = Vec::new();
    let nodes = v.get("nodes").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]);
    match v.get("kind").and_then(Value::as_str) {
        Some("chain") => {
            for (k, n) in nodes.iter().enumerate() {
                if n.get("value").is_some_and(Value::is_string) {
                    out.push(format!("/nodes/{k}/value"));
                }
            }
        }
        Some("slot-chain") => {
            for (k, n) in nodes.iter().enumerate() {
                let count = n.get("factors").and_then(Value::as_array).map_or(0, Vec::len);
                for j in 0..count {
                    out.push(format!("/nodes/{k}/factors/{j}/symbol/a"));
                    out.push(format!("/nodes/{k}/factors/{j}/symbol/b"));
                }
            }
        }
        _ => {}
    }
    out
}

/// Flips the sign of one claimed scalar (adds 1 in characteristic 2).
/// Returns `None` when the certificate has nothing to change.
pub fn tamper<R: Rng + ?Sized>(cert: &Value, rng: &mut R) -> Option<Value> {
    let f = cert
        .get("field")
        .or_else(|| cert.pointer("/nodes/0/algebra/field"))
        .and_then(|d| field_of(d).ok())?;
    let paths = claimed_scalars(cert);
    if paths.is_empty() {
        return None;
    }
    let path = &paths[rng.gen_range(0..paths.len())];
    let mut out = cert.clone();
    let slot = out.pointer_mut(path)?;
    let c = f.parse(slot.as_str()?).ok()?;
    let changed = if f.is_char2() { f.add(&c, &f.one()) } else { f.neg(&c) };
    *slot = Value::String(f.format(&changed));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::chain;
    use crate::quaternion::{QuaternionSymbol, TensorPresentation};

    fn hh() -> TensorPresentation {
        let q = Field::rationals();
        let s = QuaternionSymbol::new(&q, q.from_i64(-1), q.from_i64(-1)).unwrap();
        TensorPresentation::realize(&[s.clone(), s]).unwrap()
    }

    #[test]
    fn chains_validate_and_tampering_is_caught() {
        let p = hh();
        let (x, xp) = (p.factors()[0].x.clone(), p.factors()[1].x.clone());
        let c = chain(p.algebra(), &x, &xp, Some(&p)).unwrap();
        let cert = c.to_json();
        assert_eq!(check(&cert).unwrap().kind, "chain");
        let mut rng = crate::config::rng(1);
        for _ in 0..10 {
            let bad = tamper(&cert, &mut rng).unwrap();
            assert!(matches!(check(&bad), Err(CheckError::Identity(_))));
        }
    }

    #[test]
    fn relations_certificates() {
        let p = hh();
        let a = p.algebra();
        let (x, y) = (&p.factors()[0].x, &p.factors()[0].y);
        let cert = relations_certificate(a, &[("x", x), ("y", y)], &[("anticommute", &["x", "y"]), ("square-central", &["x"])]);
        check(&cert).unwrap();
        let cert = relations_certificate(a, &[("x", x), ("y", y)], &[("commute", &["x", "y"])]);
        assert_eq!(check(&cert), Err(CheckError::Identity("commute(x, y)".into())));
    }

    #[test]
    fn malformed_input_is_not_an_identity_failure() {
        assert!(matches!(check(&json!({"kind": "chain"})), Err(CheckError::Malformed(_))));
        assert!(matches!(check(&json!({})), Err(CheckError::Malformed(_))));
    }
}

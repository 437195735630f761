use serde_json::{json, Value};
use slotchain_core::algebra::{self, centralizer, find_isomorphism_with, recognize_quaternion, tensor_product, verify_isomorphism, IsoResult};
use slotchain_core::cert;
use slotchain_core::clifford::{clifford_algebra, extract_e, CliffordError};
use slotchain_core::elements::{chain_with, decompose_with_marked_elements, decompose_wrt, ChainError, Generator};
use slotchain_core::field::{Elem, Field};
use slotchain_core::forms::{is_isotropic_with, trivialize_discriminant, witt_decompose_with, FormError, QuadraticExtension};
use slotchain_core::quaternion::{are_isomorphic_with, common_slot_chain_tensor_with, common_slot_chain_with, QuatError, QuaternionSymbol};
use slotchain_core::suites;

use crate::input::{self, Failure, Quaternionic, Status};
use crate::{AlgebraCmd, CliffordCmd, FormCmd, Global, QuatCmd, Report, VerifyCmd};

type Outcome = Result<(Status, Report), Failure>;

fn coords(f: &Field, v: &[Elem]) -> Value {
    json!(v.iter().map(|c| f.format(c)).collect::<Vec<_>>())
}

fn vectors(f: &Field, vs: &[Vec<Elem>]) -> Value {
    json!(vs.iter().map(|v| coords(f, v)).collect::<Vec<_>>())
}

fn flag_status(flag: Option<bool>) -> Status {
    match flag {
        Some(true) => Status::Yes,
        Some(false) => Status::No,
        None => Status::Unknown,
    }
}

fn with_kind(mut v: Value, kind: &str) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("kind".into(), json!(kind));
    }
    v
}

fn form_failure(e: FormError) -> Failure {
    match e {
        FormError::Undecidable(m) => Failure::unknown(m),
        e => Failure::input(e.to_string()),
    }
}

fn quat_failure(e: QuatError) -> Failure {
    match e {
        QuatError::NotIsomorphic => Failure::no(e.to_string()),
        QuatError::Undecidable | QuatError::BudgetExhausted => Failure::unknown(e.to_string()),
        QuatError::Presentation(_) | QuatError::Decomposition(_) => Failure::no(e.to_string()),
        e => Failure::input(e.to_string()),
    }
}

fn chain_failure(a: &algebra::Algebra, e: ChainError) -> Failure {
    match e {
        ChainError::SearchExhausted(_) => Failure::unknown(e.to_string()),
        ChainError::Partial { step, ref nodes, ref reason } => {
            let body = json!({
                "kind": "partial-chain",
                "step": step,
                "reason": reason,
                "nodes": vectors(a.field(), nodes),
            });
            Failure::unknown(e.to_string()).with_body(body)
        }
        ChainError::Verification(_) | ChainError::Decomposition(_) => Failure::no(e.to_string()),
        ChainError::Quaternion(q) => quat_failure(q),
        e => Failure::input(e.to_string()),
    }
}

pub fn form(cmd: &FormCmd, g: &Global) -> Outcome {
    let bounds = g.bounds();
    match cmd {
        FormCmd::Invariants(a) => {
            let f = input::form(&a.form, "form")?;
            let d = f.discriminant();
            let out = json!({
                "kind": "form-invariants",
                "form": f.to_json(),
                "dim": f.dim(),
                "discriminant": {
                    "invariant": if d.char2 { "arf" } else { "signed-discriminant" },
                    "representative": f.field().format(&d.representative),
                    "trivial": d.trivial,
                },
            });
            Ok((Status::Yes, Report::Json(out)))
        }
        FormCmd::Isotropic(a) => {
            let f = input::form(&a.form, "form")?;
            let r = is_isotropic_with(&f, &bounds);
            let field = f.field();
            if let Some(w) = r.witness() {
                if w.iter().all(|c| field.is_zero(c)) || !field.is_zero(&f.eval(w)) {
                    return Err(Failure::no("isotropy witness does not evaluate to zero"));
                }
            }
            let out = json!({
                "kind": "isotropy",
                "form": f.to_json(),
                "isotropic": r.flag(),
                "method": r.method.name(),
                "witness": r.witness().map(|w| coords(field, w)),
            });
            Ok((flag_status(r.flag()), Report::Json(out)))
        }
        FormCmd::Witt(a) => {
            let f = input::form(&a.form, "form")?;
            let d = witt_decompose_with(&f, &bounds).map_err(form_failure)?;
            let verified = d.verify(&f);
            let out = json!({
                "kind": "witt",
                "form": f.to_json(),
                "index": d.index,
                "anisotropic": d.anisotropic.to_json(),
                "basis": vectors(f.field(), &d.basis),
                "verified": verified,
            });
            Ok((if verified { Status::Yes } else { Status::No }, Report::Json(out)))
        }
        FormCmd::Trivialize(a) => {
            let f = input::form(&a.form, "form")?;
            let field = f.field();
            let disc = f.discriminant();
            let ext = (field.is_finite() && !disc.trivial)
                .then(|| QuadraticExtension::finite(field, &disc.representative).ok())
                .flatten();
            let t = trivialize_discriminant(&f, ext.as_ref()).map_err(form_failure)?;
            let trivial = t.form.discriminant().trivial;
            let over_ext = t.check.as_ref().map(|c| c.isometric_over_extension);
            let out = json!({
                "kind": "trivialization",
                "form": f.to_json(),
                "result": t.form.to_json(),
                "already_hyperbolic": t.already_hyperbolic,
                "discriminant_trivial": trivial,
                "isometric_over_extension": over_ext,
            });
            let ok = trivial && over_ext != Some(false);
            Ok((if ok { Status::Yes } else { Status::No }, Report::Json(out)))
        }
    }
}

fn clifford_failure(e: CliffordError) -> Failure {
    match e {
        CliffordError::NontrivialDiscriminant => Failure::no(e.to_string()),
        CliffordError::NoRoot => Failure::unknown(e.to_string()),
        CliffordError::Relation(_) => Failure::no(e.to_string()),
        e => Failure::input(e.to_string()),
    }
}

pub fn clifford(cmd: &CliffordCmd, _g: &Global) -> Outcome {
    match cmd {
        CliffordCmd::Build(a) => {
            let f = input::form(&a.form, "form")?;
            let c = clifford_algebra(&f).map_err(clifford_failure)?;
            let check = c.verify();
            let mut out = with_kind(c.to_json(), "clifford");
            out["verification"] = json!({
                "dim": c.algebra().dim(),
                "relations": check.is_ok(),
                "error": check.as_ref().err().map(|e| e.to_string()),
            });
            Ok((if check.is_ok() { Status::Yes } else { Status::No }, Report::Json(out)))
        }
        CliffordCmd::ExtractE(a) => {
            let f = input::form(&a.form, "form")?;
            let x = extract_e(&f).map_err(clifford_failure)?;
            let field = f.field();
            let symbol = (x.algebra.dim() == 4)
                .then(|| recognize_quaternion(&x.algebra))
                .flatten()
                .and_then(|r| QuaternionSymbol::new(field, r.a, r.b).ok());
            let out = json!({
                "kind": "extraction",
                "form": f.to_json(),
                "algebra": x.algebra.to_json(),
                "idempotent": coords(field, &x.idempotent),
                "basis": vectors(field, &x.basis),
                "quaternion": symbol.map(|s| s.to_json()),
            });
            Ok((Status::Yes, Report::Json(out)))
        }
    }
}

fn two_symbols(l: Quaternionic, r: Quaternionic) -> Result<(QuaternionSymbol, QuaternionSymbol), Failure> {
    match (l, r) {
        (Quaternionic::Symbol(s), Quaternionic::Symbol(t)) => Ok((s, t)),
        _ => Err(Failure::input("expected two quaternion symbols")),
    }
}

pub fn quat(cmd: &QuatCmd, g: &Global) -> Outcome {
    let bounds = g.bounds();
    match cmd {
        QuatCmd::Realize(a) => {
            let s = input::symbol(&a.symbol, "symbol")?;
            let r = s.realize();
            let out = json!({
                "kind": "realization",
                "symbol": s.to_json(),
                "algebra": r.algebra.to_json(),
                "x": r.algebra.element_to_json(&r.x),
                "y": r.algebra.element_to_json(&r.y),
            });
            Ok((Status::Yes, Report::Json(out)))
        }
        QuatCmd::Division(a) => {
            let s = input::symbol(&a.symbol, "symbol")?;
            let nf = s.norm_form();
            let r = is_isotropic_with(&nf, &bounds);
            let division = r.flag().map(|iso| !iso);
            let out = json!({
                "kind": "division",
                "symbol": s.to_json(),
                "division": division,
                "method": r.method.name(),
                "norm_form": nf.to_json(),
                "norm_witness": r.witness().map(|w| coords(s.field(), w)),
            });
            Ok((flag_status(division), Report::Json(out)))
        }
        QuatCmd::Iso(a) => {
            let (s, t) = two_symbols(input::quaternionic(&a.pair.left, "left")?, input::quaternionic(&a.pair.right, "right")?)?;
            let flag = are_isomorphic_with(&s, &t, &bounds).map_err(quat_failure)?;
            let mut map = Value::Null;
            if a.map && flag == Some(true) {
                let (rs, rt) = (s.realize(), t.realize());
                if let IsoResult::Found(m) = find_isomorphism_with(&rs.algebra, &rt.algebra, &bounds) {
                    verify_isomorphism(&rs.algebra, &rt.algebra, &m).map_err(Failure::no)?;
                    map = vectors(s.field(), &m);
                }
            }
            let out = json!({
                "kind": "isomorphism",
                "left": s.to_json(),
                "right": t.to_json(),
                "isomorphic": flag,
                "map": map,
            });
            Ok((flag_status(flag), Report::Json(out)))
        }
        QuatCmd::Chain(a) => {
            let l = input::quaternionic(&a.pair.left, "left")?;
            let r = input::quaternionic(&a.pair.right, "right")?;
            let out = match (l, r) {
                (Quaternionic::Symbol(s), Quaternionic::Symbol(t)) => {
                    let c = common_slot_chain_with(&s, &t, &bounds).map_err(quat_failure)?;
                    if !c.slots_agree() {
                        return Err(Failure::no("adjacent symbols do not share the recorded slot"));
                    }
                    with_kind(c.to_json(), "symbol-chain")
                }
                (Quaternionic::Tensor(p), Quaternionic::Tensor(q)) => {
                    let c = common_slot_chain_tensor_with(&p, &q, a.assume_isomorphic, &bounds).map_err(quat_failure)?;
                    let v = c.to_json();
                    cert::check(&v).map_err(|e| Failure::no(format!("emitted certificate rejected: {e}")))?;
                    v
                }
                _ => return Err(Failure::input("--left and --right must both be symbols or both be presentations")),
            };
            Ok((Status::Yes, Report::Json(out)))
        }
    }
}

fn mark_name(m: Generator) -> &'static str {
    match m {
        Generator::X => "x",
        Generator::Y => "y",
    }
}

pub fn algebra(cmd: &AlgebraCmd, g: &Global) -> Outcome {
    let bounds = g.bounds();
    match cmd {
        AlgebraCmd::Centralizer(a) => {
            let (alg, _) = input::algebra(&a.algebra, "algebra")?;
            let s = input::elements(&alg, &a.elements, "elements")?;
            let basis = centralizer(&alg, &s);
            let out = json!({
                "kind": "centralizer",
                "dim": basis.len(),
                "basis": vectors(alg.field(), &basis),
            });
            Ok((Status::Yes, Report::Json(out)))
        }
        AlgebraCmd::Tensor(a) => {
            let (l, _) = input::algebra(&a.left, "left")?;
            let (r, _) = input::algebra(&a.right, "right")?;
            let t = tensor_product(&l, &r).map_err(|e| Failure::input(e.to_string()))?;
            Ok((Status::Yes, Report::Json(with_kind(t.to_json(), "algebra"))))
        }
        AlgebraCmd::Chain(a) => {
            let (alg, pres) = input::algebra(&a.presentation, "presentation")?;
            let oracle = match &a.oracle {
                Some(o) => Some(input::presentation(o, "oracle", &alg)?),
                None => pres,
            };
            let x = input::element(&alg, &a.x, "x")?;
            let xp = input::element(&alg, &a.xprime, "xprime")?;
            let c = chain_with(&alg, &x, &xp, oracle.as_ref(), &bounds).map_err(|e| chain_failure(&alg, e))?;
            let v = c.to_json();
            cert::check(&v).map_err(|e| Failure::no(format!("emitted certificate rejected: {e}")))?;
            Ok((Status::Yes, Report::Json(v)))
        }
        AlgebraCmd::Decompose(a) => {
            let (alg, pres) = input::algebra(&a.presentation, "presentation")?;
            let x = input::element(&alg, &a.x, "x")?;
            let f = alg.field();
            let out = if let Some(t) = &a.t {
                let t = input::element(&alg, t, "t")?;
                let d = decompose_wrt(&alg, &t, &x).map_err(|e| chain_failure(&alg, e))?;
                json!({
                    "kind": "decomposition",
                    "t0": coords(f, &d.t0),
                    "t1": coords(f, &d.t1),
                    "proof_identity": d.proof_identity,
                })
            } else {
                let xp = input::element(&alg, a.xprime.as_deref().expect("clap requires --t or --xprime"), "xprime")?;
                let oracle = match &a.oracle {
                    Some(o) => Some(input::presentation(o, "oracle", &alg)?),
                    None => pres,
                };
                let d = decompose_with_marked_elements(&alg, &x, &xp, oracle.as_ref(), &bounds).map_err(|e| chain_failure(&alg, e))?;
                json!({
                    "kind": "marked-decomposition",
                    "presentation": d.presentation.to_json(),
                    "marks": d.marks.iter().map(|m| mark_name(*m)).collect::<Vec<_>>(),
                })
            };
            Ok((Status::Yes, Report::Json(out)))
        }
    }
}

pub fn verify(cmd: &VerifyCmd, g: &Global) -> Outcome {
    match cmd {
        VerifyCmd::Suite { name } => {
            let names: Vec<String> = if name == "all" { suites::names().into_iter().map(String::from).collect() } else { vec![name.clone()] };
            let mut text = String::new();
            let mut passed = true;
            for n in &names {
                let o = suites::run_seeded(n, g.seed).ok_or_else(|| Failure::input(format!("unknown suite {n:?}; known: {}", suites::names().join(", "))))?;
                passed &= o.passed;
                text.push_str(&o.line());
                text.push('\n');
            }
            Ok((if passed { Status::Yes } else { Status::No }, Report::Text(text)))
        }
        VerifyCmd::Chain { cert: c } => {
            let v = input::load(c, "cert")?;
            match cert::check(&v) {
                Ok(r) => {
                    let out = json!({
                        "kind": "verification",
                        "certificate": r.kind,
                        "valid": true,
                        "checks": r.checks,
                    });
                    Ok((Status::Yes, Report::Json(out)))
                }
                Err(cert::CheckError::Identity(id)) => {
                    let body = json!({"kind": "verification", "valid": false, "failed_identity": id});
                    Err(Failure::no(format!("identity fails: {id}")).with_body(body))
                }
                Err(e) => Err(Failure::input(format!("--cert: {e}"))),
            }
        }
    }
}

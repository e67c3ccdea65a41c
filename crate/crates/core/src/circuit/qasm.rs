//! OpenQASM 2.0 export and import.
//!
//! Everything is expressed over `qelib1.inc` (`h`, `x`, `z`, `cx`, `ccx`,
//! `cz`, `u1`, `cu1`). Gates outside that set become custom `gate`
//! definitions emitted ahead of the body:
//!
//! * `mcx_<p>`, `mcz_<p>`, `mcu1_<p>(lambda)`: multi-controlled X, Z and
//!   phase, `<p>` listing control polarities (`1` fires on `|1⟩`). The
//!   all-ones X is `H·C^kP(π)·H` with the multi-controlled phase built from
//!   a Gray-code walk of `cx` and `cu1(±λ/2^(k−1))`.
//! * `neggrover<n>` and `cneggrover<n>_<p>`: `−G` on `n` coin wires,
//!   optionally controlled.
//!
//! [`parse_qasm`] maps the top-level statements straight back to gates (a
//! round trip reproduces the gate list); [`inline_qasm`] instead expands
//! every definition down to library gates so the emitted bodies can be
//! checked by simulation.

use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use super::{Circuit, Control, Gate, GateKind};
use crate::error::{Error, Result};

fn pattern(controls: &[Control]) -> String {
    controls.iter().map(|c| if c.on { '1' } else { '0' }).collect()
}

fn parse_pattern(p: &str) -> Option<Vec<bool>> {
    (!p.is_empty() && p.chars().all(|c| c == '0' || c == '1')).then(|| p.chars().map(|c| c == '1').collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Def {
    Mcx(String),
    Mcz(String),
    Mcu1(String),
    NegGrover(usize, String),
}

fn x_name(p: &str) -> (String, Option<Def>) {
    match p {
        "" => ("x".into(), None),
        "1" => ("cx".into(), None),
        "11" => ("ccx".into(), None),
        _ => (format!("mcx_{p}"), Some(Def::Mcx(p.into()))),
    }
}

fn z_name(p: &str) -> (String, Option<Def>) {
    match p {
        "" => ("z".into(), None),
        "1" => ("cz".into(), None),
        _ => (format!("mcz_{p}"), Some(Def::Mcz(p.into()))),
    }
}

fn p_name(p: &str) -> (String, Option<Def>) {
    match p {
        "" => ("u1".into(), None),
        "1" => ("cu1".into(), None),
        _ => (format!("mcu1_{p}"), Some(Def::Mcu1(p.into()))),
    }
}

fn grover_name(n: usize, p: &str) -> (String, Option<Def>) {
    let name = if p.is_empty() {
        format!("neggrover{n}")
    } else {
        format!("cneggrover{n}_{p}")
    };
    (name, Some(Def::NegGrover(n, p.into())))
}

fn call_name(gate: &Gate) -> (String, Option<Def>) {
    let p = pattern(&gate.controls);
    match gate.kind {
        GateKind::H => ("h".into(), None),
        GateKind::X => x_name(&p),
        GateKind::Z => z_name(&p),
        GateKind::Phase(_) => p_name(&p),
        GateKind::NegGrover => grover_name(gate.targets.len(), &p),
    }
}

/// Gray-code multi-controlled phase: `cx` between controls and
/// `cu1(±angle/2^(k−1))` onto the target.
fn gray_phase(body: &mut Vec<String>, ctls: &[String], tgt: &str, angle: &str) {
    let n = ctls.len();
    let scale = 1u64 << (n - 1);
    let bits = |x: usize| -> Vec<bool> { (0..n).map(|p| (x >> (n - 1 - p)) & 1 == 1).collect() };
    let mut codes = vec![0usize];
    for i in 0..n {
        let mirrored: Vec<usize> = codes.iter().rev().map(|x| x + (1 << i)).collect();
        codes.extend(mirrored);
    }
    let mut last: Option<Vec<bool>> = None;
    for code in codes {
        let pat = bits(code);
        if !pat.contains(&true) {
            continue;
        }
        let prev = last.get_or_insert_with(|| pat.clone()).clone();
        let lm = pat.iter().position(|&b| b).expect("non-zero code");
        if let Some(pos) = (0..n).find(|&i| pat[i] != prev[i]) {
            if pos != lm {
                body.push(format!("cx {},{};", ctls[pos], ctls[lm]));
            } else {
                for idx in (0..n).filter(|&i| pat[i]).skip(1) {
                    body.push(format!("cx {},{};", ctls[idx], ctls[lm]));
                }
            }
        }
        let sign = if pat.iter().filter(|&&b| b).count() % 2 == 0 { "-" } else { "" };
        body.push(format!("cu1({sign}{angle}/{scale}) {},{tgt};", ctls[lm]));
        last = Some(pat);
    }
}

/// Header, body lines and dependencies of one custom definition.
fn definition(def: &Def) -> (String, Vec<String>, Vec<Def>) {
    let names = |prefix: &str, k: usize| -> Vec<String> { (0..k).map(|i| format!("{prefix}{i}")).collect() };
    let flips = |ctls: &[String], p: &str| -> Vec<String> {
        ctls.iter()
            .zip(p.chars())
            .filter(|(_, b)| *b == '0')
            .map(|(c, _)| format!("x {c};"))
            .collect()
    };
    let all_ones = |k: usize| "1".repeat(k);
    match def {
        Def::Mcx(p) => {
            let ctls = names("c", p.len());
            let header = format!("gate mcx_{p} {},t", ctls.join(","));
            let mut body = flips(&ctls, p);
            let mut deps = Vec::new();
            if p.contains('0') {
                let (base, dep) = x_name(&all_ones(p.len()));
                deps.extend(dep);
                body.push(format!("{base} {},t;", ctls.join(",")));
            } else {
                body.push("h t;".into());
                gray_phase(&mut body, &ctls, "t", "pi");
                body.push("h t;".into());
            }
            body.extend(flips(&ctls, p));
            (header, body, deps)
        }
        Def::Mcz(p) => {
            let ctls = names("c", p.len());
            let (base, dep) = x_name(&all_ones(p.len()));
            let mut body = flips(&ctls, p);
            body.push("h t;".into());
            body.push(format!("{base} {},t;", ctls.join(",")));
            body.push("h t;".into());
            body.extend(flips(&ctls, p));
            (format!("gate mcz_{p} {},t", ctls.join(",")), body, dep.into_iter().collect())
        }
        Def::Mcu1(p) => {
            let ctls = names("c", p.len());
            let mut body = flips(&ctls, p);
            gray_phase(&mut body, &ctls, "t", "lambda");
            body.extend(flips(&ctls, p));
            (format!("gate mcu1_{p}(lambda) {},t", ctls.join(",")), body, Vec::new())
        }
        Def::NegGrover(n, p) => {
            let ctls = names("c", p.len());
            let tgts = names("t", *n);
            let layer = |g: &str| -> Vec<String> { tgts.iter().map(|t| format!("{g} {t};")).collect() };
            let (z, dep) = z_name(&all_ones(p.len() + n - 1));
            let z_args: Vec<String> = ctls.iter().chain(&tgts).cloned().collect();
            let mut body = flips(&ctls, p);
            body.extend(layer("h"));
            body.extend(layer("x"));
            body.push(format!("{z} {};", z_args.join(",")));
            body.extend(layer("x"));
            body.extend(layer("h"));
            body.extend(flips(&ctls, p));
            let (name, _) = grover_name(*n, p);
            let args: Vec<String> = ctls.into_iter().chain(tgts).collect();
            (format!("gate {name} {}", args.join(",")), body, dep.into_iter().collect())
        }
    }
}

fn require(def: Def, seen: &mut HashSet<Def>, out: &mut String) {
    if seen.contains(&def) {
        return;
    }
    let (header, body, deps) = definition(&def);
    for dep in deps {
        require(dep, seen, out);
    }
    seen.insert(def);
    writeln!(out, "{header} {{").expect("string write");
    for line in body {
        writeln!(out, "  {line}").expect("string write");
    }
    out.push_str("}\n");
}

pub fn export_qasm(circuit: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let mut seen = HashSet::new();
    let mut calls = Vec::with_capacity(circuit.len());
    for gate in circuit.gates() {
        let (name, def) = call_name(gate);
        if let Some(def) = def {
            require(def, &mut seen, &mut out);
        }
        let args: Vec<String> = gate
            .controls
            .iter()
            .map(|c| c.wire)
            .chain(gate.targets.iter().copied())
            .map(|w| format!("q[{w}]"))
            .collect();
        let param = match gate.kind {
            GateKind::Phase(theta) => format!("({theta})"),
            _ => String::new(),
        };
        calls.push(format!("{name}{param} {};", args.join(",")));
    }
    writeln!(out, "qreg q[{}];", circuit.width()).expect("string write");
    for call in calls {
        out.push_str(&call);
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- parsing

fn qasm_err(line: usize, message: impl Into<String>) -> Error {
    Error::Qasm {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone)]
struct Call {
    line: usize,
    name: String,
    params: Vec<String>,
    args: Vec<String>,
}

#[derive(Debug, Clone)]
struct GateDef {
    params: Vec<String>,
    qubits: Vec<String>,
    body: Vec<Call>,
}

struct Program {
    width: Option<usize>,
    defs: HashMap<String, GateDef>,
    calls: Vec<Call>,
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset].matches('\n').count() + 1
}

fn split_top(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

fn parse_call(stmt: &str, line: usize) -> Result<Call> {
    let stmt = stmt.trim();
    let name_end = stmt
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(stmt.len());
    let name = stmt[..name_end].to_string();
    if name.is_empty() {
        return Err(qasm_err(line, format!("cannot parse statement `{stmt}`")));
    }
    let mut rest = stmt[name_end..].trim_start();
    let mut params = Vec::new();
    if rest.starts_with('(') {
        let close = rest.find(')').ok_or_else(|| qasm_err(line, "unclosed parameter list"))?;
        params = split_top(&rest[1..close]);
        rest = rest[close + 1..].trim_start();
    }
    let args = split_top(rest);
    if args.is_empty() {
        return Err(qasm_err(line, format!("`{name}` has no qubit arguments")));
    }
    Ok(Call {
        line,
        name,
        params,
        args,
    })
}

fn parse_program(text: &str) -> Result<Program> {
    let text = strip_comments(text);
    let mut program = Program {
        width: None,
        defs: HashMap::new(),
        calls: Vec::new(),
    };
    let mut pos = 0;
    while pos < text.len() {
        let rest = &text[pos..];
        let skipped = rest.len() - rest.trim_start().len();
        pos += skipped;
        if pos >= text.len() {
            break;
        }
        let rest = &text[pos..];
        let line = line_at(&text, pos);
        if rest.starts_with("gate ") {
            let open = rest.find('{').ok_or_else(|| qasm_err(line, "gate definition without body"))?;
            let close = rest.find('}').ok_or_else(|| qasm_err(line, "unterminated gate body"))?;
            let (name, def) = parse_gate_header(&rest[5..open], line)?;
            let mut def = def;
            let body = &rest[open + 1..close];
            let mut offset = pos + open + 1;
            for stmt in body.split(';') {
                if !stmt.trim().is_empty() {
                    let lead = stmt.len() - stmt.trim_start().len();
                    def.body.push(parse_call(stmt, line_at(&text, offset + lead))?);
                }
                offset += stmt.len() + 1;
            }
            program.defs.insert(name, def);
            pos += close + 1;
            continue;
        }
        let end = rest.find(';').ok_or_else(|| qasm_err(line, "missing `;`"))?;
        let stmt = rest[..end].trim();
        pos += end + 1;
        if stmt.starts_with("OPENQASM") {
            if stmt != "OPENQASM 2.0" {
                return Err(qasm_err(line, format!("unsupported version `{stmt}`")));
            }
        } else if stmt.starts_with("include") || stmt.starts_with("barrier") || stmt.starts_with("creg") {
        } else if let Some(decl) = stmt.strip_prefix("qreg") {
            let decl = decl.trim();
            let size = decl
                .strip_prefix("q[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| qasm_err(line, format!("expected `qreg q[n]`, got `{stmt}`")))?;
            if program.width.replace(size).is_some() {
                return Err(qasm_err(line, "only one quantum register is supported"));
            }
        } else if stmt.starts_with("measure") || stmt.starts_with("reset") || stmt.starts_with("if") {
            return Err(qasm_err(line, format!("non-unitary statement `{stmt}`")));
        } else {
            program.calls.push(parse_call(stmt, line)?);
        }
    }
    Ok(program)
}

fn parse_gate_header(header: &str, line: usize) -> Result<(String, GateDef)> {
    let header = header.trim();
    let name_end = header
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(header.len());
    let name = header[..name_end].to_string();
    let mut rest = header[name_end..].trim_start();
    let mut params = Vec::new();
    if rest.starts_with('(') {
        let close = rest.find(')').ok_or_else(|| qasm_err(line, "unclosed parameter list"))?;
        params = split_top(&rest[1..close]);
        rest = &rest[close + 1..];
    }
    let qubits = split_top(rest);
    if name.is_empty() || qubits.is_empty() {
        return Err(qasm_err(line, format!("malformed gate header `{header}`")));
    }
    Ok((
        name,
        GateDef {
            params,
            qubits,
            body: Vec::new(),
        },
    ))
}

fn register_index(arg: &str, width: usize, line: usize) -> Result<usize> {
    let idx: usize = arg
        .strip_prefix("q[")
        .and_then(|s| s.strip_suffix(']'))
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| qasm_err(line, format!("expected `q[i]`, got `{arg}`")))?;
    if idx >= width {
        return Err(qasm_err(line, format!("qubit {idx} outside register of {width}")));
    }
    Ok(idx)
}

// ------------------------------------------------------------ expressions

struct Expr<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a HashMap<String, f64>,
}

impl Expr<'_> {
    fn skip(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Option<f64> {
        let mut v = self.product()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let r = self.product()?;
            v = if op == b'+' { v + r } else { v - r };
        }
        Some(v)
    }

    fn product(&mut self) -> Option<f64> {
        let mut v = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let r = self.unary()?;
            v = if op == b'*' { v * r } else { v / r };
        }
        Some(v)
    }

    fn unary(&mut self) -> Option<f64> {
        match self.peek()? {
            b'-' => {
                self.pos += 1;
                Some(-self.unary()?)
            }
            b'+' => {
                self.pos += 1;
                self.unary()
            }
            b'(' => {
                self.pos += 1;
                let v = self.sum()?;
                (self.peek()? == b')').then(|| self.pos += 1)?;
                Some(v)
            }
            c if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    let exp_sign = (c == b'-' || c == b'+') && matches!(self.src[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
            }
            c if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
                if ident == "pi" {
                    Some(std::f64::consts::PI)
                } else {
                    self.vars.get(ident).copied()
                }
            }
            _ => None,
        }
    }
}

fn eval(expr: &str, vars: &HashMap<String, f64>, line: usize) -> Result<f64> {
    let mut p = Expr {
        src: expr.as_bytes(),
        pos: 0,
        vars,
    };
    let v = p.sum();
    p.skip();
    match v {
        Some(v) if p.pos == expr.len() => Ok(v),
        _ => Err(qasm_err(line, format!("cannot evaluate `{expr}`"))),
    }
}

// ------------------------------------------------------------ round trip

fn arity(call: &Call, want: usize) -> Result<()> {
    if call.args.len() != want {
        return Err(qasm_err(
            call.line,
            format!("`{}` takes {want} qubits, got {}", call.name, call.args.len()),
        ));
    }
    Ok(())
}

fn one_param(call: &Call) -> Result<f64> {
    match call.params.as_slice() {
        [p] => eval(p, &HashMap::new(), call.line),
        _ => Err(qasm_err(call.line, format!("`{}` takes one parameter", call.name))),
    }
}

fn decode_call(call: &Call, wires: &[usize]) -> Result<Gate> {
    let name = call.name.as_str();
    let polar = |bits: &[bool]| -> Vec<Control> {
        bits.iter().zip(wires).map(|(&on, &wire)| Control { wire, on }).collect()
    };
    let with = |kind: GateKind, bits: Vec<bool>, targets: usize| -> Result<Gate> {
        arity(call, bits.len() + targets)?;
        Ok(Gate {
            kind,
            controls: polar(&bits),
            targets: wires[bits.len()..].to_vec(),
        })
    };
    let suffix = |prefix: &str| name.strip_prefix(prefix).and_then(parse_pattern);
    match name {
        "h" => with(GateKind::H, vec![], 1),
        "x" => with(GateKind::X, vec![], 1),
        "z" => with(GateKind::Z, vec![], 1),
        "cx" => with(GateKind::X, vec![true], 1),
        "ccx" => with(GateKind::X, vec![true, true], 1),
        "cz" => with(GateKind::Z, vec![true], 1),
        "u1" => with(GateKind::Phase(one_param(call)?), vec![], 1),
        "cu1" => with(GateKind::Phase(one_param(call)?), vec![true], 1),
        _ => {
            if let Some(bits) = suffix("mcx_") {
                with(GateKind::X, bits, 1)
            } else if let Some(bits) = suffix("mcz_") {
                with(GateKind::Z, bits, 1)
            } else if let Some(bits) = suffix("mcu1_") {
                with(GateKind::Phase(one_param(call)?), bits, 1)
            } else if let Some(rest) = name.strip_prefix("cneggrover") {
                let (n, p) = rest
                    .split_once('_')
                    .and_then(|(n, p)| Some((n.parse::<usize>().ok()?, parse_pattern(p)?)))
                    .ok_or_else(|| qasm_err(call.line, format!("malformed gate name `{name}`")))?;
                with(GateKind::NegGrover, p, n)
            } else if let Some(n) = name.strip_prefix("neggrover").and_then(|n| n.parse().ok()) {
                with(GateKind::NegGrover, vec![], n)
            } else {
                Err(qasm_err(call.line, format!("unknown gate `{name}`")))
            }
        }
    }
}

fn resolve_wires(call: &Call, width: usize) -> Result<Vec<usize>> {
    let wires: Vec<usize> = call
        .args
        .iter()
        .map(|a| register_index(a, width, call.line))
        .collect::<Result<_>>()?;
    Ok(wires)
}

fn width_of(program: &Program) -> Result<usize> {
    program.width.ok_or_else(|| qasm_err(1, "no `qreg` declaration"))
}

fn pushed(circuit: &mut Circuit, gate: Gate, line: usize) -> Result<()> {
    circuit.push(gate).map_err(|e| qasm_err(line, e.to_string()))
}

/// Reads the top-level statements of a document produced by [`export_qasm`]
/// back into gates.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let program = parse_program(text)?;
    let width = width_of(&program)?;
    let mut circuit = Circuit::new(width);
    for call in &program.calls {
        let wires = resolve_wires(call, width)?;
        pushed(&mut circuit, decode_call(call, &wires)?, call.line)?;
    }
    Ok(circuit)
}

const MAX_INLINE_DEPTH: usize = 32;

fn expand(
    call: &Call,
    wires: &[usize],
    vars: &HashMap<String, f64>,
    defs: &HashMap<String, GateDef>,
    depth: usize,
    out: &mut Circuit,
) -> Result<()> {
    if depth > MAX_INLINE_DEPTH {
        return Err(qasm_err(call.line, "gate definitions nest too deeply"));
    }
    let param = |i: usize| -> Result<f64> {
        let p = call
            .params
            .get(i)
            .ok_or_else(|| qasm_err(call.line, format!("`{}` is missing a parameter", call.name)))?;
        eval(p, vars, call.line)
    };
    let gate = |kind: GateKind, k: usize| -> Result<Gate> {
        arity(call, k + 1)?;
        Ok(Gate {
            kind,
            controls: wires[..k].iter().map(|&w| Control::on(w)).collect(),
            targets: vec![wires[k]],
        })
    };
    let library = match call.name.as_str() {
        "h" => Some(gate(GateKind::H, 0)?),
        "x" => Some(gate(GateKind::X, 0)?),
        "z" => Some(gate(GateKind::Z, 0)?),
        "cx" => Some(gate(GateKind::X, 1)?),
        "ccx" => Some(gate(GateKind::X, 2)?),
        "cz" => Some(gate(GateKind::Z, 1)?),
        "u1" => Some(gate(GateKind::Phase(param(0)?), 0)?),
        "cu1" => Some(gate(GateKind::Phase(param(0)?), 1)?),
        _ => None,
    };
    if let Some(g) = library {
        return pushed(out, g, call.line);
    }
    let def = defs
        .get(&call.name)
        .ok_or_else(|| qasm_err(call.line, format!("unknown gate `{}`", call.name)))?;
    arity(call, def.qubits.len())?;
    if def.params.len() != call.params.len() {
        return Err(qasm_err(call.line, format!("`{}` parameter count mismatch", call.name)));
    }
    let inner_vars: HashMap<String, f64> = def
        .params
        .iter()
        .enumerate()
        .map(|(i, p)| Ok((p.clone(), param(i)?)))
        .collect::<Result<_>>()?;
    let binding: HashMap<&str, usize> = def.qubits.iter().map(String::as_str).zip(wires.iter().copied()).collect();
    for inner in &def.body {
        let inner_wires: Vec<usize> = inner
            .args
            .iter()
            .map(|a| {
                binding
                    .get(a.as_str())
                    .copied()
                    .ok_or_else(|| qasm_err(inner.line, format!("unbound qubit `{a}`")))
            })
            .collect::<Result<_>>()?;
        expand(inner, &inner_wires, &inner_vars, defs, depth + 1, out)?;
    }
    Ok(())
}

/// Expands every custom definition down to library gates.
pub fn inline_qasm(text: &str) -> Result<Circuit> {
    let program = parse_program(text)?;
    let width = width_of(&program)?;
    let mut circuit = Circuit::new(width);
    for call in &program.calls {
        let wires = resolve_wires(call, width)?;
        expand(call, &wires, &HashMap::new(), &program.defs, 0, &mut circuit)?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_unitary, incrementor, max_diff_up_to_global_phase};

    fn same_unitary(a: &Circuit, b: &Circuit) -> f64 {
        let ua = circuit_unitary::<f64>(a).unwrap();
        let ub = circuit_unitary::<f64>(b).unwrap();
        max_diff_up_to_global_phase(ua.as_slice().unwrap(), ub.as_slice().unwrap()).unwrap()
    }

    #[test]
    fn single_hadamard_document() {
        let mut c = Circuit::new(1);
        c.push(Gate::h(0)).unwrap();
        assert_eq!(export_qasm(&c), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nh q[0];\n");
    }

    #[test]
    fn incrementor_round_trip() {
        let c = incrementor(2);
        assert_eq!(parse_qasm(&export_qasm(&c)).unwrap(), c);
    }

    #[test]
    fn mixed_polarity_gates_round_trip_and_inline() {
        let mut c = Circuit::new(5);
        c.push(Gate::mcx([Control::on(0), Control::off(1), Control::on(2), Control::on(3)], 4)).unwrap();
        c.push(Gate::z(0).controlled([Control::off(4), Control::on(2)])).unwrap();
        c.push(Gate::phase(0.37, 1).controlled([Control::on(0), Control::off(3), Control::on(4)])).unwrap();
        c.push(Gate::phase(-1.25, 2)).unwrap();
        c.push(Gate::neg_grover(vec![3, 4]).controlled([Control::off(0), Control::on(1), Control::on(2)])).unwrap();
        c.push(Gate::neg_grover(vec![0, 1, 2])).unwrap();
        let text = export_qasm(&c);
        assert_eq!(parse_qasm(&text).unwrap(), c);
        let inlined = inline_qasm(&text).unwrap();
        assert!(inlined.len() > c.len());
        let diff = same_unitary(&c, &inlined);
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn gray_code_mcx_up_to_six_controls() {
        for k in 3..=6 {
            let mut c = Circuit::new(k + 1);
            c.push(Gate::mcx((0..k).map(Control::on), k)).unwrap();
            let inlined = inline_qasm(&export_qasm(&c)).unwrap();
            assert!(inlined.gates().iter().all(|g| g.controls.len() <= 1));
            let diff = same_unitary(&c, &inlined);
            assert!(diff < 1e-12, "k={k}: {diff}");
        }
    }

    #[test]
    fn expressions() {
        let vars = HashMap::from([("lambda".to_string(), 2.0)]);
        assert_eq!(eval("-lambda/4", &vars, 1).unwrap(), -0.5);
        assert!((eval("pi/2", &vars, 1).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(eval("1.5e-3*(2+2)", &vars, 1).unwrap(), 0.006);
        assert!(eval("mu", &vars, 1).is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\nfoo q[1];\n";
        assert!(matches!(parse_qasm(text), Err(Error::Qasm { line: 5, .. })));
        let text = "OPENQASM 2.0;\nqreg q[2];\nh q[2];\n";
        assert!(matches!(parse_qasm(text), Err(Error::Qasm { line: 3, .. })));
        let text = "OPENQASM 2.0;\nqreg q[2];\nmeasure q[0] -> c[0];\n";
        assert!(matches!(parse_qasm(text), Err(Error::Qasm { line: 3, .. })));
    }
}

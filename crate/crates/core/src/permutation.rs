//! Permutations on `[n]`: transposition programs, dense one-line arrays, the
//! compiler from combinators, and a small gate library.
//!
//! Indices follow [`crate::semantics::rank`], so with `true = inl ()` at
//! index 0 a compiled gate on `n` bits is the textbook gate conjugated by
//! `k -> (2^n - 1) - k`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::normalize::size;
use crate::syntax::typing::annotate;
use crate::syntax::{Comb, ParseError, Parser, Prim, Ty, TypeError};

/// Default limit on the domain size [`compile`] will tabulate.
pub const DEFAULT_COMPILE_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("swap {i} {j} is not a transposition on [{arity}]")]
    InvalidSwap { arity: usize, i: usize, j: usize },
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("domain of size {size} exceeds the compile limit {cap}")]
    RefusedTooLarge { size: u64, cap: u64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// A program in the transposition language. Build with [`PermProg::swap`]
/// and [`PermProg::seq`] to get the arity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermProg {
    Id(usize),
    Swap(usize, usize, usize),
    Seq(Box<PermProg>, Box<PermProg>),
}

impl PermProg {
    pub fn id(n: usize) -> PermProg {
        PermProg::Id(n)
    }

    pub fn swap(n: usize, i: usize, j: usize) -> Result<PermProg, PermError> {
        if i == j || i >= n || j >= n {
            return Err(PermError::InvalidSwap { arity: n, i, j });
        }
        Ok(PermProg::Swap(n, i, j))
    }

    pub fn seq(a: PermProg, b: PermProg) -> Result<PermProg, PermError> {
        let (l, r) = (a.arity(), b.arity());
        if l != r {
            return Err(PermError::ArityMismatch { left: l, right: r });
        }
        Ok(PermProg::Seq(Box::new(a), Box::new(b)))
    }

    /// Right-nested sequence of transpositions, applied left to right.
    pub fn swaps(n: usize, pairs: &[(usize, usize)]) -> Result<PermProg, PermError> {
        let mut progs = pairs
            .iter()
            .map(|&(i, j)| PermProg::swap(n, i, j))
            .collect::<Result<Vec<_>, _>>()?;
        let mut acc = progs.pop().unwrap_or(PermProg::Id(n));
        while let Some(p) = progs.pop() {
            acc = PermProg::seq(p, acc)?;
        }
        Ok(acc)
    }

    pub fn arity(&self) -> usize {
        match self {
            PermProg::Id(n) | PermProg::Swap(n, _, _) => *n,
            PermProg::Seq(a, _) => a.arity(),
        }
    }

    /// Re-checks the invariants of a value built from the raw variants.
    pub fn validate(&self) -> Result<(), PermError> {
        match self {
            PermProg::Id(_) => Ok(()),
            PermProg::Swap(n, i, j) => PermProg::swap(*n, *i, *j).map(|_| ()),
            PermProg::Seq(a, b) => {
                a.validate()?;
                b.validate()?;
                if a.arity() != b.arity() {
                    return Err(PermError::ArityMismatch {
                        left: a.arity(),
                        right: b.arity(),
                    });
                }
                Ok(())
            }
        }
    }

    /// Program text with its `arity: n` header.
    pub fn to_text(&self) -> String {
        format!("arity: {}\n{}\n", self.arity(), self)
    }
}

impl fmt::Display for PermProg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermProg::Id(_) => f.write_str("id"),
            PermProg::Swap(_, i, j) => write!(f, "swap {i} {j}"),
            PermProg::Seq(a, b) => {
                if matches!(**a, PermProg::Seq(..)) {
                    write!(f, "({a}) ; {b}")
                } else {
                    write!(f, "{a} ; {b}")
                }
            }
        }
    }
}

/// Parses `arity: n` followed by `id`, `swap i j` and `p ; p`
/// (right-associative, parenthesizable). `#` starts a comment.
pub fn parse_perm(text: &str) -> Result<PermProg, PermError> {
    let mut offset = 0;
    let mut arity = None;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            offset += line.len();
            continue;
        }
        if let Some(rest) = content.strip_prefix("arity:") {
            arity = rest.trim().parse::<usize>().ok();
            if arity.is_none() {
                return Err(ParseError {
                    position: offset,
                    expected: "a number after `arity:`".into(),
                }
                .into());
            }
            offset += line.len();
        }
        break;
    }
    let Some(n) = arity else {
        return Err(ParseError {
            position: offset,
            expected: "an `arity: n` header".into(),
        }
        .into());
    };
    let body = &text[offset..];
    let mut p = Parser::new(body).map_err(|e| shift(e, offset))?;
    let prog = perm_expr(&mut p, n, offset)?;
    p.finish().map_err(|e| shift(e, offset))?;
    Ok(prog)
}

fn shift(mut e: ParseError, by: usize) -> ParseError {
    e.position += by;
    e
}

fn perm_expr(p: &mut Parser, n: usize, offset: usize) -> Result<PermProg, PermError> {
    use crate::syntax::lex::Tok;
    let left = match p.peek().cloned() {
        Some(Tok::Const(Prim::Id)) => {
            p.bump();
            PermProg::Id(n)
        }
        Some(Tok::Word(w)) if w == "swap" => {
            p.bump();
            let mut idx = [0usize; 2];
            for slot in &mut idx {
                match p.peek().cloned() {
                    Some(Tok::Num(k)) => {
                        p.bump();
                        *slot = k as usize;
                    }
                    _ => return Err(shift(p.error("an index"), offset).into()),
                }
            }
            PermProg::swap(n, idx[0], idx[1])?
        }
        Some(Tok::LParen) => {
            p.bump();
            let inner = perm_expr(p, n, offset)?;
            p.expect(&Tok::RParen).map_err(|e| shift(e, offset))?;
            inner
        }
        _ => return Err(shift(p.error("`id`, `swap` or `(`"), offset).into()),
    };
    if p.eat(&Tok::Semi) {
        PermProg::seq(left, perm_expr(p, n, offset)?)
    } else {
        Ok(left)
    }
}

/// Applies `p` to `k`; sequences run left first.
pub fn papply(p: &PermProg, k: usize) -> Result<usize, PermError> {
    let n = p.arity();
    if k >= n {
        return Err(PermError::IndexOutOfRange { index: k, arity: n });
    }
    fn go(p: &PermProg, k: usize) -> usize {
        match p {
            PermProg::Id(_) => k,
            PermProg::Swap(_, i, j) if k == *i => *j,
            PermProg::Swap(_, i, j) if k == *j => *i,
            PermProg::Swap(..) => k,
            PermProg::Seq(a, b) => go(b, go(a, k)),
        }
    }
    Ok(go(p, k))
}

/// A permutation in one-line notation: `image[k]` is where `k` goes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PermDense {
    image: Vec<usize>,
}

impl PermDense {
    pub fn identity(n: usize) -> PermDense {
        PermDense {
            image: (0..n).collect(),
        }
    }

    pub fn from_image(image: Vec<usize>) -> Result<PermDense, PermError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(PermError::NotABijection(format!("{image:?}")));
            }
        }
        Ok(PermDense { image })
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn arity(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, k: usize) -> Result<usize, PermError> {
        self.image.get(k).copied().ok_or(PermError::IndexOutOfRange {
            index: k,
            arity: self.arity(),
        })
    }

    pub fn inverse(&self) -> PermDense {
        let mut inv = vec![0; self.arity()];
        for (k, &x) in self.image.iter().enumerate() {
            inv[x] = k;
        }
        PermDense { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &x)| k == x)
    }

    /// `q ∘ self ∘ q⁻¹`, i.e. the same map with indices renamed by `q`.
    pub fn conjugate(&self, q: &PermDense) -> Result<PermDense, PermError> {
        pcompose(&pcompose(&q.inverse(), self)?, q)
    }
}

impl fmt::Display for PermDense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

pub fn to_dense(p: &PermProg) -> PermDense {
    let image = (0..p.arity())
        .map(|k| papply(p, k).expect("k is below the arity"))
        .collect();
    PermDense { image }
}

/// `p1` then `p2`.
pub fn pcompose(p1: &PermDense, p2: &PermDense) -> Result<PermDense, PermError> {
    if p1.arity() != p2.arity() {
        return Err(PermError::ArityMismatch {
            left: p1.arity(),
            right: p2.arity(),
        });
    }
    Ok(PermDense {
        image: p1.image.iter().map(|&k| p2.image[k]).collect(),
    })
}

pub fn pinvert(p: &PermProg) -> PermProg {
    match p {
        PermProg::Seq(a, b) => PermProg::Seq(Box::new(pinvert(b)), Box::new(pinvert(a))),
        other => other.clone(),
    }
}

/// `k -> (n - 1) - k`.
pub fn reversal(n: usize) -> PermDense {
    PermDense {
        image: (0..n).rev().collect(),
    }
}

fn usize_size(b: &Ty) -> usize {
    size(b) as usize
}

fn distl_map(m: usize, n: usize, p: usize) -> Vec<usize> {
    let mut image = Vec::with_capacity(m * (n + p));
    for i in 0..m {
        for j in 0..n + p {
            image.push(if j < n { i * n + j } else { m * n + i * p + (j - n) });
        }
    }
    image
}

fn prim_map(p: Prim, input: &Ty, output: &Ty) -> Vec<usize> {
    let whole = usize_size(input);
    let halves = |t: &Ty| match t {
        Ty::Sum(a, b) | Ty::Prod(a, b) => (usize_size(a), usize_size(b)),
        _ => unreachable!("annotated input has the constant's shape"),
    };
    match p {
        Prim::SwapSum => {
            let (m, n) = halves(input);
            (0..whole).map(|k| if k < m { n + k } else { k - m }).collect()
        }
        Prim::SwapProd => {
            let (m, n) = halves(input);
            (0..whole).map(|k| (k % n) * m + k / n).collect()
        }
        Prim::DistL => {
            let Ty::Prod(a, bc) = input else { unreachable!() };
            let (n, p) = halves(bc);
            distl_map(usize_size(a), n, p)
        }
        Prim::FactorL => {
            let Ty::Prod(a, bc) = output else { unreachable!() };
            let (n, p) = halves(bc);
            PermDense {
                image: distl_map(usize_size(a), n, p),
            }
            .inverse()
            .image
        }
        // Every other constant preserves ranks.
        _ => (0..whole).collect(),
    }
}

/// The permutation `k -> rank(out, eval(c, unrank(input, k)))`, built
/// compositionally from closed-form index maps.
pub fn compile(c: &Comb, input: &Ty) -> Result<PermDense, PermError> {
    compile_with_cap(c, input, DEFAULT_COMPILE_CAP)
}

pub fn compile_with_cap(c: &Comb, input: &Ty, cap: u64) -> Result<PermDense, PermError> {
    let ann = annotate(c, input)?;
    let n = size(input);
    if n > cap {
        return Err(PermError::RefusedTooLarge { size: n, cap });
    }
    fn go(c: &Comb, ann: &[(Ty, Ty)], at: &mut usize) -> Vec<usize> {
        let (input, output) = &ann[*at];
        *at += 1;
        match c {
            Comb::Prim(p) => prim_map(*p, input, output),
            Comb::Seq(a, b) => {
                let pa = go(a, ann, at);
                let pb = go(b, ann, at);
                pa.into_iter().map(|k| pb[k]).collect()
            }
            Comb::Plus(a, b) => {
                let mut pa = go(a, ann, at);
                let m = pa.len();
                let pb = go(b, ann, at);
                pa.extend(pb.into_iter().map(|k| k + m));
                pa
            }
            Comb::Times(a, b) => {
                let pa = go(a, ann, at);
                let pb = go(b, ann, at);
                let n = pb.len();
                let mut out = Vec::with_capacity(pa.len() * n);
                for &i in &pa {
                    out.extend(pb.iter().map(|&j| i * n + j));
                }
                out
            }
        }
    }
    let mut at = 0;
    Ok(PermDense {
        image: go(c, &ann, &mut at),
    })
}

/// A named entry of [`gate_library`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Perm(PermProg),
    Comb { comb: Comb, domain: Ty },
}

/// `dist ; ((id * c1) + (id * c2)) ; factor`
pub fn if_then_else(c1: Comb, c2: Comb) -> Comb {
    Comb::seq_all(vec![
        Prim::Dist.into(),
        Comb::plus(Comb::times(Comb::id(), c1), Comb::times(Comb::id(), c2)),
        Prim::Factor.into(),
    ])
}

/// One-armed conditional: `c` runs when the control is `true`.
pub fn if_then(c: Comb) -> Comb {
    if_then_else(c, Comb::id())
}

pub fn not_gate() -> Comb {
    Prim::SwapSum.into()
}

pub fn if_not() -> Comb {
    if_then(not_gate())
}

pub fn if_cnot() -> Comb {
    if_then(if_not())
}

pub fn reverse3() -> Comb {
    Comb::seq_all(vec![
        Prim::SwapProd.into(),
        Comb::times(Prim::SwapProd.into(), Comb::id()),
        Prim::AssocrProd.into(),
    ])
}

pub fn not_word3() -> Comb {
    Comb::times(not_gate(), Comb::times(not_gate(), not_gate()))
}

/// `assocl+ ; swap+ ; (id + swap+)`
pub fn swap_fl1() -> Comb {
    Comb::seq_all(vec![
        Prim::AssoclSum.into(),
        Prim::SwapSum.into(),
        Comb::plus(Comb::id(), Prim::SwapSum.into()),
    ])
}

/// `(id + swap+) ; assocl+ ; (swap+ + id) ; assocr+ ; (id + swap+)`
pub fn swap_fl2() -> Comb {
    Comb::seq_all(vec![
        Comb::plus(Comb::id(), Prim::SwapSum.into()),
        Prim::AssoclSum.into(),
        Comb::plus(Prim::SwapSum.into(), Comb::id()),
        Prim::AssocrSum.into(),
        Comb::plus(Comb::id(), Prim::SwapSum.into()),
    ])
}

/// The twelve transpositions of the full-adder circuit on four wires,
/// applied left to right.
pub const FULL_ADDER_SWAPS: [(usize, usize); 12] = [
    (12, 14),
    (13, 15),
    (8, 12),
    (9, 14),
    (10, 13),
    (11, 15),
    (6, 7),
    (14, 15),
    (4, 6),
    (5, 7),
    (12, 14),
    (13, 15),
];

pub fn fulladder() -> PermProg {
    PermProg::swaps(16, &FULL_ADDER_SWAPS).expect("indices are below 16")
}

/// Where each full-adder signal sits among four wires, wire 0 being the
/// most significant bit. Inputs are `(A, B, C_in, heap)`, outputs
/// `(A, B, S, C_out)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WireOrder {
    pub inputs: [usize; 4],
    pub outputs: [usize; 4],
}

impl WireOrder {
    /// `A, B, C_in, heap` in and `A, B, S, C_out` out, in wire order.
    pub const IDENTITY: WireOrder = WireOrder {
        inputs: [0, 1, 2, 3],
        outputs: [0, 1, 2, 3],
    };
}

/// One row of the full-adder truth table, as the permutation computed it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdderCase {
    /// `(A, B, C_in)`; the heap bit is 0.
    pub input: [bool; 3],
    pub input_index: usize,
    pub output_index: usize,
    /// `(A, B, S, C_out)` read off the output wires.
    pub got: [bool; 4],
    pub want: [bool; 4],
}

impl AdderCase {
    pub fn passes(&self) -> bool {
        self.got == self.want
    }
}

/// Runs the eight heap-0 rows of the full-adder truth table through `p`
/// (arity 16) under the given wiring.
pub fn adder_truth_table(p: &PermDense, order: &WireOrder) -> Vec<AdderCase> {
    assert_eq!(p.arity(), 16, "a full adder acts on four wires");
    let mut out = Vec::with_capacity(8);
    for row in 0..8usize {
        let (a, b, c) = (row & 4 != 0, row & 2 != 0, row & 1 != 0);
        let signals = [a, b, c, false];
        let mut x = 0;
        for (k, &bit) in signals.iter().enumerate() {
            if bit {
                x |= 1 << (3 - order.inputs[k]);
            }
        }
        let y = p.image()[x];
        let wire = |w: usize| y & (1 << (3 - w)) != 0;
        out.push(AdderCase {
            input: [a, b, c],
            input_index: x,
            output_index: y,
            got: order.outputs.map(wire),
            want: [a, b, a ^ b ^ c, (a & b) | (a & c) | (b & c)],
        });
    }
    out
}

fn orderings() -> Vec<[usize; 4]> {
    let mut all = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let Some(d) = 6usize.checked_sub(a + b + c) else {
                    continue;
                };
                let o = [a, b, c, d];
                if (0..4).all(|w| o.contains(&w)) {
                    all.push(o);
                }
            }
        }
    }
    all
}

/// Every wiring (24 input orders times 24 output orders) under which `p`
/// is a full adder, plus the wiring with the fewest failing rows. Ties go
/// to the earliest in lexicographic order, so the identity wins them.
pub fn search_adder_wiring(p: &PermDense) -> (Vec<WireOrder>, WireOrder, usize) {
    let mut valid = Vec::new();
    let mut best = (usize::MAX, WireOrder::IDENTITY);
    for inputs in orderings() {
        for outputs in orderings() {
            let order = WireOrder { inputs, outputs };
            let failing = adder_truth_table(p, &order).iter().filter(|c| !c.passes()).count();
            if failing == 0 {
                valid.push(order);
            }
            if failing < best.0 {
                best = (failing, order);
            }
        }
    }
    (valid, best.1, best.0)
}

/// Every named gate, keyed by name.
pub fn gate_library() -> BTreeMap<&'static str, Gate> {
    let perm = |n, i, j| Gate::Perm(PermProg::swap(n, i, j).expect("valid transposition"));
    let bits = |n| Ty::word(n);
    let comb = |comb, domain| Gate::Comb { comb, domain };
    BTreeMap::from([
        ("not_perm", perm(2, 0, 1)),
        ("cnot_perm", perm(4, 2, 3)),
        ("toffoli_perm", perm(8, 6, 7)),
        ("fulladder", Gate::Perm(fulladder())),
        ("not", comb(not_gate(), Ty::bool())),
        ("not_word3", comb(not_word3(), bits(3))),
        ("reverse", comb(reverse3(), bits(3))),
        ("if_not", comb(if_not(), bits(2))),
        ("if_cnot", comb(if_cnot(), bits(3))),
        (
            "swap_fl1",
            comb(swap_fl1(), Ty::sum(Ty::One, Ty::sum(Ty::One, Ty::One))),
        ),
        (
            "swap_fl2",
            comb(swap_fl2(), Ty::sum(Ty::One, Ty::sum(Ty::One, Ty::One))),
        ),
    ])
}

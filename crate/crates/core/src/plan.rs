//! Degree → recipe → certified triple.
//!
//! A recipe is a diagram expression such as `[A(1),P(1)]G(1)H8`: base
//! diagrams chained left to right by `(i)` joins, with an optional bracketed
//! list of diagrams attached to the following base. Recipes come from three
//! sources, tried in this order: the explicit rows (with their witness
//! words), the shape `n = 42r + 14s + deg(H_i)`, and the `H_i` families.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certify::{certify_with_hint, Certificate, Conclusion};
use crate::diagram::{join, Diagram, DiagramError, Handle};
use crate::obstruct::{exception_reason, ineq_alt, ExceptionReason};
use crate::registry::catalog::{self, is_hurwitz_degree, I1, I2};
use crate::registry::{embedded, Registry};
use crate::words::parse_word;

pub const SURVEY_VERSION: &str = "survey/1";
/// Above this degree the survey only checks that a shape decomposition exists.
pub const EXECUTE_LIMIT: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("no recipe for n = {0}")]
    NoRecipe(u64),
    #[error("n = {0} is not a Hurwitz degree")]
    NotHurwitz(u64),
    #[error("n = {n} is an exception ({reason})")]
    Exception { n: u64, reason: &'static str },
    #[error("expression '{expr}' at offset {offset}: {message}")]
    Parse {
        expr: String,
        offset: usize,
        message: String,
    },
    #[error("unknown base diagram '{0}'")]
    UnknownName(String),
    #[error("registry lacks {}", .0.join(", "))]
    MissingData(Vec<String>),
    #[error("node {node}: no free ({i})-handle")]
    NoHandle { node: String, i: u8 },
    #[error("node {node}: {source}")]
    Join { node: String, source: DiagramError },
    #[error("{expr}: predicted (degree {pd}, m {pm}) but built (degree {ad}, m {am})")]
    Bookkeeping {
        expr: String,
        pd: usize,
        pm: usize,
        ad: usize,
        am: usize,
    },
    #[error("{0} has m = 2 (mod 4) and no G to replace")]
    NoParityRepair(String),
    #[error("witness word: {0}")]
    Word(String),
}

/// A parsed diagram expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    /// Instance names in textual order.
    pub instances: Vec<String>,
    /// `(a, b, i)`: instance `a` joined to instance `b` along `(i)`-handles.
    pub edges: Vec<(usize, usize, u8)>,
    /// Whether each instance sits inside a bracket.
    attached: Vec<bool>,
    /// Per instance, its edges in handle-assignment order: left chain
    /// neighbour, then attachments, then right chain neighbour.
    neighbours: Vec<Vec<usize>>,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, PlanError> {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            expr: Expr {
                instances: Vec::new(),
                edges: Vec::new(),
                attached: Vec::new(),
                neighbours: Vec::new(),
            },
        }
        .run()
    }

    fn add_instance(&mut self, name: String, attached: bool) -> usize {
        self.instances.push(name);
        self.attached.push(attached);
        self.neighbours.push(Vec::new());
        self.instances.len() - 1
    }

    fn add_edge(&mut self, a: usize, b: usize, i: u8) {
        self.edges.push((a, b, i));
        let e = self.edges.len() - 1;
        self.neighbours[a].push(e);
        self.neighbours[b].push(e);
    }

    /// Renames the textually last `G` to `G'`.
    pub fn with_last_g_primed(&self) -> Option<Expr> {
        let idx = self.instances.iter().rposition(|s| s == "G")?;
        let mut out = self.clone();
        out.instances[idx] = "G'".into();
        Some(out)
    }

    /// Handles used by each instance, one per incident edge.
    fn assign_handles(&self, diagrams: &[&Diagram]) -> Result<Vec<BTreeMap<usize, Handle>>, PlanError> {
        let mut out = Vec::with_capacity(self.instances.len());
        for (u, d) in diagrams.iter().enumerate() {
            let mut taken: BTreeMap<usize, Handle> = BTreeMap::new();
            for &e in &self.neighbours[u] {
                let i = self.edges[e].2;
                let h = d
                    .handles_of_type(i)
                    .into_iter()
                    .find(|h| taken.values().all(|t| !t.overlaps(h)))
                    .ok_or_else(|| PlanError::NoHandle {
                        node: self.instances[u].clone(),
                        i,
                    })?;
                taken.insert(e, h);
            }
            out.push(taken);
        }
        Ok(out)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pending: Vec<String> = Vec::new();
        let mut first = true;
        for (u, name) in self.instances.iter().enumerate() {
            let link_to = |v: usize| {
                self.neighbours[u]
                    .iter()
                    .map(|&e| self.edges[e])
                    .find(|&(a, b, _)| (a == u && b == v) || (a == v && b == u))
                    .map(|(_, _, i)| i)
            };
            if self.attached[u] {
                let base = (u + 1..self.instances.len())
                    .find(|&v| !self.attached[v])
                    .expect("attachment precedes a base");
                pending.push(format!("{name}({})", link_to(base).unwrap_or(0)));
                continue;
            }
            if !first {
                let prev = (0..u).rev().find(|&v| !self.attached[v]).expect("chain");
                write!(f, "({})", link_to(prev).unwrap_or(0))?;
            }
            if !pending.is_empty() {
                write!(f, "[{}]", pending.join(","))?;
                pending.clear();
            }
            f.write_str(name)?;
            first = false;
        }
        Ok(())
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    expr: Expr,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> PlanError {
        PlanError::Parse {
            expr: self.text.to_string(),
            offset: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<String, PlanError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_uppercase() => self.pos += 1,
            _ => return Err(self.err("expected a diagram name")),
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.eat(b'\'');
        Ok(self.text[start..self.pos].to_string())
    }

    fn link(&mut self) -> Result<u8, PlanError> {
        if !self.eat(b'(') {
            return Err(self.err("expected '('"));
        }
        let i = match self.peek() {
            Some(c @ b'1'..=b'6') => c - b'0',
            _ => return Err(self.err("expected a handle order 1..6")),
        };
        self.pos += 1;
        if !self.eat(b')') {
            return Err(self.err("expected ')'"));
        }
        Ok(i)
    }

    fn run(mut self) -> Result<Expr, PlanError> {
        let mut prev: Option<(usize, u8)> = None;
        loop {
            let mut attachments = Vec::new();
            if self.eat(b'[') {
                loop {
                    let name = self.name()?;
                    let i = self.link()?;
                    attachments.push((self.expr.add_instance(name, true), i));
                    if self.eat(b']') {
                        break;
                    }
                    if !self.eat(b',') {
                        return Err(self.err("expected ',' or ']'"));
                    }
                }
            }
            let name = self.name()?;
            let base = self.expr.add_instance(name, false);
            if let Some((p, i)) = prev {
                self.expr.add_edge(p, base, i);
            }
            for (a, i) in attachments {
                self.expr.add_edge(a, base, i);
            }
            if self.peek().is_none() {
                break;
            }
            prev = Some((base, self.link()?));
        }
        Ok(self.expr)
    }
}

/// `(degree, m)` of a base diagram from the reference tables.
pub fn base_signature(name: &str) -> Option<(usize, usize)> {
    if let Some(meta) = catalog::lookup(name) {
        return Some((meta.degree, meta.m));
    }
    embedded(name).map(|e| (e.diagram.degree(), e.diagram.m()))
}

/// Predicted `(degree, m)`: each join adds two transpositions to `x`.
pub fn predict(expr: &Expr) -> Result<(usize, usize), PlanError> {
    let mut degree = 0;
    let mut m = 2 * expr.edges.len();
    for name in &expr.instances {
        let (d, mm) = base_signature(name).ok_or_else(|| PlanError::UnknownName(name.clone()))?;
        degree += d;
        m += mm;
    }
    Ok((degree, m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecipeSource {
    /// An explicitly listed construction with its witness word.
    Explicit,
    /// `n = 42r + 14s + deg(H_i)`.
    Shape { i: u64, r: u64, s: u64 },
    /// One of the `H_i` families; the label names the template.
    Family { template: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recipe {
    pub n: u64,
    pub source: RecipeSource,
    /// The expression before any `G → G′` substitution.
    pub expression: String,
    /// Replace the last `G` by `G′` to make `m ≡ 0 (mod 4)`.
    pub g_prime: bool,
    /// Witness word, when one is prescribed.
    pub word: Option<String>,
    /// Prime the commutator search is restricted to, when no word is given.
    pub hint: Option<usize>,
    /// Length of the expected prime cycle.
    pub expected_prime: Option<usize>,
    pub predicted_degree: usize,
    /// After substitution.
    pub predicted_m: usize,
    /// Other family templates that produce the same degree.
    pub alternatives: Vec<String>,
}

impl Recipe {
    fn new(
        n: u64,
        source: RecipeSource,
        expression: &str,
        word: Option<&str>,
        prime: Option<usize>,
    ) -> Result<Recipe, PlanError> {
        let expr = Expr::parse(expression)?;
        let (degree, m) = predict(&expr)?;
        let g_prime = m % 4 == 2;
        if g_prime && expr.with_last_g_primed().is_none() {
            return Err(PlanError::NoParityRepair(expression.to_string()));
        }
        if let Some(w) = word {
            parse_word(w).map_err(|e| PlanError::Word(e.to_string()))?;
        }
        Ok(Recipe {
            n,
            source,
            expression: expression.to_string(),
            g_prime,
            word: word.map(str::to_string),
            hint: if word.is_some() { None } else { prime },
            expected_prime: prime,
            predicted_degree: degree,
            predicted_m: if g_prime { m + 2 } else { m },
            alternatives: Vec::new(),
        })
    }

    /// The expression that is actually built.
    pub fn final_expression(&self) -> Expr {
        let expr = Expr::parse(&self.expression).expect("validated on construction");
        if self.g_prime {
            expr.with_last_g_primed().expect("validated on construction")
        } else {
            expr
        }
    }

    /// Base diagram names needed to build the recipe.
    pub fn required(&self) -> Vec<String> {
        let mut names = self.final_expression().instances;
        names.sort();
        names.dedup();
        names
    }
}

/// `(n, expression, prime, word)` rows with prescribed witness words.
pub const EXPLICIT: [(u64, &str, usize, &str); 37] = [
    (28, "O(1)Q", 13, "(xy^2xyxyxy^2)^24"),
    (35, "O(1)E", 17, "(xy^2xyxy^2xy^2xy^2xyxy)^77"),
    (42, "A(1)E", 11, "(xy^2xyxy^2xyxy^2xyxy)^60"),
    (49, "O(1)G'", 19, "(x,y)^13"),
    (51, "P(1)H8", 11, "(x,y)^100"),
    (56, "A56", 41, "(xyxyxy^2xy^2xyxy^2xyxy^2xy^2)^13"),
    (57, "P(1)G'", 23, "(xy^2xy^2xy^2xyxyxy^2xy^2xyxy)^70"),
    (63, "G(1)C", 13, "(xy^2xyxy^2xyxy^2xyxy)^210"),
    (64, "R(1)G'", 17, "(xyxy^2xyxyxy^2xyxy^2)^30"),
    (65, "B(2)S(1)A", 59, "(xyxy^2xy^2xyxyxy^2xy^2xyxy^2xy)^3"),
    (66, "T", 47, "(xy^2xyxy^2xyxy)^44"),
    (72, "D(2)S(1)A", 41, "(xyxy^2xy^2xyxy^2xy^2xyxy^2xyxy^2xyxy)^140"),
    (73, "O(1)T", 47, "(xyxy^2xy^2xy^2xy^2xyxyxy^2xyxy^2xyxy^2xy^2)^84"),
    (80, "A(1)T", 23, "(xy^2xyxyxy^2xyxy^2xyxy^2xyxy^2xy)^168"),
    (81, "P(1)T", 67, "(xyxy^2xy^2xyxy^2xyxy^2xy^2xyxyxy^2xy)^7"),
    (88, "R(1)T", 71, "(xyxy^2xy^2xyxyxy^2xyxy^2xy)^12"),
    (96, "A96", 59, "(xyxy^2xyxyxy^2xyxy^2)^420"),
    (98, "[A(1),A(1)]G(1)E", 19, "(xyxy^2xy^2xyxy^2xy^2xyxy)^660"),
    (105, "C(1)G(1)G", 19, "(xyxy^2xy^2xy^2xyxy^2xy^2xyxy)^210"),
    (113, "[A(1),P(1)]G(1)G'", 23, "(xyxy^2xy^2xy^2xyxy^2xyxy^2xyxyxy)^70"),
    (121, "O(1)J(1)G'", 17, "(x,y)^17160"),
    (123, "H1(1)T", 23, "(xyxy^2xy^2xyxy^2xy^2xy)^1872"),
    (128, "A(1)J(1)G'", 17, "(xyxy^2xy^2xyxyxy^2xyxy^2xy)^390"),
    (136, "R(1)J(1)G'", 23, "(xyxy^2xyxy^2xyxy^2xy)^11970"),
    (138, "J(1)T", 13, "(xyxy^2xy^2xy)^228"),
    (144, "[A(1),R(1)]G(1)T", 61, "(xyxy^2xyxy^2xyxy^2xy)^690"),
    (145, "O(1)J(1)T", 17, "(x,y)^8360"),
    (152, "A(1)J(1)T", 83, "(xyxy^2xy^2xyxyxy^2xy^2xyxy^2xyxy^2)^828"),
    (153, "P(1)J(1)T", 53, "(xyxy^2xy^2xyxy^2xyxy^2)^690"),
    (160, "R(1)J(1)T", 11, "(xyxy^2xy^2xyxyxy^2xyxy^2xy)^9300"),
    (163, "A(1)J(1)H7", 17, "(x,y)^3960"),
    (170, "[A(1),J(1)]G(1)G'", 23, "(xyxy^2xyxy^2xyxy)^5460"),
    (193, "[A(1),R(1)]G(1)H3", 29, "(xyxy^2xyxy^2xyxy)^2520"),
    (200, "[R(1),R(1)]G(1)J(1)G'", 47, "(xyxy^2xy^2xyxy^2xyxy^2)^6930"),
    (208, "[A(1),A(1)]G(1)J(1)T", 7, "(xyxy^2xyxy^2xyxyxy^2)^150"),
    (216, "[A(1),R(1)]G(1)J(1)T", 7, "(xyxy^2xyxy^2xyxy^2xy)^330"),
    (272, "[R(1),R(1)]G(1)J(1)J(1)G'", 17, "(xyxy^2xyxyxy^2xyxy^2xy^2xy^2xy)^155610"),
];

/// `n = 42r + 14s + d` with `d = deg(H_{n mod 14})`, `s ∈ {0,1,2}`, and
/// either `r ≥ 2` or `(r, s) = (1, 0)`.
pub fn shape_decompose(n: u64) -> Option<(u64, u64, u64)> {
    let i = n % 14;
    let d = catalog::h_meta(i).degree as u64;
    if n < d {
        return None;
    }
    // n ≡ d (mod 14) because deg(H_i) ≡ i
    let k = (n - d) / 14;
    let s = k % 3;
    let r = (k - s) / 3;
    if r >= 2 || (r == 1 && s == 0) {
        Some((i, r, s))
    } else {
        None
    }
}

fn shape_expression(i: u64, r: u64, s: u64) -> String {
    let h = catalog::h_name(i);
    let mut out = match s {
        0 => format!("{h}(1)G"),
        1 => format!("[{h}(1),A(1)]G"),
        _ => format!("[{h}(1),E(1)]G"),
    };
    for _ in 1..r {
        out.push_str("(1)G");
    }
    out
}

/// `(label, expression, degree, prime)` for every family member, in listing order.
pub fn family_members() -> Vec<(String, String, u64, usize)> {
    let mut out = Vec::new();
    let mut push = |label: &str, expr: String, h: u64, extra: u64| {
        let meta = catalog::h_meta(h);
        out.push((
            label.to_string(),
            expr,
            meta.degree as u64 + extra,
            meta.useful_prime.expect("H diagrams carry a prime"),
        ));
    };
    for i in I1 {
        push("H(1)E", format!("H{i}(1)E"), i, 28);
    }
    for i in I2 {
        push("H", format!("H{i}"), i, 0);
    }
    for i in I2 {
        push("O(1)H", format!("O(1)H{i}"), i, 7);
    }
    for i in I2 {
        push("A(1)H", format!("A(1)H{i}"), i, 14);
    }
    for i in I2 {
        push("R(1)H", format!("R(1)H{i}"), i, 22);
    }
    for i in I1 {
        push("[H(1),E(1)]G", format!("[H{i}(1),E(1)]G"), i, 70);
    }
    for i in I2 {
        push("[H(1),A(1)]G", format!("[H{i}(1),A(1)]G"), i, 56);
    }
    for i in I2 {
        push("P(1)G(1)H", format!("P(1)G(1)H{i}"), i, 57);
    }
    for i in I2 {
        push("[A(1),A(1)]G(1)H", format!("[A(1),A(1)]G(1)H{i}"), i, 70);
    }
    for (expr, h, extra) in [
        ("P(1)H3", 3, 15),
        ("P(1)H9", 9, 15),
        ("[R(1),H8(1)]G", 8, 64),
        ("[A(1),P(1)]G(1)H8", 8, 71),
        ("[A(1),R(1)]G(1)H8", 8, 78),
        ("[P(1),P(1)]G(1)H8", 8, 72),
    ] {
        push(expr, expr.to_string(), h, extra);
    }
    out
}

/// Every family member as a recipe, whether or not it is the one chosen
/// for its degree.
pub fn family_recipes() -> Vec<Recipe> {
    family_members()
        .into_iter()
        .map(|(label, expr, n, prime)| {
            Recipe::new(n, RecipeSource::Family { template: label }, &expr, None, Some(prime))
                .expect("family templates are well formed")
        })
        .collect()
}

struct FamilyEntry {
    label: String,
    expression: String,
    prime: usize,
    alternatives: Vec<String>,
}

fn family_index() -> &'static BTreeMap<u64, FamilyEntry> {
    static INDEX: OnceLock<BTreeMap<u64, FamilyEntry>> = OnceLock::new();
    INDEX.get_or_init(|| {
        let mut map: BTreeMap<u64, FamilyEntry> = BTreeMap::new();
        for (label, expression, n, prime) in family_members() {
            match map.get_mut(&n) {
                Some(first) => first.alternatives.push(expression),
                None => {
                    map.insert(
                        n,
                        FamilyEntry {
                            label,
                            expression,
                            prime,
                            alternatives: Vec::new(),
                        },
                    );
                }
            }
        }
        map
    })
}

/// The recipe for a Hurwitz degree that is not an exception.
pub fn build_recipe(n: u64) -> Result<Recipe, PlanError> {
    if !is_hurwitz_degree(n) {
        return Err(PlanError::NotHurwitz(n));
    }
    if let Some(reason) = exception_reason(n) {
        return Err(PlanError::Exception {
            n,
            reason: reason.tag(),
        });
    }
    if let Some(&(_, expr, p, word)) = EXPLICIT.iter().find(|row| row.0 == n) {
        return Recipe::new(n, RecipeSource::Explicit, expr, Some(word), Some(p));
    }
    let family = family_index().get(&n);
    if let Some((i, r, s)) = shape_decompose(n) {
        let mut recipe = Recipe::new(
            n,
            RecipeSource::Shape { i, r, s },
            &shape_expression(i, r, s),
            None,
            catalog::h_meta(i).useful_prime,
        )?;
        if let Some(f) = family {
            recipe.alternatives.push(f.expression.clone());
            recipe.alternatives.extend(f.alternatives.iter().cloned());
        }
        return Ok(recipe);
    }
    if let Some(f) = family {
        let mut recipe = Recipe::new(
            n,
            RecipeSource::Family {
                template: f.label.clone(),
            },
            &f.expression,
            None,
            Some(f.prime),
        )?;
        recipe.alternatives = f.alternatives.clone();
        return Ok(recipe);
    }
    Err(PlanError::NoRecipe(n))
}

/// Builds the diagram of an expression from registry data.
pub fn assemble(expr: &Expr, registry: &Registry) -> Result<Diagram, PlanError> {
    let missing: Vec<String> = expr
        .instances
        .iter()
        .filter(|name| !registry.contains(name))
        // G' is derived from G on load
        .map(|name| if name == "G'" { "G".to_string() } else { name.clone() })
        .collect();
    if !missing.is_empty() {
        let mut missing = missing;
        missing.sort();
        missing.dedup();
        return Err(PlanError::MissingData(missing));
    }
    let diagrams: Vec<&Diagram> = expr
        .instances
        .iter()
        .map(|name| registry.get(name).expect("checked above"))
        .collect();
    let handles = expr.assign_handles(&diagrams)?;
    let count = expr.instances.len();
    let mut offset: Vec<Option<u32>> = vec![None; count];
    let mut built = diagrams[0].clone();
    offset[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &e in &expr.neighbours[u] {
            let (a, b, _) = expr.edges[e];
            let v = if a == u { b } else { a };
            if offset[v].is_some() {
                continue;
            }
            let hu = handles[u][&e].shifted(offset[u].expect("placed"));
            let hv = handles[v][&e];
            let base = built.degree() as u32;
            built = join(&built, hu, diagrams[v], hv).map_err(|source| PlanError::Join {
                node: format!("{}({}){}", expr.instances[u], hu.i, expr.instances[v]),
                source,
            })?;
            offset[v] = Some(base);
            queue.push_back(v);
        }
    }
    if let Some(v) = offset.iter().position(Option::is_none) {
        return Err(PlanError::NoHandle {
            node: expr.instances[v].clone(),
            i: 0,
        });
    }
    Ok(built.renamed(expr.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Execution {
    pub diagram_name: String,
    pub certificate: Certificate,
    /// The witness prime differs from the expected one.
    pub prime_mismatch: Option<(usize, usize)>,
}

/// Builds and certifies a recipe, with the `G → G′` substitution applied.
pub fn execute(recipe: &Recipe, registry: &Registry) -> Result<(Diagram, Execution), PlanError> {
    run(recipe, &recipe.final_expression(), registry, recipe.word.as_deref(), recipe.hint)
}

/// Builds and certifies the expression without the parity repair. The
/// prescribed word belongs to the repaired diagram, so the witness is
/// searched for instead.
pub fn execute_unrepaired(recipe: &Recipe, registry: &Registry) -> Result<(Diagram, Execution), PlanError> {
    let expr = Expr::parse(&recipe.expression)?;
    let hint = recipe.hint.or(recipe.expected_prime);
    run(recipe, &expr, registry, None, hint)
}

fn run(
    recipe: &Recipe,
    expr: &Expr,
    registry: &Registry,
    word: Option<&str>,
    hint: Option<usize>,
) -> Result<(Diagram, Execution), PlanError> {
    let diagram = assemble(expr, registry)?;
    let (pd, pm) = predict(expr)?;
    if (pd, pm) != (diagram.degree(), diagram.m()) {
        return Err(PlanError::Bookkeeping {
            expr: expr.to_string(),
            pd,
            pm,
            ad: diagram.degree(),
            am: diagram.m(),
        });
    }
    let word = word
        .map(parse_word)
        .transpose()
        .map_err(|e| PlanError::Word(e.to_string()))?;
    let mut certificate = certify_with_hint(diagram.x(), diagram.y(), word.as_ref(), hint);
    if certificate.witness.is_none() && word.is_none() && hint.is_some() {
        // The expected prime is a guide, not a requirement.
        let open = certify_with_hint(diagram.x(), diagram.y(), None, None);
        if open.witness.is_some() {
            certificate = open;
        }
    }
    let prime_mismatch = match (&certificate.witness, recipe.expected_prime) {
        (Some(w), Some(p)) if w.p != p => Some((p, w.p)),
        _ => None,
    };
    Ok((
        diagram.clone(),
        Execution {
            diagram_name: diagram.name().to_string(),
            certificate,
            prime_mismatch,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    CoverHurwitz,
    Exception,
    NotHurwitzAlt,
    /// Above the execution limit; a shape decomposition exists.
    ShapeOk,
    DataMissing,
    Fail,
    NoRecipe,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::CoverHurwitz => "COVER_HURWITZ",
            Outcome::Exception => "EXCEPTION",
            Outcome::NotHurwitzAlt => "NOT_HURWITZ_ALT",
            Outcome::ShapeOk => "SHAPE_OK",
            Outcome::DataMissing => "DATA_MISSING",
            Outcome::Fail => "FAIL",
            Outcome::NoRecipe => "NO_RECIPE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyEntry {
    pub n: u64,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recipe: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub version: String,
    pub from: u64,
    pub to: u64,
    pub entries: Vec<SurveyEntry>,
    pub exceptions: Vec<u64>,
}

impl SurveyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.entries.iter().filter(|e| e.outcome == outcome).count()
    }

    /// No entry failed or lacked a recipe.
    pub fn ok(&self) -> bool {
        self.count(Outcome::Fail) == 0 && self.count(Outcome::NoRecipe) == 0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SurveyOptions {
    /// Build and certify above `EXECUTE_LIMIT` too.
    pub execute_all: bool,
}

/// Classifies every degree in `from..=to`; degrees are handled in parallel.
pub fn survey(from: u64, to: u64, registry: &Registry, options: SurveyOptions) -> SurveyReport {
    let entries: Vec<SurveyEntry> = (from..=to)
        .into_par_iter()
        .map(|n| classify(n, registry, options))
        .collect();
    let exceptions = entries
        .iter()
        .filter(|e| e.outcome == Outcome::Exception)
        .map(|e| e.n)
        .collect();
    SurveyReport {
        version: SURVEY_VERSION.to_string(),
        from,
        to,
        entries,
        exceptions,
    }
}

fn entry(n: u64, outcome: Outcome, reason: Option<String>) -> SurveyEntry {
    SurveyEntry {
        n,
        outcome,
        reason,
        recipe: None,
        certificate: None,
    }
}

pub fn classify(n: u64, registry: &Registry, options: SurveyOptions) -> SurveyEntry {
    if !is_hurwitz_degree(n) {
        let reason = if ineq_alt(n) {
            "not in the table of Hurwitz degrees below 168".to_string()
        } else {
            "counting inequality for Alt(n) fails".to_string()
        };
        return entry(n, Outcome::NotHurwitzAlt, Some(reason));
    }
    if let Some(reason) = exception_reason(n) {
        let text = match reason {
            ExceptionReason::Ineq3 => "INEQ3: counting inequality for the double cover fails",
            ExceptionReason::Lemma4 => "LEMMA4: fixed-space bound on the symmetric square fails",
        };
        return entry(n, Outcome::Exception, Some(text.to_string()));
    }
    if n > EXECUTE_LIMIT && !options.execute_all {
        return match (build_recipe(n), shape_decompose(n)) {
            (Ok(recipe), Some(_)) => {
                let mut e = entry(n, Outcome::ShapeOk, None);
                e.recipe = Some(recipe.final_expression().to_string());
                e
            }
            _ => entry(n, Outcome::NoRecipe, Some("no shape decomposition".into())),
        };
    }
    let recipe = match build_recipe(n) {
        Ok(r) => r,
        Err(e) => return entry(n, Outcome::NoRecipe, Some(e.to_string())),
    };
    let label = recipe.final_expression().to_string();
    let mut out = match execute(&recipe, registry) {
        Ok((_, exec)) => {
            let cert = exec.certificate;
            let (outcome, reason) = match cert.conclusion {
                Conclusion::CoverHurwitz => (
                    Outcome::CoverHurwitz,
                    exec.prime_mismatch
                        .map(|(want, got)| format!("witness prime {got}, expected {want}")),
                ),
                Conclusion::AltN => (Outcome::Fail, Some("x lifts to order 4".to_string())),
                Conclusion::Fail => (Outcome::Fail, cert.reason.clone()),
            };
            SurveyEntry {
                n,
                outcome,
                reason,
                recipe: None,
                certificate: Some(cert),
            }
        }
        Err(PlanError::MissingData(names)) => entry(
            n,
            Outcome::DataMissing,
            Some(format!("registry lacks {}", names.join(", "))),
        ),
        Err(e) => entry(n, Outcome::Fail, Some(e.to_string())),
    };
    out.recipe = Some(label);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_chains_and_attachments() {
        let e = Expr::parse("[A(1),P(1)]G(1)H8").unwrap();
        assert_eq!(e.instances, ["A", "P", "G", "H8"]);
        assert_eq!(e.edges, [(0, 2, 1), (1, 2, 1), (2, 3, 1)]);
        // G meets A, then P, then H8
        assert_eq!(e.neighbours[2], [0, 1, 2]);
        let e = Expr::parse("B(2)S(1)A").unwrap();
        assert_eq!(e.edges, [(0, 1, 2), (1, 2, 1)]);
        assert_eq!(e.neighbours[1], [0, 1]);
        let e = Expr::parse("[R(1),R(1)]G(1)J(1)J(1)G'").unwrap();
        assert_eq!(e.instances.last().unwrap(), "G'");
        assert_eq!(e.edges.len(), 5);
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "T",
            "O(1)Q",
            "B(2)S(1)A",
            "[A(1),P(1)]G(1)H8",
            "[R(1),R(1)]G(1)J(1)J(1)G'",
            "H3(1)G(1)G(1)G",
            "[H12(1),E(1)]G(1)G",
        ] {
            assert_eq!(Expr::parse(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn rejects_malformed_expressions() {
        for text in ["", "a", "O(1)", "O(7)Q", "[A(1)G", "[A,P]G", "O(1)(1)Q", "OQ"] {
            assert!(Expr::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn shape_examples() {
        assert_eq!(shape_decompose(84), Some((0, 1, 0)));
        assert_eq!(shape_decompose(300), Some((6, 2, 0)));
        assert_eq!(shape_decompose(230), None);
        assert_eq!(shape_expression(0, 1, 0), "H0(1)G");
        assert_eq!(shape_expression(6, 2, 0), "H6(1)G(1)G");
        assert_eq!(shape_expression(8, 3, 1), "[H8(1),A(1)]G(1)G(1)G");
    }

    #[test]
    fn recipe_84_uses_g_prime() {
        let r = build_recipe(84).unwrap();
        assert_eq!(r.expression, "H0(1)G");
        assert!(r.g_prime);
        assert_eq!(r.final_expression().to_string(), "H0(1)G'");
        assert_eq!((r.predicted_degree, r.predicted_m), (84, 40));
        assert_eq!(r.hint, Some(17));
    }

    #[test]
    fn explicit_rows() {
        let r = build_recipe(28).unwrap();
        assert_eq!(r.expression, "O(1)Q");
        assert_eq!(r.word.as_deref(), Some("(xy^2xyxyxy^2)^24"));
        let r = build_recipe(49).unwrap();
        assert_eq!(r.expression, "O(1)G'");
        assert_eq!(r.word.as_deref(), Some("(x,y)^13"));
        assert!(!r.g_prime);
        for (n, expr, _, _) in EXPLICIT {
            let r = build_recipe(n).unwrap();
            assert_eq!(r.predicted_degree as u64, n, "{expr}");
            assert_eq!(r.predicted_m % 4, 0, "{expr}");
        }
    }

    #[test]
    fn family_130() {
        let r = build_recipe(130).unwrap();
        assert_eq!(r.expression, "P(1)H3");
        assert_eq!(build_recipe(107).unwrap().expression, "[A(1),P(1)]G(1)H8");
    }

    #[test]
    fn refuses_non_hurwitz_and_exceptions() {
        assert_eq!(build_recipe(139), Err(PlanError::NotHurwitz(139)));
        assert!(matches!(build_recipe(21), Err(PlanError::Exception { .. })));
        assert!(matches!(build_recipe(230), Err(PlanError::Exception { .. })));
    }

    #[test]
    fn embedded_recipes_execute_without_data() {
        let reg = Registry::embedded_only();
        let (d, exec) = execute(&build_recipe(56).unwrap(), &reg).unwrap();
        assert_eq!(d.degree(), 56);
        assert_eq!(exec.certificate.conclusion, Conclusion::CoverHurwitz);
        assert_eq!(exec.certificate.witness.unwrap().p, 41);
        assert!(matches!(
            execute(&build_recipe(84).unwrap(), &reg),
            Err(PlanError::MissingData(names)) if names == ["G", "H0"]
        ));
    }
}

use std::collections::BTreeSet;

use regex::{Regex, RegexBuilder};

use super::pattern::{ArithOp, CompareOp, Expr, Pattern, Slot, TriplePattern, Variable};
use crate::rdf::{Graph, Term, TermId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("variable {var} in {context} is not bound by any enclosing triple pattern")]
    FreeVariable { var: String, context: &'static str },
    #[error("variable {0} is bound twice")]
    Rebound(String),
    #[error("invalid regex /{pattern}/: {reason}")]
    BadRegex { pattern: String, reason: String },
    #[error("grouped or counted variable {0} is not bound by the grouped pattern")]
    GroupVariable(String),
}

/// Marks an unbound slot in a solution row.
pub(crate) const UNBOUND: TermId = TermId::MAX;

#[derive(Debug, Clone, Copy)]
pub(crate) enum PSlot {
    Const(TermId),
    Var(usize),
    /// A constant that does not occur in the graph; the probe is empty.
    Absent,
}

#[derive(Debug)]
pub(crate) enum CExpr {
    Compare(CompareOp, Box<CExpr>, Box<CExpr>),
    Regex(Box<CExpr>, Regex),
    IsValidForDatatype(Box<CExpr>, Option<String>),
    LangMatches(Box<CExpr>, String),
    HasLanguage(Box<CExpr>),
    IsIri(Box<CExpr>),
    IsLiteral(Box<CExpr>),
    Const(Term),
    Var(usize),
    Arith(ArithOp, Box<CExpr>, Box<CExpr>),
    Not(Box<CExpr>),
    And(Box<CExpr>, Box<CExpr>),
    Or(Box<CExpr>, Box<CExpr>),
    Lang(Box<CExpr>),
    SameTerm(Box<CExpr>, Box<CExpr>),
    StrLen(Box<CExpr>),
}

#[derive(Debug)]
pub(crate) enum Step {
    Scan([PSlot; 3]),
    Filter(CExpr),
    NotExists(Block),
    /// Join with the rows of a grouped subquery. `key` lists the output
    /// columns already bound when the join runs.
    Join { group: usize, key: Vec<usize> },
    Bind(CExpr, usize),
}

#[derive(Debug, Default)]
pub(crate) struct Block {
    pub steps: Vec<Step>,
}

#[derive(Debug)]
pub(crate) struct GroupPlan {
    pub inner: Block,
    pub group: Vec<usize>,
    pub counted: usize,
    /// Output columns: the group slots followed by the count slot.
    pub outputs: Vec<usize>,
}

/// A compiled pattern, bound to the graph it was planned against.
#[derive(Debug)]
pub struct Plan {
    pub(crate) vars: Vec<Variable>,
    pub(crate) outputs: Vec<usize>,
    pub(crate) root: Block,
    pub(crate) groups: Vec<GroupPlan>,
    pub(crate) graph_terms: usize,
}

impl Plan {
    /// Variables a solution binds, in first-appearance order.
    pub fn output_variables(&self) -> Vec<&Variable> {
        self.outputs.iter().map(|&i| &self.vars[i]).collect()
    }

    pub fn var_index(&self, v: &Variable) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }

    /// Number of index probes in the plan, subqueries included.
    pub fn probes(&self) -> usize {
        fn count(b: &Block) -> usize {
            b.steps
                .iter()
                .map(|s| match s {
                    Step::Scan(_) => 1,
                    Step::NotExists(inner) => count(inner),
                    _ => 0,
                })
                .sum()
        }
        count(&self.root) + self.groups.iter().map(|g| count(&g.inner)).sum::<usize>()
    }

    /// Number of variable slots in a solution row.
    pub(crate) fn width(&self) -> usize {
        self.vars.len()
    }
}

/// Join ordering strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// Greedy: most bound positions first, then smallest index extent.
    Greedy,
    /// Source order; filters, negations and binds after all probes.
    Source,
}

pub fn plan(g: &Graph, p: &Pattern) -> Result<Plan, PlanError> {
    plan_with(g, p, Ordering::Greedy)
}

pub fn plan_with(g: &Graph, p: &Pattern, ordering: Ordering) -> Result<Plan, PlanError> {
    let mut planner = Planner {
        g,
        vars: Vec::new(),
        groups: Vec::new(),
        ordering,
    };
    let outputs: Vec<usize> = p.in_scope().iter().map(|v| planner.slot(v)).collect();
    let root = planner.block(p, &BTreeSet::new())?;
    Ok(Plan {
        vars: planner.vars,
        outputs,
        root,
        groups: planner.groups,
        graph_terms: g.term_count(),
    })
}

struct Planner<'g> {
    g: &'g Graph,
    vars: Vec<Variable>,
    groups: Vec<GroupPlan>,
    ordering: Ordering,
}

/// A conjunct waiting to be placed.
enum Item<'p> {
    Triple(&'p TriplePattern),
    Group(&'p Pattern),
    Filter(&'p Expr),
    NotExists(&'p Pattern),
    Bind(&'p Expr, &'p Variable),
}

fn flatten<'p>(p: &'p Pattern, out: &mut Vec<&'p Pattern>) {
    match p {
        Pattern::And(ps) => ps.iter().for_each(|q| flatten(q, out)),
        other => out.push(other),
    }
}

/// Every variable mentioned anywhere inside a pattern.
fn mentioned(p: &Pattern, out: &mut Vec<Variable>) {
    let mut push = |v: &Variable| {
        if !out.contains(v) {
            out.push(v.clone());
        }
    };
    match p {
        Pattern::Triple(t) => t.slots().into_iter().filter_map(Slot::var).for_each(&mut push),
        Pattern::And(ps) => ps.iter().for_each(|q| mentioned(q, out)),
        Pattern::NotExists(q) => mentioned(q, out),
        Pattern::Filter(e) => e.variables(out),
        Pattern::GroupCount { group, into, .. } => {
            group.iter().for_each(&mut push);
            push(into);
        }
        Pattern::Bind { expr, var } => {
            push(var);
            expr.variables(out);
        }
    }
}

impl Planner<'_> {
    fn slot(&mut self, v: &Variable) -> usize {
        match self.vars.iter().position(|x| x == v) {
            Some(i) => i,
            None => {
                self.vars.push(v.clone());
                self.vars.len() - 1
            }
        }
    }

    fn pslot(&mut self, s: &Slot) -> PSlot {
        match s {
            Slot::Var(v) => PSlot::Var(self.slot(v)),
            Slot::Term(t) => match self.g.id_of(t) {
                Some(id) => PSlot::Const(id),
                None => PSlot::Absent,
            },
        }
    }

    /// Plans one conjunction. `outer` holds the slots bound on entry.
    fn block(&mut self, p: &Pattern, outer: &BTreeSet<usize>) -> Result<Block, PlanError> {
        let mut parts = Vec::new();
        flatten(p, &mut parts);

        let mut items = Vec::new();
        let mut scope: BTreeSet<usize> = outer.clone();
        for part in &parts {
            match part {
                Pattern::Triple(t) => {
                    for v in t.slots().into_iter().filter_map(Slot::var) {
                        let i = self.slot(v);
                        scope.insert(i);
                    }
                    items.push(Item::Triple(t));
                }
                Pattern::GroupCount { group, into, .. } => {
                    for v in group.iter().chain(std::iter::once(into)) {
                        let i = self.slot(v);
                        scope.insert(i);
                    }
                    items.push(Item::Group(part));
                }
                Pattern::Filter(e) => items.push(Item::Filter(e)),
                Pattern::NotExists(q) => items.push(Item::NotExists(q)),
                Pattern::Bind { expr, var } => items.push(Item::Bind(expr, var)),
                Pattern::And(_) => unreachable!("flattened"),
            }
        }
        // Binds introduce fresh variables visible to the rest of the block.
        for item in &items {
            if let Item::Bind(_, var) = item {
                let i = self.slot(var);
                if !scope.insert(i) {
                    return Err(PlanError::Rebound(var.to_string()));
                }
            }
        }
        for item in &items {
            let (vars, context) = match item {
                Item::Filter(e) => {
                    let mut vs = Vec::new();
                    e.variables(&mut vs);
                    (vs, "a filter")
                }
                Item::Bind(e, var) => {
                    let mut vs = Vec::new();
                    e.variables(&mut vs);
                    if vs.contains(var) {
                        return Err(PlanError::FreeVariable {
                            var: var.to_string(),
                            context: "its own bind expression",
                        });
                    }
                    (vs, "a bind expression")
                }
                _ => continue,
            };
            for v in vars {
                if !scope.contains(&self.slot(&v)) {
                    return Err(PlanError::FreeVariable {
                        var: v.to_string(),
                        context,
                    });
                }
            }
        }

        // Requirements of deferred items, as slot sets.
        let mut pending: Vec<(usize, BTreeSet<usize>)> = Vec::new();
        let mut scans: Vec<usize> = Vec::new();
        for (idx, item) in items.iter().enumerate() {
            let needs: Vec<Variable> = match item {
                Item::Triple(_) | Item::Group(_) => {
                    scans.push(idx);
                    continue;
                }
                Item::Filter(e) | Item::Bind(e, _) => {
                    let mut vs = Vec::new();
                    e.variables(&mut vs);
                    vs
                }
                Item::NotExists(q) => {
                    let mut vs = Vec::new();
                    mentioned(q, &mut vs);
                    vs
                }
            };
            let set = needs
                .iter()
                .map(|v| self.slot(v))
                .filter(|i| scope.contains(i))
                .collect();
            pending.push((idx, set));
        }

        let mut bound = outer.clone();
        let mut steps = Vec::new();
        loop {
            if self.ordering == Ordering::Greedy || scans.is_empty() {
                self.place_ready(&items, &mut pending, &mut bound, &mut steps)?;
            }
            if scans.is_empty() {
                break;
            }
            let pick = match self.ordering {
                Ordering::Source => 0,
                Ordering::Greedy => self.best_scan(&items, &scans, &bound),
            };
            let idx = scans.remove(pick);
            match &items[idx] {
                Item::Triple(t) => {
                    let slots = [self.pslot(&t.s), self.pslot(&t.p), self.pslot(&t.o)];
                    for s in slots {
                        if let PSlot::Var(i) = s {
                            bound.insert(i);
                        }
                    }
                    steps.push(Step::Scan(slots));
                }
                Item::Group(Pattern::GroupCount {
                    inner,
                    group,
                    counted,
                    into,
                }) => {
                    let gi = self.group(inner, group, counted, into)?;
                    let outputs = self.groups[gi].outputs.clone();
                    let key = (0..outputs.len()).filter(|&c| bound.contains(&outputs[c])).collect();
                    bound.extend(outputs);
                    steps.push(Step::Join { group: gi, key });
                }
                _ => unreachable!("only probes are scheduled here"),
            }
        }
        if let Some((idx, _)) = pending.first() {
            // Only reachable through binds that depend on each other.
            let var = match &items[*idx] {
                Item::Bind(_, v) => v.to_string(),
                _ => "?".to_string(),
            };
            return Err(PlanError::FreeVariable {
                var,
                context: "a bind expression",
            });
        }
        Ok(Block { steps })
    }

    /// Emits every deferred item whose variables are bound, until no more apply.
    fn place_ready(
        &mut self,
        items: &[Item<'_>],
        pending: &mut Vec<(usize, BTreeSet<usize>)>,
        bound: &mut BTreeSet<usize>,
        steps: &mut Vec<Step>,
    ) -> Result<(), PlanError> {
        loop {
            let mut progressed = false;
            // Filters first, then binds, then negations, each in source order.
            for rank in 0..3 {
                let mut i = 0;
                while i < pending.len() {
                    let (idx, needs) = &pending[i];
                    let item_rank = match items[*idx] {
                        Item::Filter(_) => 0,
                        Item::Bind(..) => 1,
                        _ => 2,
                    };
                    if item_rank != rank || !needs.is_subset(bound) {
                        i += 1;
                        continue;
                    }
                    let idx = *idx;
                    pending.remove(i);
                    progressed = true;
                    match &items[idx] {
                        Item::Filter(e) => steps.push(Step::Filter(self.expr(e)?)),
                        Item::Bind(e, v) => {
                            let slot = self.slot(v);
                            steps.push(Step::Bind(self.expr(e)?, slot));
                            bound.insert(slot);
                        }
                        Item::NotExists(q) => {
                            let inner = self.block(q, bound)?;
                            steps.push(Step::NotExists(inner));
                        }
                        _ => unreachable!(),
                    }
                }
            }
            if !progressed {
                return Ok(());
            }
        }
    }

    fn best_scan(&mut self, items: &[Item<'_>], scans: &[usize], bound: &BTreeSet<usize>) -> usize {
        let mut best = 0;
        let mut best_key = (0usize, usize::MAX);
        for (pos, &idx) in scans.iter().enumerate() {
            let key = match &items[idx] {
                Item::Triple(t) => {
                    let mut n_bound = 0;
                    let mut ids = [None; 3];
                    let mut absent = false;
                    for (k, s) in t.slots().into_iter().enumerate() {
                        match s {
                            Slot::Term(term) => {
                                n_bound += 1;
                                match self.g.id_of(term) {
                                    Some(id) => ids[k] = Some(id),
                                    None => absent = true,
                                }
                            }
                            Slot::Var(v) => {
                                if self.vars.iter().position(|x| x == v).is_some_and(|i| bound.contains(&i)) {
                                    n_bound += 1;
                                }
                            }
                        }
                    }
                    let extent = if absent { 0 } else { self.g.extent(ids[0], ids[1], ids[2]) };
                    (n_bound, extent)
                }
                Item::Group(Pattern::GroupCount { group, into, .. }) => {
                    let n_bound = group
                        .iter()
                        .chain(std::iter::once(into))
                        .filter(|v| self.vars.iter().position(|x| x == *v).is_some_and(|i| bound.contains(&i)))
                        .count();
                    (n_bound, usize::MAX / 2)
                }
                _ => unreachable!(),
            };
            if pos == 0 || key.0 > best_key.0 || (key.0 == best_key.0 && key.1 < best_key.1) {
                best = pos;
                best_key = key;
            }
        }
        best
    }

    fn group(
        &mut self,
        inner: &Pattern,
        group: &[Variable],
        counted: &Variable,
        into: &Variable,
    ) -> Result<usize, PlanError> {
        let inner_scope = inner.in_scope();
        for v in group.iter().chain(std::iter::once(counted)) {
            if !inner_scope.contains(v) {
                return Err(PlanError::GroupVariable(v.to_string()));
            }
        }
        if group.contains(into) || inner_scope.contains(into) {
            return Err(PlanError::Rebound(into.to_string()));
        }
        let inner = self.block(inner, &BTreeSet::new())?;
        let group_slots: Vec<usize> = group.iter().map(|v| self.slot(v)).collect();
        let counted = self.slot(counted);
        let mut outputs = group_slots.clone();
        outputs.push(self.slot(into));
        self.groups.push(GroupPlan {
            inner,
            group: group_slots,
            counted,
            outputs,
        });
        Ok(self.groups.len() - 1)
    }

    fn expr(&mut self, e: &Expr) -> Result<CExpr, PlanError> {
        let b = |p: &mut Self, x: &Expr| p.expr(x).map(Box::new);
        Ok(match e {
            Expr::Compare(op, l, r) => CExpr::Compare(*op, b(self, l)?, b(self, r)?),
            Expr::Regex { arg, pattern, flags } => CExpr::Regex(b(self, arg)?, compile_regex(pattern, flags)?),
            Expr::IsValidForDatatype(a, dt) => {
                CExpr::IsValidForDatatype(b(self, a)?, dt.as_ref().map(|d| d.as_str().to_string()))
            }
            Expr::LangMatches(a, range) => CExpr::LangMatches(b(self, a)?, range.to_ascii_lowercase()),
            Expr::HasLanguage(a) => CExpr::HasLanguage(b(self, a)?),
            Expr::IsIri(a) => CExpr::IsIri(b(self, a)?),
            Expr::IsLiteral(a) => CExpr::IsLiteral(b(self, a)?),
            Expr::Constant(t) => CExpr::Const(t.clone()),
            Expr::Var(v) => CExpr::Var(self.slot(v)),
            Expr::Arith(op, l, r) => CExpr::Arith(*op, b(self, l)?, b(self, r)?),
            Expr::Not(a) => CExpr::Not(b(self, a)?),
            Expr::And(l, r) => CExpr::And(b(self, l)?, b(self, r)?),
            Expr::Or(l, r) => CExpr::Or(b(self, l)?, b(self, r)?),
            Expr::Lang(a) => CExpr::Lang(b(self, a)?),
            Expr::SameTerm(l, r) => CExpr::SameTerm(b(self, l)?, b(self, r)?),
            Expr::StrLen(a) => CExpr::StrLen(b(self, a)?),
        })
    }
}

/// Compiles a pattern in the supported dialect. Flags: `i` (case
/// insensitive), `s` (dot matches newline), `m` (multi-line), `x` (verbose).
pub fn compile_regex(pattern: &str, flags: &str) -> Result<Regex, PlanError> {
    let mut builder = RegexBuilder::new(pattern);
    for f in flags.chars() {
        match f {
            'i' => builder.case_insensitive(true),
            's' => builder.dot_matches_new_line(true),
            'm' => builder.multi_line(true),
            'x' => builder.ignore_whitespace(true),
            other => {
                return Err(PlanError::BadRegex {
                    pattern: pattern.to_string(),
                    reason: format!("unknown flag '{other}'"),
                })
            }
        };
    }
    builder.build().map_err(|e| PlanError::BadRegex {
        pattern: pattern.to_string(),
        reason: e.to_string(),
    })
}

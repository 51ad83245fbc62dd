use std::collections::HashMap;
use std::ops::ControlFlow;
use std::time::Instant;

use super::datatype::is_valid_for_datatype;
use super::pattern::{Binding, Pattern, Variable};
use super::plan::{plan, CExpr, Plan, PlanError, PSlot, Step, UNBOUND};
use super::value::{Numeric, TypeError, Val};
use crate::rdf::{Graph, Term, TermId};

/// Why a run stopped before exhausting its solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum Interrupted {
    #[error("evaluation budget exhausted")]
    Budget,
}

/// Terms created during evaluation (counts, bound expressions). Ids
/// continue after the graph's own term ids.
#[derive(Debug, Default)]
struct Overlay {
    base: usize,
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
}

impl Overlay {
    fn intern(&mut self, g: &Graph, t: Term) -> TermId {
        if let Some(id) = g.id_of(&t) {
            return id;
        }
        if let Some(&id) = self.ids.get(&t) {
            return id;
        }
        let id = (self.base + self.terms.len()) as TermId;
        self.ids.insert(t.clone(), id);
        self.terms.push(t);
        id
    }
}

fn lookup<'a>(g: &'a Graph, ov: &'a Overlay, id: TermId) -> &'a Term {
    let i = id as usize;
    if i < ov.base {
        g.term(id)
    } else {
        &ov.terms[i - ov.base]
    }
}

/// One solution row handed to the consumer of a run.
pub struct Solution<'a> {
    row: &'a [TermId],
    graph: &'a Graph,
    overlay: &'a Overlay,
    plan: &'a Plan,
}

impl<'a> Solution<'a> {
    /// The term bound to slot `index` (see [`Plan::var_index`]).
    pub fn term_at(&self, index: usize) -> Option<&'a Term> {
        let id = *self.row.get(index)?;
        (id != UNBOUND).then(|| lookup(self.graph, self.overlay, id))
    }

    pub fn get(&self, v: &Variable) -> Option<&'a Term> {
        self.term_at(self.plan.var_index(v)?)
    }

    /// Raw id of a slot; ids at or above the graph's term count denote
    /// computed terms.
    pub fn id_at(&self, index: usize) -> Option<TermId> {
        self.row.get(index).copied().filter(|&id| id != UNBOUND)
    }

    pub fn to_binding(&self) -> Binding {
        self.plan
            .outputs
            .iter()
            .filter_map(|&i| Some((self.plan.vars[i].clone(), self.term_at(i)?.clone())))
            .collect()
    }
}

enum Stop {
    Found,
    Budget,
    Halt,
}

struct GroupRows {
    rows: Vec<Vec<TermId>>,
}

struct Exec<'a> {
    plan: &'a Plan,
    g: &'a Graph,
    ov: Overlay,
    deadline: Option<Instant>,
    ticks: u32,
    groups: Vec<GroupRows>,
    /// Per join step, rows indexed by the bound key columns.
    join_index: HashMap<(usize, Vec<usize>), HashMap<Vec<TermId>, Vec<usize>>>,
}

impl Plan {
    /// Streams solutions to `emit` until exhausted, the consumer breaks, or
    /// the deadline passes.
    pub fn run<F>(&self, g: &Graph, deadline: Option<Instant>, mut emit: F) -> Result<(), Interrupted>
    where
        F: FnMut(&Solution<'_>) -> ControlFlow<()>,
    {
        assert_eq!(g.term_count(), self.graph_terms, "plan used with a different graph");
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Interrupted::Budget);
        }
        let mut ex = Exec {
            plan: self,
            g,
            ov: Overlay {
                base: g.term_count(),
                ..Default::default()
            },
            deadline,
            ticks: 0,
            groups: Vec::new(),
            join_index: HashMap::new(),
        };
        for gi in 0..self.groups.len() {
            match ex.group_rows(gi) {
                Ok(rows) => ex.groups.push(rows),
                Err(()) => return Err(Interrupted::Budget),
            }
        }
        let mut row = vec![UNBOUND; self.width()];
        let flow = ex.block(&self.root.steps, &mut row, &mut |ex: &mut Exec<'_>, row: &[TermId]| {
            let sol = Solution {
                row,
                graph: ex.g,
                overlay: &ex.ov,
                plan: ex.plan,
            };
            match emit(&sol) {
                ControlFlow::Continue(()) => ControlFlow::Continue(()),
                ControlFlow::Break(()) => ControlFlow::Break(Stop::Halt),
            }
        });
        match flow {
            ControlFlow::Break(Stop::Budget) => Err(Interrupted::Budget),
            _ => Ok(()),
        }
    }

    /// All solutions as bindings.
    pub fn solutions(&self, g: &Graph) -> Vec<Binding> {
        let mut out = Vec::new();
        self.run(g, None, |s| {
            out.push(s.to_binding());
            ControlFlow::Continue(())
        })
        .expect("no deadline");
        out
    }
}

/// Plans and evaluates `p`, returning every solution in plan order.
pub fn evaluate(g: &Graph, p: &Pattern) -> Result<Vec<Binding>, PlanError> {
    Ok(plan(g, p)?.solutions(g))
}

type Sink<'s> = dyn FnMut(&mut Exec<'_>, &[TermId]) -> ControlFlow<Stop> + 's;

impl<'a> Exec<'a> {
    fn tick(&mut self) -> ControlFlow<Stop> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks % 1024 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return ControlFlow::Break(Stop::Budget);
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn group_rows(&mut self, gi: usize) -> Result<GroupRows, ()> {
        let plan = self.plan;
        let gp = &plan.groups[gi];
        let mut order: Vec<Vec<TermId>> = Vec::new();
        let mut counts: HashMap<Vec<TermId>, u64> = HashMap::new();
        let mut row = vec![UNBOUND; plan.width()];
        let flow = self.block(&gp.inner.steps, &mut row, &mut |_, row: &[TermId]| {
            if row[gp.counted] != UNBOUND {
                let key: Vec<TermId> = gp.group.iter().map(|&i| row[i]).collect();
                let c = counts.entry(key).or_insert_with_key(|k| {
                    order.push(k.clone());
                    0
                });
                *c += 1;
            }
            ControlFlow::Continue(())
        });
        if let ControlFlow::Break(Stop::Budget) = flow {
            return Err(());
        }
        if gp.group.is_empty() && order.is_empty() {
            order.push(Vec::new());
            counts.insert(Vec::new(), 0);
        }
        let rows = order
            .into_iter()
            .map(|key| {
                let n = counts[&key];
                let id = self.ov.intern(self.g, crate::rdf::Literal::integer(n as i64).into());
                let mut r = key;
                r.push(id);
                r
            })
            .collect();
        Ok(GroupRows { rows })
    }

    fn block(&mut self, steps: &[Step], row: &mut Vec<TermId>, sink: &mut Sink<'_>) -> ControlFlow<Stop> {
        let Some((step, rest)) = steps.split_first() else {
            return sink(self, row);
        };
        match step {
            Step::Scan(slots) => self.scan(slots, rest, row, sink),
            Step::Filter(e) => {
                if matches!(self.eval(e, row).and_then(|v| v.truth()), Ok(true)) {
                    self.block(rest, row, sink)
                } else {
                    ControlFlow::Continue(())
                }
            }
            Step::Bind(e, slot) => {
                let Ok(val) = self.eval(e, row).map(Val::into_term) else {
                    return ControlFlow::Continue(());
                };
                let id = self.ov.intern(self.g, val);
                row[*slot] = id;
                let flow = self.block(rest, row, sink);
                row[*slot] = UNBOUND;
                flow
            }
            Step::NotExists(inner) => {
                match self.block(&inner.steps, row, &mut |_, _| ControlFlow::Break(Stop::Found)) {
                    ControlFlow::Break(Stop::Found) => ControlFlow::Continue(()),
                    ControlFlow::Break(other) => ControlFlow::Break(other),
                    ControlFlow::Continue(()) => self.block(rest, row, sink),
                }
            }
            Step::Join { group, key } => self.join(*group, key, rest, row, sink),
        }
    }

    fn scan(&mut self, slots: &[PSlot; 3], rest: &[Step], row: &mut Vec<TermId>, sink: &mut Sink<'_>) -> ControlFlow<Stop> {
        let mut probe = [None; 3];
        for (k, s) in slots.iter().enumerate() {
            probe[k] = match *s {
                PSlot::Absent => return ControlFlow::Continue(()),
                PSlot::Const(id) => Some(id),
                PSlot::Var(i) if row[i] != UNBOUND => Some(row[i]),
                PSlot::Var(_) => None,
            };
        }
        let g = self.g;
        for t in g.match_ids(probe[0], probe[1], probe[2]) {
            self.tick()?;
            let mut assigned = [usize::MAX; 3];
            let mut ok = true;
            for k in 0..3 {
                if let PSlot::Var(i) = slots[k] {
                    if row[i] == UNBOUND {
                        row[i] = t[k];
                        assigned[k] = i;
                    } else if row[i] != t[k] {
                        ok = false;
                        break;
                    }
                }
            }
            let flow = if ok { self.block(rest, row, sink) } else { ControlFlow::Continue(()) };
            for i in assigned {
                if i != usize::MAX {
                    row[i] = UNBOUND;
                }
            }
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn join(&mut self, gi: usize, key: &[usize], rest: &[Step], row: &mut Vec<TermId>, sink: &mut Sink<'_>) -> ControlFlow<Stop> {
        let plan = self.plan;
        let outputs = &plan.groups[gi].outputs;
        let candidates: Vec<usize> = if key.is_empty() {
            (0..self.groups[gi].rows.len()).collect()
        } else {
            let index = self.join_index.entry((gi, key.to_vec())).or_insert_with(|| {
                let mut m: HashMap<Vec<TermId>, Vec<usize>> = HashMap::new();
                for (r, vals) in self.groups[gi].rows.iter().enumerate() {
                    m.entry(key.iter().map(|&c| vals[c]).collect()).or_default().push(r);
                }
                m
            });
            let probe: Vec<TermId> = key.iter().map(|&c| row[outputs[c]]).collect();
            index.get(&probe).cloned().unwrap_or_default()
        };
        for r in candidates {
            self.tick()?;
            let mut assigned = Vec::new();
            let mut ok = true;
            for (c, &slot) in outputs.iter().enumerate() {
                let v = self.groups[gi].rows[r][c];
                if row[slot] == UNBOUND {
                    row[slot] = v;
                    assigned.push(slot);
                } else if row[slot] != v {
                    ok = false;
                    break;
                }
            }
            let flow = if ok { self.block(rest, row, sink) } else { ControlFlow::Continue(()) };
            for slot in assigned {
                row[slot] = UNBOUND;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn eval<'e>(&'e self, e: &'e CExpr, row: &[TermId]) -> Result<Val<'e>, TypeError> {
        Ok(match e {
            CExpr::Const(t) => Val::Term(t),
            CExpr::Var(i) => {
                let id = row[*i];
                if id == UNBOUND {
                    return Err(TypeError);
                }
                Val::Term(lookup(self.g, &self.ov, id))
            }
            CExpr::Compare(op, l, r) => {
                let (l, r) = (self.eval(l, row)?, self.eval(r, row)?);
                Val::Bool(l.compare(*op, &r)?)
            }
            CExpr::Regex(arg, re) => Val::Bool(re.is_match(&self.eval(arg, row)?.text()?)),
            CExpr::IsValidForDatatype(arg, dt) => {
                let v = self.eval(arg, row)?;
                let lit = v.literal()?;
                let dt = dt.as_deref().unwrap_or(lit.datatype().as_str());
                Val::Bool(is_valid_for_datatype(lit.lexical(), dt))
            }
            CExpr::LangMatches(arg, range) => {
                let v = self.eval(arg, row)?;
                let tag = v.literal()?.language().unwrap_or_default();
                Val::Bool(lang_matches(tag, range))
            }
            CExpr::HasLanguage(arg) => Val::Bool(matches!(
                self.eval(arg, row)?,
                Val::Term(Term::Literal(l)) if l.language().is_some()
            )),
            CExpr::IsIri(arg) => Val::Bool(matches!(self.eval(arg, row)?, Val::Term(Term::Iri(_)))),
            CExpr::IsLiteral(arg) => Val::Bool(match self.eval(arg, row)? {
                Val::Term(t) => t.is_literal(),
                _ => true,
            }),
            CExpr::Arith(op, l, r) => {
                let (l, r) = (self.eval(l, row)?.numeric()?, self.eval(r, row)?.numeric()?);
                Val::Num(l.arith(*op, r)?)
            }
            CExpr::Not(a) => Val::Bool(!self.eval(a, row)?.truth()?),
            // Three-valued logic: an error on one side is masked by a
            // decisive value on the other.
            CExpr::And(l, r) => {
                let l = self.eval(l, row).and_then(|v| v.truth());
                let r = self.eval(r, row).and_then(|v| v.truth());
                match (l, r) {
                    (Ok(false), _) | (_, Ok(false)) => Val::Bool(false),
                    (Ok(true), Ok(true)) => Val::Bool(true),
                    _ => return Err(TypeError),
                }
            }
            CExpr::Or(l, r) => {
                let l = self.eval(l, row).and_then(|v| v.truth());
                let r = self.eval(r, row).and_then(|v| v.truth());
                match (l, r) {
                    (Ok(true), _) | (_, Ok(true)) => Val::Bool(true),
                    (Ok(false), Ok(false)) => Val::Bool(false),
                    _ => return Err(TypeError),
                }
            }
            CExpr::Lang(a) => {
                let v = self.eval(a, row)?;
                Val::Str(v.literal()?.language().unwrap_or_default().to_string())
            }
            CExpr::SameTerm(l, r) => match (&**l, &**r) {
                (CExpr::Var(a), CExpr::Var(b)) if row[*a] != UNBOUND && row[*b] != UNBOUND => {
                    Val::Bool(row[*a] == row[*b])
                }
                _ => {
                    let (l, r) = (self.eval(l, row)?, self.eval(r, row)?);
                    Val::Bool(l.into_term() == r.into_term())
                }
            },
            CExpr::StrLen(a) => {
                let v = self.eval(a, row)?;
                let n = match &v {
                    Val::Str(s) => s.chars().count(),
                    other => other.literal()?.lexical().chars().count(),
                };
                Val::Num(Numeric::Integer(n as i128))
            }
        })
    }
}

/// Basic filtering of RFC 4647: `*` matches any non-empty tag; otherwise
/// the tag equals the range or extends it with a `-` subtag.
pub fn lang_matches(tag: &str, range: &str) -> bool {
    if range == "*" {
        return !tag.is_empty();
    }
    let tag = tag.to_ascii_lowercase();
    let range = range.to_ascii_lowercase();
    tag == range || (tag.starts_with(&range) && tag.as_bytes().get(range.len()) == Some(&b'-'))
}

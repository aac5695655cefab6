use std::collections::{BTreeMap, BTreeSet};

use nalgebra::Vector3;

use super::{
    Diagnostic, DomainFile, LiteralExpr, NamedGoal, NamedPlan, ObjectDecl, OperatorSchema, Param,
    PlanStep, PredicateDecl, Severity, Span, Term, HEADER, VERSION,
};
use crate::logic::{type_accepts, ANY_TYPE};
use crate::operators::OperatorRole;
use crate::worlds::kitchen::{
    AdversaryEvent, Amount, DrawerGeometry, ItemGeometry, KitchenConfig, ScheduledEvent, Trigger,
};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    Var(String),
    Star,
    Dash,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '+')
}

struct Diags<'a> {
    lines: Vec<&'a str>,
    out: Vec<Diagnostic>,
}

impl<'a> Diags<'a> {
    fn error(&mut self, span: Span, message: impl Into<String>) {
        let excerpt = self
            .lines
            .get(span.line.wrapping_sub(1))
            .map(|l| l.trim_end().to_string())
            .unwrap_or_default();
        self.out.push(Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            line: span.line,
            column: span.column,
            excerpt,
        });
    }
}

fn lex_line(line_no: usize, text: &str, diags: &mut Diags) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line_no, i + 1);
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '(' => {
                toks.push(Token {
                    tok: Tok::Open,
                    span,
                });
                i += 1;
            }
            ')' => {
                toks.push(Token {
                    tok: Tok::Close,
                    span,
                });
                i += 1;
            }
            '*' => {
                toks.push(Token {
                    tok: Tok::Star,
                    span,
                });
                i += 1;
            }
            '?' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && is_word_char(chars[j]) {
                    j += 1;
                }
                if j == start {
                    diags.error(span, "expected a variable name after `?`");
                } else {
                    toks.push(Token {
                        tok: Tok::Var(chars[start..j].iter().collect()),
                        span,
                    });
                }
                i = j.max(i + 1);
            }
            '-' if chars
                .get(i + 1)
                .is_none_or(|n| n.is_whitespace() || *n == '#') =>
            {
                toks.push(Token {
                    tok: Tok::Dash,
                    span,
                });
                i += 1;
            }
            c if is_word_char(c) => {
                let mut j = i;
                while j < chars.len() && is_word_char(chars[j]) {
                    j += 1;
                }
                toks.push(Token {
                    tok: Tok::Word(chars[i..j].iter().collect()),
                    span,
                });
                i = j;
            }
            other => {
                diags.error(
                    span,
                    format!("unexpected character `{}`", other.escape_debug()),
                );
                i += 1;
            }
        }
    }
    toks
}

fn describe(t: Option<&Token>) -> String {
    match t.map(|t| &t.tok) {
        None => "end of line".into(),
        Some(Tok::Open) => "`(`".into(),
        Some(Tok::Close) => "`)`".into(),
        Some(Tok::Word(w)) => format!("`{w}`"),
        Some(Tok::Var(v)) => format!("`?{v}`"),
        Some(Tok::Star) => "`*`".into(),
        Some(Tok::Dash) => "`-`".into(),
    }
}

/// Token cursor over one line.
struct Cursor<'t> {
    toks: &'t [Token],
    pos: usize,
    /// Span just past the last token, for "unexpected end of line".
    eol: Span,
}

impl<'t> Cursor<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&'t Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn span(&self) -> Span {
        self.peek().map(|t| t.span).unwrap_or(self.eol)
    }

    fn word(&mut self, what: &str, diags: &mut Diags) -> Option<(String, Span)> {
        let span = self.span();
        match self.next() {
            Some(Token {
                tok: Tok::Word(w),
                span,
            }) => Some((w.clone(), *span)),
            t => {
                diags.error(span, format!("expected {what}, found {}", describe(t)));
                None
            }
        }
    }

    fn number(&mut self, what: &str, diags: &mut Diags) -> Option<f64> {
        let span = self.span();
        let (w, _) = self.word(what, diags)?;
        match w.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                diags.error(span, format!("expected {what}, found `{w}`"));
                None
            }
        }
    }

    fn integer(&mut self, what: &str, diags: &mut Diags) -> Option<u64> {
        let span = self.span();
        let (w, _) = self.word(what, diags)?;
        match w.parse::<u64>() {
            Ok(v) => Some(v),
            Err(_) => {
                diags.error(span, format!("expected {what}, found `{w}`"));
                None
            }
        }
    }

    fn keyword(&mut self, kw: &str, diags: &mut Diags) -> Option<()> {
        let span = self.span();
        match self.next() {
            Some(Token {
                tok: Tok::Word(w), ..
            }) if w == kw => Some(()),
            t => {
                diags.error(span, format!("expected `{kw}`, found {}", describe(t)));
                None
            }
        }
    }

    fn expect_end(&mut self, diags: &mut Diags) -> Option<()> {
        if let Some(t) = self.peek() {
            diags.error(t.span, format!("unexpected {}", describe(Some(t))));
            return None;
        }
        Some(())
    }

    fn vector(&mut self, what: &str, diags: &mut Diags) -> Option<Vector3<f64>> {
        let x = self.number(what, diags)?;
        let y = self.number(what, diags)?;
        let z = self.number(what, diags)?;
        Some(Vector3::new(x, y, z))
    }
}

/// `?a ?b - t ?c` style parameter list; untyped parameters get the universal type.
fn parse_params(c: &mut Cursor, diags: &mut Diags) -> Option<Vec<Param>> {
    let mut params = Vec::new();
    let mut pending: Vec<Param> = Vec::new();
    while let Some(t) = c.peek() {
        match &t.tok {
            Tok::Var(v) => {
                pending.push(Param {
                    name: v.clone(),
                    ty: ANY_TYPE.to_string(),
                    span: t.span,
                });
                c.next();
            }
            Tok::Dash => {
                c.next();
                if pending.is_empty() {
                    diags.error(t.span, "type annotation without parameters");
                    return None;
                }
                let (ty, _) = c.word("a type name", diags)?;
                for mut p in pending.drain(..) {
                    p.ty = ty.clone();
                    params.push(p);
                }
            }
            _ => {
                diags.error(
                    t.span,
                    format!("expected a parameter, found {}", describe(Some(t))),
                );
                return None;
            }
        }
    }
    params.extend(pending);
    Some(params)
}

fn parse_literal(c: &mut Cursor, diags: &mut Diags) -> Option<LiteralExpr> {
    let open = c.span();
    match c.next() {
        Some(Token { tok: Tok::Open, .. }) => {}
        t => {
            diags.error(open, format!("expected `(`, found {}", describe(t)));
            return None;
        }
    }
    let negated = matches!(c.peek(), Some(Token { tok: Tok::Word(w), .. }) if w == "not");
    if negated {
        c.next();
        let mut inner = parse_literal(c, diags)?;
        if !inner.positive {
            diags.error(inner.span, "double negation is not allowed");
            return None;
        }
        let close = c.span();
        match c.next() {
            Some(Token {
                tok: Tok::Close, ..
            }) => {}
            t => {
                diags.error(close, format!("expected `)`, found {}", describe(t)));
                return None;
            }
        }
        inner.positive = false;
        inner.span = open;
        return Some(inner);
    }
    let (predicate, predicate_span) = c.word("a predicate name", diags)?;
    let mut args = Vec::new();
    let mut arg_spans = Vec::new();
    loop {
        let span = c.span();
        match c.next() {
            Some(Token {
                tok: Tok::Close, ..
            }) => break,
            Some(Token {
                tok: Tok::Word(w), ..
            }) => args.push(Term::Object(w.clone())),
            Some(Token {
                tok: Tok::Var(v), ..
            }) => args.push(Term::Var(v.clone())),
            Some(Token { tok: Tok::Star, .. }) => args.push(Term::Any),
            t => {
                diags.error(
                    span,
                    format!("expected an argument or `)`, found {}", describe(t)),
                );
                return None;
            }
        }
        arg_spans.push(span);
    }
    Some(LiteralExpr {
        positive: true,
        predicate,
        args,
        span: open,
        predicate_span,
        arg_spans,
    })
}

fn parse_literals(c: &mut Cursor, diags: &mut Diags) -> Option<Vec<LiteralExpr>> {
    let mut out = Vec::new();
    while !c.at_end() {
        out.push(parse_literal(c, diags)?);
    }
    Some(out)
}

fn parse_plan_step(c: &mut Cursor, diags: &mut Diags) -> Option<PlanStep> {
    let span = c.span();
    match c.next() {
        Some(Token { tok: Tok::Open, .. }) => {}
        t => {
            diags.error(span, format!("expected `(`, found {}", describe(t)));
            return None;
        }
    }
    let (operator, _) = c.word("an operator name", diags)?;
    let mut args = Vec::new();
    loop {
        let s = c.span();
        match c.next() {
            Some(Token {
                tok: Tok::Close, ..
            }) => break,
            Some(Token {
                tok: Tok::Word(w), ..
            }) => args.push(w.clone()),
            t => {
                diags.error(
                    s,
                    format!("expected an object name or `)`, found {}", describe(t)),
                );
                return None;
            }
        }
    }
    Some(PlanStep {
        operator,
        args,
        span,
    })
}

enum Block {
    Operator(OperatorSchema),
    World { config: KitchenConfig },
    Adversary,
}

fn scalar<'a>(w: &'a mut KitchenConfig, key: &str) -> Option<&'a mut f64> {
    Some(match key {
        "max_linear" => &mut w.max_linear,
        "max_angular" => &mut w.max_angular,
        "approach_radius" => &mut w.approach_radius,
        "position_margin" => &mut w.position_margin,
        "angular_margin" => &mut w.angular_margin,
        "lambda_p" => &mut w.lambda_p,
        "lambda_r" => &mut w.lambda_r,
        "open_threshold" => &mut w.open_threshold,
        "lift_height" => &mut w.lift_height,
        "carry_height" => &mut w.carry_height,
        "drop_margin" => &mut w.drop_margin,
        "grasp_noise" => &mut w.grasp_noise,
        "min_separation" => &mut w.min_separation,
        "max_displacement" => &mut w.max_displacement,
        "max_shove" => &mut w.max_shove,
        _ => return None,
    })
}

fn parse_world_line(
    c: &mut Cursor,
    key: &str,
    key_span: Span,
    w: &mut KitchenConfig,
    diags: &mut Diags,
) -> Option<()> {
    if scalar(w, key).is_some() {
        let v = c.number("a number", diags)?;
        *scalar(w, key).expect("checked") = v;
        return c.expect_end(diags);
    }
    match key {
        "robot" => w.robot = c.word("an object name", diags)?.0,
        "home" => w.home = c.vector("a coordinate", diags)?,
        "placement_x" | "placement_y" => {
            let lo = c.number("a lower bound", diags)?;
            let hi = c.number("an upper bound", diags)?;
            if key == "placement_x" {
                w.placement_x = [lo, hi];
            } else {
                w.placement_y = [lo, hi];
            }
        }
        "drawer" => {
            let (name, _) = c.word("a drawer name", diags)?;
            c.keyword("handle", diags)?;
            let handle_closed = c.vector("a coordinate", diags)?;
            c.keyword("interior", diags)?;
            let interior_closed = c.vector("a coordinate", diags)?;
            c.keyword("pull", diags)?;
            let pull = c.vector("a direction component", diags)?;
            c.keyword("travel", diags)?;
            let travel = c.number("a travel distance", diags)?;
            c.keyword("half", diags)?;
            let hx = c.number("a half extent", diags)?;
            let hy = c.number("a half extent", diags)?;
            w.drawers.push(DrawerGeometry {
                name,
                handle_closed,
                interior_closed,
                pull,
                travel,
                half_extents: [hx, hy],
            });
        }
        "item" => {
            let (name, _) = c.word("an item name", diags)?;
            c.keyword("standoff", diags)?;
            let standoff = c.number("a standoff distance", diags)?;
            c.keyword("grasp_height", diags)?;
            let grasp_height = c.number("a grasp height", diags)?;
            w.items.push(ItemGeometry {
                name,
                standoff,
                grasp_height,
            });
        }
        _ => {
            diags.error(key_span, format!("unknown world setting `{key}`"));
            return None;
        }
    }
    c.expect_end(diags)
}

fn parse_event(c: &mut Cursor, diags: &mut Diags) -> Option<AdversaryEvent> {
    let (kind, span) = c.word("an event kind", diags)?;
    let event = match kind.as_str() {
        "close_drawer" => {
            let (drawer, _) = c.word("a drawer name", diags)?;
            let amount = if matches!(c.peek(), Some(Token { tok: Tok::Word(w), .. }) if w == "uniform")
            {
                c.next();
                let lo = c.number("a lower bound", diags)?;
                let hi = c.number("an upper bound", diags)?;
                Amount::Uniform(lo, hi)
            } else {
                Amount::Fixed(c.number("an amount", diags)?)
            };
            AdversaryEvent::CloseDrawer { drawer, amount }
        }
        "displace" => {
            let (object, _) = c.word("an object name", diags)?;
            let offset = c.vector("an offset component", diags)?;
            AdversaryEvent::DisplaceObject { object, offset }
        }
        "shove" => AdversaryEvent::ShoveGripper {
            offset: c.vector("an offset component", diags)?,
        },
        other => {
            diags.error(span, format!("unknown event `{other}`"));
            return None;
        }
    };
    c.expect_end(diags)?;
    Some(event)
}

fn parse_adversary_line(
    c: &mut Cursor,
    key: &str,
    key_span: Span,
    diags: &mut Diags,
) -> Option<ScheduledEvent> {
    let trigger = match key {
        "at" => Trigger::AtTick(c.integer("a tick", diags)?),
        "after_open" => {
            let (drawer, _) = c.word("a drawer name", diags)?;
            let delay = c.integer("a delay in ticks", diags)?;
            Trigger::AfterDrawerOpened { drawer, delay }
        }
        _ => {
            diags.error(key_span, format!("unknown trigger `{key}`"));
            return None;
        }
    };
    Some(ScheduledEvent {
        trigger,
        event: parse_event(c, diags)?,
    })
}

/// Parses and validates a domain file. On failure every diagnosable error is
/// returned, in source order.
pub fn parse_domain(text: &str) -> Result<DomainFile, Vec<Diagnostic>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut diags = Diags {
        lines: lines.clone(),
        out: Vec::new(),
    };
    let mut file = DomainFile::default();
    let mut block: Option<(Block, Span)> = None;
    let mut seen_directive = false;

    for (idx, raw) in lines.iter().enumerate() {
        let line_no = idx + 1;
        let toks = lex_line(line_no, raw, &mut diags);
        if toks.is_empty() {
            continue;
        }
        let eol = Span::new(line_no, raw.chars().count() + 1);
        let mut c = Cursor {
            toks: &toks,
            pos: 0,
            eol,
        };
        let first = &toks[0];
        let Tok::Word(kw) = &first.tok else {
            diags.error(
                first.span,
                format!("expected a directive, found {}", describe(Some(first))),
            );
            continue;
        };
        let kw = kw.clone();
        let kw_span = first.span;
        c.next();
        let is_first = !seen_directive;
        seen_directive = true;
        if is_first && kw != HEADER {
            diags.error(
                kw_span,
                format!("expected the format header `{HEADER} {VERSION}`"),
            );
        }

        if let Some((b, _)) = block.as_mut() {
            if kw == "end" {
                c.expect_end(&mut diags);
                let (b, _) = block.take().expect("inside block");
                match b {
                    Block::Operator(op) => file.operators.push(op),
                    Block::World { config } => file.world = Some(config),
                    Block::Adversary => {}
                }
                continue;
            }
            match b {
                Block::Operator(op) => match kw.as_str() {
                    "pre" => {
                        if let Some(l) = parse_literals(&mut c, &mut diags) {
                            op.pre.extend(l);
                        }
                    }
                    "run" => {
                        if let Some(l) = parse_literals(&mut c, &mut diags) {
                            op.run.get_or_insert_with(Vec::new).extend(l);
                        }
                    }
                    "eff" => {
                        if let Some(l) = parse_literals(&mut c, &mut diags) {
                            op.eff.extend(l);
                        }
                    }
                    "policy" => {
                        if let Some((p, _)) = c.word("a policy name", &mut diags) {
                            if c.expect_end(&mut diags).is_some() {
                                op.policy = Some(p);
                            }
                        }
                    }
                    "role" => {
                        let span = c.span();
                        if let Some((r, _)) = c.word("a role", &mut diags) {
                            let role = match r.as_str() {
                                "step" => Some(OperatorRole::Step),
                                "reaction" => Some(OperatorRole::Reaction),
                                "fallback" => Some(OperatorRole::Fallback),
                                _ => {
                                    diags.error(span, format!("unknown role `{r}` (expected step, reaction or fallback)"));
                                    None
                                }
                            };
                            if let Some(role) = role {
                                if c.expect_end(&mut diags).is_some() {
                                    op.role = role;
                                }
                            }
                        }
                    }
                    other => diags.error(kw_span, format!("unknown operator field `{other}`")),
                },
                Block::World { config } => {
                    parse_world_line(&mut c, &kw, kw_span, config, &mut diags);
                }
                Block::Adversary => {
                    if let Some(e) = parse_adversary_line(&mut c, &kw, kw_span, &mut diags) {
                        file.adversary.push(e);
                    }
                }
            }
            continue;
        }

        match kw.as_str() {
            HEADER => {
                if !is_first {
                    diags.error(kw_span, "the format header must come first");
                    continue;
                }
                let span = c.span();
                if let Some(v) = c.integer("a format version", &mut diags) {
                    if v != VERSION as u64 {
                        diags.error(span, format!("unsupported format version {v}"));
                    } else {
                        c.expect_end(&mut diags);
                    }
                }
            }
            "predicate" => {
                if let Some((name, _)) = c.word("a predicate name", &mut diags) {
                    if let Some(params) = parse_params(&mut c, &mut diags) {
                        file.predicates.push(PredicateDecl {
                            name,
                            params,
                            span: kw_span,
                        });
                    }
                }
            }
            "object" => {
                let mut names = Vec::new();
                let mut ok = true;
                while let Some(t) = c.peek() {
                    match &t.tok {
                        Tok::Word(w) => {
                            names.push((w.clone(), t.span));
                            c.next();
                        }
                        Tok::Dash => break,
                        _ => {
                            diags.error(
                                t.span,
                                format!("expected an object name, found {}", describe(Some(t))),
                            );
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                if names.is_empty() {
                    diags.error(c.span(), "expected at least one object name");
                    continue;
                }
                let ty = if c.at_end() {
                    ANY_TYPE.to_string()
                } else {
                    c.next();
                    match c.word("a type name", &mut diags) {
                        Some((t, _)) => t,
                        None => continue,
                    }
                };
                if c.expect_end(&mut diags).is_none() {
                    continue;
                }
                for (name, span) in names {
                    file.objects.push(ObjectDecl {
                        name,
                        ty: ty.clone(),
                        span,
                    });
                }
            }
            "operator" => {
                let Some((name, _)) = c.word("an operator name", &mut diags) else {
                    // Still open a block so its body lines are not misread.
                    block = Some((
                        Block::Operator(empty_schema(String::new(), kw_span)),
                        kw_span,
                    ));
                    continue;
                };
                let params = parse_params(&mut c, &mut diags).unwrap_or_default();
                let mut schema = empty_schema(name, kw_span);
                schema.params = params;
                block = Some((Block::Operator(schema), kw_span));
            }
            "init" => {
                if let Some(l) = parse_literals(&mut c, &mut diags) {
                    file.init.extend(l);
                }
            }
            "goal" => {
                if let Some((name, _)) = c.word("a goal name", &mut diags) {
                    if let Some(literals) = parse_literals(&mut c, &mut diags) {
                        file.goals.push(NamedGoal {
                            name,
                            literals,
                            span: kw_span,
                        });
                    }
                }
            }
            "plan" => {
                let Some((name, _)) = c.word("a plan name", &mut diags) else {
                    continue;
                };
                let mut goal = None;
                if matches!(c.peek(), Some(Token { tok: Tok::Word(w), .. }) if w == "goal") {
                    c.next();
                    match c.word("a goal name", &mut diags) {
                        Some((g, _)) => goal = Some(g),
                        None => continue,
                    }
                }
                let mut steps = Vec::new();
                let mut ok = true;
                while !c.at_end() {
                    match parse_plan_step(&mut c, &mut diags) {
                        Some(s) => steps.push(s),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    file.plans.push(NamedPlan {
                        name,
                        goal,
                        steps,
                        span: kw_span,
                    });
                }
            }
            "world" => {
                if c.expect_end(&mut diags).is_some() && file.world.is_some() {
                    diags.error(kw_span, "duplicate world section");
                }
                let config = KitchenConfig {
                    drawers: Vec::new(),
                    items: Vec::new(),
                    ..KitchenConfig::default()
                };
                block = Some((Block::World { config }, kw_span));
            }
            "adversary" => {
                c.expect_end(&mut diags);
                block = Some((Block::Adversary, kw_span));
            }
            "end" => diags.error(kw_span, "`end` outside of a block"),
            other => diags.error(kw_span, format!("unknown directive `{other}`")),
        }
    }
    if let Some((b, start)) = block {
        let what = match b {
            Block::Operator(_) => "operator",
            Block::World { .. } => "world",
            Block::Adversary => "adversary",
        };
        diags.error(start, format!("{what} block is missing `end`"));
    }
    if !seen_directive {
        diags.error(
            Span::new(lines.len() + 1, 1),
            format!("expected the format header `{HEADER} {VERSION}`"),
        );
    }

    validate(&file, &mut diags);
    let mut out = diags.out;
    if out.iter().any(|d| d.severity == Severity::Error) {
        out.sort_by_key(|d| (d.line, d.column));
        Err(out)
    } else {
        Ok(file)
    }
}

fn empty_schema(name: String, span: Span) -> OperatorSchema {
    OperatorSchema {
        name,
        params: Vec::new(),
        pre: Vec::new(),
        run: None,
        eff: Vec::new(),
        policy: None,
        role: OperatorRole::Step,
        span,
    }
}

struct Scope<'f> {
    predicates: BTreeMap<&'f str, &'f PredicateDecl>,
    objects: BTreeMap<&'f str, &'f str>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Context {
    /// Ground literals only.
    Ground,
    /// Operator entry/run: variables allowed.
    Condition,
    /// Operator effects: variables and wildcards allowed.
    Effects,
}

fn check_literals(
    lits: &[LiteralExpr],
    scope: &Scope,
    params: &[Param],
    ctx: Context,
    diags: &mut Diags,
) {
    let mut seen: BTreeMap<(String, Vec<Term>), bool> = BTreeMap::new();
    for lit in lits {
        let Some(decl) = scope.predicates.get(lit.predicate.as_str()) else {
            diags.error(
                lit.predicate_span,
                format!("undeclared predicate `{}`", lit.predicate),
            );
            continue;
        };
        if decl.params.len() != lit.args.len() {
            diags.error(
                lit.predicate_span,
                format!(
                    "`{}` takes {} argument(s), found {}",
                    lit.predicate,
                    decl.params.len(),
                    lit.args.len()
                ),
            );
            continue;
        }
        let mut ok = true;
        for ((arg, span), p) in lit.args.iter().zip(&lit.arg_spans).zip(&decl.params) {
            match arg {
                Term::Object(o) => match scope.objects.get(o.as_str()) {
                    None => {
                        diags.error(*span, format!("undeclared object `{o}`"));
                        ok = false;
                    }
                    Some(t) if !type_accepts(&p.ty, t) => {
                        diags.error(
                            *span,
                            format!("object `{o}` has type `{t}`, expected `{}`", p.ty),
                        );
                        ok = false;
                    }
                    Some(_) => {}
                },
                Term::Var(v) => {
                    if ctx == Context::Ground {
                        diags.error(*span, format!("variable `?{v}` not allowed here"));
                        ok = false;
                    } else {
                        match params.iter().find(|q| &q.name == v) {
                            None => {
                                diags.error(*span, format!("unbound variable `?{v}`"));
                                ok = false;
                            }
                            Some(q)
                                if !(type_accepts(&p.ty, &q.ty) || type_accepts(&q.ty, &p.ty)) =>
                            {
                                diags.error(
                                    *span,
                                    format!("`?{v}` has type `{}`, expected `{}`", q.ty, p.ty),
                                );
                                ok = false;
                            }
                            Some(_) => {}
                        }
                    }
                }
                Term::Any => {
                    if ctx != Context::Effects {
                        diags.error(*span, "`*` is only allowed in effects");
                        ok = false;
                    }
                }
            }
        }
        if !ok || lit.args.contains(&Term::Any) {
            continue;
        }
        let key = (lit.predicate.clone(), lit.args.clone());
        if let Some(prev) = seen.insert(key, lit.positive) {
            if prev != lit.positive {
                diags.error(
                    lit.span,
                    format!(
                        "contradictory condition: `{}` required both ways",
                        lit.predicate
                    ),
                );
            }
        }
    }
}

fn validate(file: &DomainFile, diags: &mut Diags) {
    let mut scope = Scope {
        predicates: BTreeMap::new(),
        objects: BTreeMap::new(),
    };
    for p in &file.predicates {
        if scope.predicates.insert(&p.name, p).is_some() {
            diags.error(p.span, format!("duplicate predicate `{}`", p.name));
        }
        let mut names = BTreeSet::new();
        for q in &p.params {
            if !names.insert(&q.name) {
                diags.error(q.span, format!("duplicate parameter `?{}`", q.name));
            }
        }
    }
    for o in &file.objects {
        if scope.objects.insert(&o.name, &o.ty).is_some() {
            diags.error(o.span, format!("duplicate object `{}`", o.name));
        }
    }
    let mut op_names = BTreeSet::new();
    for op in &file.operators {
        if op.name.is_empty() {
            continue;
        }
        if !op_names.insert(op.name.as_str()) {
            diags.error(op.span, format!("duplicate operator `{}`", op.name));
        }
        let mut names = BTreeSet::new();
        for q in &op.params {
            if !names.insert(&q.name) {
                diags.error(q.span, format!("duplicate parameter `?{}`", q.name));
            }
        }
        check_literals(&op.pre, &scope, &op.params, Context::Condition, diags);
        if let Some(run) = &op.run {
            check_literals(run, &scope, &op.params, Context::Condition, diags);
        }
        check_literals(&op.eff, &scope, &op.params, Context::Effects, diags);
    }
    check_literals(&file.init, &scope, &[], Context::Ground, diags);
    let mut goal_names = BTreeSet::new();
    for g in &file.goals {
        if !goal_names.insert(g.name.as_str()) {
            diags.error(g.span, format!("duplicate goal `{}`", g.name));
        }
        check_literals(&g.literals, &scope, &[], Context::Ground, diags);
    }
    let mut plan_names = BTreeSet::new();
    for p in &file.plans {
        if !plan_names.insert(p.name.as_str()) {
            diags.error(p.span, format!("duplicate plan `{}`", p.name));
        }
        if let Some(g) = &p.goal {
            if !goal_names.contains(g.as_str()) {
                diags.error(
                    p.span,
                    format!("plan `{}` refers to unknown goal `{g}`", p.name),
                );
            }
        }
        for s in &p.steps {
            let Some(op) = file.operators.iter().find(|o| o.name == s.operator) else {
                diags.error(s.span, format!("unknown operator `{}`", s.operator));
                continue;
            };
            if op.params.len() != s.args.len() {
                diags.error(
                    s.span,
                    format!(
                        "`{}` takes {} argument(s), found {}",
                        s.operator,
                        op.params.len(),
                        s.args.len()
                    ),
                );
                continue;
            }
            for (a, q) in s.args.iter().zip(&op.params) {
                match scope.objects.get(a.as_str()) {
                    None => diags.error(s.span, format!("undeclared object `{a}`")),
                    Some(t) if !type_accepts(&q.ty, t) => diags.error(
                        s.span,
                        format!("object `{a}` has type `{t}`, expected `{}`", q.ty),
                    ),
                    Some(_) => {}
                }
            }
        }
    }
}

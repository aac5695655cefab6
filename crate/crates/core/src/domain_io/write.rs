use std::fmt::Write as _;

use nalgebra::Vector3;

use super::{DomainFile, LiteralExpr, Param, HEADER, VERSION};
use crate::operators::OperatorRole;
use crate::worlds::kitchen::{AdversaryEvent, Amount, KitchenConfig, ScheduledEvent, Trigger};

fn params(out: &mut String, ps: &[Param]) {
    for p in ps {
        let _ = write!(out, " ?{} - {}", p.name, p.ty);
    }
}

fn literals(out: &mut String, lits: &[LiteralExpr]) {
    for l in lits {
        let _ = write!(out, " {l}");
    }
}

fn vec3(v: &Vector3<f64>) -> String {
    format!("{} {} {}", v.x, v.y, v.z)
}

fn world(out: &mut String, w: &KitchenConfig) {
    out.push_str("world\n");
    let _ = writeln!(out, "  robot {}", w.robot);
    let scalars = [
        ("max_linear", w.max_linear),
        ("max_angular", w.max_angular),
        ("approach_radius", w.approach_radius),
        ("position_margin", w.position_margin),
        ("angular_margin", w.angular_margin),
        ("lambda_p", w.lambda_p),
        ("lambda_r", w.lambda_r),
        ("open_threshold", w.open_threshold),
        ("lift_height", w.lift_height),
        ("carry_height", w.carry_height),
        ("drop_margin", w.drop_margin),
        ("grasp_noise", w.grasp_noise),
        ("min_separation", w.min_separation),
        ("max_displacement", w.max_displacement),
        ("max_shove", w.max_shove),
    ];
    let _ = writeln!(out, "  home {}", vec3(&w.home));
    for (k, v) in scalars {
        let _ = writeln!(out, "  {k} {v}");
    }
    let _ = writeln!(
        out,
        "  placement_x {} {}",
        w.placement_x[0], w.placement_x[1]
    );
    let _ = writeln!(
        out,
        "  placement_y {} {}",
        w.placement_y[0], w.placement_y[1]
    );
    for d in &w.drawers {
        let _ = writeln!(
            out,
            "  drawer {} handle {} interior {} pull {} travel {} half {} {}",
            d.name,
            vec3(&d.handle_closed),
            vec3(&d.interior_closed),
            vec3(&d.pull),
            d.travel,
            d.half_extents[0],
            d.half_extents[1]
        );
    }
    for i in &w.items {
        let _ = writeln!(
            out,
            "  item {} standoff {} grasp_height {}",
            i.name, i.standoff, i.grasp_height
        );
    }
    out.push_str("end\n");
}

fn event(e: &ScheduledEvent) -> String {
    let trigger = match &e.trigger {
        Trigger::AtTick(t) => format!("at {t}"),
        Trigger::AfterDrawerOpened { drawer, delay } => format!("after_open {drawer} {delay}"),
    };
    let action = match &e.event {
        AdversaryEvent::CloseDrawer {
            drawer,
            amount: Amount::Fixed(a),
        } => format!("close_drawer {drawer} {a}"),
        AdversaryEvent::CloseDrawer {
            drawer,
            amount: Amount::Uniform(lo, hi),
        } => format!("close_drawer {drawer} uniform {lo} {hi}"),
        AdversaryEvent::DisplaceObject { object, offset } => {
            format!("displace {object} {}", vec3(offset))
        }
        AdversaryEvent::ShoveGripper { offset } => format!("shove {}", vec3(offset)),
    };
    format!("{trigger} {action}")
}

/// Canonical text for `file`. Parsing the result yields an equal structure.
pub fn serialize_domain(file: &DomainFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER} {VERSION}");

    if !file.predicates.is_empty() {
        out.push('\n');
        for p in &file.predicates {
            let _ = write!(out, "predicate {}", p.name);
            params(&mut out, &p.params);
            out.push('\n');
        }
    }

    if !file.objects.is_empty() {
        out.push('\n');
        let mut k = 0;
        while k < file.objects.len() {
            let ty = &file.objects[k].ty;
            let mut j = k;
            out.push_str("object");
            while j < file.objects.len() && &file.objects[j].ty == ty {
                let _ = write!(out, " {}", file.objects[j].name);
                j += 1;
            }
            let _ = writeln!(out, " - {ty}");
            k = j;
        }
    }

    for op in &file.operators {
        out.push('\n');
        let _ = write!(out, "operator {}", op.name);
        params(&mut out, &op.params);
        out.push('\n');
        if op.role != OperatorRole::Step {
            let _ = writeln!(out, "  role {}", op.role.as_str());
        }
        out.push_str("  pre");
        literals(&mut out, &op.pre);
        out.push('\n');
        if let Some(run) = &op.run {
            out.push_str("  run");
            literals(&mut out, run);
            out.push('\n');
        }
        out.push_str("  eff");
        literals(&mut out, &op.eff);
        out.push('\n');
        if let Some(p) = &op.policy {
            let _ = writeln!(out, "  policy {p}");
        }
        out.push_str("end\n");
    }

    if !file.init.is_empty() {
        out.push('\n');
        out.push_str("init");
        literals(&mut out, &file.init);
        out.push('\n');
    }

    if !file.goals.is_empty() {
        out.push('\n');
        for g in &file.goals {
            let _ = write!(out, "goal {}", g.name);
            literals(&mut out, &g.literals);
            out.push('\n');
        }
    }

    if !file.plans.is_empty() {
        out.push('\n');
        for p in &file.plans {
            let _ = write!(out, "plan {}", p.name);
            if let Some(g) = &p.goal {
                let _ = write!(out, " goal {g}");
            }
            for s in &p.steps {
                let _ = write!(out, " ({}", s.operator);
                for a in &s.args {
                    let _ = write!(out, " {a}");
                }
                out.push(')');
            }
            out.push('\n');
        }
    }

    if let Some(w) = &file.world {
        out.push('\n');
        world(&mut out, w);
    }

    if !file.adversary.is_empty() {
        out.push('\n');
        out.push_str("adversary\n");
        for e in &file.adversary {
            let _ = writeln!(out, "  {}", event(e));
        }
        out.push_str("end\n");
    }
    out
}

//! Static SVG rendering of one run.

use std::fmt::Write as _;

use replan_core::{Point, RunResult, Scenario, WorldCell};

const PX: f64 = 20.0;

/// Obstacles as squares, mover traces as paths, sub-goals as stars and the
/// executed trajectory as a single polyline.
pub fn render(scenario: &Scenario, run: &RunResult) -> String {
    let world = &scenario.world;
    let cs = world.cell_size();
    let (w, h) = (world.width() as f64 * PX, world.height() as f64 * PX);
    let to_px = |p: Point| (p.x / cs * PX, h - p.y / cs * PX);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(s, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff" stroke="#000000"/>"##).unwrap();

    for row in 0..world.height() {
        for col in 0..world.width() {
            if world.is_static_occupied(WorldCell::new(col as i64, row as i64)) {
                let x = col as f64 * PX;
                let y = h - (row + 1) as f64 * PX;
                writeln!(s, r##"<rect x="{x}" y="{y}" width="{PX}" height="{PX}" fill="#404040"/>"##).unwrap();
            }
        }
    }

    for mover in world.movers() {
        let mut d = String::new();
        for (i, tick) in run.ticks.iter().enumerate() {
            let (x, y) = to_px(mover.position_at(*tick).center(cs));
            write!(d, "{}{x:.2} {y:.2} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        writeln!(
            s,
            r##"<path d="{}" fill="none" stroke="#1f77b4" stroke-dasharray="4 3"/>"##,
            d.trim_end()
        )
        .unwrap();
    }

    let mut seen: Vec<Point> = Vec::new();
    for c in &run.cycles {
        if let Some(sg) = c.subgoal {
            if !seen.contains(&sg) {
                seen.push(sg);
                let (x, y) = to_px(sg);
                writeln!(s, r##"<polygon points="{}" fill="#d62728"/>"##, star(x, y, PX * 0.3)).unwrap();
            }
        }
    }

    let points: Vec<String> = run
        .trajectory
        .iter()
        .map(|p| {
            let (x, y) = to_px(p.position());
            format!("{x:.2},{y:.2}")
        })
        .collect();
    writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#2ca02c" stroke-width="2"/>"##,
        points.join(" ")
    )
    .unwrap();

    let (sx, sy) = to_px(scenario.start.position());
    let (gx, gy) = to_px(scenario.goal);
    writeln!(s, r##"<circle cx="{sx:.2}" cy="{sy:.2}" r="{:.1}" fill="#ff7f0e"/>"##, PX * 0.3).unwrap();
    writeln!(
        s,
        r##"<circle cx="{gx:.2}" cy="{gy:.2}" r="{:.1}" fill="none" stroke="#000000" stroke-width="2"/>"##,
        PX * 0.35
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

/// Five-pointed star around `(cx, cy)`.
fn star(cx: f64, cy: f64, r: f64) -> String {
    (0..10)
        .map(|k| {
            let rad = if k % 2 == 0 { r } else { r * 0.4 };
            let a = std::f64::consts::PI * (k as f64 / 5.0 - 0.5);
            format!("{:.2},{:.2}", cx + rad * a.cos(), cy + rad * a.sin())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

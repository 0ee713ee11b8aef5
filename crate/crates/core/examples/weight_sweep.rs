// Radial weight sweep: move the politics weight across a range while the
// other dimensions share the remainder, and track values and ranks.

use indexflow::indexes::gggi::dimension_weights;
use indexflow::indexes::{gggi_weights, idx_gggi, GggiMode, GggiParams};
use indexflow::synthetic::{gggi_table, COUNTRIES};
use indexflow::uncertainty::{rank_delta, weight_sweep, SweepSpec};
use indexflow::PipelineContext;

pub fn main() -> indexflow::Result<()> {
    let w = gggi_weights();
    let ctx = PipelineContext::init(gggi_table(&COUNTRIES, 3), "country", None, None)?;
    let dims = idx_gggi(
        &ctx,
        &w,
        &GggiParams {
            mode: GggiMode::TwoStage,
            ..GggiParams::default()
        },
    )?;
    let ctx = PipelineContext::init(dims.table, "country", None, None)?;
    let base = dimension_weights(&w)?;

    let spec = SweepSpec {
        anchor: true,
        ..SweepSpec::new("politics", 0.07, 0.52)
    };
    let frames = weight_sweep(&ctx, &base, &spec)?;
    println!("{} frames", frames.len());
    for f in frames.iter().step_by(6) {
        let top = f.ranks.iter().position(|r| *r == Some(1)).unwrap();
        println!(
            "frame {:>2}: politics {:.4}  sum {:.12}  leader {}",
            f.frame,
            f.weights.get("politics").unwrap(),
            f.weights.sum(),
            f.ids[top]
        );
    }
    let anchor = frames.iter().find(|f| (f.weights.get("politics").unwrap() - 0.25).abs() < 1e-12).unwrap();
    println!("anchor frame {} holds the published weights", anchor.frame);

    let mut moves = rank_delta(&frames)?;
    moves.sort_by_key(|m| std::cmp::Reverse(m.max_abs_delta));
    for m in moves.iter().take(5) {
        println!("{:<12} moves {:>2} places (first at frame {})", m.id, m.max_abs_delta, m.extremum_frame);
    }
    Ok(())
}

//! The two-step block argument: the first step of the fastest two-step
//! path, the greedy two-step time, and a long walk along the diagonal whose
//! mean step time stays below one.

use oriented_competition::fpp::{diagonal_walk, first_step_summary, Step};

fn main() -> oriented_competition::Result<()> {
    let s = first_step_summary(0, 100_000)?;
    println!(
        "first step: (2,0) {:.4}  (1,1) {:.4}  (0,2) {:.4}",
        s.frequency(Step::East2),
        s.frequency(Step::Diagonal),
        s.frequency(Step::North2)
    );
    println!("greedy mean {:.4} (se {:.4})", s.greedy_time.mean, s.greedy_time.std_err);
    let (lo, hi) = s.best_time.confidence_interval(0.99);
    println!("best two-step mean {:.4}, 99% CI ({lo:.4}, {hi:.4})", s.best_time.mean);

    let walk = diagonal_walk(0, 10_000)?;
    let end = walk.position();
    println!("walk after 10000 blocks at {end}, time per block {:.4}", walk.elapsed() / 10_000.0);
    Ok(())
}

//! Expands the angular momentum and the rate-dependent torque of the frame
//! chain into sums of products, then checks them against the recursive
//! evaluation at a random state.

use egg_sim::dynamics::FrameChain;
use egg_sim::symbolic::{evaluate, expand_b, expand_l, expand_tmec, Bindings};
use egg_sim::validation::{generic_params, random_chain_state};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> egg_sim::Result<()> {
    let l = expand_l();
    let b = expand_b()?;
    let tmec = expand_tmec()?;
    println!("L: {} terms", l.len());
    print!("{}", l.render());
    println!("\nB: {} terms (T_mec has {})", b.len(), tmec.len());
    for line in b.render().lines().take(6) {
        println!("{line}");
    }
    println!("...");

    let chain = FrameChain::from_params(&generic_params());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let state = random_chain_state(&mut rng);
    let bind = Bindings::from_chain(&chain, &state);
    let recursive = chain.total_angular_momentum(&state);
    let expanded = evaluate(&l, &bind)?;
    println!("\nrandom state");
    println!(
        "  L recursive {:>12.6e} {:>12.6e} {:>12.6e}",
        recursive.x, recursive.y, recursive.z
    );
    println!(
        "  L expanded  {:>12.6e} {:>12.6e} {:>12.6e}",
        expanded.x, expanded.y, expanded.z
    );
    println!(
        "  tmec difference {:.2e}",
        (evaluate(&tmec, &bind)? - chain.mechanical_torque(&state)).norm()
    );
    Ok(())
}

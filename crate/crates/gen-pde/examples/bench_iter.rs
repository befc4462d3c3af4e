//! Rough per-iteration cost of the training loop at benchmark scales.

use std::time::Instant;

use gen_pde::basis::BasisFamily;
use gen_pde::model::{GenModel, Model, PinnModel};
use gen_pde::pde::{burgers_problem, heat_problem};
use gen_pde::training::{train, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn time(label: &str, model: Model, problem: &gen_pde::pde::PdeProblem, iters: usize) {
    let cfg = TrainConfig { iterations: iters, progress_every: 0, ..TrainConfig::default() };
    let start = Instant::now();
    let (_, report) = train(&model, problem, &cfg).unwrap();
    let per = start.elapsed().as_secs_f64() / iters as f64;
    println!(
        "{label}: {:.2} ms/iter ({} iters, end loss {:.3e})",
        per * 1e3,
        iters,
        report.history.last().unwrap().total
    );
}

fn main() {
    let heat = heat_problem();
    let burgers = burgers_problem();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let gen25 = Model::Gen(
        GenModel::init(BasisFamily::SineHeat, 25, 0, heat.domain, &mut rng).unwrap(),
    );
    time("heat gen-25 ", gen25, &heat, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pinn = Model::Pinn(PinnModel::init(&[20, 20, 20, 20], &mut rng));
    time("heat pinn   ", pinn, &heat, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let b25 = Model::Gen(
        GenModel::init(BasisFamily::SineTraveling, 25, 0, burgers.domain, &mut rng).unwrap(),
    );
    time("burgers g-25", b25, &burgers, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let b100 = Model::Gen(
        GenModel::init(BasisFamily::SineTraveling, 100, 0, burgers.domain, &mut rng).unwrap(),
    );
    time("burgers g100", b100, &burgers, 50);
}

//! Short training probes: loss trajectory and grid accuracy per benchmark.

use gen_pde::basis::BasisFamily;
use gen_pde::model::{GenModel, Model, PinnModel};
use gen_pde::pde::{burgers_problem, heat_problem, wave_problem};
use gen_pde::training::{evaluate, train, GridSpec, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn probe(label: &str, model: Model, problem: &gen_pde::pde::PdeProblem, iters: usize) {
    let cfg = TrainConfig { iterations: iters, progress_every: 0, ..TrainConfig::default() };
    let start = std::time::Instant::now();
    let (trained, report) = train(&model, problem, &cfg).unwrap();
    let spec = GridSpec::over(problem.domain, 101, 101);
    let (_, m) = evaluate(&trained, problem, &spec).unwrap();
    println!(
        "{label}: iters={iters} first={:.3e} last={:.3e} rel_l2={:.4e} max_abs={:.3e} ({:.0}s)",
        report.history.first().unwrap().total,
        report.history.last().unwrap().total,
        m.rel_l2,
        m.max_abs,
        start.elapsed().as_secs_f64(),
    );
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let iters: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3000);
    let which = args.get(2).map(|s| s.as_str()).unwrap_or("all");
    let heat = heat_problem();
    let wave = wave_problem();
    let burgers = burgers_problem();

    if which == "all" || which == "heat" {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Model::Gen(GenModel::init(BasisFamily::SineHeat, 25, 0, heat.domain, &mut rng).unwrap());
        probe("heat sine-25 ", m, &heat, iters);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Model::Gen(GenModel::init(BasisFamily::GaussHeatProduct, 5, 5, heat.domain, &mut rng).unwrap());
        probe("heat gauss5x5", m, &heat, iters);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Model::Pinn(PinnModel::init(&[20, 20, 20, 20], &mut rng));
        probe("heat pinn    ", m, &heat, iters);
    }
    if which == "all" || which == "wave" {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Model::Gen(GenModel::init(BasisFamily::SineTraveling, 25, 0, wave.domain, &mut rng).unwrap());
        probe("wave sine-25 ", m, &wave, iters);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Model::Gen(GenModel::init(BasisFamily::GaussTraveling, 25, 0, wave.domain, &mut rng).unwrap());
        probe("wave gauss-25", m, &wave, iters);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Model::Pinn(PinnModel::init(&[20, 20, 20, 20], &mut rng));
        probe("wave pinn    ", m, &wave, iters);
    }
    if which == "all" || which == "burgers" {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Model::Gen(GenModel::init(BasisFamily::SineTraveling, 25, 0, burgers.domain, &mut rng).unwrap());
        probe("burgers g-25 ", m, &burgers, iters);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Model::Gen(GenModel::init(BasisFamily::SineTraveling, 100, 0, burgers.domain, &mut rng).unwrap());
        probe("burgers g-100", m, &burgers, iters);
    }
}

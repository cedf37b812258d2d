//! NSGA-II search engine over hybrid chromosomes.
//!
//! Both objectives are minimized: `f1` is the negated total information
//! gain of the applied cuts, `f2` the wrapper cross-validation error. Each
//! generation produces as many offspring as parents via binary tournaments
//! followed by scattered crossover or Gaussian mutation, merges both
//! populations, re-sorts, and keeps the best fronts, truncating the
//! boundary front by descending crowding distance.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::Dataset;
use crate::encoding::{random_chromosome, Chromosome, Gene};
use crate::entropy::discretization_fitness;
use crate::error::{Error, Result};
use crate::wrapper::{Evaluator, WrapperConfig};

/// Objective pair under the minimization convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Objectives {
    /// `−fit(1)`: negated gain sum, always ≤ 0.
    pub f1: f64,
    /// `fit(2)`: wrapper error in [0, 1].
    pub f2: f64,
}

impl Objectives {
    /// Worst-case sentinel assigned to chromosomes selecting nothing.
    pub const INFEASIBLE: Objectives = Objectives { f1: 0.0, f2: 1.0 };

    pub fn new(gain: f64, error: f64) -> Objectives {
        // avoid -0.0 so zero-gain individuals serialize uniformly
        Objectives { f1: if gain == 0.0 { 0.0 } else { -gain }, f2: error }
    }

    /// Gain sum in display convention (bits, ≥ 0).
    pub fn gain(&self) -> f64 {
        -self.f1
    }

    pub fn dominates(&self, other: &Objectives) -> bool {
        self.f1 <= other.f1
            && self.f2 <= other.f2
            && (self.f1 < other.f1 || self.f2 < other.f2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub objectives: Objectives,
    /// 1-based front index; front 1 is non-dominated.
    pub rank: usize,
    pub crowding: f64,
}

/// Fronts as ordered index sets; `fronts[0]` is front 1.
pub type FrontPartition = Vec<Vec<usize>>;

pub fn dominates(a: &Objectives, b: &Objectives) -> bool {
    a.dominates(b)
}

/// Deb's fast non-dominated sort. Indices within each front come out in
/// ascending order.
pub fn fast_nondominated_sort(objectives: &[Objectives]) -> FrontPartition {
    let n = objectives.len();
    assert!(n > 0, "sort of an empty population");
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if objectives[i].dominates(&objectives[j]) {
                dominated_by[i].push(j);
            } else if objectives[j].dominates(&objectives[i]) {
                counts[i] += 1;
            }
        }
    }
    let mut fronts: FrontPartition = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| counts[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                counts[j] -= 1;
                if counts[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::take(&mut current));
        current = next;
    }
    fronts
}

/// Crowding distances for one front: boundary solutions per objective get
/// +∞, interior ones accumulate normalized neighbor gaps; an objective with
/// zero range contributes nothing.
pub fn crowding_distance(front: &[Objectives]) -> Vec<f64> {
    let n = front.len();
    assert!(n > 0, "crowding of an empty front");
    let mut dist = vec![0.0f64; n];
    for key in [|o: &Objectives| o.f1, |o: &Objectives| o.f2] {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| key(&front[a]).partial_cmp(&key(&front[b])).unwrap().then(a.cmp(&b)));
        let lo = key(&front[order[0]]);
        let hi = key(&front[order[n - 1]]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..n - 1 {
                let gap = key(&front[order[w + 1]]) - key(&front[order[w - 1]]);
                dist[order[w]] += gap / (hi - lo);
            }
        }
    }
    dist
}

/// Binary tournament: lower rank wins, ties by larger crowding, remaining
/// ties by coin flip.
pub fn tournament_select<'a, R: Rng>(population: &'a [Individual], rng: &mut R) -> &'a Individual {
    assert!(!population.is_empty(), "tournament over an empty population");
    let a = &population[rng.gen_range(0..population.len())];
    let b = &population[rng.gen_range(0..population.len())];
    if a.rank != b.rank {
        return if a.rank < b.rank { a } else { b };
    }
    if a.crowding != b.crowding {
        return if a.crowding > b.crowding { a } else { b };
    }
    if rng.gen_bool(0.5) {
        a
    } else {
        b
    }
}

/// Uniform gene-mask crossover: each gene travels whole (both bits and the
/// cut together); the second child takes the complementary mask.
pub fn scattered_crossover<R: Rng>(
    p1: &Chromosome,
    p2: &Chromosome,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    assert_eq!(p1.len(), p2.len(), "parent arity");
    let mut c1 = Vec::with_capacity(p1.len());
    let mut c2 = Vec::with_capacity(p1.len());
    for (g1, g2) in p1.genes.iter().zip(&p2.genes) {
        if rng.gen_bool(0.5) {
            c1.push(*g1);
            c2.push(*g2);
        } else {
            c1.push(*g2);
            c2.push(*g1);
        }
    }
    (Chromosome { genes: c1 }, Chromosome { genes: c2 })
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; u1 shifted into (0, 1] so the log stays finite
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Per gene: flip each bit with probability `rate`; with probability `rate`
/// perturb the cut by a zero-mean Gaussian with standard deviation
/// `sigma_fraction · (ub − lb)`, clamped back into the bounds.
pub fn gaussian_mutation<R: Rng>(
    c: &Chromosome,
    bounds: &[(f64, f64)],
    rate: f64,
    sigma_fraction: f64,
    rng: &mut R,
) -> Chromosome {
    assert_eq!(c.len(), bounds.len(), "chromosome/bounds arity");
    assert!((0.0..=1.0).contains(&rate), "mutation rate in [0,1]");
    let genes = c
        .genes
        .iter()
        .zip(bounds)
        .map(|(gene, &(lo, hi))| {
            let mut out = *gene;
            if rng.gen_bool(rate) {
                out.select = !out.select;
            }
            if rng.gen_bool(rate) {
                out.discretize = !out.discretize;
            }
            if rng.gen_bool(rate) {
                let sigma = sigma_fraction * (hi - lo);
                out.cut = (out.cut + sigma * standard_normal(rng)).clamp(lo, hi);
            }
            out
        })
        .collect();
    Chromosome { genes }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1 / n`.
    pub mutation_rate: Option<f64>,
    pub sigma_fraction: f64,
    /// Threshold on the change of front-1 objective means.
    pub tolerance: f64,
    /// Consecutive below-tolerance generations that end the run.
    pub stall_generations: usize,
    /// Wall-clock seconds without improvement in either best objective.
    pub max_stall_secs: f64,
    /// Optional cap on the front-1 share kept by environmental selection.
    pub pareto_fraction: Option<f64>,
    /// Capture a merged-population audit snapshot every this many
    /// generations.
    pub audit_every: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> EngineConfig {
        EngineConfig {
            population: 50,
            generations: 1000,
            crossover_rate: 0.8,
            mutation_rate: None,
            sigma_fraction: 0.1,
            tolerance: 1e-3,
            stall_generations: 50,
            max_stall_secs: 600.0,
            pareto_fraction: None,
            audit_every: None,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::InvalidConfig { detail: "population must be at least 2".into() });
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::InvalidConfig { detail: "crossover rate outside [0,1]".into() });
        }
        if let Some(rate) = self.mutation_rate {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidConfig { detail: "mutation rate outside [0,1]".into() });
            }
        }
        if self.sigma_fraction < 0.0 {
            return Err(Error::InvalidConfig { detail: "negative sigma fraction".into() });
        }
        if self.tolerance < 0.0 {
            return Err(Error::InvalidConfig { detail: "negative tolerance".into() });
        }
        if self.stall_generations == 0 {
            return Err(Error::InvalidConfig { detail: "stall generations must be ≥ 1".into() });
        }
        if self.max_stall_secs <= 0.0 {
            return Err(Error::InvalidConfig { detail: "stall time must be positive".into() });
        }
        if let Some(f) = self.pareto_fraction {
            if !(0.0 < f && f <= 1.0) {
                return Err(Error::InvalidConfig { detail: "pareto fraction outside (0,1]".into() });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    GenerationBudget,
    FunctionTolerance,
    StallTime,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::GenerationBudget => "generation_budget",
            Termination::FunctionTolerance => "function_tolerance",
            Termination::StallTime => "stall_time",
        }
    }
}

/// Per-generation progress record (no wall-clock fields, so histories are
/// reproducible byte for byte).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenerationStat {
    pub generation: usize,
    pub population: usize,
    pub front1_size: usize,
    pub best_gain: f64,
    pub best_error: f64,
    pub mean_front1_gain: f64,
    pub mean_front1_error: f64,
}

/// Merged-population snapshot taken before environmental selection, for
/// after-the-fact invariant checking.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditSnapshot {
    pub generation: usize,
    pub merged: Vec<Objectives>,
    pub fronts: FrontPartition,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineResult {
    pub population: Vec<Individual>,
    pub fronts: FrontPartition,
    pub history: Vec<GenerationStat>,
    pub audits: Vec<AuditSnapshot>,
    pub generations_run: usize,
    pub termination: Termination,
}

/// Score one chromosome: decode, apply the sentinel to empty selections,
/// otherwise measure both objectives.
pub fn evaluate_chromosome(
    dataset: &Dataset,
    evaluator: &Evaluator<'_>,
    chromosome: &Chromosome,
) -> Result<Objectives> {
    let view = chromosome.decode(&dataset.attributes);
    if view.is_empty() {
        return Ok(Objectives::INFEASIBLE);
    }
    let gain = discretization_fitness(dataset, &view);
    let error = evaluator.error_fitness(&view)?;
    Ok(Objectives::new(gain, error))
}

fn evaluate_batch(
    dataset: &Dataset,
    evaluator: &Evaluator<'_>,
    chromosomes: &[Chromosome],
) -> Result<Vec<Objectives>> {
    // pure map over candidates: no RNG involved, so parallel scheduling
    // cannot perturb results
    chromosomes
        .par_iter()
        .map(|ch| evaluate_chromosome(dataset, evaluator, ch))
        .collect()
}

fn rank_and_crowd(population: &mut [Individual]) -> FrontPartition {
    let objs: Vec<Objectives> = population.iter().map(|ind| ind.objectives).collect();
    let fronts = fast_nondominated_sort(&objs);
    for (fi, front) in fronts.iter().enumerate() {
        let front_objs: Vec<Objectives> = front.iter().map(|&i| objs[i]).collect();
        let dists = crowding_distance(&front_objs);
        for (k, &i) in front.iter().enumerate() {
            population[i].rank = fi + 1;
            population[i].crowding = dists[k];
        }
    }
    fronts
}

fn front1_stat(
    generation: usize,
    population: &[Individual],
) -> GenerationStat {
    let mut best_gain = f64::NEG_INFINITY;
    let mut best_error = f64::INFINITY;
    let mut sum_gain = 0.0;
    let mut sum_error = 0.0;
    let mut front1 = 0usize;
    for ind in population {
        best_gain = best_gain.max(ind.objectives.gain());
        best_error = best_error.min(ind.objectives.f2);
        if ind.rank == 1 {
            front1 += 1;
            sum_gain += ind.objectives.gain();
            sum_error += ind.objectives.f2;
        }
    }
    GenerationStat {
        generation,
        population: population.len(),
        front1_size: front1,
        best_gain,
        best_error,
        mean_front1_gain: sum_gain / front1 as f64,
        mean_front1_error: sum_error / front1 as f64,
    }
}

/// Run the full search loop on a dataset.
///
/// The wrapper's fold plan is frozen once from `wrapper.fold_seed`; all
/// evolution randomness flows from `seed` through one sequential stream, so
/// a `(dataset, configs, seed)` triple fully determines the result.
pub fn evolve(
    dataset: &Dataset,
    engine: &EngineConfig,
    wrapper: &WrapperConfig,
    seed: u64,
) -> Result<EngineResult> {
    engine.validate()?;
    let evaluator = Evaluator::new(dataset, wrapper)?;
    let bounds = dataset.bounds();
    let n = bounds.len();
    let npop = engine.population;
    let rate = engine.mutation_rate.unwrap_or(1.0 / n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // initial population; re-draw empty selections a bounded number of
    // times, then force one bit so evaluation always has work to do
    let mut chromosomes = Vec::with_capacity(npop);
    for _ in 0..npop {
        let mut ch = random_chromosome(&bounds, &mut rng);
        let mut retries = 0;
        while ch.genes.iter().all(|g| !g.select) && retries < 100 {
            ch = random_chromosome(&bounds, &mut rng);
            retries += 1;
        }
        if ch.genes.iter().all(|g: &Gene| !g.select) {
            let j = rng.gen_range(0..n);
            ch.genes[j].select = true;
        }
        chromosomes.push(ch);
    }
    let objectives = evaluate_batch(dataset, &evaluator, &chromosomes)?;
    let mut population: Vec<Individual> = chromosomes
        .into_iter()
        .zip(objectives)
        .map(|(chromosome, objectives)| Individual {
            chromosome,
            objectives,
            rank: 0,
            crowding: 0.0,
        })
        .collect();
    rank_and_crowd(&mut population);

    let started = Instant::now();
    let mut last_improvement = Instant::now();
    let mut history = vec![front1_stat(0, &population)];
    let mut audits = Vec::new();
    let mut best_gain = history[0].best_gain;
    let mut best_error = history[0].best_error;
    let mut prev_means = (history[0].mean_front1_gain, history[0].mean_front1_error);
    let mut stall = 0usize;
    let mut termination = Termination::GenerationBudget;
    let mut generations_run = 0usize;

    for generation in 1..=engine.generations {
        // offspring batch: crossover pairs or mutated clones
        let mut kids: Vec<Chromosome> = Vec::with_capacity(npop);
        while kids.len() < npop {
            let p1 = tournament_select(&population, &mut rng);
            let p2 = tournament_select(&population, &mut rng);
            if rng.gen_bool(engine.crossover_rate) {
                let (c1, c2) = scattered_crossover(&p1.chromosome, &p2.chromosome, &mut rng);
                kids.push(c1);
                if kids.len() < npop {
                    kids.push(c2);
                }
            } else {
                let c1 =
                    gaussian_mutation(&p1.chromosome, &bounds, rate, engine.sigma_fraction, &mut rng);
                kids.push(c1);
                if kids.len() < npop {
                    let c2 = gaussian_mutation(
                        &p2.chromosome,
                        &bounds,
                        rate,
                        engine.sigma_fraction,
                        &mut rng,
                    );
                    kids.push(c2);
                }
            }
        }
        let kid_objectives = evaluate_batch(dataset, &evaluator, &kids)?;

        // merge and re-sort
        let mut merged = population;
        merged.extend(kids.into_iter().zip(kid_objectives).map(|(chromosome, objectives)| {
            Individual { chromosome, objectives, rank: 0, crowding: 0.0 }
        }));
        let merged_objs: Vec<Objectives> = merged.iter().map(|ind| ind.objectives).collect();
        let fronts = fast_nondominated_sort(&merged_objs);
        if engine.audit_every.is_some_and(|k| generation % k == 0) {
            audits.push(AuditSnapshot {
                generation,
                merged: merged_objs.clone(),
                fronts: fronts.clone(),
            });
        }

        // environmental selection: whole fronts while they fit, then the
        // boundary front by descending crowding (ties by merged index)
        let front1_cap = engine
            .pareto_fraction
            .map(|f| ((f * npop as f64).ceil() as usize).max(1))
            .unwrap_or(npop);
        let mut keep: Vec<(usize, usize, f64)> = Vec::with_capacity(npop); // (merged idx, rank, crowding)
        let mut front1_leftover: Vec<(usize, f64)> = Vec::new();
        for (fi, front) in fronts.iter().enumerate() {
            if keep.len() == npop {
                break;
            }
            let front_objs: Vec<Objectives> = front.iter().map(|&i| merged_objs[i]).collect();
            let dists = crowding_distance(&front_objs);
            let room = npop - keep.len();
            let cap = if fi == 0 { room.min(front1_cap) } else { room };
            if front.len() <= cap {
                keep.extend(front.iter().zip(&dists).map(|(&i, &d)| (i, fi + 1, d)));
            } else {
                let mut order: Vec<usize> = (0..front.len()).collect();
                order.sort_by(|&a, &b| {
                    dists[b].partial_cmp(&dists[a]).unwrap().then(front[a].cmp(&front[b]))
                });
                keep.extend(order[..cap].iter().map(|&k| (front[k], fi + 1, dists[k])));
                if fi == 0 {
                    front1_leftover =
                        order[cap..].iter().map(|&k| (front[k], dists[k])).collect();
                }
            }
        }
        // a pareto-fraction cap can underfill when front 1 spans nearly the
        // whole merged pool; top back up from its leftovers
        let mut leftover_cursor = 0;
        while keep.len() < npop && leftover_cursor < front1_leftover.len() {
            let (i, d) = front1_leftover[leftover_cursor];
            keep.push((i, 1, d));
            leftover_cursor += 1;
        }
        debug_assert_eq!(keep.len(), npop, "environmental selection must refill exactly");

        let mut selected_flags = vec![false; merged.len()];
        let mut meta: Vec<(usize, f64)> = vec![(0, 0.0); merged.len()];
        for &(i, rank, crowd) in &keep {
            selected_flags[i] = true;
            meta[i] = (rank, crowd);
        }
        let mut next = Vec::with_capacity(npop);
        for (i, ind) in merged.into_iter().enumerate() {
            if selected_flags[i] {
                let mut ind = ind;
                ind.rank = meta[i].0;
                ind.crowding = meta[i].1;
                next.push(ind);
            }
        }
        population = next;
        generations_run = generation;

        let stat = front1_stat(generation, &population);
        log::debug!(
            "gen\t{}\tfront1\t{}\tbest_f2\t{:.6}\tbest_gain\t{:.6}\telapsed_ms\t{}",
            stat.generation,
            stat.front1_size,
            stat.best_error,
            stat.best_gain,
            started.elapsed().as_millis()
        );
        history.push(stat);

        let mut improved = false;
        if stat.best_gain > best_gain {
            best_gain = stat.best_gain;
            improved = true;
        }
        if stat.best_error < best_error {
            best_error = stat.best_error;
            improved = true;
        }
        if improved {
            last_improvement = Instant::now();
        }

        let means = (stat.mean_front1_gain, stat.mean_front1_error);
        if (means.0 - prev_means.0).abs() < engine.tolerance
            && (means.1 - prev_means.1).abs() < engine.tolerance
        {
            stall += 1;
        } else {
            stall = 0;
        }
        prev_means = means;
        if stall >= engine.stall_generations {
            termination = Termination::FunctionTolerance;
            break;
        }
        if last_improvement.elapsed().as_secs_f64() > engine.max_stall_secs {
            termination = Termination::StallTime;
            break;
        }
    }

    let fronts = rank_and_crowd(&mut population);
    Ok(EngineResult { population, fronts, history, audits, generations_run, termination })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::LearnerKind;
    use proptest::prelude::*;

    fn obj(f1: f64, f2: f64) -> Objectives {
        Objectives { f1, f2 }
    }

    #[test]
    fn dominance_truth_table() {
        assert!(obj(-0.5, 0.1).dominates(&obj(-0.3, 0.2)));
        assert!(!obj(-0.5, 0.3).dominates(&obj(-0.3, 0.1)));
        assert!(!obj(-0.3, 0.1).dominates(&obj(-0.5, 0.3)));
        let e = obj(-0.2, 0.2);
        assert!(!e.dominates(&e));
        // equal in one, better in the other
        assert!(obj(-0.5, 0.2).dominates(&obj(-0.3, 0.2)));
    }

    #[test]
    fn chain_yields_singleton_fronts() {
        let objs = vec![obj(-4.0, 0.1), obj(-3.0, 0.2), obj(-2.0, 0.3), obj(-1.0, 0.4)];
        let fronts = fast_nondominated_sort(&objs);
        assert_eq!(fronts, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn identical_points_share_one_front() {
        let objs = vec![obj(-1.0, 0.5); 6];
        let fronts = fast_nondominated_sort(&objs);
        assert_eq!(fronts, vec![vec![0, 1, 2, 3, 4, 5]]);
    }

    /// Peeling oracle: repeatedly remove the set of points dominated by
    /// nobody still present.
    fn peel_oracle(objs: &[Objectives]) -> FrontPartition {
        let mut remaining: Vec<usize> = (0..objs.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining.iter().any(|&j| j != i && objs[j].dominates(&objs[i]))
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn crowding_reference_cases() {
        // boundaries of a 2-point front
        assert_eq!(crowding_distance(&[obj(-1.0, 0.1), obj(-2.0, 0.3)]), vec![
            f64::INFINITY,
            f64::INFINITY
        ]);
        // evenly spaced collinear points: middle gets 1.0 per objective
        let d = crowding_distance(&[obj(-2.0, 0.0), obj(-1.0, 0.1), obj(0.0, 0.2)]);
        assert_eq!(d[0], f64::INFINITY);
        assert!((d[1] - 2.0).abs() < 1e-12);
        assert_eq!(d[2], f64::INFINITY);
        // identical objectives: zero ranges, interior distances stay 0
        let d = crowding_distance(&[obj(-1.0, 0.5); 4]);
        assert_eq!(d[0], f64::INFINITY);
        assert_eq!(d[1], 0.0);
        assert_eq!(d[2], 0.0);
        assert_eq!(d[3], f64::INFINITY);
        // hand-computed uneven case
        let d = crowding_distance(&[
            obj(0.0, 1.0),
            obj(1.0, 0.6),
            obj(2.0, 0.3),
            obj(3.0, 0.0),
        ]);
        assert!((d[1] - (2.0 / 3.0 + 0.7)).abs() < 1e-9);
        assert!((d[2] - (2.0 / 3.0 + 0.6)).abs() < 1e-9);
    }

    fn dummy_individual(rank: usize, crowding: f64) -> Individual {
        Individual {
            chromosome: Chromosome { genes: vec![] },
            objectives: obj(0.0, 0.0),
            rank,
            crowding,
        }
    }

    #[test]
    fn tournament_prefers_rank_then_crowding() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let pop = vec![
            dummy_individual(1, 0.1),
            dummy_individual(3, f64::INFINITY),
            dummy_individual(3, 0.5),
            dummy_individual(3, 0.5),
        ];
        let mut wins = [0usize; 4];
        for _ in 0..4000 {
            let w = tournament_select(&pop, &mut rng);
            let i = pop.iter().position(|p| std::ptr::eq(p, w)).unwrap();
            wins[i] += 1;
        }
        // individual 0 wins every tournament it enters: P = 1 - (3/4)^2
        let p0 = wins[0] as f64 / 4000.0;
        assert!((p0 - 0.4375).abs() < 0.04, "rank-1 share {}", p0);
        // among rank-3s, infinite crowding beats 0.5 whenever both appear
        assert!(wins[1] > wins[2], "{:?}", wins);
    }

    #[test]
    fn tournament_coin_flip_is_roughly_fair() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let pop = vec![dummy_individual(2, 1.0), dummy_individual(2, 1.0)];
        let mut first = 0usize;
        for _ in 0..10_000 {
            if std::ptr::eq(tournament_select(&pop, &mut rng), &pop[0]) {
                first += 1;
            }
        }
        let share = first as f64 / 10_000.0;
        assert!((share - 0.5).abs() < 0.03, "share {}", share);
    }

    fn numbered_chromosome(base: f64, n: usize) -> Chromosome {
        Chromosome {
            genes: (0..n)
                .map(|j| Gene {
                    select: base > 50.0,
                    discretize: base <= 50.0,
                    cut: base + j as f64,
                })
                .collect(),
        }
    }

    #[test]
    fn crossover_moves_whole_genes() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let p1 = numbered_chromosome(0.0, 12);
        let p2 = numbered_chromosome(100.0, 12);
        let (c1, c2) = scattered_crossover(&p1, &p2, &mut rng);
        for j in 0..12 {
            let from_p1 = c1.genes[j] == p1.genes[j];
            let from_p2 = c1.genes[j] == p2.genes[j];
            assert!(from_p1 ^ from_p2, "gene {} must come whole from one parent", j);
            // complementary mask
            if from_p1 {
                assert_eq!(c2.genes[j], p2.genes[j]);
            } else {
                assert_eq!(c2.genes[j], p1.genes[j]);
            }
        }
        // identical parents reproduce themselves
        let (d1, d2) = scattered_crossover(&p1, &p1, &mut rng);
        assert_eq!(d1, p1);
        assert_eq!(d2, p1);
    }

    #[test]
    fn mutation_rate_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = numbered_chromosome(10.0, 8);
        let bounds = vec![(0.0, 200.0); 8];
        assert_eq!(gaussian_mutation(&c, &bounds, 0.0, 0.1, &mut rng), c);
    }

    #[test]
    fn mutation_rate_one_sigma_zero_flips_bits_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = numbered_chromosome(10.0, 8);
        let bounds = vec![(0.0, 200.0); 8];
        let m = gaussian_mutation(&c, &bounds, 1.0, 0.0, &mut rng);
        for (orig, new) in c.genes.iter().zip(&m.genes) {
            assert_eq!(new.select, !orig.select);
            assert_eq!(new.discretize, !orig.discretize);
            assert_eq!(new.cut, orig.cut);
        }
    }

    #[test]
    fn mutation_flip_frequency_tracks_the_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 10_000;
        let c = Chromosome {
            genes: vec![Gene { select: false, discretize: false, cut: 0.5 }; n],
        };
        let bounds = vec![(0.0, 1.0); n];
        let m = gaussian_mutation(&c, &bounds, 0.1, 0.1, &mut rng);
        let flips = m.genes.iter().filter(|g| g.select).count();
        let freq = flips as f64 / n as f64;
        assert!((freq - 0.1).abs() < 0.02, "flip frequency {}", freq);
    }

    proptest! {
        #[test]
        fn sort_matches_peeling_oracle(
            pts in proptest::collection::vec((-5.0f64..0.0, 0.0f64..1.0), 1..30),
        ) {
            let objs: Vec<Objectives> = pts.iter().map(|&(a, b)| obj(a, b)).collect();
            prop_assert_eq!(fast_nondominated_sort(&objs), peel_oracle(&objs));
        }

        #[test]
        fn mutated_cuts_stay_in_bounds(seed in 0u64..200, rate in 0.0f64..=1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = Chromosome {
                genes: (0..6)
                    .map(|j| Gene { select: true, discretize: true, cut: 9.0 + j as f64 * 0.4 })
                    .collect(),
            };
            let bounds = vec![(9.0, 11.0); 6];
            let m = gaussian_mutation(&c, &bounds, rate, 0.5, &mut rng);
            for g in &m.genes {
                prop_assert!(g.cut >= 9.0 && g.cut <= 11.0);
            }
        }
    }

    fn toy_dataset() -> Dataset {
        // feature 0 equals the label; feature 1 is structured noise
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i % 2) as f64, ((i * 7) % 11) as f64])
            .collect();
        let labels: Vec<usize> = (0..40).map(|i| i % 2).collect();
        Dataset::from_numeric(rows, labels).unwrap()
    }

    fn toy_engine() -> EngineConfig {
        EngineConfig {
            population: 12,
            generations: 8,
            audit_every: Some(2),
            ..EngineConfig::default()
        }
    }

    fn toy_wrapper() -> WrapperConfig {
        WrapperConfig { folds: 5, fold_seed: 9, ..WrapperConfig::new(LearnerKind::NaiveBayes) }
    }

    #[test]
    fn evolve_keeps_population_size_and_improves_monotonically() {
        let ds = toy_dataset();
        let result = evolve(&ds, &toy_engine(), &toy_wrapper(), 1234).unwrap();
        assert_eq!(result.population.len(), 12);
        for stat in &result.history {
            assert_eq!(stat.population, 12);
        }
        for w in result.history.windows(2) {
            assert!(w[1].best_gain >= w[0].best_gain - 1e-12, "gain elitism");
            assert!(w[1].best_error <= w[0].best_error + 1e-12, "error elitism");
        }
        // the label-equal feature should reach zero error quickly
        assert_eq!(result.history.last().unwrap().best_error, 0.0);
    }

    #[test]
    fn evolve_is_deterministic_per_seed() {
        let ds = toy_dataset();
        let a = evolve(&ds, &toy_engine(), &toy_wrapper(), 99).unwrap();
        let b = evolve(&ds, &toy_engine(), &toy_wrapper(), 99).unwrap();
        assert_eq!(a, b);
        let c = evolve(&ds, &toy_engine(), &toy_wrapper(), 100).unwrap();
        assert_ne!(a.population, c.population);
    }

    #[test]
    fn zero_generations_returns_the_evaluated_initial_population() {
        let ds = toy_dataset();
        let cfg = EngineConfig { generations: 0, ..toy_engine() };
        let result = evolve(&ds, &cfg, &toy_wrapper(), 7).unwrap();
        assert_eq!(result.generations_run, 0);
        assert_eq!(result.history.len(), 1);
        assert_eq!(result.population.len(), 12);
        assert_eq!(result.termination, Termination::GenerationBudget);
        assert!(result.population.iter().all(|ind| ind.rank >= 1));
    }

    #[test]
    fn sentinel_never_sits_on_front_one_beside_feasible_solutions() {
        let ds = toy_dataset();
        let result = evolve(&ds, &toy_engine(), &toy_wrapper(), 4321).unwrap();
        let front1_has_feasible = result.fronts[0]
            .iter()
            .any(|&i| result.population[i].objectives.f2 < 1.0);
        if front1_has_feasible {
            for &i in &result.fronts[0] {
                let ind = &result.population[i];
                let empty = ind.chromosome.genes.iter().all(|g| !g.select);
                assert!(!empty, "empty-selection sentinel on front 1");
            }
        }
    }

    #[test]
    fn audits_capture_merged_population_snapshots() {
        let ds = toy_dataset();
        let result = evolve(&ds, &toy_engine(), &toy_wrapper(), 55).unwrap();
        assert!(!result.audits.is_empty());
        for audit in &result.audits {
            assert_eq!(audit.merged.len(), 24, "merged pool is 2·npop");
            assert_eq!(audit.fronts, fast_nondominated_sort(&audit.merged));
        }
    }

    #[test]
    fn pareto_fraction_cap_limits_front_one_share() {
        let ds = toy_dataset();
        let cfg = EngineConfig {
            pareto_fraction: Some(0.35),
            generations: 6,
            ..toy_engine()
        };
        let result = evolve(&ds, &cfg, &toy_wrapper(), 11).unwrap();
        assert_eq!(result.population.len(), 12);
        // cap = ceil(0.35 * 12) = 5 members straight from the merged front 1;
        // the final re-sort may promote survivors, but the population itself
        // must stay full-sized and sorted
        assert!(result.fronts.iter().map(|f| f.len()).sum::<usize>() == 12);
    }
}

"""Three evolutionary engines over the panel genome.

* ga_run  -- steady-state GA: 2-arity tournaments, one-point crossover over
  the 64-locus linearization (16 mask bits then 48 placement genes), up to
  10 gene re-draws per child, children unconditionally replace the two worst.
* es_run  -- (mu, lambda) / (mu + lambda) ES with one self-adaptive step
  size per individual, log-normal sigma updates, per-gene discrete
  recombination of two parents.
* ep_run  -- evolutionary programming: no crossover, one child per parent,
  one self-adaptive sigma per continuous gene, round-robin survivor
  selection with q random opponents.

Every engine consumes exactly its configured fitness-evaluation budget
(initial-population evaluations included), owns a single seeded random
stream, and checkpoints population average/best fitness on a fixed
evaluation cadence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .fitness import (
    N_CONTINUOUS_GENES,
    N_SLOTS,
    SLOT_HI,
    SLOT_LO,
    Genome,
    evaluate,
    random_genome,
)
from .geometry import MASK_BITS, resolve_cuts
from .solar import Scenario

Objective = Callable[[Genome], float]

N_LOCI = MASK_BITS + N_CONTINUOUS_GENES  # 64

TAU_PRIME_DEFAULT = 1.0 / math.sqrt(2.0 * N_CONTINUOUS_GENES)
TAU_DEFAULT = 1.0 / math.sqrt(2.0 * math.sqrt(N_CONTINUOUS_GENES))


@dataclass
class GaConfig:
    population: int = 100
    budget: int = 4000
    tournament_arity: int = 2
    mutation_gene_draws: int = 10
    mutation_prob: float = 0.5
    checkpoint_interval: int = 100
    runs: int = 30

    def __post_init__(self) -> None:
        if self.population < 2:
            raise ValueError("population: must be at least 2")
        if self.budget < self.population:
            raise ValueError("budget: smaller than the initial population")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob: must be in [0, 1]")
        if self.checkpoint_interval < 1:
            raise ValueError("checkpoint_interval: must be positive")


@dataclass
class EsConfig:
    mu: int = 50
    lam: int = 350
    strategy: str = "comma"
    budget: int = 10_000
    tau_prime: float = TAU_PRIME_DEFAULT
    tau: float = TAU_DEFAULT
    sigma_init: float = 5.0
    sigma_floor: float = 0.5
    bit_flip_prob: float = 1.0 / MASK_BITS
    checkpoint_interval: int = 800
    runs: int = 30

    def __post_init__(self) -> None:
        if self.strategy not in ("comma", "plus"):
            raise ValueError("strategy: must be 'comma' or 'plus'")
        if self.mu < 1:
            raise ValueError("mu: must be at least 1")
        if self.strategy == "comma" and self.lam < self.mu:
            raise ValueError("lam: comma selection needs lambda >= mu")
        if self.budget < self.mu:
            raise ValueError("budget: smaller than the initial population")
        if self.tau_prime <= 0.0 or self.tau <= 0.0:
            raise ValueError("tau/tau_prime: must be positive")
        if self.sigma_floor <= 0.0:
            raise ValueError("sigma_floor: must be positive")
        if self.checkpoint_interval < 1:
            raise ValueError("checkpoint_interval: must be positive")


@dataclass
class EpConfig:
    population: int = 10
    budget: int = 4000
    bit_flip_prob: float = 0.2
    learning_rate: float = 0.2
    sigma_init: float = 5.0
    sigma_floor: float = 0.5
    q: int = 10
    checkpoint_interval: int = 100
    runs: int = 30

    def __post_init__(self) -> None:
        if self.population < 1:
            raise ValueError("population: must be at least 1")
        if self.budget < self.population:
            raise ValueError("budget: smaller than the initial population")
        if self.q < 1:
            raise ValueError("q: must be at least 1")
        if self.sigma_floor <= 0.0:
            raise ValueError("sigma_floor: must be positive")
        if not 0.0 <= self.bit_flip_prob <= 1.0:
            raise ValueError("bit_flip_prob: must be in [0, 1]")
        if self.checkpoint_interval < 1:
            raise ValueError("checkpoint_interval: must be positive")


@dataclass
class RunTrace:
    """Checkpointed fitness history plus the best genome of one run."""

    checkpoints: list[tuple[int, float, float]]  # (evaluations, pop avg, pop best)
    best_genome: Genome
    best_fitness: float
    final_population: list[Genome] = field(default_factory=list)


def solar_objective(scenario: Scenario) -> Objective:
    """The production fitness: net watts of a genome under the scenario."""

    def objective(genome: Genome) -> float:
        return evaluate(genome, scenario).fitness

    return objective


def sphere_stub_target(target_fraction: float = 0.4) -> np.ndarray:
    """Fixed in-range target point for the diagnostic sphere objective."""
    return np.tile(SLOT_LO + target_fraction * (SLOT_HI - SLOT_LO), (N_SLOTS, 1))


def sphere_stub_objective(target_fraction: float = 0.4) -> Objective:
    """Diagnostic stand-in fitness: negated squared distance of the 48
    continuous genes to a fixed target, in native units; the mask is ignored.
    Used to verify that self-adaptation actually drives convergence."""
    target = sphere_stub_target(target_fraction)

    def objective(genome: Genome) -> float:
        return -float(np.sum((genome.slots - target) ** 2))

    return objective


class _RunState:
    """Budgeted evaluation counter with best-ever tracking and checkpointing.

    Engines call evaluate() once per fitness evaluation and checkpoint()
    at every commit point (population change). Each checkpoint boundary
    (multiple of the interval) is recorded once, labeled with the boundary,
    using the population stats at the first commit at or after it.
    """

    def __init__(self, objective: Objective, budget: int, interval: int):
        self.objective = objective
        self.budget = budget
        self.interval = interval
        self.evals = 0
        self.checkpoints: list[tuple[int, float, float]] = []
        self._next_boundary = interval
        self.best_genome: Optional[Genome] = None
        self.best_fitness = -math.inf

    def evaluate(self, genome: Genome) -> float:
        if self.evals >= self.budget:
            raise RuntimeError("evaluation budget exceeded (engine bug)")
        fit = self.objective(genome)
        self.evals += 1
        if fit > self.best_fitness:
            self.best_fitness = fit
            self.best_genome = genome.copy()
        return fit

    def checkpoint(self, population_fitnesses) -> None:
        while self._next_boundary <= self.evals:
            fits = np.asarray(population_fitnesses, dtype=float)
            self.checkpoints.append(
                (self._next_boundary, float(fits.mean()), float(fits.max()))
            )
            self._next_boundary += self.interval

    def finish(self, population: list[Genome]) -> RunTrace:
        assert self.evals == self.budget, "engine stopped off-budget"
        return RunTrace(
            checkpoints=self.checkpoints,
            best_genome=self.best_genome,
            best_fitness=self.best_fitness,
            final_population=[g.copy() for g in population],
        )


def _to_vector(genome: Genome) -> np.ndarray:
    return np.concatenate([genome.mask.astype(float), genome.slots.ravel()])


def _from_vector(vec: np.ndarray) -> Genome:
    return Genome(vec[:MASK_BITS] > 0.5, vec[MASK_BITS:].reshape(N_SLOTS, 3).copy())


def _clamp_slots(slots: np.ndarray) -> None:
    """Heights and tilts clamp to their range edges; azimuth wraps mod 360."""
    slots[:, 0] = np.clip(slots[:, 0], SLOT_LO[0], SLOT_HI[0])
    slots[:, 1] = np.clip(slots[:, 1], SLOT_LO[1], SLOT_HI[1])
    slots[:, 2] = np.mod(slots[:, 2], 360.0)


def _tournament(rng: np.random.Generator, fitnesses: list[float], arity: int) -> int:
    """Index of the fittest of `arity` uniform draws; exact ties break uniformly."""
    contestants = rng.integers(0, len(fitnesses), size=arity)
    best = max(fitnesses[c] for c in contestants)
    winners = [int(c) for c in contestants if fitnesses[c] == best]
    if len(winners) == 1:
        return winners[0]
    return winners[int(rng.integers(0, len(winners)))]


def _one_point_crossover(
    rng: np.random.Generator, a: Genome, b: Genome
) -> tuple[Genome, Genome]:
    """Swap tails at a cut point between loci of the 64-locus linearization."""
    cut = int(rng.integers(1, N_LOCI))
    va, vb = _to_vector(a), _to_vector(b)
    child1 = np.concatenate([va[:cut], vb[cut:]])
    child2 = np.concatenate([vb[:cut], va[cut:]])
    return _from_vector(child1), _from_vector(child2)


def _ga_mutate(rng: np.random.Generator, genome: Genome, config: GaConfig) -> None:
    """Draw gene positions with replacement; each fires with mutation_prob.

    A drawn bit flips; a drawn continuous gene is redrawn uniformly in its
    legal range. The cut resolution runs afterwards.
    """
    draws = rng.integers(0, N_LOCI, size=config.mutation_gene_draws)
    for locus in draws:
        if rng.random() >= config.mutation_prob:
            continue
        if locus < MASK_BITS:
            genome.mask[locus] = not genome.mask[locus]
        else:
            slot, comp = divmod(int(locus) - MASK_BITS, 3)
            genome.slots[slot, comp] = rng.uniform(SLOT_LO[comp], SLOT_HI[comp])
    genome.mask = resolve_cuts(genome.mask)


def ga_run(
    config: GaConfig,
    scenario: Optional[Scenario] = None,
    seed: int = 0,
    objective: Optional[Objective] = None,
) -> RunTrace:
    """One steady-state GA run; returns its checkpoint trace and best genome.

    Each step runs two independent tournaments, one-point crossover, mutates
    both children, evaluates them, and unconditionally replaces the two worst
    individuals. If a single evaluation remains in the budget, only the first
    child is evaluated and it replaces the single worst.
    """
    if objective is None:
        objective = solar_objective(scenario)
    rng = np.random.default_rng(seed)
    state = _RunState(objective, config.budget, config.checkpoint_interval)

    pop: list[Genome] = []
    fits: list[float] = []
    for _ in range(config.population):
        g = random_genome(rng)
        pop.append(g)
        fits.append(state.evaluate(g))
        state.checkpoint(fits)

    while state.evals < config.budget:
        p1 = _tournament(rng, fits, config.tournament_arity)
        p2 = _tournament(rng, fits, config.tournament_arity)
        c1, c2 = _one_point_crossover(rng, pop[p1], pop[p2])
        _ga_mutate(rng, c1, config)
        _ga_mutate(rng, c2, config)
        children = [c1, c2][: config.budget - state.evals]
        child_fits = [state.evaluate(c) for c in children]
        worst = np.argsort(np.asarray(fits), kind="stable")[: len(children)]
        for idx, g, f in zip(worst, children, child_fits):
            pop[int(idx)] = g
            fits[int(idx)] = f
        state.checkpoint(fits)
    return state.finish(pop)


def es_run(
    config: EsConfig,
    scenario: Optional[Scenario] = None,
    seed: int = 0,
    objective: Optional[Objective] = None,
) -> RunTrace:
    """One (mu, lambda) or (mu + lambda) ES run with self-adaptive sigma.

    Each child recombines two uniformly chosen parents gene-wise (discrete)
    and averages their sigmas, then mutates sigma first through the
    log-normal update

        sigma' = max(sigma * exp(tau_prime * N + tau * N_i), sigma_floor)

    and only then perturbs every continuous gene by sigma' * N(0,1)
    (heights/tilts clamped, azimuths wrapped). Mask bits flip independently
    with bit_flip_prob and the cut resolution runs before evaluation.
    Survivors are the best mu of the children (comma) or of parents plus
    children (plus). A final short generation is created if fewer than
    lambda evaluations remain.
    """
    if objective is None:
        objective = solar_objective(scenario)
    rng = np.random.default_rng(seed)
    state = _RunState(objective, config.budget, config.checkpoint_interval)

    pop: list[Genome] = []
    sigmas: list[float] = []
    fits: list[float] = []
    for _ in range(config.mu):
        g = random_genome(rng)
        pop.append(g)
        sigmas.append(config.sigma_init)
        fits.append(state.evaluate(g))
        state.checkpoint(fits)

    while state.evals < config.budget:
        n_children = min(config.lam, config.budget - state.evals)
        kids: list[Genome] = []
        kid_sigmas: list[float] = []
        kid_fits: list[float] = []
        for _ in range(n_children):
            a, b = rng.integers(0, len(pop), size=2)
            pick = rng.integers(0, 2, size=N_LOCI).astype(bool)
            vec = np.where(pick, _to_vector(pop[int(a)]), _to_vector(pop[int(b)]))
            child = _from_vector(vec)

            sigma = 0.5 * (sigmas[int(a)] + sigmas[int(b)])
            sigma = max(
                sigma
                * math.exp(
                    config.tau_prime * rng.standard_normal()
                    + config.tau * rng.standard_normal()
                ),
                config.sigma_floor,
            )
            child.slots += sigma * rng.standard_normal((N_SLOTS, 3))
            _clamp_slots(child.slots)
            child.mask ^= rng.random(MASK_BITS) < config.bit_flip_prob
            child.mask = resolve_cuts(child.mask)

            kids.append(child)
            kid_sigmas.append(sigma)
            kid_fits.append(state.evaluate(child))

        if config.strategy == "plus":
            kids = pop + kids
            kid_sigmas = sigmas + kid_sigmas
            kid_fits = fits + kid_fits
        order = np.argsort(-np.asarray(kid_fits), kind="stable")[: config.mu]
        pop = [kids[int(i)] for i in order]
        sigmas = [kid_sigmas[int(i)] for i in order]
        fits = [kid_fits[int(i)] for i in order]
        state.checkpoint(fits)
    return state.finish(pop)


def ep_run(
    config: EpConfig,
    scenario: Optional[Scenario] = None,
    seed: int = 0,
    objective: Optional[Objective] = None,
) -> RunTrace:
    """One evolutionary-programming run with per-gene self-adaptive sigmas.

    Every parent spawns exactly one child, no crossover. The child's sigma
    list mutates first,

        sigma_i' = max(sigma_i * (1 + learning_rate * N_i), sigma_floor)

    then each continuous gene moves by its own new sigma, gene' = gene +
    sigma_i' * N(0,1) (clamped/wrapped); bits flip with bit_flip_prob.
    Survivor selection is round-robin over parents plus children: each
    individual scores one point per win against q uniformly drawn opponents;
    the population-size highest scores survive (ties broken by fitness,
    then input order).
    """
    if objective is None:
        objective = solar_objective(scenario)
    rng = np.random.default_rng(seed)
    state = _RunState(objective, config.budget, config.checkpoint_interval)

    pop: list[Genome] = []
    sigmas: list[np.ndarray] = []
    fits: list[float] = []
    for _ in range(config.population):
        g = random_genome(rng)
        pop.append(g)
        sigmas.append(np.full((N_SLOTS, 3), config.sigma_init))
        fits.append(state.evaluate(g))
        state.checkpoint(fits)

    while state.evals < config.budget:
        n_parents = min(config.population, config.budget - state.evals)
        pool = list(zip(pop, sigmas, fits))
        for i in range(n_parents):
            new_sig = np.maximum(
                sigmas[i] * (1.0 + config.learning_rate * rng.standard_normal((N_SLOTS, 3))),
                config.sigma_floor,
            )
            slots = pop[i].slots + new_sig * rng.standard_normal((N_SLOTS, 3))
            _clamp_slots(slots)
            mask = pop[i].mask ^ (rng.random(MASK_BITS) < config.bit_flip_prob)
            child = Genome(resolve_cuts(mask), slots)
            pool.append((child, new_sig, state.evaluate(child)))

        scores = []
        pool_fits = [entry[2] for entry in pool]
        for i in range(len(pool)):
            opponents = rng.integers(0, len(pool), size=config.q)
            scores.append(sum(1 for o in opponents if pool_fits[i] > pool_fits[int(o)]))
        ranked = sorted(
            range(len(pool)), key=lambda i: (-scores[i], -pool_fits[i], i)
        )[: config.population]
        pop = [pool[i][0] for i in ranked]
        sigmas = [pool[i][1] for i in ranked]
        fits = [pool[i][2] for i in ranked]
        state.checkpoint(fits)
    return state.finish(pop)

"""Replication harness behind the simulate subcommand.

A plan is a grid of (distribution, sample size, neighbor order) cells; each
cell runs r independent replications.  A replication draws a fresh data set,
point-estimates its mutual information, and, unless the plan disables the
test stage, computes the relative belief ratio and its strength against a
prior draw set shared across the whole run (the prior never sees data, so
sharing it is sound and halves the Monte Carlo cost).

Every stochastic quantity is a pure function of (seed, cell index,
replication index), so results are invariant to worker count and to the
order in which the pool happens to schedule tasks.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvalidParameter, Unsupported
from .mi import (DEFAULT_A_ESTIMATE, DEFAULT_DRAWS, DEFAULT_K, DEFAULT_N_ATOMS,
                 MiConfig, MiDraws, mi_draws, mi_point_estimate, true_mi)
from .rbtest import DEFAULT_A_TEST, DEFAULT_C, RbConfig, run_independence_test
from .rng import RngStream
from .sampling import describe_distribution, sample, standardize_columns

# Stream layout under the run seed: substream(0, d, k) feeds the prior
# shared by every cell of dimension d at neighbor order k, and
# substream(1, cell, rep) feeds one replication.
_PRIOR_PATH = 0
_REPLICATION_PATH = 1

SIMULATION_COLUMNS = ("distribution", "n", "k", "r", "true_mi",
                      "mi_mean", "mse", "rb_mean", "str_mean")


@dataclass(frozen=True)
class SimPlan:
    """Grid of simulation cells plus the knobs shared by all of them."""

    distributions: tuple
    sizes: tuple[int, ...]
    ks: tuple[int, ...] = (DEFAULT_K,)
    replications: int = 100
    a_estimate: float = DEFAULT_A_ESTIMATE
    a_test: float = DEFAULT_A_TEST
    c: float = DEFAULT_C
    n_atoms: int = DEFAULT_N_ATOMS
    draws: int = DEFAULT_DRAWS
    strength_cells: int = 20
    run_test: bool = True
    standardize: bool = False

    def __post_init__(self):
        object.__setattr__(self, "distributions", tuple(self.distributions))
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        if not self.distributions:
            raise InvalidParameter("plan needs at least one distribution")
        if not self.sizes or min(self.sizes) < 2:
            raise InvalidParameter(f"plan needs sample sizes >= 2, got {self.sizes}")
        if not self.ks or min(self.ks) < 1:
            raise InvalidParameter(f"plan needs neighbor orders >= 1, got {self.ks}")
        if self.replications < 1:
            raise InvalidParameter(
                f"plan needs at least 1 replication, got {self.replications}")

    @property
    def cells(self) -> list[tuple]:
        """(spec, n, k) triples in their fixed reporting order."""
        return [(spec, n, k)
                for spec in self.distributions
                for n in self.sizes
                for k in self.ks]


@dataclass(frozen=True)
class ReplicationTask:
    """Everything one replication needs; shipped whole to worker processes."""

    seed: int
    cell: int
    index: int
    spec: object
    n: int
    k: int
    a_estimate: float
    a_test: float
    c: float
    n_atoms: int
    draws: int
    strength_cells: int
    run_test: bool
    standardize: bool
    prior: MiDraws | None


@dataclass(frozen=True)
class ReplicationOutcome:
    cell: int
    index: int
    mi: float
    rb: float | None
    strength: float | None


@dataclass(frozen=True)
class CellSummary:
    """Aggregates of one grid cell, in reporting column order."""

    distribution: str
    n: int
    k: int
    r: int
    true_mi: float | None
    mi_mean: float
    mse: float | None
    rb_mean: float | None
    str_mean: float | None

    def row(self) -> tuple:
        return (self.distribution, self.n, self.k, self.r, self.true_mi,
                self.mi_mean, self.mse, self.rb_mean, self.str_mean)


def run_replication(task: ReplicationTask) -> ReplicationOutcome:
    """One full replication; a pure function of (seed, cell, index)."""
    root = RngStream(task.seed).substream(_REPLICATION_PATH, task.cell, task.index)
    data = sample(task.spec, task.n, root.substream(0))
    if task.standardize:
        data = standardize_columns(data)
    estimate_cfg = MiConfig(a=task.a_estimate, k=task.k,
                            n_atoms=task.n_atoms, draws=task.draws)
    point = mi_point_estimate(mi_draws(estimate_cfg, root.substream(1), data=data)).point
    rb = strength = None
    if task.run_test:
        test_cfg = RbConfig(c=task.c, a=task.a_test, draws=task.draws,
                            grid_size=task.strength_cells)
        result = run_independence_test(data, test_cfg, k=task.k,
                                       n_atoms=task.n_atoms,
                                       rng=root.substream(2), prior=task.prior)
        rb, strength = result.rb, result.strength
    return ReplicationOutcome(task.cell, task.index, point, rb, strength)


def shared_priors(plan: SimPlan, seed: int) -> dict[tuple[int, int], MiDraws]:
    """Prior MI draw sets keyed by (dimension, k), one per distinct pair."""
    priors: dict[tuple[int, int], MiDraws] = {}
    if not plan.run_test:
        return priors
    root = RngStream(seed)
    for spec in plan.distributions:
        for k in plan.ks:
            key = (spec.dim, k)
            if key not in priors:
                cfg = MiConfig(a=plan.a_test, k=k, n_atoms=plan.n_atoms,
                               draws=plan.draws)
                priors[key] = mi_draws(cfg, root.substream(_PRIOR_PATH, *key),
                                       dim=spec.dim)
    return priors


def _cell_tasks(plan: SimPlan, seed: int, cell: int, spec, n: int, k: int,
                priors) -> list[ReplicationTask]:
    prior = priors.get((spec.dim, k))
    return [ReplicationTask(seed=seed, cell=cell, index=i, spec=spec, n=n, k=k,
                            a_estimate=plan.a_estimate, a_test=plan.a_test,
                            c=plan.c, n_atoms=plan.n_atoms, draws=plan.draws,
                            strength_cells=plan.strength_cells,
                            run_test=plan.run_test,
                            standardize=plan.standardize, prior=prior)
            for i in range(plan.replications)]


def summarize_cell(spec, n: int, k: int,
                   outcomes: list[ReplicationOutcome]) -> CellSummary:
    """Mean MI, mean squared error against the closed form, mean RB/strength."""
    mi = np.array([o.mi for o in outcomes])
    try:
        target = true_mi(spec)
    except Unsupported:
        target = None
    mse = float(np.mean((mi - target) ** 2)) if target is not None else None
    rb = str_ = None
    if outcomes and outcomes[0].rb is not None:
        rb = float(np.mean([o.rb for o in outcomes]))
        str_ = float(np.mean([o.strength for o in outcomes]))
    return CellSummary(distribution=describe_distribution(spec), n=n, k=k,
                       r=len(outcomes), true_mi=target,
                       mi_mean=float(mi.mean()), mse=mse,
                       rb_mean=rb, str_mean=str_)


def run_plan(plan: SimPlan, seed: int, workers: int = 1) -> Iterator[CellSummary]:
    """Yield one CellSummary per grid cell, in plan order, as cells finish.

    Streaming lets the caller flush partial tables if interrupted mid-run.
    Replications parallelize across ``workers`` processes; a single worker
    runs everything in-process.
    """
    if workers < 1:
        raise InvalidParameter(f"worker count must be >= 1, got {workers}")
    priors = shared_priors(plan, seed)
    if workers == 1:
        for cell, (spec, n, k) in enumerate(plan.cells):
            tasks = _cell_tasks(plan, seed, cell, spec, n, k, priors)
            yield summarize_cell(spec, n, k, [run_replication(t) for t in tasks])
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for cell, (spec, n, k) in enumerate(plan.cells):
            tasks = _cell_tasks(plan, seed, cell, spec, n, k, priors)
            outcomes = list(pool.map(run_replication, tasks))
            yield summarize_cell(spec, n, k, outcomes)

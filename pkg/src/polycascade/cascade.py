"""Cascade driver: witness supersets and isolated solutions per level.

The run solves the top embedded system from a total-degree start system,
then walks the levels downward.  At each level the converged endpoints with
vanishing slack form the witness superset for that dimension; the
nonsingular endpoints with nonzero slack are recycled as start points for
the next homotopy down.  Level 0 collects isolated solutions.  The top
dimension of the solution set is the largest level whose verified witness
superset is nonempty.

Since no equation is identically zero the solution set has dimension at
most n-1, so the cascade starts at level n-1; the level-n system can have
no witness points at all and would only add start paths.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .embedding import (CascadeHomotopy, EmbeddedSystem, ParameterSample,
                        StartHomotopy, embed, sample_parameters)
from .linalg import RandomSource
from .polynomials import PolynomialSystem
from .start_systems import StartSystem, ZeroPolynomialError, build_start_system
from .tracking import PathResult, PathStatus, TrackerConfig, refine_endpoint, track_batch


class NonSquareSystemError(ValueError):
    """The solver needs as many equations as variables."""


@dataclass
class CascadeConfig:
    """Thresholds and run controls for classification and clustering."""

    tol_z: float = 1e-8
    cond_max: float = 1e8
    cluster_tol: float = 1e-6
    residual_tol: float = 1e-8
    seed: int = 0
    threads: int = 1
    tracker: TrackerConfig = field(default_factory=TrackerConfig)

    def __post_init__(self):
        if self.tol_z <= 0 or self.cluster_tol <= 0 or self.residual_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.tol_z >= self.cluster_tol:
            raise ValueError("tol_z must be smaller than cluster_tol")
        if self.cond_max <= 1:
            raise ValueError("cond_max must exceed 1")
        if self.seed < 0 or self.seed > 2**64 - 1:
            raise ValueError("seed must fit in 64 bits")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if isinstance(self.tracker, dict):
            self.tracker = TrackerConfig.from_dict(self.tracker)

    def to_dict(self) -> dict:
        return {
            "tol_z": self.tol_z, "cond_max": self.cond_max,
            "cluster_tol": self.cluster_tol, "residual_tol": self.residual_tol,
            "seed": self.seed, "threads": self.threads,
            "tracker": self.tracker.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CascadeConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown cascade settings: {sorted(unknown)}")
        return cls(**data)


class SolutionClass(str, Enum):
    ON_COMPONENT = "on_component"
    NONSINGULAR_SLACK = "nonsingular_slack"
    DIVERGED = "diverged"
    SINGULAR_UNRESOLVED = "singular_unresolved"


def classify_endpoint(result: PathResult, level: int, cfg: CascadeConfig) -> SolutionClass:
    """Assign a path endpoint to its bucket at the given level.

    Slack is only meaningful at level >= 1; level-0 endpoints split into
    nonsingular (isolated solution candidates) and unresolved.  Failed paths
    are unresolved by definition.
    """
    if result.status == PathStatus.DIVERGED:
        return SolutionClass.DIVERGED
    if result.status == PathStatus.FAILED:
        return SolutionClass.SINGULAR_UNRESOLVED
    if level >= 1 and result.slack_norm <= cfg.tol_z:
        return SolutionClass.ON_COMPONENT
    if result.condition <= cfg.cond_max and result.residual <= cfg.residual_tol:
        return SolutionClass.NONSINGULAR_SLACK
    return SolutionClass.SINGULAR_UNRESOLVED


@dataclass(eq=False)
class WitnessPoint:
    """A clustered endpoint in x-coordinates."""

    x: np.ndarray
    multiplicity: int
    residual: float
    condition: float

    def __repr__(self) -> str:
        return (f"WitnessPoint(x={np.round(self.x, 6)}, mult={self.multiplicity}, "
                f"residual={self.residual:.2e}, condition={self.condition:.2e})")


@dataclass(eq=False)
class WitnessSuperset:
    """Witness candidates at one dimension, with the slicing hyperplanes.

    slices holds the effective (eta-absorbed) hyperplanes as (constant,
    coefficient vector) pairs; every stored point satisfies the base system
    and all its slices to the class tolerance.  Points of higher-dimensional
    components may still be present below the top dimension.
    """

    level: int
    points: list
    slices: list
    filtered_out: int = 0


@dataclass
class LevelStats:
    level: int
    n_paths: int
    on_component: int
    regular: int
    diverged: int
    unresolved: int
    wall_ms: float


@dataclass(eq=False)
class CascadeOutput:
    supersets: list
    isolated_solutions: list
    unresolved_level0: list
    stats: list
    top_dimension: int | None
    parameters: ParameterSample
    gamma: complex
    start_constants: np.ndarray
    total_paths: int
    seed: int


@dataclass(eq=False)
class SolveOutput:
    results: list
    solutions: list
    unresolved: list
    stats: LevelStats
    gamma: complex
    start_constants: np.ndarray
    total_paths: int
    seed: int


def cluster_points(points: list, tol: float) -> list:
    """Single-linkage clusters under the max-norm; returns index lists."""
    count = len(points)
    parent = list(range(count))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(count):
        for b in range(a + 1, count):
            if float(np.max(np.abs(points[a] - points[b]))) <= tol:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
    groups: dict = {}
    for a in range(count):
        groups.setdefault(find(a), []).append(a)
    return sorted(groups.values(), key=lambda g: g[0])


def cluster_witnesses(results: list, n_vars: int, cfg: CascadeConfig) -> list:
    """Merge coincident endpoints; multiplicity is the cluster size.

    The representative is the residual-minimizing member, already refined by
    the tracker's endgame.
    """
    if not results:
        return []
    xs = [np.asarray(r.endpoint[:n_vars]) for r in results]
    witnesses = []
    for group in cluster_points(xs, cfg.cluster_tol):
        best = min(group, key=lambda k: results[k].residual)
        witnesses.append(WitnessPoint(
            x=xs[best].copy(), multiplicity=len(group),
            residual=float(results[best].residual),
            condition=float(results[best].condition)))
    return witnesses


class _SystemAsHomotopy:
    """Adapter so refine_endpoint can polish against a fixed system."""

    def __init__(self, system: EmbeddedSystem):
        self.system = system
        self.dim = system.dim

    def value(self, point, s):
        return self.system.evaluate(point)

    def jacobian(self, point, s):
        return self.system.jacobian(point)


def verify_witness(x: np.ndarray, base: PolynomialSystem, params: ParameterSample,
                   level: int, cfg: CascadeConfig) -> dict:
    """Re-check a witness point against the base system and its slices.

    Evaluates the residuals afresh and re-runs Newton refinement on the
    embedded system from (x, z=0); a genuine witness stays put and keeps all
    residuals below the class tolerance.
    """
    x = np.asarray(x, dtype=np.complex128)
    residual = float(np.max(np.abs(base.evaluate(x))))
    if level > 0:
        slice_residual = float(np.max(np.abs(params.slice_value(level, x))))
    else:
        slice_residual = 0.0
    embedded = embed(base, params, level)
    point = np.concatenate([x, np.zeros(level, dtype=np.complex128)])
    refined, _, _, _ = refine_endpoint(_SystemAsHomotopy(embedded), point, cfg.tracker)
    drift = float(np.max(np.abs(refined - point)))
    passed = (residual <= cfg.residual_tol
              and slice_residual <= cfg.residual_tol
              and drift <= cfg.cluster_tol)
    return {"pass": passed, "residual": residual,
            "slice_residual": slice_residual, "drift": drift}


def _strip_slack(results: list, n_vars: int, new_level: int) -> None:
    """Drop the tracked z coordinate of a finished level in place.

    The last slack is exactly zero at converged endpoints (it is one of the
    refined equations), so the point continues at the next level down with
    the remaining slacks deciding on/off-component.
    """
    for r in results:
        r.endpoint = r.endpoint[:-1]
        if new_level > 0:
            r.slack_norm = float(np.max(np.abs(r.endpoint[n_vars:])))
        else:
            r.slack_norm = 0.0


def _validate_input(f: PolynomialSystem) -> None:
    if not f.is_square():
        raise NonSquareSystemError(
            f"system has {f.n_polys} equations in {f.n_vars} variables")
    for k, d in enumerate(f.degrees()):
        if d < 0:
            raise ZeroPolynomialError(f"equation {k + 1} is identically zero")


def _split_level0(results: list, cfg: CascadeConfig):
    """Cluster level-0 endpoints into isolated solutions and leftovers.

    A cluster of several converged paths is a multiple solution no matter
    how tame its condition number looks (the Jacobian can stay scale-balanced
    on the approach), so only singleton clusters count as isolated.
    """
    isolated = []
    pool = []
    candidates = []
    for r in results:
        cls = classify_endpoint(r, 0, cfg)
        if cls == SolutionClass.NONSINGULAR_SLACK:
            candidates.append(r)
        elif cls == SolutionClass.SINGULAR_UNRESOLVED:
            pool.append(r)
    demoted = 0
    if candidates:
        xs = [r.endpoint for r in candidates]
        for group in cluster_points(xs, cfg.cluster_tol):
            if len(group) == 1:
                r = candidates[group[0]]
                isolated.append(WitnessPoint(
                    x=np.asarray(r.endpoint).copy(), multiplicity=1,
                    residual=float(r.residual), condition=float(r.condition)))
            else:
                demoted += len(group)
                pool.extend(candidates[k] for k in group)
    unresolved_points = []
    if pool:
        xs = [np.asarray(r.endpoint) for r in pool]
        for group in cluster_points(xs, cfg.cluster_tol):
            best = min(group, key=lambda k: pool[k].residual)
            unresolved_points.append(WitnessPoint(
                x=xs[best].copy(), multiplicity=len(group),
                residual=float(pool[best].residual),
                condition=float(pool[best].condition)))
    return isolated, unresolved_points, len(candidates) - demoted


def run_cascade(f: PolynomialSystem, cfg: CascadeConfig) -> CascadeOutput:
    """Run the full cascade on a square system with no zero equations."""
    _validate_input(f)
    n = f.n_vars
    rng = RandomSource(cfg.seed)
    params = sample_parameters(n, rng)
    top = n - 1

    e_top = embed(f, params, top)
    start = build_start_system(e_top, rng, slack_vars=top)
    gamma = rng.unit_complex()

    t0 = time.perf_counter()
    results = track_batch(StartHomotopy(e_top, start, gamma), list(start.roots()),
                          cfg.tracker, threads=cfg.threads)
    total_paths = len(results)

    supersets = []
    stats = []
    level = top
    while level >= 1:
        by_class: dict = {c: [] for c in SolutionClass}
        for r in results:
            by_class[classify_endpoint(r, level, cfg)].append(r)
        on_component = by_class[SolutionClass.ON_COMPONENT]
        regular = by_class[SolutionClass.NONSINGULAR_SLACK]

        witnesses = cluster_witnesses(on_component, n, cfg)
        kept = []
        filtered = 0
        for w in witnesses:
            if verify_witness(w.x, f, params, level, cfg)["pass"]:
                kept.append(w)
            else:
                filtered += 1
        slices = [(complex(params.eff_constants[j]), params.eff_coefficients[j].copy())
                  for j in range(level)]
        supersets.append(WitnessSuperset(level=level, points=kept, slices=slices,
                                         filtered_out=filtered))

        wall_ms = (time.perf_counter() - t0) * 1000.0
        stats.append(LevelStats(
            level=level, n_paths=len(results),
            on_component=len(on_component), regular=len(regular),
            diverged=len(by_class[SolutionClass.DIVERGED]),
            unresolved=len(by_class[SolutionClass.SINGULAR_UNRESOLVED]),
            wall_ms=wall_ms))

        t0 = time.perf_counter()
        if not regular:
            results = []
            level -= 1
            # nothing to continue with; lower levels get empty rows
            while level >= 1:
                supersets.append(WitnessSuperset(
                    level=level, points=[],
                    slices=[(complex(params.eff_constants[j]),
                             params.eff_coefficients[j].copy()) for j in range(level)]))
                stats.append(LevelStats(level, 0, 0, 0, 0, 0, 0.0))
                level -= 1
            break
        homotopy = CascadeHomotopy(f, params, level)
        results = track_batch(homotopy, [r.endpoint for r in regular],
                              cfg.tracker, threads=cfg.threads)
        total_paths += len(results)
        _strip_slack(results, n, level - 1)
        level -= 1

    diverged0 = sum(1 for r in results
                    if classify_endpoint(r, 0, cfg) == SolutionClass.DIVERGED)
    isolated, unresolved0, n_isolated = _split_level0(results, cfg)
    stats.append(LevelStats(
        level=0, n_paths=len(results), on_component=0, regular=n_isolated,
        diverged=diverged0, unresolved=len(results) - n_isolated - diverged0,
        wall_ms=(time.perf_counter() - t0) * 1000.0))

    top_dimension = None
    for superset in supersets:
        if superset.points:
            top_dimension = max(top_dimension or 0, superset.level)
    if top_dimension is None and isolated:
        top_dimension = 0

    return CascadeOutput(
        supersets=supersets, isolated_solutions=isolated,
        unresolved_level0=unresolved0, stats=stats, top_dimension=top_dimension,
        parameters=params, gamma=gamma, start_constants=start.constants.copy(),
        total_paths=total_paths, seed=cfg.seed)


def solve_total_degree(f: PolynomialSystem, cfg: CascadeConfig) -> SolveOutput:
    """Plain total-degree homotopy against f itself, no embedding."""
    _validate_input(f)
    rng = RandomSource(cfg.seed)
    start = build_start_system(f, rng)
    gamma = rng.unit_complex()
    target = embed(f, None, 0)

    t0 = time.perf_counter()
    results = track_batch(StartHomotopy(target, start, gamma), list(start.roots()),
                          cfg.tracker, threads=cfg.threads)
    diverged = sum(1 for r in results
                   if classify_endpoint(r, 0, cfg) == SolutionClass.DIVERGED)
    solutions, unresolved, n_regular = _split_level0(results, cfg)
    stats = LevelStats(
        level=0, n_paths=len(results), on_component=0, regular=n_regular,
        diverged=diverged, unresolved=len(results) - n_regular - diverged,
        wall_ms=(time.perf_counter() - t0) * 1000.0)
    return SolveOutput(results=results, solutions=solutions, unresolved=unresolved,
                       stats=stats, gamma=gamma,
                       start_constants=start.constants.copy(),
                       total_paths=len(results), seed=cfg.seed)


def rerun_with_fresh_slice(f: PolynomialSystem, cfg: CascadeConfig,
                           seed: int) -> CascadeOutput:
    """Same cascade under an independent parameter draw."""
    return run_cascade(f, dataclasses.replace(cfg, seed=seed))

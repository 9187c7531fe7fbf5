"""Cross-validation batteries wiring the independent routes together.

Each battery checks one equivalence or inequality that the implementation
must satisfy by construction: the closed-form qubit-qubit maximum, the
alternating-ascent oracle, the bound sandwich, embedding invariance, and
the planar-rotation identity.  All sampling is seeded and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .case_study import embed
from .ensembles import RngStream, bures_qubit_qudit, parallel_map
from .optimizer import (
    OptimizerConfig,
    horodecki_qubit_qubit,
    lemma_rotation_identity,
    max_chsh,
)
from .seesaw import seesaw_max
from .states import decompose

HORODECKI_ATOL = 1e-6
SEESAW_ATOL = 1e-4
BOUND_SLACK = 1e-8
EMBED_ATOL = 1e-6
LEMMA_RTOL = 1e-6

# disjoint substream namespaces per battery
_NS_HORODECKI = 0
_NS_SEESAW = 1
_NS_BOUNDS = 2
_NS_EMBED = 3
_NS_LEMMA = 4


def _substream(seed: int, namespace: int, i: int) -> RngStream:
    return RngStream(seed, namespace * 1_000_000 + i)


@dataclass(frozen=True)
class BatteryResult:
    name: str
    passed: bool
    detail: str


def battery_horodecki(
    trials: int, seed: int, config: OptimizerConfig, threads: int | None = None
) -> BatteryResult:
    """Search vs the qubit-qubit closed form 2 sqrt(k1 + k2).

    The closed form maximizes over traceless observables only, so it is a
    lower bound on the search everywhere and agrees with it exactly in the
    violating regime and on identity-free blocks.  Three checks per state:
    dominance, agreement whenever either value exceeds 2, and agreement
    after projecting the identity components out of the blocks.
    """

    def one(i: int) -> tuple[float, float, float]:
        betas = decompose(bures_qubit_qudit(2, _substream(seed, _NS_HORODECKI, i)))
        value = max_chsh(betas, config).value
        closed = horodecki_qubit_qubit(betas)
        dominance_defect = closed - value
        violating_diff = abs(value - closed) if max(value, closed) > 2.0 else 0.0
        eye = np.eye(2)
        traceless = [b - (np.trace(b) / 2.0) * eye for b in betas.triple]
        projected = betas.__class__(
            d=2,
            beta0=betas.beta0,
            beta1=traceless[0],
            beta2=traceless[1],
            beta3=traceless[2],
        )
        projected_diff = abs(max_chsh(projected, config).value - closed)
        return dominance_defect, violating_diff, projected_diff

    rows = parallel_map(one, trials, threads)
    dominance = max(r[0] for r in rows)
    violating = max(r[1] for r in rows)
    projected = max(r[2] for r in rows)
    ok = (
        dominance < 1e-9
        and violating < HORODECKI_ATOL
        and projected < HORODECKI_ATOL
    )
    return BatteryResult(
        "horodecki-equivalence",
        ok,
        f"over {trials} d=2 states: closed form below search by >= "
        f"{-dominance:.1e}, max |diff| violating = {violating:.3e}, "
        f"max |diff| identity-free = {projected:.3e}",
    )


def battery_seesaw(
    trials: int, seed: int, config: OptimizerConfig, threads: int | None = None
) -> BatteryResult:
    def one(i: int) -> float:
        state = bures_qubit_qudit(3, _substream(seed, _NS_SEESAW, i))
        reference = max_chsh(decompose(state), config).value
        found = seesaw_max(state, n_starts=16, seed=seed * 7919 + i).value
        return abs(found - reference)

    worst = max(parallel_map(one, trials, threads))
    return BatteryResult(
        "seesaw-equivalence",
        worst < SEESAW_ATOL,
        f"max |seesaw - search| = {worst:.3e} over {trials} d=3 states",
    )


def battery_bounds(
    trials: int, seed: int, config: OptimizerConfig, threads: int | None = None
) -> BatteryResult:
    dims = (2, 3, 4, 5)
    per_dim = max(1, trials // len(dims))

    def one(i: int) -> float:
        d = dims[i // per_dim]
        result = max_chsh(
            decompose(bures_qubit_qudit(d, _substream(seed, _NS_BOUNDS, i))), config
        )
        return max(result.lower - result.value, result.value - result.upper)

    worst = max(parallel_map(one, per_dim * len(dims), threads))
    return BatteryResult(
        "bound-sandwich",
        worst < BOUND_SLACK,
        f"max bound violation = {worst:.3e} over {per_dim * len(dims)} states, "
        f"d in {dims}",
    )


def battery_embedding(
    trials: int, seed: int, config: OptimizerConfig, threads: int | None = None
) -> BatteryResult:
    def one(i: int) -> float:
        betas = decompose(bures_qubit_qudit(2, _substream(seed, _NS_EMBED, i)))
        base = max_chsh(betas, config).value
        grown = max_chsh(embed(betas, 3 + i % 2), config).value
        return abs(grown - base)

    worst = max(parallel_map(one, trials, threads))
    return BatteryResult(
        "embedding-invariance",
        worst < EMBED_ATOL,
        f"max |embedded - original| = {worst:.3e} over {trials} d=2 states",
    )


def battery_lemma(
    trials: int, seed: int, config: OptimizerConfig, threads: int | None = None
) -> BatteryResult:
    def one(i: int) -> float:
        rng = _substream(seed, _NS_LEMMA, i)
        v = rng.normal(3)
        w = rng.normal(3)
        lhs, rhs = lemma_rotation_identity(v, w, config)
        return abs(lhs - rhs) / max(lhs, 1e-30)

    worst = max(parallel_map(one, trials, threads))
    return BatteryResult(
        "lemma-identity",
        worst < LEMMA_RTOL,
        f"max relative |lhs - rhs| = {worst:.3e} over {trials} vector pairs",
    )


def run_verification(
    trials: int = 100,
    seed: int = 0,
    config: OptimizerConfig = OptimizerConfig(),
    threads: int | None = None,
) -> list[BatteryResult]:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    return [
        battery_horodecki(trials, seed, config, threads),
        battery_seesaw(max(1, trials // 2), seed, config, threads),
        battery_bounds(trials, seed, config, threads),
        battery_embedding(max(1, trials // 2), seed, config, threads),
        battery_lemma(trials, seed, config, threads),
    ]

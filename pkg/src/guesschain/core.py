"""Closed-form quantities for sequential two-state qubit guessing chains.

Setting
-------
A sender prepares one of two pure qubit states (real overlap ``s`` in [0, 1],
prior probabilities ``eta1``, ``eta2``) and passes the qubit through a chain of
``N`` receivers. Every receiver measures, announces a guess for the prepared
state, and forwards a pure post-measurement state to the next receiver. The
chain succeeds jointly when *all* guesses are correct.

A receiver that guesses correctly with conditional probabilities ``(p1, p2)``
(given state 1 / state 2 was prepared) and receives a state pair of overlap
``t_in`` can leave at most an output pair of overlap ``t_out`` constrained by

    t_in / t_out = sqrt(p1 (1 - p2)) + sqrt(p2 (1 - p1))        (*)

The right-hand side is the *distinguishability cost* of the pair ``(p1, p2)``:
it is 0 when the receiver is perfect and 1 when the receiver learns nothing.
Chaining (*) across N receivers shows that in the optimal joint strategy every
receiver faces the same effective overlap ``s**(1/N)`` and uses the same
``(p1, p2)``, so the joint success probability reduces to

    P = eta1 * p1**N + eta2 * p2**N   subject to   (*) with budget s**(1/N).

This module holds the problem/result containers and all closed-form pieces of
that reduced problem: the constraint, its solution branch p2(p1), the interior
stationarity residual, the equal-prior symmetric solution, the per-receiver
greedy (Helstrom) strategy, and the pinned boundary strategies. Everything is
a pure function of its arguments (thread-safe by statelessness) in float64.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "DOMAIN_SLACK",
    "DiscriminationInstance",
    "Strategy",
    "StrategyResult",
    "SuccessPair",
    "boundary_solution",
    "distinguishability",
    "equal_prior_jbg",
    "helstrom_bound",
    "helstrom_success_pair",
    "individual_greedy",
    "overlap_ladder",
    "p2_from_p1",
    "stationarity_residual",
]

# Tolerated excursion outside [0, 1] before an argument is treated as a caller
# bug rather than roundoff.
DOMAIN_SLACK = 1e-12


def _check_unit_interval(name: str, value: float) -> float:
    """Validate a probability-like argument, forgiving <= 1e-12 roundoff."""
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if value < -DOMAIN_SLACK or value > 1.0 + DOMAIN_SLACK:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return min(max(value, 0.0), 1.0)


class Strategy(enum.Enum):
    """Label for how a chain strategy was produced."""

    JBG_OPTIMAL = "JBG_OPTIMAL"
    JBG_SYMMETRIC_ANALYTIC = "JBG_SYMMETRIC_ANALYTIC"
    INDIVIDUAL_GREEDY = "INDIVIDUAL_GREEDY"
    BOUNDARY = "BOUNDARY"


class SuccessPair(NamedTuple):
    """A receiver's conditional success probabilities (given state 1 / 2)."""

    p1: float
    p2: float


@dataclass(frozen=True)
class DiscriminationInstance:
    """One discrimination problem: overlap, priors, and chain length.

    ``prior_2`` may be omitted and defaults to ``1 - prior_1``. Priors must
    sum to 1 within 1e-12.
    """

    overlap: float
    prior_1: float
    prior_2: float | None = None
    n_receivers: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.overlap) and 0.0 <= self.overlap <= 1.0):
            raise ValueError(f"overlap must lie in [0, 1], got {self.overlap!r}")
        if not (math.isfinite(self.prior_1) and 0.0 <= self.prior_1 <= 1.0):
            raise ValueError(f"prior_1 must lie in [0, 1], got {self.prior_1!r}")
        if self.prior_2 is None:
            object.__setattr__(self, "prior_2", 1.0 - self.prior_1)
        if not (math.isfinite(self.prior_2) and 0.0 <= self.prior_2 <= 1.0):
            raise ValueError(f"prior_2 must lie in [0, 1], got {self.prior_2!r}")
        if abs(self.prior_1 + self.prior_2 - 1.0) > 1e-12:
            raise ValueError(
                f"priors must sum to 1 within 1e-12, got {self.prior_1!r} + {self.prior_2!r}"
            )
        if not isinstance(self.n_receivers, int) or isinstance(self.n_receivers, bool):
            raise ValueError(f"n_receivers must be an int, got {self.n_receivers!r}")
        if self.n_receivers < 1:
            raise ValueError(f"n_receivers must be >= 1, got {self.n_receivers}")

    @property
    def effective_overlap(self) -> float:
        """Per-receiver overlap budget s**(1/N) of the reduced problem."""
        return self.overlap ** (1.0 / self.n_receivers)


@dataclass(frozen=True)
class StrategyResult:
    """A complete chain strategy.

    stages
        One SuccessPair per receiver, in chain order.
    overlaps
        Overlap of the state pair *arriving* at each receiver (first entry is
        the prepared-pair overlap).
    joint_success
        eta1 * prod(p1) + eta2 * prod(p2) for the instance it was built for.
    """

    stages: tuple[SuccessPair, ...]
    overlaps: tuple[float, ...]
    joint_success: float
    strategy: Strategy

    def recompute_joint(self, prior_1: float, prior_2: float) -> float:
        """Joint success recomputed from the per-stage pairs."""
        prod1 = 1.0
        prod2 = 1.0
        for stage in self.stages:
            prod1 *= stage.p1
            prod2 *= stage.p2
        return prior_1 * prod1 + prior_2 * prod2


def distinguishability(p1: float, p2: float) -> float:
    """Distinguishability cost sqrt(p1(1-p2)) + sqrt(p2(1-p1)) of a pair.

    Equals the ratio t_in/t_out a receiver with conditional success
    probabilities (p1, p2) imposes between its incoming and outgoing pair
    overlaps. Symmetric in its arguments and bounded by [0, 1].
    """
    p1 = _check_unit_interval("p1", p1)
    p2 = _check_unit_interval("p2", p2)
    value = math.sqrt(p1 * (1.0 - p2)) + math.sqrt(p2 * (1.0 - p1))
    return min(value, 1.0)


def p2_from_p1(p1: float, s_eff: float) -> float:
    """Largest p2 compatible with p1 under a per-receiver budget ``s_eff``.

    Writing p1 = cos^2(theta1) and s_eff = sin(phi), the constraint has two
    algebraic branches, p2 = cos^2(phi -/+ theta1); this returns the larger
    one,

        p2 = (s_eff * sqrt(1 - p1) + sqrt(p1) * sqrt(1 - s_eff**2))**2,

    which is the branch an optimizer should use. For p1 >= 1 - s_eff**2 the
    returned pair saturates distinguishability(p1, p2) = s_eff; below that the
    plus branch realizes the budget through the opposite relative sign of the
    two square roots (see ``_p2_from_p1_minus`` for the other branch).
    """
    p1 = _check_unit_interval("p1", p1)
    s_eff = _check_unit_interval("s_eff", s_eff)
    root = s_eff * math.sqrt(1.0 - p1) + math.sqrt(p1 * (1.0 - s_eff * s_eff))
    return min(root * root, 1.0)


def _p2_from_p1_minus(p1: float, s_eff: float) -> float:
    """Smaller constraint branch; kept for exhaustive brute-force searches."""
    p1 = _check_unit_interval("p1", p1)
    s_eff = _check_unit_interval("s_eff", s_eff)
    root = s_eff * math.sqrt(1.0 - p1) - math.sqrt(p1 * (1.0 - s_eff * s_eff))
    return min(root * root, 1.0)


def stationarity_residual(p1: float, inst: DiscriminationInstance) -> float:
    """Interior stationarity residual of the reduced joint objective.

    Zero exactly at interior stationary points of
    eta1 * p1**N + eta2 * p2(p1)**N when the objective is parametrized by
    theta1 = arccos(sqrt(p1)) (the parametrization that stays differentiable
    at p1 in {0, 1}); equal to -g'(theta1) / (2N) for that parametrization.
    Only defined on the open interval 0 < p1 < 1.
    """
    if not (0.0 < p1 < 1.0):
        raise ValueError(f"p1 must lie strictly inside (0, 1), got {p1!r}")
    n = inst.n_receivers
    s_eff = inst.effective_overlap
    c2 = 1.0 - s_eff * s_eff
    base = s_eff * math.sqrt(1.0 - p1) + math.sqrt(p1 * c2)
    term1 = inst.prior_1 * p1 ** (n - 1) * math.sqrt(p1 * (1.0 - p1))
    term2 = (
        inst.prior_2
        * base ** (2 * n - 1)
        * (math.sqrt((1.0 - p1) * c2) - s_eff * math.sqrt(p1))
    )
    return term1 + term2


def overlap_ladder(s: float, n: int) -> tuple[float, ...]:
    """Arriving-pair overlaps (s, s**((N-1)/N), ..., s**(1/N)) along a chain
    in which every receiver spends the same budget s**(1/N)."""
    return tuple(s ** ((n - k) / n) for k in range(n))


def equal_prior_jbg(s: float, n: int) -> StrategyResult:
    """Symmetric equal-prior solution p1 = p2 = (1 + sqrt(1 - s**(2/N))) / 2.

    Satisfies the interior stationarity conditions for equal priors at every
    overlap, and is the global optimum below a chain-length-dependent overlap
    threshold (see ``optimize.find_sb``); above it, the interior optimum
    becomes asymmetric and this formula is only a local maximum. The result
    is computed unconditionally and labeled JBG_SYMMETRIC_ANALYTIC.
    """
    s = _check_unit_interval("s", s)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"n must be an int >= 1, got {n!r}")
    p = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - s ** (2.0 / n))))
    return StrategyResult(
        stages=tuple(SuccessPair(p, p) for _ in range(n)),
        overlaps=overlap_ladder(s, n),
        joint_success=p**n,
        strategy=Strategy.JBG_SYMMETRIC_ANALYTIC,
    )


def helstrom_bound(overlap: float, eta1: float, eta2: float) -> float:
    """Optimal single-shot average success (1 + sqrt(1 - 4 eta1 eta2 s^2))/2."""
    overlap = _check_unit_interval("overlap", overlap)
    disc = max(0.0, 1.0 - 4.0 * eta1 * eta2 * overlap * overlap)
    return 0.5 * (1.0 + math.sqrt(disc))


def helstrom_success_pair(overlap: float, eta1: float, eta2: float) -> SuccessPair:
    """Conditional success probabilities of the optimal single-shot measurement.

        p_i = (1 + (1 - 2 eta_j s^2) / sqrt(1 - 4 eta1 eta2 s^2)) / 2

    The pair saturates distinguishability(p1, p2) = overlap and averages to
    ``helstrom_bound``. The 0/0 limit at overlap = 1 with equal priors is
    resolved by continuity as p1 = p2 = 1/2.
    """
    overlap = _check_unit_interval("overlap", overlap)
    s2 = overlap * overlap
    disc = 1.0 - 4.0 * eta1 * eta2 * s2
    if disc <= 0.0:
        # Only reachable at overlap = 1 with equal priors: pure guessing.
        return SuccessPair(0.5, 0.5)
    root = math.sqrt(disc)
    p1 = 0.5 * (1.0 + (1.0 - 2.0 * eta2 * s2) / root)
    p2 = 0.5 * (1.0 + (1.0 - 2.0 * eta1 * s2) / root)
    return SuccessPair(min(max(p1, 0.0), 1.0), min(max(p2, 0.0), 1.0))


def individual_greedy(inst: DiscriminationInstance) -> StrategyResult:
    """Chain in which every receiver maximizes its own average success.

    Each receiver applies the optimal single-shot measurement for the true
    priors at the per-receiver budget s**(1/N). This maximizes every
    receiver's individual average success but is generally suboptimal for the
    probability that all receivers succeed simultaneously.
    """
    pair = helstrom_success_pair(inst.effective_overlap, inst.prior_1, inst.prior_2)
    n = inst.n_receivers
    joint = inst.prior_1 * pair.p1**n + inst.prior_2 * pair.p2**n
    return StrategyResult(
        stages=tuple(pair for _ in range(n)),
        overlaps=overlap_ladder(inst.overlap, n),
        joint_success=joint,
        strategy=Strategy.INDIVIDUAL_GREEDY,
    )


def boundary_solution(inst: DiscriminationInstance) -> StrategyResult:
    """Better of the two pinned strategies p2 = 1 or p1 = 1 at every stage.

    Pinning p2 = 1 forces p1 = 1 - s**(2/N) through the constraint (and
    mirrored for p1 = 1), giving joint successes
    eta1 * (1 - s**(2/N))**N + eta2 and eta1 + eta2 * (1 - s**(2/N))**N.
    Ties (equal priors) resolve to the p2 = 1 branch.
    """
    n = inst.n_receivers
    q = 1.0 - inst.overlap ** (2.0 / n)
    joint_pin2 = inst.prior_1 * q**n + inst.prior_2
    joint_pin1 = inst.prior_1 + inst.prior_2 * q**n
    if joint_pin1 > joint_pin2:
        pair = SuccessPair(1.0, q)
        joint = joint_pin1
    else:
        pair = SuccessPair(q, 1.0)
        joint = joint_pin2
    return StrategyResult(
        stages=tuple(pair for _ in range(n)),
        overlaps=overlap_ladder(inst.overlap, n),
        joint_success=joint,
        strategy=Strategy.BOUNDARY,
    )

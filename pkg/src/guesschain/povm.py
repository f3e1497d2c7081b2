"""Explicit 2x2 detection operators realizing a chain strategy.

Each receiver's measurement is described by two detection (Kraus) operators
B1, B2 with POVM elements Pi_i = B_i^dag B_i. For an incoming pair
(|psi1>, |psi2>) and outgoing pair (|v1>, |v2>) the pure-output measurement is
fixed by its action on the incoming (generally non-orthogonal) basis:

    B1 |psi1> = sqrt(p1)     |v1>      B1 |psi2> = sqrt(1 - p2) |v2>
    B2 |psi1> = sqrt(1 - p1) |v1>      B2 |psi2> = sqrt(p2)     |v2>

i.e. the outcome label carries the receiver's guess while the output state
depends only on which state came in, so downstream receivers again face two
pure states. Expanding each B_i in the reciprocal (dual) basis of
{|psi1>, |psi2>} makes the operators unique whenever the incoming pair is
linearly independent. Completeness B1^dag B1 + B2^dag B2 = I then holds
exactly when the overlap budget is respected:

    distinguishability(p1, p2) * <v1|v2> = <psi1|psi2>

Overlaps are taken real and non-negative throughout; states are compared up
to a global phase, with the canonical representative fixing the first nonzero
amplitude real positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DiscriminationInstance,
    StrategyResult,
    SuccessPair,
    distinguishability,
)

__all__ = [
    "DegenerateInput",
    "InfeasibleStage",
    "MeasurementStage",
    "QubitState",
    "build_chain",
    "build_stage",
    "make_state_pair",
]

FEASIBILITY_ATOL = 1e-9
STAGE_ATOL = 1e-10


class InfeasibleStage(ValueError):
    """Requested success pair violates the stage's overlap budget."""


class DegenerateInput(ValueError):
    """Identical input states cannot be mapped to distinct outputs."""


@dataclass(frozen=True)
class QubitState:
    """Pure qubit state a|0> + b|1>, normalized within 1e-12."""

    amplitudes: tuple[complex, complex]

    def __post_init__(self) -> None:
        a, b = self.amplitudes
        norm_sq = abs(a) ** 2 + abs(b) ** 2
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |a|^2 + |b|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", (complex(a), complex(b)))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def canonical(self) -> "QubitState":
        """Phase-fixed representative: first nonzero amplitude real positive."""
        vec = self.vector
        pivot = vec[0] if abs(vec[0]) > 1e-15 else vec[1]
        vec = vec * (abs(pivot) / pivot)
        return QubitState((complex(vec[0]), complex(vec[1])))

    def fidelity(self, other: "QubitState") -> float:
        """|<self|other>|^2; phase-insensitive equality measure."""
        return float(abs(np.vdot(self.vector, other.vector)) ** 2)


def make_state_pair(overlap: float) -> tuple[QubitState, QubitState]:
    """Canonical real-amplitude pair symmetric about |0> with given overlap.

    |psi1> = cos(a)|0> + sin(a)|1>, |psi2> = cos(a)|0> - sin(a)|1>, where
    cos(2a) = overlap.
    """
    if not (math.isfinite(overlap) and -1e-12 <= overlap <= 1.0 + 1e-12):
        raise ValueError(f"overlap must lie in [0, 1], got {overlap!r}")
    alpha = 0.5 * math.acos(min(max(overlap, -1.0), 1.0))
    c, s = math.cos(alpha), math.sin(alpha)
    return QubitState((c, s)), QubitState((c, -s))


@dataclass(frozen=True)
class MeasurementStage:
    """One receiver's detection operators plus the pure output pair."""

    detectors: tuple[np.ndarray, np.ndarray]
    outputs: tuple[QubitState, QubitState]
    success: SuccessPair
    in_overlap: float
    out_overlap: float

    def __post_init__(self) -> None:
        frozen = []
        for det in self.detectors:
            arr = np.array(det, dtype=complex)
            if arr.shape != (2, 2):
                raise ValueError(f"detectors must be 2x2, got shape {arr.shape}")
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "detectors", tuple(frozen))

    def validate(self) -> None:
        """Check completeness, positivity, action, and output geometry.

        Raises ValueError on the first violated invariant. Construction via
        ``build_stage`` always passes; this re-check exists so that stages
        arriving from serialization or tests can be trusted.
        """
        b1, b2 = self.detectors
        gram = b1.conj().T @ b1 + b2.conj().T @ b2
        defect = float(np.max(np.abs(gram - np.eye(2))))
        if defect > STAGE_ATOL:
            raise ValueError(f"completeness violated: max |B1+B1 + B2+B2 - I| = {defect:.3e}")
        for i, det in enumerate((b1, b2), start=1):
            eigs = np.linalg.eigvalsh(det.conj().T @ det)
            if float(eigs.min()) < -1e-12:
                raise ValueError(f"POVM element {i} not positive: min eig {eigs.min():.3e}")
        psi1, psi2 = make_state_pair(self.in_overlap)
        expected = (
            (b1 @ psi1.vector, self.success.p1, self.outputs[0]),
            (b2 @ psi1.vector, 1.0 - self.success.p1, self.outputs[0]),
            (b1 @ psi2.vector, 1.0 - self.success.p2, self.outputs[1]),
            (b2 @ psi2.vector, self.success.p2, self.outputs[1]),
        )
        for out_vec, weight, target in expected:
            norm = float(np.linalg.norm(out_vec))
            if abs(norm - math.sqrt(max(weight, 0.0))) > STAGE_ATOL:
                raise ValueError(
                    f"action amplitude mismatch: |B psi| = {norm!r}, expected sqrt({weight!r})"
                )
            if norm > 1e-8:
                fid = float(abs(np.vdot(target.vector, out_vec / norm)) ** 2)
                if fid < 1.0 - STAGE_ATOL:
                    raise ValueError(f"output state mismatch: fidelity {fid!r}")
        out_overlap = abs(np.vdot(self.outputs[0].vector, self.outputs[1].vector))
        if abs(out_overlap - self.out_overlap) > STAGE_ATOL:
            raise ValueError(
                f"output overlap {out_overlap!r} differs from declared {self.out_overlap!r}"
            )


def _perp(v: np.ndarray) -> np.ndarray:
    """The state orthogonal to v (2-vector)."""
    return np.array([-np.conj(v[1]), np.conj(v[0])])


def _dual_basis(psi1: np.ndarray, psi2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reciprocal basis (d1, d2) with <d_i|psi_j> = delta_ij.

    d1 is the state orthogonal to psi2 rescaled against psi1, and vice versa;
    these are exactly the expansion bras of the stage construction above.
    """
    d1 = _perp(psi2)
    d2 = _perp(psi1)
    return d1 / np.vdot(d1, psi1).conj(), d2 / np.vdot(d2, psi2).conj()


def build_stage(
    in_pair: tuple[QubitState, QubitState],
    success: SuccessPair,
    out_overlap: float,
) -> MeasurementStage:
    """Detection operators realizing ``success`` on ``in_pair``.

    The outgoing pair is the canonical pair of overlap ``out_overlap`` (the
    output orientation is free; fixing it keeps stages composable and tests
    deterministic). Raises InfeasibleStage when
    distinguishability(p1, p2) * out_overlap deviates from the input overlap
    by more than 1e-9, and DegenerateInput when identical input states are
    asked to produce distinct outputs.
    """
    if not (math.isfinite(out_overlap) and -1e-12 <= out_overlap <= 1.0 + 1e-12):
        raise ValueError(f"out_overlap must lie in [0, 1], got {out_overlap!r}")
    out_overlap = min(max(out_overlap, 0.0), 1.0)
    psi1, psi2 = in_pair[0].vector, in_pair[1].vector
    in_overlap = float(abs(np.vdot(psi1, psi2)))
    p1, p2 = success

    if in_overlap >= 1.0 - 1e-12:
        # Identical inputs: only an output-merging stage is possible, and the
        # budget (distinguishability must equal 1) forces p2 = 1 - p1.
        if out_overlap < 1.0 - 1e-12:
            raise DegenerateInput(
                "identical input states cannot be split into distinct outputs"
            )
        if abs(p2 - (1.0 - p1)) > FEASIBILITY_ATOL:
            raise InfeasibleStage(
                f"success pair {success} incompatible with identical inputs "
                "(needs p2 = 1 - p1)"
            )
        v = make_state_pair(1.0)[0].vector
        rot = np.outer(v, psi1.conj()) + np.outer(_perp(v), _perp(psi1).conj())
        b1 = math.sqrt(p1) * rot
        b2 = math.sqrt(1.0 - p1) * rot
        stage = MeasurementStage(
            detectors=(b1, b2),
            outputs=make_state_pair(1.0),
            success=success,
            in_overlap=in_overlap,
            out_overlap=1.0,
        )
        stage.validate()
        return stage

    required = distinguishability(p1, p2) * out_overlap
    if abs(required - in_overlap) > FEASIBILITY_ATOL:
        raise InfeasibleStage(
            f"overlap budget violated: distinguishability * t_out = {required!r} "
            f"but t_in = {in_overlap!r}"
        )
    v1, v2 = make_state_pair(out_overlap)
    d1, d2 = _dual_basis(psi1, psi2)
    b1 = math.sqrt(p1) * np.outer(v1.vector, d1.conj()) + math.sqrt(
        max(0.0, 1.0 - p2)
    ) * np.outer(v2.vector, d2.conj())
    b2 = math.sqrt(max(0.0, 1.0 - p1)) * np.outer(v1.vector, d1.conj()) + math.sqrt(
        p2
    ) * np.outer(v2.vector, d2.conj())
    stage = MeasurementStage(
        detectors=(b1, b2),
        outputs=(v1, v2),
        success=success,
        in_overlap=in_overlap,
        out_overlap=out_overlap,
    )
    stage.validate()
    return stage


def build_chain(inst: DiscriminationInstance, result: StrategyResult) -> list[MeasurementStage]:
    """Measurement stages realizing ``result`` along the whole chain.

    Stage k consumes the canonical pair of overlap result.overlaps[k] and
    emits the canonical pair of the next overlap; the final receiver merges
    its outputs (out_overlap = 1), since nothing downstream constrains it.
    """
    if len(result.stages) != inst.n_receivers or len(result.overlaps) != inst.n_receivers:
        raise ValueError(
            f"strategy has {len(result.stages)} stages for {inst.n_receivers} receivers"
        )
    if abs(result.overlaps[0] - inst.overlap) > 1e-9:
        raise ValueError(
            f"strategy entry overlap {result.overlaps[0]!r} differs from instance "
            f"overlap {inst.overlap!r}"
        )
    stages = []
    for k, success in enumerate(result.stages):
        t_in = result.overlaps[k]
        t_out = result.overlaps[k + 1] if k + 1 < inst.n_receivers else 1.0
        try:
            stages.append(build_stage(make_state_pair(t_in), success, t_out))
        except (InfeasibleStage, DegenerateInput) as exc:
            raise type(exc)(f"stage {k + 1} of {inst.n_receivers}: {exc}") from exc
    return stages

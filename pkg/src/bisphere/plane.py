"""Flat-space limit of the sphere model.

Two threads meet here.  First, stripping the reflection dressing from the
first-order symmetries leaves three bare rotation flows; their brackets
close up to a reflection-weighted correction term, exactly, on the sphere
quotient.  Second, growing the polar coupling like the square of a radius
while recentering the energy contracts the sphere spectrum onto that of a
planar two-mode reflection oscillator; the finite-radius deviation is a
single exact rational number proportional to 1/r^2.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bases import SphereQuotient
from .laurent import ModelParams, format_rational
from .linop import LinOp, build_matrix
from .operators import Op
from .racah import ladder_rep
from .reporting import Recorder
from .sphere import angular, energy

_AXES = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


def rotation_flow(k: int) -> Op:
    """Bare rotation generator about axis k: s_i D_j - s_j D_i with the
    reflection-corrected derivatives but no reflection factor attached."""
    i, j = _AXES[k]
    return angular(i, j)


def rotation_suite(
    params: ModelParams,
    degree: int,
    recorder: Optional[Recorder] = None,
) -> Tuple[Recorder, Dict[int, LinOp]]:
    """Exact bracket relations of the bare rotation flows on the quotient.

    [M_i, M_j] = -M_k (1 + 2 mu_k R_k) for cyclic (i, j, k), each flow
    commutes with its own reflection and anticommutes with the other two.
    """
    rec = recorder if recorder is not None else Recorder()
    basis = SphereQuotient(degree)
    flows = {k: build_matrix(rotation_flow(k), basis, params) for k in (1, 2, 3)}
    refls = {k: build_matrix(f"R{k}", basis, params) for k in (1, 2, 3)}

    for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        rec.zero(
            f"rotation.bracket.{i}{j}",
            f"[M{i}, M{j}] + M{k} + 2 mu{k} M{k} R{k} = 0",
            lambda i=i, j=j, k=k: (
                flows[i] @ flows[j]
                - flows[j] @ flows[i]
                + flows[k]
                + (flows[k] @ refls[k]).scaled(2 * params.mu(k))
            ),
        )
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i == j:
                rec.zero(
                    f"rotation.refl.{i}.{i}",
                    f"[M{i}, R{i}] = 0",
                    lambda i=i: flows[i] @ refls[i] - refls[i] @ flows[i],
                )
            else:
                rec.zero(
                    f"rotation.refl.{i}.{j}",
                    f"{{M{i}, R{j}}} = 0",
                    lambda i=i, j=j: flows[i] @ refls[j] + refls[j] @ flows[i],
                )
    return rec, flows


# --- planar two-mode ladder -------------------------------------------------


class PlaneModel:
    """Two reflection oscillator modes on the plane, as dense floats."""

    def __init__(self, params: ModelParams, cutoff: int):
        if cutoff < 3:
            raise ValueError("cutoff too small for an interior window")
        self.params = params
        self.cutoff = cutoff
        size = cutoff + 1
        self.size = size
        self.dim = size**2
        reps = [ladder_rep(float(params.mu(i)), size) for i in (1, 2)]
        eye = np.eye(size)
        up1 = np.kron(reps[0]["raise"], eye)
        dn1 = np.kron(reps[0]["lower"], eye)
        up2 = np.kron(eye, reps[1]["raise"])
        dn2 = np.kron(eye, reps[1]["lower"])
        num1 = np.kron(reps[0]["number"], eye)
        num2 = np.kron(eye, reps[1]["number"])
        # 2 (n1 + n2 + mu1 + mu2 + 1) on the diagonal
        self.energy = 2.0 * (num1 + num2)
        self.imbalance = 2.0 * (num1 - num2)
        self.transfer = up1 @ dn2 - dn1 @ up2

    def window_columns(self, margin: int = 2) -> np.ndarray:
        top = self.size - margin
        idx = [a * self.size + b for a in range(top) for b in range(top)]
        return np.array(idx, dtype=int)

    def energy_level(self, total_occupation: int) -> Fraction:
        """Exact diagonal energy at n1 + n2 = total_occupation."""
        return 2 * (total_occupation + self.params.mu1 + self.params.mu2 + 1)


def plane_suite(
    params: ModelParams,
    cutoff: int,
    recorder: Optional[Recorder] = None,
    tolerance: float = 1e-12,
) -> Tuple[Recorder, PlaneModel]:
    """Planar model checks: the two conserved flows commute with the
    energy on the interior occupation window."""
    rec = recorder if recorder is not None else Recorder()
    model = PlaneModel(params, cutoff)
    cols = model.window_columns()

    n = np.arange(model.size)
    expected = 2.0 * (
        n[:, None] + n[None, :] + float(params.mu1 + params.mu2) + 1.0
    ).reshape(model.dim)
    rec.near_zero(
        "plane.energy.diagonal",
        "energy is diagonal with entries 2 (n1 + n2 + mu1 + mu2 + 1)",
        lambda: float(
            np.max(np.abs(model.energy - np.diag(expected)))
        ),
        tolerance,
    )
    rec.near_zero(
        "plane.bracket.energy.imbalance",
        "[energy, mode imbalance] = 0",
        lambda: float(
            np.max(
                np.abs(
                    model.energy @ model.imbalance[:, cols]
                    - model.imbalance @ model.energy[:, cols]
                )
            )
        ),
        tolerance,
    )
    rec.near_zero(
        "plane.bracket.energy.transfer",
        "[energy, mode transfer] = 0",
        lambda: float(
            np.max(
                np.abs(
                    model.energy @ model.transfer[:, cols]
                    - model.transfer @ model.energy[:, cols]
                )
            )
        ),
        tolerance,
    )
    rec.near_zero(
        "plane.transfer.antisymmetry",
        "mode transfer is antisymmetric",
        lambda: float(np.max(np.abs(model.transfer + model.transfer.T))),
        tolerance,
    )
    return rec, model


# --- exact contraction ------------------------------------------------------


def contracted_energy(
    params: ModelParams, radius: Fraction, level: int, e3: int
) -> Fraction:
    """Sphere energy with the polar coupling set to radius^2, recentered
    and rescaled for the flat limit: (E - r^4 + r^2 (1 - 2 e3)) / r^2."""
    r2 = Fraction(radius) ** 2
    swollen = ModelParams(params.mu1, params.mu2, r2)
    e = energy(swollen, level)
    return (e - r2 * r2 + r2 * (1 - 2 * e3)) / r2


def limit_energy(params: ModelParams, level: int, e3: int) -> Fraction:
    """Large-radius limit of the contracted energy."""
    return 2 * (level + params.mu1 + params.mu2 + 1 - e3)


def contraction_deviation(params: ModelParams, radius: Fraction, level: int) -> Fraction:
    """The exact finite-radius correction (S^2 + S) / r^2 with
    S = level + mu1 + mu2; independent of the polar parity label."""
    s = level + params.mu1 + params.mu2
    return (s * s + s) / (Fraction(radius) ** 2)


def contraction_checks(
    params: ModelParams,
    radii: Sequence[Fraction | int | str],
    level: int,
    e3: int,
    recorder: Optional[Recorder] = None,
) -> Recorder:
    """Contraction identity at one level and polar parity label.

    For each radius the contracted energy minus its limit must equal
    (S^2 + S) / r^2 exactly.  The limit value itself is matched against
    the planar ladder diagonal at total occupation level - e3 whenever
    that occupation is admissible.
    """
    rec = recorder if recorder is not None else Recorder()
    if e3 not in (0, 1):
        raise ValueError("polar parity label must be 0 or 1")
    if level < 0:
        raise ValueError("level must be nonnegative")
    for radius in radii:
        r = Fraction(radius)
        gap = contracted_energy(params, r, level, e3) - limit_energy(
            params, level, e3
        )
        want = contraction_deviation(params, r, level)
        rec.claim(
            f"contraction.N{level}.e{e3}.r{r}",
            f"contracted energy gap at level {level}, parity {e3}, "
            f"radius {r} equals (S^2+S)/r^2",
            lambda gap=gap, want=want: (
                gap == want,
                "0" if gap == want else f"off by {format_rational(gap - want)}",
            ),
        )
    occupation = level - e3
    cid = f"contraction.limit.N{level}.e{e3}"
    if occupation < 0:
        rec.skipped(
            cid,
            f"limit of level {level}, parity {e3} sits in the plane spectrum",
            "below the plane ground state",
        )
    else:
        lim = limit_energy(params, level, e3)
        plane_value = 2 * (occupation + params.mu1 + params.mu2 + 1)
        rec.claim(
            cid,
            f"limit of level {level}, parity {e3} equals the plane energy "
            f"at occupation {occupation}",
            lambda lim=lim, plane_value=plane_value: (
                lim == plane_value,
                "0"
                if lim == plane_value
                else f"off by {format_rational(lim - plane_value)}",
            ),
        )
    return rec


def contraction_suite(
    params: ModelParams,
    radii: Sequence[Fraction | int | str],
    max_level: int,
    recorder: Optional[Recorder] = None,
) -> Recorder:
    """Contraction identity swept over all levels up to max_level and
    both polar parity labels."""
    rec = recorder if recorder is not None else Recorder()
    for level in range(max_level + 1):
        for e3 in (0, 1):
            contraction_checks(params, radii, level, e3, rec)
    return rec

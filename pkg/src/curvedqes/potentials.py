"""Potential families of the curved-space oscillator and its two QES extension families.

A potential is stored as coefficient data: the centrifugal term L(L+1)/r^2,
the oscillator part lambda*A - lambda*A/f^2, and an extension tail that is a
polynomial in f^2 (family 1, lambda > 0) or in 1/f^2 (family 2, lambda < 0),

    family 1:  V = L(L+1)/r^2 + lam*A - lam*A/f^2 + lam * sum_k B_k f^(2k)
    family 2:  V = L(L+1)/r^2 + lam*A - lam*A/f^2 - lam * sum_k B_k f^(-2k-2)

with k = 1..2m.  For lambda < 0 the minus sign in front of the family-2 sum
makes the tail coefficients enter as +|lambda|*B_k/f^(2k+2).  Coefficients are
kept as ints/Fractions whenever the inputs allow, so the constrained cases can
be checked by exact arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
import numpy as np

from .errors import DomainError, DegenerateCurvature, SignMismatch, InvalidOrder
from .exactmath import QUARTER, Scalar, canonical, exact_div, exact_sqrt


class Family(IntEnum):
    BASE = 0
    FAMILY1 = 1
    FAMILY2 = 2


@dataclass(frozen=True)
class PotentialSpec:
    """Coefficient data for one potential; immutable and thread-safe."""

    family: Family
    L: Scalar
    A: Scalar
    lam: Scalar
    B: tuple = ()
    m: int | None = None
    shift: Scalar = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "B", tuple(self.B))
        if self.lam == 0:
            raise DegenerateCurvature("lambda = 0 is not supported")
        if self.L < 0:
            raise ValueError(f"L = {self.L} < 0 is outside the supported range")
        if self.family is Family.BASE:
            if self.B or self.m is not None:
                raise ValueError("base oscillator takes no extension coefficients")
            return
        if self.m is None or self.m < 1:
            raise InvalidOrder(f"extension order m = {self.m} must be >= 1")
        if len(self.B) != 2 * self.m:
            raise ValueError(f"expected {2 * self.m} tail coefficients, got {len(self.B)}")
        if self.B[-1] <= 0:
            raise ValueError(f"B_2m = {self.B[-1]} must be positive")
        if self.family is Family.FAMILY1 and self.lam < 0:
            raise SignMismatch("family 1 requires lambda > 0")
        if self.family is Family.FAMILY2 and self.lam > 0:
            raise SignMismatch("family 2 requires lambda < 0")

    @property
    def domain_max(self) -> float:
        if self.lam > 0:
            return math.inf
        return 1.0 / math.sqrt(-float(self.lam))


def eval_potential(spec: PotentialSpec, r):
    """Evaluate the potential at radius r (scalar or array)."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= spec.domain_max):
        raise DomainError(
            f"radius outside the open domain (0, {spec.domain_max}) for lambda={spec.lam}"
        )
    lam = float(spec.lam)
    L = float(spec.L)
    A = float(spec.A)
    f2 = 1.0 + lam * arr * arr
    v = L * (L + 1.0) / (arr * arr) + lam * A - lam * A / f2 + float(spec.shift)
    if spec.family is Family.FAMILY1:
        for k, Bk in enumerate(spec.B, start=1):
            v = v + lam * float(Bk) * f2 ** k
    elif spec.family is Family.FAMILY2:
        for k, Bk in enumerate(spec.B, start=1):
            v = v - lam * float(Bk) / f2 ** (k + 1)
    return float(v) if np.isscalar(r) or v.ndim == 0 else v


def family1_coefficients(m: int, L: Scalar, B2m: Scalar):
    """Reduced coefficient set (A, B_1..B_2m) of the order-m family-1 QES potential."""
    if m < 1:
        raise InvalidOrder(f"m = {m} must be >= 1")
    if B2m <= 0:
        raise ValueError(f"B_2m = {B2m} must be positive")
    s = exact_sqrt(B2m)
    A = canonical((2 * m + 1) * (2 * m - 1) * QUARTER)
    low = -B2m - (2 * L + 1) * s
    B = [canonical(b) for b in [low] * (m - 1) + [-B2m - (2 * L + 4 * m + 3) * s] + [B2m] * m]
    return A, B


def family2_coefficients(m: int, L: Scalar, B2m: Scalar):
    """Reduced coefficient set (A, B_1..B_2m) of the order-m family-2 QES potential."""
    if m < 1:
        raise InvalidOrder(f"m = {m} must be >= 1")
    if B2m <= 0:
        raise ValueError(f"B_2m = {B2m} must be positive")
    s = exact_sqrt(B2m)
    A = canonical(-B2m - (2 * L + 1) * s + (2 * m + 1) * (2 * m + 3) * QUARTER)
    low = -B2m - (2 * L + 1) * s
    B = [canonical(b) for b in [low] * (m - 1) + [B2m - 2 * (2 * m + 1) * s] + [B2m] * m]
    return A, B


def reduced_spec(family: int, m: int, L: Scalar, B2m: Scalar, lam: Scalar) -> PotentialSpec:
    """Build the reduced QES PotentialSpec for the given family and order."""
    fam = Family(family)
    if fam is Family.FAMILY1:
        if lam <= 0:
            raise SignMismatch("family 1 requires lambda > 0")
        A, B = family1_coefficients(m, L, B2m)
    elif fam is Family.FAMILY2:
        if lam >= 0:
            raise SignMismatch("family 2 requires lambda < 0")
        A, B = family2_coefficients(m, L, B2m)
    else:
        raise ValueError("reduced_spec applies to the extension families only")
    return PotentialSpec(family=fam, m=m, L=L, A=A, B=tuple(B), lam=lam)


@dataclass(frozen=True)
class OscillatorSpec:
    """Base oscillator with strength beta on a space of curvature -lambda."""

    beta: Scalar
    lam: Scalar

    def __post_init__(self):
        if self.lam == 0:
            raise DegenerateCurvature("lambda = 0 is not supported")

    @property
    def A(self) -> Scalar:
        ratio = exact_div(self.beta, self.lam)
        return ratio * (ratio + 1)


def oscillator_from_beta(beta: Scalar, lam: Scalar, L: Scalar = 0) -> PotentialSpec:
    """Base-oscillator spec with A = (beta/lambda)(beta/lambda + 1)."""
    osc = OscillatorSpec(beta, lam)
    return PotentialSpec(family=Family.BASE, L=L, A=osc.A, lam=lam)


def spec_to_dict(spec: PotentialSpec) -> dict:
    """JSON-ready dict with the fixed field names {family, m, L, lambda, A, B, shift}."""
    return {
        "family": int(spec.family),
        "m": spec.m,
        "L": float(spec.L),
        "lambda": float(spec.lam),
        "A": float(spec.A),
        "B": [float(b) for b in spec.B],
        "shift": float(spec.shift),
    }


def spec_from_dict(data: dict) -> PotentialSpec:
    """Inverse of spec_to_dict."""
    return PotentialSpec(
        family=Family(data["family"]),
        m=data.get("m"),
        L=data["L"],
        A=data["A"],
        lam=data["lambda"],
        B=tuple(data.get("B", ())),
        shift=data.get("shift", 0),
    )


def spec_to_json(spec: PotentialSpec) -> str:
    return json.dumps(spec_to_dict(spec))


def spec_from_json(text: str) -> PotentialSpec:
    return spec_from_dict(json.loads(text))

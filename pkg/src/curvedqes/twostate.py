"""Two-eigenstate construction for the extended oscillator families.

Two routes produce the same closed-form data:

* the explicit step systems for orders m = 1, 2: a superpotential ansatz is
  matched against the potential through the Riccati equation, which fixes the
  ansatz parameters and the ground-state energy and leaves constraint
  conditions among the potential coefficients; repeating the match on the
  partner gives a second constraint set, and compatibility of the two sets
  pins the coefficients down to the reduced QES form;

* the generating-function route, valid for every order m >= 1: a pair
  (W+, W-) satisfying f W+' = W+ W- + (E1 - E0) yields both superpotentials
  as W = (W+ - W-)/2, W' = (W+ + W-)/2, and with them the potential, the two
  energies, both wavefunctions, and the node of the excited state.

All formulas are arranged so int/Fraction inputs with a rational sqrt(B_2m)
propagate exactly; the two routes can therefore be compared by equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidOrder, SignMismatch, UnsupportedOrder
from .exactmath import HALF, Scalar, canonical, exact_div, exact_sqrt, is_exact
from .potentials import Family, PotentialSpec, reduced_spec, spec_to_dict
from .susy import (
    GeneratingPair,
    Superpotential,
    WavefunctionForm,
    apply_raising,
    wavefunction_from_superpotential,
)

MAX_ORDER = 60  # binomial growth bound for the prefactor expansion


@dataclass(frozen=True)
class AnsatzParams:
    """Superpotential ansatz parameters; sigma is None for order 1."""

    xi: Scalar
    eta: Scalar
    zeta: Scalar
    sigma: Scalar | None = None


@dataclass(frozen=True)
class CdsiStepResult:
    """One step of the conditional shape-invariance construction."""

    family: Family
    m: int
    step: int
    L: Scalar
    A: Scalar
    B: tuple
    lam: Scalar
    params: AnsatzParams
    ground_energy: Scalar
    constraints: tuple

    def superpotential(self) -> Superpotential:
        p = self.params
        if self.family is Family.FAMILY1:
            exps = (1, 3)
        else:
            exps = (-3, -5)
        terms = [(p.xi, -1, 1), (p.eta, 1, -1), (p.zeta, 1, exps[0])]
        if p.sigma is not None:
            terms.append((p.sigma, 1, exps[1]))
        return Superpotential(tuple(terms), self.lam)

    def max_constraint_residual(self) -> float:
        return max(abs(float(v)) for _, v in self.constraints)


def _validate_family_order(family, m, lam, allowed=None):
    fam = Family(family)
    if fam is Family.BASE:
        raise ValueError("the QES construction applies to the extension families")
    if allowed is not None and m not in allowed:
        raise UnsupportedOrder(f"explicit step systems cover m in {allowed}, got m={m}")
    if fam is Family.FAMILY1 and lam <= 0:
        raise SignMismatch("family 1 requires lambda > 0")
    if fam is Family.FAMILY2 and lam >= 0:
        raise SignMismatch("family 2 requires lambda < 0")
    return fam


def solve_first_step(family, m: int, L, A, B: Sequence, lam) -> CdsiStepResult:
    """Match the order-m ansatz against V(r) - E0; return parameters and constraints.

    The constraint residuals vanish exactly when (A, B) satisfies the
    first-step conditions of the chosen family.
    """
    fam = _validate_family_order(family, m, lam, allowed=(1, 2))
    B = tuple(B)
    if len(B) != 2 * m:
        raise ValueError(f"expected {2 * m} tail coefficients, got {len(B)}")
    if B[-1] <= 0:
        raise ValueError("B_2m must be positive")
    if fam is Family.FAMILY1:
        params, e0, cons = _family1_step1(m, L, A, B, lam)
    else:
        params, e0, cons = _family2_step1(m, L, A, B, lam)
    return CdsiStepResult(fam, m, 1, L, A, B, lam, params, e0, cons)


def solve_second_step(family, m: int, first: CdsiStepResult) -> CdsiStepResult:
    """Repeat the match on the partner potential; constraints change."""
    fam = _validate_family_order(family, m, first.lam, allowed=(1, 2))
    if first.step != 1 or fam is not first.family or m != first.m:
        raise ValueError("second step must continue the matching first step")
    L, A, B, lam = first.L, first.A, first.B, first.lam
    if fam is Family.FAMILY1:
        params, e0, cons = _family1_step2(m, L, A, B, lam, first.params)
    else:
        params, e0, cons = _family2_step2(m, L, A, B, lam, first.params)
    return CdsiStepResult(fam, m, 2, L, A, B, lam, params, e0, cons)


def compatibility(family, m: int, L, B2m, lam) -> PotentialSpec:
    """Reduced spec on which both step constraint sets hold simultaneously."""
    _validate_family_order(family, m, lam, allowed=(1, 2))
    return reduced_spec(int(Family(family)), m, L, B2m, lam)


# ---------------------------------------------------------------------------
# explicit step systems, m = 1 and 2


def _family1_step1(m, L, A, B, lam):
    if m == 1:
        B1, B2 = B
        s = exact_sqrt(B2)
        xi = -L - 1
        zeta = lam * s
        eta_ratio = exact_div(B1, 2 * s) + HALF * s + L + 2
        eta = lam * eta_ratio
        e0 = (
            lam * (B1 + B2 + exact_div(3 * B1, 2 * s) + Fraction(9, 2) * s + 5)
            + lam * L * (exact_div(B1, s) + 3 * s + 5)
            + lam * L * L
        )
        cons = (("A", A - eta_ratio * (eta_ratio + 1)),)
        return AnsatzParams(xi, eta, zeta), e0, cons
    B1, B2, B3, B4 = B
    s = exact_sqrt(B4)
    core = B2 + HALF * B3 + Fraction(3, 4) * B4 - exact_div(B3 * B3, 4 * B4)
    xi = -L - 1
    sigma = lam * s
    zeta = lam * exact_div(B3 + B4, 2 * s)
    eta_ratio = exact_div(core, 2 * s) + L + 3
    eta = lam * eta_ratio
    e0 = (
        exact_div(lam, 2 * B4) * (core * (B3 + B4) + 16 * B4)
        + exact_div(lam, 2 * s)
        * (3 * B2 + Fraction(13, 2) * B3 + Fraction(29, 4) * B4 - exact_div(3 * B3 * B3, 4 * B4))
        + lam
        * L
        * (
            exact_div(
                B2 + Fraction(3, 2) * B3 + Fraction(7, 4) * B4 - exact_div(B3 * B3, 4 * B4), s
            )
            + 7
        )
        + lam * L * L
    )
    cons = (
        ("A", A - (exact_div(core, 2 * s) + L + 3) * (exact_div(core, 2 * s) + L + 4)),
        ("B1", B1 - (_b1_core(B2, B3, B4) + exact_div(B3 - 2 * B4, s) - 2 * L * s)),
    )
    return AnsatzParams(xi, eta, zeta, sigma), e0, cons


def _family1_step2(m, L, A, B, lam, first: AnsatzParams):
    if m == 1:
        B1, B2 = B
        s = exact_sqrt(B2)
        xi = -L - 2
        eta = first.eta + 3 * lam
        e0 = (
            lam * (B1 + B2 + exact_div(7 * B1, 2 * s) + Fraction(21, 2) * s + 25)
            + lam * L * (exact_div(B1, s) + 3 * s + 13)
            + lam * L * L
        )
        d = exact_div(B1, 2 * s) + HALF * s
        cons = (("A", A - ((d + L + 6) * (d + L + 7) - 8)),)
        return AnsatzParams(xi, eta, first.zeta), e0, cons
    B1, B2, B3, B4 = B
    s = exact_sqrt(B4)
    core = B2 + HALF * B3 + Fraction(3, 4) * B4 - exact_div(B3 * B3, 4 * B4)
    xi = -L - 2
    eta = first.eta + 5 * lam
    e0 = (
        exact_div(lam, 2 * B4) * (core * (B3 + B4) + 80 * B4)
        + exact_div(lam, 2 * s)
        * (
            7 * B2
            + Fraction(33, 2) * B3
            + Fraction(73, 4) * B4
            - exact_div(7 * B3 * B3, 4 * B4)
            + 4 * s
        )
        + lam
        * L
        * (
            exact_div(
                B2 + Fraction(3, 2) * B3 + Fraction(7, 4) * B4 - exact_div(B3 * B3, 4 * B4), s
            )
            + 19
        )
        + lam * L * L
    )
    cons = (
        ("A", A - ((exact_div(core, 2 * s) + L + 9) * (exact_div(core, 2 * s) + L + 10) - 12)),
        ("B1", B1 - (_b1_core(B2, B3, B4) + exact_div(3 * B3 - 4 * B4, s) - 2 * L * s)),
    )
    return AnsatzParams(xi, eta, first.zeta, first.sigma), e0, cons


def _family2_step1(m, L, A, B, lam):
    al = abs(lam)
    if m == 1:
        B1, B2 = B
        s = exact_sqrt(B2)
        xi = -L - 1
        zeta = al * s
        eta_ratio = exact_div(B1, 2 * s) + HALF * s + Fraction(3, 2)  # eta / |lambda|
        eta = al * eta_ratio
        e0 = (
            al * (B1 + B2 + exact_div(3 * B1, 2 * s) + Fraction(9, 2) * s + Fraction(11, 2))
            + al * L * (exact_div(B1, s) + 3 * s + 5)
            + al * L * L
        )
        cons = (
            (
                "A",
                A
                - (
                    (exact_div(B1, 2 * s) + HALF * s + Fraction(3, 2))
                    * (exact_div(B1, 2 * s) - Fraction(3, 2) * s + HALF)
                    - 2 * L * s
                ),
            ),
        )
        return AnsatzParams(xi, eta, zeta), e0, cons
    B1, B2, B3, B4 = B
    s = exact_sqrt(B4)
    core = B2 + HALF * B3 + Fraction(3, 4) * B4 - exact_div(B3 * B3, 4 * B4)
    alt = B2 - Fraction(3, 2) * B3 - Fraction(5, 4) * B4 - exact_div(B3 * B3, 4 * B4)
    xi = -L - 1
    sigma = al * s
    zeta = al * exact_div(B3 + B4, 2 * s)
    eta = al * (exact_div(core, 2 * s) + Fraction(5, 2))
    e0 = (
        exact_div(al, 2 * B4) * (core * (B3 + B4) + 17 * B4)
        + exact_div(al, 2 * s)
        * (3 * B2 + Fraction(13, 2) * B3 + Fraction(29, 4) * B4 - exact_div(3 * B3 * B3, 4 * B4))
        + al
        * L
        * (
            exact_div(
                B2 + Fraction(3, 2) * B3 + Fraction(7, 4) * B4 - exact_div(B3 * B3, 4 * B4), s
            )
            + 7
        )
        + al * L * L
    )
    cons = (
        (
            "A",
            A
            - (
                (exact_div(core, 2 * s) + Fraction(5, 2)) * (exact_div(alt, 2 * s) + Fraction(3, 2))
                - exact_div(L * (B3 + B4), s)
            ),
        ),
        ("B1", B1 - (_b1_core(B2, B3, B4) + exact_div(B3 - 2 * B4, s) - 2 * L * s)),
    )
    return AnsatzParams(xi, eta, zeta, sigma), e0, cons


def _family2_step2(m, L, A, B, lam, first: AnsatzParams):
    al = abs(lam)
    if m == 1:
        B1, B2 = B
        s = exact_sqrt(B2)
        xi = -L - 2
        eta = first.eta + 3 * al
        e0 = (
            al * (B1 + B2 + exact_div(7 * B1, 2 * s) + Fraction(21, 2) * s + Fraction(59, 2))
            + al * L * (exact_div(B1, s) + 3 * s + 13)
            + al * L * L
        )
        cons = (
            (
                "A",
                A
                - (
                    (exact_div(B1, 2 * s) + HALF * s + Fraction(9, 2))
                    * (exact_div(B1, 2 * s) - Fraction(3, 2) * s + Fraction(7, 2))
                    - exact_div(B1, s)
                    + s
                    - 3
                    - 2 * L * s
                ),
            ),
        )
        return AnsatzParams(xi, eta, first.zeta), e0, cons
    B1, B2, B3, B4 = B
    s = exact_sqrt(B4)
    core = B2 + HALF * B3 + Fraction(3, 4) * B4 - exact_div(B3 * B3, 4 * B4)
    alt = B2 - Fraction(3, 2) * B3 - Fraction(5, 4) * B4 - exact_div(B3 * B3, 4 * B4)
    mid = B2 - HALF * B3 - Fraction(1, 4) * B4 - exact_div(B3 * B3, 4 * B4)
    xi = -L - 2
    eta = first.eta + 5 * al
    e0 = (
        exact_div(al, 2 * B4) * (core * (B3 + B4) + 75 * B4)
        + exact_div(al, 2 * s)
        * (
            7 * B2
            + Fraction(33, 2) * B3
            + Fraction(73, 4) * B4
            - exact_div(7 * B3 * B3, 4 * B4)
            + 18 * s
        )
        + exact_div(al * L, s)
        * (
            B2
            + Fraction(3, 2) * B3
            + Fraction(7, 4) * B4
            - exact_div(B3 * B3, 4 * B4)
            + 19 * s
        )
        + al * L * L
    )
    cons = (
        (
            "A",
            A
            - (
                (exact_div(core, 2 * s) + Fraction(15, 2))
                * (exact_div(alt, 2 * s) + Fraction(13, 2))
                - exact_div(mid, s)
                - 5
                - exact_div(L * (B3 + B4), s)
            ),
        ),
        ("B1", B1 - (_b1_core(B2, B3, B4) + exact_div(3 * B3 - 4 * B4, s) - 2 * L * s)),
    )
    return AnsatzParams(xi, eta, first.zeta, first.sigma), e0, cons


def _b1_core(B2, B3, B4):
    """Shared polynomial block of every order-2 B1 constraint."""
    return -exact_div(B3 * B3 * (B3 - B4), 8 * B4 * B4) + exact_div(
        2 * B2 * (B3 - B4) - Fraction(3, 2) * B3 * B4 - Fraction(5, 2) * B4 * B4, 4 * B4
    )


# ---------------------------------------------------------------------------
# original Riccati polynomial systems, kept as verification residuals


def riccati_system_residuals(family, m: int, params: AnsatzParams, L, A, B, E0, lam) -> dict:
    """Residuals of the polynomial system obtained by matching W^2 - f W' to V - E0.

    All residuals vanish identically when (params, E0) solve the step system
    for the potential data (L, A, B).
    """
    fam = Family(family)
    x, e, z, sg = params.xi, params.eta, params.zeta, params.sigma
    res = {"L": x * (x + 1) - L * (L + 1)}
    if fam is Family.FAMILY1:
        res["A"] = lam * A - exact_div(e * (e + lam), lam)
        res["E0"] = exact_div(e, lam) * (e - 2 * z) + 2 * x * e + z + lam * x * x - lam * A + E0
        if m == 1:
            res["B1"] = z * (2 * (x - 1) + exact_div(2 * e - z, lam)) - lam * B[0]
            res["B2"] = exact_div(z * z, lam) - lam * B[1]
        else:
            res["B1"] = (
                z * (2 * (x - 1) + exact_div(2 * e - z, lam))
                - sg * (exact_div(2 * e, lam) - 3)
                - lam * B[0]
            )
            res["B2"] = (
                exact_div(z * z, lam) + 2 * sg * (x + exact_div(e - z, lam) - 2) - lam * B[1]
            )
            res["B3"] = exact_div(sg, lam) * (2 * z - sg) - lam * B[2]
            res["B4"] = exact_div(sg * sg, lam) - lam * B[3]
        return res
    res["E0"] = lam * x * x + 2 * x * e + exact_div(e * e, lam) - lam * A + E0
    res["A"] = (
        2 * x * z - exact_div(e * e, lam) + exact_div(2 * e * z, lam) - e + 2 * z + lam * A
    )
    if m == 1:
        res["B1"] = exact_div(z * z - 2 * e * z, lam) - 3 * z + lam * B[0]
        res["B2"] = exact_div(z * z, lam) - lam * B[1]
    else:
        res["B1"] = (
            2 * x * sg
            + exact_div(2 * e * sg + z * z - 2 * e * z, lam)
            - 3 * z
            + 4 * sg
            + lam * B[0]
        )
        res["B2"] = exact_div(2 * z * sg - 2 * e * sg - z * z, lam) - 5 * sg + lam * B[1]
        res["B3"] = exact_div(sg * sg - 2 * z * sg, lam) + lam * B[2]
        res["B4"] = exact_div(sg * sg, lam) - lam * B[3]
    return res


# ---------------------------------------------------------------------------
# generating-function route, any order


@dataclass(frozen=True)
class TwoStateSolution:
    """Reduced QES potential with its two known eigenstates."""

    family: Family
    m: int
    L: Scalar
    B2m: Scalar
    lam: Scalar
    spec: PotentialSpec
    w: Superpotential
    w_prime: Superpotential
    psi0: WavefunctionForm
    psi1: WavefunctionForm
    psi0_partner: WavefunctionForm
    E0: Scalar
    E1: Scalar
    delta_e: Scalar
    r0: float
    pair: GeneratingPair

    def to_dict(self) -> dict:
        def wf(psi: WavefunctionForm, with_prefactor: bool) -> dict:
            out = {
                "a": float(psi.r_power),
                "b": float(psi.f_power),
                "exp_r2": [float(c) for c in psi.exp_r2],
                "exp_finv": [float(c) for c in psi.exp_finv],
            }
            if with_prefactor:
                out["prefactor"] = [float(c) for c in psi.prefactor]
            return out

        return {
            "family": int(self.family),
            "m": self.m,
            "L": float(self.L),
            "lambda": float(self.lam),
            "B2m": float(self.B2m),
            "spec": spec_to_dict(self.spec),
            "E0": float(self.E0),
            "E1": float(self.E1),
            "r0": self.r0,
            "psi0": wf(self.psi0, False),
            "psi1": wf(self.psi1, True),
        }


def generating_pair(family, m: int, L, B2m, lam) -> GeneratingPair:
    """The (W+, W-) pair and level spacing for the order-m family member."""
    fam = _validate_order_general(family, m, lam, B2m)
    s = exact_sqrt(B2m)
    if fam is Family.FAMILY1:
        w_plus = Superpotential(
            ((-(2 * L + 3) - 2 * s, -1, 1), (2 * s, -1, 2 * m + 1)), lam
        )
        w_minus = Superpotential(((-1, -1, -1), (2 * m * lam, 1, -1)), lam)
        delta_e = 2 * m * lam * (2 * L + 3 + 2 * s)
    else:
        al = abs(lam)
        w_plus = Superpotential(
            ((-(2 * L + 3) - 2 * s, -1, 1), (2 * s, -1, -(2 * m + 1))), lam
        )
        w_minus = Superpotential(((-1, -1, -1), ((2 * m + 2) * al, 1, -1)), lam)
        delta_e = (2 * m + 2) * al * (2 * L + 3 + 2 * s)
    if not delta_e > 0:
        raise ValueError("level spacing E1 - E0 must be positive")
    return GeneratingPair(w_plus, w_minus, delta_e)


def _validate_order_general(family, m, lam, B2m):
    fam = Family(family)
    if fam is Family.BASE:
        raise ValueError("the QES construction applies to the extension families")
    if not isinstance(m, int) or m < 1 or m > MAX_ORDER:
        raise InvalidOrder(f"order m must be an integer in [1, {MAX_ORDER}], got {m}")
    if fam is Family.FAMILY1 and lam <= 0:
        raise SignMismatch("family 1 requires lambda > 0")
    if fam is Family.FAMILY2 and lam >= 0:
        raise SignMismatch("family 2 requires lambda < 0")
    if B2m <= 0:
        raise ValueError("B_2m must be positive")
    return fam


def general_two_state(family, m: int, L, B2m, lam) -> TwoStateSolution:
    """Complete order-m solution: spec, superpotentials, energies, eigenstates, node."""
    fam = _validate_order_general(family, m, lam, B2m)
    if L < 0:
        raise ValueError("L must be >= 0")
    s = exact_sqrt(B2m)
    pair = generating_pair(fam, m, L, B2m, lam)
    spec = reduced_spec(int(fam), m, L, B2m, lam)
    if fam is Family.FAMILY1:
        e0 = -lam * ((2 * m + 2) * s + 3 * m + Fraction(5, 2) + (2 * m + 3) * L + L * L)
        e1 = lam * ((2 * m - 2) * s + 3 * m - Fraction(5, 2) + (2 * m - 3) * L - L * L)
        tail = [(lam * s, 1, 2 * i + 1) for i in range(m)]
        w = Superpotential(
            tuple([(-(L + 1), -1, 1), (-(2 * m + 1) * lam * HALF, 1, -1)] + tail), lam
        )
        w_prime = Superpotential(
            tuple([(-(L + 2), -1, 1), ((2 * m + 1) * lam * HALF, 1, -1)] + tail), lam
        )
    else:
        al = abs(lam)
        e0 = al * (
            2 * B2m - 2 * (m - 1) * s - 3 * m - HALF + L * (4 * s - 2 * m + 1) + L * L
        )
        e1 = al * (
            2 * B2m + 2 * (m + 3) * s + 3 * m + Fraction(11, 2) + L * (4 * s + 2 * m + 5) + L * L
        )
        tail = [(al * s, 1, -(2 * i + 1)) for i in range(1, m + 1)]
        w = Superpotential(
            tuple([(-(L + 1), -1, 1), (al * (s - m - HALF), 1, -1)] + tail), lam
        )
        w_prime = Superpotential(
            tuple([(-(L + 2), -1, 1), (al * (s + m + HALF), 1, -1)] + tail), lam
        )
    delta = e1 - e0
    if is_exact(delta, pair.delta_e):
        assert delta == pair.delta_e
    else:
        assert math.isclose(float(delta), float(pair.delta_e), rel_tol=1e-12)
    psi0 = wavefunction_from_superpotential(w)
    psi0_partner = wavefunction_from_superpotential(w_prime)
    psi1 = apply_raising(w, psi0_partner)
    r0 = _node_radius(int(fam), m, L, B2m, lam)
    return TwoStateSolution(
        family=fam,
        m=m,
        L=L,
        B2m=B2m,
        lam=lam,
        spec=spec,
        w=w,
        w_prime=w_prime,
        psi0=psi0,
        psi1=psi1,
        psi0_partner=psi0_partner,
        E0=canonical(e0),
        E1=canonical(e1),
        delta_e=canonical(pair.delta_e),
        r0=r0,
        pair=pair,
    )


def _node_radius(family: int, m: int, L, B2m, lam) -> float:
    s = float(exact_sqrt(B2m))
    top = 2.0 * float(L) + 3.0 + 2.0 * s
    if family == 1:
        # ((top/2s)^(1/m) - 1)^(1/2), conditioned for ratios near 1
        x0 = math.expm1(math.log(top / (2.0 * s)) / m)
        return math.sqrt(x0 / float(lam))
    x0 = -math.expm1(math.log(2.0 * s / top) / (m + 1))
    return math.sqrt(x0 / abs(float(lam)))


def node_location(sol: TwoStateSolution) -> float:
    """Closed-form node of the first excited state, inside the open domain."""
    return _node_radius(int(sol.family), sol.m, sol.L, sol.B2m, sol.lam)

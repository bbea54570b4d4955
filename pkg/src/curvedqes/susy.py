"""Deformed-SUSY engine: superpotentials, Riccati maps, partner shifts, eigenfunctions.

A superpotential is a finite sum of basis terms c * r^p * f(r)^q with
p in {-1, +1} and q odd (possibly negative), where f = sqrt(1 + lam*r^2).
This basis is closed enough to hold every ansatz used for the extended
oscillator families as well as the generating pair (W+, W-).  Derivatives are
always taken analytically,

    d/dr [r^p f^q] = p r^(p-1) f^q + q*lam r^(p+1) f^(q-2),

so the Riccati residuals of exact constructions stay at round-off level.

Closed-form eigenfunctions take the shape

    psi(r) = P(|lam| r^2) * r^a * f^b * exp(sum_j c_j (lam r^2)^j
                                            + sum_k d_k f^(-2k)),

kept unnormalized; quadrature norms live in the spectral oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from .errors import NotConstrained, PoleAtNode, UnsupportedTerm
from .exactmath import HALF, QUARTER, Scalar, exact_div, exact_sqrt, is_exact
from .potentials import (
    Family,
    PotentialSpec,
    family1_coefficients,
    family2_coefficients,
)

MINUS = "minus"
PLUS = "plus"


@dataclass(frozen=True)
class Term:
    """One basis term coeff * r^r_exp * f^f_exp."""

    coeff: Scalar
    r_exp: int
    f_exp: int

    def __post_init__(self):
        if self.r_exp not in (-1, 1):
            raise ValueError(f"r exponent must be -1 or +1, got {self.r_exp}")
        if self.f_exp % 2 == 0:
            raise ValueError(f"f exponent must be odd, got {self.f_exp}")


@dataclass(frozen=True)
class Superpotential:
    """Finite sum of r^p f^q basis terms on a fixed-curvature background."""

    terms: tuple
    lam: Scalar

    def __post_init__(self):
        object.__setattr__(
            self,
            "terms",
            tuple(t if isinstance(t, Term) else Term(*t) for t in self.terms),
        )

    def value(self, r):
        r = np.asarray(r, dtype=float)
        f = np.sqrt(1.0 + float(self.lam) * r * r)
        out = np.zeros_like(r)
        for t in self.terms:
            out = out + float(t.coeff) * r ** t.r_exp * f ** t.f_exp
        return float(out) if out.ndim == 0 else out

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        lam = float(self.lam)
        f = np.sqrt(1.0 + lam * r * r)
        out = np.zeros_like(r)
        for t in self.terms:
            c, p, q = float(t.coeff), t.r_exp, t.f_exp
            out = out + c * (p * r ** (p - 1) * f ** q + q * lam * r ** (p + 1) * f ** (q - 2))
        return float(out) if out.ndim == 0 else out

    def magnitude(self, r):
        """Sum of absolute term values; used as a cancellation scale."""
        r = np.asarray(r, dtype=float)
        f = np.sqrt(1.0 + float(self.lam) * r * r)
        out = np.zeros_like(r)
        for t in self.terms:
            out = out + abs(float(t.coeff)) * r ** t.r_exp * f ** t.f_exp
        return float(out) if out.ndim == 0 else out


def riccati_apply(w: Superpotential, sign: str, r):
    """W^2 - f W' (sign="minus", gives V1) or W^2 + f W' (sign="plus", gives V2)."""
    if sign not in (MINUS, PLUS):
        raise ValueError(f"sign must be 'minus' or 'plus', got {sign!r}")
    rr = np.asarray(r, dtype=float)
    f = np.sqrt(1.0 + float(w.lam) * rr * rr)
    wv = w.value(rr)
    wd = w.derivative(rr)
    out = wv * wv - f * wd if sign == MINUS else wv * wv + f * wd
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WavefunctionForm:
    """Closed-form eigenfunction P(|lam| r^2) * r^a * f^b * exp(...), unnormalized."""

    r_power: Scalar
    f_power: Scalar
    exp_r2: tuple = ()
    exp_finv: tuple = ()
    prefactor: tuple = (1,)
    lam: Scalar = 1

    def __post_init__(self):
        object.__setattr__(self, "exp_r2", tuple(self.exp_r2))
        object.__setattr__(self, "exp_finv", tuple(self.exp_finv))
        pref = tuple(self.prefactor) or (1,)
        object.__setattr__(self, "prefactor", pref)

    def _pieces(self, r):
        """Return (P, P', P'', S', S'', log-magnitude S) on a float array."""
        r = np.asarray(r, dtype=float)
        lam = float(self.lam)
        alam = abs(lam)
        r2 = r * r
        f2 = 1.0 + lam * r2
        t = lam * r2
        u = alam * r2

        a, b = float(self.r_power), float(self.f_power)
        S = a * np.log(r) + 0.5 * b * np.log(f2)
        S1 = a / r + b * lam * r / f2
        S2 = -a / r2 + b * lam * (1.0 / f2 - 2.0 * lam * r2 / (f2 * f2))
        for j, cj in enumerate(self.exp_r2, start=1):
            c = float(cj)
            S = S + c * t ** j
            S1 = S1 + 2.0 * lam * j * c * r * t ** (j - 1)
            curv = t ** (j - 1)
            if j > 1:
                curv = curv + 2.0 * lam * r2 * (j - 1) * t ** (j - 2)
            S2 = S2 + 2.0 * lam * j * c * curv
        for k, dk in enumerate(self.exp_finv, start=1):
            d = float(dk)
            fm = f2 ** (-k - 1)
            S = S + d * f2 ** (-k)
            S1 = S1 - 2.0 * k * lam * d * r * fm
            S2 = S2 - 2.0 * k * lam * d * (fm - (2.0 * k + 2.0) * lam * r2 * f2 ** (-k - 2))

        P = np.zeros_like(r)
        P1 = np.zeros_like(r)
        P2 = np.zeros_like(r)
        for s, ps in enumerate(self.prefactor):
            c = float(ps)
            P = P + c * u ** s
            if s >= 1:
                P1 = P1 + 2.0 * alam * c * s * u ** (s - 1) * r
                curv = u ** (s - 1)
                if s > 1:
                    curv = curv + 2.0 * alam * r2 * (s - 1) * u ** (s - 2)
                P2 = P2 + 2.0 * alam * c * s * curv
        return P, P1, P2, S1, S2, S

    def value(self, r):
        with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
            P, _, _, _, _, S = self._pieces(r)
            out = P * np.exp(S)
        return float(out) if out.ndim == 0 else out

    def derivatives(self, r):
        """(psi, psi', psi'') evaluated together for stability."""
        with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
            P, P1, P2, S1, S2, S = self._pieces(r)
            E = np.exp(S)
            psi = P * E
            dpsi = (P1 + P * S1) * E
            d2psi = (P2 + 2.0 * P1 * S1 + P * (S2 + S1 * S1)) * E
        if np.ndim(psi) == 0:
            return float(psi), float(dpsi), float(d2psi)
        return psi, dpsi, d2psi

    def log_derivative(self, r):
        """(ln psi)' for forms with a constant prefactor."""
        if len(self.prefactor) > 1:
            raise UnsupportedTerm("log derivative defined for constant prefactors only")
        _, _, _, S1, _, _ = self._pieces(r)
        return float(S1) if np.ndim(S1) == 0 else S1


@dataclass(frozen=True)
class GeneratingPair:
    """Sum/difference pair (W+, W-) generating the first two superpotentials."""

    w_plus: Superpotential
    w_minus: Superpotential
    delta_e: Scalar


def wavefunction_from_superpotential(w: Superpotential) -> WavefunctionForm:
    """Ground state f^(-1/2) * exp(-int W/f dr), integrated term by term.

    Supported terms: c f/r (power of r), c r/f (power of f), c r f^(2j-1)
    (polynomial exponent in lam*r^2), and c r f^(-2k-1) (exponent in f^-2k).
    """
    lam = w.lam
    a: Scalar = 0
    b: Scalar = -HALF
    c_poly: dict[int, Scalar] = {}
    d_poly: dict[int, Scalar] = {}
    for term in w.terms:
        coeff, p, q = term.coeff, term.r_exp, term.f_exp
        if p == -1 and q == 1:
            a = a - coeff
        elif p == 1 and q == -1:
            b = b - exact_div(coeff, lam)
        elif p == 1 and q >= 1:
            j = (q + 1) // 2
            base = -exact_div(coeff, 2 * j * lam)
            for s in range(1, j + 1):
                c_poly[s] = c_poly.get(s, 0) + base * comb(j, s)
        elif p == 1 and q <= -3:
            k = (-q - 1) // 2
            d_poly[k] = d_poly.get(k, 0) + exact_div(coeff, 2 * k * lam)
        else:
            raise UnsupportedTerm(f"no closed-form antiderivative for r^{p} f^{q}")
    c_list = [c_poly.get(s, 0) for s in range(1, max(c_poly, default=0) + 1)]
    d_list = [d_poly.get(k, 0) for k in range(1, max(d_poly, default=0) + 1)]
    return WavefunctionForm(a, b, tuple(c_list), tuple(d_list), (1,), lam)


def apply_raising(w: Superpotential, psi: WavefunctionForm) -> WavefunctionForm:
    """First excited state from the partner ground state: psi1 = A+ psi.

    psi must be the ground state generated from the partner superpotential W';
    the operator then multiplies psi by W + W' and the product collapses back
    to a single r-power, f-power and polynomial prefactor.
    """
    if len(psi.prefactor) > 1 or psi.prefactor[0] == 0:
        raise UnsupportedTerm("raising operator expects a nodeless ground-state form")
    lam = w.lam
    scale = psi.prefactor[0]
    mono: dict[tuple[int, int], Scalar] = {}

    def add(coeff, p, q):
        if coeff != 0:
            mono[(p, q)] = mono.get((p, q), 0) + coeff

    # -f (ln psi)' - f'/2, assembled analytically from the closed form
    add(-psi.r_power, -1, 1)
    add(-(psi.f_power + HALF) * lam, 1, -1)
    for j, cj in enumerate(psi.exp_r2, start=1):
        add(-2 * j * cj * lam ** j, 2 * j - 1, 1)
    for k, dk in enumerate(psi.exp_finv, start=1):
        add(2 * k * dk * lam, 1, -(2 * k + 1))
    for term in w.terms:
        add(term.coeff, term.r_exp, term.f_exp)

    items = [(c, p, q) for (p, q), c in mono.items() if c != 0]
    if not items:
        raise UnsupportedTerm("raising operator annihilated the state")
    q0 = min(q for _, _, q in items)
    if any((q - q0) % 2 for _, _, q in items):
        raise UnsupportedTerm("mixed f-power parity in the raising product")
    poly: dict[int, Scalar] = {}
    for c, p, q in items:
        n = (q - q0) // 2
        for s in range(n + 1):
            key = p + 2 * s
            poly[key] = poly.get(key, 0) + c * comb(n, s) * lam ** s
    entries = {p: c for p, c in poly.items() if c != 0}
    p0 = min(entries)
    if any((p - p0) % 2 for p in entries):
        raise UnsupportedTerm("mixed r-power parity in the raising product")
    alam = abs(lam)
    smax = (max(entries) - p0) // 2
    pref = [scale * exact_div(entries.get(p0 + 2 * s, 0), alam ** s) for s in range(smax + 1)]
    return WavefunctionForm(
        psi.r_power + p0,
        psi.f_power + q0,
        psi.exp_r2,
        psi.exp_finv,
        tuple(pref),
        lam,
    )


def w_minus_from_w_plus(w_plus: Superpotential, delta_e) -> Callable:
    """The compatibility partner W-(r) = (f W+' - delta_e) / W+ as a callable."""

    def w_minus(r):
        rr = np.asarray(r, dtype=float)
        f = np.sqrt(1.0 + float(w_plus.lam) * rr * rr)
        val = w_plus.value(rr)
        scale = np.maximum(w_plus.magnitude(rr), 1e-30)
        if np.any(np.abs(val) <= 1e-12 * scale):
            raise PoleAtNode("W+ vanishes at the evaluation point (node of psi1)")
        out = (f * w_plus.derivative(rr) - float(delta_e)) / val
        return float(out) if out.ndim == 0 else out

    return w_minus


def _coeffs_match(x, y) -> bool:
    if is_exact(x, y):
        return x == y
    fx, fy = float(x), float(y)
    return abs(fx - fy) <= 1e-9 * max(1.0, abs(fx), abs(fy))


def partner_shift(spec: PotentialSpec):
    """Shape-invariant partner of a reduced QES spec.

    Returns (partner, R) with W^2 + f W' = V_partner(r) + R pointwise, where
    V_partner is the partner spec evaluated with zero shift.  Raises
    NotConstrained unless spec matches the reduced coefficient pattern.
    """
    if spec.family is Family.BASE or spec.m is None:
        raise NotConstrained("partner shift applies to reduced QES specs only")
    m, L, lam, B2m = spec.m, spec.L, spec.lam, spec.B[-1]
    builder = family1_coefficients if spec.family is Family.FAMILY1 else family2_coefficients
    exp_A, exp_B = builder(m, L, B2m)
    if not _coeffs_match(spec.A, exp_A) or not all(
        _coeffs_match(b, e) for b, e in zip(spec.B, exp_B)
    ):
        raise NotConstrained("coefficients are not in the reduced QES form")
    s = exact_sqrt(B2m)
    if spec.family is Family.FAMILY1:
        A2 = (2 * m + 3) * (2 * m + 1) * QUARTER
        B2 = [-B2m - (2 * L + 3) * s] * m + [B2m] * m
        R = lam * (2 * m * s + m + Fraction(3, 2) + (2 * m + 3) * L + L * L)
    else:
        alam = abs(lam)
        A2 = -B2m - (2 * L + 3) * s + (2 * m + 1) * (2 * m - 1) * QUARTER
        B2 = [-B2m - (2 * L + 3) * s] * (m - 1) + [B2m] * (m + 1)
        R = alam * (-2 * B2m + 2 * (m - 2) * s + m - HALF + L * (-4 * s + 2 * m - 1) - L * L)
    partner = PotentialSpec(family=spec.family, m=m, L=L + 1, A=A2, B=tuple(B2), lam=lam)
    return partner, R


def oscillator_superpotential(beta, L, lam) -> Superpotential:
    """Superpotential -(L+1) f/r + beta r/f of the base oscillator."""
    return Superpotential(((-(L + 1), -1, 1), (beta, 1, -1)), lam)


def oscillator_ground_energy(beta, L, lam):
    """Ground-state energy beta(2L+3) - lam (L+1)^2 of the base oscillator."""
    return beta * (2 * L + 3) - lam * (L + 1) ** 2


def oscillator_partner(beta, L, lam):
    """DSI data of the base oscillator: ((beta - lam, L + 1), 2*beta).

    The Riccati partner of the (beta, L) oscillator equals the
    (beta - lam, L + 1) oscillator shifted by the constant 2*beta.
    """
    return (beta - lam, L + 1), 2 * beta

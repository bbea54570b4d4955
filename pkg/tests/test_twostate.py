import math
from fractions import Fraction as F

import numpy as np
import pytest

from curvedqes import (
    InvalidOrder,
    SignMismatch,
    UnsupportedOrder,
    compatibility,
    eval_potential,
    riccati_apply,
    family1_coefficients,
    family2_coefficients,
    find_nodes,
    general_two_state,
    generating_pair,
    node_location,
    riccati_system_residuals,
    solve_first_step,
    solve_second_step,
    wavefunction_from_superpotential,
)

SQUARES = (1, 4, 9)


def first_step_consistent_inputs(family, m, L, B_free, lam):
    """Choose (A, B) on the first-step constraint surface for exact inputs."""
    probe = solve_first_step(family, m, L, 0, B_free, lam)
    cons = dict(probe.constraints)
    A = -cons["A"]
    B = list(B_free)
    if m == 2:
        B[0] = B_free[0] - cons["B1"]
    return A, tuple(B)


def test_first_step_family1_m1_parameters():
    step = solve_first_step(1, 1, 2, F(3, 4), (-10, 1), 1)
    assert step.params.xi == -3
    assert step.params.zeta == 1
    # eta/lambda = B1/(2 sqrt(B2)) + sqrt(B2)/2 + L + 2
    assert step.params.eta == -5 + F(1, 2) + 4


def test_first_step_family1_m1_ground_energy_is_figure_value():
    step = solve_first_step(1, 1, 1, F(3, 4), (-10, 1), 1)
    assert step.ground_energy == F(-31, 2)
    assert dict(step.constraints)["A"] == 0


def test_first_step_family2_m2_parameters():
    A, B = family2_coefficients(2, 1, 4)
    step = solve_first_step(2, 2, 1, A, B, -1)
    assert step.params.xi == -2
    assert step.params.sigma == 2  # |lam| sqrt(B4)
    # zeta = |lam| (B3 + B4) / (2 sqrt(B4))
    assert step.params.zeta == F(B[2] + B[3], 4)
    assert step.max_constraint_residual() == 0


def test_second_step_eta_shifts():
    for fam, lam, shift_m1, shift_m2 in ((1, 1, 3, 3), (2, -1, 3, 3)):
        A, B = (family1_coefficients if fam == 1 else family2_coefficients)(1, 1, 4)
        s1 = solve_first_step(fam, 1, 1, A, B, lam)
        s2 = solve_second_step(fam, 1, s1)
        assert s2.params.eta - s1.params.eta == shift_m1 * abs(lam)
        assert s2.params.xi == s1.params.xi - 1
        assert s2.params.zeta == s1.params.zeta

    for fam, lam in ((1, 1), (2, -1)):
        A, B = (family1_coefficients if fam == 1 else family2_coefficients)(2, 0, 9)
        s1 = solve_first_step(fam, 2, 0, A, B, lam)
        s2 = solve_second_step(fam, 2, s1)
        assert s2.params.eta - s1.params.eta == 5 * abs(lam)
        assert s2.params.sigma == s1.params.sigma


def test_family2_m1_second_step_energy_term():
    # with B1 = 0, B2 = 1, L = 0 the primed ground energy reduces to
    # 1 + 21/2 + 59/2 = 41
    A, B = first_step_consistent_inputs(2, 1, 0, (0, 1), -1)
    s1 = solve_first_step(2, 1, 0, A, B, -1)
    s2 = solve_second_step(2, 1, s1)
    assert s2.ground_energy == 41


@pytest.mark.parametrize("fam,lam", [(1, 1), (2, -1)])
@pytest.mark.parametrize("m", [1, 2])
def test_riccati_system_vanishes_on_step_solutions(fam, lam, m):
    for L in (0, 1, 3):
        for B2m in SQUARES:
            B_free = (2,) * (2 * m - 1) + (B2m,) if m == 2 else (-3, B2m)
            A, B = first_step_consistent_inputs(fam, m, L, B_free, lam)
            step = solve_first_step(fam, m, L, A, B, lam)
            res = riccati_system_residuals(fam, m, step.params, L, A, B, step.ground_energy, lam)
            for name, value in res.items():
                assert value == 0, f"family{fam} m={m} residual {name} = {value}"


@pytest.mark.parametrize("fam,lam", [(1, 1), (2, -1)])
@pytest.mark.parametrize("m", [1, 2])
def test_constraint_closure_on_compatible_specs(fam, lam, m):
    for L in (0, 1, 2, 3):
        for B2m in SQUARES:
            spec = compatibility(fam, m, L, B2m, lam)
            s1 = solve_first_step(fam, m, L, spec.A, spec.B, lam)
            s2 = solve_second_step(fam, m, s1)
            assert s1.max_constraint_residual() == 0
            assert s2.max_constraint_residual() == 0


def test_compatibility_examples():
    spec = compatibility(1, 1, 1, 1, 1)
    assert spec.B[0] == -10 and spec.A == F(3, 4)
    spec = compatibility(2, 2, 0, 9, -1)
    assert spec.B == (-12, -21, 9, 9) and spec.A == F(-13, 4)


def test_compatibility_matches_general_coefficients():
    for L in range(4):
        for B2m in SQUARES:
            spec = compatibility(1, 2, L, B2m, 1)
            A, B = family1_coefficients(2, L, B2m)
            assert spec.A == A and spec.B == tuple(B)
            spec = compatibility(2, 1, L, B2m, -1)
            A, B = family2_coefficients(1, L, B2m)
            assert spec.A == A and spec.B == tuple(B)


@pytest.mark.parametrize("fam,lam", [(1, 1), (2, -1)])
@pytest.mark.parametrize("m", [1, 2])
def test_general_reduces_to_step_construction(fam, lam, m):
    for L in (0, 1, 2, 3):
        for B2m in SQUARES:
            sol = general_two_state(fam, m, L, B2m, lam)
            spec = compatibility(fam, m, L, B2m, lam)
            assert sol.spec.A == spec.A and sol.spec.B == spec.B

            s1 = solve_first_step(fam, m, L, spec.A, spec.B, lam)
            s2 = solve_second_step(fam, m, s1)
            assert sol.E0 == s1.ground_energy
            assert sol.E1 == s2.ground_energy

            # ansatz parameters are the coefficients of the general W
            w1 = s1.superpotential()
            assert w1.terms == sol.w.terms
            w2 = s2.superpotential()
            assert w2.terms == sol.w_prime.terms

            psi_step = wavefunction_from_superpotential(w1)
            assert psi_step == sol.psi0


def test_eta_consistency_on_compatible_specs():
    A, B = family1_coefficients(1, 2, 9)
    assert solve_first_step(1, 1, 2, A, B, 1).params.eta == F(-3, 2)
    A, B = family1_coefficients(2, 1, 4)
    assert solve_first_step(1, 2, 1, A, B, 1).params.eta == F(-5, 2)
    A, B = family2_coefficients(1, 1, 4)
    assert solve_first_step(2, 1, 1, A, B, -1).params.eta == 2 - F(3, 2)
    A, B = family2_coefficients(2, 1, 9)
    assert solve_first_step(2, 2, 1, A, B, -1).params.eta == 3 - F(5, 2)


def test_general_m3_energies():
    sol = general_two_state(1, 3, 0, 1, 1)
    assert sol.E0 == F(-39, 2) and sol.E1 == F(21, 2)
    sol = general_two_state(2, 3, 0, 1, -1)
    assert sol.E0 == F(-23, 2) and sol.E1 == F(57, 2)


@pytest.mark.parametrize("fam,lam", [(1, 1), (2, -1)])
def test_delta_e_positive_and_consistent(fam, lam):
    for m in (1, 2, 3, 5, 8):
        for L in (0, 2):
            for B2m in (1, 9):
                sol = general_two_state(fam, m, L, B2m, lam)
                assert sol.delta_e > 0
                assert sol.E1 - sol.E0 == sol.delta_e
                s = int(math.isqrt(B2m))
                if fam == 1:
                    assert sol.delta_e == 2 * m * lam * (2 * L + 3 + 2 * s)
                else:
                    assert sol.delta_e == (2 * m + 2) * abs(lam) * (2 * L + 3 + 2 * s)


def test_node_location_closed_forms():
    sol = general_two_state(1, 1, 1, 1, 1)
    assert node_location(sol) == pytest.approx(math.sqrt(2.5), rel=1e-14)
    sol = general_two_state(1, 2, 1, 1, 1)
    assert node_location(sol) == pytest.approx(math.sqrt(math.sqrt(3.5) - 1), rel=1e-13)
    sol = general_two_state(2, 1, 1, 1, -1)
    assert node_location(sol) == pytest.approx(math.sqrt(1 - math.sqrt(2.0 / 7.0)), rel=1e-13)


@pytest.mark.parametrize("fam,lam", [(1, 1), (2, -1)])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_node_location_matches_bisection(fam, lam, m):
    sol = general_two_state(fam, m, 1, 4, lam)
    nodes = find_nodes(sol.psi1)
    assert len(nodes) == 1
    assert abs(nodes[0] - node_location(sol)) < 1e-10


def test_node_inside_domain():
    for fam, lam in ((1, 2), (2, -2)):
        for m in (1, 2, 5):
            for L in (0, 3):
                sol = general_two_state(fam, m, L, 4, lam)
                assert 0 < sol.r0 < sol.spec.domain_max


@pytest.mark.parametrize("fam,lam", [(1, 1), (2, -1)])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_second_superpotential_refactorizes_partner(fam, lam, m):
    # W'^2 - f W'' + E1 equals the partner potential plus its shift, pointwise
    from curvedqes import partner_shift

    sol = general_two_state(fam, m, 1, 4, lam)
    partner, R = partner_shift(sol.spec)
    r = np.geomspace(1e-2, 2.5 if lam > 0 else 0.99, 400)
    lhs = riccati_apply(sol.w_prime, "minus", r) + float(sol.E1)
    rhs = eval_potential(partner, r) + float(R) + float(sol.E0)
    assert np.max(np.abs(lhs - rhs) / (1 + np.abs(rhs))) < 1e-12


def test_large_order_construction():
    sol = general_two_state(1, 12, 1, 4, 1)
    # E0 = -[(2m+2) sqrt(B) + 3m + 5/2 + (2m+3) L + L^2]
    assert sol.E0 == F(-237, 2) and sol.E1 == F(195, 2)
    assert sol.delta_e == 216
    assert len(sol.psi1.prefactor) == 13
    for fam, lam, r_hi in ((1, 1, 1.5), (2, -1, 0.9)):
        sol = general_two_state(fam, 12, 1, 4, lam)
        r = np.geomspace(1e-3, r_hi, 400)
        v = eval_potential(sol.spec, r)
        res = np.abs(riccati_apply(sol.w, "minus", r) + float(sol.E0) - v) / (1 + np.abs(v))
        assert res.max() < 1e-10
        nodes = find_nodes(sol.psi1)
        assert len(nodes) == 1
        assert abs(nodes[0] - sol.r0) < 1e-10
    # the cap itself still constructs exactly
    sol = general_two_state(1, 60, 0, 1, 1)
    assert sol.E0 == F(-609, 2)
    assert len(sol.psi1.prefactor) == 61


def test_float_parameter_lane():
    # irrational sqrt(B_2m) degrades gracefully to floats; identities still hold
    sol = general_two_state(1, 2, 0.7, 2.0, 0.5)
    assert isinstance(sol.E0, float)
    r = np.geomspace(1e-3, 4.0, 600)
    v = eval_potential(sol.spec, r)
    res = np.abs(riccati_apply(sol.w, "minus", r) + sol.E0 - v) / (1 + np.abs(v))
    assert res.max() < 1e-10
    nodes = find_nodes(sol.psi1)
    assert len(nodes) == 1 and abs(nodes[0] - sol.r0) < 1e-12

    sol2 = general_two_state(2, 1, F(1, 2), F(1, 2), -2)
    assert isinstance(sol2.E0, float)  # sqrt(1/2) is irrational
    r2 = np.geomspace(1e-3, 0.7, 400)
    v2 = eval_potential(sol2.spec, r2)
    res2 = np.abs(riccati_apply(sol2.w, "minus", r2) + sol2.E0 - v2) / (1 + np.abs(v2))
    assert res2.max() < 1e-10


def test_order_validation():
    with pytest.raises(UnsupportedOrder):
        solve_first_step(1, 3, 0, 1, (1,) * 6, 1)
    with pytest.raises(InvalidOrder):
        general_two_state(1, 0, 0, 1, 1)
    with pytest.raises(InvalidOrder):
        general_two_state(1, 61, 0, 1, 1)
    with pytest.raises(SignMismatch):
        general_two_state(1, 1, 0, 1, -1)
    with pytest.raises(SignMismatch):
        general_two_state(2, 1, 0, 1, 1)
    with pytest.raises(ValueError):
        general_two_state(1, 1, 0, 0, 1)


def test_generating_pair_identity_scaled():
    for fam, lam in ((1, 1), (2, -1)):
        for m in (1, 2, 3, 4):
            pair = generating_pair(fam, m, 1, 4, lam)
            r = np.geomspace(1e-3, 3.0 if lam > 0 else 0.99, 700)
            f = np.sqrt(1 + lam * r * r)
            lhs = f * pair.w_plus.derivative(r)
            rhs = pair.w_plus.value(r) * pair.w_minus.value(r) + float(pair.delta_e)
            res = np.abs(lhs - rhs) / (1 + np.abs(lhs) + np.abs(rhs))
            assert res.max() < 1e-10


def test_solution_serialization_keys():
    sol = general_two_state(2, 2, 1, 1, -1)
    doc = sol.to_dict()
    assert set(doc) == {
        "family", "m", "L", "lambda", "B2m", "spec", "E0", "E1", "r0", "psi0", "psi1",
    }
    assert set(doc["psi0"]) == {"a", "b", "exp_r2", "exp_finv"}
    assert set(doc["psi1"]) == {"a", "b", "exp_r2", "exp_finv", "prefactor"}
    assert doc["E0"] == -4.5 and doc["E1"] == 37.5
    assert doc["spec"]["family"] == 2

from __future__ import annotations

from fractions import Fraction

import pytest

from tripoint import hesse
from tripoint.curve import ProjPoint
from tripoint.exactnum import QOmega
from tripoint.hesse import (
    A_HAT,
    LINES,
    LineNotAdmissible,
    NoSolution,
    PerturbState,
    W,
    WBAR,
    build_config,
    check_line_admissible,
    compute_e,
    compute_p_prime,
    compute_tau,
    family_curve,
    instantiate,
    param_name,
    phi_stage,
    recursion_init,
    recursion_step,
    run_recursion,
    solve_linear_stage,
    verify_state_order,
)
from tripoint.series import Inconsistent, unknown
from tripoint.singular import multiplicity_at_point_exact

ONE = QOmega(1)


def a(i, n=0):
    return unknown(param_name("a", i, n))


def b(i, n=0):
    return unknown(param_name("b", i, n))


@pytest.fixture(scope="module")
def cfg():
    return build_config()


@pytest.fixture(scope="module")
def report(cfg):
    return solve_linear_stage(cfg)


@pytest.fixture(scope="module")
def state3(cfg):
    return run_recursion(cfg, 3)


def test_intersection_parameters(cfg):
    expected = (-ONE, ONE - 2 * W, ONE - 2 * WBAR, QOmega(2), 2 * WBAR, 2 * W, QOmega(Fraction(1, 2)), -WBAR, -W)
    assert cfg.t == expected


def test_t_i_on_lines(cfg):
    for i in range(1, 10):
        P = tuple(f(cfg.t[i - 1]) for f in cfg.f0)
        assert sum((c * p for c, p in zip(LINES[i], P)), QOmega(0)) == 0


def test_line_through_p1_rejected():
    with pytest.raises(LineNotAdmissible):
        build_config((1, -1, 0))


def test_coordinate_line_rejected():
    with pytest.raises(LineNotAdmissible):
        build_config((0, 1, 0))


def test_family_collapses_at_u0(cfg):
    C = family_curve(cfg, 0, A_HAT)
    f0 = cfg.f0
    assert C.x * f0[2] == C.z * f0[0]
    assert C.y * f0[2] == C.z * f0[1]


def test_family_degree_and_vertices(cfg):
    C = family_curve(cfg, Fraction(1, 7), [QOmega(Fraction(i, 5)) for i in range(1, 19)])
    assert C.degree() == 10
    for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        m, _ = multiplicity_at_point_exact(C, ProjPoint.of(*v))
        assert m == 3


def test_tau_12(cfg):
    tau, lam = compute_tau(cfg, 1, 2)
    assert tau == a(4) + b(4).scale(Fraction(1, 3))
    assert lam == QOmega(Fraction(1, 3))


def test_lambdas_in_q_omega(cfg):
    assert len(cfg.lam) == 27
    assert all(isinstance(v, QOmega) for v in cfg.lam.values())


def test_limit_of_y_at_t4(cfg):
    # lim Y(t_4 + tau u) = (1 - t_4)(tau - a_4 - b_4) / (2 (tau - a_4)) at tau = a_4 + b_4/3
    X, Y = compute_p_prime(cfg, 1, 2)
    t4 = cfg.t[3]
    lam = cfg.lam[(1, 2)]
    limit = (ONE - t4) * (lam - ONE) / (2 * lam)
    assert limit == cfg.p_affine(1)[1]


def test_p_prime_printed(cfg):
    X, _ = compute_p_prime(cfg, 1, 2)
    printed = (
        b(1).scale(-2)
        + (b(2) - b(3)).scale(2 + 4 * W)
        + a(4).scale(3)
        + b(4)
        + b(7).scale(4)
        + b(8).scale(4 + 2 * W)
        + b(9).scale(2 - 2 * W)
    )
    assert X.scale(6) == printed


def test_p_prime_vanishes_without_perturbation(cfg):
    zero = {param_name(t, i, 0): QOmega(0) for t in "ab" for i in range(1, 10)}
    for key in cfg.incidence:
        X, Y = compute_p_prime(cfg, *key)
        assert X.evaluate(zero) == 0 and Y.evaluate(zero) == 0


def test_e1_printed(report):
    printed = (
        (a(1) + b(1) + a(4) + b(4)).scale(Fraction(1, 2))
        - (a(7) + b(7)).scale(4)
        + b(8)
        + b(9)
        + (b(2) + b(6)).scale((2 * W - 1) / 7)
        + (b(3) + b(5)).scale((2 * WBAR - 1) / 7)
    )
    e1 = report.e[1]
    key = sorted(printed.lin)[0]
    c = e1.coefficient(key) / printed.coefficient(key)
    assert c and e1 == printed.scale(c)


def test_e_is_homogeneous(cfg):
    for k in range(1, 10):
        assert compute_e(cfg, k).const == 0


def test_e1_under_equal_a_shift(cfg):
    # the printed e_1 gives (1/2 + 1/2 - 4) c at a_i = c, b = 0, so it is not shift invariant
    vals = {param_name("a", i, 0): QOmega(Fraction(3, 7)) for i in range(1, 10)}
    vals.update({param_name("b", i, 0): QOmega(0) for i in range(1, 10)})
    assert compute_e(cfg, 1).evaluate(vals) == QOmega(Fraction(-9, 7))


def test_a_hat_solves_linear_stage(report):
    assert report.a_hat_ok
    assert report.dimension >= 9
    alpha = (38 * W - 5) / 21
    assert report.a_hat[1] == alpha and report.a_hat[2] == alpha.conj()


def test_printed_chart_convention_disagrees():
    alt = build_config(form="printed")
    X, _ = compute_p_prime(alt, 1, 2)
    assert X.scale(6) != (
        b(1).scale(-2) + (b(2) - b(3)).scale(2 + 4 * W) + a(4).scale(3) + b(4) + b(7).scale(4) + b(8).scale(4 + 2 * W) + b(9).scale(2 - 2 * W)
    )
    with pytest.raises(NoSolution):
        compute_tau(alt, 1, 1)


def test_phi_determinant(cfg, report):
    ph = phi_stage(recursion_init(cfg), report)
    assert ph.det_E == QOmega(Fraction(64, 3 ** 12 * 49))
    assert all(ph.proportional[k] is not None for k in (1, 5, 9))


def test_phi_affine(cfg):
    st = recursion_init(cfg)
    x = [QOmega(Fraction(i, 3), Fraction(-i, 5)) for i in range(18)]
    d = [QOmega(Fraction(1, i + 2)) for i in range(18)]
    e = [QOmega(0, Fraction(i, 7)) for i in range(18)]
    add = lambda p, q: [s + t for s, t in zip(p, q)]  # noqa: E731
    v = [hesse.phi_values(st, y) for y in (add(add(x, d), e), add(x, d), add(x, e), x)]
    assert all(v[0][k] - v[1][k] - v[2][k] + v[3][k] == 0 for k in range(9))


def test_recursion_init(cfg):
    st = recursion_init(cfg)
    assert st.order == 0 and verify_state_order(st) == (True, None)


def test_recursion_init_rejects_bad_a_hat(cfg):
    bad = list(A_HAT)
    bad[0] = QOmega(5)
    with pytest.raises(Inconsistent):
        recursion_init(cfg, bad)


def test_recursion_matrix_constant_and_layers_in_E(state3):
    assert state3.order == 3 and len(state3.a) == 4
    for m in range(1, 4):
        layer = state3.a[m]
        assert layer[0] == layer[3]  # a~_1 = a~_4
        assert layer[6] == 0 and layer[9] == 0


def test_recursion_step_checks_matrix(cfg):
    s1 = recursion_step(recursion_init(cfg))
    s1.matrix = [[QOmega(0)] * 9 for _ in range(9)]
    with pytest.raises(hesse.RecursionError_):
        recursion_step(s1)


def test_verify_state_order_and_truncations(state3):
    assert verify_state_order(state3) == (True, None)
    for m in range(3):
        assert verify_state_order(state3.truncate(m))[0]


def test_broken_layer_detected_at_order_two(state3):
    s = state3.truncate(1)
    s.a[1] = tuple(QOmega(0) for _ in range(18))
    ok, where = verify_state_order(s)
    assert not ok and where[1] == 2


def test_state_json_roundtrip(state3):
    doc = state3.to_json()
    back = PerturbState.from_json(doc)
    assert back.a == state3.a and back.S == state3.S
    assert doc["a"][0][1] == "-5/21+38/21*w"


def test_recursion_deterministic(cfg):
    assert run_recursion(cfg, 2).to_json() == run_recursion(cfg, 2).to_json()


def test_instantiate(state3):
    C = instantiate(state3, Fraction(1, 100))
    assert C.degree() == 10 and C.is_primitive()
    with pytest.raises(ValueError):
        instantiate(state3, 0)


def test_zero_b(cfg):
    st = recursion_init(cfg)
    # b_7 = -1/2 at order 0; a first-order layer with b~_7 = 1/2 makes b_7(1) = 0
    layer = [QOmega(0)] * 18
    layer[15] = QOmega(Fraction(1, 2))
    forged = PerturbState(cfg, 1, [st.a[0], tuple(layer)], {k: v + [QOmega(0)] for k, v in st.S.items()})
    with pytest.raises(hesse.ZeroB):
        instantiate(forged, 1)


def test_check_line_admissible_default():
    rep = check_line_admissible((2, 2, -1))
    assert rep["phi_rank"] == 9 and rep["b_all_nonzero_possible"]


def test_line_meeting_l1_at_infinity_rejected():
    with pytest.raises(LineNotAdmissible):
        check_line_admissible((3, 5, -2))


def test_check_line_admissible_random_line():
    rep = check_line_admissible((3, 7, -2))
    assert rep["linear_rank"] == 9 and rep["phi_rank"] == 9

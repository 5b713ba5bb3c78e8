import math

import pytest

import g2lab


def two_point():
    return g2lab.build_chain([0.5, 0.5], [[-1.0, 1.0], [1.0, -1.0]])


def test_build_and_apply():
    gen = two_point()
    assert gen.n == 2
    lf = g2lab.apply(gen, [0.0, 1.0])
    assert lf == pytest.approx([1.0, -1.0])


def test_invalid_chain_raises():
    with pytest.raises(g2lab.G2labError):
        g2lab.build_chain([0.5, 0.5], [[-1.0, 1.0], [2.0, -2.0]])


def test_gamma_and_curvature():
    gen = two_point()
    assert g2lab.gamma(gen, [0.0, 1.0], [0.0, 1.0]) == pytest.approx([0.5, 0.5])
    assert g2lab.gamma2(gen, [0.0, 1.0], [0.0, 1.0]) == pytest.approx([1.0, 1.0])
    assert g2lab.curvature_at(gen, 0) == pytest.approx(2.0, abs=1e-9)
    assert g2lab.curvature_global(gen) == pytest.approx(2.0, abs=1e-9)


def test_heat_flow():
    gen = two_point()
    sf = g2lab.factorize(gen)
    assert sorted(sf.eigenvalues) == pytest.approx([-2.0, 0.0], abs=1e-10)
    pt = g2lab.heat_apply(sf, [0.0, 1.0], math.log(2.0) / 2.0)
    assert pt == pytest.approx([0.25, 0.75])
    support, weights = g2lab.heat_flow_dirac(sf, 0, math.log(2.0) / 2.0)
    assert weights == pytest.approx([0.75, 0.25])


def test_grid_and_interior_curvature():
    gen = g2lab.build_weighted_grid(-5.0, 5.0, 101, "0.5*x^2")
    assert gen.n == 101
    assert gen.positions[0] == pytest.approx(-5.0)
    k = g2lab.curvature_interior(gen)
    assert abs(k - 1.0) < 0.25


def test_wasserstein_and_lp_agree():
    a, wa = [0.0, 2.0], [0.5, 0.5]
    b, wb = [1.0], [1.0]
    for p in (1.0, 2.0, 3.0):
        w = g2lab.wasserstein_1d(a, wa, b, wb, p)
        assert w == pytest.approx(1.0)
        cost, plan = g2lab.transport_cost_lp(a, wa, b, wb, p)
        assert cost == pytest.approx(w**p, abs=1e-9)
        assert sum(m for (_, _, m) in plan) == pytest.approx(1.0)


def test_entropy():
    ent = g2lab.entropy([0.0, 1.0], [1.0, 0.0], [0.5, 0.5])
    assert ent == pytest.approx(math.log(2.0))


def test_model_gamma2():
    # f = x^2 against V = x^2/2 gives 4 + 4x^2
    coeffs = g2lab.model_gamma2("0.5*x^2", "x^2")
    assert coeffs == pytest.approx([4.0, 0.0, 4.0])


def test_gradient_report():
    gen = two_point()
    sf = g2lab.factorize(gen)
    rows = g2lab.gradient_estimate_report(sf, gen, [0.0, 1.0], 2.0, [0.1, 0.5], [1.0])
    assert len(rows) == 4
    assert all(r["pass"] for r in rows)

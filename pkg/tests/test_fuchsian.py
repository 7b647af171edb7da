import cmath
import math

import pytest

from kgcoulomb import fuchsian
from kgcoulomb.errors import (
    IrregularPointError,
    OutOfDomainError,
    ResonantExponentsError,
)
from kgcoulomb.fuchsian import (
    INFINITY,
    RationalCoeffODE,
    evaluate,
    evaluate_with_derivatives,
    frobenius_series,
    indicial_exponents,
    residual,
    singular_points,
    taylor_series,
)
from kgcoulomb.specialfn import hyp2f1, hypergeometric_ode
from kgcoulomb.kgmodels import (
    build_deformed_zero_energy,
    build_ordinary_kg,
    gen_heun_ode,
    to_generalized_heun,
)
from kgcoulomb.physcore import CoulombSystem, DeformationParams

# the cosine equation y'' + y = 0: no singular points in the finite plane
_COS_ODE = RationalCoeffODE((0,), (1,), (1,), (1,))


def _hyp_abc():
    return 0.7, 1.3, 1.9


class TestSingularPointCensus:
    def test_hypergeometric_census(self):
        ode = hypergeometric_ode(*_hyp_abc())
        pts = singular_points(ode)
        finite = [p.location for p in pts if p.location is not INFINITY]
        assert finite == [0.0, 1.0]
        assert pts[-1].location is INFINITY
        assert all(p.kind == "regular" for p in pts)

    def test_ordinary_model_census(self):
        s = CoulombSystem(z=10, eta=0.6)
        pts = singular_points(build_ordinary_kg(s))
        locs = [p.location for p in pts if p.location is not INFINITY]
        # u = 0 and the conjugate pair u = +-i eps
        assert locs[1] == pytest.approx(0.0)
        assert locs[0] == pytest.approx(-0.8j, abs=1e-12)
        assert locs[2] == pytest.approx(0.8j, abs=1e-12)

    def test_double_roots_are_merged(self):
        # the zero-energy denominator has (1 + T u^2)^2: one conjugate
        # pair of order-two poles in p0, not four distinct points
        ode = build_deformed_zero_energy(0.3, DeformationParams(0.02, 0.02))
        pts = singular_points(ode)
        root = 1.0 / math.sqrt(0.04)
        matches = [p for p in pts if p.location is not INFINITY
                   and abs(abs(p.location) - root) < 1e-7]
        assert len(matches) == 2
        assert all(p.pole_order_p0 == 2 for p in matches)
        assert all(p.kind == "regular" for p in matches)

    def test_census_is_sorted_and_deterministic(self):
        ode = build_deformed_zero_energy(0.4, DeformationParams(0.01, 0.05))
        a = [repr(p.location) for p in singular_points(ode)]
        b = [repr(p.location) for p in singular_points(ode)]
        assert a == b
        finite = [p.location for p in singular_points(ode)[:-1]]
        assert finite == sorted(finite, key=lambda z: (z.real, z.imag))


class TestIndicialExponents:
    def test_hypergeometric_at_origin(self):
        a, b, c = _hyp_abc()
        rho = indicial_exponents(hypergeometric_ode(a, b, c), 0.0)
        assert rho[0] == pytest.approx(0.0, abs=1e-14)
        assert rho[1] == pytest.approx(1.0 - c, rel=1e-14)

    def test_hypergeometric_at_one(self):
        # pairs come back sorted by descending real part
        a, b, c = _hyp_abc()
        rho = indicial_exponents(hypergeometric_ode(a, b, c), 1.0)
        assert rho[0] == pytest.approx(0.0, abs=1e-14)
        assert rho[1] == pytest.approx(c - a - b, rel=1e-12)

    def test_hypergeometric_at_infinity(self):
        # solutions go like z^(-a), z^(-b); sigma convention keeps the sign
        a, b, c = _hyp_abc()
        rho = indicial_exponents(hypergeometric_ode(a, b, c), INFINITY)
        assert rho[0] == pytest.approx(-a, rel=1e-14)
        assert rho[1] == pytest.approx(-b, rel=1e-14)

    @staticmethod
    def _fuchs_sum(pts):
        # Fuchs relation with the sigma convention at infinity:
        # sum(finite exponents) - sum(sigma at infinity) = n - 2
        total = 0j
        for p in pts:
            if p.location is INFINITY:
                total -= sum(p.exponents)
            else:
                total += sum(p.exponents)
        return total

    def test_fuchs_relation_four_points(self):
        s = CoulombSystem(z=10, eta=0.6)
        pts = singular_points(build_ordinary_kg(s))
        total = self._fuchs_sum(pts)
        assert total.real == pytest.approx(len(pts) - 2, abs=1e-10)
        assert total.imag == pytest.approx(0.0, abs=1e-10)

    def test_fuchs_relation_five_points(self):
        params, _ = to_generalized_heun(CoulombSystem(z=30, eta=0.8), 0.02)
        pts = singular_points(gen_heun_ode(params))
        assert len(pts) == 5
        total = self._fuchs_sum(pts)
        assert total.real == pytest.approx(3.0, abs=1e-9)

    def test_irregular_point_detected(self):
        # p1 = 1/z^2 is a second-order pole: not regular-singular
        ode = RationalCoeffODE((1,), (0, 0, 1), (0,), (1,))
        pt = singular_points(ode)[0]
        assert pt.kind == "irregular"
        with pytest.raises(IrregularPointError):
            indicial_exponents(ode, 0.0)

    def test_ordinary_point_trivial_pair(self):
        # an ordinary point still has the local solutions 1 and (z - z0)
        rho = indicial_exponents(hypergeometric_ode(*_hyp_abc()), 0.5)
        assert rho == (1.0 + 0.0j, 0.0 + 0.0j)


class TestFrobeniusSeries:
    def test_hypergeometric_coefficients(self):
        a, b, c = _hyp_abc()
        sol = frobenius_series(hypergeometric_ode(a, b, c), 0.0, 0.0, order=6)
        assert sol.coefficients[0] == 1.0
        assert sol.coefficients[1] == pytest.approx(a * b / c, rel=1e-14)
        c2 = a * (a + 1) * b * (b + 1) / (c * (c + 1) * 2)
        assert sol.coefficients[2] == pytest.approx(c2, rel=1e-14)

    def test_matches_gauss_series_inside_disk(self):
        a, b, c = _hyp_abc()
        sol = frobenius_series(hypergeometric_ode(a, b, c), 0.0, 0.0, order=80)
        for z in (0.3, -0.55, 0.7j, 0.4 - 0.4j):
            direct = hyp2f1(a, b, c, z)
            series = evaluate(sol, z).value
            assert abs(series - direct) <= 1e-12 * abs(direct)

    def test_truncation_order_independence(self):
        ode = build_ordinary_kg(CoulombSystem(z=50, eta=0.7))
        lo = frobenius_series(ode, INFINITY, indicial_exponents(ode, INFINITY)[1], order=30)
        hi = frobenius_series(ode, INFINITY, indicial_exponents(ode, INFINITY)[1], order=60)
        z = 80.0
        v_lo = evaluate(lo, z).value
        v_hi = evaluate(hi, z).value
        assert abs(v_lo - v_hi) <= 1e-13 * abs(v_hi)

    def test_second_exponent_branch(self):
        a, b, c = _hyp_abc()
        sol = frobenius_series(hypergeometric_ode(a, b, c), 0.0, 1.0 - c, order=40)
        # z^(1-c) F(a-c+1, b-c+1; 2-c; z) is the second local solution
        z = 0.25
        expected = z ** (1 - c) * hyp2f1(a - c + 1, b - c + 1, 2 - c, z)
        assert abs(evaluate(sol, z).value - expected) <= 1e-12 * abs(expected)

    def test_unknown_exponent_rejected(self):
        ode = hypergeometric_ode(*_hyp_abc())
        with pytest.raises(ValueError):
            frobenius_series(ode, 0.0, 0.123, order=10)

    def test_resonant_lower_root_raises(self):
        # c = 2 puts exponents {0, -1} at the origin; the smaller root
        # hits the indicial polynomial again after one step
        ode = hypergeometric_ode(0.3, 0.8, 2.0)
        with pytest.raises(ResonantExponentsError):
            frobenius_series(ode, 0.0, -1.0, order=10)
        frobenius_series(ode, 0.0, 0.0, order=10)  # larger root is fine

    def test_equal_exponents_raise(self):
        ode = hypergeometric_ode(0.3, 0.8, 1.0)
        with pytest.raises(ResonantExponentsError):
            frobenius_series(ode, 0.0, 0.0, order=10)

    def test_radius_is_distance_to_next_singularity(self):
        a, b, c = _hyp_abc()
        sol = frobenius_series(hypergeometric_ode(a, b, c), 0.0, 0.0, order=10)
        assert sol.radius == pytest.approx(1.0)


class TestEvaluation:
    def test_taylor_cosine(self):
        sol = taylor_series(_COS_ODE, 0.0, 1.0, 0.0, order=40)
        got = evaluate(sol, 0.5).value
        assert got.real == pytest.approx(math.cos(0.5), rel=1e-14)
        assert abs(got.imag) < 1e-15

    def test_derivatives_chain(self):
        sol = taylor_series(_COS_ODE, 0.0, 1.0, 0.0, order=40)
        w, dw, d2w = evaluate_with_derivatives(sol, 0.7)
        assert dw.real == pytest.approx(-math.sin(0.7), rel=1e-13)
        assert d2w.real == pytest.approx(-math.cos(0.7), rel=1e-13)

    def test_taylor_requires_ordinary_center(self):
        with pytest.raises(ValueError):
            taylor_series(hypergeometric_ode(*_hyp_abc()), 0.0, 1.0, 0.0, order=10)

    def test_outside_radius_raises(self):
        sol = frobenius_series(hypergeometric_ode(*_hyp_abc()), 0.0, 0.0, order=20)
        with pytest.raises(OutOfDomainError):
            evaluate(sol, 1.2)

    def test_value_at_center(self):
        a, b, c = _hyp_abc()
        zero_branch = frobenius_series(hypergeometric_ode(a, b, c), 0.0, 0.0, order=8)
        assert evaluate(zero_branch, 0.0).value == 1.0
        neg_branch = frobenius_series(hypergeometric_ode(a, b, c), 0.0, 1.0 - c, order=8)
        with pytest.raises(OutOfDomainError):
            evaluate(neg_branch, 0.0)

    def test_tail_estimate_is_conservative(self):
        a, b, c = _hyp_abc()
        sol = frobenius_series(hypergeometric_ode(a, b, c), 0.0, 0.0, order=60)
        res = evaluate(sol, 0.4)
        truth = hyp2f1(a, b, c, 0.4)
        assert abs(res.value - truth) <= max(res.error, 1e-14)

    def test_residual_small_inside_disk(self):
        ode = hypergeometric_ode(*_hyp_abc())
        sol = frobenius_series(ode, 0.0, 0.0, order=60)
        for z in (0.2, 0.35 + 0.1j, -0.45):
            assert residual(ode, sol, z) < 1e-10

    def test_residual_at_infinity_branch(self):
        ode = build_ordinary_kg(CoulombSystem(z=10, eta=0.6))
        rho = indicial_exponents(ode, INFINITY)[1]
        sol = frobenius_series(ode, INFINITY, rho, order=40)
        for u in (50.0, 200.0, 1e3):
            assert residual(ode, sol, u) < 1e-12


class TestQuotientNormalization:
    def test_shared_roots_cancel(self):
        # p1 = (z - 1)/((z - 1) z) should reduce to 1/z
        ode = RationalCoeffODE((-1.0, 1.0), (0.0, -1.0, 1.0), (0.0,), (1.0,))
        pts = singular_points(ode)
        finite = [p for p in pts if p.location is not INFINITY]
        assert len(finite) == 1
        assert finite[0].location == pytest.approx(0.0)

    def test_exponents_are_python_complex(self):
        ode = build_ordinary_kg(CoulombSystem(z=100, eta=0.5))
        rho = indicial_exponents(ode, INFINITY)
        assert type(rho[0]) is complex
        assert type(rho[1]) is complex

from fractions import Fraction

import pytest

from atlas.integrate import (Integrand, auto_window, integral_status,
                             iwasawa_orbit_u0, phi_from_xi, shell_integrate,
                             xi_integral)
from atlas.orbits import (INF, BPoint, make_bpoint_rs1,
                          u0_nilpotent_family_member, u0_ss_case0,
                          u0_ss_case1)
from atlas.padic import PadicScalar
from atlas.svalue import LogQVal, RatX, value_s0
from atlas.values import (nil_family_orb_u0_fn, orb_u0_ss_case0,
                          orb_u0_ss_case1, phi_eval)


def weight_one(_):
    return Fraction(1)


class TestShellIntegrate:
    def test_volume_of_integers(self):
        ig = Integrand(3, ("F0",), integral_status, weight_one, Fraction(0))
        assert shell_integrate(ig, 9) == 1

    def test_down_tail(self):
        # the twisted measure integral over |b| <= 1 closes to the standard
        # rational function of X
        p = 3

        def w(t):
            v = t.val()
            return RatX.x_power(-2 * v, p) * Fraction(p) ** v

        ig = Integrand(p, ("F0",), integral_status, w, RatX.const(0, p))
        got = shell_integrate(ig, 10)
        want = (RatX.const(1 - Fraction(1, p), p)
                / (RatX.const(1, p) - RatX.x_power(-2, p)))
        assert got == want

    def test_two_sided_meromorphic_sum_vanishes(self):
        p = 3

        def w(t):
            v = t.val()
            return RatX.x_power(-2 * v, p) * Fraction(p) ** v

        ig = Integrand(p, ("F0",), lambda t: True, w, RatX.const(0, p))
        assert shell_integrate(ig, 10).is_zero()

    def test_additive_over_disjoint_predicates(self):
        p = 3

        def cond_a(t):
            s = integral_status(t)
            if s is not True:
                return s
            return t.val() == 0 if not t.is_zero_at_precision() else None

        def cond_b(t):
            s = integral_status(t)
            if s is not True:
                return s
            if t.is_zero_at_precision():
                return t.abs_precision >= 1 or None
            return t.val() >= 1

        whole = Integrand(p, ("F0",), integral_status, weight_one, Fraction(0))
        part_a = Integrand(p, ("F0",), cond_a, weight_one, Fraction(0))
        part_b = Integrand(p, ("F0",), cond_b, weight_one, Fraction(0))
        assert (shell_integrate(part_a, 9) + shell_integrate(part_b, 9)
                == shell_integrate(whole, 9))

    def test_refinement_stability(self):
        p = 3
        ig1 = Integrand(p, ("F0",), integral_status, weight_one, Fraction(0),
                        conductor_hint=1)
        ig2 = Integrand(p, ("F0",), integral_status, weight_one, Fraction(0),
                        conductor_hint=2)
        assert shell_integrate(ig1, 9) == shell_integrate(ig2, 9)


class TestIwasawa:
    @pytest.mark.parametrize("p", [3, 5])
    def test_nilpotent_family(self, p):
        for vmu in (-2, -1, 0, 1):
            mu = Fraction(p) ** vmu
            got = iwasawa_orbit_u0(u0_nilpotent_family_member(mu, p))
            want = phi_eval(nil_family_orb_u0_fn(p),
                            PadicScalar.exact(mu, p)).grade(0)
            assert got == want

    def test_ss_case0_spot(self):
        p = 3
        assert iwasawa_orbit_u0(u0_ss_case0(1, p)) == orb_u0_ss_case0(1, p) == 1
        assert iwasawa_orbit_u0(u0_ss_case0(3, p)) == orb_u0_ss_case0(3, p) == 2

    def test_ss_case0_orbit_choice_independent(self):
        p = 5
        lam0 = Fraction(-5)          # 0ii-type: two orbits upstairs
        a = iwasawa_orbit_u0(u0_ss_case0(lam0, p))
        b = iwasawa_orbit_u0(u0_ss_case0(lam0, p, eps_unit=2))
        assert a == b == orb_u0_ss_case0(lam0, p)

    def test_ss_case1_spot(self):
        p = 3
        x0 = BPoint.exact(0, 1, 0, p)
        assert iwasawa_orbit_u0(u0_ss_case1(x0)) == orb_u0_ss_case1(0, 1, p)

    def test_refinement_stability(self):
        p = 3
        for y in (u0_ss_case0(3, p),
                  u0_nilpotent_family_member(Fraction(1, p), p),
                  u0_ss_case1(BPoint.exact(0, 1, 0, p))):
            assert (iwasawa_orbit_u0(y, conductor_hint=1)
                    == iwasawa_orbit_u0(y, conductor_hint=2))

    def test_s_twist_restricts(self):
        p = 3
        y = u0_ss_case0(3, p)
        rx = iwasawa_orbit_u0(y, s_twist=True)
        assert value_s0(rx) == iwasawa_orbit_u0(y)

    def test_auto_window_positive(self):
        y = u0_ss_case0(27, 3)
        assert auto_window(y) >= 8


class TestXi:
    def test_spot_value(self):
        x = make_bpoint_rs1(0, 1, INF, 3)
        assert phi_from_xi(x, window=12) == LogQVal({1: Fraction(-6)}, 3)

    def test_wtilde_sign_symmetry(self):
        p = 3
        x = make_bpoint_rs1(1, 1, 3, p)
        xm = BPoint(x.lam, x.u, -x.wtilde)
        assert xi_integral(x, 12) == xi_integral(xm, 12)

    def test_pure_square_grade(self):
        x = make_bpoint_rs1(1, 2, 3, 3)
        v = xi_integral(x, 12)
        assert set(v.coeffs) <= {2}

    def test_refinement_stability(self):
        x = make_bpoint_rs1(0, 1, INF, 3)
        assert xi_integral(x, 12, conductor_hint=1) == xi_integral(x, 12, conductor_hint=2)

    def test_side0_rejected(self):
        with pytest.raises(ValueError):
            xi_integral(BPoint.exact(1, 1, 0, 5), 10)

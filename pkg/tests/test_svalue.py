import random
from fractions import Fraction

import pytest

from atlas.errors import PoleError
from atlas.svalue import (LogQVal, RatX, dds_s0, laurent_at_1, value_s0,
                          zeta1)


def one(p=3):
    return RatX.const(1, p)


class TestRatX:
    def test_field_ops(self):
        p = 3
        X = RatX.x_power(1, p)
        f = one(p) / (one(p) - X)
        assert (f + (-f)).is_zero()
        assert (f * f.inv() - 1).is_zero()

    def test_geometric_closure_form(self):
        p = 5
        t = Fraction(1, 5)
        f = one(p)._check(1) / (one(p) - RatX.x_power(1, p) * t)
        # 1/(1 - tX) evaluates to zeta(1) at X = 1
        assert value_s0(f) == zeta1(p)

    def test_key_identity(self):
        p = 3
        X = RatX.x_power(1, p)
        Xi = RatX.x_power(-1, p)
        f = one(p) / (one(p) - X) + Xi / (one(p) - Xi)
        assert f.is_zero()

    def test_negative_powers_cleared(self):
        p = 3
        f = RatX.x_power(-3, p) * RatX.x_power(3, p)
        assert f == RatX.const(1, p)


class TestLaurent:
    def test_simple_pole(self):
        p = 3
        f = one(p) / (one(p) - RatX.x_power(1, p))
        r, c = laurent_at_1(f, 2)
        assert r == 1
        assert c[0] == 1 and c[1] == 0

    def test_regular_point(self):
        p = 3
        f = RatX.x_power(2, p) + RatX.const(5, p)
        r, c = laurent_at_1(f, 3)
        assert r <= 0
        assert all(x == 0 for x in c[:max(-r, 0)])

    def test_shell_pole_datum(self):
        # (1 - 1/q)/(1 - X^{-2}): coefficient of 1/(1-X) is -(1-1/q)/2,
        # matching a residue -(1-1/q)/(2 log q) in the twist parameter
        p = 3
        g = RatX.const(1 - Fraction(1, p), p) / (one(p) - RatX.x_power(-2, p))
        r, c = laurent_at_1(g, 1)
        assert r == 1
        assert c[0] == -(1 - Fraction(1, p)) / 2

    def test_round_trip(self):
        random.seed(71)
        p = 5
        order = 6
        for _ in range(200):
            num = [Fraction(random.randint(-4, 4)) for _ in range(4)]
            den = [Fraction(1)] + [Fraction(random.randint(-2, 2), 3)
                                   for _ in range(2)]
            try:
                f = RatX(num, den, p)
            except ZeroDivisionError:
                continue
            r, c = laurent_at_1(f, order)
            # re-expand: sum c[k] (1-X)^(k-r) agrees with f through the order
            g = RatX.const(0, p)
            e = one(p) - RatX.x_power(1, p)
            for k, a in enumerate(c):
                g = g + RatX.const(a, p) * _epow(e, k - r, p)
            rd, cd = laurent_at_1(f - g, order)
            assert rd <= 0
            for k, a in enumerate(cd):
                if k - rd <= order:
                    assert a == 0


def _epow(e, k, p):
    if k >= 0:
        out = RatX.const(1, p)
        for _ in range(k):
            out = out * e
        return out
    out = RatX.const(1, p)
    for _ in range(-k):
        out = out / e
    return out


class TestValueDds:
    def test_x_power(self):
        for k in (0, 1, 3, -2):
            f = RatX.x_power(k, 5)
            assert value_s0(f) == 1
            assert dds_s0(f) == LogQVal({1: -k}, 5)

    def test_zeta(self):
        p = 3
        f = one(p) / (one(p) - RatX.const(Fraction(1, p), p) * RatX.x_power(1, p))
        assert value_s0(f) == zeta1(p)

    def test_absolute_value_derivative(self):
        # d/ds of X^v is -v log q: the derivative of |y|^s at 0 is log|y|
        v = 4
        assert dds_s0(RatX.x_power(v, 3)) == LogQVal({1: -v}, 3)

    def test_pole_raises(self):
        p = 3
        f = one(p) / (one(p) - RatX.x_power(1, p))
        with pytest.raises(PoleError):
            value_s0(f)
        with pytest.raises(PoleError):
            dds_s0(f)

    def test_leibniz(self):
        random.seed(73)
        p = 7
        for _ in range(60):
            num = [Fraction(random.randint(-3, 3)) for _ in range(3)]
            den = [Fraction(1), Fraction(random.randint(0, 2), 5)]
            f = RatX(num, den, p)
            num2 = [Fraction(random.randint(-3, 3)) for _ in range(2)]
            g = RatX(num2, den, p)
            lhs = dds_s0(f * g)
            rhs = (LogQVal.const(value_s0(f), p) * dds_s0(g)
                   + dds_s0(f) * LogQVal.const(value_s0(g), p))
            assert lhs == rhs


class TestLogQVal:
    def test_grading(self):
        v = LogQVal({1: Fraction(2)}, 3) * LogQVal({1: Fraction(3)}, 3)
        assert v == LogQVal({2: Fraction(6)}, 3)
        w = LogQVal({-1: Fraction(1)}, 3) * LogQVal({1: Fraction(5)}, 3)
        assert w == LogQVal.const(5, 3)

    def test_repr(self):
        v = LogQVal({0: Fraction(1, 2), 1: Fraction(-3)}, 3)
        assert "logq" in repr(v)


class TestSLaurent:
    def test_regular_function(self):
        from atlas.svalue import laurent_in_s
        p = 3
        f = RatX.x_power(2, p)
        s = laurent_in_s(f)
        assert s.a_minus1.is_zero()
        assert s.a0 == LogQVal.const(1, p)
        assert s.a1 == LogQVal({1: -2}, p)

    def test_pole_datum(self):
        from atlas.svalue import laurent_in_s
        # (1 - 1/q)/(1 - X^{-2}) has residue -(1-1/q)/(2 log q)
        p = 3
        f = (RatX.const(1 - Fraction(1, p), p)
             / (RatX.const(1, p) - RatX.x_power(-2, p)))
        s = laurent_in_s(f)
        assert s.a_minus1 == LogQVal({-1: -(1 - Fraction(1, p)) / 2}, p)


class TestSplitCase:
    def test_pole_cancellation_in_the_combination(self):
        # over a split base point the two half-terms have opposite residues;
        # twisting the second by X^{-v} and adding kills the pole and shifts
        # the center value by v/2 times the semisimple value
        from atlas.germs import split_case_value, split_half_pole
        from atlas.orbits import BPoint
        p = 5
        orb_y0 = Fraction(7, 3)
        res_plus = split_half_pole(orb_y0, +1, p)
        res_minus = split_half_pole(orb_y0, -1, p)
        assert (res_plus + res_minus).is_zero()
        x = BPoint.exact(-4, 25, 0, p)      # near the split point (-4, 0, 0)
        v = x.delta().val() - x.lam.val()
        # d/ds of the twist X^{-v} at 0 is v log q; Leibniz against the
        # residue of the minus half reproduces the center-value shift
        shift = res_minus * LogQVal({1: -Fraction(v)}, p)
        val = split_case_value(x, Fraction(0), orb_y0)
        assert val.a0 == shift * LogQVal.const(-1, p)

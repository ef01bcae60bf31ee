import random
from fractions import Fraction

import pytest

from atlas.errors import (NotRegularSemisimpleError, UnrealizableError)
from atlas.orbits import (INF, XI_CHOICES, BPoint, SElt,
                          U0RedElt, U1LieElt, U1RedElt, case_of, cayley,
                          cayley_inv, in_side1_closure, make_bpoint_rs1,
                          mat_add, mat_sub, nilpotent_family_member,
                          orbit_reps, section_sigma, section_sigma1,
                          u0_nilpotent_family_member, u0_ss_case1, u1_dagger,
                          u1_is_unitary)
from atlas.padic import PadicScalar, QuadElt, QuatElt


def rand_quat(p, traceless=False, lo=-9, hi=9):
    a = 0 if traceless else random.randint(lo, hi)
    return QuatElt(QuadElt.exact(a, random.randint(lo, hi), p),
                   QuadElt.exact(random.randint(lo, hi), random.randint(lo, hi), p))


def rand_k1_lie(p):
    return U1LieElt(rand_quat(p, traceless=True),
                    PadicScalar.exact(random.randint(-9, 9), p),
                    rand_quat(p),
                    QuadElt.exact(0, random.randint(-9, 9), p))


class TestBPoint:
    def test_delta(self):
        assert BPoint.exact(0, 0, 0, 5).delta().rational == 0
        assert BPoint.exact(1, 1, 0, 5).delta().rational == 1
        assert BPoint.exact(-1, 1, 1, 5).delta().rational == 4

    def test_side(self):
        # Delta = -15 at p=5: eta(15) = -1, side 1
        assert BPoint.exact(-5, 2, 1, 5).side() == 1
        assert BPoint.exact(1, 1, 0, 5).side() == 0
        with pytest.raises(NotRegularSemisimpleError):
            BPoint.exact(0, 0, 0, 5).side()

    def test_side_square_times_minus_one(self):
        # -Delta a square forces side 0
        x = BPoint.exact(-4, 1, 0, 7)
        assert x.side() == 0

    def test_ml_params(self):
        x = make_bpoint_rs1(0, 1, INF, 3)
        assert x.ml_params() == (0, 1, INF)
        assert make_bpoint_rs1(1, 1, 3, 3).ml_params() == (1, 1, 3)
        assert make_bpoint_rs1(1, 3, 1, 3).ml_params() == (1, 3, 1)

    def test_ml_params_r0_error(self):
        x = BPoint.exact(3, 0, 0, 3)
        with pytest.raises(UnrealizableError):
            # side is undefined (Delta = 0) before m is even considered
            x.ml_params()


class TestMakeBPoint:
    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_round_trip_grid(self, p):
        for m in range(0, 3):
            for lm in range(1, 6):
                for lp in (1, 3, 5, INF):
                    x = make_bpoint_rs1(m, lm, lp, p)
                    assert x.ml_params() == (m, lm, lp)
                    assert x.side() == 1
                    assert x.is_integral()

    def test_equal_l_values(self):
        # l- = l+ forces a unit search; must still round-trip
        for p in (3, 5):
            x = make_bpoint_rs1(2, 3, 3, p)
            assert x.ml_params() == (2, 3, 3)


class TestSections:
    def test_sigma_matrix_shape(self):
        x = BPoint.exact(1, 1, 0, 5)
        y = section_sigma(x)
        assert y.z[0][1].rational == Fraction(-1, 5)
        assert y.z[0][2].rational == 1
        assert y.z[1][0].rational == 1
        assert y.z[2][0].rational == 1

    def test_sigma_section_property(self):
        random.seed(11)
        for p in (3, 5):
            done = 0
            while done < 50:
                x = BPoint.exact(random.randint(-40, 40), random.randint(-40, 40),
                                 random.randint(-40, 40), p)
                if not x.is_rs():
                    continue
                ix = section_sigma(x).invariants()
                assert ix.lam.same_value(x.lam)
                assert ix.u.same_value(x.u)
                assert ix.wtilde.same_value(x.wtilde)
                done += 1

    def test_sigma_omega_is_one(self):
        random.seed(13)
        for p in (3, 7):
            done = 0
            while done < 30:
                x = BPoint.exact(random.randint(-40, 40), random.randint(-40, 40),
                                 random.randint(-40, 40), p)
                if not x.is_rs():
                    continue
                assert section_sigma(x).omega() == 1
                done += 1

    def test_sigma1_example(self):
        x = BPoint.exact(-20, 2, 2, 5)
        y = section_sigma1(x)
        assert y.z[2][0].rational == Fraction(3, 2)
        assert y.z[2][1].rational == Fraction(1, 2)
        ix = y.invariants()
        assert ix.lam.rational == -20 and ix.u.rational == 2 and ix.wtilde.rational == 2

    def test_sigma1_wrong_case(self):
        x = BPoint.exact(-10, 2, 2, 5)   # -lam/p = 2 is not a square
        with pytest.raises(UnrealizableError):
            section_sigma1(x)


class TestOmega:
    def test_conjugation_transformation(self):
        random.seed(17)
        p = 5
        done = 0
        while done < 30:
            x = BPoint.exact(random.randint(-20, 20), random.randint(-20, 20),
                             random.randint(-20, 20), p)
            if not x.is_rs():
                continue
            y = section_sigma(x)
            h = [[random.randint(-5, 5) for _ in range(2)] for _ in range(2)]
            det = h[0][0] * h[1][1] - h[0][1] * h[1][0]
            if det == 0:
                continue
            yh = y.conj_by(h)
            assert yh.omega() == PadicScalar.exact(det, p).eta() * y.omega()
            done += 1


class TestInvariantsU1:
    def test_alpha_pi_example(self):
        p = 5
        x = U1RedElt(QuatElt.from_f(QuadElt.pi(p)), QuatElt.one(p))
        iv = x.invariants()
        assert iv.lam.rational == -5
        assert iv.u.rational == 2
        # w = 2 N(b) alpha'_+ = 2 pi, so the pi-coefficient is 2
        assert iv.wtilde.rational == 2
        assert not x.is_rs()

    def test_b_zero(self):
        p = 5
        x = U1RedElt(QuatElt.j(p), QuatElt.zero(p))
        iv = x.invariants()
        assert iv.lam.rational == -2 and iv.u.rational == 0 and iv.wtilde.rational == 0
        assert not x.is_rs()

    def test_alpha_j_rs_and_delta_formula(self):
        random.seed(19)
        p = 5
        x = U1RedElt(QuatElt.j(p), QuatElt.one(p))
        assert x.is_rs()
        for _ in range(40):
            alpha = rand_quat(p, traceless=True)
            b = rand_quat(p)
            if b.is_zero():
                continue
            x = U1RedElt(alpha, b)
            d = x.invariants().delta()
            m = x.alpha_prime().minus_part()
            want = 4 * b.nrd() * b.nrd() * m.nrd()
            assert (d - want).is_exact_zero()
            if x.is_rs():
                assert x.invariants().side() == 1

    def test_u1_conjugation_invariance(self):
        # conjugating (alpha, b) by the stabilizer model: alpha -> c alpha c^-1,
        # b -> c b e for units c in D and e in F keeps all three invariants
        # when Nrd(c) = N(e) = 1 is not required: lambda, u, w scale predictably,
        # so instead check the exactly invariant combination via alpha' only
        random.seed(23)
        p = 3
        for _ in range(30):
            alpha = rand_quat(p, traceless=True)
            b = rand_quat(p)
            c = rand_quat(p)
            if b.is_zero() or c.is_zero():
                continue
            x = U1RedElt(alpha, b)
            y = U1RedElt(c * alpha * c.inv(), c * b)
            ix, iy = x.invariants(), y.invariants()
            assert (ix.lam - iy.lam).is_exact_zero()
            # u and w scale by Nrd(c)
            n = c.nrd()
            assert (iy.u - n * ix.u).is_exact_zero()
            assert (iy.wtilde - n * ix.wtilde).is_exact_zero()


class TestInvariantsU0:
    def test_side_zero(self):
        random.seed(29)
        p = 5
        done = 0
        while done < 40:
            y = U0RedElt.exact(random.randint(-9, 9), random.randint(-9, 9),
                               random.randint(-9, 9),
                               QuadElt.exact(random.randint(-9, 9), random.randint(-9, 9), p),
                               QuadElt.exact(random.randint(-9, 9), random.randint(-9, 9), p), p)
            if not y.is_rs():
                continue
            assert y.invariants().side() == 0
            done += 1

    def test_h0_conjugation_invariance(self):
        random.seed(31)
        p = 3
        done = 0
        while done < 25:
            y = U0RedElt.exact(random.randint(-9, 9), random.randint(-9, 9),
                               random.randint(-9, 9),
                               QuadElt.exact(random.randint(-9, 9), random.randint(-9, 9), p),
                               QuadElt.exact(random.randint(-9, 9), random.randint(-9, 9), p), p)
            # torus-unipotent word in the stabilizer of the hermitian form
            z = QuadElt.exact(random.randint(-9, 9), random.randint(-9, 9), p)
            if z.is_zero() or z.norm().is_exact_zero():
                continue
            t = QuadElt.exact(random.randint(-9, 9), 0, p)
            zero, one = QuadElt.zero(p), QuadElt.one(p)
            h = [[z.inv(), t * z.conj()], [zero, z.conj()]]
            yh = y.conj_by_h(h)
            ix, iy = y.invariants(), yh.invariants()
            assert ix.lam.same_value(iy.lam)
            assert ix.u.same_value(iy.u)
            assert ix.wtilde.same_value(iy.wtilde)
            done += 1


class TestReduce:
    def test_reduce_idempotent_and_recovery(self):
        random.seed(37)
        p = 5
        for _ in range(25):
            x = rand_k1_lie(p)
            red, (twobetapi, d) = x.reduce()
            assert red.alpha == x.alpha and red.b == x.b
            back = U1LieElt(red.alpha, x.beta, red.b, d)
            m1, m2 = x.to_matrix(), back.to_matrix()
            assert all((a - b).is_zero() for r1, r2 in zip(m1, m2)
                       for a, b in zip(r1, r2))

    def test_rs_equivalence(self):
        random.seed(41)
        p = 3
        for _ in range(100):
            x = rand_k1_lie(p)
            assert x.is_rs() == x.reduce()[0].is_rs()

    def test_s_reduce(self):
        p = 3
        y = SElt.exact([[1, 2, 3], [4, 5, 6], [7, 8, 9]], p)
        red, tr, d = y.reduce()
        assert (red.z[0][0] + red.z[1][1]).is_exact_zero()
        assert red.z[2][2].is_exact_zero()
        assert tr.rational == 6 and d.rational == 9


class TestCayley:
    def test_fixed_point_of_zero(self):
        p = 5
        x = U1LieElt(QuatElt.zero(p), PadicScalar.exact(0, p), QuatElt.zero(p),
                     QuadElt.zero(p))
        for xi in XI_CHOICES:
            g = cayley(x, xi)
            alpha, beta, b, c, d = g.coords()
            assert (alpha - xi[0]).is_zero() and (d - xi[1]).is_zero()
            assert beta.is_zero() and b.is_zero() and c.is_zero()

    def test_round_trip_and_unitary(self):
        random.seed(43)
        p = 5
        for _ in range(50):
            x = rand_k1_lie(p)
            xi = random.choice(XI_CHOICES)
            g = cayley(x, xi)
            assert u1_is_unitary(g)
            assert g.is_integral()
            x2 = cayley_inv(g, xi)
            m1, m2 = x.to_matrix(), x2.to_matrix()
            assert all((a - b).is_zero() for r1, r2 in zip(m1, m2)
                       for a, b in zip(r1, r2))

    def test_lie_shape(self):
        random.seed(47)
        p = 3
        x = rand_k1_lie(p)
        M = x.to_matrix()
        D = mat_add(M, u1_dagger(M))
        assert all(e.is_zero() for row in D for e in row)

    def test_k1_coverage(self):
        random.seed(53)
        p = 5
        for _ in range(60):
            g = cayley(rand_k1_lie(p), random.choice(XI_CHOICES))
            assert any(_admissible(g, xi) for xi in XI_CHOICES)

    def test_rs_preserved(self):
        random.seed(59)
        p = 3
        done = 0
        while done < 30:
            x = rand_k1_lie(p)
            g = cayley(x, (1, 1))
            y = cayley_inv(g, (1, 1))
            assert x.is_rs() == y.is_rs()
            done += 1


def _admissible(g, xi):
    from atlas.errors import CayleyUndefinedError
    try:
        return cayley_inv(g, xi).is_integral()
    except CayleyUndefinedError:
        return False


class TestOrbitReps:
    def test_zero_base_point(self):
        x0 = BPoint.exact(0, 0, 0, 3)
        reps = orbit_reps(x0, "s_red")
        tags = [r.tag for r in reps]
        assert tags == ["n_mu", "n0_plus", "n0_minus"]
        for r in reps[1:]:
            iv = r.payload.invariants()
            assert iv.lam.is_exact_zero() and iv.u.is_exact_zero()
        for mu in (0, 1, Fraction(1, 3)):
            n = nilpotent_family_member(mu, 3)
            iv = n.invariants()
            assert iv.lam.is_exact_zero() and iv.u.is_exact_zero() \
                and iv.wtilde.is_exact_zero()

    def test_case_0ii_four_reps(self):
        p = 5
        x0 = BPoint.exact(-5 * 4, 0, 0, p)   # -lam/p = 4 a square
        assert case_of(x0) == "0ii"
        reps = orbit_reps(x0, "s_red")
        assert [r.tag for r in reps] == ["y0", "y_pp", "y_pm", "y_mm", "y_mp"]
        for r in reps:
            iv = r.payload.invariants()
            assert iv.lam.same_value(x0.lam)
            assert iv.u.is_exact_zero() or iv.u.is_zero_at_precision()

    def test_case_1_two_reps(self):
        p = 3
        x0 = BPoint.exact(-3, 1, 1, p)
        assert case_of(x0) == "1"
        reps = orbit_reps(x0, "s_red")
        assert [r.tag for r in reps] == ["y_plus", "y_minus"]
        for r in reps:
            iv = r.payload.invariants()
            assert iv.lam.same_value(x0.lam) and iv.u.same_value(x0.u) \
                and iv.wtilde.same_value(x0.wtilde)

    def test_split_flagged(self):
        p = 5
        x0 = BPoint.exact(-4, 0, 0, p)
        assert case_of(x0) == "split"
        reps = orbit_reps(x0, "s_red")
        assert all(r.excluded for r in reps)
        assert not in_side1_closure(x0)

    def test_rs_base_point_rejected(self):
        with pytest.raises(NotRegularSemisimpleError):
            orbit_reps(BPoint.exact(1, 1, 0, 5), "s_red")

    def test_u0_reps(self):
        p = 3
        x0 = BPoint.exact(0, 0, 0, p)
        tags = [r.tag for r in orbit_reps(x0, "u0_red")]
        assert tags == ["zero", "n_beta"]
        n = u0_nilpotent_family_member(2, p)
        iv = n.invariants()
        assert iv.lam.is_exact_zero() and iv.u.is_exact_zero() \
            and iv.wtilde.is_exact_zero()
        x1 = BPoint.exact(-3, 1, 1, p)
        y = u0_ss_case1(x1)
        assert y.is_integral()
        iv = y.invariants()
        assert iv.lam.same_value(x1.lam) and iv.u.same_value(x1.u) \
            and iv.wtilde.same_value(x1.wtilde)


class TestClosure:
    def test_case_0i_parity_by_prime(self):
        # odd-valuation non-split base points only accumulate side-1 points
        # when -1 is a square
        x3 = BPoint.exact(2 * 3, 0, 0, 3)
        if case_of(x3) == "0i":
            assert not in_side1_closure(x3)
        found = False
        for c in range(1, 5):
            x5 = BPoint.exact(c * 5, 0, 0, 5)
            if case_of(x5) == "0i" and in_side1_closure(x5):
                found = True
        assert found

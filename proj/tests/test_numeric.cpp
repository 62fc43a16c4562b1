#include <doctest.h>

#include <cmath>
#include <numbers>

#include <modfree/errors.hpp>
#include <modfree/numeric.hpp>

using namespace modfree;

namespace
{

double ld(const LogComplex &z)
{
    return z.log_mag.to_double();
}

} // namespace

TEST_SUITE("numeric")
{
    TEST_CASE("log-polar arithmetic")
    {
        const LogComplex a = LogComplex::from_complex(ComplexReal(Real(3l, 128), Real(4l, 128)), 0.0);
        CHECK(a.magnitude().to_double() == doctest::Approx(5.0));
        const LogComplex b = a * a / a;
        CHECK(b.magnitude().to_double() == doctest::Approx(5.0));
        CHECK(a.pow(3).magnitude().to_double() == doctest::Approx(125.0));
        const LogComplex s = add(a, a);
        CHECK(s.magnitude().to_double() == doctest::Approx(10.0));

        const LogComplex tiny(Real(-2000l, 128), Real(0l, 128), 0.0);
        const LogComplex sum = add(a, tiny);
        CHECK(sum.magnitude().to_double() == doctest::Approx(5.0));
        CHECK_NOTHROW(tiny.to_complex());
        const LogComplex huge(Real(1e9, 128), Real(0l, 128), 0.0);
        CHECK_THROWS_AS(huge.to_complex(), inconclusive_error);
    }

    TEST_CASE("product cutoff")
    {
        CHECK(product_cutoff(Rational(1), 256) == 30);
        CHECK(product_cutoff(Rational(4), 256) == 9);
    }

    TEST_CASE("unit evaluation rejects bad arguments")
    {
        CHECK_THROWS_AS(eval_siegel_unit(IndexVector(2, 0, 1), Rational(0)), usage_error);
        CHECK_THROWS_AS(eval_siegel_unit(IndexVector(2, 0, 1), Rational(1), 32), usage_error);
    }

    TEST_CASE("+-v symmetry of values")
    {
        for (int n = 2; n <= 5; ++n) {
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (a == 0 && b == 0) {
                        continue;
                    }
                    const LogComplex p = eval_siegel_unit_raw(n, a, b, Rational(1));
                    const LogComplex m = eval_siegel_unit_raw(n, -a, n - b, Rational(1));
                    CHECK(std::abs(ld(p) - ld(m)) <= 1e-60);
                }
            }
        }
    }

    TEST_CASE("product agrees with the series for g_(0,1/2)^24 at r = 1")
    {
        const IndexVector v(2, 0, 1);
        const LogComplex prod = eval_siegel_unit(v, Rational(1));
        const SeriesValue ser = evaluate_siegel_series(v, 80, Rational(1));
        const ComplexReal z = prod.to_complex();
        const Real diff = (z - ser.value).abs();
        const Real bound = z.abs() * Real(std::expm1(prod.err), 256) + Real(ser.err, 256);
        CHECK(diff <= bound);
        CHECK(ser.err < 1e-40);
    }

    TEST_CASE("leading-term dominance: log|g_v| ~ 2 pi r ord_q")
    {
        const IndexVector v(3, 1, 1);
        const double ord = siegel_order(v).get_d();
        const double slope = (ld(eval_siegel_unit(v, Rational(16))) - ld(eval_siegel_unit(v, Rational(8)))) / 8.0;
        CHECK(slope == doctest::Approx(-2 * std::numbers::pi * ord).epsilon(1e-6));
    }

    TEST_CASE("ratios")
    {
        const GConfig cfg(3, 2, 1);
        const LogComplex id = eval_ratio(cfg, GroupElement::identity(3), Rational(1));
        CHECK(id.log_mag.is_zero());
        CHECK(id.err == 0.0);

        // Outside +-Gamma_1 the ratio decays as r grows.
        const GroupElement s(3, 0, -1, 1, 0);
        double prev = 1e300;
        for (long r : {1, 2, 4, 8}) {
            const double x = ld(eval_ratio(cfg, s, Rational(r)));
            if (r > 1) {
                CHECK(x < prev);
            }
            prev = x;
        }
        CHECK(ld(eval_ratio(cfg, s, Rational(1))) == doctest::Approx(0.0).epsilon(1e-30));

        // Inside +-Gamma_1 \ +-Gamma it is below 1 and linear in m.
        const GroupElement t(3, 1, 1, 0, 1);
        const double l1 = ld(eval_ratio(GConfig(3, 2, 1), t, Rational(1)));
        const double l2 = ld(eval_ratio(GConfig(3, 3, 2), t, Rational(1)));
        const double l4 = ld(eval_ratio(GConfig(3, 5, 4), t, Rational(1)));
        CHECK(l1 < 0.0);
        CHECK(l2 == doctest::Approx(2 * l1));
        CHECK(l4 == doctest::Approx(4 * l1));
    }

    TEST_CASE("error bounds hold under a precision change")
    {
        const GConfig cfg(4, 3, 2);
        for (const auto &s : enumerate_group(4)) {
            const LogComplex lo = eval_ratio(cfg, s, Rational(3, 2), 128);
            const LogComplex hi = eval_ratio(cfg, s, Rational(3, 2), 256);
            CHECK(abs(lo.log_mag - hi.log_mag).to_double() <= lo.err + hi.err);
        }
    }

    TEST_CASE("factorials")
    {
        CHECK(factorial_minus_one(6) == 719);
        CHECK(factorial_minus_one(12) == 479001599);
        CHECK(factorial_minus_one(1) == 0);
    }

    TEST_CASE("parameter search")
    {
        const SearchParams p2 = find_parameters(2);
        CHECK(p2.certified);
        CHECK(p2.epsilon == Rational(1, 719));
        CHECK(p2.d == 6);
        CHECK(p2.l == p2.m + 1);
        CHECK(p2.max_ratio_log.to_double() + p2.max_ratio_err < std::log(1.0 / 719));
        // r = 1 cannot work because S fixes i; the anti-diagonal order then lands on r = 2, m = 64.
        CHECK(p2.r == 2);
        CHECK(p2.m == 64);

        const SearchParams p3 = find_parameters(3);
        CHECK(p3.certified);
        CHECK(p3.r == 2);
        CHECK(p3.m == 32);

        // At epsilon = 1, r = 1 never qualifies (S fixes i), so the third candidate (r = 2, m = 1) is first.
        const SearchParams loose = find_parameters(3, Rational(1));
        CHECK(loose.certified);
        CHECK(loose.candidates_tried == 3);
        CHECK(find_parameters(3, Rational(2)).candidates_tried == 1);

        SearchOptions tight;
        tight.budget = 3;
        CHECK_FALSE(find_parameters(2, std::nullopt, tight).certified);
        CHECK_THROWS_AS(find_parameters(2, Rational(0)), usage_error);
    }

    TEST_CASE("ratio-matrix determinant")
    {
        const SearchParams p = find_parameters(2);
        const GConfig cfg(2, p.l, p.m);
        const auto subs = enumerate_subgroups(enumerate_group(2));

        const DetResult triv = ratio_matrix_det(cfg, subs.front(), p.r);
        CHECK(triv.n == 1);
        CHECK(triv.det_abs.to_double() == 1.0);
        CHECK(triv.lower_bound.to_double() == 1.0);

        const DetResult full = ratio_matrix_det(cfg, subs.back(), p.r);
        CHECK(full.n == 6);
        CHECK(full.lower_bound > Real(0l, 256));
        CHECK(full.det_abs + Real(full.det_err, 256) >= full.lower_bound);
        CHECK(full.lower_bound.to_double() >= 1.0 - 719.0 * std::exp(p.max_ratio_log.to_double() + p.max_ratio_err) - 1e-12);
    }
}

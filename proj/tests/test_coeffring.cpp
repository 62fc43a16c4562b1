#include <doctest.h>

#include <modfree/coeffring.hpp>
#include <modfree/errors.hpp>

using namespace modfree;

namespace
{

IntPoly poly(std::initializer_list<long> c)
{
    IntPoly p;
    for (long x : c) {
        p.emplace_back(x);
    }
    return p;
}

} // namespace

TEST_SUITE("coeffring")
{
    TEST_CASE("euler phi")
    {
        CHECK(euler_phi(1) == 1);
        CHECK(euler_phi(2) == 1);
        CHECK(euler_phi(6) == 2);
        CHECK(euler_phi(12) == 4);
        CHECK(euler_phi(7) == 6);
    }

    TEST_CASE("cyclotomic polynomials, low coefficient first")
    {
        CHECK(cyclotomic_polynomial(1) == poly({-1, 1}));
        CHECK(cyclotomic_polynomial(2) == poly({1, 1}));
        CHECK(cyclotomic_polynomial(3) == poly({1, 1, 1}));
        CHECK(cyclotomic_polynomial(4) == poly({1, 0, 1}));
        CHECK(cyclotomic_polynomial(6) == poly({1, -1, 1}));
        CHECK(cyclotomic_polynomial(12) == poly({1, 0, -1, 0, 1}));
    }

    TEST_CASE("roots of unity")
    {
        for (int m : {2, 3, 4, 5, 6, 12}) {
            CAPTURE(m);
            CHECK(root_of_unity(m, m) == CycNum(m, 1l));
            CHECK(root_of_unity(m, 0) == CycNum(m, 1l));
            CHECK(root_of_unity(m, 1).pow(m) == CycNum(m, 1l));
            CHECK(root_of_unity(m, -1) * root_of_unity(m, 1) == CycNum(m, 1l));
            CycNum sum(m);
            for (int k = 0; k < m; ++k) {
                sum += root_of_unity(m, k);
            }
            CHECK(sum.is_zero());
        }
        CHECK(root_of_unity(2, 1) == CycNum(2, -1l));
    }

    TEST_CASE("field identities")
    {
        const CycNum one(3, 1l);
        CHECK((one + root_of_unity(3, 1)) * (one + root_of_unity(3, 2)) == one);
        CHECK((CycNum(2, 1l) - root_of_unity(2, 1)).pow(24) == CycNum(2, 16777216l));
        const CycNum i = root_of_unity(4, 1);
        CHECK(i * i == CycNum(4, -1l));
    }

    TEST_CASE("inverse and division")
    {
        for (int m : {3, 5, 7, 12}) {
            CAPTURE(m);
            const CycNum a = CycNum(m, 2l) - root_of_unity(m, 1) + root_of_unity(m, 3) * CycNum(m, Rational(1, 3));
            CHECK(a * a.inverse() == CycNum(m, 1l));
            CHECK((a / a) == CycNum(m, 1l));
            CHECK(a.pow(-2) * a.pow(2) == CycNum(m, 1l));
        }
        CHECK_THROWS_AS(CycNum(5).inverse(), division_by_zero);
    }

    TEST_CASE("normal form is unique")
    {
        const CycNum a(6, Rational(2, 4));
        const CycNum b(6, Rational(1, 2));
        CHECK(a == b);
        CHECK(a.is_rational());
        CHECK(a.denominator() == 2);
        CHECK_FALSE(root_of_unity(6, 1).is_rational());
        CHECK((root_of_unity(6, 1) - root_of_unity(6, 1)).is_zero());
    }

    TEST_CASE("mixed conductors are rejected")
    {
        CHECK_THROWS_AS(CycNum(3, 1l) + CycNum(4, 1l), usage_error);
    }

    TEST_CASE("product accumulator agrees with direct products")
    {
        ProductAccumulator acc(5);
        const CycNum a = root_of_unity(5, 1) + CycNum(5, Rational(1, 2));
        const CycNum b = root_of_unity(5, 3) - CycNum(5, Rational(2, 3));
        acc.add_product(a, b);
        acc.add_product(b, b);
        CHECK(acc.take() == a * b + b * b);
        CHECK(acc.take().is_zero());
    }

    TEST_CASE("complex embedding")
    {
        const auto e = embed_complex(CycNum(3, 1l) - root_of_unity(3, 1), 128);
        CHECK(e.value.re.to_double() == doctest::Approx(1.5));
        CHECK(e.value.im.to_double() == doctest::Approx(-0.8660254037844386));
        CHECK(e.err < 1e-30);
        const auto z = embed_complex(root_of_unity(12, 1), 128);
        CHECK(z.value.abs().to_double() == doctest::Approx(1.0));
    }
}

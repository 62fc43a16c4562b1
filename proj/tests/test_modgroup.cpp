#include <doctest.h>

#include <set>

#include <modfree/errors.hpp>
#include <modfree/modgroup.hpp>

using namespace modfree;

TEST_SUITE("modgroup")
{
    TEST_CASE("group orders")
    {
        const std::size_t expect[] = {0, 0, 6, 12, 24, 60, 72};
        for (int n = 2; n <= 6; ++n) {
            CAPTURE(n);
            CHECK(enumerate_group(n).size() == expect[n]);
            CHECK(group_order(n) == expect[n]);
        }
    }

    TEST_CASE("canonical representatives mod +-I")
    {
        const GroupElement a(3, 2, 0, 0, 2);
        CHECK(a.is_identity());
        const GroupElement b(5, -1, -1, 0, -1);
        CHECK(b == GroupElement(5, 1, 1, 0, 1));
        CHECK_THROWS_AS(GroupElement(4, 1, 1, 1, 1), usage_error);
    }

    TEST_CASE("relations")
    {
        for (int n = 2; n <= 6; ++n) {
            CAPTURE(n);
            const GroupElement s(n, 0, -1, 1, 0);
            const GroupElement t(n, 1, 1, 0, 1);
            CHECK((s * s).is_identity());
            const GroupElement st = s * t;
            CHECK((st * st * st).is_identity());
            for (const auto &g : enumerate_group(n)) {
                CHECK((g * inverse(g)).is_identity());
            }
        }
    }

    TEST_CASE("membership")
    {
        for (int n = 2; n <= 6; ++n) {
            CAPTURE(n);
            const auto id = GroupElement::identity(n);
            CHECK(is_member(id, Family::gamma));
            CHECK(is_member(id, Family::gamma1));
            CHECK(is_member(id, Family::gamma0_upper));
            const GroupElement t(n, 1, 1, 0, 1);
            CHECK(is_member(t, Family::gamma1));
            CHECK_FALSE(is_member(t, Family::gamma));
        }
        const GroupElement s(3, 0, -1, 1, 0);
        CHECK_FALSE(is_member(s, Family::gamma));
        CHECK_FALSE(is_member(s, Family::gamma1));
        CHECK_FALSE(is_member(s, Family::gamma0_upper));

        const auto g = enumerate_group(4);
        CHECK(family_image(g, Family::gamma).size() == 1);
        CHECK(family_image(g, Family::gamma1).size() == 4);
        CHECK(family_image(g, Family::gamma0_upper).size() == 4);
        CHECK(family_image(enumerate_group(2), Family::gamma0_upper).size() == 2);
        CHECK(family_image(enumerate_group(3), Family::gamma0_upper).size() == 3);
    }

    TEST_CASE("subgroup lattices")
    {
        const auto s3 = enumerate_subgroups(enumerate_group(2));
        REQUIRE(s3.size() == 6);
        std::multiset<std::size_t> orders;
        for (const auto &h : s3) {
            orders.insert(h.order());
        }
        CHECK(orders == std::multiset<std::size_t>{1, 2, 2, 2, 3, 6});

        CHECK(enumerate_subgroups(enumerate_group(3)).size() == 10);
        CHECK(enumerate_subgroups(enumerate_group(5)).size() == 59);
        const std::vector<GroupElement> trivial{GroupElement::identity(4)};
        CHECK(enumerate_subgroups(trivial).size() == 1);
        CHECK_THROWS_AS(enumerate_subgroups(enumerate_group(6)), usage_error);
    }

    TEST_CASE("subgroups are closed and generated by their generators")
    {
        for (const auto &h : enumerate_subgroups(enumerate_group(4))) {
            for (const auto &x : h.elements) {
                CHECK(h.contains(inverse(x)));
                for (const auto &y : h.elements) {
                    CHECK(h.contains(x * y));
                }
            }
            std::set<GroupElement> closure{GroupElement::identity(4)};
            for (bool grew = true; grew;) {
                grew = false;
                for (const auto &x : std::vector<GroupElement>(closure.begin(), closure.end())) {
                    for (const auto &g : h.generators) {
                        grew |= closure.insert(x * g).second;
                    }
                }
            }
            CHECK(closure.size() == h.order());
        }
    }

    TEST_CASE("index action")
    {
        const GroupElement s(3, 0, -1, 1, 0);
        CHECK(act_on_index(s, IndexVector(3, 0, 1)) == IndexVector(3, 1, 0));
        CHECK(act_on_index(GroupElement::identity(5), IndexVector(5, 2, 3)) == IndexVector(5, 2, 3));
        CHECK(IndexVector(4, 1, 0) == IndexVector(4, -1, 0));
        CHECK(IndexVector(4, 5, 4) == IndexVector(4, 1, 0));
        CHECK_THROWS_AS(IndexVector(4, 4, 0), usage_error);
    }
}

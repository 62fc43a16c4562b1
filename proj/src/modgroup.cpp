#include <modfree/modgroup.hpp>

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <deque>
#include <map>

#include <modfree/errors.hpp>

namespace modfree
{

IndexVector::IndexVector(int level, long a, long b) : m_level(level)
{
    if (level < 2) {
        throw usage_error("IndexVector: level must be at least 2");
    }
    const long x = mod_floor(a, level);
    const long y = mod_floor(b, level);
    if (x == 0 && y == 0) {
        throw usage_error("IndexVector: (" + std::to_string(a) + ", " + std::to_string(b) + ") is zero mod "
                          + std::to_string(level));
    }
    const long nx = mod_floor(-x, level);
    const long ny = mod_floor(-y, level);
    if (std::pair(nx, ny) < std::pair(x, y)) {
        m_a = static_cast<int>(nx);
        m_b = static_cast<int>(ny);
    } else {
        m_a = static_cast<int>(x);
        m_b = static_cast<int>(y);
    }
}

std::string IndexVector::to_string() const
{
    return "(" + std::to_string(m_a) + "," + std::to_string(m_b) + ")/" + std::to_string(m_level);
}

GroupElement::GroupElement(int level, long a, long b, long c, long d) : m_level(level)
{
    if (level < 2) {
        throw usage_error("GroupElement: level must be at least 2");
    }
    const long n = level;
    std::array<long, 4> p{mod_floor(a, n), mod_floor(b, n), mod_floor(c, n), mod_floor(d, n)};
    if (mod_floor(p[0] * p[3] - p[1] * p[2], n) != mod_floor(1, n)) {
        throw usage_error("GroupElement: determinant of [[" + std::to_string(a) + "," + std::to_string(b) + "],["
                          + std::to_string(c) + "," + std::to_string(d) + "]] is not 1 mod " + std::to_string(n));
    }
    std::array<long, 4> q{};
    for (std::size_t i = 0; i < 4; ++i) {
        q[i] = mod_floor(-p[i], n);
    }
    const auto &best = std::min(p, q);
    for (std::size_t i = 0; i < 4; ++i) {
        m_e[i] = static_cast<int>(best[i]);
    }
}

GroupElement GroupElement::identity(int level)
{
    return GroupElement(level, 1, 0, 0, 1);
}

bool GroupElement::is_identity() const noexcept
{
    return *this == identity(m_level);
}

std::string GroupElement::to_string() const
{
    return "[[" + std::to_string(a()) + "," + std::to_string(b()) + "],[" + std::to_string(c()) + ","
           + std::to_string(d()) + "]] mod " + std::to_string(m_level);
}

GroupElement multiply(const GroupElement &s, const GroupElement &r)
{
    if (s.level() != r.level()) {
        throw usage_error("GroupElement: level mismatch in product");
    }
    const long a = s.a() * r.a() + s.b() * r.c();
    const long b = s.a() * r.b() + s.b() * r.d();
    const long c = s.c() * r.a() + s.d() * r.c();
    const long d = s.c() * r.b() + s.d() * r.d();
    return GroupElement(s.level(), a, b, c, d);
}

GroupElement inverse(const GroupElement &s)
{
    return GroupElement(s.level(), s.d(), -s.b(), -s.c(), s.a());
}

bool is_member(const GroupElement &s, Family family)
{
    const int n = s.level();
    switch (family) {
    case Family::gamma:
        return s.is_identity();
    case Family::gamma1: {
        if (s.c() != 0) {
            return false;
        }
        // Canonical form already picked the sign; accept +-(1, *, 0, 1).
        return (s.a() == 1 && s.d() == 1) || (s.a() == n - 1 && s.d() == n - 1);
    }
    case Family::gamma0_upper:
        return s.b() == 0;
    }
    return false;
}

std::size_t group_order(int level)
{
    if (level < 2) {
        throw usage_error("group_order: level must be at least 2");
    }
    // N^3 prod (1 - 1/p^2) = prod over p^k || N of p^(3k-2) (p^2 - 1).
    std::size_t order = 1;
    int n = level;
    for (int p = 2; n > 1; ++p) {
        if (n % p != 0) {
            continue;
        }
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        std::size_t pk = 1;
        for (int i = 0; i < 3 * k - 2; ++i) {
            pk *= static_cast<std::size_t>(p);
        }
        order *= pk * static_cast<std::size_t>(p * p - 1);
    }
    return level > 2 ? order / 2 : order;
}

std::vector<GroupElement> enumerate_group(int level)
{
    if (level < 2) {
        throw usage_error("enumerate_group: level must be at least 2");
    }
    std::vector<GroupElement> out;
    const int n = level;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    if (mod_floor(a * d - b * c, n) == 1 % n) {
                        out.emplace_back(n, a, b, c, d);
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<GroupElement> family_image(std::span<const GroupElement> group, Family family)
{
    std::vector<GroupElement> out;
    std::copy_if(group.begin(), group.end(), std::back_inserter(out),
                 [family](const GroupElement &g) { return is_member(g, family); });
    std::sort(out.begin(), out.end());
    return out;
}

bool Subgroup::contains(const GroupElement &g) const
{
    return std::binary_search(elements.begin(), elements.end(), g);
}

namespace
{

using Mask = std::uint64_t;

// Multiplication table over indices into a sorted element list.
class IndexedGroup
{
public:
    explicit IndexedGroup(std::span<const GroupElement> group) : m_elems(group.begin(), group.end())
    {
        std::sort(m_elems.begin(), m_elems.end());
        m_elems.erase(std::unique(m_elems.begin(), m_elems.end()), m_elems.end());
        const auto n = m_elems.size();
        m_table.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m_table[i * n + j] = index_of(multiply(m_elems[i], m_elems[j]));
            }
        }
        m_identity = index_of(GroupElement::identity(m_elems.front().level()));
    }

    std::size_t size() const noexcept
    {
        return m_elems.size();
    }
    const GroupElement &at(std::size_t i) const
    {
        return m_elems[i];
    }

    Mask closure(Mask seed) const
    {
        Mask cur = seed | (Mask{1} << m_identity);
        for (;;) {
            Mask next = cur;
            for (Mask x = cur; x != 0; x &= x - 1) {
                const auto i = static_cast<std::size_t>(std::countr_zero(x));
                for (Mask y = cur; y != 0; y &= y - 1) {
                    const auto j = static_cast<std::size_t>(std::countr_zero(y));
                    next |= Mask{1} << m_table[i * size() + j];
                }
            }
            if (next == cur) {
                return cur;
            }
            cur = next;
        }
    }

private:
    std::size_t index_of(const GroupElement &g) const
    {
        const auto it = std::lower_bound(m_elems.begin(), m_elems.end(), g);
        if (it == m_elems.end() || !(*it == g)) {
            throw usage_error("enumerate_subgroups: input is not closed under multiplication");
        }
        return static_cast<std::size_t>(it - m_elems.begin());
    }

    std::vector<GroupElement> m_elems;
    std::vector<std::size_t> m_table;
    std::size_t m_identity = 0;
};

} // namespace

std::vector<Subgroup> enumerate_subgroups(std::span<const GroupElement> group, std::size_t bound)
{
    if (group.empty()) {
        throw usage_error("enumerate_subgroups: empty group");
    }
    if (bound > 64) {
        throw usage_error("enumerate_subgroups: bound above 64 is not supported");
    }
    if (group.size() > bound) {
        throw usage_error("enumerate_subgroups: group order " + std::to_string(group.size())
                          + " exceeds the configured bound " + std::to_string(bound));
    }
    const IndexedGroup g(group);
    const std::size_t n = g.size();

    // Discovered subgroups with the generator indices that first produced them.
    std::map<Mask, std::vector<std::size_t>> found;
    std::deque<Mask> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        const Mask h = g.closure(Mask{1} << i);
        if (found.emplace(h, std::vector<std::size_t>{}).second) {
            if (!g.at(i).is_identity()) {
                found[h] = {i};
            }
            frontier.push_back(h);
        }
    }
    while (!frontier.empty()) {
        const Mask h = frontier.front();
        frontier.pop_front();
        const auto gens = found.at(h);
        for (std::size_t i = 0; i < n; ++i) {
            if ((h >> i) & 1) {
                continue;
            }
            const Mask k = g.closure(h | (Mask{1} << i));
            if (!found.contains(k)) {
                auto next_gens = gens;
                next_gens.push_back(i);
                found.emplace(k, std::move(next_gens));
                frontier.push_back(k);
            }
        }
    }

    std::vector<Subgroup> out;
    out.reserve(found.size());
    for (const auto &[mask, gens] : found) {
        Subgroup s;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1) {
                s.elements.push_back(g.at(i));
            }
        }
        for (auto i : gens) {
            s.generators.push_back(g.at(i));
        }
        assert(n % s.elements.size() == 0);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const Subgroup &x, const Subgroup &y) {
        if (x.order() != y.order()) {
            return x.order() < y.order();
        }
        return x.elements < y.elements;
    });
    return out;
}

IndexVector act_on_index(const GroupElement &s, const IndexVector &v)
{
    if (s.level() != v.level()) {
        throw usage_error("act_on_index: level mismatch");
    }
    // sigma^T = [[a, c], [b, d]].
    const long x = static_cast<long>(s.a()) * v.a() + static_cast<long>(s.c()) * v.b();
    const long y = static_cast<long>(s.b()) * v.a() + static_cast<long>(s.d()) * v.b();
    assert(mod_floor(x, s.level()) != 0 || mod_floor(y, s.level()) != 0);
    return IndexVector(s.level(), x, y);
}

} // namespace modfree

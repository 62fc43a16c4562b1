#ifndef MODFREE_MODGROUP_HPP
#define MODFREE_MODGROUP_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <modfree/index_vector.hpp>

namespace modfree
{

// Element of SL2(Z/NZ)/{+-I}, i.e. of Gal(C(X(N))/C(X(1))).
// Stored as the lexicographically smaller of (a,b,c,d) and (-a,-b,-c,-d), entries in [0, N).
class GroupElement
{
public:
    // Throws usage_error unless ad - bc == 1 mod N and N >= 2.
    GroupElement(int level, long a, long b, long c, long d);

    static GroupElement identity(int level);

    int level() const noexcept
    {
        return m_level;
    }
    int a() const noexcept
    {
        return m_e[0];
    }
    int b() const noexcept
    {
        return m_e[1];
    }
    int c() const noexcept
    {
        return m_e[2];
    }
    int d() const noexcept
    {
        return m_e[3];
    }
    const std::array<int, 4> &entries() const noexcept
    {
        return m_e;
    }
    bool is_identity() const noexcept;

    std::string to_string() const;

    friend auto operator<=>(const GroupElement &, const GroupElement &) = default;
    friend bool operator==(const GroupElement &, const GroupElement &) = default;

private:
    int m_level;
    std::array<int, 4> m_e;
};

// Matrix product sigma * rho.
GroupElement multiply(const GroupElement &sigma, const GroupElement &rho);
inline GroupElement operator*(const GroupElement &sigma, const GroupElement &rho)
{
    return multiply(sigma, rho);
}
GroupElement inverse(const GroupElement &sigma);

enum class Family {
    gamma,        // +-Gamma(N): sigma == +-I
    gamma1,       // +-Gamma_1(N): sigma == +-[[1,*],[0,1]]
    gamma0_upper, // Gamma^0(N): upper-right entry == 0
};

bool is_member(const GroupElement &sigma, Family family);

// All of SL2(Z/NZ)/{+-I}, sorted.
std::vector<GroupElement> enumerate_group(int level);

// |SL2(Z/NZ)/{+-I}| from N^3 prod_{p|N} (1 - 1/p^2), halved for N > 2.
std::size_t group_order(int level);

// The elements of `group` lying in `family`, sorted.
std::vector<GroupElement> family_image(std::span<const GroupElement> group, Family family);

struct Subgroup {
    std::vector<GroupElement> elements;   // sorted
    std::vector<GroupElement> generators; // a shortest generating list found by the closure search

    std::size_t order() const noexcept
    {
        return elements.size();
    }
    bool contains(const GroupElement &g) const;
};

inline constexpr std::size_t default_subgroup_bound = 60;

// Every subgroup of the finite group `group` (which must be closed under multiplication)
// exactly once. Cyclic subgroups seed a breadth-first search that extends each known
// subgroup by one outside element and closes; results are ordered by (order, elements).
// Throws usage_error if |group| exceeds `bound` (at most 64).
std::vector<Subgroup> enumerate_subgroups(std::span<const GroupElement> group,
                                          std::size_t bound = default_subgroup_bound);

// sigma^T v, canonicalized mod +-.
IndexVector act_on_index(const GroupElement &sigma, const IndexVector &v);

} // namespace modfree

#endif

#ifndef MODFREE_INDEX_VECTOR_HPP
#define MODFREE_INDEX_VECTOR_HPP

#include <compare>
#include <string>

namespace modfree
{

// v = (a/N, b/N) in (1/N)Z^2 \ Z^2, taken modulo Z^2 and modulo v ~ -v.
// The stored pair is the lexicographically smaller of (a, b) and (-a, -b) with
// entries in [0, N).
class IndexVector
{
public:
    // Throws usage_error if (a, b) == (0, 0) mod N or N < 2.
    IndexVector(int level, long a, long b);

    int level() const noexcept
    {
        return m_level;
    }
    int a() const noexcept
    {
        return m_a;
    }
    int b() const noexcept
    {
        return m_b;
    }

    std::string to_string() const;

    friend auto operator<=>(const IndexVector &, const IndexVector &) = default;
    friend bool operator==(const IndexVector &, const IndexVector &) = default;

private:
    int m_level;
    int m_a;
    int m_b;
};

inline long mod_floor(long x, long n)
{
    const long r = x % n;
    return r < 0 ? r + n : r;
}

} // namespace modfree

#endif

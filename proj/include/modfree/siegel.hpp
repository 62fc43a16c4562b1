#ifndef MODFREE_SIEGEL_HPP
#define MODFREE_SIEGEL_HPP

#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <modfree/coeffring.hpp>
#include <modfree/index_vector.hpp>
#include <modfree/modgroup.hpp>
#include <modfree/qseries.hpp>

namespace modfree
{

// Parameters of g = g_(0,1/N)^(-12 N l) * g_(1/N,0)^(-12 N m), with l > m > 0.
struct GConfig {
    int level;
    long l;
    long m;

    // Throws usage_error unless level >= 2 and l > m > 0.
    GConfig(int level, long l, long m);
};

// Default number of t-terms carried past the leading term of g.
inline long default_horizon(int level)
{
    return 40l * level;
}

Rational bernoulli2(const Rational &x);
// x - floor(x), in [0, 1).
Rational frac_part(const Rational &x);

// q-order of g_v^(12N): 6N * B2(<v1>).
Rational siegel_order(const IndexVector &v);

// t-exponent of the leading term of g_v^(12N), i.e. 6 a^2 - 6 a N + N^2 for the
// representative a of N v1 in [0, N).
long siegel_t_order(int level, long a);

// Expansion of g_v^(12N) in t = q^(1/N) carrying `rel_horizon` terms past its leading
// term (so the result's horizon is siegel_t_order + rel_horizon). Coefficients lie in
// Z[zeta_N]. Throws usage_error if rel_horizon < 1.
QSeries siegel_power_expansion(const IndexVector &v, long rel_horizon);

// Same, but from an arbitrary (not canonicalized) integer pair: v = (a/N, b/N) with
// (a, b) != (0, 0) mod N. Used to check that the result depends only on +-v mod Z^2.
QSeries siegel_power_expansion_raw(int level, long a, long b, long rel_horizon);

// Storage hook for expansions, e.g. a persistent on-disk cache. Implementations must
// return exactly what `produce` would.
class SeriesStore
{
public:
    virtual ~SeriesStore() = default;
    virtual QSeries get_or_compute(const IndexVector &v, long rel_horizon,
                                   const std::function<QSeries()> &produce)
        = 0;
};

// Thread-safe memo of Siegel-unit expansions and their negative powers, keyed by
// canonical index vector. Concurrent readers, exclusive writers.
class ExpansionCache
{
public:
    ExpansionCache() = default;
    explicit ExpansionCache(std::shared_ptr<SeriesStore> backing) : m_backing(std::move(backing)) {}

    // g_v^(12N) with at least `rel_horizon` relative terms.
    QSeries unit(const IndexVector &v, long rel_horizon);
    // (g_v^(12N))^(-e) for e > 0 with at least `rel_horizon` relative terms.
    QSeries inverse_power(const IndexVector &v, long e, long rel_horizon);

private:
    std::shared_ptr<SeriesStore> m_backing;
    std::shared_mutex m_mutex;
    std::map<IndexVector, QSeries> m_units;
    std::map<std::pair<IndexVector, long>, QSeries> m_inverse_powers;
};

// Index vectors sigma^T (0,1) = (c,d) and sigma^T (1,0) = (a,b) of g^sigma.
std::pair<IndexVector, IndexVector> image_indices(const GroupElement &sigma);

// Closed-form q-order of g^sigma: -6N (l B2(<c/N>) + m B2(<a/N>)).
Rational image_order(const GConfig &cfg, const GroupElement &sigma);
Rational g_order(const GConfig &cfg);

// Closed-form q-order of g^sigma / g:
// 6N (l B2(0) + m B2(1/N) - l B2(<c/N>) - m B2(<a/N>)).
Rational ratio_order(const GConfig &cfg, const GroupElement &sigma);

// Expansion of g with `rel_horizon` terms past its leading term.
QSeries g_expansion(const GConfig &cfg, long rel_horizon, ExpansionCache *cache = nullptr);

// Expansion of g^sigma = g_(c/N,d/N)^(-12Nl) g_(a/N,b/N)^(-12Nm), `rel_horizon` terms.
QSeries g_image_expansion(const GConfig &cfg, const GroupElement &sigma, long rel_horizon,
                          ExpansionCache *cache = nullptr);

struct RatioOrderEntry {
    GroupElement sigma;
    Rational order;
    bool in_gamma1;
};

struct MinimumOrderVerdict {
    GConfig cfg;
    std::vector<RatioOrderEntry> entries; // one per coset, group order
    std::vector<GroupElement> equality_set;
    bool nonnegative = true;
    bool equality_matches_gamma1 = true;

    bool pass() const noexcept
    {
        return nonnegative && equality_matches_gamma1;
    }
};

// ord_q(g^sigma / g) >= 0 for every coset, with equality exactly on +-Gamma_1(N).
MinimumOrderVerdict verify_minimum_order(const GConfig &cfg);

} // namespace modfree

#endif

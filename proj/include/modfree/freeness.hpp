#ifndef MODFREE_FREENESS_HPP
#define MODFREE_FREENESS_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <modfree/modgroup.hpp>
#include <modfree/numeric.hpp>
#include <modfree/qseries.hpp>
#include <modfree/siegel.hpp>

namespace modfree
{

struct PrimitivityEntry {
    GroupElement sigma;
    Rational ratio_order;
    // Proof route: ratio order > 0, or (for sigma in +-Gamma_1) ord g^S != ord g^(sigma S).
    bool excluded_by_orders = false;
    // Direct route: first exponent where g^sigma and g differ, if found below the horizon.
    std::optional<long> witness;
    long g_leading = 0;
    long image_leading = 0;
};

struct PrimitivityReport {
    GConfig cfg;
    long rel_horizon;
    std::vector<PrimitivityEntry> entries; // non-identity cosets
    bool conclusive = true;

    bool pass() const noexcept;
    std::vector<GroupElement> unseparated() const;
};

// Checks that only the identity coset fixes g, both by the order argument and by
// comparing expansions of g^sigma and g. Comparisons start at a few terms and double
// up to `rel_horizon`; a coset still unseparated there makes the report inconclusive.
PrimitivityReport check_primitivity(const GConfig &cfg, long rel_horizon, ExpansionCache *cache = nullptr);

enum class Method { symbolic, numeric };
enum class Scope { gamma0, full };

std::string to_string(Method m);
std::string to_string(Scope s);

struct SubgroupRecord {
    std::vector<GroupElement> generators;
    std::size_t order = 0;
    Method method = Method::symbolic;
    std::string certificate; // "order-gap" or "det-lower-bound"
    std::string value;       // exact minimum gap "p/q", or the analytic lower bound
    bool pass = false;

    // Symbolic details.
    std::optional<Rational> min_gap;
    std::optional<long> det_t_order;
    std::optional<long> expected_det_t_order;

    // Numeric details, serialized at fixed precision.
    std::optional<std::string> det_abs;
    std::optional<std::string> det_err;
    std::optional<std::string> max_ratio;
    bool inconclusive = false;

    // In the full scope, subgroups inside the Gamma^0 image are also certified symbolically.
    std::optional<bool> symbolic_cross_check;

    std::string note;
};

struct FreenessReport {
    int level = 0;
    long l = 0;
    long m = 0;
    std::optional<Rational> r;
    Scope scope = Scope::gamma0;
    std::vector<SubgroupRecord> records;

    bool pass() const noexcept;
    bool inconclusive() const noexcept;
};

inline constexpr std::size_t direct_determinant_limit = 6;
inline constexpr long default_det_horizon = 8;

// Order-gap certificate: ratio_order(sigma) > 0 on H \ {Id}. For |H| <= 6 also expands the
// k x k determinant of [g^(sigma_j sigma_i)] and checks its t-order equals k t_order(g).
// Throws usage_error if H is not contained in the Gamma^0(N) image.
SubgroupRecord certify_subgroup_symbolic(const GConfig &cfg, const Subgroup &h, ExpansionCache *cache = nullptr,
                                         long det_rel_horizon = default_det_horizon);

// Determinant certificate at tau = r i: passes iff 1 - (n! - 1) max_ratio > 0 and the
// measured |det| exceeds its error. Throws usage_error if params do not match cfg.
SubgroupRecord certify_subgroup_numeric(const GConfig &cfg, const Subgroup &h, const SearchParams &params);

struct SweepOptions {
    unsigned jobs = 1;
    long det_rel_horizon = default_det_horizon;
    std::size_t subgroup_bound = default_subgroup_bound;
    std::shared_ptr<SeriesStore> store; // optional persistent backing for expansions
};

// Certifies every subgroup of the Gamma^0(N) image (symbolically) or of the full quotient
// (numerically, with a symbolic cross-check where it applies). Records are in the
// order of enumerate_subgroups regardless of `jobs`.
FreenessReport sweep_complete_freeness(const GConfig &cfg, Scope scope, const std::optional<SearchParams> &params,
                                       const SweepOptions &opts = {});

// Evaluates a fixed (N, l, m, r) candidate against epsilon (default 1/(d! - 1)).
SearchParams evaluate_parameters(const GConfig &cfg, const Rational &r, std::optional<Rational> epsilon = std::nullopt,
                                 mpfr_prec_t prec = default_precision);

// Leibniz expansion of det [g^(sigma_j sigma_i)] over truncated series.
QSeries series_orbit_determinant(const GConfig &cfg, const Subgroup &h, long rel_horizon,
                                 ExpansionCache *cache = nullptr);

} // namespace modfree

#endif

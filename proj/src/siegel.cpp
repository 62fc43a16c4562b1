#include <modfree/siegel.hpp>

#include <mutex>

#include <modfree/errors.hpp>

namespace modfree
{

GConfig::GConfig(int level_, long l_, long m_) : level(level_), l(l_), m(m_)
{
    if (level < 2) {
        throw usage_error("level N must be at least 2");
    }
    if (!(l > m && m > 0)) {
        throw usage_error("exponents must satisfy l > m > 0 (got l=" + std::to_string(l) + ", m=" + std::to_string(m)
                          + ")");
    }
}

Rational bernoulli2(const Rational &x)
{
    return x * x - x + Rational(1, 6);
}

Rational frac_part(const Rational &x)
{
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return x - Rational(fl);
}

Rational siegel_order(const IndexVector &v)
{
    const int n = v.level();
    return Rational(6 * n) * bernoulli2(frac_part(make_rational(v.a(), n)));
}

long siegel_t_order(int level, long a)
{
    const long n = level;
    const long r = mod_floor(a, n);
    return 6 * r * r - 6 * r * n + n * n;
}

namespace
{

mpz_class binomial(long n, long k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

// coeffs <- coeffs * (1 - x t^e)^power, keeping the first coeffs.size() terms.
void multiply_binomial_power(std::vector<CycNum> &coeffs, long e, int level, long x_exp, long power)
{
    const long p = static_cast<long>(coeffs.size());
    const long jmax = std::min(power, (p - 1) / e);
    if (jmax < 1) {
        return;
    }
    // c_j = C(power, j) (-x)^j
    std::vector<CycNum> c;
    c.reserve(static_cast<std::size_t>(jmax) + 1);
    for (long j = 0; j <= jmax; ++j) {
        CycNum cj = root_of_unity(level, j * x_exp);
        mpz_class k = binomial(power, j);
        if (j % 2 == 1) {
            k = -k;
        }
        cj *= k;
        c.push_back(std::move(cj));
    }
    ProductAccumulator acc(level);
    for (long k = p - 1; k >= e; --k) {
        bool any = false;
        for (long j = 1; j <= jmax && j * e <= k; ++j) {
            const auto &src = coeffs[static_cast<std::size_t>(k - j * e)];
            if (src.is_zero()) {
                continue;
            }
            acc.add_product(c[static_cast<std::size_t>(j)], src);
            any = true;
        }
        if (any) {
            coeffs[static_cast<std::size_t>(k)] += acc.take();
        }
    }
}

} // namespace

QSeries siegel_power_expansion_raw(int level, long a_in, long b_in, long rel_horizon)
{
    if (rel_horizon < 1) {
        throw usage_error("siegel expansion: horizon must be at least 1");
    }
    if (level < 2) {
        throw usage_error("siegel expansion: level must be at least 2");
    }
    const long n = level;
    const long a = mod_floor(a_in, n);
    const long b = mod_floor(b_in, n);
    if (a == 0 && b == 0) {
        throw usage_error("siegel expansion: index vector is zero mod Z^2");
    }
    const long power = 12 * n;
    const long p = rel_horizon;

    // Leading constant: (-exp(pi i v2 (v1 - 1)))^(12N) = zeta_N^(6 b (a - N)).
    CycNum lead = root_of_unity(level, 6 * b * (a - n));

    std::vector<CycNum> coeffs(static_cast<std::size_t>(p), CycNum(level));
    coeffs[0] = CycNum(level, 1l);

    if (a == 0) {
        // (1 - zeta^b) is a constant factor.
        lead *= (CycNum(level, 1l) - root_of_unity(level, b)).pow(power);
    } else {
        multiply_binomial_power(coeffs, a, level, b, power);
    }
    // Include factors while min(nN + a, nN - a) < horizon; the rest are 1 + O(t^horizon).
    for (long k = 1; k * n - a < p; ++k) {
        multiply_binomial_power(coeffs, k * n - a, level, -b, power);
        if (k * n + a < p) {
            multiply_binomial_power(coeffs, k * n + a, level, b, power);
        }
    }
    for (auto &c : coeffs) {
        if (!c.is_zero()) {
            c *= lead;
        }
    }
    const long order = siegel_t_order(level, a);
    return QSeries(level, level, order, std::move(coeffs), order + p);
}

QSeries siegel_power_expansion(const IndexVector &v, long rel_horizon)
{
    return siegel_power_expansion_raw(v.level(), v.a(), v.b(), rel_horizon);
}

QSeries ExpansionCache::unit(const IndexVector &v, long rel_horizon)
{
    {
        std::shared_lock lock(m_mutex);
        if (auto it = m_units.find(v); it != m_units.end() && it->second.relative_precision() >= rel_horizon) {
            return it->second.truncated(it->second.min_exp() + rel_horizon);
        }
    }
    QSeries s = m_backing
                    ? m_backing->get_or_compute(v, rel_horizon, [&] { return siegel_power_expansion(v, rel_horizon); })
                    : siegel_power_expansion(v, rel_horizon);
    std::unique_lock lock(m_mutex);
    auto it = m_units.find(v);
    if (it == m_units.end()) {
        m_units.emplace(v, s);
    } else if (it->second.relative_precision() < s.relative_precision()) {
        it->second = s;
    }
    return s;
}

QSeries ExpansionCache::inverse_power(const IndexVector &v, long e, long rel_horizon)
{
    const auto key = std::make_pair(v, e);
    {
        std::shared_lock lock(m_mutex);
        if (auto it = m_inverse_powers.find(key);
            it != m_inverse_powers.end() && it->second.relative_precision() >= rel_horizon) {
            return it->second.truncated(it->second.min_exp() + rel_horizon);
        }
    }
    QSeries s = series_pow(unit(v, rel_horizon), -e);
    std::unique_lock lock(m_mutex);
    auto it = m_inverse_powers.find(key);
    if (it == m_inverse_powers.end()) {
        m_inverse_powers.emplace(key, s);
    } else if (it->second.relative_precision() < s.relative_precision()) {
        it->second = s;
    }
    return s;
}

std::pair<IndexVector, IndexVector> image_indices(const GroupElement &sigma)
{
    const int n = sigma.level();
    return {IndexVector(n, sigma.c(), sigma.d()), IndexVector(n, sigma.a(), sigma.b())};
}

Rational image_order(const GConfig &cfg, const GroupElement &sigma)
{
    const int n = cfg.level;
    const Rational bc = bernoulli2(frac_part(make_rational(sigma.c(), n)));
    const Rational ba = bernoulli2(frac_part(make_rational(sigma.a(), n)));
    return -Rational(6 * n) * (Rational(cfg.l) * bc + Rational(cfg.m) * ba);
}

Rational g_order(const GConfig &cfg)
{
    return image_order(cfg, GroupElement::identity(cfg.level));
}

Rational ratio_order(const GConfig &cfg, const GroupElement &sigma)
{
    const int n = cfg.level;
    const Rational base = Rational(cfg.l) * bernoulli2(0) + Rational(cfg.m) * bernoulli2(make_rational(1, n));
    const Rational moved = Rational(cfg.l) * bernoulli2(frac_part(make_rational(sigma.c(), n)))
                           + Rational(cfg.m) * bernoulli2(frac_part(make_rational(sigma.a(), n)));
    return Rational(6 * n) * (base - moved);
}

QSeries g_image_expansion(const GConfig &cfg, const GroupElement &sigma, long rel_horizon, ExpansionCache *cache)
{
    if (sigma.level() != cfg.level) {
        throw usage_error("g_image_expansion: group element level differs from N");
    }
    const auto [v_l, v_m] = image_indices(sigma);
    if (cache != nullptr) {
        return series_mul(cache->inverse_power(v_l, cfg.l, rel_horizon), cache->inverse_power(v_m, cfg.m, rel_horizon));
    }
    return series_mul(series_pow(siegel_power_expansion(v_l, rel_horizon), -cfg.l),
                      series_pow(siegel_power_expansion(v_m, rel_horizon), -cfg.m));
}

QSeries g_expansion(const GConfig &cfg, long rel_horizon, ExpansionCache *cache)
{
    return g_image_expansion(cfg, GroupElement::identity(cfg.level), rel_horizon, cache);
}

MinimumOrderVerdict verify_minimum_order(const GConfig &cfg)
{
    MinimumOrderVerdict v{cfg, {}, {}, true, true};
    for (const auto &sigma : enumerate_group(cfg.level)) {
        RatioOrderEntry e{sigma, ratio_order(cfg, sigma), is_member(sigma, Family::gamma1)};
        if (e.order < 0) {
            v.nonnegative = false;
        }
        const bool zero = e.order == 0;
        if (zero) {
            v.equality_set.push_back(sigma);
        }
        if (zero != e.in_gamma1) {
            v.equality_matches_gamma1 = false;
        }
        v.entries.push_back(std::move(e));
    }
    return v;
}

} // namespace modfree

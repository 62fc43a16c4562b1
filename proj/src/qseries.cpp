#include <modfree/qseries.hpp>

#include <algorithm>
#include <string>

#include <modfree/errors.hpp>

namespace modfree
{

namespace
{

void check_compatible(const QSeries &a, const QSeries &b, const char *what)
{
    if (a.level() != b.level()) {
        throw usage_error(std::string(what) + ": level mismatch (" + std::to_string(a.level()) + " vs "
                          + std::to_string(b.level()) + ")");
    }
    if (a.conductor() != b.conductor()) {
        throw usage_error(std::string(what) + ": conductor mismatch");
    }
}

} // namespace

QSeries::QSeries(int level, int conductor, long min_exp, std::vector<CycNum> coeffs, long horizon)
    : m_level(level), m_conductor(conductor), m_min_exp(min_exp), m_coeffs(std::move(coeffs)), m_horizon(horizon)
{
    if (level < 1) {
        throw usage_error("QSeries: level must be positive");
    }
    for (const auto &c : m_coeffs) {
        if (c.conductor() != conductor) {
            throw usage_error("QSeries: coefficient conductor mismatch");
        }
    }
    if (horizon < min_exp) {
        throw usage_error("QSeries: horizon below min_exp");
    }
    normalize();
}

QSeries QSeries::monomial(int level, const CycNum &c, long exp, long horizon)
{
    if (horizon <= exp) {
        return QSeries(level, c.conductor(), horizon, {}, horizon);
    }
    return QSeries(level, c.conductor(), exp, {c}, horizon);
}

QSeries QSeries::one(int level, int conductor, long horizon)
{
    return monomial(level, CycNum(conductor, 1l), 0, horizon);
}

void QSeries::normalize()
{
    const auto known = static_cast<std::size_t>(std::max(0l, m_horizon - m_min_exp));
    if (m_coeffs.size() > known) {
        m_coeffs.resize(known);
    }
    std::size_t lead = 0;
    while (lead < m_coeffs.size() && m_coeffs[lead].is_zero()) {
        ++lead;
    }
    if (lead == m_coeffs.size()) {
        m_coeffs.clear();
        m_min_exp = m_horizon;
        return;
    }
    if (lead > 0) {
        m_coeffs.erase(m_coeffs.begin(), m_coeffs.begin() + static_cast<long>(lead));
        m_min_exp += static_cast<long>(lead);
    }
    // Trailing zeros below the horizon are implicit.
    while (!m_coeffs.empty() && m_coeffs.back().is_zero()) {
        m_coeffs.pop_back();
    }
}

CycNum QSeries::coeff(long exp) const
{
    if (exp >= m_horizon) {
        throw inconclusive_error("QSeries: coefficient of t^" + std::to_string(exp) + " lies beyond horizon "
                                 + std::to_string(m_horizon));
    }
    const long idx = exp - m_min_exp;
    if (idx < 0 || idx >= static_cast<long>(m_coeffs.size())) {
        return CycNum(m_conductor);
    }
    return m_coeffs[static_cast<std::size_t>(idx)];
}

QSeries QSeries::truncated(long horizon) const
{
    if (horizon > m_horizon) {
        throw usage_error("QSeries::truncated: cannot extend the horizon");
    }
    if (horizon <= m_min_exp) {
        return QSeries(m_level, m_conductor, horizon, {}, horizon);
    }
    const auto keep = std::min(m_coeffs.size(), static_cast<std::size_t>(horizon - m_min_exp));
    return QSeries(m_level, m_conductor, m_min_exp,
                   std::vector<CycNum>(m_coeffs.begin(), m_coeffs.begin() + static_cast<long>(keep)), horizon);
}

QSeries &QSeries::operator+=(const QSeries &o)
{
    check_compatible(*this, o, "series_add");
    const long h = std::min(m_horizon, o.m_horizon);
    const long lo = std::min(m_min_exp, o.m_min_exp);
    if (h <= lo) {
        *this = QSeries(m_level, m_conductor, h, {}, h);
        return *this;
    }
    std::vector<CycNum> out(static_cast<std::size_t>(h - lo), CycNum(m_conductor));
    for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
        const long e = m_min_exp + static_cast<long>(i);
        if (e < h) {
            out[static_cast<std::size_t>(e - lo)] += m_coeffs[i];
        }
    }
    for (std::size_t i = 0; i < o.m_coeffs.size(); ++i) {
        const long e = o.m_min_exp + static_cast<long>(i);
        if (e < h) {
            out[static_cast<std::size_t>(e - lo)] += o.m_coeffs[i];
        }
    }
    *this = QSeries(m_level, m_conductor, lo, std::move(out), h);
    return *this;
}

QSeries &QSeries::operator-=(const QSeries &o)
{
    return *this += -o;
}

QSeries QSeries::operator-() const
{
    QSeries r(*this);
    for (auto &c : r.m_coeffs) {
        c = -c;
    }
    return r;
}

QSeries &QSeries::operator*=(const CycNum &c)
{
    for (auto &x : m_coeffs) {
        x *= c;
    }
    normalize();
    return *this;
}

QSeries series_mul(const QSeries &a, const QSeries &b)
{
    check_compatible(a, b, "series_mul");
    const long h = std::min(a.horizon() + b.min_exp(), b.horizon() + a.min_exp());
    const long lo = a.min_exp() + b.min_exp();
    if (a.zero_to_horizon() || b.zero_to_horizon() || h <= lo) {
        return QSeries(a.level(), a.conductor(), h, {}, h);
    }
    const auto n = static_cast<std::size_t>(h - lo);
    const auto ta = a.terms();
    const auto tb = b.terms();
    std::vector<CycNum> out;
    out.reserve(n);
    ProductAccumulator acc(a.conductor());
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i_lo = k >= tb.size() ? k - tb.size() + 1 : 0;
        const std::size_t i_hi = std::min(k + 1, ta.size());
        for (std::size_t i = i_lo; i < i_hi; ++i) {
            acc.add_product(ta[i], tb[k - i]);
        }
        out.push_back(acc.take());
    }
    return QSeries(a.level(), a.conductor(), lo, std::move(out), h);
}

QSeries series_inv(const QSeries &a)
{
    if (a.zero_to_horizon()) {
        throw division_by_zero("series_inv: leading coefficient is zero up to the horizon");
    }
    const long v = a.min_exp();
    const auto p = static_cast<std::size_t>(a.relative_precision());
    const auto ta = a.terms();
    const CycNum lead_inv = ta[0].inverse();
    const CycNum neg_lead_inv = -lead_inv;
    std::vector<CycNum> out;
    out.reserve(p);
    out.push_back(lead_inv);
    ProductAccumulator acc(a.conductor());
    for (std::size_t n = 1; n < p; ++n) {
        const std::size_t k_hi = std::min(n, ta.size() - 1);
        if (k_hi == 0) {
            out.emplace_back(a.conductor());
            continue;
        }
        for (std::size_t k = 1; k <= k_hi; ++k) {
            acc.add_product(ta[k], out[n - k]);
        }
        out.push_back(acc.take() * neg_lead_inv);
    }
    return QSeries(a.level(), a.conductor(), -v, std::move(out), -v + static_cast<long>(p));
}

QSeries series_pow(const QSeries &a, long e)
{
    if (e < 0) {
        return series_pow(series_inv(a), -e);
    }
    if (e == 0) {
        if (a.zero_to_horizon()) {
            throw inconclusive_error("series_pow: zeroth power of a series with undetermined order");
        }
        return QSeries::one(a.level(), a.conductor(), a.relative_precision());
    }
    std::optional<QSeries> result;
    QSeries base = a;
    while (e > 0) {
        if (e & 1) {
            result = result ? series_mul(*result, base) : base;
        }
        e >>= 1;
        if (e > 0) {
            base = series_mul(base, base);
        }
    }
    return *result;
}

long t_order(const QSeries &a)
{
    if (a.zero_to_horizon()) {
        throw inconclusive_error("order undetermined at this horizon (series vanishes below t^"
                                 + std::to_string(a.horizon()) + ")");
    }
    return a.min_exp();
}

std::optional<long> first_difference(const QSeries &a, const QSeries &b, long k)
{
    check_compatible(a, b, "series_eq_up_to");
    if (k > a.horizon() || k > b.horizon()) {
        throw usage_error("series_eq_up_to: comparison bound " + std::to_string(k) + " exceeds horizon "
                          + std::to_string(std::min(a.horizon(), b.horizon())));
    }
    const long lo = std::min(a.min_exp(), b.min_exp());
    for (long e = lo; e < k; ++e) {
        if (!(a.coeff(e) == b.coeff(e))) {
            return e;
        }
    }
    return std::nullopt;
}

bool series_eq_up_to(const QSeries &a, const QSeries &b, long k)
{
    return !first_difference(a, b, k).has_value();
}

} // namespace modfree

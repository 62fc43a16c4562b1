#ifndef MODFREE_QSERIES_HPP
#define MODFREE_QSERIES_HPP

#include <optional>
#include <span>
#include <vector>

#include <modfree/coeffring.hpp>

namespace modfree
{

// Truncated Laurent series in t = q^(1/level) with coefficients in Q(zeta_conductor).
//
// Coefficients are stored densely from min_exp(); every exponent >= horizon() is
// unknown (not zero). The stored leading coefficient is nonzero unless the series
// vanishes up to its horizon, in which case no terms are stored and
// min_exp() == horizon().
class QSeries
{
public:
    QSeries(int level, int conductor, long min_exp, std::vector<CycNum> coeffs, long horizon);

    static QSeries monomial(int level, const CycNum &c, long exp, long horizon);
    static QSeries one(int level, int conductor, long horizon);

    int level() const noexcept
    {
        return m_level;
    }
    int conductor() const noexcept
    {
        return m_conductor;
    }
    long min_exp() const noexcept
    {
        return m_min_exp;
    }
    long horizon() const noexcept
    {
        return m_horizon;
    }
    // Number of known terms from the leading one: horizon - min_exp.
    long relative_precision() const noexcept
    {
        return m_horizon - m_min_exp;
    }
    bool zero_to_horizon() const noexcept
    {
        return m_coeffs.empty();
    }
    std::span<const CycNum> terms() const noexcept
    {
        return m_coeffs;
    }

    // Coefficient of t^exp; throws inconclusive_error when exp >= horizon.
    CycNum coeff(long exp) const;

    // Copy with a smaller horizon.
    QSeries truncated(long horizon) const;

    QSeries &operator+=(const QSeries &o);
    QSeries &operator-=(const QSeries &o);
    QSeries operator-() const;
    QSeries &operator*=(const CycNum &c);

    friend QSeries operator+(QSeries a, const QSeries &b)
    {
        return a += b;
    }
    friend QSeries operator-(QSeries a, const QSeries &b)
    {
        return a -= b;
    }

private:
    void normalize();

    int m_level;
    int m_conductor;
    long m_min_exp;
    std::vector<CycNum> m_coeffs;
    long m_horizon;
};

// Product truncated at min(a.horizon + b.min_exp, b.horizon + a.min_exp).
QSeries series_mul(const QSeries &a, const QSeries &b);
inline QSeries operator*(const QSeries &a, const QSeries &b)
{
    return series_mul(a, b);
}

// Multiplicative inverse; keeps the relative precision of `a`.
QSeries series_inv(const QSeries &a);

QSeries series_pow(const QSeries &a, long e);

// Smallest exponent with a nonzero coefficient. Throws inconclusive_error when the
// series vanishes up to its horizon.
long t_order(const QSeries &a);

// True iff all coefficients with exponent < k agree. Throws usage_error when k exceeds
// either horizon.
bool series_eq_up_to(const QSeries &a, const QSeries &b, long k);

// Smallest exponent < k at which a and b differ, if any.
std::optional<long> first_difference(const QSeries &a, const QSeries &b, long k);

} // namespace modfree

#endif

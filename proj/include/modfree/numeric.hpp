#ifndef MODFREE_NUMERIC_HPP
#define MODFREE_NUMERIC_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include <modfree/coeffring.hpp>
#include <modfree/index_vector.hpp>
#include <modfree/modgroup.hpp>
#include <modfree/real.hpp>
#include <modfree/siegel.hpp>

namespace modfree
{

// Nonzero complex number as (log |z|, arg z). `err` bounds the absolute error of both
// fields, hence (to first order) the relative error of z. The bounds are forward
// estimates, not interval enclosures.
struct LogComplex {
    Real log_mag;
    Real phase; // in (-pi, pi]
    double err = 0.0;

    explicit LogComplex(mpfr_prec_t prec = default_precision) : log_mag(prec), phase(prec) {}
    LogComplex(Real lm, Real ph, double e);

    static LogComplex from_complex(const ComplexReal &z, double abs_err);

    LogComplex &operator*=(const LogComplex &o);
    LogComplex &operator/=(const LogComplex &o);
    LogComplex pow(long e) const;

    // Refuses (throws inconclusive_error) when |log_mag| exceeds max_convertible_log.
    ComplexReal to_complex() const;
    Real magnitude() const;
};

// Largest |log|z|| that to_complex() will materialize; well inside MPFR's default exponent range.
inline constexpr double max_convertible_log = 1e8;

LogComplex operator*(LogComplex a, const LogComplex &b);
LogComplex operator/(LogComplex a, const LogComplex &b);
// Sum computed by factoring out the larger magnitude.
LogComplex add(const LogComplex &a, const LogComplex &b);

// Number of product factors n used at tau = r i: ceil(digits ln 10 / (2 pi r)) + 1 with
// digits = prec log10(2).
long product_cutoff(const Rational &r, mpfr_prec_t prec);

// g_v(r i)^(12N) from the infinite product at q = exp(-2 pi r), in log-polar form.
// The truncated tail is bounded by 12N * 4 R^(n_max - 1) / (1 - R), R = exp(-2 pi r),
// and folded into err. Throws usage_error for r <= 0 or prec < 64.
LogComplex eval_siegel_unit(const IndexVector &v, const Rational &r, mpfr_prec_t prec = default_precision);
LogComplex eval_siegel_unit_raw(int level, long a, long b, const Rational &r, mpfr_prec_t prec = default_precision);

// Memoizes eval_siegel_unit at a fixed (r, prec). Not thread-safe.
class UnitEvaluator
{
public:
    UnitEvaluator(int level, Rational r, mpfr_prec_t prec);

    const LogComplex &unit(const IndexVector &v);
    // g^sigma(ri) / g(ri) for the given exponents, from the four constituent units.
    LogComplex ratio(const GConfig &cfg, const GroupElement &sigma);

    const Rational &r() const noexcept
    {
        return m_r;
    }
    mpfr_prec_t precision() const noexcept
    {
        return m_prec;
    }

private:
    int m_level;
    Rational m_r;
    mpfr_prec_t m_prec;
    std::map<IndexVector, LogComplex> m_units;
};

// |g^sigma(ri) / g(ri)| (with phase); never forms g(ri) itself.
LogComplex eval_ratio(const GConfig &cfg, const GroupElement &sigma, const Rational &r,
                      mpfr_prec_t prec = default_precision);

struct SearchParams {
    int level = 0;
    long l = 0;
    long m = 0;
    Rational r;
    Rational epsilon;
    std::size_t d = 0;           // group order
    Real big_r{default_precision}; // R = exp(-2 pi r)
    Real max_ratio_log{default_precision};
    double max_ratio_err = 0.0;
    mpfr_prec_t precision = default_precision;
    std::size_t candidates_tried = 0;
    bool certified = false;
};

struct SearchOptions {
    std::size_t budget = 100;
    mpfr_prec_t precision = default_precision;
    mpfr_prec_t max_precision = 4096;
};

// d! - 1 for the default bound epsilon = 1/(d! - 1).
mpz_class factorial_minus_one(std::size_t d);

// Searches (l, m, r) with l = m + 1 such that |g^sigma(ri)/g(ri)| < epsilon for every
// coset sigma outside +-Gamma(N), verified jointly at each candidate. Candidates are
// r = 2^i, m = 2^j taken along anti-diagonals i + j = 0, 1, 2, ... in order of
// increasing i. Returns certified = false with the best candidate if the budget runs out.
SearchParams find_parameters(int level, std::optional<Rational> epsilon = std::nullopt,
                             const SearchOptions &opts = {});

struct DetResult {
    std::size_t n = 0;
    LogComplex det;
    Real det_abs{default_precision};
    double det_err = 0.0;
    Real max_ratio{default_precision}; // upper estimate over non-identity elements
    Real lower_bound{default_precision}; // 1 - (n! - 1) * max_ratio
};

// Determinant of the n x n matrix [g^(sigma_j sigma_i)(ri) / g(ri)], i.e. det B / g(ri)^n,
// together with the analytic lower bound on its modulus.
DetResult ratio_matrix_det(const GConfig &cfg, const Subgroup &h, const Rational &r,
                           mpfr_prec_t prec = default_precision);

struct SeriesValue {
    ComplexReal value;
    double err = 0.0;
};

// Evaluates a truncated series sum_k c_k t^k at t = exp(-2 pi r / N), embedding each
// coefficient; the error covers only the embedded terms (no truncation tail).
SeriesValue evaluate_truncated_series(const QSeries &s, const Rational &r, mpfr_prec_t prec);

// Truncated expansion of g_v^(12N) evaluated at tau = r i, with a rigorous tail bound from
// the majorant prod (1 - s^e)^(-12N), s = sqrt(t), folded into err.
SeriesValue evaluate_siegel_series(const IndexVector &v, long rel_horizon, const Rational &r,
                                   mpfr_prec_t prec = default_precision);

// Rational -> Real helpers.
Real two_pi_r(const Rational &r, mpfr_prec_t prec);

} // namespace modfree

#endif

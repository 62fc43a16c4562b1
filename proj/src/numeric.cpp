#include <modfree/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <modfree/errors.hpp>

namespace modfree
{

namespace
{

constexpr double tiny_err = std::numeric_limits<double>::min();

// 2^-prec as a double, clamped away from zero so that bounds never claim exactness.
double ulp_of(mpfr_prec_t prec)
{
    return std::max(std::ldexp(1.0, -static_cast<int>(prec)), tiny_err);
}

double as_bound(const Real &x)
{
    // Upward-safe conversion for nonnegative bounds.
    const double d = x.to_double();
    if (!std::isfinite(d)) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(std::nextafter(d, std::numeric_limits<double>::infinity()), tiny_err);
}

Real root_angle(long k, int level, mpfr_prec_t prec)
{
    return Real::pi(prec) * Real(2 * mod_floor(k, level), prec) / Real(static_cast<long>(level), prec);
}

void check_eval_args(const Rational &r, mpfr_prec_t prec)
{
    if (r <= 0) {
        throw usage_error("evaluation point r must be positive");
    }
    if (prec < 64) {
        throw usage_error("precision of " + std::to_string(prec) + " bits is too small (minimum 64)");
    }
}

} // namespace

LogComplex::LogComplex(Real lm, Real ph, double e) : log_mag(std::move(lm)), phase(std::move(ph)), err(e) {}

LogComplex LogComplex::from_complex(const ComplexReal &z, double abs_err)
{
    const Real mag = z.abs();
    if (mag.is_zero()) {
        return LogComplex(Real::infinity(-1, mag.precision()), Real(mag.precision()),
                          std::numeric_limits<double>::infinity());
    }
    return LogComplex(log(mag), z.arg(), as_bound(Real(abs_err, mag.precision()) / mag));
}

LogComplex &LogComplex::operator*=(const LogComplex &o)
{
    log_mag += o.log_mag;
    phase = reduce_angle(phase + o.phase);
    err += o.err;
    return *this;
}

LogComplex &LogComplex::operator/=(const LogComplex &o)
{
    log_mag -= o.log_mag;
    phase = reduce_angle(phase - o.phase);
    err += o.err;
    return *this;
}

LogComplex LogComplex::pow(long e) const
{
    const auto prec = log_mag.precision();
    return LogComplex(log_mag * Real(e, prec), reduce_angle(phase * Real(e, prec)),
                      err * static_cast<double>(std::labs(e)));
}

ComplexReal LogComplex::to_complex() const
{
    if (!log_mag.is_finite() || std::fabs(log_mag.to_double()) > max_convertible_log) {
        throw inconclusive_error("LogComplex: log-magnitude " + log_mag.to_string(6)
                                 + " is outside the convertible range");
    }
    return ComplexReal::polar(exp(log_mag), phase);
}

Real LogComplex::magnitude() const
{
    return exp(log_mag);
}

LogComplex operator*(LogComplex a, const LogComplex &b)
{
    return a *= b;
}

LogComplex operator/(LogComplex a, const LogComplex &b)
{
    return a /= b;
}

LogComplex add(const LogComplex &a, const LogComplex &b)
{
    const LogComplex &big = a.log_mag >= b.log_mag ? a : b;
    const LogComplex &small = a.log_mag >= b.log_mag ? b : a;
    const auto prec = std::max(a.log_mag.precision(), b.log_mag.precision());
    if (!small.log_mag.is_finite()) {
        return big;
    }
    const Real w = exp(small.log_mag - big.log_mag);
    const ComplexReal z = ComplexReal(Real(1l, prec), Real(prec)) + ComplexReal::polar(w, small.phase - big.phase);
    const Real zabs = z.abs();
    const double e = as_bound((Real(big.err, prec) + w * Real(small.err, prec)) / zabs);
    return LogComplex(big.log_mag + log(zabs), reduce_angle(big.phase + z.arg()), e);
}

Real two_pi_r(const Rational &r, mpfr_prec_t prec)
{
    return Real::pi(prec) * Real(2l, prec) * Real(r, prec);
}

long product_cutoff(const Rational &r, mpfr_prec_t prec)
{
    const double digits = static_cast<double>(prec) * std::log10(2.0);
    const double two_pi_r_d = 2.0 * M_PI * r.get_d();
    return static_cast<long>(std::ceil(digits * std::log(10.0) / two_pi_r_d)) + 1;
}

LogComplex eval_siegel_unit_raw(int level, long a_in, long b_in, const Rational &r, mpfr_prec_t prec)
{
    check_eval_args(r, prec);
    if (level < 2) {
        throw usage_error("eval_siegel_unit: level must be at least 2");
    }
    const long n = level;
    const long a = mod_floor(a_in, n);
    const long b = mod_floor(b_in, n);
    if (a == 0 && b == 0) {
        throw usage_error("eval_siegel_unit: index vector is zero mod Z^2");
    }
    const long power = 12 * n;
    const Real one(1l, prec);
    const Real log_t = -two_pi_r(r, prec) / Real(n, prec);

    Real sum_log(prec);
    Real sum_arg(prec);
    long count = 0;
    // Accumulates log(1 - t^e zeta^k).
    auto add_factor = [&](long e, long k) {
        const Real mag = exp(log_t * Real(e, prec));
        const Real ang = root_angle(k, level, prec);
        const Real zr = mag * cos(ang);
        const Real zi = mag * sin(ang);
        sum_log += Real(0.5, prec) * log1p(mag * mag - Real(2l, prec) * zr);
        sum_arg += atan2(-zi, one - zr);
        ++count;
    };
    if (a == 0) {
        add_factor(0, b);
    } else {
        add_factor(a, b);
    }
    const long n_max = product_cutoff(r, prec);
    for (long k = 1; k <= n_max; ++k) {
        add_factor(k * n + a, b);
        add_factor(k * n - a, -b);
    }

    const Real lead_log = log_t * Real(siegel_t_order(level, a), prec);
    Real log_mag = lead_log + Real(power, prec) * sum_log;
    Real phase = reduce_angle(root_angle(6 * b * (a - n), level, prec) + Real(power, prec) * sum_arg);

    const double u = ulp_of(prec);
    const double scale = 1.0 + std::fabs(sum_log.to_double()) + std::fabs(sum_arg.to_double());
    const double rounding = static_cast<double>(power) * 8.0 * static_cast<double>(count + 1) * u * scale
                            + 4.0 * u * (1.0 + std::fabs(lead_log.to_double()));
    // |log prod_{n > n_max}| <= 4 R^(n_max - 1) / (1 - R) per unit exponent.
    const Real big_r = exp(-two_pi_r(r, prec));
    const Real tail = Real(4 * power, prec) * exp(log(big_r) * Real(n_max - 1, prec)) / (one - big_r);
    return LogComplex(std::move(log_mag), std::move(phase), rounding + as_bound(tail));
}

LogComplex eval_siegel_unit(const IndexVector &v, const Rational &r, mpfr_prec_t prec)
{
    return eval_siegel_unit_raw(v.level(), v.a(), v.b(), r, prec);
}

UnitEvaluator::UnitEvaluator(int level, Rational r, mpfr_prec_t prec) : m_level(level), m_r(std::move(r)), m_prec(prec)
{
    check_eval_args(m_r, m_prec);
}

const LogComplex &UnitEvaluator::unit(const IndexVector &v)
{
    if (v.level() != m_level) {
        throw usage_error("UnitEvaluator: level mismatch");
    }
    auto it = m_units.find(v);
    if (it == m_units.end()) {
        it = m_units.emplace(v, eval_siegel_unit(v, m_r, m_prec)).first;
    }
    return it->second;
}

LogComplex UnitEvaluator::ratio(const GConfig &cfg, const GroupElement &sigma)
{
    if (cfg.level != m_level || sigma.level() != m_level) {
        throw usage_error("UnitEvaluator: level mismatch");
    }
    const auto [v_l, v_m] = image_indices(sigma);
    const LogComplex &base_l = unit(IndexVector(m_level, 0, 1));
    const LogComplex &base_m = unit(IndexVector(m_level, 1, 0));
    const LogComplex &img_l = unit(v_l);
    const LogComplex &img_m = unit(v_m);
    const Real lr(cfg.l, m_prec);
    const Real mr(cfg.m, m_prec);
    Real log_mag = -(lr * (img_l.log_mag - base_l.log_mag)) - mr * (img_m.log_mag - base_m.log_mag);
    Real phase = reduce_angle(-(lr * (img_l.phase - base_l.phase)) - mr * (img_m.phase - base_m.phase));
    double e = static_cast<double>(cfg.l) * (img_l.err + base_l.err)
               + static_cast<double>(cfg.m) * (img_m.err + base_m.err);
    if (sigma.is_identity()) {
        e = 0.0;
    }
    return LogComplex(std::move(log_mag), std::move(phase), e);
}

LogComplex eval_ratio(const GConfig &cfg, const GroupElement &sigma, const Rational &r, mpfr_prec_t prec)
{
    UnitEvaluator ev(cfg.level, r, prec);
    return ev.ratio(cfg, sigma);
}

mpz_class factorial_minus_one(std::size_t d)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), d);
    return f - 1;
}

namespace
{

struct CandidateResult {
    Real max_log;
    double err;
};

CandidateResult max_log_ratio(UnitEvaluator &ev, const GConfig &cfg, const std::vector<GroupElement> &group)
{
    Real best = Real::infinity(-1, ev.precision());
    Real best_upper = Real::infinity(-1, ev.precision());
    double best_err = 0.0;
    for (const auto &sigma : group) {
        if (sigma.is_identity()) {
            continue;
        }
        const LogComplex r = ev.ratio(cfg, sigma);
        const Real upper = r.log_mag + Real(r.err, ev.precision());
        if (upper > best_upper) {
            best_upper = upper;
            best = r.log_mag;
            best_err = r.err;
        }
    }
    return {best, best_err};
}

} // namespace

SearchParams find_parameters(int level, std::optional<Rational> epsilon, const SearchOptions &opts)
{
    if (level < 2) {
        throw usage_error("find_parameters: level must be at least 2");
    }
    const auto group = enumerate_group(level);
    const std::size_t d = group.size();
    const mpz_class dfact_m1 = factorial_minus_one(d);
    const Rational eps = epsilon ? *epsilon : Rational(mpz_class(1), dfact_m1);
    if (eps <= 0) {
        throw usage_error("find_parameters: epsilon must be positive");
    }

    SearchParams best;
    best.level = level;
    best.epsilon = eps;
    best.d = d;
    best.max_ratio_log = Real::infinity(1, opts.precision);

    std::map<std::pair<long, mpfr_prec_t>, UnitEvaluator> evaluators;
    auto evaluator = [&](long r_exp, mpfr_prec_t prec) -> UnitEvaluator & {
        const auto key = std::make_pair(r_exp, prec);
        auto it = evaluators.find(key);
        if (it == evaluators.end()) {
            it = evaluators.emplace(key, UnitEvaluator(level, Rational(mpz_class(1) << r_exp), prec)).first;
        }
        return it->second;
    };

    std::size_t tried = 0;
    for (long k = 0; tried < opts.budget; ++k) {
        for (long i = 0; i <= k && tried < opts.budget; ++i) {
            const long j = k - i;
            const long m = 1l << j;
            const GConfig cfg(level, m + 1, m);
            ++tried;
            mpfr_prec_t prec = opts.precision;
            for (;;) {
                UnitEvaluator &ev = evaluator(i, prec);
                const Real log_eps = log(Real(eps, prec));
                const auto [max_log, err] = max_log_ratio(ev, cfg, group);
                const Real e(err, prec);
                const bool certified = max_log + e < log_eps;
                const bool ambiguous = !certified && max_log - e < log_eps;
                if (ambiguous && prec * 2 <= opts.max_precision) {
                    prec *= 2;
                    continue;
                }
                if (certified || max_log < best.max_ratio_log) {
                    best.l = cfg.l;
                    best.m = cfg.m;
                    best.r = ev.r();
                    best.max_ratio_log = max_log;
                    best.max_ratio_err = err;
                    best.precision = prec;
                    best.certified = certified;
                    best.big_r = exp(-two_pi_r(best.r, prec));
                }
                break;
            }
            if (best.certified) {
                best.candidates_tried = tried;
                return best;
            }
        }
    }
    best.candidates_tried = tried;
    return best;
}

DetResult ratio_matrix_det(const GConfig &cfg, const Subgroup &h, const Rational &r, mpfr_prec_t prec)
{
    if (h.elements.empty()) {
        throw usage_error("ratio_matrix_det: empty subgroup");
    }
    UnitEvaluator ev(cfg.level, r, prec);
    const auto &elems = h.elements;
    const std::size_t n = elems.size();

    std::map<GroupElement, LogComplex> ratios;
    Real max_ratio(prec);
    for (const auto &s : elems) {
        LogComplex lc = ev.ratio(cfg, s);
        if (!s.is_identity()) {
            max_ratio = max(max_ratio, exp(lc.log_mag + Real(lc.err, prec)));
        }
        ratios.emplace(s, std::move(lc));
    }

    // n! - 1 as an exact integer, then the bound 1 - (n! - 1) max_ratio.
    const mpz_class nfact_m1 = factorial_minus_one(n);
    Real lower_bound = Real(1l, prec) - Real(nfact_m1, prec) * max_ratio;

    // Entry (i, j) = g^(sigma_j sigma_i) / g.
    std::vector<std::vector<ComplexReal>> a(n);
    const double u = ulp_of(prec);
    Real entry_err(prec);
    Real entry_max(prec);
    for (std::size_t i = 0; i < n; ++i) {
        a[i].reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            const GroupElement s = multiply(elems[j], elems[i]);
            const auto it = ratios.find(s);
            if (it == ratios.end()) {
                throw usage_error("ratio_matrix_det: element list is not closed under multiplication");
            }
            ComplexReal z = it->second.to_complex();
            const Real mag = z.abs();
            entry_max = max(entry_max, mag);
            entry_err = max(entry_err, mag * Real(std::expm1(it->second.err) + 4.0 * u, prec));
            a[i].push_back(std::move(z));
        }
    }

    // Partial-pivot elimination.
    ComplexReal det(Real(1l, prec), Real(prec));
    bool negate = false;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        Real piv_abs = a[col][col].abs();
        for (std::size_t row = col + 1; row < n; ++row) {
            Real v = a[row][col].abs();
            if (v > piv_abs) {
                piv_abs = std::move(v);
                piv = row;
            }
        }
        if (piv_abs.is_zero()) {
            det = ComplexReal(prec);
            break;
        }
        if (piv != col) {
            std::swap(a[piv], a[col]);
            negate = !negate;
        }
        det *= a[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const ComplexReal f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    if (negate) {
        det.re = -det.re;
        det.im = -det.im;
    }

    // Column-wise Hadamard bound: |det(A + E) - det A| <= (sqrt(n)(|A| + |E|))^n - (sqrt(n)|A|)^n.
    const Real sqrt_n = sqrt(Real(static_cast<long>(n), prec));
    const Real nl(static_cast<long>(n), prec);
    auto power_n = [&](const Real &x) { return exp(log(x) * nl); };
    const Real col_a = sqrt_n * entry_max;
    const Real col_ae = sqrt_n * (entry_max + entry_err);
    Real perturb = power_n(col_ae) - power_n(col_a);
    const Real rounding = Real(8.0 * u, prec) * nl * nl * nl * power_n(max(col_a, Real(1l, prec)));

    DetResult res;
    res.n = n;
    res.det_abs = det.abs();
    res.det_err = as_bound(abs(perturb) + rounding);
    res.det = LogComplex::from_complex(det, res.det_err);
    res.max_ratio = std::move(max_ratio);
    res.lower_bound = std::move(lower_bound);
    return res;
}

SeriesValue evaluate_truncated_series(const QSeries &s, const Rational &r, mpfr_prec_t prec)
{
    check_eval_args(r, prec);
    const Real log_t = -two_pi_r(r, prec) / Real(static_cast<long>(s.level()), prec);
    ComplexReal sum(prec);
    Real err_sum(prec);
    long exp_k = s.min_exp();
    for (const auto &c : s.terms()) {
        if (!c.is_zero()) {
            const Real tk = exp(log_t * Real(exp_k, prec));
            const ComplexEstimate e = embed_complex(c, prec);
            sum += ComplexReal(e.value.re * tk, e.value.im * tk);
            err_sum += Real(e.err, prec) * tk + e.value.abs() * tk * Real(4.0 * ulp_of(prec), prec);
        }
        ++exp_k;
    }
    return {std::move(sum), as_bound(err_sum)};
}

SeriesValue evaluate_siegel_series(const IndexVector &v, long rel_horizon, const Rational &r, mpfr_prec_t prec)
{
    check_eval_args(r, prec);
    const QSeries s = siegel_power_expansion(v, rel_horizon);
    SeriesValue val = evaluate_truncated_series(s, r, prec);

    const long n = v.level();
    const long a = v.a();
    const long power = 12 * n;
    const Real one(1l, prec);
    const Real log_t = -two_pi_r(r, prec) / Real(n, prec);
    const Real log_s = log_t / Real(2l, prec);

    // log F(s) = -12N sum_e log(1 - s^e) over the product's exponents e.
    Real sum(prec);
    const Real cutoff = Real(-static_cast<long>(prec) - 20, prec) * log(Real(2l, prec));
    auto add_exp = [&](long e) {
        const Real se = exp(log_s * Real(e, prec));
        sum -= log1p(-se);
    };
    if (a > 0) {
        add_exp(a);
    }
    long k = 1;
    for (; log_s * Real(k * n - a, prec) > cutoff; ++k) {
        add_exp(k * n + a);
        add_exp(k * n - a);
    }
    // Remaining exponents e >= kN - a, at most two per block of N: bound by 4 s^e0 / ((1-s)(1-s^e0)).
    const Real s_val = exp(log_s);
    const Real s_e0 = exp(log_s * Real(k * n - a, prec));
    sum += Real(4l, prec) * s_e0 / ((one - s_val) * (one - s_e0));
    const Real log_f = Real(power, prec) * sum;

    // |constant factor|^(12N): |1 - zeta^b| = 2 |sin(pi b / N)| when a = 0.
    Real log_c(prec);
    if (a == 0) {
        const Real sn = abs(sin(Real::pi(prec) * Real(static_cast<long>(v.b()), prec) / Real(n, prec)));
        log_c = Real(power, prec) * log(Real(2l, prec) * sn);
    }
    // tail <= t^order |c|^(12N) F(s) (t/s)^p / (1 - t/s), t/s = s.
    const long order = siegel_t_order(v.level(), a);
    const Real log_tail = log_t * Real(order, prec) + log_c + log_f + log_s * Real(rel_horizon, prec)
                          - log(one - s_val);
    val.err += as_bound(exp(log_tail));
    return val;
}

} // namespace modfree

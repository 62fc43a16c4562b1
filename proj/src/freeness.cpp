#include <modfree/freeness.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <modfree/errors.hpp>

namespace modfree
{

bool PrimitivityReport::pass() const noexcept
{
    return conclusive && std::all_of(entries.begin(), entries.end(), [](const PrimitivityEntry &e) {
               return e.excluded_by_orders && e.witness.has_value();
           });
}

std::vector<GroupElement> PrimitivityReport::unseparated() const
{
    std::vector<GroupElement> out;
    for (const auto &e : entries) {
        if (!e.witness) {
            out.push_back(e.sigma);
        }
    }
    return out;
}

PrimitivityReport check_primitivity(const GConfig &cfg, long rel_horizon, ExpansionCache *cache)
{
    if (rel_horizon < 1) {
        throw usage_error("check_primitivity: horizon must be at least 1");
    }
    ExpansionCache local;
    ExpansionCache *c = cache != nullptr ? cache : &local;
    const int n = cfg.level;
    const GroupElement s(n, 0, -1, 1, 0);
    const Rational ord_g_s = image_order(cfg, s);

    PrimitivityReport rep{cfg, rel_horizon, {}, true};
    for (const auto &sigma : enumerate_group(n)) {
        if (sigma.is_identity()) {
            continue;
        }
        PrimitivityEntry e{sigma, ratio_order(cfg, sigma), false, std::nullopt};
        if (e.ratio_order != 0) {
            e.excluded_by_orders = true;
        } else {
            // sigma in +-Gamma_1(N): compare ord (g^sigma)^S = ord g^(sigma S) with ord g^S.
            e.excluded_by_orders = image_order(cfg, multiply(sigma, s)) != ord_g_s;
        }

        for (long h = std::min(8l, rel_horizon);; h = std::min(2 * h, rel_horizon)) {
            const QSeries g = g_expansion(cfg, h, c);
            const QSeries gs = g_image_expansion(cfg, sigma, h, c);
            e.g_leading = t_order(g);
            e.image_leading = t_order(gs);
            const long k = std::min(g.horizon(), gs.horizon());
            e.witness = first_difference(gs, g, k);
            if (e.witness || h == rel_horizon) {
                break;
            }
        }
        if (!e.witness) {
            rep.conclusive = false;
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

std::string to_string(Method m)
{
    return m == Method::symbolic ? "symbolic" : "numeric";
}

std::string to_string(Scope s)
{
    return s == Scope::gamma0 ? "gamma0" : "full";
}

bool FreenessReport::pass() const noexcept
{
    return std::all_of(records.begin(), records.end(), [](const SubgroupRecord &r) { return r.pass; });
}

bool FreenessReport::inconclusive() const noexcept
{
    return std::any_of(records.begin(), records.end(), [](const SubgroupRecord &r) { return r.inconclusive; });
}

namespace
{

int permutation_sign(const std::vector<std::size_t> &p)
{
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            if (p[i] > p[j]) {
                ++inversions;
            }
        }
    }
    return inversions % 2 == 0 ? 1 : -1;
}

} // namespace

QSeries series_orbit_determinant(const GConfig &cfg, const Subgroup &h, long rel_horizon, ExpansionCache *cache)
{
    const auto &el = h.elements;
    const std::size_t k = el.size();
    if (k == 0) {
        throw usage_error("series_orbit_determinant: empty subgroup");
    }
    ExpansionCache local;
    ExpansionCache *c = cache != nullptr ? cache : &local;

    std::map<GroupElement, QSeries> images;
    for (const auto &s : el) {
        images.emplace(s, g_image_expansion(cfg, s, rel_horizon, c));
    }
    // A[i][j] = (g^sigma_j)^sigma_i = g^(sigma_j sigma_i).
    std::vector<std::vector<const QSeries *>> a(k, std::vector<const QSeries *>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const auto it = images.find(multiply(el[j], el[i]));
            if (it == images.end()) {
                throw usage_error("series_orbit_determinant: element list is not a subgroup");
            }
            a[i][j] = &it->second;
        }
    }

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<QSeries> det;
    do {
        QSeries term = *a[0][perm[0]];
        for (std::size_t i = 1; i < k; ++i) {
            term = series_mul(term, *a[i][perm[i]]);
        }
        if (permutation_sign(perm) < 0) {
            term = -term;
        }
        det = det ? *det + term : term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *det;
}

SubgroupRecord certify_subgroup_symbolic(const GConfig &cfg, const Subgroup &h, ExpansionCache *cache,
                                         long det_rel_horizon)
{
    for (const auto &s : h.elements) {
        if (s.level() != cfg.level) {
            throw usage_error("certify_subgroup_symbolic: subgroup level differs from N");
        }
        if (!is_member(s, Family::gamma0_upper)) {
            throw usage_error("certify_subgroup_symbolic: " + s.to_string() + " is outside the Gamma^0(N) image");
        }
    }
    SubgroupRecord rec;
    rec.generators = h.generators;
    rec.order = h.order();
    rec.method = Method::symbolic;
    rec.certificate = "order-gap";
    rec.pass = true;
    for (const auto &s : h.elements) {
        if (s.is_identity()) {
            continue;
        }
        const Rational gap = ratio_order(cfg, s);
        if (!rec.min_gap || gap < *rec.min_gap) {
            rec.min_gap = gap;
        }
        if (gap <= 0) {
            rec.pass = false;
            rec.note = "nonpositive ratio order at " + s.to_string();
        }
    }
    rec.value = rec.min_gap ? rec.min_gap->get_str() : "none";

    if (h.order() <= direct_determinant_limit) {
        const QSeries det = series_orbit_determinant(cfg, h, det_rel_horizon, cache);
        const long g_t_order = t_order(g_expansion(cfg, 1, cache));
        rec.expected_det_t_order = static_cast<long>(h.order()) * g_t_order;
        try {
            rec.det_t_order = t_order(det);
        } catch (const inconclusive_error &) {
            rec.inconclusive = true;
            rec.pass = false;
            rec.note = "determinant vanishes up to its horizon";
        }
        if (rec.det_t_order && *rec.det_t_order != *rec.expected_det_t_order) {
            rec.pass = false;
            rec.note = "determinant t-order differs from k * t_order(g)";
        }
    }
    return rec;
}

SearchParams evaluate_parameters(const GConfig &cfg, const Rational &r, std::optional<Rational> epsilon,
                                 mpfr_prec_t prec)
{
    const auto group = enumerate_group(cfg.level);
    SearchParams p;
    p.level = cfg.level;
    p.l = cfg.l;
    p.m = cfg.m;
    p.r = r;
    p.d = group.size();
    p.epsilon = epsilon ? *epsilon : Rational(mpz_class(1), factorial_minus_one(p.d));
    if (p.epsilon <= 0) {
        throw usage_error("epsilon must be positive");
    }
    p.precision = prec;
    p.candidates_tried = 1;
    UnitEvaluator ev(cfg.level, r, prec);
    Real best = Real::infinity(-1, prec);
    Real best_upper = Real::infinity(-1, prec);
    for (const auto &s : group) {
        if (s.is_identity()) {
            continue;
        }
        const LogComplex lc = ev.ratio(cfg, s);
        const Real upper = lc.log_mag + Real(lc.err, prec);
        if (upper > best_upper) {
            best_upper = upper;
            best = lc.log_mag;
            p.max_ratio_err = lc.err;
        }
    }
    p.max_ratio_log = best;
    p.big_r = exp(-two_pi_r(r, prec));
    p.certified = best_upper < log(Real(p.epsilon, prec));
    return p;
}

SubgroupRecord certify_subgroup_numeric(const GConfig &cfg, const Subgroup &h, const SearchParams &params)
{
    if (params.level != cfg.level || params.l != cfg.l || params.m != cfg.m) {
        throw usage_error("certify_subgroup_numeric: search parameters were produced for a different (N, l, m)");
    }
    SubgroupRecord rec;
    rec.generators = h.generators;
    rec.order = h.order();
    rec.method = Method::numeric;
    rec.certificate = "det-lower-bound";

    mpfr_prec_t prec = params.precision;
    DetResult res = ratio_matrix_det(cfg, h, params.r, prec);
    if (res.det_abs <= Real(res.det_err, prec)) {
        prec *= 2;
        res = ratio_matrix_det(cfg, h, params.r, prec);
    }
    const bool bound_ok = res.lower_bound > Real(0l, prec);
    const bool det_ok = res.det_abs > Real(res.det_err, prec);
    rec.pass = bound_ok && det_ok;
    rec.inconclusive = bound_ok && !det_ok;
    rec.value = res.lower_bound.to_string(20);
    rec.det_abs = res.det_abs.to_string(20);
    rec.det_err = Real(res.det_err, 64).to_string(6);
    rec.max_ratio = res.max_ratio.to_string(20);
    if (!bound_ok) {
        rec.note = "analytic lower bound is not positive";
    } else if (!det_ok) {
        rec.note = "measured determinant is within its error";
    }
    return rec;
}

namespace
{

// Runs fn(i) for i in [0, count) on up to `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn fn)
{
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(count));
    for (unsigned w = 0; w < n; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    workers.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

bool inside(const Subgroup &h, Family f)
{
    return std::all_of(h.elements.begin(), h.elements.end(), [f](const GroupElement &g) { return is_member(g, f); });
}

} // namespace

FreenessReport sweep_complete_freeness(const GConfig &cfg, Scope scope, const std::optional<SearchParams> &params,
                                       const SweepOptions &opts)
{
    FreenessReport rep;
    rep.level = cfg.level;
    rep.l = cfg.l;
    rep.m = cfg.m;
    rep.scope = scope;

    const auto group = enumerate_group(cfg.level);
    std::vector<GroupElement> domain;
    if (scope == Scope::gamma0) {
        domain = family_image(group, Family::gamma0_upper);
    } else {
        if (!params) {
            throw usage_error("the full scope requires search parameters");
        }
        rep.r = params->r;
        domain = group;
    }
    const auto subgroups = enumerate_subgroups(domain, opts.subgroup_bound);
    rep.records.resize(subgroups.size());
    ExpansionCache cache(opts.store);
    parallel_for(subgroups.size(), opts.jobs, [&](std::size_t i) {
        const Subgroup &h = subgroups[i];
        if (scope == Scope::gamma0) {
            rep.records[i] = certify_subgroup_symbolic(cfg, h, &cache, opts.det_rel_horizon);
            return;
        }
        SubgroupRecord rec = certify_subgroup_numeric(cfg, h, *params);
        if (inside(h, Family::gamma0_upper)) {
            rec.symbolic_cross_check = certify_subgroup_symbolic(cfg, h, &cache, opts.det_rel_horizon).pass;
        }
        rep.records[i] = std::move(rec);
    });
    return rep;
}

} // namespace modfree

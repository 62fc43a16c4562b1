// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <modfree/cli.hpp>
#include <modfree/freeness.hpp>
#include <modfree/json_io.hpp>

using namespace modfree;
namespace fs = std::filesystem;

namespace
{

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string &what)
    {
        if (!cond && ok) {
            ok = false;
            detail = what;
        } else if (!cond) {
            ok = false;
        }
    }
};

std::vector<IndexVector> index_vectors(int n)
{
    std::vector<IndexVector> out;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == 0 && b == 0) {
                continue;
            }
            const IndexVector v(n, a, b);
            if (std::find(out.begin(), out.end(), v) == out.end()) {
                out.push_back(v);
            }
        }
    }
    return out;
}

// 1. t-order of every product expansion equals 6 N^2 B2(<a/N>).
Check order_formula()
{
    Check c;
    for (int n = 2; n <= 6; ++n) {
        for (const auto &v : index_vectors(n)) {
            const long got = t_order(siegel_power_expansion(v, 4));
            const Rational want = Rational(6 * n * n) * bernoulli2(frac_part(make_rational(v.a(), n)));
            c.expect(Rational(got) == want, "N=" + std::to_string(n) + " v=" + v.to_string());
        }
    }
    return c;
}

// 2. expansion(v) == expansion(-v) coefficientwise; act(rho, act(sigma, v)) == act(sigma rho, v).
Check symmetry_and_action()
{
    Check c;
    for (int n = 2; n <= 4; ++n) {
        const long h = default_horizon(n);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == 0 && b == 0) {
                    continue;
                }
                const QSeries p = siegel_power_expansion_raw(n, a, b, h);
                const QSeries m = siegel_power_expansion_raw(n, -a, -b, h);
                c.expect(p.min_exp() == m.min_exp() && p.horizon() == m.horizon()
                             && series_eq_up_to(p, m, p.horizon()),
                         "expansion differs for +-(" + std::to_string(a) + "," + std::to_string(b) + ") N="
                             + std::to_string(n));
            }
        }
        const auto group = enumerate_group(n);
        for (const auto &v : index_vectors(n)) {
            for (const auto &s : group) {
                for (const auto &r : group) {
                    c.expect(act_on_index(r, act_on_index(s, v)) == act_on_index(s * r, v),
                             "cocycle fails at N=" + std::to_string(n));
                }
            }
        }
    }
    return c;
}

// 3. ratio_order >= 0 everywhere with equality exactly on the +-Gamma_1(N) image.
Check minimum_order()
{
    Check c;
    const std::pair<long, long> exps[] = {{2, 1}, {3, 1}, {5, 2}};
    for (int n = 2; n <= 6; ++n) {
        const auto gamma1 = family_image(enumerate_group(n), Family::gamma1);
        for (const auto &[l, m] : exps) {
            const auto v = verify_minimum_order(GConfig(n, l, m));
            const std::string tag = "N=" + std::to_string(n) + " l=" + std::to_string(l) + " m=" + std::to_string(m);
            c.expect(v.pass(), "verdict fails at " + tag);
            c.expect(v.equality_set == gamma1, "equality set differs from +-Gamma_1 at " + tag);
            for (const auto &e : v.entries) {
                c.expect(e.order >= 0, "negative ratio order at " + tag);
            }
        }
    }
    return c;
}

// 4. Every non-identity coset moves g, with a differing coefficient below the default horizon.
Check primitivity()
{
    Check c;
    for (int n = 2; n <= 5; ++n) {
        const auto rep = check_primitivity(GConfig(n, 2, 1), default_horizon(n));
        c.expect(rep.pass(), "not separated at N=" + std::to_string(n));
        c.expect(rep.entries.size() + 1 == enumerate_group(n).size(), "coset count at N=" + std::to_string(n));
        for (const auto &e : rep.entries) {
            c.expect(e.witness.has_value(), "no witness for " + e.sigma.to_string());
        }
    }
    return c;
}

// 5. Symbolic certificates for every subgroup of the Gamma^0(N) image, N = 2, 3, 4.
Check gamma0_sweep()
{
    Check c;
    for (int n = 2; n <= 4; ++n) {
        const GConfig cfg(n, 2, 1);
        const auto rep = sweep_complete_freeness(cfg, Scope::gamma0, std::nullopt);
        const auto image = family_image(enumerate_group(n), Family::gamma0_upper);
        c.expect(rep.records.size() == enumerate_subgroups(image).size(), "record count at N=" + std::to_string(n));
        for (const auto &r : rep.records) {
            const std::string tag = "N=" + std::to_string(n) + " |H|=" + std::to_string(r.order);
            c.expect(r.pass && r.method == Method::symbolic, "certificate fails at " + tag);
            c.expect(r.order == 1 || (r.min_gap && *r.min_gap > 0), "nonpositive gap at " + tag);
            if (r.order <= direct_determinant_limit) {
                c.expect(r.det_t_order && r.expected_det_t_order && *r.det_t_order == *r.expected_det_t_order
                             && Rational(*r.expected_det_t_order) == Rational(static_cast<long>(r.order) * n) * g_order(cfg),
                         "determinant t-order at " + tag);
            }
        }
    }
    return c;
}

// 6. Parameters from the search make every ratio < 1/(d! - 1), and all subgroups pass numerically.
Check end_to_end()
{
    Check c;
    for (int n = 2; n <= 3; ++n) {
        const std::string tag = "N=" + std::to_string(n);
        const SearchParams p = find_parameters(n);
        const mpz_class expect_d = n == 2 ? 6 : 12;
        c.expect(p.certified, "search did not certify at " + tag);
        c.expect(p.d == expect_d && p.epsilon == Rational(mpz_class(1), factorial_minus_one(p.d)), "epsilon at " + tag);
        const GConfig cfg(n, p.l, p.m);
        const Real log_eps = log(Real(p.epsilon, p.precision));
        for (const auto &s : enumerate_group(n)) {
            if (s.is_identity()) {
                continue;
            }
            const LogComplex lc = eval_ratio(cfg, s, p.r, p.precision);
            c.expect(lc.log_mag + Real(lc.err, p.precision) < log_eps, "ratio not below epsilon at " + s.to_string());
        }
        const auto rep = sweep_complete_freeness(cfg, Scope::full, p);
        c.expect(rep.records.size() == enumerate_subgroups(enumerate_group(n)).size(), "record count at " + tag);
        for (const auto &r : rep.records) {
            const std::string rt = tag + " |H|=" + std::to_string(r.order);
            c.expect(r.pass && r.method == Method::numeric, "numeric certificate fails at " + rt);
            c.expect(std::stod(r.value) > 0.0, "lower bound not positive at " + rt);
        }
    }
    return c;
}

// 7. Product evaluation and embedded truncated series agree within their combined bounds.
Check cross_oracle()
{
    Check c;
    const mpfr_prec_t prec = default_precision;
    for (int n = 2; n <= 4; ++n) {
        for (long r : {1, 2}) {
            for (const auto &v : index_vectors(n)) {
                const LogComplex prod = eval_siegel_unit(v, Rational(r), prec);
                const SeriesValue ser = evaluate_siegel_series(v, default_horizon(n), Rational(r), prec);
                const ComplexReal z = prod.to_complex();
                const Real diff = (z - ser.value).abs();
                const Real bound = z.abs() * Real(std::expm1(prod.err), prec) + Real(ser.err, prec);
                c.expect(diff <= bound, "N=" + std::to_string(n) + " r=" + std::to_string(r) + " v=" + v.to_string());
                // The comparison must be informative: both bounds are tiny relative to |z|.
                c.expect(bound < z.abs() * Real(1e-20, prec), "loose bound at v=" + v.to_string());
            }
        }
    }
    return c;
}

struct Proc {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Proc run_binary(const std::string &args, const std::string &env = "")
{
    const fs::path dir = fs::temp_directory_path();
    const std::string tag = std::to_string(::getpid());
    const fs::path out = dir / ("siegel-acc-" + tag + ".out");
    const fs::path err = dir / ("siegel-acc-" + tag + ".err");
    const std::string cmd = env + " " SIEGEL_BINARY " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Proc p{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    fs::remove(out);
    fs::remove(err);
    return p;
}

bool is_error_json(const std::string &s)
{
    try {
        const auto j = json::parse(s);
        return j.contains("code") && j.contains("message") && j.contains("context");
    } catch (const std::exception &) {
        return false;
    }
}

// 8. Byte-identical repeats, cache transparency, and the exit-code contract.
Check plumbing()
{
    Check c;
    const fs::path cache = fs::temp_directory_path() / ("siegel-acc-cache-" + std::to_string(::getpid()));
    const fs::path other = fs::temp_directory_path() / ("siegel-acc-other-" + std::to_string(::getpid()));
    fs::remove_all(cache);
    fs::remove_all(other);
    const std::string env = "SIEGEL_CACHE_DIR=" + cache.string();

    struct Repeat {
        std::string args;
        bool cached;   // accepts --no-cache / --cache-dir
        bool parallel; // accepts --jobs
    };
    const std::vector<Repeat> deterministic = {
        {"expand --N 4 --v 1,3 --horizon 40", true, true},
        {"order --N 2 --l 2 --m 1", false, false},
        {"group --N 3", false, false},
        {"verify-lemma22 --N 5 --l 5 --m 2", false, false},
        {"search --N 3", false, true},
        {"certify --N 3 --scope gamma0", true, true},
        {"certify --N 2 --scope full", true, true},
        {"primitivity --N 3", true, false},
    };
    for (const auto &d : deterministic) {
        const Proc first = run_binary(d.args + (d.cached ? " --no-cache" : ""));
        const Proc again = run_binary(d.args + (d.cached ? " --no-cache" : ""));
        c.expect(first.code == 0 && !first.out.empty(), "failed: '" + d.args + "'");
        c.expect(first.out == again.out, "repeat differs for '" + d.args + "'");
        if (d.cached) {
            const Proc cold = run_binary(d.args, env);
            const Proc warm = run_binary(d.args, env);
            c.expect(first.out == cold.out && cold.out == warm.out, "cache changes output of '" + d.args + "'");
        }
        if (d.parallel) {
            const Proc jobs = run_binary(d.args + " --jobs 3", env);
            c.expect(first.out == jobs.out, "--jobs changes output of '" + d.args + "'");
        }
    }
    c.expect(fs::exists(cache) && !fs::is_empty(cache), "cache directory was not populated");

    // --cache-dir is overridden by the environment variable.
    run_binary("expand --N 3 --v 1,1 --horizon 9 --cache-dir " + other.string(), env);
    c.expect(!fs::exists(other), "SIEGEL_CACHE_DIR did not override --cache-dir");

    // Corrupting every cache entry changes nothing but a single warning.
    const Proc before = run_binary("expand --N 4 --v 1,3 --horizon 40", env);
    for (const auto &e : fs::directory_iterator(cache)) {
        std::ofstream(e.path(), std::ios::trunc) << "{\"version\": 1, \"trunc";
    }
    const Proc after = run_binary("expand --N 4 --v 1,3 --horizon 40", env);
    c.expect(after.code == 0 && after.out == before.out, "corrupt cache entry changed the output");
    c.expect(after.err.find("warning") != std::string::npos, "corrupt entry produced no warning");

    struct Case {
        std::string args;
        int code;
    };
    const std::vector<Case> matrix = {
        {"order --N 2 --l 2 --m 1", 0},
        {"act --N 3 --sigma 0,-1,1,0 --v 0,1", 0},
        {"certify --N 4 --scope gamma0 --no-cache", 0},
        {"", 2},
        {"frobnicate", 2},
        {"order --N 2 --unknown-flag", 2},
        {"order --N 1", 2},
        {"order --N 2 --l 1 --m 2", 2},
        {"order --N 2 --sigma 1,1,1,1", 2},
        {"expand --N 3 --v 0,0 --no-cache", 2},
        {"expand --N 3 --v 1,1 --horizon 0 --no-cache", 2},
        {"search --N 2 --epsilon 1/0", 2},
        {"search --N 2 --precision 16", 2},
        {"group --N 6", 2},
        {"certify --N 2 --scope nowhere", 2},
        {"certify --N 2 --l 2 --m 1 --scope full --r 1 --no-cache", 1},
        {"search --N 2 --budget 3", 3},
        {"primitivity --N 3 --horizon 1 --no-cache", 3},
    };
    for (const auto &m : matrix) {
        const Proc p = run_binary(m.args, env);
        c.expect(p.code == m.code, "'" + m.args + "' exited " + std::to_string(p.code) + ", expected "
                                       + std::to_string(m.code));
        if (m.code != 0) {
            const auto nl = p.err.find_last_of('\n', p.err.size() - 2);
            const std::string last = nl == std::string::npos ? p.err : p.err.substr(nl + 1);
            c.expect(is_error_json(last), "no JSON error for '" + m.args + "'");
        }
        if (m.code == 2) {
            c.expect(p.out.empty(), "usage error produced output for '" + m.args + "'");
        }
    }
    fs::remove_all(cache);
    fs::remove_all(other);
    return c;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"order formula: t-order = 6N^2 B2(<a/N>), N = 2..6, all v", order_formula},
        {"+-v symmetry of expansions and action cocycle, N = 2..4", symmetry_and_action},
        {"ratio orders >= 0 with equality exactly on +-Gamma_1(N), N = 2..6", minimum_order},
        {"primitivity with explicit witnesses, N = 2..5", primitivity},
        {"symbolic certificates for the Gamma^0(N) image, N = 2..4", gamma0_sweep},
        {"search plus numeric certificates for the full group, N = 2, 3", end_to_end},
        {"product vs series evaluation, N = 2..4, r = 1, 2", cross_oracle},
        {"CLI determinism, cache transparency and exit codes", plumbing},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception &e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu: %s  %s (%.1fs)%s%s\n", i + 1, c.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    secs, c.ok ? "" : "  first failure: ", c.detail.c_str());
        std::fflush(stdout);
        failures += c.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

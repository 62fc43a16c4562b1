#include <modfree/cli.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include <modfree/cache.hpp>
#include <modfree/errors.hpp>
#include <modfree/freeness.hpp>
#include <modfree/json_io.hpp>

namespace modfree::cli
{

namespace fs = std::filesystem;

namespace
{

// Thrown when a command finishes with a failing mathematical verdict; output is already written.
struct verdict_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<long> parse_ints(const std::string &s, std::size_t count, const std::string &flag)
{
    std::vector<long> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stol(part, &used));
            if (used != part.size()) {
                throw std::invalid_argument(part);
            }
        } catch (const std::exception &) {
            throw usage_error(flag + ": '" + s + "' is not a comma-separated list of integers");
        }
    }
    if (out.size() != count) {
        throw usage_error(flag + ": expected " + std::to_string(count) + " integers, got '" + s + "'");
    }
    return out;
}

GroupElement parse_sigma(int level, const std::string &s)
{
    const auto e = parse_ints(s, 4, "--sigma");
    return GroupElement(level, e[0], e[1], e[2], e[3]);
}

IndexVector parse_v(int level, const std::string &s)
{
    const auto e = parse_ints(s, 2, "--v");
    return IndexVector(level, e[0], e[1]);
}

struct Common {
    int level = 0;
    long l = 2;
    long m = 1;
    std::optional<long> horizon;
    long precision = default_precision;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string cache_dir = ".siegel-cache";
    bool no_cache = false;
    std::string out_path;

    void validate() const
    {
        if (level < 2) {
            throw usage_error("--N must be at least 2");
        }
        if (horizon && *horizon < 1) {
            throw usage_error("--horizon must be at least 1");
        }
        if (precision < 64) {
            throw usage_error("--precision must be at least 64 bits");
        }
        if (jobs < 1) {
            throw usage_error("--jobs must be at least 1");
        }
    }

    GConfig config() const
    {
        return GConfig(level, l, m);
    }

    std::shared_ptr<SeriesStore> store(std::ostream &err) const
    {
        if (no_cache) {
            return nullptr;
        }
        fs::path dir = cache_dir;
        if (const char *env = std::getenv("SIEGEL_CACHE_DIR"); env != nullptr && *env != '\0') {
            dir = env;
        }
        return std::make_shared<DiskSeriesStore>(dir, &err);
    }
};

void emit(const Common &c, std::ostream &out, const std::string &text)
{
    if (c.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out_path, std::ios::trunc);
    f << text;
    if (!f) {
        throw usage_error("cannot write --out file '" + c.out_path + "'");
    }
}

void add_level(CLI::App *cmd, Common &c)
{
    cmd->add_option("--N", c.level, "Level N >= 2")->required();
}

void add_exponents(CLI::App *cmd, Common &c)
{
    cmd->add_option("--l", c.l, "Exponent l (l > m > 0)")->capture_default_str();
    cmd->add_option("--m", c.m, "Exponent m")->capture_default_str();
}

void add_cache(CLI::App *cmd, Common &c)
{
    cmd->add_option("--cache-dir", c.cache_dir, "Expansion cache directory (SIEGEL_CACHE_DIR overrides)")
        ->capture_default_str();
    cmd->add_flag("--no-cache", c.no_cache, "Do not read or write the expansion cache");
}

void add_shared(CLI::App *cmd, Common &c)
{
    cmd->add_option("--precision", c.precision, "MPFR working precision in bits")->capture_default_str();
    cmd->add_option("--jobs", c.jobs, "Worker threads (default: available cores)");
    cmd->add_option("--out", c.out_path, "Write JSON here instead of stdout");
}

// Full-scope parameters: a given r is evaluated as is; otherwise r = 1, 2, 4, ... is tried for
// the given (l, m), or the whole (l, m, r) search runs when neither exponent was supplied.
SearchParams full_scope_params(const Common &c, bool exponents_given, const std::optional<std::string> &r,
                               const std::optional<Rational> &eps, std::size_t budget)
{
    const auto prec = static_cast<mpfr_prec_t>(c.precision);
    if (r) {
        const Rational rv = parse_rational(*r);
        if (rv <= 0) {
            throw usage_error("--r must be positive");
        }
        return evaluate_parameters(c.config(), rv, eps, prec);
    }
    if (!exponents_given) {
        SearchOptions so;
        so.budget = budget;
        so.precision = prec;
        so.max_precision = std::max<mpfr_prec_t>(prec, so.max_precision);
        return find_parameters(c.level, eps, so);
    }
    std::optional<SearchParams> best;
    for (std::size_t i = 0; i < std::min<std::size_t>(budget, 16); ++i) {
        SearchParams p = evaluate_parameters(c.config(), Rational(mpz_class(1) << i), eps, prec);
        p.candidates_tried = i + 1;
        const bool done = p.certified;
        best = std::move(p);
        if (done) {
            break;
        }
    }
    return *best;
}

std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

int report_exit(const FreenessReport &rep)
{
    if (rep.pass()) {
        return ok;
    }
    const bool failed = std::any_of(rep.records.begin(), rep.records.end(),
                                    [](const SubgroupRecord &r) { return !r.pass && !r.inconclusive; });
    return failed ? certification_failure : inconclusive;
}

json error_json(const std::string &code, const std::string &message, const json &context = json::object())
{
    return json{{"code", code}, {"message", message}, {"context", context}};
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Siegel-unit free-element verifier", "siegel"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common c;
    int exit_code = ok;
    std::function<void()> action;

    // expand
    auto *expand = app.add_subcommand("expand", "q-expansion of g_v^(12N) in t = q^(1/N)");
    std::string v_str;
    add_level(expand, c);
    expand->add_option("--v", v_str, "Index vector a,b (meaning (a/N, b/N))")->required();
    expand->add_option("--horizon", c.horizon, "Terms past the leading term (default 40N)");
    add_cache(expand, c);
    add_shared(expand, c);
    expand->callback([&] {
        action = [&] {
            c.validate();
            const IndexVector v = parse_v(c.level, v_str);
            ExpansionCache cache(c.store(err));
            emit(c, out, dump(to_json(cache.unit(v, c.horizon.value_or(default_horizon(c.level))))));
        };
    });

    // order
    auto *order = app.add_subcommand("order", "Exact q-orders");
    std::string sigma_str, order_v;
    bool ratio = false, table = false;
    add_level(order, c);
    add_exponents(order, c);
    order->add_option("--sigma", sigma_str, "Group element a,b,c,d");
    order->add_flag("--ratio", ratio, "Print ord(g^sigma / g) instead of ord(g^sigma)");
    order->add_option("--v", order_v, "Print the q-order of g_v^(12N) for index vector a,b");
    order->add_flag("--table", table, "Print B2(<x>) and 6N B2(<x>) at x = k/N, k = -N..N");
    order->add_option("--out", c.out_path, "Write output here instead of stdout");
    order->callback([&] {
        action = [&] {
            c.validate();
            if (table) {
                json rows = json::array();
                for (long k = -c.level; k <= c.level; ++k) {
                    const Rational x = make_rational(k, c.level);
                    const Rational b = bernoulli2(frac_part(x));
                    rows.push_back(json{{"x", rational_to_string(x)},
                                        {"B2", rational_to_string(b)},
                                        {"q_order", rational_to_string(Rational(6 * c.level) * b)}});
                }
                emit(c, out, dump(json{{"N", c.level}, {"rows", std::move(rows)}}));
                return;
            }
            if (!order_v.empty()) {
                emit(c, out, rational_to_string(siegel_order(parse_v(c.level, order_v))) + "\n");
                return;
            }
            const GConfig cfg = c.config();
            const GroupElement s = sigma_str.empty() ? GroupElement::identity(c.level) : parse_sigma(c.level, sigma_str);
            const Rational value = ratio ? ratio_order(cfg, s) : image_order(cfg, s);
            emit(c, out, rational_to_string(value) + "\n");
        };
    });

    // act
    auto *act = app.add_subcommand("act", "Index-level action v -> sigma^T v");
    std::string act_sigma, act_v;
    add_level(act, c);
    act->add_option("--sigma", act_sigma, "Group element a,b,c,d")->required();
    act->add_option("--v", act_v, "Index vector a,b")->required();
    act->callback([&] {
        action = [&] {
            c.validate();
            const IndexVector w = act_on_index(parse_sigma(c.level, act_sigma), parse_v(c.level, act_v));
            out << dump(json{{"N", c.level}, {"v", json::array({w.a(), w.b()})}});
        };
    });

    // group
    auto *group = app.add_subcommand("group", "Galois group SL2(Z/N)/{+-I} and its subgroup lattice");
    std::size_t bound = default_subgroup_bound;
    std::string family = "all";
    add_level(group, c);
    group->add_option("--bound", bound, "Refuse lattices of groups larger than this (<= 64)")->capture_default_str();
    group->add_option("--family", family, "Restrict to the image of: all, gamma, gamma1, gamma0")
        ->check(CLI::IsMember({"all", "gamma", "gamma1", "gamma0"}))
        ->capture_default_str();
    group->add_option("--out", c.out_path, "Write JSON here instead of stdout");
    group->callback([&] {
        action = [&] {
            c.validate();
            auto elements = enumerate_group(c.level);
            if (family != "all") {
                const Family f = family == "gamma" ? Family::gamma : family == "gamma1" ? Family::gamma1 : Family::gamma0_upper;
                elements = family_image(elements, f);
            }
            const auto subs = enumerate_subgroups(elements, bound);
            emit(c, out, dump(group_lattice_json(elements.size(), subs)));
        };
    });

    // minimum-order verdict
    auto *minorder = app.add_subcommand("verify-lemma22", "ord(g^sigma / g) >= 0 with equality exactly on +-Gamma_1(N)");
    add_level(minorder, c);
    add_exponents(minorder, c);
    minorder->add_option("--out", c.out_path, "Write JSON here instead of stdout");
    minorder->callback([&] {
        action = [&] {
            c.validate();
            const auto v = verify_minimum_order(c.config());
            emit(c, out, dump(to_json(v)));
            if (!v.pass()) {
                throw verdict_failure("minimum-order verdict failed");
            }
        };
    });

    // search
    auto *search = app.add_subcommand("search", "Find (l, m, r) making every orbit ratio smaller than epsilon");
    std::optional<std::string> eps_str;
    std::size_t budget = SearchOptions{}.budget;
    add_level(search, c);
    search->add_option("--epsilon", eps_str, "Target bound p/q (default 1/(d! - 1))");
    search->add_option("--budget", budget, "Number of candidates to try")->capture_default_str();
    add_shared(search, c);
    search->callback([&] {
        action = [&] {
            c.validate();
            if (budget < 1) {
                throw usage_error("--budget must be at least 1");
            }
            std::optional<Rational> eps;
            if (eps_str) {
                eps = parse_rational(*eps_str);
            }
            SearchOptions so;
            so.budget = budget;
            so.precision = static_cast<mpfr_prec_t>(c.precision);
            so.max_precision = std::max<mpfr_prec_t>(so.precision, so.max_precision);
            const SearchParams p = find_parameters(c.level, eps, so);
            emit(c, out, dump(to_json(p)));
            if (!p.certified) {
                throw inconclusive_error("search budget exhausted without a certified candidate",
                                         "budget=" + std::to_string(budget));
            }
        };
    });

    // certify and sweep share their options
    std::string scope_str = "gamma0";
    std::optional<std::string> r_str;
    long det_h = default_det_horizon;
    auto scope_check = CLI::IsMember({"gamma0", "full"});

    auto run_report = [&](int level, bool exponents_given) {
        Common local = c;
        local.level = level;
        local.validate();
        std::optional<Rational> eps;
        if (eps_str) {
            eps = parse_rational(*eps_str);
        }
        const Scope scope = scope_str == "full" ? Scope::full : Scope::gamma0;
        SweepOptions so;
        so.jobs = c.jobs;
        so.det_rel_horizon = det_h;
        so.store = c.store(err);
        if (scope == Scope::gamma0) {
            return sweep_complete_freeness(local.config(), scope, std::nullopt, so);
        }
        const SearchParams p = full_scope_params(local, exponents_given, r_str, eps, budget);
        const GConfig cfg(p.level, p.l, p.m);
        return sweep_complete_freeness(cfg, scope, p, so);
    };

    auto *certify = app.add_subcommand("certify", "Complete-freeness certificates for every subgroup");
    add_level(certify, c);
    add_exponents(certify, c);
    certify->add_option("--scope", scope_str, "gamma0 (symbolic) or full (numeric)")->check(scope_check)->capture_default_str();
    certify->add_option("--r", r_str, "Evaluation point tau = r i for the full scope, as p/q");
    certify->add_option("--epsilon", eps_str, "Ratio bound p/q used when searching r");
    certify->add_option("--budget", budget, "Candidates to try when searching r")->capture_default_str();
    certify->add_option("--det-horizon", det_h, "Relative horizon of direct series determinants")->capture_default_str();
    add_cache(certify, c);
    add_shared(certify, c);
    certify->callback([&] {
        action = [&] {
            if (det_h < 1) {
                throw usage_error("--det-horizon must be at least 1");
            }
            const bool exponents_given = certify->count("--l") > 0 || certify->count("--m") > 0;
            const FreenessReport rep = run_report(c.level, exponents_given);
            emit(c, out, dump(to_json(rep)));
            exit_code = report_exit(rep);
        };
    });

    auto *sweep = app.add_subcommand("sweep", "Batch certify over a range of levels, one report file per level");
    std::string range = "2..4";
    std::string results_dir = "results";
    sweep->add_option("--N-range", range, "Levels lo..hi")->capture_default_str();
    sweep->add_option("--results-dir", results_dir, "Directory for report files")->capture_default_str();
    add_exponents(sweep, c);
    sweep->add_option("--scope", scope_str, "gamma0 or full")->check(scope_check)->capture_default_str();
    sweep->add_option("--epsilon", eps_str, "Ratio bound p/q for the full scope");
    sweep->add_option("--budget", budget, "Candidates to try when searching r")->capture_default_str();
    sweep->add_option("--det-horizon", det_h, "Relative horizon of direct series determinants")->capture_default_str();
    add_cache(sweep, c);
    sweep->add_option("--precision", c.precision, "MPFR working precision in bits")->capture_default_str();
    sweep->add_option("--jobs", c.jobs, "Worker threads (default: available cores)");
    sweep->callback([&] {
        action = [&] {
            const auto dots = range.find("..");
            if (dots == std::string::npos) {
                throw usage_error("--N-range must look like lo..hi");
            }
            const auto lo = parse_ints(range.substr(0, dots), 1, "--N-range")[0];
            const auto hi = parse_ints(range.substr(dots + 2), 1, "--N-range")[0];
            if (lo < 2 || hi < lo) {
                throw usage_error("--N-range needs 2 <= lo <= hi");
            }
            if (det_h < 1) {
                throw usage_error("--det-horizon must be at least 1");
            }
            const bool exponents_given = sweep->count("--l") > 0 || sweep->count("--m") > 0;
            fs::create_directories(results_dir);
            const std::string stamp = timestamp();
            json files = json::array();
            int worst = ok;
            for (long n = lo; n <= hi; ++n) {
                const FreenessReport rep = run_report(static_cast<int>(n), exponents_given);
                const std::string base = "report-N" + std::to_string(n) + "-l" + std::to_string(rep.l) + "-m"
                                         + std::to_string(rep.m) + "-" + to_string(rep.scope) + "-" + stamp;
                fs::path path = fs::path(results_dir) / (base + ".json");
                for (int k = 1; fs::exists(path); ++k) {
                    path = fs::path(results_dir) / (base + "." + std::to_string(k) + ".json");
                }
                std::ofstream f(path);
                f << dump(to_json(rep));
                if (!f) {
                    throw usage_error("cannot write " + path.string());
                }
                const int code = report_exit(rep);
                if (code == certification_failure || (code == inconclusive && worst == ok)) {
                    worst = code;
                }
                files.push_back(json{{"N", n}, {"file", path.string()}, {"pass", rep.pass()}});
            }
            out << dump(json{{"scope", scope_str}, {"reports", std::move(files)}});
            exit_code = worst;
        };
    });

    // primitivity
    auto *prim = app.add_subcommand("primitivity", "Check that no non-identity coset fixes g");
    add_level(prim, c);
    add_exponents(prim, c);
    prim->add_option("--horizon", c.horizon, "Largest comparison horizon, relative (default 40N)");
    add_cache(prim, c);
    prim->add_option("--out", c.out_path, "Write JSON here instead of stdout");
    prim->callback([&] {
        action = [&] {
            c.validate();
            ExpansionCache cache(c.store(err));
            const auto rep = check_primitivity(c.config(), c.horizon.value_or(default_horizon(c.level)), &cache);
            emit(c, out, dump(to_json(rep)));
            if (!rep.conclusive) {
                json unsep = json::array();
                for (const auto &s : rep.unseparated()) {
                    unsep.push_back(to_json(s));
                }
                throw inconclusive_error("some cosets are not separated below the horizon; raise --horizon",
                                         unsep.dump());
            }
            if (!rep.pass()) {
                throw verdict_failure("primitivity verdict failed");
            }
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError &e) {
        err << error_json("usage", e.what()).dump() << "\n";
        return usage;
    }

    try {
        if (action) {
            action();
        }
        if (exit_code == certification_failure) {
            err << error_json("certification_failure", "at least one subgroup certificate failed").dump() << "\n";
        } else if (exit_code == inconclusive) {
            err << error_json("inconclusive", "at least one subgroup certificate is inconclusive").dump() << "\n";
        }
        return exit_code;
    } catch (const verdict_failure &e) {
        err << error_json("certification_failure", e.what()).dump() << "\n";
        return certification_failure;
    } catch (const usage_error &e) {
        err << error_json("usage", e.what()).dump() << "\n";
        return usage;
    } catch (const inconclusive_error &e) {
        err << error_json("inconclusive", e.what(), json{{"detail", e.context()}}).dump() << "\n";
        return inconclusive;
    } catch (const division_by_zero &e) {
        err << error_json("division_by_zero", e.what()).dump() << "\n";
        return usage;
    } catch (const std::exception &e) {
        err << error_json("internal", e.what()).dump() << "\n";
        return certification_failure;
    }
}

} // namespace modfree::cli

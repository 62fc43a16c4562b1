#include <modfree/json_io.hpp>

#include <cctype>

#include <modfree/errors.hpp>

namespace modfree
{

std::string rational_to_string(const Rational &x)
{
    return x.get_str();
}

namespace
{

bool all_digits(const std::string &s, std::size_t from, std::size_t to)
{
    if (from >= to) {
        return false;
    }
    for (std::size_t i = from; i < to; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return true;
}

} // namespace

Rational parse_rational(const std::string &s)
{
    const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    const auto slash = s.find('/');
    const std::size_t num_end = slash == std::string::npos ? s.size() : slash;
    if (!all_digits(s, start, num_end) || (slash != std::string::npos && !all_digits(s, slash + 1, s.size()))) {
        throw usage_error("malformed rational '" + s + "' (expected p/q)");
    }
    mpz_class num(s.substr(start, num_end - start));
    mpz_class den = slash == std::string::npos ? mpz_class(1) : mpz_class(s.substr(slash + 1));
    if (den == 0) {
        throw usage_error("rational '" + s + "' has zero denominator");
    }
    if (s[0] == '-') {
        num = -num;
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

json to_json(const CycNum &c)
{
    json arr = json::array();
    for (int i = 0; i < c.degree(); ++i) {
        arr.push_back(rational_to_string(c.coord(i)));
    }
    return arr;
}

CycNum cycnum_from_json(int conductor, const json &j)
{
    if (!j.is_array()) {
        throw usage_error("coefficient must be an array of rational strings");
    }
    std::vector<Rational> coords;
    for (const auto &x : j) {
        coords.push_back(parse_rational(x.get<std::string>()));
    }
    if (static_cast<int>(coords.size()) != euler_phi(conductor)) {
        throw usage_error("coefficient has " + std::to_string(coords.size()) + " coordinates, expected "
                          + std::to_string(euler_phi(conductor)));
    }
    return CycNum(conductor, coords);
}

json to_json(const QSeries &s)
{
    json coeffs = json::array();
    for (const auto &c : s.terms()) {
        coeffs.push_back(to_json(c));
    }
    return json{{"level", s.level()},
                {"conductor", s.conductor()},
                {"min_exp", s.min_exp()},
                {"horizon", s.horizon()},
                {"coeffs", std::move(coeffs)}};
}

QSeries qseries_from_json(const json &j)
{
    try {
        const int level = j.at("level").get<int>();
        const int conductor = j.at("conductor").get<int>();
        std::vector<CycNum> coeffs;
        for (const auto &c : j.at("coeffs")) {
            coeffs.push_back(cycnum_from_json(conductor, c));
        }
        return QSeries(level, conductor, j.at("min_exp").get<long>(), std::move(coeffs), j.at("horizon").get<long>());
    } catch (const json::exception &e) {
        throw usage_error(std::string("malformed series JSON: ") + e.what());
    }
}

json to_json(const GroupElement &g)
{
    return json::array({g.a(), g.b(), g.c(), g.d()});
}

GroupElement group_element_from_json(int level, const json &j)
{
    if (!j.is_array() || j.size() != 4) {
        throw usage_error("group element must be [a, b, c, d]");
    }
    return GroupElement(level, j[0].get<long>(), j[1].get<long>(), j[2].get<long>(), j[3].get<long>());
}

namespace
{

json elements_json(std::span<const GroupElement> els)
{
    json arr = json::array();
    for (const auto &g : els) {
        arr.push_back(to_json(g));
    }
    return arr;
}

std::string err_string(double e)
{
    return Real(e, 64).to_string(6);
}

} // namespace

json to_json(const SearchParams &p)
{
    return json{{"N", p.level},
                {"d", p.d},
                {"epsilon", rational_to_string(p.epsilon)},
                {"l", p.l},
                {"m", p.m},
                {"r", rational_to_string(p.r)},
                {"R", p.big_r.to_string(20)},
                {"max_ratio_log", p.max_ratio_log.to_string(20)},
                {"max_ratio_log_err", err_string(p.max_ratio_err)},
                {"precision", p.precision},
                {"candidates_tried", p.candidates_tried},
                {"certified", p.certified}};
}

json to_json(const MinimumOrderVerdict &v)
{
    json entries = json::array();
    for (const auto &e : v.entries) {
        entries.push_back(json{{"sigma", to_json(e.sigma)},
                               {"ratio_order", rational_to_string(e.order)},
                               {"in_gamma1", e.in_gamma1}});
    }
    return json{{"N", v.cfg.level},
                {"l", v.cfg.l},
                {"m", v.cfg.m},
                {"pass", v.pass()},
                {"nonnegative", v.nonnegative},
                {"equality_matches_gamma1", v.equality_matches_gamma1},
                {"equality_set", elements_json(v.equality_set)},
                {"entries", std::move(entries)}};
}

json to_json(const PrimitivityReport &r)
{
    json entries = json::array();
    for (const auto &e : r.entries) {
        entries.push_back(json{{"sigma", to_json(e.sigma)},
                               {"ratio_order", rational_to_string(e.ratio_order)},
                               {"excluded_by_orders", e.excluded_by_orders},
                               {"witness", e.witness ? json(*e.witness) : json(nullptr)},
                               {"g_leading", e.g_leading},
                               {"image_leading", e.image_leading}});
    }
    json unseparated = elements_json(r.unseparated());
    return json{{"N", r.cfg.level},
                {"l", r.cfg.l},
                {"m", r.cfg.m},
                {"horizon", r.rel_horizon},
                {"pass", r.pass()},
                {"conclusive", r.conclusive},
                {"unseparated", std::move(unseparated)},
                {"entries", std::move(entries)}};
}

json to_json(const SubgroupRecord &r)
{
    json j{{"order", r.order},
           {"generators", elements_json(r.generators)},
           {"method", to_string(r.method)},
           {"certificate", r.certificate},
           {"value", r.value},
           {"pass", r.pass},
           {"inconclusive", r.inconclusive}};
    if (r.min_gap) {
        j["min_gap"] = rational_to_string(*r.min_gap);
    }
    if (r.det_t_order) {
        j["det_t_order"] = *r.det_t_order;
    }
    if (r.expected_det_t_order) {
        j["expected_det_t_order"] = *r.expected_det_t_order;
    }
    if (r.det_abs) {
        j["det_abs"] = *r.det_abs;
    }
    if (r.det_err) {
        j["det_err"] = *r.det_err;
    }
    if (r.max_ratio) {
        j["max_ratio"] = *r.max_ratio;
    }
    if (r.symbolic_cross_check) {
        j["symbolic_cross_check"] = *r.symbolic_cross_check;
    }
    if (!r.note.empty()) {
        j["note"] = r.note;
    }
    return j;
}

SubgroupRecord subgroup_record_from_json(int level, const json &j)
{
    SubgroupRecord r;
    r.order = j.at("order").get<std::size_t>();
    for (const auto &g : j.at("generators")) {
        r.generators.push_back(group_element_from_json(level, g));
    }
    const auto method = j.at("method").get<std::string>();
    if (method != "symbolic" && method != "numeric") {
        throw usage_error("unknown method '" + method + "'");
    }
    r.method = method == "symbolic" ? Method::symbolic : Method::numeric;
    r.certificate = j.at("certificate").get<std::string>();
    r.value = j.at("value").get<std::string>();
    r.pass = j.at("pass").get<bool>();
    r.inconclusive = j.at("inconclusive").get<bool>();
    if (j.contains("min_gap")) {
        r.min_gap = parse_rational(j["min_gap"].get<std::string>());
    }
    if (j.contains("det_t_order")) {
        r.det_t_order = j["det_t_order"].get<long>();
    }
    if (j.contains("expected_det_t_order")) {
        r.expected_det_t_order = j["expected_det_t_order"].get<long>();
    }
    if (j.contains("det_abs")) {
        r.det_abs = j["det_abs"].get<std::string>();
    }
    if (j.contains("det_err")) {
        r.det_err = j["det_err"].get<std::string>();
    }
    if (j.contains("max_ratio")) {
        r.max_ratio = j["max_ratio"].get<std::string>();
    }
    if (j.contains("symbolic_cross_check")) {
        r.symbolic_cross_check = j["symbolic_cross_check"].get<bool>();
    }
    if (j.contains("note")) {
        r.note = j["note"].get<std::string>();
    }
    return r;
}

json to_json(const FreenessReport &r)
{
    json records = json::array();
    for (const auto &rec : r.records) {
        records.push_back(to_json(rec));
    }
    return json{{"N", r.level},
                {"l", r.l},
                {"m", r.m},
                {"scope", to_string(r.scope)},
                {"r", r.r ? json(rational_to_string(*r.r)) : json(nullptr)},
                {"pass", r.pass()},
                {"inconclusive", r.inconclusive()},
                {"subgroup_count", r.records.size()},
                {"records", std::move(records)}};
}

FreenessReport freeness_report_from_json(const json &j)
{
    try {
        FreenessReport r;
        r.level = j.at("N").get<int>();
        r.l = j.at("l").get<long>();
        r.m = j.at("m").get<long>();
        const auto scope = j.at("scope").get<std::string>();
        if (scope != "gamma0" && scope != "full") {
            throw usage_error("unknown scope '" + scope + "'");
        }
        r.scope = scope == "gamma0" ? Scope::gamma0 : Scope::full;
        if (!j.at("r").is_null()) {
            r.r = parse_rational(j["r"].get<std::string>());
        }
        for (const auto &rec : j.at("records")) {
            r.records.push_back(subgroup_record_from_json(r.level, rec));
        }
        return r;
    } catch (const json::exception &e) {
        throw usage_error(std::string("malformed report JSON: ") + e.what());
    }
}

json group_lattice_json(std::size_t order, std::span<const Subgroup> subgroups)
{
    json subs = json::array();
    for (const auto &h : subgroups) {
        subs.push_back(json{{"order", h.order()}, {"generators", elements_json(h.generators)}});
    }
    return json{{"order", order}, {"subgroup_count", subgroups.size()}, {"subgroups", std::move(subs)}};
}

std::string dump(const json &j)
{
    return j.dump(2) + "\n";
}

} // namespace modfree

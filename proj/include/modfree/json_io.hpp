#ifndef MODFREE_JSON_IO_HPP
#define MODFREE_JSON_IO_HPP

#include <span>
#include <string>

#include <json.hpp>

#include <modfree/freeness.hpp>
#include <modfree/modgroup.hpp>
#include <modfree/numeric.hpp>
#include <modfree/qseries.hpp>
#include <modfree/siegel.hpp>

namespace modfree
{

using json = nlohmann::ordered_json;

// Exact rationals travel as "p/q" strings ("p" when integral).
std::string rational_to_string(const Rational &x);
// Throws usage_error on malformed input or zero denominator.
Rational parse_rational(const std::string &s);

json to_json(const CycNum &c);
CycNum cycnum_from_json(int conductor, const json &j);

// { level, conductor, min_exp, horizon, coeffs: [[coordinate strings]] }
json to_json(const QSeries &s);
QSeries qseries_from_json(const json &j);

json to_json(const GroupElement &g);
GroupElement group_element_from_json(int level, const json &j);

json to_json(const SearchParams &p);
json to_json(const MinimumOrderVerdict &v);
json to_json(const PrimitivityReport &r);

json to_json(const SubgroupRecord &r);
SubgroupRecord subgroup_record_from_json(int level, const json &j);
json to_json(const FreenessReport &r);
FreenessReport freeness_report_from_json(const json &j);

// { order, subgroup_count, subgroups: [{order, generators}] }
json group_lattice_json(std::size_t order, std::span<const Subgroup> subgroups);

// Two-space indented dump with a trailing newline.
std::string dump(const json &j);

} // namespace modfree

#endif

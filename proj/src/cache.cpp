#include <modfree/cache.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <modfree/json_io.hpp>

namespace modfree
{

namespace fs = std::filesystem;

std::uint64_t cache_key(int version, const IndexVector &v, long rel_horizon)
{
    const std::string text = "siegel-power/" + std::to_string(version) + "/" + std::to_string(v.level()) + "/"
                             + std::to_string(v.a()) + "," + std::to_string(v.b()) + "/"
                             + std::to_string(rel_horizon);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

DiskSeriesStore::DiskSeriesStore(fs::path dir, std::ostream *warn) : m_dir(std::move(dir)), m_warn(warn)
{
    fs::create_directories(m_dir);
}

fs::path DiskSeriesStore::entry_path(const IndexVector &v, long rel_horizon) const
{
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.json",
                  static_cast<unsigned long long>(cache_key(cache_format_version, v, rel_horizon)));
    return m_dir / name;
}

void DiskSeriesStore::warn_once(const std::string &msg)
{
    if (m_warn != nullptr && !m_warned.exchange(true)) {
        *m_warn << "warning: " << msg << "\n";
    }
}

QSeries DiskSeriesStore::get_or_compute(const IndexVector &v, long rel_horizon,
                                        const std::function<QSeries()> &produce)
{
    const fs::path path = entry_path(v, rel_horizon);
    if (fs::exists(path)) {
        try {
            std::ifstream in(path);
            const json j = json::parse(in);
            if (j.at("version").get<int>() == cache_format_version && j.at("N").get<int>() == v.level()
                && j.at("v") == json::array({v.a(), v.b()}) && j.at("horizon").get<long>() == rel_horizon) {
                QSeries s = qseries_from_json(j.at("series"));
                ++m_hits;
                return s;
            }
            warn_once("cache entry " + path.string() + " does not match its key; recomputing");
        } catch (const std::exception &) {
            warn_once("cache entry " + path.string() + " is corrupt; recomputing");
        }
    }
    ++m_misses;
    QSeries s = produce();
    const json j{{"version", cache_format_version},
                 {"N", v.level()},
                 {"v", json::array({v.a(), v.b()})},
                 {"horizon", rel_horizon},
                 {"series", to_json(s)}};
    std::ostringstream tag;
    tag << std::this_thread::get_id();
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid()) + "." + tag.str();
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << j.dump();
        if (!out) {
            warn_once("cannot write cache entry " + tmp.string());
            return s;
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        warn_once("cannot install cache entry " + path.string());
    }
    return s;
}

} // namespace modfree

#ifndef MODFREE_CACHE_HPP
#define MODFREE_CACHE_HPP

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

#include <modfree/siegel.hpp>

namespace modfree
{

inline constexpr int cache_format_version = 1;

// FNV-1a over (format version, N, canonical index vector, horizon).
std::uint64_t cache_key(int version, const IndexVector &v, long rel_horizon);

// One JSON file per expansion. Writes go to a temporary file that is renamed into
// place, so readers never see a partial entry. Unreadable or mismatched entries are
// recomputed and overwritten; the first such event is reported on `warn`.
class DiskSeriesStore : public SeriesStore
{
public:
    explicit DiskSeriesStore(std::filesystem::path dir, std::ostream *warn = nullptr);

    QSeries get_or_compute(const IndexVector &v, long rel_horizon,
                           const std::function<QSeries()> &produce) override;

    std::filesystem::path entry_path(const IndexVector &v, long rel_horizon) const;
    const std::filesystem::path &dir() const noexcept
    {
        return m_dir;
    }
    std::size_t hits() const noexcept
    {
        return m_hits;
    }
    std::size_t misses() const noexcept
    {
        return m_misses;
    }

private:
    void warn_once(const std::string &msg);

    std::filesystem::path m_dir;
    std::ostream *m_warn;
    std::atomic<bool> m_warned{false};
    std::atomic<std::size_t> m_hits{0};
    std::atomic<std::size_t> m_misses{0};
};

} // namespace modfree

#endif

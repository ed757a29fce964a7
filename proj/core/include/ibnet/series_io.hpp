#ifndef IBNET_SERIES_IO_HPP
#define IBNET_SERIES_IO_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ibnet/inference.hpp"
#include "ibnet/types.hpp"

namespace ibnet {

// Canonical decimal formatting (shortest round-trippable, %.17g style).
std::string format_double(double v);

// Series CSV: one record per edge, header `day,lender,borrower,weight`.
void write_series_csv(const NetworkSeries& series, const std::filesystem::path& path);
NetworkSeries read_series_csv(const std::filesystem::path& path);

// Key-value metadata sidecar (one `key=value` per line, '#' comments).
using KeyValues = std::vector<std::pair<std::string, std::string>>;
void write_metadata(const std::filesystem::path& path, const KeyValues& kv);
std::map<std::string, std::string> read_metadata(const std::filesystem::path& path);

KeyValues metadata_for(const ModelParams& params, const WeightParams& wp,
                       std::uint64_t seed);

// Histogram CSV `n_p,n_bin_lo,m_bin_lo,prob` plus a `.meta` sidecar holding
// the grid geometry, replicates, smoothing and params fingerprint.
void write_histogram_csv(const ConditionalHistogram& hist,
                         const std::filesystem::path& path);
ConditionalHistogram read_histogram_csv(const std::filesystem::path& path);

} // namespace ibnet

#endif

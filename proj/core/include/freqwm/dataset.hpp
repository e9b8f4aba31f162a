#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace freqwm {

// A dataset is an ordered multiset of opaque tokens. Composite tokens built
// from several CSV columns are joined with the 0x1F unit separator.
inline constexpr char kColumnJoin = '\x1f';

struct TokenDataset {
    std::vector<std::string> tokens;
    // Declared size of the dataset this one was sampled from, if any
    // (read from / written to a ".meta.json" sidecar).
    std::optional<std::uint64_t> original_total_count;
};

struct HistogramEntry {
    std::string token;
    std::int64_t freq = 0; // > 0
};

// Appearance-frequency histogram. Entries are sorted by frequency descending,
// ties broken by token bytes ascending, so equal multisets of (token, freq)
// produce identical histograms.
struct Histogram {
    static constexpr std::int64_t kNoBound = std::numeric_limits<std::int64_t>::max();

    std::vector<HistogramEntry> entries;
    // upper[i]: gap to the next higher frequency (kNoBound for rank 0);
    // lower[i]: gap to the next lower frequency (freq itself for the last rank).
    std::vector<std::int64_t> upper;
    std::vector<std::int64_t> lower;

    std::int64_t total = 0; // sum of frequencies

    // rank of a token, or -1 if absent
    std::int32_t rank_of(const std::string& token) const;

    std::size_t size() const { return entries.size(); }

private:
    friend Histogram histogram_from_counts(std::vector<HistogramEntry> counts);
    std::unordered_map<std::string, std::int32_t> rank_;
};

Histogram build_histogram(const TokenDataset& data);

// Canonical construction from (token, freq) pairs; entries with freq <= 0 are
// dropped. Duplicate tokens are an error.
Histogram histogram_from_counts(std::vector<HistogramEntry> counts);

// Tokens in rank order. Errors on an empty histogram.
std::vector<std::string> rank_sequence(const Histogram& h);

// Cosine similarity of the two frequency vectors over the token union,
// missing tokens contributing 0, expressed as a percentage in [0, 100].
double cosine_similarity(const Histogram& a, const Histogram& b);

// ---- file I/O ----

// CSV column selector: positional indices (0-based) or header names.
struct ColumnSelector {
    std::vector<std::string> names;   // non-empty => header row required
    std::vector<std::size_t> indices; // used when names is empty
    bool skip_header = false;         // index mode: discard the first row
};

// Newline-delimited tokens, one per line. Empty lines are malformed.
TokenDataset ingest_lines(const std::filesystem::path& file);

// CSV per RFC 4180 (quoted fields, "" escapes). The selected columns of each
// record are joined into one token. Malformed records report the line number.
TokenDataset ingest_csv(const std::filesystem::path& file, const ColumnSelector& columns);

// Dispatches on extension: ".csv" requires a selector, anything else is
// newline-delimited. Both read the ".meta.json" sidecar when present.
TokenDataset ingest(const std::filesystem::path& file,
                    const std::optional<ColumnSelector>& columns = std::nullopt);

// Writers mirror the ingest formats. write_dataset dispatches on extension;
// CSV output splits composite tokens back into columns. A sidecar is written
// only when original_total_count is set.
void write_dataset(const TokenDataset& data, const std::filesystem::path& file);

} // namespace freqwm

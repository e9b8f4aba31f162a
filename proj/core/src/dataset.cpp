#include "freqwm/dataset.hpp"

#include "freqwm/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace freqwm {

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& file) {
    std::filesystem::path p = file;
    p += ".meta.json";
    return p;
}

void read_sidecar(const std::filesystem::path& file, TokenDataset& data) {
    const auto meta = sidecar_path(file);
    std::error_code ec;
    if (!std::filesystem::exists(meta, ec)) return;
    std::ifstream in(meta);
    if (!in) throw Error("cannot open sidecar " + meta.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed sidecar " + meta.string() + ": " + e.what());
    }
    if (j.contains("original_total_count")) {
        const auto& v = j["original_total_count"];
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
            throw Error("sidecar original_total_count must be a positive integer: " + meta.string());
        data.original_total_count = v.get<std::uint64_t>();
    }
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// One CSV record, handling quoted fields and embedded newlines.
// Returns false at end of input. line is advanced past consumed lines.
bool next_csv_record(const std::string& text, std::size_t& pos, std::size_t& line,
                     std::vector<std::string>& fields) {
    fields.clear();
    if (pos >= text.size()) return false;
    const std::size_t record_line = line;
    std::string field;
    bool quoted = false, any = false;
    for (;;) {
        if (pos >= text.size()) {
            if (quoted)
                throw Error("unterminated quote in record starting at line " +
                            std::to_string(record_line));
            fields.push_back(std::move(field));
            return true;
        }
        char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty())
                throw Error("stray quote at line " + std::to_string(line));
            quoted = true;
            any = true;
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            any = true;
            break;
        case '\r':
            if (pos < text.size() && text[pos] == '\n') break; // consumed with \n
            field += c;
            break;
        case '\n':
            ++line;
            fields.push_back(std::move(field));
            return true;
        default:
            field += c;
            any = true;
            break;
        }
    }
    (void)any;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::int32_t Histogram::rank_of(const std::string& token) const {
    auto it = rank_.find(token);
    return it == rank_.end() ? -1 : it->second;
}

Histogram histogram_from_counts(std::vector<HistogramEntry> counts) {
    std::erase_if(counts, [](const HistogramEntry& e) { return e.freq <= 0; });
    std::sort(counts.begin(), counts.end(), [](const HistogramEntry& a, const HistogramEntry& b) {
        if (a.freq != b.freq) return a.freq > b.freq;
        return a.token < b.token;
    });
    Histogram h;
    h.entries = std::move(counts);
    const std::size_t n = h.entries.size();
    h.upper.resize(n);
    h.lower.resize(n);
    h.rank_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        h.total += h.entries[i].freq;
        h.upper[i] = i == 0 ? Histogram::kNoBound : h.entries[i - 1].freq - h.entries[i].freq;
        h.lower[i] = i + 1 < n ? h.entries[i].freq - h.entries[i + 1].freq : h.entries[i].freq;
        auto [it, fresh] = h.rank_.emplace(h.entries[i].token, static_cast<std::int32_t>(i));
        if (!fresh) throw Error("duplicate token in histogram counts: " + h.entries[i].token);
    }
    return h;
}

Histogram build_histogram(const TokenDataset& data) {
    if (data.tokens.empty()) throw Error("cannot build a histogram from an empty dataset");
    std::unordered_map<std::string_view, std::int64_t> counts;
    counts.reserve(data.tokens.size() / 4 + 16);
    for (const auto& t : data.tokens) ++counts[t];
    std::vector<HistogramEntry> entries;
    entries.reserve(counts.size());
    for (const auto& [token, freq] : counts) entries.push_back({std::string(token), freq});
    return histogram_from_counts(std::move(entries));
}

std::vector<std::string> rank_sequence(const Histogram& h) {
    if (h.entries.empty()) throw Error("rank_sequence of an empty histogram");
    std::vector<std::string> seq;
    seq.reserve(h.entries.size());
    for (const auto& e : h.entries) seq.push_back(e.token);
    return seq;
}

double cosine_similarity(const Histogram& a, const Histogram& b) {
    if (a.entries.empty() || b.entries.empty())
        throw Error("cosine similarity of an empty frequency vector");
    long double dot = 0, na = 0, nb = 0;
    for (const auto& e : a.entries) {
        na += static_cast<long double>(e.freq) * e.freq;
        const std::int32_t r = b.rank_of(e.token);
        if (r >= 0) dot += static_cast<long double>(e.freq) * b.entries[r].freq;
    }
    for (const auto& e : b.entries) nb += static_cast<long double>(e.freq) * e.freq;
    const long double denom = std::sqrt(na) * std::sqrt(nb);
    double sim = static_cast<double>(100.0L * dot / denom);
    return std::clamp(sim, 0.0, 100.0);
}

TokenDataset ingest_lines(const std::filesystem::path& file) {
    const std::string text = read_file(file);
    TokenDataset data;
    std::size_t line = 1;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::size_t len = end - start;
        if (len > 0 && text[start + len - 1] == '\r') --len;
        if (len == 0)
            throw Error(file.string() + ": empty token at line " + std::to_string(line));
        data.tokens.emplace_back(text, start, len);
        start = end + 1;
        ++line;
    }
    if (data.tokens.empty()) throw Error(file.string() + ": no tokens");
    read_sidecar(file, data);
    return data;
}

TokenDataset ingest_csv(const std::filesystem::path& file, const ColumnSelector& columns) {
    if (columns.names.empty() && columns.indices.empty())
        throw Error("CSV ingest requires a column selector");
    const std::string text = read_file(file);
    TokenDataset data;
    std::size_t pos = 0, line = 1;
    std::vector<std::string> fields;

    std::vector<std::size_t> indices = columns.indices;
    if (!columns.names.empty()) {
        if (!next_csv_record(text, pos, line, fields))
            throw Error(file.string() + ": missing header row");
        indices.clear();
        for (const auto& name : columns.names) {
            auto it = std::find(fields.begin(), fields.end(), name);
            if (it == fields.end())
                throw Error(file.string() + ": column '" + name + "' not in header");
            indices.push_back(static_cast<std::size_t>(it - fields.begin()));
        }
    } else if (columns.skip_header) {
        next_csv_record(text, pos, line, fields);
    }

    while (true) {
        const std::size_t record_line = line;
        if (!next_csv_record(text, pos, line, fields)) break;
        if (fields.size() == 1 && fields[0].empty()) continue; // blank line
        std::string token;
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] >= fields.size())
                throw Error(file.string() + ": record at line " + std::to_string(record_line) +
                            " has " + std::to_string(fields.size()) + " columns, need index " +
                            std::to_string(indices[i]));
            if (i) token += kColumnJoin;
            token += fields[indices[i]];
        }
        if (token.empty())
            throw Error(file.string() + ": empty token at line " + std::to_string(record_line));
        data.tokens.push_back(std::move(token));
    }
    if (data.tokens.empty()) throw Error(file.string() + ": no tokens");
    read_sidecar(file, data);
    return data;
}

TokenDataset ingest(const std::filesystem::path& file, const std::optional<ColumnSelector>& columns) {
    if (file.extension() == ".csv") {
        if (!columns) throw Error("CSV input needs --columns");
        return ingest_csv(file, *columns);
    }
    if (columns) throw Error("--columns only applies to CSV input");
    return ingest_lines(file);
}

void write_dataset(const TokenDataset& data, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + file.string());
    const bool csv = file.extension() == ".csv";
    std::string buf;
    for (const auto& t : data.tokens) {
        if (csv) {
            std::size_t start = 0;
            bool first = true;
            while (true) {
                std::size_t sep = t.find(kColumnJoin, start);
                const std::string part = t.substr(start, sep == std::string::npos ? sep : sep - start);
                if (!first) buf += ',';
                buf += csv_quote(part);
                first = false;
                if (sep == std::string::npos) break;
                start = sep + 1;
            }
        } else {
            buf += t;
        }
        buf += '\n';
        if (buf.size() > (1u << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("write failed: " + file.string());
    if (data.original_total_count) {
        std::ofstream meta(sidecar_path(file), std::ios::trunc);
        if (!meta) throw Error("cannot write sidecar for " + file.string());
        nlohmann::ordered_json j;
        j["original_total_count"] = *data.original_total_count;
        meta << j.dump(2) << '\n';
    }
}

} // namespace freqwm

#pragma once

// CSV ingestion, dataset/result serialisation (CSV, JSON, DOT).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hoinet/adjacency.hpp"
#include "hoinet/info_core.hpp"
#include "hoinet/netinfer.hpp"
#include "hoinet/physio.hpp"
#include "hoinet/var_engine.hpp"

namespace hoinet {

inline constexpr int kResultSchemaVersion = 1;

/// Header row plus numeric cells, kept as text.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

SymbolDataset symbols_from_csv(const CsvTable& table);
SeriesDataset series_from_csv(const CsvTable& table);
BeatSeries beats_from_csv(const CsvTable& table);

using Dataset = std::variant<SymbolDataset, SeriesDataset>;

/// Static mode yields a SymbolDataset (non-negative integers, alphabets
/// inferred as max + 1); dynamic mode a SeriesDataset (finite reals).
Dataset read_dataset(const std::filesystem::path& path, AnalysisMode mode);
BeatSeries read_beat_series(const std::filesystem::path& path);

void write_dataset(const SymbolDataset& data, std::ostream& out);
void write_dataset(const SeriesDataset& data, std::ostream& out);
void write_dataset(const Dataset& data, const std::filesystem::path& path);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

nlohmann::json adjacency_to_json(const Adjacency& adj, const std::vector<std::string>& names);
Adjacency adjacency_from_json(const nlohmann::json& j, const std::vector<std::string>& names);

nlohmann::json result_to_json(const NetworkResult& result);
NetworkResult result_from_json(const nlohmann::json& j);

/// Undirected graph with an edge per connected link; red edges for B > 0,
/// blue for B < 0, pen width growing with |B|.
std::string result_to_dot(const NetworkResult& result);

/// Writes whichever of the two paths is non-empty.
void write_result(const NetworkResult& result, const std::filesystem::path& json_path,
                  const std::filesystem::path& dot_path);

/// One aggregate row per (n, parameter) with run = "all", followed by its
/// per-run rows.
void write_benchmark_csv(const BenchmarkReport& report, std::ostream& out);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hoinet

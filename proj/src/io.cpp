#include "hoinet/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hoinet/error.hpp"

namespace hoinet {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::string where(std::size_t row, const std::string& column) {
    // Data rows are reported 1-based after the header line.
    return "row " + std::to_string(row + 1) + ", column '" + column + "'";
}

double parse_real(const std::string& cell, std::size_t row, const std::string& column) {
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end || cell.empty())
        throw InvalidArgument("malformed number '" + cell + "' at " + where(row, column));
    if (!std::isfinite(v)) throw InvalidArgument("non-finite value at " + where(row, column));
    return v;
}

Symbol parse_symbol(const std::string& cell, std::size_t row, const std::string& column) {
    long long v = 0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end || cell.empty())
        throw InvalidArgument("non-integer symbol '" + cell + "' at " + where(row, column));
    if (v < 0 || v > std::numeric_limits<Symbol>::max())
        throw InvalidArgument("symbol out of range at " + where(row, column));
    return static_cast<Symbol>(v);
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
    return out;
}

nlohmann::json number_or_null(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

double number_from(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

template <typename Get>
nlohmann::json named_rows(const std::vector<std::string>& names, Get&& get) {
    nlohmann::json rows = nlohmann::json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < names.size(); ++j) row.push_back(get(i, j));
        rows[names[i]] = std::move(row);
    }
    return rows;
}

std::string hex_colour(int r, int g, int b) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (!have_header) {
            for (const auto& c : cells) {
                if (c.empty()) throw InvalidArgument("empty channel name in CSV header");
            }
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw InvalidArgument("ragged CSV: line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (!have_header) throw InvalidArgument("CSV has no header row");
    if (table.rows.empty()) throw InvalidArgument("CSV has no data rows");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
    return parse_csv(in);
}

SymbolDataset symbols_from_csv(const CsvTable& table) {
    const auto m = table.header.size();
    std::vector<std::vector<Symbol>> columns(m, std::vector<Symbol>(table.rows.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t c = 0; c < m; ++c) columns[c][r] = parse_symbol(table.rows[r][c], r, table.header[c]);
    return SymbolDataset(std::move(columns), {}, table.header);
}

SeriesDataset series_from_csv(const CsvTable& table) {
    const auto m = table.header.size();
    Eigen::MatrixXd data(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t c = 0; c < m; ++c)
            data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_real(table.rows[r][c], r, table.header[c]);
    return SeriesDataset(std::move(data), table.header);
}

BeatSeries beats_from_csv(const CsvTable& table) {
    const auto m = table.header.size();
    std::vector<std::vector<double>> columns(m, std::vector<double>(table.rows.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t c = 0; c < m; ++c) columns[c][r] = parse_real(table.rows[r][c], r, table.header[c]);
    return BeatSeries(table.header, std::move(columns));
}

Dataset read_dataset(const std::filesystem::path& path, AnalysisMode mode) {
    const auto table = read_csv(path);
    if (mode == AnalysisMode::static_mode) return symbols_from_csv(table);
    return series_from_csv(table);
}

BeatSeries read_beat_series(const std::filesystem::path& path) { return beats_from_csv(read_csv(path)); }

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw InvalidArgument("cannot format number");
    return std::string(buf, ptr);
}

void write_dataset(const SymbolDataset& data, std::ostream& out) {
    const auto& names = data.channel_names();
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
    out << '\n';
    for (std::size_t r = 0; r < data.observations(); ++r) {
        for (std::size_t c = 0; c < data.channels(); ++c) out << (c ? "," : "") << data.at(r, c);
        out << '\n';
    }
}

void write_dataset(const SeriesDataset& data, std::ostream& out) {
    const auto& names = data.channel_names();
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
    out << '\n';
    const auto& d = data.data();
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
        for (Eigen::Index c = 0; c < d.cols(); ++c) out << (c ? "," : "") << format_double(d(r, c));
        out << '\n';
    }
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
    auto out = open_output(path);
    std::visit([&](const auto& d) { write_dataset(d, out); }, data);
    if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
}

nlohmann::json adjacency_to_json(const Adjacency& adj, const std::vector<std::string>& names) {
    return named_rows(names, [&](std::size_t i, std::size_t j) { return adj(i, j) ? 1 : 0; });
}

Adjacency adjacency_from_json(const nlohmann::json& j, const std::vector<std::string>& names) {
    Adjacency adj(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& row = j.at(names[i]);
        for (std::size_t k = 0; k < names.size(); ++k) adj.set(i, k, row.at(k).get<int>() != 0);
    }
    return adj;
}

nlohmann::json result_to_json(const NetworkResult& result) {
    using nlohmann::json;
    const auto& names = result.channel_names;
    json j;
    j["schema"] = "hoinet.network-result";
    j["schema_version"] = kResultSchemaVersion;
    j["mode"] = std::string(to_string(result.mode));
    j["channels"] = names;

    const auto& cfg = result.config;
    j["config"] = {
        {"surrogates", cfg.surrogates.count},
        {"alpha", cfg.surrogates.alpha},
        {"method", std::string(to_string(cfg.surrogates.method))},
        {"cis_null", std::string(to_string(cfg.surrogates.cis_null))},
        {"iaaft_max_iter", cfg.surrogates.iaaft_max_iter},
        {"seed", cfg.surrogates.master_seed},
        {"p_max", cfg.p_max},
        {"q", cfg.q},
        {"selected_order", cfg.selected_order},
        {"failed_surrogates", cfg.failed_surrogates},
    };

    json matrices;
    using Measure = NetworkResult::Measure;
    const std::pair<const char*, Measure> measures[] = {
        {"is", Measure::is}, {"cis", Measure::cis}, {"nis", Measure::nis}, {"b_index", Measure::b_index}};
    for (const auto& [key, which] : measures) {
        const auto mat = result.matrix(which);
        matrices[key] = named_rows(names, [&](std::size_t r, std::size_t c) {
            return number_or_null(mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        });
    }
    auto flag_rows = [&](bool LinkResult::*flag) {
        return named_rows(names, [&](std::size_t r, std::size_t c) {
            return r == c ? json(nullptr) : json(result.link(r, c).*flag);
        });
    };
    matrices["is_significant"] = flag_rows(&LinkResult::is_significant);
    matrices["cis_significant"] = flag_rows(&LinkResult::cis_significant);
    matrices["adjacency"] = adjacency_to_json(result.adjacency, names);
    j["matrices"] = std::move(matrices);

    json links = json::array();
    for (const auto& l : result.links) {
        links.push_back({
            {"i", names[l.i]},
            {"j", names[l.j]},
            {"is", l.is_value},
            {"cis", l.cis_value},
            {"nis", l.nis_value},
            {"b_index", number_or_null(l.b_index)},
            {"is_significant", l.is_significant},
            {"cis_significant", l.cis_significant},
            {"class", std::string(to_string(l.link_class))},
        });
    }
    j["links"] = std::move(links);
    return j;
}

NetworkResult result_from_json(const nlohmann::json& j) {
    if (j.value("schema_version", 0) != kResultSchemaVersion)
        throw InvalidArgument("unsupported result schema version");
    NetworkResult result;
    result.mode = analysis_mode_from_string(j.at("mode").get<std::string>());
    result.channel_names = j.at("channels").get<std::vector<std::string>>();
    const auto& names = result.channel_names;

    const auto& cfg = j.at("config");
    result.config.surrogates.count = cfg.at("surrogates").get<int>();
    result.config.surrogates.alpha = cfg.at("alpha").get<double>();
    result.config.surrogates.method = surrogate_method_from_string(cfg.at("method").get<std::string>());
    result.config.surrogates.cis_null = conditional_null_from_string(cfg.at("cis_null").get<std::string>());
    result.config.surrogates.iaaft_max_iter = cfg.at("iaaft_max_iter").get<int>();
    result.config.surrogates.master_seed = cfg.at("seed").get<std::uint64_t>();
    result.config.p_max = cfg.at("p_max").get<int>();
    result.config.q = cfg.at("q").get<int>();
    result.config.selected_order = cfg.at("selected_order").get<int>();
    result.config.failed_surrogates = cfg.at("failed_surrogates").get<int>();

    auto index_of = [&](const std::string& name) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw InvalidArgument("link refers to unknown channel '" + name + "'");
        return static_cast<std::size_t>(it - names.begin());
    };
    const auto m = names.size();
    result.links.resize(m * (m - 1) / 2);
    for (const auto& l : j.at("links")) {
        LinkResult r;
        r.i = index_of(l.at("i").get<std::string>());
        r.j = index_of(l.at("j").get<std::string>());
        if (r.i > r.j) std::swap(r.i, r.j);
        r.is_value = l.at("is").get<double>();
        r.cis_value = l.at("cis").get<double>();
        r.nis_value = l.at("nis").get<double>();
        r.b_index = number_from(l.at("b_index"));
        r.is_significant = l.at("is_significant").get<bool>();
        r.cis_significant = l.at("cis_significant").get<bool>();
        r.link_class = link_class_from_string(l.at("class").get<std::string>());
        result.links.at(link_index(m, r.i, r.j)) = r;
    }
    result.adjacency = adjacency_from_json(j.at("matrices").at("adjacency"), names);
    return result;
}

std::string result_to_dot(const NetworkResult& result) {
    std::ostringstream out;
    out << "graph network {\n  node [shape=circle];\n";
    for (const auto& name : result.channel_names) out << "  \"" << name << "\";\n";
    for (const auto& l : result.links) {
        if (l.link_class != LinkClass::connected) continue;
        const double mag = std::min(1.0, std::abs(l.b_index));
        const int fade = static_cast<int>(std::lround(200.0 * (1.0 - mag)));
        std::string colour = "#c8c8c8";
        if (l.b_index > 0.0) colour = hex_colour(255, fade, fade);
        if (l.b_index < 0.0) colour = hex_colour(fade, fade, 255);
        char width[32];
        std::snprintf(width, sizeof width, "%.2f", 1.0 + 4.0 * mag);
        char label[32];
        std::snprintf(label, sizeof label, "%.2f", l.b_index);
        out << "  \"" << result.channel_names[l.i] << "\" -- \"" << result.channel_names[l.j]
            << "\" [color=\"" << colour << "\", penwidth=" << width << ", label=\"" << label << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_output(path);
    out << text;
    if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
}

void write_result(const NetworkResult& result, const std::filesystem::path& json_path,
                  const std::filesystem::path& dot_path) {
    if (!json_path.empty()) write_text_file(json_path, result_to_json(result).dump(2) + "\n");
    if (!dot_path.empty()) write_text_file(dot_path, result_to_dot(result));
}

void write_benchmark_csv(const BenchmarkReport& report, std::ostream& out) {
    out << "scenario,n,parameter,run,runs,failed_runs,tp,fp,tn,fn,sensitivity,specificity\n";
    const auto scenario = std::string(to_string(report.scenario));
    auto param = [](double p) { return std::isnan(p) ? std::string() : format_double(p); };
    auto ratio = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
    for (const auto& row : report.rows) {
        const auto& t = row.totals;
        out << scenario << ',' << row.n << ',' << param(row.parameter) << ",all," << row.runs << ','
            << row.failed_runs << ',' << t.tp << ',' << t.fp << ',' << t.tn << ',' << t.fn << ','
            << ratio(t.sensitivity()) << ',' << ratio(t.specificity()) << '\n';
        for (std::size_t r = 0; r < row.per_run.size(); ++r) {
            const auto& c = row.per_run[r];
            out << scenario << ',' << row.n << ',' << param(row.parameter) << ',' << r << ",1,0," << c.tp
                << ',' << c.fp << ',' << c.tn << ',' << c.fn << ',' << ratio(c.sensitivity()) << ','
                << ratio(c.specificity()) << '\n';
        }
    }
}

}  // namespace hoinet

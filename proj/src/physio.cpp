#include "hoinet/physio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hoinet/error.hpp"

namespace hoinet {

BeatSeries::BeatSeries(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
    if (names_.size() != columns_.size()) throw InvalidArgument("one name per beat column required");
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (columns_[c].size() != columns_.front().size())
            throw InvalidArgument("beat columns have different lengths");
        const bool positive = names_[c] == beat_column::heart_period || names_[c] == beat_column::ejection_time;
        for (std::size_t r = 0; r < columns_[c].size(); ++r) {
            const double v = columns_[c][r];
            if (!std::isfinite(v))
                throw InvalidArgument("non-finite " + names_[c] + " at beat " + std::to_string(r + 1));
            if (positive && v <= 0.0)
                throw InvalidArgument("non-positive " + names_[c] + " at beat " + std::to_string(r + 1));
        }
    }
}

bool BeatSeries::has(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& BeatSeries::column(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InvalidArgument("beat series has no " + std::string(name) + " column");
    return columns_[static_cast<std::size_t>(it - names_.begin())];
}

std::string_view to_string(DiscreteKind k) {
    switch (k) {
        case DiscreteKind::hv: return "HV";
        case DiscreteKind::sv: return "SV";
        case DiscreteKind::rp: return "RP";
    }
    return "HV";
}

DiscreteKind discrete_kind_from_string(std::string_view s) {
    if (s == "hv" || s == "HV") return DiscreteKind::hv;
    if (s == "sv" || s == "SV") return DiscreteKind::sv;
    if (s == "rp" || s == "RP") return DiscreteKind::rp;
    throw InvalidArgument("unknown discrete kind '" + std::string(s) + "'");
}

BeatIndexed<Symbol> derive_discrete(DiscreteKind kind, const BeatSeries& series) {
    const auto n = series.beats();
    const std::size_t needed = kind == DiscreteKind::rp ? 4 : 3;
    if (n < needed) {
        throw InvalidArgument(std::string(to_string(kind)) + " needs at least " + std::to_string(needed) +
                              " beats");
    }
    // x[b - 1] is beat b.
    auto rising = [](const std::vector<double>& x, std::size_t from, std::size_t to) -> Symbol {
        return x[to - 1] > x[from - 1] ? 1u : 0u;
    };

    BeatIndexed<Symbol> out;
    out.first_beat = 2;
    switch (kind) {
        case DiscreteKind::hv: {
            const auto& hp = series.column(beat_column::heart_period);
            for (std::size_t b = 2; b <= n - 1; ++b) out.values.push_back(rising(hp, b, b + 1));
            break;
        }
        case DiscreteKind::sv: {
            const auto& sp = series.column(beat_column::systolic);
            for (std::size_t b = 2; b <= n - 1; ++b) out.values.push_back(rising(sp, b - 1, b));
            break;
        }
        case DiscreteKind::rp: {
            const auto& ra = series.column(beat_column::respiration);
            // RP_n = 1 iff RA_{n+1} > RA_{n+2}.
            for (std::size_t b = 2; b <= n - 2; ++b) out.values.push_back(rising(ra, b + 2, b + 1));
            break;
        }
    }
    return out;
}

SymbolDataset derive_discrete_set(std::span<const DiscreteKind> kinds, const BeatSeries& series) {
    if (kinds.size() < 2) throw InvalidArgument("need at least two discrete variables");
    std::vector<BeatIndexed<Symbol>> parts;
    for (auto k : kinds) parts.push_back(derive_discrete(k, series));
    std::size_t first = 0, last = std::numeric_limits<std::size_t>::max();
    for (const auto& p : parts) {
        first = std::max(first, p.first_beat);
        last = std::min(last, p.last_beat());
    }
    std::vector<std::vector<Symbol>> columns;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto& p = parts[k];
        columns.emplace_back(p.values.begin() + static_cast<std::ptrdiff_t>(first - p.first_beat),
                             p.values.begin() + static_cast<std::ptrdiff_t>(last - p.first_beat + 1));
        names.emplace_back(to_string(kinds[k]));
    }
    return SymbolDataset(std::move(columns), std::vector<std::size_t>(kinds.size(), 2), std::move(names));
}

BeatIndexed<double> derive_cardiac_output(const BeatSeries& series, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
    const auto& hp = series.column(beat_column::heart_period);
    const auto& z = series.column(beat_column::impedance_slope);
    const auto& lvet = series.column(beat_column::ejection_time);
    const auto n = series.beats();
    if (n < 2) throw InvalidArgument("cardiac output needs at least 2 beats");

    BeatIndexed<double> co;
    co.first_beat = 2;
    for (std::size_t b = 2; b <= n; ++b) {
        const double stroke = beta * z[b - 1] * (lvet[b - 1] / 1000.0);
        const double period_s = hp[b - 2] / 1000.0;
        if (!(period_s > 0.0)) throw InvalidArgument("non-positive HP at beat " + std::to_string(b - 1));
        co.values.push_back(60.0 * stroke / period_s);
    }
    return co;
}

BeatIndexed<double> derive_peripheral_resistance(const BeatSeries& series, const BeatIndexed<double>& co) {
    const auto& map = series.column(beat_column::mean_pressure);
    if (co.values.empty()) throw InvalidArgument("empty cardiac output series");
    const std::size_t first = std::max<std::size_t>(1, co.first_beat);
    const std::size_t last = std::min(series.beats(), co.last_beat());
    if (last < first) throw InvalidArgument("MAP and CO share no beats");

    BeatIndexed<double> pr;
    pr.first_beat = first;
    for (std::size_t b = first; b <= last; ++b) {
        const double c = co.values[b - co.first_beat];
        if (!(c > 0.0)) throw InvalidArgument("non-positive CO at beat " + std::to_string(b));
        pr.values.push_back(map[b - 1] / c);
    }
    return pr;
}

}  // namespace hoinet

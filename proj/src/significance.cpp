#include "hoinet/significance.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "hoinet/error.hpp"

namespace hoinet {

void SurrogateConfig::validate() const {
    if (count < 1) throw InvalidArgument("surrogate count must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (count * alpha < 1.0 - 1e-12)
        throw InvalidArgument("count * alpha must be at least 1 for the percentile to be resolvable");
    if (iaaft_max_iter < 1) throw InvalidArgument("iaaft_max_iter must be positive");
}

std::string_view to_string(LinkClass c) {
    switch (c) {
        case LinkClass::isolated: return "isolated";
        case LinkClass::common_drive_or_cascade: return "common-drive-or-cascade";
        case LinkClass::common_target: return "common-target";
        case LinkClass::connected: return "connected";
    }
    return "isolated";
}

LinkClass link_class_from_string(std::string_view s) {
    for (auto c : {LinkClass::isolated, LinkClass::common_drive_or_cascade, LinkClass::common_target,
                   LinkClass::connected}) {
        if (to_string(c) == s) return c;
    }
    throw InvalidArgument("unknown link class '" + std::string(s) + "'");
}

std::string_view to_string(SurrogateMethod m) {
    return m == SurrogateMethod::shuffle ? "shuffle" : "iaaft";
}

SurrogateMethod surrogate_method_from_string(std::string_view s) {
    if (s == "shuffle") return SurrogateMethod::shuffle;
    if (s == "iaaft") return SurrogateMethod::iaaft;
    throw InvalidArgument("unknown surrogate method '" + std::string(s) + "'");
}

std::string_view to_string(ConditionalNull n) {
    return n == ConditionalNull::conditional ? "conditional" : "shuffle-all";
}

ConditionalNull conditional_null_from_string(std::string_view s) {
    if (s == "conditional") return ConditionalNull::conditional;
    if (s == "shuffle-all") return ConditionalNull::shuffle_all;
    throw InvalidArgument("unknown conditional null '" + std::string(s) + "'");
}

SymbolDataset shuffle_surrogate(const SymbolDataset& dataset, Rng& rng) {
    auto columns = dataset.columns();
    for (auto& col : columns) std::shuffle(col.begin(), col.end(), rng);
    return dataset.with_columns(std::move(columns));
}

std::vector<double> iaaft_surrogate(std::span<const double> channel, Rng& rng, int max_iter) {
    const std::size_t n = channel.size();
    if (n < 4) throw InvalidArgument("iAAFT needs at least 4 samples");

    std::vector<double> original(channel.begin(), channel.end());
    std::vector<double> sorted = original;
    std::sort(sorted.begin(), sorted.end());

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, original);
    std::vector<double> amplitude(n);
    for (std::size_t k = 0; k < n; ++k) amplitude[k] = std::abs(spectrum[k]);

    std::vector<double> current = original;
    std::shuffle(current.begin(), current.end(), rng);

    std::vector<std::size_t> rank(n), previous_rank;
    std::vector<double> filtered;
    for (int it = 0; it < max_iter; ++it) {
        // Impose the original amplitude spectrum, keeping the current phases.
        fft.fwd(spectrum, current);
        for (std::size_t k = 0; k < n; ++k) {
            const double mag = std::abs(spectrum[k]);
            spectrum[k] = mag > 0.0 ? spectrum[k] * (amplitude[k] / mag)
                                    : std::complex<double>(amplitude[k], 0.0);
        }
        fft.inv(filtered, spectrum);

        // Impose the original amplitude distribution by rank ordering.
        std::iota(rank.begin(), rank.end(), std::size_t{0});
        std::sort(rank.begin(), rank.end(),
                  [&](std::size_t a, std::size_t b) { return filtered[a] < filtered[b]; });
        for (std::size_t r = 0; r < n; ++r) current[rank[r]] = sorted[r];

        if (rank == previous_rank) break;
        previous_rank = rank;
    }
    return current;
}

SeriesDataset iaaft_surrogate(const SeriesDataset& series, Rng& rng, int max_iter) {
    Eigen::MatrixXd out(series.data().rows(), series.data().cols());
    std::vector<double> col(series.samples());
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        Eigen::VectorXd::Map(col.data(), out.rows()) = series.data().col(c);
        const auto s = iaaft_surrogate(col, rng, max_iter);
        out.col(c) = Eigen::VectorXd::Map(s.data(), out.rows());
    }
    return series.with_data(std::move(out));
}

bool percentile_test(double original, std::span<const double> surrogate_values, double alpha) {
    if (surrogate_values.empty()) throw InvalidArgument("no surrogate values");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    const auto count = surrogate_values.size();
    // Guard against (1 - alpha) * count landing a hair above an integer.
    auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(count) - 1e-9));
    k = std::clamp<std::size_t>(k, 1, count);
    std::vector<double> values(surrogate_values.begin(), surrogate_values.end());
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end());
    return original > values[k - 1];
}

LinkClassification classify_link(double is_value, double cis_value, bool is_significant,
                                 bool cis_significant) {
    if (is_significant && cis_significant) {
        const double denom = std::max(is_value, cis_value);
        if (!(denom > 0.0))
            throw InvalidArgument("both measures significant but neither is positive");
        return {(is_value - cis_value) / denom, LinkClass::connected};
    }
    if (is_significant) return {1.0, LinkClass::common_drive_or_cascade};
    if (cis_significant) return {-1.0, LinkClass::common_target};
    return {std::numeric_limits<double>::quiet_NaN(), LinkClass::isolated};
}

LinkResult make_link_result(std::size_t i, std::size_t j, double is_value, double cis_value,
                            bool is_significant, bool cis_significant) {
    const auto cls = classify_link(is_value, cis_value, is_significant, cis_significant);
    LinkResult r;
    r.i = i;
    r.j = j;
    r.is_value = is_value;
    r.cis_value = cis_value;
    r.nis_value = is_value - cis_value;
    r.b_index = cls.b_index;
    r.is_significant = is_significant;
    r.cis_significant = cis_significant;
    r.link_class = cls.link_class;
    return r;
}

}  // namespace hoinet

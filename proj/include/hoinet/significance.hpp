#pragma once

// Surrogate data, percentile tests and B-index link classification.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hoinet/info_core.hpp"
#include "hoinet/random.hpp"
#include "hoinet/var_engine.hpp"

namespace hoinet {

enum class SurrogateMethod { shuffle, iaaft };

/// Null model of the conditional (cIS) test in static analyses.
enum class ConditionalNull {
    /// X is permuted among observations sharing the same Z symbols, which
    /// destroys X-Y dependence given Z but keeps the X-Z and Y-Z coupling.
    conditional,
    /// Every channel is shuffled independently, as for the IS test.
    shuffle_all,
};

struct SurrogateConfig {
    int count = 100;
    double alpha = 0.05;
    SurrogateMethod method = SurrogateMethod::shuffle;
    ConditionalNull cis_null = ConditionalNull::conditional;
    int iaaft_max_iter = 100;
    std::uint64_t master_seed = 0;

    /// Throws InvalidArgument unless count >= 1, alpha in (0,1) and
    /// count * alpha >= 1.
    void validate() const;
};

enum class LinkClass { isolated, common_drive_or_cascade, common_target, connected };

std::string_view to_string(LinkClass c);
LinkClass link_class_from_string(std::string_view s);
std::string_view to_string(SurrogateMethod m);
SurrogateMethod surrogate_method_from_string(std::string_view s);
std::string_view to_string(ConditionalNull n);
ConditionalNull conditional_null_from_string(std::string_view s);

struct LinkClassification {
    double b_index;  // NaN for isolated links
    LinkClass link_class;
};

struct LinkResult {
    std::size_t i = 0;
    std::size_t j = 0;
    double is_value = 0.0;
    double cis_value = 0.0;
    double nis_value = 0.0;
    double b_index = 0.0;
    bool is_significant = false;
    bool cis_significant = false;
    LinkClass link_class = LinkClass::isolated;
};

/// Independently permutes every column.
SymbolDataset shuffle_surrogate(const SymbolDataset& dataset, Rng& rng);

/// Iterative amplitude-adjusted Fourier transform surrogate of one channel.
/// The result is a permutation of the input whose periodogram approximates
/// the original one. Iterates until the rank ordering is unchanged or
/// `max_iter` is reached.
std::vector<double> iaaft_surrogate(std::span<const double> channel, Rng& rng, int max_iter = 100);

/// Channel-wise iAAFT surrogate of a multivariate series.
SeriesDataset iaaft_surrogate(const SeriesDataset& series, Rng& rng, int max_iter = 100);

/// True iff `original` exceeds the k-th smallest surrogate value,
/// k = ceil((1 - alpha) * count).
bool percentile_test(double original, std::span<const double> surrogate_values, double alpha);

/// B-index and structural class from the two measures and their
/// significance flags. Both-significant links get (is - cis) / max(is, cis).
LinkClassification classify_link(double is_value, double cis_value, bool is_significant,
                                 bool cis_significant);

LinkResult make_link_result(std::size_t i, std::size_t j, double is_value, double cis_value,
                            bool is_significant, bool cis_significant);

}  // namespace hoinet

#pragma once

// Whole-network analysis: per-link IS / cIS with surrogate significance,
// B-index classification, structure reconstruction, and the
// sensitivity/specificity benchmark harness.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hoinet/adjacency.hpp"
#include "hoinet/info_core.hpp"
#include "hoinet/significance.hpp"
#include "hoinet/simgen.hpp"
#include "hoinet/var_engine.hpp"

namespace hoinet {

enum class AnalysisMode { static_mode, dynamic_mode };

std::string_view to_string(AnalysisMode m);
AnalysisMode analysis_mode_from_string(std::string_view s);

struct DynamicOptions {
    int p_max = kDefaultMaxOrder;
    int q = kDefaultRestrictedOrder;
};

/// Settings recorded alongside a result.
struct AnalysisSnapshot {
    SurrogateConfig surrogates;
    int p_max = 0;            // dynamic only
    int q = 0;                // dynamic only
    int selected_order = 0;   // dynamic only: AIC-selected p of the original fit
    int failed_surrogates = 0;
};

struct NetworkResult {
    AnalysisMode mode = AnalysisMode::static_mode;
    std::vector<std::string> channel_names;
    std::vector<LinkResult> links;  // (0,1), (0,2), ..., (M-2,M-1)
    Adjacency adjacency;
    AnalysisSnapshot config;

    std::size_t nodes() const { return channel_names.size(); }
    const LinkResult& link(std::size_t i, std::size_t j) const;

    enum class Measure { is, cis, nis, b_index };
    /// Symmetric M x M matrix of one measure; NaN on the diagonal.
    Eigen::MatrixXd matrix(Measure which) const;
};

/// Link index of (i, j), i != j, in NetworkResult::links.
std::size_t link_index(std::size_t m, std::size_t i, std::size_t j);

/// IS and cIS (given all other channels) for every pair, from one shared pmf.
struct PairMeasures {
    std::vector<double> is;
    std::vector<double> cis;
};
PairMeasures static_pair_measures(const SymbolDataset& dataset, std::size_t cell_cap = kDefaultTableCap);

/// MIR and cMIR (given all other channels) for every pair of a fitted model.
PairMeasures dynamic_pair_measures(const VarModel& model, int q);

/// Plug-in MI/cMI per pair with shuffle-surrogate significance.
NetworkResult analyze_static(const SymbolDataset& dataset, const SurrogateConfig& config);

/// VAR-based MIR/cMIR per pair with iAAFT-surrogate significance; every
/// surrogate is refitted from scratch. Throws IdentificationError if the
/// original fit is not stationary.
NetworkResult analyze_dynamic(const SeriesDataset& series, const SurrogateConfig& config,
                              const DynamicOptions& options = {});

/// Edge iff both IS and cIS are significant.
Adjacency reconstruct(const NetworkResult& result);

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    double sensitivity() const;
    double specificity() const;
};

/// Counts over unordered pairs.
ConfusionCounts score_adjacency(const Adjacency& truth, const Adjacency& predicted);

enum class Scenario { binary10, var_stars_competing, var_stars_propagation };

std::string_view to_string(Scenario s);
Scenario scenario_from_string(std::string_view s);

struct BenchmarkSpec {
    Scenario scenario = Scenario::binary10;
    std::vector<std::size_t> lengths{250, 500, 1000};
    /// Scenario parameter grid: hub_out for var-stars (other arm = 1 - hub_out);
    /// ignored for binary10.
    std::vector<double> parameters{0.5};
    int runs = 100;
    SurrogateConfig surrogates;
    DynamicOptions dynamic;
    int jobs = 0;
};

struct BenchmarkRow {
    std::size_t n = 0;
    double parameter = 0.0;
    int runs = 0;
    int failed_runs = 0;
    std::vector<ConfusionCounts> per_run;  // successful runs only
    ConfusionCounts totals;
    /// detected[i][j]: number of successful runs with edge i-j reconstructed.
    std::vector<std::vector<int>> detected;
    std::vector<std::string> failures;

    double sensitivity() const { return totals.sensitivity(); }
    double specificity() const { return totals.specificity(); }
};

struct BenchmarkReport {
    Scenario scenario = Scenario::binary10;
    std::uint64_t master_seed = 0;
    std::vector<BenchmarkRow> rows;
};

BenchmarkReport benchmark(const BenchmarkSpec& spec);

}  // namespace hoinet

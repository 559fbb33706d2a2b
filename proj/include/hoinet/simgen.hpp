#pragma once

// Simulated systems with known structure, and exact oracles for the
// three-node systems.

#include <cstdint>
#include <string_view>
#include <vector>

#include "hoinet/adjacency.hpp"
#include "hoinet/info_core.hpp"
#include "hoinet/random.hpp"
#include "hoinet/significance.hpp"
#include "hoinet/var_engine.hpp"

namespace hoinet {

struct GeneratedSymbols {
    SymbolDataset data;
    Adjacency truth;
};

struct GeneratedSeries {
    SeriesDataset data;
    VarModel model;
    Adjacency truth;
};

/// Measures evaluated on an exact distribution or a true model. Links are
/// ordered (0,1), (0,2), (1,2) and flagged significant when the value exceeds
/// kExactZeroTol.
struct ExactMeasures {
    std::vector<LinkResult> links;

    const LinkResult& link(std::size_t i, std::size_t j) const;
};

/// Values at or below this are treated as exactly zero by the oracles.
inline constexpr double kExactZeroTol = 1e-9;

// --- three-node static system -------------------------------------------

/// S2 copies S1 with probability alpha; S3 picks a parent equiprobably and
/// copies S1 with probability beta or S2 with probability gamma.
struct ThreeNodeStaticParams {
    double alpha = 1.0;
    double beta = 0.9;
    double gamma = 0.5;

    void validate() const;
};

GeneratedSymbols gen_three_node_static(const ThreeNodeStaticParams& params, std::size_t n, Rng& rng);
ProbabilityTable exact_three_node_static_pmf(const ThreeNodeStaticParams& params);
ExactMeasures exact_three_node_static(const ThreeNodeStaticParams& params);

// --- three-node dynamic system ------------------------------------------

/// VAR(1) with unit innovations: S1 -> S2 (a), S1 -> S3 (b), S2 -> S3 (c).
struct ThreeNodeDynamicParams {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
};

VarModel three_node_var_model(const ThreeNodeDynamicParams& params);
GeneratedSeries gen_three_node_dynamic(const ThreeNodeDynamicParams& params, std::size_t n, Rng& rng);
ExactMeasures exact_three_node_dynamic(const ThreeNodeDynamicParams& params,
                                       int q = kDefaultRestrictedOrder);

// --- ten-node binary network --------------------------------------------

struct Binary10Params {
    double gamma1 = 0.9;  // noisy-OR reliability
    double gamma2 = 0.9;  // S5 -> S6, S7 copies
    double gamma3 = 0.8;  // S9 -> S10 copy
    std::size_t n = 1000;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Ground truth: S2-S3, S2-S4, S2-S5, S5-S6, S5-S7, S6-S8, S7-S8, S9-S10.
Adjacency binary10_truth();
GeneratedSymbols gen_binary10(const Binary10Params& params);

// --- six-node VAR star networks -----------------------------------------

enum class StarStructure { competing, propagation };

std::string_view to_string(StarStructure s);
StarStructure star_structure_from_string(std::string_view s);

/// Hubs S1 and S6, leaves S2..S5. S1 drives the leaves with `hub_out`. In the
/// competing structure S6 also drives the leaves; in the propagation structure
/// the leaves drive S6. Every node has AR(2) self-terms (0.4, -0.2).
struct VarStarsParams {
    StarStructure structure = StarStructure::competing;
    double hub_out = 0.5;
    double other_arm = 0.5;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
};

inline constexpr double kStarSelfLag1 = 0.4;
inline constexpr double kStarSelfLag2 = -0.2;

VarModel var_stars_model(const VarStarsParams& params);
Adjacency var_stars_truth(const VarStarsParams& params);
GeneratedSeries gen_var_stars(const VarStarsParams& params);

/// Undirected truth graph of a VAR model: pairs with any nonzero
/// cross-coefficient at any lag.
Adjacency var_model_truth(const VarModel& model);

}  // namespace hoinet

#include "hoinet/simgen.hpp"

#include <array>
#include <cmath>
#include <string>

#include "hoinet/error.hpp"

namespace hoinet {

namespace {

void check_probability(double p, double lo, const char* name) {
    if (!(p >= lo && p <= 1.0))
        throw InvalidArgument(std::string(name) + " must lie in [" + std::to_string(lo) + ", 1]");
}

Symbol noisy(Symbol value, double reliability, Rng& rng) {
    std::bernoulli_distribution keep(reliability);
    return keep(rng) ? value : static_cast<Symbol>(1 - value);
}

Symbol fair_bit(Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    return coin(rng) ? 1u : 0u;
}

ExactMeasures three_node_links(auto&& is_of, auto&& cis_of) {
    ExactMeasures out;
    constexpr std::array<std::array<std::size_t, 3>, 3> triples{{{0, 1, 2}, {0, 2, 1}, {1, 2, 0}}};
    for (const auto& [i, j, k] : triples) {
        const double is = is_of(i, j);
        const double cis = cis_of(i, j, k);
        out.links.push_back(make_link_result(i, j, is, cis, is > kExactZeroTol, cis > kExactZeroTol));
    }
    return out;
}

}  // namespace

const LinkResult& ExactMeasures::link(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    for (const auto& l : links) {
        if (l.i == i && l.j == j) return l;
    }
    throw InvalidArgument("no such link");
}

void ThreeNodeStaticParams::validate() const {
    check_probability(alpha, 0.5, "alpha");
    check_probability(beta, 0.5, "beta");
    check_probability(gamma, 0.5, "gamma");
}

GeneratedSymbols gen_three_node_static(const ThreeNodeStaticParams& params, std::size_t n, Rng& rng) {
    params.validate();
    std::vector<std::vector<Symbol>> cols(3, std::vector<Symbol>(n));
    std::bernoulli_distribution first_parent(0.5);
    for (std::size_t r = 0; r < n; ++r) {
        const Symbol s1 = fair_bit(rng);
        const Symbol s2 = noisy(s1, params.alpha, rng);
        const Symbol s3 = first_parent(rng) ? noisy(s1, params.beta, rng) : noisy(s2, params.gamma, rng);
        cols[0][r] = s1;
        cols[1][r] = s2;
        cols[2][r] = s3;
    }
    Adjacency truth(3);
    truth.set(0, 1, params.alpha != 0.5);
    truth.set(0, 2, params.beta != 0.5);
    truth.set(1, 2, params.gamma != 0.5);
    return {SymbolDataset(std::move(cols), {2, 2, 2}), truth};
}

ProbabilityTable exact_three_node_static_pmf(const ThreeNodeStaticParams& params) {
    params.validate();
    auto copy = [](int from, int to, double reliability) { return from == to ? reliability : 1.0 - reliability; };
    std::vector<double> probs;
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            for (int s3 = 0; s3 < 2; ++s3)
                probs.push_back(0.5 * copy(s1, s2, params.alpha) *
                                (0.5 * copy(s1, s3, params.beta) + 0.5 * copy(s2, s3, params.gamma)));
    return ProbabilityTable({0, 1, 2}, {2, 2, 2}, std::move(probs));
}

ExactMeasures exact_three_node_static(const ThreeNodeStaticParams& params) {
    const auto table = exact_three_node_static_pmf(params);
    return three_node_links(
        [&](std::size_t i, std::size_t j) { return mutual_information(table, i, j); },
        [&](std::size_t i, std::size_t j, std::size_t k) {
            const std::size_t z[] = {k};
            return conditional_mutual_information(table, i, j, z);
        });
}

VarModel three_node_var_model(const ThreeNodeDynamicParams& params) {
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(3, 3);
    a1(1, 0) = params.a;
    a1(2, 0) = params.b;
    a1(2, 1) = params.c;
    return make_var_model({a1}, Eigen::MatrixXd::Identity(3, 3));
}

GeneratedSeries gen_three_node_dynamic(const ThreeNodeDynamicParams& params, std::size_t n, Rng& rng) {
    auto model = three_node_var_model(params);
    auto data = simulate_var(model, n, rng);
    auto truth = var_model_truth(model);
    return {std::move(data), std::move(model), std::move(truth)};
}

ExactMeasures exact_three_node_dynamic(const ThreeNodeDynamicParams& params, int q) {
    const auto model = three_node_var_model(params);
    SubsetEntropyRates rates(model_covariances(model, std::max(q, model.order())), q);
    return three_node_links([&](std::size_t i, std::size_t j) { return rates.mir(i, j); },
                            [&](std::size_t i, std::size_t j, std::size_t k) {
                                const std::size_t z[] = {k};
                                return rates.cmir(i, j, z);
                            });
}

void Binary10Params::validate() const {
    auto check = [](double g, const char* name) {
        if (!(g > 0.5 && g <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in (0.5, 1]");
    };
    check(gamma1, "gamma1");
    check(gamma2, "gamma2");
    check(gamma3, "gamma3");
    if (n < 1) throw InvalidArgument("n must be positive");
}

Adjacency binary10_truth() {
    Adjacency truth(10);
    // 1-based node labels S1..S10.
    constexpr std::array<std::pair<int, int>, 8> edges{
        {{2, 3}, {2, 4}, {2, 5}, {5, 6}, {5, 7}, {6, 8}, {7, 8}, {9, 10}}};
    for (auto [a, b] : edges) truth.set(a - 1, b - 1);
    return truth;
}

GeneratedSymbols gen_binary10(const Binary10Params& params) {
    params.validate();
    Rng rng(params.seed);
    const auto n = params.n;
    std::vector<std::vector<Symbol>> s(10, std::vector<Symbol>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const Symbol s1 = fair_bit(rng), s3 = fair_bit(rng), s4 = fair_bit(rng), s5 = fair_bit(rng),
                     s9 = fair_bit(rng);
        const Symbol s10 = noisy(s9, params.gamma3, rng);
        const Symbol s6 = noisy(s5, params.gamma2, rng);
        const Symbol s7 = noisy(s5, params.gamma2, rng);
        const Symbol s8 = noisy(s6 | s7, params.gamma1, rng);
        const Symbol s2 = noisy(s3 | s4 | s5, params.gamma1, rng);
        const std::array<Symbol, 10> row{s1, s2, s3, s4, s5, s6, s7, s8, s9, s10};
        for (std::size_t c = 0; c < 10; ++c) s[c][r] = row[c];
    }
    return {SymbolDataset(std::move(s), std::vector<std::size_t>(10, 2)), binary10_truth()};
}

std::string_view to_string(StarStructure s) {
    return s == StarStructure::competing ? "competing" : "propagation";
}

StarStructure star_structure_from_string(std::string_view s) {
    if (s == "competing") return StarStructure::competing;
    if (s == "propagation") return StarStructure::propagation;
    throw InvalidArgument("unknown star structure '" + std::string(s) + "'");
}

VarModel var_stars_model(const VarStarsParams& params) {
    constexpr Eigen::Index m = 6;
    constexpr Eigen::Index hub_src = 0, hub_other = 5;
    Eigen::MatrixXd a1 = kStarSelfLag1 * Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd a2 = kStarSelfLag2 * Eigen::MatrixXd::Identity(m, m);
    for (Eigen::Index leaf = 1; leaf <= 4; ++leaf) {
        a1(leaf, hub_src) = params.hub_out;
        if (params.structure == StarStructure::competing)
            a1(leaf, hub_other) = params.other_arm;
        else
            a1(hub_other, leaf) = params.other_arm;
    }
    auto model = make_var_model({a1, a2}, Eigen::MatrixXd::Identity(m, m));
    if (!model.stationary) {
        throw InvalidArgument("var-stars parameters give a non-stationary model (spectral radius " +
                              std::to_string(model.spectral_radius) + ")");
    }
    return model;
}

Adjacency var_model_truth(const VarModel& model) {
    const auto m = model.dim();
    Adjacency truth(m);
    for (const auto& a : model.coeffs) {
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c)
                if (r != c && a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) != 0.0)
                    truth.set(r, c);
    }
    return truth;
}

Adjacency var_stars_truth(const VarStarsParams& params) { return var_model_truth(var_stars_model(params)); }

GeneratedSeries gen_var_stars(const VarStarsParams& params) {
    auto model = var_stars_model(params);
    Rng rng(params.seed);
    auto data = simulate_var(model, params.n, rng);
    auto truth = var_model_truth(model);
    return {std::move(data), std::move(model), std::move(truth)};
}

}  // namespace hoinet

#include "hoinet/netinfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "hoinet/error.hpp"
#include "hoinet/parallel.hpp"

namespace hoinet {

namespace {

std::vector<std::size_t> others(std::size_t m, std::size_t i, std::size_t j) {
    std::vector<std::size_t> z;
    for (std::size_t k = 0; k < m; ++k)
        if (k != i && k != j) z.push_back(k);
    return z;
}

template <typename T>
std::vector<T> concat(std::initializer_list<T> head, const std::vector<T>& tail) {
    std::vector<T> out(head);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

// Entropies of marginals of one joint table, memoised by axis mask.
class MarginalEntropies {
public:
    explicit MarginalEntropies(const ProbabilityTable& table) : table_(table) {}

    double operator()(const std::vector<std::size_t>& axes) {
        std::uint64_t key = 0;
        for (auto a : axes) key |= std::uint64_t{1} << a;
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const double h = marginal_entropy(table_, axes);
        cache_.emplace(key, h);
        return h;
    }

private:
    const ProbabilityTable& table_;
    std::unordered_map<std::uint64_t, double> cache_;
};

// Null distribution of cMI(X;Y|Z) under permutations of X within the strata
// of Z (observations sharing the same Z symbols). Such permutations leave
// the (X,Z), (Y,Z) and Z cell counts unchanged, so only H(X,Y,Z) is
// recomputed per sample.
class StratifiedCmiNull {
public:
    StratifiedCmiNull(const SymbolDataset& d, std::size_t i, std::size_t j, const std::vector<std::size_t>& z)
        : n_(d.observations()), qx_(d.alphabet_size(i)), qy_(d.alphabet_size(j)), y_(n_), zcode_(n_) {
        std::size_t zcells = 1;
        for (auto c : z) zcells *= d.alphabet_size(c);
        for (std::size_t t = 0; t < n_; ++t) {
            std::size_t code = 0;
            for (auto c : z) code = code * d.alphabet_size(c) + d.at(t, c);
            zcode_[t] = code;
            y_[t] = d.at(t, j);
        }
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return zcode_[a] < zcode_[b]; });
        for (std::size_t k = 0; k < n_; ++k) {
            if (k == 0 || zcode_[order_[k]] != zcode_[order_[k - 1]]) group_starts_.push_back(k);
        }
        group_starts_.push_back(n_);
        x_sorted_.resize(n_);
        for (std::size_t k = 0; k < n_; ++k) x_sorted_[k] = d.at(order_[k], i);

        counts_.assign(qx_ * qy_ * zcells, 0);
        std::vector<std::uint32_t> zc(zcells, 0), xz(qx_ * zcells, 0), yz(qy_ * zcells, 0);
        for (std::size_t t = 0; t < n_; ++t) {
            const auto x = d.at(t, i);
            ++zc[zcode_[t]];
            ++xz[x * zcells + zcode_[t]];
            ++yz[y_[t] * zcells + zcode_[t]];
        }
        fixed_ = count_entropy(xz) + count_entropy(yz) - count_entropy(zc);
        observed_ = statistic();
    }

    double observed() const { return observed_; }

    double sample(Rng& rng) {
        for (std::size_t g = 0; g + 1 < group_starts_.size(); ++g) {
            const auto begin = x_sorted_.begin() + static_cast<std::ptrdiff_t>(group_starts_[g]);
            const auto end = x_sorted_.begin() + static_cast<std::ptrdiff_t>(group_starts_[g + 1]);
            if (end - begin > 1) std::shuffle(begin, end, rng);
        }
        return statistic();
    }

private:
    std::size_t cell(std::size_t k) const {
        const auto t = order_[k];
        return (x_sorted_[k] * qy_ + y_[t]) * (counts_.size() / (qx_ * qy_)) + zcode_[t];
    }

    double statistic() {
        for (std::size_t k = 0; k < n_; ++k) ++counts_[cell(k)];
        double sum = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            auto& c = counts_[cell(k)];
            if (c == 0) continue;  // cell already accumulated
            sum += c * std::log(static_cast<double>(c));
            c = 0;
        }
        const double h_xyz = std::log(static_cast<double>(n_)) - sum / static_cast<double>(n_);
        return std::max(fixed_ - h_xyz, 0.0);
    }

    double count_entropy(const std::vector<std::uint32_t>& counts) const {
        double sum = 0.0;
        for (auto c : counts)
            if (c > 0) sum += c * std::log(static_cast<double>(c));
        return std::log(static_cast<double>(n_)) - sum / static_cast<double>(n_);
    }

    std::size_t n_, qx_, qy_;
    std::vector<Symbol> y_;
    std::vector<std::size_t> zcode_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> group_starts_;
    std::vector<Symbol> x_sorted_;
    std::vector<std::uint32_t> counts_;
    double fixed_ = 0.0;
    double observed_ = 0.0;
};

// Per-link null samples of the two statistics.
struct LinkNulls {
    std::vector<std::vector<double>> is;
    std::vector<std::vector<double>> cis;
};

LinkNulls collect_nulls(const std::vector<PairMeasures>& surrogates, std::size_t links) {
    LinkNulls nulls{std::vector<std::vector<double>>(links), std::vector<std::vector<double>>(links)};
    for (const auto& s : surrogates) {
        for (std::size_t k = 0; k < links; ++k) {
            nulls.is[k].push_back(s.is[k]);
            nulls.cis[k].push_back(s.cis[k]);
        }
    }
    return nulls;
}

NetworkResult assemble(AnalysisMode mode, std::vector<std::string> names, const PairMeasures& original,
                       const LinkNulls& nulls, const AnalysisSnapshot& snapshot,
                       const std::vector<double>& tested_cis) {
    NetworkResult result;
    result.mode = mode;
    result.channel_names = std::move(names);
    result.config = snapshot;
    const auto m = result.channel_names.size();

    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j, ++k) {
            const bool is_sig = percentile_test(original.is[k], nulls.is[k], snapshot.surrogates.alpha);
            const bool cis_sig = percentile_test(tested_cis[k], nulls.cis[k], snapshot.surrogates.alpha);
            result.links.push_back(make_link_result(i, j, original.is[k], original.cis[k], is_sig, cis_sig));
        }
    }
    result.adjacency = reconstruct(result);
    return result;
}

void require_network(std::size_t m) {
    if (m < 3) throw InvalidArgument("network analysis needs at least 3 channels");
    if (m > 64) throw InvalidArgument("network analysis supports at most 64 channels");
}

}  // namespace

std::string_view to_string(AnalysisMode m) { return m == AnalysisMode::static_mode ? "static" : "dynamic"; }

AnalysisMode analysis_mode_from_string(std::string_view s) {
    if (s == "static") return AnalysisMode::static_mode;
    if (s == "dynamic") return AnalysisMode::dynamic_mode;
    throw InvalidArgument("unknown analysis mode '" + std::string(s) + "'");
}

std::size_t link_index(std::size_t m, std::size_t i, std::size_t j) {
    if (i == j || i >= m || j >= m) throw InvalidArgument("invalid link");
    if (i > j) std::swap(i, j);
    // Links before row i: sum_{r<i} (m - 1 - r).
    return i * (2 * m - i - 1) / 2 + (j - i - 1);
}

const LinkResult& NetworkResult::link(std::size_t i, std::size_t j) const {
    return links.at(link_index(nodes(), i, j));
}

Eigen::MatrixXd NetworkResult::matrix(Measure which) const {
    const auto m = static_cast<Eigen::Index>(nodes());
    Eigen::MatrixXd out = Eigen::MatrixXd::Constant(m, m, std::numeric_limits<double>::quiet_NaN());
    for (const auto& l : links) {
        double v = 0.0;
        switch (which) {
            case Measure::is: v = l.is_value; break;
            case Measure::cis: v = l.cis_value; break;
            case Measure::nis: v = l.nis_value; break;
            case Measure::b_index: v = l.b_index; break;
        }
        const auto i = static_cast<Eigen::Index>(l.i), j = static_cast<Eigen::Index>(l.j);
        out(i, j) = out(j, i) = v;
    }
    return out;
}

PairMeasures static_pair_measures(const SymbolDataset& dataset, std::size_t cell_cap) {
    const auto m = dataset.channels();
    require_network(m);
    std::vector<std::size_t> all(m);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto table = joint_pmf(dataset, all, cell_cap);
    MarginalEntropies h(table);

    PairMeasures out;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto z = others(m, i, j);
            const double hx = h({i});
            const double mi = hx + h({j}) - h({i, j});
            const double i_x_yz = hx + h(concat({j}, z)) - h(all);
            const double i_x_z = hx + h(z) - h(concat({i}, z));
            out.is.push_back(std::max(mi, 0.0));
            out.cis.push_back(std::max(i_x_yz - i_x_z, 0.0));
        }
    }
    return out;
}

PairMeasures dynamic_pair_measures(const VarModel& model, int q) {
    const auto m = model.dim();
    require_network(m);
    SubsetEntropyRates rates(model_covariances(model, std::max(q, model.order())), q);
    PairMeasures out;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            out.is.push_back(rates.mir(i, j));
            out.cis.push_back(rates.cmir(i, j, others(m, i, j)));
        }
    }
    return out;
}

NetworkResult analyze_static(const SymbolDataset& dataset, const SurrogateConfig& config) {
    config.validate();
    if (dataset.observations() < 2) throw InvalidArgument("shuffle surrogates need at least 2 observations");
    const auto original = static_pair_measures(dataset);
    const auto m = dataset.channels();
    const auto links = original.is.size();

    std::vector<PairMeasures> surrogates(static_cast<std::size_t>(config.count));
    for (int r = 0; r < config.count; ++r) {
        Rng rng(derive_seed(config.master_seed, {static_cast<std::uint64_t>(r)}));
        surrogates[r] = static_pair_measures(shuffle_surrogate(dataset, rng));
    }
    auto nulls = collect_nulls(surrogates, links);

    // The conditional null is tested against its own evaluation of the
    // original statistic so that permutations reproducing the original
    // counts tie exactly.
    std::vector<double> tested_cis = original.cis;
    if (config.cis_null == ConditionalNull::conditional) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j, ++k) {
                StratifiedCmiNull sampler(dataset, i, j, others(m, i, j));
                tested_cis[k] = sampler.observed();
                Rng rng(derive_seed(config.master_seed, {i, j, 0xC15}));
                auto& null = nulls.cis[k];
                null.clear();
                for (int r = 0; r < config.count; ++r) null.push_back(sampler.sample(rng));
            }
        }
    }

    AnalysisSnapshot snapshot;
    snapshot.surrogates = config;
    snapshot.surrogates.method = SurrogateMethod::shuffle;
    return assemble(AnalysisMode::static_mode, dataset.channel_names(), original, nulls, snapshot, tested_cis);
}

NetworkResult analyze_dynamic(const SeriesDataset& series, const SurrogateConfig& config,
                              const DynamicOptions& options) {
    config.validate();
    require_network(series.channels());
    if (options.q < 1) throw InvalidArgument("restricted order q must be positive");

    const auto model = fit_var(series, options.p_max);
    if (!model.stationary) {
        throw IdentificationError("fitted VAR model is not stationary (spectral radius " +
                                  std::to_string(model.spectral_radius) + ")");
    }
    const auto original = dynamic_pair_measures(model, options.q);

    std::vector<PairMeasures> nulls;
    int failed = 0;
    for (int r = 0; r < config.count; ++r) {
        Rng rng(derive_seed(config.master_seed, {static_cast<std::uint64_t>(r)}));
        const auto surrogate = iaaft_surrogate(series, rng, config.iaaft_max_iter);
        try {
            const auto fitted = fit_var(surrogate, options.p_max);
            if (!fitted.stationary) {
                ++failed;
                continue;
            }
            nulls.push_back(dynamic_pair_measures(fitted, options.q));
        } catch (const NumericalError&) {
            ++failed;
        }
    }
    if (nulls.empty()) throw NumericalError("every surrogate analysis failed");

    AnalysisSnapshot snapshot;
    snapshot.surrogates = config;
    snapshot.surrogates.method = SurrogateMethod::iaaft;
    snapshot.p_max = options.p_max;
    snapshot.q = options.q;
    snapshot.selected_order = model.order();
    snapshot.failed_surrogates = failed;
    return assemble(AnalysisMode::dynamic_mode, series.channel_names(), original,
                    collect_nulls(nulls, original.is.size()), snapshot, original.cis);
}

Adjacency reconstruct(const NetworkResult& result) {
    Adjacency adj(result.nodes());
    for (const auto& l : result.links) adj.set(l.i, l.j, l.is_significant && l.cis_significant);
    return adj;
}

double ConfusionCounts::sensitivity() const {
    const auto pos = tp + fn;
    return pos == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(tp) / pos;
}

double ConfusionCounts::specificity() const {
    const auto neg = tn + fp;
    return neg == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(tn) / neg;
}

ConfusionCounts score_adjacency(const Adjacency& truth, const Adjacency& predicted) {
    if (truth.nodes() != predicted.nodes()) throw InvalidArgument("adjacency sizes differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.nodes(); ++i) {
        for (std::size_t j = i + 1; j < truth.nodes(); ++j) {
            const bool t = truth(i, j), p = predicted(i, j);
            if (t && p) ++c.tp;
            else if (t) ++c.fn;
            else if (p) ++c.fp;
            else ++c.tn;
        }
    }
    return c;
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::binary10: return "binary10";
        case Scenario::var_stars_competing: return "var-stars-competing";
        case Scenario::var_stars_propagation: return "var-stars-propagation";
    }
    return "binary10";
}

Scenario scenario_from_string(std::string_view s) {
    for (auto sc : {Scenario::binary10, Scenario::var_stars_competing, Scenario::var_stars_propagation}) {
        if (to_string(sc) == s) return sc;
    }
    throw InvalidArgument("unknown scenario '" + std::string(s) + "'");
}

BenchmarkReport benchmark(const BenchmarkSpec& spec) {
    if (spec.runs < 1) throw InvalidArgument("runs must be positive");
    if (spec.lengths.empty()) throw InvalidArgument("no data lengths given");
    spec.surrogates.validate();

    const bool is_binary = spec.scenario == Scenario::binary10;
    const std::vector<double> params =
        is_binary ? std::vector<double>{std::numeric_limits<double>::quiet_NaN()} : spec.parameters;
    if (params.empty()) throw InvalidArgument("no scenario parameters given");

    struct Outcome {
        bool ok = false;
        ConfusionCounts counts;
        Adjacency predicted;
        std::string failure;
    };
    const auto runs = static_cast<std::size_t>(spec.runs);
    const auto cells = spec.lengths.size() * params.size();
    std::vector<Outcome> outcomes(cells * runs);
    const auto master = spec.surrogates.master_seed;

    parallel_for(outcomes.size(), spec.jobs, [&](std::size_t task) {
        const auto run = task % runs;
        const auto cell = task / runs;
        const auto li = cell / params.size();
        const auto pi = cell % params.size();
        const auto n = spec.lengths[li];
        const std::uint64_t data_seed = derive_seed(master, {n, pi, run});
        SurrogateConfig config = spec.surrogates;
        config.master_seed = derive_seed(master, {n, pi, run, 0xA11});

        Outcome& out = outcomes[task];
        try {
            if (is_binary) {
                Binary10Params bp;
                bp.n = n;
                bp.seed = data_seed;
                const auto gen = gen_binary10(bp);
                out.predicted = analyze_static(gen.data, config).adjacency;
                out.counts = score_adjacency(gen.truth, out.predicted);
            } else {
                VarStarsParams vp;
                vp.structure = spec.scenario == Scenario::var_stars_competing ? StarStructure::competing
                                                                              : StarStructure::propagation;
                vp.hub_out = params[pi];
                vp.other_arm = 1.0 - params[pi];
                vp.n = n;
                vp.seed = data_seed;
                const auto gen = gen_var_stars(vp);
                out.predicted = analyze_dynamic(gen.data, config, spec.dynamic).adjacency;
                out.counts = score_adjacency(gen.truth, out.predicted);
            }
            out.ok = true;
        } catch (const NumericalError& e) {
            out.failure = e.what();
        }
    });

    BenchmarkReport report;
    report.scenario = spec.scenario;
    report.master_seed = master;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        BenchmarkRow row;
        row.n = spec.lengths[cell / params.size()];
        row.parameter = params[cell % params.size()];
        row.runs = spec.runs;
        for (std::size_t run = 0; run < runs; ++run) {
            const auto& out = outcomes[cell * runs + run];
            if (!out.ok) {
                ++row.failed_runs;
                row.failures.push_back(out.failure);
                continue;
            }
            const auto m = out.predicted.nodes();
            if (row.detected.empty()) row.detected.assign(m, std::vector<int>(m, 0));
            for (auto [i, j] : out.predicted.edges()) {
                ++row.detected[i][j];
                ++row.detected[j][i];
            }
            row.per_run.push_back(out.counts);
            row.totals += out.counts;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace hoinet

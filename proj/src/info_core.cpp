#include "hoinet/info_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hoinet/error.hpp"

namespace hoinet {

namespace {

// Values in (-kRoundoff, 0) are floating-point residue of non-negative sums.
constexpr double kRoundoff = 1e-12;

double clip_roundoff(double v) { return (v < 0.0 && v > -kRoundoff) ? 0.0 : v; }

std::size_t checked_cells(std::span<const std::size_t> dims, std::size_t cap) {
    std::size_t cells = 1;
    for (auto d : dims) {
        if (d == 0) throw InvalidArgument("alphabet size must be positive");
        if (cells > cap / d) {
            throw InvalidArgument("product alphabet exceeds the table cap of " +
                                  std::to_string(cap) + " cells");
        }
        cells *= d;
    }
    return cells;
}

void validate_subset(std::span<const std::size_t> subset, std::size_t channels) {
    if (subset.empty()) throw InvalidArgument("channel subset is empty");
    std::vector<std::size_t> sorted(subset.begin(), subset.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("channel subset has duplicate indices");
    if (sorted.back() >= channels)
        throw InvalidArgument("channel index " + std::to_string(sorted.back()) + " out of range");
}

}  // namespace

SymbolDataset::SymbolDataset(std::vector<std::vector<Symbol>> columns,
                             std::vector<std::size_t> alphabet_sizes,
                             std::vector<std::string> channel_names)
    : columns_(std::move(columns)),
      alphabet_sizes_(std::move(alphabet_sizes)),
      names_(std::move(channel_names)) {
    if (columns_.size() < 2) throw InvalidArgument("a symbol dataset needs at least 2 channels");
    const auto n = columns_.front().size();
    if (n == 0) throw InvalidArgument("a symbol dataset needs at least 1 observation");
    for (const auto& col : columns_) {
        if (col.size() != n) throw InvalidArgument("channels have different lengths");
    }
    if (alphabet_sizes_.empty()) {
        for (const auto& col : columns_)
            alphabet_sizes_.push_back(std::size_t{*std::max_element(col.begin(), col.end())} + 1);
    }
    if (alphabet_sizes_.size() != columns_.size())
        throw InvalidArgument("alphabet_sizes must have one entry per channel");
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (alphabet_sizes_[c] == 0) throw InvalidArgument("alphabet size must be positive");
        for (std::size_t r = 0; r < n; ++r) {
            if (columns_[c][r] >= alphabet_sizes_[c]) {
                throw InvalidArgument("symbol " + std::to_string(columns_[c][r]) + " at row " +
                                      std::to_string(r) + ", channel " + std::to_string(c) +
                                      " is outside the alphabet");
            }
        }
    }
    if (names_.empty()) {
        for (std::size_t c = 0; c < columns_.size(); ++c) names_.push_back("S" + std::to_string(c + 1));
    }
    if (names_.size() != columns_.size())
        throw InvalidArgument("channel_names must have one entry per channel");
}

SymbolDataset SymbolDataset::with_columns(std::vector<std::vector<Symbol>> columns) const {
    return SymbolDataset(std::move(columns), alphabet_sizes_, names_);
}

ProbabilityTable::ProbabilityTable(std::vector<std::size_t> subset, std::vector<std::size_t> dims,
                                   std::vector<double> probabilities)
    : subset_(std::move(subset)), dims_(std::move(dims)), probs_(std::move(probabilities)) {
    if (subset_.size() != dims_.size()) throw InvalidArgument("subset and dims differ in length");
    const auto cells = checked_cells(dims_, std::numeric_limits<std::size_t>::max());
    if (cells != probs_.size()) throw InvalidArgument("table size does not match product alphabet");
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability outside [0,1]");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("probabilities do not sum to 1");
}

double ProbabilityTable::at(std::span<const Symbol> symbols) const {
    if (symbols.size() != dims_.size()) throw InvalidArgument("symbol tuple has wrong arity");
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (symbols[k] >= dims_[k]) throw InvalidArgument("symbol outside the alphabet");
        index = index * dims_[k] + symbols[k];
    }
    return probs_[index];
}

ProbabilityTable ProbabilityTable::marginal(std::span<const std::size_t> axes) const {
    const auto rank = dims_.size();
    std::vector<bool> seen(rank, false);
    for (auto a : axes) {
        if (a >= rank || seen[a]) throw InvalidArgument("invalid marginal axes");
        seen[a] = true;
    }

    std::vector<std::size_t> out_dims;
    std::vector<std::size_t> out_subset;
    for (auto a : axes) {
        out_dims.push_back(dims_[a]);
        out_subset.push_back(subset_[a]);
    }
    // Stride of each source axis inside the output table (0 if summed out).
    std::vector<std::size_t> out_stride(rank, 0);
    std::size_t stride = 1;
    for (std::size_t k = axes.size(); k-- > 0;) {
        out_stride[axes[k]] = stride;
        stride *= out_dims[k];
    }

    std::vector<double> out(stride, 0.0);
    std::vector<std::size_t> digit(rank, 0);
    std::size_t out_index = 0;
    for (double p : probs_) {
        out[out_index] += p;
        // Odometer increment over the source table, tracking the output index.
        for (std::size_t k = rank; k-- > 0;) {
            if (++digit[k] < dims_[k]) {
                out_index += out_stride[k];
                break;
            }
            out_index -= out_stride[k] * (dims_[k] - 1);
            digit[k] = 0;
        }
    }

    ProbabilityTable result;
    result.subset_ = std::move(out_subset);
    result.dims_ = std::move(out_dims);
    result.probs_ = std::move(out);
    return result;
}

ProbabilityTable joint_pmf(const SymbolDataset& dataset, std::span<const std::size_t> subset,
                           std::size_t cell_cap) {
    validate_subset(subset, dataset.channels());
    std::vector<std::size_t> dims;
    for (auto c : subset) dims.push_back(dataset.alphabet_size(c));
    const auto cells = checked_cells(dims, cell_cap);

    const auto n = dataset.observations();
    std::vector<std::size_t> code(n, 0);
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const auto col = dataset.column(subset[k]);
        for (std::size_t r = 0; r < n; ++r) code[r] = code[r] * dims[k] + col[r];
    }
    std::vector<double> counts(cells, 0.0);
    for (auto c : code) counts[c] += 1.0;
    for (auto& c : counts) c /= static_cast<double>(n);

    ProbabilityTable table;
    table.subset_.assign(subset.begin(), subset.end());
    table.dims_ = std::move(dims);
    table.probs_ = std::move(counts);
    return table;
}

double entropy(const ProbabilityTable& table) {
    double h = 0.0;
    for (double p : table.probabilities()) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return std::max(h, 0.0);
}

double marginal_entropy(const ProbabilityTable& table, std::span<const std::size_t> axes) {
    if (axes.empty()) return 0.0;
    return entropy(table.marginal(axes));
}

double mutual_information(const ProbabilityTable& table, std::size_t x, std::size_t y) {
    if (x == y) throw InvalidArgument("mutual information needs two distinct channels");
    const std::size_t ax[] = {x};
    const std::size_t ay[] = {y};
    const std::size_t axy[] = {x, y};
    const double mi = marginal_entropy(table, ax) + marginal_entropy(table, ay) -
                      marginal_entropy(table, axy);
    return clip_roundoff(mi);
}

double conditional_mutual_information(const ProbabilityTable& table, std::size_t x,
                                      std::size_t y, std::span<const std::size_t> z) {
    if (x == y) throw InvalidArgument("conditional mutual information needs two distinct channels");
    if (std::find(z.begin(), z.end(), x) != z.end() || std::find(z.begin(), z.end(), y) != z.end())
        throw InvalidArgument("conditioning set overlaps the linked channels");
    if (z.empty()) return mutual_information(table, x, y);

    std::vector<std::size_t> axes_z(z.begin(), z.end());
    std::vector<std::size_t> axes_xz{x};
    axes_xz.insert(axes_xz.end(), z.begin(), z.end());
    std::vector<std::size_t> axes_yz{y};
    axes_yz.insert(axes_yz.end(), z.begin(), z.end());
    std::vector<std::size_t> axes_xyz{x, y};
    axes_xyz.insert(axes_xyz.end(), z.begin(), z.end());
    const std::size_t ax[] = {x};

    const double hx = marginal_entropy(table, ax);
    const double i_x_yz = hx + marginal_entropy(table, axes_yz) - marginal_entropy(table, axes_xyz);
    const double i_x_z = hx + marginal_entropy(table, axes_z) - marginal_entropy(table, axes_xz);
    return clip_roundoff(i_x_yz - i_x_z);
}

double mutual_information(const SymbolDataset& dataset, std::size_t i, std::size_t j) {
    if (i == j) throw InvalidArgument("mutual information needs two distinct channels");
    const std::size_t subset[] = {i, j};
    return mutual_information(joint_pmf(dataset, subset), 0, 1);
}

double conditional_mutual_information(const SymbolDataset& dataset, std::size_t i,
                                      std::size_t j, std::span<const std::size_t> zset,
                                      std::size_t cell_cap) {
    if (i == j) throw InvalidArgument("conditional mutual information needs two distinct channels");
    std::vector<std::size_t> subset{i, j};
    subset.insert(subset.end(), zset.begin(), zset.end());
    const auto table = joint_pmf(dataset, subset, cell_cap);  // rejects overlap as duplicates
    std::vector<std::size_t> z_axes(zset.size());
    std::iota(z_axes.begin(), z_axes.end(), std::size_t{2});
    return conditional_mutual_information(table, 0, 1, z_axes);
}

}  // namespace hoinet

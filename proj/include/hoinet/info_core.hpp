#pragma once

// Plug-in information measures for discrete random variables.
//
// All quantities are in nats. Probability tables are dense over the product
// alphabet of the selected channels; the first channel of a subset varies
// slowest (row-major / C order).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hoinet {

using Symbol = std::uint32_t;

/// Default cap on the number of cells of a dense probability table (2^20).
inline constexpr std::size_t kDefaultTableCap = std::size_t{1} << 20;

/// N observations of M discrete channels, stored column-major.
class SymbolDataset {
public:
    SymbolDataset() = default;

    /// Alphabet sizes are inferred as max symbol + 1 per column when
    /// `alphabet_sizes` is empty. Names default to S1..SM.
    SymbolDataset(std::vector<std::vector<Symbol>> columns,
                  std::vector<std::size_t> alphabet_sizes = {},
                  std::vector<std::string> channel_names = {});

    std::size_t observations() const { return columns_.empty() ? 0 : columns_.front().size(); }
    std::size_t channels() const { return columns_.size(); }

    std::span<const Symbol> column(std::size_t c) const { return columns_.at(c); }
    Symbol at(std::size_t row, std::size_t c) const { return columns_[c][row]; }
    std::size_t alphabet_size(std::size_t c) const { return alphabet_sizes_.at(c); }
    const std::vector<std::size_t>& alphabet_sizes() const { return alphabet_sizes_; }
    const std::vector<std::string>& channel_names() const { return names_; }
    const std::vector<std::vector<Symbol>>& columns() const { return columns_; }

    /// Same alphabets and names, new column contents (used by surrogates).
    SymbolDataset with_columns(std::vector<std::vector<Symbol>> columns) const;

private:
    std::vector<std::vector<Symbol>> columns_;
    std::vector<std::size_t> alphabet_sizes_;
    std::vector<std::string> names_;
};

/// Dense joint probability table over an ordered subset of channels.
class ProbabilityTable {
public:
    ProbabilityTable() = default;

    /// Builds a table from explicit probabilities; they must be non-negative
    /// and sum to 1 within 1e-12.
    ProbabilityTable(std::vector<std::size_t> subset, std::vector<std::size_t> dims,
                     std::vector<double> probabilities);

    const std::vector<std::size_t>& subset() const { return subset_; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::span<const double> probabilities() const { return probs_; }
    std::size_t size() const { return probs_.size(); }

    /// Probability of one symbol combination, ordered as subset().
    double at(std::span<const Symbol> symbols) const;

    /// Marginal over the given axes (positions into subset()), kept in the
    /// order given.
    ProbabilityTable marginal(std::span<const std::size_t> axes) const;

private:
    friend ProbabilityTable joint_pmf(const SymbolDataset&, std::span<const std::size_t>,
                                      std::size_t);

    std::vector<std::size_t> subset_;
    std::vector<std::size_t> dims_;
    std::vector<double> probs_;
};

/// Empirical joint pmf (relative frequencies) of the channels in `subset`.
ProbabilityTable joint_pmf(const SymbolDataset& dataset, std::span<const std::size_t> subset,
                           std::size_t cell_cap = kDefaultTableCap);

/// -sum p ln p with 0 ln 0 = 0.
double entropy(const ProbabilityTable& table);

/// Entropy of the marginal over `axes` of `table`.
double marginal_entropy(const ProbabilityTable& table, std::span<const std::size_t> axes);

// Table-level measures; arguments are axis positions into the table.
double mutual_information(const ProbabilityTable& table, std::size_t x, std::size_t y);
double conditional_mutual_information(const ProbabilityTable& table, std::size_t x,
                                      std::size_t y, std::span<const std::size_t> z);

// Dataset-level measures; arguments are channel indices.
double mutual_information(const SymbolDataset& dataset, std::size_t i, std::size_t j);

/// I(X;Y|Z) = I(X;{Y,Z}) - I(X;Z), all entropies from one shared pmf.
double conditional_mutual_information(const SymbolDataset& dataset, std::size_t i,
                                      std::size_t j, std::span<const std::size_t> zset,
                                      std::size_t cell_cap = kDefaultTableCap);

}  // namespace hoinet

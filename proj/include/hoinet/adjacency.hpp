#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace hoinet {

/// Undirected, loop-free graph over M nodes.
class Adjacency {
public:
    Adjacency() = default;
    explicit Adjacency(std::size_t m) : m_(m), cells_(m * m, 0) {}

    std::size_t nodes() const { return m_; }
    bool operator()(std::size_t i, std::size_t j) const { return cells_[i * m_ + j] != 0; }

    void set(std::size_t i, std::size_t j, bool edge = true) {
        if (i == j) return;
        cells_[i * m_ + j] = cells_[j * m_ + i] = edge ? 1 : 0;
    }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = i + 1; j < m_; ++j) n += (*this)(i, j);
        return n;
    }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = i + 1; j < m_; ++j)
                if ((*this)(i, j)) out.emplace_back(i, j);
        return out;
    }

    bool operator==(const Adjacency&) const = default;

private:
    std::size_t m_ = 0;
    std::vector<std::uint8_t> cells_;
};

}  // namespace hoinet

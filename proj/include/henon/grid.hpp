#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace henon {

// Uniform symmetric grid kappa_i = -L + i h on [-L, L] with an odd node count,
// so kappa = 0 is the center node.
class LogGrid {
public:
    LogGrid(double half_width, std::size_t nodes);

    double half_width() const { return half_width_; }
    std::size_t size() const { return nodes_; }
    double spacing() const { return spacing_; }
    std::size_t center() const { return nodes_ / 2; }
    double node(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(nodes_ / 2)) * spacing_;
    }
    std::vector<double> nodes() const;

    // Index of the mirror node under kappa -> -kappa.
    std::size_t mirror(std::size_t i) const { return nodes_ - 1 - i; }

    // Same L, 2M - 1 nodes (h halved).
    LogGrid refined() const { return LogGrid(half_width_, 2 * nodes_ - 1); }

    friend bool operator==(const LogGrid& a, const LogGrid& b) {
        return a.nodes_ == b.nodes_ && a.half_width_ == b.half_width_;
    }

private:
    double half_width_;
    std::size_t nodes_;
    double spacing_;
};

inline LogGrid::LogGrid(double half_width, std::size_t nodes) : half_width_(half_width), nodes_(nodes) {
    if (!(half_width > 0.0)) throw std::invalid_argument("grid half-width must be positive");
    if (nodes < 3 || nodes % 2 == 0) throw std::invalid_argument("grid node count must be odd and >= 3");
    spacing_ = 2.0 * half_width / static_cast<double>(nodes - 1);
}

inline std::vector<double> LogGrid::nodes() const {
    std::vector<double> out(nodes_);
    for (std::size_t i = 0; i < nodes_; ++i) out[i] = node(i);
    return out;
}

}  // namespace henon

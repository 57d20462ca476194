#pragma once
/// Uniform 1D grids and complex-valued sampled profiles.

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace blayer {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

/// Uniform grid on [lo, hi]. Nodes are computed as lo + j*h, never stored.
class Grid1D {
public:
  Grid1D() = default;

  /// `n` nodes spanning [lo, hi] (n >= 2).
  static Grid1D uniform(double lo, double hi, std::size_t n);

  /// Grid starting at `lo` whose spacing is at most `h_max` and which carries `mark` as a node.
  /// The upper end is the first node at or beyond `hi`.
  static Grid1D with_node_at(double lo, double hi, double mark, double h_max);

  /// Symmetric grid [-half, half] with 2*m intervals; 0 is the marked node.
  static Grid1D symmetric(double half, std::size_t intervals);

  /// Rebuilds a grid from its stored description (deserialization).
  static Grid1D from_parts(double lo, double h, std::size_t n, std::optional<std::size_t> mark);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return lo_ + h_ * static_cast<double>(n_ - 1); }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return n_; }
  double node(std::size_t j) const noexcept { return lo_ + h_ * static_cast<double>(j); }
  RVec nodes() const;

  std::optional<std::size_t> mark() const noexcept { return mark_; }
  /// Index of the marked node; throws ResolutionError when absent.
  std::size_t mark_index() const;

  /// Index of the node nearest to y (clamped to the grid).
  std::size_t nearest(double y) const noexcept;

  bool operator==(const Grid1D&) const = default;

private:
  double lo_ = 0.0;
  double h_ = 1.0;
  std::size_t n_ = 0;
  std::optional<std::size_t> mark_;
};

/// Complex samples on a grid.
struct ComplexProfile {
  Grid1D grid;
  CVec values;

  ComplexProfile() = default;
  explicit ComplexProfile(const Grid1D& g) : grid(g), values(g.size(), cplx{}) {}
  ComplexProfile(const Grid1D& g, CVec v);

  std::size_t size() const noexcept { return values.size(); }
  cplx& operator[](std::size_t j) { return values[j]; }
  const cplx& operator[](std::size_t j) const { return values[j]; }

  /// Throws InvalidProfile on length mismatch or non-finite samples.
  void validate() const;
  bool finite() const noexcept;
};

} // namespace blayer

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace fpm {

/// Real wavevector. The second component is zero in one dimension, so dot
/// products and norms need no dimension switch.
using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

/// Integer lattice point; unused components are zero.
using Wave = std::array<int, 2>;

inline Vec2 to_vec(const Wave& k) { return {double(k[0]), double(k[1])}; }

/// Uniform discretization of the torus [0, 2pi)^d, d in {1, 2}.
///
/// Storage is row-major over grid points (physical space) and over FFT-ordered
/// indices (coefficient space): index i along one axis carries the wavenumber
/// i for i < N/2 and i - N otherwise, so the lattice is {-N/2, ..., N/2 - 1}^d.
class TorusGrid {
 public:
  TorusGrid(int dim, int n) : dim_(dim), n_(n) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("TorusGrid: dimension must be 1 or 2");
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("TorusGrid: modes per dimension must be even and >= 8");
  }

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t size() const { return dim_ == 1 ? std::size_t(n_) : std::size_t(n_) * std::size_t(n_); }
  double dx() const { return 2.0 * std::numbers::pi / n_; }
  /// (2 pi)^d, the torus volume.
  double volume() const { return std::pow(2.0 * std::numbers::pi, dim_); }

  int wavenumber(int axis_index) const { return axis_index < n_ / 2 ? axis_index : axis_index - n_; }

  Wave wave(std::size_t flat) const {
    if (dim_ == 1) return {wavenumber(int(flat)), 0};
    return {wavenumber(int(flat / std::size_t(n_))), wavenumber(int(flat % std::size_t(n_)))};
  }

  Vec2 wavevector(std::size_t flat) const { return to_vec(wave(flat)); }

  double wave_norm(std::size_t flat) const { return norm(wavevector(flat)); }

  /// Flat index of a lattice point, or nullopt when it lies outside the lattice.
  std::optional<std::size_t> index_of(const Wave& k) const {
    auto axis = [&](int w) -> std::optional<int> {
      if (w < -n_ / 2 || w >= n_ / 2) return std::nullopt;
      return w >= 0 ? w : w + n_;
    };
    auto i0 = axis(k[0]);
    if (!i0) return std::nullopt;
    if (dim_ == 1) {
      if (k[1] != 0) return std::nullopt;
      return std::size_t(*i0);
    }
    auto i1 = axis(k[1]);
    if (!i1) return std::nullopt;
    return std::size_t(*i0) * std::size_t(n_) + std::size_t(*i1);
  }

  /// Index of the lattice point -k under periodic identification. Maps the
  /// Nyquist row onto itself.
  std::size_t mirror(std::size_t flat) const {
    auto m = [&](std::size_t i) { return (std::size_t(n_) - i) % std::size_t(n_); };
    if (dim_ == 1) return m(flat);
    return m(flat / std::size_t(n_)) * std::size_t(n_) + m(flat % std::size_t(n_));
  }

  /// True when any component of the wavenumber is -N/2 (no conjugate partner).
  bool is_nyquist(std::size_t flat) const {
    Wave k = wave(flat);
    return k[0] == -n_ / 2 || (dim_ == 2 && k[1] == -n_ / 2);
  }

  /// Physical coordinate of grid point `flat`.
  Vec2 point(std::size_t flat) const {
    if (dim_ == 1) return {double(flat) * dx(), 0.0};
    return {double(flat / std::size_t(n_)) * dx(), double(flat % std::size_t(n_)) * dx()};
  }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

  std::string describe() const { return "d=" + std::to_string(dim_) + " N=" + std::to_string(n_); }

 private:
  int dim_;
  int n_;
};

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* where) {
  if (!(a == b)) throw std::invalid_argument(std::string(where) + ": grid mismatch (" + a.describe() + " vs " + b.describe() + ")");
}

}  // namespace fpm

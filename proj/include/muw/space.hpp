#pragma once

#include <string>
#include <vector>

#include "muw/common.hpp"

namespace muw {

/// One tensor factor: a finite-dimensional Hilbert space or its conjugate.
struct Factor {
  int dim = 1;
  bool conjugate = false;

  friend bool operator==(const Factor& a, const Factor& b) {
    return a.dim == b.dim && a.conjugate == b.conjugate;
  }
};

/// Ordered tensor product of factors with a fixed orthonormal product basis,
/// enumerated lexicographically (first factor most significant). Conjugation
/// is entrywise complex conjugation of coordinates in that basis.
class Space {
 public:
  Space() = default;
  explicit Space(std::vector<Factor> factors) : factors_(std::move(factors)) {
    for (const auto& f : factors_)
      if (f.dim < 1) throw ShapeError("factor dimension must be >= 1");
  }

  static Space line(int dim, bool conjugate = false) { return Space({Factor{dim, conjugate}}); }

  static Space power(int dim, int copies) {
    std::vector<Factor> fs(static_cast<std::size_t>(copies), Factor{dim, false});
    return Space(std::move(fs));
  }

  int factor_count() const { return static_cast<int>(factors_.size()); }
  const Factor& factor(int i) const {
    if (i < 0 || i >= factor_count()) throw ShapeError("factor index out of range");
    return factors_[static_cast<std::size_t>(i)];
  }
  const std::vector<Factor>& factors() const { return factors_; }

  long dim() const {
    long d = 1;
    for (const auto& f : factors_) d *= f.dim;
    return d;
  }

  std::vector<int> dims() const {
    std::vector<int> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(f.dim);
    return out;
  }

  /// Conjugate of every factor; an involution, identifying the double
  /// conjugate with the original space.
  Space conjugated() const {
    auto fs = factors_;
    for (auto& f : fs) f.conjugate = !f.conjugate;
    return Space(std::move(fs));
  }

  Space tensor(const Space& other) const {
    auto fs = factors_;
    fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
    return Space(std::move(fs));
  }

  /// Sub-product of the named legs (0-based), in the given order.
  Space select(const std::vector<int>& legs) const {
    std::vector<Factor> fs;
    fs.reserve(legs.size());
    for (int l : legs) fs.push_back(factor(l));
    return Space(std::move(fs));
  }

  Space swapped() const {
    if (factor_count() != 2) throw ShapeError("swapped() needs exactly two factors");
    return Space({factors_[1], factors_[0]});
  }

  /// stride[i] = product of dims of factors after i.
  std::vector<long> strides() const {
    std::vector<long> s(factors_.size(), 1);
    for (int i = factor_count() - 2; i >= 0; --i)
      s[static_cast<std::size_t>(i)] =
          s[static_cast<std::size_t>(i + 1)] * factors_[static_cast<std::size_t>(i + 1)].dim;
    return s;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += " x ";
      out += std::to_string(factors_[i].dim);
      if (factors_[i].conjugate) out += "~";
    }
    return out.empty() ? "1" : out;
  }

  friend bool operator==(const Space& a, const Space& b) { return a.factors_ == b.factors_; }
  friend bool operator!=(const Space& a, const Space& b) { return !(a == b); }

 private:
  std::vector<Factor> factors_;
};

}  // namespace muw

#pragma once

#include <array>
#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "muw/common.hpp"
#include "muw/munit.hpp"
#include "muw/operator.hpp"
#include "muw/positive.hpp"

namespace muw {

/// Finite group as a multiplication table; elements indexed 0..n-1 with the
/// identity at 0. Associativity and unique inverses are validated on load.
class GroupTable {
 public:
  explicit GroupTable(std::vector<std::vector<int>> table) : table_(std::move(table)) {
    validate();
  }

  static GroupTable cyclic(int n) {
    if (n < 1) throw ParameterError("cyclic group order must be >= 1");
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
    return GroupTable(std::move(t));
  }

  static GroupTable direct_product(const GroupTable& g, const GroupTable& h) {
    const int n = g.order(), m = h.order();
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n * m), std::vector<int>(n * m));
    for (int a = 0; a < n * m; ++a)
      for (int b = 0; b < n * m; ++b)
        t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            g.mul(a / m, b / m) * m + h.mul(a % m, b % m);
    return GroupTable(std::move(t));
  }

  /// Permutations of three letters, enumerated with the identity first.
  static GroupTable symmetric3() {
    const std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2},
                                                      {0, 2, 1},
                                                      {1, 0, 2},
                                                      {1, 2, 0},
                                                      {2, 0, 1},
                                                      {2, 1, 0}}};
    auto compose = [&](int a, int b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[static_cast<std::size_t>(i)] = perms[static_cast<std::size_t>(a)][static_cast<std::size_t>(perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)])];
      for (int k = 0; k < 6; ++k)
        if (perms[static_cast<std::size_t>(k)] == c) return k;
      throw Error("permutation composition not found");
    };
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = compose(a, b);
    return GroupTable(std::move(t));
  }

  /// CSV with one row per element; entry (g,h) is the index of g*h.
  static GroupTable load_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open group table: " + path);
    std::vector<std::vector<int>> t;
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      std::vector<int> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          row.push_back(std::stoi(cell));
        } catch (const std::exception&) {
          throw ParseError("group table: bad cell '" + cell + "'");
        }
      }
      t.push_back(std::move(row));
    }
    return GroupTable(std::move(t));
  }

  int order() const { return static_cast<int>(table_.size()); }

  int mul(int a, int b) const {
    return table_.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b));
  }

  int inverse(int a) const {
    for (int b = 0; b < order(); ++b)
      if (mul(a, b) == 0) return b;
    throw Error("no inverse");  // unreachable after validate()
  }

 private:
  void validate() const {
    const int n = order();
    if (n < 1) throw ParseError("group table is empty");
    for (const auto& row : table_) {
      if (static_cast<int>(row.size()) != n) throw ParseError("group table is not square");
      for (int v : row)
        if (v < 0 || v >= n) throw ParseError("group table entry out of range");
    }
    for (int a = 0; a < n; ++a)
      if (mul(0, a) != a || mul(a, 0) != a)
        throw ParseError("element 0 is not a two-sided identity");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw ParseError("group table not associative");
    for (int a = 0; a < n; ++a) {
      int count = 0;
      for (int b = 0; b < n; ++b)
        if (mul(a, b) == 0 && mul(b, a) == 0) ++count;
      if (count != 1) throw ParseError("element lacks a unique inverse");
    }
  }

  std::vector<std::vector<int>> table_;
};

/// Kac-Takesaki operator of a finite group: W (d_g (x) d_h) = d_g (x) d_{gh}
/// on l2(G) (x) l2(G); multiplicative by associativity.
inline MultUnitary gen_group_kt(const GroupTable& g) {
  const int n = g.order();
  const Space h2 = Space::power(n, 2);
  Mat w = Mat::Zero(static_cast<long>(n) * n, static_cast<long>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      w(static_cast<long>(a) * n + g.mul(a, b), static_cast<long>(a) * n + b) = 1.0;
  return MultUnitary(Operator::on(h2, std::move(w)));
}

/// Left translation by g on l2(G).
inline Operator group_translation(const GroupTable& g, int elem) {
  const int n = g.order();
  Mat m = Mat::Zero(n, n);
  for (int h = 0; h < n; ++h) m(g.mul(elem, h), h) = 1.0;
  return Operator::on(Space::line(n), std::move(m));
}

/// Candidate certificate with Q = I and diagonal Qhat; validity is judged by
/// check_modular, not assumed.
inline std::pair<PositiveOperator, PositiveOperator> gen_skewed_certificate(
    const MultUnitary& mu, const RVec& q_hat_diag) {
  if (q_hat_diag.size() != mu.h_dim)
    throw ShapeError("skewed certificate: diagonal length must match H");
  for (Eigen::Index i = 0; i < q_hat_diag.size(); ++i)
    if (q_hat_diag(i) <= 0) throw PositivityError("skewed certificate: diagonal must be positive");
  const Space h = mu.h_space();
  return {PositiveOperator::identity(h), PositiveOperator::diagonal(h, q_hat_diag)};
}

}  // namespace muw

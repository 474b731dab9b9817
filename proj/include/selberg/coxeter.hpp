#pragma once

// Finite reflection groups of types A, B, D and I2: unit normals of the
// mirrors, invariant degrees, and the product of distances to all mirrors.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "selberg/config.hpp"
#include "selberg/errors.hpp"

namespace selberg {

enum class CoxeterType { A, B, D, I2 };

struct CoxeterGroup {
  CoxeterType type = CoxeterType::A;
  int param = 1;  // rank for A/B/D, m for I2
  int dim = 1;    // ambient dimension k
  std::vector<std::vector<Real>> normals;
  std::vector<int> degrees;

  int hyperplanes() const { return static_cast<int>(normals.size()); }

  std::string label() const {
    switch (type) {
      case CoxeterType::A: return "A" + std::to_string(param);
      case CoxeterType::B: return "B" + std::to_string(param);
      case CoxeterType::D: return "D" + std::to_string(param);
      case CoxeterType::I2: return "I2(" + std::to_string(param) + ")";
    }
    return "?";
  }
};

/// A(k): the symmetric group S_k permuting coordinates of R^k (k >= 2).
/// B(k), D(k): signed permutations of R^k. I2(m): dihedral group of order 2m
/// on R^2. The rank-one group A1 acting on R^1 is B(1).
inline CoxeterGroup make_group(CoxeterType type, int n) {
  CoxeterGroup g;
  g.type = type;
  g.param = n;
  const Real r2 = 1 / std::sqrt(Real(2));
  auto unit = [](int dim, int i) {
    std::vector<Real> v(dim, 0);
    v[i] = 1;
    return v;
  };
  auto roots_pm = [&](int dim, bool plus) {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        std::vector<Real> v(dim, 0);
        v[i] = r2;
        v[j] = -r2;
        g.normals.push_back(v);
        if (plus) {
          v[j] = r2;
          g.normals.push_back(v);
        }
      }
  };
  switch (type) {
    case CoxeterType::A:
      if (n < 2) throw domain_error("make_group: A(k) acting on R^k needs k >= 2; use B(1) for A1 on R^1");
      g.dim = n;
      roots_pm(n, false);
      for (int d = 1; d <= n; ++d) g.degrees.push_back(d);
      break;
    case CoxeterType::B:
      if (n < 1) throw domain_error("make_group: B(k) needs k >= 1");
      g.dim = n;
      roots_pm(n, true);
      for (int i = 0; i < n; ++i) g.normals.push_back(unit(n, i));
      for (int d = 1; d <= n; ++d) g.degrees.push_back(2 * d);
      break;
    case CoxeterType::D:
      if (n < 2) throw domain_error("make_group: D(k) needs k >= 2");
      g.dim = n;
      roots_pm(n, true);
      for (int d = 1; d < n; ++d) g.degrees.push_back(2 * d);
      g.degrees.push_back(n);
      break;
    case CoxeterType::I2:
      if (n < 2) throw domain_error("make_group: I2(m) needs m >= 2");
      g.dim = 2;
      for (int a = 0; a < n; ++a) {
        const Real th = kPi * a / n;
        g.normals.push_back({-std::sin(th), std::cos(th)});
      }
      g.degrees = {2, n};
      break;
  }
  return g;
}

/// Parses "A2", "B3", "D4", "I2(5)" or "I2_5"; "A1" means the rank-one group on R^1.
inline CoxeterGroup parse_group(const std::string& s) {
  auto bad = [&]() { return domain_error("unknown Coxeter group label '" + s + "'"); };
  if (s.size() < 2) throw bad();
  try {
    if (s.rfind("I2", 0) == 0) {
      std::string rest = s.substr(2);
      if (!rest.empty() && (rest.front() == '(' || rest.front() == '_')) rest = rest.substr(1);
      if (!rest.empty() && rest.back() == ')') rest.pop_back();
      std::size_t used = 0;
      const int m = std::stoi(rest, &used);
      if (used != rest.size()) throw bad();
      return make_group(CoxeterType::I2, m);
    }
    std::size_t used = 0;
    const int n = std::stoi(s.substr(1), &used);
    if (used != s.size() - 1) throw bad();
    switch (s[0]) {
      case 'A': return n == 1 ? make_group(CoxeterType::B, 1) : make_group(CoxeterType::A, n);
      case 'B': return make_group(CoxeterType::B, n);
      case 'D': return make_group(CoxeterType::D, n);
      default: throw bad();
    }
  } catch (const std::invalid_argument&) {
    throw bad();
  } catch (const std::out_of_range&) {
    throw bad();
  }
}

/// prod over mirrors H of |<t, n_H>|.
inline Real distance_product(const CoxeterGroup& g, std::span<const Real> t) {
  if (static_cast<int>(t.size()) != g.dim) throw domain_error("distance_product: dimension mismatch");
  Real p = 1;
  for (const auto& n : g.normals) {
    Real d = 0;
    for (int i = 0; i < g.dim; ++i) d += n[i] * t[i];
    p *= std::abs(d);
  }
  return p;
}

/// Reflection of t in the mirror with unit normal n.
inline std::vector<Real> reflect(std::span<const Real> t, const std::vector<Real>& n) {
  Real d = 0;
  for (std::size_t i = 0; i < t.size(); ++i) d += n[i] * t[i];
  std::vector<Real> r(t.begin(), t.end());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] -= 2 * d * n[i];
  return r;
}

}  // namespace selberg

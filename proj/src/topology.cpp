#include "hitchin/topology.hpp"

#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace hitchin {

int TwistedSurfaceComplex::last_puncture_monodromy() const {
  int m = 1;
  for (std::size_t i = 2 * gamma; i < loop_monodromy.size(); ++i) m *= loop_monodromy[i];
  return m;
}

TwistedSurfaceComplex build_complex(int gamma, int k, const ComplexOptions& opt) {
  if (gamma < 2) throw std::invalid_argument("genus must be at least 2");
  if (k < 1) throw std::invalid_argument("at least one puncture is required");
  if (opt.subdivisions < 1) throw std::invalid_argument("subdivisions must be positive");
  if (opt.twisted && k % 2 != 0)
    throw std::invalid_argument("twisted local system needs an even number of punctures");
  if (!opt.handles.empty() && static_cast<int>(opt.handles.size()) != 2 * gamma)
    throw std::invalid_argument("handle monodromy override needs 2 gamma entries");
  for (int m : opt.handles)
    if (m != 1 && m != -1) throw std::invalid_argument("monodromy must be +1 or -1");

  TwistedSurfaceComplex c;
  c.gamma = gamma;
  c.punctures = k;
  const int loops = 2 * gamma + k - 1;
  for (int i = 0; i < 2 * gamma; ++i) c.loop_monodromy.push_back(opt.handles.empty() ? 1 : opt.handles[i]);
  for (int i = 0; i < k - 1; ++i) c.loop_monodromy.push_back(opt.twisted ? -1 : 1);

  // Base vertex 0; each loop gets subdivisions - 1 private vertices, monodromy on its first edge.
  c.vertices = 1;
  for (int l = 0; l < loops; ++l) {
    int prev = 0;
    for (int s = 0; s < opt.subdivisions; ++s) {
      const int next = s + 1 == opt.subdivisions ? 0 : c.vertices++;
      c.edges.push_back({prev, next, s == 0 ? c.loop_monodromy[l] : 1});
      prev = next;
    }
  }
  return c;
}

std::vector<std::vector<long long>> coboundary(const TwistedSurfaceComplex& c) {
  std::vector<std::vector<long long>> d(c.edges.size(), std::vector<long long>(c.vertices, 0));
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const auto& ed = c.edges[e];
    d[e][ed.head] += ed.monodromy;
    d[e][ed.tail] -= 1;
  }
  return d;
}

int exact_rank(std::vector<std::vector<long long>> m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  auto mul = [](long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer elimination overflow");
    return r;
  };
  auto sub = [](long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer elimination overflow");
    return r;
  };
  int rank = 0;
  for (std::size_t col = 0; col < cols && rank < static_cast<int>(rows); ++col) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    const auto& p = m[rank];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (m[i][col] == 0) continue;
      const long long a = p[col], b = m[i][col];
      long long g = 0;
      for (std::size_t j = 0; j < cols; ++j) {
        m[i][j] = sub(mul(m[i][j], a), mul(p[j], b));
        g = std::gcd(g, std::llabs(m[i][j]));
      }
      if (g > 1)
        for (long long& v : m[i]) v /= g;
    }
    ++rank;
  }
  return rank;
}

CohomologyDims twisted_cohomology_dims(const TwistedSurfaceComplex& c) {
  const int r = exact_rank(coboundary(c));
  return {c.vertices - r, static_cast<int>(c.edges.size()) - r};
}

int torus_dimension(int gamma) { return twisted_cohomology_dims(build_complex(gamma, 4 * gamma - 4)).h1; }

void write_torus_csv(const std::vector<int>& gammas, std::ostream& out) {
  out << "gamma,k,h0,h1,expected\n";
  for (int g : gammas) {
    const CohomologyDims d = twisted_cohomology_dims(build_complex(g, 4 * g - 4));
    out << g << ',' << 4 * g - 4 << ',' << d.h0 << ',' << d.h1 << ',' << 6 * g - 6 << '\n';
  }
}

}  // namespace hitchin

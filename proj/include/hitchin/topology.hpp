#pragma once

#include <iosfwd>
#include <vector>

namespace hitchin {

/// Spine of a genus-gamma surface with k punctures: a wedge of 2 gamma + k - 1 circles
/// (a_1, b_1, ..., a_gamma, b_gamma, c_1, ..., c_{k-1}); the last puncture loop is the
/// product of the others. Each circle may be subdivided into several edges.
struct TwistedSurfaceComplex {
  struct Edge {
    int tail, head;
    int monodromy;  ///< +-1, transport from tail to head
  };
  int gamma = 0;
  int punctures = 0;
  int vertices = 0;
  std::vector<Edge> edges;
  std::vector<int> loop_monodromy;  ///< per generator, handles first

  int euler_characteristic() const { return vertices - static_cast<int>(edges.size()); }
  /// Monodromy of the last puncture loop (product over the puncture generators; handle commutators are trivial).
  int last_puncture_monodromy() const;
};

struct ComplexOptions {
  bool twisted = true;        ///< puncture loops -> -1; false gives the trivial local system
  std::vector<int> handles;   ///< optional override for the 2 gamma handle generators (default all +1)
  int subdivisions = 1;       ///< edges per circle
};

/// Throws std::invalid_argument for gamma < 2, k < 1, odd k in the twisted case (the product of the
/// puncture monodromies must be -1 for every puncture), or a malformed override.
TwistedSurfaceComplex build_complex(int gamma, int k, const ComplexOptions& opt = {});

/// Integer coboundary matrix delta: C^0 -> C^1, (delta x)_e = m_e x_head - x_tail.
std::vector<std::vector<long long>> coboundary(const TwistedSurfaceComplex& c);

/// Exact rank over Q by fraction-free elimination.
int exact_rank(std::vector<std::vector<long long>> m);

struct CohomologyDims {
  int h0 = 0;
  int h1 = 0;
};
CohomologyDims twisted_cohomology_dims(const TwistedSurfaceComplex& c);

/// Twisted h^1 for k = 4 gamma - 4.
int torus_dimension(int gamma);

/// CSV: gamma,k,h0,h1,expected (expected = 6 gamma - 6).
void write_torus_csv(const std::vector<int>& gammas, std::ostream& out);

}  // namespace hitchin

#include <doctest.h>

#include <random>
#include <sstream>

#include <Eigen/LU>

#include "hitchin/topology.hpp"

using namespace hitchin;

TEST_SUITE("topology") {
  TEST_CASE("twisted cohomology of small surfaces") {
    const CohomologyDims a = twisted_cohomology_dims(build_complex(2, 4));
    CHECK(a.h0 == 0);
    CHECK(a.h1 == 6);
    const CohomologyDims b = twisted_cohomology_dims(build_complex(3, 8));
    CHECK(b.h0 == 0);
    CHECK(b.h1 == 12);
  }

  TEST_CASE("torus dimension is 6 gamma - 6") {
    for (int g = 2; g <= 20; ++g) CHECK(torus_dimension(g) == 6 * g - 6);
  }

  TEST_CASE("trivial local system has a constant section") {
    ComplexOptions opt;
    opt.twisted = false;
    const CohomologyDims d = twisted_cohomology_dims(build_complex(2, 4, opt));
    CHECK(d.h0 == 1);
    CHECK(d.h1 == 7);
  }

  TEST_CASE("Euler characteristic h0 - h1 under overrides and subdivision") {
    for (int sub : {1, 2, 3}) {
      ComplexOptions opt;
      opt.subdivisions = sub;
      opt.handles = {-1, 1, 1, -1};
      const TwistedSurfaceComplex c = build_complex(2, 6, opt);
      CHECK(c.last_puncture_monodromy() == -1);
      const CohomologyDims d = twisted_cohomology_dims(c);
      CHECK(d.h0 - d.h1 == c.euler_characteristic());
      CHECK(c.euler_characteristic() == 2 - 2 * 2 - 6);
    }
  }

  TEST_CASE("invalid surfaces are rejected") {
    CHECK_THROWS_AS(build_complex(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_complex(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_complex(1, 4), std::invalid_argument);
    ComplexOptions opt;
    opt.handles = {1, 1};
    CHECK_THROWS_AS(build_complex(2, 4, opt), std::invalid_argument);
  }

  TEST_CASE("exact rank agrees with floating LU on small integer matrices") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
      const int rows = 1 + trial % 6, cols = 1 + (trial / 6) % 6;
      std::vector<std::vector<long long>> m(rows, std::vector<long long>(cols));
      Eigen::MatrixXd e(rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) e(i, j) = static_cast<double>(m[i][j] = trial % 3 == 0 && j == 0 ? 0 : d(rng));
      if (rows > 1) {  // force some dependence
        m[rows - 1] = m[0];
        e.row(rows - 1) = e.row(0);
      }
      CHECK(exact_rank(m) == Eigen::FullPivLU<Eigen::MatrixXd>(e).rank());
    }
  }

  TEST_CASE("torus CSV") {
    std::ostringstream out;
    write_torus_csv({2, 3}, out);
    CHECK(out.str() == "gamma,k,h0,h1,expected\n2,4,0,6,6\n3,8,0,12,12\n");
  }
}

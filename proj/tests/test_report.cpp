#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "hitchin/report.hpp"

using namespace hitchin::report;

TEST_SUITE("report") {
  TEST_CASE("fmt17 round-trips doubles") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-30, 30);
    for (int i = 0; i < 1000; ++i) {
      const double x = std::exp(u(rng)) * (i % 2 ? -1 : 1);
      CHECK(std::strtod(fmt17(x).c_str(), nullptr) == x);
    }
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(fmt17(-INFINITY) == "-inf");
  }

  TEST_CASE("dump writes 17 digits and keeps key order") {
    Json j;
    j["zeta"] = 0.1;
    j["alpha"] = Json::array({1.5, 2, NAN});
    j["name"] = "x";
    const std::string s = dump(j);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("null") != std::string::npos);
    CHECK(s.find("zeta") < s.find("alpha"));
    CHECK(s.back() == '\n');
    const Json back = Json::parse(s);
    CHECK(back["zeta"].get<double>() == 0.1);
    CHECK(back["alpha"][1].get<int>() == 2);
    CHECK(back["alpha"][2].is_null());
    CHECK(dump(j, -1).find('\n') == dump(j, -1).size() - 1);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include "noncl/checks.hpp"

using namespace noncl;

TEST_CASE("check suites pass") {
  for (const auto& [suite, results] :
       {std::pair{"pure", check_pure(7)}, {"mixed", check_mixed(7)}, {"roof", check_roof(7)}}) {
    for (const CheckResult& r : results) {
      INFO(suite << " / " << r.name << ": " << r.detail);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("check suites are seed-stable") {
  auto a = check_roof(42);
  auto b = check_roof(42);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].detail == b[i].detail);
  }
}

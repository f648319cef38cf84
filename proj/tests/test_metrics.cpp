#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ferrysim/metrics.hpp"

using namespace ferrysim;

TEST_CASE("availability ratio") {
  CHECK(availability(80, 100) == doctest::Approx(0.8));
  CHECK(availability(0, 10) == doctest::Approx(0.0));
  CHECK(availability(10, 10) == doctest::Approx(1.0));
  CHECK_THROWS_AS(availability(1, 0), std::invalid_argument);
}

TEST_CASE("jaro_winkler on token sequences") {
  SUBCASE("identical sequences are fully similar") {
    const std::vector<ContentId> seq{5, 9, 1, 4};
    CHECK(jaro_winkler(seq, seq) == doctest::Approx(1.0));
  }
  SUBCASE("disjoint sequences share nothing") {
    const std::vector<ContentId> a{1, 2, 3};
    const std::vector<ContentId> b{7, 8, 9};
    CHECK(jaro_winkler(a, b) == doctest::Approx(0.0));
  }
  SUBCASE("golden case MARTHA vs MARHTA") {
    // Tokens M,A,R,T,H mapped to 1,2,3,4,5.
    const std::vector<ContentId> martha{1, 2, 3, 4, 5, 2};
    const std::vector<ContentId> marhta{1, 2, 3, 5, 4, 2};
    CHECK(std::abs(jaro_winkler(martha, marhta) - 0.961) < 0.001);
  }
  SUBCASE("symmetry") {
    const std::vector<ContentId> a{1, 2, 3, 4, 9};
    const std::vector<ContentId> b{2, 1, 3, 7, 4};
    CHECK(jaro_winkler(a, b) == doctest::Approx(jaro_winkler(b, a)));
  }
  SUBCASE("invariant under a consistent relabeling") {
    const std::vector<ContentId> a{1, 2, 3, 4, 5, 6};
    const std::vector<ContentId> b{2, 1, 3, 6, 5, 4};
    // Relabel id -> id + 100 on both sides.
    std::vector<ContentId> a2, b2;
    for (ContentId x : a) a2.push_back(x + 100);
    for (ContentId x : b) b2.push_back(x + 100);
    CHECK(jaro_winkler(a, b) == doctest::Approx(jaro_winkler(a2, b2)));
  }
  SUBCASE("empty-sequence conventions") {
    const std::vector<ContentId> a{1};
    const std::vector<ContentId> empty;
    CHECK(jaro_winkler(a, empty) == doctest::Approx(0.0));
    CHECK(jaro_winkler(empty, empty) == doctest::Approx(1.0));
  }
  SUBCASE("equals one only for identical sequences") {
    const std::vector<ContentId> a{1, 2, 3, 4};
    const std::vector<ContentId> b{1, 2, 4, 3};
    CHECK(jaro_winkler(a, b) < 1.0);
    CHECK(jaro_winkler(a, b) > 0.0);
  }
}

TEST_CASE("epoch_access_delay") {
  SUBCASE("all local hits") {
    std::vector<std::pair<double, Outcome>> served{
        {0.0, Outcome::LocalHit}, {0.0, Outcome::LocalHit}};
    CHECK(epoch_access_delay(served) == doctest::Approx(0.0));
  }
  SUBCASE("mixed ferry serve and download") {
    std::vector<std::pair<double, Outcome>> served{
        {120.0, Outcome::FerryServe}, {300.0, Outcome::Download}};
    CHECK(epoch_access_delay(served) == doctest::Approx(210.0));
  }
  SUBCASE("all expiries sit at the TAD ceiling") {
    std::vector<std::pair<double, Outcome>> served(
        5, {300.0, Outcome::Download});
    CHECK(epoch_access_delay(served) == doctest::Approx(300.0));
  }
  SUBCASE("an empty epoch is rejected") {
    std::vector<std::pair<double, Outcome>> served;
    CHECK_THROWS_AS(epoch_access_delay(served), std::invalid_argument);
  }
}

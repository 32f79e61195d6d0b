#include <doctest.h>

#include <sstream>

#include "bsvi/extended_real.hpp"

using bsvi::ExtReal;

TEST_CASE("extended real ordering") {
    CHECK(ExtReal::neg_inf() < ExtReal(-1e308));
    CHECK(ExtReal(1e308) < ExtReal::pos_inf());
    CHECK(ExtReal::neg_inf() < ExtReal::pos_inf());
    CHECK(ExtReal(1.0) < ExtReal(2.0));
    CHECK(ExtReal(2.0) <= ExtReal(2.0));
    CHECK(ExtReal::pos_inf() == ExtReal::pos_inf());
    CHECK_FALSE(ExtReal::pos_inf() < ExtReal::pos_inf());
}

TEST_CASE("extended real arithmetic") {
    CHECK((ExtReal(2.0) + ExtReal(3.0)).value() == 5.0);
    CHECK((ExtReal::pos_inf() + ExtReal(7.0)).is_pos_inf());
    CHECK((ExtReal(7.0) - ExtReal::pos_inf()).is_neg_inf());
    CHECK_THROWS_AS(ExtReal::pos_inf() - ExtReal::pos_inf(), bsvi::Error);
    CHECK_THROWS_AS(ExtReal::pos_inf() + ExtReal::neg_inf(), bsvi::Error);
    CHECK_THROWS_AS(ExtReal::pos_inf().value(), bsvi::Error);
    CHECK(ExtReal::pos_inf().as_double() > 1e308);
    CHECK((-ExtReal::pos_inf()).is_neg_inf());
}

TEST_CASE("extended real printing") {
    std::ostringstream os;
    os << ExtReal::pos_inf() << ' ' << ExtReal::neg_inf() << ' ' << ExtReal(1.5);
    CHECK(os.str() == "+inf -inf 1.5");
}

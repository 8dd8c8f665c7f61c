#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "totient/diagnostics.hpp"
#include "totient/rational.hpp"

using namespace totient;
using boost::multiprecision::cpp_rational;

namespace {

cpp_rational big(const Rational& r) {
    return cpp_rational(boost::multiprecision::cpp_int(static_cast<long long>(r.num())),
                        boost::multiprecision::cpp_int(static_cast<long long>(r.den())));
}

}  // namespace

TEST_CASE("normal form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -2).num() == -1);
    CHECK(Rational(1, -2).den() == 2);
    CHECK(Rational(0, 5) == Rational(0));
    CHECK(Rational(0, 5).den() == 1);
    CHECK(Rational(6, 4).to_string() == "3/2");
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic against arbitrary precision") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long long> num(-100000, 100000), den(1, 100000);
    for (int i = 0; i < 5000; ++i) {
        const Rational a(num(rng), den(rng)), b(num(rng), den(rng));
        REQUIRE(big(a + b) == big(a) + big(b));
        REQUIRE(big(a - b) == big(a) - big(b));
        REQUIRE(big(a * b) == big(a) * big(b));
        REQUIRE(((a < b) == (big(a) < big(b))));
        REQUIRE(((a == b) == (big(a) == big(b))));
    }
}

TEST_CASE("overflow throws") {
    const i128 huge = static_cast<i128>(1) << 120;
    CHECK_THROWS_AS(Rational(huge) * Rational(huge), std::overflow_error);
    const i128 top = ~(static_cast<u128>(1) << 127);
    CHECK_THROWS_AS(Rational(top) + Rational(1), std::overflow_error);
    CHECK_THROWS_AS(Rational(1, top) + Rational(1, top - 1), std::overflow_error);
}

TEST_CASE("threshold comparisons break ties toward not flagging") {
    CHECK(above_threshold(Rational(1, 2), 0.25));
    CHECK_FALSE(above_threshold(Rational(1, 4), 0.25));
    CHECK_FALSE(below_threshold(Rational(1, 4), 0.25));
    CHECK(below_threshold(Rational(1, 5), 0.25));
    CHECK_FALSE(above_threshold(Rational(1, 3), 1.0 / 3.0));
    CHECK_FALSE(below_threshold(Rational(1, 3), 1.0 / 3.0));
    CHECK(outside_interval(1, 1.5, 2.5));
    CHECK_FALSE(outside_interval(2, 1.5, 2.5));
    CHECK(outside_interval(3, 1.5, 2.5));
}

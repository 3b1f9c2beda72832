#include <catch2/catch_amalgamated.hpp>

#include "impob/descriptor.hpp"
#include "impob/selftest.hpp"

using namespace impob;

TEST_CASE("validate enforces shapes") {
    CHECK_THROWS_AS(DescriptorSystem::validate(RationalMatrix(2, 3), RationalMatrix(2, 3),
                                               RationalMatrix(1, 3)),
                    dimension_mismatch);
    CHECK_THROWS_AS(DescriptorSystem::validate(RationalMatrix::identity(2), RationalMatrix(3, 3),
                                               RationalMatrix(1, 2)),
                    dimension_mismatch);
    CHECK_THROWS_AS(DescriptorSystem::validate(RationalMatrix::identity(2),
                                               RationalMatrix::identity(2), RationalMatrix(1, 3)),
                    dimension_mismatch);
}

TEST_CASE("validate rejects irregular pencils") {
    CHECK_THROWS_AS(DescriptorSystem::validate(RationalMatrix(1, 1), RationalMatrix(1, 1),
                                               RationalMatrix::from_rows({{1}})),
                    irregular_pencil);
    // Rank-1 E and A sharing a kernel in a way that kills every minor.
    const RationalMatrix e = RationalMatrix::from_rows({{1, 0}, {0, 0}});
    const RationalMatrix a = RationalMatrix::from_rows({{1, 0}, {0, 0}});
    CHECK_THROWS_AS(DescriptorSystem::validate(e, a, RationalMatrix(0, 2)), irregular_pencil);
}

TEST_CASE("validated system exposes cached invariants") {
    const DescriptorSystem sys = selftest::sample_n2(false);
    CHECK(sys.n() == 2);
    CHECK(sys.m() == 1);
    CHECK(sys.rank_E() == 1);
    CHECK_FALSE(sys.is_standard());
    CHECK(sys.det_pencil() == RationalPolynomial(Rational(1)));

    const DescriptorSystem std_sys = DescriptorSystem::validate(
        RationalMatrix::identity(2), RationalMatrix::from_rows({{0, 1}, {-2, -3}}),
        RationalMatrix::from_rows({{1, 0}}));
    CHECK(std_sys.is_standard());
    CHECK(std_sys.det_pencil().degree() == 2);
}

TEST_CASE("degenerate dimensions are accepted") {
    // n = 0: empty pencil, determinant 1, trivially standard.
    const DescriptorSystem empty =
        DescriptorSystem::validate(RationalMatrix(), RationalMatrix(), RationalMatrix(2, 0));
    CHECK(empty.n() == 0);
    CHECK(empty.m() == 2);
    CHECK(empty.is_standard());
    CHECK(empty.det_pencil() == RationalPolynomial(Rational(1)));

    // m = 0: no outputs at all.
    const DescriptorSystem blind = DescriptorSystem::validate(
        RationalMatrix::identity(2), RationalMatrix::identity(2), RationalMatrix(0, 2));
    CHECK(blind.m() == 0);
}

#include <doctest.h>

#include <cmath>

#include "spectra/dimension.hpp"

using namespace spectra;

namespace {

CantorModel ratio4_model() {
    RateBounds rb;
    rb.lambda1u = rb.lambda2u = rb.lambda1s = rb.lambda2s = Rational(4);
    std::vector<std::vector<std::optional<Branch>>> br(2, std::vector<std::optional<Branch>>(2));
    Branch b0{AffineBranch{Rational(0), Rational(1, 4)}, +1};
    Branch b1{AffineBranch{Rational(3, 4), Rational(1, 4)}, +1};
    br[0][0] = br[0][1] = b0;
    br[1][0] = br[1][1] = b1;
    return CantorModel::branches(TransitionSet::full(2), std::move(br), rb);
}

BlockGeometry exact_geometry(const std::vector<Rational>& sizes, const Rational& c1) {
    BlockGeometry g;
    // geometry-only tests: block words are placeholders over a full shift
    for (size_t i = 0; i < sizes.size(); ++i) {
        g.blocks.blocks.push_back(Word{static_cast<int>(i % 2)});
        g.sizes.push_back(Enclosure(sizes[i]));
    }
    g.distortion = Enclosure(c1);
    return g;
}

}  // namespace

TEST_CASE("moran bounds: exact self-similar cases") {
    const Rational tol(1, 1 << 24);
    // two blocks of size 1/4, c1 = 0 -> s = 1/2 exactly
    auto mb = moran_bounds(exact_geometry({Rational(1, 4), Rational(1, 4)}, Rational(0)), tol);
    CHECK(mb.lower <= Rational(1, 2));
    CHECK(mb.upper >= Rational(1, 2));
    CHECK(mb.upper - mb.lower <= 2 * tol);
    // three blocks of size 1/3 -> s = 1
    mb = moran_bounds(
        exact_geometry({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, Rational(0)), tol);
    CHECK(mb.lower <= 1);
    CHECK(mb.upper >= 1);
    CHECK(mb.upper - mb.lower <= 2 * tol);
    // full-shift words of length n with ratio rho: ln(#blocks)/(n ln (1/rho))
    // e.g. 8 blocks of size (1/4)^3 -> s = ln 8 / (3 ln 4) = 1/2
    std::vector<Rational> sizes(8, pow_int(Rational(1, 4), 3));
    mb = moran_bounds(exact_geometry(sizes, Rational(0)), tol);
    CHECK(mb.lower <= Rational(1, 2));
    CHECK(mb.upper >= Rational(1, 2));
    CHECK(mb.upper - mb.lower <= 2 * tol);
}

TEST_CASE("moran bounds: monotone in blocks, widened by distortion") {
    const Rational tol(1, 1 << 20);
    auto g1 = exact_geometry({Rational(1, 4), Rational(1, 8)}, Rational(1, 4));
    auto g2 = exact_geometry({Rational(1, 4), Rational(1, 8), Rational(1, 16)}, Rational(1, 4));
    auto b1 = moran_bounds(g1, tol);
    auto b2 = moran_bounds(g2, tol);
    CHECK(b2.lower >= b1.lower);
    // doubling c1 widens the bracket
    auto wide = moran_bounds(exact_geometry({Rational(1, 4), Rational(1, 8)}, Rational(1, 2)), tol);
    CHECK(wide.upper - wide.lower > b1.upper - b1.lower);
    // c1 = 0 with exact equal sizes collapses to a point (up to tol)
    auto tight = moran_bounds(exact_geometry({Rational(1, 5), Rational(1, 5)}, Rational(0)), tol);
    CHECK(tight.upper - tight.lower <= 2 * tol);
    CHECK(b1.lower <= b1.upper);
}

TEST_CASE("moran equation residual at the returned roots") {
    const Rational tol(1, 1 << 20);
    std::vector<Rational> sizes{Rational(1, 4), Rational(1, 7), Rational(2, 11)};
    auto g = exact_geometry(sizes, Rational(0));
    auto mb = moran_bounds(g, tol);
    auto residual = [&](const Rational& s) {
        double sum = 0;
        for (const auto& sz : sizes) sum += std::pow(sz.get_d(), s.get_d());
        return std::abs(sum - 1.0);
    };
    // |d/ds sum| <= sum |ln size| size^s <= 2.5 here; residual <= bound * tol
    CHECK(residual(mb.lower) <= 2.5 * tol.get_d() + 1e-12);
    CHECK(residual(mb.upper) <= 2.5 * tol.get_d() + 1e-12);
}

TEST_CASE("moran degenerate sizes rejected") {
    const Rational tol(1, 1024);
    CHECK_THROWS_AS(moran_bounds(exact_geometry({Rational(1)}, Rational(0)), tol),
                    std::invalid_argument);
    CHECK_THROWS_AS(moran_bounds(exact_geometry({Rational(0)}, Rational(0)), tol),
                    std::invalid_argument);
}

TEST_CASE("pressure dimension: single block is a point") {
    auto model = CantorModel::classical(2);
    auto blocks = build_block_alphabet({Word{0}}, model.transitions());
    Enclosure e = pressure_dimension_cf(blocks, model, 4, Rational(1, 1 << 16));
    CHECK(e.contains(Rational(0)));
    CHECK(e.hi < Rational(1, 100));
}

TEST_CASE("pressure dimension: digit-{1,2} Gauss-Cantor set") {
    auto model = CantorModel::classical(2);
    auto blocks = build_block_alphabet({Word{0}, Word{1}}, model.transitions());
    const Rational tol(1, 1 << 16);
    Enclosure e6 = pressure_dimension_cf(blocks, model, 6, tol);
    Enclosure e8 = pressure_dimension_cf(blocks, model, 8, tol);
    // known value 0.5312805062772051...
    const Rational dim_lo = parse_rational("53128050/100000000");
    const Rational dim_hi = parse_rational("53128051/100000000");
    CHECK(e6.lo <= dim_hi);
    CHECK(e6.hi >= dim_lo);
    CHECK(e6.lo >= Rational(1, 2));
    CHECK(e6.hi <= Rational(14, 25));  // within [0.50, 0.56]
    // order-8 enclosure nests inside order-6 and contains the true value
    CHECK(e6.contains(e8));
    CHECK(e8.lo <= dim_hi);
    CHECK(e8.hi >= dim_lo);

    // nesting diagnostic: order k+2 sits inside a 2x inflation of order k
    Enclosure e4 = pressure_dimension_cf(blocks, model, 4, tol);
    Rational pad = e4.width() / 2;
    Enclosure inflated(e4.lo - pad, e4.hi + pad);
    CHECK(inflated.contains(e6));

    // three digits: strictly above the two-digit result
    auto blocks3 = build_block_alphabet({Word{0}, Word{1}, Word{2}},
                                        CantorModel::classical(3).transitions());
    Enclosure e3 = pressure_dimension_cf(blocks3, CantorModel::classical(3), 6, tol);
    CHECK(e3.lo > e6.hi);

    // moran bounds with a calibrated c1 bracket the pressure result
    Enclosure c1 = distortion_constant(model, 6);
    BlockGeometry g = BlockGeometry::from_blocks(blocks, model, Enclosure(c1.hi * Rational(3, 2)));
    auto mb = moran_bounds(g, tol);
    CHECK(mb.lower <= e6.lo);
    CHECK(mb.upper >= e6.hi);

    auto affine = ratio4_model();
    CHECK_THROWS_AS(pressure_dimension_cf(blocks, affine, 4, Rational(1, 1024)),
                    std::domain_error);
}

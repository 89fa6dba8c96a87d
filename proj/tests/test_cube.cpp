#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hcube/cube.hpp"
#include "hcube/random.hpp"

using namespace hcube;

namespace {

// Independent oracle: quadratic-time Fourier sum, no butterflies.
std::vector<double> naive_transform(const CubeFunction& f) {
    const std::size_t size = f.values.size();
    std::vector<double> out(size, 0.0);
    for (std::size_t mask = 0; mask < size; ++mask) {
        double acc = 0;
        for (std::size_t x = 0; x < size; ++x)
            acc += f.values[x] * ((popcount(mask & x) & 1) ? -1.0 : 1.0);
        out[mask] = acc / static_cast<double>(size);
    }
    return out;
}

CubeFunction and_indicator2() { return CubeFunction(2, {0, 0, 0, 1}); }

}  // namespace

TEST_CASE("wht_forward matches hand examples", "[cube]") {
    SECTION("n=1 single character") {
        const Spectrum s = wht_forward(CubeFunction(1, {1, -1}));
        CHECK(s.coeffs[0] == 0.0);
        CHECK(s.coeffs[1] == 1.0);
    }
    SECTION("AND indicator at n=2") {
        const Spectrum s = wht_forward(and_indicator2());
        CHECK(s.coeffs[0] == Catch::Approx(0.25));
        CHECK(s.coeffs[1] == Catch::Approx(-0.25));
        CHECK(s.coeffs[2] == Catch::Approx(-0.25));
        CHECK(s.coeffs[3] == Catch::Approx(0.25));
    }
    SECTION("constants concentrate at the empty set") {
        const Spectrum s = wht_forward(CubeFunction::constant(3, 2.5));
        CHECK(s.coeffs[0] == 2.5);
        for (std::size_t m = 1; m < s.size(); ++m) CHECK(s.coeffs[m] == 0.0);
    }
}

TEST_CASE("wht_forward agrees with the naive Fourier sum", "[cube]") {
    for (int n = 1; n <= 8; ++n) {
        const CubeFunction f = random_uniform(n, 1000 + n);
        const Spectrum s = wht_forward(f);
        const auto expected = naive_transform(f);
        for (std::size_t m = 0; m < s.size(); ++m)
            REQUIRE(s.coeffs[m] == Catch::Approx(expected[m]).margin(1e-12));
    }
}

TEST_CASE("wht_inverse examples and roundtrip", "[cube]") {
    SECTION("pure constant spectrum") {
        Spectrum s(2, {3, 0, 0, 0});
        const CubeFunction f = wht_inverse(s);
        for (double v : f.values) CHECK(v == 3.0);
    }
    SECTION("AND spectrum inverts to the table") {
        const CubeFunction f = wht_inverse(Spectrum(2, {0.25, -0.25, -0.25, 0.25}));
        const std::vector<double> want{0, 0, 0, 1};
        for (int i = 0; i < 4; ++i) CHECK(f.values[i] == Catch::Approx(want[i]).margin(1e-15));
    }
    SECTION("zero spectrum") {
        const CubeFunction f = wht_inverse(Spectrum(3, std::vector<double>(8, 0.0)));
        for (double v : f.values) CHECK(v == 0.0);
    }
    SECTION("roundtrip within 1e-12 * max|f| for n <= 16") {
        for (int n : {1, 4, 9, 13, 16}) {
            const CubeFunction f = random_uniform(n, 77 + n);
            const CubeFunction back = wht_inverse(wht_forward(f));
            double maxf = inf_norm(f), err = 0;
            for (std::size_t i = 0; i < f.size(); ++i)
                err = std::max(err, std::abs(f.values[i] - back.values[i]));
            REQUIRE(err <= 1e-12 * maxf);
        }
    }
}

TEST_CASE("Parseval holds after the roundtrip", "[cube]") {
    for (int n : {2, 6, 10, 14}) {
        const CubeFunction f = random_uniform(n, 5 + n);
        const Spectrum s = wht_forward(f);
        double lhs = 0;
        for (double c : s.coeffs) lhs += c * c;
        double rhs = 0;
        for (double v : f.values) rhs += v * v;
        rhs /= static_cast<double>(f.size());
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, rhs));
    }
}

TEST_CASE("degree detection", "[cube]") {
    CHECK(degree(wht_forward(and_indicator2())) == 2);
    CHECK(degree(wht_forward(CubeFunction::constant(4, -7.0))) == 0);

    // f(x) = (1/n)(-1)^{x_1+...+x_n}: degree n despite tiny range
    const int n = 6;
    CubeFunction f = CubeFunction::character(n, (1u << n) - 1);
    for (double& v : f.values) v /= n;
    CHECK(degree(wht_forward(f)) == n);
}

TEST_CASE("truncate splits the spectrum exactly", "[cube]") {
    SECTION("AND at n=2, d=1") {
        auto [low, tail] = truncate(wht_forward(and_indicator2()), 1);
        const CubeFunction flow = wht_inverse(low);
        const std::vector<double> want{-0.25, 0.25, 0.25, 0.75};
        for (int i = 0; i < 4; ++i) CHECK(flow.values[i] == Catch::Approx(want[i]));
        CHECK(tail_inf_norm(and_indicator2(), 1) == Catch::Approx(0.25));
    }
    SECTION("d = n leaves no tail, d = 0 leaves the mean") {
        const CubeFunction f = random_uniform(5, 99);
        auto [low_n, tail_n] = truncate(wht_forward(f), 5);
        for (double c : tail_n.coeffs) CHECK(c == 0.0);
        auto [low_0, tail_0] = truncate(wht_forward(f), 0);
        CHECK(low_0.coeffs[0] == wht_forward(f).coeffs[0]);
        for (std::size_t m = 1; m < low_0.size(); ++m) CHECK(low_0.coeffs[m] == 0.0);
        // low + tail = s exactly
        const Spectrum s = wht_forward(f);
        for (std::size_t m = 0; m < s.size(); ++m)
            CHECK(low_0.coeffs[m] + tail_0.coeffs[m] == s.coeffs[m]);
    }
}

TEST_CASE("sensitivity examples", "[cube]") {
    SECTION("scaled parity has sensitivity 2") {
        const int n = 5;
        CubeFunction f = CubeFunction::character(n, (1u << n) - 1);
        for (double& v : f.values) v /= n;
        CHECK(sensitivity(f).value == Catch::Approx(2.0));
    }
    SECTION("AND indicator: s=2 attained at x=11") {
        const auto rep = sensitivity(and_indicator2());
        CHECK(rep.value == 2.0);
        CHECK(rep.argmax_point == 3);
    }
    SECTION("constants have zero sensitivity") {
        CHECK(sensitivity(CubeFunction::constant(6, 4.2)).value == 0.0);
    }
}

TEST_CASE("sensitivity invariances and Laplacian comparison", "[cube]") {
    for (int n : {3, 5, 8}) {
        const CubeFunction f = random_uniform(n, 123 + n);
        const double s = sensitivity(f).value;

        // translation f(x ^ x*) and global sign flip preserve s(f)
        const std::size_t shift = (std::size_t{1} << n) - 2;
        std::vector<double> tr(f.size()), neg(f.size());
        for (std::size_t x = 0; x < f.size(); ++x) {
            tr[x] = f.values[x ^ shift];
            neg[x] = -f.values[x];
        }
        CHECK(sensitivity(CubeFunction(n, tr)).value == s);
        CHECK(sensitivity(CubeFunction(n, neg)).value == s);

        // s(f) >= max_x |Delta f(x)| by the triangle inequality
        CHECK(s >= inf_norm(laplacian(f)) - 1e-12);
    }
}

TEST_CASE("laplacian examples and eigen-identity", "[cube]") {
    SECTION("AND at point 11") {
        CHECK(laplacian(and_indicator2()).values[3] == 2.0);
    }
    SECTION("constants vanish") {
        const CubeFunction lf = laplacian(CubeFunction::constant(4, 9.0));
        for (double v : lf.values) CHECK(v == 0.0);
    }
    SECTION("characters are eigenfunctions, exactly") {
        for (int n : {1, 3, 6}) {
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                const CubeFunction w = CubeFunction::character(n, mask);
                const CubeFunction lw = laplacian(w);
                const double eig = 2.0 * popcount(mask);
                for (std::size_t x = 0; x < w.size(); ++x)
                    REQUIRE(lw.values[x] == eig * w.values[x]);
            }
        }
    }
}

TEST_CASE("tail_inf_norm examples", "[cube]") {
    CHECK(tail_inf_norm(and_indicator2(), 1) == Catch::Approx(0.25));
    CHECK(tail_inf_norm(and_indicator2(), 2) == 0.0);
    const int n = 7;
    const CubeFunction parity = CubeFunction::character(n, (1u << n) - 1);
    CHECK(tail_inf_norm(parity, n - 1) == Catch::Approx(1.0));
}

TEST_CASE("table validation", "[cube]") {
    CHECK_THROWS_AS(CubeFunction(2, {1, 2, 3}), validation_error);
    CHECK_THROWS_AS(CubeFunction(0, {1}), validation_error);
    CHECK_THROWS_AS(CubeFunction(27, {}), validation_error);
    std::vector<double> bad{0, std::nan(""), 0, 0};
    CHECK_THROWS_AS(CubeFunction(2, bad), validation_error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vlc/fft.hpp"

using namespace vlc;

namespace {
const double pi = std::acos(-1.0);
}

TEST_CASE("power of two check")
{
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(1024));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(12));
}

TEST_CASE("impulse transforms to constant spectrum")
{
    std::vector<cplx> x(8, cplx{0.0, 0.0});
    x[0] = 1.0;
    const auto y = fft(x);
    for (const cplx& v : y) CHECK(std::abs(v - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("single tone")
{
    const std::size_t n = 16;
    std::vector<cplx> x(n, cplx{0.0, 0.0});
    x[3] = 1.0;
    auto t = ifft_unnormalized(x);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx expect = std::polar(1.0, 2.0 * pi * 3.0 * static_cast<double>(i) / n);
        CHECK(std::abs(t[i] - expect) < 1e-12);
    }
}

TEST_CASE("forward-inverse round trip and Parseval")
{
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    const std::size_t n = 512;
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx{g(rng), g(rng)};

    auto y = fft(x);
    auto back = ifft_unnormalized(y);
    double p_time = 0.0, p_freq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        back[i] /= static_cast<double>(n);
        CHECK(std::abs(back[i] - x[i]) < 1e-10);
        p_time += std::norm(x[i]);
        p_freq += std::norm(y[i]);
    }
    CHECK(p_freq == doctest::Approx(p_time * n).epsilon(1e-12));
}

TEST_CASE("matches direct DFT on random input")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    const std::size_t n = 64;
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx{g(rng), g(rng)};
    const auto y = fft(x);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            acc += x[i] * std::polar(1.0, -2.0 * pi * static_cast<double>(k * i) / n);
        CHECK(std::abs(y[k] - acc) < 1e-9);
    }
}

TEST_CASE("non power of two rejected")
{
    std::vector<cplx> x(12, cplx{0.0, 0.0});
    CHECK_THROWS(fft_inplace(x, false));
}

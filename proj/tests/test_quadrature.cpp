#include "bergman/fft.hpp"
#include "bergman/quadrature.hpp"

#include <doctest.h>

using namespace bergman;

TEST_SUITE("quadrature")
{
    TEST_CASE("gauss-legendre integrates monomials exactly")
    {
        PrecisionScope ps(256);
        const auto& g = gauss_legendre<Real>(20);
        for (int k = 0; k < 40; ++k) {
            Real s(0);
            for (std::size_t i = 0; i < g.size(); ++i)
                s += g.weights[i] * pow(g.nodes[i], k);
            CHECK(abs(s - Real(1) / (k + 1)) < Real("1e-70"));
        }
    }

    TEST_CASE("left jacobi weight absorbs t^a")
    {
        PrecisionScope ps(256);
        Real a = Real(-1) / 3;
        const auto& g = gauss_jacobi_left<Real>(16, a);
        for (int k = 0; k < 32; ++k) {
            Real s(0);
            for (std::size_t i = 0; i < g.size(); ++i)
                s += g.weights[i] * pow(g.nodes[i], k);
            CHECK(abs(s - 1 / (a + k + 1)) < Real("1e-70"));
        }
    }

    TEST_CASE("double rules match the high precision ones")
    {
        PrecisionScope ps(256);
        const auto& gd = gauss_legendre<double>(12);
        const auto& gr = gauss_legendre<Real>(12);
        for (std::size_t i = 0; i < gd.size(); ++i) {
            CHECK(gd.nodes[i] == doctest::Approx(gr.nodes[i].convert_to<double>()).epsilon(1e-14));
            CHECK(gd.weights[i] == doctest::Approx(gr.weights[i].convert_to<double>()).epsilon(1e-14));
        }
    }

    TEST_CASE("fft agrees with the direct sum")
    {
        PrecisionScope ps(192);
        const int K = 32;
        std::vector<Complex> x(K);
        for (int j = 0; j < K; ++j)
            x[j] = Complex(Real(j * j % 7) / 3, Real(j % 5) - 2);
        std::vector<Complex> X = x;
        fft(X);
        for (int m = 0; m < K; ++m) {
            Complex s(0);
            for (int j = 0; j < K; ++j)
                s += x[j] * polar_unit(-2 * pi_value() * Real(j * m % K) / K);
            CHECK(cabs(s - X[m]) < Real("1e-50"));
        }
        fft(X, true);
        for (int j = 0; j < K; ++j)
            CHECK(cabs(X[j] / Real(K) - x[j]) < Real("1e-50"));
        CHECK(next_pow2(1) == 1);
        CHECK(next_pow2(33) == 64);
        CHECK(next_pow2(64) == 64);
    }
}

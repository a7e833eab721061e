#include "bergman/moments.hpp"
#include "bergman/quadrature.hpp"

#include <doctest.h>

using namespace bergman;

namespace {

Complex zjzk(const Complex& z, int j, int k) { return std::pow(z, j) * std::pow(std::conj(z), k); }

// Cartesian area quadrature: x = a sin s, y = b cos(s) u.
Complex ellipse_area_moment(const Real& rho, int j, int k)
{
    Real a = (rho + 1 / rho) / 2, b = (rho - 1 / rho) / 2;
    const auto& gs = gauss_legendre<Real>(60);
    const auto& gu = gauss_legendre<Real>(12);
    Real h = pi_value();
    Complex sum(0);
    for (std::size_t i = 0; i < gs.size(); ++i) {
        Real s = -h / 2 + h * gs.nodes[i];
        Real c = cos(s);
        for (std::size_t m = 0; m < gu.size(); ++m) {
            Real u = 2 * gu.nodes[m] - 1;
            Complex z(a * sin(s), b * c * u);
            sum += zjzk(z, j, k) * (gs.weights[i] * h * gu.weights[m] * 2 * a * b * c * c);
        }
    }
    return sum / pi_value();
}

// Square |x| + |y| <= 1 over two x-halves.
Complex square_area_moment(int j, int k)
{
    const auto& g = gauss_legendre<Real>(12);
    Complex sum(0);
    for (int side : {-1, 1})
        for (std::size_t i = 0; i < g.size(); ++i) {
            Real x = Real(side) * g.nodes[i];
            Real half = 1 - abs(x);
            for (std::size_t m = 0; m < g.size(); ++m) {
                Real y = half * (2 * g.nodes[m] - 1);
                sum += zjzk(Complex(x, y), j, k) * (g.weights[i] * g.weights[m] * 2 * half);
            }
        }
    return sum / pi_value();
}

} // namespace

TEST_SUITE("moments")
{
    TEST_CASE("disk moments are diagonal")
    {
        PrecisionScope ps(256);
        MomentMatrix M = gram(make_disk(), 10, QuadratureScheme{});
        for (int j = 0; j <= 10; ++j)
            for (int k = 0; k <= 10; ++k) {
                Complex want(j == k ? Real(1) / (j + 1) : Real(0));
                CHECK(cabs(M.M(j, k) - want) < Real("1e-70"));
            }
    }

    TEST_CASE("boundary moments agree with area quadrature")
    {
        PrecisionScope ps(256);
        DomainModel ell = make_ellipse(Real(3) / 2);
        DomainModel sq = make_regular_ngon(4);
        for (int j = 0; j <= 6; ++j)
            for (int k = 0; k <= 6; ++k) {
                CHECK(cabs(boundary_moment(ell, j, k, {}) - ellipse_area_moment(Real(3) / 2, j, k)) < Real("1e-25"));
                CHECK(cabs(boundary_moment(sq, j, k, {}) - square_area_moment(j, k)) < Real("1e-25"));
            }
        CHECK(abs(boundary_moment(sq, 0, 0, {}).real() - 2 / pi_value()) < Real("1e-70"));
    }

    TEST_CASE("gram matrix is hermitian and self-checked")
    {
        PrecisionScope ps(256);
        MomentMatrix M = gram(make_lens(), 12, QuadratureScheme{});
        for (int j = 0; j <= 12; ++j)
            for (int k = 0; k <= 12; ++k)
                CHECK(cabs(M.M(j, k) - std::conj(M.M(k, j))) < Real("1e-70"));
        CHECK(M.self_check_gap < pow2(32 - 256));
        CHECK(M.precision == 256);
    }

    TEST_CASE("ellipse orthonormal polynomials are scaled Chebyshev U")
    {
        PrecisionScope ps(256);
        Real rho = Real(3) / 2;
        const int N = 12;
        OrthonormalSystem sys = orthonormalize(gram(make_ellipse(rho), N, {}));
        std::vector<std::vector<Real>> U{{Real(1)}, {Real(0), Real(2)}};
        for (int n = 1; n < N; ++n) {
            std::vector<Real> next(n + 2, Real(0));
            for (int k = 0; k <= n; ++k)
                next[k + 1] += 2 * U[n][k];
            for (int k = 0; k < n; ++k)
                next[k] -= U[n - 1][k];
            U.push_back(next);
        }
        for (int n = 0; n <= N; ++n) {
            Real c = 2 * sqrt(Real(n + 1)) / sqrt(pow(rho, 2 * n + 2) - pow(rho, -2 * n - 2));
            for (int k = 0; k <= n; ++k)
                CHECK(cabs(sys.coeffs(n, k) - Complex(c * U[n][k])) < Real("1e-60"));
            CHECK(abs(sys.leading[n] - c * pow(Real(2), n)) < Real("1e-60"));
        }
    }

    TEST_CASE("square system is orthonormal")
    {
        PrecisionScope ps(256);
        MomentMatrix M = gram(make_regular_ngon(4), 24, {});
        OrthonormalSystem sys = orthonormalize(M);
        CHECK(orthonormality_residual(sys, M) < Real("1e-60"));
        for (int n = 1; n <= 24; ++n) {
            CHECK(sys.leading[n] > 0);
            for (int k = 0; k <= n; ++k)
                if ((n - k) % 4 != 0)
                    CHECK(cabs(sys.coeffs(n, k)) < Real("1e-60"));
        }
        Complex z(Real(0.3), Real(-0.2));
        auto all = eval_all(sys, 10, z);
        CHECK(cabs(all[7] - eval_p(sys, 7, z)) < Real("1e-70"));
        Real h = pow2(-80);
        Complex fd = (eval_p(sys, 7, z + h) - eval_p(sys, 7, z - h)) / (2 * h);
        CHECK(cabs(fd - eval_p_prime(sys, 7, z)) < Real("1e-40"));
    }

    TEST_CASE("low precision exhausts the Cholesky pivots")
    {
        PrecisionScope ps(64);
        CHECK_THROWS_AS(orthonormalize(gram(make_ellipse(Real(3) / 2), 80, QuadratureScheme{16, 0})), Error);
    }
}

#include "bergman/faber.hpp"

#include <doctest.h>

using namespace bergman;

TEST_SUITE("faber")
{
    TEST_CASE("ellipse Laurent coefficients are the Joukowski ones")
    {
        PrecisionScope ps(256);
        Real rho = Real(3) / 2;
        LaurentSeries L = psi_laurent(make_ellipse(rho), Real(3) / 2, 64);
        CHECK(cabs(L.lead - Complex(rho / 2)) < Real("1e-66"));
        CHECK(abs(L.capacity - 2 / rho) < Real("1e-66"));
        CHECK(cabs(L.c[0]) < Real("1e-66"));
        CHECK(cabs(L.c[1] - Complex(1 / (2 * rho))) < Real("1e-66"));
        for (std::size_t k = 2; k < L.c.size(); ++k)
            CHECK(cabs(L.c[k]) < Real("1e-66"));
        Complex w(Real(1.7), Real(0.4));
        CHECK(cabs(L.eval(w) - make_ellipse(rho).psi(w)) < Real("1e-66"));
    }

    TEST_CASE("too few Laurent terms raise the tail error")
    {
        PrecisionScope ps(256);
        CHECK_THROWS_AS(psi_laurent(make_regular_ngon(4), Real(13) / 10, 64), Error);
        CHECK(default_laurent_count(Real(3) / 2) == 512);
    }

    TEST_CASE("ellipse Faber polynomials are scaled Chebyshev T")
    {
        PrecisionScope ps(256);
        Real rho = Real(3) / 2;
        LaurentSeries L = psi_laurent(make_ellipse(rho), Real(3) / 2, 64);
        FaberSystem fab = faber_polys(L, 10);
        std::vector<std::vector<Real>> T{{Real(1)}, {Real(0), Real(1)}};
        for (int n = 1; n < 10; ++n) {
            std::vector<Real> next(n + 2, Real(0));
            for (int k = 0; k <= n; ++k)
                next[k + 1] += 2 * T[n][k];
            for (int k = 0; k < n; ++k)
                next[k] -= T[n - 1][k];
            T.push_back(next);
        }
        for (int n = 1; n <= 10; ++n)
            for (int k = 0; k <= n; ++k)
                CHECK(cabs(fab.F[n][k] - Complex(2 * T[n][k] / pow(rho, n))) < Real("1e-60"));
        CHECK(fab.route_gap < pow2(48 - 256));
    }

    TEST_CASE("disk Faber polynomials are monomials")
    {
        PrecisionScope ps(256);
        LaurentSeries L = psi_laurent(make_disk(), Real(3) / 2, 64);
        FaberSystem fab = faber_polys(L, 8);
        for (int n = 0; n <= 8; ++n)
            for (int k = 0; k <= n; ++k)
                CHECK(cabs(fab.F[n][k] - Complex(k == n ? 1 : 0)) < Real("1e-66"));
        Complex z(Real(2), Real(1));
        CHECK(cabs(second_kind_ratio(make_disk(), fab, 5, z)) < Real("1e-60"));
        CHECK(cabs(faber_remainder(make_disk(), fab, 5, z)) < Real("1e-60"));
    }

    TEST_CASE("lens identity and triangular alpha")
    {
        PrecisionScope ps(256);
        DomainModel d = make_lens();
        MomentMatrix M = gram(d, 16, {});
        OrthonormalSystem sys = orthonormalize(M);
        Real R = Real(3) / 2;
        FaberSystem fab = faber_polys(psi_laurent(d, R, default_laurent_count(R)), 16);
        for (int n = 0; n <= 16; ++n) {
            CHECK(abs(identity_residual(sys, fab, M, n)) < Real("1e-20"));
            CHECK(epsilon_nn(M, fab, n) >= 0);
            CHECK(beta_nn(sys, fab, M, n) >= 0);
        }
        CMatrix<Real> A = alpha_table(d, sys, 16);
        for (int n = 0; n <= 16; ++n) {
            for (int k = 0; k < n; ++k)
                CHECK(cabs(A(n, k)) < Real("1e-18"));
            CHECK(cabs(A(n, n) - Complex(sys.leading[n] / pow(fab.capacity, n + 1))) < Real("1e-50"));
        }
        auto h = hg_tables(A, 4, 8);
        CHECK(cabs(h[0] - Complex(1)) < Real("1e-50"));
    }

    TEST_CASE("disk Q_n is (n+1) z^n")
    {
        PrecisionScope ps(256);
        DomainModel d = make_disk();
        QEvaluator qe(d);
        Complex z(Real(0.4), Real(-0.3));
        auto Q = qe.eval(z, 12);
        Complex zn(1);
        for (int n = 0; n <= 12; ++n) {
            CHECK(cabs(Q[n] - Real(n + 1) * zn) < Real("1e-60"));
            zn *= z;
        }
        CHECK_THROWS_AS(qe.eval(Complex(1), 4), Error);
    }

    TEST_CASE("fitted constants")
    {
        PrecisionScope ps(128);
        std::map<int, std::vector<Complex>> rows;
        rows[2] = {Complex(1), Complex(Real(0.1)), Complex(Real(0.01))};
        Real B = fit_h_constant(rows);
        CHECK(B > 0);
        for (int j = 1; j < 3; ++j)
            CHECK(cabs(rows[2][j]) <= B / (2 + j + 1) * pow(1 + Real(j - 1) / 3, B) * (1 + Real("1e-6")));
    }
}

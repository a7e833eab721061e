#include "bergman/asymptotics.hpp"

#include <doctest.h>

using namespace bergman;

namespace {

// p_n = sqrt(n+1) z^n written straight into a system, no gram needed.
OrthonormalSystem disk_system(int N)
{
    OrthonormalSystem s;
    s.degree_max = N;
    s.precision = precision_bits();
    s.coeffs = CMatrix<Real>::Zero(N + 1, N + 1);
    for (int n = 0; n <= N; ++n) {
        s.coeffs(n, n) = Complex(sqrt(Real(n + 1)));
        s.leading.push_back(sqrt(Real(n + 1)));
    }
    return s;
}

} // namespace

TEST_SUITE("asymptotics")
{
    TEST_CASE("disk deviation vanishes, including the log-space path")
    {
        PrecisionScope ps(256);
        DomainModel d = make_disk();
        AnnulusConfig cfg = resolve_annulus(d, AnnulusConfig{});
        OrthonormalSystem sys = disk_system(200);
        DeviationPoint pt = prepare_deviation(d, Complex(Real(2)), cfg);
        CHECK(pt.regime == Regime::Exterior);
        for (int n : {1, 8, 64, 65, 200})
            CHECK(cabs(deviation_at(sys, n, pt).A) < Real("1e-60"));
        DeviationPoint in = prepare_deviation(d, Complex(Real(0.5), Real(0.2)), cfg);
        CHECK(in.regime == Regime::Interior);
        CHECK(cabs(deviation_at(sys, 150, in).A) < Real("1e-60"));
    }

    TEST_CASE("disk nth-root profile")
    {
        PrecisionScope ps(256);
        OrthonormalSystem sys = disk_system(40);
        RateFit f = nth_root_profile(sys, Complex(Real(0.5)), 1, 40, Real(0.5));
        for (std::size_t i = 0; i < f.n.size(); ++i) {
            int n = f.n[i];
            Real want = exp(log(sqrt(Real(n + 1)) * pow(Real(0.5), n)) / n);
            CHECK(abs(f.value[i] - want) < Real("1e-60"));
        }
        CHECK(abs(f.value.back() - Real(0.5)) < Real(0.03));
        CHECK(f.running_max.front() == f.value.front());
        CHECK(f.reference == Real(0.5));
    }

    TEST_CASE("rate fit columns")
    {
        PrecisionScope ps(128);
        RateFit f = rate_fit("A", "n", {2, 4}, {Real(0.5), Real(0.1)});
        CHECK(f.scaled[0] == 1);
        CHECK(abs(f.scaled[1] - Real(0.4)) < Real("1e-30"));
        CHECK(f.sup == 1);
        CHECK(f.running_max[1] == Real(0.5));
        RateFit g = rate_fit("A", "n/log n", {8}, {Real(1)});
        CHECK(abs(g.scaled[0] - 8 / log(Real(8))) < Real("1e-30"));
        CHECK_THROWS_AS(rate_fit("A", "n", {1, 2}, {Real(1)}), Error);
    }

    TEST_CASE("disk zeros cluster at the origin within the backward error radius")
    {
        PrecisionScope ps(256);
        OrthonormalSystem sys = disk_system(20);
        for (int n : {1, 5, 20}) {
            ZeroSet zs = poly_zeros(sys, n, 256);
            CHECK(zs.zeros.size() == std::size_t(n));
            CHECK(zs.max_residual < pow2(48 - 256));
            double radius = std::pow(std::ldexp(1.0, 64 - 256), 1.0 / n) * 4;
            for (const auto& z : zs.zeros)
                CHECK(cabs(z).convert_to<double>() < radius);
        }
    }

    TEST_CASE("square and lens zeros sit on the symmetry sets")
    {
        PrecisionScope ps(256);
        DomainModel sq = make_regular_ngon(4);
        OrthonormalSystem s4 = orthonormalize(gram(sq, 16, {}));
        for (int n : {4, 9, 16}) {
            ZeroSet zs = poly_zeros(s4, n, 256);
            ZeroSummary sum = zero_diagnostics(zs, sq);
            CHECK(sum.rows.size() == std::size_t(n));
            CHECK(sum.max_dist_gamma < 1e-6);
            CHECK(sum.min_dist_corners > 0);
        }
        DomainModel lens = make_lens();
        OrthonormalSystem sl = orthonormalize(gram(lens, 16, {}));
        ZeroSummary sum = zero_diagnostics(poly_zeros(sl, 16, 256), lens);
        CHECK(sum.max_abs_re < 1e-8);
        for (const auto& r : sum.rows)
            CHECK(std::abs(r.z.imag()) < 1);
        CHECK(sum.interior == 16);
    }

    TEST_CASE("distance helpers")
    {
        PrecisionScope ps(128);
        DomainModel sq = make_regular_ngon(4);
        CHECK(distance_to_gamma(sq, {0.3, 0}) == doctest::Approx(0).epsilon(1e-15));
        CHECK(distance_to_gamma(sq, {0.2, 0.2}) == doctest::Approx(0.2));
        CHECK(std::isnan(distance_to_gamma(make_disk(), {0.1, 0})));
    }

    TEST_CASE("degree range is enforced")
    {
        PrecisionScope ps(128);
        OrthonormalSystem sys = disk_system(4);
        CHECK_THROWS_AS(poly_zeros(sys, 5, 128), Error);
        CHECK_THROWS_AS(nth_root_profile(sys, Complex(Real(0.1)), 1, 9), Error);
    }
}

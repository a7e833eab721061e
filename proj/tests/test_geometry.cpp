#include "bergman/domain.hpp"

#include <doctest.h>

using namespace bergman;

TEST_SUITE("geometry")
{
    TEST_CASE("disk maps are the identity")
    {
        PrecisionScope ps(256);
        DomainModel d = make_disk();
        Complex z(Real(2), Real(-1) / 3);
        CHECK(cabs(d.phi(z) - z) < Real("1e-70"));
        CHECK(cabs(d.psi(z) - z) < Real("1e-70"));
        CHECK(abs(d.capacity - 1) < Real("1e-70"));
    }

    TEST_CASE("ellipse capacity equals the limit of phi(z)/z")
    {
        PrecisionScope ps(256);
        DomainModel d = make_ellipse(Real(3) / 2);
        // Richardson: phi(z)/z is a series in t = 1/z^2; extrapolate four samples to t = 0.
        std::vector<Real> t, f;
        for (int k = 0; k < 4; ++k) {
            Real x = Real(1000000) * Real(1 << k);
            t.push_back(1 / (x * x));
            f.push_back((d.phi(Complex(x)) / Complex(x)).real());
        }
        Real lim(0);
        for (int i = 0; i < 4; ++i) {
            Real l(1);
            for (int j = 0; j < 4; ++j)
                if (j != i)
                    l *= t[j] / (t[j] - t[i]);
            lim += l * f[i];
        }
        CHECK(abs(lim - d.capacity) < pow2(-150));
        CHECK(abs(d.capacity - Real(4) / 3) < Real("1e-70"));
    }

    TEST_CASE("square capacity against the elliptic closed form")
    {
        PrecisionScope ps(256);
        DomainModel d = make_regular_ngon(4);
        Real g = boost::multiprecision::tgamma(Real(1) / 4);
        Real cap = sqrt(Real(2)) * g * g / (4 * pow(pi_value(), Real(3) / 2));
        CHECK(abs(1 / d.capacity - cap) < Real("1e-70"));
    }

    TEST_CASE("exterior maps invert each other")
    {
        PrecisionScope ps(256);
        for (int N : {3, 4, 5}) {
            DomainModel d = make_regular_ngon(N);
            for (double t : {0.1, 1.3, 2.9, 4.4}) {
                Complex w = polar_unit(Real(t)) * Real(1.3);
                Complex z = d.psi(w);
                CHECK(cabs(d.phi(z) - w) < Real("1e-60"));
                Complex h = Real(1) / 1000000;
                Complex fd = (d.psi(w + h) - d.psi(w - h)) / (h * Real(2));
                CHECK(cabs(fd - d.psi_prime(w)) < Real("1e-10"));
            }
        }
        DomainModel lens = make_lens();
        Complex w = polar_unit(Real(0.7)) * Real(1.2);
        CHECK(cabs(lens.phi(lens.psi(w)) - w) < Real("1e-60"));
    }

    TEST_CASE("interior map is normalised at the centre")
    {
        PrecisionScope ps(256);
        DomainModel d = make_regular_ngon(4);
        CHECK(cabs(d.varphi(Complex(0))) < Real("1e-70"));
        Complex dv = d.varphi_prime(Complex(0));
        CHECK(dv.real() > 0);
        CHECK(abs(dv.imag()) < Real("1e-70"));
        CHECK(abs(cabs(d.varphi(Complex(Real(1) / 2, Real(1) / 2))) - 1) < Real("1e-60"));
        CHECK(cabs(d.varphi(Complex(Real(0.3), Real(0.1)))) < 1);
    }

    TEST_CASE("corner and spoke data")
    {
        PrecisionScope ps(128);
        DomainModel d = make_regular_ngon(5);
        CHECK(d.corners.size() == 5);
        CHECK(d.spokes().size() == 5);
        CHECK(make_disk().spokes().empty());
        CHECK(segment_distance({0.5, 1}, {0, 0}, {1, 0}) == doctest::Approx(1));
        CHECK(segment_distance({2, 0}, {0, 0}, {1, 0}) == doctest::Approx(1));
        CHECK(d.inside({0.2, 0.1}));
        CHECK_FALSE(d.inside({1.2, 0}));
        auto b = make_regular_ngon(4).bounding_box();
        CHECK(b[0] == doctest::Approx(-1));
        CHECK(b[3] == doctest::Approx(1));
    }

    TEST_CASE("domain specs parse")
    {
        PrecisionScope ps(128);
        CHECK(parse_domain_spec("ngon:N=3").corners.size() == 3);
        CHECK(parse_domain_spec("ellipse:rho=2").class_tag == DomainClass::Analytic);
        CHECK_THROWS_AS(parse_domain_spec("blob"), Error);
        CHECK_THROWS_AS(parse_domain_spec("ngon:N=2"), Error);
    }
}

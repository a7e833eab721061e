#include "bergman/continuation.hpp"

#include <doctest.h>

#include <sstream>

using namespace bergman;

TEST_SUITE("continuation")
{
    TEST_CASE("disk: one zero at w = z")
    {
        PrecisionScope ps(256);
        DomainModel d = make_disk();
        AnnulusConfig cfg = resolve_annulus(d, AnnulusConfig{});
        Complex z(Real("0.3"), Real("0.4"));
        ContinuationResult c = classify_point(d, z, cfg);
        CHECK(c.p == 1);
        CHECK(c.ring_count == 1);
        CHECK(abs(c.r - Real(0.5)) < Real("1e-60"));
        REQUIRE(c.phi1);
        CHECK(cabs(*c.phi1 - z) < Real("1e-60"));
        CHECK(c.in_omega_star);
        CHECK(annulus_zero_count(d, z, Real(0.4), Real(0.9), cfg) == 1);
        CHECK(annulus_zero_count(d, z, Real(0.6), Real(0.9), cfg) == 0);
        PhiValue ph = Phi_full(d, z, cfg);
        CHECK(ph.interior);
        CHECK(cabs(ph.value - z) < Real("1e-60"));
        CHECK(cabs(ph.derivative - Complex(1)) < Real("1e-60"));
    }

    TEST_CASE("reflected h agrees with the direct value across the circle")
    {
        PrecisionScope ps(256);
        DomainModel d = make_regular_ngon(4);
        AnnulusConfig cfg = resolve_annulus(d, AnnulusConfig{});
        Complex w = polar_unit(Real(0.3)) * Real(1.2);
        Complex dh;
        ExtValue h = h_eval(d, w, cfg, &dh);
        CHECK_FALSE(h.infinite);
        cdouble dfast;
        cdouble hf = h_eval_fast(d, to_cdouble(w), &dfast);
        CHECK(std::abs(hf - to_cdouble(h.value)) < 1e-10);
        CHECK(std::abs(dfast - to_cdouble(dh)) < 1e-8);
        // Inside the unit circle, h(w) at phi_1(z) must give back varphi(z).
        Complex z(Real(0.2), Real(0.1));
        ContinuationResult c = classify_point(d, z, cfg);
        REQUIRE(c.phi1);
        CHECK(cabs(h_eval(d, *c.phi1, cfg).value - d.varphi(z)) < Real("1e-60"));
    }

    TEST_CASE("symmetry lines tie the largest zeros")
    {
        PrecisionScope ps(256);
        DomainModel sq = make_regular_ngon(4);
        AnnulusConfig cs = resolve_annulus(sq, AnnulusConfig{});
        CHECK(classify_point(sq, Complex(Real(0.3)), cs).p == 2);
        ContinuationResult off = classify_point(sq, Complex(Real(0.3), Real(0.2)), cs);
        CHECK(off.p == 1);
        CHECK(off.r > Real(0.3));
        CHECK(off.r < 1);
        for (const auto& z : off.zeros)
            CHECK(z.residual < cs.newton_tol);

        DomainModel lens = make_lens();
        AnnulusConfig cl = resolve_annulus(lens, AnnulusConfig{});
        CHECK(classify_point(lens, Complex(Real(0), Real(0.3)), cl).p == 2);
        CHECK(classify_point(lens, Complex(Real(0.2), Real(0.3)), cl).p == 1);
    }

    TEST_CASE("errors")
    {
        PrecisionScope ps(256);
        DomainModel sq = make_regular_ngon(4);
        AnnulusConfig cfg = resolve_annulus(sq, AnnulusConfig{});
        CHECK_THROWS_AS(classify_point(sq, Complex(Real(2)), cfg), Error);
        try {
            classify_point(sq, Complex(Real(0.5), Real(0.5)), cfg);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NearBoundaryInconclusive);
        }
        DomainModel ell = make_ellipse(Real(3) / 2);
        CHECK_THROWS_AS(classify_point(ell, Complex(Real(0.1)), resolve_annulus(ell, AnnulusConfig{})), Error);
        CHECK_THROWS_AS(Phi_full(sq, Complex(Real(1)), cfg), Error);
    }

    TEST_CASE("raster CSV")
    {
        PrecisionScope ps(256);
        DomainModel d = make_disk();
        AnnulusConfig cfg = resolve_annulus(d, AnnulusConfig{});
        std::ostringstream a, b;
        write_raster(a, d, cfg, RasterSpec{4, 4});
        write_raster(b, d, cfg, RasterSpec{4, 4});
        CHECK(a.str() == b.str());
        std::istringstream in(a.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "ix,iy,x,y,region,p,r,in_omega_star");
        int rows = 0, interior = 0;
        while (std::getline(in, line)) {
            ++rows;
            interior += line.find("interior") != std::string::npos;
        }
        CHECK(rows == 16);
        CHECK(interior == 12);
    }
}

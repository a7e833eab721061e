#include "bergman/domain.hpp"
#include "bergman/ngon.hpp"

#include <cmath>
#include <regex>

namespace bergman {

const char* class_name(DomainClass c)
{
    switch (c) {
    case DomainClass::Analytic: return "analytic";
    case DomainClass::Corner: return "corner";
    case DomainClass::Singular: return "singular";
    }
    return "?";
}

double segment_distance(cdouble z, cdouble a, cdouble b)
{
    cdouble d = b - a;
    double len2 = std::norm(d);
    double t = len2 > 0 ? ((z - a) * std::conj(d)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

Complex MapBackend::phi_continued(const Complex& z, const Complex&) const { return phi(z); }

Complex MapBackend::varphi(const Complex&) const
{
    throw Error(ErrorKind::InteriorMapUnavailable, "no interior conformal map for this domain");
}

Complex MapBackend::varphi_prime(const Complex& z) const { return varphi(z); }

ExtValue MapBackend::varphi_ext(const Complex&, Complex*) const
{
    throw Error(ErrorKind::DomainError, "domain is outside class A: no continuation of the interior map");
}

ExtValue MapBackend::h_direct(const Complex&, Complex*) const
{
    throw Error(ErrorKind::DomainError, "domain is outside class A: h is not available");
}

cdouble MapBackend::h_direct_fast(cdouble, cdouble*) const
{
    throw Error(ErrorKind::DomainError, "domain is outside class A: h is not available");
}

std::vector<HPole> MapBackend::h_poles(const Real&) const { return {}; }

std::vector<std::pair<cdouble, cdouble>> DomainModel::spokes() const
{
    std::vector<std::pair<cdouble, cdouble>> s;
    for (const auto& c : corners)
        s.emplace_back(to_cdouble(base_point), to_cdouble(c.location));
    return s;
}

double DomainModel::distance_to_corners(cdouble z) const
{
    double d = 1e300;
    for (const auto& c : corners)
        d = std::min(d, std::abs(z - to_cdouble(c.location)));
    return d;
}

Real DomainModel::diameter_bound() const
{
    Real r(0);
    for (const auto& a : arcs)
        for (int i = 0; i <= 64; ++i) {
            Real m = cabs(a.z(Real(i) / 64));
            if (m > r)
                r = m;
        }
    return r;
}

std::array<double, 4> DomainModel::bounding_box() const
{
    std::array<double, 4> b{1e300, -1e300, 1e300, -1e300};
    for (const auto& arc : arcs)
        for (int i = 0; i <= 256; ++i) {
            cdouble p = to_cdouble(arc.z(Real(i) / 256));
            b[0] = std::min(b[0], p.real());
            b[1] = std::max(b[1], p.real());
            b[2] = std::min(b[2], p.imag());
            b[3] = std::max(b[3], p.imag());
        }
    return b;
}

namespace {

class DiskMaps : public MapBackend {
public:
    Complex psi(const Complex& w) const override { return w; }
    Complex psi_prime(const Complex&) const override { return Complex(1); }
    Complex phi(const Complex& z) const override { return z; }
    Complex phi_prime(const Complex&) const override { return Complex(1); }
    bool has_interior() const override { return true; }
    Complex varphi(const Complex& z) const override { return z; }
    Complex varphi_prime(const Complex&) const override { return Complex(1); }
    bool has_continuation() const override { return true; }
    bool h_closed_form() const override { return true; }
    ExtValue varphi_ext(const Complex& z, Complex* d) const override
    {
        if (d)
            *d = Complex(1);
        return {z, false};
    }
    ExtValue h_direct(const Complex& w, Complex* d) const override
    {
        if (d)
            *d = Complex(1);
        return {w, false};
    }
    cdouble h_direct_fast(cdouble w, cdouble* d) const override
    {
        if (d)
            *d = 1.0;
        return w;
    }
};

class EllipseMaps : public MapBackend {
public:
    explicit EllipseMaps(const Real& rho) : rho_(rho) {}
    Complex psi(const Complex& w) const override
    {
        return (rho_ * w + Complex(1) / (rho_ * w)) / Real(2);
    }
    Complex psi_prime(const Complex& w) const override
    {
        return (Complex(rho_) - Complex(1) / (rho_ * w * w)) / Real(2);
    }
    Complex phi(const Complex& z) const override { return joukowski_inverse(z) / rho_; }
    Complex phi_prime(const Complex& z) const override
    {
        Complex u = joukowski_inverse(z);
        return Real(2) / (rho_ * (Complex(1) - Complex(1) / (u * u)));
    }

private:
    // Root of (u + 1/u)/2 = z with |u| >= 1.
    static Complex joukowski_inverse(const Complex& z)
    {
        Complex s = csqrt(z * z - Complex(1));
        Complex u = z + s;
        if (cabs(u) < 1)
            u = z - s;
        return u;
    }
    Real rho_;
};

// Lens with corners at +-i bounded by arcs centred at -+1 of radius sqrt 2.
template <class T>
struct LensFormulas {
    using C = std::complex<T>;
    static C I() { return C(T(0), T(1)); }
    static C mobius(const C& z) { return (z - I()) / (z + I()); }
    static void varphi(const C& z, C& v, C& d)
    {
        C T1 = mobius(z);
        C dT = T(2) * I() / ((z + I()) * (z + I()));
        C S = T1 * T1;
        C dS = T(2) * T1 * dT;
        v = -I() * (S - C(1)) / (S + C(1));
        d = -I() * T(2) * dS / ((S + C(1)) * (S + C(1)));
    }
    static void phi(const C& z, C& v, C& d)
    {
        C T1 = mobius(z);
        C dT = T(2) * I() / ((z + I()) * (z + I()));
        C s = cpow(T1, T(2) / T(3));
        C ds = T(2) / T(3) * s / T1 * dT;
        v = -I() * (s + C(1)) / (s - C(1));
        d = T(2) * I() * ds / ((s - C(1)) * (s - C(1)));
    }
    static C sfun(const C& w, C& ds)
    {
        C den = I() * w - C(1);
        ds = T(-2) * I() / (den * den);
        return (C(1) + I() * w) / den;
    }
    static void psi(const C& w, C& v, C& d)
    {
        C ds;
        C s = sfun(w, ds);
        C sh = cpow(s, T(1) / T(2));
        C T1 = s * sh;
        C dT = T(3) / T(2) * sh * ds;
        v = I() * (C(1) + T1) / (C(1) - T1);
        d = T(2) * I() / ((C(1) - T1) * (C(1) - T1)) * dT;
    }
    static C h(const C& w, C* d)
    {
        C ds;
        C s = sfun(w, ds);
        C s3 = s * s * s;
        if (d)
            *d = -I() * T(6) * s * s * ds / ((s3 + C(1)) * (s3 + C(1)));
        return -I() * (s3 - C(1)) / (s3 + C(1));
    }
};

class LensMaps : public MapBackend {
    using F = LensFormulas<Real>;

public:
    Complex psi(const Complex& w) const override
    {
        Complex v, d;
        F::psi(w, v, d);
        return v;
    }
    Complex psi_prime(const Complex& w) const override
    {
        Complex v, d;
        F::psi(w, v, d);
        return d;
    }
    Complex phi(const Complex& z) const override
    {
        Complex v, d;
        F::phi(z, v, d);
        return v;
    }
    Complex phi_prime(const Complex& z) const override
    {
        Complex v, d;
        F::phi(z, v, d);
        return d;
    }
    bool has_interior() const override { return true; }
    Complex varphi(const Complex& z) const override
    {
        Complex v, d;
        F::varphi(z, v, d);
        return v;
    }
    Complex varphi_prime(const Complex& z) const override
    {
        Complex v, d;
        F::varphi(z, v, d);
        return d;
    }
    bool has_continuation() const override { return true; }
    bool h_closed_form() const override { return true; }
    ExtValue varphi_ext(const Complex& z, Complex* d) const override
    {
        Complex v, dd;
        Complex T1 = F::mobius(z);
        Complex S = T1 * T1;
        if (S == Complex(-1))
            return {Complex(0), true};
        F::varphi(z, v, dd);
        if (d)
            *d = dd;
        return {v, false};
    }
    ExtValue h_direct(const Complex& w, Complex* d) const override
    {
        Complex ds;
        Complex s = F::sfun(w, ds);
        if (s * s * s == Complex(-1))
            return {Complex(0), true};
        return {F::h(w, d), false};
    }
    cdouble h_direct_fast(cdouble w, cdouble* d) const override
    {
        return LensFormulas<double>::h(w, d);
    }
    std::vector<HPole> h_poles(const Real& r_lo) const override
    {
        // s^3 = -1 gives w in {0, +-sqrt 3}; only w = 0 lies inside the unit circle.
        if (r_lo <= 0)
            return {HPole{Complex(0), 1}};
        return {};
    }
};

AnalyticArc line_arc(const Complex& a, const Complex& b)
{
    return AnalyticArc{[a, b](const Real& t) { return a + (b - a) * t; },
                       [a, b](const Real&) { return b - a; }, a, b};
}

AnalyticArc circle_arc(const Complex& c, const Real& r, const Real& th0, const Real& th1)
{
    auto z = [c, r, th0, th1](const Real& t) { return c + r * polar_unit(th0 + (th1 - th0) * t); };
    auto dz = [r, th0, th1](const Real& t) {
        return Complex(0, 1) * r * (th1 - th0) * polar_unit(th0 + (th1 - th0) * t);
    };
    return AnalyticArc{z, dz, z(Real(0)), z(Real(1))};
}

} // namespace

DomainModel make_disk()
{
    DomainModel d;
    d.name = "disk";
    d.class_tag = DomainClass::Analytic;
    d.arcs.push_back(circle_arc(Complex(0), Real(1), Real(0), 2 * pi_value()));
    d.capacity = Real(1);
    d.base_point = Complex(0);
    d.maps = std::make_shared<DiskMaps>();
    d.precision = precision_bits();
    d.inside = [](cdouble z) { return std::abs(z) < 1; };
    d.boundary_distance = [](cdouble z) { return std::abs(std::abs(z) - 1); };
    return d;
}

DomainModel make_ellipse(const Real& rho)
{
    if (!(rho > 1))
        throw Error(ErrorKind::InvalidParameter, "ellipse needs rho > 1");
    DomainModel d;
    d.name = "ellipse:rho=" + to_sci(rho, 6);
    d.class_tag = DomainClass::Analytic;
    auto maps = std::make_shared<EllipseMaps>(rho);
    Real two_pi = 2 * pi_value();
    d.arcs.push_back(AnalyticArc{
        [maps, two_pi](const Real& t) { return maps->psi(polar_unit(two_pi * t)); },
        [maps, two_pi](const Real& t) {
            Complex w = polar_unit(two_pi * t);
            return maps->psi_prime(w) * Complex(0, 1) * two_pi * w;
        },
        maps->psi(Complex(1)), maps->psi(Complex(1))});
    // lim phi(z)/z from a far point; the 1/z^2 correction is below working precision.
    Complex far(pow2(int(precision_bits()) / 2 + 8), Real(0));
    d.capacity = (maps->phi(far) / far).real();
    d.base_point = Complex(0);
    d.maps = maps;
    d.precision = precision_bits();
    double a = ((rho + 1 / rho) / 2).convert_to<double>();
    double b = ((rho - 1 / rho) / 2).convert_to<double>();
    d.inside = [a, b](cdouble z) {
        return (z.real() / a) * (z.real() / a) + (z.imag() / b) * (z.imag() / b) < 1;
    };
    d.boundary_distance = [a, b](cdouble z) {
        double best = 1e300, tb = 0;
        const int n = 2048;
        for (int i = 0; i < n; ++i) {
            double t = 2 * M_PI * i / n;
            double dd = std::abs(z - cdouble(a * std::cos(t), b * std::sin(t)));
            if (dd < best) {
                best = dd;
                tb = t;
            }
        }
        double h = 2 * M_PI / n;
        for (int it = 0; it < 60; ++it) {
            h *= 0.5;
            for (double t : {tb - h, tb + h}) {
                double dd = std::abs(z - cdouble(a * std::cos(t), b * std::sin(t)));
                if (dd < best) {
                    best = dd;
                    tb = t;
                }
            }
        }
        return best;
    };
    return d;
}

DomainModel make_regular_ngon(int N)
{
    if (N < 3)
        throw Error(ErrorKind::InvalidParameter, "regular polygon needs N >= 3");
    DomainModel d;
    d.name = "ngon:N=" + std::to_string(N);
    d.ngon_sides = N;
    d.class_tag = (N == 3 || N == 4) ? DomainClass::Corner : DomainClass::Singular;
    Real pi = pi_value();
    std::vector<Complex> v(N);
    for (int k = 0; k < N; ++k)
        v[k] = polar_unit(2 * pi * k / N);
    v[0] = Complex(1);
    if (N == 4) {
        v[1] = Complex(0, 1);
        v[2] = Complex(-1, 0);
        v[3] = Complex(0, -1);
    }
    Real angle = pi * (N - 2) / N;
    std::optional<int> order;
    if (N == 3)
        order = 3;
    if (N == 4)
        order = 2;
    for (int k = 0; k < N; ++k) {
        d.arcs.push_back(line_arc(v[k], v[(k + 1) % N]));
        d.corners.push_back(CornerSpec{v[k], angle, order});
    }
    auto maps = std::make_shared<NgonMaps>(N);
    d.capacity = Real(1) / maps->core().psi_scale();
    d.base_point = Complex(0);
    d.maps = maps;
    d.precision = precision_bits();
    std::vector<cdouble> vd;
    for (auto& x : v)
        vd.push_back(to_cdouble(x));
    double apo = std::cos(M_PI / N);
    d.inside = [N, apo](cdouble z) {
        for (int k = 0; k < N; ++k) {
            cdouble n = std::polar(1.0, M_PI * (2 * k + 1) / N);
            if ((z * std::conj(n)).real() >= apo)
                return false;
        }
        return true;
    };
    d.boundary_distance = [vd](cdouble z) {
        double best = 1e300;
        for (std::size_t k = 0; k < vd.size(); ++k)
            best = std::min(best, segment_distance(z, vd[k], vd[(k + 1) % vd.size()]));
        return best;
    };
    return d;
}

DomainModel make_lens()
{
    DomainModel d;
    d.name = "lens";
    d.class_tag = DomainClass::Corner;
    Real pi = pi_value();
    Real r = sqrt(Real(2));
    d.arcs.push_back(circle_arc(Complex(-1), r, -pi / 4, pi / 4));
    d.arcs.push_back(circle_arc(Complex(1), r, 3 * pi / 4, 5 * pi / 4));
    d.arcs[0].start = Complex(0, -1);
    d.arcs[0].end = Complex(0, 1);
    d.arcs[1].start = Complex(0, 1);
    d.arcs[1].end = Complex(0, -1);
    d.corners.push_back(CornerSpec{Complex(0, 1), pi / 2, 2});
    d.corners.push_back(CornerSpec{Complex(0, -1), pi / 2, 2});
    d.capacity = Real(3) / 2;
    d.base_point = Complex(0);
    d.maps = std::make_shared<LensMaps>();
    d.precision = precision_bits();
    d.inside = [](cdouble z) {
        return std::abs(z + 1.0) < std::sqrt(2.0) && std::abs(z - 1.0) < std::sqrt(2.0);
    };
    d.boundary_distance = [](cdouble z) {
        auto arc = [&](cdouble c, double a0, double a1) {
            double th = std::arg(z - c);
            if (th < a0 - 1e-12)
                th += 2 * M_PI;
            if (th >= a0 && th <= a1)
                return std::abs(std::abs(z - c) - std::sqrt(2.0));
            return std::min(std::abs(z - cdouble(0, 1)), std::abs(z - cdouble(0, -1)));
        };
        return std::min(arc(-1.0, -M_PI / 4, M_PI / 4), arc(1.0, 3 * M_PI / 4, 5 * M_PI / 4));
    };
    return d;
}

DomainModel parse_domain_spec(const std::string& spec)
{
    std::smatch m;
    if (spec == "disk")
        return make_disk();
    if (spec == "lens")
        return make_lens();
    static const std::regex ell(R"(ellipse:rho=([0-9.eE+-]+))");
    static const std::regex ngon(R"(ngon:N=([0-9]+))");
    if (std::regex_match(spec, m, ell))
        return make_ellipse(parse_real(m[1].str()));
    if (std::regex_match(spec, m, ngon))
        return make_regular_ngon(std::stoi(m[1].str()));
    throw Error(ErrorKind::ConfigError, "unknown domain spec '" + spec + "'");
}

} // namespace bergman

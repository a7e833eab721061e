#include "bergman/scalar.hpp"
#include "bergman/errors.hpp"

#include <cmath>
#include <sstream>

namespace bergman {

namespace {
unsigned g_bits = 256;
}

void set_precision_bits(unsigned bits)
{
    if (bits < 24)
        throw Error(ErrorKind::InvalidParameter, "precision below 24 bits");
    g_bits = bits;
    unsigned d10 = static_cast<unsigned>(std::ceil(bits * 0.30103));
    Real::default_precision(d10);
}

unsigned precision_bits() { return g_bits; }

PrecisionScope::PrecisionScope(unsigned bits) : saved_(g_bits) { set_precision_bits(bits); }
PrecisionScope::~PrecisionScope() { set_precision_bits(saved_); }

Real pow2(int e)
{
    Real r(1);
    return ldexp(r, e);
}

Real pi_value() { return boost::math::constants::pi<Real>(); }

Real parse_real(const std::string& s)
{
    try {
        return Real(s);
    } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, "not a decimal real: '" + s + "'");
    }
}

std::string to_decimal(const Real& x)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(int(x.precision()) + 3) << std::scientific << x;
    return os.str();
}

std::string to_decimal(double x)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << std::scientific << x;
    return os.str();
}

std::string to_sci(const Real& x, int digits)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(digits) << std::scientific << x;
    return os.str();
}

Real cabs(const Complex& z) { return hypot(z.real(), z.imag()); }
Real carg(const Complex& z) { return atan2(z.imag(), z.real()); }

Complex cexp(const Complex& z)
{
    Real m = exp(z.real());
    return Complex(m * cos(z.imag()), m * sin(z.imag()));
}

Complex clog(const Complex& z) { return Complex(log(cabs(z)), carg(z)); }

Complex cpow(const Complex& z, const Real& a)
{
    if (z.real() == 0 && z.imag() == 0)
        return Complex(0);
    Real lr = log(cabs(z)) * a;
    Real th = carg(z) * a;
    Real m = exp(lr);
    return Complex(m * cos(th), m * sin(th));
}

Complex csqrt(const Complex& z)
{
    Real r = cabs(z);
    if (r == 0)
        return Complex(0);
    Real re = sqrt((r + abs(z.real())) / 2);
    if (z.real() >= 0)
        return Complex(re, z.imag() / (2 * re));
    Real im = z.imag() >= 0 ? re : Real(-re);
    return Complex(abs(z.imag()) / (2 * re), im);
}

const char* kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::MapInversionFailure: return "map-inversion-failure";
    case ErrorKind::QuadratureError: return "quadrature-error";
    case ErrorKind::PrecisionExhausted: return "precision-exhausted";
    case ErrorKind::LaurentTail: return "laurent-tail";
    case ErrorKind::FaberInconsistency: return "faber-inconsistency";
    case ErrorKind::NearBoundary: return "near-boundary-error";
    case ErrorKind::ContourDegenerate: return "contour-degenerate";
    case ErrorKind::ClassificationFailure: return "classification-failure";
    case ErrorKind::NearBoundaryInconclusive: return "near-boundary-inconclusive";
    case ErrorKind::NotInOmegaStar: return "not-in-omega-star";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::ScalingError: return "scaling-error";
    case ErrorKind::RootFailure: return "root-failure";
    case ErrorKind::InteriorMapUnavailable: return "interior-map-unavailable";
    case ErrorKind::DegreeOutOfRange: return "degree-out-of-range";
    case ErrorKind::ConfigError: return "config-error";
    }
    return "error";
}

} // namespace bergman

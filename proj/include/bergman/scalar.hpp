#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <complex>
#include <string>
#include <vector>

namespace bergman {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using Complex = std::complex<Real>;
using cdouble = std::complex<double>;

// Sets the working precision for every Real constructed afterwards.
void set_precision_bits(unsigned bits);
unsigned precision_bits();

// Restores the previous working precision on scope exit.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

// 2^e in working precision.
Real pow2(int e);
Real pi_value();

inline Real to_real(double x) { return Real(x); }
inline Complex to_complex(cdouble z) { return Complex(Real(z.real()), Real(z.imag())); }
inline cdouble to_cdouble(const Complex& z)
{
    return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
}
inline cdouble to_cdouble(cdouble z) { return z; }

Real parse_real(const std::string& s);
// Decimal string carrying every significant bit of x (round-trips at the same precision).
std::string to_decimal(const Real& x);
std::string to_decimal(double x);
// Short fixed-width rendering for CSV columns that are not meant to round-trip.
std::string to_sci(const Real& x, int digits = 20);

// Complex elementary functions routed through the real mpfr kernels.
Complex cexp(const Complex& z);
Complex clog(const Complex& z);
Complex cpow(const Complex& z, const Real& a);
Complex csqrt(const Complex& z);
Real cabs(const Complex& z);
Real carg(const Complex& z);

inline cdouble cexp(cdouble z) { return std::exp(z); }
inline cdouble clog(cdouble z) { return std::log(z); }
inline cdouble cpow(cdouble z, double a) { return std::pow(z, a); }
inline cdouble csqrt(cdouble z) { return std::sqrt(z); }
inline double cabs(cdouble z) { return std::abs(z); }
inline double carg(cdouble z) { return std::arg(z); }

inline Complex polar_unit(const Real& theta)
{
    using std::cos;
    using std::sin;
    return Complex(cos(theta), sin(theta));
}

// Scalar helpers that work for both double and Real.
template <class T>
struct ScalarOps;

template <>
struct ScalarOps<double> {
    static double pi() { return 3.14159265358979323846264338327950288; }
    static double eps() { return 2.220446049250313e-16; }
    static double from(const Real& x) { return x.convert_to<double>(); }
    static double from_double(double x) { return x; }
    static double tgamma(double x) { return std::tgamma(x); }
};

template <>
struct ScalarOps<Real> {
    static Real pi() { return pi_value(); }
    static Real eps() { return pow2(1 - int(precision_bits())); }
    static Real from(const Real& x) { return x; }
    static Real from_double(double x) { return Real(x); }
    static Real tgamma(const Real& x) { return boost::multiprecision::tgamma(x); }
};

} // namespace bergman

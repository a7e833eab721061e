#pragma once

#include "bergman/errors.hpp"
#include "bergman/scalar.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bergman {

enum class DomainClass { Analytic, Corner, Singular };
const char* class_name(DomainClass c);

struct AnalyticArc {
    std::function<Complex(const Real&)> z;
    std::function<Complex(const Real&)> dz;
    Complex start;
    Complex end;
};

struct CornerSpec {
    Complex location;
    Real interior_angle;
    std::optional<int> order_m;
};

// Value of a meromorphic function; infinite marks a pole hit exactly.
struct ExtValue {
    Complex value;
    bool infinite = false;
};

struct HPole {
    Complex location;
    int multiplicity = 1;
};

// Map evaluators behind a DomainModel. All methods are const and side-effect free.
class MapBackend {
public:
    virtual ~MapBackend() = default;

    virtual Complex psi(const Complex& w) const = 0;
    virtual Complex psi_prime(const Complex& w) const = 0;
    virtual Complex phi(const Complex& z) const = 0;
    virtual Complex phi_prime(const Complex& z) const { return Complex(1) / psi_prime(phi(z)); }

    // Inverse of psi continued across |w| = 1 starting from a guess near the circle.
    virtual Complex phi_continued(const Complex& z, const Complex& guess) const;

    virtual bool has_interior() const { return false; }
    virtual Complex varphi(const Complex& z) const;
    virtual Complex varphi_prime(const Complex& z) const;

    // Meromorphic continuation of varphi to the plane (class A1 only).
    virtual bool has_continuation() const { return false; }
    // h_direct is exact on the whole working annulus, not only near |w| >= 1.
    virtual bool h_closed_form() const { return false; }
    virtual ExtValue varphi_ext(const Complex& z, Complex* derivative = nullptr) const;

    // h(w) = varphi(psi(w)) with psi continued into |w| < 1 where that makes sense.
    virtual ExtValue h_direct(const Complex& w, Complex* derivative = nullptr) const;
    virtual cdouble h_direct_fast(cdouble w, cdouble* derivative = nullptr) const;

    // Poles of h in r_lo < |w| < 1.
    virtual std::vector<HPole> h_poles(const Real& r_lo) const;
};

struct DomainModel {
    std::string name;
    DomainClass class_tag = DomainClass::Analytic;
    std::vector<AnalyticArc> arcs;
    std::vector<CornerSpec> corners;
    Real capacity;
    Complex base_point;
    std::shared_ptr<const MapBackend> maps;
    unsigned precision = 0;
    int ngon_sides = 0;

    std::function<bool(cdouble)> inside;
    std::function<double(cdouble)> boundary_distance;

    Complex phi(const Complex& z) const { return maps->phi(z); }
    Complex phi_prime(const Complex& z) const { return maps->phi_prime(z); }
    Complex psi(const Complex& w) const { return maps->psi(w); }
    Complex psi_prime(const Complex& w) const { return maps->psi_prime(w); }
    bool has_interior() const { return maps->has_interior(); }
    Complex varphi(const Complex& z) const { return maps->varphi(z); }
    Complex varphi_prime(const Complex& z) const { return maps->varphi_prime(z); }
    bool in_class_a() const { return class_tag != DomainClass::Singular; }

    // Segments joining the centre to each corner (zero locus for N in {3,4}).
    std::vector<std::pair<cdouble, cdouble>> spokes() const;
    double distance_to_corners(cdouble z) const;
    Real diameter_bound() const;
    // xmin, xmax, ymin, ymax of sampled boundary points.
    std::array<double, 4> bounding_box() const;
};

DomainModel make_disk();
DomainModel make_ellipse(const Real& rho);
DomainModel make_regular_ngon(int N);
DomainModel make_lens();

// "disk", "ellipse:rho=1.5", "ngon:N=4", "lens".
DomainModel parse_domain_spec(const std::string& spec);

double segment_distance(cdouble z, cdouble a, cdouble b);

} // namespace bergman

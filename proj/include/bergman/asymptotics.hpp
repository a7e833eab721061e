#pragma once

#include "bergman/continuation.hpp"
#include "bergman/moments.hpp"

namespace bergman {

enum class Regime { Exterior, Interior, OmegaStar };
const char* regime_name(Regime r);

struct DeviationRecord {
    int n = 0;
    Complex z;
    Complex A;
    Regime regime = Regime::Exterior;
    Real aux;
    Real derivative_gap;
};

// Phi and Phi' at one point, shared across degrees.
struct DeviationPoint {
    Complex z;
    Regime regime = Regime::Exterior;
    Complex Phi;
    Complex dPhi;
    Real derivative_gap;
};

DeviationPoint prepare_deviation(const DomainModel& d, const Complex& z, const AnnulusConfig& cfg);
DeviationRecord deviation_at(const OrthonormalSystem& sys, int n, const DeviationPoint& pt);
DeviationRecord deviation(const DomainModel& d, const OrthonormalSystem& sys, int n, const Complex& z,
                          const AnnulusConfig& cfg);

// Samples with a scaled column (value*n or value*n/log n) and the running maximum of the raw values.
struct RateFit {
    std::string quantity;
    std::string model;
    std::vector<int> n;
    std::vector<Real> value;
    std::vector<Real> scaled;
    std::vector<Real> running_max;
    Real sup;
    Real reference;
};

RateFit rate_fit(const std::string& quantity, const std::string& model, const std::vector<int>& n,
                 const std::vector<Real>& values);

// |p_n(z)|^(1/n) over the range, with r(z) as reference when supplied.
RateFit nth_root_profile(const OrthonormalSystem& sys, const Complex& z, int n_lo, int n_hi,
                         const std::optional<Real>& r = std::nullopt);

struct ZeroSet {
    int n = 0;
    std::vector<Complex> zeros;
    Real max_residual;
    int sweeps = 0;
};

ZeroSet poly_zeros(const OrthonormalSystem& sys, int n, unsigned precision);

struct ZeroRow {
    cdouble z;
    double dist_gamma;
    double dist_L;
    double dist_corners;
    double abs_phi;
};

struct ZeroSummary {
    int n = 0;
    std::vector<ZeroRow> rows;
    double max_dist_gamma = 0;
    double min_dist_corners = 0;
    double max_abs_re = 0;
    // Counts of |phi| at exterior zeros in [1, 1.1), [1.1, 1.2), ... plus the interior zero count.
    std::vector<int> phi_histogram;
    int interior = 0;
};

double distance_to_gamma(const DomainModel& d, cdouble z);
ZeroSummary zero_diagnostics(const ZeroSet& zs, const DomainModel& d);

} // namespace bergman

#pragma once

#include "bergman/asymptotics.hpp"
#include "bergman/faber.hpp"

#include <ostream>
#include <string>

namespace bergman {

// {"degree_max", "precision_bits", "lambda": [...], "rows": [[[re, im], ...], ...]}, reals as decimal strings.
std::string system_to_json(const OrthonormalSystem& sys);
OrthonormalSystem system_from_json(const std::string& text);

void write_lambda_csv(std::ostream& out, const OrthonormalSystem& sys, const Real& capacity);
void write_tables_csv(std::ostream& out, const CoefficientTables& t);
void write_alpha_csv(std::ostream& out, const CMatrix<Real>& alpha);
std::string tables_to_json(const CoefficientTables& t);

void write_deviations_header(std::ostream& out);
void write_deviation_row(std::ostream& out, const DeviationRecord& r);

void write_zeros_header(std::ostream& out);
void write_zero_rows(std::ostream& out, const ZeroSummary& s);
void write_zero_summary_header(std::ostream& out);
void write_zero_summary_row(std::ostream& out, const ZeroSummary& s, const ZeroSet& zs);

void write_profile_header(std::ostream& out);
void write_profile_rows(std::ostream& out, const Complex& z, const RateFit& f);

// Shortest round-trip rendering of a double, NaN as an empty field.
std::string csv_double(double x);

} // namespace bergman

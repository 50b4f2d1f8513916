#pragma once

#include <iosfwd>
#include <span>

#include "mmm/prob/empirical.hpp"

namespace mmm {

// `value,weight` rows, one per sorted point.
void write_distribution_csv(std::ostream& os, const EmpiricalDistribution& d);
EmpiricalDistribution read_distribution_csv(std::istream& is);

// `c,F_phi,F_psi,diff` at the given evaluation points.
template <typename A, typename B>
void write_cdf_report_csv(std::ostream& os, const A& phi, const B& psi,
                          std::span<const double> points);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace mmm

#include <ostream>
#include <string>

namespace mmm {

template <typename A, typename B>
void write_cdf_report_csv(std::ostream& os, const A& phi, const B& psi,
                          std::span<const double> points) {
  os << "c,F_phi,F_psi,diff\n";
  for (double c : points) {
    const double a = phi.cdf(c);
    const double b = psi.cdf(c);
    os << format_double(c) << ',' << format_double(a) << ',' << format_double(b) << ','
       << format_double(a - b) << '\n';
  }
}

}  // namespace mmm

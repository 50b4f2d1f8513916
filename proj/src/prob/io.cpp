#include "mmm/prob/io.hpp"

#include <charconv>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "mmm/error.hpp"

namespace mmm {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_distribution_csv(std::ostream& os, const EmpiricalDistribution& d) {
  os << "value,weight\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    os << format_double(d.points()[i]) << ',' << format_double(d.weights()[i]) << '\n';
  }
}

EmpiricalDistribution read_distribution_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "value,weight") {
    throw InvalidArgument("distribution CSV must start with header value,weight");
  }
  std::vector<double> values;
  std::vector<double> weights;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("malformed row: " + line);
    try {
      values.push_back(std::stod(line.substr(0, comma)));
      weights.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw InvalidArgument("malformed row: " + line);
    }
  }
  return EmpiricalDistribution::from_weighted(values, weights);
}

}  // namespace mmm

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwss {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;
using Seed = std::uint64_t;

// Raised for malformed inputs: bad specs, length mismatches, out-of-range
// parameters. Messages name the offending field.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double norm2(const CVector& v);

}  // namespace cwss

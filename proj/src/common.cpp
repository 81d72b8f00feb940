#include "dyadshift/common.hpp"

#include <cmath>

namespace dyadshift {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t counter) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + counter);
}

double abs_pow(double x, double p) {
  const double a = std::fabs(x);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  if (p == 3.0) return a * a * a;
  if (p == 4.0) return (a * a) * (a * a);
  if (p == 1.5) return a * std::sqrt(a);
  if (p == 0.5) return std::sqrt(a);
  if (p == 0.0) return 1.0;
  if (a == 0.0) return 0.0;
  return std::pow(a, p);
}

double root(double y, double p) {
  if (p == 2.0) return std::sqrt(y);
  if (p == 1.0) return y;
  if (p == 3.0) return std::cbrt(y);
  if (p == 4.0) return std::sqrt(std::sqrt(y));
  if (p == 1.5) return std::cbrt(y * y);
  if (y == 0.0) return 0.0;
  return std::pow(y, 1.0 / p);
}

}  // namespace dyadshift

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "usched/model.hpp"

namespace usched {

class BadEps : public Error {
 public:
  using Error::Error;
};

/// Accuracy parameter as an exact fraction num/den in (0, 1].
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  /// Accepts "p/q", an integer, or a terminating decimal like "0.25".
  /// Throws BadEps outside (0, 1].
  static Rational parse(std::string_view text);
  std::string str() const;

  bool operator==(const Rational&) const = default;
};

void check_eps(Rational eps);

/// m / eps when it is a positive integer; throws BadEps otherwise.
int offset_period(int m, Rational eps);

// Parameter formulas. All logarithms are base 2; n is clamped to >= 2 so the
// nested logarithms stay defined.

/// ceil(log2(log2 n / eps)), clamped to >= 1 so every split has >= 2 children.
int laminar_rho(int n, Rational eps);
/// log2 n / log2(log2 n / eps) + 1; +infinity when log2(log2 n / eps) <= 0.
double level_count_bound(int n, Rational eps);
/// eps * len / (divisor * 2^ceil(log2 log2 n)).
double chain_threshold(Slot len, int n, Rational eps, int divisor);
/// (m log2 n / eps)^(m/eps + 1), saturated at 2^62.
std::uint64_t guess_cap(int n, int m, Rational eps);
/// (log2 n / eps)^(m/eps + 1): the ratio |Ī| / λ used by the slack bounds.
double lambda_divisor(int n, int m, Rational eps);
/// ceil((eps/m) log2 n) + 1.
int default_depth_max(int n, int m, Rational eps);
/// ceil(eps (log2 n / log2 log2 n + 1) / m).
double recursion_levels_rmax(int n, int m, Rational eps);

}  // namespace usched

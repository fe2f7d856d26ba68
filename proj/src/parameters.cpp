#include "usched/parameters.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace usched {

namespace {

double log2n(int n) { return std::log2(static_cast<double>(std::max(n, 2))); }

}  // namespace

void check_eps(Rational eps) {
  if (eps.num <= 0 || eps.den <= 0 || eps.num > eps.den) {
    throw BadEps("eps must lie in (0, 1], got " + eps.str());
  }
}

Rational Rational::parse(std::string_view text) {
  auto to_int = [&](std::string_view part) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      throw BadEps("cannot parse eps '" + std::string(text) + "'");
    }
    return v;
  };

  Rational r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    r = {to_int(text.substr(0, slash)), to_int(text.substr(slash + 1))};
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 12) throw BadEps("too many decimals in eps");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t whole = dot == 0 ? 0 : to_int(text.substr(0, dot));
    r = {whole * scale + (frac.empty() ? 0 : to_int(frac)), scale};
  } else {
    r = {to_int(text), 1};
  }
  if (r.den != 0) {
    std::int64_t g = std::gcd(r.num, r.den);
    if (g != 0) {
      r.num /= g;
      r.den /= g;
    }
  }
  check_eps(r);
  return r;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

int offset_period(int m, Rational eps) {
  check_eps(eps);
  std::int64_t scaled = static_cast<std::int64_t>(m) * eps.den;
  if (scaled % eps.num != 0) {
    throw BadEps("m/eps must be an integer (m=" + std::to_string(m) + ", eps=" +
                 eps.str() + ")");
  }
  return static_cast<int>(scaled / eps.num);
}

int laminar_rho(int n, Rational eps) {
  check_eps(eps);
  double rho = std::ceil(std::log2(log2n(n) / eps.value()));
  return std::max(1, static_cast<int>(rho));
}

double level_count_bound(int n, Rational eps) {
  check_eps(eps);
  double denom = std::log2(log2n(n) / eps.value());
  if (denom <= 0) return std::numeric_limits<double>::infinity();
  return log2n(n) / denom + 1.0;
}

double chain_threshold(Slot len, int n, Rational eps, int divisor) {
  double loglog = std::ceil(std::log2(log2n(n)));
  return eps.value() * static_cast<double>(len) /
         (static_cast<double>(divisor) * std::exp2(loglog));
}

std::uint64_t guess_cap(int n, int m, Rational eps) {
  double base = m * log2n(n) / eps.value();
  double exponent = m / eps.value() + 1.0;
  double k = std::pow(base, exponent);
  const double cap = std::exp2(62);
  if (!(k < cap)) return static_cast<std::uint64_t>(cap);
  return static_cast<std::uint64_t>(std::floor(k));
}

double lambda_divisor(int n, int m, Rational eps) {
  return std::pow(log2n(n) / eps.value(), m / eps.value() + 1.0);
}

int default_depth_max(int n, int m, Rational eps) {
  return static_cast<int>(std::ceil(eps.value() / m * std::log2(std::max(n, 1)))) + 1;
}

double recursion_levels_rmax(int n, int m, Rational eps) {
  double loglog = std::log2(log2n(n));
  if (loglog <= 0) return std::numeric_limits<double>::infinity();
  return std::ceil(eps.value() * (log2n(n) / loglog + 1.0) / m);
}

}  // namespace usched

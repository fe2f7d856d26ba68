#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "usched/model.hpp"

namespace usched {

class BadSpec : public Error {
 public:
  using Error::Error;
};

enum class GeneratorKind { antichain, chain, layered, random_order, diamond_mesh };

std::string to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& text);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::antichain;
  int n = 0;
  int m = 1;
  std::uint64_t seed = 0;
  // layered: n must equal layers * width; 0 derives n.
  int layers = 0;
  int width = 0;
  // layered and random_order
  double edge_prob = 0.5;
  // diamond_mesh: a depth x depth grid, n = depth^2 (0 derives n).
  int depth = 0;
};

/// Same spec, same instance. Layered instances have base edges only between
/// consecutive layers, with ids in layer-major order. random_order draws
/// each pair of a random total order with probability edge_prob.
Instance generate(const GeneratorSpec& spec);

/// Short, stable name such as "layered-3x2-p0.5-m2-s7".
std::string spec_name(const GeneratorSpec& spec);

/// The fixed corpus used by bench, audit and the acceptance suite: every
/// generator kind over m in {1, 2, 3}, n <= 14.
std::vector<std::pair<std::string, GeneratorSpec>> standard_corpus();

}  // namespace usched

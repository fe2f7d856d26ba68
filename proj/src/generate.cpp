#include "usched/generate.hpp"

#include <cstdio>
#include <numeric>

#include "usched/rng.hpp"

namespace usched {

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::antichain: return "antichain";
    case GeneratorKind::chain: return "chain";
    case GeneratorKind::layered: return "layered";
    case GeneratorKind::random_order: return "random_order";
    case GeneratorKind::diamond_mesh: return "diamond_mesh";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& text) {
  for (auto kind : {GeneratorKind::antichain, GeneratorKind::chain, GeneratorKind::layered,
                    GeneratorKind::random_order, GeneratorKind::diamond_mesh}) {
    if (to_string(kind) == text) return kind;
  }
  throw BadSpec("unknown generator kind '" + text + "'");
}

Instance generate(const GeneratorSpec& spec) {
  if (spec.m < 1) throw BadSpec("machine count must be at least 1");
  if (spec.n < 0) throw BadSpec("job count must be non-negative");
  if (!(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
    throw BadSpec("edge probability must lie in [0, 1]");
  }
  Rng rng(spec.seed);
  std::vector<Edge> edges;
  int n = spec.n;

  switch (spec.kind) {
    case GeneratorKind::antichain:
      break;
    case GeneratorKind::chain:
      for (JobId j = 0; j + 1 < n; ++j) edges.push_back({j, j + 1});
      break;
    case GeneratorKind::layered: {
      if (spec.layers < 1 || spec.width < 1) throw BadSpec("layered needs layers, width >= 1");
      if (n == 0) n = spec.layers * spec.width;
      if (n != spec.layers * spec.width) {
        throw BadSpec("layered: n must equal layers * width");
      }
      for (int l = 0; l + 1 < spec.layers; ++l) {
        for (int a = 0; a < spec.width; ++a) {
          for (int b = 0; b < spec.width; ++b) {
            if (rng.bernoulli(spec.edge_prob)) {
              edges.push_back({l * spec.width + a, (l + 1) * spec.width + b});
            }
          }
        }
      }
      break;
    }
    case GeneratorKind::random_order: {
      std::vector<JobId> label(n);
      std::iota(label.begin(), label.end(), 0);
      rng.shuffle(std::span<JobId>(label));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (rng.bernoulli(spec.edge_prob)) edges.push_back({label[i], label[j]});
        }
      }
      break;
    }
    case GeneratorKind::diamond_mesh: {
      if (spec.depth < 1) throw BadSpec("diamond_mesh needs depth >= 1");
      if (n == 0) n = spec.depth * spec.depth;
      if (n != spec.depth * spec.depth) throw BadSpec("diamond_mesh: n must equal depth^2");
      const int d = spec.depth;
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          if (r + 1 < d) edges.push_back({r * d + c, (r + 1) * d + c});
          if (c + 1 < d) edges.push_back({r * d + c, r * d + c + 1});
        }
      }
      break;
    }
  }
  return Instance::build(n, spec.m, edges);
}

std::string spec_name(const GeneratorSpec& spec) {
  char prob[32];
  std::snprintf(prob, sizeof prob, "%g", spec.edge_prob);
  std::string name = to_string(spec.kind);
  switch (spec.kind) {
    case GeneratorKind::layered:
      name += "-" + std::to_string(spec.layers) + "x" + std::to_string(spec.width) + "-p" + prob;
      break;
    case GeneratorKind::random_order:
      name += "-n" + std::to_string(spec.n) + "-p" + prob;
      break;
    case GeneratorKind::diamond_mesh:
      name += "-d" + std::to_string(spec.depth);
      break;
    default:
      name += "-n" + std::to_string(spec.n);
  }
  return name + "-m" + std::to_string(spec.m) + "-s" + std::to_string(spec.seed);
}

std::vector<std::pair<std::string, GeneratorSpec>> standard_corpus() {
  std::vector<GeneratorSpec> specs;
  for (int m = 1; m <= 3; ++m) {
    specs.push_back({GeneratorKind::antichain, 3 * m + 1, m, 1});
    specs.push_back({GeneratorKind::chain, 4 + m, m, 1});
    specs.push_back({GeneratorKind::diamond_mesh, 0, m, 1, 0, 0, 0.5, 3});
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      specs.push_back({GeneratorKind::layered, 0, m, seed, 3, m + 1, 0.5});
      specs.push_back({GeneratorKind::layered, 0, m, seed, 4, 3, 0.4});
    }
    for (int n : {6, 8, 10, 12, 14}) {
      specs.push_back({GeneratorKind::random_order, n, m, static_cast<std::uint64_t>(n + m),
                       0, 0, n <= 8 ? 0.3 : 0.2});
    }
  }
  std::vector<std::pair<std::string, GeneratorSpec>> out;
  for (const auto& spec : specs) out.emplace_back(spec_name(spec), spec);
  return out;
}

}  // namespace usched

#pragma once

#include <string>
#include <string_view>

#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/layout.hpp"
#include "cq/layouts/force.hpp"
#include "cq/layouts/spectral.hpp"
#include "cq/layouts/stress.hpp"
#include "cq/random.hpp"

namespace cq {

enum class Algorithm { random, fr, linlog, stress, mds, spectral };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::random: return "random";
    case Algorithm::fr: return "fr";
    case Algorithm::linlog: return "linlog";
    case Algorithm::stress: return "stress";
    case Algorithm::mds: return "mds";
    case Algorithm::spectral: return "spectral";
  }
  return "?";
}

inline constexpr Algorithm kBuiltinAlgorithms[] = {Algorithm::fr,  Algorithm::linlog,   Algorithm::stress,
                                                   Algorithm::mds, Algorithm::spectral, Algorithm::random};

inline std::optional<Algorithm> find_algorithm(std::string_view name) {
  for (Algorithm a : kBuiltinAlgorithms)
    if (name == to_string(a)) return a;
  if (name == "classical-mds" || name == "cmds") return Algorithm::mds;
  if (name == "fruchterman-reingold") return Algorithm::fr;
  return std::nullopt;
}

inline Algorithm parse_algorithm(std::string_view name) {
  if (auto a = find_algorithm(name)) return *a;
  throw InvalidArgument("unknown layout algorithm '" + std::string(name) + "'");
}

/// Runs one built-in algorithm with an engine seeded from cfg.seed.
inline Layout compute_layout(Algorithm a, const Graph& g, const LayoutConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  switch (a) {
    case Algorithm::random: return layout_random(g, rng);
    case Algorithm::fr: return layout_fr(g, cfg, rng);
    case Algorithm::linlog: return layout_linlog(g, cfg, rng);
    case Algorithm::stress: return layout_stress(g, bfs_all_pairs(g), cfg, rng);
    case Algorithm::mds: return layout_classical_mds(g, bfs_all_pairs(g), cfg);
    case Algorithm::spectral: return layout_spectral(g, cfg);
  }
  throw InvalidArgument("unhandled layout algorithm");
}

}  // namespace cq

// Text renderings of tableaux and Venn-region maps for up to three atoms.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tableaux/formula.hpp"
#include "tableaux/tableau.hpp"

namespace tableaux {

/// Single-child chains stay in one column; β splits draw as a tree. Leaves
/// carry their number, closed leaves a trailing ×.
std::string renderAscii(const Tableau& t);

std::string renderDot(const Tableau& t);

class TooManyAtoms : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxVennAtoms = 3;

struct VennRegionMap {
  std::vector<std::string> atoms;
  /// Key bit i set iff atom i is true in the region.
  std::map<std::uint32_t, bool> regions;
};

VennRegionMap vennRegions(const Formula& f);

/// {"atoms":[...],"regions":{"0":false,...}}
nlohmann::json toJson(const VennRegionMap& venn);

}  // namespace tableaux

#pragma once

#include "lognabla/logconn.hpp"

#include <string>
#include <vector>

namespace lognabla {

struct FixtureInfo {
  std::string name;
  std::string description;
};

std::vector<FixtureInfo> fixture_catalog();

// Named univariate module on the closed unit disc, or on the annulus
// [p^-1, 1] with the suffix "@annulus". "M:<rational>" gives M_xi.
LogNablaModule fixture(const std::string& name, const PadicContext& ctx);

}  // namespace lognabla

#pragma once

#include "graphent/error.hpp"
#include "graphent/numeric.hpp"
#include "graphent/graph.hpp"
#include "graphent/window.hpp"
#include "graphent/families.hpp"
#include "graphent/path_count.hpp"
#include "graphent/entropy.hpp"
#include "graphent/af_algebra.hpp"

namespace graphent {
inline constexpr const char* kVersion = "0.1.0";
}

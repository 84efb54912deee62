#pragma once

#include <string>

#include "hetinf/bn.hpp"

namespace hetinf {

/// Parse a BIF 0.3 document with discrete variables. Variable order is
/// declaration order; rows are keyed by parent states (or given flat via
/// `table`, last parent varying fastest). Rows within 1e-6 of summing to 1
/// are renormalized; anything further off is an error.
BayesianNetwork parse_bif(const std::string& text);

BayesianNetwork parse_bif_file(const std::string& path);

/// Canonical BIF serialization; parse_bif(write_bif(net)) == net.
std::string write_bif(const BayesianNetwork& net);

}  // namespace hetinf

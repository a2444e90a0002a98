#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace ccsat {

/// Exact non-negative counts. Break-counts over the subset expansion of a
/// c-atom are binomial-sized and must not saturate.
using UnboundedCount = boost::multiprecision::cpp_int;

/// C(n, k), zero when k < 0 or k > n.
UnboundedCount binomial(std::int64_t n, std::int64_t k);

} // namespace ccsat

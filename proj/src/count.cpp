#include "ccsat/count.hpp"

#include <algorithm>

namespace ccsat {

UnboundedCount binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n)
    return 0;
  k = std::min(k, n - k);
  UnboundedCount r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

} // namespace ccsat

#pragma once

#include <cstddef>
#include <string>

#include "rvns/random.hpp"
#include "rvns/types.hpp"

namespace rvns {

// n chi-squared(df) draws restricted to [a, b] by rejection (out-of-range
// draws are redrawn, so the result follows the truncated distribution).
Dataset generate_chi_squared(int df, std::size_t n, const DataRange& range,
                             Rng& rng);

struct LoadResult {
  Dataset data;
  std::size_t rows_total = 0;     // data rows seen (excluding the header)
  std::size_t rows_retained = 0;  // parseable rows inside [a, b]
};

// Reads the named column from a CSV with a header row; drops rows that are
// missing, unparseable, or outside [a, b].
LoadResult load_csv(const std::string& path, const std::string& value_column,
                    const DataRange& range);

}  // namespace rvns

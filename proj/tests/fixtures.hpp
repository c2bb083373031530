#pragma once

#include <vector>

#include "shn/patterns.hpp"

namespace shn::testing {

// N = 6, P = 3 worked example (vertex labels 1..6 map to 0..5).
inline PatternSet worked_example_patterns() {
  return PatternSet(3, 6,
                    {-1, +1, -1, +1, -1, +1,  //
                     +1, -1, +1, -1, -1, +1,  //
                     -1, -1, -1, +1, +1, +1},
                    PatternKind::Binary);
}

inline const std::vector<double> kWorkedExampleState{+1, +1, -1, +1, -1, -1};

}  // namespace shn::testing

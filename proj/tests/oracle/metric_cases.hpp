#pragma once

#include <vector>

#include "denot/nn/metrics.hpp"

namespace oracle {

struct MetricCase {
  std::vector<int> predicted, actual;
  denot::nn::Confusion expected;
  double f1, accuracy;
};

// Confusion counts and scores worked out by hand.
inline const std::vector<MetricCase> kCases = {
    {{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 1, 1, 1}, 2.0 / 4.0, 2.0 / 4.0},
    {{1, 1, 1, 1}, {1, 1, 1, 1}, {4, 0, 0, 0}, 1.0, 1.0},
    {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 4, 0}, 0.0, 1.0},  // zero denominator
    {{0, 0, 0}, {1, 1, 1}, {0, 0, 0, 3}, 0.0, 0.0},
    {{1, 1, 1}, {0, 0, 0}, {0, 3, 0, 0}, 0.0, 0.0},
    {{1, 0, 1, 0, 1}, {1, 0, 0, 0, 1}, {2, 1, 2, 0}, 4.0 / 5.0, 4.0 / 5.0},
    {{1, 1, 0, 0, 0, 0}, {1, 1, 1, 1, 0, 0}, {2, 0, 2, 2}, 4.0 / 6.0, 4.0 / 6.0},
    {{1}, {1}, {1, 0, 0, 0}, 1.0, 1.0},
    {{0}, {1}, {0, 0, 0, 1}, 0.0, 0.0},
    {{1}, {0}, {0, 1, 0, 0}, 0.0, 0.0},
    {{0}, {0}, {0, 0, 1, 0}, 0.0, 1.0},
    {{1, 1, 1, 0, 0, 0, 0, 0}, {1, 0, 0, 1, 0, 0, 0, 0}, {1, 2, 4, 1}, 2.0 / 5.0, 5.0 / 8.0},
    {{1, 0, 1, 0, 1, 0, 1, 0, 1, 0}, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0}, {3, 2, 3, 2}, 6.0 / 10.0, 6.0 / 10.0},
    {{1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 0, 0, 0, 0, 0, 0, 0}, {3, 7, 0, 0}, 6.0 / 13.0, 3.0 / 10.0},
    {{0, 0, 0, 0, 0, 0, 0, 0, 0, 1}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, {1, 0, 0, 9}, 2.0 / 11.0, 1.0 / 10.0},
    {{1, 1, 0}, {1, 1, 0}, {2, 0, 1, 0}, 1.0, 1.0},
    {{0, 1, 1, 0}, {1, 0, 0, 1}, {0, 2, 0, 2}, 0.0, 0.0},
    {{1, 1, 1, 1, 0}, {1, 1, 1, 0, 1}, {3, 1, 0, 1}, 6.0 / 8.0, 3.0 / 5.0},
    {{1, 0, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0, 1}, {1, 0, 5, 1}, 2.0 / 3.0, 6.0 / 7.0},
    {{1, 1, 0, 1, 0, 1, 1, 0, 1}, {1, 0, 0, 1, 1, 1, 0, 0, 1}, {4, 2, 2, 1}, 8.0 / 11.0, 6.0 / 9.0},
};

}  // namespace oracle

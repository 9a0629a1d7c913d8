#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qarecall/spin.hpp"

namespace qarecall {

struct OutcomeCount {
    SpinVector state;
    std::size_t count = 0;
};

// Sorted by state.
using OutcomeCounts = std::vector<OutcomeCount>;

// Columns: state, count.
std::string outcomes_csv(const OutcomeCounts& counts);

} // namespace qarecall

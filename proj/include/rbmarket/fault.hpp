#pragma once

#include <stdexcept>
#include <string>

namespace rbmarket {

// Thrown when a learning update produces a non-finite loss or parameter.
class TrainingFault : public std::runtime_error {
  public:
    explicit TrainingFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rbmarket

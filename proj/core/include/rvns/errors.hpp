#pragma once

#include <stdexcept>
#include <string>

namespace rvns {

// File could not be opened/read or a required column is missing.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// An ingest produced no usable rows.
class empty_dataset_error : public std::runtime_error {
 public:
  explicit empty_dataset_error(const std::string& what)
      : std::runtime_error(what) {}
};

// The constraint set of the reconstruction problem is empty, e.g. the box
// bound caps the total area below the required unit mass.
class infeasible_problem_error : public std::runtime_error {
 public:
  explicit infeasible_problem_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace rvns

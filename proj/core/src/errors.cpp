#include "kresling/errors.hpp"

#include <utility>

namespace kresling {

DomainError::DomainError(const std::string& what, double lo, double hi)
    : Error(what), lo_(lo), hi_(hi) {}

RangeError::RangeError(const std::string& what, double lo, double hi,
                       std::optional<std::size_t> segment)
    : Error(what), lo_(lo), hi_(hi), segment_(segment) {}

SolverError::SolverError(const std::string& what, std::vector<double> last_iterate,
                         std::optional<std::size_t> step_index)
    : Error(what), last_(std::move(last_iterate)), step_(step_index) {}

}  // namespace kresling

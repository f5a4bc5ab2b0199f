#include "rydpulse/error.hpp"

namespace rydpulse {

namespace {
std::string join(const std::vector<Violation> &violations) {
  std::string out;
  for (const auto &v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out.empty() ? "validation failed" : out;
}
} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(join(violations)), violations_(std::move(violations)) {}

ValidationError::ValidationError(std::string constraint, std::string message)
    : ValidationError(std::vector<Violation>{{std::move(constraint), std::move(message)}}) {}

} // namespace rydpulse

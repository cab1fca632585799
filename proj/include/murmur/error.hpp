#pragma once

#include <stdexcept>
#include <string>

namespace murmur {

/// Library error carrying a short machine-readable code (e.g. "empty_dataset")
/// alongside the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* singular_curve = "singular_curve";
inline constexpr const char* precondition = "precondition";
inline constexpr const char* corpus_parse = "corpus_parse";
inline constexpr const char* duplicate_label = "duplicate_label";
inline constexpr const char* empty_dataset = "empty_dataset";
inline constexpr const char* zero_variance = "zero_variance";
inline constexpr const char* dimension_mismatch = "dimension_mismatch";
inline constexpr const char* single_class = "single_class";
inline constexpr const char* diverged = "diverged";
inline constexpr const char* io = "io";
inline constexpr const char* usage = "usage";
}  // namespace errc

}  // namespace murmur

#ifndef HOLONET_ERROR_HPP
#define HOLONET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace holonet {

// All library errors carry a stable machine-readable code ("leg-not-found",
// "dimension-mismatch", ...) next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void raise(const std::string& code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& code, const std::string& what) {
  if (!cond) raise(code, what);
}

}  // namespace holonet

#endif  // HOLONET_ERROR_HPP

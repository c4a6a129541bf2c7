#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rgraph {

// Every failure raised by the library carries the module it came from and a
// stable machine-readable code (e.g. "ZeroColumn", "NotConverged").
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string code, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)), code_(std::move(code)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& code() const noexcept { return code_; }

 private:
  std::string module_;
  std::string code_;
};

}  // namespace rgraph

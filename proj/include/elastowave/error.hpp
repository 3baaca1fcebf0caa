#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elastowave {

enum class Errc {
  invalid_grid,
  shape,
  unsupported_symbol,
  invalid_exponent,
  accuracy,
  unsupported_order,
  out_of_domain,
  stiffness,
  insufficient_samples,
  divergence,
  config,
  no_contraction,
  range,
  unsupported_combination,
  domain,
  window,
  unsupported_norm,
  degenerate_input,
  fit,
  io,
  usage,
};

std::string_view to_string(Errc code);

/// Every failure raised by the toolkit carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace elastowave

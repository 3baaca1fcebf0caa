#include "elastowave/error.hpp"

namespace elastowave {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_grid: return "invalid-grid";
    case Errc::shape: return "shape";
    case Errc::unsupported_symbol: return "unsupported-symbol";
    case Errc::invalid_exponent: return "invalid-exponent";
    case Errc::accuracy: return "accuracy";
    case Errc::unsupported_order: return "unsupported-order";
    case Errc::out_of_domain: return "out-of-domain";
    case Errc::stiffness: return "stiffness";
    case Errc::insufficient_samples: return "insufficient-samples";
    case Errc::divergence: return "divergence";
    case Errc::config: return "config";
    case Errc::no_contraction: return "no-contraction";
    case Errc::range: return "range";
    case Errc::unsupported_combination: return "unsupported-combination";
    case Errc::domain: return "domain";
    case Errc::window: return "window";
    case Errc::unsupported_norm: return "unsupported-norm";
    case Errc::degenerate_input: return "degenerate-input";
    case Errc::fit: return "fit";
    case Errc::io: return "io";
    case Errc::usage: return "usage";
  }
  return "unknown";
}

}  // namespace elastowave

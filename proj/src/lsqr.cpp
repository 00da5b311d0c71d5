#include "hwr/lsqr.hpp"

namespace hwr {

void SolveOptions::validate() const {
  if (!(atol > 0.0 && atol < 1.0) || !(btol > 0.0 && btol < 1.0))
    throw Error(Errc::InvalidArgument, "solver tolerances must lie in (0, 1)");
  if (max_iter < 1) throw Error(Errc::InvalidArgument, "max_iter must be at least 1");
  if (!(damp >= 0.0) || !std::isfinite(damp)) throw Error(Errc::InvalidArgument, "damp must be a finite nonnegative number");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIter: return "max_iter";
    case StopReason::Breakdown: return "breakdown";
  }
  return "unknown";
}

}  // namespace hwr

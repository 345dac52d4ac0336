#include "isostrata/options.hpp"

#include <cmath>

namespace isostrata {

bool Options::set(const std::string& name, double value) {
  auto as_int = [&](int& field) { field = static_cast<int>(std::lround(value)); };
  if (name == "flow_tol") flow_tol = value;
  else if (name == "max_iter") as_int(max_iter);
  else if (name == "armijo") armijo = value;
  else if (name == "contraction") contraction = value;
  else if (name == "null_rel") null_rel = value;
  else if (name == "null_floor") null_floor = value;
  else if (name == "iso_tol") iso_tol = value;
  else if (name == "conj_tol") conj_tol = value;
  else if (name == "starts") as_int(starts);
  else if (name == "subspace_tol") subspace_tol = value;
  else if (name == "transport_tol") transport_tol = value;
  else if (name == "open_fraction") open_fraction = value;
  else if (name == "wall_tol") wall_tol = value;
  else if (name == "slice_tol") slice_tol = value;
  else if (name == "slice_samples") as_int(slice_samples);
  else if (name == "seed") seed = static_cast<std::uint64_t>(value);
  else return false;
  return true;
}

std::map<std::string, double> Options::as_map() const {
  return {
      {"armijo", armijo},
      {"conj_tol", conj_tol},
      {"contraction", contraction},
      {"flow_tol", flow_tol},
      {"iso_tol", iso_tol},
      {"max_iter", static_cast<double>(max_iter)},
      {"null_floor", null_floor},
      {"null_rel", null_rel},
      {"open_fraction", open_fraction},
      {"seed", static_cast<double>(seed)},
      {"slice_samples", static_cast<double>(slice_samples)},
      {"slice_tol", slice_tol},
      {"starts", static_cast<double>(starts)},
      {"subspace_tol", subspace_tol},
      {"transport_tol", transport_tol},
      {"wall_tol", wall_tol},
  };
}

}  // namespace isostrata

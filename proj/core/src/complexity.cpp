#include "nagmcmc/complexity.hpp"

#include <cmath>

namespace nagmcmc {

ComplexityModel complexity_model_from_string(const std::string& name) {
  if (name == "mmse") return ComplexityModel::mmse;
  if (name == "ep") return ComplexityModel::ep;
  if (name == "mhgd") return ComplexityModel::mhgd;
  if (name == "nag-mcmc") return ComplexityModel::nag_mcmc;
  if (name == "nag-mcmc-sa-es") return ComplexityModel::nag_mcmc_sa_es;
  throw UnknownAlgorithm("unknown complexity model: " + name);
}

std::string to_string(ComplexityModel m) {
  switch (m) {
    case ComplexityModel::mmse: return "mmse";
    case ComplexityModel::ep: return "ep";
    case ComplexityModel::mhgd: return "mhgd";
    case ComplexityModel::nag_mcmc: return "nag-mcmc";
    case ComplexityModel::nag_mcmc_sa_es: return "nag-mcmc-sa-es";
  }
  return "?";
}

std::int64_t closed_form_mults(ComplexityModel m, std::size_t n_dim, int mod_order,
                               int samplers, double iterations, int gd_per_walk,
                               int ep_iterations) {
  const double n = static_cast<double>(n_dim);
  const double mm = static_cast<double>(mod_order);
  const double p = static_cast<double>(samplers);
  const double s = iterations;
  const double ng = static_cast<double>(gd_per_walk);
  const double t = static_cast<double>(ep_iterations);

  double v = 0.0;
  switch (m) {
    case ComplexityModel::mmse:
      v = 3 * n * n * n + 2 * n * n + 2 * n;
      break;
    case ComplexityModel::ep:
      v = (2 * n * n * n + n * n + (2 * mm + 13) * n) * t + n * n * n + 2 * n * n + n;
      break;
    case ComplexityModel::mhgd:
      v = (6 * n * n + (mm + 5) * n) * p * s + 23.0 / 3.0 * n * n * n +
          (mm + 2) * n * n + 7 * n;
      break;
    case ComplexityModel::nag_mcmc:
      v = ((ng + 1) * n * n + (mm + 2 * ng + 2) * n) * p * s + (mm + 1) * n * p +
          11.0 / 3.0 * n * n * n + (mm + 2) * n * n + 2 * n;
      break;
    case ComplexityModel::nag_mcmc_sa_es:
      v = ((ng + 1) * n * n + ((mm + 3) * ng + 1) * n) * p * s + (mm + 1) * n * p +
          11.0 / 3.0 * n * n * n + (mm + 2) * n * n + 2 * n;
      break;
  }
  return static_cast<std::int64_t>(std::llround(v));
}

}  // namespace nagmcmc

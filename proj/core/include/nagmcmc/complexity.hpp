#pragma once

#include <cstdint>
#include <string>

#include "nagmcmc/errors.hpp"

namespace nagmcmc {

// Closed-form complex-multiplication counts per detected symbol vector,
// N_t = N_r = N. EP and MHGD are evaluated for reporting parity only.
enum class ComplexityModel { mmse, ep, mhgd, nag_mcmc, nag_mcmc_sa_es };

ComplexityModel complexity_model_from_string(const std::string& name);
std::string to_string(ComplexityModel m);

// iterations is S (or the average S_a under early stopping); fractional
// terms are rounded once, at the end.
std::int64_t closed_form_mults(ComplexityModel m, std::size_t n, int mod_order,
                               int samplers, double iterations, int gd_per_walk,
                               int ep_iterations = 10);

}  // namespace nagmcmc

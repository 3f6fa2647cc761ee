#ifndef FRACLAP_FRACLAP_HPP
#define FRACLAP_FRACLAP_HPP

// Umbrella header.  config.hpp and report.hpp are not included here because
// they pull in the vendored JSON dependency; include them directly where
// report files are read or written.

#include "fraclap/embedding.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/field.hpp"
#include "fraclap/fieldspec.hpp"
#include "fraclap/gauss.hpp"
#include "fraclap/geometry.hpp"
#include "fraclap/kernels.hpp"
#include "fraclap/params.hpp"
#include "fraclap/potentials.hpp"
#include "fraclap/properties.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/solver.hpp"
#include "fraclap/special.hpp"
#include "fraclap/sphere.hpp"
#include "fraclap/weighted_norms.hpp"

#endif  // FRACLAP_FRACLAP_HPP

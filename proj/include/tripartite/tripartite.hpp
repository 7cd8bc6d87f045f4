#pragma once

#include "tripartite/errors.hpp"
#include "tripartite/specfun.hpp"
#include "tripartite/oscillator_model.hpp"
#include "tripartite/schmidt_core.hpp"
#include "tripartite/entanglement.hpp"
#include "tripartite/quadrature.hpp"
#include "tripartite/document.hpp"
#include "tripartite/surface.hpp"
#include "tripartite/verify.hpp"

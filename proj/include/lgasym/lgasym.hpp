#pragma once

// Umbrella header for the whole library.

#include "lgasym/errors.hpp"
#include "lgasym/log.hpp"
#include "lgasym/expr.hpp"
#include "lgasym/quadrature.hpp"
#include "lgasym/transform.hpp"
#include "lgasym/volterra.hpp"
#include "lgasym/certificate.hpp"
#include "lgasym/oracle.hpp"
#include "lgasym/analysis.hpp"
#include "lgasym/validation.hpp"
#include "lgasym/report.hpp"

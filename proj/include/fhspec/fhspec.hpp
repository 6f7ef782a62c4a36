#pragma once

#include "fhspec/errors.hpp"
#include "fhspec/specfun.hpp"
#include "fhspec/quadrature.hpp"
#include "fhspec/symbol.hpp"
#include "fhspec/power.hpp"
#include "fhspec/toeplitz.hpp"
#include "fhspec/kernelop.hpp"

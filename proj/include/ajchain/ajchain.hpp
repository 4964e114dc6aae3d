#pragma once

#include "ajchain/chain.hpp"
#include "ajchain/errors.hpp"
#include "ajchain/factorization.hpp"
#include "ajchain/jacobi_rule.hpp"
#include "ajchain/matrix.hpp"
#include "ajchain/polynomials.hpp"
#include "ajchain/quadrature.hpp"
#include "ajchain/simulate.hpp"
#include "ajchain/specfun.hpp"
#include "ajchain/spectral.hpp"
